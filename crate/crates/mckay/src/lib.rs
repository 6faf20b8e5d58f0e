//! Exact curve-counting arithmetic for ADE McKay quivers.
//!
//! The crate builds the affine and finite root systems of the simply laced
//! families, the associated McKay quivers with superpotential, and the wall
//! and chamber structure on stability space. On top of that it evaluates
//! Donaldson-Thomas style partition functions as truncated multivariate
//! power series with exact integer coefficients, entirely from the
//! wall-crossing product formula, and cross-checks them: the stable pairs
//! series against the Gromov-Witten series under the standard change of
//! variables, the noncommutative series against the crepant resolution
//! identity, and the genus-zero BPS numbers against the positive roots.
//!
//! Everything is exact: `BigInt`/`BigRational` coefficients, rational
//! stability parameters with optional infinitesimal perturbations, and
//! truncation windows fixed up front.
//!
//! A quick tour:
//!
//! ```
//! use mckay::{check_crepant, z_ncdt, DynkinLabel};
//!
//! let label: DynkinLabel = "A2".parse().unwrap();
//! let z = z_ncdt(label, 6).unwrap();
//! assert!(z.assumed_dt_pt);
//! assert!(check_crepant(label, 6).unwrap().pass);
//! ```

pub mod error;
pub mod invariants;
pub mod quiver_stability;
pub mod root_systems;
pub mod series;

pub use error::{Error, Result};
pub use invariants::{
    bps_extract, chamber_partition_function, check_crepant, check_gw_pt, compare_series,
    gw_context, gw_factors, q_context, verify_d5_example, wall_crossing_factor, wall_factor,
    z_dt, z_gw, z_ncdt, z_pt, BpsTable, ChamberResult, CheckReport, D5Report, Mismatch,
    PartitionKind,
};
pub use quiver_stability::{
    crossed_walls, dimension_of_exponent, dt_invariant_indexing, framed_mckay_quiver,
    mckay_quiver, solve_zeta_infinity, split_real_roots, theta_slope, walls, zeta_imaginary,
    zeta_imaginary_perturbed, Arrow, ArrowKind, QuiverData, StabilityParameter,
    SuperpotentialTerm, Vertex, Wall, WallKind,
};
pub use root_systems::{
    affine_positive_real_roots, bilinear_form, build_diagram, classify_vector,
    finite_positive_roots, imaginary_root, pairing_doubled, quadratic_form, reflect,
    AffineRealRoot, Classification, DynkinGraph, DynkinLabel, Family, RootVector, Sign,
};
pub use series::{
    expand_factor, macmahon_power, Coeff, Exponent, FactorSpec, MultiSeries, SeriesContext,
    VarImage,
};
