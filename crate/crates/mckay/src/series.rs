//! Truncated multivariate power series with exact coefficients.
//!
//! A series lives in a [`SeriesContext`] fixing the variable names and the
//! truncation order: every monomial of total degree beyond the order is
//! discarded, so all ring operations are exact on the retained window.
//! Exponents are nonnegative throughout; substitutions may use negative
//! matrix entries but must land every retained term back in the nonnegative
//! cone.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::root_systems::Sign;

/// Exact coefficient rings the series engine works over.
pub trait Coeff:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
{
    fn from_bigint(b: &BigInt) -> Self;
    /// Inverse of `Display`; used by the JSON reader.
    fn parse_str(s: &str) -> Option<Self>;
}

impl Coeff for BigInt {
    fn from_bigint(b: &BigInt) -> Self {
        b.clone()
    }

    fn parse_str(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl Coeff for BigRational {
    fn from_bigint(b: &BigInt) -> Self {
        BigRational::from_integer(b.clone())
    }

    fn parse_str(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

/// Variable names plus truncation order; shared by every series built over it.
///
/// Two contexts are interchangeable exactly when they compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesContext {
    vars: Vec<String>,
    order: u32,
}

impl SeriesContext {
    pub fn new(vars: Vec<String>, order: u32) -> Result<Arc<Self>> {
        if vars.is_empty() {
            return Err(Error::InvalidArgument(
                "a series context needs at least one variable".to_string(),
            ));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidArgument("empty variable name".to_string()));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Arc::new(SeriesContext { vars, order }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

fn check_same_context(a: &SeriesContext, b: &SeriesContext) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch(format!(
            "{:?} at order {} vs {:?} at order {}",
            a.vars, a.order, b.vars, b.order
        )));
    }
    Ok(())
}

/// A monomial exponent. Ordered by total degree, then lexicographically,
/// which makes "all exponents of total degree <= k" a prefix of the order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(len: usize) -> Self {
        Exponent(vec![0; len])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    fn plus(&self, other: &Self) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Smallest exponent of the given total degree; used as a range sentinel.
    fn first_of_degree(len: usize, degree: u32) -> Self {
        let mut v = vec![0; len];
        if len > 0 {
            v[len - 1] = degree;
        }
        Exponent(v)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A truncated power series over the coefficient ring `C`.
///
/// Zero coefficients are never stored, and every stored exponent has total
/// degree at most the context order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries<C: Coeff> {
    ctx: Arc<SeriesContext>,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> MultiSeries<C> {
    pub fn zero(ctx: &Arc<SeriesContext>) -> Self {
        MultiSeries {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<SeriesContext>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Exponent::zero(ctx.var_count()), C::one());
        MultiSeries {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    /// A single term `coeff * x^exponents`. Terms beyond the truncation
    /// order quietly collapse to zero; negative exponents are an error.
    pub fn monomial(ctx: &Arc<SeriesContext>, exponents: &[i64], coeff: C) -> Result<Self> {
        if exponents.len() != ctx.var_count() {
            return Err(Error::DimensionMismatch {
                expected: ctx.var_count(),
                got: exponents.len(),
            });
        }
        if exponents.iter().any(|&e| e < 0) {
            return Err(Error::NegativeExponent(format!("{exponents:?}")));
        }
        let mut s = MultiSeries::zero(ctx);
        let expo = Exponent(exponents.iter().map(|&e| e as u32).collect());
        if expo.total() <= u64::from(ctx.order()) && !coeff.is_zero() {
            s.terms.insert(expo, coeff);
        }
        Ok(s)
    }

    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Exponent::zero(self.ctx.var_count()))
                .is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in (total degree, lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Exponent::zero(self.ctx.var_count()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// The coefficient of `x^exponents`; asking beyond the truncation order
    /// is an error because that coefficient was never computed.
    pub fn coefficient(&self, exponents: &[u32]) -> Result<C> {
        if exponents.len() != self.ctx.var_count() {
            return Err(Error::DimensionMismatch {
                expected: self.ctx.var_count(),
                got: exponents.len(),
            });
        }
        let expo = Exponent(exponents.to_vec());
        if expo.total() > u64::from(self.ctx.order()) {
            return Err(Error::CoefficientOutOfRange {
                exponent: format!("{exponents:?}"),
                order: self.ctx.order() as usize,
            });
        }
        Ok(self.terms.get(&expo).cloned().unwrap_or_else(C::zero))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_context(&self.ctx, &other.ctx)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(acc) => {
                    let sum = acc.clone() + c.clone();
                    if sum.is_zero() {
                        terms.remove(e);
                    } else {
                        *acc = sum;
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(MultiSeries {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    pub fn neg(&self) -> Self {
        MultiSeries {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return MultiSeries::zero(&self.ctx);
        }
        MultiSeries {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same_context(&self.ctx, &other.ctx)?;
        let order = u64::from(self.ctx.order());
        let n = self.ctx.var_count();
        let mut terms: BTreeMap<Exponent, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let budget = order - ea.total();
            // All exponents of total degree <= budget form a prefix.
            let end = Exponent::first_of_degree(n, budget as u32 + 1);
            for (eb, cb) in other
                .terms
                .range((Bound::Unbounded, Bound::Excluded(end)))
            {
                let e = ea.plus(eb);
                let prod = ca.clone() * cb.clone();
                match terms.get_mut(&e) {
                    Some(acc) => {
                        let sum = acc.clone() + prod;
                        if sum.is_zero() {
                            terms.remove(&e);
                        } else {
                            *acc = sum;
                        }
                    }
                    None => {
                        if !prod.is_zero() {
                            terms.insert(e, prod);
                        }
                    }
                }
            }
        }
        Ok(MultiSeries {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    /// Repeated multiplication by squaring.
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut result = MultiSeries::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Applies `x_i -> sign_i * prod_k y_k^(M_ik)` termwise into the target
    /// context. Every retained source term must map into the nonnegative
    /// cone; terms beyond the target order are truncated away.
    pub fn substitute(
        &self,
        images: &[VarImage],
        target: &Arc<SeriesContext>,
    ) -> Result<MultiSeries<C>> {
        if images.len() != self.ctx.var_count() {
            return Err(Error::DimensionMismatch {
                expected: self.ctx.var_count(),
                got: images.len(),
            });
        }
        for im in images {
            if im.exponents.len() != target.var_count() {
                return Err(Error::DimensionMismatch {
                    expected: target.var_count(),
                    got: im.exponents.len(),
                });
            }
        }
        let m = target.var_count();
        let mut terms: BTreeMap<Exponent, C> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut image = vec![0i64; m];
            let mut flip = false;
            for (i, im) in images.iter().enumerate() {
                let ei = i64::from(e.entries()[i]);
                if ei == 0 {
                    continue;
                }
                for (slot, &exp) in image.iter_mut().zip(&im.exponents) {
                    *slot += ei * exp;
                }
                if im.sign == Sign::Minus && ei % 2 == 1 {
                    flip = !flip;
                }
            }
            if image.iter().any(|&x| x < 0) {
                return Err(Error::SubstitutionDomain {
                    term: format!("{:?}", e.entries()),
                    image: format!("{image:?}"),
                });
            }
            let total: i64 = image.iter().sum();
            if total > i64::from(target.order()) {
                continue;
            }
            let expo = Exponent(image.iter().map(|&x| x as u32).collect());
            let coeff = if flip { -c.clone() } else { c.clone() };
            match terms.get_mut(&expo) {
                Some(acc) => {
                    let sum = acc.clone() + coeff;
                    if sum.is_zero() {
                        terms.remove(&expo);
                    } else {
                        *acc = sum;
                    }
                }
                None => {
                    terms.insert(expo, coeff);
                }
            }
        }
        Ok(MultiSeries {
            ctx: Arc::clone(target),
            terms,
        })
    }

    /// Relabels variables: coordinate `i` of every exponent moves to
    /// coordinate `perm[i]`. The context is unchanged, so `perm` must be a
    /// permutation of `0..var_count`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Self> {
        let n = self.ctx.var_count();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        let images: Vec<VarImage> = perm
            .iter()
            .map(|&p| {
                let mut exps = vec![0i64; n];
                exps[p] = 1;
                VarImage::new(Sign::Plus, exps)
            })
            .collect();
        self.substitute(&images, &self.ctx)
    }

    /// Serializes as `{"vars": [...], "order": n, "terms": [[[e...], "c"], ...]}`
    /// with terms in (total degree, lex) order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!([e.entries(), c.to_string()])
            })
            .collect();
        serde_json::json!({
            "vars": self.ctx.vars(),
            "order": self.ctx.order(),
            "terms": terms,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidArgument(format!("series JSON: {msg}"));
        let obj = value.as_object().ok_or_else(|| bad("not an object"))?;
        let vars: Vec<String> = obj
            .get("vars")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing vars"))?
            .iter()
            .map(|v| v.as_str().map(str::to_string))
            .collect::<Option<_>>()
            .ok_or_else(|| bad("vars must be strings"))?;
        let order = obj
            .get("order")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing order"))?;
        if order > u64::from(u32::MAX) {
            return Err(bad("order too large"));
        }
        let ctx = SeriesContext::new(vars, order as u32)?;
        let mut series = MultiSeries::zero(&ctx);
        let terms = obj
            .get("terms")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing terms"))?;
        for t in terms {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                bad("each term must be [exponent, coefficient]")
            })?;
            let exps: Vec<i64> = pair[0]
                .as_array()
                .ok_or_else(|| bad("exponent must be an array"))?
                .iter()
                .map(|v| v.as_i64())
                .collect::<Option<_>>()
                .ok_or_else(|| bad("exponent entries must be integers"))?;
            let coeff = pair[1]
                .as_str()
                .and_then(C::parse_str)
                .ok_or_else(|| bad("coefficient must be a numeric string"))?;
            let term = MultiSeries::monomial(&ctx, &exps, coeff)?;
            if !term.is_zero() && series.terms.contains_key(term.terms.keys().next().unwrap()) {
                return Err(bad("duplicate exponent"));
            }
            series = series.add(&term)?;
        }
        Ok(series)
    }

    /// Human-readable form, one term per line, in (total degree, lex) order.
    pub fn to_plain_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&c.to_string());
            for (i, &p) in e.entries().iter().enumerate() {
                if p == 0 {
                    continue;
                }
                out.push(' ');
                out.push_str(&self.ctx.vars()[i]);
                if p > 1 {
                    out.push('^');
                    out.push_str(&p.to_string());
                }
            }
        }
        out
    }
}

impl MultiSeries<BigInt> {
    pub fn to_rational(&self) -> MultiSeries<BigRational> {
        MultiSeries {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl MultiSeries<BigRational> {
    /// Fails if any coefficient has a nontrivial denominator.
    pub fn to_integer(&self) -> Result<MultiSeries<BigInt>> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {c} at {:?} is not an integer",
                    e.entries()
                )));
            }
            terms.insert(e.clone(), c.to_integer());
        }
        Ok(MultiSeries {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    /// Logarithm of a series with constant term 1:
    /// `log S = -sum_k (1 - S)^k / k`.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::WrongConstantTerm {
                expected: "1".to_string(),
                got: self.constant_term().to_string(),
            });
        }
        let one = MultiSeries::one(&self.ctx);
        let y = one.sub(self)?; // no constant term, so y^k has degree >= k
        let mut acc = MultiSeries::zero(&self.ctx);
        let mut power = y.clone();
        for k in 1..=self.ctx.order() {
            if power.is_zero() {
                break;
            }
            let inv_k = BigRational::new(BigInt::from(-1), BigInt::from(k));
            acc = acc.add(&power.scale(&inv_k))?;
            if k < self.ctx.order() {
                power = power.mul(&y)?;
            }
        }
        Ok(acc)
    }

    /// Exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::WrongConstantTerm {
                expected: "0".to_string(),
                got: self.constant_term().to_string(),
            });
        }
        let mut acc = MultiSeries::one(&self.ctx);
        let mut power = MultiSeries::one(&self.ctx);
        let mut factorial = BigInt::one();
        for k in 1..=self.ctx.order() {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            factorial *= k;
            let inv = BigRational::new(BigInt::one(), factorial.clone());
            acc = acc.add(&power.scale(&inv))?;
        }
        Ok(acc)
    }
}

/// One variable's image under a monomial substitution:
/// `x -> sign * prod_k y_k^(exponents[k])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarImage {
    pub sign: Sign,
    pub exponents: Vec<i64>,
}

impl VarImage {
    pub fn new(sign: Sign, exponents: Vec<i64>) -> Self {
        VarImage { sign, exponents }
    }
}

/// The closed form `(1 - sign * x^exponent)^power`, kept symbolic so factor
/// lists can be reported without expanding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpec {
    exponent: Vec<u32>,
    sign: Sign,
    power: i64,
}

impl FactorSpec {
    pub fn new(exponent: Vec<u32>, sign: Sign, power: i64) -> Result<Self> {
        if exponent.iter().all(|&e| e == 0) {
            return Err(Error::InvalidFactor(
                "factor exponent must be nonzero".to_string(),
            ));
        }
        Ok(FactorSpec { exponent, sign, power })
    }

    pub fn exponent(&self) -> &[u32] {
        &self.exponent
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn power(&self) -> i64 {
        self.power
    }

    pub fn inverse(&self) -> Self {
        FactorSpec {
            exponent: self.exponent.clone(),
            sign: self.sign,
            power: -self.power,
        }
    }

    /// Renders against variable names, e.g. `(1+q0 q1^2)^-1`.
    pub fn render(&self, ctx: &SeriesContext) -> Result<String> {
        if self.exponent.len() != ctx.var_count() {
            return Err(Error::DimensionMismatch {
                expected: ctx.var_count(),
                got: self.exponent.len(),
            });
        }
        let mut body = String::new();
        for (i, &p) in self.exponent.iter().enumerate() {
            if p == 0 {
                continue;
            }
            if !body.is_empty() {
                body.push(' ');
            }
            body.push_str(&ctx.vars()[i]);
            if p > 1 {
                body.push('^');
                body.push_str(&p.to_string());
            }
        }
        let op = match self.sign {
            Sign::Plus => '-',
            Sign::Minus => '+',
        };
        Ok(format!("(1{op}{body})^{}", self.power))
    }

    pub fn to_json(&self, ctx: &SeriesContext) -> serde_json::Value {
        serde_json::json!({
            "exponent": self.exponent,
            "sign": match self.sign { Sign::Plus => 1, Sign::Minus => -1 },
            "power": self.power,
            "rendered": self.render(ctx).unwrap_or_default(),
        })
    }
}

/// Expands `(1 - sign * x^a)^power` in the given context, any integer power.
pub fn expand_factor<C: Coeff>(
    ctx: &Arc<SeriesContext>,
    spec: &FactorSpec,
) -> Result<MultiSeries<C>> {
    if spec.exponent.len() != ctx.var_count() {
        return Err(Error::DimensionMismatch {
            expected: ctx.var_count(),
            got: spec.exponent.len(),
        });
    }
    let step: u64 = spec.exponent.iter().map(|&e| u64::from(e)).sum();
    debug_assert!(step > 0, "validated at FactorSpec::new");
    let j_max = u64::from(ctx.order()) / step;
    let mut terms: BTreeMap<Exponent, C> = BTreeMap::new();
    let base = Exponent(spec.exponent.clone());
    for j in 0..=j_max {
        // binomial coefficient of (1 - y)^power at y^j
        let b: BigInt = if spec.power >= 0 {
            let p = spec.power as u64;
            if j > p {
                break;
            }
            let choose = binomial(BigInt::from(p), BigInt::from(j));
            if j % 2 == 1 {
                -choose
            } else {
                choose
            }
        } else {
            let p = spec.power.unsigned_abs();
            binomial(BigInt::from(p - 1 + j), BigInt::from(j))
        };
        // y = sign * x^a contributes sign^j
        let b = if spec.sign == Sign::Minus && j % 2 == 1 {
            -b
        } else {
            b
        };
        if b.is_zero() {
            continue;
        }
        let mut expo = Exponent::zero(ctx.var_count());
        for _ in 0..j {
            expo = expo.plus(&base);
        }
        terms.insert(expo, C::from_bigint(&b));
    }
    Ok(MultiSeries {
        ctx: Arc::clone(ctx),
        terms,
    })
}

/// `M(-x^delta)^n` for the MacMahon function `M(y) = prod_m (1-y^m)^(-m)`,
/// i.e. the product of `(1 - (-1)^m x^(m delta))^(-m n)` over `m >= 1`.
/// The power `n` may be negative.
pub fn macmahon_power<C: Coeff>(
    ctx: &Arc<SeriesContext>,
    delta: &[u32],
    n: i64,
) -> Result<MultiSeries<C>> {
    if delta.len() != ctx.var_count() {
        return Err(Error::DimensionMismatch {
            expected: ctx.var_count(),
            got: delta.len(),
        });
    }
    let step: u64 = delta.iter().map(|&e| u64::from(e)).sum();
    if step == 0 {
        return Err(Error::InvalidFactor(
            "MacMahon exponent must be nonzero".to_string(),
        ));
    }
    let mut acc = MultiSeries::one(ctx);
    if n == 0 {
        return Ok(acc);
    }
    let m_max = u64::from(ctx.order()) / step;
    for m in 1..=m_max {
        let exponent: Vec<u32> = delta.iter().map(|&e| e * m as u32).collect();
        let sign = if m % 2 == 1 { Sign::Minus } else { Sign::Plus };
        let spec = FactorSpec::new(exponent, sign, -(m as i64) * n)?;
        acc = acc.mul(&expand_factor(ctx, &spec)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx1(order: u32) -> Arc<SeriesContext> {
        SeriesContext::new(vec!["x".to_string()], order).unwrap()
    }

    fn ctx2(order: u32) -> Arc<SeriesContext> {
        SeriesContext::new(vec!["q0".to_string(), "q1".to_string()], order).unwrap()
    }

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn coeffs_1var(s: &MultiSeries<BigInt>) -> Vec<i64> {
        (0..=s.context().order())
            .map(|k| {
                s.coefficient(&[k])
                    .unwrap()
                    .try_into()
                    .expect("fits in i64")
            })
            .collect()
    }

    #[test]
    fn context_rejects_duplicates_and_empty() {
        assert!(SeriesContext::new(vec![], 3).is_err());
        assert!(SeriesContext::new(vec!["x".into(), "x".into()], 3).is_err());
        assert!(SeriesContext::new(vec!["x".into(), "".into()], 3).is_err());
    }

    #[test]
    fn monomial_truncates_beyond_order_and_rejects_negatives() {
        let c = ctx1(3);
        let s = MultiSeries::monomial(&c, &[4], int(5)).unwrap();
        assert!(s.is_zero());
        assert!(MultiSeries::<BigInt>::monomial(&c, &[-1], int(1)).is_err());
    }

    #[test]
    fn coefficient_beyond_order_is_an_error() {
        let c = ctx1(3);
        let s = MultiSeries::<BigInt>::one(&c);
        assert!(matches!(
            s.coefficient(&[4]),
            Err(Error::CoefficientOutOfRange { .. })
        ));
    }

    #[test]
    fn context_mismatch_is_detected() {
        let a = MultiSeries::<BigInt>::one(&ctx1(3));
        let b = MultiSeries::<BigInt>::one(&ctx1(4));
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn geometric_series_expansion() {
        let c = ctx1(5);
        let spec = FactorSpec::new(vec![1], Sign::Plus, -1).unwrap();
        let s: MultiSeries<BigInt> = expand_factor(&c, &spec).unwrap();
        assert_eq!(coeffs_1var(&s), vec![1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn inverse_square_expansion() {
        let c = ctx1(5);
        let spec = FactorSpec::new(vec![1], Sign::Plus, -2).unwrap();
        let s: MultiSeries<BigInt> = expand_factor(&c, &spec).unwrap();
        assert_eq!(coeffs_1var(&s), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn alternating_geometric_expansion() {
        // sign Minus means the factor is (1 + x)^power
        let c = ctx1(4);
        let spec = FactorSpec::new(vec![1], Sign::Minus, -1).unwrap();
        let s: MultiSeries<BigInt> = expand_factor(&c, &spec).unwrap();
        assert_eq!(coeffs_1var(&s), vec![1, -1, 1, -1, 1]);
    }

    #[test]
    fn positive_power_expansion_is_binomial() {
        let c = ctx1(5);
        let spec = FactorSpec::new(vec![2], Sign::Plus, 3).unwrap();
        let s: MultiSeries<BigInt> = expand_factor(&c, &spec).unwrap();
        assert_eq!(coeffs_1var(&s), vec![1, 0, -3, 0, 3, 0]);
    }

    // Oracle: expanding (1 - s x^a)^p then (1 - s x^a)^(-p) must cancel.
    #[test]
    fn factor_times_inverse_factor_is_one()  {
        let c = ctx2(8);
        for (expo, sign, power) in [
            (vec![1u32, 0], Sign::Plus, -3i64),
            (vec![1, 2], Sign::Minus, -2),
            (vec![2, 1], Sign::Plus, 4),
            (vec![0, 3], Sign::Minus, 5),
        ] {
            let spec = FactorSpec::new(expo, sign, power).unwrap();
            let a: MultiSeries<BigInt> = expand_factor(&c, &spec).unwrap();
            let b: MultiSeries<BigInt> = expand_factor(&c, &spec.inverse()).unwrap();
            assert!(a.mul(&b).unwrap().is_one(), "{}", spec.render(&c).unwrap());
        }
    }

    #[test]
    fn multiplication_truncates_consistently() {
        // (sum_j x^j)^2 truncated at 4 must equal coefficients 1..5.
        let c = ctx1(4);
        let spec = FactorSpec::new(vec![1], Sign::Plus, -1).unwrap();
        let g: MultiSeries<BigInt> = expand_factor(&c, &spec).unwrap();
        let sq = g.mul(&g).unwrap();
        assert_eq!(coeffs_1var(&sq), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let c = ctx2(6);
        let s = MultiSeries::monomial(&c, &[1, 0], int(2))
            .unwrap()
            .add(&MultiSeries::one(&c))
            .unwrap()
            .add(&MultiSeries::monomial(&c, &[0, 1], int(-1)).unwrap())
            .unwrap();
        let mut manual = MultiSeries::one(&c);
        for _ in 0..5 {
            manual = manual.mul(&s).unwrap();
        }
        assert_eq!(s.pow(5).unwrap(), manual);
    }

    #[test]
    fn macmahon_coefficients() {
        // M(x): numbers of plane partitions of n.
        let c = ctx1(6);
        let m: MultiSeries<BigInt> = macmahon_power(&c, &[1], -1).unwrap();
        // M(x)^(-1) inverted back: compare against the frozen expansion.
        let m_inv: MultiSeries<BigInt> = macmahon_power(&c, &[1], 1).unwrap();
        assert!(m.mul(&m_inv).unwrap().is_one());
        // macmahon_power(n) is M(-x)^n, so M(x) itself needs x -> -x: at odd
        // degrees the sign flips.
        let m1: MultiSeries<BigInt> = macmahon_power(&c, &[1], 1).unwrap();
        assert_eq!(coeffs_1var(&m1)[..4], [1, -1, 3, -6]);
        let expected = [1i64, 1, 3, 6, 13, 24, 48];
        for (k, &want) in expected.iter().enumerate() {
            let got = m1.coefficient(&[k as u32]).unwrap();
            let sign = if k % 2 == 1 { -1 } else { 1 };
            assert_eq!(got, int(sign * want), "degree {k}");
        }
    }

    #[test]
    fn macmahon_in_two_variables_respects_delta() {
        let c = ctx2(6);
        let m: MultiSeries<BigInt> = macmahon_power(&c, &[1, 1], 2).unwrap();
        // Only exponents proportional to delta appear.
        for (e, _) in m.terms() {
            assert_eq!(e.entries()[0], e.entries()[1]);
        }
        let inv: MultiSeries<BigInt> = macmahon_power(&c, &[1, 1], -2).unwrap();
        assert!(m.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn substitution_is_a_ring_map() {
        // Map (u, t) -> (-q0 q1, q1^{-1}) applied to factors lands on the
        // expected q-side factors. The source window is twice the target
        // order because the image of u t1 has half the degree.
        let gw = SeriesContext::new(vec!["u".into(), "t1".into()], 16).unwrap();
        let q = ctx2(8);
        let images = vec![
            VarImage::new(Sign::Minus, vec![1, 1]),
            VarImage::new(Sign::Plus, vec![0, -1]),
        ];
        // (1 - t1 u)^(-1) -> (1 + q0)^(-1)
        let f = FactorSpec::new(vec![1, 1], Sign::Plus, -1).unwrap();
        let s: MultiSeries<BigInt> = expand_factor(&gw, &f).unwrap();
        let mapped = s.substitute(&images, &q).unwrap();
        let expect: MultiSeries<BigInt> =
            expand_factor(&q, &FactorSpec::new(vec![1, 0], Sign::Minus, -1).unwrap()).unwrap();
        assert_eq!(mapped, expect);
        // Multiplicativity on a second factor.
        let g = FactorSpec::new(vec![2, 1], Sign::Plus, -2).unwrap();
        let t: MultiSeries<BigInt> = expand_factor(&gw, &g).unwrap();
        let lhs = s.mul(&t).unwrap().substitute(&images, &q).unwrap();
        let rhs = mapped
            .mul(&t.substitute(&images, &q).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_out_of_domain_is_an_error() {
        let gw = SeriesContext::new(vec!["u".into(), "t1".into()], 4).unwrap();
        let q = ctx2(4);
        let images = vec![
            VarImage::new(Sign::Minus, vec![1, 1]),
            VarImage::new(Sign::Plus, vec![0, -1]),
        ];
        // A bare t1 maps to q1^{-1}.
        let s = MultiSeries::monomial(&gw, &[0, 1], int(1)).unwrap();
        assert!(matches!(
            s.substitute(&images, &q),
            Err(Error::SubstitutionDomain { .. })
        ));
    }

    #[test]
    fn permutation_relabels_coordinates() {
        let c = ctx2(5);
        let s = MultiSeries::monomial(&c, &[2, 1], int(7)).unwrap();
        let p = s.permute_variables(&[1, 0]).unwrap();
        assert_eq!(p.coefficient(&[1, 2]).unwrap(), int(7));
        assert!(s.permute_variables(&[0, 0]).is_err());
    }

    #[test]
    fn log_and_exp_are_inverse() {
        let c = ctx1(7);
        let spec = FactorSpec::new(vec![1], Sign::Plus, -3).unwrap();
        let s: MultiSeries<BigRational> = expand_factor(&c, &spec).unwrap();
        let back = s.log().unwrap().exp().unwrap();
        assert_eq!(back, s);
        // log turns products into sums
        let t: MultiSeries<BigRational> =
            expand_factor(&c, &FactorSpec::new(vec![2], Sign::Minus, -1).unwrap()).unwrap();
        let lhs = s.mul(&t).unwrap().log().unwrap();
        let rhs = s.log().unwrap().add(&t.log().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_of_inverse_factor_has_harmonic_coefficients() {
        let c = ctx1(5);
        let spec = FactorSpec::new(vec![1], Sign::Plus, -1).unwrap();
        let s: MultiSeries<BigRational> = expand_factor(&c, &spec).unwrap();
        let l = s.log().unwrap();
        for k in 1..=5u32 {
            assert_eq!(
                l.coefficient(&[k]).unwrap(),
                BigRational::new(BigInt::one(), BigInt::from(k))
            );
        }
    }

    #[test]
    fn exp_requires_zero_and_log_requires_one() {
        let c = ctx1(3);
        let one = MultiSeries::<BigRational>::one(&c);
        assert!(one.exp().is_err());
        let zero = MultiSeries::<BigRational>::zero(&c);
        assert!(zero.log().is_err());
    }

    #[test]
    fn json_round_trip_preserves_everything() {
        let c = ctx2(6);
        let s = MultiSeries::monomial(&c, &[1, 2], int(-7))
            .unwrap()
            .add(&MultiSeries::one(&c))
            .unwrap();
        let v = s.to_json();
        let back = MultiSeries::<BigInt>::from_json(&v).unwrap();
        assert_eq!(back, s);
        // Rational coefficients survive too.
        let r = s.to_rational().scale(&BigRational::new(int(1), int(2)));
        let back_r = MultiSeries::<BigRational>::from_json(&r.to_json()).unwrap();
        assert_eq!(back_r, r);
    }

    #[test]
    fn json_terms_are_sorted_by_degree_then_lex() {
        let c = ctx2(6);
        let s = MultiSeries::monomial(&c, &[0, 2], int(1))
            .unwrap()
            .add(&MultiSeries::monomial(&c, &[1, 1], int(2)).unwrap())
            .unwrap()
            .add(&MultiSeries::monomial(&c, &[0, 1], int(3)).unwrap())
            .unwrap();
        let v = s.to_json();
        let terms = v["terms"].as_array().unwrap();
        let exps: Vec<Vec<u64>> = terms
            .iter()
            .map(|t| {
                t[0].as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_u64().unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(exps, vec![vec![0, 1], vec![0, 2], vec![1, 1]]);
    }

    #[test]
    fn from_json_rejects_malformed_input() {
        for bad in [
            serde_json::json!({"vars": ["x"], "order": 3}),
            serde_json::json!({"vars": ["x"], "order": 3, "terms": [[[0], "nope"]]}),
            serde_json::json!({"vars": ["x"], "order": 3, "terms": [[[0], "1"], [[0], "2"]]}),
            serde_json::json!({"vars": ["x", "x"], "order": 3, "terms": []}),
        ] {
            assert!(MultiSeries::<BigInt>::from_json(&bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn plain_rendering_is_stable() {
        let c = ctx2(4);
        let s = MultiSeries::monomial(&c, &[1, 2], int(-3))
            .unwrap()
            .add(&MultiSeries::one(&c))
            .unwrap();
        assert_eq!(s.to_plain_string(), "1\n-3 q0 q1^2");
        assert_eq!(MultiSeries::<BigInt>::zero(&c).to_plain_string(), "0");
    }

    #[test]
    fn factor_rendering_is_stable() {
        let c = ctx2(4);
        let f = FactorSpec::new(vec![1, 2], Sign::Minus, -3).unwrap();
        assert_eq!(f.render(&c).unwrap(), "(1+q0 q1^2)^-3");
        let g = FactorSpec::new(vec![2, 0], Sign::Plus, 1).unwrap();
        assert_eq!(g.render(&c).unwrap(), "(1-q0^2)^1");
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let c = ctx1(4);
        let s = MultiSeries::monomial(&c, &[2], int(5)).unwrap();
        let t = MultiSeries::monomial(&c, &[2], int(-5)).unwrap();
        let sum = s.add(&t).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.term_count(), 0);
        let prod = s.mul(&t).unwrap(); // degree 4, coefficient -25
        assert_eq!(prod.coefficient(&[4]).unwrap(), int(-25));
    }
}
