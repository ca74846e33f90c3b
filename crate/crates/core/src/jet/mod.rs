//! Truncated elements of K_pi((q))[dq, d^2q, ...], the ring that receives
//! delta-Fourier expansions, with the Frobenius action and the
//! pi-derivation that make it a prolongation sequence.
//!
//! A [`JetSeries`] carries two truncations. `q_prec` is the largest power of
//! q retained; every monomial with q-exponent at most `q_prec` is exact (up
//! to the precision of its p-adic coefficient). `delta_deg` bounds the total
//! degree in the delta variables; the Frobenius image of a variable never has
//! lower degree than the variable, so this truncation is exact on what it
//! keeps.

mod phi_poly;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicNum};

pub use phi_poly::{weight_action, PhiPoly};

/// Highest supported jet order (number of delta variables).
pub const MAX_ORDER: usize = 4;

/// q^q * (dq)^dq[0] * (d^2 q)^dq[1] * ...
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    pub q: i64,
    pub dq: [u32; MAX_ORDER],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn q_pow(a: i64) -> Self {
        Monomial {
            q: a,
            ..Self::default()
        }
    }

    /// (d^i q)^b for 1 <= i <= MAX_ORDER.
    pub fn delta_var(i: usize, b: u32) -> Self {
        let mut m = Self::default();
        m.dq[i - 1] = b;
        m
    }

    pub fn new(q: i64, dq: &[u32]) -> Self {
        let mut m = Self::q_pow(q);
        m.dq[..dq.len()].copy_from_slice(dq);
        m
    }

    pub fn delta_degree(&self) -> u32 {
        self.dq.iter().sum()
    }

    /// Index of the highest delta variable present.
    pub fn order(&self) -> usize {
        self.dq.iter().rposition(|&b| b > 0).map_or(0, |i| i + 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut dq = self.dq;
        for (d, o) in dq.iter_mut().zip(other.dq) {
            *d += o;
        }
        Monomial {
            q: self.q + other.q,
            dq,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.q != 0 {
            parts.push(if self.q == 1 {
                "q".to_string()
            } else {
                format!("q^{}", self.q)
            });
        }
        for (i, &b) in self.dq.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let var = if i == 0 {
                "dq".to_string()
            } else {
                format!("d{}q", i + 1)
            };
            parts.push(if b == 1 { var } else { format!("{var}^{b}") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone)]
pub struct JetSeries {
    ctx: Arc<PadicCtx>,
    order: usize,
    q_prec: i64,
    delta_deg: u32,
    terms: BTreeMap<Monomial, PadicNum>,
}

/// Default delta-degree bound for a given jet order.
pub fn default_delta_deg(order: usize) -> u32 {
    2 * order as u32 + 2
}

impl JetSeries {
    pub fn zero(ctx: &Arc<PadicCtx>, q_prec: i64, delta_deg: u32) -> Self {
        JetSeries {
            ctx: ctx.clone(),
            order: 0,
            q_prec,
            delta_deg,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: PadicNum, q_prec: i64, delta_deg: u32) -> Self {
        let mut s = Self::zero(c.ctx(), q_prec, delta_deg);
        s.insert(Monomial::one(), c);
        s
    }

    pub fn one(ctx: &Arc<PadicCtx>, q_prec: i64, delta_deg: u32) -> Self {
        Self::constant(PadicNum::one(ctx), q_prec, delta_deg)
    }

    /// A single term c * m.
    pub fn monomial(m: Monomial, c: PadicNum, q_prec: i64, delta_deg: u32) -> Self {
        let mut s = Self::zero(c.ctx(), q_prec, delta_deg);
        s.order = m.order();
        s.insert(m, c);
        s
    }

    /// q^a.
    pub fn q_pow(ctx: &Arc<PadicCtx>, a: i64, q_prec: i64, delta_deg: u32) -> Self {
        Self::monomial(Monomial::q_pow(a), PadicNum::one(ctx), q_prec, delta_deg)
    }

    /// The variable d^i q (i = 0 gives q itself).
    pub fn var(ctx: &Arc<PadicCtx>, i: usize, q_prec: i64, delta_deg: u32) -> Result<Self> {
        if i > MAX_ORDER {
            return Err(Error::OrderOverflow {
                requested: i,
                max: MAX_ORDER,
            });
        }
        let m = if i == 0 {
            Monomial::q_pow(1)
        } else {
            Monomial::delta_var(i, 1)
        };
        Ok(Self::monomial(m, PadicNum::one(ctx), q_prec, delta_deg))
    }

    /// sum c_n q^(start + n), an ordinary truncated q-expansion.
    pub fn from_qexp(
        ctx: &Arc<PadicCtx>,
        start: i64,
        coeffs: &[PadicNum],
        q_prec: i64,
        delta_deg: u32,
    ) -> Self {
        let mut s = Self::zero(ctx, q_prec, delta_deg);
        for (n, c) in coeffs.iter().enumerate() {
            s.insert(Monomial::q_pow(start + n as i64), c.clone());
        }
        s
    }

    /// Build from explicit terms; `order` is raised to cover every monomial.
    pub fn from_terms(
        ctx: &Arc<PadicCtx>,
        order: usize,
        q_prec: i64,
        delta_deg: u32,
        terms: impl IntoIterator<Item = (Monomial, PadicNum)>,
    ) -> Self {
        let mut s = Self::zero(ctx, q_prec, delta_deg);
        s.order = order;
        for (m, c) in terms {
            s.order = s.order.max(m.order());
            s.add_term(m, c);
        }
        s
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn q_prec(&self) -> i64 {
        self.q_prec
    }

    pub fn delta_deg(&self) -> u32 {
        self.delta_deg
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = self.order.max(order);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PadicNum)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&PadicNum> {
        self.terms.get(m)
    }

    /// Coefficient of m, the exact zero when absent and retained.
    pub fn coeff_or_zero(&self, m: &Monomial) -> PadicNum {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| PadicNum::exact_zero(&self.ctx))
    }

    fn keeps(&self, m: &Monomial) -> bool {
        m.q <= self.q_prec && m.delta_degree() <= self.delta_deg
    }

    fn insert(&mut self, m: Monomial, c: PadicNum) {
        if self.keeps(&m) && !c.is_exact_zero() {
            self.terms.insert(m, c);
        }
    }

    fn add_term(&mut self, m: Monomial, c: PadicNum) {
        if !self.keeps(&m) || c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = old.add(&c);
                if sum.is_exact_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Lowest q-exponent present, if any.
    pub fn q_low(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.q).min()
    }

    /// True when every coefficient is indistinguishable from zero.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Smallest valuation floor among the coefficients.
    pub fn min_val_floor(&self) -> Option<i64> {
        self.terms.values().map(|c| c.val_floor()).min()
    }

    /// Smallest exact valuation among distinguishable coefficients.
    pub fn min_valuation(&self) -> Option<i64> {
        self.terms.values().filter_map(|c| c.valuation()).min()
    }

    /// Smallest absolute precision among the coefficients.
    pub fn min_precision(&self) -> Option<i64> {
        self.terms
            .values()
            .filter(|c| !c.is_exact_zero())
            .map(|c| c.precision())
            .min()
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn empty_like(&self, other: &Self, q_prec: i64) -> Self {
        JetSeries {
            ctx: self.ctx.clone(),
            order: self.order.max(other.order),
            q_prec,
            delta_deg: self.delta_deg.min(other.delta_deg),
            terms: BTreeMap::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.empty_like(other, self.q_prec.min(other.q_prec));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &PadicNum) -> Self {
        let mut out = JetSeries {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (m, a) in &self.terms {
            out.insert(*m, a.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        // a product term q^c is exact while c stays below each factor's
        // truncation point shifted by the other factor's lowest exponent
        let ls = self.q_low().unwrap_or(0).min(0);
        let lt = other.q_low().unwrap_or(0).min(0);
        let q_prec = (self.q_prec + lt).min(other.q_prec + ls);
        if q_prec < ls + lt {
            return Err(Error::PrecisionExhausted(
                "product retains no q-coefficients".into(),
            ));
        }
        let mut out = self.empty_like(other, q_prec);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let m = ma.mul(mb);
                if out.keeps(&m) {
                    out.add_term(m, a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::one(&self.ctx, self.q_prec, self.delta_deg).with_order(self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiply by q^k, shifting the truncation point along.
    pub fn mul_q_pow(&self, k: i64) -> Self {
        let mut out = JetSeries {
            terms: BTreeMap::new(),
            q_prec: self.q_prec + k,
            ..self.clone()
        };
        for (m, c) in &self.terms {
            let mut m = *m;
            m.q += k;
            out.insert(m, c.clone());
        }
        out
    }

    /// Multiply every coefficient by pi^k.
    pub fn mul_pi_pow(&self, k: i64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.mul_pi_pow(k);
        }
        out
    }

    /// Inverse of a series whose q-exponents are non-negative and whose
    /// constant term is a unit.
    pub fn inv_unit(&self) -> Result<Self> {
        if self.q_low().is_some_and(|l| l < 0) {
            return Err(Error::NotAUnit("series has a Laurent tail".into()));
        }
        let c0 = self.coeff_or_zero(&Monomial::one());
        if !c0.is_unit() {
            return Err(Error::NotAUnit(format!("constant term {c0}")));
        }
        let c0_inv = c0.inv()?;
        // x = c0 (1 + y); every term of y raises the q-degree or the delta-degree
        let mut y = self.scalar_mul(&c0_inv);
        y.terms.remove(&Monomial::one());
        let minus_y = y.neg();
        let steps = self.q_prec.max(0) as u64 + self.delta_deg as u64 + 1;
        let one = Self::one(&self.ctx, self.q_prec, self.delta_deg).with_order(self.order);
        let mut acc = one.clone();
        for _ in 0..steps {
            acc = one.add(&minus_y.mul(&acc)?)?;
        }
        Ok(acc.scalar_mul(&c0_inv))
    }

    /// Apply the Frobenius lift: phi on coefficients, q -> q^p + pi dq and
    /// d^i q -> (d^i q)^p + pi d^(i+1) q.
    pub fn phi(&self) -> Result<Self> {
        let new_order = self.order + 1;
        if new_order > MAX_ORDER {
            return Err(Error::OrderOverflow {
                requested: new_order,
                max: MAX_ORDER,
            });
        }
        let p = self.ctx.p() as i64;
        let d = self.delta_deg;
        // an unretained monomial q^a, a > q_prec, lands in q-degree >= p (a - d)
        let q_prec = self.q_prec.min(p * (self.q_prec + 1 - d as i64) - 1);
        let mut out = JetSeries {
            ctx: self.ctx.clone(),
            order: new_order,
            q_prec,
            delta_deg: d,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let image = self.phi_monomial(m, q_prec);
            if image.is_empty() {
                continue;
            }
            let fc = c.frobenius();
            for (mm, (binom, k)) in image {
                let coeff = fc
                    .mul(&PadicNum::from_bigint(&self.ctx, &binom))
                    .mul_pi_pow(k as i64);
                out.add_term(mm, coeff);
            }
        }
        Ok(out)
    }

    /// Expansion of phi of a monomial as {monomial: (integer, power of pi)},
    /// truncated to q-degree `q_cap` and the series' delta-degree bound.
    fn phi_monomial(&self, m: &Monomial, q_cap: i64) -> BTreeMap<Monomial, (BigInt, u32)> {
        let p = self.ctx.p() as i64;
        let d = self.delta_deg;
        let mut acc: BTreeMap<Monomial, (BigInt, u32)> = BTreeMap::new();
        // (q^p + pi dq)^a
        let kmax = if m.q >= 0 { (m.q as u32).min(d) } else { d };
        for k in 0..=kmax {
            let qexp = p * (m.q - k as i64);
            if qexp > q_cap {
                continue;
            }
            let mut mono = Monomial::q_pow(qexp);
            mono.dq[0] = k;
            acc.insert(mono, (binomial(m.q, k), k));
        }
        // ((d^i q)^p + pi d^(i+1) q)^b
        for (i, &b) in m.dq.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let mut next = BTreeMap::new();
            for j in 0..=b {
                let mut factor = Monomial::default();
                factor.dq[i] = p as u32 * (b - j);
                if j > 0 {
                    factor.dq[i + 1] = j;
                }
                let fb = binomial(b as i64, j);
                for (mono, (c, k)) in &acc {
                    let prod = mono.mul(&factor);
                    if prod.delta_degree() > d {
                        continue;
                    }
                    let entry = next.entry(prod).or_insert((BigInt::zero(), k + j));
                    debug_assert_eq!(entry.1, k + j);
                    entry.0 += c * &fb;
                }
            }
            acc = next;
        }
        acc.retain(|_, (c, _)| !c.is_zero());
        acc
    }

    /// The pi-derivation (phi(s) - s^p) / pi.
    pub fn delta(&self) -> Result<Self> {
        if let Some((m, c)) = self.terms.iter().find(|(_, c)| c.val_floor() < 0) {
            return Err(Error::NotIntegral(format!("coefficient {c} of {m}")));
        }
        let diff = self.phi()?.sub(&self.pow(self.ctx.p())?)?;
        let mut out = JetSeries {
            terms: BTreeMap::new(),
            ..diff.clone()
        };
        for (m, c) in diff.terms {
            if c.valuation().is_some_and(|v| v < 1) {
                return Err(Error::NonDivisible(format!("coefficient of {m}")));
            }
            out.insert(m, c.div_pi());
        }
        Ok(out)
    }

    /// Largest k such that every coefficient of `self - other` has
    /// valuation at least k, capped at the context precision.
    pub fn compare_mod_pi_power(&self, other: &Self) -> Result<i64> {
        let diff = self.sub(other)?;
        let cap = self.ctx.prec() as i64;
        Ok(diff.min_val_floor().unwrap_or(cap).min(cap))
    }

    /// True when the two series agree at their common precision.
    pub fn agrees(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Drop everything above q^k.
    pub fn truncate_q(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.q_prec = out.q_prec.min(k);
        out.terms.retain(|m, _| m.q <= k);
        out
    }

    /// Keep only the monomials free of q (set the order-zero variable to 0).
    pub fn at_q_zero(&self) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.q == 0);
        out
    }

    /// q d/dq.
    pub fn q_derivative(&self) -> Self {
        let mut out = JetSeries {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (m, c) in &self.terms {
            out.insert(*m, c.scale(m.q));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&PadicNum) -> PadicNum) -> Self {
        let mut out = JetSeries {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (m, c) in &self.terms {
            out.insert(*m, f(c));
        }
        out
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "monomial": {"q": m.q, "dq": &m.dq[..self.order]},
                    "coeff": c.to_string(),
                })
            })
            .collect();
        json!({
            "order": self.order,
            "q_prec": self.q_prec,
            "delta_deg": self.delta_deg,
            "terms": terms,
        })
    }

    pub fn from_json(ctx: &Arc<PadicCtx>, v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series JSON: {what}"));
        let order = v["order"].as_u64().ok_or_else(|| bad("order"))? as usize;
        if order > MAX_ORDER {
            return Err(Error::OrderOverflow {
                requested: order,
                max: MAX_ORDER,
            });
        }
        let q_prec = v["q_prec"].as_i64().ok_or_else(|| bad("q_prec"))?;
        let delta_deg = v
            .get("delta_deg")
            .and_then(Value::as_u64)
            .map_or(default_delta_deg(order), |d| d as u32);
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let q = t["monomial"]["q"]
                .as_i64()
                .ok_or_else(|| bad("monomial.q"))?;
            let dq: Vec<u32> = match t["monomial"].get("dq") {
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as u32))
                    .collect::<Option<_>>()
                    .ok_or_else(|| bad("monomial.dq"))?,
                None => Vec::new(),
                _ => return Err(bad("monomial.dq")),
            };
            if dq.len() > MAX_ORDER {
                return Err(Error::OrderOverflow {
                    requested: dq.len(),
                    max: MAX_ORDER,
                });
            }
            let coeff = match &t["coeff"] {
                Value::String(s) => PadicNum::parse(ctx, s)?,
                Value::Number(n) => PadicNum::parse(ctx, &n.to_string())?,
                _ => return Err(bad("coeff")),
            };
            terms.push((Monomial::new(q, &dq), coeff));
        }
        Ok(Self::from_terms(ctx, order, q_prec, delta_deg, terms))
    }
}

/// binom(a, k) for any integer a (generalized for negative a).
pub(crate) fn binomial(a: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(a - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

impl fmt::Display for JetSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        write!(f, " + O(q^{})", self.q_prec + 1)
    }
}

impl fmt::Debug for JetSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> Arc<PadicCtx> {
        PadicCtx::zp(5, 8).unwrap()
    }

    fn int(ctx: &Arc<PadicCtx>, n: i64) -> PadicNum {
        PadicNum::from_i64(ctx, n)
    }

    /// Series from (q, dq, coefficient) triples.
    fn series(
        ctx: &Arc<PadicCtx>,
        order: usize,
        q_prec: i64,
        terms: &[(i64, &[u32], i64)],
    ) -> JetSeries {
        JetSeries::from_terms(
            ctx,
            order,
            q_prec,
            default_delta_deg(order),
            terms
                .iter()
                .map(|(q, dq, c)| (Monomial::new(*q, dq), int(ctx, *c))),
        )
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    #[test]
    fn phi_of_q() {
        let c = z5();
        let q = JetSeries::q_pow(&c, 1, 20, 2);
        let expect = series(&c, 1, 20, &[(5, &[], 1), (0, &[1], 5)]);
        let got = q.phi().unwrap();
        assert!(got.agrees(&expect).unwrap());
        assert_eq!(got.order(), 1);
    }

    #[test]
    fn phi_of_q_squared() {
        let c = z5();
        let q2 = JetSeries::q_pow(&c, 2, 20, 2);
        let expect = series(&c, 1, 20, &[(10, &[], 1), (5, &[1], 10), (0, &[2], 25)]);
        assert!(q2.phi().unwrap().agrees(&expect).unwrap());
    }

    #[test]
    fn delta_of_q_plus_one() {
        let c = z5();
        let s = series(&c, 0, 20, &[(0, &[], 1), (1, &[], 1)]);
        // dq + (q^5 + 1 - (q + 1)^5) / 5
        let expect = series(
            &c,
            1,
            20,
            &[
                (0, &[1], 1),
                (1, &[], -1),
                (2, &[], -2),
                (3, &[], -2),
                (4, &[], -1),
            ],
        );
        let got = s.delta().unwrap();
        assert!(got.agrees(&expect).unwrap(), "{got}");
    }

    #[test]
    fn delta_of_one_and_q() {
        let c = z5();
        assert!(JetSeries::one(&c, 10, 2).delta().unwrap().is_zero());
        let dq = JetSeries::q_pow(&c, 1, 10, 2).delta().unwrap();
        assert!(dq.agrees(&series(&c, 1, 10, &[(0, &[1], 1)])).unwrap());
    }

    #[test]
    fn laurent_product() {
        let c = z5();
        let q = JetSeries::q_pow(&c, 1, 10, 2);
        let qi = JetSeries::q_pow(&c, -1, 10, 2);
        let prod = q.mul(&qi).unwrap();
        assert!(prod.agrees(&JetSeries::one(&c, 10, 2)).unwrap());
        assert_eq!(prod.q_prec(), 9);
    }

    #[test]
    fn compare_mod_pi() {
        let c = z5();
        let a = series(&c, 1, 10, &[(1, &[], 1), (0, &[1], 5)]);
        let b = series(&c, 1, 10, &[(1, &[], 1)]);
        assert_eq!(a.compare_mod_pi_power(&b).unwrap(), 1);
        assert_eq!(a.compare_mod_pi_power(&a).unwrap(), 8);
    }

    #[test]
    fn order_overflow() {
        let c = z5();
        let mut s = JetSeries::q_pow(&c, 1, 30, 2);
        for _ in 0..MAX_ORDER {
            s = s.phi().unwrap();
        }
        assert!(matches!(s.phi(), Err(Error::OrderOverflow { .. })));
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let c = z5();
        let s = series(&c, 0, 8, &[(0, &[], 1), (1, &[], -1)]);
        let inv = s.inv_unit().unwrap();
        let geo: Vec<PadicNum> = (0..=8).map(|_| int(&c, 1)).collect();
        assert!(inv
            .agrees(&JetSeries::from_qexp(&c, 0, &geo, 8, 2))
            .unwrap());
        assert!(matches!(
            JetSeries::q_pow(&c, 1, 8, 2).inv_unit(),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = z5();
        let s = series(&c, 1, 10, &[(1, &[], 1), (0, &[1], 5), (3, &[2], -7)])
            .phi()
            .unwrap();
        let v = s.to_json();
        let back = JetSeries::from_json(&c, &v).unwrap();
        assert_eq!(back.to_json(), v);
    }
}
