//! Classical q-expansion inputs: Bernoulli numbers, the Eisenstein series
//! E_{p-1}, newform coefficients and the anti-derivative
//! f^(-1) = sum a_n / n q^n.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_group::WeierstrassCurve;
use crate::jet::{default_delta_deg, JetSeries};
use crate::padic::{PadicCtx, PadicNum};

pub type Rational = BigRational;

/// B_k from sum_{j<=m} binom(m+1, j) B_j = 0, B_0 = 1 (so B_1 = -1/2).
pub fn bernoulli(k: usize) -> Rational {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=k {
        let mut s = Rational::zero();
        let mut binom = BigInt::one();
        // binom(m+1, j) for j = 0..m
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b.pop().unwrap()
}

/// sum of d^k over divisors d of n.
pub fn sigma(k: u32, n: u64) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

/// Exact coefficients 1, -(2k/B_k) sigma_{k-1}(n) of E_k, k = p - 1, up to
/// q^q_prec. Fails if the normalising constant is not p-integral.
pub fn eisenstein_coeffs(p: u64, q_prec: usize) -> Result<Vec<Rational>> {
    let k = (p - 1) as usize;
    let factor = Rational::from_integer(BigInt::from(-2 * k as i64)) / bernoulli(k);
    if factor.denom().is_multiple_of(&BigInt::from(p)) {
        return Err(Error::DenominatorNotUnit { p });
    }
    let mut out = vec![Rational::one()];
    for n in 1..=q_prec as u64 {
        out.push(&factor * Rational::from_integer(sigma(k as u32 - 1, n)));
    }
    Ok(out)
}

/// E_{p-1} as an order-zero series in the context.
pub fn eisenstein_qexp(p: u64, q_prec: usize, ctx: &Arc<PadicCtx>) -> Result<JetSeries> {
    if p != ctx.p() {
        return Err(Error::InvalidContext(format!(
            "context prime {} differs from {p}",
            ctx.p()
        )));
    }
    if p < 5 {
        return Err(Error::InvalidContext("p must be at least 5".into()));
    }
    let coeffs: Vec<PadicNum> = eisenstein_coeffs(p, q_prec)?
        .iter()
        .map(|c| PadicNum::from_rational(ctx, c))
        .collect();
    Ok(JetSeries::from_qexp(
        ctx,
        0,
        &coeffs,
        q_prec as i64,
        default_delta_deg(0),
    ))
}

/// True when every non-constant coefficient of E_{p-1} is divisible by p,
/// so that E_{p-1} = 1 mod p and its (p-1)-st root has residue 1.
pub fn eisenstein_is_one_mod_p(p: u64, q_prec: usize) -> Result<bool> {
    let pb = BigInt::from(p);
    Ok(eisenstein_coeffs(p, q_prec)?
        .iter()
        .skip(1)
        .all(|c| c.numer().is_multiple_of(&pb) && !c.denom().is_multiple_of(&pb)))
}

/// A coefficient as read from JSON: an integer, a rational `"a/b"`, or any
/// string the p-adic parser accepts (for example `"[c0,c1]"` in the
/// generator t).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    pub fn to_padic(&self, ctx: &Arc<PadicCtx>) -> Result<PadicNum> {
        match self {
            Coefficient::Int(n) => Ok(PadicNum::from_i64(ctx, *n)),
            Coefficient::Text(s) => PadicNum::parse(ctx, s),
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            Coefficient::Int(n) => Some(Rational::from_integer(BigInt::from(*n))),
            Coefficient::Text(s) => crate::padic::parse_rational(s),
        }
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::Int(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    #[default]
    File,
    PointCounting,
}

/// A normalised newform: level, weight, the prime p, and a_1, ..., a_nmax.
/// Optional `conjugates` hold the coefficient lists of its Galois
/// conjugates, already embedded in the context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformData {
    #[serde(alias = "N", alias = "level")]
    pub level: u64,
    pub weight: u32,
    pub p: u64,
    #[serde(alias = "a")]
    pub an: Vec<Coefficient>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugates: Vec<Vec<Coefficient>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i64>,
    #[serde(default)]
    pub source: Source,
}

impl NewformData {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNewform(m));
        if self.level.gcd(&self.p) != 1 {
            return bad(format!("p = {} divides the level {}", self.p, self.level));
        }
        for list in std::iter::once(&self.an).chain(&self.conjugates) {
            match list.first() {
                None => return bad("empty coefficient list".into()),
                Some(a1) if a1.to_rational() != Some(Rational::one()) => {
                    return bad("a_1 must be 1".into())
                }
                _ => {}
            }
        }
        // multiplicativity spot check when the coefficients are rational
        let rat: Option<Vec<Rational>> = self.an.iter().map(Coefficient::to_rational).collect();
        if let Some(a) = rat {
            let n = a.len();
            for m in 2..=n {
                for k in m + 1..=n / m {
                    if m.gcd(&k) == 1 && m * k <= n && a[m * k - 1] != &a[m - 1] * &a[k - 1] {
                        return bad(format!("a_{} != a_{m} a_{k}", m * k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The weight-two newform attached to an elliptic curve of conductor
    /// `level`, with coefficients from point counts.
    pub fn from_curve(curve: &WeierstrassCurve, level: u64, p: u64, nmax: usize) -> Result<Self> {
        let a = curve_coefficients(curve, nmax)?;
        let nf = NewformData {
            level,
            weight: 2,
            p,
            an: a.into_iter().map(Coefficient::Int).collect(),
            conjugates: Vec::new(),
            kappa: None,
            source: Source::PointCounting,
        };
        nf.validate()?;
        Ok(nf)
    }

    /// Coefficient lists indexed by sigma: the form itself, then its
    /// conjugates.
    pub fn sigma_lists(&self) -> Vec<&[Coefficient]> {
        std::iter::once(self.an.as_slice())
            .chain(self.conjugates.iter().map(|v| v.as_slice()))
            .collect()
    }
}

/// Number of points, including the one at infinity, on the reduction mod
/// ell (singular or not).
fn count_points(e: &WeierstrassCurve, ell: u64) -> u64 {
    let l = ell as i64;
    let r = |v: i64| v.rem_euclid(l);
    let (a1, a2, a3, a4, a6) = (r(e.a1), r(e.a2), r(e.a3), r(e.a4), r(e.a6));
    let mut count = 1;
    for x in 0..l {
        let rhs = r(r(r(x * x) * x) + r(a2 * r(x * x)) + r(a4 * x) + a6);
        for y in 0..l {
            if r(r(y * y) + r(a1 * r(x * y)) + r(a3 * y)) == rhs {
                count += 1;
            }
        }
    }
    count
}

/// a_ell = ell + 1 - #E(F_ell) for a prime of good reduction.
pub fn ap_point_count(e: &WeierstrassCurve, ell: u64) -> Result<i64> {
    if !e.has_good_reduction(ell) {
        return Err(Error::BadReduction { ell });
    }
    let a = ell as i64 + 1 - count_points(e, ell) as i64;
    if a * a > 4 * ell as i64 {
        return Err(Error::InvalidCurve(format!(
            "a_{ell} = {a} violates the Hasse bound"
        )));
    }
    Ok(a)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// a_1, ..., a_nmax of the newform of a curve, from point counts at primes
/// (including primes of bad reduction, where the count on the singular
/// fibre gives a_ell in {-1, 0, 1}) and the Hecke recursions.
pub fn curve_coefficients(e: &WeierstrassCurve, nmax: usize) -> Result<Vec<i64>> {
    let mut a = vec![0i64; nmax + 1];
    if nmax >= 1 {
        a[1] = 1;
    }
    for ell in (2..=nmax as u64).filter(|&l| is_prime(l)) {
        let good = e.has_good_reduction(ell);
        let a_ell = if good {
            ap_point_count(e, ell)?
        } else {
            ell as i64 + 1 - count_points(e, ell) as i64
        };
        let l = ell as usize;
        a[l] = a_ell;
        let mut prev = 1i64;
        let mut cur = a_ell;
        let mut pk = l;
        while pk * l <= nmax {
            let next = if good {
                a_ell * cur - ell as i64 * prev
            } else {
                a_ell * cur
            };
            pk *= l;
            a[pk] = next;
            prev = cur;
            cur = next;
        }
    }
    // multiplicativity over coprime prime powers
    for n in 2..=nmax {
        let mut m = n;
        let mut d = 2;
        while d * d <= m && m % d != 0 {
            d += 1;
        }
        if d * d > m {
            continue; // prime
        }
        let mut pk = 1;
        while m % d == 0 {
            m /= d;
            pk *= d;
        }
        if m > 1 {
            a[n] = a[pk] * a[m];
        }
    }
    Ok(a[1..].to_vec())
}

/// sum_{n<=q_prec} (a_n / n) q^n from a coefficient list a_1, a_2, ...
pub fn f_inverse_from(
    an: &[Coefficient],
    q_prec: usize,
    delta_deg: u32,
    ctx: &Arc<PadicCtx>,
) -> Result<JetSeries> {
    if an.len() < q_prec {
        return Err(Error::InsufficientCoefficients {
            needed: q_prec,
            available: an.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(q_prec);
    for (i, a) in an.iter().take(q_prec).enumerate() {
        let n = PadicNum::from_i64(ctx, i as i64 + 1);
        coeffs.push(a.to_padic(ctx)?.div(&n)?);
    }
    Ok(JetSeries::from_qexp(
        ctx,
        1,
        &coeffs,
        q_prec as i64,
        delta_deg,
    ))
}

pub fn f_inverse(nf: &NewformData, q_prec: usize, ctx: &Arc<PadicCtx>) -> Result<JetSeries> {
    f_inverse_from(&nf.an, q_prec, default_delta_deg(0), ctx)
}
