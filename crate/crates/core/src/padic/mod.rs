//! Truncated arithmetic in R_pi and K_pi.
//!
//! A [`PadicCtx`] fixes the prime, the defining polynomial of the extension
//! and the number of significant pi-adic digits. Elements are
//! [`PadicNum`]s: a valuation together with a unit part known to a tracked
//! relative precision.

mod fp;
mod num;
mod ring;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) use num::parse_rational;
pub use num::PadicNum;
pub(crate) use ring::Poly;

/// Largest modulus the word-size residue arithmetic may use.
const MODULUS_LIMIT: i128 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtKind {
    /// Z_p itself.
    Trivial,
    /// Totally ramified, defined by an Eisenstein polynomial; pi = t.
    Ramified,
    /// Unramified, defined by a polynomial irreducible mod p; pi = p.
    Unramified,
}

/// Serializable description of a context, shared with the CLI config format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtxDescriptor {
    pub p: u64,
    pub min_poly: Vec<i64>,
    pub kind: ExtKind,
    pub prec: u32,
}

pub struct PadicCtx {
    p: u64,
    min_poly: Vec<i64>,
    kind: ExtKind,
    prec: u32,
    e: u32,
    deg: usize,
    max_n: u32,
    pows: Vec<i128>,
    /// Non-leading coefficients of the monic defining polynomial, reduced
    /// mod p^max_n.
    g: Poly,
    /// phi(t) mod p^max_n, unramified contexts only.
    frob_t: Option<Poly>,
    /// w = p / pi^e, a unit.
    unit_w: Poly,
}

impl fmt::Debug for PadicCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PadicCtx")
            .field("p", &self.p)
            .field("min_poly", &self.min_poly)
            .field("kind", &self.kind)
            .field("prec", &self.prec)
            .finish()
    }
}

impl PartialEq for PadicCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.min_poly == other.min_poly
            && self.kind == other.kind
            && self.prec == other.prec
    }
}

impl Eq for PadicCtx {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PadicCtx {
    pub fn new(p: u64, min_poly: Vec<i64>, kind: ExtKind, prec: u32) -> Result<Arc<Self>> {
        if !is_prime(p) || p < 5 {
            return Err(Error::InvalidContext(format!(
                "p = {p} must be a prime >= 5"
            )));
        }
        if prec < 1 {
            return Err(Error::InvalidContext("precision must be at least 1".into()));
        }
        if min_poly.len() < 2 || *min_poly.last().unwrap() != 1 {
            return Err(Error::InvalidContext(
                "defining polynomial must be monic of degree >= 1".into(),
            ));
        }
        let deg = min_poly.len() - 1;
        let pi = p as i64;
        let e = match kind {
            ExtKind::Trivial => {
                if min_poly != [0, 1] {
                    return Err(Error::InvalidContext(
                        "trivial context uses min_poly t".into(),
                    ));
                }
                1
            }
            ExtKind::Ramified => {
                let eisenstein =
                    min_poly[..deg].iter().all(|c| c % pi == 0) && min_poly[0] % (pi * pi) != 0;
                if !eisenstein {
                    return Err(Error::InvalidContext(format!(
                        "{min_poly:?} is not Eisenstein at {p}"
                    )));
                }
                deg as u32
            }
            ExtKind::Unramified => {
                if !fp::is_irreducible_mod_p(&min_poly, p) {
                    return Err(Error::InvalidContext(format!(
                        "{min_poly:?} is reducible mod {p}"
                    )));
                }
                1
            }
        };
        let max_n = prec.div_ceil(e) + 2;
        let mut pows = vec![1i128];
        for k in 1..=max_n {
            let next = pows[k as usize - 1]
                .checked_mul(p as i128)
                .filter(|v| *v < MODULUS_LIMIT)
                .ok_or_else(|| {
                    Error::InvalidContext(format!(
                        "p^{max_n} exceeds word-size arithmetic; lower the precision"
                    ))
                })?;
            pows.push(next);
        }
        let big_m = pows[max_n as usize];
        let g: Poly = min_poly[..deg]
            .iter()
            .map(|&c| ring::md(c as i128, big_m))
            .collect();
        let mut ctx = PadicCtx {
            p,
            min_poly,
            kind,
            prec,
            e,
            deg,
            max_n,
            pows,
            g,
            frob_t: None,
            unit_w: SmallVec::new(),
        };
        ctx.unit_w = ctx.compute_unit_w();
        if kind == ExtKind::Unramified && deg > 1 {
            ctx.frob_t = Some(ctx.compute_frob_t());
        }
        Ok(Arc::new(ctx))
    }

    /// Z_p at the given precision.
    pub fn zp(p: u64, prec: u32) -> Result<Arc<Self>> {
        Self::new(p, vec![0, 1], ExtKind::Trivial, prec)
    }

    pub fn ramified(p: u64, eisenstein: Vec<i64>, prec: u32) -> Result<Arc<Self>> {
        Self::new(p, eisenstein, ExtKind::Ramified, prec)
    }

    pub fn unramified(p: u64, min_poly: Vec<i64>, prec: u32) -> Result<Arc<Self>> {
        Self::new(p, min_poly, ExtKind::Unramified, prec)
    }

    pub fn from_descriptor(d: &CtxDescriptor) -> Result<Arc<Self>> {
        Self::new(d.p, d.min_poly.clone(), d.kind, d.prec)
    }

    pub fn descriptor(&self) -> CtxDescriptor {
        CtxDescriptor {
            p: self.p,
            min_poly: self.min_poly.clone(),
            kind: self.kind,
            prec: self.prec,
        }
    }

    /// Same extension with a different working precision.
    pub fn with_prec(&self, prec: u32) -> Result<Arc<Self>> {
        Self::new(self.p, self.min_poly.clone(), self.kind, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> ExtKind {
        self.kind
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Ramification index: v_pi(p).
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Degree of the defining polynomial.
    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn min_poly(&self) -> &[i64] {
        &self.min_poly
    }

    /// phi(t) as the canonical residue mod p^max_n; `None` when phi is the
    /// identity.
    pub fn frobenius_of_generator(&self) -> Option<Vec<i128>> {
        self.frob_t.as_ref().map(|v| v.to_vec())
    }

    fn compute_unit_w(&self) -> Poly {
        let m = self.pow_p(self.max_n);
        match self.kind {
            ExtKind::Ramified => {
                // pi^e = p * u' with u' = -(h_0 + h_1 t + ... + h_{e-1} t^{e-1}), g_j = p h_j
                let pi = self.p as i64;
                let uprime: Poly = self.min_poly[..self.deg]
                    .iter()
                    .map(|&c| ring::md(-(c / pi) as i128, m))
                    .collect();
                self.unit_inverse(&uprime, self.max_n)
            }
            _ => self.poly_one(),
        }
    }

    /// Hensel root of the defining polynomial congruent to t^p.
    fn compute_frob_t(&self) -> Poly {
        let m = self.pow_p(self.max_n);
        let mut t = self.poly_zero();
        t[1] = 1;
        let mut tau = self.ppow(&t, self.p, m);
        let eval = |x: &Poly| -> (Poly, Poly) {
            // g(x) and g'(x) by Horner over the full monic polynomial
            let mut val = self.poly_zero();
            let mut der = self.poly_zero();
            for &c in self.min_poly.iter().rev() {
                der = self.padd(&self.pmul(&der, x, m), &val, m);
                val = self.pmul(&val, x, m);
                val[0] = ring::md(val[0] + c as i128, m);
            }
            (val, der)
        };
        for _ in 0..128 {
            let (gv, gd) = eval(&tau);
            if gv.iter().all(|&c| c == 0) {
                return tau;
            }
            let inv = self.unit_inverse(&gd, self.max_n);
            tau = self.psub(&tau, &self.pmul(&gv, &inv, m), m);
        }
        panic!("Frobenius lift did not converge");
    }
}
