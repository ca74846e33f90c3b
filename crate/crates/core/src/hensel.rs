//! Newton iteration for simple roots of polynomials over the p-adic ring
//! and over its q-series and delta-Fourier extensions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::JetSeries;
use crate::padic::{PadicCtx, PadicNum};
use crate::qexp::eisenstein_qexp;

/// The operations Newton iteration needs from a pi-adically complete ring.
pub trait HenselRing: Clone {
    fn h_add(&self, other: &Self) -> Result<Self>;
    fn h_sub(&self, other: &Self) -> Result<Self>;
    fn h_mul(&self, other: &Self) -> Result<Self>;
    fn h_scale(&self, k: i64) -> Self;
    /// Inverse of an element that is a unit modulo pi.
    fn h_inv_unit(&self) -> Result<Self>;
    /// True when the element lies in pi times the ring.
    fn divisible_by_pi(&self) -> bool;
    /// True when the element is zero at its tracked precision.
    fn vanishes(&self) -> bool;
    fn zero_like(&self) -> Self;
}

impl HenselRing for PadicNum {
    fn h_add(&self, other: &Self) -> Result<Self> {
        Ok(self.add(other))
    }
    fn h_sub(&self, other: &Self) -> Result<Self> {
        Ok(self.sub(other))
    }
    fn h_mul(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other))
    }
    fn h_scale(&self, k: i64) -> Self {
        self.scale(k)
    }
    fn h_inv_unit(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        self.inv()
    }
    fn divisible_by_pi(&self) -> bool {
        self.val_floor() >= 1
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        PadicNum::exact_zero(self.ctx())
    }
}

impl HenselRing for JetSeries {
    fn h_add(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn h_sub(&self, other: &Self) -> Result<Self> {
        self.sub(other)
    }
    fn h_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn h_scale(&self, k: i64) -> Self {
        self.scalar_mul(&PadicNum::from_i64(self.ctx(), k))
    }
    fn h_inv_unit(&self) -> Result<Self> {
        self.inv_unit()
    }
    fn divisible_by_pi(&self) -> bool {
        self.min_val_floor().is_none_or(|v| v >= 1)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        JetSeries::zero(self.ctx(), self.q_prec(), self.delta_deg()).with_order(self.order())
    }
}

/// f(z) by Horner's rule; `coeffs[i]` multiplies z^i.
fn eval_poly<R: HenselRing>(coeffs: &[R], z: &R) -> Result<R> {
    let mut acc = z.zero_like();
    for c in coeffs.iter().rev() {
        acc = acc.h_mul(z)?.h_add(c)?;
    }
    Ok(acc)
}

fn derivative<R: HenselRing>(coeffs: &[R]) -> Vec<R> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.h_scale(i as i64))
        .collect()
}

const MAX_NEWTON_STEPS: usize = 64;

/// The unique root of f congruent to `tau0` modulo pi, where f(tau0) = 0
/// mod pi and f'(tau0) is a unit.
pub fn hensel_lift_root<R: HenselRing>(coeffs: &[R], tau0: &R) -> Result<R> {
    if coeffs.is_empty() {
        return Err(Error::NoResidueRoot);
    }
    if !eval_poly(coeffs, tau0)?.divisible_by_pi() {
        return Err(Error::NoResidueRoot);
    }
    let df = derivative(coeffs);
    if eval_poly(&df, tau0)?.h_inv_unit().is_err() {
        return Err(Error::NotEtale);
    }
    let newton = |z: &R| -> Result<R> {
        let fz = eval_poly(coeffs, z)?;
        let step = fz.h_mul(&eval_poly(&df, z)?.h_inv_unit()?)?;
        z.h_sub(&step)
    };
    let mut z = tau0.clone();
    for _ in 0..MAX_NEWTON_STEPS {
        let next = newton(&z)?;
        let settled = next.h_sub(&z)?.vanishes();
        z = next;
        if settled && eval_poly(coeffs, &z)?.vanishes() {
            // one more step must not move the root
            let again = newton(&z)?;
            if !again.h_sub(&z)?.vanishes() {
                return Err(Error::PrecisionExhausted(
                    "Newton iteration is not stable".into(),
                ));
            }
            return Ok(z);
        }
    }
    Err(Error::PrecisionExhausted(
        "Newton iteration did not settle".into(),
    ))
}

/// The (p-1)-st root of E_{p-1} with constant term 1, to q^q_prec.
pub fn eisenstein_root(ctx: &Arc<PadicCtx>, q_prec: usize) -> Result<JetSeries> {
    let p = ctx.p();
    let e = eisenstein_qexp(p, q_prec, ctx)?;
    let mut coeffs = vec![e.neg()];
    coeffs.extend((1..p - 1).map(|_| e.zero_like()));
    coeffs.push(JetSeries::one(ctx, e.q_prec(), e.delta_deg()));
    hensel_lift_root(&coeffs, &JetSeries::one(ctx, e.q_prec(), e.delta_deg()))
}
