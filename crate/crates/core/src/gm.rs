//! The delta-character of the multiplicative group,
//! psi(x) = pi^m sum_{n>=1} (-1)^(n-1) (pi^n / n) (delta x / x^p)^n,
//! which is pi^m log(phi(x) / x^p) and hence a homomorphism R_pi^x -> R_pi.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::JetSeries;
use crate::padic::{PadicCtx, PadicNum};

#[derive(Clone, Debug)]
pub struct GmPsiParams {
    ctx: Arc<PadicCtx>,
    m: u32,
    series_cutoff: u64,
}

fn vp(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

impl GmPsiParams {
    /// Minimal normalisation and the matching series cutoff for `ctx`.
    pub fn new(ctx: &Arc<PadicCtx>) -> Self {
        let m = minimal_m(ctx.p(), ctx.e());
        let series_cutoff = cutoff(ctx.p(), ctx.e(), m, ctx.prec());
        GmPsiParams {
            ctx: ctx.clone(),
            m,
            series_cutoff,
        }
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn series_cutoff(&self) -> u64 {
        self.series_cutoff
    }

    /// Lower bound n + m - e v_p(n) on the valuation of the n-th
    /// coefficient pi^(n+m)/n.
    pub fn term_valuation_bound(&self, n: u64) -> i64 {
        n as i64 + self.m as i64 - (self.ctx.e() * vp(n, self.ctx.p())) as i64
    }

    /// pi^(n+m) / n.
    fn coefficient(&self, n: u64) -> PadicNum {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let inv_n = PadicNum::from_i64(&self.ctx, sign * n as i64)
            .inv()
            .expect("n is nonzero");
        inv_n.mul_pi_pow(n as i64 + self.m as i64)
    }
}

/// Smallest m >= 0 with e v_p(n) - n <= m for every n >= 1. Only prime
/// powers p^k matter, and e k - p^k is eventually decreasing.
pub fn minimal_m(p: u64, e: u32) -> u32 {
    let mut best = 0i64;
    let mut pk: u64 = 1;
    for k in 1..64u32 {
        pk = match pk.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
        let slack = (e * k) as i64 - pk as i64;
        best = best.max(slack);
        if pk > (e as u64) * 64 {
            break;
        }
    }
    best as u32
}

/// Smallest N such that n + m - e v_p(n) >= prec for every n > N.
fn cutoff(p: u64, e: u32, m: u32, prec: u32) -> u64 {
    // on [p^k, p^(k+1)) the bound is at least p^k + m - e k, which increases
    // with k once p^k >= e
    let mut pk: u64 = 1;
    let mut k = 0u32;
    while pk < e as u64 || (pk as i64 + m as i64 - (e * k) as i64) < prec as i64 {
        pk *= p;
        k += 1;
    }
    (1..pk)
        .rev()
        .find(|&n| (n as i64 + m as i64 - (e * vp(n, p)) as i64) < prec as i64)
        .unwrap_or(0)
}

/// psi(x) for a unit x, certified modulo pi^prec.
pub fn psi_gm(x: &PadicNum, params: &GmPsiParams) -> Result<PadicNum> {
    if !x.is_unit() {
        return Err(Error::NotAUnit(x.to_string()));
    }
    let ctx = x.ctx();
    let w = x.delta_pi()?.mul(&x.pow(ctx.p()).inv()?);
    let mut acc = PadicNum::zero_at(ctx, ctx.prec() as i64);
    let mut wn = PadicNum::one(ctx);
    for n in 1..=params.series_cutoff {
        wn = wn.mul(&w);
        acc = acc.add(&params.coefficient(n).mul(&wn));
    }
    Ok(acc)
}

/// The same series in the delta-Fourier ring, for x with a unit constant
/// term; the jet order rises by one.
pub fn psi_gm_on_series(x: &JetSeries, params: &GmPsiParams) -> Result<JetSeries> {
    let ctx = x.ctx();
    let xp_inv = x.pow(ctx.p())?.inv_unit()?;
    let w = x.delta()?.mul(&xp_inv)?;
    let mut acc = JetSeries::zero(ctx, w.q_prec(), w.delta_deg()).with_order(w.order());
    let mut wn = JetSeries::one(ctx, w.q_prec(), w.delta_deg()).with_order(w.order());
    for n in 1..=params.series_cutoff {
        wn = wn.mul(&w)?;
        acc = acc.add(&wn.scalar_mul(&params.coefficient(n)))?;
    }
    let tail = PadicNum::zero_at(ctx, ctx.prec() as i64);
    Ok(acc.map_coeffs(|c| c.add(&tail)))
}
