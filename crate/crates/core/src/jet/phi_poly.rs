use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::JetSeries;
use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicNum};

/// sum a_i phi^i, an element of K_pi[phi] acting on series and numbers.
#[derive(Clone, Debug)]
pub struct PhiPoly {
    coeffs: Vec<PadicNum>,
}

impl PhiPoly {
    /// Coefficients lowest degree first; trailing exact zeros are trimmed.
    pub fn new(coeffs: Vec<PadicNum>) -> Self {
        let mut p = PhiPoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        PhiPoly { coeffs: Vec::new() }
    }

    pub fn one(ctx: &Arc<PadicCtx>) -> Self {
        Self::new(vec![PadicNum::one(ctx)])
    }

    /// phi itself.
    pub fn phi(ctx: &Arc<PadicCtx>) -> Self {
        Self::from_ints(ctx, &[0, 1])
    }

    pub fn from_ints(ctx: &Arc<PadicCtx>, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| PadicNum::from_i64(ctx, c)).collect())
    }

    pub fn from_rationals(ctx: &Arc<PadicCtx>, coeffs: &[BigRational]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| PadicNum::from_rational(ctx, c))
                .collect(),
        )
    }

    /// phi^2 - a_p phi + p, the Hecke polynomial of an ordinary weight-two
    /// eigenform at p.
    pub fn hecke(ctx: &Arc<PadicCtx>, a_p: &PadicNum) -> Self {
        Self::new(vec![
            PadicNum::from_i64(ctx, ctx.p() as i64),
            a_p.neg(),
            PadicNum::one(ctx),
        ])
    }

    /// The Hecke polynomial divided by p.
    pub fn hecke_normalized(ctx: &Arc<PadicCtx>, a_p: &PadicNum) -> Self {
        let inv_p = PadicNum::from_i64(ctx, ctx.p() as i64)
            .inv()
            .expect("p is nonzero");
        Self::hecke(ctx, a_p).scale(&inv_p)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[PadicNum] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &PadicNum) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    /// Product in the twisted ring: phi^i * b = phi^i(b) * phi^i.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let ctx = self.coeffs[0].ctx().clone();
        let mut out = vec![PadicNum::exact_zero(&ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let mut fb = b.clone();
                for _ in 0..i {
                    fb = fb.frobenius();
                }
                out[i + j] = out[i + j].add(&a.mul(&fb));
            }
        }
        Self::new(out)
    }

    /// sum a_i phi^i(g).
    pub fn apply(&self, g: &JetSeries) -> Result<JetSeries> {
        let Some(deg) = self.degree() else {
            return Ok(JetSeries::zero(g.ctx(), g.q_prec(), g.delta_deg()).with_order(g.order()));
        };
        let requested = g.order() + deg;
        if requested > super::MAX_ORDER {
            return Err(Error::OrderOverflow {
                requested,
                max: super::MAX_ORDER,
            });
        }
        let mut iterates = vec![g.clone()];
        for i in 0..deg {
            let next = iterates[i].phi()?;
            iterates.push(next);
        }
        // the sum is truncated at the precision of the highest iterate
        let q_prec = iterates[deg].q_prec();
        let mut acc = JetSeries::zero(g.ctx(), q_prec, g.delta_deg()).with_order(requested);
        for (a, it) in self.coeffs.iter().zip(&iterates) {
            if a.is_exact_zero() {
                continue;
            }
            acc = acc.add(&it.scalar_mul(a))?;
        }
        Ok(acc)
    }

    /// sum a_i phi^i(x).
    pub fn apply_num(&self, x: &PadicNum) -> PadicNum {
        let mut acc = PadicNum::exact_zero(x.ctx());
        let mut it = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                it = it.frobenius();
            }
            acc = acc.add(&a.mul(&it));
        }
        acc
    }
}

impl fmt::Display for PhiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*phi"),
                _ => format!("({c})*phi^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// lambda^w = prod phi^i(lambda)^(w_i) for a weight w = sum w_i phi^i in Z[phi].
pub fn weight_action(lambda: &PadicNum, w: &[i64]) -> Result<PadicNum> {
    if !lambda.is_unit() {
        return Err(Error::NotAUnit(lambda.to_string()));
    }
    let mut acc = PadicNum::one(lambda.ctx());
    let mut it = lambda.clone();
    for (i, &wi) in w.iter().enumerate() {
        if i > 0 {
            it = it.frobenius();
        }
        acc = acc.mul(&it.powi(wi)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Monomial;

    #[test]
    fn phi_squared_minus_phi_on_q() {
        let c = PadicCtx::zp(5, 8).unwrap();
        let q = JetSeries::q_pow(&c, 1, 40, 6);
        let p = PhiPoly::from_ints(&c, &[0, -1, 1]);
        let got = p.apply(&q).unwrap();
        assert_eq!(got.order(), 2);
        // (q^5 + 5dq)^5 + 5((dq)^5 + 5 d2q) - q^5 - 5 dq
        let phi_q = q.phi().unwrap();
        let five = PadicNum::from_i64(&c, 5);
        let dq = JetSeries::var(&c, 1, 40, 6).unwrap();
        let d2q = JetSeries::var(&c, 2, 40, 6).unwrap();
        let expect = phi_q
            .pow(5)
            .unwrap()
            .add(
                &dq.pow(5)
                    .unwrap()
                    .add(&d2q.scalar_mul(&five))
                    .unwrap()
                    .scalar_mul(&five),
            )
            .unwrap()
            .sub(&phi_q)
            .unwrap();
        assert!(got.agrees(&expect).unwrap(), "{got}\n{expect}");
        assert_eq!(
            got.coeff(&Monomial::new(0, &[0, 1])).unwrap(),
            &PadicNum::from_i64(&c, 25)
        );
    }

    #[test]
    fn identity_action() {
        let c = PadicCtx::zp(7, 6).unwrap();
        let g = JetSeries::q_pow(&c, 3, 12, 2);
        assert!(PhiPoly::one(&c).apply(&g).unwrap().agrees(&g).unwrap());
    }

    #[test]
    fn weight_on_teichmuller_like_unit() {
        let c = PadicCtx::zp(5, 6).unwrap();
        let lam = PadicNum::from_i64(&c, 7);
        // phi is the identity on Z_p, so lambda^(2 + 3 phi) = lambda^5
        let got = weight_action(&lam, &[2, 3]).unwrap();
        assert_eq!(got, lam.pow(5));
        let inv = weight_action(&lam, &[0, -1]).unwrap();
        assert!(inv.mul(&lam).agrees(&PadicNum::one(&c)));
    }
}
