//! Assembly of sum_sigma P_sigma(phi) (f^(-1))^sigma in the delta-Fourier
//! ring, with its integrality and weight metadata.

use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::chars::ConjugacyQuery;
use crate::error::{Error, Result};
use crate::jet::{JetSeries, PhiPoly};
use crate::padic::PadicCtx;
use crate::qexp::{f_inverse_from, NewformData};

/// Highest jet order a sharp expansion may have.
pub const MAX_SHARP_ORDER: usize = 2;

#[derive(Clone, Debug)]
pub struct SharpSpec {
    nf: NewformData,
    polys: Vec<PhiPoly>,
    realized_kappa_prime: Option<i64>,
    order: usize,
}

impl SharpSpec {
    /// `polys[i]` acts on the i-th coefficient list of `nf.sigma_lists()`.
    pub fn new(
        nf: NewformData,
        polys: Vec<PhiPoly>,
        realized_kappa_prime: Option<i64>,
        order: usize,
    ) -> Result<Self> {
        nf.validate()?;
        let lists = nf.sigma_lists().len();
        if polys.len() != lists {
            return Err(Error::InvalidNewform(format!(
                "{} polynomials for {lists} coefficient lists",
                polys.len()
            )));
        }
        if !(1..=MAX_SHARP_ORDER).contains(&order) {
            return Err(Error::OrderOverflow {
                requested: order,
                max: MAX_SHARP_ORDER,
            });
        }
        if let Some(deg) = polys.iter().filter_map(PhiPoly::degree).max() {
            if deg > order {
                return Err(Error::OrderOverflow {
                    requested: deg,
                    max: order,
                });
            }
        }
        if let Some(kp) = realized_kappa_prime {
            let kappa = nf.kappa.ok_or_else(|| {
                Error::InvalidNewform("a realized kappa' needs the weight kappa".into())
            })?;
            let set = ConjugacyQuery::new(nf.p, kappa)?.conjugates()?;
            if !set.contains(&kp) {
                return Err(Error::InvalidWeight { kappa: kp, p: nf.p });
            }
        }
        Ok(SharpSpec {
            nf,
            polys,
            realized_kappa_prime,
            order,
        })
    }

    /// One polynomial acting on the form alone.
    pub fn single(nf: NewformData, poly: PhiPoly, order: usize) -> Result<Self> {
        let mut polys = vec![poly];
        polys.extend(nf.conjugates.iter().map(|_| PhiPoly::zero()));
        Self::new(nf, polys, None, order)
    }

    pub fn nf(&self) -> &NewformData {
        &self.nf
    }

    pub fn polys(&self) -> &[PhiPoly] {
        &self.polys
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The conjugate weights of kappa, when kappa is known and admissible.
    pub fn conjugates(&self) -> Option<Vec<i64>> {
        let kappa = self.nf.kappa?;
        ConjugacyQuery::new(self.nf.p, kappa)
            .ok()?
            .conjugates()
            .ok()
    }
}

/// Whether a series is distinguishable from zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nonzero {
    Yes,
    No,
    Inconclusive,
}

impl Serialize for Nonzero {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Nonzero::Yes => s.serialize_bool(true),
            Nonzero::No => s.serialize_bool(false),
            Nonzero::Inconclusive => s.serialize_str("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpMeta {
    pub conjugates: Option<Vec<i64>>,
    pub realized_kappa_prime: Option<i64>,
    pub order: usize,
    pub q_prec: i64,
    pub delta_deg: u32,
    pub nu: u32,
    pub min_valuation: Option<i64>,
    pub nonzero: Nonzero,
}

#[derive(Clone, Debug)]
pub struct SharpOutput {
    pub series: JetSeries,
    pub meta: SharpMeta,
}

/// sum_sigma P_sigma(phi) applied to f^(-1) of the sigma-th coefficient
/// list, truncated at q^q_prec and delta-degree `delta_deg`.
pub fn assemble_sharp(
    spec: &SharpSpec,
    q_prec: usize,
    delta_deg: u32,
    ctx: &Arc<PadicCtx>,
) -> Result<SharpOutput> {
    if spec.nf.p != ctx.p() {
        return Err(Error::InvalidContext(format!(
            "newform prime {} differs from context prime {}",
            spec.nf.p,
            ctx.p()
        )));
    }
    let out_order = spec
        .polys
        .iter()
        .filter_map(PhiPoly::degree)
        .max()
        .unwrap_or(0);
    let mut acc = JetSeries::zero(ctx, q_prec as i64, delta_deg).with_order(out_order);
    for (list, poly) in spec.nf.sigma_lists().into_iter().zip(&spec.polys) {
        let f_inv = f_inverse_from(list, q_prec, delta_deg, ctx)?;
        if poly.is_zero() {
            continue;
        }
        acc = acc.add(&poly.apply(&f_inv)?)?;
    }
    let nonzero = match nonzero_check(&acc) {
        Ok(true) => Nonzero::Yes,
        Ok(false) => Nonzero::No,
        Err(_) => Nonzero::Inconclusive,
    };
    let meta = SharpMeta {
        conjugates: spec.conjugates(),
        realized_kappa_prime: spec.realized_kappa_prime,
        order: acc.order(),
        q_prec: acc.q_prec(),
        delta_deg: acc.delta_deg(),
        nu: integrality_exponent(&acc),
        min_valuation: acc.min_valuation(),
        nonzero,
    };
    Ok(SharpOutput { series: acc, meta })
}

/// Least nu >= 0 with pi^nu s coefficient-wise integral.
pub fn integrality_exponent(s: &JetSeries) -> u32 {
    s.min_val_floor().map_or(0, |v| (-v).max(0) as u32)
}

/// False for a series with no terms, true when some coefficient is
/// distinguishable from zero, and `Inconclusive` when every coefficient is
/// zero only at the tracked precision.
pub fn nonzero_check(s: &JetSeries) -> Result<bool> {
    if s.terms().all(|(_, c)| c.is_exact_zero()) {
        return Ok(false);
    }
    if s.terms().any(|(_, c)| !c.is_zero()) {
        return Ok(true);
    }
    Err(Error::Inconclusive)
}
