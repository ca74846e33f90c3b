//! Teichmüller lifts, conjugate weights, and Dirichlet characters given as
//! exact root-of-unity exponents.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicNum};

/// The (p-1)-st root of unity congruent to d mod p.
pub fn teichmuller(d: i64, ctx: &Arc<PadicCtx>) -> Result<PadicNum> {
    let p = ctx.p() as i64;
    if d.rem_euclid(p) == 0 {
        return Err(Error::NotAUnit(format!("{d} mod {p}")));
    }
    let mut x = PadicNum::from_i64(ctx, d);
    // each step gains at least one digit
    for _ in 0..=ctx.prec() + 1 {
        let next = x.pow(ctx.p());
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Ok(x)
}

/// Least primitive root modulo the prime p.
pub fn primitive_root(p: u64) -> u64 {
    let n = p - 1;
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    (2..p)
        .find(|&g| primes.iter().all(|&q| pow_mod(g, n / q, p) != 1))
        .unwrap_or(1)
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}

/// A weight 3 <= kappa <= p at the prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyQuery {
    pub p: u64,
    pub kappa: i64,
}

impl ConjugacyQuery {
    pub fn new(p: u64, kappa: i64) -> Result<Self> {
        if p < 5 || !(2..p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::InvalidContext(format!(
                "p = {p} must be a prime >= 5"
            )));
        }
        if !(3..=p as i64).contains(&kappa) {
            return Err(Error::InvalidWeight { kappa, p });
        }
        Ok(ConjugacyQuery { p, kappa })
    }

    pub fn conjugates(&self) -> Result<Vec<i64>> {
        conjugate_set(self.p, self.kappa)
    }
}

/// All kappa' in [1, p-2] with kappa' = c (2 - kappa) mod p-1 for a unit c.
pub fn conjugate_set(p: u64, kappa: i64) -> Result<Vec<i64>> {
    let n = p as i64 - 1;
    let mut out: Vec<i64> = (1..n)
        .filter(|c| c.gcd(&n) == 1)
        .map(|c| (c * (2 - kappa)).rem_euclid(n))
        .filter(|&k| k >= 1)
        .collect();
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(Error::DegenerateWeight { kappa, p });
    }
    Ok(out)
}

/// A Dirichlet character: `values[u] = j` means chi(u) = zeta_order^j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterData {
    pub modulus: u64,
    pub order: u64,
    pub values: BTreeMap<u64, u64>,
}

impl CharacterData {
    /// Check that the table covers exactly the units and is multiplicative.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCharacter(m));
        if self.modulus < 1 || self.order < 1 {
            return bad("modulus and order must be positive".into());
        }
        let units: Vec<u64> = (1..=self.modulus)
            .map(|u| u % self.modulus)
            .filter(|u| u.gcd(&self.modulus) == 1)
            .collect();
        if units.len() != self.values.len() || units.iter().any(|u| !self.values.contains_key(u)) {
            return bad("values must be given on exactly the units".into());
        }
        for &a in &units {
            for &b in &units {
                let ab = a * b % self.modulus;
                if (self.values[&a] + self.values[&b]) % self.order != self.values[&ab] % self.order
                {
                    return bad(format!("not multiplicative at ({a}, {b})"));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(modulus: u64) -> Self {
        let values = (1..=modulus)
            .map(|u| u % modulus)
            .filter(|u| u.gcd(&modulus) == 1)
            .map(|u| (u, 0))
            .collect();
        CharacterData {
            modulus,
            order: 1,
            values,
        }
    }

    /// The character of (Z/pZ)^x sending the least primitive root g to
    /// zeta_(p-1)^k; under zeta_(p-1) -> Theta_p(g) this is Theta_p^k.
    pub fn teichmuller_power(p: u64, k: i64) -> Self {
        let n = p - 1;
        let g = primitive_root(p);
        let mut values = BTreeMap::new();
        let mut x = 1u64;
        for i in 0..n {
            values.insert(x, (k * i as i64).rem_euclid(n as i64) as u64);
            x = x * g % p;
        }
        CharacterData {
            modulus: p,
            order: n,
            values,
        }
    }

    /// Split a character mod N p into its N- and p-parts through
    /// (Z/NpZ)^x = (Z/NZ)^x x (Z/pZ)^x.
    pub fn split(&self, n: u64, p: u64) -> Result<(CharacterData, CharacterData)> {
        self.validate()?;
        if n * p != self.modulus || n.gcd(&p) != 1 {
            return Err(Error::InvalidCharacter(format!(
                "modulus {} is not {n} * {p} with coprime factors",
                self.modulus
            )));
        }
        // x = a mod n, 1 mod p and x = 1 mod n, b mod p
        let crt = |a: u64, b: u64| -> u64 {
            (0..self.modulus)
                .find(|x| x % n == a % n && x % p == b % p)
                .unwrap()
        };
        let part = |m: u64, lift: &dyn Fn(u64) -> u64| -> CharacterData {
            let values = (1..=m)
                .map(|u| u % m)
                .filter(|u| u.gcd(&m) == 1)
                .map(|u| (u, self.values[&lift(u)]))
                .collect();
            CharacterData {
                modulus: m,
                order: self.order,
                values,
            }
        };
        let eps_n = part(n, &|a| crt(a, 1));
        let eps_p = part(p, &|b| crt(1, b));
        Ok((eps_n, eps_p))
    }
}

/// Whether a character of (Z/pZ)^x, embedded by
/// zeta_order -> Theta_p(g)^((p-1)/order), equals Theta_p^(kappa-2).
pub fn check_serre_compat(eps_p: &CharacterData, kappa: i64, ctx: &Arc<PadicCtx>) -> Result<bool> {
    eps_p.validate()?;
    let p = ctx.p();
    if eps_p.modulus != p {
        return Err(Error::InvalidCharacter(format!(
            "modulus {} is not p = {p}",
            eps_p.modulus
        )));
    }
    if !(p - 1).is_multiple_of(eps_p.order) {
        return Err(Error::InvalidCharacter(format!(
            "order {} does not divide p - 1",
            eps_p.order
        )));
    }
    let g = primitive_root(p);
    let theta_g = teichmuller(g as i64, ctx)?;
    let exp_eps = eps_p.values[&g] as i64 * ((p - 1) / eps_p.order) as i64;
    let lhs = theta_g.powi(exp_eps)?;
    let rhs = theta_g.powi(kappa - 2)?;
    let same_exponent = (exp_eps - (kappa - 2)).rem_euclid(p as i64 - 1) == 0;
    let agree = lhs.agrees(&rhs);
    if agree != same_exponent {
        return Err(Error::PrecisionExhausted(
            "roots of unity indistinguishable at this precision".into(),
        ));
    }
    Ok(agree)
}
