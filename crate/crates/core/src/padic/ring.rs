//! Word-size arithmetic in Z_p[t]/(g) modulo p^n.
//!
//! Polynomials are dense, low degree first, always of length `deg`. All
//! moduli are powers of p below 2^62 so a product of two residues fits in an
//! i128.

use smallvec::SmallVec;

use super::{ExtKind, PadicCtx};

pub(crate) type Poly = SmallVec<[i128; 4]>;

#[inline]
pub(crate) fn md(a: i128, m: i128) -> i128 {
    let r = a % m;
    if r < 0 {
        r + m
    } else {
        r
    }
}

#[inline]
fn mulm(a: i128, b: i128, m: i128) -> i128 {
    md(a * b, m)
}

pub(crate) fn vp_i128(mut c: i128, p: i128) -> u32 {
    debug_assert!(c != 0);
    let mut v = 0;
    while c % p == 0 {
        c /= p;
        v += 1;
    }
    v
}

impl PadicCtx {
    #[inline]
    pub(crate) fn pow_p(&self, n: u32) -> i128 {
        self.pows[n as usize]
    }

    /// Working exponent n so that residues mod p^n pin an element mod pi^rel
    /// with one guard digit to spare.
    #[inline]
    pub(crate) fn work_n(&self, rel: u32) -> u32 {
        (rel.div_ceil(self.e) + 1).min(self.max_n)
    }

    /// pi-adic valuation of the basis element t^j.
    #[inline]
    fn basis_val(&self, j: usize) -> u32 {
        match self.kind {
            ExtKind::Ramified => j as u32,
            _ => 0,
        }
    }

    pub(crate) fn poly_zero(&self) -> Poly {
        SmallVec::from_elem(0, self.deg)
    }

    pub(crate) fn poly_one(&self) -> Poly {
        let mut a = self.poly_zero();
        a[0] = 1;
        a
    }

    pub(crate) fn reduce(&self, a: &mut [i128], m: i128) {
        for c in a.iter_mut() {
            *c = md(*c, m);
        }
    }

    pub(crate) fn padd(&self, a: &[i128], b: &[i128], m: i128) -> Poly {
        a.iter().zip(b).map(|(x, y)| md(x + y, m)).collect()
    }

    pub(crate) fn psub(&self, a: &[i128], b: &[i128], m: i128) -> Poly {
        a.iter().zip(b).map(|(x, y)| md(x - y, m)).collect()
    }

    pub(crate) fn pmul(&self, a: &[i128], b: &[i128], m: i128) -> Poly {
        let d = self.deg;
        if d == 1 {
            return SmallVec::from_elem(mulm(md(a[0], m), md(b[0], m), m), 1);
        }
        let mut prod = vec![0i128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            let x = md(x, m);
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = md(prod[i + j] + mulm(x, md(y, m), m), m);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                prod[k - d + j] = md(prod[k - d + j] - mulm(c, self.g[j], m), m);
            }
        }
        prod.truncate(d);
        SmallVec::from_vec(prod)
    }

    pub(crate) fn ppow(&self, a: &[i128], mut e: u64, m: i128) -> Poly {
        let mut acc = self.poly_one();
        acc[0] = md(1, m);
        let mut base: Poly = a.iter().map(|x| md(*x, m)).collect();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.pmul(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.pmul(&base, &base, m);
            }
        }
        acc
    }

    /// Multiply by t (ramified case only).
    fn mul_t(&self, a: &[i128], m: i128) -> Poly {
        let d = self.deg;
        let top = a[d - 1];
        let mut out = self.poly_zero();
        for j in (1..d).rev() {
            out[j] = a[j - 1];
        }
        out[0] = 0;
        if top != 0 {
            for j in 0..d {
                out[j] = md(out[j] - mulm(md(top, m), self.g[j], m), m);
            }
        }
        self.reduce(&mut out, m);
        out
    }

    /// Multiply by pi^k.
    pub(crate) fn shift_pi(&self, a: &[i128], k: u32, m: i128) -> Poly {
        match self.kind {
            ExtKind::Ramified => {
                let mut out: Poly = a.iter().map(|x| md(*x, m)).collect();
                for _ in 0..k {
                    out = self.mul_t(&out, m);
                }
                out
            }
            _ => {
                if k >= self.max_n {
                    return self.poly_zero();
                }
                let pk = self.pow_p(k);
                a.iter().map(|x| mulm(md(*x, m), md(pk, m), m)).collect()
            }
        }
    }

    /// pi-adic valuation of a residue that is known modulo pi^cap; returns
    /// `cap` when the residue vanishes at that precision.
    pub(crate) fn poly_val(&self, a: &[i128], cap: u32) -> u32 {
        let p = self.p as i128;
        let mut v = cap;
        for (j, &c) in a.iter().enumerate() {
            if c != 0 {
                let vc = self.e * vp_i128(c, p) + self.basis_val(j);
                v = v.min(vc);
            }
        }
        v
    }

    /// Divide a residue mod p^n by pi^v, where v does not exceed its
    /// valuation. Returns the quotient and the p-exponent it is correct to.
    pub(crate) fn unshift_pi(&self, a: &[i128], v: u32, n: u32) -> (Poly, u32) {
        if v == 0 {
            return (a.iter().copied().collect(), n);
        }
        let m = self.pow_p(n);
        match self.kind {
            ExtKind::Ramified => {
                let e = self.e;
                let s = v / e;
                let j = v % e;
                // a / pi^v = a * t^(e-j) * w^(s+1) / p^(s+1), or a * w^s / p^s when j = 0
                let (b, drop) = if j == 0 {
                    let ws = self.ppow(&self.unit_w, s as u64, m);
                    (self.pmul(a, &ws, m), s)
                } else {
                    let shifted = self.shift_pi(a, e - j, m);
                    let ws = self.ppow(&self.unit_w, (s + 1) as u64, m);
                    (self.pmul(&shifted, &ws, m), s + 1)
                };
                let pd = self.pow_p(drop);
                let out = b
                    .iter()
                    .map(|c| {
                        debug_assert!(c % pd == 0, "unshift_pi: residue not divisible");
                        c / pd
                    })
                    .collect();
                (out, n - drop)
            }
            _ => {
                let pv = self.pow_p(v);
                let out = a
                    .iter()
                    .map(|c| {
                        debug_assert!(c % pv == 0, "unshift_pi: residue not divisible");
                        c / pv
                    })
                    .collect();
                (out, n - v)
            }
        }
    }

    /// Canonical representative modulo pi^rel: coefficient j is reduced into
    /// [0, p^k_j) with k_j = ceil((rel - val(t^j)) / e).
    pub(crate) fn canonical(&self, a: &[i128], rel: u32) -> Poly {
        a.iter()
            .enumerate()
            .map(|(j, &c)| {
                let bv = self.basis_val(j);
                if rel <= bv {
                    0
                } else {
                    let k = (rel - bv).div_ceil(self.e);
                    md(c, self.pow_p(k))
                }
            })
            .collect()
    }

    /// Symmetric version of [`canonical`](Self::canonical), for display.
    pub(crate) fn canonical_symmetric(&self, a: &[i128], rel: u32) -> Vec<i128> {
        a.iter()
            .enumerate()
            .map(|(j, &c)| {
                let bv = self.basis_val(j);
                if rel <= bv {
                    0
                } else {
                    let k = (rel - bv).div_ceil(self.e);
                    let m = self.pow_p(k);
                    let r = md(c, m);
                    if 2 * r > m {
                        r - m
                    } else {
                        r
                    }
                }
            })
            .collect()
    }

    /// Inverse of a unit modulo p^n.
    pub(crate) fn unit_inverse(&self, u: &[i128], n: u32) -> Poly {
        let p = self.p as i128;
        let m = self.pow_p(n);
        let mut y = match self.kind {
            ExtKind::Unramified => {
                // residue field F_q, q = p^f: inverse is u^(q-2)
                let q = (self.p as u128).pow(self.deg as u32);
                let mut r = self.ppow(u, (q - 2) as u64, p);
                self.reduce(&mut r, p);
                r
            }
            _ => {
                let mut r = self.poly_zero();
                let c0 = md(u[0], p);
                debug_assert!(c0 != 0, "unit_inverse of a non-unit");
                r[0] = super::fp::pow_mod(c0 as u64, self.p - 2, self.p) as i128;
                r
            }
        };
        // Newton: y <- y (2 - u y); each step doubles the pi-adic precision
        let two = {
            let mut t = self.poly_zero();
            t[0] = 2;
            t
        };
        for _ in 0..128 {
            let uy = self.pmul(u, &y, m);
            if uy[0] == 1 && uy[1..].iter().all(|&c| c == 0) {
                return y;
            }
            y = self.pmul(&y, &self.psub(&two, &uy, m), m);
        }
        panic!("unit_inverse did not converge");
    }

    /// Apply the Frobenius lift to a residue mod p^n.
    pub(crate) fn frob_poly(&self, a: &[i128], m: i128) -> Poly {
        match &self.frob_t {
            None => a.iter().copied().collect(),
            Some(phi_t) => {
                // Horner in phi(t)
                let mut acc = self.poly_zero();
                for &c in a.iter().rev() {
                    acc = self.pmul(&acc, phi_t, m);
                    acc[0] = md(acc[0] + c, m);
                }
                acc
            }
        }
    }
}
