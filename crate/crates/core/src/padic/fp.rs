//! Dense polynomials over F_p, only as much as the irreducibility test needs.

type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b128 = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    b = r as u64;
    b
}

fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = (r[k] as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = k - dm;
        for (j, &mj) in m.iter().enumerate() {
            let sub = (c as u128 * mj as u128 % p as u128) as u64;
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    rem(&prod, m, p)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// t^(p^k) mod m.
fn frobenius_power_of_t(m: &[u64], p: u64, k: u32) -> FpPoly {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc: FpPoly = vec![1];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test. `coeffs` are integer coefficients, low degree first.
pub(crate) fn is_irreducible_mod_p(coeffs: &[i64], p: u64) -> bool {
    let g: FpPoly = trim(
        coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect(),
    );
    if g.len() < 2 {
        return false;
    }
    let f = (g.len() - 1) as u32;
    if f == 1 {
        return true;
    }
    let t: FpPoly = vec![0, 1];
    let full = frobenius_power_of_t(&g, p, f);
    if !sub(&full, &rem(&t, &g, p), p).is_empty() {
        return false;
    }
    for r in prime_divisors(f) {
        let h = frobenius_power_of_t(&g, p, f / r);
        let d = gcd(&g, &sub(&h, &t, p), p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}
