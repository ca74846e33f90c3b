//! Formal groups of elliptic curves in the parameter z = -x/y, their
//! logarithms, and the jet logarithms L^n = (1/pi) l(phi^n(T))|_{T=0}.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::JetSeries;
use crate::padic::{PadicCtx, PadicNum};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeierstrassCurve {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

struct BigCoeffs {
    a1: BigInt,
    a2: BigInt,
    a3: BigInt,
    a4: BigInt,
    a6: BigInt,
}

impl WeierstrassCurve {
    pub fn new(a: [i64; 5]) -> Self {
        WeierstrassCurve {
            a1: a[0],
            a2: a[1],
            a3: a[2],
            a4: a[3],
            a6: a[4],
        }
    }

    fn big(&self) -> BigCoeffs {
        BigCoeffs {
            a1: self.a1.into(),
            a2: self.a2.into(),
            a3: self.a3.into(),
            a4: self.a4.into(),
            a6: self.a6.into(),
        }
    }

    /// The curve 11a1: y^2 + y = x^3 - x^2 - 10x - 20.
    pub fn curve_11a1() -> Self {
        Self::new([0, -1, 1, -10, -20])
    }

    pub fn discriminant(&self) -> BigInt {
        let b = self.big();
        let (a1, a2, a3, a4, a6) = (&b.a1, &b.a2, &b.a3, &b.a4, &b.a6);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        !self.discriminant().is_multiple_of(&BigInt::from(p))
    }

    pub fn require_good_reduction(&self, p: u64) -> Result<()> {
        if self.has_good_reduction(p) {
            Ok(())
        } else {
            Err(Error::BadReduction { ell: p })
        }
    }
}

type Uni = Vec<BigInt>;

fn uni_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Uni {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a series with constant term +-1.
fn uni_inv(a: &[BigInt], n: usize) -> Uni {
    let c0 = &a[0];
    assert!(c0.abs().is_one(), "constant term must be a unit of Z");
    let mut out = vec![BigInt::zero(); n + 1];
    out[0] = c0.clone();
    for k in 1..=n {
        let mut s = BigInt::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &out[k - j];
        }
        out[k] = -s * c0;
    }
    out
}

/// Bivariate series sum f[i][j] X^i Y^j truncated at total degree n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries<T> {
    n: usize,
    c: Vec<Vec<T>>,
}

impl<T: Clone + Zero> BiSeries<T> {
    fn zero(n: usize) -> Self {
        BiSeries {
            n,
            c: (0..=n).map(|i| vec![T::zero(); n + 1 - i]).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Coefficient of X^i Y^j.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i + j > self.n {
            T::zero()
        } else {
            self.c[i][j].clone()
        }
    }
}

impl<T> BiSeries<T>
where
    T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Add<&'a T, Output = T>,
{
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut s = Self::zero(n);
        for i in 0..=n {
            for j in 0..=n - i {
                s.c[i][j] = f(i, j);
            }
        }
        s
    }

    fn x(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if (i, j) == (1, 0) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    fn y(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if (i, j) == (0, 1) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    fn constant(n: usize, c: T) -> Self {
        Self::from_fn(n, |i, j| {
            if (i, j) == (0, 0) {
                c.clone()
            } else {
                T::zero()
            }
        })
    }

    fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.n, |i, j| &self.c[i][j] + &o.c[i][j])
    }

    fn scale(&self, k: &T) -> Self {
        Self::from_fn(self.n, |i, j| &self.c[i][j] * k)
    }

    fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i1 in 0..=n {
            for j1 in 0..=n - i1 {
                let a = &self.c[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=n - i1 - j1 {
                    for j2 in 0..=n - i1 - j1 - i2 {
                        let b = &o.c[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        out.c[i1 + i2][j1 + j2] = &out.c[i1 + i2][j1 + j2] + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Substitute a bivariate series with zero constant term into a
    /// univariate one.
    fn compose(coeffs: &[T], inner: &Self) -> Self {
        let n = inner.n;
        let mut acc = Self::zero(n);
        // Horner
        for c in coeffs.iter().take(n + 1).rev() {
            acc = acc.mul(inner).add(&Self::constant(n, c.clone()));
        }
        acc
    }
}

fn neg_bi(s: &BiSeries<BigInt>) -> BiSeries<BigInt> {
    s.scale(&BigInt::from(-1))
}

/// Inverse of a bivariate series with constant term 1.
fn bi_inv_one_plus(s: &BiSeries<BigInt>) -> BiSeries<BigInt> {
    assert!(s.get(0, 0).is_one());
    let n = s.n;
    let mut y = s.clone();
    y.c[0][0] = BigInt::zero();
    let minus_y = neg_bi(&y);
    let one = BiSeries::constant(n, BigInt::one());
    let mut acc = one.clone();
    for _ in 0..n {
        acc = one.add(&minus_y.mul(&acc));
    }
    acc
}

/// w(z) = -1/y as a power series in z = -x/y, by Newton iteration on
/// w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3.
pub fn weierstrass_w(curve: &WeierstrassCurve, n: usize) -> Uni {
    let e = &curve.big();
    let z = |k: usize| -> Uni {
        let mut v = vec![BigInt::zero(); n + 1];
        if k <= n {
            v[k] = BigInt::one();
        }
        v
    };
    let add = |a: &Uni, b: &Uni| -> Uni { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let scale = |a: &Uni, k: &BigInt| -> Uni { a.iter().map(|x| x * k).collect() };
    let mut w = z(3);
    loop {
        let w2 = uni_mul(&w, &w, n);
        let w3 = uni_mul(&w2, &w, n);
        let zw = uni_mul(&z(1), &w, n);
        let z2w = uni_mul(&z(2), &w, n);
        let zw2 = uni_mul(&z(1), &w2, n);
        // f(w) = rhs - w
        let mut f = z(3);
        f = add(&f, &scale(&zw, &e.a1));
        f = add(&f, &scale(&z2w, &e.a2));
        f = add(&f, &scale(&w2, &e.a3));
        f = add(&f, &scale(&zw2, &e.a4));
        f = add(&f, &scale(&w3, &e.a6));
        f = add(&f, &scale(&w, &BigInt::from(-1)));
        if f.iter().all(|c| c.is_zero()) {
            return w;
        }
        // f'(w) = a1 z + a2 z^2 + 2 a3 w + 2 a4 z w + 3 a6 w^2 - 1
        let mut d = scale(&z(0), &BigInt::from(-1));
        d = add(&d, &scale(&z(1), &e.a1));
        d = add(&d, &scale(&z(2), &e.a2));
        d = add(&d, &scale(&w, &(&e.a3 * 2)));
        d = add(&d, &scale(&zw, &(&e.a4 * 2)));
        d = add(&d, &scale(&w2, &(&e.a6 * 3)));
        let step = uni_mul(&f, &uni_inv(&d, n), n);
        w = add(&w, &scale(&step, &BigInt::from(-1)));
    }
}

/// Formal group law and logarithm of a curve to total degree `t_prec`.
#[derive(Clone, Debug)]
pub struct FormalGroupData {
    curve: WeierstrassCurve,
    t_prec: usize,
    w: Uni,
    f: BiSeries<BigInt>,
    omega: Uni,
    log: Vec<BigRational>,
}

pub fn formal_group_law(curve: &WeierstrassCurve, t_prec: usize) -> Result<FormalGroupData> {
    if t_prec < 2 {
        return Err(Error::InvalidCurve("t_prec must be at least 2".into()));
    }
    if curve.discriminant().is_zero() {
        return Err(Error::InvalidCurve("singular curve".into()));
    }
    let n = t_prec;
    let w = weierstrass_w(curve, n + 3);
    let f = group_law(curve, &w, n);
    let omega = invariant_differential(curve, &w, n);
    let mut log = vec![BigRational::zero()];
    for k in 1..=n {
        log.push(BigRational::new(omega[k - 1].clone(), BigInt::from(k)));
    }
    Ok(FormalGroupData {
        curve: curve.clone(),
        t_prec,
        w,
        f,
        omega,
        log,
    })
}

fn group_law(curve: &WeierstrassCurve, w: &Uni, n: usize) -> BiSeries<BigInt> {
    let e = &curve.big();
    let x = BiSeries::<BigInt>::x(n);
    let y = BiSeries::<BigInt>::y(n);
    // lambda = sum_{k>=3} w_k (X^k - Y^k) / (X - Y)
    let lambda = BiSeries::from_fn(n, |i, j| {
        w.get(i + j + 1).cloned().unwrap_or_else(BigInt::zero)
    });
    let w1 = BiSeries::compose(w, &x);
    let nu = w1.add(&neg_bi(&lambda.mul(&x)));
    let l2 = lambda.mul(&lambda);
    let l3 = l2.mul(&lambda);
    // substituting w = lambda z + nu into the equation, the three roots in z
    // sum to -num / den
    let num = lambda
        .scale(&e.a1)
        .add(&l2.scale(&e.a3))
        .add(&nu.scale(&e.a2))
        .add(&lambda.mul(&nu).scale(&(&e.a4 * 2)))
        .add(&l2.mul(&nu).scale(&(&e.a6 * 3)));
    let den = BiSeries::constant(n, BigInt::one())
        .add(&lambda.scale(&e.a2))
        .add(&l2.scale(&e.a4))
        .add(&l3.scale(&e.a6));
    let z3 = neg_bi(&x)
        .add(&neg_bi(&y))
        .add(&neg_bi(&num.mul(&bi_inv_one_plus(&den))));
    let w3 = lambda.mul(&z3).add(&nu);
    // inverse point: -z / (1 - a1 z - a3 w)
    let d = BiSeries::constant(n, BigInt::one())
        .add(&z3.scale(&-&e.a1))
        .add(&w3.scale(&-&e.a3));
    neg_bi(&z3).mul(&bi_inv_one_plus(&d))
}

/// omega(z) dz = dx / (2y + a1 x + a3), which in terms of u = w / z^3 is
/// (2 + z u'/u) / (2 - a1 z - a3 z^3 u).
fn invariant_differential(curve: &WeierstrassCurve, w: &Uni, n: usize) -> Uni {
    let e = &curve.big();
    let u: Uni = (0..=n)
        .map(|k| w.get(k + 3).cloned().unwrap_or_else(BigInt::zero))
        .collect();
    let mut zu_prime: Uni = u
        .iter()
        .enumerate()
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    zu_prime.truncate(n + 1);
    let mut num = uni_mul(&zu_prime, &uni_inv(&u, n), n);
    num[0] += 2;
    let mut den = vec![BigInt::zero(); n + 1];
    den[0] = BigInt::from(2);
    if n >= 1 {
        den[1] = -&e.a1;
    }
    for k in 3..=n {
        den[k] -= &e.a3 * &u[k - 3];
    }
    // divide by 2: num / den = (num / 2) / (den / 2) with den/2 = 1 + ...
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let num_q: Vec<BigRational> = num
        .iter()
        .map(|c| BigRational::from_integer(c.clone()) * &half)
        .collect();
    let den_q: Vec<BigRational> = den
        .iter()
        .map(|c| BigRational::from_integer(c.clone()) * &half)
        .collect();
    let mut inv = vec![BigRational::zero(); n + 1];
    inv[0] = BigRational::one();
    for k in 1..=n {
        let mut s = BigRational::zero();
        for j in 1..=k {
            s += &den_q[j] * &inv[k - j];
        }
        inv[k] = -s;
    }
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut s = BigRational::zero();
        for j in 0..=k {
            s += &num_q[j] * &inv[k - j];
        }
        assert!(
            s.is_integer(),
            "invariant differential has integral coefficients"
        );
        out.push(s.to_integer());
    }
    out
}

/// min over k > from of (k v - e v_p(k)): a lower bound for the valuation
/// of c_k x^k when v_pi(x) >= v and k c_k is integral.
pub fn log_tail_floor(from: usize, v: i64, e: u32, p: u64) -> i64 {
    let vp = |mut k: u64| {
        let mut r = 0i64;
        while k.is_multiple_of(p) {
            k /= p;
            r += 1;
        }
        r
    };
    let e = e as i64;
    let mut best = i64::MAX;
    let mut k = from as u64 + 1;
    // on [p^j, p^(j+1)) the quantity is at least p^j v - e j, increasing in j
    // once (p - 1) p^j v >= e
    let mut pj: u64 = 1;
    let mut j = 0i64;
    loop {
        while pj * p <= k {
            pj *= p;
            j += 1;
        }
        let block_floor = pj as i64 * v - e * j;
        if block_floor >= best && ((p - 1) * pj) as i64 * v >= e {
            return best;
        }
        best = best.min(k as i64 * v - e * vp(k));
        k += 1;
    }
}

impl FormalGroupData {
    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn t_prec(&self) -> usize {
        self.t_prec
    }

    pub fn law(&self) -> &BiSeries<BigInt> {
        &self.f
    }

    /// w(z) to degree t_prec + 3.
    pub fn w(&self) -> &[BigInt] {
        &self.w
    }

    /// Coefficients of the invariant differential, omega_0 = 1.
    pub fn omega(&self) -> &[BigInt] {
        &self.omega
    }

    /// c_0 = 0, c_1 = 1, ..., c_{t_prec}.
    pub fn log_coeffs(&self) -> &[BigRational] {
        &self.log
    }

    /// Indices n with n c_n not a p-adic integer.
    pub fn integrality_failures(&self, p: u64) -> Vec<usize> {
        let pb = BigInt::from(p);
        (1..=self.t_prec)
            .filter(|&n| {
                let a = &self.log[n] * BigRational::from_integer(BigInt::from(n));
                a.denom().is_multiple_of(&pb)
            })
            .collect()
    }

    pub fn log_coeffs_padic(&self, ctx: &Arc<PadicCtx>) -> Vec<PadicNum> {
        self.log
            .iter()
            .map(|c| PadicNum::from_rational(ctx, c))
            .collect()
    }

    /// l(F(X, Y)) - l(X) - l(Y), exactly, to total degree t_prec.
    pub fn log_defect(&self) -> BiSeries<BigRational> {
        let n = self.t_prec;
        let fq = BiSeries::from_fn(n, |i, j| BigRational::from_integer(self.f.get(i, j)));
        let lf = BiSeries::compose(&self.log, &fq);
        let lx = BiSeries::compose(&self.log, &BiSeries::x(n));
        let ly = BiSeries::compose(&self.log, &BiSeries::y(n));
        let minus = BigRational::from_integer(BigInt::from(-1));
        lf.add(&lx.scale(&minus)).add(&ly.scale(&minus))
    }

    /// F(x, y) for points of positive valuation, with the truncation tail.
    pub fn eval_law(&self, x: &PadicNum, y: &PadicNum) -> Result<PadicNum> {
        let ctx = x.ctx();
        let v = x.val_floor().min(y.val_floor());
        if v < 1 {
            return Err(Error::OutOfDomain { val: v });
        }
        let n = self.t_prec;
        let xs = powers(x, n);
        let ys = powers(y, n);
        let mut acc = PadicNum::zero_at(ctx, (n as i64 + 1) * v);
        for i in 0..=n {
            for j in 0..=n - i {
                let c = self.f.get(i, j);
                if !c.is_zero() {
                    acc = acc.add(&PadicNum::from_bigint(ctx, &c).mul(&xs[i]).mul(&ys[j]));
                }
            }
        }
        Ok(acc)
    }

    /// l(x) for a point of positive valuation, with the truncation tail.
    pub fn eval_log(&self, x: &PadicNum) -> Result<PadicNum> {
        let ctx = x.ctx();
        let v = x.val_floor();
        if v < 1 {
            return Err(Error::OutOfDomain { val: v });
        }
        let tail = log_tail_floor(self.t_prec, v, ctx.e(), ctx.p());
        let mut acc = PadicNum::zero_at(ctx, tail);
        let cs = self.log_coeffs_padic(ctx);
        let xs = powers(x, self.t_prec);
        for k in 1..=self.t_prec {
            acc = acc.add(&cs[k].mul(&xs[k]));
        }
        Ok(acc)
    }
}

fn powers(x: &PadicNum, n: usize) -> Vec<PadicNum> {
    let mut out = vec![PadicNum::one(x.ctx())];
    for k in 1..=n {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}

/// L^n together with the least nu making pi^nu L^n integral.
#[derive(Clone, Debug)]
pub struct JetLog {
    pub order: usize,
    pub series: JetSeries,
    pub nu: u32,
}

/// phi^n(T) with T set to 0, as a series in dT, ..., d^nT (written in the
/// delta variables of [`JetSeries`]).
fn phi_iterate_at_zero(ctx: &Arc<PadicCtx>, n: usize, d: u32) -> Result<JetSeries> {
    let q_prec = 2 * d as i64 + 2;
    let mut t = JetSeries::q_pow(ctx, 1, q_prec, d);
    for _ in 0..n {
        t = t.phi()?;
    }
    Ok(t.at_q_zero())
}

/// L^n = (1/pi) l(phi^n(T))|_{T=0}, exact in delta-degree <= t_prec.
pub fn jet_log(n: usize, fg: &FormalGroupData, ctx: &Arc<PadicCtx>) -> Result<JetLog> {
    if !(1..=2).contains(&n) {
        return Err(Error::OrderOverflow {
            requested: n,
            max: 2,
        });
    }
    let d = fg.t_prec as u32;
    let g = phi_iterate_at_zero(ctx, n, d)?;
    let cs = fg.log_coeffs_padic(ctx);
    // Horner in g; g has no constant term so each step raises the delta-degree
    let mut acc = JetSeries::zero(ctx, 0, d).with_order(n);
    for c in cs.iter().skip(1).rev() {
        acc = acc.mul(&g)?.add(&JetSeries::constant(c.clone(), 0, d))?;
    }
    let series = acc.mul(&g)?.mul_pi_pow(-1);
    let nu = series.min_val_floor().map_or(0, |v| (-v).max(0) as u32);
    Ok(JetLog {
        order: n,
        series,
        nu,
    })
}

/// (1/pi) l(phi^n(x)), with phi^n(x) built from x^p + pi delta(x).
pub fn eval_jet_log(n: usize, fg: &FormalGroupData, x: &PadicNum) -> Result<PadicNum> {
    let v = x.val_floor();
    if v < 1 {
        return Err(Error::OutOfDomain { val: v });
    }
    if x.is_exact_zero() {
        return Ok(x.clone());
    }
    let ctx = x.ctx();
    let pi = PadicNum::pi_pow(ctx, 1);
    let mut y = x.clone();
    for _ in 0..n {
        y = y.pow(ctx.p()).add(&pi.mul(&y.delta_pi()?));
    }
    Ok(fg.eval_log(&y)?.div_pi())
}

/// Per-|alpha| comparison of v_pi(pi^(|alpha|-1) / |alpha|) with the bound
/// |alpha| - 1 - e log_p |alpha|.
#[derive(Clone, Debug, Serialize)]
pub struct ValuationBoundReport {
    pub p: u64,
    pub e: u32,
    pub alpha_max: u64,
    pub violations: Vec<u64>,
    /// min over |alpha| of e (log_p |alpha| - v_p(|alpha|)).
    pub min_slack: f64,
    pub min_valuation: i64,
    pub all_nonnegative: bool,
    /// Entry k: min valuation over p^k <= |alpha| <= alpha_max.
    pub tail_minima: Vec<i64>,
}

pub fn valuation_bound_check(alpha_max: u64, p: u64, e: u32) -> ValuationBoundReport {
    let vp = |mut k: u64| {
        let mut r = 0u32;
        while k.is_multiple_of(p) {
            k /= p;
            r += 1;
        }
        r
    };
    let mut violations = Vec::new();
    let mut min_slack = f64::INFINITY;
    let mut vals = Vec::with_capacity(alpha_max as usize);
    for a in 1..=alpha_max {
        let k = vp(a);
        let v = a as i64 - 1 - (e * k) as i64;
        vals.push(v);
        // v >= a - 1 - e log_p a  <=>  p^k <= a, decided in integers
        if p.pow(k) > a {
            violations.push(a);
        }
        let slack = e as f64 * ((a as f64).ln() / (p as f64).ln() - k as f64);
        min_slack = min_slack.min(slack);
    }
    let mut tail_minima = Vec::new();
    let mut pk = 1u64;
    while pk <= alpha_max {
        tail_minima.push(*vals[pk as usize - 1..].iter().min().unwrap());
        pk *= p;
    }
    let min_valuation = vals.iter().copied().min().unwrap_or(0);
    ValuationBoundReport {
        p,
        e,
        alpha_max,
        violations,
        min_slack: if min_slack.is_finite() {
            min_slack
        } else {
            0.0
        },
        min_valuation,
        all_nonnegative: min_valuation >= 0,
        tail_minima,
    }
}
