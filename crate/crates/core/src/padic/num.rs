use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ring::{md, Poly};
use super::{ExtKind, PadicCtx};
use crate::error::{Error, Result};

/// Valuation floor used for the exact zero.
const EXACT_ZERO_VAL: i64 = i64::MAX / 4;

/// A truncated element of K_pi: `pi^val * unit + O(pi^(val + rel))`.
///
/// `rel == 0` means the element is indistinguishable from zero; `val` is then
/// the absolute precision. The exact zero (integer 0, empty sums) has no
/// precision bound at all.
#[derive(Clone)]
pub struct PadicNum {
    ctx: Arc<PadicCtx>,
    val: i64,
    rel: u32,
    unit: Poly,
}

impl PadicNum {
    pub fn exact_zero(ctx: &Arc<PadicCtx>) -> Self {
        PadicNum {
            ctx: ctx.clone(),
            val: EXACT_ZERO_VAL,
            rel: 0,
            unit: ctx.poly_zero(),
        }
    }

    /// `O(pi^abs)`.
    pub fn zero_at(ctx: &Arc<PadicCtx>, abs: i64) -> Self {
        PadicNum {
            ctx: ctx.clone(),
            val: abs,
            rel: 0,
            unit: ctx.poly_zero(),
        }
    }

    pub fn one(ctx: &Arc<PadicCtx>) -> Self {
        Self::pi_pow(ctx, 0)
    }

    /// pi^k for any integer k.
    pub fn pi_pow(ctx: &Arc<PadicCtx>, k: i64) -> Self {
        PadicNum {
            ctx: ctx.clone(),
            val: k,
            rel: ctx.prec,
            unit: ctx.poly_one(),
        }
    }

    pub fn from_i64(ctx: &Arc<PadicCtx>, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    pub fn from_bigint(ctx: &Arc<PadicCtx>, n: &BigInt) -> Self {
        Self::from_poly(ctx, std::slice::from_ref(n))
    }

    pub fn from_rational(ctx: &Arc<PadicCtx>, r: &BigRational) -> Self {
        let num = Self::from_bigint(ctx, r.numer());
        if r.denom().is_one() {
            return num;
        }
        let den = Self::from_bigint(ctx, r.denom());
        num.div(&den).expect("nonzero denominator")
    }

    /// The element sum c_j t^j with integer coefficients, reduced by the
    /// defining polynomial.
    pub fn from_poly(ctx: &Arc<PadicCtx>, coeffs: &[BigInt]) -> Self {
        let deg = ctx.deg;
        // exact reduction mod the monic defining polynomial
        let mut c: Vec<BigInt> = coeffs.to_vec();
        while c.len() > deg {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = c.len() - deg;
            for j in 0..deg {
                c[k + j] -= &top * ctx.min_poly[j];
            }
        }
        c.resize(deg, BigInt::zero());
        if c.iter().all(|x| x.is_zero()) {
            return Self::exact_zero(ctx);
        }
        // pull out the common power of p exactly
        let pb = BigInt::from(ctx.p);
        let mut s = u32::MAX;
        for x in c.iter().filter(|x| !x.is_zero()) {
            let mut y = x.clone();
            let mut v = 0;
            while (&y % &pb).is_zero() {
                y /= &pb;
                v += 1;
            }
            s = s.min(v);
        }
        let ps = pb.pow(s);
        for x in c.iter_mut() {
            *x /= &ps;
        }
        let rel = ctx.prec;
        // the remaining polynomial has valuation < e; one extra p-digit covers it
        let n = ctx.work_n(rel + ctx.e);
        let m = ctx.pow_p(n);
        let mb = BigInt::from(m);
        let residue: Poly = c
            .iter()
            .map(|x| x.mod_floor(&mb).to_i128().unwrap())
            .collect();
        let v = ctx.poly_val(&residue, rel + ctx.e);
        let (u, _) = ctx.unshift_pi(&residue, v, n);
        // p^s = pi^(e s) * w^s
        let mut unit = u;
        if s > 0 && ctx.kind == ExtKind::Ramified {
            unit = ctx.pmul(&unit, &ctx.ppow(&ctx.unit_w, s as u64, m), m);
        }
        PadicNum {
            ctx: ctx.clone(),
            val: (ctx.e * s + v) as i64,
            rel,
            unit: ctx.canonical(&unit, rel),
        }
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn is_exact_zero(&self) -> bool {
        self.rel == 0 && self.val >= EXACT_ZERO_VAL
    }

    /// True when the element cannot be told apart from zero.
    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Exact pi-adic valuation, or `None` (+infinity) for zero at precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.rel == 0 {
            None
        } else {
            Some(self.val)
        }
    }

    /// Guaranteed lower bound on the valuation.
    pub fn val_floor(&self) -> i64 {
        self.val
    }

    /// Absolute precision: the element is known modulo pi^precision.
    pub fn precision(&self) -> i64 {
        if self.is_exact_zero() {
            EXACT_ZERO_VAL
        } else {
            self.val + self.rel as i64
        }
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    pub fn is_unit(&self) -> bool {
        self.rel > 0 && self.val == 0
    }

    /// True when `self - other` vanishes modulo pi^k.
    pub fn eq_mod(&self, other: &Self, k: i64) -> bool {
        (self - other).val_floor() >= k
    }

    /// True when the two elements agree at their common precision.
    pub fn agrees(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    fn check_ctx(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx,
            "mixing elements of different contexts"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ctx(other);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let ctx = &self.ctx;
        let abs = self.precision().min(other.precision());
        let live: Vec<&PadicNum> = [self, other]
            .into_iter()
            .filter(|x| x.rel > 0 && x.val < abs)
            .collect();
        let Some(v0) = live.iter().map(|x| x.val).min() else {
            return Self::zero_at(ctx, abs);
        };
        let r = (abs - v0) as u32;
        let n = ctx.work_n(r);
        let m = ctx.pow_p(n);
        let mut c = ctx.poly_zero();
        for x in live {
            let shifted = ctx.shift_pi(&x.unit, (x.val - v0) as u32, m);
            c = ctx.padd(&c, &shifted, m);
        }
        let v = ctx.poly_val(&c, r);
        if v >= r {
            return Self::zero_at(ctx, abs);
        }
        let (u, _) = ctx.unshift_pi(&c, v, n);
        PadicNum {
            ctx: ctx.clone(),
            val: v0 + v as i64,
            rel: r - v,
            unit: ctx.canonical(&u, r - v),
        }
    }

    pub fn neg(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let ctx = &self.ctx;
        let m = ctx.pow_p(ctx.work_n(self.rel));
        let u: Poly = self.unit.iter().map(|c| md(-c, m)).collect();
        PadicNum {
            ctx: ctx.clone(),
            val: self.val,
            rel: self.rel,
            unit: ctx.canonical(&u, self.rel),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let ctx = &self.ctx;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero(ctx);
        }
        if self.rel == 0 || other.rel == 0 {
            let abs = (self.val + other.precision()).min(other.val + self.precision());
            return Self::zero_at(ctx, abs);
        }
        let rel = self.rel.min(other.rel);
        let m = ctx.pow_p(ctx.work_n(rel));
        let u = ctx.pmul(&self.unit, &other.unit, m);
        PadicNum {
            ctx: ctx.clone(),
            val: self.val + other.val,
            rel,
            unit: ctx.canonical(&u, rel),
        }
    }

    /// Multiply by an integer without going through `from_i64`.
    pub fn scale(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(&self.ctx, k))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.rel == 0 {
            return Err(Error::DivisionByZero);
        }
        let ctx = &self.ctx;
        let n = ctx.work_n(self.rel);
        let u = ctx.unit_inverse(&self.unit, n);
        Ok(PadicNum {
            ctx: ctx.clone(),
            val: -self.val,
            rel: self.rel,
            unit: ctx.canonical(&u, self.rel),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Exact division by pi.
    pub fn div_pi(&self) -> Self {
        self.mul_pi_pow(-1)
    }

    pub fn mul_pi_pow(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.val += k;
        out
    }

    /// The Frobenius lift phi.
    pub fn frobenius(&self) -> Self {
        if self.rel == 0 || self.ctx.frob_t.is_none() {
            return self.clone();
        }
        let ctx = &self.ctx;
        let m = ctx.pow_p(ctx.work_n(self.rel));
        let u = ctx.frob_poly(&self.unit, m);
        PadicNum {
            ctx: ctx.clone(),
            val: self.val,
            rel: self.rel,
            unit: ctx.canonical(&u, self.rel),
        }
    }

    /// The pi-derivation (phi(x) - x^p) / pi.
    pub fn delta_pi(&self) -> Result<Self> {
        if self.val < 0 {
            return Err(Error::NotIntegral(self.to_string()));
        }
        let diff = self.frobenius().sub(&self.pow(self.ctx.p));
        divide_by_pi(diff, "phi(x) - x^p")
    }

    /// C_pi(x, y) = (x^p + y^p - (x + y)^p) / pi.
    pub fn c_pi(&self, other: &Self) -> Result<Self> {
        if self.val < 0 || other.val < 0 {
            return Err(Error::NotIntegral("C_pi argument".into()));
        }
        let p = self.ctx.p;
        let num = self.pow(p).add(&other.pow(p)).sub(&self.add(other).pow(p));
        divide_by_pi(num, "x^p + y^p - (x + y)^p")
    }

    /// Canonical residue of `pi^val * unit` as coefficients of t, for
    /// integral elements: coefficient j lies in [0, p^k_j).
    pub fn residue_poly(&self) -> Option<Vec<BigInt>> {
        if self.val < 0 {
            return None;
        }
        let ctx = &self.ctx;
        let cap = (ctx.e * (ctx.max_n - 1)) as i64;
        let abs = self.precision().min(cap);
        if self.rel == 0 || self.val >= abs {
            return Some(vec![BigInt::zero(); ctx.deg]);
        }
        let abs = abs as u32;
        let n = ctx.work_n(abs);
        let m = ctx.pow_p(n);
        let shifted = ctx.shift_pi(&self.unit, self.val as u32, m);
        Some(
            ctx.canonical(&shifted, abs)
                .iter()
                .map(|&c| BigInt::from(c))
                .collect(),
        )
    }

    /// For degree-one contexts: the integer representative in [0, p^k).
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.ctx.deg != 1 {
            return None;
        }
        self.residue_poly().map(|mut v| v.remove(0))
    }

    /// Unit part as the symmetric canonical representative.
    pub fn unit_digits(&self) -> Vec<i128> {
        self.ctx.canonical_symmetric(&self.unit, self.rel)
    }

    /// Parse the display format, plain integers and rationals (`-3/7`) and
    /// coefficient lists `[c0,c1,...]` in the generator t.
    pub fn parse(ctx: &Arc<PadicCtx>, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("cannot read p-adic number {s:?}"));
        if let Some(rest) = s.strip_prefix("O(pi^") {
            let k: i64 = rest
                .strip_suffix(')')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            return Ok(Self::zero_at(ctx, k));
        }
        if let Some((unit_s, tail)) = s.split_once("*pi^") {
            let (val_s, abs_s) = tail.split_once("+O(pi^").ok_or_else(bad)?;
            let val: i64 = val_s.parse().map_err(|_| bad())?;
            let abs: i64 = abs_s
                .strip_suffix(')')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            let coeffs = parse_coeff_list(unit_s).ok_or_else(bad)?;
            let unit = Self::from_poly(ctx, &coeffs);
            if !unit.is_unit() || abs <= val {
                return Err(bad());
            }
            let rel = (abs - val) as u32;
            if rel > ctx.prec {
                return Err(bad());
            }
            let mut out = unit.mul_pi_pow(val);
            out.rel = rel;
            out.unit = ctx.canonical(&out.unit, rel);
            return Ok(out);
        }
        if s.starts_with('[') {
            let items = s
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(bad)?;
            let mut acc = Self::exact_zero(ctx);
            let tpow = Self::from_poly(ctx, &[BigInt::zero(), BigInt::one()]);
            let mut power = Self::one(ctx);
            for item in items.split(',').filter(|x| !x.is_empty()) {
                let r = parse_rational(item).ok_or_else(bad)?;
                acc = acc.add(&Self::from_rational(ctx, &r).mul(&power));
                power = power.mul(&tpow);
            }
            return Ok(acc);
        }
        let r = parse_rational(&s).ok_or_else(bad)?;
        Ok(Self::from_rational(ctx, &r))
    }
}

fn divide_by_pi(x: PadicNum, what: &str) -> Result<PadicNum> {
    match x.valuation() {
        Some(v) if v < 1 => Err(Error::NonDivisible(what.into())),
        _ => {
            if x.rel == 0 && x.val < 1 && !x.is_exact_zero() {
                return Err(Error::PrecisionExhausted(format!(
                    "{what} known only mod pi^{}",
                    x.val
                )));
            }
            Ok(x.div_pi())
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

fn parse_coeff_list(s: &str) -> Option<Vec<BigInt>> {
    if let Some(inner) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        inner.split(',').map(|x| x.parse().ok()).collect()
    } else {
        Some(vec![s.parse().ok()?])
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.rel == 0 {
            return write!(f, "O(pi^{})", self.val);
        }
        let digits = self.unit_digits();
        if digits.len() == 1 {
            write!(f, "{}", digits[0])?;
        } else {
            let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        write!(f, "*pi^{}+O(pi^{})", self.val, self.precision())
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for PadicNum {
    /// Structural equality of the canonical forms (same value and same
    /// tracked precision).
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx
            && self.val == other.val
            && self.rel == other.rel
            && self.unit == other.unit
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&PadicNum> for &PadicNum {
            type Output = PadicNum;
            fn $method(self, rhs: &PadicNum) -> PadicNum {
                PadicNum::$inner(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for &PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        PadicNum::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5(prec: u32) -> Arc<PadicCtx> {
        PadicCtx::zp(5, prec).unwrap()
    }

    #[test]
    fn valuation_of_fifty() {
        let c = z5(6);
        let x = PadicNum::from_i64(&c, 50);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit_digits(), vec![2]);
    }

    #[test]
    fn inverse_of_two_mod_625() {
        let c = z5(4);
        let x = PadicNum::from_i64(&c, 2).inv().unwrap();
        assert_eq!(x.to_integer().unwrap(), BigInt::from(313));
    }

    #[test]
    fn inverting_zero_fails() {
        let c = z5(4);
        assert_eq!(
            PadicNum::exact_zero(&c).inv().unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(
            PadicNum::zero_at(&c, 3).inv().unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn ramified_generator_squares_to_five() {
        let c = PadicCtx::ramified(5, vec![-5, 0, 1], 8).unwrap();
        let t = PadicNum::parse(&c, "[0,1]").unwrap();
        assert_eq!(t.valuation(), Some(1));
        assert_eq!(t.mul(&t), PadicNum::from_i64(&c, 5));
        assert_eq!(PadicNum::from_i64(&c, 5).valuation(), Some(2));
        assert_eq!(PadicNum::from_i64(&c, 50).valuation(), Some(4));
    }

    #[test]
    fn delta_of_small_integers() {
        let c = z5(6);
        assert!(PadicNum::one(&c).delta_pi().unwrap().is_zero());
        let d = PadicNum::from_i64(&c, 2).delta_pi().unwrap();
        assert!(d.agrees(&PadicNum::from_i64(&c, -6)));
        assert_eq!(d.precision(), 5);
    }

    #[test]
    fn c_pi_examples() {
        let c = z5(6);
        let two = PadicNum::from_i64(&c, 2);
        let three = PadicNum::from_i64(&c, 3);
        let one = PadicNum::one(&c);
        assert!(two
            .c_pi(&three)
            .unwrap()
            .agrees(&PadicNum::from_i64(&c, -570)));
        assert!(one.c_pi(&one).unwrap().agrees(&PadicNum::from_i64(&c, -6)));
        assert!(two.c_pi(&PadicNum::exact_zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn delta_requires_integral_input() {
        let c = z5(6);
        let x = PadicNum::from_rational(&c, &BigRational::new(1.into(), 5.into()));
        assert!(matches!(x.delta_pi(), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn display_round_trip() {
        let c = PadicCtx::ramified(7, vec![7, 0, 1], 6).unwrap();
        for s in ["[3,2]", "49/3", "-12", "[0,1]"] {
            let x = PadicNum::parse(&c, s).unwrap();
            let y = PadicNum::parse(&c, &x.to_string()).unwrap();
            assert_eq!(x, y, "{s} -> {x}");
        }
        assert_eq!(PadicNum::parse(&c, "0").unwrap().to_string(), "0");
        assert_eq!(
            PadicNum::parse(&c, "O(pi^3)").unwrap().to_string(),
            "O(pi^3)"
        );
    }

    #[test]
    fn rational_with_p_in_denominator() {
        let c = z5(5);
        let x = PadicNum::from_rational(&c, &BigRational::new(3.into(), 25.into()));
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(x.unit_digits(), vec![3]);
        assert!(!x.is_integral());
    }

    #[test]
    fn frobenius_in_unramified_quadratic() {
        let c = PadicCtx::unramified(5, vec![-2, 0, 1], 6).unwrap();
        let t = PadicNum::parse(&c, "[0,1]").unwrap();
        assert_eq!(t.frobenius(), t.neg());
        // phi(x) = x^p mod pi on a few elements
        for s in ["[1,1]", "[2,3]", "[4,0]", "[7,11]"] {
            let x = PadicNum::parse(&c, s).unwrap();
            assert!(x.frobenius().eq_mod(&x.pow(5), 1));
            x.delta_pi().unwrap();
        }
    }
}
