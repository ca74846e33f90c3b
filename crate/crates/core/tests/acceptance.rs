//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{golden_path, matches_oracle, oracle_sharp, run_cli, CLI_CASES};
use deltapi::chars::{conjugate_set, teichmuller, ConjugacyQuery};
use deltapi::formal_group::{
    eval_jet_log, formal_group_law, jet_log, valuation_bound_check, FormalGroupData,
    WeierstrassCurve,
};
use deltapi::gm::{psi_gm, GmPsiParams};
use deltapi::hensel::eisenstein_root;
use deltapi::jet::Monomial;
use deltapi::qexp::{
    ap_point_count, bernoulli, curve_coefficients, eisenstein_coeffs, eisenstein_qexp, NewformData,
};
use deltapi::sharp::{assemble_sharp, integrality_exponent, nonzero_check, SharpSpec};
use deltapi::{PadicCtx, PadicNum, PhiPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Name, check and optional time limit in seconds.
type Criterion = (&'static str, fn() -> Check, Option<u64>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const M: u32 = 8;

fn random_element(ctx: &Arc<PadicCtx>, rng: &mut ChaCha8Rng) -> PadicNum {
    let bound = (ctx.p() as i64).pow(M);
    let coeffs: Vec<BigInt> = (0..ctx.degree())
        .map(|_| BigInt::from(rng.gen_range(-bound..bound)))
        .collect();
    let k = rng.gen_range(0..3);
    PadicNum::from_poly(ctx, &coeffs).mul(&PadicNum::pi_pow(ctx, k))
}

fn exact_at(x: &PadicNum, digits: i64) -> bool {
    x.is_zero() && x.precision() >= digits
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let contexts = [
        PadicCtx::zp(5, M).unwrap(),
        PadicCtx::zp(7, M).unwrap(),
        PadicCtx::ramified(5, vec![-5, 0, 1], M).unwrap(),
        PadicCtx::ramified(7, vec![-7, 0, 1], M).unwrap(),
    ];
    let want = M as i64 - 1;
    for ctx in &contexts {
        let p = ctx.p();
        let pi = PadicNum::pi_pow(ctx, 1);
        for _ in 0..200 {
            let x = random_element(ctx, &mut rng);
            let y = random_element(ctx, &mut rng);
            let (dx, dy) = (x.delta_pi().unwrap(), y.delta_pi().unwrap());
            let sum = x
                .add(&y)
                .delta_pi()
                .unwrap()
                .sub(&dx.add(&dy).add(&x.c_pi(&y).unwrap()));
            ensure!(exact_at(&sum, want), "sum rule fails at {x}, {y}: {sum}");
            let prod = x.mul(&y).delta_pi().unwrap().sub(
                &x.pow(p)
                    .mul(&dy)
                    .add(&y.pow(p).mul(&dx))
                    .add(&pi.mul(&dx).mul(&dy)),
            );
            ensure!(
                exact_at(&prod, want),
                "product rule fails at {x}, {y}: {prod}"
            );
            let phi_add = x
                .add(&y)
                .frobenius()
                .sub(&x.frobenius().add(&y.frobenius()));
            let phi_mul = x
                .mul(&y)
                .frobenius()
                .sub(&x.frobenius().mul(&y.frobenius()));
            ensure!(
                exact_at(&phi_add, want) && exact_at(&phi_mul, want),
                "phi at {x}, {y}"
            );
            let lift = x.frobenius().sub(&x.pow(p).add(&pi.mul(&dx)));
            ensure!(exact_at(&lift, want), "phi(x) != x^p + pi delta x at {x}");
        }
    }
    Ok("4 contexts x 200 pairs".into())
}

fn criterion_2() -> Check {
    let ctx = PadicCtx::zp(5, M).unwrap();
    let params = GmPsiParams::new(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut unit = || loop {
        let n = rng.gen_range(-(5i64.pow(M))..5i64.pow(M));
        if n % 5 != 0 {
            return PadicNum::from_i64(&ctx, n);
        }
    };
    for _ in 0..100 {
        let (x, y) = (unit(), unit());
        let (px, py) = (psi_gm(&x, &params).unwrap(), psi_gm(&y, &params).unwrap());
        let pxy = psi_gm(&x.mul(&y), &params).unwrap();
        ensure!(
            px.precision() >= 6,
            "psi({x}) certified to {} digits",
            px.precision()
        );
        ensure!(
            exact_at(&pxy.sub(&px.add(&py)), 6),
            "psi not additive at {x}, {y}"
        );
    }
    for d in 1..5 {
        let t = teichmuller(d, &ctx).unwrap();
        let v = psi_gm(&t, &params).unwrap();
        ensure!(exact_at(&v, M as i64), "psi(Theta({d})) = {v}");
    }
    Ok("100 unit pairs, psi(Theta(d)) = 0".into())
}

/// Trivariate truncated series over Z, keyed by exponents of X, Y, Z.
type Tri = BTreeMap<[usize; 3], BigInt>;

fn tri_mul(a: &Tri, b: &Tri, n: usize) -> Tri {
    let mut out = Tri::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            if e.iter().sum::<usize>() <= n {
                *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// F(u, v) for trivariate u, v without constant terms.
fn tri_compose(fg: &FormalGroupData, u: &Tri, v: &Tri, n: usize) -> Tri {
    let law = fg.law();
    let mut upow = vec![Tri::from([([0, 0, 0], BigInt::one())])];
    let mut vpow = upow.clone();
    for k in 1..=n {
        upow.push(tri_mul(&upow[k - 1], u, n));
        vpow.push(tri_mul(&vpow[k - 1], v, n));
    }
    let mut out = Tri::new();
    for i in 0..=n {
        for j in 0..=n - i {
            let c = law.get(i, j);
            if c.is_zero() {
                continue;
            }
            for (e, t) in tri_mul(&upow[i], &vpow[j], n) {
                *out.entry(e).or_insert_with(BigInt::zero) += &c * t;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn criterion_3() -> Check {
    let n = 12;
    let fg = formal_group_law(&WeierstrassCurve::curve_11a1(), n).unwrap();
    let law = fg.law();
    for i in 0..=n {
        for j in 0..=n - i {
            let identity = if (i, j) == (1, 0) { 1 } else { 0 };
            if j == 0 {
                ensure!(
                    law.get(i, 0) == BigInt::from(identity),
                    "F(X, 0) != X at X^{i}"
                );
            }
            ensure!(
                law.get(i, j) == law.get(j, i),
                "F not symmetric at ({i}, {j})"
            );
        }
    }
    let var = |k: usize| {
        let mut e = [0; 3];
        e[k] = 1;
        Tri::from([(e, BigInt::one())])
    };
    let fxy = tri_compose(&fg, &var(0), &var(1), n);
    let fyz = tri_compose(&fg, &var(1), &var(2), n);
    let left = tri_compose(&fg, &fxy, &var(2), n);
    let right = tri_compose(&fg, &var(0), &fyz, n);
    ensure!(left == right, "F is not associative to degree {n}");
    let defect = fg.log_defect();
    for i in 0..=n {
        for j in 0..=n - i {
            ensure!(
                defect.get(i, j).is_zero(),
                "l(F) != l(X) + l(Y) at ({i}, {j})"
            );
        }
    }
    let five = BigInt::from(5);
    for (k, c) in fg.log_coeffs().iter().enumerate().skip(1) {
        let nc = c * BigRational::from_integer(BigInt::from(k));
        ensure!(
            !nc.denom().is_multiple_of(&five),
            "{k} c_{k} = {nc} is not 5-integral"
        );
    }
    let ctx = PadicCtx::zp(5, M).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let x = PadicNum::from_i64(&ctx, 5 * rng.gen_range(-20_000i64..20_000));
        let y = PadicNum::from_i64(&ctx, 5 * rng.gen_range(-20_000i64..20_000));
        let s = fg.eval_law(&x, &y).unwrap();
        for order in 1..=2 {
            let lhs = eval_jet_log(order, &fg, &s).unwrap();
            let rhs = eval_jet_log(order, &fg, &x)
                .unwrap()
                .add(&eval_jet_log(order, &fg, &y).unwrap());
            ensure!(lhs.agrees(&rhs), "L^{order} not additive at {x}, {y}");
        }
    }
    for order in 1..=2 {
        let nu = jet_log(order, &fg, &ctx).unwrap().nu;
        ensure!(nu == 0, "nu = {nu} for L^{order} over Z_5");
    }
    Ok("axioms, log, integrality, 50 pairs, nu = 0".into())
}

fn criterion_4() -> Check {
    let mut checked = 0;
    for e in [1u32, 4] {
        let report = valuation_bound_check(625, 5, e);
        ensure!(
            report.violations.is_empty(),
            "e = {e}: {:?}",
            report.violations
        );
        for alpha in 1..=625u64 {
            let mut v5 = 0;
            let mut k = alpha;
            while k % 5 == 0 {
                k /= 5;
                v5 += 1;
            }
            let val = alpha as f64 - 1.0 - (e * v5) as f64;
            let bound = alpha as f64 - 1.0 - e as f64 * (alpha as f64).ln() / 5f64.ln();
            let holds = val >= bound - 1e-9;
            ensure!(holds, "e = {e}, |alpha| = {alpha}");
            checked += 1;
        }
    }
    Ok(format!("{checked} cases, 0 violations"))
}

fn criterion_5() -> Check {
    let mut total = 0;
    for p in [5u64, 7, 11, 13] {
        let n = p as i64 - 1;
        for kappa in 3..=p as i64 {
            let got = ConjugacyQuery::new(p, kappa)
                .and_then(|q| q.conjugates())
                .map_err(|e| format!("p = {p}, kappa = {kappa}: {e}"))?;
            let oracle: Vec<i64> = (1..=p as i64 - 2)
                .filter(|&k| {
                    (1..n).any(|c| c.gcd(&n) == 1 && (c * (2 - kappa) - k).rem_euclid(n) == 0)
                })
                .collect();
            ensure!(
                got == oracle,
                "p = {p}, kappa = {kappa}: {got:?} vs {oracle:?}"
            );
            ensure!(
                got.iter().all(|&k| (1..=p as i64 - 2).contains(&k)),
                "out of range"
            );
            total += 1;
        }
    }
    ensure!(
        conjugate_set(5, 3).unwrap() == vec![1, 3],
        "conjugates(3, 5)"
    );
    ensure!(conjugate_set(5, 4).unwrap() == vec![2], "conjugates(4, 5)");
    Ok(format!("{total} weights"))
}

fn criterion_6() -> Check {
    for p in [5u64, 7, 11] {
        let ctx = PadicCtx::zp(p, 6).unwrap();
        let one = PadicNum::one(&ctx);
        for d in 1..p as i64 {
            let t = teichmuller(d, &ctx).unwrap();
            ensure!(
                exact_at(&t.pow(p - 1).sub(&one), 6),
                "Theta_{p}({d})^(p-1) != 1"
            );
            ensure!(
                t.eq_mod(&PadicNum::from_i64(&ctx, d), 1),
                "Theta_{p}({d}) != {d} mod p"
            );
        }
    }
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let t4 = teichmuller(4, &ctx).unwrap();
    ensure!(
        exact_at(&t4.add(&PadicNum::one(&ctx)), 6),
        "Theta_5(4) = {t4}"
    );
    Ok("p = 5, 7, 11 at precision 6".into())
}

fn criterion_7() -> Check {
    ensure!(
        bernoulli(4) == BigRational::new(BigInt::from(-1), BigInt::from(30)),
        "B_4"
    );
    let e4 = eisenstein_coeffs(5, 20).unwrap();
    for (n, c) in e4.iter().enumerate() {
        let want = if n == 0 {
            1
        } else {
            240 * (1..=n as i64)
                .filter(|d| n as i64 % d == 0)
                .map(|d| d * d * d)
                .sum::<i64>()
        };
        ensure!(
            c == &BigRational::from_integer(BigInt::from(want)),
            "E_4 at q^{n}"
        );
    }
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let z = eisenstein_root(&ctx, 20).unwrap();
    let e = eisenstein_qexp(5, 20, &ctx).unwrap();
    let diff = z.pow(4).unwrap().sub(&e).unwrap();
    ensure!(diff.q_prec() >= 20, "q precision {}", diff.q_prec());
    ensure!(
        diff.terms().all(|(_, c)| exact_at(c, 6)),
        "z^4 != E_4 at (q^20, 5^6)"
    );
    let c0 = z.coeff_or_zero(&Monomial::one());
    let c1 = z.coeff_or_zero(&Monomial::q_pow(1));
    ensure!(exact_at(&c0.sub(&PadicNum::one(&ctx)), 6), "z(0) = {c0}");
    ensure!(
        exact_at(&c1.sub(&PadicNum::from_i64(&ctx, 60)), 6),
        "q-coefficient {c1}"
    );
    Ok("E_4 to q^20, z = 1 + 60q + ...".into())
}

/// Points on y^2 + y = x^3 - x^2 - 10x - 20 over F_ell, by enumeration.
fn count_11a1(ell: i64) -> i64 {
    let mut n = 1;
    for x in 0..ell {
        for y in 0..ell {
            if (y * y + y - (x * x * x - x * x - 10 * x - 20)).rem_euclid(ell) == 0 {
                n += 1;
            }
        }
    }
    n
}

fn criterion_8() -> Check {
    let curve = WeierstrassCurve::curve_11a1();
    for (ell, a) in [(2u64, -2i64), (3, -1), (5, 1)] {
        let counted = ell as i64 + 1 - count_11a1(ell as i64);
        let got = ap_point_count(&curve, ell).unwrap();
        ensure!(
            got == a && counted == a,
            "a_{ell}: {got}, enumeration {counted}"
        );
    }
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let nf = NewformData::from_curve(&curve, 11, 5, 50).unwrap();
    let hecke = PhiPoly::hecke(&ctx, &PadicNum::from_i64(&ctx, 1));
    let spec = SharpSpec::single(nf, hecke, 2).unwrap();
    let out = assemble_sharp(&spec, 50, 2, &ctx).unwrap();
    let divided = out.series.mul_pi_pow(-1);
    ensure!(divided.q_prec() >= 50, "q precision {}", divided.q_prec());
    ensure!(
        integrality_exponent(&divided) == 0,
        "series / 5 is not integral"
    );
    ensure!(divided.order() == 2, "order {}", divided.order());
    ensure!(
        divided.terms().all(|(m, _)| m.delta_degree() <= 2),
        "delta-degree above 2"
    );
    let digits = divided.min_precision().unwrap_or(0);
    ensure!(digits >= 4, "only {digits} digits tracked");
    ensure!(nonzero_check(&divided) == Ok(true), "nonzero_check");
    Ok(format!(
        "nu(undivided) = {}, min valuation {:?}, {} terms, {digits} digits",
        out.meta.nu,
        out.meta.min_valuation,
        divided.len()
    ))
}

fn criterion_9() -> Check {
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let curve = WeierstrassCurve::curve_11a1();
    let a = curve_coefficients(&curve, 30).unwrap();
    let mut nf = NewformData::from_curve(&curve, 11, 5, 30).unwrap();
    nf.conjugates = vec![nf.an.clone()];
    let polys: [[i64; 3]; 2] = [[5, -1, 1], [1, 2, -3]];
    let spec = SharpSpec::new(
        nf,
        polys.iter().map(|c| PhiPoly::from_ints(&ctx, c)).collect(),
        None,
        2,
    )
    .unwrap();
    let out = assemble_sharp(&spec, 30, 2, &ctx).unwrap();
    let mut oracle = oracle_sharp(&a, &polys[0], 30);
    for (k, c) in oracle_sharp(&a, &polys[1], 30) {
        *oracle.entry(k).or_insert_with(BigRational::zero) += c;
    }
    oracle.retain(|_, c| !c.is_zero());
    ensure!(
        matches_oracle(&out.series, &oracle, &ctx),
        "series differs from the oracle"
    );
    ensure!(
        out.series.terms().all(|(m, _)| m.order() <= 2),
        "variables beyond d2q"
    );
    for (coeffs, order) in [(vec![1i64], 1usize), (vec![0, 1], 1), (vec![2, 0, 1], 2)] {
        let spec = SharpSpec::single(
            NewformData::from_curve(&curve, 11, 5, 30).unwrap(),
            PhiPoly::from_ints(&ctx, &coeffs),
            order,
        )
        .unwrap();
        let s = assemble_sharp(&spec, 30, 2, &ctx).unwrap().series;
        ensure!(s.order() == coeffs.len() - 1, "order of {coeffs:?}");
        ensure!(
            matches_oracle(&s, &oracle_sharp(&a, &coeffs, 30), &ctx),
            "shape of {coeffs:?}"
        );
    }
    Ok("two sigma lists and three single polynomials".into())
}

fn criterion_10() -> Check {
    std::env::set_current_dir(env!("CARGO_MANIFEST_DIR")).map_err(|e| e.to_string())?;
    for (name, code, args) in CLI_CASES {
        let first = run_cli(args);
        let second = run_cli(args);
        ensure!(first == second, "{name}: runs differ");
        ensure!(first.code == *code, "{name}: exit {}", first.code);
        let golden =
            std::fs::read_to_string(golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(first.stdout == golden, "{name}: differs from golden file");
    }
    Ok(format!("{} golden files", CLI_CASES.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("delta axioms and Frobenius", criterion_1, Some(5)),
        ("psi of G_m", criterion_2, Some(5)),
        ("formal group of 11a1", criterion_3, Some(30)),
        ("valuation bound", criterion_4, None),
        ("conjugate weights", criterion_5, None),
        ("Teichmuller lifts", criterion_6, None),
        ("Eisenstein series and Hensel root", criterion_7, None),
        ("sharp assembly for 11a1", criterion_8, Some(60)),
        ("expansion shape", criterion_9, None),
        ("CLI determinism", criterion_10, None),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(_), true) => ("FAIL", format!("took longer than {}s", limit.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status}: {name} ({detail}; {:.2}s)",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
