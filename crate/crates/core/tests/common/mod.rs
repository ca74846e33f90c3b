//! Shared fixtures: the CLI golden cases and an independent rational model
//! of sum P(phi) f^(-1) in q, dq, d2q.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use deltapi::cli::{dispatch_with_env, Outcome};
use deltapi::jet::Monomial;
use deltapi::{JetSeries, PadicCtx, PadicNum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// (golden name, expected exit code, arguments after the program name)
pub const CLI_CASES: &[(&str, i32, &[&str])] = &[
    (
        "delta_number",
        0,
        &["delta", "--p", "5", "--x", "2", "--y", "3"],
    ),
    (
        "delta_series",
        0,
        &[
            "delta",
            "--p",
            "5",
            "--prec",
            "6",
            "--series",
            "tests/data/series_a.json",
        ],
    ),
    (
        "phi_unramified",
        0,
        &[
            "phi",
            "--p",
            "5",
            "--kind",
            "unramified",
            "--min-poly",
            "-2,0,1",
            "--prec",
            "6",
            "--x",
            "[1,1]",
        ],
    ),
    (
        "phi_series",
        0,
        &[
            "phi",
            "--p",
            "5",
            "--prec",
            "6",
            "--series",
            "tests/data/series_a.json",
            "--phi-poly",
            "5,-1,1",
            "--with",
            "tests/data/series_b.json",
        ],
    ),
    ("psi_gm_one", 0, &["psi-gm", "--p", "5", "--x", "1"]),
    (
        "psi_gm_ramified",
        0,
        &[
            "psi-gm",
            "--p",
            "5",
            "--kind",
            "ramified",
            "--min-poly",
            "-5,0,1",
            "--prec",
            "6",
            "--x",
            "[1,1]",
        ],
    ),
    (
        "formal_log",
        0,
        &[
            "formal-log",
            "--p",
            "5",
            "--prec",
            "6",
            "--t-prec",
            "8",
            "--x",
            "5",
        ],
    ),
    (
        "jet_log",
        0,
        &[
            "jet-log", "--p", "5", "--prec", "6", "--n", "2", "--t-prec", "6", "--x", "5",
        ],
    ),
    (
        "val_bound",
        0,
        &["val-bound", "--p", "5", "--e", "4", "--alpha-max", "625"],
    ),
    (
        "teichmuller",
        0,
        &["teichmuller", "--p", "5", "--prec", "4", "--d", "2"],
    ),
    (
        "conjugates_5_3",
        0,
        &["conjugates", "--p", "5", "--kappa", "3"],
    ),
    (
        "conjugates_5_4",
        0,
        &["conjugates", "--p", "5", "--kappa", "4"],
    ),
    (
        "conjugates_degenerate",
        2,
        &["conjugates", "--p", "5", "--kappa", "2"],
    ),
    (
        "serre_check_theta",
        0,
        &[
            "serre-check",
            "--p",
            "5",
            "--prec",
            "6",
            "--kappa",
            "3",
            "--theta-power",
            "1",
        ],
    ),
    (
        "serre_check_split",
        0,
        &[
            "serre-check",
            "--p",
            "5",
            "--prec",
            "6",
            "--kappa",
            "3",
            "--character",
            "tests/data/chi55.json",
            "--level",
            "11",
        ],
    ),
    ("bernoulli_12", 0, &["bernoulli", "--k", "12"]),
    ("eisenstein", 0, &["eisenstein", "--p", "5", "--qprec", "3"]),
    (
        "f_inverse",
        0,
        &[
            "f-inverse",
            "--newform",
            "tests/data/11a1.json",
            "--prec",
            "6",
            "--qprec",
            "10",
        ],
    ),
    (
        "f_inverse_short",
        2,
        &[
            "f-inverse",
            "--newform",
            "tests/data/11a1.json",
            "--qprec",
            "80",
        ],
    ),
    ("ap_2", 0, &["ap", "--ell", "2"]),
    ("ap_bad", 2, &["ap", "--ell", "11"]),
    (
        "ap_list",
        0,
        &["ap", "--curve", "0,-1,1,-10,-20", "--nmax", "25"],
    ),
    (
        "hensel_root",
        0,
        &[
            "hensel-root",
            "--p",
            "5",
            "--poly",
            "-16,0,1",
            "--tau0",
            "4",
        ],
    ),
    (
        "hensel_not_etale",
        2,
        &[
            "hensel-root",
            "--p",
            "5",
            "--poly",
            "-25,0,1",
            "--tau0",
            "0",
        ],
    ),
    (
        "hensel_eisenstein",
        0,
        &[
            "hensel-root",
            "--p",
            "5",
            "--prec",
            "6",
            "--eisenstein",
            "--qprec",
            "6",
        ],
    ),
    (
        "sharp",
        0,
        &[
            "sharp",
            "--newform",
            "tests/data/11a1.json",
            "--prec",
            "6",
            "--qprec",
            "12",
            "--kappa",
            "3",
            "--kappa-prime",
            "3",
        ],
    ),
    (
        "sharp_curve_raw",
        0,
        &[
            "sharp",
            "--curve",
            "11a1",
            "--level",
            "11",
            "--p",
            "5",
            "--prec",
            "6",
            "--qprec",
            "8",
            "--phi-poly",
            "hecke-raw",
        ],
    ),
    (
        "config_teichmuller",
        0,
        &["teichmuller", "--config", "tests/data/run_config.json"],
    ),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

/// One in-process CLI run with DELTA_PI_PREC unset; paths are relative to
/// the crate root.
pub fn run_cli(args: &[&str]) -> Outcome {
    let argv = std::iter::once("deltapi").chain(args.iter().copied());
    dispatch_with_env(argv, None)
}

/// Polynomials in q, dq, d2q over Q, truncated at q-degree `qmax` and
/// delta-degree 2. Keys are (q, dq, d2q) exponents.
pub type Oracle = BTreeMap<(i64, u32, u32), BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn omul(a: &Oracle, b: &Oracle, qmax: i64) -> Oracle {
    let mut out = Oracle::new();
    for (&(q1, x1, y1), c1) in a {
        for (&(q2, x2, y2), c2) in b {
            let key = (q1 + q2, x1 + x2, y1 + y2);
            if key.0 > qmax || key.1 + key.2 > 2 {
                continue;
            }
            *out.entry(key).or_insert_with(BigRational::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn oadd(a: &mut Oracle, b: &Oracle, scale: &BigRational) {
    for (k, c) in b {
        *a.entry(*k).or_insert_with(BigRational::zero) += scale * c;
    }
    a.retain(|_, c| !c.is_zero());
}

/// sum_k P_k phi^k(sum_n a_n/n q^n) with phi(q) = q^5 + 5 dq and
/// phi(dq) = dq^5 + 5 d2q, over Q.
pub fn oracle_sharp(a: &[i64], poly: &[i64], qmax: i64) -> Oracle {
    let one: Oracle = [((0, 0, 0), rat(1))].into();
    let q: Oracle = [((1, 0, 0), rat(1))].into();
    let phi_q: Oracle = [((5, 0, 0), rat(1)), ((0, 1, 0), rat(5))].into();
    let mut phi2_q = one.clone();
    for _ in 0..5 {
        phi2_q = omul(&phi2_q, &phi_q, qmax);
    }
    // 5 dq^5 is beyond delta-degree 2
    oadd(&mut phi2_q, &[((0, 0, 1), rat(25))].into(), &rat(1));
    let images = [q, phi_q, phi2_q];
    let mut out = Oracle::new();
    for (k, &pk) in poly.iter().enumerate() {
        if pk == 0 {
            continue;
        }
        let mut power = one.clone();
        for (i, &ai) in a.iter().enumerate().take(qmax as usize) {
            power = omul(&power, &images[k], qmax);
            let n = i as i64 + 1;
            let c = BigRational::new(BigInt::from(ai * pk), BigInt::from(n));
            oadd(&mut out, &power, &c);
        }
    }
    out
}

pub fn matches_oracle(s: &JetSeries, oracle: &Oracle, ctx: &Arc<PadicCtx>) -> bool {
    let mut keys: Vec<Monomial> = s.terms().map(|(m, _)| *m).collect();
    keys.extend(oracle.keys().map(|&(q, x, y)| Monomial::new(q, &[x, y])));
    keys.iter().all(|m| {
        let want = oracle.get(&(m.q, m.dq[0], m.dq[1])).map_or_else(
            || PadicNum::exact_zero(ctx),
            |c| PadicNum::from_rational(ctx, c),
        );
        s.coeff_or_zero(m).agrees(&want)
    })
}
