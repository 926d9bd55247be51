//! The acceptance battery: ten exact checks shared by the test target and `verify-suite`.
//!
//! Reports carry no timings, so identical configs produce identical JSON. Wall-clock
//! limits are folded into a single `within_time_limit` flag per criterion.

use crate::error::{Error, Result};
use crate::exactnum::{q, qf, pow_p, LaurentPoly, MPoly, QuadCtx, RatFunc, Rational};
use crate::gstar::{asai_star_prime, gstar_factor, star_group};
use crate::heckealg::{euler_poly, iota_embed, EulerKind, Group};
use crate::heckemod::{
    certify_ideal, chain_check, delta1, delta1_verify, local_factor, phi_c_weight, random_integral_vector, CertPart, Delta1Case,
    Level, RandomSpec, TestVector, trace_level,
};
use crate::hilbert::{asai_artin_value, ingest, period_ideal_check, tate_inverse, Place};
use crate::padicgrp::{canonical, gen_cartan_all_labels, gen_cartan_label, pgk_all_labels, pgk_label, Label, Mat2};
use crate::whitzeta::{
    epsilon_coefficients, gauss_shell, lambda_form, psi_normalized, psi_secondary, zeta_asai, SchwartzFn, ZetaOptions,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

/// Synthetic weight-2 eigenform data over Q(sqrt 5) used by the Hilbert criterion.
pub const SYNTHETIC_FORM: &str = include_str!("../fixtures/synthetic_q5_w2.json");

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Prime for the randomized criteria (certificates and the chain identity).
    pub prime: u64,
    pub seed: u64,
    /// Draws per level/lattice combination for the certificate criterion.
    pub certificate_draws: usize,
    /// Random matrices for the decomposition criterion.
    pub decomposition_samples: usize,
    pub chain_draws: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { prime: 3, seed: 20240611, certificate_draws: 20, decomposition_samples: 500, chain_draws: 10 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub within_time_limit: bool,
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub prime: u64,
    pub seed: u64,
    pub all_passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl CriterionResult {
    /// One human-readable status line.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("[{status}] {:>2} {} ({:.2} s)", self.id, self.name, self.elapsed.as_secs_f64())
    }
}

type Check = fn(&SuiteConfig) -> Result<(bool, Value)>;

/// (id, name, per-run time limit in seconds, check).
const CRITERIA: [(u8, &str, Option<u64>, Check); 10] = [
    (1, "unramified Asai calibration", Some(20), unramified_calibration),
    (2, "secondary integral and linear form", None, secondary_identity),
    (3, "coset decompositions cover", None, decompositions_cover),
    (4, "mirabolic weights", None, mirabolic_weights),
    (5, "delta_1 local factors", Some(180), delta1_factors),
    (6, "ideal certificates", None, ideal_certificates),
    (7, "Gauss shell oracle", None, gauss_oracle),
    (8, "linear form chain identity", None, chain_identity),
    (9, "Hilbert period check", Some(30), hilbert_check),
    (10, "epsilon coefficient extraction", None, epsilon_extraction),
];

pub fn criterion_ids() -> Vec<u8> {
    CRITERIA.iter().map(|c| c.0).collect()
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> Result<CriterionResult> {
    let &(id, name, limit, check) =
        CRITERIA.iter().find(|c| c.0 == id).ok_or_else(|| Error::Input(format!("no criterion {id}")))?;
    let start = Instant::now();
    let (passed, detail) = match check(cfg) {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    let elapsed = start.elapsed();
    let within_time_limit = limit.is_none_or(|s| elapsed <= Duration::from_secs(s));
    Ok(CriterionResult { id, name, passed: passed && within_time_limit, within_time_limit, detail, elapsed })
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionResult> =
        CRITERIA.iter().map(|c| run_criterion(c.0, cfg).expect("listed criterion")).collect();
    SuiteReport { prime: cfg.prime, seed: cfg.seed, all_passed: criteria.iter().all(|c| c.passed), criteria }
}

fn one_ratfunc() -> RatFunc<MPoly> {
    RatFunc::from_poly(LaurentPoly::one())
}

fn unramified_calibration(_: &SuiteConfig) -> Result<(bool, Value)> {
    let mut rows = vec![];
    for p in [3u64, 5] {
        let ctx = QuadCtx::new(p)?;
        let z = zeta_asai(p, &SchwartzFn::lattice(p, 0), &Mat2::identity(&ctx), &ZetaOptions::default())?;
        let euler = euler_poly(EulerKind::AsaiInert, p)?.satake();
        rows.push(json!({ "p": p, "product_is_one": z.value.mul_poly(&euler).equals(&one_ratfunc()) }));
    }
    let ok = rows.iter().all(|r| r["product_is_one"] == true);
    Ok((ok, json!(rows)))
}

fn secondary_identity(_: &SuiteConfig) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = vec![];
    for p in [3u64, 5] {
        // L(As, s) / L(omega, 2s) is the inverse of the standard factor.
        let std = euler_poly(EulerKind::StandardF, p)?.satake();
        let spherical = psi_secondary(p, 0, 0)?.value.mul_poly(&std).equals(&one_ratfunc());
        let mut mismatches = vec![];
        for a in -2..=2 {
            for b in 0..=3u32 {
                if lambda_form(p, a, b)? != psi_normalized(p, a, b)? {
                    mismatches.push(json!([a, b]));
                }
            }
        }
        ok &= spherical && mismatches.is_empty();
        rows.push(json!({ "p": p, "spherical": spherical, "lambda_mismatches": mismatches }));
    }
    Ok((ok, json!(rows)))
}

fn unique_labels(ctx: &QuadCtx, g: &Mat2) -> Result<(Label, Label, bool)> {
    let pw = pgk_label(ctx, g)?;
    let cw = gen_cartan_label(ctx, g)?;
    let unique = pgk_all_labels(ctx, g)?.len() == 1 && gen_cartan_all_labels(ctx, g)?.len() == 1;
    Ok((pw.label, cw.label, unique && pw.verify(ctx, g) && cw.verify(ctx, g)))
}

fn decompositions_cover(cfg: &SuiteConfig) -> Result<(bool, Value)> {
    let p = 3;
    let ctx = QuadCtx::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut random_failures = vec![];
    let mut drawn = 0;
    while drawn < cfg.decomposition_samples {
        let mut entry = || {
            let v = rng.gen_range(-2..=2);
            ctx.elem(q(rng.gen_range(-4..=4)), q(rng.gen_range(-4..=4))).scale(&pow_p(p, v))
        };
        let g = Mat2::new(entry(), entry(), entry(), entry());
        if g.det().is_zero() {
            continue;
        }
        drawn += 1;
        if !unique_labels(&ctx, &g)?.2 {
            random_failures.push(drawn);
        }
    }

    // Translates of every canonical cell with indices in [-2, 2] by fixed group elements.
    let lefts_p = [Mat2::identity(&ctx), Mat2::from_rationals(&ctx, q(2), q(5) / q(3), q(0), q(1))];
    let lefts_b = [Mat2::identity(&ctx), Mat2::from_rationals(&ctx, q(2), q(1), q(0), q(1))];
    let rights = [
        Mat2::identity(&ctx),
        Mat2::weyl(&ctx),
        Mat2::new(ctx.one(), ctx.alpha(), ctx.int(3), ctx.int(1)),
    ];
    let mut labels = vec![];
    for a in -2..=2 {
        for b in 0..=2 {
            labels.push(Label::Pgk { a, b });
        }
    }
    for nu2 in -2..=2 {
        for nu1 in nu2..=2 {
            for nu in 0..=2 {
                labels.push(Label::Cell { nu2, nu1, nu });
            }
        }
    }
    let mut sweep_failures = vec![];
    let mut swept = 0;
    for &label in &labels {
        let lefts = if matches!(label, Label::Pgk { .. }) { &lefts_p } else { &lefts_b };
        for l in lefts {
            for r in &rights {
                let g = l.mul(&canonical(&ctx, label)).mul(r);
                swept += 1;
                let (pl, cl, ok) = unique_labels(&ctx, &g)?;
                if !ok || (pl != label && cl != label) {
                    sweep_failures.push(json!({ "label": label }));
                }
            }
        }
    }
    let ok = random_failures.is_empty() && sweep_failures.is_empty();
    Ok((
        ok,
        json!({
            "p": p,
            "random_samples": drawn,
            "random_failures": random_failures,
            "swept": swept,
            "sweep_failures": sweep_failures,
        }),
    ))
}

fn mirabolic_weights(_: &SuiteConfig) -> Result<(bool, Value)> {
    let mut rows = vec![];
    let mut ok = true;
    for p in [3u64, 5] {
        for b in 0..=3u32 {
            let w = phi_c_weight(p, b)?;
            let expect = if b == 0 { q(1) } else { q((p as i64 - 1) * (p as i64).pow(b - 1)) };
            ok &= w == expect;
            rows.push(json!({ "p": p, "b": b, "weight": w.to_string(), "expected": expect.to_string() }));
        }
    }
    Ok((ok, json!(rows)))
}

fn delta1_factors(_: &SuiteConfig) -> Result<(bool, Value)> {
    let mut rows = vec![];
    let mut ok = true;
    for p in [3u64, 5, 7] {
        let inert = delta1_verify(p, Delta1Case::Inert)?;
        let split = delta1_verify(p, Delta1Case::Split)?;
        let split_factor = local_factor(&trace_level(&delta1(p, Delta1Case::Split)?)?)?;
        let iota_ok = iota_embed(&asai_star_prime(p, Group::GstarSplit)?)? == split_factor;
        ok &= inert.all_ok() && split.all_ok() && iota_ok;
        rows.push(json!({
            "p": p,
            "inert_a_of_s_is_one": inert.a_of_s_is_one,
            "godement_constant": inert.godement_constant.to_string(),
            "godement_constant_ok": inert.godement_constant_ok,
            "k1_volume": inert.k1_volume.to_string(),
            "k1_volume_ok": inert.k1_volume_ok,
            "inert_all_ok": inert.all_ok(),
            "split_all_ok": split.all_ok(),
            "split_factor_is_iota_image": iota_ok,
        }));
    }
    Ok((ok, json!(rows)))
}

fn draws(cfg: &SuiteConfig, spec: RandomSpec, salt: u64) -> Result<Vec<TestVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
    (0..cfg.certificate_draws).map(|_| random_integral_vector(&spec, &mut rng)).collect()
}

fn ideal_certificates(cfg: &SuiteConfig) -> Result<(bool, Value)> {
    let p = cfg.prime;
    let combos = [
        (Group::InertF, Level::K, CertPart::One, false),
        (Group::SplitPair, Level::K, CertPart::One, false),
        (Group::InertF, Level::Kp, CertPart::Two, true),
        (Group::InertF, Level::Kp, CertPart::Three, false),
        (Group::SplitPair, Level::Kp, CertPart::Three, false),
    ];
    let mut ok = true;
    let mut rows = vec![];
    for (i, &(group, level, part, vanishing)) in combos.iter().enumerate() {
        let spec = RandomSpec { vanishing_at_zero: vanishing, ..RandomSpec::new(p, group, level) };
        let mut verified = 0;
        for v in draws(cfg, spec, i as u64 + 1)? {
            let c = certify_ideal(&v, part)?;
            if c.verified && c.ideal.as_ref().is_none_or(|ic| ic.reexpand() == c.factor) {
                verified += 1;
            }
        }
        ok &= verified == cfg.certificate_draws;
        rows.push(json!({ "group": group, "level": level, "part": part, "verified": verified }));
    }
    for (i, group) in [Group::InertF, Group::SplitPair].into_iter().enumerate() {
        let spec = RandomSpec { balanced: true, ..RandomSpec::new(p, group, Level::Kp) };
        let star = star_group(group)?;
        let mut verified = 0;
        for v in draws(cfg, spec, 100 + i as u64)? {
            let f = gstar_factor(&v.with_group(star))?;
            if f.verified() && f.certificate.reexpand() == f.p_star {
                verified += 1;
            }
        }
        ok &= verified == cfg.certificate_draws;
        rows.push(json!({ "group": star, "level": Level::Kp, "part": "gstar", "verified": verified }));
    }
    Ok((ok, json!({ "p": p, "draws": cfg.certificate_draws, "combinations": rows })))
}

/// sum over units u mod p^k of zeta_{p^k}^(u c), reduced exactly modulo the cyclotomic polynomial.
fn ramanujan_sum(p: u64, k: u32, c: u64) -> BigInt {
    if k == 0 {
        return BigInt::from(1);
    }
    let n = p.pow(k) as usize;
    let step = n / p as usize;
    let mut coeffs = vec![BigInt::from(0); n];
    for u in (0..n as u64).filter(|u| u % p != 0) {
        coeffs[((u * c) % n as u64) as usize] += 1;
    }
    // Phi_n(X) = sum_{i < p} X^(i n / p), monic of degree (p - 1) n / p.
    let deg = n - step;
    for d in (deg..n).rev() {
        let a = std::mem::take(&mut coeffs[d]);
        for i in 0..p as usize - 1 {
            coeffs[d - deg + i * step] -= &a;
        }
    }
    assert!(coeffs[1..].iter().all(|x| *x == BigInt::from(0)), "unit sum is not rational");
    coeffs[0].clone()
}

fn gauss_brute(p: u64, j: i64, vbeta: i64, unit: u64) -> Rational {
    let k = -(j + vbeta);
    if k <= 0 {
        return q(1);
    }
    let units = BigInt::from((p - 1) * p.pow(k as u32 - 1));
    Rational::new(ramanujan_sum(p, k as u32, unit), units)
}

fn gauss_oracle(_: &SuiteConfig) -> Result<(bool, Value)> {
    let mut checked = 0;
    let mut mismatches = vec![];
    for p in [3u64, 5] {
        for j in -3..=1 {
            for vbeta in -2..=2 {
                for unit in [1, p - 1] {
                    checked += 1;
                    let brute = gauss_brute(p, j, vbeta, unit);
                    let closed = gauss_shell(p, j, vbeta);
                    if brute != closed {
                        mismatches.push(json!({ "p": p, "j": j, "vbeta": vbeta, "brute": brute.to_string() }));
                    }
                }
            }
        }
    }
    Ok((mismatches.is_empty(), json!({ "checked": checked, "mismatches": mismatches })))
}

fn chain_identity(cfg: &SuiteConfig) -> Result<(bool, Value)> {
    let p = cfg.prime;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(8));
    let spec = RandomSpec::new(p, Group::InertF, Level::K);
    let mut rows = vec![];
    let mut ok = true;
    for _ in 0..cfg.chain_draws {
        let v = random_integral_vector(&spec, &mut rng)?;
        let factor = local_factor(&v)?;
        let c = chain_check(p, &factor)?;
        ok &= c.holds;
        rows.push(json!({ "factor": factor.render(), "holds": c.holds }));
    }
    Ok((ok, json!({ "p": p, "draws": rows })))
}

fn hilbert_check(_: &SuiteConfig) -> Result<(bool, Value)> {
    let raw: Value = serde_json::from_str(SYNTHETIC_FORM).map_err(|e| Error::Input(e.to_string()))?;
    let data = ingest(&raw)?;
    let tested = [3u64, 7, 11, 13];
    // l = 3 lies in S, so the unramified inputs sit at the other tested primes.
    let mut inputs = vec![];
    for &p in &tested[1..] {
        let group = if data.splits_in_e(p) { Group::SplitPair } else { Group::InertF };
        inputs.push(TestVector::generator(p, group)?);
    }
    let report = period_ideal_check(&data, &inputs, &BTreeSet::new(), Place { ell: 3, root: None }, &Default::default())?;
    let mut ok = report.value_is_one && report.holds();
    let mut rows = vec![];
    for p in tested {
        let (_, tate_ok) = tate_inverse(&data, p)?;
        let mut shift_ok = true;
        for s0 in -1..=2 {
            shift_ok &= asai_artin_value(&data, p, s0)?.shift_identity;
        }
        ok &= tate_ok && shift_ok;
        rows.push(json!({ "p": p, "tate_identity": tate_ok, "shift_identity": shift_ok }));
    }
    Ok((ok, json!({ "value": report.value, "value_is_one": report.value_is_one, "primes": rows })))
}

/// The literal table: -1 below b - 1, -p/(p - 1) at n = b, nothing at n = b - 1.
fn epsilon_table_literal(p: u64, b: u32, n: u32) -> Option<Rational> {
    if n + 1 < b {
        Some(q(-1))
    } else if n == b {
        Some(qf(-(p as i64), p as i64 - 1))
    } else {
        None
    }
}

fn epsilon_extraction(_: &SuiteConfig) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = vec![];
    for p in [3u64, 5] {
        for b in 1..=4u32 {
            let eps = epsilon_coefficients(p, b)?;
            let mut entries = vec![];
            for (n, e) in eps.iter().enumerate() {
                let n = n as u32;
                let literal = epsilon_table_literal(p, b, n);
                let shifted = if n + 1 == b { qf(-(p as i64), p as i64 - 1) } else { q(-1) };
                ok &= *e == shifted && literal.as_ref().is_none_or(|l| l == e);
                entries.push(json!({
                    "n": n,
                    "extracted": e.to_string(),
                    "table_literal": literal.map(|l| l.to_string()),
                    "table_at_b_minus_one": shifted.to_string(),
                }));
            }
            rows.push(json!({ "p": p, "b": b, "entries": entries }));
        }
    }
    let discrepancy = json!({
        "question": "the table places -p/(p-1) at n = b, outside the summation range n <= b - 1",
        "resolution": "extracted coefficients put -p/(p-1) at n = b - 1 and -1 below it",
        "rows": rows,
    });
    Ok((ok, discrepancy))
}
