//! The acceptance gate: one test per published criterion, each printing a
//! single pass/fail line and enforcing its stated budget.

use holoroot::detres::{discriminant, lemma_determinant_check, lemma_manquant_check};
use holoroot::multiindex::{
    enumerate_class, minimal_form, reduce_to_minimal, sk_minors, sk_point, Chart, MultiIndex,
    QRKey,
};
use holoroot::oracle::{compare_series, radical_table_k2};
use holoroot::polyring::{int, mqr_polynomial, rat, Poly, Rational};
use holoroot::taylor::{build_table, seed_coefficients};
use holoroot::verify::recurrences_suite;
use holoroot::weyl::{annihilates_newton, dn_polynomial, gen_a, identity_residual, newton_polynomial, Identity};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::{Duration, Instant};

fn report(n: u32, name: &str, passed: bool, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "criterion {n:2} ({name}): {} in {:.2?}",
        if passed { "PASS" } else { "FAIL" },
        elapsed
    );
    assert!(passed, "criterion {n} ({name}) failed");
    assert!(
        elapsed < budget,
        "criterion {n} ({name}) exceeded its {budget:?} budget: {elapsed:?}"
    );
}

#[test]
fn criterion_01_seed_values() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=6usize {
        let seeds = seed_coefficients(k);
        ok &= seeds.contains(&(QRKey::new(0, 0), -Rational::one()));
        ok &= seeds.contains(&(QRKey::new(1, 1), Rational::zero()));
        for h in 2..=k as u32 {
            ok &= seeds.contains(&(QRKey::new(1, h), rat(1, k as i64)));
        }
        ok &= seeds.len() == k + 1;
    }
    report(1, "seed values", ok, t0, Duration::from_secs(1));
}

#[test]
fn criterion_02_k2_golden_table() {
    let t0 = Instant::now();
    let built = build_table(2, 10);
    let radical = radical_table_k2(10);
    let mut ok = built == radical;
    ok &= built.coefficient(2, 2) == Some(&rat(-1, 4));
    ok &= built.coefficient(2, 4) == Some(&rat(1, 4));
    for (key, c) in built.iter() {
        if key.r % 2 == 1 {
            ok &= c.is_zero();
        }
    }
    report(2, "k=2 golden table", ok, t0, Duration::from_secs(5));
}

#[test]
fn criterion_03_recurrence_closure() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=5 {
        ok &= build_table(k, 10).check_recurrences().is_empty();
    }
    report(3, "recurrence closure", ok, t0, Duration::from_secs(30));
}

#[test]
fn criterion_04_numeric_root_agreement() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0ACC);
    let bound = 10.0 * 0.05f64.powi(9);
    let ratio_bound = 2f64.powi(-9) / 0.9;
    let mut ok = true;
    for k in 2..=5usize {
        let table = build_table(k, 8);
        for _ in 0..20 {
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let m = raw.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let sigma: Vec<Complex64> = raw
                .iter()
                .map(|x| Complex64::new(x / m * 0.05, 0.0))
                .collect();
            let err = compare_series(&table, &sigma).unwrap();
            ok &= err <= bound;
            // decay under halving is only measurable above the f64 noise
            // floor; below it both residuals are rounding dust
            if err > 1e-13 {
                let half: Vec<Complex64> = sigma.iter().map(|s| s * 0.5).collect();
                let err_half = compare_series(&table, &half).unwrap();
                ok &= err_half / err <= ratio_bound;
            }
        }
    }
    report(4, "numeric root agreement", ok, t0, Duration::from_secs(10));
}

#[test]
fn criterion_05_annihilation_residuals() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=4usize {
        for rep in build_table(k, 8).annihilation_residuals() {
            if rep.operator.starts_with("A(") {
                ok &= rep.first_nonzero_degree.is_none();
            } else {
                // first-order operators: no residual in degrees <= Q - 1
                ok &= rep.first_nonzero_degree.map_or(true, |d| d > 7);
            }
        }
    }
    report(5, "annihilation residuals", ok, t0, Duration::from_secs(60));
}

#[test]
fn criterion_06_operator_identities() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=5usize {
        for h in 2..=k {
            ok &= identity_residual(k, Identity::Eh { h }).is_zero();
        }
        ok &= identity_residual(k, Identity::E1).is_zero();
        for h in 2..=k {
            ok &= annihilates_newton(&identity_residual(k, Identity::Fh { h }), 12);
        }
        ok &= annihilates_newton(&identity_residual(k, Identity::F1), 12);
        for (p, q) in [(0, -1), (0, 1), (-1, 1)] {
            let r = identity_residual(k, Identity::Commutator { p, q });
            ok &= annihilates_newton(&r, 12);
        }
    }
    report(6, "operator identities", ok, t0, Duration::from_secs(60));
}

#[test]
fn criterion_07_newton_dn_laws() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=5usize {
        for m in 1..=12u32 {
            let nm = newton_polynomial(k, m);
            for h in 1..=k {
                let sign = if h % 2 == 1 { 1 } else { -1 };
                let rhs = dn_polynomial(k, m as i64 - h as i64).scale(&int(sign * m as i64));
                ok &= nm.partial_derivative(h) == rhs;
            }
            let mut acc = dn_polynomial(k, m as i64);
            for h in 1..=k as i64 {
                if m as i64 - h < -(k as i64) + 1 {
                    break;
                }
                let sign = if h % 2 == 0 { 1 } else { -1 };
                acc = &acc
                    + &(&Poly::var(k, h as usize) * &dn_polynomial(k, m as i64 - h))
                        .scale(&int(sign));
            }
            ok &= acc.is_zero();
        }
    }
    report(7, "Newton/DN laws", ok, t0, Duration::from_secs(10));
}

#[test]
fn criterion_08_determinant_lemmas() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=5usize {
        ok &= lemma_determinant_check(k).matches;
        ok &= lemma_manquant_check(k).matches;
    }
    let mut delta2 = Poly::zero(2);
    delta2.add_term(MultiIndex(vec![2, 0]), int(1));
    delta2.add_term(MultiIndex(vec![0, 1]), int(-4));
    ok &= discriminant(2) == delta2;
    report(8, "determinant lemmas", ok, t0, Duration::from_secs(30));
}

#[test]
fn criterion_09_mqr_annihilation() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=5usize {
        let ops: Vec<_> = (1..k)
            .flat_map(|p| (2..=k).map(move |q| gen_a(k, p, q)))
            .collect();
        for q in 0..=6u32 {
            for r in q..=(k as u32 * q) {
                let m = mqr_polynomial(k, QRKey::new(q, r));
                for op in &ops {
                    ok &= op.apply(&m).is_zero();
                }
            }
        }
    }
    report(9, "m_{q,r} annihilation", ok, t0, Duration::from_secs(20));
}

#[test]
fn criterion_10_appendix_combinatorics() {
    let t0 = Instant::now();
    let mut ok = true;
    for k in 2..=5usize {
        // every exponent vector with |alpha| <= 8 reduces to the closed-form
        // minimal representative of its class, so the representative is
        // unique across the class
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == k {
                let alpha = MultiIndex(prefix);
                let key = QRKey::new(alpha.length(), alpha.weight());
                ok &= Some(reduce_to_minimal(&alpha)) == minimal_form(k, key);
                ok &= enumerate_class(k, key).contains(&alpha);
                continue;
            }
            let used: u32 = prefix.iter().sum();
            for e in 0..=(8 - used) {
                let mut next = prefix.clone();
                next.push(e);
                stack.push(next);
            }
        }
        let mut rng = StdRng::seed_from_u64(0x5eed_0ACD);
        for _ in 0..100 {
            let z0 = rat(rng.random_range(-9..=9), rng.random_range(1..=9));
            let z1 = rat(rng.random_range(-9..=9), rng.random_range(1..=9));
            for chart in [Chart::Chart1, Chart::ChartK] {
                let pt = sk_point(k, &z0, &z1, chart);
                ok &= sk_minors(&pt).iter().all(|m| m.is_zero());
            }
        }
    }
    report(10, "appendix combinatorics", ok, t0, Duration::from_secs(20));
}

#[test]
fn criterion_11_documented_discrepancy() {
    let t0 = Instant::now();
    let checks = recurrences_suite(2, 8);
    let diag = checks.iter().find(|c| c.name.contains("C(2,2) diagonal"));
    let mut ok = diag.is_some();
    if let Some(d) = diag {
        // the flag is raised, both values are printed, and the value the
        // table actually uses is the oracle-confirmed one
        ok &= d.note.contains("DISCREPANCY");
        ok &= d.note.contains("-1/4") && d.note.contains("1/3");
    }
    let table = build_table(2, 8);
    ok &= table.coefficient(2, 2) == Some(&rat(-1, 4));
    ok &= radical_table_k2(8).coefficient(2, 2) == Some(&rat(-1, 4));
    report(11, "documented discrepancy", ok, t0, Duration::from_secs(10));
}
