//! Acceptance suite: the ten headline results this project must reproduce
//! exactly.  Each criterion prints one PASS/FAIL line; the test fails if
//! any criterion fails, after all ten have run.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use shiftcert_core::cert::Verdict;
use shiftcert_core::khypo::{
    det_split_sides, hilbert_type_det, hk_closed_form, k_hypo_threshold, k_hyponormal_test,
};
use shiftcert_core::matrix::{det_fraction_free, max_diag_slack, psd_check, PsdOutcome, SymMatrix};
use shiftcert_core::oracle::{
    direct_quartic_form, lemma2_quartic_form, quadratic_hypo_test, ParamVector,
};
use shiftcert_core::quartic::{
    build_delta_tilde, delta_block, four_hyponormal_test, instance_wsq, nested_determinants_test,
    quartic_certificate, rationalize_block, theta1, theta2,
};
use shiftcert_core::rat::{fmt_rat, int, rat, Rat};
use shiftcert_core::rng::SplitMix64;
use shiftcert_core::roots::Threshold;
use shiftcert_core::shifts::{hyponormal_check, WeightFamily};
use std::process::Command;

fn family() -> WeightFamily {
    WeightFamily::example()
}

fn err(msg: String) -> Result<(), String> {
    Err(msg)
}

/// 1. The exact k-hyponormality threshold matches the closed form H_k for
///    k = 1..6.
fn criterion_1() -> Result<(), String> {
    let f = family();
    for k in 1..=6u64 {
        let res = k_hypo_threshold(&f, k as usize).map_err(|e| e)?;
        let expected = hk_closed_form(k);
        match &res.threshold {
            Threshold::Exact(r) if *r == expected => {}
            other => {
                return err(format!(
                    "k = {k}: computed {other:?}, closed form {}",
                    fmt_rat(&expected)
                ))
            }
        }
    }
    if hk_closed_form(2) != rat(24, 35) || hk_closed_form(3) != rat(200, 297) {
        return err("H_2 or H_3 deviates from 24/35, 200/297".to_string());
    }
    Ok(())
}

/// 2. The determinant-split identity holds as an exact rational function
///    for k = 1..6.
fn criterion_2() -> Result<(), String> {
    for k in 1..=6usize {
        let (lhs, rhs) = det_split_sides(k);
        if lhs != rhs {
            return err(format!("identity fails at k = {k}"));
        }
    }
    Ok(())
}

/// 3. The factorial closed form of the Hilbert-type determinant equals the
///    direct fraction-free determinant for nn <= 6, integer p <= 4.
fn criterion_3() -> Result<(), String> {
    for nn in 1..=6usize {
        for p in 0..=4i64 {
            let closed = hilbert_type_det(nn, &int(p)).map_err(|e| e)?;
            let m = SymMatrix::from_fn(nn, |i, j| rat(1, p + (i + j) as i64 + 1));
            let direct = det_fraction_free(&m);
            if closed != direct {
                return err(format!(
                    "nn = {nn}, p = {p}: closed {} vs direct {}",
                    fmt_rat(&closed),
                    fmt_rat(&direct)
                ));
            }
        }
    }
    Ok(())
}

/// 4. The six harvested (slack, reduced diagonal) pairs are exact, and each
///    reduced block stays PSD with rank exactly one below full at three
///    sample parameters.
fn criterion_4() -> Result<(), String> {
    let f = family();
    let (_, ledger) = build_delta_tilde(&f).map_err(|e| e)?;
    let expected = [
        (rat(1, 84), rat(5, 12)),
        (rat(1, 2450), rat(612, 1225)),
        (rat(1, 11760), rat(1411, 2352)),
        (rat(1, 62720), rat(627, 12544)),
        (rat(1, 211680), rat(1411, 42336)),
        (rat(1, 604800), rat(2057, 86400)),
    ];
    if ledger.records.len() != 6 {
        return err(format!(
            "expected 6 ledger records, got {}",
            ledger.records.len()
        ));
    }
    for (rec, (delta, diag)) in ledger.records.iter().zip(expected.iter()) {
        if &rec.delta != delta || &rec.reduced_diag != diag {
            return err(format!(
                "{}: got ({}, {}), expected ({}, {})",
                rec.source,
                fmt_rat(&rec.delta),
                fmt_rat(&rec.reduced_diag),
                fmt_rat(delta),
                fmt_rat(diag)
            ));
        }
    }
    for x in [rat(2, 3), rat(667, 990), rat(44, 63)] {
        let s = f.instance(x.clone()).map_err(|e| e)?;
        let wsq = instance_wsq(&s);
        let blocks: [(shiftcert_core::quartic::SymRadMatrix<Rat>, usize); 6] = [
            (theta1(&wsq), 1),
            (theta2(&wsq), 1),
            (delta_block(&wsq, 0), 1),
            (delta_block(&wsq, 2), 0),
            (delta_block(&wsq, 3), 0),
            (delta_block(&wsq, 4), 0),
        ];
        for (block, pos) in blocks {
            let m = rationalize_block(&block, &wsq).map_err(|e| e)?;
            let slack = max_diag_slack(&m, pos)
                .map_err(|e| format!("{} at x = {}: {e:?}", block.name, fmt_rat(&x)))?;
            let mut reduced = m.clone();
            reduced.set(pos, pos, m.get(pos, pos) - &slack);
            match psd_check(&reduced) {
                PsdOutcome::Psd { rank, .. } if rank == reduced.dim() - 1 => {}
                other => {
                    return err(format!(
                        "{} at x = {}: reduced block check failed ({other:?})",
                        block.name,
                        fmt_rat(&x)
                    ))
                }
            }
        }
    }
    Ok(())
}

/// 5. The coefficientwise quartic threshold is exactly 22580899/33531912
///    and the binding coefficient is named.
fn criterion_5() -> Result<(), String> {
    let f = family();
    let (dt, _) = build_delta_tilde(&f).map_err(|e| e)?;
    let (coeffs, res) = nested_determinants_test(&dt);
    let xi = rat(22580899, 33531912);
    match &res.threshold {
        Threshold::Exact(r) if *r == xi => {}
        other => return err(format!("computed {other:?}, expected {}", fmt_rat(&xi))),
    }
    match coeffs.binding {
        Some((minor, exps)) => {
            println!(
                "           binding coefficient: minor {minor}, A2^{} B2^{} C2^{}",
                exps[0], exps[1], exps[2]
            );
            Ok(())
        }
        None => err("no binding coefficient named".to_string()),
    }
}

/// 6. Through the CLI: at x = 667/990 and at the midpoint of
///    (200/297, 667/990), 3-hyponormality is REFUTED and the quartic
///    certificate is CERTIFIED, with matching exit codes.
fn criterion_6() -> Result<(), String> {
    let fam = concat!(env!("CARGO_MANIFEST_DIR"), "/../../families/example.fam");
    for x in ["667/990", "4001/5940"] {
        let khypo = Command::new(env!("CARGO_BIN_EXE_shiftcert"))
            .args(["check-khypo", "--family", fam, "--x", x, "--k", "3"])
            .output()
            .map_err(|e| e.to_string())?;
        if khypo.status.code() != Some(1)
            || !String::from_utf8_lossy(&khypo.stdout).contains("REFUTED")
        {
            return err(format!("check-khypo at x = {x} did not refute"));
        }
        let quartic = Command::new(env!("CARGO_BIN_EXE_shiftcert"))
            .args(["quartic-certify", "--family", fam, "--x", x])
            .output()
            .map_err(|e| e.to_string())?;
        if quartic.status.code() != Some(0)
            || !String::from_utf8_lossy(&quartic.stdout).contains("CERTIFIED")
        {
            return err(format!("quartic-certify at x = {x} did not certify"));
        }
    }
    Ok(())
}

/// 7. The block-based 4-hyponormality test agrees with the Hankel-based
///    k = 4 test at 20 exact parameters, including the boundary 75/112.
fn criterion_7() -> Result<(), String> {
    let f = family();
    let mut samples: Vec<Rat> = (1..=19i64).map(|i| rat(3, 5) + rat(i, 200)).collect();
    samples.push(rat(75, 112));
    for x in samples {
        let s = f.instance(x.clone()).map_err(|e| e)?;
        let blocks = four_hyponormal_test(&s, 10);
        let hankel = k_hyponormal_test(&s, 4, 10);
        if blocks.verdict != hankel.verdict {
            return err(format!(
                "x = {}: blocks {} vs Hankel {}",
                fmt_rat(&x),
                blocks.verdict,
                hankel.verdict
            ));
        }
    }
    Ok(())
}

/// 8. The two independent quartic-form evaluations agree to 10^-40
///    relative over 100 seeded trials at 256 bits.
fn criterion_8() -> Result<(), String> {
    let f = family();
    let s = f.instance(rat(2, 3)).map_err(|e| e)?;
    let mut rng = SplitMix64::new(42);
    for trial in 0..100 {
        let support = 1 + (rng.below(12) as usize);
        let p = ParamVector::seeded(&mut rng, support);
        let (dr, _) = direct_quartic_form(&s, &p, 256);
        let (lr, _) = lemma2_quartic_form(&s, &p, 256);
        let scale = Rat::one() + dr.to_rat().abs();
        let tol = scale * Rat::new(BigInt::one(), BigInt::from(10).pow(40));
        if (dr.to_rat() - lr.to_rat()).abs() > tol {
            return err(format!("trial {trial}: evaluations disagree"));
        }
    }
    Ok(())
}

/// 9. At x = 2/3 every implemented test certifies.
fn criterion_9() -> Result<(), String> {
    let f = family();
    let x = rat(2, 3);
    let s = f.instance(x.clone()).map_err(|e| e)?;
    let mut verdicts: Vec<(String, Verdict)> =
        vec![("hyponormal".to_string(), hyponormal_check(&s, 25).verdict)];
    for k in 1..=6usize {
        verdicts.push((
            format!("{k}-hyponormal"),
            k_hyponormal_test(&s, k, 10).verdict,
        ));
    }
    verdicts.push((
        "4-hypo blocks".to_string(),
        four_hyponormal_test(&s, 12).verdict,
    ));
    verdicts.push((
        "quartic certificate".to_string(),
        quartic_certificate(&f, &x).verdict,
    ));
    for sv in [
        Rat::zero(),
        rat(1, 4),
        int(1),
        int(4),
        int(16),
        int(1000000),
    ] {
        verdicts.push((
            format!("quadratic scan s = {}", fmt_rat(&sv)),
            quadratic_hypo_test(&s, &sv, 12).verdict,
        ));
    }
    for (name, v) in verdicts {
        if v != Verdict::Certified {
            return err(format!("{name}: {v}"));
        }
    }
    Ok(())
}

/// 10. The closed form H_k is strictly decreasing for k = 1..50 with all
///     values in (2/3, 3/4].
fn criterion_10() -> Result<(), String> {
    let mut prev: Option<Rat> = None;
    for k in 1..=50u64 {
        let h = hk_closed_form(k);
        if h <= rat(2, 3) || h > rat(3, 4) {
            return err(format!("H_{k} = {} escapes (2/3, 3/4]", fmt_rat(&h)));
        }
        if let Some(p) = prev {
            if h >= p {
                return err(format!("H_{k} is not strictly below H_{}", k - 1));
            }
        }
        prev = Some(h);
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<(), String>); 10] = [
        (
            "threshold reproduction H_k = closed form, k = 1..6",
            criterion_1,
        ),
        ("determinant-split identity, k = 1..6", criterion_2),
        (
            "Hilbert-type determinant closed form, nn <= 6, p <= 4",
            criterion_3,
        ),
        ("slack ledger values and reduced-block ranks", criterion_4),
        (
            "coefficientwise quartic threshold 22580899/33531912",
            criterion_5,
        ),
        (
            "gap points: 3-hypo REFUTED, quartic CERTIFIED (CLI)",
            criterion_6,
        ),
        (
            "block and Hankel 4-hyponormality agree at 20 points",
            criterion_7,
        ),
        (
            "oracle equivalence, 100 seeded trials at 256 bits",
            criterion_8,
        ),
        ("subnormal point x = 2/3 passes every test", criterion_9),
        (
            "H_k strictly decreasing on k = 1..50 within (2/3, 3/4]",
            criterion_10,
        ),
    ];
    let mut failures = 0;
    for (i, (what, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS  criterion {:>2}: {what}", i + 1),
            Err(e) => {
                failures += 1;
                println!("FAIL  criterion {:>2}: {what} — {e}", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
