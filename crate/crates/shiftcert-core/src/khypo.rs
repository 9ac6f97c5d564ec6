//! k-hyponormality of weighted shifts via Hankel moment matrices.
//!
//! A shift with moments `gamma` is k-hyponormal exactly when every Hankel
//! matrix `A(n;k) = (gamma_{n+i+j})` is positive semidefinite.  For the
//! parametric family this yields exact thresholds `H_k` in the parameter,
//! cross-checked against the Hilbert-type determinant closed form.

use crate::cert::{fmt_witness, Certificate};
use crate::matrix::{det_fraction_free, principal_minors, psd_check, PsdOutcome, SymMatrix};
use crate::rat::{factorial, fmt_rat, rat, Rat};
use crate::roots::{poly_nonneg_threshold, Threshold, ThresholdResult};
use crate::shifts::{MomentSequence, MomentValue, ShiftInstance, WeightFamily};
use crate::upoly::{RatFn, UPoly};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Hankel moment matrix `A(n;k)`: entry `(i,j)` is `gamma_{n+i+j}`.
#[derive(Clone, Debug)]
pub struct HankelMatrix {
    pub n: usize,
    pub k: usize,
    pub entries: HankelEntries,
}

#[derive(Clone, Debug)]
pub enum HankelEntries {
    /// Exact rational entries (instance moments).
    Rat(SymMatrix<Rat>),
    /// Rational functions of the family parameter.
    Sym(SymMatrix<RatFn>),
}

impl HankelMatrix {
    pub fn as_rat(&self) -> Option<&SymMatrix<Rat>> {
        match &self.entries {
            HankelEntries::Rat(m) => Some(m),
            HankelEntries::Sym(_) => None,
        }
    }

    pub fn as_sym(&self) -> Option<&SymMatrix<RatFn>> {
        match &self.entries {
            HankelEntries::Sym(m) => Some(m),
            HankelEntries::Rat(_) => None,
        }
    }
}

/// Build `A(n;k)` from a moment sequence.  The matrix is `(k+1) x (k+1)`
/// and `entry(0,0) = gamma_n`.
pub fn hankel_matrix(m: &MomentSequence, n: usize, k: usize) -> Result<HankelMatrix, String> {
    if k == 0 {
        return Err("order k must be positive".to_string());
    }
    let mut moments = Vec::with_capacity(2 * k + 1);
    for t in 0..=2 * k {
        moments.push(m.moment(n + t)?);
    }
    let entries = match &moments[0] {
        MomentValue::Rat(_) => {
            let vals: Vec<Rat> = moments
                .iter()
                .map(|v| match v {
                    MomentValue::Rat(r) => r.clone(),
                    MomentValue::Sym(_) => unreachable!("mixed moment kinds"),
                })
                .collect();
            HankelEntries::Rat(SymMatrix::from_fn(k + 1, |i, j| vals[i + j].clone()))
        }
        MomentValue::Sym(_) => {
            let vals: Vec<RatFn> = moments
                .iter()
                .map(|v| match v {
                    MomentValue::Sym(r) => r.clone(),
                    MomentValue::Rat(_) => unreachable!("mixed moment kinds"),
                })
                .collect();
            HankelEntries::Sym(SymMatrix::from_fn(k + 1, |i, j| vals[i + j].clone()))
        }
    };
    Ok(HankelMatrix { n, k, entries })
}

fn instance_hankel(s: &ShiftInstance, n: usize, k: usize) -> SymMatrix<Rat> {
    let moments: Vec<Rat> = (0..=2 * k).map(|t| s.moment(n + t)).collect();
    SymMatrix::from_fn(k + 1, |i, j| moments[i + j].clone())
}

/// Decide k-hyponormality of an instance.
///
/// When the family declares a subnormal tail starting no later than index 1,
/// checking `A(0;k)` alone is decisive and the certificate covers all `n`;
/// otherwise `A(n;k)` is checked for `n = 0..=n_max` and the certificate is
/// scoped accordingly.
pub fn k_hyponormal_test(s: &ShiftInstance, k: usize, n_max: usize) -> Certificate {
    assert!(k >= 1, "order k must be positive");
    let shortcut = s.family.tail_subnormal && s.family.tail_start <= 1;
    let top = if shortcut { 0 } else { n_max };
    let mut rank_note: Option<String> = None;
    for n in 0..=top {
        let m = instance_hankel(s, n, k);
        match psd_check(&m) {
            PsdOutcome::Psd { rank, .. } => {
                if rank < m.dim() && rank_note.is_none() {
                    rank_note = Some(format!(
                        "boundary case: A({n};{k}) is rank-deficient (rank {rank} of {})",
                        m.dim()
                    ));
                }
            }
            PsdOutcome::NotPsd { witness, value } => {
                let mut c = Certificate::refuted(format!("n = {n}"));
                c.note(format!(
                    "A({n};{k}) is not positive semidefinite: v'Av = {} < 0 for v = {}",
                    fmt_rat(&value),
                    fmt_witness(&witness)
                ));
                return c.with_witness(witness, value);
            }
        }
    }
    let mut c = Certificate::certified();
    if shortcut {
        c.note(format!(
            "subnormal tail from index {}: A(0;{k}) >= 0 is decisive, verdict covers all n",
            s.family.tail_start
        ));
    } else {
        c.note(format!("verified up to n = {n_max}"));
    }
    if let Some(note) = rank_note {
        c.note(note);
    }
    c
}

/// Largest admissible parameter value for k-hyponormality, from the leading
/// principal minors of the symbolic `A(0;k)`.
pub fn k_hypo_threshold(f: &WeightFamily, k: usize) -> Result<ThresholdResult, String> {
    assert!(k >= 1, "order k must be positive");
    let h = hankel_matrix(&MomentSequence::Family(f.clone()), 0, k)?;
    let m = h.as_sym().expect("family moments are symbolic");
    let minors = principal_minors(m);
    // sign(num/den) = sign(num * den) away from poles, which only occur at
    // the (excluded) floor for admissible families
    let ps: Vec<UPoly> = minors
        .iter()
        .map(|m| m.as_poly().unwrap_or_else(|| m.num().mul(m.den())))
        .collect();
    let floor = f.x_domain.lo.clone();
    let res = poly_nonneg_threshold(&ps, &floor);
    if let Threshold::Exact(r) = &res.threshold {
        if *r <= floor {
            return Err("empty feasibility".to_string());
        }
    }
    Ok(res)
}

/// `H_k = 2(k+1)^2(k+2)^2 / (3k(k+3)(k^2+3k+4))`, reduced.
pub fn hk_closed_form(k: u64) -> Rat {
    assert!(k >= 1, "order k must be positive");
    let kb = BigInt::from(k);
    let num = BigInt::from(2) * (&kb + 1u32).pow(2) * (&kb + 2u32).pow(2);
    let den = BigInt::from(3) * &kb * (&kb + 3u32) * (&kb * &kb + 3u32 * &kb + 4u32);
    Rat::new(num, den)
}

/// Exact determinant of the Hilbert-type matrix `h_ij = 1/(p+i+j-1)`,
/// `i,j = 1..=nn`, via the factorial closed form.  Only integer `p >= 0`
/// is supported.
pub fn hilbert_type_det(nn: usize, p: &Rat) -> Result<Rat, String> {
    if nn == 0 {
        return Err("matrix order must be positive".to_string());
    }
    if !p.is_integer() || p.is_negative() {
        return Err(format!("unsupported p = {}", fmt_rat(p)));
    }
    let pi: u64 = {
        let digits = p.to_integer().to_u64_digits().1;
        match digits.as_slice() {
            [] => 0,
            [d] => *d,
            _ => return Err(format!("unsupported p = {}", fmt_rat(p))),
        }
    };
    let n = nn as u64;
    let mut num = BigInt::one();
    for m in 1..n {
        let f = factorial(m);
        num *= &f * &f;
    }
    for m in 1..=n {
        num *= factorial(pi + m - 1);
    }
    let mut den = BigInt::one();
    for m in 1..=n {
        den *= factorial(n + pi + m - 1);
    }
    Ok(Rat::new(num, den))
}

/// The determinant-split identity behind the closed form: with
/// `Atilde(0,0) = 1/(3X)` and `Atilde(i,j) = 1/(i+j+2)` otherwise,
/// `det Atilde = (2-3X)/(6X) * det C + det B`, where `B` replaces the corner
/// by `1/2` and `C` drops the first row and column.
pub fn det_split_sides(k: usize) -> (RatFn, RatFn) {
    assert!(k >= 1);
    let x = RatFn::var();
    let corner = RatFn::constant(rat(1, 3))
        .div(&x)
        .expect("X is nonzero as a rational function");
    let atilde = SymMatrix::from_fn(k + 1, |i, j| {
        if i == 0 && j == 0 {
            corner.clone()
        } else {
            RatFn::constant(rat(1, (i + j + 2) as i64))
        }
    });
    let b = SymMatrix::from_fn(k + 1, |i, j| {
        if i == 0 && j == 0 {
            rat(1, 2)
        } else {
            rat(1, (i + j + 2) as i64)
        }
    });
    let c = SymMatrix::from_fn(k, |i, j| rat(1, (i + j + 4) as i64));
    let lhs = det_fraction_free(&atilde);
    let det_b = det_fraction_free(&b);
    let det_c = det_fraction_free(&c);
    // (2 - 3X)/(6X)
    let factor = RatFn::new(
        UPoly::linear(crate::rat::int(2), crate::rat::int(-3)),
        UPoly::var().scale(&crate::rat::int(6)),
    )
    .expect("nonzero denominator");
    let rhs = factor
        .mul(&RatFn::constant(det_c))
        .add(&RatFn::constant(det_b));
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::Verdict;
    use crate::rat::int;
    use crate::shifts::parse_family;
    use num_traits::Zero;

    fn example() -> WeightFamily {
        WeightFamily::example()
    }

    #[test]
    fn hankel_symbolic_k1() {
        let h = hankel_matrix(&MomentSequence::Family(example()), 0, 1).unwrap();
        let m = h.as_sym().unwrap();
        assert_eq!(m.get(0, 0), &RatFn::constant(int(1)));
        assert_eq!(m.get(0, 1), &RatFn::var());
        assert_eq!(
            m.get(1, 1),
            &RatFn::from_poly(UPoly::var().scale(&rat(3, 4)))
        );
    }

    #[test]
    fn hankel_is_three_x_times_hilbert_like() {
        // A(0;3) = 3X * Atilde entrywise, Atilde as in the closed-form proof
        let h = hankel_matrix(&MomentSequence::Family(example()), 0, 3).unwrap();
        let m = h.as_sym().unwrap();
        let three_x = RatFn::from_poly(UPoly::var().scale(&int(3)));
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 0 && j == 0 {
                    RatFn::constant(int(1))
                } else {
                    three_x.mul(&RatFn::constant(rat(1, (i + j + 2) as i64)))
                };
                assert_eq!(m.get(i, j), &expected, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn hankel_restricted_instance() {
        let s = example().instance(rat(2, 3)).unwrap();
        let h = hankel_matrix(&MomentSequence::Instance(s), 1, 1).unwrap();
        let m = h.as_rat().unwrap();
        assert_eq!(m.get(0, 0), &rat(2, 3));
        assert_eq!(m.get(0, 1), &rat(1, 2));
        assert_eq!(m.get(1, 1), &rat(2, 5));
    }

    #[test]
    fn k_test_certified_below_threshold() {
        let s = example().instance(rat(2, 3)).unwrap();
        let c = k_hyponormal_test(&s, 3, 25);
        assert_eq!(c.verdict, Verdict::Certified);
        assert!(c.transcript.iter().any(|t| t.contains("decisive")));
    }

    #[test]
    fn k_test_refuted_above_threshold() {
        let s = example().instance(rat(667, 990)).unwrap();
        let c = k_hyponormal_test(&s, 3, 25);
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.location.as_deref(), Some("n = 0"));
        // independently verify the witness against the Hankel matrix
        let w = c.witness.as_ref().unwrap();
        let m = instance_hankel(&s, 0, 3);
        let mut val = Rat::zero();
        for i in 0..4 {
            for j in 0..4 {
                val += &w[i] * m.get(i, j) * &w[j];
            }
        }
        assert_eq!(&val, c.witness_value.as_ref().unwrap());
        assert!(val.is_negative());
    }

    #[test]
    fn k_test_boundary_rank_deficient() {
        let s = example().instance(rat(24, 35)).unwrap();
        let c = k_hyponormal_test(&s, 2, 25);
        assert_eq!(c.verdict, Verdict::Certified);
        assert!(c.transcript.iter().any(|t| t.contains("rank-deficient")));
    }

    #[test]
    fn thresholds_match_closed_form() {
        let f = example();
        for k in 1..=6usize {
            let res = k_hypo_threshold(&f, k).unwrap();
            assert_eq!(
                res.threshold,
                Threshold::Exact(hk_closed_form(k as u64)),
                "k = {k}"
            );
        }
    }

    #[test]
    fn threshold_examples() {
        let f = example();
        let t = |k| match k_hypo_threshold(&f, k).unwrap().threshold {
            Threshold::Exact(r) => r,
            other => panic!("expected exact threshold, got {other:?}"),
        };
        assert_eq!(t(1), rat(3, 4));
        assert_eq!(t(2), rat(24, 35));
        assert_eq!(t(3), rat(200, 297));
    }

    #[test]
    fn closed_form_values_and_monotonicity() {
        assert_eq!(hk_closed_form(2), rat(24, 35));
        assert_eq!(hk_closed_form(3), rat(200, 297));
        assert_eq!(hk_closed_form(4), rat(75, 112));
        let two_thirds = rat(2, 3);
        for k in 1..50u64 {
            assert!(hk_closed_form(k) > hk_closed_form(k + 1), "k = {k}");
            assert!(hk_closed_form(k + 1) > two_thirds, "k = {k}");
        }
        assert!(hk_closed_form(100) < rat(3, 4));
        assert!(hk_closed_form(100) > two_thirds);
        assert!(hk_closed_form(100) < hk_closed_form(99));
    }

    #[test]
    fn hilbert_det_examples() {
        assert_eq!(hilbert_type_det(1, &int(0)).unwrap(), int(1));
        assert_eq!(hilbert_type_det(2, &int(0)).unwrap(), rat(1, 12));
        assert!(hilbert_type_det(2, &rat(1, 2)).is_err());
    }

    #[test]
    fn hilbert_det_matches_direct_determinant() {
        for nn in 1..=6usize {
            for p in 0..=4i64 {
                let direct = det_fraction_free(&SymMatrix::from_fn(nn, |i, j| {
                    rat(1, p + (i + j + 1) as i64)
                }));
                assert_eq!(
                    hilbert_type_det(nn, &int(p)).unwrap(),
                    direct,
                    "nn = {nn}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn det_split_identity() {
        for k in 1..=6usize {
            let (lhs, rhs) = det_split_sides(k);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn higher_k_implies_lower_k() {
        let f = example();
        let samples = [
            rat(1, 10),
            rat(1, 3),
            rat(1, 2),
            rat(3, 5),
            rat(2, 3),
            rat(27, 40),
            rat(200, 297),
            rat(24, 35),
            rat(7, 10),
            rat(3, 4),
        ];
        for x in samples {
            for k in 1..=3usize {
                let hi = k_hyponormal_test(&f.instance(x.clone()).unwrap(), k + 1, 5);
                let lo = k_hyponormal_test(&f.instance(x.clone()).unwrap(), k, 5);
                if hi.is_certified() {
                    assert!(lo.is_certified(), "x = {}, k = {k}", fmt_rat(&x));
                }
            }
        }
    }

    #[test]
    fn empty_feasibility() {
        // constant non-PSD Hankel data: gamma = 1, 1, 1/2
        let f = parse_family("prefix [ ] tail 1/(n+1) from 0").unwrap();
        let e = k_hypo_threshold(&f, 1).unwrap_err();
        assert!(e.contains("empty feasibility"), "{e}");
    }

    #[test]
    fn hankel_rejects_k_zero() {
        assert!(hankel_matrix(&MomentSequence::Family(example()), 0, 0).is_err());
    }
}
