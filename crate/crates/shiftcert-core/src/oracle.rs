//! Independent cross-checks for the certificate machinery.
//!
//! Two oracles evaluate the quartic self-commutator form along entirely
//! different routes: one applies shift powers directly to a finitely
//! supported vector, the other sums the block decomposition.  Both run in
//! fixed-point arithmetic with a wide guard band, so agreement to far below
//! the guaranteed accuracy rules out transcription errors in the block
//! formulas.  A third oracle truncates the self-commutator of `W + s W^2`
//! exactly and tests positive semidefiniteness.

use crate::cert::Certificate;
use crate::matrix::{psd_check, PsdOutcome, SymMatrix};
use crate::quartic::{
    delta_block, instance_wsq, lemma2_coefficients, theta1, theta2, SymRadMatrix,
};
use crate::rat::{fmt_rat, Rat};
use crate::rng::SplitMix64;
use crate::shifts::ShiftInstance;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------------------
// fixed-point big floats

/// Fixed-point binary value `m / 2^bits`.  All values in one computation
/// share the same `bits`, which is the requested precision plus a 64-bit
/// guard band, so every operation keeps absolute error below one unit in
/// the guard band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    m: BigInt,
    bits: u32,
}

impl Fx {
    pub fn zero(bits: u32) -> Self {
        Fx {
            m: BigInt::zero(),
            bits,
        }
    }

    pub fn from_rat(r: &Rat, bits: u32) -> Self {
        let scaled = r * Rat::from(BigInt::one() << bits);
        Fx {
            m: scaled.round().to_integer(),
            bits,
        }
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.m.clone(), BigInt::one() << self.bits)
    }

    pub fn add(&self, o: &Fx) -> Fx {
        assert_eq!(self.bits, o.bits);
        Fx {
            m: &self.m + &o.m,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        assert_eq!(self.bits, o.bits);
        Fx {
            m: &self.m - &o.m,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        assert_eq!(self.bits, o.bits);
        let p = &self.m * &o.m;
        // round to nearest on the dropped guard bits
        let half = BigInt::one() << (self.bits - 1);
        Fx {
            m: (p + half) >> self.bits,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Fx {
        Fx {
            m: -&self.m,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Fx {
        Fx {
            m: self.m.abs(),
            bits: self.bits,
        }
    }

    /// Square root (floor in the last place).  Panics on negative input.
    pub fn sqrt(&self) -> Fx {
        assert!(
            !self.m.is_negative(),
            "sqrt of a negative fixed-point value"
        );
        Fx {
            m: (&self.m << self.bits).sqrt(),
            bits: self.bits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }
}

/// Complex fixed-point value.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Fx,
    pub im: Fx,
}

impl Cx {
    pub fn zero(bits: u32) -> Self {
        Cx {
            re: Fx::zero(bits),
            im: Fx::zero(bits),
        }
    }

    pub fn from_rats(re: &Rat, im: &Rat, bits: u32) -> Self {
        Cx {
            re: Fx::from_rat(re, bits),
            im: Fx::from_rat(im, bits),
        }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn conj(&self) -> Cx {
        Cx {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn scale(&self, f: &Fx) -> Cx {
        Cx {
            re: self.re.mul(f),
            im: self.im.mul(f),
        }
    }

    /// `|z|^2` as a real value.
    pub fn norm_sq(&self) -> Fx {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn is_zero_exact(&self) -> bool {
        self.re.m.is_zero() && self.im.m.is_zero()
    }
}

// ---------------------------------------------------------------------------
// parameter vectors

/// The test data of the weak-positivity form: coefficients
/// `(λ₁, λ₂, λ₃, λ₄) = (1, a, b, c)` and a finitely supported complex
/// vector, both with exact rational real and imaginary parts.
#[derive(Clone, Debug)]
pub struct ParamVector {
    /// `(a, b, c)`; the leading coefficient is fixed at 1.
    pub lambda: [(Rat, Rat); 3],
    /// `x_0 .. x_S` as (re, im) pairs; entries beyond the support are zero.
    pub x: Vec<(Rat, Rat)>,
}

impl ParamVector {
    pub fn new(lambda: [(Rat, Rat); 3], x: Vec<(Rat, Rat)>) -> Result<Self, String> {
        if !x.iter().any(|(r, i)| !r.is_zero() || !i.is_zero()) {
            return Err("parameter vector must have a nonzero entry".to_string());
        }
        Ok(ParamVector { lambda, x })
    }

    /// Deterministic random vector with the given support size.
    pub fn seeded(rng: &mut SplitMix64, support: usize) -> Self {
        loop {
            let lambda = [
                (rng.rat_signed(8), rng.rat_signed(8)),
                (rng.rat_signed(8), rng.rat_signed(8)),
                (rng.rat_signed(8), rng.rat_signed(8)),
            ];
            let x: Vec<(Rat, Rat)> = (0..support)
                .map(|_| (rng.rat_signed(8), rng.rat_signed(8)))
                .collect();
            if let Ok(p) = ParamVector::new(lambda, x) {
                return p;
            }
        }
    }

    fn lambda_cx(&self, bits: u32) -> [Cx; 4] {
        [
            Cx::from_rats(&Rat::one(), &Rat::zero(), bits),
            Cx::from_rats(&self.lambda[0].0, &self.lambda[0].1, bits),
            Cx::from_rats(&self.lambda[1].0, &self.lambda[1].1, bits),
            Cx::from_rats(&self.lambda[2].0, &self.lambda[2].1, bits),
        ]
    }

    fn x_cx(&self, bits: u32) -> Vec<Cx> {
        self.x
            .iter()
            .map(|(r, i)| Cx::from_rats(r, i, bits))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// the two quartic-form evaluations

fn guarded_bits(precision: u32) -> u32 {
    assert!(
        precision >= 128,
        "oracle precision must be at least 128 bits"
    );
    precision + 64
}

fn inner(y: &[Cx], z: &[Cx], bits: u32) -> Cx {
    let mut acc = Cx::zero(bits);
    for (a, b) in y.iter().zip(z.iter()) {
        acc = acc.add(&a.mul(&b.conj()));
    }
    acc
}

/// `Σ_{i,j=1..4} conj(λ_j) λ_i ⟨[W*^j, W^i] x, x⟩`, evaluated by applying
/// shift powers to the support directly.  Returns (real, imaginary); the
/// imaginary part is reported so callers can assert it vanishes to
/// precision.
pub fn direct_quartic_form(s: &ShiftInstance, p: &ParamVector, precision: u32) -> (Fx, Fx) {
    let bits = guarded_bits(precision);
    let wsq = instance_wsq(s);
    let alpha = |n: i64| Fx::from_rat(&wsq(n), bits).sqrt();
    let x = p.x_cx(bits);
    let lambda = p.lambda_cx(bits);
    // forward powers u_i = W^i x and backward powers v_i = W*^i x
    let shift_up = |y: &[Cx]| -> Vec<Cx> {
        let mut out = vec![Cx::zero(bits); y.len() + 1];
        for (n, v) in y.iter().enumerate() {
            out[n + 1] = v.scale(&alpha(n as i64));
        }
        out
    };
    let shift_down = |y: &[Cx]| -> Vec<Cx> {
        let mut out = vec![Cx::zero(bits); y.len().saturating_sub(1)];
        for n in 0..out.len() {
            out[n] = y[n + 1].scale(&alpha(n as i64));
        }
        out
    };
    let mut u: Vec<Vec<Cx>> = vec![x.clone()];
    let mut v: Vec<Vec<Cx>> = vec![x];
    for i in 0..4 {
        u.push(shift_up(&u[i]));
        v.push(shift_down(&v[i]));
    }
    let mut acc = Cx::zero(bits);
    for i in 1..=4usize {
        for j in 1..=4usize {
            let term = inner(&u[i], &u[j], bits).sub(&inner(&v[j], &v[i], bits));
            acc = acc.add(&lambda[j - 1].conj().mul(&lambda[i - 1]).mul(&term));
        }
    }
    (acc.re, acc.im)
}

/// Evaluates the same form through the block decomposition: the scalar
/// term, the two corner blocks, and the window blocks over the support.
pub fn lemma2_quartic_form(s: &ShiftInstance, p: &ParamVector, precision: u32) -> (Fx, Fx) {
    let bits = guarded_bits(precision);
    let wsq = instance_wsq(s);
    let x_all = p.x_cx(bits);
    let x = |n: i64| -> Cx {
        if n < 0 || n as usize >= x_all.len() {
            Cx::zero(bits)
        } else {
            x_all[n as usize].clone()
        }
    };
    let lambda = p.lambda_cx(bits);
    let (a, b, c) = (&lambda[1], &lambda[2], &lambda[3]);
    // ⟨M v, v⟩ for a real symmetric block with radical entries
    let herm_form = |m: &SymRadMatrix<Rat>, v: &[Cx]| -> Cx {
        let mut acc = Cx::zero(bits);
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                if v[i].is_zero_exact() || v[j].is_zero_exact() {
                    continue;
                }
                let e = m.get(i, j);
                let mut rad_prod = Rat::one();
                for &k in &e.rad {
                    rad_prod *= wsq(k);
                }
                let entry = Fx::from_rat(&e.lin, bits).mul(&Fx::from_rat(&rad_prod, bits).sqrt());
                acc = acc.add(&v[j].mul(&v[i].conj()).scale(&entry));
            }
        }
        acc
    };
    // |c|^2 r_0 |x_0|^2
    let r0 = lemma2_coefficients(&wsq, 0).r;
    let scalar = c
        .norm_sq()
        .mul(&Fx::from_rat(&r0, bits))
        .mul(&x(0).norm_sq());
    let mut acc = Cx {
        re: scalar,
        im: Fx::zero(bits),
    };
    let t1 = theta1(&wsq);
    acc = acc.add(&herm_form(&t1, &[b.conj().mul(&x(0)), c.conj().mul(&x(1))]));
    let t2 = theta2(&wsq);
    acc = acc.add(&herm_form(
        &t2,
        &[
            a.conj().mul(&x(0)),
            b.conj().mul(&x(1)),
            c.conj().mul(&x(2)),
        ],
    ));
    for i in 0..x_all.len() as i64 {
        let d = delta_block(&wsq, i);
        acc = acc.add(&herm_form(
            &d,
            &[
                x(i),
                a.conj().mul(&x(i + 1)),
                b.conj().mul(&x(i + 2)),
                c.conj().mul(&x(i + 3)),
            ],
        ));
    }
    (acc.re, acc.im)
}

// ---------------------------------------------------------------------------
// the Proposition-1 truncation oracle

/// Exact PSD test of the self-commutator of `T = W + s W^2` truncated to
/// `span(e_0 .. e_N)`.  The self-commutator is tridiagonal; a diagonal
/// congruence by cumulative moment products clears the single radical per
/// off-diagonal entry, so the test runs in exact rational arithmetic.
/// REFUTED is conclusive; CERTIFIED only records that the necessary
/// condition holds at this truncation.
pub fn quadratic_hypo_test(s: &ShiftInstance, sv: &Rat, n: usize) -> Certificate {
    assert!(n >= 3, "truncation size must be at least 3");
    assert!(!sv.is_negative(), "s must be nonnegative");
    let wsq = instance_wsq(s);
    // cumulative moments gamma_k = wsq(0) ... wsq(k-1)
    let mut gamma = vec![Rat::one()];
    for k in 0..n {
        let g = gamma[k].clone() * wsq(k as i64);
        gamma.push(g);
    }
    let s2 = sv * sv;
    let m = SymMatrix::from_fn(n + 1, |i, j| {
        let (i, j) = (i as i64, j as i64);
        if i == j {
            let u = wsq(i) - wsq(i - 1);
            let v = wsq(i) * wsq(i + 1) - wsq(i - 1) * wsq(i - 2);
            &gamma[i as usize] * (u + &s2 * v)
        } else if j == i + 1 {
            sv * &gamma[i as usize] * wsq(i) * (wsq(i + 1) - wsq(i - 1))
        } else {
            Rat::zero()
        }
    });
    match psd_check(&m) {
        PsdOutcome::Psd { rank, .. } => {
            let mut c = Certificate::certified().with_rank(rank);
            c.note(format!(
                "necessary condition for quadratic hyponormality at s = {} holds on the \
                 truncation to e_0..e_{n}; refutation at any truncation would be conclusive",
                fmt_rat(sv)
            ));
            c
        }
        PsdOutcome::NotPsd { witness, value } => {
            let mut c = Certificate::refuted(format!(
                "self-commutator of W + s W^2 at s = {} on e_0..e_{n}",
                fmt_rat(sv)
            ));
            c.note("conclusive: the truncation embeds in the full form".to_string());
            c.with_witness(witness, value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::Verdict;
    use crate::rat::{int, rat};
    use crate::shifts::{hyponormal_check, WeightFamily};

    const PRECISION: u32 = 256;

    fn example_at(num: i64, den: i64) -> ShiftInstance {
        WeightFamily::example().instance(rat(num, den)).unwrap()
    }

    fn assert_small(v: &Fx, bound_exp: i64) {
        // |v| <= 10^bound_exp
        let bound = Rat::new(BigInt::one(), BigInt::from(10).pow((-bound_exp) as u32));
        assert!(
            v.to_rat().abs() <= bound,
            "value {} exceeds 10^{bound_exp}",
            v.to_rat().abs()
        );
    }

    #[test]
    fn fx_arithmetic() {
        let bits = 192;
        let a = Fx::from_rat(&rat(9, 4), bits);
        let r = a.sqrt().to_rat();
        assert!((r - rat(3, 2)).abs() < Rat::new(BigInt::one(), BigInt::one() << 100));
        let b = Fx::from_rat(&rat(1, 3), bits);
        let p = a.mul(&b).to_rat();
        assert!((p - rat(3, 4)).abs() < Rat::new(BigInt::one(), BigInt::one() << 100));
    }

    #[test]
    fn direct_form_on_e0() {
        // x = e_0, lambda = (1,0,0,0): the form is the plain hyponormality
        // quadratic ⟨[W*,W]e_0,e_0⟩ = α_0² = 2/3
        let s = example_at(2, 3);
        let p = ParamVector::new(
            [(int(0), int(0)), (int(0), int(0)), (int(0), int(0))],
            vec![(int(1), int(0))],
        )
        .unwrap();
        let (re, im) = direct_quartic_form(&s, &p, PRECISION);
        assert_small(&re.sub(&Fx::from_rat(&rat(2, 3), re.bits)), -40);
        assert_small(&im, -40);
    }

    #[test]
    fn lemma2_form_on_e0() {
        let s = example_at(2, 3);
        // lambda = (1,0,0,0): only the Delta_0 corner u_0 |x_0|² survives
        let p = ParamVector::new(
            [(int(0), int(0)), (int(0), int(0)), (int(0), int(0))],
            vec![(int(1), int(0))],
        )
        .unwrap();
        let (re, im) = lemma2_quartic_form(&s, &p, PRECISION);
        assert_small(&re.sub(&Fx::from_rat(&rat(2, 3), re.bits)), -40);
        assert_small(&im, -40);
        // lambda = (1,0,0,c): adds the leading scalar |c|² r_0 |x_0|²
        let c = (int(2), int(1)); // c = 2 + i
        let p = ParamVector::new(
            [(int(0), int(0)), (int(0), int(0)), c],
            vec![(int(1), int(0))],
        )
        .unwrap();
        let wsq = instance_wsq(&s);
        let r0 = lemma2_coefficients(&wsq, 0).r;
        let expected = int(5) * r0 + rat(2, 3); // |c|² = 5
        let (re, im) = lemma2_quartic_form(&s, &p, PRECISION);
        assert_small(&re.sub(&Fx::from_rat(&expected, re.bits)), -40);
        assert_small(&im, -40);
    }

    #[test]
    fn evaluation_paths_agree() {
        // 100 seeded trials split over three instances, support up to 12
        let mut rng = SplitMix64::new(42);
        let instances = [example_at(2, 3), example_at(667, 990), example_at(7, 10)];
        for trial in 0..100 {
            let s = &instances[trial % 3];
            let support = 1 + (rng.below(12) as usize);
            let p = ParamVector::seeded(&mut rng, support);
            let (dr, di) = direct_quartic_form(s, &p, PRECISION);
            let (lr, li) = lemma2_quartic_form(s, &p, PRECISION);
            let scale = Rat::one() + dr.to_rat().abs();
            let tol = &scale * Rat::new(BigInt::one(), BigInt::from(10).pow(40));
            assert!(
                (dr.to_rat() - lr.to_rat()).abs() <= tol,
                "trial {trial}: direct {} vs block {}",
                fmt_rat(&dr.to_rat()),
                fmt_rat(&lr.to_rat())
            );
            assert!(di.to_rat().abs() <= tol, "trial {trial}: direct imag part");
            assert!(li.to_rat().abs() <= tol, "trial {trial}: block imag part");
        }
    }

    #[test]
    fn certified_points_are_nonnegative() {
        // where the quartic certificate succeeds, no sampled form value may
        // dip below -10^-30 of scale
        let s = example_at(667, 990);
        let mut rng = SplitMix64::new(42);
        for trial in 0..200 {
            let support = 1 + (rng.below(10) as usize);
            let p = ParamVector::seeded(&mut rng, support);
            let (re, _) = direct_quartic_form(&s, &p, PRECISION);
            let v = re.to_rat();
            let scale = Rat::one() + v.abs();
            let bound = -scale * Rat::new(BigInt::one(), BigInt::from(10).pow(30));
            assert!(
                v >= bound,
                "trial {trial}: form value {} below bound",
                fmt_rat(&v)
            );
        }
    }

    #[test]
    fn quadratic_truncation_matches_hyponormality_at_s0() {
        let s = example_at(2, 3);
        let c = quadratic_hypo_test(&s, &Rat::zero(), 20);
        assert_eq!(c.verdict, Verdict::Certified);
        assert_eq!(hyponormal_check(&s, 20).verdict, Verdict::Certified);
        // x = 4/5 is outside the declared domain; widen it for the test
        let mut wide = WeightFamily::example();
        wide.x_domain = crate::shifts::Interval::positive();
        let s = wide.instance(rat(4, 5)).unwrap();
        let c = quadratic_hypo_test(&s, &Rat::zero(), 20);
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(hyponormal_check(&s, 20).verdict, Verdict::Refuted);
    }

    #[test]
    fn quadratic_truncation_on_subnormal_instance() {
        let s = example_at(2, 3);
        for sv in [int(1), int(10), rat(1, 4), int(1000000)] {
            let c = quadratic_hypo_test(&s, &sv, 12);
            assert_eq!(c.verdict, Verdict::Certified, "s = {}", fmt_rat(&sv));
        }
    }
}
