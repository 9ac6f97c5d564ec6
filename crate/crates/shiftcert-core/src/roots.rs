//! Sturm-sequence real-root isolation and exact nonnegativity thresholds.
//!
//! Roots are isolated with exact rational bisection.  A bounding root is
//! reported exactly when it is rational (found by simplest-rational probing
//! inside the isolating interval); otherwise an isolating interval of width
//! at most 10^-12 is returned together with the defining polynomial.

use crate::rat::{int, rat, sign, Rat};
use crate::upoly::UPoly;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

/// An isolated real root.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rat),
    /// Open interval containing exactly one root; endpoints are not roots.
    Open(Rat, Rat),
}

impl Root {
    /// Lower bound of the root.
    pub fn lo(&self) -> &Rat {
        match self {
            Root::Exact(r) => r,
            Root::Open(a, _) => a,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            Root::Exact(r) => r,
            Root::Open(_, b) => b,
        }
    }
}

/// Sturm chain of a squarefree polynomial.
pub fn sturm_chain(p: &UPoly) -> Vec<UPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn variations_at(chain: &[UPoly], x: &Rat) -> usize {
    variations(chain.iter().map(|p| sign(&p.eval(x))))
}

/// Number of roots of the (squarefree) chain polynomial in `(a, b]`.
pub fn count_roots(chain: &[UPoly], a: &Rat, b: &Rat) -> usize {
    variations_at(chain, a) - variations_at(chain, b)
}

/// Cauchy bound: all real roots lie in `(-B, B)`.
pub fn root_bound(p: &UPoly) -> Rat {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let mut m = Rat::zero();
    for c in p.coeffs() {
        let q = c.abs() / &lead;
        if q > m {
            m = q;
        }
    }
    m + Rat::one()
}

/// Simplest rational (smallest denominator, then smallest numerator) in the
/// open interval `(lo, hi)`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return Rat::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    // now 0 <= lo < hi
    let fl = lo.floor();
    if lo == &fl {
        // integer lower bound: either fl+1 fits, or recurse on 1/f
        let next = &fl + Rat::one();
        if &next < hi {
            return next;
        }
        // t = fl + 1/n with 1/n < hi - fl
        let inv = Rat::one() / (hi - &fl);
        let mut n = inv.floor();
        if n == inv {
            // 1/n == hi - fl is excluded (open interval)
        } else {
            // smallest integer > inv is floor+1
        }
        n += Rat::one();
        return fl + Rat::one() / n;
    }
    let ce = lo.ceil();
    if &ce < hi {
        return ce;
    }
    // same unit cell: recurse on reciprocals of the fractional parts
    let inner = simplest_between(&(Rat::one() / (hi - &fl)), &(Rat::one() / (lo - &fl)));
    fl + Rat::one() / inner
}

fn isolate_rec(chain: &[UPoly], p: &UPoly, a: &Rat, b: &Rat, out: &mut Vec<Root>) {
    let c = count_roots(chain, a, b);
    if c == 0 {
        return;
    }
    if c == 1 {
        if p.eval(b).is_zero() {
            out.push(Root::Exact(b.clone()));
        } else {
            out.push(Root::Open(a.clone(), b.clone()));
        }
        return;
    }
    let mid = (a + b) / int(2);
    isolate_rec(chain, p, a, &mid, out);
    isolate_rec(chain, p, &mid, b, out);
}

/// Push the lower endpoint of an open isolating interval strictly above any
/// root of `p` while keeping the isolated root inside.
fn clean_lo(chain: &[UPoly], p: &UPoly, a: Rat, b: Rat) -> Root {
    let (mut a, mut b) = (a, b);
    while p.eval(&a).is_zero() {
        let mid = (&a + &b) / int(2);
        if p.eval(&mid).is_zero() {
            // mid is the unique root inside; any point of (a, mid) is clean
            let between = (&a + &mid) / int(2);
            debug_assert!(!p.eval(&between).is_zero());
            return Root::Open(between, b);
        }
        if count_roots(chain, &mid, &b) == 1 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Root::Open(a, b)
}

/// Isolate all real roots of `p` strictly greater than `floor`, in
/// ascending order.  `p` need not be squarefree (its squarefree part is
/// used).
pub fn isolate_roots_above(p: &UPoly, floor: &Rat) -> Vec<Root> {
    if p.degree().map_or(true, |d| d == 0) {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let chain = sturm_chain(&sf);
    let bound = root_bound(&sf);
    if &bound <= floor {
        return Vec::new();
    }
    let mut out = Vec::new();
    isolate_rec(&chain, &sf, floor, &bound, &mut out);
    out.into_iter()
        .map(|r| match r {
            Root::Exact(x) => Root::Exact(x),
            Root::Open(a, b) => clean_lo(&chain, &sf, a, b),
        })
        .collect()
}

/// Refine an isolated root of (the squarefree part of) `p`.  Returns
/// `Exact` when the root is rational; otherwise an `Open` interval of width
/// at most `width_goal`.
pub fn refine_root(p: &UPoly, root: Root, width_goal: &Rat) -> Root {
    let (mut a, mut b) = match root {
        Root::Exact(r) => return Root::Exact(r),
        Root::Open(a, b) => (a, b),
    };
    let sf = p.squarefree_part();
    let sa = sign(&sf.eval(&a));
    debug_assert!(sa != 0);
    // rational roots p/q are caught once the interval is well inside
    // (p/q - 1/q^2, p/q + 1/q^2); keep probing far past the reporting width
    let hard_stop = rat(1, 10).pow(60);
    loop {
        let c = simplest_between(&a, &b);
        let vc = sf.eval(&c);
        if vc.is_zero() {
            return Root::Exact(c);
        }
        if sign(&vc) == sa {
            a = c;
        } else {
            b = c;
        }
        // simplest-rational probing can converge one-sidedly; add a plain
        // bisection step to guarantee geometric shrinkage
        let m = (&a + &b) / int(2);
        let vm = sf.eval(&m);
        if vm.is_zero() {
            return Root::Exact(m);
        }
        if sign(&vm) == sa {
            a = m;
        } else {
            b = m;
        }
        let w = &b - &a;
        if w < hard_stop {
            break;
        }
    }
    // irrational (or absurdly tall rational): report a tight interval
    while &(&b - &a) > width_goal {
        let m = (&a + &b) / int(2);
        let vm = sf.eval(&m);
        if vm.is_zero() {
            return Root::Exact(m);
        }
        if sign(&vm) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Root::Open(a, b)
}

/// Result of a nonnegativity-threshold computation.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    /// Every polynomial is nonnegative on all of `(floor, oo)`.
    Infinite,
    Exact(Rat),
    /// The bounding root is irrational: an isolating interval of width
    /// <= 10^-12 plus the defining polynomial.
    Interval {
        lo: Rat,
        hi: Rat,
        poly: UPoly,
    },
}

#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub threshold: Threshold,
    /// Index into the input list of the binding polynomial, when finite.
    pub binding: Option<usize>,
}

/// First point above `floor` after which `p` becomes negative, described as
/// the bounding root, or `Exact(floor)` when `p` is negative immediately
/// right of `floor`.  `None` when `p >= 0` on all of `(floor, oo)`.
fn first_negative_after(p: &UPoly, floor: &Rat) -> Option<Root> {
    if p.is_zero() {
        return None;
    }
    if let Some(c) = p.as_constant() {
        return if c.is_negative() {
            Some(Root::Exact(floor.clone()))
        } else {
            None
        };
    }
    let roots = isolate_roots_above(p, floor);
    // sample points: one inside (floor, r1), one between consecutive roots,
    // one beyond the last root
    let mut samples: Vec<Rat> = Vec::with_capacity(roots.len() + 1);
    if let Some(first) = roots.first() {
        samples.push((floor + first.lo()) / int(2));
        for w in roots.windows(2) {
            samples.push((w[0].hi() + w[1].lo()) / int(2));
        }
        let last = roots.last().unwrap();
        samples.push(last.hi() + Rat::one());
    } else {
        samples.push(floor + Rat::one());
    }
    for (i, s) in samples.iter().enumerate() {
        if p.eval(s).is_negative() {
            return if i == 0 {
                Some(Root::Exact(floor.clone()))
            } else {
                Some(roots[i - 1].clone())
            };
        }
    }
    None
}

/// Largest `x*` such that every polynomial in `ps` is nonnegative on the
/// whole of `(floor, x*]`.  Exact when the bounding root is rational.
///
/// An empty list (or all-zero polynomials) gives `Infinite`.
pub fn poly_nonneg_threshold(ps: &[UPoly], floor: &Rat) -> ThresholdResult {
    let width_goal = rat(1, 10).pow(12);
    let mut best: Option<(Root, usize)> = None;
    for (i, p) in ps.iter().enumerate() {
        if let Some(root) = first_negative_after(p, floor) {
            let refined = refine_root(p, root, &width_goal);
            let better = match &best {
                None => true,
                Some((cur, _)) => refined.lo() < cur.lo(),
            };
            if better {
                best = Some((refined, i));
            }
        }
    }
    match best {
        None => ThresholdResult {
            threshold: Threshold::Infinite,
            binding: None,
        },
        Some((Root::Exact(r), i)) => ThresholdResult {
            threshold: Threshold::Exact(r),
            binding: Some(i),
        },
        Some((Root::Open(a, b), i)) => ThresholdResult {
            threshold: Threshold::Interval {
                lo: a,
                hi: b,
                poly: ps[i].clone(),
            },
            binding: Some(i),
        },
    }
}
