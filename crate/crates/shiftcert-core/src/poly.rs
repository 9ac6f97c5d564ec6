//! Sparse multivariate polynomials in the fixed variable set
//! `X, A, B, C` with exact rational coefficients.
//!
//! `A`, `B`, `C` stand for the nonnegative magnitudes of the three complex
//! parameters of the quartic form; once a polynomial is known to contain
//! only even powers of them, [`Poly::halve_even`] reinterprets it over the
//! squared magnitudes (`A2`, `B2`, `C2`).
//!
//! Term order is graded lexicographic with `X < A < B < C`, so coefficient
//! enumeration in reports is reproducible.

use crate::rat::Rat;
use crate::upoly::UPoly;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_traits::{One, Signed, Zero};

pub const NVARS: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X = 0,
    A = 1,
    B = 2,
    C = 3,
}

pub const VAR_NAMES: [&str; NVARS] = ["X", "A", "B", "C"];

/// Exponent vector, ordered graded-lex (total degree first, ties broken on
/// the highest variable `C` downwards).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0u16; NVARS];
        e[v as usize] = 1;
        Mono(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = [0u16; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i] + o.0[i];
        }
        Mono(e)
    }

    pub fn try_div(&self, o: &Mono) -> Option<Mono> {
        let mut e = [0u16; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i].checked_sub(o.0[i])?;
        }
        Some(Mono(e))
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total().cmp(&o.total()).then_with(|| {
            for i in (0..NVARS).rev() {
                match self.0[i].cmp(&o.0[i]) {
                    Ordering::Equal => continue,
                    ne => return ne,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Mono::var(v), Rat::one());
        p
    }

    pub fn from_upoly(p: &UPoly, v: Var) -> Self {
        let mut out = Poly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            let mut e = [0u16; NVARS];
            e[v as usize] = i as u16;
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.leading().unwrap();
                if *m == Mono::one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in o.terms.iter() {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in o.terms.iter() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Mono, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
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

    /// Exact quotient, or `None` if not divisible.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.try_div(dm)?;
            let c = rc / dc;
            rem = rem.sub(&d.mul_term(&m, &c));
            quo.add_term(m, c);
        }
        Some(quo)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms
            .keys()
            .map(|m| m.0[v as usize])
            .max()
            .unwrap_or(0)
    }

    /// Substitute a rational value for one variable.
    pub fn subst(&self, v: Var, x: &Rat) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            let e = m.0[v as usize];
            let mut mm = *m;
            mm.0[v as usize] = 0;
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= x;
            }
            out.add_term(mm, coeff);
        }
        out
    }

    pub fn eval(&self, vals: &[Rat; NVARS]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for i in 0..NVARS {
                for _ in 0..m.0[i] {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// `true` when every term has even exponent in each of the given
    /// variables.
    pub fn even_in(&self, vars: &[Var]) -> bool {
        self.terms
            .keys()
            .all(|m| vars.iter().all(|&v| m.0[v as usize] % 2 == 0))
    }

    /// Halve the exponents of the given variables (exponents must all be
    /// even): reinterprets `A, B, C` as their squares.
    pub fn halve_even(&self, vars: &[Var]) -> Option<Poly> {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            let mut mm = *m;
            for &v in vars {
                let e = mm.0[v as usize];
                if e % 2 != 0 {
                    return None;
                }
                mm.0[v as usize] = e / 2;
            }
            out.add_term(mm, c.clone());
        }
        Some(out)
    }

    /// Group terms by the exponents of `A, B, C`; each group is a
    /// univariate polynomial in `X`.  Returned in ascending monomial order.
    pub fn coefficients_in_params(&self) -> Vec<([u16; 3], UPoly)> {
        let mut groups: BTreeMap<Mono, Vec<(usize, Rat)>> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let key = Mono([0, m.0[1], m.0[2], m.0[3]]);
            groups
                .entry(key)
                .or_default()
                .push((m.0[0] as usize, c.clone()));
        }
        groups
            .into_iter()
            .map(|(key, parts)| {
                let deg = parts.iter().map(|(e, _)| *e).max().unwrap_or(0);
                let mut coeffs = alloc::vec![Rat::zero(); deg + 1];
                for (e, c) in parts {
                    coeffs[e] = c;
                }
                ([key.0[1], key.0[2], key.0[3]], UPoly::new(coeffs))
            })
            .collect()
    }

    /// View as univariate in `v`; `None` if any other variable occurs.
    pub fn to_upoly(&self, v: Var) -> Option<UPoly> {
        let deg = self.degree_in(v) as usize;
        let mut coeffs = alloc::vec![Rat::zero(); deg + 1];
        for (m, c) in self.terms.iter() {
            for i in 0..NVARS {
                if i != v as usize && m.0[i] != 0 {
                    return None;
                }
            }
            coeffs[m.0[v as usize] as usize] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }
}

/// Renders with the post-substitution names when `squared` is set
/// (`A2 B2 C2` instead of `A B C`).
pub fn format_poly(p: &Poly, squared: bool) -> String {
    use core::fmt::Write;
    if p.is_zero() {
        return String::from("0");
    }
    let mut s = String::new();
    let mut first = true;
    for (m, c) in p.terms() {
        if first {
            if c.is_negative() {
                s.push('-');
            }
            first = false;
        } else if c.is_negative() {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        let a = c.abs();
        let unit_coeff = a.is_one() && m.total() > 0;
        if !unit_coeff {
            let _ = write!(s, "{a}");
        }
        let mut any_var = false;
        for i in 0..NVARS {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            if any_var || !unit_coeff {
                s.push('*');
            }
            any_var = true;
            let name = if squared && i > 0 {
                ["X", "A2", "B2", "C2"][i]
            } else {
                VAR_NAMES[i]
            };
            s.push_str(name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
    }
    s
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self, false))
    }
}
