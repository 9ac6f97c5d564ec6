//! Univariate polynomials and rational functions over exact rationals.
//!
//! Coefficients are stored dense, lowest degree first, with trailing zeros
//! trimmed; the zero polynomial has an empty coefficient vector.

use crate::rat::Rat;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn var() -> Self {
        UPoly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `a0 + a1*X`.
    pub fn linear(a0: Rat, a1: Rat) -> Self {
        UPoly::new(vec![a0, a1])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + o.coeff(i));
        }
        UPoly::new(out)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> UPoly {
        if k.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn mul_xpow(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        UPoly::new(out)
    }

    pub fn pow(&self, mut e: u32) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::one();
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

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * Rat::from_integer(i.into()));
        }
        UPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quo[shift] = c.clone();
            let sub = d.scale(&c).mul_xpow(shift);
            rem = rem.sub(&sub);
        }
        (UPoly::new(quo), rem)
    }

    /// Exact quotient, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd (gcd of the zero polynomial with p is p made monic).
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if let Some(l) = a.leading() {
            let inv = Rat::one() / l;
            a = a.scale(&inv);
        }
        a
    }

    /// `p / gcd(p, p')`: same roots, all simple.  The sign of the leading
    /// coefficient of `p` is preserved.
    pub fn squarefree_part(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let g = UPoly::gcd(self, &self.derivative());
        self.exact_div(&g).expect("gcd divides")
    }

    /// Composition `self(q(X))`.
    pub fn compose(&self, q: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// `p(X + c)`.
    pub fn shift(&self, c: &Rat) -> UPoly {
        self.compose(&UPoly::linear(c.clone(), Rat::one()))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "X")?;
            } else {
                write!(f, "{a}*X")?;
            }
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        Ok(())
    }
}

/// A rational function `num/den` over `Q[X]`, kept in canonical form:
/// the gcd is divided out and the denominator is monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: UPoly,
    den: UPoly,
}

impl RatFn {
    pub fn new(num: UPoly, den: UPoly) -> Result<Self, String> {
        if den.is_zero() {
            return Err(String::from("zero denominator"));
        }
        let mut r = RatFn { num, den };
        r.normalize();
        Ok(r)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = UPoly::one();
            return;
        }
        let g = UPoly::gcd(&self.num, &self.den);
        self.num = self.num.exact_div(&g).expect("gcd divides");
        self.den = self.den.exact_div(&g).expect("gcd divides");
        let lead = self.den.leading().unwrap().clone();
        let inv = Rat::one() / lead;
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFn {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFn::from_poly(UPoly::constant(c))
    }

    pub fn var() -> Self {
        RatFn::from_poly(UPoly::var())
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial when the denominator is constant.
    pub fn as_poly(&self) -> Option<UPoly> {
        if self.den.degree() == Some(0) {
            let c = self.den.coeff(0);
            Some(self.num.scale(&(Rat::one() / c)))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        let den = self.den.mul(&o.den);
        RatFn::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn, String> {
        if o.is_zero() {
            return Err(String::from("division by zero"));
        }
        RatFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// Evaluate; `None` at a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn p(cs: &[(i64, i64)]) -> UPoly {
        UPoly::new(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[(1, 1), (2, 1)]); // 1 + 2X
        let b = p(&[(0, 1), (0, 1), (1, 1)]); // X^2
        assert_eq!(a.mul(&b), p(&[(0, 1), (0, 1), (1, 1), (2, 1)]));
        assert_eq!(a.eval(&rat(1, 2)), int(2));
        assert_eq!(a.sub(&a), UPoly::zero());
    }

    #[test]
    fn division() {
        // (X^2 - 1) / (X - 1) = X + 1
        let n = p(&[(-1, 1), (0, 1), (1, 1)]);
        let d = p(&[(-1, 1), (1, 1)]);
        assert_eq!(n.exact_div(&d), Some(p(&[(1, 1), (1, 1)])));
        assert_eq!(p(&[(1, 1), (1, 1)]).exact_div(&d), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        // p = (X-1)^2 (X+2)
        let f = p(&[(-1, 1), (1, 1)]);
        let g = p(&[(2, 1), (1, 1)]);
        let prod = f.mul(&f).mul(&g);
        let sf = prod.squarefree_part();
        // squarefree part = (X-1)(X+2) up to the preserved leading sign
        assert_eq!(sf, f.mul(&g));
    }

    #[test]
    fn ratfn_canonical() {
        // (X^2-1)/(2X-2) == (X+1)/2
        let a = RatFn::new(p(&[(-1, 1), (0, 1), (1, 1)]), p(&[(-2, 1), (2, 1)])).unwrap();
        let b = RatFn::new(p(&[(1, 1), (1, 1)]), p(&[(2, 1)])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.eval(&int(3)), Some(int(2)));
        assert_eq!(a.as_poly(), Some(p(&[(1, 2), (1, 2)])));
    }

    #[test]
    fn shift_compose() {
        // p(X) = X^2, p(X+1) = X^2 + 2X + 1
        let sq = p(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(sq.shift(&int(1)), p(&[(1, 1), (2, 1), (1, 1)]));
    }
}
