//! Weight families, instances, moments, and the basic hyponormality check.
//!
//! A weight family is a finite prefix of squared-weight expressions in the
//! parameter `x` followed by a closed-form tail rule in the index `n`:
//!
//! ```text
//! prefix [ x ] tail (n+2)/(n+3) from 1 domain (0, 3/4] subnormal_tail
//! ```

use crate::cert::Certificate;
use crate::rat::{fmt_rat, int, Rat};
use crate::upoly::{RatFn, UPoly};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------------------
// expressions

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Num(Rat),
    X,
    N,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: Option<&Rat>, n: Option<&Rat>) -> Result<Rat, String> {
        match self {
            Expr::Num(r) => Ok(r.clone()),
            Expr::X => x.cloned().ok_or_else(|| "unbound variable x".to_string()),
            Expr::N => n.cloned().ok_or_else(|| "unbound variable n".to_string()),
            Expr::Add(a, b) => Ok(a.eval(x, n)? + b.eval(x, n)?),
            Expr::Sub(a, b) => Ok(a.eval(x, n)? - b.eval(x, n)?),
            Expr::Mul(a, b) => Ok(a.eval(x, n)? * b.eval(x, n)?),
            Expr::Div(a, b) => {
                let d = b.eval(x, n)?;
                if d.is_zero() {
                    Err("division by zero".to_string())
                } else {
                    Ok(a.eval(x, n)? / d)
                }
            }
            Expr::Neg(a) => Ok(-a.eval(x, n)?),
        }
    }

    /// Which of `x`/`n` the expression is a rational function of.
    pub fn to_ratfn(&self, var: ExprVar) -> Result<RatFn, String> {
        match self {
            Expr::Num(r) => Ok(RatFn::constant(r.clone())),
            Expr::X => {
                if var == ExprVar::X {
                    Ok(RatFn::var())
                } else {
                    Err("unbound variable x".to_string())
                }
            }
            Expr::N => {
                if var == ExprVar::N {
                    Ok(RatFn::var())
                } else {
                    Err("unbound variable n".to_string())
                }
            }
            Expr::Add(a, b) => Ok(a.to_ratfn(var)?.add(&b.to_ratfn(var)?)),
            Expr::Sub(a, b) => Ok(a.to_ratfn(var)?.sub(&b.to_ratfn(var)?)),
            Expr::Mul(a, b) => Ok(a.to_ratfn(var)?.mul(&b.to_ratfn(var)?)),
            Expr::Div(a, b) => a.to_ratfn(var)?.div(&b.to_ratfn(var)?),
            Expr::Neg(a) => Ok(a.to_ratfn(var)?.neg()),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Num(..) | Expr::X | Expr::N => 4,
        }
    }

    fn print_prec(&self, min: u8, out: &mut String) {
        let p = self.prec();
        let parens = p < min;
        if parens {
            out.push('(');
        }
        match self {
            Expr::Num(r) => out.push_str(&fmt_rat(r)),
            Expr::X => out.push('x'),
            Expr::N => out.push('n'),
            Expr::Add(a, b) => {
                a.print_prec(1, out);
                out.push_str(" + ");
                b.print_prec(2, out);
            }
            Expr::Sub(a, b) => {
                a.print_prec(1, out);
                out.push_str(" - ");
                b.print_prec(2, out);
            }
            Expr::Mul(a, b) => {
                a.print_prec(2, out);
                out.push_str("*");
                b.print_prec(3, out);
            }
            Expr::Div(a, b) => {
                a.print_prec(2, out);
                out.push_str("/");
                b.print_prec(3, out);
            }
            Expr::Neg(a) => {
                out.push('-');
                a.print_prec(3, out);
            }
        }
        if parens {
            out.push(')');
        }
    }

    pub fn print(&self) -> String {
        let mut s = String::new();
        self.print_prec(0, &mut s);
        s
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExprVar {
    X,
    N,
}

// ---------------------------------------------------------------------------
// lexer / parser

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(Rat),
    Ident(String),
    Str(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
}

#[derive(Clone, Debug)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if ch.is_whitespace() {
            chars.next();
            bump(ch, &mut line, &mut col);
            continue;
        }
        if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                    bump(c, &mut line, &mut col);
                } else {
                    break;
                }
            }
            let v = s.parse::<Rat>().map_err(|e| ParseError {
                line: tline,
                col: tcol,
                msg: format!("bad integer literal: {e}"),
            })?;
            out.push(Lexed {
                tok: Tok::Int(v),
                line: tline,
                col: tcol,
            });
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    bump(c, &mut line, &mut col);
                } else {
                    break;
                }
            }
            out.push(Lexed {
                tok: Tok::Ident(s),
                line: tline,
                col: tcol,
            });
            continue;
        }
        if ch == '"' {
            chars.next();
            bump(ch, &mut line, &mut col);
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('"') => {
                        bump('"', &mut line, &mut col);
                        break;
                    }
                    Some(c) => {
                        s.push(c);
                        bump(c, &mut line, &mut col);
                    }
                    None => {
                        return Err(ParseError {
                            line: tline,
                            col: tcol,
                            msg: "unterminated string".to_string(),
                        })
                    }
                }
            }
            out.push(Lexed {
                tok: Tok::Str(s),
                line: tline,
                col: tcol,
            });
            continue;
        }
        let tok = match ch {
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        bump(ch, &mut line, &mut col);
        out.push(Lexed {
            tok,
            line: tline,
            col: tcol,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|l| (l.line, l.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: String) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if *found == t => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(self.err(format!("expected {what}, found {found:?}"))),
            None => Err(self.err(format!("expected {what}, found end of input"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(self.err(format!("expected `{kw}`, found {found:?}"))),
            None => Err(self.err(format!("expected `{kw}`, found end of input"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn fold_binary(
        &self,
        op: fn(Box<Expr>, Box<Expr>) -> Expr,
        a: Expr,
        b: Expr,
    ) -> Result<Expr, ParseError> {
        if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
            let folded = op(Box::new(a.clone()), Box::new(b.clone()));
            let v = match &folded {
                Expr::Add(..) => x + y,
                Expr::Sub(..) => x - y,
                Expr::Mul(..) => x * y,
                Expr::Div(..) => {
                    if y.is_zero() {
                        return Err(self.err("division by zero in constant".to_string()));
                    }
                    x / y
                }
                _ => unreachable!(),
            };
            return Ok(Expr::Num(v));
        }
        Ok(op(Box::new(a), Box::new(b)))
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = self.fold_binary(Expr::Add, acc, rhs)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = self.fold_binary(Expr::Sub, acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    acc = self.fold_binary(Expr::Mul, acc, rhs)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    acc = self.fold_binary(Expr::Div, acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(Expr::Num(v)),
            Some(Tok::Ident(s)) if s == "x" => Ok(Expr::X),
            Some(Tok::Ident(s)) if s == "n" => Ok(Expr::N),
            Some(Tok::LParen) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Minus) => {
                let inner = self.parse_factor()?;
                if let Expr::Num(v) = inner {
                    Ok(Expr::Num(-v))
                } else {
                    Ok(Expr::Neg(Box::new(inner)))
                }
            }
            Some(other) => Err(ParseError {
                line: self.toks[self.pos - 1].line,
                col: self.toks[self.pos - 1].col,
                msg: format!("expected expression, found {other:?}"),
            }),
            None => Err(self.err("expected expression, found end of input".to_string())),
        }
    }

    fn parse_rational(&mut self) -> Result<Rat, ParseError> {
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = match self.next() {
            Some(Tok::Int(v)) => v,
            other => {
                return Err(self.err(format!("expected rational, found {other:?}")));
            }
        };
        let v = if matches!(self.peek(), Some(Tok::Slash)) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(d)) => {
                    if d.is_zero() {
                        return Err(self.err("zero denominator".to_string()));
                    }
                    n / d
                }
                other => {
                    return Err(self.err(format!("expected denominator, found {other:?}")));
                }
            }
        } else {
            n
        };
        Ok(if neg { -v } else { v })
    }

    fn parse_interval(&mut self) -> Result<Interval, ParseError> {
        let lo_closed = match self.next() {
            Some(Tok::LParen) => false,
            Some(Tok::LBracket) => true,
            other => {
                return Err(self.err(format!("expected `(` or `[`, found {other:?}")));
            }
        };
        let lo = self.parse_rational()?;
        self.expect(Tok::Comma, "`,`")?;
        let hi = self.parse_rational()?;
        let hi_closed = match self.next() {
            Some(Tok::RParen) => false,
            Some(Tok::RBracket) => true,
            other => {
                return Err(self.err(format!("expected `)` or `]`, found {other:?}")));
            }
        };
        if lo >= hi {
            return Err(self.err(format!(
                "empty interval: {} >= {}",
                fmt_rat(&lo),
                fmt_rat(&hi)
            )));
        }
        Ok(Interval {
            lo,
            lo_closed,
            hi: Some(hi),
            hi_closed,
        })
    }
}

// ---------------------------------------------------------------------------
// families

/// Rational interval; `hi = None` means unbounded above.
#[derive(Clone, PartialEq, Debug)]
pub struct Interval {
    pub lo: Rat,
    pub lo_closed: bool,
    pub hi: Option<Rat>,
    pub hi_closed: bool,
}

impl Interval {
    /// `(0, oo)`, the default parameter domain.
    pub fn positive() -> Self {
        Interval {
            lo: Rat::zero(),
            lo_closed: false,
            hi: None,
            hi_closed: false,
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let lo_ok = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let hi_ok = match &self.hi {
            None => true,
            Some(h) => {
                if self.hi_closed {
                    x <= h
                } else {
                    x < h
                }
            }
        };
        lo_ok && hi_ok
    }

    pub fn print(&self) -> String {
        let open = if self.lo_closed { '[' } else { '(' };
        match &self.hi {
            Some(h) => {
                let close = if self.hi_closed { ']' } else { ')' };
                format!("{}{}, {}{}", open, fmt_rat(&self.lo), fmt_rat(h), close)
            }
            None => format!("{}{}, oo)", open, fmt_rat(&self.lo)),
        }
    }
}

/// Parametric weight-square family: prefix expressions in `x`, tail rule in
/// `n` starting at `tail_start`.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightFamily {
    pub prefix_sq: Vec<Expr>,
    pub tail_sq: Expr,
    pub tail_start: usize,
    pub x_domain: Interval,
    pub tail_subnormal: bool,
    /// Free-text justification for the subnormal-tail declaration.
    pub tail_note: Option<String>,
}

/// Parse a family from the textual grammar.
pub fn parse_family(text: &str) -> Result<WeightFamily, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.expect_keyword("prefix")?;
    p.expect(Tok::LBracket, "`[`")?;
    let mut prefix = Vec::new();
    if !matches!(p.peek(), Some(Tok::RBracket)) {
        loop {
            prefix.push(p.parse_expr()?);
            if matches!(p.peek(), Some(Tok::Comma)) {
                p.pos += 1;
            } else {
                break;
            }
        }
    }
    p.expect(Tok::RBracket, "`]` (unclosed bracket?)")?;
    p.expect_keyword("tail")?;
    let tail = p.parse_expr()?;
    p.expect_keyword("from")?;
    let start = match p.next() {
        Some(Tok::Int(v)) => {
            let n = v.to_integer();
            if n.sign() == num_bigint::Sign::Minus {
                return Err(p.err("tail start must be nonnegative".to_string()));
            }
            let digits = n.to_u64_digits().1;
            match digits.as_slice() {
                [] => 0usize,
                [d] => *d as usize,
                _ => return Err(p.err("tail start out of range".to_string())),
            }
        }
        other => return Err(p.err(format!("expected tail start integer, found {other:?}"))),
    };
    let domain = if p.at_keyword("domain") {
        p.pos += 1;
        p.parse_interval()?
    } else {
        Interval::positive()
    };
    let mut subnormal = false;
    let mut note = None;
    if p.at_keyword("subnormal_tail") {
        p.pos += 1;
        subnormal = true;
        if let Some(Tok::Str(s)) = p.peek() {
            note = Some(s.clone());
            p.pos += 1;
        }
    }
    if let Some(t) = p.peek() {
        return Err(p.err(format!("unexpected trailing input: {t:?}")));
    }
    let fam = WeightFamily {
        prefix_sq: prefix,
        tail_sq: tail,
        tail_start: start,
        x_domain: domain,
        tail_subnormal: subnormal,
        tail_note: note,
    };
    fam.validate().map_err(|msg| ParseError {
        line: 1,
        col: 1,
        msg,
    })?;
    Ok(fam)
}

impl WeightFamily {
    /// The one-parameter family of the certified example: squared weights
    /// `x, 3/4, 4/5, 5/6, ...`.
    pub fn example() -> Self {
        parse_family(
            "prefix [ x ] tail (n+2)/(n+3) from 1 domain (0, 3/4] subnormal_tail \"Bergman tail\"",
        )
        .expect("builtin family parses")
    }

    /// Semantic validation: prefix length matches the tail start, tail
    /// values are positive, prefix expressions are positive where checkable.
    pub fn validate(&self) -> Result<(), String> {
        if self.prefix_sq.len() != self.tail_start {
            return Err(format!(
                "prefix length {} does not match tail start {}",
                self.prefix_sq.len(),
                self.tail_start
            ));
        }
        for k in 0..=50usize {
            let n = int((self.tail_start + k) as i64);
            let v = self
                .tail_sq
                .eval(None, Some(&n))
                .map_err(|e| format!("tail at n={}: {e}", self.tail_start + k))?;
            if !v.is_positive() {
                return Err(format!(
                    "tail squared weight nonpositive at n = {}",
                    self.tail_start + k
                ));
            }
        }
        let mut probes: Vec<(Rat, &str)> = Vec::new();
        if self.x_domain.lo_closed {
            probes.push((self.x_domain.lo.clone(), "lower domain endpoint"));
        }
        if let Some(h) = &self.x_domain.hi {
            if self.x_domain.hi_closed {
                probes.push((h.clone(), "upper domain endpoint"));
            }
            probes.push(((&self.x_domain.lo + h) / int(2), "domain midpoint"));
        } else {
            probes.push((&self.x_domain.lo + Rat::one(), "domain sample"));
        }
        for (i, e) in self.prefix_sq.iter().enumerate() {
            for (xv, what) in &probes {
                match e.eval(Some(xv), None) {
                    Ok(v) => {
                        if !v.is_positive() {
                            return Err(format!(
                                "prefix expression {i} is nonpositive at the {what} x = {}",
                                fmt_rat(xv)
                            ));
                        }
                    }
                    Err(_) => {
                        // pole at the probe: tolerated at open endpoints
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical textual form; `parse_family(print_family(f)) == f`.
    pub fn print(&self) -> String {
        let mut s = String::from("prefix [");
        for (i, e) in self.prefix_sq.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&e.print());
        }
        s.push_str("] tail ");
        s.push_str(&self.tail_sq.print());
        s.push_str(&format!(" from {}", self.tail_start));
        if self.x_domain != Interval::positive() {
            s.push_str(" domain ");
            s.push_str(&self.x_domain.print());
        }
        if self.tail_subnormal {
            s.push_str(" subnormal_tail");
            if let Some(n) = &self.tail_note {
                s.push_str(&format!(" \"{n}\""));
            }
        }
        s
    }

    /// Squared weight at index `n` as a function of the parameter.
    pub fn weight_sq_sym(&self, n: usize) -> Result<RatFn, String> {
        if n < self.tail_start {
            self.prefix_sq[n].to_ratfn(ExprVar::X)
        } else {
            let v = self.tail_sq.eval(None, Some(&int(n as i64)))?;
            Ok(RatFn::constant(v))
        }
    }

    /// Moment as a rational function of the parameter:
    /// `gamma_0 = 1`, `gamma_k = a_0^2 ... a_{k-1}^2`.
    pub fn moment_sym(&self, k: usize) -> Result<RatFn, String> {
        let mut acc = RatFn::constant(Rat::one());
        for i in 0..k {
            acc = acc.mul(&self.weight_sq_sym(i)?);
        }
        Ok(acc)
    }

    /// Bind the parameter to a concrete rational.
    pub fn instance(&self, x: Rat) -> Result<ShiftInstance, String> {
        if !self.x_domain.contains(&x) {
            return Err(format!(
                "x = {} outside the family domain {}",
                fmt_rat(&x),
                self.x_domain.print()
            ));
        }
        for (i, e) in self.prefix_sq.iter().enumerate() {
            let v = e.eval(Some(&x), None)?;
            if !v.is_positive() {
                return Err(format!(
                    "prefix squared weight {i} nonpositive at x = {}",
                    fmt_rat(&x)
                ));
            }
        }
        Ok(ShiftInstance {
            family: self.clone(),
            x,
        })
    }

    /// Symbolic proof that the tail rule is nondecreasing for every
    /// `n >= tail_start`: clear denominators of `tail(n+1) - tail(n)` and
    /// check coefficient signs after shifting the index to the tail start.
    pub fn tail_monotone_nondecreasing(&self) -> bool {
        let t = match self.tail_sq.to_ratfn(ExprVar::N) {
            Ok(t) => t,
            Err(_) => return false,
        };
        let shift_one = |p: &UPoly| p.shift(&Rat::one());
        let t_next = match RatFn::new(shift_one(t.num()), shift_one(t.den())) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let d = t_next.sub(&t);
        // sign of num/den equals the sign of num*den away from poles
        let prod = d.num().mul(d.den());
        let start = int(self.tail_start as i64);
        let shifted = prod.shift(&start);
        if !shifted.coeffs().iter().all(|c| !c.is_negative()) {
            return false;
        }
        // denominators must not vanish at any integer n >= tail_start
        for den in [t.den(), t_next.den()] {
            let ds = den.shift(&start);
            let all_nonneg = ds.coeffs().iter().all(|c| !c.is_negative());
            let all_nonpos = ds.coeffs().iter().all(|c| !c.is_positive());
            let const_nonzero = !ds.coeff(0).is_zero();
            if !((all_nonneg || all_nonpos) && const_nonzero) {
                return false;
            }
        }
        true
    }
}

/// A family with the parameter bound: every squared weight is an exact
/// positive rational, computable on demand.
#[derive(Clone, PartialEq, Debug)]
pub struct ShiftInstance {
    pub family: WeightFamily,
    pub x: Rat,
}

impl ShiftInstance {
    /// Exact squared weight; panics only if the validated family has a
    /// tail pole, which validation rules out for the supported range.
    pub fn weight_sq(&self, n: usize) -> Rat {
        if n < self.family.tail_start {
            self.family.prefix_sq[n]
                .eval(Some(&self.x), None)
                .expect("validated prefix expression")
        } else {
            self.family
                .tail_sq
                .eval(None, Some(&int(n as i64)))
                .expect("validated tail expression")
        }
    }

    /// `gamma_k`: product of the first `k` squared weights.
    pub fn moment(&self, k: usize) -> Rat {
        let mut acc = Rat::one();
        for i in 0..k {
            acc *= self.weight_sq(i);
        }
        acc
    }
}

/// Moment sequence over an instance (exact rationals) or a family
/// (rational functions of the parameter).
#[derive(Clone, Debug)]
pub enum MomentSequence {
    Instance(ShiftInstance),
    Family(WeightFamily),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MomentValue {
    Rat(Rat),
    Sym(RatFn),
}

impl MomentSequence {
    pub fn moment(&self, k: usize) -> Result<MomentValue, String> {
        match self {
            MomentSequence::Instance(s) => Ok(MomentValue::Rat(s.moment(k))),
            MomentSequence::Family(f) => Ok(MomentValue::Sym(f.moment_sym(k)?)),
        }
    }
}

/// Hyponormality (`a_n <= a_{n+1}` for all `n`): explicit checks below `N`,
/// symbolic tail monotonicity for the rest.
pub fn hyponormal_check(s: &ShiftInstance, n_max: usize) -> Certificate {
    let upto = n_max.max(s.family.tail_start + 1);
    for n in 0..upto {
        let a = s.weight_sq(n);
        let b = s.weight_sq(n + 1);
        if a > b {
            let mut c = Certificate::refuted(format!("n = {n}"));
            c.note(format!(
                "weight violation: a_{n}^2 = {} > a_{}^2 = {}",
                fmt_rat(&a),
                n + 1,
                fmt_rat(&b)
            ));
            return c;
        }
    }
    if s.family.tail_monotone_nondecreasing() {
        let mut c = Certificate::certified();
        c.note(format!(
            "a_n^2 <= a_(n+1)^2 verified explicitly for n < {upto}"
        ));
        c.note("tail rule proven nondecreasing symbolically; verdict covers all n".to_string());
        c
    } else {
        let mut c = Certificate::inconclusive(format!(
            "verified up to n = {upto}; tail monotonicity not symbolically decidable"
        ));
        c.note(format!(
            "a_n^2 <= a_(n+1)^2 verified explicitly for n < {upto}"
        ));
        c
    }
}
