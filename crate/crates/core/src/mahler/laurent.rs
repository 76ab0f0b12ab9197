//! Two-variable Laurent polynomials with exact rational coefficients,
//! plus the small literal grammar used by the CLI:
//!
//!   expr   := term (('+'|'-') term)*
//!   term   := factor ('*'? factor)*
//!   factor := base ('^' integer)?
//!   base   := integer | 'x1' | 'x2' | '(' expr ')'
//!
//! Exponents may be negative on variables (Laurent monomials) and
//! non-negative on parenthesized subexpressions.

use crate::error::{Error, Result};
use rug::{Complete, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// Minimal complex double for torus evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

// free-function style mul/add keep this Copy type allocation-free in
// the hot quadrature loop
#[allow(clippy::should_implement_trait)]
impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }

    pub fn cis(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        C64 { re: c, im: s }
    }

    pub fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    pub fn add(self, o: C64) -> C64 {
        C64 {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn powi(self, e: i64) -> C64 {
        if e == 0 {
            return C64::new(1.0, 0.0);
        }
        let base = if e < 0 {
            // on the unit torus the inverse is the conjugate
            let d = self.re * self.re + self.im * self.im;
            C64::new(self.re / d, -self.im / d)
        } else {
            self
        };
        let mut acc = C64::new(1.0, 0.0);
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(b);
            }
            b = b.mul(b);
            n >>= 1;
        }
        acc
    }
}

/// Finitely many terms (e1, e2) -> coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn variable(which: u8) -> Self {
        let mut p = Self::zero();
        match which {
            1 => p.add_term(1, 0, Rational::from(1)),
            2 => p.add_term(0, 1, Rational::from(1)),
            _ => panic!("variable index must be 1 or 2"),
        }
        p
    }

    pub fn add_term(&mut self, e1: i64, e2: i64, c: Rational) {
        if c == 0u32 {
            return;
        }
        let entry = self.terms.entry((e1, e2)).or_default();
        *entry += c;
        if *entry == 0u32 {
            self.terms.remove(&(e1, e2));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(e1, e2), c) in &rhs.terms {
            out.add_term(e1, e2, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, (-c).complete()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(a1, a2), ca) in &self.terms {
            for (&(b1, b2), cb) in &rhs.terms {
                out.add_term(a1 + b1, a2 + b2, (ca * cb).complete());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> LaurentPoly2 {
        let mut acc = LaurentPoly2::constant(Rational::from(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// f(x2, x1)
    pub fn swap_vars(&self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(e1, e2), c)| ((e2, e1), c.clone()))
                .collect(),
        }
    }

    /// f with x_which replaced by its inverse.
    pub fn invert_var(&self, which: u8) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(e1, e2), c)| {
                    let k = match which {
                        1 => (-e1, e2),
                        2 => (e1, -e2),
                        _ => panic!("variable index must be 1 or 2"),
                    };
                    (k, c.clone())
                })
                .collect(),
        }
    }

    /// Evaluate at (e^{i t1}, e^{i t2}) in doubles; fine for quadrature.
    pub fn eval_torus(&self, t1: f64, t2: f64) -> C64 {
        let z1 = C64::cis(t1);
        let z2 = C64::cis(t2);
        let mut acc = C64::new(0.0, 0.0);
        for (&(e1, e2), c) in &self.terms {
            let m = z1.powi(e1).mul(z2.powi(e2));
            let cf = c.to_f64();
            acc = acc.add(C64::new(m.re * cf, m.im * cf));
        }
        acc
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(e1, e2), c) in &self.terms {
            let neg = *c < 0u32;
            let mag = if neg { (-c).complete() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit_coeff = mag == 1u32 && (e1, e2) != (0, 0);
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            let mut star = !unit_coeff;
            for (name, e) in [("x1", e1), ("x2", e2)] {
                if e != 0 {
                    if star {
                        write!(f, "*")?;
                    }
                    star = true;
                    if e == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// f_N(x1, x2) = Psi_N(x1 + x2) as an explicit polynomial.
pub fn fn_polynomial(n: u64) -> crate::error::Result<LaurentPoly2> {
    let psi = crate::exact::poly::real_cyclotomic_polynomial(n as u32)?;
    let x1x2 = parse_poly("x1+x2").expect("static literal");
    let mut acc = LaurentPoly2::zero();
    let mut pow = LaurentPoly2::constant(Rational::from(1));
    for c in psi.coeffs() {
        acc = acc.add(&pow.mul(&LaurentPoly2::constant(Rational::from(c))));
        pow = pow.mul(&x1x2);
    }
    Ok(acc)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly2> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly2> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // juxtaposition: 3x1, x1x2, 2(x1+1)
                Some(c) if c == b'x' || c == b'(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly2> {
        let (base, is_var) = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            if e < 0 {
                if !is_var {
                    return self.err("negative exponents are only allowed on variables");
                }
                let inv = base.invert_var(if base.terms.keys().next().unwrap().0 != 0 {
                    1
                } else {
                    2
                });
                return Ok(inv.pow(e.unsigned_abs() as u32));
            }
            if e > 64 {
                return self.err("exponent too large");
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<(LaurentPoly2, bool)> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok((inner, false))
            }
            Some(b'x') => {
                self.pos += 1;
                match self.src.get(self.pos) {
                    Some(b'1') => {
                        self.pos += 1;
                        Ok((LaurentPoly2::variable(1), true))
                    }
                    Some(b'2') => {
                        self.pos += 1;
                        Ok((LaurentPoly2::variable(2), true))
                    }
                    _ => self.err("expected x1 or x2"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok((LaurentPoly2::constant(Rational::from(v)), false))
            }
            Some(_) => self.err("expected a number, x1, x2 or '('"),
            None => self.err("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.src[start] == b'-') {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer out of range".to_string(),
            })
    }
}

/// Parse the CLI polynomial literal grammar.
pub fn parse_poly(src: &str) -> Result<LaurentPoly2> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
