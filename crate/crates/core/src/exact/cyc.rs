//! Exact elements of cyclotomic fields Q(zeta_d), represented on the
//! power basis {1, zeta, ..., zeta^{phi(d)-1}} after reduction modulo
//! Phi_d. The representation is canonical, so equality is coefficient
//! equality.

use super::poly::{cyclotomic_polynomial, euler_phi};
use crate::error::{Error, Result};
use crate::num::{BigComplex, BigReal};
use rug::{Complete, Rational};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycRational {
    order: u32,
    coeffs: Vec<Rational>,
}

/// Remainder of a rational polynomial modulo the (monic, integer)
/// cyclotomic polynomial of order `d`, truncated/padded to phi(d).
fn reduce_mod_phi(mut c: Vec<Rational>, d: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(d);
    let m = phi.degree();
    while c.len() > m {
        let top = c.pop().unwrap();
        if top != 0u32 {
            let k = c.len() - m;
            for j in 0..m {
                let sub = (&top * &Rational::from(phi.coeff(j))).complete();
                c[k + j] -= sub;
            }
        }
    }
    c.resize(m, Rational::new());
    c
}

impl CycRational {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1);
        let m = euler_phi(order as u64) as usize;
        CycRational {
            order,
            coeffs: vec![Rational::new(); m],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(Rational::from(1), order)
    }

    pub fn from_rational(q: Rational, order: u32) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_i64(x: i64, order: u32) -> Self {
        Self::from_rational(Rational::from(x), order)
    }

    /// zeta_d^t as an exact field element.
    pub fn root_of_unity(order: u32, t: i64) -> Self {
        assert!(order >= 1);
        let tt = t.rem_euclid(order as i64) as usize;
        let mut c = vec![Rational::new(); tt + 1];
        c[tt] = Rational::from(1);
        CycRational {
            order,
            coeffs: reduce_mod_phi(c, order),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0u32)
    }

    /// Some(q) when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| *c == 0u32) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_order(&self, rhs: &CycRational) -> Result<()> {
        if self.order != rhs.order {
            Err(Error::OrderMismatch(self.order, rhs.order))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, rhs: &CycRational) -> Result<CycRational> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + b).complete())
            .collect();
        Ok(CycRational {
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, rhs: &CycRational) -> Result<CycRational> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a - b).complete())
            .collect();
        Ok(CycRational {
            order: self.order,
            coeffs,
        })
    }

    pub fn neg(&self) -> CycRational {
        CycRational {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| (-c).complete()).collect(),
        }
    }

    pub fn mul(&self, rhs: &CycRational) -> Result<CycRational> {
        self.check_order(rhs)?;
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut prod = vec![Rational::new(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0u32 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if *b == 0u32 {
                    continue;
                }
                prod[i + j] += (a * b).complete();
            }
        }
        Ok(CycRational {
            order: self.order,
            coeffs: reduce_mod_phi(prod, self.order),
        })
    }

    pub fn mul_rational(&self, q: &Rational) -> CycRational {
        CycRational {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| (c * q).complete()).collect(),
        }
    }

    pub fn div(&self, rhs: &CycRational) -> Result<CycRational> {
        self.check_order(rhs)?;
        let inv = rhs.inverse()?;
        self.mul(&inv)
    }

    /// Field inverse via extended Euclid against Phi_d in Q[x].
    pub fn inverse(&self) -> Result<CycRational> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.order));
        }
        let phi = cyclotomic_polynomial(self.order);
        let modp: Vec<Rational> = phi.coeffs().iter().map(Rational::from).collect();
        let inv = poly_inverse_mod(&self.coeffs, &modp)
            .ok_or(Error::DivisionByZero(self.order))?;
        Ok(CycRational {
            order: self.order,
            coeffs: reduce_mod_phi(inv, self.order),
        })
    }

    /// Express the same element in Q(zeta_{d_new}); requires d | d_new.
    pub fn lift(&self, d_new: u32) -> Result<CycRational> {
        if !d_new.is_multiple_of(self.order) {
            return Err(Error::NonDivisibleOrder {
                from: self.order,
                to: d_new,
            });
        }
        if d_new == self.order {
            return Ok(self.clone());
        }
        let step = (d_new / self.order) as usize;
        let mut c = vec![Rational::new(); (self.coeffs.len() - 1) * step + 1];
        for (l, a) in self.coeffs.iter().enumerate() {
            c[l * step] = a.clone();
        }
        Ok(CycRational {
            order: d_new,
            coeffs: reduce_mod_phi(c, d_new),
        })
    }

    /// Apply the Galois automorphism zeta_d -> zeta_d^s, gcd(s, d) = 1.
    pub fn galois(&self, s: i64) -> Result<CycRational> {
        let d = self.order as i64;
        let ss = s.rem_euclid(d);
        if gcd_u64(ss as u64, d as u64) != 1 {
            return Err(Error::NotAUnit {
                k: ss as u64,
                n: d as u64,
            });
        }
        let mut c = vec![Rational::new(); self.order as usize];
        for (l, a) in self.coeffs.iter().enumerate() {
            if *a != 0u32 {
                let e = (l as i64 * ss).rem_euclid(d) as usize;
                c[e] += a;
            }
        }
        Ok(CycRational {
            order: self.order,
            coeffs: reduce_mod_phi(c, self.order),
        })
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> CycRational {
        self.galois(self.order as i64 - 1)
            .expect("-1 is always a unit")
    }

    /// Numeric value under zeta_d -> e^{2 pi i j / d}, gcd(j, d) = 1.
    pub fn embed(&self, j: i64, bits: u32) -> Result<BigComplex> {
        let d = self.order as i64;
        let jj = j.rem_euclid(d) as u64;
        if gcd_u64(jj.max(1), d as u64) != 1 {
            return Err(Error::NotAUnit {
                k: jj,
                n: d as u64,
            });
        }
        let two_pi = BigReal::pi(bits).mul_i64(2);
        let mut acc = BigComplex::zero(bits);
        for (l, a) in self.coeffs.iter().enumerate() {
            if *a == 0u32 {
                continue;
            }
            let e = (l as u64 * jj) % self.order as u64;
            let angle = two_pi.mul_i64(e as i64).div_u64(self.order as u64);
            let w = BigReal::from_rational(a, bits);
            let term = BigComplex {
                re: angle.cos().mul(&w),
                im: angle.sin().mul(&w),
            };
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in self.coeffs.iter().enumerate() {
            if *c == 0u32 {
                continue;
            }
            let (sign, mag) = if *c < 0u32 {
                ("-", (-c).complete())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if l == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != 1u32 {
                    write!(f, "{mag}*")?;
                }
                if l == 1 {
                    write!(f, "z{}", self.order)?;
                } else {
                    write!(f, "z{}^{}", self.order, l)?;
                }
            }
        }
        Ok(())
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn poly_deg(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| *c != 0u32)
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| *c == 0u32) {
        p.pop();
    }
    p
}

/// u with a*u = 1 (mod m) in Q[x], when gcd(a, m) is a non-zero constant.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    // extended Euclid: r0 = m, r1 = a
    let mut r0 = poly_trim(m.to_vec());
    let mut r1 = poly_trim(a.to_vec());
    let mut t0: Vec<Rational> = vec![];
    let mut t1: Vec<Rational> = vec![Rational::from(1)];
    while let Some(d1) = poly_deg(&r1) {
        if d1 == 0 {
            break;
        }
        let (q, r) = poly_divmod(&r0, &r1);
        let tq = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = tq;
    }
    let d = poly_deg(&r1)?;
    debug_assert_eq!(d, 0);
    let c = r1[0].clone();
    Some(t1.iter().map(|t| (t / &c).complete()).collect())
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0u32 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += (x * y).complete();
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::new(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        *o = x - y;
    }
    poly_trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let mut quot = vec![Rational::new(); a.len().saturating_sub(db)];
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let f = (&rem[dr] / &b[db]).complete();
        let k = dr - db;
        for j in 0..=db {
            let s = (&f * &b[j]).complete();
            rem[k + j] -= s;
        }
        quot[k] = f;
    }
    (poly_trim(quot), poly_trim(rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycRational::root_of_unity(4, 1);
        let m1 = i.mul(&i).unwrap();
        assert_eq!(m1, CycRational::from_i64(-1, 4));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        // (1 + zeta_3) + zeta_3^2 = 0
        let one = CycRational::one(3);
        let z = CycRational::root_of_unity(3, 1);
        let z2 = CycRational::root_of_unity(3, 2);
        let s = one.add(&z).unwrap().add(&z2).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_one_minus_two_i() {
        // (1 - 2 zeta_4)^{-1} = (1 + 2 zeta_4)/5
        let i = CycRational::root_of_unity(4, 1);
        let a = CycRational::one(4).sub(&i.mul_rational(&Rational::from(2))).unwrap();
        let inv = a.inverse().unwrap();
        let expect = CycRational::one(4)
            .add(&i.mul_rational(&Rational::from(2)))
            .unwrap()
            .mul_rational(&Rational::from((1, 5)));
        assert_eq!(inv, expect);
        // and the defining property
        let prod = a.mul(&inv).unwrap();
        assert_eq!(prod, CycRational::one(4));
    }

    #[test]
    fn mismatched_orders_error() {
        let a = CycRational::one(3);
        let b = CycRational::one(4);
        assert!(matches!(a.add(&b), Err(Error::OrderMismatch(3, 4))));
    }

    #[test]
    fn division_by_zero_errors() {
        let z = CycRational::zero(5);
        assert!(matches!(z.inverse(), Err(Error::DivisionByZero(5))));
    }

    #[test]
    fn lift_examples() {
        let one = CycRational::one(1).lift(12).unwrap();
        assert_eq!(one, CycRational::one(12));
        // zeta_3 in Q(zeta_6) is zeta_6^2
        let z3 = CycRational::root_of_unity(3, 1).lift(6).unwrap();
        assert_eq!(z3, CycRational::root_of_unity(6, 2));
        // zeta_2 = -1 in Q(zeta_4)
        let z2 = CycRational::root_of_unity(2, 1).lift(4).unwrap();
        assert_eq!(z2, CycRational::from_i64(-1, 4));
        assert!(CycRational::one(4).lift(6).is_err());
    }

    #[test]
    fn embed_examples() {
        let bits = 128;
        let i = CycRational::root_of_unity(4, 1).embed(1, bits).unwrap();
        assert!(i.re.within(1e-30));
        assert!(i.im.sub(&BigReal::from_i64(1, bits)).within(1e-30));

        // zeta_3 + zeta_3^2 = -1
        let s = CycRational::root_of_unity(3, 1)
            .add(&CycRational::root_of_unity(3, 2))
            .unwrap()
            .embed(1, bits)
            .unwrap();
        assert!(s.re.add(&BigReal::from_i64(1, bits)).within(1e-30));
        assert!(s.im.within(1e-30));

        // (1 + 2 zeta_4)/5 -> 0.2 + 0.4i
        let v = CycRational::one(4)
            .add(&CycRational::root_of_unity(4, 1).mul_rational(&Rational::from(2)))
            .unwrap()
            .mul_rational(&Rational::from((1, 5)))
            .embed(1, bits)
            .unwrap();
        let fifth = BigReal::from_rational(&Rational::from((1, 5)), bits);
        assert!(v.re.sub(&fifth).within(1e-30));
        assert!(v.im.sub(&fifth.mul_i64(2)).within(1e-30));
    }

    #[test]
    fn galois_conjugation() {
        let z = CycRational::root_of_unity(5, 1);
        let c = z.conj();
        assert_eq!(c, CycRational::root_of_unity(5, 4));
        let prod = z.mul(&c).unwrap();
        assert_eq!(prod, CycRational::one(5));
    }
}
