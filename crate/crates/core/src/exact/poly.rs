//! Integer polynomials, cyclotomic polynomials Phi_N, and the real
//! cyclotomic polynomial Psi_N (minimal polynomial of 2cos(2*pi/N)).

use crate::error::{Error, Result};
use rug::{Complete, Integer};
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

/// Dense integer polynomial, lowest-degree coefficient first. The zero
/// polynomial is the empty vector; otherwise the leading coefficient is
/// non-zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// x^n - 1
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![Integer::new(); n + 1];
        c[0] = Integer::from(-1);
        c[n] = Integer::from(1);
        IntPolynomial { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval_i64(&self, x: i64) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn mul(&self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += (a * b).complete();
            }
        }
        IntPolynomial::from_coeffs(out)
    }

    /// Exact division by a monic divisor. Panics if the division leaves a
    /// remainder (callers only divide known multiples).
    pub fn exact_div_monic(&self, div: &IntPolynomial) -> IntPolynomial {
        assert!(!div.is_zero() && div.coeffs.last().unwrap() == &1u32);
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let n = self.degree();
        let m = div.degree();
        assert!(n >= m);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::new(); n - m + 1];
        for k in (0..=n - m).rev() {
            let q = rem[k + m].clone();
            if q.cmp0() != std::cmp::Ordering::Equal {
                for j in 0..=m {
                    rem[k + j] -= (&q * &div.coeffs[j]).complete();
                }
            }
            quot[k] = q;
        }
        assert!(rem.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal), "division left a remainder");
        IntPolynomial::from_coeffs(quot)
    }
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

static PHI_CACHE: LazyLock<Mutex<HashMap<u32, IntPolynomial>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// The d-th cyclotomic polynomial, by recursive division of x^d - 1 by
/// the cyclotomics of the proper divisors. Cached.
pub fn cyclotomic_polynomial(d: u32) -> IntPolynomial {
    assert!(d >= 1);
    if let Some(p) = PHI_CACHE.lock().unwrap().get(&d) {
        return p.clone();
    }
    let result = if d == 1 {
        IntPolynomial::from_i64(&[-1, 1])
    } else {
        let mut acc = IntPolynomial::x_pow_minus_one(d as usize);
        for e in divisors(d) {
            if e != d {
                acc = acc.exact_div_monic(&cyclotomic_polynomial(e));
            }
        }
        acc
    };
    PHI_CACHE
        .lock()
        .unwrap()
        .insert(d, result.clone());
    result
}

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(n).binomial(k as u32)
}

/// Psi_N, the minimal polynomial of zeta_N + zeta_N^{-1}: the unique
/// monic P of degree phi(N)/2 with x^{phi(N)/2} P(x + 1/x) = Phi_N(x).
///
/// Computed by peeling the palindromic coefficient vector of Phi_N
/// against the expansion (x + 1/x)^i, entirely in integers.
pub fn real_cyclotomic_polynomial(n_mod: u32) -> Result<IntPolynomial> {
    if n_mod < 3 {
        return Err(Error::ModulusTooSmall {
            min: 3,
            got: n_mod as u64,
        });
    }
    let phi = cyclotomic_polynomial(n_mod);
    let deg = phi.degree();
    debug_assert_eq!(deg as u64, euler_phi(n_mod as u64));
    let half = deg / 2;
    // symmetric representation: Phi/x^half = l[0] + sum l[i] (x^i + x^-i)
    let mut l: Vec<Integer> = (0..=half).map(|i| phi.coeff(half + i)).collect();
    let mut out = vec![Integer::new(); half + 1];
    for i in (1..=half).rev() {
        let a = l[i].clone();
        if a.cmp0() != std::cmp::Ordering::Equal {
            let mut j = i;
            loop {
                let m = (i - j) / 2;
                l[j] -= Integer::from(&a * &binomial(i, m));
                if j < 2 {
                    break;
                }
                j -= 2;
            }
        }
        out[i] = a;
    }
    out[0] = l[0].clone();
    Ok(IntPolynomial::from_coeffs(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(
            cyclotomic_polynomial(12),
            IntPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn psi_small() {
        assert_eq!(
            real_cyclotomic_polynomial(3).unwrap(),
            IntPolynomial::from_i64(&[1, 1])
        );
        assert_eq!(
            real_cyclotomic_polynomial(4).unwrap(),
            IntPolynomial::from_i64(&[0, 1])
        );
        assert_eq!(
            real_cyclotomic_polynomial(5).unwrap(),
            IntPolynomial::from_i64(&[-1, 1, 1])
        );
        assert!(real_cyclotomic_polynomial(2).is_err());
    }

    #[test]
    fn psi_substitution_identity() {
        // Psi_N(x + 1/x) * x^{phi(N)/2} = Phi_N(x), expanded symbolically
        for n in 3u32..=50 {
            let phi = cyclotomic_polynomial(n);
            let psi = real_cyclotomic_polynomial(n).unwrap();
            let half = phi.degree() / 2;
            // accumulate sum_i psi_i (x^2+1)^i x^{half-i}
            let x2p1 = IntPolynomial::from_i64(&[1, 0, 1]);
            let mut acc = IntPolynomial::zero();
            let mut pow = IntPolynomial::from_i64(&[1]);
            let mut parts: Vec<IntPolynomial> = Vec::new();
            for _ in 0..=half {
                parts.push(pow.clone());
                pow = pow.mul(&x2p1);
            }
            for (i, part) in parts.iter().enumerate() {
                // psi_i * (x^2+1)^i * x^{half-i}
                let mut shifted = vec![Integer::new(); half - i];
                let ci = psi.coeff(i);
                for c in part.coeffs() {
                    shifted.push((c * &ci).complete());
                }
                acc = IntPolynomial::from_coeffs(
                    acc.coeffs()
                        .iter()
                        .cloned()
                        .chain(std::iter::repeat(Integer::new()))
                        .zip(shifted.iter().cloned().chain(std::iter::repeat(Integer::new())))
                        .take(shifted.len().max(acc.coeffs().len()))
                        .map(|(a, b)| a + b)
                        .collect(),
                );
            }
            assert_eq!(acc, phi, "Psi/Phi identity failed at N={n}");
        }
    }

    #[test]
    fn phi_at_one_detects_prime_powers() {
        assert_eq!(cyclotomic_polynomial(9).eval_i64(1), 3);
        assert_eq!(cyclotomic_polynomial(16).eval_i64(1), 2);
        assert_eq!(cyclotomic_polynomial(15).eval_i64(1), 1);
        assert_eq!(cyclotomic_polynomial(12).eval_i64(1), 1);
    }
}
