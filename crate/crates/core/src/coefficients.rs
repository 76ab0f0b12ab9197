//! Exact coefficient tables attached to each Dirichlet character: the
//! modulus N_chi carrying its L-value, the weights mu and delta whose
//! product expands m(f_N), the weight epsilon with r = epsilon * delta
//! expanding m(f_N*) - m(f_N), and the two-modulus Euler relations that
//! the partial L-values satisfy.
//!
//! All range conditions are exact integer comparisons; the k = N/4
//! boundary belongs to the upper range. Values of chi at 2 are taken at
//! the sub-modulus named by each table case (where 2 is a unit thanks to
//! the case's conductor guard); if a guard were ever violated the value
//! degenerates to 0 and the row is flagged for review instead of
//! silently contributing.

use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exact::cyc::{gcd_u64, CycRational};
use crate::exact::poly::euler_phi;
use crate::lseries::{partial0_value, partial1_value, transport};
use crate::num::{BigReal, PrecisionContext};
use rug::Rational;

/// Which row of the delta table fired; used for reporting and for the
/// coverage assertion in the acceptance suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaCase {
    OddModulusEven,
    OddModulusOdd,
    TwiceOddEven,
    TwiceOddOdd,
    FourExactEven,
    FourExactOdd,
    EightEvenCondHalf,
    EightEvenCondQuarter,
    EightOddCondHalf,
    EightOddCondQuarter,
    Otherwise,
}

impl DeltaCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            DeltaCase::OddModulusEven => "odd-N-even",
            DeltaCase::OddModulusOdd => "odd-N-odd",
            DeltaCase::TwiceOddEven => "2||N-even",
            DeltaCase::TwiceOddOdd => "2||N-odd",
            DeltaCase::FourExactEven => "4||N-even",
            DeltaCase::FourExactOdd => "4||N-odd",
            DeltaCase::EightEvenCondHalf => "8|N-even-cond-half",
            DeltaCase::EightEvenCondQuarter => "8|N-even-cond-quarter",
            DeltaCase::EightOddCondHalf => "8|N-odd-cond-half",
            DeltaCase::EightOddCondQuarter => "8|N-odd-cond-quarter",
            DeltaCase::Otherwise => "otherwise",
        }
    }
}

/// One character's worth of exact coefficients.
#[derive(Debug, Clone)]
pub struct CoefficientRow {
    pub chi: DirichletCharacter,
    pub epsilon: u8,
    pub n_chi: u64,
    pub mu: CycRational,
    pub delta: CycRational,
    pub epsilon_coeff: CycRational,
    pub r: CycRational,
    pub delta_case: DeltaCase,
    pub review_flag: bool,
}

/// The full table for one modulus: exactly phi(N) rows.
#[derive(Debug)]
pub struct CoefficientTable {
    pub modulus: u64,
    pub rows: Vec<CoefficientRow>,
}

/// The modulus whose partial L-values carry chi's contribution: N/4
/// exactly when 4||N, chi even, and cond(chi) | N/4; otherwise N.
pub fn n_chi(n: u64, chi: &DirichletCharacter) -> u64 {
    debug_assert_eq!(chi.modulus(), n);
    if n.is_multiple_of(4) && !n.is_multiple_of(8) && chi.is_even() && (n / 4).is_multiple_of(chi.conductor()) {
        n / 4
    } else {
        n
    }
}

fn units_below_quarter(n: u64) -> impl Iterator<Item = u64> {
    (1..n).filter(move |&k| 4 * k < n && gcd_u64(k, n) == 1)
}

fn units_quarter_to_half(n: u64) -> impl Iterator<Item = u64> {
    (1..n).filter(move |&k| 4 * k >= n && 2 * k < n && gcd_u64(k, n) == 1)
}

/// mu: for even chi the (N-4k)-weighted signed sum of chi^{-1}(k) over
/// the two ranges split at N/4; for odd chi the unweighted version.
pub fn mu_coefficient(n: u64, chi: &DirichletCharacter) -> CycRational {
    let m = chi.order() as u32;
    let mut acc = CycRational::zero(m);
    let weighted = chi.is_even();
    for k in units_below_quarter(n) {
        let mut t = chi.value_inv(k as i64);
        if weighted {
            t = t.mul_rational(&Rational::from(n as i64 - 4 * k as i64));
        }
        acc = acc.add(&t).expect("same order");
    }
    for k in units_quarter_to_half(n) {
        let mut t = chi.value_inv(k as i64);
        if weighted {
            t = t.mul_rational(&Rational::from(n as i64 - 4 * k as i64));
        }
        acc = acc.sub(&t).expect("same order");
    }
    acc
}

/// epsilon: for odd chi, minus the mu-pattern; for even chi, N times the
/// sum over k with |4k-N| > N/3 minus the mu-pattern.
pub fn epsilon_coefficient(n: u64, chi: &DirichletCharacter) -> CycRational {
    let m = chi.order() as u32;
    if chi.is_even() {
        let mut acc = CycRational::zero(m);
        for k in (1..n).filter(|&k| 2 * k < n && gcd_u64(k, n) == 1) {
            // |4k - N| > N/3 as 3|4k - N| > N
            if (4 * k as i64 - n as i64).unsigned_abs() * 3 > n {
                acc = acc
                    .add(&chi.value_inv(k as i64).mul_rational(&Rational::from(n)))
                    .expect("same order");
            }
        }
        acc.sub(&mu_coefficient(n, chi)).expect("same order")
    } else {
        mu_coefficient(n, chi).neg()
    }
}

/// Value of chi (or its conjugate) at 2, read at the sub-modulus `m`
/// where the relevant table case guarantees 2 is a unit.
fn chi_at_two(chi: &DirichletCharacter, m: u64, inverse: bool) -> Result<(CycRational, bool)> {
    let moved = transport(chi, m)?;
    let v = if inverse {
        moved.value_inv(2)
    } else {
        moved.value(2)
    };
    let flagged = v.is_zero();
    let v = v.lift(chi.order() as u32).unwrap_or(v);
    Ok((v, flagged))
}

/// The ten-case delta table keyed on the 2-adic shape of N, the parity
/// of chi, and conductor divisibility.
pub fn delta_coefficient(
    n: u64,
    chi: &DirichletCharacter,
) -> Result<(CycRational, DeltaCase, bool)> {
    let m = chi.order() as u32;
    let phi_n = euler_phi(n) as i64;
    let cond = chi.conductor();
    let even = chi.is_even();
    if n % 2 == 1 {
        let (v2, flag) = chi_at_two(chi, n, true)?;
        let one = CycRational::one(m);
        if even {
            // v2 (1 - v2) / (2 N phi)
            let val = v2
                .mul(&one.sub(&v2).expect("order"))
                .expect("order")
                .mul_rational(&Rational::from((1, 2 * n as i64 * phi_n)));
            return Ok((val, DeltaCase::OddModulusEven, flag));
        }
        // 4 v2 (1 - v2/2) / (N phi)
        let val = v2
            .mul(&one.sub(&v2.mul_rational(&Rational::from((1, 2)))).expect("order"))
            .expect("order")
            .mul_rational(&Rational::from((4, n as i64 * phi_n)));
        return Ok((val, DeltaCase::OddModulusOdd, flag));
    }
    if !n.is_multiple_of(4) {
        // 2 || N
        if (n / 2).is_multiple_of(cond) {
            let (v2, flag) = chi_at_two(chi, n / 2, true)?;
            let val = if even {
                v2.neg().mul_rational(&Rational::from((1, 2 * n as i64 * phi_n)))
            } else {
                v2.neg().mul_rational(&Rational::from((4, n as i64 * phi_n)))
            };
            return Ok((
                val,
                if even {
                    DeltaCase::TwiceOddEven
                } else {
                    DeltaCase::TwiceOddOdd
                },
                flag,
            ));
        }
        return Ok((CycRational::zero(m), DeltaCase::Otherwise, false));
    }
    if !n.is_multiple_of(8) {
        // 4 || N; these two cases use chi(2), not its conjugate
        if (n / 4).is_multiple_of(cond) {
            let q = n / 4;
            let phi_q = euler_phi(q) as i64;
            let (w, flag) = chi_at_two(chi, q, false)?;
            if even {
                let val = w.neg().mul_rational(&Rational::from((1, 2 * phi_q * n as i64)));
                return Ok((val, DeltaCase::FourExactEven, flag));
            }
            // -4 w / (phi(N/4) N/4) * 1/(1 - 2w)
            let denom = CycRational::one(m)
                .sub(&w.mul_rational(&Rational::from(2)))
                .expect("order");
            let val = w
                .neg()
                .mul_rational(&Rational::from((4, phi_q * q as i64)))
                .div(&denom)?;
            return Ok((val, DeltaCase::FourExactOdd, flag));
        }
        return Ok((CycRational::zero(m), DeltaCase::Otherwise, false));
    }
    // 8 | N
    let q = n / 4;
    let phi_q = euler_phi(q) as i64;
    let half = n / 2;
    let cond_div_half = half.is_multiple_of(cond);
    let cond_div_quarter = q.is_multiple_of(cond);
    let (num, case) = if cond_div_half && !cond_div_quarter {
        if even {
            (Rational::from((1, 4 * n as i64 * phi_q)), DeltaCase::EightEvenCondHalf)
        } else {
            (Rational::from((1, phi_q * q as i64)), DeltaCase::EightOddCondHalf)
        }
    } else if cond_div_quarter {
        if even {
            (
                Rational::from((-1, 4 * n as i64 * phi_q)),
                DeltaCase::EightEvenCondQuarter,
            )
        } else {
            (Rational::from((-1, phi_q * q as i64)), DeltaCase::EightOddCondQuarter)
        }
    } else {
        return Ok((CycRational::zero(m), DeltaCase::Otherwise, false));
    };
    Ok((CycRational::from_rational(num, m), case, false))
}

/// r = epsilon * delta, the coefficient of L^{(N_chi)'}(-eps, chi) in
/// m(f_N*) - m(f_N).
pub fn r_coefficient(n: u64, chi: &DirichletCharacter) -> Result<CycRational> {
    let (delta, _, _) = delta_coefficient(n, chi)?;
    epsilon_coefficient(n, chi).mul(&delta)}

impl CoefficientTable {
    pub fn build(n: u64) -> Result<CoefficientTable> {
        let mut rows = Vec::new();
        for chi in enumerate_characters(n) {
            let mu = mu_coefficient(n, &chi);
            let (delta, delta_case, review_flag) = delta_coefficient(n, &chi)?;
            let epsilon_coeff = epsilon_coefficient(n, &chi);
            let r = epsilon_coeff.mul(&delta)?;
            rows.push(CoefficientRow {
                epsilon: chi.parity(),
                n_chi: n_chi(n, &chi),
                mu,
                delta,
                epsilon_coeff,
                r,
                delta_case,
                review_flag,
                chi,
            });
        }
        Ok(CoefficientTable { modulus: n, rows })
    }
}

/// Residuals of the two Euler relations at (N, p, k): the Galois-kernel
/// sum of partial values at modulus N against the partial value at
/// modulus N' = N/p, with the factor (1 - sigma_p^{-1}) at epsilon = 0
/// and (1 - p sigma_p^{-1}) at epsilon = 1 when p no longer divides N'.
pub fn euler_relation_check(
    n: u64,
    p: u64,
    k: u64,
    ctx: &PrecisionContext,
) -> Result<(BigReal, BigReal)> {
    if !n.is_multiple_of(p) {
        return Err(Error::Divisibility(format!("{p} does not divide {n}")));
    }
    let n_prime = n / p;
    if n_prime < 3 {
        return Err(Error::ModulusTooSmall {
            min: 3,
            got: n_prime,
        });
    }
    if gcd_u64(k % n, n) != 1 {
        return Err(Error::NotAUnit { k, n });
    }
    let mut lhs0 = BigReal::zero(ctx.bits());
    let mut lhs1 = BigReal::zero(ctx.bits());
    for s in (1..n).filter(|&s| s % n_prime == 1 && gcd_u64(s, n) == 1) {
        let idx = s * (k % n) % n;
        lhs0 = lhs0.add(&partial0_value(n, idx, ctx)?);
        lhs1 = lhs1.add(&partial1_value(n, idx, ctx)?);
    }
    let kk = k % n_prime;
    let (rhs0, rhs1) = if n_prime.is_multiple_of(p) {
        (
            partial0_value(n_prime, kk, ctx)?,
            partial1_value(n_prime, kk, ctx)?,
        )
    } else {
        // k p^{-1} mod N'
        let pinv = mod_inverse(p % n_prime, n_prime);
        let shifted = kk * pinv % n_prime;
        (
            partial0_value(n_prime, kk, ctx)?.sub(&partial0_value(n_prime, shifted, ctx)?),
            partial1_value(n_prime, kk, ctx)?
                .sub(&partial1_value(n_prime, shifted, ctx)?.mul_i64(p as i64)),
        )
    };
    Ok((lhs0.sub(&rhs0).abs(), lhs1.sub(&rhs1).abs()))
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of non-unit");
    t.rem_euclid(m as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_with_value;

    fn chi3() -> DirichletCharacter {
        enumerate_characters(3)
            .into_iter()
            .find(|c| !c.is_trivial())
            .unwrap()
    }

    #[test]
    fn n_chi_cases() {
        for chi in enumerate_characters(5) {
            assert_eq!(n_chi(5, &chi), 5);
        }
        // N=12: even chi with conductor dividing 3 drops to modulus 3
        for chi in enumerate_characters(12) {
            let expect = if chi.is_even() && 3 % chi.conductor() == 0 {
                3
            } else {
                12
            };
            assert_eq!(n_chi(12, &chi), expect, "chi = {chi:?}");
        }
        for chi in enumerate_characters(8) {
            assert_eq!(n_chi(8, &chi), 8);
        }
    }

    #[test]
    fn mu_examples() {
        // N=3, odd chi3: first range empty, second is {1}
        assert_eq!(
            mu_coefficient(3, &chi3()).as_rational().unwrap(),
            Rational::from(-1)
        );
        // N=5, even quadratic: 1 + 3 chi(2) = -2
        let chi52 = enumerate_characters(5)
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap();
        assert_eq!(
            mu_coefficient(5, &chi52).as_rational().unwrap(),
            Rational::from(-2)
        );
        // N=4 trivial: weight (N-4k) kills the only term
        let t4 = DirichletCharacter::trivial(4);
        assert!(mu_coefficient(4, &t4).is_zero());
    }

    #[test]
    fn delta_examples() {
        // N=3 odd chi3: -1
        let (d, case, flag) = delta_coefficient(3, &chi3()).unwrap();
        assert_eq!(d.as_rational().unwrap(), Rational::from(-1));
        assert_eq!(case, DeltaCase::OddModulusOdd);
        assert!(!flag);
        // N=3 trivial even: the (1 - chi(2)) factor vanishes
        let (d, case, _) = delta_coefficient(3, &DirichletCharacter::trivial(3)).unwrap();
        assert!(d.is_zero());
        assert_eq!(case, DeltaCase::OddModulusEven);
        // N=20, odd chi with conductor 20 falls through every guard
        let chi20 = enumerate_characters(20)
            .into_iter()
            .find(|c| !c.is_even() && c.conductor() == 20)
            .unwrap();
        let (d, case, _) = delta_coefficient(20, &chi20).unwrap();
        assert!(d.is_zero());
        assert_eq!(case, DeltaCase::Otherwise);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(
            epsilon_coefficient(3, &chi3()).as_rational().unwrap(),
            Rational::from(1)
        );
        // N=5 even quadratic: 5 chi(2) - (1 + 3 chi(2)) = -3
        let chi52 = enumerate_characters(5)
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap();
        assert_eq!(
            epsilon_coefficient(5, &chi52).as_rational().unwrap(),
            Rational::from(-3)
        );
        // odd chi mod 4: both ranges reduce to chi(1)
        let chi4 = enumerate_characters(4)
            .into_iter()
            .find(|c| !c.is_trivial())
            .unwrap();
        assert_eq!(
            epsilon_coefficient(4, &chi4).as_rational().unwrap(),
            Rational::from(1)
        );
    }

    #[test]
    fn r_examples() {
        // N=3: r = -1, so m(f3*) - m(f3) = -L'(-1,chi3)
        assert_eq!(
            r_coefficient(3, &chi3()).unwrap().as_rational().unwrap(),
            Rational::from(-1)
        );
        // N=5, odd chi5 with chi5(2)=i: mu = 1+i, delta = (1-2i)/10,
        // eps = -(1+i), r = -(1+i)(1-2i)/10 = (-3+i)/10
        let chi5 = character_with_value(5, 2, 4, 1).unwrap();
        let mu = mu_coefficient(5, &chi5);
        let i = CycRational::root_of_unity(4, 1);
        let one_plus_i = CycRational::one(4).add(&i).unwrap();
        assert_eq!(mu, one_plus_i);
        let r = r_coefficient(5, &chi5).unwrap();
        // (-3+i)/10
        let expect = CycRational::from_i64(-3, 4)
            .add(&i)
            .unwrap()
            .mul_rational(&Rational::from((1, 10)));
        assert_eq!(r, expect);
    }

    #[test]
    fn euler_relation_spot_checks() {
        let ctx = PrecisionContext::new(192);
        for (n, p, k) in [(9u64, 3u64, 1u64), (15, 5, 1), (10, 2, 1)] {
            let (r0, r1) = euler_relation_check(n, p, k, &ctx).unwrap();
            assert!(r0.value().to_f64() < 1e-40, "eps=0 residual at ({n},{p},{k})");
            assert!(r1.value().to_f64() < 1e-40, "eps=1 residual at ({n},{p},{k})");
        }
        assert!(euler_relation_check(6, 3, 1, &PrecisionContext::new(64)).is_err());
    }

    #[test]
    fn table_has_phi_rows() {
        for n in [3u64, 8, 12, 20] {
            let t = CoefficientTable::build(n).unwrap();
            assert_eq!(t.rows.len() as u64, euler_phi(n));
            for row in &t.rows {
                assert_eq!(row.r, row.epsilon_coeff.mul(&row.delta).unwrap());
                assert!(!row.review_flag, "flagged row at N={n}");
            }
        }
    }
}
