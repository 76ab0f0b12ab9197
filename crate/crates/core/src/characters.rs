//! The Dirichlet character group modulo N: cyclic decomposition of
//! (Z/NZ)^*, enumeration of characters with exact values in Q(zeta_m),
//! conductor and parity, induction/restriction between moduli, and
//! numeric Gauss sums.

use crate::error::{Error, Result};
use crate::exact::cyc::{gcd_u64, CycRational};
use crate::exact::poly::euler_phi;
use crate::num::{BigComplex, BigReal, PrecisionContext};
use std::collections::HashMap;
use std::sync::Arc;

/// Cyclic decomposition of (Z/NZ)^*: a list of generators with their
/// orders, a sorted list of units, and the discrete-log table mapping
/// each unit to its exponent vector.
#[derive(Debug)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    units: Vec<u64>,
    dlog: HashMap<u64, Vec<u64>>,
    /// lcm of the generator orders (group exponent); 1 for the trivial group.
    exponent: u64,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// Primitive root modulo an odd prime power.
fn primitive_root(pe: u64, p: u64) -> u64 {
    let phi = euler_phi(pe);
    let factors: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| {
            g % p != 0 && factors.iter().all(|&q| pow_mod(g, phi / q, pe) != 1)
        })
        .expect("primitive root exists for odd prime powers")
}

impl UnitGroupStructure {
    pub fn new(modulus: u64) -> Arc<Self> {
        assert!(modulus >= 1);
        let mut components: Vec<(u64, u64)> = Vec::new(); // (generator mod N, order)
        for (p, e) in factorize(modulus) {
            let pe = p.pow(e);
            let rest = modulus / pe;
            let lift = |g: u64| -> u64 {
                if rest == 1 {
                    g % modulus
                } else {
                    // x = g mod pe, x = 1 mod rest
                    let minv = inv_mod(rest % pe, pe);
                    (1 + (g + pe - 1) % pe * minv % pe * rest) % modulus
                }
            };
            if p == 2 {
                match e {
                    1 => {}
                    2 => components.push((lift(3), 2)),
                    _ => {
                        components.push((lift(pe - 1), 2));
                        components.push((lift(5), 1 << (e - 2)));
                    }
                }
            } else {
                components.push((lift(primitive_root(pe, p)), euler_phi(pe)));
            }
        }
        let units: Vec<u64> = if modulus == 1 {
            vec![0]
        } else {
            (1..modulus).filter(|&a| gcd_u64(a, modulus) == 1).collect()
        };
        // discrete logs by enumerating all generator-power products
        let mut dlog = HashMap::with_capacity(units.len());
        let orders: Vec<u64> = components.iter().map(|&(_, o)| o).collect();
        let generators: Vec<u64> = components.iter().map(|&(g, _)| g).collect();
        let mut stack = vec![(0usize, if modulus == 1 { 0 } else { 1 }, Vec::new())];
        while let Some((i, acc, exps)) = stack.pop() {
            if i == components.len() {
                dlog.insert(acc, exps);
                continue;
            }
            let (g, o) = components[i];
            let mut cur = acc;
            for t in 0..o {
                let mut e2 = exps.clone();
                e2.push(t);
                stack.push((i + 1, cur, e2));
                cur = cur * g % modulus;
            }
        }
        debug_assert_eq!(dlog.len(), units.len());
        let exponent = orders.iter().fold(1, |a, &b| lcm_u64(a, b));
        Arc::new(UnitGroupStructure {
            modulus,
            generators,
            orders,
            units,
            dlog,
            exponent,
        })
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    pub fn phi(&self) -> u64 {
        self.units.len() as u64
    }

    pub fn exponent_vector(&self, a: u64) -> Option<&Vec<u64>> {
        let r = a % self.modulus.max(1);
        self.dlog.get(&r)
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    // extended Euclid; gcd(a, m) = 1
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i64) as u64
}

/// A Dirichlet character modulo N, indexed by an exponent vector against
/// the group's fixed generator list. Conductor, parity and order are
/// computed at construction.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroupStructure>,
    exps: Vec<u64>,
    order: u64,
    parity: u8,
    conductor: u64,
}

impl std::fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.group.modulus)
            .field("exps", &self.exps)
            .field("order", &self.order)
            .field("parity", &self.parity)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exps == other.exps
    }
}
impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroupStructure>, exps: Vec<u64>) -> Self {
        assert_eq!(exps.len(), group.orders.len());
        for (e, o) in exps.iter().zip(&group.orders) {
            assert!(e < o);
        }
        let order = exps
            .iter()
            .zip(&group.orders)
            .map(|(&e, &o)| o / gcd_u64(e, o))
            .fold(1, lcm_u64);
        let mut chi = DirichletCharacter {
            group,
            exps,
            order,
            parity: 0,
            conductor: 1,
        };
        chi.parity = chi.compute_parity();
        chi.conductor = chi.compute_conductor();
        chi
    }

    pub fn trivial(n: u64) -> Self {
        let group = UnitGroupStructure::new(n);
        let exps = vec![0; group.orders.len()];
        Self::new(group, exps)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &Arc<UnitGroupStructure> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// 0 for even (chi(-1) = 1), 1 for odd.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == 0
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    /// Exponent t with chi(a) = zeta_lambda^t where lambda is the group
    /// exponent; None when gcd(a, N) > 1.
    fn value_exponent(&self, a: i64) -> Option<u64> {
        let n = self.group.modulus;
        let r = a.rem_euclid(n.max(1) as i64) as u64;
        let ev = self.group.exponent_vector(r)?;
        let lambda = self.group.exponent;
        let mut t = 0u64;
        for ((e, d), o) in self.exps.iter().zip(ev).zip(&self.group.orders) {
            t = (t + e * d % lambda * (lambda / o)) % lambda;
        }
        Some(t)
    }

    /// Exact chi(a) in Q(zeta_m), m the character order; exact 0 when
    /// gcd(a, N) > 1.
    pub fn value(&self, a: i64) -> CycRational {
        let m = self.order as u32;
        match self.value_exponent(a) {
            None => CycRational::zero(m),
            Some(t) => {
                let lambda = self.group.exponent;
                // t/lambda = (t m / lambda)/m with integral numerator
                CycRational::root_of_unity(m, (t * self.order / lambda) as i64)
            }
        }
    }

    /// chi(a) conjugated, i.e. chi^{-1}(a) on units.
    pub fn value_inv(&self, a: i64) -> CycRational {
        self.value(a).conj()
    }

    fn compute_parity(&self) -> u8 {
        let n = self.group.modulus;
        if n <= 2 {
            return 0;
        }
        match self.value_exponent(n as i64 - 1) {
            Some(t) => {
                // chi(-1) = zeta_lambda^t is +-1
                if t == 0 {
                    0
                } else {
                    debug_assert_eq!(t * 2, self.group.exponent);
                    1
                }
            }
            None => 0,
        }
    }

    fn compute_conductor(&self) -> u64 {
        let n = self.group.modulus;
        if self.is_trivial() {
            return 1;
        }
        'f: for f in (1..=n).filter(|d| n.is_multiple_of(*d)) {
            // chi must be 1 on every unit congruent to 1 mod f
            for &u in self.group.units() {
                if u % f == 1 % f.max(1) && self.value_exponent(u as i64) != Some(0) {
                    continue 'f;
                }
            }
            return f;
        }
        n
    }

    /// chi^s.
    pub fn pow(&self, s: u64) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| e * (s % o) % o)
            .collect();
        DirichletCharacter::new(self.group.clone(), exps)
    }

    /// Pointwise product of two characters of the same modulus.
    pub fn mul(&self, other: &DirichletCharacter) -> Result<DirichletCharacter> {
        if self.group.modulus != other.group.modulus {
            return Err(Error::Divisibility(format!(
                "character product needs equal moduli ({} vs {})",
                self.group.modulus, other.group.modulus
            )));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.group.orders)
            .map(|((&a, &b), &o)| (a + b) % o)
            .collect();
        Ok(DirichletCharacter::new(self.group.clone(), exps))
    }

    /// Complex conjugate character chi^{-1}.
    pub fn inverse(&self) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| if e == 0 { 0 } else { o - e })
            .collect();
        DirichletCharacter::new(self.group.clone(), exps)
    }

    /// The character modulo M (a multiple of this modulus) agreeing with
    /// this one on common units.
    pub fn induce(&self, m: u64) -> Result<DirichletCharacter> {
        let n = self.group.modulus;
        if !m.is_multiple_of(n) {
            return Err(Error::Divisibility(format!(
                "modulus {n} does not divide induction target {m}"
            )));
        }
        let group = UnitGroupStructure::new(m);
        let exps = self.transfer_exponents(&group)?;
        Ok(DirichletCharacter::new(group, exps))
    }

    /// The character modulo M (conductor | M | modulus) agreeing with
    /// this one on residues coprime to both moduli.
    pub fn restrict(&self, m: u64) -> Result<DirichletCharacter> {
        let n = self.group.modulus;
        if !n.is_multiple_of(m) || !m.is_multiple_of(self.conductor) {
            return Err(Error::Divisibility(format!(
                "need cond {} | {m} | modulus {n}",
                self.conductor
            )));
        }
        let group = UnitGroupStructure::new(m);
        let exps = self.transfer_exponents(&group)?;
        Ok(DirichletCharacter::new(group, exps))
    }

    /// Express this character's values on the generators of another unit
    /// group (valid whenever the conductor divides the target modulus).
    fn transfer_exponents(&self, group: &UnitGroupStructure) -> Result<Vec<u64>> {
        let n = self.group.modulus;
        let lambda = self.group.exponent;
        let mut exps = Vec::with_capacity(group.generators.len());
        for (&g, &o) in group.generators.iter().zip(&group.orders) {
            // find a representative of g (mod target modulus) coprime to n
            let mut rep = None;
            let mut a = g;
            loop {
                if gcd_u64(a % n.max(1), n) == 1 || n == 1 {
                    rep = Some(a);
                    break;
                }
                a += group.modulus;
                if a > g + n * group.modulus {
                    break;
                }
            }
            let a = rep.ok_or_else(|| {
                Error::Divisibility(format!("no coprime representative of {g} mod {n}"))
            })?;
            let t = self
                .value_exponent(a as i64)
                .expect("representative is a unit");
            // chi(a)^o must be 1
            if !(t * o).is_multiple_of(lambda) {
                return Err(Error::Divisibility(format!(
                    "character does not factor through modulus {}",
                    group.modulus
                )));
            }
            exps.push(t * o / lambda % o);
        }
        Ok(exps)
    }

    /// Value of the underlying primitive character at `a` (defined
    /// whenever gcd(a, conductor) = 1, even if gcd(a, modulus) > 1).
    pub fn primitive_value(&self, a: i64) -> CycRational {
        let f = self.conductor;
        let n = self.group.modulus;
        let r = a.rem_euclid(f.max(1) as i64) as u64;
        if f == 1 {
            return CycRational::one(self.order as u32);
        }
        if gcd_u64(r, f) != 1 {
            return CycRational::zero(self.order as u32);
        }
        // find b = r (mod f) with gcd(b, n) = 1
        let mut b = r;
        while gcd_u64(b, n) != 1 {
            b += f;
        }
        self.value(b as i64)
    }

    /// Gauss sum tau(chi) = sum over units a mod N of chi(a) e^{2 pi i a/N}.
    pub fn gauss_sum(&self, ctx: &PrecisionContext) -> BigComplex {
        let bits = ctx.bits();
        let n = self.group.modulus;
        let two_pi = BigReal::pi(bits).mul_i64(2);
        let mut acc = BigComplex::zero(bits);
        for &a in self.group.units() {
            let chi = self.value(a as i64);
            if chi.is_zero() {
                continue;
            }
            let w = chi.embed(1, bits).expect("j=1 embedding");
            let angle = two_pi.mul_i64(a as i64).div_u64(n);
            let e = BigComplex {
                re: angle.cos(),
                im: angle.sin(),
            };
            acc = acc.add(&w.mul(&e));
        }
        acc
    }
}

/// All phi(N) characters modulo N, in the deterministic lexicographic
/// order of their exponent vectors; the trivial character comes first.
pub fn enumerate_characters(n: u64) -> Vec<DirichletCharacter> {
    let group = UnitGroupStructure::new(n);
    let mut out = Vec::with_capacity(group.phi() as usize);
    let k = group.orders.len();
    let mut exps = vec![0u64; k];
    loop {
        out.push(DirichletCharacter::new(group.clone(), exps.clone()));
        // odometer increment
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < group.orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// The character modulo N with a prescribed value zeta_m^t at a
/// prescribed unit (used to pin down normalizations like chi_5(2) = i).
pub fn character_with_value(
    n: u64,
    at: u64,
    order: u64,
    exp_of_order: u64,
) -> Option<DirichletCharacter> {
    enumerate_characters(n).into_iter().find(|chi| {
        chi.order() == order
            && chi.value(at as i64) == CycRational::root_of_unity(order as u32, exp_of_order as i64)
    })
}
