//! Textbook LLL over integer row vectors with exact rational
//! Gram-Schmidt data. Dimensions here are tiny (a dozen rows of
//! 1000-digit entries), so exactness is affordable and removes any
//! floating-point reduction-quality question from the certificates.

use rug::{Complete, Integer, Rational};

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b) {
        acc += (x * y).complete();
    }
    acc
}

struct Gso {
    mu: Vec<Vec<Rational>>,
    norm: Vec<Rational>, // |b*_i|^2
}

fn gram_schmidt(basis: &[Vec<Integer>]) -> Gso {
    let n = basis.len();
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut norm = vec![Rational::new(); n];
    // b*_i . b*_i and mu via the integral Gram matrix
    let mut gram = vec![vec![Integer::new(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            gram[i][j] = dot(&basis[i], &basis[j]);
        }
    }
    let mut star_dots: Vec<Vec<Rational>> = vec![vec![Rational::new(); n]; n];
    for i in 0..n {
        // <b_i, b*_j> = gram[i][j] - sum_{t<j} mu[j][t] <b_i, b*_t>;
        // mu[i][j] must be filled as we go because the diagonal term
        // j = i consumes this row's own coefficients
        for j in 0..=i {
            let mut acc = Rational::from(&gram[i][j]);
            for t in 0..j {
                acc -= (&mu[j][t] * &star_dots[i][t]).complete();
            }
            star_dots[i][j] = acc;
            if j < i {
                mu[i][j] = if norm[j] == 0u32 {
                    Rational::new()
                } else {
                    (&star_dots[i][j] / &norm[j]).complete()
                };
            }
        }
        norm[i] = star_dots[i][i].clone();
    }
    Gso { mu, norm }
}

fn round_rational(q: &Rational) -> Integer {
    let shifted = q + Rational::from((1, 2));
    shifted.floor().numer().clone()
}

/// In-place LLL reduction with Lovasz parameter `delta` (e.g. 99/100).
pub fn lll_reduce(basis: &mut [Vec<Integer>], delta: &Rational) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let mut g = gram_schmidt(basis);
    let mut k = 1usize;
    while k < n {
        // size-reduce row k, updating the mu row as we go so later
        // reductions see the already-subtracted coefficients
        let mut changed = false;
        for j in (0..k).rev() {
            let r = round_rational(&g.mu[k][j]);
            if r.cmp0() != std::cmp::Ordering::Equal {
                let row_j = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&row_j) {
                    *x -= (&r * y).complete();
                }
                let rq = Rational::from(&r);
                for t in 0..j {
                    let adj = Rational::from(&g.mu[j][t] * &rq);
                    g.mu[k][t] -= adj;
                }
                g.mu[k][j] -= &rq;
                changed = true;
            }
        }
        if changed {
            g = gram_schmidt(basis);
        }
        // Lovasz condition
        let lhs = g.norm[k].clone();
        let mu2 = (&g.mu[k][k - 1] * &g.mu[k][k - 1]).complete();
        let rhs = Rational::from(delta - &mu2) * &g.norm[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            g = gram_schmidt(basis);
            k = k.max(2) - 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn norm2(v: &[Integer]) -> Integer {
        dot(v, v)
    }

    #[test]
    fn reduces_a_skewed_basis() {
        let mut b = vec![
            vec![Integer::from(1), Integer::from(1), Integer::from(1)],
            vec![Integer::from(-1), Integer::from(0), Integer::from(2)],
            vec![Integer::from(3), Integer::from(5), Integer::from(6)],
        ];
        let before: Integer = b.iter().map(|v| norm2(v)).max().unwrap();
        lll_reduce(&mut b, &Rational::from((99, 100)));
        let after: Integer = b.iter().map(|v| norm2(v)).max().unwrap();
        assert!(after <= before);
        // the reduced first vector of this classic example has norm 1
        assert_eq!(norm2(&b[0]), 1);
    }

    #[test]
    fn finds_golden_ratio_relation() {
        // 1 + phi - phi^2 = 0, embedded at scale 10^30
        let scale = Integer::from(10).pow(30);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let to_int = |x: f64| {
            let f = rug::Float::with_val(200, x);
            let s = rug::Float::with_val(200, &f * &rug::Float::with_val(200, &scale));
            s.to_integer().unwrap()
        };
        // columns: identity | scaled values
        let phi_f = rug::Float::with_val(200, 5).sqrt();
        let phi_exact = rug::Float::with_val(200, (phi_f.clone() + 1u32) / 2u32);
        let vals = [
            rug::Float::with_val(200, 1),
            phi_exact.clone(),
            rug::Float::with_val(200, phi_exact.square_ref()),
        ];
        let mut b: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                let mut row = vec![Integer::new(); 4];
                row[i] = Integer::from(1);
                let scaled = rug::Float::with_val(260, &vals[i] * &rug::Float::with_val(200, &scale));
                row[3] = scaled.to_integer().unwrap();
                row
            })
            .collect();
        let _ = phi;
        let _ = to_int;
        lll_reduce(&mut b, &Rational::from((99, 100)));
        // some reduced row must be +-(1, 1, -1, tiny)
        let found = b.iter().any(|row| {
            let c: Vec<i64> = row[..3].iter().map(|x| x.to_i64().unwrap_or(9)).collect();
            (c == [1, 1, -1] || c == [-1, -1, 1]) && row[3].clone().abs() < Integer::from(10)
        });
        assert!(found, "rows: {b:?}");
    }
}
