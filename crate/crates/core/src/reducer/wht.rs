//! Tables of `2^M` values to multilinear spin polynomials.
//!
//! A table indexed by mask (bit `i` set when spin `i` is -1) is the unique
//! multilinear polynomial `P(s) = sum_t f(t) prod_{i in t} s_i` with
//! `f(t) = 2^-M sum_m table[m] (-1)^popcount(t & m)`: a Walsh–Hadamard
//! transform scaled by `1/2^M`.

use crate::error::{Error, Result};
use crate::pubo::PuboPolynomial;

/// Magnitude below which assembled coefficients are dropped as round-off.
pub const COEFF_PRUNE_EPS: f64 = 1e-9;

/// In-place unnormalized fast Walsh–Hadamard transform.
pub fn fwht(data: &mut [f64]) {
    let n = data.len();
    assert!(n.is_power_of_two() || n == 0, "length {n} is not a power of two");
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Multilinear coefficients `f(t)` of a table, indexed by term mask `t`.
pub fn walsh_coefficients(table: &[f64]) -> Result<Vec<f64>> {
    if !table.len().is_power_of_two() {
        return Err(Error::Dimension {
            expected: table.len().next_power_of_two(),
            actual: table.len(),
        });
    }
    let mut f = table.to_vec();
    fwht(&mut f);
    let scale = 1.0 / table.len() as f64;
    f.iter_mut().for_each(|x| *x *= scale);
    Ok(f)
}

/// Polynomial over `log2(len)` spins reproducing `table` at every mask;
/// coefficients with `|f| < prune_eps` are dropped.
pub fn polynomial_from_table(table: &[f64], prune_eps: f64) -> Result<PuboPolynomial> {
    let f = walsh_coefficients(table)?;
    let m = table.len().trailing_zeros() as usize;
    let mut p = PuboPolynomial::new(m);
    for (t, &c) in f.iter().enumerate() {
        if c.abs() >= prune_eps {
            let vars: Vec<usize> = (0..m).filter(|&i| (t >> i) & 1 == 1).collect();
            p.add_term_sorted(vars, c);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pubo::SpinAssignment;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// O(d^2) double sum, independent of the butterfly.
    fn naive_coefficients(table: &[f64]) -> Vec<f64> {
        let d = table.len();
        (0..d)
            .map(|t| {
                let s: f64 = (0..d)
                    .map(|m| {
                        let sign = if (t & m).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                        sign * table[m]
                    })
                    .sum();
                s / d as f64
            })
            .collect()
    }

    #[test]
    fn one_spin_is_two_point_interpolation() {
        let (ep, em) = (3.0, -5.0);
        let p = polynomial_from_table(&[ep, em], COEFF_PRUNE_EPS).unwrap();
        assert_eq!(p.constant_term(), (ep + em) / 2.0);
        assert_eq!(p.coefficient(&[0]), (ep - em) / 2.0);
    }

    #[test]
    fn constant_table_is_constant() {
        let p = polynomial_from_table(&[1.25; 16], COEFF_PRUNE_EPS).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.constant_term(), 1.25);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(matches!(
            walsh_coefficients(&[1.0, 2.0, 3.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn random_table_reconstructs_and_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let table: Vec<f64> = (0..256).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let fast = walsh_coefficients(&table).unwrap();
        let slow = naive_coefficients(&table);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
        let p = polynomial_from_table(&table, 0.0).unwrap();
        for (m, &want) in table.iter().enumerate() {
            let got = p.evaluate(&SpinAssignment::from_mask(m as u64, 8)).unwrap();
            assert!((got - want).abs() < 1e-12, "mask {m}: {got} vs {want}");
        }
    }
}
