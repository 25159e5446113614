//! Closed-form degree formulas predicting exact homotopy path counts.
//!
//! Counts are kept in unbounded-width integers: benchmark sweeps push
//! `d(d-1)^(n-1)` and Bezout products past the comfort margin of `u64`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("constraint count {m} exceeds ambient dimension {n}")]
    TooManyConstraints { m: usize, n: usize },
    #[error("degrees must be at least 1")]
    ZeroDegree,
    #[error("degrees must be sorted ascending (got {0:?})")]
    Unsorted(Vec<u64>),
}

/// Degrees of a polynomial program: objective degree `d0` and constraint
/// degrees `ds` (kept sorted), in ambient dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    d0: u64,
    ds: Vec<u64>,
    n: usize,
}

impl DegreeProfile {
    pub fn new(d0: u64, mut ds: Vec<u64>, n: usize) -> Result<Self, DegreeError> {
        if d0 == 0 || ds.iter().any(|&d| d == 0) {
            return Err(DegreeError::ZeroDegree);
        }
        if ds.len() > n {
            return Err(DegreeError::TooManyConstraints { m: ds.len(), n });
        }
        ds.sort_unstable();
        Ok(DegreeProfile { d0, ds, n })
    }

    pub fn objective_degree(&self) -> u64 {
        self.d0
    }

    pub fn constraint_degrees(&self) -> &[u64] {
        &self.ds
    }

    pub fn ambient_dimension(&self) -> usize {
        self.n
    }
}

/// Complete-homogeneous-style sum S_r(n_1, …, n_k) = Σ over compositions
/// i_1 + … + i_k = r of ∏ n_j^{i_j}.
pub fn symmetric_sum(r: usize, ns: &[u64]) -> BigUint {
    // one argument at a time: h[j] = S_j(n_1..n_m) after m rounds
    let mut h = vec![BigUint::zero(); r + 1];
    h[0] = BigUint::one();
    for &arg in ns {
        let arg = BigUint::from(arg);
        let mut pows = Vec::with_capacity(r + 1);
        pows.push(BigUint::one());
        for i in 1..=r {
            let next = &pows[i - 1] * &arg;
            pows.push(next);
        }
        let mut next = vec![BigUint::zero(); r + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            let mut acc = BigUint::zero();
            for i in 0..=j {
                acc += &pows[i] * &h[j - i];
            }
            *slot = acc;
        }
        h = next;
    }
    h.pop().unwrap()
}

/// Number of complex critical points for a generic program with the given
/// degree profile: d_1 ⋯ d_m · S_{n-m}(d_0 - 1, d_1 - 1, …, d_m - 1).
pub fn algebraic_degree_generic(profile: &DegreeProfile) -> BigUint {
    let m = profile.ds.len();
    let mut product = BigUint::one();
    for &d in &profile.ds {
        product *= BigUint::from(d);
    }
    let mut args = Vec::with_capacity(m + 1);
    args.push(profile.d0 - 1);
    args.extend(profile.ds.iter().map(|&d| d - 1));
    product * symmetric_sum(profile.n - m, &args)
}

/// Path count for a linear objective over a hypersurface whose Newton
/// polytope is Conv{0, d_1·e_1, …, d_n·e_n}: d_1 · (d_2 - 1) ⋯ (d_n - 1).
///
/// Input must be sorted ascending so callers keep the coordinate–degree
/// correspondence needed by the start system. Returns 0 whenever some
/// d_i = 1 for i ≥ 2.
pub fn refined_hypersurface_degree(ds: &[u64]) -> Result<BigUint, DegreeError> {
    if ds.iter().any(|&d| d == 0) {
        return Err(DegreeError::ZeroDegree);
    }
    if ds.windows(2).any(|w| w[0] > w[1]) {
        return Err(DegreeError::Unsorted(ds.to_vec()));
    }
    let mut count = match ds.first() {
        Some(&d1) => BigUint::from(d1),
        None => return Ok(BigUint::zero()),
    };
    for &d in &ds[1..] {
        count *= BigUint::from(d - 1);
    }
    Ok(count)
}

/// Subfactorial !k, the number of derangements of k symbols, via
/// Σ_{t=0}^{k} t! · (-1)^{k-t} · C(k, t).
pub fn derangement(k: usize) -> BigUint {
    let mut acc = BigInt::zero();
    let mut factorial = BigInt::one(); // t!
    for t in 0..=k {
        if t > 0 {
            factorial *= BigInt::from(t);
        }
        let term = &factorial * BigInt::from(binomial(k, t));
        if (k - t) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    debug_assert!(!acc.is_negative());
    acc.magnitude().clone()
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    if k > n {
        BigUint::zero()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Brute-force composition enumeration, the oracle for `symmetric_sum`.
    fn symmetric_sum_oracle(r: usize, ns: &[u64]) -> BigUint {
        fn go(r: usize, ns: &[u64]) -> BigUint {
            match ns.split_first() {
                None => {
                    if r == 0 {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                }
                Some((&head, rest)) => {
                    let mut acc = BigUint::zero();
                    for i in 0..=r {
                        acc += BigUint::from(head).pow(i as u32) * go(r - i, rest);
                    }
                    acc
                }
            }
        }
        go(r, ns)
    }

    #[test]
    fn symmetric_sum_zero_order_is_one() {
        assert_eq!(symmetric_sum(0, &[5, 7, 9]), big(1));
        assert_eq!(symmetric_sum(0, &[]), big(1));
    }

    #[test]
    fn symmetric_sum_small_case() {
        // compositions (2,0),(1,1),(0,2) of 2 each give 1
        assert_eq!(symmetric_sum(2, &[1, 1]), big(3));
        assert_eq!(symmetric_sum_oracle(2, &[1, 1]), big(3));
    }

    #[test]
    fn symmetric_sum_with_zero_argument() {
        // weight on the zero slot vanishes: S_{n-1}(0, d-1) = (d-1)^{n-1}
        for d in 2u64..=5 {
            for n in 1usize..=6 {
                assert_eq!(
                    symmetric_sum(n - 1, &[0, d - 1]),
                    big(d - 1).pow((n - 1) as u32)
                );
            }
        }
    }

    #[test]
    fn symmetric_sum_matches_oracle() {
        for r in 0..5 {
            for ns in [&[2u64, 3][..], &[1, 4, 2], &[0, 3], &[5], &[]] {
                assert_eq!(symmetric_sum(r, ns), symmetric_sum_oracle(r, ns), "r={r} ns={ns:?}");
            }
        }
    }

    #[test]
    fn generic_degree_linear_objective_hypersurface() {
        for d in 2u64..=5 {
            for n in 1usize..=8 {
                let profile = DegreeProfile::new(1, vec![d], n).unwrap();
                assert_eq!(
                    algebraic_degree_generic(&profile),
                    big(d) * big(d - 1).pow((n - 1) as u32)
                );
            }
        }
    }

    #[test]
    fn generic_degree_quadratic_over_quadric() {
        // d0 = 2, one quadric in n = 2: 2 * S_1(1, 1) = 4
        let profile = DegreeProfile::new(2, vec![2], 2).unwrap();
        assert_eq!(algebraic_degree_generic(&profile), big(4));
    }

    #[test]
    fn generic_degree_zero_dimensional_feasible_set() {
        // m = n leaves S_0 = 1, the plain Bezout product
        let profile = DegreeProfile::new(3, vec![2, 3, 4], 3).unwrap();
        assert_eq!(algebraic_degree_generic(&profile), big(24));
    }

    #[test]
    fn profile_rejects_too_many_constraints() {
        assert_eq!(
            DegreeProfile::new(1, vec![2, 2, 2], 2),
            Err(DegreeError::TooManyConstraints { m: 3, n: 2 })
        );
    }

    #[test]
    fn refined_uniform_matches_generic() {
        for d in 2u64..=6 {
            for n in 1usize..=8 {
                let refined = refined_hypersurface_degree(&vec![d; n]).unwrap();
                let profile = DegreeProfile::new(1, vec![d], n).unwrap();
                assert_eq!(refined, algebraic_degree_generic(&profile), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn refined_degree_one_family() {
        assert_eq!(refined_hypersurface_degree(&[1, 2, 2]).unwrap(), big(1));
        assert_eq!(refined_hypersurface_degree(&[1, 2, 2, 2, 2]).unwrap(), big(1));
    }

    #[test]
    fn refined_degree_zero_family() {
        assert_eq!(refined_hypersurface_degree(&[1, 1, 2]).unwrap(), big(0));
        assert_eq!(refined_hypersurface_degree(&[1, 1, 2, 2]).unwrap(), big(0));
    }

    #[test]
    fn refined_rejects_unsorted() {
        assert!(matches!(
            refined_hypersurface_degree(&[2, 1, 3]),
            Err(DegreeError::Unsorted(_))
        ));
    }

    /// Fixed-point-free permutation count by direct enumeration.
    fn derangement_oracle(k: usize) -> u64 {
        fn go(used: &mut Vec<bool>, pos: usize, k: usize) -> u64 {
            if pos == k {
                return 1;
            }
            let mut acc = 0;
            for v in 0..k {
                if !used[v] && v != pos {
                    used[v] = true;
                    acc += go(used, pos + 1, k);
                    used[v] = false;
                }
            }
            acc
        }
        go(&mut vec![false; k], 0, k)
    }

    #[test]
    fn derangement_small_values() {
        assert_eq!(derangement(1), big(0));
        assert_eq!(derangement(3), big(2));
        assert_eq!(derangement(4), big(9));
        assert_eq!(derangement_oracle(3), 2);
        assert_eq!(derangement_oracle(4), 9);
    }

    #[test]
    fn derangement_matches_enumeration() {
        for k in 0..=8 {
            assert_eq!(derangement(k), big(derangement_oracle(k)), "k={k}");
        }
    }

    #[test]
    fn derangement_recurrence() {
        // !k = (k-1)(!(k-1) + !(k-2))
        for k in 2usize..=12 {
            let lhs = derangement(k);
            let rhs = big((k - 1) as u64) * (derangement(k - 1) + derangement(k - 2));
            assert_eq!(lhs, rhs, "k={k}");
        }
    }

    #[test]
    fn generic_degree_permutation_invariant() {
        let cases = [
            (2u64, vec![3u64, 2, 4], 5usize),
            (1, vec![2, 5], 4),
            (3, vec![4, 2, 2, 3], 6),
        ];
        for (d0, ds, n) in cases {
            let sorted = algebraic_degree_generic(&DegreeProfile::new(d0, ds.clone(), n).unwrap());
            let mut reversed = ds.clone();
            reversed.reverse();
            let swapped =
                algebraic_degree_generic(&DegreeProfile::new(d0, reversed, n).unwrap());
            assert_eq!(sorted, swapped);
        }
    }
}
