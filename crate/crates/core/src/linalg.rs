//! Partial-pivot LU factorization for the small dense complex systems the
//! tracker solves at every predictor stage and corrector iteration.
//!
//! Buffers are owned by the solver so repeated factorizations allocate
//! nothing. The ratio of largest to smallest pivot modulus is used as a
//! cheap conditioning proxy; factorizations beyond the limit are rejected.

use num_complex::Complex64;

pub(crate) struct LinearSolver {
    n: usize,
    lu: Vec<Complex64>,
    piv: Vec<usize>,
}

impl LinearSolver {
    pub fn new(n: usize) -> Self {
        LinearSolver {
            n,
            lu: vec![Complex64::ZERO; n * n],
            piv: vec![0; n],
        }
    }

    /// Factorizes the row-major n×n matrix `a`. Returns false when a pivot
    /// vanishes or the pivot-magnitude ratio exceeds `condition_limit`.
    pub fn factorize(&mut self, a: &[Complex64], condition_limit: f64) -> bool {
        let n = self.n;
        debug_assert_eq!(a.len(), n * n);
        self.lu.copy_from_slice(a);
        let lu = &mut self.lu;

        let mut max_pivot: f64 = 0.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let mut best = k;
            let mut best_mag = lu[k * n + k].norm_sqr();
            for r in (k + 1)..n {
                let mag = lu[r * n + k].norm_sqr();
                if mag > best_mag {
                    best = r;
                    best_mag = mag;
                }
            }
            if best_mag == 0.0 || !best_mag.is_finite() {
                return false;
            }
            self.piv[k] = best;
            if best != k {
                for c in 0..n {
                    lu.swap(k * n + c, best * n + c);
                }
            }
            let pivot = lu[k * n + k];
            let pivot_mag = pivot.norm();
            max_pivot = max_pivot.max(pivot_mag);
            min_pivot = min_pivot.min(pivot_mag);
            let inv = pivot.finv();
            for r in (k + 1)..n {
                let factor = lu[r * n + k] * inv;
                lu[r * n + k] = factor;
                if factor != Complex64::ZERO {
                    for c in (k + 1)..n {
                        let delta = factor * lu[k * n + c];
                        lu[r * n + c] -= delta;
                    }
                }
            }
        }
        min_pivot > 0.0 && max_pivot / min_pivot < condition_limit
    }

    /// Solves LU x = b in place using the stored factorization.
    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        // forward: unit lower triangle
        for r in 1..n {
            let mut acc = b[r];
            for c in 0..r {
                acc -= self.lu[r * n + c] * b[c];
            }
            b[r] = acc;
        }
        // backward: upper triangle
        for r in (0..n).rev() {
            let mut acc = b[r];
            for c in (r + 1)..n {
                acc -= self.lu[r * n + c] * b[c];
            }
            b[r] = acc * self.lu[r * n + r].finv();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_complex_system() {
        // [[2, i], [1-i, 3]] x = b with known x
        let a = vec![c(2.0, 0.0), c(0.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)];
        let x_true = [c(1.0, 2.0), c(-0.5, 0.25)];
        let mut b = vec![
            a[0] * x_true[0] + a[1] * x_true[1],
            a[2] * x_true[0] + a[3] * x_true[1],
        ];
        let mut solver = LinearSolver::new(2);
        assert!(solver.factorize(&a, 1e12));
        solver.solve(&mut b);
        for (got, want) in b.iter().zip(&x_true) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_singular_matrix() {
        let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let mut solver = LinearSolver::new(2);
        assert!(!solver.factorize(&a, 1e12));
    }

    #[test]
    fn rejects_nearly_singular_matrix() {
        let a = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1e-14, 0.0)];
        let mut solver = LinearSolver::new(2);
        assert!(!solver.factorize(&a, 1e12));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let mut b = vec![c(3.0, 0.0), c(5.0, 0.0)];
        let mut solver = LinearSolver::new(2);
        assert!(solver.factorize(&a, 1e12));
        solver.solve(&mut b);
        assert!((b[0] - c(5.0, 0.0)).norm() < 1e-14);
        assert!((b[1] - c(3.0, 0.0)).norm() < 1e-14);
    }
}
