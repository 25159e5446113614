//! Start systems with closed-form roots.
//!
//! The binomial start for `min uᵀx s.t. f(x) = 0` over a simplex-support
//! hypersurface is
//!
//! ```text
//!   u_i - d_i λ c_i x_i^{d_i - 1} = 0   (i = 1..n)
//!   c_0 + c_1 x_1^{d_1} = 0
//! ```
//!
//! and its d_1 · (d_2-1) ⋯ (d_n-1) roots are enumerated directly: x_1 from
//! the last equation, λ from the first, every other coordinate from a pure
//! radical. Nothing here depends on the number of variables beyond the root
//! count itself — no mixed cells, no polytope traversal.
//!
//! A total-degree (Bezout) start is provided as the independent oracle.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lagrange::{coordinate_names, SquareSystem};
use crate::poly::{random_coefficient, CoefficientMode, ExponentVector, SparsePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StartError {
    #[error("degrees must be sorted ascending (got {0:?}); permute coordinates first")]
    UnsortedDegrees(Vec<u32>),
    #[error("degrees must be at least 1")]
    ZeroDegree,
    #[error("vertex coefficient c_{0} is zero")]
    ZeroCoefficient(usize),
    #[error("objective entry u_{0} is zero")]
    ZeroObjectiveEntry(usize),
    #[error("expected {expected} {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("target equation {0} is constant; it has no total degree")]
    ConstantEquation(usize),
    #[error("root count overflows the enumerable range")]
    TooManyRoots,
}

/// All k-th roots of `w`, ordered by increasing argument.
pub fn kth_roots(w: Complex64, k: u32) -> Vec<Complex64> {
    assert!(k >= 1);
    let r = w.norm().powf(1.0 / k as f64);
    let base = w.arg() / k as f64;
    let step = std::f64::consts::TAU / k as f64;
    (0..k)
        .map(|j| Complex64::from_polar(r, base + j as f64 * step))
        .collect()
}

/// Binomial start system together with its closed-form root enumeration.
///
/// Roots are produced in the caller's original coordinate order (x_1, …,
/// x_n, λ); any internal degree-sorting permutation is inverted on output.
#[derive(Debug, Clone)]
pub struct BinomialStart {
    system: SquareSystem,
    degrees_sorted: Vec<u32>,
    /// perm[sorted_position] = original coordinate index.
    perm: Vec<usize>,
    /// Per x_1 branch: (x_1 value, λ value).
    branches: Vec<(Complex64, Complex64)>,
    /// branch_roots[branch][s - 1] = the (d_{s+1} - 1) admissible values of
    /// sorted coordinate s, for s ≥ 1.
    branch_roots: Vec<Vec<Vec<Complex64>>>,
    root_count: u128,
}

impl BinomialStart {
    pub fn system(&self) -> &SquareSystem {
        &self.system
    }

    pub fn root_count(&self) -> u128 {
        self.root_count
    }

    pub fn degrees_sorted(&self) -> &[u32] {
        &self.degrees_sorted
    }

    /// Sorted-position → original-coordinate mapping.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// The `index`-th root, as (x_1, …, x_n, λ) in original coordinates.
    pub fn root(&self, index: u128) -> Vec<Complex64> {
        assert!(index < self.root_count, "root index out of range");
        let n = self.degrees_sorted.len();
        let d1 = self.degrees_sorted[0] as u128;
        let branch = (index % d1) as usize;
        let mut rem = index / d1;
        let (x1, lambda) = self.branches[branch];
        let mut out = vec![Complex64::ZERO; n + 1];
        out[self.perm[0]] = x1;
        for s in 1..n {
            let width = (self.degrees_sorted[s] - 1) as u128;
            let digit = (rem % width) as usize;
            rem /= width;
            out[self.perm[s]] = self.branch_roots[branch][s - 1][digit];
        }
        out[n] = lambda;
        out
    }

    pub fn roots(&self) -> impl Iterator<Item = Vec<Complex64>> + '_ {
        (0..self.root_count).map(|i| self.root(i))
    }
}

/// Builds the binomial start for already-sorted degrees d_1 ≤ … ≤ d_n.
///
/// `coeffs` holds the simplex-vertex coefficients c_0, c_1, …, c_n; `u` the
/// objective. All of them must be nonzero. A zero total root count (some
/// d_i = 1 for i ≥ 2) yields an empty enumeration, signalling algebraic
/// degree zero.
pub fn build_binomial_start(
    u: &[f64],
    coeffs: &[Complex64],
    degrees: &[u32],
) -> Result<BinomialStart, StartError> {
    if degrees.windows(2).any(|w| w[0] > w[1]) {
        return Err(StartError::UnsortedDegrees(degrees.to_vec()));
    }
    let perm: Vec<usize> = (0..degrees.len()).collect();
    build_sorted(u, coeffs, degrees, perm)
}

/// As [`build_binomial_start`], but accepts degrees in any order: coordinates
/// are permuted internally so the smallest degree leads, and the permutation
/// is inverted on output.
pub fn binomial_start_permuted(
    u: &[f64],
    coeffs: &[Complex64],
    degrees: &[u32],
) -> Result<BinomialStart, StartError> {
    let mut perm: Vec<usize> = (0..degrees.len()).collect();
    perm.sort_by_key(|&i| degrees[i]);
    let su: Vec<f64> = perm.iter().map(|&i| u[i]).collect();
    let mut sc = Vec::with_capacity(coeffs.len());
    sc.push(coeffs[0]);
    sc.extend(perm.iter().map(|&i| coeffs[i + 1]));
    let sd: Vec<u32> = perm.iter().map(|&i| degrees[i]).collect();
    build_sorted(&su, &sc, &sd, perm)
}

fn build_sorted(
    u: &[f64],
    coeffs: &[Complex64],
    degrees: &[u32],
    perm: Vec<usize>,
) -> Result<BinomialStart, StartError> {
    let n = degrees.len();
    if u.len() != n {
        return Err(StartError::LengthMismatch {
            what: "objective entries",
            expected: n,
            got: u.len(),
        });
    }
    if coeffs.len() != n + 1 {
        return Err(StartError::LengthMismatch {
            what: "vertex coefficients",
            expected: n + 1,
            got: coeffs.len(),
        });
    }
    if degrees.iter().any(|&d| d == 0) {
        return Err(StartError::ZeroDegree);
    }
    if let Some(i) = coeffs.iter().position(|c| *c == Complex64::ZERO) {
        return Err(StartError::ZeroCoefficient(i));
    }
    if let Some(i) = u.iter().position(|&ui| ui == 0.0) {
        return Err(StartError::ZeroObjectiveEntry(i));
    }

    let mut root_count: u128 = degrees[0] as u128;
    for &d in &degrees[1..] {
        root_count = root_count
            .checked_mul((d - 1) as u128)
            .ok_or(StartError::TooManyRoots)?;
    }

    let d1 = degrees[0];
    let c0 = coeffs[0];
    let c1 = coeffs[1];

    // x_1^{d_1} = -c_0/c_1, then lambda = u_1 / (d_1 c_1 x_1^{d_1 - 1})
    let mut branches = Vec::with_capacity(d1 as usize);
    let mut branch_roots = Vec::with_capacity(d1 as usize);
    for x1 in kth_roots(-c0 / c1, d1) {
        let lambda = Complex64::new(u[0], 0.0) / ((d1 as f64) * c1 * x1.powu(d1 - 1));
        let mut per_coord = Vec::with_capacity(n - 1);
        for s in 1..n {
            let d = degrees[s];
            if d == 1 {
                // (d - 1) = 0 admissible values: the enumeration is empty
                per_coord.push(Vec::new());
                continue;
            }
            let radicand = Complex64::new(u[s], 0.0) / ((d as f64) * lambda * coeffs[s + 1]);
            per_coord.push(kth_roots(radicand, d - 1));
        }
        branches.push((x1, lambda));
        branch_roots.push(per_coord);
    }

    let system = binomial_system(u, coeffs, degrees, &perm);
    Ok(BinomialStart {
        system,
        degrees_sorted: degrees.to_vec(),
        perm,
        branches,
        branch_roots,
        root_count,
    })
}

/// The equations of B in original coordinates. Equation i pairs with the
/// target's ℓ_i, the last equation with f.
fn binomial_system(
    u: &[f64],
    coeffs: &[Complex64],
    degrees: &[u32],
    perm: &[usize],
) -> SquareSystem {
    let n = degrees.len();
    let nv = n + 1;
    let mut inverse = vec![0usize; n];
    for (s, &orig) in perm.iter().enumerate() {
        inverse[orig] = s;
    }
    let mut polys = Vec::with_capacity(nv);
    for orig in 0..n {
        let s = inverse[orig];
        let d = degrees[s];
        let mut exp = vec![0u32; nv];
        exp[orig] = d - 1;
        exp[n] = 1;
        let p = SparsePolynomial::from_terms(
            nv,
            vec![
                (ExponentVector::zero(nv), Complex64::new(u[s], 0.0)),
                (
                    ExponentVector::from(exp),
                    -Complex64::new(d as f64, 0.0) * coeffs[s + 1],
                ),
            ],
        )
        .expect("exponent arity matches");
        polys.push(p);
    }
    let pivot = perm[0];
    let last = SparsePolynomial::from_terms(
        nv,
        vec![
            (ExponentVector::zero(nv), coeffs[0]),
            (ExponentVector::axis(nv, pivot, degrees[0]), coeffs[1]),
        ],
    )
    .expect("exponent arity matches");
    polys.push(last);
    SquareSystem::with_multipliers(polys, coordinate_names(n, 1), 1)
        .expect("square by construction")
}

/// Total-degree start {z_i^{D_i} - γ_i} with unit-modulus γ_i; the Bezout
/// count of roots, all scaled roots of unity.
#[derive(Debug, Clone)]
pub struct TotalDegreeStart {
    system: SquareSystem,
    degrees: Vec<u32>,
    roots_per_var: Vec<Vec<Complex64>>,
    root_count: u128,
}

impl TotalDegreeStart {
    pub fn system(&self) -> &SquareSystem {
        &self.system
    }

    pub fn root_count(&self) -> u128 {
        self.root_count
    }

    /// Total degree D_i per target equation.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn root(&self, index: u128) -> Vec<Complex64> {
        assert!(index < self.root_count, "root index out of range");
        let mut rem = index;
        let mut out = Vec::with_capacity(self.degrees.len());
        for choices in &self.roots_per_var {
            let width = choices.len() as u128;
            out.push(choices[(rem % width) as usize]);
            rem /= width;
        }
        out
    }

    pub fn roots(&self) -> impl Iterator<Item = Vec<Complex64>> + '_ {
        (0..self.root_count).map(|i| self.root(i))
    }
}

/// Builds the total-degree start for a square target system. D_i is the
/// total degree of target equation i.
pub fn build_total_degree_start(
    target: &SquareSystem,
    seed: u64,
) -> Result<TotalDegreeStart, StartError> {
    let nv = target.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = Vec::with_capacity(nv);
    let mut gammas = Vec::with_capacity(nv);
    let mut root_count: u128 = 1;
    for (i, p) in target.polys().iter().enumerate() {
        let d = p.total_degree();
        if d == 0 {
            return Err(StartError::ConstantEquation(i));
        }
        degrees.push(d);
        gammas.push(random_coefficient(&mut rng, CoefficientMode::UnitComplex));
        root_count = root_count
            .checked_mul(d as u128)
            .ok_or(StartError::TooManyRoots)?;
    }
    let mut polys = Vec::with_capacity(nv);
    let mut roots_per_var = Vec::with_capacity(nv);
    for i in 0..nv {
        let p = SparsePolynomial::from_terms(
            nv,
            vec![
                (ExponentVector::axis(nv, i, degrees[i]), Complex64::ONE),
                (ExponentVector::zero(nv), -gammas[i]),
            ],
        )
        .expect("exponent arity matches");
        polys.push(p);
        roots_per_var.push(kth_roots(gammas[i], degrees[i]));
    }
    let system = SquareSystem::with_multipliers(
        polys,
        target.variable_names().to_vec(),
        target.multipliers(),
    )
    .expect("square by construction");
    Ok(TotalDegreeStart {
        system,
        degrees,
        roots_per_var,
        root_count,
    })
}
