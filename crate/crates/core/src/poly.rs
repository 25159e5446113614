//! Sparse multivariate polynomials over complex double-precision coefficients.
//!
//! A polynomial is a map from exponent vectors to nonzero coefficients.
//! Exponents are stored as dense small-integer vectors: the supports handled
//! here are low-degree and low-arity, so dense storage beats packed encodings.
//! Term order is lexicographic on exponent vectors, which makes equality
//! structural.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("point has {got} coordinates but the polynomial has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("operands have {left} and {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("monomial support is empty")]
    EmptySupport,
}

/// Exponent vector α of a monomial x^α = x_1^{α_1} ⋯ x_n^{α_n}.
///
/// The length is fixed per polynomial and equals the ambient variable count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    /// The zero vector, i.e. the constant monomial.
    pub fn zero(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    /// `power · e_var`.
    pub fn axis(nvars: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = power;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(entries: &[u32]) -> Self {
        ExponentVector(entries.to_vec())
    }
}

/// Multivariate polynomial Σ c_α x^α with complex coefficients.
///
/// Invariants: no stored coefficient is exactly zero and exponent vectors are
/// unique, so `PartialEq` is semantic equality.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Complex64>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(ExponentVector::zero(nvars), value);
        p
    }

    /// The monomial `coeff · x_var^power`.
    pub fn monomial(nvars: usize, var: usize, power: u32, coeff: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(ExponentVector::axis(nvars, var, power), coeff);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Duplicate
    /// exponents are summed; zero coefficients are dropped.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (ExponentVector, Complex64)>,
    {
        let mut p = Self::zero(nvars);
        for (exp, coeff) in terms {
            if exp.len() != nvars {
                return Err(PolyError::ExponentLength {
                    expected: nvars,
                    got: exp.len(),
                });
            }
            p.insert(exp, coeff);
        }
        Ok(p)
    }

    fn insert(&mut self, exp: ExponentVector, coeff: Complex64) {
        use std::collections::btree_map::Entry;
        if coeff == Complex64::ZERO {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = *o.get() + coeff;
                if sum == Complex64::ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> Option<Complex64> {
        self.terms.get(exp).copied()
    }

    /// Exponent vectors of the support.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Largest exponent of `var` over the support.
    pub fn max_exponent(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.get(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    /// Evaluates Σ c_α · ∏ point_i^{α_i} term-wise.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Complex64::ZERO;
        for (exp, coeff) in &self.terms {
            let mut m = *coeff;
            for (z, &e) in point.iter().zip(exp.entries()) {
                if e > 0 {
                    m *= z.powu(e);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Partial derivative ∂/∂x_var, with vanished terms dropped.
    pub fn partial(&self, var: usize) -> Result<SparsePolynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (exp, coeff) in &self.terms {
            let e = exp.get(var);
            if e == 0 {
                continue;
            }
            let mut d = exp.entries().to_vec();
            d[var] = e - 1;
            out.insert(ExponentVector(d), coeff * (e as f64));
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparsePolynomial) -> Result<SparsePolynomial, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut out = self.clone();
        for (exp, coeff) in &other.terms {
            out.insert(exp.clone(), *coeff);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePolynomial) -> Result<SparsePolynomial, PolyError> {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn scale(&self, factor: Complex64) -> SparsePolynomial {
        let mut out = Self::zero(self.nvars);
        for (exp, coeff) in &self.terms {
            out.insert(exp.clone(), coeff * factor);
        }
        out
    }

    /// Multiplies by the monomial x^delta (`delta` must have `nvars` entries).
    pub fn mul_monomial(&self, delta: &[u32]) -> Result<SparsePolynomial, PolyError> {
        if delta.len() != self.nvars {
            return Err(PolyError::ExponentLength {
                expected: self.nvars,
                got: delta.len(),
            });
        }
        let mut out = Self::zero(self.nvars);
        for (exp, coeff) in &self.terms {
            let shifted: Vec<u32> = exp
                .entries()
                .iter()
                .zip(delta)
                .map(|(a, b)| a + b)
                .collect();
            out.insert(ExponentVector(shifted), *coeff);
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in a larger variable ring; new trailing
    /// variables get exponent zero.
    pub fn extend_vars(&self, new_nvars: usize) -> SparsePolynomial {
        assert!(new_nvars >= self.nvars, "cannot drop variables");
        let mut out = Self::zero(new_nvars);
        for (exp, coeff) in &self.terms {
            let mut e = exp.entries().to_vec();
            e.resize(new_nvars, 0);
            out.insert(ExponentVector(e), *coeff);
        }
        out
    }
}

/// A set of monomials, given as exponent vectors. Used to describe where
/// random instances put their coefficients; kept as given, not hull-reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDescription {
    vertices: Vec<ExponentVector>,
}

impl SupportDescription {
    pub fn new(vertices: Vec<ExponentVector>) -> Result<Self, PolyError> {
        if vertices.is_empty() {
            return Err(PolyError::EmptySupport);
        }
        Ok(SupportDescription { vertices })
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    /// All monomials of total degree ≤ `degree` in `nvars` variables.
    pub fn dense(nvars: usize, degree: u32) -> Self {
        let mut vertices = Vec::new();
        let mut current = vec![0u32; nvars];
        collect_bounded(&mut vertices, &mut current, 0, degree, |e, _| {
            ExponentVector::new(e.to_vec())
        });
        SupportDescription { vertices }
    }

    /// The simplex vertices {0, d_1·e_1, …, d_n·e_n}.
    pub fn simplex_vertices(degrees: &[u32]) -> Self {
        let n = degrees.len();
        let mut vertices = vec![ExponentVector::zero(n)];
        for (i, &d) in degrees.iter().enumerate() {
            vertices.push(ExponentVector::axis(n, i, d));
        }
        SupportDescription { vertices }
    }

    /// All lattice points of Conv{0, d_1·e_1, …, d_n·e_n}, i.e. exponents α
    /// with Σ α_i/d_i ≤ 1. Degrees must be ≥ 1.
    pub fn simplex_lattice(degrees: &[u32]) -> Self {
        assert!(degrees.iter().all(|&d| d >= 1), "degrees must be positive");
        let lcm = degrees
            .iter()
            .fold(1u64, |acc, &d| num_integer::lcm(acc, d as u64));
        let mut vertices = Vec::new();
        let mut current = vec![0u32; degrees.len()];
        collect_simplex(&mut vertices, &mut current, 0, degrees, lcm, lcm);
        SupportDescription { vertices }
    }

    /// All 0/1 exponent vectors, the support of a multiaffine polynomial.
    pub fn multiaffine(nvars: usize) -> Self {
        let mut vertices = Vec::with_capacity(1 << nvars);
        for mask in 0u64..(1u64 << nvars) {
            let e: Vec<u32> = (0..nvars).map(|i| ((mask >> i) & 1) as u32).collect();
            vertices.push(ExponentVector::new(e));
        }
        SupportDescription { vertices }
    }
}

fn collect_bounded<F>(
    out: &mut Vec<ExponentVector>,
    current: &mut Vec<u32>,
    var: usize,
    budget: u32,
    make: F,
) where
    F: Fn(&[u32], u32) -> ExponentVector + Copy,
{
    if var == current.len() {
        out.push(make(current, budget));
        return;
    }
    for e in 0..=budget {
        current[var] = e;
        collect_bounded(out, current, var + 1, budget - e, make);
    }
    current[var] = 0;
}

fn collect_simplex(
    out: &mut Vec<ExponentVector>,
    current: &mut Vec<u32>,
    var: usize,
    degrees: &[u32],
    lcm: u64,
    budget: u64,
) {
    if var == current.len() {
        out.push(ExponentVector::new(current.clone()));
        return;
    }
    let weight = lcm / degrees[var] as u64;
    let max = (budget / weight).min(degrees[var] as u64) as u32;
    for e in 0..=max {
        current[var] = e;
        collect_simplex(out, current, var + 1, degrees, lcm, budget - e as u64 * weight);
    }
    current[var] = 0;
}

/// How random coefficients are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Unit modulus with uniform phase. Generic without scale pathologies.
    UnitComplex,
    /// Uniform on [-1, 1] with a gap around zero.
    RealInterval,
}

const REAL_COEFF_GAP: f64 = 0.05;

/// Draws a polynomial with i.i.d. generic coefficients on the given support.
/// Deterministic under a fixed seed.
pub fn random_generic(
    nvars: usize,
    support: &SupportDescription,
    mode: CoefficientMode,
    seed: u64,
) -> Result<SparsePolynomial, PolyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_generic_with(&mut rng, nvars, support, mode)
}

/// As [`random_generic`], drawing from a caller-provided stream.
pub fn random_generic_with<R: Rng>(
    rng: &mut R,
    nvars: usize,
    support: &SupportDescription,
    mode: CoefficientMode,
) -> Result<SparsePolynomial, PolyError> {
    let mut p = SparsePolynomial::zero(nvars);
    for exp in support.vertices() {
        if exp.len() != nvars {
            return Err(PolyError::ExponentLength {
                expected: nvars,
                got: exp.len(),
            });
        }
        p.terms.insert(exp.clone(), random_coefficient(rng, mode));
    }
    Ok(p)
}

pub(crate) fn random_coefficient<R: Rng>(rng: &mut R, mode: CoefficientMode) -> Complex64 {
    match mode {
        CoefficientMode::UnitComplex => {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(1.0, theta)
        }
        CoefficientMode::RealInterval => loop {
            let c: f64 = rng.random_range(-1.0..=1.0);
            if c.abs() >= REAL_COEFF_GAP {
                return Complex64::new(c, 0.0);
            }
        },
    }
}

/// Jacobian matrix of a polynomial system: entry (i, j) = ∂p_i/∂x_j at `point`.
pub fn jacobian(
    system: &[SparsePolynomial],
    point: &[Complex64],
) -> Result<DMatrix<Complex64>, PolyError> {
    let n = point.len();
    for p in system {
        if p.nvars() != n {
            return Err(PolyError::DimensionMismatch {
                expected: p.nvars(),
                got: n,
            });
        }
    }
    let mut jac = DMatrix::zeros(system.len(), n);
    for (i, p) in system.iter().enumerate() {
        for j in 0..n {
            jac[(i, j)] = p.partial(j)?.evaluate(point)?;
        }
    }
    Ok(jac)
}
