//! Lagrange systems: the square polynomial systems whose zeros are the smooth
//! critical points of a constrained program.
//!
//! Variables are ordered (x_1, …, x_n, λ_1, …, λ_m) throughout; downstream
//! modules rely on this. Signs follow L = f_0 - Σ λ_j f_j.

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{PolyError, SparsePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LagrangeError {
    #[error("objective has {objective} entries but the constraint has {constraint} variables")]
    DimensionMismatch { objective: usize, constraint: usize },
    #[error("constraint polynomial is constant")]
    ConstantConstraint,
    #[error("{m} constraints exceed the ambient dimension {n}")]
    TooManyConstraints { m: usize, n: usize },
    #[error("polynomials disagree on variable count")]
    MixedArity,
    #[error("system is not square: {equations} equations in {variables} variables")]
    NotSquare { equations: usize, variables: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The program `min uᵀx  s.t.  f(x) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearObjectiveProblem {
    u: Vec<f64>,
    f: SparsePolynomial,
}

impl LinearObjectiveProblem {
    /// A zero objective entry breaks genericity; that is reported as a
    /// warning rather than an error so nearly-degenerate instances can still
    /// be attempted.
    pub fn new(u: Vec<f64>, f: SparsePolynomial) -> Result<Self, LagrangeError> {
        if u.len() != f.nvars() {
            return Err(LagrangeError::DimensionMismatch {
                objective: u.len(),
                constraint: f.nvars(),
            });
        }
        if f.total_degree() == 0 {
            return Err(LagrangeError::ConstantConstraint);
        }
        if u.iter().any(|&ui| ui == 0.0) {
            log::warn!("objective vector has a zero entry; the instance is not generic");
        }
        Ok(LinearObjectiveProblem { u, f })
    }

    pub fn objective(&self) -> &[f64] {
        &self.u
    }

    pub fn constraint(&self) -> &SparsePolynomial {
        &self.f
    }

    pub fn dimension(&self) -> usize {
        self.u.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.u.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// A square polynomial system in variables (x_1, …, x_n, λ_1, …, λ_m).
#[derive(Debug, Clone, PartialEq)]
pub struct SquareSystem {
    polys: Vec<SparsePolynomial>,
    variable_names: Vec<String>,
    multipliers: usize,
}

impl SquareSystem {
    pub fn new(
        polys: Vec<SparsePolynomial>,
        variable_names: Vec<String>,
    ) -> Result<Self, LagrangeError> {
        Self::with_multipliers(polys, variable_names, 0)
    }

    pub fn with_multipliers(
        polys: Vec<SparsePolynomial>,
        variable_names: Vec<String>,
        multipliers: usize,
    ) -> Result<Self, LagrangeError> {
        let nvars = match polys.first() {
            Some(p) => p.nvars(),
            None => 0,
        };
        if polys.iter().any(|p| p.nvars() != nvars) {
            return Err(LagrangeError::MixedArity);
        }
        if polys.len() != nvars {
            return Err(LagrangeError::NotSquare {
                equations: polys.len(),
                variables: nvars,
            });
        }
        if variable_names.len() != nvars {
            return Err(LagrangeError::NotSquare {
                equations: variable_names.len(),
                variables: nvars,
            });
        }
        Ok(SquareSystem {
            polys,
            variable_names,
            multipliers,
        })
    }

    pub fn nvars(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[SparsePolynomial] {
        &self.polys
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    /// Number of trailing λ variables; the rest are primal coordinates.
    pub fn multipliers(&self) -> usize {
        self.multipliers
    }

    pub fn primal_count(&self) -> usize {
        self.nvars() - self.multipliers
    }

    pub fn total_degrees(&self) -> Vec<u32> {
        self.polys.iter().map(|p| p.total_degree()).collect()
    }

    pub fn evaluate_into(&self, z: &[Complex64], out: &mut [Complex64]) -> Result<(), PolyError> {
        for (slot, p) in out.iter_mut().zip(&self.polys) {
            *slot = p.evaluate(z)?;
        }
        Ok(())
    }

    /// Max-norm residual ‖F(z)‖_∞.
    pub fn residual_inf(&self, z: &[Complex64]) -> Result<f64, PolyError> {
        let mut r: f64 = 0.0;
        for p in &self.polys {
            r = r.max(p.evaluate(z)?.norm());
        }
        Ok(r)
    }
}

pub(crate) fn coordinate_names(n: usize, multipliers: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    if multipliers == 1 {
        names.push("lambda".to_string());
    } else {
        names.extend((1..=multipliers).map(|j| format!("lambda{j}")));
    }
    names
}

/// Lagrange system {ℓ_1, …, ℓ_n, f} of `min uᵀx s.t. f(x) = 0`, with
/// ℓ_i = u_i - λ · ∂f/∂x_i, in variables (x, λ).
pub fn lagrange_linear_hypersurface(problem: &LinearObjectiveProblem) -> SquareSystem {
    let n = problem.dimension();
    let nv = n + 1;
    let lambda_shift: Vec<u32> = (0..nv).map(|i| u32::from(i == n)).collect();
    let mut polys = Vec::with_capacity(nv);
    for (i, &ui) in problem.objective().iter().enumerate() {
        let grad_i = problem
            .constraint()
            .partial(i)
            .expect("index in range")
            .extend_vars(nv);
        let ell = SparsePolynomial::constant(nv, Complex64::new(ui, 0.0))
            .add(
                &grad_i
                    .scale(-Complex64::ONE)
                    .mul_monomial(&lambda_shift)
                    .expect("shift arity matches"),
            )
            .expect("same arity");
        polys.push(ell);
    }
    polys.push(problem.constraint().extend_vars(nv));
    SquareSystem::with_multipliers(polys, coordinate_names(n, 1), 1).expect("square by construction")
}

/// Lagrange system {∂L/∂x_1, …, ∂L/∂x_n, f_1, …, f_m} of
/// `min f_0(x) s.t. F(x) = 0`, where L = f_0 - Σ λ_j f_j, in variables
/// (x, λ_1, …, λ_m).
pub fn lagrange_general(
    f0: &SparsePolynomial,
    constraints: &[SparsePolynomial],
) -> Result<SquareSystem, LagrangeError> {
    let n = f0.nvars();
    let m = constraints.len();
    if constraints.iter().any(|f| f.nvars() != n) {
        return Err(LagrangeError::MixedArity);
    }
    if m > n {
        return Err(LagrangeError::TooManyConstraints { m, n });
    }
    let nv = n + m;

    // L = f0 - sum_j lambda_j f_j in n+m variables
    let mut lagrangian = f0.extend_vars(nv);
    for (j, f) in constraints.iter().enumerate() {
        let shift: Vec<u32> = (0..nv).map(|i| u32::from(i == n + j)).collect();
        let term = f
            .extend_vars(nv)
            .scale(-Complex64::ONE)
            .mul_monomial(&shift)?;
        lagrangian = lagrangian.add(&term)?;
    }

    let mut polys = Vec::with_capacity(nv);
    for i in 0..n {
        polys.push(lagrangian.partial(i)?);
    }
    for f in constraints {
        polys.push(f.extend_vars(nv));
    }
    SquareSystem::with_multipliers(polys, coordinate_names(n, m), m)
}
