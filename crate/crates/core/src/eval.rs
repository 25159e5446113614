//! Compiled evaluation of polynomial systems for the tracking hot loop.
//!
//! All polynomials of a system (and their precomputed partial derivatives)
//! are flattened against one shared monomial table. Every monomial value is
//! obtained from a parent monomial by a single multiplication, so a full
//! system-plus-Jacobian evaluation costs one multiply per table entry plus
//! one fused multiply-add per polynomial term.
//!
//! Lagrange systems of linear-objective hypersurface programs get a
//! dedicated evaluator that works through f, ∇f and the (symmetric) Hessian
//! of f alone, assembling ℓ_i = u_i - λ ∂_i f and the Jacobian blocks from
//! those shared pieces.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::lagrange::{LinearObjectiveProblem, SquareSystem};
use crate::poly::SparsePolynomial;

/// Reusable buffers for compiled evaluation. One per tracked path; contents
/// are meaningless between calls.
#[derive(Debug, Default, Clone)]
pub struct EvalScratch {
    pub(crate) mono: Vec<Complex64>,
    pub(crate) aux: Vec<Complex64>,
    pub(crate) vals_a: Vec<Complex64>,
    pub(crate) vals_b: Vec<Complex64>,
    pub(crate) jac_a: Vec<Complex64>,
    pub(crate) jac_b: Vec<Complex64>,
}

/// Monomial table plus CSR term lists for a batch of polynomials over a
/// common variable set.
pub(crate) struct EvalProgram {
    /// mono[0] = 1; mono[k] = mono[parent[k]] · z[var[k]].
    parent: Vec<u32>,
    var: Vec<u16>,
    offsets: Vec<u32>,
    coeffs: Vec<Complex64>,
    mono_idx: Vec<u32>,
}

impl EvalProgram {
    pub fn new(nvars: usize, polys: &[SparsePolynomial]) -> Self {
        // close the union of supports under "drop one power of the last
        // nonzero variable" so every monomial has a parent
        let mut closure: BTreeSet<(u32, Vec<u32>)> = BTreeSet::new();
        let zero = vec![0u32; nvars];
        closure.insert((0, zero));
        let mut worklist: Vec<Vec<u32>> = Vec::new();
        for p in polys {
            debug_assert_eq!(p.nvars(), nvars);
            for (exp, _) in p.terms() {
                worklist.push(exp.entries().to_vec());
            }
        }
        while let Some(e) = worklist.pop() {
            let deg: u32 = e.iter().sum();
            if deg == 0 || !closure.insert((deg, e.clone())) {
                continue;
            }
            let mut parent = e;
            for slot in parent.iter_mut().rev() {
                if *slot > 0 {
                    *slot -= 1;
                    break;
                }
            }
            worklist.push(parent);
        }

        // graded order guarantees parents precede children
        let ordered: Vec<Vec<u32>> = closure.into_iter().map(|(_, e)| e).collect();
        let index: BTreeMap<&[u32], u32> = ordered
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_slice(), i as u32))
            .collect();

        let mut parent = vec![0u32; ordered.len()];
        let mut var = vec![0u16; ordered.len()];
        for (k, e) in ordered.iter().enumerate().skip(1) {
            let v = e
                .iter()
                .rposition(|&x| x > 0)
                .expect("nonzero monomial has a nonzero entry");
            let mut pe = e.clone();
            pe[v] -= 1;
            parent[k] = index[pe.as_slice()];
            var[k] = v as u16;
        }

        let mut offsets = Vec::with_capacity(polys.len() + 1);
        let mut coeffs = Vec::new();
        let mut mono_idx = Vec::new();
        offsets.push(0u32);
        for p in polys {
            for (exp, c) in p.terms() {
                coeffs.push(*c);
                mono_idx.push(index[exp.entries()]);
            }
            offsets.push(coeffs.len() as u32);
        }

        EvalProgram {
            parent,
            var,
            offsets,
            coeffs,
            mono_idx,
        }
    }


    pub fn fill_monomials(&self, z: &[Complex64], mono: &mut Vec<Complex64>) {
        mono.resize(self.parent.len(), Complex64::ZERO);
        mono[0] = Complex64::ONE;
        for k in 1..self.parent.len() {
            mono[k] = mono[self.parent[k] as usize] * z[self.var[k] as usize];
        }
    }

    #[inline]
    pub fn value(&self, poly: usize, mono: &[Complex64]) -> Complex64 {
        let lo = self.offsets[poly] as usize;
        let hi = self.offsets[poly + 1] as usize;
        let mut acc = Complex64::ZERO;
        for k in lo..hi {
            acc += self.coeffs[k] * mono[self.mono_idx[k] as usize];
        }
        acc
    }
}

/// Evaluates values and Jacobian of an arbitrary polynomial system with
/// precompiled partial derivatives. The system may be rectangular: `n_polys`
/// equations in `nvars_in` variables.
pub(crate) struct CompiledSystem {
    nvars_in: usize,
    n_polys: usize,
    program: EvalProgram,
}

impl CompiledSystem {
    pub fn new(polys: &[SparsePolynomial]) -> Self {
        let nvars_in = polys.first().map_or(0, |p| p.nvars());
        let mut batch: Vec<SparsePolynomial> = polys.to_vec();
        for p in polys {
            for j in 0..nvars_in {
                batch.push(p.partial(j).expect("variable in range"));
            }
        }
        CompiledSystem {
            nvars_in,
            n_polys: polys.len(),
            program: EvalProgram::new(nvars_in, &batch),
        }
    }

    /// `vals` has `n_polys` slots, `jac` is row-major `n_polys × nvars_in`.
    /// Every slot is written.
    pub fn eval(
        &self,
        z: &[Complex64],
        mono: &mut Vec<Complex64>,
        vals: &mut [Complex64],
        jac: &mut [Complex64],
    ) {
        self.program.fill_monomials(z, mono);
        for (i, slot) in vals.iter_mut().enumerate().take(self.n_polys) {
            *slot = self.program.value(i, mono);
        }
        for (e, slot) in jac
            .iter_mut()
            .enumerate()
            .take(self.n_polys * self.nvars_in)
        {
            *slot = self.program.value(self.n_polys + e, mono);
        }
    }
}

/// Evaluates the Lagrange system {u_i - λ ∂_i f, f} and its Jacobian from
/// f's gradient and upper Hessian, sharing one monomial table over x.
pub(crate) struct CompiledLagrange {
    n: usize,
    u: Vec<f64>,
    /// program polys: [f, g_1..g_n, H_{ij} for i ≤ j row-major].
    program: EvalProgram,
}

impl CompiledLagrange {
    pub fn new(problem: &LinearObjectiveProblem) -> Self {
        let n = problem.dimension();
        let f = problem.constraint();
        let mut batch = Vec::with_capacity(1 + n + n * (n + 1) / 2);
        batch.push(f.clone());
        let grads: Vec<SparsePolynomial> = (0..n)
            .map(|i| f.partial(i).expect("variable in range"))
            .collect();
        batch.extend(grads.iter().cloned());
        for (i, g) in grads.iter().enumerate() {
            for j in i..n {
                batch.push(g.partial(j).expect("variable in range"));
            }
        }
        CompiledLagrange {
            n,
            u: problem.objective().to_vec(),
            program: EvalProgram::new(n, &batch),
        }
    }

    /// `z` is (x_1..x_n, λ); `vals` has n+1 slots; `jac` is (n+1)×(n+1)
    /// row-major. Every slot is written.
    pub fn eval(
        &self,
        z: &[Complex64],
        scratch_mono: &mut Vec<Complex64>,
        scratch_grad: &mut Vec<Complex64>,
        vals: &mut [Complex64],
        jac: &mut [Complex64],
    ) {
        let n = self.n;
        let lambda = z[n];
        self.program.fill_monomials(&z[..n], scratch_mono);
        vals[n] = self.program.value(0, scratch_mono);
        scratch_grad.resize(n, Complex64::ZERO);
        for i in 0..n {
            let gi = self.program.value(1 + i, scratch_mono);
            scratch_grad[i] = gi;
            vals[i] = Complex64::new(self.u[i], 0.0) - lambda * gi;
        }
        let stride = n + 1;
        let mut h_poly = 1 + n;
        for i in 0..n {
            for j in i..n {
                let hij = self.program.value(h_poly, scratch_mono);
                h_poly += 1;
                let entry = -lambda * hij;
                jac[i * stride + j] = entry;
                jac[j * stride + i] = entry;
            }
        }
        for i in 0..n {
            jac[i * stride + n] = -scratch_grad[i];
            jac[n * stride + i] = scratch_grad[i];
        }
        jac[n * stride + n] = Complex64::ZERO;
    }
}

/// A square system the tracker can evaluate with its Jacobian.
pub(crate) enum SystemEval {
    Generic(CompiledSystem),
    Lagrange(CompiledLagrange),
}

impl SystemEval {
    pub fn generic(system: &SquareSystem) -> Self {
        SystemEval::Generic(CompiledSystem::new(system.polys()))
    }

    pub fn lagrange(problem: &LinearObjectiveProblem) -> Self {
        SystemEval::Lagrange(CompiledLagrange::new(problem))
    }

    pub fn eval(
        &self,
        z: &[Complex64],
        mono: &mut Vec<Complex64>,
        aux: &mut Vec<Complex64>,
        vals: &mut [Complex64],
        jac: &mut [Complex64],
    ) {
        match self {
            SystemEval::Generic(c) => c.eval(z, mono, vals, jac),
            SystemEval::Lagrange(c) => c.eval(z, mono, aux, vals, jac),
        }
    }
}
