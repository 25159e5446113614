//! End-to-end solving: problem → Lagrange system → start system → tracked
//! paths → deduplicated critical points → real classification → global
//! minimum.
//!
//! Two pipelines share the machinery. The production pipeline builds the
//! binomial start (one path per solution). The total-degree pipeline tracks
//! Bezout-many paths from roots of unity and serves as an independent
//! cross-check; its extra paths diverge.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::degree::refined_hypersurface_degree;
use crate::lagrange::{LagrangeError, LinearObjectiveProblem, SquareSystem};
use crate::poly::{random_coefficient, CoefficientMode, ExponentVector};
use crate::start::{binomial_start_permuted, build_total_degree_start, StartError};
use crate::tracker::{track_all, Homotopy, PathResult, PathStatus, TrackError, TrackerConfig};

/// Hard guard against accidentally materializing astronomically many paths.
const PATH_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("constraint does not involve x{0}; every coordinate needs a positive degree")]
    MissingVariable(usize),
    #[error(
        "monomial {exponent:?} lies outside Conv{{0, d1·e1, …, dn·en}} for coordinate degrees \
         {degrees:?}; such supports need the total-degree pipeline"
    )]
    SupportViolation {
        exponent: Vec<u32>,
        degrees: Vec<u32>,
    },
    #[error("all {0} tracked paths failed")]
    AllPathsFailed(usize),
    #[error("{0} paths exceed the path budget of {PATH_LIMIT}")]
    TooManyPaths(u128),
    #[error(transparent)]
    Start(#[from] StartError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Lagrange(#[from] LagrangeError),
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub tracker: TrackerConfig,
    /// Relative tolerance for declaring a coordinate real (strict).
    pub real_tol: f64,
    /// Max-norm clustering radius for endpoint deduplication.
    pub dedup_radius: f64,
    pub seed: u64,
    /// Thread-count hint for path tracking; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tracker: TrackerConfig::default(),
            real_tol: 1e-8,
            dedup_radius: 1e-8,
            seed: 0,
            threads: None,
        }
    }
}

/// One critical point of the program, i.e. one zero of the Lagrange system.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub x: Vec<Complex64>,
    pub lambda: Vec<Complex64>,
    /// Max-norm residual of the Lagrange system at (x, λ).
    pub residual: f64,
    pub is_real: bool,
    /// uᵀ·Re(x), present iff the point is real.
    pub objective_value: Option<f64>,
}

/// Everything a solve produced.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub dimension: usize,
    /// Per-coordinate degrees the start system was built from (empty for the
    /// total-degree pipeline).
    pub coordinate_degrees: Vec<u32>,
    /// Predicted number of complex critical points.
    pub expected_count: BigUint,
    /// Deduplicated converged endpoints, sorted lexicographically by real
    /// parts.
    pub found: Vec<CriticalPoint>,
    pub paths_tracked: usize,
    pub n_converged: usize,
    pub n_diverged: usize,
    pub n_failed: usize,
    /// Endpoint clusters merged during deduplication. Nonzero merges on a
    /// generic instance signal nongenericity.
    pub dedup_merges: usize,
    global_minimum_index: Option<usize>,
    /// min ‖∇f‖₂ over real critical points — a smoothness diagnostic for
    /// the feasible set (not a verification).
    pub min_constraint_gradient: Option<f64>,
    /// Wall time of the tracking phase.
    pub wall_time: Duration,
}

impl SolveReport {
    /// The real critical point of least objective value, absent when no
    /// real point was found.
    pub fn global_minimum(&self) -> Option<&CriticalPoint> {
        self.global_minimum_index.map(|i| &self.found[i])
    }

    pub fn global_minimum_index(&self) -> Option<usize> {
        self.global_minimum_index
    }

    /// The start system has no roots at all: the program's algebraic degree
    /// is zero.
    pub fn algebraic_degree_zero(&self) -> bool {
        self.expected_count.is_zero()
    }
}

/// Marks points whose imaginary parts vanish relative to the coordinate
/// magnitude: |Im z_i| < real_tol · (1 + |z_i|) for every coordinate,
/// strictly, so a coordinate exactly at the tolerance stays non-real.
pub fn classify_real(points: &[Vec<Complex64>], real_tol: f64) -> Vec<bool> {
    points
        .iter()
        .map(|p| p.iter().all(|z| z.im.abs() < real_tol * (1.0 + z.norm())))
        .collect()
}

/// Finds all complex critical points of `min uᵀx s.t. f(x) = 0` by tracking
/// the straight-line homotopy from the binomial start system.
///
/// The support of f must lie in Conv{0, d_1·e_1, …, d_n·e_n} for the
/// inferred per-coordinate degrees d_i = deg_{x_i}(f).
pub fn solve(problem: &LinearObjectiveProblem, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    let n = problem.dimension();
    let f = problem.constraint();

    let mut degrees = Vec::with_capacity(n);
    for i in 0..n {
        let d = f.max_exponent(i);
        if d == 0 {
            return Err(SolveError::MissingVariable(i + 1));
        }
        degrees.push(d);
    }
    check_support(f.support().iter(), &degrees)?;

    let mut sorted_u64: Vec<u64> = degrees.iter().map(|&d| d as u64).collect();
    sorted_u64.sort_unstable();
    let expected = refined_hypersurface_degree(&sorted_u64).expect("sorted by construction");

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(vertex_coefficient(problem, &ExponentVector::zero(n), &mut rng));
    for (i, &d) in degrees.iter().enumerate() {
        coeffs.push(vertex_coefficient(
            problem,
            &ExponentVector::axis(n, i, d),
            &mut rng,
        ));
    }
    let gamma = random_coefficient(&mut rng, CoefficientMode::UnitComplex);

    let start = binomial_start_permuted(problem.objective(), &coeffs, &degrees)?;
    if start.root_count() > PATH_LIMIT {
        return Err(SolveError::TooManyPaths(start.root_count()));
    }
    let homotopy = Homotopy::to_lagrange(start.system().clone(), problem, gamma)?;
    let roots: Vec<Vec<Complex64>> = start.roots().collect();

    let (results, wall_time) = run_tracking(cfg, &homotopy, &roots);
    let mut report = assemble_report(&results, 1, Some(problem), cfg, wall_time);
    report.dimension = n;
    report.coordinate_degrees = degrees;
    report.expected_count = expected;
    if report.paths_tracked > 0 && report.n_failed == report.paths_tracked {
        return Err(SolveError::AllPathsFailed(report.paths_tracked));
    }
    Ok(report)
}

/// Solves an arbitrary square system by tracking all Bezout-many paths from
/// a total-degree start. Used to cross-validate [`solve`] and to count
/// solutions of general Lagrange systems.
///
/// The report's expected count is the Bezout product; objective values and
/// the global minimum are not populated (the objective is unknown here).
pub fn solve_oracle_total_degree(
    system: &SquareSystem,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gamma = random_coefficient(&mut rng, CoefficientMode::UnitComplex);
    let start = build_total_degree_start(system, rng.random::<u64>())?;
    if start.root_count() > PATH_LIMIT {
        return Err(SolveError::TooManyPaths(start.root_count()));
    }
    let expected: BigUint = start
        .degrees()
        .iter()
        .fold(BigUint::from(1u32), |acc, &d| acc * BigUint::from(d));

    let homotopy = Homotopy::new(start.system().clone(), system.clone(), gamma)?;
    let roots: Vec<Vec<Complex64>> = start.roots().collect();
    let (results, wall_time) = run_tracking(cfg, &homotopy, &roots);

    let mut report = assemble_report(&results, system.multipliers(), None, cfg, wall_time);
    report.dimension = system.primal_count();
    report.expected_count = expected;
    Ok(report)
}

fn check_support<'a>(
    support: impl Iterator<Item = &'a ExponentVector>,
    degrees: &[u32],
) -> Result<(), SolveError> {
    let lcm = degrees
        .iter()
        .fold(1u64, |acc, &d| num_integer::lcm(acc, d as u64));
    for exp in support {
        let weighted: u64 = exp
            .entries()
            .iter()
            .zip(degrees)
            .map(|(&a, &d)| a as u64 * (lcm / d as u64))
            .sum();
        if weighted > lcm {
            return Err(SolveError::SupportViolation {
                exponent: exp.entries().to_vec(),
                degrees: degrees.to_vec(),
            });
        }
    }
    Ok(())
}

fn vertex_coefficient(
    problem: &LinearObjectiveProblem,
    vertex: &ExponentVector,
    rng: &mut ChaCha8Rng,
) -> Complex64 {
    match problem.constraint().coefficient(vertex) {
        Some(c) if c != Complex64::ZERO => c,
        // absent vertex (typically the constant term): a generic stand-in
        // keeps the root count; only the support inclusion matters
        _ => random_coefficient(rng, CoefficientMode::UnitComplex),
    }
}

fn run_tracking(
    cfg: &SolveConfig,
    homotopy: &Homotopy,
    roots: &[Vec<Complex64>],
) -> (Vec<PathResult>, Duration) {
    let t0 = Instant::now();
    let results = match cfg.threads {
        Some(k) if k > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool construction")
            .install(|| track_all(homotopy, roots, &cfg.tracker)),
        _ => track_all(homotopy, roots, &cfg.tracker),
    };
    (results, t0.elapsed())
}

fn assemble_report(
    results: &[PathResult],
    multipliers: usize,
    problem: Option<&LinearObjectiveProblem>,
    cfg: &SolveConfig,
    wall_time: Duration,
) -> SolveReport {
    let paths_tracked = results.len();
    let n_converged = count_status(results, PathStatus::Converged);
    let n_diverged = count_status(results, PathStatus::Diverged);
    let n_failed = count_status(results, PathStatus::Failed);

    let (mut representatives, dedup_merges) = dedup_converged(results, cfg.dedup_radius);
    representatives.sort_by(|a, b| {
        let key = |p: &PathResult| {
            p.endpoint
                .iter()
                .map(|z| z.re)
                .chain(p.endpoint.iter().map(|z| z.im))
                .collect::<Vec<f64>>()
        };
        key(a)
            .into_iter()
            .zip(key(b))
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let endpoints: Vec<Vec<Complex64>> = representatives
        .iter()
        .map(|r| r.endpoint.clone())
        .collect();
    let real_flags = classify_real(&endpoints, cfg.real_tol);

    let mut found = Vec::with_capacity(endpoints.len());
    for (endpoint, (is_real, rep)) in endpoints
        .into_iter()
        .zip(real_flags.into_iter().zip(&representatives))
    {
        let split = endpoint.len() - multipliers;
        let x = endpoint[..split].to_vec();
        let lambda = endpoint[split..].to_vec();
        let objective_value = match (is_real, problem) {
            (true, Some(p)) => {
                let re_x: Vec<f64> = x.iter().map(|z| z.re).collect();
                Some(p.objective_value(&re_x))
            }
            _ => None,
        };
        found.push(CriticalPoint {
            x,
            lambda,
            residual: rep.residual,
            is_real,
            objective_value,
        });
    }

    let global_minimum_index = found
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.objective_value.map(|v| (i, v)))
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i);

    let min_constraint_gradient = problem.and_then(|p| {
        let f = p.constraint();
        found
            .iter()
            .filter(|pt| pt.is_real)
            .map(|pt| {
                (0..f.nvars())
                    .map(|i| {
                        f.partial(i)
                            .expect("variable in range")
                            .evaluate(&pt.x)
                            .expect("dimension matches")
                            .norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .min_by(f64::total_cmp)
    });

    SolveReport {
        dimension: 0,
        coordinate_degrees: Vec::new(),
        expected_count: BigUint::zero(),
        found,
        paths_tracked,
        n_converged,
        n_diverged,
        n_failed,
        dedup_merges,
        global_minimum_index,
        min_constraint_gradient,
        wall_time,
    }
}

fn count_status(results: &[PathResult], status: PathStatus) -> usize {
    results.iter().filter(|r| r.status == status).count()
}

/// Greedy nearest-neighbor clustering of converged endpoints. Each cluster
/// keeps its smallest-residual member. Merges are logged: generic instances
/// never trigger them.
fn dedup_converged(results: &[PathResult], radius: f64) -> (Vec<PathResult>, usize) {
    let mut reps: Vec<PathResult> = Vec::new();
    let mut merges = 0usize;
    for r in results {
        if r.status != PathStatus::Converged {
            continue;
        }
        let near = reps.iter_mut().find(|rep| {
            rep.endpoint
                .iter()
                .zip(&r.endpoint)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                < radius
        });
        match near {
            Some(rep) => {
                merges += 1;
                log::warn!(
                    "deduplicated two endpoints within {radius:.1e}; instance may be nongeneric"
                );
                if r.residual < rep.residual {
                    *rep = r.clone();
                }
            }
            None => reps.push(r.clone()),
        }
    }
    (reps, merges)
}
