//! Tropical verification of the lifting behind the binomial start system.
//!
//! A lifted square system induces, per equation, the piecewise-linear
//! condition that the minimal exponent of the lifting parameter is attained
//! by at least two terms. Solutions of that condition index the start cells.
//! This module builds the tropical system for the Lagrange shape, enumerates
//! its solutions exactly, and exposes the univariate lower-hull view of the
//! same computation.
//!
//! Everything here is exact rational arithmetic: the uniqueness claims being
//! verified are combinatorial and must not be subject to floating tolerance.
//! Enumeration over active pairs is exponential in the number of rows, which
//! is acceptable for a verifier — rows carry at most n + 2 terms and small n.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropicalError {
    #[error("lifting entry for row {row}, term {term} is missing")]
    MissingLift { row: usize, term: usize },
    #[error("system is not square: {rows} rows in {vars} tropical variables")]
    NotSquare { rows: usize, vars: usize },
    #[error("row {0} has fewer than two terms")]
    TooFewTerms(usize),
    #[error("terms disagree on the number of tropical variables")]
    MixedArity,
    #[error("need at least two lifted points")]
    TooFewPoints,
    #[error("duplicate exponent {0}")]
    DuplicateExponent(u64),
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// One linear term `coeffs · v + offset` of a tropical min-row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalTerm {
    pub coeffs: Vec<BigRational>,
    pub offset: BigRational,
}

impl TropicalTerm {
    pub fn value_at(&self, v: &[BigRational]) -> BigRational {
        let mut acc = self.offset.clone();
        for (c, x) in self.coeffs.iter().zip(v) {
            if !c.is_zero() {
                acc += c * x;
            }
        }
        acc
    }
}

/// A `min{…}` row; a solution must attain the row minimum at two terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalRow {
    pub terms: Vec<TropicalTerm>,
}

/// A point where every row attains its minimum twice, together with the
/// per-row pair of term indices doing so.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalSolution {
    /// For Lagrange-shaped systems this is (a_1, …, a_n, b).
    pub point: Vec<BigRational>,
    pub active_terms: Vec<(usize, usize)>,
}

impl TropicalSolution {
    /// The coordinates lifting the x variables.
    pub fn a(&self) -> &[BigRational] {
        &self.point[..self.point.len() - 1]
    }

    /// The coordinate lifting λ.
    pub fn b(&self) -> &BigRational {
        self.point.last().expect("nonempty point")
    }
}

/// Rational monomial weights ω_{row, term}.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lifting {
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl Lifting {
    pub fn set(&mut self, row: usize, term: usize, value: BigRational) {
        self.entries.insert((row, term), value);
    }

    pub fn get(&self, row: usize, term: usize) -> Option<&BigRational> {
        self.entries.get(&(row, term))
    }

    /// The all-zero lifting for the Lagrange shape with `n` coordinates.
    pub fn zero(n: usize) -> Self {
        let mut lifting = Lifting::default();
        for i in 0..n {
            lifting.set(i, 0, q(0));
            lifting.set(i, 1, q(0));
        }
        for j in 0..=n {
            lifting.set(n, j, q(0));
        }
        lifting
    }

    /// The lifting that pins the start cell at a = 1, b = 0:
    ///
    /// ```text
    ///   ω_{i,0} = 0             ω_{i,1} = 1 - d_i        (rows i = 1..n)
    ///   ω_{n+1,0} = 0,  ω_{n+1,1} = -d_1,  ω_{n+1,j} = 1 - d_{j-1}  (j ≥ 2)
    /// ```
    ///
    /// Uniform degrees are the special case d_1 = … = d_n.
    pub fn canonical(degrees: &[u32]) -> Self {
        let n = degrees.len();
        let mut lifting = Lifting::default();
        for (i, &d) in degrees.iter().enumerate() {
            lifting.set(i, 0, q(0));
            lifting.set(i, 1, q(1 - d as i64));
        }
        lifting.set(n, 0, q(0));
        lifting.set(n, 1, q(-(degrees[0] as i64)));
        for j in 2..=n {
            lifting.set(n, j, q(1 - degrees[j - 1] as i64));
        }
        lifting
    }
}

/// The tropical system of the lifted Lagrange system for a hypersurface with
/// per-coordinate degrees d_1 ≤ … ≤ d_n, in tropical variables
/// (a_1, …, a_n, b):
///
/// ```text
///   row i:     min{ ω_{i,0},  (d_i - 1) a_i + b + ω_{i,1} }
///   row n+1:   min{ ω_{n+1,0},  d_1 a_1 + ω_{n+1,1}, …, d_n a_n + ω_{n+1,n} }
/// ```
pub fn build_tropical_system(
    degrees: &[u32],
    lifting: &Lifting,
) -> Result<Vec<TropicalRow>, TropicalError> {
    let n = degrees.len();
    let k = n + 1;
    let lift = |row: usize, term: usize| -> Result<BigRational, TropicalError> {
        lifting
            .get(row, term)
            .cloned()
            .ok_or(TropicalError::MissingLift { row, term })
    };
    let mut rows = Vec::with_capacity(k);
    for (i, &d) in degrees.iter().enumerate() {
        let constant = TropicalTerm {
            coeffs: vec![q(0); k],
            offset: lift(i, 0)?,
        };
        let mut coeffs = vec![q(0); k];
        coeffs[i] = q(d as i64 - 1);
        coeffs[n] = q(1);
        let monomial = TropicalTerm {
            coeffs,
            offset: lift(i, 1)?,
        };
        rows.push(TropicalRow {
            terms: vec![constant, monomial],
        });
    }
    let mut terms = vec![TropicalTerm {
        coeffs: vec![q(0); k],
        offset: lift(n, 0)?,
    }];
    for (j, &d) in degrees.iter().enumerate() {
        let mut coeffs = vec![q(0); k];
        coeffs[j] = q(d as i64);
        terms.push(TropicalTerm {
            coeffs,
            offset: lift(n, j + 1)?,
        });
    }
    rows.push(TropicalRow { terms });
    Ok(rows)
}

/// Enumerates all points where every row attains its minimum at two or more
/// terms. One active pair per row is selected, the induced linear system is
/// solved exactly, and candidates failing the global minimality check are
/// discarded. Degenerate selections (singular systems) are skipped.
pub fn solve_tropical(rows: &[TropicalRow]) -> Result<Vec<TropicalSolution>, TropicalError> {
    let k = match rows.first() {
        Some(row) => row
            .terms
            .first()
            .map(|t| t.coeffs.len())
            .ok_or(TropicalError::TooFewTerms(0))?,
        None => return Ok(Vec::new()),
    };
    for (i, row) in rows.iter().enumerate() {
        if row.terms.len() < 2 {
            return Err(TropicalError::TooFewTerms(i));
        }
        if row.terms.iter().any(|t| t.coeffs.len() != k) {
            return Err(TropicalError::MixedArity);
        }
    }
    if rows.len() != k {
        return Err(TropicalError::NotSquare {
            rows: rows.len(),
            vars: k,
        });
    }

    let pair_lists: Vec<Vec<(usize, usize)>> = rows
        .iter()
        .map(|row| {
            let t = row.terms.len();
            let mut pairs = Vec::with_capacity(t * (t - 1) / 2);
            for p in 0..t {
                for r in (p + 1)..t {
                    pairs.push((p, r));
                }
            }
            pairs
        })
        .collect();

    let mut found: BTreeMap<Vec<BigRational>, Vec<(usize, usize)>> = BTreeMap::new();
    let mut selection = vec![0usize; rows.len()];
    loop {
        let pairs: Vec<(usize, usize)> = selection
            .iter()
            .enumerate()
            .map(|(i, &s)| pair_lists[i][s])
            .collect();
        if let Some(point) = solve_active_pairs(rows, &pairs, k) {
            if attains_minimum(rows, &pairs, &point) {
                found.entry(point).or_insert(pairs);
            }
        }
        // advance the mixed-radix selection counter
        let mut row = 0;
        loop {
            if row == selection.len() {
                return Ok(found
                    .into_iter()
                    .map(|(point, active_terms)| TropicalSolution {
                        point,
                        active_terms,
                    })
                    .collect());
            }
            selection[row] += 1;
            if selection[row] < pair_lists[row].len() {
                break;
            }
            selection[row] = 0;
            row += 1;
        }
    }
}

/// Solves the k×k rational system "term p equals term r in every row".
/// Returns None when singular or inconsistent.
fn solve_active_pairs(
    rows: &[TropicalRow],
    pairs: &[(usize, usize)],
    k: usize,
) -> Option<Vec<BigRational>> {
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    let mut rhs: Vec<BigRational> = Vec::with_capacity(rows.len());
    for (row, &(p, r)) in rows.iter().zip(pairs) {
        let tp = &row.terms[p];
        let tr = &row.terms[r];
        matrix.push(
            tp.coeffs
                .iter()
                .zip(&tr.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        );
        rhs.push(&tr.offset - &tp.offset);
    }

    // Gaussian elimination with exact pivoting
    for col in 0..k {
        let pivot = (col..k).find(|&r| !matrix[r][col].is_zero())?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = matrix[col][col].recip();
        for c in col..k {
            let scaled = &matrix[col][c] * &inv;
            matrix[col][c] = scaled;
        }
        let scaled_rhs = &rhs[col] * &inv;
        rhs[col] = scaled_rhs;
        for r in 0..k {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for c in col..k {
                let delta = &factor * &matrix[col][c];
                matrix[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

fn attains_minimum(rows: &[TropicalRow], pairs: &[(usize, usize)], point: &[BigRational]) -> bool {
    for (row, &(p, _)) in rows.iter().zip(pairs) {
        let selected = row.terms[p].value_at(point);
        if row
            .terms
            .iter()
            .any(|term| term.value_at(point) < selected)
        {
            return false;
        }
    }
    true
}

/// A lower-hull facet of lifted univariate points, with its inner normal
/// scaled to last coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullCell {
    pub points: Vec<(u64, BigRational)>,
    pub normal: (BigRational, BigRational),
}

/// Lower convex hull of 2D lifted points (exponent, weight). Each facet is
/// reported with every input point lying on it, so collinear liftings give a
/// single cell.
pub fn lower_hull_cells_univariate(
    points: &[(u64, BigRational)],
) -> Result<Vec<HullCell>, TropicalError> {
    if points.len() < 2 {
        return Err(TropicalError::TooFewPoints);
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(TropicalError::DuplicateExponent(w[0].0));
        }
    }

    // monotone chain, keeping only strict vertices: slopes must increase
    let slope = |a: &(u64, BigRational), b: &(u64, BigRational)| -> BigRational {
        (&b.1 - &a.1) / q(b.0 as i64 - a.0 as i64)
    };
    let mut hull: Vec<(u64, BigRational)> = Vec::new();
    for p in &sorted {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            if slope(b, p) <= slope(a, b) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }

    let mut cells = Vec::with_capacity(hull.len() - 1);
    for w in hull.windows(2) {
        let nu = -slope(&w[0], &w[1]);
        let level = &nu * q(w[0].0 as i64) + &w[0].1;
        let on_facet: Vec<(u64, BigRational)> = sorted
            .iter()
            .filter(|(e, wt)| &nu * q(*e as i64) + wt == level)
            .cloned()
            .collect();
        cells.push(HullCell {
            points: on_facet,
            normal: (nu, q(1)),
        });
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn assert_unique_unit_solution(degrees: &[u32]) {
        let lifting = Lifting::canonical(degrees);
        let rows = build_tropical_system(degrees, &lifting).unwrap();
        let solutions = solve_tropical(&rows).unwrap();
        assert_eq!(solutions.len(), 1, "degrees {degrees:?}");
        let sol = &solutions[0];
        assert!(sol.a().iter().all(|ai| *ai == q(1)), "degrees {degrees:?}");
        assert!(sol.b().is_zero(), "degrees {degrees:?}");
    }

    #[test]
    fn uniform_lifting_rows_match_display() {
        // uniform d: row i = min{0, (d-1) a_i + b + 1 - d},
        // last row = min{0, d a_1 - d, d a_2 + 1 - d, ...}
        let d = 3u32;
        let n = 2usize;
        let rows = build_tropical_system(&[d; 2], &Lifting::canonical(&[d; 2])).unwrap();
        assert_eq!(rows.len(), n + 1);
        for (i, row) in rows.iter().take(n).enumerate() {
            assert_eq!(row.terms.len(), 2);
            assert_eq!(row.terms[0].offset, q(0));
            assert!(row.terms[0].coeffs.iter().all(|c| c.is_zero()));
            assert_eq!(row.terms[1].offset, q(1 - d as i64));
            assert_eq!(row.terms[1].coeffs[i], q(d as i64 - 1));
            assert_eq!(row.terms[1].coeffs[n], q(1));
        }
        let last = &rows[n];
        assert_eq!(last.terms.len(), n + 1);
        assert_eq!(last.terms[0].offset, q(0));
        assert_eq!(last.terms[1].offset, q(-(d as i64)));
        assert_eq!(last.terms[1].coeffs[0], q(d as i64));
        assert_eq!(last.terms[2].offset, q(1 - d as i64));
        assert_eq!(last.terms[2].coeffs[1], q(d as i64));
    }

    #[test]
    fn refined_lifting_rows_use_per_coordinate_degrees() {
        let degrees = [2u32, 3, 4];
        let rows = build_tropical_system(&degrees, &Lifting::canonical(&degrees)).unwrap();
        for (i, &d) in degrees.iter().enumerate() {
            assert_eq!(rows[i].terms[1].offset, q(1 - d as i64));
            assert_eq!(rows[i].terms[1].coeffs[i], q(d as i64 - 1));
        }
        let last = &rows[3];
        assert_eq!(last.terms[1].offset, q(-2));
        assert_eq!(last.terms[2].offset, q(-2)); // 1 - d_2 = -2
        assert_eq!(last.terms[3].offset, q(-3)); // 1 - d_3 = -3
    }

    #[test]
    fn zero_lifting_offsets_vanish() {
        let rows = build_tropical_system(&[2, 2], &Lifting::zero(2)).unwrap();
        for row in &rows {
            for term in &row.terms {
                assert!(term.offset.is_zero());
            }
        }
    }

    #[test]
    fn missing_lift_entry_is_an_error() {
        let mut lifting = Lifting::canonical(&[2, 2]);
        lifting.entries.remove(&(2, 1));
        assert_eq!(
            build_tropical_system(&[2, 2], &lifting),
            Err(TropicalError::MissingLift { row: 2, term: 1 })
        );
    }

    #[test]
    fn uniform_degrees_have_unique_unit_cell() {
        for d in 2u32..=5 {
            for n in 1usize..=4 {
                assert_unique_unit_solution(&vec![d; n]);
            }
        }
    }

    #[test]
    fn mixed_degrees_have_unique_unit_cell() {
        assert_unique_unit_solution(&[2, 3, 4]);
        assert_unique_unit_solution(&[2, 2, 5]);
        assert_unique_unit_solution(&[3, 4, 4, 5]);
    }

    #[test]
    fn solutions_attain_minimum_twice_exactly() {
        let degrees = [2u32, 3, 4];
        let rows = build_tropical_system(&degrees, &Lifting::canonical(&degrees)).unwrap();
        for sol in solve_tropical(&rows).unwrap() {
            for row in &rows {
                let values: Vec<BigRational> =
                    row.terms.iter().map(|t| t.value_at(&sol.point)).collect();
                let min = values.iter().min().unwrap();
                let attained = values.iter().filter(|v| *v == min).count();
                assert!(attained >= 2);
            }
        }
    }

    /// The univariate running example: x^3 - x^2 + 2x - 1 lifted by
    /// (0, 3, 1, 2).
    fn univariate_points() -> Vec<(u64, BigRational)> {
        vec![(0, q(0)), (1, q(3)), (2, q(1)), (3, q(2))]
    }

    fn univariate_row(points: &[(u64, BigRational)]) -> TropicalRow {
        TropicalRow {
            terms: points
                .iter()
                .map(|(e, w)| TropicalTerm {
                    coeffs: vec![q(*e as i64)],
                    offset: w.clone(),
                })
                .collect(),
        }
    }

    #[test]
    fn univariate_example_two_tropical_solutions() {
        let rows = vec![univariate_row(&univariate_points())];
        let solutions = solve_tropical(&rows).unwrap();
        let values: Vec<BigRational> =
            solutions.iter().map(|s| s.point[0].clone()).collect();
        assert_eq!(values, vec![q(-1), qr(-1, 2)]);
    }

    #[test]
    fn univariate_example_lower_hull() {
        let cells = lower_hull_cells_univariate(&univariate_points()).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].points, vec![(0, q(0)), (2, q(1))]);
        assert_eq!(cells[0].normal, (qr(-1, 2), q(1)));
        assert_eq!(cells[1].points, vec![(2, q(1)), (3, q(2))]);
        assert_eq!(cells[1].normal, (q(-1), q(1)));
    }

    #[test]
    fn hull_normals_agree_with_tropical_solutions() {
        for points in [
            univariate_points(),
            vec![(0, q(2)), (1, q(0)), (2, q(0)), (4, q(1))],
            vec![(0, q(0)), (3, q(1))],
        ] {
            let mut normals: Vec<BigRational> = lower_hull_cells_univariate(&points)
                .unwrap()
                .into_iter()
                .map(|cell| cell.normal.0)
                .collect();
            normals.sort();
            let mut tropical: Vec<BigRational> = solve_tropical(&[univariate_row(&points)])
                .unwrap()
                .into_iter()
                .map(|s| s.point[0].clone())
                .collect();
            tropical.sort();
            assert_eq!(normals, tropical, "points {points:?}");
        }
    }

    #[test]
    fn two_points_single_cell() {
        let cells = lower_hull_cells_univariate(&[(0, q(1)), (2, q(5))]).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].points.len(), 2);
    }

    #[test]
    fn collinear_points_form_one_cell() {
        let points = vec![(0, q(0)), (1, q(1)), (2, q(2))];
        let cells = lower_hull_cells_univariate(&points).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].points.len(), 3);
        assert_eq!(cells[0].normal, (q(-1), q(1)));
    }

    #[test]
    fn hull_input_validation() {
        assert_eq!(
            lower_hull_cells_univariate(&[(0, q(0))]),
            Err(TropicalError::TooFewPoints)
        );
        assert_eq!(
            lower_hull_cells_univariate(&[(1, q(0)), (1, q(2))]),
            Err(TropicalError::DuplicateExponent(1))
        );
    }
}
