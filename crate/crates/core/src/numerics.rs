//! Scalars, tolerances, dense tensors and the multiplicative constraint solver.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Scalar = Complex64;

pub const ONE: Scalar = Scalar::new(1.0, 0.0);
pub const ZERO: Scalar = Scalar::new(0.0, 0.0);

pub fn real(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_eps: 1e-9, rel_eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Self {
        Tolerance { abs_eps, rel_eps }
    }

    /// Allowed deviation between two values of the given magnitudes.
    pub fn band(&self, x: f64, y: f64) -> f64 {
        self.abs_eps + self.rel_eps * x.max(y)
    }
}

pub fn approx_eq(x: Scalar, y: Scalar, tol: Tolerance) -> bool {
    (x - y).norm() <= tol.band(x.norm(), y.norm())
}

pub fn approx_eq_slice(x: &[Scalar], y: &[Scalar], tol: Tolerance) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| approx_eq(*a, *b, tol))
}

/// Total order on scalars used for canonical sorting: real part first, then imaginary,
/// with values inside the tolerance band treated as equal.
pub fn cmp_scalar(x: Scalar, y: Scalar, tol: Tolerance) -> Ordering {
    let key = |a: f64, b: f64| {
        if (a - b).abs() <= tol.band(a.abs(), b.abs()) {
            Ordering::Equal
        } else if a < b {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    };
    key(x.re, y.re).then_with(|| key(x.im, y.im))
}

pub fn cmp_vectors(x: &[Scalar], y: &[Scalar], tol: Tolerance) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        let c = cmp_scalar(*a, *b, tol);
        if c != Ordering::Equal {
            return c;
        }
    }
    x.len().cmp(&y.len())
}

/// Rounds tiny components to zero and removes negative zeros so printed values are stable.
pub fn clean(x: Scalar) -> Scalar {
    let fix = |v: f64| if v.abs() < 1e-13 { 0.0 } else { v };
    Scalar::new(fix(x.re), fix(x.im))
}

pub fn format_scalar(x: Scalar) -> String {
    let x = clean(x);
    if x.im == 0.0 {
        format!("{}", x.re)
    } else if x.re == 0.0 {
        format!("{}i", x.im)
    } else if x.im < 0.0 {
        format!("{}-{}i", x.re, -x.im)
    } else {
        format!("{}+{}i", x.re, x.im)
    }
}

/// Dense tensor whose axes are indexed by ordered label sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledTensor<T> {
    pub axes: Vec<Vec<String>>,
    pub entries: Vec<T>,
}

impl<T: Clone + Default> LabeledTensor<T> {
    pub fn new(axes: Vec<Vec<String>>) -> Self {
        let size = axes.iter().map(Vec::len).product();
        LabeledTensor { axes, entries: vec![T::default(); size] }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.axes.len());
        let mut off = 0;
        for (axis, &i) in self.axes.iter().zip(idx) {
            debug_assert!(i < axis.len());
            off = off * axis.len() + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.entries[self.offset(idx)].clone()
    }

    pub fn set(&mut self, idx: &[usize], value: T) {
        let off = self.offset(idx);
        self.entries[off] = value;
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }
}

/// Small dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> Scalar {
        self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` for (numerically) singular input.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| {
                a.at(i, col).norm().partial_cmp(&a.at(j, col).norm()).unwrap_or(Ordering::Equal)
            })?;
            if a.at(pivot, col).norm() < 1e-13 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.at(col, col);
            for j in 0..n {
                *a.at_mut(col, j) /= p;
                *inv.at_mut(col, j) /= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a.at(i, col);
                if factor == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a.at(col, j), inv.at(col, j));
                    *a.at_mut(i, j) -= factor * x;
                    *inv.at_mut(i, j) -= factor * y;
                }
            }
        }
        Some(inv)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("inconsistent multiplicative system: {0}")]
    InconsistentSystem(String),
    #[error("unbounded branching on unknown `{0}`")]
    UnboundedBranching(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    /// Sparse integer exponent vector over the unknowns.
    pub exponents: Vec<(usize, i64)>,
    pub target: Scalar,
    pub tag: String,
}

/// A system of monomial equations `prod_i x_i^{e_i} = t` in nonzero unknowns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultiplicativeSystem {
    pub unknowns: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl MultiplicativeSystem {
    pub fn new(unknowns: Vec<String>) -> Self {
        MultiplicativeSystem { unknowns, constraints: Vec::new() }
    }

    /// Adds a constraint; repeated unknowns in `exponents` are merged and zero exponents dropped.
    pub fn add(&mut self, exponents: &[(usize, i64)], target: Scalar, tag: impl Into<String>) {
        assert!(target != ZERO, "multiplicative targets must be nonzero");
        let mut dense = vec![0i64; self.unknowns.len()];
        for &(u, e) in exponents {
            dense[u] += e;
        }
        let exponents = dense.iter().enumerate().filter(|(_, &e)| e != 0).map(|(u, &e)| (u, e)).collect();
        self.constraints.push(Constraint { exponents, target, tag: tag.into() });
    }

    pub fn evaluate(&self, c: &Constraint, values: &[Scalar]) -> Scalar {
        c.exponents.iter().fold(ONE, |acc, &(u, e)| acc * values[u].powi(e as i32))
    }

    /// Largest constraint deviation and the tag of the worst constraint.
    pub fn residual(&self, values: &[Scalar]) -> (f64, Option<String>) {
        let mut worst = (0.0, None);
        for c in &self.constraints {
            let r = (self.evaluate(c, values) - c.target).norm();
            if r > worst.0 {
                worst = (r, Some(c.tag.clone()));
            }
        }
        worst
    }

    pub fn satisfied_by(&self, values: &[Scalar], tol: Tolerance) -> bool {
        values.iter().all(|v| v.norm() > 0.0 && v.is_finite())
            && self.constraints.iter().all(|c| approx_eq(self.evaluate(c, values), c.target, tol))
    }

    /// True when every unknown is reachable from every other through shared constraints.
    pub fn is_connected(&self) -> bool {
        let n = self.unknowns.len();
        if n <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for c in &self.constraints {
            if let Some(&(first, _)) = c.exponents.first() {
                for &(u, _) in &c.exponents[1..] {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, u));
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, 0);
        (1..n).all(|u| find(&mut parent, u) == root)
    }
}

/// A pivot row of the integer echelon form: `x_col^{lead} * prod_{j>col} x_j^{rest_j} = target`.
struct PivotRow {
    col: usize,
    lead: i64,
    rest: Vec<(usize, i64)>,
    target: Scalar,
}

/// Solves a multiplicative system exactly up to branching.
///
/// The exponent matrix is brought to integer echelon form by unimodular row operations
/// (targets transform multiplicatively), which generalizes spanning-tree propagation to
/// constraints with several unknowns. Back-substitution from the last pivot branches over
/// the `lead`-th roots; every candidate is then checked against the original constraints.
/// `root_orders[u] == 0` means no bound was supplied for `u`.
pub fn solve_multiplicative(
    sys: &MultiplicativeSystem,
    root_orders: &[u32],
    tol: Tolerance,
) -> Result<Vec<Vec<Scalar>>, NumericsError> {
    let n = sys.unknowns.len();
    assert_eq!(root_orders.len(), n, "root_orders must cover every unknown");
    let mut rows: Vec<(Vec<i64>, Scalar)> = sys
        .constraints
        .iter()
        .map(|c| {
            let mut dense = vec![0i64; n];
            for &(u, e) in &c.exponents {
                dense[u] += e;
            }
            (dense, c.target)
        })
        .collect();

    let mut pivots: Vec<PivotRow> = Vec::new();
    let mut cur = 0;
    for col in 0..n {
        loop {
            let candidates: Vec<usize> = (cur..rows.len()).filter(|&r| rows[r].0[col] != 0).collect();
            if candidates.is_empty() {
                return Err(NumericsError::UnboundedBranching(sys.unknowns[col].clone()));
            }
            let best = *candidates.iter().min_by_key(|&&r| rows[r].0[col].abs()).unwrap();
            rows.swap(cur, best);
            if rows[cur].0[col] < 0 {
                for e in rows[cur].0.iter_mut() {
                    *e = -*e;
                }
                rows[cur].1 = rows[cur].1.inv();
            }
            let mut reduced_all = true;
            for r in cur + 1..rows.len() {
                let e = rows[r].0[col];
                if e == 0 {
                    continue;
                }
                let q = e.div_euclid(rows[cur].0[col]);
                let (pivot_row, pivot_target) = (rows[cur].0.clone(), rows[cur].1);
                for (x, p) in rows[r].0.iter_mut().zip(&pivot_row) {
                    *x -= q * p;
                }
                rows[r].1 /= pivot_target.powi(q as i32);
                if rows[r].0[col] != 0 {
                    reduced_all = false;
                }
            }
            if reduced_all {
                break;
            }
        }
        let (dense, target) = rows[cur].clone();
        pivots.push(PivotRow {
            col,
            lead: dense[col],
            rest: dense.iter().enumerate().skip(col + 1).filter(|(_, &e)| e != 0).map(|(j, &e)| (j, e)).collect(),
            target,
        });
        cur += 1;
    }
    for (dense, target) in &rows[cur..] {
        debug_assert!(dense.iter().all(|&e| e == 0));
        if !approx_eq(*target, ONE, tol) {
            return Err(NumericsError::InconsistentSystem(format!(
                "derived relation 1 = {}",
                format_scalar(*target)
            )));
        }
    }
    for p in &pivots {
        if p.lead > 1 {
            let bound = root_orders[p.col];
            if bound == 0 || p.lead > i64::from(bound) {
                return Err(NumericsError::UnboundedBranching(sys.unknowns[p.col].clone()));
            }
        }
    }

    let mut found: Vec<Vec<Scalar>> = Vec::new();
    let mut values = vec![ONE; n];
    back_substitute(&pivots, pivots.len(), &mut values, &mut found);

    let mut solutions: Vec<Vec<Scalar>> = Vec::new();
    for cand in found {
        if sys.satisfied_by(&cand, tol) && !solutions.iter().any(|s| approx_eq_slice(s, &cand, tol)) {
            solutions.push(cand.into_iter().map(clean).collect());
        }
    }
    if solutions.is_empty() {
        let detail = sys.constraints.first().map(|c| c.tag.clone()).unwrap_or_default();
        return Err(NumericsError::InconsistentSystem(format!("no assignment survives ({detail})")));
    }
    solutions.sort_by(|a, b| cmp_vectors(a, b, tol));
    Ok(solutions)
}

fn back_substitute(pivots: &[PivotRow], remaining: usize, values: &mut Vec<Scalar>, out: &mut Vec<Vec<Scalar>>) {
    if remaining == 0 {
        out.push(values.clone());
        return;
    }
    let p = &pivots[remaining - 1];
    let known = p.rest.iter().fold(ONE, |acc, &(j, e)| acc * values[j].powi(e as i32));
    let rhs = p.target / known;
    for root in nth_roots(rhs, p.lead as u32) {
        values[p.col] = root;
        back_substitute(pivots, remaining - 1, values, out);
    }
}

/// All `k`-th roots of `w` (principal root times the `k`-th roots of unity).
pub fn nth_roots(w: Scalar, k: u32) -> Vec<Scalar> {
    let principal = Scalar::from_polar(w.norm().powf(1.0 / f64::from(k)), w.arg() / f64::from(k));
    (0..k).map(|j| clean(principal * root_of_unity(k, j))).collect()
}

pub fn root_of_unity(order: u32, power: u32) -> Scalar {
    Scalar::from_polar(1.0, 2.0 * PI * f64::from(power) / f64::from(order))
}
