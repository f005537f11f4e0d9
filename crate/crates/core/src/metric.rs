//! Finite carriers, binary distance tables and their axiom checkers.
//!
//! A [`BinaryTable`] stores a nonnegative value for every ordered pair of
//! points. Whether it is a metric, an almost metric (no symmetry) or neither
//! is decided by the checkers, not by the type.

use serde::Serialize;

use crate::{Error, Result};

/// A carrier of `n` labelled points `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteSpace {
    n: usize,
}

impl FiniteSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("carrier must have at least one point".into()));
        }
        Ok(FiniteSpace { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.n
    }
}

/// One instantiation of an axiom that failed: the points involved and the two
/// sides of the inequality.
///
/// For inequality axioms `lhs > rhs + tol`. For the zero-test axioms
/// (reflexive/plane sufficiency) `lhs` is the offending value and `rhs` the
/// threshold it was compared to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub points: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

/// All witnesses for one violated axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub axiom: &'static str,
    pub witnesses: Vec<Witness>,
}

/// Accumulates witnesses per axiom, in first-seen axiom order.
#[derive(Debug, Default)]
pub(crate) struct Collector {
    reports: Vec<ViolationReport>,
}

impl Collector {
    /// Records a witness when `lhs > rhs + tol`.
    pub(crate) fn leq(&mut self, axiom: &'static str, points: &[usize], lhs: f64, rhs: f64, tol: f64) {
        if lhs > rhs + tol {
            self.push(axiom, points, lhs, rhs);
        }
    }

    pub(crate) fn push(&mut self, axiom: &'static str, points: &[usize], lhs: f64, rhs: f64) {
        let witness = Witness { points: points.to_vec(), lhs, rhs };
        match self.reports.iter_mut().find(|r| r.axiom == axiom) {
            Some(r) => r.witnesses.push(witness),
            None => self.reports.push(ViolationReport { axiom, witnesses: vec![witness] }),
        }
    }

    pub(crate) fn finish(self) -> Vec<ViolationReport> {
        self.reports
    }
}

/// Comma-joined axiom ids, for error messages.
pub(crate) fn axiom_list(reports: &[ViolationReport]) -> String {
    reports.iter().map(|r| r.axiom).collect::<Vec<_>>().join(", ")
}

/// Nonnegative values on every ordered pair of a finite carrier, zero on the
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryTable {
    space: FiniteSpace,
    values: Vec<f64>,
}

impl BinaryTable {
    /// Builds a table from row-major values.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        let space = FiniteSpace::new(n)?;
        if values.len() != n * n {
            return Err(Error::InvalidTable(format!("expected {} values for n = {n}, got {}", n * n, values.len())));
        }
        for x in 0..n {
            for y in 0..n {
                let v = values[x * n + y];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidTable(format!("value at ({x},{y}) is {v}")));
                }
                if x == y && v != 0.0 {
                    return Err(Error::InvalidTable(format!("diagonal value at {x} is {v}")));
                }
            }
        }
        Ok(BinaryTable { space, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                values.push(f(x, y));
            }
        }
        Self::new(n, values)
    }

    /// The discrete metric: 0 on the diagonal, 1 elsewhere.
    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_fn(n, |x, y| if x == y { 0.0 } else { 1.0 })
    }

    /// Builds the Euclidean distance table of `positions` on the real line.
    pub fn from_positions(positions: &[f64]) -> Result<Self> {
        Self::from_fn(positions.len(), |x, y| (positions[x] - positions[y]).abs())
    }

    pub fn space(&self) -> FiniteSpace {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[x * self.space.n + y]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A distance on some carrier, finite or not.
///
/// Finite tables expose dense labels through [`Space::label`], which the
/// solver uses for exact cycle detection.
pub trait Space {
    type Point: Copy + PartialEq + std::fmt::Debug;

    fn dist(&self, a: Self::Point, b: Self::Point) -> f64;

    fn contains(&self, p: Self::Point) -> bool;

    fn label(&self, _p: Self::Point) -> Option<usize> {
        None
    }

    /// Number of points for finite carriers.
    fn size(&self) -> Option<usize> {
        None
    }
}

impl Space for BinaryTable {
    type Point = usize;

    fn dist(&self, a: usize, b: usize) -> f64 {
        self.get(a, b)
    }

    fn contains(&self, p: usize) -> bool {
        self.space.contains(p)
    }

    fn label(&self, p: usize) -> Option<usize> {
        Some(p)
    }

    fn size(&self) -> Option<usize> {
        Some(self.n())
    }
}

/// The real line with `|a - b|`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RealLine;

impl Space for RealLine {
    type Point = f64;

    fn dist(&self, a: f64, b: f64) -> f64 {
        (a - b).abs()
    }

    fn contains(&self, p: f64) -> bool {
        p.is_finite()
    }
}

/// A closed interval of the real line with the Euclidean distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidTable(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// `count` evenly spaced points including both endpoints.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![self.lo],
            _ => {
                let step = (self.hi - self.lo) / (count - 1) as f64;
                let mut pts: Vec<f64> = (0..count).map(|i| self.lo + step * i as f64).collect();
                pts[count - 1] = self.hi;
                pts
            }
        }
    }
}

impl Space for Interval {
    type Point = f64;

    fn dist(&self, a: f64, b: f64) -> f64 {
        (a - b).abs()
    }

    fn contains(&self, p: f64) -> bool {
        p >= self.lo && p <= self.hi
    }
}

/// Largest distance between two members of `subset` (in both orders, so the
/// result is meaningful for asymmetric tables too).
pub fn diam<S: Space>(space: &S, subset: &[S::Point]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySetDiameter);
    }
    if let Some(n) = space.size() {
        for &p in subset {
            if !space.contains(p) {
                return Err(Error::PointOutOfRange { point: space.label(p).unwrap_or(usize::MAX), n });
            }
        }
    }
    let mut best = 0.0_f64;
    for &a in subset {
        for &b in subset {
            best = best.max(space.dist(a, b));
        }
    }
    Ok(best)
}

/// Like [`diam`] for callers that already know `subset` is nonempty and in range.
pub(crate) fn diam_of<S: Space>(space: &S, subset: &[S::Point]) -> f64 {
    let mut best = 0.0_f64;
    for &a in subset {
        for &b in subset {
            best = best.max(space.dist(a, b));
        }
    }
    best
}

fn check_reflexive_sufficient(table: &BinaryTable, tol: f64, out: &mut Collector) {
    let n = table.n();
    for x in 0..n {
        for y in 0..n {
            let v = table.get(x, y);
            if x == y {
                out.leq("reflexive-sufficient", &[x, y], v, 0.0, tol);
            } else if v <= tol {
                out.push("reflexive-sufficient", &[x, y], v, tol);
            }
        }
    }
}

fn check_triangle(table: &BinaryTable, tol: f64, out: &mut Collector) {
    let n = table.n();
    for x in 0..n {
        for y in 0..n {
            let lhs = table.get(x, y);
            for z in 0..n {
                out.leq("triangle", &[x, y, z], lhs, table.get(x, z) + table.get(z, y), tol);
            }
        }
    }
}

/// Triangle inequality, reflexive sufficiency and symmetry.
pub fn check_metric(table: &BinaryTable, tol: f64) -> Vec<ViolationReport> {
    let mut out = Collector::default();
    check_triangle(table, tol, &mut out);
    check_reflexive_sufficient(table, tol, &mut out);
    let n = table.n();
    for x in 0..n {
        for y in x + 1..n {
            let gap = (table.get(x, y) - table.get(y, x)).abs();
            out.leq("symmetry", &[x, y], gap, 0.0, tol);
        }
    }
    out.finish()
}

/// Triangle inequality and reflexive sufficiency; symmetry is not required.
pub fn check_almost_metric(table: &BinaryTable, tol: f64) -> Vec<ViolationReport> {
    let mut out = Collector::default();
    check_triangle(table, tol, &mut out);
    check_reflexive_sufficient(table, tol, &mut out);
    out.finish()
}

fn check_window(len: usize, window: usize) -> Result<()> {
    if window == 0 {
        return Err(Error::EmptyWindow);
    }
    if len < window {
        return Err(Error::PrefixTooShort { len, window });
    }
    Ok(())
}

/// Finite surrogate of `g(x_n, x) -> 0`: every entry of the last `window`
/// points is within `eps` of `x`.
pub fn converges_prefix(table: &BinaryTable, seq: &[usize], x: usize, eps: f64, window: usize) -> Result<bool> {
    check_window(seq.len(), window)?;
    let tail = &seq[seq.len() - window..];
    Ok(tail.iter().all(|&p| table.get(p, x) <= eps))
}

/// Finite surrogate of `g(x_m, x_n) -> 0` over the last `window` points.
pub fn cauchy_prefix(table: &BinaryTable, seq: &[usize], eps: f64, window: usize) -> Result<bool> {
    check_window(seq.len(), window)?;
    let tail = &seq[seq.len() - window..];
    Ok(tail.iter().all(|&a| tail.iter().all(|&b| table.get(a, b) <= eps)))
}

pub(crate) fn window_tail(len: usize, window: usize) -> Result<std::ops::Range<usize>> {
    check_window(len, window)?;
    Ok(len - window..len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn line3() -> BinaryTable {
        BinaryTable::from_fn(3, |i, j| (i as f64 - j as f64).abs()).unwrap()
    }

    #[test]
    fn diam_examples() {
        let d = BinaryTable::discrete(3).unwrap();
        assert_eq!(diam(&d, &[0]).unwrap(), 0.0);
        assert_eq!(diam(&d, &[0, 1, 2]).unwrap(), 1.0);
        assert_eq!(diam(&line3(), &[0, 2]).unwrap(), 2.0);
    }

    #[test]
    fn diam_errors() {
        let d = BinaryTable::discrete(3).unwrap();
        assert_eq!(diam(&d, &[]), Err(Error::EmptySetDiameter));
        assert_eq!(diam(&d, &[0, 3]).unwrap_err().id(), "point-out-of-range");
    }

    #[test]
    fn diam_of_pair_uses_both_orders() {
        let t = BinaryTable::new(2, vec![0.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(diam(&t, &[0, 1]).unwrap(), 2.0);
    }

    #[test]
    fn discrete_metric_passes() {
        let d = BinaryTable::discrete(3).unwrap();
        assert!(check_metric(&d, DEFAULT_TOL).is_empty());
        assert!(check_almost_metric(&d, DEFAULT_TOL).is_empty());
    }

    #[test]
    fn single_point_passes() {
        let d = BinaryTable::discrete(1).unwrap();
        assert!(check_metric(&d, DEFAULT_TOL).is_empty());
    }

    #[test]
    fn asymmetric_pair_reports_symmetry_only() {
        let t = BinaryTable::new(2, vec![0.0, 1.0, 2.0, 0.0]).unwrap();
        let reports = check_metric(&t, DEFAULT_TOL);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].axiom, "symmetry");
        assert_eq!(reports[0].witnesses.len(), 1);
        assert_eq!(reports[0].witnesses[0].points, vec![0, 1]);
        assert!(check_almost_metric(&t, DEFAULT_TOL).is_empty());
    }

    #[test]
    fn zero_off_diagonal_is_not_sufficient() {
        let t = BinaryTable::new(2, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let reports = check_almost_metric(&t, DEFAULT_TOL);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].axiom, "reflexive-sufficient");
        assert_eq!(reports[0].witnesses[0].points, vec![0, 1]);
    }

    #[test]
    fn triangle_violation_collects_every_witness() {
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2, in both orders.
        let t = BinaryTable::new(3, vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0]).unwrap();
        let reports = check_metric(&t, DEFAULT_TOL);
        assert_eq!(reports.len(), 1);
        let pts: Vec<_> = reports[0].witnesses.iter().map(|w| w.points.clone()).collect();
        assert_eq!(pts, vec![vec![0, 2, 1], vec![2, 0, 1]]);
    }

    #[test]
    fn construction_rejects_bad_values() {
        assert!(BinaryTable::new(2, vec![0.0, -1.0, 1.0, 0.0]).is_err());
        assert!(BinaryTable::new(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(BinaryTable::new(2, vec![0.0, 1.0, 1.0]).is_err());
        assert!(BinaryTable::new(0, vec![]).is_err());
        assert!(BinaryTable::new(2, vec![0.0, f64::NAN, 1.0, 0.0]).is_err());
    }

    #[test]
    fn prefix_surrogates() {
        let d = BinaryTable::discrete(2).unwrap();
        assert!(converges_prefix(&d, &[1, 0, 0, 0], 0, 0.0, 3).unwrap());
        assert!(!converges_prefix(&d, &[1, 0, 0, 0], 0, 0.5, 4).unwrap());
        assert!(cauchy_prefix(&d, &[1, 0, 0], 0.0, 2).unwrap());
        assert!(!cauchy_prefix(&d, &[0, 1, 0], 0.5, 2).unwrap());
        assert_eq!(cauchy_prefix(&d, &[0], 0.5, 2), Err(Error::PrefixTooShort { len: 1, window: 2 }));
        assert_eq!(cauchy_prefix(&d, &[0], 0.5, 0), Err(Error::EmptyWindow));
    }

    #[test]
    fn interval_grid_hits_endpoints() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let g = iv.grid(11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!((g[3] - 0.3).abs() < 1e-15);
    }
}
