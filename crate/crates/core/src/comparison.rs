//! Comparison functions `phi` on the nonnegative reals and the properties the
//! contraction classes ask of them.
//!
//! Linear and piecewise-linear functions get exact verdicts from their closed
//! form. Opaque callables only get grid evidence, and the verdict says so.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::{Error, Result};

/// Default shrinking offsets used to estimate right limits of callables.
pub const DEFAULT_DELTAS: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Samples used by the callable scan in [`find_beta`].
const BETA_SCAN_SAMPLES: usize = 10_000;
const BISECTION_STEPS: usize = 200;

/// Piecewise-linear function given by knots `(t, phi(t))`.
///
/// Knot abscissas start at 0 and never decrease. Two knots may share an
/// abscissa to encode a jump: the first value is taken at the point itself,
/// the second is the right limit. Beyond the last knot the function continues
/// with the slope of the last nondegenerate segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    knots: Vec<(f64, f64)>,
    final_slope: f64,
}

/// One maximal open interval on which a piecewise function is affine.
#[derive(Debug, Clone, Copy)]
struct Piece {
    start: f64,
    /// Right limit of phi at `start`.
    start_value: f64,
    /// `None` for the final unbounded ray.
    end: Option<f64>,
    slope: f64,
}

impl Piecewise {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidComparison(msg));
        if knots.is_empty() {
            return bad("no knots".into());
        }
        if knots[0].0 != 0.0 {
            return bad(format!("first knot must be at t = 0, got {}", knots[0].0));
        }
        for (i, &(t, v)) in knots.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() || v < 0.0 {
                return bad(format!("knot {i} = ({t}, {v})"));
            }
            if i > 0 && t < knots[i - 1].0 {
                return bad(format!("knot {i} at t = {t} goes backwards"));
            }
            if i > 1 && t == knots[i - 2].0 {
                return bad(format!("more than two knots at t = {t}"));
            }
        }
        let final_slope = knots
            .windows(2)
            .rev()
            .find(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .unwrap_or(0.0);
        if final_slope < 0.0 {
            return bad("final slope is negative, values would leave the nonnegative reals".into());
        }
        Ok(Piecewise { knots, final_slope })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn final_slope(&self) -> f64 {
        self.final_slope
    }

    fn eval(&self, t: f64) -> f64 {
        let last = *self.knots.last().unwrap();
        if t >= last.0 {
            if t == last.0 {
                return self.value_at_knot(t);
            }
            return last.1 + self.final_slope * (t - last.0);
        }
        // First knot strictly right of t.
        let hi = self.knots.partition_point(|k| k.0 <= t);
        let (t1, v1) = self.knots[hi];
        let (t0, v0) = self.knots[hi - 1];
        if t == t0 {
            return self.value_at_knot(t);
        }
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    fn value_at_knot(&self, t: f64) -> f64 {
        self.knots.iter().find(|k| k.0 == t).unwrap().1
    }

    /// Right limit of phi at `t`.
    pub fn right_limit(&self, t: f64) -> f64 {
        match self.knots.iter().rposition(|k| k.0 == t) {
            Some(i) => self.knots[i].1,
            None => self.eval(t),
        }
    }

    /// Distinct abscissas with their own value and right limit.
    fn knot_values(&self) -> Vec<(f64, f64, f64)> {
        let mut out: Vec<(f64, f64, f64)> = Vec::new();
        for &(t, v) in &self.knots {
            match out.last_mut() {
                Some(last) if last.0 == t => last.2 = v,
                _ => out.push((t, v, v)),
            }
        }
        out
    }

    fn pieces(&self) -> Vec<Piece> {
        let kv = self.knot_values();
        let mut out = Vec::with_capacity(kv.len());
        for w in kv.windows(2) {
            let (a, _, va) = w[0];
            let (b, vb, _) = w[1];
            out.push(Piece { start: a, start_value: va, end: Some(b), slope: (vb - va) / (b - a) });
        }
        let (a, _, va) = *kv.last().unwrap();
        out.push(Piece { start: a, start_value: va, end: None, slope: self.final_slope });
        out
    }
}

/// A comparison function.
#[derive(Clone)]
pub enum ComparisonFunction {
    /// `t -> alpha * t`.
    Linear(f64),
    PiecewiseLinear(Piecewise),
    /// An opaque evaluator; only grid evidence is available for it.
    Callable {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonFunction::Linear(a) => write!(f, "Linear({a})"),
            ComparisonFunction::PiecewiseLinear(p) => write!(f, "PiecewiseLinear({:?})", p.knots),
            ComparisonFunction::Callable { name, .. } => write!(f, "Callable({name})"),
        }
    }
}

impl fmt::Display for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonFunction::Linear(a) => write!(f, "linear:{a}"),
            ComparisonFunction::PiecewiseLinear(p) => {
                let parts: Vec<String> = p.knots.iter().map(|(t, v)| format!("{t},{v}")).collect();
                write!(f, "pwl:{}", parts.join(";"))
            }
            ComparisonFunction::Callable { name, .. } => write!(f, "callable:{name}"),
        }
    }
}

impl ComparisonFunction {
    pub fn linear(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidComparison(format!("linear slope must be >= 0, got {alpha}")));
        }
        Ok(ComparisonFunction::Linear(alpha))
    }

    pub fn piecewise(knots: Vec<(f64, f64)>) -> Result<Self> {
        Piecewise::new(knots).map(ComparisonFunction::PiecewiseLinear)
    }

    pub fn callable(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ComparisonFunction::Callable { name: name.into(), f: Arc::new(f) }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ComparisonFunction::Linear(a) => a * t,
            ComparisonFunction::PiecewiseLinear(p) => p.eval(t),
            ComparisonFunction::Callable { f, .. } => f(t),
        }
    }

    /// `phi^n(t)`.
    pub fn iterate(&self, t: f64, n: usize) -> f64 {
        (0..n).fold(t, |acc, _| self.eval(acc))
    }

    /// The complement `t - phi(t)`.
    pub fn complement(&self, t: f64) -> f64 {
        t - self.eval(t)
    }
}

impl FromStr for ComparisonFunction {
    type Err = Error;

    /// Parses `linear:<alpha>` or `pwl:<t0>,<v0>;<t1>,<v1>;...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidComparison(format!("cannot parse '{s}'"));
        let (family, rest) = s.split_once(':').ok_or_else(bad)?;
        match family.trim() {
            "linear" => ComparisonFunction::linear(rest.trim().parse().map_err(|_| bad())?),
            "pwl" => {
                let mut knots = Vec::new();
                for pair in rest.split(';').filter(|p| !p.trim().is_empty()) {
                    let (t, v) = pair.split_once(',').ok_or_else(bad)?;
                    knots.push((t.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?));
                }
                ComparisonFunction::piecewise(knots)
            }
            _ => Err(bad()),
        }
    }
}

/// How a property was established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedClosedForm,
    VerifiedOnGrid,
    Refuted { witness: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub property: &'static str,
    pub verdict: Verdict,
    /// Present for grid verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
}

impl PropertyVerdict {
    fn closed(property: &'static str, verdict: Verdict) -> Self {
        PropertyVerdict { property, verdict, grid: None }
    }

    fn on_grid(property: &'static str, verdict: Verdict, grid: &[f64]) -> Self {
        let desc = format!("{} points in [{}, {}]", grid.len(), grid[0], grid[grid.len() - 1]);
        PropertyVerdict { property, verdict, grid: Some(desc) }
    }

    pub fn is_verified(&self) -> bool {
        !matches!(self.verdict, Verdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for (i, &g) in grid.iter().enumerate() {
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidGrid(format!("point {i} is {g}")));
        }
        if i > 0 && g <= grid[i - 1] {
            return Err(Error::InvalidGrid(format!("point {i} = {g} is not increasing")));
        }
    }
    Ok(())
}

/// `t1 <= t2` implies `phi(t1) <= phi(t2)`.
pub fn check_increasing(phi: &ComparisonFunction, grid: &[f64]) -> Result<PropertyVerdict> {
    const ID: &str = "increasing";
    match phi {
        ComparisonFunction::Linear(_) => Ok(PropertyVerdict::closed(ID, Verdict::VerifiedClosedForm)),
        ComparisonFunction::PiecewiseLinear(p) => {
            for (t, v, right) in p.knot_values() {
                if right < v {
                    return Ok(PropertyVerdict::closed(ID, Verdict::Refuted { witness: t }));
                }
            }
            for piece in p.pieces() {
                if piece.slope < 0.0 {
                    return Ok(PropertyVerdict::closed(ID, Verdict::Refuted { witness: piece.start }));
                }
            }
            Ok(PropertyVerdict::closed(ID, Verdict::VerifiedClosedForm))
        }
        ComparisonFunction::Callable { f, .. } => {
            validate_grid(grid)?;
            for w in grid.windows(2) {
                if f(w[0]) > f(w[1]) {
                    return Ok(PropertyVerdict::on_grid(ID, Verdict::Refuted { witness: w[0] }, grid));
                }
            }
            Ok(PropertyVerdict::on_grid(ID, Verdict::VerifiedOnGrid, grid))
        }
    }
}

/// A point of the open piece where `t - phi(t) <= 0`, if any.
fn piece_violation(piece: &Piece) -> Option<f64> {
    let a = piece.start;
    let psi_a = a - piece.start_value;
    let k = 1.0 - piece.slope;
    match piece.end {
        Some(b) => {
            let psi_b = psi_a + k * (b - a);
            if psi_a >= 0.0 && psi_b >= 0.0 && (psi_a > 0.0 || psi_b > 0.0) {
                return None;
            }
            if psi_a <= 0.0 && psi_b <= 0.0 {
                return Some(0.5 * (a + b));
            }
            let root = a - psi_a / k;
            Some(if psi_a < 0.0 { 0.5 * (a + root) } else { 0.5 * (root + b) })
        }
        None => {
            if psi_a >= 0.0 && k >= 0.0 && (psi_a > 0.0 || k > 0.0) {
                return None;
            }
            if psi_a <= 0.0 && k <= 0.0 {
                return Some(a + 1.0);
            }
            let root = a - psi_a / k;
            Some(if psi_a < 0.0 { 0.5 * (a + root) } else { root + 1.0 })
        }
    }
}

/// `phi(t) < t` for every `t > 0`, and `phi(0) = 0`.
pub fn check_regressive(phi: &ComparisonFunction, grid: &[f64]) -> Result<PropertyVerdict> {
    const ID: &str = "regressive";
    match phi {
        ComparisonFunction::Linear(a) => Ok(PropertyVerdict::closed(
            ID,
            if *a < 1.0 { Verdict::VerifiedClosedForm } else { Verdict::Refuted { witness: 1.0 } },
        )),
        ComparisonFunction::PiecewiseLinear(p) => Ok(PropertyVerdict::closed(ID, piecewise_regression(p, false))),
        ComparisonFunction::Callable { f, .. } => {
            validate_grid(grid)?;
            if f(0.0) != 0.0 {
                return Ok(PropertyVerdict::on_grid(ID, Verdict::Refuted { witness: 0.0 }, grid));
            }
            for &t in grid.iter().filter(|&&t| t > 0.0) {
                if f(t) >= t {
                    return Ok(PropertyVerdict::on_grid(ID, Verdict::Refuted { witness: t }, grid));
                }
            }
            Ok(PropertyVerdict::on_grid(ID, Verdict::VerifiedOnGrid, grid))
        }
    }
}

fn piecewise_regression(p: &Piecewise, use_right_limit: bool) -> Verdict {
    for (t, v, right) in p.knot_values() {
        if t == 0.0 {
            if v != 0.0 {
                return Verdict::Refuted { witness: 0.0 };
            }
            continue;
        }
        let at = if use_right_limit { right } else { v };
        if at >= t {
            return Verdict::Refuted { witness: t };
        }
    }
    for piece in p.pieces() {
        if let Some(w) = piece_violation(&piece) {
            return Verdict::Refuted { witness: w };
        }
    }
    Verdict::VerifiedClosedForm
}

/// `phi(s+0) < s` for every `s > 0`.
///
/// For callables the right limit at each grid point `s` is estimated by
/// `phi(s + delta)` over the shrinking `deltas`; the last two estimates must
/// agree within `tol` plus the larger of their two offsets, and the last one
/// must sit below `s - tol`. An unstable
/// estimate counts as a refutation at `s`.
pub fn check_super_regressive(
    phi: &ComparisonFunction,
    grid: &[f64],
    deltas: &[f64],
    tol: f64,
) -> Result<PropertyVerdict> {
    const ID: &str = "super-regressive";
    match phi {
        ComparisonFunction::Linear(a) => Ok(PropertyVerdict::closed(
            ID,
            if *a < 1.0 { Verdict::VerifiedClosedForm } else { Verdict::Refuted { witness: 1.0 } },
        )),
        ComparisonFunction::PiecewiseLinear(p) => Ok(PropertyVerdict::closed(ID, piecewise_regression(p, true))),
        ComparisonFunction::Callable { f, .. } => {
            validate_grid(grid)?;
            if deltas.is_empty() || deltas.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
                return Err(Error::InvalidGrid("deltas must be positive".into()));
            }
            if deltas.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidGrid("deltas must decrease".into()));
            }
            if f(0.0) != 0.0 {
                return Ok(PropertyVerdict::on_grid(ID, Verdict::Refuted { witness: 0.0 }, grid));
            }
            for &s in grid.iter().filter(|&&s| s > 0.0) {
                let estimates: Vec<f64> = deltas.iter().map(|&d| f(s + d)).collect();
                let last = estimates[estimates.len() - 1];
                let k = estimates.len();
                let stable = k < 2 || (last - estimates[k - 2]).abs() <= tol + deltas[k - 2];
                if !stable || last >= s - tol {
                    return Ok(PropertyVerdict::on_grid(ID, Verdict::Refuted { witness: s }, grid));
                }
            }
            Ok(PropertyVerdict::on_grid(ID, Verdict::VerifiedOnGrid, grid))
        }
    }
}

/// Least `n <= max_iter` with `phi^n(t) <= tol`, or `None` when the orbit is
/// still above `tol` after `max_iter` steps (evidence against admissibility
/// at `t`, not a proof).
pub fn matkowski_iterate(phi: &ComparisonFunction, t: f64, tol: f64, max_iter: usize) -> Result<Option<usize>> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveArgument(t));
    }
    if !(tol > 0.0) {
        return Err(Error::NonpositiveArgument(tol));
    }
    let mut value = t;
    for n in 0..=max_iter {
        if value <= tol {
            return Ok(Some(n));
        }
        value = phi.eval(value);
    }
    Ok(None)
}

/// A `beta > alpha` such that `t <= alpha + phi(t)` forces `t <= beta`.
///
/// Linear functions use the closed form `alpha / (1 - slope)`; piecewise
/// functions are solved exactly segment by segment; callables are scanned on
/// `[alpha, search_cap]` and the last crossing refined by bisection. Returns
/// `None` when the complement does not exceed `alpha` before `search_cap`.
pub fn find_beta(phi: &ComparisonFunction, alpha: f64, search_cap: f64) -> Result<Option<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::NonpositiveAlpha(alpha));
    }
    let above_alpha = |beta: f64| if beta > alpha { beta } else { alpha.next_up() };
    match phi {
        ComparisonFunction::Linear(s) => {
            if *s >= 1.0 {
                return Ok(None);
            }
            Ok(Some(above_alpha(alpha / (1.0 - s))))
        }
        ComparisonFunction::PiecewiseLinear(p) => {
            let Some(sup) = piecewise_last_crossing(p, alpha) else {
                return Ok(None);
            };
            if sup > search_cap {
                return Ok(None);
            }
            Ok(Some(above_alpha(sup)))
        }
        ComparisonFunction::Callable { .. } => {
            if !(search_cap > alpha) {
                return Ok(None);
            }
            let psi = |t: f64| phi.complement(t);
            if psi(search_cap) <= alpha {
                return Ok(None);
            }
            let step = (search_cap - alpha) / BETA_SCAN_SAMPLES as f64;
            let mut last_bad = alpha;
            for i in 0..=BETA_SCAN_SAMPLES {
                let t = if i == BETA_SCAN_SAMPLES { search_cap } else { alpha + step * i as f64 };
                if psi(t) <= alpha {
                    last_bad = t;
                }
            }
            let (mut lo, mut hi) = (last_bad, (last_bad + step).min(search_cap));
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if psi(mid) <= alpha {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(Some(above_alpha(hi)))
        }
    }
}

/// `sup { t >= 0 : t - phi(t) <= alpha }`, or `None` if unbounded.
fn piecewise_last_crossing(p: &Piecewise, alpha: f64) -> Option<f64> {
    let mut sup = 0.0_f64;
    for (t, v, right) in p.knot_values() {
        if t - v <= alpha || t - right <= alpha {
            sup = sup.max(t);
        }
    }
    for piece in p.pieces() {
        let a = piece.start;
        let psi_a = a - piece.start_value;
        let k = 1.0 - piece.slope;
        match piece.end {
            Some(b) => {
                let psi_b = psi_a + k * (b - a);
                if psi_b <= alpha {
                    sup = sup.max(b);
                } else if psi_a <= alpha {
                    sup = sup.max(a + (alpha - psi_a) / k);
                }
            }
            None => {
                if k <= 0.0 {
                    if psi_a <= alpha || k < 0.0 {
                        return None;
                    }
                } else if psi_a <= alpha {
                    sup = sup.max(a + (alpha - psi_a) / k);
                }
            }
        }
    }
    Some(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, step: f64) -> Vec<f64> {
        (0..=n).map(|i| i as f64 * step).collect()
    }

    #[test]
    fn piecewise_evaluation() {
        let p = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.5), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(p.eval(0.5), 0.25);
        assert_eq!(p.eval(1.0), 0.5);
        assert_eq!(p.eval(1.5), 1.25);
        assert_eq!(p.eval(3.0), 2.0);
        if let ComparisonFunction::PiecewiseLinear(pw) = &p {
            assert_eq!(pw.right_limit(1.0), 1.0);
            assert_eq!(pw.final_slope(), 0.5);
        }
    }

    #[test]
    fn piecewise_validation() {
        assert!(ComparisonFunction::piecewise(vec![]).is_err());
        assert!(ComparisonFunction::piecewise(vec![(1.0, 0.0)]).is_err());
        assert!(ComparisonFunction::piecewise(vec![(0.0, 0.0), (2.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, -1.0)]).is_err());
        assert!(ComparisonFunction::piecewise(vec![(0.0, 1.0), (1.0, 0.5)]).is_err());
        assert!(ComparisonFunction::linear(-0.1).is_err());
    }

    #[test]
    fn parse_families() {
        let phi: ComparisonFunction = "linear:0.5".parse().unwrap();
        assert_eq!(phi.eval(2.0), 1.0);
        let phi: ComparisonFunction = "pwl:0,0;1,0.9;2,1.5".parse().unwrap();
        assert_eq!(phi.eval(1.0), 0.9);
        assert_eq!(phi.to_string(), "pwl:0,0;1,0.9;2,1.5");
        assert!("cubic:1".parse::<ComparisonFunction>().is_err());
        assert!("linear:x".parse::<ComparisonFunction>().is_err());
    }

    #[test]
    fn increasing_examples() {
        let lin = ComparisonFunction::Linear(0.5);
        assert_eq!(check_increasing(&lin, &[]).unwrap().verdict, Verdict::VerifiedClosedForm);
        let dip = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.8), (2.0, 0.4), (3.0, 1.0)]).unwrap();
        assert_eq!(check_increasing(&dip, &[]).unwrap().witness(), Some(1.0));
        let sq = ComparisonFunction::callable("square", |t| t * t);
        let v = check_increasing(&sq, &grid(10, 1.0)).unwrap();
        assert_eq!(v.verdict, Verdict::VerifiedOnGrid);
        assert!(v.grid.is_some());
        assert_eq!(check_increasing(&sq, &[]), Err(Error::EmptyGrid));
        assert_eq!(check_increasing(&sq, &[1.0, 0.5]).unwrap_err().id(), "invalid-grid");
    }

    #[test]
    fn regressive_examples() {
        assert!(check_regressive(&ComparisonFunction::Linear(0.5), &[]).unwrap().is_verified());
        assert_eq!(check_regressive(&ComparisonFunction::Linear(1.0), &[]).unwrap().witness(), Some(1.0));
        let p = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.9), (2.0, 1.5)]).unwrap();
        assert_eq!(check_regressive(&p, &[]).unwrap().verdict, Verdict::VerifiedClosedForm);
        // Final slope 1.4 reaches the diagonal at t = 2.25.
        let steep = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 1.9)]).unwrap();
        let w = check_regressive(&steep, &[]).unwrap().witness().unwrap();
        assert!(steep.eval(w) >= w, "witness {w}");
        // Touching the diagonal at a knot.
        let touch = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(check_regressive(&touch, &[]).unwrap().witness(), Some(1.0));
        let half = ComparisonFunction::callable("half", |t| t / 2.0);
        assert_eq!(check_regressive(&half, &grid(10, 0.5)).unwrap().verdict, Verdict::VerifiedOnGrid);
        let offset = ComparisonFunction::callable("offset", |t| t / 2.0 + 0.1);
        assert_eq!(check_regressive(&offset, &grid(10, 0.5)).unwrap().witness(), Some(0.0));
    }

    #[test]
    fn regressive_on_segment_interior() {
        // Both knots below the diagonal but a first segment starting above it.
        let jump0 = ComparisonFunction::piecewise(vec![(0.0, 0.0), (0.0, 0.5), (1.0, 0.6), (2.0, 1.0)]).unwrap();
        let v = check_regressive(&jump0, &[]).unwrap();
        let w = v.witness().unwrap();
        assert!(w > 0.0 && w < 1.0);
        assert!(jump0.eval(w) >= w);
    }

    #[test]
    fn super_regressive_examples() {
        let d = DEFAULT_DELTAS;
        assert!(check_super_regressive(&ComparisonFunction::Linear(0.5), &[], &d, 1e-9).unwrap().is_verified());
        assert!(!check_super_regressive(&ComparisonFunction::Linear(1.0), &[], &d, 1e-9).unwrap().is_verified());
        let jump = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.5), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert!(check_regressive(&jump, &[]).unwrap().is_verified());
        assert_eq!(check_super_regressive(&jump, &[], &d, 1e-9).unwrap().witness(), Some(1.0));

        let third = ComparisonFunction::callable("third", |t| t / 3.0);
        let v = check_super_regressive(&third, &grid(20, 0.25), &d, 1e-9).unwrap();
        assert_eq!(v.verdict, Verdict::VerifiedOnGrid);
        // A callable step that jumps to the diagonal just right of 1.
        let step = ComparisonFunction::callable("step", |t| if t <= 1.0 { t / 2.0 } else { t.min(1.0) });
        assert_eq!(check_super_regressive(&step, &[0.5, 1.0, 1.5], &d, 1e-9).unwrap().witness(), Some(1.0));
        assert_eq!(check_super_regressive(&third, &[1.0], &[0.1, 0.2], 1e-9).unwrap_err().id(), "invalid-grid");
    }

    #[test]
    fn matkowski_examples() {
        let half = ComparisonFunction::Linear(0.5);
        assert_eq!(matkowski_iterate(&half, 1.0, 1e-6, 1000).unwrap(), Some(20));
        assert_eq!(matkowski_iterate(&ComparisonFunction::Linear(1.0), 1.0, 1e-6, 100).unwrap(), None);
        assert_eq!(matkowski_iterate(&ComparisonFunction::Linear(0.0), 3.0, 1e-6, 100).unwrap(), Some(1));
        assert_eq!(matkowski_iterate(&half, 0.0, 1e-6, 10), Err(Error::NonpositiveArgument(0.0)));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(find_beta(&ComparisonFunction::Linear(0.5), 1.0, 100.0).unwrap(), Some(2.0));
        let b = find_beta(&ComparisonFunction::Linear(1.0 / 3.0), 2.0 / 3.0, 100.0).unwrap().unwrap();
        assert!((b - 1.0).abs() < 1e-15);
        assert_eq!(find_beta(&ComparisonFunction::Linear(1.0), 1.0, 100.0).unwrap(), None);
        let b0 = find_beta(&ComparisonFunction::Linear(0.0), 1.0, 100.0).unwrap().unwrap();
        assert!(b0 > 1.0 && b0 - 1.0 < 1e-15);
        assert_eq!(find_beta(&ComparisonFunction::Linear(0.5), 0.0, 1.0), Err(Error::NonpositiveAlpha(0.0)));

        let flat = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 1.5)]).unwrap();
        assert_eq!(find_beta(&flat, 1.0, 1e6).unwrap(), None);
        let p = ComparisonFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.9), (2.0, 1.5)]).unwrap();
        // psi = 0.1 at 1, 0.5 at 2, then slope 0.4: psi(t) = 1 at t = 3.25.
        let b = find_beta(&p, 1.0, 1e6).unwrap().unwrap();
        assert!((b - 3.25).abs() < 1e-12, "beta {b}");
        assert_eq!(find_beta(&p, 1.0, 3.0).unwrap(), None);

        let half = ComparisonFunction::callable("half", |t| t / 2.0);
        let b = find_beta(&half, 1.0, 10.0).unwrap().unwrap();
        assert!(b >= 2.0 && b - 2.0 < 1e-9, "beta {b}");
        let id = ComparisonFunction::callable("near-identity", |t| (t - 0.5).max(0.0));
        assert_eq!(find_beta(&id, 1.0, 50.0).unwrap(), None);
    }
}
