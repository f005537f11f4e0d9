//! Picard iteration and its quantitative diagnostics.
//!
//! Tail diameters are taken over the finite trace only, so a passing envelope
//! check is evidence for the infinite-tail bound, not a proof of it.

use serde::Serialize;

use crate::comparison::{find_beta, ComparisonFunction};
use crate::contraction::{FiniteMap, SelfMap};
use crate::metric::Space;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Two consecutive iterates coincide.
    FixedPointHit,
    /// A step fell to `fp_tol` or below without being exactly zero.
    ToleranceMet,
    /// Iteration budget exhausted, or a cycle was found on a finite carrier.
    MaxIter,
}

/// A repeated iterate on a finite carrier: `iterates[first] == iterates[first + period]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub first: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardTrace<P> {
    pub x0: P,
    pub iterates: Vec<P>,
    /// `rho[k] = d(iterates[k], iterates[k + 1])`.
    pub rho: Vec<f64>,
    pub stop_reason: StopReason,
    pub candidate: Option<P>,
    pub cycle: Option<Cycle>,
}

impl<P> PicardTrace<P> {
    /// Number of map applications performed.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Iterates `map` from `x0` until a step is at most `fp_tol`, a finite
/// carrier revisits a point, or `max_iter` steps have been taken.
///
/// On finite carriers (spaces exposing labels) a fixed point is detected by
/// exact equality and `fp_tol` is ignored. A trace always holds at least one
/// step, so an `x0` that is already fixed yields `[x0, x0]`.
pub fn iterate<S, M>(space: &S, map: &M, x0: S::Point, fp_tol: f64, max_iter: usize) -> Result<PicardTrace<S::Point>>
where
    S: Space,
    M: SelfMap<S::Point>,
{
    if !(fp_tol >= 0.0) {
        return Err(Error::ParameterOutOfRange { name: "fp_tol", value: fp_tol.to_string(), range: "[0, inf)" });
    }
    if max_iter == 0 {
        return Err(Error::ParameterOutOfRange { name: "max_iter", value: "0".into(), range: "[1, inf)" });
    }
    if !space.contains(x0) {
        return Err(Error::PointOutOfRange {
            point: space.label(x0).unwrap_or(usize::MAX),
            n: space.size().unwrap_or(0),
        });
    }
    let finite = space.size();
    let mut seen: Vec<Option<usize>> = vec![None; finite.unwrap_or(0)];
    if let Some(l) = space.label(x0) {
        seen[l] = Some(0);
    }
    let mut iterates = vec![x0];
    let mut rho = Vec::new();
    let mut x = x0;
    loop {
        let next = map.apply(x);
        if !space.contains(next) {
            return Err(Error::InvalidMap(format!("iterate {} left the carrier: {next:?}", iterates.len())));
        }
        let step = space.dist(x, next);
        iterates.push(next);
        rho.push(step);
        let k = iterates.len() - 1;
        let (stop, candidate, cycle) = if finite.is_some() {
            let l = space.label(next).expect("finite carriers label every point");
            if next == x {
                (Some(StopReason::FixedPointHit), Some(next), None)
            } else if let Some(first) = seen[l] {
                (Some(StopReason::MaxIter), None, Some(Cycle { first, period: k - first }))
            } else {
                seen[l] = Some(k);
                (None, None, None)
            }
        } else if next == x || step == 0.0 {
            (Some(StopReason::FixedPointHit), Some(next), None)
        } else if step <= fp_tol {
            (Some(StopReason::ToleranceMet), Some(next), None)
        } else {
            (None, None, None)
        };
        let stop = match stop {
            None if k >= max_iter => Some(StopReason::MaxIter),
            s => s,
        };
        if let Some(stop_reason) = stop {
            return Ok(PicardTrace { x0, iterates, rho, stop_reason, candidate, cycle });
        }
        x = next;
    }
}

/// One bound of an envelope report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(n: usize, value: f64, bound: f64, tol: f64) -> Self {
        BoundCheck { n, value, bound, pass: value <= bound + tol }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    /// First step `d(x0, x1)`.
    pub alpha: f64,
    /// Bound on every orbital diameter, absent when the trace starts fixed.
    pub beta: Option<f64>,
    pub already_fixed: bool,
    /// `diam {x0..xn} <= beta` for `n = 1..=N`.
    pub prefix: Vec<BoundCheck>,
    /// `diam {xn..xN} <= phi^n(beta)` for `n = 0..=N`; empty until
    /// [`EnvelopeReport::with_tail`] is called.
    pub tail: Vec<BoundCheck>,
}

impl EnvelopeReport {
    pub fn passes(&self) -> bool {
        self.prefix.iter().chain(&self.tail).all(|c| c.pass)
    }

    /// Adds the tail envelope for `phi`, using the report's own `beta`.
    pub fn with_tail<S: Space>(
        mut self,
        space: &S,
        trace: &PicardTrace<S::Point>,
        phi: &ComparisonFunction,
        tol: f64,
    ) -> Self {
        if let Some(beta) = self.beta {
            self.tail = envelope_check(space, trace, phi, beta, tol);
        }
        self
    }
}

/// Prefix diameters `diam {x0..xn}` for `n = 0..=N`.
pub fn prefix_diameters<S: Space>(space: &S, iterates: &[S::Point]) -> Vec<f64> {
    let mut out = Vec::with_capacity(iterates.len());
    let mut current = 0.0_f64;
    for (n, &p) in iterates.iter().enumerate() {
        for &q in &iterates[..n] {
            current = current.max(space.dist(p, q)).max(space.dist(q, p));
        }
        out.push(current);
    }
    out
}

/// Tail diameters `diam {xn..xN}` for `n = 0..=N`.
pub fn tail_diameters<S: Space>(space: &S, iterates: &[S::Point]) -> Vec<f64> {
    let len = iterates.len();
    let mut out = vec![0.0; len];
    let mut current = 0.0_f64;
    for n in (0..len).rev() {
        let p = iterates[n];
        for &q in &iterates[n + 1..] {
            current = current.max(space.dist(p, q)).max(space.dist(q, p));
        }
        out[n] = current;
    }
    out
}

/// Takes `alpha = rho[0]`, finds `beta` for `phi`, and checks every prefix
/// diameter against it. A trace whose first step is zero is reported as
/// already fixed and passes trivially.
pub fn beta_bound_check<S: Space>(
    space: &S,
    trace: &PicardTrace<S::Point>,
    phi: &ComparisonFunction,
    search_cap: f64,
    tol: f64,
) -> Result<EnvelopeReport> {
    let alpha = trace.rho.first().copied().unwrap_or(0.0);
    if alpha == 0.0 {
        return Ok(EnvelopeReport { alpha, beta: None, already_fixed: true, prefix: Vec::new(), tail: Vec::new() });
    }
    let beta = find_beta(phi, alpha, search_cap)?.ok_or(Error::CoercivityEvidenceFailed { alpha, cap: search_cap })?;
    let prefix = prefix_diameters(space, &trace.iterates)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, diam)| BoundCheck::new(n, diam, beta, tol))
        .collect();
    Ok(EnvelopeReport { alpha, beta: Some(beta), already_fixed: false, prefix, tail: Vec::new() })
}

/// Truncated tail diameters against `phi^n(beta)`.
pub fn envelope_check<S: Space>(
    space: &S,
    trace: &PicardTrace<S::Point>,
    phi: &ComparisonFunction,
    beta: f64,
    tol: f64,
) -> Vec<BoundCheck> {
    let mut bound = beta;
    tail_diameters(space, &trace.iterates)
        .into_iter()
        .enumerate()
        .map(|(n, diam)| {
            let check = BoundCheck::new(n, diam, bound, tol);
            bound = phi.eval(bound);
            check
        })
        .collect()
}

/// `rho[n+1] <= r rho[n]` with `r = gamma / (1 - gamma)`; check `n` compares
/// `rho[n+1]` against `r rho[n]`.
pub fn rate_check<P>(trace: &PicardTrace<P>, gamma: f64, tol: f64) -> Result<Vec<BoundCheck>> {
    if !(0.0..0.5).contains(&gamma) {
        return Err(Error::ParameterOutOfRange { name: "gamma", value: gamma.to_string(), range: "[0, 1/2)" });
    }
    let ratio = gamma / (1.0 - gamma);
    Ok(trace.rho.windows(2).enumerate().map(|(n, w)| BoundCheck::new(n, w[1], ratio * w[0], tol)).collect())
}

/// Every `x` with `T(x) = x`, ascending.
pub fn brute_fixpoints(map: &FiniteMap) -> Vec<usize> {
    (0..map.n()).filter(|&x| map.apply(x) == x).collect()
}
