//! Self-maps, orbital segments, the contraction functionals and certificates.
//!
//! Five functionals bound `d(Tx, Ty)` (or `G(Tx, Ty, Tz)`) from above:
//!
//! | name | value                                              |
//! |------|----------------------------------------------------|
//! | A    | `diam {x, Tx, y, Ty}`                              |
//! | B    | `diam {x, Tx, T²x, y, Ty}`                         |
//! | P    | max of the seven sums in [`P_TERMS`]               |
//! | Q    | max of the six sums in [`Q_TERMS`]                 |
//! | M    | max of the fifteen G-values in [`M_TERMS`]         |
//!
//! The term lists are kept as data so they can be audited line by line.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::comparison::{check_increasing, check_regressive, ComparisonFunction};
use crate::gmetric::GMetric;
use crate::metric::{diam_of, BinaryTable, Collector, Space, ViolationReport};
use crate::{Error, Result};

/// A selfmap of some carrier.
pub trait SelfMap<P> {
    fn apply(&self, p: P) -> P;
}

impl<P, F: Fn(P) -> P> SelfMap<P> for F {
    fn apply(&self, p: P) -> P {
        self(p)
    }
}

/// A selfmap of `0..n` given by its image array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteMap {
    image: Vec<usize>,
}

impl FiniteMap {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidMap("empty image".into()));
        }
        if let Some((i, &v)) = image.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::InvalidMap(format!("T({i}) = {v} is outside 0..{n}")));
        }
        Ok(FiniteMap { image })
    }

    pub fn constant(n: usize, target: usize) -> Result<Self> {
        Self::new(vec![target; n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    fn require_len(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::InvalidMap(format!("map has {} points, carrier has {n}", self.n())));
        }
        Ok(())
    }
}

impl SelfMap<usize> for FiniteMap {
    fn apply(&self, p: usize) -> usize {
        self.image[p]
    }
}

/// Built-in selfmaps of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LineMap {
    /// `t -> t / k`.
    Scale {
        k: f64,
    },
    /// `t -> a t + b`.
    Affine {
        a: f64,
        b: f64,
    },
    Identity,
}

impl SelfMap<f64> for LineMap {
    fn apply(&self, t: f64) -> f64 {
        match *self {
            LineMap::Scale { k } => t / k,
            LineMap::Affine { a, b } => a * t + b,
            LineMap::Identity => t,
        }
    }
}

impl fmt::Display for LineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineMap::Scale { k } => write!(f, "scale:{k}"),
            LineMap::Affine { a, b } => write!(f, "affine:{a},{b}"),
            LineMap::Identity => write!(f, "identity"),
        }
    }
}

impl FromStr for LineMap {
    type Err = Error;

    /// Parses `scale:<k>`, `affine:<a>,<b>` or `identity`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMap(format!("unknown builtin map '{s}'"));
        let num = |v: &str| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        match family.trim() {
            "identity" if rest.trim().is_empty() => Ok(LineMap::Identity),
            "scale" => {
                let k = num(rest)?;
                if k == 0.0 {
                    return Err(Error::InvalidMap("scale factor must be nonzero".into()));
                }
                Ok(LineMap::Scale { k })
            }
            "affine" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Ok(LineMap::Affine { a: num(a)?, b: num(b)? })
            }
            _ => Err(bad()),
        }
    }
}

/// `[x, Tx, ..., T^n x]`, repetitions kept.
pub fn orbital_segment<P: Copy, M: SelfMap<P>>(map: &M, x: P, n: usize) -> Vec<P> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = x;
    out.push(p);
    for _ in 0..n {
        p = map.apply(p);
        out.push(p);
    }
    out
}

/// Orbit positions a functional term may refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pt {
    X,
    TX,
    T2X,
    Y,
    TY,
    Z,
    TZ,
}

use Pt::*;

/// The points a term may mention, for one `(x, y, z)`.
#[derive(Debug, Clone, Copy)]
struct Orbit<P> {
    x: P,
    tx: P,
    t2x: P,
    y: P,
    ty: P,
    z: P,
    tz: P,
}

impl<P: Copy> Orbit<P> {
    fn new<M: SelfMap<P>>(map: &M, x: P, y: P, z: P) -> Self {
        let tx = map.apply(x);
        Orbit { x, tx, t2x: map.apply(tx), y, ty: map.apply(y), z, tz: map.apply(z) }
    }

    fn at(&self, p: Pt) -> P {
        match p {
            X => self.x,
            TX => self.tx,
            T2X => self.t2x,
            Y => self.y,
            TY => self.ty,
            Z => self.z,
            TZ => self.tz,
        }
    }
}

/// A sum of one or two distances.
pub type DistanceTerm = &'static [(Pt, Pt)];

/// Terms of `P(x, y)`.
pub const P_TERMS: [DistanceTerm; 7] = [
    &[(X, TX), (TX, Y)],
    &[(T2X, Y), (T2X, TY)],
    &[(TX, T2X), (TX, Y)],
    &[(TX, Y), (TX, TY)],
    &[(X, Y)],
    &[(X, TY)],
    &[(Y, TY)],
];

/// Terms of `Q(x, y)`.
pub const Q_TERMS: [DistanceTerm; 6] =
    [&[(X, TX), (TX, T2X)], &[(X, TX), (TX, Y)], &[(T2X, TY), (Y, TY)], &[(TX, T2X), (T2X, TY)], &[(X, Y)], &[(X, TY)]];

/// Terms of `M(x, y, z)`, each a single G-value.
pub const M_TERMS: [(Pt, Pt, Pt); 15] = [
    (X, TX, Y),
    (Y, T2X, TY),
    (TX, T2X, TY),
    (Y, TX, TY),
    (X, TX, Z),
    (Z, T2X, TZ),
    (TX, T2X, TZ),
    (Z, TX, TY),
    (X, Y, Z),
    (X, TX, TX),
    (Y, TY, TY),
    (Z, TZ, TZ),
    (Z, TX, TX),
    (X, TY, TY),
    (Y, TZ, TZ),
];

fn max_of_sums<S: Space>(space: &S, orbit: &Orbit<S::Point>, terms: &[DistanceTerm]) -> f64 {
    terms
        .iter()
        .map(|term| term.iter().map(|&(a, b)| space.dist(orbit.at(a), orbit.at(b))).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Every term of `P(x, y)` in table order.
pub fn p_terms<S: Space, M: SelfMap<S::Point>>(space: &S, map: &M, x: S::Point, y: S::Point) -> Vec<f64> {
    let o = Orbit::new(map, x, y, y);
    P_TERMS.iter().map(|t| max_of_sums(space, &o, &[*t])).collect()
}

/// Every term of `Q(x, y)` in table order.
pub fn q_terms<S: Space, M: SelfMap<S::Point>>(space: &S, map: &M, x: S::Point, y: S::Point) -> Vec<f64> {
    let o = Orbit::new(map, x, y, y);
    Q_TERMS.iter().map(|t| max_of_sums(space, &o, &[*t])).collect()
}

/// `A(x, y) = diam {x, Tx, y, Ty}`.
pub fn functional_a<S: Space, M: SelfMap<S::Point>>(space: &S, map: &M, x: S::Point, y: S::Point) -> f64 {
    diam_of(space, &[x, map.apply(x), y, map.apply(y)])
}

/// `B(x, y) = diam {x, Tx, T²x, y, Ty}`.
pub fn functional_b<S: Space, M: SelfMap<S::Point>>(space: &S, map: &M, x: S::Point, y: S::Point) -> f64 {
    let tx = map.apply(x);
    diam_of(space, &[x, tx, map.apply(tx), y, map.apply(y)])
}

pub fn functional_p<S: Space, M: SelfMap<S::Point>>(space: &S, map: &M, x: S::Point, y: S::Point) -> f64 {
    max_of_sums(space, &Orbit::new(map, x, y, y), &P_TERMS)
}

pub fn functional_q<S: Space, M: SelfMap<S::Point>>(space: &S, map: &M, x: S::Point, y: S::Point) -> f64 {
    max_of_sums(space, &Orbit::new(map, x, y, y), &Q_TERMS)
}

/// `M(x, y, z)`: the largest of the fifteen G-values in [`M_TERMS`].
pub fn functional_m(g: &GMetric, map: &FiniteMap, x: usize, y: usize, z: usize) -> f64 {
    let o = Orbit::new(map, x, y, z);
    M_TERMS.iter().map(|&(a, b, c)| g.get(o.at(a), o.at(b), o.at(c))).fold(0.0, f64::max)
}

/// Contraction classes checked over pairs of a metric space.
#[derive(Debug, Clone)]
pub enum Contraction {
    /// `d(Tx,Ty) <= alpha A(x,y)`, `alpha` in `[0, 1)`.
    Ciric(f64),
    /// `d(Tx,Ty) <= phi(B(x,y))`.
    AnticipativePhi(ComparisonFunction),
    /// `d(Tx,Ty) <= alpha B(x,y)`, `alpha` in `[0, 1)`.
    AnticipativeAlpha(f64),
    /// `d(Tx,Ty) <= gamma max(P(x,y), Q(x,y))`, `gamma` in `[0, 1/2)`.
    PqGamma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassId {
    CiricAlpha,
    AnticipativePhi,
    AnticipativeAlpha,
    PqGamma,
    GmGamma,
}

fn check_unit_range(name: &'static str, value: f64, upper: f64, range: &'static str) -> Result<()> {
    if value >= 0.0 && value < upper {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value: value.to_string(), range })
    }
}

/// Grid used to vet callable comparison functions before certifying with them.
fn phi_vetting_grid() -> Vec<f64> {
    (0..=1000).map(|i| i as f64 * 0.01).collect()
}

impl Contraction {
    pub fn class_id(&self) -> ClassId {
        match self {
            Contraction::Ciric(_) => ClassId::CiricAlpha,
            Contraction::AnticipativePhi(_) => ClassId::AnticipativePhi,
            Contraction::AnticipativeAlpha(_) => ClassId::AnticipativeAlpha,
            Contraction::PqGamma(_) => ClassId::PqGamma,
        }
    }

    pub fn parameter(&self) -> String {
        match self {
            Contraction::Ciric(a) | Contraction::AnticipativeAlpha(a) | Contraction::PqGamma(a) => a.to_string(),
            Contraction::AnticipativePhi(phi) => phi.to_string(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Contraction::Ciric(a) => check_unit_range("alpha", *a, 1.0, "[0, 1)"),
            Contraction::AnticipativeAlpha(a) => check_unit_range("alpha", *a, 1.0, "[0, 1)"),
            Contraction::PqGamma(g) => check_unit_range("gamma", *g, 0.5, "[0, 1/2)"),
            Contraction::AnticipativePhi(phi) => {
                let grid = phi_vetting_grid();
                let ok = check_increasing(phi, &grid)?.is_verified() && check_regressive(phi, &grid)?.is_verified();
                if ok {
                    Ok(())
                } else {
                    Err(Error::ParameterOutOfRange {
                        name: "phi",
                        value: phi.to_string(),
                        range: "increasing regressive comparison functions",
                    })
                }
            }
        }
    }

    /// `(lhs, functional value, bound)` at one pair.
    fn evaluate<S: Space, M: SelfMap<S::Point>>(
        &self,
        space: &S,
        map: &M,
        x: S::Point,
        y: S::Point,
    ) -> (f64, f64, f64) {
        let lhs = space.dist(map.apply(x), map.apply(y));
        match self {
            Contraction::Ciric(a) => {
                let f = functional_a(space, map, x, y);
                (lhs, f, a * f)
            }
            Contraction::AnticipativeAlpha(a) => {
                let f = functional_b(space, map, x, y);
                (lhs, f, a * f)
            }
            Contraction::AnticipativePhi(phi) => {
                let f = functional_b(space, map, x, y);
                (lhs, f, phi.eval(f))
            }
            Contraction::PqGamma(g) => {
                let f = functional_p(space, map, x, y).max(functional_q(space, map, x, y));
                (lhs, f, g * f)
            }
        }
    }
}

/// Certified, or refuted at the tuple with the largest excess `lhs - bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status<P> {
    Certified,
    Refuted {
        witness: Vec<P>,
        lhs: f64,
        /// Value of the functional at the witness.
        functional: f64,
        /// The contraction bound, e.g. `gamma * functional`.
        bound: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<P> {
    pub class: ClassId,
    pub parameter: String,
    pub status: Status<P>,
    /// Largest `lhs / functional` over tuples with a positive functional.
    pub max_ratio: f64,
    pub tuples_checked: usize,
    /// What was quantified over; sampled certificates are only as good as this.
    pub sample: String,
}

impl<P> Certificate<P> {
    pub fn is_certified(&self) -> bool {
        matches!(self.status, Status::Certified)
    }
}

/// Tracks the worst tuple and the largest ratio in enumeration order.
struct Aggregate<P> {
    worst: Option<(Vec<P>, f64, f64, f64)>,
    worst_excess: f64,
    max_ratio: f64,
    count: usize,
}

impl<P: Clone> Aggregate<P> {
    fn new() -> Self {
        Aggregate { worst: None, worst_excess: f64::NEG_INFINITY, max_ratio: 0.0, count: 0 }
    }

    fn observe(&mut self, tuple: &[P], lhs: f64, functional: f64, bound: f64, tol: f64) {
        self.count += 1;
        if functional > 0.0 {
            self.max_ratio = self.max_ratio.max(lhs / functional);
        }
        let excess = lhs - bound;
        if excess > tol && excess > self.worst_excess {
            self.worst_excess = excess;
            self.worst = Some((tuple.to_vec(), lhs, functional, bound));
        }
    }

    fn finish(self, class: ClassId, parameter: String, sample: String) -> Certificate<P> {
        let status = match self.worst {
            None => Status::Certified,
            Some((witness, lhs, functional, bound)) => Status::Refuted { witness, lhs, functional, bound },
        };
        Certificate { class, parameter, status, max_ratio: self.max_ratio, tuples_checked: self.count, sample }
    }
}

/// Checks a contraction class over the given pairs. `sample` describes where
/// the pairs came from and is copied into the certificate.
pub fn certify_pairs<S, M, I>(
    space: &S,
    map: &M,
    class: &Contraction,
    pairs: I,
    sample: impl Into<String>,
    tol: f64,
) -> Result<Certificate<S::Point>>
where
    S: Space,
    M: SelfMap<S::Point>,
    I: IntoIterator<Item = (S::Point, S::Point)>,
{
    class.validate()?;
    let mut agg = Aggregate::new();
    for (x, y) in pairs {
        let (lhs, f, bound) = class.evaluate(space, map, x, y);
        agg.observe(&[x, y], lhs, f, bound, tol);
    }
    Ok(agg.finish(class.class_id(), class.parameter(), sample.into()))
}

/// Checks a contraction class over every ordered pair of a finite table.
pub fn certify_finite(d: &BinaryTable, map: &FiniteMap, class: &Contraction, tol: f64) -> Result<Certificate<usize>> {
    map.require_len(d.n())?;
    let n = d.n();
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
    certify_pairs(d, map, class, pairs, format!("all {} ordered pairs", n * n), tol)
}

/// Every ordered pair drawn from `points`.
pub fn grid_pairs(points: &[f64]) -> Vec<(f64, f64)> {
    points.iter().flat_map(|&x| points.iter().map(move |&y| (x, y))).collect()
}

/// `G(Tx,Ty,Tz) <= gamma M(x,y,z)` over every ordered triple.
pub fn certify_gm(g: &GMetric, map: &FiniteMap, gamma: f64, tol: f64) -> Result<Certificate<usize>> {
    check_unit_range("gamma", gamma, 0.5, "[0, 1/2)")?;
    map.require_len(g.n())?;
    let n = g.n();
    let mut agg = Aggregate::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = g.get(map.apply(x), map.apply(y), map.apply(z));
                let m = functional_m(g, map, x, y, z);
                agg.observe(&[x, y, z], lhs, m, gamma * m, tol);
            }
        }
    }
    Ok(agg.finish(ClassId::GmGamma, gamma.to_string(), format!("all {} ordered triples", n * n * n)))
}

/// Inequalities behind the G-to-metric reduction, for every pair:
///
/// * `M(x,y,y) <= P(x,y)` and `M(x,x,y) <= Q(x,y)`, with `P, Q` taken over the
///   derived max-metric `d`;
/// * `P(x,y) <= 2 B(x,y)` and `Q(x,y) <= 2 B(x,y)`.
pub fn check_reduction(g: &GMetric, map: &FiniteMap, tol: f64) -> Result<Vec<ViolationReport>> {
    let n = g.n();
    check_reduction_pairs(g, map, (0..n).flat_map(|x| (0..n).map(move |y| (x, y))), tol)
}

pub fn check_reduction_pairs(
    g: &GMetric,
    map: &FiniteMap,
    pairs: impl IntoIterator<Item = (usize, usize)>,
    tol: f64,
) -> Result<Vec<ViolationReport>> {
    map.require_len(g.n())?;
    let d = g.d();
    let mut out = Collector::default();
    for (x, y) in pairs {
        let p = functional_p(d, map, x, y);
        let q = functional_q(d, map, x, y);
        let b = functional_b(d, map, x, y);
        out.leq("M(x,y,y)<=P", &[x, y], functional_m(g, map, x, y, y), p, tol);
        out.leq("M(x,x,y)<=Q", &[x, y], functional_m(g, map, x, x, y), q, tol);
        out.leq("P<=2B", &[x, y], p, 2.0 * b, tol);
        out.leq("Q<=2B", &[x, y], q, 2.0 * b, tol);
    }
    Ok(out.finish())
}
