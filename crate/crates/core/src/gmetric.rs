//! Ternary tables: Dhage (D-) and Mustafa-Sims (G-) metrics on finite
//! carriers.
//!
//! A [`TernaryTable`] is permutation invariant by construction, so the
//! symmetry axiom shared by both structures never needs checking. Everything
//! else (sufficiency, the MS-property, the triangular inequalities and their
//! consequences) is checked exhaustively by the functions here.
//!
//! The derived binary tables follow the usual conventions:
//! `b(x,y) = G(x,y,y)`, `c(x,y) = G(x,x,y)`, `d = max(b,c)`, `e = b + c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::metric::{axiom_list, window_tail, BinaryTable, Collector, FiniteSpace, ViolationReport};
use crate::{Error, Result};

/// Largest carrier accepted by [`check_lipschitz`] (the check is `O(n^6)`).
pub const LIPSCHITZ_CAP: usize = 12;

/// Values on unordered point triples; zero on every `{x,x,x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryTable {
    space: FiniteSpace,
    // Dense n^3 cube filled symmetrically, so lookups need no sorting.
    values: Vec<f64>,
}

fn sort3(x: usize, y: usize, z: usize) -> (usize, usize, usize) {
    let (mut a, mut b, mut c) = (x, y, z);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    (a, b, c)
}

/// Canonical triples `x <= y <= z` that are not all equal, in lexicographic
/// order.
pub fn canonical_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| {
        (x..n).flat_map(move |y| (y..n).filter(move |&z| !(x == y && y == z)).map(move |z| (x, y, z)))
    })
}

impl TernaryTable {
    /// Builds a table by evaluating `f` on every canonical triple that is not
    /// all equal; all-equal triples are set to zero.
    pub fn from_canonical(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let space = FiniteSpace::new(n)?;
        let mut values = vec![0.0; n * n * n];
        for (x, y, z) in canonical_triples(n) {
            let v = f(x, y, z);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidTable(format!("value at ({x},{y},{z}) is {v}")));
            }
            for (a, b, c) in [(x, y, z), (x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
                values[(a * n + b) * n + c] = v;
            }
        }
        Ok(TernaryTable { space, values })
    }

    /// 0 when all three points coincide, 1 otherwise.
    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_canonical(n, |_, _, _| 1.0)
    }

    pub fn space(&self) -> FiniteSpace {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.len()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        let n = self.n();
        self.values[(x * n + y) * n + z]
    }

    /// Value of the canonical representative; identical to [`get`](Self::get)
    /// for any permutation.
    pub fn get_sorted(&self, x: usize, y: usize, z: usize) -> f64 {
        let (a, b, c) = sort3(x, y, z);
        self.get(a, b, c)
    }
}

/// The four binary tables derived from a G-metric.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedMetrics {
    pub b: BinaryTable,
    pub c: BinaryTable,
    pub d: BinaryTable,
    pub e: BinaryTable,
}

/// A ternary table that passed [`check_gmetric`], with its derived tables.
#[derive(Debug, Clone, PartialEq)]
pub struct GMetric {
    table: TernaryTable,
    derived: DerivedMetrics,
}

impl GMetric {
    pub fn new(table: TernaryTable, tol: f64) -> Result<Self> {
        require_gmetric(&table, tol)?;
        let derived = derive_unchecked(&table);
        Ok(GMetric { table, derived })
    }

    pub fn table(&self) -> &TernaryTable {
        &self.table
    }

    pub fn derived(&self) -> &DerivedMetrics {
        &self.derived
    }

    /// The max-metric `d(x,y) = max(G(x,y,y), G(x,x,y))`.
    pub fn d(&self) -> &BinaryTable {
        &self.derived.d
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.table.get(x, y, z)
    }
}

/// Reflexive sufficiency and the tetrahedral inequality.
pub fn check_dmetric(t: &TernaryTable, tol: f64) -> Vec<ViolationReport> {
    let n = t.n();
    let mut out = Collector::default();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let v = t.get(x, y, z);
                if x == y && y == z {
                    out.leq("reflexive-sufficient", &[x, y, z], v, 0.0, tol);
                } else if v <= tol {
                    out.push("reflexive-sufficient", &[x, y, z], v, tol);
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = t.get(x, y, z);
                for u in 0..n {
                    let rhs = t.get(x, y, u) + t.get(x, u, z) + t.get(u, y, z);
                    out.leq("tetrahedral", &[x, y, z, u], lhs, rhs, tol);
                }
            }
        }
    }
    out.finish()
}

/// Mustafa-Sims axioms: zero on all-equal triples, plane sufficiency, the
/// MS-property (only where `y != z`) and the MS-triangular inequality.
pub fn check_gmetric(t: &TernaryTable, tol: f64) -> Vec<ViolationReport> {
    let n = t.n();
    let mut out = Collector::default();
    for x in 0..n {
        out.leq("reflexive", &[x, x, x], t.get(x, x, x), 0.0, tol);
    }
    for x in 0..n {
        for y in 0..n {
            let v = t.get(x, x, y);
            if x != y && v <= tol {
                out.push("plane-sufficient", &[x, x, y], v, tol);
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = t.get(x, x, y);
            for z in 0..n {
                if y != z {
                    out.leq("ms-property", &[x, y, z], lhs, t.get(x, y, z), tol);
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = t.get(x, y, z);
                for u in 0..n {
                    let rhs = t.get(x, u, u) + t.get(u, y, z);
                    out.leq("ms-triangular", &[x, y, z, u], lhs, rhs, tol);
                }
            }
        }
    }
    out.finish()
}

fn require_gmetric(t: &TernaryTable, tol: f64) -> Result<()> {
    let reports = check_gmetric(t, tol);
    if reports.is_empty() {
        Ok(())
    } else {
        Err(Error::NotAGmetric { axioms: axiom_list(&reports) })
    }
}

/// Every G-metric is a D-metric; this runs the D-metric checker on a table
/// already known to satisfy the G-axioms.
pub fn gmetric_is_dmetric(t: &TernaryTable, tol: f64) -> Result<bool> {
    require_gmetric(t, tol)?;
    Ok(check_dmetric(t, tol).is_empty())
}

pub(crate) fn derive_unchecked(t: &TernaryTable) -> DerivedMetrics {
    let n = t.n();
    let table = |f: &dyn Fn(usize, usize) -> f64| {
        BinaryTable::from_fn(n, f).expect("derived values are finite and nonnegative")
    };
    DerivedMetrics {
        b: table(&|x, y| t.get(x, y, y)),
        c: table(&|x, y| t.get(x, x, y)),
        d: table(&|x, y| t.get(x, y, y).max(t.get(x, x, y))),
        e: table(&|x, y| t.get(x, y, y) + t.get(x, x, y)),
    }
}

/// Computes `b, c, d, e` for a G-metric.
pub fn derive_metrics(t: &TernaryTable, tol: f64) -> Result<DerivedMetrics> {
    require_gmetric(t, tol)?;
    Ok(derive_unchecked(t))
}

/// The inequalities every G-metric satisfies as consequences of its axioms:
///
/// * `split`: `G(x,y,z) <= G(x,x,y) + G(x,x,z)`
/// * `double-line`: `G(x,y,y) <= 2 G(x,x,y)`
/// * `double-plane`: `G(x,x,y) <= 2 G(x,y,y)`
/// * `rectangle`: `G(x,y,z) <= G(x,u,z) + G(u,y,z)` (includes `x = z`)
/// * `two-thirds`: `G(x,y,z) <= (2/3)[G(x,u,y) + G(y,u,z) + G(z,u,x)]`
/// * `star`: `G(x,y,z) <= G(x,u,u) + G(y,u,u) + G(z,u,u)`
///
/// An empty result is expected for every G-metric; a witness means a bug in
/// the table source or here.
pub fn check_consequences(t: &TernaryTable, tol: f64) -> Result<Vec<ViolationReport>> {
    require_gmetric(t, tol)?;
    let n = t.n();
    let g = |x, y, z| t.get(x, y, z);
    let mut out = Collector::default();
    for x in 0..n {
        for y in 0..n {
            out.leq("double-line", &[x, y], g(x, y, y), 2.0 * g(x, x, y), tol);
            out.leq("double-plane", &[x, y], g(x, x, y), 2.0 * g(x, y, y), tol);
            for z in 0..n {
                let lhs = g(x, y, z);
                out.leq("split", &[x, y, z], lhs, g(x, x, y) + g(x, x, z), tol);
                for u in 0..n {
                    let pts = [x, y, z, u];
                    out.leq("rectangle", &pts, lhs, g(x, u, z) + g(u, y, z), tol);
                    let around = g(x, u, y) + g(y, u, z) + g(z, u, x);
                    out.leq("two-thirds", &pts, lhs, 2.0 / 3.0 * around, tol);
                    out.leq("star", &pts, lhs, g(x, u, u) + g(y, u, u) + g(z, u, u), tol);
                }
            }
        }
    }
    Ok(out.finish())
}

/// Pointwise comparisons between the derived tables:
/// `b <= 2c <= 2d <= 4b`, `c <= 2b <= 2d <= 4c`, `d <= e <= 2d`.
pub fn check_chain(t: &TernaryTable, tol: f64) -> Result<Vec<ViolationReport>> {
    require_gmetric(t, tol)?;
    let m = derive_unchecked(t);
    let n = t.n();
    let mut out = Collector::default();
    for x in 0..n {
        for y in 0..n {
            let (b, c, d, e) = (m.b.get(x, y), m.c.get(x, y), m.d.get(x, y), m.e.get(x, y));
            let p = [x, y];
            out.leq("b<=2c", &p, b, 2.0 * c, tol);
            out.leq("2c<=2d", &p, 2.0 * c, 2.0 * d, tol);
            out.leq("2d<=4b", &p, 2.0 * d, 4.0 * b, tol);
            out.leq("c<=2b", &p, c, 2.0 * b, tol);
            out.leq("2b<=2d", &p, 2.0 * b, 2.0 * d, tol);
            out.leq("2d<=4c", &p, 2.0 * d, 4.0 * c, tol);
            out.leq("d<=e", &p, d, e, tol);
            out.leq("e<=2d", &p, e, 2.0 * d, tol);
        }
    }
    Ok(out.finish())
}

/// `|G(x,y,z) - G(u,v,w)| <= d(x,u) + d(y,v) + d(z,w)` over all sextuples,
/// with `d` the derived max-metric. Refuses carriers above [`LIPSCHITZ_CAP`].
pub fn check_lipschitz(t: &TernaryTable, tol: f64) -> Result<Vec<ViolationReport>> {
    check_lipschitz_capped(t, tol, LIPSCHITZ_CAP)
}

pub fn check_lipschitz_capped(t: &TernaryTable, tol: f64, cap: usize) -> Result<Vec<ViolationReport>> {
    require_gmetric(t, tol)?;
    let n = t.n();
    if n > cap {
        return Err(Error::CarrierTooLarge { n, cap });
    }
    let d = derive_unchecked(t).d;
    let mut out = Collector::default();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let gxyz = t.get(x, y, z);
                for u in 0..n {
                    let dxu = d.get(x, u);
                    for v in 0..n {
                        let dyv = d.get(y, v);
                        for w in 0..n {
                            let lhs = (gxyz - t.get(u, v, w)).abs();
                            out.leq("lipschitz", &[x, y, z, u, v, w], lhs, dxu + dyv + d.get(z, w), tol);
                        }
                    }
                }
            }
        }
    }
    Ok(out.finish())
}

/// `G(x,y,z) <= d(x,y) + d(y,z)` over all ordered triples.
pub fn check_strong_triangle(t: &TernaryTable, tol: f64) -> Result<Vec<ViolationReport>> {
    require_gmetric(t, tol)?;
    let d = derive_unchecked(t).d;
    let n = t.n();
    let mut out = Collector::default();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.leq("strong-triangle", &[x, y, z], t.get(x, y, z), d.get(x, y) + d.get(y, z), tol);
            }
        }
    }
    Ok(out.finish())
}

/// Outcome of [`is_symmetric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Symmetry {
    Symmetric,
    /// First pair (lexicographically) with `b(x,y) != c(x,y)`.
    Asymmetric {
        pair: (usize, usize),
        b: f64,
        c: f64,
    },
}

impl Symmetry {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Symmetry::Symmetric)
    }
}

/// Whether `G(x,y,y) = G(x,x,y)` for all pairs, within `tol`.
pub fn is_symmetric(t: &TernaryTable, tol: f64) -> Result<Symmetry> {
    require_gmetric(t, tol)?;
    let n = t.n();
    for x in 0..n {
        for y in 0..n {
            let (b, c) = (t.get(x, y, y), t.get(x, x, y));
            if (b - c).abs() > tol {
                return Ok(Symmetry::Asymmetric { pair: (x, y), b, c });
            }
        }
    }
    Ok(Symmetry::Symmetric)
}

/// `G(x,y,z) = max(g(x,y), g(y,z), g(z,x))` for a metric `g`.
pub fn max_gmetric(g: &BinaryTable, tol: f64) -> Result<TernaryTable> {
    let reports = crate::metric::check_metric(g, tol);
    if !reports.is_empty() {
        return Err(Error::NotAMetric { axioms: axiom_list(&reports) });
    }
    TernaryTable::from_canonical(g.n(), |x, y, z| g.get(x, y).max(g.get(y, z)).max(g.get(z, x)))
}

/// A random G-metric on `n` points, deterministic in `seed`.
///
/// Triples with a repeated point draw from `[1, 1.5]` and triples of three
/// distinct points from `[1.5, 2]`. Every repeated-point value is then at most
/// every distinct-point value, and any left side (at most 2) is bounded by a
/// right side made of two nonzero values (at least 2), so the MS-property and
/// MS-triangular inequality hold without rejection.
pub fn random_gmetric(n: usize, seed: u64) -> Result<TernaryTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TernaryTable::from_canonical(
        n,
        |x, y, z| {
            if x == y || y == z {
                rng.gen_range(1.0..=1.5)
            } else {
                rng.gen_range(1.5..=2.0)
            }
        },
    )
}

/// Finite surrogate of G-Cauchy: every triple drawn from the last `window`
/// entries has `G <= eps`.
pub fn g_cauchy_prefix(t: &TernaryTable, seq: &[usize], eps: f64, window: usize) -> Result<bool> {
    let tail = &seq[window_tail(seq.len(), window)?];
    Ok(tail.iter().all(|&a| tail.iter().all(|&b| tail.iter().all(|&c| t.get(a, b, c) <= eps))))
}

/// Finite surrogate of G-convergence to `x`: `G(x_m, x_n, x) <= eps` for all
/// `m, n` in the last `window` entries.
pub fn g_converges_prefix(t: &TernaryTable, seq: &[usize], x: usize, eps: f64, window: usize) -> Result<bool> {
    let tail = &seq[window_tail(seq.len(), window)?];
    Ok(tail.iter().all(|&a| tail.iter().all(|&b| t.get(a, b, x) <= eps)))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Two points with `G(0,0,1) = 1` and `G(0,1,1) = 2`.
    pub fn asymmetric_pair() -> TernaryTable {
        TernaryTable::from_canonical(2, |x, y, z| match (x, y, z) {
            (0, 0, 1) => 1.0,
            (0, 1, 1) => 2.0,
            _ => unreachable!(),
        })
        .unwrap()
    }

    pub fn line3() -> BinaryTable {
        BinaryTable::from_fn(3, |i, j| (i as f64 - j as f64).abs()).unwrap()
    }
}
