//! Brute-force oracles and shared corpora for the integration tests.
//!
//! The oracles restate each definition directly from its formula, with no
//! reuse of the library's term tables or checkers.

#![allow(dead_code)]

use fixmetric::contraction::FiniteMap;
use fixmetric::gmetric::{max_gmetric, random_gmetric, GMetric, TernaryTable};
use fixmetric::metric::BinaryTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

/// All four G-metric axioms over every quadruple.
pub fn oracle_is_gmetric(t: &TernaryTable, tol: f64) -> bool {
    let n = t.n();
    let g = |x, y, z| t.get(x, y, z);
    for x in 0..n {
        for y in 0..n {
            if x == y && g(x, x, x) > tol {
                return false;
            }
            if x != y && g(x, x, y) <= tol {
                return false;
            }
            for z in 0..n {
                if y != z && g(x, x, y) > g(x, y, z) + tol {
                    return false;
                }
                for u in 0..n {
                    if g(x, y, z) > g(x, u, u) + g(u, y, z) + tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn oracle_is_metric(d: &BinaryTable, tol: f64) -> bool {
    let n = d.n();
    for x in 0..n {
        for y in 0..n {
            if (x == y) != (d.get(x, y) <= tol) {
                return false;
            }
            if (d.get(x, y) - d.get(y, x)).abs() > tol {
                return false;
            }
            for z in 0..n {
                if d.get(x, z) > d.get(x, y) + d.get(y, z) + tol {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_d(g: &TernaryTable) -> impl Fn(usize, usize) -> f64 + '_ {
    move |x, y| g.get(x, y, y).max(g.get(x, x, y))
}

fn diam(d: &dyn Fn(usize, usize) -> f64, pts: &[usize]) -> f64 {
    let mut best = 0.0_f64;
    for &a in pts {
        for &b in pts {
            best = best.max(d(a, b));
        }
    }
    best
}

pub fn oracle_b(d: &dyn Fn(usize, usize) -> f64, t: &[usize], x: usize, y: usize) -> f64 {
    diam(d, &[x, t[x], t[t[x]], y, t[y]])
}

pub fn oracle_p(d: &dyn Fn(usize, usize) -> f64, t: &[usize], x: usize, y: usize) -> f64 {
    let (tx, ttx, ty) = (t[x], t[t[x]], t[y]);
    [
        d(x, tx) + d(tx, y),
        d(ttx, y) + d(ttx, ty),
        d(tx, ttx) + d(tx, y),
        d(tx, y) + d(tx, ty),
        d(x, y),
        d(x, ty),
        d(y, ty),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

pub fn oracle_q(d: &dyn Fn(usize, usize) -> f64, t: &[usize], x: usize, y: usize) -> f64 {
    let (tx, ttx, ty) = (t[x], t[t[x]], t[y]);
    [d(x, tx) + d(tx, ttx), d(x, tx) + d(tx, y), d(ttx, ty) + d(y, ty), d(tx, ttx) + d(ttx, ty), d(x, y), d(x, ty)]
        .into_iter()
        .fold(0.0, f64::max)
}

pub fn oracle_m(g: &TernaryTable, t: &[usize], x: usize, y: usize, z: usize) -> f64 {
    let gg = |a, b, c| g.get(a, b, c);
    let (tx, ttx, ty, tz) = (t[x], t[t[x]], t[y], t[z]);
    [
        gg(x, tx, y),
        gg(y, ttx, ty),
        gg(tx, ttx, ty),
        gg(y, tx, ty),
        gg(x, tx, z),
        gg(z, ttx, tz),
        gg(tx, ttx, tz),
        gg(z, tx, ty),
        gg(x, y, z),
        gg(x, tx, tx),
        gg(y, ty, ty),
        gg(z, tz, tz),
        gg(z, tx, tx),
        gg(x, ty, ty),
        gg(y, tz, tz),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

pub fn oracle_fixpoints(t: &[usize]) -> Vec<usize> {
    (0..t.len()).filter(|&x| t[x] == x).collect()
}

/// The acceptance corpus: seed `s` gives `n = 2 + s % 7`.
pub fn corpus() -> Vec<(u64, TernaryTable)> {
    (0..200u64).map(|s| (s, random_gmetric(2 + (s % 7) as usize, s).unwrap())).collect()
}

/// `count` random selfmaps of `0..n`, deterministic in `seed`.
pub fn random_maps(n: usize, seed: u64, count: usize) -> Vec<FiniteMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(17));
    (0..count).map(|_| FiniteMap::new((0..n).map(|_| rng.gen_range(0..n)).collect()).unwrap()).collect()
}

/// Every selfmap of `0..n`.
pub fn all_maps(n: usize) -> Vec<FiniteMap> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let image = (0..n)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect();
            FiniteMap::new(image).unwrap()
        })
        .collect()
}

/// G-metrics built from points on a line, where contractive maps exist: the
/// max construction and the perimeter construction for each position set.
pub fn line_gmetrics() -> Vec<(String, GMetric)> {
    let sets: [&[f64]; 6] = [
        &[0.0, 1.0, 3.0],
        &[0.0, 1.0, 3.0, 9.0],
        &[0.0, 1.0, 2.0, 3.0],
        &[0.0, 1.0, 1.5, 1.75],
        &[0.0, 1.0, 3.0, 9.0, 27.0],
        &[0.0, 2.0, 3.0, 3.5, 3.75],
    ];
    let mut out = Vec::new();
    for pos in sets {
        let d = BinaryTable::from_positions(pos).unwrap();
        out.push((format!("max{pos:?}"), GMetric::new(max_gmetric(&d, TOL).unwrap(), TOL).unwrap()));
        let perimeter =
            TernaryTable::from_canonical(pos.len(), |x, y, z| d.get(x, y) + d.get(y, z) + d.get(x, z)).unwrap();
        out.push((format!("perimeter{pos:?}"), GMetric::new(perimeter, TOL).unwrap()));
    }
    out
}

/// A random metric on `n` points: band values in `[1, 2]` for even seeds,
/// random positions on a line for odd ones.
pub fn random_metric(n: usize, seed: u64) -> BinaryTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if seed.is_multiple_of(2) {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(1.0..=2.0);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        BinaryTable::new(n, values).unwrap()
    } else {
        let mut pos: Vec<f64> = Vec::new();
        while pos.len() < n {
            let p: f64 = rng.gen_range(-10.0..10.0);
            if pos.iter().all(|&q| (q - p).abs() > 1e-3) {
                pos.push(p);
            }
        }
        BinaryTable::from_positions(&pos).unwrap()
    }
}
