//! Exact lattice geometry: unimodularity, triangulation checks, lattice-point
//! counting and Ehrhart `h*` data.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::{binomial, Triangulation};
use crate::dag::{Dag, Vertex};
use crate::error::{Error, Result};
use crate::linalg::{det, difference_matrix, elementary_divisors, independent_columns, rank, Matrix};

/// Nonzero elementary divisors of the edge vectors `v_i - v_0`, or an error
/// when the vertices are affinely dependent.
fn simplex_divisors(points: &[&[i64]]) -> Result<Vec<i128>> {
    let diffs = difference_matrix(points);
    let divisors = elementary_divisors(&diffs)?;
    if divisors.len() != diffs.len() {
        return Err(Error::AffinelyDependent);
    }
    Ok(divisors)
}

/// True iff `v_1 - v_0, ..., v_d - v_0` is a basis of the lattice points in
/// their linear span.
pub fn is_unimodular_simplex(points: &[&[i64]]) -> Result<bool> {
    Ok(simplex_divisors(points)?.iter().all(|&d| d == 1))
}

/// Normalized volume relative to the lattice of the affine span.
pub fn normalized_volume(points: &[&[i64]]) -> Result<u128> {
    simplex_divisors(points)?.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128).ok_or(Error::Overflow))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulationReport {
    pub ok: bool,
    pub dimension: usize,
    pub simplices: usize,
    pub volume: u128,
    pub expected_volume: u128,
    pub unimodular: bool,
    pub failures: Vec<String>,
}

/// Checks that the simplices of `tri` triangulate the convex hull of
/// `tri.points`, whose normalized volume is `expected_volume`.
///
/// Every simplex must have `d + 1` affinely independent vertices. Each ridge
/// either lies on a supporting hyperplane of the carrier, and then belongs to
/// exactly one simplex, or it belongs to exactly two simplices lying on
/// opposite sides of it. With the volumes adding up, the simplices cover the
/// carrier exactly once.
pub fn verify_triangulation(tri: &Triangulation, expected_volume: u128) -> Result<TriangulationReport> {
    let mut failures = Vec::new();
    let label = |s: &[usize]| -> String {
        let names: Vec<&str> = s.iter().map(|&i| tri.complex.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    };
    let all: Vec<&[i64]> = tri.points.iter().map(Vec::as_slice).collect();
    let carrier = difference_matrix(&all);
    let d = rank(&carrier)?;
    // coordinates on which the affine hull projects isomorphically
    let cols = independent_columns(&carrier)?;
    debug_assert_eq!(cols.len(), d);
    let project = |p: &[i64]| -> Vec<i128> { cols.iter().map(|&c| i128::from(p[c])).collect() };
    let projected: Vec<Vec<i128>> = tri.points.iter().map(|p| project(p)).collect();

    let mut volume = 0u128;
    let mut unimodular = true;
    let mut pure = true;
    for s in tri.simplices() {
        if s.len() != d + 1 {
            failures.push(format!("simplex {} has {} vertices, expected {}", label(s), s.len(), d + 1));
            pure = false;
            continue;
        }
        let pts: Vec<&[i64]> = s.iter().map(|&i| tri.points[i].as_slice()).collect();
        match simplex_divisors(&pts) {
            Ok(divs) => {
                unimodular &= divs.iter().all(|&x| x == 1);
                volume += divs.iter().product::<i128>() as u128;
            }
            Err(Error::AffinelyDependent) => {
                failures.push(format!("simplex {} is affinely dependent", label(s)));
                pure = false;
            }
            Err(e) => return Err(e),
        }
    }

    if pure && d == 0 {
        if tri.simplices().len() != 1 {
            failures.push(format!("a point needs exactly one simplex, found {}", tri.simplices().len()));
        }
    } else if pure {
        let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for s in tri.simplices() {
            for (k, &apex) in s.iter().enumerate() {
                let ridge: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
                ridges.entry(ridge).or_default().push(apex);
            }
        }
        for (ridge, apexes) in &ridges {
            let side = |x: usize| -> Result<i128> {
                let base = &projected[ridge[0]];
                let mut m: Matrix =
                    ridge[1..].iter().map(|&r| projected[r].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
                m.push(projected[x].iter().zip(base).map(|(a, b)| a - b).collect());
                Ok(det(&m)?.signum())
            };
            let mut pos = false;
            let mut neg = false;
            for x in 0..tri.points.len() {
                match side(x)? {
                    1 => pos = true,
                    -1 => neg = true,
                    _ => {}
                }
            }
            let boundary = !(pos && neg);
            match (boundary, apexes.len()) {
                (true, 1) => {}
                (true, n) => failures.push(format!("boundary ridge {} lies in {n} simplices", label(ridge))),
                (false, 2) => {
                    if side(apexes[0])? == side(apexes[1])? {
                        failures.push(format!("simplices on ridge {} overlap", label(ridge)));
                    }
                }
                (false, n) => failures.push(format!("interior ridge {} lies in {n} simplices", label(ridge))),
            }
        }
    }

    if volume != expected_volume {
        failures.push(format!("normalized volumes sum to {volume}, expected {expected_volume}"));
    }
    Ok(TriangulationReport {
        ok: failures.is_empty(),
        dimension: d,
        simplices: tri.simplices().len(),
        volume,
        expected_volume,
        unimodular,
        failures,
    })
}

/// Integer flows of strength `t`: nonnegative edge values (positive when
/// `interior`), conserved at inner vertices, with outflow `t` at `s`.
pub fn count_lattice_points(dag: &Dag, t: u64, interior: bool) -> u128 {
    let mut memo = HashMap::new();
    let mut pending = vec![0u64; dag.inner_count() + 2];
    pending[0] = t;
    count_from(dag, 0, pending, u64::from(interior), &mut memo)
}

fn count_from(dag: &Dag, pos: usize, pending: Vec<u64>, lb: u64, memo: &mut HashMap<(usize, Vec<u64>), u128>) -> u128 {
    let v = dag.vertex_at(pos);
    if v == Vertex::Sink {
        return 1;
    }
    if let Some(&c) = memo.get(&(pos, pending.clone())) {
        return c;
    }
    let outs = dag.out_edges(v);
    let mut total = 0u128;
    let mut next = pending.clone();
    next[pos] = 0;
    distribute(dag, outs, pending[pos], lb, &mut next, &mut |state| {
        total += count_from(dag, pos + 1, state.to_vec(), lb, memo);
    });
    memo.insert((pos, pending), total);
    total
}

/// Calls `f` once per way of splitting `amount` over `edges` with every part
/// at least `lb`, adding each part to the pending inflow of the edge's head.
fn distribute(dag: &Dag, edges: &[usize], amount: u64, lb: u64, state: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    let Some((&e, rest)) = edges.split_first() else {
        if amount == 0 {
            f(state);
        }
        return;
    };
    let head = dag.position(dag.edge(e).head);
    let reserve = lb * rest.len() as u64;
    if amount < lb + reserve {
        return;
    }
    let hi = if rest.is_empty() { amount } else { amount - reserve };
    let lo = if rest.is_empty() { amount } else { lb };
    for x in lo..=hi {
        state[head] += x;
        distribute(dag, rest, amount - x, lb, state, f);
        state[head] -= x;
    }
}

/// Ehrhart data of the flow polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HStarData {
    /// `L[t]` lattice points in the `t`-th dilate, `t = 0..=d+1`.
    #[serde(rename = "L")]
    pub counts: Vec<u128>,
    /// `h*_0, ..., h*_d`.
    pub h_star: Vec<i128>,
    pub degree: usize,
    pub codegree: usize,
}

impl HStarData {
    /// Normalized volume `sum h*_i`.
    pub fn volume(&self) -> u128 {
        self.h_star.iter().sum::<i128>() as u128
    }

    /// `h*_i = h*_{degree - i}`.
    pub fn is_palindromic(&self) -> bool {
        let h = &self.h_star[..=self.degree];
        h.iter().eq(h.iter().rev())
    }
}

/// `h*_j = sum_i (-1)^i C(d+1, i) L(j-i)` for `j = 0..=d`, from counts
/// `L(0..=d+1)`. The coefficient at `d + 1` must vanish.
pub fn hstar_from_counts(counts: &[u128], d: usize) -> Result<Vec<i128>> {
    let coeff = |j: usize| -> Result<i128> {
        let mut h = 0i128;
        for i in 0..=j {
            let term = (binomial(d + 1, i) as i128).checked_mul(counts[j - i] as i128).ok_or(Error::Overflow)?;
            h = if i % 2 == 0 { h.checked_add(term) } else { h.checked_sub(term) }.ok_or(Error::Overflow)?;
        }
        Ok(h)
    };
    let h: Vec<i128> = (0..=d).map(coeff).collect::<Result<_>>()?;
    if counts.len() > d + 1 && coeff(d + 1)? != 0 {
        return Err(Error::EhrhartInconsistent("lattice counts are not a polynomial of degree d".into()));
    }
    if let Some(j) = h.iter().position(|&x| x < 0) {
        return Err(Error::EhrhartInconsistent(format!("h*_{j} is negative")));
    }
    Ok(h)
}

/// `h*`, degree and codegree of a polytope of dimension `d` from a lattice
/// point counter `count(t, interior)`. The codegree from `h*` must match the
/// first dilate with an interior lattice point.
pub fn hstar_data(d: usize, mut count: impl FnMut(u64, bool) -> u128) -> Result<HStarData> {
    let counts: Vec<u128> = (0..=d as u64 + 1).map(|t| if t == 0 { 1 } else { count(t, false) }).collect();
    let h_star = hstar_from_counts(&counts, d)?;
    let degree = h_star.iter().rposition(|&x| x != 0).unwrap_or(0);
    let codegree = d + 1 - degree;
    let first_interior = (1..=d as u64 + 1).find(|&t| count(t, true) > 0).map(|t| t as usize);
    if first_interior != Some(codegree) {
        return Err(Error::EhrhartInconsistent(format!(
            "codegree {codegree} from h* but first interior lattice point at dilate {first_interior:?}"
        )));
    }
    Ok(HStarData { counts, h_star, degree, codegree })
}

/// Ehrhart data of the flow polytope of `dag`.
pub fn ehrhart_hstar(dag: &Dag) -> Result<HStarData> {
    hstar_data(dag.dimension(), |t, interior| count_lattice_points(dag, t, interior))
}

/// Degree equality, cross-checked against palindromicity of `h*` after
/// contracting idle edges.
pub fn is_gorenstein(dag: &Dag) -> Result<bool> {
    let reduced = dag.contract_idle_edges()?.dag;
    let balanced = reduced.degree_equality();
    let palindromic = ehrhart_hstar(&reduced)?.is_palindromic();
    if balanced != palindromic {
        return Err(Error::EhrhartInconsistent(format!(
            "degree equality is {balanced} but h* palindromicity is {palindromic}"
        )));
    }
    Ok(balanced)
}

/// Rank of the carrier's difference vectors.
pub fn affine_dimension(points: &[Vec<i64>]) -> Result<usize> {
    let refs: Vec<&[i64]> = points.iter().map(Vec::as_slice).collect();
    rank(&difference_matrix(&refs))
}
