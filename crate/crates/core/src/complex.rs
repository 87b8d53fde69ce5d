//! Abstract simplicial complexes given by their maximal faces, and
//! triangulations carrying lattice coordinates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

/// A simplicial complex on vertices `0..labels.len()`, stored by its maximal
/// faces (each sorted, none contained in another, in sorted order).
///
/// `facets == [[]]` is the complex `{∅}`; `facets == []` is the void complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub labels: Vec<String>,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces`, dropping non-maximal ones.
    pub fn new(labels: Vec<String>, faces: impl IntoIterator<Item = Vec<usize>>) -> Self {
        SimplicialComplex { labels, facets: maximal_sets(faces) }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Largest face size.
    pub fn rank(&self) -> usize {
        self.facets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Dimension of the largest face; `-1` for `{∅}` and the void complex.
    pub fn dimension(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn is_pure(&self) -> bool {
        let r = self.rank();
        self.facets.iter().all(|f| f.len() == r)
    }

    /// Vertices that occur in some face.
    pub fn used_vertices(&self) -> BTreeSet<usize> {
        self.facets.iter().flatten().copied().collect()
    }

    /// Every face, including `∅` when the complex is not void.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for mask in 0u64..(1 << f.len()) {
                let face: Vec<usize> =
                    f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                out.insert(face);
            }
        }
        out
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        self.facets.iter().any(|f| is_subset(face, f))
    }

    /// `f[k+1]` is the number of faces with `k+1` vertices, so `f[0] = f_{-1}`.
    pub fn f_vector(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.rank() + 1];
        if self.facets.is_empty() {
            return Vec::new();
        }
        for face in self.faces() {
            f[face.len()] += 1;
        }
        f
    }

    /// `h_j = sum_{i<=j} (-1)^(j-i) C(d-i, j-i) f_{i-1}` where `d` is the
    /// largest face size; `h` has `d + 1` entries.
    pub fn h_vector(&self) -> Vec<i64> {
        h_from_f(&self.f_vector())
    }

    /// `sum_{k>=0} (-1)^k f_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().skip(1).map(|(i, &n)| if i % 2 == 1 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Number of maximal faces containing each ridge (face of size `rank - 1`
    /// inside a facet of full size).
    pub fn ridge_degrees(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for f in &self.facets {
            for skip in 0..f.len() {
                let ridge: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                *out.entry(ridge).or_insert(0) += 1;
            }
        }
        out
    }

    /// Pure, and every ridge lies in exactly two facets.
    pub fn is_pseudomanifold(&self) -> bool {
        self.is_pure() && self.ridge_degrees().values().all(|&c| c == 2)
    }

    /// Complex whose facets are `f ∪ g` for facets `f` of `self`, `g` of
    /// `other`; vertices of `other` are shifted past those of `self`.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.labels.len();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut faces = Vec::new();
        for f in &self.facets {
            for g in &other.facets {
                let mut face = f.clone();
                face.extend(g.iter().map(|&v| v + shift));
                faces.push(face);
            }
        }
        SimplicialComplex::new(labels, faces)
    }

    /// Facets written with vertex labels.
    pub fn labelled_facets(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|f| f.iter().map(|&v| self.labels[v].clone()).collect()).collect()
    }
}

/// `h` from `f = (f_{-1}, f_0, ..., f_{d-1})`.
pub fn h_from_f(f: &[u64]) -> Vec<i64> {
    let Some(d) = f.len().checked_sub(1) else { return Vec::new() };
    (0..=d)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let term = binomial(d - i, j - i) as i64 * f[i] as i64;
                    if (j - i) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `a ⊆ b` for sorted slices.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Sorted, deduplicated inclusion-maximal members of `sets`.
pub fn maximal_sets(sets: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = sets
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    all.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in all {
        if !kept.iter().any(|k| is_subset(&s, k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// A simplicial complex whose vertices are lattice points of a carrier
/// polytope. `points` lists every vertex of the carrier; faces index into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangulation {
    pub complex: SimplicialComplex,
    pub points: Vec<Vec<i64>>,
    /// Names of the ambient coordinates.
    pub coordinates: Vec<String>,
}

impl Triangulation {
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.complex.facets
    }

    pub fn h_vector(&self) -> Vec<i64> {
        self.complex.h_vector()
    }

    /// Simplices as sorted label lists, for comparing triangulations built on
    /// different vertex numberings.
    pub fn labelled_simplices(&self) -> BTreeSet<BTreeSet<String>> {
        self.complex.labelled_facets().into_iter().map(|f| f.into_iter().collect()).collect()
    }

    /// The same triangulation with one simplex removed.
    pub fn without_simplex(&self, index: usize) -> Triangulation {
        let mut out = self.clone();
        out.complex.facets.remove(index);
        out
    }
}
