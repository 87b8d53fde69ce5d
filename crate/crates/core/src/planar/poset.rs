//! Finite posets given by cover relations, their filters, order polytopes, and
//! the canonical and equatorial triangulations of order polytopes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::complex::{maximal_sets, SimplicialComplex, Triangulation};
use crate::error::{Error, Result};
use crate::geometry::{hstar_data, HStarData};

/// Serialized form: element names and covers `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

/// A finite poset on `0..len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    /// `covers[x]` lists the elements covering `x`, sorted.
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    /// `leq[x][y]` iff `x <= y`.
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Checks that `covers` is acyclic and transitively reduced.
    pub fn new(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidPoset("duplicate element names".into()));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidPoset(format!("bad cover ({a}, {b})")));
            }
            if up[a].contains(&b) {
                return Err(Error::InvalidPoset(format!("duplicate cover {} < {}", names[a], names[b])));
            }
            up[a].push(b);
            down[b].push(a);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut order: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut k = 0;
        while k < order.len() {
            for &y in &up[order[k]] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    order.push(y);
                }
            }
            k += 1;
        }
        if order.len() != n {
            return Err(Error::InvalidPoset("cover relations contain a cycle".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for &x in order.iter().rev() {
            leq[x][x] = true;
            for &y in &up[x] {
                for z in 0..n {
                    if leq[y][z] {
                        leq[x][z] = true;
                    }
                }
            }
        }
        for (a, ups) in up.iter().enumerate() {
            for &b in ups {
                if ups.iter().any(|&c| c != b && leq[c][b]) {
                    return Err(Error::InvalidPoset(format!("{} < {} is not a cover", names[a], names[b])));
                }
            }
        }
        Ok(Poset { names, up, down, leq })
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Self> {
        let idx = |name: &str| {
            spec.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::InvalidPoset(format!("unknown element `{name}`")))
        };
        let covers = spec.covers.iter().map(|[a, b]| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        Poset::new(spec.elements.clone(), &covers)
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            elements: self.names.clone(),
            covers: self.covers().into_iter().map(|(a, b)| [self.names[a].clone(), self.names[b].clone()]).collect(),
        }
    }

    /// `a_1 < a_2 < ... < a_n`.
    pub fn chain(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("a{i}")).collect();
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(names, &covers).expect("chains are posets")
    }

    pub fn antichain(n: usize) -> Self {
        Poset::new((1..=n).map(|i| format!("a{i}")).collect(), &[]).expect("antichains are posets")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Cover pairs `(lower, upper)` in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.up.iter().enumerate().flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b))).collect()
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// A linear extension, smallest available element first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.down.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.len()).filter(|&x| indeg[x] == 0).collect();
        let mut out = Vec::new();
        while let Some(x) = ready.pop_first() {
            out.push(x);
            for &y in &self.up[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        out
    }

    /// Ranks `1..=r` when every maximal chain has the same length: minimal
    /// elements have rank 1, covers raise the rank by exactly one and every
    /// maximal element has rank `r`.
    pub fn is_graded(&self) -> (bool, Vec<usize>) {
        let mut rank = vec![0usize; self.len()];
        for x in self.linear_extension() {
            rank[x] = 1 + self.down[x].iter().map(|&y| rank[y]).max().unwrap_or(0);
        }
        let r = rank.iter().copied().max().unwrap_or(0);
        let steps = self.covers().into_iter().all(|(a, b)| rank[b] == rank[a] + 1);
        let tops = (0..self.len()).filter(|&x| self.up[x].is_empty()).all(|x| rank[x] == r);
        (steps && tops, rank)
    }

    /// Ranks of a graded poset, or an error naming the poset as ungraded.
    pub fn ranks(&self) -> Result<Vec<usize>> {
        match self.is_graded() {
            (true, ranks) => Ok(ranks),
            (false, _) => Err(Error::InvalidPoset("poset is not graded".into())),
        }
    }

    pub fn is_filter(&self, set: &[usize]) -> bool {
        set.iter().all(|&x| self.up[x].iter().all(|y| set.contains(y)))
    }

    /// Every filter (upward-closed subset) as a sorted element list, sorted.
    pub fn filters(&self) -> Vec<Vec<usize>> {
        let mut order = self.linear_extension();
        order.reverse();
        let mut out = Vec::new();
        let mut inside = vec![false; self.len()];
        self.grow_filters(&order, 0, &mut inside, &mut out);
        out.sort();
        out
    }

    fn grow_filters(&self, order: &[usize], k: usize, inside: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let Some(&x) = order.get(k) else {
            out.push((0..self.len()).filter(|&i| inside[i]).collect());
            return;
        };
        self.grow_filters(order, k + 1, inside, out);
        if self.up[x].iter().all(|&y| inside[y]) {
            inside[x] = true;
            self.grow_filters(order, k + 1, inside, out);
            inside[x] = false;
        }
    }

    /// Characteristic vector of a set of elements.
    pub fn characteristic(&self, set: &[usize]) -> Vec<i64> {
        let mut v = vec![0; self.len()];
        for &x in set {
            v[x] = 1;
        }
        v
    }

    /// Vertices of the order polytope: characteristic vectors of all filters.
    pub fn order_polytope_vertices(&self) -> Vec<Vec<i64>> {
        self.filters().iter().map(|f| self.characteristic(f)).collect()
    }

    /// Order-preserving maps into `{0..t}` (strictly increasing along covers
    /// and into `{1..t-1}` when `interior`).
    pub fn count_order_points(&self, t: u64, interior: bool) -> u128 {
        let order = self.linear_extension();
        let mut value = vec![0u64; self.len()];
        self.count_from(&order, 0, t, interior, &mut value)
    }

    fn count_from(&self, order: &[usize], k: usize, t: u64, interior: bool, value: &mut Vec<u64>) -> u128 {
        let Some(&x) = order.get(k) else { return 1 };
        let strict = u64::from(interior);
        let lo = self.down[x].iter().map(|&y| value[y] + strict).max().unwrap_or(strict);
        let hi = t - strict.min(t);
        let mut n = 0;
        for v in lo..=hi {
            value[x] = v;
            n += self.count_from(order, k + 1, t, interior, value);
        }
        n
    }

    /// Ehrhart data of the order polytope.
    pub fn order_hstar(&self) -> Result<HStarData> {
        hstar_data(self.len(), |t, interior| self.count_order_points(t, interior))
    }

    /// Number of linear extensions.
    pub fn linear_extension_count(&self) -> u128 {
        let mut memo = std::collections::HashMap::new();
        self.extensions_from(0, &mut memo)
    }

    fn extensions_from(&self, placed: u128, memo: &mut std::collections::HashMap<u128, u128>) -> u128 {
        if placed.count_ones() as usize == self.len() {
            return 1;
        }
        if let Some(&c) = memo.get(&placed) {
            return c;
        }
        let mut n = 0;
        for x in 0..self.len() {
            if placed >> x & 1 == 0 && self.down[x].iter().all(|&y| placed >> y & 1 == 1) {
                n += self.extensions_from(placed | 1 << x, memo);
            }
        }
        memo.insert(placed, n);
        n
    }

    /// Brute-force isomorphism test.
    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        use itertools::Itertools;
        if self.len() != other.len() || self.covers().len() != other.covers().len() {
            return false;
        }
        let target: BTreeSet<(usize, usize)> = other.covers().into_iter().collect();
        (0..self.len())
            .permutations(self.len())
            .any(|p| self.covers().into_iter().all(|(a, b)| target.contains(&(p[a], p[b]))))
    }
}

/// Triangulation of the order polytope on all filters, with `simplices`
/// given as index sets into [`Poset::filters`].
fn filter_triangulation(poset: &Poset, filters: &[Vec<usize>], simplices: Vec<Vec<usize>>) -> Triangulation {
    let label = |f: &Vec<usize>| {
        let names: Vec<&str> = f.iter().map(|&x| poset.names[x].as_str()).collect();
        format!("{{{}}}", names.join(","))
    };
    Triangulation {
        complex: SimplicialComplex::new(filters.iter().map(label).collect(), simplices),
        points: filters.iter().map(|f| poset.characteristic(f)).collect(),
        coordinates: poset.names.clone(),
    }
}

/// Canonical triangulation: one simplex per maximal chain of filters
/// `∅ = F_0 ⊂ F_1 ⊂ ... ⊂ F_n = P`.
pub fn canonical_triangulation(poset: &Poset) -> Triangulation {
    let filters = poset.filters();
    let index = |f: &[usize]| filters.binary_search_by(|g| g.as_slice().cmp(f)).expect("filter");
    let mut simplices = Vec::new();
    let mut chain = vec![index(&[])];
    let mut current: Vec<usize> = Vec::new();
    extend_chain(poset, &mut current, &mut chain, &index, &mut simplices);
    filter_triangulation(poset, &filters, simplices)
}

fn extend_chain(
    poset: &Poset,
    current: &mut Vec<usize>,
    chain: &mut Vec<usize>,
    index: &dyn Fn(&[usize]) -> usize,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == poset.len() {
        out.push(chain.clone());
        return;
    }
    for x in 0..poset.len() {
        if current.contains(&x) || !poset.up[x].iter().all(|y| current.contains(y)) {
            continue;
        }
        current.push(x);
        let mut sorted = current.clone();
        sorted.sort_unstable();
        chain.push(index(&sorted));
        extend_chain(poset, current, chain, index, out);
        chain.pop();
        current.pop();
    }
}

/// Rank-constant filters `F_j = {x : rank(x) > j}` for `j = 0..=r`.
pub fn rank_constant_filters(ranks: &[usize]) -> Vec<Vec<usize>> {
    let r = ranks.iter().copied().max().unwrap_or(0);
    (0..=r).map(|j| (0..ranks.len()).filter(|&x| ranks[x] > j).collect()).collect()
}

/// Whether a nested chain of nonempty filters is equatorial, by the jump test
/// and by the sum test; the two must agree.
///
/// Jump test: the top filter is a proper subset and, for each pair of
/// consecutive ranks, some cover between them lies in a single jump.
/// Sum test: `f = sum of the characteristic vectors` has minimum 0 and, for
/// each pair of consecutive ranks, some cover between them on which `f` is
/// constant.
pub fn is_equatorial_chain(poset: &Poset, ranks: &[usize], chain: &[Vec<usize>]) -> Result<bool> {
    for w in chain.windows(2) {
        if w[0].len() >= w[1].len() || !w[0].iter().all(|x| w[1].contains(x)) {
            return Ok(false);
        }
    }
    if chain.iter().any(Vec::is_empty) {
        return Ok(false);
    }
    let r = ranks.iter().copied().max().unwrap_or(0);
    let covers_between =
        |j: usize| poset.covers().into_iter().filter(move |&(a, b)| ranks[a] == j - 1 && ranks[b] == j);

    // jump index of each element: first filter containing it, or t+1
    let t = chain.len();
    let jump: Vec<usize> =
        (0..poset.len()).map(|x| chain.iter().position(|f| f.contains(&x)).map_or(t + 1, |i| i + 1)).collect();
    let proper = chain.last().is_none_or(|top| top.len() < poset.len());
    let by_jumps = proper && (2..=r).all(|j| covers_between(j).any(|(a, b)| jump[a] == jump[b]));

    let mut f = vec![0i64; poset.len()];
    for filter in chain {
        for &x in filter {
            f[x] += 1;
        }
    }
    let min_zero = f.iter().copied().min().unwrap_or(0) == 0;
    let by_sum = min_zero && (2..=r).all(|j| covers_between(j).any(|(a, b)| f[a] == f[b]));

    if by_jumps != by_sum {
        return Err(Error::EquatorialMismatch(format!("jump test says {by_jumps}, sum test says {by_sum}")));
    }
    Ok(by_sum)
}

/// Whether `f` is constant on each rank.
pub fn is_rank_constant(ranks: &[usize], f: &[i64]) -> bool {
    (0..f.len()).all(|x| (0..f.len()).all(|y| ranks[x] != ranks[y] || f[x] == f[y]))
}

/// Maximal equatorial chains of nonempty filters, as index sets into
/// [`Poset::filters`].
pub fn equatorial_chains(poset: &Poset, ranks: &[usize]) -> Result<Vec<Vec<usize>>> {
    let filters = poset.filters();
    let mut found = Vec::new();
    let mut chain = Vec::new();
    grow_equatorial(poset, ranks, &filters, &mut chain, &mut found)?;
    Ok(maximal_sets(found))
}

fn grow_equatorial(
    poset: &Poset,
    ranks: &[usize],
    filters: &[Vec<usize>],
    chain: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let mut extended = false;
    for (i, f) in filters.iter().enumerate() {
        let above_last = match chain.last() {
            None => !f.is_empty(),
            Some(&last) => f.len() > filters[last].len() && filters[last].iter().all(|x| f.contains(x)),
        };
        if !above_last {
            continue;
        }
        chain.push(i);
        let sets: Vec<Vec<usize>> = chain.iter().map(|&k| filters[k].clone()).collect();
        if is_equatorial_chain(poset, ranks, &sets)? {
            extended = true;
            grow_equatorial(poset, ranks, filters, chain, found)?;
        }
        chain.pop();
    }
    if !extended {
        found.push(chain.clone());
    }
    Ok(())
}

/// The equatorial complex `Δ_eq` of a graded poset, on the vertex set of all
/// filters.
pub fn equatorial_complex(poset: &Poset) -> Result<SimplicialComplex> {
    let ranks = poset.ranks()?;
    let filters = poset.filters();
    let chains = equatorial_chains(poset, &ranks)?;
    Ok(filter_triangulation(poset, &filters, chains).complex)
}

/// Reiner-Welker equatorial triangulation: every maximal equatorial chain
/// joined with the rank-constant filters.
pub fn rw_equatorial_triangulation(poset: &Poset) -> Result<Triangulation> {
    let ranks = poset.ranks()?;
    let filters = poset.filters();
    let index = |f: &[usize]| filters.binary_search_by(|g| g.as_slice().cmp(f)).expect("filter");
    let sigma: Vec<usize> = rank_constant_filters(&ranks).iter().map(|f| index(f)).collect();
    let simplices = equatorial_chains(poset, &ranks)?
        .into_iter()
        .map(|c| c.into_iter().chain(sigma.iter().copied()).collect())
        .collect();
    Ok(filter_triangulation(poset, &filters, simplices))
}
