//! Maximal clique enumeration (Bron-Kerbosch with pivoting) on dense
//! undirected graphs stored as bitset adjacency rows.

use fixedbitset::FixedBitSet;

/// Undirected simple graph on `0..n`.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![FixedBitSet::with_capacity(n); n] }
    }

    /// Graph on `0..n` with an edge `{i, j}` whenever `i != j` and `adjacent(i, j)`.
    /// `adjacent` is queried once per unordered pair, with `i < j`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones(..)
    }

    /// All maximal cliques, each sorted, in lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut p = FixedBitSet::with_capacity(n);
        p.insert_range(..);
        let x = FixedBitSet::with_capacity(n);
        let mut r = Vec::new();
        self.expand(&mut r, p, x, &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: FixedBitSet, mut x: FixedBitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_clear() {
            if x.is_clear() {
                out.push(r.clone());
            }
            return;
        }
        // pivot maximizing |P ∩ N(u)|
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| (p.intersection(&self.adj[u]).count(), std::cmp::Reverse(u)))
            .expect("P is nonempty");
        let mut candidates = p.clone();
        candidates.difference_with(&self.adj[pivot]);
        for v in candidates.ones().collect::<Vec<_>>() {
            let mut np = p.clone();
            np.intersect_with(&self.adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.adj[v]);
            r.push(v);
            self.expand(r, np, nx, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_plus_pendant() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(0, 2);
        g.add_edge(2, 3);
        assert_eq!(g.maximal_cliques(), vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn isolated_vertices_and_empty_graph() {
        assert_eq!(Graph::new(3).maximal_cliques(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(Graph::new(0).maximal_cliques(), vec![Vec::<usize>::new()]);
    }

    fn brute_force(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.len();
        let is_clique = |s: &[usize]| s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| g.adjacent(a, b)));
        let mut cliques: Vec<Vec<usize>> = (0u32..1 << n)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| is_clique(s))
            .collect();
        cliques.retain(|s| (0..n).all(|v| s.contains(&v) || !s.iter().all(|&u| g.adjacent(u, v))));
        cliques.sort();
        cliques
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(n in 1usize..9, bits in proptest::collection::vec(any::<bool>(), 36)) {
            let mut k = 0;
            let g = Graph::from_fn(n, |_, _| { k += 1; bits[k - 1] });
            prop_assert_eq!(g.maximal_cliques(), brute_force(&g));
        }
    }
}
