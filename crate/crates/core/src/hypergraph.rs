//! Color hypergraphs: the multiset of color sets `{c_i(σ)}` over the colors `N`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorHypergraph {
    pub colors: BTreeSet<usize>,
    /// One edge per coloring, in coloring order.
    pub edges: Vec<BTreeSet<usize>>,
}

/// Shape of a hypergraph whose edges are all pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeShape {
    /// A tree with maximum degree at most two.
    Path,
    /// A tree with one vertex adjacent to all others (and some degree above two).
    Star,
    /// Any other tree.
    Other,
    NotATree,
    /// Some edge is not a pair.
    NotApplicable,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        Self { parent: (0..len).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl ColorHypergraph {
    pub fn new(colors: BTreeSet<usize>, edges: Vec<BTreeSet<usize>>) -> Self {
        Self { colors, edges }
    }

    /// Colors lying in at least one edge.
    pub fn covered(&self) -> BTreeSet<usize> {
        self.edges.iter().flatten().copied().collect()
    }

    pub fn has_isolated_colors(&self) -> bool {
        let covered = self.covered();
        self.colors.iter().any(|c| !covered.contains(c))
    }

    fn index_of(&self, color: usize) -> Option<usize> {
        self.colors.iter().position(|&c| c == color)
    }

    /// Connected means every color is covered and the bipartite incidence
    /// graph on colors and edges is connected.
    pub fn is_connected(&self) -> bool {
        if self.has_isolated_colors() || self.covered().iter().any(|c| !self.colors.contains(c)) {
            return false;
        }
        if self.colors.is_empty() {
            return self.edges.is_empty();
        }
        let k = self.colors.len();
        let mut sets = DisjointSets::new(k + self.edges.len());
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.is_empty() {
                return false;
            }
            for &c in edge {
                sets.union(k + e, self.index_of(c).expect("edge colors lie in N"));
            }
        }
        let root = sets.find(0);
        (1..k + self.edges.len()).all(|x| sets.find(x) == root)
    }

    pub fn tree_shape(&self) -> TreeShape {
        if self.edges.iter().any(|e| e.len() != 2) {
            return TreeShape::NotApplicable;
        }
        let k = self.colors.len();
        if self.edges.len() + 1 != k || !self.is_connected() {
            return TreeShape::NotATree;
        }
        let mut sets = DisjointSets::new(k);
        let mut degree = vec![0usize; k];
        for edge in &self.edges {
            let ends: Vec<usize> = edge.iter().map(|&c| self.index_of(c).unwrap()).collect();
            if !sets.union(ends[0], ends[1]) {
                return TreeShape::NotATree;
            }
            degree[ends[0]] += 1;
            degree[ends[1]] += 1;
        }
        let max = degree.iter().copied().max().unwrap_or(0);
        if max <= 2 {
            TreeShape::Path
        } else if max == k - 1 {
            TreeShape::Star
        } else {
            TreeShape::Other
        }
    }
}
