//! Phylogenetic trees: neighbor joining, outgroup rooting, Newick I/O and
//! split-based topology comparison.

mod newick;
mod nj;
mod splits;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use newick::{parse_newick, NewickOptions};
pub use nj::neighbor_join;
pub use splits::{rf_distance, SplitSet};

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub label: Option<String>,
    /// Neighbours with the length of the connecting edge.
    pub edges: Vec<(usize, f64)>,
}

/// A tree with labeled leaves and branch lengths.
///
/// Unrooted trees remember an `anchor` node that Newick output starts from;
/// rooted trees have a designated root of degree 2. Branch lengths may be
/// negative (as neighbor joining can produce on non-additive input).
#[derive(Debug, Clone, PartialEq)]
pub struct PhyloTree {
    nodes: Vec<Node>,
    root: Option<usize>,
    anchor: usize,
}

impl PhyloTree {
    /// Builds an unrooted tree from node labels and undirected edges.
    pub fn from_edges(labels: Vec<Option<String>>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Contract("a tree needs at least one node".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::Contract(alloc::format!(
                "{} edges for {n} nodes; a tree has nodes - 1",
                edges.len()
            )));
        }
        let mut nodes: Vec<Node> = labels
            .into_iter()
            .map(|label| Node {
                label,
                edges: Vec::new(),
            })
            .collect();
        for &(a, b, len) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::Contract(alloc::format!("bad edge ({a}, {b})")));
            }
            nodes[a].edges.push((b, len));
            nodes[b].edges.push((a, len));
        }
        let tree = PhyloTree {
            anchor: (0..n).find(|&i| nodes[i].edges.len() >= 3).unwrap_or(0),
            nodes,
            root: None,
        };
        tree.check()?;
        Ok(tree)
    }

    fn check(&self) -> Result<()> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.nodes[v].edges {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Contract("tree is not connected".into()));
        }
        let mut labels = BTreeSet::new();
        for i in self.leaves() {
            match &self.nodes[i].label {
                None => return Err(Error::Contract("unlabeled leaf".into())),
                Some(l) if !labels.insert(l.clone()) => {
                    return Err(Error::Contract(alloc::format!("duplicate leaf label `{l}`")))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn is_rooted(&self) -> bool {
        self.root.is_some()
    }

    fn is_leaf(&self, i: usize) -> bool {
        self.nodes[i].edges.len() <= 1 && Some(i) != self.root
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.is_leaf(i))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Leaf labels in sorted order.
    pub fn leaf_labels(&self) -> Vec<String> {
        let mut v: Vec<String> = self.leaves().filter_map(|i| self.nodes[i].label.clone()).collect();
        v.sort();
        v
    }

    fn leaf_index(&self, label: &str) -> Option<usize> {
        self.leaves().find(|&i| self.nodes[i].label.as_deref() == Some(label))
    }

    /// Undirected edges as `(a, b, length)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (a, node) in self.nodes.iter().enumerate() {
            for &(b, len) in &node.edges {
                if a < b {
                    out.push((a, b, len));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Edges with negative length, as `(a, b, length)`.
    pub fn negative_edges(&self) -> Vec<(usize, usize, f64)> {
        self.edges().into_iter().filter(|e| e.2 < 0.0).collect()
    }

    fn label_or_empty(&self, i: usize) -> String {
        self.nodes[i].label.clone().unwrap_or_default()
    }

    /// Sum of branch lengths on the path between two leaves.
    pub fn path_length(&self, a: &str, b: &str) -> Result<f64> {
        let from = self.leaf_index(a).ok_or_else(|| self.unknown(a))?;
        let to = self.leaf_index(b).ok_or_else(|| self.unknown(b))?;
        Ok(self.distances_from(from)[to])
    }

    fn distances_from(&self, start: usize) -> Vec<f64> {
        let mut dist = vec![f64::NAN; self.nodes.len()];
        dist[start] = 0.0;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(w, len) in &self.nodes[v].edges {
                if dist[w].is_nan() {
                    dist[w] = dist[v] + len;
                    stack.push(w);
                }
            }
        }
        dist
    }

    /// Leaf-to-leaf path lengths, labels in sorted order.
    pub fn leaf_distances(&self) -> (Vec<String>, Vec<f64>) {
        let mut leaves: Vec<usize> = self.leaves().collect();
        leaves.sort_by_key(|&i| self.label_or_empty(i));
        let labels = leaves.iter().map(|&i| self.label_or_empty(i)).collect();
        let n = leaves.len();
        let mut values = vec![0.0; n * n];
        for (r, &i) in leaves.iter().enumerate() {
            let d = self.distances_from(i);
            for (c, &j) in leaves.iter().enumerate() {
                values[r * n + c] = d[j];
            }
        }
        (labels, values)
    }

    fn unknown(&self, label: &str) -> Error {
        Error::UnknownLabel {
            label: label.into(),
            available: self.leaf_labels(),
        }
    }

    /// The same tree without its root node; the root's two edges are merged.
    pub fn unrooted(&self) -> PhyloTree {
        let Some(r) = self.root else {
            return self.clone();
        };
        let mut t = self.clone();
        t.root = None;
        if t.nodes[r].edges.len() != 2 {
            return t;
        }
        let (a, la) = t.nodes[r].edges[0];
        let (b, lb) = t.nodes[r].edges[1];
        for (x, y) in [(a, b), (b, a)] {
            for e in t.nodes[x].edges.iter_mut() {
                if e.0 == r {
                    *e = (y, la + lb);
                }
            }
        }
        t.nodes[r].edges.clear();
        t.remove_isolated(r);
        t.anchor = (0..t.nodes.len()).find(|&i| t.nodes[i].edges.len() >= 3).unwrap_or(0);
        t
    }

    fn remove_isolated(&mut self, r: usize) {
        self.nodes.remove(r);
        for node in &mut self.nodes {
            for e in node.edges.iter_mut() {
                if e.0 > r {
                    e.0 -= 1;
                }
            }
        }
        if self.anchor > r {
            self.anchor -= 1;
        }
    }

    /// Places a root at the midpoint of the pendant edge of `outgroup`.
    pub fn root_at_outgroup(&self, outgroup: &str) -> Result<PhyloTree> {
        let mut t = self.unrooted();
        let leaf = t.leaf_index(outgroup).ok_or_else(|| t.unknown(outgroup))?;
        let Some(&(parent, len)) = t.nodes[leaf].edges.first() else {
            return Err(Error::Contract("cannot root a single-leaf tree".into()));
        };
        let r = t.nodes.len();
        t.nodes.push(Node {
            label: None,
            edges: vec![(leaf, len / 2.0), (parent, len / 2.0)],
        });
        for (x, other) in [(leaf, parent), (parent, leaf)] {
            for e in t.nodes[x].edges.iter_mut() {
                if e.0 == other {
                    *e = (r, len / 2.0);
                }
            }
        }
        t.root = Some(r);
        t.anchor = r;
        Ok(t)
    }

    pub fn splits(&self) -> SplitSet {
        SplitSet::of(self)
    }

    /// Whether `members` is exactly the leaf set of some clade.
    ///
    /// For rooted trees a clade is the leaf set below a node; for unrooted
    /// trees it is either side of an edge.
    pub fn is_monophyletic<S: AsRef<str>>(&self, members: &[S]) -> bool {
        let want: BTreeSet<&str> = members.iter().map(|s| s.as_ref()).collect();
        if want.is_empty() {
            return false;
        }
        let all: BTreeSet<String> = self.leaf_labels().into_iter().collect();
        if want.len() == all.len() && want.iter().all(|w| all.contains(*w)) {
            return true;
        }
        let start = self.root.unwrap_or(self.anchor);
        let below = self.subtree_leaves(start);
        for (v, set) in below.iter().enumerate() {
            if v == start {
                continue;
            }
            let names: BTreeSet<&str> = set
                .iter()
                .map(|&i| self.nodes[i].label.as_deref().unwrap_or(""))
                .collect();
            if names == want {
                return true;
            }
            if self.root.is_none() {
                let complement: BTreeSet<&str> =
                    all.iter().map(|s| s.as_str()).filter(|s| !names.contains(s)).collect();
                if complement == want {
                    return true;
                }
            }
        }
        false
    }

    /// Leaf ids below each node when hanging the tree from `start`.
    fn subtree_leaves(&self, start: usize) -> Vec<Vec<usize>> {
        let order = self.preorder(start);
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for &(v, parent) in order.iter().rev() {
            if self.is_leaf(v) {
                below[v].push(v);
            }
            if let Some(p) = parent {
                let mine = below[v].clone();
                below[p].extend(mine);
            }
        }
        below
    }

    /// Nodes in preorder from `start`, each with its parent.
    fn preorder(&self, start: usize) -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(start, None)];
        while let Some((v, parent)) = stack.pop() {
            out.push((v, parent));
            for &(w, _) in self.nodes[v].edges.iter().rev() {
                if Some(w) != parent {
                    stack.push((w, Some(v)));
                }
            }
        }
        out
    }

    pub fn to_newick(&self, precision: usize) -> String {
        newick::write(
            self,
            &NewickOptions {
                precision,
                ..NewickOptions::default()
            },
        )
    }

    pub fn to_newick_with(&self, options: &NewickOptions) -> String {
        newick::write(self, options)
    }
}
