use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::PhyloTree;
use crate::error::Error;
use crate::Result;

/// Non-trivial leaf bipartitions induced by the internal edges of a tree,
/// ignoring any root.
///
/// Each split is a bitset over the sorted leaf labels, normalized so the
/// side not containing the first label is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSet {
    labels: Vec<String>,
    splits: BTreeSet<Vec<u64>>,
}

impl SplitSet {
    pub fn of(tree: &PhyloTree) -> Self {
        let labels = tree.leaf_labels();
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let start = tree.root.unwrap_or(tree.anchor);
        let mut bits: Vec<Vec<u64>> = vec![vec![0; words]; tree.nodes.len()];
        let mut splits = BTreeSet::new();
        for &(v, parent) in tree.preorder(start).iter().rev() {
            if tree.is_leaf(v) {
                let idx = labels.binary_search(&tree.label_or_empty(v)).unwrap();
                bits[v][idx / 64] |= 1 << (idx % 64);
            }
            if let Some(p) = parent {
                let side = bits[v].clone();
                let size: usize = side.iter().map(|w| w.count_ones() as usize).sum();
                if size >= 2 && size + 2 <= n {
                    splits.insert(normalize(side.clone(), n));
                }
                for (a, b) in bits[p].iter_mut().zip(&side) {
                    *a |= b;
                }
            }
        }
        SplitSet { labels, splits }
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Each split as the labels on the side without the first label.
    pub fn sides(&self) -> Vec<Vec<String>> {
        self.splits
            .iter()
            .map(|b| {
                (0..self.labels.len())
                    .filter(|&i| b[i / 64] >> (i % 64) & 1 == 1)
                    .map(|i| self.labels[i].clone())
                    .collect()
            })
            .collect()
    }
}

fn normalize(mut side: Vec<u64>, n: usize) -> Vec<u64> {
    if side[0] & 1 == 1 {
        for (k, w) in side.iter_mut().enumerate() {
            *w = !*w;
            let used = n.saturating_sub(k * 64).min(64);
            if used < 64 {
                *w &= (1u64 << used) - 1;
            }
        }
    }
    side
}

/// Robinson-Foulds distance: size of the symmetric difference of the split sets.
pub fn rf_distance(a: &PhyloTree, b: &PhyloTree) -> Result<usize> {
    let sa = a.splits();
    let sb = b.splits();
    if sa.labels != sb.labels {
        let only_first = sa.labels.iter().filter(|l| !sb.labels.contains(l)).cloned().collect();
        let only_second = sb.labels.iter().filter(|l| !sa.labels.contains(l)).cloned().collect();
        return Err(Error::LeafSetMismatch {
            only_first,
            only_second,
        });
    }
    Ok(sa.splits.symmetric_difference(&sb.splits).count())
}
