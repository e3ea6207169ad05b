use alloc::string::String;
use alloc::vec::Vec;

use super::PhyloTree;
use crate::error::Error;
use crate::matrix::DistanceMatrix;
use crate::Result;

/// Saitou-Nei neighbor joining.
///
/// Needs an exactly symmetric matrix with a zero diagonal. At each step the
/// pair minimizing `Q(i,j) = (r-2) d(i,j) - R(i) - R(j)` is joined (ties go
/// to the smallest `(i, j)` in current row order; the new node takes row
/// `i`). The last three nodes are joined at a common centre, which becomes
/// the tree's Newick anchor. Two taxa give a single edge.
pub fn neighbor_join(m: &DistanceMatrix) -> Result<PhyloTree> {
    if !m.is_tree_ready() {
        return Err(Error::Contract(
            "neighbor joining needs a symmetric matrix with zero diagonal; symmetrize it first \
             (symmetrize mode avg or min, zero diagonal)"
                .into(),
        ));
    }
    let n = m.len();
    let mut labels: Vec<Option<String>> = m.labels().iter().cloned().map(Some).collect();
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * n);
    if n == 2 {
        edges.push((0, 1, m.get(0, 1)));
        return PhyloTree::from_edges(labels, &edges);
    }

    let mut active: Vec<usize> = (0..n).collect();
    let mut d: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();

    while active.len() > 3 {
        let r = active.len();
        let sums: Vec<f64> = d.iter().map(|row| row.iter().sum()).collect();
        let mut best = (0, 1);
        let mut best_q = f64::INFINITY;
        for i in 0..r {
            for j in i + 1..r {
                let q = (r - 2) as f64 * d[i][j] - sums[i] - sums[j];
                if q < best_q {
                    best_q = q;
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        let dij = d[i][j];
        let li = dij / 2.0 + (sums[i] - sums[j]) / (2.0 * (r - 2) as f64);
        let lj = dij - li;

        let u = labels.len();
        labels.push(None);
        edges.push((u, active[i], li));
        edges.push((u, active[j], lj));

        let new_row: Vec<f64> = (0..r)
            .map(|k| {
                if k == i || k == j {
                    0.0
                } else {
                    (d[i][k] + d[j][k] - dij) / 2.0
                }
            })
            .collect();
        for k in 0..r {
            d[k][i] = new_row[k];
        }
        d[i] = new_row;
        active[i] = u;
        active.remove(j);
        d.remove(j);
        for row in d.iter_mut() {
            row.remove(j);
        }
    }

    let c = labels.len();
    labels.push(None);
    let (dab, dac, dbc) = (d[0][1], d[0][2], d[1][2]);
    edges.push((c, active[0], (dab + dac - dbc) / 2.0));
    edges.push((c, active[1], (dab + dbc - dac) / 2.0));
    edges.push((c, active[2], (dac + dbc - dab) / 2.0));

    let mut tree = PhyloTree::from_edges(labels, &edges)?;
    tree.anchor = c;
    Ok(tree)
}
