//! Tree-structured dependence: pairwise mutual-information matrices,
//! maximum-weight spanning trees, and the resulting tree approximation of a
//! joint distribution learned from i.i.d. rows.
//!
//! The learned structure is the spanning tree maximizing the sum of edge
//! mutual informations, so the quality of the MI estimates directly controls
//! structure recovery — the point probed by [`wrong_edges_ratio`].

use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::composite::{estimate_mi, PairHistogram};
use crate::{Error, Histogram, Result};

/// An undirected spanning tree over variables `0..d`, stored as a sorted set
/// of `(lo, hi)` edges. Construction validates that the edges really form a
/// spanning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeModel {
    d: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl TreeModel {
    /// Builds a tree over `d` variables from an edge list. Edges may be given
    /// in either orientation; they are normalized to `(lo, hi)`. Fails unless
    /// the result is exactly a spanning tree: `d − 1` distinct edges, no
    /// self-loops, all endpoints in range, connected.
    pub fn new(d: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("tree needs at least one variable".into()));
        }
        let mut set = BTreeSet::new();
        let mut uf = UnionFind::new(d);
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at variable {a}")));
            }
            if a >= d || b >= d {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) out of range for {d} variables"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::InvalidInput(format!("duplicate edge {e:?}")));
            }
            if !uf.union(a, b) {
                return Err(Error::InvalidInput(format!("edge {e:?} closes a cycle")));
            }
        }
        if set.len() != d - 1 {
            return Err(Error::InvalidInput(format!(
                "{} edges cannot span {d} variables (need {})",
                set.len(),
                d - 1
            )));
        }
        Ok(Self { d, edges: set })
    }

    /// The star tree: variable 0 connected to every other variable.
    pub fn star(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput("star tree needs at least 2 variables".into()));
        }
        Self::new(d, (1..d).map(|k| (0, k)))
    }

    /// Number of variables.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Edges in sorted `(lo, hi)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Whether the tree contains the edge, in either orientation.
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

/// Symmetric matrix of pairwise mutual-information estimates between the
/// columns of a row-major dataset, with zeros on the diagonal. Entry `(i, j)`
/// applies `mi` to the pair histogram of columns `i` and `j`. Pairs are
/// evaluated in parallel.
pub fn pairwise_mi_matrix<F>(rows: &[Vec<u64>], mi: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&PairHistogram) -> Result<f64> + Sync,
{
    let d = match rows.first() {
        Some(r) => r.len(),
        None => return Err(Error::InvalidInput("dataset has no rows".into())),
    };
    if d < 2 {
        return Err(Error::InvalidInput("dataset needs at least 2 columns".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::InvalidInput(format!(
            "ragged dataset: expected {d} columns, found a row with {}",
            bad.len()
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let ph = PairHistogram::from_samples(
                &rows.iter().map(|r| (r[i], r[j])).collect::<Vec<_>>(),
            );
            mi(&ph)
        })
        .collect::<Result<_>>()?;
    let mut matrix = vec![vec![0.0; d]; d];
    for (&(i, j), &v) in pairs.iter().zip(values.iter()) {
        matrix[i][j] = v;
        matrix[j][i] = v;
    }
    Ok(matrix)
}

/// Maximum-weight spanning tree of a symmetric weight matrix, by Kruskal's
/// algorithm on edges sorted by descending weight. Ties break toward the
/// lexicographically smallest `(i, j)`, so the result is deterministic; with
/// all-equal weights it is the star rooted at variable 0.
pub fn mwst(weights: &[Vec<f64>]) -> Result<TreeModel> {
    let d = weights.len();
    if d == 0 {
        return Err(Error::InvalidInput("weight matrix is empty".into()));
    }
    if let Some(bad) = weights.iter().find(|r| r.len() != d) {
        return Err(Error::InvalidInput(format!(
            "weight matrix is not square: {d} rows but a row of length {}",
            bad.len()
        )));
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
    for i in 0..d {
        for j in i + 1..d {
            let w = weights[i][j];
            if !w.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "weight ({i}, {j}) is not finite: {w}"
                )));
            }
            edges.push((i, j, w));
        }
    }
    edges.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| (a.0, a.1).cmp(&(b.0, b.1))));
    let mut uf = UnionFind::new(d);
    let mut chosen = Vec::with_capacity(d.saturating_sub(1));
    for (i, j, _) in edges {
        if uf.union(i, j) {
            chosen.push((i, j));
            if chosen.len() == d - 1 {
                break;
            }
        }
    }
    TreeModel::new(d, chosen)
}

/// Learns the tree structure from data: [`pairwise_mi_matrix`] followed by
/// [`mwst`].
pub fn chow_liu<F>(rows: &[Vec<u64>], mi: F) -> Result<TreeModel>
where
    F: Fn(&PairHistogram) -> Result<f64> + Sync,
{
    mwst(&pairwise_mi_matrix(rows, mi)?)
}

/// Convenience adapter: turns an entropy estimator into the pairwise MI
/// function [`chow_liu`] expects.
pub fn mi_from_entropy<F>(entropy: F) -> impl Fn(&PairHistogram) -> Result<f64> + Sync
where
    F: Fn(&Histogram) -> Result<f64> + Sync,
{
    move |ph| estimate_mi(ph, &entropy)
}

/// Fraction of estimated edges absent from the true tree, normalized by
/// `d − 2` (the number of freely misplaceable edges once connectivity is
/// forced). Requires `d ≥ 3` and matching variable counts.
pub fn wrong_edges_ratio(estimated: &TreeModel, truth: &TreeModel) -> Result<f64> {
    check_same_d(estimated, truth)?;
    let d = truth.d();
    if d < 3 {
        return Err(Error::InvalidInput(
            "wrong-edge ratio needs at least 3 variables".into(),
        ));
    }
    let wrong = estimated
        .edges()
        .filter(|&(a, b)| !truth.contains(a, b))
        .count();
    Ok(wrong as f64 / (d - 2) as f64)
}

/// Symmetric-difference distance between edge sets, normalized by `2(d − 1)`
/// so it lies in `[0, 1]`.
pub fn edge_difference_ratio(estimated: &TreeModel, truth: &TreeModel) -> Result<f64> {
    check_same_d(estimated, truth)?;
    let d = truth.d();
    if d < 2 {
        return Ok(0.0);
    }
    let missing = truth
        .edges()
        .filter(|&(a, b)| !estimated.contains(a, b))
        .count();
    let spurious = estimated
        .edges()
        .filter(|&(a, b)| !truth.contains(a, b))
        .count();
    Ok((missing + spurious) as f64 / (2 * (d - 1)) as f64)
}

fn check_same_d(a: &TreeModel, b: &TreeModel) -> Result<()> {
    if a.d() != b.d() {
        return Err(Error::InvalidInput(format!(
            "trees disagree on variable count: {} vs {}",
            a.d(),
            b.d()
        )));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the components of `a` and `b`; false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::mle_entropy;

    #[test]
    fn tree_validation() {
        assert!(TreeModel::new(4, [(0, 1), (1, 2), (2, 3)]).is_ok());
        // Edge orientation is normalized.
        let t = TreeModel::new(3, [(2, 0), (1, 0)]).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
        assert!(t.contains(2, 0));
        assert!(!t.contains(1, 2));
        // Cycle, disconnection, self-loop, range, duplicates.
        assert!(TreeModel::new(3, [(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(TreeModel::new(4, [(0, 1), (2, 3)]).is_err());
        assert!(TreeModel::new(3, [(0, 0), (1, 2)]).is_err());
        assert!(TreeModel::new(3, [(0, 1), (1, 5)]).is_err());
        assert!(TreeModel::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(TreeModel::new(0, []).is_err());
        // A single variable is a (trivial) spanning tree.
        assert!(TreeModel::new(1, []).is_ok());
    }

    #[test]
    fn star_shape() {
        let t = TreeModel::star(5).unwrap();
        assert_eq!(t.d(), 5);
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(TreeModel::star(1).is_err());
    }

    #[test]
    fn mwst_picks_heaviest_acyclic_edges() {
        // Weights force the path 0-2, 2-1, 1-3.
        let w = vec![
            vec![0.0, 0.1, 0.9, 0.2],
            vec![0.1, 0.0, 0.8, 0.7],
            vec![0.9, 0.8, 0.0, 0.3],
            vec![0.2, 0.7, 0.3, 0.0],
        ];
        let t = mwst(&w).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2), (1, 3)]);
    }

    #[test]
    fn mwst_tie_break_is_lexicographic() {
        let d = 5;
        let w = vec![vec![1.0; d]; d];
        let t = mwst(&w).unwrap();
        assert_eq!(t, TreeModel::star(d).unwrap());
    }

    #[test]
    fn mwst_rejects_bad_matrices() {
        assert!(mwst(&[]).is_err());
        assert!(mwst(&[vec![0.0, 1.0]]).is_err());
        assert!(mwst(&[vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn pairwise_matrix_is_symmetric_with_zero_diagonal() {
        let rows: Vec<Vec<u64>> = (0..40)
            .map(|i| vec![i % 3, (i / 2) % 3, (i * 7 + 1) % 5])
            .collect();
        let m = pairwise_mi_matrix(&rows, mi_from_entropy(mle_entropy)).unwrap();
        assert_eq!(m.len(), 3);
        for i in 0..3 {
            assert_eq!(m[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
        assert!(pairwise_mi_matrix(&[], mi_from_entropy(mle_entropy)).is_err());
        assert!(pairwise_mi_matrix(&[vec![1u64]], mi_from_entropy(mle_entropy)).is_err());
        let ragged = vec![vec![0u64, 1], vec![0u64, 1, 2]];
        assert!(pairwise_mi_matrix(&ragged, mi_from_entropy(mle_entropy)).is_err());
    }

    #[test]
    fn chow_liu_recovers_a_chain() {
        // Column 0 drives column 1 drives column 2, with more noise on the
        // second link so the pair strengths are strictly ordered:
        // agreement 14/16 on (0,1), 12/16 on (1,2), 10/16 on (0,2).
        let mut rows = Vec::new();
        for a in 0..2u64 {
            for rep in 0..8 {
                let b = a ^ (rep == 0) as u64;
                let c = b ^ (rep % 4 == 1) as u64;
                rows.push(vec![a, b, c]);
            }
        }
        let t = chow_liu(&rows, mi_from_entropy(mle_entropy)).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_metrics() {
        let truth = TreeModel::star(5).unwrap();
        let same = TreeModel::star(5).unwrap();
        assert_eq!(wrong_edges_ratio(&same, &truth).unwrap(), 0.0);
        assert_eq!(edge_difference_ratio(&same, &truth).unwrap(), 0.0);
        // Star at 1 instead: shares only (0,1); three wrong edges.
        let other = TreeModel::new(5, [(1, 0), (1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(wrong_edges_ratio(&other, &truth).unwrap(), 1.0);
        assert_eq!(edge_difference_ratio(&other, &truth).unwrap(), 6.0 / 8.0);
        let small = TreeModel::new(2, [(0, 1)]).unwrap();
        assert!(wrong_edges_ratio(&small, &small).is_err());
        assert!(wrong_edges_ratio(&small, &truth).is_err());
    }
}
