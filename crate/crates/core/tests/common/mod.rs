//! Helpers shared by the integration test targets.
#![allow(dead_code)]

pub fn assert_close(got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol,
        "got {got}, want {want} (tol {tol})"
    );
}

pub fn assert_rel(got: f64, want: f64, rel: f64) {
    assert!(
        (got - want).abs() <= rel * want.abs(),
        "got {got}, want {want} (relative tol {rel})"
    );
}

/// Every labeled tree on `d ≥ 3` nodes, decoded from the `d^(d−2)` Prüfer
/// sequences. Each tree is a list of `d − 1` edges with `lo < hi`.
pub fn all_labeled_trees(d: usize) -> Vec<Vec<(usize, usize)>> {
    assert!((3..=8).contains(&d), "exhaustive enumeration is for small d");
    let len = d - 2;
    let total = (d as u64).pow(len as u32);
    let mut trees = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut rest = code;
        for _ in 0..len {
            seq.push((rest % d as u64) as usize);
            rest /= d as u64;
        }
        trees.push(prufer_decode(&seq, d));
    }
    trees
}

fn prufer_decode(seq: &[usize], d: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1u32; d];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(d - 1);
    for &v in seq {
        let leaf = (0..d).find(|&i| degree[i] == 1).expect("a leaf always remains");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..d).filter(|&i| degree[i] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

#[test]
fn tree_enumeration_has_cayley_counts() {
    assert_eq!(all_labeled_trees(3).len(), 3);
    assert_eq!(all_labeled_trees(4).len(), 16);
    assert_eq!(all_labeled_trees(5).len(), 125);
    // Every decoded tree must have d − 1 distinct in-range edges.
    for t in all_labeled_trees(5) {
        assert_eq!(t.len(), 4);
        for w in &t {
            assert!(w.0 < w.1 && w.1 < 5);
        }
        for (i, e) in t.iter().enumerate() {
            assert!(!t[..i].contains(e));
        }
    }
}
