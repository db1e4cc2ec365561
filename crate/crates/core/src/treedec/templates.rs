//! The template graphs `V(2n)` and windows of `R(2m+1)`, and brute-force isomorphism.

use serde::Serialize;

use crate::graph::Graph;
use crate::{Error, Result};

/// Shapes a part or torso is matched against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TemplateKind {
    Cycle { length: usize },
    /// `2n`-cycle with the `n` antipodal chords.
    V { two_n: usize },
    /// Double ray on `[-window, window]` with chords `{2i, 2i + span}`.
    RTruncated { span: usize, window: usize },
    Matching { edges: usize },
    Path { length: usize },
}

/// A template graph together with its kind.
#[derive(Clone, Debug)]
pub struct TemplateGraph {
    pub kind: TemplateKind,
    pub graph: Graph,
}

/// `V(2n)`: the `2n`-cycle plus its antipodal chords.
#[allow(non_snake_case)]
pub fn construct_V(two_n: usize) -> Result<TemplateGraph> {
    if two_n < 4 || !two_n.is_multiple_of(2) {
        return Err(Error::BadParameter(format!("V needs an even size of at least 4, got {two_n}")));
    }
    let n = two_n / 2;
    let mut g = cycle_graph(two_n);
    for i in 0..n {
        g.add_edge(i, i + n, 'v');
    }
    Ok(TemplateGraph { kind: TemplateKind::V { two_n }, graph: g })
}

/// `R(2m+1)` restricted to `[-window, window]`; vertex `k` of the graph is the integer `k - window`.
#[allow(non_snake_case)]
pub fn construct_R(m: usize, window: usize) -> Result<TemplateGraph> {
    if m < 1 || window < 2 * m + 2 {
        return Err(Error::BadParameter(format!(
            "R needs m >= 1 and window >= 2m + 2, got m = {m}, window = {window}"
        )));
    }
    Ok(r_window(2 * m + 1, window))
}

/// `R` window without the size precondition of [`construct_R`].
pub fn r_window(span: usize, window: usize) -> TemplateGraph {
    let len = 2 * window + 1;
    let mut g = Graph::new(len);
    for k in 0..len {
        g.names[k] = (k as i64 - window as i64).to_string();
    }
    for k in 0..len.saturating_sub(1) {
        g.add_edge(k, k + 1, '-');
    }
    for k in 0..len {
        let i = k as i64 - window as i64;
        if i.rem_euclid(2) == 0 && k + span < len {
            g.add_edge(k, k + span, 'v');
        }
    }
    TemplateGraph { kind: TemplateKind::RTruncated { span, window }, graph: g }
}

pub fn cycle_graph(len: usize) -> Graph {
    let mut g = Graph::new(len);
    for i in 0..len {
        g.add_edge(i, (i + 1) % len, '-');
    }
    g
}

/// Exact isomorphism test by backtracking along a BFS order of `g1`.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> bool {
    let n = g1.len();
    if n != g2.len() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let mut d1: Vec<usize> = (0..n).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return false;
    }
    if n == 0 {
        return true;
    }
    // BFS order of g1 with the parent of each vertex (None for component roots).
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g1.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    order.push(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g1, g2, &order, &parent, 0, &mut map, &mut used)
}

fn extend(
    g1: &Graph,
    g2: &Graph,
    order: &[usize],
    parent: &[Option<usize>],
    k: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    let candidates: Vec<usize> = match parent[v] {
        Some(p) => g2.neighbors(map[p]).to_vec(),
        None => (0..g2.len()).collect(),
    };
    for c in candidates {
        if used[c] || g2.degree(c) != g1.degree(v) {
            continue;
        }
        let consistent = g1.neighbors(v).iter().all(|&w| map[w] == usize::MAX || g2.has_edge(c, map[w]))
            && g2.neighbors(c).iter().filter(|&&x| used[x]).count()
                == g1.neighbors(v).iter().filter(|&&w| map[w] != usize::MAX).count();
        if !consistent {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if extend(g1, g2, order, parent, k + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[c] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j, '-');
            }
        }
        g
    }

    #[test]
    fn v4_is_k4_and_v6_is_k33() {
        assert!(isomorphic(&construct_V(4).unwrap().graph, &complete(4)));
        let v6 = construct_V(6).unwrap().graph;
        for i in 0..6 {
            for j in i + 1..6 {
                assert_eq!(v6.has_edge(i, j), (i + j) % 2 == 1, "{i} {j}");
            }
        }
        assert!(matches!(construct_V(5), Err(Error::BadParameter(_))));
    }

    #[test]
    fn r5_chords() {
        let r = construct_R(2, 10).unwrap().graph;
        // vertex k is integer k - 10; chord {0, 5} is {10, 15}.
        assert!(r.has_edge(10, 15));
        assert!(r.has_edge(8, 13));
        assert!(!r.has_edge(11, 16));
        assert!(r.degree(0) < 3 && r.degree(20) < 3);
        assert!(construct_R(2, 5).is_err());
    }

    #[test]
    fn cycles_are_not_paths() {
        let c = cycle_graph(6);
        let mut p = Graph::new(6);
        for i in 0..5 {
            p.add_edge(i, i + 1, '-');
        }
        assert!(!isomorphic(&c, &p));
        let mut shuffled = Graph::new(6);
        let perm = [3, 0, 5, 1, 4, 2];
        for (u, v) in c.edges() {
            shuffled.add_edge(perm[u], perm[v], '-');
        }
        assert!(isomorphic(&c, &shuffled));
    }
}
