//! Unit-capacity vertex max-flow (Menger) on split vertices.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::{Error, Result};

struct Arc {
    to: usize,
    cap: i32,
}

/// Residual network where vertex `v` becomes `2v -> 2v+1` with capacity 1.
struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: i32) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut pred = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if u == t {
                break;
            }
            for &a in &self.out[u] {
                let v = self.arcs[a].to;
                if self.arcs[a].cap > 0 && !seen[v] {
                    seen[v] = true;
                    pred[v] = a;
                    q.push_back(v);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let a = pred[v];
            self.arcs[a].cap -= 1;
            self.arcs[a ^ 1].cap += 1;
            v = self.arcs[a ^ 1].to;
        }
        true
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.out[u] {
                let v = self.arcs[a].to;
                if self.arcs[a].cap > 0 && !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        seen
    }
}

/// Minimum number of vertices (other than `u`, `v`) meeting every `u`–`v` path, with a witness cut.
///
/// A direct edge `uv` is ignored, so adjacent pairs get the cut of `G - uv`.
pub fn min_vertex_cut(g: &Graph, u: usize, v: usize) -> Result<(usize, Vec<usize>)> {
    if u == v {
        return Err(Error::SameVertex);
    }
    let big = g.len() as i32 + 1;
    let mut net = Network::new(2 * g.len());
    for w in 0..g.len() {
        let cap = if w == u || w == v { big } else { 1 };
        net.add(2 * w, 2 * w + 1, cap);
        for &x in g.neighbors(w) {
            if (w == u && x == v) || (w == v && x == u) {
                continue;
            }
            net.add(2 * w + 1, 2 * x, big);
        }
    }
    let (s, t) = (2 * u + 1, 2 * v);
    let mut flow = 0;
    while net.augment(s, t) {
        flow += 1;
    }
    let seen = net.reachable(s);
    let cut = (0..g.len()).filter(|&w| seen[2 * w] && !seen[2 * w + 1]).collect();
    Ok((flow, cut))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_bipartite() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let (k, cut) = min_vertex_cut(&c4, 0, 2).unwrap();
        assert_eq!(k, 2);
        assert_eq!(cut, vec![1, 3]);
        let mut e = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                e.push((i, j));
            }
        }
        let k33 = Graph::from_edges(6, &e);
        assert_eq!(min_vertex_cut(&k33, 0, 1).unwrap().0, 3);
        assert!(matches!(min_vertex_cut(&k33, 2, 2), Err(Error::SameVertex)));
    }
}
