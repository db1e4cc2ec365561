//! A small undirected simple graph with per-vertex names, depths and edge labels.
//!
//! Cayley balls convert into this form; hand-built fixtures use it directly.

use std::collections::{BTreeSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub names: Vec<String>,
    /// Distance-to-boundary annotation; fixtures typically use a constant.
    pub depth: Vec<usize>,
    adj: Vec<Vec<usize>>,
    /// Edge label per adjacency entry, parallel to `adj`.
    labels: Vec<Vec<char>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            names: (0..n).map(|i| i.to_string()).collect(),
            depth: vec![usize::MAX / 4; n],
            adj: vec![Vec::new(); n],
            labels: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, '-');
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Adds `{u, v}` unless it already exists or is a loop.
    pub fn add_edge(&mut self, u: usize, v: usize, label: char) -> bool {
        if u == v || self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].push(v);
        self.labels[u].push(label);
        self.adj[v].push(u);
        self.labels[v].push(label);
        true
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn labeled_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, char)> + '_ {
        self.adj[v].iter().copied().zip(self.labels[v].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<char> {
        self.adj[u].iter().position(|&w| w == v).map(|i| self.labels[u][i])
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (0..self.len())
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Component id per vertex of `G - removed` (removed vertices get `usize::MAX`),
    /// plus the number of components.
    pub fn components_without(&self, removed: &[usize]) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut blocked = vec![false; n];
        for &r in removed {
            blocked[r] = true;
        }
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if blocked[s] || comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !blocked[w] && comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.components_without(&[]).1 == 1
    }

    /// Subgraph induced by `vertices`, in the given order; labels and names are kept.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = std::collections::HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v, i);
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            g.names[i] = self.names[v].clone();
            g.depth[i] = self.depth[v];
            for (w, l) in self.labeled_neighbors(v) {
                if let Some(&j) = index.get(&w) {
                    if i < j {
                        g.add_edge(i, j, l);
                    }
                }
            }
        }
        g
    }

    /// BFS distances from `s` (unreachable = `usize::MAX`).
    pub fn bfs(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Articulation points, by iterative DFS lowpoints.
    pub fn articulation_points(&self) -> BTreeSet<usize> {
        self.articulation_points_without(usize::MAX)
    }

    /// Articulation points of `G - skip` (`skip = usize::MAX` for none).
    pub fn articulation_points_without(&self, skip: usize) -> BTreeSet<usize> {
        let n = self.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = BTreeSet::new();
        let mut timer = 0;
        for root in 0..n {
            if root == skip || disc[root] != usize::MAX {
                continue;
            }
            let mut root_children = 0;
            // (vertex, parent, next neighbor index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, parent, ref mut i)) = stack.last_mut() {
                if *i < self.adj[u].len() {
                    let w = self.adj[u][*i];
                    *i += 1;
                    if w == skip || w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if p != root && low[u] >= disc[p] {
                            out.insert(p);
                        }
                    }
                }
            }
            if root_children > 1 {
                out.insert(root);
            }
        }
        out
    }

    /// For every `y != skip`, the number of components of `G - {skip, y}` holding a marked vertex.
    ///
    /// One lowpoint DFS of `G - skip`; entry `skip` is the count for `G - skip` itself.
    pub fn marked_components_without(&self, skip: usize, marked: &[bool]) -> Vec<usize> {
        let n = self.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut sub = vec![0usize; n];
        let mut tree = vec![usize::MAX; n];
        let mut sep_count = vec![0usize; n];
        let mut sep_sum = vec![0usize; n];
        let mut tree_total: Vec<usize> = Vec::new();
        let mut timer = 0;
        for root in 0..n {
            if root == skip || disc[root] != usize::MAX {
                continue;
            }
            let t = tree_total.len();
            tree_total.push(0);
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, parent, ref mut i)) = stack.last_mut() {
                if *i < self.adj[u].len() {
                    let w = self.adj[u][*i];
                    *i += 1;
                    if w == skip || w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, u, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    tree[u] = t;
                    sub[u] += marked[u] as usize;
                    tree_total[t] += marked[u] as usize;
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        sub[p] += sub[u];
                        if low[u] >= disc[p] {
                            sep_count[p] += (sub[u] > 0) as usize;
                            sep_sum[p] += sub[u];
                        }
                    }
                }
            }
        }
        let marked_trees = tree_total.iter().filter(|&&d| d > 0).count();
        let mut out = vec![0usize; n];
        for y in 0..n {
            if y == skip {
                out[y] = marked_trees;
                continue;
            }
            let total = tree_total[tree[y]];
            let rest = total - marked[y] as usize - sep_sum[y];
            out[y] = marked_trees - (total > 0) as usize + sep_count[y] + (rest > 0) as usize;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_and_cut_vertices() {
        // Two triangles sharing vertex 2.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        assert_eq!(g.articulation_points().into_iter().collect::<Vec<_>>(), vec![2]);
        let (comp, k) = g.components_without(&[2]);
        assert_eq!(k, 2);
        assert_ne!(comp[0], comp[3]);
        assert!(g.articulation_points_without(0).contains(&2));
    }

    #[test]
    fn marked_component_counts_match_direct_search() {
        // Two 4-cycles joined by the path 3-4-5 plus a pendant 9 on vertex 8.
        let g = Graph::from_edges(
            10,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 5), (8, 9)],
        );
        let marked: Vec<bool> = (0..10).map(|v| v != 9).collect();
        for skip in 0..10 {
            let counts = g.marked_components_without(skip, &marked);
            for y in 0..10 {
                let removed: Vec<usize> = if y == skip { vec![skip] } else { vec![skip, y] };
                let (comp, k) = g.components_without(&removed);
                let direct = (0..k)
                    .filter(|&c| (0..10).any(|v| comp[v] == c && marked[v]))
                    .count();
                assert_eq!(counts[y], direct, "skip {skip} y {y}");
            }
        }
    }

    #[test]
    fn cycle_has_no_cut_vertex() {
        let mut g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(g.articulation_points().is_empty());
        assert_eq!(g.articulation_points_without(0).into_iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(g.edge_count(), 4);
        assert!(!g.add_edge(0, 0, '-'));
    }
}
