//! Planarity by path addition, Kuratowski witnesses, and the torso criterion.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use crate::cayley::CayleyBall;
use crate::graph::Graph;
use crate::group::{RewriteSystem, Word};
use crate::treedec::{line_window_torso, part_structure, torso, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// Branch vertices and the internally disjoint paths joining them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    pub branch: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarityVerdict {
    pub planar: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<KuratowskiWitness>,
}

type Edge = (usize, usize);

fn key(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

/// Planarity verdict with a Kuratowski subdivision when the graph is not planar.
pub fn is_planar(g: &Graph) -> PlanarityVerdict {
    let edges = g.edges();
    if edges_planar(g.len(), &edges) {
        return PlanarityVerdict { planar: true, witness: None };
    }
    PlanarityVerdict { planar: false, witness: Some(kuratowski(g.len(), &edges)) }
}

/// Verdict only.
pub fn planar(g: &Graph) -> bool {
    edges_planar(g.len(), &g.edges())
}

fn edges_planar(n: usize, edges: &[Edge]) -> bool {
    biconnected_components(n, edges).iter().all(|c| block_planar(c))
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

/// Edge sets of the blocks, by an iterative Hopcroft–Tarjan traversal.
fn biconnected_components(n: usize, edges: &[Edge]) -> Vec<Vec<Edge>> {
    let adj = adjacency(n, edges);
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<Edge> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX || adj[root].is_empty() {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut dfs = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut i)) = dfs.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if disc[w] == usize::MAX {
                    stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    dfs.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            dfs.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    let mut block = Vec::new();
                    while let Some(e) = stack.pop() {
                        block.push(key(e.0, e.1));
                        if e == (parent, v) {
                            break;
                        }
                    }
                    out.push(block);
                }
            }
        }
    }
    out
}

/// Demoucron–Malgrange–Pertuiset on a single block.
fn block_planar(block: &[Edge]) -> bool {
    let mut verts: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    let n = verts.len();
    let m = block.len();
    if n < 5 || m < 9 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }
    let local = |v: usize| verts.binary_search(&v).unwrap();
    let edges: Vec<Edge> = block.iter().map(|&(u, v)| key(local(u), local(v))).collect();
    let adj = adjacency(n, &edges);

    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<Edge> = HashSet::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut vertex_faces: Vec<Vec<usize>> = vec![Vec::new(); n];

    let cycle = initial_cycle(&adj);
    for (i, &v) in cycle.iter().enumerate() {
        in_h[v] = true;
        h_edges.insert(key(v, cycle[(i + 1) % cycle.len()]));
        vertex_faces[v] = vec![0, 1];
    }
    faces.push(cycle.clone());
    faces.push(cycle.iter().rev().copied().collect());

    while h_edges.len() < m {
        let fragments = fragments(&adj, &edges, &in_h, &h_edges);
        let mut chosen: Option<(usize, usize)> = None;
        for (k, frag) in fragments.iter().enumerate() {
            let admissible = admissible_faces(&frag.attachments, &vertex_faces, &faces);
            match admissible.len() {
                0 => return false,
                1 => {
                    chosen = Some((k, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((k, admissible[0]));
                    }
                }
            }
        }
        let (k, f) = chosen.expect("some edge lies outside H");
        let path = fragment_path(&adj, &fragments[k], &in_h);
        for w in path.windows(2) {
            h_edges.insert(key(w[0], w[1]));
        }
        for &v in &path[1..path.len() - 1] {
            in_h[v] = true;
        }
        split_face(&mut faces, &mut vertex_faces, f, &path);
    }
    true
}

fn initial_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    let u = (0..adj.len()).find(|&v| !adj[v].is_empty()).unwrap();
    let v = adj[u][0];
    // Shortest v-u path avoiding the edge uv.
    let mut prev = vec![usize::MAX; adj.len()];
    prev[v] = v;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &y in &adj[x] {
            if prev[y] == usize::MAX && !(x == v && y == u) {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut cycle = vec![u];
    let mut x = u;
    while x != v {
        x = prev[x];
        cycle.push(x);
    }
    cycle
}

struct Fragment {
    /// Empty for a single chord between embedded vertices.
    interior: Vec<usize>,
    attachments: Vec<usize>,
    chord: Option<Edge>,
}

fn fragments(adj: &[Vec<usize>], edges: &[Edge], in_h: &[bool], h_edges: &HashSet<Edge>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &(u, v) in edges {
        if in_h[u] && in_h[v] && !h_edges.contains(&(u, v)) {
            out.push(Fragment { interior: Vec::new(), attachments: vec![u, v], chord: Some((u, v)) });
        }
    }
    let mut seen = vec![false; adj.len()];
    for s in 0..adj.len() {
        if in_h[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut interior = vec![s];
        let mut attachments = Vec::new();
        let mut head = 0;
        while head < interior.len() {
            let x = interior[head];
            head += 1;
            for &y in &adj[x] {
                if in_h[y] {
                    attachments.push(y);
                } else if !seen[y] {
                    seen[y] = true;
                    interior.push(y);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        interior.sort_unstable();
        out.push(Fragment { interior, attachments, chord: None });
    }
    out
}

fn admissible_faces(attachments: &[usize], vertex_faces: &[Vec<usize>], faces: &[Vec<usize>]) -> Vec<usize> {
    let pivot = *attachments.iter().min_by_key(|&&a| vertex_faces[a].len()).unwrap();
    vertex_faces[pivot]
        .iter()
        .copied()
        .filter(|&f| attachments.iter().all(|&a| vertex_faces[a].contains(&f)))
        .filter(|&f| !faces[f].is_empty())
        .collect()
}

/// Path through the fragment between its two smallest reachable attachments.
fn fragment_path(adj: &[Vec<usize>], frag: &Fragment, in_h: &[bool]) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let start = frag.attachments[0];
    let inside = |v: usize| frag.interior.binary_search(&v).is_ok();
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &y in &adj[start] {
        if inside(y) && !prev.contains_key(&y) {
            prev.insert(y, start);
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if in_h[y] && y != start {
                let mut path = vec![y, x];
                let mut z = x;
                while let Some(&p) = prev.get(&z) {
                    path.push(p);
                    if p == start {
                        break;
                    }
                    z = p;
                }
                path.reverse();
                return path;
            }
            if inside(y) && !prev.contains_key(&y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragments of a block have two attachments")
}

fn split_face(faces: &mut Vec<Vec<usize>>, vertex_faces: &mut [Vec<usize>], f: usize, path: &[usize]) {
    let face = std::mem::take(&mut faces[f]);
    let u = path[0];
    let w = *path.last().unwrap();
    let len = face.len();
    let i = face.iter().position(|&x| x == u).unwrap();
    let j = face.iter().position(|&x| x == w).unwrap();
    let arc = |from: usize, to: usize| -> Vec<usize> {
        let mut out = vec![face[from]];
        let mut k = from;
        while k != to {
            k = (k + 1) % len;
            out.push(face[k]);
        }
        out
    };
    let inner = &path[1..path.len() - 1];
    let mut first = arc(i, j);
    first.extend(inner.iter().rev());
    let mut second = arc(j, i);
    second.extend(inner.iter());

    for &v in &face {
        vertex_faces[v].retain(|&x| x != f);
    }
    let g = faces.len();
    for &v in &first {
        vertex_faces[v].push(f);
    }
    for &v in &second {
        vertex_faces[v].push(g);
    }
    faces[f] = first;
    faces.push(second);
}

/// Deletes edges while the rest stays non-planar; what remains is a Kuratowski subdivision.
fn kuratowski(n: usize, edges: &[Edge]) -> KuratowskiWitness {
    let mut kept: Vec<Edge> = biconnected_components(n, edges)
        .into_iter()
        .find(|b| !block_planar(b))
        .expect("a non-planar graph has a non-planar block");
    kept.sort_unstable();
    let mut i = 0;
    let mut chunk = (kept.len() / 8).max(1);
    while i < kept.len() {
        let end = (i + chunk).min(kept.len());
        let rest: Vec<Edge> = kept[..i].iter().chain(&kept[end..]).copied().collect();
        if !edges_planar(n, &rest) {
            kept = rest;
            chunk *= 2;
        } else if chunk > 1 {
            chunk /= 2;
        } else {
            i += 1;
        }
    }
    witness_from_subdivision(n, &kept)
}

fn witness_from_subdivision(n: usize, edges: &[Edge]) -> KuratowskiWitness {
    let adj = adjacency(n, edges);
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    let kind = if branch.len() == 5 { KuratowskiKind::K5 } else { KuratowskiKind::K33 };
    let mut paths = Vec::new();
    for &b in &branch {
        for &first in &adj[b] {
            let mut path = vec![b, first];
            let (mut prev, mut cur) = (b, first);
            while adj[cur].len() == 2 {
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                path.push(next);
                prev = cur;
                cur = next;
            }
            if b < cur {
                paths.push(path);
            }
        }
    }
    paths.sort();
    KuratowskiWitness { kind, branch, paths }
}

/// Checks that the witness lives in `g` and contracts to `K₅` or `K₃,₃`.
pub fn validate_witness(g: &Graph, w: &KuratowskiWitness) -> bool {
    let branch: HashSet<usize> = w.branch.iter().copied().collect();
    if branch.len() != w.branch.len() {
        return false;
    }
    let mut interior_seen = HashSet::new();
    let mut pairs = HashSet::new();
    for p in &w.paths {
        if p.len() < 2 || !p.windows(2).all(|e| g.has_edge(e[0], e[1])) {
            return false;
        }
        let (s, t) = (p[0], *p.last().unwrap());
        if !branch.contains(&s) || !branch.contains(&t) || s == t || !pairs.insert(key(s, t)) {
            return false;
        }
        for &v in &p[1..p.len() - 1] {
            if branch.contains(&v) || !interior_seen.insert(v) {
                return false;
            }
        }
    }
    match w.kind {
        KuratowskiKind::K5 => w.branch.len() == 5 && pairs.len() == 10,
        KuratowskiKind::K33 => {
            if w.branch.len() != 6 || pairs.len() != 9 {
                return false;
            }
            // 2-colour the contracted graph and check it is complete bipartite.
            let mut colour: BTreeMap<usize, bool> = BTreeMap::from([(w.branch[0], false)]);
            for _ in 0..6 {
                for &(s, t) in &pairs {
                    match (colour.get(&s).copied(), colour.get(&t).copied()) {
                        (Some(c), None) => {
                            colour.insert(t, !c);
                        }
                        (None, Some(c)) => {
                            colour.insert(s, !c);
                        }
                        _ => {}
                    }
                }
            }
            colour.len() == 6
                && colour.values().filter(|&&c| c).count() == 3
                && pairs.iter().all(|(s, t)| colour[s] != colour[t])
        }
    }
}

/// Torso verdicts of one class of parts.
#[derive(Clone, Debug, Serialize)]
pub struct TorsoClass {
    pub class: String,
    pub parts: usize,
    pub planar: bool,
    pub torso_vertices: usize,
    pub torso_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<KuratowskiWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsoPlanarityReport {
    pub classes: Vec<TorsoClass>,
    /// Every torso planar.
    pub graph_planar: bool,
    pub interior_planar: bool,
    /// Non-planar interior implies a non-planar torso.
    pub consistent: bool,
}

/// Torso planarity grouped by the shape of the part, plus a direct test of the interior ball.
pub fn torso_planarity_report(td: &TreeDecomposition, ball: &CayleyBall, margin: usize) -> TorsoPlanarityReport {
    let g = &ball.closure;
    let mut classes: BTreeMap<String, TorsoClass> = BTreeMap::new();
    for t in td.non_partial() {
        let (Ok(s), Ok(tor)) = (part_structure(td, g, t), torso(td, g, t)) else {
            continue;
        };
        let class = format!("{:?} {}", s.shape, s.label_period());
        let entry = classes.entry(class.clone()).or_insert_with(|| TorsoClass {
            class,
            parts: 0,
            planar: true,
            torso_vertices: tor.len(),
            torso_edges: tor.edge_count(),
            witness: None,
        });
        entry.parts += 1;
        if entry.planar {
            let v = is_planar(&tor);
            if !v.planar {
                entry.planar = false;
                entry.torso_vertices = tor.len();
                entry.torso_edges = tor.edge_count();
                entry.witness = v.witness;
            }
        }
    }
    let classes: Vec<TorsoClass> = classes.into_values().collect();
    let graph_planar = classes.iter().all(|c| c.planar);
    let interior: Vec<usize> = (0..ball.len()).filter(|&v| ball.depth(v) + margin <= radius_of(ball)).collect();
    let interior_planar = planar(&ball.graph.induced(&interior));
    TorsoPlanarityReport { classes, graph_planar, interior_planar, consistent: interior_planar || !graph_planar }
}

fn radius_of(ball: &CayleyBall) -> usize {
    (0..ball.len()).map(|v| ball.depth(v)).max().unwrap_or(0)
}

/// Planarity of the line torso at windows `L`, `2L` and `3L`.
#[derive(Clone, Debug, Serialize)]
pub struct WindowVerdicts {
    pub windows: Vec<usize>,
    pub planar: Vec<bool>,
    pub stable: bool,
}

pub fn window_verdicts(rs: &RewriteSystem, offset: &Word, base: usize) -> WindowVerdicts {
    let windows = vec![base, 2 * base, 3 * base];
    let planar: Vec<bool> = windows.iter().map(|&w| planar(&line_window_torso(rs, offset, w))).collect();
    let stable = planar.windows(2).all(|p| p[0] == p[1]);
    WindowVerdicts { windows, planar, stable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedec::templates::{construct_R, construct_V};

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j, '-');
            }
        }
        g
    }

    fn grid(w: usize, h: usize) -> Graph {
        let mut g = Graph::new(w * h);
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    g.add_edge(y * w + x, y * w + x + 1, '-');
                }
                if y + 1 < h {
                    g.add_edge(y * w + x, (y + 1) * w + x, '-');
                }
            }
        }
        g
    }

    #[test]
    fn small_complete_graphs() {
        assert!(is_planar(&complete(4)).planar);
        let k5 = is_planar(&complete(5));
        assert!(!k5.planar);
        let w = k5.witness.unwrap();
        assert_eq!(w.kind, KuratowskiKind::K5);
        assert!(validate_witness(&complete(5), &w));
    }

    #[test]
    fn templates() {
        for (two_n, expect) in [(4, true), (6, false), (8, false), (10, false)] {
            let v = construct_V(two_n).unwrap().graph;
            let verdict = is_planar(&v);
            assert_eq!(verdict.planar, expect, "V({two_n})");
            if let Some(w) = verdict.witness {
                assert!(validate_witness(&v, &w));
            }
        }
        for m in 1..=3 {
            assert!(planar(&construct_R(m, 24).unwrap().graph), "R({})", 2 * m + 1);
        }
    }

    #[test]
    fn grids_and_subdivisions() {
        assert!(planar(&grid(12, 9)));
        // Subdivided K3,3 hanging off a grid.
        let mut g = grid(5, 5);
        let base = g.len();
        let mut extra = Graph::new(base + 6 + 9);
        for (u, v) in g.edges() {
            extra.add_edge(u, v, '-');
        }
        let mut mid = base + 6;
        for i in 0..3 {
            for j in 3..6 {
                extra.add_edge(base + i, mid, '-');
                extra.add_edge(mid, base + j, '-');
                mid += 1;
            }
        }
        extra.add_edge(0, base, '-');
        g = extra;
        let v = is_planar(&g);
        assert!(!v.planar);
        let w = v.witness.unwrap();
        assert_eq!(w.kind, KuratowskiKind::K33);
        assert_eq!(w.paths.iter().map(|p| p.len()).sum::<usize>(), 27);
        assert!(validate_witness(&g, &w));
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5, '-');
            g.add_edge(i, i + 5, '-');
            g.add_edge(5 + i, 5 + (i + 2) % 5, '-');
        }
        let v = is_planar(&g);
        assert!(!v.planar);
        assert!(validate_witness(&g, &v.witness.unwrap()));
    }
}
