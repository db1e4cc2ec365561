//! Finite balls of the Cayley graph, their depth annotation and export formats.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::group::{
    symbol_char, Family, FamilySpec, RewriteSystem, Word, SYM_A, SYM_A_INV, SYM_B,
    SYM_C,
};
use crate::{Error, Result};

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

const NONE: u32 = u32::MAX;

/// One labeled edge. For directed `a`-edges `v = u·a`; otherwise `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallEdge {
    pub u: usize,
    pub v: usize,
    pub label: char,
}

/// The ball of radius `radius` around the identity.
///
/// Vertices are named by their shortlex-least words and indexed in shortlex order of
/// those names, so index 0 is the identity. `words` holds the normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyBall {
    pub spec: FamilySpec,
    pub radius: usize,
    pub words: Vec<Word>,
    /// BFS distance from the identity.
    pub dist: Vec<usize>,
    pub edges: Vec<BallEdge>,
    pub graph: Graph,
    /// Vertices outside the radius that lie on a relator cycle through a non-boundary vertex.
    pub halo: Vec<Word>,
    /// The ball together with the halo; ball vertices keep their indices, halo vertices follow
    /// with depth 0. Separation analysis runs on this graph, so that long relator cycles
    /// through the interior are not cut open by the boundary.
    pub closure: Graph,
    index: HashMap<Word, usize>,
    halo_index: HashMap<Word, usize>,
    /// Right multiplication table indexed by symbol (`a, A, b, c`).
    step: Vec<[u32; 4]>,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn depth(&self, v: usize) -> usize {
        self.radius - self.dist[v]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.closure.names[v]
    }

    /// Normal form of a closure vertex.
    pub fn word(&self, v: usize) -> &Word {
        if v < self.words.len() {
            &self.words[v]
        } else {
            &self.halo[v - self.words.len()]
        }
    }

    /// Index of a ball or halo vertex.
    pub fn closure_index(&self, w: &Word) -> Option<usize> {
        self.index.get(w).or_else(|| self.halo_index.get(w)).copied()
    }

    pub fn in_ball(&self, v: usize) -> bool {
        v < self.words.len()
    }

    /// Neighbor `v·s` if it lies in the ball.
    pub fn step(&self, v: usize, s: u8) -> Option<usize> {
        let t = self.step[v][s as usize];
        (t != NONE).then_some(t as usize)
    }

    /// Whether the `a`-edges carry a direction.
    pub fn a_directed(&self) -> bool {
        !self.spec.family.a_is_involution()
    }

    /// `g·v` as a ball vertex, if it lies in the ball.
    pub fn translate(&self, rs: &RewriteSystem, g: &Word, v: usize) -> Option<usize> {
        self.index_of(&rs.multiply(g, &self.words[v]))
    }

    pub fn growth(&self) -> Vec<usize> {
        let mut layers = vec![0; self.radius + 1];
        for &d in &self.dist {
            layers[d] += 1;
        }
        layers
    }

    fn from_parts(
        spec: FamilySpec,
        radius: usize,
        words: Vec<Word>,
        dist: Vec<usize>,
        edges: Vec<BallEdge>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let index: HashMap<Word, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        if index.len() != words.len() {
            return Err(Error::Parse("duplicate vertex id".into()));
        }
        let mut graph = Graph::new(words.len());
        let mut step = vec![[NONE; 4]; words.len()];
        graph.names = names.unwrap_or_else(|| words.iter().map(|w| w.to_string()).collect());
        for (i, w) in words.iter().enumerate() {
            graph.depth[i] = radius
                .checked_sub(dist[i])
                .ok_or_else(|| Error::Parse(format!("vertex {w} lies outside the radius")))?;
        }
        for e in &edges {
            if e.u >= words.len() || e.v >= words.len() {
                return Err(Error::Parse("edge endpoint out of range".into()));
            }
            let s = match e.label {
                'a' => SYM_A,
                'b' => SYM_B,
                'c' => SYM_C,
                other => return Err(Error::Parse(format!("unknown edge label {other:?}"))),
            };
            if !graph.add_edge(e.u, e.v, e.label) {
                return Err(Error::Parse(format!(
                    "duplicate or looped edge {}-{}",
                    words[e.u], words[e.v]
                )));
            }
            if s == SYM_A && !spec.family.a_is_involution() {
                step[e.u][SYM_A as usize] = e.v as u32;
                step[e.v][SYM_A_INV as usize] = e.u as u32;
            } else {
                step[e.u][s as usize] = e.v as u32;
                step[e.v][s as usize] = e.u as u32;
                if s == SYM_A {
                    step[e.u][SYM_A_INV as usize] = e.v as u32;
                    step[e.v][SYM_A_INV as usize] = e.u as u32;
                }
            }
        }
        let closure = graph.clone();
        Ok(CayleyBall {
            spec,
            radius,
            words,
            dist,
            edges,
            graph,
            halo: Vec::new(),
            closure,
            index,
            halo_index: HashMap::new(),
            step,
        })
    }

    /// Adds every relator cycle through a vertex of distance below the radius to `closure`.
    fn close_relators(&mut self, rs: &RewriteSystem) {
        let spec = self.spec;
        let mut rotations: Vec<Vec<u8>> = Vec::new();
        for rel in spec.relators() {
            if rel.len() <= 2 {
                continue;
            }
            for w in [rel.clone(), spec.invert(&rel)] {
                for k in 0..w.len() {
                    let mut r = w.0[k..].to_vec();
                    r.extend_from_slice(&w.0[..k]);
                    if !rotations.contains(&r) {
                        rotations.push(r);
                    }
                }
            }
        }
        let n = self.words.len();
        let mut halo_index: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut halo_step: HashMap<(usize, u8), usize> = HashMap::new();
        let closure = &self.graph;
        let mut extra_names = Vec::new();
        let mut extra_edges: Vec<(usize, usize, char)> = Vec::new();
        for g in 0..n {
            if self.dist[g] >= self.radius {
                continue;
            }
            for r in &rotations {
                let mut cur = g;
                for &s in r {
                    let next = if cur < n && self.step[cur][s as usize] != NONE {
                        self.step[cur][s as usize] as usize
                    } else if let Some(&t) = halo_step.get(&(cur, s)) {
                        t
                    } else {
                        let mut w = if cur < n {
                            self.words[cur].0.clone()
                        } else {
                            self.halo[cur - n].0.clone()
                        };
                        w.push(s);
                        let w = rs.nf_slice(&w);
                        let t = match self.index.get(&Word(w.clone())) {
                            Some(&t) => t,
                            None => *halo_index.entry(w.clone()).or_insert_with(|| {
                                extra_names.push(Word(w.clone()).to_string());
                                self.halo.push(Word(w));
                                n + self.halo.len() - 1
                            }),
                        };
                        halo_step.insert((cur, s), t);
                        halo_step.insert((t, spec.inverse_symbol(s)), cur);
                        if cur >= n || t >= n {
                            extra_edges.push((cur, t, symbol_char(if s == SYM_A_INV { SYM_A } else { s })));
                        }
                        t
                    };
                    cur = next;
                }
            }
        }
        let mut grown = Graph::new(n + self.halo.len());
        for v in 0..n {
            grown.names[v] = closure.names[v].clone();
            grown.depth[v] = closure.depth[v];
            for (w, l) in closure.labeled_neighbors(v) {
                if v < w {
                    grown.add_edge(v, w, l);
                }
            }
        }
        for (i, name) in extra_names.into_iter().enumerate() {
            grown.names[n + i] = name;
            grown.depth[n + i] = 0;
        }
        for (u, v, l) in extra_edges {
            grown.add_edge(u, v, l);
        }
        self.halo_index = self.halo.iter().enumerate().map(|(i, w)| (w.clone(), n + i)).collect();
        self.closure = grown;
    }
}

/// Builds the ball of the given radius with the default vertex cap.
pub fn build_ball(rs: &RewriteSystem, radius: usize) -> Result<CayleyBall> {
    build_ball_capped(rs, radius, DEFAULT_VERTEX_CAP)
}

pub fn build_ball_capped(rs: &RewriteSystem, radius: usize, cap: usize) -> Result<CayleyBall> {
    let spec = *rs.spec();
    let alphabet = spec.alphabet();
    let mut found: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    // Breadth-first in generator order, so every vertex is first reached along its
    // shortlex-least word; discovery order is shortlex order of those words.
    let mut geodesic: Vec<Vec<u8>> = vec![Vec::new()];
    let mut dist = vec![0usize];
    found.insert(Vec::new(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &s in &alphabet {
            let mut w = words[u].clone();
            w.push(s);
            let w = rs.nf_slice(&w);
            if !found.contains_key(&w) {
                if words.len() >= cap {
                    return Err(Error::BallTooLarge(cap));
                }
                found.insert(w.clone(), words.len());
                words.push(w);
                let mut g = geodesic[u].clone();
                g.push(s);
                geodesic.push(g);
                dist.push(dist[u] + 1);
                queue.push_back(words.len() - 1);
            }
        }
    }
    let sorted_words: Vec<Word> = words.into_iter().map(Word).collect();
    let names: Vec<String> = geodesic.into_iter().map(|g| Word(g).to_string()).collect();
    let sorted_dist = dist;
    let lookup: HashMap<&[u8], usize> =
        sorted_words.iter().enumerate().map(|(i, w)| (w.symbols(), i)).collect();
    let directed_a = !spec.family.a_is_involution();
    let mut edges = Vec::new();
    for (u, w) in sorted_words.iter().enumerate() {
        for s in spec.generators() {
            let mut x = w.0.clone();
            x.push(s);
            let x = rs.nf_slice(&x);
            let Some(&v) = lookup.get(x.as_slice()) else { continue };
            if u == v {
                return Err(Error::InvalidParameters(format!(
                    "generator {} acts trivially on {w}",
                    symbol_char(s)
                )));
            }
            let directed = s == SYM_A && directed_a;
            if directed || u < v {
                edges.push(BallEdge { u, v, label: symbol_char(s) });
            }
        }
    }
    edges.sort_by_key(|e| (e.u, e.v, e.label));
    let mut ball = CayleyBall::from_parts(spec, radius, sorted_words, sorted_dist, edges, Some(names))?;
    ball.close_relators(rs);
    Ok(ball)
}

/// Sizes of the BFS spheres of radius `0..=r`.
pub fn growth_sequence(rs: &RewriteSystem, r: usize) -> Result<Vec<usize>> {
    Ok(build_ball(rs, r)?.growth())
}

/// Label-aware BFS code of the radius-`k` ball around `root`.
///
/// Two rooted labeled balls are label-preservingly isomorphic iff their codes agree,
/// because every vertex has at most one neighbor per symbol.
pub fn labeled_ball_code(ball: &CayleyBall, root: usize, k: usize) -> Vec<(usize, u8, usize)> {
    let mut local: HashMap<usize, usize> = HashMap::from([(root, 0)]);
    let mut layer = vec![0usize; 1];
    let mut order = vec![root];
    let mut code = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        let lu = local[&u];
        head += 1;
        for s in [SYM_A, SYM_A_INV, SYM_B, SYM_C] {
            let Some(v) = ball.step(u, s) else { continue };
            if !ball.a_directed() && s == SYM_A_INV {
                continue;
            }
            let lv = match local.get(&v) {
                Some(&lv) => lv,
                None => {
                    if layer[lu] == k {
                        continue;
                    }
                    let lv = order.len();
                    local.insert(v, lv);
                    layer.push(layer[lu] + 1);
                    order.push(v);
                    lv
                }
            };
            if layer[lv] <= k {
                code.push((lu, s, lv));
            }
        }
    }
    code
}

/// Export formats of a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    GraphMl,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphMl),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: String,
    depth: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    u: String,
    v: String,
    label: char,
}

#[derive(Serialize, Deserialize)]
struct JsonMeta {
    family: Family,
    n: u32,
    #[serde(default)]
    m: Option<u32>,
    radius: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonBall {
    vertices: Vec<JsonVertex>,
    edges: Vec<JsonEdge>,
    meta: JsonMeta,
}

pub fn export(ball: &CayleyBall, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Dot => export_dot(ball).into_bytes(),
        ExportFormat::GraphMl => export_graphml(ball).into_bytes(),
        ExportFormat::Json => export_json(ball).into_bytes(),
    }
}

pub fn export_json(ball: &CayleyBall) -> String {
    let doc = JsonBall {
        vertices: (0..ball.len())
            .map(|v| JsonVertex { id: ball.name(v).to_string(), depth: ball.depth(v) })
            .collect(),
        edges: ball
            .edges
            .iter()
            .map(|e| JsonEdge {
                u: ball.name(e.u).to_string(),
                v: ball.name(e.v).to_string(),
                label: e.label,
            })
            .collect(),
        meta: JsonMeta {
            family: ball.spec.family,
            n: ball.spec.n,
            m: ball.spec.m,
            radius: ball.radius,
        },
    };
    serde_json::to_string_pretty(&doc).expect("ball serializes")
}

/// Parses the JSON export back into a ball. Without a rewrite system the vertex names serve as
/// the words.
pub fn parse_json(text: &str) -> Result<CayleyBall> {
    let doc: JsonBall = serde_json::from_str(text)?;
    let spec = FamilySpec::new(doc.meta.family, doc.meta.n, doc.meta.m)?;
    let radius = doc.meta.radius;
    let mut words = Vec::with_capacity(doc.vertices.len());
    let mut dist = Vec::with_capacity(doc.vertices.len());
    for v in &doc.vertices {
        words.push(Word::parse(&v.id)?);
        dist.push(radius.checked_sub(v.depth).ok_or_else(|| {
            Error::Parse(format!("vertex {} has depth above the radius", v.id))
        })?);
    }
    let ids: HashMap<&str, usize> =
        doc.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let find = |id: &str| {
        ids.get(id).copied().ok_or_else(|| Error::Parse(format!("edge endpoint {id:?} is not a vertex")))
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        edges.push(BallEdge { u: find(&e.u)?, v: find(&e.v)?, label: e.label });
    }
    CayleyBall::from_parts(spec, radius, words, dist, edges, None)
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn export_dot(ball: &CayleyBall) -> String {
    let mut out = String::new();
    let title = ball.spec.config_string().replace(' ', "_").replace('=', "");
    let _ = writeln!(out, "digraph \"{title}_r{}\" {{", ball.radius);
    for v in 0..ball.len() {
        let _ = writeln!(out, "  \"{}\" [depth={}];", ball.name(v), ball.depth(v));
    }
    for e in &ball.edges {
        let dir = if e.label == 'a' && ball.a_directed() { "" } else { ", dir=none" };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"{dir}];",
            ball.name(e.u),
            ball.name(e.v),
            e.label
        );
    }
    out.push_str("}\n");
    out
}

pub fn export_graphml(ball: &CayleyBall) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    out.push_str("  <key id=\"depth\" for=\"node\" attr.name=\"depth\" attr.type=\"int\"/>\n");
    out.push_str("  <key id=\"label\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n");
    let _ = writeln!(out, "  <graph id=\"G\" edgedefault=\"undirected\">");
    for v in 0..ball.len() {
        let _ = writeln!(
            out,
            "    <node id=\"{}\"><data key=\"depth\">{}</data></node>",
            escape_xml(ball.name(v)),
            ball.depth(v)
        );
    }
    for (i, e) in ball.edges.iter().enumerate() {
        let directed = e.label == 'a' && ball.a_directed();
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\" directed=\"{directed}\"><data key=\"label\">{}</data></edge>",
            escape_xml(ball.name(e.u)),
            escape_xml(ball.name(e.v)),
            e.label
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_rewrite_system, DEFAULT_RULE_CAP};

    fn ball(f: Family, n: u32, m: Option<u32>, r: usize) -> CayleyBall {
        let rs = build_rewrite_system(&FamilySpec::new(f, n, m).unwrap(), DEFAULT_RULE_CAP).unwrap();
        build_ball(&rs, r).unwrap()
    }

    #[test]
    fn small_balls() {
        let b = ball(Family::P1, 3, None, 1);
        let names: Vec<&str> = (0..b.len()).map(|v| b.name(v)).collect();
        assert_eq!(names, vec!["e", "a", "A", "b"]);
        assert_eq!(b.depth(0), 1);
        assert_eq!(ball(Family::P1, 3, None, 2).len(), 10);
        assert_eq!(ball(Family::P1, 3, None, 2).growth(), vec![1, 3, 6]);
        assert_eq!(ball(Family::P3, 2, Some(2), 1).len(), 4);
        assert_eq!(ball(Family::P5, 2, Some(2), 0).growth(), vec![1]);
    }

    #[test]
    fn interior_is_cubic() {
        let b = ball(Family::P6, 1, Some(2), 6);
        for v in 0..b.len() {
            if b.depth(v) >= 1 {
                assert_eq!(b.graph.degree(v), 3, "vertex {}", b.name(v));
            }
        }
    }

    #[test]
    fn dot_lines() {
        let b = ball(Family::P1, 3, None, 1);
        let dot = export_dot(&b);
        assert_eq!(dot.lines().filter(|l| l.contains("[depth=")).count(), 4);
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 3);
        assert!(dot.contains("\"e\" -> \"a\" [label=\"a\"];"));
        assert!(dot.contains("\"A\" -> \"e\" [label=\"a\"];"));
        assert!(dot.contains("\"e\" -> \"b\" [label=\"b\", dir=none];"));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("svg".parse::<ExportFormat>(), Err(Error::UnknownFormat(_))));
    }
}
