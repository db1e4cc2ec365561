//! Vertex connectivity, tight 2-separators, their types, and nested orbits of separations.

pub mod flow;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cayley::CayleyBall;
use crate::graph::Graph;
use crate::group::{RewriteSystem, Word};
use crate::{Error, Result};

pub use flow::min_vertex_cut;

pub const DEFAULT_MARGIN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

/// A separation of order two: the separator `{x, y}` and the two groups of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub x: usize,
    pub y: usize,
    /// Sorted vertices of the A-side, separator excluded.
    pub a_side: Vec<usize>,
    pub b_side: Vec<usize>,
    pub tight: [bool; 2],
    /// Maximum depth on each side.
    pub depth_witness: [usize; 2],
}

impl Separation {
    pub fn pair(&self) -> (usize, usize) {
        (self.x, self.y)
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.x || v == self.y
    }

    /// Side of `v`, or `None` for separator vertices.
    pub fn side_of(&self, v: usize) -> Option<Side> {
        if self.a_side.binary_search(&v).is_ok() {
            Some(Side::A)
        } else if self.b_side.binary_search(&v).is_ok() {
            Some(Side::B)
        } else {
            None
        }
    }

    pub fn side(&self, s: Side) -> &[usize] {
        match s {
            Side::A => &self.a_side,
            Side::B => &self.b_side,
        }
    }

    pub fn is_tight(&self) -> bool {
        self.tight[0] && self.tight[1]
    }

    /// `side ∪ {x, y}` as a sorted list.
    pub fn closed_side(&self, s: Side) -> Vec<usize> {
        let mut v = self.side(s).to_vec();
        v.push(self.x);
        v.push(self.y);
        v.sort_unstable();
        v
    }
}

/// The three local shapes of a 2-separator in a cubic graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeparationType {
    TypeI,
    /// `heavy` is the side receiving two edges from each separator vertex.
    TypeII { heavy: Side },
    TypeIII,
}

impl SeparationType {
    pub fn tag(&self) -> &'static str {
        match self {
            SeparationType::TypeI => "TypeI",
            SeparationType::TypeII { .. } => "TypeII",
            SeparationType::TypeIII => "TypeIII",
        }
    }
}

fn deep_marks(g: &Graph, margin: usize) -> Vec<bool> {
    g.depth.iter().map(|&d| d >= margin).collect()
}

/// The separation on `{x, y}` if removing it leaves two components with deep vertices.
pub fn separation_from_pair(g: &Graph, x: usize, y: usize, margin: usize) -> Option<Separation> {
    if x == y {
        return None;
    }
    let (x, y) = (x.min(y), x.max(y));
    let (comp, count) = g.components_without(&[x, y]);
    let mut deep_min = vec![usize::MAX; count];
    for v in 0..g.len() {
        let c = comp[v];
        if c != usize::MAX && g.depth[v] >= margin && deep_min[c] == usize::MAX {
            deep_min[c] = v;
        }
    }
    let deep_components = deep_min.iter().filter(|&&v| v != usize::MAX).count();
    if deep_components < 2 {
        return None;
    }
    let a_comp = (0..count)
        .filter(|&c| deep_min[c] != usize::MAX)
        .min_by_key(|&c| deep_min[c])
        .expect("two deep components");
    let mut touches = vec![[false; 2]; count];
    for (i, s) in [x, y].into_iter().enumerate() {
        for &w in g.neighbors(s) {
            if comp[w] != usize::MAX {
                touches[comp[w]][i] = true;
            }
        }
    }
    let mut sep = Separation {
        x,
        y,
        a_side: Vec::new(),
        b_side: Vec::new(),
        tight: [false; 2],
        depth_witness: [0; 2],
    };
    for v in 0..g.len() {
        let c = comp[v];
        if c == usize::MAX {
            continue;
        }
        let side = if c == a_comp { Side::A } else { Side::B };
        match side {
            Side::A => sep.a_side.push(v),
            Side::B => sep.b_side.push(v),
        }
        let i = side.index();
        sep.depth_witness[i] = sep.depth_witness[i].max(g.depth[v]);
    }
    for c in 0..count {
        if touches[c][0] && touches[c][1] {
            let i = if c == a_comp { 0 } else { 1 };
            sep.tight[i] = true;
        }
    }
    Some(sep)
}

fn check_margin(ball: &CayleyBall, margin: usize) -> Result<()> {
    if ball.radius < 2 * margin {
        return Err(Error::BallTooSmall { radius: ball.radius, margin });
    }
    Ok(())
}

/// Minimum vertex cut over non-adjacent pairs of deep vertices of the ball.
pub fn local_connectivity(ball: &CayleyBall, margin: usize) -> Result<usize> {
    check_margin(ball, margin)?;
    Ok(graph_local_connectivity(&ball.closure, margin))
}

/// [`local_connectivity`] on an arbitrary graph using its depth annotation.
///
/// A graph without non-adjacent deep pairs reports `|V| - 1`.
pub fn graph_local_connectivity(g: &Graph, margin: usize) -> usize {
    let deep = deep_marks(g, margin);
    if deep.iter().filter(|&&d| d).count() < 2 {
        return g.len().saturating_sub(1);
    }
    if count_marked_components(g, &deep) >= 2 {
        return 0;
    }
    let by_vertex = g.marked_components_without(usize::MAX, &deep);
    if by_vertex.iter().any(|&k| k >= 2) {
        return 1;
    }
    for x in 0..g.len() {
        let counts = g.marked_components_without(x, &deep);
        if counts.iter().enumerate().any(|(y, &k)| y != x && k >= 2) {
            return 2;
        }
    }
    let mut best = usize::MAX;
    for u in 0..g.len() {
        for v in u + 1..g.len() {
            if deep[u] && deep[v] && !g.has_edge(u, v) {
                let (k, _) = min_vertex_cut(g, u, v).expect("distinct vertices");
                best = best.min(k);
            }
        }
    }
    if best == usize::MAX {
        g.len() - 1
    } else {
        best
    }
}

fn count_marked_components(g: &Graph, marked: &[bool]) -> usize {
    let (comp, count) = g.components_without(&[]);
    let mut has = vec![false; count];
    for v in 0..g.len() {
        if marked[v] {
            has[comp[v]] = true;
        }
    }
    has.iter().filter(|&&h| h).count()
}

/// All valid 2-separators of the ball with both vertices of depth at least 1.
pub fn enumerate_2_separators(ball: &CayleyBall, margin: usize) -> Result<Vec<Separation>> {
    check_margin(ball, margin)?;
    Ok(graph_2_separators(&ball.closure, margin, 1))
}

/// Valid 2-separators `{x, y}` with `depth >= min_depth` on both vertices, sorted by `(x, y)`.
pub fn graph_2_separators(g: &Graph, margin: usize, min_depth: usize) -> Vec<Separation> {
    let deep = deep_marks(g, margin);
    let mut out = Vec::new();
    for x in 0..g.len() {
        if g.depth[x] < min_depth {
            continue;
        }
        let counts = g.marked_components_without(x, &deep);
        for y in x + 1..g.len() {
            if g.depth[y] >= min_depth && counts[y] >= 2 {
                if let Some(sep) = separation_from_pair(g, x, y, margin) {
                    out.push(sep);
                }
            }
        }
    }
    out
}

/// Classifies a separation by how the edges at `x` and `y` split between the sides.
pub fn classify_type(g: &Graph, sep: &Separation) -> Result<SeparationType> {
    let split = |s: usize, other: usize| -> Result<[usize; 2]> {
        let mut k = [0usize; 2];
        for &w in g.neighbors(s) {
            if w == other {
                continue;
            }
            match sep.side_of(w) {
                Some(side) => k[side.index()] += 1,
                None => {
                    return Err(Error::MalformedSeparator(format!(
                        "{} has a neighbor outside both sides",
                        g.names[s]
                    )))
                }
            }
        }
        Ok(k)
    };
    let sx = split(sep.x, sep.y)?;
    let sy = split(sep.y, sep.x)?;
    let malformed = || {
        Error::MalformedSeparator(format!(
            "edge split {:?}/{:?} at {{{}, {}}}",
            sx, sy, g.names[sep.x], g.names[sep.y]
        ))
    };
    if g.has_edge(sep.x, sep.y) {
        return if sx == [1, 1] && sy == [1, 1] { Ok(SeparationType::TypeI) } else { Err(malformed()) };
    }
    let heavy = |k: [usize; 2]| match k {
        [2, 1] => Some(Side::A),
        [1, 2] => Some(Side::B),
        _ => None,
    };
    match (heavy(sx), heavy(sy)) {
        (Some(hx), Some(hy)) if hx == hy => Ok(SeparationType::TypeII { heavy: hx }),
        (Some(_), Some(_)) => Ok(SeparationType::TypeIII),
        _ => Err(malformed()),
    }
}

/// Shifts a Type III separation to the Type II separation on `{x', y}`, where `x` is the
/// separator vertex with a single A-side neighbor `x'`.
pub fn type3_to_type2(g: &Graph, sep: &Separation, margin: usize) -> Result<Separation> {
    if classify_type(g, sep)? != SeparationType::TypeIII {
        return Err(Error::NotTypeIII);
    }
    let a_neighbors = |s: usize| -> Vec<usize> {
        g.neighbors(s).iter().copied().filter(|&w| sep.side_of(w) == Some(Side::A)).collect()
    };
    let (x, y) = if a_neighbors(sep.x).len() == 1 { (sep.x, sep.y) } else { (sep.y, sep.x) };
    let x_prime = a_neighbors(x)[0];
    separation_from_pair(g, x_prime, y, margin).ok_or_else(|| {
        Error::MalformedSeparator(format!(
            "shifted pair {{{}, {}}} does not separate",
            g.names[x_prime], g.names[y]
        ))
    })
}

/// `(A, B) <= (C, D)` with `s1` oriented by `o1` and `s2` by `o2`.
fn le(s1: &Separation, o1: Side, s2: &Separation, o2: Side) -> bool {
    // A1 ⊆ C and D ⊆ B1.
    let in_closed = |s: &Separation, side: Side, v: usize| s.side_of(v) != Some(side.other());
    let a1 = s1.closed_side(o1);
    let d = s2.closed_side(o2.other());
    a1.iter().all(|&v| in_closed(s2, o2, v)) && d.iter().all(|&v| in_closed(s1, o1.other(), v))
}

/// Whether two separations of the same graph are nested (comparable in some orientation).
pub fn nested(s1: &Separation, s2: &Separation) -> bool {
    if let Some(r) = nested_fast(s1, s2) {
        return r;
    }
    [Side::A, Side::B].iter().any(|&o2| le(s1, Side::A, s2, o2) || le(s2, o2, s1, Side::A))
}

/// Disjoint separators, each inside one side of the other, are always nested.
fn nested_fast(s1: &Separation, s2: &Separation) -> Option<bool> {
    let one_side = |s: &Separation, t: &Separation| match (s.side_of(t.x), s.side_of(t.y)) {
        (Some(p), Some(q)) => p == q,
        _ => false,
    };
    (one_side(s1, s2) && one_side(s2, s1)).then_some(true)
}

/// A `G`-orbit of pairwise nested tight separations, all translates of one separator.
#[derive(Clone, Debug)]
pub struct NestedOrbit {
    /// `x⁻¹y` for the generating separator `{x, y}`.
    pub offset: Word,
    pub kind: SeparationType,
    pub separations: Vec<Separation>,
    /// Translates with both vertices deep that fail the validity condition in the ball.
    pub invalid_translates: usize,
}

/// First Type I or II separator whose deep translates are pairwise nested and tight.
pub fn extract_nested_orbit(
    ball: &CayleyBall,
    seps: &[Separation],
    rs: &RewriteSystem,
    margin: usize,
) -> Result<NestedOrbit> {
    extract_nested_orbit_of(ball, seps, rs, margin, None)
}

/// Like [`extract_nested_orbit`], restricted to separators whose type has the given tag.
pub fn extract_nested_orbit_of(
    ball: &CayleyBall,
    seps: &[Separation],
    rs: &RewriteSystem,
    margin: usize,
    tag: Option<&str>,
) -> Result<NestedOrbit> {
    let g = &ball.closure;
    let by_pair: HashMap<(usize, usize), usize> =
        seps.iter().enumerate().map(|(i, s)| (s.pair(), i)).collect();
    let mut tried = BTreeSet::new();
    let mut reasons = Vec::new();
    for s in seps {
        let Ok(kind) = classify_type(g, s) else { continue };
        if kind == SeparationType::TypeIII || tag.is_some_and(|t| t != kind.tag()) {
            continue;
        }
        let offset = rs.multiply(&rs.invert(&ball.words[s.x]), &ball.words[s.y]);
        let key = offset.clone().min(rs.invert(&offset));
        if !tried.insert(key) {
            continue;
        }
        match orbit_with_kind(ball, seps, &by_pair, rs, &offset, kind, margin) {
            Ok(orbit) => return Ok(orbit),
            Err(why) => reasons.push(why),
        }
    }
    Err(Error::NoNestedOrbit(if reasons.is_empty() {
        "no Type I or II separator".into()
    } else {
        reasons.join("; ")
    }))
}

/// The orbit of `{ε, offset}`, if it is a valid nested orbit of Type I or II.
pub fn extract_orbit_with_offset(
    ball: &CayleyBall,
    seps: &[Separation],
    rs: &RewriteSystem,
    margin: usize,
    offset: &Word,
) -> Result<NestedOrbit> {
    let offset = rs.nf(offset);
    let by_pair: HashMap<(usize, usize), usize> =
        seps.iter().enumerate().map(|(i, s)| (s.pair(), i)).collect();
    let id = ball.identity();
    let other = ball
        .index_of(&offset)
        .ok_or_else(|| Error::NoNestedOrbit(format!("offset {offset} lies outside the ball")))?;
    let sep = by_pair
        .get(&(id.min(other), id.max(other)))
        .map(|&i| &seps[i])
        .ok_or_else(|| Error::NoNestedOrbit(format!("{{e, {offset}}} is not a valid separator")))?;
    let kind = classify_type(&ball.closure, sep)?;
    if kind == SeparationType::TypeIII {
        return Err(Error::NoNestedOrbit(format!("offset {offset} is of Type III")));
    }
    orbit_with_kind(ball, seps, &by_pair, rs, &offset, kind, margin).map_err(Error::NoNestedOrbit)
}

fn orbit_with_kind(
    ball: &CayleyBall,
    seps: &[Separation],
    by_pair: &HashMap<(usize, usize), usize>,
    rs: &RewriteSystem,
    offset: &Word,
    kind: SeparationType,
    margin: usize,
) -> std::result::Result<NestedOrbit, String> {
    let g = &ball.closure;
    let (members, invalid) = orbit_of(ball, by_pair, rs, offset, margin)?;
    let consistent = members
        .iter()
        .all(|&i| classify_type(g, &seps[i]).map(|t| t.tag() == kind.tag()).unwrap_or(false));
    if !consistent {
        return Err(format!("offset {offset}: translates change type"));
    }
    if let Some(i) = members.iter().find(|&&i| !seps[i].is_tight()) {
        return Err(format!("offset {offset}: translate {} not tight", pair_name(g, &seps[*i])));
    }
    if let Some((i, j)) = first_crossing(seps, &members) {
        return Err(format!("offset {offset}: {} crosses {}", pair_name(g, &seps[i]), pair_name(g, &seps[j])));
    }
    Ok(NestedOrbit {
        offset: offset.clone(),
        kind,
        separations: members.iter().map(|&i| seps[i].clone()).collect(),
        invalid_translates: invalid,
    })
}

fn pair_name(g: &Graph, s: &Separation) -> String {
    format!("{{{}, {}}}", g.names[s.x], g.names[s.y])
}

/// Indices into `seps` of the deep translates `{h, h·offset}`; the one through the identity must be valid.
fn orbit_of(
    ball: &CayleyBall,
    by_pair: &HashMap<(usize, usize), usize>,
    rs: &RewriteSystem,
    offset: &Word,
    margin: usize,
) -> std::result::Result<(Vec<usize>, usize), String> {
    let mut members = BTreeSet::new();
    let mut invalid = 0;
    for h in 0..ball.len() {
        if ball.depth(h) < margin {
            continue;
        }
        let Some(hw) = ball.index_of(&rs.multiply(&ball.words[h], offset)) else { continue };
        if ball.depth(hw) < margin {
            continue;
        }
        let pair = (h.min(hw), h.max(hw));
        match by_pair.get(&pair) {
            Some(&i) => {
                members.insert(i);
            }
            None if h == ball.identity() => {
                return Err(format!("offset {offset}: translate at the identity is not valid"));
            }
            None => invalid += 1,
        }
    }
    Ok((members.into_iter().collect(), invalid / 2 + invalid % 2))
}

fn first_crossing(seps: &[Separation], members: &[usize]) -> Option<(usize, usize)> {
    for (k, &i) in members.iter().enumerate() {
        for &j in &members[k + 1..] {
            if !nested(&seps[i], &seps[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// JSON form `{x, y, type, tight, sides: {A, B}}` with vertex names.
pub fn separation_json(g: &Graph, sep: &Separation) -> Value {
    let names = |vs: &[usize]| vs.iter().map(|&v| g.names[v].clone()).collect::<Vec<_>>();
    let ty = classify_type(g, sep).map(|t| t.tag().to_string()).unwrap_or_else(|_| "malformed".into());
    json!({
        "x": g.names[sep.x],
        "y": g.names[sep.y],
        "type": ty,
        "tight": sep.tight,
        "sides": { "A": names(&sep.a_side), "B": names(&sep.b_side) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cubic 8-vertex graph with a Type III separator `{0, 1}`.
    pub(crate) fn type_three_fixture() -> Graph {
        // x=0 adj a1=2, a2=3, b1=5; y=1 adj a3=4, b2=6, b3=7.
        Graph::from_edges(
            8,
            &[(0, 2), (0, 3), (0, 5), (1, 4), (1, 6), (1, 7), (2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 7)],
        )
    }

    #[test]
    fn k4_is_three_connected() {
        let mut e = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                e.push((i, j));
            }
        }
        let k4 = Graph::from_edges(4, &e);
        assert_eq!(graph_local_connectivity(&k4, 0), 3);
        assert!(graph_2_separators(&k4, 0, 0).is_empty());
    }

    #[test]
    fn type_three_shift() {
        let g = type_three_fixture();
        let sep = separation_from_pair(&g, 0, 1, 0).unwrap();
        assert_eq!(classify_type(&g, &sep).unwrap(), SeparationType::TypeIII);
        let shifted = type3_to_type2(&g, &sep, 0).unwrap();
        assert!(matches!(classify_type(&g, &shifted).unwrap(), SeparationType::TypeII { .. }));
        assert!(shifted.is_tight());
        assert!(matches!(type3_to_type2(&g, &shifted, 0), Err(Error::NotTypeIII)));
    }

    #[test]
    fn self_nested() {
        let g = type_three_fixture();
        let sep = separation_from_pair(&g, 0, 1, 0).unwrap();
        assert!(nested(&sep, &sep));
    }
}
