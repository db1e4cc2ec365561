//! Tree-decompositions induced by a nested orbit of 2-separations, their axioms,
//! the structural lemmas about parts and adhesion sets, torsos and stabilizers.

pub mod templates;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::cayley::CayleyBall;
use crate::graph::Graph;
use crate::group::{shortlex_cmp, Family, FamilySpec, RewriteSystem, Word, SYM_B, SYM_C};
use crate::separation::{nested, NestedOrbit, Separation, SeparationType, Side};
use crate::{Error, Result};

pub use templates::{
    construct_R, construct_V, cycle_graph, isomorphic, r_window, TemplateGraph, TemplateKind,
};

/// Parts are sorted vertex lists of the analysed graph; tree edge `k` joins
/// `tree_edges[k]` and has adhesion set `adhesions[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub parts: Vec<Vec<usize>>,
    /// Parts containing a vertex outside every adhesion set, i.e. cut open by the boundary.
    pub partial: Vec<bool>,
    pub tree_edges: Vec<(usize, usize)>,
    pub adhesions: Vec<(usize, usize)>,
    pub kind: Option<SeparationType>,
}

impl TreeDecomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, part: usize, v: usize) -> bool {
        self.parts[part].binary_search(&v).is_ok()
    }

    /// Parts containing `v`, ascending.
    pub fn parts_containing(&self, v: usize) -> Vec<usize> {
        (0..self.parts.len()).filter(|&t| self.contains(t, v)).collect()
    }

    /// Tree edges incident to `part`.
    pub fn incident(&self, part: usize) -> Vec<usize> {
        (0..self.tree_edges.len())
            .filter(|&k| self.tree_edges[k].0 == part || self.tree_edges[k].1 == part)
            .collect()
    }

    pub fn non_partial(&self) -> Vec<usize> {
        (0..self.parts.len()).filter(|&t| !self.partial[t]).collect()
    }

    fn cover(&self, n: usize) -> Vec<Vec<usize>> {
        let mut cover = vec![Vec::new(); n];
        for (t, part) in self.parts.iter().enumerate() {
            for &v in part {
                if v < n {
                    cover[v].push(t);
                }
            }
        }
        cover
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.parts.len()];
        for &(s, t) in &self.tree_edges {
            adj[s].push(t);
            adj[t].push(s);
        }
        adj
    }
}

/// Builds the decomposition of the ball's analysis graph from a nested orbit.
pub fn build_treedec(ball: &CayleyBall, orbit: &NestedOrbit) -> Result<TreeDecomposition> {
    let mut td = build_from_separations(&ball.closure, &orbit.separations)?;
    td.kind = Some(orbit.kind);
    Ok(td)
}

/// The decomposition whose adhesion sets are exactly the separators of `seps`.
///
/// Each part is grown from one side of a separator and may cross no separator,
/// always staying on the side of every separator that faces the starting one.
pub fn build_from_separations(g: &Graph, seps: &[Separation]) -> Result<TreeDecomposition> {
    for i in 0..seps.len() {
        for j in i + 1..seps.len() {
            if !nested(&seps[i], &seps[j]) {
                return Err(Error::NotNested(format!(
                    "{{{}, {}}} crosses {{{}, {}}}",
                    g.names[seps[i].x], g.names[seps[i].y], g.names[seps[j].x], g.names[seps[j].y]
                )));
            }
        }
    }
    let mut seps_at: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (i, s) in seps.iter().enumerate() {
        seps_at[s.x].push(i);
        seps_at[s.y].push(i);
    }
    let mut stamp = vec![0u32; g.len()];
    let mut generation = 0u32;
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut td = TreeDecomposition {
        parts: Vec::new(),
        partial: Vec::new(),
        tree_edges: Vec::new(),
        adhesions: Vec::new(),
        kind: None,
    };
    for (i, s) in seps.iter().enumerate() {
        let mut ends = [0usize; 2];
        for (k, side) in [Side::A, Side::B].into_iter().enumerate() {
            generation += 1;
            let part = grow_part(g, seps, &seps_at, i, side, &mut stamp, generation);
            let next = ids.len();
            let id = *ids.entry(part.clone()).or_insert(next);
            if id == next {
                td.partial.push(part.iter().any(|&v| seps_at[v].is_empty()));
                td.parts.push(part);
            }
            ends[k] = id;
        }
        if ends[0] == ends[1] {
            return Err(Error::MalformedSeparator(format!(
                "both sides of {{{}, {}}} grow into the same part",
                g.names[s.x], g.names[s.y]
            )));
        }
        td.tree_edges.push((ends[0], ends[1]));
        td.adhesions.push(s.pair());
    }
    Ok(td)
}

fn grow_part(
    g: &Graph,
    seps: &[Separation],
    seps_at: &[Vec<usize>],
    origin: usize,
    side: Side,
    stamp: &mut [u32],
    generation: u32,
) -> Vec<usize> {
    let s0 = &seps[origin];
    let facing = |j: usize| -> Side {
        if j == origin {
            return side;
        }
        let s = &seps[j];
        s.side_of(s0.x).or_else(|| s.side_of(s0.y)).unwrap_or(side)
    };
    let mut part = vec![s0.x, s0.y];
    stamp[s0.x] = generation;
    stamp[s0.y] = generation;
    let mut stack = vec![s0.x, s0.y];
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if stamp[u] == generation {
                continue;
            }
            let allowed = seps_at[v].iter().all(|&j| {
                let s = &seps[j];
                s.contains(u) || s.side_of(u) == Some(facing(j))
            });
            if !allowed {
                continue;
            }
            stamp[u] = generation;
            part.push(u);
            stack.push(u);
            for &j in &seps_at[u] {
                let s = &seps[j];
                let partner = if s.x == u { s.y } else { s.x };
                if stamp[partner] != generation {
                    stamp[partner] = generation;
                    part.push(partner);
                    stack.push(partner);
                }
            }
        }
    }
    part.sort_unstable();
    part
}

/// Outcome of the decomposition axioms on the vertices of depth at least `margin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    pub tree: bool,
    pub witnesses: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.t1 && self.t2 && self.t3 && self.tree
    }
}

/// Checks (T1)-(T3) on the interior region and that the node graph is a tree.
pub fn verify_axioms(td: &TreeDecomposition, g: &Graph, margin: usize) -> AxiomReport {
    let n = g.len();
    let interior: Vec<bool> = g.depth.iter().map(|&d| d >= margin).collect();
    let cover = td.cover(n);
    let mut witnesses = Vec::new();

    let t1 = match (0..n).find(|&v| interior[v] && cover[v].is_empty()) {
        Some(v) => {
            witnesses.push(format!("T1: {} lies in no part", g.names[v]));
            false
        }
        None => true,
    };

    let t2 = match g.edges().into_iter().find(|&(u, v)| {
        interior[u] && interior[v] && !cover[u].iter().any(|t| cover[v].contains(t))
    }) {
        Some((u, v)) => {
            witnesses.push(format!("T2: edge {}-{} lies in no part", g.names[u], g.names[v]));
            false
        }
        None => true,
    };

    let mut dsu: Vec<usize> = (0..td.len()).collect();
    fn find(dsu: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while dsu[r] != r {
            r = dsu[r];
        }
        let mut y = x;
        while dsu[y] != r {
            let next = dsu[y];
            dsu[y] = r;
            y = next;
        }
        r
    }
    let mut tree = true;
    for &(s, t) in &td.tree_edges {
        let (rs, rt) = (find(&mut dsu, s), find(&mut dsu, t));
        if rs == rt {
            if tree {
                witnesses.push(format!("tree: edge {s}-{t} closes a cycle"));
            }
            tree = false;
        } else {
            dsu[rs] = rt;
        }
    }
    let roots: HashSet<usize> = (0..td.len()).map(|t| find(&mut dsu, t)).collect();
    if roots.len() > 1 {
        witnesses.push(format!("tree: node graph has {} components", roots.len()));
        tree = false;
    }

    let adj = td.adjacency();
    let mut t3 = true;
    for v in 0..n {
        if !interior[v] || cover[v].len() < 2 {
            continue;
        }
        let set: HashSet<usize> = cover[v].iter().copied().collect();
        let mut seen = HashSet::from([cover[v][0]]);
        let mut queue = VecDeque::from([cover[v][0]]);
        while let Some(t) = queue.pop_front() {
            for &s in &adj[t] {
                if set.contains(&s) && seen.insert(s) {
                    queue.push_back(s);
                }
            }
        }
        if seen.len() != set.len() {
            witnesses.push(format!("T3: parts containing {} are not connected in the tree", g.names[v]));
            t3 = false;
            break;
        }
    }
    AxiomReport { t1, t2, t3, tree, witnesses }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub status: Status,
    /// Number of objects the check was evaluated on.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl LemmaCheck {
    fn from_failures(checked: usize, failure: Option<String>) -> Self {
        match failure {
            Some(w) => LemmaCheck { status: Status::Fail, checked, witness: Some(w) },
            None if checked == 0 => LemmaCheck {
                status: Status::Skipped,
                checked,
                witness: Some("nothing to evaluate".into()),
            },
            None => LemmaCheck { status: Status::Pass, checked, witness: None },
        }
    }

    fn skipped(reason: &str) -> Self {
        LemmaCheck { status: Status::Skipped, checked: 0, witness: Some(reason.into()) }
    }
}

pub const LEMMA_KEYS: [&str; 9] = ["L3.2", "L3.3", "L3.4", "C3.5", "L3.6", "C3.7", "L4.2", "L5.3", "L5.6"];

/// One entry per key of [`LEMMA_KEYS`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LemmaReport(pub BTreeMap<String, LemmaCheck>);

impl LemmaReport {
    pub fn get(&self, key: &str) -> &LemmaCheck {
        &self.0[key]
    }

    /// No entry failed.
    pub fn passed(&self) -> bool {
        self.0.values().all(|c| c.status != Status::Fail)
    }
}

/// Evaluates the structural lemmas. Vertex conditions cover the non-partial parts and every
/// adhesion vertex; adhesion conditions cover every tree edge.
pub fn structural_checks(
    td: &TreeDecomposition,
    ball: &CayleyBall,
    rs: &RewriteSystem,
) -> LemmaReport {
    structural_checks_on(td, &ball.closure, |v| ball.word(v).clone(), rs, &ball.spec)
}

fn structural_checks_on(
    td: &TreeDecomposition,
    g: &Graph,
    word: impl Fn(usize) -> Word,
    rs: &RewriteSystem,
    spec: &FamilySpec,
) -> LemmaReport {
    let mut out = BTreeMap::new();
    let name = |v: usize| g.names[v].clone();
    let evaluated: Vec<usize> = {
        let mut vs: Vec<usize> = td.non_partial().iter().flat_map(|&t| td.parts[t].iter().copied()).collect();
        vs.extend(td.adhesions.iter().flat_map(|&(x, y)| [x, y]));
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let cover = td.cover(g.len());
    let mut adhesion_count = vec![0usize; g.len()];
    for &(x, y) in &td.adhesions {
        adhesion_count[x] += 1;
        adhesion_count[y] += 1;
    }

    let fail = evaluated
        .iter()
        .find(|&&v| adhesion_count[v] > 2)
        .map(|&v| format!("{} lies in {} adhesion sets", name(v), adhesion_count[v]));
    out.insert("L3.2".into(), LemmaCheck::from_failures(evaluated.len(), fail));

    let fail = evaluated
        .iter()
        .find(|&&v| cover[v].len() != 2)
        .map(|&v| format!("{} lies in {} parts", name(v), cover[v].len()));
    out.insert("C3.5".into(), LemmaCheck::from_failures(evaluated.len(), fail));

    let mut checked = 0;
    let mut fail = None;
    for t in 0..td.len() {
        let incident = td.incident(t);
        checked += 1;
        'pairs: for (k, &e) in incident.iter().enumerate() {
            for &f in &incident[k + 1..] {
                let (a, b) = (td.adhesions[e], td.adhesions[f]);
                if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                    fail = Some(format!(
                        "adhesions {{{}, {}}} and {{{}, {}}} of part {t} meet",
                        name(a.0),
                        name(a.1),
                        name(b.0),
                        name(b.1)
                    ));
                    break 'pairs;
                }
            }
        }
        if fail.is_some() {
            break;
        }
    }
    out.insert("L3.4".into(), LemmaCheck::from_failures(checked, fail));

    let mut checked = 0;
    let mut fail = None;
    for (k, &(x, y)) in td.adhesions.iter().enumerate() {
        let (s, t) = td.tree_edges[k];
        checked += 1;
        let linked = [s, t].iter().any(|&p| connected_within(g, &td.parts[p], x, y));
        if !linked {
            fail = Some(format!("{{{}, {}}} is disconnected in both parts", name(x), name(y)));
            break;
        }
    }
    out.insert("L3.3".into(), LemmaCheck::from_failures(checked, fail));

    let mut fail = None;
    let mut fail_stab = None;
    for &(x, y) in &td.adhesions {
        let (wx, wy) = (word(x), word(y));
        let q = rs.multiply(&wx, &rs.invert(&wy));
        if fail.is_none() && !rs.is_identity(&rs.multiply(&q, &q)) {
            fail = Some(format!("(xy⁻¹)² ≠ ε for {{{}, {}}}", name(x), name(y)));
        }
        let size = adhesion_stabilizer(rs, &wx, &wy).len();
        if fail_stab.is_none() && size != 2 {
            fail_stab = Some(format!("{{{}, {}}} has stabilizer of size {size}", name(x), name(y)));
        }
    }
    out.insert("L3.6".into(), LemmaCheck::from_failures(td.adhesions.len(), fail));
    out.insert("C3.7".into(), LemmaCheck::from_failures(td.adhesions.len(), fail_stab));

    let structures: Vec<(usize, PartStructure)> = td
        .non_partial()
        .into_iter()
        .map(|t| (t, classify_induced(&g.induced(&td.parts[t]))))
        .collect();

    out.insert(
        "L4.2".into(),
        if td.kind == Some(SeparationType::TypeI) {
            let fail = structures
                .iter()
                .find(|(_, s)| !matches!(s.shape, PartShape::Cycle { .. }))
                .map(|(t, s)| format!("part {t} induces {:?}", s.shape));
            LemmaCheck::from_failures(structures.len(), fail)
        } else {
            LemmaCheck::skipped("orbit is not of Type I")
        },
    );

    out.insert(
        "L5.3".into(),
        if spec.family == Family::P5 && matches!(td.kind, Some(SeparationType::TypeII { .. })) {
            let a_parts: Vec<&(usize, PartStructure)> =
                structures.iter().filter(|(_, s)| s.labels.contains('a')).collect();
            let want = 2 * spec.n as usize;
            let fail = a_parts
                .iter()
                .find(|(_, s)| {
                    s.shape != PartShape::Cycle { length: want } || s.labels.chars().any(|c| c != 'a')
                })
                .map(|(t, s)| format!("part {t} induces {:?} labeled {}", s.shape, s.labels));
            LemmaCheck::from_failures(a_parts.len(), fail)
        } else {
            LemmaCheck::skipped("applies to the Type II two-generator family")
        },
    );

    out.insert(
        "L5.6".into(),
        match spec.family {
            Family::P6 | Family::P7 if matches!(td.kind, Some(SeparationType::TypeII { .. })) => {
                bc_part_check(td, g)
            }
            _ => LemmaCheck::skipped("applies to the Type II three-generator families"),
        },
    );
    debug_assert!(LEMMA_KEYS.iter().all(|k| out.contains_key(*k)));
    LemmaReport(out)
}

/// (b,c)-parts: alternating cycles of length divisible by 4, or alternating paths inside
/// the separator core when the part is cut open by the boundary.
fn bc_part_check(td: &TreeDecomposition, g: &Graph) -> LemmaCheck {
    let mut checked = 0;
    for t in td.non_partial() {
        let s = classify_induced(&g.induced(&td.parts[t]));
        if s.labels.is_empty() {
            continue;
        }
        checked += 1;
        let alternating = s.labels.as_bytes().windows(2).all(|w| w[0] != w[1]);
        let ok = match s.shape {
            PartShape::Cycle { length } => length % 4 == 0 && alternating && !s.labels.contains('a'),
            PartShape::Matching { .. } => s.labels.bytes().all(|l| l == b'a'),
            _ => false,
        };
        if !ok {
            return LemmaCheck::from_failures(checked, Some(format!("part {t} induces {:?} labeled {}", s.shape, s.labels)));
        }
    }
    LemmaCheck::from_failures(checked, None)
}

fn connected_within(g: &Graph, part: &[usize], x: usize, y: usize) -> bool {
    let inside = |v: usize| part.binary_search(&v).is_ok();
    let mut seen = HashSet::from([x]);
    let mut stack = vec![x];
    while let Some(v) = stack.pop() {
        if v == y {
            return true;
        }
        for &w in g.neighbors(v) {
            if inside(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    false
}

/// Elements `g` with `g·{x, y} = {x, y}`.
///
/// Such `g` sends `x` to `x` or `y`, so it is `ε` or `yx⁻¹`; only those two are tested.
pub fn adhesion_stabilizer(rs: &RewriteSystem, x: &Word, y: &Word) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let swap = rs.multiply(y, &rs.invert(x));
    if !swap.is_empty() && rs.multiply(&swap, y) == *x {
        out.push(swap);
    }
    out
}

/// Shape of an induced subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum PartShape {
    Cycle { length: usize },
    Matching { edges: usize },
    /// `length` counts edges.
    Path { length: usize },
    Other { vertices: usize, edges: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartStructure {
    pub shape: PartShape,
    /// Edge labels in traversal order for cycles and paths; the sorted label set for matchings.
    pub labels: String,
}

impl PartStructure {
    /// Shortest `p` with `labels` a power of its length-`p` prefix.
    pub fn label_period(&self) -> String {
        let l = self.labels.as_bytes();
        for p in 1..=l.len() {
            if l.len().is_multiple_of(p) && (p..l.len()).all(|i| l[i] == l[i - p]) {
                return self.labels[..p].to_string();
            }
        }
        self.labels.clone()
    }

    /// Whether the cyclic label word is a power of `pattern` up to rotation and reversal.
    pub fn has_cyclic_period(&self, pattern: &str) -> bool {
        let l = self.labels.len();
        if pattern.is_empty() || !l.is_multiple_of(pattern.len()) {
            return false;
        }
        let target = pattern.repeat(l / pattern.len());
        let doubled = format!("{0}{0}", self.labels);
        let reversed: String = doubled.chars().rev().collect();
        doubled.contains(&target) || reversed.contains(&target)
    }
}

/// Classifies the induced subgraph of a non-partial part.
pub fn part_structure(td: &TreeDecomposition, g: &Graph, part: usize) -> Result<PartStructure> {
    if td.partial[part] {
        return Err(Error::PartialPart(part));
    }
    Ok(classify_induced(&g.induced(&td.parts[part])))
}

/// Classifies the subgraph induced on the adhesion sets of the tree edges at `part`,
/// which is what survives of an infinite part inside the ball.
pub fn core_structure(td: &TreeDecomposition, g: &Graph, part: usize) -> PartStructure {
    let mut core: Vec<usize> = td
        .incident(part)
        .into_iter()
        .flat_map(|k| [td.adhesions[k].0, td.adhesions[k].1])
        .collect();
    core.sort_unstable();
    core.dedup();
    classify_induced(&g.induced(&core))
}

pub fn classify_induced(h: &Graph) -> PartStructure {
    let n = h.len();
    let e = h.edge_count();
    let degrees: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    if n >= 2 && degrees.iter().all(|&d| d == 1) {
        let mut labels: Vec<char> = h.edges().iter().filter_map(|&(u, v)| h.edge_label(u, v)).collect();
        labels.sort_unstable();
        labels.dedup();
        return PartStructure { shape: PartShape::Matching { edges: e }, labels: labels.into_iter().collect() };
    }
    let connected = n > 0 && h.is_connected();
    if connected && n >= 3 && degrees.iter().all(|&d| d == 2) {
        return PartStructure { shape: PartShape::Cycle { length: n }, labels: walk_labels(h, 0) };
    }
    let ends: Vec<usize> = (0..n).filter(|&v| degrees[v] == 1).collect();
    if connected && n >= 2 && ends.len() == 2 && degrees.iter().all(|&d| d == 1 || d == 2) {
        return PartStructure { shape: PartShape::Path { length: e }, labels: walk_labels(h, ends[0]) };
    }
    PartStructure { shape: PartShape::Other { vertices: n, edges: e }, labels: String::new() }
}

/// Labels along a path or cycle from `start`, first stepping to the smaller-indexed neighbor.
fn walk_labels(h: &Graph, start: usize) -> String {
    let mut labels = String::new();
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = h.neighbors(cur).iter().copied().filter(|&w| w != prev).min();
        let Some(next) = next else { break };
        labels.push(h.edge_label(cur, next).unwrap_or('?'));
        prev = cur;
        cur = next;
        if cur == start || labels.len() > h.len() {
            break;
        }
    }
    labels
}

/// Induced subgraph of a non-partial part plus one virtual edge per incident adhesion.
pub fn torso(td: &TreeDecomposition, g: &Graph, part: usize) -> Result<Graph> {
    if td.partial[part] {
        return Err(Error::PartialPart(part));
    }
    let vertices = &td.parts[part];
    let mut t = g.induced(vertices);
    for k in td.incident(part) {
        let (x, y) = td.adhesions[k];
        let i = vertices.binary_search(&x).expect("adhesion lies in its part");
        let j = vertices.binary_search(&y).expect("adhesion lies in its part");
        t.add_edge(i, j, 'v');
    }
    Ok(t)
}

pub fn torso_matches(torso: &Graph, template: &TemplateGraph) -> bool {
    isomorphic(torso, &template.graph)
}

/// Torso window of the alternating `(b, c)` double ray through `ε`, with a virtual edge
/// `{h, h·offset}` at every vertex `h` whose partner falls inside the window.
pub fn line_window_torso(rs: &RewriteSystem, offset: &Word, window: usize) -> Graph {
    let len = 2 * window + 1;
    let mut words = Vec::with_capacity(len);
    for k in 0..len {
        let i = k as i64 - window as i64;
        let pattern = if i >= 0 { [SYM_B, SYM_C] } else { [SYM_C, SYM_B] };
        let w: Vec<u8> = (0..i.unsigned_abs() as usize).map(|j| pattern[j % 2]).collect();
        words.push(rs.nf(&Word(w)));
    }
    let position: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut g = Graph::new(len);
    for k in 0..len {
        g.names[k] = words[k].to_string();
        if k + 1 < len {
            let s = if k as i64 - window as i64 >= 0 {
                [SYM_B, SYM_C][(k - window) % 2]
            } else {
                [SYM_C, SYM_B][(window - k - 1) % 2]
            };
            g.add_edge(k, k + 1, crate::group::symbol_char(s));
        }
    }
    for k in 0..len {
        if let Some(&j) = position.get(&rs.multiply(&words[k], offset)) {
            g.add_edge(k, j, 'v');
        }
    }
    g
}

/// Torso of the finite part through `ε` traced by repeating `pattern`, with a virtual edge
/// `{h, h·offset}` at every vertex. `None` if the walk does not close within `cap` steps.
pub fn cycle_torso(rs: &RewriteSystem, pattern: &[u8], offset: &Word, cap: usize) -> Option<Graph> {
    let mut words = vec![Word::empty()];
    let mut labels = Vec::new();
    loop {
        let s = pattern[labels.len() % pattern.len()];
        let next = rs.multiply(words.last().unwrap(), &Word(vec![s]));
        labels.push(crate::group::symbol_char(s));
        if next.is_empty() {
            break;
        }
        if words.len() >= cap {
            return None;
        }
        words.push(next);
    }
    let position: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let len = words.len();
    let mut g = Graph::new(len);
    for k in 0..len {
        g.names[k] = words[k].to_string();
        g.add_edge(k, (k + 1) % len, labels[k]);
    }
    for k in 0..len {
        if let Some(&j) = position.get(&rs.multiply(&words[k], offset)) {
            if j != k {
                g.add_edge(k, j, 'v');
            }
        }
    }
    Some(g)
}

/// Elements `g` of the part with `g·v` in the part for every deep vertex `v` of the part.
pub fn stabilizer_elements(
    td: &TreeDecomposition,
    ball: &CayleyBall,
    rs: &RewriteSystem,
    part: usize,
    margin: usize,
) -> Result<Vec<Word>> {
    if td.partial[part] {
        return Err(Error::PartialPart(part));
    }
    let vertices = &td.parts[part];
    if !td.contains(part, ball.identity()) {
        return Err(Error::InvalidParameters(format!("part {part} does not contain the identity")));
    }
    let g = &ball.closure;
    let deep: Vec<usize> = vertices.iter().copied().filter(|&v| g.depth[v] >= margin).collect();
    let mut out = Vec::new();
    for &c in vertices {
        let h = ball.word(c);
        let keeps = deep.iter().all(|&v| {
            ball.closure_index(&rs.multiply(h, ball.word(v)))
                .is_some_and(|w| vertices.binary_search(&w).is_ok())
        });
        if keeps {
            out.push(h.clone());
        }
    }
    out.sort_by(|a, b| shortlex_cmp(&a.0, &b.0));
    Ok(out)
}

/// Elements of the subgroup generated by `gens`, or `None` if it exceeds `cap` elements.
pub fn subgroup_closure(rs: &RewriteSystem, gens: &[Word], cap: usize) -> Option<Vec<Word>> {
    let mut seen: HashSet<Word> = HashSet::from([Word::empty()]);
    let mut queue = VecDeque::from([Word::empty()]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let x = rs.multiply(&w, g);
            if seen.insert(x.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(x);
            }
        }
    }
    let mut out: Vec<Word> = seen.into_iter().collect();
    out.sort_by(|a, b| shortlex_cmp(&a.0, &b.0));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::separation_from_pair;

    fn ladder() -> (Graph, Vec<Separation>) {
        // Two squares 0-1-3-2 and 2-3-5-4 sharing the rung {2, 3}.
        let mut g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5)]);
        g.depth = vec![1, 1, 0, 0, 1, 1];
        let sep = separation_from_pair(&g, 2, 3, 1).unwrap();
        (g, vec![sep])
    }

    #[test]
    fn single_separator_gives_two_parts() {
        let (g, seps) = ladder();
        let td = build_from_separations(&g, &seps).unwrap();
        assert_eq!(td.len(), 2);
        assert_eq!(td.tree_edges.len(), 1);
        assert_eq!(td.parts[0], vec![0, 1, 2, 3]);
        assert_eq!(td.parts[1], vec![2, 3, 4, 5]);
        assert!(verify_axioms(&td, &g, 0).passed());
    }

    #[test]
    fn axioms_catch_broken_fixtures() {
        let (g, seps) = ladder();
        let td = build_from_separations(&g, &seps).unwrap();
        let mut missing = td.clone();
        missing.parts[0].retain(|&v| v != 0);
        let r = verify_axioms(&missing, &g, 0);
        assert!(!r.t1 && !r.passed());
        let mut cyclic = td.clone();
        cyclic.parts.push(vec![0, 1]);
        cyclic.partial.push(true);
        cyclic.tree_edges.extend([(0, 2), (1, 2)]);
        cyclic.adhesions.extend([(0, 1), (0, 1)]);
        let r = verify_axioms(&cyclic, &g, 0);
        assert!(!r.tree);
    }

    #[test]
    fn shapes_and_periods() {
        let mut c = Graph::new(8);
        let labels = ['b', 'c', 'b', 'a'];
        for i in 0..8 {
            c.add_edge(i, (i + 1) % 8, labels[i % 4]);
        }
        let s = classify_induced(&c);
        assert_eq!(s.shape, PartShape::Cycle { length: 8 });
        assert!(s.has_cyclic_period("bcba"));
        assert!(s.has_cyclic_period("abcb"));
        assert!(!s.has_cyclic_period("bcab"));
        assert_eq!(s.label_period().len(), 4);
        let m = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(classify_induced(&m).shape, PartShape::Matching { edges: 2 });
    }
}
