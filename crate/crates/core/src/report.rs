//! The full pipeline for one family cell and its JSON report.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::cayley::{build_ball, CayleyBall};
use crate::classify::{
    classify, expected_offset, generation_check, GenerationCheck, GenerationVerdict, SplittingClaim,
};
use crate::group::{
    build_rewrite_system, AbelianInvariants, Family, FamilySpec, RewriteSystem, Word, DEFAULT_RULE_CAP, SYM_A, SYM_B,
    SYM_C,
};
use crate::graph::Graph;
use crate::planarity::{planar as planar_graph, torso_planarity_report, window_verdicts, TorsoPlanarityReport, WindowVerdicts};
use crate::separation::{
    classify_type, enumerate_2_separators, extract_nested_orbit, extract_nested_orbit_of, extract_orbit_with_offset,
    local_connectivity, NestedOrbit, Separation,
};
use crate::treedec::{
    build_treedec, construct_V, cycle_torso, isomorphic, line_window_torso, part_structure, r_window, stabilizer_elements,
    structural_checks, subgroup_closure, torso, verify_axioms, AxiomReport, LemmaReport, PartShape, PartStructure,
    Status, TreeDecomposition,
};
use crate::{Error, Result};

pub const DEFAULT_RADIUS: usize = 10;
pub const DEFAULT_LENGTH_CAP: usize = 16;

/// Lemmas every family cell is expected to pass.
pub const CORE_LEMMAS: [&str; 6] = ["L3.2", "L3.3", "L3.4", "C3.5", "L3.6", "C3.7"];

/// Whether a check tests the implementation or a side claim about the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Structural,
    Claim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub category: Category,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(category: Category, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { category, status, detail: detail.into() }
    }

    fn skipped(category: Category, detail: impl Into<String>) -> Self {
        Check { category, status: Status::Skipped, detail: detail.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    ClaimDiscrepancy,
    Fail,
    ConfigError,
    ResourceCap,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass | Outcome::ClaimDiscrepancy => 0,
            Outcome::Fail => 1,
            Outcome::ConfigError => 2,
            Outcome::ResourceCap => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildInfo {
    pub reduction_order: String,
    pub rules: usize,
    pub ball_vertices: usize,
    pub closure_vertices: usize,
    pub growth: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    /// Type of the orbit picked by the first-separator rule.
    pub first_kind: String,
    pub first_offset: String,
    /// Orbit the decomposition is built from.
    pub kind: String,
    pub offset: String,
    pub translates: usize,
    pub invalid_translates: usize,
    pub type_iii_selected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreedecInfo {
    pub parts: usize,
    pub non_partial: usize,
    pub tree_edges: usize,
    pub shapes: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerComparison {
    pub factor: String,
    pub generators: Vec<String>,
    pub predicted: Vec<String>,
    pub computed: Vec<Vec<String>>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelianComparison {
    pub presentation: AbelianInvariants,
    pub splitting: AbelianInvariants,
    pub presentation_text: String,
    pub splitting_text: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanaritySection {
    pub torsos: TorsoPlanarityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_torso_planar: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<WindowVerdicts>,
    pub planar: bool,
    pub expected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub family: Family,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub radius: usize,
    pub margin: usize,
    pub presentation: String,
    pub claim: Option<SplittingClaim>,
    pub build: Option<BuildInfo>,
    pub connectivity: Option<usize>,
    pub separators: BTreeMap<String, usize>,
    pub orbit: Option<OrbitInfo>,
    pub treedec: Option<TreedecInfo>,
    pub axioms: Option<AxiomReport>,
    pub lemmas: Option<LemmaReport>,
    pub stabilizers: Vec<StabilizerComparison>,
    pub abelianization: Option<AbelianComparison>,
    pub generation: Option<GenerationCheck>,
    pub planarity: Option<PlanaritySection>,
    pub checks: BTreeMap<String, Check>,
    pub claim_discrepancy: Vec<String>,
    pub errors: Vec<String>,
    pub outcome: Outcome,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.get(name)
    }

    fn finish(&mut self) {
        let failed = |c: Category| {
            self.checks.values().filter(|k| k.category == c && k.status == Status::Fail).count()
        };
        self.claim_discrepancy = self
            .checks
            .iter()
            .filter(|(_, k)| k.category == Category::Claim && k.status == Status::Fail)
            .map(|(name, _)| name.clone())
            .collect();
        if self.outcome != Outcome::Pass {
            return;
        }
        self.outcome = if failed(Category::Structural) > 0 || !self.errors.is_empty() {
            Outcome::Fail
        } else if failed(Category::Claim) > 0 {
            Outcome::ClaimDiscrepancy
        } else {
            Outcome::Pass
        };
    }
}

/// Shortlex-least spelling of an element if it lies in the ball, else its normal form.
pub fn display(ball: &CayleyBall, w: &Word) -> String {
    ball.closure_index(w).map(|v| ball.name(v).to_string()).unwrap_or_else(|| w.to_string())
}

fn display_sorted(ball: &CayleyBall, ws: &[Word]) -> Vec<String> {
    let mut out: Vec<String> = ws.iter().map(|w| display(ball, w)).collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| shortlex_key(x).cmp(&shortlex_key(y))));
    out
}

fn shortlex_key(s: &str) -> Vec<u8> {
    Word::parse(s).map(|w| w.0).unwrap_or_default()
}

/// Whether the family's Cayley graph is claimed planar.
pub fn expected_planar(spec: &FamilySpec) -> bool {
    match spec.family {
        Family::P1 | Family::P2 | Family::P3 | Family::P4 => true,
        Family::P5 => spec.n == 2,
        Family::P6 | Family::P7 => spec.n == 1,
    }
}

/// Expected orbit type tag.
pub fn expected_kind(spec: &FamilySpec) -> &'static str {
    if spec.family.is_type_one() {
        "TypeI"
    } else {
        "TypeII"
    }
}

/// Runs every stage on one family cell. Stage errors are recorded and later stages skipped.
pub fn verify_all(spec: &FamilySpec, radius: usize, margin: usize) -> ClassificationReport {
    let mut report = ClassificationReport {
        family: spec.family,
        n: spec.n,
        m: spec.m,
        radius,
        margin,
        presentation: spec.presentation_string(),
        claim: None,
        build: None,
        connectivity: None,
        separators: BTreeMap::new(),
        orbit: None,
        treedec: None,
        axioms: None,
        lemmas: None,
        stabilizers: Vec::new(),
        abelianization: None,
        generation: None,
        planarity: None,
        checks: BTreeMap::new(),
        claim_discrepancy: Vec::new(),
        errors: Vec::new(),
        outcome: Outcome::Pass,
    };
    if let Err(e) = run(spec, radius, margin, &mut report) {
        report.outcome = match e {
            Error::InvalidParameters(_) | Error::Config(_) | Error::BallTooSmall { .. } => Outcome::ConfigError,
            Error::CompletionOverflow(_) | Error::BallTooLarge(_) => Outcome::ResourceCap,
            _ => Outcome::Fail,
        };
        report.errors.push(e.to_string());
    }
    report.finish();
    report
}

fn run(spec: &FamilySpec, radius: usize, margin: usize, report: &mut ClassificationReport) -> Result<()> {
    let claim = classify(spec)?;
    report.claim = Some(claim.clone());
    let rs = build_rewrite_system(spec, DEFAULT_RULE_CAP)?;
    let ball = build_ball(&rs, radius)?;
    report.build = Some(BuildInfo {
        reduction_order: format!("{:?}", rs.order()),
        rules: rs.rules().len(),
        ball_vertices: ball.len(),
        closure_vertices: ball.closure.len(),
        growth: ball.growth(),
    });

    // Side claims need only the group.
    let presentation = spec.abelianization();
    let splitting = claim.abelianization();
    let matches = presentation == splitting;
    report.checks.insert(
        "abelianization".into(),
        Check::new(Category::Claim, matches, format!("{presentation} vs {splitting}")),
    );
    report.abelianization = Some(AbelianComparison {
        presentation_text: presentation.to_string(),
        splitting_text: splitting.to_string(),
        presentation,
        splitting,
        matches,
    });
    let generation = generation_check(&rs, &ball, &claim, radius, DEFAULT_LENGTH_CAP);
    report.checks.insert(
        "generation".into(),
        Check::new(
            Category::Claim,
            generation.verdict == GenerationVerdict::Generates,
            format!("{:?}, {} of {}", generation.verdict, generation.reached, generation.interior),
        ),
    );
    report.generation = Some(generation);

    let k = local_connectivity(&ball, margin)?;
    report.connectivity = Some(k);
    report.checks.insert("connectivity".into(), Check::new(Category::Structural, k == 2, format!("{k}")));

    let seps = enumerate_2_separators(&ball, margin)?;
    for s in &seps {
        let tag = classify_type(&ball.closure, s).map(|t| t.tag()).unwrap_or("malformed");
        *report.separators.entry(tag.to_string()).or_default() += 1;
    }
    let orbit = select_orbit(&ball, &seps, &rs, spec, margin, report)?;
    let td = build_treedec(&ball, &orbit)?;
    let mut shapes = BTreeMap::new();
    for t in td.non_partial() {
        let s = part_structure(&td, &ball.closure, t)?;
        *shapes.entry(shape_key(&s)).or_default() += 1;
    }
    report.treedec = Some(TreedecInfo {
        parts: td.len(),
        non_partial: td.non_partial().len(),
        tree_edges: td.tree_edges.len(),
        shapes,
    });

    let axioms = verify_axioms(&td, &ball.closure, margin);
    report.checks.insert(
        "axioms".into(),
        Check::new(Category::Structural, axioms.passed(), axioms.witnesses.join("; ")),
    );
    report.axioms = Some(axioms);
    let lemmas = structural_checks(&td, &ball, &rs);
    for (key, check) in &lemmas.0 {
        let c = Check { category: Category::Structural, status: check.status, detail: format!("{} checked", check.checked) };
        let detail = match &check.witness {
            Some(w) => format!("{}; {w}", c.detail),
            None => c.detail.clone(),
        };
        report.checks.insert(format!("lemma {key}"), Check { detail, ..c });
    }
    report.lemmas = Some(lemmas);

    report.checks.insert("part structure".into(), part_check(spec, &td, &ball));
    report.checks.insert("torsos".into(), torso_check(spec, &td, &ball, &rs, &orbit.offset));

    report.stabilizers = stabilizer_comparisons(&claim, &td, &ball, &rs, margin);
    let stab_check = if report.stabilizers.is_empty() {
        Check::skipped(Category::Claim, "no finite part stabilizer predicted")
    } else if report.stabilizers.iter().all(|s| s.computed.is_empty()) {
        Check::skipped(Category::Claim, "no non-partial part contains the identity")
    } else {
        let bad: Vec<&str> = report
            .stabilizers
            .iter()
            .filter(|s| !s.matches && !s.computed.is_empty())
            .map(|s| s.factor.as_str())
            .collect();
        Check::new(Category::Claim, bad.is_empty(), if bad.is_empty() { "all match".into() } else { bad.join(", ") })
    };
    report.checks.insert("stabilizers".into(), stab_check);

    let torsos = torso_planarity_report(&td, &ball, margin);
    report.checks.insert(
        "planarity consistency".into(),
        Check::new(
            Category::Structural,
            torsos.consistent,
            format!("interior planar: {}, torsos planar: {}", torsos.interior_planar, torsos.graph_planar),
        ),
    );
    let windows = (spec.family == Family::P7).then(|| window_verdicts(&rs, &orbit.offset, window_base(spec)));
    let group_torso_planar = group_torso(spec, &rs).map(|t| planar_graph(&t));
    let planar = torsos.graph_planar
        && group_torso_planar.unwrap_or(true)
        && windows.as_ref().is_none_or(|w| w.planar.iter().all(|&p| p));
    let expected = expected_planar(spec);
    let stable = windows.as_ref().is_none_or(|w| w.stable);
    report.checks.insert(
        "planarity".into(),
        Check::new(
            Category::Claim,
            planar == expected && stable,
            format!("computed planar: {planar}, claimed planar: {expected}, window-stable: {stable}"),
        ),
    );
    report.planarity = Some(PlanaritySection { torsos, group_torso_planar, windows, planar, expected });
    Ok(())
}

/// Torso of the finite cycle part through `ε`, built from the group: the `a`-cycle for P5 and
/// the `(b, c)`-cycle for P6.
pub fn group_torso(spec: &FamilySpec, rs: &RewriteSystem) -> Option<Graph> {
    let (pattern, len) = match spec.family {
        Family::P5 => (vec![SYM_A], 2 * spec.n as usize),
        Family::P6 => (vec![SYM_B, SYM_C], 4 * spec.n as usize),
        _ => return None,
    };
    cycle_torso(rs, &pattern, &rs.nf(&expected_offset(spec)), 4 * len)
}

/// Smallest window over which the line torso is compared with the template.
pub fn window_base(spec: &FamilySpec) -> usize {
    2 * spec.n as usize + 2
}

fn select_orbit(
    ball: &CayleyBall,
    seps: &[Separation],
    rs: &RewriteSystem,
    spec: &FamilySpec,
    margin: usize,
    report: &mut ClassificationReport,
) -> Result<NestedOrbit> {
    let first = extract_nested_orbit(ball, seps, rs, margin);
    let expected = expected_kind(spec);
    let (first_kind, first_offset) = match &first {
        Ok(o) => (o.kind.tag().to_string(), display(ball, &o.offset)),
        Err(e) => (format!("none: {e}"), String::new()),
    };
    let type_iii = first.as_ref().map_or(0, |o| usize::from(o.kind.tag() == "TypeIII"));
    report.checks.insert(
        "orbit type".into(),
        Check::new(
            Category::Structural,
            first_kind == expected && type_iii == 0,
            format!("first nested orbit is {first_kind}, expected {expected}"),
        ),
    );
    let orbit = extract_orbit_with_offset(ball, seps, rs, margin, &expected_offset(spec))
        .or_else(|_| extract_nested_orbit_of(ball, seps, rs, margin, Some(expected)))
        .or(first)?;
    report.orbit = Some(OrbitInfo {
        first_kind,
        first_offset,
        kind: orbit.kind.tag().to_string(),
        offset: display(ball, &orbit.offset),
        translates: orbit.separations.len(),
        invalid_translates: orbit.invalid_translates,
        type_iii_selected: type_iii,
    });
    Ok(orbit)
}

fn shape_key(s: &PartStructure) -> String {
    match s.shape {
        PartShape::Cycle { length } => format!("cycle {length} {}", s.label_period()),
        PartShape::Matching { edges } => format!("matching {edges} {}", s.label_period()),
        PartShape::Path { length } => format!("path {length} {}", s.label_period()),
        PartShape::Other { vertices, edges } => format!("other {vertices}/{edges}"),
    }
}

fn only(labels: &str, l: char) -> bool {
    !labels.is_empty() && labels.chars().all(|c| c == l)
}

fn alternating(s: &PartStructure, pair: &str) -> bool {
    s.has_cyclic_period(pair)
}

fn part_check(spec: &FamilySpec, td: &TreeDecomposition, ball: &CayleyBall) -> Check {
    let n = spec.n as usize;
    let m = spec.m.unwrap_or(0) as usize;
    let parts = td.non_partial();
    if parts.is_empty() {
        return Check::skipped(Category::Structural, "no non-partial parts in the ball");
    }
    if spec.family == Family::P2 && n == 1 {
        return Check::skipped(Category::Structural, "degenerate n = 1, shapes recorded only");
    }
    let structures: Vec<(usize, PartStructure)> =
        parts.iter().filter_map(|&t| part_structure(td, &ball.closure, t).ok().map(|s| (t, s))).collect();
    let fits = |s: &PartStructure| match (spec.family, s.shape) {
        (Family::P1, PartShape::Cycle { length }) => length == 2 * n && alternating(s, "ab"),
        (Family::P2, PartShape::Cycle { length }) => length == 4 * n,
        (Family::P3, PartShape::Cycle { length }) => {
            (length == 2 * n && alternating(s, "ab")) || (length == 2 * m && alternating(s, "bc"))
        }
        (Family::P4, PartShape::Cycle { length }) => length == 4 * n && s.has_cyclic_period("bcba"),
        (Family::P5, PartShape::Cycle { length }) => length == 2 * n && only(&s.labels, 'a'),
        (Family::P5, PartShape::Matching { edges }) => edges == m && only(&s.labels, 'b'),
        (Family::P6, PartShape::Cycle { length }) => length == 4 * n && alternating(s, "bc"),
        (Family::P6 | Family::P7, PartShape::Matching { edges }) => edges == m && only(&s.labels, 'a'),
        _ => false,
    };
    if let Some((t, s)) = structures.iter().find(|(_, s)| !fits(s)) {
        return Check::new(Category::Structural, false, format!("part {t} is {}", shape_key(s)));
    }
    if spec.family == Family::P3 && n != m {
        let len = |t: usize| match structures.iter().find(|(p, _)| *p == t).map(|(_, s)| s.shape) {
            Some(PartShape::Cycle { length }) => Some(length),
            _ => None,
        };
        for &(s, t) in &td.tree_edges {
            if let (Some(x), Some(y)) = (len(s), len(t)) {
                if x == y {
                    return Check::new(Category::Structural, false, format!("adjacent parts {s}, {t} both of length {x}"));
                }
            }
        }
    }
    Check::new(Category::Structural, true, format!("{} parts", structures.len()))
}

fn torso_check(
    spec: &FamilySpec,
    td: &TreeDecomposition,
    ball: &CayleyBall,
    rs: &RewriteSystem,
    offset: &Word,
) -> Check {
    let n = spec.n as usize;
    let (two_n, label) = match spec.family {
        Family::P5 => (2 * n, 'a'),
        Family::P6 => (4 * n, 'b'),
        Family::P7 => {
            let base = window_base(spec);
            let windows = [base, 2 * base, 3 * base];
            let bad: Vec<usize> = windows
                .iter()
                .copied()
                .filter(|&w| !isomorphic(&line_window_torso(rs, offset, w), &r_window(2 * n + 1, w).graph))
                .collect();
            return Check::new(
                Category::Structural,
                bad.is_empty(),
                if bad.is_empty() { format!("R({}) windows {windows:?}", 2 * n + 1) } else { format!("windows {bad:?} differ") },
            );
        }
        _ => return Check::skipped(Category::Structural, "no torso template for this family"),
    };
    let template = match construct_V(two_n) {
        Ok(t) => t,
        Err(e) => return Check::new(Category::Structural, false, e.to_string()),
    };
    let Some(built) = group_torso(spec, rs) else {
        return Check::new(Category::Structural, false, "the part through e does not close");
    };
    if !isomorphic(&built, &template.graph) {
        return Check::new(
            Category::Structural,
            false,
            format!("torso through e has {} vertices and {} edges", built.len(), built.edge_count()),
        );
    }
    let mut count = 0;
    for t in td.non_partial() {
        let Ok(s) = part_structure(td, &ball.closure, t) else { continue };
        if !matches!(s.shape, PartShape::Cycle { .. }) || !s.labels.contains(label) {
            continue;
        }
        let Ok(tor) = torso(td, &ball.closure, t) else { continue };
        count += 1;
        if !isomorphic(&tor, &template.graph) {
            return Check::new(
                Category::Structural,
                false,
                format!("torso of part {t} has {} vertices and {} edges", tor.len(), tor.edge_count()),
            );
        }
    }
    Check::new(Category::Structural, true, format!("torso through e and {count} ball torsos match V({two_n})"))
}

fn stabilizer_comparisons(
    claim: &SplittingClaim,
    td: &TreeDecomposition,
    ball: &CayleyBall,
    rs: &RewriteSystem,
    margin: usize,
) -> Vec<StabilizerComparison> {
    let at_identity: Vec<usize> =
        td.parts_containing(ball.identity()).into_iter().filter(|&t| !td.partial[t]).collect();
    let computed: Vec<(usize, Vec<Word>)> = at_identity
        .iter()
        .filter_map(|&t| stabilizer_elements(td, ball, rs, t, margin).ok().map(|c| (t, c)))
        .collect();
    let mut out = Vec::new();
    for f in claim.part_stabilizers() {
        let gens: Vec<Word> = f.generators.iter().map(|g| rs.nf(g)).collect();
        let cap = f.order.unwrap_or(0) * 4 + 16;
        let predicted = subgroup_closure(rs, &gens, cap).unwrap_or_default();
        let want: HashSet<&Word> = predicted.iter().collect();
        // The part of the factor is the one at ε containing its generators.
        let own: Vec<&Vec<Word>> = computed
            .iter()
            .filter(|(t, _)| gens.iter().all(|g| ball.closure_index(g).is_some_and(|v| td.contains(*t, v))))
            .map(|(_, c)| c)
            .collect();
        let matches = own.iter().any(|c| c.iter().collect::<HashSet<_>>() == want);
        out.push(StabilizerComparison {
            factor: format!("{} = <{}>", f.group, f.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")),
            generators: f.generators.iter().map(|g| g.to_string()).collect(),
            predicted: display_sorted(ball, &predicted),
            computed: own.iter().map(|c| display_sorted(ball, c)).collect(),
            matches,
        });
    }
    out
}
