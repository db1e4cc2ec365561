//! Shortlex Knuth–Bendix completion and normal forms.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use super::{shortlex_cmp, FamilySpec, Word, SYM_A, SYM_A_INV};
use crate::Error;

pub const DEFAULT_RULE_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

/// A reduction ordering on words, parameterized by a rank per symbol (`a, A, b, c`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionOrder {
    /// Length first, then lexicographic by rank.
    Shortlex([u8; 4]),
    /// Recursive path ordering read from the right.
    Recursive([u8; 4]),
}

impl ReductionOrder {
    pub const STANDARD_RANKS: [u8; 4] = [0, 1, 2, 3];
    /// `b < c < a < A`.
    pub const DEFAULT_RECURSIVE_RANKS: [u8; 4] = [2, 3, 0, 1];

    pub fn cmp(&self, u: &[u8], v: &[u8]) -> Ordering {
        match *self {
            ReductionOrder::Shortlex(rank) => u.len().cmp(&v.len()).then_with(|| {
                u.iter().map(|&s| rank[s as usize]).cmp(v.iter().map(|&s| rank[s as usize]))
            }),
            ReductionOrder::Recursive(rank) => recursive_cmp(u, v, &rank),
        }
    }
}

fn recursive_cmp(u: &[u8], v: &[u8], rank: &[u8; 4]) -> Ordering {
    let (mut u, mut v) = (u, v);
    loop {
        match (u.split_last(), v.split_last()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some((&a, u1)), Some((&b, v1))) => {
                let (ra, rb) = (rank[a as usize], rank[b as usize]);
                match ra.cmp(&rb) {
                    Ordering::Equal => (u, v) = (u1, v1),
                    // u < v iff u <= v1
                    Ordering::Greater => {
                        return if recursive_cmp(u, v1, rank).is_gt() {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        }
                    }
                    Ordering::Less => {
                        return if recursive_cmp(u1, v, rank).is_lt() {
                            Ordering::Less
                        } else {
                            Ordering::Greater
                        }
                    }
                }
            }
        }
    }
}

/// Result of [`RewriteSystem::element_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ElementOrder {
    Finite(usize),
    Unbounded(usize),
}

/// A confluent, terminating rewriting system for one family.
///
/// Immutable once built; all queries take `&self`.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    spec: FamilySpec,
    order: ReductionOrder,
    rules: Vec<Rule>,
    complete: bool,
    index: RuleIndex,
}

/// Left-hand sides in a trie read from the right, so reduction scans suffixes of the output.
#[derive(Clone, Debug)]
struct RuleIndex {
    map: HashMap<Vec<u8>, Vec<u8>>,
    children: Vec<[u32; 4]>,
    terminal: Vec<bool>,
}

const NO_CHILD: u32 = u32::MAX;

impl Default for RuleIndex {
    fn default() -> Self {
        RuleIndex { map: HashMap::new(), children: vec![[NO_CHILD; 4]], terminal: vec![false] }
    }
}

impl RuleIndex {
    fn insert(&mut self, lhs: Vec<u8>, rhs: Vec<u8>) {
        let mut node = 0usize;
        for &s in lhs.iter().rev() {
            let next = self.children[node][s as usize];
            node = if next == NO_CHILD {
                self.children.push([NO_CHILD; 4]);
                self.terminal.push(false);
                let id = self.children.len() - 1;
                self.children[node][s as usize] = id as u32;
                id
            } else {
                next as usize
            };
        }
        self.terminal[node] = true;
        self.map.insert(lhs, rhs);
    }

    fn remove(&mut self, lhs: &[u8]) {
        self.map.remove(lhs);
        let mut node = 0usize;
        for &s in lhs.iter().rev() {
            node = self.children[node][s as usize] as usize;
        }
        self.terminal[node] = false;
    }

    /// Length of the shortest left-hand side that is a suffix of `w`.
    fn suffix_match(&self, w: &[u8]) -> Option<usize> {
        let mut node = 0usize;
        for (k, &s) in w.iter().rev().enumerate() {
            let next = self.children[node][s as usize];
            if next == NO_CHILD {
                return None;
            }
            node = next as usize;
            if self.terminal[node] {
                return Some(k + 1);
            }
        }
        None
    }

    fn reduce(&self, w: &[u8]) -> Vec<u8> {
        self.reduce_within(w, u64::MAX).expect("unbounded reduction").0
    }

    /// Reduces `w` using at most `limit` rewrite steps; returns the result and the steps used.
    fn reduce_within(&self, w: &[u8], limit: u64) -> Option<(Vec<u8>, u64)> {
        let mut out: Vec<u8> = Vec::with_capacity(w.len());
        let mut input: Vec<u8> = w.iter().rev().copied().collect();
        let mut steps = 0u64;
        while let Some(s) = input.pop() {
            out.push(s);
            if let Some(l) = self.suffix_match(&out) {
                steps += 1;
                if steps > limit {
                    return None;
                }
                let rhs = &self.map[&out[out.len() - l..]];
                input.extend(rhs.iter().rev());
                out.truncate(out.len() - l);
            }
        }
        Some((out, steps))
    }

    fn is_reducible(&self, w: &[u8]) -> bool {
        (1..=w.len()).any(|end| self.suffix_match(&w[..end]).is_some())
    }

    fn sorted_rules(&self) -> Vec<(Vec<u8>, Vec<u8>)> {
        let mut v: Vec<_> = self.map.iter().map(|(l, r)| (l.clone(), r.clone())).collect();
        v.sort_by(|x, y| shortlex_cmp(&x.0, &y.0));
        v
    }
}

struct Completion {
    index: RuleIndex,
    order: ReductionOrder,
    cap: usize,
    additions: usize,
    /// Rewrite steps left before completion is abandoned.
    steps_left: std::cell::Cell<u64>,
}

/// Rewrite steps allowed per unit of rule cap during completion.
const STEPS_PER_RULE: u64 = 20_000;

impl Completion {
    fn new(index: RuleIndex, order: ReductionOrder, cap: usize) -> Self {
        Completion {
            index,
            order,
            cap,
            additions: 0,
            steps_left: std::cell::Cell::new((cap as u64).saturating_mul(STEPS_PER_RULE)),
        }
    }

    fn reduce(&self, w: &[u8]) -> Result<Vec<u8>, Error> {
        let left = self.steps_left.get();
        match self.index.reduce_within(w, left) {
            Some((out, used)) => {
                self.steps_left.set(left - used);
                Ok(out)
            }
            None => Err(Error::CompletionOverflow(self.cap)),
        }
    }

    fn add_equation(&mut self, lhs: Vec<u8>, rhs: Vec<u8>) -> Result<(), Error> {
        let mut work = vec![(lhs, rhs)];
        while let Some((l, r)) = work.pop() {
            let l = self.reduce(&l)?;
            let r = self.reduce(&r)?;
            if l == r {
                continue;
            }
            let (lhs, rhs) = if self.order.cmp(&l, &r).is_gt() { (l, r) } else { (r, l) };
            self.additions += 1;
            if self.additions > self.cap.saturating_mul(50) {
                return Err(Error::CompletionOverflow(self.cap));
            }
            // Rules whose left side now contains `lhs` go back to the worklist.
            let mut displaced = Vec::new();
            for (ol, or) in self.index.sorted_rules() {
                if contains(&ol, &lhs) {
                    displaced.push((ol, or));
                }
            }
            for (ol, or) in &displaced {
                self.index.remove(ol);
                work.push((ol.clone(), or.clone()));
            }
            self.index.insert(lhs, rhs);
            // Keep right-hand sides irreducible.
            let updates: Vec<_> = self
                .index
                .map
                .iter()
                .filter_map(|(l, r)| {
                    match self.reduce(r) {
                        Ok(nr) if nr == *r => None,
                        other => Some(other.map(|nr| (l.clone(), nr))),
                    }
                })
                .collect::<Result<_, _>>()?;
            for (l, r) in updates {
                self.index.map.insert(l, r);
            }
            if self.index.map.len() > self.cap {
                return Err(Error::CompletionOverflow(self.cap));
            }
            work.sort_by(|x, y| shortlex_cmp(&y.0, &x.0));
        }
        Ok(())
    }

    /// Unresolved critical pairs, sorted by superposition in shortlex order.
    fn unresolved_pairs(&self) -> Result<Vec<(Vec<u8>, Vec<u8>, Vec<u8>)>, Error> {
        let rules = self.index.sorted_rules();
        let mut out = Vec::new();
        for (l1, r1) in &rules {
            for (l2, r2) in &rules {
                let max_k = l1.len().min(l2.len());
                for k in 1..max_k {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let mut sup = l1.clone();
                    sup.extend_from_slice(&l2[k..]);
                    let mut t1 = r1.clone();
                    t1.extend_from_slice(&l2[k..]);
                    let mut t2 = l1[..l1.len() - k].to_vec();
                    t2.extend_from_slice(r2);
                    let n1 = self.reduce(&t1)?;
                    let n2 = self.reduce(&t2)?;
                    if n1 != n2 {
                        out.push((sup, n1, n2));
                    }
                }
            }
        }
        out.sort_by(|x, y| {
            shortlex_cmp(&x.0, &y.0)
                .then_with(|| shortlex_cmp(&x.1, &y.1))
                .then_with(|| shortlex_cmp(&x.2, &y.2))
        });
        out.dedup();
        Ok(out)
    }
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Runs Knuth–Bendix completion on the family presentation under the family's reduction order.
pub fn build_rewrite_system(spec: &FamilySpec, rule_cap: usize) -> Result<RewriteSystem, Error> {
    build_rewrite_system_with_order(spec, rule_cap, spec.reduction_order())
}

pub fn build_rewrite_system_with_order(
    spec: &FamilySpec,
    rule_cap: usize,
    order: ReductionOrder,
) -> Result<RewriteSystem, Error> {
    spec.validate()?;
    if rule_cap == 0 {
        return Err(Error::Config("rule_cap must be at least 1".into()));
    }
    let mut kb = Completion::new(RuleIndex::default(), order, rule_cap);
    if !spec.family.a_is_involution() {
        kb.add_equation(vec![SYM_A, SYM_A_INV], vec![])?;
        kb.add_equation(vec![SYM_A_INV, SYM_A], vec![])?;
    }
    for r in spec.relators() {
        kb.add_equation(r.0, vec![])?;
    }
    loop {
        let pending = kb.unresolved_pairs()?;
        if pending.is_empty() {
            break;
        }
        for (_, l, r) in pending {
            kb.add_equation(l, r)?;
        }
    }
    let rules = kb
        .index
        .sorted_rules()
        .into_iter()
        .map(|(l, r)| Rule { lhs: Word(l), rhs: Word(r) })
        .collect();
    Ok(RewriteSystem { spec: *spec, order, rules, complete: true, index: kb.index })
}

impl RewriteSystem {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn order(&self) -> ReductionOrder {
        self.order
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Normal form of `w`. Surface `A` in involution families is read as `a`.
    pub fn nf(&self, w: &Word) -> Word {
        if self.spec.family.a_is_involution() && w.0.contains(&SYM_A_INV) {
            let folded: Vec<u8> =
                w.0.iter().map(|&s| if s == SYM_A_INV { SYM_A } else { s }).collect();
            return Word(self.index.reduce(&folded));
        }
        Word(self.index.reduce(&w.0))
    }

    pub fn nf_slice(&self, w: &[u8]) -> Vec<u8> {
        self.index.reduce(w)
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        !self.index.is_reducible(&w.0)
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Word {
        self.nf(&u.concat(v))
    }

    pub fn invert(&self, u: &Word) -> Word {
        self.nf(&self.spec.invert(u))
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.nf(w).is_empty()
    }

    /// Least `k <= cap` with `w^k = 1`.
    pub fn element_order(&self, w: &Word, cap: usize) -> ElementOrder {
        let x = self.nf(w);
        let mut p = Word::empty();
        for k in 1..=cap {
            p = self.multiply(&p, &x);
            if p.is_empty() {
                return ElementOrder::Finite(k);
            }
        }
        ElementOrder::Unbounded(cap)
    }

    /// Re-checks local confluence of the final rule set.
    pub fn critical_pairs_resolve(&self) -> bool {
        let kb = Completion::new(self.index.clone(), self.order, usize::MAX);
        kb.unresolved_pairs().map(|p| p.is_empty()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    fn rs(f: Family, n: u32, m: Option<u32>) -> RewriteSystem {
        build_rewrite_system(&FamilySpec::new(f, n, m).unwrap(), DEFAULT_RULE_CAP).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn p1_relators_die() {
        let sys = rs(Family::P1, 2, None);
        assert!(sys.is_identity(&w("bb")));
        assert!(sys.is_identity(&w("baba")));
        let sys = rs(Family::P1, 3, None);
        assert!(sys.is_identity(&w("bababa")));
        assert!(sys.is_identity(&w("bb")));
    }

    #[test]
    fn p4_relator_dies() {
        let sys = rs(Family::P4, 2, None);
        assert!(sys.is_identity(&w("bcbabcba")));
    }

    #[test]
    fn p5_power_of_a() {
        let sys = rs(Family::P5, 2, Some(2));
        assert!(sys.is_identity(&w("aaaa")));
        assert!(!sys.is_identity(&w("aa")));
    }

    #[test]
    fn identity_and_inverse() {
        let sys = rs(Family::P1, 2, None);
        let ba = sys.nf(&w("ba"));
        assert!(sys.multiply(&ba, &ba).is_empty());
        for f in Family::ALL {
            let s = rs(f, 2, Some(2));
            assert_eq!(s.invert(&w("b")), w("b"));
            let u = s.nf(&w("ab"));
            assert_eq!(s.multiply(&u, &Word::empty()), u);
            assert!(s.multiply(&u, &s.invert(&u)).is_empty());
        }
    }

    #[test]
    fn element_orders() {
        let sys = rs(Family::P1, 3, None);
        assert_eq!(sys.element_order(&w("ba"), 10), ElementOrder::Finite(3));
        assert_eq!(sys.element_order(&w("a"), 50), ElementOrder::Unbounded(50));
        let p7 = rs(Family::P7, 1, Some(2));
        assert_eq!(p7.element_order(&w("bc"), 50), ElementOrder::Unbounded(50));
    }

    #[test]
    fn capital_a_folds_in_involution_families() {
        let sys = rs(Family::P3, 2, Some(2));
        assert_eq!(sys.nf(&w("A")), w("a"));
        assert!(sys.is_identity(&w("aA")));
    }

    #[test]
    fn nf_is_idempotent_and_irreducible() {
        let sys = rs(Family::P6, 1, Some(3));
        for s in ["abcabc", "cbacbacba", "aaabbbccc", "bcbcbcbc", "abcbabcb"] {
            let x = sys.nf(&w(s));
            assert_eq!(sys.nf(&x), x);
            assert!(sys.is_normal(&x));
        }
    }

    #[test]
    fn tiny_cap_overflows() {
        let spec = FamilySpec::new(Family::P3, 3, Some(3)).unwrap();
        assert!(matches!(build_rewrite_system(&spec, 2), Err(Error::CompletionOverflow(2))));
    }

    #[test]
    fn completion_is_reproducible() {
        let spec = FamilySpec::new(Family::P2, 2, None).unwrap();
        let a = build_rewrite_system(&spec, DEFAULT_RULE_CAP).unwrap();
        let b = build_rewrite_system(&spec, DEFAULT_RULE_CAP).unwrap();
        assert_eq!(a.rules(), b.rules());
        assert!(a.critical_pairs_resolve());
    }
}
