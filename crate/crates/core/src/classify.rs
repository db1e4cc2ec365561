//! The splitting claimed for each family and the checks that compare it with the group.

use std::collections::HashSet;

use serde::Serialize;

use crate::cayley::CayleyBall;
use crate::group::{
    splitting_abelianization, AbelianInvariants, Factor, Family, FamilySpec, RewriteSystem, Splitting, Word,
};
use crate::Result;

/// The five splitting shapes; several families share one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimShape {
    FreeProduct,
    Hnn,
    DihedralAmalgam,
    CyclicDihedralAmalgam,
    InfiniteDihedralAmalgam,
}

/// A vertex group of the claim, given by generator words of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorClaim {
    pub group: String,
    pub generators: Vec<Word>,
    /// Order of the factor, `None` when infinite.
    pub order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingClaim {
    pub family: Family,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub shape: ClaimShape,
    pub name: String,
    pub factors: Vec<FactorClaim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_letter: Option<Word>,
    /// The claim is recorded for comparison only and is expected to disagree with the group.
    pub under_test: bool,
    #[serde(skip)]
    pub splitting: Splitting,
}

impl SplittingClaim {
    /// Every generator word of the claim, stable letter included.
    pub fn generator_words(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self.factors.iter().flat_map(|f| f.generators.clone()).collect();
        out.extend(self.stable_letter.clone());
        out
    }

    /// Factors that should appear as stabilizers of finite parts.
    pub fn part_stabilizers(&self) -> Vec<&FactorClaim> {
        match self.family {
            Family::P1 | Family::P4 => vec![&self.factors[0]],
            _ => self.factors.iter().filter(|f| f.order.is_some()).collect(),
        }
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        splitting_abelianization(&self.splitting)
    }
}

fn w(s: &str) -> Word {
    Word::parse(s).expect("static word")
}

fn factor(f: &Factor, gens: &[&str]) -> FactorClaim {
    let order = match *f {
        Factor::Cyclic(k) => Some(k as usize),
        Factor::Dihedral(k) => Some(2 * k as usize),
        Factor::InfiniteDihedral => None,
    };
    FactorClaim { group: f.name(), generators: gens.iter().map(|g| w(g)).collect(), order }
}

/// The splitting the family is claimed to have.
pub fn classify(spec: &FamilySpec) -> Result<SplittingClaim> {
    spec.validate()?;
    let n = spec.n;
    let m = spec.m.unwrap_or(0);
    let bc_n = "bc".repeat(n as usize);
    let a_n = "a".repeat(n as usize);
    let x = |k: u32| vec![1; k as usize];
    let (shape, splitting, factors, stable_letter) = match spec.family {
        Family::P1 | Family::P4 => {
            let (l, r) = (Factor::Cyclic(n), Factor::Cyclic(2));
            let gen = if spec.family == Family::P1 { "ba" } else { "bcba" };
            let factors = vec![factor(&l, &[gen]), factor(&r, &["b"])];
            (ClaimShape::FreeProduct, Splitting::FreeProduct(l, r), factors, None)
        }
        Family::P2 => {
            let base = Factor::Dihedral(n);
            let factors = vec![factor(&base, &["bAba", "b"])];
            // a⁻¹·b·a = b·(bAba), so a conjugates yx to y.
            let s = Splitting::Hnn { base, from: vec![2, 1], to: vec![2] };
            (ClaimShape::Hnn, s, factors, Some(w("a")))
        }
        Family::P3 => {
            let (l, r) = (Factor::Dihedral(n), Factor::Dihedral(m));
            let factors = vec![factor(&l, &["ba", "b"]), factor(&r, &["bc", "b"])];
            let s = Splitting::Amalgam { left: l, right: r, left_elem: vec![2], right_elem: vec![2] };
            (ClaimShape::DihedralAmalgam, s, factors, None)
        }
        Family::P5 => {
            let (l, r) = (Factor::Cyclic(2 * n), Factor::Dihedral(m));
            let factors = vec![factor(&l, &["a"]), factor(&r, &[&format!("b{a_n}"), "b"])];
            // aⁿ = b·(baⁿ).
            let s = Splitting::Amalgam { left: l, right: r, left_elem: x(n), right_elem: vec![2, 1] };
            (ClaimShape::CyclicDihedralAmalgam, s, factors, None)
        }
        Family::P6 => {
            let (l, r) = (Factor::Dihedral(2 * n), Factor::Dihedral(m));
            let factors = vec![factor(&l, &["bc", "b"]), factor(&r, &[&format!("a{bc_n}"), "a"])];
            // (bc)ⁿ = a·(a(bc)ⁿ).
            let s = Splitting::Amalgam { left: l, right: r, left_elem: x(n), right_elem: vec![2, 1] };
            (ClaimShape::DihedralAmalgam, s, factors, None)
        }
        Family::P7 => {
            let (l, r) = (Factor::InfiniteDihedral, Factor::Dihedral(m));
            let factors = vec![factor(&l, &["bc", "b"]), factor(&r, &[&format!("a{bc_n}b"), "a"])];
            let mut left_elem = x(n);
            left_elem.push(2);
            let s = Splitting::Amalgam { left: l, right: r, left_elem, right_elem: vec![2, 1] };
            (ClaimShape::InfiniteDihedralAmalgam, s, factors, None)
        }
    };
    Ok(SplittingClaim {
        family: spec.family,
        n,
        m: spec.m,
        shape,
        name: splitting.name(),
        factors,
        stable_letter,
        under_test: spec.family == Family::P4,
        splitting,
    })
}

/// Offset `x⁻¹y` of the separators `{x, y}` used by the decomposition of each family.
pub fn expected_offset(spec: &FamilySpec) -> Word {
    let n = spec.n as usize;
    match spec.family {
        Family::P1 | Family::P2 | Family::P3 | Family::P4 => w("b"),
        Family::P5 => w(&"a".repeat(n)),
        Family::P6 => w(&"bc".repeat(n)),
        Family::P7 => w(&format!("{}b", "bc".repeat(n))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationVerdict {
    Generates,
    FailsToGenerate,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerationCheck {
    pub covered: f64,
    pub reached: usize,
    pub interior: usize,
    pub verdict: GenerationVerdict,
}

/// Closure of the claim's generator words inside the ball, compared with the ball of radius
/// `radius - 2`.
///
/// Products are built breadth-first up to `length_cap` factors, keeping only elements of the
/// ball. If the closure stops growing before the cap without covering the interior, the
/// claim fails to generate.
pub fn generation_check(
    rs: &RewriteSystem,
    ball: &CayleyBall,
    claim: &SplittingClaim,
    radius: usize,
    length_cap: usize,
) -> GenerationCheck {
    let mut gens: Vec<Word> = Vec::new();
    for g in claim.generator_words() {
        gens.push(rs.nf(&g));
        gens.push(rs.invert(&rs.nf(&g)));
    }
    let inner = radius.saturating_sub(2);
    let interior: HashSet<usize> = (0..ball.len()).filter(|&v| ball.dist[v] <= inner).collect();
    let mut seen: HashSet<usize> = HashSet::from([ball.identity()]);
    let mut frontier = vec![ball.identity()];
    let mut saturated = false;
    for _ in 0..length_cap {
        let mut next = Vec::new();
        for &v in &frontier {
            for g in &gens {
                if let Some(u) = ball.index_of(&rs.multiply(&ball.words[v], g)) {
                    if seen.insert(u) {
                        next.push(u);
                    }
                }
            }
        }
        if next.is_empty() {
            saturated = true;
            break;
        }
        next.sort_unstable();
        frontier = next;
    }
    let reached = seen.iter().filter(|v| interior.contains(v)).count();
    let verdict = if reached == interior.len() {
        GenerationVerdict::Generates
    } else if saturated {
        GenerationVerdict::FailsToGenerate
    } else {
        GenerationVerdict::Inconclusive
    };
    GenerationCheck {
        covered: reached as f64 / interior.len().max(1) as f64,
        reached,
        interior: interior.len(),
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_names() {
        let c = |f, n, m| classify(&FamilySpec::new(f, n, m).unwrap()).unwrap().name;
        assert_eq!(c(Family::P1, 5, None), "Z_5 * Z_2");
        assert_eq!(c(Family::P5, 2, Some(3)), "Z_4 *_Z_2 D_6");
        assert_eq!(c(Family::P7, 1, Some(2)), "D_inf *_Z_2 D_4");
        assert_eq!(c(Family::P6, 2, Some(3)), "D_8 *_Z_2 D_6");
        assert_eq!(c(Family::P2, 3, None), "D_6 *_Z_2 (t)");
    }

    #[test]
    fn p4_is_flagged() {
        let claim = classify(&FamilySpec::new(Family::P4, 2, None).unwrap()).unwrap();
        assert!(claim.under_test);
        assert_eq!(claim.part_stabilizers().len(), 1);
    }
}
