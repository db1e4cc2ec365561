//! Standard presentations of the splittings (free products, amalgams, HNN extensions).

use serde::{Deserialize, Serialize};

use super::smith::{abelian_invariants, AbelianInvariants};

/// A vertex group of a splitting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factor {
    /// `Z_k = <x | x^k>`.
    Cyclic(u32),
    /// `D_2k = <x, y | y^2, x^k, (yx)^2>`.
    Dihedral(u32),
    /// `D_inf = <x, y | y^2, (yx)^2>`.
    InfiniteDihedral,
}

impl Factor {
    fn generator_names(&self) -> &'static [&'static str] {
        match self {
            Factor::Cyclic(_) => &["x"],
            _ => &["x", "y"],
        }
    }

    /// Relators as signed generator indices (`+(i+1)` for generator `i`, negative for inverses).
    fn relators(&self) -> Vec<Vec<i32>> {
        match *self {
            Factor::Cyclic(k) => vec![vec![1; k as usize]],
            Factor::Dihedral(k) => vec![vec![2, 2], vec![1; k as usize], vec![2, 1, 2, 1]],
            Factor::InfiniteDihedral => vec![vec![2, 2], vec![2, 1, 2, 1]],
        }
    }

    pub fn name(&self) -> String {
        match self {
            Factor::Cyclic(k) => format!("Z_{k}"),
            Factor::Dihedral(k) => format!("D_{}", 2 * k),
            Factor::InfiniteDihedral => "D_inf".into(),
        }
    }
}

/// A splitting with its edge identifications written over the factors' local generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Splitting {
    FreeProduct(Factor, Factor),
    /// `left *_{Z_2} right`, identifying `left_elem` with `right_elem`.
    Amalgam { left: Factor, right: Factor, left_elem: Vec<i32>, right_elem: Vec<i32> },
    /// `base *_{Z_2} (t)` with `t · from · t^-1 = to`.
    Hnn { base: Factor, from: Vec<i32>, to: Vec<i32> },
}

impl Splitting {
    pub fn name(&self) -> String {
        match self {
            Splitting::FreeProduct(l, r) => format!("{} * {}", l.name(), r.name()),
            Splitting::Amalgam { left, right, .. } => {
                format!("{} *_Z_2 {}", left.name(), right.name())
            }
            Splitting::Hnn { base, .. } => format!("{} *_Z_2 (t)", base.name()),
        }
    }
}

/// A finite presentation with named generators and signed-index relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
}

impl SplittingPresentation {
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generators.len()];
                for &g in r {
                    row[g.unsigned_abs() as usize - 1] += g.signum() as i64;
                }
                row
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let rel: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&g| {
                        let name = &self.generators[g.unsigned_abs() as usize - 1];
                        if g < 0 {
                            format!("{name}^-1")
                        } else {
                            name.clone()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect();
        format!("<{} | {}>", self.generators.join(","), rel.join(", "))
    }
}

fn shift(word: &[i32], offset: i32) -> Vec<i32> {
    word.iter().map(|&g| g.signum() * (g.abs() + offset)).collect()
}

fn inverse(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|&g| -g).collect()
}

fn add_factor(p: &mut SplittingPresentation, f: &Factor, tag: &str) -> i32 {
    let offset = p.generators.len() as i32;
    for g in f.generator_names() {
        p.generators.push(format!("{g}{tag}"));
    }
    for r in f.relators() {
        p.relators.push(shift(&r, offset));
    }
    offset
}

/// Standard presentation of a splitting.
pub fn splitting_presentation(s: &Splitting) -> SplittingPresentation {
    let mut p = SplittingPresentation { generators: vec![], relators: vec![] };
    match s {
        Splitting::FreeProduct(l, r) => {
            add_factor(&mut p, l, "1");
            add_factor(&mut p, r, "2");
        }
        Splitting::Amalgam { left, right, left_elem, right_elem } => {
            let o1 = add_factor(&mut p, left, "1");
            let o2 = add_factor(&mut p, right, "2");
            let mut rel = shift(left_elem, o1);
            rel.extend(inverse(&shift(right_elem, o2)));
            p.relators.push(rel);
        }
        Splitting::Hnn { base, from, to } => {
            let o = add_factor(&mut p, base, "");
            p.generators.push("t".into());
            let t = p.generators.len() as i32;
            let mut rel = vec![t];
            rel.extend(shift(from, o));
            rel.push(-t);
            rel.extend(inverse(&shift(to, o)));
            p.relators.push(rel);
        }
    }
    p
}

pub fn splitting_abelianization(s: &Splitting) -> AbelianInvariants {
    let p = splitting_presentation(s);
    abelian_invariants(&p.relation_matrix(), p.generators.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_products() {
        let s = Splitting::FreeProduct(Factor::Cyclic(3), Factor::Cyclic(2));
        assert_eq!(splitting_abelianization(&s).torsion, vec![6]);
        let s = Splitting::FreeProduct(Factor::Cyclic(2), Factor::Cyclic(2));
        assert_eq!(splitting_abelianization(&s).torsion, vec![2, 2]);
    }

    #[test]
    fn dihedral_amalgam_over_reflections() {
        let s = Splitting::Amalgam {
            left: Factor::Dihedral(2),
            right: Factor::Dihedral(2),
            left_elem: vec![2],
            right_elem: vec![2],
        };
        let inv = splitting_abelianization(&s);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![2, 2, 2]);
    }

    #[test]
    fn hnn_has_free_rank_one() {
        let s = Splitting::Hnn { base: Factor::Dihedral(3), from: vec![2], to: vec![2, 1] };
        let p = splitting_presentation(&s);
        assert_eq!(p.generators, vec!["x", "y", "t"]);
        let inv = splitting_abelianization(&s);
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion, vec![2]);
    }
}
