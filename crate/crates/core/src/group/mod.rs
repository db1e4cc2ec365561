//! Presentation families, words over `{a, A, b, c}` and the word problem.

mod rewrite;
mod smith;
mod splitting;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

pub use rewrite::{
    build_rewrite_system, build_rewrite_system_with_order, ElementOrder, ReductionOrder, RewriteSystem,
    Rule, DEFAULT_RULE_CAP,
};
pub use smith::{abelian_invariants, smith_diagonal, AbelianInvariants};
pub use splitting::{splitting_abelianization, splitting_presentation, Factor, Splitting, SplittingPresentation};

/// Generator symbols. The numeric value is the shortlex rank: `a < A < b < c`.
pub const SYM_A: u8 = 0;
pub const SYM_A_INV: u8 = 1;
pub const SYM_B: u8 = 2;
pub const SYM_C: u8 = 3;

pub fn symbol_char(s: u8) -> char {
    match s {
        SYM_A => 'a',
        SYM_A_INV => 'A',
        SYM_B => 'b',
        SYM_C => 'c',
        _ => '?',
    }
}

/// A finite sequence of generator symbols. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Parses a word over `{a, A, b, c}`; `e`, `1` and the empty string denote the identity.
    pub fn parse(s: &str) -> Result<Word, Error> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "1" || s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|ch| match ch {
                'a' => Ok(SYM_A),
                'A' => Ok(SYM_A_INV),
                'b' => Ok(SYM_B),
                'c' => Ok(SYM_C),
                other => Err(Error::Parse(format!("unknown generator symbol {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// Shortlex comparison under `a < A < b < c`.
pub fn shortlex_cmp(x: &[u8], y: &[u8]) -> std::cmp::Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &s in &self.0 {
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        Word::parse(&s)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Word::parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::P1,
        Family::P2,
        Family::P3,
        Family::P4,
        Family::P5,
        Family::P6,
        Family::P7,
    ];

    /// Whether `a` is an involution (three-generator families).
    pub fn a_is_involution(self) -> bool {
        matches!(self, Family::P3 | Family::P4 | Family::P6 | Family::P7)
    }

    pub fn has_c(self) -> bool {
        self.a_is_involution()
    }

    pub fn needs_m(self) -> bool {
        matches!(self, Family::P3 | Family::P5 | Family::P6 | Family::P7)
    }

    /// Type I families have adhesion sets spanning an edge.
    pub fn is_type_one(self) -> bool {
        matches!(self, Family::P1 | Family::P2 | Family::P3 | Family::P4)
    }

    fn min_n(self) -> u32 {
        match self {
            Family::P1 | Family::P3 | Family::P5 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "P1" => Ok(Family::P1),
            "P2" => Ok(Family::P2),
            "P3" => Ok(Family::P3),
            "P4" => Ok(Family::P4),
            "P5" => Ok(Family::P5),
            "P6" => Ok(Family::P6),
            "P7" => Ok(Family::P7),
            other => Err(Error::Config(format!("unknown family {other:?} (expected P1..P7)"))),
        }
    }
}

/// One of the seven presentation families with its integer parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
}

impl FamilySpec {
    /// Builds and validates a spec. `m` is ignored for P1, P2 and P4.
    pub fn new(family: Family, n: u32, m: Option<u32>) -> Result<Self, Error> {
        let m = if family.needs_m() { m } else { None };
        let spec = FamilySpec { family, n, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let fam = self.family;
        if self.n < fam.min_n() {
            let collapsed = match fam {
                Family::P1 => "(ba)^1: forces a = b",
                Family::P3 => "(ba)^1: forces a = b",
                Family::P5 => "a^2: makes a an involution so a and A coincide",
                _ => "n = 0 is empty",
            };
            return Err(Error::InvalidParameters(format!(
                "{fam} requires n >= {}, got n = {}; relator {collapsed}",
                fam.min_n(),
                self.n
            )));
        }
        if fam.needs_m() {
            let m = self.m.ok_or_else(|| {
                Error::InvalidParameters(format!("{fam} requires the parameter m"))
            })?;
            if m < 2 {
                let collapsed = match fam {
                    Family::P3 => "(bc)^1: forces b = c",
                    Family::P5 => "(ba^n)^1: forces b = A^n",
                    Family::P6 => "(a(bc)^n)^1: forces a = (bc)^n",
                    _ => "(a(bc)^nb)^1: forces a = (bc)^nb",
                };
                return Err(Error::InvalidParameters(format!(
                    "{fam} requires m >= 2, got m = {m}; relator {collapsed}"
                )));
            }
        }
        Ok(())
    }

    /// The generator symbols that label edges (`A` only appears as the reverse of `a`).
    pub fn generators(&self) -> Vec<u8> {
        if self.family.has_c() {
            vec![SYM_A, SYM_B, SYM_C]
        } else {
            vec![SYM_A, SYM_B]
        }
    }

    /// The symbols of the rewriting alphabet.
    pub fn alphabet(&self) -> Vec<u8> {
        if self.family.has_c() {
            vec![SYM_A, SYM_B, SYM_C]
        } else {
            vec![SYM_A, SYM_A_INV, SYM_B]
        }
    }

    pub fn is_involution(&self, s: u8) -> bool {
        match s {
            SYM_A | SYM_A_INV => self.family.a_is_involution(),
            _ => true,
        }
    }

    pub fn inverse_symbol(&self, s: u8) -> u8 {
        match s {
            SYM_A if !self.family.a_is_involution() => SYM_A_INV,
            SYM_A_INV if !self.family.a_is_involution() => SYM_A,
            SYM_A_INV => SYM_A,
            other => other,
        }
    }

    /// Maps surface symbols into the family alphabet (`A` becomes `a` when `a` is an involution).
    pub fn canonical_word(&self, w: &Word) -> Result<Word, Error> {
        let mut out = Vec::with_capacity(w.len());
        for &s in w.symbols() {
            match s {
                SYM_A_INV if self.family.a_is_involution() => out.push(SYM_A),
                SYM_C if !self.family.has_c() => {
                    return Err(Error::Parse(format!(
                        "symbol c is not a generator of {}",
                        self.family
                    )))
                }
                other => out.push(other),
            }
        }
        Ok(Word(out))
    }

    pub fn invert(&self, w: &Word) -> Word {
        Word(w.symbols().iter().rev().map(|&s| self.inverse_symbol(s)).collect())
    }

    /// Relator words of the presentation.
    pub fn relators(&self) -> Vec<Word> {
        let n = self.n as usize;
        let m = self.m.unwrap_or(0) as usize;
        let w = |s: &str| Word::parse(s).expect("static word");
        let a = w("a");
        let b = w("b");
        let c = w("c");
        let bc = w("bc");
        match self.family {
            Family::P1 => vec![b.pow(2), w("ba").pow(n)],
            Family::P2 => vec![b.pow(2), w("bAba").pow(n)],
            Family::P3 => vec![a.pow(2), b.pow(2), c.pow(2), w("ba").pow(n), bc.pow(m)],
            Family::P4 => vec![a.pow(2), b.pow(2), c.pow(2), w("bcba").pow(n)],
            Family::P5 => vec![b.pow(2), a.pow(2 * n), b.concat(&a.pow(n)).pow(m)],
            Family::P6 => vec![
                a.pow(2),
                b.pow(2),
                c.pow(2),
                bc.pow(2 * n),
                a.concat(&bc.pow(n)).pow(m),
            ],
            Family::P7 => vec![
                a.pow(2),
                b.pow(2),
                c.pow(2),
                a.concat(&bc.pow(n)).concat(&b).pow(m),
            ],
        }
    }

    /// Reduction order used for completion.
    ///
    /// Shortlex diverges on several of the families, so completion uses the
    /// recursive path ordering with `b < c < a < A` throughout.
    pub fn reduction_order(&self) -> ReductionOrder {
        ReductionOrder::Recursive(ReductionOrder::DEFAULT_RECURSIVE_RANKS)
    }

    /// Human-readable presentation, relators written out over `{a, A, b, c}`.
    pub fn presentation_string(&self) -> String {
        let gens = if self.family.has_c() { "a,b,c" } else { "a,b" };
        let rels: Vec<String> = self.relators().iter().map(|r| r.to_string()).collect();
        format!("<{gens} | {}>", rels.join(", "))
    }

    /// Config-style rendering, e.g. `family=P5 n=2 m=3`.
    pub fn config_string(&self) -> String {
        match self.m {
            Some(m) => format!("family={} n={} m={}", self.family, self.n, m),
            None => format!("family={} n={}", self.family, self.n),
        }
    }

    /// Parses `family=P5 n=2 m=3`.
    pub fn parse_config(s: &str) -> Result<Self, Error> {
        let mut family = None;
        let mut n = None;
        let mut m = None;
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got {tok:?}")))?;
            let num = || {
                v.parse::<u32>()
                    .map_err(|_| Error::Config(format!("{k} must be a positive integer, got {v:?}")))
            };
            match k {
                "family" => family = Some(v.parse::<Family>()?),
                "n" => n = Some(num()?),
                "m" => m = Some(num()?),
                other => return Err(Error::Config(format!("unknown key {other:?}"))),
            }
        }
        let family = family.ok_or_else(|| Error::Config("missing family=".into()))?;
        let n = n.ok_or_else(|| Error::Config("missing n=".into()))?;
        FamilySpec::new(family, n, m)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.config_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_words() {
        let w = Word::parse("aAbc").unwrap();
        assert_eq!(w.symbols(), &[SYM_A, SYM_A_INV, SYM_B, SYM_C]);
        assert_eq!(w.to_string(), "aAbc");
        assert_eq!(Word::parse("e").unwrap(), Word::empty());
        assert!(Word::parse("abx").is_err());
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        let err = FamilySpec::new(Family::P1, 1, None).unwrap_err();
        assert!(err.to_string().contains("(ba)^1"));
        assert!(FamilySpec::new(Family::P5, 2, Some(1)).is_err());
        assert!(FamilySpec::new(Family::P3, 2, None).is_err());
        assert!(FamilySpec::new(Family::P2, 1, None).is_ok());
        assert!(FamilySpec::new(Family::P7, 1, Some(2)).is_ok());
    }

    #[test]
    fn involution_families_fold_capital_a() {
        let spec = FamilySpec::new(Family::P4, 2, None).unwrap();
        let w = spec.canonical_word(&Word::parse("Ab").unwrap()).unwrap();
        assert_eq!(w.to_string(), "ab");
        let p1 = FamilySpec::new(Family::P1, 3, None).unwrap();
        assert!(p1.canonical_word(&Word::parse("c").unwrap()).is_err());
    }

    #[test]
    fn config_round_trip() {
        let spec = FamilySpec::parse_config("family=P5 n=2 m=3").unwrap();
        assert_eq!(spec, FamilySpec::new(Family::P5, 2, Some(3)).unwrap());
        assert_eq!(spec.config_string(), "family=P5 n=2 m=3");
        assert!(FamilySpec::parse_config("family=P9 n=2").is_err());
    }

    #[test]
    fn presentation_strings() {
        let spec = FamilySpec::new(Family::P1, 3, None).unwrap();
        assert_eq!(spec.presentation_string(), "<a,b | bb, bababa>");
        let p7 = FamilySpec::new(Family::P7, 1, Some(2)).unwrap();
        assert_eq!(p7.relators()[3].to_string(), "abcbabcb");
    }
}
