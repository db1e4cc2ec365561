#![allow(dead_code)]

use std::collections::HashMap;

use cubic_split::group::{Family, FamilySpec, Word, SYM_A, SYM_A_INV, SYM_B, SYM_C};

/// Every family cell with n, m in {2, 3, 4}, plus n = 1 where the family allows it.
pub fn grid() -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for f in Family::ALL {
        for n in 1..=4 {
            if f.needs_m() {
                for m in 2..=4 {
                    if let Ok(s) = FamilySpec::new(f, n, Some(m)) {
                        out.push(s);
                    }
                }
            } else if let Ok(s) = FamilySpec::new(f, n, None) {
                out.push(s);
            }
        }
    }
    out
}

pub fn spec(f: Family, n: u32, m: Option<u32>) -> FamilySpec {
    FamilySpec::new(f, n, m).unwrap()
}

/// Relators written out by hand, over the letters a, A, b, c.
pub fn relators_by_hand(s: &FamilySpec) -> Vec<String> {
    let n = s.n as usize;
    let m = s.m.unwrap_or(0) as usize;
    let bc_n = "bc".repeat(n);
    match s.family {
        Family::P1 => vec!["bb".into(), "ba".repeat(n)],
        Family::P2 => vec!["bb".into(), "bAba".repeat(n)],
        Family::P3 => vec!["aa".into(), "bb".into(), "cc".into(), "ba".repeat(n), "bc".repeat(m)],
        Family::P4 => vec!["aa".into(), "bb".into(), "cc".into(), "bcba".repeat(n)],
        Family::P5 => vec!["bb".into(), "a".repeat(2 * n), format!("b{}", "a".repeat(n)).repeat(m)],
        Family::P6 => vec!["aa".into(), "bb".into(), "cc".into(), "bc".repeat(2 * n), format!("a{bc_n}").repeat(m)],
        Family::P7 => vec!["aa".into(), "bb".into(), "cc".into(), format!("a{bc_n}b").repeat(m)],
    }
}

fn letter(ch: char) -> u8 {
    match ch {
        'a' => SYM_A,
        'A' => SYM_A_INV,
        'b' => SYM_B,
        'c' => SYM_C,
        _ => panic!("bad letter {ch}"),
    }
}

/// Letters and their inverses in the free group on the generators.
fn alphabet(s: &FamilySpec) -> (Vec<u8>, [u8; 4]) {
    let three = matches!(s.family, Family::P3 | Family::P4 | Family::P6 | Family::P7);
    if three {
        (vec![SYM_A, SYM_B, SYM_C], [SYM_A, SYM_A_INV, SYM_B, SYM_C])
    } else {
        (vec![SYM_A, SYM_A_INV, SYM_B], [SYM_A_INV, SYM_A, SYM_B, SYM_C])
    }
}

/// Words of the free group (free monoid on involutions) up to a length bound, identified by
/// congruence closure of relator loops traced inside the bound.
///
/// Identifications are sound. With a generous bound they are complete on short words.
pub struct WordOracle {
    pub words: Vec<Vec<u8>>,
    child: Vec<[u32; 4]>,
    parent: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl WordOracle {
    pub fn new(s: &FamilySpec, bound: usize) -> (Self, Vec<u32>) {
        let (letters, inv) = alphabet(s);
        // Reduced words, breadth first.
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut child = vec![[NONE; 4]];
        let mut start = 0;
        for _ in 0..bound {
            let end = words.len();
            for v in start..end {
                for &x in &letters {
                    if words[v].last().is_some_and(|&l| inv[l as usize] == x) {
                        continue;
                    }
                    let mut w = words[v].clone();
                    w.push(x);
                    child[v][x as usize] = words.len() as u32;
                    words.push(w);
                    child.push([NONE; 4]);
                }
            }
            start = end;
        }
        // Cancelling steps point back to the prefix.
        let mut up = vec![NONE; words.len()];
        for v in 0..words.len() {
            for &x in &letters {
                let u = child[v][x as usize];
                if u != NONE {
                    up[u as usize] = v as u32;
                }
            }
        }
        for v in 1..words.len() {
            let last = *words[v].last().unwrap();
            child[v][inv[last as usize] as usize] = up[v];
        }

        let mut loops: Vec<Vec<u8>> = Vec::new();
        for r in relators_by_hand(s) {
            let r: Vec<u8> = r.chars().map(letter).collect();
            let rinv: Vec<u8> = r.iter().rev().map(|&x| inv[x as usize]).collect();
            for w in [r, rinv] {
                for k in 0..w.len() {
                    let mut c = w[k..].to_vec();
                    c.extend_from_slice(&w[..k]);
                    loops.push(c);
                }
            }
        }
        loops.sort();
        loops.dedup();

        let mut uf: Vec<u32> = (0..words.len() as u32).collect();
        for v in 0..words.len() {
            for l in &loops {
                let mut cur = v as u32;
                for &x in l {
                    cur = child[cur as usize][x as usize];
                    if cur == NONE {
                        break;
                    }
                }
                if cur != NONE {
                    union(&mut uf, v as u32, cur);
                }
            }
        }
        loop {
            let mut changed = false;
            for &x in &letters {
                let mut target: HashMap<u32, u32> = HashMap::new();
                for v in 0..words.len() {
                    let u = child[v][x as usize];
                    if u == NONE {
                        continue;
                    }
                    let (rv, ru) = (find(&mut uf, v as u32), find(&mut uf, u));
                    match target.get(&rv) {
                        Some(&t) => {
                            if find(&mut uf, t) != ru {
                                union(&mut uf, t, ru);
                                changed = true;
                            }
                        }
                        None => {
                            target.insert(rv, ru);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let classes: Vec<u32> = (0..words.len() as u32).map(|v| find(&mut uf, v)).collect();
        (WordOracle { words, child, parent: up }, classes)
    }
}

fn find(uf: &mut [u32], mut x: u32) -> u32 {
    while uf[x as usize] != x {
        uf[x as usize] = uf[uf[x as usize] as usize];
        x = uf[x as usize];
    }
    x
}

fn union(uf: &mut [u32], x: u32, y: u32) {
    let (rx, ry) = (find(uf, x), find(uf, y));
    if rx != ry {
        let (lo, hi) = (rx.min(ry), rx.max(ry));
        uf[hi as usize] = lo;
    }
}

pub fn word(syms: &[u8]) -> Word {
    Word(syms.to_vec())
}

/// Exponent sums of the hand-written relators, columns a, b[, c].
pub fn exponent_matrix(s: &FamilySpec) -> (Vec<Vec<i64>>, usize) {
    let ncols = if matches!(s.family, Family::P1 | Family::P2 | Family::P5) { 2 } else { 3 };
    let rows = relators_by_hand(s)
        .iter()
        .map(|r| {
            let mut row = vec![0i64; ncols];
            for ch in r.chars() {
                match ch {
                    'a' => row[0] += 1,
                    'A' => row[0] -= 1,
                    'b' => row[1] += 1,
                    'c' => row[2] += 1,
                    _ => unreachable!(),
                }
            }
            row
        })
        .collect();
    (rows, ncols)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        k => (0..k)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Free rank and invariant factors (all > 1) from determinantal divisors.
pub fn invariants_by_minors(rows: &[Vec<i64>], ncols: usize) -> (usize, Vec<i64>) {
    let mut d = vec![1i64];
    for k in 1..=ncols.min(rows.len()) {
        let mut g = 0;
        for rs in subsets(rows.len(), k) {
            for cs in subsets(ncols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        d.push(g);
    }
    let rank = d.len() - 1;
    let factors: Vec<i64> = d.windows(2).map(|w| w[1] / w[0]).filter(|&x| x > 1).collect();
    (ncols - rank, factors)
}
