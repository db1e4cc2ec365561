//! Smith normal form over the integers and abelian invariants.

use serde::{Deserialize, Serialize};

use super::{FamilySpec, SYM_A, SYM_A_INV, SYM_B, SYM_C};

/// Invariant factors of a finitely generated abelian group: `Z^free_rank ⊕ Z_{d1} ⊕ …`
/// with `d1 | d2 | …` and every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianInvariants {
    pub fn divisibility_chain_holds(&self) -> bool {
        self.torsion.iter().all(|&d| d >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Nonzero diagonal entries of the Smith normal form of `rows` (each row has `ncols` entries).
pub fn smith_diagonal(rows: &[Vec<i64>], ncols: usize) -> Vec<i64> {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    for r in &a {
        assert_eq!(r.len(), ncols, "ragged relation matrix");
    }
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..nrows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..ncols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the remaining block by the pivot.
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..ncols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest entry of row/column t to the pivot position.
            let mut best = (t, t);
            for i in t..nrows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Abelian invariants of the group with `ncols` generators and the given relation rows.
pub fn abelian_invariants(rows: &[Vec<i64>], ncols: usize) -> AbelianInvariants {
    let diag = smith_diagonal(rows, ncols);
    AbelianInvariants {
        free_rank: ncols - diag.len(),
        torsion: diag.into_iter().filter(|&d| d > 1).collect(),
    }
}

impl FamilySpec {
    /// Exponent-sum matrix: one row per relator, columns `a, b[, c]`.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        let ncols = self.generators().len();
        self.relators()
            .iter()
            .map(|r| {
                let mut row = vec![0i64; ncols];
                for &s in r.symbols() {
                    match s {
                        SYM_A => row[0] += 1,
                        SYM_A_INV => row[0] -= 1,
                        SYM_B => row[1] += 1,
                        SYM_C => row[2] += 1,
                        _ => unreachable!(),
                    }
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        abelian_invariants(&self.relation_matrix(), self.generators().len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    #[test]
    fn small_matrices() {
        assert_eq!(smith_diagonal(&[vec![0, 2], vec![3, 3]], 2), vec![1, 6]);
        assert_eq!(smith_diagonal(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3), vec![2, 6, 12]);
        assert_eq!(smith_diagonal(&[vec![0, 0]], 2), Vec::<i64>::new());
    }

    #[test]
    fn family_abelianizations() {
        let p1 = FamilySpec::new(Family::P1, 3, None).unwrap();
        assert_eq!(p1.relation_matrix(), vec![vec![0, 2], vec![3, 3]]);
        assert_eq!(p1.abelianization(), AbelianInvariants { free_rank: 0, torsion: vec![6] });
        let p3 = FamilySpec::new(Family::P3, 2, Some(2)).unwrap();
        assert_eq!(p3.abelianization(), AbelianInvariants { free_rank: 0, torsion: vec![2, 2, 2] });
        for n in 1..6 {
            let p2 = FamilySpec::new(Family::P2, n, None).unwrap();
            assert_eq!(p2.relation_matrix(), vec![vec![0, 2], vec![0, 2 * n as i64]]);
            assert_eq!(p2.abelianization(), AbelianInvariants { free_rank: 1, torsion: vec![2] });
        }
    }

    #[test]
    fn display() {
        let inv = AbelianInvariants { free_rank: 1, torsion: vec![2] };
        assert_eq!(inv.to_string(), "Z + Z_2");
        assert!(inv.divisibility_chain_holds());
    }
}
