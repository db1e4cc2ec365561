mod common;

use proptest::prelude::*;

use common::{invariants_by_minors, spec};
use cubic_split::graph::Graph;
use cubic_split::group::{abelian_invariants, build_rewrite_system, Family, Word, DEFAULT_RULE_CAP};
use cubic_split::planarity::{is_planar, planar, validate_witness};
use cubic_split::treedec::isomorphic;

/// A cycle with non-crossing chords, plus pendant trees.
fn outerplanar(n: usize, chords: &[(usize, usize)], pendants: &[usize]) -> Graph {
    let mut g = Graph::new(n + pendants.len());
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, '-');
    }
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in chords {
        let (a, b) = ((a % n).min(b % n), (a % n).max(b % n));
        let crosses = kept.iter().any(|&(c, d)| (a < c && c < b && b < d) || (c < a && a < d && d < b));
        if b > a + 1 && !crosses {
            kept.push((a, b));
            g.add_edge(a, b, '-');
        }
    }
    for (k, &p) in pendants.iter().enumerate() {
        g.add_edge(n + k, p % (n + k), '-');
    }
    g
}

/// `K5` or `K3,3` with every edge subdivided `sub[i]` times, glued to a path.
fn subdivided(k5: bool, sub: &[usize], tail: usize) -> Graph {
    let pairs: Vec<(usize, usize)> = if k5 {
        (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect()
    } else {
        (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect()
    };
    let branch = if k5 { 5 } else { 6 };
    let mut edges = Vec::new();
    let mut next = branch;
    for (k, &(u, v)) in pairs.iter().enumerate() {
        let mut prev = u;
        for _ in 0..sub[k % sub.len()] {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, v));
    }
    let mut prev = 0;
    for _ in 0..tail {
        edges.push((prev, next));
        prev = next;
        next += 1;
    }
    Graph::from_edges(next, &edges)
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.len(), &edges)
}

fn permutation(n: usize, seed: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, seed[i % seed.len()] % (i + 1));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outerplanar_graphs_are_planar(
        n in 3usize..30,
        chords in prop::collection::vec((0usize..30, 0usize..30), 0..20),
        pendants in prop::collection::vec(0usize..40, 0..10),
    ) {
        let g = outerplanar(n, &chords, &pendants);
        prop_assert!(planar(&g));
        prop_assert!(g.edge_count() <= 3 * g.len() - 6 || g.len() < 3);
    }

    #[test]
    fn kuratowski_subdivisions_are_found(
        k5 in any::<bool>(),
        sub in prop::collection::vec(0usize..3, 1..9),
        tail in 0usize..5,
    ) {
        let g = subdivided(k5, &sub, tail);
        let v = is_planar(&g);
        prop_assert!(!v.planar);
        prop_assert!(validate_witness(&g, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn deleting_edges_keeps_planarity(
        n in 3usize..25,
        chords in prop::collection::vec((0usize..25, 0usize..25), 0..15),
        drop in prop::collection::vec(0usize..100, 1..6),
    ) {
        let g = outerplanar(n, &chords, &[]);
        let mut edges = g.edges();
        for d in drop {
            if !edges.is_empty() {
                let k = d % edges.len();
                edges.remove(k);
            }
        }
        prop_assert!(planar(&Graph::from_edges(g.len(), &edges)));
    }

    #[test]
    fn dense_graphs_are_not_planar(n in 5usize..10, extra in prop::collection::vec((0usize..10, 0usize..10), 0..20)) {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if (i + j) % 5 != 0 || i == 0 {
                    g.add_edge(i, j, '-');
                }
            }
        }
        for (u, v) in extra {
            g.add_edge(u % n, v % n, '-');
        }
        prop_assume!(g.edge_count() > 3 * n - 6);
        let v = is_planar(&g);
        prop_assert!(!v.planar);
        prop_assert!(validate_witness(&g, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn relabelled_graphs_are_isomorphic(
        n in 4usize..14,
        chords in prop::collection::vec((0usize..14, 0usize..14), 0..8),
        seed in prop::collection::vec(0usize..1000, 1..14),
    ) {
        let g = outerplanar(n, &chords, &[]);
        let h = relabel(&g, &permutation(n, &seed));
        prop_assert!(isomorphic(&g, &h));
        let mut extra = h.clone();
        let missing = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).find(|&(u, v)| u != v && !h.has_edge(u, v));
        if let Some((u, v)) = missing {
            extra.add_edge(u, v, '-');
            prop_assert!(!isomorphic(&g, &extra));
        }
    }

    #[test]
    fn smith_agrees_with_minors(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 1..4)) {
        let inv = abelian_invariants(&rows, 3);
        prop_assert_eq!((inv.free_rank, inv.torsion.clone()), invariants_by_minors(&rows, 3));
        prop_assert!(inv.divisibility_chain_holds());
    }

    #[test]
    fn words_multiply_consistently(
        f in 0usize..7,
        u in prop::collection::vec(0u8..4, 0..12),
        v in prop::collection::vec(0u8..4, 0..12),
        w in prop::collection::vec(0u8..4, 0..12),
    ) {
        let family = Family::ALL[f];
        let s = spec(family, 2, Some(3));
        let rs = build_rewrite_system(&s, DEFAULT_RULE_CAP).unwrap();
        let letters = s.alphabet();
        let pick = |x: &[u8]| Word(x.iter().map(|&k| letters[k as usize % letters.len()]).collect());
        let (u, v, w) = (pick(&u), pick(&v), pick(&w));
        let nu = rs.nf(&u);
        prop_assert_eq!(rs.nf(&nu), nu.clone());
        prop_assert!(rs.is_normal(&nu));
        prop_assert_eq!(rs.multiply(&rs.multiply(&u, &v), &w), rs.multiply(&u, &rs.multiply(&v, &w)));
        prop_assert!(rs.multiply(&u, &rs.invert(&u)).is_empty());
    }
}
