use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;

fn group(desc: &str) -> Group {
    Group::new(desc.parse().unwrap()).unwrap()
}

fn el(g: &Group, s: &str) -> Element {
    g.parse_element(s).unwrap()
}

type Mat3 = [[i64; 3]; 3];

fn to_matrix(t: [i64; 3]) -> Mat3 {
    [[1, t[0], t[2]], [0, 1, t[1]], [0, 0, 1]]
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Shortest-path length in the Heisenberg Cayley graph, computed on raw
/// matrices with its own queue.
fn matrix_bfs_length(target: [i64; 3]) -> usize {
    let gens = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]].map(to_matrix);
    let goal = to_matrix(target);
    let start = to_matrix([0, 0, 0]);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((m, d)) = queue.pop_front() {
        if m == goal {
            return d;
        }
        for g in &gens {
            let next = mat_mul(&m, g);
            if seen.insert(next) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!()
}

#[test]
fn free_group_multiply_and_inverse() {
    let f = group("free:2");
    assert_eq!(f.multiply(&el(&f, "a.b"), &el(&f, "B.a")).unwrap(), el(&f, "a.a"));
    assert_eq!(f.inverse(&el(&f, "a.B")).unwrap().to_string(), "b.A");
    assert_eq!(f.word_length(&el(&f, "a.b.A")).unwrap(), 3);
    assert_eq!(f.distance(&el(&f, "a"), &el(&f, "b")).unwrap(), 2);
}

#[test]
fn abelian_multiply_inverse_length() {
    let z2 = group("abelian:2");
    assert_eq!(z2.multiply(&el(&z2, "(1,2)"), &el(&z2, "(3,-1)")).unwrap(), el(&z2, "(4,1)"));
    assert_eq!(z2.word_length(&el(&z2, "(3,-2)")).unwrap(), 5);
    let z3 = group("abelian:3");
    assert_eq!(z3.inverse(&el(&z3, "(2,0,-1)")).unwrap(), el(&z3, "(-2,0,1)"));
}

#[test]
fn heisenberg_matches_matrix_oracle() {
    let h = group("heisenberg");
    let x = el(&h, "(1,0,0)");
    let y = el(&h, "(0,1,0)");
    assert_eq!(h.multiply(&x, &y).unwrap(), Element::Heisenberg([1, 1, 1]));
    assert_eq!(
        to_matrix([1, 1, 1]),
        mat_mul(&to_matrix([1, 0, 0]), &to_matrix([0, 1, 0]))
    );
    assert_eq!(h.inverse(&el(&h, "(1,1,1)")).unwrap(), Element::Heisenberg([-1, -1, 0]));

    let ball = h.ball(2).unwrap();
    for a in &ball {
        for b in &ball {
            let (Element::Heisenberg(s), Element::Heisenberg(t)) = (a, b) else { unreachable!() };
            let Element::Heisenberg(p) = h.mul(a, b) else { unreachable!() };
            assert_eq!(to_matrix(p), mat_mul(&to_matrix(*s), &to_matrix(*t)));
        }
    }
}

#[test]
fn heisenberg_word_lengths_match_matrix_bfs() {
    let h = group("heisenberg");
    assert_eq!(h.word_length(&el(&h, "(0,0,1)")).unwrap(), 4);
    assert_eq!(h.distance(&h.identity(), &el(&h, "(0,0,1)")).unwrap(), 4);
    for t in [[0, 0, 2], [1, 1, 0], [2, -1, 3], [0, 0, -4], [1, 2, 2]] {
        assert_eq!(
            h.word_length(&Element::Heisenberg(t)).unwrap(),
            matrix_bfs_length(t),
            "{t:?}"
        );
    }
}

#[test]
fn ball_examples() {
    let f = group("free:2");
    let b1: BTreeSet<_> = f.ball(1).unwrap().iter().map(|x| x.to_string()).collect();
    assert_eq!(b1, BTreeSet::from(["e", "a", "A", "b", "B"].map(Into::into)));
    assert_eq!(group("abelian:2").ball(2).unwrap().len(), 13);
    assert_eq!(group("cyclic:5").ball(2).unwrap().len(), 5);
    assert_eq!(group("cyclic:5").ball(9).unwrap().len(), 5);
    assert_eq!(f.ball(0).unwrap(), vec![f.identity()]);
}

#[test]
fn free_ball_sizes_match_closed_form() {
    for k in 2..=3u64 {
        let g = group(&alloc::format!("free:{k}"));
        let sizes = g.ball_sizes(5).unwrap();
        for (n, &size) in sizes.iter().enumerate() {
            let closed = 1 + 2 * k * ((2 * k - 1).pow(n as u32) - 1) / (2 * k - 2);
            assert_eq!(size as u64, closed, "k={k} n={n}");
        }
    }
}

#[test]
fn abelian_ball_sizes_match_closed_form() {
    let g = group("abelian:2");
    for (n, size) in g.ball_sizes(12).unwrap().into_iter().enumerate() {
        assert_eq!(size, 2 * n * n + 2 * n + 1);
    }
}

#[test]
fn ball_words_have_the_right_length() {
    for desc in ["free:2", "abelian:2", "heisenberg", "cyclic:7", "product:free:1,cyclic:3"] {
        let g = group(desc);
        let b = g.ball(3).unwrap();
        let set: BTreeSet<_> = b.iter().cloned().collect();
        assert_eq!(set.len(), b.len(), "{desc}: ball has duplicates");
        for x in &b {
            assert!(g.word_length(x).unwrap() <= 3);
        }
        let b2 = g.ball(2).unwrap();
        assert!(b2.iter().all(|x| set.contains(x)), "{desc}: balls nest");
    }
}

#[test]
fn cyclic_length_matches_closed_form() {
    let g = group("cyclic:9");
    for r in 0..9u64 {
        assert_eq!(g.word_length(&Element::Residue(r)).unwrap() as u64, r.min(9 - r));
    }
    let two = group("cyclic:2");
    assert_eq!(two.generators().len(), 1);
}

#[test]
fn product_length_matches_bfs() {
    let g = group("product:heisenberg,cyclic:4");
    let b = g.ball(4).unwrap();
    let cache = g.cache.read();
    for (depth, layer) in cache.layers.iter().enumerate() {
        for x in layer {
            assert_eq!(g.length(x).unwrap(), depth);
        }
    }
    assert!(!b.is_empty());
}

#[test]
fn group_axioms_on_small_balls() {
    for desc in ["free:2", "abelian:2", "heisenberg", "cyclic:5", "product:free:1,cyclic:3"] {
        let g = group(desc);
        let ball = g.ball(if desc == "free:2" { 2 } else { 3 }).unwrap();
        let e = g.identity();
        for x in &ball {
            assert_eq!(g.mul(x, &e), *x);
            assert_eq!(g.mul(&e, x), *x);
            assert_eq!(g.mul(x, &g.inv(x)), e);
            for y in &ball {
                for z in &ball {
                    assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)), "{desc}");
                }
            }
        }
    }
}

#[test]
fn metric_axioms_and_left_invariance() {
    for desc in ["free:2", "abelian:2", "heisenberg", "cyclic:7"] {
        let g = group(desc);
        let ball = g.ball(2).unwrap();
        for x in &ball {
            assert_eq!(g.distance(x, x).unwrap(), 0);
            for y in &ball {
                let dxy = g.distance(x, y).unwrap();
                assert_eq!(dxy, g.distance(y, x).unwrap());
                for z in &ball {
                    assert!(dxy <= g.distance(x, z).unwrap() + g.distance(z, y).unwrap());
                    let (zx, zy) = (g.mul(z, x), g.mul(z, y));
                    assert_eq!(g.distance(&zx, &zy).unwrap(), dxy);
                }
            }
        }
    }
}

#[test]
fn generating_sets_are_symmetric_and_exclude_identity() {
    for desc in ["free:3", "abelian:2", "heisenberg", "cyclic:2", "cyclic:6", "product:free:1,abelian:1"] {
        let g = group(desc);
        let gens = g.generators();
        assert!(!gens.contains(&g.identity()));
        for s in gens {
            assert!(gens.contains(&g.inv(s)), "{desc}");
        }
    }
}

#[test]
fn polynomial_growth_slopes() {
    // Doubling slope log₂(β(2n)/β(n)) stays at or below the growth degree.
    let cases = [("abelian:1", 1.0, 40), ("abelian:2", 2.0, 30), ("abelian:3", 3.0, 12), ("heisenberg", 4.0, 12)];
    for (desc, degree, radius) in cases {
        let g = group(desc);
        let sizes = g.ball_sizes(radius).unwrap();
        for n in 1..=radius / 2 {
            let slope = libm::log2(sizes[2 * n] as f64 / sizes[n] as f64);
            assert!(slope <= degree + 1e-9, "{desc} n={n} slope={slope}");
        }
    }
    // Exponential growth has no such bound.
    let f = group("free:2");
    let sizes = f.ball_sizes(8).unwrap();
    assert!(libm::log2(sizes[8] as f64 / sizes[4] as f64) > 6.0);
}

#[test]
fn budget_guards_exponential_balls() {
    let g = Group::with_budget("free:3".parse().unwrap(), 1000).unwrap();
    assert_eq!(g.ball(3).unwrap().len(), 1 + 6 + 30 + 150);
    assert_eq!(g.ball(5), Err(Error::BudgetExceeded { budget: 1000 }));
    // The cache is still usable after a refused extension.
    assert_eq!(g.ball(3).unwrap().len(), 187);
}

#[test]
fn mixed_models_are_rejected() {
    let f = group("free:2");
    let z = group("abelian:2");
    let x = el(&z, "(1,0)");
    assert!(matches!(f.multiply(&f.identity(), &x), Err(Error::ModelMismatch { .. })));
    assert!(matches!(f.distance(&x, &x), Err(Error::ModelMismatch { .. })));
    let f1 = group("free:1");
    assert!(f1.word_length(&el(&f, "b")).is_err());
}

#[test]
fn finite_groups_enumerate_completely() {
    let g = group("product:cyclic:3,cyclic:4");
    assert_eq!(g.elements().unwrap().len(), 12);
    assert!(group("heisenberg").elements().is_err());
}

#[test]
fn concurrent_readers_share_the_cache() {
    let g = group("heisenberg");
    let sizes: Vec<usize> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|i| s.spawn({
                let g = &g;
                move || g.ball(4 + i % 2).unwrap().len()
            }))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(sizes[0], sizes[2]);
    assert_eq!(sizes[1], sizes[3]);
    assert_eq!(sizes[0], g.ball(4).unwrap().len());
}

fn free_word() -> impl Strategy<Value = Vec<(u32, bool)>> {
    prop::collection::vec((1u32..=3, any::<bool>()), 0..12)
}

proptest! {
    #[test]
    fn free_words_multiply_to_canonical_forms(u in free_word(), v in free_word(), w in free_word()) {
        let g = group("free:3");
        let mk = |ls: &Vec<(u32, bool)>| Element::Word(Word::reduce(ls.iter().map(|&(i, inv)| Letter::new(i, inv))));
        let (x, y, z) = (mk(&u), mk(&v), mk(&w));
        prop_assert!(g.contains(&g.mul(&x, &y)));
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        // Concatenating then reducing agrees with multiplying reduced words.
        let concat: Vec<_> = u.iter().chain(v.iter()).cloned().collect();
        prop_assert_eq!(mk(&concat), g.mul(&x, &y));
    }

    #[test]
    fn heisenberg_inverse_is_matrix_inverse(a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let h = group("heisenberg");
        let x = Element::Heisenberg([a, b, c]);
        let Element::Heisenberg(t) = h.inv(&x) else { unreachable!() };
        prop_assert_eq!(mat_mul(&to_matrix([a, b, c]), &to_matrix(t)), to_matrix([0, 0, 0]));
    }
}
