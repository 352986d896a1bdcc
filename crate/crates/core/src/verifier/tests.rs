use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::group::GroupKind;

fn group(desc: &str) -> Group {
    Group::new(desc.parse().unwrap()).unwrap()
}

fn r(p: i64, q: i64) -> ExactRational {
    ExactRational::new(p, q)
}

fn els(g: &Group, xs: &[&str]) -> Vec<Element> {
    xs.iter().map(|x| g.parse_element(x).unwrap()).collect()
}

fn punctured_ball(g: &Group, radius: usize) -> Vec<Element> {
    let e = g.identity();
    g.ball(radius).unwrap().into_iter().filter(|x| *x != e).collect()
}

#[test]
fn kernel_tags_round_trip() {
    for s in ["tree", "folner:box", "folner:ball", "folner:whole"] {
        assert_eq!(s.parse::<KernelTag>().unwrap().to_string(), s);
    }
    assert!("folner".parse::<KernelTag>().is_err());
    assert!("folner:cube".parse::<KernelTag>().is_err());
}

#[test]
fn gram_examples() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let pts = els(&f, &["e", "a", "b"]);
    let g = gram_matrix(&tree, &pts, 2).unwrap();
    let (one, two, third) = (r(1, 1), r(2, 3), r(1, 3));
    assert_eq!(
        g.matrix,
        vec![
            vec![one.clone(), two.clone(), two.clone()],
            vec![two.clone(), one.clone(), third.clone()],
            vec![two, third, one.clone()],
        ]
    );
    assert_eq!(gram_matrix(&tree, &pts[..1], 7).unwrap().matrix, vec![vec![one]]);

    let z = group("abelian:1");
    let bx = Kernel::new(&z, KernelTag::Folner(FolnerStrategy::Box)).unwrap();
    let g = gram_matrix(&bx, &els(&z, &["0", "2"]), 4).unwrap();
    assert_eq!(g.matrix, vec![vec![r(1, 1), r(3, 5)], vec![r(3, 5), r(1, 1)]]);
}

#[test]
fn duplicate_points_are_rejected() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let pts = els(&f, &["a", "b.B.a"]);
    assert!(matches!(gram_matrix(&tree, &pts, 2), Err(Error::DuplicatePoint(_))));
}

#[test]
fn factorization_examples() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let pts = els(&f, &["e", "a", "b"]);
    let level = tree.at_level(2).unwrap();
    let phi = FeatureMatrix::build(&level, &pts).unwrap();
    let rows: Vec<Element> = phi.rows.iter().map(|(v, _)| v.clone()).collect();
    let mut expected = els(&f, &["e", "a", "a.a", "a.a.a", "b"]);
    expected.sort();
    assert_eq!(rows, expected);
    let cert = certify_psd_exact(&tree, &pts, 2).unwrap();
    assert_eq!(cert.scale, r(1, 3));
    assert_eq!(cert.feature_rows, 5);

    let c = group("cyclic:7");
    let whole = Kernel::new(&c, KernelTag::Folner(FolnerStrategy::WholeGroup)).unwrap();
    let pts = c.elements().unwrap();
    let level = whole.at_level(0).unwrap();
    let phi = FeatureMatrix::build(&level, &pts).unwrap();
    assert_eq!(phi.rows.len(), 7);
    assert!(phi.rows.iter().all(|(_, cols)| cols.len() == 7));
    let g = gram_matrix(&whole, &pts, 0).unwrap();
    assert!(g.matrix.iter().flatten().all(|u| *u == ExactRational::one()));
    certify_psd_exact(&whole, &pts, 0).unwrap();

    let empty = certify_psd_exact(&tree, &[], 3).unwrap();
    assert_eq!(empty.feature_rows, 0);
}

#[test]
fn tampered_gram_is_caught() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let pts = els(&f, &["e", "a", "b"]);
    let level = tree.at_level(2).unwrap();
    let mut sample = gram_matrix(&tree, &pts, 2).unwrap();
    sample.matrix[1][2] = r(2, 3);
    sample.matrix[2][1] = r(2, 3);
    assert_eq!(
        certify_sample(&level, &sample),
        Err(Error::FactorizationMismatch { row: 1, col: 2 })
    );
}

#[test]
fn digest_is_deterministic_and_sensitive() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let pts = els(&f, &["e", "a", "b"]);
    let a = certify_psd_exact(&tree, &pts, 2).unwrap();
    let b = certify_psd_exact(&tree, &pts, 2).unwrap();
    let c = certify_psd_exact(&tree, &pts, 3).unwrap();
    assert_eq!(a.digest, b.digest);
    assert_ne!(a.digest, c.digest);
}

#[test]
fn numeric_psd_examples() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    // pairwise distance 6 > 2n for n = 2: the Gram matrix is the identity
    let far = els(&f, &["b.b.b", "B.B.B", "a.a.a"]);
    let g = gram_matrix(&tree, &far, 2).unwrap();
    let num = check_psd_numeric(&g, PSD_TOLERANCE).unwrap();
    assert!((num.min_eigenvalue - 1.0).abs() < 1e-12 && num.passed);

    let c = group("cyclic:5");
    let whole = Kernel::new(&c, KernelTag::Folner(FolnerStrategy::WholeGroup)).unwrap();
    let g = gram_matrix(&whole, &c.elements().unwrap(), 1).unwrap();
    let num = check_psd_numeric(&g, PSD_TOLERANCE).unwrap();
    assert!(num.min_eigenvalue.abs() < 1e-9 && (num.max_eigenvalue - 5.0).abs() < 1e-9);
    assert!(num.passed);

    let g = gram_matrix(&tree, &els(&f, &["e", "a", "b"]), 2).unwrap();
    let num = check_psd_numeric(&g, PSD_TOLERANCE).unwrap();
    assert!(num.passed && num.min_eigenvalue >= -1e-9);
}

#[test]
fn numeric_psd_rejects_asymmetric_and_indefinite() {
    let mut g = GramSample {
        points: vec![],
        level: 0,
        kernel: KernelTag::Tree,
        matrix: vec![vec![r(1, 1), r(1, 2)], vec![r(1, 3), r(1, 1)]],
    };
    assert_eq!(check_psd_numeric(&g, PSD_TOLERANCE), Err(Error::NotSymmetric { row: 1, col: 0 }));
    g.matrix = vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(1, 1)]];
    let num = check_psd_numeric(&g, PSD_TOLERANCE).unwrap();
    assert!(!num.passed);
    assert!((num.min_eigenvalue + 1.0).abs() < 1e-12);
}

#[test]
fn tree_parameter_examples() {
    assert_eq!(find_parameter_tree(3, &r(1, 10)).unwrap(), 39);
    assert_eq!(find_parameter_tree(1, &r(1, 2)).unwrap(), 3);
    for m in 1..6 {
        assert_eq!(find_parameter_tree(m, &r(m as i64 + 1, 1)).unwrap(), m);
        assert_eq!(find_parameter_tree(m, &r(10 * m as i64, 1)).unwrap(), m);
    }
    assert!(matches!(find_parameter_tree(2, &r(0, 1)), Err(Error::NonPositiveEpsilon(_))));
    assert!(find_parameter_tree(2, &r(-1, 3)).is_err());
}

#[test]
fn tree_parameter_is_minimal_for_its_inequality() {
    for m in 1..6usize {
        for eps in [r(1, 2), r(1, 3), r(1, 10), r(2, 7), r(1, 100)] {
            let n = find_parameter_tree(m, &eps).unwrap();
            let bound = |n: usize| ExactRational::from_counts(m + 1, n + 1);
            assert!(bound(n) <= eps);
            assert!(n == m || bound(n - 1) > eps);
        }
    }
}

#[test]
fn tree_parameter_guarantee_holds_exhaustively() {
    let f = group("free:2");
    let t = TreeKernel::new(&f).unwrap();
    let ball = f.ball(3).unwrap();
    for m in 1..=3usize {
        for eps in [r(1, 2), r(1, 10)] {
            let n = find_parameter_tree(m, &eps).unwrap();
            for x in &ball {
                for y in &ball {
                    if f.distance(x, y).unwrap() < m {
                        let res = (&ExactRational::one() - &t.value(x, y, n).unwrap()).abs();
                        assert!(res < eps, "m={m} eps={eps} {x} {y}");
                    }
                }
            }
        }
    }
}

#[test]
fn folner_parameter_examples() {
    let z = group("abelian:1");
    let p = FolnerProvider::new(&z, FolnerStrategy::Box).unwrap();
    let e = els(&z, &["-1", "1"]);
    assert_eq!(find_parameter_folner(&p, &e, &r(1, 10), 50).unwrap(), Some(10));
    assert_eq!(find_parameter_folner(&p, &e, &r(1, 10), 9).unwrap(), None);
    assert_eq!(find_parameter_folner(&p, &[z.identity()], &r(1, 10), 5).unwrap(), Some(0));
    assert!(find_parameter_folner(&p, &e, &r(0, 1), 5).is_err());

    let f = group("free:2");
    let ball = FolnerProvider::new(&f, FolnerStrategy::Ball).unwrap();
    let e = punctured_ball(&f, 1);
    assert_eq!(find_parameter_folner(&ball, &e, &r(1, 10), 8).unwrap(), None);
    for n in 0..=8 {
        let level = ball.level(n).unwrap();
        assert!(folner_max_residual(&level, &e).unwrap() > r(1, 2));
    }
}

#[test]
fn folner_search_stops_at_the_budget() {
    let f = Group::with_budget("free:2".parse().unwrap(), 2000).unwrap();
    let ball = FolnerProvider::new(&f, FolnerStrategy::Ball).unwrap();
    let e = punctured_ball(&f, 1);
    let s = search_folner(&ball, &e, &r(1, 10), 20).unwrap();
    assert_eq!(s.found, None);
    assert!(s.budget_exhausted);
    assert_eq!(s.last_level, 6);
    assert!(matches!(find_parameter_folner(&ball, &e, &r(1, 10), 20), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn verify_free_group_tree_kernel() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let e = punctured_ball(&f, 2);
    let cert = verify_property_o(&tree, &e, &r(1, 10), &SampleSpec::default(), &VerifyOptions::default()).unwrap();
    assert!(cert.passed(), "{:?}", cert.conditions);
    assert_eq!(cert.level, Some(find_parameter_tree(3, &r(1, 10)).unwrap()));
    assert_eq!(cert.distance_bound, Some(3));
    assert_eq!(cert.support, SupportSet::Ball { radius: 78 });
    assert_eq!(cert.residuals.len(), 16);
    for (z, res) in &cert.residuals {
        let len = f.word_length(z).unwrap();
        assert_eq!(*res, ExactRational::from_counts(len, 40));
        assert!(*res < r(1, 10));
    }
    assert!(cert.psd.factorization.is_some());
    assert_eq!(cert.base_ray, Some(crate::tree::BASE_RAY));
}

#[test]
fn verify_finite_cyclic_whole_group() {
    let c = group("cyclic:7");
    let k = Kernel::new(&c, KernelTag::Folner(FolnerStrategy::WholeGroup)).unwrap();
    let e = c.ball(3).unwrap();
    let cert = verify_property_o(&k, &e, &r(1, 100), &SampleSpec::default(), &VerifyOptions::default()).unwrap();
    assert!(cert.passed());
    assert_eq!(cert.level, Some(0));
    assert!(cert.residuals.iter().all(|(_, res)| res.is_zero()));
}

#[test]
fn verify_negative_control_fails_condition_three() {
    let f = group("free:2");
    let k = Kernel::new(&f, KernelTag::Folner(FolnerStrategy::Ball)).unwrap();
    let e = punctured_ball(&f, 1);
    let cert = verify_property_o(&k, &e, &r(1, 10), &SampleSpec::default(), &VerifyOptions::with_n_max(8)).unwrap();
    assert_eq!(cert.verdict(), Verdict::Fail { condition: 3 });
    assert_eq!(cert.level, None);
    assert_eq!(cert.evaluated_level, 8);
    assert_eq!(cert.provider_is_folner, Some(false));
    assert_eq!(cert.support, SupportSet::Ball { radius: 16 });
    // the kernel itself is still a legitimate positive definite, finitely supported kernel
    assert!(cert.conditions.positive_definite && cert.conditions.finite_support);
}

#[test]
fn folner_residuals_hold_for_every_pair_with_that_quotient() {
    let z2 = group("abelian:2");
    let k = Kernel::new(&z2, KernelTag::Folner(FolnerStrategy::Box)).unwrap();
    let e = punctured_ball(&z2, 2);
    let cert = verify_property_o(&k, &e, &r(1, 10), &SampleSpec::default(), &VerifyOptions::default()).unwrap();
    assert!(cert.passed());
    assert_eq!(cert.level, Some(20));
    let level = k.at_level(20).unwrap();
    let b = z2.ball(2).unwrap();
    for (z, res) in &cert.residuals {
        for x in &b {
            let y = z2.multiply(x, z).unwrap();
            assert_eq!(*res, (&ExactRational::one() - &level.value(x, &y).unwrap()).abs());
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    let h = group("heisenberg");
    let k = Kernel::new(&h, KernelTag::Folner(FolnerStrategy::Ball)).unwrap();
    let e = els(&h, &["(1,0,0)", "(0,1,0)"]);
    let spec = SampleSpec {
        radius: 1,
        random: 10,
        random_length: 6,
        seed: 7,
    };
    let opts = VerifyOptions::with_n_max(4);
    let a = verify_property_o(&k, &e, &r(1, 2), &spec, &opts).unwrap();
    let b = verify_property_o(&k, &e, &r(1, 2), &spec, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.sample.len() > 5);
}

#[test]
fn verify_rejects_bad_inputs() {
    let f = group("free:2");
    let tree = Kernel::new(&f, KernelTag::Tree).unwrap();
    let opts = VerifyOptions::default();
    let spec = SampleSpec::default();
    assert!(matches!(
        verify_property_o(&tree, &[], &r(0, 1), &spec, &opts),
        Err(Error::NonPositiveEpsilon(_))
    ));
    let stray = Element::Vector(vec![1, 2]);
    assert!(matches!(
        verify_property_o(&tree, &[stray], &r(1, 2), &spec, &opts),
        Err(Error::ModelMismatch { .. })
    ));
    let z = Group::new(GroupKind::Abelian { dim: 1 }).unwrap();
    assert!(Kernel::new(&z, KernelTag::Tree).is_err());
}
