mod common;

use btgit_core::models::{act, ModelKind, ModelPoint};
use btgit_core::polyhedra::{Metric, QPolyhedron};
use btgit_core::rational::{q, qi, ExtQ, Q};
use btgit_core::rootdata::{Family, RelativeDatum, RootDatum};
use btgit_core::treebuilding::*;
use btgit_core::valfield::matrix;
use btgit_core::valfield::PuiseuxElement as P;
use common::*;
use num_traits::Zero;
use proptest::prelude::*;

fn tp(b: &str, u: Q) -> TreePoint {
    TreePoint::new(p(b), u)
}

fn sl(n: usize) -> RelativeDatum {
    RelativeDatum::split(RootDatum::build(Family::A, n - 1).unwrap())
}

#[test]
fn canonical_form() {
    assert_eq!(
        tree_canonicalize(&p("t^2"), &qi(1)),
        TreePoint::apartment(qi(1))
    );
    assert_eq!(tree_canonicalize(&p("1 + t"), &q(1, 2)), tp("1", q(1, 2)));
    assert_eq!(tree_canonicalize(&p("t^(1/4)"), &q(1, 2)).b, p("t^(1/4)"));
    assert_eq!(
        tree_distance(&TreePoint::apartment(qi(0)), &TreePoint::apartment(qi(1))),
        qi(1)
    );
    // a neighbour off the apartment
    assert_eq!(
        tree_distance(&TreePoint::origin(), &tp("1", q(1, 2))),
        q(1, 2)
    );
    assert_eq!(tp("1", q(1, 2)).retraction(), TreePoint::origin());
}

#[test]
fn semistability_at_points() {
    let x = line(p("1"), p("t^(1/2)"));
    assert!(!ss_at(&x, &TreePoint::origin()).unwrap());
    assert_eq!(
        reduction_at(&x, &TreePoint::origin()).unwrap(),
        [qi(1), qi(0)]
    );
    assert!(ss_at(&x, &TreePoint::apartment(q(1, 4))).unwrap());
    assert!(!ss_at(&x, &TreePoint::apartment(q(1, 8))).unwrap());
    let y = line(p("1"), p("1 + t^(1/2)"));
    assert!(!ss_at(&y, &TreePoint::origin()).unwrap());
    assert_eq!(
        reduction_at(&y, &TreePoint::origin()).unwrap(),
        [qi(1), qi(1)]
    );
}

#[test]
fn interval_tree_examples() {
    let i = interval_tree(&line(p("1"), p("t^(1/2)")), 8).unwrap();
    assert_eq!(i.certificate, Certificate::Exact);
    assert_eq!(i.singleton(), Some(&TreePoint::apartment(q(1, 4))));

    let j = interval_tree(&line(p("1"), p("1 + t^(1/2)")), 8).unwrap();
    assert_eq!(j.certificate, Certificate::Exact);
    let z = j.singleton().unwrap();
    assert_eq!(z, &tp("1", q(1, 4)));
    // on the apartment with ends [1:1] and [0:1]
    let chart = ApartmentChart::lower_unipotent(p("1"));
    assert_eq!(chart.coordinate(z).unwrap(), Some(q(1, 4)));

    let k = interval_tree(&line(p("1"), p("t")), 8).unwrap();
    assert!(k.is_empty());
    let w = k.witness.unwrap();
    assert_eq!(
        w.g,
        matrix::from_ints(&[&[1, 0], &[0, 1]])
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                if i == 1 {
                    r[0] = p("t");
                }
                r
            })
            .collect::<Vec<_>>()
    );
}

#[test]
fn r_functions() {
    let x = line(p("1"), p("t^(1/2)"));
    let g = ApartmentChart::lower_unipotent(p("1"));
    assert_eq!(r_log(&x, &g, 2).unwrap(), LogValue::Finite(q(1, 2)));
    assert_eq!(
        r_log(&x, &ApartmentChart::identity(2), 2).unwrap(),
        LogValue::Finite(qi(0))
    );
    assert_eq!(default_degree(ModelKind::Proj(2)), Some(2));
    assert!(matches!(r_log(&x, &g, 1), Err(TreeError::NoInvariants(1))));

    let family = unipotent_family(2, 2, &[-1, 0, 1]);
    let rt = r_tilde_estimate(&x, &family, 2).unwrap();
    assert_eq!(rt.value, LogValue::Finite(qi(0)));
    assert!(rt.argmin.contains(&0));
    let assembled = assemble_tree(&rt, &family).unwrap();
    assert_eq!(
        assembled.into_iter().collect::<Vec<_>>(),
        vec![TreePoint::apartment(q(1, 4))]
    );

    let only = r_tilde_estimate(&x, &[ApartmentChart::identity(2)], 2).unwrap();
    assert_eq!(only.value, LogValue::Finite(qi(0)));
    assert_eq!(only.pieces[0].1.singleton, Some(vec![q(1, 4)]));

    // [1:t] is hit exactly by a depth-2 translate
    let y = line(p("1"), p("t"));
    let rt = r_tilde_estimate(&y, &unipotent_family(2, 2, &[-1, 0, 1]), 2).unwrap();
    assert_eq!(rt.value, LogValue::NegInf);
    // an upper translate reaches [1 - t : 1] exactly; lower ones only approach it
    let z = line(p("1 - t"), p("1"));
    let lower = |d| borel_subfamily(&unipotent_family(2, d, &[-1, 0, 1]), false);
    assert_eq!(
        r_tilde_estimate(&z, &unipotent_family(2, 2, &[-1, 0, 1]), 2)
            .unwrap()
            .value,
        LogValue::NegInf
    );
    let values: Vec<LogValue> = (1..=4)
        .map(|d| r_tilde_estimate(&z, &lower(d), 2).unwrap().value)
        .collect();
    assert_eq!(
        values,
        (1..=4)
            .map(|d| LogValue::Finite(qi(-d)))
            .collect::<Vec<_>>()
    );
}

#[test]
fn circumcenters() {
    let seg = [TreePoint::apartment(qi(0)), TreePoint::apartment(qi(1))];
    assert_eq!(
        circumcenter_tree(&seg).unwrap(),
        TreePoint::apartment(q(1, 2))
    );
    let tripod = [
        TreePoint::apartment(qi(1)),
        TreePoint::apartment(qi(-1)),
        tp("1", qi(1)),
    ];
    assert_eq!(circumcenter_tree(&tripod).unwrap(), TreePoint::origin());
    assert!(matches!(circumcenter_tree(&[]), Err(TreeError::Empty)));

    let tri = QPolyhedron::new(
        2,
        vec![
            btgit_core::polyhedra::Halfspace::new(vec![qi(0), qi(1)], qi(0)),
            btgit_core::polyhedra::Halfspace::new(vec![qi(-1), qi(-1)], qi(-2)),
            btgit_core::polyhedra::Halfspace::new(vec![qi(1), qi(-1)], qi(0)),
        ],
    );
    assert_eq!(
        circumcenter_apartment(&tri, &Metric::euclidean()).unwrap(),
        vec![qi(1), qi(0)]
    );
    let half = QPolyhedron::new(
        1,
        vec![btgit_core::polyhedra::Halfspace::new(vec![qi(1)], qi(0))],
    );
    assert!(matches!(
        circumcenter_apartment(&half, &Metric::euclidean()),
        Err(TreeError::Unbounded)
    ));
}

#[test]
fn characters_on_the_tree() {
    assert_eq!(f_chi_tree(&TreePoint::apartment(qi(1)), &qi(1)), qi(1));
    assert_eq!(f_chi_tree(&tp("1", q(1, 2)), &qi(1)), q(-1, 2));

    let sl2 = sl(2);
    let par = p_chi_data(&[qi(1)], &sl2).unwrap();
    assert!(par.is_borel);
    assert_eq!(par.tau, vec![vec![q(1, 2)]]);
    assert!(par.contains(
        &ApartmentChart::upper_unipotent(p("t^-1")).g,
        ModelKind::Proj(2)
    ));
    assert!(!par.contains(
        &ApartmentChart::lower_unipotent(p("1")).g,
        ModelKind::Proj(2)
    ));
    assert!(matches!(
        p_chi_data(&[qi(0)], &sl2),
        Err(TreeError::ZeroCharacter)
    ));

    let sl4 = sl(4);
    let chi = sl4.restrict(&sl4.absolute.project(&[qi(1), qi(1), qi(0), qi(0)]));
    let par = p_chi_data(&chi, &sl4).unwrap();
    assert!(!par.is_borel);
    assert_eq!(par.tau.len(), 1);
    let kind = ModelKind::Grass(2, 4);
    let e = |i, j| ApartmentChart::elementary(4, i, j, p("t")).g;
    for (i, j, inside) in [
        (0, 2, true),
        (1, 3, true),
        (0, 1, true),
        (3, 2, true),
        (2, 0, false),
        (3, 1, false),
    ] {
        assert_eq!(par.contains(&e(i, j), kind), inside, "E_{i}{j}");
    }

    let sl3 = sl(3);
    let rho = sl3.restrict(&sl3.absolute.rho());
    let par = p_chi_data(&rho, &sl3).unwrap();
    assert!(par.is_borel);
    assert_eq!(par.chambers.len(), 1);

    let x = line(p("1"), p("t^(1/2)"));
    for c in [qi(1), qi(-2), q(1, 3)] {
        let r = interval_chi_tree(&x, &c, 8).unwrap();
        assert_eq!(r.points, vec![TreePoint::apartment(q(1, 4))]);
    }
}

#[test]
fn character_interval_on_a_grassmannian_family() {
    let x = btgit_core::models::make_point(
        ModelKind::Grass(2, 4),
        btgit_core::models::RawPoint {
            rows: Some(vec![v(&["1", "0", "0", "1"]), v(&["0", "1", "1", "0"])]),
            ..Default::default()
        },
    )
    .unwrap();
    let sl4 = sl(4);
    // x is K-rational, so only its carrying chart sees it as semistable
    let family = [ApartmentChart::identity(4)];
    assert!(matches!(
        interval_chi_family(
            &x,
            &[qi(1), qi(0), qi(0)],
            &unipotent_family(4, 1, &[-1, 0, 1]),
            2
        ),
        Err(TreeError::Unstable)
    ));
    let chi = sl4.restrict(&sl4.absolute.project(&[qi(1), qi(1), qi(0), qi(0)]));
    let r = interval_chi_family(&x, &chi, &family, 2).unwrap();
    assert_eq!(r.value, ExtQ::Finite(qi(0)));
    let face = r
        .faces
        .iter()
        .find(|(i, _)| *i == 0)
        .unwrap()
        .1
        .as_ref()
        .unwrap();
    assert_eq!(face.dimension().unwrap(), 1);

    let generic = sl4.restrict(&sl4.absolute.project(&[qi(3), qi(1), qi(0), qi(-4)]));
    let r = interval_chi_family(&x, &generic, &family, 2).unwrap();
    assert_eq!(r.value, ExtQ::PosInf);
}

fn check_chart_restriction(x: &ModelPoint, z: &TreePoint, g: &ApartmentChart) {
    let rel = sl(2);
    let local = act(&g.inverse().unwrap(), x).unwrap();
    let res =
        btgit_core::interval::interval_a(&local.weighted_coordinates(0).unwrap(), &rel).unwrap();
    let u = res.singleton.unwrap()[0].clone();
    match g.coordinate(z).unwrap() {
        Some(c) => assert_eq!(c, u),
        None => assert_ne!(&g.point(&u).unwrap(), z),
    }
}

#[test]
fn sampled_tree_properties() {
    let mut r = rng(41);
    for _ in 0..60 {
        let x = nonrational_line(&mut r);
        let i = interval_tree(&x, 64).unwrap();
        assert_eq!(i.certificate, Certificate::Exact);
        let z = i.singleton().expect("single point").clone();
        assert!(ss_at(&x, &z).unwrap());
        assert!(!z.is_vertex());

        let g = sl2_k(&mut r);
        let gx = act(&g, &x).unwrap();
        let gi = interval_tree(&gx, 64).unwrap();
        assert_eq!(gi.singleton(), Some(&tree_act(&g, &z).unwrap()));

        for chart in unipotent_family(2, 2, &[-1, 0, 1])
            .iter()
            .chain([&ApartmentChart { g: g.clone() }])
        {
            check_chart_restriction(&x, &z, chart);
        }

        // once the family reaches I(x), its minimizers assemble exactly I(x)
        let mut full = unipotent_family(2, 2, &[-1, 0, 1]);
        full.push(ApartmentChart::lower_unipotent(z.b.clone()));
        full.push(ApartmentChart { g: g.clone() });
        let lower = borel_subfamily(&full, false);
        let a = assemble_tree(&r_tilde_estimate(&x, &full, 2).unwrap(), &full).unwrap();
        let b = assemble_tree(&r_tilde_estimate(&x, &lower, 2).unwrap(), &lower).unwrap();
        assert_eq!(a, [z.clone()].into());
        assert_eq!(a, b);
    }
    for _ in 0..30 {
        let x = rational_line(&mut r);
        let i = interval_tree(&x, 64).unwrap();
        assert!(i.is_empty());
        let w = i.witness.unwrap();
        let ModelPoint::Proj { coords } = &x else {
            unreachable!()
        };
        // the witness apartment has x as an end
        let end = [w.g[0][0].clone(), w.g[1][0].clone()];
        assert!((&end[0] * &coords[1] - &end[1] * &coords[0]).is_zero());
        let values: Vec<LogValue> = (1..=4)
            .map(|d| {
                r_tilde_estimate(&x, &unipotent_family(2, d, &[-1, 0, 1]), 2)
                    .unwrap()
                    .value
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
    }
}

fn tree_point() -> impl Strategy<Value = TreePoint> {
    (
        prop::collection::vec((-3i64..=3, -2i64..=2), 0..3),
        -6i64..=6,
        1i64..=4,
    )
        .prop_map(|(terms, u, den)| {
            let b = P::from_terms(terms.into_iter().map(|(e, c)| (qi(e), qi(c))));
            TreePoint::new(b, q(u, den))
        })
}

fn sl2_matrix() -> impl Strategy<Value = matrix::PMat> {
    any::<u64>().prop_map(|s| sl2_k(&mut rng(s)))
}

proptest! {
    #[test]
    fn distance_is_a_tree_metric(a in tree_point(), b in tree_point(), c in tree_point()) {
        prop_assert_eq!(tree_distance(&a, &b), tree_distance(&b, &a));
        prop_assert!(tree_distance(&a, &c) <= tree_distance(&a, &b) + tree_distance(&b, &c));
        let d = tree_distance(&a, &b);
        prop_assert_eq!(geodesic_point(&a, &b, &Q::zero()), a.clone());
        prop_assert_eq!(geodesic_point(&a, &b, &d), b.clone());
        let m = geodesic_point(&a, &b, &(d.clone() / qi(3)));
        prop_assert_eq!(tree_distance(&a, &m) + tree_distance(&m, &b), d);
    }

    #[test]
    fn action_is_an_isometric_group_action(a in tree_point(), b in tree_point(), g in sl2_matrix(), h in sl2_matrix()) {
        let ga = tree_act(&g, &a).unwrap();
        prop_assert_eq!(tree_distance(&ga, &tree_act(&g, &b).unwrap()), tree_distance(&a, &b));
        let gh = matrix::mul(&g, &h);
        prop_assert_eq!(tree_act(&gh, &a).unwrap(), tree_act(&g, &tree_act(&h, &a).unwrap()).unwrap());
    }

    #[test]
    fn superlevel_sets_of_f_chi_are_convex(a in tree_point(), b in tree_point(), c in -3i64..=3, k in 1i64..=7) {
        let chi = qi(c);
        let s = tree_distance(&a, &b) * q(k, 8);
        let m = geodesic_point(&a, &b, &s);
        let low = f_chi_tree(&a, &chi).min(f_chi_tree(&b, &chi));
        prop_assert!(f_chi_tree(&m, &chi) >= low);
    }

    #[test]
    fn f_chi_on_parabolic_charts(c in 1i64..=3, b in tree_point(), k in -2i64..=2, us in prop::collection::vec(-8i64..=8, 3)) {
        // upper-triangular elements lie in P^χ for χ > 0
        let chi = qi(c);
        let torus = vec![vec![P::t_pow(qi(k)), P::zero()], vec![P::zero(), P::t_pow(qi(-k))]];
        let g = matrix::mul(&ApartmentChart::upper_unipotent(b.b.clone()).g, &torus);
        let chart = ApartmentChart { g };
        let offsets: Vec<Q> = us.iter().map(|&u| {
            let u = q(u, 4);
            f_chi_tree(&chart.point(&u).unwrap(), &chi) - &chi * &u
        }).collect();
        prop_assert!(offsets.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn f_chi_constant_on_spheres_around_the_retraction(z in tree_point(), b in tree_point()) {
        // an upper unipotent fixing z_A stabilises the sphere through z
        let za = z.retraction();
        let n = match b.b.valuation().finite() {
            Some(v) => b.b.shift(&(&za.u * qi(-2) - v).ceil()),
            None => P::zero(),
        };
        let g = ApartmentChart::upper_unipotent(n).g;
        prop_assert_eq!(tree_act(&g, &za).unwrap(), za.clone());
        let gz = tree_act(&g, &z).unwrap();
        prop_assert_eq!(tree_distance(&gz, &za), tree_distance(&z, &za));
        for c in [1, 2] {
            prop_assert_eq!(f_chi_tree(&gz, &qi(c)), f_chi_tree(&z, &qi(c)));
        }
    }

    #[test]
    fn r_log_is_antisymmetric(s in any::<u64>(), t in any::<u64>()) {
        let mut r = rng(s);
        let x = nonrational_line(&mut r);
        let g = ApartmentChart { g: sl2_k(&mut rng(t)) };
        let gi = ApartmentChart { g: g.inverse().unwrap() };
        let y = act(&gi.g, &x).unwrap();
        let (LogValue::Finite(a), LogValue::Finite(b)) = (r_log(&x, &g, 2).unwrap(), r_log(&y, &gi, 2).unwrap()) else {
            panic!("finite on stable points")
        };
        prop_assert_eq!(a, -b);
    }
}
