mod common;

use btgit_core::apartment::{distance2, nu};
use btgit_core::interval::interval_a;
use btgit_core::linalg;
use btgit_core::models::{act, make_point, torus_element, ModelKind, ModelPoint, RawPoint};
use btgit_core::polyhedra::{
    cone_generators, cone_hull, min_enclosing_ball, min_of_forms, minimax_face, polar_cone,
    AffineForm, HullMode, Metric, QPolytope,
};
use btgit_core::rational::{q, qi, ExtQ, Q};
use btgit_core::rootdata::{Family, RelativeDatum, RootDatum};
use btgit_core::torusgit::{mu_k, mu_residue, stability_status};
use btgit_core::valfield::{PuiseuxElement as P, Valuation};
use common::*;
use num_traits::Zero;
use proptest::prelude::*;

fn puiseux_s(den: i64) -> impl Strategy<Value = P> {
    prop::collection::vec((-6i64..=6, -4i64..=4), 0..4)
        .prop_map(move |ts| P::from_terms(ts.into_iter().map(|(e, c)| (q(e, den), qi(c)))))
}

fn qvec(dim: usize, r: i64) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-r..=r, 1i64..=3), dim)
        .prop_map(|v| v.into_iter().map(|(a, b)| q(a, b)).collect())
}

fn split(f: Family, l: usize) -> RelativeDatum {
    RelativeDatum::split(RootDatum::build(f, l).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(a in puiseux_s(2), b in puiseux_s(3), c in puiseux_s(6)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!((&a * &b).valuation(), a.valuation() + b.valuation());
        let s = (&a + &b).valuation();
        prop_assert!(s >= a.valuation().min(b.valuation()));
        if a.valuation() != b.valuation() {
            prop_assert_eq!(s, a.valuation().min(b.valuation()));
        }
        let back: P = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a.clone());
    }

    #[test]
    fn truncated_inverse_is_an_inverse(a in puiseux_s(2), prec in -2i64..=6) {
        prop_assume!(!a.is_zero());
        let prec = qi(prec);
        let inv = a.inverse_truncated(&prec).unwrap();
        let err = &(&a * &inv) - &P::one();
        let Valuation::Finite(va) = a.valuation() else { unreachable!() };
        prop_assert!(err.valuation() >= Valuation::Finite(&prec + &va));
    }

    #[test]
    fn twist_is_an_involutive_automorphism(a in puiseux_s(2), b in puiseux_s(2)) {
        let ta = a.tau_twist().unwrap();
        prop_assert_eq!(ta.tau_twist().unwrap(), a.clone());
        prop_assert_eq!((&a * &b).tau_twist().unwrap(), &ta * &b.tau_twist().unwrap());
        prop_assert_eq!(ta.valuation(), a.valuation());
    }

    #[test]
    fn convex_combinations_are_members(pts in prop::collection::vec(qvec(3, 5), 1..6), ws in prop::collection::vec(1i64..=5, 6)) {
        let poly = QPolytope::new(3, pts.clone());
        let total: i64 = ws[..pts.len()].iter().sum();
        let mut c = linalg::zeros(3);
        for (p, w) in pts.iter().zip(&ws) {
            c = linalg::axpy(&c, &q(*w, total), p);
        }
        prop_assert!(poly.member(&c, HullMode::Closure).unwrap());
        for v in poly.vertices().unwrap() {
            prop_assert!(pts.contains(&v));
        }
    }

    #[test]
    fn polar_of_polar_is_the_cone(gens in prop::collection::vec(qvec(3, 3), 1..5)) {
        let polar = polar_cone(&gens, 3);
        let g = cone_generators(&polar);
        let mut dual: Vec<Vec<Q>> = g.rays.clone();
        for l in &g.lines {
            dual.push(l.clone());
            dual.push(linalg::neg(l));
        }
        prop_assert!(polar_cone(&dual, 3).same_set(&cone_hull(&gens, 3)).unwrap());
    }

    #[test]
    fn minimax_value_dominates_samples(forms in prop::collection::vec((qvec(2, 3), -4i64..=4), 1..6), z in qvec(2, 6)) {
        let forms: Vec<AffineForm> = forms.into_iter().map(|(normal, o)| AffineForm { normal, offset: qi(o) }).collect();
        let f = minimax_face(&forms).unwrap();
        match f.value {
            ExtQ::Finite(v) => {
                prop_assert!(min_of_forms(&forms, &z) <= v);
                let w = f.face.unwrap().feasible_point().unwrap().unwrap();
                prop_assert_eq!(min_of_forms(&forms, &w), v);
            }
            ExtQ::PosInf => {
                for form in &forms {
                    prop_assert!(linalg::dot(&form.normal, &f.witness) > Q::zero());
                }
            }
        }
    }

    #[test]
    fn enclosing_ball_contains_its_points(pts in prop::collection::vec(qvec(2, 5), 1..7)) {
        let sl3 = split(Family::A, 2);
        for metric in [Metric::euclidean(), Metric::gram(&sl3.gram)] {
            let b = min_enclosing_ball(&pts, &metric).unwrap();
            for p in &pts {
                prop_assert!(metric.dist2(p, &b.center) <= b.radius2);
            }
            prop_assert!(pts.iter().any(|p| metric.dist2(p, &b.center) == b.radius2));
        }
    }

    #[test]
    fn distance_is_weyl_invariant(a in qvec(2, 4), b in qvec(2, 4)) {
        for rel in [split(Family::A, 2), split(Family::C, 2), split(Family::B, 2)] {
            for r in rel.relative_roots() {
                let ra = rel.reflect_cocharacter(&r, &a);
                let rb = rel.reflect_cocharacter(&r, &b);
                prop_assert_eq!(distance2(&ra, &rb, &rel), distance2(&a, &b, &rel));
            }
        }
    }

    #[test]
    fn nu_is_a_homomorphism(a in prop::collection::vec(-4i64..=4, 2), b in prop::collection::vec(-4i64..=4, 2)) {
        let rel = split(Family::A, 2);
        let diag = |e: &[i64]| vec![P::monomial(qi(1), qi(e[0])), P::monomial(qi(-1), qi(e[1])), P::monomial(qi(-1), qi(-e[0] - e[1]))];
        let prod: Vec<P> = diag(&a).iter().zip(diag(&b)).map(|(x, y)| x * &y).collect();
        prop_assert_eq!(nu(&prod, &rel).unwrap(), linalg::add(&nu(&diag(&a), &rel).unwrap(), &nu(&diag(&b), &rel).unwrap()));
    }

    #[test]
    fn intervals_are_torus_equivariant(seed in any::<u64>(), a in prop::collection::vec(-3i64..=3, 3)) {
        let mut r = rng(seed);
        let x = random_point(&mut r, ModelKind::Grass(2, 4), 2);
        let kind = x.kind();
        let rel = kind.relative();
        let amb: Vec<Q> = vec![qi(a[0]), qi(a[1]), qi(a[2]), qi(-a[0] - a[1] - a[2])];
        let s = torus_element(kind, &amb);
        let sx = act(&s, &x).unwrap();
        let wp = x.weighted_coordinates(0).unwrap();
        let ix = interval_a(&wp, &rel).unwrap();
        let isx = interval_a(&sx.weighted_coordinates(0).unwrap(), &rel).unwrap();
        let shift = rel.coords_of(&linalg::neg(&amb)).unwrap();
        prop_assert_eq!(stability_status(&wp, &rel).unwrap(), stability_status(&sx.weighted_coordinates(0).unwrap(), &rel).unwrap());
        match (ix.polyhedron, isx.polyhedron) {
            (Some(p1), Some(p2)) => prop_assert!(p1.translate(&shift).same_set(&p2).unwrap()),
            (None, None) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn residue_hulls_sit_inside_the_moment_polytope(seed in any::<u64>(), z in qvec(2, 3)) {
        let mut r = rng(seed);
        let x = random_point(&mut r, ModelKind::Proj(3), 2);
        let rel = x.kind().relative();
        let wp = x.weighted_coordinates(0).unwrap();
        let full = mu_k(&wp, &rel);
        for v in mu_residue(&wp, &rel, &z).points {
            prop_assert!(full.member(&v, HullMode::Closure).unwrap());
        }
        // inside the interval the residue hull contains the origin
        let res = interval_a(&wp, &rel).unwrap();
        if let Some(p) = res.polyhedron.as_ref().and_then(|p| p.feasible_point().unwrap()) {
            prop_assert!(mu_residue(&wp, &rel, &p).member(&linalg::zeros(2), HullMode::Closure).unwrap());
        }
    }

    #[test]
    fn the_group_acts_on_grassmannians(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_point(&mut r, ModelKind::Grass(2, 4), 1);
        let g = sln_k(&mut r, 4, 2);
        let h = sln_k(&mut r, 4, 1);
        let gh = btgit_core::valfield::matrix::mul(&g, &h);
        let lhs = act(&gh, &x).unwrap();
        prop_assert_eq!(&lhs, &act(&g, &act(&h, &x).unwrap()).unwrap());
        let ModelPoint::Grass { plucker, .. } = lhs else { unreachable!() };
        let rebuilt = make_point(ModelKind::Grass(2, 4), RawPoint { plucker: Some(plucker), ..Default::default() });
        prop_assert!(rebuilt.is_ok());
        prop_assert_eq!(btgit_core::valfield::matrix::det(&gh), P::one());
    }
}
