//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs with `harness = false` so the report shows up in plain `cargo test`.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use btgit_core::interval::{interval_a, interval_a_chi, IntervalResult};
use btgit_core::models::{make_point, ModelKind, ModelPoint, RawPoint};
use btgit_core::polyhedra::{HullMode, QPolyhedron};
use btgit_core::rational::{q, qi, ExtQ, Q};
use btgit_core::rootdata::{Family, PresetName, RelativeDatum};
use btgit_core::torusgit::*;
use btgit_core::treebuilding::*;
use btgit_core::valfield::matrix;
use btgit_core::valfield::PuiseuxElement as P;
use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn view(x: &ModelPoint) -> Vec<btgit_core::torusgit::WeightedPoint> {
    match x.kind() {
        ModelKind::Flag(n) => vec![x.weighted_for(&vec![qi(1); n - 1]).unwrap()],
        ModelKind::Sp4Flag => vec![x.weighted_for(&[qi(1), qi(1)]).unwrap()],
        ModelKind::Su3Pair => vec![
            x.weighted_coordinates(0).unwrap(),
            x.weighted_coordinates(1).unwrap(),
        ],
        _ => vec![x.weighted_coordinates(0).unwrap()],
    }
}

fn sample(r: &mut ChaCha8Rng, kind: ModelKind, i: usize) -> ModelPoint {
    let den = 1 + (i % 3) as i64;
    match kind {
        ModelKind::Sp4Flag => sp4_flag(r, den),
        ModelKind::Sp4Line => loop {
            let c = k_rows(r, 1, 4, den).remove(0);
            if let Ok(x) = make_point(
                kind,
                RawPoint {
                    coords: Some(c),
                    ..Default::default()
                },
            ) {
                break x;
            }
        },
        ModelKind::Sp4Lagrangian => sp4_flag(r, den).project(2).unwrap(),
        ModelKind::Su3Pair => su3_pair(r),
        _ => random_point(r, kind, den),
    }
}

fn canon(p: &QPolyhedron) -> QPolyhedron {
    p.canonical().unwrap()
}

fn grid(center: &[Q], rank: usize) -> Vec<Vec<Q>> {
    let axis: Vec<Q> = match rank {
        1 => (0..200).map(|k| q(k - 100, 20)).collect(),
        2 => (0..15).map(|k| q(k - 7, 6)).collect(),
        _ => (0..6).map(|k| q(2 * k - 5, 8)).collect(),
    };
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter()
                    .map(move |a| [p.clone(), vec![a.clone()]].concat())
            })
            .collect();
    }
    out.into_iter()
        .map(|p| p.iter().zip(center).map(|(a, c)| a + c).collect())
        .collect()
}

fn center(res: &IntervalResult, rank: usize) -> Vec<Q> {
    res.polyhedron
        .as_ref()
        .and_then(|p| p.feasible_point().unwrap())
        .unwrap_or_else(|| vec![qi(0); rank])
}

fn c1() -> Outcome {
    let mut r = rng(101);
    let (mut inside, mut total) = (0, 0);
    for kind in [
        ModelKind::Proj(2),
        ModelKind::Proj(3),
        ModelKind::Grass(2, 4),
    ] {
        let rel = kind.relative();
        for i in 0..20 {
            let x = sample(&mut r, kind, i).weighted_coordinates(0).unwrap();
            let res = interval_a(&x, &rel).unwrap();
            for z in grid(&center(&res, rel.rank()), rel.rank()) {
                let oracle = mu_residue(&x, &rel, &z)
                    .member(&vec![qi(0); rel.rank()], HullMode::Closure)
                    .unwrap();
                ensure!(
                    res.contains(&z) == oracle,
                    "{kind} sample {i}: mismatch at {z:?}"
                );
                inside += oracle as usize;
                total += 1;
            }
        }
    }
    Ok(format!("{total} grid tests, {inside} inside, 0 mismatches"))
}

fn c2() -> Outcome {
    let mut r = rng(202);
    for i in 0..50 {
        let x = nonrational_line(&mut r);
        let res = interval_tree(&x, 64).unwrap();
        ensure!(
            res.certificate == Certificate::Exact,
            "sample {i}: certificate {:?}",
            res.certificate
        );
        ensure!(
            res.singleton().is_some(),
            "sample {i}: {} points",
            res.points.len()
        );
    }
    let x = line(p("1"), p("t^(1/2)"));
    let y = line(p("1"), p("1 + t^(1/2)"));
    let g = matrix::from_ints(&[&[1, 0], &[1, 1]]);
    ensure!(
        btgit_core::models::act(&g, &x).unwrap() == y,
        "g does not carry x to y"
    );
    let zx = interval_tree(&x, 64)
        .unwrap()
        .singleton()
        .cloned()
        .ok_or("x not a singleton")?;
    let zy = interval_tree(&y, 64)
        .unwrap()
        .singleton()
        .cloned()
        .ok_or("y not a singleton")?;
    ensure!(
        tree_act(&g, &zx).unwrap() == zy,
        "I(gx) = {zy} but g·I(x) = {}",
        tree_act(&g, &zx).unwrap()
    );
    Ok(format!(
        "50 exact singletons; I([1:1+t^(1/2)]) = g·I([1:t^(1/2)]) = {zy}"
    ))
}

fn c3() -> Outcome {
    let mut presets: Vec<PresetName> = (1..=4).map(|l| PresetName::Split(Family::A, l)).collect();
    presets.extend(
        [
            (Family::B, 2),
            (Family::B, 3),
            (Family::C, 2),
            (Family::C, 3),
            (Family::D, 4),
        ]
        .map(|(f, l)| PresetName::Split(f, l)),
    );
    presets.extend([PresetName::Su3, PresetName::NonsplitC(2)]);
    let mut cases = 0;
    for preset in &presets {
        let l = RelativeDatum::preset(preset).unwrap().absolute.rank;
        for mask in 1u32..(1 << l) {
            let j: Vec<usize> = (0..l)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            let c = classify_parabolic(preset, &j).unwrap();
            ensure!(
                c.table == c.scan,
                "{preset} J={j:?}: table {} scan {}",
                c.table,
                c.scan
            );
            cases += 1;
        }
    }
    Ok(format!("{cases} (preset, J) cases agree"))
}

fn c4() -> Outcome {
    let mut r = rng(303);
    let kinds = [
        ModelKind::Proj(2),
        ModelKind::Proj(3),
        ModelKind::Grass(2, 4),
        ModelKind::Flag(3),
        ModelKind::Sp4Flag,
        ModelKind::Sp4Line,
        ModelKind::Sp4Lagrangian,
        ModelKind::Su3Pair,
    ];
    let mut checked = 0;
    for kind in kinds {
        let rel = kind.relative();
        let roots = rel.relative_roots();
        for i in 0..100 {
            let x = sample(&mut r, kind, i);
            for (k, f) in x.factors().iter().enumerate() {
                let omega = &rel.absolute.fundamental_weights[f.omega - 1];
                let allowed: Vec<Vec<Q>> = rel
                    .absolute
                    .weyl_orbit(omega)
                    .iter()
                    .map(|w| rel.restrict(w))
                    .collect();
                let mu = mu_k(&x.weighted_coordinates(k).unwrap(), &rel);
                let (bv, be) = skeleton_violations(&mu, &allowed, &roots).unwrap();
                ensure!(
                    bv == 0 && be == 0,
                    "{kind} sample {i} factor {k}: {bv} vertex, {be} edge violations"
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} weight polytopes, 0 violations"))
}

fn c5() -> Outcome {
    let mut r = rng(404);
    let kinds = [
        ModelKind::Proj(2),
        ModelKind::Proj(3),
        ModelKind::Grass(2, 4),
        ModelKind::Flag(3),
        ModelKind::Sp4Flag,
        ModelKind::Sp4Line,
        ModelKind::Su3Pair,
    ];
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for kind in kinds {
        let rel = kind.relative();
        for i in 0..30 {
            for x in view(&sample(&mut r, kind, i)) {
                let st = stability_status(&x, &rel).unwrap();
                let res = interval_a(&x, &rel).unwrap();
                let bounded = !res.is_empty() && res.bounded;
                ensure!(
                    bounded == (st == Stability::Stable),
                    "{kind} sample {i}: bounded {bounded}, status {st:?}"
                );
                ensure!(
                    res.is_empty() == (st == Stability::Unstable),
                    "{kind} sample {i}: emptiness vs {st:?}"
                );
                let Some(poly) = &res.polyhedron else {
                    continue;
                };
                let stable_at = |z: &[Q]| {
                    polytope_status(&mu_residue(&x, &rel, z)).unwrap() == Stability::Stable
                };
                match &res.singleton {
                    Some(z) => {
                        ensure!(
                            stable_at(z),
                            "{kind} sample {i}: singleton {z:?} not stable there"
                        );
                        *tally.entry("singleton").or_default() += 1;
                    }
                    None => {
                        let v = poly.v_rep().unwrap().unwrap();
                        let mut probes = v.vertices.clone();
                        probes.push(poly.feasible_point().unwrap().unwrap());
                        if let (Some(a), Some(b)) = (v.vertices.first(), v.vertices.last()) {
                            probes.push(a.iter().zip(b).map(|(s, t)| (s + t) / qi(2)).collect());
                        }
                        ensure!(
                            probes.iter().all(|z| !stable_at(z)),
                            "{kind} sample {i}: stable point in a wide interval"
                        );
                        *tally.entry("wide").or_default() += 1;
                    }
                }
            }
        }
    }

    // K-rational points of the line are unstable: r̃ has to run off to −∞
    let mut r = rng(405);
    let mut trails = Vec::new();
    for _ in 0..10 {
        // ζ = (a + bt)/(1 − t) has digits a, a + b, a + b, … inside −3..3
        let (a, s) = loop {
            let pair = (r.gen_range(-2..=2), r.gen_range(-3..=3));
            if pair != (0, 0) {
                break pair;
            }
        };
        let b = s - a;
        let x = line(p("1 - t"), P::from_terms([(qi(0), qi(a)), (qi(1), qi(b))]));
        let values: Vec<LogValue> = (1..=4)
            .map(|d| {
                r_tilde_estimate(
                    &x,
                    &borel_subfamily(&unipotent_family(2, d, &[-3, -2, -1, 0, 1, 2, 3]), false),
                    2,
                )
                .unwrap()
                .value
            })
            .collect();
        let diverging =
            values.iter().any(|v| *v == LogValue::NegInf) || values.windows(2).all(|w| w[1] < w[0]);
        ensure!(diverging, "[1-t : {a} + {b}t]: r~ by depth {values:?}");
        trails.push(values.last().unwrap().to_string());
    }
    Ok(format!(
        "{} singleton and {} wide intervals consistent; depth-4 r~ on 10 K-points: {}",
        tally.get("singleton").unwrap_or(&0),
        tally.get("wide").unwrap_or(&0),
        trails.join(" ")
    ))
}

struct Cell {
    id: ChamberId,
    reps: Vec<Vec<Q>>,
}

fn cells(rel: &RelativeDatum) -> Vec<Cell> {
    let arr = Arrangement::new(rel);
    let mut out: Vec<Cell> = Vec::new();
    for a in 0..=4 {
        for b in 0..=4 {
            if a == 0 && b == 0 {
                continue;
            }
            let coeffs = vec![qi(a), qi(b)];
            let id = chamber_of(&weight_from_coeffs(rel, &coeffs), rel, &arr).unwrap();
            match out.iter_mut().find(|c| c.id == id) {
                Some(c) if c.reps.len() < 2 && !c.reps.iter().any(|r| proportional(r, &coeffs)) => {
                    c.reps.push(coeffs)
                }
                Some(_) => {}
                None => out.push(Cell {
                    id,
                    reps: vec![coeffs],
                }),
            }
        }
    }
    out
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    &a[0] * &b[1] == &a[1] * &b[0]
}

fn c6() -> Outcome {
    let mut r = rng(606);
    let mut pairs_checked = 0;
    let mut inclusions = 0;
    let mut summary = Vec::new();
    for (kind, name) in [(ModelKind::Flag(3), "A2"), (ModelKind::Sp4Flag, "C2")] {
        let rel = kind.relative();
        let cs = cells(&rel);
        let pairs: Vec<(usize, usize)> = (0..cs.len())
            .flat_map(|i| (0..cs.len()).map(move |j| (i, j)))
            .filter(|&(lo, up)| chamber_leq(&cs[lo].id, &cs[up].id))
            .collect();
        summary.push(format!("{name}: {} cells, {} pairs", cs.len(), pairs.len()));
        for i in 0..20 {
            let x = sample(&mut r, kind, i);
            let data = |coeffs: &[Q]| {
                let w = x.weighted_for(coeffs).unwrap();
                (
                    stability_status(&w, &rel).unwrap(),
                    interval_a(&w, &rel).unwrap(),
                )
            };
            for &(lo, up) in &pairs {
                for lam_up in &cs[up].reps {
                    for lam_lo in &cs[lo].reps {
                        let (s_up, i_up) = data(lam_up);
                        let (s_lo, i_lo) = data(lam_lo);
                        ensure!(
                            !s_up.is_semistable() || s_lo.is_semistable(),
                            "{name} sample {i}: semistable for {lam_up:?} but not for {lam_lo:?}"
                        );
                        pairs_checked += 1;
                        if let (Some(pu), Some(pl)) = (&i_up.polyhedron, &i_lo.polyhedron) {
                            ensure!(
                                canon(&pu.intersect(pl)) == canon(pu),
                                "{name} sample {i}: I(x,{lam_up:?}) not inside I(x,{lam_lo:?})"
                            );
                            inclusions += 1;
                        } else {
                            ensure!(i_up.is_empty(), "{name} sample {i}: I(x,{lam_lo:?}) empty but I(x,{lam_up:?}) is not");
                        }
                    }
                }
            }
        }
    }

    // on the line every ample class is a multiple of ω₁, so C(X, x) is one class
    let mut r = rng(607);
    let sl2 = ModelKind::Proj(2).relative();
    for i in 0..20 {
        let x = nonrational_line(&mut r);
        let z = interval_tree(&x, 64)
            .unwrap()
            .singleton()
            .cloned()
            .ok_or("not a singleton")?;
        let chart = ApartmentChart::lower_unipotent(z.b.clone());
        let local = btgit_core::models::act(&chart.inverse().unwrap(), &x).unwrap();
        let pieces: Vec<TreePoint> = (1..=3)
            .map(|n| {
                let res = interval_a(&local.weighted_for(&[qi(n)]).unwrap(), &sl2).unwrap();
                chart.point(&res.singleton.unwrap()[0]).unwrap()
            })
            .collect();
        ensure!(
            pieces.iter().all(|p| *p == z),
            "line sample {i}: union over classes is not the point {z}"
        );
    }
    Ok(format!("{}; {pairs_checked} semistability and {inclusions} interval inclusions; 20 line unions connected", summary.join(", ")))
}

fn c7() -> Outcome {
    let mut r = rng(707);
    let rel = ModelKind::Sp4Flag.relative();
    let (mut stable, mut unstable) = (0, 0);
    for i in 0..40 {
        let x = sp4_flag(&mut r, 1 + (i % 3) as i64);
        let w = |c: [i64; 2]| x.weighted_for(&[qi(c[0]), qi(c[1])]).unwrap();
        let both = w([1, 1]);
        let st = stability_status(&both, &rel).unwrap();
        ensure!(
            st != Stability::StrictlySemistable,
            "sample {i}: strictly semistable for ω1+ω2"
        );
        let i12 = interval_a(&both, &rel).unwrap();
        let i1 = interval_a(&w([1, 0]), &rel).unwrap();
        let i2 = interval_a(&w([0, 1]), &rel).unwrap();
        let meet = match (&i1.polyhedron, &i2.polyhedron) {
            (Some(a), Some(b)) => canon(&a.intersect(b)),
            _ => canon(&QPolyhedron::new(
                rel.rank(),
                vec![btgit_core::polyhedra::Halfspace::new(
                    vec![qi(0); rel.rank()],
                    qi(1),
                )],
            )),
        };
        let lhs = match &i12.polyhedron {
            Some(p) => canon(p),
            None => canon(&QPolyhedron::new(
                rel.rank(),
                vec![btgit_core::polyhedra::Halfspace::new(
                    vec![qi(0); rel.rank()],
                    qi(1),
                )],
            )),
        };
        ensure!(
            lhs == meet,
            "sample {i}: I(ω1+ω2) differs from I(ω1) ∩ I(ω2)"
        );
        if st == Stability::Stable {
            ensure!(
                i12.singleton.is_some(),
                "sample {i}: semistable but not a singleton"
            );
            stable += 1;
        } else {
            unstable += 1;
        }
    }
    Ok(format!(
        "40 flags: {stable} stable singletons, {unstable} unstable, none strictly semistable"
    ))
}

fn c8() -> Outcome {
    let mut r = rng(808);
    let rel = ModelKind::Su3Pair.relative();
    for i in 0..25 {
        let x = su3_pair(&mut r);
        let a = interval_a(&x.weighted_coordinates(0).unwrap(), &rel).unwrap();
        let b = interval_a(&x.weighted_coordinates(1).unwrap(), &rel).unwrap();
        let (Some(pa), Some(pb)) = (&a.polyhedron, &b.polyhedron) else {
            return Err(format!("sample {i}: a factor is unstable"));
        };
        let meet = pa.intersect(pb);
        ensure!(
            meet.singleton().unwrap().is_some(),
            "sample {i}: I1(x) ∩ I1(y) is not a point"
        );
    }
    Ok("25 pairs, each intersection a single point".into())
}

fn random_tree_point(r: &mut ChaCha8Rng) -> TreePoint {
    let b = P::from_terms((0..r.gen_range(0..3)).map(|_| {
        (
            q(r.gen_range(-6..=6), r.gen_range(1..=2)),
            qi(r.gen_range(-2..=2)),
        )
    }));
    TreePoint::new(b, q(r.gen_range(-8..=8), r.gen_range(1..=4)))
}

fn c9() -> Outcome {
    let mut r = rng(909);
    // χ-semistability at z against the face where ⟨χ,·⟩ peaks
    let mut probes = 0;
    let mut on_face = 0;
    for kind in [ModelKind::Proj(3), ModelKind::Grass(2, 4)] {
        let rel = kind.relative();
        let chis: Vec<Vec<Q>> = [[1, 0, 0, -1], [1, 1, 0, -2], [2, -1, 0, -1]]
            .iter()
            .map(|c| rel.restrict(&c.map(qi)[..kind.group_size()]))
            .collect();
        let mut taken = 0;
        while taken < 6 {
            let wp = sample(&mut r, kind, taken).weighted_coordinates(0).unwrap();
            let res = interval_a(&wp, &rel).unwrap();
            let Some(poly) = &res.polyhedron else {
                continue;
            };
            taken += 1;
            for chi in &chis {
                let ci = interval_a_chi(&res, chi).unwrap();
                let mut zs: Vec<Vec<Q>> = grid(&center(&res, rel.rank()), rel.rank())
                    .into_iter()
                    .filter(|z| poly.contains(z))
                    .collect();
                if let Some(face) = &ci.face {
                    zs.extend(face.v_rep().unwrap().unwrap().vertices);
                }
                for z in zs {
                    let ss = chi_status_polytope(&mu_residue(&wp, &rel, &z), chi).unwrap()
                        != ChiStability::Unstable;
                    let peak = ExtQ::Finite(btgit_core::linalg::dot(chi, &z)) == ci.value;
                    ensure!(
                        ss == peak,
                        "{kind}: χ {chi:?} at {z:?}: semistable {ss}, on face {peak}"
                    );
                    probes += 1;
                    on_face += peak as usize;
                }
            }
        }
    }

    let mut r2 = rng(910);
    for k in 0..100 {
        let chi = qi(r2.gen_range(-3..=3));
        let (a, b) = (random_tree_point(&mut r2), random_tree_point(&mut r2));
        let s = tree_distance(&a, &b) * q(r2.gen_range(0..=16), 16);
        let m = geodesic_point(&a, &b, &s);
        let low = f_chi_tree(&a, &chi).min(f_chi_tree(&b, &chi));
        ensure!(
            f_chi_tree(&m, &chi) >= low,
            "triple {k}: f_χ dips on the geodesic"
        );
    }

    let kind = ModelKind::Grass(2, 4);
    let rel = kind.relative();
    let generic: Vec<Vec<Q>> = [
        [1, 10, 100, -111],
        [-7, 30, 2, -25],
        [50, -3, -40, -7],
        [13, 1, -99, 85],
        [-60, -2, 17, 45],
    ]
    .iter()
    .map(|c| rel.restrict(&c.map(qi)))
    .collect();
    let mut points = vec![make_point(
        kind,
        RawPoint {
            plucker: Some(v(&["1", "1", "0", "0", "-1", "-1"])),
            ..Default::default()
        },
    )
    .unwrap()];
    while points.len() < 20 {
        let x = sample(&mut r, kind, points.len());
        if stability_status(&x.weighted_coordinates(0).unwrap(), &rel)
            .unwrap()
            .is_semistable()
        {
            points.push(x);
        }
    }
    let mut singles = 0;
    for (i, x) in points.iter().enumerate() {
        let res = interval_a(&x.weighted_coordinates(0).unwrap(), &rel).unwrap();
        for chi in &generic {
            let ci = interval_a_chi(&res, chi).unwrap();
            if i == 0 {
                ensure!(
                    ci.value == ExtQ::PosInf,
                    "line: generic χ gives {:?}",
                    ci.value
                );
                continue;
            }
            match &ci.face {
                Some(f) => {
                    ensure!(
                        f.singleton().unwrap().is_some(),
                        "point {i}: I_A(x, {chi:?}) is not a point"
                    );
                    singles += 1;
                }
                None => ensure!(!res.bounded, "point {i}: +∞ on a bounded interval"),
            }
        }
    }
    let line_res = interval_a(&points[0].weighted_coordinates(0).unwrap(), &rel).unwrap();
    let e12 = rel.restrict(&[qi(1), qi(1), qi(0), qi(0)]);
    let ci = interval_a_chi(&line_res, &e12).unwrap();
    ensure!(
        ci.value == ExtQ::Finite(qi(0)),
        "line: n_A for e1+e2 is {:?}",
        ci.value
    );
    ensure!(
        ci.face.as_ref().map(canon) == line_res.polyhedron.as_ref().map(canon),
        "line: face for e1+e2 is not the whole line"
    );
    Ok(format!(
        "{probes} face-equality probes ({on_face} on faces); 100 tree triples; {singles} generic singletons, line gives +inf and the full line"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("interval vs residue oracle", c1, 10),
        ("Drinfeld singleton and equivariance", c2, 5),
        ("classification table vs scan", c3, 60),
        ("weight polytope skeleton", c4, 0),
        ("boundedness, singletons, r~ divergence", c5, 0),
        ("VGIT monotonicity", c6, 0),
        ("Sp4 flags", c7, 0),
        ("SU3 pairs", c8, 0),
        ("character suite", c9, 30),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let over = *budget > 0 && took > Duration::from_secs(*budget);
        let limit = if *budget > 0 {
            format!(" / {budget}s")
        } else {
            String::new()
        };
        match (&outcome, over) {
            (Ok(detail), false) => println!(
                "criterion {}: PASS  {name} [{:.2}s{limit}] {detail}",
                k + 1,
                took.as_secs_f64()
            ),
            (Ok(detail), true) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name} [{:.2}s{limit}] over budget; {detail}",
                    k + 1,
                    took.as_secs_f64()
                );
            }
            (Err(e), _) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name} [{:.2}s{limit}] {e}",
                    k + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
