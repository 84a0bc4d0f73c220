use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use btgit_core::interval::{
    destabilizing_1ps, interval_a, interval_a_chi, lambda_a, IntervalResult,
};
use btgit_core::models::{act, check_group, make_point, ModelKind, ModelPoint, RawPoint};
use btgit_core::rational::{fmt_q, parse_q, qi, Q};
use btgit_core::rootdata::{PresetName, RelativeDatum};
use btgit_core::torusgit::{
    chamber_leq, chamber_of, chi_status, classify_parabolic, mu_k, stability_status,
    weight_from_coeffs, Arrangement, ChamberId, WeightedPoint,
};
use btgit_core::treebuilding::{
    default_degree, interval_chi_family, interval_tree, p_chi_data, unipotent_family,
};
use btgit_core::valfield::matrix::PMat;
use btgit_core::valfield::PuiseuxElement as P;

use crate::faces::describe;
use crate::svg::Figure;
use crate::{CliError, Command, CommandResult};

/// A rational on the wire: read from an integer or a `"p/q"` string, written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Int(i64),
            Str(String),
        }
        match Wire::deserialize(d)? {
            Wire::Int(n) => Ok(Rat(qi(n))),
            Wire::Str(s) => parse_q(&s).map(Rat).map_err(serde::de::Error::custom),
        }
    }
}

fn rats(v: &[Rat]) -> Vec<Q> {
    v.iter().map(|r| r.0.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_coeff: Option<u32>,
}

impl GroupPayload {
    fn preset_name(&self) -> Result<PresetName, CliError> {
        match (&self.preset, &self.family, self.rank) {
            (Some(p), None, None) => Ok(p.parse()?),
            (None, Some(f), Some(l)) => Ok(PresetName::Split(f.parse()?, l)),
            _ => Err(CliError::Validation(
                "give either `preset` or both `family` and `rank`".into(),
            )),
        }
    }
}

/// A point given as a bare coordinate vector or as a raw object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Coords(Vec<P>),
    Raw(RawPoint),
}

impl PointSpec {
    fn raw(&self) -> RawPoint {
        match self {
            PointSpec::Coords(c) => RawPoint {
                coords: Some(c.clone()),
                ..Default::default()
            },
            PointSpec::Raw(r) => r.clone(),
        }
    }

    /// A bare vector for a Grassmannian is read as Plücker coordinates.
    fn raw_for(&self, kind: ModelKind) -> RawPoint {
        match (kind, self) {
            (ModelKind::Grass(..), PointSpec::Coords(c)) => RawPoint {
                plucker: Some(c.clone()),
                ..Default::default()
            },
            _ => self.raw(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub depth: u32,
    pub digits: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointPayload {
    pub model: String,
    pub point: PointSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<PMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

struct Loaded {
    kind: ModelKind,
    rel: RelativeDatum,
    point: ModelPoint,
}

impl PointPayload {
    fn load(&self) -> Result<Loaded, CliError> {
        let kind: ModelKind = self.model.parse()?;
        let point = make_point(kind, self.point.raw_for(kind))?;
        Ok(Loaded {
            kind,
            rel: kind.relative(),
            point,
        })
    }

    /// The weighted point for the chosen line bundle.
    fn weighted(&self, l: &Loaded) -> Result<WeightedPoint, CliError> {
        match (&self.lambda, self.factor) {
            (Some(_), Some(_)) => Err(CliError::Validation(
                "give at most one of `lambda` and `factor`".into(),
            )),
            (Some(lam), None) => Ok(l.point.weighted_for(&rats(lam))?),
            (None, Some(f)) => Ok(l.point.weighted_coordinates(f)?),
            (None, None) => match l.kind {
                ModelKind::Flag(_) | ModelKind::Sp4Flag => {
                    Ok(l.point.weighted_for(&vec![qi(1); l.rel.absolute.rank])?)
                }
                _ => Ok(l.point.weighted_coordinates(0)?),
            },
        }
    }

    fn chi(&self, rel: &RelativeDatum) -> Result<Option<Vec<Q>>, CliError> {
        let Some(c) = &self.chi else { return Ok(None) };
        if c.len() != rel.rank() {
            return Err(CliError::Validation(format!(
                "χ has {} entries, the relative rank is {}",
                c.len(),
                rel.rank()
            )));
        }
        Ok(Some(rats(c)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreePayload {
    pub point: Vec<P>,
    #[serde(default = "default_radius", rename = "R")]
    pub radius: u32,
}

fn default_radius() -> u32 {
    64
}

fn parse<T: for<'de> Deserialize<'de>>(payload: &Value) -> Result<T, CliError> {
    serde_json::from_value(payload.clone()).map_err(|e| CliError::Validation(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

pub fn dispatch(c: Command, payload: &Value) -> Result<CommandResult, CliError> {
    match c {
        Command::Rootsys => rootsys(&parse(payload)?),
        Command::Classify => classify(&parse(payload)?),
        Command::Chambers => chambers(&parse(payload)?),
        Command::Status => status(&parse(payload)?),
        Command::Interval => interval(&parse(payload)?),
        Command::Tree => tree(&parse(payload)?),
        Command::Models => models(&parse(payload)?),
        Command::Chi => chi(&parse(payload)?),
    }
}

fn plain(json: Value) -> CommandResult {
    CommandResult { json, figure: None }
}

fn rootsys(p: &GroupPayload) -> Result<CommandResult, CliError> {
    let name = p.preset_name()?;
    let rel = RelativeDatum::preset(&name)?;
    let abs = &rel.absolute;
    Ok(plain(json!({
        "preset": name.to_string(),
        "absolute": to_value(abs),
        "positive_roots": abs.positive_roots().len(),
        "weyl_order": abs.weyl_order(),
        "relative": {
            "rank": rel.rank(),
            "inclusion": to_value(&Strs(&rel.inclusion)),
            "roots": to_value(&rel.roots),
            "simple_roots": to_value(&Strs(&rel.simple_roots)),
            "gram": to_value(&Strs(&rel.gram)),
            "split": rel.is_split(),
        },
    })))
}

/// Matrix of rationals as nested strings.
struct Strs<'a>(&'a [Vec<Q>]);

impl Serialize for Strs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            self.0
                .iter()
                .map(|row| row.iter().map(fmt_q).collect::<Vec<_>>()),
        )
    }
}

fn qvec(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
}

fn classify(p: &GroupPayload) -> Result<CommandResult, CliError> {
    let name = p.preset_name()?;
    let j =
        p.j.as_ref()
            .ok_or_else(|| CliError::Validation("`J` is required".into()))?;
    let c = classify_parabolic(&name, j)?;
    Ok(plain(json!({
        "preset": name.to_string(),
        "J": j,
        "table": c.table,
        "scan": c.scan,
        "agree": c.table == c.scan,
        "witness": qvec(&c.witness),
    })))
}

fn sign_string(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

fn chambers(p: &GroupPayload) -> Result<CommandResult, CliError> {
    let name = p.preset_name()?;
    let rel = RelativeDatum::preset(&name)?;
    let arr = Arrangement::new(&rel);
    let l = rel.absolute.rank;
    let top = p.max_coeff.unwrap_or(if l <= 3 { 4 } else { 2 }) as i64;
    // sample dominant weights on a coefficient grid; the first hit names each cell
    let mut cells: Vec<(ChamberId, Vec<Vec<Q>>)> = Vec::new();
    let mut coeffs = vec![0i64; l];
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let cq: Vec<Q> = coeffs.iter().map(|&c| qi(c)).collect();
            let id = chamber_of(&weight_from_coeffs(&rel, &cq), &rel, &arr)?;
            match cells.iter_mut().find(|(c, _)| *c == id) {
                Some((_, reps)) => {
                    if reps.len() < 3 {
                        reps.push(cq)
                    }
                }
                None => cells.push((id, vec![cq])),
            }
        }
        let Some(k) = (0..l).find(|&k| coeffs[k] < top) else {
            break;
        };
        coeffs[k] += 1;
        for c in coeffs.iter_mut().take(k) {
            *c = 0;
        }
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0));
    let labels: Vec<String> = (1..=cells.len()).map(|i| format!("C{i}")).collect();
    let mut order = Vec::new();
    for (i, (lo, _)) in cells.iter().enumerate() {
        for (j, (up, _)) in cells.iter().enumerate() {
            if i != j && chamber_leq(lo, up) {
                order.push(json!([labels[i], labels[j]]));
            }
        }
    }
    let cell_json: Vec<Value> = cells
        .iter()
        .zip(&labels)
        .map(|((id, reps), label)| {
            json!({
                "label": label,
                "open": id.is_open(),
                "signs": sign_string(&id.signs),
                "walls": id.containing.iter().collect::<Vec<_>>(),
                "representatives": reps.iter().map(|r| qvec(r)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let figure = (l == 2).then(|| Figure::Fan {
        forms: arr
            .forms
            .iter()
            .map(|f| {
                let w = &rel.absolute.fundamental_weights;
                [
                    btgit_core::linalg::dot(f, &w[0]),
                    btgit_core::linalg::dot(f, &w[1]),
                ]
            })
            .collect(),
    });
    Ok(CommandResult {
        json: json!({
            "preset": name.to_string(),
            "forms": to_value(&Strs(&arr.forms)),
            "cells": cell_json,
            "order": order,
            "sampled_max_coeff": top,
        }),
        figure,
    })
}

fn status(p: &PointPayload) -> Result<CommandResult, CliError> {
    let l = p.load()?;
    let w = p.weighted(&l)?;
    let st = stability_status(&w, &l.rel)?;
    let mu = mu_k(&w, &l.rel);
    let mut out = json!({
        "model": l.kind.to_string(),
        "status": to_value(&st),
        "mu": { "points": to_value(&Strs(&mu.points)), "vertices": to_value(&Strs(&mu.vertices()?)) },
        "destabilizing": destabilizing_1ps(&w, &l.rel)?.map(|d| qvec(&d)),
    });
    if let Some(chi) = p.chi(&l.rel)? {
        out["chi_status"] = to_value(&chi_status(&w, &l.rel, &chi)?);
    }
    Ok(plain(out))
}

fn interval_json(res: &IntervalResult) -> Result<Value, CliError> {
    let vrep = match &res.polyhedron {
        Some(p) => p.v_rep()?,
        None => None,
    };
    Ok(json!({
        "empty": res.is_empty(),
        "bounded": res.bounded && !res.is_empty(),
        "optimum": to_value(&res.optimum),
        "face": describe(res.polyhedron.as_ref())?,
        "singleton": res.singleton.as_ref().map(|s| qvec(s)),
        "vertices": vrep.as_ref().map(|v| to_value(&Strs(&v.vertices))),
        "rays": vrep.as_ref().map(|v| to_value(&Strs(&v.rays))),
        "lines": vrep.as_ref().map(|v| to_value(&Strs(&v.lines))),
        "wall_bounds": to_value(&res.wall_bounds),
        "witness": if res.is_empty() { qvec(&res.witness) } else { Value::Null },
    }))
}

fn interval(p: &PointPayload) -> Result<CommandResult, CliError> {
    let l = p.load()?;
    let w = p.weighted(&l)?;
    let res = interval_a(&w, &l.rel)?;
    let mut out = interval_json(&res)?;
    out["model"] = json!(l.kind.to_string());
    out["rank"] = json!(l.rel.rank());
    if !res.is_empty() && !res.bounded {
        let lam = lambda_a(&w, &l.rel)?;
        out["infinity"] = Value::Array(lam.points.iter().map(|x| qvec(&x.direction)).collect());
    }
    let figure = (l.rel.rank() <= 2).then(|| Figure::Interval {
        dim: l.rel.rank(),
        poly: res.polyhedron.clone(),
    });
    Ok(CommandResult { json: out, figure })
}

fn tree(p: &TreePayload) -> Result<CommandResult, CliError> {
    if p.point.len() != 2 {
        return Err(CliError::Validation(format!(
            "a point of the line has 2 coordinates, got {}",
            p.point.len()
        )));
    }
    let x = make_point(
        ModelKind::Proj(2),
        RawPoint {
            coords: Some(p.point.clone()),
            ..Default::default()
        },
    )?;
    let t = interval_tree(&x, p.radius)?;
    let shape = match t.points.len() {
        0 => "empty",
        1 => "point",
        _ => "segment",
    };
    let witness = t
        .witness
        .as_ref()
        .map(|c| format!("end [{}:{}]", c.g[0][0], c.g[1][0]));
    let json = json!({
        "interval": shape,
        "points": to_value(&t.points),
        "labels": t.points.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
        "segments": to_value(&t.segments),
        "certificate": to_value(&t.certificate),
        "witness": witness,
        "witness_chart": t.witness.as_ref().map(|c| to_value(&c.g)),
        "explored": t.explored.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
    });
    Ok(CommandResult {
        json,
        figure: Some(Figure::Tree {
            explored: t.explored.clone(),
            marked: t.points.clone(),
        }),
    })
}

fn models(p: &PointPayload) -> Result<CommandResult, CliError> {
    let l = p.load()?;
    let factors: Vec<Value> = l
        .point
        .factors()
        .iter()
        .map(|f| {
            let coords: Vec<Value> = f
                .coords
                .iter()
                .map(|(w, c)| json!({ "weight": qvec(w), "coord": to_value(c), "text": c.to_string() }))
                .collect();
            json!({ "omega": f.omega, "coords": coords })
        })
        .collect();
    let mut out = json!({
        "model": l.kind.to_string(),
        "group_size": l.kind.group_size(),
        "point": to_value(&l.point),
        "factors": factors,
    });
    if let Some(g) = &p.g {
        check_group(l.kind, g)?;
        out["acted"] = to_value(&act(g, &l.point)?);
    }
    Ok(plain(out))
}

fn chi(p: &PointPayload) -> Result<CommandResult, CliError> {
    let l = p.load()?;
    let chi = p
        .chi(&l.rel)?
        .ok_or_else(|| CliError::Validation("`chi` is required".into()))?;
    let w = p.weighted(&l)?;
    let res = interval_a(&w, &l.rel)?;
    let parabolic = p_chi_data(&chi, &l.rel)?;
    let mut out = json!({
        "model": l.kind.to_string(),
        "chi_status": to_value(&chi_status(&w, &l.rel, &chi)?),
        "parabolic": to_value(&parabolic),
    });
    if res.is_empty() {
        out["n_A"] = Value::Null;
        out["face"] = json!("empty");
    } else {
        let ci = interval_a_chi(&res, &chi)?;
        out["n_A"] = to_value(&ci.value);
        out["face"] = match &ci.face {
            Some(f) => json!(describe(Some(f))?),
            None => json!("unbounded"),
        };
    }
    if let Some(fam) = &p.family {
        let degree = match fam.degree {
            Some(d) => d,
            None => default_degree(l.kind).ok_or_else(|| {
                CliError::Unsupported(format!("no default invariant degree for {}", l.kind))
            })?,
        };
        let family = unipotent_family(l.kind.group_size(), fam.depth, &fam.digits);
        let r = interval_chi_family(&l.point, &chi, &family, degree)?;
        let mut faces = BTreeMap::new();
        for (i, f) in &r.faces {
            faces.insert(
                i.to_string(),
                json!({ "chart": to_value(&family[*i].g), "face": describe(f.as_ref())? }),
            );
        }
        out["family"] =
            json!({ "charts": family.len(), "value": to_value(&r.value), "faces": faces });
    }
    Ok(plain(out))
}
