//! Human-readable constraint strings for canonical polyhedra.

use btgit_core::polyhedra::{Halfspace, QPolyhedron};
use btgit_core::rational::Q;
use num_traits::{One, Signed, Zero};

use crate::CliError;

fn var(dim: usize, i: usize) -> String {
    if dim == 1 {
        "u".into()
    } else {
        format!("z{}", i + 1)
    }
}

fn linear(normal: &[Q]) -> String {
    let mut out = String::new();
    for (i, c) in normal.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = var(normal.len(), i);
        let mag = c.abs();
        let sign = if c.is_negative() {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let coef = if mag.is_one() {
            String::new()
        } else if mag.is_integer() {
            mag.to_string()
        } else {
            format!("({mag})")
        };
        out.push_str(&format!("{sign}{coef}{v}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn negated(a: &Halfspace, b: &Halfspace) -> bool {
    a.normal
        .iter()
        .zip(&b.normal)
        .all(|(x, y)| *x == -y.clone())
        && a.offset == -b.offset.clone()
}

/// Divides by the leading coefficient (its absolute value for inequalities).
fn scaled(h: &Halfspace, equality: bool) -> (Vec<Q>, Q) {
    let lead = h
        .normal
        .iter()
        .find(|x| !x.is_zero())
        .cloned()
        .unwrap_or_else(Q::one);
    let d = if equality { lead } else { lead.abs() };
    (h.normal.iter().map(|x| x / &d).collect(), &h.offset / &d)
}

/// `"u=1/4"`, `"z1-z2=0, z1>=-1"`, `"all"` for the whole space, `"empty"` for ∅.
pub fn describe(p: Option<&QPolyhedron>) -> Result<String, CliError> {
    let Some(p) = p else {
        return Ok("empty".into());
    };
    let c = p.canonical()?;
    if c.is_empty()? {
        return Ok("empty".into());
    }
    let hs = &c.halfspaces;
    let mut used = vec![false; hs.len()];
    let mut parts = Vec::new();
    for i in 0..hs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if let Some(j) = (i + 1..hs.len()).find(|&j| !used[j] && negated(&hs[i], &hs[j])) {
            used[j] = true;
            // write the equality with a positive leading coefficient
            let (normal, offset) = scaled(&hs[i], true);
            parts.push(format!("{}={}", linear(&normal), offset));
        } else {
            let (normal, offset) = scaled(&hs[i], false);
            parts.push(format!("{}>={}", linear(&normal), offset));
        }
    }
    Ok(if parts.is_empty() {
        "all".into()
    } else {
        parts.join(", ")
    })
}
