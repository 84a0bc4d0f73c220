//! Deterministic SVG figures for rank ≤ 2 results. Geometry stays exact
//! until the final rounding to integer pixels.

use std::cmp::Ordering;
use std::fmt::Write;

use btgit_core::polyhedra::{Halfspace, QPolyhedron};
use btgit_core::rational::{qi, Q};
use btgit_core::treebuilding::TreePoint;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Figure {
    /// An interval in relative coordinates (`dim ≤ 2`), `None` when empty.
    Interval {
        dim: usize,
        poly: Option<QPolyhedron>,
    },
    /// Arrangement forms in fundamental-weight coordinates of a rank-2 datum.
    Fan { forms: Vec<[Q; 2]> },
    /// The walk of the tree search and the points found.
    Tree {
        explored: Vec<TreePoint>,
        marked: Vec<TreePoint>,
    },
}

const W: i64 = 600;
const H: i64 = 400;

fn px(x: &Q) -> i64 {
    (x + Q::new(1.into(), 2.into()))
        .floor()
        .to_integer()
        .to_i64()
        .unwrap_or(i64::MAX)
}

struct Doc(String);

impl Doc {
    fn new(title: &str) -> Self {
        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
        writeln!(s, r#"<title>{}</title>"#, escape(title)).unwrap();
        writeln!(
            s,
            r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
        )
        .unwrap();
        Doc(s)
    }

    fn line(&mut self, a: (i64, i64), b: (i64, i64), style: &str) {
        writeln!(
            self.0,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            a.0, a.1, b.0, b.1
        )
        .unwrap();
    }

    fn dot(&mut self, c: (i64, i64), r: i64, fill: &str) {
        writeln!(
            self.0,
            r#"<circle cx="{}" cy="{}" r="{r}" fill="{fill}"/>"#,
            c.0, c.1
        )
        .unwrap();
    }

    fn text(&mut self, at: (i64, i64), size: i64, s: &str) {
        writeln!(
            self.0,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="{size}">{}</text>"#,
            at.0,
            at.1,
            escape(s)
        )
        .unwrap();
    }

    fn polygon(&mut self, pts: &[(i64, i64)], style: &str) {
        let p: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
        writeln!(self.0, r#"<polygon points="{}" {style}/>"#, p.join(" ")).unwrap();
    }

    fn finish(mut self) -> String {
        self.0.push_str("</svg>\n");
        self.0
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn empty_doc(title: &str) -> String {
    let mut d = Doc::new(title);
    d.line((280, 180), (320, 220), r#"stroke="gray" stroke-width="3""#);
    d.line((280, 220), (320, 180), r#"stroke="gray" stroke-width="3""#);
    d.text((250, 250), 14, "empty");
    d.finish()
}

pub fn render_svg(fig: &Figure) -> Result<String, CliError> {
    match fig {
        Figure::Interval { poly: None, .. } => Ok(empty_doc("empty interval")),
        Figure::Interval {
            dim: 1,
            poly: Some(p),
        } => interval_line(p),
        Figure::Interval {
            dim: 2,
            poly: Some(p),
        } => interval_plane(p),
        Figure::Interval { dim, .. } => Err(CliError::Unsupported(format!(
            "no picture for relative rank {dim}"
        ))),
        Figure::Fan { forms } => Ok(fan(forms)),
        Figure::Tree { explored, marked } => Ok(tree(explored, marked)),
    }
}

fn interval_line(p: &QPolyhedron) -> Result<String, CliError> {
    let Some(v) = p.v_rep()? else {
        return Ok(empty_doc("empty interval"));
    };
    let xs: Vec<Q> = v.vertices.iter().map(|p| p[0].clone()).collect();
    let lo = xs.iter().min().cloned().unwrap_or_else(Q::zero);
    let hi = xs.iter().max().cloned().unwrap_or_else(Q::zero);
    let (wlo, whi) = (&lo - qi(1), &hi + qi(1));
    let map = |x: &Q| px(&(qi(60) + (x - &wlo) * qi(480) / (&whi - &wlo)));
    let up = v.rays.iter().any(|r| r[0].is_positive()) || !v.lines.is_empty();
    let down = v.rays.iter().any(|r| r[0].is_negative()) || !v.lines.is_empty();
    let mut d = Doc::new("interval");
    d.line((20, 200), (580, 200), r#"stroke="black" stroke-width="1""#);
    let a = if down { 20 } else { map(&lo) };
    let b = if up { 580 } else { map(&hi) };
    d.line((a, 200), (b, 200), r#"stroke="crimson" stroke-width="5""#);
    for x in if lo == hi { vec![&lo] } else { vec![&lo, &hi] } {
        d.dot((map(x), 200), 5, "crimson");
    }
    let label = if lo == hi && !up && !down {
        format!("u={lo}")
    } else {
        format!(
            "{} <= u <= {}",
            if down {
                "-inf".to_string()
            } else {
                lo.to_string()
            },
            if up {
                "+inf".to_string()
            } else {
                hi.to_string()
            }
        )
    };
    d.text((map(&lo) - 20, 180), 14, &label);
    Ok(d.finish())
}

/// Counterclockwise order around the centroid.
fn angular(points: &mut [Vec<Q>]) {
    let n = Q::from_integer((points.len() as i64).into());
    let cx = points.iter().fold(Q::zero(), |a, p| a + &p[0]) / &n;
    let cy = points.iter().fold(Q::zero(), |a, p| a + &p[1]) / &n;
    let half = |x: &Q, y: &Q| y.is_positive() || (y.is_zero() && x.is_positive());
    points.sort_by(|a, b| {
        let (ax, ay, bx, by) = (&a[0] - &cx, &a[1] - &cy, &b[0] - &cx, &b[1] - &cy);
        match (half(&ax, &ay), half(&bx, &by)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                let cross = &ax * &by - &ay * &bx;
                if cross.is_positive() {
                    Ordering::Less
                } else if cross.is_negative() {
                    Ordering::Greater
                } else {
                    (&ax * &ax + &ay * &ay).cmp(&(&bx * &bx + &by * &by))
                }
            }
        }
    });
}

fn interval_plane(p: &QPolyhedron) -> Result<String, CliError> {
    let Some(v) = p.v_rep()? else {
        return Ok(empty_doc("empty interval"));
    };
    let coord = |k: usize| v.vertices.iter().map(move |p| p[k].clone());
    let (x0, x1) = (coord(0).min().unwrap(), coord(0).max().unwrap());
    let (y0, y1) = (coord(1).min().unwrap(), coord(1).max().unwrap());
    let unbounded = !v.rays.is_empty() || !v.lines.is_empty();
    let span = (&x1 - &x0).max(&y1 - &y0) + if unbounded { qi(4) } else { qi(2) };
    let cx = (&x0 + &x1) / qi(2);
    let cy = (&y0 + &y1) / qi(2);
    let (bx, by) = (&cx - &span / qi(2), &cy - &span / qi(2));
    let frame = [
        Halfspace::new(vec![qi(1), qi(0)], bx.clone()),
        Halfspace::new(vec![qi(-1), qi(0)], -(&bx + &span)),
        Halfspace::new(vec![qi(0), qi(1)], by.clone()),
        Halfspace::new(vec![qi(0), qi(-1)], -(&by + &span)),
    ];
    let clipped = p.intersect(&QPolyhedron::new(2, frame.to_vec()));
    let mut pts = clipped.v_rep()?.map(|c| c.vertices).unwrap_or_default();
    angular(&mut pts);
    let map = |q: &[Q]| {
        (
            px(&(qi(140) + (&q[0] - &bx) * qi(320) / &span)),
            px(&(qi(360) - (&q[1] - &by) * qi(320) / &span)),
        )
    };
    let mut d = Doc::new("interval");
    d.polygon(
        &[(140, 40), (460, 40), (460, 360), (140, 360)],
        r#"fill="none" stroke="lightgray""#,
    );
    let o = map(&[qi(0), qi(0)]);
    if (140..=460).contains(&o.0) && (40..=360).contains(&o.1) {
        d.dot(o, 2, "black");
    }
    let screen: Vec<(i64, i64)> = pts.iter().map(|p| map(p)).collect();
    match screen.len() {
        0 => {}
        1 => d.dot(screen[0], 5, "crimson"),
        2 => d.line(screen[0], screen[1], r#"stroke="crimson" stroke-width="4""#),
        _ => d.polygon(
            &screen,
            r#"fill="mistyrose" stroke="crimson" stroke-width="2""#,
        ),
    }
    for q in &v.vertices {
        let s = map(q);
        d.dot(s, 4, "crimson");
        d.text((s.0 + 6, s.1 - 6), 12, &format!("({}, {})", q[0], q[1]));
    }
    if unbounded {
        d.text((150, 385), 12, "unbounded; clipped to the frame");
    }
    Ok(d.finish())
}

fn max_norm(v: &[Q; 2]) -> Q {
    v[0].abs().max(v[1].abs())
}

fn fan(forms: &[[Q; 2]]) -> String {
    let mut d = Doc::new("chamber fan");
    let c = (300i64, 200i64);
    let at = |v: &[Q; 2], r: i64| {
        let n = max_norm(v);
        (
            c.0 + px(&(&v[0] * qi(r) / &n)),
            c.1 - px(&(&v[1] * qi(r) / &n)),
        )
    };
    let mut dirs: Vec<Vec<Q>> = Vec::new();
    for f in forms {
        let dir = [-f[1].clone(), f[0].clone()];
        let neg = [-dir[0].clone(), -dir[1].clone()];
        d.line(
            at(&neg, 180),
            at(&dir, 180),
            r#"stroke="black" stroke-width="2""#,
        );
        dirs.push(dir.to_vec());
        dirs.push(neg.to_vec());
    }
    for (w, label) in [([qi(1), qi(0)], "w1"), ([qi(0), qi(1)], "w2")] {
        d.line(
            c,
            at(&w, 190),
            r#"stroke="steelblue" stroke-dasharray="4 3""#,
        );
        let e = at(&w, 195);
        d.text((e.0 + 4, e.1), 12, label);
    }
    // normalize so parallel forms give equal directions
    for v in dirs.iter_mut() {
        let n = max_norm(&[v[0].clone(), v[1].clone()]);
        v.iter_mut().for_each(|x| *x = &*x / &n);
    }
    angular_about_origin(&mut dirs);
    dirs.dedup();
    let k = dirs.len();
    for i in 0..k {
        let a = [dirs[i][0].clone(), dirs[i][1].clone()];
        let b = [dirs[(i + 1) % k][0].clone(), dirs[(i + 1) % k][1].clone()];
        let (na, nb) = (max_norm(&a), max_norm(&b));
        let mut mid = [&a[0] / &na + &b[0] / &nb, &a[1] / &na + &b[1] / &nb];
        if mid[0].is_zero() && mid[1].is_zero() {
            mid = [-a[1].clone(), a[0].clone()];
        }
        let signs: String = forms
            .iter()
            .map(|f| {
                let s = &f[0] * &mid[0] + &f[1] * &mid[1];
                if s.is_positive() {
                    '+'
                } else if s.is_negative() {
                    '-'
                } else {
                    '0'
                }
            })
            .collect();
        let p = at(&mid, 120);
        d.text((p.0 - 12, p.1 + 4), 12, &signs);
    }
    d.finish()
}

fn angular_about_origin(points: &mut [Vec<Q>]) {
    let half = |x: &Q, y: &Q| y.is_positive() || (y.is_zero() && x.is_positive());
    points.sort_by(|a, b| match (half(&a[0], &a[1]), half(&b[0], &b[1])) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
    });
}

fn tree(explored: &[TreePoint], marked: &[TreePoint]) -> String {
    let mut nodes: Vec<&TreePoint> = Vec::new();
    for z in explored.iter().chain(marked) {
        if !nodes.contains(&z) {
            nodes.push(z);
        }
    }
    if nodes.is_empty() {
        return empty_doc("tree search");
    }
    let umin = nodes.iter().map(|z| z.u.clone()).min().unwrap();
    let umax = nodes.iter().map(|z| z.u.clone()).max().unwrap();
    let n = nodes.len() as i64;
    let pos = |z: &TreePoint| {
        let i = nodes.iter().position(|w| *w == z).unwrap() as i64;
        let x = if n == 1 { 300 } else { 60 + i * 480 / (n - 1) };
        let y = if umin == umax {
            200
        } else {
            60 + px(&((&z.u - &umin) * qi(280) / (&umax - &umin)))
        };
        (x, y)
    };
    let mut d = Doc::new("tree search");
    for w in explored.windows(2) {
        d.line(pos(&w[0]), pos(&w[1]), r#"stroke="gray" stroke-width="2""#);
    }
    for z in &nodes {
        let hit = marked.contains(z);
        d.dot(
            pos(z),
            if hit { 6 } else { 4 },
            if hit { "crimson" } else { "black" },
        );
        let p = pos(z);
        d.text((p.0 + 7, p.1 - 7), 10, &z.to_string());
    }
    if marked.is_empty() {
        d.text((20, 385), 12, "empty interval");
    }
    d.finish()
}
