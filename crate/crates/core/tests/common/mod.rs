#![allow(dead_code)]

use btgit_core::models::{make_point, ModelKind, ModelPoint, RawPoint};
use btgit_core::rational::{q, qi, Q};
use btgit_core::valfield::matrix::{self, PMat};
use btgit_core::valfield::PuiseuxElement as P;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn p(s: &str) -> P {
    s.parse().unwrap()
}

pub fn v(xs: &[&str]) -> Vec<P> {
    xs.iter().map(|s| p(s)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(r: &mut ChaCha8Rng) -> Q {
    let c = r.gen_range(1..=3);
    qi(if r.gen_bool(0.5) { c } else { -c })
}

/// Random sum of `terms` monomials with exponents in `lo..=hi` (in units of `1/den`).
pub fn puiseux(r: &mut ChaCha8Rng, terms: usize, den: i64, lo: i64, hi: i64) -> P {
    P::from_terms((0..terms).map(|_| (q(r.gen_range(lo..=hi), den), coeff(r))))
}

/// Nonzero element of `K` (integer exponents).
pub fn k_element(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> P {
    loop {
        let n = r.gen_range(1..=3);
        let x = puiseux(r, n, 1, lo, hi);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn line(x0: P, x1: P) -> ModelPoint {
    make_point(
        ModelKind::Proj(2),
        RawPoint {
            coords: Some(vec![x0, x1]),
            ..Default::default()
        },
    )
    .unwrap()
}

/// `[x₀ : x₀ ζ]` with `ζ = β + c t^{e}`, `β ∈ K` and `e ∉ ℤ` the first
/// non-integral exponent.
pub fn nonrational_line(r: &mut ChaCha8Rng) -> ModelPoint {
    let den = [2, 3, 4][r.gen_range(0..3)];
    let mut e = q(r.gen_range(-6..=6), den);
    if e.is_integer() {
        e += q(1, den);
    }
    let beta = P::from_terms(
        (0..r.gen_range(0..=3))
            .map(|_| (qi(r.gen_range(-3..=3)), coeff(r)))
            .filter(|(x, _)| x < &e),
    );
    let zeta = &beta + &P::from_terms([(e.clone(), coeff(r)), (&e + qi(1), coeff(r))]);
    let x0 = if r.gen_bool(0.5) {
        P::monomial(coeff(r), qi(r.gen_range(-2..=2)))
    } else {
        P::one()
    };
    line(x0.clone(), &x0 * &zeta)
}

pub fn rational_line(r: &mut ChaCha8Rng) -> ModelPoint {
    if r.gen_bool(0.1) {
        return line(P::zero(), P::one());
    }
    let x0 = k_element(r, -2, 2);
    let x1 = if r.gen_bool(0.1) {
        P::zero()
    } else {
        k_element(r, -2, 3)
    };
    let s = P::t_pow(q(r.gen_range(-3..=3), 2));
    line(&x0 * &s, &x1 * &s)
}

/// A random element of SL₂(K): product of elementary unipotents and a torus.
pub fn sl2_k(r: &mut ChaCha8Rng) -> PMat {
    let mut g = matrix::identity(2);
    for _ in 0..r.gen_range(1..=3) {
        let mut e = matrix::identity(2);
        let n = r.gen_range(1..=2);
        let b = puiseux(r, n, 1, -2, 2);
        if r.gen_bool(0.5) {
            e[0][1] = b;
        } else {
            e[1][0] = b;
        }
        g = matrix::mul(&g, &e);
    }
    let k = r.gen_range(-2..=2);
    let torus = vec![
        vec![P::t_pow(qi(k)), P::zero()],
        vec![P::zero(), P::t_pow(qi(-k))],
    ];
    matrix::mul(&g, &torus)
}

/// Random `n × n` matrix over `K` with nonzero determinant, as rows spanning a flag.
pub fn k_rows(r: &mut ChaCha8Rng, rows: usize, n: usize, den: i64) -> PMat {
    (0..rows)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if r.gen_bool(0.2) {
                        P::zero()
                    } else {
                        puiseux(r, 2, den, -2, 3)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_point(r: &mut ChaCha8Rng, kind: ModelKind, den: i64) -> ModelPoint {
    loop {
        let raw = match kind {
            ModelKind::Proj(n) => RawPoint {
                coords: Some(k_rows(r, 1, n, den).remove(0)),
                ..Default::default()
            },
            ModelKind::Grass(j, n) => RawPoint {
                rows: Some(k_rows(r, j, n, den)),
                ..Default::default()
            },
            ModelKind::Flag(n) => RawPoint {
                rows: Some(k_rows(r, n - 1, n, den)),
                ..Default::default()
            },
            _ => panic!("use the dedicated samplers"),
        };
        if let Ok(x) = make_point(kind, raw) {
            return x;
        }
    }
}

/// Random element of SL_n(K) as a product of elementary unipotents.
pub fn sln_k(r: &mut ChaCha8Rng, n: usize, den: i64) -> PMat {
    let mut g = matrix::identity(n);
    for _ in 0..r.gen_range(1..=4) {
        let i = r.gen_range(0..n);
        let j = (i + r.gen_range(1..n)) % n;
        let mut e = matrix::identity(n);
        e[i][j] = puiseux(r, 1, den, -2, 2);
        g = matrix::mul(&g, &e);
    }
    g
}

/// `⟨v₁, v₂⟩` isotropic for the symplectic form: `v₂` is a combination of the
/// vectors `c_j e_i − c_i e_j`, where `c` is the functional `ω(v₁, ·)`.
pub fn sp4_flag(r: &mut ChaCha8Rng, den: i64) -> ModelPoint {
    loop {
        let a = k_rows(r, 1, 4, den).remove(0);
        let c = [-&a[3], -&a[2], a[1].clone(), a[0].clone()];
        let mut v2 = vec![P::zero(); 4];
        for i in 0..4 {
            for j in i + 1..4 {
                if r.gen_bool(0.3) {
                    continue;
                }
                let s = puiseux(r, 1, den, -2, 2);
                v2[i] = &v2[i] + &(&s * &c[j]);
                v2[j] = &v2[j] - &(&s * &c[i]);
            }
        }
        let raw = RawPoint {
            rows: Some(vec![a, v2]),
            ..Default::default()
        };
        if let Ok(x) = make_point(ModelKind::Sp4Flag, raw) {
            return x;
        }
    }
}

fn nonzero_half(r: &mut ChaCha8Rng) -> P {
    loop {
        let n = r.gen_range(1..=2);
        let x = puiseux(r, n, 2, -4, 4);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A pair with `x₁τ(y₃) + x₂τ(y₂) + x₃τ(y₁) = 0` and every coordinate nonzero.
pub fn su3_pair(r: &mut ChaCha8Rng) -> ModelPoint {
    loop {
        let x1 = P::monomial(coeff(r), q(r.gen_range(-4..=4), 2));
        let x = vec![x1.clone(), nonzero_half(r), nonzero_half(r)];
        let (y1, y2) = (nonzero_half(r), nonzero_half(r));
        let s = &(&x[1] * &y2.tau_twist().unwrap()) + &(&x[2] * &y1.tau_twist().unwrap());
        let (e, c) = x1.leading().unwrap().clone();
        let y3 = (-&s.monomial_div(&c, &e).unwrap()).tau_twist().unwrap();
        if y3.is_zero() {
            continue;
        }
        let raw = RawPoint {
            x: Some(x),
            y: Some(vec![y1, y2, y3]),
            ..Default::default()
        };
        if let Ok(p) = make_point(ModelKind::Su3Pair, raw) {
            return p;
        }
    }
}
