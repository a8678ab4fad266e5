//! Hypothesis-respecting instance generation, deterministic in `(id, seed)`.
//!
//! Equation entries are drawn as `f_n ∈ ±[0.3, 3]` (with the sign pattern
//! constrained where a statement requires a positive product), `q_n ∈ [-2, 2]`
//! and `w_n ∈ [0.3, 3]`. Statement parameters are drawn inside their
//! hypothesis regions with a margin of at least 0.05 from excluded
//! boundaries; boundary-inclusive hypotheses (such as a value sitting exactly
//! on a count-drop threshold) are exercised in a fraction of the draws.

use super::{mix, InstanceSpec, QuadCase, TheoremId, TheoremParams, WeightRegime};
use crate::mat2::C64;
use crate::slp::{CanonicalBC, Equation};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const M: f64 = 0.05;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    debug_assert!(hi >= lo);
    lo + (hi - lo) * rng.gen::<f64>()
}

fn signed_mag(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    s * uniform(rng, lo, hi)
}

fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen::<f64>() < p
}

fn sample_eq(rng: &mut ChaCha8Rng, n: usize, positive_prod: bool) -> Equation {
    let mut f: Vec<f64> = (0..=n).map(|_| signed_mag(rng, 0.3, 3.0)).collect();
    if positive_prod {
        let negatives = f[..n].iter().filter(|&&x| x < 0.0).count();
        if negatives % 2 == 1 {
            f[0] = -f[0];
        }
    }
    let q: Vec<f64> = (0..n).map(|_| uniform(rng, -2.0, 2.0)).collect();
    let w: Vec<f64> = (0..n).map(|_| uniform(rng, 0.3, 3.0)).collect();
    Equation::new(n, f, q, w).expect("sampled entries are valid")
}

fn sample_unimodular(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    let k11 = signed_mag(rng, 0.3, 2.0);
    let k12 = uniform(rng, -2.0, 2.0);
    let k21 = uniform(rng, -2.0, 2.0);
    let k22 = (1.0 + k12 * k21) / k11;
    [[k11, k12], [k21, k22]]
}

fn sample_k_where(
    rng: &mut ChaCha8Rng,
    pred: impl Fn(&[[f64; 2]; 2]) -> bool,
) -> [[f64; 2]; 2] {
    for _ in 0..20_000 {
        let k = sample_unimodular(rng);
        if pred(&k) {
            return k;
        }
    }
    panic!("coupling sampler exhausted");
}

/// `K` with `k12 = 0` and the requested sign of `k11`.
fn k_with_zero_k12(rng: &mut ChaCha8Rng, k11_sign: f64) -> [[f64; 2]; 2] {
    let k11 = k11_sign * uniform(rng, 0.3, 2.0);
    [[k11, 0.0], [uniform(rng, -2.0, 2.0), 1.0 / k11]]
}

fn k_with_zero_k11(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    let k12 = signed_mag(rng, 0.3, 2.0);
    [[0.0, k12], [-1.0 / k12, uniform(rng, -2.0, 2.0)]]
}

/// `K` with `k11 - f0 k12 = 0` exactly.
fn k_with_zero_drop(rng: &mut ChaCha8Rng, f0: f64) -> [[f64; 2]; 2] {
    let k12 = signed_mag(rng, 0.3, 1.5);
    let k11 = f0 * k12;
    let k22 = uniform(rng, -2.0, 2.0);
    let k21 = (k11 * k22 - 1.0) / k12;
    [[k11, k12], [k21, k22]]
}

/// `K` with `f0 k22 - k21 = 0` and prescribed sign of `k11 - f0 k12`.
fn k_with_zero_dv(rng: &mut ChaCha8Rng, f0: f64, d_sign: f64) -> [[f64; 2]; 2] {
    let k22 = d_sign * uniform(rng, 0.4, 2.5);
    let d = 1.0 / k22;
    let k12 = uniform(rng, -2.0, 2.0);
    let k11 = f0 * k12 + d;
    let k21 = f0 * k22;
    [[k11, k12], [k21, k22]]
}

fn gamma_open(rng: &mut ChaCha8Rng) -> f64 {
    let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    s * uniform(rng, M, PI - M)
}

fn gamma_any(rng: &mut ChaCha8Rng) -> f64 {
    if coin(rng, 0.125) {
        0.0
    } else if coin(rng, 0.125) {
        PI
    } else {
        uniform(rng, -PI + 1e-6, PI)
    }
}

fn nonzero_z(rng: &mut ChaCha8Rng) -> C64 {
    let r = uniform(rng, 0.3, 1.5);
    let th = uniform(rng, 0.0, 2.0 * PI);
    C64::new(r * th.cos(), r * th.sin())
}

fn any_z(rng: &mut ChaCha8Rng) -> C64 {
    if coin(rng, 0.25) {
        C64::new(0.0, 0.0)
    } else {
        nonzero_z(rng)
    }
}

/// Draws from `±[0.3, 3]` restricted to one side of `thr` (margin `M`),
/// choosing a feasible side at random.
fn f0_on_side(rng: &mut ChaCha8Rng, thr: f64) -> (f64, f64, bool) {
    let below_hi = thr - M;
    let above_lo = thr + M;
    let below_ok = below_hi >= -3.0;
    let above_ok = above_lo <= 3.0;
    let take_below = match (below_ok, above_ok) {
        (true, true) => rng.gen::<bool>(),
        (true, false) => true,
        (false, true) => false,
        (false, false) => unreachable!("threshold cannot exclude both sides"),
    };
    if take_below {
        let a = sample_nonzero_leq(rng, below_hi);
        let b = sample_nonzero_in(rng, a, below_hi);
        (a.min(b), a.max(b), true)
    } else {
        let a = sample_nonzero_geq(rng, above_lo);
        let b = sample_nonzero_in(rng, above_lo, a);
        (a.min(b), a.max(b), false)
    }
}

/// Draws from `±[0.3, 3] ∩ (-inf, hi]`; `hi >= -3` required.
fn sample_nonzero_leq(rng: &mut ChaCha8Rng, hi: f64) -> f64 {
    loop {
        let x = signed_mag(rng, 0.3, 3.0);
        if x <= hi {
            return x;
        }
        if hi < -0.3 {
            return uniform(rng, -3.0, hi);
        }
    }
}

fn sample_nonzero_geq(rng: &mut ChaCha8Rng, lo: f64) -> f64 {
    -sample_nonzero_leq(rng, -lo)
}

/// Draws from `±[0.3, 3] ∩ [lo, hi]` (nonempty by caller arrangement).
fn sample_nonzero_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    for _ in 0..10_000 {
        let x = signed_mag(rng, 0.3, 3.0);
        if x >= lo && x <= hi {
            return x;
        }
    }
    // the interval is tight around one endpoint
    if hi >= 0.3 {
        hi.min(3.0).max(0.3)
    } else {
        lo.max(-3.0).min(-0.3)
    }
}

/// A componentwise-ordered pair of equations with prescribed `f0` values,
/// `q1 <= q2`, weights ordered by the regime, and every interior `f_j` pair
/// drawn on one side of `avoid` when a finite monotonicity threshold exists
/// (the eigenvalue index shifts when an `f_j` path crosses it, so the
/// fixed-index comparison only holds on one side).
fn eq_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    f0_1: f64,
    f0_2: f64,
    regime: WeightRegime,
    avoid: Option<f64>,
) -> (Equation, Equation) {
    let mut f1 = Vec::with_capacity(n + 1);
    let mut f2 = Vec::with_capacity(n + 1);
    f1.push(f0_1);
    f2.push(f0_2);
    for _ in 1..n {
        match avoid {
            Some(th) => {
                let (a, b, _) = f0_on_side(rng, th);
                f1.push(a);
                f2.push(b);
            }
            None => {
                let a = signed_mag(rng, 0.3, 3.0);
                if coin(rng, 0.4) {
                    f1.push(a);
                    f2.push(a);
                } else {
                    let b = signed_mag(rng, 0.3, 3.0);
                    f1.push(a.min(b));
                    f2.push(a.max(b));
                }
            }
        }
    }
    f1.push(signed_mag(rng, 0.3, 3.0)); // f_N unordered, only nonzero
    f2.push(signed_mag(rng, 0.3, 3.0));
    let q1: Vec<f64> = (0..n).map(|_| uniform(rng, -2.0, 2.0)).collect();
    let q2: Vec<f64> = q1
        .iter()
        .map(|&q| (q + uniform(rng, 0.0, 0.8)).min(2.0))
        .collect();
    let w1: Vec<f64> = (0..n).map(|_| uniform(rng, 0.3, 3.0)).collect();
    let w2: Vec<f64> = match regime {
        WeightRegime::Decreasing => {
            if coin(rng, 0.5) {
                w1.clone()
            } else {
                w1.iter().map(|&w| (w - uniform(rng, 0.0, 0.6)).max(0.3)).collect()
            }
        }
        WeightRegime::Increasing => {
            if coin(rng, 0.5) {
                w1.clone()
            } else {
                w1.iter().map(|&w| (w + uniform(rng, 0.0, 0.6)).min(3.0)).collect()
            }
        }
    };
    (
        Equation::new(n, f1, q1, w1).expect("sampled pair is valid"),
        Equation::new(n, f2, q2, w2).expect("sampled pair is valid"),
    )
}

/// Separated condition with both `μ` proxies nonzero (margins from the
/// degenerate angles).
fn sep_generic(rng: &mut ChaCha8Rng) -> CanonicalBC {
    let alpha = loop {
        let a = uniform(rng, M, PI - M);
        if (a - PI / 2.0).abs() > M {
            break a;
        }
    };
    let beta = uniform(rng, M, PI - M);
    CanonicalBC::Separated { alpha, beta }
}

/// Generates a deterministic instance of `id` with `N = size`.
///
/// Panics only if `size < 2` (the equation space requires `N >= 2`).
pub fn generate_instance(id: TheoremId, seed: u64, size: usize) -> InstanceSpec {
    let rng = &mut ChaCha8Rng::seed_from_u64(mix(seed, super::TheoremId::ALL
        .iter()
        .position(|&x| x == id)
        .unwrap() as u64));
    let n = size.max(2);
    use TheoremId::*;
    match id {
        T3_1_I | T3_1_II => {
            let eq = sample_eq(rng, n, false);
            let xi = eq.xi();
            let a1 = uniform(rng, 0.0, xi - 3.0 * M);
            let a2 = uniform(rng, a1 + M, xi - M);
            let a3 = if coin(rng, 0.33) {
                xi
            } else {
                uniform(rng, xi + M, PI - 2.5 * M)
            };
            let a4 = uniform(rng, a3 + M, PI - M);
            let beta0 = if id == T3_1_II {
                PI
            } else {
                uniform(rng, M, PI - M)
            };
            InstanceSpec {
                eq,
                params: TheoremParams::AlphaQuad {
                    alphas: [a1, a2, a3, a4],
                    beta0,
                },
            }
        }
        T3_1_III | T3_1_IV => {
            let eq = sample_eq(rng, n, false);
            let xi = eq.xi();
            let alpha0 = if id == T3_1_IV {
                xi
            } else if coin(rng, 0.5) {
                uniform(rng, 0.0, xi - M)
            } else {
                uniform(rng, xi + M, PI - M)
            };
            let b1 = uniform(rng, M, PI - 2.0 * M);
            let b2 = if coin(rng, 0.33) {
                PI
            } else {
                uniform(rng, b1 + M, PI - M / 2.0)
            };
            InstanceSpec {
                eq,
                params: TheoremParams::BetaPair {
                    alpha0,
                    betas: [b1, b2],
                },
            }
        }
        C3_1_I | C3_1_II | C3_1_III | C3_1_IV | C3_1_V | C3_1_VI | C3_1_VII => {
            let eq = sample_eq(rng, n, false);
            let xi = eq.xi();
            let (alpha0, beta0) = match id {
                C3_1_I => (uniform(rng, M, xi - M), uniform(rng, M, PI - M)),
                C3_1_II => (uniform(rng, xi + M, PI - M), uniform(rng, M, PI - M)),
                C3_1_III => (xi, uniform(rng, M, PI - M)),
                C3_1_IV => (uniform(rng, M, xi - M), PI),
                C3_1_V => (uniform(rng, xi + M, PI - M), PI),
                C3_1_VI => (xi, PI),
                C3_1_VII => (0.0, uniform(rng, M, PI - M)),
                _ => unreachable!(),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::SeparatedPoint { alpha0, beta0 },
            }
        }
        T3_2_I => {
            let eq = sample_eq(rng, n, false);
            let thr = 1.0 / eq.f0();
            let a2 = if coin(rng, 0.33) {
                thr
            } else {
                thr - uniform(rng, M, 1.0)
            };
            let a1 = a2 - uniform(rng, M, 1.5);
            let a3 = thr + uniform(rng, M, 1.0);
            let a4 = a3 + uniform(rng, M, 1.5);
            InstanceSpec {
                eq,
                params: TheoremParams::O14AlphaQuad {
                    z: any_z(rng),
                    b21: uniform(rng, -2.0, 2.0),
                    a_values: [a1, a2, a3, a4],
                },
            }
        }
        T3_2_II => {
            let eq = sample_eq(rng, n, false);
            let thr = 1.0 / eq.f0();
            let a12 = if coin(rng, 0.33) {
                thr
            } else {
                thr + signed_mag(rng, M * 2.0, 1.5)
            };
            let b1 = uniform(rng, -2.0, 1.5);
            let b2 = b1 + uniform(rng, M, 1.5);
            InstanceSpec {
                eq,
                params: TheoremParams::O14BetaPair {
                    z: any_z(rng),
                    a12,
                    b_values: [b1, b2],
                },
            }
        }
        T3_3 => {
            let eq = sample_eq(rng, n, false);
            let thr = -eq.f0();
            let a2 = if coin(rng, 0.33) {
                thr
            } else {
                thr - uniform(rng, M, 1.0)
            };
            let a1 = a2 - uniform(rng, M, 1.5);
            let a3 = thr + uniform(rng, M, 1.0);
            let a4 = a3 + uniform(rng, M, 1.5);
            let a11 = if coin(rng, 0.33) {
                thr
            } else {
                thr + signed_mag(rng, M * 2.0, 1.5)
            };
            let b1 = uniform(rng, -2.0, 1.5);
            let b2 = b1 + uniform(rng, M, 1.5);
            InstanceSpec {
                eq,
                params: TheoremParams::O24Combo {
                    z: any_z(rng),
                    b21: uniform(rng, -2.0, 2.0),
                    a_values: [a1, a2, a3, a4],
                    a11,
                    b_values: [b1, b2],
                },
            }
        }
        T3_4_I | T3_4_II | T3_4_III | T3_4_IV => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let z = nonzero_z(rng);
            let params = match id {
                T3_4_I => TheoremParams::O23Case {
                    z,
                    fixed: 0.0,
                    values: ordered_pair(rng),
                },
                T3_4_II => {
                    let b22 = signed_mag(rng, 0.3, 1.5);
                    let thr = z.norm_sqr() / b22 - f0;
                    TheoremParams::O23Case {
                        z,
                        fixed: b22,
                        values: quad_around(rng, thr),
                    }
                }
                T3_4_III => TheoremParams::O23Case {
                    z,
                    fixed: -f0,
                    values: ordered_pair(rng),
                },
                T3_4_IV => {
                    let a11 = -f0 + signed_mag(rng, 0.1, 1.5);
                    let thr = z.norm_sqr() / (a11 + f0);
                    TheoremParams::O23Case {
                        z,
                        fixed: a11,
                        values: quad_around(rng, thr),
                    }
                }
                _ => unreachable!(),
            };
            InstanceSpec { eq, params }
        }
        T3_5 => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let z = nonzero_z(rng);
            let case = match rng.gen_range(0..4) {
                0 => QuadCase::FixedBPair,
                1 => QuadCase::FixedBQuad,
                2 => QuadCase::FixedAPair,
                _ => QuadCase::FixedAQuad,
            };
            let (fixed, values) = match case {
                QuadCase::FixedBPair => (0.0, ordered_pair(rng)),
                QuadCase::FixedBQuad => {
                    let b22 = signed_mag(rng, 0.3, 1.5);
                    let thr = z.norm_sqr() / b22 + 1.0 / f0;
                    (b22, quad_around(rng, thr))
                }
                QuadCase::FixedAPair => (1.0 / f0, ordered_pair(rng)),
                QuadCase::FixedAQuad => {
                    let a12 = 1.0 / f0 + signed_mag(rng, 0.1, 1.5);
                    let thr = z.norm_sqr() / (a12 - 1.0 / f0);
                    (a12, quad_around(rng, thr))
                }
            };
            InstanceSpec {
                eq,
                params: TheoremParams::O13Case {
                    z,
                    case,
                    fixed,
                    values,
                },
            }
        }
        T3_6_I => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let k = match rng.gen_range(0..4) {
                0 => sample_k_where(rng, |k| {
                    let d = k[0][0] - f0 * k[0][1];
                    d.abs() >= M && k[0][0].abs() >= M && d * k[0][0] * f0 > 0.0
                }),
                1 => sample_k_where(rng, |k| {
                    let d = k[0][0] - f0 * k[0][1];
                    d.abs() >= M && k[0][0].abs() >= M && d * k[0][0] * f0 < 0.0
                }),
                2 => k_with_zero_drop(rng, f0),
                _ => k_with_zero_k11(rng),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        T3_6_II => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let k = if coin(rng, 0.33) {
                k_with_zero_drop(rng, f0)
            } else {
                sample_k_where(rng, |k| (k[0][0] - f0 * k[0][1]).abs() >= M)
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        T3_7_I => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let k = match rng.gen_range(0..4) {
                0 => {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    k_with_zero_k12(rng, sign)
                }
                1 => sample_k_where(rng, |k| {
                    let d = k[0][0] - f0 * k[0][1];
                    d.abs() >= M && k[0][1].abs() >= M && d * k[0][1] > 0.0
                }),
                2 => sample_k_where(rng, |k| {
                    let d = k[0][0] - f0 * k[0][1];
                    d.abs() >= M && k[0][1].abs() >= M && d * k[0][1] < 0.0
                }),
                _ => k_with_zero_drop(rng, f0),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        T3_7_II => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let k = match rng.gen_range(0..4) {
                0 => {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    k_with_zero_dv(rng, f0, sign)
                }
                1 => sample_k_where(rng, |k| {
                    let d = k[0][0] - f0 * k[0][1];
                    let dv = f0 * k[1][1] - k[1][0];
                    d.abs() >= M && dv.abs() >= M && d * dv > 0.0
                }),
                2 => sample_k_where(rng, |k| {
                    let d = k[0][0] - f0 * k[0][1];
                    let dv = f0 * k[1][1] - k[1][0];
                    d.abs() >= M && dv.abs() >= M && d * dv < 0.0
                }),
                _ => k_with_zero_drop(rng, f0),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        C3_2 => {
            let eq = sample_eq(rng, n, false);
            let k = k_with_zero_drop(rng, eq.f0());
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        C3_3 => {
            let eq = sample_eq(rng, n, true);
            let f0 = eq.f0();
            let k = sample_k_where(rng, |k| (k[0][0] - f0 * k[0][1]).abs() >= M);
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily { k, gamma: 0.0 },
            }
        }
        T3_8_I | T3_8_II | T3_8_III | T3_8_IV => {
            let eq = sample_eq(rng, n, true);
            let f0 = eq.f0();
            let k = match id {
                T3_8_I => sample_k_where(rng, |k| {
                    k[0][0] - f0 * k[0][1] >= M && k[0][1] >= M
                }),
                T3_8_II => sample_k_where(rng, |k| {
                    k[0][0] - f0 * k[0][1] >= M && k[0][1] <= -M
                }),
                T3_8_III => k_with_zero_k12(rng, 1.0),
                T3_8_IV => match rng.gen_range(0..3) {
                    0 => sample_k_where(rng, |k| {
                        k[0][0] - f0 * k[0][1] <= -M && k[0][1] <= -M
                    }),
                    1 => sample_k_where(rng, |k| {
                        k[0][0] - f0 * k[0][1] <= -M && k[0][1] >= M
                    }),
                    _ => k_with_zero_k12(rng, -1.0),
                },
                _ => unreachable!(),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_open(rng),
                },
            }
        }
        T3_9 => {
            let eq = sample_eq(rng, n, true);
            let f0 = eq.f0();
            let k = sample_k_where(rng, |k| (k[0][0] - f0 * k[0][1]).abs() >= M);
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_open(rng),
                },
            }
        }
        T3_10 => {
            let eq = sample_eq(rng, n, true);
            let f0 = eq.f0();
            let k = match rng.gen_range(0..4) {
                0 => sample_k_where(rng, |k| {
                    k[0][0] - f0 * k[0][1] >= M && f0 * k[0][0] >= M
                }),
                1 => sample_k_where(rng, |k| {
                    k[0][0] - f0 * k[0][1] >= M && f0 * k[0][0] <= -M
                }),
                2 => {
                    // k11 = 0 with d = -f0 k12 > 0
                    let k12 = -f0.signum() * uniform(rng, 0.3, 2.0);
                    [[0.0, k12], [-1.0 / k12, uniform(rng, -2.0, 2.0)]]
                }
                _ => sample_k_where(rng, |k| k[0][0] - f0 * k[0][1] <= -M),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_open(rng),
                },
            }
        }
        T3_11 => {
            let eq = sample_eq(rng, n, true);
            let f0 = eq.f0();
            let k = match rng.gen_range(0..4) {
                0 => sample_k_where(rng, |k| {
                    k[0][0] - f0 * k[0][1] >= M && f0 * k[1][1] - k[1][0] >= M
                }),
                1 => sample_k_where(rng, |k| {
                    k[0][0] - f0 * k[0][1] >= M && f0 * k[1][1] - k[1][0] <= -M
                }),
                2 => k_with_zero_dv(rng, f0, 1.0),
                _ => sample_k_where(rng, |k| k[0][0] - f0 * k[0][1] <= -M),
            };
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_open(rng),
                },
            }
        }
        T3_12_I => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let k = sample_k_where(rng, |k| {
                (k[0][0] - f0 * k[0][1]).abs() >= M && k[0][0].abs() >= M
            });
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        T3_12_II => {
            let eq = sample_eq(rng, n, false);
            let f0 = eq.f0();
            let k = sample_k_where(rng, |k| {
                (k[0][0] - f0 * k[0][1]).abs() >= M && k[0][1].abs() >= M
            });
            InstanceSpec {
                eq,
                params: TheoremParams::CoupledFamily {
                    k,
                    gamma: gamma_any(rng),
                },
            }
        }
        T4_1_I | T4_1_II | T4_1_III => t4_1_instance(rng, id, n),
        C4_1_I | C4_1_II => c4_1_instance(rng, id, n),
        L4_2 => {
            let eq = sample_eq(rng, n, false);
            let bc = if coin(rng, 0.5) {
                sep_generic(rng)
            } else {
                CanonicalBC::Coupled {
                    gamma: gamma_any(rng),
                    k: sample_unimodular(rng),
                }
            };
            let mut weights: Vec<Vec<f64>> = Vec::with_capacity(20);
            weights.push(eq.w().to_vec());
            for _ in 1..20 {
                weights.push((0..n).map(|_| uniform(rng, 0.3, 3.0)).collect());
            }
            InstanceSpec {
                eq,
                params: TheoremParams::WeightFamily { bc, weights },
            }
        }
    }
}

fn ordered_pair(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let a = uniform(rng, -2.0, 1.5);
    vec![a, a + uniform(rng, M, 1.5)]
}

fn quad_around(rng: &mut ChaCha8Rng, thr: f64) -> Vec<f64> {
    let v2 = if coin(rng, 0.33) {
        thr
    } else {
        thr - uniform(rng, M, 1.0)
    };
    let v1 = v2 - uniform(rng, M, 1.5);
    let v3 = thr + uniform(rng, M, 1.0);
    let v4 = v3 + uniform(rng, M, 1.5);
    vec![v1, v2, v3, v4]
}

fn t4_1_instance(rng: &mut ChaCha8Rng, id: TheoremId, n: usize) -> InstanceSpec {
    use TheoremId::*;
    let regime = if coin(rng, 0.5) {
        WeightRegime::Decreasing
    } else {
        WeightRegime::Increasing
    };
    let condition: u8 = match id {
        T4_1_I => {
            if coin(rng, 0.5) {
                1
            } else {
                2
            }
        }
        T4_1_II => 3 + rng.gen_range(0..5) as u8,
        T4_1_III => {
            if coin(rng, 0.5) {
                8
            } else {
                9
            }
        }
        _ => unreachable!(),
    };
    let (bc, f01, f02, avoid) = match condition {
        1 => {
            let bc = if coin(rng, 0.5) {
                sep_generic(rng)
            } else {
                CanonicalBC::Coupled {
                    gamma: gamma_any(rng),
                    k: sample_k_where(rng, |k| k[0][0].abs() >= M && k[0][1].abs() >= M),
                }
            };
            let (mu1, mu2) = mu_proxy(&bc);
            let thr = -mu1 / mu2;
            let (f01, f02, _) = f0_on_side(rng, thr);
            (bc, f01, f02, Some(thr))
        }
        2 => {
            // The first two shapes have mu1 = 0 (threshold at zero); the
            // last two have mu2 = 0 (no finite threshold).
            let (bc, avoid) = match rng.gen_range(0..4) {
                0 => (
                    CanonicalBC::Coupled {
                        gamma: gamma_any(rng),
                        k: k_with_zero_k11(rng),
                    },
                    Some(0.0),
                ),
                1 => (
                    CanonicalBC::Coupled {
                        gamma: gamma_any(rng),
                        k: {
                            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                            k_with_zero_k12(rng, sign)
                        },
                    },
                    None,
                ),
                2 => (
                    CanonicalBC::Separated {
                        alpha: 0.0,
                        beta: uniform(rng, M, PI - M),
                    },
                    None,
                ),
                _ => (
                    CanonicalBC::Separated {
                        alpha: PI / 2.0,
                        beta: uniform(rng, M, PI - M),
                    },
                    Some(0.0),
                ),
            };
            let (f01, f02) = match avoid {
                Some(th) => {
                    let (a, b, _) = f0_on_side(rng, th);
                    (a, b)
                }
                None => {
                    let a = signed_mag(rng, 0.3, 3.0);
                    let b = signed_mag(rng, 0.3, 3.0);
                    (a.min(b), a.max(b))
                }
            };
            (bc, f01, f02, avoid)
        }
        3 => {
            // need |1/eta| representable as f0
            let bc = loop {
                let cand = if coin(rng, 0.5) {
                    sep_generic(rng)
                } else {
                    CanonicalBC::Coupled {
                        gamma: gamma_any(rng),
                        k: sample_k_where(rng, |k| k[0][0].abs() >= M && k[0][1].abs() >= M),
                    }
                };
                let (mu1, mu2) = mu_proxy(&cand);
                let thr = -mu1 / mu2;
                if thr.abs() >= 0.3 && thr.abs() <= 3.0 {
                    break cand;
                }
            };
            let (mu1, mu2) = mu_proxy(&bc);
            let thr = -mu1 / mu2;
            (bc, thr, thr, Some(thr))
        }
        4 | 5 => {
            let alpha = alpha_with_cot_in_box(rng, false);
            let bc = CanonicalBC::Separated { alpha, beta: PI };
            let thr = -1.0 / alpha.tan();
            let (f01, f02, _) = f0_on_side(rng, thr);
            (bc, f01, f02, Some(thr))
        }
        6 => {
            let bc = CanonicalBC::Separated {
                alpha: PI / 2.0,
                beta: PI,
            };
            let (a, b, _) = f0_on_side(rng, 0.0);
            (bc, a, b, Some(0.0))
        }
        7 => {
            let bc = CanonicalBC::Separated {
                alpha: 0.0,
                beta: PI,
            };
            let a = signed_mag(rng, 0.3, 3.0);
            let b = signed_mag(rng, 0.3, 3.0);
            (bc, a.min(b), a.max(b), None)
        }
        8 | 9 => {
            let alpha = alpha_with_cot_in_box(rng, true);
            let bc = CanonicalBC::Separated { alpha, beta: PI };
            let thr = -1.0 / alpha.tan();
            (bc, thr, thr, Some(thr))
        }
        _ => unreachable!(),
    };
    let (eq1, eq2) = eq_pair(rng, n, f01, f02, regime, avoid);
    InstanceSpec {
        eq: eq1,
        params: TheoremParams::EquationPair {
            eq2,
            bc,
            condition,
            regime,
        },
    }
}

fn mu_proxy(bc: &CanonicalBC) -> (f64, f64) {
    match *bc {
        CanonicalBC::Separated { alpha, beta } => {
            (-alpha.cos() * beta.sin(), -alpha.sin() * beta.sin())
        }
        CanonicalBC::Coupled { k, .. } => (-k[0][0], k[0][1]),
    }
}

/// Angle in `(0, π)` away from `π/2`; when `boxed`, additionally with
/// `|cot α| ∈ [0.3, 3]` so the drop threshold is a representable `f0`.
fn alpha_with_cot_in_box(rng: &mut ChaCha8Rng, boxed: bool) -> f64 {
    loop {
        let a = uniform(rng, M, PI - M);
        if (a - PI / 2.0).abs() <= M {
            continue;
        }
        if !boxed {
            return a;
        }
        let c = 1.0 / a.tan();
        if c.abs() >= 0.3 && c.abs() <= 3.0 {
            return a;
        }
    }
}

fn c4_1_instance(rng: &mut ChaCha8Rng, id: TheoremId, n: usize) -> InstanceSpec {
    use TheoremId::*;
    let regime = if coin(rng, 0.5) {
        WeightRegime::Decreasing
    } else {
        WeightRegime::Increasing
    };
    let z = any_z(rng);
    let b1 = uniform(rng, -2.0, 1.5);
    let b21 = [b1, b1 + uniform(rng, 0.0, 1.0)];
    let (condition, a12, f01, f02) = if id == C4_1_II {
        let f0 = signed_mag(rng, 0.3, 3.0);
        let a = 1.0 / f0;
        (0u8, [a, a], f0, f0)
    } else if coin(rng, 0.5) {
        // condition (1)
        let s: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        if coin(rng, 0.5) {
            // branch: a12(2) < 1/f0(2), both a12 values sharing the sign of
            // f0(2) and sitting strictly below its reciprocal
            let f02 = s * uniform(rng, 0.4, 3.0);
            let t2 = 1.0 / f02;
            let (x, y) = if s > 0.0 {
                let x = uniform(rng, M, t2 - 1.5 * M);
                (x, uniform(rng, x, t2 - M))
            } else {
                let y = uniform(rng, t2 - 1.5, t2 - M);
                (uniform(rng, y - 1.5, y), y)
            };
            let f01 = sample_nonzero_leq(rng, f02);
            (1u8, [x, y], f01, f02)
        } else {
            // branch: f0(1) > 1/a12(1)
            let a1 = s * uniform(rng, 0.4, 2.5);
            let inv = 1.0 / a1;
            let (f01, f02) = if s > 0.0 {
                let f01 = uniform(rng, inv + M, 3.0);
                (f01, uniform(rng, f01, 3.0))
            } else {
                let f01 = uniform(rng, inv + M, -0.3);
                (f01, uniform(rng, f01, -0.3))
            };
            (1u8, [a1, a1 + uniform(rng, 0.0, 1.5)], f01, f02)
        }
    } else {
        // condition (2): a12(1) = 0
        if coin(rng, 0.5) {
            let f02 = uniform(rng, 0.3, 3.0);
            let a2 = uniform(rng, 0.0, (1.0 / f02 - M).max(0.0));
            (2u8, [0.0, a2], sample_nonzero_leq(rng, f02), f02)
        } else {
            let f02 = uniform(rng, -3.0, -0.3);
            (2u8, [0.0, uniform(rng, 0.0, 2.0)], sample_nonzero_leq(rng, f02), f02)
        }
    };
    // Condition (1) and part (ii) have the finite threshold 1/a12(1); in
    // condition (2) that entry is zero and the threshold is at infinity.
    let avoid = if a12[0] != 0.0 {
        Some(1.0 / a12[0])
    } else {
        None
    };
    let (eq1, eq2) = eq_pair(rng, n, f01, f02, regime, avoid);
    InstanceSpec {
        eq: eq1,
        params: TheoremParams::O14Pair {
            z,
            a12,
            b21,
            eq2,
            condition: if id == C4_1_II { 0 } else { condition },
            regime,
        },
    }
}
