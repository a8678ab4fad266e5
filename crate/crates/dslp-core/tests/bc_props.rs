//! Properties of the derived boundary-condition families: modified
//! couplings, natural-loop limits, and the monotone structure of the
//! separated eigenvalue curves that the interlacing chains lean on.

use dslp_core::bc::{
    make_coupled, make_separated, modified_couplings, natural_loops, LoopCoordinate, NaturalLoop,
};
use dslp_core::mat2::C64;
use dslp_core::slp::{eigenvalue_count, Chart};
use dslp_core::spectrum::solve_spectrum;
use dslp_core::{CanonicalBC, Equation};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

fn signed_mag(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    s * uniform(rng, lo, hi)
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    let k11 = signed_mag(rng, 0.3, 2.0);
    let k12 = uniform(rng, -2.0, 2.0);
    let k21 = uniform(rng, -2.0, 2.0);
    [[k11, k12], [k21, (1.0 + k12 * k21) / k11]]
}

fn harmonic(n: usize) -> Equation {
    Equation::new(n, vec![1.0; n + 1], vec![0.0; n], vec![1.0; n]).unwrap()
}

#[test]
fn modified_couplings_are_unimodular_and_drop_the_count() {
    let rng = &mut ChaCha8Rng::seed_from_u64(31);
    for trial in 0..300 {
        let k = random_unimodular(rng);
        let f0 = signed_mag(rng, 0.3, 3.0);
        let (hat, tilde) = modified_couplings(k, f0);
        let n = 3 + trial % 5;
        let eq = {
            let mut f = vec![f0];
            f.extend((0..n).map(|_| signed_mag(rng, 0.3, 3.0)));
            Equation::new(n, f, vec![0.0; n], vec![1.0; n]).unwrap()
        };
        for m in [hat, tilde].into_iter().flatten() {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!((det - 1.0).abs() <= 1e-10, "det {det}");
            assert!(
                (m[0][0] - f0 * m[0][1]).abs() <= 1e-10 * m[0][0].abs().max(1.0),
                "drop identity violated"
            );
            let bc = make_coupled(0.0, m).unwrap();
            let (r, k_count) = eigenvalue_count(&eq, &bc);
            assert_eq!(r, 1);
            assert_eq!(k_count, n - 1);
        }
        // presence matches the entry pattern
        assert_eq!(hat.is_none(), k[0][0] == 0.0);
        assert_eq!(tilde.is_none(), k[0][1] == 0.0);
    }
}

#[test]
fn every_natural_loop_limit_is_separated() {
    let rng = &mut ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let bc = if rng.gen::<bool>() {
            make_coupled(
                uniform(rng, -PI + 1e-6, PI),
                random_unimodular(rng),
            )
            .unwrap()
        } else {
            make_separated(uniform(rng, 0.0, PI - 1e-6), uniform(rng, 1e-6, PI)).unwrap()
        };
        let loops = natural_loops(&bc).unwrap();
        assert!(!loops.is_empty());
        for l in loops {
            assert!(l.limit_bc.is_separated());
        }
    }
}

/// Along the sweep coordinate, the spectrum at parameter values near
/// +-1e6 approaches the limit condition's spectrum on the indices where
/// the limit is continuous: every index from the right; from the left the
/// indices shift by one when the limit condition has one fewer eigenvalue.
#[test]
fn loop_spectra_approach_their_limits() {
    let eq = harmonic(4);
    // O14 coordinates of the periodic condition: a12 = 0, b21 = 0, z = -1
    let z = C64::new(-1.0, 0.0);

    // sweep of the first coordinate: limit has the full count N
    let loop_a = NaturalLoop::new(Chart::O14, LoopCoordinate::A, 0.0, z).unwrap();
    let limit = solve_spectrum(&eq, &loop_a.limit_bc).unwrap().expanded();
    assert_eq!(limit.len(), 4);
    for s in [1e6, -1e6] {
        let bc = loop_a.bc_at(s).unwrap();
        let ev = solve_spectrum(&eq, &bc).unwrap().expanded();
        assert_eq!(ev.len(), 4);
        for (a, b) in ev.iter().zip(&limit) {
            assert!((a - b).abs() < 1e-3, "s={s}: {a} vs {b}");
        }
    }

    // sweep of the second coordinate: limit drops one eigenvalue, indices
    // shift by one from below
    let loop_b = NaturalLoop::new(Chart::O14, LoopCoordinate::B, 0.0, z).unwrap();
    let limit = solve_spectrum(&eq, &loop_b.limit_bc).unwrap().expanded();
    assert_eq!(limit.len(), 3);
    let ev = solve_spectrum(&eq, &loop_b.bc_at(1e6).unwrap())
        .unwrap()
        .expanded();
    for (n, lim) in limit.iter().enumerate() {
        assert!((ev[n] - lim).abs() < 1e-3, "t -> +inf, index {n}");
    }
    let ev = solve_spectrum(&eq, &loop_b.bc_at(-1e6).unwrap())
        .unwrap()
        .expanded();
    for (n, lim) in limit.iter().enumerate() {
        assert!((ev[n + 1] - lim).abs() < 1e-3, "t -> -inf, index {n}");
    }
}

/// The separated eigenvalue curves are non-increasing in alpha on both
/// sides of the critical angle, and the bottom curve dives as alpha
/// approaches it from below.
#[test]
fn alpha_monotonicity_spot_check() {
    let eq = harmonic(4);
    let xi = eq.xi();
    let beta0 = PI / 2.0;
    let mut prev: Option<Vec<f64>> = None;
    for i in 0..50 {
        let alpha = (i as f64 / 50.0) * (xi - 2e-4);
        let ev = solve_spectrum(
            &eq,
            &CanonicalBC::Separated {
                alpha,
                beta: beta0,
            },
        )
        .unwrap()
        .expanded();
        if let Some(p) = prev {
            for (a, b) in ev.iter().zip(&p) {
                assert!(*a <= b + 1e-9, "not non-increasing at alpha {alpha}");
            }
        }
        prev = Some(ev);
    }
    let mut prev: Option<Vec<f64>> = None;
    for i in 1..=50 {
        let alpha = xi + (i as f64 / 50.0) * (PI - xi - 1e-6);
        let ev = solve_spectrum(
            &eq,
            &CanonicalBC::Separated {
                alpha,
                beta: beta0,
            },
        )
        .unwrap()
        .expanded();
        if let Some(p) = prev {
            for (a, b) in ev.iter().zip(&p) {
                assert!(*a <= b + 1e-9, "not non-increasing at alpha {alpha}");
            }
        }
        prev = Some(ev);
    }
    // divergence just below the critical angle
    let ev = solve_spectrum(
        &eq,
        &CanonicalBC::Separated {
            alpha: xi - 1e-4,
            beta: beta0,
        },
    )
    .unwrap()
    .expanded();
    assert!(ev[0] < -1e3, "lambda_0 = {} should dive", ev[0]);
}

/// Fixed equation, weights swept: the sign of each indexed eigenvalue is
/// consistent across weight vectors.
#[test]
fn weight_sign_dichotomy_spot_check() {
    let rng = &mut ChaCha8Rng::seed_from_u64(33);
    for _ in 0..20 {
        let n = 3 + rng.gen_range(0..4);
        let f: Vec<f64> = (0..=n).map(|_| signed_mag(rng, 0.3, 3.0)).collect();
        let q: Vec<f64> = (0..n).map(|_| uniform(rng, -2.0, 2.0)).collect();
        let bc = make_coupled(uniform(rng, -3.0, 3.0), random_unimodular(rng)).unwrap();
        let mut spectra = Vec::new();
        for _ in 0..12 {
            let w: Vec<f64> = (0..n).map(|_| uniform(rng, 0.3, 3.0)).collect();
            let eq = Equation::new(n, f.clone(), q.clone(), w).unwrap();
            spectra.push(solve_spectrum(&eq, &bc).unwrap().expanded());
        }
        let k = spectra[0].len();
        for j in 0..k {
            let lo = spectra.iter().map(|s| s[j]).fold(f64::INFINITY, f64::min);
            let hi = spectra
                .iter()
                .map(|s| s[j])
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                !(lo < -1e-8 && hi > 1e-8),
                "index {j} changes sign: [{lo}, {hi}]"
            );
        }
    }
}
