//! Property suites for the spectral core: the count law, the closed-form
//! leading terms, realness and multiplicities, conjugate symmetry,
//! representative invariance, and the oracle cross-checks.

use dslp_core::mat2::{Mat2, C64};
use dslp_core::slp::{chart_coords, classify_bc, eigenvalue_count, xi_of, RawBC};
use dslp_core::spectrum::{
    fundamental_solutions, oracle_dirichlet, oracle_pencil_scan, scan_bracket, solve_spectrum,
};
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

fn random_eq(rng: &mut ChaCha8Rng, n: usize) -> Equation {
    let f: Vec<f64> = (0..=n).map(|_| signed_mag(rng, 0.3, 3.0)).collect();
    let q: Vec<f64> = (0..n).map(|_| uniform(rng, -2.0, 2.0)).collect();
    let w: Vec<f64> = (0..n).map(|_| uniform(rng, 0.3, 3.0)).collect();
    Equation::new(n, f, q, w).unwrap()
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    let k11 = signed_mag(rng, 0.3, 2.0);
    let k12 = uniform(rng, -2.0, 2.0);
    let k21 = uniform(rng, -2.0, 2.0);
    [[k11, k12], [k21, (1.0 + k12 * k21) / k11]]
}

/// Random condition spanning all three count classes r = 0, 1, 2.
fn random_bc(rng: &mut ChaCha8Rng, eq: &Equation) -> CanonicalBC {
    match rng.gen_range(0..6) {
        0 => CanonicalBC::Separated {
            alpha: uniform(rng, 0.0, PI - 1e-6),
            beta: uniform(rng, 1e-6, PI),
        },
        // exact degenerate angles to hit r = 1 and r = 0
        1 => CanonicalBC::Separated {
            alpha: eq.xi(),
            beta: uniform(rng, 1e-6, PI),
        },
        2 => CanonicalBC::Separated {
            alpha: if rng.gen::<bool>() { eq.xi() } else { uniform(rng, 0.0, PI - 1e-6) },
            beta: PI,
        },
        3 | 4 => CanonicalBC::Coupled {
            gamma: uniform(rng, -PI + 1e-9, PI),
            k: random_unimodular(rng),
        },
        // coupled with the count dropped by one
        _ => {
            let f0 = eq.f0();
            let k12 = signed_mag(rng, 0.3, 1.5);
            let k11 = f0 * k12;
            let k22 = uniform(rng, -2.0, 2.0);
            let k21 = (k11 * k22 - 1.0) / k12;
            CanonicalBC::Coupled {
                gamma: uniform(rng, -PI + 1e-9, PI),
                k: [[k11, k12], [k21, k22]],
            }
        }
    }
}

#[test]
fn count_law_on_random_instances() {
    let rng = &mut ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 3];
    for trial in 0..1000 {
        let n = 2 + (trial % 11);
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let (r, k) = eigenvalue_count(&eq, &bc);
        seen[r] += 1;
        let sp = solve_spectrum(&eq, &bc)
            .unwrap_or_else(|e| panic!("solve failed (trial {trial}, r={r}): {e}"));
        assert_eq!(sp.gamma_poly.degree().unwrap_or(0), k, "degree law");
        assert_eq!(sp.k, k);
    }
    assert!(seen.iter().all(|&c| c > 0), "r classes covered: {seen:?}");
}

#[test]
fn leading_terms_match_closed_forms() {
    let rng = &mut ChaCha8Rng::seed_from_u64(12);
    for trial in 0..200 {
        let n = 2 + (trial % 11);
        let eq = random_eq(rng, n);
        let quad = fundamental_solutions(&eq);
        let f = eq.f();
        let w = eq.w();
        let prod: f64 = (1..n).map(|i| w[i - 1] / f[i]).product();
        let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let phi_lead = sign * prod;
        let psi_lead = sign * prod / f[0];
        let fdphi_lead = -sign * w[n - 1] * prod;
        let fdpsi_lead = -sign * w[n - 1] * prod / f[0];
        for (got, want) in [
            (quad.phi_n.leading_coeff(), phi_lead),
            (quad.psi_n.leading_coeff(), psi_lead),
            (quad.fd_phi_n.leading_coeff(), fdphi_lead),
            (quad.fd_psi_n.leading_coeff(), fdpsi_lead),
        ] {
            assert!(
                (got - want).abs() <= 1e-9 * want.abs(),
                "leading coefficient {got} vs closed form {want} (trial {trial})"
            );
        }
    }
}

#[test]
fn realness_and_multiplicity_bound() {
    let rng = &mut ChaCha8Rng::seed_from_u64(13);
    for trial in 0..500 {
        let n = 2 + (trial % 11);
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let sp = solve_spectrum(&eq, &bc).unwrap();
        assert_eq!(sp.eigenvalues.total_multiplicity(), sp.k);
        assert!(sp.eigenvalues.roots().iter().all(|&(_, m)| m <= 2));
    }
}

#[test]
fn conjugate_symmetry_of_coupled_spectra() {
    let rng = &mut ChaCha8Rng::seed_from_u64(14);
    for trial in 0..200 {
        let n = 2 + (trial % 9);
        let eq = random_eq(rng, n);
        let k = random_unimodular(rng);
        let gamma = uniform(rng, 1e-3, PI - 1e-3);
        let plus = solve_spectrum(&eq, &CanonicalBC::Coupled { gamma, k }).unwrap();
        let minus = solve_spectrum(&eq, &CanonicalBC::Coupled { gamma: -gamma, k }).unwrap();
        let (a, b) = (plus.expanded(), minus.expanded());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "trial {trial}: {x} vs {y}");
        }
    }
}

#[test]
fn solve_agrees_with_pencil_scan() {
    let rng = &mut ChaCha8Rng::seed_from_u64(15);
    for trial in 0..200 {
        let n = 2 + (trial % 9); // N <= 10
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let sp = solve_spectrum(&eq, &bc).unwrap();
        let scanned = oracle_pencil_scan(&eq, &bc, scan_bracket(&eq, &bc)).unwrap();
        let ev = sp.expanded();
        assert_eq!(ev.len(), scanned.len(), "trial {trial}");
        for (a, b) in ev.iter().zip(&scanned) {
            assert!((a - b).abs() <= 1e-8, "trial {trial}: {a} vs {b}");
        }
    }
}

#[test]
fn dirichlet_agrees_with_tridiagonal_oracle_up_to_50() {
    let rng = &mut ChaCha8Rng::seed_from_u64(16);
    let dirichlet = CanonicalBC::Separated {
        alpha: 0.0,
        beta: PI,
    };
    for n in [2usize, 3, 5, 8, 13, 21, 34, 50] {
        for _ in 0..4 {
            let eq = random_eq(rng, n);
            let sp = solve_spectrum(&eq, &dirichlet).unwrap();
            let oracle = oracle_dirichlet(&eq);
            let ev = sp.expanded();
            assert_eq!(ev.len(), oracle.len());
            for (a, b) in ev.iter().zip(&oracle) {
                assert!((a - b).abs() <= 1e-8, "N={n}: {a} vs {b}");
            }
        }
    }
}

fn random_invertible(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let m = Mat2::new([
            [
                C64::new(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)),
                C64::new(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)),
            ],
            [
                C64::new(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)),
                C64::new(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)),
            ],
        ]);
        if m.det().norm() > 0.3 {
            return m;
        }
    }
}

fn canonical_close(a: &CanonicalBC, b: &CanonicalBC, tol: f64) -> bool {
    match (a, b) {
        (
            CanonicalBC::Separated { alpha: a1, beta: b1 },
            CanonicalBC::Separated { alpha: a2, beta: b2 },
        ) => (a1 - a2).abs() <= tol && (b1 - b2).abs() <= tol,
        (
            CanonicalBC::Coupled { gamma: g1, k: k1 },
            CanonicalBC::Coupled { gamma: g2, k: k2 },
        ) => {
            (g1 - g2).abs() <= tol
                && k1
                    .iter()
                    .flatten()
                    .zip(k2.iter().flatten())
                    .all(|(x, y)| (x - y).abs() <= tol)
        }
        _ => false,
    }
}

#[test]
fn representative_invariance_of_classification_and_count() {
    let rng = &mut ChaCha8Rng::seed_from_u64(17);
    for trial in 0..200 {
        let n = 2 + (trial % 9);
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let raw = bc.representative();
        let t = random_invertible(rng);
        let transformed = raw.transformed(&t).unwrap();
        let reclassified = classify_bc(&transformed).unwrap();
        let base = classify_bc(&raw).unwrap();
        assert!(
            canonical_close(&base, &reclassified, 1e-8),
            "trial {trial}: {base:?} vs {reclassified:?}"
        );
        assert_eq!(
            dslp_core::slp::eigenvalue_count_raw(&eq, &transformed),
            eigenvalue_count(&eq, &bc),
        );
    }
}

#[test]
fn classification_round_trip_is_a_fixed_point() {
    let rng = &mut ChaCha8Rng::seed_from_u64(18);
    for trial in 0..300 {
        let eq = random_eq(rng, 3);
        let bc0 = random_bc(rng, &eq);
        // land on the classifier's canonical label first
        let bc1 = classify_bc(&bc0.representative()).unwrap();
        let bc2 = classify_bc(&bc1.representative()).unwrap();
        assert!(canonical_close(&bc1, &bc2, 1e-10), "trial {trial}");
    }
}

#[test]
fn reconstructed_representatives_stay_self_adjoint() {
    let rng = &mut ChaCha8Rng::seed_from_u64(19);
    let j = dslp_core::mat2::j_form();
    for trial in 0..200 {
        let eq = random_eq(rng, 3);
        let bc = random_bc(rng, &eq);
        let raw = bc.representative();
        let lhs = raw.a().mul(&j).mul(&raw.a().adjoint());
        let rhs = raw.b().mul(&j).mul(&raw.b().adjoint());
        for r in 0..2 {
            for c in 0..2 {
                assert!(
                    (lhs.e[r][c] - rhs.e[r][c]).norm() <= 1e-10,
                    "trial {trial}"
                );
            }
        }
        // chart coordinates reconstruct to the same condition
        for coords in chart_coords(&bc) {
            let back = classify_bc(&coords.reconstruct()).unwrap();
            let base = classify_bc(&raw).unwrap();
            assert!(canonical_close(&base, &back, 1e-8), "trial {trial}");
        }
    }
}

#[test]
fn separated_count_grid_matches_the_angle_cases() {
    let rng = &mut ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let eq = random_eq(rng, 4);
        let xi = xi_of(eq.f0());
        for i in 0..10 {
            let alpha = if i == 9 { xi } else { i as f64 * PI / 10.0 };
            for jj in 1..=10 {
                let beta = jj as f64 * PI / 10.0;
                let (r, _) = eigenvalue_count(&eq, &CanonicalBC::Separated { alpha, beta });
                let at_xi = (alpha - xi).abs() < 1e-12;
                let at_pi = (beta - PI).abs() < 1e-12;
                let expect = 2 - usize::from(at_xi) - usize::from(at_pi);
                assert_eq!(r, expect, "alpha {alpha} beta {beta} xi {xi}");
            }
        }
    }
}

#[test]
fn raw_and_canonical_routes_agree_on_spectra() {
    // exercises classify_bc through the solve path
    let rng = &mut ChaCha8Rng::seed_from_u64(21);
    for trial in 0..100 {
        let n = 2 + (trial % 7);
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let t = random_invertible(rng);
        let alt = classify_bc(&bc.representative().transformed(&t).unwrap()).unwrap();
        let a = solve_spectrum(&eq, &bc).unwrap().expanded();
        let b = solve_spectrum(&eq, &alt).unwrap().expanded();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "trial {trial}");
        }
    }
}

#[test]
fn raw_bc_rejects_non_self_adjoint_pairs() {
    // determinant moduli differ, so A J A* != B J B*
    let a = Mat2::from_real([[1.0, 0.0], [0.0, 1.0]]);
    let b = Mat2::from_real([[2.0, 0.0], [0.0, 1.0]]);
    assert!(RawBC::new(a, b).is_err());
    // rank(A, B) < 2: second row is twice the first across the pair
    let a = Mat2::from_real([[1.0, 0.0], [2.0, 0.0]]);
    let b = Mat2::from_real([[0.5, 0.0], [1.0, 0.0]]);
    assert!(RawBC::new(a, b).is_err());
}
