//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p dslp-cli --test acceptance -- --nocapture`.

use dslp_core::bc::derived_separated_bcs;
use dslp_core::ineq::{check_theorem, InstanceSpec, LinkKind, TheoremId, TheoremParams};
use dslp_core::mat2::{Mat2, C64};
use dslp_core::slp::{classify_bc, eigenvalue_count};
use dslp_core::spectrum::{
    characteristic_polynomial_raw, fundamental_solutions, oracle_dirichlet, oracle_pencil_scan,
    scan_bracket, solve_spectrum,
};
use dslp_core::{CanonicalBC, Equation, RawBC};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

struct Criterion {
    name: &'static str,
    ok: bool,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self { name, ok: true }
    }

    fn check(&mut self, ok: bool, what: &str) {
        if !ok {
            eprintln!("criterion {}: check failed: {what}", self.name);
            self.ok = false;
        }
    }

    fn finish(self) {
        println!(
            "criterion {}: {}",
            self.name,
            if self.ok { "PASS" } else { "FAIL" }
        );
        assert!(self.ok, "criterion {} failed", self.name);
    }
}

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

fn random_bc(rng: &mut ChaCha8Rng, eq: &Equation) -> CanonicalBC {
    match rng.gen_range(0..6) {
        0 => CanonicalBC::Separated {
            alpha: uniform(rng, 0.0, PI - 1e-6),
            beta: uniform(rng, 1e-6, PI),
        },
        1 => CanonicalBC::Separated {
            alpha: eq.xi(),
            beta: uniform(rng, 1e-6, PI),
        },
        2 => CanonicalBC::Separated {
            alpha: if rng.gen::<bool>() {
                eq.xi()
            } else {
                uniform(rng, 0.0, PI - 1e-6)
            },
            beta: PI,
        },
        3 | 4 => CanonicalBC::Coupled {
            gamma: uniform(rng, -PI + 1e-9, PI),
            k: random_unimodular(rng),
        },
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

fn harmonic(n: usize) -> Equation {
    Equation::new(n, vec![1.0; n + 1], vec![0.0; n], vec![1.0; n]).unwrap()
}

fn sheared_raw(s: f64) -> RawBC {
    let a = Mat2::from_real([[1.0, s], [0.0, -1.0]]);
    let b = Mat2::from_real([[-1.0, 0.0], [0.0, 1.0]]);
    RawBC::new(a, b).unwrap()
}

/// Worked-example reproduction: raw-form characteristic coefficients,
/// piecewise eigenvalue formulas, the limit spectrum, the five ordering
/// cases, all inside one second.
#[test]
fn criterion_1_example_reproduction() {
    let mut c = Criterion::new("1 (worked example, exact)");
    let start = Instant::now();
    let eq = harmonic(2);
    for s in [-1.0, 0.0, 1.0, 2.0, 3.0] {
        let g = characteristic_polynomial_raw(&eq, &sheared_raw(s)).unwrap();
        let want = [0.0, 2.0 * (s - 2.0), -(s - 1.0)];
        for (i, w) in want.iter().enumerate() {
            c.check(
                (g.coeff(i) - w).abs() <= 1e-12,
                &format!("coefficient {i} at s={s}"),
            );
        }
    }
    for s in [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        let bc = classify_bc(&sheared_raw(s)).unwrap();
        let ev = solve_spectrum(&eq, &bc).unwrap().expanded();
        let hyp = 2.0 * (s - 2.0) / (s - 1.0);
        let want: Vec<f64> = if (s - 1.0).abs() < 1e-12 {
            vec![0.0]
        } else if s < 1.0 || s > 2.0 {
            vec![0.0f64.min(hyp).min(0.0), hyp.max(0.0)]
        } else {
            vec![hyp, 0.0]
        };
        c.check(ev.len() == want.len(), &format!("count at s={s}"));
        for (a, b) in ev.iter().zip(&want) {
            c.check((a - b).abs() <= 1e-10, &format!("eigenvalue at s={s}"));
        }
    }
    let limit = solve_spectrum(
        &eq,
        &CanonicalBC::Separated {
            alpha: PI / 2.0,
            beta: PI / 2.0,
        },
    )
    .unwrap()
    .expanded();
    c.check(
        limit.len() == 2 && limit[0].abs() <= 1e-10 && (limit[1] - 2.0).abs() <= 1e-10,
        "limit spectrum {0, 2}",
    );
    // the five ordering cases, verbatim comparison logic
    let eqv = |x: f64, y: f64| (x - y).abs() <= 1e-10;
    let ltv = |x: f64, y: f64| y - x > 1e-10;
    for (s, case) in [(-1.0, 0usize), (1.0, 1), (1.5, 2), (2.0, 3), (3.0, 4)] {
        let a = solve_spectrum(&eq, &classify_bc(&sheared_raw(s)).unwrap())
            .unwrap()
            .expanded();
        let ok = match case {
            0 => eqv(limit[0], a[0]) && ltv(a[0], limit[1]) && ltv(limit[1], a[1]),
            1 => a.len() == 1 && eqv(limit[0], a[0]) && ltv(a[0], limit[1]),
            2 => ltv(a[0], limit[0]) && eqv(limit[0], a[1]) && ltv(a[1], limit[1]),
            3 => eqv(a[0], limit[0]) && eqv(limit[0], a[1]) && ltv(a[1], limit[1]),
            _ => eqv(a[0], limit[0]) && ltv(limit[0], a[1]) && ltv(a[1], limit[1]),
        };
        c.check(ok, &format!("ordering case at s={s}"));
    }
    // the packaged command agrees
    let out = Command::new(env!("CARGO_BIN_EXE_dslp"))
        .args(["example", "--id", "3.1"])
        .output()
        .unwrap();
    c.check(out.status.code() == Some(0), "example command exits 0");
    c.check(start.elapsed().as_secs_f64() < 1.0, "runtime under 1 s");
    c.finish();
}

/// Count law on a thousand random instances spanning all three count
/// classes, inside thirty seconds.
#[test]
fn criterion_2_count_law() {
    let mut c = Criterion::new("2 (count law)");
    let start = Instant::now();
    let rng = &mut ChaCha8Rng::seed_from_u64(101);
    let mut seen = [0usize; 3];
    for trial in 0..1000 {
        let n = 2 + trial % 11;
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let (r, k) = eigenvalue_count(&eq, &bc);
        seen[r] += 1;
        match solve_spectrum(&eq, &bc) {
            Ok(sp) => c.check(
                sp.gamma_poly.degree().unwrap_or(0) == k,
                &format!("degree law, trial {trial}"),
            ),
            Err(e) => c.check(false, &format!("solve failed, trial {trial}: {e}")),
        }
    }
    c.check(
        seen.iter().all(|&x| x > 0),
        &format!("all count classes seen: {seen:?}"),
    );
    c.check(start.elapsed().as_secs_f64() < 30.0, "runtime under 30 s");
    c.finish();
}

/// Closed-form leading terms on two hundred random equations with
/// sign-changing coefficient sequences.
#[test]
fn criterion_3_leading_terms() {
    let mut c = Criterion::new("3 (leading terms)");
    let rng = &mut ChaCha8Rng::seed_from_u64(102);
    for trial in 0..200 {
        let n = 2 + trial % 11;
        let eq = random_eq(rng, n);
        let quad = fundamental_solutions(&eq);
        let f = eq.f();
        let w = eq.w();
        let prod: f64 = (1..n).map(|i| w[i - 1] / f[i]).product();
        let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let closed = [
            (quad.phi_n.leading_coeff(), sign * prod),
            (quad.psi_n.leading_coeff(), sign * prod / f[0]),
            (quad.fd_phi_n.leading_coeff(), -sign * w[n - 1] * prod),
            (
                quad.fd_psi_n.leading_coeff(),
                -sign * w[n - 1] * prod / f[0],
            ),
        ];
        for (got, want) in closed {
            c.check(
                (got - want).abs() <= 1e-9 * want.abs(),
                &format!("leading coefficient, trial {trial}"),
            );
        }
    }
    c.finish();
}

/// Realness and the multiplicity bound on the count-law instance family.
#[test]
fn criterion_4_realness_and_multiplicity() {
    let mut c = Criterion::new("4 (realness, multiplicity)");
    let rng = &mut ChaCha8Rng::seed_from_u64(101); // same family as criterion 2
    for trial in 0..1000 {
        let n = 2 + trial % 11;
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        match solve_spectrum(&eq, &bc) {
            Ok(sp) => {
                c.check(
                    sp.eigenvalues.total_multiplicity() == sp.k,
                    &format!("total multiplicity, trial {trial}"),
                );
                c.check(
                    sp.eigenvalues.roots().iter().all(|&(_, m)| (1..=2).contains(&m)),
                    &format!("multiplicity bound, trial {trial}"),
                );
            }
            Err(e) => c.check(false, &format!("solve failed, trial {trial}: {e}")),
        }
    }
    c.finish();
}

/// Oracle equivalence: the grid-scan oracle on two hundred instances up to
/// N = 10, and the tridiagonal pencil oracle for the endpoint-pinned
/// condition up to N = 50, inside sixty seconds.
#[test]
fn criterion_5_oracle_equivalence() {
    let mut c = Criterion::new("5 (oracle equivalence)");
    let start = Instant::now();
    let rng = &mut ChaCha8Rng::seed_from_u64(103);
    for trial in 0..200 {
        let n = 2 + trial % 9;
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let sp = solve_spectrum(&eq, &bc).unwrap().expanded();
        let scan = oracle_pencil_scan(&eq, &bc, scan_bracket(&eq, &bc)).unwrap();
        c.check(sp.len() == scan.len(), &format!("scan count, trial {trial}"));
        for (a, b) in sp.iter().zip(&scan) {
            c.check((a - b).abs() <= 1e-8, &format!("scan value, trial {trial}"));
        }
    }
    let dirichlet = CanonicalBC::Separated {
        alpha: 0.0,
        beta: PI,
    };
    for n in [2usize, 5, 10, 17, 26, 38, 50] {
        for rep in 0..4 {
            let eq = random_eq(rng, n);
            let sp = solve_spectrum(&eq, &dirichlet).unwrap().expanded();
            let oracle = oracle_dirichlet(&eq);
            c.check(sp.len() == oracle.len(), &format!("count, N={n} rep={rep}"));
            for (a, b) in sp.iter().zip(&oracle) {
                c.check(
                    (a - b).abs() <= 1e-8,
                    &format!("pencil value, N={n} rep={rep}"),
                );
            }
        }
    }
    c.check(start.elapsed().as_secs_f64() < 60.0, "runtime under 60 s");
    c.finish();
}

/// The classical two-point ladder: periodic, antiperiodic, quarter-phase and
/// endpoint-pinned spectra, plus the even-N interlacing chain with its
/// strict links strictly resolved.
#[test]
fn criterion_6_classical_fixture() {
    let mut c = Criterion::new("6 (classical interlacing fixture)");
    let eq = harmonic(2);
    let eye = [[1.0, 0.0], [0.0, 1.0]];
    let cases: [(CanonicalBC, Vec<f64>); 4] = [
        (CanonicalBC::Coupled { gamma: 0.0, k: eye }, vec![0.0, 4.0]),
        (
            CanonicalBC::Coupled {
                gamma: 0.0,
                k: [[-1.0, 0.0], [0.0, -1.0]],
            },
            vec![2.0, 2.0],
        ),
        (
            CanonicalBC::Coupled {
                gamma: PI / 2.0,
                k: eye,
            },
            vec![2.0 - 2.0f64.sqrt(), 2.0 + 2.0f64.sqrt()],
        ),
        (
            CanonicalBC::Separated {
                alpha: 0.0,
                beta: PI,
            },
            vec![2.0],
        ),
    ];
    for (bc, want) in &cases {
        let ev = solve_spectrum(&eq, bc).unwrap().expanded();
        c.check(ev.len() == want.len(), "fixture count");
        for (a, b) in ev.iter().zip(want) {
            c.check((a - b).abs() <= 1e-9, &format!("fixture value {a} vs {b}"));
        }
    }
    // the Dirichlet condition is the separated companion of the identity
    let comps = derived_separated_bcs(eye).unwrap();
    c.check(
        comps.s_k
            == CanonicalBC::Separated {
                alpha: 0.0,
                beta: PI,
            },
        "companion is the endpoint-pinned condition",
    );
    let spec = InstanceSpec {
        eq,
        params: TheoremParams::CoupledFamily {
            k: eye,
            gamma: PI / 2.0,
        },
    };
    let report = check_theorem(TheoremId::T3_8_III, &spec, 1e-8).unwrap();
    c.check(report.hypotheses_met && report.passed, "chain passes");
    // every strict link resolved with real margin: no tight flags on them
    for &pos in &report.strictness_flags {
        c.check(
            !matches!(report.links[pos].kind, LinkKind::Lt),
            "strict links hold strictly",
        );
    }
    c.finish();
}

/// The packaged verification run over the whole registry.
#[test]
fn criterion_7_full_suite() {
    let mut c = Criterion::new("7 (full theorem suite, 500 trials)");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_dslp"))
        .args([
            "verify", "--theorems", "all", "--trials", "500", "--seed", "0",
        ])
        .output()
        .unwrap();
    c.check(out.status.code() == Some(0), "verify exits 0");
    let text = String::from_utf8_lossy(&out.stdout);
    c.check(text.contains("result: PASS"), "summary line");
    c.check(
        start.elapsed().as_secs_f64() < 600.0,
        "runtime under 10 minutes",
    );
    c.finish();
}

/// Spectra are invariant under random invertible representative changes.
#[test]
fn criterion_8_representative_invariance() {
    let mut c = Criterion::new("8 (representative invariance)");
    let rng = &mut ChaCha8Rng::seed_from_u64(104);
    let mut random_t = |rng: &mut ChaCha8Rng| loop {
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
    };
    for trial in 0..200 {
        let n = 2 + trial % 9;
        let eq = random_eq(rng, n);
        let bc = random_bc(rng, &eq);
        let t = random_t(rng);
        let transformed = bc.representative().transformed(&t).unwrap();
        let alt = classify_bc(&transformed).unwrap();
        let a = solve_spectrum(&eq, &bc).unwrap().expanded();
        let b = solve_spectrum(&eq, &alt).unwrap().expanded();
        c.check(a.len() == b.len(), &format!("count, trial {trial}"));
        for (x, y) in a.iter().zip(&b) {
            c.check(
                (x - y).abs() <= 1e-8 * x.abs().max(1.0),
                &format!("value, trial {trial}"),
            );
        }
    }
    c.finish();
}

/// Phase conjugation leaves coupled spectra untouched.
#[test]
fn criterion_9_conjugate_symmetry() {
    let mut c = Criterion::new("9 (conjugate symmetry)");
    let rng = &mut ChaCha8Rng::seed_from_u64(105);
    for trial in 0..200 {
        let n = 2 + trial % 9;
        let eq = random_eq(rng, n);
        let k = random_unimodular(rng);
        let gamma = uniform(rng, 1e-3, PI - 1e-3);
        let a = solve_spectrum(&eq, &CanonicalBC::Coupled { gamma, k })
            .unwrap()
            .expanded();
        let b = solve_spectrum(&eq, &CanonicalBC::Coupled { gamma: -gamma, k })
            .unwrap()
            .expanded();
        c.check(a.len() == b.len(), &format!("count, trial {trial}"));
        for (x, y) in a.iter().zip(&b) {
            c.check(
                (x - y).abs() <= 1e-10 * x.abs().max(1.0),
                &format!("value, trial {trial}"),
            );
        }
    }
    c.finish();
}

/// Sweep integrity through the packaged command: monotone columns with the
/// count drop exactly at the critical-angle row, and the worked-example
/// sweep matching its closed forms at every grid point.
#[test]
fn criterion_10_sweep_integrity() {
    let mut c = Criterion::new("10 (sweep integrity)");
    let dir = std::env::temp_dir().join("dslp-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let eq_path = dir.join("harmonic4.json");
    std::fs::write(
        &eq_path,
        r#"{"N":4,"f":[1,1,1,1,1],"q":[0,0,0,0],"w":[1,1,1,1],
           "bc":{"type":"separated","alpha":0.0,"beta":3.141592653589793}}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dslp"))
        .args([
            "sweep",
            "--family",
            "alpha",
            "--file",
            eq_path.to_str().unwrap(),
            "--beta0",
            "1.5707963267948966",
            "--grid",
            "60",
        ])
        .output()
        .unwrap();
    c.check(out.status.code() == Some(0), "alpha sweep exits 0");
    let text = String::from_utf8_lossy(&out.stdout);
    let xi = 3.0 * PI / 4.0;
    let mut rows: Vec<(f64, Vec<Option<f64>>, usize)> = Vec::new();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let param: f64 = cells[0].parse().unwrap();
        let count: usize = cells[cells.len() - 1].parse().unwrap();
        let vals: Vec<Option<f64>> = cells[1..cells.len() - 1]
            .iter()
            .map(|s| s.parse().ok())
            .collect();
        rows.push((param, vals, count));
    }
    // count drop exactly at the row containing the critical angle
    for (param, _, count) in &rows {
        let expect = if (param - xi).abs() < 1e-9 { 3 } else { 4 };
        c.check(
            *count == expect,
            &format!("count at alpha={param}: {count} vs {expect}"),
        );
    }
    // per-column monotone non-increase on both sides
    for col in 0..4 {
        let mut prev: Option<f64> = None;
        for (param, vals, _) in &rows {
            if (param - xi).abs() < 1e-9 {
                prev = None; // the drop resets the comparison
                continue;
            }
            if *param > xi && prev.is_none() {
                prev = vals[col];
                continue;
            }
            if let (Some(p), Some(v)) = (prev, vals[col]) {
                c.check(
                    v <= p + 1e-9,
                    &format!("column {col} non-increasing at alpha={param}"),
                );
            }
            prev = vals[col];
        }
    }
    // worked-example sweep against the closed forms
    let out = Command::new(env!("CARGO_BIN_EXE_dslp"))
        .args([
            "sweep",
            "--family",
            "example-3.1-s",
            "--grid",
            "80",
            "--s-min",
            "-10",
            "--s-max",
            "10",
        ])
        .output()
        .unwrap();
    c.check(out.status.code() == Some(0), "example sweep exits 0");
    let text = String::from_utf8_lossy(&out.stdout);
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let s: f64 = cells[0].parse().unwrap();
        let l0: Option<f64> = cells[1].parse().ok();
        let l1: Option<f64> = cells[2].parse().ok();
        let hyp = 2.0 * (s - 2.0) / (s - 1.0);
        let want: Vec<f64> = if (s - 1.0).abs() < 1e-12 {
            vec![0.0]
        } else if s < 1.0 || s > 2.0 {
            vec![hyp.min(0.0), hyp.max(0.0)]
        } else {
            vec![hyp, 0.0]
        };
        let got: Vec<f64> = [l0, l1].into_iter().flatten().collect();
        c.check(got.len() == want.len(), &format!("count at s={s}"));
        for (a, b) in got.iter().zip(&want) {
            c.check(
                (a - b).abs() <= 1e-9,
                &format!("value at s={s}: {a} vs {b}"),
            );
        }
    }
    c.finish();
}
