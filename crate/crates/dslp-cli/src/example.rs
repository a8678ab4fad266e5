//! Built-in worked example: the sheared O14 family on the two-point unit
//! ladder, reproduced against hard-coded reference values.
//!
//! For `f = q-shift-free unit ladder, N = 2` and the raw pair
//! `[1, s, -1, 0; 0, -1, 0, 1]`, the characteristic polynomial of the raw
//! representative is `-(s-1)λ² + 2(s-2)λ`, the eigenvalues follow piecewise
//! closed forms in `s`, and the limit condition of the `s`-sweep has spectrum
//! `{0, 2}`. The command recomputes all of it and compares.

use crate::sweep::example_raw;
use crate::{EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAIL};
use dslp_core::slp::classify_bc;
use dslp_core::spectrum::{characteristic_polynomial_raw, solve_spectrum};
use dslp_core::{CanonicalBC, Equation};
use std::f64::consts::PI;

const COEFF_TOL: f64 = 1e-12;
const EV_TOL: f64 = 1e-10;

pub fn cmd_example(id: &str, perturb: f64) -> u8 {
    if id != "3.1" {
        eprintln!("error: unknown example id {id:?} (known: 3.1)");
        return EXIT_USAGE;
    }
    let eq = Equation::new(2, vec![1.0; 3], vec![0.0; 2], vec![1.0; 2]).unwrap();
    let mut pass = true;

    println!("characteristic polynomial of the raw representative, s in {{-1, 0, 1, 2, 3}}:");
    for s in [-1.0, 0.0, 1.0, 2.0, 3.0] {
        let gamma = characteristic_polynomial_raw(&eq, &example_raw(s)).unwrap();
        let got = [
            gamma.coeff(0),
            gamma.coeff(1) + perturb,
            gamma.coeff(2),
        ];
        let want = [0.0, 2.0 * (s - 2.0), -(s - 1.0)];
        let ok = got
            .iter()
            .zip(&want)
            .all(|(g, w)| (g - w).abs() <= COEFF_TOL);
        pass &= ok;
        println!(
            "  s = {s:>4}: coeffs [{}, {}, {}]  expected [{}, {}, {}]  {}",
            got[0], got[1], got[2], want[0], want[1], want[2], verdict(ok)
        );
    }

    println!("eigenvalues against the piecewise closed forms:");
    for s in [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        let bc = classify_bc(&example_raw(s)).unwrap();
        let sp = solve_spectrum(&eq, &bc).unwrap();
        let ev = sp.expanded();
        let hyperbola = 2.0 * (s - 2.0) / (s - 1.0);
        let want: Vec<f64> = if (s - 1.0).abs() < 1e-12 {
            vec![0.0]
        } else if s < 1.0 {
            vec![0.0, hyperbola]
        } else if s <= 2.0 {
            vec![hyperbola, 0.0]
        } else {
            vec![0.0, hyperbola]
        };
        let ok = ev.len() == want.len()
            && ev
                .iter()
                .zip(&want)
                .all(|(g, w)| (g - w).abs() <= EV_TOL);
        pass &= ok;
        println!("  s = {s:>4}: eigenvalues {ev:?}  expected {want:?}  {}", verdict(ok));
    }

    // The s -> +-inf limit of the family.
    let limit = CanonicalBC::Separated {
        alpha: PI / 2.0,
        beta: PI / 2.0,
    };
    let sp = solve_spectrum(&eq, &limit).unwrap();
    let ev = sp.expanded();
    let ok = ev.len() == 2 && (ev[0] - 0.0).abs() <= EV_TOL && (ev[1] - 2.0).abs() <= EV_TOL;
    pass &= ok;
    println!("limit condition spectrum {ev:?}  expected [0.0, 2.0]  {}", verdict(ok));

    // The five ordering cases between the family and its limit.
    println!("ordering cases against the limit spectrum:");
    let lim = ev;
    for (s, case) in [
        (-1.0, Case::Below),
        (0.0, Case::Below),
        (1.0, Case::AtOne),
        (1.5, Case::Between),
        (2.0, Case::AtTwo),
        (3.0, Case::Above),
    ] {
        let bc = classify_bc(&example_raw(s)).unwrap();
        let a = solve_spectrum(&eq, &bc).unwrap().expanded();
        let ok = case.check(&a, &lim);
        pass &= ok;
        println!("  s = {s:>4}: {}  {}", case.describe(), verdict(ok));
    }

    println!("example 3.1: {}", verdict(pass));
    if pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Clone, Copy)]
enum Case {
    /// s < 1: lim0 = a0 < lim1 < a1
    Below,
    /// s = 1: lim0 = a0 < lim1, single eigenvalue
    AtOne,
    /// 1 < s < 2: a0 < lim0 = a1 < lim1
    Between,
    /// s = 2: a0 = lim0 = a1 < lim1
    AtTwo,
    /// s > 2: a0 = lim0 < a1 < lim1
    Above,
}

impl Case {
    fn describe(&self) -> &'static str {
        match self {
            Case::Below => "lim0 = a0 < lim1 < a1",
            Case::AtOne => "lim0 = a0 < lim1",
            Case::Between => "a0 < lim0 = a1 < lim1",
            Case::AtTwo => "a0 = lim0 = a1 < lim1",
            Case::Above => "a0 = lim0 < a1 < lim1",
        }
    }

    fn check(&self, a: &[f64], lim: &[f64]) -> bool {
        let eqv = |x: f64, y: f64| (x - y).abs() <= EV_TOL;
        let ltv = |x: f64, y: f64| y - x > EV_TOL;
        match self {
            Case::Below => {
                a.len() == 2
                    && eqv(lim[0], a[0])
                    && ltv(a[0], lim[1])
                    && ltv(lim[1], a[1])
            }
            Case::AtOne => a.len() == 1 && eqv(lim[0], a[0]) && ltv(a[0], lim[1]),
            Case::Between => {
                a.len() == 2
                    && ltv(a[0], lim[0])
                    && eqv(lim[0], a[1])
                    && ltv(a[1], lim[1])
            }
            Case::AtTwo => {
                a.len() == 2
                    && eqv(a[0], lim[0])
                    && eqv(lim[0], a[1])
                    && ltv(a[1], lim[1])
            }
            Case::Above => {
                a.len() == 2
                    && eqv(a[0], lim[0])
                    && ltv(lim[0], a[1])
                    && ltv(a[1], lim[1])
            }
        }
    }
}
