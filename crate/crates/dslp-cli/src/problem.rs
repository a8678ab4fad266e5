//! JSON problem files: the equation data plus a boundary condition in
//! separated, coupled, or raw matrix form. Angles are radians; `gamma` is
//! normalized into `(-pi, pi]` on load.

use dslp_core::bc::{make_coupled, make_separated};
use dslp_core::mat2::{Mat2, C64};
use dslp_core::slp::classify_bc;
use dslp_core::{CanonicalBC, Equation, RawBC, Spectrum};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

#[derive(Deserialize)]
pub struct ProblemFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub f: Vec<f64>,
    pub q: Vec<f64>,
    pub w: Vec<f64>,
    pub bc: BcSpec,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BcSpec {
    Separated {
        alpha: f64,
        beta: f64,
    },
    Coupled {
        gamma: f64,
        #[serde(rename = "K")]
        k: [[f64; 2]; 2],
    },
    Raw {
        #[serde(rename = "A")]
        a: [[[f64; 2]; 2]; 2],
        #[serde(rename = "B")]
        b: [[[f64; 2]; 2]; 2],
    },
}

pub struct Problem {
    pub eq: Equation,
    pub bc: CanonicalBC,
}

fn wrap_gamma(gamma: f64) -> f64 {
    let t = (gamma + PI).rem_euclid(2.0 * PI);
    if t == 0.0 {
        PI
    } else {
        t - PI
    }
}

fn complex_mat(m: &[[[f64; 2]; 2]; 2]) -> Mat2 {
    Mat2::new([
        [
            C64::new(m[0][0][0], m[0][0][1]),
            C64::new(m[0][1][0], m[0][1][1]),
        ],
        [
            C64::new(m[1][0][0], m[1][0][1]),
            C64::new(m[1][1][0], m[1][1][1]),
        ],
    ])
}

pub fn load_problem(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: ProblemFile =
        serde_json::from_str(&text).map_err(|e| format!("invalid problem file: {e}"))?;
    let eq = Equation::new(file.n, file.f, file.q, file.w).map_err(|e| e.to_string())?;
    let bc = match file.bc {
        BcSpec::Separated { alpha, beta } => {
            make_separated(alpha, beta).map_err(|e| format!("bc: {e}"))?
        }
        BcSpec::Coupled { gamma, k } => {
            make_coupled(wrap_gamma(gamma), k).map_err(|e| format!("bc: {e}"))?
        }
        BcSpec::Raw { a, b } => {
            let raw = RawBC::new(complex_mat(&a), complex_mat(&b))
                .map_err(|e| format!("bc: {e}"))?;
            classify_bc(&raw).map_err(|e| format!("bc: {e}"))?
        }
    };
    Ok(Problem { eq, bc })
}

#[derive(Serialize)]
pub struct SolveOutput<'a> {
    pub k: usize,
    pub r: usize,
    pub bc: &'a CanonicalBC,
    pub eigenvalues: Vec<EigenOut>,
}

#[derive(Serialize)]
pub struct EigenOut {
    pub value: f64,
    pub multiplicity: usize,
}

impl<'a> SolveOutput<'a> {
    pub fn new(bc: &'a CanonicalBC, spectrum: &Spectrum) -> Self {
        Self {
            k: spectrum.k,
            r: spectrum.r,
            bc,
            eigenvalues: spectrum
                .eigenvalues
                .roots()
                .iter()
                .map(|&(value, multiplicity)| EigenOut {
                    value,
                    multiplicity,
                })
                .collect(),
        }
    }
}
