//! Parameter sweeps emitting CSV eigenvalue curves.
//!
//! Header: `param,lambda_0,...,lambda_{kmax-1},count`. Cells are blank where
//! the eigenvalue index is at or above the local count, so count drops show
//! up as holes rather than sentinel numbers. Loop sweeps run over the
//! tan-compactified parameter `u ∈ [-pi/2, pi/2]` and include the limit
//! condition at the endpoints. The alpha sweep inserts the critical angle
//! into the grid so the count drop is visible in the output.

use crate::problem::load_problem;
use crate::{EXIT_INVALID_INPUT, EXIT_NUMERICAL, EXIT_OK};
use clap::Args;
use dslp_core::bc::{LoopCoordinate, NaturalLoop};
use dslp_core::mat2::C64;
use dslp_core::slp::{classify_bc, Chart};
use dslp_core::spectrum::solve_spectrum;
use dslp_core::{CanonicalBC, Equation};
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Args)]
pub struct SweepArgs {
    /// alpha | beta | gamma | loop-s | loop-t | example-3.1-s
    #[arg(long)]
    pub family: String,
    /// Problem file providing the equation (and the coupling for gamma).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Fixed beta for the alpha family.
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    /// Fixed alpha for the beta family.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha0: Option<f64>,
    /// Chart for loop sweeps: O13 | O14 | O23 | O24.
    #[arg(long)]
    pub chart: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_im: Option<f64>,
    /// The non-varying real chart coordinate for loop sweeps.
    #[arg(long, allow_negative_numbers = true)]
    pub fixed: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub s_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s_max: Option<f64>,
}

struct Row {
    param: f64,
    values: Vec<f64>,
}

fn solve_row(eq: &Equation, bc: &CanonicalBC, param: f64) -> Result<Row, String> {
    let sp = solve_spectrum(eq, bc).map_err(|e| format!("solve failed at {param}: {e}"))?;
    Ok(Row {
        param,
        values: sp.expanded(),
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> u8 {
    match build_rows(args) {
        Ok(rows) => {
            let csv = render_csv(&rows);
            match &args.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, csv) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_INVALID_INPUT;
                    }
                }
                None => print!("{csv}"),
            }
            EXIT_OK
        }
        Err(SweepError::Flags(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID_INPUT
        }
        Err(SweepError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            EXIT_NUMERICAL
        }
    }
}

enum SweepError {
    Flags(String),
    Numerical(String),
}

fn need_file(args: &SweepArgs) -> Result<crate::problem::Problem, SweepError> {
    let path = args
        .file
        .as_ref()
        .ok_or_else(|| SweepError::Flags("this family needs --file".into()))?;
    load_problem(path).map_err(SweepError::Flags)
}

fn build_rows(args: &SweepArgs) -> Result<Vec<Row>, SweepError> {
    if args.grid < 2 {
        return Err(SweepError::Flags("--grid must be at least 2".into()));
    }
    let n = args.grid;
    match args.family.as_str() {
        "alpha" => {
            let problem = need_file(args)?;
            let beta0 = args
                .beta0
                .ok_or_else(|| SweepError::Flags("alpha sweep needs --beta0".into()))?;
            if !(beta0 > 0.0 && beta0 <= PI) {
                return Err(SweepError::Flags("beta0 outside (0, pi]".into()));
            }
            let xi = problem.eq.xi();
            let mut alphas: Vec<f64> = (0..n).map(|i| i as f64 * PI / n as f64).collect();
            if !alphas.iter().any(|a| (a - xi).abs() < 1e-12) {
                alphas.push(xi);
            }
            alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
            alphas
                .into_iter()
                .map(|alpha| {
                    solve_row(
                        &problem.eq,
                        &CanonicalBC::Separated { alpha, beta: beta0 },
                        alpha,
                    )
                    .map_err(SweepError::Numerical)
                })
                .collect()
        }
        "beta" => {
            let problem = need_file(args)?;
            let alpha0 = args
                .alpha0
                .ok_or_else(|| SweepError::Flags("beta sweep needs --alpha0".into()))?;
            if !(0.0..PI).contains(&alpha0) {
                return Err(SweepError::Flags("alpha0 outside [0, pi)".into()));
            }
            (1..=n)
                .map(|i| {
                    let beta = i as f64 * PI / n as f64;
                    solve_row(
                        &problem.eq,
                        &CanonicalBC::Separated {
                            alpha: alpha0,
                            beta,
                        },
                        beta,
                    )
                    .map_err(SweepError::Numerical)
                })
                .collect()
        }
        "gamma" => {
            let problem = need_file(args)?;
            let CanonicalBC::Coupled { k, .. } = problem.bc else {
                return Err(SweepError::Flags(
                    "gamma sweep needs a coupled bc in the problem file".into(),
                ));
            };
            (1..=n)
                .map(|i| {
                    let gamma = -PI + i as f64 * 2.0 * PI / n as f64;
                    solve_row(&problem.eq, &CanonicalBC::Coupled { gamma, k }, gamma)
                        .map_err(SweepError::Numerical)
                })
                .collect()
        }
        "loop-s" | "loop-t" => {
            let problem = need_file(args)?;
            let chart = args
                .chart
                .as_deref()
                .and_then(Chart::parse)
                .ok_or_else(|| SweepError::Flags("loop sweeps need --chart O13|O14|O23|O24".into()))?;
            let fixed = args
                .fixed
                .ok_or_else(|| SweepError::Flags("loop sweeps need --fixed".into()))?;
            let z = C64::new(args.z_re.unwrap_or(0.0), args.z_im.unwrap_or(0.0));
            let varying = if args.family == "loop-s" {
                LoopCoordinate::A
            } else {
                LoopCoordinate::B
            };
            let natural = NaturalLoop::new(chart, varying, fixed, z)
                .map_err(|e| SweepError::Flags(format!("loop construction failed: {e}")))?;
            (0..=n)
                .map(|i| {
                    let u = -PI / 2.0 + i as f64 * PI / n as f64;
                    let bc = natural
                        .bc_at_compactified(u)
                        .map_err(|e| SweepError::Numerical(format!("classify failed at u={u}: {e}")))?;
                    solve_row(&problem.eq, &bc, u).map_err(SweepError::Numerical)
                })
                .collect()
        }
        "example-3.1-s" => {
            let lo = args.s_min.unwrap_or(-10.0);
            let hi = args.s_max.unwrap_or(10.0);
            if !(lo < hi) {
                return Err(SweepError::Flags("need s_min < s_max".into()));
            }
            let eq = Equation::new(2, vec![1.0; 3], vec![0.0; 2], vec![1.0; 2]).unwrap();
            let mut ss: Vec<f64> = (0..=n).map(|i| lo + i as f64 * (hi - lo) / n as f64).collect();
            if lo < 1.0 && hi > 1.0 && !ss.iter().any(|s| (s - 1.0).abs() < 1e-12) {
                ss.push(1.0);
            }
            ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ss.into_iter()
                .map(|s| {
                    let bc = classify_bc(&example_raw(s))
                        .map_err(|e| SweepError::Numerical(format!("classify failed at s={s}: {e}")))?;
                    solve_row(&eq, &bc, s).map_err(SweepError::Numerical)
                })
                .collect()
        }
        other => Err(SweepError::Flags(format!("unknown family {other:?}"))),
    }
}

pub fn example_raw(s: f64) -> dslp_core::RawBC {
    use dslp_core::mat2::Mat2;
    let a = Mat2::from_real([[1.0, s], [0.0, -1.0]]);
    let b = Mat2::from_real([[-1.0, 0.0], [0.0, 1.0]]);
    dslp_core::RawBC::new(a, b).expect("the sheared family is self-adjoint")
}

fn render_csv(rows: &[Row]) -> String {
    let kmax = rows.iter().map(|r| r.values.len()).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str("param");
    for i in 0..kmax {
        out.push_str(&format!(",lambda_{i}"));
    }
    out.push_str(",count\n");
    for row in rows {
        out.push_str(&format!("{}", row.param));
        for i in 0..kmax {
            out.push(',');
            if let Some(v) = row.values.get(i) {
                out.push_str(&format!("{v}"));
            }
        }
        out.push_str(&format!(",{}\n", row.values.len()));
    }
    out
}
