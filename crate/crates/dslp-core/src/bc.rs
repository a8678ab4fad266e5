//! Constructors for derived boundary-condition families: separated and
//! coupled canonical forms, natural loops with their separated limit
//! conditions, the four separated companions of a coupling matrix, and the
//! modified couplings that collapse the eigenvalue count by one.

use crate::mat2::{Mat2, C64};
use crate::slp::{chart_coords, classify_bc, BcError, CanonicalBC, Chart, ChartCoords, RawBC};
use serde::Serialize;
use std::f64::consts::PI;

/// Builds `S_{α,β}`; `α ∈ [0, π)`, `β ∈ (0, π]`.
pub fn make_separated(alpha: f64, beta: f64) -> Result<CanonicalBC, BcError> {
    if !(0.0..PI).contains(&alpha) {
        return Err(BcError::RangeError {
            what: format!("alpha = {alpha} outside [0, pi)"),
        });
    }
    if !(beta > 0.0 && beta <= PI) {
        return Err(BcError::RangeError {
            what: format!("beta = {beta} outside (0, pi]"),
        });
    }
    Ok(CanonicalBC::Separated { alpha, beta })
}

/// Builds `[e^{iγ}K | -I]`; `γ ∈ (-π, π]`, `det K = 1` within `1e-10`.
pub fn make_coupled(gamma: f64, k: [[f64; 2]; 2]) -> Result<CanonicalBC, BcError> {
    if !(gamma > -PI && gamma <= PI) {
        return Err(BcError::RangeError {
            what: format!("gamma = {gamma} outside (-pi, pi]"),
        });
    }
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    if (det - 1.0).abs() > 1e-10 {
        return Err(BcError::NotUnimodular { det });
    }
    Ok(CanonicalBC::Coupled { gamma, k })
}

/// Which of the two real chart coordinates a natural loop sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LoopCoordinate {
    /// `a12` (O13, O14) or `a11` (O23, O24).
    A,
    /// `b21` (O14, O24) or `b22` (O13, O23).
    B,
}

/// A one-parameter closed family of boundary conditions inside a chart,
/// closing through a separated limit condition as the sweep coordinate tends
/// to infinity on either side.
#[derive(Clone, Debug)]
pub struct NaturalLoop {
    pub chart: Chart,
    pub varying: LoopCoordinate,
    /// Value of the real coordinate held fixed.
    pub fixed_value: f64,
    /// The complex coordinate, always held fixed.
    pub z: C64,
    pub limit_bc: CanonicalBC,
}

impl NaturalLoop {
    /// Builds the loop in `chart` with the given fixed data, classifying its
    /// limit condition.
    pub fn new(
        chart: Chart,
        varying: LoopCoordinate,
        fixed_value: f64,
        z: C64,
    ) -> Result<Self, BcError> {
        let limit_bc = classify_bc(&limit_matrix(chart, varying, fixed_value))?;
        Ok(Self {
            chart,
            varying,
            fixed_value,
            z,
            limit_bc,
        })
    }

    /// Chart coordinates at sweep value `s`.
    pub fn coords_at(&self, s: f64) -> ChartCoords {
        let (coord_a, coord_b) = match self.varying {
            LoopCoordinate::A => (s, self.fixed_value),
            LoopCoordinate::B => (self.fixed_value, s),
        };
        ChartCoords {
            chart: self.chart,
            coord_a,
            coord_b,
            z: self.z,
        }
    }

    /// Canonical condition at sweep value `s`.
    pub fn bc_at(&self, s: f64) -> Result<CanonicalBC, BcError> {
        classify_bc(&self.coords_at(s).reconstruct())
    }

    /// Canonical condition at the tan-compactified parameter
    /// `u ∈ [-π/2, π/2]`; the endpoints map to the limit condition.
    pub fn bc_at_compactified(&self, u: f64) -> Result<CanonicalBC, BcError> {
        if (u.abs() - PI / 2.0).abs() <= 1e-12 {
            Ok(self.limit_bc)
        } else {
            self.bc_at(u.tan())
        }
    }
}

/// Limit condition of the loop in `chart` sweeping `varying`, with the other
/// real coordinate fixed at `fixed`.
fn limit_matrix(chart: Chart, varying: LoopCoordinate, fixed: f64) -> RawBC {
    let rows: ([f64; 4], [f64; 4]) = match (chart, varying) {
        (Chart::O14, LoopCoordinate::A) => ([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, fixed, 1.0]),
        (Chart::O14, LoopCoordinate::B) => ([1.0, fixed, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]),
        (Chart::O24, LoopCoordinate::A) => ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, fixed, 1.0]),
        (Chart::O24, LoopCoordinate::B) => ([fixed, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]),
        (Chart::O23, LoopCoordinate::A) => ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, -1.0, fixed]),
        (Chart::O23, LoopCoordinate::B) => ([fixed, -1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]),
        (Chart::O13, LoopCoordinate::A) => ([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, -1.0, fixed]),
        (Chart::O13, LoopCoordinate::B) => ([1.0, fixed, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]),
    };
    let (r0, r1) = rows;
    let a = Mat2::from_real([[r0[0], r0[1]], [r1[0], r1[1]]]);
    let b = Mat2::from_real([[r0[2], r0[3]], [r1[2], r1[3]]]);
    RawBC::new(a, b).expect("limit matrices are separated self-adjoint pairs")
}

/// The two natural loops through `bc` in every chart containing it. Limit
/// conditions are always separated.
pub fn natural_loops(bc: &CanonicalBC) -> Result<Vec<NaturalLoop>, BcError> {
    let charts = chart_coords(bc);
    if charts.is_empty() {
        return Err(BcError::ChartMembershipFailed);
    }
    let mut out = Vec::with_capacity(2 * charts.len());
    for c in charts {
        for varying in [LoopCoordinate::A, LoopCoordinate::B] {
            let fixed_value = match varying {
                LoopCoordinate::A => c.coord_b,
                LoopCoordinate::B => c.coord_a,
            };
            let limit_bc = classify_bc(&limit_matrix(c.chart, varying, fixed_value))?;
            out.push(NaturalLoop {
                chart: c.chart,
                varying,
                fixed_value,
                z: c.z,
                limit_bc,
            });
        }
    }
    Ok(out)
}

/// The four separated companions of a coupling matrix `K`, classified to
/// canonical form.
#[derive(Clone, Copy, Debug)]
pub struct SeparatedCompanions {
    pub t_k: CanonicalBC,
    pub u_k: CanonicalBC,
    pub s_k: CanonicalBC,
    pub v_k: CanonicalBC,
}

pub fn derived_separated_bcs(k: [[f64; 2]; 2]) -> Result<SeparatedCompanions, BcError> {
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    if (det - 1.0).abs() > 1e-10 {
        return Err(BcError::NotUnimodular { det });
    }
    let build = |a_row: [f64; 2], b_row: [f64; 2]| -> Result<CanonicalBC, BcError> {
        let a = Mat2::from_real([[a_row[0], a_row[1]], [0.0, 0.0]]);
        let b = Mat2::from_real([[0.0, 0.0], [b_row[0], b_row[1]]]);
        classify_bc(&RawBC::new(a, b)?)
    };
    Ok(SeparatedCompanions {
        t_k: build([0.0, 1.0], [-k[1][0], k[0][0]])?,
        u_k: build([k[0][0], k[0][1]], [1.0, 0.0])?,
        s_k: build([1.0, 0.0], [-k[1][1], k[0][1]])?,
        v_k: build([k[1][0], k[1][1]], [0.0, 1.0])?,
    })
}

/// Modified couplings: `K_hat` exists iff `k11 != 0`, `K_tilde` iff
/// `k12 != 0`; both are unimodular and satisfy `k11 - f0 k12 = 0`, which
/// drops the coupled eigenvalue count to `N - 1`. When `k11 - f0 k12 = 0`
/// already, `K = K_hat = K_tilde`.
pub fn modified_couplings(
    k: [[f64; 2]; 2],
    f0: f64,
) -> (Option<[[f64; 2]; 2]>, Option<[[f64; 2]; 2]>) {
    assert!(f0 != 0.0, "f0 must be nonzero");
    let k_hat = if k[0][0] != 0.0 {
        Some([
            [k[0][0], k[0][0] / f0],
            [k[1][0], (f0 + k[0][0] * k[1][0]) / (k[0][0] * f0)],
        ])
    } else {
        None
    };
    let k_tilde = if k[0][1] != 0.0 {
        Some([
            [f0 * k[0][1], k[0][1]],
            [(f0 * k[0][1] * k[1][1] - 1.0) / k[0][1], k[1][1]],
        ])
    } else {
        None
    };
    (k_hat, k_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slp::eigenvalue_count;
    use crate::spectrum::solve_spectrum;
    use crate::Equation;

    fn harmonic(n: usize) -> Equation {
        Equation::new(n, vec![1.0; n + 1], vec![0.0; n], vec![1.0; n]).unwrap()
    }

    #[test]
    fn make_separated_examples() {
        let d = make_separated(0.0, PI).unwrap();
        assert_eq!(
            d,
            CanonicalBC::Separated {
                alpha: 0.0,
                beta: PI
            }
        );
        assert!(make_separated(PI / 2.0, PI / 2.0).is_ok());
        assert!(matches!(
            make_separated(PI, 1.0),
            Err(BcError::RangeError { .. })
        ));
        assert!(matches!(
            make_separated(0.0, 0.0),
            Err(BcError::RangeError { .. })
        ));
    }

    #[test]
    fn make_coupled_examples() {
        let eye = [[1.0, 0.0], [0.0, 1.0]];
        assert!(make_coupled(0.0, eye).is_ok());
        assert!(make_coupled(PI, eye).is_ok());
        assert!(matches!(
            make_coupled(0.0, [[1.0, 2.0], [0.0, 0.5]]),
            Err(BcError::NotUnimodular { .. })
        ));
        // [e^{iπ} I | -I] has the same spectrum as [-I | -I] written with γ=0
        let eq = harmonic(2);
        let a = solve_spectrum(&eq, &make_coupled(PI, eye).unwrap()).unwrap();
        let b = solve_spectrum(
            &eq,
            &make_coupled(0.0, [[-1.0, 0.0], [0.0, -1.0]]).unwrap(),
        )
        .unwrap();
        for (x, y) in a.expanded().iter().zip(b.expanded()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn companions_of_identity() {
        let c = derived_separated_bcs([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        // S_I is the condition pinning both endpoint values to zero
        assert_eq!(
            c.s_k,
            CanonicalBC::Separated {
                alpha: 0.0,
                beta: PI
            }
        );
        // T_I pins both quasi-derivatives
        match c.t_k {
            CanonicalBC::Separated { alpha, beta } => {
                assert!((alpha - PI / 2.0).abs() < 1e-12);
                assert!((beta - PI / 2.0).abs() < 1e-12);
            }
            _ => panic!(),
        }
        // S_K = S_{-K}
        let m = derived_separated_bcs([[-1.0, 0.0], [0.0, -1.0]]).unwrap();
        assert_eq!(c.s_k, m.s_k);
    }

    #[test]
    fn modified_coupling_examples() {
        let (hat, tilde) = modified_couplings([[1.0, 0.0], [0.0, 1.0]], 1.0);
        assert_eq!(hat, Some([[1.0, 1.0], [0.0, 1.0]]));
        assert_eq!(tilde, None);

        // fixed point when k11 - f0 k12 = 0
        let k = [[1.0, 1.0], [0.0, 1.0]];
        let (hat, tilde) = modified_couplings(k, 1.0);
        assert_eq!(hat, Some(k));
        assert_eq!(tilde, Some(k));

        let (hat, _) = modified_couplings([[2.0, 1.0], [1.0, 1.0]], 1.0);
        let h = hat.unwrap();
        assert_eq!(h, [[2.0, 2.0], [1.0, 1.5]]);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        assert!((det - 1.0).abs() < 1e-10);
    }

    #[test]
    fn modified_couplings_drop_the_count() {
        let eq = Equation::new(
            3,
            vec![1.5, -0.7, 2.0, 1.0],
            vec![0.1, -0.3, 0.4],
            vec![1.0, 0.5, 2.0],
        )
        .unwrap();
        let k = [[2.0, 1.0], [1.0, 1.0]];
        let (hat, tilde) = modified_couplings(k, eq.f0());
        for m in [hat.unwrap(), tilde.unwrap()] {
            assert!((m[0][0] - eq.f0() * m[0][1]).abs() < 1e-12);
            let bc = make_coupled(0.7, m).unwrap();
            let (r, k) = eigenvalue_count(&eq, &bc);
            assert_eq!(r, 1);
            assert_eq!(k, eq.n() - 1);
        }
    }

    #[test]
    fn loops_of_the_periodic_condition() {
        let bc = make_coupled(0.0, [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let loops = natural_loops(&bc).unwrap();
        let o14: Vec<_> = loops.iter().filter(|l| l.chart == Chart::O14).collect();
        assert_eq!(o14.len(), 2);
        for l in &o14 {
            assert!((l.z - C64::new(-1.0, 0.0)).norm() < 1e-12);
            assert!(l.limit_bc.is_separated());
        }
        let s1 = o14
            .iter()
            .find(|l| l.varying == LoopCoordinate::A)
            .unwrap()
            .limit_bc;
        match s1 {
            CanonicalBC::Separated { alpha, beta } => {
                assert!((alpha - PI / 2.0).abs() < 1e-12);
                assert!((beta - PI / 2.0).abs() < 1e-12);
            }
            _ => panic!(),
        }
        let s2 = o14
            .iter()
            .find(|l| l.varying == LoopCoordinate::B)
            .unwrap()
            .limit_bc;
        assert_eq!(
            s2,
            CanonicalBC::Separated {
                alpha: 0.0,
                beta: PI
            }
        );
    }

    #[test]
    fn separated_condition_with_zero_z_has_loops() {
        let bc = make_separated(0.3, 2.0).unwrap();
        let loops = natural_loops(&bc).unwrap();
        let o23 = loops.iter().find(|l| l.chart == Chart::O23).unwrap();
        assert!(o23.z.norm() < 1e-12);
        // finite sweep values stay classifiable
        for s in [-3.0, 0.0, 4.5] {
            o23.bc_at(s).unwrap();
        }
        assert_eq!(o23.bc_at_compactified(PI / 2.0).unwrap(), o23.limit_bc);
    }

    #[test]
    fn all_limit_bcs_are_separated() {
        let bcs = [
            make_coupled(0.3, [[0.8, 0.5], [-0.4, 1.0]]).unwrap(),
            make_coupled(-1.2, [[0.0, 2.0], [-0.5, 0.7]]).unwrap(),
            make_separated(1.1, 0.6).unwrap(),
        ];
        for bc in bcs {
            for l in natural_loops(&bc).unwrap() {
                assert!(l.limit_bc.is_separated(), "{l:?}");
            }
        }
    }
}
