//! Problem data model: equations, boundary conditions, validation,
//! canonical forms, chart membership and the eigenvalue-count formula.
//!
//! A problem couples the three-term difference equation
//! `-∇(f_n Δy_n) + q_n y_n = λ w_n y_n` on `n ∈ [1, N]` with a two-point
//! boundary condition `A (y_0, f_0Δy_0)ᵀ + B (y_N, f_NΔy_N)ᵀ = 0` where the
//! pair `(A, B)` has full row rank and satisfies `A J A* = B J B*`. Such
//! pairs split into two canonical families: separated conditions
//! `S_{α,β}` with `α ∈ [0, π)`, `β ∈ (0, π]`, and coupled conditions
//! `[e^{iγ}K | -I]` with `γ ∈ (-π, π]` and `K` real with unit determinant.

use crate::mat2::{j_form, rank_2x4, Mat2, C64};
use serde::Serialize;
use thiserror::Error;

/// Relative tolerance for numerical rank decisions (singular values below
/// `RANK_TOL_REL * scale` count as zero).
pub const RANK_TOL_REL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlpError {
    #[error("coefficient f[{index}] is zero")]
    ZeroCoefficient { index: usize },
    #[error("weight w[{index}] = {value} is not positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("{field} has length {got}, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("N = {n} is too small, need N >= 2")]
    NTooSmall { n: usize },
    #[error("entries must be finite")]
    NonFinite,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BcError {
    #[error("boundary condition is not self-adjoint")]
    NotSelfAdjoint,
    #[error("boundary condition could not be classified (numerically borderline rank)")]
    UnclassifiableBC,
    #[error("coupling matrix has determinant {det}, expected 1")]
    NotUnimodular { det: f64 },
    #[error("parameter out of range: {what}")]
    RangeError { what: String },
    #[error("boundary condition lies in no coordinate chart")]
    ChartMembershipFailed,
}

/// The difference equation data `(1/f, q, w)`: `f` has entries `f_0..f_N`
/// (all nonzero), `q` and `w` have entries indexed `1..N` with `w > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equation {
    n: usize,
    f: Vec<f64>,
    q: Vec<f64>,
    w: Vec<f64>,
}

impl Equation {
    /// Validates and builds an equation; `n >= 2`, `f.len() == n + 1`,
    /// `q.len() == w.len() == n`, `f` nonzero everywhere, `w` positive.
    pub fn new(n: usize, f: Vec<f64>, q: Vec<f64>, w: Vec<f64>) -> Result<Self, SlpError> {
        if n < 2 {
            return Err(SlpError::NTooSmall { n });
        }
        if f.len() != n + 1 {
            return Err(SlpError::LengthMismatch {
                field: "f",
                expected: n + 1,
                got: f.len(),
            });
        }
        if q.len() != n {
            return Err(SlpError::LengthMismatch {
                field: "q",
                expected: n,
                got: q.len(),
            });
        }
        if w.len() != n {
            return Err(SlpError::LengthMismatch {
                field: "w",
                expected: n,
                got: w.len(),
            });
        }
        if f.iter().chain(&q).chain(&w).any(|v| !v.is_finite()) {
            return Err(SlpError::NonFinite);
        }
        if let Some(i) = f.iter().position(|&v| v == 0.0) {
            return Err(SlpError::ZeroCoefficient { index: i });
        }
        for (i, &v) in w.iter().enumerate() {
            if v <= 0.0 {
                return Err(SlpError::NonPositiveWeight {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(Self { n, f, q, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// `q_n` for `n = 1..N`, stored at index `n - 1`.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn f0(&self) -> f64 {
        self.f[0]
    }

    /// The critical angle at which the separated-condition eigenvalue count
    /// drops: `arctan(-1/f_0)`, shifted by `π` when `f_0 > 0` so the result
    /// lies in `(0, π)`.
    pub fn xi(&self) -> f64 {
        xi_of(self.f0())
    }

    /// Same equation with the weight vector replaced.
    pub fn with_weights(&self, w: Vec<f64>) -> Result<Self, SlpError> {
        Self::new(self.n, self.f.clone(), self.q.clone(), w)
    }
}

/// See [`Equation::xi`].
pub fn xi_of(f0: f64) -> f64 {
    debug_assert!(f0 != 0.0);
    if f0 > 0.0 {
        (-1.0 / f0).atan() + std::f64::consts::PI
    } else {
        (-1.0 / f0).atan()
    }
}

/// A boundary condition given by an arbitrary matrix representative
/// `[A | B]`: full row rank and `A J A* = B J B*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawBC {
    a: Mat2,
    b: Mat2,
}

/// Scales each row of the pair to unit max entry; a diagonal representative
/// change, so ranks, the quotient `-B^{-1}A` and the solution set are
/// untouched while rank decisions become scale-aware.
fn row_normalized(a: &Mat2, b: &Mat2) -> (Mat2, Mat2) {
    let mut an = *a;
    let mut bn = *b;
    for r in 0..2 {
        let mut m = 0.0f64;
        for c in 0..2 {
            m = m.max(an.e[r][c].norm()).max(bn.e[r][c].norm());
        }
        if m > 0.0 {
            for c in 0..2 {
                an.e[r][c] /= m;
                bn.e[r][c] /= m;
            }
        }
    }
    (an, bn)
}

impl RawBC {
    pub fn new(a: Mat2, b: Mat2) -> Result<Self, BcError> {
        let scale = a.max_norm().max(b.max_norm());
        if scale == 0.0 || !scale.is_finite() {
            return Err(BcError::NotSelfAdjoint);
        }
        let (an, bn) = row_normalized(&a, &b);
        if rank_2x4(&an, &bn, RANK_TOL_REL) != 2 {
            return Err(BcError::NotSelfAdjoint);
        }
        let j = j_form();
        let lhs = an.mul(&j).mul(&an.adjoint());
        let rhs = bn.mul(&j).mul(&bn.adjoint());
        let mut diff = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                diff = diff.max((lhs.e[r][c] - rhs.e[r][c]).norm());
            }
        }
        if diff > 1e-8 {
            return Err(BcError::NotSelfAdjoint);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &Mat2 {
        &self.a
    }

    pub fn b(&self) -> &Mat2 {
        &self.b
    }

    /// Left-multiplies both blocks by `t`, yielding an equivalent
    /// representative of the same boundary condition.
    pub fn transformed(&self, t: &Mat2) -> Result<Self, BcError> {
        Self::new(t.mul(&self.a), t.mul(&self.b))
    }
}

/// Canonical self-adjoint boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CanonicalBC {
    /// `S_{α,β}` with rows `(cos α, -sin α | 0, 0)` and
    /// `(0, 0 | cos β, -sin β)`; `α ∈ [0, π)`, `β ∈ (0, π]`.
    Separated { alpha: f64, beta: f64 },
    /// `[e^{iγ}K | -I]` with `γ ∈ (-π, π]` and `det K = 1`.
    Coupled { gamma: f64, k: [[f64; 2]; 2] },
}

impl CanonicalBC {
    /// A matrix representative of this condition.
    pub fn representative(&self) -> RawBC {
        match *self {
            CanonicalBC::Separated { alpha, beta } => {
                let a = Mat2::from_real([[alpha.cos(), -alpha.sin()], [0.0, 0.0]]);
                let b = Mat2::from_real([[0.0, 0.0], [beta.cos(), -beta.sin()]]);
                RawBC { a, b }
            }
            CanonicalBC::Coupled { gamma, k } => {
                let phase = C64::new(0.0, gamma).exp();
                let a = Mat2::from_real(k).scale(phase);
                let b = Mat2::from_real([[-1.0, 0.0], [0.0, -1.0]]);
                RawBC { a, b }
            }
        }
    }

    pub fn is_separated(&self) -> bool {
        matches!(self, CanonicalBC::Separated { .. })
    }
}

/// Reduces a raw self-adjoint pair to its canonical form.
///
/// Rank-1 blocks yield a separated condition with `α` and `β` read off the
/// row directions. Invertible blocks yield `C = -B⁻¹A`; `γ` is the phase of
/// the largest-modulus entry of `C` (first in row-major order on ties) and
/// `K = e^{-iγ} C`, which is real with unit determinant for genuine
/// self-adjoint input. Borderline ranks are rejected.
pub fn classify_bc(raw: &RawBC) -> Result<CanonicalBC, BcError> {
    let (an, bn) = row_normalized(&raw.a, &raw.b);
    let ra = an.rank(RANK_TOL_REL * an.max_norm().max(1e-300));
    let rb = bn.rank(RANK_TOL_REL * bn.max_norm().max(1e-300));
    match (ra, rb) {
        (1, 1) => {
            let alpha = row_angle(&an, AngleRange::CoZero)?;
            let beta = row_angle(&bn, AngleRange::CoPi)?;
            Ok(CanonicalBC::Separated { alpha, beta })
        }
        (2, 2) => {
            let b_inv = bn.inverse().ok_or(BcError::UnclassifiableBC)?;
            let c = b_inv.mul(&an).scale(C64::new(-1.0, 0.0));
            let mut best = c.e[0][0];
            for r in 0..2 {
                for col in 0..2 {
                    if c.e[r][col].norm() > best.norm() {
                        best = c.e[r][col];
                    }
                }
            }
            let mut gamma = best.arg();
            if gamma <= -std::f64::consts::PI {
                gamma = std::f64::consts::PI;
            }
            let k_c = c.scale(C64::new(0.0, -gamma).exp());
            let cscale = c.max_norm();
            if !k_c.is_real(1e-8 * cscale.max(1.0)) {
                return Err(BcError::UnclassifiableBC);
            }
            let k = k_c.real_part();
            let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
            if (det - 1.0).abs() > 1e-8 * cscale.max(1.0).powi(2) {
                return Err(BcError::UnclassifiableBC);
            }
            Ok(CanonicalBC::Coupled { gamma, k })
        }
        _ => Err(BcError::UnclassifiableBC),
    }
}

enum AngleRange {
    /// `[0, π)`
    CoZero,
    /// `(0, π]`
    CoPi,
}

/// Angle `θ` with the rank-1 block's row space spanned by
/// `(cos θ, -sin θ)`, mapped into the requested range.
fn row_angle(m: &Mat2, range: AngleRange) -> Result<f64, BcError> {
    let r0 = (m.e[0][0], m.e[0][1]);
    let r1 = (m.e[1][0], m.e[1][1]);
    let n0 = r0.0.norm_sqr() + r0.1.norm_sqr();
    let n1 = r1.0.norm_sqr() + r1.1.norm_sqr();
    let (u, v) = if n0 >= n1 { r0 } else { r1 };
    // Normalize by the largest entry; the quotient must be real for a
    // self-adjoint separated condition.
    let (p, q) = if u.norm() >= v.norm() {
        let t = v / u;
        if t.im.abs() > 1e-8 * t.norm().max(1.0) {
            return Err(BcError::UnclassifiableBC);
        }
        (1.0, t.re)
    } else {
        let t = u / v;
        if t.im.abs() > 1e-8 * t.norm().max(1.0) {
            return Err(BcError::UnclassifiableBC);
        }
        (t.re, 1.0)
    };
    // (p, q) ∝ (cos θ, -sin θ)
    let theta = (-q).atan2(p).rem_euclid(std::f64::consts::PI);
    Ok(match range {
        AngleRange::CoZero => {
            if theta >= std::f64::consts::PI {
                0.0
            } else {
                theta
            }
        }
        AngleRange::CoPi => {
            if theta <= 0.0 {
                std::f64::consts::PI
            } else {
                theta
            }
        }
    })
}

/// The rank `r ∈ {0, 1, 2}` of the count matrix
/// `[[-a11 + f0 a12, b12], [-a21 + f0 a22, b22]]` and the eigenvalue count
/// `k = N - 2 + r`.
pub fn eigenvalue_count(eq: &Equation, bc: &CanonicalBC) -> (usize, usize) {
    eigenvalue_count_raw(eq, &bc.representative())
}

pub fn eigenvalue_count_raw(eq: &Equation, raw: &RawBC) -> (usize, usize) {
    let f0 = eq.f0();
    // Row-normalize first: the count matrix inherits the representative's
    // row scales, and rank decisions must not depend on the representative.
    let (a, b) = row_normalized(raw.a(), raw.b());
    let m = Mat2::new([
        [-a.e[0][0] + f0 * a.e[0][1], b.e[0][1]],
        [-a.e[1][0] + f0 * a.e[1][1], b.e[1][1]],
    ]);
    let r = m.rank(RANK_TOL_REL * f0.abs().max(1.0));
    (r, eq.n() - 2 + r)
}

/// Coordinate chart labels for the space of self-adjoint conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    O13,
    O14,
    O23,
    O24,
}

impl Chart {
    pub const ALL: [Chart; 4] = [Chart::O13, Chart::O14, Chart::O23, Chart::O24];

    /// Column indices (0-based into the 2x4 matrix `[A | B]`) pinned by the
    /// chart, and the 2x2 pattern they are pinned to.
    fn pinned(&self) -> ([usize; 2], Mat2) {
        match self {
            Chart::O13 => ([0, 2], Mat2::from_real([[1.0, 0.0], [0.0, -1.0]])),
            Chart::O14 => ([0, 3], Mat2::from_real([[1.0, 0.0], [0.0, 1.0]])),
            Chart::O23 => ([1, 2], Mat2::from_real([[-1.0, 0.0], [0.0, -1.0]])),
            Chart::O24 => ([1, 3], Mat2::from_real([[-1.0, 0.0], [0.0, 1.0]])),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Chart::O13 => "O13",
            Chart::O14 => "O14",
            Chart::O23 => "O23",
            Chart::O24 => "O24",
        }
    }

    pub fn parse(s: &str) -> Option<Chart> {
        match s {
            "O13" | "o13" => Some(Chart::O13),
            "O14" | "o14" => Some(Chart::O14),
            "O23" | "o23" => Some(Chart::O23),
            "O24" | "o24" => Some(Chart::O24),
            _ => None,
        }
    }
}

/// Chart coordinates of a boundary condition: two real coordinates and one
/// complex coordinate `z`. Reconstructing the representative from the
/// coordinates and reclassifying returns the same canonical condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartCoords {
    pub chart: Chart,
    /// `a12` (O13, O14) or `a11` (O23, O24).
    pub coord_a: f64,
    /// `b21` (O14, O24) or `b22` (O13, O23).
    pub coord_b: f64,
    pub z: C64,
}

impl ChartCoords {
    /// The 2x4 representative `[A | B]` of these coordinates.
    pub fn reconstruct(&self) -> RawBC {
        let zb = self.z.conj();
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let m: [[C64; 4]; 2] = match self.chart {
            Chart::O13 => [
                [one, C64::new(self.coord_a, 0.0), o, zb],
                [o, self.z, -one, C64::new(self.coord_b, 0.0)],
            ],
            Chart::O14 => [
                [one, C64::new(self.coord_a, 0.0), zb, o],
                [o, self.z, C64::new(self.coord_b, 0.0), one],
            ],
            Chart::O23 => [
                [C64::new(self.coord_a, 0.0), -one, o, zb],
                [self.z, o, -one, C64::new(self.coord_b, 0.0)],
            ],
            Chart::O24 => [
                [C64::new(self.coord_a, 0.0), -one, zb, o],
                [self.z, o, C64::new(self.coord_b, 0.0), one],
            ],
        };
        let a = Mat2::new([[m[0][0], m[0][1]], [m[1][0], m[1][1]]]);
        let b = Mat2::new([[m[0][2], m[0][3]], [m[1][2], m[1][3]]]);
        RawBC::new(a, b).expect("chart matrices are self-adjoint by construction")
    }
}

/// All charts containing the given condition, with coordinates, in the fixed
/// order O13, O14, O23, O24. Every self-adjoint condition lies in at least
/// one chart; an empty result signals a numerically borderline input.
pub fn chart_coords(bc: &CanonicalBC) -> Vec<ChartCoords> {
    let raw = bc.representative();
    let cols: [[C64; 2]; 4] = [
        [raw.a.e[0][0], raw.a.e[1][0]],
        [raw.a.e[0][1], raw.a.e[1][1]],
        [raw.b.e[0][0], raw.b.e[1][0]],
        [raw.b.e[0][1], raw.b.e[1][1]],
    ];
    let scale = raw.a.max_norm().max(raw.b.max_norm());
    let mut out = Vec::new();
    for chart in Chart::ALL {
        let ([i, j], pattern) = chart.pinned();
        let sub = Mat2::new([[cols[i][0], cols[j][0]], [cols[i][1], cols[j][1]]]);
        let (_, smin) = sub.singular_values();
        if smin <= RANK_TOL_REL * scale {
            continue;
        }
        let t = pattern.mul(&sub.inverse().expect("checked nonsingular"));
        let a = t.mul(&raw.a);
        let b = t.mul(&raw.b);
        let (coord_a, coord_b, z) = match chart {
            Chart::O13 => (a.e[0][1].re, b.e[1][1].re, a.e[1][1]),
            Chart::O14 => (a.e[0][1].re, b.e[1][0].re, a.e[1][1]),
            Chart::O23 => (a.e[0][0].re, b.e[1][1].re, a.e[1][0]),
            Chart::O24 => (a.e[0][0].re, b.e[1][0].re, a.e[1][0]),
        };
        out.push(ChartCoords {
            chart,
            coord_a,
            coord_b,
            z,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub fn harmonic(n: usize) -> Equation {
        Equation::new(n, vec![1.0; n + 1], vec![0.0; n], vec![1.0; n]).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(Equation::new(2, vec![1.0, 1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0]).is_ok());
        let err = Equation::new(2, vec![0.0, 1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0]);
        assert_eq!(err.unwrap_err(), SlpError::ZeroCoefficient { index: 0 });
        // sign changes in f are allowed
        assert!(Equation::new(
            3,
            vec![1.0, -2.0, 1.0, 1.0],
            vec![0.0; 3],
            vec![1.0; 3]
        )
        .is_ok());
        let err = Equation::new(2, vec![1.0, 1.0, 1.0], vec![0.0, 0.0], vec![1.0, -1.0]);
        assert_eq!(
            err.unwrap_err(),
            SlpError::NonPositiveWeight {
                index: 2,
                value: -1.0
            }
        );
        assert!(matches!(
            Equation::new(1, vec![1.0, 1.0], vec![0.0], vec![1.0]).unwrap_err(),
            SlpError::NTooSmall { n: 1 }
        ));
    }

    #[test]
    fn xi_values() {
        assert!((xi_of(1.0) - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((xi_of(-1.0) - PI / 4.0).abs() < 1e-15);
        assert!((xi_of(2.0) - (PI - (0.5f64).atan())).abs() < 1e-15);
        for f0 in [-3.0, -0.4, 0.7, 2.5] {
            let x = xi_of(f0);
            assert!(x > 0.0 && x < PI);
        }
    }

    #[test]
    fn classify_periodic_and_sheared_coupling() {
        let raw = RawBC::new(Mat2::identity(), Mat2::identity().scale(C64::new(-1.0, 0.0)))
            .unwrap();
        let bc = classify_bc(&raw).unwrap();
        assert_eq!(
            bc,
            CanonicalBC::Coupled {
                gamma: 0.0,
                k: [[1.0, 0.0], [0.0, 1.0]]
            }
        );

        for s in [-1.0, 0.0, 1.0, 2.0, 3.0] {
            let a = Mat2::from_real([[1.0, s], [0.0, -1.0]]);
            let b = Mat2::from_real([[-1.0, 0.0], [0.0, 1.0]]);
            let bc = classify_bc(&RawBC::new(a, b).unwrap()).unwrap();
            match bc {
                CanonicalBC::Coupled { gamma, k } => {
                    assert!(gamma.abs() < 1e-12);
                    assert!((k[0][0] - 1.0).abs() < 1e-12);
                    assert!((k[0][1] - s).abs() < 1e-12);
                    assert!(k[1][0].abs() < 1e-12);
                    assert!((k[1][1] - 1.0).abs() < 1e-12);
                }
                _ => panic!("expected coupled"),
            }
        }
    }

    #[test]
    fn classify_dirichlet() {
        let a = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        let b = Mat2::from_real([[0.0, 0.0], [-1.0, 0.0]]);
        let bc = classify_bc(&RawBC::new(a, b).unwrap()).unwrap();
        match bc {
            CanonicalBC::Separated { alpha, beta } => {
                assert!(alpha.abs() < 1e-12);
                assert!((beta - PI).abs() < 1e-12);
            }
            _ => panic!("expected separated"),
        }
    }

    #[test]
    fn count_examples() {
        let eq = harmonic(2);
        let dirichlet = CanonicalBC::Separated {
            alpha: 0.0,
            beta: PI,
        };
        assert_eq!(eigenvalue_count(&eq, &dirichlet), (1, 1));
        let periodic = CanonicalBC::Coupled {
            gamma: 0.0,
            k: [[1.0, 0.0], [0.0, 1.0]],
        };
        assert_eq!(eigenvalue_count(&eq, &periodic), (2, 2));
        // the sheared family at s = 1 loses an eigenvalue: k11 - f0 k12 = 0
        let sheared = CanonicalBC::Coupled {
            gamma: 0.0,
            k: [[1.0, 1.0], [0.0, 1.0]],
        };
        assert_eq!(eigenvalue_count(&eq, &sheared), (1, 1));
    }

    #[test]
    fn separated_count_matches_angle_cases() {
        let eq = harmonic(3);
        let xi = eq.xi();
        for &(alpha, beta, want_r) in &[
            (0.3, 1.2, 2),
            (xi, 1.2, 1),
            (0.3, PI, 1),
            (xi, PI, 0),
            (0.0, PI, 1),
        ] {
            let bc = CanonicalBC::Separated { alpha, beta };
            assert_eq!(eigenvalue_count(&eq, &bc).0, want_r, "alpha={alpha} beta={beta}");
        }
    }

    #[test]
    fn chart_membership_of_periodic() {
        let bc = CanonicalBC::Coupled {
            gamma: 0.0,
            k: [[1.0, 0.0], [0.0, 1.0]],
        };
        let coords = chart_coords(&bc);
        let o14 = coords.iter().find(|c| c.chart == Chart::O14).unwrap();
        assert!(o14.coord_a.abs() < 1e-12);
        assert!(o14.coord_b.abs() < 1e-12);
        assert!((o14.z - C64::new(-1.0, 0.0)).norm() < 1e-12);
        // reconstruct and reclassify
        let again = classify_bc(&o14.reconstruct()).unwrap();
        assert_eq!(again, bc);
    }

    #[test]
    fn dirichlet_lies_only_in_o13() {
        let bc = CanonicalBC::Separated {
            alpha: 0.0,
            beta: PI,
        };
        let coords = chart_coords(&bc);
        assert_eq!(coords.len(), 1);
        assert_eq!(coords[0].chart, Chart::O13);
        assert!(coords[0].z.norm() < 1e-12);
    }
}
