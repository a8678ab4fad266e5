//! Small complex 2x2 matrix helpers used by the boundary-condition algebra.

use num_complex::Complex64;

pub type C64 = Complex64;

/// A 2x2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

impl Mat2 {
    pub fn new(e: [[C64; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn from_real(r: [[f64; 2]; 2]) -> Self {
        Self {
            e: [
                [C64::new(r[0][0], 0.0), C64::new(r[0][1], 0.0)],
                [C64::new(r[1][0], 0.0), C64::new(r[1][1], 0.0)],
            ],
        }
    }

    pub fn zero() -> Self {
        Self::from_real([[0.0, 0.0], [0.0, 0.0]])
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] *= s;
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat2) -> Self {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = self.e[r][0] * other.e[0][c] + self.e[r][1] * other.e[1][c];
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new([
            [self.e[0][0].conj(), self.e[1][0].conj()],
            [self.e[0][1].conj(), self.e[1][1].conj()],
        ])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(Self::new([
            [self.e[1][1] / d, -self.e[0][1] / d],
            [-self.e[1][0] / d, self.e[0][0] / d],
        ]))
    }

    pub fn max_norm(&self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max(self.e[r][c].norm());
            }
        }
        m
    }

    /// Singular values, largest first. The small one comes from
    /// `|det| / sigma_max`, which stays accurate where the eigenvalue
    /// subtraction for M*M would cancel.
    pub fn singular_values(&self) -> (f64, f64) {
        let a = self.e[0][0].norm_sqr() + self.e[1][0].norm_sqr();
        let c = self.e[0][1].norm_sqr() + self.e[1][1].norm_sqr();
        let b = self.e[0][0].conj() * self.e[0][1] + self.e[1][0].conj() * self.e[1][1];
        let tr = a + c;
        let disc = ((a - c) * (a - c) + 4.0 * b.norm_sqr()).max(0.0).sqrt();
        let hi = (0.5 * (tr + disc)).max(0.0).sqrt();
        let lo = if hi > 0.0 { self.det().norm() / hi } else { 0.0 };
        (hi, lo)
    }

    /// Numerical rank with singular values below `tol` counted as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let (s1, s2) = self.singular_values();
        (s1 > tol) as usize + (s2 > tol) as usize
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.im.abs() <= tol)
    }

    pub fn real_part(&self) -> [[f64; 2]; 2] {
        [
            [self.e[0][0].re, self.e[0][1].re],
            [self.e[1][0].re, self.e[1][1].re],
        ]
    }
}

/// The symplectic form used by the self-adjointness condition.
pub fn j_form() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]])
}

/// Rank of the 2x4 matrix [A | B] with tolerance `tol` on singular values,
/// computed from the eigenvalues of the 2x2 Gram matrix M M*.
pub fn rank_2x4(a: &Mat2, b: &Mat2, tol: f64) -> usize {
    let mut g = [[C64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for s in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..2 {
                acc += a.e[r][c] * a.e[s][c].conj();
                acc += b.e[r][c] * b.e[s][c].conj();
            }
            g[r][s] = acc;
        }
    }
    let tr = g[0][0].re + g[1][1].re;
    let det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).re.max(0.0);
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let hi = (0.5 * (tr + disc)).max(0.0).sqrt();
    let lo = if hi > 0.0 { det.sqrt() / hi } else { 0.0 };
    (hi > tol) as usize + (lo > tol) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Mat2::new([
            [C64::new(1.0, 2.0), C64::new(-0.5, 0.3)],
            [C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        assert!((id.e[0][0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(id.e[0][1].norm() < 1e-12);
        assert!(id.e[1][0].norm() < 1e-12);
        assert!((id.e[1][1] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn singular_values_of_diag() {
        let m = Mat2::from_real([[3.0, 0.0], [0.0, -0.5]]);
        let (s1, s2) = m.singular_values();
        assert!((s1 - 3.0).abs() < 1e-12);
        assert!((s2 - 0.5).abs() < 1e-12);
        assert_eq!(m.rank(1e-9), 2);
        assert_eq!(Mat2::zero().rank(1e-9), 0);
    }

    #[test]
    fn rank_of_2x4_pairs() {
        let a = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        let b = Mat2::from_real([[0.0, 0.0], [-1.0, 0.0]]);
        assert_eq!(rank_2x4(&a, &b, 1e-9), 2);
        assert_eq!(rank_2x4(&a, &Mat2::zero(), 1e-9), 1);
    }
}
