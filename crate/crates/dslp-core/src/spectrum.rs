//! Fundamental-solution polynomials, the characteristic polynomial, the
//! spectrum solver and two independent verification oracles.
//!
//! The solver builds the characteristic polynomial in coefficient form,
//! checks its degree against the count formula `k = N - 2 + r`, isolates
//! roots with Sturm chains, and then polishes every root with Newton steps
//! driven by a numerically stable evaluation of the same polynomial through
//! the three-term recursion. When the coefficient route degrades (large `N`
//! makes monomial coefficients ill-conditioned) the solver falls back to a
//! sign scan of the recursion evaluation, which resolves the `k`
//! guaranteed-real roots at full precision.

use crate::mat2::C64;
use crate::poly::{
    self, affine_combine, fujiwara_bound, isolate_real_roots, PolyError, RealPolynomial, RootSet,
    DEFAULT_CLUSTER_TOL,
};
use crate::slp::{eigenvalue_count, CanonicalBC, Equation, RawBC};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    /// `deg Γ != N - 2 + r` beyond trimming tolerance; the count formula is
    /// exact, so disagreement signals a bug or a borderline rank call.
    #[error("characteristic polynomial degree {got} does not match eigenvalue count {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("bracket too small: found total multiplicity {found}, expected {expected}")]
    BracketTooSmall { found: usize, expected: usize },
    #[error("raw-representative characteristic polynomial has non-real coefficients")]
    ComplexGamma,
}

/// The four boundary polynomials `φ_N`, `ψ_N`, `f_NΔφ_N`, `f_NΔψ_N`.
#[derive(Clone, Debug)]
pub struct FundamentalQuadruple {
    pub phi_n: RealPolynomial,
    pub psi_n: RealPolynomial,
    pub fd_phi_n: RealPolynomial,
    pub fd_psi_n: RealPolynomial,
}

/// Propagates the fundamental solutions through the recurrence in polynomial
/// arithmetic. `φ` starts from value 1 and quasi-derivative 0, `ψ` from value
/// 0 and quasi-derivative 1; each step is one or two `affine_combine` calls.
/// `f_N` never enters the four boundary quantities.
pub fn fundamental_solutions(eq: &Equation) -> FundamentalQuadruple {
    let (phi_n, fd_phi_n) = propagate(eq, 1.0, 0.0);
    let (psi_n, fd_psi_n) = propagate(eq, 0.0, 1.0);
    FundamentalQuadruple {
        phi_n,
        psi_n,
        fd_phi_n,
        fd_psi_n,
    }
}

fn propagate(eq: &Equation, y0: f64, v0: f64) -> (RealPolynomial, RealPolynomial) {
    let n = eq.n();
    let f = eq.f();
    let q = eq.q();
    let w = eq.w();
    let mut v = RealPolynomial::constant(v0);
    // y_1 = y_0 + v_0 / f_0
    let mut y = affine_combine(1.0, &RealPolynomial::constant(y0), 1.0 / f[0], &v, None);
    for step in 1..=n {
        // v_n = (q_n - λ w_n) y_n + v_{n-1}
        v = affine_combine(q[step - 1], &y, 1.0, &v, Some(w[step - 1]));
        if step < n {
            // y_{n+1} = y_n + v_n / f_n
            y = affine_combine(1.0, &y, 1.0 / f[step], &v, None);
        }
    }
    (y, v)
}

/// Linear combination with cancellation-aware trailing trim: a trailing
/// coefficient is dropped only when it is negligible against the absolute
/// sum of its own contributions, so legitimately small leading coefficients
/// survive arbitrary dynamic range while exact degree drops (the r < 2
/// boundary cancellations) trim cleanly.
fn lin_comb(terms: &[(f64, &RealPolynomial)], constant: f64) -> RealPolynomial {
    let len = 1 + terms
        .iter()
        .map(|(_, p)| p.coeffs().len())
        .max()
        .unwrap_or(0);
    let mut val = vec![0.0; len];
    let mut env = vec![0.0; len];
    val[0] = constant;
    env[0] = constant.abs();
    for &(c, p) in terms {
        for (i, &pc) in p.coeffs().iter().enumerate() {
            val[i] += c * pc;
            env[i] += (c * pc).abs();
        }
    }
    while let Some(&last) = val.last() {
        if last == 0.0 || last.abs() <= 1e-11 * env[val.len() - 1] {
            val.pop();
            env.pop();
        } else {
            break;
        }
    }
    RealPolynomial::from_coeffs_trusted(val)
}

/// Boundary-condition weights applied to the quadruple: the characteristic
/// polynomial is `c0 + c11 φ_N + c12 ψ_N + c21 f_NΔφ_N + c22 f_NΔψ_N`.
#[derive(Clone, Copy, Debug)]
struct GammaWeights {
    c0: f64,
    c11: f64,
    c12: f64,
    c21: f64,
    c22: f64,
}

/// `sin`/`cos` with values at floating-point noise level snapped to zero, so
/// canonical angles stored as multiples of `pi/2` produce exact zero weights
/// (the count formula treats them as exact zeros too).
fn snapped(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        0.0
    } else {
        x
    }
}

fn gamma_weights(bc: &CanonicalBC) -> GammaWeights {
    match *bc {
        CanonicalBC::Separated { alpha, beta } => {
            let (sa, ca) = (snapped(alpha.sin()), snapped(alpha.cos()));
            let (sb, cb) = (snapped(beta.sin()), snapped(beta.cos()));
            GammaWeights {
                c0: 0.0,
                c11: sa * cb,
                c12: ca * cb,
                c21: -sa * sb,
                c22: -ca * sb,
            }
        }
        CanonicalBC::Coupled { gamma, k } => GammaWeights {
            c0: 2.0 * snapped(gamma.cos()),
            c11: -k[1][1],
            c12: k[1][0],
            c21: k[0][1],
            c22: -k[0][0],
        },
    }
}

/// Characteristic polynomial of `(eq, bc)`: its zeros are exactly the
/// eigenvalues. Always built from the canonical form, which keeps the
/// coefficients real and the roots representative-independent.
pub fn characteristic_polynomial(eq: &Equation, bc: &CanonicalBC) -> RealPolynomial {
    let quad = fundamental_solutions(eq);
    characteristic_from_quadruple(&quad, bc)
}

fn characteristic_from_quadruple(quad: &FundamentalQuadruple, bc: &CanonicalBC) -> RealPolynomial {
    let w = gamma_weights(bc);
    lin_comb(
        &[
            (w.c11, &quad.phi_n),
            (w.c12, &quad.psi_n),
            (w.c21, &quad.fd_phi_n),
            (w.c22, &quad.fd_psi_n),
        ],
        w.c0,
    )
}

/// Characteristic polynomial of a raw representative `[A | B]`:
/// `det A + det B + c11 φ_N + c12 ψ_N + c21 f_NΔφ_N + c22 f_NΔψ_N` with the
/// `c_ij` the mixed 2x2 minors of the pair. The result scales with the
/// representative and is only accepted when its coefficients come out real;
/// the solve path never uses this, it exists for reproducing raw-form
/// computations exactly.
pub fn characteristic_polynomial_raw(
    eq: &Equation,
    raw: &RawBC,
) -> Result<RealPolynomial, SpectrumError> {
    let a = raw.a();
    let b = raw.b();
    let c11 = a.e[1][1] * b.e[0][0] - a.e[0][1] * b.e[1][0];
    let c12 = a.e[0][0] * b.e[1][0] - a.e[1][0] * b.e[0][0];
    let c21 = a.e[1][1] * b.e[0][1] - a.e[0][1] * b.e[1][1];
    let c22 = a.e[0][0] * b.e[1][1] - a.e[1][0] * b.e[0][1];
    let c0 = a.det() + b.det();
    let quad = fundamental_solutions(eq);
    let terms: [(C64, &RealPolynomial); 4] = [
        (c11, &quad.phi_n),
        (c12, &quad.psi_n),
        (c21, &quad.fd_phi_n),
        (c22, &quad.fd_psi_n),
    ];
    let re = lin_comb(
        &terms.map(|(c, p)| (c.re, p)),
        c0.re,
    );
    let im = lin_comb(
        &terms.map(|(c, p)| (c.im, p)),
        c0.im,
    );
    let scale = re.max_abs_coeff().max(1e-300);
    if im.max_abs_coeff() > 1e-9 * scale {
        return Err(SpectrumError::ComplexGamma);
    }
    Ok(re)
}

/// One stable evaluation of the characteristic polynomial at a fixed `λ`:
/// value, first and second derivative in `λ`, and a magnitude envelope for
/// roundoff estimates, all via the numeric recursion (no coefficients).
#[derive(Clone, Copy, Debug)]
pub struct GammaEval {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub envelope: f64,
}

#[derive(Clone, Copy)]
struct BoundaryNumeric {
    y: f64,
    dy: f64,
    d2y: f64,
    v: f64,
    dv: f64,
    d2v: f64,
    env_y: f64,
    env_v: f64,
}

fn propagate_numeric(eq: &Equation, y0: f64, v0: f64, lambda: f64) -> BoundaryNumeric {
    let n = eq.n();
    let f = eq.f();
    let q = eq.q();
    let w = eq.w();
    let mut s = BoundaryNumeric {
        y: y0 + v0 / f[0],
        dy: 0.0,
        d2y: 0.0,
        v: v0,
        dv: 0.0,
        d2v: 0.0,
        env_y: y0.abs() + v0.abs() / f[0].abs(),
        env_v: v0.abs(),
    };
    for step in 1..=n {
        let t = q[step - 1] - lambda * w[step - 1];
        let wn = w[step - 1];
        let v = t * s.y + s.v;
        let dv = t * s.dy - wn * s.y + s.dv;
        let d2v = t * s.d2y - 2.0 * wn * s.dy + s.d2v;
        let env_v = t.abs() * s.env_y + s.env_v;
        s.v = v;
        s.dv = dv;
        s.d2v = d2v;
        s.env_v = env_v;
        if step < n {
            let fi = f[step];
            s.y += s.v / fi;
            s.dy += s.dv / fi;
            s.d2y += s.d2v / fi;
            s.env_y += s.env_v / fi.abs();
        }
    }
    s
}

/// Stable pointwise evaluation of the canonical characteristic polynomial.
pub fn gamma_eval(eq: &Equation, bc: &CanonicalBC, lambda: f64) -> GammaEval {
    let w = gamma_weights(bc);
    let phi = propagate_numeric(eq, 1.0, 0.0, lambda);
    let psi = propagate_numeric(eq, 0.0, 1.0, lambda);
    GammaEval {
        value: w.c0 + w.c11 * phi.y + w.c12 * psi.y + w.c21 * phi.v + w.c22 * psi.v,
        d1: w.c11 * phi.dy + w.c12 * psi.dy + w.c21 * phi.dv + w.c22 * psi.dv,
        d2: w.c11 * phi.d2y + w.c12 * psi.d2y + w.c21 * phi.d2v + w.c22 * psi.d2v,
        envelope: w.c0.abs()
            + w.c11.abs() * phi.env_y
            + w.c12.abs() * psi.env_y
            + w.c21.abs() * phi.env_v
            + w.c22.abs() * psi.env_v,
    }
}

/// Sorted real spectrum with multiplicities, the count data and the
/// characteristic polynomial it came from.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: RootSet,
    pub r: usize,
    pub k: usize,
    pub gamma_poly: RealPolynomial,
}

impl Spectrum {
    /// `λ_0 <= λ_1 <= ... <= λ_{k-1}` with multiplicity expansion.
    pub fn expanded(&self) -> Vec<f64> {
        self.eigenvalues.expanded()
    }

    pub fn multiplicity_at_index(&self, idx: usize) -> Option<usize> {
        self.eigenvalues.multiplicity_at_index(idx)
    }
}

const NEWTON_TRUST_REL: f64 = 0.05;
/// Accepted implied-step radius for a polished root: `|Γ/Γ'|` (or the
/// analogue through the derivative for double roots) must stay below this
/// times `max(1, |λ|)`. Scale-free, unlike the roundoff envelope, which
/// overestimates the actual recursion error by many orders at large `N`.
const ROOT_RADIUS_REL: f64 = 1e-7;

/// Solves for the complete spectrum of `(eq, bc)`.
pub fn solve_spectrum(eq: &Equation, bc: &CanonicalBC) -> Result<Spectrum, SpectrumError> {
    let quad = fundamental_solutions(eq);
    let gamma = characteristic_from_quadruple(&quad, bc);
    let (r, k) = eigenvalue_count(eq, bc);
    let deg = gamma.degree().unwrap_or(0);
    if deg != k {
        return Err(SpectrumError::DegreeMismatch {
            expected: k,
            got: deg,
        });
    }
    if k == 0 {
        return Ok(Spectrum {
            eigenvalues: RootSet::empty(),
            r,
            k,
            gamma_poly: gamma,
        });
    }
    if let Ok(rs) = isolate_real_roots(&gamma, DEFAULT_CLUSTER_TOL) {
        if let Some(roots) = polish_and_validate(eq, bc, &rs, k) {
            return Ok(Spectrum {
                eigenvalues: RootSet::from_parts(roots),
                r,
                k,
                gamma_poly: gamma,
            });
        }
    }
    let roots = stable_scan(eq, bc, &gamma, k)?;
    Ok(Spectrum {
        eigenvalues: RootSet::from_parts(roots),
        r,
        k,
        gamma_poly: gamma,
    })
}

/// Newton-polish coefficient-route roots on the recursion evaluation and
/// verify residuals against the roundoff envelope. `None` means the
/// coefficient route is untrustworthy here and the scan fallback should run.
fn polish_and_validate(
    eq: &Equation,
    bc: &CanonicalBC,
    rs: &RootSet,
    k: usize,
) -> Option<Vec<(f64, usize)>> {
    let mut polished: Vec<(f64, usize)> = Vec::with_capacity(rs.roots().len());
    for &(x0, m) in rs.roots() {
        if m > 2 {
            return None;
        }
        let trust = NEWTON_TRUST_REL * x0.abs().max(1.0);
        let mut x = x0;
        for _ in 0..40 {
            let g = gamma_eval(eq, bc, x);
            let (num, den) = if m == 1 { (g.value, g.d1) } else { (g.d1, g.d2) };
            if den == 0.0 {
                break;
            }
            let step = num / den;
            let next = x - step;
            if (next - x0).abs() > trust {
                break;
            }
            x = next;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let g = gamma_eval(eq, bc, x);
        let radius = ROOT_RADIUS_REL * x.abs().max(1.0);
        let ok = if m == 1 {
            g.d1 != 0.0 && g.value.abs() <= g.d1.abs() * radius
        } else {
            g.d2 != 0.0
                && g.d1.abs() <= g.d2.abs() * radius
                && g.value.abs() <= g.d2.abs() * radius * radius * 10.0
        };
        if !ok {
            return None;
        }
        polished.push((x, m));
    }
    polished.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // Re-merge anything the polish pulled together.
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (x, m) in polished {
        match merged.last_mut() {
            Some((px, pm)) if (x - *px).abs() <= DEFAULT_CLUSTER_TOL * px.abs().max(1.0) => {
                *pm += m;
            }
            _ => merged.push((x, m)),
        }
    }
    let total: usize = merged.iter().map(|&(_, m)| m).sum();
    if total != k || merged.iter().any(|&(_, m)| m > 2) {
        return None;
    }
    Some(merged)
}

/// Locates the `k` guaranteed-real roots by sign-scanning the stable
/// recursion evaluation over a bound derived from the coefficients, with
/// critical-point refinement for double roots.
fn stable_scan(
    eq: &Equation,
    bc: &CanonicalBC,
    gamma: &RealPolynomial,
    k: usize,
) -> Result<Vec<(f64, usize)>, SpectrumError> {
    let bound = 2.0 * fujiwara_bound(gamma).max(1.0);
    let mut grid_n = 256usize.max(16 * k);
    let mut last_found = 0usize;
    for _ in 0..8 {
        let roots = scan_once(eq, bc, -bound, bound, grid_n, k);
        let total: usize = roots.iter().map(|&(_, m)| m).sum();
        if total == k {
            return Ok(roots);
        }
        last_found = total;
        grid_n *= 4;
    }
    Err(SpectrumError::Poly(PolyError::NonRealRootsDetected {
        degree: k,
        found: last_found,
    }))
}

fn scan_once(
    eq: &Equation,
    bc: &CanonicalBC,
    lo: f64,
    hi: f64,
    grid_n: usize,
    k: usize,
) -> Vec<(f64, usize)> {
    let h = (hi - lo) / grid_n as f64;
    let xs: Vec<f64> = (0..=grid_n).map(|i| lo + i as f64 * h).collect();
    let vals = eval_grid(eq, bc, &xs);
    let mut roots: Vec<(f64, usize)> = Vec::new();
    for i in 0..grid_n {
        let (a, b) = (xs[i], xs[i + 1]);
        let (va, vb) = (vals[i], vals[i + 1]);
        if va == 0.0 {
            if i == 0 || vals[i - 1] != 0.0 {
                roots.push((a, 1));
            }
            continue;
        }
        if va * vb < 0.0 {
            roots.push((refine_simple(eq, bc, a, b), 1));
        }
    }
    // Double roots: local minima of |Γ| without sign change.
    if roots.iter().map(|&(_, m)| m).sum::<usize>() < k {
        for i in 1..grid_n {
            let dip = vals[i] != 0.0
                && vals[i].abs() < vals[i - 1].abs()
                && vals[i].abs() <= vals[i + 1].abs();
            let crossing = vals[i - 1] * vals[i] < 0.0 || vals[i] * vals[i + 1] < 0.0;
            if !dip || crossing {
                continue;
            }
            if let Some(x) = refine_critical(eq, bc, xs[i - 1], xs[i + 1], xs[i]) {
                let g = gamma_eval(eq, bc, x);
                let local = vals[i - 1].abs().max(vals[i + 1].abs()).max(1e-300);
                if g.value.abs() <= 1e-8 * local {
                    roots.push((x, 2));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (x, m) in roots {
        match merged.last_mut() {
            Some((px, pm)) if (x - *px).abs() <= DEFAULT_CLUSTER_TOL * px.abs().max(1.0) => {
                *pm = (*pm).max(m);
            }
            _ => merged.push((x, m)),
        }
    }
    merged
}

#[cfg(feature = "parallel")]
fn eval_grid(eq: &Equation, bc: &CanonicalBC, xs: &[f64]) -> Vec<f64> {
    use rayon::prelude::*;
    if xs.len() >= 4096 {
        xs.par_iter()
            .map(|&x| gamma_eval(eq, bc, x).value)
            .collect()
    } else {
        xs.iter().map(|&x| gamma_eval(eq, bc, x).value).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn eval_grid(eq: &Equation, bc: &CanonicalBC, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| gamma_eval(eq, bc, x).value).collect()
}

fn refine_simple(eq: &Equation, bc: &CanonicalBC, mut a: f64, mut b: f64) -> f64 {
    let mut va = gamma_eval(eq, bc, a).value;
    for _ in 0..90 {
        if b - a <= 1e-15 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        let vm = gamma_eval(eq, bc, mid).value;
        if vm == 0.0 {
            return mid;
        }
        if va * vm < 0.0 {
            b = mid;
        } else {
            a = mid;
            va = vm;
        }
    }
    // One or two Newton steps for the last digits.
    let mut x = 0.5 * (a + b);
    for _ in 0..3 {
        let g = gamma_eval(eq, bc, x);
        if g.d1 == 0.0 {
            break;
        }
        let next = x - g.value / g.d1;
        if next < a || next > b {
            break;
        }
        x = next;
    }
    x
}

/// Newton on the derivative, used to land on critical points for
/// double-root detection; stays inside `(lo, hi)`.
fn refine_critical(eq: &Equation, bc: &CanonicalBC, lo: f64, hi: f64, start: f64) -> Option<f64> {
    let mut x = start;
    for _ in 0..60 {
        let g = gamma_eval(eq, bc, x);
        if g.d2 == 0.0 {
            return None;
        }
        let step = g.d1 / g.d2;
        let next = x - step;
        if !(lo..=hi).contains(&next) {
            return None;
        }
        x = next;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            return Some(x);
        }
    }
    Some(x)
}

/// Independent oracle for the Dirichlet condition: eigenvalues of the
/// `(N-1) x (N-1)` symmetric tridiagonal pencil obtained from the recurrence
/// with `y_0 = y_N = 0`, found by Sturm-count bisection on the pencil. No
/// polynomial coefficients are formed.
pub fn oracle_dirichlet(eq: &Equation) -> Vec<f64> {
    let n = eq.n();
    let f = eq.f();
    let q = eq.q();
    let w = eq.w();
    let m = n - 1;
    let diag: Vec<f64> = (1..=m).map(|i| f[i - 1] + f[i] + q[i - 1]).collect();
    let off: Vec<f64> = (1..m).map(|i| -f[i]).collect();
    let weights: Vec<f64> = (1..=m).map(|i| w[i - 1]).collect();

    // Gershgorin bound for the symmetrically scaled pencil.
    let mut radius = 0.0f64;
    for i in 0..m {
        let mut row = diag[i].abs() / weights[i];
        if i > 0 {
            row += off[i - 1].abs() / (weights[i - 1] * weights[i]).sqrt();
        }
        if i + 1 < m {
            row += off[i].abs() / (weights[i] * weights[i + 1]).sqrt();
        }
        radius = radius.max(row);
    }
    let lo = -radius - 1.0;
    let hi = radius + 1.0;

    let count_below = |sigma: f64| -> usize {
        let guard = 1e-300;
        let mut count = 0usize;
        let mut piv = diag[0] - sigma * weights[0];
        if piv < 0.0 {
            count += 1;
        }
        for i in 1..m {
            let mut denom = piv;
            if denom.abs() < guard {
                denom = if denom >= 0.0 { guard } else { -guard };
            }
            piv = (diag[i] - sigma * weights[i]) - off[i - 1] * off[i - 1] / denom;
            if piv < 0.0 {
                count += 1;
            }
        }
        count
    };

    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..120 {
            if b - a <= 1e-14 * a.abs().max(b.abs()).max(1.0) {
                break;
            }
            let mid = 0.5 * (a + b);
            if count_below(mid) <= j {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Independent oracle for arbitrary canonical conditions: evaluates the
/// characteristic polynomial pointwise through the recursion on a refining
/// grid over `bracket`, bisects sign changes to `1e-10`, and detects double
/// roots as grid minima of `|Γ|` below `1e-8` of the local scale, refined by
/// golden-section on `|Γ|`. Coefficients are never formed. Returns the
/// multiplicity-expanded sorted eigenvalue list.
pub fn oracle_pencil_scan(
    eq: &Equation,
    bc: &CanonicalBC,
    bracket: (f64, f64),
) -> Result<Vec<f64>, SpectrumError> {
    let (_, k) = eigenvalue_count(eq, bc);
    if k == 0 {
        return Ok(Vec::new());
    }
    let (lo, hi) = bracket;
    let mut grid_n = 64usize.max(8 * k);
    let mut found: Vec<f64> = Vec::new();
    for _ in 0..7 {
        found = pencil_scan_once(eq, bc, lo, hi, grid_n);
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Merge rediscoveries of the same root; doubles enter as exactly
        // repeated values and survive as a pair.
        let mut merged: Vec<f64> = Vec::new();
        for x in found {
            match merged.last() {
                Some(&px)
                    if x != px && (x - px).abs() <= 1e-9 * px.abs().max(1.0) =>
                {
                    continue;
                }
                _ => merged.push(x),
            }
        }
        found = merged;
        if found.len() >= k {
            break;
        }
        grid_n *= 4;
    }
    if found.len() < k {
        return Err(SpectrumError::BracketTooSmall {
            found: found.len(),
            expected: k,
        });
    }
    found.truncate(k);
    Ok(found)
}

fn pencil_scan_once(eq: &Equation, bc: &CanonicalBC, lo: f64, hi: f64, grid_n: usize) -> Vec<f64> {
    let h = (hi - lo) / grid_n as f64;
    let xs: Vec<f64> = (0..=grid_n).map(|i| lo + i as f64 * h).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| gamma_eval(eq, bc, x).value).collect();
    let mut out: Vec<f64> = Vec::new();
    for i in 0..grid_n {
        if vals[i] == 0.0 {
            if i == 0 || vals[i - 1] != 0.0 {
                out.push(xs[i]);
            }
        } else if vals[i] * vals[i + 1] < 0.0 {
            out.push(bisect_to(eq, bc, xs[i], xs[i + 1], 1e-10));
        }
    }
    for i in 1..grid_n {
        let dip = vals[i] != 0.0
            && vals[i].abs() < vals[i - 1].abs()
            && vals[i].abs() <= vals[i + 1].abs();
        let crossing = vals[i - 1] * vals[i] < 0.0 || vals[i] * vals[i + 1] < 0.0;
        if !dip || crossing {
            continue;
        }
        let local_scale = vals[i - 1].abs().max(vals[i + 1].abs()).max(1e-300);
        let x = golden_min_abs(eq, bc, xs[i - 1], xs[i + 1]);
        let gx = gamma_eval(eq, bc, x).value;
        // A pair of nearby simple roots reveals itself by a sign change
        // around the refined point.
        let probe = 1e-7 * x.abs().max(1.0);
        let (gl, gr) = (
            gamma_eval(eq, bc, x - probe).value,
            gamma_eval(eq, bc, x + probe).value,
        );
        if gl * gr < 0.0 {
            out.push(bisect_to(eq, bc, x - probe, x + probe, 1e-10));
            // look for the sibling crossing on both flanks
            for (a, b) in [(xs[i - 1], x - probe), (x + probe, xs[i + 1])] {
                let (va, vb) = (
                    gamma_eval(eq, bc, a).value,
                    gamma_eval(eq, bc, b).value,
                );
                if va * vb < 0.0 {
                    out.push(bisect_to(eq, bc, a, b, 1e-10));
                }
            }
        } else if gx.abs() < 1e-8 * local_scale {
            out.push(x);
            out.push(x);
        }
    }
    out
}

fn bisect_to(eq: &Equation, bc: &CanonicalBC, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut va = gamma_eval(eq, bc, a).value;
    // absolute tolerance, floored at the local floating-point spacing
    let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
    for _ in 0..200 {
        if b - a <= tol.max(floor) {
            break;
        }
        let mid = 0.5 * (a + b);
        let vm = gamma_eval(eq, bc, mid).value;
        if vm == 0.0 {
            return mid;
        }
        if va * vm < 0.0 {
            b = mid;
        } else {
            a = mid;
            va = vm;
        }
    }
    0.5 * (a + b)
}

fn golden_min_abs(eq: &Equation, bc: &CanonicalBC, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = gamma_eval(eq, bc, c).value.abs();
    let mut fd = gamma_eval(eq, bc, d).value.abs();
    for _ in 0..120 {
        if (b - a).abs() <= 1e-15 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = gamma_eval(eq, bc, c).value.abs();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = gamma_eval(eq, bc, d).value.abs();
        }
    }
    0.5 * (a + b)
}

/// Bracket for [`oracle_pencil_scan`] from the coefficient root bound of the
/// characteristic polynomial, inflated by two.
pub fn scan_bracket(eq: &Equation, bc: &CanonicalBC) -> (f64, f64) {
    let gamma = characteristic_polynomial(eq, bc);
    let b = 2.0 * poly::cauchy_bound(&gamma).min(2.0 * fujiwara_bound(&gamma)).max(1.0);
    (-b, b)
}
