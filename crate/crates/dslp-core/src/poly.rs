//! Dense real-coefficient polynomial arithmetic and guaranteed real-root
//! isolation via Sturm chains.
//!
//! Coefficients are stored in ascending powers. Trailing coefficients at or
//! below `1e-12 * max |c_i|` are trimmed, so the zero polynomial has an empty
//! coefficient vector and normalization is idempotent.

use thiserror::Error;

/// Relative threshold for trimming trailing coefficients.
pub const COEFF_TRIM_REL: f64 = 1e-12;

/// Default relative clustering tolerance for root isolation.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

const MULT_PROBE_REL: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Total real-root multiplicity fell short of the degree; the polynomial
    /// has non-real roots (for characteristic polynomials this signals a
    /// non-self-adjoint input upstream).
    #[error("non-real roots detected: degree {degree}, real multiplicity found {found}")]
    NonRealRootsDetected { degree: usize, found: usize },
    /// The Sturm chain degenerated (non-finite values or inconsistent
    /// variation counts) and the perturbed retry degenerated as well.
    #[error("degenerate Sturm chain")]
    DegenerateSturmChain,
}

/// Dense real polynomial, `coeffs[i]` multiplying `x^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Constructor that trims only exact trailing zeros, for callers that
    /// guarantee their leading coefficients are meaningful (the
    /// fundamental-solution recursion, whose top coefficients are products
    /// with no cancellation, and envelope-trimmed combinations).
    pub(crate) fn from_coeffs_trusted(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    fn normalize(&mut self) {
        let maxabs = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if !maxabs.is_finite() {
            return;
        }
        let thr = COEFF_TRIM_REL * maxabs;
        while let Some(&last) = self.coeffs.last() {
            if last.abs() <= thr {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the trimmed polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn leading_coeff(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let d: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        Self::new(d)
    }
}

/// Horner evaluation of `p` at `x`.
pub fn evaluate(p: &RealPolynomial, x: f64) -> f64 {
    horner(&p.coeffs, x)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut v = 0.0;
    for &c in coeffs.iter().rev() {
        v = v * x + c;
    }
    v
}

/// Compensated Horner: tracks the exact rounding error of every product and
/// sum through error-free transformations, evaluating as if in roughly
/// doubled precision. Used for final Newton polishing, where plain Horner's
/// noise floor limits root accuracy on ill-conditioned inputs.
fn comp_horner(coeffs: &[f64], x: f64) -> f64 {
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    let mut s = coeffs[n - 1];
    let mut c = 0.0;
    for &a in coeffs[..n - 1].iter().rev() {
        let p = s * x;
        let pi = s.mul_add(x, -p);
        let q = p + a;
        let z = q - p;
        let sigma = (p - (q - z)) + (a - z);
        s = q;
        c = c * x + (pi + sigma);
    }
    s + c
}

/// Returns `a*p + b*q`, or `(a - d*x)*p + b*q` when `shift_times_lambda = d`
/// is supplied. These are the only ring operations the fundamental-solution
/// recursion needs.
pub fn affine_combine(
    a: f64,
    p: &RealPolynomial,
    b: f64,
    q: &RealPolynomial,
    shift_times_lambda: Option<f64>,
) -> RealPolynomial {
    let plen = p.coeffs.len();
    let qlen = q.coeffs.len();
    let extra = usize::from(shift_times_lambda.is_some() && plen > 0);
    let mut out = vec![0.0; (plen + extra).max(qlen)];
    for (i, &c) in p.coeffs.iter().enumerate() {
        out[i] += a * c;
        if let Some(d) = shift_times_lambda {
            out[i + 1] -= d * c;
        }
    }
    for (i, &c) in q.coeffs.iter().enumerate() {
        out[i] += b * c;
    }
    // Exact-zero trim: a single affine step has no cancellation at the top
    // index, so thresholding there would only corrupt legitimate small
    // leading coefficients when the dynamic range is large.
    RealPolynomial::from_coeffs_trusted(out)
}

/// Cauchy root bound: every root of `p` satisfies `|x| < 1 + max|c_i|/|c_d|`.
pub fn cauchy_bound(p: &RealPolynomial) -> f64 {
    let d = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return 1.0,
    };
    let lead = p.coeffs[d].abs();
    let m = p.coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    1.0 + m / lead
}

/// Fujiwara root bound, usually far tighter than Cauchy for polynomials with
/// steeply growing coefficients: `2 * max_k |c_{d-k}/c_d|^{1/k}`.
pub fn fujiwara_bound(p: &RealPolynomial) -> f64 {
    let d = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return 1.0,
    };
    let lead = p.coeffs[d].abs();
    let mut m = 0.0f64;
    for k in 1..=d {
        let c = p.coeffs[d - k].abs();
        if c > 0.0 {
            m = m.max((c / lead).powf(1.0 / k as f64));
        }
    }
    (2.0 * m).max(1e-300)
}

/// A (possibly generalized) Sturm chain: `p`, `p'`, then negated remainders,
/// each rescaled to unit max coefficient. Sign-variation differences count
/// distinct real roots on half-open intervals `(a, b]`.
#[derive(Debug)]
pub struct SturmChain {
    chain: Vec<Vec<f64>>,
}

impl SturmChain {
    pub fn new(p: &RealPolynomial) -> Result<Self, PolyError> {
        Self::with_zero_threshold(p, 1e-11)
    }

    /// Builds the chain treating remainders with unit-scale magnitude at or
    /// below `zero_thr` as exact zeros. Multiple roots make the true
    /// terminating remainder a pure cancellation residue whose size grows
    /// with the conditioning of the input, so callers escalate the threshold
    /// when the counts come out structurally inconsistent.
    pub fn with_zero_threshold(p: &RealPolynomial, zero_thr: f64) -> Result<Self, PolyError> {
        if p.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::DegenerateSturmChain);
        }
        let mut chain: Vec<Vec<f64>> = Vec::new();
        let p0 = unit_scaled(&p.coeffs);
        if p0.is_empty() {
            return Ok(Self { chain });
        }
        chain.push(p0);
        let d1 = RealPolynomial::new(chain[0].clone()).derivative();
        if d1.is_zero() {
            return Ok(Self { chain });
        }
        chain.push(unit_scaled(d1.coeffs()));
        loop {
            let n = chain.len();
            let rem = poly_rem(&chain[n - 2], &chain[n - 1]);
            let maxabs = rem.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            if !maxabs.is_finite() {
                return Err(PolyError::DegenerateSturmChain);
            }
            if maxabs <= zero_thr {
                break;
            }
            let neg: Vec<f64> = rem.iter().map(|c| -c / maxabs).collect();
            let trimmed = trim(&neg);
            if trimmed.is_empty() {
                break;
            }
            chain.push(trimmed);
            if chain.last().map(|c| c.len()) == Some(1) {
                break;
            }
        }
        Ok(Self { chain })
    }

    /// Sign variations of the chain at `x`, skipping exact zeros.
    pub fn variations_at(&self, x: f64) -> usize {
        let mut prev = 0i8;
        let mut count = 0usize;
        for poly in &self.chain {
            let v = horner(poly, x);
            let s = if v > 0.0 {
                1i8
            } else if v < 0.0 {
                -1i8
            } else {
                0i8
            };
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> isize {
        self.variations_at(a) as isize - self.variations_at(b) as isize
    }

    /// A split point inside `(a, b)` where the polynomial itself does not
    /// vanish exactly. At an exact multiple root the whole chain vanishes
    /// and sign variations there are meaningless.
    fn split_point(&self, a: f64, b: f64) -> f64 {
        for frac in [0.5, 0.546282, 0.468231, 0.603441, 0.5117] {
            let mid = a + frac * (b - a);
            if self.chain.is_empty() || horner(&self.chain[0], mid) != 0.0 {
                return mid;
            }
        }
        0.5 * (a + b)
    }
}

fn unit_scaled(coeffs: &[f64]) -> Vec<f64> {
    let trimmed = trim(coeffs);
    let maxabs = trimmed.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if maxabs == 0.0 {
        return Vec::new();
    }
    trimmed.iter().map(|c| c / maxabs).collect()
}

fn trim(coeffs: &[f64]) -> Vec<f64> {
    RealPolynomial::new(coeffs.to_vec()).coeffs
}

/// Remainder of `num / den`, ascending coefficients; `den` must be nonempty.
fn poly_rem(num: &[f64], den: &[f64]) -> Vec<f64> {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return num.to_vec();
    }
    let lead = den[dd];
    let mut rem = num.to_vec();
    for k in (dd..rem.len()).rev() {
        let factor = rem[k] / lead;
        if factor != 0.0 {
            for j in 0..dd {
                rem[k - dd + j] -= factor * den[j];
            }
        }
        rem[k] = 0.0;
    }
    rem.truncate(dd);
    rem
}

/// Sorted distinct roots with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<(f64, usize)>,
}

impl RootSet {
    pub fn empty() -> Self {
        Self { roots: Vec::new() }
    }

    pub fn from_parts(roots: Vec<(f64, usize)>) -> Self {
        Self { roots }
    }

    pub fn roots(&self) -> &[(f64, usize)] {
        &self.roots
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Non-decreasing eigenvalue list with each root repeated by multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for &(x, m) in &self.roots {
            out.extend(std::iter::repeat(x).take(m));
        }
        out
    }

    /// Multiplicity of the distinct root underlying expanded index `idx`.
    pub fn multiplicity_at_index(&self, idx: usize) -> Option<usize> {
        let mut seen = 0usize;
        for &(_, m) in &self.roots {
            if idx < seen + m {
                return Some(m);
            }
            seen += m;
        }
        None
    }
}

struct Leaf {
    lo: f64,
    hi: f64,
    count: usize,
    root: f64,
}

/// Isolates all real roots of `p` with multiplicities.
///
/// Distinct roots are counted and bracketed by Sturm variations over
/// `(-B, B]` for the Cauchy bound `B`, refined by count-preserving bisection,
/// Newton-polished, and merged when closer than `cluster_tol * max(1, |x|)`.
/// Multiplicities come from the count in unsplittable brackets plus a scan of
/// derivative magnitudes at the root. Errors if the total real multiplicity
/// falls short of the degree.
pub fn isolate_real_roots(p: &RealPolynomial, cluster_tol: f64) -> Result<RootSet, PolyError> {
    let deg = match p.degree() {
        None | Some(0) => return Ok(RootSet::empty()),
        Some(d) => d,
    };
    // The terminating "zero" remainder of the chain scales with the input's
    // conditioning; escalate the cutoff when counting comes out structurally
    // inconsistent, then fall back to a deterministically perturbed chain.
    let mut last_err = None;
    for zero_thr in [1e-11, 3e-9, 1e-7] {
        match isolate_attempt(p, cluster_tol, deg, zero_thr) {
            Ok(rs) => return Ok(rs),
            Err(e) => last_err = Some(e),
        }
    }
    let jitter: Vec<f64> = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let t = ((i as u64).wrapping_mul(0x9e3779b97f4a7c15) >> 40) as f64;
            c * (1.0 + (t / (1u64 << 24) as f64 - 0.5) * 1e-13)
        })
        .collect();
    let pp = RealPolynomial::new(jitter);
    isolate_attempt(&pp, cluster_tol, deg, 1e-11).map_err(|e| match last_err {
        Some(first) => first,
        None => e,
    })
}

fn isolate_attempt(
    p: &RealPolynomial,
    cluster_tol: f64,
    deg: usize,
    zero_thr: f64,
) -> Result<RootSet, PolyError> {
    let chain = SturmChain::with_zero_threshold(p, zero_thr)?;
    let bound = cauchy_bound(p);
    let total = chain.count_in(-bound, bound);
    if total < 0 || total as usize > deg {
        return Err(PolyError::DegenerateSturmChain);
    }

    // Isolate distinct roots by recursive bisection on Sturm counts.
    let mut stack = vec![(-bound, bound, total as usize)];
    let mut leaves: Vec<Leaf> = Vec::new();
    while let Some((a, b, c)) = stack.pop() {
        if c == 0 {
            continue;
        }
        let floor = 1e-13 * a.abs().max(b.abs()).max(1.0);
        if c == 1 || b - a < floor {
            leaves.push(Leaf {
                lo: a,
                hi: b,
                count: c,
                root: 0.5 * (a + b),
            });
            continue;
        }
        let mid = chain.split_point(a, b);
        let cl = chain.count_in(a, mid);
        if cl < 0 || cl as usize > c {
            return Err(PolyError::DegenerateSturmChain);
        }
        let cl = cl as usize;
        stack.push((a, mid, cl));
        stack.push((mid, b, c - cl));
    }

    let deriv = p.derivative();
    for leaf in &mut leaves {
        refine_leaf(&chain, leaf, cluster_tol);
        if leaf.count == 1 {
            newton_polish(p, &deriv, leaf);
        }
    }
    leaves.sort_by(|x, y| x.root.partial_cmp(&y.root).unwrap());

    // Merge clusters, then assign multiplicities.
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for leaf in &leaves {
        match merged.last_mut() {
            Some((x, m)) if (leaf.root - *x).abs() <= cluster_tol * x.abs().max(1.0) => {
                let total = *m + leaf.count;
                *x = (*x * *m as f64 + leaf.root * leaf.count as f64) / total as f64;
                *m = total;
            }
            _ => merged.push((leaf.root, leaf.count)),
        }
    }

    // Distinct Sturm counts see each root once; raise to true multiplicity by
    // comparing Taylor terms at the root (multiple roots live inside merged
    // clusters or flat leaves). A multiplicity-m root sits in an
    // eps^(1/m)-wide noise band of p but is a simple root of the (m-1)-th
    // derivative, so refine there and re-read the multiplicity at the
    // refined point until it settles.
    let derivs = derivative_tower(p, deg);
    let mut est: Vec<(f64, usize)> = Vec::with_capacity(merged.len());
    for &(x, c) in &merged {
        if c >= 2 {
            est.push((polish_on_derivative(&derivs, x, c), c));
            continue;
        }
        let mut x = x;
        let mut m = multiplicity_scan(&derivs, x, deg);
        for _ in 0..2 {
            if m < 2 {
                break;
            }
            let xp = polish_on_derivative(&derivs, x, m);
            let mp = multiplicity_scan(&derivs, xp, deg);
            x = xp;
            if mp == m {
                break;
            }
            m = mp;
        }
        est.push((x, m));
    }

    // Chain noise around a multiple root can fabricate nearby "distinct"
    // roots; they all settle onto the same derivative zero above, so merge
    // entries that polished to coincident points, keeping the larger
    // multiplicity reading.
    est.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut deduped: Vec<(f64, usize)> = Vec::with_capacity(est.len());
    for (x, m) in est {
        match deduped.last_mut() {
            Some((px, pm)) if (x - *px).abs() <= 1e-8 * px.abs().max(1.0) => {
                *pm = (*pm).max(m);
            }
            _ => deduped.push((x, m)),
        }
    }
    let mut est = deduped;

    // Downgrade overcounted multiplicities (a simple root close to another
    // can make the dominance test read as multiple).
    let mut sum: usize = est.iter().map(|&(_, m)| m).sum();
    while sum > deg {
        let mut best: Option<(usize, f64)> = None;
        for (i, &(x, m)) in est.iter().enumerate() {
            if m >= 2 {
                let ratio = scan_margin(&derivs, x, m - 1);
                if best.map(|(_, r)| ratio > r).unwrap_or(true) {
                    best = Some((i, ratio));
                }
            }
        }
        match best {
            Some((i, _)) => {
                est[i].1 -= 1;
                sum -= 1;
            }
            None => break,
        }
    }
    if sum != deg {
        return Err(PolyError::NonRealRootsDetected {
            degree: deg,
            found: sum,
        });
    }
    Ok(RootSet::from_parts(est))
}

/// Bisection plus Newton on the (m-1)-th derivative around `x`. The initial
/// estimate can be off by the multiplicity-m noise band ~eps^(1/m), so the
/// bracket starts there and widens until the derivative changes sign.
fn polish_on_derivative(derivs: &[RealPolynomial], x: f64, m: usize) -> f64 {
    let d = &derivs[m - 1];
    let dd = &derivs[m];
    let unit = x.abs().max(1.0);
    let mut radius = 8.0 * f64::EPSILON.powf(1.0 / m as f64) * unit;
    let cap = 4e-3 * unit;
    let (mut a, mut b);
    loop {
        a = x - radius;
        b = x + radius;
        let (va, vb) = (evaluate(d, a), evaluate(d, b));
        if va == 0.0 {
            return a;
        }
        if vb == 0.0 {
            return b;
        }
        if va * vb < 0.0 {
            break;
        }
        radius *= 2.0;
        if radius > cap {
            return x;
        }
    }
    let mut va = evaluate(d, a);
    for _ in 0..80 {
        if b - a <= 1e-16 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        let vm = evaluate(d, mid);
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
    let mut y = 0.5 * (a + b);
    for _ in 0..6 {
        let den = evaluate(dd, y);
        if den == 0.0 {
            break;
        }
        let next = y - comp_horner(&d.coeffs, y) / den;
        if next < a || next > b {
            break;
        }
        y = next;
    }
    y
}

/// Shrink a leaf bracket around its roots by count-preserving bisection.
fn refine_leaf(chain: &SturmChain, leaf: &mut Leaf, cluster_tol: f64) {
    let mut a = leaf.lo;
    let mut b = leaf.hi;
    let target = |a: f64, b: f64| 0.5 * cluster_tol.min(1e-12) * a.abs().max(b.abs()).max(1.0);
    for _ in 0..200 {
        if b - a <= target(a, b) {
            break;
        }
        let mid = chain.split_point(a, b);
        let cl = chain.count_in(a, mid);
        if cl >= 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    leaf.lo = a;
    leaf.hi = b;
    leaf.root = 0.5 * (a + b);
}

fn newton_polish(p: &RealPolynomial, deriv: &RealPolynomial, leaf: &mut Leaf) {
    // The refined bracket can sit a full noise band away from the true root
    // on ill-conditioned inputs; let Newton move within a neighborhood that
    // is still far inside the isolation bounds.
    let span = (leaf.hi - leaf.lo).max(1e-5 * leaf.root.abs().max(1.0));
    let lo = leaf.lo - 2.0 * span;
    let hi = leaf.hi + 2.0 * span;
    let mut x = leaf.root;
    let mut best = x;
    let mut best_res = comp_horner(&p.coeffs, x).abs();
    for _ in 0..12 {
        let d = evaluate(deriv, x);
        if d == 0.0 {
            break;
        }
        let step = comp_horner(&p.coeffs, x) / d;
        x -= step;
        if !(lo..=hi).contains(&x) {
            break;
        }
        let res = comp_horner(&p.coeffs, x).abs();
        if res < best_res {
            best_res = res;
            best = x;
        }
        if step.abs() <= 1e-17 * x.abs().max(1.0) {
            break;
        }
    }
    leaf.root = best;
}

fn derivative_tower(p: &RealPolynomial, deg: usize) -> Vec<RealPolynomial> {
    let mut out = Vec::with_capacity(deg + 1);
    out.push(p.clone());
    for k in 1..=deg {
        let next = out[k - 1].derivative();
        out.push(next);
    }
    out
}

/// Taylor magnitudes `|p^(k)(x)| δ^k / k!` at the probe offset δ; the index
/// of the dominant term is the multiplicity (lower-order terms vanish at an
/// m-fold root, higher-order ones are suppressed by δ over the root
/// separation).
fn taylor_terms(derivs: &[RealPolynomial], x: f64, deg: usize) -> Vec<f64> {
    let delta = MULT_PROBE_REL * x.abs().max(1.0);
    let mut terms = Vec::with_capacity(deg);
    let mut weight = 1.0;
    for k in 1..=deg {
        weight *= delta / k as f64;
        terms.push(evaluate(&derivs[k], x).abs() * weight);
    }
    terms
}

fn multiplicity_scan(derivs: &[RealPolynomial], x: f64, deg: usize) -> usize {
    let terms = taylor_terms(derivs, x, deg);
    let mut best = 1;
    for (i, &t) in terms.iter().enumerate() {
        if t > terms[best - 1] {
            best = i + 1;
        }
    }
    best
}

/// How close the claimed multiplicity is to being beaten by the next lower
/// Taylor term; large values mean the multiplicity estimate is marginal.
fn scan_margin(derivs: &[RealPolynomial], x: f64, k: usize) -> f64 {
    let deg = derivs.len() - 1;
    let terms = taylor_terms(derivs, x, deg);
    if terms[k] == 0.0 {
        f64::INFINITY
    } else {
        terms[k - 1] / terms[k]
    }
}

/// Number of distinct real roots of `p` in `(a, b]`.
pub fn sturm_count_interval(p: &RealPolynomial, a: f64, b: f64) -> Result<usize, PolyError> {
    let chain = SturmChain::new(p)?;
    let c = chain.count_in(a, b);
    if c < 0 {
        Err(PolyError::DegenerateSturmChain)
    } else {
        Ok(c as usize)
    }
}

/// Builds the monic-times-scale polynomial with the given roots (test helper
/// for oracle-style checks; exposed for integration tests).
pub fn from_roots(scale: f64, roots: &[(f64, usize)]) -> RealPolynomial {
    let mut coeffs = vec![scale];
    for &(r, m) in roots {
        for _ in 0..m {
            // multiply by (x - r)
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
    }
    RealPolynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[f64]) -> RealPolynomial {
        RealPolynomial::new(coeffs.to_vec())
    }

    #[test]
    fn evaluate_examples() {
        // x^2 - 4x at 2
        assert_eq!(evaluate(&poly(&[0.0, -4.0, 1.0]), 2.0), -4.0);
        // -(s-1)x^2 + 2(s-2)x with s = 0, i.e. x^2 - 4x, at 0
        let s = 0.0;
        let p = poly(&[0.0, 2.0 * (s - 2.0), -(s - 1.0)]);
        assert_eq!(evaluate(&p, 0.0), 0.0);
        assert_eq!(evaluate(&RealPolynomial::zero(), 7.0), 0.0);
    }

    #[test]
    fn trim_is_idempotent_and_zero_is_empty() {
        let p = poly(&[1.0, 2.0, 1e-14]);
        assert_eq!(p.degree(), Some(1));
        let q = RealPolynomial::new(p.coeffs().to_vec());
        assert_eq!(p, q);
        assert!(poly(&[0.0, 0.0]).is_zero());
    }

    #[test]
    fn affine_combine_examples() {
        let one = RealPolynomial::constant(1.0);
        // 1*1 + (-1)*1 = 0
        assert!(affine_combine(1.0, &one, -1.0, &one, None).is_zero());
        // (2 - x)*1 - 1*0 = 2 - x
        let step = affine_combine(2.0, &one, -1.0, &RealPolynomial::zero(), Some(1.0));
        assert_eq!(step.coeffs(), &[2.0, -1.0]);
        // (2 - x)*(1 - x) - 1*1 = x^2 - 3x + 1
        let p = poly(&[1.0, -1.0]);
        let r = affine_combine(2.0, &p, -1.0, &one, Some(1.0));
        assert_eq!(r.coeffs(), &[1.0, -3.0, 1.0]);
    }

    #[test]
    fn isolate_factored_quadratics() {
        let r = isolate_real_roots(&poly(&[0.0, -4.0, 1.0]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.roots().len(), 2);
        assert!((r.roots()[0].0 - 0.0).abs() < 1e-10 && r.roots()[0].1 == 1);
        assert!((r.roots()[1].0 - 4.0).abs() < 1e-10 && r.roots()[1].1 == 1);

        // (x - 2)^2 = x^2 - 4x + 4
        let r = isolate_real_roots(&poly(&[4.0, -4.0, 1.0]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.roots().len(), 1);
        assert!((r.roots()[0].0 - 2.0).abs() < 1e-12);
        assert_eq!(r.roots()[0].1, 2);

        // -x^2 + 4x - 2 has roots 2 +- sqrt(2)
        let r = isolate_real_roots(&poly(&[-2.0, 4.0, -1.0]), DEFAULT_CLUSTER_TOL).unwrap();
        let sqrt2 = 2.0f64.sqrt();
        assert!((r.roots()[0].0 - (2.0 - sqrt2)).abs() < 1e-10);
        assert!((r.roots()[1].0 - (2.0 + sqrt2)).abs() < 1e-10);
    }

    #[test]
    fn non_real_roots_error() {
        let err = isolate_real_roots(&poly(&[1.0, 0.0, 1.0]), DEFAULT_CLUSTER_TOL).unwrap_err();
        assert_eq!(
            err,
            PolyError::NonRealRootsDetected {
                degree: 2,
                found: 0
            }
        );
    }

    #[test]
    fn degenerate_chain_on_non_finite_input() {
        let p = RealPolynomial {
            coeffs: vec![0.0, 1.0, f64::NAN],
        };
        assert_eq!(
            SturmChain::new(&p).unwrap_err(),
            PolyError::DegenerateSturmChain
        );
    }

    #[test]
    fn mixed_multiplicities_recovered() {
        // (x + 1)^3 (x - 0.5) (x - 3)^2
        let p = from_roots(1.0, &[(-1.0, 3), (0.5, 1), (3.0, 2)]);
        let r = isolate_real_roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(
            r.roots().iter().map(|&(_, m)| m).collect::<Vec<_>>(),
            vec![3, 1, 2]
        );
        for (&(x, _), want) in r.roots().iter().zip([-1.0, 0.5, 3.0]) {
            assert!((x - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = poly(&[0.3, -1.2, 0.7, 2.0, -0.4]);
        let d = p.derivative();
        let h = 1e-6;
        for &x in &[-1.7, -0.3, 0.0, 0.9, 2.4] {
            let fd = (evaluate(&p, x + h) - evaluate(&p, x - h)) / (2.0 * h);
            let dv = evaluate(&d, x);
            assert!((fd - dv).abs() <= 1e-4 * dv.abs().max(1.0));
        }
    }
}
