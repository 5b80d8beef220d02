//! Concrete entire functions of exponential or spherical type.
//!
//! Every model evaluates pointwise on `R^m` and knows its type `σ`, its
//! polynomial decay rate (when it has one) and, for the sinc families, an
//! explicit envelope `|f(x)| ≤ C |x − x₀|^{−γ}` used for tail bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::{fit_tensor_cheb, TensorChebSeries};
use crate::grid::{for_each_tensor_point, midpoints};
use crate::nets::Window;
use crate::{Error, Lq, Result};

/// Below this magnitude `sin t / t` switches to its degree-6 Taylor polynomial.
pub const SINC_TAYLOR_THRESHOLD: f64 = 1e-4;
/// Default relative tolerance of the Bernstein-type checks.
pub const DEFAULT_TOLERANCE: f64 = 0.01;

/// `sin t / t`.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < SINC_TAYLOR_THRESHOLD {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0))
    } else {
        t.sin() / t
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `(sin(σ|x|/γ) / (|x|/γ))^γ` on `R^m`, of spherical type `σ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SincPower {
    pub sigma: f64,
    pub gamma: u32,
    pub m: usize,
}

impl SincPower {
    pub fn new(sigma: f64, gamma: u32, m: usize) -> Result<Self> {
        if !(sigma > 0.0) || gamma == 0 || m == 0 {
            return Err(Error::Invalid("sinc power needs sigma > 0, gamma >= 1, m >= 1".into()));
        }
        Ok(SincPower { sigma, gamma, m })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let g = f64::from(self.gamma);
        (self.sigma * sinc(self.sigma * norm2(x) / g)).powi(self.gamma as i32)
    }
}

/// `sin(σ|x−y|) / |x−y|` on `R^m`, of spherical type `σ`, with sup `σ` at `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedSinc {
    pub sigma: f64,
    pub shift: Vec<f64>,
}

impl ShiftedSinc {
    pub fn new(sigma: f64, shift: Vec<f64>) -> Result<Self> {
        if !(sigma > 0.0) || shift.is_empty() || shift.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("shifted sinc needs sigma > 0 and a finite shift".into()));
        }
        Ok(ShiftedSinc { sigma, shift })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = x
            .iter()
            .zip(&self.shift)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        self.sigma * sinc(self.sigma * r)
    }
}

/// `Σ_{0 ≤ k_j ≤ N} c_k e^{(k, x)}`, stored densely in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolynomial {
    m: usize,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl ExpPolynomial {
    pub fn from_dense(m: usize, degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        let count = (degree + 1)
            .checked_pow(m as u32)
            .ok_or_else(|| Error::Invalid("coefficient array too large".into()))?;
        if coeffs.len() != count {
            return Err(Error::Invalid(format!("expected {count} coefficients, got {}", coeffs.len())));
        }
        Ok(ExpPolynomial { m, degree, coeffs })
    }

    /// The constant function `c`.
    pub fn constant(m: usize, c: Complex64) -> Self {
        ExpPolynomial { m, degree: 0, coeffs: vec![c] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut k = vec![0; self.m];
        for j in (0..self.m).rev() {
            k[j] = idx % (self.degree + 1);
            idx /= self.degree + 1;
        }
        k
    }

    /// True when every coefficient beyond the constant term vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.norm() == 0.0)
    }

    /// `Σ |c_k|`.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let np = self.degree + 1;
        let mut cur = self.coeffs.clone();
        for j in (0..self.m).rev() {
            let e = x[j].exp();
            let mut next = Vec::with_capacity(cur.len() / np);
            for blk in cur.chunks_exact(np) {
                // Horner in y = e^{x_j}.
                let mut acc = Complex64::new(0.0, 0.0);
                for c in blk.iter().rev() {
                    acc = acc * e + c;
                }
                next.push(acc);
            }
            cur = next;
        }
        cur[0]
    }
}

#[derive(Serialize, Deserialize)]
struct ExpPolynomialRepr {
    m: usize,
    degree: usize,
    coeffs: Vec<Vec<f64>>,
}

impl Serialize for ExpPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(idx, c)| {
                let mut row: Vec<f64> = self.multi_index(idx).into_iter().map(|k| k as f64).collect();
                row.push(c.re);
                row.push(c.im);
                row
            })
            .collect();
        ExpPolynomialRepr { m: self.m, degree: self.degree, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ExpPolynomialRepr::deserialize(d)?;
        let count = (r.degree + 1).pow(r.m as u32);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); count];
        for row in r.coeffs {
            if row.len() != r.m + 2 {
                return Err(D::Error::custom("coefficient row must hold m indices, re, im"));
            }
            let mut idx = 0;
            for &v in &row[..r.m] {
                let k = v as usize;
                if k > r.degree || k as f64 != v {
                    return Err(D::Error::custom("multi-index out of range"));
                }
                idx = idx * (r.degree + 1) + k;
            }
            coeffs[idx] = Complex64::new(row[r.m], row[r.m + 1]);
        }
        ExpPolynomial::from_dense(r.m, r.degree, coeffs).map_err(D::Error::custom)
    }
}

/// `f_n(x) = P_{2n}(x) H_{β,n}(x)` with `H_{β,n}(x) = [sin(β|x|/n)/(β|x|/n)]^{e}`,
/// `e = 2n + 2⌈m/(2q)⌉ + 2`, and `β = 2τ e^{(1+2ε)/τ} / w*`, `w* = 2/(σ√m)`.
///
/// `P_{2n}` is a tensor Chebyshev partial sum truncated to total degree `2n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MollifiedSeries {
    pub base: TensorChebSeries,
    pub n: usize,
    pub beta: f64,
    pub q: Lq,
    pub m: usize,
    pub sigma: f64,
    pub tau: f64,
    pub epsilon: f64,
}

/// `w* = 2/(σ√m)`, the width of the octahedron `{‖x‖₁ ≤ 1/σ}` in `R^m`.
pub fn octahedron_width(sigma: f64, m: usize) -> f64 {
    2.0 / (sigma * (m as f64).sqrt())
}

/// `β = 2τ e^{(1+2ε)/τ} / w*`.
pub fn mollifier_beta(tau: f64, epsilon: f64, sigma: f64, m: usize) -> f64 {
    2.0 * tau * ((1.0 + 2.0 * epsilon) / tau).exp() / octahedron_width(sigma, m)
}

/// `⌈m/(2q)⌉`, zero for `q = ∞`.
fn ceil_m_over_2q(m: usize, q: Lq) -> usize {
    match q {
        Lq::Infinity => 0,
        Lq::Finite(q) => (m as f64 / (2.0 * q)).ceil() as usize,
    }
}

impl MollifiedSeries {
    /// Wraps a base series of degree `2n`, truncating it to total degree `2n`.
    pub fn new(mut base: TensorChebSeries, n: usize, sigma: f64, tau: f64, epsilon: f64, q: Lq) -> Result<Self> {
        if n == 0 || base.degree() != 2 * n {
            return Err(Error::Invalid(format!(
                "base series must have degree 2n = {}, got {}",
                2 * n,
                base.degree()
            )));
        }
        if !(sigma > 0.0 && tau > 0.0 && epsilon > 0.0) {
            return Err(Error::Invalid("sigma, tau and epsilon must be positive".into()));
        }
        base.truncate_total_degree(2 * n);
        let m = base.dim();
        Ok(MollifiedSeries {
            beta: mollifier_beta(tau, epsilon, sigma, m),
            base,
            n,
            q,
            m,
            sigma,
            tau,
            epsilon,
        })
    }

    /// Fits `P_{2n}` to `f` on the cube `[−b, b]^m`, `b = 2n/(τσ)`, which
    /// contains the octahedron `(2n/τ) O_{1/σ}`.
    pub fn from_function(
        f: impl Fn(&[f64]) -> Complex64,
        m: usize,
        n: usize,
        sigma: f64,
        tau: f64,
        epsilon: f64,
        q: Lq,
    ) -> Result<Self> {
        let b = 2.0 * n as f64 / (tau * sigma);
        let k = 4 * (2 * n + 1);
        let base = fit_tensor_cheb(f, b, 2 * n, m, k)?;
        MollifiedSeries::new(base, n, sigma, tau, epsilon, q)
    }

    /// Exponent `2n + 2⌈m/(2q)⌉ + 2` of the mollifier.
    pub fn mollifier_exponent(&self) -> usize {
        2 * self.n + 2 * ceil_m_over_2q(self.m, self.q) + 2
    }

    /// `H_{β,n}(x)`.
    pub fn mollifier(&self, x: &[f64]) -> f64 {
        sinc(self.beta * norm2(x) / self.n as f64).powi(self.mollifier_exponent() as i32)
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.base.eval_unchecked(x) * self.mollifier(x)
    }

    /// Half-diameter `2n/(τσ)` of the octahedron `(2n/τ) O_{1/σ}` along an axis.
    pub fn octahedron_radius(&self) -> f64 {
        2.0 * self.n as f64 / (self.tau * self.sigma)
    }

    /// Calibrates the decay envelope from the sup of `P_{2n}` over the
    /// octahedron, sampled on a `points_per_axis^m` grid of its bounding cube.
    pub fn decay_envelope(&self, points_per_axis: usize) -> DecayEnvelope {
        let r = self.octahedron_radius();
        let axis = crate::grid::linspace(-r, r, points_per_axis.max(2));
        let axes = vec![axis; self.m];
        let mut sup: f64 = 0.0;
        for_each_tensor_point(&axes, |x| {
            if x.iter().map(|v| v.abs()).sum::<f64>() <= r {
                sup = sup.max(self.base.eval_unchecked(x).norm());
            }
        });
        let p = (2 * ceil_m_over_2q(self.m, self.q) + 2) as f64;
        let (n, tau, eps) = (self.n as f64, self.tau, self.epsilon);
        let ln_c = sup.ln() - 2.0 * n * (1.0 + eps) / tau - std::f64::consts::LN_2
            - p * (std::f64::consts::LN_2 + (1.0 + 2.0 * eps) / tau);
        DecayEnvelope {
            ln_constant: ln_c,
            base_sup: sup,
            exponent: self.m as f64 * self.q.recip() + 2.0,
            w_star: octahedron_width(self.sigma, self.m),
            n,
            tau,
            epsilon: eps,
            sigma: self.sigma,
        }
    }
}

/// Envelope `C e^{−2nε/τ} (w* n/(τ|x|))^{m/q+2}` for `|f_n|` outside the
/// octahedron `(2n/τ) O_{1/σ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub ln_constant: f64,
    pub base_sup: f64,
    pub exponent: f64,
    pub w_star: f64,
    pub n: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub sigma: f64,
}

/// Result of one decay comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl DecayEnvelope {
    /// `ln` of the envelope at `x`; `x` must lie strictly outside the octahedron.
    pub fn ln_bound(&self, x: &[f64]) -> Result<f64> {
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        let r = 2.0 * self.n / (self.tau * self.sigma);
        if !(l1 > r) {
            return Err(Error::Domain(format!("point with l1 norm {l1} lies inside the octahedron of radius {r}")));
        }
        let e = norm2(x);
        Ok(self.ln_constant - 2.0 * self.n * self.epsilon / self.tau
            + self.exponent * (self.w_star * self.n / (self.tau * e)).ln())
    }

    pub fn check(&self, ms: &MollifiedSeries, x: &[f64]) -> Result<DecayCheck> {
        let ln_b = self.ln_bound(x)?;
        let value = ms.eval(x).norm();
        let bound = ln_b.exp();
        Ok(DecayCheck {
            value,
            bound,
            holds: value.ln() <= ln_b || value == 0.0,
        })
    }
}

/// Checks `|f_n(x)|` against the decay envelope calibrated on a 65-point grid.
pub fn decay_check_mollified(ms: &MollifiedSeries, tau: f64, epsilon: f64, x: &[f64]) -> Result<bool> {
    if (tau - ms.tau).abs() > 1e-12 * tau || (epsilon - ms.epsilon).abs() > 1e-12 * epsilon {
        return Err(Error::Invalid("tau and epsilon must match the mollified series".into()));
    }
    Ok(ms.decay_envelope(65).check(ms, x)?.holds)
}

/// A tagged family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EfetModel {
    SincPower(SincPower),
    ShiftedSinc(ShiftedSinc),
    ExpPolynomial(ExpPolynomial),
    Mollified(MollifiedSeries),
    /// A constant multiple of another model.
    Scaled { factor: f64, inner: Box<EfetModel> },
}

/// Kind of growth bound defining the type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeKind {
    Spherical,
    /// `|f(w)| ≤ C e^{σ Σ|w_j|}`, `σ` per axis.
    Exponential,
}

/// Type of a model, with the size of the `O(1/n)` part where one applies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeInfo {
    pub sigma: f64,
    pub kind: TypeKind,
    pub correction: Option<f64>,
}

impl EfetModel {
    /// `sin(πx)/(πx)` in one variable.
    pub fn normalized_sinc(sigma: f64) -> Result<Self> {
        Ok(EfetModel::Scaled {
            factor: 1.0 / sigma,
            inner: Box::new(EfetModel::SincPower(SincPower::new(sigma, 1, 1)?)),
        })
    }

    pub fn scaled(self, factor: f64) -> Self {
        EfetModel::Scaled { factor, inner: Box::new(self) }
    }

    pub fn dim(&self) -> usize {
        match self {
            EfetModel::SincPower(s) => s.m,
            EfetModel::ShiftedSinc(s) => s.shift.len(),
            EfetModel::ExpPolynomial(e) => e.dim(),
            EfetModel::Mollified(ms) => ms.m,
            EfetModel::Scaled { inner, .. } => inner.dim(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        match self {
            EfetModel::SincPower(s) => Complex64::new(s.eval(x), 0.0),
            EfetModel::ShiftedSinc(s) => Complex64::new(s.eval(x), 0.0),
            EfetModel::ExpPolynomial(e) => e.eval(x),
            EfetModel::Mollified(ms) => ms.eval(x),
            EfetModel::Scaled { factor, inner } => inner.evaluate(x) * *factor,
        }
    }

    pub fn abs_at(&self, x: &[f64]) -> f64 {
        self.evaluate(x).norm()
    }

    pub fn efet_type(&self) -> TypeInfo {
        match self {
            EfetModel::SincPower(s) => TypeInfo { sigma: s.sigma, kind: TypeKind::Spherical, correction: None },
            EfetModel::ShiftedSinc(s) => TypeInfo { sigma: s.sigma, kind: TypeKind::Spherical, correction: None },
            EfetModel::ExpPolynomial(e) => TypeInfo {
                sigma: e.degree() as f64,
                kind: TypeKind::Exponential,
                correction: None,
            },
            EfetModel::Mollified(ms) => {
                let extra = (ceil_m_over_2q(ms.m, ms.q) + 1) as f64 / ms.n as f64;
                TypeInfo {
                    sigma: 2.0 * ms.beta * (1.0 + extra),
                    kind: TypeKind::Spherical,
                    correction: Some(2.0 * ms.beta * extra),
                }
            }
            EfetModel::Scaled { inner, .. } => inner.efet_type(),
        }
    }

    /// Exponent `p` with `|f(x)| = O(|x|^{−p})`; `Some(0)` for bounded models
    /// without decay and `None` for unbounded ones.
    pub fn decay_exponent(&self) -> Option<f64> {
        match self {
            EfetModel::SincPower(s) => Some(f64::from(s.gamma)),
            EfetModel::ShiftedSinc(_) => Some(1.0),
            EfetModel::ExpPolynomial(e) => e.is_constant().then_some(0.0),
            EfetModel::Mollified(ms) => Some((2 * ceil_m_over_2q(ms.m, ms.q) + 2) as f64),
            EfetModel::Scaled { inner, .. } => inner.decay_exponent(),
        }
    }

    /// Errors with "norm diverges" unless the model lies in `L_q(R^m)`.
    pub fn check_integrable(&self, q: Lq) -> Result<()> {
        let m = self.dim() as f64;
        let ok = match (self.decay_exponent(), q) {
            (None, _) => false,
            (Some(_), Lq::Infinity) => true,
            (Some(p), Lq::Finite(q)) => p * q > m,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NormDiverges(format!("model is not in L_{q} of R^{}", self.dim())))
        }
    }

    /// Envelope `|f(x)| ≤ c |x − center|^{−p}` as `(center, c, p)`.
    pub fn decay_envelope(&self) -> Option<(Vec<f64>, f64, f64)> {
        match self {
            EfetModel::SincPower(s) => {
                let g = f64::from(s.gamma);
                Some((vec![0.0; s.m], g.powf(g), g))
            }
            EfetModel::ShiftedSinc(s) => Some((s.shift.clone(), 1.0, 1.0)),
            EfetModel::Scaled { factor, inner } => inner
                .decay_envelope()
                .map(|(c, k, p)| (c, k * factor.abs(), p)),
            _ => None,
        }
    }
}

/// Finite-difference step for a derivative of total order `order`.
pub fn fd_step(sigma: f64, order: u32) -> f64 {
    if order <= 1 {
        1e-4 / sigma
    } else {
        10f64.powi(order as i32 - 5) / sigma
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `D^k f(x)` by tensor central differences of spacing `h`.
pub fn fd_derivative(model: &EfetModel, k: &[u32], x: &[f64], h: f64) -> Complex64 {
    let m = k.len();
    let mut idx = vec![0u32; m];
    let mut y = vec![0.0; m];
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let mut w = 1.0;
        for j in 0..m {
            let i = idx[j];
            w *= binomial(k[j], i) * if i % 2 == 1 { -1.0 } else { 1.0 };
            y[j] = x[j] + (0.5 * f64::from(k[j]) - f64::from(i)) * h;
        }
        acc += model.evaluate(&y) * w;
        let mut j = m;
        loop {
            if j == 0 {
                let order: u32 = k.iter().sum();
                return acc / h.powi(order as i32);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] <= k[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Outcome of a Bernstein-type ratio check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub ratio: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub holds: bool,
}

fn window_axes(window: &Window, resolution: usize) -> Vec<Vec<f64>> {
    window
        .center
        .iter()
        .map(|&c| midpoints(c - window.half_side, c + window.half_side, resolution))
        .collect()
}

fn accumulate(acc: &mut f64, v: f64, q: Lq) {
    match q {
        Lq::Infinity => *acc = acc.max(v),
        Lq::Finite(q) => *acc += v.powf(q),
    }
}

fn finish(acc: f64, q: Lq, cell: f64) -> f64 {
    match q {
        Lq::Infinity => acc,
        Lq::Finite(q) => (acc * cell).powf(1.0 / q),
    }
}

/// `‖D^k f‖_q / ‖f‖_q` over the window (midpoint grid of `resolution` cells
/// per axis), compared with `σ^{⟨k⟩}(1 + tolerance)`.
pub fn bernstein_check(
    model: &EfetModel,
    k: &[u32],
    q: Lq,
    window: &Window,
    resolution: usize,
    tolerance: f64,
) -> Result<RatioCheck> {
    if k.len() != model.dim() || window.dim() != model.dim() {
        return Err(Error::Invalid("multi-index, window and model dimensions differ".into()));
    }
    model.check_integrable(q)?;
    let sigma = model.efet_type().sigma;
    let order: u32 = k.iter().sum();
    let h = fd_step(sigma, order);
    let (mut num, mut den) = (0.0, 0.0);
    for_each_tensor_point(&window_axes(window, resolution), |x| {
        accumulate(&mut num, fd_derivative(model, k, x, h).norm(), q);
        accumulate(&mut den, model.abs_at(x), q);
    });
    let cell = (2.0 * window.half_side / resolution as f64).powi(model.dim() as i32);
    let ratio = if den == 0.0 { 0.0 } else { finish(num, q, cell) / finish(den, q, cell) };
    let bound = sigma.powi(order as i32);
    Ok(RatioCheck {
        ratio,
        bound,
        tolerance,
        holds: ratio <= bound * (1.0 + tolerance),
    })
}

/// `sup Σ_j |∂f/∂x_j| / sup |f|` over the window grid, compared with `mσ`.
pub fn gradient_l1_check(model: &EfetModel, window: &Window, resolution: usize, tolerance: f64) -> Result<RatioCheck> {
    let m = model.dim();
    if window.dim() != m {
        return Err(Error::Invalid("window and model dimensions differ".into()));
    }
    model.check_integrable(Lq::Infinity)?;
    let sigma = model.efet_type().sigma;
    let h = fd_step(sigma, 1);
    let (mut num, mut den) = (0.0f64, 0.0f64);
    let mut k = vec![0u32; m];
    for_each_tensor_point(&window_axes(window, resolution), |x| {
        let mut s = 0.0;
        for j in 0..m {
            k[j] = 1;
            s += fd_derivative(model, &k, x, h).norm();
            k[j] = 0;
        }
        num = num.max(s);
        den = den.max(model.abs_at(x));
    });
    let ratio = if den == 0.0 { 0.0 } else { num / den };
    let bound = m as f64 * sigma;
    Ok(RatioCheck {
        ratio,
        bound,
        tolerance,
        holds: ratio <= bound * (1.0 + tolerance),
    })
}
