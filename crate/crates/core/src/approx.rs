//! Tensor Fourier-Chebyshev expansions on cubes `[−b, b]^m`, the a priori
//! coefficient-decay and truncation-error bounds for entire functions, and the
//! convergence-rate experiment for `e^{σw}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{gamma0, psi, SymmetricCompact};
use crate::grid::{gauss_chebyshev_nodes, linspace, sup_on_cube, SupEstimate};
use crate::{Error, Result};

/// Largest supported dimension of a tensor series.
pub const MAX_DIM: usize = 3;
/// Largest supported degree per axis.
pub const MAX_DEGREE: usize = 64;
/// Grid size of the rate experiment.
pub const RATE_GRID_POINTS: usize = 4096;

/// `Σ_k c_k Π_j T_{k_j}(x_j / b)` over `0 ≤ k_j ≤ n`, stored densely in
/// row-major order of the multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorChebSeries {
    m: usize,
    n: usize,
    b: f64,
    coeffs: Vec<Complex64>,
}

impl TensorChebSeries {
    pub fn zeros(m: usize, n: usize, b: f64) -> Result<Self> {
        check_shape(m, n, b)?;
        Ok(TensorChebSeries {
            m,
            n,
            b,
            coeffs: vec![Complex64::new(0.0, 0.0); (n + 1).pow(m as u32)],
        })
    }

    pub fn from_dense(m: usize, n: usize, b: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        check_shape(m, n, b)?;
        if coeffs.len() != (n + 1).pow(m as u32) {
            return Err(Error::Invalid(format!(
                "expected {} coefficients, got {}",
                (n + 1).pow(m as u32),
                coeffs.len()
            )));
        }
        Ok(TensorChebSeries { m, n, b, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn half_side(&self) -> f64 {
        self.b
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Position of multi-index `k` in the dense array.
    pub fn index(&self, k: &[usize]) -> usize {
        k.iter().fold(0, |acc, &kj| acc * (self.n + 1) + kj)
    }

    /// Multi-index stored at position `idx`.
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut k = vec![0; self.m];
        for j in (0..self.m).rev() {
            k[j] = idx % (self.n + 1);
            idx /= self.n + 1;
        }
        k
    }

    pub fn get(&self, k: &[usize]) -> Complex64 {
        self.coeffs[self.index(k)]
    }

    pub fn set(&mut self, k: &[usize], v: Complex64) {
        let i = self.index(k);
        self.coeffs[i] = v;
    }

    /// Zeroes every coefficient with `⟨k⟩ > max_total`.
    pub fn truncate_total_degree(&mut self, max_total: usize) {
        for idx in 0..self.coeffs.len() {
            if self.multi_index(idx).iter().sum::<usize>() > max_total {
                self.coeffs[idx] = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Evaluates the series at `x`, which must lie in the closed cube.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.m {
            return Err(Error::Invalid(format!("point has {} coordinates, expected {}", x.len(), self.m)));
        }
        if let Some(xj) = x.iter().find(|xj| !(xj.abs() <= self.b * (1.0 + 1e-12))) {
            return Err(Error::Domain(format!("coordinate {xj} outside [-{}, {}]", self.b, self.b)));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluates the polynomial anywhere in `R^m` by nested Clenshaw sums,
    /// innermost over the last axis.
    pub fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        let np = self.n + 1;
        let mut cur: Vec<Complex64> = self.coeffs.clone();
        for j in (0..self.m).rev() {
            let u = x[j] / self.b;
            let blocks = cur.len() / np;
            let mut next = Vec::with_capacity(blocks);
            for blk in cur.chunks_exact(np) {
                next.push(clenshaw(blk, u));
            }
            cur = next;
            debug_assert_eq!(cur.len(), blocks);
        }
        cur[0]
    }
}

fn check_shape(m: usize, n: usize, b: f64) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        return Err(Error::Invalid(format!("dimension must lie in 1..={MAX_DIM}, got {m}")));
    }
    if n > MAX_DEGREE {
        return Err(Error::Invalid(format!("degree must be at most {MAX_DEGREE}, got {n}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Invalid(format!("half-side must be positive, got {b}")));
    }
    Ok(())
}

/// `Σ_{k=0}^{n} c_k T_k(u)`.
pub fn clenshaw(c: &[Complex64], u: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let (mut b1, mut b2) = (zero, zero);
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + b1 * (2.0 * u) - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(zero) + b1 * u - b2
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    m: usize,
    n: usize,
    b: f64,
    coeffs: Vec<Vec<f64>>,
}

impl Serialize for TensorChebSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let mut row: Vec<f64> = self.multi_index(idx).into_iter().map(|k| k as f64).collect();
                row.push(c.re);
                row.push(c.im);
                row
            })
            .collect();
        SeriesRepr { m: self.m, n: self.n, b: self.b, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorChebSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRepr::deserialize(d)?;
        let mut s = TensorChebSeries::zeros(r.m, r.n, r.b).map_err(D::Error::custom)?;
        for row in r.coeffs {
            if row.len() != r.m + 2 {
                return Err(D::Error::custom("coefficient row must hold m indices, re, im"));
            }
            let k: Vec<usize> = row[..r.m].iter().map(|&v| v as usize).collect();
            if k.iter().zip(&row[..r.m]).any(|(&ki, &v)| ki > r.n || ki as f64 != v) {
                return Err(D::Error::custom("multi-index out of range"));
            }
            s.set(&k, Complex64::new(row[r.m], row[r.m + 1]));
        }
        Ok(s)
    }
}

/// Quadrature size `max(2(n+1), 4⌈σb⌉)` for functions of exponential type `σ`.
pub fn quad_points_rule(n: usize, sigma: f64, b: f64) -> usize {
    (2 * (n + 1)).max(4 * (sigma * b).ceil().max(0.0) as usize)
}

/// Fits the degree-`n` tensor Chebyshev partial sum of `f` on `[−b, b]^m` with
/// `k` Gauss-Chebyshev nodes per axis.
pub fn fit_tensor_cheb(
    f: impl Fn(&[f64]) -> Complex64,
    b: f64,
    n: usize,
    m: usize,
    k: usize,
) -> Result<TensorChebSeries> {
    check_shape(m, n, b)?;
    let required = 2 * (n + 1);
    if k < required {
        return Err(Error::UnderResolved { points: k, required });
    }
    let nodes = gauss_chebyshev_nodes(k, b);
    // Sample f on the tensor grid, row-major.
    let total = k.pow(m as u32);
    let mut data = Vec::with_capacity(total);
    let mut x = vec![0.0; m];
    for idx in 0..total {
        let mut r = idx;
        for j in (0..m).rev() {
            x[j] = nodes[r % k];
            r /= k;
        }
        data.push(f(&x));
    }
    // cos(a t_i) for a = 0..=n, i = 0..k.
    let cosines: Vec<f64> = (0..=n)
        .flat_map(|a| (0..k).map(move |i| (a as f64 * (2 * i + 1) as f64 * PI / (2 * k) as f64).cos()))
        .collect();
    let mut dims = vec![k; m];
    for axis in 0..m {
        let outer: usize = dims[..axis].iter().product();
        let inner: usize = dims[axis + 1..].iter().product();
        let mut next = vec![Complex64::new(0.0, 0.0); outer * (n + 1) * inner];
        for o in 0..outer {
            for a in 0..=n {
                let row = &cosines[a * k..(a + 1) * k];
                let dst = &mut next[(o * (n + 1) + a) * inner..(o * (n + 1) + a + 1) * inner];
                for (t, &c) in row.iter().enumerate() {
                    let src = &data[(o * k + t) * inner..(o * k + t + 1) * inner];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += s * c;
                    }
                }
            }
        }
        data = next;
        dims[axis] = n + 1;
    }
    let mut series = TensorChebSeries::from_dense(m, n, b, data)?;
    let scale = (2.0 / k as f64).powi(m as i32);
    for idx in 0..series.coeffs.len() {
        let zeros = series.multi_index(idx).iter().filter(|&&kj| kj == 0).count();
        series.coeffs[idx] *= scale / f64::from(1u32 << zeros);
    }
    Ok(series)
}

/// Sup of `|f − s|` over the cube of `s`, estimated on a Chebyshev-Lobatto
/// grid with local refinement.
pub fn sup_error(f: impl Fn(&[f64]) -> Complex64, s: &TensorChebSeries, nodes: usize) -> SupEstimate {
    let center = vec![0.0; s.dim()];
    sup_on_cube(|x| (f(x) - s.eval_unchecked(x)).norm(), &center, s.half_side(), nodes)
}

/// Growth data of an entire function `f` with `|f(w)| ≤ A e^{σ Σ|w_j|}`,
/// together with the half-side `b` of the expansion cube and the ellipse
/// parameter `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCertificate {
    pub a: f64,
    pub sigma: f64,
    pub b: f64,
    pub delta: f64,
    pub m: usize,
}

impl DecayCertificate {
    pub fn new(a: f64, sigma: f64, b: f64, delta: f64, m: usize) -> Result<Self> {
        if !(a > 0.0 && sigma > 0.0 && b > 0.0 && delta > 0.0) || m == 0 {
            return Err(Error::Invalid("certificate fields must be positive".into()));
        }
        Ok(DecayCertificate { a, sigma, b, delta, m })
    }
}

/// `ln( 2^m A e^{mσb√(1+δ²)} / (δ+√(1+δ²))^{⟨k⟩} )`, a bound on `|c_k|`.
///
/// With `sharp`, the factor `2^m` is replaced by `2^{m − r(k)}`, where `r(k)`
/// counts the zero components of `k`.
pub fn coeff_decay_bound(cert: &DecayCertificate, k: &[usize], sharp: bool) -> f64 {
    let m = cert.m as f64;
    let twos = if sharp {
        (cert.m - k.iter().filter(|&&kj| kj == 0).count()) as f64
    } else {
        m
    };
    let root = (1.0 + cert.delta * cert.delta).sqrt();
    let order: usize = k.iter().sum();
    twos * std::f64::consts::LN_2 + cert.a.ln() + m * cert.sigma * cert.b * root
        - order as f64 * (cert.delta + root).ln()
}

/// `ln( m 2^m (1 − 1/(τ+√(1+τ²)))^{−m} A e^{nψ(τ)} )`: truncation error bound of
/// the degree-`n` tensor partial sum of `f` with `|f(w)| ≤ A e^{σΣ|w_j|}`,
/// `σ = n/(mbτ)`, on `[−b, b]^m`.
pub fn approx_error_bound(a: f64, m: usize, n: usize, tau: f64) -> Result<f64> {
    let g = gamma0(1.0)?;
    if !(tau > g) {
        return Err(Error::RateNotNegative { tau, gamma0: g });
    }
    let mf = m as f64;
    let rho = tau + (1.0 + tau * tau).sqrt();
    let ln_c = mf.ln() + mf * std::f64::consts::LN_2 - mf * (1.0 - 1.0 / rho).ln();
    Ok(ln_c + a.ln() + n as f64 * psi(tau, 1.0))
}

/// `ln( C(K) A e^{nψ(τ, K)} )` with `C(K) = 2/(1 − α/(γ₀+√(1+γ₀²)))`,
/// `γ₀ = γ₀(α)`: error of the degree-`n` partial sum of a univariate `f` with
/// `|f(ξ)| ≤ A e^{σ|ξ|}` on the scaled compact `bK`, `τ = n/(σb)`.
pub fn univariate_error_bound(a: f64, n: usize, tau: f64, k: &SymmetricCompact) -> Result<f64> {
    let g = gamma0(k.alpha)?;
    if !(tau > g) {
        return Err(Error::RateNotNegative { tau, gamma0: g });
    }
    let c = 2.0 / (1.0 - k.alpha / (g + (1.0 + g * g).sqrt()));
    Ok(c.ln() + a.ln() + n as f64 * psi(tau, k.alpha))
}

/// One row of [`convergence_rate_experiment`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n: usize,
    /// Half-length `n/(στ)` of the approximation interval.
    pub b: f64,
    /// Sup error of the degree-`n` partial sum.
    pub error: f64,
    /// `error^{1/n}`.
    pub rate: f64,
    /// Sup error divided by the sup of `e^{σw}` on the interval.
    pub relative_error: f64,
    /// `relative_error^{1/n}`.
    pub relative_rate: f64,
    /// `e^{ψ(τ)}`.
    pub predicted_rate: f64,
}

/// Natural logs of the Chebyshev coefficients of `e^{a u}` on `[−1, 1]`,
/// `c_0 = I_0(a)` and `c_k = 2 I_k(a)`, for `k = 0..=kmax`. The modified Bessel
/// values come from their positive power series, so each is accurate to a few
/// ulps relative to itself.
pub fn exp_cheb_coeffs_ln(a: f64, kmax: usize) -> Vec<f64> {
    let half = 0.5 * a;
    let ln_half = half.ln();
    let jmax = (a as usize) + 60;
    let mut ln_fact = vec![0.0f64; jmax + kmax + 2];
    for i in 1..ln_fact.len() {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    (0..=kmax)
        .map(|k| {
            let terms: Vec<f64> = (0..=jmax)
                .map(|j| (2 * j + k) as f64 * ln_half - ln_fact[j] - ln_fact[j + k])
                .collect();
            let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let ln_i = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
            if k == 0 {
                ln_i
            } else {
                ln_i + std::f64::consts::LN_2
            }
        })
        .collect()
}

/// Approximation rate of `f(w) = e^{σw}` on `[−n/(στ), n/(στ)]` by its
/// degree-`n` Chebyshev partial sum.
///
/// The error `f − P_n = Σ_{k>n} c_k T_k` is evaluated from the tail
/// coefficients on a 4096-point grid, so it is resolved far below the
/// `ε·‖f‖` floor that a direct difference `f − P_n` would hit.
pub fn convergence_rate_experiment(sigma: f64, tau: f64, n_list: &[usize]) -> Result<Vec<RatePoint>> {
    let g = gamma0(1.0)?;
    if !(tau > g) {
        return Err(Error::RateNotNegative { tau, gamma0: g });
    }
    if !(sigma > 0.0) {
        return Err(Error::Invalid(format!("sigma must be positive, got {sigma}")));
    }
    let grid = linspace(-1.0, 1.0, RATE_GRID_POINTS);
    let predicted_rate = psi(tau, 1.0).exp();
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        let b = n as f64 / (sigma * tau);
        let a = sigma * b;
        let kmax = n + 1 + 40 + (2.0 * a) as usize;
        let ln_c = exp_cheb_coeffs_ln(a, kmax);
        let lead = ln_c[n + 1];
        let mut tail: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); kmax + 1];
        for k in n + 1..=kmax {
            tail[k] = Complex64::new((ln_c[k] - lead).exp(), 0.0);
        }
        let scaled = grid
            .iter()
            .map(|&u| clenshaw(&tail, u).norm())
            .fold(0.0, f64::max);
        let ln_err = lead + scaled.ln();
        let ln_rel = ln_err - a;
        let nf = n as f64;
        out.push(RatePoint {
            n,
            b,
            error: ln_err.exp(),
            rate: (ln_err / nf).exp(),
            relative_error: ln_rel.exp(),
            relative_rate: (ln_rel / nf).exp(),
            predicted_rate,
        });
    }
    Ok(out)
}
