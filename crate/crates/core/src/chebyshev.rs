//! Chebyshev polynomials of the first kind, their growth outside `[−1, 1]`,
//! coefficient-sum bounds, and the rate function `psi` with its roots.
//!
//! Quantities that grow like `T_n(u)` for `|u| > 1` are returned as
//! [`SignedLog`] values so that degrees up to 60 and beyond never overflow.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Bisection stopping width for [`gamma0`] and [`tau0`].
pub const ROOT_TOL: f64 = 1e-10;
/// Iteration cap for the bracketed bisections.
pub const ROOT_MAX_ITER: usize = 200;

/// A real number stored as sign and natural log of its magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedLog {
    /// −1, 0 or 1.
    pub sign: i8,
    /// `ln |x|`; `−∞` when `sign == 0`.
    pub ln_abs: f64,
}

impl SignedLog {
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            SignedLog { sign: 0, ln_abs: f64::NEG_INFINITY }
        } else {
            SignedLog {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// The plain value; overflows to `±∞` when out of range.
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }
}

/// `ln cosh x` without overflow.
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `acosh u` for `u ≥ 1`, accurate near 1.
fn acosh_near_one(u: f64) -> f64 {
    let d = u - 1.0;
    (d + (d * (u + 1.0)).sqrt()).ln_1p()
}

/// `T_n(u)` in sign/log form.
///
/// For `|u| ≤ 1` this is `cos(n arccos u)`; for `|u| > 1` it is
/// `sign · cosh(n arccosh |u|)` evaluated in log-space.
pub fn cheb_t(n: u32, u: f64) -> SignedLog {
    if u.abs() <= 1.0 {
        return SignedLog::from_f64((f64::from(n) * u.acos()).cos());
    }
    let sign = if u < 0.0 && n % 2 == 1 { -1 } else { 1 };
    SignedLog {
        sign,
        ln_abs: ln_cosh(f64::from(n) * acosh_near_one(u.abs())),
    }
}

/// `T_n(u)` as a plain float.
pub fn cheb_t_value(n: u32, u: f64) -> f64 {
    cheb_t(n, u).value()
}

/// `ln(2^{n−1} u^n)`, the upper bound for `T_n(u)` on `u ≥ 1`.
pub fn cheb_growth_bound(n: u32, u: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("growth bound needs n >= 1".into()));
    }
    if !(u >= 1.0) {
        return Err(Error::Domain(format!("growth bound needs u >= 1, got {u}")));
    }
    Ok(f64::from(n - 1) * std::f64::consts::LN_2 + f64::from(n) * u.ln())
}

/// `ln T_n^{(j)}(1)` for `j = 0..=n`, from `T_n^{(j)}(1) = Π_{i<j} (n²−i²)/(2i+1)`.
fn ln_derivs_at_one(n: u32) -> Vec<f64> {
    let nn = f64::from(n) * f64::from(n);
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    out.push(acc);
    for i in 0..n {
        let fi = f64::from(i);
        acc += (nn - fi * fi).ln() - (2.0 * fi + 1.0).ln();
        out.push(acc);
    }
    out
}

/// `T_n^{(l)}(u)` in sign/log form.
///
/// Outside `[−1, 1]` the derivative is summed from the Taylor expansion at
/// `u = ±1`, whose terms all share one sign. Inside, the three-term derivative
/// recurrence is used.
pub fn cheb_deriv_log(n: u32, l: u32, u: f64) -> SignedLog {
    if l > n {
        return SignedLog::from_f64(0.0);
    }
    if u.abs() <= 1.0 {
        return SignedLog::from_f64(deriv_recurrence(n, l, u));
    }
    let at_one = ln_derivs_at_one(n);
    let ln_d = (u.abs() - 1.0).ln();
    let mut ln_fact = 0.0;
    let mut terms = Vec::with_capacity((n - l + 1) as usize);
    for j in l..=n {
        let p = f64::from(j - l);
        if j > l {
            ln_fact += p.ln();
        }
        terms.push(at_one[j as usize] + p * ln_d - ln_fact);
    }
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    let sign = if u < 0.0 && (n + l) % 2 == 1 { -1 } else { 1 };
    SignedLog { sign, ln_abs: top + sum.ln() }
}

fn deriv_recurrence(n: u32, l: u32, u: f64) -> f64 {
    let l = l as usize;
    // prev[j] = T_{k-1}^{(j)}(u), cur[j] = T_k^{(j)}(u)
    let mut prev = vec![0.0; l + 1];
    let mut cur = vec![0.0; l + 1];
    prev[0] = 1.0;
    if n == 0 {
        return prev[l];
    }
    cur[0] = u;
    if l >= 1 {
        cur[1] = 1.0;
    }
    for _ in 1..n {
        let mut next = vec![0.0; l + 1];
        for j in 0..=l {
            next[j] = 2.0 * u * cur[j] - prev[j];
            if j > 0 {
                next[j] += 2.0 * j as f64 * cur[j - 1];
            }
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur[l]
}

/// `T_n^{(l)}(u)` as a plain float; zero when `l > n`.
pub fn cheb_deriv(n: u32, l: u32, u: f64) -> f64 {
    cheb_deriv_log(n, l, u).value()
}

/// `ln( λ^{−⟨k⟩} Π_j |T_n^{(k_j)}(x_j/λ)| )`, the extremal growth factor of a
/// derivative `D^k P` of a polynomial of degree `n` in each variable outside
/// the cube `[−λ, λ]^m`, relative to `‖P‖` on that cube.
pub fn outside_bound_tensor(n: u32, k: &[u32], x: &[f64], lambda: f64) -> Result<f64> {
    if k.len() != x.len() {
        return Err(Error::Invalid("multi-index and point differ in dimension".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    if let Some(xj) = x.iter().find(|xj| !(xj.abs() > lambda)) {
        return Err(Error::Domain(format!("coordinate {xj} is not outside [-{lambda}, {lambda}]")));
    }
    let order: u32 = k.iter().sum();
    let mut acc = -f64::from(order) * lambda.ln();
    for (&kj, &xj) in k.iter().zip(x) {
        acc += cheb_deriv_log(n, kj, xj / lambda).ln_abs;
    }
    Ok(acc)
}

/// `m · ln T_n((B+A+2)/(B−A))`: bound on `Σ|c_k|` over `‖U‖` for polynomials
/// `U(y) = Σ c_k y^k` of degree `n` in each variable on `[A, B]^m`.
pub fn coeff_sum_bound_interval(n: u32, m: u32, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > a) {
        return Err(Error::Domain(format!("need 0 < A < B, got A = {a}, B = {b}")));
    }
    Ok(f64::from(m) * cheb_t(n, (b + a + 2.0) / (b - a)).ln_abs)
}

/// `ln coth(x)` for `x > 0`, accurate for large `x`.
pub fn ln_coth(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    e.ln_1p() - (-e).ln_1p()
}

/// `m · n · ln coth(b/4)`: coefficient-sum bound for exponential polynomials
/// of degree `n` per axis on the cube `[−b, b]^m`.
pub fn coeff_sum_bound_exp(n: u32, m: u32, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    Ok(f64::from(m) * f64::from(n) * ln_coth(b / 4.0))
}

/// `ψ(τ) + ln α` with `ψ(τ) = √(1+τ²)/τ − ln(τ + √(1+τ²))`.
pub fn psi(tau: f64, alpha: f64) -> f64 {
    (1.0 + tau * tau).sqrt() / tau - tau.asinh() + alpha.ln()
}

/// Bisection on a sign-changing bracket of a decreasing function.
fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The unique positive zero of `ψ(·) + ln α`.
pub fn gamma0(alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let f = |t: f64| psi(t, alpha);
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.5 * hi;
    while f(lo) <= 0.0 {
        lo *= 0.5;
    }
    Ok(bisect_decreasing(f, lo, hi))
}

/// `G(τ, b) = b(√(1+τ²) − τ ln(τ+√(1+τ²))) + ln coth(b/4)`.
pub fn g_tau_b(tau: f64, b: f64) -> f64 {
    b * ((1.0 + tau * tau).sqrt() - tau * tau.asinh()) + ln_coth(b / 4.0)
}

/// The unique root `τ₀(b) > γ₀(1)` of `G(·, b)`.
pub fn tau0(b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    let lo = gamma0(1.0)?;
    let f = |t: f64| g_tau_b(t, b);
    let mut hi = 2.0 * lo;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    Ok(bisect_decreasing(f, lo, hi))
}

/// The four symmetric compacts with closed-form `α(K)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CompactKind {
    /// `[−1, 1]`.
    Interval,
    /// Closed disk of radius `m` centered at 0.
    Disk { m: f64 },
    /// The square with vertices `±1 ± i`.
    Square,
    /// Ellipse with foci `±1` and semi-axis sum `r`.
    Ellipse { r: f64 },
}

/// A symmetric compact `K` with `α(K) = max_{w∈K} |w + √(w²−1)|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricCompact {
    pub kind: CompactKind,
    pub alpha: f64,
}

pub fn alpha_of(kind: CompactKind) -> Result<SymmetricCompact> {
    let alpha = match kind {
        CompactKind::Interval => 1.0,
        CompactKind::Disk { m } => {
            if !(m > 0.0) {
                return Err(Error::Domain(format!("disk radius must be positive, got {m}")));
            }
            m + (m * m + 1.0).sqrt()
        }
        CompactKind::Square => {
            let phi = 0.5 * (1.0 + 5f64.sqrt());
            phi + phi.sqrt()
        }
        CompactKind::Ellipse { r } => {
            if !(r >= 1.0) {
                return Err(Error::Domain(format!("ellipse parameter must be >= 1, got {r}")));
            }
            r
        }
    };
    Ok(SymmetricCompact { kind, alpha })
}

/// Oversampling ratio `τ` and compact parameter `α` of an approximation rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    pub tau: f64,
    pub alpha: f64,
}

impl RateParams {
    pub fn new(tau: f64, alpha: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::Domain(format!("tau must be positive, got {tau}")));
        }
        if !(alpha >= 1.0) {
            return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
        }
        Ok(RateParams { tau, alpha })
    }

    pub fn psi(&self) -> f64 {
        psi(self.tau, self.alpha)
    }
}

impl Default for RateParams {
    fn default() -> Self {
        RateParams { tau: 2.0, alpha: 1.0 }
    }
}
