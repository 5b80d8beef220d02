//! Discretization constants, `L_q` norms, sample sums and the
//! Marcinkiewicz-Zygmund verification experiments.
//!
//! The constant `C(m, q)` that the two-sided inequalities leave implicit is
//! passed around as `c_mq` (default [`DEFAULT_C_MQ`]). Experiments check
//! structure: scaling laws and boundedness, not the unknown constant.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{coeff_sum_bound_exp, ln_coth, tau0};
use crate::grid::{for_each_tensor_point, lobatto_nodes, midpoints, refine_max};
use crate::models::{EfetModel, ExpPolynomial, ShiftedSinc};
use crate::nets::{covering_check, packing_multiplicity, sup_dist, CoverageState, PointSet, Window, DEFAULT_MAX_DEPTH};
use crate::{Error, Lq, Result};

pub const DEFAULT_C_MQ: f64 = 1.0;

/// Reference-grid factor of [`cube_mz_experiment`]; knot factors dividing it
/// produce knot sets contained in the reference grid.
pub const CUBE_REFERENCE_FACTOR: usize = 32;

/// `d = 1` for `m = 1`, else `⌊m/q⌋ + 1`.
pub fn d_exponent(m: usize, q: Lq) -> u32 {
    if m == 1 {
        return 1;
    }
    match q {
        Lq::Infinity => 1,
        Lq::Finite(q) => (m as f64 / q).floor() as u32 + 1,
    }
}

/// Windowed estimate of `‖f‖_{L_q(R^m)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LqEstimate {
    pub q: Lq,
    pub value: f64,
    pub window: Window,
    pub points_per_axis: usize,
    /// Bound on the part of the norm outside the window.
    pub tail_bound: Option<f64>,
}

/// Surface area of the unit sphere in `R^m`.
fn sphere_area(m: usize) -> f64 {
    // 2π^{m/2}/Γ(m/2) via the recursion S_{m+1} = 2π S_{m−1}/(m−1).
    let (mut s0, mut s1) = (2.0, 2.0 * std::f64::consts::PI);
    match m {
        1 => return s0,
        2 => return s1,
        _ => {}
    }
    for k in 3..=m {
        let next = 2.0 * std::f64::consts::PI * s0 / (k as f64 - 2.0);
        s0 = s1;
        s1 = next;
    }
    s1
}

/// Norm-level tail bound outside the window from an envelope
/// `|f(x)| ≤ c |x − x₀|^{−p}`.
fn tail_bound(model: &EfetModel, q: Lq, window: &Window) -> Option<f64> {
    let (center, c, p) = model.decay_envelope()?;
    let r = window.half_side - sup_dist(&center, &window.center);
    if !(r > 0.0) {
        return None;
    }
    let m = model.dim() as f64;
    match q {
        Lq::Infinity => Some(c * r.powf(-p)),
        Lq::Finite(q) => {
            if !(p * q > m) {
                return None;
            }
            let integral = sphere_area(model.dim()) * c.powf(q) * r.powf(m - p * q) / (p * q - m);
            Some(integral.powf(1.0 / q))
        }
    }
}

/// Midpoint-rule `L_q` norm over the window (grid sup for `q = ∞`).
pub fn lq_norm(model: &EfetModel, q: Lq, window: &Window, points_per_axis: usize) -> Result<LqEstimate> {
    if points_per_axis < 16 {
        return Err(Error::Invalid(format!("need at least 16 points per axis, got {points_per_axis}")));
    }
    if window.dim() != model.dim() {
        return Err(Error::Invalid("window and model dimensions differ".into()));
    }
    model.check_integrable(q)?;
    let axes: Vec<Vec<f64>> = window
        .center
        .iter()
        .map(|&c| midpoints(c - window.half_side, c + window.half_side, points_per_axis))
        .collect();
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for_each_tensor_point(&axes, |x| {
        let v = model.abs_at(x);
        match q {
            Lq::Infinity => acc = acc.max(v),
            Lq::Finite(q) => {
                // Compensated summation.
                let y = v.powf(q) - comp;
                let t = acc + y;
                comp = (t - acc) - y;
                acc = t;
            }
        }
    });
    let value = match q {
        Lq::Infinity => acc,
        Lq::Finite(q) => {
            let cell = (2.0 * window.half_side / points_per_axis as f64).powi(model.dim() as i32);
            (acc * cell).powf(1.0 / q)
        }
    };
    Ok(LqEstimate {
        q,
        value,
        window: window.clone(),
        points_per_axis,
        tail_bound: tail_bound(model, q, window),
    })
}

/// `(Σ |f(X_ν)|^q)^{1/q}`, or the max for `q = ∞`.
///
/// Terms are sorted by decreasing magnitude, scaled by the largest one and
/// accumulated with compensated summation.
pub fn sample_sum(model: &EfetModel, net: &PointSet, q: Lq) -> Result<f64> {
    if net.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    if net.dim() != model.dim() {
        return Err(Error::Invalid("net and model dimensions differ".into()));
    }
    let mut vals: Vec<f64> = net.iter().map(|x| model.abs_at(x)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let top = vals[0];
    match q {
        Lq::Infinity => Ok(top),
        Lq::Finite(q) => {
            if top == 0.0 {
                return Ok(0.0);
            }
            let (mut acc, mut comp) = (0.0f64, 0.0f64);
            for v in vals {
                let y = (v / top).powf(q) - comp;
                let t = acc + y;
                comp = (t - acc) - y;
                acc = t;
            }
            Ok(top * acc.powf(1.0 / q))
        }
    }
}

fn finite_q(q: Lq) -> Result<f64> {
    match q {
        Lq::Finite(q) => Ok(q),
        Lq::Infinity => Err(Error::Invalid("q must be finite here".into())),
    }
}

/// `(δ₁/2)^{−m/q}(N+1)^{1/q}(1 + c_mq·max{δ₁σ, (δ₁σ)^d})`, the upper constant.
pub fn c1_bound(delta1: f64, sigma: f64, m: usize, q: Lq, n_mult: usize, c_mq: f64) -> Result<f64> {
    let qf = finite_q(q)?;
    let t = delta1 * sigma;
    let d = d_exponent(m, q) as i32;
    Ok((0.5 * delta1).powf(-(m as f64) / qf) * ((n_mult + 1) as f64).powf(1.0 / qf) * (1.0 + c_mq * t.max(t.powi(d))))
}

/// `(4δ)^{−m/q} 2^{1/q−1} (1 − c_mq·max{(δσ)^q, (δσ)^{dq}})^{1/q}`, the lower constant.
pub fn c2_bound(delta: f64, sigma: f64, m: usize, q: Lq, c_mq: f64) -> Result<f64> {
    let qf = finite_q(q)?;
    let t = delta * sigma;
    let d = f64::from(d_exponent(m, q));
    let paren = 1.0 - c_mq * t.powf(qf).max(t.powf(d * qf));
    if !(paren > 0.0) {
        return Err(Error::DeltaSigmaTooLarge(format!(
            "1 - c_mq*max((δσ)^q, (δσ)^(dq)) = {paren} is not positive"
        )));
    }
    Ok((4.0 * delta).powf(-(m as f64) / qf) * 2f64.powf(1.0 / qf - 1.0) * paren.powf(1.0 / qf))
}

/// `C₃ = 1 − mδσ`, the sup-norm constant for δ-covering nets.
pub fn c3_bound(delta: f64, sigma: f64, m: usize) -> f64 {
    1.0 - m as f64 * delta * sigma
}

/// `δ* = max{δ₁, (c_mq/σ)((N+1)/(δ₁^m C₂^q))^{1/(γq−m)}}`, `γ = ⌊m/q⌋ + 1`.
pub fn delta_star(delta1: f64, sigma: f64, m: usize, q: Lq, n_mult: usize, c2: f64, c_mq: f64) -> Result<f64> {
    let qf = finite_q(q)?;
    let gamma = (m as f64 / qf).floor() + 1.0;
    let ratio = (n_mult + 1) as f64 / (delta1.powi(m as i32) * c2.powf(qf));
    Ok(delta1.max(c_mq / sigma * ratio.powf(1.0 / (gamma * qf - m as f64))))
}

/// Parameters recorded in an [`MZReport`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MZParams {
    pub delta: Option<f64>,
    pub delta1: Option<f64>,
    pub sigma: Option<f64>,
    pub m: Option<usize>,
    pub q: Option<Lq>,
    pub n_mult: Option<usize>,
    pub c_mq: Option<f64>,
}

/// Measured discrete-to-continuous ratios next to the theoretical constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MZReport {
    pub experiment: String,
    pub measured_ratio_upper: Option<f64>,
    pub measured_ratio_lower: Option<f64>,
    pub theoretical_c1: Option<f64>,
    pub theoretical_c2: Option<f64>,
    pub theoretical_c3: Option<f64>,
    pub params: MZParams,
    pub passed: bool,
    pub measurements: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub window: Option<Window>,
}

/// Checks `sup_net |f| ≥ (1 − mδσ)·sup_grid |f| − slack` for a δ-covering net.
///
/// The reference sup is taken on a `resolution^m` grid including the window
/// boundary. The slack `C₃·grid_sup·s/(1−s)`, `s = mσh/2`, bounds how far the
/// grid sup can fall below the true sup when the window holds the global max.
pub fn verify_sup_inequality(
    model: &EfetModel,
    net: &PointSet,
    delta: f64,
    sigma: f64,
    m: usize,
    window: &Window,
    resolution: usize,
) -> Result<MZReport> {
    if model.dim() != m || net.dim() != m || window.dim() != m {
        return Err(Error::Invalid("model, net and window must share dimension m".into()));
    }
    if 11.0 * (m as f64).powf(1.5) * delta * sigma > 1.0 {
        return Err(Error::DeltaSigmaTooLarge(format!(
            "11 m^(3/2) δσ = {} exceeds 1",
            11.0 * (m as f64).powf(1.5) * delta * sigma
        )));
    }
    if resolution < 2 {
        return Err(Error::Invalid("resolution must be at least 2".into()));
    }
    let cov = covering_check(net, delta, window, DEFAULT_MAX_DEPTH)?;
    if cov.state != CoverageState::Covered {
        return Err(Error::NotCovering(format!("covering check returned {:?}", cov.state)));
    }
    let net_sup = sample_sum(model, net, Lq::Infinity)?;
    let axes: Vec<Vec<f64>> = window
        .center
        .iter()
        .map(|&c| crate::grid::linspace(c - window.half_side, c + window.half_side, resolution))
        .collect();
    let mut grid_sup = 0.0f64;
    for_each_tensor_point(&axes, |x| grid_sup = grid_sup.max(model.abs_at(x)));
    let h = 2.0 * window.half_side / (resolution - 1) as f64;
    let s = m as f64 * sigma * h / 2.0;
    let rel_slack = if s < 1.0 { s / (1.0 - s) } else { f64::INFINITY };
    let c3 = c3_bound(delta, sigma, m);
    let ratio = if grid_sup > 0.0 { net_sup / grid_sup } else { 1.0 };
    let passed = net_sup >= c3 * grid_sup * (1.0 - rel_slack);
    let mut measurements = BTreeMap::new();
    measurements.insert("net_sup".into(), net_sup);
    measurements.insert("grid_sup".into(), grid_sup);
    measurements.insert("grid_slack".into(), rel_slack);
    measurements.insert("covering_resolution".into(), cov.resolution_reached);
    Ok(MZReport {
        experiment: "sup_inequality".into(),
        measured_ratio_upper: Some(ratio),
        measured_ratio_lower: Some(ratio),
        theoretical_c1: None,
        theoretical_c2: None,
        theoretical_c3: Some(c3),
        params: MZParams {
            delta: Some(delta),
            sigma: Some(sigma),
            m: Some(m),
            q: Some(Lq::Infinity),
            ..Default::default()
        },
        passed,
        measurements,
        seed: None,
        window: Some(window.clone()),
    })
}

/// Closest pair of points violating separation `≥ sep`, if any.
fn find_close_pair(ps: &PointSet, sep: f64) -> Option<(usize, usize)> {
    let n = ps.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ps.point(a)[0].total_cmp(&ps.point(b)[0]));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if ps.point(j)[0] - ps.point(i)[0] >= sep {
                break;
            }
            if sup_dist(ps.point(i), ps.point(j)) < sep {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

/// Normalized perturbation functional
/// `|S_q(X) − S_q(Y)| / (h^{−m/q} max{hσ, (hσ)^d} ‖f‖_q)`, where each `Y_ν` is
/// drawn uniformly from the cube `Q_h(X_ν)` and `S_q` is [`sample_sum`].
pub fn perturbation_check(
    model: &EfetModel,
    centers: &PointSet,
    h: f64,
    q: Lq,
    seed: u64,
    norm: &LqEstimate,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Invalid(format!("h must be positive, got {h}")));
    }
    if norm.q != q {
        return Err(Error::Invalid("norm estimate was computed for a different q".into()));
    }
    if let Some((i, j)) = find_close_pair(centers, 2.0 * h * (1.0 - 1e-12)) {
        return Err(Error::NotDisjoint(i, j));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(centers.len() * centers.dim());
    for x in centers.iter() {
        for &c in x {
            coords.push(c + rng.gen_range(-h..=h));
        }
    }
    let moved = PointSet::from_flat(centers.dim(), coords)?;
    let diff = (sample_sum(model, centers, q)? - sample_sum(model, &moved, q)?).abs();
    let m = model.dim();
    let sigma = model.efet_type().sigma;
    let t = h * sigma;
    let d = d_exponent(m, q) as i32;
    let scale = h.powf(-(m as f64) * q.recip()) * t.max(t.powi(d)) * norm.value;
    Ok(diff / scale)
}

/// A shifted sinc that is small on the net but reaches `σ` off the net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessityWitness {
    pub model: ShiftedSinc,
    /// `sup_net |f_y|`.
    pub net_sup: f64,
    /// `sup_net |f_y| / σ`.
    pub ratio: f64,
}

/// Looks for a point `y` of the net's bounding cube that is not δ-covered and
/// returns the shifted sinc centered there.
pub fn necessity_witness(net: &PointSet, delta: f64, sigma: f64, c3: f64) -> Result<Option<NecessityWitness>> {
    let w = net
        .bounding_window()
        .ok_or(Error::InsufficientPoints { needed: 1, got: 0 })?;
    necessity_witness_in(net, delta, sigma, c3, &w)
}

/// [`necessity_witness`] over an explicit window.
pub fn necessity_witness_in(
    net: &PointSet,
    delta: f64,
    sigma: f64,
    c3: f64,
    window: &Window,
) -> Result<Option<NecessityWitness>> {
    if !(c3 > 0.0 && c3 <= 1.0) {
        return Err(Error::Invalid(format!("C3 must lie in (0, 1], got {c3}")));
    }
    if !(delta > 1.0 / (c3 * sigma)) {
        return Err(Error::HypothesisViolated(format!(
            "delta = {delta} must exceed 1/(C3 sigma) = {}",
            1.0 / (c3 * sigma)
        )));
    }
    let cov = covering_check(net, delta, window, DEFAULT_MAX_DEPTH)?;
    let Some(y) = cov.witness else {
        return Ok(None);
    };
    let model = ShiftedSinc::new(sigma, y)?;
    let f = EfetModel::ShiftedSinc(model.clone());
    let net_sup = sample_sum(&f, net, Lq::Infinity)?;
    Ok(Some(NecessityWitness {
        model,
        net_sup,
        ratio: net_sup / sigma,
    }))
}

/// Upper MZ check `S_q / ‖f‖_q ≤ (δ₁/2)^{−m/q}(N+1)^{1/q}(1 + slack)`, with `N`
/// measured by [`packing_multiplicity`].
pub fn upper_mz_experiment(
    model: &EfetModel,
    net: &PointSet,
    delta1: f64,
    sigma: f64,
    q: Lq,
    norm: &LqEstimate,
    c_mq: f64,
) -> Result<MZReport> {
    let m = model.dim();
    if net.dim() != m {
        return Err(Error::Invalid("net and model dimensions differ".into()));
    }
    model.check_integrable(q)?;
    if norm.q != q {
        return Err(Error::Invalid("norm estimate was computed for a different q".into()));
    }
    let n_mult = packing_multiplicity(net, delta1)?;
    let sum = sample_sum(model, net, q)?;
    let measured = sum / norm.value;
    let qf = finite_q(q)?;
    let prediction = (0.5 * delta1).powf(-(m as f64) / qf) * ((n_mult + 1) as f64).powf(1.0 / qf);
    let c1 = c1_bound(delta1, sigma, m, q, n_mult, c_mq)?;
    let mut measurements = BTreeMap::new();
    measurements.insert("sample_sum".into(), sum);
    measurements.insert("lq_norm".into(), norm.value);
    measurements.insert("structural_prediction".into(), prediction);
    if let Some(t) = norm.tail_bound {
        measurements.insert("tail_bound".into(), t);
    }
    Ok(MZReport {
        experiment: "upper_mz".into(),
        measured_ratio_upper: Some(measured),
        measured_ratio_lower: None,
        theoretical_c1: Some(c1),
        theoretical_c2: None,
        theoretical_c3: None,
        params: MZParams {
            delta1: Some(delta1),
            sigma: Some(sigma),
            m: Some(m),
            q: Some(q),
            n_mult: Some(n_mult),
            c_mq: Some(c_mq),
            ..Default::default()
        },
        passed: measured <= c1,
        measurements,
        seed: None,
        window: Some(norm.window.clone()),
    })
}

/// Random exponential polynomial of degree `degree` per axis; coefficients are
/// uniform in the unit square of `C`, or uniform in `[0, 1]` when `positive`.
pub fn random_exp_polynomial(m: usize, degree: usize, positive: bool, rng: &mut impl Rng) -> ExpPolynomial {
    let count = (degree + 1).pow(m as u32);
    let coeffs = (0..count)
        .map(|_| {
            if positive {
                Complex64::new(rng.gen_range(0.0..=1.0), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
            }
        })
        .collect();
    ExpPolynomial::from_dense(m, degree, coeffs).expect("shape is consistent")
}

/// Summary of [`cube_mz_experiment`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeMzReport {
    pub degree: usize,
    pub b: f64,
    pub m: usize,
    pub gamma_slack: f64,
    pub grid_factor: usize,
    pub trials: usize,
    pub seed: u64,
    pub positive_coefficients: bool,
    pub knots_per_axis: usize,
    pub knot_count: u64,
    pub reference_points_per_axis: usize,
    /// `‖E_N‖ / max_knots |E_N|` for every trial, in trial order.
    pub factors: Vec<f64>,
    pub max_factor: f64,
    pub mean_factor: f64,
    pub within_slack: bool,
    /// `coth(b/4)^{mN}`.
    pub d_n: f64,
    pub tau0: f64,
}

/// Per-axis tables `e^{k x}` for `k = 0..=N` and the grid `axis`.
fn exp_tables(axis: &[f64], degree: usize) -> Vec<Vec<f64>> {
    axis.iter()
        .map(|&x| (0..=degree).map(|k| (k as f64 * x).exp()).collect())
        .collect()
}

/// `max |E|` over the tensor grid `axis^m`, given per-axis `e^{kx}` tables,
/// with the index of the maximizing node along each axis.
fn grid_max(e: &ExpPolynomial, tables: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let np = e.degree() + 1;
    let c = e.coeffs();
    let mut best = (f64::NEG_INFINITY, vec![0; e.dim()]);
    match e.dim() {
        1 => {
            for (i, t) in tables.iter().enumerate() {
                let v = c.iter().zip(t).map(|(ck, tk)| ck * tk).sum::<Complex64>().norm();
                if v > best.0 {
                    best = (v, vec![i]);
                }
            }
        }
        2 => {
            let mut row = vec![Complex64::new(0.0, 0.0); np];
            for (i, t1) in tables.iter().enumerate() {
                for (k2, r) in row.iter_mut().enumerate() {
                    *r = (0..np).map(|k1| c[k1 * np + k2] * t1[k1]).sum();
                }
                for (j, t2) in tables.iter().enumerate() {
                    let v = row.iter().zip(t2).map(|(a, b)| a * b).sum::<Complex64>().norm();
                    if v > best.0 {
                        best = (v, vec![i, j]);
                    }
                }
            }
        }
        _ => unreachable!("grid_max supports m <= 2"),
    }
    best
}

/// Sup-norm of an exponential polynomial on `[−b, b]^m`, `m ≤ 2`: max over a
/// Chebyshev-Lobatto grid of `nodes + 1` points per axis, then local
/// refinement. Never exceeds the true norm.
pub fn exp_poly_cube_norm(e: &ExpPolynomial, b: f64, nodes: usize) -> Result<f64> {
    if e.dim() > 2 {
        return Err(Error::Invalid("cube norm supports m <= 2".into()));
    }
    let axis = lobatto_nodes(nodes, b);
    let (value, idx) = grid_max(e, &exp_tables(&axis, e.degree()));
    let start: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
    let center = vec![0.0; e.dim()];
    Ok(refine_max(|x| e.eval(x).norm(), start, value, &center, b, 2.0 * b / nodes as f64).value)
}

/// Discretization factor of random exponential polynomials on tensor
/// Chebyshev-Lobatto knot grids with `cN + 1` points per axis on `[−b, b]^m`.
#[allow(clippy::too_many_arguments)]
pub fn cube_mz_experiment(
    degree: usize,
    b: f64,
    m: usize,
    gamma_slack: f64,
    grid_factor: usize,
    trials: usize,
    seed: u64,
    positive: bool,
) -> Result<CubeMzReport> {
    if degree == 0 || degree > 8 || m == 0 || m > 2 {
        return Err(Error::Invalid("cube experiment supports 1 <= N <= 8 and m <= 2".into()));
    }
    if grid_factor < 2 {
        return Err(Error::Invalid(format!("grid factor must be at least 2, got {grid_factor}")));
    }
    if !(b > 0.0) || trials == 0 {
        return Err(Error::Invalid("b and trials must be positive".into()));
    }
    let knots_per_axis = grid_factor * degree + 1;
    let knot_axis = lobatto_nodes(grid_factor * degree, b);
    let knot_tables = exp_tables(&knot_axis, degree);
    let ref_nodes = CUBE_REFERENCE_FACTOR * degree;
    let mut factors = Vec::with_capacity(trials);
    for t in 0..trials {
        // One independent generator per trial keeps results stable under reordering.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let e = random_exp_polynomial(m, degree, positive, &mut rng);
        let knot_max = grid_max(&e, &knot_tables).0;
        let reference = exp_poly_cube_norm(&e, b, ref_nodes)?.max(knot_max);
        factors.push(reference / knot_max);
    }
    let max_factor = factors.iter().copied().fold(0.0, f64::max);
    let mean_factor = factors.iter().sum::<f64>() / trials as f64;
    Ok(CubeMzReport {
        degree,
        b,
        m,
        gamma_slack,
        grid_factor,
        trials,
        seed,
        positive_coefficients: positive,
        knots_per_axis,
        knot_count: (knots_per_axis as u64).pow(m as u32),
        reference_points_per_axis: ref_nodes + 1,
        max_factor,
        mean_factor,
        within_slack: max_factor <= 1.0 + gamma_slack,
        factors,
        d_n: (m as f64 * degree as f64 * ln_coth(b / 4.0)).exp(),
        tau0: tau0(b)?,
    })
}

/// Global growth certificate for an exponential polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalCertificate {
    /// `coth(b/4)^{mN}`.
    pub d_n: f64,
    /// Per-axis type `N`.
    pub sigma_eff: f64,
    /// `‖E‖` on `[−b, b]^m`.
    pub cube_norm: f64,
    /// Largest `|E(w)| / (D ‖E‖ e^{N Σ|w_j|})` over the samples.
    pub max_ratio: f64,
    pub samples: usize,
    pub holds: bool,
}

/// Certifies `|E(w)| ≤ D ‖E‖_{[−b,b]^m} e^{N Σ|w_j|}` with `D = coth(b/4)^{mN}`
/// on `samples` uniform points of `[−2b, 2b]^m`.
pub fn exp_poly_global_certificate(e: &ExpPolynomial, b: f64, samples: usize, seed: u64) -> Result<GlobalCertificate> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    let m = e.dim();
    let n = e.degree();
    let ln_d = coeff_sum_bound_exp(n as u32, m as u32, b)?;
    let cube_norm = exp_poly_cube_norm(e, b, 64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = 0.0f64;
    let mut w = vec![0.0; m];
    for _ in 0..samples {
        for wj in w.iter_mut() {
            *wj = rng.gen_range(-2.0 * b..=2.0 * b);
        }
        let l1: f64 = w.iter().map(|v| v.abs()).sum();
        let ln_rhs = ln_d + cube_norm.ln() + n as f64 * l1;
        let v = e.eval(&w).norm();
        if v > 0.0 {
            max_ratio = max_ratio.max((v.ln() - ln_rhs).exp());
        }
    }
    Ok(GlobalCertificate {
        d_n: ln_d.exp(),
        sigma_eff: n as f64,
        cube_norm,
        max_ratio,
        samples,
        holds: max_ratio <= 1.0,
    })
}

/// `‖f₀‖_q / σ^{γ − m/q}` for the sinc power `f₀` with `γ = ⌊m/q⌋ + 1`,
/// estimated at `σ = 1` on `[−half_side, half_side]^m`.
pub fn sinc_power_norm_constant(m: usize, q: Lq, half_side: f64, points_per_axis: usize) -> Result<LqEstimate> {
    let gamma = match q {
        Lq::Finite(qf) => (m as f64 / qf).floor() as u32 + 1,
        Lq::Infinity => 1,
    };
    let f = EfetModel::SincPower(crate::models::SincPower::new(1.0, gamma, m)?);
    lq_norm(&f, q, &Window::centered(m, half_side)?, points_per_axis)
}
