use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use num_complex::Complex64;
use serde_json::{json, Value};

use mz_core::approx::{approx_error_bound, fit_tensor_cheb, quad_points_rule, sup_error, convergence_rate_experiment};
use mz_core::chebyshev::{gamma0, tau0};
use mz_core::models::{EfetModel, ShiftedSinc, SincPower};
use mz_core::nets::{
    covering_check, disjoint_partition, greedy_thin, intersection_bound, lattice_net, max_cube_intersections,
    min_pairwise_separation, packing_multiplicity, sup_dist, PointSet, Window,
};
use mz_core::verify::{
    c1_bound, c2_bound, c3_bound, d_exponent, delta_star, lq_norm, necessity_witness_in, perturbation_check,
    upper_mz_experiment, verify_sup_inequality, cube_mz_experiment, DEFAULT_C_MQ,
};
use mz_core::Lq;

use crate::artifact::{document, emit, emit_csv, emit_json};
use crate::range::{parse_f64_list, parse_usize_list};
use crate::{CliError, Command, Out, WindowArgs};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("artifact types serialize")
}

fn read_points(path: &Path) -> Result<PointSet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(mz_core::io::read_points_csv(&text)?)
}

fn parse_center(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("window center {t:?}: {e}"))))
        .collect()
}

/// Window from the flags, falling back to the bounding cube of `ps`.
fn resolve_window(w: &WindowArgs, ps: &PointSet) -> Result<Window, CliError> {
    let m = ps.dim();
    let bbox = ps.bounding_window();
    let center = match &w.window_center {
        Some(s) => parse_center(s)?,
        None => match (&bbox, w.window_half) {
            (Some(b), None) => b.center.clone(),
            _ => vec![0.0; m],
        },
    };
    if center.len() != m {
        return Err(usage(format!("window center has {} coordinates, points have {m}", center.len())));
    }
    let half = match (w.window_half, bbox) {
        (Some(h), _) => h,
        (None, Some(b)) => b.half_side,
        (None, None) => return Err(usage("empty point set and no window")),
    };
    Ok(Window::new(center, half)?)
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn out_path(o: &Out) -> Option<&Path> {
    o.out.as_deref()
}

pub fn run(cmd: Command, argv: &[String]) -> Result<(), CliError> {
    match cmd {
        Command::NetCheck { input, delta, delta1, window, max_depth, expect_covered, out } => {
            net_check(argv, &input, delta, delta1, &window, max_depth, expect_covered, &out)
        }
        Command::NetThin { input, delta, out } => net_thin(argv, &input, delta, &out),
        Command::NetPartition { input, h, n_bound, out } => net_partition(argv, &input, h, n_bound, &out),
        Command::Constants { delta, delta1, sigma, m, q, n_mult, c_mq, out } => {
            constants(argv, delta, delta1, sigma, m, q, n_mult, c_mq, &out)
        }
        Command::Gamma0 { alpha, digits, out } => {
            if !(alpha >= 1.0) {
                return Err(usage(format!("--alpha must be at least 1, got {alpha}")));
            }
            let g = gamma0(alpha)?;
            scalar(argv, "gamma0", json!({ "alpha": alpha }), g, digits, &out)
        }
        Command::Tau0 { b, digits, out } => {
            positive("b", b)?;
            let t = tau0(b)?;
            scalar(argv, "tau0", json!({ "b": b }), t, digits, &out)
        }
        Command::ChebFit { function, sigma, b, n, m, k, check, out } => {
            cheb_fit(argv, &function, sigma, b, n, m, k, check, &out)
        }
        Command::RateExperiment { sigma, tau, n, out } => rate_experiment(argv, sigma, tau, &n, &out),
        Command::MzVerify(args) => mz_verify(argv, args),
        Command::CubeMz { n, m, b, c, trials, seed, gamma, positive: pos, out } => {
            cube_mz(argv, &n, m, b, &c, trials, seed, gamma, pos, &out)
        }
        Command::Witness { input, delta, sigma, c3, m, spacing, half, window, out } => {
            witness(argv, input.as_deref(), delta, sigma, c3, m, spacing, half, &window, &out)
        }
    }
}

fn scalar(argv: &[String], name: &str, params: Value, value: f64, digits: usize, out: &Out) -> Result<(), CliError> {
    match out_path(out) {
        Some(p) => emit_json(&document(name, argv, params, None, json!({ name: value })), Some(p)),
        None => emit(&format!("{}\n", truncated(value, digits)), None),
    }
}

/// Decimal expansion cut (not rounded) after `digits` places, the way the
/// constants are usually quoted: 1.50887… prints as 1.5088.
fn truncated(value: f64, digits: usize) -> String {
    let s = format!("{value:.prec$}", prec = digits + 6);
    match s.find('.') {
        Some(dot) if digits == 0 => s[..dot].to_string(),
        Some(dot) => s[..dot + 1 + digits].to_string(),
        None => s,
    }
}

#[allow(clippy::too_many_arguments)]
fn net_check(
    argv: &[String],
    input: &Path,
    delta: f64,
    delta1: Option<f64>,
    window: &WindowArgs,
    max_depth: u32,
    expect_covered: bool,
    out: &Out,
) -> Result<(), CliError> {
    positive("delta", delta)?;
    let ps = read_points(input)?;
    let w = resolve_window(window, &ps)?;
    let report = covering_check(&ps, delta, &w, max_depth)?;
    let separation = if ps.len() > 1 { Some(min_pairwise_separation(&ps)?) } else { None };
    let multiplicity = match delta1 {
        Some(d1) => {
            positive("delta1", d1)?;
            Some(packing_multiplicity(&ps, d1)?)
        }
        None => None,
    };
    let covered = report.is_covered();
    let doc = document(
        "net-check",
        argv,
        json!({
            "input": input,
            "delta": delta,
            "delta1": delta1,
            "window": to_value(&w),
            "max_depth": max_depth,
        }),
        None,
        json!({
            "coverage": to_value(&report),
            "points": ps.len(),
            "min_separation": separation,
            "packing_multiplicity": multiplicity,
        }),
    );
    emit_json(&doc, out_path(out))?;
    if expect_covered && !covered {
        return Err(CliError::Assertion(format!("window is not {delta}-covered ({:?})", report.state)));
    }
    Ok(())
}

fn net_thin(argv: &[String], input: &Path, delta: f64, out: &Out) -> Result<(), CliError> {
    positive("delta", delta)?;
    let ps = read_points(input)?;
    let thin = greedy_thin(&ps, delta)?;
    let separation = if thin.len() > 1 { min_pairwise_separation(&thin)? } else { f64::INFINITY };
    let separated = separation >= delta;
    let covers = ps.iter().all(|x| thin.iter().any(|z| sup_dist(x, z) < delta));
    let meta = document(
        "net-thin",
        argv,
        json!({ "input": input, "delta": delta }),
        None,
        json!({
            "input_points": ps.len(),
            "output_points": thin.len(),
            "min_separation": separation.is_finite().then_some(separation),
            "separated": separated,
            "covers_input": covers,
        }),
    );
    emit_csv(&mz_core::io::write_points_csv(&thin), &meta, out_path(out))?;
    if !(separated && covers) {
        return Err(CliError::Assertion("thinned set violates separation or covering".into()));
    }
    Ok(())
}

fn net_partition(argv: &[String], input: &Path, h: f64, n_bound: Option<usize>, out: &Out) -> Result<(), CliError> {
    positive("h", h)?;
    let ps = read_points(input)?;
    let measured = max_cube_intersections(&ps, h);
    let n = n_bound.unwrap_or(measured);
    let bins = match disjoint_partition(&ps, h, n) {
        Ok(b) => b,
        Err(mz_core::Error::MultiplicityExceeded { index }) => {
            return Err(CliError::Assertion(format!(
                "cube {index} meets more than {n} others (measured maximum {measured})"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let disjoint = bins.iter().all(|bin| {
        bin.iter()
            .enumerate()
            .all(|(a, &i)| bin[a + 1..].iter().all(|&j| sup_dist(ps.point(i), ps.point(j)) > 2.0 * h))
    });
    let doc = document(
        "net-partition",
        argv,
        json!({ "input": input, "h": h, "n_bound": n }),
        None,
        json!({
            "bins": bins,
            "bin_count": bins.len(),
            "measured_max_intersections": measured,
            "pairwise_disjoint": disjoint,
        }),
    );
    emit_json(&doc, out_path(out))?;
    if !disjoint || bins.len() > n + 1 {
        return Err(CliError::Assertion("partition bins are not pairwise disjoint".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn constants(
    argv: &[String],
    delta: f64,
    delta1: f64,
    sigma: f64,
    m: usize,
    q: Lq,
    n_mult: usize,
    c_mq: f64,
    out: &Out,
) -> Result<(), CliError> {
    positive("delta", delta)?;
    positive("delta1", delta1)?;
    positive("sigma", sigma)?;
    if m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let mut result = serde_json::Map::new();
    result.insert("d".into(), json!(d_exponent(m, q)));
    result.insert("c3".into(), json!(c3_bound(delta, sigma, m)));
    if !q.is_infinite() {
        result.insert("c1".into(), json!(c1_bound(delta1, sigma, m, q, n_mult, c_mq)?));
        match c2_bound(delta, sigma, m, q, c_mq) {
            Ok(c2) => {
                result.insert("c2".into(), json!(c2));
                result.insert("delta_star".into(), json!(delta_star(delta1, sigma, m, q, n_mult, c2, c_mq)?));
            }
            Err(e) => {
                result.insert("c2".into(), Value::Null);
                result.insert("c2_error".into(), json!(e.to_string()));
            }
        }
    }
    match intersection_bound(m as u32, delta, delta1) {
        Ok(n) => result.insert("intersection_bound".into(), json!(n)),
        Err(e) => result.insert("intersection_bound_error".into(), json!(e.to_string())),
    };
    let doc = document(
        "constants",
        argv,
        json!({
            "delta": delta, "delta1": delta1, "sigma": sigma, "m": m,
            "q": to_value(&q), "n_mult": n_mult, "c_mq": c_mq,
        }),
        None,
        Value::Object(result),
    );
    emit_json(&doc, out_path(out))
}

fn test_function(name: &str, sigma: f64) -> Result<(impl Fn(&[f64]) -> Complex64, f64), CliError> {
    // Returns the function and the constant A of |f(w)| ≤ A e^{σΣ|w_j|} where known (0 otherwise).
    let kind = match name {
        "exp" => 0,
        "cos" => 1,
        "sinc" => 2,
        other => return Err(usage(format!("unknown function {other:?}; expected exp, cos or sinc"))),
    };
    let f = move |x: &[f64]| match kind {
        0 => Complex64::new((sigma * x.iter().sum::<f64>()).exp(), 0.0),
        1 => Complex64::new((sigma * x.iter().sum::<f64>()).cos(), 0.0),
        _ => {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            Complex64::new(sigma * mz_core::models::sinc(sigma * r), 0.0)
        }
    };
    Ok((f, if kind == 0 { 1.0 } else { 0.0 }))
}

#[allow(clippy::too_many_arguments)]
fn cheb_fit(
    argv: &[String],
    function: &str,
    sigma: f64,
    b: f64,
    n: usize,
    m: usize,
    k: Option<usize>,
    check: bool,
    out: &Out,
) -> Result<(), CliError> {
    positive("sigma", sigma)?;
    positive("b", b)?;
    let (f, a) = test_function(function, sigma)?;
    let k = k.unwrap_or_else(|| quad_points_rule(n, sigma, b).max(2 * (n + 1) + 16));
    let series = fit_tensor_cheb(&f, b, n, m, k)?;
    let nodes = match m {
        1 => 512,
        2 => 96,
        _ => 24,
    };
    let err = sup_error(&f, &series, nodes).value;
    let tau = n as f64 / (m as f64 * b * sigma);
    let bound = if a > 0.0 { approx_error_bound(a, m, n, tau).ok().map(f64::exp) } else { None };
    let doc = document(
        "cheb-fit",
        argv,
        json!({ "function": function, "sigma": sigma, "b": b, "n": n, "m": m, "k": k }),
        None,
        json!({
            "series": to_value(&series),
            "sup_error": err,
            "tau": tau,
            "error_bound": bound,
        }),
    );
    emit_json(&doc, out_path(out))?;
    if check {
        match bound {
            Some(bd) if err > bd => {
                return Err(CliError::Assertion(format!("sup error {err:e} exceeds the bound {bd:e}")))
            }
            None => return Err(usage("--check needs --function exp with n/(m b sigma) above gamma0(1)")),
            _ => {}
        }
    }
    Ok(())
}

fn rate_experiment(argv: &[String], sigma: f64, tau: f64, n: &str, out: &Out) -> Result<(), CliError> {
    positive("sigma", sigma)?;
    let ns = parse_usize_list(n).map_err(usage)?;
    let rows = convergence_rate_experiment(sigma, tau, &ns)?;
    let mut csv = String::from("n,b,error,rate,relative_error,relative_rate,predicted_rate\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.b, r.error, r.rate, r.relative_error, r.relative_rate, r.predicted_rate
        ));
    }
    let meta = document(
        "rate-experiment",
        argv,
        json!({ "sigma": sigma, "tau": tau, "n": ns }),
        None,
        json!({ "rows": to_value(&rows) }),
    );
    emit_csv(&csv, &meta, out_path(out))
}

#[derive(Args, Debug)]
pub struct MzVerifyArgs {
    /// sup, upper or perturbation.
    #[arg(long)]
    pub check: String,
    /// normalized-sinc (m = 1), sinc-power or shifted-sinc.
    #[arg(long, default_value = "sinc-power")]
    pub model: String,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Exponent of the sinc power.
    #[arg(long, default_value_t = 1)]
    pub gamma: u32,
    /// Shift of the shifted sinc, comma list.
    #[arg(long)]
    pub shift: Option<String>,
    /// Lattice spacing of the net.
    #[arg(long)]
    pub spacing: f64,
    /// Half-side of the window.
    #[arg(long, default_value_t = 5.0)]
    pub window_half: f64,
    /// Grid points per axis for reference sups and norms.
    #[arg(long, default_value_t = 20_001)]
    pub resolution: usize,
    /// Covering radius δ of the net (sup check).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Packing parameter δ₁ (upper check); the spacing when omitted.
    #[arg(long)]
    pub delta1: Option<f64>,
    #[arg(long, default_value = "2")]
    pub q: Lq,
    #[arg(long, default_value_t = DEFAULT_C_MQ)]
    pub c_mq: f64,
    /// Cube half-sides for the perturbation check, e.g. `0.2,0.1,0.05`.
    #[arg(long, default_value = "0.2,0.1,0.05")]
    pub h: String,
    /// Number of seeds per h for the perturbation check.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Out,
}

fn build_model(a: &MzVerifyArgs) -> Result<EfetModel, CliError> {
    positive("sigma", a.sigma)?;
    match a.model.as_str() {
        "normalized-sinc" => {
            if a.m != 1 {
                return Err(usage("normalized-sinc is one-dimensional"));
            }
            Ok(EfetModel::normalized_sinc(a.sigma)?)
        }
        "sinc-power" => Ok(EfetModel::SincPower(SincPower::new(a.sigma, a.gamma, a.m)?)),
        "shifted-sinc" => {
            let shift = match &a.shift {
                Some(s) => parse_center(s)?,
                None => vec![0.0; a.m],
            };
            if shift.len() != a.m {
                return Err(usage("--shift must have m coordinates"));
            }
            Ok(EfetModel::ShiftedSinc(ShiftedSinc::new(a.sigma, shift)?))
        }
        other => Err(usage(format!("unknown model {other:?}"))),
    }
}

fn mz_verify(argv: &[String], a: MzVerifyArgs) -> Result<(), CliError> {
    positive("spacing", a.spacing)?;
    positive("window-half", a.window_half)?;
    let model = build_model(&a)?;
    let m = a.m;
    let w = Window::centered(m, a.window_half)?;
    let params = json!({
        "check": a.check, "model": to_value(&model), "m": m, "sigma": a.sigma,
        "spacing": a.spacing, "window_half": a.window_half, "resolution": a.resolution,
        "delta": a.delta, "delta1": a.delta1, "q": to_value(&a.q), "c_mq": a.c_mq,
        "h": a.h, "seeds": a.seeds,
    });
    let (result, passed, seed) = match a.check.as_str() {
        "sup" => {
            let delta = a.delta.ok_or_else(|| usage("--delta is required for the sup check"))?;
            let outer = Window::centered(m, a.window_half + 2.0 * delta)?;
            let net = lattice_net(m, a.spacing, &outer, &vec![0.0; m])?;
            let r = verify_sup_inequality(&model, &net, delta, a.sigma, m, &w, a.resolution)?;
            (to_value(&r), r.passed, None)
        }
        "upper" => {
            let delta1 = a.delta1.unwrap_or(a.spacing);
            let net = lattice_net(m, a.spacing, &w, &vec![0.0; m])?;
            let norm = lq_norm(&model, a.q, &w, a.resolution)?;
            let r = upper_mz_experiment(&model, &net, delta1, a.sigma, a.q, &norm, a.c_mq)?;
            (json!({ "report": to_value(&r), "norm": to_value(&norm) }), r.passed, None)
        }
        "perturbation" => {
            let hs = parse_f64_list(&a.h).map_err(usage)?;
            if hs.is_empty() {
                return Err(usage("--h needs at least one value"));
            }
            let net = lattice_net(m, a.spacing, &w, &vec![0.0; m])?;
            let norm = lq_norm(&model, a.q, &w, a.resolution)?;
            let mut per_h = Vec::new();
            let mut maxima = Vec::new();
            for &h in &hs {
                let vals: Vec<f64> = (0..a.seeds)
                    .map(|s| perturbation_check(&model, &net, h, a.q, a.seed + s, &norm))
                    .collect::<Result<_, _>>()?;
                let mx = vals.iter().copied().fold(0.0, f64::max);
                maxima.push(mx);
                per_h.push(json!({ "h": h, "values": vals, "max": mx }));
            }
            let passed = maxima.iter().all(|&v| v <= 3.0 * maxima[0]);
            (json!({ "per_h": per_h, "norm": to_value(&norm), "bounded_within_factor_3": passed }), passed, Some(a.seed))
        }
        other => return Err(usage(format!("unknown check {other:?}; expected sup, upper or perturbation"))),
    };
    let doc = document("mz-verify", argv, params, seed, json!({ "passed": passed, "result": result }));
    emit_json(&doc, out_path(&a.out))?;
    if !passed {
        return Err(CliError::Assertion(format!("{} check failed", a.check)));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cube_mz(
    argv: &[String],
    n: &str,
    m: usize,
    b: f64,
    c: &str,
    trials: usize,
    seed: u64,
    gamma: f64,
    pos: bool,
    out: &Out,
) -> Result<(), CliError> {
    let ns = parse_usize_list(n).map_err(usage)?;
    let cs = parse_usize_list(c).map_err(usage)?;
    let mut reports = Vec::new();
    let mut all = true;
    for &nn in &ns {
        for &cc in &cs {
            let r = cube_mz_experiment(nn, b, m, gamma, cc, trials, seed, pos)?;
            all &= r.within_slack;
            reports.push(json!({
                "degree": r.degree, "grid_factor": r.grid_factor, "knots_per_axis": r.knots_per_axis,
                "knot_count": r.knot_count, "max_factor": r.max_factor, "mean_factor": r.mean_factor,
                "within_slack": r.within_slack, "d_n": r.d_n, "tau0": r.tau0,
                "reference_points_per_axis": r.reference_points_per_axis,
            }));
        }
    }
    let doc = document(
        "cube-mz",
        argv,
        json!({ "n": ns, "m": m, "b": b, "c": cs, "trials": trials, "gamma": gamma, "positive": pos }),
        Some(seed),
        json!({ "runs": reports, "all_within_slack": all }),
    );
    emit_json(&doc, out_path(out))?;
    if !all {
        return Err(CliError::Assertion(format!("some factor exceeds 1 + gamma = {}", 1.0 + gamma)));
    }
    Ok(())
}

/// Lattice of the given spacing on `[−half, half]^m` with every point of sup
/// norm below `hole` removed.
fn punched_lattice(m: usize, spacing: f64, half: f64, hole: f64) -> Result<PointSet, CliError> {
    let full = lattice_net(m, spacing, &Window::centered(m, half)?, &vec![0.0; m])?;
    let mut ps = PointSet::empty(m)?;
    for x in full.iter() {
        if x.iter().fold(0.0f64, |a, v| a.max(v.abs())) >= hole {
            ps.push(x)?;
        }
    }
    Ok(ps)
}

#[allow(clippy::too_many_arguments)]
fn witness(
    argv: &[String],
    input: Option<&Path>,
    delta: f64,
    sigma: f64,
    c3: f64,
    m: usize,
    spacing: f64,
    half: f64,
    window: &WindowArgs,
    out: &Out,
) -> Result<(), CliError> {
    positive("delta", delta)?;
    positive("sigma", sigma)?;
    let net = match input {
        Some(p) => read_points(p)?,
        None => {
            positive("spacing", spacing)?;
            positive("half", half)?;
            punched_lattice(m, spacing, half, delta)?
        }
    };
    let w = resolve_window(window, &net)?;
    let found = necessity_witness_in(&net, delta, sigma, c3, &w)?;
    let (result, ok) = match &found {
        Some(wt) => {
            let ok = wt.net_sup <= 1.0 / delta + 1e-6;
            (json!({ "found": true, "witness": to_value(wt), "within_one_over_delta": ok }), ok)
        }
        None => (json!({ "found": false }), true),
    };
    let doc = document(
        "witness",
        argv,
        json!({
            "input": input.map(PathBuf::from), "delta": delta, "sigma": sigma, "c3": c3,
            "m": m, "spacing": spacing, "half": half, "window": to_value(&w),
        }),
        None,
        result,
    );
    emit_json(&doc, out_path(out))?;
    if !ok {
        return Err(CliError::Assertion("witness exceeds 1/delta on the net".into()));
    }
    Ok(())
}
