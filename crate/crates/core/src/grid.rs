//! Tensor grids and sup-norm estimates on cubes.

use std::f64::consts::PI;

/// Gauss-Chebyshev nodes `b·cos((2i+1)π/(2k))`, `i = 0..k`.
pub fn gauss_chebyshev_nodes(k: usize, b: f64) -> Vec<f64> {
    (0..k)
        .map(|i| b * ((2 * i + 1) as f64 * PI / (2 * k) as f64).cos())
        .collect()
}

/// Chebyshev-Lobatto nodes `b·cos(jπ/k)`, `j = 0..=k`. Node sets for `k` and
/// any multiple of `k` are nested.
pub fn lobatto_nodes(k: usize, b: f64) -> Vec<f64> {
    if k == 0 {
        return vec![0.0];
    }
    (0..=k).map(|j| b * (j as f64 * PI / k as f64).cos()).collect()
}

/// `n` equispaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Midpoints of `n` equal cells partitioning `[lo, hi]`.
pub fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Calls `f` on every point of the tensor product of `axes`, row-major.
pub fn for_each_tensor_point(axes: &[Vec<f64>], mut f: impl FnMut(&[f64])) {
    let m = axes.len();
    if m == 0 || axes.iter().any(|a| a.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; m];
    let mut x: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&x);
        let mut j = m;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                x[j] = axes[j][idx[j]];
                break;
            }
            idx[j] = 0;
            x[j] = axes[j][0];
        }
    }
}

/// Sup of `|f|` over a cube, with the location found.
#[derive(Clone, Debug, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: Vec<f64>,
}

/// Estimates `sup |f|` over the cube `center + [−half, half]^m` by the max over
/// a tensor grid of Chebyshev-Lobatto nodes followed by a pattern search
/// around the best node. The result never exceeds the true sup.
pub fn sup_on_cube(f: impl Fn(&[f64]) -> f64, center: &[f64], half: f64, nodes: usize) -> SupEstimate {
    let axes: Vec<Vec<f64>> = center
        .iter()
        .map(|&c| lobatto_nodes(nodes, half).into_iter().map(|t| c + t).collect())
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut arg = center.to_vec();
    for_each_tensor_point(&axes, |x| {
        let v = f(x);
        if v > best {
            best = v;
            arg.copy_from_slice(x);
        }
    });
    refine_max(f, arg, best, center, half, 2.0 * half / nodes.max(1) as f64)
}

/// Coordinate pattern search with shrinking steps from `start`, where `f`
/// takes the value `start_value`, clamped to the cube `center + [−half, half]^m`.
pub fn refine_max(
    f: impl Fn(&[f64]) -> f64,
    start: Vec<f64>,
    start_value: f64,
    center: &[f64],
    half: f64,
    step: f64,
) -> SupEstimate {
    let m = center.len();
    let mut best = start_value;
    let mut arg = start;
    let mut step = step;
    let mut y = arg.clone();
    for _ in 0..60 {
        let mut improved = false;
        for j in 0..m {
            for dir in [-1.0, 1.0] {
                let old = y[j];
                y[j] = (old + dir * step).clamp(center[j] - half, center[j] + half);
                let v = f(&y);
                if v > best {
                    best = v;
                    arg.copy_from_slice(&y);
                    improved = true;
                } else {
                    y[j] = old;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-14 * half.max(1e-300) {
                break;
            }
        }
    }
    SupEstimate { value: best, argmax: arg }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_nested() {
        let a = lobatto_nodes(4, 1.0);
        let b = lobatto_nodes(8, 1.0);
        for (i, x) in a.iter().enumerate() {
            assert!((b[2 * i] - x).abs() < 1e-15);
        }
    }

    #[test]
    fn tensor_order_row_major() {
        let mut seen = Vec::new();
        for_each_tensor_point(&[vec![0.0, 1.0], vec![5.0, 6.0, 7.0]], |x| seen.push(x.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0.0, 6.0]);
        assert_eq!(seen[3], vec![1.0, 5.0]);
    }

    #[test]
    fn refinement_finds_interior_peak() {
        let f = |x: &[f64]| 1.0 - (x[0] - 0.123).powi(2) - (x[1] + 0.321).powi(2);
        let s = sup_on_cube(f, &[0.0, 0.0], 1.0, 8);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.value <= 1.0);
    }
}
