#![allow(dead_code)]

use mz_core::grid::{lobatto_nodes, refine_max};
use mz_core::Complex64;
use rand::Rng;

/// Polynomial of degree at most `n` in each of `m` variables, monomial basis,
/// coefficient of `x^k` at the row-major index of `k`.
#[derive(Clone, Debug)]
pub struct TensorPoly {
    pub m: usize,
    pub n: usize,
    pub coeffs: Vec<Complex64>,
}

impl TensorPoly {
    pub fn random(m: usize, n: usize, complex: bool, rng: &mut impl Rng) -> Self {
        let coeffs = (0..(n + 1).pow(m as u32))
            .map(|_| {
                let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
                Complex64::new(rng.gen_range(-1.0..1.0), im)
            })
            .collect();
        TensorPoly { m, n, coeffs }
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut k = vec![0; self.m];
        for j in (0..self.m).rev() {
            k[j] = idx % (self.n + 1);
            idx /= self.n + 1;
        }
        k
    }

    /// Zeroes every coefficient with total degree above `n`.
    pub fn restrict_total_degree(mut self) -> Self {
        for i in 0..self.coeffs.len() {
            if self.multi_index(i).iter().sum::<usize>() > self.n {
                self.coeffs[i] = Complex64::new(0.0, 0.0);
            }
        }
        self
    }

    pub fn coeff_abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `D^k P(x)` by differentiating monomials.
    pub fn deriv(&self, k: &[usize], x: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.multi_index(i);
            let mut term = *c;
            for j in 0..self.m {
                if e[j] < k[j] {
                    term = Complex64::new(0.0, 0.0);
                    break;
                }
                let falling: f64 = (0..k[j]).map(|t| (e[j] - t) as f64).product();
                term *= falling * x[j].powi((e[j] - k[j]) as i32);
            }
            acc += term;
        }
        acc
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.deriv(&vec![0; self.m], x)
    }

    /// Values on the tensor grid `axes[0] × … × axes[m−1]`, row-major, by
    /// contracting one axis at a time.
    pub fn grid_values(&self, axis: &[f64]) -> Vec<Complex64> {
        let np = self.n + 1;
        let k = axis.len();
        let powers: Vec<f64> = axis
            .iter()
            .flat_map(|&x| (0..np).map(move |e| x.powi(e as i32)))
            .collect();
        let mut data = self.coeffs.clone();
        let mut dims = vec![np; self.m];
        for ax in 0..self.m {
            let outer: usize = dims[..ax].iter().product();
            let inner: usize = dims[ax + 1..].iter().product();
            let mut next = vec![Complex64::new(0.0, 0.0); outer * k * inner];
            for o in 0..outer {
                for t in 0..k {
                    let pw = &powers[t * np..(t + 1) * np];
                    let dst = &mut next[(o * k + t) * inner..(o * k + t + 1) * inner];
                    for (e, &p) in pw.iter().enumerate() {
                        let src = &data[(o * np + e) * inner..(o * np + e + 1) * inner];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += s * p;
                        }
                    }
                }
            }
            data = next;
            dims[ax] = k;
        }
        data
    }

    /// `‖P‖` on `center + [−half, half]^m`: max over a grid of `nodes + 1`
    /// Chebyshev-Lobatto points per axis, refined by a local pattern search.
    /// Never exceeds the true norm.
    pub fn cube_norm(&self, center: f64, half: f64, nodes: usize) -> f64 {
        let axis: Vec<f64> = lobatto_nodes(nodes, half).into_iter().map(|t| center + t).collect();
        let vals = self.grid_values(&axis);
        let (best_idx, best) = vals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let k = axis.len();
        let mut x = vec![0.0; self.m];
        let mut r = best_idx;
        for j in (0..self.m).rev() {
            x[j] = axis[r % k];
            r /= k;
        }
        let c = vec![center; self.m];
        refine_max(|y| self.eval(y).norm(), x, best, &c, half, 2.0 * half / nodes as f64).value
    }
}

/// Grid size per axis used for norm estimates in dimension `m`.
pub fn norm_nodes(m: usize) -> usize {
    match m {
        1 => 256,
        2 => 64,
        _ => 40,
    }
}

/// Relative floating-point allowance for comparing a computed quantity with
/// a bound built from the same data.
pub const ROUNDING: f64 = 1e-9;
