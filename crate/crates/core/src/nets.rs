//! Covering and packing nets in the sup-norm.
//!
//! All predicates are evaluated relative to a bounded [`Window`]. Open-cube
//! membership used by covering and packing checks is `‖x − X‖∞ < δ − ε` with
//! `ε = STRICT_REL · δ`, which keeps verdicts deterministic on lattice
//! boundaries.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance applied to strict open-cube membership.
pub const STRICT_REL: f64 = 1e-12;

/// Default recursion depth for [`covering_check`].
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Default cap on the number of points generated by [`lattice_net`].
pub const DEFAULT_POINT_CAP: usize = 10_000_000;

/// Largest number of representative points examined by the exact leaf test
/// of [`covering_check`].
const LEAF_BUDGET: usize = 4096;

/// An ordered finite point set in `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<PointSetRepr> for PointSet {
    type Error = Error;
    fn try_from(r: PointSetRepr) -> Result<Self> {
        PointSet::new(r.dim, r.points)
    }
}

impl From<PointSet> for PointSetRepr {
    fn from(ps: PointSet) -> Self {
        PointSetRepr {
            dim: ps.dim,
            points: ps.iter().map(|p| p.to_vec()).collect(),
        }
    }
}

impl PointSet {
    /// Builds a point set, checking that every point has `dim` finite coordinates.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let mut ps = PointSet::empty(dim)?;
        for p in points {
            ps.push(&p)?;
        }
        Ok(ps)
    }

    pub fn empty(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        Ok(PointSet { dim, coords: Vec::new() })
    }

    /// Builds a point set from row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::Invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Invalid(format!("non-finite coordinate {c}")));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::Invalid(format!(
                "point has {} coordinates, expected {}",
                p.len(),
                self.dim
            )));
        }
        if let Some(c) = p.iter().find(|c| !c.is_finite()) {
            return Err(Error::Invalid(format!("non-finite coordinate {c}")));
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Subset of points in the given index order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointSet { dim: self.dim, coords }
    }

    /// Smallest cube containing all points, or `None` for an empty set.
    pub fn bounding_window(&self) -> Option<Window> {
        if self.is_empty() {
            return None;
        }
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for j in 0..self.dim {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let half = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| 0.5 * (b - a))
            .fold(0.0, f64::max);
        Some(Window {
            center,
            half_side: if half > 0.0 { half } else { 1.0 },
        })
    }
}

/// The closed cube `center + [−half_side, half_side]^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Vec<f64>,
    pub half_side: f64,
}

impl Window {
    pub fn new(center: Vec<f64>, half_side: f64) -> Result<Self> {
        if !(half_side > 0.0 && half_side.is_finite()) {
            return Err(Error::Invalid(format!("window half-side must be positive, got {half_side}")));
        }
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("window center must be a finite nonempty vector".into()));
        }
        Ok(Window { center, half_side })
    }

    /// Window `[−half_side, half_side]^m` centered at the origin.
    pub fn centered(m: usize, half_side: f64) -> Result<Self> {
        Window::new(vec![0.0; m], half_side)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        sup_dist(x, &self.center) <= self.half_side
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverageState {
    Covered,
    Uncovered,
    Undecided,
}

/// Outcome of [`covering_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub state: CoverageState,
    pub witness: Option<Vec<f64>>,
    /// Side length of the smallest sub-cube examined.
    pub resolution_reached: f64,
}

impl CoverageReport {
    pub fn is_covered(&self) -> bool {
        self.state == CoverageState::Covered
    }
}

/// Sup-norm distance.
pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Uniform-cell spatial hash for fixed-radius sup-norm queries.
struct CellIndex {
    dim: usize,
    cell: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl CellIndex {
    fn new(dim: usize, cell: f64) -> Self {
        CellIndex { dim, cell, cells: HashMap::new() }
    }

    fn key(&self, x: &[f64]) -> Vec<i64> {
        x.iter().map(|c| (c / self.cell).floor() as i64).collect()
    }

    fn insert(&mut self, x: &[f64], id: usize) {
        let k = self.key(x);
        self.cells.entry(k).or_default().push(id);
    }

    /// Calls `visit` on every stored id whose cell is adjacent to the cell of
    /// `x`. Covers all points within sup-distance `cell` of `x`.
    fn for_neighbors(&self, x: &[f64], mut visit: impl FnMut(usize)) {
        let base = self.key(x);
        let mut offset = vec![-1i64; self.dim];
        let mut key = base.clone();
        loop {
            for j in 0..self.dim {
                key[j] = base[j] + offset[j];
            }
            if let Some(ids) = self.cells.get(&key) {
                ids.iter().for_each(|&i| visit(i));
            }
            let mut j = 0;
            loop {
                if j == self.dim {
                    return;
                }
                offset[j] += 1;
                if offset[j] <= 1 {
                    break;
                }
                offset[j] = -1;
                j += 1;
            }
        }
    }
}

/// Minimum sup-norm distance over distinct pairs.
pub fn min_pairwise_separation(ps: &PointSet) -> Result<f64> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: n });
    }
    // Sweep along the first coordinate: pairs further apart than the current
    // best in that coordinate cannot improve it.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ps.point(a)[0].total_cmp(&ps.point(b)[0]));
    let mut best = f64::INFINITY;
    for (pos, &i) in order.iter().enumerate() {
        let xi = ps.point(i);
        for &j in &order[pos + 1..] {
            let xj = ps.point(j);
            if xj[0] - xi[0] >= best {
                break;
            }
            best = best.min(sup_dist(xi, xj));
        }
    }
    Ok(best)
}

/// Largest number of other points strictly inside an open cube of half-side
/// `delta1 / 2` centered at a point of the set. An empty set has multiplicity 0.
pub fn packing_multiplicity(ps: &PointSet, delta1: f64) -> Result<usize> {
    if !(delta1 > 0.0) {
        return Err(Error::Invalid(format!("delta1 must be positive, got {delta1}")));
    }
    let r = 0.5 * delta1;
    let strict = r - STRICT_REL * r;
    let mut index = CellIndex::new(ps.dim(), r);
    for (i, p) in ps.iter().enumerate() {
        index.insert(p, i);
    }
    let mut worst = 0usize;
    for p in ps.iter() {
        let mut count = 0usize;
        index.for_neighbors(p, |j| {
            if sup_dist(p, ps.point(j)) < strict {
                count += 1;
            }
        });
        worst = worst.max(count.saturating_sub(1));
    }
    Ok(worst)
}

/// Certified decision whether the open cubes `Q̊_δ(X_ν)` cover the window.
///
/// Sub-cubes are subdivided until they lie inside a single open cube, their
/// center is uncovered, or they meet few enough cubes to be decided exactly
/// by coordinate compression on the cube faces. Reaching `max_depth` yields
/// [`CoverageState::Undecided`].
pub fn covering_check(ps: &PointSet, delta: f64, w: &Window, max_depth: u32) -> Result<CoverageReport> {
    if !(delta > 0.0) {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    if w.dim() != ps.dim() {
        return Err(Error::Invalid(format!(
            "window dimension {} does not match point dimension {}",
            w.dim(),
            ps.dim()
        )));
    }
    let ctx = Cover {
        ps,
        r: delta - STRICT_REL * delta,
        max_depth,
    };
    let all: Vec<usize> = (0..ps.len()).collect();
    let mut smallest = 2.0 * w.half_side;
    let verdict = ctx.decide(&w.center, w.half_side, &all, 0, &mut smallest);
    Ok(match verdict {
        Verdict::Covered => CoverageReport {
            state: CoverageState::Covered,
            witness: None,
            resolution_reached: smallest,
        },
        Verdict::Uncovered(x) => CoverageReport {
            state: CoverageState::Uncovered,
            witness: Some(x),
            resolution_reached: smallest,
        },
        Verdict::Undecided(side) => CoverageReport {
            state: CoverageState::Undecided,
            witness: None,
            resolution_reached: side,
        },
    })
}

enum Verdict {
    Covered,
    Uncovered(Vec<f64>),
    Undecided(f64),
}

struct Cover<'a> {
    ps: &'a PointSet,
    r: f64,
    max_depth: u32,
}

impl Cover<'_> {
    fn inside_some(&self, x: &[f64], cands: &[usize]) -> bool {
        cands.iter().any(|&i| sup_dist(x, self.ps.point(i)) < self.r)
    }

    fn decide(&self, c: &[f64], s: f64, parent: &[usize], depth: u32, smallest: &mut f64) -> Verdict {
        *smallest = smallest.min(2.0 * s);
        let cands: Vec<usize> = parent
            .iter()
            .copied()
            .filter(|&i| sup_dist(self.ps.point(i), c) < s + self.r)
            .collect();
        if cands.iter().any(|&i| sup_dist(self.ps.point(i), c) + s < self.r) {
            return Verdict::Covered;
        }
        if !self.inside_some(c, &cands) {
            return Verdict::Uncovered(c.to_vec());
        }
        if let Some(v) = self.exact_leaf(c, s, &cands) {
            return v;
        }
        if depth >= self.max_depth {
            return Verdict::Undecided(2.0 * s);
        }
        let m = c.len();
        let h = 0.5 * s;
        let mut undecided: Option<f64> = None;
        let mut child = vec![0.0; m];
        for corner in 0..(1usize << m) {
            for j in 0..m {
                child[j] = if corner >> (m - 1 - j) & 1 == 1 { c[j] + h } else { c[j] - h };
            }
            match self.decide(&child, h, &cands, depth + 1, smallest) {
                Verdict::Covered => {}
                Verdict::Uncovered(x) => return Verdict::Uncovered(x),
                Verdict::Undecided(side) => {
                    undecided = Some(undecided.map_or(side, |u: f64| u.min(side)));
                }
            }
        }
        match undecided {
            Some(side) => Verdict::Undecided(side),
            None => Verdict::Covered,
        }
    }

    /// Exact decision for a box meeting few cubes: along each axis the cube
    /// faces split the box into open intervals and breakpoints, and coverage is
    /// constant on every product of such pieces.
    fn exact_leaf(&self, c: &[f64], s: f64, cands: &[usize]) -> Option<Verdict> {
        let m = c.len();
        let mut reps: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut total = 1usize;
        for j in 0..m {
            let (lo, hi) = (c[j] - s, c[j] + s);
            let mut bp = vec![lo, hi];
            for &i in cands {
                let x = self.ps.point(i)[j];
                for e in [x - self.r, x + self.r] {
                    if e > lo && e < hi {
                        bp.push(e);
                    }
                }
            }
            bp.sort_by(f64::total_cmp);
            bp.dedup();
            let mut axis = Vec::with_capacity(2 * bp.len());
            for k in 0..bp.len() {
                axis.push(bp[k]);
                if k + 1 < bp.len() {
                    axis.push(0.5 * (bp[k] + bp[k + 1]));
                }
            }
            total = total.saturating_mul(axis.len());
            if total > LEAF_BUDGET {
                return None;
            }
            reps.push(axis);
        }
        let mut idx = vec![0usize; m];
        let mut x = vec![0.0; m];
        loop {
            for j in 0..m {
                x[j] = reps[j][idx[j]];
            }
            if !self.inside_some(&x, cands) {
                return Some(Verdict::Uncovered(x));
            }
            let mut j = m;
            loop {
                if j == 0 {
                    return Some(Verdict::Covered);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < reps[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}

/// Greedy thinning in index order: a point is kept iff it lies outside the
/// open cube `Q̊_δ(Z)` of every previously kept point `Z`.
///
/// The output is a δ-packing, and every input point lies within sup-distance
/// `< δ` of an output point.
pub fn greedy_thin(ps: &PointSet, delta: f64) -> Result<PointSet> {
    if !(delta > 0.0) {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    if ps.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let mut index = CellIndex::new(ps.dim(), delta);
    let mut kept: Vec<usize> = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let mut blocked = false;
        index.for_neighbors(p, |k| {
            if !blocked && sup_dist(p, ps.point(k)) < delta {
                blocked = true;
            }
        });
        if !blocked {
            index.insert(p, i);
            kept.push(i);
        }
    }
    Ok(ps.select(&kept))
}

/// Bound on the number of cubes `Q_δ(X_ν)` of a δ₁-packing meeting a fixed one:
/// `⌊2^m((4δ/δ₁)^m − 1)⌋ − 1`.
///
/// For `m = 1` and `δ` slightly above `δ₁/2` this value is smaller than the
/// true maximum; see [`intersection_bound_counting`].
pub fn intersection_bound(m: u32, delta: f64, delta1: f64) -> Result<u64> {
    Ok(intersection_bound_counting(m, delta, delta1)?.saturating_sub(1))
}

/// Volume-counting bound `⌊2^m((4δ/δ₁)^m − 1)⌋` on the number of cubes
/// `Q_δ(X_ν)` of a δ₁-packing meeting a fixed one.
pub fn intersection_bound_counting(m: u32, delta: f64, delta1: f64) -> Result<u64> {
    if m == 0 || !(delta > 0.0) || !(delta1 > 0.0) {
        return Err(Error::Invalid("m, delta and delta1 must be positive".into()));
    }
    if delta1 >= 2.0 * delta {
        return Err(Error::HypothesisViolated(format!(
            "delta1 = {delta1} must be smaller than 2*delta = {}",
            2.0 * delta
        )));
    }
    let mi = m as i32;
    let v = 2f64.powi(mi) * ((4.0 * delta / delta1).powi(mi) - 1.0);
    Ok(v.floor() as u64)
}

/// Largest number of other closed cubes `Q_h(X_μ)` meeting a cube `Q_h(X_ν)`.
pub fn max_cube_intersections(centers: &PointSet, h: f64) -> usize {
    let mut index = CellIndex::new(centers.dim(), 2.0 * h);
    for (i, p) in centers.iter().enumerate() {
        index.insert(p, i);
    }
    let mut worst = 0;
    for (i, p) in centers.iter().enumerate() {
        let mut count = 0;
        index.for_neighbors(p, |j| {
            if j != i && sup_dist(p, centers.point(j)) <= 2.0 * h {
                count += 1;
            }
        });
        worst = worst.max(count);
    }
    worst
}

/// Splits the cubes `Q_h(X_ν)` into at most `n_bound + 1` families of
/// pairwise disjoint cubes, assigning each cube in index order to the first
/// compatible family.
pub fn disjoint_partition(centers: &PointSet, h: f64, n_bound: usize) -> Result<Vec<Vec<usize>>> {
    if !(h > 0.0) {
        return Err(Error::Invalid(format!("h must be positive, got {h}")));
    }
    let mut bins: Vec<(Vec<usize>, CellIndex)> = Vec::new();
    for (i, p) in centers.iter().enumerate() {
        let mut placed = false;
        for (members, index) in bins.iter_mut() {
            let mut clash = false;
            index.for_neighbors(p, |j| {
                if !clash && sup_dist(p, centers.point(j)) <= 2.0 * h {
                    clash = true;
                }
            });
            if !clash {
                members.push(i);
                index.insert(p, i);
                placed = true;
                break;
            }
        }
        if !placed {
            if bins.len() > n_bound {
                return Err(Error::MultiplicityExceeded { index: i });
            }
            let mut index = CellIndex::new(centers.dim(), 2.0 * h);
            index.insert(p, i);
            bins.push((vec![i], index));
        }
    }
    Ok(bins.into_iter().map(|(m, _)| m).collect())
}

/// Lattice points `offset + spacing·Z^m` inside the closed window, in
/// row-major order (last coordinate varies fastest).
pub fn lattice_net(m: usize, spacing: f64, w: &Window, offset: &[f64]) -> Result<PointSet> {
    lattice_net_capped(m, spacing, w, offset, DEFAULT_POINT_CAP)
}

pub fn lattice_net_capped(m: usize, spacing: f64, w: &Window, offset: &[f64], cap: usize) -> Result<PointSet> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Invalid(format!("spacing must be positive, got {spacing}")));
    }
    if w.dim() != m || offset.len() != m {
        return Err(Error::Invalid("window, offset and m must agree in dimension".into()));
    }
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut total: u128 = 1;
    for j in 0..m {
        let lo = w.center[j] - w.half_side;
        let hi = w.center[j] + w.half_side;
        let k0 = ((lo - offset[j]) / spacing).floor() as i64 - 1;
        let k1 = ((hi - offset[j]) / spacing).ceil() as i64 + 1;
        if (k1 - k0) as u128 > cap as u128 + 2 {
            return Err(Error::PointBudgetExceeded { needed: (k1 - k0) as u128, cap });
        }
        let axis: Vec<f64> = (k0..=k1)
            .map(|k| offset[j] + spacing * k as f64)
            .filter(|&x| x >= lo && x <= hi)
            .collect();
        total = total.saturating_mul(axis.len() as u128);
        axes.push(axis);
    }
    if total > cap as u128 {
        return Err(Error::PointBudgetExceeded { needed: total, cap });
    }
    let mut coords = Vec::with_capacity(total as usize * m);
    if total > 0 {
        let mut idx = vec![0usize; m];
        'outer: loop {
            for j in 0..m {
                coords.push(axes[j][idx[j]]);
            }
            let mut j = m;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < axes[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
    PointSet::from_flat(m, coords)
}
