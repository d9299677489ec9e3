//! Net averages over rectangles, dyadic net profiles and net norms.
//!
//! The net average `fbar(t) = sup_{|I_i| >= t_i} |int_I f| / |I|` is computed
//! exactly for piecewise-constant `f`: along each axis the optimal interval
//! has one end on a grid line and the other on a grid line or at distance
//! exactly `t_i` from it, so a finite candidate set suffices. Rectangle
//! integrals come from a summed-area table with multilinear interpolation
//! inside cells, which is exact for piecewise-constant data.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{for_each_index, strides_of, GridFunction};
use crate::hardy::{hardy_point, EpsilonMask};

/// Prefix integrals of `f` at every grid vertex.
#[derive(Debug, Clone)]
pub struct SummedArea {
    breakpoints: Vec<Vec<f64>>,
    /// vertex counts per axis (cells + 1)
    shape: Vec<usize>,
    table: Vec<Complex64>,
}

/// Position of a coordinate relative to the vertex lattice of one axis.
#[derive(Debug, Clone, Copy)]
struct AxisPoint {
    j: usize,
    frac: f64,
}

impl SummedArea {
    pub fn new(f: &GridFunction) -> Self {
        let d = f.dim();
        let shape: Vec<usize> = f.shape().iter().map(|n| n + 1).collect();
        let strides = strides_of(&shape);
        let mut table = vec![Complex64::new(0.0, 0.0); shape.iter().product()];
        // cell masses into table at vertex idx+1
        let mut k = 0;
        for_each_index(&f.shape(), |idx| {
            let flat: usize = idx.iter().zip(&strides).map(|(&j, s)| (j + 1) * s).sum();
            table[flat] = f.values()[k] * f.cell_volume(idx);
            k += 1;
        });
        // running sums along each axis
        for i in 0..d {
            let mut outer = shape.clone();
            outer[i] = 1;
            for_each_index(&outer, |idx| {
                let base: usize = idx.iter().zip(&strides).map(|(&j, s)| j * s).sum();
                for j in 1..shape[i] {
                    let prev = table[base + (j - 1) * strides[i]];
                    table[base + j * strides[i]] += prev;
                }
            });
        }
        Self {
            breakpoints: f.axes().iter().map(|a| a.breakpoints().to_vec()).collect(),
            shape,
            table,
        }
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    fn locate(&self, i: usize, x: f64) -> AxisPoint {
        let bp = &self.breakpoints[i];
        let n = bp.len() - 1;
        if x <= bp[0] {
            return AxisPoint { j: 0, frac: 0.0 };
        }
        if x >= bp[n] {
            return AxisPoint { j: n - 1, frac: 1.0 };
        }
        let j = bp.partition_point(|&b| b <= x).saturating_sub(1).min(n - 1);
        AxisPoint { j, frac: (x - bp[j]) / (bp[j + 1] - bp[j]) }
    }

    /// `int_{x' <= x} f` (corner at the lower-left grid corner).
    pub fn cumulative(&self, x: &[f64]) -> Complex64 {
        let pts: Vec<AxisPoint> = x.iter().enumerate().map(|(i, &xi)| self.locate(i, xi)).collect();
        self.cumulative_at(&pts)
    }

    fn cumulative_at(&self, pts: &[AxisPoint]) -> Complex64 {
        let d = pts.len();
        let strides = strides_of(&self.shape);
        let mut s = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut flat = 0;
            for (i, pt) in pts.iter().enumerate() {
                if corner >> i & 1 == 1 {
                    w *= pt.frac;
                    flat += (pt.j + 1) * strides[i];
                } else {
                    w *= 1.0 - pt.frac;
                    flat += pt.j * strides[i];
                }
            }
            if w != 0.0 {
                s += self.table[flat] * w;
            }
        }
        s
    }

    /// `int_I f` for the box `prod (lo_i, hi_i)`.
    pub fn rect_integral(&self, lo: &[f64], hi: &[f64]) -> Complex64 {
        let d = self.dim();
        let lp: Vec<AxisPoint> = lo.iter().enumerate().map(|(i, &x)| self.locate(i, x)).collect();
        let hp: Vec<AxisPoint> = hi.iter().enumerate().map(|(i, &x)| self.locate(i, x)).collect();
        let mut s = Complex64::new(0.0, 0.0);
        let mut pts = lp.clone();
        for corner in 0..(1usize << d) {
            let mut sign = 1.0;
            for i in 0..d {
                if corner >> i & 1 == 1 {
                    pts[i] = hp[i];
                } else {
                    pts[i] = lp[i];
                    sign = -sign;
                }
            }
            s += self.cumulative_at(&pts) * sign;
        }
        s
    }

    /// Candidate intervals `(a, b)` on axis `i` with `b - a >= t`.
    fn candidates(&self, i: usize, t: f64) -> Vec<(f64, f64)> {
        let g = &self.breakpoints[i];
        let slack = 1e-12 * t;
        let mut out = Vec::new();
        for (ia, &a) in g.iter().enumerate() {
            out.push((a, a + t));
            out.push((a - t, a));
            for &b in &g[ia + 1..] {
                if b - a >= t - slack {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Exact net average `fbar(t; M)` for the represented function.
    pub fn net_average(&self, t: &[f64]) -> f64 {
        let d = self.dim();
        let cands: Vec<Vec<(f64, f64)>> = (0..d).map(|i| self.candidates(i, t[i])).collect();
        // cumulative tables reduced axis by axis
        let vertex_shape = self.shape.clone();
        sup_recursive(&self.breakpoints, &cands, &vertex_shape, &self.table, 0, 1.0)
    }
}

/// Interpolates a vertex table along its leading axis at `x`.
fn slice_at(bp: &[f64], shape: &[usize], table: &[Complex64], x: f64) -> Vec<Complex64> {
    let inner: usize = shape[1..].iter().product();
    let n = bp.len() - 1;
    let (j, frac) = if x <= bp[0] {
        (0, 0.0)
    } else if x >= bp[n] {
        (n - 1, 1.0)
    } else {
        let j = bp.partition_point(|&b| b <= x).saturating_sub(1).min(n - 1);
        (j, (x - bp[j]) / (bp[j + 1] - bp[j]))
    };
    (0..inner)
        .map(|r| table[j * inner + r] * (1.0 - frac) + table[(j + 1) * inner + r] * frac)
        .collect()
}

fn sup_recursive(
    bps: &[Vec<f64>],
    cands: &[Vec<(f64, f64)>],
    shape: &[usize],
    table: &[Complex64],
    axis: usize,
    volume: f64,
) -> f64 {
    let bp = &bps[axis];
    let mut best = 0.0f64;
    if axis + 1 == bps.len() {
        for &(a, b) in &cands[axis] {
            let ia = slice_at(bp, shape, table, a)[0];
            let ib = slice_at(bp, shape, table, b)[0];
            let r = (ib - ia).norm() / (volume * (b - a));
            best = best.max(r);
        }
        return best;
    }
    for &(a, b) in &cands[axis] {
        let sa = slice_at(bp, shape, table, a);
        let sb = slice_at(bp, shape, table, b);
        let diff: Vec<Complex64> = sb.iter().zip(&sa).map(|(x, y)| x - y).collect();
        let r = sup_recursive(bps, cands, &shape[1..], &diff, axis + 1, volume * (b - a));
        best = best.max(r);
    }
    best
}

/// Net average of `f` at side lengths `t`.
pub fn net_average(f: &GridFunction, t: &[f64]) -> Result<f64> {
    if t.len() != f.dim() || t.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter(format!("side lengths must be d positive reals, got {t:?}")));
    }
    Ok(SummedArea::new(f).net_average(t))
}

/// Box of integer exponents `k_min..=k_max` per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicLattice {
    pub k_min: Vec<i32>,
    pub k_max: Vec<i32>,
}

impl DyadicLattice {
    pub fn new(k_min: Vec<i32>, k_max: Vec<i32>) -> Result<Self> {
        if k_min.is_empty() || k_min.len() != k_max.len() {
            return Err(Error::EmptyLattice);
        }
        if k_min.iter().zip(&k_max).any(|(a, b)| a > b) {
            return Err(Error::EmptyLattice);
        }
        Ok(Self { k_min, k_max })
    }

    pub fn uniform(d: usize, k_min: i32, k_max: i32) -> Result<Self> {
        Self::new(vec![k_min; d], vec![k_max; d])
    }

    /// Smallest lattice whose ends saturate for `f`: `2^{k_min} <= ` smallest
    /// cell width and `2^{k_max} >= ` grid extent on every axis.
    pub fn covering(f: &GridFunction) -> Self {
        let k_min = f.axes().iter().map(|a| a.min_width().log2().floor() as i32).collect();
        let k_max = f.axes().iter().map(|a| a.extent().log2().ceil() as i32).collect();
        Self { k_min, k_max }
    }

    pub fn dim(&self) -> usize {
        self.k_min.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.k_min.iter().zip(&self.k_max).map(|(a, b)| (b - a + 1) as usize).collect()
    }

    pub fn points(&self) -> Vec<Vec<i32>> {
        let mut out = Vec::new();
        for_each_index(&self.shape(), |idx| {
            out.push(idx.iter().zip(&self.k_min).map(|(&j, &k)| k + j as i32).collect());
        });
        out
    }
}

/// `fbar(2^{k_1}, ..., 2^{k_d})` on a dyadic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct NetProfile {
    pub lattice: DyadicLattice,
    pub values: Vec<f64>,
    /// smallest cell width per axis of the profiled function
    pub min_width: Vec<f64>,
    /// grid extent per axis of the profiled function
    pub extent: Vec<f64>,
}

impl NetProfile {
    pub fn value(&self, k: &[i32]) -> f64 {
        let shape = self.lattice.shape();
        let strides = strides_of(&shape);
        let flat: usize = k
            .iter()
            .zip(&self.lattice.k_min)
            .zip(&strides)
            .map(|((&ki, &k0), s)| (ki - k0) as usize * s)
            .sum();
        self.values[flat]
    }

    pub fn lower_saturated(&self, i: usize) -> bool {
        2f64.powi(self.lattice.k_min[i]) <= self.min_width[i]
    }

    pub fn upper_saturated(&self, i: usize) -> bool {
        2f64.powi(self.lattice.k_max[i]) >= self.extent[i]
    }

    /// Largest increase between neighbouring lattice points (0 for a
    /// monotone profile).
    pub fn monotonicity_defect(&self) -> f64 {
        let shape = self.lattice.shape();
        let strides = strides_of(&shape);
        let mut worst = 0.0f64;
        for_each_index(&shape, |idx| {
            let flat: usize = idx.iter().zip(&strides).map(|(&j, s)| j * s).sum();
            for i in 0..shape.len() {
                if idx[i] + 1 < shape[i] {
                    worst = worst.max(self.values[flat + strides[i]] - self.values[flat]);
                }
            }
        });
        worst
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// One row per lattice point: `k0,..,value`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let d = self.lattice.dim();
        let mut header: Vec<String> = (0..d).map(|i| format!("k{i}")).collect();
        header.push("value".into());
        wr.write_record(&header)?;
        for (k, v) in self.lattice.points().iter().zip(&self.values) {
            let mut row: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            row.push(v.to_string());
            wr.write_record(&row)?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn net_profile(f: &GridFunction, lattice: &DyadicLattice) -> Result<NetProfile> {
    if lattice.dim() != f.dim() {
        return Err(Error::DimensionMismatch("lattice dimension".into()));
    }
    let sat = SummedArea::new(f);
    let values = lattice
        .points()
        .into_par_iter()
        .map(|k| {
            let t: Vec<f64> = k.iter().map(|&ki| 2f64.powi(ki)).collect();
            sat.net_average(&t)
        })
        .collect();
    Ok(NetProfile {
        lattice: lattice.clone(),
        values,
        min_width: f.axes().iter().map(|a| a.min_width()).collect(),
        extent: f.axes().iter().map(|a| a.extent()).collect(),
    })
}

/// Dyadic net norm together with how much of it came from the analytic
/// continuation past the lattice ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetNorm {
    pub value: f64,
    /// the plain sum over lattice points, `(sum)^{1/q}`
    pub lattice_value: f64,
    /// true when some lattice end does not saturate, so the tail beyond it
    /// is missing from `value`
    pub truncated: bool,
}

/// `(sum_k (2^{(k_1+..+k_d)/p} fbar(2^k))^q)^{1/q}` (supremum for `q = inf`).
///
/// Below the smallest cell width `fbar` is constant in that exponent, and
/// beyond the grid extent it halves with every step, so both tails are
/// geometric and are added in closed form when the lattice reaches them.
pub fn net_norm(profile: &NetProfile, p: f64, q: f64) -> Result<NetNorm> {
    if !(p > 0.0 && p.is_finite()) || !(q > 0.0) {
        return Err(Error::InvalidParameter(format!("need 0 < p < inf, 0 < q <= inf; got ({p}, {q})")));
    }
    let lat = &profile.lattice;
    let d = lat.dim();
    let shape = lat.shape();
    let mut truncated = false;
    // per-axis multipliers folding the geometric tails into the end layers
    let mut mult: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let n = shape[i];
        let mut m = vec![1.0; n];
        let (low, high) = if q.is_infinite() {
            (1.0, if p >= 1.0 { 1.0 } else { f64::INFINITY })
        } else {
            let low = 1.0 / (1.0 - 2f64.powf(-q / p));
            let r = 2f64.powf(q * (1.0 / p - 1.0));
            (low, if r < 1.0 { 1.0 / (1.0 - r) } else { f64::INFINITY })
        };
        if profile.lower_saturated(i) {
            m[0] = low;
        } else {
            truncated = true;
        }
        if profile.upper_saturated(i) {
            m[n - 1] = if n == 1 && profile.lower_saturated(i) { low + high - 1.0 } else { high };
        } else {
            truncated = true;
        }
        mult.push(m);
    }
    let mut total = 0.0f64;
    let mut plain = 0.0f64;
    let mut flat = 0;
    for_each_index(&shape, |idx| {
        let v = profile.values[flat];
        flat += 1;
        if v == 0.0 {
            return;
        }
        let ksum: i32 = idx.iter().zip(&lat.k_min).map(|(&j, &k0)| k0 + j as i32).sum();
        let term = 2f64.powf(ksum as f64 / p) * v;
        let m: f64 = idx.iter().enumerate().map(|(i, &j)| mult[i][j]).product();
        if q.is_infinite() {
            plain = plain.max(term);
            total = total.max(if m.is_infinite() { f64::INFINITY } else { term });
        } else {
            let tq = term.powf(q);
            plain += tq;
            total += tq * m;
        }
    });
    if q.is_infinite() {
        Ok(NetNorm { value: total, lattice_value: plain, truncated })
    } else {
        Ok(NetNorm { value: total.powf(1.0 / q), lattice_value: plain.powf(1.0 / q), truncated })
    }
}

/// `(|int_I f| / prod t_i, 2^d fbar(t / 2))`.
pub fn doubling_check(f: &GridFunction, rect: &[(f64, f64)], t: &[f64]) -> Result<(f64, f64)> {
    let d = f.dim();
    if rect.len() != d || t.len() != d {
        return Err(Error::DimensionMismatch("rectangle / side-length dimension".into()));
    }
    for (&(a, b), &ti) in rect.iter().zip(t) {
        if !(b > a) || !(ti > 0.0) || b - a > ti {
            return Err(Error::Precondition(format!("need 0 < |I_i| <= t_i, got ({a}, {b}) with t = {ti}")));
        }
    }
    let sat = SummedArea::new(f);
    let lo: Vec<f64> = rect.iter().map(|r| r.0).collect();
    let hi: Vec<f64> = rect.iter().map(|r| r.1).collect();
    let lhs = sat.rect_integral(&lo, &hi).norm() / t.iter().product::<f64>();
    let half: Vec<f64> = t.iter().map(|x| 0.5 * x).collect();
    let rhs = 2f64.powi(d as i32) * sat.net_average(&half);
    Ok((lhs, rhs))
}

/// Both sides of the dyadic bound on `H_eps f` over an annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub lhs: f64,
    pub rhs: f64,
}

/// `lhs = sup |H_eps f(t)|` over sampled `t` with `2^{k_i} <= |t_i| <= 2^{k_i+1}`
/// (all sign patterns, `samples` geometric points per axis);
/// `rhs = 2^d sum_{m >= k} fbar(2^{m_1 - 1}, ..., 2^{m_d - 1})`.
///
/// The infinite sum is exact: once `2^{m_i - 1}` exceeds the grid extent the
/// terms halve with every step, so the last layer counts twice.
pub fn hardy_tail_bound(f: &GridFunction, eps: &EpsilonMask, k: &[i32], samples: usize) -> Result<TailBound> {
    let d = f.dim();
    if eps.dim() != d || k.len() != d {
        return Err(Error::DimensionMismatch("mask / exponent dimension".into()));
    }
    let samples = samples.max(2);
    let per_axis: Vec<Vec<f64>> = k
        .iter()
        .map(|&ki| {
            let lo = 2f64.powi(ki);
            (0..samples)
                .map(|s| lo * 2f64.powf(s as f64 / (samples - 1) as f64))
                .flat_map(|t| [t, -t])
                .collect()
        })
        .collect();
    let shape: Vec<usize> = per_axis.iter().map(Vec::len).collect();
    let mut pts = Vec::new();
    for_each_index(&shape, |idx| {
        pts.push(idx.iter().enumerate().map(|(i, &j)| per_axis[i][j]).collect::<Vec<f64>>());
    });
    let lhs = pts
        .par_iter()
        .map(|t| hardy_point(f, eps, t).map(|v| v.norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let sat = SummedArea::new(f);
    let top: Vec<i32> = (0..d)
        .map(|i| k[i].max(f.axis(i).extent().log2().ceil() as i32 + 1))
        .collect();
    let box_shape: Vec<usize> = (0..d).map(|i| (top[i] - k[i] + 1) as usize).collect();
    let mut ms = Vec::new();
    for_each_index(&box_shape, |idx| ms.push(idx.to_vec()));
    let sum: f64 = ms
        .par_iter()
        .map(|idx| {
            let t: Vec<f64> = idx.iter().enumerate().map(|(i, &j)| 2f64.powi(k[i] + j as i32 - 1)).collect();
            let w: f64 = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| if j + 1 == box_shape[i] { 2.0 } else { 1.0 })
                .product();
            w * sat.net_average(&t)
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(TailBound { lhs, rhs: 2f64.powi(d as i32) * sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;

    /// Brute-force fbar for 1-d functions: all intervals with endpoints on
    /// a lattice of step `h`, which contains every optimal interval when the
    /// breakpoints and `t` are multiples of `h`.
    fn brute_fbar_1d(f: &GridFunction, t: f64, h: f64) -> f64 {
        let sat = SummedArea::new(f);
        let xs: Vec<f64> = (-400..=400).map(|k| k as f64 * h).collect();
        let mut best = 0.0f64;
        for &a in &xs {
            for &b in &xs {
                if b - a >= t - 1e-9 {
                    best = best.max(sat.rect_integral(&[a], &[b]).norm() / (b - a));
                }
            }
        }
        best
    }

    #[test]
    fn indicator_profile() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let prof = net_profile(&f, &DyadicLattice::uniform(1, -3, 4).unwrap()).unwrap();
        for k in -3..=4 {
            let expected = if k <= 0 { 1.0 } else { 2f64.powi(-k) };
            assert!((prof.value(&[k]) - expected).abs() < 1e-14, "k={k}");
            let t = 2f64.powi(k);
            assert!((brute_fbar_1d(&f, t, 0.0625) - prof.value(&[k])).abs() < 1e-12);
        }
        let g = GridFunction::indicator(&[(0.0, 2.0)]).unwrap();
        assert!((net_average(&g, &[1.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_profile_and_norm() {
        let z = GridFunction::zeros(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).unwrap();
        let prof = net_profile(&z, &DyadicLattice::uniform(1, -2, 2).unwrap()).unwrap();
        assert!(prof.values.iter().all(|&v| v == 0.0));
        assert_eq!(net_norm(&prof, 2.0, 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn indicator_net_norm_dyadic_value() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let prof = net_profile(&f, &DyadicLattice::uniform(1, -1, 1).unwrap()).unwrap();
        let n = net_norm(&prof, 2.0, 2.0).unwrap();
        // sum_{k<=0} 2^k + sum_{k>0} 2^{-k} = 3
        assert!((n.value - 3f64.sqrt()).abs() < 1e-14);
        assert!(!n.truncated);
        let sqrt2 = 2f64.sqrt();
        assert!(n.value <= 2.0 * sqrt2 && n.value >= sqrt2 / 2.0);
        let wide = net_profile(&f, &DyadicLattice::uniform(1, -6, 6).unwrap()).unwrap();
        assert!((net_norm(&wide, 2.0, 2.0).unwrap().value - n.value).abs() < 1e-12);
        let doubled = net_norm(&prof.scaled(2.0), 2.0, 2.0).unwrap().value;
        assert!((doubled - 2.0 * n.value).abs() < 1e-14);
    }

    #[test]
    fn narrow_lattice_is_flagged() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let prof = net_profile(&f, &DyadicLattice::uniform(1, 1, 2).unwrap()).unwrap();
        assert!(net_norm(&prof, 2.0, 2.0).unwrap().truncated);
    }

    #[test]
    fn brute_force_agrees_on_signed_function() {
        let a = Axis::new(vec![-1.0, -0.3, 0.0, 0.4, 1.5]).unwrap();
        let f = GridFunction::from_real(vec![a], vec![1.0, -2.0, 3.0, -0.5]).unwrap();
        for &t in &[0.1, 0.5, 0.9, 2.0, 3.3] {
            let exact = net_average(&f, &[t]).unwrap();
            let brute = brute_fbar_1d(&f, t, 0.05);
            assert!((brute - exact).abs() < 1e-9 * exact, "t={t}: brute {brute}, exact {exact}");
        }
    }

    #[test]
    fn rect_integral_matches_cells() {
        let axes = vec![Axis::new(vec![0.0, 1.0, 3.0]).unwrap(), Axis::new(vec![-1.0, 0.0, 2.0]).unwrap()];
        let f = GridFunction::from_real(axes, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let sat = SummedArea::new(&f);
        let all = sat.rect_integral(&[-5.0, -5.0], &[5.0, 5.0]);
        assert!((all - f.integral()).norm() < 1e-14);
        // (0.5, 2) x (-0.5, 1): 1*0.5*0.5 + 2*0.5*1 + 3*1*0.5 + 4*1*1
        let part = sat.rect_integral(&[0.5, -0.5], &[2.0, 1.0]);
        assert!((part.re - (0.25 + 1.0 + 1.5 + 4.0)).abs() < 1e-14);
    }

    #[test]
    fn doubling_examples() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let (lhs, rhs) = doubling_check(&f, &[(0.0, 1.0)], &[2.0]).unwrap();
        assert!((lhs - 0.5).abs() < 1e-15 && (rhs - 2.0).abs() < 1e-15);
        let z = GridFunction::zeros(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).unwrap();
        assert_eq!(doubling_check(&z, &[(0.0, 1.0)], &[2.0]).unwrap(), (0.0, 0.0));
        assert!(doubling_check(&f, &[(0.0, 3.0)], &[2.0]).is_err());
    }

    #[test]
    fn tail_bound_indicator() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let b = hardy_tail_bound(&f, &EpsilonMask::zeros(1), &[0], 9).unwrap();
        assert!((b.lhs - 1.0).abs() < 1e-14);
        assert!(b.rhs >= 2.0 && b.lhs <= b.rhs);
        let z = GridFunction::zeros(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).unwrap();
        let b = hardy_tail_bound(&z, &EpsilonMask::ones(1), &[0], 5).unwrap();
        assert_eq!((b.lhs, b.rhs), (0.0, 0.0));
    }
}
