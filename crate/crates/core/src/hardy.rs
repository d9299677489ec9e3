//! Hardy-Cesaro / Hardy-Bellman operators `H_eps`, the limit operator
//! `T_eps f = lim_N H_eps F_N f`, and the identity `F(Hg) = B(F g)`.
//!
//! Along axis `i`, bit 0 averages over `(0, t_i)` and bit 1 integrates
//! `f(.., sign(t_i) x_i, ..) dx_i / x_i` over `(|t_i|, inf)`. Both act on a
//! piecewise-constant input through closed-form antiderivatives, so every
//! output cell stores the exact average of `H_eps f` over that cell. Output
//! grids refine geometrically towards 0 where the profiles are singular.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{fourier_at, geometric_points, truncated_fourier, FrequencyGrid};
use crate::grid::{contract_axis, for_each_index, power_integral, weighted_power_integral, Axis, GridFunction, WeightedNormSpec};
use crate::special::{exp_integral_tail, oscillatory_inverse_square};

/// One bit per axis: 0 selects the Cesaro average, 1 the Bellman tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpsilonMask {
    bits: Vec<u8>,
}

impl EpsilonMask {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.len() > crate::grid::MAX_DIM {
            return Err(Error::UnsupportedDimension(bits.len()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidParameter(format!("mask bits must be 0 or 1, got {b}")));
        }
        Ok(Self { bits })
    }

    pub fn zeros(d: usize) -> Self {
        Self { bits: vec![0; d] }
    }

    pub fn ones(d: usize) -> Self {
        Self { bits: vec![1; d] }
    }

    /// All `2^d` masks in binary order, axis 0 as the lowest bit.
    pub fn all(d: usize) -> Vec<Self> {
        (0..1u32 << d)
            .map(|m| Self { bits: (0..d).map(|i| (m >> i & 1) as u8).collect() })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

impl fmt::Display for EpsilonMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for EpsilonMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .filter(|c| *c != ',')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("mask {s:?}: expected 0/1 digits"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }
}

/// How output axes are laid out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyGrid {
    /// cells per octave between consecutive input grid lines
    pub per_octave: usize,
    /// octaves resolved below the smallest input grid line before the
    /// innermost cell `(0, t_min)`
    pub inner_octaves: usize,
    /// bit-0 outputs extend to this multiple of the input extent
    pub tail_factor: f64,
}

impl Default for HardyGrid {
    fn default() -> Self {
        Self { per_octave: 16, inner_octaves: 16, tail_factor: 8.0 }
    }
}

impl HardyGrid {
    /// Same layout with twice the resolution.
    pub fn refined(&self) -> Self {
        Self { per_octave: 2 * self.per_octave, inner_octaves: self.inner_octaves + 4, ..*self }
    }

    /// Output axis for a component with the given bit acting on `input`.
    pub fn output_axis(&self, input: &Axis, bit: u8) -> Axis {
        let half = |pts: Vec<f64>| -> Vec<f64> {
            // pts: positive grid lines of one side, increasing
            let pmin = pts[0];
            let pmax = *pts.last().unwrap();
            let mut anchors = vec![pmin * 2f64.powi(-(self.inner_octaves as i32))];
            anchors.extend(&pts);
            if bit == 0 {
                anchors.push(pmax * self.tail_factor.max(1.0));
            }
            anchors.dedup();
            let mut out = vec![anchors[0]];
            for w in anchors.windows(2) {
                if w[1] > w[0] {
                    out.extend(&geometric_points(w[0], w[1], self.per_octave.max(1))[1..]);
                }
            }
            out
        };
        let bp = input.breakpoints();
        let pos: Vec<f64> = bp.iter().copied().filter(|&b| b > 0.0).collect();
        let mut neg: Vec<f64> = bp.iter().copied().filter(|&b| b < 0.0).map(|b| -b).collect();
        neg.reverse();
        let mut out: Vec<f64> = Vec::new();
        if !neg.is_empty() {
            out.extend(half(neg).iter().rev().map(|x| -x));
        }
        out.push(0.0);
        if !pos.is_empty() {
            out.extend(half(pos));
        }
        Axis::new(out).expect("output grid lines are increasing")
    }
}

/// `int_0^t (H_bit chi_(a,b))(s) ds` for `0 <= a < b`, `t >= 0`.
fn antiderivative(bit: u8, a: f64, b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if bit == 0 {
        let inside = |t: f64| -> f64 {
            if a == 0.0 {
                return t;
            }
            // a (x - ln(1 + x)) with x = (t - a) / a, series near 0
            let x = (t - a) / a;
            let core = if x < 1e-3 {
                x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x / 5.0)))
            } else {
                x - x.ln_1p()
            };
            a * core
        };
        if t <= a {
            0.0
        } else if t <= b {
            inside(t)
        } else {
            inside(b) + (b - a) * (t / b).ln()
        }
    } else if t <= a {
        t * (b / a).ln()
    } else if t <= b {
        t * (b / t).ln() + t - a
    } else {
        b - a
    }
}

/// `(H_bit chi_(a,b))(t)` for `0 <= a < b`, `t > 0`.
fn kernel_point(bit: u8, a: f64, b: f64, t: f64) -> f64 {
    if bit == 0 {
        ((t.min(b) - a).max(0.0)) / t
    } else if t >= b {
        0.0
    } else {
        (b / t.max(a)).ln()
    }
}

/// Mirrors a cell onto the positive half-line if it lies on side `sign`.
fn on_side(a: f64, b: f64, sign: f64) -> Option<(f64, f64)> {
    if sign > 0.0 && a >= 0.0 {
        Some((a, b))
    } else if sign < 0.0 && b <= 0.0 {
        Some((-b, -a))
    } else {
        None
    }
}

/// Matrix of exact cell averages, `out.cells() x input.cells()`.
fn average_matrix(input: &Axis, out: &Axis, bit: u8) -> Vec<Complex64> {
    let n = input.cells();
    let rows = out.cells();
    let mut m = vec![Complex64::new(0.0, 0.0); rows * n];
    m.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
        let (c, e) = out.cell(r);
        let sign = if c >= 0.0 { 1.0 } else { -1.0 };
        let (u1, u2) = if sign > 0.0 { (c, e) } else { (-e, -c) };
        for (j, slot) in row.iter_mut().enumerate() {
            let (a, b) = input.cell(j);
            if let Some((a, b)) = on_side(a, b, sign) {
                let v = (antiderivative(bit, a, b, u2) - antiderivative(bit, a, b, u1)) / (u2 - u1);
                *slot = Complex64::new(v, 0.0);
            }
        }
    });
    m
}

fn check_axis(f: &GridFunction, i: usize, bit: u8) -> Result<()> {
    if i >= f.dim() {
        return Err(Error::DimensionMismatch(format!("axis {i} out of range for d={}", f.dim())));
    }
    if bit > 1 {
        return Err(Error::InvalidParameter(format!("bit must be 0 or 1, got {bit}")));
    }
    Ok(())
}

/// `H_{bit,i} f` as exact cell averages over `out_axis`.
pub fn hardy_component_on(f: &GridFunction, i: usize, bit: u8, out_axis: &Axis) -> Result<GridFunction> {
    check_axis(f, i, bit)?;
    if out_axis.straddles_zero() {
        return Err(Error::Precondition("output cells may not straddle 0".into()));
    }
    let m = average_matrix(f.axis(i), out_axis, bit);
    let values = contract_axis(f.values(), &f.shape(), i, &m, out_axis.cells());
    let mut axes = f.axes().to_vec();
    axes[i] = out_axis.clone();
    Ok(GridFunction::from_parts_unchecked(axes, values))
}

pub fn hardy_component_with(f: &GridFunction, i: usize, bit: u8, grid: &HardyGrid) -> Result<GridFunction> {
    check_axis(f, i, bit)?;
    let out = grid.output_axis(f.axis(i), bit);
    hardy_component_on(f, i, bit, &out)
}

pub fn hardy_component(f: &GridFunction, i: usize, bit: u8) -> Result<GridFunction> {
    hardy_component_with(f, i, bit, &HardyGrid::default())
}

/// Applies the components of `eps` in the given axis order.
pub fn hardy_eps_ordered(f: &GridFunction, eps: &EpsilonMask, order: &[usize], grid: &HardyGrid) -> Result<GridFunction> {
    if eps.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("mask has d={}, function d={}", eps.dim(), f.dim())));
    }
    let mut seen = vec![false; f.dim()];
    for &i in order {
        if i >= f.dim() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidParameter(format!("axis order {order:?} is not a permutation")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidParameter(format!("axis order {order:?} is not a permutation")));
    }
    let mut g = f.clone();
    for &i in order {
        g = hardy_component_with(&g, i, eps.bit(i), grid)?;
    }
    Ok(g)
}

pub fn hardy_eps_with(f: &GridFunction, eps: &EpsilonMask, grid: &HardyGrid) -> Result<GridFunction> {
    let order: Vec<usize> = (0..f.dim()).collect();
    hardy_eps_ordered(f, eps, &order, grid)
}

/// `H_eps f = H_{eps_d,d} ... H_{eps_1,1} f`.
pub fn hardy_eps(f: &GridFunction, eps: &EpsilonMask) -> Result<GridFunction> {
    hardy_eps_with(f, eps, &HardyGrid::default())
}

/// `int (prod |t_i|^{a_i} |H_eps f|)^q dt` split into the part over the
/// output grid and the part beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyPower {
    pub grid_part: f64,
    pub tail_part: f64,
}

impl HardyPower {
    /// Full weighted norm (root taken).
    pub fn norm(&self, q: f64) -> f64 {
        (self.grid_part + self.tail_part).powf(1.0 / q)
    }

    /// How much of `norm` comes from beyond the output grid.
    pub fn tail_norm(&self, q: f64) -> f64 {
        self.norm(q) - self.grid_part.powf(1.0 / q)
    }
}

enum Piece {
    Grid,
    Tail(f64),
}

/// Beyond the output grid along a bit-0 axis, `H f(t) = m_+- / |t|` with
/// `m_+-` the mass of each side, so the tail is a product of a closed-form
/// power integral and a lower-dimensional field.
pub fn hardy_weighted_power(f: &GridFunction, eps: &EpsilonMask, grid: &HardyGrid, w: &WeightedNormSpec) -> Result<HardyPower> {
    let d = f.dim();
    if eps.dim() != d || w.exponent_per_axis.len() != d {
        return Err(Error::DimensionMismatch("mask / weight dimension".into()));
    }
    let q = w.outer_power;
    let boxed = hardy_eps_with(f, eps, grid)?;
    let grid_part = weighted_power_integral(&boxed, w)?;
    // per-axis options: the grid itself, or a tail side of a bit-0 axis
    let mut options: Vec<Vec<(Piece, Vec<Complex64>, Vec<f64>)>> = Vec::with_capacity(d);
    for i in 0..d {
        let ax = f.axis(i);
        let out = boxed.axis(i);
        let aq = w.exponent_per_axis[i] * q;
        let m = average_matrix(ax, out, eps.bit(i));
        let wts = (0..out.cells()).map(|j| power_integral(out.cell(j).0, out.cell(j).1, aq)).collect();
        let mut opts = vec![(Piece::Grid, m, wts)];
        if eps.bit(i) == 0 {
            for sign in [1.0, -1.0] {
                let edge = if sign > 0.0 { out.hi() } else { -out.lo() };
                if edge <= 0.0 {
                    continue;
                }
                let row: Vec<Complex64> = (0..ax.cells())
                    .map(|j| {
                        let (a, b) = ax.cell(j);
                        Complex64::new(on_side(a, b, sign).map_or(0.0, |(a, b)| b - a), 0.0)
                    })
                    .collect();
                // int_edge^inf t^{aq - q} dt
                let g = aq - q;
                let wt = if g < -1.0 { edge.powf(g + 1.0) / (-g - 1.0) } else { f64::INFINITY };
                opts.push((Piece::Tail(wt), row, vec![wt]));
            }
        }
        options.push(opts);
    }
    let counts: Vec<usize> = options.iter().map(Vec::len).collect();
    let mut tail_part = 0.0;
    let mut combo_err = None;
    for_each_index(&counts, |choice| {
        if choice.iter().all(|&c| c == 0) || combo_err.is_some() {
            return;
        }
        let mut values = f.values().to_vec();
        let mut shape = f.shape();
        for i in 0..d {
            let (_, m, wts) = &options[i][choice[i]];
            values = contract_axis(&values, &shape, i, m, wts.len());
            shape[i] = wts.len();
        }
        let mut k = 0;
        for_each_index(&shape, |idx| {
            let v = values[k].norm();
            k += 1;
            if v == 0.0 {
                return;
            }
            let mut wt = 1.0;
            for (i, &j) in idx.iter().enumerate() {
                wt *= options[i][choice[i]].2[j];
            }
            if wt.is_infinite() {
                let axis = (0..d).find(|&i| matches!(options[i][choice[i]].0, Piece::Tail(x) if x.is_infinite())).unwrap_or(0);
                combo_err = Some(Error::NonIntegrableWeight { axis, exponent: w.exponent_per_axis[axis] * q - q });
                return;
            }
            tail_part += v.powf(q) * wt;
        });
    });
    if let Some(e) = combo_err {
        return Err(e);
    }
    Ok(HardyPower { grid_part, tail_part })
}

/// Exact `H_eps f(t)`; every `t_i` must be nonzero.
pub fn hardy_point(f: &GridFunction, eps: &EpsilonMask, t: &[f64]) -> Result<Complex64> {
    if eps.dim() != f.dim() || t.len() != f.dim() {
        return Err(Error::DimensionMismatch("mask / point dimension".into()));
    }
    if let Some(i) = t.iter().position(|&x| x == 0.0 || !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("H_eps f is evaluated off the hyperplanes, t_{i} = {}", t[i])));
    }
    let mut values = f.values().to_vec();
    let mut shape = f.shape();
    for i in 0..f.dim() {
        let ax = f.axis(i);
        let sign = t[i].signum();
        let m: Vec<Complex64> = (0..ax.cells())
            .map(|j| {
                let (a, b) = ax.cell(j);
                let k = on_side(a, b, sign).map_or(0.0, |(a, b)| kernel_point(eps.bit(i), a, b, t[i].abs()));
                Complex64::new(k, 0.0)
            })
            .collect();
        values = contract_axis(&values, &shape, i, &m, 1);
        shape[i] = 1;
    }
    Ok(values[0])
}

/// Outcome of the `N -> inf` limit along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub schedule: Vec<f64>,
    /// sup-norm gaps between consecutive schedule entries
    pub gaps: Vec<f64>,
    pub converged: bool,
    /// per bit-1 axis, a bound on the part of the Bellman integral cut off
    /// at the frequency-grid edge (`|F f(xi)| <= C_i / |xi_i|`)
    pub bellman_tail: Vec<f64>,
}

/// `H_eps F_N f` for the last `N` of an increasing schedule, with the gaps
/// between consecutive entries.
pub fn t_epsilon(
    f: &GridFunction,
    eps: &EpsilonMask,
    schedule: &[f64],
    xi: &FrequencyGrid,
    tol: f64,
) -> Result<(GridFunction, ConvergenceReport)> {
    t_epsilon_with(f, eps, schedule, xi, tol, &HardyGrid::default())
}

pub fn t_epsilon_with(
    f: &GridFunction,
    eps: &EpsilonMask,
    schedule: &[f64],
    xi: &FrequencyGrid,
    tol: f64,
    grid: &HardyGrid,
) -> Result<(GridFunction, ConvergenceReport)> {
    if schedule.is_empty() || schedule.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("N schedule must be nonempty and increasing".into()));
    }
    let results = schedule
        .iter()
        .map(|&n| truncated_fourier(f, n, xi).and_then(|g| hardy_eps_with(&g, eps, grid)))
        .collect::<Result<Vec<GridFunction>>>()?;
    let gaps: Vec<f64> = results
        .windows(2)
        .map(|w| w[1].values().iter().zip(w[0].values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
        .collect();
    let converged = gaps.last().is_none_or(|&g| g < tol);
    let bellman_tail = (0..f.dim())
        .filter(|&i| eps.bit(i) == 1)
        .map(|i| {
            let c: f64 = f.fiber_variations(i).iter().map(|(vol, tv)| vol * tv).sum();
            c / xi.axes()[i].hi()
        })
        .collect();
    let last = results.into_iter().last().expect("schedule is nonempty");
    Ok((last, ConvergenceReport { schedule: schedule.to_vec(), gaps, converged, bellman_tail }))
}

/// Both sides of `F(Hg) = B(F g)` at the frequency-grid cell midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CommuteReport {
    pub samples: Vec<f64>,
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
    /// largest `|lhs - rhs| / |rhs|` over samples with `|rhs| > 1e-8`
    pub max_rel_err: f64,
}

pub fn commute_check(g: &GridFunction, xi: &FrequencyGrid) -> Result<CommuteReport> {
    commute_check_with(g, xi, &HardyGrid::default())
}

/// The left side transforms the cell-average form of `Hg` and adds the
/// `m / |t|` tails beyond the output grid in closed form; the right side
/// integrates the exact transform of `g` against `dx / x` analytically.
pub fn commute_check_with(g: &GridFunction, xi: &FrequencyGrid, grid: &HardyGrid) -> Result<CommuteReport> {
    if g.dim() != 1 || xi.dim() != 1 {
        return Err(Error::UnsupportedDimension(g.dim().max(xi.dim())));
    }
    let hg = hardy_component_with(g, 0, 0, grid)?;
    let ax = g.axis(0);
    let (mut m_pos, mut m_neg) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for j in 0..ax.cells() {
        let (a, b) = ax.cell(j);
        if a >= 0.0 {
            m_pos += g.values()[j] * (b - a);
        } else {
            m_neg += g.values()[j] * (b - a);
        }
    }
    let (s_pos, s_neg) = (hg.axis(0).hi(), -hg.axis(0).lo());
    let samples: Vec<f64> = (0..xi.axes()[0].cells()).map(|j| xi.axes()[0].midpoint(j)).collect();
    let pairs: Vec<(Complex64, Complex64)> = samples
        .par_iter()
        .map(|&y| {
            let mut lhs = fourier_at(&hg, f64::INFINITY, &[y]);
            let ya = y.abs();
            if s_pos > 0.0 && m_pos != Complex64::new(0.0, 0.0) {
                let e = exp_integral_tail(ya * s_pos);
                lhs += m_pos * if y > 0.0 { e } else { e.conj() };
            }
            if s_neg > 0.0 && m_neg != Complex64::new(0.0, 0.0) {
                let e = exp_integral_tail(ya * s_neg);
                lhs += m_neg * if y > 0.0 { e.conj() } else { e };
            }
            let s = y.signum();
            let mut rhs = Complex64::new(0.0, 0.0);
            for j in 0..ax.cells() {
                let v = g.values()[j];
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (a, b) = ax.cell(j);
                let k = oscillatory_inverse_square(s * b, ya) - oscillatory_inverse_square(s * a, ya);
                rhs += v * k / Complex64::new(0.0, -s);
            }
            (lhs, rhs)
        })
        .collect();
    let max_rel_err = pairs
        .iter()
        .filter(|(_, r)| r.norm() > 1e-8)
        .map(|(l, r)| (l - r).norm() / r.norm())
        .fold(0.0, f64::max);
    let (lhs, rhs) = pairs.into_iter().unzip();
    Ok(CommuteReport { samples, lhs, rhs, max_rel_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn avg_of(h: &GridFunction, t: f64) -> Complex64 {
        h.value_at(&[t])
    }

    #[test]
    fn constant_average() {
        let f = GridFunction::from_real(vec![Axis::new(vec![0.0, 2.0]).unwrap()], vec![3.0]).unwrap();
        let h = hardy_component(&f, 0, 0).unwrap();
        for &t in &[0.01, 0.5, 1.9] {
            assert!((avg_of(&h, t).re - 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn indicator_cesaro_and_bellman() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let e0 = EpsilonMask::zeros(1);
        let e1 = EpsilonMask::ones(1);
        for &t in &[0.3, 1.0, 2.5, 7.0] {
            assert!((hardy_point(&f, &e0, &[t]).unwrap().re - (1.0f64).min(1.0 / t)).abs() < 1e-15);
            let b = if t < 1.0 { -t.ln() } else { 0.0 };
            assert!((hardy_point(&f, &e1, &[t]).unwrap().re - b).abs() < 1e-15);
            assert_eq!(hardy_point(&f, &e1, &[-t]).unwrap().re, 0.0);
        }
        // exact averages: over (c, e) with 1 < c the mean of 1/t is ln(e/c)/(e-c)
        let h = hardy_component(&f, 0, 0).unwrap();
        let ax = h.axis(0);
        for j in 0..ax.cells() {
            let (c, e) = ax.cell(j);
            let exact = if c >= 1.0 {
                (e / c).ln() / (e - c)
            } else if e <= 1.0 {
                1.0
            } else {
                f64::NAN
            };
            if exact.is_finite() {
                assert!((h.values()[j].re - exact).abs() < 1e-12 * exact.max(1.0), "cell ({c}, {e})");
            }
        }
        let b = hardy_component(&f, 0, 1).unwrap();
        for j in 0..b.axis(0).cells() {
            let (c, e) = b.axis(0).cell(j);
            // mean of -ln t over (c, e) inside (0, 1)
            let anti = |t: f64| if t == 0.0 { 0.0 } else { t - t * t.ln() };
            let exact = (anti(e) - anti(c)) / (e - c);
            assert!((b.values()[j].re - exact).abs() < 1e-12, "cell ({c}, {e})");
        }
    }

    #[test]
    fn bellman_product_in_2d() {
        let f = GridFunction::indicator(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let eps = EpsilonMask::ones(2);
        for &(a, b) in &[(0.5, 0.25), (-0.5, 0.25), (0.5, -0.7), (-0.1, -0.9)] {
            let v = hardy_point(&f, &eps, &[a, b]).unwrap().re;
            let expected = if a > 0.0 && b > 0.0 { a.ln() * b.ln() } else { 0.0 };
            assert!((v - expected).abs() < 1e-14);
        }
        let sym = GridFunction::indicator(&[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let v1 = hardy_point(&sym, &eps, &[0.5, 0.25]).unwrap();
        let v2 = hardy_point(&sym, &eps, &[-0.5, -0.25]).unwrap();
        assert!((v1 - v2).norm() < 1e-15);
        assert!((v1.re - 0.5f64.ln() * 0.25f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn two_cell_atom_integral_is_ln2() {
        let a = GridFunction::from_real(vec![Axis::new(vec![0.0, 1.0, 2.0]).unwrap()], vec![0.5, -0.5]).unwrap();
        let h = hardy_component(&a, 0, 0).unwrap();
        // beyond the grid Ha = 0 because int a = 0; the grid carries it all
        assert!((h.integral().re - 2f64.ln()).abs() < 1e-12, "{}", h.integral());
    }

    #[test]
    fn order_independence_and_linearity() {
        let axes = vec![Axis::new(vec![-1.0, -0.2, 0.5, 1.0]).unwrap(), Axis::new(vec![-0.5, 0.3, 2.0]).unwrap()];
        let f = GridFunction::from_real(axes.clone(), vec![1.0, -2.0, 0.5, 3.0, 0.0, 1.5]).unwrap();
        let g = GridFunction::from_real(axes, vec![0.3, 0.2, -1.0, 2.0, 4.0, 0.0]).unwrap();
        let grid = HardyGrid::default();
        for eps in EpsilonMask::all(2) {
            let a = hardy_eps_ordered(&f, &eps, &[0, 1], &grid).unwrap();
            let b = hardy_eps_ordered(&f, &eps, &[1, 0], &grid).unwrap();
            let err = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "eps={eps}: {err}");
            let sum = hardy_eps(&f.combine(Complex64::new(2.0, 0.0), &g, Complex64::new(-1.0, 0.0)).unwrap(), &eps).unwrap();
            let ha = hardy_eps(&f, &eps).unwrap();
            let hb = hardy_eps(&g, &eps).unwrap();
            let lin = ha.combine(Complex64::new(2.0, 0.0), &hb, Complex64::new(-1.0, 0.0)).unwrap();
            let diff = sum.sub(&lin).unwrap().sup_abs();
            assert!(diff < 1e-12, "eps={eps}: {diff}");
        }
    }

    #[test]
    fn pointwise_matches_cell_average_on_fine_cells() {
        let axes = vec![Axis::new(vec![-1.0, 0.0, 0.5, 1.0]).unwrap()];
        let f = GridFunction::from_real(axes, vec![2.0, 1.0, -1.0]).unwrap();
        let grid = HardyGrid { per_octave: 256, ..Default::default() };
        for bit in 0..2u8 {
            let eps = EpsilonMask::new(vec![bit]).unwrap();
            let h = hardy_eps_with(&f, &eps, &grid).unwrap();
            for &t in &[-0.7, -0.2, 0.3, 0.8, 2.0] {
                let Some(j) = h.axis(0).locate(t) else {
                    assert_eq!(hardy_point(&f, &eps, &[t]).unwrap().norm(), 0.0);
                    continue;
                };
                let m = h.axis(0).midpoint(j);
                let p = hardy_point(&f, &eps, &[m]).unwrap();
                assert!((h.values()[j] - p).norm() < 1e-5, "bit {bit} t {t}");
            }
        }
    }

    #[test]
    fn stabilized_truncation() {
        let f = GridFunction::indicator(&[(-1.0, 1.0)]).unwrap();
        let xi = FrequencyGrid::uniform(1, 8.0, 32).unwrap();
        let (_, rep) = t_epsilon(&f, &EpsilonMask::zeros(1), &[2.0, 3.0, 5.0], &xi, 1e-12).unwrap();
        assert!(rep.gaps.iter().all(|&g| g == 0.0));
        assert!(rep.converged);
    }

    #[test]
    fn commute_indicator_and_zero() {
        let xi = FrequencyGrid::uniform(1, 2.0, 16).unwrap();
        let z = GridFunction::zeros(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).unwrap();
        let r = commute_check(&z, &xi).unwrap();
        assert!(r.lhs.iter().chain(&r.rhs).all(|v| v.norm() == 0.0));
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let r = commute_check(&f, &xi).unwrap();
        assert!(r.max_rel_err < 1e-3, "{}", r.max_rel_err);
    }

    #[test]
    fn weighted_power_with_tails() {
        // ||H chi_(0,1)||_2^2 = int_0^1 1 + int_1^inf t^-2 = 2
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let w = WeightedNormSpec::unweighted(1, 2.0).unwrap();
        let hp = hardy_weighted_power(&f, &EpsilonMask::zeros(1), &HardyGrid::default(), &w).unwrap();
        assert!((hp.tail_part - 1.0 / 8.0).abs() < 1e-14);
        // cell averages square to slightly less than the squares: second order
        let e1 = 2.0 - hp.grid_part - hp.tail_part;
        let fine = hardy_weighted_power(&f, &EpsilonMask::zeros(1), &HardyGrid::default().refined(), &w).unwrap();
        let e2 = 2.0 - fine.grid_part - fine.tail_part;
        assert!(e1 > 0.0 && e1 < 2e-4 && e2 > 0.0 && e1 / e2 > 3.5, "{e1} {e2}");
        // ||B chi_(0,1)||_2^2 = int_0^1 ln^2 t = 2
        let hb = hardy_weighted_power(&f, &EpsilonMask::ones(1), &HardyGrid::default(), &w).unwrap();
        assert_eq!(hb.tail_part, 0.0);
        assert!((hb.grid_part - 2.0).abs() < 3e-4, "{hb:?}");
        // 2-d product: (int_0^inf min(1, 1/t)^2)^2 = 4
        let sq = GridFunction::indicator(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let w2 = WeightedNormSpec::unweighted(2, 2.0).unwrap();
        let h2 = hardy_weighted_power(&sq, &EpsilonMask::zeros(2), &HardyGrid::default(), &w2).unwrap();
        assert!((h2.grid_part + h2.tail_part - 4.0).abs() < 1e-3, "{h2:?}");
    }

    #[test]
    fn mask_parsing() {
        let m: EpsilonMask = "101".parse().unwrap();
        assert_eq!(m.bits(), &[1, 0, 1]);
        assert!("12".parse::<EpsilonMask>().is_err());
        assert_eq!(EpsilonMask::all(2).len(), 4);
    }
}
