//! Truncated Fourier transform `F_N f(xi) = int_{Q_N} f(x) e^{-i(xi,x)} dx`
//! of piecewise-constant functions, evaluated cell by cell in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{contract_axis, weighted_integral, Axis, GridFunction, WeightedNormSpec};
use crate::netspace::{net_norm, net_profile, DyadicLattice};

/// Frequency-side grid: symmetric about 0 on every axis, 0 a grid line.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    axes: Vec<Axis>,
}

impl FrequencyGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > crate::grid::MAX_DIM {
            return Err(Error::UnsupportedDimension(axes.len()));
        }
        for (i, a) in axes.iter().enumerate() {
            if !a.is_symmetric() || a.straddles_zero() || !a.breakpoints().contains(&0.0) {
                return Err(Error::InvalidParameter(format!(
                    "frequency axis {i} must be symmetric with 0 as a grid line"
                )));
            }
        }
        Ok(Self { axes })
    }

    /// `cells_per_side` equal cells on each half of `[-extent, extent]^d`.
    pub fn uniform(d: usize, extent: f64, cells_per_side: usize) -> Result<Self> {
        Self::new(vec![Axis::symmetric(extent, cells_per_side)?; d])
    }

    /// Geometric grid on each half-axis: `(0, inner)` as one cell, then
    /// `per_octave` cells per octave up to `outer`.
    pub fn geometric(d: usize, inner: f64, outer: f64, per_octave: usize) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) || per_octave == 0 {
            return Err(Error::InvalidParameter(format!(
                "geometric frequency grid needs 0 < inner < outer (got {inner}, {outer})"
            )));
        }
        let half = geometric_points(inner, outer, per_octave);
        let mut bp: Vec<f64> = half.iter().rev().map(|x| -x).collect();
        bp.push(0.0);
        bp.extend(&half);
        Self::new(vec![Axis::new(bp)?; d])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn refine(&self, factor: usize) -> Self {
        Self { axes: self.axes.iter().map(|a| a.refine(factor)).collect() }
    }
}

/// `inner = x_0 < x_1 < ... = outer` with ratio close to `2^{1/per_octave}`.
pub(crate) fn geometric_points(inner: f64, outer: f64, per_octave: usize) -> Vec<f64> {
    let n = ((outer / inner).log2() * per_octave as f64).ceil().max(1.0) as usize;
    let r = (outer / inner).ln() / n as f64;
    let mut v: Vec<f64> = (0..=n).map(|k| inner * (r * k as f64).exp()).collect();
    v[n] = outer;
    v
}

/// `int_a^b e^{-i xi x} dx`.
pub fn cell_transform(a: f64, b: f64, xi: f64) -> Complex64 {
    let w = b - a;
    let m = 0.5 * (a + b);
    let z = xi * w;
    let amp = if z.abs() < 1e-6 {
        let z2 = z * z;
        w * (1.0 - z2 / 24.0 + z2 * z2 / 1920.0)
    } else {
        2.0 * (0.5 * z).sin() / xi
    };
    Complex64::from_polar(1.0, -xi * m) * amp
}

/// Kernel matrix `K[r][j] = int_{cell_j cap [-h, h]} e^{-i xi_r x} dx`.
fn kernel(axis: &Axis, half: f64, xis: &[f64]) -> Vec<Complex64> {
    let n = axis.cells();
    let mut m = vec![Complex64::new(0.0, 0.0); xis.len() * n];
    for (r, &xi) in xis.iter().enumerate() {
        for j in 0..n {
            let (a, b) = axis.cell(j);
            let (a, b) = (a.max(-half), b.min(half));
            if b > a {
                m[r * n + j] = cell_transform(a, b, xi);
            }
        }
    }
    m
}

/// Applies one kernel per axis to the values of `f`.
fn transform_values(f: &GridFunction, n: f64, samples: &[Vec<f64>]) -> Vec<Complex64> {
    let mut values = f.values().to_vec();
    let mut shape = f.shape();
    for i in 0..f.dim() {
        let m = kernel(f.axis(i), 0.5 * n, &samples[i]);
        values = contract_axis(&values, &shape, i, &m, samples[i].len());
        shape[i] = samples[i].len();
    }
    values
}

fn check_n(n: f64) -> Result<()> {
    if !(n > 0.0) {
        return Err(Error::InvalidParameter(format!("truncation N must be positive, got {n}")));
    }
    Ok(())
}

/// `F_N f` sampled at the midpoints of the `xi` cells and stored on that grid.
pub fn truncated_fourier(f: &GridFunction, n: f64, xi: &FrequencyGrid) -> Result<GridFunction> {
    check_n(n)?;
    if xi.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("function has d={}, frequency grid d={}", f.dim(), xi.dim())));
    }
    let samples: Vec<Vec<f64>> = xi.axes().iter().map(|a| (0..a.cells()).map(|j| a.midpoint(j)).collect()).collect();
    let values = transform_values(f, n, &samples);
    Ok(GridFunction::from_parts_unchecked(xi.axes().to_vec(), values))
}

/// `F_N f(xi)` at one point (`n = inf` for the full transform).
pub fn fourier_at(f: &GridFunction, n: f64, xi: &[f64]) -> Complex64 {
    let samples: Vec<Vec<f64>> = xi.iter().map(|&x| vec![x]).collect();
    transform_values(f, n, &samples)[0]
}

/// `F_N f` at a list of points.
pub fn fourier_points(f: &GridFunction, n: f64, xis: &[Vec<f64>]) -> Vec<Complex64> {
    xis.par_iter().map(|x| fourier_at(f, n, x)).collect()
}

/// Norm used to measure transforms and their differences.
#[derive(Debug, Clone, PartialEq)]
pub enum GapNorm {
    Sup,
    Weighted(WeightedNormSpec),
    Net { lattice: DyadicLattice, p: f64, q: f64 },
}

pub fn grid_norm(g: &GridFunction, norm: &GapNorm) -> Result<f64> {
    match norm {
        GapNorm::Sup => Ok(g.sup_abs()),
        GapNorm::Weighted(w) => weighted_integral(g, w),
        GapNorm::Net { lattice, p, q } => Ok(net_norm(&net_profile(g, lattice)?, *p, *q)?.value),
    }
}

/// `||F_{N2} f - F_{N1} f||` on a common frequency grid.
pub fn fourier_cauchy_gap(f: &GridFunction, n1: f64, n2: f64, xi: &FrequencyGrid, norm: &GapNorm) -> Result<f64> {
    check_n(n1)?;
    if !(n2 > n1) {
        return Err(Error::InvalidParameter(format!("need N1 < N2, got {n1} and {n2}")));
    }
    let a = truncated_fourier(f, n1, xi)?;
    let b = truncated_fourier(f, n2, xi)?;
    transform_gap(&a, &b, norm)
}

/// Norm of the difference of two sampled transforms on the same grid.
pub fn transform_gap(a: &GridFunction, b: &GridFunction, norm: &GapNorm) -> Result<f64> {
    if a.axes() != b.axes() {
        return Err(Error::IncompatibleGrids("transforms sampled on different frequency grids".into()));
    }
    let diff: Vec<Complex64> = b.values().iter().zip(a.values()).map(|(x, y)| x - y).collect();
    grid_norm(&GridFunction::from_parts_unchecked(a.axes().to_vec(), diff), norm)
}

/// L2 comparison of a transform with `(2 pi)^{d/2} ||f||_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelReport {
    /// `||F f||_2` over the frequency grid
    pub transform_l2: f64,
    /// `(2 pi)^{d/2} ||f||_2`
    pub expected: f64,
    /// bound on `int |F f|^2` outside the frequency grid
    pub tail_sq: f64,
    /// change of `transform_l2` when the frequency grid is refined twice
    pub discretization: f64,
}

impl PlancherelReport {
    /// Whether `expected` lies within the reported tail and discretization
    /// allowance of `transform_l2`.
    pub fn consistent(&self) -> bool {
        let lo = self.transform_l2 - 2.0 * self.discretization;
        let hi = (self.transform_l2.powi(2) + self.tail_sq).sqrt() + 2.0 * self.discretization;
        self.expected >= lo * (1.0 - 1e-12) && self.expected <= hi * (1.0 + 1e-12)
    }
}

/// Uses `|F_i f(xi_i)| <= TV_i / |xi_i|` along each axis for the tail.
pub fn plancherel_check(f: &GridFunction, xi: &FrequencyGrid) -> Result<PlancherelReport> {
    let n = f64::INFINITY;
    let d = f.dim();
    let coarse = truncated_fourier(f, n, xi)?.lp_norm(2.0);
    let fine = truncated_fourier(f, n, &xi.refine(2))?.lp_norm(2.0);
    let mut tail_sq = 0.0;
    for i in 0..d {
        let w = xi.axes()[i].hi();
        let tv2: f64 = f.fiber_variations(i).iter().map(|(vol, tv)| vol * tv * tv).sum();
        tail_sq += (2.0 * PI).powi(d as i32 - 1) * tv2 * 2.0 / w;
    }
    Ok(PlancherelReport {
        transform_l2: fine,
        expected: (2.0 * PI).powf(d as f64 / 2.0) * f.lp_norm(2.0),
        tail_sq,
        discretization: (fine - coarse).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_transform_is_sinc() {
        let f = GridFunction::indicator(&[(-1.0, 1.0)]).unwrap();
        let xi = FrequencyGrid::uniform(1, 20.0, 64).unwrap();
        let g = truncated_fourier(&f, 2.0, &xi).unwrap();
        for j in 0..xi.axes()[0].cells() {
            let x = xi.axes()[0].midpoint(j);
            let exact = 2.0 * x.sin() / x;
            assert!((g.values()[j] - exact).norm() < 1e-13);
        }
        assert!((fourier_at(&f, 4.0, &[1e-9]) - 2.0).norm() < 1e-15);
    }

    #[test]
    fn gaussian_second_order() {
        let oracle = |x: f64| (2.0 * PI).sqrt() * (-0.5 * x * x).exp();
        let mut errs = Vec::new();
        for &n in &[400usize, 800] {
            let f = GridFunction::from_real_fn(vec![Axis::uniform(-8.0, 8.0, n).unwrap()], |x| (-0.5 * x[0] * x[0]).exp()).unwrap();
            let xs: Vec<Vec<f64>> = (0..40).map(|k| vec![-5.0 + 0.25 * k as f64]).collect();
            let vals = fourier_points(&f, 16.0, &xs);
            let err = xs.iter().zip(&vals).map(|(x, v)| (v - oracle(x[0])).norm()).fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[0] < 1e-3, "{errs:?}");
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.5 && ratio < 4.5, "{errs:?}");
    }

    #[test]
    fn gaps() {
        let xi = FrequencyGrid::uniform(1, 10.0, 40).unwrap();
        let f = GridFunction::indicator(&[(-1.0, 1.0)]).unwrap();
        assert_eq!(fourier_cauchy_gap(&f, 2.0, 3.0, &xi, &GapNorm::Sup).unwrap(), 0.0);
        let g = GridFunction::indicator(&[(0.0, 4.0)]).unwrap();
        let gap = fourier_cauchy_gap(&g, 2.0, 4.0, &xi, &GapNorm::Sup).unwrap();
        let tail = truncated_fourier(&GridFunction::indicator(&[(1.0, 2.0)]).unwrap(), 10.0, &xi).unwrap();
        // Q_2 = [-1, 1] and Q_4 = [-2, 2], so the gap is the transform of chi_(1,2)
        assert!((gap - tail.sup_abs()).abs() < 1e-13);
        assert!(fourier_cauchy_gap(&g, 4.0, 2.0, &xi, &GapNorm::Sup).is_err());
        assert!(truncated_fourier(&g, 0.0, &xi).is_err());
    }

    #[test]
    fn plancherel_indicator() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let xi = FrequencyGrid::uniform(1, 200.0, 4000).unwrap();
        let rep = plancherel_check(&f, &xi).unwrap();
        assert!(rep.consistent(), "{rep:?}");
        assert!((rep.transform_l2 / rep.expected - 1.0).abs() < 0.01);
    }

    #[test]
    fn frequency_grid_validation() {
        assert!(FrequencyGrid::new(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).is_err());
        assert!(FrequencyGrid::new(vec![Axis::new(vec![-1.0, 1.0]).unwrap()]).is_err());
        let g = FrequencyGrid::geometric(2, 0.01, 100.0, 4).unwrap();
        assert!(g.axes()[0].is_symmetric());
    }
}
