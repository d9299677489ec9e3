//! Piecewise-constant functions on rectilinear grids over R^d.
//!
//! A [`GridFunction`] stores one complex value per cell of a tensor grid and is
//! implicitly zero outside the grid. Cells never straddle a coordinate
//! hyperplane `x_i = 0`: constructors split such cells, so power weights
//! `|x_i|^a` keep a single closed-form antiderivative on every cell.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// Grid lines on one coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    breakpoints: Vec<f64>,
}

impl Axis {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        Self::validated(breakpoints, 0)
    }

    fn validated(breakpoints: Vec<f64>, axis: usize) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::TooFewBreakpoints(breakpoints.len()));
        }
        for (index, w) in breakpoints.windows(2).enumerate() {
            if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
                return Err(Error::NonIncreasing { axis, index });
            }
        }
        Ok(Self { breakpoints })
    }

    /// `n` equal cells on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewBreakpoints(1));
        }
        let h = (hi - lo) / n as f64;
        let mut bp: Vec<f64> = (0..=n).map(|j| lo + h * j as f64).collect();
        bp[n] = hi;
        Self::new(bp)
    }

    /// Uniform grid on `[-extent, extent]` with 0 as a grid line.
    pub fn symmetric(extent: f64, cells_per_side: usize) -> Result<Self> {
        if !(extent > 0.0) || cells_per_side == 0 {
            return Err(Error::InvalidParameter(format!(
                "symmetric axis needs extent > 0 and cells > 0 (got {extent}, {cells_per_side})"
            )));
        }
        let h = extent / cells_per_side as f64;
        let n = cells_per_side as i64;
        let bp = (-n..=n).map(|j| j as f64 * h).collect();
        Self::new(bp)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn cells(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn cell(&self, j: usize) -> (f64, f64) {
        (self.breakpoints[j], self.breakpoints[j + 1])
    }

    pub fn width(&self, j: usize) -> f64 {
        self.breakpoints[j + 1] - self.breakpoints[j]
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        0.5 * (self.breakpoints[j] + self.breakpoints[j + 1])
    }

    pub fn lo(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn hi(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn extent(&self) -> f64 {
        self.hi() - self.lo()
    }

    pub fn min_width(&self) -> f64 {
        (0..self.cells()).map(|j| self.width(j)).fold(f64::INFINITY, f64::min)
    }

    pub fn straddles_zero(&self) -> bool {
        self.breakpoints
            .windows(2)
            .any(|w| w[0] < 0.0 && w[1] > 0.0)
    }

    /// Whether the breakpoints are symmetric about 0 (to relative 1e-12).
    pub fn is_symmetric(&self) -> bool {
        let n = self.breakpoints.len();
        let scale = self.lo().abs().max(self.hi().abs());
        (0..n).all(|j| (self.breakpoints[j] + self.breakpoints[n - 1 - j]).abs() <= 1e-12 * scale)
    }

    /// Inserts 0 as a grid line if a cell straddles it. Returns the new axis
    /// and, for each new cell, the index of the old cell it came from.
    pub fn split_at_zero(&self) -> (Axis, Vec<usize>) {
        let mut bp = Vec::with_capacity(self.breakpoints.len() + 1);
        let mut origin = Vec::with_capacity(self.cells() + 1);
        bp.push(self.breakpoints[0]);
        for j in 0..self.cells() {
            let (a, b) = self.cell(j);
            if a < 0.0 && b > 0.0 {
                bp.push(0.0);
                origin.push(j);
            }
            bp.push(b);
            origin.push(j);
        }
        (Axis { breakpoints: bp }, origin)
    }

    /// Cell containing `x` (cells are half-open `[a, b)`, the last one closed).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo() && x <= self.hi()) {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        Some(idx.saturating_sub(1).min(self.cells() - 1))
    }

    /// Union of grid lines of two axes.
    pub fn union(&self, other: &Axis) -> Axis {
        let mut bp: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .copied()
            .collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        Axis { breakpoints: bp }
    }

    /// Splits every cell into `factor` equal subcells.
    pub fn refine(&self, factor: usize) -> Axis {
        let factor = factor.max(1);
        let mut bp = Vec::with_capacity(self.cells() * factor + 1);
        for j in 0..self.cells() {
            let (a, b) = self.cell(j);
            let h = (b - a) / factor as f64;
            for s in 0..factor {
                bp.push(a + h * s as f64);
            }
        }
        bp.push(self.hi());
        Axis { breakpoints: bp }
    }

    /// For each cell of `fine`, the cell of `self` containing its midpoint.
    pub fn containing_cells(&self, fine: &Axis) -> Vec<Option<usize>> {
        (0..fine.cells())
            .map(|j| self.locate_open(fine.midpoint(j)))
            .collect()
    }

    fn locate_open(&self, x: f64) -> Option<usize> {
        if x <= self.lo() || x >= self.hi() {
            return None;
        }
        self.locate(x)
    }
}

/// Piecewise-constant complex function on a rectilinear grid; zero outside.
///
/// Values are stored in row-major order (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    axes: Vec<Axis>,
    values: Vec<Complex64>,
}

impl GridFunction {
    /// Builds a grid function, splitting cells that straddle 0 on any axis.
    pub fn new(axes: Vec<Axis>, values: Vec<Complex64>) -> Result<Self> {
        let d = axes.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::UnsupportedDimension(d));
        }
        let expected: usize = axes.iter().map(Axis::cells).product();
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a grid with {} cells",
                values.len(),
                expected
            )));
        }
        let mut f = Self { axes, values };
        for i in 0..d {
            if f.axes[i].straddles_zero() {
                let (axis, origin) = f.axes[i].split_at_zero();
                f = f.reindex_axis(i, axis, |j| Some(origin[j]));
            }
        }
        Ok(f)
    }

    pub fn from_real(axes: Vec<Axis>, values: Vec<f64>) -> Result<Self> {
        Self::new(axes, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(axes: Vec<Axis>) -> Result<Self> {
        let n = axes.iter().map(Axis::cells).product();
        Self::new(axes, vec![Complex64::new(0.0, 0.0); n])
    }

    /// Samples `g` at cell midpoints.
    pub fn from_fn(axes: Vec<Axis>, g: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let mut split = Vec::with_capacity(axes.len());
        for a in &axes {
            split.push(if a.straddles_zero() { a.split_at_zero().0 } else { a.clone() });
        }
        let shape: Vec<usize> = split.iter().map(Axis::cells).collect();
        let n = shape.iter().product();
        let mut values = Vec::with_capacity(n);
        let mut point = vec![0.0; split.len()];
        for_each_index(&shape, |idx| {
            for (i, &j) in idx.iter().enumerate() {
                point[i] = split[i].midpoint(j);
            }
            values.push(g(&point));
        });
        Self::new(split, values)
    }

    pub fn from_real_fn(axes: Vec<Axis>, g: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(axes, |x| Complex64::new(g(x), 0.0))
    }

    /// Indicator of the box `prod (lo_i, hi_i)` on its own grid.
    pub fn indicator(bounds: &[(f64, f64)]) -> Result<Self> {
        let axes = bounds
            .iter()
            .map(|&(a, b)| Axis::new(vec![a, b]))
            .collect::<Result<Vec<_>>>()?;
        Self::from_real(axes, vec![1.0])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::cells).collect()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape())
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(self.strides()).map(|(&j, s)| j * s).sum()
    }

    pub fn value(&self, idx: &[usize]) -> Complex64 {
        self.values[self.flat_index(idx)]
    }

    pub fn cell_volume(&self, idx: &[usize]) -> f64 {
        idx.iter().enumerate().map(|(i, &j)| self.axes[i].width(j)).product()
    }

    /// Value at a point; 0 outside the grid.
    pub fn value_at(&self, x: &[f64]) -> Complex64 {
        let mut flat = 0;
        let strides = self.strides();
        for (i, &xi) in x.iter().enumerate() {
            match self.axes[i].locate(xi) {
                Some(j) => flat += j * strides[i],
                None => return Complex64::new(0.0, 0.0),
            }
        }
        self.values[flat]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn map(&self, g: impl Fn(Complex64) -> Complex64) -> Self {
        Self { axes: self.axes.clone(), values: self.values.iter().map(|&v| g(v)).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    /// `|f|` as a real grid function.
    pub fn abs(&self) -> Self {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    /// Same function on a finer grid whose lines include all lines of `self`
    /// inside its span; cells of `target` outside the span get 0.
    pub fn resample(&self, target: &[Axis]) -> Result<Self> {
        if target.len() != self.dim() {
            return Err(Error::DimensionMismatch("resample target dimension".into()));
        }
        let maps: Vec<Vec<Option<usize>>> = self
            .axes
            .iter()
            .zip(target)
            .map(|(src, dst)| src.containing_cells(dst))
            .collect();
        let shape: Vec<usize> = target.iter().map(Axis::cells).collect();
        let strides = self.strides();
        let mut values = Vec::with_capacity(shape.iter().product());
        for_each_index(&shape, |idx| {
            let mut flat = 0;
            for (i, &j) in idx.iter().enumerate() {
                match maps[i][j] {
                    Some(k) => flat += k * strides[i],
                    None => {
                        values.push(Complex64::new(0.0, 0.0));
                        return;
                    }
                }
            }
            values.push(self.values[flat]);
        });
        Self::new(target.to_vec(), values)
    }

    /// Linear combination `a f + b g` on the union grid.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("combine dimension".into()));
        }
        let axes: Vec<Axis> = self.axes.iter().zip(&other.axes).map(|(x, y)| x.union(y)).collect();
        let f = self.resample(&axes)?;
        let g = other.resample(&axes)?;
        let values = f.values.iter().zip(&g.values).map(|(&u, &v)| a * u + b * v).collect();
        Self::new(axes, values)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        self.combine(one, other, one)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Plain integral of f over R^d.
    pub fn integral(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut k = 0;
        for_each_index(&self.shape(), |idx| {
            s += self.values[k] * self.cell_volume(idx);
            k += 1;
        });
        s
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `L_p` norm (quasi-norm for p < 1), `p = inf` allowed.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_abs();
        }
        let mut s = 0.0;
        let mut k = 0;
        for_each_index(&self.shape(), |idx| {
            let v = self.values[k].norm();
            if v != 0.0 {
                s += v.powf(p) * self.cell_volume(idx);
            }
            k += 1;
        });
        s.powf(1.0 / p)
    }

    /// Sum over fibers along `axis` of the fiber total variation (jumps
    /// including the jumps to 0 at the ends), weighted by the cross-section
    /// volume; returned per fiber as `(cross-section volume, variation)`.
    pub fn fiber_variations(&self, axis: usize) -> Vec<(f64, f64)> {
        let shape = self.shape();
        let strides = self.strides();
        let mut other = shape.clone();
        other[axis] = 1;
        let mut out = Vec::new();
        for_each_index(&other, |idx| {
            let base: usize = idx.iter().zip(&strides).map(|(&j, s)| j * s).sum();
            let vol: f64 = idx
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != axis)
                .map(|(i, &j)| self.axes[i].width(j))
                .product();
            let mut prev = Complex64::new(0.0, 0.0);
            let mut tv = 0.0;
            for j in 0..shape[axis] {
                let v = self.values[base + j * strides[axis]];
                tv += (v - prev).norm();
                prev = v;
            }
            tv += prev.norm();
            out.push((vol, tv));
        });
        out
    }

    pub(crate) fn from_parts_unchecked(axes: Vec<Axis>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), axes.iter().map(Axis::cells).product::<usize>());
        Self { axes, values }
    }

    /// Replaces axis `i`; new cell `j` takes the values of old cell `origin(j)`
    /// (or 0 for `None`).
    fn reindex_axis(&self, i: usize, axis: Axis, origin: impl Fn(usize) -> Option<usize>) -> Self {
        let mut axes = self.axes.clone();
        axes[i] = axis;
        let new_shape: Vec<usize> = axes.iter().map(Axis::cells).collect();
        let old_strides = self.strides();
        let mut values = Vec::with_capacity(new_shape.iter().product());
        for_each_index(&new_shape, |idx| {
            let mut flat = 0;
            for (k, &j) in idx.iter().enumerate() {
                if k == i {
                    match origin(j) {
                        Some(o) => flat += o * old_strides[k],
                        None => {
                            values.push(Complex64::new(0.0, 0.0));
                            return;
                        }
                    }
                } else {
                    flat += j * old_strides[k];
                }
            }
            values.push(self.values[flat]);
        });
        Self { axes, values }
    }

    /// Writes the documented CSV layout: one `axis<i>_breakpoints` row per
    /// axis, then a header and one row per cell (`i0,..,re,im`).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().flexible(true).from_writer(w);
        for (i, a) in self.axes.iter().enumerate() {
            let mut row = vec![format!("axis{i}_breakpoints")];
            row.extend(a.breakpoints.iter().map(|b| b.to_string()));
            wr.write_record(&row)?;
        }
        let mut header: Vec<String> = (0..self.dim()).map(|i| format!("i{i}")).collect();
        header.push("re".into());
        header.push("im".into());
        wr.write_record(&header)?;
        let mut k = 0;
        for_each_index(&self.shape(), |idx| {
            let mut row: Vec<String> = idx.iter().map(|j| j.to_string()).collect();
            row.push(self.values[k].re.to_string());
            row.push(self.values[k].im.to_string());
            // errors surface on flush below
            let _ = wr.write_record(&row);
            k += 1;
        });
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(r);
        let mut axes = Vec::new();
        let mut cells: Vec<(Vec<usize>, Complex64)> = Vec::new();
        let mut in_header = true;
        for rec in rd.records() {
            let rec = rec?;
            let first = rec.get(0).unwrap_or("").trim();
            if in_header && first.starts_with("axis") && first.ends_with("_breakpoints") {
                let bp = rec
                    .iter()
                    .skip(1)
                    .map(parse_f64)
                    .collect::<Result<Vec<_>>>()?;
                axes.push(Axis::validated(bp, axes.len())?);
                continue;
            }
            if in_header {
                in_header = false;
                if first.starts_with('i') {
                    continue;
                }
            }
            let d = axes.len();
            if rec.len() != d + 2 {
                return Err(Error::Parse(format!("cell row has {} fields, expected {}", rec.len(), d + 2)));
            }
            let idx = (0..d)
                .map(|i| rec[i].trim().parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let v = Complex64::new(parse_f64(&rec[d])?, parse_f64(&rec[d + 1])?);
            cells.push((idx, v));
        }
        if axes.is_empty() {
            return Err(Error::Parse("no axis rows".into()));
        }
        let shape: Vec<usize> = axes.iter().map(Axis::cells).collect();
        let strides = strides_of(&shape);
        let mut values = vec![Complex64::new(0.0, 0.0); shape.iter().product()];
        for (idx, v) in cells {
            if idx.iter().zip(&shape).any(|(&j, &n)| j >= n) {
                return Err(Error::Parse(format!("cell index {idx:?} out of range")));
            }
            let flat: usize = idx.iter().zip(&strides).map(|(&j, s)| j * s).sum();
            values[flat] = v;
        }
        Self::new(axes, values)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Applies the `rows x shape[axis]` matrix `m` (row-major) along `axis` of a
/// row-major tensor.
pub(crate) fn contract_axis(values: &[Complex64], shape: &[usize], axis: usize, m: &[Complex64], rows: usize) -> Vec<Complex64> {
    use rayon::prelude::*;
    let n = shape[axis];
    debug_assert_eq!(m.len(), rows * n);
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * rows * inner];
    out.par_chunks_mut(inner.max(1)).enumerate().for_each(|(block, dst)| {
        if inner == 0 {
            return;
        }
        let (o, r) = (block / rows, block % rows);
        let row = &m[r * n..(r + 1) * n];
        for (j, &w) in row.iter().enumerate() {
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let src = &values[(o * n + j) * inner..(o * n + j + 1) * inner];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    });
    out
}

/// Visits every multi-index of `shape` in row-major order.
pub fn for_each_index(shape: &[usize], mut g: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let d = shape.len();
    let mut idx = vec![0usize; d];
    loop {
        g(&idx);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < shape[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Power weights per axis and an outer exponent `p`:
/// `(int (prod |x_i|^{a_i} |f|)^p dx)^{1/p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNormSpec {
    pub exponent_per_axis: Vec<f64>,
    pub outer_power: f64,
}

impl WeightedNormSpec {
    pub fn new(exponent_per_axis: Vec<f64>, outer_power: f64) -> Result<Self> {
        if !(outer_power > 0.0 && outer_power.is_finite()) {
            return Err(Error::InvalidParameter(format!("outer power must be in (0, inf), got {outer_power}")));
        }
        Ok(Self { exponent_per_axis, outer_power })
    }

    /// Same exponent on every axis.
    pub fn isotropic(d: usize, exponent: f64, outer_power: f64) -> Result<Self> {
        Self::new(vec![exponent; d], outer_power)
    }

    pub fn unweighted(d: usize, outer_power: f64) -> Result<Self> {
        Self::isotropic(d, 0.0, outer_power)
    }
}

/// `int_lo^hi |x|^a dx` for a cell that does not straddle 0; `inf` when the
/// weight is not integrable at an endpoint equal to 0.
pub fn power_integral(lo: f64, hi: f64, a: f64) -> f64 {
    let (lo, hi) = if hi <= 0.0 { (-hi, -lo) } else { (lo, hi) };
    debug_assert!(lo >= 0.0, "cell straddles 0");
    if a == 0.0 {
        return hi - lo;
    }
    let s = a + 1.0;
    if lo == 0.0 {
        return if s > 0.0 { hi.powf(s) / s } else { f64::INFINITY };
    }
    let log_ratio = ((hi - lo) / lo).ln_1p();
    if s.abs() < 1e-15 {
        return log_ratio;
    }
    lo.powf(s) * (s * log_ratio).exp_m1() / s
}

/// Exact weighted norm of a piecewise-constant function.
pub fn weighted_integral(f: &GridFunction, w: &WeightedNormSpec) -> Result<f64> {
    Ok(weighted_power_integral(f, w)?.powf(1.0 / w.outer_power))
}

/// `int (prod |x_i|^{a_i} |f|)^p dx` without the final root.
pub fn weighted_power_integral(f: &GridFunction, w: &WeightedNormSpec) -> Result<f64> {
    let d = f.dim();
    if w.exponent_per_axis.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} weight exponents for a {d}-dimensional function",
            w.exponent_per_axis.len()
        )));
    }
    let p = w.outer_power;
    let factors: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let a = f.axis(i);
            (0..a.cells())
                .map(|j| {
                    let (lo, hi) = a.cell(j);
                    power_integral(lo, hi, w.exponent_per_axis[i] * p)
                })
                .collect()
        })
        .collect();
    let mut total = 0.0;
    let mut k = 0;
    let mut err = None;
    for_each_index(&f.shape(), |idx| {
        let v = f.values[k].norm();
        k += 1;
        if v == 0.0 || err.is_some() {
            return;
        }
        let mut wt = 1.0;
        for (i, &j) in idx.iter().enumerate() {
            let fi = factors[i][j];
            if fi.is_infinite() {
                err = Some(Error::NonIntegrableWeight { axis: i, exponent: w.exponent_per_axis[i] * p });
                return;
            }
            wt *= fi;
        }
        total += v.powf(p) * wt;
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}
