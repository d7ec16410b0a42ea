//! Uniform 1D grids, tensor-product grids and sampled functions on them.
//!
//! Both interval endpoints are nodes, so boundary traces can be read off
//! exactly. Multi-dimensional values are stored row-major with axis 0
//! slowest (axis 0 is time by convention, the remaining axes are space).

use crate::error::{Error, Result};

/// Uniform partition of `[a, b]` into `n` subintervals (`n + 1` nodes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid1D {
    a: f64,
    b: f64,
    n: usize,
}

impl UniformGrid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        if n < 2 {
            return Err(Error::TooFewSubintervals { n });
        }
        Ok(Self { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of subintervals; the grid has `n() + 1` nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.n + 1
    }

    /// Step h = (b - a) / n.
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// j-th node. Computed as a convex blend so that `node(0) == a`,
    /// `node(n) == b` exactly, and nodes of a refined grid reproduce the
    /// coarse nodes bit-for-bit.
    pub fn node(&self, j: usize) -> f64 {
        let s = j as f64 / self.n as f64;
        self.a * (1.0 - s) + self.b * s
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|j| self.node(j))
    }

    /// Same interval with `n * factor` subintervals. Every old node is an
    /// exact node of the refined grid.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if factor < 2 {
            return Err(Error::RefinementFactor { factor });
        }
        Self::new(self.a, self.b, self.n * factor)
    }
}

/// Real-valued function sampled at every node of a [`UniformGrid1D`].
///
/// Sampling constructors reject non-finite values; operator outputs may
/// carry signed-infinity markers at endpoint nodes where the continuum
/// operator is singular (see the fractional derivative routines).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn1D {
    grid: UniformGrid1D,
    values: Vec<f64>,
}

impl GridFn1D {
    /// Sample `f` at every node.
    pub fn sample(f: impl Fn(f64) -> f64, grid: &UniformGrid1D) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.num_nodes());
        for (j, t) in grid.nodes().enumerate() {
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { index: j, value: v });
            }
            values.push(v);
        }
        Ok(Self { grid: *grid, values })
    }

    /// Wrap existing node values; count and finiteness are checked.
    pub fn from_values(grid: &UniformGrid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_nodes() {
            return Err(Error::ValueCount {
                expected: grid.num_nodes(),
                got: values.len(),
            });
        }
        for (j, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { index: j, value: v });
            }
        }
        Ok(Self { grid: *grid, values })
    }

    /// Operator-output constructor: no finiteness check, so singular
    /// endpoint markers survive.
    pub(crate) fn from_values_raw(grid: &UniformGrid1D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.num_nodes());
        Self { grid: *grid, values }
    }

    pub fn grid(&self) -> &UniformGrid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Samples of t -> f(a + b - t); the reflected function on the same grid.
    pub fn reflect(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { grid: self.grid, values }
    }

    /// Trapezoidal quadrature over [a, b].
    pub fn trapezoid(&self) -> f64 {
        let h = self.grid.h();
        let n = self.grid.n();
        let mut acc = 0.5 * (self.values[0] + self.values[n]);
        for &v in &self.values[1..n] {
            acc += v;
        }
        acc * h
    }

    /// Trapezoidal quadrature that drops the first and/or last cell when an
    /// endpoint carries a non-finite singular marker. A non-finite value at
    /// an interior node poisons the result with NaN.
    pub fn trapezoid_skip_singular(&self) -> f64 {
        let h = self.grid.h();
        let n = self.grid.n();
        for &v in &self.values[1..n] {
            if !v.is_finite() {
                return f64::NAN;
            }
        }
        let lo = if self.values[0].is_finite() { 0 } else { 1 };
        let hi = if self.values[n].is_finite() { n } else { n - 1 };
        let mut acc = 0.5 * (self.values[lo] + self.values[hi]);
        for &v in &self.values[lo + 1..hi] {
            acc += v;
        }
        acc * h
    }

    /// Max |value| over interior nodes 1..n-1. NaN if any interior value is
    /// non-finite.
    pub fn interior_max_abs(&self) -> f64 {
        let n = self.grid.n();
        let mut m = 0.0f64;
        for &v in &self.values[1..n] {
            if !v.is_finite() {
                return f64::NAN;
            }
            m = m.max(v.abs());
        }
        m
    }

    /// Max |value| over all nodes; NaN on any non-finite node.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for &v in &self.values {
            if !v.is_finite() {
                return f64::NAN;
            }
            m = m.max(v.abs());
        }
        m
    }
}

/// Tensor product of uniform 1D grids. Axis 0 is time.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGrid {
    axes: Vec<UniformGrid1D>,
}

impl TensorGrid {
    pub fn new(axes: Vec<UniformGrid1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::ShapeMismatch {
                context: "tensor grid needs at least one axis".into(),
            });
        }
        Ok(Self { axes })
    }

    /// Box `[a, b]^rank` with `n` subintervals per axis.
    pub fn cube(a: f64, b: f64, n: usize, rank: usize) -> Result<Self> {
        let axis = UniformGrid1D::new(a, b, n)?;
        Self::new(vec![axis; rank])
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> &UniformGrid1D {
        &self.axes[i]
    }

    pub fn axes(&self) -> &[UniformGrid1D] {
        &self.axes
    }

    pub fn num_nodes(&self) -> usize {
        self.axes.iter().map(|g| g.num_nodes()).product()
    }

    /// Row-major strides, last axis fastest.
    pub fn strides(&self) -> Vec<usize> {
        let r = self.rank();
        let mut s = vec![1usize; r];
        for i in (0..r.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.axes[i + 1].num_nodes();
        }
        s
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        let strides = self.strides();
        idx.iter().zip(&strides).map(|(i, s)| i * s).sum()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        let mut idx = vec![0usize; self.rank()];
        for (i, s) in strides.iter().enumerate() {
            idx[i] = flat / s;
            flat %= s;
        }
        idx
    }

    /// Node coordinates for a multi-index.
    pub fn coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.axes)
            .map(|(&j, g)| g.node(j))
            .collect()
    }
}

/// Real-valued function sampled on every node of a [`TensorGrid`],
/// row-major with axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: TensorGrid,
    values: Vec<f64>,
}

impl GridField {
    /// Sample `f(coords)` at every node.
    pub fn sample(f: impl Fn(&[f64]) -> f64, grid: &TensorGrid) -> Result<Self> {
        let total = grid.num_nodes();
        let mut values = Vec::with_capacity(total);
        let mut coords = vec![0.0f64; grid.rank()];
        let mut idx = vec![0usize; grid.rank()];
        for flat in 0..total {
            for (i, c) in coords.iter_mut().enumerate() {
                *c = grid.axis(i).node(idx[i]);
            }
            let v = f(&coords);
            if !v.is_finite() {
                return Err(Error::NonFiniteFieldSample {
                    indices: idx.clone(),
                    value: v,
                });
            }
            values.push(v);
            if flat + 1 < total {
                advance(&mut idx, grid);
            }
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn from_values(grid: &TensorGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_nodes() {
            return Err(Error::ValueCount {
                expected: grid.num_nodes(),
                got: values.len(),
            });
        }
        for (flat, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFieldSample {
                    indices: grid.multi_index(flat),
                    value: v,
                });
            }
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub(crate) fn from_values_raw(grid: &TensorGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.num_nodes());
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &TensorGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of 1D fibers along `axis`.
    pub fn fiber_count(&self, axis: usize) -> usize {
        self.values.len() / self.grid.axis(axis).num_nodes()
    }

    /// Flat offsets of the `which`-th fiber along `axis`: a base offset plus
    /// multiples of the axis stride.
    pub(crate) fn fiber_layout(&self, axis: usize, which: usize) -> (usize, usize) {
        let strides = self.grid.strides();
        let stride = strides[axis];
        let mut rem = which;
        let mut base = 0usize;
        for i in 0..self.grid.rank() {
            if i == axis {
                continue;
            }
            let len = self.grid.axis(i).num_nodes();
            let block: usize = (i + 1..self.grid.rank())
                .filter(|&k| k != axis)
                .map(|k| self.grid.axis(k).num_nodes())
                .product();
            let pos = rem / block;
            rem %= block;
            debug_assert!(pos < len);
            base += pos * strides[i];
        }
        (base, stride)
    }

    pub fn read_fiber(&self, axis: usize, which: usize, buf: &mut Vec<f64>) {
        let len = self.grid.axis(axis).num_nodes();
        let (base, stride) = self.fiber_layout(axis, which);
        buf.clear();
        buf.extend((0..len).map(|t| self.values[base + t * stride]));
    }

    pub fn write_fiber(&mut self, axis: usize, which: usize, vals: &[f64]) {
        let len = self.grid.axis(axis).num_nodes();
        debug_assert_eq!(vals.len(), len);
        let (base, stride) = self.fiber_layout(axis, which);
        for (t, &v) in vals.iter().enumerate() {
            self.values[base + t * stride] = v;
        }
    }

    /// Tensor-product trapezoidal quadrature over the whole box.
    pub fn trapezoid(&self) -> f64 {
        let rank = self.grid.rank();
        let mut idx = vec![0usize; rank];
        let mut acc = 0.0f64;
        let total = self.values.len();
        for flat in 0..total {
            let mut w = 1.0f64;
            for (i, &j) in idx.iter().enumerate() {
                let g = self.grid.axis(i);
                let wj = if j == 0 || j == g.n() { 0.5 } else { 1.0 };
                w *= wj * g.h();
            }
            acc += w * self.values[flat];
            if flat + 1 < total {
                advance(&mut idx, &self.grid);
            }
        }
        acc
    }

    /// Tensor-product trapezoidal quadrature that drops every cell touching
    /// a non-finite corner value (singular markers live on boundary faces,
    /// so this removes a one-cell neighborhood of the flagged faces).
    pub fn trapezoid_skip_singular(&self) -> f64 {
        let rank = self.grid.rank();
        let strides = self.grid.strides();
        let cell_volume: f64 = (0..rank).map(|i| self.grid.axis(i).h()).product();
        let corner_weight = cell_volume / (1usize << rank) as f64;
        let num_cells: usize = (0..rank).map(|i| self.grid.axis(i).n()).product();
        let mut cell = vec![0usize; rank];
        let mut acc = 0.0f64;
        for c in 0..num_cells {
            let base: usize = cell.iter().zip(&strides).map(|(i, s)| i * s).sum();
            let mut corner_sum = 0.0f64;
            let mut ok = true;
            for mask in 0..(1usize << rank) {
                let mut off = base;
                for (i, s) in strides.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        off += s;
                    }
                }
                let v = self.values[off];
                if !v.is_finite() {
                    ok = false;
                    break;
                }
                corner_sum += v;
            }
            if ok {
                acc += corner_weight * corner_sum;
            }
            if c + 1 < num_cells {
                for i in (0..rank).rev() {
                    if cell[i] + 1 < self.grid.axis(i).n() {
                        cell[i] += 1;
                        break;
                    }
                    cell[i] = 0;
                }
            }
        }
        acc
    }

    /// Max |value| over nodes with every index in 1..n_i-1.
    /// NaN if any such value is non-finite.
    pub fn interior_max_abs(&self) -> f64 {
        let rank = self.grid.rank();
        let mut idx = vec![0usize; rank];
        let mut m = 0.0f64;
        let total = self.values.len();
        for flat in 0..total {
            let interior = idx
                .iter()
                .enumerate()
                .all(|(i, &j)| j >= 1 && j < self.grid.axis(i).n());
            if interior {
                let v = self.values[flat];
                if !v.is_finite() {
                    return f64::NAN;
                }
                m = m.max(v.abs());
            }
            if flat + 1 < total {
                advance(&mut idx, &self.grid);
            }
        }
        m
    }
}

fn advance(idx: &mut [usize], grid: &TensorGrid) {
    for i in (0..idx.len()).rev() {
        if idx[i] < grid.axis(i).n() {
            idx[i] += 1;
            return;
        }
        idx[i] = 0;
    }
}

/// Sample a scalar function on a 1D grid (checked).
pub fn sample_1d(f: impl Fn(f64) -> f64, grid: &UniformGrid1D) -> Result<GridFn1D> {
    GridFn1D::sample(f, grid)
}

/// Sample a scalar function of several variables on a tensor grid (checked).
pub fn sample_field(f: impl Fn(&[f64]) -> f64, grid: &TensorGrid) -> Result<GridField> {
    GridField::sample(f, grid)
}
