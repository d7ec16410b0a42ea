//! Fractional action functionals and Lagrange expressions.
//!
//! A 1D Lagrangian `L(t, x, v)` is evaluated with `v_k` the left Caputo
//! derivative of order `alpha_k` of the k-th trajectory component. The
//! fractional Lagrange expression of component k is
//!
//!   E_k = dL/dx^k + D_right^(alpha_k) (dL/dv^k),
//!
//! with the right Riemann-Liouville derivative taken along the trajectory;
//! it vanishes on extremals. The multi-dimensional density version replaces
//! the single derivative slot by one Caputo slot per axis and sums the
//! right-derivative terms over axes.
//!
//! Lagrangians carry user-supplied analytic partial derivatives; a central
//! finite-difference fallback (step `1e-6 * (1 + |value|)`) exists for
//! prototyping, and the analytic partials are probed against it at
//! construction time in debug builds.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fracops::{self, FracOrder, OpKind};
use crate::grid::{GridField, GridFn1D, TensorGrid, UniformGrid1D};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FD_STEP: f64 = 1e-6;
#[cfg(any(debug_assertions, test))]
const PARTIALS_TOL: f64 = 1e-5;

type Eval1D = Arc<dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync>;
type Partial1D = Arc<dyn Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync>;

fn check_alphas(alphas: &[FracOrder]) -> Result<()> {
    for a in alphas {
        let v = a.value();
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::OrderRange {
                mu: v,
                range: "(0, 1]",
                operator: "Lagrangian derivative slot",
            });
        }
    }
    Ok(())
}

/// Lagrangian of a single-integral fractional variational problem with `n`
/// trajectory components.
pub struct Lagrangian1D {
    alphas: Vec<FracOrder>,
    eval: Eval1D,
    d_dx: Partial1D,
    d_dv: Partial1D,
}

impl Lagrangian1D {
    /// Lagrangian with analytic partials. In debug builds the partials are
    /// probed against central differences of `eval` at seeded random points
    /// and must agree to about five digits.
    pub fn new(
        alphas: Vec<FracOrder>,
        eval: impl Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
        d_dx: impl Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        d_dv: impl Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Result<Self> {
        check_alphas(&alphas)?;
        let lagrangian = Self {
            alphas,
            eval: Arc::new(eval),
            d_dx: Arc::new(d_dx),
            d_dv: Arc::new(d_dv),
        };
        #[cfg(debug_assertions)]
        {
            let err = lagrangian.partials_consistency_error(8, 0x5eed);
            assert!(
                err <= PARTIALS_TOL,
                "analytic partials disagree with finite differences of eval \
                 (max relative mismatch {err:.3e})"
            );
        }
        Ok(lagrangian)
    }

    /// Lagrangian with finite-difference partials derived from `eval`.
    pub fn from_eval(
        alphas: Vec<FracOrder>,
        eval: impl Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_alphas(&alphas)?;
        let eval: Eval1D = Arc::new(eval);
        let ex = eval.clone();
        let d_dx = move |t: f64, x: &[f64], v: &[f64], out: &mut [f64]| {
            let mut probe = x.to_vec();
            for k in 0..x.len() {
                out[k] = central_diff(|xk| {
                    probe[k] = xk;
                    let val = ex(t, &probe, v);
                    probe[k] = x[k];
                    val
                }, x[k]);
            }
        };
        let ev = eval.clone();
        let d_dv = move |t: f64, x: &[f64], v: &[f64], out: &mut [f64]| {
            let mut probe = v.to_vec();
            for k in 0..v.len() {
                out[k] = central_diff(|vk| {
                    probe[k] = vk;
                    let val = ev(t, x, &probe);
                    probe[k] = v[k];
                    val
                }, v[k]);
            }
        };
        Ok(Self {
            alphas,
            eval,
            d_dx: Arc::new(d_dx),
            d_dv: Arc::new(d_dv),
        })
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[FracOrder] {
        &self.alphas
    }

    pub fn eval(&self, t: f64, x: &[f64], v: &[f64]) -> f64 {
        (self.eval)(t, x, v)
    }

    pub fn d_dx(&self, t: f64, x: &[f64], v: &[f64], out: &mut [f64]) {
        (self.d_dx)(t, x, v, out)
    }

    pub fn d_dv(&self, t: f64, x: &[f64], v: &[f64], out: &mut [f64]) {
        (self.d_dv)(t, x, v, out)
    }

    /// Max relative mismatch between the analytic partials and central
    /// differences of `eval` over seeded random probe points.
    pub fn partials_consistency_error(&self, probes: usize, seed: u64) -> f64 {
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut ax = vec![0.0; n];
        let mut av = vec![0.0; n];
        for _ in 0..probes {
            let t: f64 = rng.random_range(0.0..1.0);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            self.d_dx(t, &x, &v, &mut ax);
            self.d_dv(t, &x, &v, &mut av);
            for k in 0..n {
                let fdx = {
                    let mut probe = x.clone();
                    central_diff(|xk| {
                        probe[k] = xk;
                        let val = self.eval(t, &probe, &v);
                        probe[k] = x[k];
                        val
                    }, x[k])
                };
                let fdv = {
                    let mut probe = v.clone();
                    central_diff(|vk| {
                        probe[k] = vk;
                        let val = self.eval(t, &x, &probe);
                        probe[k] = v[k];
                        val
                    }, v[k])
                };
                worst = worst.max((ax[k] - fdx).abs() / (1.0 + ax[k].abs()));
                worst = worst.max((av[k] - fdv).abs() / (1.0 + av[k].abs()));
            }
        }
        worst
    }
}

fn central_diff(f: impl FnMut(f64) -> f64, at: f64) -> f64 {
    let mut f = f;
    let step = FD_STEP * (1.0 + at.abs());
    (f(at + step) - f(at - step)) / (2.0 * step)
}

/// Vector of trajectory components sampled on one shared grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    components: Vec<GridFn1D>,
}

impl Trajectory {
    pub fn new(components: Vec<GridFn1D>) -> Result<Self> {
        let first = components.first().ok_or(Error::ShapeMismatch {
            context: "trajectory needs at least one component".into(),
        })?;
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::DomainMismatch);
        }
        Ok(Self { components })
    }

    pub fn grid(&self) -> &UniformGrid1D {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[GridFn1D] {
        &self.components
    }
}

fn caputo_velocities(x: &Trajectory, alphas: &[FracOrder]) -> Result<Vec<GridFn1D>> {
    x.components()
        .iter()
        .zip(alphas)
        .map(|(c, &a)| fracops::left_caputo(c, a))
        .collect()
}

/// Action of a trajectory: the trapezoidal quadrature of
/// `L(t, x(t), cD^alpha x(t))` over the trajectory grid.
pub fn action_1d(lag: &Lagrangian1D, x: &Trajectory) -> Result<f64> {
    if lag.n() != x.components().len() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "Lagrangian has {} components, trajectory has {}",
                lag.n(),
                x.components().len()
            ),
        });
    }
    let vels = caputo_velocities(x, lag.alphas())?;
    let grid = *x.grid();
    let mut xs = vec![0.0; lag.n()];
    let mut vs = vec![0.0; lag.n()];
    let mut integrand = Vec::with_capacity(grid.num_nodes());
    for (j, t) in grid.nodes().enumerate() {
        for k in 0..lag.n() {
            xs[k] = x.components()[k].values()[j];
            vs[k] = vels[k].values()[j];
        }
        integrand.push(lag.eval(t, &xs, &vs));
    }
    Ok(GridFn1D::from_values_raw(&grid, integrand).trapezoid())
}

/// Fractional Lagrange expressions `E_k = dL/dx^k + D_right^(alpha_k) (dL/dv^k)`
/// along a trajectory, one grid function per component. The right endpoint
/// node is singular (flagged non-finite) whenever the inner partial has a
/// nonzero trace there.
pub fn euler_lagrange_1d(lag: &Lagrangian1D, x: &Trajectory) -> Result<Vec<GridFn1D>> {
    if lag.n() != x.components().len() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "Lagrangian has {} components, trajectory has {}",
                lag.n(),
                x.components().len()
            ),
        });
    }
    let n = lag.n();
    let vels = caputo_velocities(x, lag.alphas())?;
    let grid = *x.grid();
    let num_nodes = grid.num_nodes();
    let mut xs = vec![0.0; n];
    let mut vs = vec![0.0; n];
    let mut dx_rows = vec![vec![0.0; num_nodes]; n];
    let mut dv_rows = vec![vec![0.0; num_nodes]; n];
    let mut dx = vec![0.0; n];
    let mut dv = vec![0.0; n];
    for (j, t) in grid.nodes().enumerate() {
        for k in 0..n {
            xs[k] = x.components()[k].values()[j];
            vs[k] = vels[k].values()[j];
        }
        lag.d_dx(t, &xs, &vs, &mut dx);
        lag.d_dv(t, &xs, &vs, &mut dv);
        for k in 0..n {
            dx_rows[k][j] = dx[k];
            dv_rows[k][j] = dv[k];
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let gv = GridFn1D::from_values_raw(&grid, std::mem::take(&mut dv_rows[k]));
        let rl = fracops::right_rl_derivative(&gv, lag.alphas()[k])?;
        let mut vals = std::mem::take(&mut dx_rows[k]);
        for (a, b) in vals.iter_mut().zip(rl.values()) {
            *a += b;
        }
        out.push(GridFn1D::from_values_raw(&grid, vals));
    }
    Ok(out)
}

type EvalMd = Arc<dyn Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync>;
type PartialMd = Arc<dyn Fn(&[f64], &[f64], &[f64], &mut [f64]) + Send + Sync>;

/// Lagrangian density of a multiple-integral problem: `n` field components
/// on a rank-(m+1) grid, with one Caputo slot per axis.
///
/// Gradient slices are laid out component-major: `grad[j * rank + i]` holds
/// the order-`alpha_i` Caputo derivative of component `j` along axis `i`.
pub struct LagrangianDensity {
    n_components: usize,
    alphas: Vec<FracOrder>,
    eval: EvalMd,
    d_du: PartialMd,
    d_dgrad: PartialMd,
}

impl LagrangianDensity {
    pub fn new(
        n_components: usize,
        alphas: Vec<FracOrder>,
        eval: impl Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync + 'static,
        d_du: impl Fn(&[f64], &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        d_dgrad: impl Fn(&[f64], &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Result<Self> {
        check_alphas(&alphas)?;
        let density = Self {
            n_components,
            alphas,
            eval: Arc::new(eval),
            d_du: Arc::new(d_du),
            d_dgrad: Arc::new(d_dgrad),
        };
        #[cfg(debug_assertions)]
        {
            let err = density.partials_consistency_error(8, 0x5eed);
            assert!(
                err <= PARTIALS_TOL,
                "analytic density partials disagree with finite differences \
                 of eval (max relative mismatch {err:.3e})"
            );
        }
        Ok(density)
    }

    pub fn from_eval(
        n_components: usize,
        alphas: Vec<FracOrder>,
        eval: impl Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_alphas(&alphas)?;
        let eval: EvalMd = Arc::new(eval);
        let eu = eval.clone();
        let d_du = move |x: &[f64], u: &[f64], grad: &[f64], out: &mut [f64]| {
            let mut probe = u.to_vec();
            for k in 0..u.len() {
                out[k] = central_diff(|uk| {
                    probe[k] = uk;
                    let val = eu(x, &probe, grad);
                    probe[k] = u[k];
                    val
                }, u[k]);
            }
        };
        let eg = eval.clone();
        let d_dgrad = move |x: &[f64], u: &[f64], grad: &[f64], out: &mut [f64]| {
            let mut probe = grad.to_vec();
            for k in 0..grad.len() {
                out[k] = central_diff(|gk| {
                    probe[k] = gk;
                    let val = eg(x, u, &probe);
                    probe[k] = grad[k];
                    val
                }, grad[k]);
            }
        };
        Ok(Self {
            n_components,
            alphas,
            eval,
            d_du: Arc::new(d_du),
            d_dgrad: Arc::new(d_dgrad),
        })
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// One order per axis; the grid rank must match.
    pub fn alphas(&self) -> &[FracOrder] {
        &self.alphas
    }

    pub fn rank(&self) -> usize {
        self.alphas.len()
    }

    pub fn eval(&self, x: &[f64], u: &[f64], grad: &[f64]) -> f64 {
        (self.eval)(x, u, grad)
    }

    pub fn d_du(&self, x: &[f64], u: &[f64], grad: &[f64], out: &mut [f64]) {
        (self.d_du)(x, u, grad, out)
    }

    pub fn d_dgrad(&self, x: &[f64], u: &[f64], grad: &[f64], out: &mut [f64]) {
        (self.d_dgrad)(x, u, grad, out)
    }

    pub fn partials_consistency_error(&self, probes: usize, seed: u64) -> f64 {
        let n = self.n_components;
        let rank = self.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut du = vec![0.0; n];
        let mut dg = vec![0.0; n * rank];
        for _ in 0..probes {
            let x: Vec<f64> = (0..rank).map(|_| rng.random_range(0.0..1.0)).collect();
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let grad: Vec<f64> = (0..n * rank).map(|_| rng.random_range(-1.0..1.0)).collect();
            self.d_du(&x, &u, &grad, &mut du);
            self.d_dgrad(&x, &u, &grad, &mut dg);
            for k in 0..n {
                let mut probe = u.clone();
                let fd = central_diff(|uk| {
                    probe[k] = uk;
                    let val = self.eval(&x, &probe, &grad);
                    probe[k] = u[k];
                    val
                }, u[k]);
                worst = worst.max((du[k] - fd).abs() / (1.0 + du[k].abs()));
            }
            for k in 0..n * rank {
                let mut probe = grad.clone();
                let fd = central_diff(|gk| {
                    probe[k] = gk;
                    let val = self.eval(&x, &u, &probe);
                    probe[k] = grad[k];
                    val
                }, grad[k]);
                worst = worst.max((dg[k] - fd).abs() / (1.0 + dg[k].abs()));
            }
        }
        worst
    }
}

/// Vector field configuration: `n` components on one shared tensor grid.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    components: Vec<GridField>,
}

impl FieldConfig {
    pub fn new(components: Vec<GridField>) -> Result<Self> {
        let first = components.first().ok_or(Error::ShapeMismatch {
            context: "field configuration needs at least one component".into(),
        })?;
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::DomainMismatch);
        }
        Ok(Self { components })
    }

    pub fn grid(&self) -> &TensorGrid {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[GridField] {
        &self.components
    }
}

fn check_density_shapes(density: &LagrangianDensity, u: &FieldConfig) -> Result<()> {
    if density.n_components() != u.components().len() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "density has {} components, configuration has {}",
                density.n_components(),
                u.components().len()
            ),
        });
    }
    if density.rank() != u.grid().rank() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "density expects rank {}, grid has rank {}",
                density.rank(),
                u.grid().rank()
            ),
        });
    }
    Ok(())
}

fn caputo_gradients(u: &FieldConfig, alphas: &[FracOrder]) -> Result<Vec<Vec<GridField>>> {
    u.components()
        .iter()
        .map(|c| {
            alphas
                .iter()
                .enumerate()
                .map(|(axis, &a)| fracops::partial_frac(c, axis, OpKind::LeftCaputo, a))
                .collect()
        })
        .collect()
}

/// Action of a field configuration over the grid box.
pub fn action_md(density: &LagrangianDensity, u: &FieldConfig) -> Result<f64> {
    check_density_shapes(density, u)?;
    let grads = caputo_gradients(u, density.alphas())?;
    let grid = u.grid().clone();
    let rank = grid.rank();
    let n = density.n_components();
    let total = grid.num_nodes();
    let mut us = vec![0.0; n];
    let mut gs = vec![0.0; n * rank];
    let mut integrand = Vec::with_capacity(total);
    for flat in 0..total {
        let coords = grid.coords(&grid.multi_index(flat));
        for j in 0..n {
            us[j] = u.components()[j].values()[flat];
            for i in 0..rank {
                gs[j * rank + i] = grads[j][i].values()[flat];
            }
        }
        integrand.push(density.eval(&coords, &us, &gs));
    }
    Ok(GridField::from_values_raw(&grid, integrand).trapezoid())
}

/// Multi-dimensional fractional Lagrange expressions
/// `E_j = dL/du^j + sum_i D_right^(alpha_i, axis i) (dL/dgrad_ij)`.
/// Right boundary faces carry singular markers.
pub fn euler_lagrange_md(density: &LagrangianDensity, u: &FieldConfig) -> Result<Vec<GridField>> {
    check_density_shapes(density, u)?;
    let grads = caputo_gradients(u, density.alphas())?;
    let grid = u.grid().clone();
    let rank = grid.rank();
    let n = density.n_components();
    let total = grid.num_nodes();
    let mut us = vec![0.0; n];
    let mut gs = vec![0.0; n * rank];
    let mut du = vec![0.0; n];
    let mut dg = vec![0.0; n * rank];
    let mut du_rows = vec![vec![0.0; total]; n];
    let mut dg_rows = vec![vec![0.0; total]; n * rank];
    for flat in 0..total {
        let coords = grid.coords(&grid.multi_index(flat));
        for j in 0..n {
            us[j] = u.components()[j].values()[flat];
            for i in 0..rank {
                gs[j * rank + i] = grads[j][i].values()[flat];
            }
        }
        density.d_du(&coords, &us, &gs, &mut du);
        density.d_dgrad(&coords, &us, &gs, &mut dg);
        for j in 0..n {
            du_rows[j][flat] = du[j];
            for i in 0..rank {
                dg_rows[j * rank + i][flat] = dg[j * rank + i];
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = std::mem::take(&mut du_rows[j]);
        for i in 0..rank {
            let inner = GridField::from_values_raw(&grid, std::mem::take(&mut dg_rows[j * rank + i]));
            let rl = fracops::partial_frac(&inner, i, OpKind::RightRLDerivative, density.alphas()[i])?;
            for (a, b) in acc.iter_mut().zip(rl.values()) {
                *a += b;
            }
        }
        out.push(GridField::from_values_raw(&grid, acc));
    }
    Ok(out)
}
