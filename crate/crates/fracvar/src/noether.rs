//! Local (gauge) transformations and second-Noether identity verification.
//!
//! A transformation shifts each dependent component by fractional
//! differential operators acting on r arbitrary parameter functions:
//! `x-bar^k = x^k + sum_s T[k][s](p_s)`. When the action is invariant under
//! such a family for all parameter functions, the Lagrange expressions obey
//! r identities
//!
//! ```text
//! sum_k T~[k][s](E_k) = 0,
//! ```
//!
//! with T~ the formal adjoint. These hold for every configuration, not only
//! extremals, so the verifier samples arbitrary smooth trajectories and
//! never needs to solve the Euler-Lagrange equations. Residual norms are
//! taken over interior nodes because right Riemann-Liouville derivatives of
//! non-vanishing Lagrange expressions are singular at the right endpoint.

use crate::error::{Error, Result};
use crate::grid::GridFn1D;
use crate::opalgebra::{FracOperator, GridData};
use crate::variational::{
    action_1d, action_md, euler_lagrange_1d, euler_lagrange_md, FieldConfig, Lagrangian1D,
    LagrangianDensity, Trajectory,
};

/// Matrix of fractional operators defining an infinitesimal local
/// transformation: entry `[k][s]` acts on parameter function `s` and feeds
/// component `k`. `None` entries are zero operators.
pub struct Transformation<G> {
    ops: Vec<Vec<Option<FracOperator<G>>>>,
}

impl<G: GridData> Transformation<G> {
    pub fn new(ops: Vec<Vec<Option<FracOperator<G>>>>) -> Result<Self> {
        let first = ops.first().ok_or(Error::ShapeMismatch {
            context: "transformation needs at least one component row".into(),
        })?;
        let r = first.len();
        if r == 0 {
            return Err(Error::ShapeMismatch {
                context: "transformation needs at least one parameter column".into(),
            });
        }
        if ops.iter().any(|row| row.len() != r) {
            return Err(Error::ShapeMismatch {
                context: "transformation operator matrix is ragged".into(),
            });
        }
        Ok(Self { ops })
    }

    /// Number of dependent components n.
    pub fn n_components(&self) -> usize {
        self.ops.len()
    }

    /// Number of parameter functions r.
    pub fn r(&self) -> usize {
        self.ops[0].len()
    }

    pub fn op(&self, component: usize, param: usize) -> Option<&FracOperator<G>> {
        self.ops[component][param].as_ref()
    }

    fn shifts(&self, p: &[G]) -> Result<Vec<Option<G>>> {
        if p.len() != self.r() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "transformation expects {} parameter functions, got {}",
                    self.r(),
                    p.len()
                ),
            });
        }
        let mut out = Vec::with_capacity(self.n_components());
        for row in &self.ops {
            let mut acc: Option<G> = None;
            for (s, op) in row.iter().enumerate() {
                if let Some(op) = op {
                    let piece = op.apply(&p[s])?;
                    acc = Some(match acc {
                        None => piece,
                        Some(sum) => sum.zip_with(&piece, |a, b| a + b)?,
                    });
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// The r arbitrary parameter functions of a transformation, optionally
/// tagged as boundary-vanishing (value and required derivative traces zero
/// at the boundary).
pub struct ParamFunctions<G> {
    p: Vec<G>,
    boundary_vanishing: bool,
}

impl<G: GridData> ParamFunctions<G> {
    pub fn new(p: Vec<G>) -> Self {
        Self {
            p,
            boundary_vanishing: false,
        }
    }

    pub fn boundary_vanishing(p: Vec<G>) -> Self {
        Self {
            p,
            boundary_vanishing: true,
        }
    }

    pub fn is_boundary_vanishing(&self) -> bool {
        self.boundary_vanishing
    }

    pub fn functions(&self) -> &[G] {
        &self.p
    }
}

fn transform_components<G: GridData>(
    xs: &[G],
    t: &Transformation<G>,
    p: &ParamFunctions<G>,
) -> Result<Vec<G>> {
    if xs.len() != t.n_components() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "transformation has {} component rows, configuration has {}",
                t.n_components(),
                xs.len()
            ),
        });
    }
    let shifts = t.shifts(p.functions())?;
    xs.iter()
        .zip(shifts)
        .map(|(x, shift)| match shift {
            None => Ok(x.clone()),
            Some(s) => x.zip_with(&s, |a, b| a + b),
        })
        .collect()
}

/// Transformed trajectory `x-bar^k = x^k + sum_s T[k][s](p_s)`.
pub fn transform(
    x: &Trajectory,
    t: &Transformation<GridFn1D>,
    p: &ParamFunctions<GridFn1D>,
) -> Result<Trajectory> {
    Trajectory::new(transform_components(x.components(), t, p)?)
}

/// Field version of [`transform`].
pub fn transform_field(
    u: &FieldConfig,
    t: &Transformation<crate::grid::GridField>,
    p: &ParamFunctions<crate::grid::GridField>,
) -> Result<FieldConfig> {
    FieldConfig::new(transform_components(u.components(), t, p)?)
}

/// Max over parameter samples of `|action(x-bar) - action(x)|`. For an
/// invariant (Lagrangian, transformation) pair this sits at the quadrature
/// rounding floor; it is a falsifier over the sampled family, not a proof.
pub fn invariance_gap(
    lag: &Lagrangian1D,
    x: &Trajectory,
    t: &Transformation<GridFn1D>,
    samples: &[ParamFunctions<GridFn1D>],
) -> Result<f64> {
    let base = action_1d(lag, x)?;
    let mut gap = 0.0f64;
    for p in samples {
        let shifted = transform(x, t, p)?;
        gap = gap.max((action_1d(lag, &shifted)? - base).abs());
    }
    Ok(gap)
}

/// Field version of [`invariance_gap`].
pub fn invariance_gap_md(
    density: &LagrangianDensity,
    u: &FieldConfig,
    t: &Transformation<crate::grid::GridField>,
    samples: &[ParamFunctions<crate::grid::GridField>],
) -> Result<f64> {
    let base = action_md(density, u)?;
    let mut gap = 0.0f64;
    for p in samples {
        let shifted = transform_field(u, t, p)?;
        gap = gap.max((action_md(density, &shifted)? - base).abs());
    }
    Ok(gap)
}

/// Per-parameter residuals of the second-Noether identities together with
/// their interior max-norms.
pub struct IdentityReport<G> {
    residuals: Vec<G>,
    max_norms: Vec<f64>,
}

impl<G: GridData> IdentityReport<G> {
    pub fn residuals(&self) -> &[G] {
        &self.residuals
    }

    /// Interior max-norm per parameter index.
    pub fn max_norms(&self) -> &[f64] {
        &self.max_norms
    }

    /// Largest per-parameter norm (NaN poisons the result).
    pub fn worst(&self) -> f64 {
        self.max_norms.iter().fold(0.0f64, |m, &v| {
            if v.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(v)
            }
        })
    }
}

fn residual_report<G: GridData>(els: &[G], t: &Transformation<G>) -> Result<IdentityReport<G>> {
    if els.len() != t.n_components() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "transformation has {} component rows, {} Lagrange expressions supplied",
                t.n_components(),
                els.len()
            ),
        });
    }
    let mut residuals = Vec::with_capacity(t.r());
    let mut max_norms = Vec::with_capacity(t.r());
    for s in 0..t.r() {
        let mut acc: Option<G> = None;
        for k in 0..t.n_components() {
            if let Some(op) = t.op(k, s) {
                let piece = op.adjoint().apply(&els[k])?;
                acc = Some(match acc {
                    None => piece,
                    Some(sum) => sum.zip_with(&piece, |a, b| a + b)?,
                });
            }
        }
        let residual = acc.unwrap_or_else(|| els[0].map(|_| 0.0));
        max_norms.push(residual.interior_max_abs());
        residuals.push(residual);
    }
    Ok(IdentityReport {
        residuals,
        max_norms,
    })
}

/// Residuals `sum_k T~[k][s](E_k)` of the 1D second-Noether identities for
/// an arbitrary trajectory.
pub fn noether_residual(
    lag: &Lagrangian1D,
    x: &Trajectory,
    t: &Transformation<GridFn1D>,
) -> Result<IdentityReport<GridFn1D>> {
    let els = euler_lagrange_1d(lag, x)?;
    residual_report(&els, t)
}

/// Field version of [`noether_residual`].
pub fn noether_residual_md(
    density: &LagrangianDensity,
    u: &FieldConfig,
    t: &Transformation<crate::grid::GridField>,
) -> Result<IdentityReport<crate::grid::GridField>> {
    let els = euler_lagrange_md(density, u)?;
    residual_report(&els, t)
}

// Classical (integer-order) route, kept separate from the fractional
// pipeline so the order-1 reduction is a genuine cross-check.
fn classical_d1(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let mut out = vec![0.0; n + 1];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for j in 1..n {
        out[j] = (values[j + 1] - values[j - 1]) / (2.0 * h);
    }
    out[n] = (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h);
    out
}

/// Residual of the classical second-Noether identity
/// `sum_k b_0^k E_k + sum_k sum_i (-1)^i d^i/dt^i (b_i^k E_k)`
/// with classical stencils throughout; `b[k]` lists the coefficient
/// functions `b_0^k .. b_l^k` for component k. All Lagrangian orders must
/// equal 1. Returns the interior max-norm of the residual.
pub fn classical_identity_check(
    lag: &Lagrangian1D,
    x: &Trajectory,
    b: &[Vec<GridFn1D>],
) -> Result<f64> {
    if lag.alphas().iter().any(|a| a.value() != 1.0) {
        return Err(Error::OrdersNotClassical);
    }
    if b.len() != lag.n() || lag.n() != x.components().len() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "need one coefficient list per component: {} lists for {} components",
                b.len(),
                lag.n()
            ),
        });
    }
    let grid = *x.grid();
    let h = grid.h();
    let n_nodes = grid.num_nodes();
    let n = lag.n();

    // classical Lagrange expressions E_k = dL/dx - d/dt dL/dv
    let mut xs = vec![0.0; n];
    let mut vs = vec![0.0; n];
    let mut dx = vec![0.0; n];
    let mut dv = vec![0.0; n];
    let mut vels = Vec::with_capacity(n);
    for c in x.components() {
        vels.push(classical_d1(c.values(), h));
    }
    let mut dx_rows = vec![vec![0.0; n_nodes]; n];
    let mut dv_rows = vec![vec![0.0; n_nodes]; n];
    for (j, t) in grid.nodes().enumerate() {
        for k in 0..n {
            xs[k] = x.components()[k].values()[j];
            vs[k] = vels[k][j];
        }
        lag.d_dx(t, &xs, &vs, &mut dx);
        lag.d_dv(t, &xs, &vs, &mut dv);
        for k in 0..n {
            dx_rows[k][j] = dx[k];
            dv_rows[k][j] = dv[k];
        }
    }
    let mut els = Vec::with_capacity(n);
    for k in 0..n {
        let dvdt = classical_d1(&dv_rows[k], h);
        let e: Vec<f64> = dx_rows[k]
            .iter()
            .zip(&dvdt)
            .map(|(a, b)| a - b)
            .collect();
        els.push(e);
    }

    let mut residual = vec![0.0f64; n_nodes];
    for k in 0..n {
        for (i, coeff) in b[k].iter().enumerate() {
            if coeff.grid() != &grid {
                return Err(Error::DomainMismatch);
            }
            let mut term: Vec<f64> = coeff
                .values()
                .iter()
                .zip(&els[k])
                .map(|(c, e)| c * e)
                .collect();
            for _ in 0..i {
                term = classical_d1(&term, h);
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            for (r, t) in residual.iter_mut().zip(&term) {
                *r += sign * t;
            }
        }
    }
    Ok(GridFn1D::from_values_raw(&grid, residual).interior_max_abs())
}
