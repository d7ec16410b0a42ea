//! Fractional electromagnetic field example.
//!
//! On a 4-axis grid (axis 0 time, axes 1..3 space) a scalar potential A0
//! and vector potential A define
//!
//!   E_k = cD_k^(alpha_k) A0 - cD_0^(alpha_0) A_k,
//!   H   = fractional curl of A,
//!
//! and the Lagrangian density is (1/8 pi)(E^2 - H^2). The density is
//! invariant under the gauge shift `A_j += cD_j^(alpha_j) f`, and the
//! corresponding second-Noether identity reads
//!
//!   sum_j D_right^(alpha_j, axis j) (E_j(density)) = 0,
//!
//! which is obtained here through the generic transformation machinery
//! rather than a hand-written formula.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fracops::{self, FracOrder, OpKind, Side};
use crate::grid::{GridField, TensorGrid};
use crate::noether::{self, Transformation};
use crate::opalgebra::{FracOperator, GridData, OperatorTerm};
use crate::variational::{action_md, FieldConfig, LagrangianDensity};

/// Scalar and vector potential on a shared 4-axis grid, with one
/// differentiation order per axis.
pub struct Potential {
    a0: GridField,
    a: [GridField; 3],
    alphas: [FracOrder; 4],
}

impl Potential {
    pub fn new(a0: GridField, a: [GridField; 3], alphas: [FracOrder; 4]) -> Result<Self> {
        if a0.grid().rank() != 4 {
            return Err(Error::ShapeMismatch {
                context: format!("potential needs a 4-axis grid, got rank {}", a0.grid().rank()),
            });
        }
        if a.iter().any(|c| !c.same_domain(&a0)) {
            return Err(Error::DomainMismatch);
        }
        for al in &alphas {
            let v = al.value();
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::OrderRange {
                    mu: v,
                    range: "(0, 1]",
                    operator: "potential differentiation order",
                });
            }
        }
        Ok(Self { a0, a, alphas })
    }

    pub fn grid(&self) -> &TensorGrid {
        self.a0.grid()
    }

    pub fn a0(&self) -> &GridField {
        &self.a0
    }

    pub fn a(&self) -> &[GridField; 3] {
        &self.a
    }

    pub fn alphas(&self) -> &[FracOrder; 4] {
        &self.alphas
    }

    /// The four potential components (A0, A1, A2, A3) as a field
    /// configuration for the variational machinery.
    pub fn field_config(&self) -> FieldConfig {
        FieldConfig::new(vec![
            self.a0.clone(),
            self.a[0].clone(),
            self.a[1].clone(),
            self.a[2].clone(),
        ])
        .expect("potential components share a grid")
    }
}

/// Electric and magnetic field samples.
pub struct EmFields {
    pub e: [GridField; 3],
    pub h: [GridField; 3],
}

/// Fractional gradient of a scalar field: component i is the left Caputo
/// derivative of order `alphas[i]` along spatial axis i (i = 1..3).
pub fn frac_grad(a0: &GridField, alphas: &[FracOrder; 4]) -> Result<[GridField; 3]> {
    let d = |axis: usize| fracops::partial_frac(a0, axis, OpKind::LeftCaputo, alphas[axis]);
    Ok([d(1)?, d(2)?, d(3)?])
}

/// Fractional curl with the standard component grouping:
/// H1 = cD_2 A3 - cD_3 A2 and cyclic.
pub fn frac_curl(a: &[GridField; 3], alphas: &[FracOrder; 4]) -> Result<[GridField; 3]> {
    let d = |comp: usize, axis: usize| {
        fracops::partial_frac(&a[comp], axis, OpKind::LeftCaputo, alphas[axis])
    };
    let h1 = d(2, 2)?.zip_with(&d(1, 3)?, |x, y| x - y)?;
    let h2 = d(0, 3)?.zip_with(&d(2, 1)?, |x, y| x - y)?;
    let h3 = d(1, 1)?.zip_with(&d(0, 2)?, |x, y| x - y)?;
    Ok([h1, h2, h3])
}

/// E = grad^alpha A0 - cD_0^(alpha_0) A, H = curl^alpha A.
pub fn em_fields(p: &Potential) -> Result<EmFields> {
    let grad = frac_grad(&p.a0, &p.alphas)?;
    let mut e = Vec::with_capacity(3);
    for k in 0..3 {
        let dt = fracops::partial_frac(&p.a[k], 0, OpKind::LeftCaputo, p.alphas[0])?;
        e.push(grad[k].zip_with(&dt, |x, y| x - y)?);
    }
    let h = frac_curl(&p.a, &p.alphas)?;
    Ok(EmFields {
        e: [e.remove(0), e.remove(0), e.remove(0)],
        h,
    })
}

fn em_eval(grad: &[f64]) -> (f64, [f64; 3], [f64; 3]) {
    // component-major layout, 4 axes: grad[j * 4 + i] = cD_i A_j
    let e = [
        grad[1] - grad[4],
        grad[2] - grad[8],
        grad[3] - grad[12],
    ];
    let h = [
        grad[3 * 4 + 2] - grad[2 * 4 + 3],
        grad[4 + 3] - grad[3 * 4 + 1],
        grad[2 * 4 + 1] - grad[4 + 2],
    ];
    let density = (e.iter().map(|v| v * v).sum::<f64>() - h.iter().map(|v| v * v).sum::<f64>())
        / (8.0 * PI);
    (density, e, h)
}

fn em_dgrad(grad: &[f64], out: &mut [f64]) {
    let (_, e, h) = em_eval(grad);
    let c = 1.0 / (4.0 * PI);
    out.fill(0.0);
    for k in 0..3 {
        out[k + 1] = c * e[k]; // slot cD_(k+1) A0
        out[(k + 1) * 4] = -c * e[k]; // slot cD_0 A_(k+1)
    }
    out[3 * 4 + 2] = -c * h[0];
    out[2 * 4 + 3] = c * h[0];
    out[4 + 3] = -c * h[1];
    out[3 * 4 + 1] = c * h[1];
    out[2 * 4 + 1] = -c * h[2];
    out[4 + 2] = c * h[2];
}

/// The electromagnetic Lagrangian density `(1/8 pi)(E^2 - H^2)` as a
/// 4-component density over a 4-axis grid.
pub fn em_density(alphas: &[FracOrder; 4]) -> Result<LagrangianDensity> {
    LagrangianDensity::new(
        4,
        alphas.to_vec(),
        |_, _, grad| em_eval(grad).0,
        |_, _, _, out| out.fill(0.0),
        |_, _, grad, out| em_dgrad(grad, out),
    )
}

/// The electromagnetic density plus a non-gauge-invariant term `c * A0^2`;
/// the negative control for the Noether identity.
pub fn em_density_perturbed(alphas: &[FracOrder; 4], c: f64) -> Result<LagrangianDensity> {
    LagrangianDensity::new(
        4,
        alphas.to_vec(),
        move |_, u, grad| em_eval(grad).0 + c * u[0] * u[0],
        move |_, u, _, out| {
            out.fill(0.0);
            out[0] = 2.0 * c * u[0];
        },
        |_, _, grad, out| em_dgrad(grad, out),
    )
}

/// Action of the potential under the electromagnetic density.
pub fn em_lagrangian(p: &Potential) -> Result<f64> {
    action_md(&em_density(&p.alphas)?, &p.field_config())
}

/// Gauge shift: every component picks up the matching fractional partial of
/// `f`, leaving E, H and the action unchanged.
pub fn gauge_transform(p: &Potential, f: &GridField) -> Result<Potential> {
    if !f.same_domain(&p.a0) {
        return Err(Error::DomainMismatch);
    }
    let shift = |axis: usize| fracops::partial_frac(f, axis, OpKind::LeftCaputo, p.alphas[axis]);
    let a0 = p.a0.zip_with(&shift(0)?, |a, b| a + b)?;
    let a1 = p.a[0].zip_with(&shift(1)?, |a, b| a + b)?;
    let a2 = p.a[1].zip_with(&shift(2)?, |a, b| a + b)?;
    let a3 = p.a[2].zip_with(&shift(3)?, |a, b| a + b)?;
    Potential::new(a0, [a1, a2, a3], p.alphas)
}

/// The gauge shift as a transformation matrix: one parameter function,
/// component j shifted by the unit-coefficient Caputo derivative along
/// axis j.
pub fn gauge_transformation(
    grid: &TensorGrid,
    alphas: &[FracOrder; 4],
) -> Result<Transformation<GridField>> {
    let one = GridField::sample(|_| 1.0, grid)?;
    let mut rows = Vec::with_capacity(4);
    for (axis, &alpha) in alphas.iter().enumerate() {
        let op = FracOperator::new(vec![OperatorTerm::caputo(
            one.clone(),
            Side::Left,
            alpha,
            axis,
        )?])?;
        rows.push(vec![Some(op)]);
    }
    Transformation::new(rows)
}

/// Residual field of the gauge identity
/// `sum_j D_right^(alpha_j, axis j)(E_j)` for the given density, computed
/// through the generic machinery. Right faces carry singular markers; the
/// interior is meaningful.
pub fn em_noether_residual_for_density(
    p: &Potential,
    density: &LagrangianDensity,
) -> Result<GridField> {
    let t = gauge_transformation(p.grid(), &p.alphas)?;
    let report = noether::noether_residual_md(density, &p.field_config(), &t)?;
    Ok(report.residuals()[0].clone())
}

/// [`em_noether_residual_for_density`] with the faithful electromagnetic
/// density.
pub fn em_noether_residual(p: &Potential) -> Result<GridField> {
    em_noether_residual_for_density(p, &em_density(&p.alphas)?)
}
