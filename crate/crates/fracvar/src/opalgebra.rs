//! Linear fractional differential operators and their formal adjoints.
//!
//! An operator is a sum of terms `coeff(x) * cD^mu` (left or right Caputo,
//! per axis) plus an optional multiplication term. Its formal adjoint swaps
//! the side and replaces Caputo with Riemann-Liouville derivatives, moving
//! the coefficient inside:
//!
//!   integral q * a cD_left^mu (p) = integral p * D_right^mu (a q) + boundary terms,
//!
//! so duality holds whenever `p` is chosen to kill the boundary bracket.
//! `duality_residual` and the two integration-by-parts checks measure how
//! well the discrete operators reproduce these continuum identities.

use crate::error::{Error, Result};
use crate::fracops::{self, FracOrder, OpKind, Side};
use crate::grid::{GridFn1D, GridField};

/// Sampled data a fractional operator can act on: 1D grid functions and
/// tensor-grid fields.
pub trait GridData: Clone {
    fn rank(&self) -> usize;
    fn same_domain(&self, other: &Self) -> bool;
    fn values(&self) -> &[f64];
    /// Element-wise combination; domains must match.
    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self>;
    fn map(&self, f: impl Fn(f64) -> f64) -> Self;
    /// Caputo derivative along `axis` (orders above 1 take the higher-order
    /// route; only meaningful on 1D data).
    fn caputo_along(&self, side: Side, order: FracOrder, axis: usize) -> Result<Self>;
    /// Riemann-Liouville derivative along `axis`.
    fn rl_derivative_along(&self, side: Side, order: FracOrder, axis: usize) -> Result<Self>;
    /// Trapezoidal quadrature over the domain.
    fn integrate(&self) -> f64;
    /// Trapezoidal quadrature skipping singular-marked boundary cells.
    fn integrate_skip_singular(&self) -> f64;
    /// Max |value| over strictly interior nodes.
    fn interior_max_abs(&self) -> f64;
}

impl GridData for GridFn1D {
    fn rank(&self) -> usize {
        1
    }

    fn same_domain(&self, other: &Self) -> bool {
        self.grid() == other.grid()
    }

    fn values(&self) -> &[f64] {
        GridFn1D::values(self)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_domain(other) {
            return Err(Error::DomainMismatch);
        }
        let vals = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(GridFn1D::from_values_raw(self.grid(), vals))
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFn1D::from_values_raw(self.grid(), self.values().iter().map(|&v| f(v)).collect())
    }

    fn caputo_along(&self, side: Side, order: FracOrder, axis: usize) -> Result<Self> {
        if axis != 0 {
            return Err(Error::AxisOutOfRange { axis, rank: 1 });
        }
        fracops::apply_1d_tolerant(self, OpKind::caputo(side), order, 0)
    }

    fn rl_derivative_along(&self, side: Side, order: FracOrder, axis: usize) -> Result<Self> {
        if axis != 0 {
            return Err(Error::AxisOutOfRange { axis, rank: 1 });
        }
        fracops::apply_1d_tolerant(self, OpKind::rl_derivative(side), order, 0)
    }

    fn integrate(&self) -> f64 {
        self.trapezoid()
    }

    fn integrate_skip_singular(&self) -> f64 {
        self.trapezoid_skip_singular()
    }

    fn interior_max_abs(&self) -> f64 {
        GridFn1D::interior_max_abs(self)
    }
}

impl GridData for GridField {
    fn rank(&self) -> usize {
        self.grid().rank()
    }

    fn same_domain(&self, other: &Self) -> bool {
        self.grid() == other.grid()
    }

    fn values(&self) -> &[f64] {
        GridField::values(self)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_domain(other) {
            return Err(Error::DomainMismatch);
        }
        let vals = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(GridField::from_values_raw(self.grid(), vals))
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridField::from_values_raw(self.grid(), self.values().iter().map(|&v| f(v)).collect())
    }

    fn caputo_along(&self, side: Side, order: FracOrder, axis: usize) -> Result<Self> {
        fracops::partial_frac(self, axis, OpKind::caputo(side), order)
    }

    fn rl_derivative_along(&self, side: Side, order: FracOrder, axis: usize) -> Result<Self> {
        fracops::partial_frac(self, axis, OpKind::rl_derivative(side), order)
    }

    fn integrate(&self) -> f64 {
        self.trapezoid()
    }

    fn integrate_skip_singular(&self) -> f64 {
        self.trapezoid_skip_singular()
    }

    fn interior_max_abs(&self) -> f64 {
        GridField::interior_max_abs(self)
    }
}

/// One summand of a linear fractional differential operator.
#[derive(Debug, Clone)]
pub struct OperatorTerm<G> {
    coeff: G,
    part: TermPart,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TermPart {
    Identity,
    Caputo {
        side: Side,
        order: FracOrder,
        axis: usize,
    },
}

impl<G: GridData> OperatorTerm<G> {
    /// Multiplication term `p -> coeff * p`.
    pub fn identity(coeff: G) -> Self {
        Self {
            coeff,
            part: TermPart::Identity,
        }
    }

    /// Derivative term `p -> coeff * cD^order p` along `axis`.
    pub fn caputo(coeff: G, side: Side, order: FracOrder, axis: usize) -> Result<Self> {
        if order.value() <= 0.0 {
            return Err(Error::OrderRange {
                mu: order.value(),
                range: "(0, inf)",
                operator: "operator term",
            });
        }
        Ok(Self {
            coeff,
            part: TermPart::Caputo { side, order, axis },
        })
    }

    pub fn left_caputo(coeff: G, order: FracOrder) -> Result<Self> {
        Self::caputo(coeff, Side::Left, order, 0)
    }

    pub fn right_caputo(coeff: G, order: FracOrder) -> Result<Self> {
        Self::caputo(coeff, Side::Right, order, 0)
    }
}

/// Structural classification of an operator (advisory metadata; kinds may
/// be freely combined).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKindTag {
    /// Identity plus left-Caputo terms, orders in (0, 1].
    KindI,
    /// Identity plus right-Caputo terms, orders in (0, 1].
    KindII,
    /// Left-Caputo terms with at least one order above 1.
    KindIII,
    /// Right-Caputo terms with at least one order above 1.
    KindIV,
    Mixed,
}

/// A linear fractional differential operator: sum of coefficient-weighted
/// identity and Caputo-derivative terms on a shared domain.
#[derive(Debug, Clone)]
pub struct FracOperator<G> {
    terms: Vec<OperatorTerm<G>>,
    tag: OperatorKindTag,
}

impl<G: GridData> FracOperator<G> {
    pub fn new(terms: Vec<OperatorTerm<G>>) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyOperator)?;
        let rank = first.coeff.rank();
        for term in &terms {
            if !term.coeff.same_domain(&first.coeff) {
                return Err(Error::DomainMismatch);
            }
            if term.coeff.values().iter().any(|v| !v.is_finite()) {
                return Err(Error::ShapeMismatch {
                    context: "operator coefficient has non-finite samples".into(),
                });
            }
            if let TermPart::Caputo { axis, order, .. } = term.part {
                if axis >= rank {
                    return Err(Error::AxisOutOfRange { axis, rank });
                }
                if rank > 1 && order.value() > 1.0 {
                    return Err(Error::OrderRange {
                        mu: order.value(),
                        range: "(0, 1] on multi-dimensional domains",
                        operator: "operator term",
                    });
                }
            }
        }
        let tag = infer_tag(&terms);
        Ok(Self { terms, tag })
    }

    /// Single multiplication term.
    pub fn multiplication(coeff: G) -> Result<Self> {
        Self::new(vec![OperatorTerm::identity(coeff)])
    }

    pub fn kind_tag(&self) -> OperatorKindTag {
        self.tag
    }

    pub fn terms(&self) -> &[OperatorTerm<G>] {
        &self.terms
    }

    /// Evaluate `T(p)`.
    pub fn apply(&self, p: &G) -> Result<G> {
        if !self.terms[0].coeff.same_domain(p) {
            return Err(Error::DomainMismatch);
        }
        let mut acc: Option<G> = None;
        for term in &self.terms {
            let piece = match term.part {
                TermPart::Identity => term.coeff.zip_with(p, |a, b| a * b)?,
                TermPart::Caputo { side, order, axis } => {
                    let d = p.caputo_along(side, order, axis)?;
                    term.coeff.zip_with(&d, |a, b| a * b)?
                }
            };
            acc = Some(match acc {
                None => piece,
                Some(sum) => sum.zip_with(&piece, |a, b| a + b)?,
            });
        }
        Ok(acc.expect("operator has at least one term"))
    }

    /// Formal adjoint: identity coefficients stay multiplications, each
    /// left-Caputo term of order mu becomes a right Riemann-Liouville
    /// derivative of order mu applied to (coeff * q), and symmetrically.
    pub fn adjoint(&self) -> AdjointOperator<G> {
        let mut identity: Option<G> = None;
        let mut terms = Vec::new();
        for term in &self.terms {
            match term.part {
                TermPart::Identity => {
                    identity = Some(match identity {
                        None => term.coeff.clone(),
                        Some(sum) => sum
                            .zip_with(&term.coeff, |a, b| a + b)
                            .expect("operator terms share a domain"),
                    });
                }
                TermPart::Caputo { side, order, axis } => {
                    let rl_side = match side {
                        Side::Left => Side::Right,
                        Side::Right => Side::Left,
                    };
                    terms.push(AdjointTerm {
                        coeff: term.coeff.clone(),
                        side: rl_side,
                        order,
                        axis,
                    });
                }
            }
        }
        AdjointOperator { identity, terms }
    }
}

fn infer_tag<G: GridData>(terms: &[OperatorTerm<G>]) -> OperatorKindTag {
    let mut left = false;
    let mut right = false;
    let mut high = false;
    for t in terms {
        if let TermPart::Caputo { side, order, .. } = t.part {
            match side {
                Side::Left => left = true,
                Side::Right => right = true,
            }
            if order.value() > 1.0 {
                high = true;
            }
        }
    }
    match (left, right) {
        (true, true) => OperatorKindTag::Mixed,
        (true, false) => {
            if high {
                OperatorKindTag::KindIII
            } else {
                OperatorKindTag::KindI
            }
        }
        (false, true) => {
            if high {
                OperatorKindTag::KindIV
            } else {
                OperatorKindTag::KindII
            }
        }
        (false, false) => OperatorKindTag::KindI,
    }
}

/// One Riemann-Liouville term of a formal adjoint: `q -> D^order (coeff * q)`.
#[derive(Debug, Clone)]
pub struct AdjointTerm<G> {
    coeff: G,
    side: Side,
    order: FracOrder,
    axis: usize,
}

impl<G> AdjointTerm<G> {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn axis(&self) -> usize {
        self.axis
    }
}

/// Formal adjoint of a [`FracOperator`].
#[derive(Debug, Clone)]
pub struct AdjointOperator<G> {
    identity: Option<G>,
    terms: Vec<AdjointTerm<G>>,
}

impl<G: GridData> AdjointOperator<G> {
    pub fn terms(&self) -> &[AdjointTerm<G>] {
        &self.terms
    }

    /// Evaluate `T~(q)`.
    pub fn apply(&self, q: &G) -> Result<G> {
        let mut acc: Option<G> = self
            .identity
            .as_ref()
            .map(|c| c.zip_with(q, |a, b| a * b))
            .transpose()?;
        for term in &self.terms {
            let inner = term.coeff.zip_with(q, |a, b| a * b)?;
            let piece = inner.rl_derivative_along(term.side, term.order, term.axis)?;
            acc = Some(match acc {
                None => piece,
                Some(sum) => sum.zip_with(&piece, |a, b| a + b)?,
            });
        }
        acc.ok_or(Error::EmptyOperator)
    }
}

/// Scalar residual of the adjoint duality: with boundary-vanishing `p`,
/// `integral q T(p) - integral p T~(q)` tends to zero under refinement.
pub fn duality_residual<G: GridData>(op: &FracOperator<G>, p: &G, q: &G) -> Result<f64> {
    let lhs = q.zip_with(&op.apply(p)?, |a, b| a * b)?.integrate_skip_singular();
    let adj = op.adjoint();
    let rhs = p.zip_with(&adj.apply(q)?, |a, b| a * b)?.integrate_skip_singular();
    Ok((lhs - rhs).abs())
}

/// Residual of the fractional-integral integration-by-parts identity
/// `integral g I_left^alpha f = integral f I_right^alpha g`.
pub fn ibp_integral_check(f: &GridFn1D, g: &GridFn1D, alpha: FracOrder) -> Result<f64> {
    let lhs = GridData::zip_with(g, &fracops::left_rl_integral(f, alpha)?, |a, b| a * b)?.trapezoid();
    let rhs = GridData::zip_with(f, &fracops::right_rl_integral(g, alpha)?, |a, b| a * b)?.trapezoid();
    Ok((lhs - rhs).abs())
}

/// Residual of the Caputo integration-by-parts identity
/// `integral g cD_left^alpha f = [f I_right^(1-alpha) g] + integral f D_right^alpha g`,
/// with the boundary bracket evaluated at both endpoints.
pub fn caputo_ibp_check(f: &GridFn1D, g: &GridFn1D, alpha: FracOrder) -> Result<f64> {
    let al = alpha.value();
    if !(al > 0.0 && al <= 1.0) {
        return Err(Error::OrderRange {
            mu: al,
            range: "(0, 1]",
            operator: "Caputo integration by parts",
        });
    }
    let lhs = GridData::zip_with(g, &fracops::left_caputo(f, alpha)?, |a, b| a * b)?.trapezoid();
    let ig = fracops::right_rl_integral(g, FracOrder::new(1.0 - al)?)?;
    let n = f.grid().n();
    let boundary = f.values()[n] * ig.values()[n] - f.values()[0] * ig.values()[0];
    let rhs = GridData::zip_with(f, &fracops::right_rl_derivative(g, alpha)?, |a, b| a * b)?
        .trapezoid_skip_singular();
    Ok((lhs - boundary - rhs).abs())
}
