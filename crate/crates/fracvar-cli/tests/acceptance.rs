#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Acceptance suite: one test per exit criterion, each printing a single
//! pass/fail line. Run with `cargo test -p fracvar-cli --test acceptance`
//! (add `-- --nocapture` to see the lines for passing criteria too).

use std::time::{Duration, Instant};

use fracvar::emfield::{
    em_density, em_density_perturbed, em_fields, em_lagrangian, em_noether_residual,
    em_noether_residual_for_density, gauge_transform, Potential,
};
use fracvar::fracops::{self, FracOrder, OpKind};
use fracvar::grid::{sample_1d, GridField, GridFn1D, TensorGrid, UniformGrid1D};
use fracvar::noether::{
    classical_identity_check, noether_residual, noether_residual_md, Transformation,
};
use fracvar::opalgebra::{duality_residual, FracOperator, GridData, OperatorTerm};
use fracvar::samples::{boundary_vanishing_1d, smooth_1d, smooth_field};
use fracvar::variational::{FieldConfig, Lagrangian1D, LagrangianDensity, Trajectory};
use fracvar_cli::{render_report, run_scenario, Scenario, ScenarioConfig};

fn order(v: f64) -> FracOrder {
    FracOrder::new(v).unwrap()
}

fn unit_grid(n: usize) -> UniformGrid1D {
    UniformGrid1D::new(0.0, 1.0, n).unwrap()
}

struct Criterion {
    number: usize,
    name: &'static str,
    budget: Duration,
    started: Instant,
}

impl Criterion {
    fn start(number: usize, name: &'static str, budget_secs: u64) -> Self {
        Self {
            number,
            name,
            budget: Duration::from_secs(budget_secs),
            started: Instant::now(),
        }
    }

    fn finish(self, pass: bool, detail: String) {
        let elapsed = self.started.elapsed();
        let status = if pass && elapsed <= self.budget {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "criterion {:2} ({}): {status} [{:.2?}] {detail}",
            self.number, self.name, elapsed
        );
        assert!(pass, "criterion {} failed: {detail}", self.number);
        assert!(
            elapsed <= self.budget,
            "criterion {} exceeded its {:?} budget ({:?})",
            self.number,
            self.budget,
            elapsed
        );
    }
}

#[test]
fn criterion_01_operator_correctness() {
    let c = Criterion::start(1, "operator correctness", 1);
    let closed = |t: f64| 2.0 * t.powf(1.5) / 1.329_340_388_179_137;
    let mut errs = Vec::new();
    let mut value_at_one = 0.0;
    for n in [64usize, 256] {
        let g = unit_grid(n);
        let f = sample_1d(|t| t * t, &g).unwrap();
        let d = fracops::left_caputo(&f, order(0.5)).unwrap();
        let err = g
            .nodes()
            .enumerate()
            .map(|(j, t)| (d.values()[j] - closed(t)).abs())
            .fold(0.0f64, f64::max);
        errs.push(err);
        value_at_one = *d.values().last().unwrap();
    }
    let empirical_order = (errs[0] / errs[1]).ln() / 4.0f64.ln();
    let value_ok = (value_at_one - 1.504_505_556_1).abs() <= 1e-3;
    let order_ok = empirical_order >= 1.4;
    c.finish(
        value_ok && order_ok,
        format!(
            "value(1) = {value_at_one:.10} (want 1.5045055561), order {empirical_order:.3} (need >= 1.4)"
        ),
    );
}

#[test]
fn criterion_02_classical_limits() {
    let c = Criterion::start(2, "classical limits at order one", 1);
    let g = unit_grid(128);
    let f = sample_1d(|t| (1.3 * t + 0.2).sin(), &g).unwrap();
    let deriv = |t: f64| 1.3 * (1.3 * t + 0.2).cos();
    let one = order(1.0);
    let mut worst = 0.0f64;
    for d in [
        fracops::left_caputo(&f, one).unwrap(),
        fracops::left_rl_derivative(&f, one).unwrap(),
    ] {
        for (j, t) in g.nodes().enumerate() {
            worst = worst.max((d.values()[j] - deriv(t)).abs());
        }
    }
    for d in [
        fracops::right_caputo(&f, one).unwrap(),
        fracops::right_rl_derivative(&f, one).unwrap(),
    ] {
        for (j, t) in g.nodes().enumerate() {
            worst = worst.max((d.values()[j] + deriv(t)).abs());
        }
    }
    c.finish(
        worst <= 1e-3,
        format!("max-norm stencil error {worst:.3e} (need <= 1e-3)"),
    );
}

#[test]
fn criterion_03_integration_by_parts() {
    let c = Criterion::start(3, "integration by parts", 5);
    let mut worst_ratio = f64::INFINITY;
    let mut detail = String::new();
    for alpha in [0.25, 0.5, 0.75] {
        let mut prev: Option<(f64, f64)> = None;
        for n in [64usize, 128, 256, 512] {
            let g = unit_grid(n);
            let f = boundary_vanishing_1d(&g, 42).unwrap();
            let k = smooth_1d(&g, 43).unwrap().map(|v| v + 1.5);
            let ri = fracvar::opalgebra::ibp_integral_check(&f, &k, order(alpha)).unwrap();
            let rc = fracvar::opalgebra::caputo_ibp_check(&f, &k, order(alpha)).unwrap();
            if let Some((pi, pc)) = prev {
                worst_ratio = worst_ratio.min(pi / ri).min(pc / rc);
            }
            prev = Some((ri, rc));
        }
        let (ri, rc) = prev.unwrap();
        detail += &format!("a={alpha}: I {ri:.1e} C {rc:.1e}; ");
    }
    c.finish(
        worst_ratio >= 1.5,
        format!("worst per-doubling ratio {worst_ratio:.2} (need >= 1.5); finals: {detail}"),
    );
}

fn duality_operator(
    grid: &UniformGrid1D,
    kind: usize,
    low: f64,
    high: f64,
) -> FracOperator<GridFn1D> {
    let a0 = sample_1d(|t| 0.5 + 0.3 * (2.0 * t).sin(), grid).unwrap();
    let a1 = sample_1d(|t| 1.0 + 0.25 * t * t, grid).unwrap();
    let a2 = sample_1d(|t| 0.75 + 0.5 * t, grid).unwrap();
    let mut terms = vec![OperatorTerm::identity(a0)];
    match kind {
        1 => terms.push(OperatorTerm::left_caputo(a1, order(low)).unwrap()),
        2 => terms.push(OperatorTerm::right_caputo(a1, order(low)).unwrap()),
        3 => {
            terms.push(OperatorTerm::left_caputo(a1, order(low)).unwrap());
            terms.push(OperatorTerm::left_caputo(a2, order(high)).unwrap());
        }
        4 => {
            terms.push(OperatorTerm::right_caputo(a1, order(low)).unwrap());
            terms.push(OperatorTerm::right_caputo(a2, order(high)).unwrap());
        }
        _ => unreachable!(),
    }
    FracOperator::new(terms).unwrap()
}

#[test]
fn criterion_04_adjoint_duality() {
    let c = Criterion::start(4, "adjoint duality for kinds I-IV", 10);
    let mut pass = true;
    let mut detail = String::new();
    for kind in 1..=4usize {
        let mut prev: Option<f64> = None;
        let mut final_residual = 0.0;
        for n in [64usize, 128, 256] {
            let g = unit_grid(n);
            let op = duality_operator(&g, kind, 0.3, 1.3);
            let p = boundary_vanishing_1d(&g, 42).unwrap();
            let q = smooth_1d(&g, 43).unwrap().map(|v| v + 1.5);
            let r = duality_residual(&op, &p, &q).unwrap();
            if let Some(pr) = prev {
                if pr / r < 1.5 {
                    pass = false;
                }
            }
            prev = Some(r);
            final_residual = r;
        }
        if final_residual > 1e-3 {
            pass = false;
        }
        detail += &format!("kind {kind}: {final_residual:.2e}; ");
    }
    c.finish(
        pass,
        format!("residuals at n=256 (need <= 1e-3, ratios >= 1.5): {detail}"),
    );
}

fn velocity_difference_lagrangian(alpha: FracOrder) -> Lagrangian1D {
    Lagrangian1D::new(
        vec![alpha, alpha],
        |_, _, v| 0.5 * (v[0] - v[1]) * (v[0] - v[1]),
        |_, _, _, out| out.fill(0.0),
        |_, _, v, out| {
            let d = v[0] - v[1];
            out[0] = d;
            out[1] = -d;
        },
    )
    .unwrap()
}

fn single_velocity_lagrangian(alpha: FracOrder) -> Lagrangian1D {
    Lagrangian1D::new(
        vec![alpha, alpha],
        |_, _, v| 0.5 * v[0] * v[0],
        |_, _, _, out| out.fill(0.0),
        |_, _, v, out| {
            out[0] = v[0];
            out[1] = 0.0;
        },
    )
    .unwrap()
}

fn same_shift(grid: &UniformGrid1D) -> Transformation<GridFn1D> {
    let one = sample_1d(|_| 1.0, grid).unwrap();
    let id = || FracOperator::multiplication(one.clone()).unwrap();
    Transformation::new(vec![vec![Some(id())], vec![Some(id())]]).unwrap()
}

#[test]
fn criterion_05_second_noether_1d() {
    let c = Criterion::start(5, "second Noether identities, 1D", 5);
    let mut pass = true;
    let mut worst_invariant = 0.0f64;
    let mut least_control = f64::INFINITY;
    for alpha in [0.3, 0.5, 0.9] {
        let invariant = velocity_difference_lagrangian(order(alpha));
        for n in [32usize, 64, 128, 256] {
            let g = unit_grid(n);
            let t = same_shift(&g);
            for seed in 0..5u64 {
                let x = Trajectory::new(vec![
                    smooth_1d(&g, 100 + 10 * seed).unwrap(),
                    smooth_1d(&g, 600 + 10 * seed).unwrap(),
                ])
                .unwrap();
                let worst = noether_residual(&invariant, &x, &t).unwrap().worst();
                worst_invariant = worst_invariant.max(worst);
                if !(worst <= 1e-10) {
                    pass = false;
                }
            }
        }
        // negative control stays away from zero under refinement
        let control = single_velocity_lagrangian(order(alpha));
        for n in [128usize, 256] {
            let g = unit_grid(n);
            let t = same_shift(&g);
            for seed in 0..5u64 {
                let x = Trajectory::new(vec![
                    smooth_1d(&g, 100 + 10 * seed).unwrap(),
                    smooth_1d(&g, 600 + 10 * seed).unwrap(),
                ])
                .unwrap();
                let worst = noether_residual(&control, &x, &t).unwrap().worst();
                least_control = least_control.min(worst);
                if !(worst >= 1e-2) {
                    pass = false;
                }
            }
        }
    }
    c.finish(
        pass,
        format!(
            "invariant residual max {worst_invariant:.2e} (need <= 1e-10), control min {least_control:.2e} (need >= 1e-2)"
        ),
    );
}

fn gradient_difference_density(alpha: FracOrder) -> LagrangianDensity {
    LagrangianDensity::new(
        2,
        vec![alpha, alpha],
        |_, _, g| {
            let d0 = g[0] - g[2];
            let d1 = g[1] - g[3];
            0.5 * (d0 * d0 + d1 * d1)
        },
        |_, _, _, out| out.fill(0.0),
        |_, _, g, out| {
            let d0 = g[0] - g[2];
            let d1 = g[1] - g[3];
            out[0] = d0;
            out[1] = d1;
            out[2] = -d0;
            out[3] = -d1;
        },
    )
    .unwrap()
}

fn gradient_control_density(alpha: FracOrder) -> LagrangianDensity {
    LagrangianDensity::new(
        2,
        vec![alpha, alpha],
        |_, _, g| 0.5 * (g[0] * g[0] + g[1] * g[1]),
        |_, _, _, out| out.fill(0.0),
        |_, _, g, out| {
            out[0] = g[0];
            out[1] = g[1];
            out[2] = 0.0;
            out[3] = 0.0;
        },
    )
    .unwrap()
}

fn same_shift_md(grid: &TensorGrid) -> Transformation<GridField> {
    let one = GridField::sample(|_| 1.0, grid).unwrap();
    let id = || FracOperator::multiplication(one.clone()).unwrap();
    Transformation::new(vec![vec![Some(id())], vec![Some(id())]]).unwrap()
}

#[test]
fn criterion_06_second_noether_md() {
    let c = Criterion::start(6, "second Noether identities, 2 axes", 30);
    let grid = TensorGrid::cube(0.0, 1.0, 32, 2).unwrap();
    let t = same_shift_md(&grid);
    let mut pass = true;
    let mut worst_invariant = 0.0f64;
    let mut least_control = f64::INFINITY;
    for alpha in [0.3, 0.5, 0.9] {
        let invariant = gradient_difference_density(order(alpha));
        let control = gradient_control_density(order(alpha));
        for seed in 0..5u64 {
            let u = FieldConfig::new(vec![
                smooth_field(&grid, 100 + 10 * seed).unwrap(),
                smooth_field(&grid, 600 + 10 * seed).unwrap(),
            ])
            .unwrap();
            let worst = noether_residual_md(&invariant, &u, &t).unwrap().worst();
            worst_invariant = worst_invariant.max(worst);
            if !(worst <= 1e-10) {
                pass = false;
            }
            let cworst = noether_residual_md(&control, &u, &t).unwrap().worst();
            least_control = least_control.min(cworst);
            if !(cworst >= 1e-2) {
                pass = false;
            }
        }
    }
    c.finish(
        pass,
        format!(
            "invariant residual max {worst_invariant:.2e} (need <= 1e-10), control min {least_control:.2e} (need >= 1e-2) on 32x32"
        ),
    );
}

#[test]
fn criterion_07_em_gauge_invariance() {
    let c = Criterion::start(7, "electromagnetic gauge invariance", 120);
    let grid = TensorGrid::cube(0.0, 1.0, 8, 4).unwrap();
    let alphas = [order(0.6), order(0.45), order(0.7), order(0.55)];
    let p = Potential::new(
        smooth_field(&grid, 100).unwrap(),
        [
            smooth_field(&grid, 101).unwrap(),
            smooth_field(&grid, 102).unwrap(),
            smooth_field(&grid, 103).unwrap(),
        ],
        alphas,
    )
    .unwrap();
    let base = em_fields(&p).unwrap();
    let s0 = em_lagrangian(&p).unwrap();
    let max_abs = |g: &GridField| g.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst_units = 0.0f64;
    let mut worst_action = 0.0f64;
    for seed in 0..10u64 {
        let f = smooth_field(&grid, 1000 + seed).unwrap();
        let q = gauge_transform(&p, &f).unwrap();
        let after = em_fields(&q).unwrap();
        // one rounding unit = epsilon times the largest magnitude entering
        // the comparison: the fields themselves and the two-derivative
        // compositions of the gauge function
        let mut scale = 1.0f64;
        for k in 0..3 {
            scale = scale
                .max(max_abs(&base.e[k]))
                .max(max_abs(&after.e[k]))
                .max(max_abs(&base.h[k]))
                .max(max_abs(&after.h[k]));
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let di = fracops::partial_frac(&f, i, OpKind::LeftCaputo, alphas[i]).unwrap();
                    let dji =
                        fracops::partial_frac(&di, j, OpKind::LeftCaputo, alphas[j]).unwrap();
                    scale = scale.max(max_abs(&dji));
                }
            }
        }
        let unit = f64::EPSILON * scale;
        for k in 0..3 {
            for (a, b) in base.e[k].values().iter().zip(after.e[k].values()) {
                worst_units = worst_units.max((a - b).abs() / unit);
            }
            for (a, b) in base.h[k].values().iter().zip(after.h[k].values()) {
                worst_units = worst_units.max((a - b).abs() / unit);
            }
        }
        let s1 = em_lagrangian(&q).unwrap();
        worst_action = worst_action.max((s1 - s0).abs() / (1.0 + s0.abs()));
    }
    c.finish(
        worst_units <= 8.0 && worst_action <= 1e-12,
        format!(
            "field change {worst_units:.2} rounding units (need <= 8), action change {worst_action:.2e} (need <= 1e-12)"
        ),
    );
}

#[test]
fn criterion_08_em_noether_identity() {
    let c = Criterion::start(8, "electromagnetic Noether identity", 300);
    let alphas = [order(0.6), order(0.45), order(0.7), order(0.55)];
    let mut faithful = Vec::new();
    let mut perturbed = Vec::new();
    for n in [6usize, 12] {
        let grid = TensorGrid::cube(0.0, 1.0, n, 4).unwrap();
        let p = Potential::new(
            smooth_field(&grid, 100).unwrap(),
            [
                smooth_field(&grid, 101).unwrap(),
                smooth_field(&grid, 102).unwrap(),
                smooth_field(&grid, 103).unwrap(),
            ],
            alphas,
        )
        .unwrap();
        faithful.push(em_noether_residual(&p).unwrap().interior_max_abs());
        let control = em_density_perturbed(&alphas, 0.5).unwrap();
        perturbed.push(
            em_noether_residual_for_density(&p, &control)
                .unwrap()
                .interior_max_abs(),
        );
        // context for the magnitudes: the Lagrange expressions themselves
        let els = fracvar::variational::euler_lagrange_md(
            &em_density(&alphas).unwrap(),
            &p.field_config(),
        )
        .unwrap();
        let el_scale = els.iter().map(|e| e.interior_max_abs()).fold(0.0f64, f64::max);
        println!(
            "  criterion 8 data: n={n} residual={:.3e} (Lagrange-expression scale {el_scale:.3e}), perturbed={:.3e}",
            faithful.last().unwrap(),
            perturbed.last().unwrap()
        );
    }
    let ratio = faithful[0] / faithful[1];
    let control_fails_decrease = !(perturbed[0] / perturbed[1] >= 1.3);
    let control_bounded = perturbed[1] >= 1e-9;
    // The identity cancels exactly at the discrete level: the density's
    // gradient partials are antisymmetric and distinct-axis stencils
    // commute to rounding, so the residual sits at the rounding floor on
    // both grids and no decreasing trend exists. The refinement-ratio
    // clause is asserted anyway and fails; the printed measurements show
    // the identity holding to far higher accuracy than the ratio asks.
    c.finish(
        ratio >= 1.3 && control_fails_decrease && control_bounded,
        format!(
            "residuals {:.3e} -> {:.3e} (ratio {ratio:.2}, need >= 1.3); perturbed control fails decrease: {control_fails_decrease}, bounded away: {control_bounded}",
            faithful[0], faithful[1]
        ),
    );
}

#[test]
fn criterion_09_classical_second_noether_reduction() {
    let c = Criterion::start(9, "classical second-Noether reduction", 1);
    let one = order(1.0);
    let g = unit_grid(128);
    let lag = velocity_difference_lagrangian(one);
    let x = Trajectory::new(vec![
        smooth_1d(&g, 100).unwrap(),
        smooth_1d(&g, 600).unwrap(),
    ])
    .unwrap();
    let b0 = sample_1d(|t| t, &g).unwrap();
    let b1 = sample_1d(|t| 1.0 + t * t, &g).unwrap();
    let op = || {
        FracOperator::new(vec![
            OperatorTerm::identity(b0.clone()),
            OperatorTerm::left_caputo(b1.clone(), one).unwrap(),
        ])
        .unwrap()
    };
    let t = Transformation::new(vec![vec![Some(op())], vec![Some(op())]]).unwrap();
    let frac = noether_residual(&lag, &x, &t).unwrap().worst();
    let b = vec![vec![b0.clone(), b1.clone()], vec![b0, b1]];
    let classical = classical_identity_check(&lag, &x, &b).unwrap();
    let gap = (frac - classical).abs();

    // non-invariant pair: both routes agree on a residual bounded away from 0
    let control = single_velocity_lagrangian(one);
    let ts = same_shift(&g);
    let frac_ctl = noether_residual(&control, &x, &ts).unwrap().worst();
    let ones = sample_1d(|_| 1.0, &g).unwrap();
    let b_ctl = vec![vec![ones.clone()], vec![ones]];
    let classical_ctl = classical_identity_check(&control, &x, &b_ctl).unwrap();
    let ctl_gap = (frac_ctl - classical_ctl).abs();

    let h2 = g.h() * g.h();
    c.finish(
        gap <= 2.0 * h2 && ctl_gap <= 2.0 * h2 * classical_ctl.max(1.0) && classical_ctl > 1e-2,
        format!(
            "invariant-case gap {gap:.2e}, control-case gap {ctl_gap:.2e} (O(h^2) = {h2:.2e}), control residual {classical_ctl:.2e}"
        ),
    );
}

#[test]
fn criterion_10_deterministic_reports() {
    let c = Criterion::start(10, "byte-identical reruns", 60);
    let mut all_equal = true;
    let mut checked = 0;
    for scenario in [Scenario::Noether1d, Scenario::Convergence, Scenario::EmGauge] {
        let mut cfg = ScenarioConfig::new(scenario);
        cfg.seed = 12345;
        if scenario == Scenario::Noether1d {
            cfg.n = 32;
            cfg.levels = 1;
        }
        if scenario == Scenario::EmGauge {
            cfg.n = 4;
        }
        let rows_a = run_scenario(&cfg).unwrap();
        let rows_b = run_scenario(&cfg).unwrap();
        let meta = vec![format!("{}: verifies {}", scenario.name(), scenario.claim())];
        let text_a = render_report(&rows_a, &meta);
        let text_b = render_report(&rows_b, &meta);
        if text_a.as_bytes() != text_b.as_bytes() {
            all_equal = false;
        }

        let dir = tempfile::tempdir().unwrap();
        let pa = dir.path().join("a.csv");
        let pb = dir.path().join("b.csv");
        fracvar_cli::write_report(&rows_a, &meta, &pa).unwrap();
        fracvar_cli::write_report(&rows_b, &meta, &pb).unwrap();
        if std::fs::read(&pa).unwrap() != std::fs::read(&pb).unwrap() {
            all_equal = false;
        }
        checked += 1;
    }
    c.finish(
        all_equal,
        format!("{checked} scenarios re-run with identical configs produce identical bytes"),
    );
}
