//! Discrete operators against independent adaptive-quadrature oracles.

mod common;

use fracvar::fracops::{
    self, gamma, FracOrder,
};
use fracvar::grid::{sample_1d, UniformGrid1D};
use fracvar::opalgebra::GridData;

fn unit_grid(n: usize) -> UniformGrid1D {
    UniformGrid1D::new(0.0, 1.0, n).unwrap()
}

fn order(v: f64) -> FracOrder {
    FracOrder::new(v).unwrap()
}

#[test]
fn oracle_gamma_agrees_with_lanczos() {
    for z in [0.3, 0.5, 1.0, 1.5, 2.5, 4.0, 7.3, 12.0, 25.0] {
        let lib = gamma(z).unwrap();
        let oracle = common::gamma(z);
        assert!(
            ((lib - oracle) / oracle).abs() < 1e-12,
            "z = {z}: {lib} vs {oracle}"
        );
    }
    // sqrt(pi) through the reflection identity
    assert!((common::gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
}

#[test]
fn oracle_reproduces_closed_forms() {
    // I^0.5 of 1 at x is x^0.5 / Gamma(1.5)
    let got = common::left_rl_integral(&|_| 1.0, 0.0, 0.5, 1.0);
    assert!((got - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-10, "{got}");
    // cD^0.5 of t^2 at 1 is 2 / Gamma(2.5)
    let got = common::left_caputo(&|t| 2.0 * t, 0.0, 0.5, 1.0);
    assert!((got - 1.504_505_556_127_350_1).abs() < 1e-10, "{got}");
    // cD^1.5 of t^2 at 1 is 2 / Gamma(1.5)
    let got = common::left_caputo_high(&|_| 2.0, 0.0, 1.5, 2, 1.0);
    assert!((got - 2.256_758_334_191_025).abs() < 1e-10, "{got}");
    // D^0.5 of 1 at x is x^(-0.5) / Gamma(0.5)
    let got = common::left_rl_derivative(&|_| 1.0, 0.0, 0.5, 1.0);
    assert!((got - 0.564_189_583_547_756_3).abs() < 1e-7, "{got}");
}

#[test]
fn rl_integral_matches_oracle_on_smooth_data() {
    let f = |t: f64| (1.3 * t + 0.2).sin();
    let g = unit_grid(256);
    let fs = sample_1d(f, &g).unwrap();
    for al in [0.3, 0.5, 0.8] {
        let disc = fracops::left_rl_integral(&fs, order(al)).unwrap();
        for j in [32usize, 128, 256] {
            let x = g.node(j);
            let want = common::left_rl_integral(&f, 0.0, al, x);
            assert!(
                (disc.values()[j] - want).abs() < 2e-5,
                "alpha {al}, node {j}: {} vs {want}",
                disc.values()[j]
            );
        }
        let disc_r = fracops::right_rl_integral(&fs, order(al)).unwrap();
        for j in [0usize, 64, 200] {
            let x = g.node(j);
            let want = common::right_rl_integral(&f, 1.0, al, x);
            assert!(
                (disc_r.values()[j] - want).abs() < 2e-5,
                "right alpha {al}, node {j}"
            );
        }
    }
}

#[test]
fn caputo_matches_oracle_on_smooth_data() {
    let f = |t: f64| t * t * t - 0.5 * t * t + t;
    let fp = |t: f64| 3.0 * t * t - t + 1.0;
    let g = unit_grid(256);
    let fs = sample_1d(f, &g).unwrap();
    for al in [0.3, 0.7] {
        let disc = fracops::left_caputo(&fs, order(al)).unwrap();
        for j in [16usize, 100, 256] {
            let x = g.node(j);
            let want = common::left_caputo(&fp, 0.0, al, x);
            let tol = 4.0 * g.h().powf(2.0 - al);
            assert!(
                (disc.values()[j] - want).abs() < tol,
                "alpha {al}, node {j}: {} vs {want}",
                disc.values()[j]
            );
        }
        let disc_r = fracops::right_caputo(&fs, order(al)).unwrap();
        for j in [0usize, 96, 224] {
            let x = g.node(j);
            let want = common::right_caputo(&fp, 1.0, al, x);
            let tol = 4.0 * g.h().powf(2.0 - al);
            assert!(
                (disc_r.values()[j] - want).abs() < tol,
                "right alpha {al}, node {j}: {} vs {want}",
                disc_r.values()[j]
            );
        }
    }
}

#[test]
fn caputo_high_matches_oracle() {
    let f = |t: f64| t.powi(4) - t;
    let f2 = |t: f64| 12.0 * t * t;
    let g = unit_grid(128);
    let fs = sample_1d(f, &g).unwrap();
    let disc = fracvar::fracops::left_caputo_high(&fs, order(1.5)).unwrap();
    for j in [32usize, 64, 128] {
        let x = g.node(j);
        let want = common::left_caputo_high(&f2, 0.0, 1.5, 2, x);
        assert!(
            (disc.values()[j] - want).abs() < 3.0 * g.h(),
            "node {j}: {} vs {want}",
            disc.values()[j]
        );
    }
}

#[test]
fn rl_derivative_matches_differentiated_integral_oracle() {
    // nonzero left trace makes the decomposition's boundary term count
    let f = |t: f64| 1.0 + t * t;
    let g = unit_grid(256);
    let fs = sample_1d(f, &g).unwrap();
    let al = 0.4;
    let disc = fracops::left_rl_derivative(&fs, order(al)).unwrap();
    for j in [32usize, 128, 240] {
        let x = g.node(j);
        let want = common::left_rl_derivative(&f, 0.0, al, x);
        assert!(
            (disc.values()[j] - want).abs() < 1e-3,
            "node {j}: {} vs {want}",
            disc.values()[j]
        );
    }
}

#[test]
fn operators_are_interval_independent() {
    // same comparisons on a shifted, stretched interval
    let a = 1.0;
    let b = 3.0;
    let g = UniformGrid1D::new(a, b, 256).unwrap();
    let f = |t: f64| (0.8 * t - 0.5).sin() + 0.1 * t * t;
    let fp = |t: f64| 0.8 * (0.8 * t - 0.5).cos() + 0.2 * t;
    let fs = sample_1d(f, &g).unwrap();
    let al = 0.6;
    let disc_i = fracops::left_rl_integral(&fs, order(al)).unwrap();
    let disc_c = fracops::left_caputo(&fs, order(al)).unwrap();
    let disc_rc = fracops::right_caputo(&fs, order(al)).unwrap();
    for j in [40usize, 120, 230] {
        let x = g.node(j);
        let want_i = common::left_rl_integral(&f, a, al, x);
        assert!(
            (disc_i.values()[j] - want_i).abs() < 5e-5,
            "integral node {j}: {} vs {want_i}",
            disc_i.values()[j]
        );
        let want_c = common::left_caputo(&fp, a, al, x);
        assert!(
            (disc_c.values()[j] - want_c).abs() < 1e-3,
            "caputo node {j}: {} vs {want_c}",
            disc_c.values()[j]
        );
        let want_rc = common::right_caputo(&fp, b, al, x);
        assert!(
            (disc_rc.values()[j] - want_rc).abs() < 1e-3,
            "right caputo node {j}: {} vs {want_rc}",
            disc_rc.values()[j]
        );
    }
}

#[test]
fn ibp_sides_match_the_frozen_value() {
    // integral of I_left^0.5(1) over [0, 1] is 4 / (3 sqrt(pi))
    let g = unit_grid(512);
    let one = sample_1d(|_| 1.0, &g).unwrap();
    let lhs = GridData::zip_with(
        &one,
        &fracops::left_rl_integral(&one, order(0.5)).unwrap(),
        |a, b| a * b,
    )
    .unwrap()
    .trapezoid();
    let rhs = GridData::zip_with(
        &one,
        &fracops::right_rl_integral(&one, order(0.5)).unwrap(),
        |a, b| a * b,
    )
    .unwrap()
    .trapezoid();
    let frozen = 0.752_252_778_063_675;
    assert!((lhs - frozen).abs() < 5e-5, "lhs {lhs}");
    assert!((rhs - frozen).abs() < 5e-5, "rhs {rhs}");
    // and by quadrature of the oracle integral
    let oracle = common::adaptive_simpson(
        &|x: f64| common::left_rl_integral(&|_| 1.0, 0.0, 0.5, x),
        0.0,
        1.0,
        1e-10,
    );
    assert!((oracle - frozen).abs() < 1e-8, "oracle {oracle}");
}

#[test]
fn adjoint_of_caputo_term_matches_oracle() {
    // q = 1: the adjoint of cD^0.5 gives D_right^0.5(1) = (1-x)^(-0.5)/Gamma(0.5)
    let g = unit_grid(128);
    let q = sample_1d(|t| 1.0 + 0.5 * t, &g).unwrap();
    let op = fracvar::opalgebra::FracOperator::new(vec![
        fracvar::opalgebra::OperatorTerm::left_caputo(
            sample_1d(|_| 1.0, &g).unwrap(),
            order(0.5),
        )
        .unwrap(),
    ])
    .unwrap();
    let adj = op.adjoint().apply(&q).unwrap();
    // oracle: right RL derivative of q via differentiated right integral
    let qf = |t: f64| 1.0 + 0.5 * t;
    let delta = 1e-5;
    for j in [16usize, 64, 112] {
        let x = g.node(j);
        let hi = common::right_rl_integral(&qf, 1.0, 0.5, x - delta);
        let lo = common::right_rl_integral(&qf, 1.0, 0.5, x + delta);
        let want = (hi - lo) / (2.0 * delta);
        assert!(
            (adj.values()[j] - want).abs() < 2e-3,
            "node {j}: {} vs {want}",
            adj.values()[j]
        );
    }
}
