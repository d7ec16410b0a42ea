//! Seeded families of smooth test functions.
//!
//! Verification scenarios need "arbitrary" trajectories, fields and
//! parameter functions. These generators draw low-degree polynomials plus a
//! Gaussian bump with coefficients from a counter-based RNG, so a seed
//! pins the whole family and reruns are bit-identical.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{GridField, GridFn1D, TensorGrid, UniformGrid1D};

/// Coefficients of one smooth scalar profile on [0, 1]:
/// cubic polynomial plus a Gaussian bump.
#[derive(Debug, Clone)]
struct Profile {
    poly: [f64; 4],
    amp: f64,
    center: f64,
    width: f64,
}

impl Profile {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        Self {
            poly: [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ],
            amp: rng.random_range(-1.0..1.0),
            center: rng.random_range(0.25..0.75),
            width: rng.random_range(0.15..0.35),
        }
    }

    /// Evaluate at s in [0, 1].
    fn eval(&self, s: f64) -> f64 {
        let p = self.poly[0] + s * (self.poly[1] + s * (self.poly[2] + s * self.poly[3]));
        let z = (s - self.center) / self.width;
        p + self.amp * (-0.5 * z * z).exp()
    }
}

fn unit_coord(grid: &UniformGrid1D, t: f64) -> f64 {
    (t - grid.a()) / (grid.b() - grid.a())
}

/// Smooth seeded function on a 1D grid.
pub fn smooth_1d(grid: &UniformGrid1D, seed: u64) -> Result<GridFn1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = Profile::draw(&mut rng);
    GridFn1D::sample(|t| profile.eval(unit_coord(grid, t)), grid)
}

/// Smooth seeded function vanishing together with its first derivative at
/// both endpoints; suitable as a parameter function for operators with up
/// to two derivative traces.
pub fn boundary_vanishing_1d(grid: &UniformGrid1D, seed: u64) -> Result<GridFn1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let profile = Profile::draw(&mut rng);
    GridFn1D::sample(
        |t| {
            let s = unit_coord(grid, t);
            let w = s * s * (1.0 - s) * (1.0 - s);
            16.0 * w * (0.5 + profile.eval(s))
        },
        grid,
    )
}

/// Smooth seeded field on a tensor grid: a sum of two separable products of
/// per-axis profiles.
pub fn smooth_field(grid: &TensorGrid, seed: u64) -> Result<GridField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = grid.rank();
    let profiles: Vec<[Profile; 2]> = (0..rank)
        .map(|_| [Profile::draw(&mut rng), Profile::draw(&mut rng)])
        .collect();
    GridField::sample(
        |coords| {
            let mut total = 0.0;
            for q in 0..2 {
                let mut prod = 1.0;
                for (i, &c) in coords.iter().enumerate() {
                    let s = unit_coord(grid.axis(i), c);
                    prod *= 0.4 + 0.6 * profiles[i][q].eval(s);
                }
                total += prod;
            }
            total
        },
        grid,
    )
}

/// Smooth seeded field vanishing (with first derivatives) on the whole
/// boundary of the box.
pub fn boundary_vanishing_field(grid: &TensorGrid, seed: u64) -> Result<GridField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let rank = grid.rank();
    let profiles: Vec<Profile> = (0..rank).map(|_| Profile::draw(&mut rng)).collect();
    GridField::sample(
        |coords| {
            let mut acc = 1.0;
            for (i, &c) in coords.iter().enumerate() {
                let s = unit_coord(grid.axis(i), c);
                acc *= 16.0 * s * s * (1.0 - s) * (1.0 - s) * (0.5 + 0.25 * profiles[i].eval(s));
            }
            acc
        },
        grid,
    )
}
