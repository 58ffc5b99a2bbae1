//! Oracles and generators shared by the integration tests.
//!
//! Reference constants were evaluated independently with 30-digit
//! arbitrary-precision arithmetic.

#![allow(dead_code, clippy::excessive_precision)]

use std::sync::Arc;

use hilfer_core::expr::{BinaryOp, Func, Var};
use hilfer_core::{Expr, Grid, WeightedGridFunction};
use rand::Rng;

pub const GAMMA_2_3: f64 = 1.354_117_939_426_400_416_9;
pub const GAMMA_M1_3: f64 = -4.062_353_818_279_201_25;
pub const BETA_M1_3_3_2: f64 = -3.880_664_338_844_685_80;
pub const GAMMA_07_OVER_12: f64 = 1.413_743_762_671_457_58;

/// Weighted boundary constant of the worked problem.
pub const WORKED_BOUNDARY: f64 = 0.295_395_244_648_659_325;
pub const WORKED_G: f64 = 0.190_994_809_079_881_681;
pub const WORKED_W: f64 = 0.144_119_040_008_494_330;
pub const WORKED_K_CON: f64 = 0.052_892_773_457_602_151_9;
pub const WORKED_OMEGA: f64 = 1.509_174_608_551_934_62;
pub const WORKED_R: f64 = 1.865_469_623_050_850_70;
pub const WORKED_LAMBDA_F0_1: f64 = 2.601_299_884_784_568_60;
pub const WORKED_EPSILON: f64 = 3.039_324_399_517_411_43;
pub const WORKED_ELL: f64 = 1.716_101_619_692_570_82;

/// `Γ(2/3)/Γ(7/6)`.
pub const GAMMA_RATIO_T2: f64 = 1.459_620_264_814_274_849;

/// Weighted closed-form solution `A + B·x^{2/3}` for `f = t^{−1/6}` with
/// the worked boundary data.
pub const MANUFACTURED_A: f64 = -0.397_155_418_851_589_696;
pub const MANUFACTURED_B: f64 = 1.264_068_229_207_731_64;

pub fn manufactured_weighted(x: f64) -> f64 {
    MANUFACTURED_A + MANUFACTURED_B * x.powf(2.0 / 3.0)
}

pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs()
}

/// Strings the parser must reject.
pub const MALFORMED: &[&str] = &[
    "",
    " ",
    "(",
    ")",
    "(t",
    "t)",
    "((t + 1)",
    "sin(t))",
    "sin(t",
    "1 +",
    "1 -",
    "2 *",
    "t /",
    "t ^",
    "* 2",
    "/ t",
    "^ 2",
    "1 + * 2",
    "t z",
    "2 3",
    "sin t",
    "sin()",
    "sin(,t)",
    "()",
    "x",
    "y + 1",
    "foo(t)",
    "sinh(z)",
    "log(t)",
    "tt",
    "1..2",
    "1e",
    "1e+",
    "t # z",
    "t $ 1",
    "sin(t) + foo(z)",
    "exp(",
    "abs(z))(",
    "sqrt(t)(z)",
    "3 ++",
];

/// Random expression tree of bounded depth over the full grammar.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.random_bool(0.25);
    if leaf {
        return match rng.random_range(0..3) {
            0 => Expr::Var(Var::T),
            1 => Expr::Var(Var::Z),
            _ => {
                let x: f64 = rng.random_range(-5.0..5.0);
                // mix short decimals and full-precision values
                Expr::Number(if rng.random_bool(0.5) { (x * 4.0).round() / 4.0 } else { x })
            }
        };
    }
    match rng.random_range(0..8) {
        0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
        1 | 2 => {
            let f = Func::ALL[rng.random_range(0..Func::ALL.len())];
            Expr::Call(f, Box::new(random_expr(rng, depth - 1)))
        }
        _ => {
            let ops = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow];
            let op = ops[rng.random_range(0..ops.len())];
            Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
        }
    }
}

/// Same value, or both failing.
pub fn same_eval(a: &Expr, b: &Expr, t: f64, z: f64) -> bool {
    match (a.eval(t, z), b.eval(t, z)) {
        (Ok(x), Ok(y)) => (x - y).abs() <= 1e-12 || x == y,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

/// Random weighted function with `‖w‖_∞ ≤ radius`: smooth modes or
/// node-wise noise.
pub fn random_in_ball<R: Rng>(rng: &mut R, grid: &Arc<Grid>, sigma: f64, radius: f64) -> WeightedGridFunction {
    let n = grid.len();
    let raw: Vec<f64> = if rng.random_bool(0.5) {
        let modes: Vec<(f64, f64, f64)> = (0..4)
            .map(|_| {
                (rng.random_range(-1.0..1.0), rng.random_range(0.0..20.0), rng.random_range(0.0..6.3))
            })
            .collect();
        (0..n)
            .map(|i| {
                let x = grid.offset(i) / (grid.b() - grid.a());
                modes.iter().map(|(c, k, ph)| c * (k * x + ph).sin()).sum()
            })
            .collect()
    } else {
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    };
    let peak = raw.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let scale = radius * rng.random_range(0.5..1.0) / peak;
    WeightedGridFunction::new(grid.clone(), sigma, raw.iter().map(|v| v * scale).collect()).unwrap()
}
