//! The squared-B̄₁ identities, checked against their Möbius-inversion forms.
//!
//! Three identities are evaluated on a grid x = i/grid, i = 0..grid:
//!
//! * `b1_squared`: B̄₁(x)² − 1/12 = (1/π²) Σ cos(2πnx)/n²
//! * `mu_squared_b1`: Σ μ(n) n⁻² B̄₁(nx)² = cos(2πx)/π² + 1/(2π²)
//! * `mu_square_squared_b1`: Σ μ²(n) n⁻² B̄₁(nx)² = ζ(2)/(12ζ(4)) + (1/π²) Σ 2^{ω(n)} n⁻² cos(2πnx)
//!
//! Each comes with a "printed" reading that keeps only n ≥ 1 of the complex
//! exponential sum and a different constant; the report carries both so the
//! gap is visible.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exec::{map_indexed, with_workers};
use crate::periodic_bernoulli::{pb_closed, pb_fourier};
use crate::series::{
    eval_fourier_rhs_batch, eval_series_batch, f_constant, Coefficient, SeriesSpec,
    TruncationPlan,
};

/// Absolute slack allowed on top of the tail bounds.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub x: f64,
    pub lhs: f64,
    /// Right side in the real-combined (n ≠ 0) reading.
    pub rhs: f64,
    /// Real part of the right side as printed (n ≥ 1 only).
    pub printed: f64,
    pub tail_bound: f64,
}

impl IdentityRow {
    pub fn deviation(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub statement: String,
    pub observed_constant: String,
    pub observed_constant_value: f64,
    pub printed_constant: String,
    pub printed_constant_value: f64,
    pub max_deviation: f64,
    pub max_printed_deviation: f64,
    /// Largest deviation minus (tolerance + tail) over the grid; ≤ 0 passes.
    pub worst_margin: f64,
    pub passed: bool,
    pub rows: Vec<IdentityRow>,
}

fn summarize(
    name: &str,
    statement: &str,
    observed: (&str, f64),
    printed: (&str, f64),
    rows: Vec<IdentityRow>,
) -> IdentityResult {
    let max_deviation = rows.iter().map(IdentityRow::deviation).fold(0.0, f64::max);
    let max_printed_deviation = rows
        .iter()
        .map(|r| (r.lhs - r.printed).abs())
        .fold(0.0, f64::max);
    let worst_margin = rows
        .iter()
        .map(|r| r.deviation() - IDENTITY_TOLERANCE - r.tail_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    IdentityResult {
        name: name.into(),
        statement: statement.into(),
        observed_constant: observed.0.into(),
        observed_constant_value: observed.1,
        printed_constant: printed.0.into(),
        printed_constant_value: printed.1,
        max_deviation,
        max_printed_deviation,
        worst_margin,
        passed: worst_margin <= 0.0,
        rows,
    }
}

pub fn identity_grid(grid: usize) -> Vec<f64> {
    (0..grid).map(|i| i as f64 / grid as f64).collect()
}

/// Runs the three identities on `grid` points with `plan.terms` terms per sum.
pub fn identity_suite(grid: usize, plan: &TruncationPlan) -> Result<Vec<IdentityResult>> {
    if grid == 0 {
        return Err(invalid("identity grid needs at least one point"));
    }
    let xs = identity_grid(grid);
    let pi2 = PI * PI;

    let fourier = with_workers(plan.workers, || {
        map_indexed(xs.len(), plan.mode, |i| pb_fourier(2, xs[i], plan.terms))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let rows = xs
        .iter()
        .zip(&fourier)
        .map(|(&x, f)| {
            let b1 = pb_closed(1, x)?;
            Ok(IdentityRow {
                x,
                lhs: b1 * b1 - 1.0 / 12.0,
                rhs: f.value,
                printed: f.value / 2.0,
                tail_bound: f.tail_bound.unwrap_or(0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let first = summarize(
        "b1_squared",
        "B1(x)^2 - 1/12 = (1/pi^2) sum_{n>=1} cos(2 pi n x)/n^2",
        ("1/pi^2", 1.0 / pi2),
        ("1/(2 pi^2), n >= 1 exponentials only", 1.0 / (2.0 * pi2)),
        rows,
    );

    let lhs = eval_series_batch(&SeriesSpec::squared(Coefficient::Mu), &xs, plan)?;
    let rows = lhs
        .iter()
        .map(|v| {
            let c = (2.0 * PI * v.x).cos();
            IdentityRow {
                x: v.x,
                lhs: v.value,
                rhs: c / pi2 + 1.0 / (2.0 * pi2),
                printed: (c + 1.0) / (2.0 * pi2),
                tail_bound: v.tail_bound,
            }
        })
        .collect();
    let second = summarize(
        "mu_squared_b1",
        "sum mu(n) B1(nx)^2 / n^2 = cos(2 pi x)/pi^2 + 1/(2 pi^2)",
        ("cos(2 pi x)/pi^2 + 1/(2 pi^2)", 1.0 / (2.0 * pi2)),
        ("(e^{2 pi i x} + 1)/(2 pi^2)", 1.0 / (2.0 * pi2)),
        rows,
    );

    let lhs = eval_series_batch(&SeriesSpec::squared(Coefficient::MuSquare), &xs, plan)?;
    let rhs = eval_fourier_rhs_batch(&xs, plan)?;
    let c_obs = f_constant();
    let c_printed = c_obs * PI * PI / 6.0;
    let rows = lhs
        .iter()
        .zip(&rhs)
        .map(|(v, f)| IdentityRow {
            x: v.x,
            lhs: v.value,
            rhs: c_obs + f.real_combined,
            printed: c_printed + f.sum.re / (2.0 * pi2),
            tail_bound: v.tail_bound + f.tail_bound / pi2,
        })
        .collect();
    let third = summarize(
        "mu_square_squared_b1",
        "sum mu(n)^2 B1(nx)^2 / n^2 = zeta(2)/(12 zeta(4)) + (1/pi^2) sum 2^omega(n) cos(2 pi n x)/n^2",
        ("zeta(2)/(12 zeta(4))", c_obs),
        ("zeta(2)^2/(12 zeta(4))", c_printed),
        rows,
    );
    Ok(vec![first, second, third])
}
