use std::f64::consts::PI;

use anyhow::{ensure, Context, Result};
use diophantine_core::asymptotic::{
    build_upsilon_with, compare_models, fit_upsilon, log_grid, residual_exponent, FitBasis,
    Kernel, UpsilonModel,
};
use diophantine_core::exec::{current_threads, with_workers, ExecMode};
use diophantine_core::identities::{identity_suite, IDENTITY_TOLERANCE};
use diophantine_core::mellin::{line_integral_batch, LineIntegralSpec};
use diophantine_core::periodic_bernoulli::{pb_closed, pb_fourier};
use diophantine_core::series::{
    eval_f_complex, eval_fourier_rhs, eval_series, eval_series_batch, Coefficient, SeriesSpec,
    TruncationPlan,
};
use diophantine_core::sieve::build_sieve;
use diophantine_core::special::{gamma_complex, zeta};
use diophantine_core::zeros::{explicit_check, load_zeros, ZeroResidues, ZeroTable};
use diophantine_core::Complex64;
use serde_json::{json, Value};

use crate::config::Provenance;
use crate::output::{Cell, Report, Table};
use crate::{
    Cli, Cmd, EvalArgs, GridArgs, IdentitiesArgs, MellinArgs, Method, ResidualArgs, RunArgs,
    SelftestArgs, UpsilonArgs, ZerosArgs,
};

/// Returned when a check-style subcommand ran but some check failed.
#[derive(Debug)]
pub struct ChecksFailed(pub usize);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} check(s) failed", self.0)
    }
}

impl std::error::Error for ChecksFailed {}

pub fn run(cli: &Cli, prov: &Provenance) -> Result<()> {
    let (report, out) = match &cli.command {
        Cmd::Eval(a) => (eval(a)?, &a.out),
        Cmd::Identities(a) => (identities(a)?, &a.out),
        Cmd::Upsilon(a) => (upsilon(a)?, &a.out),
        Cmd::Residual(a) => (residual(a)?, &a.out),
        Cmd::Zeros(a) => (zeros(a)?, &a.out),
        Cmd::Mellin(a) => (mellin(a)?, &a.out),
        Cmd::Selftest(a) => {
            let (report, failed) = selftest(a)?;
            report.emit(&a.out, prov)?;
            if failed > 0 {
                return Err(ChecksFailed(failed).into());
            }
            return Ok(());
        }
    };
    report.emit(out, prov)
}

struct Grid {
    xs: Vec<f64>,
    config: Value,
}

impl GridArgs {
    fn resolve(&self, lo: f64, hi: f64, points: usize) -> Result<Grid> {
        let lo = self.x_min.unwrap_or(lo);
        let hi = self.x_max.unwrap_or(hi);
        let n = self.points.unwrap_or(points);
        ensure!(n >= 1, "--points must be at least 1");
        ensure!(lo.is_finite() && hi.is_finite(), "--x-min and --x-max must be finite");
        ensure!(lo <= hi, "--x-min {lo} exceeds --x-max {hi}");
        let xs = if self.linear {
            if n == 1 {
                vec![lo]
            } else {
                (0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect()
            }
        } else {
            ensure!(lo > 0.0, "a log-spaced grid needs --x-min > 0 (or pass --linear)");
            log_grid(lo, hi, n)
        };
        Ok(Grid {
            xs,
            config: json!({
                "x_min": lo,
                "x_max": hi,
                "points": n,
                "spacing": if self.linear { "linear" } else { "log" },
            }),
        })
    }
}

impl RunArgs {
    fn resolve(&self, default_terms: u64) -> (TruncationPlan, Value) {
        let terms = self.terms.unwrap_or(default_terms);
        let mode = if self.sequential {
            ExecMode::Sequential
        } else {
            ExecMode::Parallel
        };
        let plan = TruncationPlan::new(terms)
            .with_chunk(self.chunk)
            .with_workers(self.workers.map(|w| w as usize))
            .with_mode(mode);
        let threads = with_workers(plan.workers, current_threads);
        (
            plan,
            json!({
                "N": terms,
                "chunk": self.chunk,
                "workers": self.workers,
                "threads": if self.sequential { 1 } else { threads },
                "mode": mode,
            }),
        )
    }
}

fn eval(a: &EvalArgs) -> Result<Report> {
    let grid = a.grid.resolve(0.01, 0.5, 50)?;
    let (plan, run) = a.run.resolve(1_000_000);
    let spec = if a.squared {
        let mut s = SeriesSpec::squared(a.coefficient);
        s.denominator_power = a.power.unwrap_or(2);
        s
    } else {
        let mut s = SeriesSpec::standard(a.coefficient, a.k);
        s.denominator_power = a.power.unwrap_or(a.k);
        s
    };
    let values = eval_series_batch(&spec, &grid.xs, &plan)?;
    let mut table = Table::new(["x", "value", "tail_bound"]);
    for v in &values {
        table.push(vec![v.x.into(), v.value.into(), v.tail_bound.into()]);
    }
    Ok(Report {
        subcommand: "eval",
        config: json!({ "spec": spec, "grid": grid.config, "run": run }),
        results: json!({ "values": values }),
        table,
    })
}

fn identities(a: &IdentitiesArgs) -> Result<Report> {
    let (plan, run) = a.run.resolve(10_000_000);
    let suite = identity_suite(a.grid as usize, &plan)?;
    let mut table = Table::new([
        "identity", "x", "lhs", "rhs", "printed", "deviation", "tail_bound",
    ]);
    for r in &suite {
        for row in &r.rows {
            table.push(vec![
                r.name.as_str().into(),
                row.x.into(),
                row.lhs.into(),
                row.rhs.into(),
                row.printed.into(),
                row.deviation().into(),
                row.tail_bound.into(),
            ]);
        }
    }
    let summary: Vec<Value> = suite
        .iter()
        .map(|r| {
            json!({
                "identity": r.name,
                "statement": r.statement,
                "observed_constant": r.observed_constant,
                "observed_constant_value": r.observed_constant_value,
                "printed_constant": r.printed_constant,
                "printed_constant_value": r.printed_constant_value,
                "max_deviation": r.max_deviation,
                "max_deviation_from_printed": r.max_printed_deviation,
                "worst_margin": r.worst_margin,
                "passed": r.passed,
            })
        })
        .collect();
    Ok(Report {
        subcommand: "identities",
        config: json!({ "grid": a.grid, "run": run, "tolerance": IDENTITY_TOLERANCE }),
        results: json!({ "identities": summary }),
        table,
    })
}

fn model_rows(table: &mut Table, label: &str, m: &UpsilonModel) {
    table.push(vec![
        label.into(),
        "constant".into(),
        0u64.into(),
        m.constant.into(),
        0.0.into(),
        0.0.into(),
    ]);
    for (part, terms) in [("poly", &m.poly), ("trailing", &m.trailing)] {
        for t in terms.iter() {
            table.push(vec![
                label.into(),
                part.into(),
                (t.exponent as u64).into(),
                t.coeff.into(),
                t.log_coeff.into(),
                t.log2_coeff.into(),
            ]);
        }
    }
}

fn residue_model(k: u32, kernel: Kernel, l_max: u32, radius: f64, nodes: usize) -> Result<UpsilonModel> {
    ensure!(
        kernel != Kernel::Zeta,
        "the small-x model needs --kernel mulog or mumulog"
    );
    Ok(build_upsilon_with(k, kernel, l_max, radius, nodes)?)
}

fn upsilon(a: &UpsilonArgs) -> Result<Report> {
    let model = residue_model(a.k, a.kernel, a.l_max, a.radius, a.nodes)?;
    let mut table = Table::new(["method", "part", "exponent", "coeff", "log_coeff", "log2_coeff"]);
    model_rows(&mut table, "residue", &model);
    let mut config = json!({
        "k": a.k,
        "kernel": a.kernel,
        "l_max": a.l_max,
        "method": a.method,
        "radius": a.radius,
        "nodes": a.nodes,
    });
    let mut results = json!({ "residue": model });
    if a.method == Method::Fit {
        let grid = a.grid.resolve(1e-6, 1e-4, 25)?;
        let (plan, run) = a.run.resolve(10_000_000);
        let spec = a.kernel.series_spec(a.k).context("kernel has no series")?;
        let samples: Vec<(f64, f64)> = eval_series_batch(&spec, &grid.xs, &plan)?
            .iter()
            .map(|v| (v.x, v.value))
            .collect();
        let basis = match a.fit_trailing {
            Some(l_max) => FitBasis::WithTrailing { l_max },
            None => FitBasis::Standard,
        };
        let fit = fit_upsilon(&samples, a.k, basis)?;
        let comparison = compare_models(&model, &fit, 0.05, 1e-4)?;
        model_rows(&mut table, "fit", &fit);
        config["grid"] = grid.config;
        config["run"] = run;
        config["basis"] = json!(basis);
        results["fit"] = json!(fit);
        results["comparison"] = json!(comparison);
    }
    Ok(Report {
        subcommand: "upsilon",
        config,
        results,
        table,
    })
}

fn residual(a: &ResidualArgs) -> Result<Report> {
    let grid = a.grid.resolve(1e-3, 1e-1, 25)?;
    let (plan, run) = a.run.resolve(10_000_000);
    let model = residue_model(a.k, a.kernel, a.l_max, 0.25, 256)?;
    let spec = a.kernel.series_spec(a.k).context("kernel has no series")?;
    let series = eval_series_batch(&spec, &grid.xs, &plan)?;
    let values: Vec<f64> = series.iter().map(|s| s.value).collect();
    let tails: Vec<f64> = series.iter().map(|s| s.tail_bound).collect();
    let rep = residual_exponent(&grid.xs, &values, &tails, &model)?;
    let mut table = Table::new(["x", "series", "model", "residual", "tail_bound"]);
    for i in 0..rep.x.len() {
        table.push(vec![
            rep.x[i].into(),
            rep.series[i].into(),
            rep.model[i].into(),
            rep.residual[i].into(),
            rep.tail_bound[i].into(),
        ]);
    }
    Ok(Report {
        subcommand: "residual",
        config: json!({
            "k": a.k,
            "kernel": a.kernel,
            "l_max": a.l_max,
            "grid": grid.config,
            "run": run,
        }),
        results: json!({
            "exponent": rep.exponent,
            "exponent_ci95": rep.exponent_ci,
            "intercept": rep.intercept,
            "expected_under_rh": a.k as f64 - 0.5,
            "envelope": rep.envelope,
            "model": model,
        }),
        table,
    })
}

fn zero_table(a: &ZerosArgs) -> Result<ZeroTable> {
    Ok(match &a.zeros {
        Some(p) => load_zeros(p)?,
        None => ZeroTable::bundled(),
    })
}

fn zeros(a: &ZerosArgs) -> Result<Report> {
    let table = zero_table(a)?;
    let grid = a.grid.resolve(0.01, 0.1, 20)?;
    ensure!(a.kernel != Kernel::Zeta, "zero sums need --kernel mulog or mumulog");
    let mut config = json!({
        "k": a.k,
        "kernel": a.kernel,
        "zero_table": table.source,
        "zeros_available": table.len(),
        "grid": grid.config,
    });
    if !a.explicit {
        let residues = ZeroResidues::prepare(a.k, a.kernel, &table, a.budget)?;
        let sums = grid
            .xs
            .iter()
            .map(|&x| residues.sum(x, a.budget))
            .collect::<diophantine_core::Result<Vec<_>>>()?;
        let mut t = Table::new(["x", "zero_sum", "imaginary"]);
        for s in &sums {
            t.push(vec![s.x.into(), s.value.into(), s.imaginary.into()]);
        }
        config["budget"] = json!(a.budget);
        let max_imag = sums.iter().map(|s| s.imaginary.abs()).fold(0.0, f64::max);
        return Ok(Report {
            subcommand: "zeros",
            config,
            results: json!({
                "max_abs_imaginary": max_imag,
                "residue_magnitudes": sums.first().map(|s| s.magnitudes.clone()),
                "values": sums.iter().map(|s| json!({"x": s.x, "value": s.value, "imaginary": s.imaginary})).collect::<Vec<_>>(),
            }),
            table: t,
        });
    }
    ensure!(!a.budgets.is_empty(), "--budgets needs at least one entry");
    let (plan, run) = a.run.resolve(10_000_000);
    let model = residue_model(a.k, a.kernel, a.l_max, 0.25, 256)?;
    let spec = a.kernel.series_spec(a.k).context("kernel has no series")?;
    let series = eval_series_batch(&spec, &grid.xs, &plan)?;
    let check = explicit_check(a.k, a.kernel, &table, &a.budgets, &model, &series)?;
    let mut header = vec!["x".to_string(), "series".into(), "model".into()];
    header.extend(a.budgets.iter().map(|j| format!("discrepancy_j{j}")));
    let mut t = Table::new(header);
    for i in 0..check.x.len() {
        let mut row: Vec<Cell> = vec![check.x[i].into(), check.series[i].into(), check.model[i].into()];
        row.extend(check.discrepancy.iter().map(|d| d[i].into()));
        t.push(row);
    }
    config["budgets"] = json!(a.budgets);
    config["l_max"] = json!(a.l_max);
    config["run"] = run;
    let monotone = check.l2.windows(2).all(|w| w[1] < w[0]);
    Ok(Report {
        subcommand: "zeros",
        config,
        results: json!({
            "budgets": check.budgets,
            "rms_discrepancy": check.l2,
            "strictly_decreasing": monotone,
        }),
        table: t,
    })
}

fn mellin(a: &MellinArgs) -> Result<Report> {
    ensure!(!a.x.is_empty(), "--x needs at least one value");
    let spec = LineIntegralSpec {
        c: a.c,
        t_max: a.t_max,
        steps: a.steps,
        m: a.m,
        kernel: a.kernel,
        taper: a.taper,
    };
    let values = line_integral_batch(&spec, &a.x)?;
    let (plan, run) = a.run.resolve(1_000_000);
    let targets: Vec<f64> = match a.kernel {
        Kernel::Zeta => a.x.iter().map(|&x| pb_closed(a.m, x)).collect::<diophantine_core::Result<_>>()?,
        k => {
            let s = k.series_spec(a.m).context("kernel has no series")?;
            eval_series_batch(&s, &a.x, &plan)?.iter().map(|v| v.value).collect()
        }
    };
    let mut table = Table::new(["x", "re", "im", "target", "abs_error"]);
    for (v, t) in values.iter().zip(&targets) {
        table.push(vec![
            v.x.into(),
            v.value.re.into(),
            v.value.im.into(),
            (*t).into(),
            (v.value - t).norm().into(),
        ]);
    }
    let max_err = values
        .iter()
        .zip(&targets)
        .map(|(v, t)| (v.value - t).norm())
        .fold(0.0, f64::max);
    let mut config = json!({ "line": spec, "x": a.x });
    if a.kernel != Kernel::Zeta {
        config["run"] = run;
    }
    Ok(Report {
        subcommand: "mellin",
        config,
        results: json!({
            "max_abs_error": max_err,
            "target": if a.kernel == Kernel::Zeta { "periodic Bernoulli closed form" } else { "truncated series" },
            "values": values,
        }),
        table,
    })
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, got: f64, want: f64, tol: f64) -> Check {
    Check {
        name,
        passed: (got - want).abs() <= tol,
        detail: format!("got {got:.12e}, want {want:.12e}, tol {tol:.1e}"),
    }
}

fn selftest(_a: &SelftestArgs) -> Result<(Report, usize)> {
    let mut checks = Vec::new();
    checks.push(check("b3_parity", pb_closed(3, 0.37)? + pb_closed(3, 0.63)?, 0.0, 1e-15));
    checks.push(check("b2_periodic", pb_closed(2, 7.3)?, pb_closed(2, 0.3)?, 1e-12));
    checks.push(check("b1_at_integer", pb_closed(1, 2.0)?, -0.5, 0.0));
    let f = pb_fourier(2, 0.3, 1)?;
    checks.push(check(
        "fourier_single_term",
        f.value,
        (2.0 * PI * 0.3).cos() / (PI * PI),
        1e-15,
    ));
    let t = build_sieve(10)?;
    checks.push(Check {
        name: "mobius_first_ten",
        passed: t.mu_values() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1],
        detail: format!("{:?}", t.mu_values()),
    });
    checks.push(check("mertens_10", t.mertens(10) as f64, -1.0, 0.0));
    checks.push(check("zeta_trivial_zero", zeta(Complex64::new(-2.0, 0.0))?.norm(), 0.0, 1e-13));
    checks.push(check("zeta_at_zero", zeta(Complex64::new(0.0, 0.0))?.re, -0.5, 1e-13));
    checks.push(check("gamma_5", gamma_complex(Complex64::new(5.0, 0.0))?.re, 24.0, 1e-11));
    let plan = TruncationPlan::new(100_000);
    let a = eval_series(&SeriesSpec::mu_log(3), 0.37, &plan)?;
    let b = eval_series(&SeriesSpec::mu_log(3), 0.63, &plan)?;
    checks.push(check("series_odd_parity", a.value + b.value, 0.0, 2.0 * a.tail_bound));
    let one = eval_fourier_rhs(0.3, &TruncationPlan::new(1))?;
    checks.push(check(
        "two_omega_single_term",
        (one.sum - Complex64::from_polar(1.0, 2.0 * PI * 0.3)).norm(),
        0.0,
        1e-15,
    ));
    let half = eval_fourier_rhs(0.5, &plan)?;
    checks.push(check("two_omega_half_is_real", half.sum.im, 0.0, half.tail_bound));
    let z = Complex64::new(0.2, 0.3);
    let small = TruncationPlan::new(10_000);
    let d = eval_f_complex(z + 1.0, &small)?.value - eval_f_complex(z, &small)?.value;
    checks.push(check("f_periodic", d.norm(), 0.0, 1e-10));
    let lam = eval_series(&SeriesSpec::standard(Coefficient::Lambda, 2), 1.0, &TruncationPlan::new(1000))?;
    checks.push(Check {
        name: "lambda_series_finite",
        passed: lam.value.is_finite(),
        detail: format!("{}", lam.value),
    });
    let zt = ZeroTable::bundled();
    checks.push(Check {
        name: "bundled_zero_table",
        passed: zt.len() >= 100,
        detail: format!("{} ordinates", zt.len()),
    });

    let mut table = Table::new(["check", "status", "detail"]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            if c.passed { "PASS" } else { "FAIL" }.into(),
            c.detail.replace(',', ";").into(),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        for c in checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}: {}", c.name, c.detail);
        }
    }
    let results = json!({
        "passed": checks.len() - failed,
        "failed": failed,
        "checks": checks.iter().map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
    });
    Ok((
        Report {
            subcommand: "selftest",
            config: json!({}),
            results,
            table,
        },
        failed,
    ))
}
