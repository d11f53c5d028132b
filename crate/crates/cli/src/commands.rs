//! Execution of validated jobs into CSV tables and optional plots.

use blaschke::asymptotics::predict::{airy_predict, boundary_constant, prediction_window};
use blaschke::engines::coeff_series_auto_with;
use blaschke::engines::exact::{coeff_series_exact, PrecisionPolicy};
use blaschke::engines::fft::coeff_series_fft_default;
use blaschke::engines::oscillatory::coeff_oscillatory;
use blaschke::lab::{run_norm_scaling, weyl_sums};
use blaschke::norms::{default_alpha, lp_norm, region_mass, Exponent, Region, RegionPartition};
use blaschke::params::BlaschkeParams;
use blaschke::series::CoefficientSeries;

use crate::config::{EngineChoice, Job};
use crate::csv::{real, Cell, Table};
use crate::error::CliError;
use crate::svg::Plot;

/// Result of one command: a table and, if requested, a plot.
#[derive(Debug)]
pub struct Output {
    pub table: Table,
    pub plot: Option<String>,
}

fn series(
    params: &BlaschkeParams,
    kmax: usize,
    engine: EngineChoice,
    policy: &PrecisionPolicy,
) -> Result<CoefficientSeries, CliError> {
    Ok(match engine {
        EngineChoice::Auto => coeff_series_auto_with(params, kmax, policy)?,
        EngineChoice::Exact => coeff_series_exact(params, kmax, policy)?,
        EngineChoice::Fft => coeff_series_fft_default(params, kmax)?,
        EngineChoice::Oscillatory => {
            return Err(CliError::Config("the oscillatory engine only serves `coeffs`".into()))
        }
    })
}

fn region_bands(plot: Plot, params: &BlaschkeParams, kmax: u64) -> Plot {
    let Ok(part) = RegionPartition::new(params, default_alpha(params)) else {
        return plot;
    };
    Region::ALL.iter().fold(plot, |plot, r| match part.range(*r) {
        Some((lo, hi)) if lo <= kmax => plot.band(lo as f64, hi.unwrap_or(kmax).min(kmax) as f64, r.label()),
        _ => plot,
    })
}

fn log10_profile(values: impl Iterator<Item = (u64, f64)>) -> Vec<(f64, f64)> {
    values.map(|(k, v)| (k as f64, v.abs().log10())).collect()
}

pub fn execute(job: &Job, policy: &PrecisionPolicy, svg: bool) -> Result<Output, CliError> {
    match job {
        Job::Coeffs { params, kmax, engine } => {
            coeffs(params, kmax.unwrap_or(params.default_kmax()), *engine, policy, svg)
        }
        Job::Norms {
            params,
            ps,
            kmax,
            engine,
        } => norms(params, ps, kmax.unwrap_or(params.default_kmax()), *engine, policy, svg),
        Job::Regions {
            params,
            alpha,
            p,
            kmax,
            engine,
        } => regions(
            params,
            alpha,
            p,
            kmax.unwrap_or(params.default_kmax()),
            *engine,
            policy,
            svg,
        ),
        Job::Predict { params, ks } => predict(params, ks.as_deref(), policy, svg),
        Job::Scaling { lambda, p, grid } => scaling(lambda, p, grid, svg),
        Job::Weyl { params, j, bins } => weyl(params, *j, *bins, svg),
    }
}

fn coeffs(
    params: &BlaschkeParams,
    kmax: usize,
    engine: EngineChoice,
    policy: &PrecisionPolicy,
    svg: bool,
) -> Result<Output, CliError> {
    let mut table = Table::new(&["k", "value", "abs_error", "engine"]);
    let mut profile = Vec::with_capacity(kmax + 1);
    if engine == EngineChoice::Oscillatory {
        for k in 0..=kmax as u64 {
            let v = coeff_oscillatory(params, k)?;
            table.push(vec![
                k.into(),
                v.value.into(),
                v.error_estimate.into(),
                "oscillatory".into(),
            ]);
            profile.push((k, v.value));
        }
    } else {
        let s = series(params, kmax, engine, policy)?;
        for (k, v) in s.values.iter().enumerate() {
            table.push(vec![
                (k as u64).into(),
                (*v).into(),
                s.achieved_abs_error.into(),
                s.engine.as_str().into(),
            ]);
            profile.push((k as u64, *v));
        }
    }
    table.note(format!("lambda={},n={},kmax={kmax}", params.lambda(), params.n()));
    let plot = svg.then(|| {
        let plot = Plot::new("coefficient profile", "k", "log10 |B̂(k)|").line(
            "|B̂(k)|",
            log10_profile(profile.into_iter()),
            false,
        );
        region_bands(plot, params, kmax as u64).render()
    });
    Ok(Output { table, plot })
}

fn norms(
    params: &BlaschkeParams,
    ps: &[Exponent],
    kmax: usize,
    engine: EngineChoice,
    policy: &PrecisionPolicy,
    svg: bool,
) -> Result<Output, CliError> {
    let s = series(params, kmax, engine, policy)?;
    let mut header = vec!["p", "norm", "tail_certificate", "dominant_region"];
    const MASS: [&str; 7] = [
        "mass_I", "mass_II", "mass_III", "mass_IV", "mass_V", "mass_VI", "mass_VII",
    ];
    header.extend(MASS);
    let mut table = Table::new(&header);
    let mut curve = Vec::new();
    for p in ps {
        let r = lp_norm(&s, p)?;
        let mut row: Vec<Cell> = vec![
            p.to_string().into(),
            r.value.into(),
            r.tail_certificate.into(),
            r.dominant_region().label().into(),
        ];
        row.extend(Region::ALL.iter().map(|reg| Cell::Real(r.per_region_mass[reg])));
        table.push(row);
        if !p.is_infinite() {
            curve.push((p.as_f64(), r.value));
        }
    }
    table.note(format!(
        "lambda={},n={},kmax={kmax},engine={}",
        params.lambda(),
        params.n(),
        s.engine
    ));
    let plot = svg.then(|| Plot::new("lp norms", "p", "norm").line("‖B‖_p", curve, false).render());
    Ok(Output { table, plot })
}

fn regions(
    params: &BlaschkeParams,
    alpha: &num_rational::BigRational,
    p: &Exponent,
    kmax: usize,
    engine: EngineChoice,
    policy: &PrecisionPolicy,
    svg: bool,
) -> Result<Output, CliError> {
    let part = RegionPartition::new(params, alpha.clone())?;
    let s = series(params, kmax, engine, policy)?;
    let counts = part.counts(kmax as u64);
    let mut table = Table::new(&["region", "first_k", "last_k", "count", "mass"]);
    for r in Region::ALL {
        let (first, last) = match part.range(r) {
            Some((lo, hi)) => (Cell::from(lo), hi.map_or(Cell::Empty, Cell::from)),
            None => (Cell::Empty, Cell::Empty),
        };
        let mass = region_mass(&s, &part, r, p)?;
        table.push(vec![
            r.label().into(),
            first,
            last,
            counts[r.index()].into(),
            mass.into(),
        ]);
    }
    table.note(format!(
        "lambda={},n={},alpha={},beta={},kmax={kmax},p={p}",
        params.lambda(),
        params.n(),
        part.alpha(),
        part.beta()
    ));
    let b = part.boundaries();
    table.note(format!(
        "boundaries={}",
        b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    ));
    let plot = svg.then(|| {
        let profile = log10_profile(s.values.iter().enumerate().map(|(k, v)| (k as u64, *v)));
        region_bands(
            Plot::new("regions", "k", "log10 |B̂(k)|").line("|B̂(k)|", profile, false),
            params,
            kmax as u64,
        )
        .render()
    });
    Ok(Output { table, plot })
}

fn predict(
    params: &BlaschkeParams,
    ks: Option<&[u64]>,
    policy: &PrecisionPolicy,
    svg: bool,
) -> Result<Output, CliError> {
    let ks: Vec<u64> = match ks {
        Some(ks) => ks.to_vec(),
        None => {
            let (lo, hi) = prediction_window(params);
            (lo.max(0) as u64..=hi.max(0) as u64).collect()
        }
    };
    let kmax = ks.iter().copied().max().unwrap_or(0) as usize;
    let s = coeff_series_auto_with(params, kmax, policy)?;
    let mut table = Table::new(&[
        "k",
        "alpha",
        "airy_argument",
        "predicted",
        "exact",
        "relative_error",
        "in_window",
    ]);
    let (mut exact_curve, mut pred_curve) = (Vec::new(), Vec::new());
    for &k in &ks {
        let pr = airy_predict(params, k)?;
        let exact = s.values[k as usize];
        let rel = ((pr.predicted - exact) / exact).abs();
        table.push(vec![
            k.into(),
            pr.alpha.into(),
            pr.airy_argument.into(),
            pr.predicted.into(),
            exact.into(),
            rel.into(),
            u64::from(pr.in_window).into(),
        ]);
        exact_curve.push((k as f64, exact));
        pred_curve.push((k as f64, pr.predicted));
    }
    table.note(format!(
        "lambda={},n={},engine={},boundary_constant={}",
        params.lambda(),
        params.n(),
        s.engine,
        real(boundary_constant(params))
    ));
    let plot = svg.then(|| {
        Plot::new("Airy prediction", "k", "B̂(k)")
            .line("exact", exact_curve, false)
            .line("predicted", pred_curve, true)
            .render()
    });
    Ok(Output { table, plot })
}

fn scaling(lambda: &num_rational::BigRational, p: &Exponent, grid: &[u64], svg: bool) -> Result<Output, CliError> {
    let fit = run_norm_scaling(lambda, p, grid)?;
    let mut table = Table::new(&["n", "norm", "log_n", "log_norm"]);
    for (n, v) in fit.n_grid.iter().zip(&fit.norms) {
        table.push(vec![(*n).into(), (*v).into(), (*n as f64).ln().into(), v.ln().into()]);
    }
    table.note(format!(
        "slope={},stderr={},theory={}",
        real(fit.fitted_slope),
        real(fit.slope_stderr),
        real(fit.theory_slope_f64())
    ));
    table.note(format!(
        "lambda={},p={p},theory_exact={},model={}",
        fit.lambda,
        fit.theory_slope,
        if fit.log_corrected { "log-corrected" } else { "power" }
    ));
    table.note(format!(
        "spot_check_n={},exact={},fft={}",
        fit.spot_check.n,
        real(fit.spot_check.exact),
        real(fit.spot_check.fft)
    ));
    if let Some(w) = &fit.warning {
        eprintln!("warning: {w}");
        table.note(format!("warning={w}"));
    }
    let plot = svg.then(|| {
        let measured: Vec<(f64, f64)> = fit
            .abscissae
            .iter()
            .zip(&fit.norms)
            .map(|(x, v)| (*x, v.ln()))
            .collect();
        let line: Vec<(f64, f64)> = fit
            .abscissae
            .iter()
            .map(|x| (*x, fit.intercept + fit.fitted_slope * x))
            .collect();
        let x_label = if fit.log_corrected {
            "(1/4) log(log n / n)"
        } else {
            "log n"
        };
        Plot::new("norm scaling", x_label, "log ‖B‖_p")
            .line("measured", measured, false)
            .line("least squares", line, true)
            .render()
    });
    Ok(Output { table, plot })
}

fn weyl(params: &BlaschkeParams, j: i64, bins: usize, svg: bool) -> Result<Output, CliError> {
    let w = weyl_sums(params.lambda(), params.n(), j)?;
    let mut table = Table::new(&["k", "s", "re_a", "im_a", "abs_a"]);
    for (i, (s, a)) in w.s_values.iter().zip(&w.partial_sums).enumerate() {
        table.push(vec![
            (w.window.0 + i as u64).into(),
            (*s).into(),
            a.re.into(),
            a.im.into(),
            a.norm().into(),
        ]);
    }
    table.note(format!(
        "lambda={},n={},j={j},window={}:{},max_abs_a={},growth_exponent={}",
        w.lambda,
        w.n,
        w.window.0,
        w.window.1,
        real(w.max_abs_a),
        real(w.growth_exponent())
    ));
    table.note(format!(
        "histogram{bins}={}",
        w.histogram(bins)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    let plot = svg.then(|| {
        let curve = w
            .partial_sums
            .iter()
            .enumerate()
            .map(|(i, a)| ((w.window.0 + i as u64) as f64, a.norm()))
            .collect();
        Plot::new("Weyl partial sums", "k", "|A_k|")
            .line("|A_k|", curve, false)
            .render()
    });
    Ok(Output { table, plot })
}
