use num_complex::Complex64;
use qheat_core::stats::{
    asymptotic_charfn, asymptotic_distribution, charfn, classical_distribution, cumulant_trace, default_k_max,
    default_quadrature_points, heat_distribution, isothermal_distribution, low_temperature_distribution,
    HeatDistribution, Provenance, TauGrid,
};
use qheat_core::verify::{run_suite, Profile, SuiteConfig};
use qheat_core::{Error, ModelParams};
use serde_json::{json, Value};

use crate::args::{CharfnArgs, CumulantArgs, DistArgs, Format, KMax, Mode, ModelArgs, TolProfile, VerifyArgs};
use crate::output::{emit, num, pretty, tau_value, tool_block, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams { .. } | Error::InvalidGrid | Error::UnknownCheck(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// What a successful command reports back to `main`.
pub enum Status {
    Ok,
    ChecksFailed,
}

fn model(args: &ModelArgs, tau: f64) -> Result<ModelParams, CliError> {
    Ok(ModelParams::new(args.beta1, args.beta2, tau)?.with_hbar_omega(args.hbar_omega)?)
}

fn params_block(params: &ModelParams) -> Value {
    json!({
        "beta1": params.beta1(),
        "beta2": params.beta2(),
        "tau": tau_value(params.tau()),
        "hbar_omega": params.hbar_omega(),
    })
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::CharfnInversion => "charfn_inversion",
        Provenance::Asymptotic => "asymptotic",
        Provenance::Isothermal => "isothermal",
        Provenance::LowTemperature => "low_temperature",
        Provenance::BruteForce => "brute_force",
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Asymptotic => "asymptotic",
        Mode::Isothermal => "isothermal",
        Mode::Classical => "classical",
        Mode::Lowtemp => "lowtemp",
    }
}

pub fn dist(args: &DistArgs) -> Result<Status, CliError> {
    let tau = args.tau.0;
    if args.mode != Mode::Exact && tau != f64::INFINITY {
        return Err(CliError::Usage(format!(
            "--mode {} describes the stationary law and needs --tau inf",
            mode_name(args.mode)
        )));
    }
    if args.mode == Mode::Isothermal && args.model.beta1 != args.model.beta2 {
        return Err(CliError::Usage(
            "--mode isothermal needs --beta1 equal to --beta2".into(),
        ));
    }
    let params = model(&args.model, tau)?;
    let k_max = match args.kmax {
        KMax::Auto => default_k_max(&params),
        KMax::Fixed(k) => k,
    };

    let distribution: HeatDistribution = match args.mode {
        Mode::Exact => heat_distribution(&params, Some(k_max))?,
        Mode::Asymptotic | Mode::Classical => asymptotic_distribution(&params, k_max),
        Mode::Isothermal => isothermal_distribution(params.beta1(), k_max).with_hbar_omega(params.hbar_omega()),
        Mode::Lowtemp => low_temperature_distribution(&params),
    };
    let quadrature = (distribution.provenance() == Provenance::CharfnInversion)
        .then(|| default_quadrature_points(distribution.k_max()));
    let classical = (args.mode == Mode::Classical).then(|| classical_distribution(&params));
    let envelope = |q: f64| classical.map(|c| c.density(q) * params.hbar_omega());

    let text = match args.output.format {
        Format::Csv => {
            let header: &[&str] = if classical.is_some() {
                &["k", "Q", "P", "envelope"]
            } else {
                &["k", "Q", "P"]
            };
            let mut table = Table::new(header);
            for (k, q, p) in distribution.points() {
                let mut row = vec![k.to_string(), num(q), num(p)];
                row.extend(envelope(q).map(num));
                table.push(row);
            }
            table.to_csv()
        }
        Format::Json => {
            let points: Vec<Value> = distribution
                .points()
                .map(|(k, q, p)| {
                    let mut point = json!({ "k": k, "Q": q, "P": p });
                    if let Some(e) = envelope(q) {
                        point["envelope"] = Value::from(e);
                    }
                    point
                })
                .collect();
            pretty(&json!({
                "metadata": {
                    "tool": tool_block(),
                    "command": "dist",
                    "params": params_block(&params),
                    "mode": mode_name(args.mode),
                    "k_max": distribution.k_max(),
                    "quadrature_points": quadrature,
                    "truncation_error": distribution.truncation_error(),
                    "total": distribution.total(),
                    "provenance": provenance_name(distribution.provenance()),
                    "note": distribution.note(),
                },
                "points": points,
            }))
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn cumulants(args: &CumulantArgs) -> Result<Status, CliError> {
    let g = args.tau_grid;
    let grid = TauGrid::range(g.start, g.stop, g.step)?;
    let params = model(&args.model, f64::INFINITY)?;
    let trace = cumulant_trace(&params, &grid)?;

    let text = match args.output.format {
        Format::Csv => {
            let mut table = Table::new(&["tau", "mean", "variance", "mean_inf", "variance_inf"]);
            for i in 0..trace.tau_grid.len() {
                table.push(vec![
                    num(trace.tau_grid[i]),
                    num(trace.mean[i]),
                    num(trace.variance[i]),
                    num(trace.mean_inf),
                    num(trace.variance_inf),
                ]);
            }
            table.to_csv()
        }
        Format::Json => {
            let rows: Vec<Value> = (0..trace.tau_grid.len())
                .map(|i| {
                    json!({
                        "tau": trace.tau_grid[i],
                        "mean": trace.mean[i],
                        "variance": trace.variance[i],
                        "mean_inf": trace.mean_inf,
                        "variance_inf": trace.variance_inf,
                    })
                })
                .collect();
            pretty(&json!({
                "metadata": {
                    "tool": tool_block(),
                    "command": "cumulants",
                    "params": {
                        "beta1": params.beta1(),
                        "beta2": params.beta2(),
                        "hbar_omega": params.hbar_omega(),
                        "tau_grid": { "start": g.start, "stop": g.stop, "step": g.step, "points": trace.tau_grid.len() },
                    },
                    "envelope_constant": trace.envelope_constant,
                    "max_fd_residual": trace.max_fd_residual,
                },
                "rows": rows,
            }))
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn charfn_samples(args: &CharfnArgs) -> Result<Status, CliError> {
    let g = args.mu_grid;
    let params = model(&args.model, args.tau.0)?;
    let count = ((g.stop - g.start) / g.step + 1e-9).floor() as usize;
    let samples = (0..=count)
        .map(|i| {
            let mu = g.start + i as f64 * g.step;
            let z = Complex64::new(mu, 0.0);
            let value = if params.is_stationary() {
                asymptotic_charfn(&params, z)
            } else {
                charfn(&params, z)?.value
            };
            Ok((mu, value))
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let text = match args.output.format {
        Format::Csv => {
            let mut table = Table::new(&["mu", "re", "im"]);
            for (mu, v) in &samples {
                table.push(vec![num(*mu), num(v.re), num(v.im)]);
            }
            table.to_csv()
        }
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|(mu, v)| json!({ "mu": mu, "re": v.re, "im": v.im }))
                .collect();
            pretty(&json!({
                "metadata": { "tool": tool_block(), "command": "charfn", "params": params_block(&params) },
                "samples": rows,
            }))
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn verify(args: &VerifyArgs) -> Result<Status, CliError> {
    let profile = match args.tol_profile {
        TolProfile::Default => Profile::Default,
        TolProfile::Strict => Profile::Strict,
    };
    let config = if args.suite == "all" {
        SuiteConfig::all(profile)
    } else {
        SuiteConfig::only(&args.suite, profile)
    };
    let report = run_suite(&config)?;
    let mut value = serde_json::to_value(&report).expect("reports always serialize");
    value["tool"] = tool_block();
    emit(&pretty(&value), args.out.as_deref())?;
    Ok(if report.all_passed() {
        Status::Ok
    } else {
        Status::ChecksFailed
    })
}
