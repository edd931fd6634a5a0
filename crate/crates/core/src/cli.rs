//! Command surface of the `caw` binary.
//!
//! Exit codes: 0 on success, 2 for invalid arguments, input files or
//! parameters, 3 when a solver fails (no convergence, no equilibrium,
//! infeasible setup).

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bound::caw_ceiling;
use crate::calibration::{factor_shares, table1};
use crate::ces;
use crate::error::{CawError, Result};
use crate::model::{CesParams, EquilibriumResult, PolicyLevers, Scenario, Technology};
use crate::scenario::{read_scenario, scenario_hash};
use crate::statics::{self, SolverMode, StaticsSetup};
use crate::table::{Cell, Format, OutputTable};
use crate::tolerances::SEMI_ELASTICITY_STEP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "caw", version, about = "Compute-anchored wage model")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Capped,
    Coupled,
}

impl From<ModeArg> for SolverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Capped => SolverMode::Capped,
            ModeArg::Coupled => SolverMode::Coupled,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Illustrative ceiling grid over λ and (k, r_c).
    Table1,
    /// The ceiling λ·k·(1+τ)·μ·r_c.
    #[command(allow_negative_numbers = true)]
    Bound {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        rc: f64,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
    },
    /// CES unit cost and conditional demands at given prices.
    #[command(allow_negative_numbers = true)]
    Ces {
        #[arg(long = "A", default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        wh: f64,
        #[arg(long)]
        wa: f64,
    },
    /// Solve a scenario file.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Capped)]
        mode: ModeArg,
    },
    /// Solve a scenario across a grid of one parameter.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        /// Dotted field name, e.g. technology.lambda.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Geometric instead of linear spacing.
        #[arg(long)]
        log: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Capped)]
        mode: ModeArg,
    },
    /// Ceiling path λ·k·e^{−g t}·r_c on [0, t-max].
    #[command(allow_negative_numbers = true)]
    Trajectory {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        steps: usize,
        /// Rental rate; defaults to the scenario's equilibrium rate.
        #[arg(long)]
        rc: Option<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Capped)]
        mode: ModeArg,
    },
    /// Wage pass-through: direct formula against finite difference.
    #[command(allow_negative_numbers = true)]
    Statics {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        /// Fixed effective-labor demand.
        #[arg(long, default_value_t = 1.0)]
        demand: f64,
        /// Effective agent wage; defaults to k·r_c* of the scenario.
        #[arg(long)]
        wa: Option<f64>,
        #[arg(long, default_value_t = SEMI_ELASTICITY_STEP)]
        step: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Capped)]
        mode: ModeArg,
    },
    /// Labor and compute shares, from a scenario or explicit quantities.
    #[command(allow_negative_numbers = true)]
    Shares {
        #[arg(long, value_name = "FILE")]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Capped)]
        mode: ModeArg,
        #[arg(long)]
        wh: Option<f64>,
        #[arg(long)]
        lh: Option<f64>,
        #[arg(long)]
        rc: Option<f64>,
        #[arg(long)]
        kc: Option<f64>,
        /// Output value; defaults to total two-factor payments.
        #[arg(long)]
        y: Option<f64>,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &CawError) -> i32 {
    if e.is_solver_failure() {
        EXIT_SOLVER
    } else {
        EXIT_INVALID
    }
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_stdout = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if to_stdout {
                let _ = stdout.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = stderr.write_all(text.as_bytes());
            return EXIT_INVALID;
        }
    };
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let result = execute(&cli.command).and_then(|table| {
        let text = table.emit(format);
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CawError::Io(format!("{}: {e}", path.display()))),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CawError::Io(e.to_string())),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{}: {e}", error_label());
            if let CawError::Validation(violations) = &e {
                for v in violations {
                    let _ = writeln!(stderr, "  {v}");
                }
            }
            exit_code(&e)
        }
    }
}

fn error_label() -> &'static str {
    let styled = std::env::var_os("CAW_NO_COLOR").is_none() && std::io::stderr().is_terminal();
    if styled {
        "\x1b[1;31merror\x1b[0m"
    } else {
        "error"
    }
}

fn load(path: &Path) -> Result<(Scenario, String)> {
    let s = read_scenario(path)?;
    let hash = scenario_hash(&s);
    Ok((s, hash))
}

const RESULT_HEADERS: [&str; 11] = [
    "regime",
    "w_h_star",
    "r_c_star",
    "ceiling",
    "l_h_star",
    "l_a_star",
    "k_c_star",
    "ceiling_binds",
    "w_clear",
    "labor_supplied",
    "labor_demanded",
];

fn result_cells(r: &EquilibriumResult) -> Vec<Cell> {
    vec![
        r.regime.as_str().into(),
        r.w_h_star.into(),
        r.r_c_star.into(),
        r.ceiling.into(),
        r.l_h_star.into(),
        r.l_a_star.into(),
        r.k_c_star.into(),
        r.ceiling_binds.into(),
        r.w_clear.into(),
        r.labor_supplied.into(),
        r.labor_demanded.into(),
    ]
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Capped => "capped",
        ModeArg::Coupled => "coupled",
    }
}

/// Evenly spaced grid of `steps` points from `from` to `to`.
pub fn grid(from: f64, to: f64, steps: usize, log: bool) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(CawError::invalid("steps must be ≥ 1"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CawError::invalid("grid bounds must be finite"));
    }
    if log && !(from > 0.0 && to > 0.0) {
        return Err(CawError::invalid("log grid needs positive bounds"));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                return to;
            }
            let f = i as f64 / n;
            if log {
                (from.ln() + f * (to.ln() - from.ln())).exp()
            } else {
                from + f * (to - from)
            }
        })
        .collect())
}

fn execute(cmd: &Command) -> Result<OutputTable> {
    match cmd {
        Command::Table1 => {
            let mut t = OutputTable::new(["lambda", "k", "r_c", "ceiling"], None)
                .with_meta("command", "table1");
            for row in table1() {
                for c in row {
                    t.push(vec![
                        c.lambda.into(),
                        c.k.into(),
                        c.r_c.into(),
                        c.ceiling.into(),
                    ]);
                }
            }
            Ok(t)
        }
        Command::Bound {
            lambda,
            k,
            rc,
            tau,
            mu,
        } => {
            let tech = Technology::new(*lambda, *k);
            let policy = PolicyLevers {
                tau_c: *tau,
                mu: *mu,
            };
            let mut problems = tech.validate();
            problems.retain(|v| !v.code.starts_with("technology.g"));
            problems.extend(policy.validate());
            if !problems.is_empty() {
                return Err(CawError::Validation(problems));
            }
            let ceiling = caw_ceiling(&tech, *rc, &policy)?;
            let mut t = OutputTable::new(["lambda", "k", "r_c", "tau_c", "mu", "ceiling"], None)
                .with_meta("command", "bound");
            t.push(vec![
                (*lambda).into(),
                (*k).into(),
                (*rc).into(),
                (*tau).into(),
                (*mu).into(),
                ceiling.into(),
            ]);
            Ok(t)
        }
        Command::Ces {
            a,
            alpha,
            beta,
            sigma,
            wh,
            wa,
        } => {
            let params = CesParams::new(*a, *alpha, *beta, *sigma);
            let problems = params.validate();
            if !problems.is_empty() {
                return Err(CawError::Validation(problems));
            }
            let cost = ces::unit_cost(&params, *wh, *wa)?;
            let d = ces::conditional_demands(&params, *wh, *wa)?;
            let branch = format!("{:?}", ces::branch(&params));
            let mut t = OutputTable::new(
                [
                    "A",
                    "alpha",
                    "beta",
                    "sigma",
                    "w_h",
                    "w_a",
                    "branch",
                    "unit_cost",
                    "l_h",
                    "l_a",
                ],
                None,
            )
            .with_meta("command", "ces");
            t.push(vec![
                (*a).into(),
                (*alpha).into(),
                (*beta).into(),
                (*sigma).into(),
                (*wh).into(),
                (*wa).into(),
                branch.into(),
                cost.into(),
                d.l_h.into(),
                d.l_a.into(),
            ]);
            Ok(t)
        }
        Command::Solve { scenario, mode } => {
            let (s, hash) = load(scenario)?;
            let r = SolverMode::from(*mode).solve(&s)?;
            let mut t = OutputTable::new(RESULT_HEADERS, Some(&hash))
                .with_meta("command", "solve")
                .with_meta("mode", mode_name(*mode));
            t.push(result_cells(&r));
            Ok(t)
        }
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            log,
            mode,
        } => {
            let (s, hash) = load(scenario)?;
            let values = grid(*from, *to, *steps, *log)?;
            let rows = statics::sweep(&s, param, &values, (*mode).into())?;
            let headers: Vec<&str> = std::iter::once(param.as_str())
                .chain(RESULT_HEADERS)
                .chain(["error"])
                .collect();
            let mut t = OutputTable::new(headers, Some(&hash))
                .with_meta("command", "sweep")
                .with_meta("mode", mode_name(*mode));
            for row in rows {
                let mut cells = vec![row.value.into()];
                match &row.result {
                    Ok(r) => {
                        cells.extend(result_cells(r));
                        cells.push("".into());
                    }
                    Err(e) => {
                        cells.extend(RESULT_HEADERS.iter().map(|_| Cell::Text(String::new())));
                        cells.push(e.to_string().into());
                    }
                }
                t.push(cells);
            }
            Ok(t)
        }
        Command::Trajectory {
            scenario,
            t_max,
            steps,
            rc,
            mode,
        } => {
            let (s, hash) = load(scenario)?;
            let r_c = match rc {
                Some(r) => *r,
                None => SolverMode::from(*mode).solve(&s)?.r_c_star,
            };
            let times = grid(0.0, *t_max, *steps, false)?;
            let path = statics::caw_trajectory(&s.technology, r_c, &times)?;
            let mut t = OutputTable::new(["t", "ceiling"], Some(&hash))
                .with_meta("command", "trajectory")
                .with_meta("r_c", crate::table::format_number(r_c));
            for (time, ceiling) in path {
                t.push(vec![time.into(), ceiling.into()]);
            }
            Ok(t)
        }
        Command::Statics {
            scenario,
            demand,
            wa,
            step,
            mode,
        } => {
            let (s, hash) = load(scenario)?;
            let w_a_eff = match wa {
                Some(w) => *w,
                None => s.technology.k * SolverMode::from(*mode).solve(&s)?.r_c_star,
            };
            let setup = StaticsSetup {
                ces: s.ces,
                l_eff_demand: *demand,
                labor_supply: s.labor_supply_ts,
                w_a_eff,
            };
            let point = statics::solve_statics_point(&setup, statics::STATICS_TOL)?;
            let e = statics::semi_elasticity(&setup, *step)?;
            let mut t = OutputTable::new(
                [
                    "sigma",
                    "supply_elasticity",
                    "w_a_eff",
                    "w_h",
                    "l_h",
                    "l_a",
                    "direct",
                    "fd",
                    "fd_forward",
                    "fd_backward",
                ],
                Some(&hash),
            )
            .with_meta("command", "statics")
            .with_meta("step", crate::table::format_number(*step));
            t.push(vec![
                s.ces.sigma.into(),
                s.labor_supply_ts.elasticity.into(),
                w_a_eff.into(),
                point.w_h.into(),
                point.l_h.into(),
                point.l_a.into(),
                e.direct.into(),
                e.fd.into(),
                e.fd_forward.into(),
                e.fd_backward.into(),
            ]);
            Ok(t)
        }
        Command::Shares {
            scenario,
            mode,
            wh,
            lh,
            rc,
            kc,
            y,
        } => {
            let (w_h, l_h, r_c, k_c, hash) = match scenario {
                Some(path) => {
                    let (s, hash) = load(path)?;
                    let r = SolverMode::from(*mode).solve(&s)?;
                    (r.w_h_star, r.l_h_star, r.r_c_star, r.k_c_star, Some(hash))
                }
                None => {
                    let need = |name: &str, v: &Option<f64>| {
                        v.ok_or_else(|| {
                            CawError::invalid(format!("--{name} is required without --scenario"))
                        })
                    };
                    (
                        need("wh", wh)?,
                        need("lh", lh)?,
                        need("rc", rc)?,
                        need("kc", kc)?,
                        None,
                    )
                }
            };
            let y = y.unwrap_or(w_h * l_h + r_c * k_c);
            let shares = factor_shares(w_h, l_h, r_c, k_c, y)?;
            let mut t = OutputTable::new(
                ["w_h", "l_h", "r_c", "k_c", "y", "s_labor", "s_compute"],
                hash.as_deref(),
            )
            .with_meta("command", "shares");
            t.push(vec![
                w_h.into(),
                l_h.into(),
                r_c.into(),
                k_c.into(),
                y.into(),
                shares.s_labor.into(),
                shares.s_compute.into(),
            ]);
            Ok(t)
        }
    }
}
