//! `stackplan`: size and compare in-memory analytics clusters.
//!
//! Exit codes: 0 success, 2 bad arguments or input, 3 infeasible power
//! budget, 4 no crossover in range, 5 listen address unusable. Errors are
//! written to stderr as a JSON object with `code`, `message` and `detail`.

mod args;
mod render;

use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use stackplan_core::analysis::{energy_report, power_breakdown, run_sweep, SweepSpec, SweepVariable};
use stackplan_core::config::{ConfigDocument, Scenario};
use stackplan_core::provision::Provisioning;
use stackplan_core::query::{parse_sla_range, CrossoverQuery};
use stackplan_core::report::evaluate_request;
use stackplan_core::{Error, ErrorCode};

use args::{Cli, Command, ReportKind, ScenarioArgs, VarArg};

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_NO_CROSSOVER: u8 = 4;
const EXIT_LISTEN: u8 = 5;

/// A failure with its exit code and JSON body.
struct Failure {
    exit: u8,
    body: serde_json::Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e.code() {
            ErrorCode::BadRequest => EXIT_USAGE,
            ErrorCode::Infeasible => EXIT_INFEASIBLE,
            ErrorCode::NoCrossover => EXIT_NO_CROSSOVER,
            ErrorCode::Internal => 1,
        };
        Failure { exit, body: e.to_json() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // A closed pipe (e.g. `| head`) ends output quietly.
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure { exit: 0, body: serde_json::Value::Null };
        }
        Failure { exit: 1, body: json!({"code": "internal", "message": e.to_string(), "detail": null}) }
    }
}

fn usage(message: String, detail: serde_json::Value) -> Failure {
    Failure { exit: EXIT_USAGE, body: json!({"code": "bad_request", "message": message, "detail": detail}) }
}

fn read_config(path: &Path) -> Result<ConfigDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display()), json!({"path": path})))?;
    Ok(ConfigDocument::from_json(&text)?)
}

fn scenario(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let mut s = Scenario::presets();
    if let Some(path) = &args.config {
        s = s.apply(&read_config(path)?)?;
    }
    if args.db_size.is_some() || args.accessed.is_some() {
        let db = args.db_size.unwrap_or(s.workload.db_size);
        s = s.with_workload(db, args.accessed.unwrap_or(s.percent_accessed))?;
    }
    Ok(s)
}

fn variable(v: VarArg) -> SweepVariable {
    match v {
        VarArg::Sla => SweepVariable::Sla,
        VarArg::Budget => SweepVariable::PowerBudget,
        VarArg::DbSize => SweepVariable::DbSize,
        VarArg::Accessed => SweepVariable::PercentAccessed,
        VarArg::Fraction => SweepVariable::FractionRead,
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Evaluate(a) => {
            let s = scenario(&a.scenario)?;
            let request = Provisioning::from_parts(a.mode.into(), a.sla, a.budget, a.core_policy.into())?;
            let report = evaluate_request(&s, &a.system, &request)?;
            render::evaluation(out, &report, a.format)?;
        }
        Command::Sweep(a) => {
            let s = scenario(&a.scenario)?;
            let var = variable(a.var);
            let values = match (&a.values, &a.log_range) {
                (Some(list), _) => var.parse_list(list)?,
                (None, Some(range)) => var.parse_log_range(range)?,
                (None, None) => unreachable!("clap requires one of --values and --log-range"),
            };
            let mode = match (a.mode, var.implied_mode()) {
                (Some(m), _) => m.into(),
                (None, Some(m)) => m,
                (None, None) => {
                    return Err(usage(
                        format!("--mode is required when sweeping {}", var.as_str()),
                        json!({"field": "mode"}),
                    ))
                }
            };
            let spec = SweepSpec {
                variable: var,
                values,
                systems: a.systems.unwrap_or_else(|| s.system_names()),
                mode,
                sla: a.sla,
                power_budget: a.budget,
                core_policy: a.core_policy.into(),
            };
            let rows = run_sweep(&spec, &s.systems, &s.shared, &s.workload)?;
            render::sweep(out, &rows, a.format)?;
        }
        Command::Crossover(a) => {
            let s = scenario(&a.scenario)?;
            let query = CrossoverQuery {
                a: a.a,
                b: a.b,
                accessed_percent: a.accessed_percent,
                density_factor: a.density_factor,
                core_power_factor: a.core_power_factor,
                range: parse_sla_range(&a.range)?,
            };
            render::crossover(out, &query.run(&s)?, a.format)?;
        }
        Command::Report(a) => {
            let s = scenario(&a.scenario)?;
            match a.kind {
                ReportKind::Energy => {
                    render::energy(out, &energy_report(&s.systems, &s.shared, &s.workload)?, a.format)?
                }
                ReportKind::Breakdown => {
                    let rows = power_breakdown(&s.systems, &s.shared, &s.workload, a.budget, a.core_policy.into())?;
                    render::breakdown(out, &rows, a.format)?
                }
            }
        }
        Command::Presets(a) => {
            let text = scenario(&a.scenario)?.to_document().to_json() + "\n";
            match a.output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display()), json!({"path": path})))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Serve(a) => serve(a)?,
    }
    Ok(())
}

fn serve(a: args::ServeArgs) -> Result<(), Failure> {
    let listen_error = |message: String| Failure {
        exit: EXIT_LISTEN,
        body: json!({"code": "bad_request", "message": message, "detail": {"listen": a.listen}}),
    };
    let addr: SocketAddr =
        a.listen.parse().map_err(|e| listen_error(format!("invalid listen address {:?}: {e}", a.listen)))?;
    let mut s = Scenario::presets();
    if let Some(path) = &a.config {
        s = s.apply(&read_config(path)?)?;
    }
    let app = stackplan_api::router(stackplan_api::ServiceConfig { scenario: s, cors_origin: a.cors_origin.clone() })
        .map_err(|e| usage(e.message, e.detail))?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| listen_error(format!("cannot listen on {addr}: {e}")))?;
        let local = listener.local_addr()?;
        println!("listening on http://{local}");
        io::stdout().flush()?;
        stackplan_api::serve(listener, app).await?;
        Ok(())
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let body =
                json!({"code": "bad_request", "message": message.trim_end(), "detail": {"kind": e.kind().to_string()}});
            eprintln!("{body}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            if !f.body.is_null() {
                eprintln!("{}", f.body);
            }
            ExitCode::from(f.exit)
        }
    }
}
