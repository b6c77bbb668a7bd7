use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use struve_subord::admissibility::evaluate_batch;
use struve_subord::analytic::{DiskGrid, NormalizedFunction};
use struve_subord::harness::{
    campaign_pretty, coefficient_table, configure_threads, run_verify, CoeffTable, Format, Report, RunConfig, Suite,
    VerificationReport, VerifyConfig,
};
use struve_subord::struve::apply_operator;
use struve_subord::subordination::{
    random_function_of_order, replay_trial, run_campaign, CampaignConfig, CampaignId, CampaignResult, ParamBox,
    TrialVerdict,
};
use struve_subord::{Error, Result};

#[derive(Parser)]
#[command(name = "struve-subord", version, about = "Struve-kernel operators, subordination checks and corollary campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel coefficients s_0..s_{order-1} with a closed-form diff column.
    Coeffs {
        #[command(flatten)]
        ac: AcArgs,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Value of S_{a,c} f at one point.
    Eval {
        #[command(flatten)]
        ac: AcArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Taylor coefficients of S_{a,c} f with the certified tail.
    Operator {
        #[command(flatten)]
        ac: AcArgs,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 32)]
        order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Identity suites; exit 1 when a tolerance is violated.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte-Carlo implication test; exit 1 when a counterexample is found.
    Campaign(CampaignArgs),
    /// Re-render a saved JSON report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate a JSON array of admissibility probes.
    Admissible {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct AcArgs {
    /// Complex parameter as "re,im" or "re".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    a: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: Complex64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FChoice {
    /// f(z) = z
    Identity,
    /// f(z) = z/(1-z), so that S f = U
    Geometric,
    /// Seeded random member of the normalized class.
    Random,
}

#[derive(Args)]
struct FArgs {
    #[arg(long = "f", value_enum, default_value = "geometric")]
    f: FChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long)]
    id: String,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = struve_subord::subordination::CAMPAIGN_ORDER)]
    order: usize,
    /// Comma-separated increasing radii in (0, 1).
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.9, 0.99, 0.999])]
    grid_radii: Vec<f64>,
    #[arg(long, default_value_t = 512)]
    angles: usize,
    /// Range of a as "lo,hi" (or one value).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    a_range: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    c_range: Option<[f64; 2]>,
    /// M (λ2 for sandwich campaigns) as "lo,hi" or one value.
    #[arg(long = "M", value_parser = parse_range)]
    m: Option<[f64; 2]>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    budget: f64,
    #[arg(long, default_value_t = 0.5)]
    decay: f64,
    /// Use f(z) = z in every trial.
    #[arg(long)]
    identity_f: bool,
    /// Rerun the single trial with this seed.
    #[arg(long)]
    replay: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected \"re,im\", got '{s}'")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_range(s: &str) -> std::result::Result<[f64; 2], String> {
    let z = parse_complex(s)?;
    Ok(if s.contains(',') { [z.re, z.im] } else { [z.re, z.re] })
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn base_config(command: &str, out: &OutArgs) -> RunConfig {
    RunConfig { output_path: out.out.clone(), format: out.format.into(), ..RunConfig::new(command) }
}

fn no_csv(command: &str) -> Error {
    Error::Config(format!("{command} has no CSV projection; use json or pretty"))
}

fn build_f(f: &FArgs, order: usize) -> Result<NormalizedFunction> {
    match f.f {
        FChoice::Identity => Ok(NormalizedFunction::identity(order)),
        FChoice::Geometric => Ok(NormalizedFunction::geometric(order)),
        FChoice::Random => random_function_of_order(1.0, 0.5, f.seed, order),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Coeffs { ac, order, out } => {
            if order == 0 {
                return Err(Error::Config("order must be at least 1".into()));
            }
            let table: CoeffTable = coefficient_table(ac.a, ac.c, order)?;
            let config = RunConfig { a: Some(ac.a), c: Some(ac.c), order, ..base_config("coeffs", &out) };
            let text = match config.format {
                Format::Json => Report::new("coeffs", config, table).to_json()?,
                Format::Csv => table.to_csv()?,
                Format::Pretty => table.pretty(),
            };
            emit(&text, &out.out)?;
            Ok(0)
        }
        Command::Eval { ac, z, f, order, out } => {
            let mut config = RunConfig { a: Some(ac.a), c: Some(ac.c), order, seed: f.seed, ..base_config("eval", &out) };
            config.validate()?;
            config.extra.insert("f".into(), json!(f.f));
            config.extra.insert("z".into(), json!([z.re, z.im]));
            let series = apply_operator(ac.a, ac.c, &build_f(&f, order)?)?;
            let value = series.evaluate(z)?;
            let tail = series.tail_at(z.norm());
            let text = match config.format {
                Format::Json => Report::new("eval", config, json!({ "value": [value.re, value.im], "tail_bound": tail })).to_json()?,
                Format::Pretty => format!("S f({}{:+}i) = {} {:+}i  (tail <= {tail:.3e})\n", z.re, z.im, value.re, value.im),
                Format::Csv => return Err(no_csv("eval")),
            };
            emit(&text, &out.out)?;
            Ok(0)
        }
        Command::Operator { ac, f, order, out } => {
            let mut config = RunConfig { a: Some(ac.a), c: Some(ac.c), order, seed: f.seed, ..base_config("operator", &out) };
            config.validate()?;
            config.extra.insert("f".into(), json!(f.f));
            let series = apply_operator(ac.a, ac.c, &build_f(&f, order)?)?.to_json()?;
            let text = match config.format {
                Format::Json => Report::new("operator", config, series).to_json()?,
                Format::Pretty => {
                    let mut s: String = series
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(n, c)| format!("{n:>4}  {:>24.17e}  {:>24.17e}\n", c.re, c.im))
                        .collect();
                    s.push_str(&format!("tail <= {:.3e} on |z| <= {}\n", series.tail_bound, series.r_cert));
                    s
                }
                Format::Csv => return Err(no_csv("operator")),
            };
            emit(&text, &out.out)?;
            Ok(0)
        }
        Command::Verify { suite, trials, seed, order, out } => {
            let suite: Suite = suite.parse()?;
            let mut config = RunConfig { trials, seed, order, ..base_config("verify", &out) };
            config.extra.insert("suite".into(), json!(suite));
            let report = run_verify(suite, &VerifyConfig { trials, seed, order })?;
            let code = if report.passed { 0 } else { 1 };
            let text = match config.format {
                Format::Json => Report::new("verify", config, report).to_json()?,
                Format::Pretty => report.pretty(),
                Format::Csv => return Err(no_csv("verify")),
            };
            emit(&text, &out.out)?;
            Ok(code)
        }
        Command::Campaign(args) => campaign(args),
        Command::Report { input, out } => {
            let raw = fs::read_to_string(&input)?;
            let value: Value = serde_json::from_str(&raw)?;
            let schema = value.get("schema").and_then(Value::as_str).unwrap_or_default().to_string();
            let format: Format = out.format.into();
            let text = match (schema.split('/').nth(1), format) {
                (_, Format::Json) => raw,
                (Some("campaign"), Format::Pretty) => {
                    campaign_pretty(&serde_json::from_value::<Report<CampaignResult>>(value)?.result)
                }
                (Some("campaign"), Format::Csv) => {
                    let mut buf = Vec::new();
                    serde_json::from_value::<Report<CampaignResult>>(value)?.result.write_csv(&mut buf)?;
                    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))?
                }
                (Some("verify"), Format::Pretty) => serde_json::from_value::<Report<VerificationReport>>(value)?.result.pretty(),
                (Some("coeffs"), Format::Pretty) => serde_json::from_value::<Report<CoeffTable>>(value)?.result.pretty(),
                (Some("coeffs"), Format::Csv) => serde_json::from_value::<Report<CoeffTable>>(value)?.result.to_csv()?,
                _ => return Err(Error::Config(format!("cannot render schema '{schema}' as {format:?}"))),
            };
            emit(&text, &out.out)?;
            Ok(0)
        }
        Command::Admissible { input, out } => {
            let raw = fs::read_to_string(&input)?;
            let records = evaluate_batch(&raw)?;
            let mut config = base_config("admissible", &out);
            config.extra.insert("input".into(), json!(input));
            let text = match config.format {
                Format::Json => Report::new("admissible", config, records).to_json()?,
                Format::Pretty => records
                    .iter()
                    .map(|r| format!("{:?}: passes = {}, slack = {:?}\n", r.class_id, r.passes, r.slack))
                    .collect(),
                Format::Csv => return Err(no_csv("admissible")),
            };
            emit(&text, &out.out)?;
            Ok(0)
        }
    }
}

fn campaign(args: CampaignArgs) -> Result<u8> {
    let id: CampaignId = args.id.parse()?;
    let defaults = ParamBox::default_for(id);
    let param_box = ParamBox {
        a: args.a_range.unwrap_or(defaults.a),
        c: args.c_range.unwrap_or(defaults.c),
        m: args.m.unwrap_or(defaults.m),
        k: args.k.unwrap_or(defaults.k),
    };
    let grid = DiskGrid::new(args.grid_radii.clone(), args.angles)?;
    let cfg = CampaignConfig {
        id,
        trials: args.trials,
        grid: grid.clone(),
        param_box: param_box.clone(),
        seed: args.seed,
        order: args.order,
        budget: args.budget,
        decay: args.decay,
        identity_f: args.identity_f,
    };
    let mut config = RunConfig {
        param_box: Some(param_box),
        grid,
        trials: args.trials,
        seed: args.seed,
        order: args.order,
        ..base_config("campaign", &args.out)
    };
    config.extra.insert("id".into(), json!(id));
    config.extra.insert("budget".into(), json!(args.budget));
    config.extra.insert("decay".into(), json!(args.decay));
    config.extra.insert("identity_f".into(), json!(args.identity_f));

    if let Some(seed) = args.replay {
        config.extra.insert("replay".into(), json!(seed));
        let record = replay_trial(&cfg, seed)?;
        let code = if record.verdict == TrialVerdict::Counterexample { 1 } else { 0 };
        let text = match config.format {
            Format::Json => Report::new("trial", config, record).to_json()?,
            Format::Pretty => format!("{record:#?}\n"),
            Format::Csv => return Err(no_csv("campaign --replay")),
        };
        emit(&text, &args.out.out)?;
        return Ok(code);
    }

    let result = run_campaign(&cfg)?;
    let code = if result.counterexamples.is_empty() { 0 } else { 1 };
    let text = match config.format {
        Format::Json => Report::new("campaign", config, &result).to_json()?,
        Format::Pretty => campaign_pretty(&result),
        Format::Csv => {
            let mut buf = Vec::new();
            result.write_csv(&mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))?
        }
    };
    emit(&text, &args.out.out)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
