//! `secrelay` command line.
//!
//! Exit status: 0 on success, 1 on domain or I/O errors, 2 on usage errors.
//! Flags given on the command line override values from `--config`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use secrelay_core::{
    allocate_dc, allocate_rc, classify, decide_subcarrier, effective_rate_cases, generate_channel,
    link_rates, p_threshold, rc_feasible_with, rho, rho_alpha, rho_high, rho_low, secure_rate, FadingConfig,
    FeasibilityRule, ModeGains, Policy, PowerPair, SubcarrierGains, Threshold,
};

use crate::error::{Error, Result};
use crate::experiments::{
    run_in_pool, run_mode_gain, run_relay_sweep, run_utility_region, threads_from_env, ExperimentConfig,
    Feasibility,
};
use crate::output::{fmt_num, write_output, CsvTable};
use crate::wire::{channel_to_json, read_channel, read_geometry, read_json};

#[derive(Debug, Parser)]
#[command(
    name = "secrelay",
    version,
    about = "Secure rates, subcarrier allocation and RC/DC mode selection for DF relay OFDMA with untrusted users"
)]
pub struct Cli {
    /// Print progress and summaries on standard error.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Link, effective and secure rates of every user on every subcarrier.
    Rates(RatesArgs),
    /// DC and RC main user, eavesdropper and RC feasibility per subcarrier.
    Allocate(AllocateArgs),
    /// Mode thresholds, class and chosen mode per subcarrier.
    ModeSelect(ModeSelectArgs),
    /// Run one of the Monte-Carlo experiments.
    Experiment(ExperimentArgs),
    /// Draw a channel realization for a geometry file.
    Channel(ChannelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    AllUsers,
    MainUser,
}

impl From<RuleArg> for FeasibilityRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::AllUsers => FeasibilityRule::AllUsers,
            RuleArg::MainUser => FeasibilityRule::MainUser,
        }
    }
}

impl From<RuleArg> for Feasibility {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::AllUsers => Feasibility::AllUsers,
            RuleArg::MainUser => Feasibility::MainUser,
        }
    }
}

fn number(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must be positive"))
    }
}

fn non_negative(s: &str) -> std::result::Result<f64, String> {
    let v = number(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must not be negative"))
    }
}

#[derive(Debug, Args)]
pub struct ChannelInput {
    /// Channel realization JSON.
    #[arg(long)]
    pub channel: PathBuf,

    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub input: ChannelInput,

    /// Source power per subcarrier.
    #[arg(long, value_parser = non_negative, allow_negative_numbers = true)]
    pub ps: f64,

    /// Relay power per subcarrier.
    #[arg(long, value_parser = non_negative, allow_negative_numbers = true)]
    pub pr: f64,
}

#[derive(Debug, Args)]
pub struct AllocateArgs {
    #[command(flatten)]
    pub input: ChannelInput,

    /// Source power per subcarrier.
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    pub ps: f64,

    /// Relay power for the RC check; defaults to `ps · Δ` of the RC main user.
    #[arg(long, value_parser = non_negative, allow_negative_numbers = true)]
    pub pr: Option<f64>,

    #[arg(long, value_enum, default_value = "main-user")]
    pub feasibility: RuleArg,
}

#[derive(Debug, Args)]
#[group(id = "power", required = true, multiple = false, args = ["ps", "alpha"])]
pub struct ModeSelectArgs {
    #[command(flatten)]
    pub input: ChannelInput,

    /// Source power per subcarrier; mode chosen by direct rate comparison.
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    pub ps: Option<f64>,

    /// Satisfaction level; mode chosen by the power-free threshold.
    #[arg(long, value_parser = non_negative, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    #[arg(long, value_enum, default_value = "main-user")]
    pub feasibility: RuleArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    RelaySweep,
    ModeGain,
    UtilityRegion,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub kind: ExperimentKind,

    /// Experiment configuration JSON; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,

    /// Number of subcarriers N.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub subcarriers: Option<u64>,

    /// Number of users M.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub users: Option<u64>,

    /// Comma-separated satisfaction levels (relay-sweep).
    #[arg(long, value_delimiter = ',', value_parser = non_negative, allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,

    /// Per-subcarrier source power (utility-region).
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    pub ps: Option<f64>,

    /// Comma-separated sweep axis: relay x positions (relay-sweep) or total
    /// source powers (mode-gain).
    #[arg(long, value_delimiter = ',', value_parser = number, allow_negative_numbers = true)]
    pub grid: Option<Vec<f64>>,

    /// Sampled user locations (utility-region).
    #[arg(long)]
    pub locations: Option<usize>,

    #[arg(long, value_enum)]
    pub feasibility: Option<RuleArg>,

    /// Output CSV; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Geometry JSON with `source`, `relay` and `users` as `[x, y]` pairs.
    #[arg(long)]
    pub geometry: PathBuf,

    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub subcarriers: u64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Path-loss exponent.
    #[arg(long, default_value_t = 3.0, value_parser = non_negative, allow_negative_numbers = true)]
    pub eta: f64,

    #[arg(long, default_value_t = 1.0, value_parser = positive, allow_negative_numbers = true)]
    pub sigma2: f64,

    /// Output JSON; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn main() -> ExitCode {
    ExitCode::from(execute(std::env::args_os()))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn execute<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Rates(a) => write_table(a.input.output.as_deref(), &rates_table(a)?),
        Command::Allocate(a) => write_table(a.input.output.as_deref(), &allocate_table(a)?),
        Command::ModeSelect(a) => write_table(a.input.output.as_deref(), &mode_select_table(a)?),
        Command::Experiment(a) => experiment(a, cli.verbose),
        Command::Channel(a) => channel(a),
    }
}

fn write_table(path: Option<&Path>, table: &CsvTable) -> Result<()> {
    write_output(path, &table.render())
}

fn rates_table(a: &RatesArgs) -> Result<CsvTable> {
    let ch = read_channel(&a.input.channel)?;
    let power = PowerPair::new(a.ps, a.pr);
    let sigma2 = ch.noise_power();
    let mut t = CsvTable::new(&[
        "n",
        "user",
        "r_sm",
        "r_sr",
        "r_srm",
        "rate",
        "branch",
        "secure_rate",
    ]);
    t.meta("ps", fmt_num(a.ps)).meta("pr", fmt_num(a.pr));
    for (n, sub) in ch.subcarriers().enumerate() {
        let per_user: Vec<_> = (0..sub.num_users())
            .map(|m| {
                let g = sub.user(m);
                (
                    link_rates(power, g, sigma2),
                    effective_rate_cases(power, g, sigma2),
                )
            })
            .collect();
        let rates: Vec<f64> = per_user.iter().map(|(_, (r, _))| *r).collect();
        for (m, (links, (rate, branch))) in per_user.iter().enumerate() {
            t.push(vec![
                n.to_string(),
                m.to_string(),
                fmt_num(links.direct),
                fmt_num(links.source_relay),
                fmt_num(links.combined),
                fmt_num(*rate),
                branch.as_str().to_owned(),
                fmt_num(secure_rate(&rates, m)?),
            ]);
        }
    }
    Ok(t)
}

fn allocate_table(a: &AllocateArgs) -> Result<CsvTable> {
    let ch = read_channel(&a.input.channel)?;
    let rule = FeasibilityRule::from(a.feasibility);
    let mut t = CsvTable::new(&["n", "mode", "main", "eav", "feasible", "reason"]);
    t.meta("ps", fmt_num(a.ps)).meta("feasibility", rule.as_str());
    for (n, sub) in ch.subcarriers().enumerate() {
        let dc = allocate_dc(sub.source_user);
        t.push(vec![
            n.to_string(),
            dc.mode.as_str().to_owned(),
            dc.main_user.to_string(),
            dc.eavesdropper.to_string(),
            dc.feasible.to_string(),
            if dc.feasible { "OK" } else { "NO_DIRECT_ADVANTAGE" }.to_owned(),
        ]);
        let rc = allocate_rc(&sub);
        let pr = a.pr.unwrap_or(a.ps * sub.rsp_ratio(rc.main_user));
        let status = rc_feasible_with(&sub, PowerPair::new(a.ps, pr), rule);
        t.push(vec![
            n.to_string(),
            rc.mode.as_str().to_owned(),
            rc.main_user.to_string(),
            rc.eavesdropper.to_string(),
            status.is_ok().to_string(),
            status.as_str().to_owned(),
        ]);
    }
    Ok(t)
}

/// `rho` and `rho_l` print the exclusive-DC marker when their denominator is
/// not positive; `rho_h` prints `inf`.
fn fmt_threshold(t: Threshold, unbounded: &str) -> String {
    match t {
        Threshold::Finite(v) => fmt_num(v),
        Threshold::Unbounded => unbounded.to_owned(),
    }
}

const NOT_APPLICABLE: &str = "NA";
const EXCLUSIVE_DC: &str = "EXCLUSIVE_DC";

fn mode_select_row(n: usize, sub: &SubcarrierGains<'_>, a: &ModeSelectArgs) -> Result<Vec<String>> {
    let rule = FeasibilityRule::from(a.feasibility);
    let sigma2 = sub.noise_power;
    let policy = match (a.ps, a.alpha) {
        (Some(p_source), _) => Policy::Optimal { p_source },
        (None, Some(alpha)) => Policy::Satisfaction { alpha },
        (None, None) => unreachable!("clap requires one of --ps and --alpha"),
    };
    let d = decide_subcarrier(sub, policy, rule);
    let mut row = vec![n.to_string()];
    match ModeGains::from_subcarrier(sub) {
        Some(g) => {
            let rho_col = match policy {
                Policy::Satisfaction { alpha } => rho_alpha(alpha, &g),
                _ => rho(d.power.source, &g, sigma2)?,
            };
            let p_th = p_threshold(&g, sigma2)?;
            row.extend([
                classify(&g).as_str().to_owned(),
                fmt_threshold(rho_low(&g), EXCLUSIVE_DC),
                fmt_threshold(rho_col, EXCLUSIVE_DC),
                fmt_threshold(rho_high(&g), "inf"),
                p_th.reported.map_or_else(|| "none".to_owned(), fmt_num),
            ]);
        }
        None => row.extend(std::iter::repeat_n(NOT_APPLICABLE.to_owned(), 5)),
    }
    row.extend([
        d.assignment.as_str().to_owned(),
        fmt_num(d.rate_rc),
        fmt_num(d.rate_dc),
    ]);
    Ok(row)
}

fn mode_select_table(a: &ModeSelectArgs) -> Result<CsvTable> {
    let ch = read_channel(&a.input.channel)?;
    let mut t = CsvTable::new(&[
        "n", "class", "rho_l", "rho", "rho_h", "p_th", "mode", "rate_rc", "rate_dc",
    ]);
    match (a.ps, a.alpha) {
        (Some(ps), _) => t.meta("ps", fmt_num(ps)),
        (_, Some(alpha)) => t.meta("alpha", fmt_num(alpha)),
        _ => &mut t,
    };
    t.meta("feasibility", FeasibilityRule::from(a.feasibility).as_str());
    for (n, sub) in ch.subcarriers().enumerate() {
        t.push(mode_select_row(n, &sub, a)?);
    }
    Ok(t)
}

fn resolve_config(a: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut c: ExperimentConfig = match &a.config {
        Some(path) => read_json(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = a.seed {
        c.master_seed = seed;
    }
    if let Some(trials) = a.trials {
        c.trials = Some(trials as usize);
    }
    if let Some(n) = a.subcarriers {
        c.num_subcarriers = n as usize;
    }
    if let Some(m) = a.users {
        c.num_users = m as usize;
    }
    if let Some(alpha) = &a.alpha {
        c.relay_sweep.alpha = alpha.clone();
    }
    if let Some(ps) = a.ps {
        c.utility_region.p_source = ps;
    }
    if let Some(grid) = &a.grid {
        match a.kind {
            ExperimentKind::RelaySweep => c.relay_sweep.relay_x = grid.clone(),
            ExperimentKind::ModeGain => c.mode_gain.total_power = grid.clone(),
            ExperimentKind::UtilityRegion => {
                return Err(Error::Config("--grid does not apply to utility-region".into()))
            }
        }
    }
    if let Some(locations) = a.locations {
        c.utility_region.locations = locations;
    }
    if let Some(rule) = a.feasibility {
        c.feasibility = rule.into();
    }
    c.validate()?;
    Ok(c)
}

fn experiment(a: &ExperimentArgs, verbose: u8) -> Result<()> {
    let config = resolve_config(a)?;
    let threads = threads_from_env()?;
    let started = Instant::now();
    let table = run_in_pool(threads, || -> Result<CsvTable> {
        Ok(match a.kind {
            ExperimentKind::RelaySweep => run_relay_sweep(&config)?.to_csv(),
            ExperimentKind::ModeGain => run_mode_gain(&config)?.to_csv(),
            ExperimentKind::UtilityRegion => {
                let r = run_utility_region(&config)?;
                if verbose > 0 {
                    let s = r.summarize(0.25, 1.5);
                    eprintln!(
                        "near relay {:.3}%  far {:.3}%  toward source {:.3}%  away {:.3}%",
                        s.near.mean, s.far.mean, s.toward_source.mean, s.away_from_source.mean
                    );
                }
                r.to_csv()
            }
        })
    })??;
    if verbose > 0 {
        eprintln!(
            "{} rows in {:.2} s, config hash {}",
            table.rows().len(),
            started.elapsed().as_secs_f64(),
            config.hash()
        );
    }
    write_table(a.output.as_deref(), &table)
}

fn channel(a: &ChannelArgs) -> Result<()> {
    let geometry = read_geometry(&a.geometry)?;
    let fading = FadingConfig {
        path_loss_exponent: a.eta,
        noise_power: a.sigma2,
        num_subcarriers: a.subcarriers as usize,
        seed: a.seed,
    };
    let ch = generate_channel(&geometry, &fading)?;
    write_output(a.output.as_deref(), &channel_to_json(&ch))
}
