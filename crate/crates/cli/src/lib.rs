//! Scenario runner behind the `etk` binary. Every command returns a
//! [`Report`]: a JSON document that embeds the configuration and library
//! version, plus an optional CSV table.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use etk_core::discrimination::{binary_advantage, k_positivity_value};
use etk_core::io::{parse_json, ChannelFile, StateFile};
use etk_core::multichannel::advantage_ratio;
use etk_core::operator::{basis_vector, CMatrix, HermitianOperator};
use etk_core::quantum::{max_entangled, BipartiteState, ChannelRep};
use etk_core::robustness::RobustnessConfig;
use etk_core::schmidt::{reduction_family, sn_witness_lower_bound, SchmidtWitness};
use etk_core::tol;
use etk_core::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "etk", version, about = "Schmidt-number robustness and tailored channel discrimination")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub out: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinState {
    /// Maximally entangled state on d ⊗ d.
    Bell,
    /// `|0⟩|0⟩`.
    Product,
    /// Maximally mixed state.
    Mixed,
    /// Isotropic state with fidelity `--fidelity`.
    Isotropic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinMap {
    Identity,
    Transpose,
    Depolarizing,
    /// `(tr(X)·1 − tX)/(d − t)`.
    Reduction,
}

/// Where the input state comes from.
#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    /// JSON state file (`rows`, `cols`, `data`, `dims`).
    #[arg(long, conflicts_with = "state")]
    pub input: Option<PathBuf>,
    /// Built-in state, used when no file is given.
    #[arg(long, value_enum)]
    pub state: Option<BuiltinState>,
    /// Local dimensions `dA,dB` (or a single `d`) for built-in states.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<(usize, usize)>,
    #[arg(long, default_value_t = 0.9)]
    pub fidelity: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Oracle restarts per cutting-plane round.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// SDP gap and feasibility tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Certified interval for the Schmidt-number robustness of a state.
    Robustness {
        #[command(flatten)]
        #[serde(flatten)]
        state: StateArgs,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        #[serde(flatten)]
        search: SearchArgs,
    },
    /// Channel pair from the reduction-family map and its advantage on φ⁺_d.
    BinaryDemo {
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Weyl-conjugated channel task built from the robustness witness.
    MultichannelDemo {
        #[command(flatten)]
        #[serde(flatten)]
        state: StateArgs,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        #[serde(flatten)]
        search: SearchArgs,
    },
    /// Checks that an operator is a Schmidt-number-k witness.
    WitnessCertify {
        /// JSON matrix file holding the witness.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long)]
        k: usize,
        /// Optional state to evaluate the witness on.
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 128)]
        restarts: usize,
        /// Oracle floor below which the witness is rejected.
        #[arg(long, default_value_t = tol::WITNESS_EPS)]
        tol: f64,
    },
    /// Choi operator and structural checks of a map.
    Choi {
        /// JSON channel file (`d_in`, `d_out`, `normalization`, matrix).
        #[arg(long, conflicts_with = "map")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        map: Option<BuiltinMap>,
        #[arg(long, value_parser = parse_dims)]
        dims: Option<(usize, usize)>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
}

/// `"3"` or `"3,4"`.
pub fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split([',', 'x']).map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("`{p}` is not a positive dimension"))
    };
    match parts.as_slice() {
        [d] => num(d).map(|d| (d, d)),
        [a, b] => Ok((num(a)?, num(b)?)),
        _ => Err(format!("expected `d` or `dA,dB`, got `{s}`")),
    }
}

/// A finished command: JSON body plus an optional table for `--out csv`.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    /// Non-zero when the run completed but a certification check failed.
    pub exit: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> anyhow::Result<String> {
        match (format, &self.table) {
            (OutputFormat::Csv, Some(t)) => t.to_csv(),
            (OutputFormat::Csv, None) => bail!("this command has no tabular output"),
            (OutputFormat::Json, _) => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
        }
    }
}

/// Maps an error chain to the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::Solver { .. }) => EXIT_SOLVER,
        Some(Error::UncertifiedWitness { .. } | Error::WitnessNotBounded { .. }) => EXIT_CERTIFICATION,
        _ => EXIT_INVALID_INPUT,
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_state(args: &StateArgs) -> anyhow::Result<BipartiteState> {
    if let Some(path) = &args.input {
        let file: StateFile = parse_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(file.into_state()?);
    }
    let Some(kind) = args.state else {
        bail!(Error::InvalidParameter("give --input or --state".into()));
    };
    let (da, db) = args.dims.unwrap_or((2, 2));
    let square = || {
        if da == db {
            Ok(da)
        } else {
            Err(Error::InvalidParameter(format!("{kind:?} needs dA = dB")))
        }
    };
    Ok(match kind {
        BuiltinState::Bell => max_entangled(square()?),
        BuiltinState::Product => BipartiteState::product(&basis_vector(da, 0), &basis_vector(db, 0))?,
        BuiltinState::Mixed => BipartiteState::maximally_mixed((da, db)),
        BuiltinState::Isotropic => BipartiteState::isotropic(square()?, args.fidelity)?,
    })
}

fn config(search: &SearchArgs) -> RobustnessConfig {
    RobustnessConfig {
        restarts: search.restarts,
        seed: search.seed,
        sdp_tol: search.tol,
        ..RobustnessConfig::default()
    }
}

fn envelope(cmd: &Command, result: impl Serialize) -> anyhow::Result<Value> {
    Ok(json!({
        "version": VERSION,
        "config": cmd,
        "result": result,
    }))
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn run(cmd: &Command) -> anyhow::Result<Report> {
    match cmd {
        Command::Robustness { state, k, search } => {
            let rho = load_state(state)?;
            let cert = etk_core::robustness::robustness_bounds(&rho, *k, &config(search))?;
            let mut table = Table::new(&["k", "lower", "upper", "width", "rounds", "converged", "lower_source"]);
            table.push(vec![
                k.to_string(),
                fmt(cert.lower),
                fmt(cert.upper),
                fmt(cert.width()),
                cert.rounds.to_string(),
                cert.converged.to_string(),
                serde_json::to_value(cert.lower_source)?.as_str().unwrap_or_default().to_string(),
            ]);
            Ok(Report {
                json: envelope(cmd, &cert)?,
                table: Some(table),
                exit: EXIT_OK,
            })
        }
        Command::BinaryDemo {
            dims,
            k,
            t,
            seed,
            restarts,
        } => {
            let d = dims.0;
            if dims.0 != dims.1 {
                bail!(Error::InvalidParameter("binary-demo needs dA = dB".into()));
            }
            let (map, positivity) = reduction_family(d, *t)?;
            let channel = map.channel();
            let report = binary_advantage(&max_entangled(d), *k, &channel, *restarts, *seed)?;
            // p_guess along the isotropic family, from separable to maximally entangled.
            let mut table = Table::new(&["fidelity", "p_guess_rho", "p_guess_Sk", "margin"]);
            let mut family = Vec::new();
            for i in 0..=20 {
                let f = i as f64 / 20.0;
                let r = binary_advantage(&BipartiteState::isotropic(d, f)?, *k, &channel, *restarts, *seed)?;
                table.push(vec![fmt(f), fmt(r.p_guess_rho), fmt(r.p_guess_sk), fmt(r.margin)]);
                family.push(json!({"fidelity": f, "p_guess_rho": r.p_guess_rho, "margin": r.margin}));
            }
            let result = json!({
                "report": report,
                "positivity_level": positivity.level,
                "isotropic_family": family,
            });
            Ok(Report {
                json: envelope(cmd, result)?,
                table: Some(table),
                exit: EXIT_OK,
            })
        }
        Command::MultichannelDemo { state, k, search } => {
            let rho = load_state(state)?;
            let (ratio, cert) = advantage_ratio(&rho, *k, &config(search))?;
            let mut table = Table::new(&["d_A", "k", "c", "p_guess_rho", "bound_Sk", "ratio", "lower", "upper"]);
            table.push(vec![
                ratio.d_a.to_string(),
                k.to_string(),
                fmt(ratio.c),
                fmt(ratio.p_guess_rho),
                fmt(ratio.bound_sk),
                fmt(ratio.ratio),
                fmt(cert.lower),
                fmt(cert.upper),
            ]);
            let exit = if ratio.within_interval { EXIT_OK } else { EXIT_CERTIFICATION };
            Ok(Report {
                json: envelope(cmd, &ratio)?,
                table: Some(table),
                exit,
            })
        }
        Command::WitnessCertify {
            input,
            dims,
            k,
            rho,
            seed,
            restarts,
            tol,
        } => {
            let op: HermitianOperator =
                parse_json(&read(input)?).with_context(|| format!("parsing {}", input.display()))?;
            let witness = SchmidtWitness::certify(op, *dims, *k, *restarts, *seed, *tol)?;
            let verdict = match rho {
                Some(path) => {
                    let file: StateFile = parse_json(&read(path)?)?;
                    Some(sn_witness_lower_bound(&file.into_state()?, *k, &witness, *tol)?)
                }
                None => None,
            };
            let mut table = Table::new(&["k", "oracle_value", "detected", "expectation"]);
            table.push(vec![
                k.to_string(),
                fmt(witness.feasibility.value),
                verdict.map(|v| v.detected.to_string()).unwrap_or_default(),
                verdict.map(|v| fmt(v.expectation)).unwrap_or_default(),
            ]);
            let result = json!({"feasibility": witness.feasibility, "verdict": verdict});
            Ok(Report {
                json: envelope(cmd, result)?,
                table: Some(table),
                exit: EXIT_OK,
            })
        }
        Command::Choi {
            input,
            map,
            dims,
            t,
            seed,
            restarts,
        } => {
            let channel = load_map(input.as_deref(), *map, *dims, *t)?;
            let dmin = channel.d_in().min(channel.d_out());
            let levels: Vec<f64> = (1..=dmin)
                .map(|k| k_positivity_value(&channel, k, *restarts, *seed))
                .collect::<etk_core::Result<_>>()?;
            let positivity_level = levels.iter().take_while(|&&v| v >= -tol::WITNESS_EPS).count();
            let mut table = Table::new(&["k", "min_sr_k_expectation", "k_positive"]);
            for (i, v) in levels.iter().enumerate() {
                table.push(vec![(i + 1).to_string(), fmt(*v), (*v >= -tol::WITNESS_EPS).to_string()]);
            }
            let result = json!({
                "d_in": channel.d_in(),
                "d_out": channel.d_out(),
                "trace_preserving": channel.is_tp(),
                "unital": channel.is_unital(),
                "completely_positive": channel.is_cp(),
                "choi_min_eigenvalue": channel.choi().min_eigenvalue(),
                "k_positivity": levels,
                "positivity_level": positivity_level,
                "choi": ChannelFile::from_channel(&channel),
            });
            Ok(Report {
                json: envelope(cmd, result)?,
                table: Some(table),
                exit: EXIT_OK,
            })
        }
    }
}

fn load_map(
    input: Option<&Path>,
    map: Option<BuiltinMap>,
    dims: Option<(usize, usize)>,
    t: f64,
) -> anyhow::Result<ChannelRep> {
    if let Some(path) = input {
        let file: ChannelFile = parse_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(file.into_channel()?);
    }
    let Some(kind) = map else {
        bail!(Error::InvalidParameter("give --input or --map".into()));
    };
    let d = dims.map(|p| p.0).unwrap_or(2);
    Ok(match kind {
        BuiltinMap::Identity => ChannelRep::identity(d),
        BuiltinMap::Transpose => ChannelRep::transpose(d),
        BuiltinMap::Depolarizing => ChannelRep::depolarizing(d),
        BuiltinMap::Reduction => reduction_family(d, t)?.0.channel(),
    })
}

/// Writes a state as a JSON file understood by `--input`.
pub fn state_json(state: &BipartiteState) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from_state(state))?)
}

/// Raw matrix helper for witness files.
pub fn matrix_json(m: &CMatrix) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(&etk_core::io::MatrixFile::from_matrix(m))?)
}

/// Installs the global thread pool size from `ETK_THREADS`, if set.
pub fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("ETK_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidParameter(format!("ETK_THREADS={v} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}
