use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ensdist::classical::{
    abc_channel, mutual_information, pairwise_distribution_overlap, primed_channel, total_variation,
    DiscreteChannel,
};
use ensdist::deform::{
    deform_theorem2, extract_multiplier, planar_boundary_probe, search_deformation, spin_flip_pair,
    DeformKind, SearchConfig, Theorem2Config,
};
use ensdist::ensemble::gram_to_ensemble;
use ensdist::entropy::{ensemble_entropy, linearized_entropy, shannon_entropy};
use ensdist::numerics::eigvalsh;
use ensdist::triples::{construct_triple, require_xi_max, xi_sweep, TripleSpec};
use ensdist::{Base, Ensemble, GramMatrix};
use serde_json::json;

use crate::error::CliError;
use crate::formats::{read_json, to_json, EnsembleFile, GramFile, ReportFile};
use crate::number::csv_row;

pub const SWEEP_HEADER: &str = "xi,lambda1,lambda2,lambda3,entropy_nats,trace_g3";
pub const PROBE_HEADER: &str = "epsilon,direction,entropy_delta,delta_a12,delta_a23,delta_a31";

#[derive(Debug, Parser)]
#[command(name = "ensdist", version, about = "Entropy and overlap analysis of pure-state ensembles")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every command.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Allowed deviation from unit norm and unit probability sum in input files.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub parse_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Nats,
    Bits,
}

impl From<BaseArg> for Base {
    fn from(b: BaseArg) -> Base {
        match b {
            BaseArg::Nats => Base::Nats,
            BaseArg::Bits => Base::Bits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    D1,
    D2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Theorem2,
    Search,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy, linearized entropy, Shannon entropy and spectrum of an ensemble.
    Entropy {
        ensemble: PathBuf,
        #[arg(long, value_enum, default_value_t = BaseArg::Nats)]
        base: BaseArg,
    },
    /// Spectrum and entropy along ξ ∈ [0, ξmax] at fixed overlaps.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        overlaps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0 / 3.0; 3])]
        probs: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deform a three-state ensemble so overlaps and entropy move together.
    Deform {
        ensemble: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Theorem2)]
        method: MethodArg,
        /// Entropy evaluations for the search method.
        #[arg(long, default_value_t = SearchConfig::default().budget)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Positivity and spectrum of a Gram matrix, optionally against a second one.
    Check {
        gram: PathBuf,
        /// Second Gram matrix; reports the multiplier taking the first to it.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Build the canonical three-state ensemble for given overlaps and phase.
    Construct {
        #[arg(long, value_delimiter = ',', required = true)]
        overlaps: Vec<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0 / 3.0; 3])]
        probs: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutual information and overlaps of the two three-signal channels.
    Classical {
        #[arg(long, value_enum, default_value_t = BaseArg::Bits)]
        base: BaseArg,
    },
    /// Compare {|n⟩|n⟩} with {|n⟩|-n⟩} for the given Bloch vectors.
    Spinflip {
        /// Semicolon-separated unit vectors, e.g. "0,0,1;1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        vectors: String,
        /// Priors; uniform when absent.
        #[arg(long, value_delimiter = ',')]
        probs: Option<Vec<f64>>,
    },
    /// Entropy change for random out-of-plane moves of a planar triple.
    Probe {
        #[arg(long, value_delimiter = ',', required = true)]
        overlaps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0 / 3.0; 3])]
        probs: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-3])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        directions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn triple(values: &[f64], name: &str) -> Result<[f64; 3], CliError> {
    <[f64; 3]>::try_from(values)
        .map_err(|_| CliError::parse(format!("--{name} needs exactly 3 values")))
}

fn load_ensemble(path: &Path, config: &RunConfig) -> Result<Ensemble, CliError> {
    let file: EnsembleFile = read_json(path)?;
    file.to_ensemble(config.parse_tol)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_json(value: &serde_json::Value, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))?;
    Ok(())
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.parse_tol > 0.0) {
            return Err(CliError::parse("--parse-tol must be positive"));
        }
        Ok(())
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let config = &cli.config;
    config.validate()?;
    match &cli.command {
        Command::Entropy { ensemble, base } => cmd_entropy(ensemble, (*base).into(), config, out),
        Command::Sweep {
            overlaps,
            probs,
            steps,
            out: path,
        } => cmd_sweep(triple(overlaps, "overlaps")?, triple(probs, "probs")?, *steps, path.as_deref(), out),
        Command::Deform {
            ensemble,
            kind,
            method,
            budget,
            out: path,
        } => cmd_deform(ensemble, *kind, *method, *budget, path.as_deref(), config, out),
        Command::Check { gram, against } => cmd_check(gram, against.as_deref(), out),
        Command::Construct {
            overlaps,
            xi,
            probs,
            out: path,
        } => cmd_construct(triple(overlaps, "overlaps")?, *xi, triple(probs, "probs")?, path.as_deref(), out),
        Command::Classical { base } => cmd_classical((*base).into(), out),
        Command::Spinflip { vectors, probs } => cmd_spinflip(vectors, probs.as_deref(), out),
        Command::Probe {
            overlaps,
            probs,
            eps,
            directions,
            out: path,
        } => cmd_probe(
            triple(overlaps, "overlaps")?,
            triple(probs, "probs")?,
            eps,
            *directions,
            config.seed,
            path.as_deref(),
            out,
        ),
    }
}

pub fn cmd_entropy(path: &Path, base: Base, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let e = load_ensemble(path, config)?;
    let s = ensemble_entropy(&e, base);
    let h = shannon_entropy(e.probs(), base).map_err(|err| CliError::parse(err.to_string()))?;
    let eigenvalues = if e.len() <= e.dim() {
        e.gram_matrix().as_hermitian().eigenvalues()
    } else {
        eigvalsh(&e.density_matrix())
    };
    print_json(
        &json!({
            "entropy": s.value(),
            "base": base.as_str(),
            "s_lin": linearized_entropy(&e),
            "shannon": h.value(),
            "eigenvalues": eigenvalues,
        }),
        out,
    )
}

pub fn cmd_sweep(
    overlaps: [f64; 3],
    probs: [f64; 3],
    steps: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let xmax = require_xi_max(overlaps)?;
    let points = xi_sweep(overlaps, probs, steps)?;
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for p in &points {
        let [l1, l2, l3] = p.eigenvalues;
        csv.push_str(&csv_row(&[p.xi, l1, l2, l3, p.entropy.nats(), p.trace_g3]));
        csv.push('\n');
    }
    write_output(path, &csv, out)?;
    if path.is_some() {
        print_json(
            &json!({
                "xi_max": xmax,
                "steps": steps,
                "entropy_at_zero": points[0].entropy.nats(),
                "entropy_at_xi_max": points[points.len() - 1].entropy.nats(),
            }),
            out,
        )?;
    }
    Ok(())
}

pub fn cmd_deform(
    path: &Path,
    kind: KindArg,
    method: MethodArg,
    budget: usize,
    report_path: Option<&Path>,
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let e = load_ensemble(path, config)?;
    let kind = match kind {
        KindArg::D1 => DeformKind::D1,
        KindArg::D2 => DeformKind::D2,
    };
    let report = match method {
        MethodArg::Theorem2 => deform_theorem2(&e, kind, &Theorem2Config::default())?,
        MethodArg::Search => {
            let search = SearchConfig {
                budget,
                seed: config.seed,
                ..SearchConfig::default()
            };
            search_deformation(&e, kind, &search)?
        }
    };
    let file = ReportFile::new(&report, config.seed);
    write_output(report_path, &to_json(&file), out)?;
    if report_path.is_some() {
        print_json(
            &json!({
                "kind": file.kind,
                "method": file.method,
                "entropy_before": file.entropy_before,
                "entropy_after": file.entropy_after,
            }),
            out,
        )?;
    }
    Ok(())
}

fn describe_gram(g: &GramMatrix) -> String {
    let n = g.dim();
    let h = g.as_hermitian();
    let orthogonal = (0..n).all(|i| (0..n).all(|j| i == j || h[(i, j)].norm() < 1e-12));
    let rank = h.eigenvalues().iter().filter(|&&l| l > 1e-10).count();
    if orthogonal {
        format!("positive, ensemble of {n} orthonormal states")
    } else {
        format!("positive, ensemble of {n} states spanning {rank} dimensions")
    }
}

pub fn cmd_check(path: &Path, against: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let load = |p: &Path| -> Result<GramMatrix, CliError> {
        let h = read_json::<GramFile>(p)?.to_hermitian()?;
        GramMatrix::new(h).map_err(|e| CliError::from(e).with_context(p))
    };
    let g = load(path)?;
    let recovered = gram_to_ensemble(g.as_hermitian())?;
    let mut report = json!({
        "positive": true,
        "verdict": describe_gram(&g),
        "min_eigenvalue": g.as_hermitian().min_eigenvalue(),
        "eigenvalues": g.as_hermitian().eigenvalues(),
        "probs": recovered.probs(),
    });
    if let Some(other) = against {
        let g2 = load(other)?;
        let r = extract_multiplier(&g, &g2)?;
        report["multiplier_eigenvalues"] = json!(r.eigenvalues());
        report["multiplier_min_eigenvalue"] = json!(r.min_eigenvalue());
    }
    print_json(&report, out)
}

pub fn cmd_construct(
    overlaps: [f64; 3],
    xi: f64,
    probs: [f64; 3],
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let e = construct_triple(&TripleSpec::new(overlaps, xi, probs))?;
    write_output(path, &to_json(&EnsembleFile::from_ensemble(&e)), out)
}

fn channel_summary(name: &str, ch: &DiscreteChannel, base: Base) -> serde_json::Value {
    let n = ch.len();
    let table = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
    };
    json!({
        "name": name,
        "signals": ch.labels(),
        "mutual_information": mutual_information(ch, base).value(),
        "overlaps": table(&|i, j| pairwise_distribution_overlap(ch, i, j).expect("index in range")),
        "total_variation": table(&|i, j| total_variation(ch, i, j).expect("index in range")),
    })
}

pub fn cmd_classical(base: Base, out: &mut dyn Write) -> Result<(), CliError> {
    print_json(
        &json!({
            "base": base.as_str(),
            "channels": [
                channel_summary("ABC", &abc_channel(), base),
                channel_summary("A'B'C'", &primed_channel(), base),
            ],
        }),
        out,
    )
}

fn parse_vectors(text: &str) -> Result<Vec<[f64; 3]>, CliError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|chunk| {
            let values: Result<Vec<f64>, _> = chunk.split(',').map(|v| v.trim().parse::<f64>()).collect();
            let values = values.map_err(|e| CliError::parse(format!("vector \"{chunk}\": {e}")))?;
            <[f64; 3]>::try_from(values.as_slice())
                .map_err(|_| CliError::parse(format!("vector \"{chunk}\" needs 3 components")))
        })
        .collect()
}

pub fn cmd_spinflip(vectors: &str, probs: Option<&[f64]>, out: &mut dyn Write) -> Result<(), CliError> {
    let vs = parse_vectors(vectors)?;
    if vs.is_empty() {
        return Err(CliError::parse("no vectors given"));
    }
    let probs = probs.map_or_else(|| vec![1.0 / vs.len() as f64; vs.len()], <[f64]>::to_vec);
    let (parallel, anti) = spin_flip_pair(&vs, &probs)?;
    let (op, oa) = (parallel.pairwise_overlaps(), anti.pairwise_overlaps());
    let max_difference = op
        .upper_pairs()
        .map(|(i, j, x)| (x - oa.get(i, j)).abs())
        .fold(0.0, f64::max);
    let rho_p = eigvalsh(&parallel.density_matrix());
    let rho_a = eigvalsh(&anti.density_matrix());
    print_json(
        &json!({
            "parallel": {
                "entropy_nats": ensemble_entropy(&parallel, Base::Nats).nats(),
                "density_eigenvalues": rho_p,
            },
            "antiparallel": {
                "entropy_nats": ensemble_entropy(&anti, Base::Nats).nats(),
                "density_eigenvalues": rho_a,
            },
            "overlaps": op.to_rows(),
            "max_overlap_difference": max_difference,
        }),
        out,
    )
}

pub fn cmd_probe(
    overlaps: [f64; 3],
    probs: [f64; 3],
    eps: &[f64],
    directions: usize,
    seed: u64,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let xmax = require_xi_max(overlaps)?;
    let rows = planar_boundary_probe(&TripleSpec::new(overlaps, xmax, probs), eps, directions, seed)?;
    let mut csv = String::from(PROBE_HEADER);
    csv.push('\n');
    for r in &rows {
        let [d12, d23, d31] = r.overlap_deltas;
        csv.push_str(&csv_row(&[r.epsilon, r.direction as f64, r.entropy_delta, d12, d23, d31]));
        csv.push('\n');
    }
    write_output(path, &csv, out)?;
    if path.is_some() {
        let positive = rows.iter().filter(|r| r.entropy_delta > 0.0).count();
        print_json(
            &json!({ "xi_max": xmax, "rows": rows.len(), "entropy_increased": positive }),
            out,
        )?;
    }
    Ok(())
}
