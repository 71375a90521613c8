use std::path::PathBuf;
use std::process::ExitCode;

use attrcomm::fixtures::{generate, karate, SyntheticSpec};
use attrcomm::pipeline::{self, Mode, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "attrcomm",
    version,
    about = "Text- and sentiment-weighted community detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the graph, detect communities for each k and write reports.
    Run(RunArgs),
    /// Run weighted and structural modes side by side.
    Compare(RunArgs),
    /// Write a bundled or synthetic dataset.
    Generate(GenerateArgs),
    /// Score an existing partition on an exported graph.
    Score(ScoreArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with any of the options below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Reuse an exported graph.csv instead of processing texts.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Center counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Share of content similarity in the fused weight.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Decimal places in exported matrices.
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long)]
    no_matrices: bool,
    /// Texts are already segmented into tokens.
    #[arg(long)]
    pretokenized: bool,
    #[arg(long)]
    token_delim: Option<char>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Weighted,
    Structural,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, pipeline::PipelineError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        c.corpus = self.corpus.or(c.corpus);
        c.edges = self.edges.or(c.edges);
        c.lexicon = self.lexicon.or(c.lexicon);
        c.graph = self.graph.or(c.graph);
        if let Some(k) = self.k {
            c.k = k;
        }
        if let Some(alpha) = self.alpha {
            c.alpha = alpha;
        }
        if let Some(mode) = self.mode {
            c.mode = match mode {
                ModeArg::Weighted => Mode::Weighted,
                ModeArg::Structural => Mode::Structural,
            };
        }
        if let Some(out) = self.out {
            c.out = out;
        }
        if let Some(p) = self.precision {
            c.precision = p;
        }
        c.no_matrices |= self.no_matrices;
        c.tokenizer.pretokenized |= self.pretokenized;
        if let Some(d) = self.token_delim {
            c.tokenizer.delimiter = d;
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Synthetic,
    Karate,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "synthetic")]
    fixture: Fixture,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    groups: usize,
    #[arg(long, default_value_t = 10)]
    nodes_per_group: usize,
    #[arg(long, default_value_t = 0.8)]
    p_in: f64,
    #[arg(long, default_value_t = 0.02)]
    p_out: f64,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    partition: PathBuf,
}

fn execute(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run(args) => {
            let config = args.into_config()?;
            let report = pipeline::run(&config)?;
            println!(
                "{} graph: {} nodes, {} edges, total weight {:.6}",
                report.mode, report.nodes, report.edges, report.total_weight
            );
            println!("k\tcommunities\tmodularity");
            for r in &report.rows {
                println!("{}\t{}\t{:.3}", r.k, r.communities, r.modularity);
            }
        }
        Command::Compare(args) => {
            let config = args.into_config()?;
            let report = pipeline::compare(&config)?;
            println!("k\tweighted\tstructural");
            for r in &report.rows {
                println!("{}\t{:.3}\t{:.3}", r.k, r.weighted, r.structural);
            }
        }
        Command::Generate(args) => match args.fixture {
            Fixture::Karate => karate().write_to(&args.out)?,
            Fixture::Synthetic => {
                let spec = SyntheticSpec::planted(
                    args.groups,
                    args.nodes_per_group,
                    args.p_in,
                    args.p_out,
                    args.seed,
                );
                generate(&spec)?.write_to(&args.out)?;
            }
        },
        Command::Score(args) => {
            let report = pipeline::score(&args.graph, &args.partition)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
