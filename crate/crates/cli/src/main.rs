use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hfgt::layers::LayerScheme;
use hfgt_cli::error::{CliError, CliResult};
use hfgt_cli::modelfile;
use hfgt_cli::pipeline::{self, Artifact, ExportFormat, Metric, PipelineOptions, Stage};

/// Hetero-functional graph analysis of engineering-system models.
#[derive(Parser)]
#[command(name = "hfgt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArg {
    /// Output directory; defaults to $HFGT_OUT or ./hfgt-out.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArg {
    fn resolve(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            std::env::var_os("HFGT_OUT")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("hfgt-out"))
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model file.
    Validate { model: PathBuf },
    /// Run construction stages and write artifacts.
    Build {
        model: PathBuf,
        /// Comma-separated stages: concept, adjacency-loop,
        /// adjacency-tensor, adjacency-incidence, layers, descriptors,
        /// dual. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        stages: Vec<String>,
        /// Run all three adjacency constructions and fail on differences.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Enumerate layers under a classification scheme.
    Layers {
        model: PathBuf,
        /// `input`, `output`, or `custom=<map.tsv>` (lines of
        /// process, resource, layer).
        #[arg(long, default_value = "input")]
        scheme: String,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Compute network descriptors over the capability graph.
    Descriptors {
        model: PathBuf,
        /// Comma-separated metrics: degree, closeness, eigenvector, katz,
        /// clustering, modularity, dsm. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        metrics: Vec<String>,
        /// Katz attenuation; must stay below 1/spectral-radius. Defaults
        /// to 0.85/(1 + max out-degree).
        #[arg(long)]
        katz_alpha: Option<f64>,
        /// Katz base weight.
        #[arg(long, default_value_t = 1.0)]
        katz_beta: f64,
        /// Convergence tolerance for iterative centralities.
        #[arg(long, default_value_t = hfgt::descriptors::DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Iteration cap for iterative centralities.
        #[arg(long, default_value_t = hfgt::descriptors::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Compute and write a single artifact.
    Export {
        model: PathBuf,
        /// One of: a_s, j_s, k_s, j_hbar, a_rho, a_rho_tilde, a_bs,
        /// jh_tensor, jhbar_tensor, multicommodity, dual, m2_minus,
        /// m2_plus.
        #[arg(long)]
        artifact: String,
        /// `mm` for Matrix Market, `tensor` for coordinate text.
        #[arg(long, default_value = "mm")]
        format: String,
        #[command(flatten)]
        output: OutputArg,
    },
}

fn parse_scheme(spec: &str, model_path: &Path) -> CliResult<LayerScheme> {
    if spec == "input" {
        return Ok(LayerScheme::InputOperandSet);
    }
    if spec == "output" {
        return Ok(LayerScheme::OutputOperandSet);
    }
    if let Some(map_path) = spec.strip_prefix("custom=") {
        let model = modelfile::ingest(model_path)?;
        let text = std::fs::read_to_string(map_path).map_err(|e| {
            CliError::validation(format!("cannot read layer map `{map_path}`: {e}"))
        })?;
        // Labels are unique: declared ids and derived transport names.
        let process_of: BTreeMap<String, usize> = (0..model.n_processes())
            .map(|w| (model.process_label(w), w))
            .collect();
        let resource_of: BTreeMap<String, usize> = model
            .resources()
            .iter()
            .enumerate()
            .map(|(v, r)| (r.id.clone(), v))
            .collect();
        let mut map = BTreeMap::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(CliError::validation(format!(
                    "layer map line {}: expected `process<TAB>resource<TAB>layer`",
                    line_no + 1
                )));
            }
            let &w = process_of.get(fields[0]).ok_or_else(|| {
                CliError::validation(format!(
                    "layer map line {}: unknown process `{}`",
                    line_no + 1,
                    fields[0]
                ))
            })?;
            let &v = resource_of.get(fields[1]).ok_or_else(|| {
                CliError::validation(format!(
                    "layer map line {}: unknown resource `{}`",
                    line_no + 1,
                    fields[1]
                ))
            })?;
            map.insert((w, v), fields[2].to_string());
        }
        return Ok(LayerScheme::Custom(map));
    }
    Err(CliError::validation(format!(
        "unknown scheme `{spec}`; expected input, output, or custom=<map.tsv>"
    )))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate { model } => {
            let m = modelfile::ingest(&model)?;
            println!(
                "ok: {} operands, {} resources, {} processes, DOF_S = {}",
                m.n_operands(),
                m.n_resources(),
                m.n_processes(),
                m.a_s().count_ones()
            );
            Ok(())
        }
        Command::Build {
            model,
            stages,
            check,
            output,
        } => {
            let parsed = modelfile::ingest(&model)?;
            let mut opts = PipelineOptions {
                check,
                ..PipelineOptions::default()
            };
            if !stages.is_empty() {
                opts.stages = stages
                    .iter()
                    .map(|s| Stage::parse(s))
                    .collect::<CliResult<Vec<_>>>()?;
            }
            let manifest = pipeline::run_pipeline(&model, &parsed, &opts, &output.resolve())?;
            println!("wrote {}", manifest.display());
            Ok(())
        }
        Command::Layers {
            model,
            scheme,
            output,
        } => {
            let layer_scheme = parse_scheme(&scheme, &model)?;
            let parsed = modelfile::ingest(&model)?;
            let opts = PipelineOptions {
                stages: vec![Stage::Concept, Stage::Layers],
                scheme: layer_scheme,
                ..PipelineOptions::default()
            };
            let manifest = pipeline::run_pipeline(&model, &parsed, &opts, &output.resolve())?;
            println!("wrote {}", manifest.display());
            Ok(())
        }
        Command::Descriptors {
            model,
            metrics,
            katz_alpha,
            katz_beta,
            tolerance,
            max_iter,
            output,
        } => {
            let parsed = modelfile::ingest(&model)?;
            let mut opts = PipelineOptions {
                stages: vec![Stage::Concept, Stage::AdjacencyLoop, Stage::Descriptors],
                katz_alpha,
                katz_beta,
                tolerance,
                max_iter,
                ..PipelineOptions::default()
            };
            if !metrics.is_empty() {
                opts.metrics = metrics
                    .iter()
                    .map(|m| Metric::parse(m))
                    .collect::<CliResult<Vec<_>>>()?;
            }
            let manifest = pipeline::run_pipeline(&model, &parsed, &opts, &output.resolve())?;
            println!("wrote {}", manifest.display());
            Ok(())
        }
        Command::Export {
            model,
            artifact,
            format,
            output,
        } => {
            let parsed = modelfile::ingest(&model)?;
            let artifact = Artifact::parse(&artifact)?;
            let format = ExportFormat::parse(&format)?;
            let path = pipeline::export(&model, &parsed, artifact, format, &output.resolve())?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hfgt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
