//! Stage orchestration: computes artifacts and writes them, with legends
//! and a reproducibility manifest, into a single output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hfgt::adjacency::{dof_rho, ConstructionPath, HfgtGraph};
use hfgt::boolmat::io as matio;
use hfgt::boolmat::{BoolMatrix, BoolTensor};
use hfgt::descriptors::{
    capability_dsm, closeness, clustering_directed, degree, eigenvector_centrality,
    katz_centrality, modularity, ClosenessVariant, Direction, MetricReport, DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
};
use hfgt::incidence::{dual_adjacency, IncidenceTensors};
use hfgt::layers::{LayerScheme, LayerSet};
use hfgt::model::{dof_h, dof_m, dof_s, CapabilitySet, SystemModel};

use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Concept,
    AdjacencyLoop,
    AdjacencyTensor,
    AdjacencyIncidence,
    Layers,
    Descriptors,
    Dual,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Concept,
        Stage::AdjacencyLoop,
        Stage::AdjacencyTensor,
        Stage::AdjacencyIncidence,
        Stage::Layers,
        Stage::Descriptors,
        Stage::Dual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Concept => "concept",
            Stage::AdjacencyLoop => "adjacency-loop",
            Stage::AdjacencyTensor => "adjacency-tensor",
            Stage::AdjacencyIncidence => "adjacency-incidence",
            Stage::Layers => "layers",
            Stage::Descriptors => "descriptors",
            Stage::Dual => "dual",
        }
    }

    pub fn parse(s: &str) -> CliResult<Stage> {
        Stage::ALL
            .iter()
            .copied()
            .find(|stage| stage.name() == s)
            .ok_or_else(|| {
                CliError::validation(format!(
                    "unknown stage `{s}`; expected one of: {}",
                    Stage::ALL.map(|st| st.name()).join(", ")
                ))
            })
    }

    fn requires(self) -> &'static [Stage] {
        match self {
            Stage::Concept => &[],
            Stage::AdjacencyLoop | Stage::AdjacencyTensor | Stage::AdjacencyIncidence => {
                &[Stage::Concept]
            }
            Stage::Layers | Stage::Dual => &[Stage::Concept],
            Stage::Descriptors => &[], // needs any adjacency stage; checked separately
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub stages: Vec<Stage>,
    pub check: bool,
    pub scheme: LayerScheme,
    pub metrics: Vec<Metric>,
    pub katz_alpha: Option<f64>,
    pub katz_beta: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            stages: Stage::ALL.to_vec(),
            check: false,
            scheme: LayerScheme::InputOperandSet,
            metrics: Metric::ALL.to_vec(),
            katz_alpha: None,
            katz_beta: 1.0,
            tolerance: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Degree,
    Closeness,
    Eigenvector,
    Katz,
    Clustering,
    Modularity,
    Dsm,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Degree,
        Metric::Closeness,
        Metric::Eigenvector,
        Metric::Katz,
        Metric::Clustering,
        Metric::Modularity,
        Metric::Dsm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Degree => "degree",
            Metric::Closeness => "closeness",
            Metric::Eigenvector => "eigenvector",
            Metric::Katz => "katz",
            Metric::Clustering => "clustering",
            Metric::Modularity => "modularity",
            Metric::Dsm => "dsm",
        }
    }

    pub fn parse(s: &str) -> CliResult<Metric> {
        Metric::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                CliError::validation(format!(
                    "unknown metric `{s}`; expected one of: {}",
                    Metric::ALL.map(|m| m.name()).join(", ")
                ))
            })
    }
}

/// Everything a run may compute, cached across stages.
struct Artifacts<'a> {
    model: &'a SystemModel,
    a_s: BoolMatrix,
    caps: CapabilitySet,
    tensors: Option<IncidenceTensors>,
    graphs: BTreeMap<&'static str, HfgtGraph>,
}

impl<'a> Artifacts<'a> {
    fn new(model: &'a SystemModel) -> Self {
        let a_s = model.a_s();
        let caps = CapabilitySet::from_concept(&a_s);
        Artifacts {
            model,
            a_s,
            caps,
            tensors: None,
            graphs: BTreeMap::new(),
        }
    }

    fn tensors(&mut self) -> CliResult<&IncidenceTensors> {
        if self.tensors.is_none() {
            self.tensors = Some(IncidenceTensors::build(self.model, &self.a_s, &self.caps)?);
        }
        Ok(self.tensors.as_ref().unwrap())
    }

    fn graph(&mut self, path: ConstructionPath) -> CliResult<&HfgtGraph> {
        let key = match path {
            ConstructionPath::LoopRules => "loop",
            ConstructionPath::TensorClosedForm => "tensor",
            ConstructionPath::IncidenceProduct => "incidence",
        };
        if !self.graphs.contains_key(key) {
            let graph = HfgtGraph::build(self.model, path)?;
            self.graphs.insert(key, graph);
        }
        Ok(&self.graphs[key])
    }

    fn any_graph(&mut self) -> CliResult<&HfgtGraph> {
        if let Some(key) = self.graphs.keys().next().copied() {
            return Ok(&self.graphs[key]);
        }
        self.graph(ConstructionPath::LoopRules)
    }
}

/// A sink that writes files and records them in the manifest.
struct OutDir<'a> {
    dir: &'a Path,
    manifest: &'a mut RunManifest,
}

impl OutDir<'_> {
    fn write(&mut self, name: &str, contents: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        self.manifest.record_output(name, contents);
        Ok(())
    }

    fn write_matrix(&mut self, name: &str, m: &BoolMatrix) -> CliResult<()> {
        let mut buf = Vec::new();
        matio::write_matrix_market_pattern(m, &mut buf)?;
        self.write(name, &buf)
    }

    fn write_tensor(&mut self, name: &str, t: &BoolTensor) -> CliResult<()> {
        let mut buf = Vec::new();
        matio::write_tensor_coords(t, &mut buf)?;
        self.write(name, &buf)
    }
}

fn process_legend(model: &SystemModel) -> String {
    let mut out = String::from("process\tid\n");
    for w in 0..model.n_processes() {
        let _ = writeln!(out, "{}\t{}", w + 1, model.process_label(w));
    }
    out
}

fn resource_legend(model: &SystemModel) -> String {
    let mut out = String::from("resource\tid\tkind\n");
    for (v, r) in model.resources().iter().enumerate() {
        let kind = match r.kind {
            hfgt::model::ResourceKind::Machine => "machine",
            hfgt::model::ResourceKind::IndependentBuffer => "independent-buffer",
            hfgt::model::ResourceKind::Transporter => "transporter",
        };
        let _ = writeln!(out, "{}\t{}\t{}", v + 1, r.id, kind);
    }
    out
}

fn operand_legend(model: &SystemModel) -> String {
    let mut out = String::from("operand\tid\tname\n");
    for (i, o) in model.operands().iter().enumerate() {
        let _ = writeln!(out, "{}\t{}\t{}", i + 1, o.id, o.name);
    }
    out
}

fn buffer_legend(model: &SystemModel) -> String {
    let mut out = String::from("buffer\tid\n");
    for (y, r) in model.resources()[..model.n_buffers()].iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", y + 1, r.id);
    }
    out
}

fn capability_legend(model: &SystemModel, caps: &CapabilitySet) -> String {
    let mut out = String::from("psi\tchi\tprocess\tresource\n");
    for psi in 0..caps.len() {
        let (w, v) = caps.pair(psi);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            psi + 1,
            caps.chi(psi) + 1,
            model.process_label(w),
            model.resources()[v].id
        );
    }
    out
}

fn stage_concept(art: &mut Artifacts, out: &mut OutDir) -> CliResult<()> {
    let model = art.model;
    let j_s = model.j_s();
    let k_s = model.k_s();
    out.write_matrix("j_s.mtx", &j_s)?;
    out.write_matrix("k_s.mtx", &k_s)?;
    out.write_matrix("a_s.mtx", &art.a_s)?;
    out.write("process_legend.tsv", process_legend(model).as_bytes())?;
    out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
    out.write("operand_legend.tsv", operand_legend(model).as_bytes())?;
    let report = format!(
        "dof_s\t{}\ndof_m\t{}\ndof_h\t{}\n",
        dof_s(&j_s, &k_s)?,
        dof_m(model.j_m(), model.k_m())?,
        dof_h(&model.j_hbar(), model.k_hbar())?,
    );
    out.write("dof.tsv", report.as_bytes())?;
    Ok(())
}

fn stage_adjacency(
    art: &mut Artifacts,
    out: &mut OutDir,
    path: ConstructionPath,
) -> CliResult<()> {
    let suffix = path.to_string();
    let graph = art.graph(path)?.clone();
    out.write_matrix(&format!("a_rho_{suffix}.mtx"), &graph.a_rho)?;
    out.write_matrix(&format!("a_rho_tilde_{suffix}.mtx"), &graph.a_rho_proj)?;
    out.write(
        "capability_legend.tsv",
        capability_legend(art.model, &art.caps).as_bytes(),
    )?;
    out.write(
        &format!("dof_rho_{suffix}.tsv"),
        format!("dof_rho\t{}\n", dof_rho(&graph.a_rho_proj)?).as_bytes(),
    )?;
    Ok(())
}

fn stage_layers(art: &mut Artifacts, out: &mut OutDir, scheme: &LayerScheme) -> CliResult<()> {
    let model = art.model;
    let a_s = art.a_s.clone();
    let caps = art.caps.clone();
    let tensors = art.tensors()?.clone();
    let set = LayerSet::build(model, &a_s, &caps, &tensors, scheme.clone())?;
    let mut legend = String::from("lambda\tlambda_d\tlabel\tcapability_count\n");
    for layer in &set.layers {
        let canonical = layer
            .canonical
            .map(|c| c.to_string())
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            legend,
            "{}\t{}\t{}\t{}",
            layer.index + 1,
            canonical,
            layer.label,
            layer.members.len()
        );
        out.write_matrix(
            &format!("layer_{}_adjacency.mtx", layer.index + 1),
            &layer.adjacency,
        )?;
        out.write_matrix(
            &format!("layer_{}_selector.mtx", layer.index + 1),
            &layer.selector,
        )?;
        let mut members = String::from("psi\tprocess\tresource\n");
        for &psi in &layer.members {
            let (w, v) = caps.pair(psi);
            let _ = writeln!(
                members,
                "{}\t{}\t{}",
                psi + 1,
                model.process_label(w),
                model.resources()[v].id
            );
        }
        out.write(&format!("layer_{}_members.tsv", layer.index + 1), members.as_bytes())?;
    }
    out.write("layer_legend.tsv", legend.as_bytes())?;
    Ok(())
}

fn auto_katz_alpha(adjacency: &BoolMatrix) -> f64 {
    // The spectral radius is bounded by the maximum degree; staying under
    // that bound keeps the fixed point well defined.
    let max_deg = degree(adjacency, Direction::Out)
        .ok()
        .and_then(|d| d.into_iter().max())
        .unwrap_or(0);
    0.85 / (max_deg as f64 + 1.0)
}

fn stage_descriptors(art: &mut Artifacts, out: &mut OutDir, opts: &PipelineOptions) -> CliResult<()> {
    if art.graphs.is_empty() {
        return Err(CliError::validation(
            "descriptors stage requires one of the adjacency stages to run first",
        ));
    }
    let model = art.model;
    let caps = art.caps.clone();
    let adj = art.any_graph()?.a_rho_proj.clone();
    let n = adj.n_rows();

    let mut reports: Vec<MetricReport> = Vec::new();
    for metric in &opts.metrics {
        match metric {
            Metric::Degree => {
                let as_f64 = |d: Vec<usize>| d.into_iter().map(|v| v as f64).collect();
                reports.push(MetricReport::per_node(
                    "out_degree",
                    as_f64(degree(&adj, Direction::Out)?),
                ));
                reports.push(MetricReport::per_node(
                    "in_degree",
                    as_f64(degree(&adj, Direction::In)?),
                ));
            }
            Metric::Closeness => {
                reports.push(MetricReport::per_node(
                    "closeness_harmonic",
                    closeness(&adj, ClosenessVariant::Harmonic)?,
                ));
                reports.push(MetricReport::per_node(
                    "closeness_classic",
                    closeness(&adj, ClosenessVariant::Classic)?,
                ));
            }
            Metric::Eigenvector => {
                let x = eigenvector_centrality(&adj, opts.tolerance, opts.max_iter)?;
                reports.push(
                    MetricReport::per_node("eigenvector", x)
                        .with_parameter("tolerance", opts.tolerance),
                );
            }
            Metric::Katz => {
                let alpha = opts.katz_alpha.unwrap_or_else(|| auto_katz_alpha(&adj));
                let x = katz_centrality(&adj, alpha, opts.katz_beta, opts.tolerance, opts.max_iter)?;
                reports.push(
                    MetricReport::per_node("katz", x)
                        .with_parameter("alpha", alpha)
                        .with_parameter("beta", opts.katz_beta),
                );
            }
            Metric::Clustering => {
                let c = clustering_directed(&adj)?;
                let take = |name: &str, f: fn(&hfgt::descriptors::Clustering) -> f64| {
                    MetricReport::per_node(name, c.iter().map(f).collect())
                };
                reports.push(take("clustering_cycle", |v| v.cycle));
                reports.push(take("clustering_middleman", |v| v.middleman));
                reports.push(take("clustering_in", |v| v.inward));
                reports.push(take("clustering_out", |v| v.outward));
                reports.push(take("clustering_total", |v| v.total));
            }
            Metric::Modularity | Metric::Dsm => {
                // Layers act as the subsystem partition.
                let a_s = art.a_s.clone();
                let tensors = art.tensors()?.clone();
                let set = LayerSet::build(
                    model,
                    &a_s,
                    &caps,
                    &tensors,
                    LayerScheme::InputOperandSet,
                )?;
                let mut partition = vec![0usize; n];
                for layer in &set.layers {
                    for &psi in &layer.members {
                        partition[psi] = layer.index;
                    }
                }
                if *metric == Metric::Modularity {
                    reports.push(MetricReport::scalar(
                        "modularity_layers",
                        modularity(&adj, &partition)?,
                    ));
                } else {
                    let dsm = capability_dsm(&adj, &partition)?;
                    let mut report = String::from("block_row\tblock_col\tedges\n");
                    for (r, row) in dsm.block_edges.iter().enumerate() {
                        for (c, &count) in row.iter().enumerate() {
                            let _ = writeln!(report, "{}\t{}\t{}", r + 1, c + 1, count);
                        }
                    }
                    let _ = writeln!(report, "intra_total\t\t{}", dsm.intra_edges);
                    let _ = writeln!(report, "inter_total\t\t{}", dsm.inter_edges);
                    out.write("dsm_blocks.tsv", report.as_bytes())?;
                    out.write_matrix("dsm_reordered.mtx", &dsm.reordered)?;
                    let mut order = String::from("position\tpsi\tblock\n");
                    for (pos, &psi) in dsm.order.iter().enumerate() {
                        let _ = writeln!(order, "{}\t{}\t{}", pos + 1, psi + 1, partition[psi] + 1);
                    }
                    out.write("dsm_order.tsv", order.as_bytes())?;
                }
            }
        }
    }

    let columns: Vec<&MetricReport> = reports.iter().filter(|r| r.per_node.is_some()).collect();
    let header: Vec<&str> = columns.iter().map(|r| r.metric.as_str()).collect();

    // Structured text report: one record per capability node.
    let mut text = String::new();
    let _ = writeln!(text, "# descriptor report over {} capabilities", n);
    for report in &reports {
        for (name, value) in &report.parameters {
            let _ = writeln!(text, "# parameter {}.{name} = {value}", report.metric);
        }
        if let Some(value) = report.scalar {
            let _ = writeln!(text, "# scalar {} = {value}", report.metric);
        }
    }
    let _ = writeln!(text, "psi\tprocess\tresource\t{}", header.join("\t"));
    let row_values = |psi: usize| -> Vec<String> {
        columns
            .iter()
            .map(|r| r.per_node.as_ref().unwrap()[psi].to_string())
            .collect()
    };
    for psi in 0..n {
        let (w, v) = caps.pair(psi);
        let _ = writeln!(
            text,
            "{}\t{}\t{}\t{}",
            psi + 1,
            model.process_label(w),
            model.resources()[v].id,
            row_values(psi).join("\t")
        );
    }
    out.write("descriptors.txt", text.as_bytes())?;

    let mut csv = String::new();
    let _ = writeln!(csv, "psi,process,resource,{}", header.join(","));
    for psi in 0..n {
        let (w, v) = caps.pair(psi);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            psi + 1,
            model.process_label(w),
            model.resources()[v].id,
            row_values(psi).join(",")
        );
    }
    out.write("descriptors.csv", csv.as_bytes())?;
    Ok(())
}

fn stage_dual(art: &mut Artifacts, out: &mut OutDir) -> CliResult<()> {
    let model = art.model;
    let tensors = art.tensors()?;
    let dual = dual_adjacency(
        &tensors.m2_minus,
        &tensors.m2_plus,
        model.n_operands(),
        model.n_buffers(),
    )?;
    out.write_tensor("dual_adjacency.tns", &dual)?;
    out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
    out.write("operand_legend.tsv", operand_legend(model).as_bytes())?;
    Ok(())
}

/// Runs the selected stages and writes artifacts plus the manifest.
/// With `check`, all three adjacency constructions run and must agree.
pub fn run_pipeline(
    model_path: &Path,
    model: &SystemModel,
    opts: &PipelineOptions,
    out_dir: &Path,
) -> CliResult<PathBuf> {
    // Stage dependency validation up front, in declaration order.
    for stage in &opts.stages {
        for dep in stage.requires() {
            if !opts.stages.contains(dep) {
                return Err(CliError::validation(format!(
                    "stage `{}` requires stage `{}`",
                    stage.name(),
                    dep.name()
                )));
            }
        }
    }
    if opts.stages.contains(&Stage::Descriptors)
        && !opts.stages.iter().any(|s| {
            matches!(
                s,
                Stage::AdjacencyLoop | Stage::AdjacencyTensor | Stage::AdjacencyIncidence
            )
        })
    {
        return Err(CliError::validation(
            "stage `descriptors` requires one of: adjacency-loop, adjacency-tensor, \
             adjacency-incidence",
        ));
    }

    std::fs::create_dir_all(out_dir)?;
    let input_bytes = std::fs::read(model_path)?;
    let mut manifest = RunManifest::new(model_path, &input_bytes);
    let stage_names: Vec<&str> = opts.stages.iter().map(|s| s.name()).collect();
    manifest.set_option("stages", stage_names.join(","));
    manifest.set_option("check", opts.check.to_string());

    let mut art = Artifacts::new(model);
    {
        let mut out = OutDir {
            dir: out_dir,
            manifest: &mut manifest,
        };

        let mut ordered = opts.stages.clone();
        ordered.sort_unstable();
        ordered.dedup();
        for stage in &ordered {
            match stage {
                Stage::Concept => stage_concept(&mut art, &mut out)?,
                Stage::AdjacencyLoop => {
                    stage_adjacency(&mut art, &mut out, ConstructionPath::LoopRules)?
                }
                Stage::AdjacencyTensor => {
                    stage_adjacency(&mut art, &mut out, ConstructionPath::TensorClosedForm)?
                }
                Stage::AdjacencyIncidence => {
                    stage_adjacency(&mut art, &mut out, ConstructionPath::IncidenceProduct)?
                }
                Stage::Layers => {
                    let scheme = opts.scheme.clone();
                    stage_layers(&mut art, &mut out, &scheme)?
                }
                Stage::Descriptors => stage_descriptors(&mut art, &mut out, opts)?,
                Stage::Dual => stage_dual(&mut art, &mut out)?,
            }
        }

        if opts.check {
            let by_loop = art.graph(ConstructionPath::LoopRules)?.a_rho_proj.clone();
            let by_tensor = art
                .graph(ConstructionPath::TensorClosedForm)?
                .a_rho_proj
                .clone();
            let by_incidence = art
                .graph(ConstructionPath::IncidenceProduct)?
                .a_rho_proj
                .clone();
            if by_loop != by_tensor || by_loop != by_incidence {
                return Err(CliError::CheckMismatch(format!(
                    "adjacency constructions disagree: loop {} entries, tensor {} entries, \
                     incidence {} entries",
                    by_loop.count_ones(),
                    by_tensor.count_ones(),
                    by_incidence.count_ones()
                )));
            }
            out.write("check.txt", b"adjacency paths agree: loop == tensor == incidence\n")?;
        }
    }

    manifest.write(out_dir)?;
    Ok(out_dir.join("manifest.json"))
}

/// Exportable artifacts for the `export` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Artifact {
    AS,
    JS,
    KS,
    JHbar,
    ARho,
    ARhoTilde,
    ABs,
    JhTensor,
    JhbarTensor,
    Multicommodity,
    Dual,
    M2Minus,
    M2Plus,
}

impl Artifact {
    pub const ALL: [Artifact; 13] = [
        Artifact::AS,
        Artifact::JS,
        Artifact::KS,
        Artifact::JHbar,
        Artifact::ARho,
        Artifact::ARhoTilde,
        Artifact::ABs,
        Artifact::JhTensor,
        Artifact::JhbarTensor,
        Artifact::Multicommodity,
        Artifact::Dual,
        Artifact::M2Minus,
        Artifact::M2Plus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Artifact::AS => "a_s",
            Artifact::JS => "j_s",
            Artifact::KS => "k_s",
            Artifact::JHbar => "j_hbar",
            Artifact::ARho => "a_rho",
            Artifact::ARhoTilde => "a_rho_tilde",
            Artifact::ABs => "a_bs",
            Artifact::JhTensor => "jh_tensor",
            Artifact::JhbarTensor => "jhbar_tensor",
            Artifact::Multicommodity => "multicommodity",
            Artifact::Dual => "dual",
            Artifact::M2Minus => "m2_minus",
            Artifact::M2Plus => "m2_plus",
        }
    }

    pub fn parse(s: &str) -> CliResult<Artifact> {
        Artifact::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                CliError::validation(format!(
                    "unknown artifact `{s}`; expected one of: {}",
                    Artifact::ALL.map(|a| a.name()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    MatrixMarket,
    TensorCoords,
}

impl ExportFormat {
    pub fn parse(s: &str) -> CliResult<ExportFormat> {
        match s {
            "mm" | "matrix-market" => Ok(ExportFormat::MatrixMarket),
            "tensor" | "tensor-coords" => Ok(ExportFormat::TensorCoords),
            other => Err(CliError::validation(format!(
                "unknown format `{other}`; expected `mm` or `tensor`"
            ))),
        }
    }
}

/// Computes one artifact and writes it (with its legends) to the output
/// directory. Matrix artifacts export as Matrix Market; tensor artifacts
/// as coordinate text. A mismatched format is rejected.
pub fn export(
    model_path: &Path,
    model: &SystemModel,
    artifact: Artifact,
    format: ExportFormat,
    out_dir: &Path,
) -> CliResult<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let input_bytes = std::fs::read(model_path)?;
    let mut manifest = RunManifest::new(model_path, &input_bytes);
    manifest.set_option("export", artifact.name());
    let mut out = OutDir {
        dir: out_dir,
        manifest: &mut manifest,
    };

    let mut art = Artifacts::new(model);
    let is_tensor = matches!(
        artifact,
        Artifact::JhTensor | Artifact::JhbarTensor | Artifact::Multicommodity | Artifact::Dual
    );
    match (is_tensor, format) {
        (true, ExportFormat::TensorCoords) | (false, ExportFormat::MatrixMarket) => {}
        (true, ExportFormat::MatrixMarket) => {
            return Err(CliError::validation(format!(
                "artifact `{}` is a tensor; use --format tensor",
                artifact.name()
            )))
        }
        (false, ExportFormat::TensorCoords) => {
            return Err(CliError::validation(format!(
                "artifact `{}` is a matrix; use --format mm",
                artifact.name()
            )))
        }
    }

    let file_name;
    match artifact {
        Artifact::AS => {
            file_name = "a_s.mtx";
            let a_s = art.a_s.clone();
            out.write_matrix(file_name, &a_s)?;
            out.write("process_legend.tsv", process_legend(model).as_bytes())?;
            out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
        }
        Artifact::JS => {
            file_name = "j_s.mtx";
            out.write_matrix(file_name, &model.j_s())?;
            out.write("process_legend.tsv", process_legend(model).as_bytes())?;
            out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
        }
        Artifact::KS => {
            file_name = "k_s.mtx";
            out.write_matrix(file_name, &model.k_s())?;
            out.write("process_legend.tsv", process_legend(model).as_bytes())?;
            out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
        }
        Artifact::JHbar => {
            file_name = "j_hbar.mtx";
            out.write_matrix(file_name, &model.j_hbar())?;
            out.write("process_legend.tsv", process_legend(model).as_bytes())?;
            out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
        }
        Artifact::ARho | Artifact::ARhoTilde => {
            let graph = art.graph(ConstructionPath::LoopRules)?.clone();
            let m = if artifact == Artifact::ARho {
                file_name = "a_rho.mtx";
                &graph.a_rho
            } else {
                file_name = "a_rho_tilde.mtx";
                &graph.a_rho_proj
            };
            out.write_matrix(file_name, m)?;
            out.write(
                "capability_legend.tsv",
                capability_legend(model, &art.caps).as_bytes(),
            )?;
        }
        Artifact::ABs => {
            file_name = "a_bs.mtx";
            let t = hfgt::model::tensorize_jh(model.j_h(), model.n_buffers())?;
            out.write_matrix(file_name, &hfgt::model::formal_graph(&t)?)?;
            out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
        }
        Artifact::JhTensor => {
            file_name = "jh_tensor.tns";
            let t = hfgt::model::tensorize_jh(model.j_h(), model.n_buffers())?;
            out.write_tensor(file_name, &t)?;
            out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
            out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
        }
        Artifact::JhbarTensor => {
            file_name = "jhbar_tensor.tns";
            let t = hfgt::model::tensorize_jhbar(
                &model.j_hbar(),
                model.n_holding(),
                model.n_buffers(),
            )?;
            out.write_tensor(file_name, &t)?;
            out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
            out.write("resource_legend.tsv", resource_legend(model).as_bytes())?;
        }
        Artifact::Multicommodity => {
            file_name = "multicommodity.tns";
            let t = hfgt::model::tensorize_jhbar(
                &model.j_hbar(),
                model.n_holding(),
                model.n_buffers(),
            )?;
            let a = hfgt::model::multicommodity(&t, model.holding_is_operand())?;
            out.write_tensor(file_name, &a)?;
            out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
        }
        Artifact::Dual => {
            file_name = "dual_adjacency.tns";
            let tensors = art.tensors()?;
            let dual = dual_adjacency(
                &tensors.m2_minus,
                &tensors.m2_plus,
                model.n_operands(),
                model.n_buffers(),
            )?;
            out.write_tensor(file_name, &dual)?;
            out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
            out.write("operand_legend.tsv", operand_legend(model).as_bytes())?;
        }
        Artifact::M2Minus | Artifact::M2Plus => {
            let tensors = art.tensors()?.clone();
            let m = if artifact == Artifact::M2Minus {
                file_name = "m2_minus.mtx";
                &tensors.m2_minus
            } else {
                file_name = "m2_plus.mtx";
                &tensors.m2_plus
            };
            out.write_matrix(file_name, m)?;
            out.write(
                "capability_legend.tsv",
                capability_legend(model, &art.caps).as_bytes(),
            )?;
            out.write("operand_legend.tsv", operand_legend(model).as_bytes())?;
            out.write("buffer_legend.tsv", buffer_legend(model).as_bytes())?;
        }
    }

    manifest.write(out_dir)?;
    Ok(out_dir.join(file_name))
}
