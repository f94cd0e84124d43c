use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cutmimic::dblexp::{
    generate_dblexp, verify_incompressibility, verify_side_assignment, IncompressMode,
    DEFAULT_MAX_OUTER,
};
use cutmimic::io::{
    document_coordinates, document_from_graph, document_from_plane, export_dot,
    load_bundle, parse_graph, save_dblexp_bundle, save_planar_bundle,
    serialize_graph, DotOptions, GraphDocument, LoadedInstance,
};
use cutmimic::planar::{
    generate_planar_dual, verify_claim_paths, verify_identity_submatrix,
    verify_unique_cut_cycles, PlanarInstance,
};
use cutmimic::profile::{cut_profile, hagerup_compress, validate_mimicking};
use cutmimic::rank::{build_incidence_matrix, exact_rank, rank_mod2, RowMode};
use cutmimic::{Bipartition, GraphError, TerminalGraph, Weight};

/// Build, compress, and certify terminal-cut mimicking networks.
#[derive(Parser)]
#[command(name = "cutmimic", version, about)]
struct Cli {
    /// Bound verification parallelism to this many threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance bundle.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Minimum cut for one terminal bipartition.
    Mincut {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated terminal labels of one side.
        #[arg(long)]
        side: String,
    },
    /// Minimum cuts for all terminal bipartitions.
    Profile {
        #[arg(long)]
        graph: PathBuf,
        /// Also report whether each minimum cut is unique.
        #[arg(long)]
        uniqueness: bool,
    },
    /// Merge-based compression preserving all terminal cuts.
    Compress {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that two graphs have identical terminal cut values.
    Validate {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        compressed: PathBuf,
    },
    /// Cutset-edge incidence matrix and its exact rank.
    Rank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = RowsArg::UniqueOnly)]
        rows: RowsArg,
        /// With --rows all: fail on any non-unique minimum cut.
        #[arg(long)]
        strict: bool,
        /// Print the matrix.
        #[arg(long)]
        dump: bool,
    },
    /// Run a verifier against an instance bundle.
    Verify {
        #[command(subcommand)]
        check: VerifyKind,
    },
    /// Export a graph or instance drawing.
    Export {
        #[command(subcommand)]
        format: ExportKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// The planar instance with k terminal faces.
    Planar {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// The three-layer instance with k = 2r+2 terminals.
    Dblexp {
        #[arg(long)]
        r: u64,
        /// Exact fraction, e.g. 10081/1; defaults to r^2 l |W| + 1.
        #[arg(long)]
        alpha: Option<String>,
        /// Refuse instances with more than this many outer vertices.
        #[arg(long, default_value_t = DEFAULT_MAX_OUTER)]
        max_outer: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RowsArg {
    All,
    UniqueOnly,
    ImportantOnly,
}

#[derive(Args)]
struct InstanceArg {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Edge-disjoint heavy paths with doubling lengths (planar).
    ClaimPaths(InstanceArg),
    /// Unique important cuts equal to their cycles (planar).
    UniqueCycles(InstanceArg),
    /// Identity submatrix of the incidence matrix (planar).
    IdentitySubmatrix(InstanceArg),
    /// Forced outer-layer side assignment (three-layer).
    SideAssignment(InstanceArg),
    /// No vertex pair can be merged (three-layer).
    Incompressibility {
        #[command(flatten)]
        instance: InstanceArg,
        /// Test every eligible pair instead of a sample (hours at r = 2).
        #[arg(long)]
        full: bool,
        /// Sample size in sampled mode.
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ExportKind {
    Dot {
        #[arg(long, conflicts_with = "instance")]
        graph: Option<PathBuf>,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Which instance graph to draw.
        #[arg(long, value_enum, default_value_t = WhichGraph::Primal)]
        which: WhichGraph,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichGraph {
    Dual,
    Primal,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure the thread pool");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<TerminalGraph, GraphError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

fn side_bipartition(g: &TerminalGraph, side: &str) -> Result<Bipartition, GraphError> {
    let mut indices = BTreeSet::new();
    for label in side.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = g
            .vertex_by_label(label)
            .ok_or_else(|| GraphError::VertexNotFound(label.to_string()))?;
        let pos = g
            .terminals()
            .iter()
            .position(|&t| t == v)
            .ok_or_else(|| GraphError::InvalidSide(format!("{label} is not a terminal")))?;
        indices.insert(pos);
    }
    Bipartition::from_side_indices(g.terminal_count(), &indices)
}

fn side_labels(g: &TerminalGraph, b: &Bipartition) -> String {
    b.side_indices()
        .iter()
        .map(|&i| g.label(g.terminals()[i]))
        .collect::<Vec<_>>()
        .join(",")
}

fn load_planar(instance: &InstanceArg) -> Result<PlanarInstance, GraphError> {
    match load_bundle(&instance.instance)? {
        LoadedInstance::Planar(inst) => Ok(inst),
        LoadedInstance::DblExp(_) => Err(GraphError::Parameter(
            "this verifier needs a planar instance bundle".into(),
        )),
    }
}

fn run(command: Command) -> Result<bool, GraphError> {
    match command {
        Command::Gen { kind } => match kind {
            GenKind::Planar { k, out } => {
                let inst = generate_planar_dual(k)?;
                save_planar_bundle(&inst, &out)?;
                println!(
                    "planar instance k={k}: dual {} vertices / {} edges / {} faces, \
                     primal {} vertices / {} edges, C = {}",
                    inst.dual.vertex_count(),
                    inst.dual.edge_count(),
                    inst.dual.face_count(),
                    inst.primal.vertex_count(),
                    inst.primal.edge_count(),
                    inst.weights.big_c
                );
                println!("wrote bundle to {}", out.display());
                Ok(true)
            }
            GenKind::Dblexp { r, alpha, max_outer, out } => {
                let alpha = alpha
                    .map(|a| Weight::from_str(&a))
                    .transpose()?;
                let inst = generate_dblexp(r, alpha, max_outer)?;
                save_dblexp_bundle(&inst, &out)?;
                println!(
                    "three-layer instance r={r}: k = {}, l = {}, |W| = {}, \
                     {} vertices / {} edges, alpha = {}",
                    inst.k,
                    inst.ell,
                    inst.w.len(),
                    inst.graph.vertex_count(),
                    inst.graph.edge_count(),
                    inst.alpha
                );
                println!("wrote bundle to {}", out.display());
                Ok(true)
            }
        },
        Command::Mincut { graph, side } => {
            let g = read_graph(&graph)?;
            let b = side_bipartition(&g, &side)?;
            let cut = cutmimic::cut::min_cut(&g, &b)?;
            println!("side {{{}}}: min cut {}", side_labels(&g, &b), cut.value);
            println!(
                "unique: {}; crossing edges: {}",
                if cut.unique { "yes" } else { "no" },
                cut.crossing_edges.len()
            );
            Ok(true)
        }
        Command::Profile { graph, uniqueness } => {
            let g = read_graph(&graph)?;
            let p = cut_profile(&g)?;
            for (b, cut) in p.bipartitions.iter().zip(&p.cuts) {
                if uniqueness {
                    println!(
                        "{{{}}} -> {} ({})",
                        side_labels(&g, b),
                        cut.value,
                        if cut.unique { "unique" } else { "non-unique" }
                    );
                } else {
                    println!("{{{}}} -> {}", side_labels(&g, b), cut.value);
                }
            }
            Ok(true)
        }
        Command::Compress { graph, out } => {
            let g = read_graph(&graph)?;
            let (compressed, report) = hagerup_compress(&g)?;
            std::fs::write(&out, serialize_graph(&compressed))?;
            println!(
                "compressed {} -> {} vertices ({} merge classes)",
                report.vertices_before,
                report.vertices_after,
                report.classes.iter().filter(|c| c.members.len() > 1).count()
            );
            Ok(true)
        }
        Command::Validate { original, compressed } => {
            let g = read_graph(&original)?;
            let h = read_graph(&compressed)?;
            let report = validate_mimicking(&g, &h)?;
            if report.passed() {
                println!("all {} terminal cut values match", report.checked);
                Ok(true)
            } else {
                for m in &report.mismatches {
                    println!(
                        "mismatch on {{{}}}: {} vs {}",
                        side_labels(&g, &m.bipartition),
                        m.original,
                        m.other
                    );
                }
                Ok(false)
            }
        }
        Command::Rank { graph, rows, strict, dump } => {
            let g = read_graph(&graph)?;
            let p = cut_profile(&g)?;
            let mode = match rows {
                RowsArg::All => RowMode::All { strict },
                RowsArg::UniqueOnly => RowMode::UniqueOnly,
                RowsArg::ImportantOnly => RowMode::ImportantOnly,
            };
            let m = build_incidence_matrix(&g, &p, mode)?;
            if !m.dropped_non_unique.is_empty() {
                eprintln!(
                    "warning: dropped {} rows with non-unique minimum cuts",
                    m.dropped_non_unique.len()
                );
            }
            if dump {
                print!("{}", m.to_text());
            }
            println!(
                "matrix {} x {}: rank {} over the rationals, {} over GF(2)",
                m.row_count(),
                m.cols,
                exact_rank(&m),
                rank_mod2(&m)
            );
            Ok(true)
        }
        Command::Verify { check } => run_verify(check),
        Command::Export { format } => match format {
            ExportKind::Dot { graph, instance, which, out } => {
                let dot = match (graph, instance) {
                    (Some(path), None) => {
                        let g = read_graph(&path)?;
                        export_dot(&g, &DotOptions::default())
                    }
                    (None, Some(dir)) => match load_bundle(&dir)? {
                        LoadedInstance::Planar(inst) => match which {
                            WhichGraph::Dual => {
                                let (doc, _) = document_from_plane(&inst.dual);
                                let g = plain_graph(&doc)?;
                                export_dot(
                                    &g,
                                    &DotOptions {
                                        coordinates: document_coordinates(&doc),
                                        emphasize_weight: Some(inst.weights.big_c.clone()),
                                        ..Default::default()
                                    },
                                )
                            }
                            WhichGraph::Primal => {
                                let (doc, _) = document_from_graph(&inst.primal, None);
                                export_dot(
                                    &inst.primal,
                                    &DotOptions {
                                        coordinates: document_coordinates(&doc),
                                        emphasize_weight: Some(inst.weights.big_c.clone()),
                                        ..Default::default()
                                    },
                                )
                            }
                        },
                        LoadedInstance::DblExp(inst) => {
                            let layer =
                                |ids: &[usize]| -> Vec<String> {
                                    ids.iter()
                                        .map(|&v| inst.graph.label(v).to_string())
                                        .collect()
                                };
                            let ranks = vec![
                                vec!["x".to_string()],
                                layer(&inst.q),
                                layer(&inst.u),
                                layer(&inst.w),
                            ];
                            export_dot(&inst.graph, &DotOptions { ranks, ..Default::default() })
                        }
                    },
                    _ => {
                        return Err(GraphError::Parameter(
                            "give exactly one of --graph or --instance".into(),
                        ))
                    }
                };
                match out {
                    Some(path) => std::fs::write(path, dot)?,
                    None => print!("{dot}"),
                }
                Ok(true)
            }
        },
    }
}

/// Terminal-less graph view of a plane-graph document, for DOT export.
fn plain_graph(doc: &GraphDocument) -> Result<TerminalGraph, GraphError> {
    let mut g = TerminalGraph::new();
    for (label, _) in &doc.vertices {
        g.add_vertex(label.clone())?;
    }
    for (u, v, w) in &doc.edges {
        let ui = g.vertex_by_label(u).expect("declared");
        let vi = g.vertex_by_label(v).expect("declared");
        g.add_edge(ui, vi, w.clone())?;
    }
    Ok(g)
}

fn run_verify(check: VerifyKind) -> Result<bool, GraphError> {
    match check {
        VerifyKind::ClaimPaths(instance) => {
            let inst = load_planar(&instance)?;
            let report = verify_claim_paths(&inst)?;
            for p in &report.paths {
                println!(
                    "path {}: {} heavy edges (expected {}), simple {}, split at terminal: {}",
                    p.layer,
                    p.length,
                    p.expected_length,
                    p.simple_path,
                    match (p.terminal_position, p.expected_terminal_position) {
                        (Some(got), Some(want)) => format!("{got}/{want}"),
                        _ => "n/a".to_string(),
                    }
                );
            }
            println!(
                "edge-disjoint: {}; last path uses the {} fan edges",
                report.edge_disjoint, report.last_layer_corrected_count
            );
            verdict("claim-paths", report.passed())
        }
        VerifyKind::UniqueCycles(instance) => {
            let inst = load_planar(&instance)?;
            let report = verify_unique_cut_cycles(&inst)?;
            let ok = report.important.iter().filter(|c| c.ok()).count();
            println!(
                "{}/{} important cuts unique and equal to their cycles",
                ok,
                report.important.len()
            );
            for c in report.important.iter().filter(|c| !c.ok()) {
                println!(
                    "  signature {}: unique {}, matches cycle {}, cut {} vs cycle {}",
                    c.signature.as_bitstring(),
                    c.unique,
                    c.matches_cycle,
                    c.cut_value,
                    c.cycle_value
                );
            }
            println!(
                "non-important bipartitions unique: {}/{}",
                report.non_important_unique, report.non_important_total
            );
            verdict("unique-cycles", report.passed())
        }
        VerifyKind::IdentitySubmatrix(instance) => {
            let inst = load_planar(&instance)?;
            let p = cut_profile(&inst.primal)?;
            let all = build_incidence_matrix(&inst.primal, &p, RowMode::All { strict: false })?;
            let report = verify_identity_submatrix(&inst, &all)?;
            println!(
                "important rows x fan columns form the {0} x {0} identity: {1}",
                report.size,
                report.passed()
            );
            for f in &report.failures {
                println!("  {f}");
            }
            let important =
                build_incidence_matrix(&inst.primal, &p, RowMode::ImportantOnly)?;
            let r = exact_rank(&important);
            println!(
                "rank of the {} important rows: {} (needs {})",
                important.row_count(),
                r,
                report.size
            );
            verdict("identity-submatrix", report.passed() && r == report.size)
        }
        VerifyKind::SideAssignment(instance) => {
            let inst = match load_bundle(&instance.instance)? {
                LoadedInstance::DblExp(inst) => inst,
                LoadedInstance::Planar(_) => {
                    return Err(GraphError::Parameter(
                        "this verifier needs a three-layer instance bundle".into(),
                    ))
                }
            };
            let report = verify_side_assignment(&inst)?;
            let ok = report.cases.iter().filter(|c| c.ok()).count();
            println!(
                "{}/{} important sets force the outer layer correctly \
                 (per-vertex cost {} on the terminal side)",
                ok,
                report.cases.len(),
                report.per_w_cost_on_s
            );
            for c in report.cases.iter().filter(|c| !c.ok()) {
                println!(
                    "  S0 = {:?}: middle placement {}, {} outer mismatches, \
                     unique {}, value {} vs oracle {}",
                    c.s0,
                    c.u_placement_ok,
                    c.w_mismatches.len(),
                    c.cut_unique,
                    c.cut_value,
                    c.oracle_value
                );
            }
            verdict("side-assignment", report.passed())
        }
        VerifyKind::Incompressibility { instance, full, pairs, seed } => {
            let inst = match load_bundle(&instance.instance)? {
                LoadedInstance::DblExp(inst) => inst,
                LoadedInstance::Planar(_) => {
                    return Err(GraphError::Parameter(
                        "this verifier needs a three-layer instance bundle".into(),
                    ))
                }
            };
            let mode = if full {
                IncompressMode::Full
            } else {
                IncompressMode::Sampled { pairs, min_ww_pairs: 20 }
            };
            let report = verify_incompressibility(&inst, mode, seed)?;
            println!(
                "{} side vectors over {} bipartitions, pairwise distinct: {}",
                report.vertices, report.bipartitions, report.side_vectors_distinct
            );
            println!(
                "merge test on {} pairs ({} outer-outer): {} mergeable",
                report.pairs_tested,
                report.ww_pairs_tested,
                report.mergeable_pairs.len()
            );
            for (a, b) in &report.mergeable_pairs {
                println!("  mergeable: {a}, {b}");
            }
            verdict("incompressibility", report.passed())
        }
    }
}

fn verdict(name: &str, passed: bool) -> Result<bool, GraphError> {
    println!("{name}: {}", if passed { "PASS" } else { "FAIL" });
    Ok(passed)
}
