//! Command-line driver and DGF document format for `cylgrid`.

pub mod dgf;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use cylgrid::digraph::{menger_paths, strong_components, MengerOutcome};
use cylgrid::gridextract::{
    assemble_cylindrical_grid, find_circuits_and_paths, get_acyclic_grid, get_bubble_grid, AssemblyInput,
    PipelineConfig, UndirectedWitness,
};
use cylgrid::havens::{check_haven, find_haven, haven_order, HavenSearch};
use cylgrid::linkages::{extract_linked_set, is_linked_set, LinkedVerdict};
use cylgrid::minors::{butterfly_contract, find_butterfly_minor, MinorModel, MinorSearch};
use cylgrid::rerouting::{reroute_disk, RerouteMode, RoutedSystem};
use cylgrid::{DirectedPath, Error, Vertex, VertexSet};

pub use dgf::{parse_certificate, parse_dgf, serialize_dgf, write_certificate, DgfDocument, Witness};

const SEARCH_BUDGET: u64 = 1 << 24;
const MINOR_BUDGET: u64 = 1 << 18;

#[derive(Parser, Debug)]
#[command(name = "cylgrid", version, about = "Directed grid and haven toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a digraph family.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Strong components.
    Scc { file: PathBuf },
    /// Disjoint paths between two vertex sets, or a small separator.
    Menger {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<Vertex>,
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<Vertex>,
        #[arg(long)]
        k: usize,
    },
    /// Largest haven order up to a cap.
    HavenOrder {
        file: PathBuf,
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = SEARCH_BUDGET)]
        budget: u64,
        /// Write the certificate here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check a haven certificate file against the digraph.
    CheckHaven { file: PathBuf, cert: PathBuf },
    /// A linked set of size 2n from a haven of order 3n.
    LinkedSet {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = SEARCH_BUDGET)]
        budget: u64,
    },
    /// Butterfly contraction of one edge.
    Contract {
        file: PathBuf,
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Search for a butterfly minor isomorphic to the pattern file's digraph.
    FindMinor {
        file: PathBuf,
        pattern: PathBuf,
        #[arg(long, default_value_t = MINOR_BUDGET)]
        budget: u64,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Reroute the `h*` and `v*` paths of a disk system to hit in reverse.
    Reroute {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Acyclic grid of size n from the `h*` and `v*` paths.
    ExtractAcyclic {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// Produce a bubble grid on original horizontals instead.
        #[arg(long)]
        bubble: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Cylindrical grid of size n from circuits `c*`, in-paths `in*` and
    /// out-paths `out*`.
    Assemble {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// From undirected `ring*` circuits and `link*` paths to a cylindrical
    /// grid of size n.
    Pipeline {
        file: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Circuits to find before assembling; defaults to 6n.
        #[arg(long)]
        circuits: Option<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Cylindrical grid with its circuits and spoke columns.
    Cyl {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exact,
    Local,
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const BUDGET: i32 = 3;
}

/// Runs one command line (including the program name) and writes the report
/// to `out`. Returns the exit code.
pub fn run_command<I, S>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(out, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::INPUT,
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::BudgetExhausted => exit::BUDGET,
                Error::Precondition(_) | Error::Verification(_) | Error::NotContractible(_) => exit::NEGATIVE,
                _ => exit::INPUT,
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<DgfDocument, Error> {
    parse_dgf(&read(path)?)
}

fn save(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn line(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}: {value}");
}

fn system(doc: &DgfDocument) -> Result<RoutedSystem, Error> {
    let embedding = doc
        .embedding
        .clone()
        .ok_or_else(|| Error::InvalidArgument("the document has no embedding".into()))?;
    Ok(RoutedSystem {
        embedding,
        horizontals: doc.paths_with_prefix("h"),
        verticals: doc.paths_with_prefix("v"),
    })
}

fn config_for(doc: &DgfDocument, file: Option<&Path>) -> Result<PipelineConfig, Error> {
    match file {
        Some(p) => PipelineConfig::from_key_values(&read(p)?),
        None => Ok(doc.config.clone().unwrap_or_default()),
    }
}

/// A document holding a minor with its witness paths and the script that
/// produces it from the input host.
fn minor_document(name: &str, model: &MinorModel, digraph: cylgrid::Digraph, paths: Vec<(String, DirectedPath)>) -> DgfDocument {
    let mut doc = DgfDocument::new(name, digraph);
    for (n, p) in paths {
        doc.push_path(n, p);
    }
    doc.witnesses.push(Witness::Script("model".into(), model.clone()));
    doc
}

fn emit_doc(emit: Option<PathBuf>, doc: &DgfDocument, out: &mut dyn Write) -> Result<(), Error> {
    if let Some(p) = emit {
        save(&p, &serialize_dgf(doc))?;
        line(out, "emitted", p.display());
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Gen { kind: GenKind::Cyl { n } } => {
            let input = AssemblyInput::from_cylindrical_grid(n)?;
            let mut doc = DgfDocument::new(format!("cyl{n}"), input.host().clone());
            doc.embedding = Some(input.embedding.clone());
            for (i, c) in input.circuits.iter().enumerate() {
                doc.push_path(format!("c{}", i + 1), c.clone());
            }
            for (j, p) in input.out_paths.iter().enumerate() {
                doc.push_path(format!("out{}", j + 1), p.clone());
            }
            for (j, p) in input.in_paths.iter().enumerate() {
                doc.push_path(format!("in{}", j + 1), p.clone());
            }
            let _ = write!(out, "{}", serialize_dgf(&doc));
            Ok(exit::OK)
        }
        Command::Scc { file } => {
            let doc = load(&file)?;
            let scc = strong_components(&doc.digraph);
            line(out, "components", scc.count());
            for c in scc.components() {
                line(out, "component", join(c));
            }
            Ok(exit::OK)
        }
        Command::Menger { file, from, to, k } => {
            let doc = load(&file)?;
            let a: VertexSet = from.into_iter().collect();
            let b: VertexSet = to.into_iter().collect();
            match menger_paths(&doc.digraph, &a, &b, k)? {
                MengerOutcome::Paths(ps) => {
                    line(out, "result", "paths");
                    for p in ps {
                        line(out, "path", join(p.vertices()));
                    }
                    Ok(exit::OK)
                }
                MengerOutcome::Separator(s) => {
                    line(out, "result", "separator");
                    line(out, "separator", join(&s));
                    Ok(exit::NEGATIVE)
                }
            }
        }
        Command::HavenOrder { file, cap, budget, emit } => {
            let doc = load(&file)?;
            let h = haven_order(&doc.digraph, cap, budget)?;
            line(out, "haven_order", h.order);
            line(out, "entries", h.certificate.table.len());
            if let Some(p) = emit {
                save(&p, &write_certificate(&h.certificate))?;
                line(out, "emitted", p.display());
            }
            Ok(exit::OK)
        }
        Command::CheckHaven { file, cert } => {
            let doc = load(&file)?;
            let c = parse_certificate(&read(&cert)?)?;
            let r = check_haven(&doc.digraph, &c);
            line(out, "order", c.order);
            line(out, "valid", r.is_valid());
            for v in &r.violations {
                line(out, "violation", format!("{}: {}", v.clause, v.detail));
            }
            Ok(if r.is_valid() { exit::OK } else { exit::NEGATIVE })
        }
        Command::LinkedSet { file, n, budget } => {
            let doc = load(&file)?;
            let cert = match find_haven(&doc.digraph, 3 * n, budget)? {
                HavenSearch::Found(c) => c,
                HavenSearch::None => {
                    line(out, "result", format!("no haven of order {}", 3 * n));
                    return Ok(exit::NEGATIVE);
                }
                HavenSearch::Exhausted => return Err(Error::BudgetExhausted),
            };
            let x = extract_linked_set(&doc.digraph, &cert, n, budget)?;
            line(out, "linked_set", join(&x.set));
            match is_linked_set(&doc.digraph, &x.set, budget)? {
                LinkedVerdict::Linked => {
                    line(out, "verified", true);
                    Ok(exit::OK)
                }
                LinkedVerdict::NotLinked { separator, .. } => {
                    Err(Error::Verification(format!("separated by {}", join(&separator))))
                }
            }
        }
        Command::Contract { file, edge, emit } => {
            let doc = load(&file)?;
            let d = butterfly_contract(&doc.digraph, edge)?;
            line(out, "vertices", d.vertex_count());
            line(out, "edges", d.edge_count());
            emit_doc(emit, &DgfDocument::new(doc.name.clone(), d), out)?;
            Ok(exit::OK)
        }
        Command::FindMinor { file, pattern, budget, emit } => {
            let doc = load(&file)?;
            let pat = load(&pattern)?;
            match find_butterfly_minor(&doc.digraph, &pat.digraph, budget) {
                MinorSearch::Found(m) => {
                    let image = m.replay(&doc.digraph)?;
                    line(out, "found", true);
                    line(out, "steps", m.steps.len());
                    emit_doc(emit, &minor_document(&doc.name, &m, image, vec![]), out)?;
                    Ok(exit::OK)
                }
                MinorSearch::NotFound => {
                    line(out, "found", false);
                    Ok(exit::NEGATIVE)
                }
                MinorSearch::Exhausted => Err(Error::BudgetExhausted),
            }
        }
        Command::Reroute { file, mode, emit } => {
            let doc = load(&file)?;
            let sys = system(&doc)?;
            let mode = match mode {
                Mode::Exact => RerouteMode::Exact,
                Mode::Local => RerouteMode::Local,
            };
            let r = reroute_disk(&sys, mode)?;
            let used = |s: &RoutedSystem| {
                s.horizontals
                    .iter()
                    .chain(&s.verticals)
                    .flat_map(|p| p.edges().iter().copied())
                    .collect::<std::collections::BTreeSet<_>>()
                    .len()
            };
            line(out, "edges_before", used(&sys));
            line(out, "edges_after", used(&r.routing));
            line(out, "steps", r.model.steps.len());
            let named = named(&r.system.horizontals, &r.system.verticals);
            emit_doc(emit, &minor_document(&doc.name, &r.model, r.system.host().clone(), named), out)?;
            Ok(exit::OK)
        }
        Command::ExtractAcyclic { file, n, bubble, emit } => {
            let doc = load(&file)?;
            let sys = system(&doc)?;
            let budget = config_for(&doc, None)?.acyclic_budget;
            let g = if bubble {
                get_bubble_grid(&sys, n, budget)?
            } else {
                get_acyclic_grid(&sys, n, budget)?
            };
            line(out, "branch", format!("{:?}", g.branch));
            line(out, "size", g.witness.size());
            let named = named(&g.witness.horizontals, &g.witness.verticals);
            emit_doc(emit, &minor_document(&doc.name, &g.model, g.digraph.clone(), named), out)?;
            Ok(exit::OK)
        }
        Command::Assemble { file, n, emit } => {
            let doc = load(&file)?;
            let input = AssemblyInput {
                embedding: doc
                    .embedding
                    .clone()
                    .ok_or_else(|| Error::InvalidArgument("the document has no embedding".into()))?,
                circuits: doc.paths_with_prefix("c"),
                in_paths: doc.paths_with_prefix("in"),
                out_paths: doc.paths_with_prefix("out"),
            };
            let budget = config_for(&doc, None)?.assembly_budget;
            report_assembly(&doc.name, &input, n, budget, emit, out)
        }
        Command::Pipeline { file, config, n, circuits, emit } => {
            let doc = load(&file)?;
            let cfg = config_for(&doc, config.as_deref())?;
            let emb = doc
                .embedding
                .clone()
                .ok_or_else(|| Error::InvalidArgument("the document has no embedding".into()))?;
            let witness = UndirectedWitness {
                circuits: doc.cuts_with_prefix("ring"),
                paths: doc.cuts_with_prefix("link"),
            };
            let raw = find_circuits_and_paths(&emb, &witness, &cfg, circuits.unwrap_or(6 * n))?;
            line(out, "circuits", raw.input.circuits.len());
            line(out, "from_witness", raw.from_witness);
            line(out, "mirrored", raw.mirrored);
            report_assembly(&doc.name, &raw.input, n, cfg.assembly_budget, emit, out)
        }
    }
}

fn named(horizontals: &[DirectedPath], verticals: &[DirectedPath]) -> Vec<(String, DirectedPath)> {
    let hs = horizontals.iter().enumerate().map(|(i, p)| (format!("h{}", i + 1), p.clone()));
    let vs = verticals.iter().enumerate().map(|(i, p)| (format!("v{}", i + 1), p.clone()));
    hs.chain(vs).collect()
}

fn report_assembly(
    name: &str,
    input: &AssemblyInput,
    n: usize,
    budget: u64,
    emit: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let a = assemble_cylindrical_grid(input, n, budget)?;
    line(out, "branch", format!("{:?}", a.branch));
    line(out, "size", a.witness.n);
    line(out, "vertices", a.digraph.vertex_count());
    line(out, "edges", a.digraph.edge_count());
    let paths = a
        .witness
        .circuits
        .iter()
        .enumerate()
        .map(|(i, c)| (format!("c{}", i + 1), c.clone()))
        .collect();
    emit_doc(emit, &minor_document(name, &a.model, a.digraph.clone(), paths), out)?;
    Ok(exit::OK)
}
