//! The `hseifert` command line.
//!
//! The main artifact of each command goes to `--out` or stdout; short human-readable summaries go to stderr unless
//! `--quiet` is given.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::extension::synthesize_extension_link;
use crate::format::{
    parse_hg, parse_plat, parse_surf, parse_tgl, serialize_hg, serialize_surf, serialize_tgl, ParseError,
};
use crate::homology::{
    link_class, presentation_text, relator_matrix, solve_extension_coefficients, HomologyError, HomologyPresentation,
};
use crate::model::{validate_diagram, validate_graph, HeegaardGraph, LinkDiagram};
use crate::plat::{compile_heegaard_graph, validate_plat, PlatError};
use crate::render::render_svg;
use crate::seifert::{count_seifert_circles, generalized_seifert, resolve_crossings, SeifertError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNSOLVABLE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hseifert", version, about = "Spanning surfaces for links in integral homology spheres")]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress summaries on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an input file. A .tgl is checked against the graph given first.
    Check {
        file: PathBuf,
        /// Diagram to check against the graph in `file`.
        diagram: Option<PathBuf>,
    },
    /// Print the relator matrix and decide whether the graph is a ZHS.
    Homology { graph: PathBuf },
    /// Add the extension link that balances a diagram.
    Extend { graph: PathBuf, diagram: PathBuf },
    /// Build the spanning surface and write a .surf report.
    Seifert { graph: PathBuf, diagram: PathBuf },
    /// Compile a flat plat into a Heegaard graph.
    Plat2hg {
        plat: PathBuf,
        /// Compile even when a writhe differs from its framing.
        #[arg(long)]
        allow_framing_mismatch: bool,
    },
    /// Draw a graph and optionally a diagram as SVG.
    Render {
        graph: PathBuf,
        diagram: Option<PathBuf>,
        /// Color strands by Seifert circle after running the pipeline.
        #[arg(long)]
        seifert: bool,
    },
}

/// Failure with an exit code and a message for stderr.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, err: ParseError) -> Failure {
    let lines: Vec<String> = err.diagnostics.iter().map(|d| format!("{}:{d}", path.display())).collect();
    Failure::new(EXIT_IO, lines.join("\n"))
}

fn load_graph(path: &Path) -> Result<HeegaardGraph, Failure> {
    let graph = parse_hg(&read(path)?).map_err(|e| parse_failure(path, e))?;
    let report = validate_graph(&graph);
    if !report.is_valid() {
        return Err(Failure::new(EXIT_INVALID, format!("{}: {report}", path.display())));
    }
    Ok(graph)
}

fn load_diagram(path: &Path, graph: &HeegaardGraph) -> Result<LinkDiagram, Failure> {
    let diagram = parse_tgl(&read(path)?, graph).map_err(|e| parse_failure(path, e))?;
    let report = validate_diagram(graph, &diagram);
    if !report.is_valid() {
        return Err(Failure::new(EXIT_INVALID, format!("{}: {report}", path.display())));
    }
    Ok(diagram)
}

fn homology_failure(e: HomologyError) -> Failure {
    match e {
        HomologyError::NoIntegralSolution => {
            Failure::new(EXIT_UNSOLVABLE, "no integral solution: the link is not null-homologous over the integers")
        }
        other => Failure::new(EXIT_UNSOLVABLE, other.to_string()),
    }
}

fn seifert_failure(e: SeifertError) -> Failure {
    match e {
        SeifertError::Homology(h) => homology_failure(h),
        SeifertError::Invalid(r) => Failure::new(EXIT_INVALID, r.to_string()),
        other => Failure::new(EXIT_INVALID, other.to_string()),
    }
}

fn extension_of(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

struct Output {
    main: String,
    summary: Vec<String>,
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Check { file, diagram } => {
            let text = read(file)?;
            let summary = match (extension_of(file), diagram) {
                ("plat", _) => {
                    let plat = parse_plat(&text).map_err(|e| parse_failure(file, e))?;
                    let issues = validate_plat(&plat);
                    if !issues.is_empty() {
                        let lines: Vec<String> = issues.iter().map(|i| format!("{}: {i}", file.display())).collect();
                        return Err(Failure::new(EXIT_INVALID, lines.join("\n")));
                    }
                    format!("{}: valid plat, {} bridges", file.display(), plat.bridges.len())
                }
                ("surf", _) => {
                    let s = parse_surf(&text).map_err(|e| parse_failure(file, e))?;
                    if s.chi != s.h0 as i64 - s.h1() as i64 + s.h2 as i64 {
                        return Err(Failure::new(
                            EXIT_INVALID,
                            format!("{}: chi disagrees with the handle counts", file.display()),
                        ));
                    }
                    format!("{}: valid surface report", file.display())
                }
                (_, Some(d)) => {
                    let graph = load_graph(file)?;
                    load_diagram(d, &graph)?;
                    format!("{}: valid diagram over {}", d.display(), file.display())
                }
                _ => {
                    load_graph(file)?;
                    format!("{}: valid graph", file.display())
                }
            };
            Ok(Output { main: String::new(), summary: vec![summary] })
        }
        Command::Homology { graph } => {
            let g = load_graph(graph)?;
            let p = HomologyPresentation::from_graph(&g).map_err(homology_failure)?;
            let mut main = String::new();
            main.push_str(&format!("presentation: {}\n", presentation_text(&p)));
            for (i, row) in p.relators.to_rows().iter().enumerate() {
                let cells: Vec<String> = row.iter().map(i64::to_string).collect();
                main.push_str(&format!("row {}: {}\n", i + 1, cells.join(" ")));
            }
            main.push_str(&format!("determinant: {}\n", p.determinant));
            let snf: Vec<String> = p.snf.iter().map(i64::to_string).collect();
            main.push_str(&format!("smith: {}\n", snf.join(" ")));
            main.push_str(&format!("ZHS: {}, det = {}\n", if p.is_zhs { "yes" } else { "no" }, p.determinant.abs()));
            Ok(Output { main, summary: Vec::new() })
        }
        Command::Extend { graph, diagram } => {
            let g = load_graph(graph)?;
            let d = load_diagram(diagram, &g)?;
            let class = link_class(&g, &d);
            let x = solve_extension_coefficients(&relator_matrix(&g), &class).map_err(homology_failure)?;
            let (augmented, plan) =
                synthesize_extension_link(&g, &d, &x).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
            let xs: Vec<String> = x.iter().map(i64::to_string).collect();
            Ok(Output {
                main: serialize_tgl(&augmented),
                summary: vec![format!("k = {}", plan.k()), format!("x = ({})", xs.join(", "))],
            })
        }
        Command::Seifert { graph, diagram } => {
            let g = load_graph(graph)?;
            let d = load_diagram(diagram, &g)?;
            let run = generalized_seifert(&g, &d).map_err(seifert_failure)?;
            let s = &run.surface;
            Ok(Output {
                main: serialize_surf(s),
                summary: vec![format!(
                    "h0 = {}, h1 = {}, h2 = {}, chi = {}, boundary = {}, genus = {}",
                    s.h0,
                    s.h1(),
                    s.h2,
                    s.chi,
                    s.boundary,
                    s.genus
                )],
            })
        }
        Command::Plat2hg { plat, allow_framing_mismatch } => {
            let p = parse_plat(&read(plat)?).map_err(|e| parse_failure(plat, e))?;
            let compiled = compile_heegaard_graph(&p, *allow_framing_mismatch).map_err(|e| match e {
                PlatError::Invalid(_) | PlatError::FramingMismatch { .. } | PlatError::MissingFraming(_) => {
                    Failure::new(EXIT_INVALID, format!("{}: {e}", plat.display()))
                }
                other => Failure::new(EXIT_INVALID, other.to_string()),
            })?;
            let ws: Vec<String> = compiled.writhes.iter().map(i64::to_string).collect();
            Ok(Output {
                main: serialize_hg(&compiled.graph),
                summary: vec![format!("genus {}, writhes {}", compiled.graph.genus, ws.join(" "))],
            })
        }
        Command::Render { graph, diagram, seifert } => {
            let g = load_graph(graph)?;
            let d = diagram.as_ref().map(|p| load_diagram(p, &g)).transpose()?;
            let svg = match (&d, seifert) {
                (Some(d), true) => {
                    let run = generalized_seifert(&g, d).map_err(seifert_failure)?;
                    let sys = resolve_crossings(&run.augmented).map_err(seifert_failure)?;
                    let circles = count_seifert_circles(&sys, &run.matching).map_err(seifert_failure)?;
                    render_svg(&g, Some(&run.augmented), Some(&circles))
                }
                _ => render_svg(&g, d.as_ref(), None),
            };
            Ok(Output { main: svg, summary: Vec::new() })
        }
    }
}

/// Run with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_IO;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if !out.main.is_empty() {
                match &cli.out {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, &out.main) {
                            let _ = writeln!(stderr, "{}: {e}", path.display());
                            return EXIT_IO;
                        }
                    }
                    None => {
                        let _ = stdout.write_all(out.main.as_bytes());
                    }
                }
            }
            if !cli.quiet {
                for line in out.summary {
                    let _ = writeln!(stderr, "{line}");
                }
            }
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.message);
            f.code
        }
    }
}
