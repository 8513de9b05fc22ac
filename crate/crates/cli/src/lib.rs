//! The `ddkg` command line: model inspection, Hom queries, functor
//! evaluation, AR-mesh export and certification.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ddkg_core::certifier::{certify, default_window, DEFAULT_DEPTH};
use ddkg_core::algebra::{QuiverArrow, ZeroRelation};
use ddkg_core::{
    build_bound_quiver, eval_fp, is_in_c0, support_region, FpFunctor, Gamma, GentleTriple, MorphismKey,
    VertexId, Window,
};

mod dot;

pub use dot::export_dot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ddkg", version, about = "Krull-Gabriel dimension of derived-discrete algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TripleArgs {
    #[arg(long)]
    r: i64,
    #[arg(long)]
    n: i64,
    #[arg(long)]
    m: i64,
}

impl TripleArgs {
    fn triple(&self) -> Result<GentleTriple> {
        Ok(GentleTriple::new(self.r, self.n, self.m)?)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the JSON result to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WindowArgs {
    /// Coordinate box x_lo x_hi y_lo y_hi.
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
}

impl WindowArgs {
    fn window(&self) -> Window {
        match self.window.as_deref() {
            Some(&[a, b, c, d]) => Window::rect(a, b, c, d),
            _ => default_window(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the bound quiver and its mode.
    Model {
        #[command(flatten)]
        triple: TripleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List a basis of Hom(from, to).
    Hom {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        from: VertexId,
        #[arg(long)]
        to: VertexId,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compose two basis morphisms: g after f.
    Compose {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        f: MorphismKey,
        #[arg(long)]
        g: MorphismKey,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print the outgoing arrow fan of a vertex.
    Fan {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        vertex: VertexId,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dimension of a finitely presented functor at a vertex.
    Eval {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_name = "PATH")]
        functor: PathBuf,
        #[arg(long)]
        at: VertexId,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Symbolic support of a finitely presented functor.
    Support {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_name = "PATH")]
        functor: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Whether a finitely presented functor has finite length.
    #[command(name = "inC0")]
    InC0 {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_name = "PATH")]
        functor: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The two sink maps of the Auslander-Reiten triangle at a vertex.
    Ar {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        vertex: VertexId,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Export the Auslander-Reiten mesh of a window as a DOT digraph.
    ArExport {
        #[command(flatten)]
        triple: TripleArgs,
        #[command(flatten)]
        window: WindowArgs,
        /// Write to PATH; standard output when omitted.
        #[arg(long, value_name = "PATH", num_args = 0..=1)]
        dot: Option<Option<PathBuf>>,
    },
    /// Replay the dimension argument on a window and emit a certificate.
    Certify {
        #[command(flatten)]
        triple: TripleArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Serialize)]
struct ModelJson {
    r: u32,
    n: u32,
    m: u32,
    mode: &'static str,
    vertices: Vec<i64>,
    arrows: Vec<QuiverArrow>,
    relations: Vec<ZeroRelation>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    text
}

fn emit<T: Serialize>(stdout: &mut dyn Write, out: &OutputArgs, value: &T) -> Result<()> {
    let text = to_json(value);
    match &out.json {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_functor(g: &Gamma, path: &Path) -> Result<FpFunctor> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f: FpFunctor =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    f.validate(g)?;
    Ok(f)
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Model { triple, out } => {
            let t = triple.triple()?;
            let q = build_bound_quiver(&t);
            let value = ModelJson {
                r: t.r(),
                n: t.n(),
                m: t.m(),
                mode: t.mode().as_str(),
                vertices: q.vertices,
                arrows: q.arrows,
                relations: q.relations,
            };
            emit(stdout, &out, &value)?;
        }
        Command::Hom { triple, from, to, out } => {
            let g = Gamma::new(triple.triple()?);
            g.check_vertex(&from)?;
            g.check_vertex(&to)?;
            emit(stdout, &out, &g.hom_basis(&from, &to))?;
        }
        Command::Compose { triple, f, g: outer, out } => {
            let g = Gamma::new(triple.triple()?);
            emit(stdout, &out, &g.compose(&outer, &f)?)?;
        }
        Command::Fan { triple, vertex, out } => {
            let g = Gamma::new(triple.triple()?);
            emit(stdout, &out, &g.arrow_fan(&vertex)?)?;
        }
        Command::Eval { triple, functor, at, out } => {
            let g = Gamma::new(triple.triple()?);
            let f = load_functor(&g, &functor)?;
            g.check_vertex(&at)?;
            emit(stdout, &out, &json!({ "vertex": at, "dim": eval_fp(&g, &f, &at) }))?;
        }
        Command::Support { triple, functor, out } => {
            let g = Gamma::new(triple.triple()?);
            let f = load_functor(&g, &functor)?;
            emit(stdout, &out, &support_region(&g, &f))?;
        }
        Command::InC0 { triple, functor, out } => {
            let g = Gamma::new(triple.triple()?);
            let f = load_functor(&g, &functor)?;
            emit(stdout, &out, &json!({ "in_c0": is_in_c0(&g, &f) }))?;
        }
        Command::Ar { triple, vertex, out } => {
            let g = Gamma::new(triple.triple()?);
            let sinks = g.ar_sink_maps(&vertex)?;
            emit(stdout, &out, &json!({ "vertex": vertex, "sink_maps": sinks }))?;
        }
        Command::ArExport { triple, window, dot } => {
            let text = export_dot(triple.triple()?, window.window().region())?;
            match dot.flatten() {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => stdout.write_all(text.as_bytes())?,
            }
        }
        Command::Certify { triple, window, depth, out } => {
            let cert = certify(triple.triple()?, &window.window(), depth);
            emit(stdout, &out, &cert)?;
            if !cert.passed() {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_USAGE
        }
    }
}
