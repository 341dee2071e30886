//! The `geomsem` command line: batch checking, evaluation, syntax tree
//! dumps, and the language server.
//!
//! Results go to stdout; usage and I/O errors go to stderr. Exit status is
//! 0 when nothing at error severity was found, 1 when the program has
//! errors, and 2 when the command itself could not run.

pub mod lsp;

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use geomsem_core::check::{render_json, render_text};
use geomsem_core::syntax::{format_number, parse, print_canonical};
use geomsem_core::{analyze, catalog, evaluate_binding, Coords, Diagnostic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERRORS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "geomsem", version, about = "Semantic checker for geometric relations between rigid bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a program and report diagnostics.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the signature and coordinates of one binding.
    Eval {
        file: PathBuf,
        /// Binding to evaluate.
        #[arg(long = "print", value_name = "NAME")]
        name: String,
        /// Significant digits.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=17))]
        precision: u32,
    },
    /// Dump the syntax tree as JSON.
    Ast { file: PathBuf },
    /// Print the program in canonical layout.
    Fmt {
        file: PathBuf,
        /// Exit 1 instead of printing when the file is not canonical.
        #[arg(long)]
        check: bool,
    },
    /// List every diagnostic code.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Serve diagnostics and hover over stdin/stdout.
    Lsp,
}

/// Color for text diagnostics: `GEOMSEM_COLOR=0|1`, else whether stdout is
/// a terminal.
pub fn color_enabled() -> bool {
    match std::env::var("GEOMSEM_COLOR").as_deref() {
        Ok("1") => true,
        Ok("0") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

fn read(path: &Path, err: &mut dyn Write) -> Option<String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Some(text),
        Err(e) => {
            let _ = writeln!(err, "geomsem: cannot read {}: {e}", path.display());
            None
        }
    }
}

/// Runs a non-server command. Returns the exit status.
pub fn run(command: &Command, color: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match command {
        Command::Check { file, format } => {
            let Some(text) = read(file, err) else { return EXIT_USAGE };
            run_check(&file.display().to_string(), &text, *format, color, out)
        }
        Command::Eval { file, name, precision } => {
            let Some(text) = read(file, err) else { return EXIT_USAGE };
            run_eval(&file.display().to_string(), &text, name, *precision as usize, color, out)
        }
        Command::Ast { file } => {
            let Some(text) = read(file, err) else { return EXIT_USAGE };
            run_ast(&file.display().to_string(), &text, color, out)
        }
        Command::Fmt { file, check } => {
            let Some(text) = read(file, err) else { return EXIT_USAGE };
            let name = file.display().to_string();
            let (program, diags) = parse(&text);
            if !diags.is_empty() {
                let _ = write!(out, "{}", render_text(&name, &diags, color));
                return EXIT_ERRORS;
            }
            let printed = print_canonical(&program);
            if *check {
                if printed == text {
                    return EXIT_OK;
                }
                let _ = writeln!(out, "{name}: not in canonical layout");
                return EXIT_ERRORS;
            }
            let _ = write!(out, "{printed}");
            EXIT_OK
        }
        Command::Catalog { format } => {
            match format {
                Format::Json => {
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(catalog::CATALOG).expect("serializes"));
                }
                Format::Text => {
                    for e in catalog::CATALOG {
                        let op = e.operation.map_or(String::new(), |o| format!(" ({o})"));
                        let _ = writeln!(out, "{:<7} {:<8}{} {}", e.code, e.severity, op, e.description);
                    }
                }
            }
            EXIT_OK
        }
        Command::Lsp => {
            let _ = writeln!(err, "geomsem: the lsp command serves stdin/stdout; use lsp::serve");
            EXIT_USAGE
        }
    }
}

fn status(diags: &[Diagnostic]) -> i32 {
    if diags.iter().any(Diagnostic::is_error) {
        EXIT_ERRORS
    } else {
        EXIT_OK
    }
}

pub fn run_check(file: &str, text: &str, format: Format, color: bool, out: &mut dyn Write) -> i32 {
    let analysis = analyze(text);
    let diags = &analysis.report.diagnostics;
    let _ = match format {
        Format::Text => write!(out, "{}", render_text(file, diags, color)),
        Format::Json => writeln!(out, "{}", render_json(file, diags)),
    };
    status(diags)
}

pub fn run_eval(file: &str, text: &str, name: &str, precision: usize, color: bool, out: &mut dyn Write) -> i32 {
    let analysis = analyze(text);
    match evaluate_binding(&analysis, name) {
        Ok(value) => {
            let _ = writeln!(out, "{}", value.sig.display(analysis.registry()));
            let coords = value.coords.expect("evaluated bindings carry coordinates");
            let _ = writeln!(out, "{}", format_coords(&coords, precision));
            EXIT_OK
        }
        Err(d) => {
            let _ = write!(out, "{}", render_text(file, &[d], color));
            EXIT_ERRORS
        }
    }
}

pub fn run_ast(file: &str, text: &str, color: bool, out: &mut dyn Write) -> i32 {
    let (program, diags) = parse(text);
    if !diags.is_empty() {
        let _ = write!(out, "{}", render_text(file, &diags, color));
        return EXIT_ERRORS;
    }
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&program).expect("syntax trees serialize"));
    EXIT_OK
}

/// `v` rounded to `digits` significant digits, in shortest form.
pub fn round_significant(v: f64, digits: usize) -> String {
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v).parse().expect("formatted float parses");
    // Avoid printing "-0".
    format_number(if rounded == 0.0 { 0.0 } else { rounded })
}

fn row(values: &[f64], digits: usize) -> String {
    let parts: Vec<_> = values.iter().map(|v| round_significant(*v, digits)).collect();
    format!("[{}]", parts.join(", "))
}

/// Vectors as `[x, y, z]`, matrices as rows, twists as `[ω..., v...]`.
pub fn format_coords(c: &Coords, digits: usize) -> String {
    let rows = |rs: &[Vec<f64>]| format!("[{}]", rs.iter().map(|r| row(r, digits)).collect::<Vec<_>>().join(", "));
    match c {
        Coords::Cartesian3(v) => row(&v.to_array(), digits),
        Coords::AngularLinear6(t) => row(&t.to_array(), digits),
        Coords::RotationMatrix(r) => rows(&r.rows().map(|r| r.to_vec())),
        Coords::HomogeneousTransform(t) => rows(&t.to_matrix().map(|r| r.to_vec())),
    }
}
