use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use colfw_core::diag::Diagnostic;
use colfw_core::driver::{check_source, finish, load, Options};
use colfw_core::subst::erase;
use colfw_core::surface::print::{PrintOptions, Printer};
use colfw_core::syntax::{DeclBody, Name, Type};
use colfw_core::unfold::{DefTable, Expander};
use colfw_core::validity::validity_report;

mod render;

#[derive(Parser)]
#[command(name = "colfw", version, about = "Checker for CoLF^ω signatures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse, elaborate, check validity and type-check at depth K.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        show_implicit: bool,
        #[arg(long)]
        max_memo_entries: Option<usize>,
    },
    /// Print the depth-K expansion of a definition.
    Unfold {
        file: PathBuf,
        name: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        show_implicit: bool,
    },
    /// Report contractiveness, pre-pattern form and trace validity of each definition.
    Validity {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the simple type of a constant or definition.
    Erase {
        file: PathBuf,
        name: String,
        #[arg(long)]
        show_implicit: bool,
    },
    /// Print the elaborated signature.
    Parse {
        file: PathBuf,
        #[arg(long)]
        show_implicit: bool,
    },
}

const CLEAN: u8 = 0;
const DIAGNOSTICS: u8 = 1;
const USAGE: u8 = 2;

fn color() -> bool {
    match std::env::var("COLFW_COLOR").as_deref() {
        Ok("never") => false,
        Ok("always") => true,
        _ => std::io::stderr().is_terminal(),
    }
}

struct Input {
    name: String,
    src: String,
}

fn read(path: &PathBuf) -> Result<Input, ExitCode> {
    match std::fs::read_to_string(path) {
        Ok(src) => Ok(Input { name: path.display().to_string(), src }),
        Err(e) => {
            eprintln!("colfw: cannot read {}: {}", path.display(), e);
            Err(ExitCode::from(USAGE))
        }
    }
}

/// Emit diagnostics and pick the exit code.
fn report(input: &Input, diags: &[Diagnostic], json: bool) -> u8 {
    if json {
        println!("{}", render::json(&input.name, diags));
    } else {
        eprint!("{}", render::text(&input.name, &input.src, diags, color()));
        let n = diags.iter().filter(|d| d.is_error()).count();
        if n > 0 {
            eprintln!("colfw: {} error{}", n, if n == 1 { "" } else { "s" });
        }
    }
    if diags.iter().any(|d| d.is_error()) {
        DIAGNOSTICS
    } else {
        CLEAN
    }
}

fn print_opts(show_implicit: bool) -> PrintOptions {
    PrintOptions { show_implicit }
}

fn drop_pis(mut a: &Type, n: usize) -> &Type {
    for _ in 0..n {
        match a {
            Type::Pi(_, _, b) => a = b,
            Type::Atom(..) => break,
        }
    }
    a
}

fn run(cmd: Cmd) -> Result<u8, ExitCode> {
    match cmd {
        Cmd::Check { file, depth, json, show_implicit: _, max_memo_entries } => {
            let input = read(&file)?;
            let mut opts = Options { depth, ..Options::default() };
            if let Some(n) = max_memo_entries {
                opts.max_memo_entries = n.max(1);
            }
            let out = check_source(&input.src, &opts);
            Ok(report(&input, &out.diagnostics, json))
        }
        Cmd::Unfold { file, name, depth, show_implicit } => {
            let input = read(&file)?;
            let (sig, diags) = load(&input.src);
            let diags = finish(diags);
            if diags.iter().any(|d| d.is_error()) {
                return Ok(report(&input, &diags, false));
            }
            let name = Name::new(&name);
            match sig.get(&name).map(|d| &d.body) {
                Some(DeclBody::Def(..)) => {}
                Some(_) => {
                    eprintln!("colfw: `{}` is not a definition", name);
                    return Ok(DIAGNOSTICS);
                }
                None => {
                    eprintln!("colfw: unknown definition `{}`", name);
                    return Ok(DIAGNOSTICS);
                }
            }
            let mut ex = Expander::new(DefTable::from_signature(&sig));
            match ex.expand_def(&name, depth) {
                Ok(t) => {
                    println!("{}", Printer::new(Some(&sig), print_opts(show_implicit)).term(&t));
                    Ok(CLEAN)
                }
                Err(e) => {
                    eprintln!("colfw: {}", e);
                    Ok(DIAGNOSTICS)
                }
            }
        }
        Cmd::Validity { file, json } => {
            let input = read(&file)?;
            let (sig, diags) = load(&input.src);
            let diags = finish(diags);
            if diags.iter().any(|d| d.is_error()) {
                return Ok(report(&input, &diags, json));
            }
            let (reports, _) = validity_report(&sig);
            if json {
                println!("{}", render::validity_json(&input.name, &reports));
            } else {
                print!("{}", render::validity_text(&reports));
            }
            Ok(if reports.iter().all(|r| r.valid && r.contractive) { CLEAN } else { DIAGNOSTICS })
        }
        Cmd::Erase { file, name, show_implicit } => {
            let input = read(&file)?;
            let (sig, diags) = load(&input.src);
            let diags = finish(diags);
            if diags.iter().any(|d| d.is_error()) {
                return Ok(report(&input, &diags, false));
            }
            let Some(d) = sig.get_str(&name) else {
                eprintln!("colfw: unknown name `{}`", name);
                return Ok(DIAGNOSTICS);
            };
            let Some(ty) = d.ty() else {
                eprintln!("colfw: `{}` is a type family; families have kinds, not types", name);
                return Err(ExitCode::from(USAGE));
            };
            let hide = if show_implicit { 0 } else { d.implicit };
            println!("{}", erase(drop_pis(ty, hide)));
            Ok(CLEAN)
        }
        Cmd::Parse { file, show_implicit } => {
            let input = read(&file)?;
            let (sig, diags) = load(&input.src);
            let diags = finish(diags);
            print!("{}", Printer::new(Some(&sig), print_opts(show_implicit)).signature(&sig));
            Ok(report(&input, &diags, false))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { CLEAN });
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(code) => code,
    }
}
