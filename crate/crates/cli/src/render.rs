//! Text and JSON rendering of diagnostics and reports.

use colfw_core::diag::Diagnostic;
use colfw_core::validity::DefReport;
use serde::Serialize;

pub const JSON_VERSION: u32 = 1;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Item<'a> {
    pub severity: &'a str,
    pub code: &'a str,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
    pub message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub judgment: Option<&'a str>,
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub version: u32,
    pub file: &'a str,
    pub items: Vec<Item<'a>>,
}

pub fn json(file: &str, diags: &[Diagnostic]) -> String {
    let items = diags
        .iter()
        .map(|d| {
            let s = d.span.unwrap_or_default();
            Item {
                severity: d.severity.as_str(),
                code: d.code.as_str(),
                line: s.line,
                col: s.col,
                end_line: s.end_line,
                end_col: s.end_col,
                message: &d.message,
                judgment: d.judgment(),
            }
        })
        .collect();
    serde_json::to_string_pretty(&Report { version: JSON_VERSION, file, items }).expect("serializable")
}

fn paint(color: bool, code: &str, s: &str) -> String {
    if color {
        format!("\x1b[{}m{}\x1b[0m", code, s)
    } else {
        s.to_string()
    }
}

/// `error[E0202]: message` followed by the location and, for kernel
/// errors, the judgment that failed.
pub fn text(file: &str, src: &str, diags: &[Diagnostic], color: bool) -> String {
    let mut out = String::new();
    for d in diags {
        let head = format!("{}[{}]", d.severity.as_str(), d.code.as_str());
        out.push_str(&paint(color, "1;31", &head));
        out.push_str(": ");
        out.push_str(&d.message);
        out.push('\n');
        match d.span {
            Some(s) => {
                out.push_str(&format!("  --> {}:{}:{}\n", file, s.line, s.col));
                if let Some(line) = src.lines().nth(s.line.saturating_sub(1) as usize) {
                    let width = if s.end_line == s.line { (s.end_col.saturating_sub(s.col)).max(1) } else { 1 };
                    out.push_str(&format!("   | {}\n", line));
                    let pad = " ".repeat(s.col.saturating_sub(1) as usize);
                    out.push_str(&format!("   | {}{}\n", pad, paint(color, "1;31", &"^".repeat(width as usize))));
                }
            }
            None => out.push_str(&format!("  --> {}\n", file)),
        }
        if let Some(j) = d.judgment() {
            out.push_str(&format!("   = while checking {}\n", j));
        }
    }
    out
}

#[derive(Serialize)]
struct DefJson<'a> {
    name: &'a str,
    contractive: bool,
    prepattern: bool,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
}

pub fn validity_json(file: &str, reports: &[DefReport]) -> String {
    let defs: Vec<DefJson> = reports
        .iter()
        .map(|r| DefJson {
            name: &r.name,
            contractive: r.contractive,
            prepattern: r.prepattern,
            valid: r.valid,
            witness: r.witness.as_deref(),
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "version": JSON_VERSION, "file": file, "definitions": defs }))
        .expect("serializable")
}

pub fn validity_text(reports: &[DefReport]) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!(
            "{}: contractive {}, prepattern {}, valid {}\n",
            r.name,
            yn(r.contractive),
            yn(r.prepattern),
            yn(r.valid)
        ));
        if let Some(w) = &r.witness {
            out.push_str(&format!("  cycle: {}\n", w));
        }
    }
    out
}
