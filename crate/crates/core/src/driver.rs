//! The whole pipeline: parse, elaborate, validity, check at depth `k`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::check::check_signature_with;
use crate::diag::{sort_diagnostics, Code, Diagnostic};
use crate::surface::elab::elaborate;
use crate::surface::parser::parse;
use crate::syntax::{Depth, Signature};
use crate::validity::{validity_report, DefReport};

/// Parse and elaborate. Declarations with errors are left out of the
/// signature.
pub fn load(src: &str) -> (Signature, Vec<Diagnostic>) {
    let (decls, mut diags) = parse(src);
    let (sig, more) = elaborate(&decls);
    diags.extend(more);
    (sig, diags)
}

#[derive(Clone, Debug)]
pub struct Options {
    pub depth: Depth,
    pub max_memo_entries: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { depth: 4, max_memo_entries: usize::MAX }
    }
}

pub struct Outcome {
    pub sig: Signature,
    pub validity: Vec<DefReport>,
    /// Deduplicated and ordered by source position.
    pub diagnostics: Vec<Diagnostic>,
}

pub fn check_source(src: &str, opts: &Options) -> Outcome {
    let (sig, mut diags) = load(src);
    let (validity, vdiags) = validity_report(&sig);
    diags.extend(vdiags);
    diags.extend(check_signature_with(&sig, opts.depth, opts.max_memo_entries));
    Outcome { sig, validity, diagnostics: finish(diags) }
}

/// Drop repeats of the same code at the same place, then sort.
pub fn finish(diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    let mut seen: BTreeSet<(Code, Option<(usize, usize)>)> = BTreeSet::new();
    let mut out: Vec<Diagnostic> =
        diags.into_iter().filter(|d| seen.insert((d.code, d.span.map(|s| (s.start, s.end))))).collect();
    sort_diagnostics(&mut out);
    out
}
