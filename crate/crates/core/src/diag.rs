//! Diagnostics shared by every stage of the pipeline.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Byte range plus 1-based line/column of both ends. `end` is exclusive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    /// Smallest span covering both.
    pub fn join(self, other: Span) -> Span {
        let (first, _) = if self.start <= other.start { (self, other) } else { (other, self) };
        let last = if self.end >= other.end { self } else { other };
        Span {
            start: first.start,
            end: last.end,
            line: first.line,
            col: first.col,
            end_line: last.end_line,
            end_col: last.end_col,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        }
    }
}

/// Stable diagnostic codes. `E00xx` surface, `E01xx` typing, `E02xx`
/// validity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    Syntax,
    Lexical,
    Duplicate,
    Undeclared,
    CannotInferImplicit,
    OccursCheck,
    UnsolvedHole,
    Shadowing,
    Namespace,
    FamilyUnderApplied,
    FamilyOverApplied,
    SpineArity,
    NeutralAgainstPi,
    LambdaAgainstAtomic,
    TypeMismatch,
    UndefinedSubstitution,
    UnboundHead,
    StubAtPositiveDepth,
    ExpansionFailure,
    NonContractive,
    InvalidCycle,
    UnproductiveCycle,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "E0001",
            Code::Lexical => "E0002",
            Code::Duplicate => "E0003",
            Code::Undeclared => "E0004",
            Code::CannotInferImplicit => "E0005",
            Code::OccursCheck => "E0007",
            Code::UnsolvedHole => "E0008",
            Code::Shadowing => "E0009",
            Code::Namespace => "E0010",
            Code::FamilyUnderApplied => "E0101",
            Code::FamilyOverApplied => "E0102",
            Code::SpineArity => "E0103",
            Code::NeutralAgainstPi => "E0104",
            Code::LambdaAgainstAtomic => "E0105",
            Code::TypeMismatch => "E0106",
            Code::UndefinedSubstitution => "E0107",
            Code::UnboundHead => "E0108",
            Code::StubAtPositiveDepth => "E0109",
            Code::ExpansionFailure => "E0110",
            Code::NonContractive => "E0201",
            Code::InvalidCycle => "E0202",
            Code::UnproductiveCycle => "E0203",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: Option<Span>,
    /// Judgments entered on the way to the failure, outermost first,
    /// each rendered as `judgment@depth`.
    pub trail: Vec<String>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, message: message.into(), span: None, trail: Vec::new() }
    }

    pub fn with_span(mut self, span: Option<Span>) -> Self {
        if self.span.is_none() {
            self.span = span;
        }
        self
    }

    pub fn with_trail(mut self, trail: Vec<String>) -> Self {
        self.trail = trail;
        self
    }

    /// The innermost judgment, if any.
    pub fn judgment(&self) -> Option<&str> {
        self.trail.last().map(String::as_str)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.severity.as_str(), self.code, self.message)
    }
}

/// Sort by source position (diagnostics without a span go last), keeping
/// emission order among equals.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by_key(|d| match d.span {
        Some(s) => (0u8, s.start, s.end),
        None => (1u8, 0, 0),
    });
}
