//! The scenario language: constructions, divisors, contractions, covers,
//! assertions and queries are scripted as semicolon-terminated statements
//! in `.surf` files.
//!
//! ```text
//! base C pic0(e) points(x, xp);
//! ruled S;
//! blowup E1 at B * F;
//! blowup E2 at E1 * F;
//! divisor D = 3*Bp + F;
//! assert D . D == 4 : "X: (3Bp+F)^2 = 4";
//! contract pi = {B, E1};
//! assert disc(pi)[B] == -2;
//! ```

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

use std::fmt;

pub use ast::{CenterAst, CmpOp, CoverAst, Expr, ExprKind, Script, Stmt, StmtKind};
pub use lexer::Span;
pub use parser::{parse, parse_bytes};
pub use printer::{print, print_expr, print_stmt};

/// Diagnostic categories, each with a stable code.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DiagCode {
    /// E001: tokenizer-level problem (bad character, bad string, bad UTF-8).
    Lexical,
    /// E002: grammar-level problem.
    Syntax,
    /// E003: a name declared twice (or shadowing a reserved name).
    Redefinition,
    /// E004: a name used before its declaration.
    UseBeforeDef,
    /// E005: an operation applied to values of the wrong kind at run time.
    Type,
    /// E006: a runtime usage error from the engine.
    Runtime,
}

impl DiagCode {
    pub fn code(self) -> &'static str {
        match self {
            DiagCode::Lexical => "E001",
            DiagCode::Syntax => "E002",
            DiagCode::Redefinition => "E003",
            DiagCode::UseBeforeDef => "E004",
            DiagCode::Type => "E005",
            DiagCode::Runtime => "E006",
        }
    }
}

/// A positioned error with the expected-token set when applicable.
#[derive(Clone, PartialEq, Debug)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
    pub span: Span,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: String, span: Span) -> Diagnostic {
        Diagnostic {
            code,
            message,
            span,
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}:{}]: {}",
            self.code.code(),
            self.span.line,
            self.span.col,
            self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}
