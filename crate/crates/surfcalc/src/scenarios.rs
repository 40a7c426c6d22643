//! Built-in golden suites: the constructions of the running example as
//! executable scripts with frozen expected values.
//!
//! The suites are the shipped `.surf` fixtures, embedded verbatim, so the
//! text fixtures and the built-in verification can never drift apart.

use crate::dsl::{self, CmpOp, Script, StmtKind};
use crate::error::{EngineError, Result};
use crate::exec::run_script;
use crate::report::Report;

pub const SUITE_NAMES: [&str; 4] = [
    "section4_X",
    "section4_Xtilde",
    "section4_mmp",
    "section5_cover",
];

const SECTION4_X: &str = include_str!("../fixtures/section4_X.surf");
const SECTION4_XTILDE: &str = include_str!("../fixtures/section4_Xtilde.surf");
const SECTION4_MMP: &str = include_str!("../fixtures/section4_mmp.surf");
const SECTION5_COVER: &str = include_str!("../fixtures/section5_cover.surf");

/// One frozen expectation: the asserted query, its expected value, and a
/// human-readable location of the claim within the construction.
#[derive(Clone, Debug)]
pub struct Expectation {
    pub query: String,
    pub expected: String,
    pub citation: String,
}

#[derive(Clone, Debug)]
pub struct GoldenSuite {
    pub name: &'static str,
    pub source: &'static str,
    pub script: Script,
    pub expectations: Vec<Expectation>,
}

impl GoldenSuite {
    /// Executes the suite.
    pub fn run(&self) -> Result<Report> {
        run_script(&self.script, self.name).map_err(|d| EngineError::Usage(d.to_string()))
    }
}

fn source_of(name: &str) -> Option<&'static str> {
    match name {
        "section4_X" => Some(SECTION4_X),
        "section4_Xtilde" => Some(SECTION4_XTILDE),
        "section4_mmp" => Some(SECTION4_MMP),
        "section5_cover" => Some(SECTION5_COVER),
        _ => None,
    }
}

/// Loads a built-in suite by name.
pub fn builtin(name: &str) -> Result<GoldenSuite> {
    let source = source_of(name).ok_or_else(|| {
        EngineError::Usage(format!(
            "unknown suite `{name}`; available: {}",
            SUITE_NAMES.join(", ")
        ))
    })?;
    let static_name = SUITE_NAMES
        .iter()
        .find(|n| **n == name)
        .expect("source_of and SUITE_NAMES agree");
    let script = dsl::parse(source)
        .map_err(|d| EngineError::Usage(format!("fixture `{name}` does not parse: {d}")))?;
    let mut expectations = Vec::new();
    for stmt in &script.statements {
        if let StmtKind::Assert {
            lhs,
            cmp,
            citation,
        } = &stmt.kind
        {
            let citation = citation.clone().ok_or_else(|| {
                EngineError::Usage(format!("fixture `{name}` has an uncited assertion"))
            })?;
            let (query, expected) = match cmp {
                Some((op, rhs)) => {
                    let op_text = match op {
                        CmpOp::Eq => "==",
                        CmpOp::Ne => "!=",
                    };
                    (
                        format!(
                            "{} {op_text} {}",
                            dsl::print_expr(lhs),
                            dsl::print_expr(rhs)
                        ),
                        dsl::print_expr(rhs),
                    )
                }
                None => (dsl::print_expr(lhs), "true".to_string()),
            };
            expectations.push(Expectation {
                query,
                expected,
                citation,
            });
        }
    }
    Ok(GoldenSuite {
        name: static_name,
        source,
        script,
        expectations,
    })
}

/// All built-in suites in a fixed order.
pub fn all_builtins() -> Vec<GoldenSuite> {
    SUITE_NAMES
        .iter()
        .map(|n| builtin(n).expect("built-in fixtures are well-formed"))
        .collect()
}
