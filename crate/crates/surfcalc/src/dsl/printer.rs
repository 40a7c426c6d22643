//! Canonical printer. `parse(print(ast)) == ast`, and printing is
//! idempotent on already-canonical text.

use std::fmt::Write;

use super::ast::*;

fn escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out
}

// Precedence levels: additive 1, dot 2, multiplicative 3, unary 4,
// atoms 5. Parentheses are emitted exactly where reparsing would
// otherwise change the tree.
fn level(e: &ExprKind) -> u8 {
    match e {
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Dot(..) => 2,
        ExprKind::Mul(..) => 3,
        ExprKind::Neg(..) => 4,
        _ => 5,
    }
}

fn print_child(out: &mut String, child: &Expr, min_level: u8) {
    if level(&child.kind) < min_level {
        out.push('(');
        print_expr_into(out, child);
        out.push(')');
    } else {
        print_expr_into(out, child);
    }
}

fn print_expr_into(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Number(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Ident(name) => out.push_str(name),
        ExprKind::Neg(inner) => {
            out.push('-');
            print_child(out, inner, 4);
        }
        ExprKind::Add(a, b) => {
            print_child(out, a, 1);
            out.push_str(" + ");
            // Left-associative: a right-hand additive child needs parens.
            print_child(out, b, 2);
        }
        ExprKind::Sub(a, b) => {
            print_child(out, a, 1);
            out.push_str(" - ");
            print_child(out, b, 2);
        }
        ExprKind::Dot(a, b) => {
            print_child(out, a, 2);
            out.push_str(" . ");
            print_child(out, b, 3);
        }
        ExprKind::Mul(a, b) => {
            print_child(out, a, 3);
            out.push('*');
            print_child(out, b, 4);
        }
        ExprKind::Call { func, args, index } => {
            out.push_str(func);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr_into(out, a);
            }
            out.push(')');
            if let Some(idx) = index {
                let _ = write!(out, "[{idx}]");
            }
        }
        ExprKind::PullbackPic0(inner) => {
            out.push_str("p*(");
            print_expr_into(out, inner);
            out.push(')');
        }
        ExprKind::CurveSet(names) => {
            let _ = write!(out, "{{{}}}", names.join(", "));
        }
        ExprKind::MmpContract(names) => {
            let _ = write!(out, "contract{{{}}}", names.join(", "));
        }
        ExprKind::MmpFiber(name) => {
            let _ = write!(out, "fiber{{{name}}}");
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    print_expr_into(&mut out, e);
    out
}

pub fn print_stmt(stmt: &Stmt) -> String {
    let mut out = String::new();
    match &stmt.kind {
        StmtKind::Base {
            curve,
            symbols,
            points,
        } => {
            let _ = write!(
                out,
                "base {curve} pic0({}) points({}, {})",
                symbols.join(", "),
                points.0,
                points.1
            );
        }
        StmtKind::Relation { lhs, rhs } => {
            let _ = write!(out, "relation {} == {}", print_expr(lhs), print_expr(rhs));
        }
        StmtKind::Ruled { name } => {
            let _ = write!(out, "ruled {name}");
        }
        StmtKind::Blowup { name, center } => {
            let center_text = match center {
                CenterAst::Intersection(a, b) => format!("{a} * {b}"),
                CenterAst::PointOn { point, curve } => format!("point {point} on {curve}"),
                CenterAst::General => "general".to_string(),
            };
            let _ = write!(out, "blowup {name} at {center_text}");
        }
        StmtKind::Divisor { name, value } => {
            let _ = write!(out, "divisor {name} = {}", print_expr(value));
        }
        StmtKind::Contract { name, curves } => {
            let _ = write!(out, "contract {name} = {{{}}}", curves.join(", "));
        }
        StmtKind::Cover { name, kind } => match kind {
            CoverAst::Cyclic {
                degree,
                branch,
                over,
            } => {
                let _ = write!(
                    out,
                    "cover {name} = cyclic({}, {}) over {over}",
                    print_expr(degree),
                    print_expr(branch)
                );
            }
            CoverAst::Fiber {
                cover,
                contraction,
            } => {
                let _ = write!(out, "cover {name} = fiber({cover}, {contraction})");
            }
        },
        StmtKind::Assert {
            lhs,
            cmp,
            citation,
        } => {
            let _ = write!(out, "assert {}", print_expr(lhs));
            if let Some((op, rhs)) = cmp {
                let op_text = match op {
                    CmpOp::Eq => "==",
                    CmpOp::Ne => "!=",
                };
                let _ = write!(out, " {op_text} {}", print_expr(rhs));
            }
            if let Some(c) = citation {
                let _ = write!(out, " : \"{}\"", escape(c));
            }
        }
        StmtKind::Query { expr, citation } => {
            let _ = write!(out, "query {}", print_expr(expr));
            if let Some(c) = citation {
                let _ = write!(out, " : \"{}\"", escape(c));
            }
        }
        StmtKind::Report { label } => {
            out.push_str("report");
            if let Some(l) = label {
                let _ = write!(out, " \"{}\"", escape(l));
            }
        }
    }
    out.push(';');
    out
}

/// Canonical text of a script: one statement per line.
pub fn print(script: &Script) -> String {
    let mut out = String::new();
    for stmt in &script.statements {
        out.push_str(&print_stmt(stmt));
        out.push('\n');
    }
    out
}
