//! Recursive-descent parser for `.surf` scripts, with a declaration
//! validity pass (single assignment, declared-before-use).

use std::collections::BTreeSet;

use crate::exact::Rational;

use super::ast::*;
use super::lexer::{tokenize, Span, TokKind, Token};
use super::{DiagCode, Diagnostic};

/// Names with fixed meaning in expressions; they can never be declared.
pub const RESERVED_VALUES: &[&str] = &[
    "true",
    "false",
    "yes",
    "no",
    "undetermined",
    "unknown",
    "minimal",
];

/// Builtin callables (besides the keyword-called `verdict`).
pub const BUILTIN_FUNCS: &[&str] = &[
    "xi",
    "pull",
    "disc",
    "obstruction",
    "qgor",
    "coverclass",
    "mpull",
    "tdot",
    "mmp",
    "nef",
    "big",
    "negdef",
];

/// `p` is the projection to the base curve, `K` the canonical class.
pub const RESERVED_NAMES: &[&str] = &["p", "K"];

pub fn is_reserved(name: &str) -> bool {
    RESERVED_VALUES.contains(&name) || BUILTIN_FUNCS.contains(&name) || RESERVED_NAMES.contains(&name)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek2(&self) -> &TokKind {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at(&self, kind: &TokKind) -> bool {
        &self.peek().kind == kind
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if self.at(kind) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokKind) -> Result<Token, Diagnostic> {
        if self.at(&kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[kind.to_string()]))
        }
    }

    fn unexpected(&self, expected: &[String]) -> Diagnostic {
        let tok = self.peek();
        Diagnostic {
            code: DiagCode::Syntax,
            message: format!("unexpected {}", tok.kind),
            span: tok.span,
            expected: expected.to_vec(),
        }
    }

    fn ident(&mut self) -> Result<(String, Span), Diagnostic> {
        match self.peek().kind.clone() {
            TokKind::Ident(name) => {
                let span = self.peek().span;
                self.bump();
                Ok((name, span))
            }
            _ => Err(self.unexpected(&["identifier".to_string()])),
        }
    }

    fn string(&mut self) -> Result<String, Diagnostic> {
        match self.peek().kind.clone() {
            TokKind::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["string literal".to_string()])),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<String>, Diagnostic> {
        let mut out = vec![self.ident()?.0];
        while self.eat(&TokKind::Comma) {
            out.push(self.ident()?.0);
        }
        Ok(out)
    }

    fn script(&mut self) -> Result<Script, Diagnostic> {
        let mut statements = Vec::new();
        while !self.at(&TokKind::Eof) {
            statements.push(self.statement()?);
        }
        Ok(Script { statements })
    }

    fn statement(&mut self) -> Result<Stmt, Diagnostic> {
        let span = self.peek().span;
        let kind = match self.peek().kind.clone() {
            TokKind::Base => {
                self.bump();
                let (curve, _) = self.ident()?;
                self.expect(TokKind::Pic0)?;
                self.expect(TokKind::LParen)?;
                let symbols = self.ident_list()?;
                self.expect(TokKind::RParen)?;
                self.expect(TokKind::Points)?;
                self.expect(TokKind::LParen)?;
                let (p1, _) = self.ident()?;
                self.expect(TokKind::Comma)?;
                let (p2, _) = self.ident()?;
                self.expect(TokKind::RParen)?;
                StmtKind::Base {
                    curve,
                    symbols,
                    points: (p1, p2),
                }
            }
            TokKind::Relation => {
                self.bump();
                let lhs = self.expr()?;
                self.expect(TokKind::EqEq)?;
                let rhs = self.expr()?;
                StmtKind::Relation { lhs, rhs }
            }
            TokKind::Ruled => {
                self.bump();
                let (name, _) = self.ident()?;
                StmtKind::Ruled { name }
            }
            TokKind::Blowup => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(TokKind::At)?;
                let center = self.center()?;
                StmtKind::Blowup { name, center }
            }
            TokKind::Divisor => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(TokKind::Eq)?;
                let value = self.expr()?;
                StmtKind::Divisor { name, value }
            }
            TokKind::Contract => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(TokKind::Eq)?;
                let curves = self.curve_set()?;
                StmtKind::Contract { name, curves }
            }
            TokKind::Cover => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(TokKind::Eq)?;
                let kind = if self.eat(&TokKind::Cyclic) {
                    self.expect(TokKind::LParen)?;
                    let degree = self.expr()?;
                    self.expect(TokKind::Comma)?;
                    let branch = self.expr()?;
                    self.expect(TokKind::RParen)?;
                    self.expect(TokKind::Over)?;
                    let (over, _) = self.ident()?;
                    CoverAst::Cyclic {
                        degree,
                        branch,
                        over,
                    }
                } else if self.eat(&TokKind::Fiber) {
                    self.expect(TokKind::LParen)?;
                    let (cover, _) = self.ident()?;
                    self.expect(TokKind::Comma)?;
                    let (contraction, _) = self.ident()?;
                    self.expect(TokKind::RParen)?;
                    CoverAst::Fiber {
                        cover,
                        contraction,
                    }
                } else {
                    return Err(self.unexpected(&["`cyclic`".into(), "`fiber`".into()]));
                };
                StmtKind::Cover { name, kind }
            }
            TokKind::Assert => {
                self.bump();
                let lhs = self.expr()?;
                let cmp = if self.eat(&TokKind::EqEq) {
                    Some((CmpOp::Eq, self.expr()?))
                } else if self.eat(&TokKind::BangEq) {
                    Some((CmpOp::Ne, self.expr()?))
                } else {
                    None
                };
                let citation = if self.eat(&TokKind::Colon) {
                    Some(self.string()?)
                } else {
                    None
                };
                StmtKind::Assert {
                    lhs,
                    cmp,
                    citation,
                }
            }
            TokKind::Query => {
                self.bump();
                let expr = self.expr()?;
                let citation = if self.eat(&TokKind::Colon) {
                    Some(self.string()?)
                } else {
                    None
                };
                StmtKind::Query { expr, citation }
            }
            TokKind::Report => {
                self.bump();
                let label = match self.peek().kind.clone() {
                    TokKind::Str(_) => Some(self.string()?),
                    _ => None,
                };
                StmtKind::Report { label }
            }
            _ => {
                return Err(self.unexpected(&[
                    "`base`".into(),
                    "`relation`".into(),
                    "`ruled`".into(),
                    "`blowup`".into(),
                    "`divisor`".into(),
                    "`contract`".into(),
                    "`cover`".into(),
                    "`assert`".into(),
                    "`query`".into(),
                    "`report`".into(),
                ]))
            }
        };
        self.expect(TokKind::Semi)?;
        Ok(Stmt { kind, span })
    }

    fn center(&mut self) -> Result<CenterAst, Diagnostic> {
        if self.eat(&TokKind::General) {
            return Ok(CenterAst::General);
        }
        if self.eat(&TokKind::Point) {
            let (point, _) = self.ident()?;
            self.expect(TokKind::On)?;
            let (curve, _) = self.ident()?;
            return Ok(CenterAst::PointOn { point, curve });
        }
        let (a, _) = self.ident()?;
        self.expect(TokKind::Star)?;
        let (b, _) = self.ident()?;
        Ok(CenterAst::Intersection(a, b))
    }

    fn curve_set(&mut self) -> Result<Vec<String>, Diagnostic> {
        self.expect(TokKind::LBrace)?;
        let mut out = Vec::new();
        if !self.at(&TokKind::RBrace) {
            out = self.ident_list()?;
        }
        self.expect(TokKind::RBrace)?;
        Ok(out)
    }

    // Precedence, loosest to tightest: `+ -` < `.` < `*` < unary `-`.
    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.dot_expr()?;
        loop {
            let span = self.peek().span;
            if self.eat(&TokKind::Plus) {
                let rhs = self.dot_expr()?;
                lhs = Expr::new(ExprKind::Add(Box::new(lhs), Box::new(rhs)), span);
            } else if self.eat(&TokKind::Minus) {
                let rhs = self.dot_expr()?;
                lhs = Expr::new(ExprKind::Sub(Box::new(lhs), Box::new(rhs)), span);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn dot_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.mul_expr()?;
        loop {
            let span = self.peek().span;
            if self.eat(&TokKind::Dot) {
                let rhs = self.mul_expr()?;
                lhs = Expr::new(ExprKind::Dot(Box::new(lhs), Box::new(rhs)), span);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn mul_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary_expr()?;
        loop {
            let span = self.peek().span;
            if self.eat(&TokKind::Star) {
                let rhs = self.unary_expr()?;
                lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), span);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary_expr(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.peek().span;
        if self.eat(&TokKind::Minus) {
            let inner = self.unary_expr()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.primary()
    }

    fn number(&mut self) -> Result<Rational, Diagnostic> {
        let span = self.peek().span;
        let digits = match self.peek().kind.clone() {
            TokKind::Int(d) => {
                self.bump();
                d
            }
            _ => return Err(self.unexpected(&["number".to_string()])),
        };
        let numer: num::BigInt = digits.parse().expect("lexer produced digits");
        if self.eat(&TokKind::Slash) {
            let denom_digits = match self.peek().kind.clone() {
                TokKind::Int(d) => {
                    self.bump();
                    d
                }
                _ => return Err(self.unexpected(&["denominator".to_string()])),
            };
            let denom: num::BigInt = denom_digits.parse().expect("lexer produced digits");
            if denom == num::BigInt::from(0) {
                return Err(Diagnostic::new(
                    DiagCode::Syntax,
                    "zero denominator".to_string(),
                    span,
                ));
            }
            Ok(Rational::from_bigints(numer, denom))
        } else {
            Ok(Rational::from_bigints(numer, num::BigInt::from(1)))
        }
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.peek().span;
        match self.peek().kind.clone() {
            TokKind::Int(_) => {
                let n = self.number()?;
                Ok(Expr::new(ExprKind::Number(n), span))
            }
            TokKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(TokKind::RParen)?;
                Ok(inner)
            }
            TokKind::LBrace => {
                let curves = self.curve_set()?;
                Ok(Expr::new(ExprKind::CurveSet(curves), span))
            }
            TokKind::Contract => {
                self.bump();
                let curves = self.curve_set()?;
                Ok(Expr::new(ExprKind::MmpContract(curves), span))
            }
            TokKind::Fiber => {
                self.bump();
                self.expect(TokKind::LBrace)?;
                let (name, _) = self.ident()?;
                self.expect(TokKind::RBrace)?;
                Ok(Expr::new(ExprKind::MmpFiber(name), span))
            }
            TokKind::Verdict => {
                self.bump();
                self.call_tail("verdict".to_string(), span)
            }
            TokKind::Ident(name) => {
                // `p*( ... )` is the Pic^0 pullback, not a product.
                if name == "p" && self.peek2() == &TokKind::Star {
                    self.bump(); // p
                    self.bump(); // *
                    self.expect(TokKind::LParen)?;
                    let inner = self.expr()?;
                    self.expect(TokKind::RParen)?;
                    return Ok(Expr::new(ExprKind::PullbackPic0(Box::new(inner)), span));
                }
                self.bump();
                if self.at(&TokKind::LParen) && BUILTIN_FUNCS.contains(&name.as_str()) {
                    return self.call_tail(name, span);
                }
                Ok(Expr::new(ExprKind::Ident(name), span))
            }
            _ => Err(self.unexpected(&["expression".to_string()])),
        }
    }

    fn call_tail(&mut self, func: String, span: Span) -> Result<Expr, Diagnostic> {
        self.expect(TokKind::LParen)?;
        let mut args = Vec::new();
        if !self.at(&TokKind::RParen) {
            args.push(self.expr()?);
            while self.eat(&TokKind::Comma) {
                args.push(self.expr()?);
            }
        }
        self.expect(TokKind::RParen)?;
        let index = if self.eat(&TokKind::LBracket) {
            let (name, _) = self.ident()?;
            self.expect(TokKind::RBracket)?;
            Some(name)
        } else {
            None
        };
        Ok(Expr::new(ExprKind::Call { func, args, index }, span))
    }
}

/// Declaration state threaded through the validity pass.
#[derive(Default)]
struct Scope {
    declared: BTreeSet<String>,
    has_base: bool,
    has_surface: bool,
}

impl Scope {
    fn declare(&mut self, name: &str, span: Span) -> Result<(), Diagnostic> {
        if is_reserved(name) {
            return Err(Diagnostic::new(
                DiagCode::Redefinition,
                format!("`{name}` is a reserved name"),
                span,
            ));
        }
        if !self.declared.insert(name.to_string()) {
            return Err(Diagnostic::new(
                DiagCode::Redefinition,
                format!("`{name}` is declared twice"),
                span,
            ));
        }
        Ok(())
    }

    fn check_used(&self, name: &str, span: Span) -> Result<(), Diagnostic> {
        if RESERVED_VALUES.contains(&name) || RESERVED_NAMES.contains(&name) {
            return Ok(());
        }
        if !self.declared.contains(name) {
            return Err(Diagnostic::new(
                DiagCode::UseBeforeDef,
                format!("`{name}` is used before being declared"),
                span,
            ));
        }
        Ok(())
    }
}

fn check_expr(expr: &Expr, scope: &Scope) -> Result<(), Diagnostic> {
    match &expr.kind {
        ExprKind::Number(_) => Ok(()),
        ExprKind::Ident(name) => scope.check_used(name, expr.span),
        ExprKind::Neg(e) | ExprKind::PullbackPic0(e) => check_expr(e, scope),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Dot(a, b) => {
            check_expr(a, scope)?;
            check_expr(b, scope)
        }
        ExprKind::Call { args, index, .. } => {
            for a in args {
                check_expr(a, scope)?;
            }
            if let Some(idx) = index {
                scope.check_used(idx, expr.span)?;
            }
            Ok(())
        }
        ExprKind::CurveSet(names) | ExprKind::MmpContract(names) => {
            for n in names {
                scope.check_used(n, expr.span)?;
            }
            Ok(())
        }
        ExprKind::MmpFiber(name) => scope.check_used(name, expr.span),
    }
}

/// Single-assignment and declared-before-use checks. Curve names appear
/// when the surface or a blow-up introduces them.
fn validate(script: &Script) -> Result<(), Diagnostic> {
    let mut scope = Scope::default();
    for stmt in &script.statements {
        let span = stmt.span;
        match &stmt.kind {
            StmtKind::Base {
                curve,
                symbols,
                points,
            } => {
                if scope.has_base {
                    return Err(Diagnostic::new(
                        DiagCode::Redefinition,
                        "the base curve is declared twice".to_string(),
                        span,
                    ));
                }
                scope.has_base = true;
                scope.declare(curve, span)?;
                for s in symbols {
                    scope.declare(s, span)?;
                }
                scope.declare(&points.0, span)?;
                scope.declare(&points.1, span)?;
            }
            StmtKind::Relation { lhs, rhs } => {
                if !scope.has_base {
                    return Err(Diagnostic::new(
                        DiagCode::UseBeforeDef,
                        "`relation` before `base`".to_string(),
                        span,
                    ));
                }
                check_expr(lhs, &scope)?;
                check_expr(rhs, &scope)?;
            }
            StmtKind::Ruled { name } => {
                if !scope.has_base {
                    return Err(Diagnostic::new(
                        DiagCode::UseBeforeDef,
                        "`ruled` before `base`".to_string(),
                        span,
                    ));
                }
                if scope.has_surface {
                    return Err(Diagnostic::new(
                        DiagCode::Redefinition,
                        "the surface is declared twice".to_string(),
                        span,
                    ));
                }
                scope.has_surface = true;
                scope.declare(name, span)?;
                for curve in [
                    crate::surface::SECTION,
                    crate::surface::SECTION2,
                    crate::surface::FIBER,
                    crate::surface::FIBER2,
                ] {
                    scope.declare(curve, span)?;
                }
            }
            StmtKind::Blowup { name, center } => {
                if !scope.has_surface {
                    return Err(Diagnostic::new(
                        DiagCode::UseBeforeDef,
                        "`blowup` before `ruled`".to_string(),
                        span,
                    ));
                }
                match center {
                    CenterAst::Intersection(a, b) => {
                        scope.check_used(a, span)?;
                        scope.check_used(b, span)?;
                    }
                    CenterAst::PointOn { point, curve } => {
                        scope.check_used(curve, span)?;
                        // A fresh point name is declared here.
                        if !scope.declared.contains(point) {
                            scope.declare(point, span)?;
                        }
                    }
                    CenterAst::General => {}
                }
                scope.declare(name, span)?;
            }
            StmtKind::Divisor { name, value } => {
                check_expr(value, &scope)?;
                scope.declare(name, span)?;
            }
            StmtKind::Contract { name, curves } => {
                for c in curves {
                    scope.check_used(c, span)?;
                }
                scope.declare(name, span)?;
            }
            StmtKind::Cover { name, kind } => {
                match kind {
                    CoverAst::Cyclic {
                        degree,
                        branch,
                        over,
                    } => {
                        check_expr(degree, &scope)?;
                        check_expr(branch, &scope)?;
                        scope.check_used(over, span)?;
                    }
                    CoverAst::Fiber {
                        cover,
                        contraction,
                    } => {
                        scope.check_used(cover, span)?;
                        scope.check_used(contraction, span)?;
                    }
                }
                scope.declare(name, span)?;
            }
            StmtKind::Assert { lhs, cmp, .. } => {
                check_expr(lhs, &scope)?;
                if let Some((_, rhs)) = cmp {
                    check_expr(rhs, &scope)?;
                }
            }
            StmtKind::Query { expr, .. } => check_expr(expr, &scope)?,
            StmtKind::Report { .. } => {}
        }
    }
    Ok(())
}

/// Parses and validates a script.
pub fn parse(input: &str) -> Result<Script, Diagnostic> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let script = parser.script()?;
    validate(&script)?;
    Ok(script)
}

/// Byte-level entry point: invalid UTF-8 is a lexical diagnostic.
pub fn parse_bytes(input: &[u8]) -> Result<Script, Diagnostic> {
    match std::str::from_utf8(input) {
        Ok(text) => parse(text),
        Err(e) => Err(Diagnostic::new(
            DiagCode::Lexical,
            format!("input is not valid UTF-8: {e}"),
            Span::start(),
        )),
    }
}
