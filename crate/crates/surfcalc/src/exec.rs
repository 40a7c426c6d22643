//! Script executor: runs a parsed scenario against the engine and collects
//! a report.
//!
//! Assertions record pass/fail and execution continues; genuine usage
//! errors (unknown names, dimension clashes, invalid centers) abort with a
//! positioned diagnostic. Divisor values defined on an earlier model are
//! coordinate-extended (total pullback) when used later; their expression
//! form is kept only while it still evaluates to the same class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::contraction::{
    make_contraction, mmp_step, Contraction, MmpInput, MmpOutcome, TriBool,
};
use crate::cover::{
    cover_canonical_class, fg_verdict, fiber_product_verdicts, CoverClass, CoverSpec, FgFlags,
    FiniteGeneration,
};
use crate::dsl::{
    print_expr, CenterAst, CmpOp, CoverAst, DiagCode, Diagnostic, Expr, ExprKind, Script, Span,
    StmtKind,
};

use crate::exact::{is_negative_definite, QMatrix, Rational};
use crate::picard::{lin_equiv, DivClass, Pic0Class, Pic0Symbol};
use crate::positivity::{
    is_big_given_nef, nef_on_tracked, AX_DESCENDED_AMPLE_ON_TRACKED, AX_MINIMAL_ON_TRACKED,
};
use crate::report::{Report, ResultEntry};
use crate::surface::{Center, DivExpr, SurfaceModel};

/// A runtime value of the scenario language.
#[derive(Clone, Debug)]
pub enum Value {
    Rat(Rational),
    Div {
        class: DivClass,
        expr: Option<DivExpr>,
    },
    Pic0(Pic0Class),
    Bool(bool),
    Tri(TriBool),
    Fg(FiniteGeneration),
    CurveSet(BTreeSet<String>),
    Mmp(MmpOutcome),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Rat(_) => "rational",
            Value::Div { .. } => "divisor",
            Value::Pic0(_) => "pic0 class",
            Value::Bool(_) => "boolean",
            Value::Tri(_) => "verdict",
            Value::Fg(_) => "finite-generation verdict",
            Value::CurveSet(_) => "curve set",
            Value::Mmp(_) => "mmp outcome",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(r) => write!(f, "{r}"),
            Value::Div { class, .. } => write!(f, "{class}"),
            Value::Pic0(c) => write!(f, "{c}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Tri(t) => write!(f, "{t}"),
            Value::Fg(v) => write!(f, "{v}"),
            Value::CurveSet(s) => {
                let names: Vec<&str> = s.iter().map(String::as_str).collect();
                write!(f, "{{{}}}", names.join(", "))
            }
            Value::Mmp(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug)]
struct StoredDivisor {
    class: DivClass,
    expr: Option<DivExpr>,
}

#[derive(Clone, Debug)]
enum CoverValue {
    Cyclic {
        class: Box<CoverClass>,
        fg: FiniteGeneration,
        q_gorenstein: TriBool,
    },
    Fiber {
        fg: FiniteGeneration,
        q_gorenstein: TriBool,
    },
}

/// Evaluation context: the current model, or the original ruled surface
/// inside `pull(...)`.
#[derive(Clone, Copy, PartialEq)]
enum Frame {
    Current,
    Base,
}

pub struct Executor {
    base_symbols: Vec<String>,
    base_points: Option<(String, String)>,
    pending_relations: Vec<Pic0Class>,
    model: Option<SurfaceModel>,
    base_model: Option<SurfaceModel>,
    divisors: BTreeMap<String, StoredDivisor>,
    contractions: BTreeMap<String, Contraction>,
    covers: BTreeMap<String, CoverValue>,
    pub report: Report,
}

fn rt(span: Span, message: String) -> Diagnostic {
    Diagnostic::new(DiagCode::Runtime, message, span)
}

fn ty(span: Span, message: String) -> Diagnostic {
    Diagnostic::new(DiagCode::Type, message, span)
}

impl Executor {
    pub fn new(scenario: &str) -> Executor {
        Executor {
            base_symbols: Vec::new(),
            base_points: None,
            pending_relations: Vec::new(),
            model: None,
            base_model: None,
            divisors: BTreeMap::new(),
            contractions: BTreeMap::new(),
            covers: BTreeMap::new(),
            report: Report::new(scenario),
        }
    }

    /// Runs a whole script. Assert failures are recorded, not raised.
    pub fn run(&mut self, script: &Script) -> Result<(), Diagnostic> {
        for stmt in &script.statements {
            self.run_stmt(&stmt.kind, stmt.span)?;
        }
        Ok(())
    }

    fn model(&self, span: Span) -> Result<&SurfaceModel, Diagnostic> {
        self.model
            .as_ref()
            .ok_or_else(|| rt(span, "no surface has been built yet".into()))
    }

    fn engine<T>(&self, span: Span, r: crate::error::Result<T>) -> Result<T, Diagnostic> {
        r.map_err(|e| rt(span, e.to_string()))
    }

    fn run_stmt(&mut self, kind: &StmtKind, span: Span) -> Result<(), Diagnostic> {
        match kind {
            StmtKind::Base {
                symbols, points, ..
            } => {
                self.base_symbols = symbols.clone();
                self.base_points = Some(points.clone());
            }
            StmtKind::Relation { lhs, rhs } => {
                let l = self.eval_pic0(lhs)?;
                let r = self.eval_pic0(rhs)?;
                let rel = l.sub(&r);
                match &mut self.model {
                    Some(m) => m.relations.add_relation(rel),
                    None => self.pending_relations.push(rel),
                }
            }
            StmtKind::Ruled { .. } => {
                let points = self
                    .base_points
                    .clone()
                    .ok_or_else(|| rt(span, "`ruled` requires a `base` declaration".into()))?;
                let symbols: Vec<&str> = self.base_symbols.iter().map(String::as_str).collect();
                let model = self.engine(
                    span,
                    SurfaceModel::new_ruled_surface(
                        &symbols,
                        (&points.0, &points.1),
                        self.pending_relations.clone(),
                    ),
                )?;
                self.base_model = Some(model.clone());
                self.model = Some(model);
            }
            StmtKind::Blowup { name, center } => {
                let c = match center {
                    CenterAst::Intersection(a, b) => Center::Intersection(a.clone(), b.clone()),
                    CenterAst::PointOn { point, curve } => Center::PointOn {
                        point: point.clone(),
                        curve: curve.clone(),
                    },
                    CenterAst::General => Center::General,
                };
                let next = self.engine(span, self.model(span)?.blow_up(&c, name))?;
                self.model = Some(next);
            }
            StmtKind::Divisor { name, value } => {
                let v = self.eval(value, Frame::Current)?;
                match v {
                    Value::Div { class, expr } => {
                        self.divisors
                            .insert(name.clone(), StoredDivisor { class, expr });
                    }
                    other => {
                        return Err(ty(
                            value.span,
                            format!("`divisor` needs a divisor value, got {}", other.kind()),
                        ))
                    }
                }
            }
            StmtKind::Contract { name, curves } => {
                let model = self.model(span)?.clone();
                let refs: Vec<&str> = curves.iter().map(String::as_str).collect();
                let c = self.engine(span, make_contraction(&model, &refs, name))?;
                let d = self.engine(span, c.discrepancies())?;
                // Plain `disc.<curve>` keys for the first contraction;
                // later ones are qualified by name wholesale.
                let clashes = d.coefficients.keys().any(|curve| {
                    self.report
                        .verdict_summary
                        .contains_key(&format!("disc.{curve}"))
                });
                for (curve, value) in &d.coefficients {
                    let key = if clashes {
                        format!("{name}.disc.{curve}")
                    } else {
                        format!("disc.{curve}")
                    };
                    self.report.record_verdict(&key, value.to_string());
                }
                self.contractions.insert(name.clone(), c);
            }
            StmtKind::Cover { name, kind } => {
                let value = self.eval_cover(kind, span)?;
                match &value {
                    CoverValue::Cyclic {
                        fg, q_gorenstein, ..
                    }
                    | CoverValue::Fiber { fg, q_gorenstein } => {
                        self.report
                            .record_verdict(&format!("fg.{name}"), fg.to_string());
                        self.report
                            .record_verdict(&format!("qgor.{name}"), q_gorenstein.to_string());
                    }
                }
                self.covers.insert(name.clone(), value);
            }
            StmtKind::Assert {
                lhs,
                cmp,
                citation,
            } => {
                let actual = self.eval(lhs, Frame::Current)?;
                let (pass, text, value, detail) = match cmp {
                    Some((op, rhs)) => {
                        let expected = self.eval(rhs, Frame::Current)?;
                        let equal = self.values_equal(&actual, &expected, lhs.span)?;
                        let pass = match op {
                            CmpOp::Eq => equal,
                            CmpOp::Ne => !equal,
                        };
                        let op_text = match op {
                            CmpOp::Eq => "==",
                            CmpOp::Ne => "!=",
                        };
                        let text =
                            format!("{} {op_text} {}", print_expr(lhs), print_expr(rhs));
                        let detail = if pass {
                            None
                        } else {
                            Some(match op {
                                CmpOp::Eq => format!("expected {expected}, got {actual}"),
                                CmpOp::Ne => {
                                    format!("expected anything but {expected}, got {actual}")
                                }
                            })
                        };
                        (pass, text, actual.to_string(), detail)
                    }
                    None => {
                        let pass = match &actual {
                            Value::Bool(b) => *b,
                            Value::Tri(TriBool::True) => true,
                            Value::Tri(_) => false,
                            other => {
                                return Err(ty(
                                    lhs.span,
                                    format!(
                                        "bare `assert` needs a boolean, got {}",
                                        other.kind()
                                    ),
                                ))
                            }
                        };
                        let detail = if pass {
                            None
                        } else {
                            Some(format!("expected true, got {actual}"))
                        };
                        (pass, print_expr(lhs), actual.to_string(), detail)
                    }
                };
                self.report.results.push(ResultEntry {
                    query: text,
                    value,
                    pass: Some(pass),
                    citation: citation.clone(),
                    detail,
                });
            }
            StmtKind::Query { expr, citation } => {
                let v = self.eval(expr, Frame::Current)?;
                self.report.results.push(ResultEntry {
                    query: print_expr(expr),
                    value: v.to_string(),
                    pass: None,
                    citation: citation.clone(),
                    detail: None,
                });
            }
            StmtKind::Report { label } => {
                if let Some(l) = label {
                    self.report.scenario = l.clone();
                }
            }
        }
        Ok(())
    }

    fn eval_cover(&mut self, kind: &CoverAst, span: Span) -> Result<CoverValue, Diagnostic> {
        match kind {
            CoverAst::Cyclic {
                degree,
                branch,
                over,
            } => {
                let contraction = self
                    .contractions
                    .get(over)
                    .cloned()
                    .ok_or_else(|| rt(span, format!("`{over}` is not a contraction")))?;
                let m = match self.eval(degree, Frame::Current)? {
                    Value::Rat(r) if r.is_integer() && r >= Rational::from_int(2) => {
                        // Degrees stay tiny; the checked conversion keeps
                        // the parser's big integers honest.
                        let digits = r.numer().to_string();
                        digits
                            .parse::<u32>()
                            .map_err(|_| rt(degree.span, "cover degree too large".into()))?
                    }
                    other => {
                        return Err(ty(
                            degree.span,
                            format!("cover degree must be an integer >= 2, got {other}"),
                        ))
                    }
                };
                let branch_value = self.eval(branch, Frame::Current)?;
                let (class, _) = match branch_value {
                    Value::Div { class, expr } => (class, expr),
                    other => {
                        return Err(ty(
                            branch.span,
                            format!("branch must be a divisor, got {}", other.kind()),
                        ))
                    }
                };
                if class.dim() != contraction.source.blowup_count() {
                    return Err(rt(
                        branch.span,
                        "branch divisor lives on a different model than the contraction".into(),
                    ));
                }
                // Descend and flag ampleness on tracked curves: nef with
                // positive square and zero locus exactly the contracted set.
                let mut handle =
                    self.engine(span, contraction.descend_divisor(&class, None))?;
                let check = self.engine(span, nef_on_tracked(&contraction.source, &class))?;
                for ax in &check.axioms {
                    self.report.record_axiom(ax);
                }
                let big = self.engine(span, is_big_given_nef(&class))?;
                let mut zero_locus = BTreeSet::new();
                for c in contraction.source.curves() {
                    let dc = self.engine(span, class.intersect(&c.cls))?;
                    let sq = self.engine(span, c.cls.intersect(&c.cls))?;
                    if dc.is_zero() && sq.is_negative() {
                        zero_locus.insert(c.name.clone());
                    }
                }
                let contracted: BTreeSet<String> =
                    contraction.contracted.iter().cloned().collect();
                if !(check.nef && big && zero_locus == contracted) {
                    return Err(rt(
                        span,
                        "branch divisor is not ample on the contracted surface".into(),
                    ));
                }
                handle.ample = true;
                self.report.record_axiom(AX_DESCENDED_AMPLE_ON_TRACKED);

                let spec = CoverSpec {
                    degree: m,
                    branch: handle,
                };
                let cover = self.engine(span, cover_canonical_class(&contraction, &spec))?;
                let rels = &self.model(span)?.relations;
                let qgor = self
                    .engine(span, contraction.q_gorenstein_test(rels))?
                    .status;
                let verdict = fg_verdict(FgFlags {
                    q_gorenstein: qgor,
                    k_nef_mumford: cover.nef,
                    k_big: cover.big,
                    kappa_le_1: false,
                    gorenstein: false,
                });
                Ok(CoverValue::Cyclic {
                    class: Box::new(cover),
                    fg: verdict.finitely_generated,
                    q_gorenstein: qgor,
                })
            }
            CoverAst::Fiber {
                cover,
                contraction,
            } => {
                let base = self
                    .covers
                    .get(cover)
                    .ok_or_else(|| rt(span, format!("`{cover}` is not a cover")))?;
                let fg = match base {
                    CoverValue::Cyclic { fg, .. } | CoverValue::Fiber { fg, .. } => *fg,
                };
                let c = self
                    .contractions
                    .get(contraction)
                    .cloned()
                    .ok_or_else(|| rt(span, format!("`{contraction}` is not a contraction")))?;
                let rels = &self.model(span)?.relations;
                let qgor = self.engine(span, c.q_gorenstein_test(rels))?.status;
                let v = fiber_product_verdicts(fg, qgor);
                Ok(CoverValue::Fiber {
                    fg: v.finitely_generated,
                    q_gorenstein: v.q_gorenstein,
                })
            }
        }
    }

    fn frame_model(&self, frame: Frame, span: Span) -> Result<&SurfaceModel, Diagnostic> {
        match frame {
            Frame::Current => self.model(span),
            Frame::Base => self
                .base_model
                .as_ref()
                .ok_or_else(|| rt(span, "no ruled surface in scope".into())),
        }
    }

    /// Evaluates an expression that must be a pure `Pic^0` combination;
    /// works before any surface exists (for early `relation` statements).
    fn eval_pic0(&self, expr: &Expr) -> Result<Pic0Class, Diagnostic> {
        match &expr.kind {
            ExprKind::Number(n) if n.is_zero() => Ok(Pic0Class::zero()),
            ExprKind::Ident(name) => {
                if self.base_symbols.contains(name) {
                    Ok(Pic0Class::symbol(Pic0Symbol::gen(name)))
                } else {
                    Err(rt(
                        expr.span,
                        format!("`{name}` is not a Pic^0 generator"),
                    ))
                }
            }
            ExprKind::Call { func, args, index } if func == "xi" => {
                if index.is_some() || args.len() != 1 {
                    return Err(ty(expr.span, "`xi` takes one point name".into()));
                }
                match &args[0].kind {
                    ExprKind::Ident(p) => Ok(Pic0Class::symbol(Pic0Symbol::point(p))),
                    _ => Err(ty(args[0].span, "`xi` takes a point name".into())),
                }
            }
            ExprKind::Neg(inner) => Ok(self.eval_pic0(inner)?.scale(&-Rational::one())),
            ExprKind::Add(a, b) => Ok(self.eval_pic0(a)?.add(&self.eval_pic0(b)?)),
            ExprKind::Sub(a, b) => Ok(self.eval_pic0(a)?.sub(&self.eval_pic0(b)?)),
            ExprKind::Mul(a, b) => match (&a.kind, self.eval_pic0(b)) {
                (ExprKind::Number(n), Ok(c)) => Ok(c.scale(n)),
                _ => match (&b.kind, self.eval_pic0(a)) {
                    (ExprKind::Number(n), Ok(c)) => Ok(c.scale(n)),
                    _ => Err(ty(
                        expr.span,
                        "a relation multiplies scalars with Pic^0 classes".into(),
                    )),
                },
            },
            _ => Err(ty(
                expr.span,
                "relations are Q-combinations of Pic^0 symbols".into(),
            )),
        }
    }

    fn eval(&mut self, expr: &Expr, frame: Frame) -> Result<Value, Diagnostic> {
        let span = expr.span;
        match &expr.kind {
            ExprKind::Number(n) => Ok(Value::Rat(n.clone())),
            ExprKind::Ident(name) => self.resolve_ident(name, frame, span),
            ExprKind::Neg(inner) => {
                let v = self.eval(inner, frame)?;
                self.scale_value(&Value::Rat(-Rational::one()), &v, span)
            }
            ExprKind::Add(a, b) => {
                let l = self.eval(a, frame)?;
                let r = self.eval(b, frame)?;
                self.add_values(l, r, span, false)
            }
            ExprKind::Sub(a, b) => {
                let l = self.eval(a, frame)?;
                let r = self.eval(b, frame)?;
                self.add_values(l, r, span, true)
            }
            ExprKind::Mul(a, b) => {
                let l = self.eval(a, frame)?;
                let r = self.eval(b, frame)?;
                self.scale_value(&l, &r, span)
            }
            ExprKind::Dot(a, b) => {
                let l = self.eval(a, frame)?;
                let r = self.eval(b, frame)?;
                match (l, r) {
                    (Value::Div { class: c1, .. }, Value::Div { class: c2, .. }) => {
                        let (c1, c2) = self.reconcile(c1, c2, span)?;
                        Ok(Value::Rat(self.engine(span, c1.intersect(&c2))?))
                    }
                    (l, r) => Err(ty(
                        span,
                        format!("`.` needs two divisors, got {} and {}", l.kind(), r.kind()),
                    )),
                }
            }
            ExprKind::PullbackPic0(inner) => {
                let c = self.eval_pic0_in_frame(inner, frame)?;
                let dim = self.frame_model(frame, span)?.blowup_count();
                Ok(Value::Div {
                    class: DivClass::pic0_pullback(c.clone(), dim),
                    expr: Some(DivExpr::pic0_pullback(c)),
                })
            }
            ExprKind::CurveSet(names) => {
                let model = self.frame_model(frame, span)?;
                for n in names {
                    self.engine(span, model.curve(n).map(|_| ()))?;
                }
                Ok(Value::CurveSet(names.iter().cloned().collect()))
            }
            ExprKind::MmpContract(names) => Ok(Value::Mmp(MmpOutcome::Contract(
                names.iter().cloned().collect(),
            ))),
            ExprKind::MmpFiber(name) => {
                Ok(Value::Mmp(MmpOutcome::MoriFiberDirection(name.clone())))
            }
            ExprKind::Call { func, args, index } => {
                self.eval_call(func, args, index.as_deref(), frame, span)
            }
        }
    }

    /// `Pic^0` sub-expressions inside `xi`/`p*` in an expression frame.
    fn eval_pic0_in_frame(&mut self, expr: &Expr, frame: Frame) -> Result<Pic0Class, Diagnostic> {
        match self.eval(expr, frame)? {
            Value::Pic0(c) => Ok(c),
            Value::Rat(r) if r.is_zero() => Ok(Pic0Class::zero()),
            other => Err(ty(
                expr.span,
                format!("expected a Pic^0 class, got {}", other.kind()),
            )),
        }
    }

    fn resolve_ident(&mut self, name: &str, frame: Frame, span: Span) -> Result<Value, Diagnostic> {
        match name {
            "true" => return Ok(Value::Bool(true)),
            "false" => return Ok(Value::Bool(false)),
            "yes" => return Ok(Value::Fg(FiniteGeneration::Yes)),
            "no" => return Ok(Value::Fg(FiniteGeneration::No)),
            "undetermined" => return Ok(Value::Fg(FiniteGeneration::Undetermined)),
            "unknown" => return Ok(Value::Tri(TriBool::Unknown)),
            "minimal" => return Ok(Value::Mmp(MmpOutcome::Minimal)),
            "K" => {
                let model = self.frame_model(frame, span)?;
                return Ok(Value::Div {
                    class: model.canonical.clone(),
                    expr: Some(model.canonical_expr.clone()),
                });
            }
            _ => {}
        }
        if self.base_symbols.contains(&name.to_string()) {
            return Ok(Value::Pic0(Pic0Class::symbol(Pic0Symbol::gen(name))));
        }
        let model = self.frame_model(frame, span)?;
        if model.has_curve(name) {
            return Ok(Value::Div {
                class: model.class_of(name).expect("checked"),
                expr: Some(DivExpr::curve(name)),
            });
        }
        if frame == Frame::Current {
            if let Some(stored) = self.divisors.get(name) {
                let current = self.model(span)?;
                let class = self.engine(span, current.total_pullback(&stored.class))?;
                // Keep the expression only while it still evaluates to the
                // same class on the current model.
                let expr = stored.expr.clone().filter(|e| {
                    current
                        .expr_class(e)
                        .is_ok_and(|c| c == class)
                });
                return Ok(Value::Div { class, expr });
            }
        }
        if self.contractions.contains_key(name) || self.covers.contains_key(name) {
            return Err(ty(
                span,
                format!("`{name}` is a handle; pass it to a builtin instead"),
            ));
        }
        Err(rt(span, format!("`{name}` is not defined here")))
    }

    fn add_values(
        &mut self,
        l: Value,
        r: Value,
        span: Span,
        subtract: bool,
    ) -> Result<Value, Diagnostic> {
        let sign = if subtract {
            -Rational::one()
        } else {
            Rational::one()
        };
        match (l, r) {
            (Value::Rat(a), Value::Rat(b)) => Ok(Value::Rat(a + b * sign)),
            (Value::Pic0(a), Value::Pic0(b)) => Ok(Value::Pic0(a.add(&b.scale(&sign)))),
            (
                Value::Div {
                    class: c1,
                    expr: e1,
                },
                Value::Div {
                    class: c2,
                    expr: e2,
                },
            ) => {
                let (c1, c2) = self.reconcile(c1, c2, span)?;
                let expr = match (e1, e2) {
                    (Some(a), Some(b)) => Some(a.add(&b.scale(&sign))),
                    _ => None,
                };
                Ok(Value::Div {
                    class: c1.add(&c2.scale(&sign)),
                    expr,
                })
            }
            (l, r) => Err(ty(
                span,
                format!("cannot combine {} and {}", l.kind(), r.kind()),
            )),
        }
    }

    fn scale_value(&mut self, l: &Value, r: &Value, span: Span) -> Result<Value, Diagnostic> {
        let (scalar, other) = match (l, r) {
            (Value::Rat(a), Value::Rat(b)) => return Ok(Value::Rat(a * b)),
            (Value::Rat(a), v) => (a, v),
            (v, Value::Rat(a)) => (a, v),
            (l, r) => {
                return Err(ty(
                    span,
                    format!("cannot multiply {} and {}", l.kind(), r.kind()),
                ))
            }
        };
        match other {
            Value::Div { class, expr } => Ok(Value::Div {
                class: class.scale(scalar),
                expr: expr.as_ref().map(|e| e.scale(scalar)),
            }),
            Value::Pic0(c) => Ok(Value::Pic0(c.scale(scalar))),
            v => Err(ty(span, format!("cannot scale a {}", v.kind()))),
        }
    }

    /// Coordinate-extends the shorter class; classes from ancestor models
    /// mean their total pullbacks.
    fn reconcile(
        &self,
        a: DivClass,
        b: DivClass,
        span: Span,
    ) -> Result<(DivClass, DivClass), Diagnostic> {
        let dim = a.dim().max(b.dim());
        let a = self.engine(span, a.extended(dim))?;
        let b = self.engine(span, b.extended(dim))?;
        Ok((a, b))
    }

    fn contraction_arg(&self, args: &[Expr], span: Span) -> Result<Contraction, Diagnostic> {
        let name = match args.first().map(|a| &a.kind) {
            Some(ExprKind::Ident(n)) => n.clone(),
            _ => return Err(ty(span, "expected a contraction name".into())),
        };
        self.contractions
            .get(&name)
            .cloned()
            .ok_or_else(|| rt(span, format!("`{name}` is not a contraction")))
    }

    fn eval_call(
        &mut self,
        func: &str,
        args: &[Expr],
        index: Option<&str>,
        frame: Frame,
        span: Span,
    ) -> Result<Value, Diagnostic> {
        match func {
            "xi" => {
                if args.len() != 1 || index.is_some() {
                    return Err(ty(span, "`xi` takes one point name".into()));
                }
                match &args[0].kind {
                    ExprKind::Ident(p) => {
                        Ok(Value::Pic0(Pic0Class::symbol(Pic0Symbol::point(p))))
                    }
                    _ => Err(ty(args[0].span, "`xi` takes a point name".into())),
                }
            }
            "pull" => {
                if frame == Frame::Base {
                    return Err(ty(span, "`pull` cannot be nested".into()));
                }
                if args.len() != 1 {
                    return Err(ty(span, "`pull` takes one expression".into()));
                }
                let v = self.eval(&args[0], Frame::Base)?;
                let (class, expr) = match v {
                    Value::Div { class, expr } => (class, expr),
                    other => {
                        return Err(ty(
                            args[0].span,
                            format!("`pull` needs a divisor, got {}", other.kind()),
                        ))
                    }
                };
                let current = self.model(span)?;
                let extended = self.engine(span, current.total_pullback(&class))?;
                // Rewrite the ruled-surface expression over the current
                // strict transforms through the stored pullback expressions.
                let mapped = match expr {
                    Some(e) => {
                        let mut acc = DivExpr::pic0_pullback(e.pic0.clone());
                        let mut ok = true;
                        for (name, c) in &e.curves {
                            match current.base_pullback_expr(name) {
                                Ok(p) => acc = acc.add(&p.scale(c)),
                                Err(_) => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if ok {
                            Some(acc)
                        } else {
                            None
                        }
                    }
                    None => None,
                };
                Ok(Value::Div {
                    class: extended,
                    expr: mapped,
                })
            }
            "disc" => {
                let c = self.contraction_arg(args, span)?;
                let curve = index
                    .ok_or_else(|| ty(span, "`disc(c)` must be indexed by a curve".into()))?;
                let d = self.engine(span, c.discrepancies())?;
                match d.coefficients.get(curve) {
                    Some(v) => Ok(Value::Rat(v.clone())),
                    None => Err(rt(
                        span,
                        format!("`{curve}` is not contracted by `{}`", c.name),
                    )),
                }
            }
            "obstruction" => {
                let c = self.contraction_arg(args, span)?;
                let curve = index.ok_or_else(|| {
                    ty(span, "`obstruction(c)` must be indexed by a curve".into())
                })?;
                let rels = self.model(span)?.relations.clone();
                let v = self.engine(span, c.q_gorenstein_test(&rels))?;
                match v.obstructions.get(curve) {
                    Some(o) => Ok(Value::Pic0(o.clone())),
                    None => Err(rt(
                        span,
                        format!(
                            "`{curve}` carries no obstruction under `{}` (not a contracted section)",
                            c.name
                        ),
                    )),
                }
            }
            "qgor" => {
                if let Some(ExprKind::Ident(n)) = args.first().map(|a| &a.kind) {
                    if let Some(cv) = self.covers.get(n) {
                        let q = match cv {
                            CoverValue::Cyclic { q_gorenstein, .. }
                            | CoverValue::Fiber { q_gorenstein, .. } => *q_gorenstein,
                        };
                        return Ok(Value::Tri(q));
                    }
                }
                let c = self.contraction_arg(args, span)?;
                let rels = self.model(span)?.relations.clone();
                let v = self.engine(span, c.q_gorenstein_test(&rels))?;
                self.report
                    .record_verdict(&format!("qgor.{}", c.name), v.status.to_string());
                Ok(Value::Tri(v.status))
            }
            "verdict" => {
                let name = match args.first().map(|a| &a.kind) {
                    Some(ExprKind::Ident(n)) => n.clone(),
                    _ => return Err(ty(span, "`verdict` takes a cover name".into())),
                };
                let cv = self
                    .covers
                    .get(&name)
                    .ok_or_else(|| rt(span, format!("`{name}` is not a cover")))?;
                let fg = match cv {
                    CoverValue::Cyclic { fg, .. } | CoverValue::Fiber { fg, .. } => *fg,
                };
                Ok(Value::Fg(fg))
            }
            "coverclass" => {
                let name = match args.first().map(|a| &a.kind) {
                    Some(ExprKind::Ident(n)) => n.clone(),
                    _ => return Err(ty(span, "`coverclass` takes a cover name".into())),
                };
                match self.covers.get(&name) {
                    Some(CoverValue::Cyclic { class, .. }) => Ok(Value::Div {
                        class: class.log_class.clone(),
                        expr: None,
                    }),
                    Some(CoverValue::Fiber { .. }) => Err(rt(
                        span,
                        format!("`{name}` is a fiber product; it has no stored class"),
                    )),
                    None => Err(rt(span, format!("`{name}` is not a cover"))),
                }
            }
            "mpull" => {
                if args.len() != 2 {
                    return Err(ty(span, "`mpull` takes a contraction and a divisor".into()));
                }
                let c = self.contraction_arg(args, span)?;
                let v = self.eval(&args[1], frame)?;
                let (class, expr) = match v {
                    Value::Div { class, expr } => (class, expr),
                    other => {
                        return Err(ty(
                            args[1].span,
                            format!("`mpull` needs a divisor, got {}", other.kind()),
                        ))
                    }
                };
                if class.dim() != c.source.blowup_count() {
                    return Err(rt(
                        args[1].span,
                        "divisor lives on a different model than the contraction".into(),
                    ));
                }
                let pulled = self.engine(span, c.mumford_pullback(&class))?;
                let pulled_expr = match expr {
                    Some(e) => self.engine(span, c.mumford_pullback_expr(&e)).ok(),
                    None => None,
                };
                Ok(Value::Div {
                    class: pulled,
                    expr: pulled_expr,
                })
            }
            "tdot" => {
                if args.len() != 3 {
                    return Err(ty(span, "`tdot` takes a contraction and two divisors".into()));
                }
                let c = self.contraction_arg(args, span)?;
                let mut classes = Vec::new();
                for a in &args[1..] {
                    match self.eval(a, frame)? {
                        Value::Div { class, .. } => {
                            if class.dim() != c.source.blowup_count() {
                                return Err(rt(
                                    a.span,
                                    "divisor lives on a different model than the contraction"
                                        .into(),
                                ));
                            }
                            classes.push(class);
                        }
                        other => {
                            return Err(ty(
                                a.span,
                                format!("`tdot` needs divisors, got {}", other.kind()),
                            ))
                        }
                    }
                }
                Ok(Value::Rat(self.engine(
                    span,
                    c.target_intersect(&classes[0], &classes[1]),
                )?))
            }
            "mmp" => {
                let outcome = if args.is_empty() {
                    let model = self.model(span)?;
                    self.engine(span, mmp_step(MmpInput::Smooth(model)))?
                } else {
                    let c = self.contraction_arg(args, span)?;
                    self.engine(span, mmp_step(MmpInput::Contracted(&c)))?
                };
                if outcome == MmpOutcome::Minimal {
                    self.report.record_axiom(AX_MINIMAL_ON_TRACKED);
                }
                let key = match args.first().map(|a| &a.kind) {
                    Some(ExprKind::Ident(n)) => format!("mmp.{n}"),
                    _ => "mmp".to_string(),
                };
                self.report.record_verdict(&key, outcome.to_string());
                Ok(Value::Mmp(outcome))
            }
            "nef" | "big" => {
                if let Some(ExprKind::Ident(n)) = args.first().map(|a| &a.kind) {
                    if let Some(CoverValue::Cyclic { class, .. }) = self.covers.get(n) {
                        return Ok(Value::Bool(if func == "nef" {
                            class.nef
                        } else {
                            class.big
                        }));
                    }
                }
                if args.len() != 1 {
                    return Err(ty(span, format!("`{func}` takes one divisor")));
                }
                let v = self.eval(&args[0], frame)?;
                let class = match v {
                    Value::Div { class, .. } => class,
                    other => {
                        return Err(ty(
                            args[0].span,
                            format!("`{func}` needs a divisor, got {}", other.kind()),
                        ))
                    }
                };
                let model = self.model(span)?;
                let check = self.engine(span, nef_on_tracked(model, &class))?;
                for ax in &check.axioms {
                    self.report.record_axiom(ax);
                }
                if func == "nef" {
                    Ok(Value::Bool(check.nef))
                } else {
                    let big = self.engine(span, is_big_given_nef(&class))?;
                    Ok(Value::Bool(check.nef && big))
                }
            }
            "negdef" => {
                if let Some(ExprKind::Ident(n)) = args.first().map(|a| &a.kind) {
                    if self.contractions.contains_key(n) {
                        let c = self.contractions.get(n).expect("checked");
                        let ok = self.engine(span, is_negative_definite(&c.gram))?;
                        return Ok(Value::Bool(ok));
                    }
                }
                if args.len() != 1 {
                    return Err(ty(span, "`negdef` takes a contraction or a curve set".into()));
                }
                let names = match self.eval(&args[0], frame)? {
                    Value::CurveSet(s) => s,
                    other => {
                        return Err(ty(
                            args[0].span,
                            format!("`negdef` needs a curve set, got {}", other.kind()),
                        ))
                    }
                };
                let model = self.model(span)?;
                let list: Vec<String> = names.into_iter().collect();
                let k = list.len();
                let mut gram = QMatrix::zero(k, k);
                for (i, a) in list.iter().enumerate() {
                    for (j, b) in list.iter().enumerate() {
                        let v = self.engine(
                            span,
                            model
                                .class_of(a)
                                .and_then(|ca| model.class_of(b).and_then(|cb| ca.intersect(&cb))),
                        )?;
                        gram.set(i, j, v);
                    }
                }
                Ok(Value::Bool(self.engine(span, is_negative_definite(&gram))?))
            }
            other => Err(ty(span, format!("unknown builtin `{other}`"))),
        }
    }

    fn values_equal(&mut self, l: &Value, r: &Value, span: Span) -> Result<bool, Diagnostic> {
        let rels = self
            .model
            .as_ref()
            .map(|m| m.relations.clone())
            .unwrap_or_default();
        Ok(match (l, r) {
            (Value::Rat(a), Value::Rat(b)) => a == b,
            (Value::Div { class: a, .. }, Value::Div { class: b, .. }) => {
                let (a, b) = self.reconcile(a.clone(), b.clone(), span)?;
                self.engine(span, lin_equiv(&a, &b, &rels))?
            }
            (Value::Div { class, .. }, Value::Rat(r))
            | (Value::Rat(r), Value::Div { class, .. }) => {
                if !r.is_zero() {
                    return Err(ty(
                        span,
                        "a divisor compares only against another divisor or 0".into(),
                    ));
                }
                class.is_zero_up_to_relations(&rels)
            }
            (Value::Pic0(a), Value::Pic0(b)) => rels.is_trivial(&a.sub(b)),
            (Value::Pic0(c), Value::Rat(r)) | (Value::Rat(r), Value::Pic0(c)) => {
                if !r.is_zero() {
                    return Err(ty(
                        span,
                        "a Pic^0 class compares only against another class or 0".into(),
                    ));
                }
                rels.is_trivial(c)
            }
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Tri(t), Value::Bool(b)) | (Value::Bool(b), Value::Tri(t)) => match t {
                TriBool::True => *b,
                TriBool::False => !*b,
                TriBool::Unknown => false,
            },
            (Value::Tri(a), Value::Tri(b)) => a == b,
            (Value::Fg(a), Value::Fg(b)) => a == b,
            (Value::CurveSet(a), Value::CurveSet(b)) => a == b,
            (Value::Mmp(a), Value::Mmp(b)) => a == b,
            (l, r) => {
                return Err(ty(
                    span,
                    format!("cannot compare {} with {}", l.kind(), r.kind()),
                ))
            }
        })
    }
}

/// Parses nothing; runs an already-parsed script and returns its report.
pub fn run_script(script: &Script, scenario: &str) -> Result<Report, Diagnostic> {
    let mut exec = Executor::new(scenario);
    exec.run(script)?;
    Ok(exec.report)
}
