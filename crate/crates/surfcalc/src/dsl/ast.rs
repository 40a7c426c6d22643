//! Abstract syntax of `.surf` scripts.
//!
//! Spans are carried on every node but compare equal to each other, so
//! structural equality of two parses ignores source positions.

use crate::exact::Rational;

pub use super::lexer::Span;

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Script {
    pub statements: Vec<Stmt>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, PartialEq, Debug)]
pub enum StmtKind {
    /// `base C pic0(e) points(x, xp);`
    Base {
        curve: String,
        symbols: Vec<String>,
        points: (String, String),
    },
    /// `relation <pic0 expr> == <pic0 expr>;`
    Relation { lhs: Expr, rhs: Expr },
    /// `ruled S;`
    Ruled { name: String },
    /// `blowup E1 at B * F;`
    Blowup { name: String, center: CenterAst },
    /// `divisor D = 3*Bp + F;`
    Divisor { name: String, value: Expr },
    /// `contract pi = {B, E1};`
    Contract { name: String, curves: Vec<String> },
    /// `cover Z = cyclic(2, 2*D) over pi;` or `cover Zt = fiber(Z, pit);`
    Cover { name: String, kind: CoverAst },
    /// `assert <expr> [== <expr>] [: "context"];`
    Assert {
        lhs: Expr,
        cmp: Option<(CmpOp, Expr)>,
        citation: Option<String>,
    },
    /// `query <expr> [: "context"];`
    Query { expr: Expr, citation: Option<String> },
    /// `report ["label"];`
    Report { label: Option<String> },
}

#[derive(Clone, PartialEq, Debug)]
pub enum CenterAst {
    Intersection(String, String),
    PointOn { point: String, curve: String },
    General,
}

#[derive(Clone, PartialEq, Debug)]
pub enum CoverAst {
    Cyclic {
        degree: Expr,
        branch: Expr,
        over: String,
    },
    Fiber {
        cover: String,
        contraction: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CmpOp {
    Eq,
    Ne,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum ExprKind {
    Number(Rational),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// Scalar multiplication (or the only product the value types allow).
    Mul(Box<Expr>, Box<Expr>),
    /// The intersection product `D . D`.
    Dot(Box<Expr>, Box<Expr>),
    /// Builtin call, optionally indexed: `disc(pi)[B]`.
    Call {
        func: String,
        args: Vec<Expr>,
        index: Option<String>,
    },
    /// `p*(c)`: the pullback of a degree-zero base-curve class.
    PullbackPic0(Box<Expr>),
    /// `{B, E1}`: a set of curve names.
    CurveSet(Vec<String>),
    /// `contract{E5}`: an MMP-outcome literal.
    MmpContract(Vec<String>),
    /// `fiber{F}`: an MMP-outcome literal.
    MmpFiber(String),
}
