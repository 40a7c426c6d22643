//! The divisor-class lattice.
//!
//! Classes live over the basis `{B, F, E_1..E_n}` where `B` is the section
//! class of the ruled surface, `F` the fiber class, and the `E_i` are the
//! total transforms of the exceptional divisors. In this basis the
//! intersection form is hyperbolic on `(B, F)` and `-1` on each `E_i`,
//! with no cross terms. On top of the numeric coordinates a class carries a
//! formal `Pic^0` pullback part which is orthogonal to everything.
//!
//! "Torsion" in `Pic^0` is modeled purely as membership in the Q-span of
//! declared relations; the engine never decides torsion of undeclared
//! classes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{EngineError, Result};
use crate::exact::Rational;

/// A formal generator of `Pic^0` of the base curve: either a named
/// degree-zero class (such as the twisting class of the ruled surface) or
/// the class `[q] - [o]` of a named point `q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pic0Symbol {
    Gen(String),
    Point(String),
}

impl Pic0Symbol {
    pub fn gen(name: &str) -> Self {
        Pic0Symbol::Gen(name.to_string())
    }

    pub fn point(name: &str) -> Self {
        Pic0Symbol::Point(name.to_string())
    }
}

impl fmt::Display for Pic0Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pic0Symbol::Gen(n) => write!(f, "{n}"),
            Pic0Symbol::Point(n) => write!(f, "xi({n})"),
        }
    }
}

/// A Q-linear combination of `Pic^0` symbols. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Pic0Class {
    terms: BTreeMap<Pic0Symbol, Rational>,
}

impl Pic0Class {
    pub fn zero() -> Self {
        Pic0Class::default()
    }

    pub fn symbol(s: Pic0Symbol) -> Self {
        Pic0Class::scaled(s, Rational::one())
    }

    pub fn scaled(s: Pic0Symbol, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(s, c);
        }
        Pic0Class { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &Pic0Symbol) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pic0Symbol, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Pic0Class) -> Pic0Class {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Pic0Class) -> Pic0Class {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Pic0Class {
        if c.is_zero() {
            return Pic0Class::zero();
        }
        Pic0Class {
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (s.clone(), v * c))
                .collect(),
        }
    }

    fn add_term(&mut self, s: Pic0Symbol, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s.clone()).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    /// The largest symbol with nonzero coefficient, used as the pivot in
    /// relation echelon form.
    fn pivot(&self) -> Option<&Pic0Symbol> {
        self.terms.keys().next_back()
    }
}

impl fmt::Display for Pic0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == Rational::one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "{mag}*{s}")?;
            }
        }
        Ok(())
    }
}

/// Declared Q-relations in `Pic^0`, kept in reduced echelon form over the
/// symbol basis. Each stored row is a class declared to be zero.
#[derive(Clone, PartialEq, Default, Debug)]
pub struct RelationSet {
    rows: Vec<Pic0Class>,
}

impl RelationSet {
    pub fn empty() -> Self {
        RelationSet::default()
    }

    pub fn from_relations(rels: Vec<Pic0Class>) -> Self {
        let mut set = RelationSet::empty();
        for r in rels {
            set.add_relation(r);
        }
        set
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Pic0Class] {
        &self.rows
    }

    /// Inserts a new relation, maintaining echelon form. Relations already
    /// implied by the declared span are dropped.
    pub fn add_relation(&mut self, rel: Pic0Class) {
        let mut rel = self.reduce(&rel);
        let pivot = match rel.pivot() {
            Some(p) => p.clone(),
            None => return,
        };
        rel = rel.scale(&rel.coeff(&pivot).recip());
        // Eliminate the new pivot from the existing rows.
        for row in &mut self.rows {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                *row = row.sub(&rel.scale(&c));
            }
        }
        self.rows.push(rel);
        self.rows.sort_by(|a, b| a.pivot().cmp(&b.pivot()));
    }

    /// Canonical representative of `c` modulo the declared span. Idempotent
    /// and Q-linear.
    pub fn reduce(&self, c: &Pic0Class) -> Pic0Class {
        let mut out = c.clone();
        for row in self.rows.iter().rev() {
            let pivot = row.pivot().expect("stored relations are nonzero");
            let coeff = out.coeff(pivot);
            if !coeff.is_zero() {
                out = out.sub(&row.scale(&coeff));
            }
        }
        out
    }

    /// True iff `c` lies in the declared span, i.e. is "torsion" as far as
    /// the engine can know.
    pub fn is_trivial(&self, c: &Pic0Class) -> bool {
        self.reduce(c).is_zero()
    }
}

/// A divisor class on the current smooth model: coordinates over the
/// `{B, F, E_1..E_n}` total-transform basis plus a numerically trivial
/// `Pic^0` pullback part.
#[derive(Clone, PartialEq, Debug)]
pub struct DivClass {
    pub section: Rational,
    pub fiber: Rational,
    pub exc: Vec<Rational>,
    pub pic0: Pic0Class,
}

impl DivClass {
    pub fn zero(exc_len: usize) -> Self {
        DivClass {
            section: Rational::zero(),
            fiber: Rational::zero(),
            exc: vec![Rational::zero(); exc_len],
            pic0: Pic0Class::zero(),
        }
    }

    pub fn from_parts(section: Rational, fiber: Rational, exc: Vec<Rational>) -> Self {
        DivClass {
            section,
            fiber,
            exc,
            pic0: Pic0Class::zero(),
        }
    }

    /// The pullback of a degree-zero class on the base curve.
    pub fn pic0_pullback(c: Pic0Class, exc_len: usize) -> Self {
        DivClass {
            pic0: c,
            ..DivClass::zero(exc_len)
        }
    }

    /// Number of exceptional coordinates, i.e. the blow-up count of the
    /// surface the class lives on.
    pub fn dim(&self) -> usize {
        self.exc.len()
    }

    /// Coordinate-extends the class to a surface with `exc_len` blow-ups.
    /// In the total-transform basis this is exactly the total pullback.
    pub fn extended(&self, exc_len: usize) -> Result<DivClass> {
        if exc_len < self.exc.len() {
            return Err(EngineError::Dimension {
                expected: self.exc.len(),
                got: exc_len,
            });
        }
        let mut out = self.clone();
        out.exc.resize(exc_len, Rational::zero());
        Ok(out)
    }

    fn check_dim(&self, other: &DivClass) -> Result<()> {
        if self.exc.len() != other.exc.len() {
            return Err(EngineError::Dimension {
                expected: self.exc.len(),
                got: other.exc.len(),
            });
        }
        Ok(())
    }

    /// The intersection form: `B.B = F.F = 0`, `B.F = 1`, `E_i.E_j = -d_ij`,
    /// cross terms zero, `Pic^0` parts orthogonal to everything.
    pub fn intersect(&self, other: &DivClass) -> Result<Rational> {
        self.check_dim(other)?;
        let mut acc = &self.section * &other.fiber + &self.fiber * &other.section;
        for (a, b) in self.exc.iter().zip(&other.exc) {
            acc -= &(a * b);
        }
        Ok(acc)
    }

    /// Panics on dimension mismatch; callers reconcile dimensions first
    /// (see [`DivClass::extended`]).
    pub fn add(&self, other: &DivClass) -> DivClass {
        self.check_dim(other).expect("class dimension mismatch");
        DivClass {
            section: &self.section + &other.section,
            fiber: &self.fiber + &other.fiber,
            exc: self
                .exc
                .iter()
                .zip(&other.exc)
                .map(|(a, b)| a + b)
                .collect(),
            pic0: self.pic0.add(&other.pic0),
        }
    }

    pub fn sub(&self, other: &DivClass) -> DivClass {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> DivClass {
        DivClass {
            section: &self.section * c,
            fiber: &self.fiber * c,
            exc: self.exc.iter().map(|a| a * c).collect(),
            pic0: self.pic0.scale(c),
        }
    }

    pub fn neg(&self) -> DivClass {
        self.scale(&-Rational::one())
    }

    /// True iff all numeric coordinates vanish (the `Pic^0` part is ignored;
    /// it intersects everything in zero).
    pub fn is_numerically_trivial(&self) -> bool {
        self.section.is_zero() && self.fiber.is_zero() && self.exc.iter().all(Rational::is_zero)
    }

    pub fn is_zero_up_to_relations(&self, rels: &RelationSet) -> bool {
        self.is_numerically_trivial() && rels.is_trivial(&self.pic0)
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}", self.section, self.fiber)?;
        if !self.exc.is_empty() {
            write!(f, "; ")?;
            for (i, e) in self.exc.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, ")")?;
        if !self.pic0.is_zero() {
            write!(f, " + p*({})", self.pic0)?;
        }
        Ok(())
    }
}

/// Linear equivalence of Q-divisor classes: equal coordinate vectors and
/// `Pic^0` parts that agree modulo the declared relations.
pub fn lin_equiv(a: &DivClass, b: &DivClass, rels: &RelationSet) -> Result<bool> {
    if a.exc.len() != b.exc.len() {
        return Err(EngineError::Dimension {
            expected: a.exc.len(),
            got: b.exc.len(),
        });
    }
    Ok(a.section == b.section
        && a.fiber == b.fiber
        && a.exc == b.exc
        && rels.is_trivial(&a.pic0.sub(&b.pic0)))
}

/// An element of `Pic` of a genus-one curve identified with the base curve:
/// a degree plus a degree-zero part in the formal `Pic^0` span.
#[derive(Clone, PartialEq, Debug)]
pub struct PicCurveClass {
    pub degree: Rational,
    pub pic0: Pic0Class,
}

impl PicCurveClass {
    pub fn new(degree: Rational, pic0: Pic0Class) -> Self {
        PicCurveClass { degree, pic0 }
    }

    pub fn zero() -> Self {
        PicCurveClass::new(Rational::zero(), Pic0Class::zero())
    }
}

impl fmt::Display for PicCurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(deg {}, {})", self.degree, self.pic0)
    }
}
