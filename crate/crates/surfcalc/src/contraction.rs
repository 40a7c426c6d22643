//! Contractions of negative-definite curve configurations.
//!
//! Divisors on the contracted surface are always represented by classes on
//! the smooth source; the pullback in the sense of Mumford is the unique
//! correction by contracted curves that is orthogonal to all of them, and
//! intersection numbers downstairs are intersection numbers of pullbacks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{EngineError, Result};
use crate::exact::{is_negative_definite, solve_linear, LinearSolution, QMatrix, Rational};
use crate::picard::{DivClass, Pic0Class, RelationSet};
use crate::positivity::SemiAmpleReport;
use crate::surface::{DivExpr, SurfaceModel};

/// Three-valued verdicts: the engine distinguishes "provably not" from
/// "not decidable with the declared data".
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::True => write!(f, "true"),
            TriBool::False => write!(f, "false"),
            TriBool::Unknown => write!(f, "unknown"),
        }
    }
}

/// A contraction of a negative-definite set of tracked curves.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub name: String,
    pub source: SurfaceModel,
    pub contracted: Vec<String>,
    pub gram: QMatrix,
}

/// Builds the Gram matrix of the curve set and admits the contraction iff
/// it is negative definite (Mumford's numerical condition).
pub fn make_contraction(model: &SurfaceModel, curves: &[&str], name: &str) -> Result<Contraction> {
    if curves.is_empty() {
        return Err(EngineError::NotContractible("empty curve set".into()));
    }
    let mut seen = BTreeSet::new();
    for c in curves {
        if !seen.insert(*c) {
            return Err(EngineError::DuplicateName((*c).to_string()));
        }
    }
    let classes: Vec<DivClass> = curves
        .iter()
        .map(|c| model.class_of(c))
        .collect::<Result<_>>()?;
    let k = curves.len();
    let mut gram = QMatrix::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, classes[i].intersect(&classes[j])?);
        }
    }
    if !is_negative_definite(&gram)? {
        return Err(EngineError::NotContractible(format!(
            "Gram matrix of {{{}}} is not negative definite",
            curves.join(", ")
        )));
    }
    Ok(Contraction {
        name: name.to_string(),
        source: model.clone(),
        contracted: curves.iter().map(|c| c.to_string()).collect(),
        gram,
    })
}

/// The coefficients `a_i` in `K_source = pullback(K_target) + sum a_i C_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct DiscrepancyVector {
    pub coefficients: BTreeMap<String, Rational>,
}

impl DiscrepancyVector {
    pub fn min(&self) -> Rational {
        self.coefficients
            .values()
            .cloned()
            .reduce(Rational::min)
            .expect("discrepancy vector of a nonempty contraction")
    }
}

/// One linear condition `sum coefficients[i] * a_i + constant = 0` on the
/// discrepancy unknowns, in the sign convention obtained by intersecting
/// `K - sum a_i C_i` with one contracted curve.
#[derive(Clone, PartialEq, Debug)]
pub struct OrthogonalityEquation {
    pub curve: String,
    pub coefficients: Vec<Rational>,
    pub constant: Rational,
}

/// Discrepancy thresholds on the minimal coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SingularityClass {
    Canonical,
    KltNonCanonical,
    LcNonKlt,
    NonLc,
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityClass::Canonical => write!(f, "canonical"),
            SingularityClass::KltNonCanonical => write!(f, "klt-noncanonical"),
            SingularityClass::LcNonKlt => write!(f, "lc-nonklt"),
            SingularityClass::NonLc => write!(f, "non-lc"),
        }
    }
}

pub fn classify_singularity(d: &DiscrepancyVector) -> SingularityClass {
    let min = d.min();
    let minus_one = Rational::from_int(-1);
    if !min.is_negative() {
        SingularityClass::Canonical
    } else if min > minus_one {
        SingularityClass::KltNonCanonical
    } else if min == minus_one {
        SingularityClass::LcNonKlt
    } else {
        SingularityClass::NonLc
    }
}

/// Q-Gorensteinness of the contracted surface, decided through the torsion
/// obstructions of the canonical pullback restricted to the contracted
/// genus-one curves.
#[derive(Clone, Debug)]
pub struct QGorensteinVerdict {
    pub status: TriBool,
    /// Reduced obstruction per contracted genus-one curve.
    pub obstructions: BTreeMap<String, Pic0Class>,
    pub notes: Vec<String>,
}

/// A divisor handle on the contracted surface, carried by its source
/// representative (which is orthogonal to the contracted curves).
#[derive(Clone, Debug)]
pub struct DescendedDivisor {
    pub representative: DivClass,
    pub ample: bool,
    pub numerically_trivial: bool,
}

impl Contraction {
    fn contracted_classes(&self) -> Vec<DivClass> {
        self.contracted
            .iter()
            .map(|c| self.source.class_of(c).expect("contracted curves tracked"))
            .collect()
    }

    /// Coefficients `x_i` with `(D + sum x_i C_i) . C_j = 0` for all `j`.
    /// Unique because the Gram matrix is negative definite.
    pub fn correction_coefficients(&self, d: &DivClass) -> Result<Vec<Rational>> {
        let classes = self.contracted_classes();
        let rhs: Vec<Rational> = classes
            .iter()
            .map(|c| d.intersect(c).map(|v| -v))
            .collect::<Result<_>>()?;
        match solve_linear(&self.gram, &rhs)? {
            LinearSolution::Unique(x) => Ok(x),
            LinearSolution::Singular => unreachable!("negative definite Gram is invertible"),
        }
    }

    /// The pullback in the sense of Mumford of the divisor represented by
    /// `d`: the unique `D + sum x_i C_i` orthogonal to every contracted
    /// curve.
    pub fn mumford_pullback(&self, d: &DivClass) -> Result<DivClass> {
        let x = self.correction_coefficients(d)?;
        let mut out = d.clone();
        for (xi, cls) in x.iter().zip(self.contracted_classes()) {
            out = out.add(&cls.scale(xi));
        }
        Ok(out)
    }

    /// Same correction in expression form, for restriction bookkeeping.
    pub fn mumford_pullback_expr(&self, e: &DivExpr) -> Result<DivExpr> {
        let d = self.source.expr_class(e)?;
        let x = self.correction_coefficients(&d)?;
        let mut out = e.clone();
        for (xi, name) in x.iter().zip(&self.contracted) {
            out = out.add(&DivExpr::scaled_curve(name, xi.clone()));
        }
        Ok(out)
    }

    /// Intersection number on the contracted surface.
    pub fn target_intersect(&self, d1: &DivClass, d2: &DivClass) -> Result<Rational> {
        let p1 = self.mumford_pullback(d1)?;
        let p2 = self.mumford_pullback(d2)?;
        p1.intersect(&p2)
    }

    /// Discrepancies of the contracted curves: `a_i = -x_i` for the
    /// canonical correction.
    pub fn discrepancies(&self) -> Result<DiscrepancyVector> {
        let x = self.correction_coefficients(&self.source.canonical)?;
        Ok(DiscrepancyVector {
            coefficients: self
                .contracted
                .iter()
                .zip(x)
                .map(|(name, v)| (name.clone(), -v))
                .collect(),
        })
    }

    /// The defining linear system of the discrepancies, one equation per
    /// contracted curve: intersecting `K - sum a_i C_i` with `C_j` gives
    /// `0 = K.C_j - sum (C_i.C_j) a_i`.
    pub fn orthogonality_equations(&self) -> Result<Vec<OrthogonalityEquation>> {
        let classes = self.contracted_classes();
        let mut out = Vec::new();
        for (j, cj) in classes.iter().enumerate() {
            let coefficients = (0..classes.len())
                .map(|i| -self.gram.get(i, j).clone())
                .collect();
            out.push(OrthogonalityEquation {
                curve: self.contracted[j].clone(),
                coefficients,
                constant: self.source.canonical.intersect(cj)?,
            });
        }
        Ok(out)
    }

    /// Decides Q-Gorensteinness relative to the declared relations.
    ///
    /// For rational contracted curves numerical orthogonality of the
    /// canonical pullback already gives local triviality; each genus-one
    /// contracted curve contributes the reduced degree-zero part of the
    /// restriction as an obstruction. The verdict is true iff every
    /// obstruction reduces to zero.
    pub fn q_gorenstein_test(&self, rels: &RelationSet) -> Result<QGorensteinVerdict> {
        let pullback = self.mumford_pullback_expr(&self.source.canonical_expr)?;
        let mut obstructions = BTreeMap::new();
        let mut notes = Vec::new();
        let mut unknown = false;
        for name in &self.contracted {
            let rec = self.source.curve(name)?;
            if rec.genus != 1 {
                continue;
            }
            match self.source.restrict_to_curve(&pullback, name) {
                Ok(r) => {
                    debug_assert!(r.degree.is_zero(), "pullback is orthogonal by construction");
                    obstructions.insert(name.clone(), rels.reduce(&r.pic0));
                }
                Err(EngineError::ObstructionNotComputable { target, degree }) => {
                    debug_assert!(degree.is_zero());
                    notes.push(format!(
                        "obstruction on `{target}` runs through an undeclared point"
                    ));
                    unknown = true;
                }
                Err(e) => return Err(e),
            }
        }
        let status = if obstructions.values().any(|o| !o.is_zero()) {
            TriBool::False
        } else if unknown {
            TriBool::Unknown
        } else {
            TriBool::True
        };
        Ok(QGorensteinVerdict {
            status,
            obstructions,
            notes,
        })
    }

    /// A divisor descends iff it is orthogonal to every contracted curve.
    /// It is flagged ample when a passing semi-ampleness report certified a
    /// positive multiple of it with zero locus exactly the contracted set.
    pub fn descend_divisor(
        &self,
        d: &DivClass,
        certificate: Option<&SemiAmpleReport>,
    ) -> Result<DescendedDivisor> {
        for name in &self.contracted {
            let v = d.intersect(&self.source.class_of(name)?)?;
            if !v.is_zero() {
                return Err(EngineError::NotDescendable {
                    curve: name.clone(),
                    value: v,
                });
            }
        }
        let ample = certificate.is_some_and(|report| {
            let locus: BTreeSet<&String> = report.zero_locus.iter().collect();
            let ours: BTreeSet<&String> = self.contracted.iter().collect();
            report.pass() && locus == ours && positively_proportional(d, &report.divisor)
        });
        Ok(DescendedDivisor {
            representative: d.clone(),
            ample,
            numerically_trivial: d.is_numerically_trivial(),
        })
    }
}

/// `a == lambda * b` for some positive rational `lambda`, compared on the
/// full classes. Numerically trivial classes are never proportional to
/// anything here (they cannot be ample).
fn positively_proportional(a: &DivClass, b: &DivClass) -> bool {
    if b.is_numerically_trivial() || a.dim() != b.dim() {
        return false;
    }
    let coords = |d: &DivClass| -> Vec<Rational> {
        let mut v = vec![d.section.clone(), d.fiber.clone()];
        v.extend(d.exc.iter().cloned());
        v
    };
    let av = coords(a);
    let bv = coords(b);
    let pivot = bv.iter().position(|c| !c.is_zero()).expect("not trivial");
    let lambda = &av[pivot] / &bv[pivot];
    if !lambda.is_positive() {
        return false;
    }
    a == &b.scale(&lambda)
}

/// Input to a single MMP step: a smooth model or a contracted surface.
#[derive(Clone, Copy)]
pub enum MmpInput<'a> {
    Smooth(&'a SurfaceModel),
    Contracted(&'a Contraction),
}

/// Outcome of one MMP step.
#[derive(Clone, PartialEq, Debug)]
pub enum MmpOutcome {
    /// K meets every tracked curve nonnegatively. Tracked curves are not
    /// all curves, so this is a verdict under the tracked-curves caveat.
    Minimal,
    /// A K-negative curve of self-intersection zero: a fibration direction.
    MoriFiberDirection(String),
    /// A K-negative curve of negative self-intersection: an extremal
    /// birational contraction.
    Contract(BTreeSet<String>),
    /// A K-negative curve of positive self-intersection; outside the cases
    /// the engine is built for, reported as a flag.
    FanoDirection(String),
}

impl fmt::Display for MmpOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MmpOutcome::Minimal => write!(f, "minimal"),
            MmpOutcome::MoriFiberDirection(c) => write!(f, "fiber{{{c}}}"),
            MmpOutcome::Contract(set) => {
                let names: Vec<&str> = set.iter().map(String::as_str).collect();
                write!(f, "contract{{{}}}", names.join(", "))
            }
            MmpOutcome::FanoDirection(c) => write!(f, "fano{{{c}}}"),
        }
    }
}

/// Runs one MMP step: picks the first tracked K-negative curve in
/// construction order and classifies it by its self-intersection.
pub fn mmp_step(input: MmpInput<'_>) -> Result<MmpOutcome> {
    let (model, survivors): (&SurfaceModel, Vec<String>) = match input {
        MmpInput::Smooth(m) => (m, m.curve_names()),
        MmpInput::Contracted(c) => (
            &c.source,
            c.source
                .curve_names()
                .into_iter()
                .filter(|n| !c.contracted.contains(n))
                .collect(),
        ),
    };
    let pair = |d1: &DivClass, d2: &DivClass| -> Result<Rational> {
        match input {
            MmpInput::Smooth(_) => d1.intersect(d2),
            MmpInput::Contracted(c) => c.target_intersect(d1, d2),
        }
    };
    for name in survivors {
        let cls = model.class_of(&name)?;
        let k_c = pair(&model.canonical, &cls)?;
        if !k_c.is_negative() {
            continue;
        }
        let sq = pair(&cls, &cls)?;
        return Ok(if sq.is_negative() {
            MmpOutcome::Contract(BTreeSet::from([name]))
        } else if sq.is_zero() {
            MmpOutcome::MoriFiberDirection(name)
        } else {
            MmpOutcome::FanoDirection(name)
        });
    }
    Ok(MmpOutcome::Minimal)
}
