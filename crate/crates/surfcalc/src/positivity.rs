//! Nef/big verdicts with auditable certificates, non-klt loci, and the
//! numeric hypotheses of the basepoint-free-style semi-ampleness check.
//!
//! Tracked curves are not all curves on the surface, so nefness is never
//! inferred from tracked intersections alone. A certificate decomposes the
//! divisor as (pullback of a nef class on the ruled surface) + (effective
//! combination of tracked curves); positivity against every untracked curve
//! then follows, and only the finitely many effective components need to be
//! checked directly. The nef cone of the ruled surface itself — `aB + bF`
//! nef iff `a, b >= 0`, ample iff both strict — is a recorded model axiom,
//! not a theorem of the engine.

use crate::error::{EngineError, Result};
use crate::exact::{is_negative_definite, QMatrix, Rational};
use crate::picard::{lin_equiv, DivClass};
use crate::surface::{DivExpr, SurfaceModel};

/// Axiom and caveat labels collected into reports.
pub const AX_S_NEF_CONE: &str = "s-nef-cone";
pub const AX_NEF_ON_TRACKED: &str = "nef-on-tracked-curves";
pub const AX_MINIMAL_ON_TRACKED: &str = "minimal-on-tracked-curves";
pub const AX_DESCENDED_AMPLE_ON_TRACKED: &str = "descended-ample-on-tracked-curves";

/// A decomposition `D ~ pullback + sum_i c_i C_i` with `c_i > 0`.
#[derive(Clone, Debug)]
pub struct NefCertificate {
    /// A class on the ruled surface (no exceptional coordinates); its
    /// `Pic^0` part is the allowed numerically trivial adjustment.
    pub pullback: DivClass,
    /// Positive multiples of tracked curves.
    pub effective: Vec<(String, Rational)>,
}

impl NefCertificate {
    pub fn pullback_only(pullback: DivClass) -> Self {
        NefCertificate {
            pullback,
            effective: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        NefCertificate::pullback_only(DivClass::zero(0))
    }

    /// Concatenation certifies the sum of the certified divisors.
    pub fn concat(&self, other: &NefCertificate) -> NefCertificate {
        let mut effective = self.effective.clone();
        for (name, c) in &other.effective {
            match effective.iter_mut().find(|(n, _)| n == name) {
                Some((_, acc)) => *acc = &*acc + c,
                None => effective.push((name.clone(), c.clone())),
            }
        }
        NefCertificate {
            pullback: self.pullback.add(&other.pullback),
            effective,
        }
    }

    pub fn scale(&self, c: &Rational) -> NefCertificate {
        NefCertificate {
            pullback: self.pullback.scale(c),
            effective: self
                .effective
                .iter()
                .map(|(n, v)| (n.clone(), v * c))
                .collect(),
        }
    }
}

/// Outcome of a certificate check, with the verified intersection numbers.
#[derive(Clone, Debug)]
pub struct NefCheck {
    pub nef: bool,
    pub numerically_trivial: bool,
    /// `D . C` for each effective component `C`; all must be nonnegative.
    pub component_values: Vec<(String, Rational)>,
    pub axioms: Vec<&'static str>,
}

/// Checks a nef certificate for `d`.
///
/// Errors with `CertificateInvalid` when the decomposition does not match
/// `d` (distinct from a false verdict). A numerically trivial divisor is
/// nef with any certificate, including the empty one.
pub fn nef_with_certificate(
    model: &SurfaceModel,
    d: &DivClass,
    cert: &NefCertificate,
) -> Result<NefCheck> {
    if d.is_numerically_trivial() {
        return Ok(NefCheck {
            nef: true,
            numerically_trivial: true,
            component_values: Vec::new(),
            axioms: vec![],
        });
    }
    if cert.pullback.dim() != 0 {
        return Err(EngineError::CertificateInvalid(
            "pullback part must be a class on the ruled surface".into(),
        ));
    }
    for (name, c) in &cert.effective {
        if !c.is_positive() {
            return Err(EngineError::CertificateInvalid(format!(
                "effective coefficient of `{name}` must be positive"
            )));
        }
    }
    // (i) the decomposition really is the divisor;
    let mut decomposition = model.total_pullback(&cert.pullback)?;
    for (name, c) in &cert.effective {
        decomposition = decomposition.add(&model.class_of(name)?.scale(c));
    }
    if !lin_equiv(&decomposition, d, &model.relations)? {
        return Err(EngineError::CertificateInvalid(format!(
            "decomposition evaluates to {decomposition}, certified divisor is {d}"
        )));
    }
    // (ii) the pullback part lies in the nef cone of the ruled surface;
    let cone_ok = !cert.pullback.section.is_negative() && !cert.pullback.fiber.is_negative();
    // (iii) the divisor meets each effective component nonnegatively.
    let mut component_values = Vec::new();
    let mut components_ok = true;
    for (name, _) in &cert.effective {
        let v = d.intersect(&model.class_of(name)?)?;
        if v.is_negative() {
            components_ok = false;
        }
        component_values.push((name.clone(), v));
    }
    Ok(NefCheck {
        nef: cone_ok && components_ok,
        numerically_trivial: false,
        component_values,
        axioms: vec![AX_S_NEF_CONE],
    })
}

/// Bigness for a divisor already known to be nef: positive self-intersection.
pub fn is_big_given_nef(d: &DivClass) -> Result<bool> {
    Ok(d.intersect(d)?.is_positive())
}

/// The weaker tracked-curves-only nef verdict; clearly labeled as such.
pub fn nef_on_tracked(model: &SurfaceModel, d: &DivClass) -> Result<NefCheck> {
    let mut component_values = Vec::new();
    let mut ok = true;
    for c in model.curves() {
        let v = d.intersect(&c.cls)?;
        if v.is_negative() {
            ok = false;
        }
        component_values.push((c.name.clone(), v));
    }
    Ok(NefCheck {
        nef: ok,
        numerically_trivial: d.is_numerically_trivial(),
        component_values,
        axioms: vec![AX_NEF_ON_TRACKED],
    })
}

/// The non-klt locus of a transverse boundary: the support of the
/// round-down, i.e. the curves with coefficient at least one.
pub fn nklt_locus(model: &SurfaceModel, delta: &[(String, Rational)]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (name, c) in delta {
        model.curve(name)?;
        if c.is_negative() {
            return Err(EngineError::Usage(format!(
                "boundary coefficient of `{name}` must be nonnegative"
            )));
        }
        if c >= &Rational::one() {
            out.push(name.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SemiAmpleChecks {
    pub nef_d: bool,
    pub nef_big_shift: bool,
    pub nklt_restriction_trivial: bool,
    pub zero_locus_negative_definite: bool,
}

/// The numeric hypotheses of the semi-ampleness criterion, checked against
/// caller-supplied certificates, plus the zero locus that the induced
/// contraction would collapse.
#[derive(Clone, Debug)]
pub struct SemiAmpleReport {
    pub divisor: DivClass,
    pub boundary: Vec<(String, Rational)>,
    pub amplitude: u32,
    pub checks: SemiAmpleChecks,
    pub nklt: Vec<String>,
    pub zero_locus: Vec<String>,
    /// In positive characteristic the criterion additionally requires the
    /// divisor not to be numerically trivial; recorded, not decided.
    pub numerically_trivial_flag: bool,
    pub axioms: Vec<&'static str>,
}

impl SemiAmpleReport {
    pub fn pass(&self) -> bool {
        self.checks.nef_d
            && self.checks.nef_big_shift
            && self.checks.nklt_restriction_trivial
            && self.checks.zero_locus_negative_definite
    }
}

/// Runs the four checks for `D` against the pair `(X, Delta)` at level `a`:
/// `D` nef, `aD - (K + Delta)` nef and big, `D` trivial on the non-klt
/// locus, and the D-trivial negative curves negative definite.
pub fn semi_ample_certificate(
    model: &SurfaceModel,
    d_expr: &DivExpr,
    delta: &[(String, Rational)],
    a: u32,
    cert_d: &NefCertificate,
    cert_shift: &NefCertificate,
) -> Result<SemiAmpleReport> {
    if a == 0 {
        return Err(EngineError::Usage("the level `a` must be positive".into()));
    }
    let d = model.expr_class(d_expr)?;
    let mut axioms = Vec::new();

    let nef_d_check = nef_with_certificate(model, &d, cert_d)?;
    axioms.extend(nef_d_check.axioms.iter());

    // shift = aD - (K + Delta)
    let mut shift = d.scale(&Rational::from_int(i64::from(a))).sub(&model.canonical);
    for (name, c) in delta {
        if c.is_negative() {
            return Err(EngineError::Usage(format!(
                "boundary coefficient of `{name}` must be nonnegative"
            )));
        }
        shift = shift.sub(&model.class_of(name)?.scale(c));
    }
    let shift_check = nef_with_certificate(model, &shift, cert_shift)?;
    axioms.extend(shift_check.axioms.iter());
    let nef_big_shift = shift_check.nef && is_big_given_nef(&shift)?;

    // D restricted to the non-klt locus must be trivial: numerically
    // trivial on each member and, for genus-one members, with vanishing
    // reduced degree-zero part.
    let nklt = nklt_locus(model, delta)?;
    let mut nklt_trivial = true;
    for name in &nklt {
        let rec = model.curve(name)?;
        if !d.intersect(&rec.cls)?.is_zero() {
            nklt_trivial = false;
            continue;
        }
        if rec.genus == 1 {
            let r = model.restrict_to_curve(d_expr, name)?;
            if !model.relations.is_trivial(&r.pic0) {
                nklt_trivial = false;
            }
        }
    }

    // Zero locus: tracked D-trivial curves of negative self-intersection.
    let mut zero_locus = Vec::new();
    for c in model.curves() {
        if d.intersect(&c.cls)?.is_zero() && c.cls.intersect(&c.cls)?.is_negative() {
            zero_locus.push(c.name.clone());
        }
    }
    let zero_locus_nd = if zero_locus.is_empty() {
        true
    } else {
        let k = zero_locus.len();
        let mut gram = QMatrix::zero(k, k);
        for (i, a_name) in zero_locus.iter().enumerate() {
            for (j, b_name) in zero_locus.iter().enumerate() {
                gram.set(
                    i,
                    j,
                    model
                        .class_of(a_name)?
                        .intersect(&model.class_of(b_name)?)?,
                );
            }
        }
        is_negative_definite(&gram)?
    };

    axioms.sort_unstable();
    axioms.dedup();
    Ok(SemiAmpleReport {
        divisor: d.clone(),
        boundary: delta.to_vec(),
        amplitude: a,
        checks: SemiAmpleChecks {
            nef_d: nef_d_check.nef,
            nef_big_shift,
            nklt_restriction_trivial: nklt_trivial,
            zero_locus_negative_definite: zero_locus_nd,
        },
        nklt,
        zero_locus,
        numerically_trivial_flag: d.is_numerically_trivial(),
        axioms,
    })
}
