//! Cyclic covers and finite-generation verdicts.
//!
//! The cover itself is never constructed as a surface. What the engine
//! keeps is its canonical class through the ramification formula,
//! positivity flags for that class, and the propagation rules for
//! Q-Gorensteinness and finite generation of the canonical ring along
//! finite covers and fiber products.

use std::fmt;

use crate::contraction::{Contraction, DescendedDivisor, TriBool};
use crate::error::{EngineError, Result};
use crate::exact::Rational;
use crate::picard::DivClass;
use crate::surface::DivExpr;

/// Specification of a degree-`m` cyclic cover of a contracted surface,
/// ramified along an ample divisor `A` in `|mH|`.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub degree: u32,
    pub branch: DescendedDivisor,
}

/// The canonical class of the cover: the pullback of
/// `K + ((m-1)/m) A` along the covering map, with its positivity flags.
#[derive(Clone, Debug)]
pub struct CoverClass {
    /// Source representative of the log class downstairs.
    pub log_class: DivClass,
    pub log_expr: Option<DivExpr>,
    /// `(m-1)/m`.
    pub branch_coefficient: Rational,
    pub nef: bool,
    pub big: bool,
    pub assumptions: Vec<String>,
}

/// Computes the cover's canonical class by the ramification formula.
///
/// Requires the branch divisor to be descended and ample-flagged. The nef
/// flag combines the numerical triviality of the canonical pullback with
/// the nonnegative ample multiple; the big flag is the positive square of
/// the log class.
pub fn cover_canonical_class(c: &Contraction, spec: &CoverSpec) -> Result<CoverClass> {
    if spec.degree < 2 {
        return Err(EngineError::Usage(
            "a cyclic cover needs degree at least 2".into(),
        ));
    }
    if !spec.branch.ample {
        return Err(EngineError::Usage(
            "the branch divisor must be an ample-flagged descended class".into(),
        ));
    }
    let m = i64::from(spec.degree);
    let coeff = Rational::new(m - 1, m);
    let k_pull = c.mumford_pullback(&c.source.canonical)?;
    let log_class = k_pull.add(&spec.branch.representative.scale(&coeff));
    let k_trivial = k_pull.is_numerically_trivial();
    // Both summands are orthogonal to the contracted curves, so the square
    // upstairs equals the downstairs self-intersection.
    let big = log_class.intersect(&log_class)?.is_positive();
    let mut assumptions = vec![
        "branch divisor supported in the smooth locus".to_string(),
        if spec.degree == 2 {
            "degree 2 (characteristic-zero configuration)".to_string()
        } else {
            format!(
                "degree {} assumed coprime to the (symbolic) characteristic",
                spec.degree
            )
        },
    ];
    if !k_trivial {
        assumptions.push(
            "canonical pullback not numerically trivial; nef flag not established".to_string(),
        );
    }
    let log_expr = c.mumford_pullback_expr(&c.source.canonical_expr).ok();
    let nef = k_trivial && !coeff.is_negative();
    Ok(CoverClass {
        log_class,
        log_expr,
        branch_coefficient: coeff,
        nef,
        big,
        assumptions,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FiniteGeneration {
    Yes,
    No,
    Undetermined,
}

impl fmt::Display for FiniteGeneration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGeneration::Yes => write!(f, "yes"),
            FiniteGeneration::No => write!(f, "no"),
            FiniteGeneration::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// Which rule decided the verdict.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FgRule {
    /// Kodaira dimension at most one always has finitely generated ring.
    KappaLeOne,
    /// Gorenstein surfaces always have finitely generated ring.
    GorensteinRemark,
    /// For a minimal surface of maximal Kodaira dimension, finite
    /// generation holds iff the surface is Q-Gorenstein.
    CriterionTheorem,
}

impl fmt::Display for FgRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FgRule::KappaLeOne => write!(f, "kappa-le-1"),
            FgRule::GorensteinRemark => write!(f, "gorenstein-remark"),
            FgRule::CriterionTheorem => write!(f, "criterion-theorem"),
        }
    }
}

/// Inputs to the verdict rules. `k_nef_mumford` and `k_big` refer to the
/// canonical class in the sense of Mumford; together they stand in for
/// maximal Kodaira dimension of a minimal surface.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FgFlags {
    pub q_gorenstein: TriBool,
    pub k_nef_mumford: bool,
    pub k_big: bool,
    pub kappa_le_1: bool,
    pub gorenstein: bool,
}

#[derive(Clone, Debug)]
pub struct FgVerdict {
    pub finitely_generated: FiniteGeneration,
    pub rule_applied: Option<FgRule>,
    pub inputs: FgFlags,
}

/// Applies the first matching rule.
pub fn fg_verdict(inputs: FgFlags) -> FgVerdict {
    let (fg, rule) = if inputs.kappa_le_1 {
        (FiniteGeneration::Yes, Some(FgRule::KappaLeOne))
    } else if inputs.gorenstein {
        (FiniteGeneration::Yes, Some(FgRule::GorensteinRemark))
    } else if inputs.k_nef_mumford && inputs.k_big {
        match inputs.q_gorenstein {
            TriBool::True => (FiniteGeneration::Yes, Some(FgRule::CriterionTheorem)),
            TriBool::False => (FiniteGeneration::No, Some(FgRule::CriterionTheorem)),
            TriBool::Unknown => (FiniteGeneration::Undetermined, None),
        }
    } else {
        (FiniteGeneration::Undetermined, None)
    };
    FgVerdict {
        finitely_generated: fg,
        rule_applied: rule,
        inputs,
    }
}

/// Verdicts for the fiber product of the cover with a second contraction
/// over the same base: finite generation is inherited from the cover, and
/// Q-Gorensteinness from the second contracted surface.
#[derive(Clone, Debug)]
pub struct FiberProductVerdicts {
    pub finitely_generated: FiniteGeneration,
    pub q_gorenstein: TriBool,
    pub notes: Vec<String>,
}

pub fn fiber_product_verdicts(
    cover_fg: FiniteGeneration,
    covering_surface_q_gorenstein: TriBool,
) -> FiberProductVerdicts {
    FiberProductVerdicts {
        finitely_generated: cover_fg,
        q_gorenstein: covering_surface_q_gorenstein,
        notes: vec![
            "finite generation inherited along the finite cover".to_string(),
            "Q-Gorensteinness inherited from the covered surface".to_string(),
            "Kodaira dimension inherited along the finite cover".to_string(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::make_contraction;
    use crate::picard::{lin_equiv, Pic0Class, Pic0Symbol, RelationSet};
    use crate::surface::{standard_model, DivExpr};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn branch_on_y(m: i64) -> (Contraction, DescendedDivisor) {
        let x = standard_model(2, vec![]).unwrap();
        let pi = make_contraction(&x, &["B", "E1"], "pi").unwrap();
        let h = x
            .expr_class(&DivExpr::scaled_curve("Bp", q(3)).add(&DivExpr::curve("F")))
            .unwrap();
        let mut a = pi.descend_divisor(&h.scale(&q(m)), None).unwrap();
        a.ample = true; // certified separately in the positivity tests
        (pi, a)
    }

    #[test]
    fn ramification_formula_instances() {
        for m in [2u32, 3] {
            let (pi, a) = branch_on_y(i64::from(m));
            let spec = CoverSpec { degree: m, branch: a.clone() };
            let cc = cover_canonical_class(&pi, &spec).unwrap();
            assert_eq!(cc.branch_coefficient, Rational::new(i64::from(m) - 1, i64::from(m)));
            let want = pi
                .mumford_pullback(&pi.source.canonical)
                .unwrap()
                .add(&a.representative.scale(&cc.branch_coefficient));
            assert!(lin_equiv(&cc.log_class, &want, &RelationSet::empty()).unwrap());
            assert!(cc.nef);
            assert!(cc.big);
        }
    }

    #[test]
    fn cover_class_numbers_for_the_degree_two_cover() {
        let (pi, a) = branch_on_y(2);
        let spec = CoverSpec { degree: 2, branch: a };
        let cc = cover_canonical_class(&pi, &spec).unwrap();
        // K is numerically p*(e), so the square is the square of half the
        // branch class: ((1/2) * 2 * (3Bp + F))^2 = 4.
        assert_eq!(cc.log_class.intersect(&cc.log_class).unwrap(), q(4));
        let twist = DivClass::pic0_pullback(Pic0Class::symbol(Pic0Symbol::gen("e")), 2);
        let k_pull = pi.mumford_pullback(&pi.source.canonical).unwrap();
        assert!(lin_equiv(&k_pull, &twist, &RelationSet::empty()).unwrap());
    }

    #[test]
    fn unflagged_branch_is_rejected() {
        let (pi, mut a) = branch_on_y(2);
        a.ample = false;
        assert!(matches!(
            cover_canonical_class(&pi, &CoverSpec { degree: 2, branch: a }),
            Err(EngineError::Usage(_))
        ));
        let (pi, a) = branch_on_y(2);
        assert!(matches!(
            cover_canonical_class(&pi, &CoverSpec { degree: 1, branch: a }),
            Err(EngineError::Usage(_))
        ));
    }

    #[test]
    fn verdict_rules() {
        let base = FgFlags {
            q_gorenstein: TriBool::Unknown,
            k_nef_mumford: false,
            k_big: false,
            kappa_le_1: false,
            gorenstein: false,
        };
        assert_eq!(
            fg_verdict(base).finitely_generated,
            FiniteGeneration::Undetermined
        );
        assert_eq!(
            fg_verdict(FgFlags { kappa_le_1: true, ..base }).finitely_generated,
            FiniteGeneration::Yes
        );
        assert_eq!(
            fg_verdict(FgFlags { gorenstein: true, ..base }).finitely_generated,
            FiniteGeneration::Yes
        );
        let minimal_max = FgFlags {
            k_nef_mumford: true,
            k_big: true,
            ..base
        };
        let no = fg_verdict(FgFlags {
            q_gorenstein: TriBool::False,
            ..minimal_max
        });
        assert_eq!(no.finitely_generated, FiniteGeneration::No);
        assert_eq!(no.rule_applied, Some(FgRule::CriterionTheorem));
        let yes = fg_verdict(FgFlags {
            q_gorenstein: TriBool::True,
            ..minimal_max
        });
        assert_eq!(yes.finitely_generated, FiniteGeneration::Yes);
    }

    #[test]
    fn gorenstein_flag_is_monotone_on_consistent_inputs() {
        // On consistent inputs (Gorenstein implies Q-Gorenstein), adding
        // the Gorenstein flag can only move undetermined to yes.
        for qg in [TriBool::True, TriBool::Unknown] {
            for nef in [false, true] {
                for big in [false, true] {
                    for kappa in [false, true] {
                        let without = fg_verdict(FgFlags {
                            q_gorenstein: qg,
                            k_nef_mumford: nef,
                            k_big: big,
                            kappa_le_1: kappa,
                            gorenstein: false,
                        });
                        let with = fg_verdict(FgFlags {
                            q_gorenstein: qg,
                            k_nef_mumford: nef,
                            k_big: big,
                            kappa_le_1: kappa,
                            gorenstein: true,
                        });
                        match without.finitely_generated {
                            FiniteGeneration::Yes => {
                                assert_eq!(with.finitely_generated, FiniteGeneration::Yes)
                            }
                            FiniteGeneration::No => unreachable!("consistent inputs"),
                            FiniteGeneration::Undetermined => {
                                assert_eq!(with.finitely_generated, FiniteGeneration::Yes)
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_product_propagation() {
        let v = fiber_product_verdicts(FiniteGeneration::No, TriBool::True);
        assert_eq!(v.finitely_generated, FiniteGeneration::No);
        assert_eq!(v.q_gorenstein, TriBool::True);
    }
}
