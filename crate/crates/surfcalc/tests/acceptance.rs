//! End-to-end acceptance suite: each test pins one group of golden values
//! or behaviors of the built-in constructions, exactly (no tolerances
//! anywhere; the arithmetic is exact).
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one
//! pass/fail line per criterion.

use std::collections::BTreeSet;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surfcalc::contraction::{
    make_contraction, mmp_step, Contraction, MmpInput, MmpOutcome, TriBool,
};
use surfcalc::cover::{
    cover_canonical_class, fg_verdict, fiber_product_verdicts, CoverSpec, FgFlags, FgRule,
    FiniteGeneration,
};
use surfcalc::exact::{is_negative_definite, QMatrix, Rational};
use surfcalc::picard::{lin_equiv, DivClass, Pic0Class, Pic0Symbol, RelationSet};
use surfcalc::positivity::{
    nef_with_certificate, nklt_locus, semi_ample_certificate, NefCertificate,
};
use surfcalc::surface::{standard_model, DivExpr, SurfaceModel};
use surfcalc::{dsl, scenarios};

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn e() -> Pic0Class {
    Pic0Class::symbol(Pic0Symbol::gen("e"))
}

fn xi(p: &str) -> Pic0Class {
    Pic0Class::symbol(Pic0Symbol::point(p))
}

fn fiber_relation() -> Pic0Class {
    xi("x").sub(&xi("xp")).sub(&e().scale(&q(7)))
}

fn cls(m: &SurfaceModel, name: &str) -> DivClass {
    m.class_of(name).unwrap()
}

fn dot(a: &DivClass, b: &DivClass) -> Rational {
    a.intersect(b).unwrap()
}

fn expr(terms: &[(&str, i64)]) -> DivExpr {
    terms
        .iter()
        .fold(DivExpr::zero(), |acc, (name, c)| {
            acc.add(&DivExpr::scaled_curve(name, q(*c)))
        })
}

/// D = 3Bp + F on the two-blow-up model.
fn d_on_x(m: &SurfaceModel) -> DivClass {
    cls(m, "Bp").scale(&q(3)).add(&cls(m, "F"))
}

/// Dt = 6Bp + 2F + Fp on the five-blow-up model.
fn dt_on_xt(m: &SurfaceModel) -> DivClass {
    cls(m, "Bp")
        .scale(&q(6))
        .add(&cls(m, "F").scale(&q(2)))
        .add(&cls(m, "Fp"))
}

fn s_class(section: i64, fiber: i64, twist: i64) -> DivClass {
    let mut d = DivClass::from_parts(q(section), q(fiber), vec![]);
    d.pic0 = Pic0Class::scaled(Pic0Symbol::gen("e"), q(twist));
    d
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    qq(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn random_class(rng: &mut ChaCha8Rng, dim: usize) -> DivClass {
    let mut d = DivClass::from_parts(
        random_rational(rng),
        random_rational(rng),
        (0..dim).map(|_| random_rational(rng)).collect(),
    );
    d.pic0 = Pic0Class::scaled(Pic0Symbol::gen("e"), random_rational(rng))
        .add(&Pic0Class::scaled(Pic0Symbol::point("x"), random_rational(rng)));
    d
}

#[test]
fn criterion_1_golden_lattice_values() {
    let s = standard_model(0, vec![]).unwrap();
    for (a, b, want) in [("B", "B", 0), ("Bp", "Bp", 0), ("B", "Bp", 0)] {
        assert_eq!(dot(&cls(&s, a), &cls(&s, b)), q(want), "S: {a}.{b}");
    }

    let x = standard_model(2, vec![]).unwrap();
    assert_eq!(dot(&cls(&x, "B"), &cls(&x, "B")), q(-1));
    assert_eq!(dot(&cls(&x, "E1"), &cls(&x, "E1")), q(-2));
    assert_eq!(dot(&cls(&x, "B"), &cls(&x, "E1")), q(1));
    assert_eq!(dot(&cls(&x, "F"), &cls(&x, "F")), q(-2));
    let d = d_on_x(&x);
    assert_eq!(dot(&d, &d), q(4));
    for (name, want) in [("B", 0), ("E1", 0), ("E2", 1)] {
        assert_eq!(dot(&d, &cls(&x, name)), q(want), "X: D.{name}");
    }

    let xt = standard_model(5, vec![]).unwrap();
    assert_eq!(dot(&cls(&xt, "Fp"), &cls(&xt, "Fp")), q(-3));
    for name in ["B", "E1", "E3", "E4"] {
        assert_eq!(dot(&cls(&xt, name), &cls(&xt, name)), q(-2), "Xt: {name}^2");
    }
    let dt = dt_on_xt(&xt);
    assert_eq!(dot(&dt, &dt), q(25));
    for (name, want) in [
        ("B", 0),
        ("E1", 0),
        ("E3", 0),
        ("E4", 0),
        ("E5", 1),
        ("Fp", 3),
    ] {
        assert_eq!(dot(&dt, &cls(&xt, name)), q(want), "Xt: Dt.{name}");
    }
    println!("ACCEPTANCE 1 (golden lattice values): PASS");
}

#[test]
fn criterion_2_linear_equivalence_identities() {
    let rels = RelationSet::empty();

    let x = standard_model(2, vec![]).unwrap();
    let zero2 = DivClass::zero(2);
    let sum = x
        .canonical
        .add(&cls(&x, "B"))
        .add(&cls(&x, "Bp"))
        .sub(&cls(&x, "E2"));
    assert!(lin_equiv(&sum, &zero2, &rels).unwrap(), "K+B+Bp-E2 ~ 0 on X");

    // Pullback of K from the ruled surface equals K - E1 - 2E2 over strict
    // transforms.
    let pull_k = x.expr_class(
        &x.base_pullback_expr("B")
            .unwrap()
            .scale(&q(-1))
            .add(&x.base_pullback_expr("Bp").unwrap().scale(&q(-1))),
    )
    .unwrap();
    let rhs = x
        .canonical
        .sub(&cls(&x, "E1"))
        .sub(&cls(&x, "E2").scale(&q(2)));
    assert!(lin_equiv(&pull_k, &rhs, &rels).unwrap(), "pull(K) on X");

    let xt = standard_model(5, vec![]).unwrap();
    let zero5 = DivClass::zero(5);
    let sum = xt
        .canonical
        .add(&cls(&xt, "B"))
        .add(&cls(&xt, "Bp"))
        .sub(&cls(&xt, "E2"))
        .sub(&cls(&xt, "E4"))
        .sub(&cls(&xt, "E5").scale(&q(2)));
    assert!(
        lin_equiv(&sum, &zero5, &rels).unwrap(),
        "K+B+Bp-E2-E4-2E5 ~ 0 on Xt"
    );

    // Pullback of p*(e) = B - Bp + E1 + ... + E5.
    let twist5 = DivClass::pic0_pullback(e(), 5);
    let mut rhs = cls(&xt, "B").sub(&cls(&xt, "Bp"));
    for name in ["E1", "E2", "E3", "E4", "E5"] {
        rhs = rhs.add(&cls(&xt, name));
    }
    assert!(lin_equiv(&twist5, &rhs, &rels).unwrap(), "pull p*(e) on Xt");

    // The two shifted nef-certificate decompositions.
    let d = d_on_x(&x);
    let shift = d.sub(&x.canonical);
    let rhs = cls(&x, "B")
        .scale(&q(4))
        .add(&cls(&x, "E1").scale(&q(2)))
        .add(&x.total_pullback(&s_class(1, 1, -4)).unwrap());
    assert!(lin_equiv(&shift, &rhs, &rels).unwrap(), "D - K on X");

    let dt = dt_on_xt(&xt);
    let shift = dt.sub(&xt.canonical);
    let mut pull_part = s_class(2, 3, -7);
    pull_part.pic0 = pull_part.pic0.sub(&xi("x")).add(&xi("xp"));
    let rhs = cls(&xt, "B")
        .scale(&q(6))
        .add(&cls(&xt, "E1").scale(&q(3)))
        .add(&cls(&xt, "E3").scale(&q(4)))
        .add(&cls(&xt, "E4").scale(&q(2)))
        .add(&xt.total_pullback(&pull_part).unwrap());
    assert!(lin_equiv(&shift, &rhs, &rels).unwrap(), "Dt - K on Xt");
    println!("ACCEPTANCE 2 (linear equivalence identities): PASS");
}

#[test]
fn criterion_3_discrepancy_solver_and_equations() {
    let x = standard_model(2, vec![]).unwrap();
    let pi = make_contraction(&x, &["B", "E1"], "pi").unwrap();
    let d = pi.discrepancies().unwrap();
    assert_eq!(d.coefficients["B"], q(-2));
    assert_eq!(d.coefficients["E1"], q(-1));
    // Printed equation forms: a - b + 1 = 0 and -a + 2b = 0.
    let eqs = pi.orthogonality_equations().unwrap();
    assert_eq!(eqs[0].coefficients, vec![q(1), q(-1)]);
    assert_eq!(eqs[0].constant, q(1));
    assert_eq!(eqs[1].coefficients, vec![q(-1), q(2)]);
    assert_eq!(eqs[1].constant, q(0));

    let xt = standard_model(5, vec![]).unwrap();
    let pit = make_contraction(&xt, &["B", "E1", "E3", "E4"], "pit").unwrap();
    let d = pit.discrepancies().unwrap();
    assert_eq!(d.coefficients["B"], qq(-12, 5));
    assert_eq!(d.coefficients["E1"], qq(-6, 5));
    assert_eq!(d.coefficients["E3"], qq(-8, 5));
    assert_eq!(d.coefficients["E4"], qq(-4, 5));
    // The four orthogonality equations, coefficient for coefficient:
    //   0 = 2(a+1) - b - c        -> (2, -1, -1, 0), constant 2
    //   0 = -(a+1) + 2b + 1       -> (-1, 2, 0, 0), constant 0
    //   0 = -(a+1) + 2c - (d-1)   -> (-1, 0, 2, -1), constant 0
    //   0 = -c + 2(d-1) + 2       -> (0, 0, -1, 2), constant 0
    let eqs = pit.orthogonality_equations().unwrap();
    let table: [(&[i64; 4], i64); 4] = [
        (&[2, -1, -1, 0], 2),
        (&[-1, 2, 0, 0], 0),
        (&[-1, 0, 2, -1], 0),
        (&[0, 0, -1, 2], 0),
    ];
    for (eq, (coeffs, constant)) in eqs.iter().zip(table) {
        let want: Vec<Rational> = coeffs.iter().map(|&n| q(n)).collect();
        assert_eq!(eq.coefficients, want, "equation at {}", eq.curve);
        assert_eq!(eq.constant, q(constant));
    }
    println!("ACCEPTANCE 3 (discrepancy solver and equations): PASS");
}

#[test]
fn criterion_4_q_gorenstein_verdicts() {
    let no_rels = RelationSet::empty();
    let x = standard_model(2, vec![]).unwrap();
    let pi = make_contraction(&x, &["B", "E1"], "pi").unwrap();
    let v = pi.q_gorenstein_test(&no_rels).unwrap();
    assert_eq!(v.status, TriBool::False);
    assert_eq!(v.obstructions["B"], e());

    let xt = standard_model(5, vec![]).unwrap();
    let pit = make_contraction(&xt, &["B", "E1", "E3", "E4"], "pit").unwrap();
    let v = pit.q_gorenstein_test(&no_rels).unwrap();
    assert_eq!(v.status, TriBool::False);
    let want = e()
        .scale(&qq(7, 5))
        .add(&xi("x").scale(&qq(-1, 5)))
        .add(&xi("xp").scale(&qq(1, 5)));
    assert_eq!(v.obstructions["B"], want);

    let rels = RelationSet::from_relations(vec![fiber_relation()]);
    let v = pit.q_gorenstein_test(&rels).unwrap();
    assert_eq!(v.status, TriBool::True);
    assert!(v.obstructions["B"].is_zero());
    println!("ACCEPTANCE 4 (Q-Gorenstein verdicts): PASS");
}

#[test]
fn criterion_5_mmp_step_on_the_contracted_surface() {
    let rels = RelationSet::from_relations(vec![fiber_relation()]);
    let xt = standard_model(5, vec![fiber_relation()]).unwrap();
    let pit = make_contraction(&xt, &["B", "E1", "E3", "E4"], "pit").unwrap();
    assert_eq!(pit.q_gorenstein_test(&rels).unwrap().status, TriBool::True);

    let e5 = cls(&xt, "E5");
    assert_eq!(pit.target_intersect(&xt.canonical, &e5).unwrap(), qq(-1, 5));
    assert_eq!(pit.target_intersect(&e5, &e5).unwrap(), qq(-1, 5));
    assert_eq!(
        mmp_step(MmpInput::Contracted(&pit)).unwrap(),
        MmpOutcome::Contract(BTreeSet::from(["E5".to_string()]))
    );

    // The composite contraction reproduces the two-blow-up route and its
    // image is not Q-Gorenstein even under the declared relation.
    let pi_y = make_contraction(&xt, &["B", "E1", "E3", "E4", "E5"], "piY").unwrap();
    let x = standard_model(2, vec![]).unwrap();
    let pi = make_contraction(&x, &["B", "E1"], "pi").unwrap();
    for a in ["Bp", "F", "Fp", "E2"] {
        for b in ["Bp", "F", "Fp", "E2"] {
            assert_eq!(
                pi_y.target_intersect(&cls(&xt, a), &cls(&xt, b)).unwrap(),
                pi.target_intersect(&cls(&x, a), &cls(&x, b)).unwrap(),
                "composite {a}.{b}"
            );
        }
    }
    let v = pi_y.q_gorenstein_test(&rels).unwrap();
    assert_eq!(v.status, TriBool::False);
    assert_eq!(v.obstructions["B"], e());
    println!("ACCEPTANCE 5 (MMP step and composite): PASS");
}

#[test]
fn criterion_6_cover_verdicts() {
    let rels = RelationSet::from_relations(vec![fiber_relation()]);
    let x = standard_model(2, vec![fiber_relation()]).unwrap();

    // pi* K_Y ~ p*(e): the canonical pullback is numerically trivial,
    // hence nef with the empty certificate.
    let pi = make_contraction(&x, &["B", "E1"], "pi").unwrap();
    let k_pull = pi.mumford_pullback(&x.canonical).unwrap();
    assert!(lin_equiv(&k_pull, &DivClass::pic0_pullback(e(), 2), &rels).unwrap());
    let check = nef_with_certificate(&x, &k_pull, &NefCertificate::empty()).unwrap();
    assert!(check.nef && check.numerically_trivial);

    // Full certificate route for the semi-ample divisor. The pullback
    // part Bp + F - 2 p*(e) carries -3e in total coordinates.
    let d_expr = expr(&[("Bp", 3), ("F", 1)]);
    let d = x.expr_class(&d_expr).unwrap();
    let cert_d = NefCertificate {
        pullback: s_class(1, 1, -3),
        effective: vec![("B".into(), q(2)), ("E1".into(), q(1))],
    };
    let delta = vec![("B".to_string(), q(4)), ("E1".to_string(), q(2))];
    let cert_shift = NefCertificate::pullback_only(s_class(1, 1, -4));
    let report = semi_ample_certificate(&x, &d_expr, &delta, 1, &cert_d, &cert_shift).unwrap();
    assert!(report.pass());
    assert_eq!(report.zero_locus, vec!["B", "E1"]);
    assert_eq!(nklt_locus(&x, &delta).unwrap(), vec!["B", "E1"]);

    // Branch A = 2H in |2H| for the degree-two cover.
    let a_class = d.scale(&q(2));
    let branch = pi.descend_divisor(&a_class, Some(&report)).unwrap();
    assert!(branch.ample);
    let cover = cover_canonical_class(
        &pi,
        &CoverSpec {
            degree: 2,
            branch,
        },
    )
    .unwrap();
    assert_eq!(cover.branch_coefficient, qq(1, 2));
    let want = k_pull.add(&a_class.scale(&qq(1, 2)));
    assert!(lin_equiv(&cover.log_class, &want, &rels).unwrap());
    assert!(cover.nef && cover.big);

    // Finite generation: no, by the criterion rule.
    let qgor = pi.q_gorenstein_test(&rels).unwrap().status;
    assert_eq!(qgor, TriBool::False);
    let verdict = fg_verdict(FgFlags {
        q_gorenstein: qgor,
        k_nef_mumford: cover.nef,
        k_big: cover.big,
        kappa_le_1: false,
        gorenstein: false,
    });
    assert_eq!(verdict.finitely_generated, FiniteGeneration::No);
    assert_eq!(verdict.rule_applied, Some(FgRule::CriterionTheorem));

    // Fiber product with the Q-Gorenstein contraction.
    let xt = standard_model(5, vec![fiber_relation()]).unwrap();
    let pit = make_contraction(&xt, &["B", "E1", "E3", "E4"], "pit").unwrap();
    let qgor_t = pit.q_gorenstein_test(&rels).unwrap().status;
    assert_eq!(qgor_t, TriBool::True);
    let fp = fiber_product_verdicts(verdict.finitely_generated, qgor_t);
    assert_eq!(fp.finitely_generated, FiniteGeneration::No);
    assert_eq!(fp.q_gorenstein, TriBool::True);
    println!("ACCEPTANCE 6 (cover and finite-generation verdicts): PASS");
}

/// Brute-force cofactor-expansion determinant, independent of the
/// elimination-based one inside the library.
fn cofactor_det(m: &QMatrix) -> Rational {
    let n = m.rows();
    if n == 0 {
        return q(1);
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = q(0);
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let mut minor = QMatrix::zero(n - 1, n - 1);
        for r in 1..n {
            let mut cc = 0;
            for c in 0..n {
                if c == j {
                    continue;
                }
                minor.set(r - 1, cc, m.get(r, c).clone());
                cc += 1;
            }
        }
        let term = m.get(0, j) * &cofactor_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn oracle_negative_definite(m: &QMatrix) -> bool {
    for k in 1..=m.rows() {
        let d = cofactor_det(&m.leading(k));
        let signed = if k % 2 == 1 { -d } else { d };
        if !signed.is_positive() {
            return false;
        }
    }
    true
}

#[test]
fn criterion_7_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5u64 * 0x1234);

    // Adjunction on every tracked curve after every construction step
    // (validate also cross-checks incidence against the form).
    for stage in 0..=5 {
        standard_model(stage, vec![]).unwrap().validate().unwrap();
    }

    // Projection formula: 100 random class pairs per surface.
    for stage in 1..=5 {
        let parent = standard_model(stage - 1, vec![]).unwrap();
        let child = standard_model(stage, vec![]).unwrap();
        let mut e_new = DivClass::zero(stage);
        e_new.exc[stage - 1] = q(1);
        for _ in 0..100 {
            let a = random_class(&mut rng, parent.blowup_count());
            let b = random_class(&mut rng, parent.blowup_count());
            let pa = child.total_pullback(&a).unwrap();
            let pb = child.total_pullback(&b).unwrap();
            assert_eq!(dot(&pa, &pb), dot(&a, &b), "projection formula");
            assert_eq!(dot(&pa, &e_new), q(0), "pullback meets new curve");
        }
    }

    // Mumford orthogonality and linearity: 100 random classes per
    // contraction.
    let x = standard_model(2, vec![]).unwrap();
    let xt = standard_model(5, vec![]).unwrap();
    let contractions: Vec<Contraction> = vec![
        make_contraction(&x, &["B", "E1"], "pi").unwrap(),
        make_contraction(&xt, &["B", "E1", "E3", "E4"], "pit").unwrap(),
        make_contraction(&xt, &["B", "E1", "E3", "E4", "E5"], "piY").unwrap(),
    ];
    for c in &contractions {
        let dim = c.source.blowup_count();
        for _ in 0..100 {
            let a = random_class(&mut rng, dim);
            let b = random_class(&mut rng, dim);
            let pa = c.mumford_pullback(&a).unwrap();
            for name in &c.contracted {
                assert_eq!(
                    dot(&pa, &c.source.class_of(name).unwrap()),
                    q(0),
                    "orthogonality at {name}"
                );
            }
            let sum = c.mumford_pullback(&a.add(&b)).unwrap();
            assert_eq!(sum, pa.add(&c.mumford_pullback(&b).unwrap()), "linearity");
            // Bilinearity and symmetry downstairs.
            assert_eq!(
                c.target_intersect(&a, &b).unwrap(),
                c.target_intersect(&b, &a).unwrap()
            );
        }
    }

    // Obstruction representative-independence: perturb the canonical
    // representative by 20 random combinations of expressions that are
    // linearly equivalent to zero.
    let pit = &contractions[1];
    let kernel1 = expr(&[("B", 1), ("Bp", -1), ("E1", 1), ("E2", 1), ("E3", 1), ("E4", 1), ("E5", 1)])
        .add(&DivExpr::pic0_pullback(e().scale(&q(-1))));
    let kernel2 = expr(&[("F", 1), ("Fp", -1), ("E1", 1), ("E2", 2), ("E3", -1), ("E4", -2), ("E5", -3)])
        .add(&DivExpr::pic0_pullback(xi("x").sub(&xi("xp")).scale(&q(-1))));
    for k in [&kernel1, &kernel2] {
        let kc = xt.expr_class(k).unwrap();
        assert!(kc.is_numerically_trivial() && kc.pic0.is_zero(), "kernel element");
    }
    let base_expr = pit.mumford_pullback_expr(&xt.canonical_expr).unwrap();
    let base_obstruction = xt.restrict_to_curve(&base_expr, "B").unwrap().pic0;
    assert_eq!(
        base_obstruction,
        e().scale(&qq(7, 5))
            .add(&xi("x").scale(&qq(-1, 5)))
            .add(&xi("xp").scale(&qq(1, 5))),
    );
    for _ in 0..20 {
        let perturbed = base_expr
            .add(&kernel1.scale(&random_rational(&mut rng)))
            .add(&kernel2.scale(&random_rational(&mut rng)));
        assert_eq!(
            xt.expr_class(&perturbed).unwrap(),
            xt.expr_class(&base_expr).unwrap()
        );
        let o = xt.restrict_to_curve(&perturbed, "B").unwrap().pic0;
        assert_eq!(o, base_obstruction, "representative independence");
    }

    // Negative-definiteness vs the cofactor-minors oracle on random
    // symmetric matrices of size 1..=4, plus the principal-submatrix
    // property.
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = random_rational(&mut rng);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        let got = is_negative_definite(&m).unwrap();
        assert_eq!(got, oracle_negative_definite(&m));
        if got {
            let keep: Vec<usize> = (0..n).filter(|_| rng.gen_range(0..2) == 1).collect();
            if !keep.is_empty() {
                assert!(
                    is_negative_definite(&m.principal(&keep)).unwrap(),
                    "principal submatrix of a negative definite matrix"
                );
            }
        }
    }

    // DSL round-trip on all fixtures.
    for suite in scenarios::all_builtins() {
        let printed = dsl::print(&suite.script);
        let reparsed = dsl::parse(&printed).unwrap();
        assert_eq!(suite.script, reparsed, "{} round-trip", suite.name);
        assert_eq!(dsl::print(&reparsed), printed, "{} idempotence", suite.name);
    }

    // Fuzz: the parser returns diagnostics, never panics. Token soup digs
    // deeper than raw bytes, so try both.
    let vocab = [
        "base", "pic0", "points", "relation", "ruled", "blowup", "at", "point", "on", "general",
        "divisor", "contract", "cover", "cyclic", "over", "fiber", "assert", "query", "report",
        "verdict", "p", "K", "B", "E1", "xi", "pull", "disc", "(", ")", "{", "}", "[", "]", ";",
        ",", ":", "*", "+", "-", ".", "/", "==", "!=", "=", "7", "1/2", "\"s\"", "#c", "Zz",
    ];
    for _ in 0..500 {
        let len = rng.gen_range(0..40);
        let soup: Vec<&str> = (0..len)
            .map(|_| vocab[rng.gen_range(0..vocab.len())])
            .collect();
        let _ = dsl::parse(&soup.join(" "));
        let raw: Vec<u8> = (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect();
        let _ = dsl::parse_bytes(&raw);
    }
    println!("ACCEPTANCE 7 (property suites): PASS");
}

#[test]
fn criterion_8_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_surfcalc");

    // All four built-in suites verify with exit 0.
    let out = Command::new(bin).args(["verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "verify all suites");
    let text = String::from_utf8_lossy(&out.stdout);
    for name in scenarios::SUITE_NAMES {
        assert!(text.contains(name), "report for {name}");
    }

    // JSON output carries the fraction-string discrepancies.
    let out = Command::new(bin)
        .args(["verify", "section4_Xtilde", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"disc.E1\": \"-6/5\""), "{text}");

    // A corrupted golden value fails with an expected-vs-actual diff.
    let fixture = include_str!("../fixtures/section4_X.surf");
    let corrupted = fixture.replace("assert D . D == 4", "assert D . D == 5");
    assert_ne!(fixture, corrupted);
    let dir = std::env::temp_dir();
    let bad_path = dir.join("surfcalc_corrupted.surf");
    std::fs::write(&bad_path, corrupted).unwrap();
    let out = Command::new(bin).arg("run").arg(&bad_path).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "corrupted golden value");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("expected 5, got 4"), "{text}");

    // A malformed script is a usage error.
    let ugly_path = dir.join("surfcalc_malformed.surf");
    std::fs::write(&ugly_path, "ruled ;;; what").unwrap();
    let out = Command::new(bin).arg("run").arg(&ugly_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "malformed script");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("E002"), "{err}");

    // Unknown suite names are usage errors too.
    let out = Command::new(bin).args(["verify", "nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Strict mode surfaces axiom usage as an error.
    let out = Command::new(bin)
        .args(["verify", "section4_X", "--strict"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "strict mode");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nef-on-tracked-curves"), "{err}");
    println!("ACCEPTANCE 8 (CLI contract): PASS");
}
