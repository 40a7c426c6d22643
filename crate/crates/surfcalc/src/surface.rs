//! The ruled surface `S = P_C(O ⊕ O(e))` over an elliptic curve and its
//! iterated blow-ups.
//!
//! A model tracks prime curves (strict transforms), their incidence points,
//! the canonical class, and for the two sections an element of `Pic` of the
//! base curve recording the restriction of the curve's own line bundle.
//! User-facing curve names always denote strict transforms; the coordinate
//! basis uses total transforms, so strict classes pick up `-E` corrections
//! as centers land on them.
//!
//! Points on the base curve are opaque symbols: two points are equal iff
//! identically named, and coincidences must be declared, never inferred.
//! Only transverse intersections at distinct tracked points are supported;
//! that covers every construction the engine is used for.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{EngineError, Result};
use crate::exact::Rational;
use crate::picard::{DivClass, Pic0Class, Pic0Symbol, PicCurveClass, RelationSet};

/// Names of the four curves every ruled-surface model starts with.
pub const SECTION: &str = "B";
pub const SECTION2: &str = "Bp";
pub const FIBER: &str = "F";
pub const FIBER2: &str = "Fp";

/// Identity of a tracked point on the surface.
///
/// A point on a section identified with the base curve is named by the base
/// point below it together with the section it lies on (the same base point
/// sits on every section). All other points are anonymous.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointId {
    OnSection { point: String, section: String },
    Anon(u32),
}

impl PointId {
    /// The named base point, when there is one.
    pub fn base_point(&self) -> Option<&str> {
        match self {
            PointId::OnSection { point, .. } => Some(point),
            PointId::Anon(_) => None,
        }
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointId::OnSection { point, section } => write!(f, "{point}@{section}"),
            PointId::Anon(n) => write!(f, "<anon:{n}>"),
        }
    }
}

/// One transverse intersection point of two tracked curves.
#[derive(Clone, Debug)]
pub struct Meeting {
    pub point: PointId,
    pub a: String,
    pub b: String,
}

impl Meeting {
    fn involves(&self, curve: &str) -> bool {
        self.a == curve || self.b == curve
    }

    fn other(&self, curve: &str) -> &str {
        if self.a == curve {
            &self.b
        } else {
            &self.a
        }
    }
}

/// A tracked prime curve: rational (genus 0) or a section isomorphic to the
/// base elliptic curve (genus 1).
#[derive(Clone, Debug)]
pub struct CurveRecord {
    pub name: String,
    pub genus: u8,
    /// Strict-transform class in the total basis.
    pub cls: DivClass,
    /// For genus-one sections: the class of `O(C)|_C` in `Pic` of the base
    /// curve. `None` for rational curves, or after the bookkeeping has been
    /// lost to a blow-up at an anonymous point.
    pub normal_pic: Option<PicCurveClass>,
}

/// A formal Q-combination of tracked curve names plus a `Pic^0` pullback.
/// Restriction to a section needs this shape (a bare coordinate vector does
/// not know which prime curves carry it).
#[derive(Clone, PartialEq, Default, Debug)]
pub struct DivExpr {
    pub curves: BTreeMap<String, Rational>,
    pub pic0: Pic0Class,
}

impl DivExpr {
    pub fn zero() -> Self {
        DivExpr::default()
    }

    pub fn curve(name: &str) -> Self {
        DivExpr::scaled_curve(name, Rational::one())
    }

    pub fn scaled_curve(name: &str, c: Rational) -> Self {
        let mut curves = BTreeMap::new();
        if !c.is_zero() {
            curves.insert(name.to_string(), c);
        }
        DivExpr {
            curves,
            pic0: Pic0Class::zero(),
        }
    }

    pub fn pic0_pullback(c: Pic0Class) -> Self {
        DivExpr {
            curves: BTreeMap::new(),
            pic0: c,
        }
    }

    pub fn add(&self, other: &DivExpr) -> DivExpr {
        let mut out = self.clone();
        for (name, c) in &other.curves {
            let entry = out
                .curves
                .entry(name.clone())
                .or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                out.curves.remove(name);
            }
        }
        out.pic0 = out.pic0.add(&other.pic0);
        out
    }

    pub fn sub(&self, other: &DivExpr) -> DivExpr {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> DivExpr {
        if c.is_zero() {
            return DivExpr::zero();
        }
        DivExpr {
            curves: self
                .curves
                .iter()
                .map(|(n, v)| (n.clone(), v * c))
                .collect(),
            pic0: self.pic0.scale(c),
        }
    }

    pub fn coeff(&self, name: &str) -> Rational {
        self.curves.get(name).cloned().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for DivExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.curves.is_empty() && self.pic0.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (name, c) in &self.curves {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == Rational::one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        if !self.pic0.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "p*({})", self.pic0)?;
        }
        Ok(())
    }
}

/// How to pick a blow-up center.
#[derive(Clone, PartialEq, Debug)]
pub enum Center {
    /// The unique tracked intersection point of two named curves.
    Intersection(String, String),
    /// A declared named point on one curve. For a genus-one section the
    /// point names a base-curve point and gets a `Pic^0` symbol.
    PointOn { point: String, curve: String },
    /// A general point lying on no tracked curve.
    General,
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Intersection(a, b) => write!(f, "{a} * {b}"),
            Center::PointOn { point, curve } => write!(f, "point {point} on {curve}"),
            Center::General => write!(f, "general"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlowupRecord {
    pub exceptional: String,
    pub center: String,
}

/// An immutable surface model; `blow_up` returns a new model.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    pub base_symbols: Vec<Pic0Symbol>,
    pub base_points: Vec<String>,
    pub relations: RelationSet,
    curves: Vec<CurveRecord>,
    meetings: Vec<Meeting>,
    pub canonical: DivClass,
    /// The canonical class written over tracked prime curves; restriction
    /// to a section needs this expression form.
    pub canonical_expr: DivExpr,
    /// For each curve of the original ruled surface, the expression of its
    /// total pullback over the current strict transforms.
    pullback_exprs: BTreeMap<String, DivExpr>,
    next_anon: u32,
    pub history: Vec<BlowupRecord>,
}

impl SurfaceModel {
    /// Builds `S = P_C(O ⊕ O(e))` with its two disjoint sections `B`, `Bp`
    /// and the two fibers `F`, `Fp` over the named base points. The first
    /// generator name is the twisting class `e`; `Bp ~ B - p*(e)` and
    /// `K_S ~ -B - Bp`.
    pub fn new_ruled_surface(
        pic0_generators: &[&str],
        fiber_points: (&str, &str),
        relations: Vec<Pic0Class>,
    ) -> Result<SurfaceModel> {
        if pic0_generators.is_empty() {
            return Err(EngineError::Usage(
                "at least one Pic^0 generator (the twisting class) is required".into(),
            ));
        }
        let (x, xp) = fiber_points;
        if x == xp {
            return Err(EngineError::DuplicateName(x.to_string()));
        }
        let mut names: Vec<&str> = pic0_generators.to_vec();
        names.push(x);
        names.push(xp);
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(EngineError::DuplicateName(n.to_string()));
            }
        }

        let twist = Pic0Class::symbol(Pic0Symbol::gen(pic0_generators[0]));
        let xi_x = Pic0Class::symbol(Pic0Symbol::point(x));
        let xi_xp = Pic0Class::symbol(Pic0Symbol::point(xp));

        let b = CurveRecord {
            name: SECTION.into(),
            genus: 1,
            cls: DivClass::from_parts(Rational::one(), Rational::zero(), vec![]),
            normal_pic: Some(PicCurveClass::new(Rational::zero(), twist.clone())),
        };
        let bp = CurveRecord {
            name: SECTION2.into(),
            genus: 1,
            cls: DivClass {
                pic0: twist.scale(&-Rational::one()),
                ..DivClass::from_parts(Rational::one(), Rational::zero(), vec![])
            },
            normal_pic: Some(PicCurveClass::new(
                Rational::zero(),
                twist.scale(&-Rational::one()),
            )),
        };
        let f = CurveRecord {
            name: FIBER.into(),
            genus: 0,
            cls: DivClass::from_parts(Rational::zero(), Rational::one(), vec![]),
            normal_pic: None,
        };
        let fp = CurveRecord {
            name: FIBER2.into(),
            genus: 0,
            cls: DivClass {
                pic0: xi_x.sub(&xi_xp).scale(&-Rational::one()),
                ..DivClass::from_parts(Rational::zero(), Rational::one(), vec![])
            },
            normal_pic: None,
        };

        let canonical = DivClass {
            pic0: twist.clone(),
            ..DivClass::from_parts(Rational::from_int(-2), Rational::zero(), vec![])
        };
        let canonical_expr = DivExpr::scaled_curve(SECTION, Rational::from_int(-1))
            .add(&DivExpr::scaled_curve(SECTION2, Rational::from_int(-1)));

        let mut model = SurfaceModel {
            base_symbols: names
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    if i < pic0_generators.len() {
                        Pic0Symbol::gen(n)
                    } else {
                        Pic0Symbol::point(n)
                    }
                })
                .collect(),
            base_points: vec![x.to_string(), xp.to_string()],
            relations: RelationSet::from_relations(relations),
            curves: vec![b, bp, f, fp],
            meetings: Vec::new(),
            canonical,
            canonical_expr,
            pullback_exprs: [SECTION, SECTION2, FIBER, FIBER2]
                .iter()
                .map(|n| (n.to_string(), DivExpr::curve(n)))
                .collect(),
            next_anon: 0,
            history: Vec::new(),
        };

        // B meets each fiber at the named base point under B ~ C; the other
        // section meets the fibers at undeclared points.
        model.meetings.push(Meeting {
            point: PointId::OnSection {
                point: x.into(),
                section: SECTION.into(),
            },
            a: SECTION.into(),
            b: FIBER.into(),
        });
        model.meetings.push(Meeting {
            point: PointId::OnSection {
                point: xp.into(),
                section: SECTION.into(),
            },
            a: SECTION.into(),
            b: FIBER2.into(),
        });
        let p1 = model.fresh_anon();
        model.meetings.push(Meeting {
            point: p1,
            a: SECTION2.into(),
            b: FIBER.into(),
        });
        let p2 = model.fresh_anon();
        model.meetings.push(Meeting {
            point: p2,
            a: SECTION2.into(),
            b: FIBER2.into(),
        });
        Ok(model)
    }

    fn fresh_anon(&mut self) -> PointId {
        let id = PointId::Anon(self.next_anon);
        self.next_anon += 1;
        id
    }

    pub fn blowup_count(&self) -> usize {
        self.history.len()
    }

    pub fn curves(&self) -> impl Iterator<Item = &CurveRecord> {
        self.curves.iter()
    }

    pub fn curve_names(&self) -> Vec<String> {
        self.curves.iter().map(|c| c.name.clone()).collect()
    }

    pub fn curve(&self, name: &str) -> Result<&CurveRecord> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| EngineError::UnknownCurve(name.to_string()))
    }

    pub fn class_of(&self, name: &str) -> Result<DivClass> {
        Ok(self.curve(name)?.cls.clone())
    }

    pub fn has_curve(&self, name: &str) -> bool {
        self.curves.iter().any(|c| c.name == name)
    }

    /// All tracked intersection points between two curves.
    pub fn meetings_between(&self, a: &str, b: &str) -> Vec<&PointId> {
        self.meetings
            .iter()
            .filter(|m| (m.a == a && m.b == b) || (m.a == b && m.b == a))
            .map(|m| &m.point)
            .collect()
    }

    /// The incidence view of one curve: other curve name -> points.
    pub fn incidence(&self, name: &str) -> BTreeMap<String, Vec<PointId>> {
        let mut out: BTreeMap<String, Vec<PointId>> = BTreeMap::new();
        for m in self.meetings.iter().filter(|m| m.involves(name)) {
            out.entry(m.other(name).to_string())
                .or_default()
                .push(m.point.clone());
        }
        out
    }

    /// The expression of the total pullback of a curve of the original
    /// ruled surface over the current strict transforms.
    pub fn base_pullback_expr(&self, base_curve: &str) -> Result<&DivExpr> {
        self.pullback_exprs
            .get(base_curve)
            .ok_or_else(|| EngineError::UnknownCurve(base_curve.to_string()))
    }

    /// Evaluates a curve expression to its class on this model.
    pub fn expr_class(&self, expr: &DivExpr) -> Result<DivClass> {
        let mut acc = DivClass::pic0_pullback(expr.pic0.clone(), self.blowup_count());
        for (name, c) in &expr.curves {
            acc = acc.add(&self.curve(name)?.cls.scale(c));
        }
        Ok(acc)
    }

    /// Total pullback of a class living on an ancestor model: in the
    /// total-transform basis this is coordinate extension by zeros, and it
    /// preserves all intersection numbers.
    pub fn total_pullback(&self, d: &DivClass) -> Result<DivClass> {
        d.extended(self.blowup_count())
    }

    /// Blows up the given center, naming the new exceptional curve.
    pub fn blow_up(&self, center: &Center, new_name: &str) -> Result<SurfaceModel> {
        if self.has_curve(new_name) {
            return Err(EngineError::DuplicateName(new_name.to_string()));
        }
        // Resolve the center to a point and the curves through it.
        let (point, through): (PointId, Vec<String>) = match center {
            Center::Intersection(a, b) => {
                if a == b {
                    return Err(EngineError::UnsupportedConfiguration(format!(
                        "center `{a} * {a}` is not a transverse intersection"
                    )));
                }
                self.curve(a)?;
                self.curve(b)?;
                let pts = self.meetings_between(a, b);
                match pts.len() {
                    0 => {
                        return Err(EngineError::UnsupportedConfiguration(format!(
                            "curves `{a}` and `{b}` do not meet"
                        )))
                    }
                    1 => (pts[0].clone(), vec![a.clone(), b.clone()]),
                    n => {
                        return Err(EngineError::UnsupportedConfiguration(format!(
                            "curves `{a}` and `{b}` meet at {n} points; name the point instead"
                        )))
                    }
                }
            }
            Center::PointOn { point, curve } => {
                let rec = self.curve(curve)?;
                // Only sections identified with the base curve can carry
                // named points; the name becomes a Pic^0 symbol.
                if rec.genus != 1 {
                    return Err(EngineError::UnsupportedConfiguration(format!(
                        "named points live on genus-one sections; `{curve}` is rational"
                    )));
                }
                let id = PointId::OnSection {
                    point: point.clone(),
                    section: curve.clone(),
                };
                // The declared point must be fresh: coincidences are never
                // inferred, so a reused name would be a triple point.
                let clashing = self.meetings.iter().any(|m| m.point == id);
                if clashing {
                    return Err(EngineError::UnsupportedConfiguration(format!(
                        "point `{point}` on `{curve}` already lies on another tracked curve"
                    )));
                }
                (id, vec![curve.clone()])
            }
            Center::General => (PointId::Anon(u32::MAX), vec![]),
        };

        // A center with three or more tracked curves through it would be a
        // non-transverse configuration.
        if let Center::Intersection(_, _) = center {
            let residents: Vec<&Meeting> = self
                .meetings
                .iter()
                .filter(|m| m.point == point)
                .collect();
            let mut names: Vec<&str> = Vec::new();
            for m in &residents {
                for n in [m.a.as_str(), m.b.as_str()] {
                    if !names.contains(&n) {
                        names.push(n);
                    }
                }
            }
            if names.len() > 2 {
                return Err(EngineError::UnsupportedConfiguration(format!(
                    "{} tracked curves pass through {point}",
                    names.len()
                )));
            }
        }

        let n = self.blowup_count();
        let mut out = self.clone();
        out.history.push(BlowupRecord {
            exceptional: new_name.to_string(),
            center: center.to_string(),
        });
        if let Center::PointOn { point, .. } = center {
            if !out.base_points.contains(point) {
                out.base_points.push(point.clone());
                out.base_symbols.push(Pic0Symbol::point(point));
            }
        }

        // Extend every class by the new exceptional coordinate.
        for c in &mut out.curves {
            c.cls = c.cls.extended(n + 1).expect("extension grows dimension");
        }
        out.canonical = out.canonical.extended(n + 1).unwrap();

        let mut e_new = DivClass::zero(n + 1);
        e_new.exc[n] = Rational::one();

        // Strict transforms through the center drop by the new exceptional;
        // sections lose the blown-up point from their normal class.
        for name in &through {
            let idx = out.curves.iter().position(|c| &c.name == name).unwrap();
            let rec = &mut out.curves[idx];
            rec.cls = rec.cls.sub(&e_new);
            if rec.genus == 1 {
                match (&mut rec.normal_pic, point.base_point()) {
                    (Some(np), Some(base)) => {
                        np.degree = &np.degree - &Rational::one();
                        np.pic0 = np.pic0.sub(&Pic0Class::symbol(Pic0Symbol::point(base)));
                    }
                    (np @ Some(_), None) => {
                        // Blown up at an undeclared point: the Pic-level
                        // bookkeeping is lost, degrees remain available
                        // through intersection numbers.
                        *np = None;
                    }
                    (None, _) => {}
                }
            }
        }

        // K gains the exceptional once per blow-up; in expression form the
        // coefficient also absorbs the strict-transform corrections of the
        // curves through the center.
        out.canonical = out.canonical.add(&e_new);
        let k_drop: Rational = through
            .iter()
            .map(|name| out.canonical_expr.coeff(name))
            .fold(Rational::zero(), |acc, c| acc + c);
        out.canonical_expr = out
            .canonical_expr
            .add(&DivExpr::scaled_curve(new_name, k_drop + Rational::one()));
        for expr in out.pullback_exprs.values_mut() {
            let drop: Rational = through
                .iter()
                .map(|name| expr.coeff(name))
                .fold(Rational::zero(), |acc, c| acc + c);
            if !drop.is_zero() {
                *expr = expr.add(&DivExpr::scaled_curve(new_name, drop));
            }
        }

        // Update incidence: the center's curves are separated and each now
        // meets the exceptional at one point. A section keeps its named
        // base point; other meeting points are anonymous.
        out.meetings.retain(|m| m.point != point);
        for name in &through {
            let rec = out.curves.iter().find(|c| &c.name == name).unwrap();
            let pid = match (&point, rec.genus) {
                (PointId::OnSection { point, section }, 1) if section == name => {
                    PointId::OnSection {
                        point: point.clone(),
                        section: section.clone(),
                    }
                }
                _ => out.fresh_anon(),
            };
            out.meetings.push(Meeting {
                point: pid,
                a: name.clone(),
                b: new_name.to_string(),
            });
        }

        out.curves.push(CurveRecord {
            name: new_name.to_string(),
            genus: 0,
            cls: e_new,
            normal_pic: None,
        });

        Ok(out)
    }

    /// Restriction of a divisor expression to a genus-one section, as an
    /// element of `Pic` of the base curve.
    ///
    /// The degree is the intersection number. The degree-zero part collects
    /// the section's own normal class, the named incidence points of the
    /// other curves in the expression, and any `p*` pullback verbatim. An
    /// anonymous incidence point with nonzero coefficient makes the
    /// degree-zero part unknowable; the error still reports the degree.
    pub fn restrict_to_curve(&self, expr: &DivExpr, target: &str) -> Result<PicCurveClass> {
        let rec = self.curve(target)?;
        if rec.genus != 1 {
            return Err(EngineError::Usage(format!(
                "restriction with Pic^0 data needs a genus-one section; `{target}` is rational"
            )));
        }
        let degree = self.expr_class(expr)?.intersect(&rec.cls)?;
        let mut pic0 = expr.pic0.clone();
        for (name, c) in &expr.curves {
            if c.is_zero() {
                continue;
            }
            if name == target {
                match &rec.normal_pic {
                    Some(np) => pic0 = pic0.add(&np.pic0.scale(c)),
                    None => {
                        return Err(EngineError::ObstructionNotComputable {
                            target: target.to_string(),
                            degree,
                        })
                    }
                }
                continue;
            }
            for pt in self.meetings_between(name, target) {
                match pt.base_point() {
                    Some(base) => {
                        pic0 = pic0.add(&Pic0Class::scaled(Pic0Symbol::point(base), c.clone()));
                    }
                    None => {
                        return Err(EngineError::ObstructionNotComputable {
                            target: target.to_string(),
                            degree,
                        })
                    }
                }
            }
        }
        Ok(PicCurveClass::new(degree, pic0))
    }

    /// Structural consistency checks used by the test suites: adjunction
    /// for every tracked curve, incidence counts matching intersection
    /// numbers, and the canonical expression matching the canonical class.
    pub fn validate(&self) -> Result<()> {
        let n = self.blowup_count();
        for c in &self.curves {
            if c.cls.dim() != n {
                return Err(EngineError::Dimension {
                    expected: n,
                    got: c.cls.dim(),
                });
            }
            let self_int = c.cls.intersect(&c.cls)?;
            let k_c = self.canonical.intersect(&c.cls)?;
            let expected = Rational::from_int(2 * i64::from(c.genus) - 2);
            if &self_int + &k_c != expected {
                return Err(EngineError::Usage(format!(
                    "adjunction fails for `{}`: C^2 + K.C = {} != {}",
                    c.name,
                    &self_int + &k_c,
                    expected
                )));
            }
            if let Some(np) = &c.normal_pic {
                if np.degree != self_int {
                    return Err(EngineError::Usage(format!(
                        "normal degree of `{}` is {} but C^2 = {}",
                        c.name, np.degree, self_int
                    )));
                }
            }
        }
        // Transverse incidence bookkeeping: the number of tracked meetings
        // of two distinct curves must equal their intersection number.
        for (i, a) in self.curves.iter().enumerate() {
            for b in self.curves.iter().skip(i + 1) {
                let count = Rational::from_int(self.meetings_between(&a.name, &b.name).len() as i64);
                let form = a.cls.intersect(&b.cls)?;
                if count != form {
                    return Err(EngineError::Usage(format!(
                        "incidence of `{}` and `{}` lists {} points but the classes meet in {}",
                        a.name, b.name, count, form
                    )));
                }
            }
        }
        let from_expr = self.expr_class(&self.canonical_expr)?;
        if !crate::picard::lin_equiv(&from_expr, &self.canonical, &RelationSet::empty())? {
            return Err(EngineError::Usage(format!(
                "canonical expression {} evaluates to {} != {}",
                self.canonical_expr, from_expr, self.canonical
            )));
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn push_curve_for_tests(&mut self, rec: CurveRecord) {
        self.curves.push(rec);
    }
}

/// Convenience builder: the models of the running construction.
/// `stages` is the number of blow-ups to perform, 0..=5:
/// 1: at B∩F, 2: at E1∩F, 3: at B∩Fp, 4: at E3∩Fp, 5: at E4∩Fp.
pub fn standard_model(stages: usize, relations: Vec<Pic0Class>) -> Result<SurfaceModel> {
    let mut m = SurfaceModel::new_ruled_surface(&["e"], ("x", "xp"), relations)?;
    let steps: [(&str, Center); 5] = [
        ("E1", Center::Intersection(SECTION.into(), FIBER.into())),
        ("E2", Center::Intersection("E1".into(), FIBER.into())),
        ("E3", Center::Intersection(SECTION.into(), FIBER2.into())),
        ("E4", Center::Intersection("E3".into(), FIBER2.into())),
        ("E5", Center::Intersection("E4".into(), FIBER2.into())),
    ];
    for (name, center) in steps.iter().take(stages) {
        m = m.blow_up(center, name)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::lin_equiv;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn ruled_surface_lattice() {
        let s = standard_model(0, vec![]).unwrap();
        s.validate().unwrap();
        let b = s.class_of("B").unwrap();
        let bp = s.class_of("Bp").unwrap();
        let f = s.class_of("F").unwrap();
        assert_eq!(b.intersect(&b).unwrap(), q(0));
        assert_eq!(bp.intersect(&bp).unwrap(), q(0));
        assert_eq!(b.intersect(&bp).unwrap(), q(0));
        assert_eq!(s.canonical.intersect(&f).unwrap(), q(-2));
        // K_S + B + Bp ~ 0
        let sum = s.canonical.add(&b).add(&bp);
        assert!(lin_equiv(&sum, &DivClass::zero(0), &s.relations).unwrap());
    }

    #[test]
    fn two_blowups_match_strict_transform_formulas() {
        let x = standard_model(2, vec![]).unwrap();
        x.validate().unwrap();
        let b = x.class_of("B").unwrap();
        let e1 = x.class_of("E1").unwrap();
        let e2 = x.class_of("E2").unwrap();
        let f = x.class_of("F").unwrap();
        assert_eq!(b.intersect(&b).unwrap(), q(-1));
        assert_eq!(e1.intersect(&e1).unwrap(), q(-2));
        assert_eq!(b.intersect(&e1).unwrap(), q(1));
        assert_eq!(f.intersect(&f).unwrap(), q(-2));
        assert_eq!(e2.intersect(&e2).unwrap(), q(-1));
        // K_X + B + Bp - E2 ~ 0
        let bp = x.class_of("Bp").unwrap();
        let sum = x.canonical.add(&b).add(&bp).sub(&e2);
        assert!(lin_equiv(&sum, &DivClass::zero(2), &x.relations).unwrap());
        // Pullback of K_S in expression form equals K_X - E1 - 2E2 over
        // strict transforms.
        let pull_k = x
            .base_pullback_expr("B")
            .unwrap()
            .scale(&q(-1))
            .add(&x.base_pullback_expr("Bp").unwrap().scale(&q(-1)));
        let rhs = x
            .canonical_expr
            .add(&DivExpr::scaled_curve("E1", q(-1)))
            .add(&DivExpr::scaled_curve("E2", q(-2)));
        assert_eq!(
            x.expr_class(&pull_k).unwrap(),
            x.expr_class(&rhs).unwrap()
        );
    }

    #[test]
    fn five_blowups_match_printed_pullbacks() {
        let xt = standard_model(5, vec![]).unwrap();
        xt.validate().unwrap();
        let fp = xt.class_of("Fp").unwrap();
        assert_eq!(fp.intersect(&fp).unwrap(), q(-3));
        for name in ["B", "E1", "E3", "E4"] {
            let c = xt.class_of(name).unwrap();
            assert_eq!(c.intersect(&c).unwrap(), q(-2), "{name}^2");
        }
        // Total pullbacks over strict transforms.
        let pull_b = xt.base_pullback_expr("B").unwrap();
        let mut want = DivExpr::curve("B");
        for e in ["E1", "E2", "E3", "E4", "E5"] {
            want = want.add(&DivExpr::curve(e));
        }
        assert_eq!(pull_b, &want);
        let pull_f = xt.base_pullback_expr("F").unwrap();
        let want_f = DivExpr::curve("F")
            .add(&DivExpr::curve("E1"))
            .add(&DivExpr::scaled_curve("E2", q(2)));
        assert_eq!(pull_f, &want_f);
        let pull_fp = xt.base_pullback_expr("Fp").unwrap();
        let want_fp = DivExpr::curve("Fp")
            .add(&DivExpr::curve("E3"))
            .add(&DivExpr::scaled_curve("E4", q(2)))
            .add(&DivExpr::scaled_curve("E5", q(3)));
        assert_eq!(pull_fp, &want_fp);
        // K expression: -B - Bp + E2 + E4 + 2E5.
        let want_k = DivExpr::scaled_curve("B", q(-1))
            .add(&DivExpr::scaled_curve("Bp", q(-1)))
            .add(&DivExpr::curve("E2"))
            .add(&DivExpr::curve("E4"))
            .add(&DivExpr::scaled_curve("E5", q(2)));
        assert_eq!(xt.canonical_expr, want_k);
        // Class table in the total basis.
        assert_eq!(xt.class_of("B").unwrap().exc, ints(&[-1, 0, -1, 0, 0]));
        assert_eq!(xt.class_of("F").unwrap().exc, ints(&[-1, -1, 0, 0, 0]));
        assert_eq!(xt.class_of("Fp").unwrap().exc, ints(&[0, 0, -1, -1, -1]));
        assert_eq!(xt.canonical.exc, ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn blow_up_separates_the_center_curves_only() {
        let s = standard_model(0, vec![]).unwrap();
        let x1 = s
            .blow_up(&Center::Intersection("B".into(), "F".into()), "E1")
            .unwrap();
        let b = x1.class_of("B").unwrap();
        let f = x1.class_of("F").unwrap();
        let bp = x1.class_of("Bp").unwrap();
        assert_eq!(b.intersect(&f).unwrap(), q(0));
        assert_eq!(bp.intersect(&f).unwrap(), q(1));
        assert!(x1.meetings_between("B", "F").is_empty());
        assert_eq!(x1.meetings_between("B", "E1").len(), 1);
        assert_eq!(x1.meetings_between("F", "E1").len(), 1);
    }

    #[test]
    fn total_pullback_of_zero_is_zero() {
        let s = standard_model(0, vec![]).unwrap();
        let xt = standard_model(5, vec![]).unwrap();
        let pulled = xt.total_pullback(&DivClass::zero(s.blowup_count())).unwrap();
        assert_eq!(pulled, DivClass::zero(5));
    }

    #[test]
    fn incidence_view_is_symmetric() {
        let xt = standard_model(5, vec![]).unwrap();
        for a in xt.curve_names() {
            let view_a = xt.incidence(&a);
            for (b, points) in &view_a {
                let view_b = xt.incidence(b);
                assert_eq!(view_b.get(&a), Some(points), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn general_point_blow_up_is_inert() {
        let s = standard_model(0, vec![]).unwrap();
        let x = s.blow_up(&Center::General, "E9").unwrap();
        x.validate().unwrap();
        let e = x.class_of("E9").unwrap();
        assert_eq!(e.intersect(&e).unwrap(), q(-1));
        assert_eq!(x.canonical.intersect(&e).unwrap(), q(-1));
        for a in ["B", "Bp", "F", "Fp"] {
            for b in ["B", "Bp", "F", "Fp"] {
                let va = x.class_of(a).unwrap();
                let vb = x.class_of(b).unwrap();
                let sa = s.class_of(a).unwrap();
                let sb = s.class_of(b).unwrap();
                assert_eq!(
                    va.intersect(&vb).unwrap(),
                    sa.intersect(&sb).unwrap(),
                    "{a}.{b}"
                );
            }
        }
    }

    #[test]
    fn disjoint_or_ambiguous_centers_are_rejected() {
        let s = standard_model(0, vec![]).unwrap();
        assert!(matches!(
            s.blow_up(&Center::Intersection("B".into(), "Bp".into()), "E1"),
            Err(EngineError::UnsupportedConfiguration(_))
        ));
        assert!(matches!(
            s.blow_up(&Center::Intersection("F".into(), "Fp".into()), "E1"),
            Err(EngineError::UnsupportedConfiguration(_))
        ));
        let x1 = standard_model(1, vec![]).unwrap();
        assert!(matches!(
            x1.blow_up(&Center::Intersection("B".into(), "F".into()), "E2"),
            Err(EngineError::UnsupportedConfiguration(_))
        ));
    }

    #[test]
    fn restriction_bookkeeping_on_the_section() {
        // O(B)|_B starts as the twisting class and loses the two blown-up
        // base points.
        let xt = standard_model(5, vec![]).unwrap();
        let r = xt.restrict_to_curve(&DivExpr::curve("B"), "B").unwrap();
        assert_eq!(r.degree, q(-2));
        let want = Pic0Class::symbol(Pic0Symbol::gen("e"))
            .sub(&Pic0Class::symbol(Pic0Symbol::point("x")))
            .sub(&Pic0Class::symbol(Pic0Symbol::point("xp")));
        assert_eq!(r.pic0, want);
        // The disjoint section restricts to zero.
        let r2 = xt.restrict_to_curve(&DivExpr::curve("Bp"), "B").unwrap();
        assert_eq!(r2.degree, q(0));
        assert!(r2.pic0.is_zero());
    }

    #[test]
    fn restriction_through_anonymous_points_reports_degree() {
        let s = standard_model(0, vec![]).unwrap();
        // F meets Bp at an undeclared point; the degree is still known.
        match s.restrict_to_curve(&DivExpr::curve("F"), "Bp") {
            Err(EngineError::ObstructionNotComputable { degree, .. }) => {
                assert_eq!(degree, q(1));
            }
            other => panic!("expected obstruction error, got {other:?}"),
        }
    }

    #[test]
    fn named_point_blow_up_on_a_section() {
        let s = standard_model(0, vec![]).unwrap();
        let x = s
            .blow_up(
                &Center::PointOn {
                    point: "q".into(),
                    curve: "B".into(),
                },
                "E1",
            )
            .unwrap();
        x.validate().unwrap();
        let r = x.restrict_to_curve(&DivExpr::curve("B"), "B").unwrap();
        assert_eq!(r.degree, q(-1));
        let want = Pic0Class::symbol(Pic0Symbol::gen("e"))
            .sub(&Pic0Class::symbol(Pic0Symbol::point("q")));
        assert_eq!(r.pic0, want);
    }
}
