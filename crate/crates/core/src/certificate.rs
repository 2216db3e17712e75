//! Homotopy-equivalence certificates: functors `F : C → D`, `G : D → C` with
//! zig-zags of natural transformations `G∘F ~ id_C` and `F∘G ~ id_D`.
//!
//! Any natural transformation realizes to a homotopy, so a valid certificate
//! proves `BF` is a homotopy equivalence with no homology computation.

use serde::Serialize;

use crate::category::{FinCategory, Functor, NatTransformation, NaturalityViolation};

/// Orientation of one step of a zig-zag between `functors[i]` and `functors[i+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `functors[i] ⇒ functors[i+1]`
    Forward,
    /// `functors[i+1] ⇒ functors[i]`
    Backward,
}

/// A zig-zag of natural transformations between endofunctors.
#[derive(Debug, Clone)]
pub struct Zigzag {
    pub functors: Vec<Functor>,
    pub steps: Vec<(NatTransformation, Direction)>,
}

impl Zigzag {
    /// The empty zig-zag at `f`, certifying `f = f`.
    pub fn trivial(f: Functor) -> Self {
        Zigzag { functors: vec![f], steps: Vec::new() }
    }

    fn validate(&self, c: &FinCategory, from: &Functor, to: &Functor, side: &str) -> Result<(), CertificateError> {
        let fail = |reason: String| CertificateError { side: side.to_string(), reason };
        if self.functors.len() != self.steps.len() + 1 {
            return Err(fail("zig-zag has mismatched functors and steps".into()));
        }
        if self.functors.first() != Some(from) || self.functors.last() != Some(to) {
            return Err(fail("zig-zag does not connect the required functors".into()));
        }
        for (i, (alpha, dir)) in self.steps.iter().enumerate() {
            let (a, b) = match dir {
                Direction::Forward => (&self.functors[i], &self.functors[i + 1]),
                Direction::Backward => (&self.functors[i + 1], &self.functors[i]),
            };
            a.validate(c, c).map_err(|e| fail(format!("functor {i}: {e}")))?;
            b.validate(c, c).map_err(|e| fail(format!("functor {}: {e}", i + 1)))?;
            alpha.validate(c, c, a, b).map_err(|e| {
                fail(match e {
                    NaturalityViolation::Square { morphism } => {
                        format!("step {i}: naturality square at morphism {morphism} does not commute")
                    }
                    other => format!("step {i}: {other}"),
                })
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateError {
    pub side: String,
    pub reason: String,
}

impl std::fmt::Display for CertificateError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.side, self.reason)
    }
}

/// Verifies a homotopy-equivalence certificate for `f : c → d` with inverse `g`.
pub fn htpy_certificate(
    c: &FinCategory,
    d: &FinCategory,
    f: &Functor,
    g: &Functor,
    source_side: &Zigzag,
    target_side: &Zigzag,
) -> Result<(), CertificateError> {
    f.validate(c, d).map_err(|e| CertificateError { side: "F".into(), reason: e })?;
    g.validate(d, c).map_err(|e| CertificateError { side: "G".into(), reason: e })?;
    source_side.validate(c, &g.after(f), &Functor::identity(c), "G∘F ~ id")?;
    target_side.validate(d, &f.after(g), &Functor::identity(d), "F∘G ~ id")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Preorder;
    use crate::elmendorf_cat::{c_cat, epsilon, eta_l, unit_zigzag};
    use crate::elmendorf_pos::posetal_quotient;
    use crate::group::FiniteGroup;
    use crate::orbit::OrbitCategory;
    use crate::presheaf::{family_presheaf, GPreorder, SubgroupFamily};
    use std::sync::Arc;

    #[test]
    fn quotient_certificate() {
        let g = Arc::new(FiniteGroup::from_key("C1").unwrap());
        let p = Preorder::from_fn(5, |a, b| a / 2 <= b / 2).unwrap();
        let q = posetal_quotient(&GPreorder::new(g, p.clone(), vec![(0..5).collect()]).unwrap());
        let (pi, s, up, down) = q.certificate_data();
        let (pc, qc) = (p.to_category(), q.quotient.order().to_category());
        let sp = s.after(&pi);
        let id = Functor::identity(&pc);
        // s∘π ⇐ id ⇒ ... and s∘π ⇒ id: either step alone suffices
        let zz = Zigzag { functors: vec![sp.clone(), id.clone()], steps: vec![(down.clone(), Direction::Forward)] };
        htpy_certificate(&pc, &qc, &pi, &s, &zz, &Zigzag::trivial(Functor::identity(&qc))).unwrap();
        let zz = Zigzag { functors: vec![sp, id], steps: vec![(up, Direction::Backward)] };
        htpy_certificate(&pc, &qc, &pi, &s, &zz, &Zigzag::trivial(Functor::identity(&qc))).unwrap();
        // a broken component is rejected
        let mut bad = down;
        bad.components[1] = pc.id(1);
        let zz = Zigzag { functors: vec![s.after(&pi), Functor::identity(&pc)], steps: vec![(bad, Direction::Forward)] };
        assert!(htpy_certificate(&pc, &qc, &pi, &s, &zz, &Zigzag::trivial(Functor::identity(&qc))).is_err());
    }

    #[test]
    fn epsilon_eta_certificate() {
        let o = Arc::new(OrbitCategory::new(Arc::new(FiniteGroup::from_key("S3").unwrap())).unwrap());
        for fam in SubgroupFamily::enumerate(&o) {
            let c = c_cat(&family_presheaf(&o, &fam).unwrap()).unwrap();
            for l in 0..o.subgroups().len() {
                let e = epsilon(&c, l);
                let eta = eta_l(&c, l, &e.fixed);
                let unit = unit_zigzag(&c, l, &e, &eta);
                let fixed = &e.fixed.category;
                let zz = Zigzag {
                    functors: vec![eta.after(&e.functor), Functor::identity(fixed)],
                    steps: vec![(unit, Direction::Backward)],
                };
                let value = c.presheaf().value(l);
                htpy_certificate(fixed, value, &e.functor, &eta, &zz, &Zigzag::trivial(Functor::identity(value)))
                    .unwrap();
            }
        }
    }

    #[test]
    fn broken_square_names_the_morphism() {
        // id ⇒ const_max on a 2-chain, with one component replaced
        let c = Preorder::chain(2).to_category();
        let top = Functor { obj: vec![1, 1], mor: c.morphisms().map(|_| c.id(1)).collect() };
        let alpha = NatTransformation { components: vec![c.hom(0, 1)[0], c.id(1)] };
        assert!(alpha.validate(&c, &c, &Functor::identity(&c), &top).is_ok());
        let zz = Zigzag { functors: vec![Functor::identity(&c), top.clone()], steps: vec![(alpha, Direction::Forward)] };
        // not a certificate for anything (wrong endpoints)
        let err = htpy_certificate(&c, &c, &top, &top, &zz, &zz).unwrap_err();
        assert!(err.reason.contains("connect"));
    }
}
