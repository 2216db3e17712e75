//! The categorical Elmendorf construction `C X = ∫_{O_{G,+}^op} (X ∘ p)` and the
//! functors `ε_L`, `η_L`, `ev` comparing it with fixed points.
//!
//! Direction bookkeeping: a morphism `(f, h) : (G/H, aH, x) → (G/K, bK, y)`
//! of `C X` stores the marked orbit map `f : (G/K, bK) → (G/H, aH)` — pointing
//! *backwards* — and `h : f^* x → y` in `X(G/K)`. Composition is
//! `(f', h') ∘ (f, h) = (f ∘ f', h' ∘ f'^*(h))`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::category::{FinCategory, Functor, Mor, NatTransformation, Obj, Subcategory};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::limits;
use crate::orbit::{Marked, MarkedOrbitCategory, OrbitCategory};
use crate::presheaf::{phi_on_functor, phi_with_embeddings, GCategory, GPreorder, OrbitPresheaf, PresheafMorphism};

/// An object `(G/H, aH, x)`: a marked orbit and an object of `X(G/H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    /// Object of `O_{G,+}`.
    pub marked: Obj,
    pub x: Obj,
}

/// A morphism `(f, h)`; `f` goes `tgt.marked → src.marked` in `O_{G,+}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElmendorfMorphism {
    pub src: Obj,
    pub tgt: Obj,
    pub f: Mor,
    pub h: Mor,
}

/// `C X` as a `G`-category, with provenance back to `X` and `O_{G,+}`.
#[derive(Debug, Clone)]
pub struct ElmendorfCat {
    presheaf: OrbitPresheaf,
    marked: Arc<MarkedOrbitCategory>,
    objects: Vec<Triple>,
    object_index: HashMap<Triple, Obj>,
    morphisms: Vec<ElmendorfMorphism>,
    lookup: HashMap<(Obj, Obj, Mor), Mor>,
    gcat: GCategory,
}

/// Builds `C X` and audits the category and action laws.
pub fn c_cat(x: &OrbitPresheaf) -> Result<ElmendorfCat> {
    let marked = Arc::new(MarkedOrbitCategory::new(x.orbit().clone())?);
    let c = c_cat_with(x, marked)?;
    c.gcat.validate().map_err(|e| Error::verification(format!("C X fails its laws: {e}")))?;
    Ok(c)
}

/// Builds `C X` over a shared marked orbit category, without the law audit.
pub fn c_cat_with(x: &OrbitPresheaf, marked: Arc<MarkedOrbitCategory>) -> Result<ElmendorfCat> {
    let all: Vec<Obj> = marked.category().objects().collect();
    let (objects, morphisms, category) = grothendieck(x, &marked, &all)?;
    let object_index = objects.iter().enumerate().map(|(i, &t)| (t, i)).collect::<HashMap<_, _>>();
    let lookup: HashMap<(Obj, Obj, Mor), Mor> =
        morphisms.iter().enumerate().map(|(i, m)| ((m.src, m.tgt, m.h), i)).collect();
    let group = x.group().clone();
    let action = group
        .elements()
        .map(|g| {
            let act = marked.action(g);
            let obj: Vec<Obj> = objects
                .iter()
                .map(|t| object_index[&Triple { marked: act.obj[t.marked], x: t.x }])
                .collect();
            let mor = morphisms.iter().map(|m| lookup[&(obj[m.src], obj[m.tgt], m.h)]).collect();
            Functor { obj, mor }
        })
        .collect();
    let gcat = GCategory::new_unchecked(group, category, action);
    Ok(ElmendorfCat { presheaf: x.clone(), marked, objects, object_index, morphisms, lookup, gcat })
}

/// The Grothendieck construction of `X ∘ p` over the full subcategory of
/// `O_{G,+}^op` on `allowed` (in that order).
pub fn grothendieck(
    x: &OrbitPresheaf,
    marked: &MarkedOrbitCategory,
    allowed: &[Obj],
) -> Result<(Vec<Triple>, Vec<ElmendorfMorphism>, FinCategory)> {
    let mut objects = Vec::new();
    for &m in allowed {
        let h = marked.object(m).subgroup;
        objects.extend(x.value(h).objects().map(|x| Triple { marked: m, x }));
    }
    limits::check("objects of C X", objects.len(), limits::ELEMENTS)?;
    let mut morphisms = Vec::new();
    let mut lookup = HashMap::new();
    let mut identities = vec![0; objects.len()];
    for (i, s) in objects.iter().enumerate() {
        for (j, t) in objects.iter().enumerate() {
            let Some(f) = marked.hom(t.marked, s.marked) else { continue };
            let k = marked.object(t.marked).subgroup;
            let fx = x.restriction(marked.underlying(f)).obj[s.x];
            for h in x.value(k).hom(fx, t.x) {
                if i == j && x.value(k).is_identity(h) {
                    identities[i] = morphisms.len();
                }
                lookup.insert((i, j, h), morphisms.len());
                morphisms.push(ElmendorfMorphism { src: i, tgt: j, f, h });
                limits::check("morphisms of C X", morphisms.len(), limits::MORPHISMS)?;
            }
        }
    }
    let labels = objects
        .iter()
        .map(|t| {
            let m = marked.object(t.marked);
            format!("{}, {}", marked.category().label(t.marked), x.value(m.subgroup).label(t.x))
        })
        .collect();
    let ends = morphisms.iter().map(|m| (m.src, m.tgt)).collect();
    let category = FinCategory::build(labels, ends, identities, |g, f| {
        let (mf, mg) = (&morphisms[f], &morphisms[g]);
        let k = marked.object(objects[mg.tgt].marked).subgroup;
        let restr = x.restriction(marked.underlying(mg.f));
        let h = x.value(k).compose(mg.h, restr.mor[mf.h]);
        lookup
            .get(&(mf.src, mg.tgt, h))
            .copied()
            .ok_or_else(|| Error::verification("Grothendieck construction is not closed under composition"))
    })?;
    Ok((objects, morphisms, category))
}

impl ElmendorfCat {
    pub fn presheaf(&self) -> &OrbitPresheaf {
        &self.presheaf
    }

    pub fn marked(&self) -> &Arc<MarkedOrbitCategory> {
        &self.marked
    }

    pub fn orbit(&self) -> &Arc<OrbitCategory> {
        self.marked.orbit()
    }

    pub fn gcategory(&self) -> &GCategory {
        &self.gcat
    }

    pub fn category(&self) -> &FinCategory {
        self.gcat.category()
    }

    pub fn objects(&self) -> &[Triple] {
        &self.objects
    }

    pub fn object(&self, o: Obj) -> Triple {
        self.objects[o]
    }

    pub fn morphism(&self, f: Mor) -> ElmendorfMorphism {
        self.morphisms[f]
    }

    pub fn object_index(&self, t: Triple) -> Option<Obj> {
        self.object_index.get(&t).copied()
    }

    /// The morphism `src → tgt` whose fibre component is `h`.
    pub fn find(&self, src: Obj, tgt: Obj, h: Mor) -> Option<Mor> {
        self.lookup.get(&(src, tgt, h)).copied()
    }

    /// The marked orbit `(G/H, aH)` of an object.
    pub fn mark(&self, o: Obj) -> Marked {
        self.marked.object(self.objects[o].marked)
    }

    /// Objects whose mark is `L`-fixed, in increasing order.
    pub fn fixed_mark_objects(&self, l: &Subgroup) -> Vec<Obj> {
        let fixed = self.marked.fixed_objects(l);
        (0..self.objects.len()).filter(|&o| fixed.binary_search(&self.objects[o].marked).is_ok()).collect()
    }

    pub fn is_thin(&self) -> bool {
        self.category().is_thin()
    }

    /// The `G`-preorder of a thin `C X`.
    pub fn to_preorder(&self) -> Result<GPreorder> {
        self.gcat.to_preorder()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let orbit = self.orbit();
        serde_json::json!({
            "group": self.presheaf.group().name(),
            "presheaf": self.presheaf.name(),
            "objects": self.objects.iter().map(|t| {
                let m = self.marked.object(t.marked);
                serde_json::json!({
                    "subgroup": m.subgroup,
                    "coset": orbit.cosets(m.subgroup).cosets()[m.coset],
                    "x": t.x,
                })
            }).collect::<Vec<_>>(),
            "category": self.category().to_json(),
            "morphisms": self.morphisms,
            "action": (0..self.presheaf.group().order()).map(|g| &self.gcat.action(g).obj).collect::<Vec<_>>(),
            "thin": self.is_thin(),
        })
    }
}

/// `C λ : C X → C Y`, `(G/H, aH, x) ↦ (G/H, aH, λ_H(x))`, `(f, h) ↦ (f, λ_K(h))`.
pub fn c_on_nat(lambda: &PresheafMorphism, cx: &ElmendorfCat, cy: &ElmendorfCat) -> Result<Functor> {
    lambda
        .validate(&cx.presheaf, &cy.presheaf)
        .map_err(|e| Error::invalid(format!("not a presheaf morphism: {e}")))?;
    let obj: Vec<Obj> = cx
        .objects
        .iter()
        .map(|t| {
            let h = cx.marked.object(t.marked).subgroup;
            cy.object_index[&Triple { marked: t.marked, x: lambda.components[h].obj[t.x] }]
        })
        .collect();
    let mor = cx
        .morphisms
        .iter()
        .map(|m| {
            let k = cx.marked.object(cx.objects[m.tgt].marked).subgroup;
            cy.lookup[&(obj[m.src], obj[m.tgt], lambda.components[k].mor[m.h])]
        })
        .collect();
    Ok(Functor { obj, mor })
}

/// `(C X)^L` together with `ε_L : (C X)^L → X(G/L)`, `(G/H, aH, x) ↦ r_a^* x`.
pub struct Epsilon {
    pub fixed: Subcategory,
    pub functor: Functor,
}

pub fn epsilon(cx: &ElmendorfCat, l: usize) -> Epsilon {
    let orbit = cx.orbit();
    let x = &cx.presheaf;
    let fixed = cx.gcat.fixed_subcategory(orbit.subgroup(l));
    // r_a : G/L → G/H with eL ↦ aH
    let r = |o: Obj| {
        let m = cx.mark(o);
        let a = orbit.cosets(m.subgroup).rep(m.coset);
        orbit.r(l, m.subgroup, a).expect("mark is L-fixed")
    };
    let obj = fixed.objects.iter().map(|&o| x.restriction(r(o)).obj[cx.objects[o].x]).collect();
    let mor = fixed
        .morphisms
        .iter()
        .map(|&f| {
            let m = cx.morphisms[f];
            x.restriction(r(m.tgt)).mor[m.h]
        })
        .collect();
    Epsilon { fixed, functor: Functor { obj, mor } }
}

/// `η_L : X(G/L) → (C X)^L`, `x ↦ (G/L, eL, x)`, `f ↦ (id, f)`, in local ids of `fixed`.
pub fn eta_l(cx: &ElmendorfCat, l: usize, fixed: &Subcategory) -> Functor {
    let base = cx.marked.object_index(Marked { subgroup: l, coset: 0 });
    let value = cx.presheaf.value(l);
    let global = |x: Obj| cx.object_index[&Triple { marked: base, x }];
    let obj = value.objects().map(|x| fixed.local_object(global(x)).expect("eL is L-fixed")).collect();
    let mor = value
        .morphisms()
        .map(|f| {
            let g = cx.lookup[&(global(value.src(f)), global(value.tgt(f)), f)];
            fixed.local_morphism(g).expect("(id, f) is L-fixed")
        })
        .collect();
    Functor { obj, mor }
}

/// `id ⇒ η_L ∘ ε_L` with components `(r_a, id_{r_a^* x})`.
pub fn unit_zigzag(cx: &ElmendorfCat, l: usize, eps: &Epsilon, eta: &Functor) -> NatTransformation {
    let fixed = &eps.fixed;
    let components = fixed
        .objects
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            let y = eps.functor.obj[i];
            let target = fixed.objects[eta.obj[y]];
            let h = cx.presheaf.value(l).id(y);
            let g = cx.lookup[&(o, target, h)];
            fixed.local_morphism(g).expect("unit components are L-fixed")
        })
        .collect();
    NatTransformation { components }
}

/// Checks `ε_K ∘ (c·−) = u^* ∘ ε_L` for every orbit map `u = r_c : G/K → G/L`.
pub fn epsilon_natural_in_l(cx: &ElmendorfCat, eps: &[Epsilon]) -> Result<(), String> {
    let orbit = cx.orbit();
    let oc = orbit.category();
    for u in oc.morphisms() {
        let (k, l) = (oc.src(u), oc.tgt(u));
        let c = orbit.rep(u);
        let (el, ek) = (&eps[l], &eps[k]);
        let act = cx.gcat.action(c);
        let restr = cx.presheaf.restriction(u);
        for (i, &o) in el.fixed.objects.iter().enumerate() {
            let moved = ek.fixed.local_object(act.obj[o]).ok_or("c·(C X)^L ⊄ (C X)^K")?;
            if ek.functor.obj[moved] != restr.obj[el.functor.obj[i]] {
                return Err(format!("ε is not natural along orbit map {u} at object {o}"));
            }
        }
        for (i, &f) in el.fixed.morphisms.iter().enumerate() {
            let moved = ek.fixed.local_morphism(act.mor[f]).ok_or("c·(C X)^L ⊄ (C X)^K")?;
            if ek.functor.mor[moved] != restr.mor[el.functor.mor[i]] {
                return Err(format!("ε is not natural along orbit map {u} at morphism {f}"));
            }
        }
    }
    Ok(())
}

/// `C Φ C` together with `ev : C Φ C → C`, `(G/H, aH, x) ↦ a·x`, `(f, h) ↦ b·h`.
pub struct Evaluation {
    pub c_phi: ElmendorfCat,
    pub functor: Functor,
}

pub fn ev(c: &GCategory, orbit: &Arc<OrbitCategory>) -> Result<Evaluation> {
    let data = phi_with_embeddings(c, orbit)?;
    let c_phi = c_cat(&data.presheaf)?;
    let obj = c_phi
        .objects
        .iter()
        .map(|t| {
            let m = c_phi.marked.object(t.marked);
            let a = orbit.cosets(m.subgroup).rep(m.coset);
            c.act_obj(a, data.embeddings[m.subgroup].objects[t.x])
        })
        .collect();
    let mor = c_phi
        .morphisms
        .iter()
        .map(|m| {
            let mk = c_phi.mark(m.tgt);
            let b = orbit.cosets(mk.subgroup).rep(mk.coset);
            c.act_mor(b, data.embeddings[mk.subgroup].morphisms[m.h])
        })
        .collect();
    Ok(Evaluation { c_phi, functor: Functor { obj, mor } })
}

/// Checks `Φ(ev_C) = ε_{ΦC}` componentwise as exact functor data.
pub fn phi_ev_is_epsilon(c: &GCategory, orbit: &Arc<OrbitCategory>, e: &Evaluation) -> Result<(), String> {
    let lam = phi_on_functor(e.c_phi.gcategory(), c, &e.functor, orbit).map_err(|err| err.to_string())?;
    for l in 0..orbit.subgroups().len() {
        let eps = epsilon(&e.c_phi, l);
        if lam.components[l] != eps.functor {
            return Err(format!("Φ(ev) and ε differ at subgroup {l}"));
        }
    }
    Ok(())
}

/// Lemma: a preorder-valued presheaf has a thin `C X`.
pub fn is_thin_output(x: &OrbitPresheaf) -> Result<bool> {
    Ok(c_cat(x)?.is_thin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Preorder;
    use crate::group::FiniteGroup;
    use crate::presheaf::{conjugation_groupoid, family_presheaf, phi, SubgroupFamily};

    fn orbit(key: &str) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(FiniteGroup::from_key(key).unwrap())).unwrap())
    }

    #[test]
    fn universal_free_space_on_c2() {
        let o = orbit("C2");
        let x = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
        let c = c_cat(&x).unwrap();
        assert_eq!(c.category().num_objects(), 2);
        assert_eq!(c.category().num_morphisms(), 4);
        let p = c.to_preorder().unwrap();
        assert!(!p.is_poset());
        assert!((0..2).all(|a| (0..2).all(|b| p.order().leq(a, b))));
    }

    #[test]
    fn all_subgroups_on_c2() {
        let o = orbit("C2");
        let x = family_presheaf(&o, &SubgroupFamily::all(&o)).unwrap();
        let c = c_cat(&x).unwrap();
        assert_eq!(c.category().num_objects(), 3);
        assert_eq!(c.category().num_morphisms(), 7);
    }

    #[test]
    fn trivial_group_recovers_the_value() {
        let o = orbit("C1");
        let d = Preorder::chain(3).to_category();
        let x = OrbitPresheaf::constant(o, "chain", d.clone());
        let c = c_cat(&x).unwrap();
        assert_eq!(c.category().num_objects(), d.num_objects());
        assert_eq!(c.category().num_morphisms(), d.num_morphisms());
        // labels aside, the structure is identical
        let iso = Functor {
            obj: c.objects().iter().map(|t| t.x).collect(),
            mor: c.category().morphisms().map(|f| c.morphism(f).h).collect(),
        };
        assert!(iso.validate(c.category(), &d).is_ok());
        assert!(iso.is_bijective(&d));
    }

    #[test]
    fn epsilon_eta_and_unit() {
        for key in ["C2", "C4", "S3"] {
            let o = orbit(key);
            for fam in SubgroupFamily::enumerate(&o) {
                let x = family_presheaf(&o, &fam).unwrap();
                let c = c_cat(&x).unwrap();
                let mut all = Vec::new();
                for l in 0..o.subgroups().len() {
                    let e = epsilon(&c, l);
                    assert!(e.functor.validate(&e.fixed.category, x.value(l)).is_ok());
                    let eta = eta_l(&c, l, &e.fixed);
                    assert!(eta.validate(x.value(l), &e.fixed.category).is_ok());
                    assert_eq!(e.functor.after(&eta), Functor::identity(x.value(l)));
                    let unit = unit_zigzag(&c, l, &e, &eta);
                    let id = Functor::identity(&e.fixed.category);
                    assert!(unit.validate(&e.fixed.category, &e.fixed.category, &id, &eta.after(&e.functor)).is_ok());
                    // the fixed subcategory is spanned by triples with L-fixed marks
                    assert_eq!(e.fixed.objects, c.fixed_mark_objects(o.subgroup(l)));
                    assert_eq!(e.fixed, c.category().full_subcategory(&e.fixed.objects));
                    all.push(e);
                }
                epsilon_natural_in_l(&c, &all).unwrap();
            }
        }
    }

    #[test]
    fn order_matches_subconjugacy_formula() {
        for key in ["C2", "C3", "C4", "S3"] {
            let o = orbit(key);
            let g = o.group();
            for fam in SubgroupFamily::enumerate(&o) {
                let c = c_cat(&family_presheaf(&o, &fam).unwrap()).unwrap();
                let p = c.to_preorder().unwrap();
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        let (mi, mj) = (c.mark(i), c.mark(j));
                        let a = o.cosets(mi.subgroup).rep(mi.coset);
                        let b = o.cosets(mj.subgroup).rep(mj.coset);
                        let aha = g.conjugate_subgroup(o.subgroup(mi.subgroup), a);
                        let bkb = g.conjugate_subgroup(o.subgroup(mj.subgroup), b);
                        assert_eq!(p.order().leq(i, j), bkb.is_subset_of(&aha));
                    }
                }
            }
        }
    }

    #[test]
    fn ev_and_phi_ev() {
        for key in ["C1", "C2", "S3"] {
            let o = orbit(key);
            let g = o.group().clone();
            let x = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
            let free = c_cat(&x).unwrap().gcategory().clone();
            for cat in [conjugation_groupoid(g.clone()), free] {
                let e = ev(&cat, &o).unwrap();
                assert!(e.c_phi.gcategory().check_equivariant(&cat, &e.functor).is_ok());
                phi_ev_is_epsilon(&cat, &o, &e).unwrap();
                // ev is surjective on objects
                let mut hit = vec![false; cat.category().num_objects()];
                e.functor.obj.iter().for_each(|&y| hit[y] = true);
                assert!(hit.into_iter().all(|b| b));
            }
        }
    }

    #[test]
    fn c_on_nat_laws() {
        let o = orbit("C2");
        let e = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
        let all = family_presheaf(&o, &SubgroupFamily::all(&o)).unwrap();
        let (ce, call) = (c_cat(&e).unwrap(), c_cat(&all).unwrap());
        let id = c_on_nat(&PresheafMorphism::identity(&e), &ce, &ce).unwrap();
        assert_eq!(id, Functor::identity(ce.category()));
        let incl = c_on_nat(&PresheafMorphism::to_terminal(&e), &ce, &call).unwrap();
        assert!(incl.validate(ce.category(), call.category()).is_ok());
        assert!(ce.gcategory().check_equivariant(call.gcategory(), &incl).is_ok());
        // injective, landing on the free part
        let mut img = incl.obj.clone();
        img.dedup();
        assert_eq!(img.len(), 2);
        assert!(incl.obj.iter().all(|&y| call.mark(y).subgroup == o.trivial_index()));
    }

    #[test]
    fn non_thin_values_give_non_thin_output() {
        let o = orbit("C2");
        let g = o.group().clone();
        let x = phi(&conjugation_groupoid(g), &o).unwrap();
        assert!(!x.is_preorder_valued());
        assert!(!is_thin_output(&x).unwrap());
    }
}
