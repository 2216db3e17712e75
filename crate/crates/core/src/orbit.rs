//! The orbit category `O_G` and the marked orbit category `O_{G,+}`.
//!
//! `O_G` has one object `G/H` per subgroup `H`. A morphism `G/H → G/K` is a
//! `G`-map, determined by the image `aK` of `eH`; it exists iff `a⁻¹Ha ⊆ K`
//! and is written `r_a`. Morphisms are stored by the canonical (minimal)
//! representative of `aK`.
//!
//! `O_{G,+}` has objects `(G/H, aH)`. A morphism `(G/H, aH) → (G/K, bK)` is a
//! `G`-map `f : G/H → G/K` with `f(aH) = bK`; there is at most one, and it
//! exists iff `aHa⁻¹ ⊆ bKb⁻¹`. `G` acts by translating the marks and fixes
//! the underlying maps.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::category::{FinCategory, Functor, Mor, Obj, Subcategory};
use crate::error::{Error, Result};
use crate::group::{CosetSpace, Element, FiniteGroup, Subgroup};
use crate::limits;

/// `r_a : G/src → G/tgt`, sending `e·src` to the coset `coset` of `G/tgt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitMorphism {
    pub src: usize,
    pub tgt: usize,
    pub coset: usize,
}

/// The orbit category of a finite group.
#[derive(Debug, Clone)]
pub struct OrbitCategory {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    cosets: Vec<CosetSpace>,
    category: FinCategory,
    morphisms: Vec<OrbitMorphism>,
    lookup: HashMap<OrbitMorphism, Mor>,
}

impl OrbitCategory {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        limits::check("group order", group.order(), limits::GROUP_ORDER)?;
        let subgroups = group.subgroups();
        let cosets = subgroups
            .iter()
            .map(|h| group.coset_space(h))
            .collect::<Result<Vec<_>>>()?;
        let mut morphisms = Vec::new();
        for (h, hs) in subgroups.iter().enumerate() {
            for (k, _) in subgroups.iter().enumerate() {
                for coset in cosets[k].fixed_cosets(&group, hs) {
                    morphisms.push(OrbitMorphism { src: h, tgt: k, coset });
                }
            }
        }
        limits::check("orbit category morphisms", morphisms.len(), limits::MORPHISMS)?;
        let lookup: HashMap<OrbitMorphism, Mor> =
            morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let labels = subgroups
            .iter()
            .map(|h| {
                let names: Vec<&str> = h.elements().iter().map(|&x| group.label(x)).collect();
                format!("G/{{{}}}", names.join(","))
            })
            .collect();
        let identities = (0..subgroups.len())
            .map(|h| lookup[&OrbitMorphism { src: h, tgt: h, coset: 0 }])
            .collect();
        let ends = morphisms.iter().map(|m| (m.src, m.tgt)).collect();
        let category = FinCategory::build(labels, ends, identities, |g, f| {
            // r_b ∘ r_a = r_{ab}
            let (mf, mg) = (morphisms[f], morphisms[g]);
            let a = cosets[mf.tgt].rep(mf.coset);
            let b = cosets[mg.tgt].rep(mg.coset);
            let coset = cosets[mg.tgt].coset_of(group.mul(a, b));
            lookup
                .get(&OrbitMorphism { src: mf.src, tgt: mg.tgt, coset })
                .copied()
                .ok_or_else(|| Error::verification("composite of orbit maps is not an orbit map"))
        })?;
        Ok(OrbitCategory { group, subgroups, cosets, category, morphisms, lookup })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, h: usize) -> &Subgroup {
        &self.subgroups[h]
    }

    pub fn subgroup_index(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|s| s == h)
    }

    /// Index of the trivial subgroup (always 0).
    pub fn trivial_index(&self) -> usize {
        0
    }

    /// Index of the whole group (always last).
    pub fn whole_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn cosets(&self, h: usize) -> &CosetSpace {
        &self.cosets[h]
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn morphism(&self, f: Mor) -> OrbitMorphism {
        self.morphisms[f]
    }

    /// `hom(G/H, G/K)` as morphism ids, in coset order.
    pub fn hom(&self, h: usize, k: usize) -> Vec<Mor> {
        self.category.hom(h, k)
    }

    /// The map `r_a : G/H → G/K` with `eH ↦ aK`, if it is well defined.
    pub fn r(&self, h: usize, k: usize, a: Element) -> Option<Mor> {
        let coset = self.cosets[k].coset_of(a);
        self.lookup.get(&OrbitMorphism { src: h, tgt: k, coset }).copied()
    }

    /// A representative `a` with `f = r_a`.
    pub fn rep(&self, f: Mor) -> Element {
        let m = self.morphisms[f];
        self.cosets[m.tgt].rep(m.coset)
    }

    /// Image of the coset `c ∈ G/src(f)` under `f`.
    pub fn apply(&self, f: Mor, c: usize) -> usize {
        let m = self.morphisms[f];
        let b = self.cosets[m.src].rep(c);
        self.cosets[m.tgt].coset_of(self.group.mul(b, self.rep(f)))
    }

    /// Whether `bKb⁻¹ ⊆ aHa⁻¹` for cosets `a = rep(c)` of `G/H`, `b = rep(d)` of `G/K`.
    pub fn subconjugate_marks(&self, k: usize, d: usize, h: usize, c: usize) -> bool {
        let g = &self.group;
        let (a, b) = (self.cosets[h].rep(c), self.cosets[k].rep(d));
        let aha = g.conjugate_subgroup(&self.subgroups[h], a);
        g.conjugate_subgroup(&self.subgroups[k], b).is_subset_of(&aha)
    }

    pub fn to_json(&self, with_tables: bool) -> serde_json::Value {
        let n = self.subgroups.len();
        let hom_sizes: Vec<Vec<usize>> =
            (0..n).map(|h| (0..n).map(|k| self.hom(h, k).len()).collect()).collect();
        let mut out = serde_json::json!({
            "group": self.group.name(),
            "objects": (0..n).map(|h| serde_json::json!({
                "id": h,
                "label": self.category.label(h),
                "subgroup": self.subgroups[h],
                "cosets": self.cosets[h].len(),
            })).collect::<Vec<_>>(),
            "hom_sizes": hom_sizes,
        });
        if with_tables {
            out["morphisms"] = serde_json::to_value(&self.morphisms).unwrap();
            out["category"] = self.category.to_json();
        }
        out
    }
}

/// An object `(G/H, aH)` of the marked orbit category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Marked {
    pub subgroup: usize,
    pub coset: usize,
}

/// The marked orbit category `O_{G,+}` with its `G`-action and forgetful functor.
#[derive(Debug, Clone)]
pub struct MarkedOrbitCategory {
    orbit: Arc<OrbitCategory>,
    objects: Vec<Marked>,
    index: Vec<Vec<Obj>>,
    category: FinCategory,
    underlying: Vec<Mor>,
    hom: HashMap<(Obj, Obj), Mor>,
    action: Vec<Functor>,
}

impl MarkedOrbitCategory {
    pub fn new(orbit: Arc<OrbitCategory>) -> Result<Self> {
        let n = orbit.subgroups().len();
        let mut objects = Vec::new();
        let mut index = vec![Vec::new(); n];
        for h in 0..n {
            for c in 0..orbit.cosets(h).len() {
                index[h].push(objects.len());
                objects.push(Marked { subgroup: h, coset: c });
            }
        }
        let group = orbit.group().clone();
        let mut ends = Vec::new();
        let mut underlying = Vec::new();
        let mut hom = HashMap::new();
        for (x, ox) in objects.iter().enumerate() {
            let a = orbit.cosets(ox.subgroup).rep(ox.coset);
            for (y, oy) in objects.iter().enumerate() {
                let b = orbit.cosets(oy.subgroup).rep(oy.coset);
                // f(aH) = a·f(eH) = bK forces f = r_{a⁻¹b}
                if let Some(f) = orbit.r(ox.subgroup, oy.subgroup, group.mul(group.inv(a), b)) {
                    hom.insert((x, y), ends.len());
                    ends.push((x, y));
                    underlying.push(f);
                }
            }
        }
        let identities = (0..objects.len()).map(|x| hom[&(x, x)]).collect();
        let labels = objects
            .iter()
            .map(|o| {
                let a = orbit.cosets(o.subgroup).rep(o.coset);
                format!("({}, {}H)", orbit.category().label(o.subgroup), group.label(a))
            })
            .collect();
        let ends_c = ends.clone();
        let category = FinCategory::build(labels, ends, identities, |g, f| {
            hom.get(&(ends_c[f].0, ends_c[g].1))
                .copied()
                .ok_or_else(|| Error::verification("marked orbit category is not closed under composition"))
        })?;
        let action = group
            .elements()
            .map(|g| {
                let obj: Vec<Obj> = objects
                    .iter()
                    .map(|o| index[o.subgroup][orbit.cosets(o.subgroup).act(g, o.coset)])
                    .collect();
                let mor = category
                    .morphisms()
                    .map(|f| hom[&(obj[category.src(f)], obj[category.tgt(f)])])
                    .collect();
                Functor { obj, mor }
            })
            .collect();
        Ok(MarkedOrbitCategory { orbit, objects, index, category, underlying, hom, action })
    }

    pub fn orbit(&self) -> &Arc<OrbitCategory> {
        &self.orbit
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn objects(&self) -> &[Marked] {
        &self.objects
    }

    pub fn object(&self, x: Obj) -> Marked {
        self.objects[x]
    }

    pub fn object_index(&self, m: Marked) -> Obj {
        self.index[m.subgroup][m.coset]
    }

    /// The unique morphism `x → y`, if any.
    pub fn hom(&self, x: Obj, y: Obj) -> Option<Mor> {
        self.hom.get(&(x, y)).copied()
    }

    /// The underlying `O_G` morphism of `f` (the forgetful functor on morphisms).
    pub fn underlying(&self, f: Mor) -> Mor {
        self.underlying[f]
    }

    /// Action of `g` as a category automorphism.
    pub fn action(&self, g: Element) -> &Functor {
        &self.action[g]
    }

    pub fn actions(&self) -> &[Functor] {
        &self.action
    }

    /// The forgetful functor `p : O_{G,+} → O_G`.
    pub fn forgetful(&self) -> Functor {
        Functor {
            obj: self.objects.iter().map(|o| o.subgroup).collect(),
            mor: self.underlying.clone(),
        }
    }

    /// Objects whose mark is fixed by `k`.
    pub fn fixed_objects(&self, k: &Subgroup) -> Vec<Obj> {
        (0..self.objects.len())
            .filter(|&x| {
                let o = self.objects[x];
                self.orbit.cosets(o.subgroup).is_fixed(o.coset, k)
            })
            .collect()
    }

    /// The full subcategory `(O_{G,+})^K` on `K`-fixed marked objects.
    ///
    /// Every morphism is `G`-fixed, so this is exactly the `K`-fixed subcategory.
    pub fn fixed_subcategory(&self, k: &Subgroup) -> Subcategory {
        self.category.full_subcategory(&self.fixed_objects(k))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.orbit.group().name(),
            "objects": self.objects,
            "category": self.category.to_json(),
            "underlying": self.underlying,
            "action": self.action.iter().map(|f| &f.obj).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(key: &str) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(FiniteGroup::from_key(key).unwrap())).unwrap())
    }

    #[test]
    fn c2_hom_sizes() {
        let o = orbit("C2");
        let (e, g) = (o.trivial_index(), o.whole_index());
        assert_eq!(o.hom(e, e).len(), 2);
        assert_eq!(o.hom(e, g).len(), 1);
        assert_eq!(o.hom(g, e).len(), 0);
        assert_eq!(o.hom(g, g).len(), 1);
    }

    #[test]
    fn hom_sizes_match_fixed_cosets() {
        for key in ["C2", "C3", "C4", "S3", "D4"] {
            let o = orbit(key);
            let g = o.group();
            assert!(o.category().validate().is_ok());
            for h in 0..o.subgroups().len() {
                for k in 0..o.subgroups().len() {
                    let fixed = o.cosets(k).fixed_cosets(g, o.subgroup(h));
                    assert_eq!(o.hom(h, k).len(), fixed.len());
                    for f in o.hom(h, k) {
                        let a = o.rep(f);
                        assert!(o
                            .subgroup(h)
                            .elements()
                            .iter()
                            .all(|&x| o.subgroup(k).contains(g.conjugate(g.inv(a), x))));
                    }
                }
            }
            let top = o.whole_index();
            assert_eq!(o.hom(top, top), vec![o.category().id(top)]);
        }
    }

    #[test]
    fn s3_no_maps_from_a3_orbit_to_transposition_orbit() {
        let o = orbit("S3");
        let g = o.group();
        let a3 = o.subgroup_index(&g.generated(&[g.element("(123)").unwrap()])).unwrap();
        let t = o.subgroup_index(&g.generated(&[g.element("(12)").unwrap()])).unwrap();
        assert!(o.hom(a3, t).is_empty());
    }

    #[test]
    fn orbit_maps_are_equivariant() {
        let o = orbit("S3");
        let g = o.group();
        for f in o.category().morphisms() {
            let m = o.morphism(f);
            for c in 0..o.cosets(m.src).len() {
                for x in g.elements() {
                    let lhs = o.apply(f, o.cosets(m.src).act(x, c));
                    let rhs = o.cosets(m.tgt).act(x, o.apply(f, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn marked_c2() {
        let m = MarkedOrbitCategory::new(orbit("C2")).unwrap();
        assert_eq!(m.objects().len(), 3);
        assert_eq!(m.category().num_morphisms(), 7);
        let top = m.object_index(Marked { subgroup: 1, coset: 0 });
        assert_eq!(m.category().hom(top, top).len(), 1);
        // both free marks map to the fixed mark, and to each other
        for c in 0..2 {
            let x = m.object_index(Marked { subgroup: 0, coset: c });
            assert!(m.hom(x, top).is_some());
            assert!(m.hom(top, x).is_none());
            assert!(m.hom(x, m.object_index(Marked { subgroup: 0, coset: 1 - c })).is_some());
        }
    }

    /// Direct enumeration: all G-maps G/H → G/K (as functions on cosets) that
    /// commute with the action and send the mark to the mark.
    fn brute_force_marked_hom(o: &OrbitCategory, x: Marked, y: Marked) -> usize {
        let g = o.group();
        let (sx, sy) = (o.cosets(x.subgroup), o.cosets(y.subgroup));
        let mut count = 0;
        for target in 0..sy.len() {
            // an equivariant map is determined by the image of eH
            let image: Vec<usize> = (0..sx.len()).map(|c| sy.act(sx.rep(c), target)).collect();
            let equivariant = g.elements().all(|a| {
                (0..sx.len()).all(|c| image[sx.act(a, c)] == sy.act(a, image[c]))
            });
            if equivariant && image[x.coset] == y.coset {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn marked_is_thin_and_matches_characterisations() {
        for key in ["C2", "C4", "S3", "D4"] {
            let o = orbit(key);
            let m = MarkedOrbitCategory::new(o.clone()).unwrap();
            assert!(m.category().validate().is_ok());
            assert!(m.category().is_thin());
            for (x, &ox) in m.objects().iter().enumerate() {
                for (y, &oy) in m.objects().iter().enumerate() {
                    let n = m.category().hom(x, y).len();
                    assert_eq!(n, brute_force_marked_hom(&o, ox, oy));
                    // aHa⁻¹ ⊆ bKb⁻¹
                    assert_eq!(n == 1, o.subconjugate_marks(ox.subgroup, ox.coset, oy.subgroup, oy.coset));
                }
            }
        }
    }

    #[test]
    fn marked_action_and_forgetful() {
        for key in ["C3", "S3"] {
            let m = MarkedOrbitCategory::new(orbit(key)).unwrap();
            let c = m.category();
            let g = m.orbit().group().clone();
            let p = m.forgetful();
            assert!(p.validate(c, m.orbit().category()).is_ok());
            for a in g.elements() {
                let fa = m.action(a);
                assert!(fa.validate(c, c).is_ok());
                assert!(fa.is_bijective(c));
                assert_eq!(p.after(fa), p);
                for f in c.morphisms() {
                    assert_eq!(m.underlying(fa.mor[f]), m.underlying(f));
                }
                for b in g.elements() {
                    assert_eq!(fa.after(m.action(b)), *m.action(g.mul(a, b)));
                }
            }
            assert_eq!(*m.action(0), Functor::identity(c));
        }
    }

    #[test]
    fn fixed_marked_subcategories() {
        let m = MarkedOrbitCategory::new(orbit("C2")).unwrap();
        let g = m.orbit().group().clone();
        assert_eq!(m.fixed_subcategory(&g.trivial()).category.num_objects(), 3);
        let top = m.fixed_subcategory(&g.whole());
        assert_eq!(top.objects, vec![m.object_index(Marked { subgroup: 1, coset: 0 })]);

        let o = orbit("S3");
        let s3 = o.group().clone();
        let m = MarkedOrbitCategory::new(o.clone()).unwrap();
        let t = s3.generated(&[s3.element("(12)").unwrap()]);
        let fixed = m.fixed_subcategory(&t);
        let expected: usize = (0..o.subgroups().len()).map(|h| o.cosets(h).fixed_cosets(&s3, &t).len()).sum();
        assert_eq!(fixed.category.num_objects(), expected);
        // (G, eG) and (⟨(12)⟩, e⟨(12)⟩) are among them
        let ti = o.subgroup_index(&t).unwrap();
        assert!(fixed.local_object(m.object_index(Marked { subgroup: o.whole_index(), coset: 0 })).is_some());
        assert!(fixed.local_object(m.object_index(Marked { subgroup: ti, coset: 0 })).is_some());
        assert!(fixed.category.validate().is_ok());
    }
}
