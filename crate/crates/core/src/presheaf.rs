//! Presheaves `X : O_G^op → Cat`, `G`-categories and `G`-preorders, the fixed
//! point presheaf `Φ`, and the family presheaves `X_F`.
//!
//! A restriction functor is stored for every orbit map `u : G/K → G/H` as
//! `u^* : X(G/H) → X(G/K)`, indexed by the morphism id of `u` in `O_G`.

use std::sync::Arc;

use serde::Serialize;

use crate::category::{FinCategory, Functor, Mor, Obj, Preorder, Subcategory};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, Subgroup, IDENTITY};
use crate::orbit::OrbitCategory;

/// Whether every value of a presheaf is a poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Cat,
    Pos,
}

/// A presheaf of finite categories over the orbit category.
#[derive(Debug, Clone)]
pub struct OrbitPresheaf {
    orbit: Arc<OrbitCategory>,
    name: String,
    values: Vec<FinCategory>,
    restrictions: Vec<Functor>,
}

impl OrbitPresheaf {
    /// Builds and audits a presheaf.
    ///
    /// `values[h]` is `X(G/H_h)`; `restrictions[u]` is `u^*` for the `O_G`
    /// morphism with id `u`.
    pub fn new(
        orbit: Arc<OrbitCategory>,
        name: impl Into<String>,
        values: Vec<FinCategory>,
        restrictions: Vec<Functor>,
    ) -> Result<Self> {
        let p = OrbitPresheaf { orbit, name: name.into(), values, restrictions };
        p.validate().map_err(Error::Invalid)?;
        Ok(p)
    }

    /// The constant presheaf with value `d` and identity restrictions.
    pub fn constant(orbit: Arc<OrbitCategory>, name: impl Into<String>, d: FinCategory) -> Self {
        let n = orbit.subgroups().len();
        let m = orbit.category().num_morphisms();
        let id = Functor::identity(&d);
        OrbitPresheaf {
            orbit,
            name: name.into(),
            values: vec![d; n],
            restrictions: vec![id; m],
        }
    }

    pub fn orbit(&self) -> &Arc<OrbitCategory> {
        &self.orbit
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.orbit.group()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `X(G/H)` for the subgroup with index `h`.
    pub fn value(&self, h: usize) -> &FinCategory {
        &self.values[h]
    }

    pub fn values(&self) -> &[FinCategory] {
        &self.values
    }

    /// `u^*` for the orbit map `u`.
    pub fn restriction(&self, u: Mor) -> &Functor {
        &self.restrictions[u]
    }

    pub fn flavor(&self) -> Flavor {
        let pos = self
            .values
            .iter()
            .all(|v| Preorder::from_category(v).is_ok_and(|p| p.is_antisymmetric()));
        if pos {
            Flavor::Pos
        } else {
            Flavor::Cat
        }
    }

    /// Whether every value is a thin category.
    pub fn is_preorder_valued(&self) -> bool {
        self.values.iter().all(FinCategory::is_thin)
    }

    /// Checks that every restriction is a functor, identities restrict to
    /// identities, and `(u∘v)^* = v^* ∘ u^*`.
    pub fn validate(&self) -> Result<(), String> {
        let oc = self.orbit.category();
        if self.values.len() != self.orbit.subgroups().len() {
            return Err("one value is required per subgroup".into());
        }
        if self.restrictions.len() != oc.num_morphisms() {
            return Err("one restriction is required per orbit map".into());
        }
        for (h, v) in self.values.iter().enumerate() {
            v.validate().map_err(|e| format!("value at subgroup {h}: {e}"))?;
        }
        for u in oc.morphisms() {
            let (k, h) = (oc.src(u), oc.tgt(u));
            self.restrictions[u]
                .validate(&self.values[h], &self.values[k])
                .map_err(|e| format!("restriction along orbit map {u}: {e}"))?;
        }
        for h in oc.objects() {
            if self.restrictions[oc.id(h)] != Functor::identity(&self.values[h]) {
                return Err(format!("restriction along the identity of subgroup {h} is not the identity"));
            }
        }
        for v in oc.morphisms() {
            for &u in oc.out_of(oc.tgt(v)) {
                let lhs = &self.restrictions[oc.compose(u, v)];
                let rhs = self.restrictions[v].after(&self.restrictions[u]);
                if *lhs != rhs {
                    return Err(format!("restriction is not functorial on the pair ({u}, {v})"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let oc = self.orbit.category();
        serde_json::json!({
            "name": self.name,
            "group": self.group().name(),
            "flavor": self.flavor(),
            "values": self.values.iter().enumerate().map(|(h, v)| serde_json::json!({
                "subgroup": h,
                "elements": self.orbit.subgroup(h),
                "category": v.to_json(),
            })).collect::<Vec<_>>(),
            "restrictions": oc.morphisms().map(|u| {
                let m = self.orbit.morphism(u);
                serde_json::json!({
                    "source": m.tgt,
                    "target": m.src,
                    "coset": m.coset,
                    "functor": self.restrictions[u],
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// Replaces one restriction without re-validating; used to build broken
    /// inputs for law checkers.
    #[doc(hidden)]
    pub fn with_restriction_unchecked(mut self, u: Mor, f: Functor) -> Self {
        self.restrictions[u] = f;
        self
    }
}

/// A set of subgroups (by index in the orbit category) closed under subconjugacy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupFamily {
    members: Vec<bool>,
}

impl SubgroupFamily {
    pub fn new(orbit: &OrbitCategory, members: &[usize]) -> Result<Self> {
        let n = orbit.subgroups().len();
        let mut mask = vec![false; n];
        for &h in members {
            if h >= n {
                return Err(Error::invalid(format!("subgroup index {h} out of range")));
            }
            mask[h] = true;
        }
        let g = orbit.group();
        for h in (0..n).filter(|&h| mask[h]) {
            for a in g.elements() {
                let conj = g.conjugate_subgroup(orbit.subgroup(h), a);
                for k in (0..n).filter(|&k| !mask[k]) {
                    if orbit.subgroup(k).is_subset_of(&conj) {
                        return Err(Error::invalid(format!(
                            "family not subconjugacy-closed: {} is in the family but its subconjugate {} is not",
                            orbit.subgroup(h),
                            orbit.subgroup(k)
                        )));
                    }
                }
            }
        }
        Ok(SubgroupFamily { members: mask })
    }

    pub fn all(orbit: &OrbitCategory) -> Self {
        SubgroupFamily { members: vec![true; orbit.subgroups().len()] }
    }

    pub fn trivial(orbit: &OrbitCategory) -> Self {
        let mut members = vec![false; orbit.subgroups().len()];
        members[orbit.trivial_index()] = true;
        SubgroupFamily { members }
    }

    pub fn contains(&self, h: usize) -> bool {
        self.members[h]
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&h| self.members[h]).collect()
    }

    /// Every family of subgroups, in a deterministic order.
    pub fn enumerate(orbit: &OrbitCategory) -> Vec<SubgroupFamily> {
        // families are downward closed sets in the subconjugacy order on
        // conjugacy classes, so enumerate subsets of classes
        let g = orbit.group();
        let n = orbit.subgroups().len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for h in 0..n {
            if class_of[h] != usize::MAX {
                continue;
            }
            let mut class = Vec::new();
            for a in g.elements() {
                let k = orbit.subgroup_index(&g.conjugate_subgroup(orbit.subgroup(h), a)).unwrap();
                if class_of[k] == usize::MAX {
                    class_of[k] = classes.len();
                    class.push(k);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << classes.len()) {
            let members: Vec<usize> = (0..classes.len())
                .filter(|c| mask >> c & 1 == 1)
                .flat_map(|c| classes[c].iter().copied())
                .collect();
            if let Ok(f) = SubgroupFamily::new(orbit, &members) {
                out.push(f);
            }
        }
        out.sort_by_key(|f| (f.members().len(), f.members()));
        out
    }

    /// Short name used in descriptors, e.g. `family:0,1`.
    pub fn descriptor(&self) -> String {
        let ids: Vec<String> = self.members().iter().map(|h| h.to_string()).collect();
        format!("family:{}", ids.join(","))
    }
}

/// The presheaf `X_F`: terminal at `H ∈ F`, empty otherwise.
pub fn family_presheaf(orbit: &Arc<OrbitCategory>, family: &SubgroupFamily) -> Result<OrbitPresheaf> {
    let oc = orbit.category();
    let values: Vec<FinCategory> = oc
        .objects()
        .map(|h| if family.contains(h) { FinCategory::terminal() } else { FinCategory::empty() })
        .collect();
    let restrictions = oc
        .morphisms()
        .map(|u| Functor::to_terminal(&values[oc.tgt(u)]))
        .map(|f| if f.obj.is_empty() { Functor { obj: vec![], mor: vec![] } } else { f })
        .collect();
    // u^* : X(G/H) → X(G/K) with u : G/K → G/H needs X(G/H) nonempty ⇒ X(G/K) nonempty
    for u in oc.morphisms() {
        if family.contains(oc.tgt(u)) && !family.contains(oc.src(u)) {
            return Err(Error::invalid("family not subconjugacy-closed"));
        }
    }
    OrbitPresheaf::new(orbit.clone(), family.descriptor(), values, restrictions)
}

/// A category with a `G`-action by automorphisms.
#[derive(Debug, Clone)]
pub struct GCategory {
    group: Arc<FiniteGroup>,
    category: FinCategory,
    action: Vec<Functor>,
}

impl GCategory {
    /// Validates the action laws: each `g` acts by a functor, `e` acts as the
    /// identity and `(gh)· = g·(h·)`.
    pub fn new(group: Arc<FiniteGroup>, category: FinCategory, action: Vec<Functor>) -> Result<Self> {
        let c = GCategory { group, category, action };
        c.validate().map_err(Error::Invalid)?;
        Ok(c)
    }

    /// Skips the law audit; for constructions whose laws are checked separately.
    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, category: FinCategory, action: Vec<Functor>) -> Self {
        GCategory { group, category, action }
    }

    /// `category` with every element acting as the identity.
    pub fn trivial(group: Arc<FiniteGroup>, category: FinCategory) -> Self {
        let id = Functor::identity(&category);
        let action = vec![id; group.order()];
        GCategory { group, category, action }
    }

    pub fn validate(&self) -> Result<(), String> {
        let c = &self.category;
        c.validate().map_err(|e| e.to_string())?;
        if self.action.len() != self.group.order() {
            return Err("one action functor is required per group element".into());
        }
        for (g, f) in self.action.iter().enumerate() {
            f.validate(c, c).map_err(|e| format!("action of element {g}: {e}"))?;
        }
        if self.action[IDENTITY] != Functor::identity(c) {
            return Err("the identity element does not act trivially".into());
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                if self.action[self.group.mul(g, h)] != self.action[g].after(&self.action[h]) {
                    return Err(format!("action is not multiplicative on ({g}, {h})"));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn action(&self, g: Element) -> &Functor {
        &self.action[g]
    }

    pub fn act_obj(&self, g: Element, x: Obj) -> Obj {
        self.action[g].obj[x]
    }

    pub fn act_mor(&self, g: Element, f: Mor) -> Mor {
        self.action[g].mor[f]
    }

    /// `C^H`: the `H`-fixed objects and the `H`-fixed morphisms between them.
    pub fn fixed_subcategory(&self, h: &Subgroup) -> Subcategory {
        let c = &self.category;
        let objects: Vec<Obj> =
            c.objects().filter(|&x| h.elements().iter().all(|&g| self.act_obj(g, x) == x)).collect();
        let morphisms: Vec<Mor> =
            c.morphisms().filter(|&f| h.elements().iter().all(|&g| self.act_mor(g, f) == f)).collect();
        c.subcategory(&objects, &morphisms).expect("fixed points form a subcategory")
    }

    /// Checks `F(g·x) = g·F(x)` on objects and morphisms, returning a witness on failure.
    pub fn check_equivariant(&self, target: &GCategory, f: &Functor) -> Result<(), String> {
        f.validate(&self.category, &target.category)?;
        for g in self.group.elements() {
            for x in self.category.objects() {
                if f.obj[self.act_obj(g, x)] != target.act_obj(g, f.obj[x]) {
                    return Err(format!("not equivariant: F({g}·x) ≠ {g}·F(x) at object {x}"));
                }
            }
            for m in self.category.morphisms() {
                if f.mor[self.act_mor(g, m)] != target.act_mor(g, f.mor[m]) {
                    return Err(format!("not equivariant: F({g}·f) ≠ {g}·F(f) at morphism {m}"));
                }
            }
        }
        Ok(())
    }

    /// The `G`-preorder of a thin `G`-category.
    pub fn to_preorder(&self) -> Result<GPreorder> {
        let order = Preorder::from_category(&self.category)?;
        Ok(GPreorder {
            group: self.group.clone(),
            order,
            action: self.action.iter().map(|f| f.obj.clone()).collect(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group.name(),
            "category": self.category.to_json(),
            "action": self.action,
        })
    }
}

/// The one-object category on `G` with `G` acting by conjugation.
pub fn conjugation_delooping(group: Arc<FiniteGroup>) -> GCategory {
    let category = FinCategory::delooping(&group);
    let action = group
        .elements()
        .map(|g| Functor { obj: vec![0], mor: group.elements().map(|h| group.conjugate(g, h)).collect() })
        .collect();
    GCategory { group, category, action }
}

/// The action groupoid of `G` acting on itself by conjugation, with `G`
/// acting on it by conjugation of both objects and arrows.
///
/// Objects are elements `x`; the morphism `(k, x)` goes `x → kxk⁻¹`.
pub fn conjugation_groupoid(group: Arc<FiniteGroup>) -> GCategory {
    let n = group.order();
    let labels = group.elements().map(|x| group.label(x).to_string()).collect();
    // morphism id = x * n + k
    let morphisms = (0..n * n).map(|i| (i / n, group.conjugate(i % n, i / n))).collect();
    let identities = (0..n).map(|x| x * n + IDENTITY).collect();
    let category = FinCategory::build(labels, morphisms, identities, |g, f| {
        let (x, k) = (f / n, f % n);
        let l = g % n;
        Ok(x * n + group.mul(l, k))
    })
    .expect("conjugation groupoid is buildable");
    let action = group
        .elements()
        .map(|g| Functor {
            obj: group.elements().map(|x| group.conjugate(g, x)).collect(),
            mor: (0..n * n)
                .map(|i| group.conjugate(g, i / n) * n + group.conjugate(g, i % n))
                .collect(),
        })
        .collect();
    GCategory { group, category, action }
}

/// A preorder with an order-preserving `G`-action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPreorder {
    group: Arc<FiniteGroup>,
    order: Preorder,
    action: Vec<Vec<usize>>,
}

impl GPreorder {
    pub fn new(group: Arc<FiniteGroup>, order: Preorder, action: Vec<Vec<usize>>) -> Result<Self> {
        let p = GPreorder { group, order, action };
        p.validate().map_err(Error::Invalid)?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), String> {
        let n = self.order.len();
        if self.action.len() != self.group.order() {
            return Err("one permutation is required per group element".into());
        }
        for (g, perm) in self.action.iter().enumerate() {
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&y| y >= n || std::mem::replace(&mut seen[y], true)) {
                return Err(format!("element {g} does not act by a permutation"));
            }
            for x in 0..n {
                for y in 0..n {
                    if self.order.leq(x, y) != self.order.leq(perm[x], perm[y]) {
                        return Err(format!("element {g} is not an order automorphism at ({x}, {y})"));
                    }
                }
            }
        }
        if self.action[IDENTITY].iter().enumerate().any(|(x, &y)| x != y) {
            return Err("the identity element does not act trivially".into());
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                if (0..n).any(|x| self.action[gh][x] != self.action[g][self.action[h][x]]) {
                    return Err(format!("action is not multiplicative on ({g}, {h})"));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn act(&self, g: Element, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn is_poset(&self) -> bool {
        self.order.is_antisymmetric()
    }

    /// Elements fixed by every element of `h`, in increasing order.
    pub fn fixed_elements(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.len()).filter(|&x| h.elements().iter().all(|&g| self.action[g][x] == x)).collect()
    }

    /// The sub-preorder `P^H` and the embedding of its elements.
    pub fn fixed(&self, h: &Subgroup) -> (Preorder, Vec<usize>) {
        let keep = self.fixed_elements(h);
        let labels = keep.iter().map(|&x| self.order.elements()[x].clone()).collect();
        let leq = keep.iter().map(|&x| keep.iter().map(|&y| self.order.leq(x, y)).collect()).collect();
        (Preorder::new(labels, leq).expect("sub-preorders are preorders"), keep)
    }

    pub fn to_gcategory(&self) -> GCategory {
        let category = self.order.to_category();
        let action = self
            .action
            .iter()
            .map(|perm| Functor {
                obj: perm.clone(),
                mor: category
                    .morphisms()
                    .map(|f| category.hom(perm[category.src(f)], perm[category.tgt(f)])[0])
                    .collect(),
            })
            .collect();
        GCategory { group: self.group.clone(), category, action }
    }

    /// JSON with elements, strict-order pairs and the action table.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.len();
        let strict: Vec<[usize; 2]> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| x != y && self.order.leq(x, y))
            .map(|(x, y)| [x, y])
            .collect();
        serde_json::json!({
            "group": self.group.name(),
            "elements": self.order.elements(),
            "strict_order": strict,
            "action": self.action,
        })
    }
}

/// A `G`-preorder whose order is antisymmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPoset(GPreorder);

impl GPoset {
    pub fn new(p: GPreorder) -> Result<Self> {
        if p.is_poset() {
            Ok(GPoset(p))
        } else {
            Err(Error::invalid("G-preorder is not antisymmetric"))
        }
    }

    pub fn as_preorder(&self) -> &GPreorder {
        &self.0
    }

    pub fn into_preorder(self) -> GPreorder {
        self.0
    }
}

/// Fixed point presheaf together with the embeddings `C^H ⊆ C`.
pub struct FixedPointData {
    pub presheaf: OrbitPresheaf,
    pub embeddings: Vec<Subcategory>,
}

/// `Φ C`: `H ↦ C^H`, with restriction along `r_a : G/K → G/H` given by `x ↦ a·x`.
pub fn phi(c: &GCategory, orbit: &Arc<OrbitCategory>) -> Result<OrbitPresheaf> {
    phi_with_embeddings(c, orbit).map(|d| d.presheaf)
}

pub fn phi_with_embeddings(c: &GCategory, orbit: &Arc<OrbitCategory>) -> Result<FixedPointData> {
    if **orbit.group() != *c.group {
        return Err(Error::invalid("G-category and orbit category use different groups"));
    }
    let oc = orbit.category();
    let embeddings: Vec<Subcategory> = orbit.subgroups().iter().map(|h| c.fixed_subcategory(h)).collect();
    let mut restrictions = Vec::with_capacity(oc.num_morphisms());
    for u in oc.morphisms() {
        let (k, h) = (oc.src(u), oc.tgt(u));
        let a = orbit.rep(u);
        let (from, to) = (&embeddings[h], &embeddings[k]);
        let obj = from
            .objects
            .iter()
            .map(|&x| to.local_object(c.act_obj(a, x)))
            .collect::<Option<Vec<_>>>();
        let mor = from
            .morphisms
            .iter()
            .map(|&f| to.local_morphism(c.act_mor(a, f)))
            .collect::<Option<Vec<_>>>();
        match (obj, mor) {
            (Some(obj), Some(mor)) => restrictions.push(Functor { obj, mor }),
            _ => return Err(Error::verification(format!("a·C^H is not contained in C^K along orbit map {u}"))),
        }
    }
    let values = embeddings.iter().map(|s| s.category.clone()).collect();
    let presheaf = OrbitPresheaf::new(orbit.clone(), "phi", values, restrictions)?;
    Ok(FixedPointData { presheaf, embeddings })
}

/// A morphism of presheaves: one functor `λ_H : X(G/H) → Y(G/H)` per subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMorphism {
    pub components: Vec<Functor>,
}

impl PresheafMorphism {
    pub fn identity(x: &OrbitPresheaf) -> Self {
        PresheafMorphism { components: x.values().iter().map(Functor::identity).collect() }
    }

    /// `self ∘ first`
    pub fn after(&self, first: &PresheafMorphism) -> Self {
        PresheafMorphism {
            components: self.components.iter().zip(&first.components).map(|(s, f)| s.after(f)).collect(),
        }
    }

    /// Checks each component and every naturality square `λ_K ∘ u^* = u^* ∘ λ_H`.
    pub fn validate(&self, source: &OrbitPresheaf, target: &OrbitPresheaf) -> Result<(), String> {
        let oc = source.orbit().category();
        if self.components.len() != source.values().len() {
            return Err("one component is required per subgroup".into());
        }
        for (h, c) in self.components.iter().enumerate() {
            c.validate(source.value(h), target.value(h)).map_err(|e| format!("component {h}: {e}"))?;
        }
        for u in oc.morphisms() {
            let (k, h) = (oc.src(u), oc.tgt(u));
            let lhs = self.components[k].after(source.restriction(u));
            let rhs = target.restriction(u).after(&self.components[h]);
            if lhs != rhs {
                return Err(format!("naturality fails along orbit map {u}"));
            }
        }
        Ok(())
    }

    /// The unique morphism into a presheaf whose values are all terminal.
    pub fn to_terminal(x: &OrbitPresheaf) -> Self {
        PresheafMorphism { components: x.values().iter().map(Functor::to_terminal).collect() }
    }
}

/// `Φ F`: levelwise restriction of an equivariant functor to fixed subcategories.
pub fn phi_on_functor(
    c: &GCategory,
    d: &GCategory,
    f: &Functor,
    orbit: &Arc<OrbitCategory>,
) -> Result<PresheafMorphism> {
    c.check_equivariant(d, f).map_err(Error::Invalid)?;
    let components = orbit
        .subgroups()
        .iter()
        .map(|h| {
            let (ch, dh) = (c.fixed_subcategory(h), d.fixed_subcategory(h));
            let obj = ch.objects.iter().map(|&x| dh.local_object(f.obj[x])).collect::<Option<Vec<_>>>();
            let mor = ch.morphisms.iter().map(|&m| dh.local_morphism(f.mor[m])).collect::<Option<Vec<_>>>();
            match (obj, mor) {
                (Some(obj), Some(mor)) => Ok(Functor { obj, mor }),
                _ => Err(Error::verification("equivariant functor does not preserve fixed points")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PresheafMorphism { components })
}
