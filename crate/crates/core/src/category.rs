//! Finite categories with explicit composition tables, functors, natural
//! transformations, and preorders viewed as thin categories.
//!
//! Objects and morphisms are dense indices. Every listing of morphisms is
//! sorted by index, so all derived data is deterministic.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;

pub type Obj = usize;
pub type Mor = usize;

/// A finite category.
///
/// Composition is stored as a table indexed by the first morphism `f` and the
/// position of the second morphism `g` among the morphisms leaving `tgt(f)`,
/// so `g ∘ f` is a constant-time lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    labels: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identities: Vec<Mor>,
    out: Vec<Vec<Mor>>,
    out_pos: Vec<usize>,
    table: Vec<Vec<Mor>>,
}

/// The first categorical law found to fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    IdentityEndpoints { object: Obj },
    LeftUnit { morphism: Mor },
    RightUnit { morphism: Mor },
    CompositeEndpoints { g: Mor, f: Mor },
    Associativity { h: Mor, g: Mor, f: Mor },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::IdentityEndpoints { object } => {
                write!(f, "identity of object {object} is not an endomorphism of it")
            }
            LawViolation::LeftUnit { morphism } => write!(f, "id ∘ {morphism} ≠ {morphism}"),
            LawViolation::RightUnit { morphism } => write!(f, "{morphism} ∘ id ≠ {morphism}"),
            LawViolation::CompositeEndpoints { g, f: ff } => {
                write!(f, "composite {g} ∘ {ff} has wrong endpoints")
            }
            LawViolation::Associativity { h, g, f: ff } => {
                write!(f, "associativity fails on triple ({h}, {g}, {ff})")
            }
        }
    }
}

impl FinCategory {
    /// Builds a category from its morphism list and a composition function.
    ///
    /// `compose(g, f)` is only called on composable pairs (`tgt(f) = src(g)`).
    pub fn build(
        labels: Vec<String>,
        morphisms: Vec<(Obj, Obj)>,
        identities: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Result<Mor>,
    ) -> Result<Self> {
        let n = labels.len();
        let m = morphisms.len();
        limits::check("morphisms in a category", m, limits::MORPHISMS)?;
        if identities.len() != n {
            return Err(Error::invalid("one identity is required per object"));
        }
        if let Some(&(s, t)) = morphisms.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(Error::invalid(format!("morphism endpoint ({s}, {t}) out of range")));
        }
        if identities.iter().any(|&i| i >= m) {
            return Err(Error::invalid("identity index out of range"));
        }
        let (src, tgt): (Vec<Obj>, Vec<Obj>) = morphisms.into_iter().unzip();
        let mut out = vec![Vec::new(); n];
        let mut out_pos = vec![0; m];
        for f in 0..m {
            out_pos[f] = out[src[f]].len();
            out[src[f]].push(f);
        }
        let mut table = Vec::with_capacity(m);
        for f in 0..m {
            let mut row = Vec::with_capacity(out[tgt[f]].len());
            for &g in &out[tgt[f]] {
                let gf = compose(g, f)?;
                if gf >= m {
                    return Err(Error::invalid(format!("composite {g} ∘ {f} out of range")));
                }
                row.push(gf);
            }
            table.push(row);
        }
        Ok(FinCategory { labels, src, tgt, identities, out, out_pos, table })
    }

    /// Builds a category from explicit `(g, f, g∘f)` triples, which must cover
    /// exactly the composable pairs.
    pub fn from_triples(
        labels: Vec<String>,
        morphisms: Vec<(Obj, Obj)>,
        identities: Vec<Mor>,
        triples: &[(Mor, Mor, Mor)],
    ) -> Result<Self> {
        let mut map = HashMap::new();
        for &(g, f, gf) in triples {
            let (Some(&(sg, _)), Some(&(_, tf))) = (morphisms.get(g), morphisms.get(f)) else {
                return Err(Error::invalid(format!("triple ({g}, {f}, {gf}) out of range")));
            };
            if sg != tf {
                return Err(Error::invalid(format!("composite given for non-composable pair ({g}, {f})")));
            }
            if map.insert((g, f), gf).is_some() {
                return Err(Error::invalid(format!("composite of ({g}, {f}) given twice")));
            }
        }
        Self::build(labels, morphisms, identities, |g, f| {
            map.get(&(g, f))
                .copied()
                .ok_or_else(|| Error::invalid(format!("missing composite for ({g}, {f})")))
        })
    }

    /// The category with no objects.
    pub fn empty() -> Self {
        Self::build(Vec::new(), Vec::new(), Vec::new(), |_, _| unreachable!()).unwrap()
    }

    /// One object, one morphism.
    pub fn terminal() -> Self {
        Self::build(vec!["*".into()], vec![(0, 0)], vec![0], |_, _| Ok(0)).unwrap()
    }

    /// A one-object category whose morphisms are the elements of a group.
    pub fn delooping(group: &crate::group::FiniteGroup) -> Self {
        let n = group.order();
        Self::build(vec!["*".into()], vec![(0, 0); n], vec![0], |g, f| Ok(group.mul(g, f))).unwrap()
    }

    pub fn num_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.num_objects()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.num_morphisms()
    }

    pub fn label(&self, x: Obj) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn src(&self, f: Mor) -> Obj {
        self.src[f]
    }

    #[inline]
    pub fn tgt(&self, f: Mor) -> Obj {
        self.tgt[f]
    }

    #[inline]
    pub fn id(&self, x: Obj) -> Mor {
        self.identities[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identities[self.src[f]] == f
    }

    /// Morphisms with source `x`, sorted by index.
    pub fn out_of(&self, x: Obj) -> &[Mor] {
        &self.out[x]
    }

    /// `hom(x, y)`, sorted by index.
    pub fn hom(&self, x: Obj, y: Obj) -> Vec<Mor> {
        self.out[x].iter().copied().filter(|&f| self.tgt[f] == y).collect()
    }

    /// `g ∘ f`, or `None` when `tgt(f) ≠ src(g)`.
    #[inline]
    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.tgt[f] == self.src[g]).then(|| self.table[f][self.out_pos[g]])
    }

    /// `g ∘ f`; panics on a non-composable pair.
    #[inline]
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    /// Whether every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.objects().all(|x| {
            let mut targets: Vec<Obj> = self.out[x].iter().map(|&f| self.tgt[f]).collect();
            targets.sort_unstable();
            targets.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Checks identities, units, composite endpoints and associativity exhaustively.
    pub fn validate(&self) -> Result<(), LawViolation> {
        for x in self.objects() {
            let i = self.identities[x];
            if self.src[i] != x || self.tgt[i] != x {
                return Err(LawViolation::IdentityEndpoints { object: x });
            }
        }
        for f in self.morphisms() {
            if self.compose(self.id(self.tgt[f]), f) != f {
                return Err(LawViolation::LeftUnit { morphism: f });
            }
            if self.compose(f, self.id(self.src[f])) != f {
                return Err(LawViolation::RightUnit { morphism: f });
            }
            for &g in &self.out[self.tgt[f]] {
                let gf = self.compose(g, f);
                if self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] {
                    return Err(LawViolation::CompositeEndpoints { g, f });
                }
            }
        }
        for f in self.morphisms() {
            for &g in &self.out[self.tgt[f]] {
                let gf = self.compose(g, f);
                for &h in &self.out[self.tgt[g]] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(LawViolation::Associativity { h, g, f });
                    }
                }
            }
        }
        Ok(())
    }

    /// The opposite category, with the same object and morphism indices.
    pub fn opposite(&self) -> FinCategory {
        let morphisms = self.morphisms().map(|f| (self.tgt[f], self.src[f])).collect();
        FinCategory::build(self.labels.clone(), morphisms, self.identities.clone(), |g, f| {
            Ok(self.compose(f, g))
        })
        .expect("opposite of a valid category is buildable")
    }

    /// Subcategory on the given objects and morphisms (both listed in parent indices).
    ///
    /// The caller guarantees closure under identities and composition; a
    /// violation is reported as an error.
    pub fn subcategory(&self, objects: &[Obj], morphisms: &[Mor]) -> Result<Subcategory> {
        let mut obj_local = vec![usize::MAX; self.num_objects()];
        for (i, &x) in objects.iter().enumerate() {
            obj_local[x] = i;
        }
        let mut mor_local = vec![usize::MAX; self.num_morphisms()];
        for (i, &f) in morphisms.iter().enumerate() {
            mor_local[f] = i;
        }
        let labels = objects.iter().map(|&x| self.labels[x].clone()).collect();
        let mut local = Vec::with_capacity(morphisms.len());
        for &f in morphisms {
            let (s, t) = (obj_local[self.src[f]], obj_local[self.tgt[f]]);
            if s == usize::MAX || t == usize::MAX {
                return Err(Error::invalid(format!("morphism {f} leaves the chosen objects")));
            }
            local.push((s, t));
        }
        let mut identities = Vec::with_capacity(objects.len());
        for &x in objects {
            let i = mor_local[self.id(x)];
            if i == usize::MAX {
                return Err(Error::invalid(format!("identity of object {x} is missing")));
            }
            identities.push(i);
        }
        let category = FinCategory::build(labels, local, identities, |g, f| {
            let gf = self.compose(morphisms[g], morphisms[f]);
            match mor_local[gf] {
                usize::MAX => Err(Error::invalid(format!("composite {gf} is not in the subcategory"))),
                i => Ok(i),
            }
        })?;
        Ok(Subcategory {
            category,
            objects: objects.to_vec(),
            morphisms: morphisms.to_vec(),
            obj_local,
            mor_local,
        })
    }

    /// Full subcategory on `objects` (parent indices, in the given order).
    pub fn full_subcategory(&self, objects: &[Obj]) -> Subcategory {
        let mut keep = vec![false; self.num_objects()];
        for &x in objects {
            keep[x] = true;
        }
        let morphisms: Vec<Mor> = self
            .morphisms()
            .filter(|&f| keep[self.src[f]] && keep[self.tgt[f]])
            .collect();
        self.subcategory(objects, &morphisms).expect("full subcategories are closed")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut triples = Vec::new();
        for f in self.morphisms() {
            for &g in &self.out[self.tgt[f]] {
                triples.push([g, f, self.compose(g, f)]);
            }
        }
        serde_json::to_value(CategoryJson {
            objects: self.labels.clone(),
            morphisms: self
                .morphisms()
                .map(|f| MorphismJson { id: f, src: self.src[f], tgt: self.tgt[f] })
                .collect(),
            identities: self.identities.clone(),
            composition: triples,
        })
        .expect("category JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CategoryJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("category JSON: {e}")))?;
        if raw.morphisms.iter().enumerate().any(|(i, m)| m.id != i) {
            return Err(Error::invalid("morphism ids must be dense and listed in order"));
        }
        let morphisms = raw.morphisms.iter().map(|m| (m.src, m.tgt)).collect();
        let triples: Vec<_> = raw.composition.iter().map(|t| (t[0], t[1], t[2])).collect();
        let c = Self::from_triples(raw.objects, morphisms, raw.identities, &triples)?;
        c.validate().map_err(|v| Error::invalid(v.to_string()))?;
        Ok(c)
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    id: Mor,
    src: Obj,
    tgt: Obj,
}

#[derive(Serialize, Deserialize)]
struct CategoryJson {
    objects: Vec<String>,
    morphisms: Vec<MorphismJson>,
    identities: Vec<Mor>,
    composition: Vec<[Mor; 3]>,
}

/// A subcategory together with its embedding into the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcategory {
    pub category: FinCategory,
    /// Parent index of each local object.
    pub objects: Vec<Obj>,
    /// Parent index of each local morphism.
    pub morphisms: Vec<Mor>,
    obj_local: Vec<usize>,
    mor_local: Vec<usize>,
}

impl Subcategory {
    pub fn local_object(&self, parent: Obj) -> Option<Obj> {
        self.obj_local.get(parent).copied().filter(|&i| i != usize::MAX)
    }

    pub fn local_morphism(&self, parent: Mor) -> Option<Mor> {
        self.mor_local.get(parent).copied().filter(|&i| i != usize::MAX)
    }

    /// The inclusion as a functor into the parent.
    pub fn inclusion(&self) -> Functor {
        Functor { obj: self.objects.clone(), mor: self.morphisms.clone() }
    }
}

/// A functor between finite categories, stored as object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Functor {
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl Functor {
    pub fn identity(c: &FinCategory) -> Self {
        Functor { obj: c.objects().collect(), mor: c.morphisms().collect() }
    }

    /// The unique functor into a terminal category.
    pub fn to_terminal(c: &FinCategory) -> Self {
        Functor { obj: vec![0; c.num_objects()], mor: vec![0; c.num_morphisms()] }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Functor) -> Functor {
        Functor {
            obj: first.obj.iter().map(|&x| self.obj[x]).collect(),
            mor: first.mor.iter().map(|&f| self.mor[f]).collect(),
        }
    }

    /// Checks sizes, endpoints, identities and composition.
    pub fn validate(&self, source: &FinCategory, target: &FinCategory) -> Result<(), String> {
        if self.obj.len() != source.num_objects() || self.mor.len() != source.num_morphisms() {
            return Err("functor maps do not match the source category".into());
        }
        if let Some(&x) = self.obj.iter().find(|&&x| x >= target.num_objects()) {
            return Err(format!("object image {x} is not in the target"));
        }
        if let Some(&f) = self.mor.iter().find(|&&f| f >= target.num_morphisms()) {
            return Err(format!("morphism image {f} is not in the target"));
        }
        for f in source.morphisms() {
            let ff = self.mor[f];
            if target.src(ff) != self.obj[source.src(f)] || target.tgt(ff) != self.obj[source.tgt(f)] {
                return Err(format!("morphism {f} is sent to {ff} with the wrong endpoints"));
            }
        }
        for x in source.objects() {
            if self.mor[source.id(x)] != target.id(self.obj[x]) {
                return Err(format!("identity of object {x} is not preserved"));
            }
        }
        for f in source.morphisms() {
            for &g in source.out_of(source.tgt(f)) {
                if self.mor[source.compose(g, f)] != target.compose(self.mor[g], self.mor[f]) {
                    return Err(format!("composite {g} ∘ {f} is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// Whether object and morphism maps are bijections (given matching sizes).
    pub fn is_bijective(&self, target: &FinCategory) -> bool {
        fn perm(v: &[usize], n: usize) -> bool {
            let mut seen = vec![false; n];
            v.len() == n && v.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
        }
        perm(&self.obj, target.num_objects()) && perm(&self.mor, target.num_morphisms())
    }
}

/// A natural transformation, stored as its components indexed by source object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatTransformation {
    pub components: Vec<Mor>,
}

/// A failed naturality square `H(f) ∘ α_x = α_y ∘ F(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NaturalityViolation {
    Size,
    ComponentEndpoints { object: Obj },
    Square { morphism: Mor },
}

impl fmt::Display for NaturalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NaturalityViolation::Size => write!(f, "wrong number of components"),
            NaturalityViolation::ComponentEndpoints { object } => {
                write!(f, "component at object {object} has the wrong endpoints")
            }
            NaturalityViolation::Square { morphism } => {
                write!(f, "naturality square at morphism {morphism} does not commute")
            }
        }
    }
}

impl NatTransformation {
    pub fn identity(f: &Functor, target: &FinCategory) -> Self {
        NatTransformation { components: f.obj.iter().map(|&x| target.id(x)).collect() }
    }

    /// Checks that the components form a natural transformation `from ⇒ to`
    /// between functors `source → target`.
    pub fn validate(
        &self,
        source: &FinCategory,
        target: &FinCategory,
        from: &Functor,
        to: &Functor,
    ) -> Result<(), NaturalityViolation> {
        if self.components.len() != source.num_objects() {
            return Err(NaturalityViolation::Size);
        }
        for x in source.objects() {
            let a = self.components[x];
            if a >= target.num_morphisms() || target.src(a) != from.obj[x] || target.tgt(a) != to.obj[x] {
                return Err(NaturalityViolation::ComponentEndpoints { object: x });
            }
        }
        for f in source.morphisms() {
            let (x, y) = (source.src(f), source.tgt(f));
            let left = target.compose(to.mor[f], self.components[x]);
            let right = target.compose(self.components[y], from.mor[f]);
            if left != right {
                return Err(NaturalityViolation::Square { morphism: f });
            }
        }
        Ok(())
    }

    /// `self · first` (vertical composite): components `self_x ∘ first_x`.
    pub fn vertical_after(&self, first: &NatTransformation, target: &FinCategory) -> Self {
        NatTransformation {
            components: first
                .components
                .iter()
                .zip(&self.components)
                .map(|(&a, &b)| target.compose(b, a))
                .collect(),
        }
    }

    /// Precomposition with a functor `k`: components `α_{k(x)}`.
    pub fn whisker_left(&self, k: &Functor) -> Self {
        NatTransformation { components: k.obj.iter().map(|&x| self.components[x]).collect() }
    }

    /// Postcomposition with a functor `l`: components `l(α_x)`.
    pub fn whisker_right(&self, l: &Functor) -> Self {
        NatTransformation { components: self.components.iter().map(|&a| l.mor[a]).collect() }
    }
}

/// A preorder given by its relation matrix: `leq[x][y]` iff `x ≤ y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Preorder {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Preorder {
    /// Validates reflexivity and transitivity.
    pub fn new(elements: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = elements.len();
        limits::check("preorder elements", n, limits::ELEMENTS)?;
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("relation matrix must be square and match the element list"));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(Error::invalid(format!("relation is not reflexive at {x}")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if leq[x][y] {
                    for z in 0..n {
                        if leq[y][z] && !leq[x][z] {
                            return Err(Error::invalid(format!(
                                "relation is not transitive on ({x}, {y}, {z})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Preorder { elements, leq })
    }

    /// Builds a preorder from a relation function, labelling elements by index.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let m = (0..n).map(|x| (0..n).map(|y| leq(x, y)).collect()).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), m)
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_fn(n, |x, y| x == y).unwrap()
    }

    /// Every element below every other.
    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| true).unwrap()
    }

    /// `0 < 1 < ⋯ < n-1`
    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |x, y| x <= y).unwrap()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len()).all(|x| (0..x).all(|y| !(self.leq[x][y] && self.leq[y][x])))
    }

    /// The thin category with one morphism `x → y` iff `x ≤ y`.
    ///
    /// Morphisms are numbered in row-major order of the relation matrix.
    pub fn to_category(&self) -> FinCategory {
        let n = self.len();
        let mut index = vec![vec![usize::MAX; n]; n];
        let mut morphisms = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.leq[x][y] {
                    index[x][y] = morphisms.len();
                    morphisms.push((x, y));
                }
            }
        }
        let identities = (0..n).map(|x| index[x][x]).collect();
        let mors = morphisms.clone();
        FinCategory::build(self.elements.clone(), morphisms, identities, |g, f| {
            Ok(index[mors[f].0][mors[g].1])
        })
        .expect("preorder categories are buildable")
    }

    /// Recovers the preorder of a thin category.
    pub fn from_category(c: &FinCategory) -> Result<Self> {
        if !c.is_thin() {
            return Err(Error::invalid("not thin: some hom-set has two or more morphisms"));
        }
        let n = c.num_objects();
        let mut leq = vec![vec![false; n]; n];
        for f in c.morphisms() {
            leq[c.src(f)][c.tgt(f)] = true;
        }
        Self::new(c.labels().to_vec(), leq)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "elements": self.elements, "leq": self.leq })
    }
}

/// An antisymmetric preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset(Preorder);

impl Poset {
    pub fn new(order: Preorder) -> Result<Self> {
        if order.is_antisymmetric() {
            Ok(Poset(order))
        } else {
            Err(Error::invalid("relation is not antisymmetric"))
        }
    }

    pub fn as_preorder(&self) -> &Preorder {
        &self.0
    }

    pub fn into_preorder(self) -> Preorder {
        self.0
    }
}

/// `preorder_to_cat`
pub fn preorder_to_cat(p: &Preorder) -> FinCategory {
    p.to_category()
}

/// `cat_to_preorder`; fails on categories that are not thin.
pub fn cat_to_preorder(c: &FinCategory) -> Result<Preorder> {
    Preorder::from_category(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Two objects and two parallel arrows a, b : 0 → 1.
    fn parallel_pair() -> FinCategory {
        FinCategory::from_triples(
            vec!["0".into(), "1".into()],
            vec![(0, 0), (1, 1), (0, 1), (0, 1)],
            vec![0, 1],
            &[(0, 0, 0), (1, 1, 1), (2, 0, 2), (3, 0, 3), (1, 2, 2), (1, 3, 3)],
        )
        .unwrap()
    }

    #[test]
    fn terminal_is_valid() {
        let t = FinCategory::terminal();
        assert!(t.validate().is_ok());
        assert_eq!(t.num_morphisms(), 1);
        assert!(FinCategory::empty().validate().is_ok());
    }

    #[test]
    fn broken_associativity_is_named() {
        // Z/2 acting as a one-object category, but with the table of a
        // non-associative loop on three morphisms.
        let triples = [
            (0, 0, 0), (0, 1, 1), (0, 2, 2),
            (1, 0, 1), (1, 1, 2), (1, 2, 2),
            (2, 0, 2), (2, 1, 0), (2, 2, 1),
        ];
        let c = FinCategory::from_triples(vec!["*".into()], vec![(0, 0); 3], vec![0], &triples).unwrap();
        match c.validate() {
            Err(LawViolation::Associativity { h, g, f }) => {
                assert_ne!(
                    c.compose(h, c.compose(g, f)),
                    c.compose(c.compose(h, g), f)
                );
            }
            other => panic!("expected an associativity violation, got {other:?}"),
        }
    }

    #[test]
    fn from_triples_requires_exact_coverage() {
        let missing = FinCategory::from_triples(vec!["*".into()], vec![(0, 0)], vec![0], &[]);
        assert!(missing.is_err());
        let extra = FinCategory::from_triples(
            vec!["0".into(), "1".into()],
            vec![(0, 0), (1, 1)],
            vec![0, 1],
            &[(0, 0, 0), (1, 1, 1), (0, 1, 0)],
        );
        assert!(extra.is_err());
    }

    #[test]
    fn preorder_categories() {
        let d = Preorder::discrete(3).to_category();
        assert_eq!((d.num_objects(), d.num_morphisms()), (3, 3));
        let c = Preorder::chain(2).to_category();
        assert_eq!((c.num_objects(), c.num_morphisms()), (2, 3));
        let k = Preorder::complete(2).to_category();
        assert_eq!((k.num_objects(), k.num_morphisms()), (2, 4));
        for cat in [d, c, k] {
            assert!(cat.validate().is_ok());
            assert!(cat.is_thin());
        }
    }

    #[test]
    fn cat_to_preorder_cases() {
        let t = cat_to_preorder(&FinCategory::terminal()).unwrap();
        assert_eq!(t.len(), 1);
        let err = cat_to_preorder(&parallel_pair()).unwrap_err();
        assert!(err.to_string().contains("not thin"));
    }

    #[test]
    fn functor_laws() {
        let c = Preorder::chain(3).to_category();
        let id = Functor::identity(&c);
        assert!(id.validate(&c, &c).is_ok());
        let f = Functor::to_terminal(&c);
        assert!(f.validate(&c, &FinCategory::terminal()).is_ok());
        assert_eq!(f.after(&id), f);
        assert_eq!(id.after(&id), id);
        let mut bad = id.clone();
        bad.obj.swap(0, 2);
        assert!(bad.validate(&c, &c).is_err());
    }

    #[test]
    fn identity_transformations_compose() {
        let c = Preorder::chain(3).to_category();
        let id = Functor::identity(&c);
        let one = NatTransformation::identity(&id, &c);
        assert!(one.validate(&c, &c, &id, &id).is_ok());
        assert_eq!(one.vertical_after(&one, &c), one);
    }

    #[test]
    fn naturality_mutation_is_rejected() {
        // Conjugation by g on the delooping of S3 is naturally isomorphic to
        // the identity via the component g; any other component fails.
        let s3 = crate::group::FiniteGroup::from_key("S3").unwrap();
        let b = FinCategory::delooping(&s3);
        let id = Functor::identity(&b);
        let g = s3.element("(123)").unwrap();
        let conj = Functor { obj: vec![0], mor: s3.elements().map(|h| s3.conjugate(g, h)).collect() };
        assert!(conj.validate(&b, &b).is_ok());
        let alpha = NatTransformation { components: vec![g] };
        assert!(alpha.validate(&b, &b, &id, &conj).is_ok());
        let flipped = NatTransformation { components: vec![s3.element("(12)").unwrap()] };
        assert!(matches!(
            flipped.validate(&b, &b, &id, &conj),
            Err(NaturalityViolation::Square { .. })
        ));
    }

    #[test]
    fn opposite_is_valid() {
        let c = parallel_pair().opposite();
        assert!(c.validate().is_ok());
        assert_eq!(c.hom(1, 0).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let c = parallel_pair();
        let back = FinCategory::from_json(&c.to_json().to_string()).unwrap();
        assert_eq!(back, c);
    }

    fn arb_preorder() -> impl Strategy<Value = Preorder> {
        (1usize..6).prop_flat_map(arb_preorder_on)
    }

    fn arb_preorder_on(n: usize) -> impl Strategy<Value = Preorder> {
        {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                // transitive reflexive closure of a random relation
                let mut m: Vec<Vec<bool>> =
                    (0..n).map(|x| (0..n).map(|y| x == y || bits[x * n + y]).collect()).collect();
                for k in 0..n {
                    for x in 0..n {
                        for y in 0..n {
                            if m[x][k] && m[k][y] {
                                m[x][y] = true;
                            }
                        }
                    }
                }
                Preorder::new((0..n).map(|i| i.to_string()).collect(), m).unwrap()
            })
        }
    }

    /// Order-preserving self-maps of `p`.
    fn monotone_maps(p: &Preorder) -> Vec<Vec<usize>> {
        let n = p.len();
        let mut out = Vec::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let map: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            if (0..n).all(|x| (0..n).all(|y| !p.leq(x, y) || p.leq(map[x], map[y]))) {
                out.push(map);
            }
        }
        out
    }

    fn functor_of(c: &FinCategory, map: &[usize]) -> Functor {
        let f = Functor {
            obj: map.to_vec(),
            mor: c.morphisms().map(|f| c.hom(map[c.src(f)], map[c.tgt(f)])[0]).collect(),
        };
        assert!(f.validate(c, c).is_ok());
        f
    }

    proptest! {
        #[test]
        fn preorder_round_trip(p in arb_preorder()) {
            let c = preorder_to_cat(&p);
            prop_assert!(c.validate().is_ok());
            prop_assert_eq!(cat_to_preorder(&c).unwrap(), p);
            prop_assert_eq!(preorder_to_cat(&cat_to_preorder(&c).unwrap()), c);
        }

        #[test]
        fn interchange_law(p in arb_preorder_on(3), picks in proptest::array::uniform4(any::<prop::sample::Index>())) {
            let c = p.to_category();
            let maps = monotone_maps(&p);
            let pointwise = |a: &[usize], b: &[usize]| (0..3).all(|x| p.leq(a[x], b[x]));
            // pick F ⇒ H in the first slot and K ⇒ L in the second
            let above = |a: &Vec<usize>| maps.iter().filter(|b| pointwise(a, b)).cloned().collect::<Vec<_>>();
            let f = picks[0].get(&maps).clone();
            let h = picks[1].get(&above(&f)).clone();
            let k = picks[2].get(&maps).clone();
            let l = picks[3].get(&above(&k)).clone();
            let (ff, hh, kk, ll) = (functor_of(&c, &f), functor_of(&c, &h), functor_of(&c, &k), functor_of(&c, &l));
            let alpha = NatTransformation { components: (0..3).map(|x| c.hom(f[x], h[x])[0]).collect() };
            let beta = NatTransformation { components: (0..3).map(|x| c.hom(k[x], l[x])[0]).collect() };
            prop_assert!(alpha.validate(&c, &c, &ff, &hh).is_ok());
            prop_assert!(beta.validate(&c, &c, &kk, &ll).is_ok());
            // horizontal composite β * α two ways: (βH)·(Kα) and (Lα)·(βF)
            let one = beta.whisker_left(&hh).vertical_after(&alpha.whisker_right(&kk), &c);
            let two = alpha.whisker_right(&ll).vertical_after(&beta.whisker_left(&ff), &c);
            prop_assert_eq!(&one, &two);
            prop_assert!(one.validate(&c, &c, &kk.after(&ff), &ll.after(&hh)).is_ok());
        }
    }
}
