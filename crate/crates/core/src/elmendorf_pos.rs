//! Posetal quotients, the truncated Milnor resolution `M_n`, and the posetal
//! Elmendorf construction `C_pos = M ∘ C_cat`.
//!
//! `M_n P = P × {0, …, n}` with `(x, m) < (y, k)` iff `x ≤ y` and `m < k`.
//! Elements are numbered level by level, `(x, m) ↦ m·|P| + x`, so `M_n P` is
//! an initial segment of `M_{n+1} P`.

use std::sync::Arc;

use serde::Serialize;

use crate::category::{Functor, NatTransformation, Preorder};
use crate::elmendorf_cat::{c_cat, ElmendorfCat, Triple};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::limits;
use crate::orbit::{Marked, OrbitCategory};
use crate::presheaf::{family_presheaf, Flavor, GPreorder, OrbitPresheaf, SubgroupFamily};
use crate::simplicial::nerve_g;

/// A preorder collapsed to its poset of `≤`-equivalence classes.
#[derive(Debug, Clone)]
pub struct PosetalQuotient {
    pub source: GPreorder,
    /// The quotient, with the induced action.
    pub quotient: GPreorder,
    /// Class of each element.
    pub proj: Vec<usize>,
    /// Minimal-index representative of each class.
    pub section: Vec<usize>,
}

pub fn posetal_quotient(p: &GPreorder) -> PosetalQuotient {
    let order = p.order();
    let n = p.len();
    let mut proj = vec![usize::MAX; n];
    let mut section = Vec::new();
    for x in 0..n {
        if proj[x] != usize::MAX {
            continue;
        }
        let class = section.len();
        section.push(x);
        for y in x..n {
            if order.leq(x, y) && order.leq(y, x) {
                proj[y] = class;
            }
        }
    }
    let labels = section.iter().map(|&x| format!("[{}]", order.elements()[x])).collect();
    let leq = section.iter().map(|&x| section.iter().map(|&y| order.leq(x, y)).collect()).collect();
    let qorder = Preorder::new(labels, leq).expect("quotient relation is a preorder");
    let action = p
        .action_table()
        .iter()
        .map(|perm| section.iter().map(|&x| proj[perm[x]]).collect())
        .collect();
    let quotient = GPreorder::new(p.group().clone(), qorder, action).expect("the action descends");
    PosetalQuotient { source: p.clone(), quotient, proj, section }
}

impl PosetalQuotient {
    /// `π ∘ s = id`, `x ≤ s π x ≤ x`, classes are the `≤`-cycles, and the quotient is a poset.
    pub fn check(&self) -> Result<(), String> {
        let order = self.source.order();
        for (c, &x) in self.section.iter().enumerate() {
            if self.proj[x] != c {
                return Err(format!("π ∘ s ≠ id at class {c}"));
            }
        }
        for x in 0..self.source.len() {
            let sx = self.section[self.proj[x]];
            if !(order.leq(x, sx) && order.leq(sx, x)) {
                return Err(format!("zig-zag inequality fails at element {x}"));
            }
            for y in 0..self.source.len() {
                if (self.proj[x] == self.proj[y]) != (order.leq(x, y) && order.leq(y, x)) {
                    return Err(format!("classes of {x} and {y} disagree with the equivalence relation"));
                }
            }
        }
        if !self.quotient.is_poset() {
            return Err("quotient is not antisymmetric".into());
        }
        Ok(())
    }

    /// `π` and `s` as functors, with the transformations `id ⇒ s∘π` and `s∘π ⇒ id`.
    pub fn certificate_data(&self) -> (Functor, Functor, NatTransformation, NatTransformation) {
        let p = self.source.order().to_category();
        let q = self.quotient.order().to_category();
        let monotone = |from: &crate::category::FinCategory, to: &crate::category::FinCategory, map: &[usize]| Functor {
            obj: map.to_vec(),
            mor: from.morphisms().map(|f| to.hom(map[from.src(f)], map[from.tgt(f)])[0]).collect(),
        };
        let pi = monotone(&p, &q, &self.proj);
        let s = monotone(&q, &p, &self.section);
        let sp = s.after(&pi);
        let up = NatTransformation { components: p.objects().map(|x| p.hom(x, sp.obj[x])[0]).collect() };
        let down = NatTransformation { components: p.objects().map(|x| p.hom(sp.obj[x], x)[0]).collect() };
        (pi, s, up, down)
    }
}

/// `M_n P` with its projection to `P`.
#[derive(Debug, Clone)]
pub struct MilnorPoset {
    pub source: GPreorder,
    pub depth: usize,
    pub poset: GPreorder,
}

impl MilnorPoset {
    pub fn element(&self, x: usize, m: usize) -> usize {
        m * self.source.len() + x
    }

    /// `(x, m)` of an element.
    pub fn coords(&self, u: usize) -> (usize, usize) {
        (u % self.source.len(), u / self.source.len())
    }

    /// The first-coordinate projection `π(x, m) = x`.
    pub fn projection(&self) -> Vec<usize> {
        (0..self.poset.len()).map(|u| self.coords(u).0).collect()
    }
}

/// `M_n P`.
pub fn milnor(p: &GPreorder, depth: usize) -> Result<MilnorPoset> {
    let n = p.len();
    let size = n.checked_mul(depth + 1).ok_or_else(|| Error::invalid("depth too large"))?;
    limits::check("elements of M_n P", size, limits::ELEMENTS)?;
    let order = p.order();
    let labels = (0..=depth)
        .flat_map(|m| order.elements().iter().map(move |x| format!("({x}, {m})")))
        .collect();
    let leq = (0..size)
        .map(|u| {
            let (x, m) = (u % n, u / n);
            (0..size)
                .map(|v| {
                    let (y, k) = (v % n, v / n);
                    u == v || (order.leq(x, y) && m < k)
                })
                .collect()
        })
        .collect();
    let porder = Preorder::new(labels, leq).expect("M_n P is a preorder");
    let action = p
        .action_table()
        .iter()
        .map(|perm| (0..size).map(|u| (u / n) * n + perm[u % n]).collect())
        .collect();
    let poset = GPreorder::new(p.group().clone(), porder, action)?;
    Ok(MilnorPoset { source: p.clone(), depth, poset })
}

/// `M f = f × id`.
pub fn milnor_map(f: &[usize], target_len: usize, source_len: usize, depth: usize) -> Vec<usize> {
    (0..source_len * (depth + 1)).map(|u| (u / source_len) * target_len + f[u % source_len]).collect()
}

/// Checks that `f : P → Q` is monotone and equivariant.
pub fn check_equivariant_monotone(p: &GPreorder, q: &GPreorder, f: &[usize]) -> Result<(), String> {
    if f.len() != p.len() || f.iter().any(|&y| y >= q.len()) {
        return Err("map does not match the preorders".into());
    }
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.order().leq(x, y) && !q.order().leq(f[x], f[y]) {
                return Err(format!("not monotone: {x} ≤ {y} but f({x}) ≰ f({y})"));
            }
        }
        for g in p.group().elements() {
            if f[p.act(g, x)] != q.act(g, f[x]) {
                return Err(format!("not equivariant: f({g}·{x}) ≠ {g}·f({x})"));
            }
        }
    }
    Ok(())
}

/// `(M_n P)^H = M_n(P^H)` as posets, matching elements `(x, m)`.
pub fn check_fixed_milnor(m: &MilnorPoset, h: &Subgroup) -> Result<(), String> {
    let (fixed_p, keep) = m.source.fixed(h);
    let sub = GPreorder::new(
        Arc::new(FiniteGroup::from_key("C1").expect("trivial group")),
        fixed_p,
        vec![(0..keep.len()).collect()],
    )
    .map_err(|e| e.to_string())?;
    let m_of_fixed = milnor(&sub, m.depth).map_err(|e| e.to_string())?;
    let fixed_of_m = m.poset.fixed_elements(h);
    let lifted: Vec<usize> = (0..m_of_fixed.poset.len())
        .map(|u| {
            let (i, k) = m_of_fixed.coords(u);
            m.element(keep[i], k)
        })
        .collect();
    let mut sorted = lifted.clone();
    sorted.sort_unstable();
    if sorted != fixed_of_m {
        return Err(format!("(M_n P)^H and M_n(P^H) have different elements for {h}"));
    }
    for (a, &u) in lifted.iter().enumerate() {
        for (b, &v) in lifted.iter().enumerate() {
            if m_of_fixed.poset.order().leq(a, b) != m.poset.order().leq(u, v) {
                return Err(format!("(M_n P)^H and M_n(P^H) order differently for {h}"));
            }
        }
    }
    Ok(())
}

/// `M_n P ⊆ M_{n+1} P` is the full subposet on the first `n + 1` levels.
pub fn check_stability(p: &GPreorder, depth: usize) -> Result<(), String> {
    let small = milnor(p, depth).map_err(|e| e.to_string())?;
    let big = milnor(p, depth + 1).map_err(|e| e.to_string())?;
    for u in 0..small.poset.len() {
        for v in 0..small.poset.len() {
            if small.poset.order().leq(u, v) != big.poset.order().leq(u, v) {
                return Err(format!("M_n P is not a full subposet of M_(n+1) P at ({u}, {v})"));
            }
        }
    }
    Ok(())
}

/// Counts from the retraction argument for `π : M_n P → P`, per element `x`.
#[derive(Debug, Clone, Serialize)]
pub struct RetractionReport {
    pub elements_checked: usize,
    /// Elements of `x ↓ π` on which `s` is defined (below the top level or in `[x]`).
    pub zigzag_points: usize,
    pub bounded_pairs: usize,
}

/// For every `x`, on `x↓π = {(y, m) : x ≤ y}` and `π⁻¹[x]`: `r` is monotone
/// into `π⁻¹[x]` with `r ∘ i = id`; `s` is monotone where defined with
/// `(y, m) ≤ s(y, m) ≥ i r(y, m)`; pairs in `π⁻¹[x]` are bounded above by
/// `(x, max + 1)` whenever that level exists.
pub fn check_retraction(m: &MilnorPoset) -> Result<RetractionReport, String> {
    let p = m.source.order();
    let order = m.poset.order();
    let mut report = RetractionReport { elements_checked: 0, zigzag_points: 0, bounded_pairs: 0 };
    for x in 0..p.len() {
        let in_class = |y: usize| p.leq(x, y) && p.leq(y, x);
        let comma: Vec<usize> = (0..m.poset.len()).filter(|&u| p.leq(x, m.coords(u).0)).collect();
        let fibre: Vec<usize> = comma.iter().copied().filter(|&u| in_class(m.coords(u).0)).collect();
        let r = |u: usize| {
            let (y, k) = m.coords(u);
            if in_class(y) {
                u
            } else {
                m.element(x, k)
            }
        };
        let s = |u: usize| {
            let (y, k) = m.coords(u);
            if in_class(y) {
                Some(u)
            } else if k < m.depth {
                Some(m.element(y, k + 1))
            } else {
                None
            }
        };
        for &u in &fibre {
            if r(u) != u {
                return Err(format!("r ∘ i ≠ id at {u} over {x}"));
            }
        }
        for &u in &comma {
            if !fibre.contains(&r(u)) {
                return Err(format!("r leaves π⁻¹[x] at {u} over {x}"));
            }
            if let Some(su) = s(u) {
                if !(order.leq(u, su) && order.leq(r(u), su)) {
                    return Err(format!("(y,n) ≤ s(y,n) ≥ ir(y,n) fails at {u} over {x}"));
                }
                if !comma.contains(&su) {
                    return Err(format!("s leaves x↓π at {u} over {x}"));
                }
                report.zigzag_points += 1;
            }
            for &v in &comma {
                if order.leq(u, v) && !order.leq(r(u), r(v)) {
                    return Err(format!("r is not monotone on ({u}, {v}) over {x}"));
                }
                if let (Some(su), Some(sv)) = (s(u), s(v)) {
                    if order.leq(u, v) && !order.leq(su, sv) {
                        return Err(format!("s is not monotone on ({u}, {v}) over {x}"));
                    }
                }
            }
        }
        for &u in &fibre {
            for &v in &fibre {
                let top = m.coords(u).1.max(m.coords(v).1) + 1;
                if top <= m.depth {
                    let b = m.element(x, top);
                    if !(order.leq(u, b) && order.leq(v, b)) {
                        return Err(format!("({u}, {v}) is not bounded by ({x}, {top})"));
                    }
                    report.bounded_pairs += 1;
                }
            }
        }
        report.elements_checked += 1;
    }
    Ok(report)
}

/// `C_pos X` computed two ways.
pub struct PosetalElmendorf {
    pub c_cat: ElmendorfCat,
    /// `M_n` of the `G`-preorder `C_cat X`.
    pub composite: MilnorPoset,
    /// The closed-form order on quadruples `(G/H, aH, x, m)`, listed by
    /// subgroup, coset, object, level.
    pub closed_form: GPreorder,
    /// Index in `composite` of each closed-form element.
    pub matching: Vec<usize>,
}

/// `C_pos X = M_n C_cat X`, cross-checked against the closed-form order.
pub fn c_pos(x: &OrbitPresheaf, depth: usize) -> Result<PosetalElmendorf> {
    if x.flavor() != Flavor::Pos {
        return Err(Error::invalid("the posetal construction needs a poset-valued presheaf"));
    }
    let cc = c_cat(x)?;
    let composite = milnor(&cc.to_preorder()?, depth)?;
    let (closed_form, matching) = closed_form(x, &cc, depth)?;
    let n = closed_form.len();
    for u in 0..n {
        for v in 0..n {
            if closed_form.order().leq(u, v) != composite.poset.order().leq(matching[u], matching[v]) {
                return Err(Error::verification(format!(
                    "closed-form order and M ∘ C_cat disagree on elements {u}, {v}"
                )));
            }
        }
        for g in x.group().elements() {
            if matching[closed_form.act(g, u)] != composite.poset.act(g, matching[u]) {
                return Err(Error::verification(format!("actions disagree at element {u}")));
            }
        }
    }
    Ok(PosetalElmendorf { c_cat: cc, composite, closed_form, matching })
}

fn closed_form(x: &OrbitPresheaf, cc: &ElmendorfCat, depth: usize) -> Result<(GPreorder, Vec<usize>)> {
    let orbit: &OrbitCategory = x.orbit();
    let g = x.group();
    let mut quads = Vec::new();
    for h in 0..orbit.subgroups().len() {
        for c in 0..orbit.cosets(h).len() {
            for o in x.value(h).objects() {
                for m in 0..=depth {
                    quads.push((h, c, o, m));
                }
            }
        }
    }
    limits::check("elements of C_pos X", quads.len(), limits::ELEMENTS)?;
    let conj: Vec<Vec<Subgroup>> = (0..orbit.subgroups().len())
        .map(|h| {
            (0..orbit.cosets(h).len())
                .map(|c| g.conjugate_subgroup(orbit.subgroup(h), orbit.cosets(h).rep(c)))
                .collect()
        })
        .collect();
    let less = |&(h, c, xo, m): &(usize, usize, usize, usize), &(k, d, yo, n): &(usize, usize, usize, usize)| {
        if !(m < n && conj[k][d].is_subset_of(&conj[h][c])) {
            return false;
        }
        let (a, b) = (orbit.cosets(h).rep(c), orbit.cosets(k).rep(d));
        // r_{b⁻¹a} : G/K → G/H, eK ↦ b⁻¹aH
        let r = orbit.r(k, h, g.mul(g.inv(b), a)).expect("subconjugacy gives the map");
        x.value(k).hom(x.restriction(r).obj[xo], yo).len() == 1
    };
    let leq = quads.iter().map(|u| quads.iter().map(|v| u == v || less(u, v)).collect()).collect();
    let labels = quads.iter().map(|(h, c, o, m)| format!("({h}, {c}, {o}, {m})")).collect();
    let order = Preorder::new(labels, leq)?;
    let index: std::collections::HashMap<_, _> = quads.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let action = g
        .elements()
        .map(|a| quads.iter().map(|&(h, c, o, m)| index[&(h, orbit.cosets(h).act(a, c), o, m)]).collect())
        .collect();
    let gp = GPreorder::new(g.clone(), order, action)?;
    let objects = cc.objects().len();
    let matching = quads
        .iter()
        .map(|&(h, c, o, m)| {
            let marked = cc.marked().object_index(Marked { subgroup: h, coset: c });
            m * objects + cc.object_index(Triple { marked, x: o }).expect("object of C X")
        })
        .collect();
    Ok((gp, matching))
}

/// Diagnostics showing the posetal quotient loses the equivariant type of `C X_{e}`.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientCounterexample {
    pub group: String,
    pub preorder_size: usize,
    pub quotient_size: usize,
    pub quotient_has_fixed_point: bool,
    pub quotient_action_trivial: bool,
    pub nerve_dim: usize,
    pub nondegenerate_counts: Vec<usize>,
    pub action_free_on_nondegenerate: bool,
    pub milnor_depth: usize,
    pub milnor_fixed_points: usize,
}

impl QuotientCounterexample {
    pub fn witnessed(&self) -> bool {
        self.quotient_size == 1
            && self.quotient_has_fixed_point
            && self.quotient_action_trivial
            && self.action_free_on_nondegenerate
            && self.milnor_fixed_points == 0
    }
}

pub fn quotient_counterexample_report(
    orbit: &Arc<OrbitCategory>,
    dim: usize,
    depth: usize,
) -> Result<QuotientCounterexample> {
    let g = orbit.group();
    if g.order() < 2 {
        return Err(Error::invalid("the counterexample needs a nontrivial group"));
    }
    let x = family_presheaf(orbit, &SubgroupFamily::trivial(orbit))?;
    let cc = c_cat(&x)?;
    let p = cc.to_preorder()?;
    let q = posetal_quotient(&p);
    let whole = g.whole();
    let n = nerve_g(cc.gcategory(), dim)?;
    let m = milnor(&p, depth)?;
    Ok(QuotientCounterexample {
        group: g.name().to_string(),
        preorder_size: p.len(),
        quotient_size: q.quotient.len(),
        quotient_has_fixed_point: !q.quotient.fixed_elements(&whole).is_empty(),
        quotient_action_trivial: q.quotient.action_table().iter().all(|perm| perm.iter().enumerate().all(|(i, &j)| i == j)),
        nerve_dim: dim,
        nondegenerate_counts: n.nondegenerate_counts(),
        action_free_on_nondegenerate: n.action_is_free_on_nondegenerate()?,
        milnor_depth: depth,
        milnor_fixed_points: m.poset.fixed_elements(&whole).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::OrbitPresheaf;

    fn orbit(key: &str) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(FiniteGroup::from_key(key).unwrap())).unwrap())
    }

    fn trivial_action(p: Preorder) -> GPreorder {
        let g = Arc::new(FiniteGroup::from_key("C1").unwrap());
        let n = p.len();
        GPreorder::new(g, p, vec![(0..n).collect()]).unwrap()
    }

    fn free_c2() -> GPreorder {
        let o = orbit("C2");
        let x = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
        c_cat(&x).unwrap().to_preorder().unwrap()
    }

    #[test]
    fn quotients() {
        let chain = trivial_action(Preorder::chain(3));
        let q = posetal_quotient(&chain);
        assert_eq!(q.proj, vec![0, 1, 2]);
        assert_eq!(q.section, vec![0, 1, 2]);
        q.check().unwrap();

        let q = posetal_quotient(&free_c2());
        assert_eq!(q.quotient.len(), 1);
        q.check().unwrap();

        // {0,1} < {2,3}
        let p = Preorder::from_fn(4, |a, b| a / 2 <= b / 2).unwrap();
        let q = posetal_quotient(&trivial_action(p));
        assert_eq!(q.quotient.len(), 2);
        assert!(q.quotient.order().leq(0, 1) && !q.quotient.order().leq(1, 0));
        q.check().unwrap();
    }

    #[test]
    fn milnor_examples() {
        let p = free_c2();
        let m0 = milnor(&p, 0).unwrap();
        assert_eq!(m0.poset.len(), 2);
        assert!(m0.poset.order().matrix().iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &b)| b == (i == j))));
        let m1 = milnor(&p, 1).unwrap();
        assert_eq!(m1.poset.len(), 4);
        let strict: usize = (0..4).map(|u| (0..4).filter(|&v| u != v && m1.poset.order().leq(u, v)).count()).sum();
        assert_eq!(strict, 4);
        assert!(m1.poset.is_poset());
        let pi = m1.projection();
        check_equivariant_monotone(&m1.poset, &p, &pi).unwrap();
        let m2 = milnor(&p, 2).unwrap();
        assert!(m2.poset.fixed_elements(&p.group().whole()).is_empty());
    }

    #[test]
    fn milnor_fixed_points_and_retractions() {
        for key in ["C2", "C4", "S3"] {
            let o = orbit(key);
            for fam in SubgroupFamily::enumerate(&o) {
                let p = c_cat(&family_presheaf(&o, &fam).unwrap()).unwrap().to_preorder().unwrap();
                for depth in 0..=2 {
                    let m = milnor(&p, depth).unwrap();
                    assert!(m.poset.is_poset());
                    for h in o.subgroups() {
                        check_fixed_milnor(&m, h).unwrap();
                    }
                    check_retraction(&m).unwrap();
                    check_stability(&p, depth).unwrap();
                }
            }
        }
    }

    #[test]
    fn milnor_naturality() {
        // the unique map C X_{e} → C X_{all} on C2
        let o = orbit("C2");
        let e = c_cat(&family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap()).unwrap();
        let all = c_cat(&family_presheaf(&o, &SubgroupFamily::all(&o)).unwrap()).unwrap();
        let f: Vec<usize> = e.objects().iter().map(|&t| all.object_index(t).unwrap()).collect();
        let (pe, pall) = (e.to_preorder().unwrap(), all.to_preorder().unwrap());
        check_equivariant_monotone(&pe, &pall, &f).unwrap();
        for depth in 0..=2 {
            let (me, mall) = (milnor(&pe, depth).unwrap(), milnor(&pall, depth).unwrap());
            let mf = milnor_map(&f, pall.len(), pe.len(), depth);
            check_equivariant_monotone(&me.poset, &mall.poset, &mf).unwrap();
            let (pie, piall) = (me.projection(), mall.projection());
            for u in 0..me.poset.len() {
                assert_eq!(piall[mf[u]], f[pie[u]]);
            }
        }
    }

    #[test]
    fn c_pos_two_ways() {
        for key in ["C2", "C3", "S3"] {
            let o = orbit(key);
            for fam in SubgroupFamily::enumerate(&o) {
                let x = family_presheaf(&o, &fam).unwrap();
                for depth in 0..=2 {
                    let c = c_pos(&x, depth).unwrap();
                    assert!(c.composite.poset.is_poset());
                }
            }
            let chain = OrbitPresheaf::constant(o.clone(), "chain", Preorder::chain(2).to_category());
            c_pos(&chain, 1).unwrap();
        }
        let o = orbit("C2");
        let x = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
        let c = c_pos(&x, 1).unwrap();
        assert_eq!(c.closed_form.len(), 4);
        assert!(c.closed_form.fixed_elements(&o.group().whole()).is_empty());
    }

    #[test]
    fn counterexample_on_c2() {
        let r = quotient_counterexample_report(&orbit("C2"), 4, 2).unwrap();
        assert!(r.witnessed(), "{r:?}");
        assert_eq!(r.nondegenerate_counts, vec![2, 2, 2, 2, 2]);
        assert!(quotient_counterexample_report(&orbit("C1"), 2, 1).is_err());
    }
}
