//! Truncated simplicial sets: nerves, fixed points, the Bousfield–Kan diagonal
//! of `X ∘ p` over `O_{G,+}^op`, Thomason's map, and the bar-simplex reindexing.
//!
//! Nerves use the left-pointing convention: a `q`-simplex is a chain
//! `x_0 ← x_1 ← ⋯ ← x_q`, keyed by its morphisms `[h_1, …, h_q]` with
//! `h_i : x_i → x_{i-1}` (or `[x_0]` when `q = 0`).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::category::{FinCategory, Functor, Obj};
use crate::elmendorf_cat::{grothendieck, ElmendorfCat, Triple};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, IDENTITY};
use crate::limits;
use crate::orbit::MarkedOrbitCategory;
use crate::presheaf::{GCategory, OrbitPresheaf};

pub type Key = Vec<u32>;

/// A simplicial set stored in degrees `0..=dim` with explicit index tables.
#[derive(Debug, Clone)]
pub struct TruncatedSSet {
    dim: usize,
    simplices: Vec<Vec<Key>>,
    index: Vec<HashMap<Key, u32>>,
    /// `faces[q][i][s]` for `q ≥ 1`.
    faces: Vec<Vec<Vec<u32>>>,
    /// `degens[q][i][s]` for `q < dim`, landing in degree `q + 1`.
    degens: Vec<Vec<Vec<u32>>>,
    nondegenerate: Vec<Vec<bool>>,
    /// `action[q][g][s]`.
    action: Option<Vec<Vec<Vec<u32>>>>,
}

/// Face, degeneracy and action rules on simplex keys.
pub trait SimplicialRules {
    fn face(&self, q: usize, i: usize, key: &[u32]) -> Key;
    fn degen(&self, q: usize, i: usize, key: &[u32]) -> Key;
    fn act(&self, _g: usize, _q: usize, _key: &[u32]) -> Option<Key> {
        None
    }
}

impl TruncatedSSet {
    /// Tabulates a simplicial set from its simplices in each degree and rules
    /// on keys. Every face, degeneracy and translate must be a listed simplex.
    pub fn build(
        simplices: Vec<Vec<Key>>,
        rules: &impl SimplicialRules,
        group_order: Option<usize>,
    ) -> Result<Self> {
        let dim = simplices.len().checked_sub(1).ok_or_else(|| Error::invalid("no degrees given"))?;
        let index: Vec<HashMap<Key, u32>> = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect())
            .collect();
        let find = |q: usize, k: Key, what: &str| -> Result<u32> {
            index[q]
                .get(&k)
                .copied()
                .ok_or_else(|| Error::verification(format!("{what} {k:?} in degree {q} is not a listed simplex")))
        };
        let mut faces = vec![Vec::new()];
        for q in 1..=dim {
            let mut per = Vec::with_capacity(q + 1);
            for i in 0..=q {
                per.push(
                    simplices[q]
                        .iter()
                        .map(|k| find(q - 1, rules.face(q, i, k), "face"))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            faces.push(per);
        }
        let mut degens = Vec::new();
        for q in 0..dim {
            let mut per = Vec::with_capacity(q + 1);
            for i in 0..=q {
                per.push(
                    simplices[q]
                        .iter()
                        .map(|k| find(q + 1, rules.degen(q, i, k), "degeneracy"))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            degens.push(per);
        }
        let mut nondegenerate: Vec<Vec<bool>> = simplices.iter().map(|l| vec![true; l.len()]).collect();
        for q in 0..dim {
            for table in &degens[q] {
                for &t in table {
                    nondegenerate[q + 1][t as usize] = false;
                }
            }
        }
        let action = match group_order {
            None => None,
            Some(n) => {
                let mut per_degree = Vec::with_capacity(dim + 1);
                for q in 0..=dim {
                    let mut per_g = Vec::with_capacity(n);
                    for g in 0..n {
                        per_g.push(
                            simplices[q]
                                .iter()
                                .map(|k| {
                                    let moved = rules
                                        .act(g, q, k)
                                        .ok_or_else(|| Error::invalid("rules carry no group action"))?;
                                    find(q, moved, "translate")
                                })
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    per_degree.push(per_g);
                }
                Some(per_degree)
            }
        };
        Ok(TruncatedSSet { dim, simplices, index, faces, degens, nondegenerate, action })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices[q].len()
    }

    pub fn simplices(&self, q: usize) -> &[Key] {
        &self.simplices[q]
    }

    pub fn key(&self, q: usize, s: u32) -> &Key {
        &self.simplices[q][s as usize]
    }

    pub fn find(&self, q: usize, key: &[u32]) -> Option<u32> {
        self.index[q].get(key).copied()
    }

    pub fn face(&self, q: usize, i: usize, s: u32) -> u32 {
        self.faces[q][i][s as usize]
    }

    pub fn degen(&self, q: usize, i: usize, s: u32) -> u32 {
        self.degens[q][i][s as usize]
    }

    pub fn is_nondegenerate(&self, q: usize, s: u32) -> bool {
        self.nondegenerate[q][s as usize]
    }

    /// Nondegenerate simplices of degree `q`, in index order.
    pub fn nondegenerate(&self, q: usize) -> Vec<u32> {
        (0..self.count(q) as u32).filter(|&s| self.nondegenerate[q][s as usize]).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|q| self.nondegenerate[q].iter().filter(|&&b| b).count()).collect()
    }

    pub fn has_action(&self) -> bool {
        self.action.is_some()
    }

    pub fn act(&self, g: usize, q: usize, s: u32) -> Option<u32> {
        self.action.as_ref().map(|a| a[q][g][s as usize])
    }

    /// Checks all simplicial identities in the stored degrees, and that the
    /// action (if any) is a group action commuting with faces and degeneracies.
    pub fn validate(&self, group: Option<&FiniteGroup>) -> Result<(), String> {
        for q in 2..=self.dim {
            for s in 0..self.count(q) as u32 {
                for j in 1..=q {
                    for i in 0..j {
                        if self.face(q - 1, i, self.face(q, j, s)) != self.face(q - 1, j - 1, self.face(q, i, s)) {
                            return Err(format!("d_{i} d_{j} ≠ d_{} d_{i} on simplex {s} of degree {q}", j - 1));
                        }
                    }
                }
            }
        }
        for q in 0..self.dim {
            for s in 0..self.count(q) as u32 {
                for j in 0..=q {
                    let t = self.degen(q, j, s);
                    for i in 0..=q + 1 {
                        let lhs = self.face(q + 1, i, t);
                        let rhs = if i < j {
                            self.degen(q - 1, j - 1, self.face(q, i, s))
                        } else if i == j || i == j + 1 {
                            s
                        } else {
                            self.degen(q - 1, j, self.face(q, i - 1, s))
                        };
                        if lhs != rhs {
                            return Err(format!("d_{i} s_{j} identity fails on simplex {s} of degree {q}"));
                        }
                    }
                    if q + 1 < self.dim {
                        for i in 0..=j {
                            if self.degen(q + 1, i, t) != self.degen(q + 1, j + 1, self.degen(q, i, s)) {
                                return Err(format!("s_{i} s_{j} identity fails on simplex {s} of degree {q}"));
                            }
                        }
                    }
                }
            }
        }
        if let Some(action) = &self.action {
            let n = action[0].len();
            for q in 0..=self.dim {
                if action[q][IDENTITY].iter().enumerate().any(|(s, &t)| s as u32 != t) {
                    return Err(format!("identity acts non-trivially in degree {q}"));
                }
                for g in 0..n {
                    for s in 0..self.count(q) as u32 {
                        let gs = action[q][g][s as usize];
                        if q > 0 {
                            for i in 0..=q {
                                if self.face(q, i, gs) != action[q - 1][g][self.face(q, i, s) as usize] {
                                    return Err(format!("action of {g} does not commute with d_{i} in degree {q}"));
                                }
                            }
                        }
                        if q < self.dim {
                            for i in 0..=q {
                                if self.degen(q, i, gs) != action[q + 1][g][self.degen(q, i, s) as usize] {
                                    return Err(format!("action of {g} does not commute with s_{i} in degree {q}"));
                                }
                            }
                        }
                    }
                }
                if let Some(group) = group {
                    for g in group.elements() {
                        for h in group.elements() {
                            let gh = group.mul(g, h);
                            if (0..self.count(q))
                                .any(|s| action[q][gh][s] != action[q][g][action[q][h][s] as usize])
                            {
                                return Err(format!("action is not multiplicative on ({g}, {h}) in degree {q}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure keyed by simplex keys, independent of index order.
    pub fn canonical(&self) -> Vec<BTreeMap<Key, (Vec<Key>, Vec<Key>)>> {
        (0..=self.dim)
            .map(|q| {
                (0..self.count(q) as u32)
                    .map(|s| {
                        let faces = if q == 0 {
                            Vec::new()
                        } else {
                            (0..=q).map(|i| self.key(q - 1, self.face(q, i, s)).clone()).collect()
                        };
                        let degens = if q == self.dim {
                            Vec::new()
                        } else {
                            (0..=q).map(|i| self.key(q + 1, self.degen(q, i, s)).clone()).collect()
                        };
                        (self.key(q, s).clone(), (faces, degens))
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether both sets carry the same simplices, faces and degeneracies.
    pub fn same_data(&self, other: &TruncatedSSet) -> Result<(), String> {
        if self.dim != other.dim {
            return Err(format!("dimensions differ: {} vs {}", self.dim, other.dim));
        }
        let (a, b) = (self.canonical(), other.canonical());
        for q in 0..=self.dim {
            if a[q].len() != b[q].len() {
                return Err(format!("degree {q} has {} vs {} simplices", a[q].len(), b[q].len()));
            }
            if let Some((k, _)) = a[q].iter().find(|(k, v)| b[q].get(*k) != Some(v)) {
                return Err(format!("simplex {k:?} of degree {q} differs"));
            }
        }
        Ok(())
    }

    /// Keys rewritten by `f`; faces and degeneracies carried along.
    pub fn relabel(&self, f: impl Fn(usize, &[u32]) -> Key) -> Result<TruncatedSSet> {
        let simplices: Vec<Vec<Key>> =
            (0..=self.dim).map(|q| self.simplices[q].iter().map(|k| f(q, k)).collect()).collect();
        let index: Vec<HashMap<Key, u32>> = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect())
            .collect();
        if index.iter().zip(&simplices).any(|(m, l)| m.len() != l.len()) {
            return Err(Error::invalid("relabelling is not injective"));
        }
        Ok(TruncatedSSet { simplices, index, ..self.clone() })
    }

    /// The degreewise `H`-fixed simplices, keeping keys.
    pub fn fixed(&self, h: &Subgroup) -> Result<TruncatedSSet> {
        let action = self.action.as_ref().ok_or_else(|| Error::invalid("no group action attached"))?;
        let keep: Vec<Vec<u32>> = (0..=self.dim)
            .map(|q| {
                (0..self.count(q) as u32)
                    .filter(|&s| h.elements().iter().all(|&g| action[q][g][s as usize] == s))
                    .collect()
            })
            .collect();
        let mut local: Vec<HashMap<u32, u32>> = Vec::new();
        for level in &keep {
            local.push(level.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect());
        }
        let tab = |q_from: usize, q_to: usize, t: &Vec<u32>| -> Vec<u32> {
            keep[q_from].iter().map(|&s| local[q_to][&t[s as usize]]).collect()
        };
        let faces = (0..=self.dim)
            .map(|q| if q == 0 { Vec::new() } else { self.faces[q].iter().map(|t| tab(q, q - 1, t)).collect() })
            .collect();
        let degens = (0..self.dim).map(|q| self.degens[q].iter().map(|t| tab(q, q + 1, t)).collect()).collect();
        let simplices: Vec<Vec<Key>> =
            keep.iter().enumerate().map(|(q, l)| l.iter().map(|&s| self.key(q, s).clone()).collect()).collect();
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect())
            .collect();
        let nondegenerate =
            keep.iter().enumerate().map(|(q, l)| l.iter().map(|&s| self.nondegenerate[q][s as usize]).collect()).collect();
        Ok(TruncatedSSet { dim: self.dim, simplices, index, faces, degens, nondegenerate, action: None })
    }

    /// Whether every non-identity element moves every nondegenerate simplex.
    pub fn action_is_free_on_nondegenerate(&self) -> Result<bool> {
        let action = self.action.as_ref().ok_or_else(|| Error::invalid("no group action attached"))?;
        Ok((0..=self.dim).all(|q| {
            self.nondegenerate(q)
                .into_iter()
                .all(|s| (1..action[q].len()).all(|g| action[q][g][s as usize] != s))
        }))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "degrees": (0..=self.dim).map(|q| serde_json::json!({
                "degree": q,
                "simplices": self.simplices[q],
                "nondegenerate": self.nondegenerate(q),
                "faces": if q == 0 { Vec::new() } else { self.faces[q].clone() },
            })).collect::<Vec<_>>(),
        })
    }
}

/// Vertex `x_i` of a nerve chain.
fn vertex(c: &FinCategory, q: usize, key: &[u32], i: usize) -> Obj {
    if q == 0 {
        key[0] as Obj
    } else if i == 0 {
        c.tgt(key[0] as usize)
    } else {
        c.src(key[i - 1] as usize)
    }
}

fn nerve_face(c: &FinCategory, q: usize, i: usize, key: &[u32]) -> Key {
    if q == 1 {
        return vec![vertex(c, 1, key, if i == 0 { 1 } else { 0 }) as u32];
    }
    let mut out = Vec::with_capacity(q - 1);
    for (j, &h) in key.iter().enumerate() {
        // key[j] = h_{j+1}
        if i == 0 && j == 0 || i == q && j == q - 1 || i > 0 && j == i {
            continue;
        }
        if i > 0 && i < q && j == i - 1 {
            out.push(c.compose(h as usize, key[i] as usize) as u32);
        } else {
            out.push(h);
        }
    }
    out
}

fn nerve_degen(c: &FinCategory, q: usize, i: usize, key: &[u32]) -> Key {
    let id = c.id(vertex(c, q, key, i)) as u32;
    if q == 0 {
        return vec![id];
    }
    let mut out = key.to_vec();
    out.insert(i, id);
    out
}

fn apply_functor(f: &Functor, q: usize, key: &[u32]) -> Key {
    if q == 0 {
        vec![f.obj[key[0] as usize] as u32]
    } else {
        key.iter().map(|&h| f.mor[h as usize] as u32).collect()
    }
}

/// All composable chains of length `q` for `q = 0..=dim`.
fn chains(c: &FinCategory, dim: usize) -> Result<Vec<Vec<Key>>> {
    let mut into = vec![Vec::new(); c.num_objects()];
    for f in c.morphisms() {
        into[c.tgt(f)].push(f as u32);
    }
    let mut out: Vec<Vec<Key>> = vec![c.objects().map(|x| vec![x as u32]).collect()];
    if dim >= 1 {
        out.push(c.morphisms().map(|f| vec![f as u32]).collect());
    }
    for q in 2..=dim {
        let mut next = Vec::new();
        for k in &out[q - 1] {
            let last = c.src(k[q - 2] as usize);
            for &h in &into[last] {
                let mut nk = k.clone();
                nk.push(h);
                next.push(nk);
            }
            limits::check(format!("simplices of degree {q}"), next.len(), limits::SIMPLICES_PER_DEGREE)?;
        }
        out.push(next);
    }
    Ok(out)
}

struct NerveRules<'a> {
    c: &'a FinCategory,
    action: Option<&'a GCategory>,
}

impl SimplicialRules for NerveRules<'_> {
    fn face(&self, q: usize, i: usize, key: &[u32]) -> Key {
        nerve_face(self.c, q, i, key)
    }

    fn degen(&self, q: usize, i: usize, key: &[u32]) -> Key {
        nerve_degen(self.c, q, i, key)
    }

    fn act(&self, g: usize, q: usize, key: &[u32]) -> Option<Key> {
        self.action.map(|a| apply_functor(a.action(g), q, key))
    }
}

/// The nerve of `c` through degree `dim`.
pub fn nerve(c: &FinCategory, dim: usize) -> Result<TruncatedSSet> {
    TruncatedSSet::build(chains(c, dim)?, &NerveRules { c, action: None }, None)
}

/// The nerve of a `G`-category with the induced simplicial action.
pub fn nerve_g(c: &GCategory, dim: usize) -> Result<TruncatedSSet> {
    let cat = c.category();
    TruncatedSSet::build(chains(cat, dim)?, &NerveRules { c: cat, action: Some(c) }, Some(c.group().order()))
}

/// A simplicial map, as an index table per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialMap {
    pub degrees: Vec<Vec<u32>>,
}

impl SimplicialMap {
    /// Checks compatibility with faces, degeneracies and (when both carry one) the action.
    pub fn validate(&self, s: &TruncatedSSet, t: &TruncatedSSet) -> Result<(), String> {
        if self.degrees.len() != s.dim + 1 || t.dim < s.dim {
            return Err("map does not cover the source degrees".into());
        }
        for q in 0..=s.dim {
            let m = &self.degrees[q];
            if m.len() != s.count(q) {
                return Err(format!("map has the wrong size in degree {q}"));
            }
            for x in 0..s.count(q) as u32 {
                let y = m[x as usize];
                if q > 0 {
                    for i in 0..=q {
                        if t.face(q, i, y) != self.degrees[q - 1][s.face(q, i, x) as usize] {
                            return Err(format!("map does not commute with d_{i} at simplex {x} of degree {q}"));
                        }
                    }
                }
                if q < s.dim {
                    for i in 0..=q {
                        if t.degen(q, i, y) != self.degrees[q + 1][s.degen(q, i, x) as usize] {
                            return Err(format!("map does not commute with s_{i} at simplex {x} of degree {q}"));
                        }
                    }
                }
                if let (Some(sa), Some(ta)) = (&s.action, &t.action) {
                    for g in 0..sa[q].len() {
                        if ta[q][g][y as usize] != m[sa[q][g][x as usize] as usize] {
                            return Err(format!("map is not equivariant for element {g} at simplex {x} of degree {q}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The restriction to sub-simplicial sets that keep the keys of `s` and `t`,
    /// such as fixed points.
    pub fn restrict(
        &self,
        s: &TruncatedSSet,
        t: &TruncatedSSet,
        s_sub: &TruncatedSSet,
        t_sub: &TruncatedSSet,
    ) -> Result<SimplicialMap> {
        let degrees = (0..=s_sub.dim)
            .map(|q| {
                s_sub.simplices[q]
                    .iter()
                    .map(|k| {
                        let x = s.find(q, k).ok_or_else(|| Error::invalid("simplex missing from the source"))?;
                        let y = t.key(q, self.degrees[q][x as usize]);
                        t_sub.find(q, y).ok_or_else(|| Error::verification("map leaves the target subcomplex"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialMap { degrees })
    }

    /// Whether every degree is a bijection.
    pub fn is_isomorphism(&self, t: &TruncatedSSet) -> bool {
        self.degrees.iter().enumerate().all(|(q, m)| {
            let mut seen = vec![false; t.count(q)];
            m.len() == t.count(q) && m.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        })
    }
}

/// The map of nerves induced by a functor.
pub fn nerve_map(f: &Functor, s: &TruncatedSSet, t: &TruncatedSSet) -> Result<SimplicialMap> {
    let degrees = (0..=s.dim)
        .map(|q| {
            s.simplices[q]
                .iter()
                .map(|k| t.find(q, &apply_functor(f, q, k)).ok_or_else(|| Error::invalid("image is not a simplex")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialMap { degrees })
}

/// Rewrites the nerve of a subcategory into the simplex keys of its parent.
pub fn embed_nerve(sub_nerve: &TruncatedSSet, inclusion: &Functor) -> Result<TruncatedSSet> {
    sub_nerve.relabel(|q, k| apply_functor(inclusion, q, k))
}

/// The Bousfield–Kan diagonal of `X ∘ p` over the full subcategory of
/// `O_{G,+}^op` on `allowed`.
///
/// A `q`-simplex is a chain `c_0 → ⋯ → c_q` in `O_{G,+}` together with a
/// `q`-simplex of `N X(G/H_q)`, keyed `[c_0, …, c_q, σ…]`.
pub struct Hocolim<'a> {
    x: &'a OrbitPresheaf,
    marked: &'a MarkedOrbitCategory,
}

impl<'a> Hocolim<'a> {
    pub fn new(x: &'a OrbitPresheaf, marked: &'a MarkedOrbitCategory) -> Self {
        Hocolim { x, marked }
    }

    fn tail(&self, q: usize, key: &[u32]) -> usize {
        self.marked.object(key[q] as usize).subgroup
    }

    pub fn build(&self, allowed: &[Obj], dim: usize, with_action: bool) -> Result<TruncatedSSet> {
        let mc = self.marked.category();
        let mut in_allowed = vec![false; mc.num_objects()];
        allowed.iter().for_each(|&o| in_allowed[o] = true);
        // chains c_0 → ⋯ → c_q in O_{G,+}, thin so given by objects
        let mut base: Vec<Vec<Vec<u32>>> = vec![allowed.iter().map(|&o| vec![o as u32]).collect()];
        for q in 1..=dim {
            let mut next = Vec::new();
            for ch in &base[q - 1] {
                let last = ch[q - 1] as usize;
                for &f in mc.out_of(last) {
                    let t = mc.tgt(f);
                    if in_allowed[t] {
                        let mut n = ch.clone();
                        n.push(t as u32);
                        next.push(n);
                    }
                }
            }
            base.push(next);
        }
        let mut value_chains = HashMap::new();
        for h in 0..self.x.values().len() {
            value_chains.insert(h, chains(self.x.value(h), dim)?);
        }
        let mut simplices = Vec::with_capacity(dim + 1);
        for (q, level) in base.iter().enumerate() {
            let mut out = Vec::new();
            for ch in level {
                for sigma in &value_chains[&self.tail(q, ch)][q] {
                    let mut k = ch.clone();
                    k.extend_from_slice(sigma);
                    out.push(k);
                }
                limits::check(format!("simplices of degree {q}"), out.len(), limits::SIMPLICES_PER_DEGREE)?;
            }
            simplices.push(out);
        }
        let order = with_action.then(|| self.x.group().order());
        TruncatedSSet::build(simplices, self, order)
    }
}

impl SimplicialRules for Hocolim<'_> {
    fn face(&self, q: usize, i: usize, key: &[u32]) -> Key {
        let (ch, sigma) = key.split_at(q + 1);
        let h = self.tail(q, key);
        let value = self.x.value(h);
        let mut out: Vec<u32> = ch.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
        let face = nerve_face(value, q, i, sigma);
        if i < q {
            out.extend(face);
        } else {
            let f = self.marked.hom(ch[q - 1] as usize, ch[q] as usize).expect("chain is composable");
            out.extend(apply_functor(self.x.restriction(self.marked.underlying(f)), q - 1, &face));
        }
        out
    }

    fn degen(&self, q: usize, i: usize, key: &[u32]) -> Key {
        let (ch, sigma) = key.split_at(q + 1);
        let value = self.x.value(self.tail(q, key));
        let mut out = ch.to_vec();
        out.insert(i, ch[i]);
        out.extend(nerve_degen(value, q, i, sigma));
        out
    }

    fn act(&self, g: usize, q: usize, key: &[u32]) -> Option<Key> {
        let act = self.marked.action(g);
        let mut out: Vec<u32> = key[..=q].iter().map(|&c| act.obj[c as usize] as u32).collect();
        out.extend_from_slice(&key[q + 1..]);
        Some(out)
    }
}

/// `hocolim_{O_{G,+}^op} N(X ∘ p)` through degree `dim`, with its `G`-action.
pub fn hocolim_diag(x: &OrbitPresheaf, marked: &MarkedOrbitCategory, dim: usize) -> Result<TruncatedSSet> {
    let all: Vec<Obj> = marked.category().objects().collect();
    Hocolim::new(x, marked).build(&all, dim, true)
}

/// The same diagonal over `(O_{G,+}^op)^K` only.
pub fn hocolim_diag_fixed(
    x: &OrbitPresheaf,
    marked: &MarkedOrbitCategory,
    k: &Subgroup,
    dim: usize,
) -> Result<TruncatedSSet> {
    Hocolim::new(x, marked).build(&marked.fixed_objects(k), dim, false)
}

/// Thomason's map `η : hocolim → N(∫ X ∘ p)` on the diagonal.
///
/// `(c_0 → ⋯ → c_q, x_0 ← ⋯ ← x_q)` goes to the chain with vertices
/// `(c_i, U_{i+1}^* x_i)` and edges `k_i = (f_i, U_i^* h_i)`, where `U_i` is the
/// underlying map of `c_{i-1} → c_q`.
pub fn thomason_key(
    x: &OrbitPresheaf,
    marked: &MarkedOrbitCategory,
    q: usize,
    key: &[u32],
    object: impl Fn(Triple) -> Option<u32>,
    morphism: impl Fn(u32, u32, u32) -> Option<u32>,
) -> Option<Key> {
    let (ch, sigma) = key.split_at(q + 1);
    let hq = marked.object(ch[q] as usize).subgroup;
    let value = x.value(hq);
    let u = |i: usize| marked.underlying(marked.hom(ch[i] as usize, ch[q] as usize).expect("chain is composable"));
    let obj = |i: usize| {
        let xi = vertex(value, q, sigma, i);
        object(Triple { marked: ch[i] as usize, x: x.restriction(u(i)).obj[xi] })
    };
    if q == 0 {
        return Some(vec![obj(0)?]);
    }
    (1..=q)
        .map(|i| {
            let h = x.restriction(u(i - 1)).mor[sigma[i - 1] as usize] as u32;
            morphism(obj(i)?, obj(i - 1)?, h)
        })
        .collect()
}

/// Thomason's map from `hocolim_diag(x)` to `nerve(C X)`.
pub fn thomason_eta(cx: &ElmendorfCat, hocolim: &TruncatedSSet, nerve_cx: &TruncatedSSet) -> Result<SimplicialMap> {
    let degrees = (0..=hocolim.dim)
        .map(|q| {
            hocolim.simplices[q]
                .iter()
                .map(|k| {
                    thomason_key(
                        cx.presheaf(),
                        cx.marked(),
                        q,
                        k,
                        |t| cx.object_index(t).map(|o| o as u32),
                        |s, t, h| cx.find(s as usize, t as usize, h as usize).map(|m| m as u32),
                    )
                    .and_then(|img| nerve_cx.find(q, &img))
                    .ok_or_else(|| Error::verification("Thomason's formula leaves the nerve of C X"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialMap { degrees })
}

/// Evidence that `η` restricts on `K`-fixed points to `η` of the data over `(O_{G,+}^op)^K`.
pub fn thomason_fixed_square(
    cx: &ElmendorfCat,
    hocolim: &TruncatedSSet,
    nerve_cx: &TruncatedSSet,
    eta: &SimplicialMap,
    k: &Subgroup,
) -> Result<(), String> {
    let x = cx.presheaf();
    let marked = cx.marked();
    let dim = hocolim.dim;
    let allowed = marked.fixed_objects(k);
    let err = |e: Error| e.to_string();
    // left column: fixed points of the diagonal vs the diagonal of the restriction
    let fixed_h = hocolim.fixed(k).map_err(err)?;
    let restricted_h = hocolim_diag_fixed(x, marked, k, dim).map_err(err)?;
    fixed_h.same_data(&restricted_h).map_err(|e| format!("hocolim fixed points: {e}"))?;
    // right column: fixed nerve vs nerve of the restricted Grothendieck construction
    let (objs, mors, cat) = grothendieck(x, marked, &allowed).map_err(err)?;
    let to_parent = Functor {
        obj: objs.iter().map(|&t| cx.object_index(t).expect("object of C X")).collect(),
        mor: mors
            .iter()
            .map(|m| cx.find(to_obj(cx, &objs, m.src), to_obj(cx, &objs, m.tgt), m.h).expect("morphism of C X"))
            .collect(),
    };
    let restricted_n = embed_nerve(&nerve(&cat, dim).map_err(err)?, &to_parent).map_err(err)?;
    let fixed_n = nerve_cx.fixed(k).map_err(err)?;
    fixed_n.same_data(&restricted_n).map_err(|e| format!("nerve fixed points: {e}"))?;
    // the square: η^K agrees with η of the restricted data, simplex by simplex
    let local_obj: HashMap<Triple, u32> = objs.iter().enumerate().map(|(i, &t)| (t, i as u32)).collect();
    let local_mor: HashMap<(u32, u32, u32), u32> =
        mors.iter().enumerate().map(|(i, m)| ((m.src as u32, m.tgt as u32, m.h as u32), i as u32)).collect();
    for q in 0..=dim {
        for key in restricted_h.simplices(q) {
            let local = thomason_key(x, marked, q, key, |t| local_obj.get(&t).copied(), |s, t, h| {
                local_mor.get(&(s, t, h)).copied()
            })
            .ok_or("restricted Thomason formula is undefined")?;
            let lifted = apply_functor(&to_parent, q, &local);
            let s = hocolim.find(q, key).ok_or("fixed simplex missing from the diagonal")?;
            if nerve_cx.key(q, eta.degrees[q][s as usize]) != &lifted {
                return Err(format!("η^K differs from η over the fixed orbit data at {key:?}"));
            }
        }
    }
    Ok(())
}

fn to_obj(cx: &ElmendorfCat, objs: &[Triple], local: Obj) -> Obj {
    cx.object_index(objs[local]).expect("object of C X")
}

/// Outcome of the simplex-level reindexing of bar constructions.
#[derive(Debug, Clone, Serialize)]
pub struct ReindexReport {
    pub degree: usize,
    /// Chains in `O_G` with a marked point in the source orbit.
    pub orbit_side: usize,
    /// Chains in `O_{G,+}`.
    pub marked_side: usize,
    pub bijective: bool,
    pub equivariant: bool,
    pub summands_match: bool,
}

impl ReindexReport {
    pub fn passed(&self) -> bool {
        self.orbit_side == self.marked_side && self.bijective && self.equivariant && self.summands_match
    }
}

/// Rebuilds the degree-`q` index sets on both sides and checks the bijection
/// `(G/H_q ← ⋯ ← G/H_0, a_0H_0) ↦ ((G/H_q, a_qH_q) ← ⋯ ← (G/H_0, a_0H_0))`
/// with `a_iH_i = f_i(a_{i-1}H_{i-1})`.
pub fn bar_reindex_check(marked: &MarkedOrbitCategory, q: usize) -> Result<ReindexReport> {
    let orbit = marked.orbit();
    let oc = orbit.category();
    let group = orbit.group();
    // chains G/H_0 → ⋯ → G/H_q in O_G, as morphism lists (f_1, …, f_q)
    let mut orbit_chains: Vec<(Obj, Vec<usize>)> = oc.objects().map(|h| (h, Vec::new())).collect();
    for _ in 0..q {
        let mut next = Vec::new();
        for (h0, fs) in &orbit_chains {
            let last = fs.last().map_or(*h0, |&f| oc.tgt(f));
            for &f in oc.out_of(last) {
                let mut n = fs.clone();
                n.push(f);
                next.push((*h0, n));
            }
        }
        limits::check("orbit chains", next.len(), limits::SIMPLICES_PER_DEGREE)?;
        orbit_chains = next;
    }
    let mut left = Vec::new();
    for (h0, fs) in &orbit_chains {
        for c in 0..orbit.cosets(*h0).len() {
            left.push((*h0, fs.clone(), c));
        }
    }
    let mc = marked.category();
    let mut right: Vec<Vec<Obj>> = mc.objects().map(|o| vec![o]).collect();
    for _ in 0..q {
        let mut next = Vec::new();
        for ch in &right {
            for &f in mc.out_of(*ch.last().unwrap()) {
                let mut n = ch.clone();
                n.push(mc.tgt(f));
                next.push(n);
            }
        }
        right = next;
    }
    let right_index: HashMap<&Vec<Obj>, usize> = right.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let forward = |h0: Obj, fs: &[usize], c: usize| -> Vec<Obj> {
        let mut marks = vec![marked.object_index(crate::orbit::Marked { subgroup: h0, coset: c })];
        let mut cur = c;
        for &f in fs {
            cur = orbit.apply(f, cur);
            marks.push(marked.object_index(crate::orbit::Marked { subgroup: oc.tgt(f), coset: cur }));
        }
        marks
    };
    let mut hit = vec![false; right.len()];
    let mut bijective = true;
    let mut summands_match = true;
    let mut images = Vec::with_capacity(left.len());
    for (h0, fs, c) in &left {
        let img = forward(*h0, fs, *c);
        let Some(&j) = right_index.get(&img) else {
            bijective = false;
            images.push(usize::MAX);
            continue;
        };
        if std::mem::replace(&mut hit[j], true) {
            bijective = false;
        }
        // the summand X(G/H_q) on both sides and the underlying maps agree
        let tail = fs.last().map_or(*h0, |&f| oc.tgt(f));
        let under: Vec<usize> =
            img.windows(2).map(|w| marked.underlying(marked.hom(w[0], w[1]).unwrap())).collect();
        if marked.object(*img.last().unwrap()).subgroup != tail || &under != fs {
            summands_match = false;
        }
        images.push(j);
    }
    bijective &= hit.iter().all(|&b| b);
    let left_index: HashMap<(Obj, &Vec<usize>, usize), usize> =
        left.iter().enumerate().map(|(i, (h, fs, c))| ((*h, fs, *c), i)).collect();
    let mut equivariant = true;
    for g in group.elements() {
        let act = marked.action(g);
        for (i, (h0, fs, c)) in left.iter().enumerate() {
            let moved = left_index[&(*h0, fs, orbit.cosets(*h0).act(g, *c))];
            if images[i] == usize::MAX || images[moved] == usize::MAX {
                continue;
            }
            let translated: Vec<Obj> = right[images[i]].iter().map(|&o| act.obj[o]).collect();
            if right[images[moved]] != translated {
                equivariant = false;
            }
        }
    }
    Ok(ReindexReport {
        degree: q,
        orbit_side: left.len(),
        marked_side: right.len(),
        bijective,
        equivariant,
        summands_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Preorder;
    use crate::elmendorf_cat::c_cat;
    use crate::orbit::OrbitCategory;
    use crate::presheaf::{conjugation_groupoid, family_presheaf, SubgroupFamily};
    use std::sync::Arc;

    fn orbit(key: &str) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(FiniteGroup::from_key(key).unwrap())).unwrap())
    }

    #[test]
    fn small_nerves() {
        let t = nerve(&FinCategory::terminal(), 3).unwrap();
        assert_eq!(t.nondegenerate_counts(), vec![1, 0, 0, 0]);
        assert!(t.validate(None).is_ok());
        let c = nerve(&Preorder::chain(2).to_category(), 3).unwrap();
        assert_eq!(c.nondegenerate_counts(), vec![2, 1, 0, 0]);
        let k = nerve(&Preorder::complete(2).to_category(), 3).unwrap();
        assert_eq!(k.nondegenerate_counts(), vec![2, 2, 2, 2]);
        assert!(k.validate(None).is_ok());
    }

    #[test]
    fn nerve_counts_match_chain_enumeration() {
        // all chains of a preorder = weakly monotone sequences read right to left
        let p = Preorder::from_fn(4, |a, b| a <= b || (a == 3 && b == 2)).unwrap();
        let n = nerve(&p.to_category(), 3).unwrap();
        for q in 0..=3 {
            let mut count = 0;
            let mut strict = 0;
            let total = 4usize.pow(q as u32 + 1);
            for code in 0..total {
                let xs: Vec<usize> = (0..=q).map(|i| code / 4usize.pow(i as u32) % 4).collect();
                if (1..=q).all(|i| p.leq(xs[i], xs[i - 1])) {
                    count += 1;
                    if (1..=q).all(|i| xs[i] != xs[i - 1]) {
                        strict += 1;
                    }
                }
            }
            assert_eq!(n.count(q), count);
            assert_eq!(n.nondegenerate(q).len(), strict);
        }
    }

    #[test]
    fn nerve_of_groupoid_is_valid_and_equivariant() {
        let g = Arc::new(FiniteGroup::from_key("S3").unwrap());
        let c = conjugation_groupoid(g.clone());
        let n = nerve_g(&c, 2).unwrap();
        assert!(n.validate(Some(&g)).is_ok());
        for h in g.subgroups() {
            let sub = c.fixed_subcategory(&h);
            let lhs = embed_nerve(&nerve(&sub.category, 2).unwrap(), &sub.inclusion()).unwrap();
            lhs.same_data(&n.fixed(&h).unwrap()).unwrap();
        }
    }

    #[test]
    fn free_universal_space() {
        let o = orbit("C2");
        let x = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
        let c = c_cat(&x).unwrap();
        let n = nerve_g(c.gcategory(), 4).unwrap();
        assert!(n.action_is_free_on_nondegenerate().unwrap());
        let fixed = n.fixed(&o.group().whole()).unwrap();
        assert!((0..=4).all(|q| fixed.count(q) == 0));
    }

    #[test]
    fn hocolim_and_thomason() {
        for key in ["C1", "C2", "S3"] {
            let o = orbit(key);
            let marked = MarkedOrbitCategory::new(o.clone()).unwrap();
            for fam in SubgroupFamily::enumerate(&o) {
                let x = family_presheaf(&o, &fam).unwrap();
                let c = c_cat(&x).unwrap();
                let dim = if key == "S3" { 2 } else { 3 };
                let h = hocolim_diag(&x, &marked, dim).unwrap();
                assert!(h.validate(Some(o.group())).is_ok());
                let n = nerve_g(c.gcategory(), dim).unwrap();
                let eta = thomason_eta(&c, &h, &n).unwrap();
                eta.validate(&h, &n).unwrap();
                for k in o.subgroups() {
                    thomason_fixed_square(&c, &h, &n, &eta, k).unwrap();
                }
            }
        }
        // C2, free family: degree 0 has one simplex per marked free orbit point
        let o = orbit("C2");
        let marked = MarkedOrbitCategory::new(o.clone()).unwrap();
        let x = family_presheaf(&o, &SubgroupFamily::trivial(&o)).unwrap();
        assert_eq!(hocolim_diag(&x, &marked, 1).unwrap().count(0), 2);
    }

    #[test]
    fn thomason_is_iso_for_trivial_group() {
        let o = orbit("C1");
        let marked = MarkedOrbitCategory::new(o.clone()).unwrap();
        let x = family_presheaf(&o, &SubgroupFamily::all(&o)).unwrap();
        let c = c_cat(&x).unwrap();
        let h = hocolim_diag(&x, &marked, 3).unwrap();
        let n = nerve_g(c.gcategory(), 3).unwrap();
        assert_eq!(h.nondegenerate_counts(), vec![1, 0, 0, 0]);
        let eta = thomason_eta(&c, &h, &n).unwrap();
        assert!(eta.is_isomorphism(&n));
    }

    #[test]
    fn reindexing() {
        for key in ["C1", "C2", "C4", "S3"] {
            let o = orbit(key);
            let marked = MarkedOrbitCategory::new(o.clone()).unwrap();
            for q in 0..=2 {
                let r = bar_reindex_check(&marked, q).unwrap();
                assert!(r.passed(), "{key} {q}: {r:?}");
            }
        }
    }
}
