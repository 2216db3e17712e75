//! Finite groups given by multiplication tables, their subgroups, and coset spaces.
//!
//! Elements are dense indices `0..order` with the identity at index 0.
//! Cosets are always left cosets `aH` and groups act on them from the left.
//! The canonical representative of a coset is its smallest element index.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;

/// Index of a group element.
pub type Element = usize;

/// The identity element of every [`FiniteGroup`].
pub const IDENTITY: Element = 0;

/// Built-in group families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// Cyclic group of order n, element k = g^k.
    Cyclic(usize),
    /// Symmetries of the regular n-gon, order 2n; element `k + n*j` is `r^k s^j`.
    Dihedral(usize),
    /// Permutations of n letters in lexicographic order of their image lists.
    Symmetric(usize),
}

/// A finite group stored as a full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    mult: Vec<Vec<Element>>,
    inv: Vec<Element>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    mult: Vec<Vec<Element>>,
    #[serde(default)]
    name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    ///
    /// The table must be square, index 0 must be a two-sided identity, every
    /// element needs an inverse, and multiplication must be associative.
    pub fn from_table(name: impl Into<String>, mult: Vec<Vec<Element>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::invalid("group must have at least one element"));
        }
        limits::check("group order", n, limits::GROUP_ORDER)?;
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("row {i} of the table has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::invalid(format!("row {i} contains out-of-range element {bad}")));
            }
        }
        for x in 0..n {
            if mult[IDENTITY][x] != x || mult[x][IDENTITY] != x {
                return Err(Error::invalid(format!("element 0 is not an identity for {x}")));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| mult[x][y] == IDENTITY && mult[y][x] == IDENTITY) {
                Some(y) => inv[x] = y,
                None => return Err(Error::invalid(format!("element {x} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a][b];
                for c in 0..n {
                    if mult[ab][c] != mult[a][mult[b][c]] {
                        return Err(Error::invalid(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let labels = (0..n).map(|i| if i == 0 { "e".to_string() } else { i.to_string() }).collect();
        Ok(FiniteGroup { name: name.into(), mult, inv, labels })
    }

    /// Builds one of the built-in groups.
    pub fn builtin(kind: GroupKind) -> Result<Self> {
        match kind {
            GroupKind::Cyclic(n) => {
                if n == 0 {
                    return Err(Error::invalid("cyclic group needs n >= 1"));
                }
                limits::check("group order", n, limits::GROUP_ORDER)?;
                let mult = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
                let mut g = Self::from_table(format!("C{n}"), mult)?;
                g.labels = (0..n)
                    .map(|k| match k {
                        0 => "e".to_string(),
                        1 => "g".to_string(),
                        _ => format!("g^{k}"),
                    })
                    .collect();
                Ok(g)
            }
            GroupKind::Dihedral(n) => {
                if n == 0 {
                    return Err(Error::invalid("dihedral group needs n >= 1"));
                }
                limits::check("group order", 2 * n, limits::GROUP_ORDER)?;
                let order = 2 * n;
                let mut mult = vec![vec![0; order]; order];
                for x in 0..order {
                    let (a, i) = (x % n, x / n);
                    for y in 0..order {
                        let (b, j) = (y % n, y / n);
                        // r^a s^i r^b s^j = r^(a ± b) s^(i+j)
                        let k = if i == 0 { (a + b) % n } else { (a + n - b) % n };
                        mult[x][y] = k + n * ((i + j) % 2);
                    }
                }
                let mut g = Self::from_table(format!("D{n}"), mult)?;
                g.labels = (0..order)
                    .map(|x| {
                        let (k, j) = (x % n, x / n);
                        let r = match k {
                            0 => String::new(),
                            1 => "r".to_string(),
                            _ => format!("r^{k}"),
                        };
                        match (r.is_empty(), j) {
                            (true, 0) => "e".to_string(),
                            (true, _) => "s".to_string(),
                            (false, 0) => r,
                            (false, _) => format!("{r}s"),
                        }
                    })
                    .collect();
                Ok(g)
            }
            GroupKind::Symmetric(n) => {
                if n == 0 {
                    return Err(Error::invalid("symmetric group needs n >= 1"));
                }
                limits::check("symmetric degree", n, limits::SYMMETRIC_DEGREE)?;
                let perms = permutations(n);
                let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
                let mult = perms
                    .iter()
                    .map(|s| {
                        perms
                            .iter()
                            .map(|t| {
                                let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                                index_of(&st)
                            })
                            .collect()
                    })
                    .collect();
                let mut g = Self::from_table(format!("S{n}"), mult)?;
                g.labels = perms.iter().map(|p| cycle_notation(p)).collect();
                Ok(g)
            }
        }
    }

    /// Looks up a built-in group by key: `C<n>`, `D<n>` or `S<n>`.
    pub fn from_key(key: &str) -> Result<Self> {
        let key = key.trim();
        let bad = || Error::invalid(format!("unknown group key {key:?} (expected C<n>, D<n> or S<n>)"));
        let mut chars = key.chars();
        let head = chars.next().ok_or_else(bad)?;
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let kind = match head.to_ascii_uppercase() {
            'C' | 'Z' => GroupKind::Cyclic(n),
            'D' => GroupKind::Dihedral(n),
            'S' => GroupKind::Symmetric(n),
            _ => return Err(bad()),
        };
        Self::builtin(kind)
    }

    /// Parses the group JSON format `{"order": n, "mult": [[...]], "name": "..."}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GroupJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("group JSON: {e}")))?;
        if raw.order != raw.mult.len() {
            return Err(Error::invalid(format!(
                "order {} does not match table size {}",
                raw.order,
                raw.mult.len()
            )));
        }
        let mut g = Self::from_table(raw.name, raw.mult)?;
        if raw.labels.len() == g.order() {
            g.labels = raw.labels;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GroupJson {
            order: self.order(),
            mult: self.mult.clone(),
            name: self.name.clone(),
            labels: self.labels.clone(),
        })
        .expect("group JSON is always serializable")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mult[a][b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    pub fn label(&self, a: Element) -> &str {
        &self.labels[a]
    }

    /// Finds an element by its display label (e.g. `"(12)"` in a symmetric group).
    pub fn element(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> &[Vec<Element>] {
        &self.mult
    }

    /// `a h a⁻¹`
    #[inline]
    pub fn conjugate(&self, a: Element, h: Element) -> Element {
        self.mul(self.mul(a, h), self.inv(a))
    }

    /// Exhaustively checks the group axioms on the stored table.
    pub fn check_axioms(&self) -> Result<()> {
        Self::from_table(self.name.clone(), self.mult.clone()).map(|_| ())
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: self.elements().collect() }
    }

    /// The trivial subgroup `{e}`.
    pub fn trivial(&self) -> Subgroup {
        Subgroup { elements: vec![IDENTITY] }
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(&self, gens: &[Element]) -> Subgroup {
        let mut set: BTreeSet<Element> = BTreeSet::from([IDENTITY]);
        let mut frontier: Vec<Element> = vec![IDENTITY];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    /// Every subgroup, sorted by size and then by element list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut seen: HashSet<Vec<Element>> = HashSet::new();
        let start = self.trivial();
        seen.insert(start.elements.clone());
        let mut queue = vec![start];
        let mut out = Vec::new();
        while let Some(h) = queue.pop() {
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if seen.insert(k.elements.clone()) {
                    queue.push(k);
                }
            }
            out.push(h);
        }
        out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        out
    }

    /// `aHa⁻¹`
    pub fn conjugate_subgroup(&self, h: &Subgroup, a: Element) -> Subgroup {
        let mut elements: Vec<Element> = h.elements.iter().map(|&x| self.conjugate(a, x)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|a| self.conjugate_subgroup(h, a) == *h)
    }

    /// Left coset space `G/H` with the left multiplication action.
    pub fn coset_space(&self, h: &Subgroup) -> Result<CosetSpace> {
        h.validate(self)?;
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut cosets: Vec<Vec<Element>> = Vec::new();
        // Scanning elements in increasing order makes the first element of each
        // coset its minimum, so cosets come out sorted by representative.
        for a in self.elements() {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let idx = cosets.len();
            let mut c: Vec<Element> = h.elements.iter().map(|&x| self.mul(a, x)).collect();
            c.sort_unstable();
            for &x in &c {
                coset_of[x] = idx;
            }
            cosets.push(c);
        }
        let action = self
            .elements()
            .map(|g| cosets.iter().map(|c| coset_of[self.mul(g, c[0])]).collect())
            .collect();
        Ok(CosetSpace { subgroup: h.clone(), cosets, coset_of, action })
    }
}

/// A subgroup, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    elements: Vec<Element>,
}

impl Subgroup {
    /// Validates that `elements` form a subgroup of `group`.
    pub fn new(group: &FiniteGroup, mut elements: Vec<Element>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let h = Subgroup { elements };
        h.validate(group)?;
        Ok(h)
    }

    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        if self.elements.iter().any(|&x| x >= n) {
            return Err(Error::invalid("subgroup contains an element outside the group"));
        }
        if !self.contains(IDENTITY) {
            return Err(Error::invalid("subgroup does not contain the identity"));
        }
        for &a in &self.elements {
            if !self.contains(group.inv(a)) {
                return Err(Error::invalid(format!("subgroup is not closed under inverse of {a}")));
            }
            for &b in &self.elements {
                if !self.contains(group.mul(a, b)) {
                    return Err(Error::invalid(format!(
                        "subgroup is not closed under the product of {a} and {b}"
                    )));
                }
            }
        }
        if n % self.order() != 0 {
            return Err(Error::invalid("subgroup order does not divide the group order"));
        }
        Ok(())
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements)
    }
}

/// The left coset space `G/H` with its left `G`-action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    subgroup: Subgroup,
    cosets: Vec<Vec<Element>>,
    coset_of: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl CosetSpace {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> &[Vec<Element>] {
        &self.cosets
    }

    /// Canonical (minimal) representative of coset `c`.
    pub fn rep(&self, c: usize) -> Element {
        self.cosets[c][0]
    }

    /// Index of the coset `aH`.
    pub fn coset_of(&self, a: Element) -> usize {
        self.coset_of[a]
    }

    /// `g · c`
    pub fn act(&self, g: Element, c: usize) -> usize {
        self.action[g][c]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Cosets `aH` with `a⁻¹Ka ⊆ H`, i.e. the `K`-fixed points of `G/H`.
    pub fn fixed_cosets(&self, group: &FiniteGroup, k: &Subgroup) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| {
                let a = self.rep(c);
                k.elements().iter().all(|&x| self.subgroup.contains(group.conjugate(group.inv(a), x)))
            })
            .collect()
    }

    /// Whether coset `c` is fixed by every element of `k`.
    pub fn is_fixed(&self, c: usize, k: &Subgroup) -> bool {
        k.elements().iter().all(|&x| self.act(x, c) == c)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// 1-based cycle notation without separators, e.g. `(12)(34)`.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_subgroups(g: &FiniteGroup) -> usize {
        let n = g.order();
        (0u64..(1 << n))
            .filter(|mask| {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                !set.is_empty()
                    && set.iter().all(|&a| set.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1))
            })
            .count()
    }

    #[test]
    fn builtin_orders() {
        assert_eq!(FiniteGroup::builtin(GroupKind::Cyclic(2)).unwrap().order(), 2);
        assert_eq!(FiniteGroup::builtin(GroupKind::Symmetric(3)).unwrap().order(), 6);
        let c1 = FiniteGroup::builtin(GroupKind::Cyclic(1)).unwrap();
        assert_eq!(c1.table(), &[vec![0]]);
        assert_eq!(FiniteGroup::from_key("D4").unwrap().order(), 8);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            FiniteGroup::builtin(GroupKind::Symmetric(6)),
            Err(Error::SizeGuard { .. })
        ));
        assert!(FiniteGroup::builtin(GroupKind::Cyclic(0)).is_err());
    }

    #[test]
    fn axioms_hold_up_to_order_eight() {
        for key in ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "D1", "D2", "D3", "D4", "S1", "S2", "S3"] {
            let g = FiniteGroup::from_key(key).unwrap();
            g.check_axioms().unwrap();
            assert!(g.order() <= 8);
        }
    }

    #[test]
    fn rejects_broken_table() {
        // identity fine but not associative: a Latin square that is not a group
        let bad = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table("bad", bad).is_err());
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for (key, expected) in [("C2", 2), ("S3", 6), ("C4", 3), ("D4", 10)] {
            let g = FiniteGroup::from_key(key).unwrap();
            let subs = g.subgroups();
            assert_eq!(subs.len(), expected, "{key}");
            assert_eq!(subs.len(), brute_force_subgroups(&g), "{key}");
            for h in &subs {
                h.validate(&g).unwrap();
            }
            assert!(subs.windows(2).all(|w| (w[0].order(), &w[0].elements) < (w[1].order(), &w[1].elements)));
        }
    }

    #[test]
    fn coset_spaces() {
        let c2 = FiniteGroup::from_key("C2").unwrap();
        assert_eq!(c2.coset_space(&c2.trivial()).unwrap().len(), 2);
        let s3 = FiniteGroup::from_key("S3").unwrap();
        let t = s3.generated(&[s3.element("(12)").unwrap()]);
        let x = s3.coset_space(&t).unwrap();
        assert_eq!(x.len(), 3);
        // oracle: partition by hand
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for a in s3.elements() {
            let mut c: Vec<usize> = t.elements().iter().map(|&h| s3.mul(a, h)).collect();
            c.sort();
            if !parts.contains(&c) {
                parts.push(c);
            }
        }
        parts.sort();
        assert_eq!(x.cosets(), parts.as_slice());
        assert!(x.cosets()[0].contains(&IDENTITY));
        for g in [c2, s3] {
            assert_eq!(g.coset_space(&g.whole()).unwrap().len(), 1);
        }
    }

    #[test]
    fn coset_space_rejects_non_subgroup() {
        let s3 = FiniteGroup::from_key("S3").unwrap();
        let bogus = Subgroup { elements: vec![0, 1, 2] };
        assert!(s3.coset_space(&bogus).is_err());
    }

    #[test]
    fn action_laws() {
        for key in ["C4", "S3", "D4"] {
            let g = FiniteGroup::from_key(key).unwrap();
            for h in g.subgroups() {
                let x = g.coset_space(&h).unwrap();
                for c in 0..x.len() {
                    assert_eq!(x.act(IDENTITY, c), c);
                    for a in g.elements() {
                        for b in g.elements() {
                            assert_eq!(x.act(g.mul(a, b), c), x.act(a, x.act(b, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_cosets_match_definition() {
        for key in ["C2", "C4", "S3", "D4"] {
            let g = FiniteGroup::from_key(key).unwrap();
            let subs = g.subgroups();
            for h in &subs {
                let x = g.coset_space(h).unwrap();
                for k in &subs {
                    let by_def: Vec<usize> = (0..x.len()).filter(|&c| x.is_fixed(c, k)).collect();
                    assert_eq!(x.fixed_cosets(&g, k), by_def);
                }
            }
        }
    }

    #[test]
    fn fixed_coset_examples() {
        let s3 = FiniteGroup::from_key("S3").unwrap();
        let whole = s3.coset_space(&s3.whole()).unwrap();
        for k in s3.subgroups() {
            assert_eq!(whole.fixed_cosets(&s3, &k), vec![0]);
        }
        let free = s3.coset_space(&s3.trivial()).unwrap();
        let t = s3.generated(&[s3.element("(12)").unwrap()]);
        assert!(free.fixed_cosets(&s3, &t).is_empty());
        let x = s3.coset_space(&t).unwrap();
        assert_eq!(x.fixed_cosets(&s3, &t), vec![0]);
    }

    #[test]
    fn conjugation() {
        let s3 = FiniteGroup::from_key("S3").unwrap();
        let t12 = s3.generated(&[s3.element("(12)").unwrap()]);
        let t23 = s3.generated(&[s3.element("(23)").unwrap()]);
        assert_eq!(s3.conjugate_subgroup(&t12, IDENTITY), t12);
        assert_eq!(s3.conjugate_subgroup(&t12, s3.element("(123)").unwrap()), t23);
        let a3 = s3.generated(&[s3.element("(123)").unwrap()]);
        assert!(s3.is_normal(&a3));
        for a in s3.elements() {
            assert_eq!(s3.conjugate_subgroup(&a3, a), a3);
        }
    }

    #[test]
    fn json_round_trip() {
        let s3 = FiniteGroup::from_key("S3").unwrap();
        let text = s3.to_json().to_string();
        assert_eq!(FiniteGroup::from_json(&text).unwrap(), s3);
        assert!(FiniteGroup::from_json(r#"{"order": 2, "mult": [[0,1],[1,1]]}"#).is_err());
    }
}
