//! Integral homology of truncated simplicial sets via Smith normal form on the
//! normalized chain complex.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;
use crate::simplicial::{SimplicialMap, TruncatedSSet};

/// A sparse integer matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.entries[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.entries[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r].get(&c).copied().unwrap_or(0)
    }

    /// `self · other`
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.rows, other.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (&k, &v) in row {
                for (&c, &w) in &other.entries[k] {
                    out.add(r, c, v * w);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BTreeMap::is_empty)
    }
}

/// Nonzero invariant factors of an integer matrix, in increasing divisibility order.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<u64>> {
    limits::check("boundary matrix dimension", m.rows.max(m.cols), limits::MATRIX_DIM)?;
    let overflow = || Error::verification("integer overflow during Smith normal form");
    let mut rows: Vec<BTreeMap<usize, i128>> =
        m.entries.iter().map(|r| r.iter().map(|(&c, &v)| (c, v as i128)).collect()).collect();
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut ones = 0usize;
    // eliminate unit pivots sparsely; each removes one row and one column
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (&c, &v) in row {
                if v.abs() == 1 {
                    let cost = (row.len() - 1) * (col_rows[c].len() - 1);
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, r, c));
                    }
                    if cost == 0 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let pv = pivot_row[&pc];
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let factor = rows[r][&pc] * pv; // pv = ±1, so v / pv = v * pv
            for (&c, &v) in &pivot_row {
                let e = rows[r].entry(c).or_insert(0);
                let was_zero = *e == 0;
                *e = e.checked_sub(factor.checked_mul(v).ok_or_else(overflow)?).ok_or_else(overflow)?;
                if *e == 0 {
                    rows[r].remove(&c);
                    col_rows[c].remove(&r);
                } else if was_zero {
                    col_rows[c].insert(r);
                }
            }
        }
        // the pivot row's other entries are cleared by column operations
        ones += 1;
    }
    // dense Smith normal form on what is left
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&r| rows[r].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut dense: Vec<Vec<i128>> = live_rows
        .iter()
        .map(|&r| live_cols.iter().map(|c| rows[r].get(c).copied().unwrap_or(0)).collect())
        .collect();
    let mut factors = vec![1u64; ones];
    factors.extend(dense_smith(&mut dense).map_err(|_| overflow())?);
    factors.sort_unstable();
    Ok(factors)
}

fn dense_smith(a: &mut [Vec<i128>]) -> std::result::Result<Vec<u64>, ()> {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < n.min(m) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|b| v.abs() < b.0) {
                    best = Some((v.abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..m {
                        a[i][j] = a[i][j].checked_sub(q.checked_mul(a[t][j]).ok_or(())?).ok_or(())?;
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..m {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = row[j].checked_sub(q.checked_mul(row[t]).ok_or(())?).ok_or(())?;
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // p must divide the rest of the block
                let bad = (t + 1..n).flat_map(|i| (t + 1..m).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..m {
                            a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(())?;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (a[t][t].abs(), t, t);
            for i in t + 1..n {
                if a[i][t] != 0 && a[i][t].abs() < best.0 {
                    best = (a[i][t].abs(), i, t);
                }
            }
            for j in t + 1..m {
                if a[t][j] != 0 && a[t][j].abs() < best.0 {
                    best = (a[t][j].abs(), t, j);
                }
            }
            let (_, bi, bj) = best;
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        out.push(u64::try_from(a[t][t].abs()).map_err(|_| ())?);
        t += 1;
    }
    Ok(out)
}

/// Normalized chain complex of a truncated simplicial set.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    /// Nondegenerate simplices per degree (indices into the simplicial set).
    pub basis: Vec<Vec<u32>>,
    /// `boundaries[q]` is `∂_q : C_q → C_{q-1}` as a `|C_{q-1}| × |C_q|` matrix; `boundaries[0]` is empty.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn normalized(s: &TruncatedSSet) -> Result<Self> {
        let basis: Vec<Vec<u32>> = (0..=s.dim()).map(|q| s.nondegenerate(q)).collect();
        let mut position: Vec<Vec<usize>> = (0..=s.dim()).map(|q| vec![usize::MAX; s.count(q)]).collect();
        for (q, b) in basis.iter().enumerate() {
            for (i, &x) in b.iter().enumerate() {
                position[q][x as usize] = i;
            }
        }
        let mut boundaries = vec![SparseMatrix::zero(0, basis[0].len())];
        for q in 1..=s.dim() {
            limits::check(format!("chains in degree {q}"), basis[q].len(), limits::MATRIX_DIM)?;
            let mut d = SparseMatrix::zero(basis[q - 1].len(), basis[q].len());
            for (j, &x) in basis[q].iter().enumerate() {
                for i in 0..=q {
                    let f = s.face(q, i, x);
                    let r = position[q - 1][f as usize];
                    if r != usize::MAX {
                        d.add(r, j, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            boundaries.push(d);
        }
        Ok(ChainComplex { basis, boundaries })
    }

    pub fn rank(&self, q: usize) -> usize {
        self.basis[q].len()
    }

    /// `∂_{q-1} ∘ ∂_q = 0` for every stored `q`.
    pub fn check_square_zero(&self) -> Result<(), String> {
        for q in 2..self.boundaries.len() {
            if !self.boundaries[q - 1].mul(&self.boundaries[q]).is_zero() {
                return Err(format!("∂∂ ≠ 0 in degree {q}"));
            }
        }
        Ok(())
    }
}

/// Homology in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
    /// False for the top stored degree, where missing higher cells could matter.
    pub trusted: bool,
}

/// Betti numbers and torsion through a degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub groups: Vec<HomologyGroup>,
    pub valid_through: usize,
}

impl HomologyProfile {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// Same groups (Betti and torsion) in every degree of both profiles.
    pub fn same_groups(&self, other: &HomologyProfile) -> bool {
        self.groups.len() == other.groups.len()
            && self.groups.iter().zip(&other.groups).all(|(a, b)| a.betti == b.betti && a.torsion == b.torsion)
    }

    /// Reduced Betti numbers: `H̃_0 = H_0 − 1` when nonempty.
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }
}

fn homology_of(c: &ChainComplex, through: usize, dim: usize) -> Result<HomologyProfile> {
    let mut factors = Vec::with_capacity(through + 2);
    for q in 0..=through + 1 {
        factors.push(if q == 0 || q > dim { Vec::new() } else { invariant_factors(&c.boundaries[q])? });
    }
    let groups = (0..=through)
        .map(|q| {
            let rank_out = factors[q].len();
            let rank_in = factors[q + 1].len();
            HomologyGroup {
                degree: q,
                betti: c.rank(q) - rank_out - rank_in,
                torsion: factors[q + 1].iter().copied().filter(|&d| d > 1).collect(),
                trusted: q < dim,
            }
        })
        .collect();
    Ok(HomologyProfile { groups, valid_through: dim.saturating_sub(1) })
}

/// Integral homology of `s` in degrees `0..=through`; requires `through < dim(s)`.
pub fn homology(s: &TruncatedSSet, through: usize) -> Result<HomologyProfile> {
    if through >= s.dim() {
        return Err(Error::invalid(format!(
            "homology through degree {through} needs a simplicial set built to dimension {} (have {})",
            through + 1,
            s.dim()
        )));
    }
    homology_of(&ChainComplex::normalized(s)?, through, s.dim())
}

/// Whether `f` induces isomorphisms on integral homology in degrees `0..=through`.
///
/// Exact test: the mapping cone is acyclic through `through` (so `f_*` is onto
/// in those degrees and one-to-one below the top), and the top groups are
/// abstractly isomorphic, which forces the surjection there to be injective.
pub fn induces_homology_iso(
    f: &SimplicialMap,
    s: &TruncatedSSet,
    t: &TruncatedSSet,
    through: usize,
) -> Result<HomologyIsoEvidence> {
    if through >= s.dim() || through >= t.dim() {
        return Err(Error::invalid("both simplicial sets must be built past the compared degrees"));
    }
    let cs = ChainComplex::normalized(s)?;
    let ct = ChainComplex::normalized(t)?;
    let hs = homology_of(&cs, through, s.dim())?;
    let ht = homology_of(&ct, through, t.dim())?;
    // chain map on normalized chains: degenerate images vanish
    let mut pos_t: Vec<Vec<usize>> = (0..=t.dim()).map(|q| vec![usize::MAX; t.count(q)]).collect();
    for (q, b) in ct.basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            pos_t[q][x as usize] = i;
        }
    }
    let top = through + 1;
    let chain_map = |q: usize| {
        let mut m = SparseMatrix::zero(ct.rank(q), cs.rank(q));
        for (j, &x) in cs.basis[q].iter().enumerate() {
            let r = pos_t[q][f.degrees[q][x as usize] as usize];
            if r != usize::MAX {
                m.add(r, j, 1);
            }
        }
        m
    };
    // cone_q = T_q ⊕ S_{q-1}, ∂(t, s) = (∂t + f s, −∂s)
    let cone_rank = |q: usize| ct.rank(q) + if q == 0 { 0 } else { cs.rank(q - 1) };
    let mut cone_factors = vec![Vec::new()];
    for q in 1..=top {
        let mut d = SparseMatrix::zero(cone_rank(q - 1), cone_rank(q));
        let tq = ct.rank(q);
        let tq1 = ct.rank(q - 1);
        for (r, row) in ct.boundaries[q].entries.iter().enumerate() {
            for (&c, &v) in row {
                d.add(r, c, v);
            }
        }
        for (r, row) in chain_map(q - 1).entries.iter().enumerate() {
            for (&c, &v) in row {
                d.add(r, tq + c, v);
            }
        }
        if q >= 2 {
            for (r, row) in cs.boundaries[q - 1].entries.iter().enumerate() {
                for (&c, &v) in row {
                    d.add(tq1 + r, tq + c, -v);
                }
            }
        }
        cone_factors.push(invariant_factors(&d)?);
    }
    let cone_acyclic = (0..=through).all(|q| {
        let out = cone_factors[q].len();
        let inn = cone_factors[q + 1].len();
        cone_rank(q) == out + inn && cone_factors[q + 1].iter().all(|&d| d == 1)
    });
    let same = hs.same_groups(&ht);
    Ok(HomologyIsoEvidence { source: hs, target: ht, cone_acyclic, isomorphic: cone_acyclic && same })
}

/// Homology of both sides and the outcome of the cone test.
#[derive(Debug, Clone, Serialize)]
pub struct HomologyIsoEvidence {
    pub source: HomologyProfile,
    pub target: HomologyProfile,
    pub cone_acyclic: bool,
    pub isomorphic: bool,
}
