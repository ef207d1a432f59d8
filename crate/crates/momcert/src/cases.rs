//! Combinatorics of geometric Mom-n structures over the orthoclass indices
//! `{1, 2, 3}`: triple-type validity, Mom-2/Mom-3 detection,
//! torus-friendliness, and the eighteen maximal collections that the
//! certifier must rule out one by one.
//!
//! Duplicate triple types in a collection stand for distinct
//! fundamental-group-inequivalent triples of the same type, so collections
//! are multisets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("triple indices must lie in 1..=4")]
    IndexRange,
    /// `(n, n, n)` triples cannot occur.
    #[error("(n,n,n) triples do not exist")]
    AllEqual,
    #[error("operation requires a geometric Mom-2 or Mom-3")]
    NotAMom,
}

/// An unordered index triple `(p, q, r)`, stored sorted ascending. Not all
/// three indices may coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 3]", into = "[u8; 3]")]
pub struct TripleType {
    p: u8,
    q: u8,
    r: u8,
}

impl TripleType {
    pub fn new(a: u8, b: u8, c: u8) -> Result<TripleType, CaseError> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] < 1 || v[2] > 4 {
            return Err(CaseError::IndexRange);
        }
        if v[0] == v[2] {
            return Err(CaseError::AllEqual);
        }
        Ok(TripleType {
            p: v[0],
            q: v[1],
            r: v[2],
        })
    }

    pub fn indices(&self) -> [u8; 3] {
        [self.p, self.q, self.r]
    }

    /// All three indices pairwise distinct (the only shape the
    /// torus-friendliness restriction cares about).
    pub fn all_distinct(&self) -> bool {
        self.p != self.q && self.q != self.r
    }

    /// The seven valid types over the index set `{1, 2, 3}`.
    pub fn all_over_123() -> Vec<TripleType> {
        let mut out = Vec::new();
        for a in 1..=3u8 {
            for b in a..=3 {
                for c in b..=3 {
                    if let Ok(t) = TripleType::new(a, b, c) {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

impl TryFrom<[u8; 3]> for TripleType {
    type Error = CaseError;
    fn try_from(v: [u8; 3]) -> Result<TripleType, CaseError> {
        TripleType::new(v[0], v[1], v[2])
    }
}

impl From<TripleType> for [u8; 3] {
    fn from(t: TripleType) -> [u8; 3] {
        t.indices()
    }
}

/// A multiset of triple types.
pub type TripleCollection = Vec<TripleType>;

/// One of the eighteen maximal combinations, identified by its position in
/// the canonical list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: u32,
    pub triples: Vec<TripleType>,
}

impl CaseSpec {
    /// Ad-hoc collection (tests, custom certifications). `id` 0 is reserved
    /// for synthetic cases.
    pub fn custom(id: u32, triples: Vec<TripleType>) -> CaseSpec {
        CaseSpec { id, triples }
    }
}

/// True iff `coll` is a geometric Mom-n: exactly `n` triples whose indices
/// all come from a single n-element index set.
pub fn is_geometric_mom_n(coll: &[TripleType], n: usize) -> bool {
    if coll.len() != n {
        return false;
    }
    let mut distinct: Vec<u8> = coll.iter().flat_map(|t| t.indices()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len() <= n
}

/// Torus-friendliness of a geometric Mom-2 or Mom-3: a Mom-2 always is; a
/// Mom-3 fails only when some type with three distinct indices occurs
/// exactly twice.
pub fn is_torus_friendly(coll: &[TripleType]) -> Result<bool, CaseError> {
    if is_geometric_mom_n(coll, 2) {
        return Ok(true);
    }
    if !is_geometric_mom_n(coll, 3) {
        return Err(CaseError::NotAMom);
    }
    for t in coll {
        if t.all_distinct() {
            let count = coll.iter().filter(|u| *u == t).count();
            if count == 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff some sub-multiset of `coll` is a torus-friendly geometric Mom-2
/// or Mom-3.
pub fn contains_certifiable_mom(coll: &[TripleType]) -> bool {
    let n = coll.len();
    // Size-2 sub-multisets: candidate Mom-2s.
    for i in 0..n {
        for j in (i + 1)..n {
            let sub = [coll[i], coll[j]];
            if is_geometric_mom_n(&sub, 2) {
                return true; // Mom-2s are always torus-friendly
            }
        }
    }
    // Size-3 sub-multisets: candidate Mom-3s.
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let sub = [coll[i], coll[j], coll[k]];
                if is_geometric_mom_n(&sub, 3) && is_torus_friendly(&sub) == Ok(true) {
                    return true;
                }
            }
        }
    }
    false
}

/// The eighteen maximal combinations of triples over `{1, 2, 3}` containing
/// no torus-friendly geometric Mom-2 or Mom-3, in canonical order.
pub fn the_18_cases() -> Vec<CaseSpec> {
    let t = |a, b, c| TripleType::new(a, b, c).expect("valid type");
    let table: [Vec<TripleType>; 18] = [
        vec![t(1, 1, 2), t(1, 1, 3)],
        vec![t(1, 1, 2), t(1, 3, 3)],
        vec![t(1, 1, 2), t(2, 2, 3)],
        vec![t(1, 1, 2), t(2, 3, 3)],
        vec![t(1, 2, 2), t(1, 1, 3)],
        vec![t(1, 2, 2), t(1, 3, 3)],
        vec![t(1, 2, 2), t(2, 2, 3)],
        vec![t(1, 2, 2), t(2, 3, 3)],
        vec![t(1, 1, 3), t(2, 2, 3)],
        vec![t(1, 1, 3), t(2, 3, 3)],
        vec![t(1, 3, 3), t(2, 2, 3)],
        vec![t(1, 3, 3), t(2, 3, 3)],
        vec![t(1, 1, 2), t(1, 2, 3), t(1, 2, 3)],
        vec![t(1, 2, 2), t(1, 2, 3), t(1, 2, 3)],
        vec![t(1, 1, 3), t(1, 2, 3), t(1, 2, 3)],
        vec![t(1, 3, 3), t(1, 2, 3), t(1, 2, 3)],
        vec![t(2, 2, 3), t(1, 2, 3), t(1, 2, 3)],
        vec![t(2, 3, 3), t(1, 2, 3), t(1, 2, 3)],
    ];
    table
        .into_iter()
        .enumerate()
        .map(|(i, triples)| CaseSpec {
            id: i as u32 + 1,
            triples,
        })
        .collect()
}

/// A case is maximal when it contains no certifiable Mom and every single
/// added triple type over `{1, 2, 3}` (duplicates included) creates one.
pub fn verify_maximality(case: &CaseSpec) -> bool {
    if contains_certifiable_mom(&case.triples) {
        return false;
    }
    for t in TripleType::all_over_123() {
        let mut extended = case.triples.clone();
        extended.push(t);
        if !contains_certifiable_mom(&extended) {
            return false;
        }
    }
    true
}

/// Every multiset over the seven valid types with per-type multiplicity at
/// most `mult_cap` and total size at most `size_cap`, in a deterministic
/// order. Three copies of any one type already form a torus-friendly Mom-3,
/// so multiplicities above 3 never appear in Mom-free collections and the
/// cap loses nothing.
pub fn enumerate_collections(size_cap: usize, mult_cap: usize) -> Vec<TripleCollection> {
    let types = TripleType::all_over_123();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<TripleCollection> = vec![Vec::new()];
    for _ in 0..size_cap {
        let mut next = Vec::new();
        for coll in &frontier {
            let start = coll
                .last()
                .map(|t| types.iter().position(|u| u == t).unwrap())
                .unwrap_or(0);
            for t in types.iter().skip(start) {
                let count = coll.iter().filter(|u| **u == *t).count();
                if count >= mult_cap {
                    continue;
                }
                let mut bigger = coll.clone();
                bigger.push(*t);
                next.push(bigger);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// True iff `sub` is a sub-multiset of `sup`.
pub fn is_sub_multiset(sub: &[TripleType], sup: &[TripleType]) -> bool {
    let mut avail = sup.to_vec();
    for t in sub {
        match avail.iter().position(|u| u == t) {
            Some(i) => {
                avail.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}
