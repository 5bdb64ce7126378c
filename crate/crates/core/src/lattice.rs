//! Finite bounded distributive lattices realized as families of subsets of a
//! finite ground set.
//!
//! Elements are canonical sorted point-id lists. A lattice produced by
//! [`generate_sublattice`] is closed under intersection and union, its bottom
//! is the empty set and its top is the union of the generators. Element indices
//! are assigned in discovery order: the (deduplicated) generators first, then
//! new meets and joins found by scanning index pairs `(i, j)`, `j < i`, in
//! increasing `i`; the bottom and top are appended last if still missing.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 4096;

static NEXT_LATTICE_ID: AtomicU64 = AtomicU64::new(1);

/// Sorted, duplicate-free list of point ids.
pub type PointSet = Vec<u32>;

#[derive(Debug, Clone)]
pub struct FiniteLattice {
    id: u64,
    ground: u32,
    elements: Vec<PointSet>,
    index: BTreeMap<PointSet, usize>,
    meet_table: Vec<u32>,
    join_table: Vec<u32>,
    bottom: usize,
    top: usize,
}

/// An element handle tied to the lattice it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeElement {
    lattice: u64,
    index: usize,
}

impl LatticeElement {
    pub fn index(&self) -> usize {
        self.index
    }
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && self.elements == other.elements
            && self.meet_table == other.meet_table
            && self.join_table == other.join_table
    }
}

impl Eq for FiniteLattice {}

pub fn intersect(a: &[u32], b: &[u32]) -> PointSet {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn union(a: &[u32], b: &[u32]) -> PointSet {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn is_subset(a: &[u32], b: &[u32]) -> bool {
    intersect(a, b).len() == a.len()
}

fn canonical(set: &[u32]) -> PointSet {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Smallest family containing `generators`, the empty set and the union of the
/// generators that is closed under intersection and union.
pub fn generate_sublattice(ground: u32, generators: &[PointSet]) -> Result<FiniteLattice> {
    generate_sublattice_capped(ground, generators, DEFAULT_ELEMENT_CAP)
}

pub fn generate_sublattice_capped(
    ground: u32,
    generators: &[PointSet],
    cap: usize,
) -> Result<FiniteLattice> {
    let mut elements: Vec<PointSet> = Vec::new();
    let mut index: BTreeMap<PointSet, usize> = BTreeMap::new();
    let mut push = |set: PointSet, elements: &mut Vec<PointSet>| -> Result<()> {
        if !index.contains_key(&set) {
            if elements.len() >= cap {
                return Err(Error::Resource(format!(
                    "sublattice closure exceeds element cap {cap}"
                )));
            }
            index.insert(set.clone(), elements.len());
            elements.push(set);
        }
        Ok(())
    };
    for (g, gen) in generators.iter().enumerate() {
        if let Some(p) = gen.iter().find(|&&p| p >= ground) {
            return Err(Error::Input(format!(
                "generator {g} contains point {p} outside ground set of size {ground}"
            )));
        }
        push(canonical(gen), &mut elements)?;
    }
    let mut i = 0;
    while i < elements.len() {
        for j in 0..i {
            let m = intersect(&elements[i], &elements[j]);
            push(m, &mut elements)?;
            let u = union(&elements[i], &elements[j]);
            push(u, &mut elements)?;
        }
        i += 1;
    }
    let top_set = elements.iter().fold(Vec::new(), |acc, e| union(&acc, e));
    push(Vec::new(), &mut elements)?;
    push(top_set, &mut elements)?;
    drop(push);
    FiniteLattice::from_closed_family(ground, elements)
}

impl FiniteLattice {
    /// Builds tables for a family that is already closed under ∩ and ∪ and
    /// contains ∅ and the union of all members.
    pub fn from_closed_family(ground: u32, elements: Vec<PointSet>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate element at index {i}")));
            }
        }
        let n = elements.len();
        let lookup = |s: &PointSet| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::Input(format!("family not closed: {s:?} missing")))
        };
        let mut meet_table = Vec::with_capacity(n * n);
        let mut join_table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                meet_table.push(lookup(&intersect(a, b))? as u32);
                join_table.push(lookup(&union(a, b))? as u32);
            }
        }
        let bottom = lookup(&Vec::new())?;
        let top_set = elements.iter().fold(Vec::new(), |acc, e| union(&acc, e));
        let top = lookup(&top_set)?;
        Ok(FiniteLattice {
            id: NEXT_LATTICE_ID.fetch_add(1, Ordering::Relaxed),
            ground,
            elements,
            index,
            meet_table,
            join_table,
            bottom,
            top,
        })
    }

    /// Same family with element `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::Usage(format!("permutation of length {} for {n} elements", perm.len())));
        }
        let mut slots: Vec<Option<PointSet>> = alloc::vec![None; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || slots[p].is_some() {
                return Err(Error::Usage("not a permutation".into()));
            }
            slots[p] = Some(self.elements[i].clone());
        }
        Self::from_closed_family(self.ground, slots.into_iter().map(Option::unwrap).collect())
    }

    pub fn ground_size(&self) -> u32 {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.bottom == self.top
    }

    pub fn elements(&self) -> &[PointSet] {
        &self.elements
    }

    pub fn set(&self, i: usize) -> &[u32] {
        &self.elements[i]
    }

    pub fn index_of(&self, set: &[u32]) -> Option<usize> {
        self.index.get(&canonical(set)).copied()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn meet_idx(&self, a: usize, b: usize) -> usize {
        self.meet_table[a * self.len() + b] as usize
    }

    #[inline]
    pub fn join_idx(&self, a: usize, b: usize) -> usize {
        self.join_table[a * self.len() + b] as usize
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.meet_idx(a, b) == a
    }

    pub fn element(&self, index: usize) -> Result<LatticeElement> {
        if index >= self.len() {
            return Err(Error::Usage(format!("element index {index} out of range")));
        }
        Ok(LatticeElement { lattice: self.id, index })
    }

    fn own(&self, e: LatticeElement) -> Result<usize> {
        if e.lattice != self.id {
            return Err(Error::Usage("element belongs to a different lattice".into()));
        }
        Ok(e.index)
    }

    pub fn meet(&self, a: LatticeElement, b: LatticeElement) -> Result<LatticeElement> {
        let m = self.meet_idx(self.own(a)?, self.own(b)?);
        self.element(m)
    }

    pub fn join(&self, a: LatticeElement, b: LatticeElement) -> Result<LatticeElement> {
        let j = self.join_idx(self.own(a)?, self.own(b)?);
        self.element(j)
    }

    /// Minimal nonzero elements, by index.
    pub fn atoms(&self) -> Vec<LatticeElement> {
        self.atom_indices()
            .into_iter()
            .map(|index| LatticeElement { lattice: self.id, index })
            .collect()
    }

    pub fn atom_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&e| {
                e != self.bottom
                    && (0..self.len())
                        .all(|f| f == e || f == self.bottom || !self.leq_idx(f, e))
            })
            .collect()
    }

    /// Overwrites one meet-table entry. Only useful for exercising [`check_axioms`].
    #[doc(hidden)]
    pub fn corrupt_meet_entry(&mut self, a: usize, b: usize, value: usize) {
        let n = self.len();
        self.meet_table[a * n + b] = value as u32;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Law {
    MeetTable,
    JoinTable,
    Idempotence,
    Commutativity,
    Associativity,
    Absorption,
    Distributivity,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub law: Law,
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks the lattice laws over all pairs and triples, and the
/// agreement of the tables with set intersection and union.
pub fn check_axioms(l: &FiniteLattice) -> AxiomReport {
    let n = l.len();
    let mut violations = Vec::new();
    let mut report = |law, elements: &[usize]| {
        violations.push(Violation { law, elements: elements.to_vec() })
    };
    for a in 0..n {
        if l.meet_idx(a, a) != a || l.join_idx(a, a) != a {
            report(Law::Idempotence, &[a]);
        }
        for b in 0..n {
            if l.set(l.meet_idx(a, b)) != intersect(l.set(a), l.set(b)).as_slice() {
                report(Law::MeetTable, &[a, b]);
            }
            if l.set(l.join_idx(a, b)) != union(l.set(a), l.set(b)).as_slice() {
                report(Law::JoinTable, &[a, b]);
            }
            if l.meet_idx(a, b) != l.meet_idx(b, a) || l.join_idx(a, b) != l.join_idx(b, a) {
                report(Law::Commutativity, &[a, b]);
            }
            if l.join_idx(a, l.meet_idx(a, b)) != a || l.meet_idx(a, l.join_idx(a, b)) != a {
                report(Law::Absorption, &[a, b]);
            }
            for c in 0..n {
                let assoc_meet = l.meet_idx(a, l.meet_idx(b, c)) == l.meet_idx(l.meet_idx(a, b), c);
                let assoc_join = l.join_idx(a, l.join_idx(b, c)) == l.join_idx(l.join_idx(a, b), c);
                if !assoc_meet || !assoc_join {
                    report(Law::Associativity, &[a, b, c]);
                }
                let d_meet = l.meet_idx(a, l.join_idx(b, c))
                    == l.join_idx(l.meet_idx(a, b), l.meet_idx(a, c));
                let d_join = l.join_idx(a, l.meet_idx(b, c))
                    == l.meet_idx(l.join_idx(a, b), l.join_idx(a, c));
                if !d_meet || !d_join {
                    report(Law::Distributivity, &[a, b, c]);
                }
            }
        }
    }
    drop(report);
    AxiomReport { violations }
}
