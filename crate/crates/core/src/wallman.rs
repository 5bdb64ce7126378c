//! Wallman spaces of finite distributive lattices.
//!
//! In a finite lattice every proper filter is principal and the maximal
//! ones are generated by atoms, so the points of the Wallman space are the
//! atoms and `hom(e)` is the set of atoms below `e`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::lattice::{intersect, union, FiniteLattice, PointSet};

/// A finite space given by a base for its closed sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    /// Number of points; points are `0..points`.
    pub points: u32,
    /// Base sets, indexed like the source lattice's elements.
    pub base: Vec<PointSet>,
    /// All closed sets: the closure of the base under union and intersection.
    pub closed: Vec<PointSet>,
}

/// Wallman space of `l` and the homomorphism `hom` (as base-set indices).
#[derive(Debug, Clone)]
pub struct Wallman {
    pub space: FiniteSpace,
    /// Atom (lattice element index) behind each point.
    pub atoms: Vec<usize>,
    /// `hom[e]` is the set of points below element `e`.
    pub hom: Vec<PointSet>,
    lattice: FiniteLattice,
}

pub fn wallman_space(l: &FiniteLattice) -> Wallman {
    let atoms = if l.is_trivial() { Vec::new() } else { l.atom_indices() };
    let hom: Vec<PointSet> = (0..l.len())
        .map(|e| {
            atoms
                .iter()
                .enumerate()
                .filter(|&(_, &a)| l.leq_idx(a, e))
                .map(|(p, _)| p as u32)
                .collect()
        })
        .collect();
    let mut closed: Vec<PointSet> = Vec::new();
    for s in &hom {
        if !closed.contains(s) {
            closed.push(s.clone());
        }
    }
    let full: PointSet = (0..atoms.len() as u32).collect();
    for s in [Vec::new(), full] {
        if !closed.contains(&s) {
            closed.push(s);
        }
    }
    let mut i = 0;
    while i < closed.len() {
        for j in 0..i {
            for s in [intersect(&closed[i], &closed[j]), union(&closed[i], &closed[j])] {
                if !closed.contains(&s) {
                    closed.push(s);
                }
            }
        }
        i += 1;
    }
    closed.sort();
    let space = FiniteSpace { points: atoms.len() as u32, base: hom.clone(), closed };
    Wallman { space, atoms, hom, lattice: l.clone() }
}

impl Wallman {
    /// `hom` is injective on lattice elements.
    pub fn is_isomorphic(&self) -> bool {
        let mut seen = BTreeMap::new();
        self.hom.iter().enumerate().all(|(i, s)| seen.insert(s.clone(), i).is_none())
    }

    /// `hom(a ^ b) = hom(a) ∩ hom(b)` and `hom(a v b) = hom(a) ∪ hom(b)` for all pairs.
    pub fn is_homomorphism(&self) -> bool {
        let l = &self.lattice;
        (0..l.len()).all(|a| {
            (0..l.len()).all(|b| {
                self.hom[l.meet_idx(a, b)] == intersect(&self.hom[a], &self.hom[b])
                    && self.hom[l.join_idx(a, b)] == union(&self.hom[a], &self.hom[b])
            })
        })
    }

    /// Distinct points are separated by base elements: for `p != q` there are
    /// `x, y` with `p ∉ hom(x)`, `q ∉ hom(y)` and `x v y = 1` in the lattice.
    /// For finite distributive lattices this is equivalent to normality.
    pub fn is_hausdorff_like(&self) -> bool {
        let l = &self.lattice;
        let n = self.atoms.len() as u32;
        (0..n).all(|p| {
            (0..n).filter(|&q| q != p).all(|q| {
                (0..l.len()).any(|x| {
                    !self.hom[x].contains(&p)
                        && (0..l.len())
                            .any(|y| !self.hom[y].contains(&q) && l.join_idx(x, y) == l.top())
                })
            })
        })
    }
}

impl FiniteSpace {
    /// Every singleton is closed.
    #[allow(non_snake_case)]
    pub fn is_T1(&self) -> bool {
        (0..self.points).all(|p| self.closed.iter().any(|s| s.as_slice() == [p]))
    }

    /// Every subset is closed.
    pub fn is_discrete(&self) -> bool {
        self.is_T1()
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points as usize
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }
}

/// A violated condition of the continuous-image criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContImageViolation {
    /// `phi(∅) != ∅`.
    EmptyNotPreserved,
    /// `F != ∅` but `phi(F) = ∅`.
    NonemptyCollapsed(String),
    /// `F ∪ G = Y` but `phi(F) ∪ phi(G) != X`.
    CoverNotPreserved(String, String),
    /// The listed sets have empty intersection but their images do not.
    DisjointnessNotPreserved(Vec<String>),
}

/// Checks the three conditions under which a base map witnesses `Y` as a
/// continuous image of `X`: emptiness is preserved and reflected, covering
/// pairs map to covering pairs, and families of at most `arity_cap` sets
/// with empty intersection keep an empty intersection.
pub fn check_contimage_conditions(
    y_points: u32,
    base: &[(String, PointSet)],
    x_points: u32,
    phi: &BTreeMap<String, PointSet>,
    arity_cap: usize,
) -> Vec<ContImageViolation> {
    let mut out = Vec::new();
    let y_full: PointSet = (0..y_points).collect();
    let x_full: PointSet = (0..x_points).collect();
    let image = |name: &String| phi.get(name).cloned().unwrap_or_default();
    for (name, set) in base {
        let img = image(name);
        if set.is_empty() && !img.is_empty() && !out.contains(&ContImageViolation::EmptyNotPreserved)
        {
            out.push(ContImageViolation::EmptyNotPreserved);
        }
        if !set.is_empty() && img.is_empty() {
            out.push(ContImageViolation::NonemptyCollapsed(name.clone()));
        }
    }
    for (i, (f, fs)) in base.iter().enumerate() {
        for (g, gs) in &base[i..] {
            if union(fs, gs) == y_full && union(&image(f), &image(g)) != x_full {
                out.push(ContImageViolation::CoverNotPreserved(f.clone(), g.clone()));
            }
        }
    }
    // Minimal families only: a family is reported when its intersection is
    // empty but every proper subfamily's is not.
    let mut stack: Vec<(Vec<usize>, PointSet, PointSet)> = Vec::new();
    for i in 0..base.len() {
        stack.push((alloc::vec![i], base[i].1.clone(), image(&base[i].0)));
    }
    while let Some((idx, inter, img)) = stack.pop() {
        if inter.is_empty() {
            if idx.len() >= 2 && !img.is_empty() {
                out.push(ContImageViolation::DisjointnessNotPreserved(
                    idx.iter().map(|&i| base[i].0.clone()).collect(),
                ));
            }
            continue;
        }
        if idx.len() == arity_cap {
            continue;
        }
        let last = *idx.last().expect("nonempty");
        for j in last + 1..base.len() {
            let mut next = idx.clone();
            next.push(j);
            stack.push((next, intersect(&inter, &base[j].1), intersect(&img, &image(&base[j].0))));
        }
    }
    out.sort_by_key(violation_order);
    out
}

fn violation_order(v: &ContImageViolation) -> (u8, Vec<String>) {
    match v {
        ContImageViolation::EmptyNotPreserved => (0, Vec::new()),
        ContImageViolation::NonemptyCollapsed(a) => (1, alloc::vec![a.clone()]),
        ContImageViolation::CoverNotPreserved(a, b) => (2, alloc::vec![a.clone(), b.clone()]),
        ContImageViolation::DisjointnessNotPreserved(v) => (3, v.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folang::{eval, library::by_name, Interpretation};
    use crate::lattice::generate_sublattice;
    use alloc::vec;

    fn holds(name: &str, l: &FiniteLattice) -> bool {
        eval(&by_name(name).unwrap(), l, &Interpretation::new()).unwrap().holds
    }

    #[test]
    fn powerset_is_discrete_and_isomorphic() {
        let l = generate_sublattice(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let w = wallman_space(&l);
        assert_eq!(w.space.points, 3);
        assert!(w.is_isomorphic() && w.is_homomorphism());
        for e in 0..l.len() {
            assert_eq!(w.hom[e], l.set(e).to_vec());
        }
        assert!(w.space.is_T1() && w.is_hausdorff_like());
    }

    #[test]
    fn chain_collapses_to_one_point() {
        let l = generate_sublattice(2, &[vec![0], vec![0, 1]]).unwrap();
        let w = wallman_space(&l);
        assert_eq!(w.space.points, 1);
        assert_eq!(w.hom[l.bottom()], Vec::<u32>::new());
        let mid = l.index_of(&[0]).unwrap();
        assert_eq!(w.hom[mid], vec![0]);
        assert_eq!(w.hom[l.top()], vec![0]);
        assert!(!w.is_isomorphic());
        assert!(w.is_homomorphism());
        assert!(w.space.is_T1() && w.is_hausdorff_like());
    }

    #[test]
    fn diamond_has_two_points() {
        let l = generate_sublattice(2, &[vec![0], vec![1]]).unwrap();
        let w = wallman_space(&l);
        assert_eq!(w.space.points, 2);
        assert!(w.is_hausdorff_like());
    }

    #[test]
    fn trivial_lattice_is_empty_space() {
        let l = generate_sublattice(1, &[]).unwrap();
        let w = wallman_space(&l);
        assert!(w.space.is_empty());
        assert!(w.space.is_T1() && w.is_hausdorff_like());
    }

    #[test]
    fn non_normal_lattice_with_discrete_space() {
        // 0 < {0},{1} < {0,1} < {0,1,2}: two atoms, but {0} and {1} cannot be
        // separated by elements joining to the top.
        let l = generate_sublattice(3, &[vec![0], vec![1], vec![0, 1, 2]]).unwrap();
        let w = wallman_space(&l);
        assert!(w.space.is_discrete());
        assert_eq!(holds("NORM", &l), w.is_hausdorff_like());
        assert!(!holds("NORM", &l));
    }

    #[test]
    fn contimage_examples() {
        let base: Vec<(String, PointSet)> = vec![
            ("empty".into(), vec![]),
            ("l".into(), vec![0]),
            ("r".into(), vec![1]),
            ("all".into(), vec![0, 1]),
        ];
        let identity: BTreeMap<String, PointSet> = base.iter().cloned().collect();
        assert!(check_contimage_conditions(2, &base, 2, &identity, 3).is_empty());

        let mut swollen = identity.clone();
        for k in ["l", "r", "all"] {
            swollen.insert(k.into(), vec![0, 1]);
        }
        let v = check_contimage_conditions(2, &base, 2, &swollen, 3);
        assert_eq!(
            v,
            vec![ContImageViolation::DisjointnessNotPreserved(vec!["l".into(), "r".into()])]
        );

        let mut bad = identity;
        bad.insert("empty".into(), vec![0, 1]);
        let v = check_contimage_conditions(2, &base, 2, &bad, 3);
        assert!(v.contains(&ContImageViolation::EmptyNotPreserved));
    }
}
