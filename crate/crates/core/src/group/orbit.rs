use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use super::{FormAction, SympMatrix};
use crate::forms::QuadraticForm;
use crate::gf2::{BitVector, Subspace};

/// A group given by generators acting on some set of points.
pub trait GroupAction {
    type Point: Clone + Eq + Hash;

    fn ngens(&self) -> usize;

    fn act(&self, gen: usize, p: &Self::Point) -> Self::Point;
}

pub struct OnVectors<'a>(pub &'a [SympMatrix]);

impl GroupAction for OnVectors<'_> {
    type Point = BitVector;
    fn ngens(&self) -> usize {
        self.0.len()
    }
    fn act(&self, gen: usize, p: &BitVector) -> BitVector {
        self.0[gen].apply(*p)
    }
}

pub struct OnForms(pub Vec<FormAction>);

impl OnForms {
    pub fn new(gens: &[SympMatrix]) -> Self {
        OnForms(gens.iter().map(|&g| FormAction::new(g)).collect())
    }
}

impl GroupAction for OnForms {
    type Point = QuadraticForm;
    fn ngens(&self) -> usize {
        self.0.len()
    }
    fn act(&self, gen: usize, p: &QuadraticForm) -> QuadraticForm {
        self.0[gen].apply(*p)
    }
}

/// The diagonal action on ordered pairs of forms.
pub struct OnFormPairs(pub Vec<FormAction>);

impl OnFormPairs {
    pub fn new(gens: &[SympMatrix]) -> Self {
        OnFormPairs(gens.iter().map(|&g| FormAction::new(g)).collect())
    }
}

impl GroupAction for OnFormPairs {
    type Point = (QuadraticForm, QuadraticForm);
    fn ngens(&self) -> usize {
        self.0.len()
    }
    fn act(&self, gen: usize, p: &Self::Point) -> Self::Point {
        (self.0[gen].apply(p.0), self.0[gen].apply(p.1))
    }
}

pub struct OnSubspaces<'a>(pub &'a [SympMatrix]);

impl GroupAction for OnSubspaces<'_> {
    type Point = Subspace;
    fn ngens(&self) -> usize {
        self.0.len()
    }
    fn act(&self, gen: usize, p: &Subspace) -> Subspace {
        let g = &self.0[gen];
        Subspace::span_of(p.ambient_dim(), p.rows().iter().map(|&r| g.apply(r)))
    }
}

/// The orbit of `seed` in breadth-first discovery order, generators applied
/// in list order.
pub fn orbit_bfs<A: GroupAction>(action: &A, seed: A::Point) -> Vec<A::Point> {
    let mut seen: HashSet<A::Point> = HashSet::new();
    let mut out = vec![seed.clone()];
    seen.insert(seed);
    let mut head = 0;
    while head < out.len() {
        let p = out[head].clone();
        head += 1;
        for gen in 0..action.ngens() {
            let q = action.act(gen, &p);
            if seen.insert(q.clone()) {
                out.push(q);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitPart<P> {
    pub representative: P,
    pub size: usize,
    pub members: Vec<P>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitPartition<P> {
    pub parts: Vec<OrbitPart<P>>,
}

impl<P> OrbitPartition<P> {
    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.size).collect()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().map(|p| p.size).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Partitions `points` into orbits; parts appear in order of their first
/// point in `points`. Points outside `points` reached by the action are an
/// error in the caller's set and are reported by panicking in debug builds.
pub fn orbit_partition<A: GroupAction>(
    action: &A,
    points: impl IntoIterator<Item = A::Point>,
) -> OrbitPartition<A::Point> {
    let points: Vec<A::Point> = points.into_iter().collect();
    let index: HashMap<A::Point, usize> =
        points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut done = vec![false; points.len()];
    let mut parts = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if done[i] {
            continue;
        }
        let members = orbit_bfs(action, p.clone());
        for m in &members {
            let j = *index.get(m).expect("action leaves the point set");
            done[j] = true;
        }
        parts.push(OrbitPart { representative: p.clone(), size: members.len(), members });
    }
    OrbitPartition { parts }
}

/// All elements of the group generated by `gens` (breadth-first from the
/// identity), or `None` if more than `cap` elements are found.
pub fn closure(gens: &[SympMatrix], cap: Option<usize>) -> Option<Vec<SympMatrix>> {
    let n = gens.first().map(|g| g.n()).unwrap_or(1);
    let mut seen: HashSet<SympMatrix> = HashSet::new();
    let id = SympMatrix::identity(n);
    seen.insert(id);
    let mut out = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                out.push(y);
                queue.push_back(y);
                if cap.is_some_and(|c| out.len() > c) {
                    return None;
                }
            }
        }
    }
    Some(out)
}

pub fn closure_order(gens: &[SympMatrix], cap: Option<usize>) -> Option<usize> {
    let n = gens.first().map(|g| g.n()).unwrap_or(1);
    let mut seen: HashSet<SympMatrix> = HashSet::new();
    let id = SympMatrix::identity(n);
    seen.insert(id);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                queue.push_back(y);
                if cap.is_some_and(|c| seen.len() > c) {
                    return None;
                }
            }
        }
    }
    Some(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{base_form, Eps, FormIndex};
    use crate::group::{all_transvections, transvection};

    #[test]
    fn empty_generators_give_singletons() {
        let orb = orbit_bfs(&OnForms::new(&[]), base_form(2, Eps::Plus));
        assert_eq!(orb, vec![base_form(2, Eps::Plus)]);
        assert_eq!(closure_order(&[], None), Some(1));
    }

    #[test]
    fn full_group_is_transitive_on_each_type() {
        for n in 1..=3 {
            let gens = all_transvections(n).gens;
            for eps in Eps::both() {
                let idx = FormIndex::new(n, eps).unwrap();
                let part = orbit_partition(&OnForms::new(&gens), idx.forms());
                assert_eq!(part.sizes(), vec![idx.len()]);
            }
            let vecs = orbit_bfs(&OnVectors(&gens), BitVector(1));
            assert_eq!(vecs.len(), (1 << (2 * n)) - 1);
        }
    }

    #[test]
    fn subspace_orbits() {
        // Sp(4,2) has two orbits on 2-subspaces: 15 totally isotropic, 20 nondegenerate
        let gens = all_transvections(2).gens;
        let all: Vec<Subspace> = crate::gf2::enumerate_subspaces(4, 2).unwrap().collect();
        let mut sizes = orbit_partition(&OnSubspaces(&gens), all).sizes();
        sizes.sort();
        assert_eq!(sizes, vec![15, 20]);
    }

    #[test]
    fn closure_cap() {
        let gens = all_transvections(2).gens;
        assert!(closure(&gens, Some(100)).is_none());
        assert_eq!(closure(&gens, None).unwrap().len(), 720);
        let t = transvection(2, BitVector(1)).unwrap();
        assert_eq!(closure_order(&[t], None), Some(2));
    }
}
