//! Permutations acting on the right and finite permutation groups
//! materialized by closure.
//!
//! Composition follows postfix notation: `a.then(&b)` maps `x` to `(x a) b`,
//! so a product written `AB` applies `A` first.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};

/// A bijection on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<u8>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Permutation{:?}", self.image)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 256, "degree {n} exceeds 256");
        Permutation {
            image: (0..n).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from its image list, rejecting non-bijections.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n > 256 {
            return None;
        }
        let mut seen = vec![false; n];
        for &v in images {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Permutation {
            image: images.iter().map(|&v| v as u8).collect(),
        })
    }

    /// Builds the permutation `x -> f(x)`; `f` must be a bijection on `0..n`.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Self {
        let images: Vec<usize> = (0..n).map(f).collect();
        Permutation::from_images(&images).expect("map is not a bijection")
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            image: self
                .image
                .iter()
                .map(|&v| other.image[v as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u8; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize] = i as u8;
        }
        Permutation { image }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `[a, b] = a^-1 b^-1 a b`, applied left to right.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
        a.inverse().then(&b.inverse()).then(a).then(b)
    }

    /// Disjoint cycles, each starting at its least point, ordered by that point.
    /// Fixed points appear as one-element cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted multiset of cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        lengths
    }

    /// Smallest `k >= 1` with `self^k = id`.
    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, lcm)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Default cap on materialized group size.
pub const DEFAULT_CLOSURE_BOUND: usize = 3_628_800;

/// A finite permutation group stored element by element.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PermGroup {
    /// Closes `generators` under composition by breadth-first search.
    /// Finite, so closure under products already contains every inverse.
    pub fn generate(degree: usize, generators: Vec<Permutation>, bound: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(LoopError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let h = elements[i].then(g);
                if index.contains_key(&h) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(LoopError::ClosureBoundExceeded {
                        bound,
                        reached: elements.len(),
                    });
                }
                index.insert(h.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            elements,
            index,
        })
    }

    fn from_elements(
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
    ) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        PermGroup {
            degree,
            generators,
            elements,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    /// Elements fixing `point`; the generator list is the element list itself.
    pub fn stabilizer(&self, point: usize) -> PermGroup {
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|p| p.apply(point) == point)
            .cloned()
            .collect();
        PermGroup::from_elements(self.degree, elements.clone(), elements)
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|p| other.contains(p))
    }

    pub fn is_subset_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// Exhaustive subgroup test: identity present, closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        if !self.contains(&Permutation::identity(self.degree)) {
            return false;
        }
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.then(b)))
        })
    }
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PermGroup", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("order", &self.order())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn then_applies_left_factor_first() {
        let a = Permutation::from_images(&[1, 2, 0]).unwrap();
        let b = Permutation::from_images(&[0, 2, 1]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(b.then(&a).apply(0), 1);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(&[0, 0, 1]).is_none());
        assert!(Permutation::from_images(&[0, 3, 1]).is_none());
    }

    #[test]
    fn cycles_are_canonical() {
        let p = Permutation::from_images(&[0, 4, 3, 2, 1]).unwrap();
        assert_eq!(p.cycles(), vec![vec![0], vec![1, 4], vec![2, 3]]);
        assert_eq!(p.cycle_type(), vec![1, 2, 2]);
        assert_eq!(p.order(), 2);
    }

    #[test]
    fn symmetric_group_closure() {
        let t = Permutation::from_images(&[1, 0, 2, 3]).unwrap();
        let c = Permutation::from_images(&[1, 2, 3, 0]).unwrap();
        let g = PermGroup::generate(4, vec![t, c], DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.is_closed());
        assert_eq!(g.stabilizer(0).order(), 6);
        assert!(g.stabilizer(0).is_closed());
    }

    #[test]
    fn closure_bound_is_enforced() {
        let t = Permutation::from_images(&[1, 0, 2, 3]).unwrap();
        let c = Permutation::from_images(&[1, 2, 3, 0]).unwrap();
        let err = PermGroup::generate(4, vec![t, c], 10).unwrap_err();
        assert!(matches!(
            err,
            LoopError::ClosureBoundExceeded {
                bound: 10,
                reached: 10
            }
        ));
    }

    #[test]
    fn commutator_of_commuting_maps_is_trivial() {
        let a = Permutation::from_images(&[1, 0, 2, 3]).unwrap();
        let b = Permutation::from_images(&[0, 1, 3, 2]).unwrap();
        assert!(Permutation::commutator(&a, &b).is_identity());
    }
}
