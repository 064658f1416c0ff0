//! Permutations of `0..n` and small permutation groups.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Groups up to this order are enumerated and cached.
pub const ENUMERATION_LIMIT: usize = 20_160;

/// A permutation, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: u32) -> Self {
        Perm((0..n).collect())
    }

    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || seen[x as usize] {
                return Err(Error::Malformed(format!("{images:?} is not a permutation")));
            }
            seen[x as usize] = true;
        }
        Ok(Perm(images))
    }

    /// The cyclic shift `x ↦ x + k mod n`.
    pub fn shift(n: u32, k: u32) -> Self {
        Perm((0..n).map(|x| (x + k) % n).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Outcome of a membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember,
    Unknown,
}

/// A permutation group on `0..degree`, given by generators.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: u32,
    gens: Vec<Perm>,
    elements: Option<BTreeSet<Perm>>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && match (&self.elements, &other.elements) {
                (Some(a), Some(b)) => a == b,
                _ => self.gens == other.gens,
            }
    }
}

impl PermGroup {
    pub fn new(degree: u32, gens: Vec<Perm>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::Malformed(format!("generator {g} does not have degree {degree}")));
        }
        let elements = enumerate(degree, &gens, ENUMERATION_LIMIT);
        Ok(PermGroup { degree, gens, elements })
    }

    pub fn trivial(n: u32) -> Self {
        Self::new(n, Vec::new()).expect("no generators")
    }

    pub fn symmetric(n: u32) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::shift(n, 1));
            let mut t: Vec<u32> = (0..n).collect();
            t.swap(0, 1);
            gens.push(Perm(t));
        }
        Self::new(n, gens).expect("valid generators")
    }

    /// The regular cyclic group generated by `x ↦ x + 1`.
    pub fn cyclic(n: u32) -> Self {
        let gens = if n >= 2 { vec![Perm::shift(n, 1)] } else { Vec::new() };
        Self::new(n, gens).expect("valid generators")
    }

    /// The group with exactly the given elements (closed under products).
    pub fn from_elements(degree: u32, elements: impl IntoIterator<Item = Perm>) -> Result<Self> {
        let gens: Vec<Perm> = elements.into_iter().filter(|p| !p.is_identity()).collect();
        Self::new(degree, gens)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(BTreeSet::len)
    }

    pub fn elements(&self) -> Result<&BTreeSet<Perm>> {
        self.elements.as_ref().ok_or(Error::GroupTooLarge(ENUMERATION_LIMIT))
    }

    pub fn contains(&self, p: &Perm) -> Membership {
        if p.degree() != self.degree {
            return Membership::NonMember;
        }
        match &self.elements {
            Some(e) if e.contains(p) => Membership::Member,
            Some(_) => Membership::NonMember,
            None => {
                if search(self.degree, &self.gens, p, 4 * ENUMERATION_LIMIT) {
                    Membership::Member
                } else {
                    Membership::Unknown
                }
            }
        }
    }

    pub fn is_member(&self, p: &Perm) -> bool {
        self.contains(p) == Membership::Member
    }

    /// Members mapping `x` to `y`, in increasing order.
    pub fn transporters(&self, x: u32, y: u32) -> Result<Vec<Perm>> {
        Ok(self.elements()?.iter().filter(|p| p.apply(x) == y).cloned().collect())
    }

    /// `{p : p(x) = x}`.
    pub fn stabilizer(&self, x: u32) -> Result<PermGroup> {
        let e = self.transporters(x, x)?;
        PermGroup::from_elements(self.degree, e)
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree as usize];
        if self.degree == 0 {
            return true;
        }
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(x) = stack.pop() {
            for g in &self.gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Conjugate `θ G θ⁻¹`, acting on the codomain of the bijection `θ`.
    pub fn conjugate(&self, theta: &Perm) -> Result<PermGroup> {
        let inv = theta.inverse();
        let gens = self.gens.iter().map(|g| theta.compose(g).compose(&inv)).collect();
        PermGroup::new(self.degree, gens)
    }

    /// Direct product acting on pairs, `(a, b) ↦ a * other.degree + b`.
    pub fn product(&self, other: &PermGroup) -> Result<PermGroup> {
        let (n1, n2) = (self.degree, other.degree);
        let lift1 = |g: &Perm| Perm((0..n1 * n2).map(|x| g.apply(x / n2) * n2 + x % n2).collect());
        let lift2 = |g: &Perm| Perm((0..n1 * n2).map(|x| (x / n2) * n2 + g.apply(x % n2)).collect());
        let gens = self.gens.iter().map(lift1).chain(other.gens.iter().map(lift2)).collect();
        PermGroup::new(n1 * n2, gens)
    }
}

fn enumerate(degree: u32, gens: &[Perm], limit: usize) -> Option<BTreeSet<Perm>> {
    let id = Perm::identity(degree);
    let mut seen = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p);
            if !seen.contains(&q) {
                if seen.len() >= limit {
                    return None;
                }
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Some(seen)
}

fn search(degree: u32, gens: &[Perm], target: &Perm, cap: usize) -> bool {
    let id = Perm::identity(degree);
    let mut seen = std::collections::HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        if &p == target {
            return true;
        }
        for g in gens {
            let q = g.compose(&p);
            if seen.len() < cap && seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    false
}

/// `{"degree": n, "generators": [[images...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermGroupJson {
    pub degree: u32,
    pub generators: Vec<Vec<u32>>,
}

impl TryFrom<PermGroupJson> for PermGroup {
    type Error = Error;

    fn try_from(j: PermGroupJson) -> Result<Self> {
        let gens = j.generators.into_iter().map(Perm::new).collect::<Result<Vec<_>>>()?;
        PermGroup::new(j.degree, gens)
    }
}

impl From<&PermGroup> for PermGroupJson {
    fn from(g: &PermGroup) -> Self {
        PermGroupJson {
            degree: g.degree,
            generators: g.gens.iter().map(|p| p.0.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(PermGroup::symmetric(3).order(), Some(6));
        assert_eq!(PermGroup::symmetric(5).order(), Some(120));
        assert_eq!(PermGroup::cyclic(3).order(), Some(3));
        assert_eq!(PermGroup::trivial(4).order(), Some(1));
        assert_eq!(PermGroup::symmetric(2).product(&PermGroup::cyclic(3)).unwrap().order(), Some(6));
        assert_eq!(PermGroup::symmetric(9).order(), None);
    }

    #[test]
    fn membership() {
        let c3 = PermGroup::cyclic(3);
        assert!(c3.is_member(&Perm::shift(3, 2)));
        assert_eq!(c3.contains(&Perm::new(vec![1, 0, 2]).unwrap()), Membership::NonMember);
        let s9 = PermGroup::symmetric(9);
        assert_eq!(s9.contains(&Perm::identity(9)), Membership::Member);
        assert_eq!(c3.transporters(0, 1).unwrap(), vec![Perm::shift(3, 1)]);
        assert_eq!(PermGroup::symmetric(3).stabilizer(0).unwrap().order(), Some(2));
    }

    #[test]
    fn perm_algebra() {
        let a = Perm::new(vec![1, 2, 0]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.compose(&a), Perm::shift(3, 2));
        assert!(Perm::new(vec![0, 0]).is_err());
        let t = Perm::new(vec![1, 0]).unwrap();
        assert_eq!(PermGroup::cyclic(2).conjugate(&t).unwrap(), PermGroup::cyclic(2));
    }

    #[test]
    fn json() {
        let g = PermGroup::cyclic(3);
        let j = serde_json::to_string(&PermGroupJson::from(&g)).unwrap();
        let back = PermGroup::try_from(serde_json::from_str::<PermGroupJson>(&j).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
