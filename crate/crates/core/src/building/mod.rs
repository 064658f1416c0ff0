//! The semiregular right-angled building with finite parameters `(q_i)`,
//! modelled as the chamber system of the graph product of the cyclic groups
//! `Z/q_i` over the diagram.
//!
//! A chamber is the canonical syllable sequence of a group element: pairs
//! `(type, color)` with nonzero color, whose type word is reduced and in
//! lexicographic normal form. Two chambers are `i`-adjacent when they differ
//! by right multiplication with an `i`-syllable. Color `0` is the base color.

mod aut;
mod ball;
mod implode;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{bits, Diagram};
use crate::error::{Error, Result};
use crate::wordcalc::{nf_order, NormalForm, Word};

pub(crate) use aut::extend_by_local_actions;
pub use aut::{color_translation, left_translation, AutViolation, PartialAut};
pub use ball::{residue, BallView};
pub use implode::{implode, implosion_by_bfs, Implosion, Relation};

/// Default cap on the number of chambers in a ball.
pub const DEFAULT_BALL_CAP: usize = 200_000;

/// How two colors of the same type combine when their syllables meet.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MergeRule {
    /// Addition modulo `q_i`.
    #[default]
    Cyclic,
    /// The right color overwrites the left one. Not a group law; used only as
    /// a mutation control for the verification batteries.
    Overwrite,
}

pub type Syllable = (usize, u32);

/// A chamber: canonical syllable sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chamber(Vec<Syllable>);

impl Chamber {
    pub fn base() -> Self {
        Chamber(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_base(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn types(&self) -> Word {
        self.0.iter().map(|s| s.0).collect()
    }

    /// Stable identifier: the JSON serialization of the syllable list.
    pub fn id(&self) -> String {
        serde_json::to_string(&self.0).expect("syllables serialize")
    }

    pub fn display(&self, d: &Diagram) -> String {
        let parts: Vec<String> = self.0.iter().map(|&(t, a)| format!("{}:{a}", d.name(t))).collect();
        format!("[{}]", parts.join(" "))
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A panel, named by its type and its member without a right-shufflable
/// syllable of that type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PanelRef {
    pub ty: usize,
    pub anchor: Chamber,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BuildingModel {
    diagram: Diagram,
    q: Vec<u32>,
    merge: MergeRule,
}

impl BuildingModel {
    pub fn new(diagram: Diagram, q: Vec<u32>) -> Result<Self> {
        diagram.require_right_angled()?;
        if q.len() != diagram.rank() {
            return Err(Error::InvalidParameters(format!(
                "{} parameters for rank {}",
                q.len(),
                diagram.rank()
            )));
        }
        if let Some(i) = q.iter().position(|&x| x < 2) {
            return Err(Error::InvalidParameters(format!("q_{} = {} < 2", diagram.name(i), q[i])));
        }
        Ok(BuildingModel {
            diagram,
            q,
            merge: MergeRule::Cyclic,
        })
    }

    /// All parameters equal to 2.
    pub fn thin(diagram: Diagram) -> Result<Self> {
        let n = diagram.rank();
        Self::new(diagram, vec![2; n])
    }

    /// The rank-0 model with a single chamber.
    pub fn trivial() -> Self {
        BuildingModel {
            diagram: Diagram::empty(),
            q: Vec::new(),
            merge: MergeRule::Cyclic,
        }
    }

    #[doc(hidden)]
    pub fn with_merge_rule(mut self, merge: MergeRule) -> Self {
        self.merge = merge;
        self
    }

    pub fn merge_rule(&self) -> MergeRule {
        self.merge
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn q(&self, i: usize) -> u32 {
        self.q[i]
    }

    pub fn params(&self) -> &[u32] {
        &self.q
    }

    /// Validates and normalizes a raw syllable sequence.
    pub fn chamber(&self, raw: &[Syllable]) -> Result<Chamber> {
        for &(t, a) in raw {
            if t >= self.rank() {
                return Err(Error::UnknownIndex(t));
            }
            if a >= self.q[t] {
                return Err(Error::InvalidColor {
                    ty: t,
                    color: a,
                    q: self.q[t],
                });
            }
        }
        let mut out = Vec::with_capacity(raw.len());
        for &(t, a) in raw {
            self.push(&mut out, t, a);
        }
        Ok(Chamber(out))
    }

    fn merge(&self, t: usize, left: u32, right: u32) -> u32 {
        match self.merge {
            MergeRule::Cyclic => (left + right) % self.q[t],
            MergeRule::Overwrite => right,
        }
    }

    /// Position of an `i`-syllable that commutes to the right end, if any.
    fn right_shufflable(&self, syl: &[Syllable], i: usize) -> Option<usize> {
        for k in (0..syl.len()).rev() {
            let t = syl[k].0;
            if t == i {
                return Some(k);
            }
            if !self.diagram.commutes(t, i) {
                return None;
            }
        }
        None
    }

    fn reorder(&self, syl: &mut Vec<Syllable>) {
        let types: Word = syl.iter().map(|s| s.0).collect();
        let order = nf_order(&types, &self.diagram);
        if order.iter().enumerate().any(|(a, &b)| a != b) {
            *syl = order.into_iter().map(|k| syl[k]).collect();
        }
    }

    /// Right multiplication of a canonical sequence by one syllable.
    fn push(&self, syl: &mut Vec<Syllable>, i: usize, a: u32) {
        if a == 0 {
            return;
        }
        match self.right_shufflable(syl, i) {
            Some(k) => {
                let c = self.merge(i, syl[k].1, a);
                if c == 0 {
                    syl.remove(k);
                    self.reorder(syl);
                } else {
                    syl[k].1 = c;
                }
            }
            None => {
                syl.push((i, a));
                self.reorder(syl);
            }
        }
    }

    /// `c · (i, a)`.
    pub fn step(&self, c: &Chamber, i: usize, a: u32) -> Chamber {
        let mut syl = c.0.clone();
        self.push(&mut syl, i, a % self.q[i]);
        Chamber(syl)
    }

    /// Group product `c · d`.
    pub fn multiply(&self, c: &Chamber, d: &Chamber) -> Chamber {
        let mut syl = c.0.clone();
        for &(t, a) in &d.0 {
            self.push(&mut syl, t, a);
        }
        Chamber(syl)
    }

    pub fn inverse(&self, c: &Chamber) -> Chamber {
        let mut syl = Vec::with_capacity(c.len());
        for &(t, a) in c.0.iter().rev() {
            self.push(&mut syl, t, (self.q[t] - a) % self.q[t]);
        }
        Chamber(syl)
    }

    /// `δ(c, d)`: the type word of `c⁻¹ d`.
    pub fn weyl_distance(&self, c: &Chamber, d: &Chamber) -> NormalForm {
        NormalForm::from_reduced_nf(self.multiply(&self.inverse(c), d).types())
    }

    /// Gallery distance, `|δ(c, d)|`.
    pub fn distance(&self, c: &Chamber, d: &Chamber) -> usize {
        self.multiply(&self.inverse(c), d).len()
    }

    /// The type of adjacency between distinct `c` and `d`.
    pub fn adjacent(&self, c: &Chamber, d: &Chamber) -> Option<usize> {
        let x = self.multiply(&self.inverse(c), d);
        (x.len() == 1).then(|| x.0[0].0)
    }

    pub fn panel_ref(&self, c: &Chamber, i: usize) -> PanelRef {
        let mut syl = c.0.clone();
        if let Some(k) = self.right_shufflable(&syl, i) {
            syl.remove(k);
            self.reorder(&mut syl);
        }
        PanelRef {
            ty: i,
            anchor: Chamber(syl),
        }
    }

    /// The `i`-panel of `c`; members are listed by the color they append.
    pub fn panel(&self, c: &Chamber, i: usize) -> (PanelRef, Vec<Chamber>) {
        let p = self.panel_ref(c, i);
        let members = (0..self.q[i]).map(|a| self.step(&p.anchor, i, a)).collect();
        (p, members)
    }

    /// The legal coloring `λ_i`: the sum of the `i`-colors modulo `q_i`.
    pub fn coloring(&self, c: &Chamber, i: usize) -> u32 {
        c.0.iter().filter(|s| s.0 == i).fold(0, |acc, s| (acc + s.1) % self.q[i])
    }

    /// All colorings at once.
    pub fn colors(&self, c: &Chamber) -> Vec<u32> {
        let mut out = vec![0u32; self.rank()];
        for &(t, a) in &c.0 {
            out[t] = (out[t] + a) % self.q[t];
        }
        out
    }

    /// The model of type `M_J` with the same parameters; `j` is kept in the
    /// given order.
    pub fn restrict(&self, j: &[usize]) -> Result<BuildingModel> {
        let diagram = self.diagram.restrict(j)?;
        let q = j.iter().map(|&t| self.q[t]).collect();
        Ok(BuildingModel {
            diagram,
            q,
            merge: self.merge,
        })
    }

    /// `φ_J(c)` in `restricted = self.restrict(j)`: the syllables of type
    /// outside `J` are deleted and the rest renormalized.
    pub fn retraction(&self, c: &Chamber, j: &[usize], restricted: &BuildingModel) -> Chamber {
        let mut pos = vec![usize::MAX; self.rank()];
        for (k, &t) in j.iter().enumerate() {
            pos[t] = k;
        }
        let mut syl = Vec::new();
        for &(t, a) in &c.0 {
            if pos[t] != usize::MAX {
                restricted.push(&mut syl, pos[t], a);
            }
        }
        Chamber(syl)
    }

    /// Removes every right-shufflable syllable whose type is in `mask`,
    /// repeatedly. Two chambers lie in the same `J`-residue iff their
    /// representatives for `J` agree.
    pub fn coset_rep(&self, c: &Chamber, mask: u64) -> Chamber {
        let mut syl = c.0.clone();
        loop {
            let mut removed = false;
            for i in bits(mask) {
                if let Some(k) = self.right_shufflable(&syl, i) {
                    syl.remove(k);
                    self.reorder(&mut syl);
                    removed = true;
                }
            }
            if !removed {
                return Chamber(syl);
            }
        }
    }

    /// The building is finite iff its diagram has no `∞` label.
    pub fn is_finite(&self) -> bool {
        (0..self.rank()).all(|i| self.diagram.infinite_mask(i) == 0)
    }

    /// Number of chambers, when finite.
    pub fn size(&self) -> Option<usize> {
        self.is_finite()
            .then(|| self.q.iter().map(|&x| x as usize).product())
    }

    /// All chambers of a finite building, sorted by (length, canonical order).
    pub fn all_chambers(&self) -> Result<Vec<Chamber>> {
        if !self.is_finite() {
            return Err(Error::Precondition("the building is infinite".into()));
        }
        Ok(self.ball(&Chamber::base(), self.rank())?.chambers().to_vec())
    }

    pub fn index_mask(&self, j: &[usize]) -> u64 {
        j.iter().fold(0, |m, &t| m | 1 << t)
    }
}

// JSON -----------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ColorSpec {
    pub size: u32,
    #[serde(default)]
    pub base: u32,
}

/// `{"diagram": ..., "colors": {"name": {"size": q, "base": b}}}`.
///
/// Colors in files are `0..size`; the base color `b` is the model's color 0
/// and file color `x` is model color `x - b mod size`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildingSpec {
    pub diagram: Diagram,
    pub colors: std::collections::BTreeMap<String, ColorSpec>,
}

impl BuildingSpec {
    pub fn model(&self) -> Result<BuildingModel> {
        let d = &self.diagram;
        let mut q = Vec::with_capacity(d.rank());
        for i in 0..d.rank() {
            let c = self
                .colors
                .get(d.name(i))
                .ok_or_else(|| Error::Malformed(format!("no colors for index {}", d.name(i))))?;
            if c.base >= c.size {
                return Err(Error::InvalidParameters(format!("base color of {} out of range", d.name(i))));
            }
            q.push(c.size);
        }
        if let Some(k) = self.colors.keys().find(|k| d.index_of(k).is_err()) {
            return Err(Error::UnknownLabel(k.clone()));
        }
        BuildingModel::new(d.clone(), q)
    }

    pub fn from_model(b: &BuildingModel) -> Self {
        let d = b.diagram().clone();
        let colors = (0..d.rank())
            .map(|i| {
                (
                    d.name(i).to_string(),
                    ColorSpec {
                        size: b.q(i),
                        base: 0,
                    },
                )
            })
            .collect();
        BuildingSpec { diagram: d, colors }
    }

    fn base_of(&self, i: usize) -> u32 {
        self.colors.get(self.diagram.name(i)).map_or(0, |c| c.base)
    }

    pub fn color_in(&self, i: usize, file_color: u32, q: u32) -> u32 {
        (file_color + q - self.base_of(i) % q) % q
    }

    pub fn color_out(&self, i: usize, model_color: u32, q: u32) -> u32 {
        (model_color + self.base_of(i)) % q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordcalc;

    pub(crate) fn model(n: usize, edges: &[(usize, usize)], q: &[u32]) -> BuildingModel {
        BuildingModel::new(Diagram::right_angled(n, edges).unwrap(), q.to_vec()).unwrap()
    }

    #[test]
    fn normalization() {
        let b = model(2, &[], &[3, 3]);
        assert!(b.chamber(&[]).unwrap().is_base());
        assert!(b.chamber(&[(0, 1), (0, 2)]).unwrap().is_base());
        assert_eq!(b.chamber(&[(1, 2), (0, 1)]).unwrap().syllables(), &[(0, 1), (1, 2)]);
        assert_eq!(b.chamber(&[(0, 1), (1, 1), (0, 1)]).unwrap().syllables(), &[(0, 2), (1, 1)]);
        let f = model(2, &[(0, 1)], &[3, 3]);
        assert_eq!(f.chamber(&[(1, 2), (0, 1)]).unwrap().syllables(), &[(1, 2), (0, 1)]);
        assert!(matches!(b.chamber(&[(0, 3)]), Err(Error::InvalidColor { .. })));
        assert!(matches!(b.chamber(&[(2, 1)]), Err(Error::UnknownIndex(2))));
    }

    #[test]
    fn removal_reorders() {
        // 0 and 2 commute, 1 is joined to both by ∞.
        let b = model(3, &[(0, 1), (1, 2)], &[2, 2, 2]);
        let c = b.chamber(&[(2, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(c.types(), vec![2, 1, 0]);
        let d = b.step(&c, 1, 0);
        assert_eq!(d, c);
        let back = b.multiply(&c, &b.chamber(&[(0, 1), (1, 1)]).unwrap());
        assert_eq!(back.syllables(), &[(2, 1)]);
        let x = b.chamber(&[(2, 1), (1, 1), (0, 1), (1, 1)]).unwrap();
        assert_eq!(x.types(), vec![2, 1, 0, 1]);
        let y = b.multiply(&x, &b.chamber(&[(1, 1), (0, 1), (1, 1)]).unwrap());
        assert_eq!(y.syllables(), &[(2, 1)]);
        let z = b.chamber(&[(2, 1), (0, 1)]).unwrap();
        assert_eq!(z.types(), vec![0, 2]);
    }

    #[test]
    fn canonical_types_are_reduced_normal_forms() {
        let b = model(3, &[(0, 1), (1, 2)], &[2, 3, 2]);
        let raw = [(2, 1), (1, 2), (0, 1), (2, 1), (1, 1), (0, 1), (1, 1)];
        let c = b.chamber(&raw).unwrap();
        let t = c.types();
        assert_eq!(t, wordcalc::normal_form(&t, b.diagram()).unwrap());
        assert!(wordcalc::is_reduced(&t, b.diagram()).unwrap());
    }

    #[test]
    fn weyl_distances() {
        let b = model(2, &[(0, 1)], &[2, 3]);
        let c = b.chamber(&[(0, 1), (1, 2)]).unwrap();
        assert!(b.weyl_distance(&c, &c).is_empty());
        assert_eq!(b.weyl_distance(&Chamber::base(), &b.chamber(&[(1, 1)]).unwrap()).word(), &[1]);
        assert_eq!(b.weyl_distance(&Chamber::base(), &c).word(), &[0, 1]);
        assert_eq!(b.weyl_distance(&c, &Chamber::base()).word(), &[1, 0]);
        assert_eq!(b.adjacent(&c, &b.step(&c, 1, 2)), Some(1));
        assert_eq!(b.adjacent(&c, &c), None);
    }

    #[test]
    fn panels_and_colors() {
        let b = model(2, &[(0, 1)], &[2, 3]);
        let (p, members) = b.panel(&Chamber::base(), 1);
        assert_eq!(members.len(), 3);
        assert!(members.contains(&Chamber::base()));
        assert!(p.anchor.is_base());
        assert_eq!(b.coloring(&Chamber::base(), 0), 0);
        assert_eq!(b.coloring(&b.chamber(&[(1, 2)]).unwrap(), 1), 2);
        let c = b.chamber(&[(1, 1), (0, 1), (1, 1)]).unwrap();
        for i in 0..2 {
            let (_, ms) = b.panel(&c, i);
            let mut own: Vec<u32> = ms.iter().map(|m| b.coloring(m, i)).collect();
            own.sort();
            assert_eq!(own, (0..b.q(i)).collect::<Vec<_>>());
            let other = 1 - i;
            assert!(ms.iter().all(|m| b.coloring(m, other) == b.coloring(&c, other)));
        }
    }

    #[test]
    fn retraction_deletes_other_types() {
        let b = model(3, &[(0, 1), (1, 2)], &[2, 2, 2]);
        let r = b.restrict(&[0, 2]).unwrap();
        let c = b.chamber(&[(2, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(b.retraction(&c, &[0, 2], &r).syllables(), &[(0, 1), (1, 1)]);
        assert!(b.retraction(&b.chamber(&[(1, 1)]).unwrap(), &[0, 2], &r).is_base());
        assert!(b.retraction(&Chamber::base(), &[0, 2], &r).is_base());
    }

    #[test]
    fn coset_representatives() {
        let b = model(3, &[(0, 1), (1, 2)], &[2, 2, 2]);
        let c = b.chamber(&[(1, 1), (0, 1), (2, 1)]).unwrap();
        assert_eq!(b.coset_rep(&c, 0b101).syllables(), &[(1, 1)]);
        assert_eq!(b.coset_rep(&c, 0b001), b.chamber(&[(1, 1), (2, 1)]).unwrap());
        assert_eq!(b.coset_rep(&c, 0b010), c);
    }

    #[test]
    fn spec_round_trip() {
        let b = model(2, &[(0, 1)], &[2, 3]);
        let s = BuildingSpec::from_model(&b);
        let j = serde_json::to_string(&s).unwrap();
        let back: BuildingSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back.model().unwrap(), b);
        let c = b.chamber(&[(0, 1), (1, 2)]).unwrap();
        let cj = serde_json::to_string(&c).unwrap();
        assert_eq!(cj, "[[0,1],[1,2]]");
        assert_eq!(serde_json::from_str::<Chamber>(&cj).unwrap(), c);
    }
}
