//! Words over a Coxeter diagram: homotopies, reduction, lexicographic normal
//! forms, weak homotopies and Weyl-group arithmetic.
//!
//! A word is a `Vec<usize>` of indices. The total order on letters is the
//! index order, so "lexicographically least" compares indices.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::diagram::{Diagram, Label};
use crate::error::{Error, Result};

pub type Word = Vec<usize>;

/// Default cap on the number of words visited by the exhaustive searches.
pub const DEFAULT_CAP: usize = 100_000;

fn check_letters(w: &[usize], d: &Diagram) -> Result<()> {
    match w.iter().find(|&&x| x >= d.rank()) {
        Some(&x) => Err(Error::UnknownIndex(x)),
        None => Ok(()),
    }
}

/// The alternating word of length `m_ij` ending in `j`.
pub fn p_word(i: usize, j: usize, d: &Diagram) -> Result<Word> {
    check_letters(&[i, j], d)?;
    let m = d.label(i, j).finite().ok_or(Error::InfiniteLabel(i, j))? as usize;
    Ok((0..m).map(|t| if (m - t) % 2 == 1 { j } else { i }).collect())
}

/// All words reachable by one elementary homotopy, sorted.
pub fn homotopy_neighbors(w: &[usize], d: &Diagram) -> Vec<Word> {
    let mut out = BTreeSet::new();
    for s in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[s], w[s + 1]);
        if a == b {
            continue;
        }
        let Label::Finite(m) = d.label(a, b) else { continue };
        let m = m as usize;
        if s + m > w.len() {
            continue;
        }
        let alternating = (0..m).all(|t| w[s + t] == if t % 2 == 0 { a } else { b });
        if alternating {
            let mut v = w.to_vec();
            for t in 0..m {
                v[s + t] = if t % 2 == 0 { b } else { a };
            }
            out.insert(v);
        }
    }
    out.into_iter().collect()
}

/// The homotopy class of `w`, sorted lexicographically.
pub fn homotopy_class(w: &[usize], d: &Diagram, cap: usize) -> Result<BTreeSet<Word>> {
    check_letters(w, d)?;
    let mut seen = BTreeSet::new();
    seen.insert(w.to_vec());
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for u in homotopy_neighbors(&v, d) {
            if !seen.contains(&u) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded { cap, what: "words" });
                }
                seen.insert(u.clone());
                queue.push_back(u);
            }
        }
    }
    Ok(seen)
}

/// Lexicographically least word in the commutation class of `w`.
pub fn normal_form(w: &[usize], d: &Diagram) -> Result<Word> {
    d.require_right_angled()?;
    check_letters(w, d)?;
    Ok(nf(w, d))
}

/// [`normal_form`] without validation, for right-angled `d`.
pub(crate) fn nf(w: &[usize], d: &Diagram) -> Word {
    if w.len() <= 1 {
        return w.to_vec();
    }
    nf_order(w, d).into_iter().map(|k| w[k]).collect()
}

/// The positions of `w` in the order they appear in its normal form.
///
/// Repeatedly emits the least letter that can be moved to the front: one
/// whose earlier remaining letters all commute with it and differ from it.
/// Equal letters keep their relative order.
pub(crate) fn nf_order(w: &[usize], d: &Diagram) -> Vec<usize> {
    debug_assert!(d.is_right_angled());
    let n = w.len();
    let mut taken = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut seen = 0u64;
        let mut best: Option<(usize, usize)> = None;
        for k in 0..n {
            if taken[k] {
                continue;
            }
            let x = w[k];
            let bit = 1u64 << x;
            if seen & bit == 0 && seen & !d.commute_mask(x) == 0 && best.is_none_or(|(b, _)| x < b) {
                best = Some((x, k));
            }
            seen |= bit;
        }
        let (_, k) = best.expect("some letter is always available");
        taken[k] = true;
        out.push(k);
    }
    out
}

fn first_duplicate(w: &[usize]) -> Option<usize> {
    w.windows(2).position(|p| p[0] == p[1])
}

/// Checks reducedness, exactly via the normal form when `d` is right-angled
/// and through [`is_reduced_oracle`] otherwise.
pub fn is_reduced(w: &[usize], d: &Diagram) -> Result<bool> {
    check_letters(w, d)?;
    if d.is_right_angled() {
        Ok(first_duplicate(&nf(w, d)).is_none())
    } else {
        is_reduced_oracle(w, d, DEFAULT_CAP)
    }
}

/// No member of the homotopy class contains a doubled letter.
pub fn is_reduced_oracle(w: &[usize], d: &Diagram, cap: usize) -> Result<bool> {
    Ok(homotopy_class(w, d, cap)?.iter().all(|v| first_duplicate(v).is_none()))
}

/// A reduced word equivalent to `w`. For right-angled `d` this is the normal
/// form of `ε(w)`.
pub fn reduce(w: &[usize], d: &Diagram) -> Result<Word> {
    check_letters(w, d)?;
    if d.is_right_angled() {
        return Ok(reduce_ra(w, d));
    }
    let mut cur = w.to_vec();
    loop {
        let class = homotopy_class(&cur, d, DEFAULT_CAP)?;
        match class.iter().find_map(|v| first_duplicate(v).map(|p| (v, p))) {
            Some((v, p)) => {
                let mut v = v.clone();
                v.drain(p..p + 2);
                cur = v;
            }
            None => return Ok(class.into_iter().next().expect("class contains cur")),
        }
    }
}

pub(crate) fn reduce_ra(w: &[usize], d: &Diagram) -> Word {
    let mut cur = nf(w, d);
    while let Some(p) = first_duplicate(&cur) {
        cur.drain(p..p + 2);
        cur = nf(&cur, d);
    }
    cur
}

/// `ε(w1) = ε(w2)`.
pub fn are_equivalent(w1: &[usize], w2: &[usize], d: &Diagram) -> Result<bool> {
    let r1 = reduce(w1, d)?;
    let r2 = reduce(w2, d)?;
    if d.is_right_angled() {
        return Ok(r1 == r2);
    }
    if r1.len() != r2.len() {
        return Ok(false);
    }
    Ok(homotopy_class(&r1, d, DEFAULT_CAP)?.contains(&r2))
}

/// An element of a right-angled Coxeter group, stored as the normal form of
/// its reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm(Word);

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm(Vec::new())
    }

    /// The element `ε(w)`.
    pub fn of(w: &[usize], d: &Diagram) -> Result<Self> {
        d.require_right_angled()?;
        check_letters(w, d)?;
        Ok(NormalForm(reduce_ra(w, d)))
    }

    pub(crate) fn from_reduced_nf(w: Word) -> Self {
        NormalForm(w)
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &NormalForm, d: &Diagram) -> NormalForm {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        NormalForm(reduce_ra(&w, d))
    }

    pub fn invert(&self, d: &Diagram) -> NormalForm {
        let w: Word = self.0.iter().rev().copied().collect();
        NormalForm(nf(&w, d))
    }
}

/// Words obtained by one weak homotopy whose length stays within `maxlen`:
/// a maximal subword over `{i, j}` (with `m_ij = 2`) containing both letters
/// is replaced by a different word over `{i, j}` containing both letters.
pub fn weak_homotopy_neighbors(w: &[usize], d: &Diagram, maxlen: usize) -> Vec<Word> {
    let mut out = BTreeSet::new();
    let mut letters: Vec<usize> = w.to_vec();
    letters.sort_unstable();
    letters.dedup();
    for (a, &i) in letters.iter().enumerate() {
        for &j in &letters[a + 1..] {
            if !d.commutes(i, j) {
                continue;
            }
            let mut s = 0;
            while s < w.len() {
                if w[s] != i && w[s] != j {
                    s += 1;
                    continue;
                }
                let mut e = s;
                while e < w.len() && (w[e] == i || w[e] == j) {
                    e += 1;
                }
                let run = &w[s..e];
                if run.contains(&i) && run.contains(&j) {
                    let room = maxlen + run.len();
                    let max_len = room.saturating_sub(w.len());
                    for len in 2..=max_len {
                        for bitsv in 1u64..(1u64 << len) - 1 {
                            let repl: Word = (0..len).map(|t| if bitsv >> t & 1 == 1 { j } else { i }).collect();
                            if repl.as_slice() == run {
                                continue;
                            }
                            let mut v = w[..s].to_vec();
                            v.extend_from_slice(&repl);
                            v.extend_from_slice(&w[e..]);
                            out.insert(v);
                        }
                    }
                }
                s = e;
            }
        }
    }
    out.into_iter().collect()
}

/// Result of a bounded weak-homotopy search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

/// Collapses consecutive duplicate letters.
pub fn collapse(w: &[usize]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    out
}

/// Bounded search for a weak homotopy from `w1` to `w2`.
///
/// `No` is returned only when the collapsed normal forms differ, which rules
/// weak homotopy out. Otherwise the search over words of length at most
/// `maxlen` either finds `w2` or gives `Unknown`.
pub fn are_weakly_homotopic_bounded(
    w1: &[usize],
    w2: &[usize],
    d: &Diagram,
    maxlen: usize,
    cap: usize,
) -> Result<Tristate> {
    check_letters(w1, d)?;
    check_letters(w2, d)?;
    if w1 == w2 {
        return Ok(Tristate::Yes);
    }
    if d.is_right_angled() && collapse(&nf(w1, d)) != collapse(&nf(w2, d)) {
        return Ok(Tristate::No);
    }
    let mut seen = HashSet::new();
    seen.insert(w1.to_vec());
    let mut queue = VecDeque::from([w1.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for u in weak_homotopy_neighbors(&v, d, maxlen) {
            if u == w2 {
                return Ok(Tristate::Yes);
            }
            if seen.insert(u.clone()) {
                if seen.len() > cap {
                    return Ok(Tristate::Unknown);
                }
                queue.push_back(u);
            }
        }
    }
    Ok(Tristate::Unknown)
}

/// The default length bound `|w1| + |w2| + 4`.
pub fn default_maxlen(w1: &[usize], w2: &[usize]) -> usize {
    w1.len() + w2.len() + 4
}

/// All reduced words of length at most `maxlen` over a right-angled
/// diagram, shortest first, then lexicographic.
pub fn reduced_words(d: &Diagram, maxlen: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for x in 0..d.rank() {
                let mut v = w.clone();
                v.push(x);
                if first_duplicate(&nf(&v, d)).is_none() {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Renders a word with the diagram's index names. Names are concatenated
/// when they are all single characters and separated by spaces otherwise.
pub fn display_word(w: &[usize], d: &Diagram) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    let names: Vec<&str> = w.iter().map(|&x| d.name(x)).collect();
    if names.iter().all(|n| n.chars().count() == 1) {
        names.concat()
    } else {
        names.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d2(m: Label) -> Diagram {
        Diagram::new(vec![vec![1.into(), m], vec![m, 1.into()]]).unwrap()
    }

    fn ra(n: usize, pattern: u32) -> Diagram {
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if pattern >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        Diagram::right_angled(n, &edges).unwrap()
    }

    #[test]
    fn p_words() {
        assert_eq!(p_word(0, 1, &d2(2.into())).unwrap(), vec![0, 1]);
        assert_eq!(p_word(0, 1, &d2(3.into())).unwrap(), vec![1, 0, 1]);
        assert_eq!(p_word(0, 1, &d2(4.into())).unwrap(), vec![0, 1, 0, 1]);
        assert_eq!(p_word(0, 1, &d2(Label::INF)), Err(Error::InfiniteLabel(0, 1)));
    }

    #[test]
    fn neighbors_and_classes() {
        assert_eq!(homotopy_neighbors(&[0, 1], &d2(2.into())), vec![vec![1, 0]]);
        assert!(homotopy_neighbors(&[0], &d2(2.into())).is_empty());
        assert_eq!(homotopy_neighbors(&[1, 0, 1], &d2(3.into())), vec![vec![0, 1, 0]]);
        let c = homotopy_class(&[0, 1], &d2(2.into()), 10).unwrap();
        assert_eq!(c.len(), 2);
        let e3 = ra(3, 0);
        assert_eq!(homotopy_class(&[0, 1, 2], &e3, 100).unwrap().len(), 6);
        assert_eq!(homotopy_class(&[0, 0], &e3, 100).unwrap().len(), 1);
        assert!(matches!(
            homotopy_class(&[0, 1, 2], &e3, 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn normal_forms() {
        let c = d2(2.into());
        assert_eq!(normal_form(&[1, 0], &c).unwrap(), vec![0, 1]);
        assert_eq!(normal_form(&[1, 0, 1], &c).unwrap(), vec![0, 1, 1]);
        assert_eq!(normal_form(&[1, 0], &d2(Label::INF)).unwrap(), vec![1, 0]);
        assert_eq!(normal_form(&[0], &d2(3.into())), Err(Error::NotRightAngled));
    }

    #[test]
    fn reducedness() {
        let c = d2(2.into());
        let f = d2(Label::INF);
        assert!(!is_reduced(&[0, 0], &c).unwrap());
        assert!(is_reduced(&[0, 1, 0], &f).unwrap());
        assert!(!is_reduced(&[1, 0, 1], &c).unwrap());
        assert!(!is_reduced_oracle(&[1, 0, 1], &c, 100).unwrap());
        assert!(is_reduced_oracle(&[1, 0, 1], &d2(3.into()), 100).unwrap());
        assert!(is_reduced(&[1, 0, 1], &d2(3.into())).unwrap());
        assert!(!is_reduced(&[1, 0, 1, 0], &d2(3.into())).unwrap());
    }

    #[test]
    fn reduction_and_equivalence() {
        let c = d2(2.into());
        let f = d2(Label::INF);
        assert_eq!(reduce(&[0, 0], &c).unwrap(), Vec::<usize>::new());
        assert_eq!(reduce(&[0, 1, 1, 0], &f).unwrap(), Vec::<usize>::new());
        assert_eq!(reduce(&[1, 0, 1], &c).unwrap(), vec![0]);
        assert!(are_equivalent(&[0, 1], &[1, 0], &c).unwrap());
        assert!(are_equivalent(&[0], &[0, 1, 1], &c).unwrap());
        assert!(!are_equivalent(&[0, 1], &[1, 0], &f).unwrap());
        let g = d2(3.into());
        assert!(are_equivalent(&[0, 1, 0], &[1, 0, 1], &g).unwrap());
        assert_eq!(reduce(&[0, 1, 0, 1], &g).unwrap().len(), 2);
        assert!(!are_equivalent(&[0, 1], &[1, 0], &g).unwrap());
    }

    #[test]
    fn arithmetic() {
        let f = d2(Label::INF);
        let a = NormalForm::of(&[0, 1], &f).unwrap();
        assert!(a.multiply(&a.invert(&f), &f).is_empty());
        let one = NormalForm::of(&[0], &f).unwrap();
        assert!(one.multiply(&one, &f).is_empty());
        let b = NormalForm::of(&[1, 0], &f).unwrap();
        assert!(a.multiply(&b, &f).is_empty());
    }

    #[test]
    fn weak_neighbors() {
        let c = d2(2.into());
        let n = weak_homotopy_neighbors(&[0, 1], &c, 4);
        for w in [vec![1, 0], vec![0, 0, 1], vec![0, 1, 0, 1], vec![1, 0, 1, 0]] {
            assert!(n.contains(&w), "{w:?}");
        }
        // all words over {0,1} of length 2..=4 with both letters, minus the word itself
        assert_eq!(n.len(), 2 + 6 + 14 - 1);
        assert!(weak_homotopy_neighbors(&[0], &c, 4).is_empty());
        // an ij context inside a longer word can grow into jij
        let e3 = ra(3, 0b010);
        assert!(weak_homotopy_neighbors(&[2, 0, 1, 2], &e3, 5).contains(&vec![2, 1, 0, 1, 2]));
    }

    #[test]
    fn weak_search() {
        let c = d2(2.into());
        let f = d2(Label::INF);
        let yes = |a: &[usize], b: &[usize], d: &Diagram| {
            are_weakly_homotopic_bounded(a, b, d, default_maxlen(a, b), DEFAULT_CAP).unwrap()
        };
        assert_eq!(yes(&[0, 1], &[1, 0], &c), Tristate::Yes);
        assert_eq!(yes(&[0, 1], &[1, 0], &f), Tristate::No);
        assert_eq!(yes(&[0, 1], &[0, 0, 1, 1], &c), Tristate::Yes);
    }

    #[test]
    fn reduced_word_counts() {
        // infinite dihedral: 1 + 2 + 2 + 2
        assert_eq!(reduced_words(&d2(Label::INF), 3).len(), 7);
        // Z/2 x Z/2: 1, 2, 2 ("01", "10"), then none
        assert_eq!(reduced_words(&d2(2.into()), 3).len(), 5);
    }

    #[test]
    fn collapse_runs() {
        assert_eq!(collapse(&[0, 0, 2, 2, 2, 0, 1]), vec![0, 2, 0, 1]);
        assert_eq!(collapse(&[0, 1, 0]), vec![0, 1, 0]);
    }

    fn word_strategy(n: usize, max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0..n, 0..=max)
    }

    proptest! {
        #[test]
        fn nf_is_class_minimum(pattern in 0u32..64, w in word_strategy(4, 7)) {
            let d = ra(4, pattern);
            let class = homotopy_class(&w, &d, DEFAULT_CAP).unwrap();
            prop_assert_eq!(&nf(&w, &d), class.iter().next().unwrap());
        }

        #[test]
        fn homotopic_words_share_nf(pattern in 0u32..64, w in word_strategy(4, 8), steps in prop::collection::vec(0usize..100, 0..10)) {
            let d = ra(4, pattern);
            let mut v = w.clone();
            for s in steps {
                let nb = homotopy_neighbors(&v, &d);
                if nb.is_empty() { break; }
                v = nb[s % nb.len()].clone();
            }
            prop_assert_eq!(nf(&w, &d), nf(&v, &d));
        }

        #[test]
        fn collapse_idempotent(w in word_strategy(3, 12)) {
            prop_assert_eq!(collapse(&collapse(&w)), collapse(&w));
        }

        #[test]
        fn group_laws(pattern in 0u32..64, a in word_strategy(4, 6), b in word_strategy(4, 6), c in word_strategy(4, 6)) {
            let d = ra(4, pattern);
            let (a, b, c) = (NormalForm::of(&a, &d).unwrap(), NormalForm::of(&b, &d).unwrap(), NormalForm::of(&c, &d).unwrap());
            prop_assert_eq!(a.multiply(&b, &d).multiply(&c, &d), a.multiply(&b.multiply(&c, &d), &d));
            prop_assert!(a.multiply(&a.invert(&d), &d).is_empty());
            prop_assert!(a.invert(&d).multiply(&a, &d).is_empty());
        }

        #[test]
        fn exchange_condition(pattern in 0u32..64, w in word_strategy(4, 6), i in 0usize..4) {
            let d = ra(4, pattern);
            let w = reduce_ra(&w, &d);
            let mut iw = vec![i];
            iw.extend_from_slice(&w);
            if !is_reduced(&iw, &d).unwrap() {
                let class = homotopy_class(&w, &d, DEFAULT_CAP).unwrap();
                prop_assert!(class.iter().any(|v| v.first() == Some(&i)));
            }
        }

        #[test]
        fn weak_step_preserves_collapsed_nf(pattern in 0u32..64, w in word_strategy(4, 6), pick in 0usize..10_000) {
            let d = ra(4, pattern);
            let nb = weak_homotopy_neighbors(&w, &d, w.len() + 2);
            if !nb.is_empty() {
                let v = &nb[pick % nb.len()];
                prop_assert_eq!(collapse(&nf(&w, &d)), collapse(&nf(v, &d)));
            }
        }
    }
}
