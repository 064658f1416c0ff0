//! The parkour map `r` of a partitioned index set, block decompositions, and
//! the rewriting that minimizes `|r(u)|` over a homotopy class.

use std::collections::HashSet;

use crate::diagram::{Diagram, IndexPartition, Label};
use crate::error::{Error, Result};
use crate::wordcalc::{self, collapse, nf, Word};

fn check_letters(w: &[usize], p: &IndexPartition) -> Result<()> {
    match w.iter().find(|&&x| x >= p.len()) {
        Some(&x) => Err(Error::UnknownIndex(x)),
        None => Ok(()),
    }
}

/// `r(w)`: each letter replaced by its class, then runs collapsed.
pub fn parkour(w: &[usize], p: &IndexPartition) -> Result<Word> {
    check_letters(w, p)?;
    Ok(parkour_unchecked(w, p))
}

pub(crate) fn parkour_unchecked(w: &[usize], p: &IndexPartition) -> Word {
    let mut out: Word = Vec::new();
    for &x in w {
        let l = p.class_of(x);
        if out.last() != Some(&l) {
            out.push(l);
        }
    }
    out
}

/// A maximal subword whose letters all lie in one part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub class: usize,
    pub letters: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn concat(&self) -> Word {
        self.blocks.iter().flat_map(|b| b.letters.iter().copied()).collect()
    }

    pub fn classes(&self) -> Word {
        self.blocks.iter().map(|b| b.class).collect()
    }
}

pub fn blocks(w: &[usize], p: &IndexPartition) -> Result<BlockDecomposition> {
    check_letters(w, p)?;
    let mut out: Vec<Block> = Vec::new();
    for &x in w {
        let l = p.class_of(x);
        match out.last_mut() {
            Some(b) if b.class == l => b.letters.push(x),
            _ => out.push(Block { class: l, letters: vec![x] }),
        }
    }
    Ok(BlockDecomposition { blocks: out })
}

/// The diagram `M` over the parts, read off a product diagram. Fails when
/// the labels between two parts are not constant.
#[allow(clippy::needless_range_loop)]
pub fn quotient_diagram(d: &Diagram, p: &IndexPartition) -> Result<Diagram> {
    let n = p.num_parts();
    if n == 0 {
        return Err(Error::InvalidPartition("no parts".into()));
    }
    let mut labels = vec![vec![Label::Finite(1); n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let m = d.label(p.part(a)[0], p.part(b)[0]);
            if p.part(a).iter().any(|&x| p.part(b).iter().any(|&y| d.label(x, y) != m)) {
                return Err(Error::InvalidPartition(format!("parts {a} and {b} are not joined uniformly")));
            }
            labels[a][b] = m;
        }
    }
    Diagram::new(labels)
}

/// The lexicographically least word `v` over `M` of minimal length among
/// images `r(u')` with `u'` homotopic to `u`: the 0-Hecke (Demazure)
/// reduction of `r(u)`.
pub fn minimal_image(r: &[usize], m: &Diagram) -> Word {
    let mut v = nf(r, m);
    loop {
        let c = collapse(&v);
        if c.len() == v.len() {
            return v;
        }
        v = nf(&c, m);
    }
}

/// A word homotopic to the reduced word `u` whose image under `r` is as
/// short as possible, lexicographically least among such images, and which
/// is itself lexicographically least among words with that image.
pub fn r_minimize(u: &[usize], d: &Diagram, p: &IndexPartition) -> Result<Word> {
    d.require_right_angled()?;
    check_letters(u, p)?;
    if p.len() != d.rank() {
        return Err(Error::InvalidPartition("partition size differs from rank".into()));
    }
    if !wordcalc::is_reduced(u, d)? {
        return Err(Error::NotReduced);
    }
    let m = quotient_diagram(d, p)?;
    r_minimize_with(u, d, p, &m)
}

pub(crate) fn r_minimize_with(u: &[usize], d: &Diagram, p: &IndexPartition, m: &Diagram) -> Result<Word> {
    if u.len() > 128 {
        return Err(Error::InvalidParameters(format!("word of length {} is too long", u.len())));
    }
    let target = minimal_image(&parkour_unchecked(u, p), m);
    let mut search = Linearizer {
        u,
        d,
        p,
        target: &target,
        failed: HashSet::new(),
        out: Vec::with_capacity(u.len()),
    };
    if search.run(0, 0) {
        Ok(search.out)
    } else {
        Err(Error::Precondition("no homotopic word realizes the minimal image".into()))
    }
}

struct Linearizer<'a> {
    u: &'a [usize],
    d: &'a Diagram,
    p: &'a IndexPartition,
    target: &'a [usize],
    failed: HashSet<(u128, usize)>,
    out: Word,
}

impl Linearizer<'_> {
    /// `used`: positions of `u` already emitted; `t`: number of image blocks
    /// started.
    fn run(&mut self, used: u128, t: usize) -> bool {
        let n = self.u.len();
        if used.count_ones() as usize == n {
            return t == self.target.len();
        }
        if self.failed.contains(&(used, t)) {
            return false;
        }
        let mut seen = 0u64;
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for k in 0..n {
            if used >> k & 1 == 1 {
                continue;
            }
            let x = self.u[k];
            let bit = 1u64 << x;
            if seen & bit == 0 && seen & !self.d.commute_mask(x) == 0 {
                cands.push((x, k));
            }
            seen |= bit;
        }
        cands.sort_unstable();
        for (x, k) in cands {
            let c = self.p.class_of(x);
            let next_t = if t > 0 && self.target[t - 1] == c {
                t
            } else if t < self.target.len() && self.target[t] == c {
                t + 1
            } else {
                continue;
            };
            self.out.push(x);
            if self.run(used | 1 << k, next_t) {
                return true;
            }
            self.out.pop();
        }
        self.failed.insert((used, t));
        false
    }
}

/// Exhaustive reference for [`r_minimize`]: minimum of `(|r(v)|, r(v), v)`
/// over the homotopy class of `u`.
pub fn r_minimize_oracle(u: &[usize], d: &Diagram, p: &IndexPartition, cap: usize) -> Result<Word> {
    check_letters(u, p)?;
    let class = wordcalc::homotopy_class(u, d, cap)?;
    Ok(class
        .into_iter()
        .map(|v| (parkour_unchecked(&v, p), v))
        .min_by(|(ra, va), (rb, vb)| (ra.len(), ra, va).cmp(&(rb.len(), rb, vb)))
        .map(|(_, v)| v)
        .expect("class is nonempty"))
}

/// Swaps blocks `s` and `s + 1` of `u`. When their classes commute in `M`
/// the result is homotopic to `u` and its image is the collapse of the
/// image with letters `s`, `s + 1` swapped.
pub fn swap_blocks(u: &[usize], p: &IndexPartition, s: usize) -> Result<Word> {
    let mut bd = blocks(u, p)?;
    if s + 1 >= bd.blocks.len() {
        return Err(Error::InvalidParameters(format!("no blocks at {s} and {}", s + 1)));
    }
    bd.blocks.swap(s, s + 1);
    Ok(bd.concat())
}

/// Where the neighbour of the swapped pair falls, relative to the classes of
/// the two swapped letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    /// In the class of the first swapped letter.
    A,
    /// In the class of the second swapped letter.
    B,
    /// Absent or in another class.
    C,
}

/// The nine substitutions `r(u) ⇝ r(u')` caused by `u1 ij u2 ≃ u1 ji u2`,
/// indexed by (left context, right context), written over `{i, j}`.
pub const SUBSTITUTION_TABLE: [[(&str, &str); 3]; 3] = [
    [("iji", "iji"), ("ij", "ijij"), ("ij", "iji")],
    [("jiji", "ji"), ("jij", "jij"), ("jij", "ji")],
    [("iji", "ji"), ("ij", "jij"), ("ij", "ji")],
];

pub fn table_entry(left: Context, right: Context) -> (&'static str, &'static str) {
    SUBSTITUTION_TABLE[left as usize][right as usize]
}

/// The effect on `r` of the commutation at position `s` of `u` (letters
/// `u[s]`, `u[s+1]` in different parts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyEffect {
    pub left: Context,
    pub right: Context,
    /// `r(u) = prefix · before · suffix`.
    pub before: Word,
    /// `r(u') = prefix · after · suffix`.
    pub after: Word,
    pub prefix: Word,
    pub suffix: Word,
}

impl HomotopyEffect {
    /// Renders a word over the two classes as a string over `{i, j}`.
    pub fn pattern(&self, w: &[usize], li: usize) -> String {
        w.iter().map(|&x| if x == li { 'i' } else { 'j' }).collect()
    }
}

pub fn homotopy_effect(u: &[usize], p: &IndexPartition, s: usize) -> Result<Option<HomotopyEffect>> {
    check_letters(u, p)?;
    if s + 1 >= u.len() {
        return Err(Error::InvalidParameters(format!("no letters at {s} and {}", s + 1)));
    }
    let (li, lj) = (p.class_of(u[s]), p.class_of(u[s + 1]));
    if li == lj {
        return Ok(None);
    }
    let ctx = |x: Option<&usize>| match x.map(|&x| p.class_of(x)) {
        Some(c) if c == li => Context::A,
        Some(c) if c == lj => Context::B,
        _ => Context::C,
    };
    let left = ctx(u[..s].last());
    let right = ctx(u[s + 2..].first());
    let mut prefix = parkour_unchecked(&u[..s], p);
    if left != Context::C {
        prefix.pop();
    }
    let mut suffix = parkour_unchecked(&u[s + 2..], p);
    if right != Context::C {
        suffix.remove(0);
    }
    let mut v = u.to_vec();
    v.swap(s, s + 1);
    let strip = |img: Word| -> Word { img[prefix.len()..img.len() - suffix.len()].to_vec() };
    let before = strip(parkour_unchecked(u, p));
    let after = strip(parkour_unchecked(&v, p));
    Ok(Some(HomotopyEffect {
        left,
        right,
        before,
        after,
        prefix,
        suffix,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::city_product_diagrams;
    use crate::wordcalc::DEFAULT_CAP;
    use proptest::prelude::*;

    /// Parts {2a,2b}, {3b,3c}, {1a,1b,1c}: the classes are numbered 1, 2, 3
    /// by name.
    fn example() -> (Diagram, IndexPartition) {
        let m = Diagram::free(3).unwrap();
        let f1 = Diagram::free(3).unwrap().with_names(["a", "b", "c"]).unwrap();
        let f2 = Diagram::free(2).unwrap().with_names(["a", "b"]).unwrap();
        let f3 = Diagram::free(2).unwrap().with_names(["b", "c"]).unwrap();
        city_product_diagrams(&m, &[f1, f2, f3]).unwrap()
    }

    fn idx(d: &Diagram, names: &[&str]) -> Word {
        names.iter().map(|n| d.index_of(n).unwrap()).collect()
    }

    #[test]
    fn worked_example() {
        let (d, p) = example();
        let w = idx(&d, &["2a", "2b", "3c", "1c", "1a", "1b", "1a", "3b"]);
        assert_eq!(parkour(&w, &p).unwrap(), vec![1, 2, 0, 2]);
        let b = blocks(&w, &p).unwrap();
        assert_eq!(b.classes(), vec![1, 2, 0, 2]);
        assert_eq!(b.blocks[0].letters, idx(&d, &["2a", "2b"]));
        assert_eq!(b.blocks[2].letters, idx(&d, &["1c", "1a", "1b", "1a"]));
        assert_eq!(b.concat(), w);
        assert_eq!(parkour(&[], &p).unwrap(), Vec::<usize>::new());
        assert_eq!(parkour(&idx(&d, &["1a", "1b", "1a"]), &p).unwrap(), vec![0]);
        assert_eq!(blocks(&idx(&d, &["1a", "2a", "1b", "2b"]), &p).unwrap().blocks.len(), 4);
    }

    #[test]
    fn quotient_recovered() {
        let (d, p) = example();
        assert!(quotient_diagram(&d, &p).unwrap().same_matrix(&Diagram::free(3).unwrap()));
    }

    /// Four columns of type {1,2,3,4} (pairwise commuting) and three rows
    /// {5,6,7}; classes 0 = columns, 1 = rows, M edgeless.
    fn grid() -> (Diagram, IndexPartition) {
        let m = Diagram::right_angled(2, &[]).unwrap();
        let f1 = Diagram::free(4).unwrap();
        let f2 = Diagram::free(3).unwrap();
        city_product_diagrams(&m, &[f1, f2]).unwrap()
    }

    #[test]
    fn grid_minimizes_to_two_blocks() {
        let (d, p) = grid();
        let u = vec![4, 0, 5, 1, 4, 2];
        assert_eq!(parkour(&u, &p).unwrap(), vec![1, 0, 1, 0, 1, 0]);
        let v = r_minimize(&u, &d, &p).unwrap();
        assert_eq!(parkour(&v, &p).unwrap(), vec![0, 1]);
        assert_eq!(v, r_minimize_oracle(&u, &d, &p, DEFAULT_CAP).unwrap());
        assert_eq!(v, vec![0, 1, 2, 4, 5, 4]);
    }

    #[test]
    fn single_block_is_fixed() {
        let (d, p) = example();
        let u = idx(&d, &["1b", "1a", "1c"]);
        assert_eq!(r_minimize(&u, &d, &p).unwrap(), u);
        assert_eq!(r_minimize(&[0, 0], &d, &p), Err(Error::NotReduced));
    }

    #[test]
    fn table_cells() {
        // M edgeless on classes {x, y, z}; each class a free pair.
        let m = Diagram::right_angled(3, &[]).unwrap();
        let f = Diagram::free(2).unwrap();
        let (_, p) = city_product_diagrams(&m, &[f.clone(), f.clone(), f]).unwrap();
        // i-class letters 0, 1; j-class letters 2, 3; other 4.
        let lefts = [(Context::A, Some(1)), (Context::B, Some(3)), (Context::C, Some(4))];
        let rights = [(Context::A, Some(1)), (Context::B, Some(3)), (Context::C, None)];
        for (l, ll) in lefts {
            for (r, rl) in rights {
                let mut u: Word = ll.into_iter().collect();
                let s = u.len();
                u.extend([0, 2]);
                u.extend(rl);
                let e = homotopy_effect(&u, &p, s).unwrap().unwrap();
                assert_eq!((e.left, e.right), (l, r));
                let got = (e.pattern(&e.before, 0), e.pattern(&e.after, 0));
                let want = table_entry(l, r);
                assert_eq!((got.0.as_str(), got.1.as_str()), want, "cell {l:?},{r:?}");
            }
        }
    }

    #[test]
    fn block_swap_realizes_image_homotopy() {
        let (d, p) = grid();
        let u = vec![4, 0, 5, 1];
        let v = swap_blocks(&u, &p, 1).unwrap();
        assert_eq!(parkour(&v, &p).unwrap(), vec![1, 0]);
        assert!(wordcalc::are_equivalent(&u, &v, &d).unwrap());
    }

    fn reduced_word(d: &Diagram, raw: Vec<usize>) -> Word {
        wordcalc::reduce_ra(&raw, d)
    }

    proptest! {
        #[test]
        fn matches_oracle_on_grid(raw in prop::collection::vec(0usize..7, 0..9)) {
            let (d, p) = grid();
            let u = reduced_word(&d, raw);
            prop_assert_eq!(r_minimize(&u, &d, &p).unwrap(), r_minimize_oracle(&u, &d, &p, DEFAULT_CAP).unwrap());
        }

        #[test]
        fn matches_oracle_on_example(raw in prop::collection::vec(0usize..7, 0..9)) {
            let (d, p) = example();
            let u = reduced_word(&d, raw);
            prop_assert_eq!(r_minimize(&u, &d, &p).unwrap(), r_minimize_oracle(&u, &d, &p, DEFAULT_CAP).unwrap());
        }
    }
}
