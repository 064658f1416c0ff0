//! Coxeter diagrams, city products of diagrams and their recovery from
//! graph modules.
//!
//! Indices are `0..rank`. Each index also carries a display name (default
//! `"1"`, `"2"`, ...), which is what the JSON formats use.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank supported. Commutation sets are stored as `u64` bitmasks.
pub const MAX_RANK: usize = 64;

/// Rank limit for the exhaustive module search.
pub const MODULE_SEARCH_LIMIT: usize = 16;

/// Rank limit for the factorial symmetry search.
pub const SYMMETRY_SEARCH_LIMIT: usize = 9;

/// An entry `m_ij` of a Coxeter matrix. `Infinite` orders above every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub const INF: Label = Label::Infinite;

    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => f.write_str("inf"),
        }
    }
}

impl From<u32> for Label {
    fn from(m: u32) -> Self {
        Label::Finite(m)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Int(u32),
    Str(String),
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => LabelRepr::Int(*m).serialize(s),
            Label::Infinite => LabelRepr::Str("inf".into()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match LabelRepr::deserialize(d)? {
            LabelRepr::Int(m) => Ok(Label::Finite(m)),
            LabelRepr::Str(s) if s == "inf" || s == "∞" => Ok(Label::Infinite),
            LabelRepr::Str(s) => s
                .parse::<u32>()
                .map(Label::Finite)
                .map_err(|_| serde::de::Error::custom(format!("bad Coxeter label {s:?}"))),
        }
    }
}

/// A Coxeter diagram, stored as its (validated) Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    labels: Vec<Vec<Label>>,
    names: Vec<String>,
    right_angled: bool,
    commute: Vec<u64>,
    infinite: Vec<u64>,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

impl Diagram {
    /// Validates a Coxeter matrix.
    pub fn new(labels: Vec<Vec<Label>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        Self::build(labels, default_names(n))
    }

    /// The rank-0 diagram. Only produced internally (e.g. by a full implosion).
    pub fn empty() -> Self {
        Diagram {
            labels: Vec::new(),
            names: Vec::new(),
            right_angled: true,
            commute: Vec::new(),
            infinite: Vec::new(),
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn build(labels: Vec<Vec<Label>>, names: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_RANK {
            return Err(Error::RankTooLarge {
                rank: n,
                limit: MAX_RANK,
                what: "diagrams",
            });
        }
        for (i, row) in labels.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has length {}", row.len())));
            }
            if row[i] != Label::Finite(1) {
                return Err(Error::InvalidMatrix(format!("diagonal entry ({i},{i}) is {}", row[i])));
            }
        }
        let mut right_angled = true;
        let mut commute = vec![0u64; n];
        let mut infinite = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let m = labels[i][j];
                if m != labels[j][i] {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i},{j})")));
                }
                if m < Label::Finite(2) {
                    return Err(Error::InvalidMatrix(format!("off-diagonal entry ({i},{j}) is {m}")));
                }
                match m {
                    Label::Finite(2) => commute[i] |= 1 << j,
                    Label::Infinite => infinite[i] |= 1 << j,
                    _ => right_angled = false,
                }
            }
        }
        if names.len() != n {
            return Err(Error::InvalidMatrix("names length differs from rank".into()));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidMatrix("index names are not distinct".into()));
        }
        Ok(Diagram {
            labels,
            names,
            right_angled,
            commute,
            infinite,
        })
    }

    /// Right-angled diagram of rank `n` whose `∞` edges are `edges`; every
    /// other pair commutes.
    pub fn right_angled(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut labels = vec![vec![Label::Finite(2); n]; n];
        for (i, row) in labels.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidMatrix(format!("bad edge ({i},{j})")));
            }
            labels[i][j] = Label::Infinite;
            labels[j][i] = Label::Infinite;
        }
        Self::new(labels)
    }

    /// Right-angled diagram where every pair is `∞`.
    pub fn free(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::right_angled(n, &edges)
    }

    pub fn with_names<S: Into<String>>(self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        Self::build(self.labels, names)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[i][j]
    }

    pub fn labels(&self) -> &[Vec<Label>] {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn is_right_angled(&self) -> bool {
        self.right_angled
    }

    pub fn require_right_angled(&self) -> Result<()> {
        if self.right_angled {
            Ok(())
        } else {
            Err(Error::NotRightAngled)
        }
    }

    /// `m_ij == 2` (distinct commuting generators).
    #[inline]
    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.commute[i] >> j & 1 == 1
    }

    /// Bitmask of the indices `j` with `m_ij == 2`.
    #[inline]
    pub fn commute_mask(&self, i: usize) -> u64 {
        self.commute[i]
    }

    /// Bitmask of the indices `j` with `m_ij == ∞`.
    #[inline]
    pub fn infinite_mask(&self, i: usize) -> u64 {
        self.infinite[i]
    }

    pub fn full_mask(&self) -> u64 {
        mask_of_len(self.rank())
    }

    /// True iff the graph with edges `{i, j : m_ij >= 3}` is connected.
    pub fn is_irreducible(&self) -> bool {
        let n = self.rank();
        if n == 0 {
            return false;
        }
        let full = self.full_mask();
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            for i in bits(frontier) {
                next |= full & !self.commute[i] & !(1 << i);
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    /// Connected components of the graph with edges `m_ij >= 3`, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let full = self.full_mask();
        let mut assigned = 0u64;
        let mut out = Vec::new();
        for start in 0..n {
            if assigned >> start & 1 == 1 {
                continue;
            }
            let mut seen = 1u64 << start;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0u64;
                for i in bits(frontier) {
                    next |= full & !self.commute[i] & !(1 << i);
                }
                frontier = next & !seen;
                seen |= next;
            }
            assigned |= seen;
            out.push(bits(seen).collect());
        }
        out
    }

    /// The induced diagram on `subset` (kept in the given order).
    pub fn restrict(&self, subset: &[usize]) -> Result<Diagram> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &i in subset {
            if i >= self.rank() {
                return Err(Error::UnknownIndex(i));
            }
        }
        let labels = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.labels[i][j]).collect())
            .collect();
        let names = subset.iter().map(|&i| self.names[i].clone()).collect();
        Self::build(labels, names)
    }

    /// Same Coxeter matrix (names ignored).
    pub fn same_matrix(&self, other: &Diagram) -> bool {
        self.labels == other.labels
    }
}

/// `I = I_1 ⊔ ... ⊔ I_n` together with the class map `i ↦ ℓ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexPartition {
    parts: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl IndexPartition {
    pub fn new(parts: Vec<Vec<usize>>, size: usize) -> Result<Self> {
        let mut class_of = vec![usize::MAX; size];
        for (l, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(format!("part {l} is empty")));
            }
            for &i in part {
                if i >= size {
                    return Err(Error::InvalidPartition(format!("index {i} out of range")));
                }
                if class_of[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
                class_of[i] = l;
            }
        }
        if let Some(i) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("index {i} is not covered")));
        }
        Ok(IndexPartition { parts, class_of })
    }

    /// Partition by part names, resolved against `d`.
    pub fn from_names(d: &Diagram, parts: &[Vec<String>]) -> Result<Self> {
        let parts = parts
            .iter()
            .map(|p| p.iter().map(|s| d.index_of(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts, d.rank())
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, l: usize) -> &[usize] {
        &self.parts[l]
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    #[inline]
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn part_mask(&self, l: usize) -> u64 {
        self.parts[l].iter().fold(0, |m, &i| m | 1 << i)
    }
}

/// `ⓜ_M(M_1, ..., M_n)`: the index set is the concatenation of the factor
/// index sets, in order.
pub fn city_product_diagrams(m: &Diagram, factors: &[Diagram]) -> Result<(Diagram, IndexPartition)> {
    m.require_right_angled()?;
    if factors.len() != m.rank() {
        return Err(Error::FactorCount {
            expected: m.rank(),
            got: factors.len(),
        });
    }
    let mut class = Vec::new();
    let mut local = Vec::new();
    let mut parts = Vec::new();
    let mut names = Vec::new();
    for (l, f) in factors.iter().enumerate() {
        let mut part = Vec::new();
        for i in 0..f.rank() {
            part.push(class.len());
            class.push(l);
            local.push(i);
            names.push(product_name(m.name(l), f, i));
        }
        parts.push(part);
    }
    let total = class.len();
    let mut labels = vec![vec![Label::Finite(1); total]; total];
    for a in 0..total {
        for b in 0..total {
            if a == b {
                continue;
            }
            labels[a][b] = if class[a] == class[b] {
                factors[class[a]].label(local[a], local[b])
            } else {
                m.label(class[a], class[b])
            };
        }
    }
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != total {
        names = (0..total).map(|a| format!("{}.{}", m.name(class[a]), factors[class[a]].name(local[a]))).collect();
    }
    let d = Diagram::build(labels, names)?;
    let p = IndexPartition::new(parts, total)?;
    Ok((d, p))
}

fn product_name(outer: &str, factor: &Diagram, i: usize) -> String {
    if factor.rank() == 1 {
        return outer.to_string();
    }
    let inner = factor.name(i);
    let glue = outer.ends_with(|c: char| c.is_ascii_digit()) && inner.starts_with(|c: char| c.is_ascii_digit());
    if glue {
        format!("{outer}.{inner}")
    } else {
        format!("{outer}{inner}")
    }
}

/// Is `set` a module of the `∞`-edge graph of `d`?
pub fn is_module(d: &Diagram, set: u64) -> bool {
    let outside = d.full_mask() & !set;
    bits(outside).all(|v| {
        let adj = d.infinite_mask(v) & set;
        adj == 0 || adj == set
    })
}

/// Smallest module containing `seed`.
pub fn module_closure(d: &Diagram, seed: u64) -> u64 {
    let full = d.full_mask();
    let mut set = seed;
    loop {
        let splitters: u64 = bits(full & !set)
            .filter(|&v| {
                let adj = d.infinite_mask(v) & set;
                adj != 0 && adj != set
            })
            .fold(0, |m, v| m | 1 << v);
        if splitters == 0 {
            return set;
        }
        set |= splitters;
    }
}

/// A nontrivial module (`1 < |X| < rank`) of the `∞`-edge graph: the first
/// one in order of size, then lexicographic order of the sorted contents.
pub fn find_module(d: &Diagram) -> Result<Option<Vec<usize>>> {
    d.require_right_angled()?;
    let n = d.rank();
    if n > MODULE_SEARCH_LIMIT {
        return Err(Error::RankTooLarge {
            rank: n,
            limit: MODULE_SEARCH_LIMIT,
            what: "module search",
        });
    }
    for size in 2..n {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let set = comb.iter().fold(0u64, |m, &i| m | 1 << i);
            if is_module(d, set) {
                return Ok(Some(comb));
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A city-product decomposition `D ≅ ⓜ_M(D|I_1, ..., D|I_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CityDecomposition {
    pub quotient: Diagram,
    pub partition: IndexPartition,
}

impl CityDecomposition {
    pub fn factors(&self, d: &Diagram) -> Vec<Diagram> {
        self.partition
            .parts()
            .iter()
            .map(|p| d.restrict(p).expect("parts are nonempty"))
            .collect()
    }

    /// Rebuilds the product and compares it with `d` index by index.
    pub fn reassembles(&self, d: &Diagram) -> bool {
        let Ok((prod, _)) = city_product_diagrams(&self.quotient, &self.factors(d)) else {
            return false;
        };
        let order: Vec<usize> = self.partition.parts().iter().flatten().copied().collect();
        order.len() == d.rank()
            && (0..order.len()).all(|a| (0..order.len()).all(|b| prod.label(a, b) == d.label(order[a], order[b])))
    }
}

/// Decomposes a right-angled diagram as a nontrivial city product, or
/// returns `None` when its `∞`-edge graph is prime.
///
/// The parts of size at least two are pairwise disjoint inclusion-minimal
/// nontrivial modules, chosen greedily by (size, sorted contents); every
/// remaining index is its own part. Parts are ordered by their least index.
pub fn decompose_as_city_product(d: &Diagram) -> Result<Option<CityDecomposition>> {
    d.require_right_angled()?;
    let n = d.rank();
    if n > MODULE_SEARCH_LIMIT {
        return Err(Error::RankTooLarge {
            rank: n,
            limit: MODULE_SEARCH_LIMIT,
            what: "module search",
        });
    }
    let full = d.full_mask();
    let mut closures: Vec<u64> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = module_closure(d, 1 << a | 1 << b);
            if c != full && !closures.contains(&c) {
                closures.push(c);
            }
        }
    }
    let mut minimal: Vec<u64> = closures
        .iter()
        .copied()
        .filter(|&x| !closures.iter().any(|&y| y != x && y & x == y))
        .collect();
    if minimal.is_empty() {
        return Ok(None);
    }
    minimal.sort_by_key(|&x| (x.count_ones(), bits(x).collect::<Vec<_>>()));
    let mut used = 0u64;
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for x in minimal {
        if x & used == 0 {
            used |= x;
            parts.push(bits(x).collect());
        }
    }
    for v in bits(full & !used) {
        parts.push(vec![v]);
    }
    parts.sort_by_key(|p| p[0]);
    let k = parts.len();
    let reps: Vec<usize> = parts.iter().map(|p| p[0]).collect();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if d.label(reps[a], reps[b]) == Label::Infinite {
                edges.push((a, b));
            }
        }
    }
    let quotient = Diagram::right_angled(k, &edges)?;
    let partition = IndexPartition::new(parts, n)?;
    Ok(Some(CityDecomposition { quotient, partition }))
}

/// A label-preserving permutation of the index set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramSymmetry {
    pub perm: Vec<usize>,
    pub support: Vec<usize>,
}

impl DiagramSymmetry {
    pub fn from_perm(perm: Vec<usize>) -> Self {
        let support = (0..perm.len()).filter(|&l| perm[l] != l).collect();
        DiagramSymmetry { perm, support }
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn apply(&self, l: usize) -> usize {
        self.perm[l]
    }

    pub fn inverse(&self) -> DiagramSymmetry {
        let mut inv = vec![0; self.perm.len()];
        for (l, &r) in self.perm.iter().enumerate() {
            inv[r] = l;
        }
        DiagramSymmetry::from_perm(inv)
    }

    pub fn preserves(&self, d: &Diagram) -> bool {
        let n = d.rank();
        self.perm.len() == n
            && (0..n).all(|i| (0..n).all(|j| d.label(self.perm[i], self.perm[j]) == d.label(i, j)))
    }
}

/// All symmetries, in lexicographic order of their image lists.
pub fn diagram_symmetries(d: &Diagram) -> Result<Vec<DiagramSymmetry>> {
    let n = d.rank();
    if n > SYMMETRY_SEARCH_LIMIT {
        return Err(Error::RankTooLarge {
            rank: n,
            limit: SYMMETRY_SEARCH_LIMIT,
            what: "symmetry search",
        });
    }
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend_symmetry(d, &mut perm, &mut used, &mut out);
    Ok(out)
}

fn extend_symmetry(d: &Diagram, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<DiagramSymmetry>) {
    let k = perm.len();
    if k == d.rank() {
        out.push(DiagramSymmetry::from_perm(perm.clone()));
        return;
    }
    for img in 0..d.rank() {
        if used[img] {
            continue;
        }
        if (0..k).all(|j| d.label(img, perm[j]) == d.label(k, j)) {
            used[img] = true;
            perm.push(img);
            extend_symmetry(d, perm, used, out);
            perm.pop();
            used[img] = false;
        }
    }
}

// JSON ---------------------------------------------------------------------

/// `{"rank": n, "labels": [[...]], "names": [...]}`; `names` is optional.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub rank: usize,
    pub labels: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl From<&Diagram> for DiagramJson {
    fn from(d: &Diagram) -> Self {
        let names = if d.names == default_names(d.rank()) {
            None
        } else {
            Some(d.names.clone())
        };
        DiagramJson {
            rank: d.rank(),
            labels: d.labels.clone(),
            names,
        }
    }
}

impl TryFrom<DiagramJson> for Diagram {
    type Error = Error;

    fn try_from(j: DiagramJson) -> Result<Self> {
        if j.labels.len() != j.rank {
            return Err(Error::InvalidMatrix(format!(
                "rank {} but {} rows",
                j.rank,
                j.labels.len()
            )));
        }
        let d = Diagram::new(j.labels)?;
        match j.names {
            Some(names) => d.with_names(names),
            None => Ok(d),
        }
    }
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DiagramJson::deserialize(d)?;
        Diagram::try_from(j).map_err(serde::de::Error::custom)
    }
}

// bit helpers ----------------------------------------------------------------

#[inline]
pub(crate) fn mask_of_len(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of `m` in increasing order.
#[inline]
pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_of_squares() -> (Diagram, IndexPartition) {
        let m = Diagram::right_angled(3, &[(0, 1), (1, 2)]).unwrap();
        let f1 = Diagram::right_angled(2, &[(0, 1)]).unwrap().with_names(["a", "b"]).unwrap();
        let f2 = Diagram::right_angled(1, &[]).unwrap();
        let f3 = f1.clone();
        city_product_diagrams(&m, &[f1, f2, f3]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Diagram::new(vec![vec![1.into()]]).unwrap().is_right_angled());
        let inf = Diagram::new(vec![vec![1.into(), Label::INF], vec![Label::INF, 1.into()]]).unwrap();
        assert!(inf.is_right_angled());
        let g = Diagram::new(vec![
            vec![1.into(), 2.into(), Label::INF],
            vec![2.into(), 1.into(), 3.into()],
            vec![Label::INF, 3.into(), 1.into()],
        ])
        .unwrap();
        assert!(!g.is_right_angled());
        assert!(Diagram::new(vec![vec![1.into(), 2.into()], vec![3.into(), 1.into()]]).is_err());
        assert!(Diagram::new(vec![vec![2.into()]]).is_err());
        assert!(Diagram::new(vec![vec![1.into(), 1.into()], vec![1.into(), 1.into()]]).is_err());
        assert!(Diagram::new(vec![]).is_err());
    }

    #[test]
    fn path_of_squares_product_structure() {
        let (d, p) = path_of_squares();
        assert_eq!(d.rank(), 5);
        assert_eq!(d.names(), ["1a", "1b", "2", "3a", "3b"]);
        let two = 2;
        for x in [0, 1, 3, 4] {
            assert_eq!(d.label(two, x), Label::INF);
        }
        assert_eq!(d.label(0, 1), Label::INF);
        assert_eq!(d.label(3, 4), Label::INF);
        for a in [0, 1] {
            for b in [3, 4] {
                assert_eq!(d.label(a, b), Label::Finite(2));
            }
        }
        assert_eq!(p.parts(), &[vec![0, 1], vec![2], vec![3, 4]]);
        assert!(d.is_irreducible());
    }

    #[test]
    fn edgeless_product_is_disjoint_union() {
        let m = Diagram::right_angled(2, &[]).unwrap();
        let f = Diagram::right_angled(2, &[(0, 1)]).unwrap();
        let (d, _) = city_product_diagrams(&m, &[f.clone(), f]).unwrap();
        assert_eq!(d.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(!d.is_irreducible());
    }

    #[test]
    fn rank_one_product_is_identity() {
        let m = Diagram::right_angled(1, &[]).unwrap();
        let f = Diagram::right_angled(3, &[(0, 2)]).unwrap();
        let (d, _) = city_product_diagrams(&m, std::slice::from_ref(&f)).unwrap();
        assert!(d.same_matrix(&f));
    }

    #[test]
    fn product_errors() {
        let m = Diagram::right_angled(2, &[]).unwrap();
        let f = Diagram::right_angled(1, &[]).unwrap();
        assert!(matches!(
            city_product_diagrams(&m, std::slice::from_ref(&f)),
            Err(Error::FactorCount { .. })
        ));
        let nra = Diagram::new(vec![vec![1.into(), 3.into()], vec![3.into(), 1.into()]]).unwrap();
        assert_eq!(city_product_diagrams(&nra, &[f.clone(), f]), Err(Error::NotRightAngled));
    }

    #[test]
    fn irreducibility() {
        assert!(Diagram::free(2).unwrap().is_irreducible());
        assert!(!Diagram::right_angled(2, &[]).unwrap().is_irreducible());
        assert!(Diagram::right_angled(1, &[]).unwrap().is_irreducible());
    }

    #[test]
    fn modules() {
        assert_eq!(find_module(&Diagram::free(2).unwrap()).unwrap(), None);
        assert_eq!(find_module(&Diagram::right_angled(2, &[]).unwrap()).unwrap(), None);
        let (d, _) = path_of_squares();
        assert_eq!(find_module(&d).unwrap(), Some(vec![0, 1]));
        let c4 = Diagram::right_angled(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(find_module(&c4).unwrap(), Some(vec![0, 2]));
        let big = Diagram::right_angled(17, &[]).unwrap();
        assert!(matches!(find_module(&big), Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn decompose_path_of_squares() {
        let (d, p) = path_of_squares();
        let dec = decompose_as_city_product(&d).unwrap().unwrap();
        assert_eq!(dec.partition.parts(), p.parts());
        let m = Diagram::right_angled(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(dec.quotient.same_matrix(&m));
        assert!(dec.reassembles(&d));
    }

    #[test]
    fn decompose_prime_path() {
        let p5 = Diagram::right_angled(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(decompose_as_city_product(&p5).unwrap(), None);
    }

    #[test]
    fn decompose_edgeless() {
        let e3 = Diagram::right_angled(3, &[]).unwrap();
        let dec = decompose_as_city_product(&e3).unwrap().unwrap();
        assert_eq!(dec.partition.parts(), &[vec![0, 1], vec![2]]);
        assert_eq!(dec.quotient.rank(), 2);
        assert!(!dec.quotient.is_irreducible());
        assert!(dec.reassembles(&e3));
    }

    #[test]
    fn symmetries() {
        let s = diagram_symmetries(&Diagram::free(2).unwrap()).unwrap();
        assert_eq!(s.iter().map(|x| x.perm.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(diagram_symmetries(&Diagram::free(3).unwrap()).unwrap().len(), 6);
        let path = Diagram::right_angled(3, &[(0, 1), (1, 2)]).unwrap();
        let s = diagram_symmetries(&path).unwrap();
        assert_eq!(s.iter().map(|x| x.perm.clone()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![2, 1, 0]]);
        assert_eq!(s[1].support, vec![0, 2]);
        assert!(diagram_symmetries(&Diagram::right_angled(10, &[]).unwrap()).is_err());
    }

    #[test]
    fn restriction() {
        let (d, p) = path_of_squares();
        assert_eq!(d.restrict(&[2]).unwrap().rank(), 1);
        assert!(d.restrict(p.part(0)).unwrap().same_matrix(&Diagram::free(2).unwrap()));
        assert_eq!(d.restrict(&[0, 1, 2, 3, 4]).unwrap(), d);
        assert_eq!(d.restrict(&[]), Err(Error::EmptySubset));
    }

    #[test]
    fn json_round_trip() {
        let (d, _) = path_of_squares();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"inf\""));
        let back: Diagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let plain: Diagram = serde_json::from_str(r#"{"rank":2,"labels":[[1,"inf"],["inf",1]]}"#).unwrap();
        assert!(plain.same_matrix(&Diagram::free(2).unwrap()));
    }
}
