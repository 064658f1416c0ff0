//! City products `⋈_M(Δ_1, ..., Δ_n)` of semiregular right-angled
//! buildings, the residue projections `φ_ℓ`, and the skeletal building `Φ`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::building::{BallView, BuildingModel, BuildingSpec, Chamber};
use crate::diagram::{city_product_diagrams, Diagram, IndexPartition};
use crate::ensure;
use crate::error::Result;
use crate::parkour::{parkour_unchecked, r_minimize_with};
use crate::report::{Check, Stats};
use crate::wordcalc::{self, nf, reduced_words, NormalForm, Word};

#[derive(Clone, Debug)]
pub struct CityProduct {
    pub m: Diagram,
    pub partition: IndexPartition,
    pub factors: Vec<BuildingModel>,
    /// `Δ`, over the product diagram `N`.
    pub product: BuildingModel,
    masks: Vec<u64>,
}

/// `{"M": diagram, "factors": [building spec, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductSpec {
    #[serde(rename = "M")]
    pub m: Diagram,
    pub factors: Vec<BuildingSpec>,
}

impl ProductSpec {
    pub fn build(&self) -> Result<CityProduct> {
        let factors = self.factors.iter().map(BuildingSpec::model).collect::<Result<Vec<_>>>()?;
        CityProduct::new(self.m.clone(), factors)
    }
}

impl CityProduct {
    pub fn new(m: Diagram, factors: Vec<BuildingModel>) -> Result<Self> {
        m.require_right_angled()?;
        let diagrams: Vec<Diagram> = factors.iter().map(|f| f.diagram().clone()).collect();
        let (n, partition) = city_product_diagrams(&m, &diagrams)?;
        let q = factors.iter().flat_map(|f| f.params().iter().copied()).collect();
        let product = BuildingModel::new(n, q)?;
        let masks = (0..partition.num_parts()).map(|l| partition.part_mask(l)).collect();
        Ok(CityProduct {
            m,
            partition,
            factors,
            product,
            masks,
        })
    }

    /// Renames the indices of the product diagram.
    pub fn with_product_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let d = self.product.diagram().clone().with_names(names)?;
        self.product = BuildingModel::new(d, self.product.params().to_vec())?;
        Ok(self)
    }

    pub fn num_parts(&self) -> usize {
        self.factors.len()
    }

    pub fn part_mask(&self, l: usize) -> u64 {
        self.masks[l]
    }

    /// `φ_ℓ(c)` in `Δ_ℓ`.
    pub fn phi(&self, c: &Chamber, l: usize) -> Chamber {
        self.product.retraction(c, self.partition.part(l), &self.factors[l])
    }

    /// A chamber of `Δ_ℓ` read as a chamber of `Δ` in the base residue.
    pub fn embed(&self, l: usize, x: &Chamber) -> Chamber {
        let part = self.partition.part(l);
        let raw: Vec<_> = x.syllables().iter().map(|&(t, a)| (part[t], a)).collect();
        self.product.chamber(&raw).expect("factor syllables are valid")
    }

    /// The chamber `x` of the `I_ℓ`-residue of `c` with `φ_ℓ(x) = target`.
    pub fn residue_member(&self, c: &Chamber, l: usize, target: &Chamber) -> Chamber {
        let f = &self.factors[l];
        let w = f.multiply(&f.inverse(&self.phi(c, l)), target);
        self.product.multiply(c, &self.embed(l, &w))
    }

    /// Local index of `i` inside its part.
    pub fn local_index(&self, i: usize) -> usize {
        let l = self.partition.class_of(i);
        self.partition.part(l).iter().position(|&x| x == i).expect("i is in its part")
    }

    /// `λ′_i(c) = λ^ℓ_i(φ_ℓ(c))` with `ℓ = ℓ(i)`.
    pub fn lifted_coloring(&self, c: &Chamber, i: usize) -> u32 {
        let l = self.partition.class_of(i);
        self.factors[l].coloring(&self.phi(c, l), self.local_index(i))
    }

    /// A name for the `I_ℓ`-residue of `c`, i.e. the skeletal `ℓ`-panel.
    pub fn skeletal_key(&self, c: &Chamber, l: usize) -> Chamber {
        self.product.coset_rep(c, self.masks[l])
    }

    /// The skeletal adjacency type between distinct chambers.
    pub fn skeletal_adjacent(&self, c: &Chamber, d: &Chamber) -> Option<usize> {
        if c == d {
            return None;
        }
        (0..self.num_parts()).find(|&l| self.skeletal_key(c, l) == self.skeletal_key(d, l))
    }

    /// `s(δ_Δ(c, d))`: the minimizing representative of the Weyl distance.
    pub fn section(&self, c: &Chamber, d: &Chamber) -> Result<Word> {
        let w = self.product.weyl_distance(c, d);
        r_minimize_with(w.word(), self.product.diagram(), &self.partition, &self.m)
    }

    /// `δ_Φ(c, d)`, the normal form over `M` of `r(s(δ_Δ(c, d)))`.
    pub fn skeletal_weyl(&self, c: &Chamber, d: &Chamber) -> Result<NormalForm> {
        let r = parkour_unchecked(&self.section(c, d)?, &self.partition);
        NormalForm::of(&r, &self.m)
    }

    /// `r(s(δ_Δ(c, d)))` itself, without reduction.
    pub fn skeletal_image(&self, c: &Chamber, d: &Chamber) -> Result<Word> {
        Ok(parkour_unchecked(&self.section(c, d)?, &self.partition))
    }

    pub fn skeletal(&self, radius: usize) -> Result<SkeletalView> {
        SkeletalView::new(self, radius)
    }
}

/// A skeletal panel inside a ball.
#[derive(Clone, Debug)]
pub struct SkeletalPanel {
    pub part: usize,
    pub key: Chamber,
    /// Ball indices, increasing.
    pub members: Vec<usize>,
    /// The member closest to the centre.
    pub gate: usize,
}

/// The ball of radius `radius` around the base chamber of `Δ`, with the
/// coarse adjacencies of `Φ`.
#[derive(Clone, Debug)]
pub struct SkeletalView {
    pub ball: BallView,
    pub panels: Vec<SkeletalPanel>,
    panel_of: Vec<Vec<usize>>,
}

impl SkeletalView {
    pub fn new(cp: &CityProduct, radius: usize) -> Result<Self> {
        let ball = cp.product.ball(&Chamber::base(), radius)?;
        let n = cp.num_parts();
        let mut panels: Vec<SkeletalPanel> = Vec::new();
        let mut index: HashMap<(usize, Chamber), usize> = HashMap::new();
        let mut panel_of = vec![vec![0; n]; ball.len()];
        for (k, c) in ball.chambers().iter().enumerate() {
            for (l, slot) in panel_of[k].iter_mut().enumerate() {
                let key = cp.skeletal_key(c, l);
                let p = *index.entry((l, key.clone())).or_insert_with(|| {
                    panels.push(SkeletalPanel {
                        part: l,
                        key,
                        members: Vec::new(),
                        gate: k,
                    });
                    panels.len() - 1
                });
                panels[p].members.push(k);
                *slot = p;
            }
        }
        Ok(SkeletalView { ball, panels, panel_of })
    }

    pub fn panel_of(&self, k: usize, l: usize) -> &SkeletalPanel {
        &self.panels[self.panel_of[k][l]]
    }

    /// Skeletal neighbours `(ℓ, index)` of chamber `k`.
    pub fn neighbors(&self, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.panel_of[k].iter().enumerate().flat_map(move |(l, &p)| {
            self.panels[p]
                .members
                .iter()
                .filter(move |&&m| m != k)
                .map(move |&m| (l, m))
        })
    }

    /// Chambers reachable from `start` by a skeletal gallery of type `v`
    /// inside the ball, each with one witness gallery.
    pub fn gallery_ends(&self, start: usize, v: &[usize]) -> HashMap<usize, Vec<usize>> {
        let mut cur: HashMap<usize, Vec<usize>> = HashMap::from([(start, vec![start])]);
        for &l in v {
            let mut next: HashMap<usize, Vec<usize>> = HashMap::new();
            let mut keys: Vec<usize> = cur.keys().copied().collect();
            keys.sort_unstable();
            for x in keys {
                let p = &self.panels[self.panel_of[x][l]];
                for &y in &p.members {
                    if y != x && !next.contains_key(&y) {
                        let mut g = cur[&x].clone();
                        g.push(y);
                        next.insert(y, g);
                    }
                }
            }
            cur = next;
        }
        cur
    }
}

// Checks ---------------------------------------------------------------------

/// Skeletal `ℓ`-panels are exactly the `I_ℓ`-residues met by the ball:
/// compares each panel with a BFS along `I_ℓ`-adjacencies.
pub fn check_panels_are_residues(cp: &CityProduct, sv: &SkeletalView) -> Check {
    let ball = &sv.ball;
    for p in &sv.panels {
        let mask = cp.part_mask(p.part);
        let mut seen = HashSet::from([p.members[0]]);
        let mut stack = vec![p.members[0]];
        while let Some(x) = stack.pop() {
            for (i, y) in ball.neighbors(x) {
                if mask >> i & 1 == 1 && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut res: Vec<usize> = seen.into_iter().collect();
        res.sort_unstable();
        ensure!(
            res == p.members,
            "skeletal panel differs from the residue",
            {"part": p.part, "key": p.key, "panel": p.members.len(), "residue": res.len()}
        );
    }
    Ok(Stats::new(sv.panels.len()))
}

/// Semiregularity of `Φ` up to truncation: a panel whose gate is at distance
/// `t` from the centre meets the ball in a ball of radius `R - t` of `Δ_ℓ`;
/// when `Δ_ℓ` is finite and that ball is all of it, the panel has exactly
/// `|Δ_ℓ|` chambers. Returns the panel sizes seen on complete panels.
pub fn check_panel_sizes(cp: &CityProduct, sv: &SkeletalView) -> std::result::Result<(Stats, Vec<Vec<usize>>), crate::report::Failure> {
    let r = sv.ball.radius;
    let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
    let mut complete_sizes = vec![Vec::new(); cp.num_parts()];
    for p in &sv.panels {
        let gate_dist = p.members.iter().map(|&k| sv.ball.dist(k)).min().unwrap_or(0);
        ensure!(
            sv.ball.dist(p.gate) == gate_dist,
            "panel gate is not its closest member",
            {"part": p.part, "key": p.key}
        );
        let room = r - gate_dist;
        let f = &cp.factors[p.part];
        let expected = match cache.get(&(p.part, room)) {
            Some(&e) => e,
            None => {
                let e = f
                    .ball(&Chamber::base(), room)
                    .map_err(|e| crate::report::Failure::new("factor ball", json!(e.to_string())))?
                    .len();
                cache.insert((p.part, room), e);
                e
            }
        };
        ensure!(
            p.members.len() == expected,
            "skeletal panel has the wrong size",
            {"part": p.part, "key": p.key, "size": p.members.len(), "expected": expected}
        );
        if let Some(total) = f.size() {
            if expected == total {
                complete_sizes[p.part].push(total);
            }
        }
    }
    for s in &mut complete_sizes {
        s.sort_unstable();
        s.dedup();
    }
    Ok((Stats::new(sv.panels.len()), complete_sizes))
}

/// `φ_ℓ` is a legal coloring of `Φ`: injective on `ℓ`-panels with image the
/// appropriate ball of `Δ_ℓ`, constant on `ℓ'`-panels for `ℓ' ≠ ℓ`.
pub fn check_skeletal_coloring(cp: &CityProduct, sv: &SkeletalView) -> Check {
    let phis: Vec<Vec<Chamber>> = sv
        .ball
        .chambers()
        .iter()
        .map(|c| (0..cp.num_parts()).map(|l| cp.phi(c, l)).collect())
        .collect();
    let mut checked = 0;
    for p in &sv.panels {
        let l = p.part;
        let imgs: HashSet<&Chamber> = p.members.iter().map(|&k| &phis[k][l]).collect();
        ensure!(
            imgs.len() == p.members.len(),
            "φ is not injective on a skeletal panel",
            {"part": l, "key": p.key}
        );
        let centre = &phis[p.gate][l];
        let room = sv.ball.radius - sv.ball.dist(p.gate);
        for &k in &p.members {
            let d = cp.factors[l].distance(centre, &phis[k][l]);
            ensure!(
                d <= room && d == sv.ball.dist(k) - sv.ball.dist(p.gate),
                "φ does not map the panel onto a ball",
                {"part": l, "chamber": sv.ball.chamber(k), "image": phis[k][l]}
            );
        }
        for l2 in (0..cp.num_parts()).filter(|&x| x != l) {
            let first = &phis[p.members[0]][l2];
            ensure!(
                p.members.iter().all(|&k| &phis[k][l2] == first),
                "φ is not constant on a skeletal panel of another type",
                {"panel_part": l, "coloring_part": l2, "key": p.key}
            );
        }
        checked += 1;
    }
    Ok(Stats::new(checked))
}

/// `φ_ℓ` is constant on residues of type `I ∖ I_ℓ` and restricts to an
/// adjacency-preserving bijection on each `I_ℓ`-residue (checked on the
/// ball).
pub fn check_phi_residues(cp: &CityProduct, ball: &BallView) -> Check {
    let mut checked = 0;
    for l in 0..cp.num_parts() {
        let f = &cp.factors[l];
        for (u, v, i) in ball.edges() {
            let (cu, cv) = (ball.chamber(u), ball.chamber(v));
            let (pu, pv) = (cp.phi(cu, l), cp.phi(cv, l));
            if cp.partition.class_of(i) == l {
                let li = cp.local_index(i);
                ensure!(
                    f.adjacent(&pu, &pv) == Some(li),
                    "φ does not preserve an adjacency inside its part",
                    {"part": l, "c": cu, "d": cv, "type": i}
                );
            } else {
                ensure!(
                    pu == pv,
                    "φ separates chambers adjacent in another part",
                    {"part": l, "c": cu, "d": cv, "type": i}
                );
            }
            checked += 1;
        }
    }
    Ok(Stats::new(checked))
}

/// `λ′` equals the coloring of `Δ` and is legal on every panel of the ball.
pub fn check_lifted_coloring(cp: &CityProduct, ball: &BallView) -> Check {
    let b = &cp.product;
    for c in ball.chambers() {
        for i in 0..b.rank() {
            ensure!(
                cp.lifted_coloring(c, i) == b.coloring(c, i),
                "lifted coloring differs from the coloring of the product",
                {"chamber": c, "type": i}
            );
        }
    }
    crate::verify::check_coloring_legal(b, ball, |c, i| cp.lifted_coloring(c, i))
}

/// `r(s(w))` is reduced over `M` for every `w = δ_Δ(c, d)` with `c` the
/// centre, and `δ_Φ(d, c) = δ_Φ(c, d)⁻¹` on all pairs from `sample`.
pub fn check_section_claims(cp: &CityProduct, ball: &BallView, sample: &[usize]) -> Result<Check> {
    let mut checked = 0;
    for &a in sample {
        for k in 0..ball.len() {
            let (c, d) = (ball.chamber(a), ball.chamber(k));
            let img = cp.skeletal_image(c, d)?;
            ensure!(
                wordcalc::is_reduced(&img, &cp.m)?,
                "r(s(w)) is not reduced",
                {"c": c, "d": d, "image": img}
            );
            let fwd = cp.skeletal_weyl(c, d)?;
            let back = cp.skeletal_weyl(d, c)?;
            ensure!(
                back == fwd.invert(&cp.m),
                "skeletal Weyl distance is not symmetric up to inversion",
                {"c": c, "d": d, "forward": fwd.word(), "backward": back.word()}
            );
            checked += 1;
        }
    }
    Ok(Ok(Stats::new(checked)))
}

/// `Φ` is a building of type `M` on the window: for every interior chamber
/// `c` and reduced `v` over `M` with `|v| ≤ maxlen`,
///
/// * every end `d` of a skeletal gallery of type `v` from `c` has
///   `δ_Φ(c, d) = ε(v)`, and the gallery lifts (each step replaced by a
///   minimal gallery in its residue) to a reduced gallery of `Δ` whose type
///   maps to `v` under `r`;
/// * every `d` with `δ_Φ(c, d) = ε(v)` and `dist(o, c) + dist(c, d) ≤ R` is
///   such an end.
///
/// Interior means `dist(o, c) ≤ R - interior_slack`.
pub fn verify_skeletal_building(cp: &CityProduct, sv: &SkeletalView, maxlen: usize, interior_slack: usize) -> Result<Check> {
    let ball = &sv.ball;
    let r = ball.radius;
    let words = reduced_words(&cp.m, maxlen);
    let nd = cp.product.diagram();
    let mut checked = 0;
    for a in 0..ball.len() {
        if ball.dist(a) + interior_slack > r {
            continue;
        }
        let c = ball.chamber(a);
        let mut by_element: HashMap<Word, Vec<usize>> = HashMap::new();
        for k in 0..ball.len() {
            let w = cp.skeletal_weyl(c, ball.chamber(k))?;
            by_element.entry(w.into_word()).or_default().push(k);
        }
        for v in &words {
            let ends = sv.gallery_ends(a, v);
            let ev = nf(v, &cp.m);
            for (&k, gallery) in &ends {
                let d = ball.chamber(k);
                let got = cp.skeletal_weyl(c, d)?;
                ensure!(
                    got.word() == ev.as_slice(),
                    "gallery of reduced type v ends at a chamber with another skeletal distance",
                    {"c": c, "d": d, "v": v, "delta": got.word()}
                );
                let mut lift: Word = Vec::new();
                for s in gallery.windows(2) {
                    let step = cp.product.weyl_distance(ball.chamber(s[0]), ball.chamber(s[1]));
                    lift.extend_from_slice(step.word());
                }
                ensure!(
                    parkour_unchecked(&lift, &cp.partition) == *v,
                    "lifted gallery has the wrong parkour image",
                    {"c": c, "d": d, "v": v, "lift": lift}
                );
                ensure!(
                    wordcalc::is_reduced(&lift, nd)?,
                    "lifted gallery is not minimal",
                    {"c": c, "d": d, "v": v, "lift": lift}
                );
                ensure!(
                    NormalForm::of(&lift, nd)? == cp.product.weyl_distance(c, d),
                    "lifted gallery type differs from the Weyl distance",
                    {"c": c, "d": d, "v": v, "lift": lift}
                );
                checked += 1;
            }
            if let Some(targets) = by_element.get(&ev) {
                for &k in targets {
                    if ball.dist(a) + cp.product.distance(c, ball.chamber(k)) > r {
                        continue;
                    }
                    ensure!(
                        ends.contains_key(&k),
                        "no skeletal gallery of type v realizes the skeletal distance",
                        {"c": c, "d": ball.chamber(k), "v": v}
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(Ok(Stats::with_note(checked, format!("radius {r}, maxlen {maxlen}"))))
}

/// When every `Δ_ℓ` is finite, the skeletal window is isomorphic to the
/// ball of the same radius in the building of type `M` with parameters
/// `|Δ_ℓ|`: builds the color-matching map by BFS and checks it is a
/// bijection carrying `δ_Φ` to the Weyl distance of the model.
pub fn check_skeletal_model_isomorphism(cp: &CityProduct, sv: &SkeletalView) -> Result<Check> {
    let mut enumerations = Vec::new();
    for f in &cp.factors {
        let all = f.all_chambers()?;
        let idx: HashMap<Chamber, u32> = all.iter().cloned().zip(0u32..).collect();
        enumerations.push(idx);
    }
    let q: Vec<u32> = enumerations.iter().map(|e| e.len() as u32).collect();
    let model = BuildingModel::new(cp.m.clone(), q)?;
    let ball = &sv.ball;
    let mut img: Vec<Option<Chamber>> = vec![None; ball.len()];
    img[0] = Some(Chamber::base());
    let mut order: Vec<usize> = (0..ball.len()).collect();
    order.sort_by_key(|&k| ball.dist(k));
    for &k in &order {
        let Some(gc) = img[k].clone() else { continue };
        for (l, m) in sv.neighbors(k).collect::<Vec<_>>() {
            let color = enumerations[l][&cp.phi(ball.chamber(m), l)];
            let anchor = model.panel_ref(&gc, l).anchor;
            let ql = model.q(l);
            let want = model.step(&anchor, l, (color + ql - model.coloring(&anchor, l)) % ql);
            match &img[m] {
                None => img[m] = Some(want),
                Some(prev) => ensure!(
                    *prev == want,
                    "color-matching map is inconsistent",
                    {"chamber": ball.chamber(m), "first": prev, "second": want}
                ),
            }
        }
    }
    let img: Vec<Chamber> = match img.into_iter().collect::<Option<Vec<_>>>() {
        Some(v) => v,
        None => return Ok(Err(crate::report::Failure::new("skeletal window is not connected", json!(null)))),
    };
    let distinct: HashSet<&Chamber> = img.iter().collect();
    ensure!(distinct.len() == img.len(), "color-matching map is not injective", {"size": img.len()});
    let mball = model.ball(&Chamber::base(), ball.radius)?;
    let in_window = img.iter().filter(|c| mball.contains(c)).count();
    let mut checked = 0;
    for a in 0..ball.len() {
        for b in a + 1..ball.len() {
            let phi = cp.skeletal_weyl(ball.chamber(a), ball.chamber(b))?;
            let mw = model.weyl_distance(&img[a], &img[b]);
            ensure!(
                phi == mw,
                "skeletal Weyl distance differs from the model",
                {"c": ball.chamber(a), "d": ball.chamber(b), "skeletal": phi.word(), "model": mw.word()}
            );
            checked += 1;
        }
    }
    Ok(Ok(Stats::with_note(
        checked,
        format!("{} of {} model chambers of the radius-{} ball are hit", in_window, mball.len(), ball.radius),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `M` = rank-2 `∞`; `Δ_1` the thin rank-2 commuting building (a square),
    /// `Δ_2` thin of rank 1.
    pub(crate) fn thin_square_edge() -> CityProduct {
        let m = Diagram::free(2).unwrap();
        let f1 = BuildingModel::thin(Diagram::right_angled(2, &[]).unwrap().with_names(["a", "b"]).unwrap()).unwrap();
        let f2 = BuildingModel::thin(Diagram::right_angled(1, &[]).unwrap()).unwrap();
        CityProduct::new(m, vec![f1, f2]).unwrap()
    }

    #[test]
    fn thin_square_edge_product_is_thin_rank_three() {
        let cp = thin_square_edge();
        let d = cp.product.diagram();
        assert_eq!(d.names(), ["1a", "1b", "2"]);
        assert!(d.commutes(0, 1));
        assert!(!d.commutes(0, 2) && !d.commutes(1, 2));
        assert!(cp.product.params().iter().all(|&q| q == 2));
    }

    #[test]
    fn phi_and_colorings() {
        let cp = thin_square_edge();
        let ball = cp.product.ball(&Chamber::base(), 3).unwrap();
        assert!(cp.phi(&Chamber::base(), 0).is_base());
        assert!(check_phi_residues(&cp, &ball).is_ok());
        assert!(check_lifted_coloring(&cp, &ball).is_ok());
    }

    #[test]
    fn thin_square_edge_skeletal_panels() {
        let cp = thin_square_edge();
        let sv = cp.skeletal(4).unwrap();
        assert!(check_panels_are_residues(&cp, &sv).is_ok());
        let (_, sizes) = check_panel_sizes(&cp, &sv).unwrap();
        assert_eq!(sizes, vec![vec![4], vec![2]]);
        assert!(check_skeletal_coloring(&cp, &sv).is_ok());
    }

    #[test]
    fn skeletal_distances() {
        let cp = thin_square_edge();
        let b = &cp.product;
        let c = b.chamber(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(cp.skeletal_weyl(&Chamber::base(), &c).unwrap().word(), &[0]);
        assert!(cp.skeletal_weyl(&c, &c).unwrap().is_empty());
        // 1a 2 1b: through two different squares
        let d = b.chamber(&[(0, 1), (2, 1), (1, 1)]).unwrap();
        assert_eq!(cp.skeletal_weyl(&Chamber::base(), &d).unwrap().word(), &[0, 1, 0]);
        let e = b.chamber(&[(1, 1), (2, 1)]).unwrap();
        assert_eq!(cp.skeletal_weyl(&Chamber::base(), &e).unwrap().word(), &[0, 1]);
        assert_eq!(cp.skeletal_adjacent(&Chamber::base(), &c), Some(0));
        assert_eq!(cp.skeletal_adjacent(&Chamber::base(), &e), None);
    }

    #[test]
    fn thin_square_edge_is_a_building() {
        let cp = thin_square_edge();
        let sv = cp.skeletal(5).unwrap();
        assert!(verify_skeletal_building(&cp, &sv, 3, 2).unwrap().is_ok());
        assert!(check_skeletal_model_isomorphism(&cp, &sv).unwrap().is_ok());
    }
}
