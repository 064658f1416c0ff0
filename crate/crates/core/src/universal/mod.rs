//! Local actions, universal groups checked on balls, portrait-built
//! automorphisms and the correspondence between universal groups of a city
//! product and of its skeletal building.

mod application;

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::building::{BuildingModel, BuildingSpec, Chamber, PanelRef, PartialAut};
use crate::cityproduct::{CityProduct, SkeletalView};
use crate::diagram::bits;
use crate::ensure;
use crate::error::{Error, Result};
use crate::perm::{Membership, Perm, PermGroup, PermGroupJson};
use crate::report::{Check, Failure, Stats};

pub use application::{
    application_iso_check, application_local_data, example_one, example_two, product_on_chambers, ApplicationData,
    ApplicationInput,
};

/// One permutation group `F_i ≤ Sym(0..q_i)` per type.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalData {
    groups: Vec<PermGroup>,
}

/// `{"name": {"degree": q, "generators": [...]}, ...}`.
pub type LocalDataJson = BTreeMap<String, PermGroupJson>;

impl LocalData {
    pub fn new(model: &BuildingModel, groups: Vec<PermGroup>) -> Result<Self> {
        if groups.len() != model.rank() {
            return Err(Error::InvalidParameters(format!(
                "{} local groups for rank {}",
                groups.len(),
                model.rank()
            )));
        }
        for (i, g) in groups.iter().enumerate() {
            if g.degree() != model.q(i) {
                return Err(Error::InvalidParameters(format!(
                    "local group of {} has degree {} but q = {}",
                    model.diagram().name(i),
                    g.degree(),
                    model.q(i)
                )));
            }
        }
        Ok(LocalData { groups })
    }

    pub fn full(model: &BuildingModel) -> Self {
        LocalData {
            groups: model.params().iter().map(|&q| PermGroup::symmetric(q)).collect(),
        }
    }

    pub fn trivial(model: &BuildingModel) -> Self {
        LocalData {
            groups: model.params().iter().map(|&q| PermGroup::trivial(q)).collect(),
        }
    }

    pub fn group(&self, i: usize) -> &PermGroup {
        &self.groups[i]
    }

    pub fn groups(&self) -> &[PermGroup] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// `F_J`, in the order of `part`.
    pub fn restricted(&self, part: &[usize]) -> LocalData {
        LocalData {
            groups: part.iter().map(|&i| self.groups[i].clone()).collect(),
        }
    }

    pub fn from_json(model: &BuildingModel, json: &LocalDataJson) -> Result<Self> {
        let d = model.diagram();
        let mut groups = Vec::with_capacity(d.rank());
        for i in 0..d.rank() {
            let g = json
                .get(d.name(i))
                .ok_or_else(|| Error::Malformed(format!("no local group for {}", d.name(i))))?;
            groups.push(PermGroup::try_from(g.clone())?);
        }
        if let Some(k) = json.keys().find(|k| d.index_of(k).is_err()) {
            return Err(Error::UnknownLabel(k.clone()));
        }
        Self::new(model, groups)
    }

    pub fn to_json(&self, model: &BuildingModel) -> LocalDataJson {
        self.groups
            .iter()
            .enumerate()
            .map(|(i, g)| (model.diagram().name(i).to_string(), PermGroupJson::from(g)))
            .collect()
    }
}

/// The local action of `g` at the `i`-panel of `c`, read through `color`.
pub fn local_action_with(
    g: &PartialAut,
    model: &BuildingModel,
    c: &Chamber,
    i: usize,
    color: impl Fn(&Chamber, usize) -> u32,
) -> Result<Perm> {
    let (_, members) = model.panel(c, i);
    let mut images = vec![u32::MAX; model.q(i) as usize];
    for m in &members {
        let gm = g.apply(m).ok_or(Error::PanelNotCovered)?;
        images[color(m, i) as usize] = color(gm, i);
    }
    Perm::new(images)
}

/// The panels of `model` all of whose chambers lie in `set`, each given by
/// its first chamber met in `set` order.
pub fn covered_panels<'a>(model: &BuildingModel, set: &'a [Chamber]) -> Vec<(PanelRef, &'a Chamber)> {
    let inside: HashSet<&Chamber> = set.iter().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in set {
        for i in 0..model.rank() {
            let (p, members) = model.panel(c, i);
            if seen.insert(p.clone()) && members.iter().all(|m| inside.contains(m)) {
                out.push((p, c));
            }
        }
    }
    out
}

/// `g` is a partial automorphism (injective, Weyl-distance preserving) with
/// `σ(g, P) ∈ F_i` at every panel `P` it covers.
pub fn check_membership(model: &BuildingModel, g: &PartialAut, f: &LocalData) -> Result<Check> {
    if let Err(v) = g.verify(model) {
        return Ok(Err(Failure::new("not a partial automorphism", json!(v))));
    }
    let panels = covered_panels(model, g.domain());
    for (p, c) in &panels {
        let sigma = g.local_action(model, c, p.ty)?;
        match f.group(p.ty).contains(&sigma) {
            Membership::Member => {}
            Membership::NonMember => {
                return Ok(Err(Failure::new(
                    "local action outside the local group",
                    json!({"type": model.diagram().name(p.ty), "panel": p.anchor, "local_action": sigma.images()}),
                )))
            }
            Membership::Unknown => return Err(Error::GroupTooLarge(crate::perm::ENUMERATION_LIMIT)),
        }
    }
    Ok(Ok(Stats::with_note(panels.len(), format!("{} chambers", g.len()))))
}

// Portraits ------------------------------------------------------------------

/// A recipe for an element of a universal group: the image of a centre
/// chamber plus seeded draws of local permutations, with optional fixed
/// permutations at given panels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PortraitSpec {
    pub center: Chamber,
    pub center_image: Chamber,
    pub seed: u64,
    #[serde(default)]
    pub overrides: Vec<(PanelRef, Vec<u32>)>,
}

impl PortraitSpec {
    pub fn new(center: Chamber, center_image: Chamber, seed: u64) -> Self {
        PortraitSpec {
            center,
            center_image,
            seed,
            overrides: Vec::new(),
        }
    }
}

/// `i`-panels with equal keys lie in one `{i} ∪ i⊥`-residue, where they are
/// parallel.
fn wing_key(model: &BuildingModel, c: &Chamber, i: usize) -> (usize, Chamber) {
    let d = model.diagram();
    (i, model.coset_rep(c, 1 << i | d.commute_mask(i)))
}

/// Builds the element on the ball of radius `r` around `spec.center`.
///
/// Panels are visited in ball order. A panel gets the permutation of an
/// earlier parallel panel in the same `{i} ∪ i⊥`-residue if there is one, an
/// override if one is given, and otherwise a seeded draw among the members
/// of `F_i` sending the color of the visiting chamber to the color of its
/// image. The result is verified to be a partial automorphism.
pub fn portrait_automorphism(model: &BuildingModel, f: &LocalData, spec: &PortraitSpec, r: usize) -> Result<PartialAut> {
    let ball = model.ball(&spec.center, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let overrides: HashMap<&PanelRef, &Vec<u32>> = spec.overrides.iter().map(|(p, s)| (p, s)).collect();
    let mut wings: HashMap<(usize, Chamber), Perm> = HashMap::new();
    let g = crate::building::extend_by_local_actions(model, &ball, &spec.center_image, |p, c, x, y| {
        let key = wing_key(model, c, p.ty);
        if let Some(s) = overrides.get(p) {
            let s = Perm::new((*s).clone())?;
            wings.insert(key, s.clone());
            return Ok(s);
        }
        if let Some(s) = wings.get(&key) {
            return Ok(s.clone());
        }
        let cands = f.group(p.ty).transporters(x, y)?;
        if cands.is_empty() {
            return Err(Error::ExtensionConflict(format!(
                "no element of the local group of {} sends {x} to {y}",
                model.diagram().name(p.ty)
            )));
        }
        let s = cands[rng.gen_range(0..cands.len())].clone();
        wings.insert(key, s.clone());
        Ok(s)
    })?;
    g.verify(model)
        .map_err(|v| Error::ExtensionConflict(format!("{v:?}")))?;
    Ok(g)
}

/// Chambers near `center` that a member of `U(F)` can send `center` to,
/// judged by the local groups alone.
pub fn reachable_images(model: &BuildingModel, f: &LocalData, center: &Chamber, r: usize) -> Result<Vec<Chamber>> {
    let ball = model.ball(center, r)?;
    let c0 = model.colors(center);
    let mut out = Vec::new();
    for c in ball.chambers() {
        let cc = model.colors(c);
        let mut ok = true;
        for i in 0..model.rank() {
            ok &= !f.group(i).transporters(c0[i], cc[i])?.is_empty();
        }
        if ok {
            out.push(c.clone());
        }
    }
    Ok(out)
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `count` seeded portrait elements on the ball of radius `r` around the
/// base, sending the base into the ball of radius `reach`.
pub fn sample_elements(
    model: &BuildingModel,
    f: &LocalData,
    r: usize,
    reach: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<(PortraitSpec, PartialAut)>> {
    let targets = reachable_images(model, f, &Chamber::base(), reach)?;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let s = sub_seed(seed, k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let target = targets[rng.gen_range(0..targets.len())].clone();
        let spec = PortraitSpec::new(Chamber::base(), target, s);
        let g = portrait_automorphism(model, f, &spec, r)?;
        out.push((spec, g));
    }
    Ok(out)
}

/// A portrait element forced outside `U(F)` by one local permutation.
///
/// Panels of the ball of radius `r` are scanned in ball order; the first
/// complete panel whose visiting chamber `c` admits a permutation outside
/// `F_i` sending the color of `c` to the color of `g(c)` gets that
/// permutation as an override, provided the overridden portrait is still a
/// partial automorphism. `None` when no panel allows this.
pub fn mutant_spec(model: &BuildingModel, f: &LocalData, spec: &PortraitSpec, r: usize) -> Result<Option<PortraitSpec>> {
    let g = portrait_automorphism(model, f, spec, r)?;
    let ball = model.ball(&spec.center, r)?;
    let full = LocalData::full(model);
    let mut seen = HashSet::new();
    for (k, c) in ball.chambers().iter().enumerate() {
        let Some(gc) = g.apply(c) else { continue };
        for i in 0..model.rank() {
            let bp = ball.panel_of(k, i);
            if !seen.insert(bp.panel.clone()) || !bp.complete || f.group(i).order() == PermGroup::symmetric(model.q(i)).order() {
                continue;
            }
            let (x, y) = (model.coloring(c, i), model.coloring(gc, i));
            let outside = PermGroup::symmetric(model.q(i))
                .transporters(x, y)?
                .into_iter()
                .find(|s| f.group(i).contains(s) == Membership::NonMember);
            let Some(s) = outside else { continue };
            let mut m = spec.clone();
            m.overrides.push((bp.panel.clone(), s.images().to_vec()));
            if portrait_automorphism(model, &full, &m, r).is_ok() {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

// Elements as files -----------------------------------------------------------

/// `{"building": ..., "local_data": ..., "map": [[c, g(c)], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementFile {
    pub building: BuildingSpec,
    pub local_data: LocalDataJson,
    pub map: Vec<(Chamber, Chamber)>,
}

impl ElementFile {
    pub fn new(model: &BuildingModel, f: &LocalData, g: &PartialAut) -> Self {
        ElementFile {
            building: BuildingSpec::from_model(model),
            local_data: f.to_json(model),
            map: g.pairs().map(|(c, d)| (c.clone(), d.clone())).collect(),
        }
    }

    pub fn load(&self) -> Result<(BuildingModel, LocalData, PartialAut)> {
        let model = self.building.model()?;
        let f = LocalData::from_json(&model, &self.local_data)?;
        let mut pairs = Vec::with_capacity(self.map.len());
        for (c, d) in &self.map {
            pairs.push((model.chamber(c.syllables())?, model.chamber(d.syllables())?));
        }
        Ok((model, f, PartialAut::from_pairs(pairs)))
    }
}

// The skeletal level -----------------------------------------------------------

/// `σ_φ(g, R) = φ_ℓ ∘ g ∘ (φ_ℓ|_R)⁻¹` as a partial automorphism of `Δ_ℓ`,
/// for the `I_ℓ`-residue `R` given by (some of) its chambers.
pub fn skeletal_local_action(cp: &CityProduct, g: &PartialAut, residue: &[Chamber], l: usize) -> Result<PartialAut> {
    let mut pairs = Vec::new();
    let mut target: Option<Chamber> = None;
    for x in residue {
        let Some(gx) = g.apply(x) else { continue };
        let key = cp.skeletal_key(gx, l);
        match &target {
            None => target = Some(key),
            Some(t) if *t != key => {
                return Err(Error::Precondition("the residue is not mapped into one residue".into()));
            }
            _ => {}
        }
        pairs.push((cp.phi(x, l), cp.phi(gx, l)));
    }
    if pairs.is_empty() {
        return Err(Error::PanelNotCovered);
    }
    Ok(PartialAut::from_pairs(pairs))
}

/// Skeletal panels of the window contained in the domain of `g`.
fn covered_skeletal_panels(sv: &SkeletalView, g: &PartialAut) -> Vec<(usize, Vec<Chamber>)> {
    sv.panels
        .iter()
        .filter_map(|p| {
            let members: Vec<Chamber> = p.members.iter().map(|&k| sv.ball.chamber(k).clone()).collect();
            members.iter().all(|c| g.apply(c).is_some()).then_some((p.part, members))
        })
        .collect()
}

/// The local compatibility identity `σ_{λ^ℓ}(σ_φ(g, R), φ_ℓ(P')) = σ_{λ'}(g, P')` for every
/// `i`-panel `P'` inside a skeletal panel `R` covered by `g`.
pub fn check_local_local(cp: &CityProduct, g: &PartialAut, sv: &SkeletalView) -> Result<Check> {
    let b = &cp.product;
    let mut checked = 0;
    for (l, members) in covered_skeletal_panels(sv, g) {
        let h = skeletal_local_action(cp, g, &members, l)?;
        let f = &cp.factors[l];
        let mut seen = HashSet::new();
        for x in &members {
            for &i in cp.partition.part(l) {
                let (p, panel) = b.panel(x, i);
                if !seen.insert(p.clone()) || panel.iter().any(|m| g.apply(m).is_none()) {
                    continue;
                }
                let lhs = h.local_action(f, &cp.phi(x, l), cp.local_index(i))?;
                let rhs = local_action_with(g, b, x, i, |c, t| cp.lifted_coloring(c, t))?;
                ensure!(
                    lhs == rhs,
                    "local action through the skeletal level differs",
                    {"type": b.diagram().name(i), "panel": p.anchor, "skeletal": lhs.images(), "direct": rhs.images()}
                );
                checked += 1;
            }
        }
    }
    Ok(Ok(Stats::new(checked)))
}

/// Forward direction of the correspondence: `g ∈ U_Δ(F)` on the window,
/// `ι(g)` maps skeletal panels to skeletal panels, preserves the skeletal
/// Weyl distance from the centre, and each `σ_φ(g, R)` lies in
/// `U_{Δ_ℓ}(F_ℓ)` (checked as a partial automorphism of `Δ_ℓ`).
pub fn iota_check(cp: &CityProduct, f: &LocalData, g: &PartialAut, sv: &SkeletalView) -> Result<Check> {
    match check_membership(&cp.product, g, f)? {
        Ok(_) => {}
        Err(e) => return Ok(Err(Failure::new(format!("Δ level: {}", e.what), e.data))),
    }
    let skeletal = check_skeletal_membership(cp, f, g, sv)?;
    let Ok(stats) = skeletal else { return Ok(skeletal) };
    let c0 = &sv.ball.center;
    if let Some(gc0) = g.apply(c0) {
        for x in g.domain() {
            let gx = g.apply(x).expect("in the domain");
            let before = cp.skeletal_weyl(c0, x)?;
            let after = cp.skeletal_weyl(gc0, gx)?;
            ensure!(
                before == after,
                "ι(g) does not preserve the skeletal Weyl distance",
                {"c": c0, "d": x, "before": before.word(), "after": after.word()}
            );
        }
    }
    Ok(Ok(stats))
}

/// The skeletal half of [`iota_check`]: every covered skeletal panel is
/// mapped into one skeletal panel, with local action in `U_{Δ_ℓ}(F_ℓ)`.
pub fn check_skeletal_membership(cp: &CityProduct, f: &LocalData, g: &PartialAut, sv: &SkeletalView) -> Result<Check> {
    let mut checked = 0;
    for (l, members) in covered_skeletal_panels(sv, g) {
        let h = match skeletal_local_action(cp, g, &members, l) {
            Ok(h) => h,
            Err(Error::Precondition(m)) => {
                return Ok(Err(Failure::new(
                    "Φ level: skeletal panel not mapped to a skeletal panel",
                    json!({"part": l, "gate": members[0], "detail": m}),
                )))
            }
            Err(e) => return Err(e),
        };
        let fl = f.restricted(cp.partition.part(l));
        if let Err(e) = check_membership(&cp.factors[l], &h, &fl)? {
            return Ok(Err(Failure::new(
                format!("Φ level: {}", e.what),
                json!({"part": l, "gate": members[0], "detail": e.data}),
            )));
        }
        checked += 1;
    }
    Ok(Ok(Stats::with_note(checked, "skeletal panels")))
}

/// Builds a chamber map of `Δ` from Φ-level prescriptions: each skeletal
/// `ℓ`-panel met in ball order gets an automorphism of the finite building
/// `Δ_ℓ` drawn as a portrait over `local[ℓ]` (reused across parallel
/// skeletal panels), and the panel is mapped through it. The result is only
/// checked to be well defined, not to be an automorphism.
#[allow(clippy::needless_range_loop)]
pub fn skeletal_portrait(
    cp: &CityProduct,
    local: &[LocalData],
    center_image: &Chamber,
    seed: u64,
    r: usize,
) -> Result<PartialAut> {
    if let Some(l) = (0..cp.num_parts()).find(|&l| !cp.factors[l].is_finite()) {
        return Err(Error::Precondition(format!("factor {l} is infinite")));
    }
    let sv = cp.skeletal(r)?;
    let ball = &sv.ball;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img: Vec<Option<Chamber>> = vec![None; ball.len()];
    img[0] = Some(center_image.clone());
    let mut done = vec![false; sv.panels.len()];
    let mut wings: HashMap<(usize, Chamber), PartialAut> = HashMap::new();
    let m = &cp.m;
    for k in 0..ball.len() {
        let gc = img[k].clone().ok_or_else(|| Error::ExtensionConflict("unreached chamber".into()))?;
        let c = ball.chamber(k);
        for l in 0..cp.num_parts() {
            let p = sv.panel_of(k, l);
            let pi = sv.panels.iter().position(|q| std::ptr::eq(q, p)).expect("own panel");
            if done[pi] {
                continue;
            }
            done[pi] = true;
            let f = &cp.factors[l];
            let (x, y) = (cp.phi(c, l), cp.phi(&gc, l));
            let mut mask = cp.part_mask(l);
            for l2 in bits(m.commute_mask(l)) {
                mask |= cp.part_mask(l2);
            }
            let key = (l, cp.product.coset_rep(c, mask));
            let h = match wings.get(&key) {
                Some(h) => h.clone(),
                None => {
                    let spec = PortraitSpec::new(x.clone(), y.clone(), rng.gen());
                    let h = portrait_automorphism(f, &local[l], &spec, f.rank())?;
                    wings.insert(key, h.clone());
                    h
                }
            };
            if h.apply(&x) != Some(&y) {
                return Err(Error::ExtensionConflict(format!(
                    "prescription at {} does not send {x} to {y}",
                    c.display(cp.product.diagram())
                )));
            }
            for &mk in &p.members {
                let hx = h.apply(&cp.phi(ball.chamber(mk), l)).expect("total on a finite factor");
                let want = cp.residue_member(&gc, l, hx);
                match &img[mk] {
                    None => img[mk] = Some(want),
                    Some(prev) if *prev != want => {
                        return Err(Error::ExtensionConflict(format!(
                            "{} is sent to both {} and {}",
                            ball.chamber(mk),
                            prev,
                            want
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(PartialAut::from_pairs(
        ball.chambers()
            .iter()
            .cloned()
            .zip(img.into_iter().map(|c| c.expect("all reached"))),
    ))
}

/// Converse direction on one skeletal-portrait element: it is a partial
/// automorphism of `Δ` in `U_Δ(F)` and satisfies the local compatibility identity.
pub fn iota_converse_check(cp: &CityProduct, f: &LocalData, g: &PartialAut, sv: &SkeletalView) -> Result<Check> {
    let direct = check_membership(&cp.product, g, f)?;
    let Ok(stats) = direct else { return Ok(direct) };
    let star = check_local_local(cp, g, sv)?;
    if star.is_err() {
        return Ok(star);
    }
    Ok(Ok(stats))
}

// Reducible diagrams ---------------------------------------------------------

/// Every automorphism of a finite building, by backtracking over chamber
/// images. Limited to `cap` chambers.
pub fn finite_automorphisms(model: &BuildingModel, cap: usize) -> Result<Vec<PartialAut>> {
    let all = model.all_chambers()?;
    if all.len() > cap {
        return Err(Error::CapExceeded {
            cap,
            what: "chambers for automorphism enumeration",
        });
    }
    let n = all.len();
    let dist: Vec<Vec<Vec<usize>>> = all
        .iter()
        .map(|c| all.iter().map(|d| model.weyl_distance(c, d).into_word()).collect())
        .collect();
    let mut out = Vec::new();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        n: usize,
        dist: &[Vec<Vec<usize>>],
        img: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == n {
            out.push(img.clone());
            return;
        }
        for t in 0..n {
            if used[t] || (0..k).any(|j| dist[j][k] != dist[img[j]][t]) {
                continue;
            }
            used[t] = true;
            img[k] = t;
            go(k + 1, n, dist, img, used, out);
            used[t] = false;
        }
        img[k] = usize::MAX;
    }
    let mut raw = Vec::new();
    go(0, n, &dist, &mut img, &mut used, &mut raw);
    for im in raw {
        out.push(PartialAut::from_pairs(
            all.iter().cloned().zip(im.into_iter().map(|t| all[t].clone())),
        ));
    }
    Ok(out)
}

/// Members of `U(F)` among all automorphisms of a finite building.
pub fn finite_universal_elements(model: &BuildingModel, f: &LocalData, cap: usize) -> Result<Vec<PartialAut>> {
    let mut out = Vec::new();
    for g in finite_automorphisms(model, cap)? {
        if check_membership(model, &g, f)?.is_ok() {
            out.push(g);
        }
    }
    Ok(out)
}

/// `U(F)` for a finite building as a permutation group on its chambers
/// listed by [`BuildingModel::all_chambers`]: generated by one generator of
/// one `F_i` acting on the `i`-coordinate, all types commuting.
pub fn finite_universal_group(model: &BuildingModel, f: &LocalData) -> Result<(Vec<Chamber>, PermGroup)> {
    let all = model.all_chambers()?;
    let index: HashMap<&Chamber, u32> = all.iter().zip(0u32..).collect();
    let mut gens = Vec::new();
    for i in 0..model.rank() {
        for s in f.group(i).generators() {
            let images = all
                .iter()
                .map(|c| {
                    let a = model.coloring(c, i);
                    let shifted = model.step(c, i, (s.apply(a) + model.q(i) - a) % model.q(i));
                    index[&shifted]
                })
                .collect();
            gens.push(Perm::new(images)?);
        }
    }
    let g = PermGroup::new(all.len() as u32, gens)?;
    Ok((all, g))
}

/// Direct-product splitting over the components `J_1, ..., J_m` of the
/// diagram of a finite building: every member of `U(F)` acts on the
/// `J`-retractions independently, with each factor in `U(F_J)`, and every
/// tuple of factor members combines to a member. Returns the orders
/// `(|U(F)|, [|U(F_J)|])` in the note.
pub fn split_reducible_check(model: &BuildingModel, f: &LocalData, cap: usize) -> Result<Check> {
    let comps = model.diagram().components();
    let members = finite_universal_elements(model, f, cap)?;
    if comps.len() <= 1 {
        return Ok(Ok(Stats::with_note(members.len(), "irreducible diagram")));
    }
    let restricted: Vec<BuildingModel> = comps.iter().map(|j| model.restrict(j)).collect::<Result<_>>()?;
    let all = model.all_chambers()?;
    for g in &members {
        for (j, rj) in comps.iter().zip(&restricted) {
            let mut map: HashMap<Chamber, Chamber> = HashMap::new();
            for c in &all {
                let x = model.retraction(c, j, rj);
                let y = model.retraction(g.apply(c).expect("total"), j, rj);
                if let Some(prev) = map.insert(x.clone(), y.clone()) {
                    ensure!(
                        prev == y,
                        "element does not act on a component independently",
                        {"component": j, "chamber": c}
                    );
                }
            }
            let gj = PartialAut::from_pairs(map);
            ensure!(
                check_membership(rj, &gj, &f.restricted(j))?.is_ok(),
                "component of a member is not in the component universal group",
                {"component": j}
            );
        }
    }
    let factor_members: Vec<Vec<PartialAut>> = comps
        .iter()
        .zip(&restricted)
        .map(|(j, rj)| finite_universal_elements(rj, &f.restricted(j), cap))
        .collect::<Result<_>>()?;
    let member_maps: HashSet<Vec<Chamber>> = members
        .iter()
        .map(|g| all.iter().map(|c| g.apply(c).expect("total").clone()).collect())
        .collect();
    let mut combined = 0usize;
    let mut choice = vec![0usize; comps.len()];
    loop {
        let image: Vec<Chamber> = all
            .iter()
            .map(|c| {
                let mut raw = Vec::new();
                for (t, (j, rj)) in comps.iter().zip(&restricted).enumerate() {
                    let x = model.retraction(c, j, rj);
                    let y = factor_members[t][choice[t]].apply(&x).expect("total");
                    raw.extend(y.syllables().iter().map(|&(s, a)| (j[s], a)));
                }
                model.chamber(&raw).expect("valid syllables")
            })
            .collect();
        ensure!(
            member_maps.contains(&image),
            "a combination of component members is not a member",
            {"choice": choice}
        );
        combined += 1;
        let mut t = 0;
        while t < choice.len() {
            choice[t] += 1;
            if choice[t] < factor_members[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
        if t == choice.len() {
            break;
        }
    }
    let orders: Vec<usize> = factor_members.iter().map(Vec::len).collect();
    ensure!(
        combined == members.len(),
        "order of U(F) differs from the product of the component orders",
        {"order": members.len(), "components": orders}
    );
    Ok(Ok(Stats::with_note(
        members.len(),
        format!("|U| = {} = product of {:?}", members.len(), orders),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::{color_translation, left_translation};
    use crate::diagram::Diagram;

    fn model(n: usize, edges: &[(usize, usize)], q: &[u32]) -> BuildingModel {
        BuildingModel::new(Diagram::right_angled(n, edges).unwrap(), q.to_vec()).unwrap()
    }

    fn thin_square_edge() -> CityProduct {
        let m = Diagram::free(2).unwrap();
        let f1 = BuildingModel::thin(Diagram::right_angled(2, &[]).unwrap().with_names(["a", "b"]).unwrap()).unwrap();
        let f2 = BuildingModel::thin(Diagram::right_angled(1, &[]).unwrap()).unwrap();
        CityProduct::new(m, vec![f1, f2]).unwrap()
    }

    #[test]
    fn identity_and_translations_are_members() {
        let b = model(3, &[(0, 1)], &[2, 3, 3]);
        let ball = b.ball(&Chamber::base(), 3).unwrap();
        let id = PartialAut::identity(&ball);
        assert!(check_membership(&b, &id, &LocalData::trivial(&b)).unwrap().is_ok());
        let target = b.chamber(&[(2, 1), (1, 1), (2, 2), (1, 2)]).unwrap();
        let ct = color_translation(&b, &target, 3).unwrap();
        assert!(check_membership(&b, &ct, &LocalData::trivial(&b)).unwrap().is_ok());
        let lt = left_translation(&b, &b.chamber(&[(1, 1)]).unwrap(), 2).unwrap();
        let cyclic = LocalData::new(&b, vec![PermGroup::cyclic(2), PermGroup::cyclic(3), PermGroup::cyclic(3)]).unwrap();
        assert!(check_membership(&b, &lt, &cyclic).unwrap().is_ok());
        assert!(check_membership(&b, &lt, &LocalData::trivial(&b)).unwrap().is_err());
    }

    #[test]
    fn portraits_on_trees_extend() {
        let tree = model(2, &[], &[3, 4]);
        let f = LocalData::full(&tree);
        for seed in 0..20 {
            let spec = PortraitSpec::new(Chamber::base(), tree.chamber(&[(0, 1)]).unwrap(), seed);
            let g = portrait_automorphism(&tree, &f, &spec, 4).unwrap();
            assert!(check_membership(&tree, &g, &f).unwrap().is_ok());
        }
    }

    #[test]
    fn portrait_echoes_override() {
        let b = model(3, &[(0, 1)], &[3, 3, 2]);
        let f = LocalData::full(&b);
        let mut spec = PortraitSpec::new(Chamber::base(), Chamber::base(), 7);
        let p = b.panel_ref(&Chamber::base(), 1);
        spec.overrides.push((p, vec![0, 2, 1]));
        let g = portrait_automorphism(&b, &f, &spec, 3).unwrap();
        assert_eq!(g.local_action(&b, &Chamber::base(), 1).unwrap().images(), &[0, 2, 1]);
        let c3 = LocalData::new(&b, vec![PermGroup::cyclic(3), PermGroup::cyclic(3), PermGroup::cyclic(2)]).unwrap();
        let m = mutant_spec(&b, &c3, &PortraitSpec::new(Chamber::base(), Chamber::base(), 7), 3).unwrap().unwrap();
        let g = portrait_automorphism(&b, &f, &m, 3).unwrap();
        assert!(check_membership(&b, &g, &c3).unwrap().is_err());
    }

    #[test]
    fn sampled_elements_close_under_products() {
        let b = model(3, &[(0, 1)], &[2, 3, 2]);
        let f = LocalData::new(&b, vec![PermGroup::symmetric(2), PermGroup::cyclic(3), PermGroup::symmetric(2)]).unwrap();
        let els = sample_elements(&b, &f, 3, 1, 11, 6).unwrap();
        for (_, g) in &els {
            assert!(check_membership(&b, g, &f).unwrap().is_ok());
            assert!(check_membership(&b, &g.inverse(), &f).unwrap().is_ok());
        }
        let prod = els[0].1.compose(&els[1].1);
        assert!(check_membership(&b, &prod, &f).unwrap().is_ok());
    }

    #[test]
    fn thin_square_edge_correspondence() {
        let cp = thin_square_edge();
        let b = &cp.product;
        let f = LocalData::new(b, vec![PermGroup::symmetric(2), PermGroup::trivial(2), PermGroup::symmetric(2)]).unwrap();
        let sv = cp.skeletal(3).unwrap();
        for (spec, g) in sample_elements(b, &f, 3, 1, 5, 10).unwrap() {
            assert!(iota_check(&cp, &f, &g, &sv).unwrap().is_ok(), "{spec:?}");
            assert!(check_local_local(&cp, &g, &sv).unwrap().is_ok());
            if let Some(m) = mutant_spec(b, &f, &spec, 3).unwrap() {
                let bad = portrait_automorphism(b, &LocalData::full(b), &m, 3).unwrap();
                assert!(check_membership(b, &bad, &f).unwrap().is_err());
                assert!(check_skeletal_membership(&cp, &f, &bad, &sv).unwrap().is_err());
            }
        }
    }

    #[test]
    fn skeletal_portraits_lift() {
        let cp = thin_square_edge();
        let b = &cp.product;
        let f = LocalData::new(b, vec![PermGroup::symmetric(2), PermGroup::trivial(2), PermGroup::symmetric(2)]).unwrap();
        let local: Vec<LocalData> = (0..2).map(|l| f.restricted(cp.partition.part(l))).collect();
        let sv = cp.skeletal(3).unwrap();
        let targets = reachable_images(b, &f, &Chamber::base(), 1).unwrap();
        for seed in 0..10u64 {
            let t = &targets[seed as usize % targets.len()];
            let g = skeletal_portrait(&cp, &local, t, seed, 3).unwrap();
            assert!(iota_converse_check(&cp, &f, &g, &sv).unwrap().is_ok());
        }
        let full: Vec<LocalData> = cp.factors.iter().map(LocalData::full).collect();
        let mut rejected = 0;
        let near = b.ball(&Chamber::base(), 1).unwrap();
        for seed in 0..10u64 {
            let t = near.chamber(seed as usize % near.len());
            let g = skeletal_portrait(&cp, &full, t, seed, 3).unwrap();
            if check_membership(b, &g, &f).unwrap().is_err() {
                assert!(check_skeletal_membership(&cp, &f, &g, &sv).unwrap().is_err());
                rejected += 1;
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn reducible_split() {
        let sq = model(2, &[], &[2, 2]);
        for (a, b) in [(false, false), (true, false), (false, true), (true, true)] {
            let g = |full: bool| if full { PermGroup::symmetric(2) } else { PermGroup::trivial(2) };
            let f = LocalData::new(&sq, vec![g(a), g(b)]).unwrap();
            assert!(split_reducible_check(&sq, &f, 8).unwrap().is_ok());
            let expected = (1 + a as usize) * (1 + b as usize);
            assert_eq!(finite_universal_elements(&sq, &f, 8).unwrap().len(), expected);
            assert_eq!(finite_universal_group(&sq, &f).unwrap().1.order(), Some(expected));
        }
        assert_eq!(finite_automorphisms(&sq, 8).unwrap().len(), 4);
    }

    #[test]
    fn element_file_round_trip() {
        let b = model(2, &[], &[2, 3]);
        let f = LocalData::full(&b);
        let (_, g) = sample_elements(&b, &f, 2, 1, 3, 1).unwrap().remove(0);
        let file = ElementFile::new(&b, &f, &g);
        let text = serde_json::to_string(&file).unwrap();
        let (b2, f2, g2) = serde_json::from_str::<ElementFile>(&text).unwrap().load().unwrap();
        assert_eq!(b2.params(), b.params());
        assert_eq!(f2, f);
        assert_eq!(g2, g);
    }
}
