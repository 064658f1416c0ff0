//! The building model: the building axiom on balls, semiregularity,
//! coloring legality, the thin case against the Coxeter group, color
//! translations, retractions and implosions.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{all_of, check_coloring_legal, describe, parameter_choices, right_angled_diagrams};
use crate::building::{
    color_translation, implode, implosion_by_bfs, BallView, BuildingModel, BuildingSpec, Chamber, Implosion, MergeRule,
    Relation,
};
use crate::diagram::{bits, Diagram};
use crate::ensure;
use crate::error::Result;
use crate::report::{Check, Failure, Stats, VerifyReport};
use crate::universal::{check_membership, LocalData};
use crate::wordcalc::{nf, reduced_words, Word};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildingConfig {
    /// Every right-angled diagram up to this rank, with every parameter
    /// vector drawn from `params`.
    pub max_rank: usize,
    pub params: Vec<u32>,
    pub radius: usize,
    pub maxlen: usize,
    /// Buildings for translations, retractions and implosions.
    pub instances: Vec<BuildingSpec>,
    pub implosion_families: usize,
    pub implosion_radius: usize,
    /// How colors merge in the model. Anything but the default is a
    /// mutation control and must make the batteries fail.
    pub merge_rule: MergeRule,
}

fn instance(n: usize, edges: &[(usize, usize)], q: &[u32]) -> BuildingSpec {
    let d = Diagram::right_angled(n, edges).expect("valid diagram");
    BuildingSpec::from_model(&BuildingModel::new(d, q.to_vec()).expect("valid parameters"))
}

impl Default for BuildingConfig {
    fn default() -> Self {
        BuildingConfig {
            max_rank: 4,
            params: vec![2, 3],
            radius: 3,
            maxlen: 3,
            instances: vec![
                instance(2, &[(0, 1)], &[3, 3]),
                instance(2, &[], &[3, 3]),
                instance(3, &[(0, 1), (1, 2)], &[3, 2, 3]),
                instance(3, &[(0, 1), (0, 2), (1, 2)], &[2, 3, 3]),
                instance(4, &[(0, 1), (1, 2), (2, 3)], &[3, 3, 2, 3]),
            ],
            implosion_families: 50,
            implosion_radius: 3,
            merge_rule: MergeRule::Cyclic,
        }
    }
}

/// Ball indices within gallery distance `depth` of `a`, with distances.
fn local_distances(ball: &BallView, a: usize, depth: usize) -> HashMap<usize, usize> {
    let mut dist = HashMap::from([(a, 0)]);
    let mut layer = vec![a];
    for t in 1..=depth {
        let mut next = Vec::new();
        for &x in &layer {
            for (_, y) in ball.neighbors(x) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(t);
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    dist
}

/// Ends of the galleries of type `w` from `a` inside the ball.
fn gallery_ends(ball: &BallView, a: usize, w: &[usize]) -> HashSet<usize> {
    let mut cur = HashSet::from([a]);
    for &i in w {
        cur = cur
            .iter()
            .flat_map(|&x| ball.neighbors(x).filter(move |&(t, _)| t == i).map(|(_, y)| y))
            .collect();
    }
    cur
}

/// The building axiom on a ball of radius `R` around the base: for every
/// chamber `c` and reduced `w` with `dist(o, c) + |w| ≤ R` (so that all
/// galleries of length `|w|` from `c` stay inside), `δ(c, d) = ε(w)` iff a
/// gallery of type `w` joins `c` to `d`. Also checks that the gallery
/// distance equals the length of the Weyl distance.
pub fn check_building_axiom(model: &BuildingModel, ball: &BallView, maxlen: usize) -> Check {
    let d = model.diagram();
    let words = reduced_words(d, maxlen);
    let r = ball.radius;
    let mut checked = 0;
    for a in 0..ball.len() {
        let budget = (r - ball.dist(a)).min(maxlen);
        if budget == 0 {
            continue;
        }
        let c = ball.chamber(a);
        let near = local_distances(ball, a, budget);
        let mut delta: HashMap<usize, Word> = HashMap::with_capacity(near.len());
        let mut by_element: HashMap<Word, Vec<usize>> = HashMap::new();
        for (&k, &gd) in &near {
            let w = model.weyl_distance(c, ball.chamber(k)).into_word();
            ensure!(
                w.len() == gd,
                "gallery distance differs from the length of the Weyl distance",
                {"model": describe(model), "c": c, "d": ball.chamber(k), "gallery": gd, "weyl": w}
            );
            by_element.entry(w.clone()).or_default().push(k);
            delta.insert(k, w);
        }
        for w in words.iter().filter(|w| w.len() <= budget) {
            let ends = gallery_ends(ball, a, w);
            let ew = nf(w, d);
            for &k in &ends {
                ensure!(
                    delta[&k] == ew,
                    "a gallery of reduced type w ends at the wrong Weyl distance",
                    {"model": describe(model), "c": c, "d": ball.chamber(k), "w": w, "delta": delta[&k]}
                );
            }
            for &k in by_element.get(&ew).map(Vec::as_slice).unwrap_or(&[]) {
                ensure!(
                    ends.contains(&k),
                    "no gallery of type w realizes the Weyl distance",
                    {"model": describe(model), "c": c, "d": ball.chamber(k), "w": w}
                );
            }
            checked += 1;
        }
    }
    Ok(Stats::new(checked))
}

/// Every panel met by the interior of the ball has exactly `q_i` chambers.
pub fn check_semiregular(model: &BuildingModel, ball: &BallView) -> Check {
    let mut checked = 0;
    for p in ball.panels() {
        if p.members.iter().all(|&k| ball.dist(k) >= ball.radius) {
            continue;
        }
        let i = p.panel.ty;
        ensure!(
            p.members.len() == model.q(i) as usize,
            "panel does not have q_i chambers",
            {"model": describe(model), "type": i, "anchor": p.panel.anchor, "size": p.members.len()}
        );
        checked += 1;
    }
    Ok(Stats::new(checked))
}

/// With all parameters 2, `c ↦ δ(o, c)` is an isomorphism from the ball onto
/// the ball of the same radius in the Cayley graph of `(W, S)`.
pub fn check_thin_cayley(model: &BuildingModel, ball: &BallView) -> Check {
    let d = model.diagram();
    let r = ball.radius;
    let elems: Vec<Word> = ball
        .chambers()
        .iter()
        .map(|c| model.weyl_distance(&Chamber::base(), c).into_word())
        .collect();
    let index: HashMap<&Word, usize> = elems.iter().enumerate().map(|(k, w)| (w, k)).collect();
    ensure!(index.len() == elems.len(), "two chambers have the same Weyl distance from the base", {"model": describe(model)});
    let cayley: HashSet<Word> = reduced_words(d, r).into_iter().map(|w| nf(&w, d)).collect();
    ensure!(
        cayley.len() == elems.len() && elems.iter().all(|w| cayley.contains(w)),
        "ball and Cayley ball have different vertex sets",
        {"model": describe(model), "ball": elems.len(), "cayley": cayley.len()}
    );
    let mut checked = 0;
    for (k, w) in elems.iter().enumerate() {
        for i in 0..d.rank() {
            let mut ws = w.clone();
            ws.push(i);
            let target = crate::wordcalc::NormalForm::of(&ws, d).expect("right-angled").into_word();
            let expected = index.get(&target).copied();
            let actual = ball.neighbors(k).find(|&(t, _)| t == i).map(|(_, y)| y);
            ensure!(
                expected == actual,
                "adjacency differs from the Cayley graph",
                {"model": describe(model), "element": w, "generator": i}
            );
            checked += 1;
        }
    }
    Ok(Stats::new(checked))
}

/// Color translations to every colorless chamber of the ball of radius
/// `reach`: distance preserving, identity local actions, and composing as
/// their targets do.
fn check_color_translations(model: &BuildingModel, r: usize, reach: usize) -> Result<Check> {
    let targets: Vec<Chamber> = model
        .ball(&Chamber::base(), reach)?
        .chambers()
        .iter()
        .filter(|c| model.colors(c).iter().all(|&x| x == 0))
        .cloned()
        .collect();
    let trivial = LocalData::trivial(model);
    let mut maps = Vec::new();
    for t in &targets {
        let g = color_translation(model, t, r)?;
        ensure!(g.verify(model).is_ok(), "color translation is not an automorphism", {"model": describe(model), "target": t});
        if let Err(e) = check_membership(model, &g, &trivial)? {
            return Ok(Err(Failure::new(
                "color translation has a non-identity local action",
                json!({"model": describe(model), "target": t, "detail": e.data}),
            )));
        }
        maps.push(g);
    }
    let mut checked = 0;
    for (a, ga) in maps.iter().enumerate() {
        for gb in &maps {
            let comp = ga.compose(gb);
            let Some(target) = comp.apply(&Chamber::base()).cloned() else { continue };
            let direct = color_translation(model, &target, r)?;
            for (c, d) in comp.pairs() {
                if let Some(e) = direct.apply(c) {
                    ensure!(
                        e == d,
                        "composition of translations is not the translation to the composed target",
                        {"model": describe(model), "first": targets[a], "composed": target, "chamber": c}
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(Ok(Stats::with_note(checked, format!("{} targets", targets.len()))))
}

fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1 << n) - 1).map(|m| bits(m).collect()).collect()
}

/// For each nonempty proper `J`: the retraction is constant on `i`-panels
/// with `i ∉ J`, and restricted to the `J`-residue of the base it is a
/// bijection onto the ball of the restricted model preserving typed
/// adjacency.
fn check_retractions(model: &BuildingModel, r: usize) -> Result<Check> {
    let ball = model.ball(&Chamber::base(), r)?;
    let mut checked = 0;
    for j in proper_subsets(model.rank()) {
        let restricted = model.restrict(&j)?;
        let mask = model.index_mask(&j);
        let rho: Vec<Chamber> = ball.chambers().iter().map(|c| model.retraction(c, &j, &restricted)).collect();
        for p in ball.panels() {
            if mask >> p.panel.ty & 1 == 0 {
                let first = &rho[p.members[0]];
                ensure!(
                    p.members.iter().all(|&k| rho[k] == *first),
                    "retraction is not constant on a panel of a type outside J",
                    {"model": describe(model), "J": j, "type": p.panel.ty, "anchor": p.panel.anchor}
                );
            }
        }
        ensure!(rho[0].is_base(), "retraction does not fix the base", {"model": describe(model), "J": j});
        let residue: Vec<usize> = (0..ball.len()).filter(|&k| model.coset_rep(ball.chamber(k), mask).is_base()).collect();
        let image: HashSet<&Chamber> = residue.iter().map(|&k| &rho[k]).collect();
        let rball = restricted.ball(&Chamber::base(), r)?;
        ensure!(
            image.len() == residue.len() && image.len() == rball.len() && rball.chambers().iter().all(|c| image.contains(c)),
            "retraction is not a bijection from the residue onto the restricted ball",
            {"model": describe(model), "J": j, "residue": residue.len(), "image": image.len(), "restricted": rball.len()}
        );
        for &a in &residue {
            for (i, b) in ball.neighbors(a) {
                if mask >> i & 1 == 0 {
                    continue;
                }
                let t = j.iter().position(|&x| x == i).expect("i in J");
                ensure!(
                    restricted.adjacent(&rho[a], &rho[b]) == Some(t),
                    "retraction does not preserve adjacency on the residue",
                    {"model": describe(model), "J": j, "c": ball.chamber(a), "d": ball.chamber(b)}
                );
                checked += 1;
            }
        }
    }
    Ok(Ok(Stats::new(checked)))
}

fn random_relations(model: &BuildingModel, rng: &mut ChaCha8Rng) -> Vec<Relation> {
    (0..model.rank())
        .map(|i| {
            let q = model.q(i);
            let labels: Vec<u32> = (0..q).map(|_| rng.gen_range(0..q)).collect();
            Relation::from_labels(&labels)
        })
        .collect()
}

/// The implosion contract on its ball: `τ(c0)` is the base; adjacent
/// chambers go to equal or adjacent chambers of the right type (so `τ` is
/// nonexpansive), distances shrink on sampled pairs; colors match the
/// classes of the colors relative to `c0`; the image covers the ball of the
/// same radius; and the independent BFS construction gives the same map.
pub fn check_implosion(model: &BuildingModel, imp: &Implosion, rng: &mut ChaCha8Rng, pairs: usize) -> Result<Check> {
    let (target, ball, img) = (&imp.target, &imp.ball, &imp.images);
    let info = || json!({"model": describe(model), "relations": imp.relations.iter().map(|r| (0..r.degree()).map(|a| r.class_of(a)).collect::<Vec<_>>()).collect::<Vec<_>>(), "centre": imp.centre});
    ensure!(img[0].is_base(), "τ(c0) is not the base", {"instance": info()});
    for (a, b, i) in ball.edges() {
        let ok = match imp.position(i) {
            None => img[a] == img[b],
            Some(t) => img[a] == img[b] || target.adjacent(&img[a], &img[b]) == Some(t),
        };
        ensure!(ok, "τ does not map an adjacency to an adjacency of the same type or a point", {"instance": info(), "c": ball.chamber(a), "d": ball.chamber(b), "type": i});
    }
    for k in 0..ball.len() {
        ensure!(
            target.distance(&img[0], &img[k]) <= ball.dist(k),
            "τ expands a distance from the centre",
            {"instance": info(), "d": ball.chamber(k)}
        );
    }
    for _ in 0..pairs {
        let (a, b) = (rng.gen_range(0..ball.len()), rng.gen_range(0..ball.len()));
        ensure!(
            target.distance(&img[a], &img[b]) <= model.distance(ball.chamber(a), ball.chamber(b)),
            "τ expands a distance",
            {"instance": info(), "c": ball.chamber(a), "d": ball.chamber(b)}
        );
    }
    let c0inv = model.inverse(&imp.centre);
    for (k, c) in ball.chambers().iter().enumerate() {
        let rel = model.colors(&model.multiply(&c0inv, c));
        for (t, &i) in imp.types.iter().enumerate() {
            ensure!(
                target.coloring(&img[k], t) == imp.relations[i].class_of(rel[i]),
                "τ is not color-compatible",
                {"instance": info(), "c": c, "type": i}
            );
        }
    }
    let covered: HashSet<&Chamber> = img.iter().collect();
    let tball = target.ball(&Chamber::base(), ball.radius)?;
    if let Some(miss) = tball.chambers().iter().find(|c| !covered.contains(c)) {
        return Ok(Err(Failure::new("τ misses a chamber of the target ball", json!({"instance": info(), "missed": miss}))));
    }
    let (_, bfs) = implosion_by_bfs(model, &imp.relations, &imp.centre, ball.radius)?;
    ensure!(bfs == *img, "the two constructions of τ differ", {"instance": info()});
    Ok(Ok(Stats::new(ball.len())))
}

fn check_implosions(model: &BuildingModel, families: usize, r: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let near = model.ball(&Chamber::base(), 2)?;
    let mut checked = 0;
    for _ in 0..families {
        let rels = random_relations(model, &mut rng);
        let c0 = near.chamber(rng.gen_range(0..near.len())).clone();
        let imp = implode(model, &rels, &c0, r)?;
        match check_implosion(model, &imp, &mut rng, 200)? {
            Ok(s) => checked += s.checked,
            Err(f) => return Ok(Err(f)),
        }
    }
    Ok(Ok(Stats::with_note(checked, format!("{families} relation families"))))
}

/// Equality on `J`, universal elsewhere: `τ(c) = φ_J(c0⁻¹ c)`.
fn check_implosion_is_retraction(model: &BuildingModel, r: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let near = model.ball(&Chamber::base(), 2)?;
    let mut checked = 0;
    let mut subsets = proper_subsets(model.rank());
    subsets.push((0..model.rank()).collect());
    for j in subsets {
        let mask = model.index_mask(&j);
        let rels: Vec<Relation> = (0..model.rank())
            .map(|i| if mask >> i & 1 == 1 { Relation::equality(model.q(i)) } else { Relation::universal(model.q(i)) })
            .collect();
        let c0 = near.chamber(rng.gen_range(0..near.len())).clone();
        let imp = implode(model, &rels, &c0, r)?;
        let restricted = model.restrict(&j)?;
        ensure!(
            imp.target.diagram().same_matrix(restricted.diagram()) && imp.target.params() == restricted.params(),
            "imploded building is not the restricted building",
            {"model": describe(model), "J": j}
        );
        let c0inv = model.inverse(&c0);
        for (k, c) in imp.ball.chambers().iter().enumerate() {
            let want = model.retraction(&model.multiply(&c0inv, c), &j, &restricted);
            ensure!(
                imp.images[k] == want,
                "implosion differs from the retraction",
                {"model": describe(model), "J": j, "centre": c0, "c": c, "implosion": imp.images[k], "retraction": want}
            );
            checked += 1;
        }
    }
    Ok(Ok(Stats::new(checked)))
}

/// The models of one rank: every diagram, every parameter vector.
fn models_of_rank(bc: &BuildingConfig, n: usize) -> Vec<BuildingModel> {
    let mut out = Vec::new();
    for (_, d) in right_angled_diagrams(n) {
        for q in parameter_choices(n, &bc.params) {
            out.push(
                BuildingModel::new(d.clone(), q)
                    .expect("parameters ≥ 2")
                    .with_merge_rule(bc.merge_rule),
            );
        }
    }
    out
}

pub(super) fn run(cfg: &super::Config) -> Vec<VerifyReport> {
    let bc = &cfg.building;
    let mut out = Vec::new();
    for n in 1..=bc.max_rank {
        let models = models_of_rank(bc, n);
        let balls = || -> Result<Vec<(BuildingModel, BallView)>> {
            models
                .iter()
                .map(|m| Ok((m.clone(), m.ball(&Chamber::base(), bc.radius)?)))
                .collect()
        };
        let instance = format!(
            "rank {n}, {} buildings, q in {:?}, radius {}",
            models.len(),
            bc.params,
            bc.radius
        );
        out.push(VerifyReport::run("building/axiom", format!("{instance}, |w| ≤ {}", bc.maxlen), || {
            Ok(all_of(balls()?.iter().map(|(m, b)| check_building_axiom(m, b, bc.maxlen))))
        }));
        out.push(VerifyReport::run("building/semiregular", instance.clone(), || {
            Ok(all_of(balls()?.iter().map(|(m, b)| check_semiregular(m, b))))
        }));
        out.push(VerifyReport::run("building/coloring-legal", instance.clone(), || {
            Ok(all_of(balls()?.iter().map(|(m, b)| check_coloring_legal(m, b, |c, i| m.coloring(c, i)))))
        }));
        out.push(VerifyReport::run(
            "building/thin-cayley",
            format!("rank {n}, {} thin buildings, radius {}", 1u64 << (n * (n - 1) / 2), bc.radius),
            || {
                let mut checks = Vec::new();
                for (_, d) in right_angled_diagrams(n) {
                    let m = BuildingModel::thin(d)?.with_merge_rule(bc.merge_rule);
                    let b = m.ball(&Chamber::base(), bc.radius)?;
                    checks.push(check_thin_cayley(&m, &b));
                }
                Ok(all_of(checks))
            },
        ));
    }
    for (k, spec) in bc.instances.iter().enumerate() {
        let model = match spec.model() {
            Ok(m) => m.with_merge_rule(bc.merge_rule),
            Err(e) => {
                out.push(VerifyReport::from_result("building/instance", format!("instance {k}"), Err(e), 0));
                continue;
            }
        };
        let name = describe(&model);
        let seed = cfg.seed.wrapping_add(k as u64);
        out.push(VerifyReport::run("building/color-translation", format!("{name}, radius {}", bc.radius), || {
            check_color_translations(&model, bc.radius, bc.radius)
        }));
        out.push(VerifyReport::run("building/retraction", format!("{name}, radius {}", bc.radius), || {
            check_retractions(&model, bc.radius)
        }));
        out.push(VerifyReport::run(
            "building/implosion-contract",
            format!("{name}, {} families, radius {}", bc.implosion_families, bc.implosion_radius),
            || check_implosions(&model, bc.implosion_families, bc.implosion_radius, seed),
        ));
        out.push(VerifyReport::run(
            "building/implosion-retraction",
            format!("{name}, radius {}", bc.implosion_radius),
            || check_implosion_is_retraction(&model, bc.implosion_radius, seed),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, edges: &[(usize, usize)], q: &[u32]) -> BuildingModel {
        BuildingModel::new(Diagram::right_angled(n, edges).unwrap(), q.to_vec()).unwrap()
    }

    #[test]
    fn axiom_and_semiregularity() {
        for b in [model(2, &[(0, 1)], &[3, 2]), model(3, &[(0, 1)], &[2, 3, 2])] {
            let ball = b.ball(&Chamber::base(), 3).unwrap();
            assert!(check_building_axiom(&b, &ball, 3).is_ok());
            assert!(check_semiregular(&b, &ball).is_ok());
        }
    }

    #[test]
    fn overwrite_merge_breaks_the_model() {
        let b = model(2, &[(0, 1)], &[3, 3]).with_merge_rule(MergeRule::Overwrite);
        let ball = b.ball(&Chamber::base(), 3).unwrap();
        let axiom = check_building_axiom(&b, &ball, 3);
        let colors = check_coloring_legal(&b, &ball, |c, i| b.coloring(c, i));
        let semi = check_semiregular(&b, &ball);
        assert!(axiom.is_err() || colors.is_err() || semi.is_err());
    }

    #[test]
    fn thin_cayley() {
        let b = BuildingModel::thin(Diagram::right_angled(3, &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let ball = b.ball(&Chamber::base(), 3).unwrap();
        assert!(check_thin_cayley(&b, &ball).is_ok());
    }

    #[test]
    fn translations_retractions_implosions() {
        let b = model(3, &[(0, 1), (1, 2)], &[3, 2, 3]);
        assert!(check_color_translations(&b, 2, 2).unwrap().is_ok());
        assert!(check_retractions(&b, 2).unwrap().is_ok());
        assert!(check_implosions(&b, 5, 2, 3).unwrap().is_ok());
        assert!(check_implosion_is_retraction(&b, 2, 3).unwrap().is_ok());
    }
}
