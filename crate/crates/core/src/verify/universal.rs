//! Universal groups: portrait elements, the correspondence with the
//! skeletal level in both directions, mutation controls, the reducible
//! split, and the isomorphisms between products with swapped parameters.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::city::NamedProduct;
use crate::building::{BuildingModel, Chamber, PartialAut};
use crate::cityproduct::{CityProduct, SkeletalView};
use crate::diagram::Diagram;
use crate::ensure;
use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};
use crate::report::{Check, Failure, Stats, VerifyReport};
use crate::universal::{
    application_iso_check, application_local_data, check_local_local, check_membership, check_skeletal_membership,
    example_one, example_two, finite_universal_group, iota_check, iota_converse_check, mutant_spec,
    portrait_automorphism, product_on_chambers, reachable_images, sample_elements, skeletal_local_action,
    skeletal_portrait, split_reducible_check, ApplicationData, LocalData, LocalDataJson, PortraitSpec,
};

/// A product with local data `F` over its index set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniversalInstance {
    #[serde(flatten)]
    pub product: NamedProduct,
    pub local: LocalDataJson,
}

impl UniversalInstance {
    fn with_groups(product: NamedProduct, groups: Vec<PermGroup>) -> Self {
        let cp = product.spec.build().expect("valid product");
        let f = LocalData::new(&cp.product, groups).expect("degrees match");
        UniversalInstance {
            local: f.to_json(&cp.product),
            product,
        }
    }

    /// The thin square-and-edge product with `F = (Sym(2), 1, Sym(2))`.
    pub fn thin_square_edge() -> Self {
        Self::with_groups(
            NamedProduct::thin_square_edge(),
            vec![PermGroup::symmetric(2), PermGroup::trivial(2), PermGroup::symmetric(2)],
        )
    }

    /// The thick square-and-edge product with `F = (Sym(2), ⟨(1 2)⟩, 1)`;
    /// the middle group fixes color 0 and is neither regular nor full.
    pub fn thick_square_edge() -> Self {
        let swap = Perm::new(vec![0, 2, 1]).expect("a permutation");
        Self::with_groups(
            NamedProduct::thick_square_edge(),
            vec![
                PermGroup::symmetric(2),
                PermGroup::new(3, vec![swap]).expect("degree 3"),
                PermGroup::trivial(2),
            ],
        )
    }

    pub fn build(&self) -> Result<(CityProduct, LocalData)> {
        let cp = self.product.spec.build()?;
        let f = LocalData::from_json(&cp.product, &self.local)?;
        Ok((cp, f))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UniversalConfig {
    pub radius: usize,
    /// Portrait elements send the base into the ball of this radius.
    pub reach: usize,
    pub samples: usize,
    pub mutants: usize,
    pub converse_samples: usize,
    pub closure_pairs: usize,
    pub instances: Vec<UniversalInstance>,
}

impl Default for UniversalConfig {
    fn default() -> Self {
        UniversalConfig {
            radius: 3,
            reach: 2,
            samples: 200,
            mutants: 20,
            converse_samples: 50,
            closure_pairs: 20,
            instances: vec![UniversalInstance::thin_square_edge(), UniversalInstance::thick_square_edge()],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApplicationConfig {
    pub radius: usize,
    /// Seeded elements conjugated in each direction.
    pub samples: usize,
}

impl Default for ApplicationConfig {
    fn default() -> Self {
        ApplicationConfig { radius: 2, samples: 10 }
    }
}

fn each<T>(items: &[T], mut f: impl FnMut(&T) -> Result<Check>) -> Result<Check> {
    let mut n = 0;
    for x in items {
        match f(x)? {
            Ok(s) => n += s.checked,
            Err(e) => return Ok(Err(e)),
        }
    }
    Ok(Ok(Stats::new(n)))
}

/// What `ι(g)` records on the window: per covered skeletal panel, the
/// residue it goes to and the local action there.
type Signature = Vec<(usize, Chamber, Chamber, Vec<(Chamber, Chamber)>)>;

fn iota_signature(cp: &CityProduct, g: &PartialAut, sv: &SkeletalView) -> Result<Signature> {
    let mut sig = Vec::new();
    for p in &sv.panels {
        let members: Vec<Chamber> = p.members.iter().map(|&k| sv.ball.chamber(k).clone()).collect();
        if members.iter().any(|c| g.apply(c).is_none()) {
            continue;
        }
        let h = skeletal_local_action(cp, g, &members, p.part)?;
        let target = cp.skeletal_key(g.apply(&members[0]).expect("covered"), p.part);
        let mut pairs: Vec<(Chamber, Chamber)> = h.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
        pairs.sort();
        sig.push((p.part, p.key.clone(), target, pairs));
    }
    Ok(sig)
}

type Pairs = Vec<(Chamber, Chamber)>;

fn sorted_pairs(g: &PartialAut) -> Pairs {
    let mut v: Vec<(Chamber, Chamber)> = g.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
    v.sort();
    v
}

/// Distinct elements have distinct images under `ι` on the window.
fn check_iota_injective(cp: &CityProduct, els: &[(PortraitSpec, PartialAut)], sv: &SkeletalView) -> Result<Check> {
    let mut by_sig: HashMap<Signature, (&PortraitSpec, Pairs)> = HashMap::new();
    let mut distinct = std::collections::HashSet::new();
    for (spec, g) in els {
        let pairs = sorted_pairs(g);
        distinct.insert(pairs.clone());
        let sig = iota_signature(cp, g, sv)?;
        match by_sig.get(&sig) {
            Some((other, p)) => ensure!(
                *p == pairs,
                "two different elements have the same skeletal data",
                {"first": other, "second": spec}
            ),
            None => {
                by_sig.insert(sig, (spec, pairs));
            }
        }
    }
    Ok(Ok(Stats::with_note(els.len(), format!("{} distinct elements", distinct.len()))))
}

/// Mutated portraits are rejected at the level of `Δ` and of `Φ`. When a
/// local group leaves no room for a one-panel mutation at the centre (for
/// instance `q = 2` with the trivial group), the remaining mutants are
/// portraits over the full local groups that fall outside `U(F)`.
#[allow(clippy::too_many_arguments)]
fn check_mutants(
    cp: &CityProduct,
    f: &LocalData,
    els: &[(PortraitSpec, PartialAut)],
    sv: &SkeletalView,
    r: usize,
    reach: usize,
    want: usize,
    seed: u64,
) -> Result<Check> {
    let b = &cp.product;
    let full = LocalData::full(b);
    let mut mutants = Vec::new();
    for (spec, _) in els {
        if mutants.len() == want {
            break;
        }
        if let Some(m) = mutant_spec(b, f, spec, r)? {
            let bad = portrait_automorphism(b, &full, &m, r)?;
            mutants.push((m, bad));
        }
    }
    let single_panel = mutants.len();
    if mutants.len() < want {
        for (m, g) in sample_elements(b, &full, r, reach.max(1), seed, 20 * want)? {
            if mutants.len() == want {
                break;
            }
            if check_membership(b, &g, f)?.is_err() {
                mutants.push((m, g));
            }
        }
    }
    if mutants.len() < want {
        return Err(Error::Precondition(format!("only {} of {want} mutants could be built", mutants.len())));
    }
    for (m, bad) in &mutants {
        ensure!(check_membership(b, bad, f)?.is_err(), "mutant accepted at the building level", {"mutant": m});
        ensure!(
            check_skeletal_membership(cp, f, bad, sv)?.is_err(),
            "mutant accepted at the skeletal level",
            {"mutant": m}
        );
    }
    Ok(Ok(Stats::with_note(want, format!("{single_panel} one-panel mutations"))))
}

/// Skeletal portraits over the full local groups of the factors: the two
/// levels agree on every one, and at least `want` are rejected.
fn check_skeletal_mutants(
    cp: &CityProduct,
    f: &LocalData,
    sv: &SkeletalView,
    r: usize,
    want: usize,
    seed: u64,
) -> Result<Check> {
    let b = &cp.product;
    let full: Vec<LocalData> = cp.factors.iter().map(LocalData::full).collect();
    let near = b.ball(&Chamber::base(), 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rejected, mut tried) = (0, 0);
    while rejected < want {
        tried += 1;
        if tried > 20 * want.max(1) {
            return Err(Error::Precondition(format!("only {rejected} of {want} skeletal mutants in {tried} tries")));
        }
        let t = near.chamber(rng.gen_range(0..near.len()));
        let s: u64 = rng.gen();
        let g = skeletal_portrait(cp, &full, t, s, r)?;
        let direct = check_membership(b, &g, f)?.is_ok();
        let skeletal = check_skeletal_membership(cp, f, &g, sv)?.is_ok();
        ensure!(
            direct == skeletal,
            "the two levels disagree on a skeletal portrait",
            {"center_image": t, "seed": s, "building_level": direct, "skeletal_level": skeletal}
        );
        if !direct {
            rejected += 1;
        }
    }
    Ok(Ok(Stats::with_note(tried, format!("{rejected} rejected at both levels"))))
}

fn check_closure(b: &BuildingModel, f: &LocalData, els: &[(PortraitSpec, PartialAut)], pairs: usize) -> Result<Check> {
    let mut checked = 0;
    for k in 0..pairs.min(els.len()) {
        let (sa, ga) = &els[k];
        let (sb, gb) = &els[(k * 7 + 3) % els.len()];
        let prod = ga.compose(gb);
        let inv = ga.inverse();
        ensure!(check_membership(b, &prod, f)?.is_ok(), "product of members is not a member", {"first": sa, "second": sb});
        ensure!(check_membership(b, &inv, f)?.is_ok(), "inverse of a member is not a member", {"element": sa});
        checked += 2;
    }
    Ok(Ok(Stats::new(checked)))
}

/// All statements on one instance.
pub fn run_instance(inst: &UniversalInstance, uc: &UniversalConfig, seed: u64) -> Vec<VerifyReport> {
    let name = &inst.product.name;
    let setup = || -> Result<_> {
        let (cp, f) = inst.build()?;
        let sv = cp.skeletal(uc.radius)?;
        let els = sample_elements(&cp.product, &f, uc.radius, uc.reach, seed, uc.samples)?;
        Ok((cp, f, sv, els))
    };
    let (cp, f, sv, els) = match setup() {
        Ok(x) => x,
        Err(e) => return vec![VerifyReport::from_result("universal/sampling", name.clone(), Err(e), 0)],
    };
    let b = &cp.product;
    let inst_name = format!("{name}, radius {}, {} portraits", uc.radius, uc.samples);
    let mut out = Vec::new();
    out.push(VerifyReport::run("universal/portrait-membership", inst_name.clone(), || {
        each(&els, |(spec, g)| {
            Ok(check_membership(b, g, &f)?.map_err(|e| Failure::new(e.what, json!({"portrait": spec, "detail": e.data}))))
        })
    }));
    out.push(VerifyReport::run("universal/local-action-compatibility", inst_name.clone(), || {
        each(&els, |(_, g)| check_local_local(&cp, g, &sv))
    }));
    out.push(VerifyReport::run("universal/iota-forward", inst_name.clone(), || {
        each(&els, |(spec, g)| {
            Ok(iota_check(&cp, &f, g, &sv)?.map_err(|e| Failure::new(e.what, json!({"portrait": spec, "detail": e.data}))))
        })
    }));
    out.push(VerifyReport::run("universal/iota-injective", inst_name.clone(), || {
        check_iota_injective(&cp, &els, &sv)
    }));
    out.push(VerifyReport::run(
        "universal/iota-converse",
        format!("{name}, radius {}, {} skeletal portraits", uc.radius, uc.converse_samples),
        || {
            let local: Vec<LocalData> = (0..cp.num_parts()).map(|l| f.restricted(cp.partition.part(l))).collect();
            let targets = reachable_images(b, &f, &Chamber::base(), uc.reach)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0);
            let mut n = 0;
            for _ in 0..uc.converse_samples {
                let t = &targets[rng.gen_range(0..targets.len())];
                let s: u64 = rng.gen();
                let g = skeletal_portrait(&cp, &local, t, s, uc.radius)?;
                match iota_converse_check(&cp, &f, &g, &sv)? {
                    Ok(st) => n += st.checked,
                    Err(e) => {
                        return Ok(Err(Failure::new(
                            e.what,
                            json!({"center_image": t, "seed": s, "detail": e.data}),
                        )))
                    }
                }
            }
            Ok(Ok(Stats::new(n)))
        },
    ));
    out.push(VerifyReport::run(
        "universal/mutants-rejected",
        format!("{name}, radius {}, {} mutants", uc.radius, uc.mutants),
        || check_mutants(&cp, &f, &els, &sv, uc.radius, uc.reach, uc.mutants, seed ^ 0x3a7),
    ));
    out.push(VerifyReport::run(
        "universal/skeletal-mutants-rejected",
        format!("{name}, radius {}, {} rejections", uc.radius, uc.mutants),
        || check_skeletal_mutants(&cp, &f, &sv, uc.radius, uc.mutants, seed ^ 0x5c),
    ));
    out.push(VerifyReport::run(
        "universal/closure",
        format!("{name}, radius {}, {} pairs", uc.radius, uc.closure_pairs),
        || check_closure(b, &f, &els, uc.closure_pairs),
    ));
    out
}

/// The rank-2 commuting building with `q = (2, 2)` and each choice of
/// trivial or full local groups: the universal group splits, with order
/// `|F_1| |F_2|`.
pub fn check_split_orders() -> Result<Check> {
    let sq = BuildingModel::new(Diagram::right_angled(2, &[])?, vec![2, 2])?;
    let mut checked = 0;
    for (a, b) in [(false, false), (true, false), (false, true), (true, true)] {
        let g = |full: bool| if full { PermGroup::symmetric(2) } else { PermGroup::trivial(2) };
        let f = LocalData::new(&sq, vec![g(a), g(b)])?;
        if let Err(e) = split_reducible_check(&sq, &f, 8)? {
            return Ok(Err(e));
        }
        let expected = f.group(0).order() .zip(f.group(1).order()).map(|(x, y)| x * y);
        let got = finite_universal_group(&sq, &f)?.1.order();
        ensure!(got == expected, "order of the universal group is not |F_1| |F_2|", {"full": [a, b], "order": got, "expected": expected});
        checked += 1;
    }
    Ok(Ok(Stats::new(checked)))
}

pub(super) fn run(cfg: &super::Config) -> Vec<VerifyReport> {
    let uc = &cfg.universal;
    let mut out: Vec<VerifyReport> = uc
        .instances
        .iter()
        .enumerate()
        .flat_map(|(k, inst)| run_instance(inst, uc, cfg.seed.wrapping_add(k as u64)))
        .collect();
    out.push(VerifyReport::run(
        "universal/reducible-split",
        "rank 2 commuting, q = (2, 2), F_i trivial or full",
        check_split_orders,
    ));
    out
}

// Applications ------------------------------------------------------------------

/// Groups of the swapped-parameter construction with two moved indices.
pub fn example_one_groups() -> (Vec<PermGroup>, Vec<PermGroup>) {
    (
        vec![PermGroup::cyclic(2), PermGroup::cyclic(3)],
        vec![PermGroup::trivial(2), PermGroup::symmetric(3)],
    )
}

/// Groups `(G_1, G_2, G'_1, G'_2, H)` of the construction on the rank-3
/// free diagram.
pub fn example_two_groups() -> [PermGroup; 5] {
    [
        PermGroup::cyclic(2),
        PermGroup::cyclic(3),
        PermGroup::symmetric(3),
        PermGroup::trivial(2),
        PermGroup::cyclic(2),
    ]
}

fn group_named<'a>(data: &'a ApplicationData, groups: &'a [PermGroup], name: &str) -> Result<&'a PermGroup> {
    Ok(&groups[data.product.product.diagram().index_of(name)?])
}

fn group_named_prime<'a>(data: &'a ApplicationData, groups: &'a [PermGroup], name: &str) -> Result<&'a PermGroup> {
    Ok(&groups[data.product_prime.product.diagram().index_of(name)?])
}

/// Compares `F` and `F'` with the expected groups, index by index name.
fn check_formulas(data: &ApplicationData, f: &[(&str, PermGroup)], fp: &[(&str, PermGroup)]) -> Result<Check> {
    for (name, g) in f {
        ensure!(group_named(data, &data.f, name)? == g, "F differs from the formula", {"index": name});
    }
    for (name, g) in fp {
        ensure!(group_named_prime(data, &data.f_prime, name)? == g, "F' differs from the formula", {"index": name});
    }
    Ok(Ok(Stats::new(f.len() + fp.len())))
}

fn check_relabelled(data: &ApplicationData) -> Result<Check> {
    let n = data.product.num_parts();
    for l in 0..n {
        let r = data.input.rho.apply(l);
        let moved = data.l[r].conjugate(&data.theta[r])?;
        ensure!(moved == data.l_prime[l], "L' is not the relabelled L", {"index": data.product.m.name(l)});
    }
    Ok(Ok(Stats::new(n)))
}

pub(super) fn run_application(cfg: &super::Config) -> Vec<VerifyReport> {
    let ac = &cfg.application;
    let mut out = Vec::new();
    let (g, gp) = example_one_groups();
    let one = example_one(g.clone(), gp.clone()).and_then(|i| application_local_data(&i));
    let [g1, g2, g1p, g2p, h] = example_two_groups();
    let two = example_two(g1.clone(), g2.clone(), g1p.clone(), g2p.clone(), h.clone()).and_then(|i| application_local_data(&i));
    let one_name = "two moved indices: G = (C2, C3), G' = (1, Sym(3))";
    let two_name = "rank-3 free M: (C2, C3, Sym(3), 1, C2)";
    out.push(VerifyReport::run("application/local-data", one_name, || {
        let data = one.clone()?;
        let expected = [("1", g[0].clone()), ("2", g[1].clone()), ("3", product_on_chambers(&gp[0], &gp[1])?)];
        let expected_p = [("1", gp[0].clone()), ("2", gp[1].clone()), ("3", product_on_chambers(&g[0], &g[1])?)];
        check_formulas(&data, &expected, &expected_p)
    }));
    out.push(VerifyReport::run("application/local-data", two_name, || {
        let data = two.clone()?;
        let expected = [
            ("1", g1.clone()),
            ("2", g2.clone()),
            ("3", product_on_chambers(&g1p, &g2p)?),
            ("4", h.clone()),
        ];
        let expected_p = [
            ("1", g1p.clone()),
            ("2", g2p.clone()),
            ("3", h.clone()),
            ("4", product_on_chambers(&g1, &g2)?),
        ];
        check_formulas(&data, &expected, &expected_p)
    }));
    for (name, data) in [(one_name, &one), (two_name, &two)] {
        out.push(VerifyReport::run("application/relabelled-local-groups", name, || check_relabelled(&data.clone()?)));
        out.push(VerifyReport::run(
            "application/isomorphism",
            format!("{name}, radius {}, {} elements each way", ac.radius, ac.samples),
            || application_iso_check(&data.clone()?, ac.radius, cfg.seed, ac.samples),
        ));
    }
    out.push(VerifyReport::run(
        "application/isomorphism",
        format!("symmetric data G = G' = (C2, C3), radius {}", ac.radius),
        || {
            let data = application_local_data(&example_one(g.clone(), g.clone())?)?;
            application_iso_check(&data, ac.radius, cfg.seed, ac.samples)
        },
    ));
    out.push(VerifyReport::run("application/mismatched-parameters-rejected", one_name, || {
        let mut data = one.clone()?;
        data.f_prime[1] = PermGroup::symmetric(4);
        match application_iso_check(&data, ac.radius, cfg.seed, 1) {
            Err(_) => Ok(Ok(Stats::with_note(1, "rejected"))),
            Ok(_) => Ok(Err(Failure::new("wrong parameters were not rejected", json!({"index": 1, "degree": 4})))),
        }
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_round_trip() {
        let inst = UniversalInstance::thick_square_edge();
        let text = serde_json::to_string(&inst).unwrap();
        let back: UniversalInstance = serde_json::from_str(&text).unwrap();
        let (_, f) = back.build().unwrap();
        assert_eq!(f.group(1).order(), Some(2));
    }

    #[test]
    fn split_orders() {
        assert!(check_split_orders().unwrap().is_ok());
    }

    #[test]
    fn small_universal_run() {
        let uc = UniversalConfig {
            radius: 2,
            samples: 6,
            mutants: 2,
            converse_samples: 3,
            closure_pairs: 2,
            ..UniversalConfig::default()
        };
        for inst in &uc.instances {
            for r in run_instance(inst, &uc, 9) {
                assert!(r.passed(), "{}", r.line());
            }
        }
    }
}
