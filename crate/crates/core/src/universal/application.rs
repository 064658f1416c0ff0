//! Pairs of buildings of the same type with different parameters whose
//! universal groups are isomorphic, via a symmetry of the skeletal diagram.

use std::collections::{HashMap, HashSet};

use serde_json::json;

use super::{check_membership, finite_universal_group, sample_elements, LocalData};
use crate::building::{BuildingModel, Chamber, PartialAut};
use crate::cityproduct::{CityProduct, SkeletalView};
use crate::diagram::{city_product_diagrams, Diagram, DiagramSymmetry};
use crate::ensure;
use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};
use crate::report::{Check, Failure, Stats};
use crate::wordcalc::NormalForm;

/// The data of the construction: `M` with a symmetry `ρ`, a moved index
/// `k`, one diagram per index of `M`, the groups `G_i`, `G'_i` for
/// `i ∈ I_k`, and `H_i` for `i ∈ I_ℓ`, `ℓ ∉ {k, ρ(k)}` (empty lists for
/// `k` and `ρ(k)`).
#[derive(Clone, Debug)]
pub struct ApplicationInput {
    pub m: Diagram,
    pub rho: DiagramSymmetry,
    pub k: usize,
    pub factors: Vec<Diagram>,
    pub g: Vec<PermGroup>,
    pub g_prime: Vec<PermGroup>,
    pub h: Vec<Vec<PermGroup>>,
    /// Names for the indices of `N`, in the concatenated order.
    pub names: Option<Vec<String>>,
}

/// Both local data families over `I`, both families over the indices of
/// `M`, the color identifications and the two city products.
#[derive(Clone, Debug)]
pub struct ApplicationData {
    pub input: ApplicationInput,
    pub f: Vec<PermGroup>,
    pub f_prime: Vec<PermGroup>,
    pub l: Vec<PermGroup>,
    pub l_prime: Vec<PermGroup>,
    /// `θ_ℓ`: chambers of `Δ_ℓ` to chambers of `Δ'_{ρ⁻¹(ℓ)}`, both listed
    /// by `all_chambers`.
    pub theta: Vec<Perm>,
    pub product: CityProduct,
    pub product_prime: CityProduct,
}

impl ApplicationData {
    pub fn local(&self) -> Result<LocalData> {
        LocalData::new(&self.product.product, self.f.clone())
    }

    pub fn local_prime(&self) -> Result<LocalData> {
        LocalData::new(&self.product_prime.product, self.f_prime.clone())
    }
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn all_commute(d: &Diagram) -> bool {
    (0..d.rank()).all(|i| d.infinite_mask(i) == 0)
}

fn degrees(groups: &[PermGroup]) -> Vec<u32> {
    groups.iter().map(PermGroup::degree).collect()
}

/// `U_{M_ℓ}(groups)` on the chambers of the finite building of type `M_ℓ`.
fn finite_u(d: &Diagram, groups: &[PermGroup]) -> Result<PermGroup> {
    let model = BuildingModel::new(d.clone(), degrees(groups))?;
    let f = LocalData::new(&model, groups.to_vec())?;
    Ok(finite_universal_group(&model, &f)?.1)
}

/// Builds `F`, `F'`, `L`, `L'` and the two products.
///
/// Requires `M_k` and every `M_ℓ` with `ℓ` fixed by `ρ` to have no edges, so
/// that every `Δ_ℓ` is finite and the `L_ℓ` are finite permutation groups.
pub fn application_local_data(input: &ApplicationInput) -> Result<ApplicationData> {
    let m = &input.m;
    m.require_right_angled()?;
    let n = m.rank();
    let rho = &input.rho;
    let rho_inv = rho.inverse();
    if rho.is_identity() || !rho.preserves(m) {
        return Err(precondition("ρ must be a non-trivial symmetry of M"));
    }
    let k = input.k;
    if k >= n || rho.apply(k) == k {
        return Err(precondition("k must be moved by ρ"));
    }
    if input.factors.len() != n || input.h.len() != n {
        return Err(Error::FactorCount {
            expected: n,
            got: input.factors.len(),
        });
    }
    let t = input.factors[k].rank();
    if t < 2 {
        return Err(precondition("|I_k| must be at least 2"));
    }
    if input.g.len() != t || input.g_prime.len() != t {
        return Err(precondition("need one G_i and one G'_i for each i in I_k"));
    }
    let moved: HashSet<usize> = rho.support.iter().copied().collect();
    for l in 0..n {
        let r = input.factors[l].rank();
        if moved.contains(&l) && l != k && r != 1 {
            return Err(precondition(format!("|I_{}| must be 1", m.name(l))));
        }
        let wants_h = l != k && l != rho.apply(k);
        if wants_h && input.h[l].len() != r {
            return Err(precondition(format!("need one H_i for each i in I_{}", m.name(l))));
        }
        if !wants_h && !input.h[l].is_empty() {
            return Err(precondition(format!("no H_i for I_{}", m.name(l))));
        }
        if (l == k || !moved.contains(&l)) && !all_commute(&input.factors[l]) {
            return Err(precondition(format!("M_{} must have no edges", m.name(l))));
        }
    }
    let mk = &input.factors[k];
    let u_g = finite_u(mk, &input.g)?;
    let u_gp = finite_u(mk, &input.g_prime)?;
    let (nd, partition) = city_product_diagrams(m, &input.factors)?;
    let mut f = vec![PermGroup::trivial(0); nd.rank()];
    let mut fp = f.clone();
    for l in 0..n {
        for (s, &i) in partition.part(l).iter().enumerate() {
            f[i] = if l == k {
                input.g[s].clone()
            } else if l == rho.apply(k) {
                u_gp.clone()
            } else {
                input.h[l][s].clone()
            };
            fp[i] = if l == k {
                input.g_prime[s].clone()
            } else if l == rho_inv.apply(k) {
                u_g.clone()
            } else if moved.contains(&l) {
                input.h[rho.apply(l)][0].clone()
            } else {
                input.h[l][s].clone()
            };
        }
    }
    let mut l_data = Vec::with_capacity(n);
    let mut lp_data = Vec::with_capacity(n);
    for l in 0..n {
        l_data.push(if l == k {
            u_g.clone()
        } else if l == rho.apply(k) {
            u_gp.clone()
        } else if moved.contains(&l) {
            input.h[l][0].clone()
        } else {
            finite_u(&input.factors[l], &input.h[l])?
        });
        lp_data.push(if l == k {
            u_gp.clone()
        } else if l == rho_inv.apply(k) {
            u_g.clone()
        } else if moved.contains(&l) {
            input.h[rho.apply(l)][0].clone()
        } else {
            finite_u(&input.factors[l], &input.h[l])?
        });
    }
    let build = |groups: &[PermGroup]| -> Result<CityProduct> {
        let factors = (0..n)
            .map(|l| {
                let q = partition.part(l).iter().map(|&i| groups[i].degree()).collect();
                BuildingModel::new(input.factors[l].clone(), q)
            })
            .collect::<Result<Vec<_>>>()?;
        let cp = CityProduct::new(m.clone(), factors)?;
        match &input.names {
            Some(names) => cp.with_product_names(names.clone()),
            None => Ok(cp),
        }
    };
    let product = build(&f)?;
    let product_prime = build(&fp)?;
    let mut theta = Vec::with_capacity(n);
    for l in 0..n {
        let a = product.factors[l].size().expect("finite factor");
        let b = product_prime.factors[rho_inv.apply(l)].size();
        if b != Some(a) {
            return Err(precondition(format!(
                "|Δ_{}| = {a} but the matching factor has {:?} chambers",
                m.name(l),
                b
            )));
        }
        theta.push(Perm::identity(a as u32));
    }
    Ok(ApplicationData {
        input: input.clone(),
        f,
        f_prime: fp,
        l: l_data,
        l_prime: lp_data,
        theta,
        product,
        product_prime,
    })
}

/// A color-matching bijection from a window of `from` into `to`: an
/// `ℓ`-neighbour `d` of `c` goes to the chamber of the
/// `I'_{τ(ℓ)}`-residue of the image of `c` whose `τ(ℓ)`-color is
/// `θ_ℓ(φ_ℓ(d))`. Fails with the first inconsistency.
fn color_matching_map(
    from: &CityProduct,
    to: &CityProduct,
    sv: &SkeletalView,
    tau: &DiagramSymmetry,
    theta: &[Perm],
) -> Result<std::result::Result<Vec<Chamber>, Failure>> {
    let n = from.num_parts();
    let mut src_enum = Vec::with_capacity(n);
    let mut dst_enum = Vec::with_capacity(n);
    for l in 0..n {
        let a = from.factors[l].all_chambers()?;
        let idx: HashMap<Chamber, usize> = a.into_iter().zip(0..).collect();
        src_enum.push(idx);
        dst_enum.push(to.factors[tau.apply(l)].all_chambers()?);
    }
    let ball = &sv.ball;
    let mut img: Vec<Option<Chamber>> = vec![None; ball.len()];
    img[0] = Some(Chamber::base());
    for k in 0..ball.len() {
        let Some(gc) = img[k].clone() else {
            return Ok(Err(Failure::new("window not connected", json!({"chamber": ball.chamber(k)}))));
        };
        for (l, mk) in sv.neighbors(k).collect::<Vec<_>>() {
            let x = src_enum[l][&from.phi(ball.chamber(mk), l)];
            let y = &dst_enum[l][theta[l].apply(x as u32) as usize];
            let want = to.residue_member(&gc, tau.apply(l), y);
            match &img[mk] {
                None => img[mk] = Some(want),
                Some(prev) => ensure!(
                    *prev == want,
                    "color-matching map is inconsistent",
                    {"chamber": ball.chamber(mk), "first": prev, "second": want}
                ),
            }
        }
    }
    Ok(Ok(img.into_iter().map(|c| c.expect("all reached")).collect()))
}

fn conjugate(g: &PartialAut, psi: &HashMap<&Chamber, &Chamber>) -> Option<PartialAut> {
    let mut pairs = Vec::with_capacity(g.len());
    for (x, gx) in g.pairs() {
        pairs.push(((*psi.get(x)?).clone(), (*psi.get(gx)?).clone()));
    }
    Some(PartialAut::from_pairs(pairs))
}

fn fixes(g: &PartialAut, set: &[Chamber]) -> bool {
    set.iter().all(|c| g.apply(c) == Some(c))
}

/// Transfer of sampled elements in one direction: `g ∈ U(F)` on the ball of
/// radius `r` goes to `ψ g ψ⁻¹`, which must pass membership for `F'`; the
/// pointwise stabilizer of the radius-1 ball corresponds to the stabilizer
/// of its image.
#[allow(clippy::too_many_arguments)]
fn transfer(
    from: &CityProduct,
    f: &LocalData,
    to: &CityProduct,
    f_to: &LocalData,
    psi_dom: &[Chamber],
    psi: &[Chamber],
    r: usize,
    seed: u64,
    samples: usize,
) -> Result<Check> {
    let map: HashMap<&Chamber, &Chamber> = psi_dom.iter().zip(psi).collect();
    let near = from.product.ball(&Chamber::base(), 1)?.chambers().to_vec();
    let near_img: Vec<Chamber> = near.iter().map(|c| map[c].clone()).collect();
    let mut panels = 0;
    for (spec, g) in sample_elements(&from.product, f, r, 1, seed, samples)? {
        let Some(gp) = conjugate(&g, &map) else {
            return Err(Error::OutsideWindow("conjugated element leaves the window".into()));
        };
        match check_membership(&to.product, &gp, f_to)? {
            Ok(s) => panels += s.checked,
            Err(e) => {
                return Ok(Err(Failure::new(
                    format!("conjugated element rejected: {}", e.what),
                    json!({"portrait": spec, "detail": e.data}),
                )))
            }
        }
        ensure!(
            fixes(&g, &near) == fixes(&gp, &near_img),
            "pointwise stabilizers do not correspond",
            {"portrait": spec}
        );
    }
    ensure!(panels > 0, "no panel was covered by a conjugated element", {"radius": r});
    Ok(Ok(Stats::new(panels)))
}

/// The isomorphism `U_N(F) ≅ U_N(F')` at ball scale.
///
/// Checks, in order: `L_ℓ = U_{Δ_ℓ}(F_ℓ)` and `L'_ℓ = U_{Δ'_ℓ}(F'_ℓ)`;
/// `L'_ℓ = θ L_{ρ(ℓ)} θ⁻¹`; the color-matching bijections `ψ: Δ → Δ'` and
/// `ψ': Δ' → Δ` along `ρ⁻¹` and `ρ` are mutually inverse and carry `δ_Φ`
/// to `ρ⁻¹(δ_Φ)`; and conjugation by them carries seeded members of each
/// universal group into the other.
pub fn application_iso_check(data: &ApplicationData, r: usize, seed: u64, samples: usize) -> Result<Check> {
    let (cp, cpp) = (&data.product, &data.product_prime);
    let n = cp.num_parts();
    let rho = &data.input.rho;
    let rho_inv = rho.inverse();
    let f = data.local()?;
    let fp = data.local_prime()?;
    for l in 0..n {
        let (_, ul) = finite_universal_group(&cp.factors[l], &f.restricted(cp.partition.part(l)))?;
        ensure!(ul == data.l[l], "L differs from the universal group of the factor", {"index": cp.m.name(l)});
        let (_, ulp) = finite_universal_group(&cpp.factors[l], &fp.restricted(cpp.partition.part(l)))?;
        ensure!(ulp == data.l_prime[l], "L' differs from the universal group of the factor", {"index": cp.m.name(l)});
        let moved = data.l[rho.apply(l)].conjugate(&data.theta[rho.apply(l)])?;
        ensure!(moved == data.l_prime[l], "L' is not the relabelled L", {"index": cp.m.name(l)});
    }
    let theta_inv: Vec<Perm> = (0..n).map(|l| data.theta[rho.apply(l)].inverse()).collect();
    let sv = cp.skeletal(r + 1)?;
    let svp = cpp.skeletal(r + 1)?;
    let psi = match color_matching_map(cp, cpp, &sv, &rho_inv, &data.theta)? {
        Ok(p) => p,
        Err(e) => return Ok(Err(e)),
    };
    let psi_back = match color_matching_map(cpp, cp, &svp, rho, &theta_inv)? {
        Ok(p) => p,
        Err(e) => return Ok(Err(e)),
    };
    let distinct: HashSet<&Chamber> = psi.iter().collect();
    ensure!(distinct.len() == psi.len(), "ψ is not injective", {"size": psi.len()});
    let back: HashMap<&Chamber, &Chamber> = svp.ball.chambers().iter().zip(&psi_back).collect();
    let base = Chamber::base();
    for (x, y) in sv.ball.chambers().iter().zip(&psi) {
        if let Some(z) = back.get(y) {
            ensure!(*z == x, "ψ' ψ is not the identity", {"chamber": x, "image": y, "back": z});
        }
        let d = cp.skeletal_weyl(&base, x)?;
        let relabelled: Vec<usize> = d.word().iter().map(|&l| rho_inv.apply(l)).collect();
        let want = NormalForm::of(&relabelled, &cp.m)?;
        let got = cpp.skeletal_weyl(&base, y)?;
        ensure!(
            got == want,
            "ψ does not carry skeletal distances along ρ",
            {"chamber": x, "image": y, "before": d.word(), "after": got.word()}
        );
    }
    let fwd = transfer(cp, &f, cpp, &fp, sv.ball.chambers(), &psi, r, seed, samples)?;
    let Ok(a) = fwd else { return Ok(fwd) };
    let bwd = transfer(cpp, &fp, cp, &f, svp.ball.chambers(), &psi_back, r, seed ^ 1, samples)?;
    let Ok(b) = bwd else { return Ok(bwd) };
    Ok(Ok(Stats::with_note(
        a.checked + b.checked,
        format!("radius {r}, {} chambers in the window, {samples} elements each way", psi.len()),
    )))
}

/// `M` of rank 2 with label `∞`, `M_1` of rank 1, `M_2` of rank `t` without
/// edges, `ρ` the swap and `k = 2`. The indices of `N` are named `1..t` for
/// `I_2` and `t+1` for `I_1`.
pub fn example_one(g: Vec<PermGroup>, g_prime: Vec<PermGroup>) -> Result<ApplicationInput> {
    let t = g.len();
    let m = Diagram::free(2)?;
    let factors = vec![Diagram::right_angled(1, &[])?, Diagram::right_angled(t, &[])?];
    let mut names = vec![(t + 1).to_string()];
    names.extend((1..=t).map(|i| i.to_string()));
    Ok(ApplicationInput {
        m,
        rho: DiagramSymmetry::from_perm(vec![1, 0]),
        k: 1,
        factors,
        g,
        g_prime,
        h: vec![Vec::new(), Vec::new()],
        names: Some(names),
    })
}

/// `M` of rank 3 with all labels `∞`, `M_1`, `M_3` of rank 1, `M_2` of rank
/// 2 without edges, `ρ = (1 2 3)` and `k = 2`. The indices of `N` are named
/// `1, 2` for `I_2`, `3` for `I_3` and `4` for `I_1`.
pub fn example_two(
    g1: PermGroup,
    g2: PermGroup,
    g1_prime: PermGroup,
    g2_prime: PermGroup,
    h: PermGroup,
) -> Result<ApplicationInput> {
    let m = Diagram::free(3)?;
    let factors = vec![
        Diagram::right_angled(1, &[])?,
        Diagram::right_angled(2, &[])?,
        Diagram::right_angled(1, &[])?,
    ];
    Ok(ApplicationInput {
        m,
        rho: DiagramSymmetry::from_perm(vec![1, 2, 0]),
        k: 1,
        factors,
        g: vec![g1, g2],
        g_prime: vec![g1_prime, g2_prime],
        h: vec![vec![h], Vec::new(), Vec::new()],
        names: Some(["4", "1", "2", "3"].map(String::from).to_vec()),
    })
}

/// `G × G'` on `Ω × Ω'`, relabelled to the chamber order of the rank-2
/// commuting building with parameters `(|Ω|, |Ω'|)`.
pub fn product_on_chambers(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let model = BuildingModel::new(Diagram::right_angled(2, &[])?, vec![a.degree(), b.degree()])?;
    let to_pair: Vec<u32> = model
        .all_chambers()?
        .iter()
        .map(|c| model.coloring(c, 0) * b.degree() + model.coloring(c, 1))
        .collect();
    let theta = Perm::new(to_pair)?.inverse();
    a.product(b)?.conjugate(&theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_name<'a>(data: &'a ApplicationData, groups: &'a [PermGroup], name: &str) -> &'a PermGroup {
        &groups[data.product.product.diagram().index_of(name).unwrap()]
    }

    #[test]
    fn example_one_formulas() {
        let (g1, g2) = (PermGroup::cyclic(2), PermGroup::cyclic(3));
        let (g1p, g2p) = (PermGroup::trivial(2), PermGroup::symmetric(3));
        let input = example_one(vec![g1.clone(), g2.clone()], vec![g1p.clone(), g2p.clone()]).unwrap();
        let data = application_local_data(&input).unwrap();
        assert_eq!(by_name(&data, &data.f, "1"), &g1);
        assert_eq!(by_name(&data, &data.f, "2"), &g2);
        assert_eq!(by_name(&data, &data.f, "3"), &product_on_chambers(&g1p, &g2p).unwrap());
        assert_eq!(by_name(&data, &data.f_prime, "1"), &g1p);
        assert_eq!(by_name(&data, &data.f_prime, "2"), &g2p);
        assert_eq!(by_name(&data, &data.f_prime, "3"), &product_on_chambers(&g1, &g2).unwrap());
        assert!(application_iso_check(&data, 2, 1, 4).unwrap().is_ok());
    }

    #[test]
    fn example_two_formulas() {
        let input = example_two(
            PermGroup::cyclic(2),
            PermGroup::cyclic(3),
            PermGroup::symmetric(3),
            PermGroup::trivial(2),
            PermGroup::cyclic(2),
        )
        .unwrap();
        let data = application_local_data(&input).unwrap();
        assert_eq!(by_name(&data, &data.f, "4"), &PermGroup::cyclic(2));
        assert_eq!(by_name(&data, &data.f_prime, "3"), &PermGroup::cyclic(2));
        assert_eq!(
            by_name(&data, &data.f_prime, "4"),
            &product_on_chambers(&PermGroup::cyclic(2), &PermGroup::cyclic(3)).unwrap()
        );
        for l in 0..3 {
            assert_eq!(data.l_prime[l], data.l[input.rho.apply(l)]);
        }
    }

    #[test]
    fn hypothesis_violations() {
        let mut input = example_one(vec![PermGroup::cyclic(2)], vec![PermGroup::cyclic(2)]).unwrap();
        assert!(matches!(application_local_data(&input), Err(Error::Precondition(_))));
        input = example_one(
            vec![PermGroup::cyclic(2), PermGroup::cyclic(2)],
            vec![PermGroup::cyclic(2), PermGroup::cyclic(2)],
        )
        .unwrap();
        input.rho = DiagramSymmetry::from_perm(vec![0, 1]);
        assert!(matches!(application_local_data(&input), Err(Error::Precondition(_))));
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let input = example_one(
            vec![PermGroup::cyclic(2), PermGroup::cyclic(3)],
            vec![PermGroup::trivial(2), PermGroup::symmetric(3)],
        )
        .unwrap();
        let mut data = application_local_data(&input).unwrap();
        data.f_prime[1] = PermGroup::symmetric(4);
        assert!(application_iso_check(&data, 2, 1, 2).is_err());
    }
}
