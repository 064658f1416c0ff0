//! City products: the product building, the projections `φ_ℓ`, the lifted
//! coloring, and the skeletal building on a window.

use serde::{Deserialize, Serialize};

use super::building::{check_building_axiom, check_semiregular};
use super::{all_of, check_coloring_legal};
use crate::building::{BuildingModel, BuildingSpec, Chamber};
use crate::cityproduct::{
    check_lifted_coloring, check_panel_sizes, check_panels_are_residues, check_phi_residues, check_section_claims,
    check_skeletal_coloring, check_skeletal_model_isomorphism, verify_skeletal_building, ProductSpec,
};
use crate::diagram::Diagram;
use crate::report::{Stats, VerifyReport};

/// A product spec with a short name for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedProduct {
    pub name: String,
    #[serde(flatten)]
    pub spec: ProductSpec,
}

impl NamedProduct {
    fn new(name: &str, m: Diagram, factors: Vec<BuildingModel>) -> Self {
        NamedProduct {
            name: name.to_string(),
            spec: ProductSpec {
                m,
                factors: factors.iter().map(BuildingSpec::from_model).collect(),
            },
        }
    }

    /// `M` of rank 2 with label `∞`; the thin square (rank 2, no edges) and
    /// the thin rank-1 building. Skeletal panels have 4 and 2 chambers.
    pub fn thin_square_edge() -> Self {
        let square = Diagram::right_angled(2, &[]).expect("rank 2").with_names(["a", "b"]).expect("two names");
        Self::new(
            "thin-square-edge",
            Diagram::free(2).expect("rank 2"),
            vec![
                BuildingModel::thin(square).expect("thin"),
                BuildingModel::thin(Diagram::right_angled(1, &[]).expect("rank 1")).expect("thin"),
            ],
        )
    }

    /// `M` of rank 2 without edges; a rank-1 building with `q = 3` and the
    /// thin rank-2 building with label `∞` (an infinite line).
    pub fn edgeless_pair() -> Self {
        Self::new(
            "edgeless-pair",
            Diagram::right_angled(2, &[]).expect("rank 2"),
            vec![
                BuildingModel::new(Diagram::right_angled(1, &[]).expect("rank 1"), vec![3]).expect("q ≥ 2"),
                BuildingModel::thin(Diagram::free(2).expect("rank 2")).expect("thin"),
            ],
        )
    }

    /// `M` of rank 2 with label `∞`; the rank-2 building without edges and
    /// `q = (2, 3)`, and the rank-1 building with `q = 2`.
    pub fn thick_square_edge() -> Self {
        let square = Diagram::right_angled(2, &[]).expect("rank 2").with_names(["a", "b"]).expect("two names");
        Self::new(
            "thick-square-edge",
            Diagram::free(2).expect("rank 2"),
            vec![
                BuildingModel::new(square, vec![2, 3]).expect("q ≥ 2"),
                BuildingModel::new(Diagram::right_angled(1, &[]).expect("rank 1"), vec![2]).expect("q ≥ 2"),
            ],
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CityConfig {
    /// Radius of the skeletal window.
    pub radius: usize,
    pub maxlen: usize,
    /// Chambers within `radius - slack` of the centre count as interior.
    pub slack: usize,
    /// Radius of the ball of `Δ` used for the building-level checks.
    pub ball_radius: usize,
    pub products: Vec<NamedProduct>,
}

impl Default for CityConfig {
    fn default() -> Self {
        CityConfig {
            radius: 5,
            maxlen: 3,
            slack: 2,
            ball_radius: 3,
            products: vec![
                NamedProduct::thin_square_edge(),
                NamedProduct::edgeless_pair(),
                NamedProduct::thick_square_edge(),
            ],
        }
    }
}

/// All statements on one product.
pub fn run_product(np: &NamedProduct, cc: &CityConfig) -> Vec<VerifyReport> {
    let name = &np.name;
    let cp = match np.spec.build() {
        Ok(cp) => cp,
        Err(e) => return vec![VerifyReport::from_result("city/product", name.clone(), Err(e), 0)],
    };
    let mut out = Vec::new();
    let b = &cp.product;
    let ball_instance = format!("{name}, radius {}", cc.ball_radius);
    let ball = || b.ball(&Chamber::base(), cc.ball_radius);
    out.push(VerifyReport::run("city/building-axiom", format!("{ball_instance}, |w| ≤ {}", cc.maxlen), || {
        let ball = ball()?;
        Ok(all_of([check_building_axiom(b, &ball, cc.maxlen), check_semiregular(b, &ball)]))
    }));
    out.push(VerifyReport::run("city/coloring-legal", ball_instance.clone(), || {
        Ok(check_coloring_legal(b, &ball()?, |c, i| b.coloring(c, i)))
    }));
    out.push(VerifyReport::run("city/lifted-coloring-legal", ball_instance.clone(), || {
        Ok(check_lifted_coloring(&cp, &ball()?))
    }));
    out.push(VerifyReport::run("city/phi-residues", ball_instance, || Ok(check_phi_residues(&cp, &ball()?))));
    let sv = match cp.skeletal(cc.radius) {
        Ok(sv) => sv,
        Err(e) => {
            out.push(VerifyReport::from_result("city/skeletal-window", name.clone(), Err(e), 0));
            return out;
        }
    };
    let instance = format!("{name}, window radius {}", cc.radius);
    out.push(VerifyReport::run("city/skeletal-panels-are-residues", instance.clone(), || {
        Ok(check_panels_are_residues(&cp, &sv))
    }));
    out.push(VerifyReport::run("city/skeletal-panel-sizes", instance.clone(), || {
        Ok(check_panel_sizes(&cp, &sv).map(|(s, sizes)| Stats::with_note(s.checked, format!("complete panel sizes {sizes:?}"))))
    }));
    out.push(VerifyReport::run("city/skeletal-coloring-legal", instance.clone(), || {
        Ok(check_skeletal_coloring(&cp, &sv))
    }));
    out.push(VerifyReport::run("city/section-reduced-image", instance.clone(), || {
        let sample: Vec<usize> = (0..sv.ball.len()).filter(|&k| sv.ball.dist(k) <= 1).collect();
        check_section_claims(&cp, &sv.ball, &sample)
    }));
    out.push(VerifyReport::run(
        "city/skeletal-building",
        format!("{instance}, |v| ≤ {}, slack {}", cc.maxlen, cc.slack),
        || verify_skeletal_building(&cp, &sv, cc.maxlen, cc.slack),
    ));
    if cp.factors.iter().all(BuildingModel::is_finite) {
        out.push(VerifyReport::run("city/skeletal-model-isomorphism", instance, || {
            check_skeletal_model_isomorphism(&cp, &sv)
        }));
    }
    out
}

pub(super) fn run(cfg: &super::Config) -> Vec<VerifyReport> {
    cfg.city.products.iter().flat_map(|np| run_product(np, &cfg.city)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_products_build() {
        for np in CityConfig::default().products {
            let cp = np.spec.build().unwrap();
            assert_eq!(cp.num_parts(), 2);
        }
    }

    #[test]
    fn named_product_round_trip() {
        let np = NamedProduct::thick_square_edge();
        let text = serde_json::to_string(&np).unwrap();
        let back: NamedProduct = serde_json::from_str(&text).unwrap();
        assert_eq!(back.name, np.name);
        assert_eq!(back.spec.build().unwrap().product.params(), [2, 3, 2]);
    }
}
