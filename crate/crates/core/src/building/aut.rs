use std::collections::HashMap;

use serde::Serialize;

use super::{BallView, BuildingModel, Chamber, PanelRef};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::wordcalc::NormalForm;

/// A type-preserving map defined on a finite set of chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAut {
    domain: Vec<Chamber>,
    image: Vec<Chamber>,
    index: HashMap<Chamber, usize>,
}

/// Why a [`PartialAut`] fails its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AutViolation {
    NotInjective {
        a: Chamber,
        b: Chamber,
        image: Chamber,
    },
    Distance {
        c: Chamber,
        d: Chamber,
        before: Vec<usize>,
        after: Vec<usize>,
    },
}

impl PartialAut {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Chamber, Chamber)>) -> Self {
        let mut domain = Vec::new();
        let mut image = Vec::new();
        let mut index = HashMap::new();
        for (c, d) in pairs {
            if let Some(&k) = index.get(&c) {
                image[k] = d;
            } else {
                index.insert(c.clone(), domain.len());
                domain.push(c);
                image.push(d);
            }
        }
        PartialAut { domain, image, index }
    }

    pub fn identity(ball: &BallView) -> Self {
        Self::from_pairs(ball.chambers().iter().map(|c| (c.clone(), c.clone())))
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn domain(&self) -> &[Chamber] {
        &self.domain
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Chamber, &Chamber)> {
        self.domain.iter().zip(&self.image)
    }

    pub fn apply(&self, c: &Chamber) -> Option<&Chamber> {
        self.index.get(c).map(|&k| &self.image[k])
    }

    /// `self ∘ other` on the chambers where both steps are defined.
    pub fn compose(&self, other: &PartialAut) -> PartialAut {
        Self::from_pairs(
            other
                .pairs()
                .filter_map(|(c, d)| self.apply(d).map(|e| (c.clone(), e.clone()))),
        )
    }

    pub fn inverse(&self) -> PartialAut {
        Self::from_pairs(self.pairs().map(|(c, d)| (d.clone(), c.clone())))
    }

    /// Keeps the chambers of `set` that lie in the domain.
    pub fn restrict<'a>(&self, set: impl IntoIterator<Item = &'a Chamber>) -> PartialAut {
        Self::from_pairs(
            set.into_iter()
                .filter_map(|c| self.apply(c).map(|d| (c.clone(), d.clone()))),
        )
    }

    /// Injectivity and preservation of the Weyl distance on all pairs (which
    /// includes preservation of typed adjacency).
    pub fn verify(&self, model: &BuildingModel) -> std::result::Result<(), AutViolation> {
        let mut seen: HashMap<&Chamber, usize> = HashMap::with_capacity(self.len());
        for (k, d) in self.image.iter().enumerate() {
            if let Some(&j) = seen.get(d) {
                return Err(AutViolation::NotInjective {
                    a: self.domain[j].clone(),
                    b: self.domain[k].clone(),
                    image: d.clone(),
                });
            }
            seen.insert(d, k);
        }
        let n = self.len();
        let inv_dom: Vec<Chamber> = self.domain.iter().map(|c| model.inverse(c)).collect();
        let inv_img: Vec<Chamber> = self.image.iter().map(|c| model.inverse(c)).collect();
        for a in 0..n {
            for b in a + 1..n {
                let before = model.multiply(&inv_dom[a], &self.domain[b]);
                let after = model.multiply(&inv_img[a], &self.image[b]);
                if before.types() != after.types() {
                    return Err(AutViolation::Distance {
                        c: self.domain[a].clone(),
                        d: self.domain[b].clone(),
                        before: before.types(),
                        after: after.types(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The local action `σ(g, P) = λ_i ∘ g ∘ λ_i⁻¹` at the `i`-panel of `c`,
    /// as a permutation of the colors `0..q_i`.
    pub fn local_action(&self, model: &BuildingModel, c: &Chamber, i: usize) -> Result<Perm> {
        let (_, members) = model.panel(c, i);
        let q = model.q(i);
        let mut images = vec![u32::MAX; q as usize];
        let mut target: Option<PanelRef> = None;
        for m in &members {
            let gm = self.apply(m).ok_or(Error::PanelNotCovered)?;
            let p = model.panel_ref(gm, i);
            match &target {
                None => target = Some(p),
                Some(t) if *t != p => {
                    return Err(Error::Precondition(format!(
                        "panel of type {} is not mapped to a panel",
                        model.diagram().name(i)
                    )))
                }
                _ => {}
            }
            images[model.coloring(m, i) as usize] = model.coloring(gm, i);
        }
        Perm::new(images)
    }

    /// Weyl distances are preserved between `c` and `d`.
    pub fn preserves(&self, model: &BuildingModel, c: &Chamber, d: &Chamber) -> Option<bool> {
        let (gc, gd) = (self.apply(c)?, self.apply(d)?);
        Some(model.weyl_distance(c, d) == model.weyl_distance(gc, gd))
    }

    pub fn weyl_image(&self, model: &BuildingModel, c: &Chamber, d: &Chamber) -> Option<NormalForm> {
        Some(model.weyl_distance(self.apply(c)?, self.apply(d)?))
    }
}

/// Extends `center ↦ center_image` over `ball` panel by panel, in ball order.
///
/// Each panel is handled once, from its first member `c` in ball order; the
/// callback receives the panel, `c`, `λ_i(c)` and `λ_i(g(c))` and returns the
/// local permutation, which must send the first color to the second.
pub(crate) fn extend_by_local_actions(
    model: &BuildingModel,
    ball: &BallView,
    center_image: &Chamber,
    mut choose: impl FnMut(&PanelRef, &Chamber, u32, u32) -> Result<Perm>,
) -> Result<PartialAut> {
    let n = ball.len();
    let mut img: Vec<Option<Chamber>> = vec![None; n];
    img[0] = Some(center_image.clone());
    let mut done = vec![false; ball.panels().len()];
    for k in 0..n {
        let Some(gc) = img[k].clone() else {
            return Err(Error::ExtensionConflict(format!(
                "chamber {} was not reached",
                ball.chamber(k)
            )));
        };
        let c = ball.chamber(k);
        for i in 0..model.rank() {
            let pi = ball.panel_index(k, i);
            if done[pi] {
                continue;
            }
            done[pi] = true;
            let bp = &ball.panels()[pi];
            let x = model.coloring(c, i);
            let y = model.coloring(&gc, i);
            let sigma = choose(&bp.panel, c, x, y)?;
            if sigma.apply(x) != y {
                return Err(Error::ExtensionConflict(format!(
                    "local permutation {sigma} at {} does not send {x} to {y}",
                    c.display(model.diagram())
                )));
            }
            let anchor = model.panel_ref(&gc, i).anchor;
            let base_color = model.coloring(&anchor, i);
            for &m in &bp.members {
                let want = sigma.apply(model.coloring(ball.chamber(m), i));
                let q = model.q(i);
                let gm = model.step(&anchor, i, (want + q - base_color) % q);
                match &img[m] {
                    None => img[m] = Some(gm),
                    Some(prev) if *prev != gm => {
                        return Err(Error::ExtensionConflict(format!(
                            "{} is sent to both {} and {}",
                            ball.chamber(m).display(model.diagram()),
                            prev.display(model.diagram()),
                            gm.display(model.diagram())
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

/// The automorphism sending the base chamber to `target` and preserving the
/// coloring, on the ball of radius `r` around the base. It exists exactly
/// when `target` has the base color in every type.
pub fn color_translation(model: &BuildingModel, target: &Chamber, r: usize) -> Result<PartialAut> {
    let colors = model.colors(target);
    if let Some(i) = colors.iter().position(|&x| x != 0) {
        return Err(Error::ColorMismatch(format!(
            "target has color {} in type {}",
            colors[i],
            model.diagram().name(i)
        )));
    }
    let ball = model.ball(&Chamber::base(), r)?;
    let g = extend_by_local_actions(model, &ball, target, |p, _, _, _| Ok(Perm::identity(model.q(p.ty))))?;
    g.verify(model)
        .map_err(|v| Error::ExtensionConflict(format!("{v:?}")))?;
    Ok(g)
}

/// Left multiplication by `t` on the ball of radius `r` around the base.
/// Its local actions are the shifts by the colors of `t`.
pub fn left_translation(model: &BuildingModel, t: &Chamber, r: usize) -> Result<PartialAut> {
    let ball = model.ball(&Chamber::base(), r)?;
    Ok(PartialAut::from_pairs(
        ball.chambers().iter().map(|c| (c.clone(), model.multiply(t, c))),
    ))
}
