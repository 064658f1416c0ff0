use std::collections::HashMap;

use super::{BallView, BuildingModel, Chamber};
use crate::error::{Error, Result};

/// An equivalence relation on the colors `0..q` of one type, stored as the
/// class of each color. Classes are numbered by first appearance, so the
/// class of the base color is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    class: Vec<u32>,
}

impl Relation {
    /// Any labelling of the colors; equal labels mean equivalent colors.
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut map = HashMap::new();
        let class = labels
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Relation { class }
    }

    /// From a list of blocks; colors not mentioned are singletons.
    pub fn from_blocks(q: u32, blocks: &[Vec<u32>]) -> Result<Self> {
        let mut labels: Vec<u32> = (0..q).map(|a| q + a).collect();
        for (b, block) in blocks.iter().enumerate() {
            for &a in block {
                if a >= q {
                    return Err(Error::Malformed(format!("color {a} out of range 0..{q}")));
                }
                labels[a as usize] = b as u32;
            }
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn equality(q: u32) -> Self {
        Relation { class: (0..q).collect() }
    }

    pub fn universal(q: u32) -> Self {
        Relation { class: vec![0; q as usize] }
    }

    pub fn degree(&self) -> u32 {
        self.class.len() as u32
    }

    pub fn num_classes(&self) -> u32 {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_universal(&self) -> bool {
        self.num_classes() <= 1
    }

    #[inline]
    pub fn class_of(&self, a: u32) -> u32 {
        self.class[a as usize]
    }
}

/// An implosion `τ: Δ → Δ'` with centre `c0`, tabulated on a ball.
#[derive(Clone, Debug)]
pub struct Implosion {
    /// The imploded building over `I'`.
    pub target: BuildingModel,
    /// `I'` as indices of the original diagram, increasing.
    pub types: Vec<usize>,
    pub relations: Vec<Relation>,
    pub centre: Chamber,
    /// `τ` on `ball`, aligned with its chamber order.
    pub ball: BallView,
    pub images: Vec<Chamber>,
}

impl Implosion {
    /// `τ(c)` for any chamber `c`.
    pub fn tau(&self, source: &BuildingModel, c: &Chamber) -> Chamber {
        tau(source, &self.target, &self.types, &self.relations, &self.centre, c)
    }

    /// Position of an original type in `I'`.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.types.iter().position(|&t| t == i)
    }
}

fn tau(
    source: &BuildingModel,
    target: &BuildingModel,
    types: &[usize],
    relations: &[Relation],
    centre: &Chamber,
    c: &Chamber,
) -> Chamber {
    let x = source.multiply(&source.inverse(centre), c);
    let mut pos = vec![usize::MAX; source.rank()];
    for (k, &t) in types.iter().enumerate() {
        pos[t] = k;
    }
    let mut running = vec![0u32; source.rank()];
    let mut out = Chamber::base();
    for &(i, a) in x.syllables() {
        let before = running[i];
        let after = (before + a) % source.q(i);
        running[i] = after;
        let k = pos[i];
        if k == usize::MAX {
            continue;
        }
        let rel = &relations[i];
        let q = rel.num_classes();
        let inc = (rel.class_of(after) + q - rel.class_of(before)) % q;
        out = target.step(&out, k, inc);
    }
    out
}

fn check_relations(model: &BuildingModel, relations: &[Relation]) -> Result<()> {
    if relations.len() != model.rank() {
        return Err(Error::InvalidParameters(format!(
            "{} relations for rank {}",
            relations.len(),
            model.rank()
        )));
    }
    for (i, r) in relations.iter().enumerate() {
        if r.degree() != model.q(i) {
            return Err(Error::InvalidParameters(format!(
                "relation for type {} has degree {} but q = {}",
                model.diagram().name(i),
                r.degree(),
                model.q(i)
            )));
        }
    }
    Ok(())
}

fn imploded_model(model: &BuildingModel, relations: &[Relation]) -> Result<(BuildingModel, Vec<usize>)> {
    let types: Vec<usize> = (0..model.rank()).filter(|&i| !relations[i].is_universal()).collect();
    if types.is_empty() {
        return Ok((BuildingModel::trivial(), types));
    }
    let restricted = model.restrict(&types)?;
    let q = types.iter().map(|&i| relations[i].num_classes()).collect();
    let target = BuildingModel::new(restricted.diagram().clone(), q)?.with_merge_rule(model.merge_rule());
    Ok((target, types))
}

/// The implosion of `model` along `relations` with centre `c0`, tabulated on
/// the ball of radius `r` around `c0`.
///
/// `τ(c)` follows the normal form of `c0⁻¹ c` syllable by syllable: an
/// `i`-syllable moves the running `i`-color from `a` to `b` and contributes
/// the `i`-syllable `[b] - [a]` in the quotient, or nothing when `i` is
/// imploded away.
pub fn implode(model: &BuildingModel, relations: &[Relation], c0: &Chamber, r: usize) -> Result<Implosion> {
    check_relations(model, relations)?;
    let (target, types) = imploded_model(model, relations)?;
    let ball = model.ball(c0, r)?;
    let images = ball
        .chambers()
        .iter()
        .map(|c| tau(model, &target, &types, relations, c0, c))
        .collect();
    Ok(Implosion {
        target,
        types,
        relations: relations.to_vec(),
        centre: c0.clone(),
        ball,
        images,
    })
}

/// Independent construction of the same map: BFS from `c0`, sending each
/// `i`-neighbour to the chamber of the image panel whose color is the class
/// of the neighbour's color (relative to `c0`), or to the same image when
/// `i` is imploded away. Fails on an inconsistency.
pub fn implosion_by_bfs(
    model: &BuildingModel,
    relations: &[Relation],
    c0: &Chamber,
    r: usize,
) -> Result<(BuildingModel, Vec<Chamber>)> {
    check_relations(model, relations)?;
    let (target, types) = imploded_model(model, relations)?;
    let mut pos = vec![usize::MAX; model.rank()];
    for (k, &t) in types.iter().enumerate() {
        pos[t] = k;
    }
    let ball = model.ball(c0, r)?;
    let c0inv = model.inverse(c0);
    let rel_colors: Vec<Vec<u32>> = ball
        .chambers()
        .iter()
        .map(|c| model.colors(&model.multiply(&c0inv, c)))
        .collect();
    let mut img: Vec<Option<Chamber>> = vec![None; ball.len()];
    img[0] = Some(Chamber::base());
    for k in 0..ball.len() {
        let gc = img[k].clone().ok_or_else(|| Error::ExtensionConflict("unreached chamber".into()))?;
        for (i, m) in ball.neighbors(k).collect::<Vec<_>>() {
            let want = if pos[i] == usize::MAX {
                gc.clone()
            } else {
                let t = pos[i];
                let cls = relations[i].class_of(rel_colors[m][i]);
                let anchor = target.panel_ref(&gc, t).anchor;
                let q = target.q(t);
                let base = target.coloring(&anchor, t);
                target.step(&anchor, t, (cls + q - base) % q)
            };
            match &img[m] {
                None => img[m] = Some(want),
                Some(prev) if *prev != want => {
                    return Err(Error::ExtensionConflict(format!(
                        "{} has images {} and {}",
                        ball.chamber(m),
                        prev,
                        want
                    )))
                }
                _ => {}
            }
        }
    }
    Ok((target, img.into_iter().map(|c| c.expect("ball is connected")).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;

    fn model(n: usize, edges: &[(usize, usize)], q: &[u32]) -> BuildingModel {
        BuildingModel::new(Diagram::right_angled(n, edges).unwrap(), q.to_vec()).unwrap()
    }

    #[test]
    fn relation_normalization() {
        let r = Relation::from_labels(&[5, 3, 5, 3]);
        assert_eq!(r.class, vec![0, 1, 0, 1]);
        assert_eq!(r.num_classes(), 2);
        let b = Relation::from_blocks(4, &[vec![1, 3]]).unwrap();
        assert_eq!(b.class, vec![0, 1, 2, 1]);
        assert!(Relation::universal(3).is_universal());
    }

    #[test]
    fn equality_is_a_translation() {
        let b = model(3, &[(0, 1), (1, 2)], &[2, 3, 2]);
        let c0 = b.chamber(&[(1, 1), (0, 1)]).unwrap();
        let rels: Vec<Relation> = (0..3).map(|i| Relation::equality(b.q(i))).collect();
        let im = implode(&b, &rels, &c0, 3).unwrap();
        assert_eq!(im.types, vec![0, 1, 2]);
        let inv = b.inverse(&c0);
        for (c, t) in im.ball.chambers().iter().zip(&im.images) {
            assert_eq!(*t, b.multiply(&inv, c));
        }
    }

    #[test]
    fn universal_is_constant() {
        let b = model(2, &[(0, 1)], &[3, 2]);
        let rels = vec![Relation::universal(3), Relation::universal(2)];
        let im = implode(&b, &rels, &Chamber::base(), 3).unwrap();
        assert_eq!(im.target.rank(), 0);
        assert!(im.images.iter().all(Chamber::is_base));
    }

    #[test]
    fn agrees_with_bfs_construction() {
        let b = model(3, &[(0, 1), (1, 2)], &[3, 4, 2]);
        let rels = vec![
            Relation::from_labels(&[0, 1, 0]),
            Relation::from_labels(&[0, 0, 1, 1]),
            Relation::universal(2),
        ];
        let c0 = b.chamber(&[(1, 3), (2, 1), (0, 2)]).unwrap();
        let im = implode(&b, &rels, &c0, 3).unwrap();
        let (_, bfs) = implosion_by_bfs(&b, &rels, &c0, 3).unwrap();
        assert_eq!(im.images, bfs);
    }

    #[test]
    fn rejects_bad_relations() {
        let b = model(2, &[(0, 1)], &[3, 2]);
        assert!(implode(&b, &[Relation::equality(2), Relation::equality(2)], &Chamber::base(), 1).is_err());
        assert!(implode(&b, &[Relation::equality(3)], &Chamber::base(), 1).is_err());
    }
}
