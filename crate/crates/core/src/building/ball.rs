use std::collections::{HashMap, VecDeque};

use super::{BuildingModel, Chamber, PanelRef};
use crate::diagram::bits;
use crate::error::{Error, Result};

/// A panel as seen inside a ball.
#[derive(Clone, Debug)]
pub struct BallPanel {
    pub panel: PanelRef,
    /// Ball indices of the members inside the ball, increasing.
    pub members: Vec<usize>,
    /// All `q_i` members are in the ball.
    pub complete: bool,
}

/// The chambers at gallery distance at most `radius` from `center`, in BFS
/// order (by distance, then canonical order), with their panels.
#[derive(Clone, Debug)]
pub struct BallView {
    pub center: Chamber,
    pub radius: usize,
    chambers: Vec<Chamber>,
    dist: Vec<usize>,
    index: HashMap<Chamber, usize>,
    panels: Vec<BallPanel>,
    panel_of: Vec<Vec<usize>>,
}

impl BallView {
    pub fn new(model: &BuildingModel, center: &Chamber, radius: usize, cap: usize) -> Result<Self> {
        let mut chambers = vec![center.clone()];
        let mut dist = vec![0];
        let mut index = HashMap::from([(center.clone(), 0usize)]);
        let mut layer_start = 0;
        for r in 0..radius {
            let layer_end = chambers.len();
            let mut next = Vec::new();
            for c in &chambers[layer_start..layer_end] {
                for i in 0..model.rank() {
                    for a in 1..model.q(i) {
                        let d = model.step(c, i, a);
                        if !index.contains_key(&d) {
                            index.insert(d.clone(), usize::MAX);
                            next.push(d);
                        }
                    }
                }
                if index.len() > cap {
                    return Err(Error::BallTooLarge { radius, cap });
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            for d in next {
                index.insert(d.clone(), chambers.len());
                chambers.push(d);
                dist.push(r + 1);
            }
            layer_start = layer_end;
        }
        let mut panels: Vec<BallPanel> = Vec::new();
        let mut panel_index: HashMap<PanelRef, usize> = HashMap::new();
        let mut panel_of = vec![vec![usize::MAX; model.rank()]; chambers.len()];
        for (k, c) in chambers.iter().enumerate() {
            for (i, slot) in panel_of[k].iter_mut().enumerate() {
                let p = model.panel_ref(c, i);
                let pi = *panel_index.entry(p.clone()).or_insert_with(|| {
                    panels.push(BallPanel {
                        panel: p,
                        members: Vec::new(),
                        complete: false,
                    });
                    panels.len() - 1
                });
                panels[pi].members.push(k);
                *slot = pi;
            }
        }
        for p in &mut panels {
            p.complete = p.members.len() == model.q(p.panel.ty) as usize;
        }
        Ok(BallView {
            center: center.clone(),
            radius,
            chambers,
            dist,
            index,
            panels,
            panel_of,
        })
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn chamber(&self, k: usize) -> &Chamber {
        &self.chambers[k]
    }

    pub fn index_of(&self, c: &Chamber) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &Chamber) -> bool {
        self.index.contains_key(c)
    }

    /// Distance from the centre.
    pub fn dist(&self, k: usize) -> usize {
        self.dist[k]
    }

    pub fn panels(&self) -> &[BallPanel] {
        &self.panels
    }

    pub fn panel_of(&self, k: usize, i: usize) -> &BallPanel {
        &self.panels[self.panel_of[k][i]]
    }

    pub fn panel_index(&self, k: usize, i: usize) -> usize {
        self.panel_of[k][i]
    }

    /// Neighbours `(type, index)` of chamber `k` inside the ball.
    pub fn neighbors(&self, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.panel_of[k].iter().enumerate().flat_map(move |(i, &p)| {
            self.panels[p]
                .members
                .iter()
                .filter(move |&&m| m != k)
                .map(move |&m| (i, m))
        })
    }

    /// Typed edges `(u, v, type)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for p in &self.panels {
            for (a, &u) in p.members.iter().enumerate() {
                for &v in &p.members[a + 1..] {
                    out.push((u, v, p.panel.ty));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Gallery distances from chamber `k` using only chambers of the ball;
    /// `usize::MAX` marks chambers that cannot be reached.
    pub fn distances_from(&self, k: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.len()];
        d[k] = 0;
        let mut queue = VecDeque::from([k]);
        while let Some(u) = queue.pop_front() {
            for (_, v) in self.neighbors(u) {
                if d[v] == usize::MAX {
                    d[v] = d[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        d
    }
}

impl BuildingModel {
    /// The ball of radius `r` around `center`.
    pub fn ball(&self, center: &Chamber, r: usize) -> Result<BallView> {
        BallView::new(self, center, r, super::DEFAULT_BALL_CAP)
    }

    pub fn ball_capped(&self, center: &Chamber, r: usize, cap: usize) -> Result<BallView> {
        BallView::new(self, center, r, cap)
    }
}

/// The members of the `J`-residue of `c` within gallery distance `r` of `c`,
/// sorted; `J` is a bitmask of types.
pub fn residue(model: &BuildingModel, c: &Chamber, j: u64, r: usize) -> Vec<Chamber> {
    let mut seen = HashMap::from([(c.clone(), 0usize)]);
    let mut queue = VecDeque::from([c.clone()]);
    while let Some(x) = queue.pop_front() {
        let dx = seen[&x];
        if dx == r {
            continue;
        }
        for i in bits(j) {
            if i >= model.rank() {
                continue;
            }
            for a in 1..model.q(i) {
                let y = model.step(&x, i, a);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), dx + 1);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut out: Vec<Chamber> = seen.into_keys().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;

    fn model(n: usize, edges: &[(usize, usize)], q: &[u32]) -> BuildingModel {
        BuildingModel::new(Diagram::right_angled(n, edges).unwrap(), q.to_vec()).unwrap()
    }

    #[test]
    fn ball_sizes() {
        let tree = model(2, &[(0, 1)], &[2, 2]);
        assert_eq!(tree.ball(&Chamber::base(), 0).unwrap().len(), 1);
        assert_eq!(tree.ball(&Chamber::base(), 3).unwrap().len(), 7);
        let grid = model(2, &[], &[2, 3]);
        for r in 2..5 {
            assert_eq!(grid.ball(&Chamber::base(), r).unwrap().len(), 6);
        }
        let thick = model(2, &[(0, 1)], &[3, 3]);
        // 1 + 4 + 8 + 16
        assert_eq!(thick.ball(&Chamber::base(), 3).unwrap().len(), 29);
    }

    #[test]
    fn cap_is_enforced() {
        let thick = model(3, &[(0, 1), (1, 2), (0, 2)], &[3, 3, 3]);
        assert_eq!(
            thick.ball_capped(&Chamber::base(), 6, 100).unwrap_err(),
            Error::BallTooLarge { radius: 6, cap: 100 }
        );
    }

    #[test]
    fn distances_match_syllable_length() {
        let b = model(3, &[(0, 1), (1, 2)], &[2, 3, 2]);
        let ball = b.ball(&Chamber::base(), 3).unwrap();
        for (k, c) in ball.chambers().iter().enumerate() {
            assert_eq!(ball.dist(k), c.len());
        }
        assert_eq!(ball.distances_from(0), (0..ball.len()).map(|k| ball.dist(k)).collect::<Vec<_>>());
        for &(u, v, t) in &ball.edges() {
            assert_eq!(b.adjacent(ball.chamber(u), ball.chamber(v)), Some(t));
        }
    }

    #[test]
    fn residues() {
        let b = model(3, &[(0, 1)], &[2, 3, 2]);
        let base = Chamber::base();
        assert_eq!(residue(&b, &base, 0b101, 10).len(), 4);
        assert_eq!(residue(&b, &base, 0b110, 10).len(), 6);
        let all = residue(&b, &base, 0b111, 3);
        let ball = b.ball(&base, 3).unwrap();
        assert_eq!(all.len(), ball.len());
        let (_, members) = b.panel(&base, 1);
        assert_eq!(residue(&b, &base, 0b010, 5), {
            let mut m = members;
            m.sort();
            m
        });
    }
}
