//! Verification batteries, one report per checked statement and instance.
//!
//! A suite runs a fixed list of statements over the instances named in a
//! [`Config`]. Every check is deterministic given the config and its seed.

mod building;
mod city;
mod parkour;
mod universal;
mod words;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::building::{BallView, BuildingModel, Chamber};
use crate::diagram::Diagram;
use crate::ensure;
use crate::error::{Error, Result};
use crate::report::{Check, Stats, VerifyReport};

pub use building::{check_building_axiom, check_semiregular, check_thin_cayley, BuildingConfig};
pub use city::{run_product, CityConfig, NamedProduct};
pub use parkour::ParkourConfig;
pub use universal::{
    example_one_groups, example_two_groups, run_instance, ApplicationConfig, UniversalConfig, UniversalInstance,
};
pub use words::WordsConfig;

/// All radii, caps, instances and the seed of a verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub words: WordsConfig,
    pub parkour: ParkourConfig,
    pub building: BuildingConfig,
    pub city: CityConfig,
    pub universal: UniversalConfig,
    pub application: ApplicationConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 2024,
            words: WordsConfig::default(),
            parkour: ParkourConfig::default(),
            building: BuildingConfig::default(),
            city: CityConfig::default(),
            universal: UniversalConfig::default(),
            application: ApplicationConfig::default(),
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("config: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Words,
    Parkour,
    Building,
    City,
    Universal,
    Application,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["words", "parkour", "building", "city", "universal", "application", "all"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "words" => Suite::Words,
            "parkour" => Suite::Parkour,
            "building" => Suite::Building,
            "city" => Suite::City,
            "universal" => Suite::Universal,
            "application" => Suite::Application,
            "all" => Suite::All,
            _ => return Err(Error::Malformed(format!("unknown suite {s:?}; expected one of {:?}", Suite::NAMES))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

/// Runs one suite, or all of them in a fixed order.
pub fn run_verify(suite: Suite, cfg: &Config) -> Vec<VerifyReport> {
    match suite {
        Suite::Words => words::run(cfg),
        Suite::Parkour => parkour::run(cfg),
        Suite::Building => building::run(cfg),
        Suite::City => city::run(cfg),
        Suite::Universal => universal::run(cfg),
        Suite::Application => universal::run_application(cfg),
        Suite::All => [
            Suite::Words,
            Suite::Parkour,
            Suite::Building,
            Suite::City,
            Suite::Universal,
            Suite::Application,
        ]
        .into_iter()
        .flat_map(|s| run_verify(s, cfg))
        .collect(),
    }
}

/// Every right-angled diagram on `n` indices, one per subset of pairs
/// (a pair in the subset gets label `∞`), in pattern order.
pub fn right_angled_diagrams(n: usize) -> Vec<(Vec<(usize, usize)>, Diagram)> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len())
        .map(|pattern| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| pattern >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let d = Diagram::right_angled(n, &edges).expect("valid pattern");
            (edges, d)
        })
        .collect()
}

/// All parameter vectors of length `n` with entries from `values`.
pub fn parameter_choices(n: usize, values: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `"q=(2,3) ∞:{0-1}"`, enough to rebuild the model.
pub fn describe(model: &BuildingModel) -> String {
    let d = model.diagram();
    let q: Vec<String> = model.params().iter().map(u32::to_string).collect();
    let mut inf = Vec::new();
    for i in 0..d.rank() {
        for j in i + 1..d.rank() {
            if d.infinite_mask(i) >> j & 1 == 1 {
                inf.push(format!("{}-{}", d.name(i), d.name(j)));
            }
        }
    }
    format!("q=({}) ∞:{{{}}}", q.join(","), inf.join(","))
}

/// `color(c, i)` is a legal coloring on the ball: injective on every
/// `i`-panel (onto `0..q_i` when the panel is complete) and constant on
/// every `j`-panel for `j ≠ i`.
pub fn check_coloring_legal(model: &BuildingModel, ball: &BallView, color: impl Fn(&Chamber, usize) -> u32) -> Check {
    let rank = model.rank();
    let colors: Vec<Vec<u32>> = ball.chambers().iter().map(|c| (0..rank).map(|i| color(c, i)).collect()).collect();
    for p in ball.panels() {
        let i = p.panel.ty;
        let own: HashSet<u32> = p.members.iter().map(|&k| colors[k][i]).collect();
        ensure!(
            own.len() == p.members.len() && own.iter().all(|&a| a < model.q(i)),
            "coloring is not injective on a panel of its own type",
            {"type": i, "anchor": p.panel.anchor}
        );
        for j in (0..rank).filter(|&j| j != i) {
            let first = colors[p.members[0]][j];
            ensure!(
                p.members.iter().all(|&k| colors[k][j] == first),
                "coloring is not constant on a panel of another type",
                {"type": j, "panel_type": i, "anchor": p.panel.anchor}
            );
        }
    }
    Ok(Stats::new(ball.panels().len()))
}

/// Folds a list of checks into one: the first failure, or the summed count.
pub(crate) fn all_of(checks: impl IntoIterator<Item = Check>) -> Check {
    let mut n = 0;
    for c in checks {
        n += c?.checked;
    }
    Ok(Stats::new(n))
}
