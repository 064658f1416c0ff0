//! The parkour map on city product diagrams: the five clauses relating
//! homotopy and reducedness upstairs and downstairs, the substitution
//! table, and `r`-minimization against its oracle.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::right_angled_diagrams;
use super::words::all_words;
use crate::diagram::{city_product_diagrams, Diagram, IndexPartition};
use crate::error::Result;
use crate::parkour::{
    blocks, homotopy_effect, parkour_unchecked, r_minimize, r_minimize_oracle, swap_blocks, table_entry, Context,
};
use crate::report::{Check, Failure, Stats, VerifyReport};
use crate::wordcalc::{collapse, homotopy_class, is_reduced, NormalForm, Word, DEFAULT_CAP};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParkourConfig {
    /// Products with `|I|` from 2 up to this are enumerated.
    pub max_size: usize,
    /// Numbers of parts (ranks of `M`) to enumerate.
    pub parts: Vec<usize>,
    pub max_len: usize,
    pub cap: usize,
}

impl Default for ParkourConfig {
    fn default() -> Self {
        ParkourConfig {
            max_size: 5,
            parts: vec![2, 3],
            max_len: 6,
            cap: DEFAULT_CAP,
        }
    }
}

pub(crate) const STATEMENTS: [&str; 7] = [
    "parkour/homotopy-image-weakly-homotopic",
    "parkour/table-cells",
    "parkour/image-homotopy-lifts",
    "parkour/blocks-of-reduced-are-reduced",
    "parkour/reduced-blocks-and-image-give-reduced",
    "parkour/reduced-images-homotopic",
    "parkour/r-minimize-oracle",
];

/// A product diagram `N = ⋈_M(M_1, ..., M_n)` with its partition.
#[derive(Clone, Debug)]
pub struct ProductDiagram {
    pub m: Diagram,
    pub m_edges: Vec<(usize, usize)>,
    /// `true` for a factor whose indices pairwise have label `∞`.
    pub free: Vec<bool>,
    pub sizes: Vec<usize>,
    pub n: Diagram,
    pub partition: IndexPartition,
}

impl ProductDiagram {
    fn describe(&self) -> serde_json::Value {
        json!({"M_edges": self.m_edges, "sizes": self.sizes, "free_factors": self.free})
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every product with `|I| = size` and `parts` parts whose factors are
/// either edgeless or free (singletons counted once).
pub fn product_diagrams(size: usize, parts: usize) -> Vec<ProductDiagram> {
    let mut out = Vec::new();
    for sizes in compositions(size, parts) {
        let kinds: Vec<Vec<bool>> = sizes
            .iter()
            .map(|&s| if s == 1 { vec![false] } else { vec![false, true] })
            .collect();
        let mut choices: Vec<Vec<bool>> = vec![Vec::new()];
        for k in &kinds {
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    k.iter().map(move |&x| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        for (m_edges, m) in right_angled_diagrams(parts) {
            for free in &choices {
                let factors: Vec<Diagram> = sizes
                    .iter()
                    .zip(free)
                    .map(|(&s, &f)| {
                        if f {
                            Diagram::free(s).expect("rank ≥ 1")
                        } else {
                            Diagram::right_angled(s, &[]).expect("rank ≥ 1")
                        }
                    })
                    .collect();
                let (n, partition) = city_product_diagrams(&m, &factors).expect("valid factors");
                out.push(ProductDiagram {
                    m: m.clone(),
                    m_edges: m_edges.clone(),
                    free: free.clone(),
                    sizes: sizes.clone(),
                    n,
                    partition,
                });
            }
        }
    }
    out
}

/// Counts and the first failure, per statement.
#[derive(Default)]
struct Tally {
    counts: [usize; 7],
    failures: [Option<Failure>; 7],
    /// Observed `(before, after)` patterns per table cell.
    cells: BTreeMap<(Context, Context), BTreeMap<(String, String), usize>>,
}

impl Tally {
    fn record(&mut self, k: usize, ok: bool, failure: impl FnOnce() -> Failure) {
        self.counts[k] += 1;
        if !ok && self.failures[k].is_none() {
            self.failures[k] = Some(failure());
        }
    }

    fn check(&self, k: usize) -> Check {
        match &self.failures[k] {
            Some(f) => Err(f.clone()),
            None => Ok(Stats::new(self.counts[k])),
        }
    }

    /// Every observed cell shows only its tabulated substitution; with
    /// `require_all`, each of the nine cells must also have been observed.
    fn table_check(&self, require_all: bool) -> Check {
        if let Some(f) = &self.failures[1] {
            return Err(f.clone());
        }
        let all = [Context::A, Context::B, Context::C];
        for l in all {
            for r in all {
                let Some(seen) = self.cells.get(&(l, r)) else {
                    if !require_all {
                        continue;
                    }
                    return Err(Failure::new("table cell never exercised", json!({"left": format!("{l:?}"), "right": format!("{r:?}")})));
                };
                let (b, a) = table_entry(l, r);
                if seen.len() != 1 || !seen.contains_key(&(b.to_string(), a.to_string())) {
                    return Err(Failure::new(
                        "table cell produced another substitution",
                        json!({"left": format!("{l:?}"), "right": format!("{r:?}"), "expected": [b, a], "seen": seen.keys().collect::<Vec<_>>()}),
                    ));
                }
            }
        }
        let per_cell: Vec<String> = self
            .cells
            .iter()
            .map(|((l, r), seen)| {
                let (b, a) = table_entry(*l, *r);
                format!("{l:?}{r:?}:{b}⇝{a}×{}", seen.values().sum::<usize>())
            })
            .collect();
        Ok(Stats::with_note(self.counts[1], per_cell.join(" ")))
    }
}

fn check_product(pd: &ProductDiagram, maxlen: usize, cap: usize, t: &mut Tally) -> Result<()> {
    let (d, m, p) = (&pd.n, &pd.m, &pd.partition);
    let mut seen = std::collections::HashSet::new();
    for u in all_words(d.rank(), maxlen) {
        let reduced = is_reduced(&u, d)?;
        let bd = blocks(&u, p)?;
        let image = parkour_unchecked(&u, p);
        // clause 4, on every word
        if bd.blocks.iter().all(|b| is_reduced(&b.letters, d).unwrap_or(false)) && is_reduced(&image, m)? {
            t.record(4, reduced, || {
                Failure::new("blocks and image reduced but the word is not", json!({"product": pd.describe(), "u": u}))
            });
        }
        if !reduced || seen.contains(&u) {
            continue;
        }
        let class = homotopy_class(&u, d, cap)?;
        check_class(pd, &class, cap, t)?;
        seen.extend(class);
    }
    Ok(())
}

fn check_class(pd: &ProductDiagram, class: &std::collections::BTreeSet<Word>, cap: usize, t: &mut Tally) -> Result<()> {
    let (d, m, p) = (&pd.n, &pd.m, &pd.partition);
    let mut reduced_image: Option<(Word, std::collections::BTreeSet<Word>)> = None;
    let rep = class.iter().next().expect("nonempty");
    let oracle = r_minimize_oracle(rep, d, p, cap)?;
    for v in class {
        let rv = parkour_unchecked(v, p);
        // clause 1 and the table
        for s in 0..v.len().saturating_sub(1) {
            if v[s] == v[s + 1] || !d.commutes(v[s], v[s + 1]) {
                continue;
            }
            let mut w = v.clone();
            w.swap(s, s + 1);
            let rw = parkour_unchecked(&w, p);
            match homotopy_effect(v, p, s)? {
                None => t.record(0, rw == rv, || {
                    Failure::new("swap inside one part changed the image", json!({"product": pd.describe(), "u": v, "at": s}))
                }),
                Some(e) => {
                    let li = p.class_of(v[s]);
                    let lj = p.class_of(v[s + 1]);
                    let (b, a) = (e.pattern(&e.before, li), e.pattern(&e.after, li));
                    let assembled: Word = e.prefix.iter().chain(&e.after).chain(&e.suffix).copied().collect();
                    let ok = m.commutes(li, lj) && assembled == rw && b.contains('i') && b.contains('j') && a.contains('i') && a.contains('j');
                    t.record(0, ok, || {
                        Failure::new(
                            "image change is not a weak homotopy",
                            json!({"product": pd.describe(), "u": v, "at": s, "before": b, "after": a}),
                        )
                    });
                    let (tb, ta) = table_entry(e.left, e.right);
                    t.record(1, tb == b && ta == a, || {
                        Failure::new(
                            "substitution differs from the table",
                            json!({"product": pd.describe(), "u": v, "at": s, "cell": [format!("{:?}", e.left), format!("{:?}", e.right)], "got": [b, a], "table": [tb, ta]}),
                        )
                    });
                    *t.cells.entry((e.left, e.right)).or_default().entry((b, a)).or_default() += 1;
                }
            }
        }
        // clause 2
        for s in 0..rv.len().saturating_sub(1) {
            if !m.commutes(rv[s], rv[s + 1]) {
                continue;
            }
            let mut vv = rv.clone();
            vv.swap(s, s + 1);
            let lifted = swap_blocks(v, p, s)?;
            let ok = parkour_unchecked(&lifted, p) == collapse(&vv) && class.contains(&lifted);
            t.record(2, ok, || {
                Failure::new(
                    "homotopy of the image does not lift",
                    json!({"product": pd.describe(), "u": v, "image": rv, "at": s, "lifted": lifted}),
                )
            });
        }
        // clause 3
        for b in blocks(v, p)?.blocks {
            let ok = is_reduced(&b.letters, d)?;
            t.record(3, ok, || {
                Failure::new("a block of a reduced word is not reduced", json!({"product": pd.describe(), "u": v, "block": b.letters}))
            });
        }
        // clause 5
        if is_reduced(&rv, m)? {
            match &reduced_image {
                None => {
                    let c = homotopy_class(&rv, m, cap)?;
                    reduced_image = Some((rv.clone(), c));
                }
                Some((first, c)) => {
                    let ok = c.contains(&rv);
                    t.record(5, ok, || {
                        Failure::new(
                            "reduced images of homotopic words are not homotopic",
                            json!({"product": pd.describe(), "u": v, "image": rv, "other_image": first}),
                        )
                    });
                }
            }
        }
        let got = r_minimize(v, d, p)?;
        t.record(6, got == oracle, || {
            Failure::new("r_minimize differs from the oracle", json!({"product": pd.describe(), "u": v, "got": got, "oracle": oracle}))
        });
    }
    let ok = NormalForm::of(&oracle, d)? == NormalForm::of(rep, d)?;
    t.record(6, ok, || Failure::new("oracle left the class", json!({"product": pd.describe(), "u": rep})));
    Ok(())
}

pub(super) fn run(cfg: &super::Config) -> Vec<VerifyReport> {
    let pc = &cfg.parkour;
    let mut out = Vec::new();
    let mut total = Tally::default();
    let mut total_err = None;
    let mut total_millis = 0;
    for size in 2..=pc.max_size {
        let products: Vec<ProductDiagram> = pc
            .parts
            .iter()
            .filter(|&&n| n >= 1 && n <= size)
            .flat_map(|&n| product_diagrams(size, n))
            .collect();
        let instance = format!("|I| = {size}, {} products, |u| ≤ {}", products.len(), pc.max_len);
        let start = Instant::now();
        let mut tally = Tally::default();
        let mut err = None;
        for pd in &products {
            if let Err(e) = check_product(pd, pc.max_len, pc.cap, &mut tally) {
                err = Some(e);
                break;
            }
        }
        let millis = start.elapsed().as_millis();
        for (k, st) in STATEMENTS.iter().enumerate() {
            let result = match &err {
                Some(e) => Err(e.clone()),
                None if k == 1 => Ok(tally.table_check(false)),
                None => Ok(tally.check(k)),
            };
            out.push(VerifyReport::from_result(st, instance.clone(), result, millis));
        }
        total_millis += millis;
        total.counts[1] += tally.counts[1];
        if total.failures[1].is_none() {
            total.failures[1] = tally.failures[1].take();
        }
        for (cell, seen) in tally.cells {
            let merged = total.cells.entry(cell).or_default();
            for (pattern, n) in seen {
                *merged.entry(pattern).or_default() += n;
            }
        }
        total_err = total_err.or(err);
    }
    let result = match total_err {
        Some(e) => Err(e),
        None => Ok(total.table_check(true)),
    };
    out.push(VerifyReport::from_result(
        "parkour/table-coverage",
        format!("|I| ≤ {}, all nine cells", pc.max_size),
        result,
        total_millis,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_enumeration() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        // sizes (1,2),(2,1): 2 kinds each; 2 choices of M
        assert_eq!(product_diagrams(3, 2).len(), 8);
    }

    #[test]
    fn small_products_pass_all_clauses() {
        let mut t = Tally::default();
        for pd in product_diagrams(4, 2) {
            check_product(&pd, 5, DEFAULT_CAP, &mut t).unwrap();
        }
        for (k, name) in STATEMENTS.iter().enumerate().take(7) {
            if k != 1 {
                assert!(t.check(k).is_ok(), "{name}");
            }
        }
        assert!(t.counts.iter().all(|&c| c > 0));
    }
}
