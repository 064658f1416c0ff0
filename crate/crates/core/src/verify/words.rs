//! Word calculus: reducedness and normal forms against breadth-first
//! oracles, weak homotopies, the exchange condition and group laws.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::right_angled_diagrams;
use crate::diagram::Diagram;
use crate::ensure;
use crate::error::{Error, Result};
use crate::report::{Check, Stats, VerifyReport};
use crate::wordcalc::{
    collapse, homotopy_class, is_reduced, nf, normal_form, reduce, weak_homotopy_neighbors, NormalForm, Word,
    DEFAULT_CAP,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WordsConfig {
    /// Exhaustive checks run over every right-angled diagram of rank up to
    /// this and every word up to `max_len`.
    pub max_rank: usize,
    pub max_len: usize,
    pub weak_steps: usize,
    pub weak_pairs: usize,
    /// Samples for the exchange condition and the group laws.
    pub random_checks: usize,
    pub cap: usize,
}

impl Default for WordsConfig {
    fn default() -> Self {
        WordsConfig {
            max_rank: 4,
            max_len: 6,
            weak_steps: 10_000,
            weak_pairs: 1_000,
            random_checks: 2_000,
            cap: DEFAULT_CAP,
        }
    }
}

pub(super) fn run(cfg: &super::Config) -> Vec<VerifyReport> {
    let w = &cfg.words;
    let mut out = Vec::new();
    for n in 1..=w.max_rank {
        let instance = format!("rank {n}, {} diagrams, |w| ≤ {}", 1u64 << (n * (n - 1) / 2), w.max_len);
        out.push(VerifyReport::run("words/reduced-oracle", instance.clone(), || {
            reduced_matches_oracle(n, w.max_len, w.cap)
        }));
        out.push(VerifyReport::run("words/normal-form-minimum", instance, || {
            normal_form_is_class_minimum(n, w.max_len, w.cap)
        }));
    }
    let rank = w.max_rank.max(2);
    out.push(VerifyReport::run(
        "words/weak-step-collapsed-normal-form",
        format!("{} seeded steps, rank {rank}", w.weak_steps),
        || weak_steps(rank, w.max_len, w.weak_steps, cfg.seed),
    ));
    out.push(VerifyReport::run(
        "words/reduced-weakly-homotopic-are-homotopic",
        format!("{} seeded pairs, rank {rank}", w.weak_pairs),
        || weak_pairs(rank, w.max_len, w.weak_pairs, w.cap, cfg.seed),
    ));
    out.push(VerifyReport::run(
        "words/exchange-condition",
        format!("{} seeded words, rank {rank}", w.random_checks),
        || exchange(rank, w.max_len, w.random_checks, w.cap, cfg.seed),
    ));
    out.push(VerifyReport::run(
        "words/group-laws",
        format!("{} seeded triples, rank {rank}", w.random_checks),
        || group_laws(rank, w.max_len, w.random_checks, cfg.seed),
    ));
    out
}

/// All words over `0..n` of length at most `maxlen`, shortest first.
pub(crate) fn all_words(n: usize, maxlen: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..maxlen {
        let next: Vec<Word> = layer
            .iter()
            .flat_map(|w| {
                (0..n).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Runs `f` on each homotopy class of words up to `maxlen`, once per class.
fn for_each_class(
    d: &Diagram,
    maxlen: usize,
    cap: usize,
    mut f: impl FnMut(&Word, &std::collections::BTreeSet<Word>) -> Check,
) -> Result<Check> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut checked = 0;
    for w in all_words(d.rank(), maxlen) {
        if seen.contains(&w) {
            continue;
        }
        let class = homotopy_class(&w, d, cap)?;
        if let Err(e) = f(&w, &class) {
            return Ok(Err(e));
        }
        checked += class.len();
        seen.extend(class);
    }
    Ok(Ok(Stats::new(checked)))
}

fn reduced_matches_oracle(n: usize, maxlen: usize, cap: usize) -> Result<Check> {
    let mut checked = 0;
    for (edges, d) in right_angled_diagrams(n) {
        let r = for_each_class(&d, maxlen, cap, |_, class| {
            let oracle = class.iter().all(|v| v.windows(2).all(|p| p[0] != p[1]));
            for v in class {
                let fast = is_reduced(v, &d).expect("letters in range");
                ensure!(fast == oracle, "is_reduced disagrees with the oracle", {"edges": edges, "word": v, "fast": fast, "oracle": oracle});
            }
            Ok(Stats::new(class.len()))
        })?;
        match r {
            Ok(s) => checked += s.checked,
            Err(e) => return Ok(Err(e)),
        }
    }
    Ok(Ok(Stats::new(checked)))
}

fn normal_form_is_class_minimum(n: usize, maxlen: usize, cap: usize) -> Result<Check> {
    let mut checked = 0;
    for (edges, d) in right_angled_diagrams(n) {
        let r = for_each_class(&d, maxlen, cap, |_, class| {
            let min = class.iter().next().expect("nonempty");
            for v in class {
                let got = normal_form(v, &d).expect("letters in range");
                ensure!(&got == min, "normal form is not the least word of the class", {"edges": edges, "word": v, "normal_form": got, "minimum": min});
            }
            Ok(Stats::new(class.len()))
        })?;
        match r {
            Ok(s) => checked += s.checked,
            Err(e) => return Ok(Err(e)),
        }
    }
    Ok(Ok(Stats::new(checked)))
}

fn random_diagram(rng: &mut ChaCha8Rng, n: usize) -> (Vec<(usize, usize)>, Diagram) {
    let all = right_angled_diagrams(n);
    all[rng.gen_range(0..all.len())].clone()
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, maxlen: usize) -> Word {
    let len = rng.gen_range(0..=maxlen);
    (0..len).map(|_| rng.gen_range(0..n)).collect()
}

fn weak_steps(n: usize, maxlen: usize, steps: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77ea);
    let diagrams = right_angled_diagrams(n);
    let mut done = 0;
    let mut attempts = 0;
    while done < steps {
        attempts += 1;
        if attempts > 100 * steps.max(1) {
            return Err(Error::Precondition(format!("only {done} of {steps} weak steps found")));
        }
        let (edges, d) = &diagrams[rng.gen_range(0..diagrams.len())];
        let w = random_word(&mut rng, n, maxlen);
        let nb = weak_homotopy_neighbors(&w, d, w.len() + 2);
        if nb.is_empty() {
            continue;
        }
        let v = &nb[rng.gen_range(0..nb.len())];
        let (a, b) = (collapse(&nf(&w, d)), collapse(&nf(v, d)));
        ensure!(a == b, "a weak homotopy changed the collapsed normal form", {"edges": edges, "word": w, "image": v, "before": a, "after": b});
        done += 1;
    }
    Ok(Ok(Stats::with_note(done, format!("{attempts} draws"))))
}

fn weak_pairs(n: usize, maxlen: usize, pairs: usize, cap: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a125);
    let mut done = 0;
    let mut attempts = 0;
    while done < pairs {
        attempts += 1;
        if attempts > 200 * pairs.max(1) {
            return Err(Error::Precondition(format!("only {done} of {pairs} weakly homotopic pairs found")));
        }
        let (edges, d) = random_diagram(&mut rng, n);
        let w = reduce(&random_word(&mut rng, n, maxlen), &d)?;
        let bound = w.len() + 2;
        let mut cur = w.clone();
        let mut path = vec![cur.clone()];
        for _ in 0..rng.gen_range(1..=6) {
            let nb = weak_homotopy_neighbors(&cur, &d, bound);
            if nb.is_empty() {
                break;
            }
            cur = nb[rng.gen_range(0..nb.len())].clone();
            path.push(cur.clone());
        }
        if cur == w || !is_reduced(&cur, &d)? {
            continue;
        }
        let class = homotopy_class(&w, &d, cap)?;
        ensure!(
            class.contains(&cur),
            "reduced weakly homotopic words are not homotopic",
            {"edges": edges, "first": w, "second": cur, "weak_path": path}
        );
        done += 1;
    }
    Ok(Ok(Stats::with_note(done, format!("{attempts} draws"))))
}

fn exchange(n: usize, maxlen: usize, count: usize, cap: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe8c4);
    let mut premise = 0;
    for _ in 0..count {
        let (edges, d) = random_diagram(&mut rng, n);
        let w = reduce(&random_word(&mut rng, n, maxlen), &d)?;
        let i = rng.gen_range(0..n);
        let mut iw = vec![i];
        iw.extend_from_slice(&w);
        if is_reduced(&iw, &d)? {
            continue;
        }
        premise += 1;
        let class = homotopy_class(&w, &d, cap)?;
        ensure!(
            class.iter().any(|v| v.first() == Some(&i)),
            "iw is not reduced but no word homotopic to w starts with i",
            {"edges": edges, "word": w, "i": i}
        );
    }
    Ok(Ok(Stats::with_note(count, format!("{premise} with iw not reduced"))))
}

fn group_laws(n: usize, maxlen: usize, count: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a0b);
    for _ in 0..count {
        let (edges, d) = random_diagram(&mut rng, n);
        let (wa, wb, wc) = (
            random_word(&mut rng, n, maxlen),
            random_word(&mut rng, n, maxlen),
            random_word(&mut rng, n, maxlen),
        );
        let (a, b, c) = (NormalForm::of(&wa, &d)?, NormalForm::of(&wb, &d)?, NormalForm::of(&wc, &d)?);
        let left = a.multiply(&b, &d).multiply(&c, &d);
        let right = a.multiply(&b.multiply(&c, &d), &d);
        ensure!(left == right, "multiplication is not associative", {"edges": edges, "a": wa, "b": wb, "c": wc});
        ensure!(
            a.multiply(&a.invert(&d), &d).is_empty(),
            "a times its inverse is not the identity",
            {"edges": edges, "a": wa}
        );
        let cat: Word = wa.iter().chain(&wb).copied().collect();
        ensure!(
            NormalForm::of(&cat, &d)? == a.multiply(&b, &d),
            "the product disagrees with concatenation",
            {"edges": edges, "a": wa, "b": wb}
        );
    }
    Ok(Ok(Stats::new(count)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_enumeration() {
        assert_eq!(all_words(2, 3).len(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn small_batteries_pass() {
        assert!(reduced_matches_oracle(3, 4, DEFAULT_CAP).unwrap().is_ok());
        assert!(normal_form_is_class_minimum(3, 4, DEFAULT_CAP).unwrap().is_ok());
        assert!(weak_steps(3, 5, 200, 1).unwrap().is_ok());
        assert!(weak_pairs(3, 5, 50, DEFAULT_CAP, 1).unwrap().is_ok());
        assert!(exchange(3, 5, 200, DEFAULT_CAP, 1).unwrap().is_ok());
        assert!(group_laws(3, 5, 200, 1).unwrap().is_ok());
    }
}
