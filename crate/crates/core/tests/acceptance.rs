//! The ten acceptance criteria, one line each, on the default config.
//!
//! Tolerances: every criterion is exact (0 failures, no unknowns). Runtime
//! budgets: criterion 1 ≤ 60 s, criterion 3 ≤ 120 s, criterion 8 ≤ 600 s.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use racb_core::cityproduct::check_panel_sizes;
use racb_core::report::{Outcome, VerifyReport};
use racb_core::verify::{run_verify, Config, NamedProduct, Suite};

struct Run {
    reports: Vec<VerifyReport>,
    elapsed: Duration,
}

fn run(suite: Suite, cfg: &Config) -> Run {
    let start = Instant::now();
    let reports = run_verify(suite, cfg);
    Run { reports, elapsed: start.elapsed() }
}

/// Reports whose statement id is one of `ids`.
fn select<'a>(runs: &[&'a Run], ids: &[&str]) -> Vec<&'a VerifyReport> {
    runs.iter()
        .flat_map(|r| r.reports.iter())
        .filter(|r| ids.contains(&r.statement.as_str()))
        .collect()
}

struct Line {
    n: usize,
    what: &'static str,
    ok: bool,
    detail: String,
}

fn judge(n: usize, what: &'static str, reports: &[&VerifyReport], budget: Option<(Duration, Duration)>) -> Line {
    let bad: Vec<&&VerifyReport> = reports.iter().filter(|r| r.outcome != Outcome::Pass).collect();
    // A criterion with none of its statements present fails.
    let mut ok = !reports.is_empty() && bad.is_empty();
    let checked: usize = reports.iter().filter_map(|r| r.stats.as_ref()).map(|s| s.checked).sum();
    let mut detail = format!("{} reports, {checked} checks, {} not passing", reports.len(), bad.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first: {}", first.line()));
    }
    if let Some((took, limit)) = budget {
        detail.push_str(&format!("; {:.1} s of {} s", took.as_secs_f64(), limit.as_secs()));
        ok &= took <= limit;
    }
    Line { n, what, ok, detail }
}

/// Complete skeletal panels have exactly the size of their factor, and on
/// the thin square-edge product those sizes are 4 and 2.
fn skeletal_parameters(cfg: &Config) -> Line {
    let mut problems = Vec::new();
    for np in &cfg.city.products {
        let cp = np.spec.build().expect("product builds");
        let sv = cp.skeletal(cfg.city.radius).expect("window");
        match check_panel_sizes(&cp, &sv) {
            Ok((_, sizes)) => {
                for (l, f) in cp.factors.iter().enumerate() {
                    let want: Vec<usize> = f.size().into_iter().collect();
                    if sizes[l] != want {
                        problems.push(format!("{} part {l}: {:?} vs {want:?}", np.name, sizes[l]));
                    }
                }
                if np.name == NamedProduct::thin_square_edge().name && sizes != [vec![4], vec![2]] {
                    problems.push(format!("thin-square-edge sizes {sizes:?}"));
                }
            }
            Err(e) => problems.push(format!("{}: {}", np.name, e.what)),
        }
    }
    Line {
        n: 5,
        what: "skeletal panel sizes",
        ok: problems.is_empty(),
        detail: if problems.is_empty() { "all complete panels match".into() } else { problems.join("; ") },
    }
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let words = run(Suite::Words, &cfg);
    let parkour = run(Suite::Parkour, &cfg);
    let building = run(Suite::Building, &cfg);
    let city = run(Suite::City, &cfg);
    let universal = run(Suite::Universal, &cfg);
    let application = run(Suite::Application, &cfg);

    let words_exhaustive: Vec<&VerifyReport> =
        select(&[&words], &["words/reduced-oracle", "words/normal-form-minimum"]);
    let words_time: Duration = words_exhaustive.iter().map(|r| Duration::from_millis(r.millis as u64)).sum();
    let parkour_ids = [
        "parkour/homotopy-image-weakly-homotopic",
        "parkour/table-cells",
        "parkour/table-coverage",
        "parkour/image-homotopy-lifts",
        "parkour/blocks-of-reduced-are-reduced",
        "parkour/reduced-blocks-and-image-give-reduced",
        "parkour/reduced-images-homotopic",
        "parkour/r-minimize-oracle",
    ];
    let universal_ids = [
        "universal/portrait-membership",
        "universal/local-action-compatibility",
        "universal/iota-forward",
        "universal/iota-injective",
        "universal/iota-converse",
        "universal/mutants-rejected",
        "universal/skeletal-mutants-rejected",
        "universal/closure",
    ];
    let criterion5 = select(&[&city], &["city/skeletal-building", "city/skeletal-panel-sizes", "city/skeletal-model-isomorphism"]);
    let sizes = skeletal_parameters(&cfg);

    let lines = [
        judge(1, "word calculus against oracles", &words_exhaustive, Some((words_time, Duration::from_secs(60)))),
        judge(
            2,
            "weak homotopies",
            &select(&[&words], &["words/weak-step-collapsed-normal-form", "words/reduced-weakly-homotopic-are-homotopic"]),
            None,
        ),
        judge(3, "parkour clauses and table", &select(&[&parkour], &parkour_ids), Some((parkour.elapsed, Duration::from_secs(120)))),
        judge(4, "building axiom", &select(&[&building], &["building/axiom", "building/semiregular"]), None),
        {
            let mut l = judge(5, "skeletal buildings", &criterion5, None);
            l.ok &= sizes.ok;
            l.detail = format!("{}; {}", l.detail, sizes.detail);
            l
        },
        judge(
            6,
            "legal colorings",
            &select(
                &[&building, &city],
                &["building/coloring-legal", "city/coloring-legal", "city/lifted-coloring-legal", "city/skeletal-coloring-legal"],
            ),
            None,
        ),
        judge(7, "implosions", &select(&[&building], &["building/implosion-contract", "building/implosion-retraction"]), None),
        judge(8, "universal groups at ball scale", &select(&[&universal], &universal_ids), Some((universal.elapsed, Duration::from_secs(600)))),
        judge(
            9,
            "swapped-parameter isomorphisms",
            &select(
                &[&application],
                &[
                    "application/local-data",
                    "application/relabelled-local-groups",
                    "application/isomorphism",
                    "application/mismatched-parameters-rejected",
                ],
            ),
            None,
        ),
        judge(10, "reducible split", &select(&[&universal], &["universal/reducible-split"]), None),
    ];

    let mut all = true;
    for l in &lines {
        println!("criterion {:2} {}: {} ({})", l.n, if l.ok { "PASS" } else { "FAIL" }, l.what, l.detail);
        all &= l.ok;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
