//! `racb`: command-line front end for racb-core.
//!
//! Exit status: 0 pass, 1 some check failed, 2 only unknowns, 3 usage or
//! input error.

mod io;

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use racb_core::building::{implode, BuildingSpec, MergeRule, Relation};
use racb_core::export::{ball_graph, skeletal_graph, Format};
use racb_core::parkour::{blocks, parkour, r_minimize};
use racb_core::report::{exit_status, VerifyReport};
use racb_core::universal::{
    application_iso_check, application_local_data, check_membership, example_one, example_two, iota_check,
    sample_elements, ElementFile,
};
use racb_core::verify::{
    example_one_groups, example_two_groups, run_product, run_verify, Config, NamedProduct, Suite, UniversalInstance,
};
use racb_core::wordcalc::{
    are_equivalent, are_weakly_homotopic_bounded, default_maxlen, is_reduced, normal_form, reduce, DEFAULT_CAP,
};
use racb_core::{
    city_product_diagrams, decompose_as_city_product, diagram_symmetries, Chamber, Diagram, ProductSpec,
};
use serde_json::{json, Value};

use io::{parts_json, print, read_chamber, read_json, read_partition, read_word, word_json};

#[derive(Parser)]
#[command(name = "racb", version, about = "City products of right-angled buildings")]
struct Cli {
    /// JSON config with radii, caps, instances and seed.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Diagram products, decompositions and symmetries.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Normal forms, reducedness and homotopies of words.
    #[command(subcommand)]
    Word(WordCmd),
    /// Parkour maps, blocks and r-minimal words.
    #[command(subcommand)]
    Parkour(ParkourCmd),
    /// Balls, Weyl distances and implosions.
    #[command(subcommand)]
    Building(BuildingCmd),
    /// City products and skeletal windows.
    #[command(subcommand)]
    City(CityCmd),
    /// Universal group elements.
    #[command(subcommand)]
    Universal(UniversalCmd),
    /// Runs verification suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// The city product of `M` with the given factor diagrams.
    Product {
        #[arg(long = "M", alias = "m")]
        m: String,
        #[arg(long, num_args = 1.., required = true)]
        factors: Vec<String>,
    },
    /// A decomposition as a city product, if the diagram has one.
    Decompose { diagram: String },
    /// Label-preserving permutations of the indices.
    Symmetries { diagram: String },
}

#[derive(Args)]
struct WordArgs {
    #[arg(long)]
    diagram: String,
}

#[derive(Subcommand)]
enum WordCmd {
    Nf {
        #[command(flatten)]
        d: WordArgs,
        word: String,
    },
    Reduced {
        #[command(flatten)]
        d: WordArgs,
        word: String,
    },
    Equivalent {
        #[command(flatten)]
        d: WordArgs,
        first: String,
        second: String,
    },
    WeakHomotopic {
        #[command(flatten)]
        d: WordArgs,
        first: String,
        second: String,
        #[arg(long)]
        maxlen: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct ParkourArgs {
    #[arg(long)]
    diagram: String,
    /// `{"parts": [["1a", "1b"], ["2"]]}`, inline or as a file.
    #[arg(long)]
    partition: String,
    word: String,
}

#[derive(Subcommand)]
enum ParkourCmd {
    Map(ParkourArgs),
    Blocks(ParkourArgs),
    Rmin(ParkourArgs),
}

#[derive(Subcommand)]
enum BuildingCmd {
    Ball {
        #[arg(long)]
        building: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        export: Option<String>,
    },
    /// Weyl distance and gallery distance of two chambers.
    Delta {
        #[arg(long)]
        building: String,
        c: String,
        d: String,
    },
    Implode {
        #[arg(long)]
        building: String,
        /// `{"name": [[colors of a block], ...], ...}`; missing indices keep
        /// all colors apart.
        #[arg(long)]
        relations: String,
        #[arg(long, default_value = "[]")]
        centre: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
}

#[derive(Subcommand)]
enum CityCmd {
    /// The product diagram, its parts and parameters.
    Build {
        #[arg(long)]
        product: Option<String>,
    },
    Skeletal {
        #[arg(long)]
        product: Option<String>,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        export: Option<String>,
    },
    /// The city checks on one product.
    Verify {
        #[arg(long)]
        product: Option<String>,
        #[arg(long)]
        maxlen: Option<usize>,
    },
}

#[derive(Subcommand)]
enum UniversalCmd {
    /// Seeded portrait elements, as element files.
    Sample {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Membership of an element file in its universal group.
    Check { element: String },
    /// Forward check of the skeletal correspondence on sampled elements.
    Iota {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Isomorphism check for the swapped-parameter constructions.
    Application {
        #[arg(long, default_value_t = 1)]
        example: u8,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of words, parkour, building, city, universal, application, all.
    suite: String,
    /// Word length bound of the city checks.
    #[arg(long)]
    maxlen: Option<usize>,
    /// Mutation control; `overwrite` breaks the chamber merge rule.
    #[arg(long)]
    mutant: Option<String>,
}

struct Ctx {
    config: Config,
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            Config::from_json(&text)?
        }
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    let mut ctx = Ctx { config, json: cli.json };
    match cli.cmd {
        Cmd::Diagram(c) => diagram(&ctx, c).map(|_| 0),
        Cmd::Word(c) => word(&ctx, c).map(|_| 0),
        Cmd::Parkour(c) => parkour_cmd(&ctx, c).map(|_| 0),
        Cmd::Building(c) => building(&ctx, c).map(|_| 0),
        Cmd::City(c) => city(&mut ctx, c),
        Cmd::Universal(c) => universal(&ctx, c),
        Cmd::Verify(a) => verify(&mut ctx, a),
    }
}

fn diagram(ctx: &Ctx, c: DiagramCmd) -> Result<()> {
    match c {
        DiagramCmd::Product { m, factors } => {
            let m: Diagram = read_json(&m)?;
            let factors = factors.iter().map(|f| read_json(f)).collect::<Result<Vec<Diagram>>>()?;
            let (n, p) = city_product_diagrams(&m, &factors)?;
            println!("{}", serde_json::to_string_pretty(&json!({"diagram": n, "parts": parts_json(&p, &n)}))?);
        }
        DiagramCmd::Decompose { diagram } => {
            let d: Diagram = read_json(&diagram)?;
            let v = match decompose_as_city_product(&d)? {
                Some(dec) => json!({"M": dec.quotient, "parts": parts_json(&dec.partition, &d)}),
                None => Value::Null,
            };
            print(ctx.json, &v, || match &v {
                Value::Null => "prime: no decomposition".to_string(),
                v => serde_json::to_string_pretty(v).expect("json"),
            });
        }
        DiagramCmd::Symmetries { diagram } => {
            let d: Diagram = read_json(&diagram)?;
            let syms = diagram_symmetries(&d)?;
            let v: Vec<BTreeMap<String, String>> = syms
                .iter()
                .map(|s| (0..d.rank()).map(|i| (d.name(i).to_string(), d.name(s.apply(i)).to_string())).collect())
                .collect();
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
    }
    Ok(())
}

fn word(ctx: &Ctx, c: WordCmd) -> Result<()> {
    match c {
        WordCmd::Nf { d, word } => {
            let d: Diagram = read_json(&d.diagram)?;
            let w = read_word(&word, &d)?;
            let nf = normal_form(&w, &d)?;
            println!("{}", word_json(&nf, &d));
        }
        WordCmd::Reduced { d, word } => {
            let d: Diagram = read_json(&d.diagram)?;
            let w = read_word(&word, &d)?;
            let r = is_reduced(&w, &d)?;
            let v = json!({"reduced": r, "reduction": word_json(&reduce(&w, &d)?, &d)});
            print(ctx.json, &v, || r.to_string());
        }
        WordCmd::Equivalent { d, first, second } => {
            let d: Diagram = read_json(&d.diagram)?;
            let (a, b) = (read_word(&first, &d)?, read_word(&second, &d)?);
            let r = are_equivalent(&a, &b, &d)?;
            print(ctx.json, &json!({"equivalent": r}), || r.to_string());
        }
        WordCmd::WeakHomotopic { d, first, second, maxlen, cap } => {
            let d: Diagram = read_json(&d.diagram)?;
            let (a, b) = (read_word(&first, &d)?, read_word(&second, &d)?);
            let maxlen = maxlen.unwrap_or_else(|| default_maxlen(&a, &b));
            let r = are_weakly_homotopic_bounded(&a, &b, &d, maxlen, cap)?;
            let v = json!({"weakly_homotopic": r, "maxlen": maxlen, "cap": cap});
            print(ctx.json, &v, || v["weakly_homotopic"].as_str().unwrap_or("").to_string());
        }
    }
    Ok(())
}

fn parkour_cmd(ctx: &Ctx, c: ParkourCmd) -> Result<()> {
    let (a, kind) = match c {
        ParkourCmd::Map(a) => (a, 0),
        ParkourCmd::Blocks(a) => (a, 1),
        ParkourCmd::Rmin(a) => (a, 2),
    };
    let d: Diagram = read_json(&a.diagram)?;
    let p = read_partition(&a.partition, &d)?;
    let w = read_word(&a.word, &d)?;
    let v = match kind {
        0 => Value::from(parkour(&w, &p)?),
        1 => Value::from(
            blocks(&w, &p)?
                .blocks
                .iter()
                .map(|b| json!({"class": b.class, "word": word_json(&b.letters, &d)}))
                .collect::<Vec<_>>(),
        ),
        _ => word_json(&r_minimize(&w, &d, &p)?, &d),
    };
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{v}");
    }
    Ok(())
}

fn building(ctx: &Ctx, c: BuildingCmd) -> Result<()> {
    match c {
        BuildingCmd::Ball { building, radius, export } => {
            let model = read_json::<BuildingSpec>(&building)?.model()?;
            let ball = model.ball(&Chamber::base(), radius)?;
            match export {
                Some(f) => print!("{}", ball_graph(&model, &ball).render(f.parse::<Format>()?)),
                None => {
                    let v = json!({"radius": radius, "chambers": ball.len(),
                        "panels": ball.panels().len(), "complete_panels": ball.panels().iter().filter(|p| p.complete).count()});
                    print(ctx.json, &v, || {
                        format!("{} chambers within radius {radius}, {} panels", ball.len(), ball.panels().len())
                    });
                }
            }
        }
        BuildingCmd::Delta { building, c, d } => {
            let model = read_json::<BuildingSpec>(&building)?.model()?;
            let (x, y) = (read_chamber(&c, &model)?, read_chamber(&d, &model)?);
            let w = model.weyl_distance(&x, &y);
            let v = json!({"weyl_distance": word_json(w.word(), model.diagram()), "distance": model.distance(&x, &y)});
            print(ctx.json, &v, || v["weyl_distance"].to_string());
        }
        BuildingCmd::Implode { building, relations, centre, radius } => {
            let model = read_json::<BuildingSpec>(&building)?.model()?;
            let blocks: BTreeMap<String, Vec<Vec<u32>>> = read_json(&relations)?;
            let d = model.diagram();
            let mut rel: Vec<Relation> = (0..model.rank()).map(|i| Relation::equality(model.q(i))).collect();
            for (name, b) in &blocks {
                let i = d.index_of(name)?;
                rel[i] = Relation::from_blocks(model.q(i), b)?;
            }
            let c0 = read_chamber(&centre, &model)?;
            let imp = implode(&model, &rel, &c0, radius)?;
            let map: Vec<Value> = imp
                .ball
                .chambers()
                .iter()
                .zip(&imp.images)
                .map(|(c, t)| json!([c, t]))
                .collect();
            let v = json!({"target": BuildingSpec::from_model(&imp.target), "map": map});
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
    }
    Ok(())
}

fn product_arg(ctx: &Ctx, product: Option<String>) -> Result<NamedProduct> {
    match product {
        Some(p) => {
            let spec: ProductSpec = read_json(&p)?;
            Ok(NamedProduct { name: p.chars().take(40).collect(), spec })
        }
        None => ctx.config.city.products.first().cloned().ok_or_else(|| anyhow!("the config lists no products")),
    }
}

fn city(ctx: &mut Ctx, c: CityCmd) -> Result<u8> {
    match c {
        CityCmd::Build { product } => {
            let np = product_arg(ctx, product)?;
            let cp = np.spec.build()?;
            let d = cp.product.diagram();
            let v = json!({"diagram": d, "parts": parts_json(&cp.partition, d), "params": cp.product.params()});
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        CityCmd::Skeletal { product, radius, export } => {
            let np = product_arg(ctx, product)?;
            let cp = np.spec.build()?;
            let sv = cp.skeletal(radius)?;
            match export {
                Some(f) => print!("{}", skeletal_graph(&cp, &sv).render(f.parse::<Format>()?)),
                None => {
                    let v = json!({"radius": radius, "chambers": sv.ball.len(), "panels": sv.panels.len()});
                    print(ctx.json, &v, || {
                        format!("{} chambers, {} skeletal panels within radius {radius}", sv.ball.len(), sv.panels.len())
                    });
                }
            }
        }
        CityCmd::Verify { product, maxlen } => {
            if let Some(l) = maxlen {
                ctx.config.city.maxlen = l;
            }
            let products = match product {
                Some(_) => vec![product_arg(ctx, product)?],
                None => ctx.config.city.products.clone(),
            };
            let reports: Vec<VerifyReport> =
                products.iter().flat_map(|np| run_product(np, &ctx.config.city)).collect();
            return Ok(emit(ctx, &reports));
        }
    }
    Ok(0)
}

fn instance_arg(ctx: &Ctx, instance: Option<String>) -> Result<UniversalInstance> {
    match instance {
        Some(p) => read_json(&p),
        None => ctx.config.universal.instances.first().cloned().ok_or_else(|| anyhow!("the config lists no instances")),
    }
}

fn universal(ctx: &Ctx, c: UniversalCmd) -> Result<u8> {
    let seed = ctx.config.seed;
    let reach = ctx.config.universal.reach;
    match c {
        UniversalCmd::Sample { instance, radius, count } => {
            let (cp, f) = instance_arg(ctx, instance)?.build()?;
            let b = &cp.product;
            let files: Vec<ElementFile> = sample_elements(b, &f, radius, reach, seed, count)?
                .iter()
                .map(|(_, g)| ElementFile::new(b, &f, g))
                .collect();
            let v = if files.len() == 1 { serde_json::to_value(&files[0])? } else { serde_json::to_value(&files)? };
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(0)
        }
        UniversalCmd::Check { element } => {
            let file: ElementFile = read_json(&element)?;
            let (model, f, g) = file.load()?;
            let r = VerifyReport::run("universal/membership", element.clone(), || check_membership(&model, &g, &f));
            Ok(emit(ctx, &[r]))
        }
        UniversalCmd::Iota { instance, radius, count } => {
            let inst = instance_arg(ctx, instance)?;
            let (cp, f) = inst.build()?;
            let sv = cp.skeletal(radius)?;
            let els = sample_elements(&cp.product, &f, radius, reach, seed, count)?;
            let reports: Vec<VerifyReport> = els
                .iter()
                .enumerate()
                .map(|(k, (_, g))| {
                    VerifyReport::run("universal/iota-forward", format!("{} element {k}", inst.product.name), || {
                        iota_check(&cp, &f, g, &sv)
                    })
                })
                .collect();
            Ok(emit(ctx, &reports))
        }
        UniversalCmd::Application { example, radius, samples } => {
            let input = match example {
                1 => {
                    let (g, gp) = example_one_groups();
                    example_one(g, gp)?
                }
                2 => {
                    let [g1, g2, g1p, g2p, h] = example_two_groups();
                    example_two(g1, g2, g1p, g2p, h)?
                }
                k => bail!("--example must be 1 or 2, got {k}"),
            };
            let r = VerifyReport::run("application/isomorphism", format!("example {example}, radius {radius}"), || {
                application_iso_check(&application_local_data(&input)?, radius, seed, samples)
            });
            Ok(emit(ctx, &[r]))
        }
    }
}

fn verify(ctx: &mut Ctx, a: VerifyArgs) -> Result<u8> {
    let suite: Suite = a.suite.parse()?;
    if let Some(l) = a.maxlen {
        ctx.config.city.maxlen = l;
    }
    match a.mutant.as_deref() {
        None => {}
        Some("overwrite") => ctx.config.building.merge_rule = MergeRule::Overwrite,
        Some(other) => bail!("unknown mutant {other:?}; the only mutant is \"overwrite\""),
    }
    let reports = run_verify(suite, &ctx.config);
    Ok(emit(ctx, &reports))
}

fn emit(ctx: &Ctx, reports: &[VerifyReport]) -> u8 {
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(reports).expect("reports serialize"));
    } else {
        for r in reports {
            println!("{}", r.line());
        }
        let pass = reports.iter().filter(|r| r.passed()).count();
        println!("{pass}/{} passed", reports.len());
    }
    exit_status(reports) as u8
}
