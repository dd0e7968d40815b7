use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use skein_core::corpus::load_corpus;
use skein_core::diagram::LinkDiagram;
use skein_core::homfly::{EngineOptions, HomflyEngine, DEFAULT_CAP};
use skein_core::par::Parallelism;
use skein_core::seifert::{self, BlockSign};
use skein_core::skein_tree::skein_tree_with_cap;
use skein_core::verify::{run_verification, Outcome, VerifyOptions};

/// HOMFLY polynomials, Seifert graphs and degree-bound checks for link
/// diagrams given as PD codes.
#[derive(Parser)]
#[command(name = "skein", version)]
struct Cli {
    /// Largest crossing count the engine accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Print only the essential result.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Seed for randomized property checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the HOMFLY polynomial and its degree data.
    Compute {
        /// PD code, or a file holding PD text or diagram JSON.
        input: String,
    },
    /// Print diagram statistics and the Seifert graph analysis.
    Analyze {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Verify every bound over a corpus.
    Verify {
        /// Corpus file (CSV or JSON), or `default` for the bundled one.
        #[arg(long, default_value = "default")]
        corpus: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        md: Option<PathBuf>,
        /// Skip the per-record property checks.
        #[arg(long)]
        no_properties: bool,
    },
    /// Export the skein resolution tree.
    SkeinTree {
        input: String,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read_diagram(input: &str) -> Result<LinkDiagram> {
    let path = Path::new(input);
    if !path.is_file() {
        return input.parse().with_context(|| format!("cannot parse PD code `{input}`"));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let d: LinkDiagram = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).with_context(|| format!("bad diagram JSON in {}", path.display()))?
    } else {
        text.trim().parse().with_context(|| format!("bad PD code in {}", path.display()))?
    };
    Ok(match (d.name(), path.file_stem()) {
        (None, Some(stem)) => d.with_name(stem.to_string_lossy()),
        _ => d,
    })
}

fn parallelism(cli: &Cli) -> Parallelism {
    if cli.sequential {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn compute(cli: &Cli, input: &str) -> Result<()> {
    let d = read_diagram(input)?;
    let engine = HomflyEngine::new(EngineOptions { cap: cli.cap, parallelism: parallelism(cli), ..Default::default() });
    let p = engine.homfly(&d)?;
    println!("{p}");
    if !cli.quiet {
        println!("min_deg_v = {}", p.min_deg_v()?);
        println!("max_deg_z = {}", p.max_deg_z()?);
        println!("h(v) = {}", p.highest_z_term()?);
    }
    Ok(())
}

fn analyze(cli: &Cli, input: &str, as_json: bool) -> Result<()> {
    let d = read_diagram(input)?;
    let st = d.stats();
    let g = seifert::analyze_diagram(&d);
    let sigma = seifert::split_traczyk_signature(&d).ok();
    if as_json {
        let out = json!({
            "name": d.name(),
            "stats": st,
            "graph": g,
            "alternating": d.is_alternating(),
            "reduced": d.is_reduced(),
            "signature": sigma,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("s={} c={} w={} s+={}", st.s, st.c, st.w, st.s_plus);
    if cli.quiet {
        return Ok(());
    }
    println!("components={} pieces={} self_linking={}", d.component_count(), st.diagram_components, st.self_linking);
    println!("{} block{}", g.blocks.len(), if g.blocks.len() == 1 { "" } else { "s" });
    for (i, b) in g.blocks.iter().enumerate() {
        let sign = match b.sign {
            BlockSign::Positive => "+",
            BlockSign::Negative => "-",
            BlockSign::Mixed => "mixed",
        };
        println!("  block {i}: sign={sign} rank={} vertices={} edges={}", b.rank, b.vertices.len(), b.edges.len());
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    println!(
        "homogeneous={} positive={} negative={} alternating={}",
        yn(g.is_homogeneous),
        yn(g.is_positive),
        yn(g.is_negative),
        yn(d.is_alternating())
    );
    match g.eps_rank_sum {
        Some(e) => println!("rank={} eps_rank_sum={e}", g.rank),
        None => println!("rank={}", g.rank),
    }
    if let Some(s) = sigma {
        println!("signature={s}");
    }
    Ok(())
}

fn verify(cli: &Cli, corpus: &Path, json_out: Option<&Path>, md_out: Option<&Path>, no_properties: bool) -> Result<bool> {
    let entries = load_corpus(corpus)?;
    let options = VerifyOptions {
        cap: cli.cap,
        parallelism: parallelism(cli),
        seed: cli.seed,
        property_checks: !no_properties,
        ..Default::default()
    };
    let summary = run_verification(&entries, &options);
    if let Some(path) = json_out {
        write(path, &summary.to_json())?;
    }
    if let Some(path) = md_out {
        write(path, &summary.to_markdown())?;
    }
    let c = &summary.counts;
    println!(
        "checked {} equalities {} strict {} holds {} violated {} skipped {} failed {}",
        c.checked, c.equalities, c.strict, c.holds, c.violated, c.skipped, c.failed
    );
    if !cli.quiet {
        for r in &summary.records {
            if let Outcome::Skipped { reason } | Outcome::Failed { reason } = &r.outcome {
                println!("  {}: {reason}", r.name);
            }
        }
        for (name, check) in summary.violations() {
            eprintln!("VIOLATED {name}: {check}");
        }
        let flagged: Vec<_> = summary.conjecture.iter().filter(|r| r.flagged).map(|r| r.name.as_str()).collect();
        println!("equality without positivity: {}", if flagged.is_empty() { "none".into() } else { flagged.join(", ") });
    }
    Ok(summary.is_success())
}

fn skein_tree(cli: &Cli, input: &str, dot: Option<&Path>, json_out: Option<&Path>) -> Result<()> {
    let d = read_diagram(input)?;
    let tree = skein_tree_with_cap(&d, cli.cap)?;
    if let Some(path) = dot {
        write(path, &tree.to_dot())?;
    }
    if let Some(path) = json_out {
        write(path, &tree.to_json())?;
    }
    if dot.is_none() && json_out.is_none() {
        print!("{}", tree.to_dot());
    } else if !cli.quiet {
        println!("{} nodes, {} leaves", tree.node_count(), tree.leaves().len());
        println!("{}", tree.leaf_sum());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Compute { input } => compute(cli, input)?,
        Command::Analyze { input, json } => analyze(cli, input, *json)?,
        Command::Verify { corpus, json, md, no_properties } => {
            return verify(cli, corpus, json.as_deref(), md.as_deref(), *no_properties)
        }
        Command::SkeinTree { input, dot, json } => skein_tree(cli, input, dot.as_deref(), json.as_deref())?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
