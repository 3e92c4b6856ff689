use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use conlab_core::aset::{self, AsetConfig, AsetRun, Enumeration};
use conlab_core::con_iter::{con_iter, con_skeleton, con_star, unfold_finite};
use conlab_core::formula::{
    classify, distinct_nodes, godel_encode, parse, print, skeleton, Formula,
};
use conlab_core::gl::{gl_prove, lob_rule_check, BUDGET_ENV};
use conlab_core::gops::{self, GOperator};
use conlab_core::manifest::{sha256_hex, RunManifest};
use conlab_core::modal::parse_modal;
use conlab_core::suite::{run_suite, SuiteOptions, SUITES};
use conlab_core::{OrdNotation, Verdict};
use serde_json::json;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "conlab",
    version,
    about = "Iterated consistency, sentence trees and GL checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse an S-expression sentence and report its canonical form.
    Parse {
        /// File with one formula, or `-` for stdin.
        file: PathBuf,
    },
    /// Build Con^α(φ).
    ConIter {
        #[arg(long)]
        alpha: OrdNotation,
        #[arg(long)]
        phi: PathBuf,
        /// Print the finite unfolding and its skeleton instead (finite α).
        #[arg(long)]
        unfold: bool,
    },
    /// GL decision procedure on modal formulas.
    Gl {
        #[command(subcommand)]
        cmd: GlCmd,
    },
    /// The staged sentence tree.
    Aset {
        #[command(subcommand)]
        cmd: AsetCmd,
    },
    /// The operators g, g0 and g0*.
    G {
        #[command(subcommand)]
        cmd: GCmd,
    },
    /// Run a named verification suite (or `all`) and print a JSON report.
    Suite {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Treat undecided-at-budget checks as failures.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size report for a directory written by `aset run`.
    Stats { dir: PathBuf },
    /// Write the Con⋆ certificate and its replay trace.
    Export {
        #[arg(long)]
        alpha: OrdNotation,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GlCmd {
    /// Decide ⊢GL f (formula text, e.g. "box(box p -> p) -> box p").
    Prove { formula: String },
    /// Check Löb's rule on f.
    Lob { formula: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Rendered,
    Unfolded,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    alpha: OrdNotation,
    #[arg(long)]
    budget: u32,
    /// `godel`, `decidable`, or a file with one sentence per line (then
    /// continued in Gödel order).
    #[arg(long = "enum", default_value = "godel")]
    enumeration: String,
    #[arg(long, value_enum, default_value = "rendered")]
    form: Form,
}

#[derive(Subcommand)]
enum AsetCmd {
    Run {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GCmd {
    /// Print g(φ), or its truncation with `--truncate`.
    Apply {
        #[arg(long)]
        alpha: OrdNotation,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 0)]
        budget: u32,
        #[arg(long = "enum", default_value = "godel")]
        enumeration: String,
        #[arg(long)]
        truncate: bool,
        /// Use g0 (tree for α = 0, conjuncts conclude Con).
        #[arg(long)]
        g0: bool,
    },
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Instances of the main equivalences for a node of the run.
    Thm41 {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        dir: u8,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        budget: u32,
        #[arg(long = "enum", default_value = "decidable")]
        enumeration: String,
        /// Node id of θ (dir 1) or ψ (dir 2).
        #[arg(long, default_value_t = 0)]
        node: usize,
        /// Check the converse of direction 2 instead.
        #[arg(long)]
        converse: bool,
    },
    /// Con(φ) ↔ g0(φ) at the given budget (⊥ first in the enumeration).
    Prop51 {
        #[arg(long)]
        budget: u32,
    },
}

fn read_formula(path: &Path) -> Result<Formula> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse(text.trim())?)
}

fn enumeration(spec: &str) -> Result<Enumeration> {
    Ok(match spec {
        "godel" => Enumeration::Godel,
        "decidable" => Enumeration::Decidable,
        file => {
            let text = fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
            Enumeration::from_sexp_lines(&text)?
        }
    })
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json"));
}

fn verdict_exit(v: &Verdict) -> ExitCode {
    emit(&serde_json::to_value(v).expect("json"));
    if v.is_established() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_parse(file: &Path) -> Result<ExitCode> {
    let f = read_formula(file)?;
    let class = classify(&f).map(|c| c.to_string());
    let code = godel_encode(&f);
    emit(&json!({
        "canonical": print(&f),
        "sentence": f.is_sentence(),
        "class": class.as_ref().ok(),
        "class_error": class.as_ref().err().map(|e| e.to_string()),
        "code_bits": code.bits(),
        "code_sha256": sha256_hex(code.to_string().as_bytes()),
        "skeleton": f.is_sentence().then(|| skeleton(&f).to_string()),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_con_iter(alpha: &OrdNotation, phi: &Path, unfold: bool) -> Result<ExitCode> {
    let phi = read_formula(phi)?;
    if unfold {
        let u = unfold_finite(alpha, &phi)?;
        let n = alpha.as_finite().expect("checked by unfold_finite");
        emit(&json!({
            "alpha": alpha.to_string(),
            "unfolded": print(&u),
            "skeleton": con_skeleton(n, &phi).to_string(),
        }));
    } else {
        let s = con_iter(alpha, &phi)?;
        let text = print(&s.rendered);
        emit(&json!({
            "alpha": alpha.to_string(),
            "class": classify(&s.rendered)?.to_string(),
            "sentence": text,
            "sha256": sha256_hex(text.as_bytes()),
        }));
    }
    Ok(ExitCode::SUCCESS)
}

fn build_run(args: &RunArgs) -> Result<AsetRun> {
    let mut config = AsetConfig::new(
        args.alpha.clone(),
        enumeration(&args.enumeration)?,
        args.budget,
    );
    if let Form::Unfolded = args.form {
        config = config.unfolded();
    }
    Ok(aset::run_enumeration(&config)?)
}

fn write_outputs(dir: &Path, manifest: &mut RunManifest, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, contents) in files {
        fs::write(dir.join(name), contents)?;
        manifest.record(name, contents.as_bytes());
    }
    fs::write(dir.join("manifest.json"), manifest.to_json())?;
    Ok(())
}

fn cmd_aset_run(args: &RunArgs, out: &Path) -> Result<ExitCode> {
    let run = build_run(args)?;
    let formulas: String = run
        .formulas()
        .into_iter()
        .map(|(id, f)| format!("{id}\t{f}\n"))
        .collect();
    let enum_text: String = run.enumeration.iter().map(|f| print(f) + "\n").collect();
    let mut manifest = RunManifest::new("aset run")
        .config("alpha", &args.alpha)
        .config("budget", args.budget)
        .config("enumeration", &args.enumeration)
        .config("enumeration_sha256", sha256_hex(enum_text.as_bytes()))
        .config(
            "form",
            match args.form {
                Form::Rendered => "rendered",
                Form::Unfolded => "unfolded",
            },
        );
    write_outputs(
        out,
        &mut manifest,
        &[
            ("events.json", run.event_log_json()),
            ("formulas.tsv", formulas),
            ("enumeration.sexp", enum_text),
        ],
    )?;
    emit(&json!({ "nodes": run.len(), "out": out.display().to_string() }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(dir: &Path) -> Result<ExitCode> {
    let events = dir.join("events.json");
    let formulas = dir.join("formulas.tsv");
    if !events.exists() || !formulas.exists() {
        bail!("{} does not contain an aset run", dir.display());
    }
    let events: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(events)?)?;
    let mut per_stage: BTreeMap<u64, usize> = BTreeMap::new();
    for e in &events {
        *per_stage
            .entry(e["stage"].as_u64().context("stage field")?)
            .or_default() += 1;
    }
    let mut roots = Vec::new();
    for line in fs::read_to_string(formulas)?.lines() {
        let (_, text) = line.split_once('\t').context("malformed formulas.tsv")?;
        roots.push(parse(text)?);
    }
    let expanded: u64 = roots.iter().map(|f| f.info().size).sum();
    let distinct = distinct_nodes(&roots);
    emit(&json!({
        "numerated": roots.len(),
        "per_stage": per_stage,
        "distinct_nodes": distinct,
        "expanded_size": expanded,
        "sharing_ratio": expanded as f64 / distinct.max(1) as f64,
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(alpha: &OrdNotation, phi: &Path, out: &Path) -> Result<ExitCode> {
    let phi = read_formula(phi)?;
    let s = con_iter(alpha, &phi)?;
    let replay = con_star().replay(&[(1, alpha.code()), (2, godel_encode(&phi))])?;
    let mut manifest = RunManifest::new("export")
        .config("alpha", alpha)
        .config("phi_sha256", sha256_hex(print(&phi).as_bytes()));
    write_outputs(
        out,
        &mut manifest,
        &[
            ("sentence.sexp", print(&s.rendered) + "\n"),
            ("template.sexp", print(&con_star().template) + "\n"),
            ("replay.json", serde_json::to_string_pretty(&replay)?),
        ],
    )?;
    emit(&json!({ "replay_sha256": replay.sha256, "out": out.display().to_string() }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_g(cmd: &GCmd) -> Result<ExitCode> {
    match cmd {
        GCmd::Apply {
            alpha,
            phi,
            budget,
            enumeration: e,
            truncate,
            g0,
        } => {
            let phi = read_formula(phi)?;
            let op = if *g0 {
                GOperator::g0(enumeration(e)?, *budget)?
            } else {
                GOperator::new(alpha.clone(), enumeration(e)?, *budget)?
            };
            let f = if *truncate {
                op.truncate(&phi, *budget)?
            } else {
                op.apply(&phi)?
            };
            emit(&json!({
                "class": classify(&f)?.to_string(),
                "formula": print(&f),
                "skeleton": skeleton(&f).to_string(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        GCmd::Verify {
            what:
                Verify::Thm41 {
                    dir,
                    alpha,
                    budget,
                    enumeration: e,
                    node,
                    converse,
                },
        } => {
            let op = GOperator::new(OrdNotation::finite(*alpha), enumeration(e)?, *budget)?;
            if *node >= op.run.len() {
                bail!("node {node} is not in the run ({} nodes)", op.run.len());
            }
            let theta = op.run.node(*node).numerated.clone();
            let v = match (dir, converse) {
                (1, _) => gops::verify_thm41_dir1(&op, &theta)?,
                (_, false) => gops::verify_thm41_dir2(&op, &theta)?,
                (_, true) => {
                    let phi = Formula::and(theta.clone(), op.con_of(&theta));
                    gops::verify_thm41_converse(&op, &phi)?
                }
            };
            Ok(verdict_exit(&v))
        }
        GCmd::Verify {
            what: Verify::Prop51 { budget },
        } => {
            let e = Enumeration::curated(vec![Formula::bot()]);
            let op = GOperator::g0(e, *budget)?;
            Ok(verdict_exit(&gops::verify_prop51(&op)?))
        }
    }
}

fn cmd_suite(
    name: &str,
    options: SuiteOptions,
    strict: bool,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else {
        vec![name]
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for n in names {
        let r = run_suite(n, &options)?;
        ok &= r.passed(strict);
        reports.push(r);
    }
    let text = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(&reports)?
    };
    match out {
        Some(path) => fs::write(path, &text)?,
        None => println!("{text}"),
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Parse { file } => cmd_parse(&file),
        Cmd::ConIter { alpha, phi, unfold } => cmd_con_iter(&alpha, &phi, unfold),
        Cmd::Gl { cmd } => {
            let (GlCmd::Prove { formula } | GlCmd::Lob { formula }) = &cmd;
            let f = parse_modal(formula)?;
            let v = match cmd {
                GlCmd::Prove { .. } => gl_prove(&f),
                GlCmd::Lob { .. } => lob_rule_check(&f),
            };
            emit(&serde_json::to_value(&v)?);
            Ok(if v.is_undecided() {
                eprintln!("hint: raise {BUDGET_ENV} for a larger search");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Aset {
            cmd: AsetCmd::Run { run, out },
        } => cmd_aset_run(&run, &out),
        Cmd::G { cmd } => cmd_g(&cmd),
        Cmd::Suite {
            name,
            seed,
            budget,
            max_size,
            strict,
            out,
        } => {
            let options = SuiteOptions {
                seed,
                budget,
                max_size,
            };
            cmd_suite(&name, options, strict, out.as_deref())
        }
        Cmd::Stats { dir } => cmd_stats(&dir),
        Cmd::Export { alpha, phi, out } => cmd_export(&alpha, &phi, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
