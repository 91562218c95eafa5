//! `geodetic`: generate problem instances, reduce them, solve small
//! cases exactly, re-audit reduction artifacts, and export graphs.
//!
//! Every command prints a line-oriented report ending in
//! `status: pass|fail` and exits 0 exactly on pass. Malformed input or
//! bad parameters go to stderr with exit code 2 instead.

mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use geodetic_core::convexity::is_geodetic;
use geodetic_core::graph::VertexId;
use geodetic_core::instances::{
    format_3dm, format_e3p3, gen_no_3dm, gen_planted_3dm, gen_random_e3p3, parse_3dm, parse_e3p3,
    solve_3dm_bruteforce, solve_sat_bruteforce,
};
use geodetic_core::io::{graph_to_dot, graph_to_graphml, parse_graph_file, write_graph_file};
use geodetic_core::reductions::{
    assert_construction, discrimination_check, pendant_cover_check, reduce_3dm_to_geodetic,
    reduce_e3p3sat_to_vc, search_strategy, simulate, structured_decision, AuditReport, Ratio,
    ReducedInstance, ReductionParams, SetPart, Symbol, DEFAULT_EPSILON, SEARCH_BUDGET,
};
use geodetic_core::smd::{
    min_strong_resolving_bruteforce, min_vertex_cover, min_vertex_cover_bruteforce,
    strong_metric_dimension, VERTEX_COVER_ORACLE_CAP,
};
use geodetic_core::solver::{min_geodetic, min_geodetic_bruteforce};
use report::{id_list, Report};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "geodetic", version, about = "Geodetic-set toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance file
    Gen {
        kind: GenKind,
        /// Elements per part (3dm) or variables per part (e3p3)
        #[arg(long)]
        n: u32,
        /// Family members or clauses; unused for no-instances
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a reduction artifact from an instance file
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        /// Path scale: an integer, or `auto` for the strict-mode minimum
        #[arg(long = "M", default_value = "auto")]
        scale: ScaleArg,
        /// Gap parameter for strict mode, as `num/den`
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: Ratio,
        /// Re-run the construction audit on the artifact and fail on any miss
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance exactly (small inputs only)
    Solve {
        problem: Problem,
        input: PathBuf,
        /// Cross-check the answer against the brute-force oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Re-check one promise of a reduction artifact
    Verify {
        target: VerifyTarget,
        input: PathBuf,
    },
    /// Convert a graph file to another format
    Export {
        input: PathBuf,
        #[arg(long)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// Matching family with a planted exact cover
    #[value(name = "3dm-planted")]
    ThreeDmPlanted,
    /// Matching family with no exact cover
    #[value(name = "3dm-no")]
    ThreeDmNo,
    /// Random part-split formula
    #[value(name = "e3p3")]
    E3p3,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    /// Matching family to geodetic-set question
    #[value(name = "3dm-gs")]
    ThreeDmGs,
    /// Part-split formula to vertex-cover question
    #[value(name = "e3p3-vc")]
    E3p3Vc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Geodetic,
    Smd,
    Vc,
    #[value(name = "3dm")]
    ThreeDm,
    Sat,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    PendantCover,
    Discrimination,
    Fvs13,
    MixedSearch,
    ForwardWitness,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Graphml,
    Edgelist,
}

#[derive(Clone, Copy)]
enum ScaleArg {
    Auto,
    Fixed(u64),
}

impl FromStr for ScaleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(ScaleArg::Auto);
        }
        s.parse()
            .map(ScaleArg::Fixed)
            .map_err(|_| format!("expected an integer or `auto`, got `{s}`"))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("geodetic: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { kind, n, m, seed, out } => cmd_gen(kind, n, m, seed, &out),
        Cmd::Reduce { kind, input, scale, epsilon, audit, out } => {
            cmd_reduce(kind, &input, scale, epsilon, audit, out)
        }
        Cmd::Solve { problem, input, oracle } => cmd_solve(problem, &input, oracle),
        Cmd::Verify { target, input } => cmd_verify(target, &input),
        Cmd::Export { input, format, out } => cmd_export(&input, format, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(report: &mut Report, path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    report.put("out", path.display());
    report.digest("out", text.as_bytes());
    Ok(())
}

fn cmd_gen(kind: GenKind, n: u32, m: Option<usize>, seed: u64, out: &Path) -> Result<ExitCode> {
    let mut report = Report::new("gen");
    report.put("seed", seed);
    let need_m = || m.ok_or_else(|| anyhow!("this kind needs --m"));
    let (label, text) = match kind {
        GenKind::ThreeDmPlanted => {
            ("3dm-planted", format_3dm(&gen_planted_3dm(n, need_m()?, seed)?))
        }
        GenKind::ThreeDmNo => ("3dm-no", format_3dm(&gen_no_3dm(n, seed)?)),
        GenKind::E3p3 => ("e3p3", format_e3p3(&gen_random_e3p3(n, need_m()?, seed)?)),
    };
    report.put("kind", label);
    report.put("n", n);
    if let Some(m) = m {
        report.put("m", m);
    }
    write_out(&mut report, out, &text)?;
    Ok(report.finish(true))
}

fn audit_lines(report: &mut Report, audit: &AuditReport) -> bool {
    for check in &audit.checks {
        report.put(
            format!("audit.{}", check.name),
            if check.pass { "pass".into() } else { format!("fail ({})", check.detail) },
        );
    }
    audit.all_pass()
}

fn cmd_reduce(
    kind: ReduceKind,
    input: &Path,
    scale: ScaleArg,
    epsilon: Ratio,
    audit: bool,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut report = Report::new("reduce");
    let text = read(input)?;
    report.put("input", input.display());
    report.digest("input", text.as_bytes());
    let out = out.unwrap_or_else(|| input.with_extension("graph"));

    let mut pass = true;
    match kind {
        ReduceKind::ThreeDmGs => {
            report.put("kind", "3dm-gs");
            let src = parse_3dm(&text)?;
            let params = match scale {
                ScaleArg::Auto => ReductionParams::strict_auto(src.n(), epsilon),
                ScaleArg::Fixed(v) => ReductionParams { scale: v, epsilon, strict: false },
            };
            let inst = reduce_3dm_to_geodetic(&src, &params)?;
            report.put("n", src.n());
            report.put("m", src.m());
            report.put("M", inst.params.scale);
            report.put("epsilon", inst.params.epsilon);
            report.put("strict", inst.params.strict);
            report.put("vertices", inst.graph.vertex_count());
            report.put("edges", inst.graph.edge_count());
            report.put("k", inst.k);
            if audit {
                pass = audit_lines(&mut report, &assert_construction(&inst));
            }
            write_out(&mut report, &out, &write_graph_file(&inst.to_graph_file()))?;
        }
        ReduceKind::E3p3Vc => {
            report.put("kind", "e3p3-vc");
            let f = parse_e3p3(&text)?;
            let inst = reduce_e3p3sat_to_vc(&f)?;
            report.put("n", f.n());
            report.put("m", f.m());
            report.put("vertices", inst.graph.vertex_count());
            report.put("edges", inst.graph.edge_count());
            report.put("k", inst.k);
            if audit {
                let n = u64::from(f.n());
                let m = f.m() as u64;
                let counts_ok = inst.graph.vertex_count() as u64 == 6 * n + 3 * m
                    && inst.graph.edge_count() as u64 == 3 * n + 6 * m
                    && inst.k == 3 * n + 2 * m;
                report.put("audit.counts", if counts_ok { "pass" } else { "fail" });
                pass = counts_ok;
            }
            write_out(&mut report, &out, &write_graph_file(&inst.to_graph_file()))?;
        }
    }
    Ok(report.finish(pass))
}

fn cmd_solve(problem: Problem, input: &Path, oracle: bool) -> Result<ExitCode> {
    let mut report = Report::new("solve");
    let text = read(input)?;
    report.put("input", input.display());
    report.digest("input", text.as_bytes());

    let mut pass = true;
    // pass stays true when no cross-check is requested; the value itself
    // is the answer
    let mut cross = |report: &mut Report, agree: bool| {
        report.put("oracle", if agree { "agree" } else { "disagree" });
        pass = agree;
    };

    match problem {
        Problem::Geodetic => {
            report.put("problem", "geodetic");
            let g = parse_graph_file(&text)?.graph;
            let best = min_geodetic(&g)?;
            report.put("value", best.len());
            report.put("witness", id_list(&best));
            if oracle {
                let brute = min_geodetic_bruteforce(&g)?;
                cross(&mut report, brute.len() == best.len());
            }
        }
        Problem::Smd => {
            report.put("problem", "smd");
            let g = parse_graph_file(&text)?.graph;
            let (value, witness) = strong_metric_dimension(&g)?;
            report.put("value", value);
            report.put("witness", id_list(&witness));
            if oracle {
                let brute = min_strong_resolving_bruteforce(&g)?;
                cross(&mut report, brute.len() == value);
            }
        }
        Problem::Vc => {
            report.put("problem", "vc");
            let file = parse_graph_file(&text)?;
            let best = min_vertex_cover(&file.graph)?;
            report.put("value", best.len());
            report.put("witness", id_list(&best));
            if let Some(k) = file.k {
                report.put("budget", k);
                report.put("within_budget", best.len() as u64 <= k);
            }
            if oracle {
                let brute = min_vertex_cover_bruteforce(&file.graph, VERTEX_COVER_ORACLE_CAP)?;
                cross(&mut report, brute.len() == best.len());
            }
        }
        Problem::ThreeDm => {
            report.put("problem", "3dm");
            let inst = parse_3dm(&text)?;
            match solve_3dm_bruteforce(&inst)? {
                Some(chosen) => {
                    report.put("answer", "yes");
                    report.put("chosen", id_list(&chosen));
                }
                None => report.put("answer", "no"),
            }
        }
        Problem::Sat => {
            report.put("problem", "sat");
            let f = parse_e3p3(&text)?;
            match solve_sat_bruteforce(&f)? {
                Some(asg) => {
                    report.put("answer", "yes");
                    let bits = |part: &[bool]| {
                        part.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" ")
                    };
                    report.put("assignment.alpha", bits(&asg.alpha));
                    report.put("assignment.beta", bits(&asg.beta));
                    report.put("assignment.gamma", bits(&asg.gamma));
                }
                None => report.put("answer", "no"),
            }
        }
    }
    Ok(report.finish(pass))
}

fn anchor_vertices(inst: &ReducedInstance) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = (1..=4).map(|i| inst.index.g(i)).collect();
    for sym in Symbol::ALL {
        for part in SetPart::ALL {
            out.push(inst.index.hub(sym, part));
        }
    }
    out
}

fn cmd_verify(target: VerifyTarget, input: &Path) -> Result<ExitCode> {
    let mut report = Report::new("verify");
    let text = read(input)?;
    report.put("input", input.display());
    report.digest("input", text.as_bytes());
    let inst = ReducedInstance::from_graph_file(&parse_graph_file(&text)?)
        .context("this command needs an artifact produced by `reduce 3dm-gs`")?;

    let pass = match target {
        VerifyTarget::PendantCover => {
            report.put("target", "pendant-cover");
            audit_lines(&mut report, &pendant_cover_check(&inst)?)
        }
        VerifyTarget::Discrimination => {
            report.put("target", "discrimination");
            audit_lines(&mut report, &discrimination_check(&inst)?)
        }
        VerifyTarget::Fvs13 => {
            report.put("target", "fvs13");
            let anchors = anchor_vertices(&inst);
            report.put("anchors", anchors.len());
            let forest = inst.graph.delete_vertices(&anchors)?.is_forest();
            report.put("forest_after_deletion", forest);
            forest && anchors.len() == 13
        }
        VerifyTarget::MixedSearch => {
            report.put("target", "mixed-search");
            let outcome = simulate(&inst.graph, &search_strategy(&inst))?;
            report.put("cleared", outcome.all_cleared);
            report.put("maxSearchers", outcome.max_searchers);
            report.put("budget", SEARCH_BUDGET);
            report.put("recontaminations", outcome.recontaminations);
            report.put("ops", outcome.ops_applied);
            outcome.all_cleared && outcome.max_searchers <= SEARCH_BUDGET
        }
        VerifyTarget::ForwardWitness => {
            report.put("target", "forward-witness");
            match structured_decision(&inst)? {
                Some(witness) => {
                    report.put("decision", "yes");
                    report.put("witnessSize", witness.len());
                    report.put("k", inst.k);
                    let check = is_geodetic(&inst.graph, &witness)?;
                    report.put("geodetic", check.is_geodetic);
                    check.is_geodetic && witness.len() as u64 == inst.k
                }
                None => {
                    report.put("decision", "no");
                    false
                }
            }
        }
    };
    Ok(report.finish(pass))
}

fn cmd_export(input: &Path, format: ExportFormat, out: Option<PathBuf>) -> Result<ExitCode> {
    let mut report = Report::new("export");
    let text = read(input)?;
    report.put("input", input.display());
    report.digest("input", text.as_bytes());
    let file = parse_graph_file(&text)?;
    report.put("vertices", file.graph.vertex_count());
    report.put("edges", file.graph.edge_count());

    let (label, ext, rendered) = match format {
        ExportFormat::Dot => ("dot", "dot", graph_to_dot(&file)),
        ExportFormat::Graphml => ("graphml", "graphml", graph_to_graphml(&file)),
        ExportFormat::Edgelist => ("edgelist", "edges", write_graph_file(&file)),
    };
    report.put("format", label);
    let out = out.unwrap_or_else(|| input.with_extension(ext));
    if out == input {
        bail!("refusing to overwrite the input; pass --out");
    }
    write_out(&mut report, &out, &rendered)?;
    Ok(report.finish(true))
}
