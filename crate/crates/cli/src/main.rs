//! The jumpsys command line: validate instances, run the solvers, run
//! the verification sweeps, and generate corpus instances.
//!
//! Exit codes: 0 success / all checks pass, 1 property violation,
//! 2 malformed input or inapplicable request. Verification sweeps honor
//! `RAYON_NUM_THREADS` for worker count.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use jumpsys_cli::gen::{
    box_instance, dm_enum_instances, filtered_instance, graph_instance, ObjectiveKind,
};
use jumpsys_cli::instance::{
    load_instance_file, subset_from_elements, DmInstance, JscInstance, LoadedInstance,
};
use jumpsys_cli::schema::InstanceDoc;
use jumpsys_cli::tracefile::{
    algorithm_from_name, dm_trace_to_doc, doc_to_dm_trace, doc_to_trace, parse_trace_doc, render,
    trace_to_doc,
};
use jumpsys_cli::CliError;
use jumpsys_core::delta_matroid::{
    dm_greedy, dm_refined_greedy, format_subset, verify_corollary3_sweep, verify_corollary3_trace,
    DmProfile,
};
use jumpsys_core::geometry::Point;
use jumpsys_core::oracle::{
    run_sweep, verify_bounds, verify_corollary1, verify_monotone,
    verify_refined2_terminates_optimal, OptimalityProfile, SweepCheck,
};
use jumpsys_core::solver::{
    jsc_greedy, jsc_refined_greedy, jsc_refined_greedy2, JscAlgorithm, RunSet, TStarPolicy,
    TieBreak, Trace, DEFAULT_BRANCH_CAP,
};

#[derive(Parser)]
#[command(
    name = "jumpsys",
    version,
    about = "Greedy minimization on jump systems and delta-matroids, with geodesic verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Greedy,
    Refined,
    Refined2,
    DmGreedy,
    DmRefined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TieArg {
    Lex,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TPolicyArg {
    Best,
    Worst,
    First,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Box,
    Graph,
    Filtered,
    DmEnum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ObjArg {
    Linear,
    Quadratic,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check the exchange axiom and objective convexity of an instance.
    Validate { instance: PathBuf },
    /// Run a solver and optionally record the trace.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "lex")]
        tie: TieArg,
        /// t*-selection for the original greedy algorithm only.
        #[arg(long, value_enum)]
        tpolicy: Option<TPolicyArg>,
        /// Override the instance's start: "0,0" (point) or "1,2" (set).
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Annotate the trace with oracle-computed µ values.
        #[arg(long)]
        annotate_mu: bool,
    },
    /// Run verification checks; sweeps when no trace is given.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Comma-separated: thm1,thm2,thm3,thm4,thm5,cor1,cor2,cor3,all
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// Emit instance files for corpus building.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dimension (box, filtered) or ground-set size (dm-enum).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Box side or filtered sampling box side.
        #[arg(long, default_value_t = 2)]
        side: i64,
        #[arg(long, default_value_t = 3)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        edges: usize,
        /// Points sampled per filtered-explicit candidate.
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, value_enum, default_value = "quadratic")]
        objective: ObjArg,
        /// Degree contributed by a loop in graph instances (2 or 1).
        #[arg(long, default_value_t = 2)]
        loop_convention: u8,
    },
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            println!("{e}");
            std::process::ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { instance } => validate(&instance),
        Command::Solve {
            instance,
            algo,
            tie,
            tpolicy,
            start,
            out,
            annotate_mu,
        } => solve(&instance, algo, tie, tpolicy, start, out, annotate_mu),
        Command::Verify {
            instance,
            trace,
            checks,
        } => verify(&instance, trace.as_deref(), &checks),
        Command::Gen {
            kind,
            seed,
            out,
            n,
            side,
            vertices,
            edges,
            points,
            objective,
            loop_convention,
        } => gen(
            kind,
            seed,
            out,
            n,
            side,
            vertices,
            edges,
            points,
            objective,
            loop_convention,
        ),
    }
}

fn validate(path: &Path) -> Result<(), CliError> {
    match load_instance_file(path)? {
        LoadedInstance::Jsc(inst) => {
            if let Err(cx) = inst.system.verify_jexc() {
                return Err(CliError::Violation(format!("exchange axiom fails: {cx}")));
            }
            if let Err(v) = inst.objective.verify_convexity() {
                return Err(CliError::Violation(format!(
                    "objective is not convex at coordinate {}, breakpoint {}",
                    v.coordinate, v.breakpoint
                )));
            }
            println!(
                "ok: jump system with {} points in dimension {}, psi {}",
                inst.system.len(),
                inst.system.dimension(),
                inst.system.psi()
            );
            Ok(())
        }
        LoadedInstance::Dm(inst) => {
            if let Err(cx) = inst.matroid.verify_symmetric_exchange() {
                return Err(CliError::Violation(format!(
                    "symmetric exchange axiom fails: {cx}"
                )));
            }
            println!(
                "ok: delta-matroid with {} feasible sets over {} elements",
                inst.matroid.family().len(),
                inst.matroid.ground_size()
            );
            Ok(())
        }
    }
}

fn parse_point(text: &str) -> Result<Point, CliError> {
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Malformed(format!("bad point {text:?}")))?;
    Ok(Point::new(coords))
}

fn jsc_start(inst: &JscInstance, flag: Option<&str>) -> Result<Point, CliError> {
    let point = match flag {
        Some(text) => parse_point(text)?,
        None => inst
            .start
            .clone()
            .ok_or_else(|| CliError::Malformed("no start point given".into()))?,
    };
    match jumpsys_core::jump_system::JumpSystem::contains(&inst.system, &point) {
        Ok(true) => Ok(point),
        Ok(false) => Err(CliError::Malformed(format!(
            "start point {point} is not in the system"
        ))),
        Err(e) => Err(CliError::Malformed(e.to_string())),
    }
}

fn dm_start(inst: &DmInstance, flag: Option<&str>) -> Result<u32, CliError> {
    let mask = match flag {
        Some(text) => {
            let elements = if text.trim().is_empty() {
                Vec::new()
            } else {
                text.split(',')
                    .map(|c| c.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| CliError::Malformed(format!("bad set {text:?}")))?
            };
            subset_from_elements(&elements, inst.matroid.ground_size())?
        }
        None => inst
            .start
            .ok_or_else(|| CliError::Malformed("no start set given".into()))?,
    };
    if !inst.matroid.is_feasible(mask) {
        return Err(CliError::Malformed(format!(
            "start set {} is not in the family",
            format_subset(mask)
        )));
    }
    Ok(mask)
}

fn solve(
    path: &Path,
    algo: AlgoArg,
    tie: TieArg,
    tpolicy: Option<TPolicyArg>,
    start: Option<String>,
    out: Option<PathBuf>,
    annotate_mu: bool,
) -> Result<(), CliError> {
    if tpolicy.is_some() && algo != AlgoArg::Greedy {
        return Err(CliError::Malformed(
            "--tpolicy applies only to --algo greedy".into(),
        ));
    }
    let loaded = load_instance_file(path)?;
    match (&loaded, algo) {
        (LoadedInstance::Jsc(inst), AlgoArg::Greedy | AlgoArg::Refined | AlgoArg::Refined2) => {
            solve_jsc(inst, algo, tie, tpolicy, start.as_deref(), out, annotate_mu)
        }
        (LoadedInstance::Dm(inst), AlgoArg::DmGreedy | AlgoArg::DmRefined) => {
            solve_dm(inst, algo, start.as_deref(), out)
        }
        (LoadedInstance::Jsc(_), _) => Err(CliError::Malformed(
            "delta-matroid algorithm requested on a jump-system instance".into(),
        )),
        (LoadedInstance::Dm(_), _) => Err(CliError::Malformed(
            "jump-system algorithm requested on a delta-matroid instance".into(),
        )),
    }
}

fn solve_jsc(
    inst: &JscInstance,
    algo: AlgoArg,
    tie: TieArg,
    tpolicy: Option<TPolicyArg>,
    start: Option<&str>,
    out: Option<PathBuf>,
    annotate_mu: bool,
) -> Result<(), CliError> {
    let x0 = jsc_start(inst, start)?;
    let tie_break = match tie {
        TieArg::Lex => TieBreak::Lex,
        TieArg::All => TieBreak::EnumerateAll,
    };
    let policy = match tpolicy.unwrap_or(TPolicyArg::Best) {
        TPolicyArg::Best => TStarPolicy::Best,
        TPolicyArg::Worst => TStarPolicy::Worst,
        TPolicyArg::First => TStarPolicy::First,
        TPolicyArg::All => TStarPolicy::EnumerateAll,
    };
    let enumerating = tie == TieArg::All || tpolicy == Some(TPolicyArg::All);
    let runs: RunSet = match algo {
        AlgoArg::Greedy => jsc_greedy(
            &inst.system,
            &inst.objective,
            &x0,
            tie_break,
            policy,
            DEFAULT_BRANCH_CAP,
        ),
        AlgoArg::Refined => jsc_refined_greedy(
            &inst.system,
            &inst.objective,
            &x0,
            tie_break,
            DEFAULT_BRANCH_CAP,
        ),
        AlgoArg::Refined2 => jsc_refined_greedy2(
            &inst.system,
            &inst.objective,
            &x0,
            tie_break,
            DEFAULT_BRANCH_CAP,
        ),
        _ => unreachable!(),
    }
    .map_err(|e| CliError::Malformed(e.to_string()))?;

    if enumerating {
        if out.is_some() {
            return Err(CliError::Malformed(
                "trace output requires deterministic policies (--tie lex, --tpolicy not all)"
                    .into(),
            ));
        }
        let mut finals: Vec<String> = runs
            .traces
            .iter()
            .map(|t| t.final_point.to_string())
            .collect();
        finals.sort();
        finals.dedup();
        println!(
            "branches {}{}; final points {}; final value {}",
            runs.traces.len(),
            if runs.truncated { " (truncated)" } else { "" },
            finals.join(" "),
            runs.traces[0].final_value,
        );
        return Ok(());
    }

    let trace = runs.into_single();
    println!(
        "final {} value {} steps {}",
        trace.final_point,
        trace.final_value,
        trace.len()
    );
    if let Some(out_path) = out {
        let mu = if annotate_mu {
            let profile = OptimalityProfile::build(&inst.system, &inst.objective)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            Some(trace.points().iter().map(|p| profile.mu(p)).collect())
        } else {
            None
        };
        let tie_name = match tie {
            TieArg::Lex => "lex",
            TieArg::All => "all",
        };
        let tpolicy_name = tpolicy.map(|p| match p {
            TPolicyArg::Best => "best",
            TPolicyArg::Worst => "worst",
            TPolicyArg::First => "first",
            TPolicyArg::All => "all",
        });
        let doc = trace_to_doc(&trace, &inst.digest, tie_name, tpolicy_name, mu);
        write_text(&out_path, &render(&doc))?;
    }
    Ok(())
}

fn solve_dm(
    inst: &DmInstance,
    algo: AlgoArg,
    start: Option<&str>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let n = inst.matroid.ground_size();
    let (trace, algo_name) = match algo {
        AlgoArg::DmGreedy => {
            let (set, cost) = dm_greedy(&inst.matroid, &inst.weights)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            let trace = jumpsys_core::delta_matroid::DmTrace {
                start: set,
                steps: Vec::new(),
                final_set: set,
                final_cost: cost,
            };
            (trace, "dm-greedy")
        }
        AlgoArg::DmRefined => {
            let f0 = dm_start(inst, start)?;
            let trace = dm_refined_greedy(&inst.matroid, &inst.weights, f0)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            (trace, "dm-refined")
        }
        _ => unreachable!(),
    };
    println!(
        "final {} cost {} steps {}",
        format_subset(trace.final_set),
        trace.final_cost,
        trace.len()
    );
    if let Some(out_path) = out {
        let doc = dm_trace_to_doc(&trace, n, &inst.digest, algo_name);
        write_text(&out_path, &render(&doc))?;
    }
    Ok(())
}

fn parse_checks(text: &str) -> Result<Vec<String>, CliError> {
    let known = [
        "thm1", "thm2", "thm3", "thm4", "thm5", "cor1", "cor2", "cor3",
    ];
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item == "all" {
            return Ok(vec!["all".to_string()]);
        }
        if !known.contains(&item) {
            return Err(CliError::Malformed(format!("unknown check {item:?}")));
        }
        out.push(item.to_string());
    }
    if out.is_empty() {
        return Err(CliError::Malformed("no checks requested".into()));
    }
    Ok(out)
}

fn verify(path: &Path, trace_path: Option<&Path>, checks: &str) -> Result<(), CliError> {
    let loaded = load_instance_file(path)?;
    let requested = parse_checks(checks)?;
    let all = requested == ["all"];
    match &loaded {
        LoadedInstance::Jsc(inst) => {
            let names: Vec<&str> = if all {
                vec!["thm1", "thm2", "thm3", "thm4", "thm5", "cor1", "cor2"]
            } else {
                if requested.iter().any(|c| c == "cor3") {
                    return Err(CliError::Malformed(
                        "cor3 applies to delta-matroid instances".into(),
                    ));
                }
                requested.iter().map(String::as_str).collect()
            };
            let trace = trace_path.map(|p| load_jsc_trace(p, inst)).transpose()?;
            verify_jsc(inst, trace.as_ref(), &names)
        }
        LoadedInstance::Dm(inst) => {
            if !all && requested.iter().any(|c| c != "cor3") {
                return Err(CliError::Malformed(
                    "only cor3 applies to delta-matroid instances".into(),
                ));
            }
            let trace = trace_path.map(|p| load_dm_trace(p, inst)).transpose()?;
            verify_dm(inst, trace.as_ref())
        }
    }
}

fn load_jsc_trace(path: &Path, inst: &JscInstance) -> Result<Trace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let doc = parse_trace_doc(&text)?;
    if doc.instance_digest != inst.digest {
        return Err(CliError::Malformed(format!(
            "trace was recorded against digest {}, instance has {}",
            doc.instance_digest, inst.digest
        )));
    }
    algorithm_from_name(&doc.algorithm)?;
    let trace = doc_to_trace(&doc)?;
    trace
        .check_consistency(&inst.system, &inst.objective)
        .map_err(CliError::Violation)?;
    Ok(trace)
}

fn load_dm_trace(
    path: &Path,
    inst: &DmInstance,
) -> Result<jumpsys_core::delta_matroid::DmTrace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let doc = parse_trace_doc(&text)?;
    if doc.instance_digest != inst.digest {
        return Err(CliError::Malformed(format!(
            "trace was recorded against digest {}, instance has {}",
            doc.instance_digest, inst.digest
        )));
    }
    if doc.algorithm != "dm-refined" && doc.algorithm != "dm-greedy" {
        return Err(CliError::Malformed(format!(
            "expected a delta-matroid trace, got {:?}",
            doc.algorithm
        )));
    }
    doc_to_dm_trace(&doc, inst.matroid.ground_size())
}

fn verify_jsc(inst: &JscInstance, trace: Option<&Trace>, names: &[&str]) -> Result<(), CliError> {
    let profile = OptimalityProfile::build(&inst.system, &inst.objective)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let mut failures = 0usize;
    for name in names {
        let verdict: Result<(), String> = match (*name, trace) {
            ("thm2", Some(t)) => {
                if t.algorithm != JscAlgorithm::Greedy {
                    return Err(CliError::Malformed(
                        "thm2 on a trace needs a greedy trace".into(),
                    ));
                }
                verify_bounds(&inst.system, &profile, t).map_err(|v| v.to_string())
            }
            ("cor2", Some(t)) => {
                if t.algorithm != JscAlgorithm::Refined {
                    return Err(CliError::Malformed(
                        "cor2 on a trace needs a refined trace".into(),
                    ));
                }
                verify_bounds(&inst.system, &profile, t).map_err(|v| v.to_string())
            }
            ("thm3", Some(t)) => verify_monotone(&inst.objective, t).map_err(|v| v.to_string()),
            ("cor1", Some(t)) => {
                let report = verify_corollary1(&profile, t);
                if let Some(k) = report.first_violation {
                    let step = &report.steps[k];
                    Err(format!(
                        "step {k}: µ {} -> {} (expected drop {}), M* recursion {}{}",
                        step.mu_before,
                        step.mu_after,
                        step.expected_drop,
                        if step.m_star_recursion_ok {
                            "ok"
                        } else {
                            "broken"
                        },
                        if report.algorithm_mismatch {
                            "; trace is not from the refined algorithm"
                        } else {
                            ""
                        }
                    ))
                } else {
                    Ok(())
                }
            }
            (name, _) => {
                let check = match name {
                    "thm1" => SweepCheck::Theorem1,
                    "thm2" => SweepCheck::Theorem2,
                    "thm3" => SweepCheck::Theorem3,
                    "thm4" => SweepCheck::Theorem4,
                    "thm5" => SweepCheck::Theorem5,
                    "cor1" => SweepCheck::Corollary1,
                    "cor2" => SweepCheck::Corollary2,
                    _ => unreachable!("checks validated earlier"),
                };
                run_sweep(check, &inst.system, &inst.objective, &profile)
                    .map_err(|v| v.to_string())
                    .and_then(|()| {
                        if check == SweepCheck::Theorem1 {
                            verify_refined2_terminates_optimal(
                                &inst.system,
                                &inst.objective,
                                &profile,
                            )
                            .map_err(|v| v.to_string())
                        } else {
                            Ok(())
                        }
                    })
            }
        };
        match verdict {
            Ok(()) => println!("check {name}: pass"),
            Err(detail) => {
                failures += 1;
                println!("check {name}: FAIL — {detail}");
            }
        }
    }
    if failures > 0 {
        Err(CliError::Violation(format!("{failures} check(s) failed")))
    } else {
        Ok(())
    }
}

fn verify_dm(
    inst: &DmInstance,
    trace: Option<&jumpsys_core::delta_matroid::DmTrace>,
) -> Result<(), CliError> {
    let verdict: Result<(), String> = match trace {
        Some(t) => DmProfile::build(&inst.matroid, &inst.weights)
            .map_err(|e| e.to_string())
            .and_then(|profile| verify_corollary3_trace(&profile, t).map_err(|v| v.to_string())),
        None => verify_corollary3_sweep(&inst.matroid, &inst.weights).map_err(|v| v.to_string()),
    };
    match verdict {
        Ok(()) => {
            println!("check cor3: pass");
            Ok(())
        }
        Err(detail) => {
            println!("check cor3: FAIL — {detail}");
            Err(CliError::Violation("1 check(s) failed".into()))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: GenKind,
    seed: u64,
    out: Option<PathBuf>,
    n: usize,
    side: i64,
    vertices: usize,
    edges: usize,
    points: usize,
    objective: ObjArg,
    loop_convention: u8,
) -> Result<(), CliError> {
    let obj_kind = match objective {
        ObjArg::Linear => ObjectiveKind::Linear,
        ObjArg::Quadratic => ObjectiveKind::Quadratic,
        ObjArg::Table => ObjectiveKind::Table,
    };
    match kind {
        GenKind::DmEnum => {
            let docs = dm_enum_instances(n)?;
            let mut text = String::new();
            for doc in &docs {
                text.push_str(
                    &serde_json::to_string(doc).map_err(|e| CliError::Malformed(e.to_string()))?,
                );
                text.push('\n');
            }
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        _ => {
            let doc: InstanceDoc = match kind {
                GenKind::Box => box_instance(n, side, obj_kind, seed)?,
                GenKind::Graph => graph_instance(vertices, edges, obj_kind, seed, loop_convention)?,
                GenKind::Filtered => filtered_instance(n, side, points, obj_kind, seed)?,
                GenKind::DmEnum => unreachable!(),
            };
            let mut text = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            text.push('\n');
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}
