use std::io::Write;
use std::path::Path;

use anyhow::{bail, Result};
use lupi::solver::{distinct_roots, solve_from_all_starts};
use lupi::*;
use serde::Serialize;

use crate::profile::{self, parse_strategy_arg, LoadedProfile, ProfileDocument};
use crate::render::{join, join_picks, significant, write_csv, write_json, Format};
use crate::{Command, EXIT_NOT_CONVERGED, EXIT_NOT_NASH, EXIT_OK};

const ROOT_RADIUS: f64 = 1e-8;

pub(crate) fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { n, model, tol, max_iter, all_starts, write_profile, format } => {
            let options =
                SolverOptions { tolerance: tol, max_iterations: max_iter, ..SolverOptions::default() };
            solve(n, model.into(), &options, all_starts, write_profile.as_deref(), format.format, out)
        }
        Command::Table { max_n, format } => table(max_n, format.format, out),
        Command::Verify { profile, eps, model, format } => {
            verify(&profile::load(&profile)?, eps, model.into(), format.format, out)
        }
        Command::Payoff { profile, format } => payoff(&profile::load(&profile)?, format.format, out),
        Command::BestResponse { n, others, model, format } => {
            best_response_cmd(n, &others, model.into(), format.format, out)
        }
        Command::Approx { n, write_profile, format } => {
            approx(n, write_profile.as_deref(), format.format, out)
        }
        Command::Simulate { profile, rounds, seed, format } => {
            simulate_cmd(&profile::load(&profile)?, rounds, seed, format.format, out)
        }
    }
}

fn symmetric_document(strategy: &MixedStrategy) -> ProfileDocument {
    let profile = StrategyProfile::symmetric(strategy.clone()).expect("strategy length is n");
    ProfileDocument::from_profile(&profile, None)
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    n: usize,
    #[serde(flatten)]
    result: &'a SolveResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    distinct_roots: Option<Vec<&'a SolveResult>>,
}

fn solve(
    n: usize,
    model: Model,
    options: &SolverOptions,
    all_starts: bool,
    write_profile: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let spec = GameSpec::new(n)?;
    let result = solve_symmetric(spec, model, options)?;
    let attempts = if all_starts { Some(solve_from_all_starts(spec, model, options)?) } else { None };
    let roots = attempts.as_deref().map(|a| distinct_roots(a, ROOT_RADIUS));

    if let Some(path) = write_profile {
        if !result.converged {
            bail!("refusing to write a profile: the solver did not converge");
        }
        profile::save(path, &symmetric_document(&result.strategy))?;
    }

    match format {
        Format::Json => write_json(out, &SolveOutput { n, result: &result, distinct_roots: roots.clone() })?,
        Format::Csv => {
            let mut header: Vec<String> =
                ["model", "n", "converged", "interior", "iterations", "residual_norm", "spread", "payoff"]
                    .map(String::from)
                    .to_vec();
            header.extend((1..=n).map(|k| format!("p{k}")));
            let row = |r: &SolveResult| {
                let mut row = vec![
                    r.model.to_string(),
                    n.to_string(),
                    r.converged.to_string(),
                    r.interior.to_string(),
                    r.iterations.to_string(),
                    r.residual_norm.to_string(),
                    r.spread.to_string(),
                    r.payoff.to_string(),
                ];
                row.extend(r.strategy.probs().iter().map(f64::to_string));
                row
            };
            let rows = match &roots {
                Some(roots) => roots.iter().map(|r| row(r)).collect(),
                None => vec![row(&result)],
            };
            write_csv(out, &header, &rows)?;
        }
        Format::Text => {
            writeln!(out, "model:         {}", result.model)?;
            writeln!(out, "n:             {n}")?;
            writeln!(out, "strategy:      ({})", join(result.strategy.probs(), 9))?;
            writeln!(out, "payoff:        {:.9}", result.payoff)?;
            writeln!(
                out,
                "residual norm: {:.3e} (tolerance {:.0e})",
                result.residual_norm, result.tolerance
            )?;
            writeln!(out, "spread:        {:.3e}", result.spread)?;
            writeln!(out, "iterations:    {} (start {})", result.iterations, result.start)?;
            writeln!(out, "converged:     {}", result.converged)?;
            if result.converged && !result.interior {
                writeln!(
                    out,
                    "warning:       root lies on the simplex boundary; full support does not hold"
                )?;
            }
            if let Some(roots) = &roots {
                let tried = attempts.as_ref().map_or(0, Vec::len);
                writeln!(out, "distinct roots over {tried} starts: {}", roots.len())?;
                for r in roots {
                    writeln!(out, "  ({}) payoff {:.9}", join(r.strategy.probs(), 9), r.payoff)?;
                }
            }
        }
    }
    Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

#[derive(Serialize)]
struct TableRow {
    source: &'static str,
    values: Vec<Option<f64>>,
    rounded: Vec<Option<String>>,
}

#[derive(Serialize)]
struct TableOutput {
    n: Vec<usize>,
    rows: Vec<TableRow>,
}

fn table(max_n: usize, format: Format, out: &mut dyn Write) -> Result<i32> {
    let ns: Vec<usize> = (3..=max_n).collect();
    let specs: Vec<GameSpec> = ns.iter().map(|&n| GameSpec::new(n)).collect::<Result<_, _>>()?;
    let approx = specs.iter().map(|&s| approx_payoff(s).map(Some)).collect::<Result<Vec<_>, _>>()?;
    let reference = specs.iter().map(|&s| Some(zeng_baseline(s))).collect();
    let mut exact = Vec::with_capacity(ns.len());
    for &spec in &specs {
        if spec.n() > 4 {
            exact.push(None);
            continue;
        }
        let r = solve_paper_symmetric(spec, &SolverOptions::default())?;
        if !r.converged {
            bail!("symmetric solve for n = {} did not converge", spec.n());
        }
        exact.push(Some(r.payoff));
    }
    let rows: Vec<TableRow> = [("approx", approx), ("reference", reference), ("exact", exact)]
        .into_iter()
        .map(|(source, values): (&'static str, Vec<Option<f64>>)| TableRow {
            source,
            rounded: values.iter().map(|v| v.map(|x| significant(x, 3))).collect(),
            values,
        })
        .collect();

    match format {
        Format::Json => write_json(out, &TableOutput { n: ns, rows })?,
        Format::Csv => {
            let mut header = vec!["source".to_string()];
            header.extend(ns.iter().map(|n| n.to_string()));
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.source.to_string()];
                    row.extend(r.rounded.iter().map(|c| c.clone().unwrap_or_default()));
                    row
                })
                .collect();
            write_csv(out, &header, &body)?;
        }
        Format::Text => {
            write!(out, "{:<10}", "n")?;
            for n in &ns {
                write!(out, "{n:>9}")?;
            }
            writeln!(out)?;
            for r in &rows {
                write!(out, "{:<10}", r.source)?;
                for c in &r.rounded {
                    write!(out, "{:>9}", c.as_deref().unwrap_or(""))?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn verify(
    loaded: &LoadedProfile,
    eps: f64,
    model: Model,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let report = verify_profile_under(&loaded.profile, eps, model)?;
    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let header = [
                "player",
                "label",
                "payoff",
                "best_response_value",
                "gain",
                "best_responses",
                "indifferent_deviations",
                "is_nash",
            ]
            .map(String::from);
            let mut rows: Vec<Vec<String>> = report
                .players
                .iter()
                .map(|p| {
                    vec![
                        (p.player + 1).to_string(),
                        loaded.labels[p.player].clone(),
                        p.payoff.to_string(),
                        p.best_response_value.to_string(),
                        p.gain.to_string(),
                        join_picks(&p.best_responses),
                        join_picks(&p.indifferent_deviations),
                        (p.gain <= report.epsilon).to_string(),
                    ]
                })
                .collect();
            rows.push(vec![
                "total".into(),
                String::new(),
                report.payoff_sum.to_string(),
                String::new(),
                report.max_gain.to_string(),
                String::new(),
                String::new(),
                report.is_nash.to_string(),
            ]);
            write_csv(out, &header, &rows)?;
        }
        Format::Text => {
            writeln!(out, "model: {}   epsilon: {:e}", report.model, report.epsilon)?;
            writeln!(
                out,
                "{:<12} {:>12} {:>12} {:>12}  {:<14} indifferent",
                "player", "payoff", "best resp.", "gain", "best picks"
            )?;
            for p in &report.players {
                writeln!(
                    out,
                    "{:<12} {:>12.9} {:>12.9} {:>12.3e}  {:<14} {}",
                    loaded.labels[p.player],
                    p.payoff,
                    p.best_response_value,
                    p.gain,
                    join_picks(&p.best_responses),
                    join_picks(&p.indifferent_deviations)
                )?;
            }
            writeln!(
                out,
                "payoff sum: {:.9}{}",
                report.payoff_sum,
                if report.is_payoff_sum_maximal { " (maximal: Pareto optimal)" } else { "" }
            )?;
            if report.is_nash {
                let kind = if report.weak { " (weak: indifferent deviations exist)" } else { "" };
                writeln!(out, "verdict: Nash equilibrium{kind}")?;
            } else {
                writeln!(out, "verdict: not a Nash equilibrium")?;
                for p in report.players.iter().filter(|p| p.gain > report.epsilon) {
                    writeln!(
                        out,
                        "  {} gains {:.9} by switching to pick {}",
                        loaded.labels[p.player],
                        p.gain,
                        join_picks(&p.best_responses)
                    )?;
                }
            }
        }
    }
    Ok(if report.is_nash { EXIT_OK } else { EXIT_NOT_NASH })
}

#[derive(Serialize)]
struct PayoffOutput<'a> {
    labels: &'a [String],
    payoffs: &'a PayoffVector,
    payoff_sum: f64,
}

fn payoff(loaded: &LoadedProfile, format: Format, out: &mut dyn Write) -> Result<i32> {
    let payoffs = exact_profile_payoffs(&loaded.profile);
    match format {
        Format::Json => write_json(
            out,
            &PayoffOutput { labels: &loaded.labels, payoffs: &payoffs, payoff_sum: payoffs.sum() },
        )?,
        Format::Csv => {
            let header = ["player", "label", "payoff"].map(String::from);
            let mut rows: Vec<Vec<String>> = payoffs
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| vec![(i + 1).to_string(), loaded.labels[i].clone(), v.to_string()])
                .collect();
            rows.push(vec!["total".into(), String::new(), payoffs.sum().to_string()]);
            write_csv(out, &header, &rows)?;
        }
        Format::Text => {
            for (label, v) in loaded.labels.iter().zip(payoffs.values()) {
                writeln!(out, "{label:<12} {v:.12}")?;
            }
            writeln!(out, "{:<12} {:.12}", "sum", payoffs.sum())?;
        }
    }
    Ok(EXIT_OK)
}

fn best_response_cmd(
    n: usize,
    others: &[String],
    model: Model,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    if others.len() != n - 1 {
        bail!("--others needs {} strategies for n = {n}, got {}", n - 1, others.len());
    }
    let strategies = others
        .iter()
        .enumerate()
        .map(|(i, s)| parse_strategy_arg(i + 1, n, s))
        .collect::<Result<Vec<_>>>()?;
    let br = best_response_under(GameSpec::new(n)?, &strategies, model)?;
    match format {
        Format::Json => write_json(out, &br)?,
        Format::Csv => {
            let header = ["pick", "value", "is_best"].map(String::from);
            let rows: Vec<Vec<String>> = br
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    vec![(i + 1).to_string(), v.to_string(), br.argmax.contains(&(i + 1)).to_string()]
                })
                .collect();
            write_csv(out, &header, &rows)?;
        }
        Format::Text => {
            for (i, v) in br.values.iter().enumerate() {
                let mark = if br.argmax.contains(&(i + 1)) { "  *" } else { "" };
                writeln!(out, "pick {:<3} {v:.12}{mark}", i + 1)?;
            }
            writeln!(
                out,
                "best: {{{}}}",
                br.argmax.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            )?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ApproxOutput {
    n: usize,
    strategy: MixedStrategy,
    payoff: f64,
    reference_payoff: f64,
}

fn approx(n: usize, write_profile: Option<&Path>, format: Format, out: &mut dyn Write) -> Result<i32> {
    let spec = GameSpec::new(n)?;
    let strategy = geometric_strategy(spec);
    let result =
        ApproxOutput { n, payoff: approx_payoff(spec)?, reference_payoff: zeng_baseline(spec), strategy };
    if let Some(path) = write_profile {
        profile::save(path, &symmetric_document(&result.strategy))?;
    }
    match format {
        Format::Json => write_json(out, &result)?,
        Format::Csv => {
            let mut header: Vec<String> = ["n", "payoff", "reference_payoff"].map(String::from).to_vec();
            header.extend((1..=n).map(|k| format!("p{k}")));
            let mut row = vec![n.to_string(), result.payoff.to_string(), result.reference_payoff.to_string()];
            row.extend(result.strategy.probs().iter().map(f64::to_string));
            write_csv(out, &header, &[row])?;
        }
        Format::Text => {
            let probs: Vec<String> = result.strategy.probs().iter().map(f64::to_string).collect();
            writeln!(out, "strategy:         ({})", probs.join(", "))?;
            writeln!(out, "payoff:           {}", result.payoff)?;
            writeln!(out, "reference payoff: {}", result.reference_payoff)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    labels: &'a [String],
    #[serde(flatten)]
    stats: &'a SimulationStats,
}

fn simulate_cmd(
    loaded: &LoadedProfile,
    rounds: u64,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let stats = simulate(&loaded.profile, rounds, seed)?;
    match format {
        Format::Json => write_json(out, &SimulateOutput { labels: &loaded.labels, stats: &stats })?,
        Format::Csv => {
            let header = ["player", "label", "wins", "payoff", "std_error"].map(String::from);
            let mut rows: Vec<Vec<String>> = (0..stats.wins.len())
                .map(|i| {
                    vec![
                        (i + 1).to_string(),
                        loaded.labels[i].clone(),
                        stats.wins[i].to_string(),
                        stats.payoffs[i].to_string(),
                        stats.std_errors[i].to_string(),
                    ]
                })
                .collect();
            rows.push(vec![
                "none".into(),
                String::new(),
                stats.no_winner_rounds.to_string(),
                (stats.no_winner_rounds as f64 / rounds as f64).to_string(),
                String::new(),
            ]);
            write_csv(out, &header, &rows)?;
        }
        Format::Text => {
            writeln!(out, "rounds: {}   seed: {}", stats.rounds, stats.seed)?;
            for i in 0..stats.wins.len() {
                writeln!(
                    out,
                    "{:<12} wins {:>10}   payoff {:.6} ± {:.6}",
                    loaded.labels[i], stats.wins[i], stats.payoffs[i], stats.std_errors[i]
                )?;
            }
            writeln!(out, "{:<12} {:>15}", "no winner", stats.no_winner_rounds)?;
        }
    }
    Ok(EXIT_OK)
}
