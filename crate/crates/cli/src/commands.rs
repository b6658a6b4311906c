//! Subcommand implementations. Each returns the full report text plus a
//! machine verdict; the binary maps verdicts to exit codes (0 true,
//! 1 false, 2 error) and prints the text in one write.

use std::fmt::Write as _;
use std::path::Path;

use fdgame_core::canonical::{counterexample, CounterexampleOptions};
use fdgame_core::derivation::{
    decide_formula, derive_trace, derives_atom, random_hypotheses, render_trace, saturate_atoms,
    ClosureOptions, HypothesisSet,
};
use fdgame_core::error::{Error, Result};
use fdgame_core::formula::{parse, Atom, Formula};
use fdgame_core::game::{random_game, stitch, Game, Profile, DEFAULT_PROFILE_GUARD};
use fdgame_core::graph::{Graph, VertexSet};
use fdgame_core::io;

/// Engine-wide knobs shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Options {
    pub guard: u128,
    pub closure: ClosureOptions,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            guard: DEFAULT_PROFILE_GUARD,
            closure: ClosureOptions::default(),
        }
    }
}

/// Command output: report text plus the verdict driving the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    /// `false` maps to exit code 1; `true` to 0.
    pub verdict: bool,
}

fn ok(text: String) -> Outcome {
    Outcome {
        text,
        verdict: true,
    }
}

fn profile_line(game: &Game, p: &Profile) -> String {
    game.profile_labels(p)
        .iter()
        .map(|(v, s)| format!("{}={}", v, s))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `nash`: list all pure equilibria in canonical order.
pub fn cmd_nash(game_path: &Path, opts: &Options) -> Result<Outcome> {
    let game = io::load_game(game_path)?;
    let ne = game.enumerate_nash(opts.guard)?;
    let mut out = String::new();
    for p in &ne {
        writeln!(out, "{}", profile_line(&game, p)).unwrap();
    }
    if ne.is_empty() {
        writeln!(
            out,
            "warning: no pure equilibria; every dependence atom holds vacuously"
        )
        .unwrap();
    }
    Ok(ok(out))
}

/// `models`: does the game satisfy the formula?
pub fn cmd_models(game_path: &Path, formula_text: &str, opts: &Options) -> Result<Outcome> {
    let game = io::load_game(game_path)?;
    let f = parse(formula_text, game.graph())?;
    let verdict = game.models(&f, opts.guard)?;
    Ok(Outcome {
        text: format!("{}\n", verdict),
        verdict,
    })
}

fn goal_atom(goal: &Formula) -> Option<Atom> {
    match goal {
        Formula::Dep(a) => Some(*a),
        _ => None,
    }
}

/// `derive`: decide the query's goal against its hypotheses. `--trace`
/// prints a checked proof for a derivable atom goal; `--oracle` decides
/// an atom goal by brute-force saturation instead of the closure map.
pub fn cmd_derive(query_path: &Path, trace: bool, oracle: bool, opts: &Options) -> Result<Outcome> {
    let q = io::load_query(query_path)?;
    let atom = goal_atom(&q.goal);
    let verdict = match (oracle, atom) {
        (true, Some(a)) => saturate_atoms(&q.graph, &q.hypotheses)?.contains(&a),
        (true, None) => {
            return Err(Error::InvalidGame(
                "--oracle needs a single-atom goal".to_string(),
            ))
        }
        (false, Some(a)) => derives_atom(&q.graph, &q.hypotheses, a, &opts.closure)?,
        (false, None) => {
            if !q.hypotheses.atoms().is_empty() {
                return Err(Error::InvalidGame(
                    "hypotheses require a single-atom goal; fold them into the formula instead"
                        .to_string(),
                ));
            }
            decide_formula(&q.graph, &q.goal, &opts.closure)?
        }
    };
    let mut out = format!("{}\n", if verdict { "derivable" } else { "not derivable" });
    if trace && verdict {
        let a = atom.ok_or_else(|| {
            Error::InvalidGame("--trace needs a single-atom goal".to_string())
        })?;
        let steps = derive_trace(&q.graph, &q.hypotheses, a, &opts.closure)?;
        out.push_str(&render_trace(&q.graph, &steps));
    }
    Ok(Outcome {
        text: out,
        verdict,
    })
}

/// `counterexample`: build and verify a witness game for an underivable
/// atom goal; write it (with witnesses) to `out_path` when given.
pub fn cmd_counterexample(
    query_path: &Path,
    out_path: Option<&Path>,
    opts: &Options,
) -> Result<Outcome> {
    let q = io::load_query(query_path)?;
    let atom = goal_atom(&q.goal).ok_or_else(|| {
        Error::InvalidGame("counterexample needs a single-atom goal".to_string())
    })?;
    let cx_opts = CounterexampleOptions {
        closure: opts.closure.clone(),
        guard: Some(opts.guard),
    };
    let cx = counterexample(&q.graph, &q.hypotheses, atom, &cx_opts)?;
    let mut out = String::new();
    writeln!(out, "refuted: {}", atom.render(&q.graph)).unwrap();
    writeln!(out, "closure of left side: {}", q.graph.render_set(cx.a_star)).unwrap();
    writeln!(out, "witness: {}", profile_line(&cx.game, &cx.witness_low)).unwrap();
    writeln!(out, "witness: {}", profile_line(&cx.game, &cx.witness_high)).unwrap();
    if let Some(path) = out_path {
        io::save_counterexample(path, &cx)?;
        writeln!(out, "written: {}", path.display()).unwrap();
    }
    Ok(ok(out))
}

/// `graph validate`: load a graph file and report its shape.
pub fn cmd_graph_validate(path: &Path) -> Result<Outcome> {
    let g = io::load_graph(path)?;
    Ok(ok(format!(
        "ok: {} vertices, {} edges\n",
        g.vertex_count(),
        g.edges().len()
    )))
}

/// All four axiom checks plus the stitching invariant, against the
/// game's actual equilibrium set. Any hit is an engine bug.
fn soundness_violation(game: &Game, ne: &[Profile]) -> Option<String> {
    let g = game.graph();
    let n = g.vertex_count();
    let full = g.full_set().bits();
    let render = |a: Atom| a.render(g);
    // truth table over all atoms
    let holds = |lhs: u64, rhs: u64| {
        game.atom_holds_in(
            ne,
            Atom::new(VertexSet::from_bits(lhs), VertexSet::from_bits(rhs)),
        )
    };
    let mut true_atoms: Vec<(u64, u64)> = Vec::new();
    for lhs in 0..=full {
        for rhs in 0..=full {
            if holds(lhs, rhs) {
                true_atoms.push((lhs, rhs));
            } else if rhs & lhs == rhs {
                return Some(format!(
                    "Reflexivity violated at {}",
                    render(Atom::new(
                        VertexSet::from_bits(lhs),
                        VertexSet::from_bits(rhs)
                    ))
                ));
            }
        }
    }
    let is_true = |lhs: u64, rhs: u64| true_atoms.binary_search(&(lhs, rhs)).is_ok();
    for &(lhs, rhs) in &true_atoms {
        for c in 0..=full {
            if !is_true(lhs | c, rhs | c) {
                return Some(format!(
                    "Augmentation violated: {} holds, {} fails",
                    render(Atom::new(
                        VertexSet::from_bits(lhs),
                        VertexSet::from_bits(rhs)
                    )),
                    render(Atom::new(
                        VertexSet::from_bits(lhs | c),
                        VertexSet::from_bits(rhs | c)
                    ))
                ));
            }
        }
    }
    for &(lhs, mid) in &true_atoms {
        for &(l2, rhs) in &true_atoms {
            if l2 == mid && !is_true(lhs, rhs) {
                return Some(format!(
                    "Transitivity violated through {}",
                    g.render_set(VertexSet::from_bits(mid))
                ));
            }
        }
    }
    // canonical Contiguity instances: split the left side by each cut
    // keeping the right side in W
    for &(lhs, rhs) in &true_atoms {
        for (u, w) in all_cuts(n) {
            if rhs & w != rhs {
                continue;
            }
            let bu = g.border(VertexSet::from_bits(u)).unwrap().bits();
            let bw = g.border(VertexSet::from_bits(w)).unwrap().bits();
            let rebased = bu | bw | (lhs & w);
            if !is_true(rebased, rhs) {
                return Some(format!(
                    "Contiguity violated: {} holds, {} fails",
                    render(Atom::new(
                        VertexSet::from_bits(lhs),
                        VertexSet::from_bits(rhs)
                    )),
                    render(Atom::new(
                        VertexSet::from_bits(rebased),
                        VertexSet::from_bits(rhs)
                    ))
                ));
            }
        }
    }
    // stitching: equilibria agreeing on both borders stitch into one
    for (u, w) in all_cuts(n) {
        let borders = g
            .border(VertexSet::from_bits(u))
            .unwrap()
            .union(g.border(VertexSet::from_bits(w)).unwrap());
        for p in ne {
            for q in ne {
                if !p.agrees_on(q, borders) {
                    continue;
                }
                let cut = fdgame_core::graph::Cut {
                    u: VertexSet::from_bits(u),
                    w: VertexSet::from_bits(w),
                };
                let e = stitch(p, q, cut);
                if !game.is_nash(&e) {
                    return Some(format!(
                        "stitching violated on cut ({}|{})",
                        g.render_set(cut.u),
                        g.render_set(cut.w)
                    ));
                }
            }
        }
    }
    None
}

fn all_cuts(n: usize) -> Vec<(u64, u64)> {
    let full = (1u64 << n) - 1;
    (0..=full).map(|u| (u, full & !u)).collect()
}

/// `fuzz`: sample random games over the graph and check every soundness
/// property; deterministic per seed, reports the first violation.
pub fn cmd_fuzz(
    graph_path_or_graph: GraphSource,
    seed: u64,
    samples: u64,
    max_strategies: usize,
    opts: &Options,
) -> Result<Outcome> {
    use rand::{Rng, SeedableRng};
    let g = match graph_path_or_graph {
        GraphSource::Path(p) => io::load_graph(p)?,
        GraphSource::Graph(g) => g,
    };
    let mut out = String::new();
    writeln!(
        out,
        "fuzz: seed={} samples={} max_strategies={}",
        seed, samples, max_strategies
    )
    .unwrap();
    let mut equilibria: u64 = 0;
    for i in 0..samples {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9e3779b9));
        let sizes: Vec<usize> = (0..g.vertex_count())
            .map(|_| rng.gen_range(1..=max_strategies))
            .collect();
        let game = random_game(&g, &sizes, 2, rng.gen())?;
        let ne = game.enumerate_nash(opts.guard)?;
        equilibria += ne.len() as u64;
        if let Some(msg) = soundness_violation(&game, &ne) {
            writeln!(out, "violation at sample {}: {}", i, msg).unwrap();
            return Ok(Outcome {
                text: out,
                verdict: false,
            });
        }
    }
    writeln!(
        out,
        "pass: {} games, {} equilibria, 0 violations",
        samples, equilibria
    )
    .unwrap();
    Ok(ok(out))
}

/// Fuzz input: a file on disk or an in-memory fixture graph.
pub enum GraphSource<'a> {
    Path(&'a Path),
    Graph(Graph),
}

/// Random-hypothesis oracle agreement over one graph; used by the
/// acceptance suite and exposed for scripting via `fuzz`-style checks.
pub fn oracle_agreement(g: &Graph, seeds: std::ops::Range<u64>, opts: &ClosureOptions) -> Result<()> {
    let full = g.full_set().bits();
    for seed in seeds {
        let h = random_hypotheses(g, seed);
        let sat = saturate_atoms(g, &h)?;
        for lhs in 0..=full {
            for rhs in 0..=full {
                let atom = Atom::new(VertexSet::from_bits(lhs), VertexSet::from_bits(rhs));
                let fast = derives_atom(g, &h, atom, opts)?;
                let slow = sat.contains(&atom);
                if fast != slow {
                    return Err(Error::InternalSoundness(format!(
                        "oracle disagreement on {} (seed {})",
                        atom.render(g),
                        seed
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Convenience wrapper for tests: run `derive` semantics directly on an
/// in-memory query.
pub fn decide(g: &Graph, hypotheses: &HypothesisSet, goal: &Formula, opts: &Options) -> Result<bool> {
    match goal_atom(goal) {
        Some(a) => derives_atom(g, hypotheses, a, &opts.closure),
        None => decide_formula(g, goal, &opts.closure),
    }
}
