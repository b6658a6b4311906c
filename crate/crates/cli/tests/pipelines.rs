//! Cross-module pipelines: the fixture corpus reproduces its verdicts,
//! derivability implies semantic truth, traces check end to end, and
//! the full product construction models exactly the derivable atoms.

use fdgame_cli::commands::{decide, Options};
use fdgame_cli::fixtures::{self, Expectation};
use fdgame_core::canonical::{completeness_product, counterexample, CounterexampleOptions};
use fdgame_core::derivation::{
    check_trace, derive_trace, derives_atom, random_hypotheses, ClosureOptions, HypothesisSet,
};
use fdgame_core::formula::{parse, parse_atom, Atom};
use fdgame_core::game::{random_game, DEFAULT_PROFILE_GUARD};
use fdgame_core::graph::{Graph, VertexSet};

fn all_atoms(g: &Graph) -> Vec<Atom> {
    let full = g.full_set().bits();
    let mut out = Vec::new();
    for lhs in 0..=full {
        for rhs in 0..=full {
            out.push(Atom::new(VertexSet::from_bits(lhs), VertexSet::from_bits(rhs)));
        }
    }
    out
}

#[test]
fn fixture_corpus_reproduces_verdicts() {
    let opts = Options::default();
    for case in fixtures::cases() {
        let g = fixtures::fixture_graph(case.graph);
        let hypotheses = HypothesisSet::new(
            case.hypotheses
                .iter()
                .map(|s| parse_atom(s, &g).unwrap())
                .collect(),
        );
        let formula = parse(case.formula, &g).unwrap();
        match case.expected {
            Expectation::Models(want) => {
                let game = fixtures::fixture_game(case.game.expect("models case has a game"));
                let got = game.models(&formula, opts.guard).unwrap();
                assert_eq!(got, want, "{}: {}", case.name, case.note);
            }
            Expectation::Derivable(want) => {
                let got = decide(&g, &hypotheses, &formula, &opts).unwrap();
                assert_eq!(got, want, "{}: {}", case.name, case.note);
            }
            Expectation::CounterexampleExists => {
                let atom = match formula {
                    fdgame_core::formula::Formula::Dep(a) => a,
                    _ => panic!("{}: counterexample case needs an atom goal", case.name),
                };
                counterexample(&g, &hypotheses, atom, &CounterexampleOptions::default())
                    .unwrap_or_else(|e| panic!("{}: {}", case.name, e));
            }
        }
    }
}

#[test]
fn derivable_atoms_hold_in_every_game() {
    // soundness across pipelines: anything the proof system derives
    // from no hypotheses is true in arbitrary games over the graph
    let opts = ClosureOptions::default();
    let h = HypothesisSet::empty();
    for (_, g) in fixtures::small_fixture_graphs(3) {
        let atoms = all_atoms(&g);
        let derivable: Vec<Atom> = atoms
            .iter()
            .copied()
            .filter(|a| derives_atom(&g, &h, *a, &opts).unwrap())
            .collect();
        let sizes = vec![2; g.vertex_count()];
        for seed in 0..5u64 {
            let game = random_game(&g, &sizes, 2, seed).unwrap();
            for atom in &derivable {
                assert!(
                    game.holds_atom(*atom, DEFAULT_PROFILE_GUARD).unwrap(),
                    "derivable {} fails in random game (seed {})",
                    atom.render(&g),
                    seed
                );
            }
        }
        for (_, game) in fixtures::fixture_games() {
            if game.graph() != &g {
                continue;
            }
            for atom in &derivable {
                assert!(game.holds_atom(*atom, DEFAULT_PROFILE_GUARD).unwrap());
            }
        }
    }
}

#[test]
fn traces_check_for_every_derivable_atom() {
    let opts = ClosureOptions::default();
    for g in [fixtures::gamma1(), fixtures::gamma3(), Graph::complete(&["a", "b", "c"]).unwrap()] {
        for seed in 0..8u64 {
            let h = random_hypotheses(&g, seed);
            for atom in all_atoms(&g) {
                if !derives_atom(&g, &h, atom, &opts).unwrap() {
                    continue;
                }
                let steps = derive_trace(&g, &h, atom, &opts).unwrap();
                check_trace(&g, &h, &steps, atom)
                    .unwrap_or_else(|e| panic!("bad trace for {}: {}", atom.render(&g), e));
            }
        }
    }
}

#[test]
fn full_product_models_exactly_the_derivable_atoms() {
    let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
    let opts = ClosureOptions::default();
    for h in [
        HypothesisSet::empty(),
        HypothesisSet::new(vec![parse_atom("a |> b", &g).unwrap()]),
    ] {
        let product = completeness_product(&g, &h, &opts, DEFAULT_PROFILE_GUARD).unwrap();
        for atom in all_atoms(&g) {
            let derivable = derives_atom(&g, &h, atom, &opts).unwrap();
            let modeled = product.holds_atom(atom, DEFAULT_PROFILE_GUARD).unwrap();
            assert_eq!(
                derivable,
                modeled,
                "atom {} under {} hypotheses",
                atom.render(&g),
                h.atoms().len()
            );
        }
    }
}
