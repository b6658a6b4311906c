//! Shipped fixture corpus: the worked example graphs and games plus
//! their expected verdicts. Every case is reproducible by rerunning the
//! referenced operation; the acceptance suite does exactly that.

use fdgame_core::game::{Game, Rational};
use fdgame_core::graph::Graph;

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// Path a-b-c-d.
pub fn gamma1() -> Graph {
    Graph::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]).unwrap()
}

/// Four vertices, complete minus the a-d edge. The b-c chord keeps both
/// of a and d inside Adj+ of b and of c, which the rock-paper-scissors
/// game's payoffs require.
pub fn gamma2() -> Graph {
    Graph::new(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")],
    )
    .unwrap()
}

/// Path a-b-c.
pub fn gamma3() -> Graph {
    Graph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
}

/// Diamond a-b-d, a-c-d with a tail d-e.
pub fn gamma4() -> Graph {
    Graph::new(
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e")],
    )
    .unwrap()
}

/// Triangle d-e-f with pendants a-d, b-e, c-f; {a,b,c} is sparse.
pub fn gamma5() -> Graph {
    Graph::new(
        &["a", "b", "c", "d", "e", "f"],
        &[
            ("a", "d"),
            ("b", "e"),
            ("c", "f"),
            ("d", "e"),
            ("d", "f"),
            ("e", "f"),
        ],
    )
    .unwrap()
}

/// Every fixture graph, by name.
pub fn fixture_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("gamma1", gamma1()),
        ("gamma2", gamma2()),
        ("gamma3", gamma3()),
        ("gamma4", gamma4()),
        ("gamma5", gamma5()),
        ("k2", Graph::complete(&["a", "b"]).unwrap()),
        ("k3", Graph::complete(&["a", "b", "c"]).unwrap()),
        ("k4", Graph::complete(&["a", "b", "c", "d"]).unwrap()),
    ]
}

/// The fixture graphs with at most `max` vertices.
pub fn small_fixture_graphs(max: usize) -> Vec<(&'static str, Graph)> {
    fixture_graphs()
        .into_iter()
        .filter(|(_, g)| g.vertex_count() <= max)
        .collect()
}

/// Two-player coordination game: both paid 1 on (a1,b1) and (a2,b2).
pub fn table1_game() -> Game {
    let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
    Game::build(
        g,
        vec![labels(&["a1", "a2"]), labels(&["b1", "b2"])],
        |_, _, local| if local[0] == local[1] { rat(1) } else { rat(0) },
    )
    .unwrap()
}

/// Three-strategy variant: rows a1 and a3 both coordinate with b1, so
/// equilibria (a1,b1), (a2,b2), (a3,b1) make a determine b but not b
/// determine a.
pub fn table2_game() -> Game {
    let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
    Game::build(
        g,
        vec![labels(&["a1", "a2", "a3"]), labels(&["b1", "b2"])],
        |_, _, local| {
            let (row, col) = (local[0], local[1]);
            let matched =
                (row == 0 && col == 0) || (row == 1 && col == 1) || (row == 2 && col == 0);
            if matched {
                rat(1)
            } else {
                rat(0)
            }
        },
    )
    .unwrap()
}

/// Three players on a complete graph, all paid 1 iff the bit sum is
/// even: 4 equilibria, c is a function of {a,b} but of neither alone.
pub fn parity_game() -> Game {
    let g = Graph::complete(&["a", "b", "c"]).unwrap();
    Game::build(
        g,
        vec![labels(&["0", "1"]), labels(&["0", "1"]), labels(&["0", "1"])],
        |_, _, local| {
            if local.iter().sum::<usize>() % 2 == 0 {
                rat(1)
            } else {
                rat(0)
            }
        },
    )
    .unwrap()
}

/// Rock-paper-scissors over the gamma2 graph: a and d always get 0;
/// b and c play rock-paper-scissors against each other, scored only
/// when a and d pick different strategies. Pure equilibria are exactly
/// the 27 profiles with a = d.
pub fn rps_game() -> Game {
    let g = gamma2();
    let a = g.index_of("a").unwrap();
    let b = g.index_of("b").unwrap();
    let c = g.index_of("c").unwrap();
    let d = g.index_of("d").unwrap();
    let rps = labels(&["r", "p", "s"]);
    // r < p < s cyclically: p beats r, s beats p, r beats s
    let score = |x: usize, y: usize| -> i64 {
        if x == y {
            0
        } else if (x + 1) % 3 == y {
            -1
        } else {
            1
        }
    };
    Game::build(
        g,
        vec![rps.clone(), rps.clone(), rps.clone(), rps],
        move |v, domain, local| {
            if v == a || v == d {
                return rat(0);
            }
            let at = |u: usize| local[domain.iter().position(|&x| x == u).unwrap()];
            if at(a) == at(d) {
                return rat(0);
            }
            let (me, them) = if v == b { (b, c) } else { (c, b) };
            rat(score(at(me), at(them)))
        },
    )
    .unwrap()
}

/// Matching pennies on one edge: a paid for matching, b for
/// mismatching. No pure equilibrium.
pub fn matching_pennies_game() -> Game {
    let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
    Game::build(
        g,
        vec![labels(&["h", "t"]), labels(&["h", "t"])],
        |v, _, local| {
            let matched = local[0] == local[1];
            if (v == 0) == matched {
                rat(1)
            } else {
                rat(-1)
            }
        },
    )
    .unwrap()
}

/// Every fixture game, by name.
pub fn fixture_games() -> Vec<(&'static str, Game)> {
    vec![
        ("table1", table1_game()),
        ("table2", table2_game()),
        ("parity", parity_game()),
        ("rps", rps_game()),
        ("matching_pennies", matching_pennies_game()),
    ]
}

/// Expected verdict of a fixture case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// `game ⊨ formula` has this verdict.
    Models(bool),
    /// Deciding the formula against the hypotheses has this verdict.
    Derivable(bool),
    /// The counterexample pipeline succeeds on the goal atom.
    CounterexampleExists,
}

/// One corpus entry; `graph` names an entry of [`fixture_graphs`] and
/// `game` one of [`fixture_games`].
#[derive(Debug, Clone)]
pub struct FixtureCase {
    pub name: &'static str,
    pub graph: &'static str,
    pub game: Option<&'static str>,
    pub hypotheses: &'static [&'static str],
    pub formula: &'static str,
    pub expected: Expectation,
    /// Where the expectation comes from.
    pub note: &'static str,
}

/// The shipped corpus. Worked-example games, the four derivability
/// showcases, the path counterexample, and the vacuous case.
pub fn cases() -> Vec<FixtureCase> {
    use Expectation::*;
    vec![
        FixtureCase {
            name: "table1_mutual_dependence",
            graph: "k2",
            game: Some("table1"),
            hypotheses: &[],
            formula: "a |> b",
            expected: Models(true),
            note: "coordination game: the two equilibria pair off",
        },
        FixtureCase {
            name: "table1_converse",
            graph: "k2",
            game: Some("table1"),
            hypotheses: &[],
            formula: "b |> a",
            expected: Models(true),
            note: "coordination game, symmetric direction",
        },
        FixtureCase {
            name: "table2_forward",
            graph: "k2",
            game: Some("table2"),
            hypotheses: &[],
            formula: "a |> b",
            expected: Models(true),
            note: "three-row variant: each row fixes the column",
        },
        FixtureCase {
            name: "table2_no_converse",
            graph: "k2",
            game: Some("table2"),
            hypotheses: &[],
            formula: "b |> a",
            expected: Models(false),
            note: "rows a1 and a3 share column b1",
        },
        FixtureCase {
            name: "parity_joint",
            graph: "k3",
            game: Some("parity"),
            hypotheses: &[],
            formula: "a,b |> c",
            expected: Models(true),
            note: "even-sum game: any two players fix the third",
        },
        FixtureCase {
            name: "parity_single",
            graph: "k3",
            game: Some("parity"),
            hypotheses: &[],
            formula: "a |> c",
            expected: Models(false),
            note: "one player alone fixes nothing",
        },
        FixtureCase {
            name: "rps_a_determines_d",
            graph: "gamma2",
            game: Some("rps"),
            hypotheses: &[],
            formula: "a |> d",
            expected: Models(true),
            note: "equilibria force a = d",
        },
        FixtureCase {
            name: "rps_middle_blind",
            graph: "gamma2",
            game: Some("rps"),
            hypotheses: &[],
            formula: "a |> d -> b,c |> d",
            expected: Models(false),
            note: "b and c can repeat while a = d varies",
        },
        FixtureCase {
            name: "pennies_vacuous",
            graph: "k2",
            game: Some("matching_pennies"),
            hypotheses: &[],
            formula: "a |> b",
            expected: Models(true),
            note: "no pure equilibria, so every atom holds vacuously",
        },
        FixtureCase {
            name: "path4_transfer",
            graph: "gamma1",
            game: None,
            hypotheses: &[],
            formula: "a |> d -> b,c |> d",
            expected: Derivable(true),
            note: "endpoint dependence transfers to the middle of the path",
        },
        FixtureCase {
            name: "path4_nested",
            graph: "gamma1",
            game: None,
            hypotheses: &[],
            formula: "a,c |> d -> (d,b |> a -> b,c |> a,d)",
            expected: Derivable(true),
            note: "two-premise variant on the same path",
        },
        FixtureCase {
            name: "diamond_tail",
            graph: "gamma4",
            game: None,
            hypotheses: &[],
            formula: "a,c |> e -> b,c,d |> e",
            expected: Derivable(true),
            note: "diamond with a tail: rebasing across the middle cut",
        },
        FixtureCase {
            name: "triangle_pendants",
            graph: "gamma5",
            game: None,
            hypotheses: &[],
            formula: "a |> b -> (b |> c -> (c |> a -> d,e,f |> a,b,c))",
            expected: Derivable(true),
            note: "sparse pendant set over the triangle",
        },
        FixtureCase {
            name: "path3_blocked",
            graph: "gamma3",
            game: None,
            hypotheses: &[],
            formula: "a |> c -> b |> c",
            expected: Derivable(false),
            note: "the middle vertex is not determined across a 3-path",
        },
        FixtureCase {
            name: "path3_countermodel",
            graph: "gamma3",
            game: None,
            hypotheses: &["a |> c"],
            formula: "b |> c",
            expected: CounterexampleExists,
            note: "finite witness game for the blocked dependence",
        },
    ]
}

pub fn fixture_graph(name: &str) -> Graph {
    fixture_graphs()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| g)
        .unwrap_or_else(|| panic!("unknown fixture graph `{}`", name))
}

pub fn fixture_game(name: &str) -> Game {
    fixture_games()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| g)
        .unwrap_or_else(|| panic!("unknown fixture game `{}`", name))
}
