//! Executable completeness machinery: the pennies/penalty game built
//! from a closure set, its two constant equilibrium profiles, product
//! games, and counterexample generation for underivable atoms.

use num::BigRational;

use crate::derivation::{closure_map, ClosureOptions, HypothesisSet};
use crate::error::{Error, Result};
use crate::formula::Atom;
use crate::game::{Game, Profile, Rational};
use crate::graph::{Graph, VertexSet};

/// Decoded strategy of the pennies game.
///
/// `Pass` only occurs for vertices in the closure set, `Bit` only
/// outside it, and `Play` holds one heads/tails call per neighbor in
/// lexicographic neighbor order (isolated vertices never play).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PenniesStrategy {
    Pass,
    Bit(u8),
    /// true = tails; aligned with the sorted neighbor list.
    Play(Vec<bool>),
}

/// Parses a canonical pennies label (`pass`, `0`, `1`, `p:H,T,...`).
pub fn parse_pennies_label(label: &str) -> Result<PenniesStrategy> {
    match label {
        "pass" => Ok(PenniesStrategy::Pass),
        "0" => Ok(PenniesStrategy::Bit(0)),
        "1" => Ok(PenniesStrategy::Bit(1)),
        _ => {
            let rest = label
                .strip_prefix("p:")
                .ok_or_else(|| Error::InvalidGame(format!("not a pennies label: `{}`", label)))?;
            let calls = rest
                .split(',')
                .map(|c| match c {
                    "H" => Ok(false),
                    "T" => Ok(true),
                    _ => Err(Error::InvalidGame(format!("bad pennies call `{}`", c))),
                })
                .collect::<Result<_>>()?;
            Ok(PenniesStrategy::Play(calls))
        }
    }
}

fn pennies_label(calls: &[bool]) -> String {
    let parts: Vec<&str> = calls.iter().map(|&t| if t { "T" } else { "H" }).collect();
    format!("p:{}", parts.join(","))
}

fn strategy_lists(g: &Graph, a_star: VertexSet) -> Vec<Vec<String>> {
    (0..g.vertex_count())
        .map(|v| {
            let deg = g.neighbors(v).iter().count();
            let mut labels: Vec<String> = if a_star.contains(v) {
                vec!["pass".to_string()]
            } else {
                vec!["0".to_string(), "1".to_string()]
            };
            if deg > 0 {
                for mask in 0u64..1 << deg {
                    let calls: Vec<bool> = (0..deg).map(|k| mask & (1 << k) != 0).collect();
                    labels.push(pennies_label(&calls));
                }
            }
            labels
        })
        .collect()
}

/// Builds the pennies game for a closure set `a_star`.
///
/// Per oriented edge (tail = lexicographically smaller endpoint), both
/// endpoints playing pennies rewards the tail 1 for matching calls and
/// the head 1 for mismatching. A player not playing pennies pays a
/// penalty of 1 when its closed neighborhood outside `a_star` contains
/// both a 0 and a 1 (the player's own bit counts).
pub fn build_pennies_game(g: &Graph, a_star: VertexSet) -> Result<Game> {
    let strategies = strategy_lists(g, a_star);
    let decoded: Vec<Vec<PenniesStrategy>> = strategies
        .iter()
        .map(|labels| {
            labels
                .iter()
                .map(|l| parse_pennies_label(l))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let neighbor_lists: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().collect())
        .collect();
    Game::build(g.clone(), strategies, move |v, domain, local| {
        let strat = |u: usize| {
            let pos = domain.iter().position(|&d| d == u).expect("u in Adj+(v)");
            &decoded[u][local[pos]]
        };
        let mut total: i64 = 0;
        if let PenniesStrategy::Play(my_calls) = strat(v) {
            for (k, &u) in neighbor_lists[v].iter().enumerate() {
                if let PenniesStrategy::Play(their_calls) = strat(u) {
                    let their_k = neighbor_lists[u]
                        .iter()
                        .position(|&x| x == v)
                        .expect("v in Adj(u)");
                    let matched = my_calls[k] == their_calls[their_k];
                    let v_is_tail = v < u;
                    if matched == v_is_tail {
                        total += 1;
                    }
                }
            }
        } else {
            let mut saw = [false, false];
            for &u in domain.iter() {
                if a_star.contains(u) {
                    continue;
                }
                if let PenniesStrategy::Bit(b) = strat(u) {
                    saw[*b as usize] = true;
                }
            }
            if saw[0] && saw[1] {
                total -= 1;
            }
        }
        Rational::from_integer(total.into())
    })
}

/// The constant profile: `pass` on `a_star`, the bit `k` elsewhere.
pub fn constant_profile(game: &Game, a_star: VertexSet, k: u8) -> Result<Profile> {
    let n = game.graph().vertex_count();
    let mut choices = Vec::with_capacity(n);
    for v in 0..n {
        let label = if a_star.contains(v) {
            "pass"
        } else if k == 0 {
            "0"
        } else {
            "1"
        };
        choices.push(game.strategy_index(v, label)?);
    }
    Ok(Profile::from_indices(choices))
}

/// Component-wise product: tuple strategies (labels joined with `|`) and
/// summed payoffs. All factors must share one graph.
pub fn product_game(games: &[&Game], guard: u128) -> Result<Game> {
    let first = games
        .first()
        .ok_or_else(|| Error::InvalidGame("empty product".to_string()))?;
    let graph = first.graph().clone();
    for g in games {
        if *g.graph() != graph {
            return Err(Error::GraphMismatch);
        }
    }
    let n = graph.vertex_count();
    let mut space: u128 = 1;
    let mut strategies: Vec<Vec<String>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut labels = vec![String::new()];
        for g in games {
            let mut next = Vec::with_capacity(labels.len() * g.strategies(v).len());
            for prefix in &labels {
                for s in g.strategies(v) {
                    if prefix.is_empty() {
                        next.push(s.clone());
                    } else {
                        next.push(format!("{}|{}", prefix, s));
                    }
                }
            }
            labels = next;
        }
        space = space.saturating_mul(labels.len() as u128);
        if space > guard {
            return Err(Error::TooLarge(space, guard));
        }
        strategies.push(labels);
    }
    // factor strategy counts per vertex, factor 0 most significant
    let counts: Vec<Vec<usize>> = (0..n)
        .map(|v| games.iter().map(|g| g.strategies(v).len()).collect())
        .collect();
    let factors: Vec<Game> = games.iter().map(|&g| g.clone()).collect();
    Game::build(graph, strategies, move |v, domain, local| {
        let mut total = BigRational::from_integer(0.into());
        for (i, factor) in factors.iter().enumerate() {
            let choice_of = |u: usize| {
                let pos = domain.iter().position(|&d| d == u).expect("u in Adj+(v)");
                let mut idx = local[pos];
                // strip radices below factor i, then take factor i's digit
                for j in (i + 1..factors.len()).rev() {
                    idx /= counts[u][j];
                }
                idx % counts[u][i]
            };
            total += factor.payoff_by(v, choice_of).clone();
        }
        total
    })
}

/// A verified countermodel for an underivable atom: a pennies game with
/// two equilibria that agree on the atom's left side and differ on a
/// right-side vertex outside the closure.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub game: Game,
    pub a_star: VertexSet,
    pub refuted: Atom,
    pub witness_low: Profile,
    pub witness_high: Profile,
}

/// Knobs for [`counterexample`].
#[derive(Debug, Clone, Default)]
pub struct CounterexampleOptions {
    pub closure: ClosureOptions,
    /// Profile guard for the verification pass; defaults to the
    /// engine-wide guard.
    pub guard: Option<u128>,
}

/// Builds and verifies a counterexample game for `atom` under `h`.
///
/// Errors with [`Error::NoCounterexample`] when the atom is derivable;
/// a verification failure reports [`Error::InternalSoundness`] (a bug,
/// never expected).
pub fn counterexample(
    g: &Graph,
    h: &HypothesisSet,
    atom: Atom,
    opts: &CounterexampleOptions,
) -> Result<Counterexample> {
    let clos = closure_map(g, h, &opts.closure)?;
    let a_star = clos.closure(atom.lhs);
    let missing = atom.rhs.difference(a_star);
    if missing.is_empty() {
        return Err(Error::NoCounterexample(atom.render(g)));
    }
    let b = missing.iter().next().expect("nonempty");
    let game = build_pennies_game(g, a_star)?;
    let low = constant_profile(&game, a_star, 0)?;
    let high = constant_profile(&game, a_star, 1)?;

    let guard = opts.guard.unwrap_or(crate::game::DEFAULT_PROFILE_GUARD);
    if !game.is_nash(&low) || !game.is_nash(&high) {
        return Err(Error::InternalSoundness(
            "constant profile is not an equilibrium".to_string(),
        ));
    }
    if !low.agrees_on(&high, atom.lhs) || low.choice(b) == high.choice(b) {
        return Err(Error::InternalSoundness(
            "witnesses do not refute the atom".to_string(),
        ));
    }
    let ne = game.enumerate_nash(guard)?;
    for hyp in h.atoms() {
        if !game.atom_holds_in(&ne, *hyp) {
            return Err(Error::InternalSoundness(format!(
                "hypothesis {} fails in the constructed game",
                hyp.render(g)
            )));
        }
    }
    if game.atom_holds_in(&ne, atom) {
        return Err(Error::InternalSoundness(
            "target atom still holds in the constructed game".to_string(),
        ));
    }
    Ok(Counterexample {
        game,
        a_star,
        refuted: atom,
        witness_low: low,
        witness_high: high,
    })
}

/// Product of the pennies games of every subset of the vertices, each
/// built over the closure of that subset. Exists for completeness
/// pipeline tests; the strategy space explodes, so it is guarded to
/// very small graphs.
pub fn completeness_product(
    g: &Graph,
    h: &HypothesisSet,
    opts: &ClosureOptions,
    guard: u128,
) -> Result<Game> {
    const MAX: usize = 3;
    if g.vertex_count() > MAX {
        return Err(Error::DerivationTooLarge(g.vertex_count(), MAX));
    }
    let clos = closure_map(g, h, opts)?;
    let factors: Vec<Game> = (0..1u64 << g.vertex_count())
        .map(|a| build_pennies_game(g, clos.closure(VertexSet::from_bits(a))))
        .collect::<Result<_>>()?;
    let refs: Vec<&Game> = factors.iter().collect();
    product_game(&refs, guard)
}
