//! Finite strategic games over a dependency graph: payoff lookup, pure
//! Nash equilibrium enumeration, and the dependence semantics `G ⊨ φ`.
//!
//! Payoffs are exact rationals. Nash checking is equality and inequality
//! comparison, so floating point would corrupt equilibrium sets.

use std::collections::HashMap;

use num::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::graph::{Cut, Graph, VertexSet};

pub type Rational = BigRational;

/// Default cap on the size of the profile space for exhaustive
/// enumeration.
pub const DEFAULT_PROFILE_GUARD: u128 = 10_000_000;

/// One strategy choice per vertex, stored as indices into the game's
/// per-vertex strategy lists, in graph vertex order.
///
/// The derived `Ord` is the lexicographic order used for all equilibrium
/// listings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    choices: Vec<usize>,
}

impl Profile {
    pub fn from_indices(choices: Vec<usize>) -> Self {
        Profile { choices }
    }

    pub fn choice(&self, v: usize) -> usize {
        self.choices[v]
    }

    /// Agreement on a vertex set: `self =_X other`.
    pub fn agrees_on(&self, other: &Profile, x: VertexSet) -> bool {
        x.iter().all(|v| self.choices[v] == other.choices[v])
    }
}

/// A profile restricted to the closed neighborhood of one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalProfile {
    pub vertex: usize,
    /// Sorted vertex indices of Adj⁺(vertex).
    pub domain: Vec<usize>,
    /// Strategy indices aligned with `domain`.
    pub choices: Vec<usize>,
}

/// A finite game over a graph. Payoff tables are dense over the product
/// of strategy lists restricted to Adj⁺(v), so a payoff can never read a
/// vertex outside the closed neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    graph: Graph,
    strategies: Vec<Vec<String>>,
    local_domain: Vec<Vec<usize>>,
    tables: Vec<Vec<Rational>>,
}

impl Game {
    /// Builds a game by evaluating `payoff(v, local)` over every local
    /// profile; `local` is aligned with the sorted Adj⁺(v) domain.
    pub fn build<F>(graph: Graph, strategies: Vec<Vec<String>>, mut payoff: F) -> Result<Game>
    where
        F: FnMut(usize, &[usize], &[usize]) -> Rational,
    {
        let n = graph.vertex_count();
        if strategies.len() != n {
            return Err(Error::InvalidGame(
                "strategy map does not cover every vertex".to_string(),
            ));
        }
        for (v, list) in strategies.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "player `{}` has an empty strategy set",
                    graph.vertex(v)
                )));
            }
            let mut sorted = list.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != list.len() {
                return Err(Error::InvalidGame(format!(
                    "player `{}` has duplicate strategy labels",
                    graph.vertex(v)
                )));
            }
        }
        let local_domain: Vec<Vec<usize>> =
            (0..n).map(|v| graph.adj_plus(v).iter().collect()).collect();
        let mut tables = Vec::with_capacity(n);
        for (v, domain) in local_domain.iter().enumerate() {
            let sizes: Vec<usize> = domain.iter().map(|&u| strategies[u].len()).collect();
            let total: usize = sizes.iter().product();
            let mut table = Vec::with_capacity(total);
            let mut local = vec![0usize; domain.len()];
            for idx in 0..total {
                decode_mixed_radix(idx, &sizes, &mut local);
                table.push(payoff(v, domain, &local));
            }
            tables.push(table);
        }
        Ok(Game {
            graph,
            strategies,
            local_domain,
            tables,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn strategies(&self, v: usize) -> &[String] {
        &self.strategies[v]
    }

    pub fn local_domain(&self, v: usize) -> &[usize] {
        &self.local_domain[v]
    }

    pub fn strategy_index(&self, v: usize, label: &str) -> Result<usize> {
        self.strategies[v]
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| {
                Error::InvalidProfile(format!(
                    "`{}` is not a strategy of player `{}`",
                    label,
                    self.graph.vertex(v)
                ))
            })
    }

    /// Total size of the profile space.
    pub fn profile_space(&self) -> u128 {
        self.strategies
            .iter()
            .map(|s| s.len() as u128)
            .product()
    }

    /// Builds a profile from a name → label map; must be total.
    pub fn profile_from_labels(&self, labels: &HashMap<String, String>) -> Result<Profile> {
        let n = self.graph.vertex_count();
        if labels.len() != n {
            return Err(Error::InvalidProfile(format!(
                "profile names {} players, the game has {}",
                labels.len(),
                n
            )));
        }
        let mut choices = vec![0usize; n];
        for (name, label) in labels {
            let v = self.graph.index_of(name)?;
            choices[v] = self.strategy_index(v, label)?;
        }
        Ok(Profile { choices })
    }

    pub fn profile_labels(&self, p: &Profile) -> Vec<(&str, &str)> {
        (0..self.graph.vertex_count())
            .map(|v| {
                (
                    self.graph.vertex(v).name(),
                    self.strategies[v][p.choices[v]].as_str(),
                )
            })
            .collect()
    }

    fn local_index(&self, v: usize, choice_of: impl Fn(usize) -> usize) -> usize {
        let mut idx = 0;
        for &u in &self.local_domain[v] {
            idx = idx * self.strategies[u].len() + choice_of(u);
        }
        idx
    }

    pub(crate) fn payoff_by(&self, v: usize, choice_of: impl Fn(usize) -> usize) -> &Rational {
        &self.tables[v][self.local_index(v, choice_of)]
    }

    /// Payoff of player `v` under profile `p` (a table lookup on the
    /// restriction of `p` to Adj⁺(v)).
    pub fn payoff(&self, v: usize, p: &Profile) -> &Rational {
        &self.tables[v][self.local_index(v, |u| p.choices[u])]
    }

    /// Restriction of `p` to Adj⁺(v).
    pub fn local_profile(&self, v: usize, p: &Profile) -> LocalProfile {
        let domain = self.local_domain[v].clone();
        let choices = domain.iter().map(|&u| p.choices[u]).collect();
        LocalProfile {
            vertex: v,
            domain,
            choices,
        }
    }

    /// True iff no player has a strictly improving unilateral deviation.
    pub fn is_nash(&self, p: &Profile) -> bool {
        for v in 0..self.graph.vertex_count() {
            let current = self.payoff(v, p);
            for alt in 0..self.strategies[v].len() {
                if alt == p.choices[v] {
                    continue;
                }
                let idx =
                    self.local_index(v, |u| if u == v { alt } else { p.choices[u] });
                if self.tables[v][idx] > *current {
                    return false;
                }
            }
        }
        true
    }

    /// All pure Nash equilibria in lexicographic order. Exhaustive over
    /// the full profile product; errors if the space exceeds `guard`.
    /// The scan is partitioned across threads; the merged order does not
    /// depend on thread count.
    pub fn enumerate_nash(&self, guard: u128) -> Result<Vec<Profile>> {
        let total = self.profile_space();
        if total > guard {
            return Err(Error::TooLarge(total, guard));
        }
        let sizes: Vec<usize> = self.strategies.iter().map(|s| s.len()).collect();
        let total = total as usize;
        Ok((0..total)
            .into_par_iter()
            .filter_map(|idx| {
                let mut choices = vec![0usize; sizes.len()];
                decode_mixed_radix(idx, &sizes, &mut choices);
                let p = Profile { choices };
                if self.is_nash(&p) {
                    Some(p)
                } else {
                    None
                }
            })
            .collect())
    }

    /// `G ⊨ lhs |> rhs` over a precomputed equilibrium list: every pair
    /// of equilibria agreeing on `lhs` agrees on `rhs`. Vacuously true
    /// when the list is empty.
    pub fn atom_holds_in(&self, ne: &[Profile], atom: Atom) -> bool {
        let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for p in ne {
            let key: Vec<usize> = atom.lhs.iter().map(|v| p.choices[v]).collect();
            let rhs: Vec<usize> = atom.rhs.iter().map(|v| p.choices[v]).collect();
            match groups.entry(key) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != rhs {
                        return false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(rhs);
                }
            }
        }
        true
    }

    /// `G ⊨ lhs |> rhs`, enumerating the equilibria first.
    pub fn holds_atom(&self, atom: Atom, guard: u128) -> Result<bool> {
        let ne = self.enumerate_nash(guard)?;
        Ok(self.atom_holds_in(&ne, atom))
    }

    /// `G ⊨ f`: equilibria are computed once and every atom of `f` is
    /// checked against them.
    pub fn models(&self, f: &Formula, guard: u128) -> Result<bool> {
        let ne = self.enumerate_nash(guard)?;
        let truth: HashMap<Atom, bool> = f
            .atoms()
            .into_iter()
            .map(|a| (a, self.atom_holds_in(&ne, a)))
            .collect();
        f.eval_prop(&self.graph, &truth)
    }
}

pub(crate) fn decode_mixed_radix(mut idx: usize, sizes: &[usize], out: &mut [usize]) {
    for k in (0..sizes.len()).rev() {
        out[k] = idx % sizes[k];
        idx /= sizes[k];
    }
}

/// Splices two profiles along a cut: `p` on `cut.u`, `q` on `cut.w`.
pub fn stitch(p: &Profile, q: &Profile, cut: Cut) -> Profile {
    let choices = (0..p.choices.len())
        .map(|v| {
            if cut.u.contains(v) {
                p.choices[v]
            } else {
                q.choices[v]
            }
        })
        .collect();
    Profile { choices }
}

/// A game with uniformly random integer payoffs in `[-value_bound,
/// value_bound]`; deterministic in all arguments.
///
/// `sizes` gives per-vertex strategy counts in graph vertex order;
/// generated labels are `s0`, `s1`, ...
pub fn random_game(g: &Graph, sizes: &[usize], value_bound: i64, seed: u64) -> Result<Game> {
    use rand::{Rng, SeedableRng};
    if sizes.len() != g.vertex_count() {
        return Err(Error::InvalidGame(
            "strategy size map does not cover every vertex".to_string(),
        ));
    }
    if let Some(v) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidGame(format!(
            "player `{}` has a zero-size strategy set",
            g.vertex(v)
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let strategies: Vec<Vec<String>> = sizes
        .iter()
        .map(|&k| (0..k).map(|i| format!("s{}", i)).collect())
        .collect();
    Game::build(g.clone(), strategies, |_, _, _| {
        Rational::from_integer(rng.gen_range(-value_bound..=value_bound).into())
    })
}
