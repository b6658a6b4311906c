//! JSON document formats: graph files, game files, query files, and
//! counterexample files with replayable witnesses.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::canonical::Counterexample;
use crate::derivation::HypothesisSet;
use crate::error::{Error, Result};
use crate::formula::{parse, parse_atom, Atom, Formula};
use crate::game::{Game, Profile, Rational};
use crate::graph::Graph;

/// Graph document: `vertices` plus `edges` as 2-element name arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> GraphDoc {
        GraphDoc {
            vertices: g.names(g.full_set()).iter().map(|s| s.to_string()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| {
                    (
                        g.vertex(a).name().to_string(),
                        g.vertex(b).name().to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let vertices: Vec<&str> = self.vertices.iter().map(|s| s.as_str()).collect();
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Graph::new(&vertices, &edges)
    }
}

/// A graph embedded inline or referenced by file path (resolved
/// relative to the referencing document).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphField {
    Path(String),
    Inline(GraphDoc),
}

impl GraphField {
    fn resolve(&self, base: Option<&Path>) -> Result<Graph> {
        match self {
            GraphField::Inline(doc) => doc.to_graph(),
            GraphField::Path(p) => {
                let path = match base {
                    Some(dir) => dir.join(p),
                    None => Path::new(p).to_path_buf(),
                };
                load_graph(&path)
            }
        }
    }
}

/// Exact payoff value: a plain integer or a `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueField {
    Int(i64),
    Str(String),
}

impl ValueField {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            ValueField::Int(n) => Ok(Rational::from_integer((*n).into())),
            ValueField::Str(s) => parse_rational(s),
        }
    }

    pub fn from_rational(r: &Rational) -> ValueField {
        if r.is_integer() {
            if let Ok(n) = i64::try_from(r.numer().clone()) {
                return ValueField::Int(n);
            }
        }
        ValueField::Str(render_rational(r))
    }
}

/// Parses `p` or `p/q` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidGame(format!("bad rational `{}`", s));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
    let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One payoff table row: a local profile over Adj⁺(v) and its value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PayoffEntry {
    pub profile: BTreeMap<String, String>,
    pub value: ValueField,
}

/// Game document: graph, strategy labels per vertex, and a total payoff
/// table per vertex keyed on local profiles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameDoc {
    pub graph: GraphField,
    pub strategies: BTreeMap<String, Vec<String>>,
    pub payoffs: BTreeMap<String, Vec<PayoffEntry>>,
}

impl GameDoc {
    pub fn from_game(game: &Game) -> GameDoc {
        let g = game.graph();
        let mut strategies = BTreeMap::new();
        let mut payoffs = BTreeMap::new();
        for v in 0..g.vertex_count() {
            let name = g.vertex(v).name().to_string();
            strategies.insert(name.clone(), game.strategies(v).to_vec());
            let domain = game.local_domain(v);
            let sizes: Vec<usize> = domain.iter().map(|&u| game.strategies(u).len()).collect();
            let total: usize = sizes.iter().product();
            let mut rows = Vec::with_capacity(total);
            let mut local = vec![0usize; domain.len()];
            for idx in 0..total {
                crate::game::decode_mixed_radix(idx, &sizes, &mut local);
                let profile: BTreeMap<String, String> = domain
                    .iter()
                    .zip(local.iter())
                    .map(|(&u, &c)| {
                        (
                            g.vertex(u).name().to_string(),
                            game.strategies(u)[c].clone(),
                        )
                    })
                    .collect();
                let value = game.payoff_by(v, |u| {
                    let pos = domain.iter().position(|&d| d == u).expect("u in domain");
                    local[pos]
                });
                rows.push(PayoffEntry {
                    profile,
                    value: ValueField::from_rational(value),
                });
            }
            payoffs.insert(name, rows);
        }
        GameDoc {
            graph: GraphField::Inline(GraphDoc::from_graph(g)),
            strategies,
            payoffs,
        }
    }

    /// Validates and builds the game; `base` resolves a graph file
    /// reference. Tables must be total over Adj⁺(v), key exactly on
    /// Adj⁺(v), and name each local profile once.
    pub fn to_game(&self, base: Option<&Path>) -> Result<Game> {
        let g = self.graph.resolve(base)?;
        let n = g.vertex_count();
        let mut strategies: Vec<Vec<String>> = Vec::with_capacity(n);
        for v in 0..n {
            let name = g.vertex(v).name();
            let list = self.strategies.get(name).ok_or_else(|| {
                Error::InvalidGame(format!("no strategy list for player `{}`", name))
            })?;
            strategies.push(list.clone());
        }
        for extra in self.strategies.keys() {
            g.index_of(extra)?;
        }
        let mut tables: Vec<Vec<Option<Rational>>> = Vec::with_capacity(n);
        for v in 0..n {
            let name = g.vertex(v).name();
            let rows = self
                .payoffs
                .get(name)
                .ok_or_else(|| Error::InvalidGame(format!("no payoff table for `{}`", name)))?;
            let domain: Vec<usize> = g.adj_plus(v).iter().collect();
            let sizes: Vec<usize> = domain.iter().map(|&u| strategies[u].len()).collect();
            let total: usize = sizes.iter().product();
            let mut table: Vec<Option<Rational>> = vec![None; total];
            for row in rows {
                if row.profile.len() != domain.len() {
                    return Err(Error::InvalidGame(format!(
                        "table for `{}` keys on {} vertices, Adj+ has {}",
                        name,
                        row.profile.len(),
                        domain.len()
                    )));
                }
                let mut idx = 0;
                for (k, &u) in domain.iter().enumerate() {
                    let u_name = g.vertex(u).name();
                    let label = row.profile.get(u_name).ok_or_else(|| {
                        Error::InvalidGame(format!(
                            "table for `{}` misses neighbor `{}`",
                            name, u_name
                        ))
                    })?;
                    let c = strategies[u]
                        .iter()
                        .position(|s| s == label)
                        .ok_or_else(|| {
                            Error::InvalidGame(format!(
                                "`{}` is not a strategy of `{}`",
                                label, u_name
                            ))
                        })?;
                    idx = idx * sizes[k] + c;
                }
                if table[idx].is_some() {
                    return Err(Error::InvalidGame(format!(
                        "duplicate table row for `{}`",
                        name
                    )));
                }
                table[idx] = Some(row.value.to_rational()?);
            }
            if let Some(hole) = table.iter().position(|e| e.is_none()) {
                return Err(Error::IncompleteGame {
                    player: name.to_string(),
                    profile: format!("#{}", hole),
                });
            }
            tables.push(table);
        }
        let mut cursors = vec![0usize; n];
        Game::build(g, strategies, |v, _domain, _local| {
            let value = tables[v][cursors[v]].clone().expect("table is total");
            cursors[v] += 1;
            value
        })
    }
}

/// Query document: a graph, hypothesis atoms, and a goal formula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryDoc {
    pub graph: GraphField,
    pub hypotheses: Vec<String>,
    pub goal: String,
}

/// A parsed query.
#[derive(Debug, Clone)]
pub struct Query {
    pub graph: Graph,
    pub hypotheses: HypothesisSet,
    pub goal: Formula,
}

impl QueryDoc {
    pub fn to_query(&self, base: Option<&Path>) -> Result<Query> {
        let graph = self.graph.resolve(base)?;
        let atoms = self
            .hypotheses
            .iter()
            .map(|s| parse_atom(s, &graph))
            .collect::<Result<Vec<Atom>>>()?;
        let goal = parse(&self.goal, &graph)?;
        Ok(Query {
            hypotheses: HypothesisSet::new(atoms),
            goal,
            graph,
        })
    }
}

/// Witness block of a counterexample file: the refuted atom and the two
/// equilibrium profiles that disagree on it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub refuted: String,
    pub profiles: Vec<BTreeMap<String, String>>,
}

/// Counterexample document: a standard game file plus a witness block,
/// so a third party can replay the equilibrium and disagreement checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    #[serde(flatten)]
    pub game: GameDoc,
    pub witnesses: WitnessDoc,
}

impl CounterexampleDoc {
    pub fn from_counterexample(cx: &Counterexample) -> CounterexampleDoc {
        let profile_map = |p: &Profile| {
            cx.game
                .profile_labels(p)
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        CounterexampleDoc {
            game: GameDoc::from_game(&cx.game),
            witnesses: WitnessDoc {
                refuted: cx.refuted.render(cx.game.graph()),
                profiles: vec![profile_map(&cx.witness_low), profile_map(&cx.witness_high)],
            },
        }
    }

    pub fn to_parts(&self, base: Option<&Path>) -> Result<(Game, Atom, Vec<Profile>)> {
        let game = self.game.to_game(base)?;
        let atom = parse_atom(&self.witnesses.refuted, game.graph())?;
        let profiles = self
            .witnesses
            .profiles
            .iter()
            .map(|m| {
                let m = m
                    .iter()
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                game.profile_from_labels(&m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((game, atom, profiles))
    }
}

fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn write_doc<T: Serialize>(path: &Path, doc: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    read_doc::<GraphDoc>(path)?.to_graph()
}

pub fn save_graph(path: &Path, g: &Graph) -> Result<()> {
    write_doc(path, &GraphDoc::from_graph(g))
}

pub fn load_game(path: &Path) -> Result<Game> {
    read_doc::<GameDoc>(path)?.to_game(path.parent())
}

pub fn save_game(path: &Path, game: &Game) -> Result<()> {
    write_doc(path, &GameDoc::from_game(game))
}

pub fn load_query(path: &Path) -> Result<Query> {
    read_doc::<QueryDoc>(path)?.to_query(path.parent())
}

pub fn load_counterexample(path: &Path) -> Result<(Game, Atom, Vec<Profile>)> {
    read_doc::<CounterexampleDoc>(path)?.to_parts(path.parent())
}

pub fn save_counterexample(path: &Path, cx: &Counterexample) -> Result<()> {
    write_doc(path, &CounterexampleDoc::from_counterexample(cx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{counterexample, CounterexampleOptions};
    use crate::game::DEFAULT_PROFILE_GUARD;

    fn table1() -> Game {
        let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
        Game::build(
            g,
            vec![
                vec!["0".to_string(), "1".to_string()],
                vec!["0".to_string(), "1".to_string()],
            ],
            |_, _, local| {
                Rational::from_integer(if local[0] == local[1] { 1 } else { 0 }.into())
            },
        )
        .unwrap()
    }

    #[test]
    fn graph_roundtrip() {
        let g = Graph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let doc = GraphDoc::from_graph(&g);
        assert_eq!(doc.to_graph().unwrap(), g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: GraphDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn graph_doc_rejects_bad_edges() {
        let doc: GraphDoc = serde_json::from_str(
            r#"{"vertices": ["a", "b"], "edges": [["a", "a"]]}"#,
        )
        .unwrap();
        assert!(matches!(doc.to_graph(), Err(Error::LoopEdge(_))));
        let doc: GraphDoc = serde_json::from_str(
            r#"{"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}"#,
        )
        .unwrap();
        assert!(matches!(doc.to_graph(), Err(Error::DuplicateEdge(_, _))));
    }

    #[test]
    fn rational_values() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3.into()));
        assert_eq!(
            parse_rational("-7/2").unwrap(),
            Rational::new((-7).into(), 2.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(render_rational(&Rational::new(6.into(), 4.into())), "3/2");
        match ValueField::from_rational(&Rational::new(1.into(), 3.into())) {
            ValueField::Str(s) => assert_eq!(s, "1/3"),
            other => panic!("expected string form, got {:?}", other),
        }
    }

    #[test]
    fn game_roundtrip() {
        let game = table1();
        let doc = GameDoc::from_game(&game);
        let back = doc.to_game(None).unwrap();
        assert_eq!(back, game);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: GameDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_game(None).unwrap(), game);
    }

    #[test]
    fn game_doc_validation() {
        let game = table1();
        // missing table row
        let mut doc = GameDoc::from_game(&game);
        doc.payoffs.get_mut("a").unwrap().pop();
        assert!(matches!(
            doc.to_game(None),
            Err(Error::IncompleteGame { .. })
        ));
        // duplicate row
        let mut doc = GameDoc::from_game(&game);
        let dup = doc.payoffs["a"][0].clone();
        doc.payoffs.get_mut("a").unwrap().push(dup);
        assert!(matches!(doc.to_game(None), Err(Error::InvalidGame(_))));
        // key outside Adj+(v)
        let g3 = Graph::new(&["a", "b", "c"], &[("a", "b")]).unwrap();
        let game3 = Game::build(
            g3,
            vec![
                vec!["0".to_string(), "1".to_string()],
                vec!["0".to_string(), "1".to_string()],
                vec!["0".to_string(), "1".to_string()],
            ],
            |_, _, _| Rational::from_integer(0.into()),
        )
        .unwrap();
        let mut doc = GameDoc::from_game(&game3);
        for row in doc.payoffs.get_mut("a").unwrap() {
            row.profile.insert("c".to_string(), "0".to_string());
        }
        assert!(matches!(doc.to_game(None), Err(Error::InvalidGame(_))));
        // unknown strategy label in a row
        let mut doc = GameDoc::from_game(&game);
        doc.payoffs.get_mut("a").unwrap()[0]
            .profile
            .insert("b".to_string(), "zz".to_string());
        assert!(matches!(doc.to_game(None), Err(Error::InvalidGame(_))));
    }

    #[test]
    fn game_file_with_graph_reference() {
        let dir = std::env::temp_dir().join("fdgame_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let game = table1();
        save_graph(&dir.join("g.json"), game.graph()).unwrap();
        let mut doc = GameDoc::from_game(&game);
        doc.graph = GraphField::Path("g.json".to_string());
        write_doc(&dir.join("game.json"), &doc).unwrap();
        let back = load_game(&dir.join("game.json")).unwrap();
        assert_eq!(back, game);
    }

    #[test]
    fn query_parsing() {
        let text = r#"{
            "graph": {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]},
            "hypotheses": ["a |> c"],
            "goal": "b |> c -> false"
        }"#;
        let doc: QueryDoc = serde_json::from_str(text).unwrap();
        let q = doc.to_query(None).unwrap();
        assert_eq!(q.hypotheses.atoms().len(), 1);
        assert_eq!(q.goal.render(&q.graph), "b |> c -> false");
        let bad: QueryDoc = serde_json::from_str(
            r#"{"graph": {"vertices": ["a"], "edges": []}, "hypotheses": ["z |> a"], "goal": "false"}"#,
        )
        .unwrap();
        assert!(bad.to_query(None).is_err());
    }

    #[test]
    fn counterexample_roundtrip_replays() {
        let g = Graph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let atom = parse_atom("a |> c", &g).unwrap();
        let cx = counterexample(
            &g,
            &HypothesisSet::empty(),
            atom,
            &CounterexampleOptions::default(),
        )
        .unwrap();
        let doc = CounterexampleDoc::from_counterexample(&cx);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: CounterexampleDoc = serde_json::from_str(&text).unwrap();
        let (game, refuted, profiles) = parsed.to_parts(None).unwrap();
        assert_eq!(refuted, atom);
        assert_eq!(profiles.len(), 2);
        assert!(game.is_nash(&profiles[0]));
        assert!(game.is_nash(&profiles[1]));
        assert!(profiles[0].agrees_on(&profiles[1], atom.lhs));
        assert!(!profiles[0].agrees_on(&profiles[1], atom.rhs));
        assert!(!game.holds_atom(atom, DEFAULT_PROFILE_GUARD).unwrap());
    }
}
