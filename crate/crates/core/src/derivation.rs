//! The proof system over a graph: Reflexivity, Augmentation,
//! Transitivity, and the graph-specific Contiguity rule, plus a
//! hypothesis set.
//!
//! Two independent routes decide atom derivability:
//!
//! * [`saturate_atoms`] — a brute-force oracle that closes the full atom
//!   space under every rule instance (guarded to very small graphs);
//! * [`closure_map`] — a per-vertex closure fixpoint `L ↦ {v : H ⊢ L |> v}`
//!   with Contiguity canonicalized to one instance per (L, cut).
//!
//! The two must agree wherever both run; tests enforce it. On top of the
//! closure sit the atom and formula decision procedures, proof-trace
//! extraction with an independent step checker, and the sparse-set
//! principle.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::graph::{Cut, Graph, VertexSet};

/// Vertex bound for the brute-force oracle (the atom space is 4^|V|).
pub const ORACLE_MAX_VERTICES: usize = 5;

/// Guard on the number of distinct atoms in a formula decision.
pub const MAX_FORMULA_ATOMS: usize = 20;

/// A set of dependence atoms taken as additional axioms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HypothesisSet {
    atoms: Vec<Atom>,
}

impl HypothesisSet {
    pub fn new(mut atoms: Vec<Atom>) -> Self {
        atoms.sort();
        atoms.dedup();
        HypothesisSet { atoms }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.atoms.binary_search(a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Tuning knobs for the closure fixpoint.
#[derive(Debug, Clone)]
pub struct ClosureOptions {
    /// Maximum |V|; the fixpoint state is 2^|V| sets and rule
    /// application scans 2^|V| cuts per set.
    pub max_vertices: usize,
    /// Disables the Contiguity rule when false (the remaining rules are
    /// the plain Armstrong closure).
    pub contiguity: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            max_vertices: 12,
            contiguity: true,
        }
    }
}

/// The map `L ↦ {v : H ⊢ L |> v}` for every `L ⊆ V`, at fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureMap {
    masks: Vec<u64>,
}

impl ClosureMap {
    pub fn closure(&self, l: VertexSet) -> VertexSet {
        VertexSet::from_bits(self.masks[l.bits() as usize])
    }
}

fn borders_of_all_masks(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    (0..1u64 << n)
        .map(|u| g.border(VertexSet::from_bits(u)).expect("subset of V").bits())
        .collect()
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Extra rules the oracle may close under, for admissibility checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleExtras {
    pub left_mono: bool,
    pub right_mono: bool,
}

/// Least set of atoms containing the hypotheses, every Reflexivity
/// instance, and closed under Augmentation, Transitivity, and every
/// Contiguity instance (all cuts, all premise decompositions).
pub fn saturate_atoms(g: &Graph, h: &HypothesisSet) -> Result<Vec<Atom>> {
    saturate_atoms_with(g, h, OracleExtras::default())
}

/// Oracle with optional extra derived rules; used to show LeftMono and
/// RightMono are admissible (they must not change the result).
pub fn saturate_atoms_with(
    g: &Graph,
    h: &HypothesisSet,
    extras: OracleExtras,
) -> Result<Vec<Atom>> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::DerivationTooLarge(n, ORACLE_MAX_VERTICES));
    }
    let sets = 1usize << n;
    let full = g.full_set().bits();
    let borders = borders_of_all_masks(g);
    let idx = |a: u64, b: u64| (a as usize) * sets + b as usize;
    let mut derived = vec![false; sets * sets];

    // Reflexivity instances and hypotheses
    for a in 0..sets as u64 {
        let mut b = a;
        loop {
            derived[idx(a, b)] = true;
            if b == 0 {
                break;
            }
            b = (b - 1) & a;
        }
    }
    for atom in h.atoms() {
        derived[idx(atom.lhs.bits(), atom.rhs.bits())] = true;
    }

    loop {
        let mut changed = false;
        let mut add = |derived: &mut Vec<bool>, a: u64, b: u64| {
            let i = (a as usize) * sets + b as usize;
            if !derived[i] {
                derived[i] = true;
                changed = true;
            }
        };
        for a in 0..sets as u64 {
            for b in 0..sets as u64 {
                if !derived[idx(a, b)] {
                    continue;
                }
                // Augmentation: every C
                for c in 0..sets as u64 {
                    add(&mut derived, a | c, b | c);
                }
                // Transitivity: chain through b
                for c in 0..sets as u64 {
                    if derived[idx(b, c)] {
                        add(&mut derived, a, c);
                    }
                }
                // Contiguity: premise (a |> b) read as (A ∪ B') |> C with
                // A ⊆ U, C ⊆ W; every cut, every decomposition B' of a
                for u in 0..sets as u64 {
                    let w = full & !u;
                    if b & !w != 0 {
                        continue;
                    }
                    let base = a & !u; // must be inside B'
                    let free = a & u;
                    let mut t = free;
                    loop {
                        let bp = base | t;
                        add(&mut derived, borders[u as usize] | borders[w as usize] | bp, b);
                        if t == 0 {
                            break;
                        }
                        t = (t - 1) & free;
                    }
                }
                if extras.left_mono {
                    for c in 0..sets as u64 {
                        add(&mut derived, a | c, b);
                    }
                }
                if extras.right_mono {
                    let mut c = b;
                    loop {
                        add(&mut derived, a, c);
                        if c == 0 {
                            break;
                        }
                        c = (c - 1) & b;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = Vec::new();
    for a in 0..sets as u64 {
        for b in 0..sets as u64 {
            if derived[idx(a, b)] {
                out.push(Atom::new(VertexSet::from_bits(a), VertexSet::from_bits(b)));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Closure fixpoint
// ---------------------------------------------------------------------------

/// Why a vertex entered a closure set; references are to facts derived
/// strictly earlier, so reasons form a DAG.
#[derive(Debug, Clone, Copy)]
enum Reason {
    /// v ∈ L.
    Refl,
    /// Hypothesis `hyp` fired: its left side was inside clos(L).
    Hyp { hyp: usize },
    /// Chaining: `mid` ⊆ clos(L) and v ∈ clos(mid) (snapshot).
    Trans { mid: u64 },
    /// Monotonicity: v ∈ clos(from) for some from ⊂ L.
    Mono { from: u64 },
    /// Contiguity on clos(src) with the cut (cut_u, V ∖ cut_u).
    Contig { src: u64, cut_u: u64 },
}

/// Fact key (left-side mask, vertex) to (insertion index, reason).
type ReasonMap = HashMap<(u64, usize), (usize, Reason)>;

struct FixpointRun {
    masks: Vec<u64>,
    /// Reason per (set, vertex) fact plus its insertion index.
    reasons: Option<ReasonMap>,
}

fn run_fixpoint(g: &Graph, h: &HypothesisSet, opts: &ClosureOptions, trace: bool) -> FixpointRun {
    let n = g.vertex_count();
    let sets = 1usize << n;
    let full = g.full_set().bits();
    let borders = borders_of_all_masks(g);
    let hyps: Vec<(u64, u64)> = h
        .atoms()
        .iter()
        .map(|a| (a.lhs.bits(), a.rhs.bits()))
        .collect();

    let mut masks: Vec<u64> = (0..sets as u64).collect();
    let mut reasons: Option<ReasonMap> = if trace {
        let mut m = HashMap::new();
        for l in 0..sets as u64 {
            for v in VertexSet::from_bits(l).iter() {
                m.insert((l, v), (m.len(), Reason::Refl));
            }
        }
        Some(m)
    } else {
        None
    };

    let mut changed = true;
    while changed {
        changed = false;
        let add = |masks: &mut Vec<u64>,
                       reasons: &mut Option<ReasonMap>,
                       l: u64,
                       vs: u64,
                       reason: Reason| {
            let new = vs & !masks[l as usize];
            if new == 0 {
                return false;
            }
            if let Some(map) = reasons {
                for v in VertexSet::from_bits(new).iter() {
                    let t = map.len();
                    map.insert((l, v), (t, reason));
                }
            }
            masks[l as usize] |= new;
            true
        };

        for l in 0..sets as u64 {
            // (H) hypotheses fire inside clos(L)
            for (i, &(c, d)) in hyps.iter().enumerate() {
                if c & !masks[l as usize] == 0 {
                    changed |= add(&mut masks, &mut reasons, l, d, Reason::Hyp { hyp: i });
                }
            }
            // (T) transitive chaining through the current closure
            let mid = masks[l as usize];
            let vs = masks[mid as usize];
            changed |= add(&mut masks, &mut reasons, l, vs, Reason::Trans { mid });
            // (M) monotonicity into supersets one vertex larger
            let free = full & !l;
            let cur = masks[l as usize];
            for v in VertexSet::from_bits(free).iter() {
                changed |= add(
                    &mut masks,
                    &mut reasons,
                    l | (1 << v),
                    cur,
                    Reason::Mono { from: l },
                );
            }
            // (C) contiguity, canonical instance per (L, cut)
            if opts.contiguity {
                for u in 0..sets as u64 {
                    let w = full & !u;
                    let cset = masks[l as usize] & w;
                    if cset == 0 {
                        continue;
                    }
                    let k = borders[u as usize] | borders[w as usize] | (l & w);
                    changed |= add(
                        &mut masks,
                        &mut reasons,
                        k,
                        cset,
                        Reason::Contig { src: l, cut_u: u },
                    );
                }
            }
        }
    }
    FixpointRun { masks, reasons }
}

fn check_bound(g: &Graph, opts: &ClosureOptions) -> Result<()> {
    if g.vertex_count() > opts.max_vertices {
        return Err(Error::DerivationTooLarge(
            g.vertex_count(),
            opts.max_vertices,
        ));
    }
    Ok(())
}

/// Computes the closure map `L ↦ {v : H ⊢ L |> v}` for every `L ⊆ V`.
pub fn closure_map(g: &Graph, h: &HypothesisSet, opts: &ClosureOptions) -> Result<ClosureMap> {
    check_bound(g, opts)?;
    Ok(ClosureMap {
        masks: run_fixpoint(g, h, opts, false).masks,
    })
}

/// `H ⊢ atom`, decided per vertex: the right side must sit inside the
/// closure of the left side.
pub fn derives_atom(g: &Graph, h: &HypothesisSet, atom: Atom, opts: &ClosureOptions) -> Result<bool> {
    let clos = closure_map(g, h, opts)?;
    Ok(atom.rhs.is_subset(clos.closure(atom.lhs)))
}

/// `⊢ f`: for each truth assignment falsifying `f` propositionally, test
/// whether it is realizable — no atom assigned false may be derivable
/// from the atoms assigned true. The formula is derivable iff no
/// falsifying assignment is realizable.
pub fn decide_formula(g: &Graph, f: &Formula, opts: &ClosureOptions) -> Result<bool> {
    check_bound(g, opts)?;
    let atoms = f.atoms();
    if atoms.len() > MAX_FORMULA_ATOMS {
        return Err(Error::TooManyAtoms(atoms.len(), MAX_FORMULA_ATOMS));
    }
    let mut memo: HashMap<u64, ClosureMap> = HashMap::new();
    for tau in 0u64..1 << atoms.len() {
        let truth: HashMap<Atom, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, tau & (1 << i) != 0))
            .collect();
        if f.eval_prop(g, &truth)? {
            continue;
        }
        let clos = match memo.entry(tau) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                let hyp = HypothesisSet::new(
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| tau & (1 << i) != 0)
                        .map(|(_, &a)| a)
                        .collect(),
                );
                e.insert(closure_map(g, &hyp, opts)?)
            }
        };
        let realizable = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| tau & (1 << i) == 0)
            .all(|(_, &a)| !a.rhs.is_subset(clos.closure(a.lhs)));
        if realizable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The sparse-set principle as a formula: if every `v ∈ w` is determined
/// by all other vertices, then `V ∖ w` determines `w`. Encoded as nested
/// implications; requires `w` sparse.
/// A small random hypothesis set (0 to 3 atoms) drawn deterministically
/// from `seed`; the sampling backbone of the fuzzing pipelines.
pub fn random_hypotheses(g: &Graph, seed: u64) -> HypothesisSet {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let full = g.full_set().bits();
    let count = rng.gen_range(0..=3);
    HypothesisSet::new(
        (0..count)
            .map(|_| {
                Atom::new(
                    VertexSet::from_bits(rng.gen::<u64>() & full),
                    VertexSet::from_bits(rng.gen::<u64>() & full),
                )
            })
            .collect(),
    )
}

pub fn sparse_principle_formula(g: &Graph, w: VertexSet) -> Result<Formula> {
    if !g.is_sparse(w)? {
        return Err(Error::NotSparse(g.render_set(w)));
    }
    let full = g.full_set();
    let conclusion = Formula::Dep(Atom::new(full.difference(w), w));
    let mut f = conclusion;
    for v in w.iter().collect::<Vec<_>>().into_iter().rev() {
        let hyp = Formula::Dep(Atom::new(
            full.difference(VertexSet::singleton(v)),
            VertexSet::singleton(v),
        ));
        f = Formula::implies(hyp, f);
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Proof traces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofRule {
    Reflexivity,
    Augmentation,
    Transitivity,
    Contiguity,
    Hypothesis,
    LeftMono,
    RightMono,
}

impl std::fmt::Display for ProofRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProofRule::Reflexivity => "Reflexivity",
            ProofRule::Augmentation => "Augmentation",
            ProofRule::Transitivity => "Transitivity",
            ProofRule::Contiguity => "Contiguity",
            ProofRule::Hypothesis => "Hypothesis",
            ProofRule::LeftMono => "LeftMono",
            ProofRule::RightMono => "RightMono",
        };
        f.write_str(s)
    }
}

/// One mechanically checkable inference. `param` carries the added set
/// for Augmentation and the retained set B for Contiguity.
#[derive(Debug, Clone)]
pub struct ProofStep {
    pub rule: ProofRule,
    pub premises: Vec<usize>,
    pub conclusion: Atom,
    pub cut: Option<Cut>,
    pub param: Option<VertexSet>,
}

/// Validates every step of a trace against the rules and checks the last
/// conclusion equals `goal`. Independent of trace construction.
pub fn check_trace(g: &Graph, h: &HypothesisSet, steps: &[ProofStep], goal: Atom) -> Result<()> {
    let fail = |k: usize, msg: &str| -> Error {
        Error::BadProofStep {
            step: k + 1,
            msg: msg.to_string(),
        }
    };
    for (k, step) in steps.iter().enumerate() {
        if step.premises.iter().any(|&p| p >= k) {
            return Err(fail(k, "premise index out of range"));
        }
        let prem: Vec<Atom> = step.premises.iter().map(|&p| steps[p].conclusion).collect();
        let c = step.conclusion;
        match step.rule {
            ProofRule::Reflexivity => {
                if !prem.is_empty() || !c.rhs.is_subset(c.lhs) {
                    return Err(fail(k, "Reflexivity needs no premises and rhs ⊆ lhs"));
                }
            }
            ProofRule::Hypothesis => {
                if !prem.is_empty() || !h.contains(&c) {
                    return Err(fail(k, "conclusion is not a hypothesis"));
                }
            }
            ProofRule::Augmentation => {
                let (Some(p), Some(added)) = (prem.first(), step.param) else {
                    return Err(fail(k, "Augmentation needs one premise and a set parameter"));
                };
                if prem.len() != 1
                    || c.lhs != p.lhs.union(added)
                    || c.rhs != p.rhs.union(added)
                {
                    return Err(fail(k, "conclusion does not augment the premise"));
                }
            }
            ProofRule::Transitivity => {
                if prem.len() != 2 || prem[0].rhs != prem[1].lhs {
                    return Err(fail(k, "Transitivity premises do not chain"));
                }
                if c.lhs != prem[0].lhs || c.rhs != prem[1].rhs {
                    return Err(fail(k, "conclusion does not follow by Transitivity"));
                }
            }
            ProofRule::Contiguity => {
                let (Some(p), Some(cut), Some(b)) = (prem.first(), step.cut, step.param) else {
                    return Err(fail(k, "Contiguity needs one premise, a cut, and a set"));
                };
                if prem.len() != 1 {
                    return Err(fail(k, "Contiguity takes exactly one premise"));
                }
                if !cut.u.intersection(cut.w).is_empty() || cut.u.union(cut.w) != g.full_set() {
                    return Err(fail(k, "not a cut of the graph"));
                }
                if !b.is_subset(p.lhs) || !p.lhs.difference(b).is_subset(cut.u) {
                    return Err(fail(k, "premise does not decompose as A,B with A ⊆ U"));
                }
                if !p.rhs.is_subset(cut.w) {
                    return Err(fail(k, "premise right side not inside W"));
                }
                let expect = g
                    .border(cut.u)?
                    .union(g.border(cut.w)?)
                    .union(b);
                if c.lhs != expect || c.rhs != p.rhs {
                    return Err(fail(k, "conclusion does not follow by Contiguity"));
                }
            }
            ProofRule::LeftMono => {
                if prem.len() != 1 || c.rhs != prem[0].rhs || !prem[0].lhs.is_subset(c.lhs) {
                    return Err(fail(k, "conclusion does not weaken the left side"));
                }
            }
            ProofRule::RightMono => {
                if prem.len() != 1 || c.lhs != prem[0].lhs || !c.rhs.is_subset(prem[0].rhs) {
                    return Err(fail(k, "conclusion does not shrink the right side"));
                }
            }
        }
    }
    match steps.last() {
        Some(last) if last.conclusion == goal => Ok(()),
        _ => Err(Error::BadProofStep {
            step: steps.len(),
            msg: "final conclusion is not the goal".to_string(),
        }),
    }
}

struct TraceBuilder<'a> {
    g: &'a Graph,
    h: &'a HypothesisSet,
    log: &'a ReasonMap,
    steps: Vec<ProofStep>,
    /// (L, v) fact → step index concluding `L |> {v}`.
    fact_step: HashMap<(u64, usize), usize>,
    /// (L, S) aggregate → step index concluding `L |> S`.
    agg_step: HashMap<(u64, u64), usize>,
}

impl<'a> TraceBuilder<'a> {
    fn push(
        &mut self,
        rule: ProofRule,
        premises: Vec<usize>,
        conclusion: Atom,
        cut: Option<Cut>,
        param: Option<VertexSet>,
    ) -> usize {
        self.steps.push(ProofStep {
            rule,
            premises,
            conclusion,
            cut,
            param,
        });
        self.steps.len() - 1
    }

    /// Emits the per-vertex fact `L |> {v}`; every dependency has a
    /// strictly earlier insertion index, so facts are emitted in
    /// insertion order by the caller and are present when needed.
    fn emit_fact(&mut self, l: u64, v: usize) -> usize {
        if let Some(&s) = self.fact_step.get(&(l, v)) {
            return s;
        }
        let lset = VertexSet::from_bits(l);
        let vset = VertexSet::singleton(v);
        let (_, reason) = self.log[&(l, v)];
        let step = match reason {
            Reason::Refl => self.push(
                ProofRule::Reflexivity,
                vec![],
                Atom::new(lset, vset),
                None,
                None,
            ),
            Reason::Hyp { hyp } => {
                let atom = self.h.atoms()[hyp];
                let s_lhs = self.emit_agg(l, atom.lhs.bits());
                let s_hyp = self.push(ProofRule::Hypothesis, vec![], atom, None, None);
                let s_trans = self.push(
                    ProofRule::Transitivity,
                    vec![s_lhs, s_hyp],
                    Atom::new(lset, atom.rhs),
                    None,
                    None,
                );
                if atom.rhs == vset {
                    s_trans
                } else {
                    self.push(
                        ProofRule::RightMono,
                        vec![s_trans],
                        Atom::new(lset, vset),
                        None,
                        None,
                    )
                }
            }
            Reason::Trans { mid } => {
                let s_mid = self.emit_agg(l, mid);
                let s_v = self.emit_fact(mid, v);
                self.push(
                    ProofRule::Transitivity,
                    vec![s_mid, s_v],
                    Atom::new(lset, vset),
                    None,
                    None,
                )
            }
            Reason::Mono { from } => {
                let s = self.emit_fact(from, v);
                self.push(ProofRule::LeftMono, vec![s], Atom::new(lset, vset), None, None)
            }
            Reason::Contig { src, cut_u } => {
                let s = self.emit_fact(src, v);
                let full = self.g.full_set();
                let u = VertexSet::from_bits(cut_u);
                let w = full.difference(u);
                let b = VertexSet::from_bits(src).intersection(w);
                self.push(
                    ProofRule::Contiguity,
                    vec![s],
                    Atom::new(lset, vset),
                    Some(Cut { u, w }),
                    Some(b),
                )
            }
        };
        self.fact_step.insert((l, v), step);
        step
    }

    /// Emits `L |> S` by folding per-vertex facts with Augmentation and
    /// Transitivity.
    fn emit_agg(&mut self, l: u64, s: u64) -> usize {
        if let Some(&idx) = self.agg_step.get(&(l, s)) {
            return idx;
        }
        let lset = VertexSet::from_bits(l);
        let members: Vec<usize> = VertexSet::from_bits(s).iter().collect();
        let step = if members.is_empty() {
            self.push(
                ProofRule::Reflexivity,
                vec![],
                Atom::new(lset, VertexSet::EMPTY),
                None,
                None,
            )
        } else {
            let mut acc = self.emit_fact(l, members[0]);
            let mut acc_set = VertexSet::singleton(members[0]);
            for &v in &members[1..] {
                let vset = VertexSet::singleton(v);
                let sv = self.emit_fact(l, v);
                let widened = self.push(
                    ProofRule::Augmentation,
                    vec![acc],
                    Atom::new(lset.union(vset), acc_set.union(vset)),
                    None,
                    Some(vset),
                );
                let bridge = self.push(
                    ProofRule::Augmentation,
                    vec![sv],
                    Atom::new(lset, lset.union(vset)),
                    None,
                    Some(lset),
                );
                acc_set = acc_set.union(vset);
                acc = self.push(
                    ProofRule::Transitivity,
                    vec![bridge, widened],
                    Atom::new(lset, acc_set),
                    None,
                    None,
                );
            }
            acc
        };
        self.agg_step.insert((l, s), step);
        step
    }
}

/// Extracts a checkable derivation of `atom` from `h`. Errors with
/// [`Error::NoProof`] when the atom is not derivable.
pub fn derive_trace(
    g: &Graph,
    h: &HypothesisSet,
    atom: Atom,
    opts: &ClosureOptions,
) -> Result<Vec<ProofStep>> {
    check_bound(g, opts)?;
    let run = run_fixpoint(g, h, opts, true);
    let log = run.reasons.as_ref().expect("trace mode records reasons");
    if !atom.rhs.is_subset(VertexSet::from_bits(run.masks[atom.lhs.bits() as usize])) {
        return Err(Error::NoProof(atom.render(g)));
    }
    let mut builder = TraceBuilder {
        g,
        h,
        log,
        steps: Vec::new(),
        fact_step: HashMap::new(),
        agg_step: HashMap::new(),
    };
    let last = builder.emit_agg(atom.lhs.bits(), atom.rhs.bits());
    let mut steps = builder.steps;
    if steps[last].conclusion != atom || last + 1 != steps.len() {
        // restate a memoized conclusion as the final step
        steps.push(ProofStep {
            rule: ProofRule::LeftMono,
            premises: vec![last],
            conclusion: atom,
            cut: None,
            param: None,
        });
    }
    Ok(steps)
}

/// Renders a trace one numbered step per line.
pub fn render_trace(g: &Graph, steps: &[ProofStep]) -> String {
    let mut out = String::new();
    for (k, step) in steps.iter().enumerate() {
        out.push_str(&format!("{}. {} [{}", k + 1, step.conclusion.render(g), step.rule));
        if !step.premises.is_empty() {
            let ps: Vec<String> = step.premises.iter().map(|p| (p + 1).to_string()).collect();
            out.push_str(&format!(" from {}", ps.join(",")));
        }
        if let Some(cut) = step.cut {
            out.push_str(&format!(
                "; cut=({}|{})",
                g.render_set(cut.u),
                g.render_set(cut.w)
            ));
        }
        out.push_str("]\n");
    }
    out
}
