//! Bounded generation with lazy materialisation of a regular axiom.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::matching::{match_occurrence, HyperIndex};
use super::{ChrAxiom, ContextualGrammar};
use crate::alphabet::SymbolAlphabet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Hyperarc, Hypergraph, LabelledArc};
use crate::hr::glue_names;

/// The hypergraph after `step` parallel steps, together with the
/// unexpanded part of the axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChrState {
    pub current: Hypergraph,
    pub step: usize,
    pub counter: usize,
    /// Unexpanded non-terminals of the axiom grammar, with their level.
    pending: BTreeMap<Hyperarc, usize>,
    frontier: BTreeMap<String, BTreeSet<Hyperarc>>,
    diagnostics: BTreeSet<String>,
}

impl ChrState {
    pub fn diagnostics(&self) -> impl Iterator<Item = &str> {
        self.diagnostics.iter().map(String::as_str)
    }

    /// Number of axiom non-terminals not yet expanded.
    pub fn pending_axiom_arcs(&self) -> usize {
        self.pending.len()
    }

    fn add_pending(&mut self, e: Hyperarc, level: usize) {
        for v in &e.vertices {
            self.frontier.entry(v.clone()).or_default().insert(e.clone());
        }
        self.pending.insert(e, level);
    }
}

/// A generated graph: its terminal part, the state it was read from and
/// any truncation diagnostics.
#[derive(Clone, Debug)]
pub struct ChrView {
    pub graph: Graph,
    pub diagnostics: Vec<String>,
    pub state: ChrState,
    /// Root of the axiom tree, when the axiom has exactly one vertex without
    /// an incoming binary contextual arc.
    pub root: Option<String>,
    directions: Vec<String>,
}

impl ChrView {
    pub fn is_truncated(&self) -> bool {
        !self.diagnostics.is_empty()
    }

    /// Address of each vertex reachable from the root by binary contextual
    /// arcs, as the sequence of labels read.
    pub fn addresses(&self) -> BTreeMap<String, Vec<String>> {
        let mut out = BTreeMap::new();
        let Some(root) = &self.root else { return out };
        let mut children: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
        for e in self.state.current.hyperarcs() {
            if e.arity() == 2 && self.directions.contains(&e.label) {
                children.entry(&e.vertices[0]).or_default().push((&e.label, &e.vertices[1]));
            }
        }
        out.insert(root.clone(), Vec::new());
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(v) = queue.pop_front() {
            let path = out[&v].clone();
            for &(d, w) in children.get(v.as_str()).into_iter().flatten() {
                if !out.contains_key(w) {
                    let mut p = path.clone();
                    p.push(d.to_string());
                    out.insert(w.to_string(), p);
                    queue.push_back(w.to_string());
                }
            }
        }
        out
    }

    /// The terminal arcs and colours between vertices whose address has
    /// length at most `max_len`, with vertices renamed to their addresses.
    pub fn decoded(&self, max_len: usize) -> Result<Graph> {
        if self.root.is_none() {
            return Err(Error::Unsupported("the axiom has no unique root to decode addresses from".into()));
        }
        let alphabet = SymbolAlphabet::new(self.directions.iter())?;
        let names: BTreeMap<String, String> = self
            .addresses()
            .into_iter()
            .filter(|(_, p)| p.len() <= max_len)
            .map(|(v, p)| {
                let word: Vec<usize> = p.iter().map(|d| alphabet.symbol(d).expect("direction")).collect();
                (v, alphabet.display_word(&word))
            })
            .collect();
        let mut g = Graph::new();
        for a in self.graph.arcs() {
            if let (Some(s), Some(t)) = (names.get(&a.source), names.get(&a.target)) {
                g.add_arc(LabelledArc::new(s.clone(), a.label.clone(), t.clone()));
            }
        }
        for (c, v) in self.graph.colours() {
            if let Some(v) = names.get(v) {
                g.add_colour(c, v);
            }
        }
        Ok(g)
    }
}

impl ContextualGrammar {
    pub fn initial_chr_state(&self) -> Result<ChrState> {
        let mut state = ChrState {
            current: Hypergraph::new(),
            step: 0,
            counter: 0,
            pending: BTreeMap::new(),
            frontier: BTreeMap::new(),
            diagnostics: BTreeSet::new(),
        };
        match &self.axiom {
            ChrAxiom::Finite(h) => state.current = h.clone(),
            ChrAxiom::Regular { grammar, placement } => {
                for v in grammar.axiom().vertices() {
                    state.current.add_vertex(v.clone());
                }
                for e in grammar.axiom().hyperarcs() {
                    if grammar.is_nonterminal(&e.label) {
                        state.add_pending(e.clone(), 0);
                    } else {
                        state.current.add_hyperarc(e.clone())?;
                    }
                }
                state.current.add_hyperarc(placement.clone())?;
            }
        }
        Ok(state)
    }

    fn expand_axiom(&self, state: &mut ChrState, index: &mut HyperIndex, e: &Hyperarc) -> Result<()> {
        let ChrAxiom::Regular { grammar, .. } = &self.axiom else { return Ok(()) };
        let Some(level) = state.pending.remove(e) else { return Ok(()) };
        for v in &e.vertices {
            if let Some(set) = state.frontier.get_mut(v) {
                set.remove(e);
                if set.is_empty() {
                    state.frontier.remove(v);
                }
            }
        }
        let rule = grammar
            .rule(&e.label)
            .ok_or_else(|| Error::Validation(format!("axiom non-terminal `{}` has no rule", e.label)))?;
        let fresh = glue_names(rule, &e.vertices, &mut state.counter);
        for v in rule.rhs.vertices() {
            state.current.add_vertex(fresh[v].clone());
        }
        for f in rule.rhs.hyperarcs() {
            let g = Hyperarc { label: f.label.clone(), vertices: f.vertices.iter().map(|v| fresh[v].clone()).collect() };
            if grammar.is_nonterminal(&g.label) {
                state.add_pending(g, level + 1);
            } else if state.current.add_hyperarc(g.clone())? {
                index.insert(&g);
            }
        }
        Ok(())
    }

    /// Rewrites every occurrence whose context matches in the current
    /// hypergraph, all against the same snapshot. Blocked occurrences stay.
    pub fn parallel_step(&self, state: &ChrState, axiom_depth: usize) -> Result<ChrState> {
        let mut next = state.clone();
        let mut index = HyperIndex::new(&next.current);
        let occurrences: Vec<Hyperarc> =
            state.current.hyperarcs().iter().filter(|e| self.nonterminals.contains(&e.label)).cloned().collect();
        let mut applied = Vec::new();
        for occ in &occurrences {
            'rules: for rule in self.rules_for(&occ.label) {
                loop {
                    let mut touched = BTreeSet::new();
                    if let Some(m) = match_occurrence(&index, rule, occ, &mut touched)? {
                        applied.push((occ, rule, m));
                        break 'rules;
                    }
                    let pending: Vec<Hyperarc> = touched
                        .iter()
                        .filter_map(|v| next.frontier.get(v))
                        .flatten()
                        .cloned()
                        .collect();
                    let expandable: Vec<&Hyperarc> =
                        pending.iter().filter(|e| next.pending.get(*e).is_some_and(|&l| l < axiom_depth)).collect();
                    if expandable.is_empty() {
                        if !pending.is_empty() {
                            next.diagnostics.insert(format!(
                                "frontier-truncated: {}({}) needs the axiom beyond depth {axiom_depth}",
                                occ.label,
                                occ.vertices.join(", ")
                            ));
                        }
                        break;
                    }
                    for e in expandable {
                        self.expand_axiom(&mut next, &mut index, e)?;
                    }
                }
            }
        }
        for (occ, rule, morphism) in applied {
            next.current.remove_hyperarc(occ);
            let mut names = morphism;
            let parent = occ.vertices.first().cloned().unwrap_or_default();
            for v in rule.rhs.vertices() {
                if !names.contains_key(v) {
                    names.insert(v.clone(), format!("{parent}/{v}#{}", next.counter));
                    next.counter += 1;
                }
            }
            for v in rule.rhs.vertices() {
                next.current.add_vertex(names[v].clone());
            }
            for e in rule.rhs.hyperarcs() {
                next.current.add_hyperarc(Hyperarc {
                    label: e.label.clone(),
                    vertices: e.vertices.iter().map(|v| names[v].clone()).collect(),
                })?;
            }
        }
        next.step += 1;
        Ok(next)
    }

    pub fn generate_state(&self, n: usize, axiom_depth: usize) -> Result<ChrState> {
        self.validate().into_result()?;
        let mut state = self.initial_chr_state()?;
        for _ in 0..n {
            state = self.parallel_step(&state, axiom_depth)?;
        }
        Ok(state)
    }

    /// Terminal arcs and colours after `n` parallel steps, expanding a
    /// regular axiom at most `axiom_depth` levels deep.
    pub fn generate(&self, n: usize, axiom_depth: usize) -> Result<ChrView> {
        let state = self.generate_state(n, axiom_depth)?;
        Ok(self.view(state))
    }

    pub fn view(&self, state: ChrState) -> ChrView {
        let graph = state.current.graph_part(|l| self.terminals.contains(l));
        let directions: Vec<String> =
            self.contextual.iter().filter(|&(_, n)| n == 2).map(|(l, _)| l.to_string()).collect();
        let axiom_vertices: BTreeSet<&String> = match &self.axiom {
            ChrAxiom::Finite(h) => h.vertices().iter().collect(),
            ChrAxiom::Regular { grammar, .. } => grammar.axiom().vertices().iter().collect(),
        };
        let mut roots: BTreeSet<&String> = axiom_vertices;
        for e in state.current.hyperarcs() {
            if e.arity() == 2 && directions.contains(&e.label) {
                roots.remove(&e.vertices[1]);
            }
        }
        let root = if roots.len() == 1 { roots.pop_first().cloned() } else { None };
        ChrView { graph, diagnostics: state.diagnostics().map(str::to_string).collect(), state, root, directions }
    }
}
