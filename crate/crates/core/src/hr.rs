//! Deterministic hyperedge-replacement grammars.
//!
//! Generation is complete parallel rewriting: every non-terminal hyperarc
//! of the current hypergraph is replaced at once. Fresh vertices are named
//! `<first attachment vertex>/<local name>#<counter>`, so level `n` is a
//! literal subgraph of level `n + 1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Hyperarc, Hypergraph, RankedAlphabet};

/// Largest non-terminal arity accepted by the interface fixpoints.
pub const MAX_INTERFACE_ARITY: usize = 12;

/// The rule `A(x1, ..., xp) -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrRule {
    pub nonterminal: String,
    pub formal: Vec<String>,
    pub rhs: Hypergraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub(crate) fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic { location: location.into(), message: message.into() });
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let text: Vec<String> = self.diagnostics.iter().map(ToString::to_string).collect();
            Err(Error::Validation(text.join("; ")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRGrammar {
    nonterminals: RankedAlphabet,
    terminals: RankedAlphabet,
    rules: Vec<HrRule>,
    axiom: Hypergraph,
}

/// The hypergraph `H_n` reached after `level` parallel steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationState {
    pub current: Hypergraph,
    pub level: usize,
    pub counter: usize,
}

pub(crate) fn check_hypergraph(
    report: &mut ValidationReport,
    location: &str,
    h: &Hypergraph,
    lookup: &dyn Fn(&str) -> Option<usize>,
) {
    for e in h.hyperarcs() {
        match lookup(&e.label) {
            None => report.push(location, format!("label `{}` is not declared", e.label)),
            Some(n) if n != e.arity() => report.push(
                location,
                format!("`{}` has arity {n} but is used with {} vertices", e.label, e.arity()),
            ),
            Some(_) => {}
        }
    }
}

impl HRGrammar {
    /// Assembles a grammar without checking it; see [`validate`](Self::validate).
    pub fn from_parts(
        nonterminals: RankedAlphabet,
        terminals: RankedAlphabet,
        axiom: Hypergraph,
        rules: Vec<HrRule>,
    ) -> Self {
        HRGrammar { nonterminals, terminals, rules, axiom }
    }

    /// Assembles a grammar and fails with every diagnostic if it is invalid.
    pub fn new(
        nonterminals: RankedAlphabet,
        terminals: RankedAlphabet,
        axiom: Hypergraph,
        rules: Vec<HrRule>,
    ) -> Result<Self> {
        let g = Self::from_parts(nonterminals, terminals, axiom, rules);
        g.validate().into_result()?;
        Ok(g)
    }

    pub fn nonterminals(&self) -> &RankedAlphabet {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &RankedAlphabet {
        &self.terminals
    }

    pub fn rules(&self) -> &[HrRule] {
        &self.rules
    }

    pub fn axiom(&self) -> &Hypergraph {
        &self.axiom
    }

    pub fn rule(&self, nonterminal: &str) -> Option<&HrRule> {
        self.rules.iter().find(|r| r.nonterminal == nonterminal)
    }

    pub fn is_nonterminal(&self, label: &str) -> bool {
        self.nonterminals.contains(label)
    }

    fn arity(&self, label: &str) -> Option<usize> {
        self.nonterminals.arity(label).or_else(|| self.terminals.arity(label))
    }

    /// Checks determinism, arities, declarations and rule coverage. Every
    /// problem yields its own diagnostic.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (t, n) in self.terminals.iter() {
            if self.nonterminals.contains(t) {
                report.push("alphabets", format!("`{t}` is both terminal and non-terminal"));
            }
            if n > 2 {
                report.push("alphabets", format!("terminal `{t}` has arity {n}; terminals have arity 1 or 2"));
            }
        }
        let lookup = |l: &str| self.arity(l);
        check_hypergraph(&mut report, "axiom", &self.axiom, &lookup);
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, r) in self.rules.iter().enumerate() {
            let loc = format!("rule {} ({})", i + 1, r.nonterminal);
            match self.nonterminals.arity(&r.nonterminal) {
                None => report.push(&loc, format!("`{}` is not a declared non-terminal", r.nonterminal)),
                Some(n) if n != r.formal.len() => {
                    report.push(&loc, format!("left side has {} formal vertices, arity is {n}", r.formal.len()))
                }
                Some(_) => {}
            }
            let distinct: BTreeSet<&String> = r.formal.iter().collect();
            if distinct.len() != r.formal.len() {
                report.push(&loc, "formal vertices are not pairwise distinct");
            }
            if let Some(first) = seen.insert(&r.nonterminal, i) {
                report.push(
                    &loc,
                    format!("second rule for `{}` (first is rule {}); grammars are deterministic", r.nonterminal, first + 1),
                );
            }
            check_hypergraph(&mut report, &loc, &r.rhs, &lookup);
        }
        let mut used: BTreeMap<&str, String> = BTreeMap::new();
        for e in self.axiom.hyperarcs() {
            used.entry(&e.label).or_insert_with(|| "axiom".to_string());
        }
        for r in &self.rules {
            for e in r.rhs.hyperarcs() {
                used.entry(&e.label).or_insert_with(|| format!("rule for {}", r.nonterminal));
            }
        }
        for (label, loc) in used {
            if self.nonterminals.contains(label) && !seen.contains_key(label) {
                report.push(loc, format!("non-terminal `{label}` has no rule"));
            }
        }
        report
    }

    pub fn initial_state(&self) -> GenerationState {
        GenerationState { current: self.axiom.clone(), level: 0, counter: 0 }
    }

    /// Replaces one non-terminal hyperarc by a fresh copy of its rule.
    pub fn rewrite_step(&self, state: &GenerationState, which: &Hyperarc) -> Result<GenerationState> {
        if !state.current.contains(which) {
            return Err(Error::Validation(format!("hyperarc `{}` is not in the current hypergraph", which.label)));
        }
        let rule = self
            .rule(&which.label)
            .ok_or_else(|| Error::Validation(format!("`{}` is not a non-terminal with a rule", which.label)))?;
        let mut next = state.clone();
        next.current.remove_hyperarc(which);
        self.glue(&mut next, rule, &which.vertices)?;
        Ok(next)
    }

    fn glue(&self, state: &mut GenerationState, rule: &HrRule, attach: &[String]) -> Result<()> {
        let fresh = glue_names(rule, attach, &mut state.counter);
        for v in rule.rhs.vertices() {
            state.current.add_vertex(fresh[v].clone());
        }
        for e in rule.rhs.hyperarcs() {
            state.current.add_hyperarc(Hyperarc { label: e.label.clone(), vertices: e.vertices.iter().map(|v| fresh[v].clone()).collect() })?;
        }
        Ok(())
    }

    /// Rewrites every non-terminal hyperarc once, in sorted order.
    pub fn parallel_step(&self, state: &GenerationState) -> Result<GenerationState> {
        let occurrences: Vec<Hyperarc> =
            state.current.hyperarcs().iter().filter(|e| self.is_nonterminal(&e.label)).cloned().collect();
        let mut next = state.clone();
        for e in &occurrences {
            let rule = self
                .rule(&e.label)
                .ok_or_else(|| Error::Validation(format!("non-terminal `{}` has no rule", e.label)))?;
            next.current.remove_hyperarc(e);
            self.glue(&mut next, rule, &e.vertices)?;
        }
        next.level += 1;
        Ok(next)
    }

    pub fn generate_state(&self, n: usize) -> Result<GenerationState> {
        self.validate().into_result()?;
        let mut s = self.initial_state();
        for _ in 0..n {
            s = self.parallel_step(&s)?;
        }
        Ok(s)
    }

    /// `[H_n]`: the terminal arcs and colours after `n` parallel steps.
    pub fn generate(&self, n: usize) -> Result<Graph> {
        let s = self.generate_state(n)?;
        Ok(self.terminal_part(&s.current))
    }

    pub fn terminal_part(&self, h: &Hypergraph) -> Graph {
        h.graph_part(|l| self.terminals.contains(l))
    }

    fn check_colour(&self, colour: &str) -> Result<()> {
        match self.terminals.arity(colour) {
            Some(1) => Ok(()),
            Some(n) => Err(Error::Validation(format!("`{colour}` has arity {n}, not a colour"))),
            None => Err(Error::Validation(format!("unknown colour `{colour}`"))),
        }
    }

    fn check_interface_arity(&self) -> Result<()> {
        let m = self.nonterminals.max_arity();
        if m > MAX_INTERFACE_ARITY {
            return Err(Error::Unsupported(format!(
                "non-terminal arity {m} exceeds the interface cap of {MAX_INTERFACE_ARITY}"
            )));
        }
        Ok(())
    }

    /// A grammar generating the same graph with `new_colour` added on every
    /// vertex reachable from a `source` vertex (the sources included).
    /// Reachability follows arcs forwards, or both ways when `symmetric`.
    pub fn accessible_colouring(&self, source: &str, new_colour: &str, symmetric: bool) -> Result<HRGrammar> {
        self.validate().into_result()?;
        self.check_colour(source)?;
        self.check_colour(new_colour)?;
        self.check_interface_arity()?;
        let summaries = self.reach_summaries(source, symmetric);
        let reached_in = |h: &Hypergraph, entry: &BTreeSet<String>| -> BTreeSet<String> {
            let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
            let mut start: BTreeSet<&str> = entry.iter().map(String::as_str).collect();
            for e in h.hyperarcs() {
                if let Some((reach, src)) = summaries.get(&e.label) {
                    for &(i, j) in reach {
                        adj.entry(&e.vertices[i]).or_default().push(&e.vertices[j]);
                    }
                    start.extend(src.iter().map(|&i| e.vertices[i].as_str()));
                } else if e.label == source {
                    start.insert(&e.vertices[0]);
                } else if e.arity() == 2 && self.terminals.contains(&e.label) {
                    adj.entry(&e.vertices[0]).or_default().push(&e.vertices[1]);
                    if symmetric {
                        adj.entry(&e.vertices[1]).or_default().push(&e.vertices[0]);
                    }
                }
            }
            closure(&adj, start).into_iter().map(str::to_string).collect()
        };
        self.annotate(new_colour, &reached_in, true)
    }

    /// A grammar generating the subgraph induced by the vertices carrying
    /// `colour`; colours survive only on those vertices.
    pub fn colour_restriction(&self, colour: &str) -> Result<HRGrammar> {
        self.validate().into_result()?;
        self.check_colour(colour)?;
        self.check_interface_arity()?;
        let col = self.colour_summaries(colour);
        let coloured_in = |h: &Hypergraph, entry: &BTreeSet<String>| -> BTreeSet<String> {
            let mut out = entry.clone();
            for e in h.hyperarcs() {
                if e.label == colour {
                    out.insert(e.vertices[0].clone());
                } else if let Some(c) = col.get(&e.label) {
                    out.extend(c.iter().map(|&i| e.vertices[i].clone()));
                }
            }
            out
        };
        self.annotate(colour, &coloured_in, false)
    }

    /// Builds the annotated grammar. `marked(h, entry)` returns the vertices
    /// of `h` carrying the property given that `entry` already carry it.
    /// With `add`, the property is materialized as colour `colour`;
    /// otherwise terminals are restricted to marked vertices.
    fn annotate(
        &self,
        colour: &str,
        marked: &dyn Fn(&Hypergraph, &BTreeSet<String>) -> BTreeSet<String>,
        add: bool,
    ) -> Result<HRGrammar> {
        let name = |label: &str, positions: &BTreeSet<usize>| -> String {
            let ps: Vec<String> = positions.iter().map(|i| (i + 1).to_string()).collect();
            format!("{label}[{}]", ps.join(","))
        };
        let mut nonterminals: Vec<(String, usize)> = Vec::new();
        let mut rules = Vec::new();
        let mut done: BTreeSet<(String, BTreeSet<usize>)> = BTreeSet::new();
        let mut queue: VecDeque<(String, BTreeSet<usize>)> = VecDeque::new();

        let rewrite = |h: &Hypergraph,
                       keep_formal: &BTreeSet<String>,
                       entry: &BTreeSet<String>,
                       queue: &mut VecDeque<(String, BTreeSet<usize>)>|
         -> Result<Hypergraph> {
            let m = marked(h, entry);
            let mut out = Hypergraph::new();
            for v in h.vertices() {
                out.add_vertex(v.clone());
            }
            for e in h.hyperarcs() {
                if self.is_nonterminal(&e.label) {
                    let pos: BTreeSet<usize> = (0..e.arity()).filter(|&i| m.contains(&e.vertices[i])).collect();
                    out.add_hyperarc(Hyperarc { label: name(&e.label, &pos), vertices: e.vertices.clone() })?;
                    queue.push_back((e.label.clone(), pos));
                } else if add || e.vertices.iter().all(|v| m.contains(v)) {
                    out.add_hyperarc(e.clone())?;
                }
            }
            if add {
                for v in &m {
                    if !keep_formal.contains(v) {
                        out.add_hyperarc(Hyperarc::new(colour, [v.clone()]))?;
                    }
                }
            }
            Ok(out)
        };

        let axiom = rewrite(&self.axiom, &BTreeSet::new(), &BTreeSet::new(), &mut queue)?;
        while let Some((label, pos)) = queue.pop_front() {
            if !done.insert((label.clone(), pos.clone())) {
                continue;
            }
            let rule = self.rule(&label).expect("validated grammar has every rule");
            let formal: BTreeSet<String> = rule.formal.iter().cloned().collect();
            let entry: BTreeSet<String> = pos.iter().map(|&i| rule.formal[i].clone()).collect();
            let rhs = rewrite(&rule.rhs, &formal, &entry, &mut queue)?;
            let nt = name(&label, &pos);
            nonterminals.push((nt.clone(), rule.formal.len()));
            rules.push(HrRule { nonterminal: nt, formal: rule.formal.clone(), rhs });
        }
        let mut terminals: Vec<(String, usize)> = self.terminals.iter().map(|(s, n)| (s.to_string(), n)).collect();
        if !self.terminals.contains(colour) {
            terminals.push((colour.to_string(), 1));
        }
        HRGrammar::new(RankedAlphabet::new(nonterminals)?, RankedAlphabet::new(terminals)?, axiom, rules)
    }

    /// Least fixpoint of, per non-terminal, the attachment pairs `(i, j)`
    /// with `x_j` reachable from `x_i` inside the generated subgraph, and
    /// the attachments reachable from a source vertex inside it.
    #[allow(clippy::type_complexity)]
    fn reach_summaries(&self, source: &str, symmetric: bool) -> BTreeMap<String, (BTreeSet<(usize, usize)>, BTreeSet<usize>)> {
        let mut sum: BTreeMap<String, (BTreeSet<(usize, usize)>, BTreeSet<usize>)> =
            self.rules.iter().map(|r| (r.nonterminal.clone(), Default::default())).collect();
        loop {
            let mut changed = false;
            for r in &self.rules {
                let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
                let mut sources: BTreeSet<&str> = BTreeSet::new();
                for e in r.rhs.hyperarcs() {
                    if let Some((reach, src)) = sum.get(&e.label) {
                        for &(i, j) in reach {
                            adj.entry(&e.vertices[i]).or_default().push(&e.vertices[j]);
                        }
                        sources.extend(src.iter().map(|&i| e.vertices[i].as_str()));
                    } else if e.label == source {
                        sources.insert(&e.vertices[0]);
                    } else if e.arity() == 2 {
                        adj.entry(&e.vertices[0]).or_default().push(&e.vertices[1]);
                        if symmetric {
                            adj.entry(&e.vertices[1]).or_default().push(&e.vertices[0]);
                        }
                    }
                }
                let from_sources = closure(&adj, sources);
                let mut reach = BTreeSet::new();
                for (i, x) in r.formal.iter().enumerate() {
                    let seen = closure(&adj, BTreeSet::from([x.as_str()]));
                    for (j, y) in r.formal.iter().enumerate() {
                        if i != j && seen.contains(y.as_str()) {
                            reach.insert((i, j));
                        }
                    }
                }
                let src: BTreeSet<usize> =
                    (0..r.formal.len()).filter(|&i| from_sources.contains(r.formal[i].as_str())).collect();
                let entry = sum.get_mut(&r.nonterminal).expect("every rule has a summary");
                if entry.0 != reach || entry.1 != src {
                    *entry = (reach, src);
                    changed = true;
                }
            }
            if !changed {
                return sum;
            }
        }
    }

    /// Least fixpoint of the attachment positions that receive `colour`
    /// inside the generated subgraph.
    fn colour_summaries(&self, colour: &str) -> BTreeMap<String, BTreeSet<usize>> {
        let mut sum: BTreeMap<String, BTreeSet<usize>> =
            self.rules.iter().map(|r| (r.nonterminal.clone(), BTreeSet::new())).collect();
        loop {
            let mut changed = false;
            for r in &self.rules {
                let mut coloured: BTreeSet<&str> = BTreeSet::new();
                for e in r.rhs.hyperarcs() {
                    if e.label == colour {
                        coloured.insert(&e.vertices[0]);
                    } else if let Some(c) = sum.get(&e.label) {
                        coloured.extend(c.iter().map(|&i| e.vertices[i].as_str()));
                    }
                }
                let pos: BTreeSet<usize> =
                    (0..r.formal.len()).filter(|&i| coloured.contains(r.formal[i].as_str())).collect();
                let entry = sum.get_mut(&r.nonterminal).expect("every rule has a summary");
                if *entry != pos {
                    *entry = pos;
                    changed = true;
                }
            }
            if !changed {
                return sum;
            }
        }
    }
}

/// Fresh names for the non-formal vertices of `rule` glued on `attach`.
pub(crate) fn glue_names(rule: &HrRule, attach: &[String], counter: &mut usize) -> BTreeMap<String, String> {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    for (x, v) in rule.formal.iter().zip(attach) {
        names.insert(x.clone(), v.clone());
    }
    let parent = attach.first().map(String::as_str).unwrap_or("");
    for v in rule.rhs.vertices() {
        if !names.contains_key(v) {
            names.insert(v.clone(), format!("{parent}/{v}#{counter}"));
            *counter += 1;
        }
    }
    names
}

fn closure<'a>(adj: &BTreeMap<&'a str, Vec<&'a str>>, start: BTreeSet<&'a str>) -> BTreeSet<&'a str> {
    let mut seen = start.clone();
    let mut stack: Vec<&str> = start.into_iter().collect();
    while let Some(v) = stack.pop() {
        for &w in adj.get(v).into_iter().flatten() {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}
