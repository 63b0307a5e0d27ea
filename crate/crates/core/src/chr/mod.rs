//! Contextual graph rewriting.
//!
//! A contextual rule `Hc ∪ f(x1..xp) -> Hc ∪ H` rewrites an occurrence of
//! `f` only where its context `Hc` can be found around it. CHR grammars
//! restrict contexts to a contextual alphabet `C`, allow one rule per
//! non-terminal and start from a deterministic regular axiom over `C`
//! carrying a single non-terminal. General systems (used by the PCP
//! encoding) match contexts against terminal arcs and may list several
//! rules per non-terminal; the first rule that matches applies.

mod generate;
mod matching;
mod pcp;
mod rational;

pub use generate::{ChrState, ChrView};
pub use matching::{find_matches, RuleMatch};
pub use pcp::{pcp_encode, pcp_step_bound, PcpInstance};
pub use rational::{from_rational, to_rational, TreeAutomaton};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::graph::{Hyperarc, Hypergraph, RankedAlphabet};
use crate::hr::{check_hypergraph, HRGrammar, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextualRule {
    pub context: Hypergraph,
    pub nonterminal: String,
    pub formal: Vec<String>,
    pub rhs: Hypergraph,
}

impl ContextualRule {
    pub fn formal_arc(&self) -> Hyperarc {
        Hyperarc::new(self.nonterminal.clone(), self.formal.iter().cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChrAxiom {
    Finite(Hypergraph),
    /// A regular graph given by an HR grammar, plus the non-terminal
    /// hyperarc placed on vertices of the HR axiom.
    Regular { grammar: HRGrammar, placement: Hyperarc },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Chr,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextualGrammar {
    kind: SystemKind,
    contextual: RankedAlphabet,
    nonterminals: RankedAlphabet,
    terminals: RankedAlphabet,
    rules: Vec<ContextualRule>,
    axiom: ChrAxiom,
}

impl ContextualGrammar {
    pub fn from_parts(
        kind: SystemKind,
        contextual: RankedAlphabet,
        nonterminals: RankedAlphabet,
        terminals: RankedAlphabet,
        rules: Vec<ContextualRule>,
        axiom: ChrAxiom,
    ) -> Self {
        ContextualGrammar { kind, contextual, nonterminals, terminals, rules, axiom }
    }

    pub fn new(
        kind: SystemKind,
        contextual: RankedAlphabet,
        nonterminals: RankedAlphabet,
        terminals: RankedAlphabet,
        rules: Vec<ContextualRule>,
        axiom: ChrAxiom,
    ) -> Result<Self> {
        let g = Self::from_parts(kind, contextual, nonterminals, terminals, rules, axiom);
        g.validate().into_result()?;
        Ok(g)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn contextual(&self) -> &RankedAlphabet {
        &self.contextual
    }

    pub fn nonterminals(&self) -> &RankedAlphabet {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &RankedAlphabet {
        &self.terminals
    }

    pub fn rules(&self) -> &[ContextualRule] {
        &self.rules
    }

    pub fn axiom(&self) -> &ChrAxiom {
        &self.axiom
    }

    pub fn rules_for<'a>(&'a self, nonterminal: &'a str) -> impl Iterator<Item = &'a ContextualRule> + 'a {
        self.rules.iter().filter(move |r| r.nonterminal == nonterminal)
    }

    fn arity(&self, label: &str) -> Option<usize> {
        self.contextual
            .arity(label)
            .or_else(|| self.nonterminals.arity(label))
            .or_else(|| self.terminals.arity(label))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let alphabets = [("contextual", &self.contextual), ("non-terminal", &self.nonterminals), ("terminal", &self.terminals)];
        for (i, (n1, a1)) in alphabets.iter().enumerate() {
            for (n2, a2) in &alphabets[i + 1..] {
                for (s, _) in a1.iter() {
                    if a2.contains(s) {
                        report.push("alphabets", format!("`{s}` is both {n1} and {n2}"));
                    }
                }
            }
        }
        let lookup = |l: &str| self.arity(l);
        let mut per_nt: BTreeMap<&str, usize> = BTreeMap::new();
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
            *per_nt.entry(&r.nonterminal).or_default() += 1;
            check_hypergraph(&mut report, &format!("{loc} context"), &r.context, &lookup);
            check_hypergraph(&mut report, &format!("{loc} right side"), &r.rhs, &lookup);
            for e in r.context.hyperarcs() {
                let allowed = match self.kind {
                    SystemKind::Chr => self.contextual.contains(&e.label),
                    SystemKind::General => self.terminals.contains(&e.label),
                };
                if !allowed {
                    let want = if self.kind == SystemKind::Chr { "contextual" } else { "terminal" };
                    report.push(&loc, format!("context arc `{}` is not {want}", e.label));
                }
            }
            for e in r.rhs.hyperarcs() {
                if self.contextual.contains(&e.label) {
                    report.push(&loc, format!("right side uses contextual label `{}`", e.label));
                }
            }
            if !context_connected(r) {
                report.push(&loc, "context and left side do not form a connected hypergraph");
            }
        }
        if self.kind == SystemKind::Chr {
            for (nt, n) in per_nt {
                if n > 1 {
                    report.push("rules", format!("{n} rules for `{nt}`; CHR grammars allow one"));
                }
            }
        }
        match &self.axiom {
            ChrAxiom::Finite(h) => {
                check_hypergraph(&mut report, "axiom", h, &lookup);
                if self.kind == SystemKind::Chr {
                    let nts = h.hyperarcs().iter().filter(|e| self.nonterminals.contains(&e.label)).count();
                    if nts != 1 {
                        report.push("axiom", format!("axiom has {nts} non-terminal hyperarcs; exactly one expected"));
                    }
                    if h.hyperarcs().iter().any(|e| self.terminals.contains(&e.label)) {
                        report.push("axiom", "axiom carries terminal arcs");
                    }
                    if !locally_deterministic(h) {
                        report.push("axiom", "axiom is not deterministic");
                    }
                }
            }
            ChrAxiom::Regular { grammar, placement } => {
                for d in grammar.validate().diagnostics {
                    report.push(format!("axiom grammar, {}", d.location), d.message);
                }
                for (t, n) in grammar.terminals().iter() {
                    if self.contextual.arity(t) != Some(n) {
                        report.push("axiom grammar", format!("axiom label `{t}` is not contextual with arity {n}"));
                    }
                }
                for (nt, _) in grammar.nonterminals().iter() {
                    if self.arity(nt).is_some() {
                        report.push("axiom grammar", format!("axiom non-terminal `{nt}` clashes with a grammar label"));
                    }
                }
                if self.nonterminals.arity(&placement.label) != Some(placement.arity()) {
                    report.push("axiom", format!("placed hyperarc `{}` is not a non-terminal of that arity", placement.label));
                }
                for v in &placement.vertices {
                    if !grammar.axiom().vertices().contains(v) {
                        report.push("axiom", format!("placed hyperarc uses vertex `{v}` absent from the axiom"));
                    }
                }
                if !locally_deterministic(grammar.axiom()) || grammar.rules().iter().any(|r| !locally_deterministic(&r.rhs)) {
                    report.push("axiom", "axiom grammar is not deterministic");
                }
            }
        }
        report
    }

    /// Tree-separation: the axiom is a tree, and each rule context is a
    /// union of vertex-disjoint trees with outward arcs, one rooted at each
    /// formal vertex and containing no other formal vertex.
    pub fn is_tree_separated(&self) -> bool {
        if TreeAutomaton::from_axiom(self).is_err() {
            return false;
        }
        self.rules.iter().all(|r| context_trees(r, &self.contextual).is_some())
    }
}

fn context_connected(r: &ContextualRule) -> bool {
    let mut seen: BTreeSet<&str> = r.formal.iter().map(String::as_str).collect();
    if seen.is_empty() {
        return r.context.is_empty();
    }
    loop {
        let before = seen.len();
        for e in r.context.hyperarcs() {
            if e.vertices.iter().any(|v| seen.contains(v.as_str())) {
                seen.extend(e.vertices.iter().map(String::as_str));
            }
        }
        if seen.len() == before {
            break;
        }
    }
    r.context.vertices().iter().all(|v| seen.contains(v.as_str()))
}

fn locally_deterministic(h: &Hypergraph) -> bool {
    let mut seen = BTreeSet::new();
    h.hyperarcs().iter().filter(|e| e.arity() == 2).all(|e| seen.insert((&e.vertices[0], &e.label)))
}

/// Relative addresses of the context vertices of `r`: for each vertex, the
/// formal vertex rooting its tree and the label path from that root.
/// `None` when the context is not tree-separated.
pub(crate) fn context_trees(r: &ContextualRule, contextual: &RankedAlphabet) -> Option<BTreeMap<String, (usize, Vec<String>)>> {
    let mut addr: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
    for (i, x) in r.formal.iter().enumerate() {
        addr.insert(x.clone(), (i, vec![]));
    }
    let binary: Vec<&Hyperarc> = r.context.hyperarcs().iter().filter(|e| e.arity() == 2).collect();
    if r.context.hyperarcs().iter().any(|e| e.arity() > 2 || !contextual.contains(&e.label)) {
        return None;
    }
    let mut indegree: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &binary {
        *indegree.entry(&e.vertices[1]).or_default() += 1;
    }
    if indegree.values().any(|&d| d > 1) || r.formal.iter().any(|x| indegree.contains_key(x.as_str())) {
        return None;
    }
    let mut frontier: Vec<String> = r.formal.clone();
    while let Some(v) = frontier.pop() {
        let (root, path) = addr[&v].clone();
        for e in binary.iter().filter(|e| e.vertices[0] == v) {
            let child = &e.vertices[1];
            if addr.contains_key(child) {
                return None;
            }
            let mut p = path.clone();
            p.push(e.label.clone());
            addr.insert(child.clone(), (root, p));
            frontier.push(child.clone());
        }
    }
    if r.context.vertices().iter().all(|v| addr.contains_key(v)) {
        Some(addr)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(arcs: &[(&str, &[&str])]) -> Hypergraph {
        Hypergraph::from_parts([], arcs.iter().map(|(l, vs)| Hyperarc::new(*l, vs.iter().copied()))).unwrap()
    }

    fn rule(context: Hypergraph, rhs: Hypergraph) -> ContextualRule {
        ContextualRule { context, nonterminal: "P".into(), formal: vec!["x".into(), "y".into()], rhs }
    }

    fn grammar(rules: Vec<ContextualRule>) -> ContextualGrammar {
        ContextualGrammar::from_parts(
            SystemKind::Chr,
            RankedAlphabet::new([("0", 2), ("1", 2)]).unwrap(),
            RankedAlphabet::new([("P", 2)]).unwrap(),
            RankedAlphabet::new([("a", 2)]).unwrap(),
            rules,
            ChrAxiom::Finite(h(&[("0", &["r", "r0"]), ("1", &["r", "r1"]), ("P", &["r", "r"])])),
        )
    }

    #[test]
    fn tree_separation() {
        let ok = grammar(vec![rule(h(&[("0", &["x", "x0"]), ("1", &["y", "y1"])]), h(&[("a", &["x0", "y1"])]))]);
        assert!(ok.validate().is_valid());
        assert!(ok.is_tree_separated());
        let linked = grammar(vec![rule(h(&[("0", &["x", "y"])]), Hypergraph::new())]);
        assert!(!linked.is_tree_separated());
        let empty = grammar(vec![rule(Hypergraph::new(), Hypergraph::new())]);
        assert!(empty.is_tree_separated());
    }

    #[test]
    fn chr_validation() {
        let two = grammar(vec![rule(Hypergraph::new(), Hypergraph::new()), rule(Hypergraph::new(), Hypergraph::new())]);
        assert!(two.validate().diagnostics.iter().any(|d| d.message.contains("2 rules")));
        let bad_ctx = grammar(vec![rule(h(&[("a", &["x", "z"])]), Hypergraph::new())]);
        assert!(bad_ctx.validate().diagnostics.iter().any(|d| d.message.contains("not contextual")));
        let disconnected = grammar(vec![rule(h(&[("0", &["u", "w"])]), Hypergraph::new())]);
        assert!(disconnected.validate().diagnostics.iter().any(|d| d.message.contains("connected")));
    }
}
