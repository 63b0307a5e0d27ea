//! Conversions between rational graphs and tree-separated CHR grammars.
//!
//! A rational graph becomes a CHR grammar over the complete tree of vertex
//! words: one non-terminal per transducer state walks a pair of vertices
//! down the tree, one letter per side and step, and emits an arc on final
//! states. Conversely, the rules of a tree-separated grammar only ever look
//! at bounded subtrees below the two vertices of a non-terminal, so the
//! grammar is simulated by a transducer whose states record the
//! non-terminal and the axiom types under both vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use super::{context_trees, ChrAxiom, ContextualGrammar, ContextualRule, SystemKind};
use crate::alphabet::{Alphabet, Symbol, SymbolAlphabet};
use crate::automata::{FiniteAutomaton, Label};
use crate::error::{invalid, Error, Result};
use crate::graph::{Hyperarc, Hypergraph, RankedAlphabet};
use crate::hr::{HRGrammar, HrRule};
use crate::rational::RationalGraphPresentation;
use crate::transducer::{LabelledTransducer, TransducerEdge};

fn fresh(used: &mut BTreeSet<String>, base: String) -> String {
    let mut name = base;
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

fn arc(label: &str, vs: &[&str]) -> Hyperarc {
    Hyperarc::new(label, vs.iter().copied())
}

/// The CHR grammar generating the rational graph `p`. Vertex words become
/// addresses in the axiom tree, rooted at vertex `r`.
pub fn from_rational(p: &RationalGraphPresentation) -> Result<ContextualGrammar> {
    let t = p.transducer();
    if !t.is_normalized() {
        return invalid("transducer edges must read and write at most one letter; normalize the edges first");
    }
    let x = t.vertex_alphabet();
    let sigma = t.label_alphabet();
    let mut used: BTreeSet<String> = x.tokens().iter().cloned().collect();
    if let Some(clash) = sigma.tokens().iter().find(|s| used.contains(*s)) {
        return invalid(format!("`{clash}` is both a vertex letter and an arc label"));
    }
    used.extend(sigma.tokens().iter().cloned());
    let in_colour = p.restriction().map(|_| fresh(&mut used, "in".into()));

    let mut contextual: Vec<(String, usize)> = x.tokens().iter().map(|d| (d.clone(), 2)).collect();
    if let Some(c) = &in_colour {
        contextual.push((c.clone(), 1));
    }
    let terminals: Vec<(String, usize)> = sigma.tokens().iter().map(|a| (a.clone(), 2)).collect();

    let states: Vec<String> = (0..t.num_states()).map(|q| fresh(&mut used, format!("s{q}"))).collect();
    let emit: BTreeMap<usize, String> = match in_colour {
        Some(_) => t.labels().keys().map(|&q| (q, fresh(&mut used, format!("emit{q}")))).collect(),
        None => BTreeMap::new(),
    };
    let start = match t.initial() {
        [q] => states[*q].clone(),
        _ => fresh(&mut used, "start".into()),
    };

    let mut rules = Vec::new();
    let xy = |w: &[Symbol], side: &str| match w.first() {
        Some(&d) => format!("{side}:{}", x.token(d)),
        None => side.to_string(),
    };
    for q in 0..t.num_states() {
        let mut context = Hypergraph::new();
        let mut rhs = Hypergraph::new();
        for e in t.edges().iter().filter(|e| e.source == q) {
            for (w, side) in [(&e.input, "x"), (&e.output, "y")] {
                if let Some(&d) = w.first() {
                    context.add_hyperarc(arc(x.token(d), &[side, &xy(w, side)]))?;
                }
            }
            rhs.add_hyperarc(arc(&states[e.target], &[&xy(&e.input, "x"), &xy(&e.output, "y")]))?;
        }
        if let Some(labels) = t.labels().get(&q) {
            match emit.get(&q) {
                Some(name) => {
                    rhs.add_hyperarc(arc(name, &["x", "y"]))?;
                }
                None => {
                    for &a in labels {
                        rhs.add_hyperarc(arc(sigma.token(a), &["x", "y"]))?;
                    }
                }
            }
        }
        rules.push(ContextualRule { context, nonterminal: states[q].clone(), formal: vec!["x".into(), "y".into()], rhs });
    }
    if let (Some(c), false) = (&in_colour, emit.is_empty()) {
        for (q, name) in &emit {
            let context = Hypergraph::from_parts([], [arc(c, &["x"]), arc(c, &["y"])])?;
            let rhs = Hypergraph::from_parts([], t.labels()[q].iter().map(|&a| arc(sigma.token(a), &["x", "y"])))?;
            rules.push(ContextualRule { context, nonterminal: name.clone(), formal: vec!["x".into(), "y".into()], rhs });
        }
    }
    if t.initial().len() != 1 {
        let rhs = Hypergraph::from_parts([], t.initial().iter().map(|&q| arc(&states[q], &["x", "y"])))?;
        rules.push(ContextualRule { context: Hypergraph::new(), nonterminal: start.clone(), formal: vec!["x".into(), "y".into()], rhs });
    }

    let axiom = tree_axiom(x, p.restriction(), in_colour.as_deref(), &mut used)?;
    let mut nonterminals: Vec<(String, usize)> = states.iter().map(|s| (s.clone(), 2)).collect();
    nonterminals.extend(emit.values().map(|s| (s.clone(), 2)));
    if t.initial().len() != 1 {
        nonterminals.push((start.clone(), 2));
    }
    ContextualGrammar::new(
        SystemKind::Chr,
        RankedAlphabet::new(contextual)?,
        RankedAlphabet::new(nonterminals)?,
        RankedAlphabet::new(terminals)?,
        rules,
        ChrAxiom::Regular { grammar: axiom, placement: arc(&start, &["r", "r"]) },
    )
}

/// The complete tree over `x` rooted at `r`; with a restriction, the tree
/// follows the complete DFA of the language and colours accepted vertices.
fn tree_axiom(
    x: &Alphabet,
    restriction: Option<&FiniteAutomaton>,
    in_colour: Option<&str>,
    used: &mut BTreeSet<String>,
) -> Result<HRGrammar> {
    let mut terminals: Vec<(String, usize)> = x.tokens().iter().map(|d| (d.clone(), 2)).collect();
    let child = |d: Symbol| format!("c:{}", x.token(d));
    let (names, rules) = match (restriction, in_colour) {
        (Some(lang), Some(c)) => {
            terminals.push((c.to_string(), 1));
            let dfa = lang.complete()?;
            let names: Vec<String> = (0..dfa.num_states()).map(|k| fresh(used, format!("t{k}"))).collect();
            let mut rules = Vec::new();
            for k in 0..dfa.num_states() {
                let mut rhs = Hypergraph::new();
                for &(l, k2) in dfa.successors(k) {
                    let d = l.expect("complete DFA has no ε-transitions");
                    rhs.add_hyperarc(arc(x.token(d), &["x", &child(d)]))?;
                    rhs.add_hyperarc(arc(&names[k2], &[&child(d)]))?;
                }
                if dfa.is_final(k) {
                    rhs.add_hyperarc(arc(c, &["x"]))?;
                }
                rhs.add_vertex("x");
                rules.push(HrRule { nonterminal: names[k].clone(), formal: vec!["x".into()], rhs });
            }
            let root = names[dfa.initial()[0]].clone();
            (vec![root].into_iter().chain(names).collect::<Vec<_>>(), rules)
        }
        _ => {
            let name = fresh(used, "tree".into());
            let mut rhs = Hypergraph::new();
            for d in x.symbols() {
                rhs.add_hyperarc(arc(x.token(d), &["x", &child(d)]))?;
                rhs.add_hyperarc(arc(&name, &[&child(d)]))?;
            }
            rhs.add_vertex("x");
            (vec![name.clone(), name.clone()], vec![HrRule { nonterminal: name, formal: vec!["x".into()], rhs }])
        }
    };
    let nonterminals: Vec<(String, usize)> = names[1..].iter().map(|n| (n.clone(), 1)).collect();
    HRGrammar::new(
        RankedAlphabet::new(nonterminals)?,
        RankedAlphabet::new(terminals)?,
        Hypergraph::from_parts([], [arc(&names[0], &["r"])])?,
        rules,
    )
}

#[derive(Clone, Debug, Default)]
struct TreeType {
    children: BTreeMap<String, usize>,
    colours: BTreeSet<String>,
}

/// A deterministic description of an axiom tree: every vertex has a type,
/// and a type fixes the colours and child types of its vertices.
#[derive(Clone, Debug)]
pub struct TreeAutomaton {
    directions: Vec<String>,
    types: Vec<TreeType>,
    root: usize,
    /// Type and address of each vertex of the axiom.
    axiom_vertices: BTreeMap<String, (usize, Vec<String>)>,
}

/// Checks that the binary arcs of `h` labelled in `directions` form an
/// outward tree spanning `h` rooted at `root` (or at the unique vertex
/// without incoming arc). Returns the children of every vertex.
type Children = BTreeMap<String, Vec<(String, String)>>;

fn outward_tree(h: &Hypergraph, directions: &RankedAlphabet, root: Option<&str>) -> Result<(String, Children)> {
    let mut indeg: BTreeMap<&str, usize> = h.vertices().iter().map(|v| (v.as_str(), 0)).collect();
    let mut children: Children = BTreeMap::new();
    for e in h.hyperarcs().iter().filter(|e| directions.arity(&e.label) == Some(2)) {
        *indeg.get_mut(e.vertices[1].as_str()).expect("vertex") += 1;
        children.entry(e.vertices[0].clone()).or_default().push((e.label.clone(), e.vertices[1].clone()));
    }
    let roots: Vec<&str> = indeg.iter().filter(|(_, &d)| d == 0).map(|(v, _)| *v).collect();
    let root = match (root, roots.as_slice()) {
        (Some(r), [only]) if r == *only => r.to_string(),
        (None, [only]) => only.to_string(),
        _ => return Err(Error::Unsupported(format!("contextual arcs do not form a tree (roots: {})", roots.join(", ")))),
    };
    if indeg.values().any(|&d| d > 1) {
        return Err(Error::Unsupported("a vertex has two incoming contextual arcs".into()));
    }
    let mut seen = BTreeSet::from([root.clone()]);
    let mut stack = vec![root.clone()];
    while let Some(v) = stack.pop() {
        for (_, w) in children.get(&v).into_iter().flatten() {
            if seen.insert(w.clone()) {
                stack.push(w.clone());
            }
        }
    }
    if seen.len() != h.vertices().len() {
        return Err(Error::Unsupported("contextual arcs do not form a tree (cycle or unreachable vertex)".into()));
    }
    Ok((root, children))
}

impl TreeAutomaton {
    /// The tree automaton of the grammar's axiom. Fails when the axiom is
    /// not a tree, or is regular in a way outside the supported fragment:
    /// non-terminals of arity 1, each rule growing an outward tree below its
    /// formal vertex with at most one non-terminal per new vertex.
    pub fn from_axiom(g: &ContextualGrammar) -> Result<Self> {
        let c = g.contextual();
        if let Some((l, n)) = c.iter().find(|&(_, n)| n > 2) {
            return Err(Error::Unsupported(format!("contextual label `{l}` has arity {n}")));
        }
        let directions: Vec<String> = c.iter().filter(|&(_, n)| n == 2).map(|(l, _)| l.to_string()).collect();
        let is_c = |l: &str| c.contains(l);
        // A location is a vertex of the axiom ("" scope) or a non-formal
        // vertex of an axiom rule (scope = its non-terminal).
        type Loc = (String, String);
        let mut own_children: BTreeMap<Loc, BTreeMap<String, Loc>> = BTreeMap::new();
        let mut own_colours: BTreeMap<Loc, BTreeSet<String>> = BTreeMap::new();
        let mut attached: BTreeMap<Loc, String> = BTreeMap::new();
        let mut locations: Vec<Loc> = Vec::new();
        let mut entry: BTreeMap<String, (BTreeMap<String, Loc>, BTreeSet<String>)> = BTreeMap::new();

        let mut scan = |scope: &str, h: &Hypergraph, formal: Option<&str>, nonterminal: &dyn Fn(&str) -> bool| -> Result<String> {
            let c_part = Hypergraph::from_parts(h.vertices().iter().cloned(), h.hyperarcs().iter().filter(|e| is_c(&e.label)).cloned())?;
            let (root, children) = outward_tree(&c_part, c, formal)?;
            for v in h.vertices() {
                let loc = (scope.to_string(), v.clone());
                let kids: BTreeMap<String, Loc> = children
                    .get(v)
                    .into_iter()
                    .flatten()
                    .map(|(d, w)| (d.clone(), (scope.to_string(), w.clone())))
                    .collect();
                if kids.len() != children.get(v).map_or(0, Vec::len) {
                    return Err(Error::Unsupported(format!("vertex `{v}` has two children with the same label")));
                }
                let colours: BTreeSet<String> = h
                    .hyperarcs()
                    .iter()
                    .filter(|e| e.arity() == 1 && is_c(&e.label) && e.vertices[0] == *v)
                    .map(|e| e.label.clone())
                    .collect();
                if Some(v.as_str()) == formal {
                    entry.insert(scope.to_string(), (kids, colours));
                } else {
                    own_children.insert(loc.clone(), kids);
                    own_colours.insert(loc.clone(), colours);
                    locations.push(loc);
                }
            }
            for e in h.hyperarcs().iter().filter(|e| nonterminal(&e.label)) {
                if e.arity() != 1 {
                    return Err(Error::Unsupported(format!("axiom non-terminal `{}` has arity {}", e.label, e.arity())));
                }
                if Some(e.vertices[0].as_str()) == formal {
                    return Err(Error::Unsupported(format!("axiom rule places `{}` on its own formal vertex", e.label)));
                }
                if attached.insert((scope.to_string(), e.vertices[0].clone()), e.label.clone()).is_some() {
                    return Err(Error::Unsupported(format!("vertex `{}` carries two axiom non-terminals", e.vertices[0])));
                }
            }
            Ok(root)
        };

        let root_vertex = match g.axiom() {
            ChrAxiom::Finite(h) => scan("", h, None, &|_| false)?,
            ChrAxiom::Regular { grammar, .. } => {
                let nt = |l: &str| grammar.is_nonterminal(l);
                let root = scan("", grammar.axiom(), None, &nt)?;
                for r in grammar.rules() {
                    if r.formal.len() != 1 {
                        return Err(Error::Unsupported(format!("axiom non-terminal `{}` has arity {}", r.nonterminal, r.formal.len())));
                    }
                    scan(&r.nonterminal, &r.rhs, Some(&r.formal[0]), &nt)?;
                }
                root
            }
        };

        let ids: BTreeMap<&Loc, usize> = locations.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut types = vec![TreeType::default(); locations.len()];
        for (i, loc) in locations.iter().enumerate() {
            let mut children = own_children[loc].clone();
            let mut colours = own_colours[loc].clone();
            if let Some(nt) = attached.get(loc) {
                let (kids, cols) = entry
                    .get(nt)
                    .ok_or_else(|| Error::Validation(format!("axiom non-terminal `{nt}` has no rule")))?;
                for (d, w) in kids {
                    if children.insert(d.clone(), w.clone()).is_some() {
                        return Err(Error::Unsupported(format!("axiom vertex gets two `{d}` children")));
                    }
                }
                colours.extend(cols.iter().cloned());
            }
            types[i] = TreeType { children: children.iter().map(|(d, w)| (d.clone(), ids[w])).collect(), colours };
        }
        let root = ids[&(String::new(), root_vertex.clone())];
        let mut ta = TreeAutomaton { directions, types, root, axiom_vertices: BTreeMap::new() };
        // axiom vertices are reached through axiom arcs only
        let mut queue = VecDeque::from([(root_vertex, Vec::<String>::new())]);
        while let Some((v, path)) = queue.pop_front() {
            let loc = (String::new(), v.clone());
            for (d, w) in &own_children[&loc] {
                let mut p = path.clone();
                p.push(d.clone());
                queue.push_back((w.1.clone(), p));
            }
            ta.axiom_vertices.insert(v, (ids[&loc], path));
        }
        Ok(ta)
    }

    pub fn directions(&self) -> &[String] {
        &self.directions
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// The type reached from type `from` along `path`.
    pub fn type_at(&self, from: usize, path: &[String]) -> Option<usize> {
        path.iter().try_fold(from, |t, d| self.types[t].children.get(d).copied())
    }

    pub fn has_colour(&self, t: usize, colour: &str) -> bool {
        self.types[t].colours.contains(colour)
    }

    /// Type and address of an axiom vertex.
    pub fn axiom_vertex(&self, v: &str) -> Option<&(usize, Vec<String>)> {
        self.axiom_vertices.get(v)
    }

    /// Every vertex of every type has a child in each direction.
    pub fn is_complete(&self) -> bool {
        self.types.iter().all(|t| t.children.len() == self.directions.len())
    }

    /// The addresses of the tree as a language over `alphabet`.
    pub fn addresses(&self, alphabet: &Alphabet) -> Result<FiniteAutomaton> {
        let mut trans: Vec<(usize, Label, usize)> = Vec::new();
        for (i, t) in self.types.iter().enumerate() {
            for (d, &j) in &t.children {
                trans.push((i, Some(alphabet.require(d)?), j));
            }
        }
        FiniteAutomaton::new(alphabet.clone(), self.types.len(), [self.root], 0..self.types.len(), trans)
    }
}

/// Per-rule data for the simulation: where each context vertex sits
/// relative to the two formal vertices.
struct RuleShape<'a> {
    rule: &'a ContextualRule,
    addr: BTreeMap<String, (usize, Vec<String>)>,
}

impl RuleShape<'_> {
    fn matches(&self, ta: &TreeAutomaton, at: [usize; 2]) -> bool {
        let types: Option<BTreeMap<&str, usize>> =
            self.addr.iter().map(|(v, (side, p))| ta.type_at(at[*side], p).map(|t| (v.as_str(), t))).collect();
        let Some(types) = types else { return false };
        self.rule
            .context
            .hyperarcs()
            .iter()
            .filter(|e| e.arity() == 1)
            .all(|e| ta.has_colour(types[e.vertices[0].as_str()], &e.label))
    }
}

/// A rational presentation isomorphic to the graph generated by a
/// tree-separated CHR grammar, with vertices named by their axiom address.
///
/// Supported: binary non-terminals, right-hand sides whose vertices all lie
/// in the context or among the formal vertices, and binary terminal arcs
/// and non-terminals that lead from the first formal tree to the second.
pub fn to_rational(g: &ContextualGrammar) -> Result<RationalGraphPresentation> {
    if g.kind() != SystemKind::Chr {
        return Err(Error::Unsupported("only CHR grammars convert to rational graphs".into()));
    }
    g.validate().into_result()?;
    let ta = TreeAutomaton::from_axiom(g).map_err(|e| Error::Unsupported(format!("not tree-separated: {e}")))?;
    if let Some((f, n)) = g.nonterminals().iter().find(|&(_, n)| n != 2) {
        return Err(Error::Unsupported(format!("non-terminal `{f}` has arity {n}; only binary ones convert")));
    }
    if let Some((a, _)) = g.terminals().iter().find(|&(_, n)| n != 2) {
        return Err(Error::Unsupported(format!("terminal `{a}` is a colour; rational graphs carry none")));
    }
    if ta.directions().is_empty() || g.terminals().is_empty() {
        return Err(Error::Unsupported("the grammar needs binary contextual and terminal labels".into()));
    }
    let x: Alphabet = Arc::new(SymbolAlphabet::new(ta.directions().iter())?);
    let sigma: Alphabet = Arc::new(SymbolAlphabet::new(g.terminals().iter().map(|(l, _)| l.to_string()))?);

    let mut shapes: BTreeMap<&str, RuleShape> = BTreeMap::new();
    for (i, r) in g.rules().iter().enumerate() {
        let addr = context_trees(r, g.contextual())
            .ok_or_else(|| Error::Unsupported(format!("not tree-separated: context of rule {} ({})", i + 1, r.nonterminal)))?;
        for e in r.rhs.hyperarcs() {
            let sides: Option<Vec<usize>> = e.vertices.iter().map(|v| addr.get(v).map(|a| a.0)).collect();
            match sides.as_deref() {
                Some([0, 1]) => {}
                None => {
                    return Err(Error::Unsupported(format!(
                        "rule {} ({}) creates a vertex outside its context",
                        i + 1,
                        r.nonterminal
                    )))
                }
                Some(_) => {
                    return Err(Error::Unsupported(format!(
                        "rule {} ({}): `{}` does not lead from the first formal tree to the second",
                        i + 1,
                        r.nonterminal,
                        e.label
                    )))
                }
            }
        }
        shapes.insert(&r.nonterminal, RuleShape { rule: r, addr });
    }

    let placement = match g.axiom() {
        ChrAxiom::Finite(h) => {
            h.hyperarcs().iter().find(|e| g.nonterminals().contains(&e.label)).cloned().expect("validated axiom")
        }
        ChrAxiom::Regular { placement, .. } => placement.clone(),
    };
    let place: Vec<&(usize, Vec<String>)> =
        placement.vertices.iter().map(|v| ta.axiom_vertex(v).expect("placement on axiom vertex")).collect();
    let word = |p: &[String]| -> Result<Vec<Symbol>> { p.iter().map(|d| x.require(d)).collect() };

    let mut ids: BTreeMap<(String, usize, usize), usize> = BTreeMap::new();
    let mut finals: BTreeMap<Symbol, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut n = 0;
    let first = (placement.label.clone(), place[0].0, place[1].0);
    let initial = if place[0].1.is_empty() && place[1].1.is_empty() {
        0
    } else {
        n = 1;
        edges.push(TransducerEdge::new(0, word(&place[0].1)?, word(&place[1].1)?, 1));
        0
    };
    ids.insert(first.clone(), n);
    n += 1;
    let mut queue = VecDeque::from([first]);
    while let Some(state) = queue.pop_front() {
        let id = ids[&state];
        let (b, s1, s2) = &state;
        let Some(shape) = shapes.get(b.as_str()) else { continue };
        if !shape.matches(&ta, [*s1, *s2]) {
            continue;
        }
        for e in shape.rule.rhs.hyperarcs() {
            let (a1, a2) = (&shape.addr[&e.vertices[0]].1, &shape.addr[&e.vertices[1]].1);
            let (w1, w2) = (word(a1)?, word(a2)?);
            let target = if let Some(l) = sigma.symbol(&e.label) {
                *finals.entry(l).or_insert_with(|| {
                    n += 1;
                    n - 1
                })
            } else {
                let next = (
                    e.label.clone(),
                    ta.type_at(*s1, a1).expect("matched context"),
                    ta.type_at(*s2, a2).expect("matched context"),
                );
                *ids.entry(next.clone()).or_insert_with(|| {
                    queue.push_back(next);
                    n += 1;
                    n - 1
                })
            };
            edges.push(TransducerEdge::new(id, w1, w2, target));
        }
    }
    let labels = finals.iter().map(|(&l, &q)| (q, BTreeSet::from([l]))).collect();
    let transducer = LabelledTransducer::new(x.clone(), sigma, n, [initial], labels, edges)?;
    let restriction = if ta.is_complete() { None } else { Some(ta.addresses(&x)?) };
    RationalGraphPresentation::new(transducer, restriction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, LabelledArc};
    use crate::transducer::tests::anbncn;

    fn anbncn_presentation() -> RationalGraphPresentation {
        RationalGraphPresentation::new(anbncn(), None).unwrap()
    }

    #[test]
    fn anbncn_round_trip() {
        let p = anbncn_presentation();
        let g = from_rational(&p).unwrap();
        assert!(g.is_tree_separated());
        let view = g.generate(6, 8).unwrap();
        assert!(view.diagnostics.is_empty(), "{:?}", view.diagnostics);
        let decoded = view.decoded(3).unwrap();
        assert!(decoded.has_arc("001", "b", "011"));
        let expected = p.bounded_view(3).unwrap();
        assert_eq!(decoded.arcs(), expected.arcs());
        let back = to_rational(&g).unwrap();
        assert_eq!(back.bounded_view(3).unwrap(), expected);
    }

    #[test]
    fn single_loop_edge() {
        let x = SymbolAlphabet::shared(["0"]).unwrap();
        let sigma = SymbolAlphabet::shared(["a"]).unwrap();
        let t = LabelledTransducer::new(
            x,
            sigma,
            2,
            [0],
            BTreeMap::from([(1, BTreeSet::from([0]))]),
            vec![TransducerEdge::new(0, vec![0], vec![0], 1)],
        )
        .unwrap();
        let p = RationalGraphPresentation::new(t, None).unwrap();
        let g = from_rational(&p).unwrap();
        let d = g.generate(4, 6).unwrap().decoded(4).unwrap();
        assert_eq!(d, Graph::from_arcs([LabelledArc::new("0", "a", "0")]));
    }

    #[test]
    fn empty_transducer() {
        let x = SymbolAlphabet::shared(["0", "1"]).unwrap();
        let sigma = SymbolAlphabet::shared(["a"]).unwrap();
        let t = LabelledTransducer::new(x, sigma, 0, [], BTreeMap::new(), vec![]).unwrap();
        let g = from_rational(&RationalGraphPresentation::new(t, None).unwrap()).unwrap();
        assert_eq!(g.generate(3, 3).unwrap().graph.num_arcs(), 0);
    }

    #[test]
    fn restricted_presentation() {
        let x = SymbolAlphabet::shared(["0", "1"]).unwrap();
        let sigma = SymbolAlphabet::shared(["a"]).unwrap();
        // u -a-> u0 for all u, restricted to 0*
        let t = LabelledTransducer::new(
            x.clone(),
            sigma,
            2,
            [0],
            BTreeMap::from([(1, BTreeSet::from([0]))]),
            vec![
                TransducerEdge::new(0, vec![0], vec![0], 0),
                TransducerEdge::new(0, vec![1], vec![1], 0),
                TransducerEdge::new(0, vec![], vec![0], 1),
            ],
        )
        .unwrap();
        let lang = FiniteAutomaton::from_regex(x, "0*").unwrap();
        let p = RationalGraphPresentation::new(t, Some(lang)).unwrap();
        let g = from_rational(&p).unwrap();
        let d = g.generate(8, 6).unwrap().decoded(3).unwrap();
        let expected = p.bounded_view(3).unwrap();
        assert_eq!(d.arcs(), expected.arcs());
        assert_eq!(d.num_arcs(), 3);
        let back = to_rational(&g).unwrap();
        assert_eq!(back.bounded_view(3).unwrap().arcs(), expected.arcs());
    }

    #[test]
    fn non_normalized_is_rejected() {
        let x = SymbolAlphabet::shared(["0"]).unwrap();
        let sigma = SymbolAlphabet::shared(["a"]).unwrap();
        let t = LabelledTransducer::new(
            x,
            sigma,
            2,
            [0],
            BTreeMap::from([(1, BTreeSet::from([0]))]),
            vec![TransducerEdge::new(0, vec![0, 0], vec![], 1)],
        )
        .unwrap();
        assert!(from_rational(&RationalGraphPresentation::new(t, None).unwrap()).is_err());
    }

    #[test]
    fn finite_axiom_to_rational() {
        let h = |arcs: &[(&str, &[&str])]| {
            Hypergraph::from_parts([], arcs.iter().map(|(l, vs)| Hyperarc::new(*l, vs.iter().copied()))).unwrap()
        };
        let g = ContextualGrammar::new(
            SystemKind::Chr,
            RankedAlphabet::new([("d", 2)]).unwrap(),
            RankedAlphabet::new([("P", 2), ("Q", 2)]).unwrap(),
            RankedAlphabet::new([("a", 2)]).unwrap(),
            vec![
                ContextualRule {
                    context: h(&[("d", &["y", "z"])]),
                    nonterminal: "P".into(),
                    formal: vec!["x".into(), "y".into()],
                    rhs: h(&[("a", &["x", "z"])]),
                },
                ContextualRule {
                    context: Hypergraph::new(),
                    nonterminal: "Q".into(),
                    formal: vec!["x".into(), "y".into()],
                    rhs: h(&[("a", &["x", "y"])]),
                },
            ],
            ChrAxiom::Finite(h(&[("d", &["r", "s"]), ("P", &["r", "r"])])),
        )
        .unwrap();
        assert!(g.is_tree_separated());
        let p = to_rational(&g).unwrap();
        let v = p.bounded_view(3).unwrap();
        assert_eq!(v.arcs().len(), 1);
        assert!(v.has_arc("ε", "a", "d"));
        assert_eq!(v.num_vertices(), 2);
    }
}
