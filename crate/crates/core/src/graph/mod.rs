//! Explicit finite graphs and hypergraphs.
//!
//! Vertices are opaque strings. A [`Graph`] holds labelled binary arcs and
//! unary colours; a [`Hypergraph`] holds hyperarcs of any arity and is the
//! working universe of the grammar modules.

mod dot;
mod iso;

pub use iso::{isomorphic, isomorphism};

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::alphabet::split_bar;
use crate::automata::FiniteAutomaton;
use crate::error::{invalid, Error, Result};

pub type Vertex = String;

/// An arc `source --label--> target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelledArc {
    pub source: Vertex,
    pub label: String,
    pub target: Vertex,
}

impl LabelledArc {
    pub fn new(source: impl Into<String>, label: impl Into<String>, target: impl Into<String>) -> Self {
        LabelledArc { source: source.into(), label: label.into(), target: target.into() }
    }
}

/// Symbols with arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankedAlphabet {
    arities: BTreeMap<String, usize>,
}

impl RankedAlphabet {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut arities = BTreeMap::new();
        for (s, n) in entries {
            let s = s.into();
            if n == 0 {
                return invalid(format!("symbol `{s}` must have positive arity"));
            }
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return invalid(format!("bad symbol name `{s}`"));
            }
            if arities.insert(s.clone(), n).is_some() {
                return invalid(format!("symbol `{s}` declared twice"));
            }
        }
        Ok(RankedAlphabet { arities })
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.arities.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.arities.contains_key(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(s, &n)| (s.as_str(), n))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.arities.values().copied().max().unwrap_or(0)
    }

    pub(crate) fn insert(&mut self, symbol: &str, arity: usize) {
        self.arities.insert(symbol.to_string(), arity);
    }
}

/// A labelled hyperarc `label(v1, ..., vn)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperarc {
    pub label: String,
    pub vertices: Vec<Vertex>,
}

impl Hyperarc {
    pub fn new<S: Into<String>>(label: impl Into<String>, vertices: impl IntoIterator<Item = S>) -> Self {
        Hyperarc { label: label.into(), vertices: vertices.into_iter().map(Into::into).collect() }
    }

    pub fn arity(&self) -> usize {
        self.vertices.len()
    }
}

/// A finite set of hyperarcs over a finite vertex set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: BTreeSet<Vertex>,
    hyperarcs: BTreeSet<Hyperarc>,
}

impl Hypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a hypergraph; vertices mentioned by hyperarcs are added.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = Vertex>,
        hyperarcs: impl IntoIterator<Item = Hyperarc>,
    ) -> Result<Self> {
        let mut h = Hypergraph::new();
        for v in vertices {
            h.add_vertex(v);
        }
        for e in hyperarcs {
            h.add_hyperarc(e)?;
        }
        Ok(h)
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) {
        self.vertices.insert(v.into());
    }

    /// Adds a hyperarc and its vertices. Arity-0 hyperarcs are rejected.
    pub fn add_hyperarc(&mut self, e: Hyperarc) -> Result<bool> {
        if e.vertices.is_empty() {
            return invalid(format!("hyperarc `{}` has no vertices", e.label));
        }
        for v in &e.vertices {
            self.vertices.insert(v.clone());
        }
        Ok(self.hyperarcs.insert(e))
    }

    pub fn remove_hyperarc(&mut self, e: &Hyperarc) -> bool {
        self.hyperarcs.remove(e)
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn hyperarcs(&self) -> &BTreeSet<Hyperarc> {
        &self.hyperarcs
    }

    pub fn contains(&self, e: &Hyperarc) -> bool {
        self.hyperarcs.contains(e)
    }

    pub fn len(&self) -> usize {
        self.hyperarcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperarcs.is_empty()
    }

    /// The arity used by each label; fails when a label is used with two
    /// different arities.
    pub fn ranked_labels(&self) -> Result<RankedAlphabet> {
        let mut r = RankedAlphabet::default();
        for e in &self.hyperarcs {
            match r.arity(&e.label) {
                Some(n) if n != e.arity() => {
                    return invalid(format!("label `{}` used with arities {n} and {}", e.label, e.arity()))
                }
                Some(_) => {}
                None => r.insert(&e.label, e.arity()),
            }
        }
        Ok(r)
    }

    /// The graph formed by the hyperarcs of arity 1 and 2 whose label
    /// satisfies `keep`.
    pub fn graph_part(&self, keep: impl Fn(&str) -> bool) -> Graph {
        let mut g = Graph::new();
        for e in &self.hyperarcs {
            if !keep(&e.label) {
                continue;
            }
            match e.vertices.as_slice() {
                [v] => g.add_colour(&e.label, v),
                [s, t] => g.add_arc(LabelledArc::new(s.clone(), e.label.clone(), t.clone())),
                _ => {}
            }
        }
        g
    }

    pub fn rename_vertices(&self, f: impl Fn(&str) -> String) -> Hypergraph {
        Hypergraph {
            vertices: self.vertices.iter().map(|v| f(v)).collect(),
            hyperarcs: self
                .hyperarcs
                .iter()
                .map(|e| Hyperarc { label: e.label.clone(), vertices: e.vertices.iter().map(|v| f(v)).collect() })
                .collect(),
        }
    }
}

/// A graph with labelled arcs and vertex colours.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<Vertex>,
    arcs: BTreeSet<LabelledArc>,
    colours: BTreeSet<(String, Vertex)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_arcs(arcs: impl IntoIterator<Item = LabelledArc>) -> Self {
        let mut g = Graph::new();
        for a in arcs {
            g.add_arc(a);
        }
        g
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) {
        self.vertices.insert(v.into());
    }

    pub fn add_arc(&mut self, arc: LabelledArc) {
        self.vertices.insert(arc.source.clone());
        self.vertices.insert(arc.target.clone());
        self.arcs.insert(arc);
    }

    pub fn add_colour(&mut self, colour: &str, v: &str) {
        self.vertices.insert(v.to_string());
        self.colours.insert((colour.to_string(), v.to_string()));
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<LabelledArc> {
        &self.arcs
    }

    pub fn colours(&self) -> &BTreeSet<(String, Vertex)> {
        &self.colours
    }

    pub fn has_arc(&self, source: &str, label: &str, target: &str) -> bool {
        self.arcs.contains(&LabelledArc::new(source, label, target))
    }

    pub fn has_colour(&self, colour: &str, v: &str) -> bool {
        self.colours.contains(&(colour.to_string(), v.to_string()))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_arcs<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a LabelledArc> + 'a {
        self.arcs.iter().filter(move |a| a.source == v)
    }

    /// No vertex has two outgoing arcs with the same label.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.arcs.iter().all(|a| seen.insert((&a.source, &a.label)))
    }

    /// The subgraph induced by `keep`.
    pub fn induced(&self, keep: impl Fn(&str) -> bool) -> Graph {
        Graph {
            vertices: self.vertices.iter().filter(|v| keep(v)).cloned().collect(),
            arcs: self.arcs.iter().filter(|a| keep(&a.source) && keep(&a.target)).cloned().collect(),
            colours: self.colours.iter().filter(|(_, v)| keep(v)).cloned().collect(),
        }
    }

    /// `self` with every colour removed.
    pub fn without_colours(&self) -> Graph {
        Graph { colours: BTreeSet::new(), ..self.clone() }
    }

    /// Whether every vertex, arc and colour of `self` belongs to `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.arcs.is_subset(&other.arcs)
            && self.colours.is_subset(&other.colours)
    }

    pub fn map_vertices(&self, f: impl Fn(&str) -> String) -> Graph {
        Graph {
            vertices: self.vertices.iter().map(|v| f(v)).collect(),
            arcs: self.arcs.iter().map(|a| LabelledArc::new(f(&a.source), a.label.clone(), f(&a.target))).collect(),
            colours: self.colours.iter().map(|(c, v)| (c.clone(), f(v))).collect(),
        }
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph {
            vertices: self.vertices.clone(),
            hyperarcs: self
                .arcs
                .iter()
                .map(|a| Hyperarc::new(a.label.clone(), [a.source.clone(), a.target.clone()]))
                .chain(self.colours.iter().map(|(c, v)| Hyperarc::new(c.clone(), [v.clone()])))
                .collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        dot::render(self)
    }

    /// The tree of paths of length at most `depth` leaving `root`. A path
    /// `root -a-> x -b-> y` is the vertex `root.a.x.b.y`.
    pub fn unfold(&self, root: &str, depth: usize) -> Result<Graph> {
        if !self.vertices.contains(root) {
            return invalid(format!("unknown root vertex `{root}`"));
        }
        let mut out_by: BTreeMap<&str, Vec<&LabelledArc>> = BTreeMap::new();
        for a in &self.arcs {
            out_by.entry(a.source.as_str()).or_default().push(a);
        }
        let mut tree = Graph::new();
        tree.add_vertex(root);
        for (c, v) in &self.colours {
            if v == root {
                tree.add_colour(c, root);
            }
        }
        let mut colours_of: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (c, v) in &self.colours {
            colours_of.entry(v.as_str()).or_default().push(c.as_str());
        }
        let mut layer: Vec<(String, &str)> = vec![(root.to_string(), root)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (path, end) in &layer {
                for a in out_by.get(end).into_iter().flatten() {
                    let ext = format!("{path}.{}.{}", a.label, a.target);
                    tree.add_arc(LabelledArc::new(path.clone(), a.label.clone(), ext.clone()));
                    for c in colours_of.get(a.target.as_str()).into_iter().flatten() {
                        tree.add_colour(c, &ext);
                    }
                    next.push((ext, a.target.as_str()));
                }
            }
            layer = next;
        }
        Ok(tree)
    }

    /// Inverse substitution on an explicit graph: `x --d--> y` whenever a
    /// word of `phi[d]` labels a walk from `x` to `y`, a token `t~` walking
    /// a `t`-arc backwards. With `restriction = Some((root, L))`, only
    /// vertices reached from `root` by a walk labelled in `L` are kept.
    pub fn inverse_substitution_explicit(
        &self,
        phi: &BTreeMap<String, FiniteAutomaton>,
        restriction: Option<(&str, &FiniteAutomaton)>,
    ) -> Result<Graph> {
        let labels: BTreeSet<&str> = self.arcs.iter().map(|a| a.label.as_str()).collect();
        let check = |fa: &FiniteAutomaton| -> Result<()> {
            for t in fa.alphabet().tokens() {
                let (base, _) = split_bar(t);
                if !labels.contains(base) {
                    return invalid(format!("direction `{t}` has no interpretation in the graph"));
                }
            }
            Ok(())
        };
        for fa in phi.values() {
            check(fa)?;
        }
        let kept: BTreeSet<&str> = match restriction {
            Some((root, lang)) => {
                if !self.vertices.contains(root) {
                    return invalid(format!("unknown root vertex `{root}`"));
                }
                check(lang)?;
                self.walk_ends(root, lang).into_iter().collect()
            }
            None => self.vertices.iter().map(String::as_str).collect(),
        };
        let mut g = Graph::new();
        for &v in &kept {
            g.add_vertex(v);
        }
        for (d, fa) in phi {
            for &x in &kept {
                for y in self.walk_ends(x, fa) {
                    if kept.contains(y) {
                        g.add_arc(LabelledArc::new(x, d.clone(), y));
                    }
                }
            }
        }
        Ok(g)
    }

    // Vertices `y` such that a word of L(fa) labels a walk from `x` to `y`.
    fn walk_ends<'a>(&'a self, x: &'a str, fa: &FiniteAutomaton) -> BTreeSet<&'a str> {
        let alpha = fa.alphabet();
        let steps: Vec<(String, bool)> = alpha
            .tokens()
            .iter()
            .map(|t| {
                let (b, bar) = split_bar(t);
                (b.to_string(), bar)
            })
            .collect();
        let mut seen: HashSet<(&str, usize)> = HashSet::new();
        let mut queue = VecDeque::new();
        for &q in fa.initial() {
            if seen.insert((x, q)) {
                queue.push_back((x, q));
            }
        }
        let mut ends = BTreeSet::new();
        while let Some((v, q)) = queue.pop_front() {
            if fa.is_final(q) {
                ends.insert(v);
            }
            for &(l, q2) in fa.successors(q) {
                let mut push = |w: &'a str| {
                    if seen.insert((w, q2)) {
                        queue.push_back((w, q2));
                    }
                };
                match l {
                    None => push(v),
                    Some(s) => {
                        let (base, bar) = &steps[s];
                        for a in &self.arcs {
                            if &a.label != base {
                                continue;
                            }
                            if !bar && a.source == v {
                                push(&a.target);
                            } else if *bar && a.target == v {
                                push(&a.source);
                            }
                        }
                    }
                }
            }
        }
        ends
    }
}

impl TryFrom<&Hypergraph> for Graph {
    type Error = Error;

    fn try_from(h: &Hypergraph) -> Result<Graph> {
        if let Some(e) = h.hyperarcs.iter().find(|e| e.arity() > 2) {
            return invalid(format!("hyperarc `{}` has arity {} > 2", e.label, e.arity()));
        }
        let mut g = h.graph_part(|_| true);
        for v in &h.vertices {
            g.add_vertex(v.clone());
        }
        Ok(g)
    }
}
