//! Rational relations and labelled rational transducers.
//!
//! A [`RationalRelation`] is a finite automaton whose edges carry pairs of
//! words over one vertex alphabet. A [`LabelledTransducer`] adds a map from
//! final states to sets of arc labels; restricting it to one label yields
//! the relation of that label.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::automata::FiniteAutomaton;
use crate::error::{invalid, Result};
use crate::limits;

/// An edge `source --input/output--> target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransducerEdge {
    pub source: usize,
    pub input: Word,
    pub output: Word,
    pub target: usize,
}

impl TransducerEdge {
    pub fn new(source: usize, input: Word, output: Word, target: usize) -> Self {
        TransducerEdge { source, input, output, target }
    }

    fn is_short(&self) -> bool {
        self.input.len() <= 1 && self.output.len() <= 1
    }
}

/// A subset of `X* × X*` accepted by a finite transducer.
#[derive(Clone, Debug)]
pub struct RationalRelation {
    alphabet: Alphabet,
    num_states: usize,
    initial: Vec<usize>,
    finals: Vec<usize>,
    edges: Vec<TransducerEdge>,
}

// one-letter edge view used by the product constructions
type ShortEdge = (usize, Option<Symbol>, Option<Symbol>, usize);
type ShortForm = (usize, Vec<ShortEdge>, Vec<usize>, Vec<usize>);
type Outgoing = HashMap<usize, Vec<(Option<Symbol>, Option<Symbol>, usize)>>;

fn check_edges(alphabet: &Alphabet, num_states: usize, edges: &[TransducerEdge]) -> Result<()> {
    for e in edges {
        if e.source >= num_states || e.target >= num_states {
            return invalid(format!("edge {} -> {} uses an undeclared state", e.source, e.target));
        }
        if let Some(&s) = e.input.iter().chain(&e.output).find(|&&s| s >= alphabet.len()) {
            return invalid(format!("edge symbol {s} outside alphabet {alphabet}"));
        }
    }
    Ok(())
}

fn sorted_states(states: impl IntoIterator<Item = usize>, num_states: usize, what: &str) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = states.into_iter().collect();
    if let Some(&q) = set.iter().find(|&&q| q >= num_states) {
        return invalid(format!("{what} state {q} is not declared ({num_states} states)"));
    }
    Ok(set.into_iter().collect())
}

impl RationalRelation {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = TransducerEdge>,
    ) -> Result<Self> {
        limits::check_states(num_states)?;
        let initial = sorted_states(initial, num_states, "initial")?;
        let finals = sorted_states(finals, num_states, "final")?;
        let edges: Vec<TransducerEdge> = edges.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        check_edges(&alphabet, num_states, &edges)?;
        Ok(RationalRelation { alphabet, num_states, initial, finals, edges })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        RationalRelation { alphabet, num_states: 0, initial: vec![], finals: vec![], edges: vec![] }
    }

    /// `{ (u, u) | u ∈ X* }`.
    pub fn identity(alphabet: Alphabet) -> Self {
        let edges = alphabet.symbols().map(|s| TransducerEdge::new(0, vec![s], vec![s], 0));
        Self::new(alphabet.clone(), 1, [0], [0], edges).expect("identity relation is valid")
    }

    /// `{ (u, u) | u ∈ L(language) }`.
    pub fn identity_on(language: &FiniteAutomaton) -> Self {
        let edges = language.transitions().iter().map(|&(p, l, q)| {
            let w: Word = l.into_iter().collect();
            TransducerEdge::new(p, w.clone(), w, q)
        });
        Self::new(
            language.alphabet().clone(),
            language.num_states(),
            language.initial().iter().copied(),
            language.finals(),
            edges,
        )
        .expect("identity on a valid automaton is valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn edges(&self) -> &[TransducerEdge] {
        &self.edges
    }

    pub fn is_normalized(&self) -> bool {
        self.edges.iter().all(TransducerEdge::is_short)
    }

    /// Splits every edge carrying a word longer than one letter through
    /// fresh states so that each edge reads and writes at most one letter.
    pub fn normalize_edges(&self) -> Result<Self> {
        let (num_states, edges) = split_edges(self.num_states, &self.edges);
        Self::new(self.alphabet.clone(), num_states, self.initial.clone(), self.finals.clone(), edges)
    }

    fn short_edges(&self) -> Result<ShortForm> {
        let norm;
        let r = if self.is_normalized() {
            self
        } else {
            norm = self.normalize_edges()?;
            &norm
        };
        let edges = r
            .edges
            .iter()
            .map(|e| (e.source, e.input.first().copied(), e.output.first().copied(), e.target))
            .collect();
        Ok((r.num_states, edges, r.initial.clone(), r.finals.clone()))
    }

    /// Decides `(u, v) ∈ R` by searching (state, |u-prefix|, |v-prefix|)
    /// configurations.
    pub fn accepts(&self, u: &[Symbol], v: &[Symbol]) -> bool {
        let finals: BTreeSet<usize> = self.finals.iter().copied().collect();
        accepts_pair(self.num_states, &self.edges, &self.initial, |q| finals.contains(&q), u, v)
    }

    /// The forward image `{ v | ∃u ∈ L(source), (u,v) ∈ R }`.
    pub fn image_of(&self, source: &FiniteAutomaton) -> Result<FiniteAutomaton> {
        same_alphabet(&self.alphabet, source.alphabet())?;
        let (_, edges, initial, finals) = self.short_edges()?;
        let mut by_src: Outgoing = HashMap::new();
        for &(p, a, b, q) in &edges {
            by_src.entry(p).or_default().push((a, b, q));
        }
        let finals: BTreeSet<usize> = finals.into_iter().collect();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut trans = Vec::new();
        let mut starts = Vec::new();
        let limit = limits::max_states();
        let mut intern = |k: (usize, usize), pairs: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| -> Result<usize> {
            if let Some(&id) = ids.get(&k) {
                return Ok(id);
            }
            let id = pairs.len();
            if id >= limit {
                limits::check_states(id + 1)?;
            }
            ids.insert(k, id);
            pairs.push(k);
            queue.push_back(id);
            Ok(id)
        };
        for &p in &initial {
            for &q in source.initial() {
                starts.push(intern((p, q), &mut pairs, &mut queue)?);
            }
        }
        let empty = Vec::new();
        while let Some(id) = queue.pop_front() {
            let (p, q) = pairs[id];
            for &(l, q2) in source.successors(q) {
                if l.is_none() {
                    let t = intern((p, q2), &mut pairs, &mut queue)?;
                    trans.push((id, None, t));
                }
            }
            for &(a, b, p2) in by_src.get(&p).unwrap_or(&empty) {
                match a {
                    None => {
                        let t = intern((p2, q), &mut pairs, &mut queue)?;
                        trans.push((id, b, t));
                    }
                    Some(x) => {
                        for &(l, q2) in source.successors(q) {
                            if l == Some(x) {
                                let t = intern((p2, q2), &mut pairs, &mut queue)?;
                                trans.push((id, b, t));
                            }
                        }
                    }
                }
            }
        }
        let fin: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(_, &(p, q))| finals.contains(&p) && source.is_final(q))
            .map(|(i, _)| i)
            .collect();
        Ok(FiniteAutomaton::new(self.alphabet.clone(), pairs.len(), starts, fin, trans)?.trim())
    }

    /// `{ u | ∃v ∈ L(target), (u,v) ∈ R }`.
    pub fn preimage_of(&self, target: &FiniteAutomaton) -> Result<FiniteAutomaton> {
        self.converse().image_of(target)
    }

    /// Relational composition `R ; S = { (u,w) | ∃v, (u,v) ∈ R ∧ (v,w) ∈ S }`.
    /// The middle tape is matched letter by letter after normalization.
    pub fn compose(&self, other: &RationalRelation) -> Result<RationalRelation> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let (_, e1, i1, f1) = self.short_edges()?;
        let (_, e2, i2, f2) = other.short_edges()?;
        let mut out1: HashMap<usize, Vec<ShortEdge>> = HashMap::new();
        for &e in &e1 {
            out1.entry(e.0).or_default().push(e);
        }
        let mut out2: HashMap<usize, Vec<ShortEdge>> = HashMap::new();
        for &e in &e2 {
            out2.entry(e.0).or_default().push(e);
        }
        let f1: BTreeSet<usize> = f1.into_iter().collect();
        let f2: BTreeSet<usize> = f2.into_iter().collect();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = Vec::new();
        let mut queue = VecDeque::new();
        let mut edges = Vec::new();
        let mut starts = Vec::new();
        let limit = limits::max_states();
        let mut intern = |k: (usize, usize), pairs: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| -> Result<usize> {
            if let Some(&id) = ids.get(&k) {
                return Ok(id);
            }
            let id = pairs.len();
            if id >= limit {
                limits::check_states(id + 1)?;
            }
            ids.insert(k, id);
            pairs.push(k);
            queue.push_back(id);
            Ok(id)
        };
        for &p in &i1 {
            for &q in &i2 {
                starts.push(intern((p, q), &mut pairs, &mut queue)?);
            }
        }
        let none = Vec::new();
        let word = |s: Option<Symbol>| -> Word { s.into_iter().collect() };
        while let Some(id) = queue.pop_front() {
            let (p, q) = pairs[id];
            let from1 = out1.get(&p).unwrap_or(&none);
            let from2 = out2.get(&q).unwrap_or(&none);
            for &(_, a, b, p2) in from1 {
                if b.is_none() {
                    let t = intern((p2, q), &mut pairs, &mut queue)?;
                    edges.push(TransducerEdge::new(id, word(a), vec![], t));
                }
            }
            for &(_, b, c, q2) in from2 {
                if b.is_none() {
                    let t = intern((p, q2), &mut pairs, &mut queue)?;
                    edges.push(TransducerEdge::new(id, vec![], word(c), t));
                }
            }
            for &(_, a, b, p2) in from1 {
                let Some(mid) = b else { continue };
                for &(_, b2, c, q2) in from2 {
                    if b2 == Some(mid) {
                        let t = intern((p2, q2), &mut pairs, &mut queue)?;
                        edges.push(TransducerEdge::new(id, word(a), word(c), t));
                    }
                }
            }
        }
        let finals: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| f1.contains(p) && f2.contains(q))
            .map(|(i, _)| i)
            .collect();
        Ok(RationalRelation::new(self.alphabet.clone(), pairs.len(), starts, finals, edges)?.trim())
    }

    /// `{ (v, u) | (u, v) ∈ R }`.
    pub fn converse(&self) -> RationalRelation {
        let edges = self
            .edges
            .iter()
            .map(|e| TransducerEdge::new(e.source, e.output.clone(), e.input.clone(), e.target))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        RationalRelation { edges, ..self.clone() }
    }

    pub fn union(&self, other: &RationalRelation) -> Result<RationalRelation> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let k = self.num_states;
        let shift = |e: &TransducerEdge| TransducerEdge::new(e.source + k, e.input.clone(), e.output.clone(), e.target + k);
        RationalRelation::new(
            self.alphabet.clone(),
            k + other.num_states,
            self.initial.iter().copied().chain(other.initial.iter().map(|q| q + k)),
            self.finals.iter().copied().chain(other.finals.iter().map(|q| q + k)),
            self.edges.iter().cloned().chain(other.edges.iter().map(shift)),
        )
    }

    /// Drops states that lie on no initial-to-final path.
    pub fn trim(&self) -> RationalRelation {
        let useful = useful_states(self.num_states, &self.edges, &self.initial, &self.finals);
        let (map, n) = renumber(&useful);
        let keep = |q: &usize| useful[*q];
        RationalRelation {
            alphabet: self.alphabet.clone(),
            num_states: n,
            initial: self.initial.iter().filter(|q| keep(q)).map(|&q| map[q]).collect(),
            finals: self.finals.iter().filter(|q| keep(q)).map(|&q| map[q]).collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| useful[e.source] && useful[e.target])
                .map(|e| TransducerEdge::new(map[e.source], e.input.clone(), e.output.clone(), map[e.target]))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.trim().finals.is_empty()
    }
}

fn split_edges(num_states: usize, edges: &[TransducerEdge]) -> (usize, Vec<TransducerEdge>) {
    let mut n = num_states;
    let mut out = Vec::with_capacity(edges.len());
    for e in edges {
        if e.is_short() {
            out.push(e.clone());
            continue;
        }
        let k = e.input.len().max(e.output.len());
        let mut prev = e.source;
        for i in 0..k {
            let next = if i + 1 == k {
                e.target
            } else {
                n += 1;
                n - 1
            };
            let a: Word = e.input.get(i).copied().into_iter().collect();
            let b: Word = e.output.get(i).copied().into_iter().collect();
            out.push(TransducerEdge::new(prev, a, b, next));
            prev = next;
        }
    }
    (n, out)
}

fn accepts_pair(
    num_states: usize,
    edges: &[TransducerEdge],
    initial: &[usize],
    is_final: impl Fn(usize) -> bool,
    u: &[Symbol],
    v: &[Symbol],
) -> bool {
    let mut out: Vec<Vec<&TransducerEdge>> = vec![Vec::new(); num_states];
    for e in edges {
        out[e.source].push(e);
    }
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<(usize, usize, usize)> = initial.iter().map(|&q| (q, 0, 0)).collect();
    seen.extend(queue.iter().copied());
    while let Some((q, i, j)) = queue.pop_front() {
        if i == u.len() && j == v.len() && is_final(q) {
            return true;
        }
        for e in &out[q] {
            if u[i..].starts_with(&e.input) && v[j..].starts_with(&e.output) {
                let c = (e.target, i + e.input.len(), j + e.output.len());
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
    }
    false
}

fn useful_states(num_states: usize, edges: &[TransducerEdge], initial: &[usize], finals: &[usize]) -> Vec<bool> {
    let mut fwd_adj = vec![Vec::new(); num_states];
    let mut bwd_adj = vec![Vec::new(); num_states];
    for e in edges {
        fwd_adj[e.source].push(e.target);
        bwd_adj[e.target].push(e.source);
    }
    let reach = |adj: &Vec<Vec<usize>>, start: &[usize]| {
        let mut seen = vec![false; num_states];
        let mut stack: Vec<usize> = start.to_vec();
        for &s in start {
            seen[s] = true;
        }
        while let Some(p) = stack.pop() {
            for &q in &adj[p] {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen
    };
    let f = reach(&fwd_adj, initial);
    let b = reach(&bwd_adj, finals);
    (0..num_states).map(|q| f[q] && b[q]).collect()
}

fn renumber(keep: &[bool]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; keep.len()];
    let mut n = 0;
    for (q, &k) in keep.iter().enumerate() {
        if k {
            map[q] = n;
            n += 1;
        }
    }
    (map, n)
}

/// A transducer over vertex alphabet `X` whose final states carry non-empty
/// sets of labels from `Σ`.
#[derive(Clone, Debug)]
pub struct LabelledTransducer {
    vertex_alphabet: Alphabet,
    label_alphabet: Alphabet,
    num_states: usize,
    initial: Vec<usize>,
    labels: BTreeMap<usize, BTreeSet<Symbol>>,
    edges: Vec<TransducerEdge>,
}

impl LabelledTransducer {
    /// Builds and validates a transducer. Final states given an empty label
    /// set are demoted to non-final.
    pub fn new(
        vertex_alphabet: Alphabet,
        label_alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = usize>,
        labels: BTreeMap<usize, BTreeSet<Symbol>>,
        edges: Vec<TransducerEdge>,
    ) -> Result<Self> {
        limits::check_states(num_states)?;
        let initial = sorted_states(initial, num_states, "initial")?;
        check_edges(&vertex_alphabet, num_states, &edges)?;
        let mut kept = BTreeMap::new();
        for (q, set) in labels {
            if q >= num_states {
                return invalid(format!("final state {q} is not declared ({num_states} states)"));
            }
            if let Some(&a) = set.iter().find(|&&a| a >= label_alphabet.len()) {
                return invalid(format!("label {a} outside {label_alphabet}"));
            }
            if !set.is_empty() {
                kept.insert(q, set);
            }
        }
        Ok(LabelledTransducer { vertex_alphabet, label_alphabet, num_states, initial, labels: kept, edges })
    }

    /// Disjoint union of relations, each final state labelled with the label
    /// of its relation.
    pub fn from_relations(
        vertex_alphabet: Alphabet,
        label_alphabet: Alphabet,
        relations: &[(Symbol, RationalRelation)],
    ) -> Result<Self> {
        let mut n = 0;
        let mut initial = Vec::new();
        let mut labels: BTreeMap<usize, BTreeSet<Symbol>> = BTreeMap::new();
        let mut edges = Vec::new();
        for (label, r) in relations {
            same_alphabet(&vertex_alphabet, r.alphabet())?;
            initial.extend(r.initial.iter().map(|q| q + n));
            for &f in &r.finals {
                labels.entry(f + n).or_default().insert(*label);
            }
            edges.extend(
                r.edges
                    .iter()
                    .map(|e| TransducerEdge::new(e.source + n, e.input.clone(), e.output.clone(), e.target + n)),
            );
            n += r.num_states;
        }
        Self::new(vertex_alphabet, label_alphabet, n, initial, labels, edges)
    }

    pub fn vertex_alphabet(&self) -> &Alphabet {
        &self.vertex_alphabet
    }

    pub fn label_alphabet(&self) -> &Alphabet {
        &self.label_alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// Final states with their label sets.
    pub fn labels(&self) -> &BTreeMap<usize, BTreeSet<Symbol>> {
        &self.labels
    }

    pub fn edges(&self) -> &[TransducerEdge] {
        &self.edges
    }

    pub fn is_normalized(&self) -> bool {
        self.edges.iter().all(TransducerEdge::is_short)
    }

    pub fn normalize_edges(&self) -> Result<Self> {
        let (n, edges) = split_edges(self.num_states, &self.edges);
        Self::new(
            self.vertex_alphabet.clone(),
            self.label_alphabet.clone(),
            n,
            self.initial.clone(),
            self.labels.clone(),
            edges,
        )
    }

    fn check_label(&self, label: Symbol) -> Result<()> {
        if label >= self.label_alphabet.len() {
            return invalid(format!("label {label} outside {}", self.label_alphabet));
        }
        Ok(())
    }

    /// Whether `u --label--> v` is accepted: some initial-to-final path
    /// spells `(u, v)` and its final state carries `label`.
    pub fn accepts_arc(&self, u: &[Symbol], label: Symbol, v: &[Symbol]) -> Result<bool> {
        self.check_label(label)?;
        if let Some(&s) = u.iter().chain(v).find(|&&s| s >= self.vertex_alphabet.len()) {
            return invalid(format!("vertex symbol {s} outside {}", self.vertex_alphabet));
        }
        let finals = |q: usize| self.labels.get(&q).is_some_and(|set| set.contains(&label));
        Ok(accepts_pair(self.num_states, &self.edges, &self.initial, finals, u, v))
    }

    /// The relation `G_a`: the transducer keeping only final states whose
    /// label set contains `label`.
    pub fn relation_of(&self, label: Symbol) -> Result<RationalRelation> {
        self.check_label(label)?;
        let finals: Vec<usize> = self
            .labels
            .iter()
            .filter(|(_, set)| set.contains(&label))
            .map(|(&q, _)| q)
            .collect();
        RationalRelation::new(
            self.vertex_alphabet.clone(),
            self.num_states,
            self.initial.clone(),
            finals,
            self.edges.clone(),
        )
    }
}
