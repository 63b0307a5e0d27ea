//! Rational graphs: vertices are words over `X`, arcs are the pairs accepted
//! by a labelled rational transducer, optionally restricted to a regular
//! vertex set.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, SymbolAlphabet, Word};
use crate::automata::{Enumeration, FiniteAutomaton};
use crate::error::{invalid, Result};
use crate::graph::{Graph, LabelledArc};
use crate::limits::DEFAULT_ENUMERATION_CAP;
use crate::transducer::{LabelledTransducer, RationalRelation};

/// A labelled transducer plus an optional regular vertex restriction.
#[derive(Clone, Debug)]
pub struct RationalGraphPresentation {
    transducer: LabelledTransducer,
    restriction: Option<FiniteAutomaton>,
    // per label, normalized and restricted on both sides
    relations: Vec<RationalRelation>,
}

/// A label word together with initial and target vertex sets.
#[derive(Clone, Debug)]
pub struct TraceQuery {
    pub initial: FiniteAutomaton,
    pub target: FiniteAutomaton,
    pub word: Word,
}

impl RationalGraphPresentation {
    pub fn new(transducer: LabelledTransducer, restriction: Option<FiniteAutomaton>) -> Result<Self> {
        let restriction = match restriction {
            Some(r) => {
                same_alphabet(transducer.vertex_alphabet(), r.alphabet())?;
                Some(r.determinize()?.trim())
            }
            None => None,
        };
        let norm = transducer.normalize_edges()?;
        let mut relations = Vec::new();
        for a in transducer.label_alphabet().symbols() {
            let mut r = norm.relation_of(a)?.trim();
            if let Some(lang) = &restriction {
                let id = RationalRelation::identity_on(lang);
                r = id.compose(&r)?.compose(&id)?;
            }
            relations.push(r);
        }
        Ok(RationalGraphPresentation { transducer, restriction, relations })
    }

    pub fn transducer(&self) -> &LabelledTransducer {
        &self.transducer
    }

    pub fn restriction(&self) -> Option<&FiniteAutomaton> {
        self.restriction.as_ref()
    }

    pub fn vertex_alphabet(&self) -> &Alphabet {
        self.transducer.vertex_alphabet()
    }

    pub fn label_alphabet(&self) -> &Alphabet {
        self.transducer.label_alphabet()
    }

    /// The arc relation of `label` with both endpoints in the restriction.
    pub fn relation(&self, label: Symbol) -> Result<&RationalRelation> {
        match self.relations.get(label) {
            Some(r) => Ok(r),
            None => invalid(format!("label {label} outside {}", self.label_alphabet())),
        }
    }

    pub fn is_vertex(&self, u: &[Symbol]) -> bool {
        self.restriction.as_ref().is_none_or(|r| r.accepts(u))
    }

    fn check_word(&self, u: &[Symbol]) -> Result<()> {
        if let Some(&s) = u.iter().find(|&&s| s >= self.vertex_alphabet().len()) {
            return invalid(format!("vertex symbol {s} outside {}", self.vertex_alphabet()));
        }
        Ok(())
    }

    /// The restriction, or `X*` when there is none.
    pub fn vertex_language(&self) -> FiniteAutomaton {
        self.restriction
            .clone()
            .unwrap_or_else(|| FiniteAutomaton::universal(self.vertex_alphabet().clone()))
    }

    pub fn arc_exists(&self, u: &[Symbol], label: Symbol, v: &[Symbol]) -> Result<bool> {
        self.check_word(u)?;
        self.check_word(v)?;
        Ok(self.transducer.accepts_arc(u, label, v)? && self.is_vertex(u) && self.is_vertex(v))
    }

    /// `G_a(u)` up to `max_len`, capped at the default enumeration size.
    pub fn successors(&self, u: &[Symbol], label: Symbol, max_len: usize) -> Result<Enumeration> {
        self.check_word(u)?;
        let from = FiniteAutomaton::singleton(self.vertex_alphabet().clone(), u)?;
        self.relation(label)?.image_of(&from)?.enumerate_capped(max_len, DEFAULT_ENUMERATION_CAP)
    }

    pub fn predecessors(&self, v: &[Symbol], label: Symbol, max_len: usize) -> Result<Enumeration> {
        self.check_word(v)?;
        let to = FiniteAutomaton::singleton(self.vertex_alphabet().clone(), v)?;
        self.relation(label)?.preimage_of(&to)?.enumerate_capped(max_len, DEFAULT_ENUMERATION_CAP)
    }

    /// All vertices of length at most `max_len` and every arc between them.
    /// Vertex names are the displayed words (`ε` for the empty word).
    pub fn bounded_view(&self, max_len: usize) -> Result<Graph> {
        let x = self.vertex_alphabet().clone();
        let mut g = Graph::new();
        for w in self.vertex_language().enumerate(max_len)? {
            g.add_vertex(x.display_word(&w));
        }
        let sigma = self.label_alphabet().clone();
        for (a, r) in self.relations.iter().enumerate() {
            for (u, v) in bounded_pairs(r, max_len) {
                g.add_arc(LabelledArc::new(x.display_word(&u), sigma.token(a), x.display_word(&v)));
            }
        }
        Ok(g)
    }

    /// Whether some path labelled `query.word` leads from `L(initial)` to
    /// `L(target)`. Fronts are determinized and trimmed after every step.
    pub fn trace_member(&self, query: &TraceQuery) -> Result<bool> {
        let mut front = self.initial_front(&query.initial)?;
        for &a in &query.word {
            if front.is_empty() {
                return Ok(false);
            }
            front = self.step_front(&front, a)?;
        }
        Ok(!front.intersect(&query.target)?.is_empty())
    }

    fn initial_front(&self, initial: &FiniteAutomaton) -> Result<FiniteAutomaton> {
        same_alphabet(self.vertex_alphabet(), initial.alphabet())?;
        let s = match &self.restriction {
            Some(r) => initial.intersect(r)?,
            None => initial.clone(),
        };
        Ok(s.determinize()?.trim())
    }

    fn step_front(&self, front: &FiniteAutomaton, label: Symbol) -> Result<FiniteAutomaton> {
        Ok(self.relation(label)?.image_of(front)?.determinize()?.trim())
    }

    /// Every label word of length at most `max_len` accepted by
    /// [`trace_member`](Self::trace_member), in length-lexicographic order.
    pub fn trace_language_sample(
        &self,
        initial: &FiniteAutomaton,
        target: &FiniteAutomaton,
        max_len: usize,
    ) -> Result<Vec<Word>> {
        same_alphabet(self.vertex_alphabet(), target.alphabet())?;
        let mut out = Vec::new();
        let start = self.initial_front(initial)?;
        let mut layer = if start.is_empty() { vec![] } else { vec![(Vec::new(), start)] };
        for len in 0..=max_len {
            for (w, front) in &layer {
                if !front.intersect(target)?.is_empty() {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, front) in &layer {
                for a in self.label_alphabet().symbols() {
                    let f = self.step_front(front, a)?;
                    if !f.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, f));
                    }
                }
            }
            layer = next;
        }
        Ok(out)
    }

    /// The composition `G · H`: label `a.b` relates `u` to `w` when
    /// `u --a--> v` in `self` and `v --b--> w` in `other`.
    pub fn compose_graphs(&self, other: &RationalGraphPresentation) -> Result<RationalGraphPresentation> {
        same_alphabet(self.vertex_alphabet(), other.vertex_alphabet())?;
        let (s1, s2) = (self.label_alphabet(), other.label_alphabet());
        let mut tokens = Vec::new();
        let mut relations = Vec::new();
        for a in s1.symbols() {
            for b in s2.symbols() {
                relations.push((tokens.len(), self.relations[a].compose(&other.relations[b])?));
                tokens.push(format!("{}.{}", s1.token(a), s2.token(b)));
            }
        }
        let sigma = SymbolAlphabet::shared(tokens)?;
        let t = LabelledTransducer::from_relations(self.vertex_alphabet().clone(), sigma, &relations)?;
        let restriction = match (&self.restriction, &other.restriction) {
            (Some(r1), Some(r2)) => Some(r1.intersect(r2)?),
            (Some(r), None) | (None, Some(r)) => Some(r.clone()),
            (None, None) => None,
        };
        RationalGraphPresentation::new(t, restriction)
    }

    /// Inverse finite substitution: label `d` relates `u` to `v` when some
    /// word of `phi[d]` labels a path from `u` to `v`, a letter `c~` walking
    /// a `c`-arc backwards. Words are written over `Σ ∪ Σ̄`.
    pub fn inverse_finite_substitution(
        &self,
        phi: &BTreeMap<String, Vec<String>>,
    ) -> Result<RationalGraphPresentation> {
        if phi.is_empty() {
            return invalid("substitution defines no label");
        }
        let walk = self.label_alphabet().with_bars()?;
        let identity = match &self.restriction {
            Some(r) => RationalRelation::identity_on(r),
            None => RationalRelation::identity(self.vertex_alphabet().clone()),
        };
        let mut relations = Vec::new();
        for (i, words) in phi.values().enumerate() {
            let mut union = RationalRelation::empty(self.vertex_alphabet().clone());
            for text in words {
                let mut r = identity.clone();
                for s in walk.parse_word(text)? {
                    let step = &self.relations[s / 2];
                    r = if s % 2 == 1 { r.compose(&step.converse())? } else { r.compose(step)? };
                }
                union = union.union(&r)?;
            }
            relations.push((i, union));
        }
        let sigma = SymbolAlphabet::shared(phi.keys().cloned())?;
        let t = LabelledTransducer::from_relations(self.vertex_alphabet().clone(), sigma, &relations)?;
        RationalGraphPresentation::new(t, self.restriction.clone())
    }
}

/// Pairs `(u, v)` of `r` with `|u|, |v| ≤ max_len`, found by a search over
/// (state, input, output) configurations of the normalized relation.
pub fn bounded_pairs(r: &RationalRelation, max_len: usize) -> BTreeSet<(Word, Word)> {
    let r = if r.is_normalized() { r.clone() } else { r.normalize_edges().expect("normalization keeps limits") };
    let mut out_edges = vec![Vec::new(); r.num_states()];
    for e in r.edges() {
        out_edges[e.source].push(e);
    }
    let finals: HashSet<usize> = r.finals().iter().copied().collect();
    let mut seen: HashSet<(usize, Word, Word)> = HashSet::new();
    let mut queue: VecDeque<(usize, Word, Word)> = VecDeque::new();
    for &q in r.initial() {
        if seen.insert((q, vec![], vec![])) {
            queue.push_back((q, vec![], vec![]));
        }
    }
    let mut pairs = BTreeSet::new();
    while let Some((q, u, v)) = queue.pop_front() {
        if finals.contains(&q) {
            pairs.insert((u.clone(), v.clone()));
        }
        for e in &out_edges[q] {
            if u.len() + e.input.len() > max_len || v.len() + e.output.len() > max_len {
                continue;
            }
            let mut u2 = u.clone();
            u2.extend(&e.input);
            let mut v2 = v.clone();
            v2.extend(&e.output);
            let c = (e.target, u2, v2);
            if !seen.contains(&c) {
                seen.insert(c.clone());
                queue.push_back(c);
            }
        }
    }
    pairs
}

/// Edge-index sequences of the paths from an initial state to a final state
/// labelled `label` that use no edge twice. Edge indices refer to
/// [`LabelledTransducer::edges`].
pub fn simple_paths_substitution(t: &LabelledTransducer, label: Symbol) -> Result<Vec<Vec<usize>>> {
    if label >= t.label_alphabet().len() {
        return invalid(format!("label {label} outside {}", t.label_alphabet()));
    }
    let mut out_edges = vec![Vec::new(); t.num_states()];
    for (i, e) in t.edges().iter().enumerate() {
        out_edges[e.source].push(i);
    }
    let accepting = |q: usize| t.labels().get(&q).is_some_and(|s| s.contains(&label));
    let mut found = BTreeSet::new();
    let mut used = vec![false; t.edges().len()];
    let mut path = Vec::new();
    fn dfs(
        q: usize,
        t: &LabelledTransducer,
        out_edges: &[Vec<usize>],
        accepting: &dyn Fn(usize) -> bool,
        used: &mut [bool],
        path: &mut Vec<usize>,
        found: &mut BTreeSet<(usize, Vec<usize>)>,
    ) {
        if accepting(q) {
            found.insert((path.len(), path.clone()));
        }
        for &i in &out_edges[q] {
            if used[i] {
                continue;
            }
            used[i] = true;
            path.push(i);
            dfs(t.edges()[i].target, t, out_edges, accepting, used, path, found);
            path.pop();
            used[i] = false;
        }
    }
    for &q in t.initial() {
        dfs(q, t, &out_edges, &accepting, &mut used, &mut path, &mut found);
    }
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

/// Convenience: a regular expression over `X` as an automaton.
pub fn vertex_set(x: &Alphabet, regex: &str) -> Result<FiniteAutomaton> {
    FiniteAutomaton::from_regex(Arc::clone(x), regex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::anbncn;

    fn p() -> RationalGraphPresentation {
        RationalGraphPresentation::new(anbncn(), None).unwrap()
    }

    fn w(p: &RationalGraphPresentation, s: &str) -> Word {
        p.vertex_alphabet().parse_word(s).unwrap()
    }

    fn l(p: &RationalGraphPresentation, s: &str) -> Symbol {
        p.label_alphabet().symbol(s).unwrap()
    }

    #[test]
    fn arcs_successors_predecessors() {
        let p = p();
        assert!(p.arc_exists(&w(&p, "001"), l(&p, "b"), &w(&p, "011")).unwrap());
        let s = p.successors(&[], l(&p, "a"), 3).unwrap();
        assert_eq!(s.words, vec![w(&p, "0")]);
        let s = p.predecessors(&w(&p, "bot"), l(&p, "c"), 3).unwrap();
        assert_eq!(s.words, vec![w(&p, "1")]);
        assert!(p.arc_exists(&[7], 0, &[]).is_err());
    }

    #[test]
    fn small_views() {
        let p = p();
        let g0 = p.bounded_view(0).unwrap();
        assert_eq!(g0.num_vertices(), 1);
        assert_eq!(g0.num_arcs(), 0);
        let g1 = p.bounded_view(1).unwrap();
        assert_eq!(g1.num_vertices(), 4);
        let arcs: Vec<_> = g1.arcs().iter().map(|a| (a.source.as_str(), a.label.as_str(), a.target.as_str())).collect();
        assert_eq!(arcs, vec![("0", "b", "1"), ("1", "c", "bot"), ("ε", "a", "0")]);
        let g2 = p.bounded_view(2).unwrap();
        assert_eq!(g2.num_arcs(), 7);
        assert!(g2.has_arc("01", "b", "11") && g2.has_arc("11", "c", "1"));
        assert!(g1.is_subgraph_of(&g2));
        assert!(g2.is_deterministic());
    }

    #[test]
    fn traces() {
        let p = p();
        let x = p.vertex_alphabet().clone();
        let q = |word: &str| TraceQuery {
            initial: vertex_set(&x, "()").unwrap(),
            target: vertex_set(&x, "bot").unwrap(),
            word: p.label_alphabet().parse_word(word).unwrap(),
        };
        assert!(p.trace_member(&q("aabbcc")).unwrap());
        assert!(!p.trace_member(&q("aabbc")).unwrap());
        let sample = p
            .trace_language_sample(&vertex_set(&x, "()").unwrap(), &vertex_set(&x, "bot").unwrap(), 6)
            .unwrap();
        let shown: Vec<String> = sample.iter().map(|w| p.label_alphabet().format_word(w)).collect();
        assert_eq!(shown, ["abc", "aabbcc"]);
        let empty = TraceQuery { initial: vertex_set(&x, "0").unwrap(), target: vertex_set(&x, "0").unwrap(), word: vec![] };
        assert!(p.trace_member(&empty).unwrap());
    }

    #[test]
    fn composition_labels() {
        let p = p();
        let pp = p.compose_graphs(&p).unwrap();
        let ab = pp.label_alphabet().symbol("a.b").unwrap();
        let bc = pp.label_alphabet().symbol("b.c").unwrap();
        assert!(pp.arc_exists(&[], ab, &w(&p, "1")).unwrap());
        assert!(pp.arc_exists(&w(&p, "01"), bc, &w(&p, "1")).unwrap());
        assert!(!pp.arc_exists(&w(&p, "01"), bc, &w(&p, "bot")).unwrap());
    }

    #[test]
    fn inverse_substitution() {
        let p = p();
        let phi = BTreeMap::from([
            ("d".to_string(), vec!["a~".to_string()]),
            ("e".to_string(), vec!["".to_string()]),
            ("f".to_string(), vec![]),
        ]);
        let q = p.inverse_finite_substitution(&phi).unwrap();
        let d = q.label_alphabet().symbol("d").unwrap();
        assert!(q.arc_exists(&w(&p, "0"), d, &[]).unwrap());
        let view = q.bounded_view(1).unwrap();
        assert!(view.has_arc("bot", "e", "bot"));
        assert!(!view.arcs().iter().any(|a| a.label == "f"));
    }

    #[test]
    fn simple_paths_of_c() {
        let t = anbncn();
        let c = t.label_alphabet().symbol("c").unwrap();
        let paths = simple_paths_substitution(&t, c).unwrap();
        assert_eq!(paths, vec![vec![2], vec![4, 6], vec![4, 9, 6]]);
        let a = t.label_alphabet().symbol("a").unwrap();
        assert_eq!(simple_paths_substitution(&t, a).unwrap(), vec![vec![3], vec![3, 10]]);
    }
}
