//! Independent oracles and random instance generators shared by the
//! integration tests and the acceptance harness. Nothing here calls the
//! library's decision procedures; only its data accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;

use infgraph::chr::PcpInstance;
use infgraph::format::{read_presentation, Presentation};
use infgraph::graph::{Graph, Hyperarc, Hypergraph, LabelledArc, RankedAlphabet};
use infgraph::hr::{HRGrammar, HrRule};
use infgraph::prefix_rec::PrefixRecPresentation;
use infgraph::rational::RationalGraphPresentation;
use infgraph::transducer::{LabelledTransducer, RationalRelation, TransducerEdge};
use infgraph::{Alphabet, FiniteAutomaton, RegularExpression, SymbolAlphabet, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn rational_file(name: &str) -> RationalGraphPresentation {
    match read_presentation(&data(name)).unwrap() {
        Presentation::Rational(p) => p,
        _ => panic!("{name} is not rational"),
    }
}

pub fn prefrec_file(name: &str) -> PrefixRecPresentation {
    match read_presentation(&data(name)).unwrap() {
        Presentation::PrefixRec(p) => p,
        _ => panic!("{name} is not prefrec"),
    }
}

pub fn hr_file(name: &str) -> HRGrammar {
    match read_presentation(&data(name)).unwrap() {
        Presentation::Hr(g) => g,
        _ => panic!("{name} is not hr"),
    }
}

/// All words over `k` letters of length at most `n`, shortest first.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..k {
                let mut w2: Word = w.clone();
                w2.push(s);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A transducer as plain data: states, initial, final, edges.
#[derive(Clone, Debug)]
pub struct Raw {
    pub initial: Vec<usize>,
    pub finals: BTreeSet<usize>,
    pub edges: Vec<(usize, Word, Word, usize)>,
}

impl Raw {
    pub fn of_relation(r: &RationalRelation) -> Self {
        Raw {
            initial: r.initial().to_vec(),
            finals: r.finals().iter().copied().collect(),
            edges: r.edges().iter().map(|e| (e.source, e.input.clone(), e.output.clone(), e.target)).collect(),
        }
    }

    pub fn of_label(t: &LabelledTransducer, label: usize) -> Self {
        Raw {
            initial: t.initial().to_vec(),
            finals: t.labels().iter().filter(|(_, ls)| ls.contains(&label)).map(|(&q, _)| q).collect(),
            edges: t.edges().iter().map(|e| (e.source, e.input.clone(), e.output.clone(), e.target)).collect(),
        }
    }

    /// Pairs read along paths of at most `max_edges` edges, both sides of
    /// length at most `max_len`.
    pub fn pairs(&self, max_edges: usize, max_len: usize) -> BTreeSet<(Word, Word)> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<(usize, Word, Word, usize)> =
            self.initial.iter().map(|&q| (q, vec![], vec![], 0)).collect();
        while let Some((q, u, v, d)) = stack.pop() {
            if self.finals.contains(&q) {
                out.insert((u.clone(), v.clone()));
            }
            if d == max_edges {
                continue;
            }
            for (p, a, b, r) in &self.edges {
                if *p == q && u.len() + a.len() <= max_len && v.len() + b.len() <= max_len {
                    let mut u2 = u.clone();
                    u2.extend(a);
                    let mut v2 = v.clone();
                    v2.extend(b);
                    stack.push((*r, u2, v2, d + 1));
                }
            }
        }
        out
    }
}

/// Exact membership of `(u, w)` in the composition of two relations whose
/// edges carry at most one letter per side: a search over both runs at
/// once with a one-letter buffer on the shared middle tape.
pub fn compose_member(r1: &Raw, r2: &Raw, u: &[usize], w: &[usize]) -> bool {
    type Conf = (usize, usize, usize, usize, Option<usize>);
    let mut seen: BTreeSet<Conf> = BTreeSet::new();
    let mut queue: VecDeque<Conf> = VecDeque::new();
    for &p in &r1.initial {
        for &q in &r2.initial {
            queue.push_back((p, 0, q, 0, None));
        }
    }
    while let Some(c) = queue.pop_front() {
        if !seen.insert(c) {
            continue;
        }
        let (p, i, q, j, buf) = c;
        if buf.is_none() && i == u.len() && j == w.len() && r1.finals.contains(&p) && r2.finals.contains(&q) {
            return true;
        }
        for (s, a, b, t) in &r1.edges {
            if *s != p || buf.is_some() && !b.is_empty() {
                continue;
            }
            let i2 = match a.as_slice() {
                [] => i,
                [x] if u.get(i) == Some(x) => i + 1,
                _ => continue,
            };
            queue.push_back((*t, i2, q, j, b.first().copied().or(buf)));
        }
        for (s, a, b, t) in &r2.edges {
            if *s != q {
                continue;
            }
            let buf2 = match (a.as_slice(), buf) {
                ([], _) => buf,
                ([x], Some(y)) if *x == y => None,
                _ => continue,
            };
            let j2 = match b.as_slice() {
                [] => j,
                [x] if w.get(j) == Some(x) => j + 1,
                _ => continue,
            };
            queue.push_back((p, i, *t, j2, buf2));
        }
    }
    false
}

/// A random relation over `k` letters with at most one letter per edge side
/// and no ε/ε edges.
pub fn random_relation(rng: &mut ChaCha8Rng, x: &Alphabet, max_states: usize, length_preserving: bool) -> RationalRelation {
    let n = rng.gen_range(1..=max_states);
    let edges = random_edges(rng, x.len(), n, length_preserving);
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    RationalRelation::new(x.clone(), n, [0], finals, edges).unwrap()
}

fn random_edges(rng: &mut ChaCha8Rng, k: usize, n: usize, length_preserving: bool) -> Vec<TransducerEdge> {
    let count = rng.gen_range(1..=2 * n + 1);
    (0..count)
        .map(|_| {
            let (a, b) = loop {
                let a: Word = if length_preserving || rng.gen_bool(0.7) { vec![rng.gen_range(0..k)] } else { vec![] };
                let b: Word = if length_preserving || rng.gen_bool(0.7) { vec![rng.gen_range(0..k)] } else { vec![] };
                if !a.is_empty() || !b.is_empty() {
                    break (a, b);
                }
            };
            TransducerEdge::new(rng.gen_range(0..n), a, b, rng.gen_range(0..n))
        })
        .collect()
}

/// A random labelled transducer with one-letter edges and no ε/ε edge.
pub fn random_labelled(
    rng: &mut ChaCha8Rng,
    x: &Alphabet,
    sigma: &Alphabet,
    max_states: usize,
    length_preserving: bool,
) -> LabelledTransducer {
    let n = rng.gen_range(1..=max_states);
    let edges = random_edges(rng, x.len(), n, length_preserving);
    let mut labels: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for q in 0..n {
        for a in sigma.symbols() {
            if rng.gen_bool(0.4) {
                labels.entry(q).or_default().insert(a);
            }
        }
    }
    let initial: Vec<usize> = if rng.gen_bool(0.85) { vec![0] } else { (0..n).filter(|_| rng.gen_bool(0.5)).collect() };
    LabelledTransducer::new(x.clone(), sigma.clone(), n, initial, labels, edges).unwrap()
}

/// A random automaton with up to `max_states` states.
pub fn random_fa(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_states: usize, epsilon: bool) -> FiniteAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut trans = Vec::new();
    for p in 0..n {
        for s in alphabet.symbols() {
            for q in 0..n {
                if rng.gen_bool(0.6 / n as f64 + 0.1) {
                    trans.push((p, Some(s), q));
                }
            }
        }
        if epsilon && rng.gen_bool(0.2) {
            trans.push((p, None, rng.gen_range(0..n)));
        }
    }
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    FiniteAutomaton::new(alphabet.clone(), n, [0], finals, trans).unwrap()
}

/// Plain NFA acceptance by subset simulation over the transition list.
pub fn nfa_accepts(fa: &FiniteAutomaton, w: &[usize]) -> bool {
    let close = |mut set: BTreeSet<usize>| {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(p, l, r) in fa.transitions() {
                if p == q && l.is_none() && set.insert(r) {
                    stack.push(r);
                }
            }
        }
        set
    };
    let mut cur = close(fa.initial().iter().copied().collect());
    for &s in w {
        let next = fa.transitions().iter().filter(|&&(p, l, _)| cur.contains(&p) && l == Some(s)).map(|t| t.2).collect();
        cur = close(next);
    }
    cur.iter().any(|&q| fa.is_final(q))
}

/// Vertices over `k` directions of length at most `cap`, numbered
/// `offset[len] + code` with `code` the base-`k` value of the word.
pub struct WalkIndex {
    k: usize,
    offset: Vec<usize>,
}

impl WalkIndex {
    pub fn new(k: usize, cap: usize) -> Self {
        let mut offset = vec![0usize; cap + 2];
        for len in 0..=cap {
            offset[len + 1] = offset[len] + k.pow(len as u32);
        }
        WalkIndex { k, offset }
    }

    pub fn cap(&self) -> usize {
        self.offset.len() - 2
    }

    pub fn size(&self) -> usize {
        self.offset[self.offset.len() - 1]
    }

    pub fn index(&self, w: &[usize]) -> usize {
        self.offset[w.len()] + w.iter().fold(0usize, |c, &d| c * self.k + d)
    }

    fn word(&self, len: usize, mut code: usize) -> Word {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % self.k;
            code /= self.k;
        }
        w
    }
}

/// Tree-walk configurations `(state, vertex)` reachable from `start`, with
/// vertices no longer than the index cap; marks the vertices reached in a
/// final state. Letter `2d` descends along direction `d`, `2d+1` ascends.
pub fn walk_hits(phi: &FiniteAutomaton, ix: &WalkIndex, start: &[usize]) -> Vec<bool> {
    let (n, k, cap, size) = (phi.num_states(), ix.k, ix.cap(), ix.size());
    let mut adj: Vec<Vec<(Option<usize>, usize)>> = vec![Vec::new(); n];
    for &(p, l, r) in phi.transitions() {
        adj[p].push((l, r));
    }
    let finals: Vec<bool> = (0..n).map(|q| phi.is_final(q)).collect();
    let mut seen = vec![false; n * size];
    let mut hits = vec![false; size];
    let code = start.iter().fold(0usize, |c, &d| c * k + d);
    let mut stack: Vec<(usize, usize, usize)> = phi.initial().iter().map(|&q| (q, start.len(), code)).collect();
    while let Some((q, len, code)) = stack.pop() {
        let at = ix.offset[len] + code;
        if std::mem::replace(&mut seen[q * size + at], true) {
            continue;
        }
        hits[at] |= finals[q];
        for &(l, r) in &adj[q] {
            match l {
                None => stack.push((r, len, code)),
                Some(s) if s % 2 == 0 => {
                    if len < cap {
                        stack.push((r, len + 1, code * k + s / 2));
                    }
                }
                Some(s) => {
                    if len > 0 && code % k == s / 2 {
                        stack.push((r, len - 1, code / k));
                    }
                }
            }
        }
    }
    hits
}

/// [`walk_hits`] as a set of words.
pub fn walk_bfs(phi: &FiniteAutomaton, k: usize, start: &[usize], cap: usize) -> BTreeSet<Word> {
    let ix = WalkIndex::new(k, cap.max(start.len()));
    let hits = walk_hits(phi, &ix, start);
    let mut out = BTreeSet::new();
    for len in 0..=ix.cap() {
        for code in 0..k.pow(len as u32) {
            if hits[ix.offset[len] + code] {
                out.insert(ix.word(len, code));
            }
        }
    }
    out
}

/// Whether some concatenation of at most `max_len` pairs is a solution,
/// with the shortest one found (fewest indices, then lexicographic).
pub fn pcp_brute_force(inst: &PcpInstance, max_len: usize) -> Option<Vec<usize>> {
    let mut layer: Vec<(Vec<usize>, String, String)> = vec![(vec![], String::new(), String::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, u, v) in &layer {
            for (i, (a, b)) in inst.pairs().iter().enumerate() {
                let (u2, v2) = (format!("{u}{a}"), format!("{v}{b}"));
                if !(u2.starts_with(&v2) || v2.starts_with(&u2)) {
                    continue;
                }
                let mut s2 = seq.clone();
                s2.push(i);
                if u2 == v2 {
                    return Some(s2);
                }
                next.push((s2, u2, v2));
            }
        }
        layer = next;
    }
    None
}

/// Every solution of at most `max_len` indices, as (indices, solution word).
pub fn pcp_solutions(inst: &PcpInstance, max_len: usize) -> Vec<(Vec<usize>, String)> {
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<usize>, String, String)> = vec![(vec![], String::new(), String::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, u, v) in &layer {
            for (i, (a, b)) in inst.pairs().iter().enumerate() {
                let (u2, v2) = (format!("{u}{a}"), format!("{v}{b}"));
                if !(u2.starts_with(&v2) || v2.starts_with(&u2)) {
                    continue;
                }
                let mut s2 = seq.clone();
                s2.push(i);
                if u2 == v2 {
                    out.push((s2.clone(), u2.clone()));
                }
                next.push((s2, u2, v2));
            }
        }
        layer = next;
    }
    out
}

fn hyper(arcs: &[(&str, Vec<String>)]) -> Hypergraph {
    Hypergraph::from_parts([], arcs.iter().map(|(l, vs)| Hyperarc::new(*l, vs.iter().cloned()))).unwrap()
}

/// A random deterministic HR grammar with binary terminals `a`, `b`,
/// colours `src` and `seen`, and up to two non-terminals of arity 1 or 2.
pub fn random_hr(rng: &mut ChaCha8Rng) -> HRGrammar {
    let k = rng.gen_range(1..=2);
    let arities: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
    let names = ["A", "B"];
    let mut rules = Vec::new();
    for (i, &n) in arities.iter().enumerate() {
        let formal: Vec<String> = (0..n).map(|j| format!("x{j}")).collect();
        let fresh: Vec<String> = (0..rng.gen_range(1..=2)).map(|j| format!("n{j}")).collect();
        let pool: Vec<String> = formal.iter().chain(&fresh).cloned().collect();
        let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())].clone();
        let mut arcs: Vec<(&str, Vec<String>)> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let l = if rng.gen_bool(0.5) { "a" } else { "b" };
            arcs.push((l, vec![pick(rng), pick(rng)]));
        }
        for _ in 0..rng.gen_range(0..=2) {
            let j = rng.gen_range(0..k);
            let vs: Vec<String> = (0..arities[j]).map(|_| fresh[rng.gen_range(0..fresh.len())].clone()).collect();
            arcs.push((names[j], vs));
        }
        if rng.gen_bool(0.3) {
            arcs.push(("src", vec![pick(rng)]));
        }
        let mut rhs = hyper(&arcs);
        for v in &pool {
            rhs.add_vertex(v.clone());
        }
        rules.push(HrRule { nonterminal: names[i].to_string(), formal, rhs });
    }
    let axiom_vs: Vec<String> = (0..arities[0]).map(|j| format!("v{j}")).collect();
    let axiom = hyper(&[(names[0], axiom_vs.clone()), ("src", vec![axiom_vs[0].clone()])]);
    let nonterminals: Vec<(&str, usize)> = names.iter().zip(&arities).map(|(n, &a)| (*n, a)).collect();
    HRGrammar::new(
        RankedAlphabet::new(nonterminals).unwrap(),
        RankedAlphabet::new([("a", 2), ("b", 2), ("src", 1), ("seen", 1)]).unwrap(),
        axiom,
        rules,
    )
    .unwrap()
}

/// Vertices reachable from `src`-coloured vertices along arcs.
pub fn forward_reach(g: &Graph, source: &str) -> BTreeSet<String> {
    let mut seen: BTreeSet<String> = g.colours().iter().filter(|(c, _)| c == source).map(|(_, v)| v.clone()).collect();
    let mut stack: Vec<String> = seen.iter().cloned().collect();
    while let Some(v) = stack.pop() {
        for a in g.out_arcs(&v) {
            if seen.insert(a.target.clone()) {
                stack.push(a.target.clone());
            }
        }
    }
    seen
}

/// Adds every vertex in `vertices` to a copy of `g`.
pub fn with_vertices<'a>(g: &Graph, vertices: impl IntoIterator<Item = &'a String>) -> Graph {
    let mut h = g.clone();
    for v in vertices {
        h.add_vertex(v.clone());
    }
    h
}

pub fn arcs_of(triples: &[(&str, &str, &str)]) -> BTreeSet<LabelledArc> {
    triples.iter().map(|(s, l, t)| LabelledArc::new(*s, *l, *t)).collect()
}

pub fn binary_alphabet() -> Alphabet {
    SymbolAlphabet::shared(["0", "1"]).unwrap()
}

pub fn shared(tokens: &[&str]) -> Alphabet {
    Arc::new(SymbolAlphabet::new(tokens.iter().copied()).unwrap())
}

/// A random expression with about `size` nodes over `k` symbols.
pub fn random_regex(rng: &mut ChaCha8Rng, k: usize, size: usize) -> RegularExpression {
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => RegularExpression::Epsilon,
            1 => RegularExpression::Empty,
            _ => RegularExpression::Symbol(rng.gen_range(0..k)),
        };
    }
    match rng.gen_range(0..3) {
        0 => RegularExpression::star(random_regex(rng, k, size - 1)),
        op => {
            let left = rng.gen_range(1..size);
            let a = random_regex(rng, k, left);
            let b = random_regex(rng, k, size - left);
            if op == 1 {
                RegularExpression::union(a, b)
            } else {
                RegularExpression::concat(a, b)
            }
        }
    }
}

/// End positions of matches of `re` against `w` starting at `from`.
fn ends(re: &RegularExpression, w: &[usize], from: usize) -> BTreeSet<usize> {
    use RegularExpression::*;
    match re {
        Empty => BTreeSet::new(),
        Epsilon => BTreeSet::from([from]),
        Symbol(s) => {
            if w.get(from) == Some(s) {
                BTreeSet::from([from + 1])
            } else {
                BTreeSet::new()
            }
        }
        Union(a, b) => ends(a, w, from).union(&ends(b, w, from)).copied().collect(),
        Concat(a, b) => ends(a, w, from).into_iter().flat_map(|m| ends(b, w, m)).collect(),
        Star(a) => {
            let mut out = BTreeSet::from([from]);
            let mut todo = vec![from];
            while let Some(m) = todo.pop() {
                for e in ends(a, w, m) {
                    if out.insert(e) {
                        todo.push(e);
                    }
                }
            }
            out
        }
    }
}

/// Backtracking regex matcher, independent of any automaton.
pub fn regex_matches(re: &RegularExpression, w: &[usize]) -> bool {
    ends(re, w, 0).contains(&w.len())
}
