//! Finite automata over a [`SymbolAlphabet`].
//!
//! Automata are immutable values with dense integer states. Every operation
//! builds a fresh automaton. ε-transitions (label `None`) are allowed in the
//! representation and disappear under [`FiniteAutomaton::determinize`].

mod regex;

pub use regex::RegularExpression;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::error::{invalid, Result};
use crate::limits::{self, DEFAULT_ENUMERATION_CAP};

/// Transition label; `None` is ε.
pub type Label = Option<Symbol>;

/// A (possibly non-deterministic, possibly ε-) finite automaton.
#[derive(Clone, Debug)]
pub struct FiniteAutomaton {
    alphabet: Alphabet,
    num_states: usize,
    initial: Vec<usize>,
    finals: Vec<bool>,
    transitions: Vec<(usize, Label, usize)>,
    out: Vec<Vec<(Label, usize)>>,
}

/// Result of a capped enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub words: Vec<Word>,
    /// Set when the cap fired and more words exist.
    pub truncated: bool,
}

impl FiniteAutomaton {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, Label, usize)>,
    ) -> Result<Self> {
        limits::check_states(num_states)?;
        let initial: BTreeSet<usize> = initial.into_iter().collect();
        let mut final_flags = vec![false; num_states];
        for f in finals {
            if f >= num_states {
                return invalid(format!("final state {f} is not declared ({num_states} states)"));
            }
            final_flags[f] = true;
        }
        if let Some(&i) = initial.iter().find(|&&i| i >= num_states) {
            return invalid(format!("initial state {i} is not declared ({num_states} states)"));
        }
        let transitions: BTreeSet<(usize, Label, usize)> = transitions.into_iter().collect();
        let mut out = vec![Vec::new(); num_states];
        for &(p, l, q) in &transitions {
            if p >= num_states || q >= num_states {
                return invalid(format!("transition ({p},{l:?},{q}) uses an undeclared state"));
            }
            if let Some(s) = l {
                if s >= alphabet.len() {
                    return invalid(format!("transition symbol {s} outside alphabet {alphabet}"));
                }
            }
            out[p].push((l, q));
        }
        Ok(FiniteAutomaton {
            alphabet,
            num_states,
            initial: initial.into_iter().collect(),
            finals: final_flags,
            transitions: transitions.into_iter().collect(),
            out,
        })
    }

    /// The automaton accepting nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self::new(alphabet, 0, [], [], []).expect("empty automaton is valid")
    }

    /// The automaton accepting exactly `{ε}`.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        Self::new(alphabet, 1, [0], [0], []).expect("ε automaton is valid")
    }

    /// Accepts exactly one word.
    pub fn singleton(alphabet: Alphabet, word: &[Symbol]) -> Result<Self> {
        let n = word.len() + 1;
        let trans = word.iter().enumerate().map(|(i, &s)| (i, Some(s), i + 1));
        Self::new(alphabet, n, [0], [n - 1], trans)
    }

    /// Accepts a finite set of words (a trie).
    pub fn from_words<'a>(alphabet: Alphabet, words: impl IntoIterator<Item = &'a Word>) -> Result<Self> {
        let mut children: Vec<BTreeMap<Symbol, usize>> = vec![BTreeMap::new()];
        let mut finals = BTreeSet::new();
        for w in words {
            let mut node = 0;
            for &s in w {
                let next = children.len();
                node = *children[node].entry(s).or_insert(next);
                if node == next {
                    children.push(BTreeMap::new());
                }
            }
            finals.insert(node);
        }
        let trans: Vec<_> = children
            .iter()
            .enumerate()
            .flat_map(|(p, m)| m.iter().map(move |(&s, &q)| (p, Some(s), q)))
            .collect();
        Self::new(alphabet, children.len(), [0], finals, trans)
    }

    /// Accepts every word over the alphabet.
    pub fn universal(alphabet: Alphabet) -> Self {
        let trans: Vec<_> = alphabet.symbols().map(|s| (0, Some(s), 0)).collect();
        Self::new(alphabet, 1, [0], [0], trans).expect("universal automaton is valid")
    }

    /// Accepts every word of length at most `max_len`.
    pub fn up_to_length(alphabet: Alphabet, max_len: usize) -> Result<Self> {
        let mut trans = Vec::new();
        for i in 0..max_len {
            for s in alphabet.symbols() {
                trans.push((i, Some(s), i + 1));
            }
        }
        Self::new(alphabet, max_len + 1, [0], 0..=max_len, trans)
    }

    /// Parses and compiles a regular expression.
    pub fn from_regex(alphabet: Alphabet, text: &str) -> Result<Self> {
        RegularExpression::parse(&alphabet, text)?.compile(alphabet)
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

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    pub fn transitions(&self) -> &[(usize, Label, usize)] {
        &self.transitions
    }

    pub fn successors(&self, q: usize) -> &[(Label, usize)] {
        &self.out[q]
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().any(|t| t.1.is_none())
    }

    /// True when ε-free with at most one initial state and one transition
    /// per (state, symbol).
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 || self.has_epsilon() {
            return false;
        }
        self.out.iter().all(|succ| {
            let mut seen = BTreeSet::new();
            succ.iter().all(|(l, _)| seen.insert(*l))
        })
    }

    /// Closes `set` (in place) under ε-transitions.
    pub fn epsilon_closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &(l, q) in &self.out[p] {
                if l.is_none() && set.insert(q) {
                    stack.push(q);
                }
            }
        }
    }

    fn step(&self, set: &BTreeSet<usize>, s: Symbol) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &p in set {
            for &(l, q) in &self.out[p] {
                if l == Some(s) {
                    next.insert(q);
                }
            }
        }
        self.epsilon_closure(&mut next);
        next
    }

    pub fn initial_closure(&self) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = self.initial.iter().copied().collect();
        self.epsilon_closure(&mut set);
        set
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut cur = self.initial_closure();
        for &s in word {
            if cur.is_empty() {
                return false;
            }
            cur = self.step(&cur, s);
        }
        cur.iter().any(|&q| self.finals[q])
    }

    /// Parses `text` over the automaton's alphabet and tests membership.
    pub fn accepts_text(&self, text: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(text)?))
    }

    /// Subset construction. Returns the DFA together with the NFA state set
    /// behind each DFA state. Only reachable, non-empty subsets are built, so
    /// the result may be partial.
    pub fn determinize_with_subsets(&self) -> Result<(FiniteAutomaton, Vec<BTreeSet<usize>>)> {
        let start = self.initial_closure();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut trans = Vec::new();
        let limit = limits::max_states();
        if !start.is_empty() {
            ids.insert(start.clone(), 0);
            subsets.push(start);
        }
        let mut i = 0;
        while i < subsets.len() {
            // collect successors per symbol in one pass
            let mut by_sym: BTreeMap<Symbol, BTreeSet<usize>> = BTreeMap::new();
            for &p in &subsets[i] {
                for &(l, q) in &self.out[p] {
                    if let Some(s) = l {
                        by_sym.entry(s).or_default().insert(q);
                    }
                }
            }
            for (s, mut next) in by_sym {
                self.epsilon_closure(&mut next);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        if id >= limit {
                            limits::check_states(id + 1)?;
                        }
                        ids.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                trans.push((i, Some(s), id));
            }
            i += 1;
        }
        let finals: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|&q| self.finals[q]))
            .map(|(i, _)| i)
            .collect();
        let initial: Vec<usize> = if subsets.is_empty() { vec![] } else { vec![0] };
        let dfa = FiniteAutomaton::new(self.alphabet.clone(), subsets.len(), initial, finals, trans)?;
        Ok((dfa, subsets))
    }

    pub fn determinize(&self) -> Result<FiniteAutomaton> {
        Ok(self.determinize_with_subsets()?.0)
    }

    /// Adds a sink so that every (state, symbol) has a successor. Expects a
    /// deterministic automaton.
    pub fn complete(&self) -> Result<FiniteAutomaton> {
        let dfa = if self.is_deterministic() { self.clone() } else { self.determinize()? };
        let sink = dfa.num_states;
        let mut trans = dfa.transitions.clone();
        let mut needs_sink = dfa.initial.is_empty();
        for q in 0..dfa.num_states {
            for s in dfa.alphabet.symbols() {
                if !dfa.out[q].iter().any(|&(l, _)| l == Some(s)) {
                    trans.push((q, Some(s), sink));
                    needs_sink = true;
                }
            }
        }
        if !needs_sink {
            return Ok(dfa);
        }
        for s in dfa.alphabet.symbols() {
            trans.push((sink, Some(s), sink));
        }
        let initial = if dfa.initial.is_empty() { vec![sink] } else { dfa.initial.clone() };
        FiniteAutomaton::new(dfa.alphabet.clone(), sink + 1, initial, dfa.finals(), trans)
    }

    pub fn complement(&self) -> Result<FiniteAutomaton> {
        let full = self.complete()?;
        let finals: Vec<usize> = (0..full.num_states).filter(|&q| !full.finals[q]).collect();
        FiniteAutomaton::new(full.alphabet.clone(), full.num_states, full.initial.clone(), finals, full.transitions.clone())
    }

    /// Product construction; ε-moves of either side advance that side alone.
    pub fn intersect(&self, other: &FiniteAutomaton) -> Result<FiniteAutomaton> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut pairs = Vec::new();
        let mut trans = Vec::new();
        let limit = limits::max_states();
        let mut intern = |p: (usize, usize), pairs: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| -> Result<usize> {
            if let Some(&id) = ids.get(&p) {
                return Ok(id);
            }
            let id = pairs.len();
            if id >= limit {
                limits::check_states(id + 1)?;
            }
            ids.insert(p, id);
            pairs.push(p);
            queue.push_back(id);
            Ok(id)
        };
        let mut initial = Vec::new();
        for &a in &self.initial {
            for &b in &other.initial {
                initial.push(intern((a, b), &mut pairs, &mut queue)?);
            }
        }
        while let Some(id) = queue.pop_front() {
            let (a, b) = pairs[id];
            for &(la, qa) in &self.out[a] {
                match la {
                    None => {
                        let t = intern((qa, b), &mut pairs, &mut queue)?;
                        trans.push((id, None, t));
                    }
                    Some(s) => {
                        for &(lb, qb) in &other.out[b] {
                            if lb == Some(s) {
                                let t = intern((qa, qb), &mut pairs, &mut queue)?;
                                trans.push((id, Some(s), t));
                            }
                        }
                    }
                }
            }
            for &(lb, qb) in &other.out[b] {
                if lb.is_none() {
                    let t = intern((a, qb), &mut pairs, &mut queue)?;
                    trans.push((id, None, t));
                }
            }
        }
        let finals: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| self.finals[a] && other.finals[b])
            .map(|(i, _)| i)
            .collect();
        FiniteAutomaton::new(self.alphabet.clone(), pairs.len(), initial, finals, trans)
    }

    /// Disjoint union.
    pub fn union(&self, other: &FiniteAutomaton) -> Result<FiniteAutomaton> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let k = self.num_states;
        let initial = self.initial.iter().copied().chain(other.initial.iter().map(|q| q + k));
        let finals = self.finals().chain(other.finals().map(|q| q + k)).collect::<Vec<_>>();
        let trans = self
            .transitions
            .iter()
            .copied()
            .chain(other.transitions.iter().map(|&(p, l, q)| (p + k, l, q + k)));
        FiniteAutomaton::new(self.alphabet.clone(), k + other.num_states, initial, finals, trans)
    }

    pub fn concat(&self, other: &FiniteAutomaton) -> Result<FiniteAutomaton> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let k = self.num_states;
        let mut trans: Vec<_> = self
            .transitions
            .iter()
            .copied()
            .chain(other.transitions.iter().map(|&(p, l, q)| (p + k, l, q + k)))
            .collect();
        for f in self.finals() {
            for &i in &other.initial {
                trans.push((f, None, i + k));
            }
        }
        let finals: Vec<usize> = other.finals().map(|q| q + k).collect();
        FiniteAutomaton::new(self.alphabet.clone(), k + other.num_states, self.initial.clone(), finals, trans)
    }

    /// Kleene star via a fresh initial-and-final hub state.
    pub fn star(&self) -> Result<FiniteAutomaton> {
        let hub = self.num_states;
        let mut trans = self.transitions.clone();
        for &i in &self.initial {
            trans.push((hub, None, i));
        }
        for f in self.finals() {
            trans.push((f, None, hub));
        }
        FiniteAutomaton::new(self.alphabet.clone(), hub + 1, [hub], [hub], trans)
    }

    pub fn reverse(&self) -> Result<FiniteAutomaton> {
        let trans = self.transitions.iter().map(|&(p, l, q)| (q, l, p));
        FiniteAutomaton::new(self.alphabet.clone(), self.num_states, self.finals(), self.initial.clone(), trans)
    }

    fn reachable_from(&self, start: impl IntoIterator<Item = usize>, backwards: bool) -> Vec<bool> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.num_states];
        for &(p, _, q) in &self.transitions {
            if backwards {
                adj[q].push(p);
            } else {
                adj[p].push(q);
            }
        }
        let mut seen = vec![false; self.num_states];
        let mut stack: Vec<usize> = Vec::new();
        for s in start {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
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
    }

    pub fn is_empty(&self) -> bool {
        let seen = self.reachable_from(self.initial.iter().copied(), false);
        !(0..self.num_states).any(|q| seen[q] && self.finals[q])
    }

    /// Removes states that are not both accessible and co-accessible.
    pub fn trim(&self) -> FiniteAutomaton {
        let fwd = self.reachable_from(self.initial.iter().copied(), false);
        let bwd = self.reachable_from(self.finals(), true);
        let mut map = vec![usize::MAX; self.num_states];
        let mut n = 0;
        for q in 0..self.num_states {
            if fwd[q] && bwd[q] {
                map[q] = n;
                n += 1;
            }
        }
        let keep = |q: usize| map[q] != usize::MAX;
        let initial: Vec<usize> = self.initial.iter().filter(|&&q| keep(q)).map(|&q| map[q]).collect();
        let finals: Vec<usize> = self.finals().filter(|&q| keep(q)).map(|q| map[q]).collect();
        let trans: Vec<_> = self
            .transitions
            .iter()
            .filter(|&&(p, _, q)| keep(p) && keep(q))
            .map(|&(p, l, q)| (map[p], l, map[q]))
            .collect();
        FiniteAutomaton::new(self.alphabet.clone(), n, initial, finals, trans).expect("trim preserves validity")
    }

    /// All accepted words of length at most `max_len`, ordered by length and
    /// then lexicographically by alphabet order.
    pub fn enumerate(&self, max_len: usize) -> Result<Vec<Word>> {
        Ok(self.enumerate_capped(max_len, usize::MAX)?.words)
    }

    /// Like [`enumerate`](Self::enumerate) but stops after `cap` words,
    /// reporting truncation.
    pub fn enumerate_capped(&self, max_len: usize, cap: usize) -> Result<Enumeration> {
        let dfa = self.determinize()?.trim();
        let mut words = Vec::new();
        if dfa.num_states == 0 {
            return Ok(Enumeration { words, truncated: false });
        }
        // can[r][q]: some word of length exactly r leads from q to a final state
        let mut can = vec![dfa.finals.clone()];
        for r in 1..=max_len {
            let prev = &can[r - 1];
            let row: Vec<bool> = (0..dfa.num_states)
                .map(|q| dfa.out[q].iter().any(|&(_, t)| prev[t]))
                .collect();
            can.push(row);
        }
        let mut sorted_out: Vec<Vec<(Symbol, usize)>> = dfa
            .out
            .iter()
            .map(|v| v.iter().map(|&(l, q)| (l.expect("dfa has no ε"), q)).collect())
            .collect();
        for v in &mut sorted_out {
            v.sort_unstable();
        }
        let start = dfa.initial[0];
        for len in 0..=max_len {
            if !can[len][start] {
                continue;
            }
            let mut prefix = Vec::with_capacity(len);
            if !Self::emit(&sorted_out, &can, start, len, &mut prefix, &mut words, cap) {
                return Ok(Enumeration { words, truncated: true });
            }
        }
        Ok(Enumeration { words, truncated: false })
    }

    // returns false once the cap is exceeded
    fn emit(
        out: &[Vec<(Symbol, usize)>],
        can: &[Vec<bool>],
        q: usize,
        remaining: usize,
        prefix: &mut Word,
        words: &mut Vec<Word>,
        cap: usize,
    ) -> bool {
        if remaining == 0 {
            if words.len() >= cap {
                return false;
            }
            words.push(prefix.clone());
            return true;
        }
        for &(s, t) in &out[q] {
            if can[remaining - 1][t] {
                prefix.push(s);
                let ok = Self::emit(out, can, t, remaining - 1, prefix, words, cap);
                prefix.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Re-expresses the automaton over another alphabet containing every
    /// token used by a transition.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> Result<FiniteAutomaton> {
        if Arc::ptr_eq(&self.alphabet, alphabet) || self.alphabet == *alphabet {
            return Ok(FiniteAutomaton { alphabet: alphabet.clone(), ..self.clone() });
        }
        let mut map = Vec::with_capacity(self.alphabet.len());
        for t in self.alphabet.tokens() {
            map.push(alphabet.symbol(t));
        }
        let mut trans = Vec::with_capacity(self.transitions.len());
        for &(p, l, q) in &self.transitions {
            let l = match l {
                None => None,
                Some(s) => match map[s] {
                    Some(t) => Some(t),
                    None => {
                        return invalid(format!(
                            "symbol `{}` has no counterpart in {alphabet}",
                            self.alphabet.token(s)
                        ))
                    }
                },
            };
            trans.push((p, l, q));
        }
        FiniteAutomaton::new(alphabet.clone(), self.num_states, self.initial.clone(), self.finals(), trans)
    }

    /// Shortcut for the default enumeration cap.
    pub fn enumerate_default(&self, max_len: usize) -> Result<Enumeration> {
        self.enumerate_capped(max_len, DEFAULT_ENUMERATION_CAP)
    }
}
