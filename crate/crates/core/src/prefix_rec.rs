//! Prefix-recognizable graphs as inverse regular substitutions of the
//! complete `|D|`-ary tree, restricted to a regular vertex set.
//!
//! Tree vertices are words over the direction alphabet `D`. A walk letter
//! `d` descends to the `d`-child; `d~` ascends and is enabled only at
//! vertices ending in `d`. Arc queries are answered exactly by saturation:
//! the control state of `φ(a)` plays the role of a pushdown state and the
//! tree vertex that of the stack.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::automata::{Enumeration, FiniteAutomaton, Label};
use crate::error::{invalid, Result};
use crate::graph::{Graph, LabelledArc};
use crate::limits::DEFAULT_ENUMERATION_CAP;

#[derive(Clone, Debug)]
pub struct PrefixRecPresentation {
    directions: Alphabet,
    walk: Alphabet,
    labels: Alphabet,
    phi: Vec<FiniteAutomaton>,
    // net-zero summaries of each φ(a), computed once
    summaries: Vec<Vec<Vec<bool>>>,
    restriction: FiniteAutomaton,
}

/// A configuration of a tree walk: a state of `φ(a)` and a tree vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WalkConfiguration {
    pub state: usize,
    pub vertex: Word,
}

/// Walk letter `s` of `D ∪ D̄` as (direction, barred).
pub fn walk_letter(s: Symbol) -> (Symbol, bool) {
    (s / 2, s % 2 == 1)
}

/// Summaries of one `φ(a)` automaton.
struct Saturation<'a> {
    fa: &'a FiniteAutomaton,
    // net-zero reachability: walks returning to the starting height
    // without going below it
    nz: &'a [Vec<bool>],
}

impl<'a> Saturation<'a> {
    fn summarize(fa: &FiniteAutomaton) -> Vec<Vec<bool>> {
        let n = fa.num_states();
        let mut nz = vec![vec![false; n]; n];
        for (q, row) in nz.iter_mut().enumerate() {
            row[q] = true;
        }
        let trans = fa.transitions();
        let mut changed = true;
        while changed {
            changed = false;
            // unit steps: ε, or push d / net-zero / pop d
            let mut units: Vec<(usize, usize)> = Vec::new();
            for &(q, l, q2) in trans {
                match l {
                    None => units.push((q, q2)),
                    Some(s) => {
                        let (d, bar) = walk_letter(s);
                        if bar {
                            continue;
                        }
                        for q3 in (0..n).filter(|&q3| nz[q2][q3]) {
                            for &(l2, q4) in fa.successors(q3) {
                                if l2 == Some(2 * d + 1) {
                                    units.push((q, q4));
                                }
                            }
                        }
                    }
                }
            }
            for row in nz.iter_mut() {
                for &(q1, q2) in &units {
                    if row[q1] && !row[q2] {
                        row[q2] = true;
                        changed = true;
                    }
                }
            }
        }
        nz
    }

    /// States reached from `from` by a walk whose net effect removes one
    /// trailing `d`.
    fn pop(&self, from: &BTreeSet<usize>, d: Symbol) -> BTreeSet<usize> {
        let n = self.fa.num_states();
        let mid: BTreeSet<usize> = from.iter().flat_map(|&q| (0..n).filter(move |&q1| self.nz[q][q1])).collect();
        let mut after = BTreeSet::new();
        for &q1 in &mid {
            for &(l, q2) in self.fa.successors(q1) {
                if l == Some(2 * d + 1) {
                    after.insert(q2);
                }
            }
        }
        after.iter().flat_map(|&q2| (0..n).filter(move |&q| self.nz[q2][q])).collect()
    }

    /// Automaton over `D` accepting the vertices `z` with `(q, z)` reachable
    /// from an initial configuration at `start` and `accept(q)`.
    fn reachable(&self, directions: &Alphabet, start: &[Symbol], accept: &dyn Fn(usize) -> bool) -> Result<FiniteAutomaton> {
        let k = start.len();
        let n = self.fa.num_states();
        let mut levels = vec![BTreeSet::new(); k + 1];
        levels[k] = self.fa.initial().iter().copied().collect();
        for j in (1..=k).rev() {
            if levels[j].is_empty() {
                break;
            }
            levels[j - 1] = self.pop(&levels[j], start[j - 1]);
        }
        // states 0..=k: the chain spelling prefixes of `start`; then one
        // copy of the φ states reading the unpopped descents
        let u = |q: usize| k + 1 + q;
        let mut trans: Vec<(usize, Label, usize)> = Vec::new();
        for (j, &d) in start.iter().enumerate() {
            trans.push((j, Some(d), j + 1));
        }
        for (j, level) in levels.iter().enumerate() {
            for &q in level {
                trans.push((j, None, u(q)));
            }
        }
        for &(q, l, q2) in self.fa.transitions() {
            if let Some(s) = l {
                let (d, bar) = walk_letter(s);
                if !bar {
                    trans.push((u(q), Some(d), u(q2)));
                }
            }
        }
        for q in 0..n {
            for q2 in 0..n {
                if q != q2 && self.nz[q][q2] {
                    trans.push((u(q), None, u(q2)));
                }
            }
        }
        let finals = (0..n).filter(|&q| accept(q)).map(u);
        Ok(FiniteAutomaton::new(directions.clone(), k + 1 + n, [0], finals, trans)?.trim())
    }
}

impl PrefixRecPresentation {
    /// `phi[a]` is an automaton over the walk alphabet `D ∪ D̄` (see
    /// [`crate::SymbolAlphabet::with_bars`]) and `restriction` one over `D`.
    pub fn new(
        directions: Alphabet,
        labels: Alphabet,
        phi: Vec<FiniteAutomaton>,
        restriction: FiniteAutomaton,
    ) -> Result<Self> {
        let walk = Arc::new(directions.with_bars()?);
        if phi.len() != labels.len() {
            return invalid(format!("φ defines {} images for {} labels", phi.len(), labels.len()));
        }
        for fa in &phi {
            same_alphabet(&walk, fa.alphabet())?;
        }
        same_alphabet(&directions, restriction.alphabet())?;
        let summaries = phi.iter().map(Saturation::summarize).collect();
        Ok(PrefixRecPresentation { directions, walk, labels, phi, summaries, restriction })
    }

    pub fn directions(&self) -> &Alphabet {
        &self.directions
    }

    pub fn walk_alphabet(&self) -> &Alphabet {
        &self.walk
    }

    pub fn label_alphabet(&self) -> &Alphabet {
        &self.labels
    }

    pub fn phi(&self, label: Symbol) -> Result<&FiniteAutomaton> {
        match self.phi.get(label) {
            Some(fa) => Ok(fa),
            None => invalid(format!("label {label} outside {}", self.labels)),
        }
    }

    pub fn restriction(&self) -> &FiniteAutomaton {
        &self.restriction
    }

    fn check_vertex(&self, u: &[Symbol]) -> Result<()> {
        if let Some(&s) = u.iter().find(|&&s| s >= self.directions.len()) {
            return invalid(format!("vertex letter {s} is not a direction of {}", self.directions));
        }
        Ok(())
    }

    /// For every state `q` of `φ(label)`, the vertices `z` such that `(q, z)`
    /// is reachable from an initial configuration at `start`.
    pub fn post_star(&self, label: Symbol, start: &[Symbol]) -> Result<Vec<FiniteAutomaton>> {
        self.check_vertex(start)?;
        let fa = self.phi(label)?;
        let sat = Saturation { fa, nz: &self.summaries[label] };
        (0..fa.num_states()).map(|q| sat.reachable(&self.directions, start, &|p| p == q)).collect()
    }

    /// The vertices reached from `start` by a walk spelling a word of
    /// `φ(label)`, before restriction.
    pub fn walk_targets(&self, label: Symbol, start: &[Symbol]) -> Result<FiniteAutomaton> {
        self.check_vertex(start)?;
        let fa = self.phi(label)?;
        Saturation { fa, nz: &self.summaries[label] }.reachable(&self.directions, start, &|q| fa.is_final(q))
    }

    pub fn is_vertex(&self, u: &[Symbol]) -> bool {
        self.restriction.accepts(u)
    }

    pub fn arc_exists(&self, u: &[Symbol], label: Symbol, v: &[Symbol]) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.is_vertex(u) || !self.is_vertex(v) {
            self.phi(label)?;
            return Ok(false);
        }
        Ok(self.walk_targets(label, u)?.accepts(v))
    }

    pub fn successors(&self, u: &[Symbol], label: Symbol, max_len: usize) -> Result<Enumeration> {
        self.check_vertex(u)?;
        if !self.is_vertex(u) {
            self.phi(label)?;
            return Ok(Enumeration { words: vec![], truncated: false });
        }
        self.walk_targets(label, u)?
            .intersect(&self.restriction)?
            .enumerate_capped(max_len, DEFAULT_ENUMERATION_CAP)
    }

    /// Predecessors of length at most `max_len`, by testing every vertex of
    /// that length.
    pub fn predecessors(&self, v: &[Symbol], label: Symbol, max_len: usize) -> Result<Enumeration> {
        self.check_vertex(v)?;
        let candidates = self.restriction.enumerate_capped(max_len, DEFAULT_ENUMERATION_CAP)?;
        let mut words = Vec::new();
        for u in candidates.words {
            if self.arc_exists(&u, label, v)? {
                words.push(u);
            }
        }
        Ok(Enumeration { words, truncated: candidates.truncated })
    }

    pub fn bounded_view(&self, max_len: usize) -> Result<Graph> {
        let d = &self.directions;
        let mut g = Graph::new();
        let vertices = self.restriction.enumerate(max_len)?;
        for u in &vertices {
            g.add_vertex(d.display_word(u));
        }
        for u in &vertices {
            for a in self.labels.symbols() {
                for v in self.successors(u, a, max_len)?.words {
                    g.add_arc(LabelledArc::new(d.display_word(u), self.labels.token(a), d.display_word(&v)));
                }
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::SymbolAlphabet;

    pub(crate) fn ladder(c: &str) -> PrefixRecPresentation {
        let d = SymbolAlphabet::shared(["A", "B"]).unwrap();
        let walk = Arc::new(d.with_bars().unwrap());
        let sigma = SymbolAlphabet::shared(["a", "b", "c"]).unwrap();
        let phi = ["A", "B", c].iter().map(|r| FiniteAutomaton::from_regex(walk.clone(), r).unwrap()).collect();
        let l = FiniteAutomaton::from_regex(d.clone(), "A+B*+B*A").unwrap();
        PrefixRecPresentation::new(d, sigma, phi, l).unwrap()
    }

    fn w(p: &PrefixRecPresentation, s: &str) -> Word {
        p.directions().parse_word(s).unwrap()
    }

    fn words(p: &PrefixRecPresentation, fa: &FiniteAutomaton, n: usize) -> Vec<String> {
        fa.enumerate(n).unwrap().iter().map(|x| p.directions().display_word(x)).collect()
    }

    #[test]
    fn post_star_examples() {
        let p = ladder("A~B~A");
        let a = p.walk_targets(0, &[]).unwrap();
        assert_eq!(words(&p, &a, 4), ["A"]);
        let c = p.walk_targets(2, &w(&p, "BBA")).unwrap();
        assert_eq!(words(&p, &c, 6), ["BA"]);
        let p2 = ladder("A~(B~)(B~)*A");
        let c = p2.walk_targets(2, &w(&p2, "BBBBBA")).unwrap();
        assert_eq!(words(&p2, &c, 8), ["A", "BA", "BBA", "BBBA", "BBBBA"]);
        assert_eq!(p.post_star(2, &w(&p, "BBA")).unwrap().len(), p.phi(2).unwrap().num_states());
    }

    #[test]
    fn ladder_arcs() {
        let p = ladder("A~B~A");
        assert!(p.arc_exists(&w(&p, "BB"), 1, &w(&p, "BBB")).unwrap());
        assert!(p.arc_exists(&w(&p, "BBA"), 2, &w(&p, "BA")).unwrap());
        assert!(!p.arc_exists(&w(&p, "A"), 1, &w(&p, "AB")).unwrap());
        assert!(p.successors(&[], 2, 4).unwrap().words.is_empty());
        assert_eq!(p.predecessors(&w(&p, "BA"), 2, 3).unwrap().words, vec![w(&p, "BBA")]);
    }

    #[test]
    fn ladder_view() {
        let p = ladder("A~B~A");
        let g = p.bounded_view(3).unwrap();
        let mut expected = Graph::new();
        for (s, l, t) in [
            ("ε", "b", "B"),
            ("B", "b", "BB"),
            ("BB", "b", "BBB"),
            ("ε", "a", "A"),
            ("B", "a", "BA"),
            ("BB", "a", "BBA"),
            ("BBA", "c", "BA"),
            ("BA", "c", "A"),
        ] {
            expected.add_arc(LabelledArc::new(s, l, t));
        }
        assert_eq!(g, expected);
        assert_eq!(p.bounded_view(0).unwrap().num_vertices(), 1);
    }

    #[test]
    fn push_pop_cancels_inside_walk() {
        // B B~ A from ε reaches A
        let p = ladder("BB~A");
        assert!(p.arc_exists(&[], 2, &w(&p, "A")).unwrap());
        assert!(!p.arc_exists(&w(&p, "A"), 2, &[]).unwrap());
    }
}
