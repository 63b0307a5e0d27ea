//! Encoding of Post correspondence instances as contextual systems.
//!
//! From the axiom `root(0,1) fwd(0,1)`, `fwd` grows one path per pair
//! spelling `U_i` below the left vertex and `V_i` below the right one and
//! joins the two ends by `nxt`. Each `nxt` restarts `fwd` and launches two
//! walkers that climb both paths back letter by letter while the letters
//! agree. A walker that reaches `root` on both sides at once emits `#`, so
//! `#(0,1)` appears exactly when some index sequence is a solution.

use super::{ChrAxiom, ContextualGrammar, ContextualRule, SystemKind};
use crate::error::{invalid, Result};
use crate::graph::{Hyperarc, Hypergraph, RankedAlphabet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpInstance {
    pairs: Vec<(String, String)>,
}

impl PcpInstance {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self> {
        if pairs.is_empty() {
            return invalid("a PCP instance needs at least one pair");
        }
        for (u, v) in &pairs {
            for w in [u, v] {
                if w.is_empty() {
                    return invalid("PCP words must be non-empty");
                }
                if let Some(c) = w.chars().find(|c| !matches!(c, 'a' | 'b')) {
                    return invalid(format!("PCP words are over {{a, b}}; found `{c}`"));
                }
            }
        }
        Ok(PcpInstance { pairs })
    }

    /// Parses `ab:a,b:bb`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in text.split(',') {
            match item.trim().split_once(':') {
                Some((u, v)) => pairs.push((u.trim().to_string(), v.trim().to_string())),
                None => return invalid(format!("pair `{item}` is not of the form U:V")),
            }
        }
        Self::new(pairs)
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn max_word_len(&self) -> usize {
        self.pairs.iter().map(|(u, v)| u.len().max(v.len())).max().unwrap_or(0)
    }
}

/// Steps after which `#(0,1)` is present if the instance has a solution of
/// `m` indices: `2m` to lay out the pairs, one per letter for the walk back
/// and one for the final rule.
pub fn pcp_step_bound(inst: &PcpInstance, m: usize) -> usize {
    2 * m + m * inst.max_word_len() + 1
}

fn two(x: &str, y: &str) -> Vec<String> {
    vec![x.to_string(), y.to_string()]
}

fn rule(nonterminal: &str, context: &[(&str, &str, &str)], rhs: &[(&str, String, String)]) -> Result<ContextualRule> {
    Ok(ContextualRule {
        context: Hypergraph::from_parts([], context.iter().map(|(l, s, t)| Hyperarc::new(*l, [*s, *t])))?,
        nonterminal: nonterminal.to_string(),
        formal: two("x", "y"),
        rhs: Hypergraph::from_parts([], rhs.iter().map(|(l, s, t)| Hyperarc::new(*l, [s.clone(), t.clone()])))?,
    })
}

/// The contextual system of the instance, with its finite axiom.
pub fn pcp_encode(inst: &PcpInstance) -> Result<ContextualGrammar> {
    let mut grow: Vec<(&str, String, String)> = Vec::new();
    for (i, (u, v)) in inst.pairs.iter().enumerate() {
        let mut ends = Vec::new();
        for (word, side, tag) in [(u, "x", "u"), (v, "y", "v")] {
            let mut prev = side.to_string();
            for (k, c) in word.chars().enumerate() {
                let next = format!("{tag}{i}_{k}");
                grow.push((if c == 'a' { "a" } else { "b" }, prev, next.clone()));
                prev = next;
            }
            ends.push(prev);
        }
        grow.push(("nxt", ends[0].clone(), ends[1].clone()));
    }
    let xy = || ("x".to_string(), "y".to_string());
    let rules = vec![
        rule("fwd", &[], &grow)?,
        rule("nxt", &[], &[("chkA", xy().0, xy().1), ("chkB", xy().0, xy().1), ("fwd", xy().0, xy().1)])?,
        rule("chkA", &[("a", "x1", "x"), ("a", "y1", "y")], &[("chkA", "x1".into(), "y1".into()), ("chkB", "x1".into(), "y1".into())])?,
        rule("chkA", &[("root", "x", "y")], &[("#", xy().0, xy().1)])?,
        rule("chkB", &[("b", "x1", "x"), ("b", "y1", "y")], &[("chkA", "x1".into(), "y1".into()), ("chkB", "x1".into(), "y1".into())])?,
        rule("chkB", &[("root", "x", "y")], &[("#", xy().0, xy().1)])?,
    ];
    let axiom = Hypergraph::from_parts([], [Hyperarc::new("root", ["0", "1"]), Hyperarc::new("fwd", ["0", "1"])])?;
    ContextualGrammar::new(
        SystemKind::General,
        RankedAlphabet::new(Vec::<(String, usize)>::new())?,
        RankedAlphabet::new([("fwd", 2), ("nxt", 2), ("chkA", 2), ("chkB", 2)])?,
        RankedAlphabet::new([("a", 2), ("b", 2), ("root", 2), ("#", 2)])?,
        rules,
        ChrAxiom::Finite(axiom),
    )
}
