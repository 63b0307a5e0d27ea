//! Context matching: extending an occurrence of a non-terminal to a
//! morphism from the rule's context into the current hypergraph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ContextualRule;
use crate::error::{Error, Result};
use crate::graph::{Hyperarc, Hypergraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleMatch {
    pub occurrence: Hyperarc,
    /// Images of the formal and context vertices; `None` when the
    /// occurrence is blocked.
    pub morphism: Option<BTreeMap<String, String>>,
}

/// Hyperarcs indexed by (label, position, vertex) and by label.
#[derive(Default)]
pub(crate) struct HyperIndex {
    at: HashMap<(String, usize, String), Vec<Hyperarc>>,
    by_label: HashMap<String, Vec<Hyperarc>>,
}

impl HyperIndex {
    pub(crate) fn new(h: &Hypergraph) -> Self {
        let mut index = HyperIndex::default();
        for e in h.hyperarcs() {
            index.insert(e);
        }
        index
    }

    pub(crate) fn insert(&mut self, e: &Hyperarc) {
        for (i, v) in e.vertices.iter().enumerate() {
            self.at.entry((e.label.clone(), i, v.clone())).or_default().push(e.clone());
        }
        self.by_label.entry(e.label.clone()).or_default().push(e.clone());
    }

    fn lookup(&self, label: &str, pos: usize, v: &str) -> &[Hyperarc] {
        self.at.get(&(label.to_string(), pos, v.to_string())).map(Vec::as_slice).unwrap_or(&[])
    }

    fn with_label(&self, label: &str) -> &[Hyperarc] {
        self.by_label.get(label).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Context arcs ordered so that each one touches a vertex bound earlier,
/// starting from the formal vertices.
fn context_order(rule: &ContextualRule) -> Vec<&Hyperarc> {
    let mut bound: BTreeSet<&str> = rule.formal.iter().map(String::as_str).collect();
    let mut rest: Vec<&Hyperarc> = rule.context.hyperarcs().iter().collect();
    let mut order = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let i = rest.iter().position(|e| e.vertices.iter().any(|v| bound.contains(v.as_str()))).unwrap_or(0);
        let e = rest.remove(i);
        bound.extend(e.vertices.iter().map(String::as_str));
        order.push(e);
    }
    order
}

struct Search<'a> {
    index: &'a HyperIndex,
    order: Vec<&'a Hyperarc>,
    touched: &'a mut BTreeSet<String>,
    found: Vec<BTreeMap<String, String>>,
}

impl Search<'_> {
    fn run(&mut self, k: usize, binding: &mut BTreeMap<String, String>) {
        if self.found.len() >= 2 {
            return;
        }
        if k == self.order.len() {
            self.found.push(binding.clone());
            return;
        }
        let e = self.order[k];
        let anchor = e.vertices.iter().position(|v| binding.contains_key(v));
        let candidates = match anchor {
            Some(p) => {
                let image = &binding[&e.vertices[p]];
                self.touched.insert(image.clone());
                self.index.lookup(&e.label, p, image)
            }
            None => self.index.with_label(&e.label),
        };
        for c in candidates {
            if c.arity() != e.arity() {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for (v, w) in e.vertices.iter().zip(&c.vertices) {
                match binding.get(v) {
                    Some(b) if b != w => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        binding.insert(v.clone(), w.clone());
                        added.push(v.clone());
                    }
                }
            }
            if ok {
                self.run(k + 1, binding);
            }
            for v in added {
                binding.remove(&v);
            }
            if self.found.len() >= 2 {
                return;
            }
        }
    }
}

/// The unique morphism extending `occurrence` over the context of `rule`.
/// Every vertex whose neighbourhood was inspected is added to `touched`.
/// Two distinct morphisms are an error: contexts must match
/// deterministically.
pub(crate) fn match_occurrence(
    index: &HyperIndex,
    rule: &ContextualRule,
    occurrence: &Hyperarc,
    touched: &mut BTreeSet<String>,
) -> Result<Option<BTreeMap<String, String>>> {
    if occurrence.label != rule.nonterminal || occurrence.arity() != rule.formal.len() {
        return Ok(None);
    }
    let mut binding = BTreeMap::new();
    for (x, v) in rule.formal.iter().zip(&occurrence.vertices) {
        binding.insert(x.clone(), v.clone());
    }
    let mut search = Search { index, order: context_order(rule), touched, found: Vec::new() };
    search.run(0, &mut binding);
    let mut found = search.found;
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        _ => Err(Error::Validation(format!(
            "context of the rule for `{}` matches twice around {}({})",
            rule.nonterminal,
            occurrence.label,
            occurrence.vertices.join(", ")
        ))),
    }
}

/// One entry per occurrence of the rule's non-terminal in `g`, in sorted
/// order; blocked occurrences carry no morphism.
pub fn find_matches(g: &Hypergraph, rule: &ContextualRule) -> Result<Vec<RuleMatch>> {
    let index = HyperIndex::new(g);
    let mut out = Vec::new();
    for e in g.hyperarcs().iter().filter(|e| e.label == rule.nonterminal) {
        let morphism = match_occurrence(&index, rule, e, &mut BTreeSet::new())?;
        out.push(RuleMatch { occurrence: e.clone(), morphism });
    }
    Ok(out)
}
