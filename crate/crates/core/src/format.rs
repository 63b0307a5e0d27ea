//! JSON reading and writing for automata, transducers, graphs and the four
//! kinds of presentation files.
//!
//! Words are token strings (`""` is ε). Regular sets may be given either as
//! automaton objects or as regular expressions. Writers emit sorted keys, so
//! identical values serialise to identical text.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::alphabet::{Alphabet, SymbolAlphabet};
use crate::automata::FiniteAutomaton;
use crate::chr::{ChrAxiom, ContextualGrammar, ContextualRule, SystemKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, Hyperarc, Hypergraph, LabelledArc, RankedAlphabet};
use crate::hr::{HRGrammar, HrRule};
use crate::prefix_rec::PrefixRecPresentation;
use crate::rational::RationalGraphPresentation;
use crate::transducer::{LabelledTransducer, TransducerEdge};

/// The content of one presentation file.
#[derive(Clone, Debug)]
pub enum Presentation {
    Rational(RationalGraphPresentation),
    PrefixRec(PrefixRecPresentation),
    Hr(HRGrammar),
    Chr(ContextualGrammar),
}

impl Presentation {
    pub fn kind(&self) -> &'static str {
        match self {
            Presentation::Rational(_) => "rational",
            Presentation::PrefixRec(_) => "prefrec",
            Presentation::Hr(_) => "hr",
            Presentation::Chr(_) => "chr",
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}

fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => bad(format!("{what}: missing field `{key}`")),
    }
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::Format(format!("{what}: expected a string, found {v}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| Error::Format(format!("{what}: expected a natural number, found {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("{what}: expected an array, found {v}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Format(format!("{what}: expected an object, found {v}")))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    as_array(v, what)?.iter().map(|x| as_str(x, what).map(str::to_string)).collect()
}

fn states(v: &Value, what: &str) -> Result<Vec<usize>> {
    as_array(v, what)?.iter().map(|x| as_usize(x, what)).collect()
}

pub fn alphabet_from_json(v: &Value, what: &str) -> Result<Alphabet> {
    Ok(Arc::new(SymbolAlphabet::new(strings(v, what)?)?))
}

/// An automaton object, or a regular expression string, over `alphabet`.
pub fn automaton_from_json(v: &Value, alphabet: &Alphabet) -> Result<FiniteAutomaton> {
    if let Some(text) = v.as_str() {
        return FiniteAutomaton::from_regex(alphabet.clone(), text);
    }
    let what = "automaton";
    if let Some(a) = v.get("alphabet") {
        let declared = strings(a, what)?;
        if declared != alphabet.tokens() {
            return Err(Error::AlphabetMismatch(format!("automaton over {declared:?}, expected {alphabet}")));
        }
    }
    let n = as_usize(field(v, "states", what)?, what)?;
    let initial = states(field(v, "initial", what)?, what)?;
    let finals = states(field(v, "final", what)?, what)?;
    let mut trans = Vec::new();
    for t in as_array(field(v, "transitions", what)?, what)? {
        let t = as_array(t, "transition")?;
        let [p, s, q] = t.as_slice() else { return bad(format!("transition {t:?} is not [src, symbol, dst]")) };
        let s = as_str(s, "transition symbol")?;
        let label = if s.is_empty() { None } else { Some(alphabet.require(s)?) };
        trans.push((as_usize(p, "transition")?, label, as_usize(q, "transition")?));
    }
    FiniteAutomaton::new(alphabet.clone(), n, initial, finals, trans)
}

pub fn automaton_to_json(fa: &FiniteAutomaton) -> Value {
    let a = fa.alphabet();
    let trans: Vec<Value> = fa
        .transitions()
        .iter()
        .map(|&(p, l, q)| json!([p, l.map(|s| a.token(s)).unwrap_or(""), q]))
        .collect();
    json!({
        "alphabet": a.tokens(),
        "states": fa.num_states(),
        "initial": fa.initial(),
        "final": fa.finals().collect::<Vec<_>>(),
        "transitions": trans,
    })
}

pub fn transducer_from_json(v: &Value) -> Result<LabelledTransducer> {
    let what = "transducer";
    let x = alphabet_from_json(field(v, "X", what)?, "X")?;
    let sigma = alphabet_from_json(field(v, "Sigma", what)?, "Sigma")?;
    let n = as_usize(field(v, "states", what)?, what)?;
    let initial = states(field(v, "initial", what)?, what)?;
    let mut labels: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (q, ls) in as_object(field(v, "final", what)?, "final")? {
        let q: usize = q.parse().map_err(|_| Error::Format(format!("final state `{q}` is not a number")))?;
        for l in strings(ls, "final labels")? {
            labels.entry(q).or_default().insert(sigma.require(&l)?);
        }
    }
    let mut edges = Vec::new();
    for e in as_array(field(v, "edges", what)?, what)? {
        let e = as_array(e, "edge")?;
        let [p, u, w, q] = e.as_slice() else { return bad(format!("edge {e:?} is not [p, u, v, q]")) };
        edges.push(TransducerEdge::new(
            as_usize(p, "edge")?,
            x.parse_word(as_str(u, "edge input")?)?,
            x.parse_word(as_str(w, "edge output")?)?,
            as_usize(q, "edge")?,
        ));
    }
    LabelledTransducer::new(x, sigma, n, initial, labels, edges)
}

pub fn transducer_to_json(t: &LabelledTransducer) -> Value {
    let x = t.vertex_alphabet();
    let sigma = t.label_alphabet();
    let finals: Map<String, Value> = t
        .labels()
        .iter()
        .map(|(q, ls)| (q.to_string(), json!(ls.iter().map(|&l| sigma.token(l)).collect::<Vec<_>>())))
        .collect();
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .map(|e| json!([e.source, x.format_word(&e.input), x.format_word(&e.output), e.target]))
        .collect();
    json!({
        "X": x.tokens(),
        "Sigma": sigma.tokens(),
        "states": t.num_states(),
        "initial": t.initial(),
        "final": finals,
        "edges": edges,
    })
}

pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let mut g = Graph::new();
    if let Some(vs) = v.get("vertices") {
        for x in strings(vs, "vertices")? {
            g.add_vertex(x);
        }
    }
    if let Some(arcs) = v.get("arcs") {
        for a in as_array(arcs, "arcs")? {
            match strings(a, "arc")?.as_slice() {
                [s, l, t] => g.add_arc(LabelledArc::new(s.clone(), l.clone(), t.clone())),
                _ => return bad(format!("arc {a} is not [source, label, target]")),
            }
        }
    }
    if let Some(cs) = v.get("colours") {
        for c in as_array(cs, "colours")? {
            match strings(c, "colour")?.as_slice() {
                [c, x] => g.add_colour(c, x),
                _ => return bad(format!("colour {c} is not [colour, vertex]")),
            }
        }
    }
    Ok(g)
}

pub fn graph_to_json(g: &Graph) -> Value {
    json!({
        "vertices": g.vertices(),
        "arcs": g.arcs().iter().map(|a| json!([a.source, a.label, a.target])).collect::<Vec<_>>(),
        "colours": g.colours().iter().map(|(c, v)| json!([c, v])).collect::<Vec<_>>(),
    })
}

/// `{"vertices"?, "hyperarcs": [[label, v1, ...]]}`; the graph fields
/// `arcs` and `colours` are accepted too.
pub fn hypergraph_from_json(v: &Value) -> Result<Hypergraph> {
    let g = graph_from_json(v)?;
    let mut h = g.to_hypergraph();
    if let Some(arcs) = v.get("hyperarcs") {
        for e in as_array(arcs, "hyperarcs")? {
            let parts = strings(e, "hyperarc")?;
            let Some((label, vs)) = parts.split_first() else { return bad("empty hyperarc") };
            h.add_hyperarc(Hyperarc::new(label.clone(), vs.iter().cloned()))?;
        }
    }
    Ok(h)
}

pub fn hypergraph_to_json(h: &Hypergraph) -> Value {
    let mut arcs = Vec::new();
    for e in h.hyperarcs() {
        let mut row = vec![e.label.clone()];
        row.extend(e.vertices.iter().cloned());
        arcs.push(row);
    }
    json!({ "vertices": h.vertices(), "hyperarcs": arcs })
}

/// A map `{"A": 2}`, or a list of names (arity 2) or `[name, arity]` pairs.
fn ranked_from_json(v: &Value, what: &str) -> Result<RankedAlphabet> {
    let mut entries: Vec<(String, usize)> = Vec::new();
    match v {
        Value::Object(m) => {
            for (k, n) in m {
                entries.push((k.clone(), as_usize(n, what)?));
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::String(s) => entries.push((s.clone(), 2)),
                    Value::Array(p) if p.len() == 2 => entries.push((as_str(&p[0], what)?.to_string(), as_usize(&p[1], what)?)),
                    _ => return bad(format!("{what}: entry {item} is neither a name nor [name, arity]")),
                }
            }
        }
        _ => return bad(format!("{what}: expected an object or an array")),
    }
    RankedAlphabet::new(entries)
}

fn ranked_to_json(r: &RankedAlphabet) -> Value {
    Value::Object(r.iter().map(|(l, n)| (l.to_string(), json!(n))).collect())
}

pub fn hr_from_json(v: &Value) -> Result<HRGrammar> {
    let what = "hr grammar";
    let nonterminals = ranked_from_json(field(v, "nonterminals", what)?, "nonterminals")?;
    let terminals = ranked_from_json(field(v, "terminals", what)?, "terminals")?;
    let axiom = hypergraph_from_json(field(v, "axiom", what)?)?;
    let mut rules = Vec::new();
    let rule = |nt: &str, r: &Value| -> Result<HrRule> {
        Ok(HrRule {
            nonterminal: nt.to_string(),
            formal: strings(field(r, "formal", "rule")?, "formal")?,
            rhs: hypergraph_from_json(field(r, "rhs", "rule")?)?,
        })
    };
    match field(v, "rules", what)? {
        Value::Object(m) => {
            for (nt, r) in m {
                rules.push(rule(nt, r)?);
            }
        }
        Value::Array(items) => {
            for r in items {
                rules.push(rule(as_str(field(r, "nonterminal", "rule")?, "rule")?, r)?);
            }
        }
        other => return bad(format!("rules: expected an object or an array, found {other}")),
    }
    HRGrammar::new(nonterminals, terminals, axiom, rules)
}

pub fn hr_to_json(g: &HRGrammar) -> Value {
    let rules: Map<String, Value> = g
        .rules()
        .iter()
        .map(|r| (r.nonterminal.clone(), json!({ "formal": r.formal, "rhs": hypergraph_to_json(&r.rhs) })))
        .collect();
    json!({
        "type": "hr",
        "nonterminals": ranked_to_json(g.nonterminals()),
        "terminals": ranked_to_json(g.terminals()),
        "axiom": hypergraph_to_json(g.axiom()),
        "rules": rules,
    })
}

/// Parses a CHR file; `resolve` loads an axiom grammar given by file name.
pub fn chr_from_json(v: &Value, resolve: &dyn Fn(&str) -> Result<Value>) -> Result<ContextualGrammar> {
    let what = "chr grammar";
    let kind = if v.get("general").and_then(Value::as_bool).unwrap_or(false) { SystemKind::General } else { SystemKind::Chr };
    let contextual = match v.get("contextual") {
        Some(c) => ranked_from_json(c, "contextual")?,
        None => RankedAlphabet::default(),
    };
    let nonterminals = ranked_from_json(field(v, "nonterminals", what)?, "nonterminals")?;
    let terminals = ranked_from_json(field(v, "terminals", what)?, "terminals")?;
    let ax = field(v, "axiom", what)?;
    let axiom = match ax.get("hr") {
        Some(reference) => {
            let grammar = match reference {
                Value::String(path) => hr_from_json(&resolve(path)?)?,
                inline => hr_from_json(inline)?,
            };
            let parts = strings(field(ax, "nonterminal", "axiom")?, "axiom non-terminal")?;
            let Some((label, vs)) = parts.split_first() else { return bad("axiom non-terminal is empty") };
            ChrAxiom::Regular { grammar, placement: Hyperarc::new(label.clone(), vs.iter().cloned()) }
        }
        None => ChrAxiom::Finite(hypergraph_from_json(ax)?),
    };
    let mut rules = Vec::new();
    for r in as_array(field(v, "rules", what)?, "rules")? {
        let formal = field(r, "formal", "rule")?;
        let context = match r.get("context") {
            Some(c) => hypergraph_from_json(c)?,
            None => Hypergraph::new(),
        };
        rules.push(ContextualRule {
            context,
            nonterminal: as_str(field(formal, "label", "formal")?, "formal label")?.to_string(),
            formal: strings(field(formal, "vertices", "formal")?, "formal vertices")?,
            rhs: hypergraph_from_json(field(r, "rhs", "rule")?)?,
        });
    }
    ContextualGrammar::new(kind, contextual, nonterminals, terminals, rules, axiom)
}

pub fn chr_to_json(g: &ContextualGrammar) -> Value {
    let axiom = match g.axiom() {
        ChrAxiom::Finite(h) => hypergraph_to_json(h),
        ChrAxiom::Regular { grammar, placement } => {
            let mut nt = vec![placement.label.clone()];
            nt.extend(placement.vertices.iter().cloned());
            json!({ "hr": hr_to_json(grammar), "nonterminal": nt })
        }
    };
    let rules: Vec<Value> = g
        .rules()
        .iter()
        .map(|r| {
            json!({
                "context": hypergraph_to_json(&r.context),
                "formal": { "label": r.nonterminal, "vertices": r.formal },
                "rhs": hypergraph_to_json(&r.rhs),
            })
        })
        .collect();
    let mut out = json!({
        "type": "chr",
        "contextual": ranked_to_json(g.contextual()),
        "nonterminals": ranked_to_json(g.nonterminals()),
        "terminals": ranked_to_json(g.terminals()),
        "axiom": axiom,
        "rules": rules,
    });
    if g.kind() == SystemKind::General {
        out["general"] = json!(true);
    }
    out
}

pub fn rational_from_json(v: &Value) -> Result<RationalGraphPresentation> {
    let t = transducer_from_json(field(v, "transducer", "rational presentation")?)?;
    let restriction = match v.get("restriction") {
        None | Some(Value::Null) => None,
        Some(r) => Some(automaton_from_json(r, t.vertex_alphabet())?),
    };
    RationalGraphPresentation::new(t, restriction)
}

pub fn rational_to_json(p: &RationalGraphPresentation) -> Value {
    json!({
        "type": "rational",
        "transducer": transducer_to_json(p.transducer()),
        "restriction": p.restriction().map(automaton_to_json),
    })
}

/// `phi` maps each label to a regex over `D ∪ D~` (or an automaton);
/// labels are taken in the order of an optional `labels` list, otherwise
/// sorted.
pub fn prefrec_from_json(v: &Value) -> Result<PrefixRecPresentation> {
    let what = "prefrec presentation";
    let d = alphabet_from_json(field(v, "directions", what)?, "directions")?;
    let walk: Alphabet = Arc::new(d.with_bars()?);
    let phi = as_object(field(v, "phi", what)?, "phi")?;
    let labels: Vec<String> = match v.get("labels") {
        Some(l) => strings(l, "labels")?,
        None => phi.keys().cloned().collect(),
    };
    let mut images = Vec::new();
    for l in &labels {
        let image = phi.get(l).ok_or_else(|| Error::Format(format!("phi has no image for label `{l}`")))?;
        images.push(automaton_from_json(image, &walk)?);
    }
    if phi.len() != labels.len() {
        return bad("phi defines images for labels missing from `labels`");
    }
    let restriction = match v.get("restriction") {
        None | Some(Value::Null) => FiniteAutomaton::universal(d.clone()),
        Some(r) => automaton_from_json(r, &d)?,
    };
    PrefixRecPresentation::new(d, Arc::new(SymbolAlphabet::new(labels)?), images, restriction)
}

pub fn prefrec_to_json(p: &PrefixRecPresentation) -> Value {
    let labels = p.label_alphabet();
    let phi: Map<String, Value> = labels
        .symbols()
        .map(|a| (labels.token(a).to_string(), automaton_to_json(p.phi(a).expect("label in range"))))
        .collect();
    json!({
        "type": "prefrec",
        "directions": p.directions().tokens(),
        "labels": labels.tokens(),
        "phi": phi,
        "restriction": automaton_to_json(p.restriction()),
    })
}

pub fn presentation_from_json(v: &Value, resolve: &dyn Fn(&str) -> Result<Value>) -> Result<Presentation> {
    match v.get("type").and_then(Value::as_str) {
        Some("rational") => Ok(Presentation::Rational(rational_from_json(v)?)),
        Some("prefrec") => Ok(Presentation::PrefixRec(prefrec_from_json(v)?)),
        Some("hr") => Ok(Presentation::Hr(hr_from_json(v)?)),
        Some("chr") => Ok(Presentation::Chr(chr_from_json(v, resolve)?)),
        Some(t) => bad(format!("unknown presentation type `{t}`")),
        None => bad("missing field `type` (rational, prefrec, hr or chr)"),
    }
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    match p {
        Presentation::Rational(r) => rational_to_json(r),
        Presentation::PrefixRec(r) => prefrec_to_json(r),
        Presentation::Hr(g) => hr_to_json(g),
        Presentation::Chr(g) => chr_to_json(g),
    }
}

pub fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// Reads a presentation file. Axiom grammars referenced by name are looked
/// up relative to the file's directory.
pub fn read_presentation(path: &Path) -> Result<Presentation> {
    let v = read_json(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    presentation_from_json(&v, &|name| read_json(&dir.join(name)))
}

/// Parses a presentation held in memory; named references are refused.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let v = parse_json(text, "presentation")?;
    presentation_from_json(&v, &|name| bad(format!("cannot resolve `{name}` without a file location")))
}

/// An explicit substitution file `{"d": ["ab", "a~"]}`.
pub fn substitution_from_json(v: &Value) -> Result<BTreeMap<String, Vec<String>>> {
    as_object(v, "substitution")?.iter().map(|(k, ws)| Ok((k.clone(), strings(ws, "substitution words")?))).collect()
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::anbncn;

    #[test]
    fn rational_round_trip() {
        let p = RationalGraphPresentation::new(anbncn(), None).unwrap();
        let text = to_pretty(&rational_to_json(&p));
        let Presentation::Rational(q) = parse_presentation(&text).unwrap() else { panic!() };
        assert_eq!(q.bounded_view(3).unwrap(), p.bounded_view(3).unwrap());
        assert_eq!(to_pretty(&rational_to_json(&q)), text);
    }

    #[test]
    fn prefrec_from_regexes() {
        let text = r#"{"type":"prefrec","directions":["A","B"],
            "phi":{"a":"A","b":"B","c":"A~B~A"},"restriction":"A+B*+B*A"}"#;
        let Presentation::PrefixRec(p) = parse_presentation(text).unwrap() else { panic!() };
        let d = p.directions().clone();
        assert!(p.arc_exists(&d.parse_word("BBA").unwrap(), 2, &d.parse_word("BA").unwrap()).unwrap());
        let again = prefrec_from_json(&prefrec_to_json(&p)).unwrap();
        assert_eq!(again.bounded_view(3).unwrap(), p.bounded_view(3).unwrap());
    }

    #[test]
    fn hr_and_chr_round_trip() {
        let g = crate::hr::tests::triangle(&[]);
        let v = hr_to_json(&g);
        assert_eq!(hr_from_json(&v).unwrap(), g);
        let p = RationalGraphPresentation::new(anbncn(), None).unwrap();
        let c = crate::chr::from_rational(&p).unwrap();
        let back = chr_from_json(&chr_to_json(&c), &|_| bad("no refs")).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn format_errors() {
        assert!(matches!(parse_presentation("{}"), Err(Error::Format(_))));
        assert!(matches!(parse_presentation("{\"type\":\"rational\"}"), Err(Error::Format(_))));
        assert!(parse_presentation("not json").is_err());
        let bad_edge = r#"{"type":"rational","transducer":{"X":["0"],"Sigma":["a"],"states":1,
            "initial":[0],"final":{},"edges":[[0,"2","",0]]}}"#;
        assert!(matches!(parse_presentation(bad_edge), Err(Error::Parse { .. })));
    }
}
