//! `infgraph`: queries, views and conversions on presentation files.
//!
//! Exit status: 0 when a query is answered, 1 when a test verb (`arc`,
//! `trace`, `iso`, `pcp`) answers negatively, 2 on invalid input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infgraph::chr::{from_rational, pcp_encode, pcp_step_bound, to_rational, PcpInstance};
use infgraph::format::{
    automaton_from_json, chr_to_json, graph_from_json, graph_to_json, hr_to_json, rational_to_json, read_json,
    read_presentation, substitution_from_json, to_pretty, Presentation,
};
use infgraph::graph::{isomorphism, Graph, Hyperarc};
use infgraph::hr::HRGrammar;
use infgraph::rational::{simple_paths_substitution, RationalGraphPresentation, TraceQuery};
use infgraph::{Enumeration, Error, FiniteAutomaton, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "infgraph", version, about = "Finite presentations of infinite graphs")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation file and report its kind.
    Validate { file: PathBuf },
    /// Test for an arc `SOURCE -LABEL-> TARGET` (rational or prefrec).
    Arc { file: PathBuf, source: String, label: String, target: String },
    /// List the LABEL-successors of a vertex.
    Successors {
        file: PathBuf,
        vertex: String,
        label: String,
        /// Longest successor word listed.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// List the LABEL-predecessors of a vertex.
    Predecessors {
        file: PathBuf,
        vertex: String,
        label: String,
        /// Longest predecessor word listed.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// The subgraph induced by vertices of length at most --max-len.
    View {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Is the label word a trace from --initial to --final? (rational)
    Trace {
        file: PathBuf,
        /// Regular set of initial vertices; `()` is {ε}.
        #[arg(long)]
        initial: String,
        /// Regular set of final vertices.
        #[arg(long = "final")]
        target: String,
        #[arg(long)]
        word: String,
    },
    /// All traces from --initial to --final up to a length (rational).
    Sample {
        file: PathBuf,
        #[arg(long)]
        initial: String,
        #[arg(long = "final")]
        target: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Compose two rational graphs: label `a.b` is an a-arc then a b-arc.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Inverse finite substitution of a rational graph.
    Invsub {
        file: PathBuf,
        /// JSON map from new labels to words over labels and barred labels.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Simple transducer paths from an initial state to a LABEL-final state.
    SimplePaths { file: PathBuf, label: String },
    /// Terminal graph of an HR grammar after --level parallel steps.
    Generate {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Add --colour on vertices reachable from --source vertices (HR).
    ColourAccess {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        colour: String,
        /// Follow arcs in both directions.
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Restrict an HR grammar to the vertices carrying --colour.
    ColourRestrict {
        file: PathBuf,
        #[arg(long)]
        colour: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bounded generation of a contextual grammar.
    ChrGenerate {
        file: PathBuf,
        #[arg(long)]
        steps: usize,
        /// How deep a regular axiom may be expanded.
        #[arg(long, default_value_t = 8)]
        axiom_depth: usize,
        /// Name vertices by axiom address, keeping addresses up to this length.
        #[arg(long)]
        decode: Option<usize>,
        #[arg(long)]
        dot: bool,
    },
    /// Convert a rational graph to a CHR grammar.
    FromRational {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convert a tree-separated CHR grammar to a rational graph.
    ToRational {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the contextual encoding of a PCP instance.
    Pcp {
        /// Pairs as `U:V,U:V,...` over {a, b}.
        #[arg(long)]
        pairs: String,
        /// Steps to run; default allows solutions of up to 3 indices.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Unfold a graph into the tree of its paths from --root.
    Unfold {
        /// A graph file, or a rational/prefrec presentation viewed to --max-len.
        file: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether two graph files are isomorphic.
    Iso { first: PathBuf, second: PathBuf },
}

enum Verdict {
    Yes,
    No,
}

struct Out {
    json: bool,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn value(&mut self, v: &Value) {
        self.line(to_pretty(v));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { json: cli.json, text: String::new() };
    let result = run(cli.command, &mut out);
    print!("{}", out.text);
    match result {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn rational(p: Presentation, what: &str) -> Result<RationalGraphPresentation> {
    match p {
        Presentation::Rational(r) => Ok(r),
        other => Err(Error::Unsupported(format!("{what} needs a rational presentation, got {}", other.kind()))),
    }
}

fn hr(p: Presentation, what: &str) -> Result<HRGrammar> {
    match p {
        Presentation::Hr(g) => Ok(g),
        other => Err(Error::Unsupported(format!("{what} needs an hr grammar, got {}", other.kind()))),
    }
}

fn emit_file(out: &mut Out, v: &Value, output: Option<&Path>) -> Result<Verdict> {
    match output {
        Some(path) => {
            std::fs::write(path, to_pretty(v) + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            if out.json {
                out.value(&json!({ "written": path.display().to_string() }));
            } else {
                out.line(format!("wrote {}", path.display()));
            }
        }
        None => out.value(v),
    }
    Ok(Verdict::Yes)
}

fn emit_graph(out: &mut Out, g: &Graph, dot: bool) {
    if dot {
        out.text.push_str(&g.to_dot());
    } else if out.json {
        out.value(&graph_to_json(g));
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "{} vertices, {} arcs", g.num_vertices(), g.num_arcs());
        for a in g.arcs() {
            let _ = writeln!(s, "{} -{}-> {}", a.source, a.label, a.target);
        }
        for (c, v) in g.colours() {
            let _ = writeln!(s, "{c}({v})");
        }
        out.text.push_str(&s);
    }
}

fn emit_words(out: &mut Out, words: Vec<String>, truncated: bool) {
    if truncated {
        eprintln!("warning: enumeration cap reached; list truncated");
    }
    if out.json {
        out.value(&json!({ "words": words, "truncated": truncated }));
    } else {
        for w in words {
            out.line(w);
        }
    }
}

fn verdict(out: &mut Out, holds: bool, yes: &str, no: &str) -> Verdict {
    if out.json {
        out.value(&json!({ "verdict": holds }));
    } else {
        out.line(if holds { yes } else { no });
    }
    if holds {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn neighbours(file: &Path, vertex: &str, label: &str, max_len: usize, forward: bool) -> Result<(Vec<String>, bool)> {
    let show = |e: Enumeration, f: &dyn Fn(&[usize]) -> String| (e.words.iter().map(|w| f(w)).collect(), e.truncated);
    match read_presentation(file)? {
        Presentation::Rational(p) => {
            let x = p.vertex_alphabet().clone();
            let (u, a) = (x.parse_word(vertex)?, p.label_alphabet().require(label)?);
            let e = if forward { p.successors(&u, a, max_len)? } else { p.predecessors(&u, a, max_len)? };
            Ok(show(e, &|w| x.display_word(w)))
        }
        Presentation::PrefixRec(p) => {
            let d = p.directions().clone();
            let (u, a) = (d.parse_word(vertex)?, p.label_alphabet().require(label)?);
            let e = if forward { p.successors(&u, a, max_len)? } else { p.predecessors(&u, a, max_len)? };
            Ok(show(e, &|w| d.display_word(w)))
        }
        other => Err(Error::Unsupported(format!("neighbour queries need a rational or prefrec presentation, got {}", other.kind()))),
    }
}

fn trace_query(p: &RationalGraphPresentation, initial: &str, target: &str) -> Result<(FiniteAutomaton, FiniteAutomaton)> {
    let x = p.vertex_alphabet();
    Ok((automaton_from_json(&json!(initial), x)?, automaton_from_json(&json!(target), x)?))
}

fn graph_file(file: &Path, max_len: usize) -> Result<Graph> {
    let v = read_json(file)?;
    if v.get("type").is_none_or(|t| t == "graph") {
        return graph_from_json(&v);
    }
    match read_presentation(file)? {
        Presentation::Rational(p) => p.bounded_view(max_len),
        Presentation::PrefixRec(p) => p.bounded_view(max_len),
        other => Err(Error::Unsupported(format!("cannot take a view of a {} file here", other.kind()))),
    }
}

fn run(command: Command, out: &mut Out) -> Result<Verdict> {
    match command {
        Command::Validate { file } => {
            let p = read_presentation(&file)?;
            if out.json {
                out.value(&json!({ "valid": true, "type": p.kind() }));
            } else {
                out.line(format!("valid {} presentation", p.kind()));
            }
            Ok(Verdict::Yes)
        }
        Command::Arc { file, source, label, target } => {
            let holds = match read_presentation(&file)? {
                Presentation::Rational(p) => {
                    let x = p.vertex_alphabet().clone();
                    p.arc_exists(&x.parse_word(&source)?, p.label_alphabet().require(&label)?, &x.parse_word(&target)?)?
                }
                Presentation::PrefixRec(p) => {
                    let d = p.directions().clone();
                    p.arc_exists(&d.parse_word(&source)?, p.label_alphabet().require(&label)?, &d.parse_word(&target)?)?
                }
                other => {
                    return Err(Error::Unsupported(format!("arc needs a rational or prefrec presentation, got {}", other.kind())))
                }
            };
            Ok(verdict(out, holds, "arc", "no arc"))
        }
        Command::Successors { file, vertex, label, max_len } => {
            let (words, truncated) = neighbours(&file, &vertex, &label, max_len, true)?;
            emit_words(out, words, truncated);
            Ok(Verdict::Yes)
        }
        Command::Predecessors { file, vertex, label, max_len } => {
            let (words, truncated) = neighbours(&file, &vertex, &label, max_len, false)?;
            emit_words(out, words, truncated);
            Ok(Verdict::Yes)
        }
        Command::View { file, max_len, dot } => {
            let g = match read_presentation(&file)? {
                Presentation::Rational(p) => p.bounded_view(max_len)?,
                Presentation::PrefixRec(p) => p.bounded_view(max_len)?,
                other => {
                    return Err(Error::Unsupported(format!(
                        "view needs a rational or prefrec presentation, got {} (use generate or chr-generate)",
                        other.kind()
                    )))
                }
            };
            emit_graph(out, &g, dot);
            Ok(Verdict::Yes)
        }
        Command::Trace { file, initial, target, word } => {
            let p = rational(read_presentation(&file)?, "trace")?;
            let (initial, target) = trace_query(&p, &initial, &target)?;
            let word = p.label_alphabet().parse_word(&word)?;
            let holds = p.trace_member(&TraceQuery { initial, target, word })?;
            Ok(verdict(out, holds, "accepted", "rejected"))
        }
        Command::Sample { file, initial, target, max_len } => {
            let p = rational(read_presentation(&file)?, "sample")?;
            let (initial, target) = trace_query(&p, &initial, &target)?;
            let sigma = p.label_alphabet().clone();
            let words = p.trace_language_sample(&initial, &target, max_len)?;
            emit_words(out, words.iter().map(|w| sigma.display_word(w)).collect(), false);
            Ok(Verdict::Yes)
        }
        Command::Compose { first, second, output } => {
            let p = rational(read_presentation(&first)?, "compose")?;
            let q = rational(read_presentation(&second)?, "compose")?;
            emit_file(out, &rational_to_json(&p.compose_graphs(&q)?), output.as_deref())
        }
        Command::Invsub { file, map, output } => {
            let p = rational(read_presentation(&file)?, "invsub")?;
            let phi = substitution_from_json(&read_json(&map)?)?;
            emit_file(out, &rational_to_json(&p.inverse_finite_substitution(&phi)?), output.as_deref())
        }
        Command::SimplePaths { file, label } => {
            let p = rational(read_presentation(&file)?, "simple-paths")?;
            let t = p.transducer();
            let paths = simple_paths_substitution(t, t.label_alphabet().require(&label)?)?;
            if out.json {
                out.value(&json!({ "paths": paths }));
            } else {
                let x = t.vertex_alphabet();
                for path in paths {
                    let steps: Vec<String> = path
                        .iter()
                        .map(|&i| {
                            let e = &t.edges()[i];
                            format!("{} -{}/{}-> {}", e.source, x.display_word(&e.input), x.display_word(&e.output), e.target)
                        })
                        .collect();
                    let ids: Vec<String> = path.iter().map(usize::to_string).collect();
                    out.line(format!("[{}] {}", ids.join(" "), steps.join(", ")));
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Generate { file, level, dot } => {
            let g = hr(read_presentation(&file)?, "generate")?;
            emit_graph(out, &g.generate(level)?, dot);
            Ok(Verdict::Yes)
        }
        Command::ColourAccess { file, source, colour, symmetric, output } => {
            let g = hr(read_presentation(&file)?, "colour-access")?;
            emit_file(out, &hr_to_json(&g.accessible_colouring(&source, &colour, symmetric)?), output.as_deref())
        }
        Command::ColourRestrict { file, colour, output } => {
            let g = hr(read_presentation(&file)?, "colour-restrict")?;
            emit_file(out, &hr_to_json(&g.colour_restriction(&colour)?), output.as_deref())
        }
        Command::ChrGenerate { file, steps, axiom_depth, decode, dot } => {
            let g = match read_presentation(&file)? {
                Presentation::Chr(g) => g,
                other => return Err(Error::Unsupported(format!("chr-generate needs a chr grammar, got {}", other.kind()))),
            };
            let view = g.generate(steps, axiom_depth)?;
            for d in &view.diagnostics {
                eprintln!("warning: {d}");
            }
            let graph = match decode {
                Some(n) => view.decoded(n)?,
                None => view.graph.clone(),
            };
            emit_graph(out, &graph, dot);
            Ok(Verdict::Yes)
        }
        Command::FromRational { file, output } => {
            let p = rational(read_presentation(&file)?, "from-rational")?;
            let p = if p.transducer().is_normalized() {
                p
            } else {
                RationalGraphPresentation::new(p.transducer().normalize_edges()?, p.restriction().cloned())?
            };
            emit_file(out, &chr_to_json(&from_rational(&p)?), output.as_deref())
        }
        Command::ToRational { file, output } => {
            let g = match read_presentation(&file)? {
                Presentation::Chr(g) => g,
                other => return Err(Error::Unsupported(format!("to-rational needs a chr grammar, got {}", other.kind()))),
            };
            emit_file(out, &rational_to_json(&to_rational(&g)?), output.as_deref())
        }
        Command::Pcp { pairs, steps } => {
            let inst = PcpInstance::parse(&pairs)?;
            let steps = steps.unwrap_or_else(|| pcp_step_bound(&inst, 3));
            let g = pcp_encode(&inst)?;
            let hash = Hyperarc::new("#", ["0", "1"]);
            let mut state = g.initial_chr_state()?;
            let mut found = None;
            for n in 1..=steps {
                state = g.parallel_step(&state, 0)?;
                if state.current.contains(&hash) {
                    found = Some(n);
                    break;
                }
            }
            if out.json {
                out.value(&json!({ "verdict": found.is_some(), "step": found, "steps": steps }));
            } else {
                match found {
                    Some(n) => out.line(format!("#(0,1) after {n} steps: the instance has a solution")),
                    None => out.line(format!("no #(0,1) within {steps} steps")),
                }
            }
            Ok(if found.is_some() { Verdict::Yes } else { Verdict::No })
        }
        Command::Unfold { file, root, depth, max_len, dot } => {
            let g = graph_file(&file, max_len)?;
            emit_graph(out, &g.unfold(&root, depth)?, dot);
            Ok(Verdict::Yes)
        }
        Command::Iso { first, second } => {
            let g1 = graph_from_json(&read_json(&first)?)?;
            let g2 = graph_from_json(&read_json(&second)?)?;
            let iso = isomorphism(&g1, &g2);
            if out.json {
                out.value(&json!({ "verdict": iso.is_some(), "mapping": iso }));
                return Ok(if iso.is_some() { Verdict::Yes } else { Verdict::No });
            }
            match iso {
                Some(m) => {
                    out.line("isomorphic");
                    for (a, b) in m {
                        out.line(format!("{a} -> {b}"));
                    }
                    Ok(Verdict::Yes)
                }
                None => {
                    out.line("not isomorphic");
                    Ok(Verdict::No)
                }
            }
        }
    }
}
