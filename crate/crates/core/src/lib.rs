//! Finite presentations of infinite graphs.
//!
//! The crate covers four presentation formalisms and the queries they
//! support:
//!
//! * [`rational`]: graphs whose arcs are accepted by a labelled rational
//!   transducer over word vertices ([`transducer`]);
//! * [`prefix_rec`]: images of the complete k-ary tree under inverse regular
//!   substitution with regular restriction, answered by saturation;
//! * [`hr`]: deterministic hyperedge-replacement grammars generated by
//!   complete parallel rewriting;
//! * [`chr`]: contextual grammars, their bounded generation and the
//!   conversions to and from rational graphs.
//!
//! Explicit finite views of all of them are [`graph::Graph`] values.

pub mod alphabet;
pub mod automata;
pub mod chr;
pub mod error;
pub mod format;
pub mod graph;
pub mod hr;
pub mod limits;
pub mod prefix_rec;
pub mod rational;
pub mod transducer;

pub use alphabet::{Alphabet, Symbol, SymbolAlphabet, Word};
pub use automata::{Enumeration, FiniteAutomaton, RegularExpression};
pub use error::{Error, Result};
