//! pcf2asp: translate PCF expressions into answer set programs.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! * [`pcf`] — syntax of PCF: parsing, pretty-printing, free variables.
//! * [`eval`] — a reference call-by-value interpreter over closures.
//! * [`transpile`] — the translation into ASP rules over the three output
//!   predicates `inter`, `domain` and `result`, where `domain` plays the
//!   role of a magic-set style demand predicate.
//! * [`ground`] — a bottom-up, semi-naive grounder computing the unique
//!   answer set of the positive programs the translation produces.
//!
//! The [`search`] module extends the pipeline: free PCF variables become
//! choice-rule-defined constants, and an enumerative solver lists the answer
//! sets, optionally constrained to make the program evaluate to zero.

pub mod asp;
pub mod eval;
pub mod ground;
pub mod pcf;
pub mod search;
pub mod span;
pub mod transpile;
