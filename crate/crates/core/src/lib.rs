//! Automatic supermartingales over automatic capital groups.
//!
//! The crate is layered bottom-up:
//! - [`automata`]: synchronous multi-track automata with end padding;
//! - [`fo`]: first-order formulas compiled to automata;
//! - [`groups`]: FA-presented abelian groups used as capital spaces;
//! - [`acg`]: integer valuations, quotients, order and limsup;
//! - [`asm`]: automatic supermartingales, finite-state gamblers and success;
//! - [`sequences`]: infinite-sequence generators and disjunctivity probes;
//! - [`bundle`]: on-disk directories for groups, ACGs and ASMs.

pub mod automata;
pub mod error;
pub mod fo;
pub mod groups;
pub mod acg;
pub mod bundle;
pub mod cli;
pub mod asm;
pub mod sequences;

pub use error::{Error, Result};
