//! Test-only support shared by the workspace's integration suites.
//!
//! The [`naive`] module holds deliberately slow, transparently written
//! reference implementations of every score the library computes. They
//! work on plain string adjacency maps and never touch the optimized
//! crate, so agreement between the two is meaningful evidence. [`gen`]
//! produces the random inputs those comparisons run on, and [`util`]
//! contains the few helpers that legitimately need the real library.

pub mod gen;
pub mod naive;
pub mod util;
