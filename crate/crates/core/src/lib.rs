//! Ornamentation lattices of rooted plane trees and the dynamics of the
//! pop-stack operator on them.
//!
//! Trees are stored in preorder with node sets as 64-bit masks. The crate
//! provides the lattice operations, closed forms for orbit lengths and
//! image membership, exact counting, and brute-force enumeration oracles
//! that check all of them on small trees.

pub mod count;
pub mod error;
pub mod exec;
pub mod gseq;
pub mod image;
pub mod io;
pub mod lattice;
pub mod ornamentation;
pub mod rank;
pub mod tree;
pub mod verify;

pub use error::{Error, ParseErrorKind, Result};
pub use exec::Execution;
pub use gseq::GSequence;
pub use lattice::{enumerate_lattice, LatticeGraph};
pub use ornamentation::Ornamentation;
pub use tree::{NodeId, NodeSet, RootedPlaneTree};
