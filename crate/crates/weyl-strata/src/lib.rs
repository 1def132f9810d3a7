//! Weyl group combinatorics for twisted parabolic double cosets, the
//! stable-piece indexing of wonderful compactifications, and Steinberg
//! multiplicity tables, with exhaustive self-verification at small rank.

pub mod admissible;
pub mod aut;
pub mod cartan;
pub mod compact;
pub mod error;
pub mod export;
pub mod parabolic;
pub mod steinberg;
pub mod subset;
pub mod verify;
pub mod weyl;

pub use aut::DiagramAut;
pub use cartan::{CartanMatrix, TypeName, DEFAULT_RANK_CAP};
pub use error::{Error, Result};
pub use subset::NodeSet;
pub use weyl::{BruhatMatrix, Elt, WeylGroup};
