//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library.
///
/// `Consistency` is special: it is raised when a computation detects that a
/// mathematical identity the code cross-checks does not hold for the given
/// input. It always carries a witness string naming the offending input, so
/// a caller can distinguish "the code was misused" (all other variants) from
/// "the identity is false here".
#[derive(Debug, Error)]
pub enum Error {
    /// The Cartan matrix is not a valid finite-type generalized Cartan
    /// matrix (shape defects are reported through this variant too, since a
    /// malformed matrix is in particular not finite type).
    #[error("not a finite-type Cartan matrix: {0}")]
    NotFiniteType(String),

    /// The node count exceeds the configured rank cap.
    #[error("rank {rank} exceeds the configured cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },

    /// The group would have more elements than the build is willing to hold.
    #[error("group order exceeds the build limit of {limit} elements")]
    GroupTooLarge { limit: usize },

    /// Elements from different groups were mixed in one operation.
    #[error("elements belong to different groups")]
    GroupMismatch,

    /// A diagram automorphism was used with a group it was not built for,
    /// or the supplied node permutation does not preserve the Cartan matrix.
    #[error("diagram automorphism mismatch: {0}")]
    AutMismatch(String),

    /// A triple (J1, J2, map) is not admissible: the map is not a
    /// Cartan-preserving bijection J1 -> J2.
    #[error("not an admissible triple: {0}")]
    NotAdmissible(String),

    /// An argument required to be a minimal coset representative is not one.
    #[error("representative is not minimal: {0}")]
    RepNotMinimal(String),

    /// A coset order query was made against a non-distinguished coset.
    #[error("double coset is not distinguished")]
    NotDistinguished,

    /// A twisting automorphism was applied outside its domain.
    #[error("twist domain mismatch: {0}")]
    DomainMismatch(String),

    /// A piece index violates its normalization invariants.
    #[error("invalid piece index: {0}")]
    InvalidIndex(String),

    /// Two piece indices from incompatible families (different K or
    /// different diagram automorphism) were compared.
    #[error("piece indices belong to different families: {0}")]
    IndexMismatch(String),

    /// The saturation scan admits no single normalized piece.
    #[error("no normalization: {0}")]
    NoNormalization(String),

    /// A subset required to be stable under the diagram automorphism is not.
    #[error("subset is not stable under the diagram automorphism: {0}")]
    KNotDeltaStable(String),

    /// An operation precondition does not hold.
    #[error("precondition failure: {0}")]
    PreconditionFailure(String),

    /// A claimed bijection failed; carries the counterexample.
    #[error("bijection failure: {0}")]
    BijectionFailure(String),

    /// A cross-checked mathematical identity is false for this input.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A relation handed to the DOT exporter contains a cycle.
    #[error("not a partial order: {0}")]
    NotAPoset(String),

    /// Malformed textual input (words, selectors, matrices).
    #[error("parse error: {0}")]
    Parse(String),

    /// An enumeration would be too large to materialize.
    #[error("computation too large: {0}")]
    TooLarge(String),

    /// An I/O or serialization failure while exporting.
    #[error("export failure: {0}")]
    Export(String),
}

impl Error {
    /// True when the error witnesses a falsified mathematical identity
    /// rather than a misuse of the library.
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_) | Error::BijectionFailure(_))
    }
}
