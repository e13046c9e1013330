//! Finite loops and quasigroups as Cayley tables: exhaustive identity
//! checking, inner mappings and multiplication groups, inverse cycles,
//! identity-based cipher prototypes, and a backtracking enumerator of
//! small loops.

pub mod crypto;
pub mod cycles;
pub mod error;
pub mod exec;
pub mod families;
pub mod mappings;
pub mod perm;
pub mod properties;
pub mod search;
pub mod table;
pub mod verifier;

pub use error::{LoopError, Result};
pub use exec::Exec;
pub use perm::{PermGroup, Permutation};
pub use properties::{check_identity, CheckResult, IdentityId};
pub use table::{as_loop, make_table, LoopTable, Magma, QuasigroupTable, Side};
