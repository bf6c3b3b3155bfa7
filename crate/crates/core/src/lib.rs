//! Exact automorphism-to-order ratios `f(G) = |Aut(G)| / |G|` for finite
//! abelian groups.
//!
//! The crate computes `|Aut(G)|`, `f` and `f' = |Aut(G)|/φ(|G|)` exactly,
//! cross-checks the closed form against brute force on small groups,
//! constructs explicit groups whose `f` approximates any nonnegative real
//! with a certified error, and searches bounded families of groups for exact
//! rational values of `f`.

pub mod approx;
pub mod aut;
pub mod config;
pub mod error;
pub mod group;
pub mod logspace;
pub mod oracle;
pub mod primes;
pub mod ratio;
pub mod search;
pub mod subsum;

pub use approx::{choose_two_rank, ApproxResult, Approximator, Branch, Trace};
pub use aut::{aut_order, aut_order_local, f_exact, f_log, f_prime_exact};
pub use config::{Config, OracleCaps};
pub use error::{Error, Result};
pub use group::{parse_group, AbelianGroup, IndexSet, SymbolicGroup};
pub use logspace::{Interval, LogValue};
pub use oracle::aut_order_bruteforce;
pub use primes::{estimate_sieve_limit, PrimeStream};
pub use ratio::Ratio;
pub use search::{build_f_table, enumerate_groups, find_exact, SearchBounds, Witness};
pub use subsum::{greedy_select, prime_ratio_terms, Selection, SelectionStatus, TermSource};
