//! Finite, computable versions of the sets behind the metrical results.
//!
//! For `a < θ1 < θ2 < √a` (or the mirror range above `√a`):
//!
//! ```text
//!   E_n = {θ : ‖θn‖ ≤ ψ(n)},                 ψ(n) = 1/n
//!   F_n = {θ : {γ n^{φ_a(θ)}} ∈ I}
//!   G_n = E_n ∩ F_n
//!   H_n = {θ ∈ (θ3, 1) : ‖θn‖ ≤ c / n^{φ_a(θ3) − 1}}
//! ```
//!
//! Every set is stored as an [`IntervalSet`] and measured as total length.

mod bc;
mod dichotomy;
mod hsum;
mod interval_set;
mod sets;
mod triples;

pub use bc::{bc_statistics, BcReport};
pub use dichotomy::{dichotomy_scan, DichotomyReport, DichotomyRow, SideSummary};
pub use hsum::{h_measure, set_h_sum, HSumReport, HSumRow};
pub use interval_set::{Component, IntervalSet, IntervalSetSummary};
pub use sets::{
    claim_check, claim_threshold, psi, set_e, set_f, set_f_on, set_g, window_nm, ClaimCheck,
    ClaimThreshold, IndexSets, MetricalParams, ThetaRange, ENDPOINT_BITS,
};
pub use triples::{
    bound_check_triples, count_triples, triple_primes, TripleBoundCheck, TripleOutcome, TripleRow,
};
