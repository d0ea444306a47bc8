//! Certified real arithmetic.
//!
//! Values are closed intervals with rational endpoints. Floors, ceilings and
//! comparisons either come back decided or as [`Truth::Unknown`], in which
//! case the caller retries at a higher precision from its [`PrecisionPolicy`].

mod certified;
mod exponent;
mod ops;
mod parse;
mod policy;
pub mod real;

pub use certified::{CertifiedValue, Truth};
pub(crate) use certified::{ceil_rational, floor_rational};
pub use exponent::{Exponent, NamedConstant};
pub(crate) use exponent::integer_to_u64;
pub use ops::{
    check_phi_domain, decide_in_half_open, dist_nearest_int, floor_pow, floor_pow_with, frac_of,
    frac_pow, frac_pow_with, phi, phi_at, phi_interval, pow_at, pow_certified, rational_root_alpha_at,
    root_alpha_at, root_ceil, root_ceil_with,
};
pub use parse::{looks_decimal, parse_rational, parse_rational_list, serde_rational};
pub use policy::PrecisionPolicy;
