//! Exact integer, rational and real-quadratic primitives shared by every
//! other module.

mod int;
mod poly;
mod quad;

pub use int::{
    is_perfect_square, is_perfect_square_big, is_prime, jacobi, legendre_table, nu, nu_with_bound,
    primes_up_to, squarefree_part, squarefree_part_with_bound, DEFAULT_TRIAL_BOUND,
};
pub(crate) use int::{jacobi_unchecked, pow_mod};
pub use poly::{
    elementary_from_power_sums, newton_from_power_sums, power_sums_from_elementary, IntPoly,
};
pub use quad::{quad_is_square, rational_sqrt, QuadElem};
