//! Gap distribution of a dyadic window and the single-window statistics built
//! on it: atoms, menus, collision probability, entropies and Monte Carlo
//! tensorization.
//!
//! Everything that is a ratio of counts is returned as an exact rational;
//! floating point appears only in the entropies and in sampling estimates.

mod distribution;
mod measures;
mod monte_carlo;

pub use distribution::{cumulative_offsets, CountTable, GapDistribution, GapVectorDistribution};
pub use measures::{
    atom_max, collision_probability, exceptional_budget, exceptional_fraction, logical_entropy,
    menu_mass, renyi2_entropy_bits, shannon_entropy_bits, top_k_mass, top_k_menu, WindowSummary,
};
pub use monte_carlo::{mc_menu_repeat, mc_tensor_collision, McEstimate, MIN_MC_SAMPLES};
