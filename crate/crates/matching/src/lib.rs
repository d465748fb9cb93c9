//! Exact computation of matching intervals, bifurcation sets, tuning windows
//! and entropies for the family `Q_gamma(x) = x + 1` (`x <= gamma`),
//! `1 + s(1 - x)` (`x > gamma`).

pub mod cli;
pub mod dynamics;
pub mod exact;
pub mod spectral;
pub mod symbolic;
pub mod windows;
