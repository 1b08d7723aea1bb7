//! Size of the giant component in configuration-model random graphs.
//!
//! * [`degree`]: finite-support degree distributions, generating functions
//!   and analytic tails.
//! * [`solver`]: extinction probabilities and the giant fraction `1 - g(z)`.
//! * [`bounds`]: extremal completions of a fixed low-degree prefix and the
//!   bounds they give.
//! * [`search`], [`family`], [`report`]: grid search for the worst-case gap,
//!   mean-preserving families and table/figure emitters.
//! * [`sim`]: Monte Carlo configuration-model simulation.

pub mod bounds;
pub mod degree;
pub mod error;
pub mod family;
pub mod report;
pub mod search;
pub mod sim;
pub mod solver;
pub mod unionfind;

pub use bounds::{
    bounds_report, check_conditions, construct_g, construct_g_m, construct_h, kappa,
    lower_bound_prop1, lower_bound_thm_a, mixture_decompose, upper_bound_thm_b, BoundValue,
    BoundsReport, MixtureDecomposition, Prefix,
};
pub use degree::{DegreePmf, TailFragment, TailKind, TailSpec};
pub use error::{Error, Result};
pub use family::{fixed_tail_family, three_point_family, FamilyPoint, LowDegreeFamily};
pub use search::{enumerate_prefixes, max_gap_search, GridConfig, GridSearchResult, MaxGapResult};
pub use sim::{monte_carlo, SimResult};
pub use solver::{
    extinction_probability, fixed_point_with_mean, giant_component, giant_fraction,
    FixedPointResult, GiantComponent,
};
