//! Degree laws, degree sequences and the analytic constants derived from them.

mod constants;
mod descriptor;
mod law;
mod sequence;
mod thinning;

pub use constants::{
    gamma_of, solve_lambda, theory_constants, PhaseBounds, TheoryConstants, LAMBDA_TOL,
    MAX_FIXED_POINT_ITERS,
};
pub use descriptor::{parse_offspring, Cutoff, LawDescriptor};
pub use law::{DegreeLaw, Family, SizeBiasedLaw, POISSON_TAIL_TOL, POWERLAW_EPS, RENORMALIZE_TOL};
pub use sequence::{
    total_variation, truncated_size_biased, DegreeSequence, TruncationSide, MAX_SEQUENCE_ATTEMPTS,
};
pub use thinning::{
    binomial_pmf, core_theory, h, h1, thinned_law, CoreTheory, CORE_BISECT_TOL, CORE_ROOT_TOL,
    CORE_SCAN_STEP,
};
