//! Configuration and build errors of the DSO layer.

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DsoConfigError {
    #[error("the general DSO requires an unweighted graph")]
    WeightedGraph,
    #[error("need 2 <= f <= L <= n, got f = {f}, L = {l_cut}, n = {n}")]
    ParameterOrder { f: u32, l_cut: u32, n: usize },
    #[error("epsilon must be at most 12/7, got {0}")]
    EpsilonTooLarge(Ratio<u64>),
    #[error("granularity collapses: lambda = {0} (need an even value >= 2; raise epsilon or L, or pass an explicit lambda override)")]
    LambdaTooSmall(u32),
    #[error("lambda = {lambda} exceeds the hop cutoff L = {l_cut}")]
    LambdaExceedsCutoff { lambda: u32, l_cut: u32 },
    #[error(
        "additive stretch too large for the stretch budget: need 21 * A * f^2 * beta * q <= p * L \
         (A = {additive_cap}, f = {f}, beta = {beta}, eps = {eps}, L = {l_cut})"
    )]
    BetaConstraint {
        additive_cap: u64,
        f: u32,
        beta: u64,
        eps: Ratio<u64>,
        l_cut: u32,
    },
    #[error("short-range oracle: {0}")]
    Short(#[from] crate::short::ShortDsoError),
}
