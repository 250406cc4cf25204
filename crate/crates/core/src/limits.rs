use serde::Serialize;

/// Ceilings for the exhaustive routines. Above these the routines refuse
/// instead of sampling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleLimits {
    /// Largest vertex count for all-subsets scans (density checks, exact
    /// sparsifier verification). Never above 64.
    pub exhaustive_max_n: usize,
    /// Largest `C(n, s)` that sparse-set counting will walk.
    pub count_max_subsets: u128,
    /// Largest `C(|V'|, s)` for bad-set sparsifier verification.
    pub bad_set_max_subsets: u128,
    /// `|V'|` at or below which automatic verification uses exact mode.
    pub auto_exact_max: usize,
    /// Trials used when automatic verification falls back to spot checks.
    pub auto_spot_trials: usize,
}

impl Default for ScaleLimits {
    fn default() -> Self {
        ScaleLimits {
            exhaustive_max_n: 20,
            count_max_subsets: 100_000_000,
            bad_set_max_subsets: 10_000_000,
            auto_exact_max: 16,
            auto_spot_trials: 1000,
        }
    }
}

/// Hard ceiling on `exhaustive_max_n`: the scans use one machine word per set.
pub const WORD_LIMIT: usize = 64;
