/// Default cap on monomials enumerated (or counting-search nodes visited) per evaluation.
pub const DEFAULT_MAX_MONOMIALS: u64 = 10_000_000;

/// Default cap on rows of a single coefficient matrix.
pub const DEFAULT_MAX_MATRIX_ROWS: u64 = 2_000_000;

/// Environment variable consulted by [`Limits::from_env`].
pub const BUDGET_ENV: &str = "MULTIHILB_BUDGET";

/// Resource caps shared by every evaluation. Exceeding one is an error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_monomials: u64,
    pub max_matrix_rows: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_monomials: DEFAULT_MAX_MONOMIALS,
            max_matrix_rows: DEFAULT_MAX_MATRIX_ROWS,
        }
    }
}

impl Limits {
    pub fn with_max_monomials(mut self, max: u64) -> Self {
        self.max_monomials = max;
        self
    }

    /// Defaults, with the monomial cap overridden by `MULTIHILB_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            limits.max_monomials = v;
        }
        limits
    }
}
