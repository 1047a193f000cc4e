//! Exhaustion budgets for the scan-heavy operations. Nothing in this crate
//! truncates silently: a sweep either fits its budget or fails loudly.

/// Upper bounds on the various exhaustive scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Cap on p^dimV for form-level vector scans.
    pub form_scan: u64,
    /// Cap on the element count p^(dimV + dimW) for element-level scans.
    pub element_scan: u64,
    /// Cap on |GL(dimV, p)| for exhaustive base-change searches.
    pub gl_search: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            form_scan: 10_000_000,
            element_scan: 1_000_000,
            gl_search: 30_000_000,
        }
    }
}

/// Name of the environment variable that overrides every budget at once.
pub const BUDGET_ENV: &str = "CONJTYPE_BUDGET";

impl Budgets {
    /// Defaults, with `CONJTYPE_BUDGET` (a single integer) overriding all
    /// three caps when set. Explicit CLI flags take precedence over both.
    pub fn from_env() -> Budgets {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => match raw.trim().parse::<u64>() {
                Ok(n) => Budgets {
                    form_scan: n,
                    element_scan: n,
                    gl_search: n,
                },
                Err(_) => Budgets::default(),
            },
            Err(_) => Budgets::default(),
        }
    }

    pub fn with_all(n: u64) -> Budgets {
        Budgets {
            form_scan: n,
            element_scan: n,
            gl_search: n,
        }
    }
}
