//! Size limits for exhaustive computations.
//!
//! Every exhaustive routine takes a [`Guard`]. The default limits keep runs
//! at desk scale; setting the environment variable named by
//! [`UNGUARDED_ENV`] disables them (runs may then be slow, never unsound).

use crate::error::{Error, Result};

pub const UNGUARDED_ENV: &str = "MANGULATIONS_UNGUARDED";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    /// Largest `m * n` accepted by exhaustive enumeration.
    pub max_mn: usize,
    /// Largest `m * n` for sweeps over all intervals of a poset.
    pub max_interval_mn: usize,
    /// Largest number of elements for which a poset (with its reachability
    /// bitmaps) is materialized.
    pub max_poset_elements: usize,
    /// Largest number of monomial columns in one graded component.
    pub max_qsym_columns: usize,
    pub enabled: bool,
}

impl Guard {
    pub const fn standard() -> Self {
        Guard {
            max_mn: 16,
            max_interval_mn: 10,
            max_poset_elements: 20_000,
            max_qsym_columns: 4_000,
            enabled: true,
        }
    }

    pub const fn unbounded() -> Self {
        Guard {
            enabled: false,
            ..Guard::standard()
        }
    }

    /// Standard limits unless the override variable is set to a non-empty
    /// value other than `0`.
    pub fn from_env() -> Self {
        match std::env::var(UNGUARDED_ENV) {
            Ok(v) if !v.is_empty() && v != "0" => Guard::unbounded(),
            _ => Guard::standard(),
        }
    }

    fn check(&self, value: usize, limit: usize, what: impl FnOnce() -> String) -> Result<()> {
        if self.enabled && value > limit {
            Err(Error::SizeGuardExceeded { what: what(), limit })
        } else {
            Ok(())
        }
    }

    pub fn check_enumeration(&self, m: usize, n: usize) -> Result<()> {
        self.check(m * n, self.max_mn, || format!("enumeration with m*n = {}", m * n))
    }

    pub fn check_intervals(&self, m: usize, n: usize) -> Result<()> {
        self.check(m * n, self.max_interval_mn, || {
            format!("interval sweep with m*n = {}", m * n)
        })
    }

    pub fn check_poset(&self, m: usize, n: usize, elements: usize) -> Result<()> {
        self.check_enumeration(m, n)?;
        self.check(elements, self.max_poset_elements, || {
            format!("poset with {elements} elements")
        })
    }

    pub fn check_columns(&self, columns: usize) -> Result<()> {
        self.check(columns, self.max_qsym_columns, || {
            format!("graded component with {columns} monomials")
        })
    }
}

impl Default for Guard {
    fn default() -> Self {
        Guard::from_env()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_limits() {
        let g = Guard::standard();
        assert!(g.check_enumeration(2, 8).is_ok());
        assert!(matches!(
            g.check_enumeration(3, 6),
            Err(Error::SizeGuardExceeded { limit: 16, .. })
        ));
        assert!(g.check_intervals(1, 10).is_ok());
        assert!(g.check_intervals(1, 11).is_err());
        assert!(g.check_poset(1, 12, 208_012).is_err());
    }

    #[test]
    fn unbounded_accepts_everything() {
        let g = Guard::unbounded();
        assert!(g.check_enumeration(10, 10).is_ok());
        assert!(g.check_columns(1 << 30).is_ok());
    }
}
