//! Process-wide size caps.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default cap on the number of states of any constructed automaton.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_MAX_STATES`].
pub const MAX_STATES_VAR: &str = "INFGRAPH_MAX_STATES";

/// Default cap on the number of words returned by an enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000;

/// The automaton state cap, read once from the environment.
pub fn max_states() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_STATES_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| *v >= 1.0)
            .map(|v| v as usize)
            .unwrap_or(DEFAULT_MAX_STATES)
    })
}

pub(crate) fn check_states(states: usize) -> Result<()> {
    let limit = max_states();
    if states > limit {
        Err(Error::StateLimit { states, limit })
    } else {
        Ok(())
    }
}
