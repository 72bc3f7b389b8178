//! Command implementations behind the `hgops` binary.

pub mod commands;
pub mod parse;

use hgops::HgError;

/// Process exit code for an error: 3 for numerical non-convergence, 2 for
/// everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<HgError>() {
        Some(HgError::NonConvergence(_)) => 3,
        _ => 2,
    }
}
