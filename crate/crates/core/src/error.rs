use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("invalid input: {0}")]
    Input(String),
    /// An exhaustive computation would exceed a configured resource cap.
    #[error("resource cap `{cap}` exceeded: need {requested}, limit is {limit}")]
    Resource {
        cap: &'static str,
        requested: u128,
        limit: u128,
    },
    /// A full binary type tree one level taller than the assumed tree rank.
    #[error("tree rank exceeds {t}: found a full type tree of height {}", t + 1)]
    TreeRankExceeded {
        t: usize,
        tree: Box<crate::typetree::TypeTree>,
    },
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn check_cap(cap: &'static str, requested: u128, limit: u128) -> Result<()> {
        if requested > limit {
            Err(Error::Resource {
                cap,
                requested,
                limit,
            })
        } else {
            Ok(())
        }
    }
}
