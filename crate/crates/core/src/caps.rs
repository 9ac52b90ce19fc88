//! Resource caps for the exhaustive searches.

/// Environment variable the command line tool reads as a cap override.
pub const CAP_ENV: &str = "SHATTERLAB_CAP";

/// Limits on exhaustive work. Every field is an upper bound on the size of
/// the object the named search enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Universe size for VC dimension / VC shatter enumeration.
    pub vc_universe: usize,
    /// Universe size for op-rank and op-shatter recursions.
    pub op_universe: usize,
    /// Number of sequences `j^n` a ban-problem solver may enumerate.
    pub sequences: u128,
    /// Vertex count up to which tree rank is computed exactly.
    pub tree_rank_vertices: usize,
    /// Length `n` up to which the minimum subcube hitting set is searched.
    pub hitting_length: usize,
    /// Label combinations `N^n` for exact test-tree expectations.
    pub expectation_paths: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vc_universe: 20,
            op_universe: 12,
            sequences: 1 << 22,
            tree_rank_vertices: 18,
            hitting_length: 6,
            expectation_paths: 1_000_000,
        }
    }
}

impl Caps {
    /// Caps with no practical limit. Only for callers that already bounded their inputs.
    pub fn unlimited() -> Self {
        Caps {
            vc_universe: usize::MAX,
            op_universe: usize::MAX,
            sequences: u128::MAX,
            tree_rank_vertices: usize::MAX,
            hitting_length: usize::MAX,
            expectation_paths: u128::MAX,
        }
    }
}
