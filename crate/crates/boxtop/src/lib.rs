//! Workbench for covers of `{0,1}^dim` by cubes (basic clopen sets) and
//! their disjoint refinements, together with the neighbouring structures
//! that make such refinements tick: generalised-metrisability witnesses,
//! ultrametrics, interval-box partitions of tail-space products, and the
//! explicit disjoint covers built from a ladder of prefix lengths.
//!
//! Everything works at desk scale and everything is checkable: each
//! refinement algorithm comes with a certificate (density, antichain,
//! refinement, union preservation) that can be recomputed independently,
//! either by exhaustive point enumeration or symbolically.
//!
//! The `examples/` directory has one runnable program per capability; the
//! thin `boxtop` binary exposes the same operations as batch subcommands.

pub mod covers;
pub mod cube;
pub mod error;
pub mod gen;
pub mod io;
pub mod metrisable;
pub mod pointset;
pub mod refine;
pub mod selftest;
pub mod singular;
pub mod tailbox;

pub mod cli;

pub use covers::{certify_b_refinement, is_antichain, is_dense, refines, DensityMode, RefinementCertificate};
pub use cube::{Cube, CubeFamily, Point};
pub use error::{Error, ErrorKind, Result};

/// Limits for the operations that enumerate points or expand cube lists.
#[derive(Clone, Debug)]
pub struct Config {
    /// Largest ambient dimension for exhaustive point enumeration.
    pub enum_limit: usize,
    /// Largest free-coordinate count expanded by naive enumeration before
    /// switching to complement products.
    pub expansion_threshold: usize,
    /// Hard cap on the number of cubes any single expansion may produce.
    pub expansion_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            enum_limit: 24,
            expansion_threshold: 20,
            expansion_cap: 1 << 20,
        }
    }
}

impl Config {
    /// Default limits, with `BOXTOP_ENUM_LIMIT` overriding the enumeration
    /// limit when set.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Ok(text) = std::env::var("BOXTOP_ENUM_LIMIT") {
            if let Ok(limit) = text.trim().parse::<usize>() {
                cfg.enum_limit = limit;
            }
        }
        cfg
    }
}
