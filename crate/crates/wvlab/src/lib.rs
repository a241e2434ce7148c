//! A numerical laboratory for the growth of deterministic and random
//! power series, and for the dynamics of weighted backward shifts.
//!
//! The crate works in the log domain throughout: a coefficient sequence
//! stores `log |a_n|` and a phase, so quantities like `max_n |a_n| r^n`
//! at `r = 500` never touch denormals or infinities. On top of that
//! representation it provides
//!
//! * the growth functionals `mu` (maximal term), `S` (quadratic mean on
//!   a circle), `G` (absolute sum) and `M` (maximum modulus), with
//!   certified truncation ([`growth`]);
//! * random coefficient multipliers with subgaussian tail certificates
//!   and reproducible seeded streams ([`sampler`]);
//! * interval sets with logarithmic and `h`-weighted measures, the
//!   exceptional-set machinery behind "outside a set of finite
//!   logarithmic measure" statements ([`measure`]);
//! * a family of maximum-modulus bounds (deterministic and randomized),
//!   violation sets, constant calibration, and scaling-exponent
//!   regressions ([`inequality`]);
//! * weighted backward shifts, a finite-horizon chaos test, random
//!   frequently hypercyclic functions, and orbit hitting-density
//!   estimates ([`dynamics`]);
//! * a CLI driving reproducible experiments with CSV/JSON artifacts
//!   ([`config`], [`runner`]).
//!
//! The accompanying book under `book/` walks through the concepts; its
//! code blocks compile as doctests of this crate, so the guide cannot
//! drift from the API.

// Input validation spells checks as `!(x > 0.0)` on purpose: the negated
// form also rejects NaN, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dynamics;
pub mod error;
pub mod growth;
pub mod inequality;
pub mod logdomain;
pub mod measure;
pub mod runner;
pub mod sampler;
pub mod series;

mod circle;
mod fmtnum;

pub use error::{Error, Result};

/// Compile the guide's code blocks as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/growth.md")]
    mod growth {}
    #[doc = include_str!("../../../book/src/randomization.md")]
    mod randomization {}
    #[doc = include_str!("../../../book/src/exceptional-sets.md")]
    mod exceptional_sets {}
    #[doc = include_str!("../../../book/src/inequalities.md")]
    mod inequalities {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
