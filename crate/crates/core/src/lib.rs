//! Long-range correlation analysis of narrative texts.
//!
//! A text is turned into a sentence-length series `l(j)` (or a word
//! recurrence-time series) and examined with three complementary tools:
//!
//! * the periodogram and a `1/f^β` scaling fit ([`spectral`]),
//! * multifractal detrended fluctuation analysis giving `h(q)` and the
//!   singularity spectrum `f(α)` ([`mfdfa`]),
//! * continuous wavelet coefficient maps for visual inspection ([`wavelet`]).
//!
//! Significance is judged against shuffled and Fourier-phase-randomized
//! surrogates ([`series`]); sentence-length distributions are summarised by
//! their complementary CDF and a stretched-exponential tail fit ([`distfit`]).

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod distfit;
pub mod io;
pub mod mfdfa;
pub mod series;
pub mod spectral;
pub mod stats;
pub mod wavelet;

mod error;

pub use error::{Error, Result};
