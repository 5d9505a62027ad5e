//! Exact experimentation toolkit for the 3x+1 instruction calculus.
//!
//! Everything here is computed in exact big-rational or big-integer
//! arithmetic; irrational constants enter only through rigorous rational
//! enclosures with proven tail bounds. Floating point appears exclusively in
//! display helpers and explicitly-labelled report fields.
//!
//! Module map:
//!
//! * [`exactnum`] — rationals, modular reduction of odd-denominator
//!   fractions, exact comparison of powers of 2 and 3, slope oracles with
//!   certified enclosures.
//! * [`words`] — finite binary words, lazy digit streams, the integer weight
//!   `phi` and height/relative-height machinery.
//! * [`sturmian`] — continued fractions, Sturmian and Christoffel words,
//!   engineered words with controlled zero runs, zero-count closed forms.
//! * [`conjugacy`] — the map T, affine word actions, cycle values, series
//!   partial sums and certified limit estimates.
//! * [`padic`] — 2-adic and 3-adic expansions, residue chains, stabilized
//!   3-adic outputs along word families.
//! * [`analysis`] — slope/ratio convergence diagnostics, term statistics,
//!   value-ladder permutations, growth-cone ratios.

pub mod error;
pub mod exactnum;
pub mod words;
pub mod sturmian;
pub mod conjugacy;
pub mod padic;
pub mod analysis;

pub use analysis::{
    ConeReport, CriterionVerdict, DistributionReport, HeightsReport, MuBoundReport, RatioReport,
    SigmaPerm, SlopeReport, SlopeVerdict, YPartition,
};
pub use conjugacy::{AffineMap, EstimateParams, LimitEstimate};
pub use error::{Error, Result};
pub use exactnum::{AlphaKind, AlphaOracle, Rational, Residue};
pub use padic::{PadicExpansion, ThreeAdicRow};
pub use words::{FiniteWord, WordStream};
