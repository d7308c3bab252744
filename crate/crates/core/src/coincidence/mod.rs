//! Coincidence rank and related constructions for integer dilatations.

pub mod aperiodic;
pub mod constant_length;
pub mod crc;
pub mod pure_core;
pub mod semigroup;

pub use aperiodic::{aperiodicity_check, AperiodicVerdict, Aperiodicity};
pub use constant_length::{to_constant_length, UnitSubstitution};
pub use crc::{
    coincidence_analysis, crc_verdict, measure_fraction_witness, CoincidenceAnalysis, CrcCheck,
    CrcVerdict, MeasureWitness,
};
pub use pure_core::{pure_core, PureCore};
pub use semigroup::{
    coincidence_rank, column_semigroup, quotient_substitution, strongly_coincident_classes,
    CoincidenceReport, ColumnSemigroup,
};
