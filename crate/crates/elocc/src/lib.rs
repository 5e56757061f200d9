//! Detecting quantum phase transitions in 1D spin-1/2 chains through the
//! local convertibility of their ground states.
//!
//! Ground states of the transverse-field Ising, XY and XXZ chains are
//! computed by full dense diagonalization, reduced to Schmidt spectra across
//! a bipartition, and compared pairwise through their Renyi-entropy curves:
//! if two curves never intercept, the more entangled state converts to the
//! other under entanglement-assisted LOCC; an interception means neither
//! converts. The pattern of interceptions across a parameter sweep changes
//! abruptly at a phase boundary, which a step-refining scan brackets to
//! arbitrary resolution, and the finite-size drift of the bracket
//! extrapolates to the thermodynamic critical point.
//!
//! Modules follow the pipeline: [`models`] builds Hamiltonians as Pauli
//! strings, [`eigen`] diagonalizes, [`reduction`] cuts states into Schmidt
//! spectra, [`schmidt`]/[`monotone`] carry the convertibility algebra, and
//! [`criticality`] orchestrates sweeps, tables, brackets, and scaling fits.

pub mod config;
pub mod criticality;
pub mod eigen;
pub mod error;
pub mod io;
pub mod models;
pub mod monotone;
pub mod reduction;
pub mod schmidt;

pub use criticality::{
    classify_pattern, gs_vs_excited, interception_table, locate_boundary, locate_boundary_with,
    paper_rounded, param_grid, scaling_fit, sweep, Bracket, InterceptionTable, PatternClass,
    PatternReport, ScalingFit, SweepPoint, SweepResult,
};
pub use eigen::{full_spectrum, lowest_states, EigenPair};
pub use error::{Error, Result};
pub use models::{build_ising, build_xxz, build_xy, ModelFamily, ModelSpec, PauliTerm, SparseOperator};
pub use monotone::{
    elocc_verdict, find_interceptions, locc_convertible, renyi_entropy, verify_catalyst,
    AlphaGrid, ConversionVerdict,
};
pub use reduction::{comb, half_chain, schmidt_from_state, BipartitionSpec, PartitionKind};
pub use schmidt::{normalize_descending, tensor_product, SchmidtVector, DEFAULT_TRUNC_TOL};
