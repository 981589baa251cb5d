//! Patches and lattice surgery.
//!
//! A patch of `w`×`h` faces has rough top and bottom and smooth sides, and
//! stores one logical element of G: the product of its left column, read top
//! to bottom. Splits and merges act on these labels as the Hopf-algebra maps
//! of CG and C(G).

pub mod code;
pub mod ops;

pub use code::{vacuum_dimension, PatchCode};
pub use ops::{proportional_residual, Byproduct, Correction, MeasurementRecord, Probe, StepRecord, Surgery, SurgeryOp, TraceEntry};
