//! Exact-arithmetic verification and construction engine for finite-dimensional
//! BiHom-algebras, their bimodules and matched pairs.

pub mod axioms;
pub mod exact;
pub mod ir;
pub mod eval;
pub mod structures;
pub mod constructions;
pub mod modules;
pub mod model;
pub mod report;
