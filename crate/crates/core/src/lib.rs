//! Exact computations for twisted Verma modules over complex semisimple Lie
//! algebras: root systems and Weyl groups, formal characters over a block,
//! the twisted Jantzen sum formula with its multiplicity-free layer readout,
//! and a rank-one deformation engine over the local ring `Q[X]_(X)`.

pub mod characters;
pub mod error;
pub mod jantzen;
pub mod root_system;
pub mod sl2_lab;
pub mod weyl;

pub use characters::{Basis, BlockContext, CharVector, DecompositionMatrix};
pub use error::{Error, Result};
pub use jantzen::{LayerTable, SumFormulaResult};
pub use root_system::{CartanData, Root, RootSystem, Weight, WeightClass};
pub use weyl::{InversionSet, RootSequence, WeylElement, WeylGroup};
