pub mod arrangement;
pub mod barcode;
pub mod complex;
pub mod corpus;
pub mod distance;
pub mod error;
pub mod function;
pub mod io;
pub mod merge_tree;
pub mod morphism;
pub mod morse;
pub mod rational;
pub mod sample;
