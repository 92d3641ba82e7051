//! Hypergraph weighted models: evaluation, encodings of strings, trees and
//! crosswords, closure constructions, and tiling models.

pub mod acceptance;
pub mod closures;
pub mod config;
pub mod crosswords;
pub mod encodings;
pub mod engine;
pub mod hypergraph;
pub mod io;
pub mod numeric;
pub mod random;
pub mod tensor;
pub mod tiling;
