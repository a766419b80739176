//! Few-weight p-ary linear codes built from functions with low Walsh
//! spectrum, with exact (cyclotomic-integer) arithmetic throughout.

pub mod catalog;
pub mod code;
pub mod cyclotomic;
pub mod dsl;
pub mod families;
pub mod field;
pub mod pipeline;
pub mod verify;
pub mod walsh;
