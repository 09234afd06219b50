#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod barriers;
pub mod cli;
pub mod free_boundary;
pub mod hodograph;
pub mod model;
pub mod regularity;
pub mod solver;
