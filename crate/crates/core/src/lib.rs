//! Exact arc pair diagram calculus for the Thompson-like group of the
//! Basilica.

pub mod circle;
pub mod cli;
pub mod diagram;
pub mod element;
pub mod forest;
pub mod lamination;
pub mod membership;
pub mod render;
pub mod thompson_t;
pub mod words;
