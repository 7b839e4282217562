pub mod cli;
pub mod countermodel;
pub mod grid;
pub mod reduction;
pub mod semantics;
pub mod syntax;
pub mod tiles;
pub mod turing;
