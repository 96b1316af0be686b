pub mod classifier;
pub mod cli;
pub mod db;
pub mod fgab;
pub mod selfcoincidence;
