//! IO, file formats, and command-line front end for `conceptor-embedding`.

pub mod cli;
pub mod io;
pub mod projector;
pub mod report;

pub use cli::{run, Cli};
