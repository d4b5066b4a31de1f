//! Catalog, file formats, verification runs and the command-line front end
//! for `arcspace-core`.

pub mod catalog;
pub mod cli;
pub mod io;
pub mod verify;
