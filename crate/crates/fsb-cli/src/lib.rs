//! Library layer behind the `fsb` binary: stability range arithmetic,
//! sampling suites, and input/output helpers.

pub mod io;
pub mod ranges;
pub mod suites;
