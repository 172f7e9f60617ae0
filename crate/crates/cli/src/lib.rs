//! Support code for the `permkit` binary: the group-file format and result
//! documents.

pub mod group_file;
pub mod report;
