//! Command implementations and the verification driver behind the
//! `basiclocus` binary.

pub mod commands;
pub mod report;
pub mod verify;
