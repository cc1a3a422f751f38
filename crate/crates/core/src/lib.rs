//! Satisfiability checking for temporal DL-Lite knowledge bases whose ABoxes may
//! carry geometric distribution eventualities.

pub mod kb;
pub mod ltl;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod reduction;
