//! Command-line front end for `weilreg`: batch analysis of Weil polynomials
//! and ingestion of isogeny-class records.

pub mod fetch;
pub mod run;
