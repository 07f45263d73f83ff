//! Actor diversity over linked-data entities, and party-representation
//! audits of the knowledge graphs those entities come from.

pub mod audit;
pub mod cli;
pub mod config;
pub mod diversity;
pub mod kg;
pub mod pipeline;
pub mod report;
