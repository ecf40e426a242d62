//! Core algorithms for a small search-engine crawl pipeline driven by what
//! users actually search for.
//!
//! The pipeline ranks documents and domains, distills a query log into
//! weighted "eigenqueries" by diagonalizing the keyword co-occurrence
//! matrix, shifts crawl budget toward the domains that serve the
//! most-wanted content, and flags artificial link clusters by the width of
//! their in-link rank distribution.
//!
//! This crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command-line driver live in the `voxpop` crate.
#![no_std]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod querylog;
pub mod ranking;
pub mod spamguard;
pub mod spectral;
pub mod synthweb;
pub mod text;
pub mod vpa;

pub use error::{Error, Result, Warning};
