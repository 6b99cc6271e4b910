//! Directed differential biquivers, the bocses they define, their
//! representations and their Koszul and Ringel duals.
#![no_std]
extern crate alloc;

pub mod bocs;
pub mod classify;
pub mod catalog;
pub mod dg;
pub mod koszul;
pub mod linalg;
pub mod rep;
pub mod scalar;
