//! Ray class groups of imaginary quadratic fields and explicit presentations
//! of tamely ramified pro-p Galois groups with small ramification sets.

pub mod abelian;
pub mod arith;
pub mod engine;
pub mod extfield;
pub mod lmfdbio;
pub mod par;
pub mod pgroups;
pub mod poly;
pub mod quadfield;
pub mod rayclass;
pub mod resring;
