//! Kernel for an infinitary logical framework with coinductive types.
//!
//! Terms are canonical (β-normal, η-long) and possibly infinite; every
//! judgment is indexed by a finite observation depth. Finitary signatures
//! with recursive definitions are expanded to any depth and checked there.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diag;
pub mod subst;
pub mod syntax;
pub mod unfold;
pub mod check;
pub mod validity;
pub mod driver;
pub mod surface;
