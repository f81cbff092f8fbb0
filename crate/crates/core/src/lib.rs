//! Motivic Poincare series of toric surface singularities and the contact
//! valuation `d_X` of plane-curve branches, with brute-force oracles.

pub mod acceptance;
pub mod cli;
pub mod contfrac;
pub mod curve_res;
pub mod gring;
pub mod jet_oracle;
pub mod motivic;
pub mod toric_res;
