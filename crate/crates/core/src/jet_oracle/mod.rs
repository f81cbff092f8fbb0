//! Independent brute-force checks: liftable jet counts over finite fields
//! and the contact distance of arcs to plane branches.

mod curve;
mod fp;
mod jets;

pub use curve::{check_prime, curve_dx_oracle, lift_arc, OracleDx, PlaneArc};
pub use fp::{is_prime, FpSeries};
pub use jets::{liftable_jet_count, JetCount, JetCountRequest, DEFAULT_BUDGET};

use thiserror::Error;

use crate::curve_res::{CurveError, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} divides m or a Euclid remainder of the branch")]
    NotGeneric(u64),
    #[error("exponent c = {0} must be at least 2")]
    Exponent(u32),
    #[error("lifting depth {depth} is below the jet order {n}")]
    Depth { depth: usize, n: usize },
    #[error("enumeration needs about {need} arcs, budget is {budget}")]
    Budget { need: u128, budget: u128 },
    #[error("series precision exhausted while lifting the arc")]
    Precision,
    #[error("creating {node}: divisors through the centre are {through:?}, recorded parents {parents:?}")]
    Creation {
        node: NodeId,
        through: Vec<NodeId>,
        parents: Vec<NodeId>,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
}
