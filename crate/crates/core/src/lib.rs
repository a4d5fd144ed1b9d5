//! Simulator and benchmark harness for genetic programming on Majority-style
//! test functions.
//!
//! Individuals are binary join trees over the literals `x_1, ~x_1, ..., x_n,
//! ~x_n`; since the join node has no semantics they are stored as leaf
//! sequences with cached literal counts. The crate provides the fitness
//! variants, HVL-Prime mutation, the (1+1) GP with and without lexicographic
//! parsimony pressure, the Concatenation Crossover GP, slow reference oracles
//! and an experiment runner that writes CSV.

pub mod algorithms;
pub mod dyadic;
pub mod error;
pub mod fitness;
pub mod harness;
pub mod individual;
pub mod oracle;
pub mod variation;
pub mod verify;

pub use algorithms::{evolve_population, run, Algorithm, RunConfig, RunRecord, SlotEvent, StopCondition, StopScope};
pub use dyadic::Dyadic;
pub use error::{GpError, Result};
pub use fitness::{LeafClass, Problem, Score};
pub use individual::{Individual, Literal, LiteralCounts, Sign};
