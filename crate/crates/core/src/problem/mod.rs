//! Problem representations shared by every solver.

mod continuous;
mod tsp;

pub use continuous::{ContinuousProblem, Objective};
pub use tsp::{
    load_best_known, load_tsplib, load_with_best_known, parse_tsplib, tour_cost, Tour, TspInstance,
};

/// Either kind of problem a solver can be pointed at.
#[derive(Clone, Copy, Debug)]
pub enum Problem<'a> {
    Tsp(&'a TspInstance),
    Continuous(&'a ContinuousProblem),
}

impl Problem<'_> {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Tsp(_) => "tsp",
            Problem::Continuous(_) => "continuous",
        }
    }
}
