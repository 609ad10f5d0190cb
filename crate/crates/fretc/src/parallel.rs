//! Refinement search split across worker threads. Each layer is partitioned
//! by first signature; the smallest violating index wins, so the verdict is
//! the sequential one regardless of scheduling.

use fretish_core::refinement::RefinementProblem;
use fretish_core::{AbstractionMapping, Project, RefinementError, RefinementVerdict};
use rayon::prelude::*;

pub fn check_refinement_parallel(
    project: &Project,
    mapping: &AbstractionMapping,
    bound: usize,
    budget: u64,
) -> Result<RefinementVerdict, RefinementError> {
    if bound == 0 {
        return Err(RefinementError::ZeroBound);
    }
    let problem = match RefinementProblem::prepare(project, mapping, budget)? {
        Ok(p) => p,
        Err(reason) => return Ok(RefinementVerdict::Inconclusive(reason)),
    };
    problem.run(bound, budget, |p, len| {
        (0..p.signature_count())
            .into_par_iter()
            .filter_map(|k| p.search_layer(len, k..k + 1))
            .min()
    })
}
