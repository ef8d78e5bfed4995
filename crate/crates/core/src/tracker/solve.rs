use super::{track_single_path, TrackResult, TrackerConfig};
use crate::error::{Error, Result};
use crate::exact::Q;
use crate::geometry::{find_cell_witness, smallest_face_containing, AffineLatticeMap, CellWitness, Face};
use crate::signomial::{
    build_critical_system, sign_precheck, starting_coefficients, truncate, HeightFunction,
    ParameterHomotopy, SignClass, Signomial,
};

/// `f` truncated to the smallest face containing `A-` and rewritten in the
/// lattice coordinates of that face.
#[derive(Debug, Clone)]
pub struct ReducedProblem {
    /// Smallest face of `conv(A)` containing `A-`, indices into the original support.
    pub gamma: Face,
    pub truncated: Signomial,
    pub map: AffineLatticeMap,
    pub reduced: Signomial,
    pub heights: HeightFunction,
}

pub fn reduce_problem(f: &Signomial, h: &HeightFunction) -> Result<ReducedProblem> {
    if sign_precheck(f)? != SignClass::NeedsCriterion {
        return Err(Error::Contract("the sign precheck already decides this polynomial".into()));
    }
    let gamma = smallest_face_containing(f.support(), f.support().a_minus())?;
    let truncated = truncate(f, &gamma)?;
    let (map, reduced) = truncated.reduce_to_full_dim()?;
    let heights = h
        .transport(truncated.support(), |p| Ok(p.clone()))?
        .transport(reduced.support(), |p| map.apply(p))?;
    Ok(ReducedProblem { gamma, truncated, map, reduced, heights })
}

/// Reduce and check nonseparability; a separable support is a contract error.
pub fn prepare_nonseparable(f: &Signomial, h: &HeightFunction) -> Result<(ReducedProblem, CellWitness)> {
    let rp = reduce_problem(f, h)?;
    let w = find_cell_witness(rp.reduced.support()).map_err(|_| {
        Error::Contract("separable support: use the multistart fallback instead".into())
    })?;
    Ok((rp, w))
}

pub fn build_homotopy(rp: &ReducedProblem) -> Result<ParameterHomotopy> {
    let sys = build_critical_system(&rp.reduced, &rp.heights)?;
    let start: Vec<Q> = starting_coefficients(rp.reduced.support())?;
    ParameterHomotopy::new(sys, start)
}

/// `t*` of a polynomial whose reduced support is nonseparable.
pub fn solve_tstar_nonseparable(f: &Signomial, h: &HeightFunction, cfg: &TrackerConfig) -> Result<TrackResult> {
    cfg.validate()?;
    let (rp, _) = prepare_nonseparable(f, h)?;
    let ph = build_homotopy(&rp)?;
    Ok(track_single_path(&ph, cfg))
}
