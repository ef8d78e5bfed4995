use crate::error::{Error, Result};
use crate::exact::{q, LinearProgram, LpOutcome, Relation, Q};
use crate::geometry::{SignedSupport, SimplexFamily};
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSolution {
    /// One weight per simplex of the family, as `"p/q"` strings in JSON.
    #[serde(serialize_with = "ser_rationals")]
    pub delta: Vec<Q>,
    /// Indices of the simplices with positive weight.
    pub support_j: Vec<usize>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// A nonnegative solution of
/// `c_a = sum_{k : a in Delta_k} delta_k sum_b lambda^b_{a,k} c_b` for `a` in `A+`,
/// where `c` holds the nonsigned coefficients in canonical order.
///
/// `c` must be exactly singular at the all-ones point; otherwise the system
/// is in general inconsistent and a contract error is returned.
pub fn solve_delta(family: &SimplexFamily, support: &SignedSupport, c: &[Q]) -> Result<DeltaSolution> {
    let np = support.a_plus().len();
    let nm = support.a_minus().len();
    if c.len() != np + nm || family.simplices.is_empty() {
        return Err(Error::Input("coefficient vector does not match the support".into()));
    }
    let r = family.simplices.len();
    let mut lp = LinearProgram::new(r);
    for a in 0..np {
        let mut row = vec![Q::zero(); r];
        for (k, verts) in family.simplices.iter().enumerate() {
            if let Some(v) = verts.iter().position(|&i| i == a) {
                for b in 0..nm {
                    row[k] += &family.lambda[k][b][v] * &c[np + b];
                }
            }
        }
        lp.add(row, Relation::Eq, c[a].clone());
    }
    let delta = match lp.solve() {
        LpOutcome::Optimal { x, .. } => x,
        _ => return Err(Error::Contract("the coefficient system has no nonnegative solution".into())),
    };
    let total: Q = delta.iter().sum();
    if !total.is_one() {
        return Err(Error::Contract(format!("weights sum to {total}, not 1")));
    }
    let support_j = (0..r).filter(|&k| delta[k] > q(0)).collect();
    Ok(DeltaSolution { delta, support_j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;
    use crate::geometry::{find_cell_witness, simplices_containing_cell, LatticePoint};

    #[test]
    fn square_center_even_split() {
        let lp = |v: &[i64]| LatticePoint(v.to_vec());
        let s = SignedSupport::new(
            vec![lp(&[0, 0]), lp(&[2, 0]), lp(&[0, 2]), lp(&[2, 2])],
            vec![lp(&[1, 1])],
        )
        .unwrap();
        let fam = simplices_containing_cell(&s, &find_cell_witness(&s).unwrap()).unwrap();
        let c = vec![q(1), q(1), q(1), q(1), q(4)];
        let d = solve_delta(&fam, &s, &c).unwrap();
        assert_eq!(d.delta, vec![q_frac(1, 2), q_frac(1, 2)]);
        assert_eq!(d.support_j, vec![0, 1]);
        // Not singular at the all-ones point.
        assert!(solve_delta(&fam, &s, &[q(1), q(1), q(1), q(1), q(3)].to_vec()).is_err());
    }
}
