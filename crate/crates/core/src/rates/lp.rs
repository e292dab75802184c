//! Symmetric-rate extraction from a constraint set.
//!
//! With `R1c = R2c = Rc` and `R1p = R2p = Rp` every constraint becomes a
//! half-plane `a·Rc + b·Rp ≤ c` with nonnegative integer `a, b`. The optimum
//! of `Rc + Rp` sits at a vertex, so all pairwise intersections (including
//! the two axes) are enumerated and the best feasible one is kept.

use super::ConstraintSet;
use crate::error::{Error, Result};

const FEASIBLE_TOL: f64 = 1e-9;

/// Largest per-user rate `Rc + Rp ≥ 0` admitted by `constraints` under the
/// symmetric substitution.
pub fn max_symmetric_rate_t1(constraints: &ConstraintSet) -> Result<f64> {
    // (a, b, c) for a·Rc + b·Rp ≤ c; the last two rows are Rc ≥ 0, Rp ≥ 0.
    let mut planes: Vec<(f64, f64, f64)> = constraints
        .constraints
        .iter()
        .map(|k| {
            (
                f64::from(k.coeffs[0] + k.coeffs[1]),
                f64::from(k.coeffs[2] + k.coeffs[3]),
                k.bound.max(0.0),
            )
        })
        .collect();
    if !planes.iter().any(|p| p.0 > 0.0) || !planes.iter().any(|p| p.1 > 0.0) {
        return Err(Error::Unbounded);
    }
    planes.push((-1.0, 0.0, 0.0));
    planes.push((0.0, -1.0, 0.0));

    let feasible = |rc: f64, rp: f64| {
        planes
            .iter()
            .all(|&(a, b, c)| a * rc + b * rp <= c + FEASIBLE_TOL * (1.0 + c.abs()))
    };
    let mut best = 0.0f64;
    for (i, &(a1, b1, c1)) in planes.iter().enumerate() {
        for &(a2, b2, c2) in &planes[i + 1..] {
            let det = a1 * b2 - a2 * b1;
            if det == 0.0 {
                continue;
            }
            let rc = (c1 * b2 - c2 * b1) / det;
            let rp = (a1 * c2 - a2 * c1) / det;
            if feasible(rc, rp) {
                best = best.max(rc + rp);
            }
        }
    }
    Ok(best)
}
