use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// A closed polygon of nonzero plane vectors, traversed in order and closed
/// up from the last point back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLoop {
    points: Vec<[f64; 2]>,
}

impl DiscreteLoop {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidLoop("empty loop".into()));
        }
        if let Some(j) = points.iter().position(|p| p[0] == 0.0 && p[1] == 0.0) {
            return Err(Error::InvalidLoop(format!("point {j} is the zero vector")));
        }
        Ok(DiscreteLoop { points })
    }

    /// Reads the interleaved layout `(x_0, y_0, x_1, y_1, ...)` used by the
    /// discretized asymptotic operator.
    pub fn from_interleaved(v: &[f64]) -> Result<Self> {
        Self::new(v.chunks_exact(2).map(|c| [c[0], c[1]]).collect())
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }
}

/// Signed step angle from `a` to `b` in (-pi, pi].
#[inline]
pub(crate) fn step_angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot)
}

/// Winding number of the loop about the origin.
pub fn winding(lp: &DiscreteLoop) -> Result<i64> {
    let pts = &lp.points;
    let n = pts.len();
    let mut total = 0.0;
    for j in 0..n {
        let d = step_angle(pts[j], pts[(j + 1) % n]);
        if d.abs() >= FRAC_PI_2 {
            return Err(Error::Resolution(format!(
                "winding step {j} turns by {d:.3} rad (>= pi/2); loop is under-resolved"
            )));
        }
        total += d;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.1 {
        return Err(Error::Resolution(format!(
            "winding {turns:.4} is not within 0.1 of an integer"
        )));
    }
    Ok(rounded as i64)
}
