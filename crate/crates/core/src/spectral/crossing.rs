//! Conley-Zehnder index from the linearized flow, independent of any
//! spectral computation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::winding::step_angle;
use super::{FlowLoop, Sym2};

type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyKind {
    Elliptic,
    PositiveHyperbolic,
    NegativeHyperbolic,
}

const DEGENERACY_TOL: f64 = 1e-9;

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn axpy(x: &Mat2, h: f64, y: &Mat2) -> Mat2 {
    [
        [x[0][0] + h * y[0][0], x[0][1] + h * y[0][1]],
        [x[1][0] + h * y[1][0], x[1][1] + h * y[1][1]],
    ]
}

/// J₀·S for `S = [[a, b], [b, d]]`.
fn j0s(s: Sym2) -> Mat2 {
    [[-s.s12, -s.s22], [s.s11, s.s12]]
}

/// RK4 path of `Ψ' = J₀ S_k(t) Ψ`, `Ψ(0) = Id`, over `t ∈ [0, 1]`.
fn flow_path(lp: &FlowLoop, k: u32) -> Vec<Mat2> {
    let it = lp.interpolant();
    let kf = k as f64;
    let field = |t: f64| j0s(it.eval(kf * t).scaled(kf));
    let bound = lp.cover_norm_bound(k).max(1.0);
    let steps = ((400.0 * bound).ceil() as usize).max(2000);
    let h = 1.0 / steps as f64;

    let mut psi: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut path = Vec::with_capacity(steps + 1);
    path.push(psi);
    for i in 0..steps {
        let t = i as f64 * h;
        let a0 = field(t);
        let am = field(t + 0.5 * h);
        let a1 = field(t + h);
        let k1 = mul(&a0, &psi);
        let k2 = mul(&am, &axpy(&psi, 0.5 * h, &k1));
        let k3 = mul(&am, &axpy(&psi, 0.5 * h, &k2));
        let k4 = mul(&a1, &axpy(&psi, h, &k3));
        for r in 0..2 {
            for c in 0..2 {
                psi[r][c] += h / 6.0 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]);
            }
        }
        path.push(psi);
    }
    path
}

/// The time-one map of the linearized flow along the `k`-fold cover.
pub fn monodromy(lp: &FlowLoop, k: u32) -> Mat2 {
    *flow_path(lp, k).last().expect("nonempty path")
}

pub fn monodromy_trace(lp: &FlowLoop, k: u32) -> f64 {
    let p = monodromy(lp, k);
    p[0][0] + p[1][1]
}

impl MonodromyKind {
    pub fn of_trace(tr: f64) -> Result<Self> {
        if (tr - 2.0).abs() <= DEGENERACY_TOL {
            return Err(Error::Degenerate(format!("monodromy has eigenvalue 1 (trace {tr})")));
        }
        Ok(if tr > 2.0 {
            MonodromyKind::PositiveHyperbolic
        } else if tr < -2.0 {
            MonodromyKind::NegativeHyperbolic
        } else {
            MonodromyKind::Elliptic
        })
    }

    pub fn is_hyperbolic(self) -> bool {
        self != MonodromyKind::Elliptic
    }
}

/// Total angle swept by `Ψ(t) v` along the path.
fn swept_angle(path: &[Mat2], v: [f64; 2]) -> Result<f64> {
    let apply = |m: &Mat2| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let mut total = 0.0;
    let mut prev = apply(&path[0]);
    for m in &path[1..] {
        let cur = apply(m);
        let d = step_angle(prev, cur);
        if d.abs() >= PI / 4.0 {
            return Err(Error::Resolution("linearized flow step turns too far".into()));
        }
        total += d;
        prev = cur;
    }
    Ok(total)
}

/// Conley-Zehnder index of the `k`-fold cover in the trivialization of the
/// loop coordinates, from the rotation of the linearized flow.
pub fn cz_crossing(lp: &FlowLoop, k: u32) -> Result<i64> {
    if k == 0 {
        return Err(Error::InvalidLoop("cover multiplicity must be positive".into()));
    }
    let path = flow_path(lp, k);
    let p = path.last().expect("nonempty path");
    let tr = p[0][0] + p[1][1];
    match MonodromyKind::of_trace(tr)? {
        MonodromyKind::PositiveHyperbolic => {
            // real eigenvector for the eigenvalue λ > 1 of P
            let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
            let lam = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
            let v = if p[0][1].abs() >= p[1][0].abs() && p[0][1] != 0.0 {
                [p[0][1], lam - p[0][0]]
            } else if p[1][0] != 0.0 {
                [lam - p[1][1], p[1][0]]
            } else if (p[0][0] - lam).abs() < (p[1][1] - lam).abs() {
                [1.0, 0.0]
            } else {
                [0.0, 1.0]
            };
            let turns = swept_angle(&path, v)? / (2.0 * PI);
            if (turns - turns.round()).abs() > 0.1 {
                return Err(Error::Internal(format!(
                    "eigenvector of positive hyperbolic monodromy turns {turns:.4} times"
                )));
            }
            Ok(2 * turns.round() as i64)
        }
        _ => {
            let a = (swept_angle(&path, [1.0, 0.0])? / (2.0 * PI)).floor() as i64;
            let b = (swept_angle(&path, [0.0, 1.0])? / (2.0 * PI)).floor() as i64;
            if a != b {
                return Err(Error::Internal("rotation interval is inconsistent".into()));
            }
            Ok(2 * a + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotation_indices() {
        let lp = FlowLoop::constant(Sym2::new(PI / 2.0, 0.0, PI / 2.0), 5).unwrap();
        assert_eq!(cz_crossing(&lp, 1).unwrap(), 1);
        assert!(matches!(cz_crossing(&lp, 4), Err(Error::Degenerate(_))));
        let lp = FlowLoop::constant(Sym2::new(7.0, 0.0, 7.0), 5).unwrap();
        assert_eq!(cz_crossing(&lp, 1).unwrap(), 3);
        assert_eq!(cz_crossing(&lp, 2).unwrap(), 5);
    }

    #[test]
    fn hyperbolic_index_zero() {
        let lp = FlowLoop::constant(Sym2::new(1.0, 0.0, -1.0), 3).unwrap();
        assert_eq!(cz_crossing(&lp, 1).unwrap(), 0);
        assert_eq!(cz_crossing(&lp, 2).unwrap(), 0);
        assert_eq!(MonodromyKind::of_trace(monodromy_trace(&lp, 1)).unwrap(), MonodromyKind::PositiveHyperbolic);
    }

    #[test]
    fn rotating_axis_is_negative_hyperbolic() {
        let a = 1.0;
        let lp = FlowLoop::from_fn(3, 1.0, |t| {
            let (c, s) = ((PI * t).cos(), (PI * t).sin());
            // π·Id + R(πt) diag(a, -a) R(πt)ᵀ
            Sym2::new(PI + a * (c * c - s * s), 2.0 * a * c * s, PI - a * (c * c - s * s))
        })
        .unwrap();
        let kind = MonodromyKind::of_trace(monodromy_trace(&lp, 1)).unwrap();
        assert_eq!(kind, MonodromyKind::NegativeHyperbolic);
        assert_eq!(cz_crossing(&lp, 1).unwrap(), 1);
        assert_eq!(cz_crossing(&lp, 2).unwrap(), 2);
    }
}
