//! Named supremands used by the built-in scenarios and the tests.

use alloc::vec;

use crate::expr::Expr;
use crate::region::Region;
use crate::supremand::{Piece, Supremand};

/// `c|ξ|`, declared coercive and linearly bounded with constant `c`.
pub fn scaled_norm(dim: usize, c: f64) -> Supremand {
    Supremand::homogeneous(dim, Expr::c(c) * Expr::norm_xi())
        .with_coercivity(c)
        .with_linear_bound(c)
}

/// `min((ξ+1)², (ξ-1)²)` in 1-D, `min(|ξ-e₁|², |ξ+e₁|²)` in 2-D.
pub fn double_well(dim: usize) -> Supremand {
    let two = || Expr::c(2.0);
    let profile = if dim == 1 {
        (Expr::xi() + Expr::c(1.0))
            .pow(two())
            .min((Expr::xi() - Expr::c(1.0)).pow(two()))
    } else {
        let y2 = Expr::xi2().pow(two());
        ((Expr::xi() + Expr::c(1.0)).pow(two()) + y2.clone())
            .min((Expr::xi() - Expr::c(1.0)).pow(two()) + y2)
    };
    Supremand::homogeneous(dim, profile)
}

/// `ξ⁺ + 2ξ⁻` on the line.
pub fn asymmetric() -> Supremand {
    let p = Expr::xi().max(Expr::c(0.0)) + Expr::c(2.0) * (-Expr::xi()).max(Expr::c(0.0));
    Supremand::homogeneous(1, p)
        .with_coercivity(1.0)
        .with_linear_bound(2.0)
}

/// Supremand of the two-regime example on `(-2, 2)`:
/// `(1 - |ξ|) ∨ 0` on `[-1, 1]`, `2 + |ξ|` elsewhere.
pub fn boh() -> Supremand {
    Supremand::new(
        1,
        vec![
            Piece {
                region: Region::closed_interval(-1.0, 1.0),
                profile: (Expr::c(1.0) - Expr::xi().abs()).max(Expr::c(0.0)),
            },
            Piece {
                region: Region::union(vec![
                    Region::interval(-2.0, -1.0),
                    Region::interval(1.0, 2.0),
                ]),
                profile: Expr::c(2.0) + Expr::xi().abs(),
            },
        ],
    )
}

/// Closed form of the representation supremand of [`boh`].
pub fn boh_phi(x: f64, xi: f64) -> f64 {
    if x.abs() < 1.0 {
        2.0
    } else {
        2.0 + xi.abs()
    }
}

/// Closed form of the localized relaxed supremand of [`boh`].
pub fn boh_relaxed(x: f64, xi: f64) -> f64 {
    if x.abs() < 1.0 {
        0.0
    } else {
        2.0 + xi.abs()
    }
}

/// Gradient-free pair on `(-1, 1)`: `f = 1, 3` and `g = 4, 2` on `(-1,0)`, `(0,1)`.
pub fn fg_meet() -> (Supremand, Supremand) {
    let piecewise = |left: f64, right: f64| {
        Supremand::new(
            1,
            vec![
                Piece {
                    region: Region::interval(-1.0, 0.0),
                    profile: Expr::c(left),
                },
                Piece {
                    region: Region::Interval(crate::region::Interval {
                        lo: 0.0,
                        hi: 1.0,
                        lo_closed: true,
                        hi_closed: false,
                    }),
                    profile: Expr::c(right),
                },
            ],
        )
    };
    (piecewise(1.0, 3.0), piecewise(4.0, 2.0))
}
