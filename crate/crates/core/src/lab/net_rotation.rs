//! Published entry formulas for the net rotations of the five- and
//! six-turn replacement constructions, next to the direct products.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::kinematics::{compose_raw, Rot3, SegmentKind, TurnGeometry};
use crate::planner::max_radius;

use SegmentKind::{L, R};

/// Which pair of products to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainVariant {
    /// `L_π R_{π+β} L_π` against `L_φ R_{π−β} L_φ`, for `r ≤ 1/√2`.
    ThreeTurn,
    /// `L_π R_{π+β} L_{π+β} R_π` against `L_φ R_{π−β} L_{π−β} R_φ`, for `r ∈ (1/√2, √3/2]`.
    FourTurn,
}

/// Formula-evaluated and directly multiplied matrices for both paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetRotationTables {
    pub original_formula: Rot3<f64>,
    pub original_product: Rot3<f64>,
    pub replacement_formula: Rot3<f64>,
    pub replacement_product: Rot3<f64>,
}

impl NetRotationTables {
    /// Largest entrywise gap between formula and product, over both paths.
    pub fn formula_error(&self) -> f64 {
        self.original_formula
            .max_abs_diff(&self.original_product)
            .max(self.replacement_formula.max_abs_diff(&self.replacement_product))
    }

    /// Largest entrywise gap between the replacement and original formulas.
    pub fn closure_error(&self) -> f64 {
        self.replacement_formula.max_abs_diff(&self.original_formula)
    }
}

// [[x11,x12,x13],[-x12,x22,x23],[x13,-x23,x33]]
fn layout_three(x: [f64; 6]) -> Rot3<f64> {
    let [x11, x12, x13, x22, x23, x33] = x;
    Rot3::from_rows([[x11, x12, x13], [-x12, x22, x23], [x13, -x23, x33]])
}

// [[x11,x12,x13],[-x12,x22,x23],[-x13,x23,x33]]
fn layout_four(x: [f64; 6]) -> Rot3<f64> {
    let [x11, x12, x13, x22, x23, x33] = x;
    Rot3::from_rows([[x11, x12, x13], [-x12, x22, x23], [-x13, x23, x33]])
}

fn three_turn_original(r: f64, beta: f64) -> Rot3<f64> {
    let (cb, sb) = (beta.cos(), beta.sin());
    let q = (1.0 - r * r).sqrt();
    let r2 = r * r;
    layout_three([
        (1.0 - 4.0 * r2).powi(2) * (1.0 - r2) - r2 * (3.0 - 4.0 * r2).powi(2) * cb,
        r * (4.0 * r2 - 3.0) * sb,
        r * q * (4.0 * r2 - 1.0) * (4.0 * r2 - 3.0) * (1.0 + cb),
        -cb,
        q * (4.0 * r2 - 1.0) * sb,
        r2 * (3.0 - 4.0 * r2).powi(2) - (4.0 * r2 - 1.0).powi(2) * (1.0 - r2) * cb,
    ])
}

fn three_turn_replacement(r: f64, beta: f64, phi: f64) -> Rot3<f64> {
    let (cb, sb, c, s) = (beta.cos(), beta.sin(), phi.cos(), phi.sin());
    let q = (1.0 - r * r).sqrt();
    let r2 = r * r;
    let r3 = r2 * r;
    let a11 = (2.0 * r2 - 1.0).powi(2) * (1.0 - r2) - 4.0 * r2 * (1.0 - r2).powi(2) * cb
        + 4.0 * r2 * (1.0 - r2) * (1.0 - 2.0 * r2) * (1.0 + cb) * c
        + 4.0 * r2 * (r2 - 1.0) * sb * s
        + r2 * cb * s * s
        + (4.0 * r2 * r2 * (1.0 - r2) - r2 * (2.0 * r2 - 1.0).powi(2) * cb) * c * c
        + 2.0 * r2 * (1.0 - 2.0 * r2) * sb * s * c;
    let a12 = 2.0 * r * (1.0 - r2) * (2.0 * r2 - 1.0) * (1.0 + cb) * s
        + 2.0 * r * (r2 - 1.0) * sb * c
        + r * (2.0 * r2 - 1.0) * sb * s * s
        - r * sb * (2.0 * r2 - 1.0) * c * c
        + 2.0 * (-2.0 * r3 * (1.0 - r2) + r * cb * (2.0 * r2 * r2 - 2.0 * r2 + 1.0)) * s * c;
    let a13 = (2.0 * r2 - 1.0).powi(2) * r * q - 4.0 * r3 * (1.0 - r2).powf(1.5) * cb
        - 2.0 * r * q * (2.0 * r2 - 1.0).powi(2) * (1.0 + cb) * c
        - 2.0 * r * q * (2.0 * r2 - 1.0) * sb * s
        + 2.0 * r * q * (2.0 * r2 - 1.0) * sb * s * c
        - r * q * cb * s * s
        + ((2.0 * r2 - 1.0).powi(2) * r * q * cb - 4.0 * r3 * (1.0 - r2).powf(1.5)) * c * c;
    let a22 = 4.0 * r2 * s * s * (r2 - 1.0)
        + cb * (-c * c + (1.0 - 2.0 * r2).powi(2) * s * s)
        + 2.0 * sb * s * c * (1.0 - 2.0 * r2);
    let a23 = 2.0 * r2 * q * ((1.0 - 2.0 * r2) * (1.0 + cb) * s + sb * c)
        - (1.0 - 2.0 * r2) * q * sb * (s * s - c * c)
        + q * (-4.0 * r2 * (1.0 - r2) + (1.0 + (1.0 - 2.0 * r2).powi(2)) * cb) * s * c;
    let a33 = r2 * (2.0 * r2 - 1.0).powi(2) + 4.0 * r2 * r2 * (r2 - 1.0) * cb
        + 4.0 * r2 * (1.0 - r2) * (2.0 * r2 - 1.0) * (1.0 + cb) * c
        + 4.0 * r2 * (1.0 - r2) * sb * s
        + (1.0 - r2) * (4.0 * r2 * (1.0 - r2) - (2.0 * r2 - 1.0).powi(2) * cb) * c * c
        + (1.0 - r2) * cb * s * s
        + 2.0 * sb * (1.0 - r2) * (1.0 - 2.0 * r2) * s * c;
    layout_three([a11, a12, a13, a22, a23, a33])
}

fn four_turn_original(r: f64, beta: f64) -> Rot3<f64> {
    let (cb, sb, c2b) = (beta.cos(), beta.sin(), (2.0 * beta).cos());
    let q = (1.0 - r * r).sqrt();
    let r2 = r * r;
    let (r4, r6, r8) = (r2 * r2, r2 * r2 * r2, r2 * r2 * r2 * r2);
    layout_four([
        1.0 - 20.0 * r2 + 75.0 * r4 - 104.0 * r6 + 48.0 * r8
            + 4.0 * r2 * (16.0 * r6 - 32.0 * r4 + 19.0 * r2 - 3.0) * cb
            + r4 * (3.0 - 4.0 * r2).powi(2) * c2b,
        -2.0 * r * (1.0 - 5.0 * r2 + 4.0 * r4 + r2 * (-3.0 + 4.0 * r2) * cb) * sb,
        r * q
            * (-6.0 + 41.0 * r2 - 80.0 * r4 + 48.0 * r6
                + (-2.0 + 36.0 * r2 - 96.0 * r4 + 64.0 * r6) * cb
                + r2 * (3.0 - 16.0 * r2 + 16.0 * r4) * c2b),
        1.0 - r2 + r2 * c2b,
        2.0 * r2 * q * (4.0 * r2 - 3.0 + (4.0 * r2 - 1.0) * cb) * sb,
        1.0 - 19.0 * r2 + 75.0 * r4 - 104.0 * r6 + 48.0 * r8
            + 4.0 * r2 * (-3.0 + 19.0 * r2 - 32.0 * r4 + 16.0 * r6) * cb
            + r2 * (1.0 - 4.0 * r2).powi(2) * (r2 - 1.0) * c2b,
    ])
}

fn four_turn_replacement(r: f64, beta: f64, phi: f64) -> Rot3<f64> {
    let (cb, sb, c2b) = (beta.cos(), beta.sin(), (2.0 * beta).cos());
    let (s, c, c2p) = (phi.sin(), phi.cos(), (2.0 * phi).cos());
    let q = (1.0 - r * r).sqrt();
    let r2 = r * r;
    let r3 = r2 * r;
    let (r4, r6, r8) = (r2 * r2, r2 * r2 * r2, r2 * r2 * r2 * r2);
    let e11 = 1.0 - 12.0 * r2 + 35.0 * r4 - 42.0 * r6 + 18.0 * r8
        + 4.0 * r2 * (-2.0 + 9.0 * r2 - 13.0 * r4 + 6.0 * r6) * cb
        + 2.0 * r4 * (3.0 * r2 - 2.0) * (r2 - 1.0) * c2b
        - 4.0 * r2 * (r2 - 1.0) * sb * ((2.0 * r2 - 1.0) + 2.0 * r2 * cb) * s
        - 4.0 * r2 * (r2 - 1.0)
            * ((2.0 * r2 - 1.0) * ((3.0 * r2 - 2.0) + r2 * c2b) + (8.0 * r4 - 8.0 * r2 + 1.0) * cb)
            * c
        + r4 * (2.0 * (3.0 * r2 - 2.0) * (r2 - 1.0)
            + 4.0 * (2.0 * r2 - 1.0) * (r2 - 1.0) * cb
            + (1.0 - 2.0 * r2 + 2.0 * r4) * c2b)
            * (c * c - s * s)
        + 4.0 * r4 * sb * (2.0 * (r2 - 1.0) + (2.0 * r2 - 1.0) * cb) * s * c;
    let e12 = 2.0 * r
        * (-2.0 + 9.0 * r2 - 13.0 * r4 + 6.0 * r6
            + (-1.0 + 9.0 * r2 - 16.0 * r4 + 8.0 * r6) * cb
            + r2 * (1.0 - 3.0 * r2 + 2.0 * r4) * c2b)
        * s
        + 2.0 * r * (-1.0 + 3.0 * r2 - 2.0 * r4 + 2.0 * r2 * (1.0 - r2) * cb) * sb * c
        + 2.0 * r3 * sb * (2.0 * (r2 - 1.0) + (2.0 * r2 - 1.0) * cb) * (c * c - s * s)
        + 2.0 * r3
            * (-4.0 + 10.0 * r2 - 6.0 * r4 + (-4.0 + 12.0 * r2 - 8.0 * r4) * cb
                + (-1.0 + 2.0 * r2 - 2.0 * r4) * c2b)
            * s
            * c;
    let e13 = r * q
        * (-2.0 + 15.0 * r2 - 30.0 * r4 + 18.0 * r6
            + 12.0 * r2 * (1.0 - 3.0 * r2 + 2.0 * r4) * cb
            + 6.0 * r4 * (r2 - 1.0) * c2b)
        + 2.0 * r * q * (-1.0 + 4.0 * r2 - 4.0 * r4 + 2.0 * r2 * (1.0 - 2.0 * r2) * cb) * sb * s
        + 2.0 * r * q
            * (2.0 - 11.0 * r2 + 20.0 * r4 - 12.0 * r6
                + (1.0 - 10.0 * r2 + 24.0 * r4 - 16.0 * r6) * cb
                + r2 * (-1.0 + 4.0 * r2 - 4.0 * r4) * c2b)
            * c
        + r3 * q * c2p
            * (4.0 - 10.0 * r2 + 6.0 * r4 + 4.0 * (1.0 - 3.0 * r2 + 2.0 * r4) * cb
                + (1.0 - 2.0 * r2 + 2.0 * r4) * c2b)
        + 4.0 * r3 * q * (2.0 * (r2 - 1.0) + (2.0 * r2 - 1.0) * cb) * sb * s * c;
    let e22 = 1.0 - 5.0 * r2 + 10.0 * r4 - 6.0 * r6
        - 4.0 * r2 * (2.0 * r2 - 1.0) * (r2 - 1.0) * cb
        + 2.0 * r4 * (1.0 - r2) * c2b
        + 4.0 * r4 * (r2 - 1.0) * (beta - 2.0 * phi).cos()
        + 2.0 * r2 * (3.0 * r2 - 2.0) * (r2 - 1.0) * c2p
        + r6 * (2.0 * beta - 2.0 * phi).cos()
        + r2 * (r2 - 1.0).powi(2) * (2.0 * beta + 2.0 * phi).cos()
        + 4.0 * r2 * (r2 - 1.0).powi(2) * (beta + 2.0 * phi).cos();
    let e23 = 2.0 * r2 * q * (2.0 * r2 - 1.0 + 2.0 * r2 * cb) * sb * c
        + 2.0 * r2 * q * s
            * (-2.0 + 7.0 * r2 - 6.0 * r4 + (-1.0 + 8.0 * r2 - 8.0 * r4) * cb
                + r2 * (1.0 - 2.0 * r2) * c2b)
        + 2.0 * r2 * q * (c * c - s * s) * sb * (2.0 * (1.0 - r2) + (1.0 - 2.0 * r2) * cb)
        + 2.0 * r2 * q * s * c
            * (4.0 - 10.0 * r2 + 6.0 * r4 + (4.0 - 12.0 * r2 + 8.0 * r4) * cb
                + (1.0 - 2.0 * r2 + 2.0 * r4) * c2b);
    let e33 = 1.0 - 7.0 * r2 + 25.0 * r4 - 36.0 * r6 + 18.0 * r8
        + 4.0 * r2 * (-1.0 + 6.0 * r2 - 11.0 * r4 + 6.0 * r6) * cb
        + 2.0 * r4 * (1.0 - 4.0 * r2 + 3.0 * r4) * c2b
        + 4.0 * r2 * (-1.0 + 3.0 * r2 - 2.0 * r4 + 2.0 * r2 * (1.0 - r2) * cb) * sb * s
        + 4.0 * r2
            * (2.0 - 9.0 * r2 + 13.0 * r4 - 6.0 * r6
                + (1.0 - 9.0 * r2 + 16.0 * r4 - 8.0 * r6) * cb
                + r2 * (-1.0 + 3.0 * r2 - 2.0 * r4) * c2b)
            * c
        + r2 * (-4.0 + 14.0 * r2 - 16.0 * r4 + 6.0 * r6
            + 4.0 * (-1.0 + 4.0 * r2 - 5.0 * r4 + 2.0 * r6) * cb
            + (-1.0 + 3.0 * r2 - 4.0 * r4 + 2.0 * r6) * c2b)
            * c2p
        + 4.0 * r2 * (2.0 - 4.0 * r2 + 2.0 * r4 + (1.0 - 3.0 * r2 + 2.0 * r4) * cb) * sb * s * c;
    layout_four([e11, e12, e13, e22, e23, e33])
}

/// Checks that `r` lies in the regime of `variant`.
pub fn check_regime(variant: ChainVariant, r: f64) -> Result<()> {
    let ok = match variant {
        ChainVariant::ThreeTurn => r > 0.0 && r <= FRAC_1_SQRT_2,
        ChainVariant::FourTurn => r > FRAC_1_SQRT_2 && r <= max_radius::<f64>(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRegime(format!("r = {r} is outside the regime of {variant:?}")))
    }
}

/// Replacement angle in closed form: `(sin φ, cos φ)` from the rational
/// expressions in `d(r, β)` and `g(r, β)`.
pub fn closed_form_phi(variant: ChainVariant, r: f64, beta: f64) -> (f64, f64) {
    let r2 = r * r;
    let (cb, sb) = (beta.cos(), beta.sin());
    match variant {
        ChainVariant::ThreeTurn => {
            let d = 1.0 - 2.0 * r2 * (1.0 - r2) * (1.0 + cb);
            let s = sb * (1.0 - 2.0 * r2) / d;
            let c = -(4.0 * r2 * (r2 - 1.0) + cb * (1.0 + (1.0 - 2.0 * r2).powi(2))) / (2.0 * d);
            (s, c)
        }
        ChainVariant::FourTurn => {
            let c2b = (2.0 * beta).cos();
            let g = 5.0 - 10.0 * r2 + 6.0 * r2 * r2 + 4.0 * (2.0 * r2 - 1.0) * (r2 - 1.0) * cb
                - 2.0 * r2 * (1.0 - r2) * c2b;
            let big_c = 2.0 * (3.0 * r2 - 2.0) * (r2 - 1.0)
                + 4.0 * (2.0 * r2 - 1.0) * (r2 - 1.0) * cb
                + (2.0 * r2 * r2 - 2.0 * r2 + 1.0) * c2b;
            let big_d = 2.0 * sb * (2.0 * (r2 - 1.0) + (2.0 * r2 - 1.0) * cb);
            (-big_d / g, -big_c / g)
        }
    }
}

/// Evaluates the entry formulas and the rotation products for `(r, β, φ)`.
pub fn net_rotation_products(variant: ChainVariant, r: f64, beta: f64, phi: f64) -> Result<NetRotationTables> {
    check_regime(variant, r)?;
    let geom = TurnGeometry::from_radius(r)?;
    Ok(match variant {
        ChainVariant::ThreeTurn => NetRotationTables {
            original_formula: three_turn_original(r, beta),
            original_product: compose_raw(&[L, R, L], &[PI, PI + beta, PI], &geom),
            replacement_formula: three_turn_replacement(r, beta, phi),
            replacement_product: compose_raw(&[L, R, L], &[phi, PI - beta, phi], &geom),
        },
        ChainVariant::FourTurn => NetRotationTables {
            original_formula: four_turn_original(r, beta),
            original_product: compose_raw(&[L, R, L, R], &[PI, PI + beta, PI + beta, PI], &geom),
            replacement_formula: four_turn_replacement(r, beta, phi),
            replacement_product: compose_raw(&[L, R, L, R], &[phi, PI - beta, PI - beta, phi], &geom),
        },
    })
}
