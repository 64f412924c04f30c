//! The adapted base-change group and its action on `TLeib` parameters.
//!
//! An adapted transform is determined by the images of the first two basis
//! vectors,
//!
//! ```text
//! f(e_0) = A_0 e_0 + A_1 e_1 + ... + A_n e_n        (A = [A_0, ..., A_n])
//! f(e_1) =           B_1 e_1 + ... + B_n e_n        (B = [B_1, ..., B_n])
//! ```
//!
//! and extends along the filiform spine by `f(e_i) = [f(e_{i-1}), f(e_0)]`.
//! It is invertible precisely when `A_0 * B_1 * (A_0 + A_1 * b) != 0`, where
//! `b = 0` in dimension 5 and `b = b23` in dimension 6.
//!
//! The induced action on `TLeib` parameters is computed two independent
//! ways:
//!
//! * [`transform_params_closed5`] / [`transform_params_closed6`] — closed
//!   formulas, rational in the leading coefficients `A_0, A_1, B_1`
//!   (plus `B_2, B_3` in dimension 6);
//! * [`transform_params_oracle`] — extend the basis, re-express all brackets
//!   by solving exact linear systems, and pattern-match the resulting table
//!   against the `TLeib` template.
//!
//! The two routes are verified against each other by the test suite; the
//! oracle makes no use of the closed formulas.

use crate::algebra::{AlgebraError, AlgebraTable, Vector};
use crate::families::{build_tleib5, build_tleib6, TLeib5Params, TLeib6Params, TLeibParams};
use crate::linalg::{Matrix, RANK_PIVOT_TOL};
use crate::sample::{rng_from_seed, small_scalar};
use crate::scalar::{Scalar, ScalarMode, ZeroTest};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for template matching and residual checks in `Approx`
/// mode.
pub const TEMPLATE_TOL: f64 = 1e-9;

/// Retry cap for rejection sampling of nonsingular transforms.
pub const RANDOM_ADAPTED_MAX_TRIES: usize = 1000;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("adapted transform needs |A| = dim and |B| = dim - 1, got |A| = {a_len}, |B| = {b_len}")]
    Shape { a_len: usize, b_len: usize },
    #[error("transform dimension {transform} does not match algebra dimension {algebra}")]
    DimensionMismatch { transform: usize, algebra: usize },
    #[error("singular adapted transform: A0 * B1 * (A0 + A1*b) = 0")]
    SingularTransform,
    #[error("transformed table does not match the TLeib template: {0}")]
    TemplateMismatch(String),
    #[error("no nonsingular adapted transform found in {0} attempts")]
    SamplingExhausted(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An adapted base change, stored through its defining coefficient rows.
/// Serialized as `{"A": [...], "B": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptedTransform {
    #[serde(rename = "A")]
    pub a: Vec<Scalar>,
    #[serde(rename = "B")]
    pub b: Vec<Scalar>,
}

impl AdaptedTransform {
    pub fn new(a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self, TransformError> {
        if a.len() < 2 || b.len() + 1 != a.len() {
            return Err(TransformError::Shape {
                a_len: a.len(),
                b_len: b.len(),
            });
        }
        Ok(AdaptedTransform { a, b })
    }

    /// The transform with leading coefficients `A0, A1, B1, B2, B3` and all
    /// higher coefficients zero (only these enter the parameter action).
    pub fn from_leading(dim: usize, leading_a: &[Scalar], leading_b: &[Scalar]) -> Self {
        let mut a = vec![Scalar::zero(); dim];
        let mut b = vec![Scalar::zero(); dim - 1];
        for (slot, value) in a.iter_mut().zip(leading_a) {
            *slot = value.clone();
        }
        for (slot, value) in b.iter_mut().zip(leading_b) {
            *slot = value.clone();
        }
        AdaptedTransform { a, b }
    }

    pub fn identity(dim: usize) -> Self {
        AdaptedTransform::from_leading(dim, &[Scalar::one()], &[Scalar::one()])
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a0(&self) -> &Scalar {
        &self.a[0]
    }

    pub fn a1(&self) -> &Scalar {
        &self.a[1]
    }

    pub fn b1(&self) -> &Scalar {
        &self.b[0]
    }

    pub fn mode(&self) -> ScalarMode {
        if self.a.iter().chain(&self.b).all(Scalar::is_exact) {
            ScalarMode::Exact
        } else {
            ScalarMode::Approx
        }
    }

    /// Demotes every coefficient to `Approx` if any coefficient already is,
    /// so a transform is uniformly exact or uniformly numeric.
    pub fn unify_mode(self) -> Self {
        if self.mode() == ScalarMode::Exact {
            self
        } else {
            AdaptedTransform {
                a: self.a.iter().map(Scalar::to_approx).collect(),
                b: self.b.iter().map(Scalar::to_approx).collect(),
            }
        }
    }

    pub fn to_approx(&self) -> Self {
        AdaptedTransform {
            a: self.a.iter().map(Scalar::to_approx).collect(),
            b: self.b.iter().map(Scalar::to_approx).collect(),
        }
    }

    /// Nonsingularity of the base change on the parameter point `p`:
    /// `A0 != 0`, `B1 != 0` and `A0 + A1 * b != 0`.
    pub fn is_applicable(&self, p: &TLeibParams, zt: &ZeroTest) -> bool {
        let pivot = &(self.a0() + &(self.a1() * &p.b_last()));
        !zt.is_zero(self.a0()) && !zt.is_zero(self.b1()) && !zt.is_zero(pivot)
    }
}

/// Rows `f(e_0), ..., f(e_{n-1})` in the coordinates of the original basis:
/// the first two rows are the defining coefficients, the rest follow the
/// spine recursion `f(e_i) = [f(e_{i-1}), f(e_0)]`.
pub fn extend_basis(
    t: &AdaptedTransform,
    table: &AlgebraTable,
) -> Result<Matrix, TransformError> {
    let dim = table.dim();
    if t.dim() != dim {
        return Err(TransformError::DimensionMismatch {
            transform: t.dim(),
            algebra: dim,
        });
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(dim);
    rows.push(t.a.clone());
    let mut row1 = vec![Scalar::zero()];
    row1.extend(t.b.iter().cloned());
    rows.push(row1);
    for i in 2..dim {
        let prev = Vector(rows[i - 1].clone());
        let f0 = Vector(rows[0].clone());
        rows.push(table.product(&prev, &f0)?.0);
    }
    Ok(Matrix::from_rows(rows))
}

/// Compares a computed table against the `TLeib` template rebuilt from its
/// extracted parameter slots; any deviation (exact, or beyond the relative
/// template tolerance in `Approx` mode) is a mismatch.
fn match_template(actual: &AlgebraTable, template: &AlgebraTable) -> Result<(), TransformError> {
    let exact =
        actual.mode() == ScalarMode::Exact && template.mode() == ScalarMode::Exact;
    let scale = actual.max_abs().max(1.0);
    let dim = actual.dim();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let got = actual.get(i, j, k);
                let want = template.get(i, j, k);
                let ok = if exact {
                    got == want
                } else {
                    (got.to_complex() - want.to_complex()).norm() <= TEMPLATE_TOL * scale
                };
                if !ok {
                    return Err(TransformError::TemplateMismatch(format!(
                        "entry ({i},{j},{k}) is {got}, template requires {want}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Independent oracle for the parameter action: extends the basis, solves
/// for every structure constant of the transformed table by exact (or
/// pivoted numeric) elimination, and reads the new `TLeib` tuple off the
/// template.  A table that fails the template is an assertion-grade error —
/// adapted transforms must map `TLeib` to `TLeib`.
pub fn transform_params_oracle(
    p: &TLeibParams,
    t: &AdaptedTransform,
) -> Result<TLeibParams, TransformError> {
    if !t.is_applicable(p, &ZeroTest::default()) {
        return Err(TransformError::SingularTransform);
    }
    let table = p.build();
    let basis = extend_basis(t, &table)?;
    let inv = basis
        .inverse(RANK_PIVOT_TOL)
        .ok_or(TransformError::SingularTransform)?;
    let dim = table.dim();
    let mut transformed = AlgebraTable::new(dim);
    for x in 0..dim {
        for y in 0..dim {
            let w = table.product(&Vector(basis.row(x).to_vec()), &Vector(basis.row(y).to_vec()))?;
            // w = c * basis, so the new coordinates are c = w * basis^{-1}.
            let c = Matrix::row_vec_mul(&w.0, &inv);
            for (k, value) in c.into_iter().enumerate() {
                transformed.set(x, y, k, value);
            }
        }
    }
    let top = dim - 1;
    let params = match dim {
        5 => TLeibParams::Five(TLeib5Params::new(
            transformed.get(0, 0, top).clone(),
            transformed.get(0, 1, top).clone(),
            transformed.get(1, 1, top).clone(),
            transformed.get(1, 2, 4).clone(),
        )),
        _ => TLeibParams::Six(TLeib6Params::new(
            transformed.get(0, 0, top).clone(),
            transformed.get(0, 1, top).clone(),
            transformed.get(1, 1, top).clone(),
            transformed.get(1, 2, 4).clone(),
            transformed.get(1, 2, 5).clone(),
            transformed.get(2, 3, 5).clone(),
        )),
    };
    let template = match &params {
        TLeibParams::Five(p5) => build_tleib5(p5),
        TLeibParams::Six(p6) => build_tleib6(p6),
    };
    match_template(&transformed, &template)?;
    Ok(params)
}

fn nonzero(s: &Scalar) -> Result<(), TransformError> {
    if ZeroTest::default().is_zero(s) {
        Err(TransformError::SingularTransform)
    } else {
        Ok(())
    }
}

fn checked_div(num: &Scalar, den: &Scalar) -> Result<Scalar, TransformError> {
    num.div(den).map_err(|_| TransformError::SingularTransform)
}

/// Closed-form parameter action in dimension 5.  Only `A0, A1, B1` enter:
///
/// ```text
/// b00' = (A0^2 b00 + A0 A1 b01 + A1^2 b11) / (A0^3 B1)
/// b01' = (A0 b01 + 2 A1 b11) / A0^3
/// b11' = B1 b11 / A0^3
/// b12' = B1 b12 / A0^2
/// ```
pub fn transform_params_closed5(
    p: &TLeib5Params,
    a0: &Scalar,
    a1: &Scalar,
    b1: &Scalar,
) -> Result<TLeib5Params, TransformError> {
    nonzero(a0)?;
    nonzero(b1)?;
    let a0sq = a0 * a0;
    let a0cb = &a0sq * a0;
    let two = Scalar::from_int(2);
    let num00 = &(&(&a0sq * &p.b00) + &(&(a0 * a1) * &p.b01)) + &(&(a1 * a1) * &p.b11);
    Ok(TLeib5Params::new(
        checked_div(&num00, &(&a0cb * b1))?,
        checked_div(&(&(a0 * &p.b01) + &(&(&two * a1) * &p.b11)), &a0cb)?,
        checked_div(&(b1 * &p.b11), &a0cb)?,
        checked_div(&(b1 * &p.b12), &a0sq)?,
    ))
}

/// Closed-form parameter action in dimension 6.  Only `A0, A1, B1, B2, B3`
/// enter; write `s = A0 + A1 b23`:
///
/// ```text
/// b00' = (A0^2 b00 + A0 A1 b01 + A1^2 b11) / (A0^3 B1 s)
/// b01' = (A0 b01 + 2 A1 b11) / (A0^3 s)
/// b11' = B1 b11 / (A0^3 s)
/// b12' = B1 b12 / A0^2
/// b13' = (2 A0 A1 B1^2 b12^2 + A0^2 B1^2 b13
///         + (A0^2 (B2^2 - 2 B1 B3) + A1^2 B1^2 b12^2) b23) / (A0^4 B1 s)
/// b23' = B1 b23 / s
/// ```
#[allow(clippy::too_many_arguments)]
pub fn transform_params_closed6(
    p: &TLeib6Params,
    a0: &Scalar,
    a1: &Scalar,
    b1: &Scalar,
    b2: &Scalar,
    b3: &Scalar,
) -> Result<TLeib6Params, TransformError> {
    nonzero(a0)?;
    nonzero(b1)?;
    let s = &(a0 + &(a1 * &p.b23));
    nonzero(s)?;
    let two = Scalar::from_int(2);
    let a0sq = a0 * a0;
    let a0cb = &a0sq * a0;
    let a0q = &a0sq * &a0sq;
    let b1sq = b1 * b1;
    let b12sq = &p.b12 * &p.b12;
    let num00 = &(&(&a0sq * &p.b00) + &(&(a0 * a1) * &p.b01)) + &(&(a1 * a1) * &p.b11);
    let num13 = &(&(&(&(&two * a0) * a1) * &b1sq) * &b12sq)
        + &(&(&(&a0sq * &b1sq) * &p.b13)
            + &(&(&(&a0sq * &(&(b2 * b2) - &(&(&two * b1) * b3)))
                + &(&(a1 * a1) * &(&b1sq * &b12sq)))
                * &p.b23));
    Ok(TLeib6Params::new(
        checked_div(&num00, &(&(&a0cb * b1) * s))?,
        checked_div(&(&(a0 * &p.b01) + &(&(&two * a1) * &p.b11)), &(&a0cb * s))?,
        checked_div(&(b1 * &p.b11), &(&a0cb * s))?,
        checked_div(&(b1 * &p.b12), &a0sq)?,
        checked_div(&num13, &(&(&a0q * b1) * s))?,
        checked_div(&(b1 * &p.b23), s)?,
    ))
}

/// Closed-form action for either dimension, reading the leading coefficients
/// from the transform (higher coefficients do not affect the parameters).
pub fn transform_params_closed(
    p: &TLeibParams,
    t: &AdaptedTransform,
) -> Result<TLeibParams, TransformError> {
    if t.dim() != p.dim() {
        return Err(TransformError::DimensionMismatch {
            transform: t.dim(),
            algebra: p.dim(),
        });
    }
    match p {
        TLeibParams::Five(p5) => Ok(TLeibParams::Five(transform_params_closed5(
            p5,
            t.a0(),
            t.a1(),
            t.b1(),
        )?)),
        TLeibParams::Six(p6) => Ok(TLeibParams::Six(transform_params_closed6(
            p6,
            t.a0(),
            t.a1(),
            t.b1(),
            &t.b[1],
            &t.b[2],
        )?)),
    }
}

/// Seeded rejection sampling of a random adapted transform that is
/// nonsingular on `p`: every coefficient is a small Gaussian rational, and
/// candidates are redrawn (up to a fixed cap) until
/// `A0 * B1 * (A0 + A1*b) != 0`.
pub fn random_adapted(
    dim: usize,
    p: &TLeibParams,
    seed: u64,
) -> Result<AdaptedTransform, TransformError> {
    if dim != p.dim() {
        return Err(TransformError::DimensionMismatch {
            transform: dim,
            algebra: p.dim(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let zt = ZeroTest::default();
    for _ in 0..RANDOM_ADAPTED_MAX_TRIES {
        let a: Vec<Scalar> = (0..dim).map(|_| small_scalar(&mut rng)).collect();
        let b: Vec<Scalar> = (0..dim - 1).map(|_| small_scalar(&mut rng)).collect();
        let t = AdaptedTransform { a, b };
        if t.is_applicable(p, &zt) {
            return Ok(t);
        }
    }
    Err(TransformError::SamplingExhausted(RANDOM_ADAPTED_MAX_TRIES))
}

/// Reads an adapted transform off a basis matrix: `A` is the first row and
/// `B` the first row of the `e_1` image past its (always zero) `e_0`
/// coefficient.
fn transform_from_matrix(m: &Matrix) -> AdaptedTransform {
    AdaptedTransform {
        a: m.row(0).to_vec(),
        b: m.row(1)[1..].to_vec(),
    }
}

/// Composition `second ∘ first` as a single adapted transform over `p`'s
/// basis: if `first` carries `p` to `p1` and `second` carries `p1` onward,
/// the result carries `p` directly to `second`'s target.
pub fn compose(
    p: &TLeibParams,
    first: &AdaptedTransform,
    second: &AdaptedTransform,
) -> Result<AdaptedTransform, TransformError> {
    let m1 = extend_basis(first, &p.build())?;
    let p1 = transform_params_oracle(p, first)?;
    if !second.is_applicable(&p1, &ZeroTest::default()) {
        return Err(TransformError::SingularTransform);
    }
    let m2 = extend_basis(second, &p1.build())?;
    // Rows of m2 are in p1-coordinates; rewrite them over p's basis.
    Ok(transform_from_matrix(&m2.mul(&m1)))
}

/// The inverse base change: carries the algebra `transform(p)` back to `p`.
pub fn invert(
    p: &TLeibParams,
    t: &AdaptedTransform,
) -> Result<AdaptedTransform, TransformError> {
    let m = extend_basis(t, &p.build())?;
    let inv = m
        .inverse(RANK_PIVOT_TOL)
        .ok_or(TransformError::SingularTransform)?;
    Ok(transform_from_matrix(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::TLeib6Params;

    fn shear5() -> AdaptedTransform {
        AdaptedTransform::from_leading(
            5,
            &[Scalar::one(), Scalar::one()],
            &[Scalar::one()],
        )
    }

    #[test]
    fn extension_follows_the_spine() {
        let p = TLeib5Params::from_ints(0, 0, 0, 0);
        let m = extend_basis(&shear5(), &build_tleib5(&p)).unwrap();
        // f(e0) = e0 + e1, f(e1) = e1, and the spine recursion gives
        // f(e_i) = e_i for i >= 2 when all parameters vanish.
        assert_eq!(m.row(0)[0], Scalar::one());
        assert_eq!(m.row(0)[1], Scalar::one());
        for i in 2..5 {
            for k in 0..5 {
                let expected = if i == k { Scalar::one() } else { Scalar::zero() };
                assert_eq!(*m.get(i, k), expected);
            }
        }
    }

    #[test]
    fn oracle_matches_hand_computation() {
        let p = TLeibParams::Five(TLeib5Params::from_ints(1, 2, 1, 1));
        let out = transform_params_oracle(&p, &shear5()).unwrap();
        assert_eq!(
            out,
            TLeibParams::Five(TLeib5Params::from_ints(4, 4, 1, 1))
        );
    }

    #[test]
    fn closed_form_dim6_halves_b23_under_unit_shear() {
        let p = TLeib6Params::from_ints(0, 0, 0, 0, 0, 1);
        let out = transform_params_closed6(
            &p,
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::zero(),
            &Scalar::zero(),
        )
        .unwrap();
        assert_eq!(out, TLeib6Params::new(
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::ratio(1, 2),
        ));
    }

    #[test]
    fn singular_transforms_are_rejected() {
        let p = TLeibParams::Five(TLeib5Params::from_ints(1, 0, 1, 0));
        let mut t = AdaptedTransform::identity(5);
        t.a[0] = Scalar::zero();
        assert!(matches!(
            transform_params_oracle(&p, &t),
            Err(TransformError::SingularTransform)
        ));
        // Dimension-6 pivot: A0 + A1*b23 = 0.
        let p6 = TLeibParams::Six(TLeib6Params::from_ints(0, 0, 0, 0, 0, 1));
        let t6 = AdaptedTransform::from_leading(
            6,
            &[Scalar::one(), Scalar::from_int(-1)],
            &[Scalar::one()],
        );
        assert!(matches!(
            transform_params_closed(&p6, &t6),
            Err(TransformError::SingularTransform)
        ));
    }

    #[test]
    fn inverse_composes_to_identity_action() {
        let p = TLeibParams::Six(TLeib6Params::from_ints(2, 1, 3, 1, 0, 2));
        let t = random_adapted(6, &p, 11).unwrap();
        let q = transform_params_oracle(&p, &t).unwrap();
        let back = invert(&p, &t).unwrap();
        assert_eq!(transform_params_oracle(&q, &back).unwrap(), p);
    }

    #[test]
    fn random_adapted_is_deterministic_and_applicable() {
        let p = TLeibParams::Five(TLeib5Params::from_ints(0, 0, 0, 0));
        let t1 = random_adapted(5, &p, 99).unwrap();
        let t2 = random_adapted(5, &p, 99).unwrap();
        assert_eq!(t1, t2);
        assert!(t1.is_applicable(&p, &ZeroTest::default()));
    }

    #[test]
    fn transform_serialization_shape() {
        let t = shear5();
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.starts_with("{\"A\":"));
        let back: AdaptedTransform = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
    }
}
