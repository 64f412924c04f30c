//! Complete orbit classification of `TLeib` in dimensions 5 and 6.
//!
//! The adapted base-change action partitions the `TLeib_5` parameter space
//! into nine subsets `U5_1 .. U5_9` and the `TLeib_6` space into nineteen
//! subsets `U6_1 .. U6_19`, decided by exact zero tests on the parameters
//! and the discriminant `Delta = 4 b00 b11 - b01^2`.  Six subsets are
//! one-parameter (or two-parameter) orbit families separated by rational
//! orbit invariants; the remaining twenty-two subsets are single orbits.
//!
//! For every parameter point the classifier produces:
//!
//! * the subset label;
//! * the values of the subset's orbit invariants (none for single orbits);
//! * a canonical representative, chosen deterministically from the
//!   invariants via principal roots;
//! * an explicit adapted transform (*witness*) carrying the point onto the
//!   canonical representative.
//!
//! Two loci require care: inside `U6_1` the locus `2 b11 - b01 b23 = 0` and
//! inside `U6_2` the locus `b01 - b23 b00 = 0` are themselves invariant
//! under the group action, and on them the invariant denominators vanish.
//! Points there are flagged as *degenerate strata*: the affected invariant
//! carries no value and no canonical form is emitted.

use crate::families::{TLeib5Params, TLeib6Params, TLeibParams};
use crate::linalg::RANK_PIVOT_TOL;
use crate::scalar::{Scalar, ZeroTest};
use crate::transform::{
    extend_basis, transform_params_closed, AdaptedTransform, TransformError, TEMPLATE_TOL,
};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("label {0} names a single orbit and takes no invariant targets")]
    NotParametric(OrbitLabel),
    #[error("label {label} takes {expected} invariant target(s), got {got}")]
    WrongTargetCount {
        label: OrbitLabel,
        expected: usize,
        got: usize,
    },
    #[error("unknown orbit label `{0}`")]
    UnknownLabel(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// A subset label `U{dim}_{index}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitLabel {
    pub dim: u8,
    pub index: u8,
}

impl OrbitLabel {
    pub fn new(dim: u8, index: u8) -> Option<Self> {
        let max = match dim {
            5 => 9,
            6 => 19,
            _ => return None,
        };
        (1..=max).contains(&index).then_some(OrbitLabel { dim, index })
    }

    /// All 28 labels, dimension 5 first.
    pub fn all() -> Vec<OrbitLabel> {
        let mut labels: Vec<OrbitLabel> =
            (1..=9).map(|i| OrbitLabel { dim: 5, index: i }).collect();
        labels.extend((1..=19).map(|i| OrbitLabel { dim: 6, index: i }));
        labels
    }

    /// Does the subset contain infinitely many orbits, separated by
    /// invariants?
    pub fn is_parametric(&self) -> bool {
        self.invariant_count() > 0
    }

    /// Number of orbit invariants attached to the subset.
    pub fn invariant_count(&self) -> usize {
        match (self.dim, self.index) {
            (5, 1) => 1,
            (6, 1) => 2,
            (6, 2) => 1,
            (6, 7) => 2,
            (6, 8) => 1,
            (6, 11) => 1,
            _ => 0,
        }
    }

    /// Classical notation, e.g. `U_6^11`.
    pub fn pretty(&self) -> String {
        format!("U_{}^{}", self.dim, self.index)
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}_{}", self.dim, self.index)
    }
}

impl FromStr for OrbitLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        let err = || ClassifyError::UnknownLabel(s.to_string());
        let rest = s.strip_prefix('U').ok_or_else(err)?;
        let (dim, index) = rest.split_once('_').ok_or_else(err)?;
        let dim: u8 = dim.parse().map_err(|_| err())?;
        let index: u8 = index.parse().map_err(|_| err())?;
        OrbitLabel::new(dim, index).ok_or_else(err)
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OrbitLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(|_| {
            de::Error::custom(format!("unknown orbit label `{text}`"))
        })
    }
}

/// The discriminant `Delta = 4 b00 b11 - b01^2`.
pub fn delta(b00: &Scalar, b01: &Scalar, b11: &Scalar) -> Scalar {
    &(&(&Scalar::from_int(4) * b00) * b11) - &(b01 * b01)
}

/// A zero test scaled to the magnitude of a parameter point.
pub fn zero_test_for(p: &TLeibParams, tol: f64) -> ZeroTest {
    ZeroTest::with_scale(tol, p.max_abs())
}

/// Subset decision in dimension 5 (a total partition of the tuple space).
pub fn subset5(p: &TLeib5Params, zt: &ZeroTest) -> OrbitLabel {
    let z = |s: &Scalar| zt.is_zero(s);
    let index = if !z(&p.b11) {
        if !z(&p.b12) {
            1
        } else if !z(&delta(&p.b00, &p.b01, &p.b11)) {
            2
        } else {
            3
        }
    } else if !z(&p.b01) {
        if !z(&p.b12) {
            4
        } else {
            5
        }
    } else if !z(&p.b00) {
        if !z(&p.b12) {
            6
        } else {
            7
        }
    } else if !z(&p.b12) {
        8
    } else {
        9
    };
    OrbitLabel { dim: 5, index }
}

/// Subset decision in dimension 6 (a total partition of the tuple space).
pub fn subset6(p: &TLeib6Params, zt: &ZeroTest) -> OrbitLabel {
    let z = |s: &Scalar| zt.is_zero(s);
    let index = if !z(&p.b23) {
        if !z(&p.b11) {
            1
        } else if !z(&p.b01) {
            2
        } else if !z(&p.b12) {
            if !z(&p.b00) {
                3
            } else {
                4
            }
        } else if !z(&p.b00) {
            5
        } else {
            6
        }
    } else if !z(&p.b12) {
        if !z(&p.b11) {
            7
        } else if !z(&p.b01) {
            8
        } else if !z(&p.b00) {
            9
        } else {
            10
        }
    } else if !z(&p.b11) {
        if !z(&p.b13) {
            11
        } else if !z(&delta(&p.b00, &p.b01, &p.b11)) {
            12
        } else {
            13
        }
    } else if !z(&p.b01) {
        if !z(&p.b13) {
            14
        } else {
            15
        }
    } else if !z(&p.b00) {
        if !z(&p.b13) {
            16
        } else {
            17
        }
    } else if !z(&p.b13) {
        18
    } else {
        19
    };
    OrbitLabel { dim: 6, index }
}

/// One orbit invariant; `value` is `None` on a degenerate stratum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedInvariant {
    pub name: &'static str,
    pub value: Option<Scalar>,
}

fn inv(name: &'static str, value: Scalar) -> NamedInvariant {
    NamedInvariant {
        name,
        value: Some(value),
    }
}

/// Division by a quantity that the subset decision has certified nonzero.
fn q(num: &Scalar, den: &Scalar) -> Scalar {
    num.div(den).expect("denominator is nonzero on this subset")
}

fn pow(s: &Scalar, k: i32) -> Scalar {
    s.pow_int(k).expect("positive power")
}

/// Orbit invariants in dimension 5: `U5_1` carries
/// `I1 = (b12/b11)^4 * Delta`; every other subset is a single orbit.
pub fn invariants5(p: &TLeib5Params, zt: &ZeroTest) -> Vec<NamedInvariant> {
    match subset5(p, zt).index {
        1 => {
            let ratio = q(&p.b12, &p.b11);
            vec![inv(
                "I1",
                &pow(&ratio, 4) * &delta(&p.b00, &p.b01, &p.b11),
            )]
        }
        _ => Vec::new(),
    }
}

/// Orbit invariants in dimension 6, together with the degenerate-stratum
/// reason if the point lies on one.
///
/// * `U6_1`: `I1 = (b23/D)^2 Delta`, `I2 = D^3 b12^3 / (b23^2 b11^4)` with
///   `D = 2 b11 - b01 b23`; on `D = 0` the invariant `I1` carries no value.
/// * `U6_2`: `I1 = E^4 b12^3 / (b23^3 b01^5)` with `E = b01 - b23 b00`; on
///   `E = 0` it carries no value.
/// * `U6_7`: `I1 = (4 b00 b12^4 - 2 b13 b01 b12^2 + b13^2 b11)/(b12 b11^2)`,
///   `I2 = (b01 b12^2 - b13 b11)^2 / (b12 b11^3)`.
/// * `U6_8`: `I1 = (2 b00 b12^2 - b13 b01)^3 / (b12^3 b01^4)`.
/// * `U6_11`: `I1 = (b13/b11)^6 Delta`.
pub fn invariants6(
    p: &TLeib6Params,
    zt: &ZeroTest,
) -> (Vec<NamedInvariant>, Option<String>) {
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    match subset6(p, zt).index {
        1 => {
            let d = &(&two * &p.b11) - &(&p.b01 * &p.b23);
            let i2_num = &pow(&d, 3) * &pow(&p.b12, 3);
            let i2_den = &pow(&p.b23, 2) * &pow(&p.b11, 4);
            let i2 = q(&i2_num, &i2_den);
            if zt.is_zero(&d) {
                (
                    vec![
                        NamedInvariant {
                            name: "I1",
                            value: None,
                        },
                        inv("I2", i2),
                    ],
                    Some("2*b11 - b01*b23 = 0 (transform-invariant locus in U6_1)".to_string()),
                )
            } else {
                let i1 = &pow(&q(&p.b23, &d), 2) * &delta(&p.b00, &p.b01, &p.b11);
                (vec![inv("I1", i1), inv("I2", i2)], None)
            }
        }
        2 => {
            let e = &p.b01 - &(&p.b23 * &p.b00);
            if zt.is_zero(&e) {
                (
                    vec![NamedInvariant {
                        name: "I1",
                        value: None,
                    }],
                    Some("b01 - b23*b00 = 0 (transform-invariant locus in U6_2)".to_string()),
                )
            } else {
                let num = &pow(&e, 4) * &pow(&p.b12, 3);
                let den = &pow(&p.b23, 3) * &pow(&p.b01, 5);
                (vec![inv("I1", q(&num, &den))], None)
            }
        }
        7 => {
            let n1 = &(&(&four * &(&p.b00 * &pow(&p.b12, 4)))
                - &(&(&two * &(&p.b13 * &p.b01)) * &pow(&p.b12, 2)))
                + &(&pow(&p.b13, 2) * &p.b11);
            let i1 = q(&n1, &(&p.b12 * &pow(&p.b11, 2)));
            let n2 = pow(&(&(&p.b01 * &pow(&p.b12, 2)) - &(&p.b13 * &p.b11)), 2);
            let i2 = q(&n2, &(&p.b12 * &pow(&p.b11, 3)));
            (vec![inv("I1", i1), inv("I2", i2)], None)
        }
        8 => {
            let n = pow(
                &(&(&(&two * &p.b00) * &pow(&p.b12, 2)) - &(&p.b13 * &p.b01)),
                3,
            );
            let den = &pow(&p.b12, 3) * &pow(&p.b01, 4);
            (vec![inv("I1", q(&n, &den))], None)
        }
        11 => {
            let i = &pow(&q(&p.b13, &p.b11), 6) * &delta(&p.b00, &p.b01, &p.b11);
            (vec![inv("I1", i)], None)
        }
        _ => (Vec::new(), None),
    }
}

fn transform5(a0: Scalar, a1: Scalar, b1: Scalar) -> AdaptedTransform {
    AdaptedTransform::from_leading(5, &[a0, a1], &[b1]).unify_mode()
}

fn transform6(a0: Scalar, a1: Scalar, b1: Scalar, b3: Scalar) -> AdaptedTransform {
    AdaptedTransform::from_leading(6, &[a0, a1], &[b1, Scalar::zero(), b3]).unify_mode()
}

/// Canonical representative and witness in dimension 5.  The witness is the
/// adapted transform carrying `p` onto the canonical tuple; it is exact
/// whenever its recipe is rational in the parameters (`U5_1`, `U5_3`,
/// `U5_7`, `U5_8`, `U5_9`), and uses principal roots otherwise.
pub fn canonical5(
    p: &TLeib5Params,
    zt: &ZeroTest,
) -> (TLeib5Params, AdaptedTransform) {
    let label = subset5(p, zt);
    let zero = Scalar::zero;
    let one = Scalar::one;
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    let d = || delta(&p.b00, &p.b01, &p.b11);
    match label.index {
        1 => {
            let a0 = q(&p.b11, &p.b12);
            let a1 = -&q(&p.b01, &(&two * &p.b12));
            let b1 = q(&pow(&p.b11, 2), &pow(&p.b12, 3));
            let i1 = &pow(&q(&p.b12, &p.b11), 4) * &d();
            let canon = TLeib5Params::new(q(&i1, &four), zero(), one(), one());
            (canon, transform5(a0, a1, b1))
        }
        2 => {
            let a0 = q(&d(), &four).nth_root(4, 0);
            let a1 = -&q(&(&p.b01 * &a0), &(&two * &p.b11));
            let b1 = q(&pow(&a0, 3), &p.b11);
            let canon = TLeib5Params::new(one(), zero(), one(), zero());
            (canon, transform5(a0, a1, b1))
        }
        3 => {
            let a1 = -&q(&p.b01, &(&two * &p.b11));
            let b1 = q(&one(), &p.b11);
            let canon = TLeib5Params::new(zero(), zero(), one(), zero());
            (canon, transform5(one(), a1, b1))
        }
        4 => {
            let a0 = p.b01.nth_root(2, 0);
            let a1 = -&q(&(&a0 * &p.b00), &p.b01);
            let b1 = q(&p.b01, &p.b12);
            let canon = TLeib5Params::new(zero(), one(), zero(), one());
            (canon, transform5(a0, a1, b1))
        }
        5 => {
            let a0 = p.b01.nth_root(2, 0);
            let a1 = -&q(&(&a0 * &p.b00), &p.b01);
            let canon = TLeib5Params::new(zero(), one(), zero(), zero());
            (canon, transform5(a0, a1, one()))
        }
        6 => {
            let a0 = (&p.b00 * &p.b12).nth_root(3, 0);
            let b1 = q(&pow(&a0, 2), &p.b12);
            let canon = TLeib5Params::new(one(), zero(), zero(), one());
            (canon, transform5(a0, zero(), b1))
        }
        7 => {
            let canon = TLeib5Params::new(one(), zero(), zero(), zero());
            (canon, transform5(one(), zero(), p.b00.clone()))
        }
        8 => {
            let b1 = q(&one(), &p.b12);
            let canon = TLeib5Params::new(zero(), zero(), zero(), one());
            (canon, transform5(one(), zero(), b1))
        }
        _ => (
            TLeib5Params::new(zero(), zero(), zero(), zero()),
            AdaptedTransform::identity(5),
        ),
    }
}

/// The `B3` coefficient that zeroes the transformed `b13` when `b23 != 0`
/// (with `B2 = 0`): `B3 = B1 (2 A0 A1 b12^2 + A0^2 b13 + A1^2 b12^2 b23)
/// / (2 A0^2 b23)`.
fn b3_for_zero_b13(a0: &Scalar, a1: &Scalar, b1: &Scalar, p: &TLeib6Params) -> Scalar {
    let two = Scalar::from_int(2);
    let b12sq = pow(&p.b12, 2);
    let num = &(&(&(&(&two * a0) * a1) * &b12sq) + &(&pow(a0, 2) * &p.b13))
        + &(&(&pow(a1, 2) * &b12sq) * &p.b23);
    q(&(b1 * &num), &(&(&two * &pow(a0, 2)) * &p.b23))
}

/// Among branch candidates (different roots in the recipe), picks the one
/// whose closed-form image equals the target tuple — exactly when possible,
/// otherwise by smallest residual.
fn best_branch(
    p: &TLeib6Params,
    target: &TLeib6Params,
    candidates: Vec<AdaptedTransform>,
) -> AdaptedTransform {
    let source = TLeibParams::Six(p.clone());
    let target = TLeibParams::Six(target.clone());
    let mut best: Option<(f64, AdaptedTransform)> = None;
    for t in candidates {
        let Ok(out) = transform_params_closed(&source, &t) else {
            continue;
        };
        if out == target {
            return t;
        }
        let r = out.residual(&target);
        if best.as_ref().map_or(true, |(r0, _)| r < *r0) {
            best = Some((r, t));
        }
    }
    best.expect("every recipe yields at least one applicable branch").1
}

/// Canonical representative and witness in dimension 6, or `None` on a
/// degenerate stratum.  Subsets whose recipes involve roots (`U6_1`, `U6_2`,
/// `U6_7`, `U6_8`) fix the canonical tuple through principal roots of the
/// invariants and select the matching root branch for the witness.
pub fn canonical6(
    p: &TLeib6Params,
    zt: &ZeroTest,
) -> Option<(TLeib6Params, AdaptedTransform)> {
    let label = subset6(p, zt);
    let zero = Scalar::zero;
    let one = Scalar::one;
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    let eight = Scalar::from_int(8);
    let d = || delta(&p.b00, &p.b01, &p.b11);
    let (invariants, degenerate) = invariants6(p, zt);
    if degenerate.is_some() {
        return None;
    }
    let inv_value = |idx: usize| -> Scalar {
        invariants[idx]
            .value
            .clone()
            .expect("non-degenerate invariant")
    };
    let result = match label.index {
        1 => {
            let big_d = &(&two * &p.b11) - &(&p.b01 * &p.b23);
            let i1 = inv_value(0);
            let lambda2 = q(&inv_value(1), &eight).nth_root(3, 0);
            let target =
                TLeib6Params::new(i1, zero(), one(), lambda2, zero(), one());
            let candidates = (0..3)
                .map(|k| {
                    let a0 = q(&p.b11, &p.b23).nth_root(3, k);
                    let a1 = -&q(&(&a0 * &p.b01), &(&two * &p.b11));
                    let b1 = q(
                        &(&a0 * &big_d),
                        &(&(&two * &p.b11) * &p.b23),
                    );
                    let b3 = b3_for_zero_b13(&a0, &a1, &b1, p);
                    transform6(a0, a1, b1, b3)
                })
                .collect();
            (target.clone(), best_branch(p, &target, candidates))
        }
        2 => {
            let e = &p.b01 - &(&p.b23 * &p.b00);
            let lambda = inv_value(0).nth_root(3, 0);
            let target =
                TLeib6Params::new(zero(), one(), zero(), lambda, zero(), one());
            let candidates = (0..3)
                .map(|k| {
                    let a0 = q(&pow(&p.b01, 2), &e).nth_root(3, k);
                    let a1 = -&q(&(&a0 * &p.b00), &p.b01);
                    let b1 = q(&(&a0 * &e), &(&p.b01 * &p.b23));
                    let b3 = b3_for_zero_b13(&a0, &a1, &b1, p);
                    transform6(a0, a1, b1, b3)
                })
                .collect();
            (target.clone(), best_branch(p, &target, candidates))
        }
        3 => {
            let a0 = q(&(&p.b00 * &pow(&p.b12, 2)), &p.b23).nth_root(5, 0);
            let b1 = q(&pow(&a0, 2), &p.b12);
            let a1 = &b1 - &q(&a0, &p.b23);
            let b3 = b3_for_zero_b13(&a0, &a1, &b1, p);
            let target = TLeib6Params::new(one(), zero(), zero(), one(), zero(), one());
            (target, transform6(a0, a1, b1, b3))
        }
        4 => {
            let b1 = q(&one(), &p.b12);
            let a1 = &b1 - &q(&one(), &p.b23);
            let b3 = b3_for_zero_b13(&one(), &a1, &b1, p);
            let target = TLeib6Params::new(zero(), zero(), zero(), one(), zero(), one());
            (target, transform6(one(), a1, b1, b3))
        }
        5 => {
            let a0 = q(&p.b00, &p.b23);
            let a1 = &one() - &q(&a0, &p.b23);
            let b3 = b3_for_zero_b13(&a0, &a1, &one(), p);
            let target = TLeib6Params::new(one(), zero(), zero(), zero(), zero(), one());
            (target, transform6(a0, a1, one(), b3))
        }
        6 => {
            let a1 = &one() - &q(&one(), &p.b23);
            let b3 = b3_for_zero_b13(&one(), &a1, &one(), p);
            let target = TLeib6Params::new(zero(), zero(), zero(), zero(), zero(), one());
            (target, transform6(one(), a1, one(), b3))
        }
        7 => {
            let i1 = inv_value(0);
            let lambda2 = inv_value(1).nth_root(2, 0);
            let target = TLeib6Params::new(
                q(&i1, &four),
                lambda2,
                one(),
                one(),
                zero(),
                zero(),
            );
            let b1 = q(&p.b11, &pow(&p.b12, 2));
            let candidates = (0..2)
                .map(|k| {
                    let a0 = q(&p.b11, &p.b12).nth_root(2, k);
                    let a1 = -&q(
                        &(&a0 * &p.b13),
                        &(&two * &pow(&p.b12, 2)),
                    );
                    transform6(a0, a1, b1.clone(), zero())
                })
                .collect();
            (target.clone(), best_branch(p, &target, candidates))
        }
        8 => {
            let lambda = q(&inv_value(0), &eight).nth_root(3, 0);
            let target =
                TLeib6Params::new(lambda, one(), zero(), one(), zero(), zero());
            let candidates = (0..3)
                .map(|k| {
                    let a0 = p.b01.nth_root(3, k);
                    let a1 = -&q(
                        &(&a0 * &p.b13),
                        &(&two * &pow(&p.b12, 2)),
                    );
                    let b1 = q(&pow(&a0, 2), &p.b12);
                    transform6(a0, a1, b1, zero())
                })
                .collect();
            (target.clone(), best_branch(p, &target, candidates))
        }
        9 => {
            let a0 = (&p.b00 * &p.b12).nth_root(4, 0);
            let a1 = -&q(&(&a0 * &p.b13), &(&two * &pow(&p.b12, 2)));
            let b1 = q(&pow(&a0, 2), &p.b12);
            let target = TLeib6Params::new(one(), zero(), zero(), one(), zero(), zero());
            (target, transform6(a0, a1, b1, zero()))
        }
        10 => {
            let a1 = -&q(&p.b13, &(&two * &pow(&p.b12, 2)));
            let b1 = q(&one(), &p.b12);
            let target = TLeib6Params::new(zero(), zero(), zero(), one(), zero(), zero());
            (target, transform6(one(), a1, b1, zero()))
        }
        11 => {
            let a0 = q(&p.b11, &p.b13);
            let a1 = -&q(&(&a0 * &p.b01), &(&two * &p.b11));
            let b1 = q(&pow(&a0, 4), &p.b11);
            let lambda = q(&inv_value(0), &four);
            let target =
                TLeib6Params::new(lambda, zero(), one(), zero(), one(), zero());
            (target, transform6(a0, a1, b1, zero()))
        }
        12 => {
            let a0 = q(&d(), &four).nth_root(6, 0);
            let a1 = -&q(&(&a0 * &p.b01), &(&two * &p.b11));
            let b1 = q(&pow(&a0, 4), &p.b11);
            let target = TLeib6Params::new(one(), zero(), one(), zero(), zero(), zero());
            (target, transform6(a0, a1, b1, zero()))
        }
        13 => {
            let a1 = -&q(&p.b01, &(&two * &p.b11));
            let b1 = q(&one(), &p.b11);
            let target = TLeib6Params::new(zero(), zero(), one(), zero(), zero(), zero());
            (target, transform6(one(), a1, b1, zero()))
        }
        14 => {
            let a0 = p.b01.nth_root(3, 0);
            let a1 = -&q(&(&a0 * &p.b00), &p.b01);
            let b1 = q(&p.b01, &p.b13);
            let target = TLeib6Params::new(zero(), one(), zero(), zero(), one(), zero());
            (target, transform6(a0, a1, b1, zero()))
        }
        15 => {
            let a0 = p.b01.nth_root(3, 0);
            let a1 = -&q(&(&a0 * &p.b00), &p.b01);
            let target = TLeib6Params::new(zero(), one(), zero(), zero(), zero(), zero());
            (target, transform6(a0, a1, one(), zero()))
        }
        16 => {
            let a0 = (&p.b00 * &p.b13).nth_root(5, 0);
            let b1 = q(&pow(&a0, 3), &p.b13);
            let target = TLeib6Params::new(one(), zero(), zero(), zero(), one(), zero());
            (target, transform6(a0, zero(), b1, zero()))
        }
        17 => {
            let target = TLeib6Params::new(one(), zero(), zero(), zero(), zero(), zero());
            (target, transform6(one(), zero(), p.b00.clone(), zero()))
        }
        18 => {
            let b1 = q(&one(), &p.b13);
            let target = TLeib6Params::new(zero(), zero(), zero(), zero(), one(), zero());
            (target, transform6(one(), zero(), b1, zero()))
        }
        _ => (
            TLeib6Params::new(zero(), zero(), zero(), zero(), zero(), zero()),
            AdaptedTransform::identity(6),
        ),
    };
    Some(result)
}

/// Full classification of one parameter point.
#[derive(Clone, Debug)]
pub struct Classification {
    pub label: OrbitLabel,
    pub invariants: Vec<NamedInvariant>,
    pub canonical: Option<TLeibParams>,
    pub witness: Option<AdaptedTransform>,
    pub degenerate: bool,
    pub degenerate_reason: Option<String>,
}

/// Classifies a `TLeib` point: subset label, invariants, canonical form and
/// witness.  `tol` is the relative zero-test tolerance, applied against the
/// largest parameter magnitude (exact points are tested exactly).
pub fn classify(p: &TLeibParams, tol: f64) -> Classification {
    let zt = zero_test_for(p, tol);
    match p {
        TLeibParams::Five(p5) => {
            let label = subset5(p5, &zt);
            let invariants = invariants5(p5, &zt);
            let (canonical, witness) = canonical5(p5, &zt);
            Classification {
                label,
                invariants,
                canonical: Some(TLeibParams::Five(canonical)),
                witness: Some(witness),
                degenerate: false,
                degenerate_reason: None,
            }
        }
        TLeibParams::Six(p6) => {
            let label = subset6(p6, &zt);
            let (invariants, degenerate_reason) = invariants6(p6, &zt);
            let (canonical, witness) = match canonical6(p6, &zt) {
                Some((c, w)) => (Some(TLeibParams::Six(c)), Some(w)),
                None => (None, None),
            };
            Classification {
                label,
                invariants,
                canonical,
                witness,
                degenerate: degenerate_reason.is_some(),
                degenerate_reason,
            }
        }
    }
}

/// Isomorphism decision with a machine-checkable certificate.
///
/// `isomorphic = true` is always backed by equal canonical tuples (and,
/// when both canonicalisation witnesses exist, a composed witness carrying
/// `a` onto `b`).  `isomorphic = false` with `undecided = false` is backed
/// by a separating label or invariant value.  When both inputs sit on the
/// same degenerate stratum the surviving invariants cannot separate points
/// and no canonical form exists, so the method cannot decide either way:
/// `undecided = true` and the `isomorphic` flag must be ignored.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub isomorphic: bool,
    pub undecided: bool,
    pub label_a: OrbitLabel,
    pub label_b: OrbitLabel,
    pub invariants_a: Vec<NamedInvariant>,
    pub invariants_b: Vec<NamedInvariant>,
    pub degenerate_a: bool,
    pub degenerate_b: bool,
    pub canonical_a: Option<TLeibParams>,
    pub canonical_b: Option<TLeibParams>,
    /// An adapted transform carrying `a` directly onto `b`, composed from
    /// the two canonicalisation witnesses.
    pub witness: Option<AdaptedTransform>,
}

fn invariant_lists_match(
    a: &[NamedInvariant],
    b: &[NamedInvariant],
    tol: f64,
) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.name == y.name
                && match (&x.value, &y.value) {
                    (None, None) => true,
                    (Some(u), Some(v)) => u.approx_eq(v, tol),
                    _ => false,
                }
        })
}

/// Decides whether two parameter points give isomorphic algebras: labels,
/// degeneracy flags and invariant lists must all agree.  When they do (and
/// the points are off the degenerate strata) the certificate carries the
/// composed witness `w_b^{-1} ∘ w_a`, which the transform oracle can verify
/// independently.
pub fn isomorphic(
    a: &TLeibParams,
    b: &TLeibParams,
    tol: f64,
) -> Result<IsoCertificate, ClassifyError> {
    let ca = classify(a, tol);
    let cb = classify(b, tol);
    let comparable = ca.label == cb.label
        && ca.degenerate == cb.degenerate
        && invariant_lists_match(&ca.invariants, &cb.invariants, TEMPLATE_TOL);
    // On a shared degenerate stratum nothing separates the points and no
    // canonical form exists, so neither answer is provable.
    let undecided = comparable && ca.degenerate;
    let same = comparable && !undecided;
    let mut witness = None;
    if same {
        if let (Some(wa), Some(wb)) = (&ca.witness, &cb.witness) {
            let ma = extend_basis(wa, &a.build())?;
            let mb = extend_basis(wb, &b.build())?;
            let mb_inv = mb
                .inverse(RANK_PIVOT_TOL)
                .ok_or(TransformError::SingularTransform)?;
            // Rows of mb_inv express the canonical basis over b's basis, so
            // the product rewrites a's canonical image in b-coordinates.
            let composed = mb_inv.mul(&ma);
            witness = Some(AdaptedTransform {
                a: composed.row(0).to_vec(),
                b: composed.row(1)[1..].to_vec(),
            });
        }
    }
    Ok(IsoCertificate {
        isomorphic: same,
        undecided,
        label_a: ca.label,
        label_b: cb.label,
        invariants_a: ca.invariants,
        invariants_b: cb.invariants,
        degenerate_a: ca.degenerate,
        degenerate_b: cb.degenerate,
        canonical_a: ca.canonical,
        canonical_b: cb.canonical,
        witness,
    })
}

/// The fixed representative of a single-orbit subset (`None` for the six
/// parametric subsets).
pub fn representative(label: OrbitLabel) -> Option<TLeibParams> {
    let p5 = |a, b, c, d| Some(TLeibParams::Five(TLeib5Params::from_ints(a, b, c, d)));
    let p6 = |a, b, c, d, e, f| {
        Some(TLeibParams::Six(TLeib6Params::from_ints(a, b, c, d, e, f)))
    };
    match (label.dim, label.index) {
        (5, 2) => p5(1, 0, 1, 0),
        (5, 3) => p5(0, 0, 1, 0),
        (5, 4) => p5(0, 1, 0, 1),
        (5, 5) => p5(0, 1, 0, 0),
        (5, 6) => p5(1, 0, 0, 1),
        (5, 7) => p5(1, 0, 0, 0),
        (5, 8) => p5(0, 0, 0, 1),
        (5, 9) => p5(0, 0, 0, 0),
        (6, 3) => p6(1, 0, 0, 1, 0, 1),
        (6, 4) => p6(0, 0, 0, 1, 0, 1),
        (6, 5) => p6(1, 0, 0, 0, 0, 1),
        (6, 6) => p6(0, 0, 0, 0, 0, 1),
        (6, 9) => p6(1, 0, 0, 1, 0, 0),
        (6, 10) => p6(0, 0, 0, 1, 0, 0),
        (6, 12) => p6(1, 0, 1, 0, 0, 0),
        (6, 13) => p6(0, 0, 1, 0, 0, 0),
        (6, 14) => p6(0, 1, 0, 0, 1, 0),
        (6, 15) => p6(0, 1, 0, 0, 0, 0),
        (6, 16) => p6(1, 0, 0, 0, 1, 0),
        (6, 17) => p6(1, 0, 0, 0, 0, 0),
        (6, 18) => p6(0, 0, 0, 0, 1, 0),
        (6, 19) => p6(0, 0, 0, 0, 0, 0),
        _ => None,
    }
}

/// The representative family of a parametric subset evaluated at the given
/// family parameters (`lambda`s).
pub fn representative_family(
    label: OrbitLabel,
    lambdas: &[Scalar],
) -> Result<TLeibParams, ClassifyError> {
    let expected = label.invariant_count();
    if expected == 0 {
        return Err(ClassifyError::NotParametric(label));
    }
    if lambdas.len() != expected {
        return Err(ClassifyError::WrongTargetCount {
            label,
            expected,
            got: lambdas.len(),
        });
    }
    let zero = Scalar::zero;
    let one = Scalar::one;
    let l = |i: usize| lambdas[i].clone();
    let params = match (label.dim, label.index) {
        (5, 1) => TLeibParams::Five(TLeib5Params::new(l(0), zero(), one(), one())),
        (6, 1) => TLeibParams::Six(TLeib6Params::new(
            l(0),
            zero(),
            one(),
            l(1),
            zero(),
            one(),
        )),
        (6, 2) => TLeibParams::Six(TLeib6Params::new(
            zero(),
            one(),
            zero(),
            l(0),
            zero(),
            one(),
        )),
        (6, 7) => TLeibParams::Six(TLeib6Params::new(l(0), l(1), one(), one(), zero(), zero())),
        (6, 8) => TLeibParams::Six(TLeib6Params::new(l(0), one(), zero(), one(), zero(), zero())),
        (6, 11) => TLeibParams::Six(TLeib6Params::new(
            l(0),
            zero(),
            one(),
            zero(),
            one(),
            zero(),
        )),
        _ => unreachable!("parametric labels are exactly the six listed"),
    };
    Ok(params)
}

/// Constructs a member of the parametric subset `label` whose invariants
/// are exactly `targets` — exactly, in rational arithmetic, for any exact
/// targets.  This realises surjectivity of the invariant maps.
pub fn member_with_invariants(
    label: OrbitLabel,
    targets: &[Scalar],
) -> Result<TLeibParams, ClassifyError> {
    let expected = label.invariant_count();
    if expected == 0 {
        return Err(ClassifyError::NotParametric(label));
    }
    if targets.len() != expected {
        return Err(ClassifyError::WrongTargetCount {
            label,
            expected,
            got: targets.len(),
        });
    }
    let zt = ZeroTest::default();
    let zero = Scalar::zero;
    let one = Scalar::one;
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    let t = |i: usize| targets[i].clone();
    let params = match (label.dim, label.index) {
        (5, 1) => TLeibParams::Five(TLeib5Params::new(
            q(&t(0), &four),
            zero(),
            one(),
            one(),
        )),
        (6, 1) => {
            if zt.is_zero(&t(1)) {
                TLeibParams::Six(TLeib6Params::new(t(0), zero(), one(), zero(), zero(), one()))
            } else {
                // (t1/t2^2, 0, 1, t2/2, 0, t2): here D = 2, so I1 = t1 and
                // I2 = 8 (t2/2)^3 / t2^2 = t2.
                TLeibParams::Six(TLeib6Params::new(
                    q(&t(0), &pow(&t(1), 2)),
                    zero(),
                    one(),
                    q(&t(1), &two),
                    zero(),
                    t(1),
                ))
            }
        }
        (6, 2) => {
            if zt.is_zero(&t(0)) {
                TLeibParams::Six(TLeib6Params::new(zero(), one(), zero(), zero(), zero(), one()))
            } else {
                TLeibParams::Six(TLeib6Params::new(
                    &one() - &t(0),
                    one(),
                    zero(),
                    q(&one(), &t(0)),
                    zero(),
                    one(),
                ))
            }
        }
        (6, 7) => {
            if zt.is_zero(&t(1)) {
                TLeibParams::Six(TLeib6Params::new(
                    q(&t(0), &four),
                    zero(),
                    one(),
                    one(),
                    zero(),
                    zero(),
                ))
            } else {
                TLeibParams::Six(TLeib6Params::new(
                    q(&t(0), &(&four * &pow(&t(1), 3))),
                    q(&one(), &t(1)),
                    one(),
                    t(1),
                    zero(),
                    zero(),
                ))
            }
        }
        (6, 8) => {
            if zt.is_zero(&t(0)) {
                TLeibParams::Six(TLeib6Params::new(zero(), one(), zero(), one(), zero(), zero()))
            } else {
                TLeibParams::Six(TLeib6Params::new(
                    q(&pow(&t(0), 3), &two),
                    pow(&t(0), 2),
                    zero(),
                    one(),
                    zero(),
                    zero(),
                ))
            }
        }
        (6, 11) => TLeibParams::Six(TLeib6Params::new(
            q(&t(0), &four),
            zero(),
            one(),
            zero(),
            one(),
            zero(),
        )),
        _ => unreachable!("parametric labels are exactly the six listed"),
    };
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::transform_params_oracle;

    #[test]
    fn labels_parse_and_display() {
        for label in OrbitLabel::all() {
            let text = label.to_string();
            assert_eq!(text.parse::<OrbitLabel>().unwrap(), label);
        }
        assert!("U7_1".parse::<OrbitLabel>().is_err());
        assert!("U5_10".parse::<OrbitLabel>().is_err());
        assert!("U6_0".parse::<OrbitLabel>().is_err());
        assert_eq!(OrbitLabel::new(6, 11).unwrap().pretty(), "U_6^11");
    }

    #[test]
    fn twenty_eight_labels_six_parametric() {
        let all = OrbitLabel::all();
        assert_eq!(all.len(), 28);
        assert_eq!(all.iter().filter(|l| l.is_parametric()).count(), 6);
    }

    #[test]
    fn single_orbit_representatives_classify_into_their_own_subset() {
        for label in OrbitLabel::all() {
            let Some(rep) = representative(label) else {
                continue;
            };
            let c = classify(&rep, ZeroTest::DEFAULT_TOL);
            assert_eq!(c.label, label);
            assert!(!c.degenerate);
            // Every catalog representative is a fixed point of
            // canonicalisation.
            assert_eq!(c.canonical.as_ref().unwrap().coords(), rep.coords());
        }
    }

    #[test]
    fn u5_1_member_canonicalises_to_itself() {
        let p = TLeibParams::Five(TLeib5Params::from_ints(1, 0, 1, 1));
        let c = classify(&p, ZeroTest::DEFAULT_TOL);
        assert_eq!(c.label, OrbitLabel::new(5, 1).unwrap());
        assert_eq!(c.invariants[0].value, Some(Scalar::from_int(4)));
        assert_eq!(c.canonical.as_ref().unwrap().coords(), p.coords());
    }

    #[test]
    fn degenerate_stratum_is_flagged_and_uncanonicalised() {
        // b23 = 1, b11 = 1, b01 = 2 puts the point on 2*b11 - b01*b23 = 0.
        let p = TLeibParams::Six(TLeib6Params::from_ints(3, 2, 1, 5, 0, 1));
        let c = classify(&p, ZeroTest::DEFAULT_TOL);
        assert_eq!(c.label, OrbitLabel::new(6, 1).unwrap());
        assert!(c.degenerate);
        assert!(c.canonical.is_none() && c.witness.is_none());
        assert_eq!(c.invariants[0].value, None);
        assert!(c.invariants[1].value.is_some());
    }

    #[test]
    fn witness_carries_the_point_onto_its_canonical_form() {
        let p = TLeibParams::Six(TLeib6Params::from_ints(2, 1, 3, 4, 1, 2));
        let c = classify(&p, ZeroTest::DEFAULT_TOL);
        assert_eq!(c.label, OrbitLabel::new(6, 1).unwrap());
        let moved = transform_params_oracle(&p, c.witness.as_ref().unwrap()).unwrap();
        let canon = c.canonical.unwrap();
        assert!(moved.residual(&canon) <= TEMPLATE_TOL);
    }

    #[test]
    fn members_with_prescribed_invariants_hit_their_targets_exactly() {
        let label = OrbitLabel::new(6, 1).unwrap();
        let targets = [Scalar::ratio(3, 7), Scalar::from_int(-5)];
        let p = member_with_invariants(label, &targets).unwrap();
        let c = classify(&p, ZeroTest::DEFAULT_TOL);
        assert_eq!(c.label, label);
        assert_eq!(c.invariants[0].value, Some(targets[0].clone()));
        assert_eq!(c.invariants[1].value, Some(targets[1].clone()));
    }

    #[test]
    fn isomorphic_pairs_get_a_verifiable_witness() {
        let p = TLeibParams::Five(TLeib5Params::from_ints(1, 2, 1, 1));
        let t = AdaptedTransform::from_leading(
            5,
            &[Scalar::from_int(1), Scalar::from_int(1)],
            &[Scalar::from_int(1)],
        );
        let moved = transform_params_oracle(&p, &t).unwrap();
        let cert = isomorphic(&p, &moved, ZeroTest::DEFAULT_TOL).unwrap();
        assert!(cert.isomorphic);
        let w = cert.witness.as_ref().unwrap();
        let image = transform_params_oracle(&p, w).unwrap();
        assert!(image.residual(&moved) <= TEMPLATE_TOL);
    }

    #[test]
    fn distinct_subsets_are_never_isomorphic() {
        let a = representative(OrbitLabel::new(5, 7).unwrap()).unwrap();
        let b = representative(OrbitLabel::new(5, 8).unwrap()).unwrap();
        let cert = isomorphic(&a, &b, ZeroTest::DEFAULT_TOL).unwrap();
        assert!(!cert.isomorphic);
        assert!(cert.witness.is_none());
        assert_ne!(
            cert.canonical_a.unwrap().coords(),
            cert.canonical_b.unwrap().coords()
        );
    }
}
