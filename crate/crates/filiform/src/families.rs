//! The three classical parametric families of filiform Leibniz algebras.
//!
//! In an adapted basis `e_0, ..., e_n` every complex filiform Leibniz
//! algebra of dimension `n+1` belongs to one of:
//!
//! * `FLeib` — parameters `alpha_3, ..., alpha_{n-1}, theta`;
//! * `SLeib` — parameters `beta_3, ..., beta_{n-1}, gamma`;
//! * `TLeib` — the family containing all filiform *Lie* algebras; in
//!   dimensions 5 and 6 it is cut out by the parameter tuples
//!   `(b00, b01, b11, b12)` and `(b00, b01, b11, b12, b13, b23)`.
//!
//! Builders produce dense [`AlgebraTable`]s; every table built here
//! satisfies the Leibniz identity exactly, for any parameter values.

use crate::algebra::AlgebraTable;
use crate::scalar::{Scalar, ScalarMode};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("family {family:?} does not support dimension {dim}")]
    BadDimension { family: Family, dim: usize },
    #[error("expected {expected} family parameters, got {got}")]
    BadParameterCount { expected: usize, got: usize },
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
}

/// Family tag as used in parameter files.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    FLeib,
    SLeib,
    TLeib,
}

/// Parameters of `FLeib_dim` with `n = dim - 1`:
/// `alphas = [alpha_3, ..., alpha_n]` and `theta`.  In the bracket
/// `[e_0, e_1]` the top coefficient (of `e_n`) is `theta`, not `alpha_n`;
/// `alpha_n` still appears in the brackets `[e_j, e_1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FLeibParams {
    pub dim: usize,
    pub alphas: Vec<Scalar>,
    pub theta: Scalar,
}

/// Parameters of `SLeib_dim` with `n = dim - 1`:
/// `betas = [beta_3, ..., beta_n]` and `gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct SLeibParams {
    pub dim: usize,
    pub betas: Vec<Scalar>,
    pub gamma: Scalar,
}

/// `TLeib_5` parameter tuple `(b00, b01, b11, b12)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TLeib5Params {
    pub b00: Scalar,
    pub b01: Scalar,
    pub b11: Scalar,
    pub b12: Scalar,
}

/// `TLeib_6` parameter tuple `(b00, b01, b11, b12, b13, b23)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TLeib6Params {
    pub b00: Scalar,
    pub b01: Scalar,
    pub b11: Scalar,
    pub b12: Scalar,
    pub b13: Scalar,
    pub b23: Scalar,
}

/// A `TLeib` parameter point in dimension 5 or 6.
#[derive(Clone, Debug, PartialEq)]
pub enum TLeibParams {
    Five(TLeib5Params),
    Six(TLeib6Params),
}

impl TLeib5Params {
    pub fn new(b00: Scalar, b01: Scalar, b11: Scalar, b12: Scalar) -> Self {
        TLeib5Params { b00, b01, b11, b12 }
    }

    /// Tuple from integers, convenient for representatives and tests.
    pub fn from_ints(b00: i64, b01: i64, b11: i64, b12: i64) -> Self {
        TLeib5Params::new(
            Scalar::from_int(b00),
            Scalar::from_int(b01),
            Scalar::from_int(b11),
            Scalar::from_int(b12),
        )
    }

    pub fn coords(&self) -> [&Scalar; 4] {
        [&self.b00, &self.b01, &self.b11, &self.b12]
    }
}

impl TLeib6Params {
    pub fn new(
        b00: Scalar,
        b01: Scalar,
        b11: Scalar,
        b12: Scalar,
        b13: Scalar,
        b23: Scalar,
    ) -> Self {
        TLeib6Params {
            b00,
            b01,
            b11,
            b12,
            b13,
            b23,
        }
    }

    pub fn from_ints(b00: i64, b01: i64, b11: i64, b12: i64, b13: i64, b23: i64) -> Self {
        TLeib6Params::new(
            Scalar::from_int(b00),
            Scalar::from_int(b01),
            Scalar::from_int(b11),
            Scalar::from_int(b12),
            Scalar::from_int(b13),
            Scalar::from_int(b23),
        )
    }

    pub fn coords(&self) -> [&Scalar; 6] {
        [
            &self.b00, &self.b01, &self.b11, &self.b12, &self.b13, &self.b23,
        ]
    }
}

impl TLeibParams {
    pub fn dim(&self) -> usize {
        match self {
            TLeibParams::Five(_) => 5,
            TLeibParams::Six(_) => 6,
        }
    }

    /// Parameter coordinates in the fixed order
    /// `(b00, b01, b11, b12[, b13, b23])`.
    pub fn coords(&self) -> Vec<&Scalar> {
        match self {
            TLeibParams::Five(p) => p.coords().to_vec(),
            TLeibParams::Six(p) => p.coords().to_vec(),
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            TLeibParams::Five(_) => &["b00", "b01", "b11", "b12"],
            TLeibParams::Six(_) => &["b00", "b01", "b11", "b12", "b13", "b23"],
        }
    }

    pub fn from_coords(dim: usize, coords: &[Scalar]) -> Result<Self, FamilyError> {
        match (dim, coords) {
            (5, [b00, b01, b11, b12]) => Ok(TLeibParams::Five(TLeib5Params::new(
                b00.clone(),
                b01.clone(),
                b11.clone(),
                b12.clone(),
            ))),
            (6, [b00, b01, b11, b12, b13, b23]) => Ok(TLeibParams::Six(TLeib6Params::new(
                b00.clone(),
                b01.clone(),
                b11.clone(),
                b12.clone(),
                b13.clone(),
                b23.clone(),
            ))),
            (5, c) => Err(FamilyError::BadParameterCount {
                expected: 4,
                got: c.len(),
            }),
            (6, c) => Err(FamilyError::BadParameterCount {
                expected: 6,
                got: c.len(),
            }),
            _ => Err(FamilyError::BadDimension {
                family: Family::TLeib,
                dim,
            }),
        }
    }

    /// The coefficient entering the base-change nonsingularity condition
    /// `A0 * B1 * (A0 + A1 * b) != 0`: zero in dimension 5, `b23` in
    /// dimension 6.
    pub fn b_last(&self) -> Scalar {
        match self {
            TLeibParams::Five(_) => Scalar::zero(),
            TLeibParams::Six(p) => p.b23.clone(),
        }
    }

    pub fn mode(&self) -> ScalarMode {
        if self.coords().iter().all(|s| s.is_exact()) {
            ScalarMode::Exact
        } else {
            ScalarMode::Approx
        }
    }

    pub fn to_approx(&self) -> TLeibParams {
        let coords: Vec<Scalar> = self.coords().into_iter().map(Scalar::to_approx).collect();
        TLeibParams::from_coords(self.dim(), &coords).expect("coords preserve arity")
    }

    pub fn build(&self) -> AlgebraTable {
        match self {
            TLeibParams::Five(p) => build_tleib5(p),
            TLeibParams::Six(p) => build_tleib6(p),
        }
    }

    /// Largest coordinate modulus, the scale used by relative zero tests.
    pub fn max_abs(&self) -> f64 {
        self.coords().iter().map(|s| s.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest relative coordinate deviation between two tuples of the same
    /// dimension (numeric; infinite when dimensions differ).
    pub fn residual(&self, other: &TLeibParams) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| {
                let x = a.to_complex();
                let y = b.to_complex();
                (x - y).norm() / x.norm().max(y.norm()).max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// `FLeib_dim` table: `[e0,e0] = e2`, `[e_i,e0] = e_{i+1}`,
/// `[e0,e1] = alpha_3 e3 + ... + alpha_{n-1} e_{n-1} + theta e_n`, and
/// `[e_j,e1] = sum_k alpha_k e_{j+k-1}` (indices relative to `n = dim - 1`).
pub fn build_fleib(params: &FLeibParams) -> Result<AlgebraTable, FamilyError> {
    let dim = params.dim;
    if dim < 4 {
        return Err(FamilyError::BadDimension {
            family: Family::FLeib,
            dim,
        });
    }
    if params.alphas.len() != dim - 3 {
        return Err(FamilyError::BadParameterCount {
            expected: dim - 3,
            got: params.alphas.len(),
        });
    }
    let n = dim - 1;
    let alpha = |k: usize| params.alphas[k - 3].clone();
    let mut t = AlgebraTable::new(dim);
    t.set(0, 0, 2, Scalar::one());
    for i in 1..n {
        t.set(i, 0, i + 1, Scalar::one());
    }
    for k in 3..n {
        t.set(0, 1, k, alpha(k));
    }
    t.set(0, 1, n, params.theta.clone());
    for j in 1..=n.saturating_sub(2) {
        for k in 3..=(n + 1 - j) {
            t.set(j, 1, j + k - 1, alpha(k));
        }
    }
    Ok(t)
}

/// `SLeib_dim` table: `[e0,e0] = e2`, `[e_i,e0] = e_{i+1}` for `i >= 2`,
/// `[e0,e1] = beta_3 e3 + ... + beta_n e_n`, `[e1,e1] = gamma e_n`, and
/// `[e_j,e1] = sum_k beta_k e_{j+k-1}` for `j >= 2`.
pub fn build_sleib(params: &SLeibParams) -> Result<AlgebraTable, FamilyError> {
    let dim = params.dim;
    if dim < 4 {
        return Err(FamilyError::BadDimension {
            family: Family::SLeib,
            dim,
        });
    }
    if params.betas.len() != dim - 3 {
        return Err(FamilyError::BadParameterCount {
            expected: dim - 3,
            got: params.betas.len(),
        });
    }
    let n = dim - 1;
    let beta = |k: usize| params.betas[k - 3].clone();
    let mut t = AlgebraTable::new(dim);
    t.set(0, 0, 2, Scalar::one());
    for i in 2..n {
        t.set(i, 0, i + 1, Scalar::one());
    }
    for k in 3..=n {
        t.set(0, 1, k, beta(k));
    }
    t.set(1, 1, n, params.gamma.clone());
    for j in 2..=n.saturating_sub(2) {
        for k in 3..=(n + 1 - j) {
            t.set(j, 1, j + k - 1, beta(k));
        }
    }
    Ok(t)
}

/// `TLeib_5` table for the tuple `(b00, b01, b11, b12)`:
///
/// ```text
/// [e_i,e0] =  e_{i+1}          (1 <= i <= 3)
/// [e0,e_i] = -e_{i+1}          (2 <= i <= 3)
/// [e0,e0]  =  b00 e4
/// [e0,e1]  = -e2 + b01 e4
/// [e1,e1]  =  b11 e4
/// [e1,e2]  =  b12 e4 = -[e2,e1]
/// ```
pub fn build_tleib5(p: &TLeib5Params) -> AlgebraTable {
    let mut t = AlgebraTable::new(5);
    for i in 1..=3 {
        t.set(i, 0, i + 1, Scalar::one());
    }
    for i in 2..=3 {
        t.set(0, i, i + 1, Scalar::from_int(-1));
    }
    t.set(0, 0, 4, p.b00.clone());
    t.set(0, 1, 2, Scalar::from_int(-1));
    t.set(0, 1, 4, p.b01.clone());
    t.set(1, 1, 4, p.b11.clone());
    t.set(1, 2, 4, p.b12.clone());
    t.set(2, 1, 4, -&p.b12);
    t
}

/// `TLeib_6` table for the tuple `(b00, b01, b11, b12, b13, b23)`:
///
/// ```text
/// [e_i,e0] =  e_{i+1}                    (1 <= i <= 4)
/// [e0,e_i] = -e_{i+1}                    (2 <= i <= 4)
/// [e0,e0]  =  b00 e5
/// [e0,e1]  = -e2 + b01 e5
/// [e1,e1]  =  b11 e5
/// [e1,e2]  =  b12 e4 + b13 e5 = -[e2,e1]
/// [e1,e3]  =  b12 e5          = -[e3,e1]
/// [e1,e4]  = -b23 e5          = -[e4,e1]
/// [e2,e3]  =  b23 e5          = -[e3,e2]
/// ```
pub fn build_tleib6(p: &TLeib6Params) -> AlgebraTable {
    let mut t = AlgebraTable::new(6);
    for i in 1..=4 {
        t.set(i, 0, i + 1, Scalar::one());
    }
    for i in 2..=4 {
        t.set(0, i, i + 1, Scalar::from_int(-1));
    }
    t.set(0, 0, 5, p.b00.clone());
    t.set(0, 1, 2, Scalar::from_int(-1));
    t.set(0, 1, 5, p.b01.clone());
    t.set(1, 1, 5, p.b11.clone());
    t.set(1, 2, 4, p.b12.clone());
    t.set(1, 2, 5, p.b13.clone());
    t.set(2, 1, 4, -&p.b12);
    t.set(2, 1, 5, -&p.b13);
    t.set(1, 3, 5, p.b12.clone());
    t.set(3, 1, 5, -&p.b12);
    t.set(1, 4, 5, -&p.b23);
    t.set(4, 1, 5, p.b23.clone());
    t.set(2, 3, 5, p.b23.clone());
    t.set(3, 2, 5, -&p.b23);
    t
}

/// Any family parameter point.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyParams {
    FLeib(FLeibParams),
    SLeib(SLeibParams),
    TLeib(TLeibParams),
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::FLeib(_) => Family::FLeib,
            FamilyParams::SLeib(_) => Family::SLeib,
            FamilyParams::TLeib(_) => Family::TLeib,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilyParams::FLeib(p) => p.dim,
            FamilyParams::SLeib(p) => p.dim,
            FamilyParams::TLeib(p) => p.dim(),
        }
    }

    pub fn build(&self) -> Result<AlgebraTable, FamilyError> {
        match self {
            FamilyParams::FLeib(p) => build_fleib(p),
            FamilyParams::SLeib(p) => build_sleib(p),
            FamilyParams::TLeib(p) => Ok(p.build()),
        }
    }
}

/// JSON schema for a family parameter point:
/// `{"family": "TLeib", "dim": 5, "params": {"b00": "1", ...}}`.
/// Unknown top-level fields and unknown parameter names are rejected.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub family: Family,
    pub dim: usize,
    pub params: BTreeMap<String, Scalar>,
}

/// The exact parameter-name set expected for a family at a dimension.
fn expected_keys(family: Family, dim: usize) -> Result<Vec<String>, FamilyError> {
    match family {
        Family::FLeib | Family::SLeib => {
            if dim < 4 {
                return Err(FamilyError::BadDimension { family, dim });
            }
            let (prefix, last) = if family == Family::FLeib {
                ("alpha", "theta")
            } else {
                ("beta", "gamma")
            };
            let mut keys: Vec<String> = (3..dim).map(|k| format!("{prefix}{k}")).collect();
            keys.push(last.to_string());
            Ok(keys)
        }
        Family::TLeib => match dim {
            5 => Ok(["b00", "b01", "b11", "b12"].map(String::from).to_vec()),
            6 => Ok(["b00", "b01", "b11", "b12", "b13", "b23"]
                .map(String::from)
                .to_vec()),
            _ => Err(FamilyError::BadDimension { family, dim }),
        },
    }
}

/// Validates a parameter file against its family schema.
pub fn params_from_file(file: &ParamsFile) -> Result<FamilyParams, FamilyError> {
    let keys = expected_keys(file.family, file.dim)?;
    for key in file.params.keys() {
        if !keys.iter().any(|k| k == key) {
            return Err(FamilyError::UnknownParam(key.clone()));
        }
    }
    let fetch = |key: &str| -> Result<Scalar, FamilyError> {
        file.params
            .get(key)
            .cloned()
            .ok_or_else(|| FamilyError::MissingParam(key.to_string()))
    };
    match file.family {
        Family::FLeib => {
            let alphas = (3..file.dim)
                .map(|k| fetch(&format!("alpha{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FamilyParams::FLeib(FLeibParams {
                dim: file.dim,
                alphas,
                theta: fetch("theta")?,
            }))
        }
        Family::SLeib => {
            let betas = (3..file.dim)
                .map(|k| fetch(&format!("beta{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FamilyParams::SLeib(SLeibParams {
                dim: file.dim,
                betas,
                gamma: fetch("gamma")?,
            }))
        }
        Family::TLeib => {
            let coords = keys
                .iter()
                .map(|k| fetch(k))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FamilyParams::TLeib(TLeibParams::from_coords(
                file.dim, &coords,
            )?))
        }
    }
}

/// Inverse of [`params_from_file`].
pub fn params_to_file(params: &FamilyParams) -> ParamsFile {
    let mut map = BTreeMap::new();
    match params {
        FamilyParams::FLeib(p) => {
            for (idx, a) in p.alphas.iter().enumerate() {
                map.insert(format!("alpha{}", idx + 3), a.clone());
            }
            map.insert("theta".to_string(), p.theta.clone());
        }
        FamilyParams::SLeib(p) => {
            for (idx, b) in p.betas.iter().enumerate() {
                map.insert(format!("beta{}", idx + 3), b.clone());
            }
            map.insert("gamma".to_string(), p.gamma.clone());
        }
        FamilyParams::TLeib(p) => {
            for (name, value) in p.param_names().iter().zip(p.coords()) {
                map.insert((*name).to_string(), value.clone());
            }
        }
    }
    ParamsFile {
        family: params.family(),
        dim: params.dim(),
        params: map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fleib_sample_brackets() {
        // dim 5 (n = 4), alpha3 = 1, alpha4 = 0, theta = 2.
        let p = FLeibParams {
            dim: 5,
            alphas: vec![Scalar::one(), Scalar::zero()],
            theta: Scalar::from_int(2),
        };
        let t = build_fleib(&p).unwrap();
        // [e0,e1] = alpha3 e3 + theta e4
        assert_eq!(*t.get(0, 1, 3), Scalar::one());
        assert_eq!(*t.get(0, 1, 4), Scalar::from_int(2));
        // [e1,e1] = alpha3 e3 + alpha4 e4, [e2,e1] = alpha3 e4
        assert_eq!(*t.get(1, 1, 3), Scalar::one());
        assert!(t.get(1, 1, 4).is_exactly_zero());
        assert_eq!(*t.get(2, 1, 4), Scalar::one());
        assert!(t.leibniz_defect().is_exactly_zero());
        assert!(t.is_filiform());
    }

    #[test]
    fn sleib_zero_parameters_keep_only_spine() {
        let p = SLeibParams {
            dim: 5,
            betas: vec![Scalar::zero(), Scalar::zero()],
            gamma: Scalar::zero(),
        };
        let t = build_sleib(&p).unwrap();
        let file = t.to_file();
        // [e0,e0] = e2 and [e_i,e0] = e_{i+1} for i = 2, 3; nothing else.
        assert_eq!(file.entries.len(), 3);
        assert!(t.leibniz_defect().is_exactly_zero());
        assert!(t.is_filiform());
    }

    #[test]
    fn tleib5_brackets_match_parameter_slots() {
        let p = TLeib5Params::from_ints(7, 3, -2, 5);
        let t = build_tleib5(&p);
        assert_eq!(*t.get(0, 0, 4), Scalar::from_int(7));
        assert_eq!(*t.get(0, 1, 2), Scalar::from_int(-1));
        assert_eq!(*t.get(0, 1, 4), Scalar::from_int(3));
        assert_eq!(*t.get(1, 1, 4), Scalar::from_int(-2));
        assert_eq!(*t.get(1, 2, 4), Scalar::from_int(5));
        assert_eq!(*t.get(2, 1, 4), Scalar::from_int(-5));
        assert!(t.leibniz_defect().is_exactly_zero());
        assert!(t.is_filiform());
    }

    #[test]
    fn tleib6_series_and_antisymmetry_slots() {
        let p = TLeib6Params::from_ints(1, 2, 3, 4, 5, 6);
        let t = build_tleib6(&p);
        assert_eq!(t.lower_central_series(), vec![6, 4, 3, 2, 1, 0]);
        assert_eq!(*t.get(1, 3, 5), Scalar::from_int(4));
        assert_eq!(*t.get(3, 1, 5), Scalar::from_int(-4));
        assert_eq!(*t.get(1, 4, 5), Scalar::from_int(-6));
        assert_eq!(*t.get(2, 3, 5), Scalar::from_int(6));
        assert!(t.leibniz_defect().is_exactly_zero());
        assert!(t.is_filiform());
    }

    #[test]
    fn builders_validate_shapes() {
        let bad = FLeibParams {
            dim: 5,
            alphas: vec![Scalar::one()],
            theta: Scalar::zero(),
        };
        assert!(matches!(
            build_fleib(&bad),
            Err(FamilyError::BadParameterCount { expected: 2, got: 1 })
        ));
        assert!(TLeibParams::from_coords(7, &[]).is_err());
    }

    #[test]
    fn params_file_schema_round_trip_and_rejection() {
        let p = FamilyParams::TLeib(TLeibParams::Five(TLeib5Params::from_ints(1, 0, 1, 0)));
        let file = params_to_file(&p);
        assert_eq!(params_from_file(&file).unwrap(), p);

        let mut unknown = file.clone();
        unknown
            .params
            .insert("b99".to_string(), Scalar::zero());
        assert_eq!(
            params_from_file(&unknown),
            Err(FamilyError::UnknownParam("b99".to_string()))
        );

        let mut missing = file;
        missing.params.remove("b12");
        assert_eq!(
            params_from_file(&missing),
            Err(FamilyError::MissingParam("b12".to_string()))
        );
    }
}
