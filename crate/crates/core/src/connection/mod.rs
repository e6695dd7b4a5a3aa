//! Connections on the supported curves, with the sign convention
//! `∇(D)y = D(y) − A·y`.

mod fnelem;
mod gauge;
mod horizontal;
mod pcurv;
mod radius;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{parse_ratfunc, FieldElem, GroundField, RatFunc};

pub use fnelem::{
    cubic, etale_factor, identity, mat_derive, mat_inv, mat_mul, mat_sub, CurveDesc, FnElem,
    FnMatrix,
};
pub use gauge::gauge_transform;
pub use horizontal::{elliptic_local_coordinate, horizontal_series, ode_residual, CurvePoint};
pub use pcurv::{
    divisibility_check, p_curvature, pcurv_survey, reduce_matrix, Divisibility, PCurvature,
    SurveyEntry, SurveyOutcome,
};
pub use radius::{radius_estimate, RadiusEstimate};

/// A rank-`n` connection `∇(D) = D − A` on one of the supported curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    name: String,
    curve: CurveDesc,
    field: GroundField,
    variable: String,
    matrix: FnMatrix<FieldElem>,
}

impl Connection {
    pub fn new(
        name: impl Into<String>,
        curve: CurveDesc,
        field: GroundField,
        variable: impl Into<String>,
        matrix: FnMatrix<FieldElem>,
    ) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Connection(
                "matrix must be square and nonempty".into(),
            ));
        }
        if matches!(field, GroundField::PrimeField { .. }) {
            return Err(Error::Connection(
                "connections are defined over Q or Q(sqrt d)".into(),
            ));
        }
        for e in matrix.iter().flatten() {
            if e.field() != field || e.b.field() != field {
                return Err(Error::Connection("entry over a different field".into()));
            }
            if !curve.is_elliptic() && !e.b.is_zero() {
                return Err(Error::Connection(
                    "y-terms only exist on the elliptic curve".into(),
                ));
            }
        }
        let variable = variable.into();
        if variable == "sqrtd" || variable == "y" || variable.is_empty() {
            return Err(Error::Connection(format!(
                "invalid variable name `{variable}`"
            )));
        }
        Ok(Connection {
            name: name.into(),
            curve,
            field,
            variable,
            matrix,
        })
    }

    /// Rank-`n` connection on a line curve from `x`-only entries.
    pub fn from_ratfuncs(
        name: impl Into<String>,
        curve: CurveDesc,
        field: GroundField,
        variable: impl Into<String>,
        matrix: Vec<Vec<RatFunc<FieldElem>>>,
    ) -> Result<Self> {
        let m = matrix
            .into_iter()
            .map(|r| r.into_iter().map(FnElem::from_x).collect())
            .collect();
        Self::new(name, curve, field, variable, m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn curve(&self) -> CurveDesc {
        self.curve
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &FnMatrix<FieldElem> {
        &self.matrix
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Connection) -> Result<Connection> {
        if self.curve != other.curve || self.field != other.field {
            return Err(Error::Connection(
                "direct sum needs the same curve and field".into(),
            ));
        }
        let (n, m) = (self.rank(), other.rank());
        let zero = FnElem::zero(self.field);
        let mut out = vec![vec![zero; n + m]; n + m];
        for (i, row) in self.matrix.iter().enumerate() {
            out[i][..n].clone_from_slice(row);
        }
        for (i, row) in other.matrix.iter().enumerate() {
            out[n + i][n..].clone_from_slice(row);
        }
        Connection::new(
            format!("{}+{}", self.name, other.name),
            self.curve,
            self.field,
            self.variable.clone(),
            out,
        )
    }

    pub fn to_json(&self) -> String {
        let json = ConnectionJson {
            name: self.name.clone(),
            curve: self.curve.tag().to_string(),
            field: match self.field {
                GroundField::Quadratic { d } => FieldJson {
                    kind: "Qsqrt".into(),
                    d: Some(d),
                },
                _ => FieldJson {
                    kind: "Q".into(),
                    d: None,
                },
            },
            rank: self.rank(),
            matrix: self
                .matrix
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| {
                            if self.curve.is_elliptic() {
                                EntryJson::Pair {
                                    a: e.a.to_expr(&self.variable),
                                    b: e.b.to_expr(&self.variable),
                                }
                            } else {
                                EntryJson::Plain(e.a.to_expr(&self.variable))
                            }
                        })
                        .collect()
                })
                .collect(),
            variable: self.variable.clone(),
        };
        serde_json::to_string_pretty(&json).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: ConnectionJson = serde_json::from_str(text)?;
        let curve = CurveDesc::from_tag(&j.curve)
            .ok_or_else(|| Error::Connection(format!("unknown curve `{}`", j.curve)))?;
        let field = match (j.field.kind.as_str(), j.field.d) {
            ("Q", None) => GroundField::Rationals,
            ("Qsqrt", Some(d)) => GroundField::quadratic(d)?,
            _ => {
                return Err(Error::Connection(
                    "field must be {\"kind\": \"Q\"} or {\"kind\": \"Qsqrt\", \"d\": int}".into(),
                ))
            }
        };
        if j.matrix.len() != j.rank {
            return Err(Error::Connection(format!(
                "rank {} but {} rows",
                j.rank,
                j.matrix.len()
            )));
        }
        let parse = |s: &str| parse_ratfunc::<FieldElem>(s, field, &j.variable);
        let mut matrix = Vec::with_capacity(j.rank);
        for row in &j.matrix {
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                out.push(match (e, curve.is_elliptic()) {
                    (EntryJson::Plain(s), false) => FnElem::from_x(parse(s)?),
                    (EntryJson::Pair { a, b }, true) => FnElem::new(parse(a)?, parse(b)?),
                    (EntryJson::Plain(_), true) => {
                        return Err(Error::Connection(
                            "elliptic entries are objects {\"a\": .., \"b\": ..}".into(),
                        ))
                    }
                    (EntryJson::Pair { .. }, false) => {
                        return Err(Error::Connection(
                            "y-terms only exist on the elliptic curve".into(),
                        ))
                    }
                });
            }
            matrix.push(out);
        }
        Connection::new(j.name, curve, field, j.variable, matrix)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    d: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryJson {
    Plain(String),
    Pair { a: String, b: String },
}

#[derive(Serialize, Deserialize)]
struct ConnectionJson {
    name: String,
    curve: String,
    field: FieldJson,
    rank: usize,
    matrix: Vec<Vec<EntryJson>>,
    variable: String,
}
