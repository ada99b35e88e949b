//! Direct prescription from data: the feasible record with the smallest
//! objective.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Cat(String),
}

impl Value {
    pub fn parse(raw: &str) -> Self {
        let raw = raw.trim();
        raw.parse::<f64>().map(Value::Num).unwrap_or_else(|_| Value::Cat(raw.to_string()))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Cat(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }
}

/// `feature op value`: a numeric interval bound or a categorical equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub feature: String,
    pub op: CmpOp,
    pub value: Value,
}

impl Constraint {
    pub fn new(feature: impl Into<String>, op: CmpOp, value: Value) -> Self {
        Self {
            feature: feature.into(),
            op,
            value,
        }
    }

    fn holds(&self, x: &Value) -> Result<bool> {
        use CmpOp::*;
        Ok(match (x, &self.value, self.op) {
            (Value::Num(a), Value::Num(b), op) => match op {
                Lt => a < b,
                Le => a <= b,
                Gt => a > b,
                Ge => a >= b,
                Eq => a == b,
                Ne => a != b,
            },
            (a, b, Eq) => a.to_string() == b.to_string(),
            (a, b, Ne) => a.to_string() != b.to_string(),
            (a, b, op) => {
                return Err(Error::Domain(format!(
                    "`{} {} {b}` compares a categorical value (`{a}`) by order",
                    self.feature,
                    op.symbol()
                )))
            }
        })
    }
}

impl FromStr for Constraint {
    type Err = Error;

    /// Parses `x>=2`, `region==north`, `region=north`, `y!=0`, ...
    fn from_str(s: &str) -> Result<Self> {
        const OPS: [(&str, CmpOp); 7] = [
            (">=", CmpOp::Ge),
            ("<=", CmpOp::Le),
            ("==", CmpOp::Eq),
            ("!=", CmpOp::Ne),
            (">", CmpOp::Gt),
            ("<", CmpOp::Lt),
            ("=", CmpOp::Eq),
        ];
        let (pos, sym, op) = OPS
            .iter()
            .filter_map(|&(sym, op)| s.find(sym).map(|p| (p, sym, op)))
            .min_by_key(|&(p, sym, _)| (p, usize::MAX - sym.len()))
            .ok_or_else(|| Error::config(format!("constraint `{s}` has no comparison operator")))?;
        let feature = s[..pos].trim();
        let value = s[pos + sym.len()..].trim();
        if feature.is_empty() || value.is_empty() {
            return Err(Error::config(format!("constraint `{s}` needs a feature and a value")));
        }
        Ok(Constraint::new(feature, op, Value::parse(value)))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.feature, self.op.symbol(), self.value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub x: Vec<Value>,
    pub f: f64,
}

/// Candidate records sharing one feature schema, plus the constraints a
/// prescription must satisfy.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrescriptionDataset {
    pub features: Vec<String>,
    pub records: Vec<Record>,
    pub constraints: Vec<Constraint>,
}

impl PrescriptionDataset {
    pub fn new(features: Vec<String>, records: Vec<Record>) -> Result<Self> {
        if let Some(r) = records.iter().position(|r| r.x.len() != features.len()) {
            return Err(Error::Domain(format!("record {r} does not match the {}-feature schema", features.len())));
        }
        Ok(Self {
            features,
            records,
            constraints: Vec::new(),
        })
    }

    /// Reads a CSV with a header row; the objective column is named `f`,
    /// every other column is a feature.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        let f_col = header
            .iter()
            .position(|h| h == "f")
            .ok_or_else(|| Error::config("dataset has no objective column `f`"))?;
        let features = header
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != f_col)
            .map(|(_, h)| h.to_string())
            .collect();
        let mut records = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let f = rec[f_col]
                .parse::<f64>()
                .map_err(|_| Error::config(format!("row {}: objective `{}` is not a number", row + 1, &rec[f_col])))?;
            let x = rec
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != f_col)
                .map(|(_, v)| Value::parse(v))
                .collect();
            records.push(Record { x, f });
        }
        Self::new(features, records)
    }

    pub fn with_constraints(mut self, constraints: Vec<Constraint>) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Prescription {
    Feasible { index: usize, record: Record },
    Infeasible,
}

/// The feasible record with minimal `f`; ties go to the lowest index.
pub fn olp_prescribe(ds: &PrescriptionDataset) -> Result<Prescription> {
    let columns = ds
        .constraints
        .iter()
        .map(|c| {
            ds.feature_index(&c.feature)
                .ok_or_else(|| Error::config(format!("constraint on unknown feature `{}`", c.feature)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<usize> = None;
    for (i, rec) in ds.records.iter().enumerate() {
        let mut feasible = true;
        for (c, &col) in ds.constraints.iter().zip(&columns) {
            if !c.holds(&rec.x[col])? {
                feasible = false;
                break;
            }
        }
        if feasible && best.map_or(true, |b| rec.f < ds.records[b].f) {
            best = Some(i);
        }
    }
    Ok(match best {
        Some(index) => Prescription::Feasible {
            index,
            record: ds.records[index].clone(),
        },
        None => Prescription::Infeasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> PrescriptionDataset {
        PrescriptionDataset::from_csv("x,f\n1,5\n2,3\n3,4\n".as_bytes()).unwrap()
    }

    #[test]
    fn constrained_argmin() {
        let ds = three().with_constraints(vec!["x>=2".parse().unwrap()]);
        match olp_prescribe(&ds).unwrap() {
            Prescription::Feasible { index, record } => {
                assert_eq!(index, 1);
                assert_eq!(record.x, vec![Value::Num(2.0)]);
                assert_eq!(record.f, 3.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unconstrained_is_global_argmin() {
        let ds = PrescriptionDataset::from_csv("x,f\n1,5\n2,1\n3,1\n".as_bytes()).unwrap();
        assert!(matches!(olp_prescribe(&ds).unwrap(), Prescription::Feasible { index: 1, .. }));
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let ds = three().with_constraints(vec!["x>2".parse().unwrap(), "x<2".parse().unwrap()]);
        assert_eq!(olp_prescribe(&ds).unwrap(), Prescription::Infeasible);
    }

    #[test]
    fn categorical_equality() {
        let ds = PrescriptionDataset::from_csv("region,cost,f\nnorth,1,9\nsouth,2,4\nnorth,3,7\n".as_bytes())
            .unwrap()
            .with_constraints(vec!["region=north".parse().unwrap()]);
        assert!(matches!(olp_prescribe(&ds).unwrap(), Prescription::Feasible { index: 2, .. }));
        let bad = ds.with_constraints(vec!["region>north".parse().unwrap()]);
        assert!(olp_prescribe(&bad).is_err());
    }

    #[test]
    fn constraint_parsing() {
        let c: Constraint = "x >= 2.5".parse().unwrap();
        assert_eq!(c, Constraint::new("x", CmpOp::Ge, Value::Num(2.5)));
        let c: Constraint = "y!=0".parse().unwrap();
        assert_eq!(c.op, CmpOp::Ne);
        let c: Constraint = "y<-1".parse().unwrap();
        assert_eq!(c, Constraint::new("y", CmpOp::Lt, Value::Num(-1.0)));
        assert!("x".parse::<Constraint>().is_err());
        assert!(">=3".parse::<Constraint>().is_err());
    }

    #[test]
    fn unknown_feature_is_an_error() {
        let ds = three().with_constraints(vec!["z>1".parse().unwrap()]);
        assert!(olp_prescribe(&ds).is_err());
    }

    #[test]
    fn missing_objective_column() {
        assert!(PrescriptionDataset::from_csv("x,y\n1,2\n".as_bytes()).is_err());
    }
}
