//! Problem files: a JSON object with the matrix, data and optional inputs.
//!
//! Rationals are written as strings `"p/q"` or `"p"` (plain JSON integers are
//! accepted too); subsets use 1-based column labels.

use serde::Deserialize;

use crate::linalg::{IntMatrix, Rat};
use crate::subset::Subset;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    #[serde(default)]
    pub w: Option<Vec<Rat>>,
    #[serde(default)]
    pub tau: Option<Subset>,
    #[serde(default)]
    pub omega: Option<Vec<Rat>>,
    #[serde(default)]
    pub triangulation: Option<Vec<Subset>>,
    #[serde(default)]
    pub point: Option<Vec<Rat>>,
    #[serde(default)]
    pub face: Option<Subset>,
    #[serde(default)]
    pub tips: Option<TipsSettings>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TipsSettings {
    #[serde(default)]
    pub q0: Option<Vec<Rat>>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub tol: Option<Rat>,
    /// An explicit nonnegative matrix with constant column sums.
    #[serde(default, rename = "A")]
    pub a: Option<Vec<Vec<i64>>>,
}

/// Problems reading a problem file, reported with the offending field.
#[derive(Debug, thiserror::Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, ProblemError> {
        let p: ProblemFile = serde_json::from_str(text)?;
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), ProblemError> {
        let field_err = |field, message: String| Err(ProblemError::Field { field, message });
        let Some(first) = self.a.first() else {
            return field_err("A", "matrix has no rows".into());
        };
        let n = first.len();
        if let Some(i) = self.a.iter().position(|r| r.len() != n) {
            return field_err("A", format!("row {} has {} entries, expected {n}", i + 1, self.a[i].len()));
        }
        let check_len = |field, len: Option<usize>| match len {
            Some(l) if l != n => field_err(field, format!("has {l} entries, expected {n}")),
            _ => Ok(()),
        };
        check_len("w", self.w.as_ref().map(Vec::len))?;
        check_len("omega", self.omega.as_ref().map(Vec::len))?;
        check_len("point", self.point.as_ref().map(Vec::len))?;
        if let Some(t) = &self.tips {
            check_len("tips.q0", t.q0.as_ref().map(Vec::len))?;
            if let Some(m) = &t.a {
                if m.iter().any(|r| r.len() != n) {
                    return field_err("tips.A", format!("every row needs {n} entries"));
                }
            }
        }
        let full = Subset::full(n.min(64));
        let in_range = |field, s: Subset| {
            if s.is_subset(full) {
                Ok(())
            } else {
                field_err(field, format!("labels must lie in 1..={n}"))
            }
        };
        if let Some(t) = self.tau {
            in_range("tau", t)?;
        }
        if let Some(f) = self.face {
            in_range("face", f)?;
        }
        for s in self.triangulation.iter().flatten() {
            in_range("triangulation", *s)?;
        }
        Ok(())
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.a).expect("rows checked on parse")
    }

    pub fn require<'a, T>(field: &'static str, value: &'a Option<T>) -> Result<&'a T, ProblemError> {
        value.as_ref().ok_or(ProblemError::Field { field, message: "required by this command".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_labels() {
        let p = ProblemFile::parse(r#"{"A": [[1,1,1],[0,1,3]], "w": ["0", "1/2", 5], "tau": [1, 3]}"#).unwrap();
        assert_eq!(p.w.unwrap(), vec![Rat::zero(), Rat::new(1, 2), Rat::from(5)]);
        assert_eq!(p.tau.unwrap(), Subset::from_iter([0, 2]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ProblemFile::parse(r#"{"A": [[1,1],[0]]}"#), Err(ProblemError::Field { field: "A", .. })));
        assert!(matches!(ProblemFile::parse(r#"{"A": [[1,1]], "w": [0]}"#), Err(ProblemError::Field { field: "w", .. })));
        assert!(matches!(ProblemFile::parse(r#"{"A": [[1,1]], "w": [0.5, 1]}"#), Err(ProblemError::Json(_))));
        assert!(matches!(ProblemFile::parse(r#"{"A": [[1,1]], "tau": [3]}"#), Err(ProblemError::Field { field: "tau", .. })));
        assert!(matches!(ProblemFile::parse(r#"{"A": [[1,1]], "colour": 1}"#), Err(ProblemError::Json(_))));
        let err = ProblemFile::parse("{\"A\": [[1,1]],\n \"w\": [\"x\", 1]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
