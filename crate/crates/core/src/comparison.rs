use std::fmt::Display;

use serde::Serialize;

/// One recorded exact comparison with its operands rendered as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Comparison {
    pub fn le<T: PartialOrd + Display>(label: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        Comparison {
            label: label.into(),
            lhs: lhs.to_string(),
            relation: Relation::Le,
            rhs: rhs.to_string(),
            holds: lhs <= rhs,
        }
    }

    pub fn eq<T: PartialEq + Display>(label: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        Comparison {
            label: label.into(),
            lhs: lhs.to_string(),
            relation: Relation::Eq,
            rhs: rhs.to_string(),
            holds: lhs == rhs,
        }
    }

    /// A comparison decided elsewhere (e.g. after an exact rearrangement),
    /// with display strings for the original operands.
    pub fn decided(label: impl Into<String>, lhs: String, relation: Relation, rhs: String, holds: bool) -> Self {
        Comparison { label: label.into(), lhs, relation, rhs, holds }
    }
}

/// Display adaptor printing rationals as `p/q`.
pub(crate) struct R<'a>(pub &'a crate::exact::Rational);

impl Display for R<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::exact::rat_to_string(self.0))
    }
}

impl PartialEq for R<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for R<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.0.partial_cmp(other.0)
    }
}
