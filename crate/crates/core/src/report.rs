use serde::{Deserialize, Serialize};

use crate::series::Series1;
use crate::series2::Series2;

/// Where a checked identity first broke.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one verification suite. A failed check is a value, not an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub order: usize,
    pub pass: bool,
    pub first_failure: Option<Failure>,
}

impl Report {
    pub fn pass(suite: &str, order: usize) -> Self {
        Report { suite: suite.to_string(), order, pass: true, first_failure: None }
    }

    pub fn fail(suite: &str, order: usize, failure: Failure) -> Self {
        Report { suite: suite.to_string(), order, pass: false, first_failure: Some(failure) }
    }

    /// Compares coefficients `0..=upto` of two univariate series.
    pub fn compare1(suite: &str, order: usize, label: &str, lhs: &Series1, rhs: &Series1, upto: usize) -> Self {
        let lhs = lhs.truncate(upto);
        let rhs = rhs.truncate(upto);
        match lhs.first_difference(&rhs) {
            None => Report::pass(suite, order),
            Some(k) => Report::fail(
                suite,
                order,
                Failure {
                    monomial: with_label(label, format!("x^{k}")),
                    lhs: lhs.coeff(k).to_text(lhs.vars()),
                    rhs: rhs.coeff(k).to_text(rhs.vars()),
                },
            ),
        }
    }

    /// Compares coefficients of total degree `≤ upto` of two bivariate series.
    pub fn compare2(suite: &str, order: usize, label: &str, lhs: &Series2, rhs: &Series2, upto: usize) -> Self {
        let lhs = lhs.truncate(upto);
        let rhs = rhs.truncate(upto);
        match lhs.first_difference(&rhs) {
            None => Report::pass(suite, order),
            Some((i, j)) => Report::fail(
                suite,
                order,
                Failure {
                    monomial: with_label(label, format!("x^{i}*y^{j}")),
                    lhs: lhs.coeff(i, j).to_text(lhs.vars()),
                    rhs: rhs.coeff(i, j).to_text(rhs.vars()),
                },
            ),
        }
    }

    pub fn failure_text(suite: &str, order: usize, monomial: String, lhs: &str, rhs: &str) -> Self {
        Report::fail(suite, order, Failure { monomial, lhs: lhs.to_string(), rhs: rhs.to_string() })
    }

    /// Combines sub-checks under one suite name; the first failing one wins.
    pub fn all(suite: &str, order: usize, parts: impl IntoIterator<Item = Report>) -> Self {
        for r in parts {
            if !r.pass {
                return Report { suite: suite.to_string(), order, pass: false, first_failure: r.first_failure };
            }
        }
        Report::pass(suite, order)
    }

    pub fn to_text(&self) -> String {
        match &self.first_failure {
            None => format!("{} (order {}): pass", self.suite, self.order),
            Some(f) => format!(
                "{} (order {}): FAIL at {}: lhs = {}, rhs = {}",
                self.suite, self.order, f.monomial, f.lhs, f.rhs
            ),
        }
    }
}

fn with_label(label: &str, m: String) -> String {
    if label.is_empty() {
        m
    } else {
        format!("{label}: {m}")
    }
}

