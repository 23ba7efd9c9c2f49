//! Pass/fail reports for the verifier operations.
//!
//! A report is a flat list of labelled comparisons. Both sides are kept as
//! strings so integer, dimension-vector and Betti-table comparisons all fit
//! one shape, and the CLI can render them as a table or JSON unchanged.

use std::fmt::Display;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> CheckReport {
        CheckReport::default()
    }

    /// Records a comparison; the item passes iff the two sides are equal.
    pub fn check<T: PartialEq + Display>(
        &mut self,
        label: impl Into<String>,
        lhs: T,
        rhs: T,
    ) -> bool {
        let pass = lhs == rhs;
        self.items.push(CheckItem {
            label: label.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        });
        pass
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}
