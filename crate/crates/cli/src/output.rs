//! Report rendering: aligned plain-text tables and machine-readable JSON.
//! Both carry exactly the same numbers; wall-clock timings appear only in
//! the table footer so JSON output is byte-stable for a fixed seed.

use std::time::Duration;

use serde::Serialize;

use mucoh_core::report::{CheckItem, CheckReport};

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// A rendered verification run: status plus labelled comparisons.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub items: Vec<CheckItem>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn from_check(command: &str, check: CheckReport) -> Report {
        Report {
            command: command.to_string(),
            status: if check.passed() { "pass" } else { "fail" }.to_string(),
            seed: None,
            trials: None,
            items: check.items,
            elapsed: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Json => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(self).expect("report serializes")
                );
            }
            Format::Table => self.print_table(),
        }
    }

    fn print_table(&self) {
        let label_w = column_width(self.items.iter().map(|i| i.label.len()), "check");
        let lhs_w = column_width(self.items.iter().map(|i| i.lhs.len()), "lhs");
        let rhs_w = column_width(self.items.iter().map(|i| i.rhs.len()), "rhs");
        println!(
            "{:<label_w$}  {:>lhs_w$}  {:>rhs_w$}  ok",
            "check", "lhs", "rhs"
        );
        for item in &self.items {
            println!(
                "{:<label_w$}  {:>lhs_w$}  {:>rhs_w$}  {}",
                item.label,
                item.lhs,
                item.rhs,
                if item.pass { "yes" } else { "NO" }
            );
        }
        let failed = self.items.iter().filter(|i| !i.pass).count();
        let mut footer = format!(
            "status: {} ({} checks, {} failed)",
            self.status,
            self.items.len(),
            failed
        );
        if let Some(elapsed) = self.elapsed {
            footer.push_str(&format!(" in {:.3}s", elapsed.as_secs_f64()));
        }
        println!("{footer}");
    }
}

fn column_width(lens: impl Iterator<Item = usize>, header: &str) -> usize {
    lens.chain(std::iter::once(header.len())).max().unwrap_or(0)
}

/// A table of labelled values (no pass/fail), for the value-producing
/// commands.
#[derive(Serialize)]
pub struct ValueTable {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ValueTable {
    pub fn print(&self, format: Format) {
        match format {
            Format::Json => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(self).expect("table serializes")
                );
            }
            Format::Table => {
                let widths: Vec<usize> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(c, h)| {
                        self.rows
                            .iter()
                            .map(|r| r[c].len())
                            .chain(std::iter::once(h.len()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let header: Vec<String> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(c, h)| format!("{:<w$}", h, w = widths[c]))
                    .collect();
                println!("{}", header.join("  ").trim_end());
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .enumerate()
                        .map(|(c, v)| format!("{:<w$}", v, w = widths[c]))
                        .collect();
                    println!("{}", cells.join("  ").trim_end());
                }
            }
        }
    }
}
