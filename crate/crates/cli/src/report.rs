//! Report rendering. JSON reports embed the full run configuration and
//! crate versions; keys are sorted and no timings are included, so equal
//! configurations give byte-identical output.

use serde_json::{json, Value};

use crate::{Cli, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Completed,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Completed => 0,
            Status::Inconclusive => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::Inconclusive => "inconclusive",
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub json: Value,
    /// CSV columns, fixed per command.
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
}

impl Outcome {
    /// A budget cut; CSV output is a single `status` column.
    pub fn inconclusive(json: Value, text: String) -> Self {
        Outcome {
            status: Status::Inconclusive,
            json,
            header: vec!["status"],
            rows: vec![vec!["inconclusive".into()]],
            text,
        }
    }
}

pub fn render(cli: &Cli, outcome: &Outcome) -> String {
    match cli.format {
        Format::Text => outcome.text.clone(),
        Format::Json => {
            let report = json!({
                "tool": "graphburn",
                "versions": {
                    "graphburn-cli": env!("CARGO_PKG_VERSION"),
                    "graphburn": graphburn::VERSION,
                },
                "config": cli,
                "status": outcome.status.label(),
                "result": outcome.json,
            });
            serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.header).expect("in-memory write");
            for row in &outcome.rows {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
    }
}
