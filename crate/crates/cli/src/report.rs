use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "1";

/// Outcome class, mapped to the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Definitive,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Definitive => 0,
            Status::Unknown => 2,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub op: &'static str,
    pub status: Status,
    /// `sha256:<hex>` of each input file, by role.
    pub input_digest: Value,
    /// Parsed inputs and effective parameters; enough to rerun.
    pub input: Value,
    /// Finite-truncation parameters every result is relative to.
    pub truncation: Value,
    pub result: Value,
    pub stats: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip)]
    pub table: String,
}

impl Report {
    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("op: {}\nstatus: {:?}\n", self.op, self.status).to_lowercase();
        if let Value::Object(t) = &self.truncation {
            for (k, v) in t {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        out.push_str(&self.table);
        if !self.table.ends_with('\n') {
            out.push('\n');
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("time: {ms:.1} ms\n"));
        }
        out
    }
}
