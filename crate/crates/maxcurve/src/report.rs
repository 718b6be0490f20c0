//! Command reports: one fixed envelope for every subcommand, emitted
//! either as JSON or as a human-readable text mirror of the same data.

use serde::Serialize;

/// Field of the computation, as characteristic and extension degree.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
}

/// Envelope around a subcommand's result payload.
///
/// Every field except `elapsed_ms` is deterministic for a fixed input:
/// reruns and different thread counts produce identical payloads.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Subcommand name.
    pub command: String,
    /// Base field of the inputs.
    pub field: FieldSpec,
    /// Names of the registry models consumed.
    pub inputs: Vec<String>,
    /// Subcommand-specific payload.
    pub result: serde_json::Value,
    /// Wall-clock time; the only nondeterministic field.
    pub elapsed_ms: u128,
    /// Crate version that produced the report.
    pub version: String,
}

/// Output format for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

impl Report {
    pub fn new(command: &str, p: u64, k: u32, inputs: &[&str]) -> Report {
        Report {
            command: command.to_string(),
            field: FieldSpec { p, k },
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            result: serde_json::Value::Null,
            elapsed_ms: 0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Render a report in the requested format.  The text form carries the
/// same payload as the JSON form, pretty-printed for terminals.
pub fn report_emit(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .expect("report serialization cannot fail");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("command : {}\n", report.command));
            out.push_str(&format!(
                "field   : F_{}^{} (q = {})\n",
                report.field.p,
                report.field.k,
                report.field.p.pow(report.field.k)
            ));
            if !report.inputs.is_empty() {
                out.push_str(&format!("inputs  : {}\n", report.inputs.join(", ")));
            }
            out.push_str("result  :\n");
            let pretty = serde_json::to_string_pretty(&report.result)
                .expect("payload serialization cannot fail");
            for line in pretty.lines() {
                out.push_str("  ");
                out.push_str(line);
                out.push('\n');
            }
            out.push_str(&format!("elapsed : {} ms\n", report.elapsed_ms));
            out.push_str(&format!("version : {}\n", report.version));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_envelope_has_the_documented_keys() {
        let mut r = Report::new("count", 3, 2, &["C.canonical"]);
        r.result = serde_json::json!({"n": 15});
        r.elapsed_ms = 7;
        let emitted = report_emit(&r, ReportFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&emitted).unwrap();
        let obj = parsed.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["command", "elapsed_ms", "field", "inputs", "result", "version"]
        );
        assert_eq!(parsed["field"]["p"], 3);
        assert_eq!(parsed["field"]["k"], 2);
        assert_eq!(parsed["inputs"][0], "C.canonical");
        assert_eq!(parsed["result"]["n"], 15);
    }

    #[test]
    fn text_mirror_carries_the_same_payload() {
        let mut r = Report::new("count", 3, 1, &["E.weierstrass"]);
        r.result = serde_json::json!({"n": 7, "strategy": "tables"});
        let text = report_emit(&r, ReportFormat::Text);
        assert!(text.contains("command : count"));
        assert!(text.contains("\"n\": 7"));
        assert!(text.contains("\"strategy\": \"tables\""));
        assert!(text.contains("version :"));
    }
}
