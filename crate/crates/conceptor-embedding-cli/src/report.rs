//! Evaluation report rendering: JSON and CSV for machines, a small table
//! for the terminal. Output is byte-deterministic for identical inputs.

use conceptor_embedding::EvalReport;
use serde_json::{json, Map, Value};

pub fn to_json(report: &EvalReport) -> String {
    let mut root = Map::new();
    for (label, result) in report.entries() {
        root.insert(
            label.clone(),
            json!({
                "spearman": result.spearman,
                "n_pairs": result.n_pairs,
                "n_degenerate": result.n_degenerate,
            }),
        );
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("report is valid JSON");
    out.push('\n');
    out
}

/// One row per method, chart-ready.
pub fn to_csv(report: &EvalReport) -> String {
    let mut out = String::from("method,spearman,n_pairs,n_degenerate\n");
    for (label, result) in report.entries() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            label, result.spearman, result.n_pairs, result.n_degenerate
        ));
    }
    out
}

pub fn to_table(report: &EvalReport) -> String {
    let width = report
        .entries()
        .iter()
        .map(|(l, _)| l.len())
        .max()
        .unwrap_or(6)
        .max("method".len());
    let mut out = format!(
        "{:<width$}  {:>9}  {:>7}  {:>12}\n",
        "method", "spearman", "pairs", "degenerate"
    );
    for (label, result) in report.entries() {
        out.push_str(&format!(
            "{:<width$}  {:>9.4}  {:>7}  {:>12}\n",
            label, result.spearman, result.n_pairs, result.n_degenerate
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use conceptor_embedding::MethodResult;

    fn sample() -> EvalReport {
        let mut report = EvalReport::default();
        report.push(
            "average-only".to_string(),
            MethodResult {
                spearman: 0.25,
                n_pairs: 10,
                n_degenerate: 1,
            },
        );
        report.push(
            "conceptor".to_string(),
            MethodResult {
                spearman: 0.75,
                n_pairs: 10,
                n_degenerate: 0,
            },
        );
        report
    }

    #[test]
    fn json_preserves_method_order() {
        let text = to_json(&sample());
        let avg = text.find("average-only").unwrap();
        let con = text.find("conceptor").unwrap();
        assert!(avg < con);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["conceptor"]["spearman"], 0.75);
        assert_eq!(parsed["average-only"]["n_degenerate"], 1);
    }

    #[test]
    fn csv_one_row_per_method() {
        let text = to_csv(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "method,spearman,n_pairs,n_degenerate");
        assert_eq!(lines[1], "average-only,0.25,10,1");
        assert_eq!(lines[2], "conceptor,0.75,10,0");
    }

    #[test]
    fn table_lists_every_method() {
        let text = to_table(&sample());
        assert!(text.contains("average-only"));
        assert!(text.contains("0.7500"));
    }
}
