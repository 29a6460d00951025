use serde_json::{json, Map, Value};
use sos_core::format::sig12;

/// Output of one command at one sweep point.
#[derive(Debug, Clone, Default)]
pub struct Section {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `# ...` lines for CSV.
    pub notes: Vec<String>,
    pub summary: Value,
    /// Set when a tolerance check of the command failed.
    pub failure: Option<String>,
}

impl Section {
    pub fn new(columns: &[&str]) -> Self {
        Section {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            summary: Value::Object(Map::new()),
            ..Section::default()
        }
    }
}

pub struct Run<'a> {
    pub command: &'a str,
    pub config: &'a Value,
    pub sweeps: &'a [String],
    pub points: &'a [Vec<(String, f64)>],
    pub sections: &'a [Section],
}

pub fn csv(run: &Run) -> String {
    let mut out = String::new();
    let sweeps = if run.sweeps.is_empty() {
        String::new()
    } else {
        format!(" sweep={}", run.sweeps.join(","))
    };
    out.push_str(&format!(
        "# sos {} config={}{sweeps}\n",
        run.command,
        serde_json::to_string(run.config).expect("config serializes")
    ));
    for (point, section) in run.points.iter().zip(run.sections) {
        let tag = point_tag(point);
        for note in &section.notes {
            out.push_str(&format!("# {tag}{note}\n"));
        }
        if let Some(f) = &section.failure {
            out.push_str(&format!("# {tag}FAILED: {f}\n"));
        }
    }
    let mut header: Vec<String> = run
        .points
        .first()
        .map(|p| p.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    // a swept parameter that is also an output column is printed once
    let keep: Vec<bool> = run
        .sections
        .first()
        .map(|s| s.columns.iter().map(|c| !header.contains(c)).collect())
        .unwrap_or_default();
    if let Some(first) = run.sections.first() {
        header.extend(first.columns.iter().zip(&keep).filter(|(_, k)| **k).map(|(c, _)| c.clone()));
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for (point, section) in run.points.iter().zip(run.sections) {
        for row in &section.rows {
            let cells: Vec<String> = point
                .iter()
                .map(|(_, v)| *v)
                .chain(row.iter().zip(&keep).filter(|(_, k)| **k).map(|(v, _)| *v))
                .map(sig12)
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    out
}

fn point_tag(point: &[(String, f64)]) -> String {
    if point.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = point.iter().map(|(k, v)| format!("{k}={}", sig12(*v))).collect();
    format!("[{}] ", parts.join(" "))
}

/// Pretty JSON; `serde_json` maps are ordered, so keys come out sorted.
pub fn json(run: &Run) -> String {
    let results: Vec<Value> = run
        .points
        .iter()
        .zip(run.sections)
        .map(|(point, s)| {
            let p: Map<String, Value> = point.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            json!({
                "point": p,
                "columns": s.columns,
                "rows": s.rows,
                "summary": s.summary,
                "failure": s.failure,
            })
        })
        .collect();
    let doc = json!({
        "command": run.command,
        "config": run.config,
        "sweeps": run.sweeps,
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json serializes");
    text.push('\n');
    text
}
