//! CSV and JSON rendering.
//!
//! CSV: one `# {json}` line of metadata per cell, a header row, then data
//! rows. Floats are written with 17 significant digits, lines end in `\n`.
//! Runs with several cells prefix each row with `cell,bath,alpha,scale`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};
use zeno_core::bath::BathSpec;

use crate::config::RunConfig;
use crate::run::{Field, RunReport};

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(f: &Field) -> String {
    match f {
        Field::Num(v) => fmt_num(*v),
        Field::Int(v) => v.to_string(),
        Field::Text(s) => s.clone(),
        Field::Bool(b) => b.to_string(),
    }
}

fn bath_fields(b: &BathSpec) -> [String; 3] {
    let (alpha, scale) = match *b {
        BathSpec::Lorentzian { alpha, lambda } => (alpha, lambda),
        BathSpec::OhmicDrude { alpha, omega_c } => (alpha, omega_c),
    };
    [b.kind_name().to_string(), fmt_num(alpha), fmt_num(scale)]
}

pub fn render_csv(report: &RunReport) -> String {
    let multi = report.cells.len() > 1;
    let mut out = String::new();
    for c in &report.cells {
        let mut meta = Map::new();
        if multi {
            meta.insert("cell".into(), json!(c.index));
        }
        match &c.outcome {
            Ok(p) => meta.extend(p.meta.clone()),
            Err(e) => {
                meta.insert("bath".into(), serde_json::to_value(c.bath).expect("bath serializes"));
                meta.insert("error".into(), json!(e.to_string()));
            }
        }
        let _ = writeln!(out, "# {}", Value::Object(meta));
    }
    let Some(columns) = report
        .cells
        .iter()
        .find_map(|c| c.outcome.as_ref().ok().map(|p| &p.table.columns))
    else {
        return out;
    };
    let mut header: Vec<&str> = Vec::new();
    if multi {
        header.extend(["cell", "bath", "alpha", "scale"]);
    }
    header.extend(columns.iter().map(String::as_str));
    out.push_str(&header.join(","));
    out.push('\n');
    for c in &report.cells {
        let Ok(p) = &c.outcome else { continue };
        let prefix = bath_fields(&c.bath);
        for row in &p.table.rows {
            let mut fields: Vec<String> = Vec::with_capacity(row.len() + 4);
            if multi {
                fields.push(c.index.to_string());
                fields.extend(prefix.iter().cloned());
            }
            fields.extend(row.iter().map(csv_field));
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
    out
}

#[derive(Serialize)]
struct CellJson<'a> {
    index: usize,
    bath: BathSpec,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a std::collections::BTreeMap<String, Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    columns: Option<&'a [String]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<&'a [Vec<Field>]>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: &'static str,
    task: &'static str,
    config: &'a RunConfig,
    wall_time_s: f64,
    warnings: Vec<String>,
    cells: Vec<CellJson<'a>>,
}

/// The full result envelope. Non-finite numbers become `null`.
pub fn render_json(report: &RunReport, cfg: &RunConfig, wall_time_s: f64) -> String {
    let cells = report
        .cells
        .iter()
        .map(|c| match &c.outcome {
            Ok(p) => CellJson {
                index: c.index,
                bath: c.bath,
                status: "ok",
                error: None,
                meta: Some(&p.meta),
                columns: Some(&p.table.columns),
                rows: Some(&p.table.rows),
            },
            Err(e) => CellJson {
                index: c.index,
                bath: c.bath,
                status: "error",
                error: Some(e.to_string()),
                meta: None,
                columns: None,
                rows: None,
            },
        })
        .collect();
    let env = Envelope {
        version: env!("CARGO_PKG_VERSION"),
        task: report.task.as_str(),
        config: cfg,
        wall_time_s,
        warnings: report.warnings(),
        cells,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Task;
    use crate::run::{CellPayload, CellReport, Table};
    use std::collections::BTreeMap;

    fn report(cells: usize) -> RunReport {
        let payload = CellPayload {
            meta: BTreeMap::from([("eta".to_string(), json!(0.5))]),
            table: Table {
                columns: vec!["tau".into(), "regime".into()],
                rows: vec![vec![Field::Num(0.1), "zeno".into()], vec![Field::Num(f64::NAN), "neutral".into()]],
            },
            warnings: vec![],
        };
        RunReport {
            task: Task::Zeno,
            cells: (0..cells)
                .map(|index| CellReport {
                    index,
                    bath: BathSpec::Lorentzian { alpha: 0.01, lambda: 0.09 },
                    outcome: if index == 1 {
                        Err(zeno_core::Error::Numerical("boom".into()))
                    } else {
                        Ok(payload.clone())
                    },
                })
                .collect(),
        }
    }

    #[test]
    fn single_cell_layout() {
        let s = render_csv(&report(1));
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], r#"# {"eta":0.5}"#);
        assert_eq!(lines[1], "tau,regime");
        assert_eq!(lines[2], "1.0000000000000001e-1,zeno");
        assert_eq!(lines[3], "NaN,neutral");
        assert!(!s.contains('\r'));
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn multi_cell_layout() {
        let s = render_csv(&report(3));
        assert!(s.contains(r#""cell":1,"error":"#));
        assert!(s.contains("cell,bath,alpha,scale,tau,regime\n"));
        assert!(s.contains("\n2,lorentzian,1.0000000000000000e-2,8.9999999999999997e-2,1.0000000000000001e-1,zeno\n"));
        assert!(!s.lines().any(|l| l.starts_with("1,")));
    }

    #[test]
    fn json_envelope() {
        let cfg = RunConfig::default();
        let s = render_json(&report(2), &cfg, 0.25);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["task"], "zeno");
        assert_eq!(v["cells"][1]["status"], "error");
        assert_eq!(v["cells"][0]["rows"][1][0], Value::Null);
        assert_eq!(v["config"]["bath"]["alpha"], json!(0.01));
        assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    }
}
