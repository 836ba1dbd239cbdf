//! Result CSVs and their readers.

use std::io::{Read, Write};

use threatfuse_core::metrics::MetricsReport;
use threatfuse_core::sim::{SweepKind, SweepRow, SweepTable};

use crate::error::{Error, Result};

/// Fixed-point rendering with at least six significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0.000000".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One classifier evaluated on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub method: String,
    pub scenario: String,
    pub accuracy: f64,
    pub f1: f64,
    /// Per-class F1, keyed by type label, in the scenario's type order.
    pub per_class: Vec<(String, f64)>,
}

impl ExperimentRow {
    pub fn new(method: &str, scenario: &str, types: &[String], report: &MetricsReport) -> Self {
        Self {
            method: method.into(),
            scenario: scenario.into(),
            accuracy: report.accuracy,
            f1: report.macro_f1,
            per_class: types.iter().cloned().zip(report.per_class_f1.iter().copied()).collect(),
        }
    }

    pub fn class_f1(&self, label: &str) -> Option<f64> {
        self.per_class.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

/// Union of the per-class labels of `rows`, in order of first appearance.
pub fn class_columns(rows: &[ExperimentRow]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::new();
    for (label, _) in rows.iter().flat_map(|r| &r.per_class) {
        if !labels.contains(label) {
            labels.push(label.clone());
        }
    }
    labels
}

pub fn write_experiment<W: Write>(out: W, rows: &[ExperimentRow]) -> Result<()> {
    let classes = class_columns(rows);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["method", "scenario", "accuracy", "f1"];
    header.extend(classes.iter().map(String::as_str));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            row.method.clone(),
            row.scenario.clone(),
            format_number(row.accuracy),
            format_number(row.f1),
        ];
        rec.extend(classes.iter().map(|c| row.class_f1(c).map(format_number).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn number(field: &str, what: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::parse("<csv>", format!("{what}: {field:?} is not a number")))
}

pub fn read_experiment<R: Read>(input: R) -> Result<Vec<ExperimentRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let fixed = ["method", "scenario", "accuracy", "f1"];
    if header.len() < fixed.len() || header.iter().zip(fixed).any(|(a, b)| a != b) {
        return Err(Error::parse("<csv>", format!("unexpected experiment header {header:?}")));
    }
    let classes: Vec<String> = header.iter().skip(fixed.len()).map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut per_class = Vec::new();
        for (label, cell) in classes.iter().zip(rec.iter().skip(fixed.len())) {
            if !cell.is_empty() {
                per_class.push((label.clone(), number(cell, label)?));
            }
        }
        rows.push(ExperimentRow {
            method: rec[0].into(),
            scenario: rec[1].into(),
            accuracy: number(&rec[2], "accuracy")?,
            f1: number(&rec[3], "f1")?,
            per_class,
        });
    }
    Ok(rows)
}

fn format_x(kind: SweepKind, x: f64) -> String {
    match kind {
        SweepKind::Sensors => format!("{}", x as usize),
        _ => format_number(x),
    }
}

pub fn write_sweep<W: Write>(out: W, table: &SweepTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(table.kind.columns())?;
    for row in &table.rows {
        let mut rec = vec![format_x(table.kind, row.x)];
        rec.extend(row.accuracy.iter().map(|&a| format_number(a)));
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_sweep<R: Read>(input: R) -> Result<SweepTable> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let kind = [SweepKind::Sensors, SweepKind::Clutter, SweepKind::Prior]
        .into_iter()
        .find(|k| header.iter().eq(k.columns()))
        .ok_or_else(|| Error::parse("<csv>", format!("unexpected sweep header {header:?}")))?;
    let columns = kind.columns();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut accuracy = [0.0; 4];
        for (i, slot) in accuracy.iter_mut().enumerate() {
            *slot = number(&rec[i + 1], columns[i + 1])?;
        }
        rows.push(SweepRow {
            x: number(&rec[0], columns[0])?,
            accuracy,
        });
    }
    Ok(SweepTable { kind, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_number(0.0), "0.000000");
        assert_eq!(format_number(0.7834394904), "0.783439");
        assert_eq!(format_number(0.998), "0.998000");
        assert_eq!(format_number(1.0), "1.00000");
        assert_eq!(format_number(0.001), "0.00100000");
        assert_eq!(format_number(10.0), "10.0000");
        assert_eq!(format_number(123456789.4), "123456789");
        for x in [0.123456789, 3.3e-5, 0.6, 7.25] {
            let back: f64 = format_number(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-5, "{x}");
        }
    }

    fn row(method: &str, scenario: &str, labels: &[&str]) -> ExperimentRow {
        ExperimentRow {
            method: method.into(),
            scenario: scenario.into(),
            accuracy: 0.75,
            f1: 0.5,
            per_class: labels.iter().enumerate().map(|(i, l)| (l.to_string(), 0.1 * i as f64)).collect(),
        }
    }

    #[test]
    fn absent_classes_are_empty_cells() {
        let rows = vec![row("Proposed", "basic", &["A", "B", "C"]), row("Proposed", "cbrne", &["A", "B", "C", "D"])];
        let mut buf = Vec::new();
        write_experiment(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "method,scenario,accuracy,f1,A,B,C,D");
        assert_eq!(lines[1], "Proposed,basic,0.750000,0.500000,0.000000,0.100000,0.200000,");
        let back = read_experiment(buf.as_slice()).unwrap();
        assert_eq!(back[0].class_f1("D"), None);
        assert_eq!(back[1].class_f1("D"), Some(0.3));
    }

    #[test]
    fn sweep_round_trip() {
        let table = SweepTable {
            kind: SweepKind::Sensors,
            rows: vec![
                SweepRow { x: 0.0, accuracy: [0.6, 0.6, 0.6, 0.6] },
                SweepRow { x: 1.0, accuracy: [0.65, 0.7, 0.7, 0.8] },
            ],
        };
        let mut buf = Vec::new();
        write_sweep(&mut buf, &table).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("n_sensors,baseline_no_direct,baseline,proposed_no_direct,proposed\n0,"));
        assert_eq!(read_sweep(buf.as_slice()).unwrap(), table);
        assert!(read_sweep("a,b\n1,2\n".as_bytes()).is_err());
    }
}
