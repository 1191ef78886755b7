use std::path::Path;

use ifda::diagnostics::{ConfusionMatrix, DiagnosticsReport};
use ifda::io::write_atomic;
use ifda::simulate::StudyResult;
use ifda::Result;
use serde::Serialize;

pub fn csv_string(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| ifda::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

pub fn confusion_csv(cm: &ConfusionMatrix) -> Result<String> {
    let mut header = vec!["true".to_string()];
    header.extend(cm.classes.iter().cloned());
    if cm.outliers.is_some() {
        header.push("outlier".into());
    }
    let rows: Vec<Vec<String>> = cm
        .rows()
        .into_iter()
        .enumerate()
        .map(|(j, row)| {
            let mut r = vec![cm.classes[j].clone()];
            r.extend(row.iter().map(|c| c.to_string()));
            r
        })
        .collect();
    csv_string(&header, &rows)
}

pub fn diagnostics_csv(report: &DiagnosticsReport, classes: &[String]) -> Result<String> {
    let header: Vec<String> = [
        "id",
        "true",
        "predicted",
        "distance_true",
        "dac",
        "ldac",
        "silhouette",
        "farness",
        "outlyingness",
        "flagged",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let truth = &report.silhouette.truth;
    let rows: Vec<Vec<String>> = (0..report.predicted.len())
        .map(|h| {
            let (farness, outlying, flagged) = match &report.farness {
                Some(t) => (
                    t.own(h).map_or(String::new(), |v| v.to_string()),
                    t.outlyingness[h].to_string(),
                    (t.outlyingness[h] > report.tau).to_string(),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            vec![
                (h + 1).to_string(),
                classes[truth[h]].clone(),
                classes[report.predicted[h]].clone(),
                report.dac[h].own.to_string(),
                report.dac[h].dac.to_string(),
                report.dac[h].ldac.to_string(),
                report.silhouette.values[h].to_string(),
                farness,
                outlying,
                flagged,
            ]
        })
        .collect();
    csv_string(&header, &rows)
}

pub fn replicates_csv(study: &StudyResult) -> Result<String> {
    let mut header: Vec<String> = [
        "replicate",
        "seed",
        "accuracy",
        "macro_f1",
        "gmean",
        "benchmark_accuracy",
        "benchmark_macro_f1",
        "benchmark_gmean",
        "abs_cosine",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let p = study.theoretical_direction.len();
    header.extend((1..=p).map(|i| format!("alpha{i}")));
    let rows: Vec<Vec<String>> = study
        .replicates
        .iter()
        .map(|r| {
            let mut row = vec![
                (r.index + 1).to_string(),
                r.seed.to_string(),
                r.method.accuracy.to_string(),
                r.method.macro_f1.to_string(),
                r.method.gmean.to_string(),
                r.benchmark.accuracy.to_string(),
                r.benchmark.macro_f1.to_string(),
                r.benchmark.gmean.to_string(),
                r.abs_cosine.to_string(),
            ];
            row.extend(r.direction.iter().map(|v| v.to_string()));
            row
        })
        .collect();
    csv_string(&header, &rows)
}
