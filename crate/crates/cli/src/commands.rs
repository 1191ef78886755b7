use std::fs;
use std::path::Path;

use ifda::classifier::{self, TuneConfig};
use ifda::diagnostics::{self, fit_farness, DiagnosticsReport, DistanceScale, FarnessParams, Metrics};
use ifda::fisher::{FisherConfig, OrthogonalityMode};
use ifda::interval::{delta_of, IntervalFrame};
use ifda::io::{read_csv_file, write_atomic, ModelFile};
use ifda::plots::{class_map_svg, farness_svg, mosaic_svg, silhouette_svg, PlotStyle};
use ifda::simulate::{run_study, Case, Measures, ScenarioSpec};
use ifda::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::output::{confusion_csv, csv_string, diagnostics_csv, replicates_csv, write_json};
use crate::SolverArgs;

fn parse_delta(raw: &str) -> Result<f64> {
    match raw.trim().parse::<f64>() {
        Ok(v) => Ok(v),
        Err(_) => delta_of(raw.trim()),
    }
}

fn solver_config(args: &SolverArgs, s: usize) -> Result<FisherConfig> {
    Ok(FisherConfig {
        delta: parse_delta(&args.delta)?,
        s,
        mode: args.mode.parse::<OrthogonalityMode>()?,
        ridge: args.ridge,
        seed: args.seed,
        random_starts: args.random_starts,
        max_iterations: args.max_iterations,
        ..FisherConfig::default()
    })
}

fn labelled_frame(path: &Path, classes: Option<&[String]>) -> Result<IntervalFrame> {
    let frame = read_csv_file(path, classes)?;
    if frame.labels().is_none() {
        return Err(Error::Schema(format!("`{}` has no `label` column", path.display())));
    }
    Ok(frame)
}

/// Farness parameters are optional in a model: tiny or constant classes
/// cannot be standardised, which only disables the outlier diagnostics.
fn farness_or_warn(model: &classifier::FittedModel, frame: &IntervalFrame) -> Result<Option<FarnessParams>> {
    match fit_farness(model, frame) {
        Ok(p) => Ok(Some(p)),
        Err(e @ (Error::ClassTooSmall { .. } | Error::ZeroScale(_))) => {
            eprintln!("warning: farness disabled: {e}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn print_fit(model: &classifier::FittedModel) {
    println!("s_effective: {}", model.basis.s_effective());
    for (t, r) in model.basis.ratios.iter().enumerate() {
        println!("ratio {}: {r}", t + 1);
    }
}

pub fn fit(data: &Path, solver: &SolverArgs, s: usize, out: &Path) -> Result<()> {
    let frame = labelled_frame(data, None)?;
    let cfg = solver_config(solver, s)?;
    let model = classifier::fit(&frame, &cfg)?;
    let params = farness_or_warn(&model, &frame)?;
    ModelFile::from_model(&model, params, frame.variable_names()).save(out)?;
    print_fit(&model);
    Ok(())
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidConfig(format!("`{}` is not a valid {what} value", v.trim())))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn tune(
    data: &Path,
    solver: &SolverArgs,
    delta_grid: Option<&str>,
    s_grid: Option<&str>,
    splits: usize,
    split_fraction: f64,
    out: Option<&Path>,
    model_out: Option<&Path>,
) -> Result<()> {
    let frame = labelled_frame(data, None)?;
    let mut cfg = TuneConfig::defaults_for(frame.n_vars());
    if let Some(raw) = delta_grid {
        cfg.delta_grid = raw.split(',').map(parse_delta).collect::<Result<_>>()?;
    }
    if let Some(raw) = s_grid {
        cfg.s_grid = parse_list(raw, "s")?;
    }
    cfg.n_splits = splits;
    cfg.split_fraction = split_fraction;
    cfg.seed = solver.seed;
    let base = solver_config(solver, 1)?;
    let outcome = classifier::tune(&frame, &cfg, &base)?;

    let header: Vec<String> = ["delta", "s", "mean_accuracy"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = outcome
        .table
        .iter()
        .map(|r| vec![r.delta.to_string(), r.s.to_string(), r.mean_accuracy.to_string()])
        .collect();
    let table = csv_string(&header, &rows)?;
    print!("{table}");
    println!("# selected delta={} s={}", outcome.delta, outcome.s);
    if let Some(path) = out {
        write_atomic(path, table.as_bytes())?;
    }
    if let Some(path) = model_out {
        let params = farness_or_warn(&outcome.model, &frame)?;
        ModelFile::from_model(&outcome.model, params, frame.variable_names()).save(path)?;
    }
    Ok(())
}

/// Everything `plot` needs, written by `evaluate`.
#[derive(Debug, Serialize, Deserialize)]
pub struct EvaluationFile {
    pub classes: Vec<String>,
    pub priors: Vec<f64>,
    pub tau: f64,
    pub report: DiagnosticsReport,
}

#[derive(Debug, Serialize)]
struct MetricsFile<'a> {
    classes: &'a [String],
    tau: f64,
    delta: f64,
    s: usize,
    ratios: &'a [f64],
    outlier_count: Option<usize>,
    metrics: &'a Metrics,
}

pub fn evaluate(model_path: &Path, data: &Path, tau: f64, scale: &str, out_dir: &Path) -> Result<()> {
    let file = ModelFile::load(model_path)?;
    let model = file.to_model()?;
    let scale: DistanceScale = scale.parse()?;
    let frame = labelled_frame(data, Some(&model.classes))?;
    let report = diagnostics::evaluate(&model, file.farness.as_ref(), &frame, tau, scale)?;
    fs::create_dir_all(out_dir)?;

    let outlier_count = report
        .confusion_with_outliers
        .as_ref()
        .map(|cm| (0..cm.n_classes()).map(|j| cm.outlier(j)).sum());
    let metrics = MetricsFile {
        classes: &model.classes,
        tau,
        delta: model.delta,
        s: model.s(),
        ratios: &model.basis.ratios,
        outlier_count,
        metrics: &report.metrics,
    };
    write_json(&out_dir.join("metrics.json"), &metrics)?;
    let cm = report.confusion_with_outliers.as_ref().unwrap_or(&report.confusion);
    write_atomic(&out_dir.join("confusion.csv"), confusion_csv(cm)?.as_bytes())?;
    write_atomic(
        &out_dir.join("diagnostics.csv"),
        diagnostics_csv(&report, &model.classes)?.as_bytes(),
    )?;
    println!("accuracy: {}", report.metrics.accuracy);
    match outlier_count {
        Some(k) => println!("outliers: {k}"),
        None => println!("outliers: unavailable (model has no farness parameters)"),
    }
    let evaluation = EvaluationFile {
        classes: model.classes.clone(),
        priors: model.priors.clone(),
        tau,
        report,
    };
    write_json(&out_dir.join("report.json"), &evaluation)
}

#[derive(Debug, Serialize)]
struct SummaryFile<'a> {
    case: String,
    p1: f64,
    m: usize,
    seed: u64,
    mse: &'a Measures,
    one_minus_acv: f64,
    theoretical_direction: &'a [f64],
}

pub fn simulate(case: &str, p1: f64, m: usize, seed: u64, out_dir: &Path) -> Result<()> {
    let case: Case = case.parse()?;
    if p1 != 0.2 && p1 != 0.5 {
        return Err(Error::InvalidConfig(format!("p1 = {p1} must be 0.2 or 0.5")));
    }
    if m == 0 {
        return Err(Error::InvalidConfig("m must be at least 1".into()));
    }
    let spec = ScenarioSpec::new(case, p1, seed)?;
    let study = run_study(&spec, m, &FisherConfig::default())?;
    fs::create_dir_all(out_dir)?;
    write_atomic(&out_dir.join("replicates.csv"), replicates_csv(&study)?.as_bytes())?;
    let summary = SummaryFile {
        case: case.to_string(),
        p1,
        m,
        seed,
        mse: &study.mse,
        one_minus_acv: study.one_minus_acv,
        theoretical_direction: &study.theoretical_direction,
    };
    write_json(&out_dir.join("summary.json"), &summary)?;
    println!("MSE(Acc): {}", study.mse.accuracy);
    println!("MSE(macroF1): {}", study.mse.macro_f1);
    println!("MSE(Gmean): {}", study.mse.gmean);
    println!("1-ACV: {}", study.one_minus_acv);
    Ok(())
}

pub fn plot(kind: &str, report_path: &Path, class: Option<&str>, out: &Path) -> Result<()> {
    let text = fs::read_to_string(report_path)?;
    let ev: EvaluationFile = serde_json::from_str(&text)?;
    let style = PlotStyle::default();
    let r = &ev.report;
    let need_farness = || {
        r.farness
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("report has no farness values; the model lacks farness parameters".into()))
    };
    let svg = match kind {
        "mosaic" => {
            let cm = r.confusion_with_outliers.as_ref().unwrap_or(&r.confusion);
            mosaic_svg(cm, &ev.priors, &style)?
        }
        "farness" => farness_svg(need_farness()?, &ev.classes, ev.tau, &style)?,
        "classmap" => {
            let name = class.ok_or_else(|| Error::InvalidConfig("--kind classmap requires --class".into()))?;
            let j = ev
                .classes
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::UnknownClass(name.to_string()))?;
            need_farness()?;
            let records: Vec<_> = r
                .class_map
                .iter()
                .flatten()
                .filter(|rec| rec.true_class == j)
                .cloned()
                .collect();
            class_map_svg(&records, &ev.classes, ev.tau, &style)?
        }
        "silhouette" => silhouette_svg(&r.silhouette, &style)?,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown plot kind `{other}`, expected mosaic, farness, classmap or silhouette"
            )))
        }
    };
    write_atomic(out, svg.as_bytes())
}
