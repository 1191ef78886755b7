use serde::{Deserialize, Serialize};

use super::{unit_ticks, Canvas, PlotStyle};
use crate::diagnostics::{ClassMapRecord, FarnessTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Class whose colour the marker takes (the predicted class).
    pub colour_class: usize,
    /// Drawn as a triangle.
    pub flagged: bool,
}

fn check_tau(tau: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("threshold {tau} must lie in [0, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarnessLayout {
    pub points: Vec<PlotPoint>,
    /// x positions of the boundaries between true-class blocks.
    pub separators: Vec<f64>,
    pub threshold: f64,
}

/// Observations ordered by true class (stable), farness from the true class
/// on the y axis; without labels, the minimum farness is shown in input order.
pub fn farness_layout(table: &FarnessTable, tau: f64) -> Result<FarnessLayout> {
    check_tau(tau)?;
    let n = table.n_obs();
    let g = table.values.first().map_or(0, |r| r.len());
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(t) = &table.truth {
        order.sort_by_key(|&h| t[h]);
    }
    let points = order
        .iter()
        .enumerate()
        .map(|(i, &h)| PlotPoint {
            id: h,
            x: (i as f64 + 0.5) / n as f64,
            y: table.own(h).unwrap_or(table.outlyingness[h]),
            colour_class: table.predicted[h],
            flagged: table.outlyingness[h] > tau,
        })
        .collect();
    let separators = match &table.truth {
        Some(t) if g > 1 => {
            let mut cum = 0;
            (0..g - 1)
                .map(|j| {
                    cum += t.iter().filter(|&&c| c == j).count();
                    cum as f64 / n as f64
                })
                .collect()
        }
        _ => Vec::new(),
    };
    Ok(FarnessLayout {
        points,
        separators,
        threshold: tau,
    })
}

pub fn farness_svg(table: &FarnessTable, classes: &[String], tau: f64, style: &PlotStyle) -> Result<String> {
    let layout = farness_layout(table, tau)?;
    let mut c = Canvas::new(style, "Farness plot", classes);
    c.frame();
    for &x in &layout.separators {
        c.line(x, 0.0, x, 1.0, Some("1 3"), "separator");
    }
    c.line(0.0, tau, 1.0, tau, Some(&style.threshold_dash), "threshold");
    for p in &layout.points {
        let fill = style.colour(p.colour_class).to_string();
        if p.flagged {
            c.triangle(p.x, p.y, &fill);
        } else {
            c.circle(p.x, p.y, &fill);
        }
    }
    c.y_ticks(&unit_ticks());
    c.axis_labels("observation (ordered by true class)", "farness");
    Ok(c.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMapLayout {
    pub true_class: usize,
    pub points: Vec<PlotPoint>,
    pub threshold: f64,
}

/// Farness from the true class on the x axis and ℓDAC on the y axis for the
/// members of one true class. Regular, correctly classified points fall in
/// the bottom-left quadrant and correctly classified global outliers in the
/// bottom-right one.
pub fn class_map_layout(records: &[ClassMapRecord], tau: f64) -> Result<ClassMapLayout> {
    check_tau(tau)?;
    let first = records.first().ok_or(Error::EmptyClass)?;
    if records.iter().any(|r| r.true_class != first.true_class) {
        return Err(Error::InvalidConfig("class map records must share one true class".into()));
    }
    let points = records
        .iter()
        .map(|r| PlotPoint {
            id: r.id,
            x: r.farness.clamp(0.0, 1.0),
            y: r.ldac.clamp(0.0, 1.0),
            colour_class: r.predicted,
            flagged: r.flagged,
        })
        .collect();
    Ok(ClassMapLayout {
        true_class: first.true_class,
        points,
        threshold: tau,
    })
}

pub fn class_map_svg(records: &[ClassMapRecord], classes: &[String], tau: f64, style: &PlotStyle) -> Result<String> {
    let layout = class_map_layout(records, tau)?;
    let name = classes.get(layout.true_class).map_or("?", |s| s.as_str());
    let mut c = Canvas::new(style, &format!("Class map for class {name}"), classes);
    c.heading(&format!("true class {name}"));
    c.frame();
    c.line(0.0, 0.5, 1.0, 0.5, Some("1 3"), "guide");
    c.line(tau, 0.0, tau, 1.0, Some(&style.threshold_dash), "threshold");
    for p in &layout.points {
        let fill = style.colour(p.colour_class).to_string();
        if p.flagged {
            c.triangle(p.x, p.y, &fill);
        } else {
            c.circle(p.x, p.y, &fill);
        }
    }
    c.x_ticks(&unit_ticks());
    c.y_ticks(&unit_ticks());
    c.axis_labels("farness", "lDAC");
    Ok(c.finish())
}
