use serde::{Deserialize, Serialize};

use super::{Canvas, PlotStyle};
use crate::diagnostics::SilhouetteReport;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteBar {
    pub id: usize,
    pub class: usize,
    /// Silhouette clipped to `[-1, 1]`.
    pub value: f64,
    /// Row from the top; classes are separated by one empty row.
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteLayout {
    pub bars: Vec<SilhouetteBar>,
    pub rows: usize,
}

/// Bars grouped by true class, sorted by decreasing silhouette inside a class.
pub fn silhouette_layout(report: &SilhouetteReport) -> Result<SilhouetteLayout> {
    if report.values.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut bars = Vec::with_capacity(report.values.len());
    let mut row = 0;
    for j in 0..report.classes.len() {
        let mut members: Vec<usize> = (0..report.values.len()).filter(|&h| report.truth[h] == j).collect();
        if members.is_empty() {
            continue;
        }
        members.sort_by(|&a, &b| report.values[b].total_cmp(&report.values[a]).then(a.cmp(&b)));
        if !bars.is_empty() {
            row += 1;
        }
        for h in members {
            bars.push(SilhouetteBar {
                id: h,
                class: j,
                value: report.values[h].clamp(-1.0, 1.0),
                row,
            });
            row += 1;
        }
    }
    Ok(SilhouetteLayout { bars, rows: row })
}

pub fn silhouette_svg(report: &SilhouetteReport, style: &PlotStyle) -> Result<String> {
    let layout = silhouette_layout(report)?;
    let mut c = Canvas::new(style, "Silhouette plot", &report.classes);
    c.heading(&format!("overall average silhouette: {:.2}", report.overall));
    let step = 1.0 / layout.rows as f64;
    let u = |s: f64| (s + 1.0) / 2.0;
    for b in &layout.bars {
        let top = 1.0 - b.row as f64 * step;
        let bottom = top - step;
        c.rect(u(0.0), bottom, u(b.value), top, style.colour(b.class), "bar");
    }
    c.frame();
    c.line(u(0.0), 0.0, u(0.0), 1.0, None, "axis");
    for j in 0..report.classes.len() {
        let rows: Vec<usize> = layout.bars.iter().filter(|b| b.class == j).map(|b| b.row).collect();
        let (Some(&first), Some(&last)) = (rows.first(), rows.last()) else {
            continue;
        };
        let mid = 1.0 - (first + last + 1) as f64 / 2.0 * step;
        let avg = report.class_averages[j].unwrap_or(0.0);
        let (x, y) = (c.px(0.02), c.py(mid) + 4.0);
        c.text_px(x, y, "start", &format!("{}: {:.2}", report.classes[j], avg));
    }
    let ticks: Vec<(f64, String)> = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|&s| (u(s), format!("{s:.1}")))
        .collect();
    c.x_ticks(&ticks);
    c.axis_labels("silhouette", "observations by true class");
    Ok(c.finish())
}
