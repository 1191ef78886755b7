//! SVG renderings of the classifier diagnostics.
//!
//! Every plot has a layout function returning geometry in unit coordinates
//! (x to the right, y upwards, both in `[0, 1]` for the data region) and an
//! `_svg` function that maps it to pixels. Output depends only on the inputs.

mod mosaic;
mod points;
mod silhouette;

pub use mosaic::{mosaic_layout, mosaic_svg, MosaicLayout, MosaicSection, Stripe};
pub use points::{
    class_map_layout, class_map_svg, farness_layout, farness_svg, ClassMapLayout, FarnessLayout, PlotPoint,
};
pub use silhouette::{silhouette_layout, silhouette_svg, SilhouetteBar, SilhouetteLayout};

use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    /// Class colours by sorted class index; cycles when there are more classes.
    pub palette: Vec<String>,
    pub outlier_colour: String,
    pub threshold_dash: String,
    pub font_size: f64,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle {
            width: 640.0,
            height: 480.0,
            palette: ["#E69F00", "#009E73", "#0072B2", "#CC79A7", "#D55E00", "#56B4E9", "#F0E442"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            outlier_colour: "#404040".into(),
            threshold_dash: "4 3".into(),
            font_size: 12.0,
        }
    }
}

impl PlotStyle {
    pub fn colour(&self, class: usize) -> &str {
        if self.palette.is_empty() {
            return "#000000";
        }
        &self.palette[class % self.palette.len()]
    }
}

const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 56.0;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Minimal SVG writer over a plot region with fixed margins.
pub(crate) struct Canvas<'a> {
    style: &'a PlotStyle,
    buf: String,
}

impl<'a> Canvas<'a> {
    pub(crate) fn new(style: &'a PlotStyle, title: &str, classes: &[String]) -> Self {
        let mut buf = String::new();
        let _ = write!(
            buf,
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n\
             <title>{t}</title>\n",
            w = style.width,
            h = style.height,
            t = escape(title)
        );
        let legend: Vec<String> = classes
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{}={}", escape(c), style.colour(j)))
            .collect();
        let _ = writeln!(
            buf,
            "<desc>class colours: {}; outliers={}</desc>",
            legend.join(", "),
            style.outlier_colour
        );
        let _ = writeln!(
            buf,
            "<rect x=\"0\" y=\"0\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#FFFFFF\"/>",
            style.width, style.height
        );
        Canvas { style, buf }
    }

    fn plot_w(&self) -> f64 {
        (self.style.width - LEFT - RIGHT).max(1.0)
    }

    fn plot_h(&self) -> f64 {
        (self.style.height - TOP - BOTTOM).max(1.0)
    }

    pub(crate) fn px(&self, u: f64) -> f64 {
        LEFT + u * self.plot_w()
    }

    pub(crate) fn py(&self, v: f64) -> f64 {
        TOP + (1.0 - v) * self.plot_h()
    }

    /// Rectangle spanning unit coordinates `[x0, x1] x [y0, y1]`.
    pub(crate) fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, fill: &str, class: &str) {
        let (a, b) = (self.px(x0.min(x1)), self.px(x0.max(x1)));
        let (c, d) = (self.py(y0.max(y1)), self.py(y0.min(y1)));
        let _ = writeln!(
            self.buf,
            "<rect class=\"{class}\" x=\"{a:.3}\" y=\"{c:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{fill}\" stroke=\"#FFFFFF\" stroke-width=\"1\"/>",
            b - a,
            d - c
        );
    }

    pub(crate) fn line(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, dash: Option<&str>, class: &str) {
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        let _ = writeln!(
            self.buf,
            "<line class=\"{class}\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#000000\" stroke-width=\"1\"{dash}/>",
            self.px(x0),
            self.py(y0),
            self.px(x1),
            self.py(y1)
        );
    }

    pub(crate) fn circle(&mut self, x: f64, y: f64, fill: &str) {
        let _ = writeln!(
            self.buf,
            "<circle class=\"point\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"4.000\" fill=\"{fill}\"/>",
            self.px(x),
            self.py(y)
        );
    }

    pub(crate) fn triangle(&mut self, x: f64, y: f64, fill: &str) {
        let (cx, cy) = (self.px(x), self.py(y));
        let _ = writeln!(
            self.buf,
            "<polygon class=\"outlier\" points=\"{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}\" fill=\"{fill}\"/>",
            cx,
            cy - 5.0,
            cx - 5.0,
            cy + 4.0,
            cx + 5.0,
            cy + 4.0
        );
    }

    /// Text anchored at pixel coordinates.
    pub(crate) fn text_px(&mut self, x: f64, y: f64, anchor: &str, content: &str) {
        let _ = writeln!(
            self.buf,
            "<text x=\"{x:.3}\" y=\"{y:.3}\" font-family=\"sans-serif\" font-size=\"{:.3}\" text-anchor=\"{anchor}\">{}</text>",
            self.style.font_size,
            escape(content)
        );
    }

    pub(crate) fn frame(&mut self) {
        let _ = writeln!(
            self.buf,
            "<rect class=\"frame\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>",
            LEFT,
            TOP,
            self.plot_w(),
            self.plot_h()
        );
    }

    /// Axis labels below and left of the plot region.
    pub(crate) fn axis_labels(&mut self, x_label: &str, y_label: &str) {
        let x = LEFT + self.plot_w() / 2.0;
        let y = self.style.height - 12.0;
        self.text_px(x, y, "middle", x_label);
        let cy = TOP + self.plot_h() / 2.0;
        let _ = writeln!(
            self.buf,
            "<text x=\"16.000\" y=\"{cy:.3}\" font-family=\"sans-serif\" font-size=\"{:.3}\" text-anchor=\"middle\" transform=\"rotate(-90 16.000 {cy:.3})\">{}</text>",
            self.style.font_size,
            escape(y_label)
        );
    }

    /// Tick labels on the y axis at the given unit positions.
    pub(crate) fn y_ticks(&mut self, ticks: &[(f64, String)]) {
        for (v, label) in ticks {
            let y = self.py(*v);
            let _ = writeln!(
                self.buf,
                "<line x1=\"{:.3}\" y1=\"{y:.3}\" x2=\"{LEFT:.3}\" y2=\"{y:.3}\" stroke=\"#000000\" stroke-width=\"1\"/>",
                LEFT - 4.0
            );
            self.text_px(LEFT - 6.0, y + 4.0, "end", label);
        }
    }

    pub(crate) fn x_ticks(&mut self, ticks: &[(f64, String)]) {
        let base = TOP + self.plot_h();
        for (u, label) in ticks {
            let x = self.px(*u);
            let _ = writeln!(
                self.buf,
                "<line x1=\"{x:.3}\" y1=\"{base:.3}\" x2=\"{x:.3}\" y2=\"{:.3}\" stroke=\"#000000\" stroke-width=\"1\"/>",
                base + 4.0
            );
            self.text_px(x, base + 18.0, "middle", label);
        }
    }

    pub(crate) fn heading(&mut self, text: &str) {
        let x = self.style.width / 2.0;
        self.text_px(x, TOP - 14.0, "middle", text);
    }

    pub(crate) fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

pub(crate) fn unit_ticks() -> Vec<(f64, String)> {
    (0..=4).map(|k| (k as f64 / 4.0, format!("{:.2}", k as f64 / 4.0))).collect()
}
