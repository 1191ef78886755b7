use serde::{Deserialize, Serialize};

use super::{unit_ticks, Canvas, PlotStyle};
use crate::diagnostics::ConfusionMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stripe {
    /// Predicted class, or `None` for the global-outlier stripe.
    pub predicted: Option<usize>,
    pub y: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosaicSection {
    pub class: usize,
    pub x: f64,
    pub width: f64,
    pub stripes: Vec<Stripe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosaicLayout {
    pub sections: Vec<MosaicSection>,
}

/// One section per true class with width equal to its prior. Inside a
/// section the correctly classified share sits at the bottom, then the
/// shares predicted as other classes in ascending class order, then the
/// global outliers. Empty shares are omitted.
pub fn mosaic_layout(cm: &ConfusionMatrix, priors: &[f64]) -> Result<MosaicLayout> {
    let g = cm.n_classes();
    if priors.len() != g {
        return Err(Error::PriorMismatch(format!("{} priors for {g} classes", priors.len())));
    }
    if priors.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::PriorMismatch("priors must be non-negative".into()));
    }
    let sum: f64 = priors.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::PriorMismatch(format!("priors sum to {sum}, not 1")));
    }
    let mut sections = Vec::with_capacity(g);
    let mut x = 0.0;
    for (j, &prior) in priors.iter().enumerate() {
        let total = cm.row_total(j);
        if total == 0 {
            return Err(Error::EmptyClass);
        }
        let t = total as f64;
        let mut order: Vec<Option<usize>> = vec![Some(j)];
        order.extend((0..g).filter(|&k| k != j).map(Some));
        order.push(None);
        let mut y = 0.0;
        let mut stripes = Vec::new();
        for pred in order {
            let count = match pred {
                Some(k) => cm.counts[j][k],
                None => cm.outlier(j),
            };
            if count == 0 {
                continue;
            }
            let height = count as f64 / t;
            stripes.push(Stripe { predicted: pred, y, height });
            y += height;
        }
        sections.push(MosaicSection {
            class: j,
            x,
            width: prior,
            stripes,
        });
        x += prior;
    }
    Ok(MosaicLayout { sections })
}

pub fn mosaic_svg(cm: &ConfusionMatrix, priors: &[f64], style: &PlotStyle) -> Result<String> {
    let layout = mosaic_layout(cm, priors)?;
    let mut c = Canvas::new(style, "Stacked mosaic plot", &cm.classes);
    for s in &layout.sections {
        for st in &s.stripes {
            let fill = match st.predicted {
                Some(k) => style.colour(k),
                None => &style.outlier_colour,
            };
            let class = if st.predicted.is_some() { "stripe" } else { "stripe outlier" };
            c.rect(s.x, st.y, s.x + s.width, st.y + st.height, fill, class);
        }
    }
    c.frame();
    let ticks: Vec<(f64, String)> = layout
        .sections
        .iter()
        .map(|s| (s.x + s.width / 2.0, cm.classes[s.class].clone()))
        .collect();
    c.x_ticks(&ticks);
    c.y_ticks(&unit_ticks());
    c.axis_labels("true class (width = prior)", "share of predictions");
    Ok(c.finish())
}
