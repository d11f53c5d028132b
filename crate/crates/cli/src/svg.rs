//! Minimal static SVG line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

/// Shaded vertical band, e.g. a coefficient region.
#[derive(Clone, Debug)]
pub struct Band {
    pub x0: f64,
    pub x1: f64,
    pub label: String,
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub bands: Vec<Band>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Default::default()
        }
    }

    pub fn line(mut self, label: &str, points: Vec<(f64, f64)>, dashed: bool) -> Self {
        self.series.push(Series {
            label: label.into(),
            points,
            dashed,
        });
        self
    }

    pub fn band(mut self, x0: f64, x1: f64, label: &str) -> Self {
        self.bands.push(Band {
            x0,
            x1,
            label: label.into(),
        });
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let pts = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut s = String::new();
        let w = &mut s;
        writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        for (i, b) in self.bands.iter().enumerate() {
            let (a, c) = (sx(b.x0.max(x0)), sx(b.x1.min(x1)));
            if c <= a {
                continue;
            }
            let fill = if i % 2 == 0 { "#f0f0f0" } else { "#e0e8f0" };
            writeln!(
                w,
                r#"<rect x="{a:.2}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                c - a,
                HEIGHT - 2.0 * MARGIN
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="dimgray">{}</text>"#,
                (a + c) / 2.0,
                MARGIN + 14.0,
                escape(&b.label)
            )
            .unwrap();
        }
        writeln!(
            w,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        )
        .unwrap();
        for (i, series) in self.series.iter().enumerate() {
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
                .collect();
            let color = COLORS[i % COLORS.len()];
            let dash = if series.dashed {
                r#" stroke-dasharray="6,4""#
            } else {
                ""
            };
            writeln!(
                w,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                pts.join(" ")
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
                WIDTH - MARGIN - 150.0,
                MARGIN + 30.0 + 16.0 * i as f64,
                escape(&series.label)
            )
            .unwrap();
        }
        let ticks = [(x0, y0), (x1, y1)];
        writeln!(
            w,
            r#"<text x="{MARGIN}" y="{:.2}">{}</text>"#,
            HEIGHT - MARGIN + 16.0,
            tick(ticks[0].0)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            WIDTH - MARGIN,
            HEIGHT - MARGIN + 16.0,
            tick(ticks[1].0)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN - 4.0,
            HEIGHT - MARGIN,
            tick(ticks[0].1)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN - 4.0,
            MARGIN + 10.0,
            tick(ticks[1].1)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="30" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        )
        .unwrap();
        w.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    format!("{v:.3}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_polyline_and_skips_non_finite() {
        let svg = Plot::new("t", "x", "y")
            .line("a", vec![(0.0, 0.0), (1.0, f64::NEG_INFINITY), (2.0, 1.0)], false)
            .band(0.0, 1.0, "I")
            .render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg.contains("inf") && !svg.contains("NaN"));
    }

    #[test]
    fn escapes_labels() {
        let svg = Plot::new("a<b", "x", "y").render();
        assert!(svg.contains("a&lt;b"));
    }
}
