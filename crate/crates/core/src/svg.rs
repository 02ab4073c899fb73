//! Minimal SVG plotting: one rectangular panel with linear axes.
//!
//! Output depends only on the inputs, so identical data renders to
//! identical bytes.

use std::fmt::Write;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
const TICKS: usize = 5;

pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    x_range: (f64, f64),
    y_range: (f64, f64),
    y_ticks: bool,
    body: String,
    legend: Vec<(String, String)>,
    uses_arrow: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn widen(range: (f64, f64)) -> (f64, f64) {
    if range.1 > range.0 {
        range
    } else {
        (range.0, range.0 + 1.0)
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self {
            title: title.to_owned(),
            x_label: x_label.to_owned(),
            y_label: y_label.to_owned(),
            x_range: widen(x_range),
            y_range: widen(y_range),
            y_ticks: true,
            body: String::new(),
            legend: Vec::new(),
            uses_arrow: false,
        }
    }

    /// Hide numeric y tick labels (bar rows carry no meaningful y value).
    pub fn without_y_ticks(mut self) -> Self {
        self.y_ticks = false;
        self
    }

    pub fn sx(&self, x: f64) -> f64 {
        let (a, b) = self.x_range;
        LEFT + (x - a) / (b - a) * (WIDTH - LEFT - RIGHT)
    }

    pub fn sy(&self, y: f64) -> f64 {
        let (a, b) = self.y_range;
        HEIGHT - BOTTOM - (y - a) / (b - a) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str, label: Option<&str>) {
        if points.is_empty() {
            return;
        }
        let coords: Vec<String> = points.iter().map(|&(x, y)| format!("{:.3},{:.3}", self.sx(x), self.sy(y))).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        for &(x, y) in points {
            self.circle(x, y, 2.5, color);
        }
        if let Some(label) = label {
            self.legend.push((label.to_owned(), color.to_owned()));
        }
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="{color}"/>"#,
            self.sx(x),
            self.sy(y)
        );
    }

    pub fn segment(&mut self, from: (f64, f64), to: (f64, f64), color: &str, width: f64, dashed: bool) {
        let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="{width:.3}"{dash}/>"#,
            self.sx(from.0),
            self.sy(from.1),
            self.sx(to.0),
            self.sy(to.1)
        );
    }

    /// Horizontal segment ending in an arrowhead.
    pub fn arrow(&mut self, from: (f64, f64), to: (f64, f64), color: &str, width: f64) {
        self.uses_arrow = true;
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="{width:.3}" marker-end="url(#arrow)"/>"#,
            self.sx(from.0),
            self.sy(from.1),
            self.sx(to.0),
            self.sy(to.1)
        );
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" fill="{color}">{}</text>"#,
            self.sx(x),
            self.sy(y),
            escape(s)
        );
    }

    pub fn legend_entry(&mut self, label: &str, color: &str) {
        self.legend.push((label.to_owned(), color.to_owned()));
    }

    pub fn finish(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
        );
        if self.uses_arrow {
            s.push_str(
                r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="context-stroke"/></marker></defs>"#,
            );
            s.push('\n');
        }
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            escape(&self.title)
        );

        // axes
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(s, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}" stroke="black"/>"#);
        let _ = writeln!(s, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x0:.3}" y2="{y1:.3}" stroke="black"/>"#);
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let xv = self.x_range.0 + t * (self.x_range.1 - self.x_range.0);
            let px = self.sx(xv);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.3}" y1="{y0:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/><text x="{px:.3}" y="{:.3}" font-size="10" text-anchor="middle">{}</text>"#,
                y0 + 4.0,
                y0 + 16.0,
                tick_label(xv)
            );
            if self.y_ticks {
                let yv = self.y_range.0 + t * (self.y_range.1 - self.y_range.0);
                let py = self.sy(yv);
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.3}" y1="{py:.3}" x2="{x0:.3}" y2="{py:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" font-size="10" text-anchor="end">{}</text>"#,
                    x0 - 4.0,
                    x0 - 6.0,
                    py + 3.0,
                    tick_label(yv)
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="12" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.3}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.3})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );

        s.push_str(&self.body);

        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = TOP + 8.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT + 14.0;
            let _ = writeln!(
                s,
                r#"<line x1="{x:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="{color}" stroke-width="2"/><text x="{:.3}" y="{:.3}" font-size="11">{}</text>"#,
                x + 18.0,
                x + 24.0,
                y + 4.0,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_plot_has_axes() {
        let svg = Plot::new("t", "x", "y", (0.0, 1.0), (0.0, 0.0)).finish();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<line").count(), 2 + 2 * (TICKS + 1));
        assert!(!svg.contains("marker"));
    }

    #[test]
    fn deterministic_and_scaled() {
        let mk = || {
            let mut p = Plot::new("a<b", "x", "y", (0.0, 2.0), (0.0, 4.0));
            p.polyline(&[(0.0, 0.0), (2.0, 4.0)], PALETTE[0], Some("line"));
            p.arrow((0.0, 1.0), (2.0, 1.0), PALETTE[1], 2.0);
            p.finish()
        };
        let a = mk();
        assert_eq!(a, mk());
        assert!(a.contains("a&lt;b"));
        assert!(a.contains(r#"marker-end="url(#arrow)""#));
        let p = Plot::new("", "", "", (0.0, 2.0), (0.0, 4.0));
        assert_eq!(p.sx(0.0), LEFT);
        assert_eq!(p.sx(2.0), WIDTH - RIGHT);
        assert_eq!(p.sy(4.0), TOP);
    }

    #[test]
    fn tick_labels() {
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(2.0), "2");
        assert_eq!(tick_label(-0.0), "0");
    }
}
