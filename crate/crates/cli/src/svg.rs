//! Self-contained SVG line charts: fixed 800×500 viewport, axes with
//! tick labels, polyline series, no external dependencies.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub label: String,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Log-10 y axis; nonpositive values are dropped from the plot.
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks as f64;
    let magnitude = 10.0f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual < 1.5 {
        1.0
    } else if residual < 3.5 {
        2.0
    } else if residual < 7.5 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 6);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let abs = x.abs();
    if (1e-3..1e4).contains(&abs) {
        // Trim trailing zeros from a fixed representation.
        let mut s = format!("{x:.4}");
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
        s
    } else {
        format!("{x:.0e}")
    }
}

impl Chart {
    pub fn render(&self) -> String {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

        let transform_y = |y: f64| if self.log_y { y.log10() } else { y };
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for s in &self.series {
            for &(x, y) in &s.points {
                if self.log_y && y <= 0.0 {
                    continue;
                }
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(transform_y(y));
                y_max = y_max.max(transform_y(y));
            }
        }
        if !x_min.is_finite() || x_max <= x_min {
            x_min = 0.0;
            x_max = 1.0;
        }
        if !y_min.is_finite() || y_max <= y_min {
            y_min = if self.log_y { -1.0 } else { 0.0 };
            y_max = 1.0;
        }
        let y_pad = 0.05 * (y_max - y_min);
        y_min -= y_pad;
        y_max += y_pad;

        let to_px = |x: f64, ty: f64| -> (f64, f64) {
            (
                MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
                MARGIN_TOP + (y_max - ty) / (y_max - y_min) * plot_h,
            )
        };

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
        );
        let _ = writeln!(
            svg,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            self.title
        );

        // Axis ticks and grid.
        for x in linear_ticks(x_min, x_max) {
            let (px, _) = to_px(x, y_min);
            let _ = writeln!(
                svg,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
                MARGIN_TOP,
                MARGIN_TOP + plot_h
            );
            let _ = writeln!(
                svg,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
                MARGIN_TOP + plot_h + 18.0,
                fmt_tick(x)
            );
        }
        let y_ticks: Vec<f64> = if self.log_y {
            let first = y_min.ceil() as i64;
            let last = y_max.floor() as i64;
            let stride = 1 + (last - first) as usize / 8;
            (first..=last).step_by(stride).map(|k| k as f64).collect()
        } else {
            linear_ticks(y_min, y_max)
        };
        for ty in y_ticks {
            let (_, py) = to_px(x_min, ty);
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
                MARGIN_LEFT,
                MARGIN_LEFT + plot_w
            );
            let label = if self.log_y {
                format!("1e{ty:.0}")
            } else {
                fmt_tick(ty)
            };
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{label}</text>"#,
                MARGIN_LEFT - 6.0,
                py + 4.0
            );
        }

        // Frame.
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            self.x_label
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 16 {:.2})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            self.y_label
        );

        // Series and legend.
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mut points = String::new();
            for &(x, y) in &series.points {
                if self.log_y && y <= 0.0 {
                    continue;
                }
                let (px, py) = to_px(x, transform_y(y));
                let _ = write!(points, "{px:.2},{py:.2} ");
            }
            let dash = if series.dashed {
                r#" stroke-dasharray="7 4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
                points.trim_end()
            );

            let legend_y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
            let legend_x = MARGIN_LEFT + plot_w - 150.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{legend_x:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{color}" stroke-width="1.8"{dash}/>"#,
                legend_x + 26.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
                legend_x + 32.0,
                legend_y + 4.0,
                series.label
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_deterministic_and_well_formed() {
        let chart = Chart {
            title: "demo".into(),
            x_label: "t".into(),
            y_label: "y".into(),
            log_y: false,
            series: vec![Series {
                label: "a".into(),
                dashed: false,
                points: (0..50)
                    .map(|k| (k as f64 * 0.1, (k as f64 * 0.3).sin()))
                    .collect(),
            }],
        };
        let once = chart.render();
        assert_eq!(once, chart.render());
        assert!(once.starts_with("<svg"));
        assert!(once.trim_end().ends_with("</svg>"));
        assert!(once.contains("polyline"));
    }

    #[test]
    fn log_axis_drops_nonpositive_points() {
        let chart = Chart {
            title: String::new(),
            x_label: "t".into(),
            y_label: "r".into(),
            log_y: true,
            series: vec![Series {
                label: "r".into(),
                dashed: false,
                points: vec![(0.0, 0.0), (1.0, 1e-3), (2.0, 1e2)],
            }],
        };
        let svg = chart.render();
        assert!(svg.contains("1e-3") || svg.contains("1e-2"));
    }
}
