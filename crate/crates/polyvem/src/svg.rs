//! Minimal standalone SVG charts: log/linear axes, line and scatter series,
//! reference slope triangles.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Connect the points (in the given order); otherwise markers only.
    pub line: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub series: Vec<Series>,
    /// Reference slopes drawn as triangles next to the first series
    /// (log-log plots only).
    pub slopes: Vec<f64>,
}

struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(scale: Scale, values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let t = match scale {
                Scale::Log => v.log10(),
                Scale::Linear => v,
            };
            lo = lo.min(t);
            hi = hi.max(t);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        match scale {
            Scale::Log => {
                let (mut a, mut b) = (lo.floor(), hi.ceil());
                if a == b {
                    a -= 1.0;
                    b += 1.0;
                }
                Axis { scale, lo: a, hi: b }
            }
            Scale::Linear => {
                if hi - lo < 1e-12 * lo.abs().max(1.0) {
                    lo -= 0.5;
                    hi += 0.5;
                }
                let step = nice_step((hi - lo) / 5.0);
                Axis {
                    scale,
                    lo: (lo / step).floor() * step,
                    hi: (hi / step).ceil() * step,
                }
            }
        }
    }

    /// Fraction of the axis length, 0 at `lo`.
    fn frac(&self, v: f64) -> f64 {
        let t = match self.scale {
            Scale::Log => v.log10(),
            Scale::Linear => v,
        };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        match self.scale {
            Scale::Log => {
                let decades = (self.hi - self.lo) as i64;
                let every = (decades / 10 + 1).max(1);
                (self.lo as i64..=self.hi as i64)
                    .filter(|e| (e - self.lo as i64) % every == 0)
                    .map(|e| (10f64.powi(e as i32), format!("1e{e}")))
                    .collect()
            }
            Scale::Linear => {
                let step = nice_step((self.hi - self.lo) / 5.0);
                let n = ((self.hi - self.lo) / step).round() as i64;
                (0..=n)
                    .map(|i| {
                        let v = self.lo + i as f64 * step;
                        // Trim float noise such as 0.30000000000000004.
                        let v = (v / step).round() * step;
                        (v, format!("{}", (v * 1e9).round() / 1e9))
                    })
                    .collect()
            }
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    mag * if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Triangle corners for a reference slope, anchored just below the
/// smallest-x point of `pts`, spanning a quarter of the x range.
fn slope_triangle(pts: &[(f64, f64)], slope: f64, offset: f64) -> Option<[(f64, f64); 3]> {
    let &(x0, y0) = pts.iter().min_by(|a, b| a.0.total_cmp(&b.0))?;
    let x_max = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ratio = (x_max / x0).powf(0.25).max(1.5);
    let x1 = x0 * ratio;
    let ya = y0 * offset;
    Some([(x0, ya), (x1, ya), (x1, ya * ratio.powf(slope))])
}

impl Plot {
    pub fn render(&self) -> String {
        let loglog = self.x_scale == Scale::Log && self.y_scale == Scale::Log;
        let clean = |pts: &[(f64, f64)]| -> Vec<(f64, f64)> {
            pts.iter()
                .copied()
                .filter(|&(x, y)| {
                    x.is_finite() && y.is_finite() && (self.x_scale == Scale::Linear || x > 0.0) && (self.y_scale == Scale::Linear || y > 0.0)
                })
                .collect()
        };
        let series: Vec<Vec<(f64, f64)>> = self.series.iter().map(|s| clean(&s.points)).collect();
        let triangles: Vec<(f64, [(f64, f64); 3])> = if loglog {
            let base = series.first().map(Vec::as_slice).unwrap_or(&[]);
            self.slopes
                .iter()
                .enumerate()
                .filter_map(|(i, &s)| slope_triangle(base, s, 0.5f64.powi(i as i32 + 1)).map(|t| (s, t)))
                .collect()
        } else {
            Vec::new()
        };
        let all = || series.iter().flatten().copied().chain(triangles.iter().flat_map(|t| t.1));
        let xa = Axis::fit(self.x_scale, all().map(|p| p.0));
        let ya = Axis::fit(self.y_scale, all().map(|p| p.1));
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let px = |x: f64| LEFT + xa.frac(x) * pw;
        let py = |y: f64| TOP + (1.0 - ya.frac(y)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        for (v, label) in xa.ticks() {
            let x = px(v);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
                TOP + ph,
                TOP + ph + 16.0
            );
        }
        for (v, label) in ya.ticks() {
            let y = py(v);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 18.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (i, (meta, pts)) in self.series.iter().zip(&series).enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if meta.line && pts.len() > 1 {
                let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
            }
            for &(x, y) in pts {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
            }
            let ly = TOP + 10.0 + 18.0 * i as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{ly:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 4.0,
                lx + 14.0,
                ly + 4.0,
                escape(&meta.label)
            );
        }
        for (slope, t) in &triangles {
            let pts: Vec<String> = t.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-dasharray="4 2"/>"#, pts.join(" "));
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}">{slope}</text>"#,
                px(t[1].0) + 4.0,
                (py(t[1].1) + py(t[2].1)) / 2.0 + 4.0
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(x_scale: Scale, y_scale: Scale, points: Vec<(f64, f64)>) -> Plot {
        Plot {
            title: "a < b & c".into(),
            x_label: "h".into(),
            y_label: "error".into(),
            x_scale,
            y_scale,
            series: vec![Series {
                label: "k=1".into(),
                points,
                line: true,
            }],
            slopes: vec![1.0, 2.0],
        }
    }

    #[test]
    fn decade_ticks() {
        let a = Axis::fit(Scale::Log, [0.02, 3.0].into_iter());
        assert_eq!((a.lo, a.hi), (-2.0, 1.0));
        let labels: Vec<String> = a.ticks().into_iter().map(|t| t.1).collect();
        assert_eq!(labels, ["1e-2", "1e-1", "1e0", "1e1"]);
    }

    #[test]
    fn linear_ticks_are_round() {
        let a = Axis::fit(Scale::Linear, [0.03, 0.97].into_iter());
        let labels: Vec<String> = a.ticks().into_iter().map(|t| t.1).collect();
        assert_eq!(labels, ["0", "0.2", "0.4", "0.6", "0.8", "1"]);
    }

    #[test]
    fn slope_triangle_has_requested_slope() {
        let t = slope_triangle(&[(0.1, 1e-3), (0.8, 1e-1)], 2.0, 0.5).unwrap();
        let s = (t[2].1 / t[1].1).log10() / (t[1].0 / t[0].0).log10();
        assert!((s - 2.0).abs() < 1e-12);
        assert_eq!(t[0].1, t[1].1);
    }

    #[test]
    fn render_is_wellformed_and_skips_bad_points() {
        let svg = plot(Scale::Log, Scale::Log, vec![(0.5, 0.1), (0.25, 0.03), (0.0, 1.0), (0.1, f64::NAN)]).render();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert_eq!(svg.matches("<circle").count(), 2 + 1);
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert!(!svg.contains("NaN"));
        // Semilog and empty plots still render.
        assert!(plot(Scale::Linear, Scale::Log, vec![]).render().contains("</svg>"));
    }
}
