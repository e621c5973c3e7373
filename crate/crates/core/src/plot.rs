//! Self-contained SVG line charts of sweep results.

use std::fmt::Write as _;

use crate::sweep::{Metric, SweepPoint};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Series {
    mu: f64,
    /// `(lambda, mean temporal, mean specificity)`, seeds averaged.
    rows: Vec<(f64, f64, f64)>,
}

fn mean(xs: &[f64]) -> f64 {
    let live: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
    if live.is_empty() {
        f64::NAN
    } else {
        live.iter().sum::<f64>() / live.len() as f64
    }
}

fn group(points: &[SweepPoint], metric: Metric) -> Vec<Series> {
    let mut mus: Vec<f64> = points.iter().map(|p| p.mu).collect();
    mus.sort_by(f64::total_cmp);
    mus.dedup();
    mus.into_iter()
        .map(|mu| {
            let mut lambdas: Vec<f64> = points.iter().filter(|p| p.mu == mu).map(|p| p.lambda).collect();
            lambdas.sort_by(f64::total_cmp);
            lambdas.dedup();
            let rows = lambdas
                .into_iter()
                .map(|l| {
                    let at: Vec<&SweepPoint> = points.iter().filter(|p| p.mu == mu && p.lambda == l).collect();
                    let t: Vec<f64> = at.iter().map(|p| p.temporal(metric)).collect();
                    let s: Vec<f64> = at.iter().map(|p| p.specificity(metric)).collect();
                    (l, mean(&t), mean(&s))
                })
                .collect();
            Series { mu, rows }
        })
        .collect()
}

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

/// Temporal and specificity score against lambda, one pair of lines per mu
/// value (solid temporal, dashed specificity). Identical input gives
/// identical bytes.
pub fn render_svg(points: &[SweepPoint], metric: Metric) -> String {
    let series = group(points, metric);
    let lambdas = points.iter().map(|p| p.lambda);
    let (mut x_lo, mut x_hi) = lambdas.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), l| (a.min(l), b.max(l)));
    if !x_lo.is_finite() {
        (x_lo, x_hi) = (-1.0, 1.0);
    }
    if x_lo == x_hi {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let y_min = series
        .iter()
        .flat_map(|s| s.rows.iter().flat_map(|r| [r.1, r.2]))
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::min);
    let (y_lo, y_hi) = (y_min.min(0.0), 1.0);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for i in 0..=4 {
        let x = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let px = sx(x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ccc"/>"##,
            TOP,
            TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            fmt(x)
        );
        let y = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let py = sy(y);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ccc"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py + 4.0,
            fmt(y)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">lambda</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        metric.name().to_uppercase()
    );

    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        for (which, dash) in [(0usize, ""), (1usize, r#" stroke-dasharray="6 4""#)] {
            let pts: Vec<(f64, f64)> = s
                .rows
                .iter()
                .map(|r| (r.0, if which == 0 { r.1 } else { r.2 }))
                .filter(|(_, y)| y.is_finite())
                .map(|(x, y)| (sx(x), sy(y)))
                .collect();
            if pts.len() > 1 {
                let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
                    coords.join(" ")
                );
            }
            let fill = if which == 0 { color } else { "white" };
            for (x, y) in &pts {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{fill}" stroke="{color}"/>"#
                );
            }
        }
    }

    let lx = LEFT + plot_w + 16.0;
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        for (which, label) in [(0usize, "temporal"), (1usize, "specificity")] {
            let y = TOP + 10.0 + (2 * si + which) as f64 * 20.0;
            let dash = if which == 0 { "" } else { r#" stroke-dasharray="6 4""# };
            let _ = writeln!(
                svg,
                r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"{dash}/>"#,
                lx + 24.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}">{label} (mu={})</text>"#,
                lx + 30.0,
                y + 4.0,
                s.mu
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(mu: f64, lambda: f64, t: f64, s: f64) -> SweepPoint {
        SweepPoint {
            mu,
            lambda,
            seed: 0,
            degenerate: false,
            temporal_ami: t,
            specificity_ami: s,
            temporal_ari: t,
            specificity_ari: s,
            temporal_v: t,
            specificity_v: s,
            balance: 1.0,
            assignment_hash: String::new(),
            error: None,
        }
    }

    #[test]
    fn single_point_gives_markers() {
        let svg = render_svg(&[point(1.0, 0.0, 1.0, 0.0)], Metric::Ami);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 0);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn lines_per_mu() {
        let pts = [
            point(1.0, -0.5, 0.2, 0.9),
            point(1.0, 0.0, 1.0, 0.0),
            point(-1.0, -0.5, 0.5, 0.5),
            point(-1.0, 0.0, 0.9, 0.1),
        ];
        let svg = render_svg(&pts, Metric::Ari);
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert!(svg.contains("mu=-1"));
        assert_eq!(svg, render_svg(&pts, Metric::Ari));
    }
}
