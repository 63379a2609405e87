//! Minimal SVG line charts rendered from the emitted CSV tables.
//!
//! The CSVs are the source of truth; these plots are a convenience for
//! eyeballing sweeps and are skipped with `--no-plots`.

use std::fmt::Write as _;

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
    pub dashed: bool,
}

const W: f64 = 800.0;
const H: f64 = 500.0;
const ML: f64 = 70.0;
const MR: f64 = 160.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let (x0, x1) = bounds(pts.iter().map(|p| p.0));
    let (y0, y1) = bounds(pts.iter().map(|p| p.1));
    let sx = move |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let sy = move |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        W / 2.0,
        escape(title)
    );

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{}" stroke="black"/>"#,
        H - MB
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{ML}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        H - MB,
        W - MR,
        H - MB
    );

    for k in 0..=5 {
        let fx = x0 + (x1 - x0) * k as f64 / 5.0;
        let fy = y0 + (y1 - y0) * k as f64 / 5.0;
        let px = sx(fx);
        let py = sy(fy);
        let _ = writeln!(
            svg,
            r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="black"/><text x="{px}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            H - MB,
            H - MB + 5.0,
            H - MB + 20.0,
            tick(fx)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py}" x2="{ML}" y2="{py}" stroke="black"/><text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            ML - 5.0,
            ML - 8.0,
            py + 4.0,
            tick(fy)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{ML}" y1="{py}" x2="{}" y2="{py}" stroke="#eeeeee"/>"##,
            W - MR
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        (ML + W - MR) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        escape(y_label)
    );

    // Lines and legend.
    for (idx, s) in series.iter().enumerate() {
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if path.len() >= 2 {
            let dash = if s.dashed {
                r#" stroke-dasharray="6,4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.8"{dash} points="{}"/>"#,
                s.color,
                path.join(" ")
            );
        }
        let ly = MT + 16.0 * idx as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="1.8"{}/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            W - MR + 10.0,
            W - MR + 40.0,
            s.color,
            if s.dashed {
                r#" stroke-dasharray="6,4""#
            } else {
                ""
            },
            W - MR + 46.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 0.01 && v.abs() < 10_000.0 {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Accumulator per realized prior mean: (index, mean, below flag, points).
type MuLine = (usize, f64, bool, Vec<(f64, f64)>);

/// Build the per-line series of a simulation table (one line per realized
/// prior mean, dashed when it lies below the hyper-prior mean).
pub fn sim_table_series(csv: &str) -> Vec<Series> {
    let palette = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
        "#bcbd22", "#17becf",
    ];
    let mut by_mu: Vec<MuLine> = Vec::new();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 9 || cols[8] != "ok" {
            continue;
        }
        let (Ok(beta), Ok(mu_index), Ok(mu), Ok(mean)) = (
            cols[0].parse::<f64>(),
            cols[1].parse::<usize>(),
            cols[2].parse::<f64>(),
            cols[5].parse::<f64>(),
        ) else {
            continue;
        };
        let below = cols[3] == "true";
        match by_mu.iter_mut().find(|(idx, ..)| *idx == mu_index) {
            Some((.., pts)) => pts.push((beta, mean)),
            None => by_mu.push((mu_index, mu, below, vec![(beta, mean)])),
        }
    }
    by_mu.sort_by_key(|(idx, ..)| *idx);
    by_mu
        .into_iter()
        .map(|(idx, mu, below, mut pts)| {
            pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            Series {
                name: format!("mu_{idx} = {mu:.3}"),
                points: pts,
                color: palette[(idx - 1) % palette.len()].to_string(),
                dashed: below,
            }
        })
        .collect()
}
