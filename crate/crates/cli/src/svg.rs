//! Minimal static line plots with a log-scale y axis.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders `series` with linear x and `log10` y. Points with `y ≤ 0` or
/// non-finite coordinates are dropped.
pub fn log_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let kept: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| s.points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite() && *y > 0.0).collect())
        .collect();
    let all = kept.iter().flatten();
    let (mut x0, mut x1, mut e0, mut e1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        e0 = e0.min(y.log10());
        e1 = e1.max(y.log10());
    }
    if !x0.is_finite() {
        (x0, x1, e0, e1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (e0, e1) = (e0.floor(), e1.ceil().max(e0.floor() + 1.0));
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (e1 - y.log10()) / (e1 - e0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        fmt(LEFT + pw / 2.0),
        escape(title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        fmt(pw),
        fmt(ph)
    );

    let step = ((e1 - e0) / 8.0).ceil().max(1.0);
    let mut e = e0;
    while e <= e1 + 1e-9 {
        let y = TOP + (e1 - e) / (e1 - e0) * ph;
        let _ =
            writeln!(s, r##"<line x1="{LEFT}" y1="{0}" x2="{1}" y2="{0}" stroke="#ddd"/>"##, fmt(y), fmt(LEFT + pw));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">1e{}</text>"#,
            fmt(LEFT - 6.0),
            fmt(y + 4.0),
            e as i64
        );
        e += step;
    }
    for k in 0..=4 {
        let xv = x0 + (x1 - x0) * k as f64 / 4.0;
        let x = sx(xv);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            fmt(x),
            fmt(TOP + ph + 16.0),
            xv.round()
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        fmt(LEFT + pw / 2.0),
        fmt(H - 12.0),
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        fmt(TOP + ph / 2.0),
        escape(y_label)
    );

    for (i, (pts, ser)) in kept.iter().zip(series).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", fmt(sx(*x)), fmt(sy(*y)))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{color}" stroke-width="2"/>"#,
            fmt(lx),
            fmt(ly),
            fmt(lx + 18.0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            fmt(lx + 24.0),
            fmt(ly + 4.0),
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
