use std::fmt::Write as _;

use crate::trajectory::TrajectoryLog;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Minimal line chart of `f` against step. Uses a log axis when every
/// logged value is positive. Non-finite values are skipped.
pub fn loss_chart_svg(log: &TrajectoryLog, title: &str) -> String {
    let points: Vec<(f64, f64)> = log
        .records()
        .iter()
        .filter(|r| r.f.is_finite())
        .map(|r| (r.step as f64, r.f))
        .collect();
    let log_axis = !points.is_empty() && points.iter().all(|&(_, f)| f > 0.0);
    let y = |f: f64| if log_axis { f.log10() } else { f };

    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(s, f) in &points {
        x_lo = x_lo.min(s);
        x_hi = x_hi.max(s);
        y_lo = y_lo.min(y(f));
        y_hi = y_hi.max(y(f));
    }
    if points.is_empty() {
        (x_lo, x_hi, y_lo, y_hi) = (0.0, 1.0, 0.0, 1.0);
    }
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let px = |s: f64| MARGIN + (s - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="25" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    );
    let label = |v: f64| {
        if log_axis {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3e}")
        }
    };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        y1 + 4.0,
        label(y_hi)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        y0,
        label(y_lo)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x1}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">step {x_hi}</text>"#,
        y0 + 16.0
    );
    if !points.is_empty() {
        let mut d = String::new();
        for (i, &(s, f)) in points.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2} {:.2}",
                if i == 0 { "M" } else { " L" },
                px(s),
                py(y(f))
            );
        }
        let _ = writeln!(
            svg,
            r#"<path d="{d}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
