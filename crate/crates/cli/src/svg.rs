//! Self-contained SVG line plots: fixed 800×600 viewBox, axes with five
//! ticks, one polyline per series and a small legend. No external
//! plotting dependency; CSV remains the canonical data output.

use dram3d_core::report::fmt_sig6;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < f64::MIN_POSITIVE {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (x_lo, x_hi) = range_of(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = range_of(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="monospace" font-size="13">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{title}</text>"#,
        px(WIDTH / 2.0)
    ));
    svg.push('\n');

    // Axes.
    svg.push_str(&format!(
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        px(MARGIN_LEFT),
        px(MARGIN_TOP),
        px(MARGIN_LEFT),
        px(MARGIN_TOP + plot_h)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        px(MARGIN_LEFT),
        px(MARGIN_TOP + plot_h),
        px(MARGIN_LEFT + plot_w),
        px(MARGIN_TOP + plot_h)
    ));
    svg.push('\n');

    for i in 0..5 {
        let f = i as f64 / 4.0;
        let xv = x_lo + f * (x_hi - x_lo);
        let yv = y_lo + f * (y_hi - y_lo);
        let xp = sx(xv);
        let yp = sy(yv);
        svg.push_str(&format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            px(xp),
            px(MARGIN_TOP + plot_h),
            px(xp),
            px(MARGIN_TOP + plot_h + 6.0)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            px(xp),
            px(MARGIN_TOP + plot_h + 22.0),
            fmt_sig6(xv)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            px(MARGIN_LEFT - 6.0),
            px(yp),
            px(MARGIN_LEFT),
            px(yp)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            px(MARGIN_LEFT - 10.0),
            px(yp + 4.0),
            fmt_sig6(yv)
        ));
        svg.push('\n');
    }

    svg.push_str(&format!(
        r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
        px(MARGIN_LEFT + plot_w / 2.0),
        px(HEIGHT - 14.0)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{y_label}</text>"#,
        px(MARGIN_TOP + plot_h / 2.0),
        px(MARGIN_TOP + plot_h / 2.0)
    ));
    svg.push('\n');

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut path = String::new();
        for (k, (x, y)) in s.points.iter().enumerate() {
            path.push_str(if k == 0 { "M" } else { " L" });
            path.push_str(&format!("{} {}", px(sx(*x)), px(sy(*y))));
        }
        svg.push_str(&format!(
            r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="2"/>"#
        ));
        svg.push('\n');
        let ly = MARGIN_TOP + 10.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            px(MARGIN_LEFT + plot_w - 160.0),
            px(ly),
            px(MARGIN_LEFT + plot_w - 130.0),
            px(ly)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{}" y="{}">{}</text>"#,
            px(MARGIN_LEFT + plot_w - 124.0),
            px(ly + 4.0),
            s.label
        ));
        svg.push('\n');
    }

    svg.push_str("</svg>\n");
    svg
}
