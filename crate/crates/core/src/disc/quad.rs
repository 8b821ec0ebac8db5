//! Composite Gauss–Legendre rules on radial intervals.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// Points per panel.
pub const PANEL_ORDER: usize = 8;

fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let rule = GaussLegendre::new(PANEL_ORDER).expect("order >= 2");
        // map [-1, 1] onto [0, 1]
        let mut pairs: Vec<(f64, f64)> = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// Nodes and weights integrating over `[a, b]` split into `panels` equal pieces.
pub fn panels(a: f64, b: f64, panels: usize, out: &mut Vec<(f64, f64)>) {
    if b <= a || panels == 0 {
        return;
    }
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for &(x, w) in reference_rule() {
            out.push((lo + x * width, w * width));
        }
    }
}

/// Rule on `[0, b]` whose first panel is refined geometrically toward the
/// origin so that integrands like `r log r` are integrated accurately.
pub fn graded_from_origin(b: f64, n_panels: usize, out: &mut Vec<(f64, f64)>) {
    if b <= 0.0 || n_panels == 0 {
        return;
    }
    let width = b / n_panels as f64;
    let levels = 12;
    let inner = width * 0.5f64.powi(levels);
    for &(s, w) in reference_rule() {
        out.push((inner * s.powi(4), w * 4.0 * inner * s.powi(3)));
    }
    for l in (0..levels).rev() {
        let lo = width * 0.5f64.powi(l + 1);
        panels(lo, 2.0 * lo, 1, out);
    }
    panels(width, b, n_panels - 1, out);
}

/// Composite rule on `[a, b]` honouring the interior `breaks`, with panel
/// widths at most `max_width`.
pub fn with_breaks(a: f64, b: f64, breaks: &[f64], max_width: f64) -> Vec<(f64, f64)> {
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut out = Vec::new();
    for w in points.windows(2) {
        let n = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        panels(w[0], w[1], n, &mut out);
    }
    out
}
