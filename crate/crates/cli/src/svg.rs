//! A self-contained SVG line plot of the rate curve.

use std::fmt::Write as _;

use tandem_core::CapacityProfile;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

/// Plots `(γ, R(γ))` with the maximizer marked and the irreducible capacity as a
/// dashed reference line.
pub fn rate_plot(curve: &[(f64, f64)], profile: &CapacityProfile) -> String {
    let lo = curve.iter().map(|p| p.1).fold(0.0f64, f64::min);
    let hi = curve.iter().map(|p| p.1).fold(profile.cap_irr, f64::max).max(1.0);
    let x = |g: f64| MARGIN + g * (WIDTH - 2.0 * MARGIN);
    let y = |r: f64| HEIGHT - MARGIN - (r - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (x(0.0), x(1.0), y(lo), y(hi));
    let _ = writeln!(svg, r#"<path d="M{x0:.1},{y1:.1} V{y0:.1} H{x1:.1}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let g = i as f64 / 4.0;
        let r = lo + (hi - lo) * g;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{g:.2}</text>"#, x(g), y0 + 18.0);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{r:.2}</text>"#, x0 - 6.0, y(r) + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">γ</text>"#, x(0.5), HEIGHT - 14.0);
    let _ = writeln!(svg, r#"<text x="14" y="{:.1}" text-anchor="middle">R(γ)</text>"#, y((lo + hi) / 2.0));

    let cap = y(profile.cap_irr);
    let _ = writeln!(
        svg,
        r##"<line x1="{x0:.1}" y1="{cap:.1}" x2="{x1:.1}" y2="{cap:.1}" stroke="#888" stroke-dasharray="6 4"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.1}" y="{:.1}" text-anchor="end" fill="#555">cap = {:.4}</text>"##,
        x1,
        cap - 6.0,
        profile.cap_irr
    );

    let mut path = String::new();
    for (i, &(g, r)) in curve.iter().enumerate() {
        let _ = write!(path, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, x(g), y(r));
    }
    let _ = writeln!(svg, r##"<path d="{path}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>"##);

    let (mx, my) = (x(profile.gamma0), y(profile.rate_at_gamma0));
    let _ = writeln!(svg, r##"<circle cx="{mx:.2}" cy="{my:.2}" r="4" fill="#c0392b"/>"##);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}">γ₀ = {:.4}, R = {:.4}</text>"#,
        mx + 8.0,
        my - 8.0,
        profile.gamma0,
        profile.rate_at_gamma0
    );
    let _ = writeln!(svg, "</svg>");
    svg
}
