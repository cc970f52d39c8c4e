//! Minimal SVG line plot for parameter sequences: |alpha_n| and
//! arg(alpha_n) against n, two stacked panels.

use num_complex::Complex64;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 220.0;
const PAD: f64 = 36.0;

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
        coords.join(" ")
    );
}

fn panel(out: &mut String, y0: f64, title: &str, values: &[f64], lo: f64, hi: f64) {
    let _ = writeln!(
        out,
        "<rect x=\"{PAD}\" y=\"{y0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        out,
        "<text x=\"{PAD}\" y=\"{}\" font-size=\"12\" font-family=\"monospace\">{title}</text>",
        y0 - 6.0
    );
    if values.is_empty() {
        return;
    }
    let n = values.len();
    let span = (hi - lo).max(1e-12);
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let x = PAD + (W - 2.0 * PAD) * k as f64 / (n.max(2) - 1) as f64;
            let y = y0 + (H - 2.0 * PAD) * (1.0 - (v - lo) / span);
            (x, y)
        })
        .collect();
    polyline(out, &pts, "#1f77b4");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" font-family=\"monospace\" text-anchor=\"end\">{hi:.3}</text>",
        PAD - 4.0,
        y0 + 10.0
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" font-family=\"monospace\" text-anchor=\"end\">{lo:.3}</text>",
        PAD - 4.0,
        y0 + H - 2.0 * PAD
    );
}

/// Render the sequence plot: top panel |alpha_n|, bottom panel arg(alpha_n).
pub fn sequence_plot(params: &[Complex64]) -> String {
    let mods: Vec<f64> = params.iter().map(|a| a.norm()).collect();
    let args: Vec<f64> = params.iter().map(|a| a.arg()).collect();
    let mut out = String::new();
    let total_h = 2.0 * H + 20.0;
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{total_h}\" viewBox=\"0 0 {W} {total_h}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    panel(&mut out, PAD, "|alpha_n|", &mods, 0.0, 1.0);
    panel(
        &mut out,
        H + PAD,
        "arg alpha_n",
        &args,
        -std::f64::consts::PI,
        std::f64::consts::PI,
    );
    let _ = writeln!(out, "</svg>");
    out
}
