//! Text renderings of windows, peak lists and module listings.

use std::fmt::Write as _;

use crate::dyadic::{Dyadic, DyadicPoint2, Interval};
use crate::peaks::Peak;
use crate::subst::{PatternWindow, SubstitutionSystem};

fn label_names(system: &SubstitutionSystem) -> (Vec<&str>, &'static str) {
    let names: Vec<&str> = system.alphabet().iter().map(String::as_str).collect();
    let sep = if names.iter().all(|n| n.chars().count() == 1) {
        ""
    } else {
        " "
    };
    (names, sep)
}

/// A word with `|` between positions -1 and 0.
pub fn word_text(system: &SubstitutionSystem, window: &PatternWindow) -> String {
    let (names, sep) = label_names(system);
    let origin = window.origin()[0];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, &l) in window.labels().iter().enumerate() {
        let pos = origin + i as i64;
        if pos < 0 {
            left.push(names[l as usize]);
        } else {
            right.push(names[l as usize]);
        }
    }
    format!("{}|{}\n", left.join(sep), right.join(sep))
}

/// One line per row, top row first, labels separated by spaces.
pub fn grid_text(system: &SubstitutionSystem, window: &PatternWindow) -> String {
    let names = system.alphabet();
    let mut out = String::new();
    for row in window.rows_top_down() {
        let line: Vec<&str> = row.iter().map(|&l| names[l as usize].as_str()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Plain PGM, one grey level per label, top row first.
pub fn pgm(window: &PatternWindow, alphabet_size: usize) -> String {
    let width = window.extent()[0];
    let height = window.extent().get(1).copied().unwrap_or(1);
    let mut out = format!("P2\n{width} {height}\n255\n");
    let scale = if alphabet_size > 1 {
        255.0 / (alphabet_size - 1) as f64
    } else {
        0.0
    };
    for row in window.rows_top_down() {
        let line: Vec<String> = row
            .iter()
            .map(|&l| ((l as f64 * scale).round() as u32).to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn peaks_csv_1d(peaks: &[Peak<Dyadic>]) -> String {
    let mut out = String::from("k_num,k_log2den,amp_re,amp_im,intensity\n");
    for p in peaks {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{:e}",
            p.k.num(),
            p.k.exp(),
            p.amplitude.re,
            p.amplitude.im,
            p.intensity
        );
    }
    out
}

pub fn peaks_csv_2d(peaks: &[Peak<DyadicPoint2>]) -> String {
    let mut out = String::from("kx_num,ky_num,k_log2den,amp_re,amp_im,intensity\n");
    for p in peaks {
        let _ = writeln!(
            out,
            "{},{},{},{:e},{:e},{:e}",
            p.k.m(),
            p.k.n(),
            p.k.exp(),
            p.amplitude.re,
            p.amplitude.im,
            p.intensity
        );
    }
    out
}

pub fn module_csv_1d(points: &[Dyadic]) -> String {
    let mut out = String::from("k_num,k_log2den\n");
    for k in points {
        let _ = writeln!(out, "{},{}", k.num(), k.exp());
    }
    out
}

pub fn module_csv_2d(points: &[DyadicPoint2]) -> String {
    let mut out = String::from("kx_num,ky_num,k_log2den\n");
    for k in points {
        let _ = writeln!(out, "{},{},{}", k.m(), k.n(), k.exp());
    }
    out
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Stem plot of `|amplitude|` over `region`.
pub fn stem_svg(peaks: &[Peak<Dyadic>], region: &Interval) -> String {
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let span = (region.hi - region.lo).max(f64::MIN_POSITIVE);
    let top = peaks.iter().map(|p| p.amplitude.norm()).fold(0.0, f64::max);
    let base = HEIGHT - MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        base + 16.0,
        region.lo
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH - MARGIN,
        base + 16.0,
        region.hi
    );
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.5">"#);
    for p in peaks {
        let x = MARGIN + (p.k.to_f64() - region.lo) / span * plot_w;
        let mag = p.amplitude.norm();
        let h = if top > 0.0 { mag / top * plot_h } else { 0.0 };
        let _ = writeln!(
            out,
            r#"<line x1="{x:.4}" y1="{base:.4}" x2="{x:.4}" y2="{:.4}" data-k="{}" data-amplitude="{mag:e}"/>"#,
            base - h,
            p.k
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Discs centred on each peak with area proportional to its intensity.
pub fn disc_svg(peaks: &[Peak<DyadicPoint2>], xs: &Interval, ys: &Interval) -> String {
    let size = WIDTH;
    let plot = size - 2.0 * MARGIN;
    let span_x = (xs.hi - xs.lo).max(f64::MIN_POSITIVE);
    let span_y = (ys.hi - ys.lo).max(f64::MIN_POSITIVE);
    let unit = plot / span_x.max(span_y);
    let max_radius = 0.1 * unit;
    let top = peaks.iter().map(|p| p.intensity).fold(0.0, f64::max);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="none" stroke="gray" stroke-width="0.5"/>"#
    );
    let _ = writeln!(out, r#"<g fill="black">"#);
    for p in peaks {
        let (kx, ky) = p.k.to_f64();
        let cx = MARGIN + (kx - xs.lo) * unit;
        let cy = MARGIN + (ys.hi - ky) * unit;
        let r = if top > 0.0 {
            max_radius * (p.intensity / top).sqrt()
        } else {
            0.0
        };
        let area = std::f64::consts::PI * r * r;
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.4}" cy="{cy:.4}" r="{r:.6}" data-k="{}" data-intensity="{:e}" data-area="{area:.6}"/>"#,
            p.k, p.intensity
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
