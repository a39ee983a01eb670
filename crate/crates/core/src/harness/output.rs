//! CSV, plot-data and SVG renderings of simulation results.

use std::fmt::Write as _;
use std::io::Write;

use super::sim::SimResult;
use crate::Result;

pub const CSV_HEADER: &str = "snr_db,frames,frame_errors,bit_errors,fer,ber,ci_lo,ci_hi";

pub fn to_csv(result: &SimResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &result.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            p.snr_db, p.frames, p.frame_errors, p.bit_errors, p.fer, p.ber, p.ci_lo, p.ci_hi
        );
    }
    out
}

pub fn emit_csv<W: Write>(result: &SimResult, mut w: W) -> Result<()> {
    w.write_all(to_csv(result).as_bytes())?;
    Ok(())
}

/// Two-column `snr_db fer` text for gnuplot and friends.
pub fn to_plot_data(result: &SimResult) -> String {
    let mut out = String::from("# snr_db fer\n");
    for p in &result.points {
        let _ = writeln!(out, "{} {:.6e}", p.snr_db, p.fer);
    }
    out
}

pub fn emit_plot_data<W: Write>(result: &SimResult, mut w: W) -> Result<()> {
    w.write_all(to_plot_data(result).as_bytes())?;
    Ok(())
}

/// FER curve on a log axis. Zero-error points are drawn on the bottom edge.
pub fn to_svg(result: &SimResult, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const ML: f64 = 70.0;
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;

    let pts = &result.points;
    let (xmin, xmax) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.snr_db), b.max(p.snr_db))
        });
    let (xmin, xmax) = if xmin < xmax {
        (xmin, xmax)
    } else if xmin.is_finite() {
        (xmin - 0.5, xmin + 0.5)
    } else {
        (0.0, 1.0)
    };
    let floor_fer = pts
        .iter()
        .map(|p| {
            if p.fer > 0.0 {
                p.fer
            } else {
                1.0 / p.frames.max(1) as f64
            }
        })
        .fold(1.0f64, f64::min);
    let dec_lo = floor_fer.log10().floor().min(-1.0);
    let dec_hi = 0.0;

    let px = |x: f64| ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    let py = |fer: f64| {
        let l = if fer > 0.0 {
            fer.log10().max(dec_lo)
        } else {
            dec_lo
        };
        MT + (dec_hi - l) / (dec_hi - dec_lo) * (H - MT - MB)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{ML}" y="{MT}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - ML - MR,
        H - MT - MB
    );
    let mut d = dec_lo as i32;
    while d <= dec_hi as i32 {
        let y = py(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{ML}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/><text x="{}" y="{:.1}" text-anchor="end">1e{d}</text>"##,
            W - MR,
            ML - 6.0,
            y + 4.0
        );
        d += 1;
    }
    for p in pts {
        let x = px(p.snr_db);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{}" text-anchor="middle">{}</text>"#,
            H - MB + 18.0,
            p.snr_db
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Eb/N0 (dB)</text>"#,
        (ML + W - MR) / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">FER</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0
    );
    for p in pts {
        let x = px(p.snr_db);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#88a"/>"##,
            py(p.ci_hi),
            py(p.ci_lo)
        );
    }
    let path: Vec<String> = pts
        .iter()
        .map(|p| format!("{:.1},{:.1}", px(p.snr_db), py(p.fer)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        path.join(" ")
    );
    for p in pts {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.1}" cy="{:.1}" r="3.5" fill="#1f4e9c"/>"##,
            px(p.snr_db),
            py(p.fer)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
