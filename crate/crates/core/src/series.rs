//! ON and AN series of a trajectory, and their CSV/SVG export.
//!
//! The ON (odd numbers) series keeps only the odd values a trajectory
//! passes through — one point per spike plus the start — while the AN
//! (all numbers) series keeps every value. Values span many orders of
//! magnitude, so the SVG renderer scales the y axis by log10 unless
//! told otherwise.

use std::io::{self, BufRead, Write};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::engine::Trajectory;

/// One plotted point: a step index and the value at that step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoint {
    pub step: u64,
    pub value: BigUint,
}

/// The odd values of a trajectory in order, re-indexed from 0. A full
/// scenario trajectory yields `σ + 1` points.
pub fn on_series(t: &Trajectory) -> Vec<SeriesPoint> {
    t.values()
        .iter()
        .filter(|v| v.is_odd())
        .enumerate()
        .map(|(i, v)| SeriesPoint {
            step: i as u64,
            value: v.clone(),
        })
        .collect()
}

/// Every stored value of a trajectory, indexed by raw step. A full
/// scenario trajectory yields `2σ + δ + 1` points.
pub fn an_series(t: &Trajectory) -> Vec<SeriesPoint> {
    t.values()
        .iter()
        .enumerate()
        .map(|(i, v)| SeriesPoint {
            step: i as u64,
            value: v.clone(),
        })
        .collect()
}

fn require_points(len: usize) -> io::Result<()> {
    if len == 0 {
        Err(io::Error::new(io::ErrorKind::InvalidInput, "empty series"))
    } else {
        Ok(())
    }
}

/// Write a series as CSV: header `step,value`, decimal values, LF line
/// endings.
pub fn write_csv<W: Write>(points: &[SeriesPoint], mut w: W) -> io::Result<()> {
    require_points(points.len())?;
    writeln!(w, "step,value")?;
    for p in points {
        writeln!(w, "{},{}", p.step, p.value)?;
    }
    Ok(())
}

/// Parse a series back from its CSV form.
pub fn read_csv<R: BufRead>(r: R) -> io::Result<Vec<SeriesPoint>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h == "step,value" => {}
        Some(Ok(h)) => return Err(bad(format!("unexpected header {h:?}"))),
        Some(Err(e)) => return Err(e),
        None => return Err(bad("empty file".to_string())),
    }
    let mut points = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (step, value) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("missing comma in {line:?}")))?;
        let step = step.parse::<u64>().map_err(|e| bad(e.to_string()))?;
        let value = value.parse::<BigUint>().map_err(|e| bad(e.to_string()))?;
        points.push(SeriesPoint { step, value });
    }
    Ok(points)
}

/// Viewport and scaling parameters for the SVG renderer.
#[derive(Clone, Debug)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    /// Scale the y axis by log10 (default). Linear otherwise.
    pub log_scale: bool,
    pub x_label: String,
    pub y_label: String,
}

impl Default for SvgOptions {
    fn default() -> SvgOptions {
        SvgOptions {
            width: 800,
            height: 500,
            margin: 60,
            log_scale: true,
            x_label: "step".to_string(),
            y_label: "value".to_string(),
        }
    }
}

/// Stroke patterns cycled over the polylines, readable without color.
const DASH_PATTERNS: [&str; 5] = ["", "6,3", "2,3", "9,3,2,3", "1,3"];

fn y_value(v: &BigUint, log_scale: bool) -> f64 {
    let f = v.to_f64().unwrap_or(f64::MAX);
    if log_scale {
        // values are positive integers, so log10 >= 0
        f.max(1.0).log10()
    } else {
        f
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render one or more labeled series into a single SVG document, one
/// polyline per series. Output bytes are deterministic for fixed input
/// and options.
pub fn write_svg<W: Write>(
    series: &[(String, Vec<SeriesPoint>)],
    opts: &SvgOptions,
    mut w: W,
) -> io::Result<()> {
    require_points(series.iter().map(|(_, p)| p.len()).sum())?;
    let margin = f64::from(opts.margin);
    let plot_w = f64::from(opts.width) - 2.0 * margin;
    let plot_h = f64::from(opts.height) - 2.0 * margin;

    let max_step = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.step))
        .max()
        .unwrap_or(0)
        .max(1);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in series {
        for p in pts {
            let y = y_value(&p.value, opts.log_scale);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if y_max - y_min < 1e-9 {
        y_min -= 1.0;
        y_max += 1.0;
    }

    let x_of = |step: u64| margin + plot_w * (step as f64) / (max_step as f64);
    let y_of = |v: f64| margin + plot_h * (1.0 - (v - y_min) / (y_max - y_min));

    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        opts.width, opts.height
    )?;
    writeln!(
        w,
        r#"  <rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        opts.width, opts.height
    )?;
    // axes
    writeln!(
        w,
        r#"  <line x1="{m:.2}" y1="{m:.2}" x2="{m:.2}" y2="{b:.2}" stroke="black" stroke-width="1"/>"#,
        m = margin,
        b = margin + plot_h
    )?;
    writeln!(
        w,
        r#"  <line x1="{m:.2}" y1="{b:.2}" x2="{r:.2}" y2="{b:.2}" stroke="black" stroke-width="1"/>"#,
        m = margin,
        b = margin + plot_h,
        r = margin + plot_w
    )?;
    // x ticks: five evenly spaced integer steps
    for i in 0..=4u64 {
        let step = max_step * i / 4;
        let x = x_of(step);
        writeln!(
            w,
            r#"  <line x1="{x:.2}" y1="{b:.2}" x2="{x:.2}" y2="{t:.2}" stroke="black" stroke-width="1"/>"#,
            b = margin + plot_h,
            t = margin + plot_h + 5.0
        )?;
        writeln!(
            w,
            r#"  <text x="{x:.2}" y="{y:.2}" font-size="12" text-anchor="middle">{step}</text>"#,
            y = margin + plot_h + 20.0
        )?;
    }
    // y ticks
    if opts.log_scale {
        let lo = y_min.ceil() as i64;
        let hi = y_max.floor() as i64;
        let count = (hi - lo).max(0) + 1;
        let stride = ((count + 7) / 8).max(1);
        let mut exp = lo;
        while exp <= hi {
            let y = y_of(exp as f64);
            writeln!(
                w,
                r#"  <line x1="{l:.2}" y1="{y:.2}" x2="{m:.2}" y2="{y:.2}" stroke="black" stroke-width="1"/>"#,
                l = margin - 5.0,
                m = margin
            )?;
            let label = if exp == 0 {
                "1".to_string()
            } else {
                format!("1e{exp}")
            };
            writeln!(
                w,
                r#"  <text x="{x:.2}" y="{y:.2}" font-size="12" text-anchor="end">{label}</text>"#,
                x = margin - 8.0,
                y = y + 4.0
            )?;
            exp += stride;
        }
    } else {
        for i in 0..=4 {
            let v = y_min + (y_max - y_min) * f64::from(i) / 4.0;
            let y = y_of(v);
            writeln!(
                w,
                r#"  <line x1="{l:.2}" y1="{y:.2}" x2="{m:.2}" y2="{y:.2}" stroke="black" stroke-width="1"/>"#,
                l = margin - 5.0,
                m = margin
            )?;
            writeln!(
                w,
                r#"  <text x="{x:.2}" y="{y:.2}" font-size="12" text-anchor="end">{v:.3e}</text>"#,
                x = margin - 8.0,
                y = y + 4.0
            )?;
        }
    }
    // axis labels
    writeln!(
        w,
        r#"  <text x="{x:.2}" y="{y:.2}" font-size="13" text-anchor="middle">{label}</text>"#,
        x = margin + plot_w / 2.0,
        y = f64::from(opts.height) - 15.0,
        label = escape(&opts.x_label)
    )?;
    writeln!(
        w,
        r#"  <text x="15" y="{y:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {y:.2})">{label}</text>"#,
        y = margin + plot_h / 2.0,
        label = escape(&opts.y_label)
    )?;
    // one polyline per series
    for (idx, (label, pts)) in series.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let dash = DASH_PATTERNS[idx % DASH_PATTERNS.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                format!(
                    "{:.2},{:.2}",
                    x_of(p.step),
                    y_of(y_value(&p.value, opts.log_scale))
                )
            })
            .collect();
        writeln!(
            w,
            r#"  <polyline fill="none" stroke="black" stroke-width="1"{dash_attr} points="{}"/>"#,
            coords.join(" ")
        )?;
        // legend entry
        let ly = margin + 16.0 * (idx as f64) + 10.0;
        writeln!(
            w,
            r#"  <line x1="{x1:.2}" y1="{ly:.2}" x2="{x2:.2}" y2="{ly:.2}" stroke="black" stroke-width="1"{dash_attr}/>"#,
            x1 = margin + plot_w - 110.0,
            x2 = margin + plot_w - 80.0
        )?;
        writeln!(
            w,
            r#"  <text x="{x:.2}" y="{y:.2}" font-size="12">{label}</text>"#,
            x = margin + plot_w - 74.0,
            y = ly + 4.0,
            label = escape(label)
        )?;
    }
    writeln!(w, "</svg>")?;
    Ok(())
}

/// Render a single unlabeled series.
pub fn write_svg_single<W: Write>(
    points: &[SeriesPoint],
    opts: &SvgOptions,
    w: W,
) -> io::Result<()> {
    write_svg(&[(String::new(), points.to_vec())], opts, w)
}
