//! Static artifacts for one run: a histogram SVG, discrepancy against `T`,
//! and a Markdown summary. Everything is rendered from the sorted sample
//! list, so reruns give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use mincomp::equidist::{interval_fraction, reduce_mod_one, star_discrepancy};
use mincomp::{EnumSpec, OrbitSample};

use crate::commands::{collect_samples, stats_from_values, with_output, Setup, Validated};
use crate::doc::StatsDoc;
use crate::fmt::g17;
use crate::{CliError, Result};

/// Prefix radii are `T / 2^(k/2)` for `k = 0..PREFIX_STEPS`.
const PREFIX_STEPS: i32 = 9;

pub(crate) struct PrefixRow {
    pub t: f64,
    pub n: usize,
    pub discrepancy_sk: f64,
    pub discrepancy_rho: f64,
}

fn prefix_rows(samples: &[OrbitSample], norm_sq: f64) -> Result<Vec<PrefixRow>> {
    let t_max = norm_sq.sqrt();
    let mut rows = Vec::new();
    for k in (0..PREFIX_STEPS).rev() {
        let t = if k == 0 { t_max } else { t_max / 2f64.powf(k as f64 / 2.0) };
        let n = samples.partition_point(|s| s.norm_sq <= t * t);
        if n == 0 {
            continue;
        }
        let prefix = &samples[..n];
        let sk = reduce_mod_one(prefix.iter().map(|s| s.sk))?;
        let rho = reduce_mod_one(prefix.iter().map(|s| s.rho))?;
        rows.push(PrefixRow {
            t,
            n,
            discrepancy_sk: star_discrepancy(&sk)?,
            discrepancy_rho: star_discrepancy(&rho)?,
        });
    }
    Ok(rows)
}

pub(crate) fn histogram_svg(stats: &StatsDoc, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let counts = &stats.histogram.counts;
    let expected = stats.n as f64 / counts.len() as f64;
    let peak = counts.iter().copied().max().unwrap_or(0) as f64;
    let y_max = 1.1 * peak.max(expected).max(1.0);
    let y_of = |v: f64| TOP + plot_h * (1.0 - v / y_max);
    let bar_w = plot_w / counts.len() as f64;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, xml_escape(title));
    let _ = writeln!(s, r#"<g fill="steelblue" stroke="white" stroke-width="0.5">"#);
    for (k, &c) in counts.iter().enumerate() {
        let y = y_of(c as f64);
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
            LEFT + k as f64 * bar_w,
            y,
            bar_w,
            TOP + plot_h - y
        );
    }
    let _ = writeln!(s, "</g>");
    let ref_y = y_of(expected);
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{ref_y:.2}" x2="{:.2}" y2="{ref_y:.2}" stroke="crimson" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
        LEFT + plot_w
    );
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, TOP + plot_h, LEFT + plot_w, TOP + plot_h);
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/>"#, TOP + plot_h);
    for &(frac, _) in X_TICKS {
        let x = LEFT + frac * plot_w;
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#, TOP + plot_h, TOP + plot_h + 5.0);
    }
    for k in 0..=4 {
        let y = TOP + plot_h * (1.0 - k as f64 / 4.0);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}"/>"#, LEFT - 5.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g text-anchor="middle">"#);
    for &(frac, label) in X_TICKS {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, LEFT + frac * plot_w, TOP + plot_h + 20.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">least skewness</text>"#, LEFT + plot_w / 2.0, H - 10.0);
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g text-anchor="end">"#);
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let y = TOP + plot_h * (1.0 - k as f64 / 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{v:.0}</text>"#, LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="crimson">uniform n/bins = {expected:.1}</text>"#,
        LEFT + plot_w,
        ref_y - 6.0
    );
    let _ = writeln!(s, "</svg>");
    s
}

const X_TICKS: &[(f64, &str)] = &[(0.0, "-0.5"), (0.25, "-0.25"), (0.5, "0"), (0.75, "0.25"), (1.0, "0.5")];

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn prefix_csv(rows: &[PrefixRow]) -> String {
    let mut s = String::from("t,n,discrepancy_sk,discrepancy_rho\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", g17(r.t), r.n, g17(r.discrepancy_sk), g17(r.discrepancy_rho));
    }
    s
}

fn summary_md(setup: &Setup, spec: &EnumSpec, stats: &StatsDoc, rows: &[PrefixRow], rho_quarter: f64) -> String {
    let l = &setup.lattice;
    let mut s = String::new();
    let _ = writeln!(s, "# Minimal completion statistics\n");
    let _ = writeln!(s, "| parameter | value |");
    let _ = writeln!(s, "|---|---|");
    let _ = writeln!(s, "| z | {} |", l);
    let _ = writeln!(s, "| arithmetic | {} |", if l.is_exact() { "exact" } else { "float" });
    let _ = writeln!(s, "| bound | {} |", describe_bound(spec));
    let _ = writeln!(s, "| samples (±-classes) | {} |", stats.n);
    let _ = writeln!(s, "| bins | {} |\n", stats.histogram.bins);

    let _ = writeln!(s, "## Results\n");
    let _ = writeln!(s, "| quantity | value |");
    let _ = writeln!(s, "|---|---|");
    let _ = writeln!(s, "| star discrepancy of sk | {:.6} |", stats.discrepancy_sk);
    let _ = writeln!(s, "| star discrepancy of rho | {:.6} |", stats.discrepancy_rho);
    let _ = writeln!(s, "| fraction of rho in (-1/4, 0) | {:.6} |", rho_quarter);
    let worst = stats.weyl.iter().map(|w| w.normalized).fold(0.0, f64::max);
    let _ = writeln!(s, "| max normalized Weyl sum | {:.3e} |", worst);
    let c = &stats.count_prediction;
    let _ = writeln!(s, "| primitive vectors counted | {} |", c.count);
    let _ = writeln!(s, "| primitive vectors predicted | {:.1} |", c.predicted);
    let _ = writeln!(s, "| count relative error | {:.3e} |", c.relative_error);
    let _ = writeln!(s, "| histogram chi-square (raw) | {:.3} |\n", stats.histogram.chi_square);

    let _ = writeln!(s, "## Weyl sums of sk\n");
    let _ = writeln!(s, "| m | Re S_m | Im S_m | abs(S_m)/n |");
    let _ = writeln!(s, "|---|---|---|---|");
    for w in &stats.weyl {
        let _ = writeln!(s, "| {} | {:.4} | {:.4} | {:.3e} |", w.m, w.re, w.im, w.normalized);
    }
    let _ = writeln!(s, "\n## Discrepancy against T\n");
    let _ = writeln!(s, "| T | n | D*(sk) | D*(rho) |");
    let _ = writeln!(s, "|---|---|---|---|");
    for r in rows {
        let _ = writeln!(s, "| {:.3} | {} | {:.6} | {:.6} |", r.t, r.n, r.discrepancy_sk, r.discrepancy_rho);
    }
    let _ = writeln!(s, "\nFiles: `histogram.svg`, `discrepancy.csv`.");
    s
}

fn describe_bound(spec: &EnumSpec) -> String {
    match spec.bound {
        mincomp::Bound::MaxNorm(t) => format!("abs(v) <= {}", g17(t)),
        mincomp::Bound::Epsilon(e) => format!("Im(gamma z) > {}", g17(e)),
        mincomp::Bound::Cutoff(c) => format!("abs(v)^2 {} {}", if c.strict { "<" } else { "<=" }, g17(c.norm_sq)),
    }
}

pub(crate) fn write_report(setup: &Setup, spec: EnumSpec, v: &Validated, dir: &Path, stdout: &mut dyn Write) -> Result<()> {
    let cutoff = spec.cutoff()?;
    let samples = collect_samples(&spec, setup.workers)?;
    let sk: Vec<f64> = samples.iter().map(|s| s.sk).collect();
    let rho: Vec<f64> = samples.iter().map(|s| s.rho).collect();
    let stats = stats_from_values(&sk, &rho, setup.lattice.area(), cutoff.norm_sq, &v.ms, v.bins)?;
    let rho_quarter = interval_fraction(&rho, -0.25, 0.0)?;
    let rows = prefix_rows(&samples, cutoff.norm_sq)?;

    fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
    let title = format!("least skewness at z = {}, n = {}", setup.lattice, stats.n);
    let files = [
        ("histogram.svg", histogram_svg(&stats, &title)),
        ("discrepancy.csv", prefix_csv(&rows)),
        ("summary.md", summary_md(setup, &spec, &stats, &rows, rho_quarter)),
    ];
    for (name, body) in files {
        let path = dir.join(name);
        with_output(Some(&path), stdout, |w| Ok(w.write_all(body.as_bytes())?))?;
        writeln!(stdout, "{}", path.display())?;
    }
    Ok(())
}
