use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use mincomp::enumerate::predicted_classes;
use mincomp::equidist::{histogram, reduce_mod_one, star_discrepancy, weyl_sums};
use mincomp::series::{eisenstein_reference, eval_v, laplacian_residual};
use mincomp::{enumerate, for_each_sample, orbit_count_scaling, Bound, EnumSpec, LatticeShape, OrbitSample, Rational};
use num_complex::Complex64;

use crate::doc::{
    CountDoc, HistogramDoc, LaplacianDoc, OrbitCountDoc, OrbitCountEntry, SampleRow, SeriesDoc, StatsDoc, WeylDoc,
    WeylEntry, SCHEMA,
};
use crate::fmt::g17;
use crate::{report, BoundArgs, CliError, Command, Common, Format, Result, StatsArgs};

pub(crate) const CSV_HEADER: &str = "c,d,a,b,norm_sq,sk,rho,im";

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub(crate) struct Setup {
    pub lattice: LatticeShape,
    pub workers: usize,
    pub chunk: u64,
}

impl Common {
    pub(crate) fn setup(&self) -> Result<Setup> {
        let (x, y) = self
            .z
            .split_once(',')
            .ok_or_else(|| config(format!("--z expects `x,y`, got `{}`", self.z)))?;
        let lattice = LatticeShape::parse(x.trim(), y.trim())?;
        let workers = match self.workers {
            Some(0) => return Err(config("--workers must be at least 1")),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if self.chunk == 0 {
            return Err(config("--chunk must be at least 1"));
        }
        Ok(Setup { lattice, workers, chunk: self.chunk })
    }
}

impl BoundArgs {
    fn resolve(&self) -> Result<Option<Bound>> {
        let positive = |flag: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(config(format!("{flag} must be positive and finite, got {v}")))
            }
        };
        match (self.max_norm, self.epsilon) {
            (Some(t), None) => Ok(Some(Bound::MaxNorm(positive("--max-norm", t)?))),
            (None, Some(e)) => Ok(Some(Bound::Epsilon(positive("--epsilon", e)?))),
            (None, None) => Ok(None),
            (Some(_), Some(_)) => Err(config("--max-norm and --epsilon are mutually exclusive")),
        }
    }

    fn required(&self) -> Result<Bound> {
        self.resolve()?.ok_or_else(|| config("one of --max-norm or --epsilon is required"))
    }
}

impl Setup {
    fn spec(&self, bound: Bound) -> EnumSpec {
        EnumSpec { lattice: self.lattice.clone(), bound, chunk: self.chunk }
    }
}

pub(crate) struct Validated {
    pub ms: Vec<i64>,
    pub bins: usize,
}

impl StatsArgs {
    pub(crate) fn validate(&self) -> Result<Validated> {
        if self.bins < 2 {
            return Err(config(format!("--bins must be at least 2, got {}", self.bins)));
        }
        Ok(Validated { ms: parse_m_list(&self.m_list)?, bins: self.bins as usize })
    }
}

/// Comma-separated nonzero integers; `a..b` expands inclusively.
pub fn parse_m_list(text: &str) -> Result<Vec<i64>> {
    let mut ms = Vec::new();
    for part in text.split(',').map(str::trim) {
        let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| config(format!("bad frequency `{s}` in --m-list")));
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi || hi - lo > 10_000 {
                    return Err(config(format!("bad range `{part}` in --m-list")));
                }
                ms.extend(lo..=hi);
            }
            None => ms.push(parse(part)?),
        }
    }
    if ms.contains(&0) {
        return Err(config("--m-list must not contain 0; S_0 is the sample count n"));
    }
    Ok(ms)
}

fn parse_floats(flag: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| config(format!("bad number `{s}` in {flag}")))
        })
        .collect()
}

/// Writes to `--out` when given, standard output otherwise.
pub(crate) fn with_output(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        None => body(stdout),
        Some(path) => {
            let output_err = |source| CliError::Output { path: path.to_path_buf(), source };
            let mut w = BufWriter::new(File::create(path).map_err(output_err)?);
            body(&mut w)?;
            w.flush().map_err(output_err)
        }
    }
}

fn write_json<T: serde::Serialize>(w: &mut dyn Write, doc: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, doc).map_err(std::io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

pub(crate) fn csv_row(s: &OrbitSample) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        s.vec.c,
        s.vec.d,
        s.comp.a,
        s.comp.b,
        g17(s.norm_sq),
        g17(s.sk),
        g17(s.rho),
        g17(s.im)
    )
}

fn sample_row(s: &OrbitSample) -> SampleRow {
    SampleRow {
        c: s.vec.c,
        d: s.vec.d,
        a: s.comp.a,
        b: s.comp.b,
        norm_sq: s.norm_sq,
        sk: s.sk,
        rho: s.rho,
        im: s.im,
    }
}

/// Reads rows written by `enumerate --format csv`. Blank lines and a missing
/// final newline are fine.
pub fn read_samples_csv(reader: impl BufRead) -> Result<Vec<SampleRow>> {
    let mut rows = Vec::new();
    let mut lines = reader.lines().enumerate();
    let header = lines.next().map(|(_, h)| h).transpose()?;
    if header.as_deref().map(str::trim_end) != Some(CSV_HEADER) {
        return Err(config(format!("CSV input must start with `{CSV_HEADER}`")));
    }
    for (i, line) in lines {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let bad = || config(format!("CSV line {}: cannot parse `{line}`", i + 1));
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad());
        }
        let int = |k: usize| f[k].parse::<i64>().map_err(|_| bad());
        let real = |k: usize| f[k].parse::<f64>().map_err(|_| bad());
        rows.push(SampleRow {
            c: int(0)?,
            d: int(1)?,
            a: int(2)?,
            b: int(3)?,
            norm_sq: real(4)?,
            sk: real(5)?,
            rho: real(6)?,
            im: real(7)?,
        });
    }
    Ok(rows)
}

fn weyl_entries(sk: &[f64], ms: &[i64]) -> Result<(usize, Vec<WeylEntry>)> {
    let sample = reduce_mod_one(sk.iter().copied())?;
    let report = weyl_sums(&sample, ms)?;
    let entries = report
        .ms
        .iter()
        .zip(&report.sums)
        .zip(&report.normalized)
        .map(|((&m, s), &normalized)| WeylEntry { m, re: s.re, im: s.im, normalized })
        .collect();
    Ok((report.n, entries))
}

/// Statistics of least skewness `sk` and signed ratio `rho` values for a run
/// with cutoff `|v|² <= norm_sq` on a lattice of covolume `area`.
pub fn stats_from_values(sk: &[f64], rho: &[f64], area: f64, norm_sq: f64, ms: &[i64], bins: usize) -> Result<StatsDoc> {
    let sk_sample = reduce_mod_one(sk.iter().copied())?;
    let rho_sample = reduce_mod_one(rho.iter().copied())?;
    let discrepancy_sk = star_discrepancy(&sk_sample)?;
    let discrepancy_rho = star_discrepancy(&rho_sample)?;
    let (n, weyl) = weyl_entries(sk, ms)?;
    let h = histogram(&sk_sample, bins)?;
    let count = 2 * n as u64;
    let predicted = 2.0 * predicted_classes(area, norm_sq);
    Ok(StatsDoc {
        schema: SCHEMA,
        n,
        discrepancy_sk,
        discrepancy_rho,
        weyl,
        histogram: HistogramDoc { bins: h.bins, counts: h.counts, chi_square: h.chi_square },
        count_prediction: CountDoc { count, predicted, relative_error: (count as f64 - predicted).abs() / predicted },
    })
}

pub(crate) fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Enumerate { common, bound, format } => {
            let setup = common.setup()?;
            let spec = setup.spec(bound.required()?);
            spec.cutoff()?;
            with_output(common.out.as_deref(), stdout, |w| cmd_enumerate(&spec, setup.workers, format, w))
        }
        Command::Stats { common, bound, stats, input } => {
            let setup = common.setup()?;
            let spec = setup.spec(bound.required()?);
            let cutoff = spec.cutoff()?;
            let v = stats.validate()?;
            let (sk, rho) = match input {
                Some(path) => {
                    let file = File::open(&path).map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
                    let rows = read_samples_csv(BufReader::new(file))?;
                    (rows.iter().map(|r| r.sk).collect(), rows.iter().map(|r| r.rho).collect())
                }
                None => collect_values(&spec, setup.workers)?,
            };
            let doc = stats_from_values(&sk, &rho, setup.lattice.area(), cutoff.norm_sq, &v.ms, v.bins)?;
            with_output(common.out.as_deref(), stdout, |w| write_json(w, &doc))
        }
        Command::Weyl { common, bound, m_list, format } => {
            let setup = common.setup()?;
            let spec = setup.spec(bound.required()?);
            spec.cutoff()?;
            let ms = parse_m_list(&m_list)?;
            let (sk, _) = collect_values(&spec, setup.workers)?;
            let (n, weyl) = weyl_entries(&sk, &ms)?;
            with_output(common.out.as_deref(), stdout, |w| match format {
                Format::Json => write_json(w, &WeylDoc { schema: SCHEMA, n, weyl }),
                Format::Csv => {
                    writeln!(w, "m,re,im,normalized")?;
                    for e in &weyl {
                        writeln!(w, "{},{},{},{}", e.m, g17(e.re), g17(e.im), g17(e.normalized))?;
                    }
                    Ok(())
                }
            })
        }
        Command::OrbitCount { common, eps_grid, format } => {
            let setup = common.setup()?;
            let grid = parse_floats("--eps-grid", &eps_grid)?;
            if grid.iter().any(|&e| e <= 0.0) {
                return Err(config("--eps-grid values must be positive"));
            }
            let rows = orbit_count_scaling(&setup.lattice, &grid, setup.workers)?;
            let rows: Vec<OrbitCountEntry> = rows
                .iter()
                .map(|r| OrbitCountEntry { epsilon: r.epsilon, count: r.count, scaled: r.scaled })
                .collect();
            with_output(common.out.as_deref(), stdout, |w| match format {
                Format::Json => write_json(w, &OrbitCountDoc { schema: SCHEMA, limit: 3.0 / PI, rows }),
                Format::Csv => {
                    writeln!(w, "epsilon,count,scaled")?;
                    for r in &rows {
                        writeln!(w, "{},{},{}", g17(r.epsilon), r.count, g17(r.scaled))?;
                    }
                    Ok(())
                }
            })
        }
        Command::Series { common, m, s, trunc, laplacian_check, h } => {
            let setup = common.setup()?;
            let doc = cmd_series(&setup, m, &s, trunc, laplacian_check.then_some(h))?;
            with_output(common.out.as_deref(), stdout, |w| write_json(w, &doc))
        }
        Command::Report { common, bound, stats } => {
            let setup = common.setup()?;
            let bound = bound.resolve()?.unwrap_or(Bound::MaxNorm(1000.0));
            let v = stats.validate()?;
            let dir = common.out.clone().unwrap_or_else(|| "report".into());
            report::write_report(&setup, setup.spec(bound), &v, &dir, stdout)
        }
    }
}

fn collect_values(spec: &EnumSpec, workers: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut sk = Vec::new();
    let mut rho = Vec::new();
    for_each_sample(spec, workers, |s| {
        sk.push(s.sk);
        rho.push(s.rho);
    })?;
    Ok((sk, rho))
}

fn cmd_enumerate(spec: &EnumSpec, workers: usize, format: Format, w: &mut dyn Write) -> Result<()> {
    // the callback cannot fail, so the first write error is parked here
    let mut failure: Option<std::io::Error> = None;
    let mut first = true;
    match format {
        Format::Csv => writeln!(w, "{CSV_HEADER}")?,
        Format::Json => write!(w, "{{\"schema\":{SCHEMA},\"samples\":[")?,
    }
    for_each_sample(spec, workers, |s| {
        if failure.is_some() {
            return;
        }
        let written = match format {
            Format::Csv => writeln!(w, "{}", csv_row(s)),
            Format::Json => {
                let sep = if first { "" } else { "," };
                first = false;
                serde_json::to_string(&sample_row(s))
                    .map_err(std::io::Error::from)
                    .and_then(|row| write!(w, "{sep}\n{row}"))
            }
        };
        failure = written.err();
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    if format == Format::Json {
        writeln!(w, "\n]}}")?;
    }
    Ok(())
}

fn parse_s(text: &str) -> Result<Complex64> {
    let parts = parse_floats("--s", text)?;
    match parts.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(config(format!("--s expects `re` or `re,im`, got `{text}`"))),
    }
}

fn is_gaussian_point(lattice: &LatticeShape) -> bool {
    match lattice.exact() {
        Some(e) => e.x == Rational::from_integer(0) && e.abs_sq == Rational::from_integer(1),
        None => lattice.x() == 0.0 && lattice.y() == 1.0,
    }
}

fn cmd_series(setup: &Setup, m: i64, s: &str, trunc: f64, laplacian_h: Option<f64>) -> Result<SeriesDoc> {
    let s = parse_s(s)?;
    let point = eval_v(&setup.lattice, m, s, trunc, setup.workers)?;
    let reference = if is_gaussian_point(&setup.lattice) && m == 0 && s.im == 0.0 {
        Some(eisenstein_reference(s.re)?)
    } else {
        None
    };
    let laplacian_check = match laplacian_h {
        None => None,
        Some(_) if s.im != 0.0 => return Err(config("--laplacian-check needs a real --s")),
        Some(h) => {
            let check = laplacian_residual(&setup.lattice, m, s.re, trunc, h, setup.workers)?;
            Some(LaplacianDoc {
                lhs: [check.lhs.re, check.lhs.im],
                rhs: [check.rhs.re, check.rhs.im],
                rel_err: check.rel_err,
                h,
            })
        }
    };
    Ok(SeriesDoc {
        schema: SCHEMA,
        m,
        s: [s.re, s.im],
        trunc,
        value: [point.value.re, point.value.im],
        tail_bound: point.tail_bound,
        reference,
        laplacian_check,
    })
}

/// Materialized samples for a run; used by the report.
pub(crate) fn collect_samples(spec: &EnumSpec, workers: usize) -> Result<Vec<OrbitSample>> {
    Ok(enumerate(spec, workers)?.samples)
}
