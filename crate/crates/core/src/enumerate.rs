//! Enumeration of primitive vectors `|v| ≤ T`, equivalently of the cosets
//! `Γ∞\Γ` with `Im(γz) > ε`, one canonical `(c, d)` per ±-class.
//!
//! Work is split into fixed-width ranges of `c` ("chunks") that are a pure
//! function of the [`EnumSpec`]. Chunks are processed in parallel, their
//! buffers concatenated in chunk order and sorted by `(|v|², c, d)`, so the
//! output does not depend on the number of workers. Large runs are cut into
//! annuli of `|v|²` ("bands") that are sorted and emitted one at a time, which
//! bounds memory for the streaming interface.

use std::f64::consts::PI;

use num_integer::Integer;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};
use crate::lattice::{orbit_sample_in, GramForm, LatticeShape, OrbitSample, PrimitiveVector, COORD_LIMIT};
use crate::scalar::Scalar;

pub const DEFAULT_CHUNK: u64 = 1024;

/// Expected number of samples per band.
const BAND_TARGET: f64 = (1u64 << 21) as f64;

/// `|v|² ≤ norm_sq`, or `|v|² < norm_sq` when `strict`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormCutoff {
    pub norm_sq: f64,
    pub strict: bool,
}

impl NormCutoff {
    #[inline]
    pub fn admits(&self, q: f64) -> bool {
        if self.strict {
            q < self.norm_sq
        } else {
            q <= self.norm_sq
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    /// `|v| ≤ T`, inclusive.
    MaxNorm(f64),
    /// `Im(γz) > ε`, strict; the same set as `|v|² < area / ε`.
    Epsilon(f64),
    Cutoff(NormCutoff),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumSpec {
    pub lattice: LatticeShape,
    pub bound: Bound,
    /// Width of the `c` ranges handed to workers.
    pub chunk: u64,
}

impl EnumSpec {
    pub fn by_norm(lattice: LatticeShape, max_norm: f64) -> Self {
        EnumSpec {
            lattice,
            bound: Bound::MaxNorm(max_norm),
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn by_epsilon(lattice: LatticeShape, epsilon: f64) -> Self {
        EnumSpec {
            lattice,
            bound: Bound::Epsilon(epsilon),
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn with_chunk(mut self, chunk: u64) -> Self {
        self.chunk = chunk;
        self
    }

    pub fn cutoff(&self) -> Result<NormCutoff> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::InvalidParameter(format!("{name} = {v} must be positive and finite")))
            }
        };
        match self.bound {
            Bound::MaxNorm(t) => Ok(NormCutoff {
                norm_sq: positive("T", t)?.powi(2),
                strict: false,
            }),
            Bound::Epsilon(eps) => Ok(NormCutoff {
                norm_sq: self.lattice.area() / positive("epsilon", eps)?,
                strict: true,
            }),
            Bound::Cutoff(c) => {
                positive("cutoff", c.norm_sq)?;
                Ok(c)
            }
        }
    }
}

/// `T = sqrt(area / ε)`.
pub fn epsilon_to_norm(area: f64, epsilon: f64) -> f64 {
    (area / epsilon).sqrt()
}

/// Expected number of ±-classes in `|v|² ≤ norm_sq`: half of
/// `(1/ζ(2)) (π / area) T²`.
pub fn predicted_classes(area: f64, norm_sq: f64) -> f64 {
    3.0 * norm_sq / (PI * area)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumResult {
    /// Sorted by `(|v|², c, d)`.
    pub samples: Vec<OrbitSample>,
    pub count: usize,
    /// Asymptotic number of ±-classes, see [`predicted_classes`].
    pub predicted: f64,
}

#[derive(Clone, Copy, Debug)]
struct Band {
    /// Exclusive lower limit on `|v|²`; `None` for the innermost band.
    inner: Option<NormCutoff>,
    outer: NormCutoff,
}

impl Band {
    #[inline]
    fn admits(&self, q: f64) -> bool {
        self.outer.admits(q) && !self.inner.is_some_and(|i| i.admits(q))
    }
}

fn plan_bands(cutoff: NormCutoff, area: f64) -> Vec<Band> {
    let expected = predicted_classes(area, cutoff.norm_sq);
    let count = (expected / BAND_TARGET).ceil().max(1.0) as usize;
    let mut bands = Vec::with_capacity(count);
    let mut inner = None;
    for k in 1..=count {
        let outer = if k == count {
            cutoff
        } else {
            NormCutoff {
                norm_sq: cutoff.norm_sq * k as f64 / count as f64,
                strict: false,
            }
        };
        bands.push(Band { inner, outer });
        inner = Some(outer);
    }
    bands
}

struct Geometry<'a, S> {
    form: &'a GramForm<S>,
    area: f64,
    x: f64,
    y: f64,
}

impl<S: Scalar> Geometry<'_, S> {
    /// Admitted `d` for fixed `c`, as a closed interval. The admitted set is
    /// an interval around `-cx`; the square-root estimate is corrected by
    /// stepping with the same predicate used for membership.
    fn d_interval(&self, c: i64, cut: NormCutoff) -> Option<(i64, i64)> {
        let q = |d: i64| self.form.norm_sq_f64(c, d);
        let centre = -(c as f64) * self.x;
        let seed = [centre.floor() as i64, centre.ceil() as i64]
            .into_iter()
            .find(|&d| cut.admits(q(d)))?;
        let half = (cut.norm_sq - (c as f64 * self.y).powi(2)).max(0.0).sqrt();

        let mut lo = ((centre - half).ceil() as i64).min(seed);
        while cut.admits(q(lo - 1)) {
            lo -= 1;
        }
        while !cut.admits(q(lo)) {
            lo += 1;
        }
        let mut hi = ((centre + half).floor() as i64).max(seed);
        while cut.admits(q(hi + 1)) {
            hi += 1;
        }
        while !cut.admits(q(hi)) {
            hi -= 1;
        }
        Some((lo, hi))
    }

    /// Calls `visit(c, d)` for every canonical coprime pair in `band` with
    /// `c` in `c_lo..=c_hi`, in increasing `(c, d)`.
    fn visit<F: FnMut(i64, i64) -> Result<()>>(&self, band: &Band, c_lo: i64, c_hi: i64, mut visit: F) -> Result<()> {
        for c in c_lo..=c_hi {
            let Some((lo, hi)) = self.d_interval(c, band.outer) else {
                continue;
            };
            let (skip_lo, skip_hi) = band
                .inner
                .and_then(|inner| self.d_interval(c, inner))
                .unwrap_or((hi + 1, hi));
            let pieces = [(lo, skip_lo.min(hi + 1) - 1), (skip_hi.max(lo - 1) + 1, hi)];
            for (from, to) in pieces {
                for d in from..=to {
                    if c == 0 && d != 1 {
                        continue;
                    }
                    if c.gcd(&d) != 1 || !band.admits(self.form.norm_sq_f64(c, d)) {
                        continue;
                    }
                    visit(c, d)?;
                }
            }
        }
        Ok(())
    }
}

struct Plan {
    bands: Vec<Band>,
    chunk: i64,
}

impl Plan {
    fn new(spec: &EnumSpec) -> Result<Self> {
        if spec.chunk == 0 {
            return Err(Error::InvalidParameter("chunk width must be positive".into()));
        }
        let cutoff = spec.cutoff()?;
        let lattice = &spec.lattice;
        let radius = cutoff.norm_sq.sqrt();
        let c_bound = radius / lattice.y() + 2.0;
        let d_bound = c_bound * lattice.x().abs() + radius + 2.0;
        for value in [c_bound, d_bound] {
            if value > COORD_LIMIT as f64 {
                return Err(Error::OverflowGuard {
                    value: value.min(i128::MAX as f64) as i128,
                    limit: COORD_LIMIT,
                });
            }
        }
        Ok(Plan {
            bands: plan_bands(cutoff, lattice.area()),
            chunk: spec.chunk.min(COORD_LIMIT as u64) as i64,
        })
    }

    fn chunks(&self, band: &Band, y: f64) -> Vec<(i64, i64)> {
        let c_max = (band.outer.norm_sq.sqrt() / y).floor() as i64 + 1;
        (0..=c_max)
            .step_by(self.chunk as usize)
            .map(|start| (start, (start + self.chunk - 1).min(c_max)))
            .collect()
    }
}

fn pool(workers: usize) -> Result<Option<ThreadPool>> {
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    if workers == 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map(Some)
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

fn map_chunks<T, F>(pool: &Option<ThreadPool>, chunks: &[(i64, i64)], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(i64, i64) -> Result<T> + Sync,
{
    match pool {
        None => chunks.iter().map(|&(lo, hi)| f(lo, hi)).collect(),
        Some(p) => p.install(|| chunks.par_iter().map(|&(lo, hi)| f(lo, hi)).collect()),
    }
}

fn sort_samples(pool: &Option<ThreadPool>, samples: &mut [OrbitSample]) {
    let key = |a: &OrbitSample, b: &OrbitSample| {
        a.norm_sq
            .total_cmp(&b.norm_sq)
            .then(a.vec.c.cmp(&b.vec.c))
            .then(a.vec.d.cmp(&b.vec.d))
    };
    match pool {
        None => samples.sort_unstable_by(key),
        Some(p) => p.install(|| samples.par_sort_unstable_by(key)),
    }
}

fn stream_in<S: Scalar, F: FnMut(&OrbitSample)>(
    geometry: &Geometry<'_, S>,
    plan: &Plan,
    pool: &Option<ThreadPool>,
    mut callback: F,
) -> Result<usize> {
    let mut emitted = 0;
    for band in &plan.bands {
        let chunks = plan.chunks(band, geometry.y);
        let buffers = map_chunks(pool, &chunks, |lo, hi| {
            let mut out = Vec::new();
            geometry.visit(band, lo, hi, |c, d| {
                let v = PrimitiveVector::new_unchecked(c, d);
                out.push(orbit_sample_in(geometry.form, geometry.area, v)?);
                Ok(())
            })?;
            Ok(out)
        })?;
        let mut merged: Vec<OrbitSample> = buffers.into_iter().flatten().collect();
        sort_samples(pool, &mut merged);
        emitted += merged.len();
        merged.iter().for_each(&mut callback);
    }
    Ok(emitted)
}

fn count_in<S: Scalar>(geometry: &Geometry<'_, S>, plan: &Plan, pool: &Option<ThreadPool>) -> Result<u64> {
    let mut total = 0;
    for band in &plan.bands {
        let chunks = plan.chunks(band, geometry.y);
        let counts = map_chunks(pool, &chunks, |lo, hi| {
            let mut n = 0u64;
            geometry.visit(band, lo, hi, |_, _| {
                n += 1;
                Ok(())
            })?;
            Ok(n)
        })?;
        total += counts.into_iter().sum::<u64>();
    }
    Ok(total)
}

/// Streams samples to `callback` in merged order and returns how many were
/// emitted.
pub fn for_each_sample<F: FnMut(&OrbitSample)>(spec: &EnumSpec, workers: usize, callback: F) -> Result<usize> {
    let plan = Plan::new(spec)?;
    let pool = pool(workers)?;
    let l = &spec.lattice;
    match l.exact() {
        Some(e) => {
            let g = Geometry { form: &e.form, area: l.area(), x: l.x(), y: l.y() };
            stream_in(&g, &plan, &pool, callback)
        }
        None => {
            let g = Geometry { form: l.float_form(), area: l.area(), x: l.x(), y: l.y() };
            stream_in(&g, &plan, &pool, callback)
        }
    }
}

pub fn enumerate(spec: &EnumSpec, workers: usize) -> Result<EnumResult> {
    let mut samples = Vec::new();
    for_each_sample(spec, workers, |s| samples.push(*s))?;
    let cutoff = spec.cutoff()?;
    Ok(EnumResult {
        count: samples.len(),
        samples,
        predicted: predicted_classes(spec.lattice.area(), cutoff.norm_sq),
    })
}

/// Number of ±-classes, without building samples.
pub fn count_classes(spec: &EnumSpec, workers: usize) -> Result<u64> {
    let plan = Plan::new(spec)?;
    let pool = pool(workers)?;
    let l = &spec.lattice;
    match l.exact() {
        Some(e) => count_in(&Geometry { form: &e.form, area: l.area(), x: l.x(), y: l.y() }, &plan, &pool),
        None => count_in(&Geometry { form: l.float_form(), area: l.area(), x: l.x(), y: l.y() }, &plan, &pool),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountComparison {
    /// `#L_prim(T)`, counting `v` and `-v` separately.
    pub count: u64,
    /// `(1/ζ(2)) (π / area) T²`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// Compares `#L_prim(T)` with its leading asymptotic. Needs a
/// [`Bound::MaxNorm`] spec.
pub fn count_vs_asymptotic(spec: &EnumSpec, workers: usize) -> Result<CountComparison> {
    let Bound::MaxNorm(t) = spec.bound else {
        return Err(Error::InvalidParameter("count comparison needs a max-norm bound".into()));
    };
    let count = 2 * count_classes(spec, workers)?;
    let predicted = 6.0 * t * t / (PI * spec.lattice.area());
    Ok(CountComparison {
        count,
        predicted,
        relative_error: (count as f64 - predicted).abs() / predicted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitCountRow {
    pub epsilon: f64,
    /// `#{γ ∈ Γ∞\Γ : Im(γz) > ε}`
    pub count: u64,
    /// `ε · count`
    pub scaled: f64,
}

/// `ε · N(ε)` along a strictly decreasing grid of positive `ε`.
pub fn orbit_count_scaling(lattice: &LatticeShape, eps_grid: &[f64], workers: usize) -> Result<Vec<OrbitCountRow>> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidParameter("epsilon grid is empty".into()));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("epsilon grid must be strictly decreasing".into()));
    }
    eps_grid
        .iter()
        .map(|&epsilon| {
            let count = count_classes(&EnumSpec::by_epsilon(lattice.clone(), epsilon), workers)?;
            Ok(OrbitCountRow {
                epsilon,
                count,
                scaled: epsilon * count as f64,
            })
        })
        .collect()
}
