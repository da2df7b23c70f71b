//! Truncated evaluation of `V_m(z, s) = Σ_{Γ∞\Γ} Im(γz)^s e(m Re(γz))` and a
//! finite-difference check of `(Δ - s(1-s)) V_m(z, s) = (2πm)² V_m(z, s+2)`.
//!
//! Cosets are summed in enumeration order with `|v| ≤ trunc`; the series is
//! absolutely convergent for `Re(s) > 1`, so the truncation order is
//! immaterial to the limit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::enumerate::{for_each_sample, EnumSpec};
use crate::equidist::character;
use crate::error::{Error, Result};
use crate::lattice::LatticeShape;
use crate::summation::{CompensatedComplex, CompensatedSum};

/// Margin above `Re(s) = 1` required for evaluation.
pub const CONVERGENCE_MARGIN: f64 = 1e-6;

/// Default relative tolerance for the Laplacian check.
pub const LAPLACIAN_TOLERANCE: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    pub m: i64,
    pub sigma: f64,
    pub t: f64,
    pub trunc: f64,
    pub value: Complex64,
    /// Upper bound on the omitted terms, see [`tail_bound`].
    pub tail_bound: f64,
    pub terms: usize,
}

impl SeriesPoint {
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

fn check_domain(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 1.0 + CONVERGENCE_MARGIN {
        Ok(())
    } else {
        Err(Error::ConvergenceDomain { sigma })
    }
}

/// Bound on `area^σ Σ_{|v| > T} |v|^{-2σ}`.
///
/// Translates of the cell (diameter `δ`) at lattice points of norm `≤ r` are
/// disjoint and lie in the disk of radius `r + δ`, so at most
/// `π (r + δ)² / area` points have norm `≤ r`. Partial summation then gives
/// `2σ π (1 + δ/T)² T^{2-2σ} / (area (2σ - 2))`. Every lattice point is
/// counted, which covers both members of each ±-class.
pub fn tail_bound(lattice: &LatticeShape, sigma: f64, trunc: f64) -> f64 {
    let area = lattice.area();
    let delta = lattice.cell_diameter();
    let widen = (1.0 + delta / trunc).powi(2);
    area.powf(sigma) * 2.0 * sigma * PI * widen * trunc.powf(2.0 - 2.0 * sigma) / (area * (2.0 * sigma - 2.0))
}

/// Partial sum of `V_m(z, s)` over cosets with `|v| ≤ trunc`.
pub fn eval_v(lattice: &LatticeShape, m: i64, s: Complex64, trunc: f64, workers: usize) -> Result<SeriesPoint> {
    check_domain(s.re)?;
    if !(trunc.is_finite() && trunc >= lattice.mu()) {
        return Err(Error::InvalidParameter(format!(
            "truncation {trunc} must be at least mu(L) = {}",
            lattice.mu()
        )));
    }
    let mut acc = CompensatedComplex::new();
    let terms = for_each_sample(&EnumSpec::by_norm(lattice.clone(), trunc), workers, |sample| {
        let height = (s * sample.im.ln()).exp();
        acc.add(height * character(m, sample.sk));
    })?;
    Ok(SeriesPoint {
        m,
        sigma: s.re,
        t: s.im,
        trunc,
        value: acc.value(),
        tail_bound: tail_bound(lattice, s.re, trunc),
        terms,
    })
}

const BERNOULLI_2J: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const DIRECT_TERMS: usize = 40;

/// Hurwitz zeta `Σ_{k≥0} (k + a)^{-s}` for real `s > 1`, `a > 0`: a direct
/// partial sum followed by the Euler–Maclaurin remainder. Returns the value
/// and the size of the first omitted correction.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<(f64, f64)> {
    check_domain(s)?;
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidParameter(format!("Hurwitz shift a = {a} must be positive")));
    }
    let mut sum = CompensatedSum::new();
    for k in (0..DIRECT_TERMS).rev() {
        sum.add((k as f64 + a).powf(-s));
    }
    let tail_at = DIRECT_TERMS as f64 + a;
    sum.add(tail_at.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * tail_at.powf(-s));

    // B_{2j}/(2j)! · s(s+1)…(s+2j-2) · tail_at^{-s-2j+1}
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = tail_at.powf(-s - 1.0);
    let mut last = 0.0;
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b / factorial * rising * power;
        sum.add(term);
        last = term.abs();
        let two_j = 2.0 * (j + 1) as f64;
        rising *= (s + two_j - 1.0) * (s + two_j);
        factorial *= (two_j + 1.0) * (two_j + 2.0);
        power /= tail_at * tail_at;
    }
    Ok((sum.value(), last))
}

pub fn riemann_zeta(s: f64) -> Result<f64> {
    Ok(hurwitz_zeta(s, 1.0)?.0)
}

/// `β(s) = Σ (-1)^k (2k+1)^{-s} = 4^{-s} (ζ(s, 1/4) - ζ(s, 3/4))`.
pub fn dirichlet_beta(s: f64) -> Result<f64> {
    let (quarter, _) = hurwitz_zeta(s, 0.25)?;
    let (three_quarters, _) = hurwitz_zeta(s, 0.75)?;
    Ok(4f64.powf(-s) * (quarter - three_quarters))
}

/// `E(i, s) = 2 ζ(s) β(s) / ζ(2s)`: the Epstein zeta function of `ℤ[i]`
/// factors as `4 ζ(s) β(s)`, and dividing by `ζ(2s)` keeps the coprime pairs,
/// halved for ±-classes.
pub fn eisenstein_reference(s: f64) -> Result<f64> {
    check_domain(s)?;
    Ok(2.0 * riemann_zeta(s)? * dirichlet_beta(s)? / riemann_zeta(2.0 * s)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplacianCheck {
    pub m: i64,
    pub s: f64,
    pub h: f64,
    pub trunc: f64,
    /// `(Δ - s(1-s)) V_m(z, s)` with the five-point Laplacian at step `h`.
    pub lhs: Complex64,
    /// `(2πm)² V_m(z, s+2)`.
    pub rhs: Complex64,
    pub rel_err: f64,
    /// Same residual with step `2h`.
    pub rel_err_double_step: f64,
    /// Richardson estimate `|Δ_h - Δ_{2h}| / 3`, relative to the normalizer.
    pub stencil_estimate: f64,
}

struct Stencil {
    centre: Complex64,
    laplacian: Complex64,
}

fn stencil(base: &LatticeShape, m: i64, s: Complex64, trunc: f64, h: f64, centre: Complex64, workers: usize) -> Result<Stencil> {
    let mut neighbours = CompensatedComplex::new();
    for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
        neighbours.add(eval_v(&base.shifted(dx, dy)?, m, s, trunc, workers)?.value);
    }
    let second = (neighbours.value() - 4.0 * centre) / (h * h);
    Ok(Stencil {
        centre,
        laplacian: -base.y() * base.y() * second,
    })
}

/// Checks the shifted-eigenfunction identity for `V_m` numerically. For
/// `m = 0` the right side vanishes and the residual is measured against
/// `|s(1-s) V_0|` instead.
pub fn laplacian_residual(lattice: &LatticeShape, m: i64, s: f64, trunc: f64, h: f64, workers: usize) -> Result<LaplacianCheck> {
    laplacian_residual_with(lattice, m, s, trunc, h, LAPLACIAN_TOLERANCE, workers)
}

pub fn laplacian_residual_with(
    lattice: &LatticeShape,
    m: i64,
    s: f64,
    trunc: f64,
    h: f64,
    tolerance: f64,
    workers: usize,
) -> Result<LaplacianCheck> {
    check_domain(s)?;
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::InvalidParameter(format!("step h = {h} must lie in (0, 0.1)")));
    }
    if lattice.y() - 2.0 * h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "step h = {h} leaves the upper half-plane at Im z = {}",
            lattice.y()
        )));
    }
    let base = lattice.to_float();
    let sc = Complex64::new(s, 0.0);
    let centre = eval_v(&base, m, sc, trunc, workers)?.value;
    let fine = stencil(&base, m, sc, trunc, h, centre, workers)?;
    let coarse = stencil(&base, m, sc, trunc, 2.0 * h, centre, workers)?;
    let shift = s * (1.0 - s);
    let rhs = (2.0 * PI * m as f64).powi(2) * eval_v(&base, m, Complex64::new(s + 2.0, 0.0), trunc, workers)?.value;
    let normalizer = if m == 0 { (shift * fine.centre).norm() } else { rhs.norm() }.max(1e-30);

    let lhs = fine.laplacian - shift * fine.centre;
    let lhs_coarse = coarse.laplacian - shift * coarse.centre;
    let stencil_estimate = (fine.laplacian - coarse.laplacian).norm() / 3.0 / normalizer;
    if stencil_estimate > tolerance {
        return Err(Error::StepTooLarge {
            estimate: stencil_estimate,
            tolerance,
        });
    }
    Ok(LaplacianCheck {
        m,
        s,
        h,
        trunc,
        lhs,
        rhs,
        rel_err: (lhs - rhs).norm() / normalizer,
        rel_err_double_step: (lhs_coarse - rhs).norm() / normalizer,
        stencil_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219;

    #[test]
    fn two_term_sums() {
        let l = LatticeShape::square();
        let v0 = eval_v(&l, 0, Complex64::new(2.0, 0.0), 1.0, 1).unwrap();
        assert_eq!(v0.terms, 2);
        assert!((v0.value - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let v1 = eval_v(&l, 1, Complex64::new(2.0, 0.0), 1.0, 1).unwrap();
        assert!((v1.value - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zeta_and_beta_closed_forms() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((dirichlet_beta(2.0).unwrap() - CATALAN).abs() < 1e-14);
        assert!((dirichlet_beta(3.0).unwrap() - PI.powi(3) / 32.0).abs() < 1e-14);
        let (_, remainder) = hurwitz_zeta(1.5, 0.25).unwrap();
        assert!(remainder < 1e-10);
    }

    #[test]
    fn eisenstein_reference_values() {
        let closed = 2.0 * (PI * PI / 6.0) * CATALAN / (PI.powi(4) / 90.0);
        let r2 = eisenstein_reference(2.0).unwrap();
        assert!((r2 - closed).abs() < 1e-13);
        assert!((r2 - 2.784_201_545_330_791).abs() < 1e-12);
        let r3 = eisenstein_reference(3.0).unwrap();
        assert!(r3 > 2.0 && r3 < 2.3);
        assert!((r3 - 2.289_745_607_797_273).abs() < 1e-12);
        assert!((eisenstein_reference(60.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(eisenstein_reference(1.0), Err(Error::ConvergenceDomain { .. })));
    }

    #[test]
    fn domain_errors() {
        let l = LatticeShape::square();
        assert!(matches!(
            eval_v(&l, 0, Complex64::new(0.5, 0.0), 10.0, 1),
            Err(Error::ConvergenceDomain { .. })
        ));
        assert!(eval_v(&l, 0, Complex64::new(2.0, 0.0), 0.5, 1).is_err());
        assert!(laplacian_residual(&l, 1, 3.0, 20.0, 0.2, 1).is_err());
        assert!(laplacian_residual(&l, 1, 1.0, 20.0, 1e-3, 1).is_err());
    }

    #[test]
    fn step_too_large_is_detected() {
        let l = LatticeShape::square();
        let r = laplacian_residual_with(&l, 3, 3.0, 40.0, 0.09, 1e-9, 1);
        assert!(matches!(r, Err(Error::StepTooLarge { .. })), "{r:?}");
    }

    #[test]
    fn conjugation_symmetry() {
        let l = LatticeShape::from_rationals(crate::Rational::new(1, 2), crate::Rational::new(5, 4)).unwrap();
        let s = Complex64::new(1.7, 2.3);
        let a = eval_v(&l, 2, s, 60.0, 1).unwrap().value;
        let b = eval_v(&l, -2, s.conj(), 60.0, 1).unwrap().value;
        assert!((a - b.conj()).norm() <= 1e-12);
    }

    #[test]
    fn truncation_is_monotone_and_bounded() {
        let l = LatticeShape::square();
        let s = 1.5;
        let reference = eisenstein_reference(s).unwrap();
        let mut previous = 0.0;
        for t in [5.0, 10.0, 20.0, 40.0, 80.0] {
            let p = eval_v(&l, 0, Complex64::new(s, 0.0), t, 1).unwrap();
            assert!(p.value.re > previous);
            assert!(p.value.re <= reference);
            assert!(reference - p.value.re <= p.tail_bound, "T = {t}");
            previous = p.value.re;
        }
    }

    #[test]
    fn tail_bound_covers_doubling() {
        for l in [LatticeShape::square(), LatticeShape::new(0.3, 0.7).unwrap()] {
            for (m, sigma) in [(0, 1.5), (1, 2.0), (3, 3.0)] {
                let s = Complex64::new(sigma, 0.5);
                let a = eval_v(&l, m, s, 30.0, 2).unwrap();
                let b = eval_v(&l, m, s, 60.0, 2).unwrap();
                assert!((b.value - a.value).norm() <= a.tail_bound);
                assert!(b.tail_bound < a.tail_bound);
            }
        }
    }

    #[test]
    fn dominated_by_eisenstein() {
        let l = LatticeShape::new(0.2, 0.9).unwrap();
        for (m, s) in [(1, Complex64::new(2.0, 1.0)), (-4, Complex64::new(1.3, -3.0)), (7, Complex64::new(3.0, 0.0))] {
            let v = eval_v(&l, m, s, 40.0, 1).unwrap().value.norm();
            let e = eval_v(&l, 0, Complex64::new(s.re, 0.0), 40.0, 1).unwrap().value.re;
            assert!(v <= e);
        }
    }

    #[test]
    fn laplacian_for_eisenstein() {
        // s = 3 keeps the cosets crossing |v| = trunc between stencil points negligible
        let l = LatticeShape::new(0.1, 1.1).unwrap();
        let r = laplacian_residual(&l, 0, 3.0, 200.0, 1e-3, 2).unwrap();
        assert_eq!(r.rhs, Complex64::new(0.0, 0.0));
        assert!(r.rel_err < 1e-3, "{r:?}");
    }
}
