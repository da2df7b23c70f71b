//! Lattice vectors, minimal oriented completions, skewness and signed ratio.
//!
//! The lattice is `⟨1, z⟩` with `z = x + iy`, `y > 0`. A vector `cz + d` is
//! handled through the binary quadratic form
//!
//! ```text
//! Q(c, d) = N c² + 2 X c d + D d²        with |cz + d|² = Q(c, d) / D
//! ```
//!
//! where `N = D |z|²` and `X = D x`. In float mode `D = 1`; in exact mode `D`
//! is the common denominator of `x` and `|z|²`, so every coefficient is an
//! integer and the skewness `B(v', v) / Q(v)` is an exact rational.

use std::fmt;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Rational = Ratio<i128>;

/// Largest admissible magnitude of a primitive vector coordinate.
pub const COORD_LIMIT: i64 = 1 << 30;

/// Largest admissible magnitude of a completion coordinate.
pub const COMPLETION_LIMIT: i64 = 1 << 31;

/// Smallest `y² / |z|²` accepted in float mode.
const MIN_CONDITIONING: f64 = 1e-10;

/// Exact forms are only built when every coefficient stays below this, so
/// `Q` and `B` on guarded coordinates fit in an `i128`.
const FORM_LIMIT: i128 = 1 << 60;

/// The form `(N, X, D)` attached to a lattice shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramForm<S> {
    abs_sq: S,
    x: S,
    scale: S,
}

impl<S: Scalar> GramForm<S> {
    pub fn new(abs_sq: S, x: S, scale: S) -> Self {
        GramForm { abs_sq, x, scale }
    }

    pub fn abs_sq(&self) -> S {
        self.abs_sq
    }

    pub fn x(&self) -> S {
        self.x
    }

    pub fn scale(&self) -> S {
        self.scale
    }

    /// `Q(c, d) = D |cz + d|²`.
    #[inline]
    pub fn norm_sq(&self, c: i64, d: i64) -> S {
        let (c, d) = (S::from_i64(c), S::from_i64(d));
        self.abs_sq * c * c + (self.x + self.x) * c * d + self.scale * d * d
    }

    /// `B((a, b), (c, d)) = D ⟨az + b, cz + d⟩`.
    #[inline]
    pub fn bilinear(&self, a: i64, b: i64, c: i64, d: i64) -> S {
        let (a, b, c, d) = (S::from_i64(a), S::from_i64(b), S::from_i64(c), S::from_i64(d));
        self.abs_sq * a * c + self.x * (a * d + b * c) + self.scale * b * d
    }

    /// `N D - X² = D² y²`.
    pub fn discriminant(&self) -> S {
        self.abs_sq * self.scale - self.x * self.x
    }

    /// `|cz + d|²` as a float.
    #[inline]
    pub fn norm_sq_f64(&self, c: i64, d: i64) -> f64 {
        self.norm_sq(c, d).to_f64() / self.scale.to_f64()
    }
}

impl GramForm<f64> {
    pub fn from_point(x: f64, y: f64) -> Self {
        GramForm::new(x * x + y * y, x, 1.0)
    }
}

impl GramForm<f32> {
    pub fn from_point(x: f32, y: f32) -> Self {
        GramForm::new(x * x + y * y, x, 1.0)
    }
}

impl GramForm<Rational> {
    pub fn from_rationals(x: Rational, abs_sq: Rational) -> Self {
        GramForm::new(abs_sq, x, Rational::from_integer(1))
    }
}

/// Rational `x` and `|z|²` together with the integer form they induce.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLattice {
    pub x: Rational,
    pub abs_sq: Rational,
    pub form: GramForm<i128>,
    /// `D μ(L)²`.
    pub min_norm: i128,
}

/// The lattice `⟨1, z⟩`. Construction caches `μ(L)` and, when `x` and `|z|²`
/// are rational with small enough denominators, an exact form.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeShape {
    x: f64,
    y: f64,
    mu: f64,
    float_form: GramForm<f64>,
    float_min_norm: f64,
    exact: Option<ExactLattice>,
}

impl LatticeShape {
    /// Float-mode lattice. Rejects shapes with `y² / |z|² < 1e-10`, where the
    /// float Gram form cancels away more than ten digits.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let shape = LatticeShape::float_parts(x, y)?;
        shape.check_conditioning()?;
        Ok(shape)
    }

    fn check_conditioning(&self) -> Result<()> {
        let ratio = self.y * self.y / (self.x * self.x + self.y * self.y);
        if ratio < MIN_CONDITIONING || self.float_min_norm.is_nan() || self.float_min_norm <= 0.0 {
            return Err(Error::InvalidLattice(format!(
                "z = ({}, {}) is too thin for float arithmetic; give x and y as exact decimals",
                self.x, self.y
            )));
        }
        Ok(())
    }

    fn float_parts(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidLattice(format!("non-finite z = ({x}, {y})")));
        }
        if y <= 0.0 {
            return Err(Error::InvalidLattice(format!("Im z = {y} must be positive")));
        }
        let float_form = GramForm::<f64>::from_point(x, y);
        let float_min_norm = min_norm_sq(&float_form);
        Ok(LatticeShape {
            x,
            y,
            mu: float_min_norm.sqrt(),
            float_form,
            float_min_norm,
            exact: None,
        })
    }

    /// Lattice from rational `x` and `|z|²`. Falls back to float mode when the
    /// common denominator is too large for the `i128` path.
    pub fn from_rationals(x: Rational, abs_sq: Rational) -> Result<Self> {
        let y_sq = abs_sq
            .checked_sub(x.checked_mul(x).ok_or_else(overflowed)?)
            .ok_or_else(overflowed)?;
        if !y_sq.is_positive() {
            return Err(Error::InvalidLattice(format!(
                "|z|² = {abs_sq} must exceed x² = {}",
                x * x
            )));
        }
        let xf = Scalar::to_f64(x);
        let yf = Scalar::to_f64(y_sq).sqrt();
        let mut shape = LatticeShape::float_parts(xf, yf)?;
        let Some(form) = integer_form(&x, &abs_sq) else {
            shape.check_conditioning()?;
            return Ok(shape);
        };
        let min_norm = min_norm_sq(&form);
        shape.mu = (min_norm as f64 / form.scale() as f64).sqrt();
        shape.exact = Some(ExactLattice {
            x,
            abs_sq,
            form,
            min_norm,
        });
        Ok(shape)
    }

    /// Lattice from decimal or `p/q` strings for `x` and `y`. Exact mode is
    /// used whenever both parse as rationals and the form fits.
    pub fn parse(x: &str, y: &str) -> Result<Self> {
        let xr = parse_rational(x)?;
        let yr = parse_rational(y)?;
        if !yr.is_positive() {
            return Err(Error::InvalidLattice(format!("Im z = {y} must be positive")));
        }
        let abs_sq = xr
            .checked_mul(xr)
            .and_then(|xx| yr.checked_mul(yr).and_then(|yy| xx.checked_add(yy)));
        match abs_sq {
            Some(abs_sq) => LatticeShape::from_rationals(xr, abs_sq),
            None => LatticeShape::new(Scalar::to_f64(xr), Scalar::to_f64(yr)),
        }
    }

    /// The square lattice `z = i`, in exact mode.
    pub fn square() -> Self {
        LatticeShape::from_rationals(Rational::zero(), Rational::from_integer(1))
            .expect("z = i is a valid lattice")
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// `area(L) = Im z`.
    pub fn area(&self) -> f64 {
        self.y
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self) -> Option<&ExactLattice> {
        self.exact.as_ref()
    }

    pub fn float_form(&self) -> &GramForm<f64> {
        &self.float_form
    }

    /// Same `z` with the exact path dropped.
    pub fn to_float(&self) -> Self {
        LatticeShape {
            exact: None,
            mu: self.float_min_norm.sqrt(),
            ..self.clone()
        }
    }

    /// Float-mode lattice at `z + dx + i dy`.
    pub fn shifted(&self, dx: f64, dy: f64) -> Result<Self> {
        LatticeShape::new(self.x + dx, self.y + dy)
    }

    /// `|cz + d|²`, exact when possible.
    pub fn norm_sq(&self, c: i64, d: i64) -> f64 {
        match &self.exact {
            Some(e) => e.form.norm_sq_f64(c, d),
            None => self.float_form.norm_sq_f64(c, d),
        }
    }

    /// Diameter of the parallelogram spanned by `1` and `z`.
    pub fn cell_diameter(&self) -> f64 {
        let plus = ((1.0 + self.x).powi(2) + self.y * self.y).sqrt();
        let minus = ((1.0 - self.x).powi(2) + self.y * self.y).sqrt();
        plus.max(minus)
    }
}

impl fmt::Display for LatticeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(e) => {
                let y_sq = e.abs_sq - e.x * e.x;
                let (p, q) = (y_sq.numer().sqrt(), y_sq.denom().sqrt());
                if p * p == *y_sq.numer() && q * q == *y_sq.denom() {
                    write!(f, "{} + {}i", e.x, Rational::new(p, q))
                } else {
                    write!(f, "{} + i·sqrt({})", e.x, y_sq)
                }
            }
            None => write!(f, "{} + {}i", self.x, self.y),
        }
    }
}

fn overflowed() -> Error {
    Error::InvalidLattice("rational coefficients overflow".into())
}

fn integer_form(x: &Rational, abs_sq: &Rational) -> Option<GramForm<i128>> {
    let scale = x.denom().lcm(abs_sq.denom());
    let xs = x.numer().checked_mul(scale / x.denom())?;
    let ns = abs_sq.numer().checked_mul(scale / abs_sq.denom())?;
    let fits = |v: i128| v.checked_abs().is_some_and(|a| a <= FORM_LIMIT);
    (fits(xs) && fits(ns) && fits(scale)).then(|| GramForm::new(ns, xs, scale))
}

/// Minimum of `Q` over nonzero integer pairs, by Lagrange–Gauss reduction
/// of the basis `{1, z}`.
pub fn min_norm_sq<S: Scalar>(form: &GramForm<S>) -> S {
    let (mut u, mut w) = ((0i64, 1i64), (1i64, 0i64));
    let (mut qu, mut qw) = (form.norm_sq(u.0, u.1), form.norm_sq(w.0, w.1));
    if qw < qu {
        std::mem::swap(&mut u, &mut w);
        std::mem::swap(&mut qu, &mut qw);
    }
    // each pass shrinks w below u or stops; the step cap only guards rounding types
    for _ in 0..200 {
        let k = S::window_shift(form.bilinear(w.0, w.1, u.0, u.1), qu);
        w = (w.0 - k * u.0, w.1 - k * u.1);
        qw = form.norm_sq(w.0, w.1);
        if qw >= qu {
            break;
        }
        std::mem::swap(&mut u, &mut w);
        std::mem::swap(&mut qu, &mut qw);
    }
    qu
}

/// Parses `"-1.25"`, `"3e-4"`, `"7/3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("cannot parse `{text}` as a rational number"));
    let s = text.trim();
    if s.contains('/') {
        return Rational::from_str(s).map_err(|_| bad());
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: i128 = all_digits.parse().map_err(|_| bad())?;
    let exp = exponent - frac_part.len() as i32;
    let ten = |k: u32| 10i128.checked_pow(k).ok_or_else(bad);
    let value = if exp >= 0 {
        Rational::from_integer(numer.checked_mul(ten(exp as u32)?).ok_or_else(bad)?)
    } else {
        Rational::new(numer, ten(exp.unsigned_abs())?)
    };
    Ok(if negative { -value } else { value })
}

/// Coprime `(c, d)` standing for `v = cz + d`, in canonical sign: `c > 0`, or
/// `(c, d) = (0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveVector {
    pub c: i64,
    pub d: i64,
}

impl PrimitiveVector {
    pub fn new(c: i64, d: i64) -> Result<Self> {
        guard(c)?;
        guard(d)?;
        let g = c.gcd(&d);
        if g != 1 {
            return Err(Error::NotCoprime { c, d, gcd: g });
        }
        if !(c > 0 || (c == 0 && d == 1)) {
            return Err(Error::InvalidParameter(format!(
                "({c}, {d}) is not the canonical sign representative"
            )));
        }
        Ok(PrimitiveVector { c, d })
    }

    /// Representative of the ±-class of `(c, d)`.
    pub fn canonical(c: i64, d: i64) -> Result<Self> {
        if c < 0 || (c == 0 && d < 0) {
            PrimitiveVector::new(-c, -d)
        } else {
            PrimitiveVector::new(c, d)
        }
    }

    /// Trusted constructor for enumeration loops that already filtered.
    pub(crate) fn new_unchecked(c: i64, d: i64) -> Self {
        debug_assert!(c.gcd(&d) == 1);
        PrimitiveVector { c, d }
    }
}

fn guard(v: i64) -> Result<()> {
    if v.unsigned_abs() > COORD_LIMIT as u64 {
        return Err(Error::OverflowGuard {
            value: v as i128,
            limit: COORD_LIMIT,
        });
    }
    Ok(())
}

/// `(a, b)` standing for `v' = az + b`; with the owning `(c, d)` it forms the
/// matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Completion {
    pub a: i64,
    pub b: i64,
}

impl Completion {
    pub fn determinant(&self, v: PrimitiveVector) -> i128 {
        self.a as i128 * v.d as i128 - self.b as i128 * v.c as i128
    }
}

/// One completion of `(c, d)`: `ad - bc = 1` with `0 ≤ a < |c|`, or `b = 0`
/// when `c = 0`.
pub fn bezout(c: i64, d: i64) -> Result<Completion> {
    let egcd = d.extended_gcd(&c);
    let (mut a, mut b) = (egcd.x, -egcd.y);
    match egcd.gcd {
        1 => {}
        -1 => {
            a = -a;
            b = -b;
        }
        g => return Err(Error::NotCoprime { c, d, gcd: g.abs() }),
    }
    if c == 0 {
        return Ok(Completion { a: d, b: 0 });
    }
    let reduced = a.rem_euclid(c.abs());
    let steps = (reduced - a) / c;
    Ok(Completion {
        a: reduced,
        b: b + steps * d,
    })
}

/// Minimal completion together with the scaled pairing `B(v', v)` and norm
/// `Q(v)` in the form's ring; `sk = pairing / norm`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reduced<S> {
    pub completion: Completion,
    pub pairing: S,
    pub norm: S,
}

pub fn minimal_completion_in<S: Scalar>(form: &GramForm<S>, v: PrimitiveVector) -> Result<Reduced<S>> {
    let start = bezout(v.c, v.d)?;
    let norm = form.norm_sq(v.c, v.d);
    let mut pairing = form.bilinear(start.a, start.b, v.c, v.d);
    let (mut a, mut b) = (start.a as i128, start.b as i128);
    // one pass is exact; float pairings may need one more nudge
    for _ in 0..3 {
        let k = S::window_shift(pairing, norm);
        if k == 0 {
            break;
        }
        a -= k as i128 * v.c as i128;
        b -= k as i128 * v.d as i128;
        for value in [a, b] {
            if value.unsigned_abs() > COMPLETION_LIMIT as u128 {
                return Err(Error::OverflowGuard {
                    value,
                    limit: COMPLETION_LIMIT,
                });
            }
        }
        pairing = form.bilinear(a as i64, b as i64, v.c, v.d);
    }
    Ok(Reduced {
        completion: Completion {
            a: a as i64,
            b: b as i64,
        },
        pairing,
        norm,
    })
}

/// The completion minimizing `|v'|`, normalized so `sk ∈ (-1/2, 1/2]`.
pub fn minimal_completion(lattice: &LatticeShape, v: PrimitiveVector) -> Result<Completion> {
    Ok(match lattice.exact() {
        Some(e) => minimal_completion_in(&e.form, v)?.completion,
        None => minimal_completion_in(lattice.float_form(), v)?.completion,
    })
}

/// `sk(v, w) = ⟨w, v⟩ / |v|² = Re((az + b) / (cz + d))`.
pub fn skewness(lattice: &LatticeShape, v: PrimitiveVector, w: Completion) -> f64 {
    match skewness_exact(lattice, v, w) {
        Some(r) => Scalar::to_f64(r),
        None => {
            let form = lattice.float_form();
            form.bilinear(w.a, w.b, v.c, v.d) / form.norm_sq(v.c, v.d)
        }
    }
}

/// Exact skewness when the lattice has an exact form.
pub fn skewness_exact(lattice: &LatticeShape, v: PrimitiveVector, w: Completion) -> Option<Rational> {
    let e = lattice.exact()?;
    Some(Rational::new(
        e.form.bilinear(w.a, w.b, v.c, v.d),
        e.form.norm_sq(v.c, v.d),
    ))
}

/// Per-vector record: minimal completion, `|v|²`, `sk(v)`, `ρ(v)`, `Im(γz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitSample {
    pub vec: PrimitiveVector,
    pub comp: Completion,
    pub norm_sq: f64,
    pub sk: f64,
    pub rho: f64,
    pub im: f64,
}

/// Builds the sample for `v` using any scalar ring for the form.
pub fn orbit_sample_in<S: Scalar>(form: &GramForm<S>, area: f64, v: PrimitiveVector) -> Result<OrbitSample> {
    let reduced = minimal_completion_in(form, v)?;
    let Completion { a, b } = reduced.completion;
    let q = reduced.norm.to_f64();
    let norm_sq = q / form.scale().to_f64();
    let ratio = (form.norm_sq(a, b).to_f64() / q).sqrt();
    let rho = if reduced.pairing >= S::zero() { ratio } else { -ratio };
    Ok(OrbitSample {
        vec: v,
        comp: reduced.completion,
        norm_sq,
        sk: reduced.pairing.to_f64() / q,
        rho,
        im: area / norm_sq,
    })
}

pub fn orbit_sample(lattice: &LatticeShape, v: PrimitiveVector) -> Result<OrbitSample> {
    match lattice.exact() {
        Some(e) => orbit_sample_in(&e.form, lattice.area(), v),
        None => orbit_sample_in(lattice.float_form(), lattice.area(), v),
    }
}

/// `ρ(v) = ±|v'|/|v|` with `+` iff `sk(v) ≥ 0`.
pub fn signed_ratio(lattice: &LatticeShape, v: PrimitiveVector) -> Result<(f64, OrbitSample)> {
    let sample = orbit_sample(lattice, v)?;
    Ok((sample.rho, sample))
}

/// `μ(L)`, cached at construction.
pub fn minimal_vector_length(lattice: &LatticeShape) -> f64 {
    lattice.mu()
}

/// Outcome of a single inequality or identity, with both sides as floats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl CheckOutcome {
    /// `rhs - lhs` for inequalities `lhs ≤ rhs`.
    pub fn residual(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryReport {
    pub determinant: bool,
    pub in_window: bool,
    /// `|v'|² ≤ |v|²/4 + (area/|v|)²`
    pub completion_bound: CheckOutcome,
    /// `sin α ≤ area / (μ |v|)`
    pub angle_bound: CheckOutcome,
    /// `Im(γz) |v|² = area`
    pub height_identity: CheckOutcome,
}

impl GeometryReport {
    pub fn all_hold(&self) -> bool {
        self.determinant
            && self.in_window
            && self.completion_bound.holds
            && self.angle_bound.holds
            && self.height_identity.holds
    }
}

fn geometry_in<S: Scalar>(form: &GramForm<S>, min_norm: S, area: f64, mu: f64, s: &OrbitSample) -> GeometryReport {
    let PrimitiveVector { c, d } = s.vec;
    let Completion { a, b } = s.comp;
    let q = form.norm_sq(c, d);
    let q_comp = form.norm_sq(a, b);
    let pairing = form.bilinear(a, b, c, d);
    let two = S::from_i64(2);

    let scale = form.scale().to_f64();
    let v_sq = q.to_f64() / scale;
    let comp_sq = q_comp.to_f64() / scale;

    // 2B ∈ (-Q, Q]
    let in_window = if S::EXACT {
        -q < two * pairing && two * pairing <= q
    } else {
        s.sk > -0.5 && s.sk <= 0.5
    };

    // 4 Q Q' ≤ Q² + 4 (N D - X²), falling back to floats on overflow
    let four = S::from_i64(4);
    let exact_bound = four
        .checked_mul(q)
        .and_then(|t| t.checked_mul(q_comp))
        .zip(
            q.checked_mul(q)
                .and_then(|qq| four.checked_mul(form.discriminant()).and_then(|t| qq.checked_add(t))),
        )
        .map(|(lhs, rhs)| S::le_within_rounding(lhs, rhs));
    let bound_rhs = v_sq / 4.0 + (area * area) / v_sq;
    let completion_holds =
        exact_bound.unwrap_or(comp_sq <= bound_rhs * (1.0 + 1e-12));

    // sin α = area / (|v||v'|) ≤ area / (μ|v|)  ⟺  μ² ≤ |v'|²
    let norm = v_sq.sqrt();
    let angle = CheckOutcome {
        holds: S::le_within_rounding(min_norm, q_comp),
        lhs: area / (norm * comp_sq.sqrt()),
        rhs: area / (mu * norm),
    };

    let product = s.im * s.norm_sq;
    let height = CheckOutcome {
        holds: (product - area).abs() <= 1e-12 * area,
        lhs: product,
        rhs: area,
    };

    GeometryReport {
        determinant: s.comp.determinant(s.vec) == 1,
        in_window,
        completion_bound: CheckOutcome {
            holds: completion_holds,
            lhs: comp_sq,
            rhs: bound_rhs,
        },
        angle_bound: angle,
        height_identity: height,
    }
}

/// Evaluates every geometric bound for `sample` without failing.
pub fn geometry_report(sample: &OrbitSample, lattice: &LatticeShape) -> GeometryReport {
    match lattice.exact() {
        Some(e) => geometry_in(&e.form, e.min_norm, lattice.area(), lattice.mu(), sample),
        None => geometry_in(
            lattice.float_form(),
            lattice.float_min_norm,
            lattice.area(),
            lattice.mu(),
            sample,
        ),
    }
}

/// As [`geometry_report`], but any failed check is an error.
pub fn check_geometry(sample: &OrbitSample, lattice: &LatticeShape) -> Result<GeometryReport> {
    let report = geometry_report(sample, lattice);
    let violation = |check, lhs, rhs| Error::GeometryViolation {
        check,
        lhs,
        rhs,
        c: sample.vec.c,
        d: sample.vec.d,
    };
    if !report.determinant {
        let det = sample.comp.determinant(sample.vec) as f64;
        return Err(violation("ad - bc = 1", det, 1.0));
    }
    if !report.in_window {
        return Err(violation("sk <= 1/2", sample.sk, 0.5));
    }
    for (name, outcome) in [
        ("|v'|^2 <= |v|^2/4 + (area/|v|)^2", report.completion_bound),
        ("sin(alpha) <= area/(mu |v|)", report.angle_bound),
        ("Im(gz) |v|^2 = area", report.height_identity),
    ] {
        if !outcome.holds {
            return Err(violation(name, outcome.lhs, outcome.rhs));
        }
    }
    Ok(report)
}
