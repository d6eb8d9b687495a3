//! Radius of convergence and growth constant of `H(x)` and its
//! pattern-avoiding analogues.
//!
//! With `S(x) = sum_{k>=2} H(x^k)/k`, the functional equation reads
//! `F(x, y) = exp(y + S(x)) - 2y - 1 + x - x^m = 0`. At the dominant
//! singularity `F = F_y = 0`, which forces `exp(y + S) = 2` and
//! `y = b = (1 + x - x^m)/2`, so the radius solves
//!
//! ```text
//! G(x) = (1 + x - x^m)/2 + S(x) - ln 2 = 0.
//! ```
//!
//! `S` only sees `H` at `x^2 < rho`, where the truncated series converges
//! geometrically. The square-root singularity then gives
//! `H_n ~ C rho^-n n^-3/2` with `C = sqrt(rho F_x / (2 pi F_yy))`.
//!
//! Coefficients past the truncation order are majorized by `A r^-n`, with
//! `r` just below the radius suggested by the last coefficient ratio and `A`
//! twice the largest `H_n r^n` seen.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::enumeration::{count_avoiding, count_hierarchies, Avoid, CoeffTable, EnumerationError};
use crate::real::Real;

pub const DEFAULT_TRUNCATION: usize = 400;
pub const DEFAULT_PRECISION: usize = 256;

/// Terms below `2^-(precision + GUARD_BITS)` are dropped.
const GUARD_BITS: usize = 16;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("truncation order {truncation} is too small: {detail}")]
    InsufficientTruncation { truncation: usize, detail: String },
    #[error("series value {series} disagrees with {analytic}")]
    ConsistencyFailure { series: String, analytic: String },
    #[error("degenerate singularity: {0}")]
    DegenerateSingularity(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// A value with an upper bound on its truncation error; `None` when no
/// finite bound is available.
#[derive(Clone, Debug)]
pub struct Bounded<R> {
    pub value: R,
    pub bound: Option<R>,
}

/// The truncated functional equation for one coefficient table.
#[derive(Clone, Debug)]
pub struct ImplicitSystem<R> {
    avoid: Avoid,
    coeffs: Vec<R>,
    prec: usize,
    majorant_a: R,
    majorant_r: R,
}

impl<R: Real> ImplicitSystem<R> {
    pub fn new(table: &CoeffTable, prec: usize) -> Result<Self, AsymptoticsError> {
        let n = table.max_order();
        if n < 4 || table.get(n).is_zero() || table.get(n - 1).is_zero() {
            return Err(AsymptoticsError::InsufficientTruncation {
                truncation: n,
                detail: "need at least four coefficients with the last two nonzero".into(),
            });
        }
        let coeffs: Vec<R> = table.coeffs().iter().map(|c| R::from_biguint(c, prec)).collect();
        let ratio = coeffs[n - 2].clone() / coeffs[n - 1].clone();
        let r = ratio * (R::one(prec) - R::from_f64(2.0 / n as f64, prec));
        let mut a = R::zero(prec);
        let mut rn = R::one(prec);
        for c in &coeffs {
            rn = rn * r.clone();
            let t = c.clone() * rn.clone();
            if t > a {
                a = t;
            }
        }
        let majorant_a = a * R::from_f64(2.0, prec);
        Ok(ImplicitSystem { avoid: table.avoid(), coeffs, prec, majorant_a, majorant_r: r })
    }

    /// Builds the coefficient table too.
    pub fn for_avoid(avoid: Avoid, truncation: usize, prec: usize) -> Result<Self, AsymptoticsError> {
        let table = match avoid {
            Avoid::Unrestricted => count_hierarchies(truncation),
            Avoid::Size(m) => count_avoiding(truncation, m)?,
        };
        Self::new(&table, prec)
    }

    pub fn avoid(&self) -> Avoid {
        self.avoid
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    fn c(&self, x: f64) -> R {
        R::from_f64(x, self.prec)
    }

    /// `x^m`, or zero when unrestricted.
    fn pattern_term(&self, x: &R) -> R {
        match self.avoid {
            Avoid::Unrestricted => R::zero(self.prec),
            Avoid::Size(m) => x.powi(m),
        }
    }

    /// `m x^(m-1)`, or zero when unrestricted.
    fn pattern_term_deriv(&self, x: &R) -> R {
        match self.avoid {
            Avoid::Unrestricted => R::zero(self.prec),
            Avoid::Size(m) => self.c(m as f64) * x.powi(m - 1),
        }
    }

    fn negligible(&self) -> f64 {
        -((self.prec + GUARD_BITS) as f64) * std::f64::consts::LN_2
    }

    /// Degree past which the majorant at `y` drops below the working
    /// precision, capped at the truncation order. `None` when `y >= r`.
    fn useful_degree(&self, y: &R) -> Option<usize> {
        let q = (y.clone() / self.majorant_r.clone()).to_f64();
        if !(q < 1.0) {
            return None;
        }
        if q <= 0.0 {
            return Some(1);
        }
        let scale = self.majorant_a.to_f64().ln() - (1.0 - q).ln();
        let d = ((self.negligible() - scale) / q.ln()).ceil().max(1.0);
        Some((d as usize).min(self.coeffs.len()))
    }

    /// `sum_{n<=deg} h_n y^n` and its derivative in `y`.
    fn poly(&self, y: &R, deg: usize) -> (R, R) {
        let mut v = R::zero(self.prec);
        let mut dv = R::zero(self.prec);
        for (i, c) in self.coeffs[..deg].iter().enumerate().rev() {
            dv = dv * y.clone() + c.clone() * self.c((i + 1) as f64);
            v = (v + c.clone()) * y.clone();
        }
        (v, dv)
    }

    /// `H(y)` and `H'(y)` from the truncated series, with majorant bounds
    /// on the dropped terms.
    fn series_at(&self, y: &R) -> (Bounded<R>, Bounded<R>) {
        match self.useful_degree(y) {
            Some(d) => {
                let one = R::one(self.prec);
                let q = y.clone() / self.majorant_r.clone();
                let qd = q.powi(d + 1);
                let gap = one - q;
                let bound = self.majorant_a.clone() * qd.clone() / gap.clone();
                let dbound = self.majorant_a.clone() * qd * self.c((d + 1) as f64) / (gap.clone() * gap * y.clone());
                let (v, dv) = self.poly(y, d);
                (Bounded { value: v, bound: Some(bound) }, Bounded { value: dv, bound: Some(dbound) })
            }
            None => {
                let (v, dv) = self.poly(y, self.coeffs.len());
                (Bounded { value: v, bound: None }, Bounded { value: dv, bound: None })
            }
        }
    }

    /// `sum_{k>=first} H(x^k)/k` and its derivative, with error bounds.
    fn power_sums(&self, x: &R, first: usize) -> (Bounded<R>, Bounded<R>) {
        let prec = self.prec;
        let lnx = x.to_f64().ln();
        let mut value = R::zero(prec);
        let mut deriv = R::zero(prec);
        let mut bound = Some(R::zero(prec));
        let mut dbound = Some(R::zero(prec));
        let add = |acc: &mut Option<R>, b: Option<R>| {
            *acc = match (acc.take(), b) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        };
        let mut k = first;
        let mut xk = x.powi(first);
        loop {
            let kr = self.c(k as f64);
            let xk1 = xk.clone() / x.clone();
            let (h, dh) = self.series_at(&xk);
            value = value + h.value / kr.clone();
            deriv = deriv + xk1.clone() * dh.value;
            add(&mut bound, h.bound.map(|b| b / kr));
            add(&mut dbound, dh.bound.map(|b| b * xk1));
            if (k as f64) * lnx < self.negligible() {
                break;
            }
            k += 1;
            xk = xk * x.clone();
        }
        // remaining k > K: H(y) <= A (y/r) / (1 - y/r) and H'(y) <= A / (r (1 - y/r)^2)
        let one = R::one(prec);
        let r = self.majorant_r.clone();
        let a = self.majorant_a.clone();
        let next = xk * x.clone();
        let gap = one.clone() - next.clone() / r.clone();
        let tail =
            a.clone() * next.clone() / (r.clone() * gap.clone() * (one.clone() - x.clone()) * self.c((k + 1) as f64));
        let dtail = a * next / (x.clone() * r * gap.clone() * gap * (one - x.clone()));
        add(&mut bound, Some(tail));
        add(&mut dbound, Some(dtail));
        (Bounded { value, bound }, Bounded { value: deriv, bound: dbound })
    }

    fn check_domain(&self, x: &R) -> Result<(), AsymptoticsError> {
        if !(*x > R::zero(self.prec) && *x < R::one(self.prec)) {
            return Err(AsymptoticsError::DomainError(format!("need 0 < x < 1, got {}", x.to_sci_string())));
        }
        Ok(())
    }

    /// `sum_{k>=1} H(x^k)/k`, the logarithm of the right-hand side.
    pub fn eval_tail(&self, x: &R) -> Result<Bounded<R>, AsymptoticsError> {
        self.check_domain(x)?;
        Ok(self.power_sums(x, 1).0)
    }

    /// `S(x) = sum_{k>=2} H(x^k)/k`.
    pub fn shifted_sum(&self, x: &R) -> Result<Bounded<R>, AsymptoticsError> {
        self.check_domain(x)?;
        Ok(self.power_sums(x, 2).0)
    }

    /// `S'(x)`.
    pub fn shifted_sum_deriv(&self, x: &R) -> Result<Bounded<R>, AsymptoticsError> {
        self.check_domain(x)?;
        Ok(self.power_sums(x, 2).1)
    }

    /// `F(x, y)`, using the truncated `S`.
    pub fn residual(&self, x: &R, y: &R) -> Result<R, AsymptoticsError> {
        let s = self.shifted_sum(x)?.value;
        let one = R::one(self.prec);
        Ok((y.clone() + s).exp() - self.c(2.0) * y.clone() - one + x.clone() - self.pattern_term(x))
    }

    /// `(1 + x - x^m) / 2`: the value of the series at the singularity.
    pub fn singular_value(&self, x: &R) -> R {
        (R::one(self.prec) + x.clone() - self.pattern_term(x)) / self.c(2.0)
    }

    /// `G(x)` and `G'(x)`.
    fn reduced(&self, x: &R) -> (Bounded<R>, R) {
        let (s, ds) = self.power_sums(x, 2);
        let g = self.singular_value(x) + s.value - R::ln2(self.prec);
        let dg = (R::one(self.prec) - self.pattern_term_deriv(x)) / self.c(2.0) + ds.value;
        (Bounded { value: g, bound: s.bound }, dg)
    }

    fn insufficient(&self, detail: String) -> AsymptoticsError {
        AsymptoticsError::InsufficientTruncation { truncation: self.truncation(), detail }
    }

    pub fn radius(&self) -> Result<RadiusEstimate<R>, AsymptoticsError> {
        let zero = R::zero(self.prec);
        let (mut lo, mut hi) = (self.c(0.2), self.c(0.4));
        if !(self.reduced(&lo).0.value < zero && self.reduced(&hi).0.value > zero) {
            return Err(AsymptoticsError::DomainError("no sign change of G on [0.2, 0.4]".into()));
        }
        for _ in 0..40 {
            let mid = (lo.clone() + hi.clone()) / self.c(2.0);
            if self.reduced(&mid).0.value < zero {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = (lo + hi) / self.c(2.0);
        let tol = x.ulp_scale(self.prec.saturating_sub(8));
        for _ in 0..64 {
            let (g, dg) = self.reduced(&x);
            let step = g.value / dg;
            x = x - step.clone();
            if step.abs() < tol {
                break;
            }
        }
        let delta = x.clone() * x.ulp_scale(self.prec.saturating_sub(GUARD_BITS));
        let (below, _) = self.reduced(&(x.clone() - delta.clone()));
        let (above, _) = self.reduced(&(x.clone() + delta.clone()));
        let (Some(eb), Some(ea)) = (below.bound, above.bound) else {
            return Err(self.insufficient("no finite tail bound near the root".into()));
        };
        if !(below.value + eb < zero && above.value - ea > zero) {
            return Err(self.insufficient("tail bound hides the sign change of G".into()));
        }
        Ok(RadiusEstimate { rho: x, error: delta })
    }

    /// Checks the truncated series at `rho` against [`singular_value`]
    /// and returns the latter.
    ///
    /// The series converges like `N^-1/2` at the singularity, so the part
    /// past `N` is extrapolated: `H_n rho^n n^(3/2)` is fitted by a
    /// polynomial in `1/n` on the last coefficients and summed with Hurwitz
    /// zeta values.
    ///
    /// [`singular_value`]: Self::singular_value
    pub fn half_value(&self, rho: &R) -> Result<HalfValue<R>, AsymptoticsError> {
        self.check_domain(rho)?;
        let n_max = self.truncation();
        let jmax = (self.prec / 32).clamp(1, 8).min(n_max / 16);
        let stride = 8.min(n_max / (2 * jmax + 2)).max(1);
        let nodes: Vec<usize> = (0..=jmax).map(|j| n_max - stride * j).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &n in &nodes {
            let nr = self.c(n as f64);
            let inv = R::one(self.prec) / nr.clone();
            rows.push((0..=jmax).map(|j| inv.powi(j)).collect::<Vec<R>>());
            rhs.push(self.coeffs[n - 1].clone() * rho.powi(n) * nr.clone() * nr.sqrt());
        }
        let fit = solve_dense(rows, rhs).ok_or_else(|| AsymptoticsError::ConsistencyFailure {
            series: "singular fit".into(),
            analytic: "-".into(),
        })?;
        let partial = self.poly(rho, n_max).0;
        let a = self.c((n_max + 1) as f64);
        let mut tail = R::zero(self.prec);
        for (j, d) in fit.iter().enumerate() {
            tail = tail + d.clone() * hurwitz_zeta(&self.c(1.5 + j as f64), &a);
        }
        let series = partial + tail;
        let analytic = self.singular_value(rho);
        let discrepancy = (series.clone() - analytic.clone()).abs();
        let tol = R::from_f64(1e-10_f64.max(2f64.powf(-(self.prec as f64) / 3.0)), self.prec);
        if !(discrepancy < tol) {
            return Err(AsymptoticsError::ConsistencyFailure {
                series: series.to_sci_string(),
                analytic: analytic.to_sci_string(),
            });
        }
        Ok(HalfValue { analytic, series, discrepancy, fitted_constant: fit[0].clone() })
    }

    pub fn growth_constant(&self) -> Result<AsymptoticEstimate<R>, AsymptoticsError> {
        let rad = self.radius()?;
        let rho = rad.rho.clone();
        let half = self.half_value(&rho)?;
        let b = half.analytic.clone();
        let (s, ds) = self.power_sums(&rho, 2);
        let one = R::one(self.prec);
        let two = self.c(2.0);
        let f_yy = (b.clone() + s.value.clone()).exp();
        let f_x = f_yy.clone() * ds.value + one.clone() - self.pattern_term_deriv(&rho);
        let floor = one.ulp_scale(self.prec / 2);
        if !(f_yy > floor) {
            return Err(AsymptoticsError::DegenerateSingularity(format!("F_yy = {}", f_yy.to_sci_string())));
        }
        if !(f_x > floor) {
            return Err(AsymptoticsError::DegenerateSingularity(format!("F_x = {}", f_x.to_sci_string())));
        }
        let pi = R::pi(self.prec);
        let a1 = -(two.clone() * f_x.clone() / f_yy.clone()).sqrt();
        let c = (rho.clone() * f_x.clone() / (two.clone() * pi.clone() * f_yy.clone())).sqrt();
        let c_from_a1 = -a1.clone() * rho.sqrt() / (two.clone() * pi.sqrt());
        if !((c.clone() - c_from_a1.clone()).abs() < c.clone() * one.ulp_scale(self.prec.saturating_sub(GUARD_BITS))) {
            return Err(AsymptoticsError::ConsistencyFailure {
                series: c_from_a1.to_sci_string(),
                analytic: c.to_sci_string(),
            });
        }
        let implicit =
            (b.clone() + s.value).exp() - two.clone() * b.clone() - one + rho.clone() - self.pattern_term(&rho);
        let residuals = Residuals {
            implicit,
            f_yy_minus_two: f_yy.clone() - two,
            shifted_sum_bound: s.bound.unwrap_or_else(|| R::from_f64(f64::INFINITY, self.prec)),
            half_value_discrepancy: half.discrepancy,
            fitted_constant: half.fitted_constant,
        };
        Ok(AsymptoticEstimate {
            avoid: self.avoid,
            rho,
            rho_error: rad.error,
            b,
            c,
            a1,
            f_x,
            f_yy,
            truncation: self.truncation(),
            precision: self.prec,
            residuals,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RadiusEstimate<R> {
    pub rho: R,
    /// The root is certified to lie within `rho ± error`.
    pub error: R,
}

#[derive(Clone, Debug)]
pub struct HalfValue<R> {
    /// `(1 + rho - rho^m) / 2`.
    pub analytic: R,
    /// Truncated series plus extrapolated tail.
    pub series: R,
    pub discrepancy: R,
    /// Leading coefficient of the fit; estimates `C`.
    pub fitted_constant: R,
}

#[derive(Clone, Debug)]
pub struct Residuals<R> {
    /// `F(rho, b)`.
    pub implicit: R,
    pub f_yy_minus_two: R,
    /// Truncation bound on `S(rho)`.
    pub shifted_sum_bound: R,
    pub half_value_discrepancy: R,
    /// `C` as read off the last coefficients.
    pub fitted_constant: R,
}

/// `H_n ~ c * rho^-n * n^-3/2`, with `a1` the square-root coefficient of
/// the singular expansion.
#[derive(Clone, Debug)]
pub struct AsymptoticEstimate<R> {
    pub avoid: Avoid,
    pub rho: R,
    pub rho_error: R,
    pub b: R,
    pub c: R,
    pub a1: R,
    pub f_x: R,
    pub f_yy: R,
    pub truncation: usize,
    pub precision: usize,
    pub residuals: Residuals<R>,
}

impl<R: Real> AsymptoticEstimate<R> {
    /// `H_n rho^n n^(3/2) / C`, which tends to 1.
    pub fn fit_ratio(&self, h_n: &BigUint, n: usize) -> R {
        let nr = R::from_f64(n as f64, self.precision);
        R::from_biguint(h_n, self.precision) * self.rho.powi(n) * nr.clone() * nr.sqrt() / self.c.clone()
    }
}

pub fn estimate<R: Real>(
    avoid: Avoid,
    truncation: usize,
    prec: usize,
) -> Result<AsymptoticEstimate<R>, AsymptoticsError> {
    ImplicitSystem::<R>::for_avoid(avoid, truncation, prec)?.growth_constant()
}

pub fn radius<R: Real>(avoid: Avoid, truncation: usize, prec: usize) -> Result<R, AsymptoticsError> {
    Ok(ImplicitSystem::<R>::for_avoid(avoid, truncation, prec)?.radius()?.rho)
}

#[derive(Clone, Debug)]
pub struct MateFraction<R> {
    /// `rho_0 / rho_m`.
    pub ratio_base: R,
    /// `C_m / C_0`.
    pub coeff: R,
}

/// `H_n^(m) / H_n ~ coeff * ratio_base^n`.
pub fn mate_fraction_asymptote<R: Real>(
    restricted: &AsymptoticEstimate<R>,
    unrestricted: &AsymptoticEstimate<R>,
) -> MateFraction<R> {
    MateFraction {
        ratio_base: unrestricted.rho.clone() / restricted.rho.clone(),
        coeff: restricted.c.clone() / unrestricted.c.clone(),
    }
}

/// Smallest `n` with `base^n <= target`.
pub fn half_threshold<R: Real>(base: &R, target: &R) -> Result<u64, AsymptoticsError> {
    let prec = base.precision().max(target.precision());
    let zero = R::zero(prec);
    let one = R::one(prec);
    if !(*target > zero) {
        return Err(AsymptoticsError::DomainError("target must be positive".into()));
    }
    if *target >= one {
        return Ok(0);
    }
    if !(*base > zero && *base < one) {
        return Err(AsymptoticsError::DomainError("base must lie in (0, 1)".into()));
    }
    let ln_base = base.ln();
    let ln_target = target.ln();
    let reaches = |n: u64| R::from_f64(n as f64, prec) * ln_base.clone() <= ln_target.clone();
    let guess = (ln_target.clone() / ln_base.clone()).to_f64().ceil();
    if !guess.is_finite() || guess > 9.0e15 {
        return Err(AsymptoticsError::DomainError("threshold exceeds 2^53".into()));
    }
    let mut n = guess.max(0.0) as u64;
    while !reaches(n) {
        n += 1;
    }
    while n > 0 && reaches(n - 1) {
        n -= 1;
    }
    Ok(n)
}

/// Gaussian elimination with partial pivoting.
fn solve_dense<R: Real>(mut a: Vec<Vec<R>>, mut b: Vec<R>) -> Option<Vec<R>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        if !(p.abs() > R::zero(p.precision())) {
            return None;
        }
        for row in col + 1..n {
            let f = a[row][col].clone() / p.clone();
            let (upper, lower) = a.split_at_mut(row);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x = x.clone() - f.clone() * y.clone();
            }
            let v = b[row].clone() - f * b[col].clone();
            b[row] = v;
        }
    }
    let mut x = vec![R::zero(b[0].precision()); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s = s - a[row][k].clone() * x[k].clone();
        }
        x[row] = s / a[row][row].clone();
    }
    Some(x)
}

/// `B_0, B_1, ..., B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
    out.push(BigRational::one());
    for m in 1..=n {
        // sum_{k<m} C(m+1, k) B_k
        let mut binom = BigInt::one();
        let mut s = BigRational::zero();
        for (k, b) in out.iter().enumerate() {
            s += BigRational::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        out.push(-s / BigRational::from_integer((m + 1).into()));
    }
    out
}

/// `zeta(s, a) = sum_{n>=0} (n + a)^-s` by Euler-Maclaurin; accurate for
/// `a` well above `s`.
pub fn hurwitz_zeta<R: Real>(s: &R, a: &R) -> R {
    let prec = s.precision().max(a.precision());
    let terms = 32;
    let bern = bernoulli_numbers(2 * terms);
    let one = R::one(prec);
    let ln_a = a.ln();
    let a_pow = |e: R| (-(e * ln_a.clone())).exp();
    let mut total =
        a_pow(s.clone() - one.clone()) / (s.clone() - one.clone()) + a_pow(s.clone()) / R::from_f64(2.0, prec);
    // rising factorial s (s+1) ... (s+2k-2) / (2k)!
    let mut rising = s.clone();
    let mut fact = R::from_f64(2.0, prec);
    let a2 = a.clone() * a.clone();
    let mut apow = a_pow(s.clone() + one.clone());
    for k in 1..=terms {
        if k > 1 {
            let base = s.clone() + R::from_f64((2 * k - 3) as f64, prec);
            rising = rising * base.clone() * (base + one.clone());
            fact = fact * R::from_f64(((2 * k - 1) * (2 * k)) as f64, prec);
            apow = apow / a2.clone();
        }
        total = total + R::from_rational(&bern[2 * k], prec) * rising.clone() / fact.clone() * apow.clone();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DecimalMode;
    use crate::{BigEstimate, BigReal, FastEstimate};

    fn big(avoid: Avoid) -> BigEstimate {
        estimate(avoid, DEFAULT_TRUNCATION, DEFAULT_PRECISION).unwrap()
    }

    fn fixed(x: &BigReal, d: usize) -> String {
        x.to_fixed(d, DecimalMode::Round)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[3], r(0, 1));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[12], r(-691, 2730));
    }

    #[test]
    fn hurwitz_zeta_matches_direct_sums() {
        // zeta(2, 1) = pi^2 / 6 via zeta(2, 1) = sum_{n<50} n^-2 + zeta(2, 50)
        let p = 192;
        let s = BigReal::from_f64(2.0, p);
        let mut exact_head = BigReal::zero(p);
        for n in 1..50 {
            exact_head = exact_head + BigReal::one(p) / BigReal::from_f64((n * n) as f64, p);
        }
        let total = exact_head + hurwitz_zeta(&s, &BigReal::from_f64(50.0, p));
        let pi = BigReal::pi(p);
        let want = pi.clone() * pi / BigReal::from_f64(6.0, p);
        assert!((total - want).abs() < BigReal::from_f64(1e-50, p));
    }

    #[test]
    fn unrestricted_constants() {
        let e = big(Avoid::Unrestricted);
        assert_eq!(fixed(&e.rho, 16), "0.2808326669842004");
        assert_eq!(fixed(&e.c, 16), "0.2063814446007890");
        assert!(e.a1 < BigReal::zero(64));
        assert!(e.residuals.f_yy_minus_two.abs() < BigReal::from_f64(1e-60, 64));
        assert!(e.residuals.implicit.abs() < BigReal::from_f64(1e-60, 64));
        let fitted = e.residuals.fitted_constant.clone();
        assert!((fitted - e.c.clone()).abs() < BigReal::from_f64(1e-15, 64));
    }

    #[test]
    fn restricted_constants() {
        let e2 = big(Avoid::Size(2));
        assert_eq!(e2.rho.to_fixed(4, DecimalMode::Truncate), "0.3462");
        assert_eq!(e2.c.to_fixed(4, DecimalMode::Truncate), "0.1972");
        let e9 = big(Avoid::Size(9));
        assert_eq!(fixed(&e9.rho, 16), "0.2808383687063348");
        assert_eq!(fixed(&e9.c, 16), "0.2063663931885738");
        let e15 = big(Avoid::Size(15));
        assert_eq!(fixed(&e15.rho, 16), "0.2808326697806751");
    }

    #[test]
    fn thresholds_and_ratios() {
        let e0 = big(Avoid::Unrestricted);
        let e9 = big(Avoid::Size(9));
        let e15 = big(Avoid::Size(15));
        let half = BigReal::from_f64(0.5, DEFAULT_PRECISION);
        let f9 = mate_fraction_asymptote(&e9, &e0);
        assert_eq!(fixed(&f9.ratio_base, 15), "0.999979697495892");
        assert_eq!(half_threshold(&f9.ratio_base, &half).unwrap(), 34141);
        let f15 = mate_fraction_asymptote(&e15, &e0);
        assert_eq!(fixed(&f15.ratio_base, 15), "0.999999990042203");
        let n15 = half_threshold(&f15.ratio_base, &half).unwrap();
        assert_eq!(n15, 69_608_487);
        assert_eq!(half_threshold(&f9.ratio_base, &BigReal::one(64)).unwrap(), 0);
    }

    #[test]
    fn half_threshold_is_minimal() {
        assert_eq!(half_threshold(&0.5f64, &0.25).unwrap(), 2);
        assert_eq!(half_threshold(&0.5f64, &0.26).unwrap(), 2);
        assert_eq!(half_threshold(&0.5f64, &0.24).unwrap(), 3);
        assert!(half_threshold(&1.5f64, &0.5).is_err());
        assert!(half_threshold(&0.5f64, &0.0).is_err());
    }

    #[test]
    fn radii_are_ordered() {
        let r: Vec<BigReal> = [Avoid::Unrestricted, Avoid::Size(15), Avoid::Size(9), Avoid::Size(4), Avoid::Size(2)]
            .into_iter()
            .map(|a| {
                ImplicitSystem::<BigReal>::for_avoid(a, DEFAULT_TRUNCATION, DEFAULT_PRECISION)
                    .unwrap()
                    .radius()
                    .unwrap()
            })
            .map(|e| e.rho)
            .collect();
        for w in r.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn stable_under_doubling() {
        let a = big(Avoid::Size(9));
        let b: BigEstimate = estimate(Avoid::Size(9), 2 * DEFAULT_TRUNCATION, 2 * DEFAULT_PRECISION).unwrap();
        assert_eq!(fixed(&a.rho, 40), fixed(&b.rho, 40));
        assert_eq!(fixed(&a.c, 16), fixed(&b.c, 16));
    }

    #[test]
    fn fast_estimates_agree() {
        let f: FastEstimate = estimate(Avoid::Unrestricted, DEFAULT_TRUNCATION, 53).unwrap();
        assert!((f.rho - 0.280_832_666_984_200_4).abs() < 1e-14);
        assert!((f.c - 0.206_381_444_600_789).abs() < 1e-12);
    }

    #[test]
    fn eval_tail_behaviour() {
        let sys = ImplicitSystem::<BigReal>::for_avoid(Avoid::Unrestricted, 200, 128).unwrap();
        let long = ImplicitSystem::<BigReal>::for_avoid(Avoid::Unrestricted, 400, 128).unwrap();
        assert!(sys.eval_tail(&BigReal::from_f64(1.0, 64)).is_err());
        assert!(sys.eval_tail(&BigReal::from_f64(0.0, 64)).is_err());
        let tiny = sys.eval_tail(&BigReal::from_f64(1e-9, 128)).unwrap();
        assert!(tiny.value < BigReal::from_f64(2e-9, 64));
        let mut prev = BigReal::zero(128);
        for x in [0.1, 0.2, 0.25, 0.27] {
            let x = BigReal::from_f64(x, 128);
            let short = sys.eval_tail(&x).unwrap();
            let bound = short.bound.clone().expect("finite below the majorant radius");
            let reference = long.eval_tail(&x).unwrap().value;
            assert!((short.value.clone() - reference).abs() <= bound);
            assert!(short.value > prev);
            prev = short.value;
        }
        // at the radius the truncated series needs the extrapolated tail
        let rho = long.radius().unwrap().rho;
        assert!(long.eval_tail(&rho).unwrap().bound.is_none());
        let hv = long.half_value(&rho).unwrap();
        let full = hv.series.clone() + long.shifted_sum(&rho).unwrap().value;
        assert!((full.exp() - BigReal::from_f64(2.0, 128)).abs() < BigReal::from_f64(1e-12, 64));
    }

    #[test]
    fn short_tables_are_rejected() {
        let sys = ImplicitSystem::<BigReal>::for_avoid(Avoid::Unrestricted, 12, 256).unwrap();
        assert!(matches!(sys.radius(), Err(AsymptoticsError::InsufficientTruncation { .. })));
        assert!(matches!(
            ImplicitSystem::<f64>::for_avoid(Avoid::Size(1), 50, 53),
            Err(AsymptoticsError::Enumeration(EnumerationError::PatternTooSmall(1)))
        ));
    }

    #[test]
    fn coefficients_follow_the_estimate() {
        for avoid in [Avoid::Unrestricted, Avoid::Size(2), Avoid::Size(9)] {
            let e = big(avoid);
            let table = match avoid {
                Avoid::Unrestricted => count_hierarchies(400),
                Avoid::Size(m) => count_avoiding(400, m).unwrap(),
            };
            let err = |n: usize| (e.fit_ratio(&table.get(n), n) - BigReal::one(64)).abs();
            let mut prev = err(300);
            for n in (310..=400).step_by(10) {
                let cur = err(n);
                assert!(cur < prev, "{avoid:?} n={n}");
                prev = cur;
            }
            assert!(prev < BigReal::from_f64(1e-2, 64));
        }
    }
}
