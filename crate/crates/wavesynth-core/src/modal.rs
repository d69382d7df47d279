//! The two Hilbert bases: circular waves `b_p` on the unit disk and Herglotz
//! polynomials `a_p` on the cylinder, with their normalization constants.
//!
//! `b̃_p(r,θ) = J_p(κr) e^{ipθ}` is normalized by
//! `β_p = (2π [J_p²(κ) - J_{p-1}(κ)J_{p+1}(κ) + J'_p(κ)J_p(κ)/κ])^{-1/2}`
//! in the κ-weighted H¹ norm `(u,v) = (u,v)_{L²} + κ^{-2}(∇u,∇v)_{L²}`.
//! `ã_p(φ,ζ) = e^{pζ} e^{ipφ}` is normalized in the weighted L² norm with
//! weight `w(ζ) = exp(-κ sinh|ζ| + |ζ|/4)`, giving
//! `α_p = (2π [I(p) + I(-p)])^{-1/2}` with
//! `I(q) = ∫_0^∞ exp(2(q+1/4)ζ - 2κ sinh ζ) dζ`, evaluated after the
//! substitution `η = κ e^ζ` as an incomplete-gamma-like integral.
//!
//! Both constants scale like `(eκ/2|p|)^{∓|p|}` and leave the `f64` exponent
//! range around `|p| ≈ 4κ`–`6κ`, so the tables store natural logs; the
//! coupling constants `τ_p = i^p/(α_p β_p)` are uniformly bounded and are
//! reconstructed exactly from the log tables.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::bessel;
use crate::error::{Error, Result};
use crate::quadrature::adaptive_gk15_ln;
use crate::scaled::{log_add_exp, ScaledF64};

/// A point `y = (φ, ζ)` of the parameter cylinder `[0,2π) × ℝ`.
///
/// `φ` is the propagation angle, `ζ` the evanescence parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    pub phi: f64,
    pub zeta: f64,
}

impl CylinderPoint {
    /// Builds a point with `φ` reduced into `[0, 2π)`.
    pub fn new(phi: f64, zeta: f64) -> Self {
        let tau = 2.0 * core::f64::consts::PI;
        let mut phi = phi % tau;
        if phi < 0.0 {
            phi += tau;
        }
        CylinderPoint { phi, zeta }
    }
}

/// A contiguous block of modal coefficients indexed by mode number.
#[derive(Debug, Clone)]
pub struct ModalVector {
    pub p_min: i32,
    pub p_max: i32,
    pub values: Vec<Complex64>,
}

impl ModalVector {
    pub fn value(&self, p: i32) -> Complex64 {
        debug_assert!(p >= self.p_min && p <= self.p_max);
        self.values[(p - self.p_min) as usize]
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> + '_ {
        self.p_min..=self.p_max
    }
}

/// `i^p` computed exactly from `p mod 4`.
pub fn i_pow(p: i32) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `ln w²(ζ)` for the cylinder weight `w(ζ) = exp(-κ sinh|ζ| + |ζ|/4)`.
pub fn ln_cylinder_weight_sq(kappa: f64, zeta: f64) -> f64 {
    let az = zeta.abs();
    2.0 * (-kappa * az.sinh() + 0.25 * az)
}

/// Precomputed modal constants for one wavenumber.
///
/// Immutable after construction; all queries are table lookups plus cheap
/// arithmetic, safe for concurrent use.
#[derive(Debug, Clone)]
pub struct DiskContext {
    kappa: f64,
    p_max: usize,
    ln_beta: Vec<f64>,
    ln_alpha: Vec<f64>,
    /// Scaled `J_p(κ)` for `p = 0..=p_max+1`; kept for boundary traces.
    j_at_kappa: Vec<ScaledF64>,
}

impl DiskContext {
    /// Builds the constant tables for `|p| ≤ p_max`.
    ///
    /// Requires `κ > 0` and `⌈κ⌉ ≤ p_max ≤ 1024`.
    pub fn new(kappa: f64, p_max: usize) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::invalid(
                "kappa",
                alloc::format!("wavenumber must be positive and finite, got {kappa}"),
            ));
        }
        if (p_max as f64) < kappa.ceil() {
            return Err(Error::invalid(
                "p_max",
                alloc::format!("p_max must be at least ⌈κ⌉ = {}", kappa.ceil()),
            ));
        }
        if p_max > bessel::MAX_ORDER as usize {
            return Err(Error::invalid(
                "p_max",
                alloc::format!("p_max must be at most {}", bessel::MAX_ORDER),
            ));
        }
        let j_at_kappa = bessel::bessel_j_column_scaled(kappa, p_max + 1)?;
        let mut ln_beta = Vec::with_capacity(p_max + 1);
        for p in 0..=p_max {
            ln_beta.push(ln_beta_from_column(kappa, &j_at_kappa, p)?);
        }
        let mut ln_alpha = Vec::with_capacity(p_max + 1);
        for p in 0..=p_max {
            let pos = ln_alpha_half_integral(kappa, p as f64)?;
            let neg = ln_alpha_half_integral(kappa, -(p as f64))?;
            let ln_norm_sq = (2.0 * core::f64::consts::PI).ln() + log_add_exp(pos, neg);
            ln_alpha.push(-0.5 * ln_norm_sq);
        }
        Ok(DiskContext {
            kappa,
            p_max,
            ln_beta,
            ln_alpha,
            j_at_kappa,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    fn check_mode(&self, p: i32) -> Result<usize> {
        let a = p.unsigned_abs() as usize;
        if a > self.p_max {
            return Err(Error::invalid(
                "p",
                alloc::format!("|p| = {a} exceeds p_max = {}", self.p_max),
            ));
        }
        Ok(a)
    }

    /// `ln β_p` (symmetric in `p`).
    pub fn ln_beta(&self, p: i32) -> Result<f64> {
        Ok(self.ln_beta[self.check_mode(p)?])
    }

    /// `ln α_p` (symmetric in `p`).
    pub fn ln_alpha(&self, p: i32) -> Result<f64> {
        Ok(self.ln_alpha[self.check_mode(p)?])
    }

    /// Normalization `β_p` of the circular wave; may overflow to `+inf` for
    /// extreme `(p, κ)` — use [`DiskContext::ln_beta`] in that regime.
    pub fn beta(&self, p: i32) -> Result<f64> {
        Ok(self.ln_beta(p)?.exp())
    }

    /// Normalization `α_p` of the Herglotz polynomial; may underflow to zero
    /// for extreme `(p, κ)` — use [`DiskContext::ln_alpha`] in that regime.
    pub fn alpha(&self, p: i32) -> Result<f64> {
        Ok(self.ln_alpha(p)?.exp())
    }

    /// Coupling constant `τ_p = i^p / (α_p β_p)`; uniformly bounded in `p`.
    pub fn tau(&self, p: i32) -> Result<Complex64> {
        let a = self.check_mode(p)?;
        let magnitude = (-(self.ln_alpha[a] + self.ln_beta[a])).exp();
        Ok(i_pow(p) * magnitude)
    }

    /// `|τ_p|` straight from the log tables.
    pub fn tau_abs(&self, p: i32) -> Result<f64> {
        let a = self.check_mode(p)?;
        Ok((-(self.ln_alpha[a] + self.ln_beta[a])).exp())
    }

    /// `(τ_-, τ_+) = (min, max) |τ_p|` over `|p| ≤ p_max`.
    pub fn tau_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for a in 0..=self.p_max {
            let t = (-(self.ln_alpha[a] + self.ln_beta[a])).exp();
            lo = lo.min(t);
            hi = hi.max(t);
        }
        (lo, hi)
    }

    /// Circular wave `b_p(r,θ) = β_p J_p(κr) e^{ipθ}`, `0 ≤ r ≤ 1`.
    pub fn circular_wave(&self, p: i32, r: f64, theta: f64) -> Result<Complex64> {
        let a = self.check_mode(p)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(
                "r",
                alloc::format!("radius must lie in [0,1], got {r}"),
            ));
        }
        if r == 0.0 {
            if a == 0 {
                return Ok(Complex64::new(self.ln_beta[0].exp(), 0.0));
            }
            return Ok(Complex64::new(0.0, 0.0));
        }
        let col = bessel::bessel_j_column_scaled(self.kappa * r, a)?;
        let radial = self.radial_factor_from(&col, p);
        Ok(radial * Complex64::from_polar(1.0, p as f64 * theta))
    }

    /// `β_|p| J_p(κr)` for all `p = 0..=cap` at once (one Bessel column).
    ///
    /// Negative modes follow from `J_{-p} = (-1)^p J_p`; callers apply the
    /// sign together with the conjugated angular phase.
    pub fn radial_factors(&self, r: f64, cap: usize) -> Result<Vec<f64>> {
        debug_assert!(cap <= self.p_max);
        if r == 0.0 {
            let mut out = alloc::vec![0.0; cap + 1];
            out[0] = self.ln_beta[0].exp();
            return Ok(out);
        }
        let col = bessel::bessel_j_column_scaled(self.kappa * r, cap)?;
        Ok((0..=cap)
            .map(|p| {
                let v = &col[p];
                v.signum() * (self.ln_beta[p] + v.ln_abs()).exp()
            })
            .collect())
    }

    /// Same as [`DiskContext::radial_factors`] at the boundary `r = 1`,
    /// served from the cached column at κ.
    pub fn boundary_radial_factors(&self, cap: usize) -> Vec<f64> {
        debug_assert!(cap <= self.p_max);
        (0..=cap)
            .map(|p| {
                let v = &self.j_at_kappa[p];
                v.signum() * (self.ln_beta[p] + v.ln_abs()).exp()
            })
            .collect()
    }

    fn radial_factor_from(&self, col: &[ScaledF64], p: i32) -> f64 {
        let a = p.unsigned_abs() as usize;
        let sym = if p < 0 && p % 2 != 0 { -1.0 } else { 1.0 };
        let v = &col[a];
        sym * v.signum() * (self.ln_beta[a] + v.ln_abs()).exp()
    }

    /// Herglotz polynomial `a_p(y) = α_p e^{pζ} e^{ipφ}`.
    ///
    /// Errors with an overflow report when `p·ζ > 700`, where the raw factor
    /// `e^{pζ}` leaves the representable range; log-space callers use
    /// [`DiskContext::ln_herglotz_abs`] instead.
    pub fn herglotz_poly(&self, p: i32, y: CylinderPoint) -> Result<Complex64> {
        let a = self.check_mode(p)?;
        let growth = p as f64 * y.zeta;
        if growth > 700.0 {
            return Err(Error::Overflow {
                what: "herglotz_poly",
                message: alloc::format!("p·ζ = {growth} exceeds 700; restrict the ζ range"),
            });
        }
        let magnitude = (self.ln_alpha[a] + growth).exp();
        Ok(magnitude * Complex64::from_polar(1.0, p as f64 * y.phi))
    }

    /// `ln |a_p(y)| = ln α_p + pζ`.
    pub fn ln_herglotz_abs(&self, p: i32, zeta: f64) -> Result<f64> {
        let a = self.check_mode(p)?;
        Ok(self.ln_alpha[a] + p as f64 * zeta)
    }

    /// Truncated kernel diagonal `Σ_{|p| ≤ P} |a_p(y)|² = 1/μ_N(y)`.
    pub fn kernel_diag_truncated(&self, trunc: usize, y: CylinderPoint) -> Result<f64> {
        Ok(self.ln_kernel_diag(trunc, y.zeta)?.exp())
    }

    /// `ln Σ_{|p| ≤ P} |a_p|²(ζ)`, stable for any `(P, ζ)` in range.
    pub fn ln_kernel_diag(&self, trunc: usize, zeta: f64) -> Result<f64> {
        if trunc > self.p_max {
            return Err(Error::invalid(
                "P",
                alloc::format!("truncation {trunc} exceeds p_max = {}", self.p_max),
            ));
        }
        let term = |p: i32| 2.0 * (self.ln_alpha[p.unsigned_abs() as usize] + p as f64 * zeta);
        let mut hi = f64::NEG_INFINITY;
        for p in -(trunc as i32)..=trunc as i32 {
            hi = hi.max(term(p));
        }
        let mut acc = 0.0;
        for p in -(trunc as i32)..=trunc as i32 {
            acc += (term(p) - hi).exp();
        }
        Ok(hi + acc.ln())
    }
}

/// `ln β_p` from the scaled Bessel column at κ.
///
/// In the oscillatory range the bracket is evaluated directly; deep in the
/// monotone tail (where `J_p²` underflows) it switches to the ratio form
/// `J_p² (1 - r₋ r₊ + (r₋ - r₊)/(2κ))` with `r_∓ = J_{p∓1}/J_p`.
fn ln_beta_from_column(kappa: f64, col: &[ScaledF64], p: usize) -> Result<f64> {
    let ln_2pi = (2.0 * core::f64::consts::PI).ln();
    let jp = col[p];
    let ln_bracket = if jp.ln_abs() > -170.0 {
        let j = jp.to_f64();
        let jm = if p == 0 {
            -col[1].to_f64()
        } else {
            col[p - 1].to_f64()
        };
        let jpp = col[p + 1].to_f64();
        let bracket = j * j - jm * jpp + j * (jm - jpp) / (2.0 * kappa);
        if !(bracket > 0.0) {
            return Err(Error::NormalizationBreakdown { order: p as i64 });
        }
        bracket.ln()
    } else {
        // p is far beyond the turning point here, all three J's share a sign
        let rm = col[p - 1].ratio(jp);
        let rp = col[p + 1].ratio(jp);
        let corr = 1.0 - rm * rp + (rm - rp) / (2.0 * kappa);
        if !(corr > 0.0) {
            return Err(Error::NormalizationBreakdown { order: p as i64 });
        }
        2.0 * jp.ln_abs() + corr.ln()
    };
    Ok(-0.5 * (ln_2pi + ln_bracket))
}

/// `ln I(q)` with `I(q) = ∫_0^∞ exp(2(q+1/4)ζ - 2κ sinh ζ) dζ`, through the
/// substitution `η = κ e^ζ`:
/// `I(q) = κ^{-m} ∫_κ^∞ η^{m-1} e^{-η + κ²/η} dη`, `m = 2(q + 1/4)`.
fn ln_alpha_half_integral(kappa: f64, q: f64) -> Result<f64> {
    let m = 2.0 * (q + 0.25);
    let eta_max = (4.0 * kappa).max(2.0 * (q + 0.25)) + 50.0 * kappa.max(2.0 * q).sqrt();
    let ln_kappa = kappa.ln();
    let ksq = kappa * kappa;
    let ln_f = |eta: f64| (m - 1.0) * eta.ln() - eta + ksq / eta - m * ln_kappa;
    // interior stationary point of the exponent, when it exists
    let disc = (m - 1.0) * (m - 1.0) - 4.0 * ksq;
    let hint = if disc > 0.0 {
        let eta_star = 0.5 * ((m - 1.0) + disc.sqrt());
        (eta_star > kappa).then_some(eta_star)
    } else {
        None
    };
    let out = adaptive_gk15_ln(ln_f, kappa, eta_max, hint, 1e-12)?;
    Ok(out.ln_value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_point_normalizes_phi() {
        let tau = 2.0 * core::f64::consts::PI;
        let y = CylinderPoint::new(-0.5, 0.1);
        assert!((0.0..tau).contains(&y.phi));
        assert!((y.phi - (tau - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn context_rejects_bad_parameters() {
        assert!(DiskContext::new(-1.0, 16).is_err());
        assert!(DiskContext::new(16.0, 8).is_err());
        assert!(DiskContext::new(16.0, 2000).is_err());
    }

    #[test]
    fn beta_symmetry_and_positivity() {
        let ctx = DiskContext::new(16.0, 96).unwrap();
        for p in 0..=96 {
            assert!(ctx.ln_beta(p).unwrap().is_finite());
            assert_eq!(ctx.ln_beta(p).unwrap(), ctx.ln_beta(-p).unwrap());
            assert_eq!(ctx.ln_alpha(p).unwrap(), ctx.ln_alpha(-p).unwrap());
        }
    }

    #[test]
    fn tau_phase_is_fourth_root_of_unity() {
        let ctx = DiskContext::new(16.0, 40).unwrap();
        for p in -8..=8 {
            let t = ctx.tau(p).unwrap();
            let m = ctx.tau_abs(p).unwrap();
            // one component is exactly zero, the other exactly ±|τ|
            assert!(
                (t.re == 0.0 && t.im.abs() == m) || (t.im == 0.0 && t.re.abs() == m),
                "τ_{p} = {t:?}"
            );
        }
    }

    #[test]
    fn herglotz_guard_fires() {
        let ctx = DiskContext::new(16.0, 64).unwrap();
        let y = CylinderPoint::new(0.0, 20.0);
        assert!(matches!(
            ctx.herglotz_poly(64, y),
            Err(Error::Overflow { .. })
        ));
        // a_0 is a constant in y
        let a0 = ctx.herglotz_poly(0, y).unwrap();
        let a0b = ctx
            .herglotz_poly(0, CylinderPoint::new(1.0, -3.0))
            .unwrap();
        assert_eq!(a0, a0b);
    }

    #[test]
    fn kernel_diagonal_basics() {
        let ctx = DiskContext::new(16.0, 80).unwrap();
        let y = CylinderPoint::new(0.3, 0.4);
        let k1 = ctx.kernel_diag_truncated(16, y).unwrap();
        let k2 = ctx.kernel_diag_truncated(40, y).unwrap();
        let a0 = ctx.alpha(0).unwrap();
        assert!(k1 >= a0 * a0);
        assert!(k2 >= k1); // increasing in P
        // at ζ = 0 the sum is Σ α_p², independent of φ
        let y0 = CylinderPoint::new(1.2, 0.0);
        let direct: f64 = (-40i32..=40)
            .map(|p| {
                let a = ctx.alpha(p).unwrap();
                a * a
            })
            .sum();
        let viak = ctx.kernel_diag_truncated(40, y0).unwrap();
        assert!((viak - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn circular_wave_zero_radius_and_phase_relation() {
        let ctx = DiskContext::new(16.0, 32).unwrap();
        assert_eq!(
            ctx.circular_wave(3, 0.0, 1.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // b_p(r, θ+Δ) = b_p(r, θ) e^{ipΔ}
        let (r, th, dt, p) = (0.7, 0.9, 0.37, 5);
        let lhs = ctx.circular_wave(p, r, th + dt).unwrap();
        let rhs = ctx.circular_wave(p, r, th).unwrap()
            * Complex64::from_polar(1.0, p as f64 * dt);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }
}
