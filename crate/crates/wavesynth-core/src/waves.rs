//! Propagative and evanescent plane waves.
//!
//! An evanescent plane wave with parameter `y = (φ, ζ)` is
//! `φ_y(x) = exp(iκ d(φ+iζ)·x)` with the complex unit direction
//! `d(φ+iζ) = (cos(φ+iζ), sin(φ+iζ))`. It is always evaluated through the
//! split form
//! `exp(iκ cosh ζ · x·d(φ)) · exp(-κ sinh ζ · x·d⊥(φ))`,
//! `d⊥(φ) = (-sin φ, cos φ)`, never through complex trigonometry of the
//! complex angle.

use num_complex::Complex64;
use num_traits::Float;

use crate::error::Result;
use crate::modal::{i_pow, CylinderPoint, DiskContext, ModalVector};

/// Plane wave `exp(iκ d(φ)·x)` with real direction `d(φ) = (cos φ, sin φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagativeWave {
    pub phi: f64,
}

/// Plane wave with complexified angle `φ + iζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanescentWave {
    pub y: CylinderPoint,
}

impl EvanescentWave {
    pub fn new(phi: f64, zeta: f64) -> Self {
        EvanescentWave {
            y: CylinderPoint::new(phi, zeta),
        }
    }

    /// `(ln |φ_y(x)|, arg φ_y(x))`: the trace in log-polar form, which never
    /// overflows and is what the collocation assembly combines with the
    /// log-weights.
    pub fn ln_eval(&self, kappa: f64, x: [f64; 2]) -> (f64, f64) {
        let (sin_phi, cos_phi) = self.y.phi.sin_cos();
        let along = x[0] * cos_phi + x[1] * sin_phi;
        let across = -x[0] * sin_phi + x[1] * cos_phi;
        let ln_mag = -kappa * self.y.zeta.sinh() * across;
        let phase = kappa * self.y.zeta.cosh() * along;
        (ln_mag, phase)
    }
}

/// Evanescent plane wave value `φ_y(x)`.
///
/// The modulus is `exp(κ sinh ζ ·(…))` and may overflow for large `ζ·‖x‖`;
/// callers that combine the trace with normalization weights use
/// [`EvanescentWave::ln_eval`].
pub fn epw_eval(ctx: &DiskContext, wave: &EvanescentWave, x: [f64; 2]) -> Complex64 {
    let (ln_mag, phase) = wave.ln_eval(ctx.kappa(), x);
    ln_mag.exp() * Complex64::from_polar(1.0, phase)
}

/// Propagative plane wave value `exp(iκ d(φ)·x)`; unit modulus everywhere.
pub fn ppw_eval(ctx: &DiskContext, wave: &PropagativeWave, x: [f64; 2]) -> Complex64 {
    let (sin_phi, cos_phi) = wave.phi.sin_cos();
    let along = x[0] * cos_phi + x[1] * sin_phi;
    Complex64::from_polar(1.0, ctx.kappa() * along)
}

/// Modal coefficients of an evanescent plane wave in the `b_p` basis:
/// `φ_y = Σ_p τ_p conj(a_p(y)) b_p`, truncated at `|p| ≤ trunc`.
///
/// Each coefficient is computed as `i^p e^{-ipφ} exp(pζ - ln β_p)`; the
/// α-factor cancels between `τ_p` and `a_p`, so only the β table enters.
pub fn epw_modal_coefficients(
    ctx: &DiskContext,
    wave: &EvanescentWave,
    trunc: usize,
) -> Result<ModalVector> {
    let cap = trunc as i32;
    let mut values = alloc::vec::Vec::with_capacity(2 * trunc + 1);
    for p in -cap..=cap {
        let growth = p as f64 * wave.y.zeta;
        if growth > 700.0 {
            return Err(crate::error::Error::Overflow {
                what: "epw_modal_coefficients",
                message: alloc::format!("p·ζ = {growth} exceeds 700; restrict the ζ range"),
            });
        }
        let magnitude = (growth - ctx.ln_beta(p)?).exp();
        let phase = Complex64::from_polar(1.0, -(p as f64) * wave.y.phi);
        values.push(i_pow(p) * phase * magnitude);
    }
    Ok(ModalVector {
        p_min: -cap,
        p_max: cap,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_modulus_and_origin_values() {
        let ctx = DiskContext::new(16.0, 16).unwrap();
        let w = EvanescentWave::new(0.7, 0.0);
        assert_eq!(epw_eval(&ctx, &w, [0.0, 0.0]), Complex64::new(1.0, 0.0));
        for &x in &[[0.3, -0.2], [0.9, 0.1], [-0.5, -0.5]] {
            let v = epw_eval(&ctx, &w, x);
            assert!((v.norm() - 1.0).abs() < 1e-14);
            let p = ppw_eval(&ctx, &PropagativeWave { phi: 0.7 }, x);
            assert!((v - p).norm() < 1e-14);
        }
    }

    #[test]
    fn direction_is_complex_unit() {
        // d·d = cos²(φ+iζ) + sin²(φ+iζ) = 1 identically; check through the
        // split form: (cosh² - sinh²) = 1.
        for &zeta in &[0.0, 0.3, 1.5, -2.0] {
            let (c, s) = (zeta.cosh(), zeta.sinh());
            assert!((c * c - s * s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn conjugation_symmetry_under_reflection() {
        // φ_{(φ,-ζ)}(x) equals φ_{(φ,ζ)}(x') with x' the reflection of x
        // across the line spanned by d(φ).
        let ctx = DiskContext::new(16.0, 16).unwrap();
        let phi = 0.9f64;
        let (sin_phi, cos_phi) = phi.sin_cos();
        let x = [0.4, -0.3];
        let along = x[0] * cos_phi + x[1] * sin_phi;
        let across = -x[0] * sin_phi + x[1] * cos_phi;
        let reflected = [
            along * cos_phi + across * sin_phi,
            along * sin_phi - across * cos_phi,
        ];
        let a = epw_eval(&ctx, &EvanescentWave::new(phi, -0.6), x);
        let b = epw_eval(&ctx, &EvanescentWave::new(phi, 0.6), reflected);
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn modal_peak_shifts_with_zeta() {
        let ctx = DiskContext::new(16.0, 200).unwrap();
        let mut prev_peak = i32::MIN;
        for &zeta in &[0.0, 0.2, 0.4, 0.6] {
            let w = EvanescentWave::new(core::f64::consts::PI / 8.0, zeta);
            let coeffs = epw_modal_coefficients(&ctx, &w, 180).unwrap();
            let peak = coeffs
                .modes()
                .max_by(|&a, &b| {
                    coeffs
                        .value(a)
                        .norm()
                        .partial_cmp(&coeffs.value(b).norm())
                        .unwrap()
                })
                .unwrap();
            assert!(peak >= prev_peak, "peak {peak} after {prev_peak}");
            prev_peak = peak;
        }
    }

    #[test]
    fn zeta_zero_coefficient_modulus_is_phi_independent() {
        let ctx = DiskContext::new(16.0, 40).unwrap();
        let w1 = EvanescentWave::new(0.3, 0.0);
        let w2 = EvanescentWave::new(2.1, 0.0);
        let c1 = epw_modal_coefficients(&ctx, &w1, 32).unwrap();
        let c2 = epw_modal_coefficients(&ctx, &w2, 32).unwrap();
        for p in c1.modes() {
            let (n1, n2) = (c1.value(p).norm(), c2.value(p).norm());
            assert!((n1 - n2).abs() <= 1e-15 * n1.max(n2));
            // |coeff_p| = |τ_p| α_p at ζ = 0
            let expect = ctx.tau_abs(p).unwrap() * ctx.alpha(p).unwrap();
            assert!((n1 - expect).abs() <= 1e-12 * expect.max(1e-300));
        }
    }
}
