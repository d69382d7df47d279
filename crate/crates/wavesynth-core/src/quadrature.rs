//! Numerical integration: fixed Gauss–Legendre rules and adaptive
//! Gauss–Kronrod 7/15 with a log-integrand entry point.
//!
//! The normalization integrals behind `α_p` span thousands of orders of
//! magnitude in the integrand, so [`adaptive_gk15_ln`] works on the
//! *logarithm* of the integrand: it locates the peak, integrates the shifted
//! exponential and returns the log of the integral.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::error::{Error, Result};

/// Kronrod-15 abscissae (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

/// Kronrod-15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss-7 weights for the odd-index abscissae of `XGK`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss–Kronrod 7/15 panel on `[a, b]`: returns `(k15, |k15 - g7|)`.
fn gk15_panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(mid - dx) + f(mid + dx);
        k += WGK[j] * fsum;
        if j % 2 == 1 {
            g += WG[j / 2] * fsum;
        }
    }
    (k * half, (k - g).abs() * half.abs())
}

/// Estimate of a definite integral with its absolute-error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub abs_error: f64,
}

/// Adaptive Gauss–Kronrod integration of `f` on `[a, b]` to relative
/// tolerance `rel_tol`, splitting the worst panel until the summed error
/// estimate is below tolerance.
pub fn adaptive_gk15(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadOutcome> {
    struct Seg {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
    }
    let initial = 8usize;
    let mut segs: Vec<Seg> = Vec::with_capacity(max_panels.max(initial));
    let h = (b - a) / initial as f64;
    for i in 0..initial {
        let (sa, sb) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (val, err) = gk15_panel(&mut f, sa, sb);
        segs.push(Seg {
            a: sa,
            b: sb,
            val,
            err,
        });
    }
    loop {
        let total: f64 = segs.iter().map(|s| s.val).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        let bound = rel_tol * total.abs().max(f64::MIN_POSITIVE);
        if err <= bound {
            return Ok(QuadOutcome {
                value: total,
                abs_error: err,
            });
        }
        if segs.len() >= max_panels {
            return Err(Error::QuadratureNonConvergence {
                achieved: err / total.abs().max(f64::MIN_POSITIVE),
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.err.partial_cmp(&y.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Seg { a: sa, b: sb, .. } = segs[worst];
        let mid = 0.5 * (sa + sb);
        let (v1, e1) = gk15_panel(&mut f, sa, mid);
        let (v2, e2) = gk15_panel(&mut f, mid, sb);
        segs[worst] = Seg {
            a: sa,
            b: mid,
            val: v1,
            err: e1,
        };
        segs.push(Seg {
            a: mid,
            b: sb,
            val: v2,
            err: e2,
        });
    }
}

/// Log of an integral of a positive integrand given through its logarithm.
#[derive(Debug, Clone, Copy)]
pub struct LogQuad {
    pub ln_value: f64,
    pub rel_error: f64,
}

/// Integrates `exp(ln_f)` on `[a, b]` where `ln_f` may reach magnitudes far
/// outside the representable exponent range. The integrand is shifted by its
/// sampled maximum (64 probe points plus an optional peak hint) before the
/// adaptive pass.
pub fn adaptive_gk15_ln(
    mut ln_f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    peak_hint: Option<f64>,
    rel_tol: f64,
) -> Result<LogQuad> {
    let mut shift = f64::NEG_INFINITY;
    let probes = 64;
    for i in 0..=probes {
        let x = a + (b - a) * i as f64 / probes as f64;
        shift = shift.max(ln_f(x));
    }
    if let Some(x) = peak_hint {
        if x >= a && x <= b {
            shift = shift.max(ln_f(x));
        }
    }
    if shift == f64::NEG_INFINITY {
        return Ok(LogQuad {
            ln_value: f64::NEG_INFINITY,
            rel_error: 0.0,
        });
    }
    let out = adaptive_gk15(|x| (ln_f(x) - shift).exp(), a, b, rel_tol, 1024)?;
    Ok(LogQuad {
        ln_value: shift + out.value.ln(),
        rel_error: out.abs_error / out.value.abs().max(f64::MIN_POSITIVE),
    })
}

/// Gauss–Legendre rule of order `n` on `[-1, 1]`; nodes ascending.
///
/// Computed by Newton iteration on the Legendre recurrence, good to a few
/// ulps for any practical order.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (core::f64::consts::PI * (4 * i + 3) as f64 / (4 * n + 2) as f64).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// `(P_n(x), P'_n(x))` via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
