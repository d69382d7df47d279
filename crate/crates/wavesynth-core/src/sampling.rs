//! Christoffel-function sampling on the parameter cylinder.
//!
//! The density is `ρ_N(y) = w²(ζ) / (N μ_N(y))` with
//! `μ_N(y) = (Σ_{|p|≤P} |a_p(y)|²)^{-1}` and `N = 2P+1`; it is independent
//! of the angle `φ` and integrates to one over the cylinder with the plain
//! measure `dφ dζ`. The ζ-marginal `2π ρ_N` is tabulated as a CDF `Υ_N` on a
//! uniform 4096-cell grid over the effective support `[-ζ_max, ζ_max]`
//! (composite 16-point Gauss–Legendre per cell) and inverted by bisection,
//! so all three node generators are plain inverse-transform sampling of the
//! unit square:
//!
//! - deterministic: the `k×k` midpoint grid with `k = ⌈√M⌉` (the emitted set
//!   has `k²` nodes, the smallest square at least `M` — endpoints would map
//!   to `ζ = ∓∞`);
//! - Sobol: the first `M` points of the standard 2D Sobol sequence, index 0
//!   skipped;
//! - random: `M` uniform pairs from a seeded SplitMix64 stream.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::modal::{ln_cylinder_weight_sq, CylinderPoint, DiskContext};
use crate::quadrature::GaussLegendre;

/// Node-generation strategy for the unit-square stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingStrategy {
    Deterministic,
    Sobol,
    Random,
}

impl SamplingStrategy {
    pub fn name(self) -> &'static str {
        match self {
            SamplingStrategy::Deterministic => "deterministic",
            SamplingStrategy::Sobol => "sobol",
            SamplingStrategy::Random => "random",
        }
    }
}

/// A finite set of cylinder nodes together with how it was generated.
#[derive(Debug, Clone)]
pub struct NodeSet {
    pub nodes: Vec<CylinderPoint>,
    pub strategy: SamplingStrategy,
    /// Seed of the random stream; zero for the seedless strategies.
    pub seed: u64,
    /// Truncation parameter the density was built for.
    pub trunc: usize,
    /// Emitted size; for the deterministic strategy this is the square `k²`.
    pub size: usize,
}

/// Number of CDF table cells.
const CDF_CELLS: usize = 4096;

/// Tabulated sampling density for one `(κ, P)` pair.
#[derive(Debug, Clone)]
pub struct DensityModel<'a> {
    ctx: &'a DiskContext,
    trunc: usize,
    n_dim: usize,
    zeta_max: f64,
    /// CDF of the ζ-marginal at the `CDF_CELLS + 1` uniform knots.
    cdf_knots: Vec<f64>,
    rule: GaussLegendre,
}

impl<'a> DensityModel<'a> {
    /// Builds the density/CDF tables for truncation `P = trunc`.
    pub fn new(ctx: &'a DiskContext, trunc: usize) -> Result<Self> {
        if trunc > ctx.p_max() {
            return Err(Error::invalid(
                "P",
                alloc::format!("truncation {trunc} exceeds p_max = {}", ctx.p_max()),
            ));
        }
        let n_dim = 2 * trunc + 1;
        let zeta_max = support_cutoff(ctx, trunc)?;
        let rule = GaussLegendre::new(16);
        let mut model = DensityModel {
            ctx,
            trunc,
            n_dim,
            zeta_max,
            cdf_knots: Vec::new(),
            rule,
        };
        let mut knots = vec![0.0f64; CDF_CELLS + 1];
        let h = 2.0 * zeta_max / CDF_CELLS as f64;
        let mut acc = 0.0;
        for (i, k) in knots.iter_mut().enumerate().skip(1) {
            let a = -zeta_max + (i - 1) as f64 * h;
            acc += model.rule.integrate(a, a + h, |z| model.marginal_density(z));
            *k = acc;
        }
        model.cdf_knots = knots;
        Ok(model)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Dimension `N = 2P + 1` of the truncated space.
    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn zeta_max(&self) -> f64 {
        self.zeta_max
    }

    pub fn context(&self) -> &DiskContext {
        self.ctx
    }

    /// Christoffel function `μ_N(y) = 1/Σ_{|p|≤P}|a_p(y)|²` (φ-independent).
    pub fn christoffel_mu(&self, y: CylinderPoint) -> f64 {
        (-self.ln_kernel(y.zeta)).exp()
    }

    /// `ln μ_N` for log-space weight assembly.
    pub fn ln_christoffel_mu(&self, zeta: f64) -> f64 {
        -self.ln_kernel(zeta)
    }

    fn ln_kernel(&self, zeta: f64) -> f64 {
        self.ctx
            .ln_kernel_diag(self.trunc, zeta)
            .expect("truncation checked at construction")
    }

    /// Cylinder density `ρ_N(ζ) = w²(ζ) Σ_{|p|≤P}|a_p|²(ζ) / N`.
    pub fn density_rho(&self, zeta: f64) -> f64 {
        let ln = ln_cylinder_weight_sq(self.ctx.kappa(), zeta) + self.ln_kernel(zeta)
            - (self.n_dim as f64).ln();
        ln.exp()
    }

    /// ζ-marginal `2π ρ_N(ζ)`, the density the CDF integrates.
    pub fn marginal_density(&self, zeta: f64) -> f64 {
        2.0 * core::f64::consts::PI * self.density_rho(zeta)
    }

    /// CDF `Υ_N(ζ)` of the ζ-marginal, by table plus local quadrature.
    pub fn cdf(&self, zeta: f64) -> f64 {
        if zeta <= -self.zeta_max {
            return 0.0;
        }
        if zeta >= self.zeta_max {
            return *self.cdf_knots.last().unwrap();
        }
        let h = 2.0 * self.zeta_max / CDF_CELLS as f64;
        let idx = (((zeta + self.zeta_max) / h) as usize).min(CDF_CELLS - 1);
        let a = -self.zeta_max + idx as f64 * h;
        self.cdf_knots[idx] + self.rule.integrate(a, zeta, |z| self.marginal_density(z))
    }

    /// Inverse CDF by bisection on `[-ζ_max, ζ_max]`, at most 60 iterations,
    /// stopping when `|Υ(ζ) - u| ≤ 1e-13`.
    pub fn cdf_inverse(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::invalid(
                "u",
                alloc::format!("quantile must lie strictly inside (0,1), got {u}"),
            ));
        }
        let (mut lo, mut hi) = (-self.zeta_max, self.zeta_max);
        let mut mid = 0.0;
        for _ in 0..60 {
            mid = 0.5 * (lo + hi);
            let v = self.cdf(mid) - u;
            if v.abs() <= 1e-13 {
                return Ok(mid);
            }
            if v < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(mid)
    }

    /// Generates an `M`-node set with the given strategy.
    ///
    /// Unit-square points are mapped through
    /// `y = (2π z_φ, Υ_N^{-1}(z_ζ))`; identical `(P, M, strategy, seed)`
    /// inputs produce bit-identical node sets.
    pub fn sample_nodes(
        &self,
        m: usize,
        strategy: SamplingStrategy,
        seed: u64,
    ) -> Result<NodeSet> {
        if m == 0 {
            return Err(Error::invalid("M", "node count must be at least 1"));
        }
        let tau = 2.0 * core::f64::consts::PI;
        let mut nodes = Vec::new();
        match strategy {
            SamplingStrategy::Deterministic => {
                let k = (m as f64).sqrt().ceil() as usize;
                for i in 0..k {
                    let zphi = (i as f64 + 0.5) / k as f64;
                    for j in 0..k {
                        let zzeta = (j as f64 + 0.5) / k as f64;
                        nodes.push(CylinderPoint::new(tau * zphi, self.cdf_inverse(zzeta)?));
                    }
                }
            }
            SamplingStrategy::Sobol => {
                let mut seq = Sobol2D::new();
                for _ in 0..m {
                    let (zphi, zzeta) = seq.next_point();
                    nodes.push(CylinderPoint::new(tau * zphi, self.cdf_inverse(zzeta)?));
                }
            }
            SamplingStrategy::Random => {
                let mut rng = SplitMix64::new(seed);
                for _ in 0..m {
                    let zphi = rng.next_unit_open();
                    let zzeta = rng.next_unit_open();
                    nodes.push(CylinderPoint::new(tau * zphi, self.cdf_inverse(zzeta)?));
                }
            }
        }
        let size = nodes.len();
        Ok(NodeSet {
            nodes,
            strategy,
            seed: if strategy == SamplingStrategy::Random {
                seed
            } else {
                0
            },
            trunc: self.trunc,
            size,
        })
    }
}

/// Effective support cutoff: the smallest `ζ*` (on a 1/64 grid after a
/// doubling-then-bisection search) with
/// `w²(ζ*) e^{2Pζ*} < 1e-30 · max_ζ [w²(ζ) Σ|a_p|²(ζ)]`,
/// which keeps the truncated tail mass far below 1e-14.
fn support_cutoff(ctx: &DiskContext, trunc: usize) -> Result<f64> {
    let kappa = ctx.kappa();
    let ln_peak = {
        let mut hi = f64::NEG_INFINITY;
        // the density peak sits at moderate ζ; scan a generous bracket
        for i in 0..=512 {
            let z = 8.0 * i as f64 / 512.0;
            let v = ln_cylinder_weight_sq(kappa, z) + ctx.ln_kernel_diag(trunc, z)?;
            hi = hi.max(v);
        }
        hi
    };
    let threshold = ln_peak + (1e-30f64).ln();
    let below = |z: f64| ln_cylinder_weight_sq(kappa, z) + 2.0 * trunc as f64 * z < threshold;
    let mut hi = 0.25;
    while !below(hi) {
        hi *= 2.0;
        if hi > 1024.0 {
            return Err(Error::invalid(
                "P",
                "support cutoff search failed to terminate",
            ));
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi * 64.0).ceil() / 64.0)
}

// ---------------------------------------------------------------------------
// Unit-square generators.
// ---------------------------------------------------------------------------

/// SplitMix64 (Steele, Lea, Flood 2014); 64-bit counter-based stream used for
/// all randomized sampling so runs are reproducible across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in the open interval `(0, 1)`.
    pub fn next_unit_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Pair of independent standard normals (Box–Muller).
    pub fn next_standard_normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit_open();
        let u2 = self.next_unit_open();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * core::f64::consts::PI * u2).sin_cos();
        (r * c, r * s)
    }
}

/// First dimensions of the Joe–Kuo direction-number table
/// (`new-joe-kuo-6`, entries `(s, a, m)`); dimension one is the van der
/// Corput sequence and is handled separately. Only the first row feeds the
/// 2D sequence; the rest document the table format.
const JOE_KUO: [(u32, u32, &[u32]); 4] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
];

const SOBOL_BITS: u32 = 32;

/// The standard 2D Sobol sequence (unscrambled, Gray-code order).
#[derive(Debug, Clone)]
pub struct Sobol2D {
    v: [[u32; SOBOL_BITS as usize]; 2],
    x: [u32; 2],
    index: u64,
}

impl Sobol2D {
    pub fn new() -> Self {
        let mut v = [[0u32; SOBOL_BITS as usize]; 2];
        for (k, vk) in v[0].iter_mut().enumerate() {
            *vk = 1 << (SOBOL_BITS - 1 - k as u32);
        }
        v[1] = direction_numbers(&JOE_KUO[0]);
        Sobol2D {
            v,
            x: [0, 0],
            index: 0,
        }
    }

    /// Next point, starting from sequence index 1 (index 0 is the corner
    /// `(0,0)`, unusable under inverse-transform sampling).
    pub fn next_point(&mut self) -> (f64, f64) {
        self.index += 1;
        let c = self.index.trailing_zeros() as usize;
        self.x[0] ^= self.v[0][c];
        self.x[1] ^= self.v[1][c];
        let scale = 1.0 / (1u64 << SOBOL_BITS) as f64;
        (self.x[0] as f64 * scale, self.x[1] as f64 * scale)
    }
}

impl Default for Sobol2D {
    fn default() -> Self {
        Self::new()
    }
}

/// Expands a Joe–Kuo table row into 32 direction integers.
fn direction_numbers(row: &(u32, u32, &[u32])) -> [u32; SOBOL_BITS as usize] {
    let (s, a, m_init) = *row;
    let s = s as usize;
    let mut m = [0u32; SOBOL_BITS as usize];
    m[..s].copy_from_slice(m_init);
    for k in s..SOBOL_BITS as usize {
        let mut val = m[k - s] ^ (m[k - s] << s);
        for j in 1..s {
            if (a >> (s - 1 - j)) & 1 == 1 {
                val ^= m[k - j] << j;
            }
        }
        m[k] = val;
    }
    let mut v = [0u32; SOBOL_BITS as usize];
    for (k, vk) in v.iter_mut().enumerate() {
        *vk = m[k] << (SOBOL_BITS - 1 - k as u32);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic_per_seed() {
        let mut r = SplitMix64::new(1234567);
        let a = r.next_u64();
        let b = r.next_u64();
        assert_ne!(a, b);
        let mut r2 = SplitMix64::new(1234567);
        assert_eq!(a, r2.next_u64());
        let u = SplitMix64::new(42).next_unit_open();
        assert!(u > 0.0 && u < 1.0);
    }

    #[test]
    fn sobol_first_points_match_reference() {
        // Standard 2D Sobol sequence: after the skipped origin the first
        // points are (1/2,1/2), (3/4,1/4), (1/4,3/4), (3/8,3/8), (7/8,7/8)...
        let mut s = Sobol2D::new();
        let expect = [
            (0.5, 0.5),
            (0.75, 0.25),
            (0.25, 0.75),
            (0.375, 0.375),
            (0.875, 0.875),
            (0.625, 0.125),
            (0.125, 0.625),
        ];
        for &(ex, ey) in &expect {
            let (x, y) = s.next_point();
            assert_eq!((x, y), (ex, ey));
        }
    }

    #[test]
    fn density_even_and_cdf_midpoint() {
        let ctx = DiskContext::new(16.0, 64).unwrap();
        let model = DensityModel::new(&ctx, 64).unwrap();
        for &z in &[0.1, 0.5, 1.0] {
            let a = model.density_rho(z);
            let b = model.density_rho(-z);
            assert!((a - b).abs() <= 1e-14 * a.max(b));
        }
        // Υ(0) = 1/2 for the even density
        assert!((model.cdf(0.0) - 0.5).abs() < 1e-10);
        // table endpoint captures all mass
        assert!((model.cdf(model.zeta_max()) - 1.0).abs() < 1e-12);
        // μ_N · kernel = 1 pointwise
        let y = CylinderPoint::new(0.2, 0.7);
        let mu = model.christoffel_mu(y);
        let k = ctx.kernel_diag_truncated(64, y).unwrap();
        assert!((mu * k - 1.0).abs() < 1e-13);
    }

    #[test]
    fn cdf_inverse_roundtrip_and_symmetry() {
        let ctx = DiskContext::new(16.0, 64).unwrap();
        let model = DensityModel::new(&ctx, 64).unwrap();
        for &u in &[0.1, 0.5, 0.9] {
            let z = model.cdf_inverse(u).unwrap();
            assert!((model.cdf(z) - u).abs() <= 1e-10, "u={u}");
        }
        assert!(model.cdf_inverse(0.5).unwrap().abs() < 1e-10);
        let zp = model.cdf_inverse(0.8).unwrap();
        let zm = model.cdf_inverse(0.2).unwrap();
        assert!((zp + zm).abs() < 1e-9);
        assert!(model.cdf_inverse(0.0).is_err());
        assert!(model.cdf_inverse(1.0).is_err());
    }

    #[test]
    fn deterministic_grid_size_is_next_square() {
        let ctx = DiskContext::new(4.0, 16).unwrap();
        let model = DensityModel::new(&ctx, 16).unwrap();
        let set = model
            .sample_nodes(10, SamplingStrategy::Deterministic, 0)
            .unwrap();
        assert_eq!(set.size, 16);
        assert_eq!(set.nodes.len(), 16);
        for n in &set.nodes {
            assert!(n.zeta.abs() <= model.zeta_max());
        }
    }

    #[test]
    fn sampling_is_bit_reproducible() {
        let ctx = DiskContext::new(4.0, 16).unwrap();
        let model = DensityModel::new(&ctx, 16).unwrap();
        for strat in [
            SamplingStrategy::Deterministic,
            SamplingStrategy::Sobol,
            SamplingStrategy::Random,
        ] {
            let a = model.sample_nodes(33, strat, 7).unwrap();
            let b = model.sample_nodes(33, strat, 7).unwrap();
            for (x, y) in a.nodes.iter().zip(b.nodes.iter()) {
                assert_eq!(x.phi.to_bits(), y.phi.to_bits());
                assert_eq!(x.zeta.to_bits(), y.zeta.to_bits());
            }
        }
        let a = model.sample_nodes(33, SamplingStrategy::Random, 7).unwrap();
        let b = model.sample_nodes(33, SamplingStrategy::Random, 8).unwrap();
        assert_ne!(a.nodes[0].phi.to_bits(), b.nodes[0].phi.to_bits());
    }
}
