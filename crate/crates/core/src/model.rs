//! Nonlinearities `mu`, the flux `F(xi) = mu(|xi|^2) xi`, and the benchmark
//! problems.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::mesh::DomainId;
use crate::{Error, Point, Result};

/// Scalar diffusion coefficient `mu(t)` together with the constants of the
/// growth condition `alpha (t-s) <= mu(t^2) t - mu(s^2) s <= L (t-s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nonlinearity {
    kind: Kind,
    alpha: f64,
    lipschitz: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Constant(f64),
    /// `1 + exp(-t)`
    ExpDecay,
    /// `(c + tau)/(1 + c) + (1 - tau)/(1 + c) (1 + t)^(-q)` with `c = c_q`.
    Rational { tau: f64, q: f64, c: f64 },
}

impl Nonlinearity {
    /// `mu = value`, the linear case.
    pub fn constant(value: f64) -> Result<Nonlinearity> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter(format!("constant mu must be positive, got {value}")));
        }
        Ok(Nonlinearity { kind: Kind::Constant(value), alpha: value, lipschitz: value })
    }

    /// `mu(t) = 1 + exp(-t)` with `alpha = 1 - 2 exp(-3/2)`, `L = 2`.
    pub fn exp_decay() -> Nonlinearity {
        Nonlinearity { kind: Kind::ExpDecay, alpha: 1.0 - 2.0 * (-1.5f64).exp(), lipschitz: 2.0 }
    }

    /// The rational family with `tau <= d/dt(mu(t^2) t) <= 1`.
    pub fn rational(tau: f64, q: f64) -> Result<Nonlinearity> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParameter(format!("tau must lie in (0,1), got {tau}")));
        }
        let c = cq(q)?;
        Ok(Nonlinearity { kind: Kind::Rational { tau, q, c }, alpha: tau, lipschitz: 1.0 })
    }

    /// Monotonicity constant of `t -> mu(t^2) t`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Lipschitz constant of `t -> mu(t^2) t`.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn mu(&self, t: f64) -> f64 {
        match self.kind {
            Kind::Constant(c) => c,
            Kind::ExpDecay => 1.0 + (-t).exp(),
            Kind::Rational { tau, q, c } => (c + tau) / (1.0 + c) + (1.0 - tau) / (1.0 + c) * (1.0 + t).powf(-q),
        }
    }

    /// `mu'(t)`.
    pub fn dmu(&self, t: f64) -> f64 {
        match self.kind {
            Kind::Constant(_) => 0.0,
            Kind::ExpDecay => -(-t).exp(),
            Kind::Rational { tau, q, c } => -q * (1.0 - tau) / (1.0 + c) * (1.0 + t).powf(-q - 1.0),
        }
    }

    /// `F(xi) = mu(|xi|^2) xi`.
    pub fn flux(&self, xi: Point) -> Point {
        let m = self.mu(xi[0] * xi[0] + xi[1] * xi[1]);
        [m * xi[0], m * xi[1]]
    }
}

/// Free-function form of [`Nonlinearity::flux`].
pub fn flux(n: &Nonlinearity, xi: Point) -> Point {
    n.flux(xi)
}

/// `c_q = 2 ((2q - 1) / (2 (q + 1)))^(q + 1)`, defined for `q > 1/2`.
pub fn cq(q: f64) -> Result<f64> {
    if !(q > 0.5) || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("c_q needs q > 1/2, got {q}")));
    }
    Ok(2.0 * ((2.0 * q - 1.0) / (2.0 * (q + 1.0))).powf(q + 1.0))
}

/// Extremal divided differences `[g(t) - g(s)] / (t - s)` of
/// `g(t) = mu(t^2) t` over consecutive sorted samples. The extremes over all
/// pairs are attained by consecutive ones, since every divided difference is
/// a convex combination of consecutive ones.
///
/// Fails with the offending pair if an estimate leaves `[alpha, L]` by more
/// than `1e-6`.
pub fn check_growth(n: &Nonlinearity, samples: &[f64]) -> Result<(f64, f64)> {
    let mut t: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite() && *x >= 0.0).collect();
    t.sort_by(f64::total_cmp);
    t.dedup();
    if t.len() < 2 {
        return Err(Error::InvalidParameter("need at least two distinct nonnegative samples".into()));
    }
    let g = |x: f64| n.mu(x * x) * x;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for w in t.windows(2) {
        let (s, u) = (w[0], w[1]);
        let ratio = (g(u) - g(s)) / (u - s);
        if ratio < n.alpha - 1e-6 || ratio > n.lipschitz + 1e-6 {
            return Err(Error::GrowthViolation { s, t: u, ratio });
        }
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(Point) -> Point + Send + Sync>;
pub type MatrixField = Arc<dyn Fn(Point) -> [[f64; 2]; 2] + Send + Sync>;
/// Neumann datum as a function of the boundary point and the outward normal.
pub type BoundaryField = Arc<dyn Fn(Point, Point) -> f64 + Send + Sync>;

/// A known exact solution with first and second derivatives.
#[derive(Clone)]
pub struct ExactSolution {
    pub value: ScalarField,
    pub gradient: VectorField,
    pub hessian: MatrixField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarProductSpec {
    /// `a(v, w) = (grad v, grad w)`
    H1,
    /// `a(v, w) = (mu(|grad u*|^2) grad v, grad w)`
    WeightedExact,
    /// `a(v, w) = (mu(|grad u_prev|^2) grad v, grad w)`
    WeightedIterate,
}

impl ScalarProductSpec {
    pub fn name(self) -> &'static str {
        match self {
            ScalarProductSpec::H1 => "h1",
            ScalarProductSpec::WeightedExact => "mu",
            ScalarProductSpec::WeightedIterate => "iterate",
        }
    }
}

/// Data of `-div(mu(|grad u|^2) grad u) = f - div fvec` with homogeneous
/// Dirichlet conditions and optional Neumann data.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub domain: DomainId,
    pub nonlinearity: Nonlinearity,
    pub source: ScalarField,
    /// Must be constant on every element of the initial mesh.
    pub flux_source: Option<VectorField>,
    pub neumann: Option<BoundaryField>,
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("nonlinearity", &self.nonlinearity)
            .field("flux_source", &self.flux_source.is_some())
            .field("neumann", &self.neumann.is_some())
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl Problem {
    pub fn new(name: &str, domain: DomainId, nonlinearity: Nonlinearity) -> Problem {
        Problem {
            name: name.to_string(),
            domain,
            nonlinearity,
            source: Arc::new(|_| 0.0),
            flux_source: None,
            neumann: None,
            exact: None,
        }
    }

    pub fn with_source(mut self, f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Problem {
        self.source = Arc::new(f);
        self
    }

    pub fn with_flux_source(mut self, f: impl Fn(Point) -> Point + Send + Sync + 'static) -> Problem {
        self.flux_source = Some(Arc::new(f));
        self
    }

    pub fn with_neumann(mut self, g: impl Fn(Point, Point) -> f64 + Send + Sync + 'static) -> Problem {
        self.neumann = Some(Arc::new(g));
        self
    }

    pub fn with_exact(mut self, exact: ExactSolution) -> Problem {
        self.exact = Some(exact);
        self
    }

    pub fn flux_source_at(&self, p: Point) -> Point {
        self.flux_source.as_ref().map_or([0.0, 0.0], |f| f(p))
    }

    /// `mu(|grad u*(p)|^2)`.
    pub fn exact_weight(&self, p: Point) -> Result<f64> {
        let exact = self.exact.as_ref().ok_or(Error::MissingExactSolution)?;
        let g = (exact.gradient)(p);
        Ok(self.nonlinearity.mu(g[0] * g[0] + g[1] * g[1]))
    }

    /// `grad mu(|grad u*|^2) = 2 mu'(|g|^2) H g` with `g = grad u*`, `H` its
    /// Hessian.
    pub fn exact_weight_gradient(&self, p: Point) -> Result<Point> {
        let exact = self.exact.as_ref().ok_or(Error::MissingExactSolution)?;
        let g = (exact.gradient)(p);
        let h = (exact.hessian)(p);
        let s = 2.0 * self.nonlinearity.dmu(g[0] * g[0] + g[1] * g[1]);
        Ok([s * (h[0][0] * g[0] + h[0][1] * g[1]), s * (h[1][0] * g[0] + h[1][1] * g[1])])
    }

    /// Browder-Minty constants `(alpha, L)` in the H1 norm, which coincide
    /// with the growth constants of `mu`.
    pub fn browder_minty(&self) -> (f64, f64) {
        (self.nonlinearity.alpha(), self.nonlinearity.lipschitz())
    }
}

/// Benchmark 1: `mu(t) = 1 + exp(-t)` on the Z-shape, homogeneous Dirichlet
/// data, `f = 0`, `fvec = chi_omega (1,1)` with
/// `omega = conv{(1,0), (1,1), (0,1)}`.
pub fn benchmark1() -> Problem {
    Problem::new("zshape", DomainId::ZShape, Nonlinearity::exp_decay()).with_flux_source(|p| {
        if in_omega(p) {
            [1.0, 1.0]
        } else {
            [0.0, 0.0]
        }
    })
}

fn in_omega(p: Point) -> bool {
    p[0] + p[1] > 1.0 && p[0] <= 1.0 && p[1] <= 1.0
}

/// Damping `alpha / L^2` that minimizes the contraction factor.
pub fn optimal_damping(n: &Nonlinearity) -> f64 {
    n.alpha() / (n.lipschitz() * n.lipschitz())
}

/// Exact data of benchmark 2: `u*(r, phi) = r^(2/3) sin(2 phi / 3)` on the
/// L-shape with `phi in (0, 3 pi / 2)`.
#[derive(Clone, Copy, Debug)]
pub struct Benchmark2Data {
    pub nonlinearity: Nonlinearity,
}

const EXPONENT: f64 = 2.0 / 3.0;

impl Benchmark2Data {
    pub fn new() -> Benchmark2Data {
        Benchmark2Data { nonlinearity: Nonlinearity::rational(0.01, 11.0 / 20.0).expect("fixed parameters are valid") }
    }

    fn polar(p: Point) -> Result<(f64, f64)> {
        let r = p[0].hypot(p[1]);
        if r == 0.0 {
            return Err(Error::SingularPoint(p[0], p[1]));
        }
        let mut phi = p[1].atan2(p[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        Ok((r, phi))
    }

    pub fn value(&self, p: Point) -> Result<f64> {
        let r = p[0].hypot(p[1]);
        if r == 0.0 {
            return Ok(0.0);
        }
        let (r, phi) = Self::polar(p)?;
        Ok(r.powf(EXPONENT) * (EXPONENT * phi).sin())
    }

    pub fn gradient(&self, p: Point) -> Result<Point> {
        let (r, phi) = Self::polar(p)?;
        let b = EXPONENT - 1.0;
        let s = EXPONENT * r.powf(b);
        Ok([s * (b * phi).sin(), s * (b * phi).cos()])
    }

    pub fn hessian(&self, p: Point) -> Result<[[f64; 2]; 2]> {
        let (r, phi) = Self::polar(p)?;
        let b = EXPONENT - 1.0;
        let s = EXPONENT * b * r.powf(b - 1.0);
        let (sn, cs) = ((b - 1.0) * phi).sin_cos();
        Ok([[s * sn, s * cs], [s * cs, -s * sn]])
    }

    /// `m(r) = mu(|grad u*|^2)` with `|grad u*| = (2/3) r^(-1/3)`.
    fn m(&self, r: f64) -> f64 {
        self.nonlinearity.mu(EXPONENT * EXPONENT * r.powf(2.0 * EXPONENT - 2.0))
    }

    fn dm(&self, r: f64) -> f64 {
        let t = EXPONENT * EXPONENT * r.powf(2.0 * EXPONENT - 2.0);
        let dt = EXPONENT * EXPONENT * (2.0 * EXPONENT - 2.0) * r.powf(2.0 * EXPONENT - 3.0);
        self.nonlinearity.dmu(t) * dt
    }

    /// `f = -m'(r) d_r u*`, since `u*` is harmonic.
    pub fn source(&self, p: Point) -> Result<f64> {
        let (r, phi) = Self::polar(p)?;
        Ok(-self.dm(r) * EXPONENT * r.powf(EXPONENT - 1.0) * (EXPONENT * phi).sin())
    }

    /// `m(r) grad u* . n`.
    pub fn neumann(&self, p: Point, normal: Point) -> Result<f64> {
        let (r, _) = Self::polar(p)?;
        let g = self.gradient(p)?;
        Ok(self.m(r) * (g[0] * normal[0] + g[1] * normal[1]))
    }
}

impl Default for Benchmark2Data {
    fn default() -> Self {
        Self::new()
    }
}

const SINGULAR: &str = "quadrature never samples the re-entrant corner";

/// Benchmark 2: the rational nonlinearity with `tau = 0.01`, `q = 11/20` on
/// the L-shape with mixed boundary conditions and the exact solution
/// `r^(2/3) sin(2 phi / 3)`.
pub fn benchmark2() -> Problem {
    let data = Benchmark2Data::new();
    let exact = ExactSolution {
        value: Arc::new(move |p| data.value(p).expect(SINGULAR)),
        gradient: Arc::new(move |p| data.gradient(p).expect(SINGULAR)),
        hessian: Arc::new(move |p| data.hessian(p).expect(SINGULAR)),
    };
    Problem::new("lshape", DomainId::LShape, data.nonlinearity)
        .with_source(move |p| data.source(p).expect(SINGULAR))
        .with_neumann(move |p, n| data.neumann(p, n).expect(SINGULAR))
        .with_exact(exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flux_values() {
        let n = Nonlinearity::exp_decay();
        assert_eq!(flux(&n, [0.0, 0.0]), [0.0, 0.0]);
        let f = flux(&n, [1.0, 0.0]);
        assert!((f[0] - (1.0 + (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(f[1], 0.0);
    }

    #[test]
    fn benchmark1_constants() {
        let n = Nonlinearity::exp_decay();
        assert!((n.alpha() - (1.0 - 2.0 * (-1.5f64).exp())).abs() < 1e-16);
        assert_eq!(n.lipschitz(), 2.0);
        let delta = optimal_damping(&n);
        assert!((delta - 0.138435).abs() < 1e-6, "{delta}");
    }

    #[test]
    fn growth_estimates() {
        let samples: Vec<f64> = (0..=200_000).map(|i| i as f64 * 5e-5).collect();
        let (lo, hi) = check_growth(&Nonlinearity::exp_decay(), &samples).unwrap();
        assert!(lo >= 1.0 - 2.0 * (-1.5f64).exp() - 1e-6);
        assert!(hi <= 2.0 + 1e-6);
        // the sampled extremes are close to the sharp constants
        assert!(lo < 1.0 - 2.0 * (-1.5f64).exp() + 1e-6);
        assert!(hi > 2.0 - 1e-6);

        let b2 = Nonlinearity::rational(0.01, 11.0 / 20.0).unwrap();
        let wide: Vec<f64> = (0..=200_000).map(|i| (i as f64 * 1e-4).powi(3)).collect();
        let (lo, hi) = check_growth(&b2, &wide).unwrap();
        assert!(lo >= 0.01 - 1e-6 && hi <= 1.0 + 1e-6, "{lo} {hi}");

        let one = Nonlinearity::constant(1.0).unwrap();
        let (lo, hi) = check_growth(&one, &[0.0, 0.5, 1.0, 3.0]).unwrap();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn growth_violation_is_reported() {
        // understate L so that the slope 2 near zero violates it
        let mut n = Nonlinearity::exp_decay();
        n.lipschitz = 1.5;
        match check_growth(&n, &[0.0, 0.01, 0.02]) {
            Err(Error::GrowthViolation { s, .. }) => assert_eq!(s, 0.0),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn cq_values() {
        // direct evaluation, frozen
        let c = cq(11.0 / 20.0).unwrap();
        assert!((c - 2.0 * (0.1f64 / 3.1).powf(1.55)).abs() < 1e-16);
        assert!((c - 0.009_759_315_771_516_6).abs() < 1e-17, "{c:.18}");
        let c32 = cq(1.5).unwrap();
        assert!((c32 - 2.0 * 0.4f64.powf(2.5)).abs() < 1e-15);
        for q in [0.51, 0.75, 1.0, 2.0, 10.0] {
            assert!(cq(q).unwrap() > 0.0);
        }
        assert!(cq(0.5).is_err());
        assert!(cq(0.2).is_err());
    }

    #[test]
    fn rational_mu_is_one_at_zero() {
        let n = Nonlinearity::rational(0.01, 0.55).unwrap();
        assert!((n.mu(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn benchmark1_data() {
        let p = benchmark1();
        assert_eq!(p.flux_source_at([0.9, 0.9]), [1.0, 1.0]);
        assert_eq!(p.flux_source_at([-0.5, 0.5]), [0.0, 0.0]);
        assert_eq!((p.source)([0.3, 0.2]), 0.0);
        assert!(p.neumann.is_none() && p.exact.is_none());
    }

    #[test]
    fn benchmark2_exact_value() {
        let d = Benchmark2Data::new();
        let p = [(0.75 * PI).cos(), (0.75 * PI).sin()];
        assert!((d.value(p).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(d.gradient([0.0, 0.0]), Err(Error::SingularPoint(..))));
        assert!(matches!(d.source([0.0, 0.0]), Err(Error::SingularPoint(..))));
        // homogeneous Dirichlet data on the re-entrant edges
        assert!(d.value([0.4, 0.0]).unwrap().abs() < 1e-15);
        assert!(d.value([0.0, -0.4]).unwrap().abs() < 1e-15);
    }

    fn random_lshape_point(rng: &mut ChaCha8Rng) -> Point {
        loop {
            let p: Point = [rng.gen_range(-0.95..0.95), rng.gen_range(-0.95..0.95)];
            let r = p[0].hypot(p[1]);
            if !(p[0] > -0.05 && p[1] < 0.05) && r > 0.1 {
                return p;
            }
        }
    }

    #[test]
    fn benchmark2_gradient_matches_finite_differences() {
        let d = Benchmark2Data::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-6;
        for _ in 0..100 {
            let p = random_lshape_point(&mut rng);
            let g = d.gradient(p).unwrap();
            let fx = (d.value([p[0] + h, p[1]]).unwrap() - d.value([p[0] - h, p[1]]).unwrap()) / (2.0 * h);
            let fy = (d.value([p[0], p[1] + h]).unwrap() - d.value([p[0], p[1] - h]).unwrap()) / (2.0 * h);
            let norm = g[0].hypot(g[1]);
            assert!((g[0] - fx).abs() <= 1e-6 * norm && (g[1] - fy).abs() <= 1e-6 * norm);
            let r = p[0].hypot(p[1]);
            assert!((norm - EXPONENT * r.powf(-1.0 / 3.0)).abs() < 1e-12);
        }
        let unit = d.gradient([(0.3f64).cos(), (0.3f64).sin()]).unwrap();
        assert!((unit[0].hypot(unit[1]) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn benchmark2_hessian_matches_finite_differences() {
        let d = Benchmark2Data::new();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-6;
        for _ in 0..100 {
            let p = random_lshape_point(&mut rng);
            let hs = d.hessian(p).unwrap();
            let gxp = d.gradient([p[0] + h, p[1]]).unwrap();
            let gxm = d.gradient([p[0] - h, p[1]]).unwrap();
            let gyp = d.gradient([p[0], p[1] + h]).unwrap();
            let gym = d.gradient([p[0], p[1] - h]).unwrap();
            let fd = [
                [(gxp[0] - gxm[0]) / (2.0 * h), (gyp[0] - gym[0]) / (2.0 * h)],
                [(gxp[1] - gxm[1]) / (2.0 * h), (gyp[1] - gym[1]) / (2.0 * h)],
            ];
            let scale = hs.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            for i in 0..2 {
                for j in 0..2 {
                    assert!((hs[i][j] - fd[i][j]).abs() <= 1e-5 * scale, "{p:?} {hs:?} {fd:?}");
                }
            }
        }
    }

    #[test]
    fn benchmark2_source_is_divergence_of_flux() {
        // f = -div F(grad u*), divergence by second-order central differences
        let d = Benchmark2Data::new();
        let n = d.nonlinearity;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = 1e-5;
        for _ in 0..100 {
            let p = random_lshape_point(&mut rng);
            let fl = |q: Point| n.flux(d.gradient(q).unwrap());
            let div = (fl([p[0] + h, p[1]])[0] - fl([p[0] - h, p[1]])[0]) / (2.0 * h)
                + (fl([p[0], p[1] + h])[1] - fl([p[0], p[1] - h])[1]) / (2.0 * h);
            let f = d.source(p).unwrap();
            assert!((f + div).abs() <= 1e-4 * f.abs().max(1e-3), "{p:?}: {f} vs {}", -div);
        }
    }

    #[test]
    fn benchmark2_neumann_is_normal_flux() {
        let d = Benchmark2Data::new();
        let n = d.nonlinearity;
        let sides: [(Point, Point); 4] = [
            ([1.0, 0.37], [1.0, 0.0]),
            ([0.2, 1.0], [0.0, 1.0]),
            ([-1.0, -0.6], [-1.0, 0.0]),
            ([-0.4, -1.0], [0.0, -1.0]),
        ];
        for (p, normal) in sides {
            let fl = n.flux(d.gradient(p).unwrap());
            let expected = fl[0] * normal[0] + fl[1] * normal[1];
            let got = d.neumann(p, normal).unwrap();
            assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1e-12));
        }
    }

    #[test]
    fn weight_gradient_matches_finite_differences() {
        let p = benchmark2();
        let h = 1e-6;
        for x in [[-0.5, 0.3], [0.4, 0.6], [-0.2, -0.7]] {
            let g = p.exact_weight_gradient(x).unwrap();
            let fx = (p.exact_weight([x[0] + h, x[1]]).unwrap() - p.exact_weight([x[0] - h, x[1]]).unwrap()) / (2.0 * h);
            let fy = (p.exact_weight([x[0], x[1] + h]).unwrap() - p.exact_weight([x[0], x[1] - h]).unwrap()) / (2.0 * h);
            assert!((g[0] - fx).abs() < 1e-7 && (g[1] - fy).abs() < 1e-7, "{g:?} {fx} {fy}");
        }
        assert!(matches!(benchmark1().exact_weight([0.1, 0.1]), Err(Error::MissingExactSolution)));
    }
}
