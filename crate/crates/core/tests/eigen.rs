use std::f64::consts::PI;
use std::sync::OnceLock;

use pextremal_core::domain::{inradius, rasterize, DomainSpec, PlanarDomain};
use pextremal_core::eigen::{
    boundary_normal_trace, extremality_defect, minimize_eigenvalue, narrowness_check,
    rayleigh_quotient, BoundaryTrace, EigenError, Eigenpair, ProbeScheme, ScalarField,
    SolverOptions,
};
use pextremal_core::geom::Point;
use pextremal_core::radial::{EuclideanBallSpectrum, DEFAULT_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

/// First zero of `J₀`, squared: `λ₁` of the unit disk for `p = 2`.
const J01_SQ: f64 = 5.783_185_962_946_784;

fn raster(spec: &DomainSpec, h: f64) -> PlanarDomain {
    rasterize(spec, h).unwrap()
}

fn solve(spec: &DomainSpec, h: f64, p: f64) -> (PlanarDomain, Eigenpair) {
    let d = raster(spec, h);
    let e = minimize_eigenvalue(&d, p, &SolverOptions::default()).unwrap();
    (d, e)
}

fn unit_disk() -> DomainSpec {
    DomainSpec::disk(Point::ORIGIN, 1.0)
}

fn ellipse() -> DomainSpec {
    DomainSpec::ellipse(Point::ORIGIN, 2.0, 1.0)
}

fn unit_square() -> DomainSpec {
    DomainSpec::rectangle(0.0, 0.0, 1.0, 1.0)
}

fn l_shape() -> DomainSpec {
    DomainSpec::difference(
        DomainSpec::rectangle(-1.0, -1.0, 1.0, 1.0),
        DomainSpec::rectangle(0.0, 0.0, 1.0, 1.0),
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn disk_128() -> &'static (PlanarDomain, Eigenpair) {
    static CELL: OnceLock<(PlanarDomain, Eigenpair)> = OnceLock::new();
    CELL.get_or_init(|| solve(&unit_disk(), 1.0 / 128.0, 2.0))
}

fn ellipse_64() -> &'static (PlanarDomain, Eigenpair) {
    static CELL: OnceLock<(PlanarDomain, Eigenpair)> = OnceLock::new();
    CELL.get_or_init(|| solve(&ellipse(), 1.0 / 64.0, 2.0))
}

/// Inverse iteration with conjugate gradients for the 5-point Dirichlet
/// Laplacian on the cells whose centres satisfy `inside`. Written without
/// any of the crate's solver machinery. Returns `λ` and the eigenvector on
/// an `n × m` lattice over `[x0, x0 + n h] × [y0, y0 + m h]`.
struct LatticeOracle {
    n: usize,
    m: usize,
    h: f64,
    x0: f64,
    y0: f64,
    inside: Vec<bool>,
}

impl LatticeOracle {
    fn new(
        x0: f64,
        y0: f64,
        n: usize,
        m: usize,
        h: f64,
        inside: impl Fn(f64, f64) -> bool,
    ) -> Self {
        let mut mask = vec![false; n * m];
        for j in 0..m {
            for i in 0..n {
                let (x, y) = (x0 + (i as f64 + 0.5) * h, y0 + (j as f64 + 0.5) * h);
                mask[j * n + i] = inside(x, y);
            }
        }
        Self {
            n,
            m,
            h,
            x0,
            y0,
            inside: mask,
        }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let (n, h2) = (self.n, self.h * self.h);
        for k in 0..u.len() {
            if !self.inside[k] {
                out[k] = 0.0;
                continue;
            }
            let at = |kk: usize| if self.inside[kk] { u[kk] } else { 0.0 };
            out[k] = (4.0 * u[k] - at(k - 1) - at(k + 1) - at(k - n) - at(k + n)) / h2;
        }
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn cg(&self, b: &[f64], x: &mut [f64]) {
        let len = b.len();
        let mut ax = vec![0.0; len];
        self.apply(x, &mut ax);
        let mut r: Vec<f64> = (0..len).map(|k| b[k] - ax[k]).collect();
        let mut d = r.clone();
        let mut rr = Self::dot(&r, &r);
        let stop = 1e-24 * Self::dot(b, b);
        let mut ad = vec![0.0; len];
        for _ in 0..10 * len {
            if rr <= stop {
                break;
            }
            self.apply(&d, &mut ad);
            let a = rr / Self::dot(&d, &ad);
            for k in 0..len {
                x[k] += a * d[k];
                r[k] -= a * ad[k];
            }
            let rr2 = Self::dot(&r, &r);
            for k in 0..len {
                d[k] = r[k] + rr2 / rr * d[k];
            }
            rr = rr2;
        }
    }

    fn solve(&self) -> (f64, Vec<f64>) {
        let len = self.n * self.m;
        let mut u: Vec<f64> = self
            .inside
            .iter()
            .map(|&i| if i { 1.0 } else { 0.0 })
            .collect();
        let mut lambda = 0.0;
        let mut au = vec![0.0; len];
        for _ in 0..60 {
            let mut next = u.clone();
            self.cg(&u, &mut next);
            let s = Self::dot(&next, &next).sqrt();
            next.iter_mut().for_each(|v| *v /= s);
            self.apply(&next, &mut au);
            let l = Self::dot(&next, &au);
            u = next;
            if (l - lambda).abs() < 1e-12 * l {
                lambda = l;
                break;
            }
            lambda = l;
        }
        (lambda, u)
    }

    fn value_at(&self, u: &[f64], x: f64, y: f64) -> f64 {
        let i = ((x - self.x0) / self.h).floor() as usize;
        let j = ((y - self.y0) / self.h).floor() as usize;
        u[j * self.n + i]
    }
}

fn ellipse_oracle() -> &'static (LatticeOracle, f64, Vec<f64>) {
    static CELL: OnceLock<(LatticeOracle, f64, Vec<f64>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let h = 1.0 / 64.0;
        let o = LatticeOracle::new(-2.25, -1.25, 288, 160, h, |x, y| x * x / 4.0 + y * y < 1.0);
        let (l, u) = o.solve();
        (o, l, u)
    })
}

/// Mean `|∂u/∂ν|` over the trace samples selected by `near`.
fn sector_mean(t: &BoundaryTrace, near: impl Fn(Point) -> bool) -> f64 {
    let (mut s, mut w) = (0.0, 0.0);
    for k in 0..t.len() {
        if near(t.points[k]) {
            s += t.normal_derivative[k].abs() * t.weights[k];
            w += t.weights[k];
        }
    }
    assert!(w > 0.0);
    s / w
}

// ---------------------------------------------------------------- quotient

#[test]
fn distance_field_quotient_on_the_disk_lies_above_the_bessel_value() {
    let d = raster(&unit_disk(), 1.0 / 128.0);
    let u = ScalarField::from_fn(d.grid, |k, c| {
        if d.mask[k] {
            (1.0 - c.norm()).max(0.0)
        } else {
            0.0
        }
    });
    let q = rayleigh_quotient(&u, 2.0).unwrap();
    assert!(q.is_finite() && q >= J01_SQ, "{q}");
    // ∫|∇d|² / ∫d² = π / (π/6) for d = 1 - r
    assert!(rel(q, 6.0) < 0.02, "{q}");
}

#[test]
fn separable_sine_on_the_square_gives_two_pi_squared() {
    let d = raster(&unit_square(), 1.0 / 64.0);
    let u = ScalarField::from_fn(d.grid, |k, c| {
        if d.mask[k] {
            (PI * c.x).sin() * (PI * c.y).sin()
        } else {
            0.0
        }
    });
    let q = rayleigh_quotient(&u, 2.0).unwrap();
    assert!(rel(q, 2.0 * PI * PI) < 0.02, "{q}");
}

#[test]
fn quotient_is_zero_homogeneous_and_rejects_zero() {
    let d = raster(&unit_disk(), 1.0 / 32.0);
    let u = ScalarField::from_fn(d.grid, |k, c| if d.mask[k] { 1.0 - c.dot(c) } else { 0.0 });
    for &p in &[1.6, 2.0, 3.0] {
        let a = rayleigh_quotient(&u, p).unwrap();
        let b = rayleigh_quotient(&u.scaled(3.0), p).unwrap();
        let c = rayleigh_quotient(&u.scaled(-0.01), p).unwrap();
        assert!(rel(b, a) < 1e-12 && rel(c, a) < 1e-12);
    }
    let z = ScalarField::zeros(d.grid);
    assert!(matches!(
        rayleigh_quotient(&z, 2.0),
        Err(EigenError::ZeroField)
    ));
}

// ---------------------------------------------------------------- solver

#[test]
fn unit_disk_matches_bessel_value() {
    let (d, e) = disk_128();
    assert!(rel(e.lambda, J01_SQ) < 0.02, "{}", e.lambda);
    assert_eq!(e.p, 2.0);
    // normalized and supported on the mask
    assert!((e.field.lp_mass(2.0) - 1.0).abs() < 1e-9);
    for k in 0..d.grid.len() {
        assert!(e.field.values[k] >= 0.0);
        if !d.mask[k] {
            assert_eq!(e.field.values[k], 0.0);
        }
    }
}

#[test]
fn unit_square_matches_two_pi_squared() {
    let (_, e) = solve(&unit_square(), 1.0 / 128.0, 2.0);
    assert!(rel(e.lambda, 2.0 * PI * PI) < 0.02, "{}", e.lambda);
}

#[test]
fn disk_of_radius_two_has_a_quarter_of_the_eigenvalue() {
    let (_, big) = solve(&DomainSpec::disk(Point::ORIGIN, 2.0), 1.0 / 64.0, 2.0);
    let (_, e) = disk_128();
    assert!(
        rel(big.lambda, e.lambda / 4.0) < 0.02,
        "{} {}",
        big.lambda,
        e.lambda
    );
}

#[test]
fn disk_matches_ball_spectrum_for_other_exponents() {
    for &p in &[1.6, 3.0] {
        let exact = EuclideanBallSpectrum::new(2, p, DEFAULT_TOL)
            .unwrap()
            .unit_eigenvalue;
        let (_, e) = solve(&unit_disk(), 1.0 / 64.0, p);
        assert!(
            rel(e.lambda, exact) < 0.03,
            "p = {p}: {} vs {exact}",
            e.lambda
        );
        assert!(e.field.min() >= 0.0);
    }
}

#[test]
fn grid_refinement_converges_to_the_bessel_value() {
    let hs = [1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0];
    let lambdas: Vec<f64> = hs
        .iter()
        .map(|&h| solve(&unit_disk(), h, 2.0).1.lambda)
        .collect();
    let gaps: Vec<f64> = lambdas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(gaps.windows(2).all(|g| g[1] < g[0]), "{lambdas:?}");
    let errs: Vec<f64> = lambdas.iter().map(|&l| rel(l, J01_SQ)).collect();
    assert!(errs.windows(2).all(|e| e[1] < e[0]), "{errs:?}");
    assert!(errs[3] < 0.01);
}

#[test]
fn scaling_follows_the_homothety_law() {
    for &p in &[2.0, 3.0] {
        for (name, spec) in [
            ("disk", unit_disk()),
            ("square", DomainSpec::rectangle(-0.5, -0.5, 0.5, 0.5)),
        ] {
            let h0 = 1.0 / 128.0;
            let (_, base) = solve(&spec, h0, p);
            for &r in &[0.5, 2.0] {
                let scaled = match &spec {
                    DomainSpec::Disk { radius, .. } => DomainSpec::disk(Point::ORIGIN, radius * r),
                    _ => DomainSpec::rectangle(-0.5 * r, -0.5 * r, 0.5 * r, 0.5 * r),
                };
                // a lattice that is not the scaled image of the base one
                let h = 0.9 * r * h0;
                let (_, e) = solve(&scaled, h, p);
                let ratio = e.lambda * r.powf(p) / base.lambda;
                assert!((ratio - 1.0).abs() < 0.02, "{name} p={p} R={r}: {ratio}");
            }
        }
    }
}

#[test]
fn smaller_domains_have_larger_eigenvalues() {
    let h = 1.0 / 40.0;
    let chains = [
        vec![
            DomainSpec::disk(Point::ORIGIN, 0.8),
            DomainSpec::rectangle(-1.0, -1.0, 1.0, 1.0),
            DomainSpec::disk(Point::ORIGIN, 1.5),
        ],
        vec![
            DomainSpec::ellipse(Point::ORIGIN, 0.9, 0.6),
            unit_disk(),
            DomainSpec::stadium(0.8, 1.0),
        ],
        vec![
            l_shape(),
            DomainSpec::rectangle(-1.0, -1.0, 1.0, 1.0),
            DomainSpec::ellipse(Point::new(0.1, 0.0), 1.6, 1.45),
        ],
    ];
    for &p in &[2.0, 3.0] {
        for chain in &chains {
            let ls: Vec<f64> = chain.iter().map(|s| solve(s, h, p).1.lambda).collect();
            for w in ls.windows(2) {
                assert!(w[0] >= w[1] * 0.98, "p={p}: {ls:?}");
            }
        }
    }
}

#[test]
fn warm_start_from_a_coarser_grid_reaches_the_same_value() {
    let (_, coarse) = solve(&unit_disk(), 1.0 / 32.0, 2.0);
    let d = raster(&unit_disk(), 1.0 / 64.0);
    let cold = minimize_eigenvalue(&d, 2.0, &SolverOptions::default()).unwrap();
    let warm = minimize_eigenvalue(&d, 2.0, &SolverOptions::warm_start(coarse.field)).unwrap();
    assert!(rel(warm.lambda, cold.lambda) < 1e-5);
}

#[test]
fn bad_exponent_and_iteration_cap_are_reported() {
    let d = raster(&unit_disk(), 1.0 / 32.0);
    assert!(matches!(
        minimize_eigenvalue(&d, 1.0, &SolverOptions::default()),
        Err(EigenError::Exponent(_))
    ));
    let opts = SolverOptions {
        max_iters: 3,
        ..SolverOptions::default()
    };
    match minimize_eigenvalue(&d, 2.0, &opts) {
        Err(EigenError::NonConvergence { iterations, lambda }) => {
            assert_eq!(iterations, 3);
            assert!(lambda > J01_SQ * 0.9);
        }
        other => panic!("{other:?}"),
    }
}

// ---------------------------------------------------------------- oracle

#[test]
fn ellipse_eigenvalue_agrees_with_an_independent_lattice_solve() {
    let (_, oracle_lambda, _) = ellipse_oracle();
    let (_, e) = ellipse_64();
    assert!(
        rel(e.lambda, *oracle_lambda) < 0.01,
        "{} vs {oracle_lambda}",
        e.lambda
    );
    // the ellipse sits between its inscribed and circumscribed disks
    assert!(e.lambda < J01_SQ && e.lambda > J01_SQ / 4.0);
}

// ---------------------------------------------------------------- trace

#[test]
fn disk_trace_is_constant_and_matches_the_bessel_slope() {
    let (d, e) = disk_128();
    // pointwise, the staircase mask still shows through at depth 2h, so the
    // sample-by-sample comparison probes a little deeper
    let t = boundary_normal_trace(&e.field, d, Some(4.0 * d.h), ProbeScheme::default()).unwrap();
    let m = t.mean_magnitude();
    let worst = t
        .normal_derivative
        .iter()
        .map(|q| (q.abs() - m).abs() / m)
        .fold(0.0, f64::max);
    assert!(worst < 0.03, "{worst}");
    let t = boundary_normal_trace(&e.field, d, None, ProbeScheme::default()).unwrap();
    let m = t.mean_magnitude();
    // |u'(1)| = j₀₁ J₁(j₀₁) / (√π J₁(j₀₁)) for the L²-normalized mode
    assert!(rel(m, J01_SQ.sqrt() / PI.sqrt()) < 0.02, "{m}");
    assert!(t.normal_derivative.iter().all(|&q| q <= 0.0));
    let per = t.perimeter();
    assert!((per - d.boundary.perimeter()).abs() <= 2.0 * d.h);
    for (n, p) in t.normals.iter().zip(&t.points) {
        assert!(n.dot(p.normalized()) > 0.99);
    }
}

#[test]
fn ellipse_trace_is_steepest_at_the_flat_sides() {
    let (d, e) = ellipse_64();
    let t = boundary_normal_trace(&e.field, d, None, ProbeScheme::default()).unwrap();
    let flat = sector_mean(&t, |p| p.x.abs() < 0.3);
    let sharp = sector_mean(&t, |p| p.x.abs() > 1.9);
    assert!(flat > 1.5 * sharp, "{flat} {sharp}");

    // the same ordering in the independent solve: at equal depth the field
    // is larger behind the flat side
    let (o, _, u) = ellipse_oracle();
    let depth = 0.1;
    let behind_flat = o
        .value_at(u, 0.0, 1.0 - depth)
        .min(o.value_at(u, 0.0, -1.0 + depth));
    let behind_sharp = o
        .value_at(u, 2.0 - depth, 0.0)
        .max(o.value_at(u, -2.0 + depth, 0.0));
    assert!(behind_flat > behind_sharp, "{behind_flat} {behind_sharp}");
}

#[test]
fn zero_field_has_zero_trace_and_no_defect() {
    let d = raster(&unit_disk(), 1.0 / 32.0);
    let t = boundary_normal_trace(&ScalarField::zeros(d.grid), &d, None, ProbeScheme::Anchored)
        .unwrap();
    assert!(!t.is_empty());
    assert!(t.normal_derivative.iter().all(|&q| q == 0.0));
    assert!(matches!(extremality_defect(&t), Err(EigenError::ZeroMean)));
    assert!(matches!(
        extremality_defect(&BoundaryTrace::default()),
        Err(EigenError::ZeroMean)
    ));
}

#[test]
fn probes_deeper_than_the_domain_are_reported() {
    let d = raster(&DomainSpec::rectangle(0.0, 0.0, 2.0, 0.6), 1.0 / 64.0);
    let u = ScalarField::from_fn(d.grid, |k, _| if d.mask[k] { 1.0 } else { 0.0 });
    assert!(boundary_normal_trace(&u, &d, Some(0.1), ProbeScheme::default()).is_ok());
    match boundary_normal_trace(&u, &d, Some(0.25), ProbeScheme::default()) {
        Err(EigenError::ProbeOutsideDomain { locations }) => assert!(!locations.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn trace_includes_hole_boundaries() {
    let annulus = DomainSpec::difference(unit_disk(), DomainSpec::disk(Point::ORIGIN, 0.3));
    let (d, e) = solve(&annulus, 1.0 / 64.0, 2.0);
    let t = boundary_normal_trace(&e.field, &d, None, ProbeScheme::default()).unwrap();
    let inner: Vec<usize> = (0..t.len()).filter(|&k| t.loop_index[k] == 1).collect();
    assert!(!inner.is_empty());
    for &k in &inner {
        // the outward normal of the domain points into the hole
        assert!(t.normals[k].dot(t.points[k].normalized()) < -0.99);
        assert!(t.normal_derivative[k] < 0.0);
    }
}

// ---------------------------------------------------------------- defect

#[test]
fn constant_trace_has_zero_defect() {
    let t = BoundaryTrace {
        points: vec![Point::ORIGIN; 5],
        arclength: vec![0.0, 1.0, 2.0, 3.0, 4.0],
        normals: vec![Point::new(1.0, 0.0); 5],
        normal_derivative: vec![-0.7; 5],
        weights: vec![0.5, 1.0, 2.0, 1.0, 0.5],
        loop_index: vec![0; 5],
    };
    assert!(extremality_defect(&t).unwrap().abs() < 1e-15);
}

#[test]
fn defect_separates_the_disk_from_the_ellipse() {
    let (d, e) = disk_128();
    let t = boundary_normal_trace(&e.field, d, None, ProbeScheme::default()).unwrap();
    let disk = extremality_defect(&t).unwrap();
    assert!(disk < 0.03, "{disk}");

    let (d, e) = ellipse_64();
    let t = boundary_normal_trace(&e.field, d, None, ProbeScheme::default()).unwrap();
    let ell = extremality_defect(&t).unwrap();
    assert!(ell > 0.1, "{ell}");
}

// ---------------------------------------------------------------- narrowness

#[test]
fn disk_sits_on_the_boundary_case() {
    let d = raster(&unit_disk(), 1.0 / 64.0);
    let r = narrowness_check(&d, 2.0, &SolverOptions::default()).unwrap();
    assert!(r.margin.abs() <= 2.0 * r.h, "{r:?}");
    assert!(r.pass);
    assert_eq!(r.pass, r.margin > -2.0 * r.h);
}

#[test]
fn ellipse_and_square_pass_with_room_to_spare() {
    let (d, _) = ellipse_64();
    let r = narrowness_check(d, 2.0, &SolverOptions::default()).unwrap();
    assert!(r.pass && r.margin > 0.1, "{r:?}");

    let d = raster(&unit_square(), 1.0 / 64.0);
    let r = narrowness_check(&d, 2.0, &SolverOptions::default()).unwrap();
    // j₀₁ / √(2π²) - 1/2
    let expected = (J01_SQ / (2.0 * PI * PI)).sqrt() - 0.5;
    // λ and the inradius both carry an O(h) raster bias
    assert!(
        r.pass && (r.margin - expected).abs() < 2.0 * r.h,
        "{r:?} vs {expected}"
    );
    assert!((r.inradius - inradius(&d).radius).abs() < 1e-15);
}

#[test]
fn narrowness_holds_on_the_shape_suite() {
    let h = 1.0 / 64.0;
    let suite = [
        unit_disk(),
        ellipse(),
        DomainSpec::rectangle(-1.0, -1.0, 1.0, 1.0),
        DomainSpec::stadium(1.0, 1.0),
        l_shape(),
    ];
    for spec in &suite {
        let d = raster(spec, h);
        for &p in &[1.6, 2.0, 3.0] {
            let r = narrowness_check(&d, p, &SolverOptions::default()).unwrap();
            assert!(r.pass, "p={p} {spec:?}: {r:?}");
        }
    }
}

// ---------------------------------------------------------------- properties

fn disk_32() -> &'static (PlanarDomain, Eigenpair) {
    static CELL: OnceLock<(PlanarDomain, Eigenpair)> = OnceLock::new();
    CELL.get_or_init(|| solve(&unit_disk(), 1.0 / 32.0, 2.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_admissible_field_bounds_the_eigenvalue_from_above(
        seed in any::<u64>(),
        amp in 0.01f64..2.0,
        modes in 1usize..6,
    ) {
        let (d, e) = disk_32();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let coeffs: Vec<(f64, f64, f64)> = (0..modes)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..4.0), rng.gen_range(0.0..PI)))
            .collect();
        let noise = rng.gen_range(0.0..0.2);
        let u = ScalarField::from_fn(d.grid, |k, c| {
            if !d.mask[k] {
                return 0.0;
            }
            let smooth: f64 = coeffs
                .iter()
                .map(|&(a, f, ph)| a * (f * c.x + ph).sin() * (f * c.y - ph).cos())
                .sum();
            e.field.values[k] + amp * smooth * e.field.max() + noise * rng_like(k, seed)
        });
        let q = rayleigh_quotient(&u, 2.0).unwrap();
        prop_assert!(q >= e.lambda - 1e-6, "{} < {}", q, e.lambda);
    }
}

/// A cheap deterministic per-cell perturbation in [-1, 1].
fn rng_like(k: usize, seed: u64) -> f64 {
    let mut x = (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ seed;
    x ^= x >> 29;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 32;
    (x as f64 / u64::MAX as f64) * 2.0 - 1.0
}
