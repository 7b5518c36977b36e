use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::HyperbolicError;
use crate::geom::Point;

/// A point of the Poincaré disk, in Euclidean coordinates with `|x| < 1`.
/// Ideal points are the same type with `|x| = 1`.
pub type HPoint = Point;

/// Points this close to the unit circle are read as ideal.
pub const IDEAL_TOL: f64 = 1e-12;

pub(crate) fn cx(p: Point) -> Complex64 {
    Complex64::new(p.x, p.y)
}

pub(crate) fn pt(z: Complex64) -> Point {
    Point::new(z.re, z.im)
}

/// `1 - |a|²`, without cancelling when `a` is near the rim.
fn conformal_gap(a: Point) -> f64 {
    let r = a.norm();
    (1.0 - r) * (1.0 + r)
}

pub fn is_ideal(p: Point) -> bool {
    (p.norm() - 1.0).abs() <= IDEAL_TOL
}

/// The ideal point in direction `angle`.
pub fn ideal(angle: f64) -> Point {
    Point::from_polar(1.0, angle)
}

/// Hyperbolic distance for the metric `4|dx|² / (1 - |x|²)²`.
///
/// Evaluated as `2 asinh(|a-b| / √((1-|a|²)(1-|b|²)))`, which equals the
/// `arccosh` form but stays accurate for nearby points.
pub fn hdist(a: HPoint, b: HPoint) -> f64 {
    let q = a.dist(b) / (conformal_gap(a) * conformal_gap(b)).sqrt();
    2.0 * q.asinh()
}

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Mobius {
    pub m: [Complex64; 4],
}

impl Mobius {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.m;
        (a * z + b) / (c * z + d)
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self { m: [d, -b, -c, a] }
    }

    /// Map from the disk onto the upper half-plane sending the ideal points
    /// `from` and `to` to `0` and `∞`, and `base` (on the geodesic joining
    /// them) to `i`. The geodesic becomes the positive imaginary axis with
    /// arclength `t` at `i eᵗ`, and the geodesics crossing it orthogonally
    /// become the half-circles `|w| = eᵗ`.
    pub fn chart(from: Point, to: Point, base: Point) -> Self {
        let (y, z, f) = (cx(from), cx(to), cx(base));
        let mu = Complex64::i() * (z - f) / (f - y);
        Self {
            m: [mu, -mu * y, Complex64::new(-1.0, 0.0), z],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum GeodesicKind {
    /// A diameter, traversed in direction `angle`.
    Diameter { angle: f64 },
    /// An arc of the circle `|x - center| = radius`, orthogonal to the unit
    /// circle.
    Arc { center: Point, radius: f64 },
}

/// A complete geodesic, oriented from `endpoints[0]` to `endpoints[1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Geodesic {
    pub kind: GeodesicKind,
    pub endpoints: [Point; 2],
}

impl Geodesic {
    /// The diameter from `ideal(angle + π)` to `ideal(angle)`.
    pub fn diameter(angle: f64) -> Self {
        let d = ideal(angle);
        Self {
            kind: GeodesicKind::Diameter {
                angle: crate::domain::wrap_angle(angle),
            },
            endpoints: [-d, d],
        }
    }

    pub fn reversed(&self) -> Self {
        let kind = match self.kind {
            GeodesicKind::Diameter { angle } => GeodesicKind::Diameter {
                angle: crate::domain::wrap_angle(angle + TAU / 2.0),
            },
            arc => arc,
        };
        Self {
            kind,
            endpoints: [self.endpoints[1], self.endpoints[0]],
        }
    }

    /// Closest point to the origin; arclength is measured from here.
    pub fn foot(&self) -> Point {
        match self.kind {
            GeodesicKind::Diameter { .. } => Point::ORIGIN,
            GeodesicKind::Arc { center, radius } => (1.0 - radius / center.norm()) * center,
        }
    }

    pub(crate) fn chart(&self) -> Mobius {
        Mobius::chart(self.endpoints[0], self.endpoints[1], self.foot())
    }

    /// The point at signed arclength `t` from [`foot`](Self::foot), toward
    /// `endpoints[1]` for `t > 0`.
    pub fn point_at(&self, t: f64) -> HPoint {
        let w = Complex64::new(0.0, t.exp());
        pt(self.chart().inverse().apply(w))
    }

    /// Unit tangent at the foot, in the direction of travel.
    pub fn tangent_at_foot(&self) -> Point {
        match self.kind {
            GeodesicKind::Diameter { angle } => ideal(angle),
            GeodesicKind::Arc { center, .. } => {
                let t = center.normalized().perp();
                if t.dot(self.endpoints[1] - self.endpoints[0]) >= 0.0 {
                    t
                } else {
                    -t
                }
            }
        }
    }

    /// Positive strictly left of the direction of travel, negative right of
    /// it, zero on the geodesic. Only the sign is meaningful.
    pub fn side(&self, x: Point) -> f64 {
        match self.kind {
            GeodesicKind::Diameter { angle } => ideal(angle).cross(x),
            GeodesicKind::Arc { center, radius } => {
                let inside = radius * radius - (x - center).norm_sq();
                if self.turns_ccw() {
                    inside
                } else {
                    -inside
                }
            }
        }
    }

    /// Does travel along an arc go counterclockwise about its centre?
    fn turns_ccw(&self) -> bool {
        match self.kind {
            GeodesicKind::Arc { center, .. } => {
                (self.endpoints[0] - center).cross(self.endpoints[1] - center) > 0.0
            }
            GeodesicKind::Diameter { .. } => true,
        }
    }

    /// Same geodesic as a set, either orientation.
    pub fn same_as(&self, other: &Geodesic, tol: f64) -> bool {
        let [a, b] = self.endpoints;
        let [c, d] = other.endpoints;
        (a.dist(c) <= tol && b.dist(d) <= tol) || (a.dist(d) <= tol && b.dist(c) <= tol)
    }

    pub fn reflect(&self, x: HPoint) -> HPoint {
        reflect(x, self)
    }
}

/// The geodesic through `a` then `b`; either may be ideal.
pub fn geodesic_through(a: Point, b: Point) -> Result<Geodesic, HyperbolicError> {
    for p in [a, b] {
        if !(p.norm() <= 1.0 + IDEAL_TOL) {
            return Err(HyperbolicError::OutsideDisk { x: p.x, y: p.y });
        }
    }
    let snap = |p: Point| if is_ideal(p) { p.normalized() } else { p };
    let (a, b) = (snap(a), snap(b));
    if a.dist(b) <= 1e-12 {
        return Err(HyperbolicError::DegeneratePair);
    }
    let det = a.cross(b);
    if det.abs() <= 1e-12 * a.dist(b) {
        let d = (b - a).normalized();
        return Ok(Geodesic::diameter(d.y.atan2(d.x)));
    }
    // centre c with 2 c·p = 1 + |p|² for both points, so |c|² = r² + 1
    let (ra, rb) = (0.5 * (1.0 + a.norm_sq()), 0.5 * (1.0 + b.norm_sq()));
    let center = Point::new((ra * b.y - rb * a.y) / det, (a.x * rb - b.x * ra) / det);
    let radius = (center.norm_sq() - 1.0).sqrt();
    let c2 = center.norm_sq();
    let p = (1.0 / c2) * (center + radius * center.perp());
    let q = (1.0 / c2) * (center - radius * center.perp());
    // the arc inside the disk subtends less than π about the centre
    let dir = (a - center).cross(b - center).signum();
    let turn = |e: Point| {
        let (u, v) = (a - center, e - center);
        dir * u.cross(v).atan2(u.dot(v))
    };
    let (mut e0, mut e1) = if turn(p) > turn(q) { (q, p) } else { (p, q) };
    if is_ideal(a) {
        e0 = a;
    }
    if is_ideal(b) {
        e1 = b;
    }
    Ok(Geodesic {
        kind: GeodesicKind::Arc { center, radius },
        endpoints: [e0, e1],
    })
}

/// Reflection across `g`: a Euclidean reflection for a diameter, inversion
/// in the circle for an arc. An involutive isometry fixing `g`.
pub fn reflect(x: HPoint, g: &Geodesic) -> HPoint {
    match g.kind {
        GeodesicKind::Diameter { angle } => {
            let d = ideal(angle);
            2.0 * x.dot(d) * d - x
        }
        GeodesicKind::Arc { center, radius } => {
            let v = x - center;
            center + (radius * radius / v.norm_sq()) * v
        }
    }
}

/// The closed geodesic ball of radius `rho` about `center`, as a Euclidean
/// disk `(centre, radius)`.
///
/// About the origin the radius is `tanh(ρ/2)`; elsewhere the Möbius
/// translation to `center` moves the two points of that circle on the
/// diameter through `center` to the ends of the image's diameter.
pub fn geodesic_ball(center: HPoint, rho: f64) -> (Point, f64) {
    let e = (0.5 * rho).tanh();
    let s = center.norm();
    if s == 0.0 {
        return (center, e);
    }
    let dir = (1.0 / s) * center;
    let far = (s + e) / (1.0 + s * e);
    let near = (s - e) / (1.0 - s * e);
    (0.5 * (far + near) * dir, 0.5 * (far - near))
}
