use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use crate::geom::{BBox, Point, Polygon};

use super::DomainError;

/// Declarative planar region, the input of [`rasterize`](super::rasterize).
///
/// Coordinates are plain `[x, y]` pairs so the JSON form stays compact:
/// `{"type": "disk", "center": [0, 0], "radius": 1}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "lowercase"))]
pub enum DomainSpec {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Semi-axes `a` along the rotated x axis and `b` along the rotated y axis.
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        angle: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Union {
        parts: Vec<DomainSpec>,
    },
    Difference {
        base: Box<DomainSpec>,
        minus: Box<DomainSpec>,
    },
}

fn pt(a: [f64; 2]) -> Point {
    Point::new(a[0], a[1])
}

impl DomainSpec {
    pub fn disk(center: Point, radius: f64) -> Self {
        DomainSpec::Disk {
            center: [center.x, center.y],
            radius,
        }
    }

    pub fn ellipse(center: Point, a: f64, b: f64) -> Self {
        DomainSpec::Ellipse {
            center: [center.x, center.y],
            a,
            b,
            angle: 0.0,
        }
    }

    pub fn polygon(vertices: &[Point]) -> Self {
        DomainSpec::Polygon {
            vertices: vertices.iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn from_polygon(poly: &Polygon) -> Self {
        Self::polygon(&poly.vertices)
    }

    pub fn union(parts: Vec<DomainSpec>) -> Self {
        DomainSpec::Union { parts }
    }

    pub fn difference(base: DomainSpec, minus: DomainSpec) -> Self {
        DomainSpec::Difference {
            base: Box::new(base),
            minus: Box::new(minus),
        }
    }

    /// Rectangle `[x0, x1] × [y0, y1]` as a counterclockwise polygon.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::polygon(&[
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    /// Rectangle of half-length `half_len` capped by two half-disks of radius `r`.
    pub fn stadium(half_len: f64, r: f64) -> Self {
        Self::union(alloc::vec![
            Self::rectangle(-half_len, -r, half_len, r),
            Self::disk(Point::new(-half_len, 0.0), r),
            Self::disk(Point::new(half_len, 0.0), r),
        ])
    }

    /// Apply the rigid motion `x ↦ R(angle) x + shift`.
    pub fn transformed(&self, angle: f64, shift: Point) -> Self {
        let f = |c: [f64; 2]| {
            let q = pt(c).rotated(angle) + shift;
            [q.x, q.y]
        };
        match self {
            DomainSpec::Disk { center, radius } => DomainSpec::Disk {
                center: f(*center),
                radius: *radius,
            },
            DomainSpec::Ellipse {
                center,
                a,
                b,
                angle: a0,
            } => DomainSpec::Ellipse {
                center: f(*center),
                a: *a,
                b: *b,
                angle: a0 + angle,
            },
            DomainSpec::Polygon { vertices } => DomainSpec::Polygon {
                vertices: vertices.iter().map(|&v| f(v)).collect(),
            },
            DomainSpec::Union { parts } => DomainSpec::Union {
                parts: parts.iter().map(|s| s.transformed(angle, shift)).collect(),
            },
            DomainSpec::Difference { base, minus } => DomainSpec::Difference {
                base: Box::new(base.transformed(angle, shift)),
                minus: Box::new(minus.transformed(angle, shift)),
            },
        }
    }

    pub(crate) fn validate(&self) -> Result<(), DomainError> {
        let finite = |c: &[f64; 2]| c[0].is_finite() && c[1].is_finite();
        match self {
            DomainSpec::Disk { center, radius } => {
                if !finite(center) || !(radius.is_finite() && *radius > 0.0) {
                    return Err(DomainError::DegenerateSpec("disk radius must be positive"));
                }
            }
            DomainSpec::Ellipse {
                center,
                a,
                b,
                angle,
            } => {
                if !finite(center)
                    || !angle.is_finite()
                    || !(a.is_finite() && *a > 0.0 && b.is_finite() && *b > 0.0)
                {
                    return Err(DomainError::DegenerateSpec("ellipse axes must be positive"));
                }
            }
            DomainSpec::Polygon { vertices } => {
                if vertices.len() < 3 || !vertices.iter().all(finite) {
                    return Err(DomainError::DegenerateSpec(
                        "polygon needs at least three finite vertices",
                    ));
                }
                let poly = Polygon::new(vertices.iter().map(|&v| pt(v)).collect());
                if !poly.is_simple() || poly.area() == 0.0 {
                    return Err(DomainError::DegenerateSpec("polygon is not simple"));
                }
            }
            DomainSpec::Union { parts } => {
                if parts.is_empty() {
                    return Err(DomainError::DegenerateSpec("empty union"));
                }
                for s in parts {
                    s.validate()?;
                }
            }
            DomainSpec::Difference { base, minus } => {
                base.validate()?;
                minus.validate()?;
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            DomainSpec::Disk { center, radius } => (p - pt(*center)).norm_sq() < radius * radius,
            DomainSpec::Ellipse {
                center,
                a,
                b,
                angle,
            } => {
                let q = (p - pt(*center)).rotated(-angle);
                (q.x / a).powi(2) + (q.y / b).powi(2) < 1.0
            }
            DomainSpec::Polygon { vertices } => {
                Polygon::new(vertices.iter().map(|&v| pt(v)).collect()).contains(p)
            }
            DomainSpec::Union { parts } => parts.iter().any(|s| s.contains(p)),
            DomainSpec::Difference { base, minus } => base.contains(p) && !minus.contains(p),
        }
    }

    /// Continuous function, negative exactly inside, with a nonzero gradient
    /// across the boundary. It is a true signed distance only for disks and
    /// polygons; contouring needs no more than that.
    pub fn level(&self, p: Point) -> f64 {
        match self {
            DomainSpec::Disk { center, radius } => (p - pt(*center)).norm() - radius,
            DomainSpec::Ellipse {
                center,
                a,
                b,
                angle,
            } => {
                let q = (p - pt(*center)).rotated(-angle);
                ((q.x / a).hypot(q.y / b) - 1.0) * a.min(*b)
            }
            DomainSpec::Polygon { vertices } => {
                Polygon::new(vertices.iter().map(|&v| pt(v)).collect()).signed_distance(p)
            }
            DomainSpec::Union { parts } => parts
                .iter()
                .map(|s| s.level(p))
                .fold(f64::INFINITY, f64::min),
            DomainSpec::Difference { base, minus } => base.level(p).max(-minus.level(p)),
        }
    }

    pub fn bbox(&self) -> BBox {
        match self {
            DomainSpec::Disk { center, radius } => BBox {
                min: pt(*center) - Point::new(*radius, *radius),
                max: pt(*center) + Point::new(*radius, *radius),
            },
            DomainSpec::Ellipse {
                center,
                a,
                b,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let ex = (a * c).hypot(b * s);
                let ey = (a * s).hypot(b * c);
                BBox {
                    min: pt(*center) - Point::new(ex, ey),
                    max: pt(*center) + Point::new(ex, ey),
                }
            }
            DomainSpec::Polygon { vertices } => {
                let mut bb = BBox::empty();
                for &v in vertices {
                    bb.include(pt(v));
                }
                bb
            }
            DomainSpec::Union { parts } => parts
                .iter()
                .map(|s| s.bbox())
                .fold(BBox::empty(), BBox::union),
            DomainSpec::Difference { base, .. } => base.bbox(),
        }
    }

    /// Closed-form boundary when one exists: a counterclockwise polygon that
    /// contains the region, with vertex spacing below `spacing`.
    pub(crate) fn direct_boundary(&self, spacing: f64) -> Option<Polygon> {
        match self {
            DomainSpec::Disk { center, radius } => {
                Some(circumscribed(pt(*center), *radius, *radius, 0.0, spacing))
            }
            DomainSpec::Ellipse {
                center,
                a,
                b,
                angle,
            } => Some(circumscribed(pt(*center), *a, *b, *angle, spacing)),
            DomainSpec::Polygon { vertices } => {
                Some(Polygon::new(vertices.iter().map(|&v| pt(v)).collect()).to_ccw())
            }
            _ => None,
        }
    }
}

/// Affine image of a regular polygon circumscribed about the unit circle.
/// Every edge is tangent to the ellipse, so the polygon contains it.
fn circumscribed(c: Point, a: f64, b: f64, angle: f64, spacing: f64) -> Polygon {
    let tau = 2.0 * core::f64::consts::PI;
    let n = ((tau * a.max(b) / spacing).ceil() as usize).max(64);
    let stretch = 1.0 / (core::f64::consts::PI / n as f64).cos();
    let verts = (0..n)
        .map(|k| {
            let th = tau * (k as f64 + 0.5) / n as f64;
            let q = Point::new(a * stretch * th.cos(), b * stretch * th.sin());
            c + q.rotated(angle)
        })
        .collect();
    Polygon::new(verts)
}
