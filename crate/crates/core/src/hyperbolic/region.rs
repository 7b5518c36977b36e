use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::model::{cx, geodesic_ball, geodesic_through, hdist, is_ideal, GeodesicKind, Mobius};
use super::HyperbolicError;
use crate::geom::Point;

/// `{z : a|z|² + 2 Re(b̄ z) + c < 0}`: a disk, a disk complement or a
/// halfplane. Möbius maps carry these to the same family, so a region can
/// be evaluated in whichever chart is best conditioned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Form {
    a: f64,
    b: Complex64,
    c: f64,
}

impl Form {
    fn disk(center: Point, radius: f64) -> Self {
        Self {
            a: 1.0,
            b: -cx(center),
            c: center.norm_sq() - radius * radius,
        }
    }

    fn negated(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
        }
    }

    fn value(&self, z: Complex64) -> f64 {
        self.a * z.norm_sqr() + 2.0 * (self.b.conj() * z).re + self.c
    }

    /// The same region in the coordinates `w = chart(z)`.
    fn in_chart(&self, chart: &Mobius) -> Self {
        // f(z) = v* H v with v = (z, 1) and H = [[a, b], [b̄, c]]; pulling
        // back through z = N w gives N* H N up to a positive factor
        let [n11, n12, n21, n22] = chart.inverse().m;
        let h = [
            Complex64::new(self.a, 0.0),
            self.b,
            self.b.conj(),
            Complex64::new(self.c, 0.0),
        ];
        // H N
        let hn = [
            h[0] * n11 + h[1] * n21,
            h[0] * n12 + h[1] * n22,
            h[2] * n11 + h[3] * n21,
            h[2] * n12 + h[3] * n22,
        ];
        let a = n11.conj() * hn[0] + n21.conj() * hn[2];
        let b = n11.conj() * hn[1] + n21.conj() * hn[3];
        let c = n12.conj() * hn[1] + n22.conj() * hn[3];
        let scale = a.re.abs().max(b.norm()).max(c.re.abs());
        let s = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        Self {
            a: a.re * s,
            b: b * s,
            c: c.re * s,
        }
    }
}

/// A region of the Poincaré disk built from geodesic balls, horoballs and
/// geodesic halfplanes. JSON form: `{"type": "gball", "center": [0, 0],
/// "radius": 1}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "lowercase"))]
pub enum HDomain {
    /// The whole disk.
    Plane,
    /// Geodesic ball with hyperbolic `radius`.
    Gball {
        center: [f64; 2],
        radius: f64,
    },
    /// Euclidean disk of `radius` in `(0, 1]` internally tangent to the unit
    /// circle at the ideal point `point`.
    Horoball {
        point: [f64; 2],
        radius: f64,
    },
    /// The side left of the geodesic travelled from `from` to `to`.
    Halfplane {
        from: [f64; 2],
        to: [f64; 2],
    },
    Union {
        parts: Vec<HDomain>,
    },
    Difference {
        base: Box<HDomain>,
        minus: Box<HDomain>,
    },
}

fn p2(a: [f64; 2]) -> Point {
    Point::new(a[0], a[1])
}

impl HDomain {
    pub fn gball(center: Point, radius: f64) -> Self {
        HDomain::Gball {
            center: [center.x, center.y],
            radius,
        }
    }

    pub fn horoball(point: Point, radius: f64) -> Self {
        HDomain::Horoball {
            point: [point.x, point.y],
            radius,
        }
    }

    pub fn halfplane(from: Point, to: Point) -> Self {
        HDomain::Halfplane {
            from: [from.x, from.y],
            to: [to.x, to.y],
        }
    }

    pub fn union(parts: Vec<HDomain>) -> Self {
        HDomain::Union { parts }
    }

    pub fn difference(base: HDomain, minus: HDomain) -> Self {
        HDomain::Difference {
            base: Box::new(base),
            minus: Box::new(minus),
        }
    }

    pub fn complement_of(minus: HDomain) -> Self {
        Self::difference(HDomain::Plane, minus)
    }

    pub fn validate(&self) -> Result<(), HyperbolicError> {
        self.compile(None).map(|_| ())
    }

    pub fn contains(&self, x: Point) -> bool {
        x.norm() < 1.0
            && self
                .compile(None)
                .map(|r| r.contains(cx(x)))
                .unwrap_or(false)
    }

    pub(crate) fn compile(&self, chart: Option<&Mobius>) -> Result<Region, HyperbolicError> {
        let place = |f: Form| match chart {
            Some(m) => f.in_chart(m),
            None => f,
        };
        let bad = HyperbolicError::InvalidDomain;
        Ok(match self {
            HDomain::Plane => Region::Plane,
            HDomain::Gball { center, radius } => {
                let c = p2(*center);
                if !(c.norm() < 1.0) || !(*radius > 0.0) || !radius.is_finite() {
                    return Err(bad(
                        "geodesic ball needs an interior centre and a positive radius",
                    ));
                }
                let (e, r) = geodesic_ball(c, *radius);
                Region::Form(place(Form::disk(e, r)))
            }
            HDomain::Horoball { point, radius } => {
                let z = p2(*point);
                if !is_ideal(z) || !(*radius > 0.0 && *radius <= 1.0) {
                    return Err(bad("horoball needs an ideal point and a radius in (0, 1]"));
                }
                let z = z.normalized();
                Region::Form(place(Form::disk((1.0 - radius) * z, *radius)))
            }
            HDomain::Halfplane { from, to } => {
                let g = geodesic_through(p2(*from), p2(*to))
                    .map_err(|_| bad("halfplane needs two distinct points"))?;
                let left = match g.kind {
                    GeodesicKind::Diameter { angle } => {
                        let d = super::model::ideal(angle);
                        // -cross(d, z) < 0
                        Form {
                            a: 0.0,
                            b: Complex64::new(0.5 * d.y, -0.5 * d.x),
                            c: 0.0,
                        }
                    }
                    GeodesicKind::Arc { center, radius } => {
                        let f = Form::disk(center, radius);
                        if g.side(center) > 0.0 {
                            f
                        } else {
                            f.negated()
                        }
                    }
                };
                Region::Form(place(left))
            }
            HDomain::Union { parts } => Region::Union(
                parts
                    .iter()
                    .map(|p| p.compile(chart))
                    .collect::<Result<_, _>>()?,
            ),
            HDomain::Difference { base, minus } => Region::Difference(
                Box::new(base.compile(chart)?),
                Box::new(minus.compile(chart)?),
            ),
        })
    }
}

/// An [`HDomain`] with its primitives evaluated in one chart.
#[derive(Debug, Clone)]
pub(crate) enum Region {
    Plane,
    Form(Form),
    Union(Vec<Region>),
    Difference(Box<Region>, Box<Region>),
}

impl Region {
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Region::Plane => true,
            Region::Form(f) => f.value(z) < 0.0,
            Region::Union(parts) => parts.iter().any(|p| p.contains(z)),
            Region::Difference(base, minus) => base.contains(z) && !minus.contains(z),
        }
    }
}

/// Cell-centred raster of an [`HDomain`] over `[-1, 1]²`; a cell is inside
/// when its centre is in the open disk and in the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct HRaster {
    pub h: f64,
    /// Cells per side.
    pub n: usize,
    pub mask: Vec<bool>,
}

impl HRaster {
    pub fn new(domain: &HDomain, h: f64) -> Result<Self, HyperbolicError> {
        if !(h > 0.0 && h <= 0.25) {
            return Err(HyperbolicError::InvalidDomain(
                "raster spacing must lie in (0, 1/4]",
            ));
        }
        let region = domain.compile(None)?;
        let n = (2.0 / h).ceil() as usize;
        let h = 2.0 / n as f64;
        let mut r = Self {
            h,
            n,
            mask: vec![false; n * n],
        };
        for k in 0..n * n {
            let x = r.center(k);
            r.mask[k] = x.norm() < 1.0 && region.contains(cx(x));
        }
        Ok(r)
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn center(&self, k: usize) -> Point {
        let (i, j) = (k % self.n, k / self.n);
        Point::new(
            -1.0 + (i as f64 + 0.5) * self.h,
            -1.0 + (j as f64 + 0.5) * self.h,
        )
    }

    /// Cells whose centre lies in the open disk.
    pub fn in_disk(&self, k: usize) -> bool {
        self.center(k).norm() < 1.0
    }

    pub fn inside_cells(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.mask[k]).collect()
    }

    fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let i = ((p.x + 1.0) / self.h).floor();
        let j = ((p.y + 1.0) / self.h).floor();
        let n = self.n as f64;
        (i >= 0.0 && j >= 0.0 && i < n && j < n).then_some((i as usize, j as usize))
    }

    /// Inside cell within one cell of `p`?
    pub fn contains_within_cell(&self, p: Point) -> bool {
        let Some((i, j)) = self.cell_of(p) else {
            return false;
        };
        for jj in j.saturating_sub(1)..=(j + 1).min(self.n - 1) {
            for ii in i.saturating_sub(1)..=(i + 1).min(self.n - 1) {
                if self.mask[jj * self.n + ii] {
                    return true;
                }
            }
        }
        false
    }

    /// Largest geodesic ball in the raster: its hyperbolic radius and
    /// centre cell. The boundary is taken at midpoints between inside cells
    /// and their outside neighbours in the disk; cells against the rim do
    /// not bound the domain, so a domain reaching the rim everywhere reports
    /// an infinite radius.
    pub fn inradius(&self) -> Option<(f64, Point)> {
        let n = self.n;
        let mut wall = Vec::new();
        for k in self.inside_cells() {
            let (i, j) = (k % n, k / n);
            let nbrs = [
                (i > 0).then(|| k - 1),
                (i + 1 < n).then(|| k + 1),
                (j > 0).then(|| k - n),
                (j + 1 < n).then(|| k + n),
            ];
            for m in nbrs.into_iter().flatten() {
                if !self.mask[m] && self.in_disk(m) {
                    wall.push(0.5 * (self.center(k) + self.center(m)));
                }
            }
        }
        let mut best: Option<(f64, Point)> = None;
        for k in self.inside_cells() {
            let x = self.center(k);
            let d = wall
                .iter()
                .map(|&w| hdist(x, w))
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(b, _)| d > b) {
                best = Some((d, x));
            }
        }
        best
    }
}
