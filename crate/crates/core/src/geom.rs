//! Planar points and simple polygons.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn empty() -> Self {
        Self {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(mut self, o: BBox) -> BBox {
        self.include(o.min);
        self.include(o.max);
        self
    }

    pub fn is_empty(&self) -> bool {
        !(self.min.x <= self.max.x && self.min.y <= self.max.y)
    }
}

/// Closed polygon; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area, positive for counterclockwise orientation.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn centroid(&self) -> Point {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for (a, b) in self.edges() {
            let c = a.cross(b);
            a2 += c;
            cx += (a.x + b.x) * c;
            cy += (a.y + b.y) * c;
        }
        Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    /// Central second moments `[∫x², ∫xy, ∫y²] / A` about the centroid.
    pub fn second_moments(&self) -> [f64; 3] {
        let (mut xx, mut xy, mut yy, mut a2) = (0.0, 0.0, 0.0, 0.0);
        let c0 = self.centroid();
        for (a, b) in self.edges() {
            let (a, b) = (a - c0, b - c0);
            let c = a.cross(b);
            a2 += c;
            xx += c * (a.x * a.x + a.x * b.x + b.x * b.x);
            yy += c * (a.y * a.y + a.y * b.y + b.y * b.y);
            xy += c * (a.x * b.y + 2.0 * a.x * a.y + 2.0 * b.x * b.y + b.x * a.y);
        }
        let area = 0.5 * a2;
        [xx / 12.0 / area, xy / 24.0 / area, yy / 12.0 / area]
    }

    /// `(μ₁ - μ₂) / (μ₁ + μ₂)` for the principal second moments; zero for
    /// shapes with the inertia of a disk.
    pub fn anisotropy(&self) -> f64 {
        let [xx, xy, yy] = self.second_moments();
        let tr = xx + yy;
        let gap = ((xx - yy).powi(2) + 4.0 * xy * xy).sqrt();
        gap / tr
    }

    pub fn bbox(&self) -> BBox {
        let mut b = BBox::empty();
        for &v in &self.vertices {
            b.include(v);
        }
        b
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> Polygon {
        let mut v = self.vertices.clone();
        v.reverse();
        Polygon::new(v)
    }

    pub fn to_ccw(self) -> Polygon {
        if self.is_ccw() {
            self
        } else {
            self.reversed()
        }
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Polygon {
        Polygon::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// 4πA/P², equal to 1 only for the disk.
    pub fn roundness(&self) -> f64 {
        let p = self.perimeter();
        4.0 * core::f64::consts::PI * self.area() / (p * p)
    }

    /// Even-odd point containment.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Unsigned distance from `p` to the polygon outline.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Negative inside, positive outside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let d = self.boundary_distance(p);
        if self.contains(p) {
            -d
        } else {
            d
        }
    }

    /// No two non-adjacent edges intersect and no vertex repeats.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let v = &self.vertices;
        // sort edges by min x so the pair loop can stop early
        let mut order: Vec<usize> = (0..n).collect();
        let lo = |i: usize| v[i].x.min(v[(i + 1) % n].x);
        let hi = |i: usize| v[i].x.max(v[(i + 1) % n].x);
        order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)));
        for (k, &i) in order.iter().enumerate() {
            let xi = hi(i);
            for &j in &order[k + 1..] {
                if lo(j) > xi {
                    break;
                }
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                let (a, b) = (v[i], v[(i + 1) % n]);
                let (c, d) = (v[j], v[(j + 1) % n]);
                if adjacent {
                    if n > 3 && (a == d && b == c) {
                        return false;
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// `count` points spaced uniformly in arclength, starting at vertex 0.
    pub fn resample(&self, count: usize) -> Polygon {
        let samples = self.arclength_samples(count);
        Polygon::new(samples.into_iter().map(|s| s.point).collect())
    }

    /// Uniform arclength samples with the edge tangent at each sample.
    pub fn arclength_samples(&self, count: usize) -> Vec<ArcSample> {
        let total = self.perimeter();
        let mut out = Vec::with_capacity(count);
        if count == 0 || total <= 0.0 {
            return out;
        }
        let step = total / count as f64;
        let mut edges = self.edges().filter(|(a, b)| a != b);
        let Some((mut a, mut b)) = edges.next() else {
            return out;
        };
        let mut edge_start = 0.0;
        let mut edge_len = a.dist(b);
        for k in 0..count {
            let s = k as f64 * step;
            while s > edge_start + edge_len {
                match edges.next() {
                    Some((na, nb)) => {
                        edge_start += edge_len;
                        a = na;
                        b = nb;
                        edge_len = a.dist(b);
                    }
                    None => break,
                }
            }
            let f = ((s - edge_start) / edge_len).clamp(0.0, 1.0);
            let tangent = (b - a).normalized();
            out.push(ArcSample {
                arclength: s,
                point: a + f * (b - a),
                tangent,
            });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSample {
    pub arclength: f64,
    pub point: Point,
    pub tangent: Point,
}

pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + t * ab)
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}
