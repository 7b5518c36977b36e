use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::{label_components, PlanarDomain};
use crate::geom::Point;

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Boundary tangents within this angle of the sweep direction count as an
/// orthogonal crossing of the moving line.
pub const ORTHOGONALITY_DEG: f64 = 2.0;

/// Representative of `angle` in `[0, 2π)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let a = angle - TAU * (angle / TAU).floor();
    // the subtraction can round up to exactly 2π
    if !(0.0..TAU).contains(&a) {
        0.0
    } else {
        a
    }
}

/// The line `{x : x·ν = offset}` with unit normal `ν = (cos angle, sin angle)`.
/// Its positive halfplane is `x·ν > offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Line {
    pub angle: f64,
    pub offset: f64,
}

impl Line {
    pub fn new(angle: f64, offset: f64) -> Self {
        let a = wrap_angle(angle);
        Self { angle: a, offset }
    }

    /// Line through `p` with normal angle `angle`.
    pub fn through(p: Point, angle: f64) -> Self {
        let n = Point::from_polar(1.0, angle);
        Self::new(angle, p.dot(n))
    }

    pub fn normal(&self) -> Point {
        Point::from_polar(1.0, self.angle)
    }

    pub fn signed_distance(&self, p: Point) -> f64 {
        p.dot(self.normal()) - self.offset
    }

    pub fn reflect(&self, p: Point) -> Point {
        p - (2.0 * self.signed_distance(p)) * self.normal()
    }

    /// Same line with the opposite normal.
    pub fn flipped(&self) -> Self {
        Self::new(self.angle + core::f64::consts::PI, -self.offset)
    }

    /// The same point set, irrespective of orientation, up to `tol`.
    pub fn same_as(&self, other: &Line, tol: f64) -> bool {
        let d = |a: &Line, b: &Line| {
            let da = wrap_angle(a.angle - b.angle);
            da.min(TAU - da) <= tol && (a.offset - b.offset).abs() <= tol
        };
        d(self, other) || d(&self.flipped(), other)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfplaneComponent {
    /// Flat cell indices, increasing.
    pub cells: Vec<usize>,
    /// Largest signed distance of a cell centre to the line.
    pub height: f64,
    /// Touches the grid border, which a padded raster never does.
    pub unbounded: bool,
}

/// Connected pieces of the domain in the positive halfplane of `line`.
pub fn halfplane_components(domain: &PlanarDomain, line: &Line) -> Vec<HalfplaneComponent> {
    let g = &domain.grid;
    let member = |k: usize| domain.mask[k] && line.signed_distance(g.center(k)) > 0.0;
    let (labels, count) = label_components(g, member);
    let mut comps: Vec<HalfplaneComponent> = (0..count)
        .map(|_| HalfplaneComponent {
            cells: Vec::new(),
            height: f64::NEG_INFINITY,
            unbounded: false,
        })
        .collect();
    for (k, &l) in labels.iter().enumerate() {
        if l == usize::MAX {
            continue;
        }
        let c = &mut comps[l];
        c.cells.push(k);
        c.height = c.height.max(line.signed_distance(g.center(k)));
        c.unbounded |= g.on_border(k);
    }
    comps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SweepEvent {
    /// Reached the area-bisecting line with every reflection contained.
    Balanced,
    /// The reflected cap left the domain away from the line.
    InteriorTangency,
    /// The reflected cap left the domain while the line crossed the boundary
    /// orthogonally.
    Orthogonal,
}

/// Outcome of one moving-plane sweep. Exactly one terminal event is
/// recorded; `reflection_contained`, `orthogonal_hit` and
/// `symmetry_candidate` restate it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    /// Normal angle of the moving line, pointing in the sweep direction.
    pub direction: f64,
    /// Offset at which the line first meets an inside cell.
    pub t_enter: f64,
    /// Offset of the terminal event.
    pub t_first: f64,
    /// A reflected cap point that fell outside the domain.
    pub touch_point: Option<Point>,
    /// Cap cells (behind the line) at the terminal offset.
    pub component: Vec<usize>,
    pub reflection_contained: bool,
    pub orthogonal_hit: bool,
    pub symmetry_candidate: Option<Line>,
    pub event: SweepEvent,
    /// Offsets examined, in order.
    pub offsets_checked: usize,
}

/// Does the line at `offset` cross the boundary with a tangent within the
/// orthogonality threshold of the normal?
fn orthogonal_crossing(domain: &PlanarDomain, normal: Point, offset: f64) -> bool {
    let cos_tol = (ORTHOGONALITY_DEG.to_radians()).cos();
    for l in domain.loops() {
        for (a, b) in l.edges() {
            let sa = a.dot(normal) - offset;
            let sb = b.dot(normal) - offset;
            if (sa <= 0.0) != (sb <= 0.0) {
                let t = (b - a).normalized();
                if t.dot(normal).abs() >= cos_tol {
                    return true;
                }
            }
        }
    }
    false
}

/// Moving-plane sweep in direction `direction` (the normal angle of the
/// line). The line starts behind the domain and advances by `h/2`; the cap
/// is everything behind it. The sweep stops at the first offset whose
/// reflected cap is not contained in the mask up to one cell, or at the
/// area-bisecting offset.
///
/// A `Balanced` outcome only says the raster is consistent with a mirror
/// symmetry across the reported line; it proves nothing.
pub fn moving_plane_sweep(domain: &PlanarDomain, direction: f64) -> SweepReport {
    let g = &domain.grid;
    let normal = Point::from_polar(1.0, direction);
    let cells = domain.inside_cells();
    let mut proj: Vec<(f64, usize)> = cells
        .iter()
        .map(|&k| (g.center(k).dot(normal), k))
        .collect();
    proj.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = proj.len();
    let median = if m % 2 == 1 {
        proj[m / 2].0
    } else {
        0.5 * (proj[m / 2 - 1].0 + proj[m / 2].0)
    };
    let t_enter = proj[0].0;
    let step = 0.5 * domain.h;

    let mut offsets = Vec::new();
    let mut t = t_enter + step;
    while t < median {
        offsets.push(t);
        t += step;
    }
    offsets.push(median);

    let cap_at = |t: f64| -> usize { proj.partition_point(|&(s, _)| s < t) };
    for (i, &t) in offsets.iter().enumerate() {
        let line = Line::new(direction, t);
        let ncap = cap_at(t);
        let escaped = proj[..ncap]
            .iter()
            .map(|&(_, k)| line.reflect(g.center(k)))
            .find(|&q| !domain.contains_within_cell(q));
        if let Some(q) = escaped {
            let orth = orthogonal_crossing(domain, normal, t);
            let mut comp: Vec<usize> = proj[..ncap].iter().map(|&(_, k)| k).collect();
            comp.sort_unstable();
            return SweepReport {
                direction: line.angle,
                t_enter,
                t_first: t,
                touch_point: Some(q),
                component: comp,
                reflection_contained: false,
                orthogonal_hit: orth,
                symmetry_candidate: None,
                event: if orth {
                    SweepEvent::Orthogonal
                } else {
                    SweepEvent::InteriorTangency
                },
                offsets_checked: i + 1,
            };
        }
    }
    let line = Line::new(direction, median);
    let mut comp: Vec<usize> = proj[..cap_at(median)].iter().map(|&(_, k)| k).collect();
    comp.sort_unstable();
    SweepReport {
        direction: line.angle,
        t_enter,
        t_first: median,
        touch_point: None,
        component: comp,
        reflection_contained: true,
        orthogonal_hit: false,
        symmetry_candidate: Some(line),
        event: SweepEvent::Balanced,
        offsets_checked: offsets.len(),
    }
}
