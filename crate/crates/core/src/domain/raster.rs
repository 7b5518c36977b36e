use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use crate::geom::{BBox, Point, Polygon};

use super::{DomainError, DomainSpec};

/// Cells padded around the bounding box, so every inside cell has an
/// outside neighbour and the difference stencils never leave the grid.
pub const PAD_CELLS: usize = 3;

/// Minimum inradius measured in cells.
pub const MIN_INRADIUS_CELLS: f64 = 16.0;

/// Cell-centred lattice: cell `(i, j)` has centre
/// `origin + ((i + ½) h, (j + ½) h)` and flat index `j * nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: Point,
}

impl Grid {
    /// Grid aligned to the global lattice `hℤ²`, covering `bb` with padding.
    pub fn covering(bb: BBox, h: f64, pad: usize) -> Grid {
        let i0 = (bb.min.x / h).floor() as i64 - pad as i64;
        let j0 = (bb.min.y / h).floor() as i64 - pad as i64;
        let i1 = (bb.max.x / h).ceil() as i64 + pad as i64;
        let j1 = (bb.max.y / h).ceil() as i64 + pad as i64;
        Grid {
            nx: (i1 - i0) as usize,
            ny: (j1 - j0) as usize,
            h,
            origin: Point::new(i0 as f64 * h, j0 as f64 * h),
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn center(&self, idx: usize) -> Point {
        let (i, j) = self.coords(idx);
        self.center_ij(i, j)
    }

    pub fn center_ij(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.h,
            self.origin.y + (j as f64 + 0.5) * self.h,
        )
    }

    /// Cell containing `p`, if it lies on the grid.
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let fi = ((p.x - self.origin.x) / self.h).floor();
        let fj = ((p.y - self.origin.y) / self.h).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }

    pub fn on_border(&self, idx: usize) -> bool {
        let (i, j) = self.coords(idx);
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Edge neighbours of a cell.
    pub fn neighbours4(&self, idx: usize) -> impl Iterator<Item = usize> {
        let (i, j) = self.coords(idx);
        let (nx, ny) = (self.nx, self.ny);
        let cand = [
            (i > 0).then(|| idx - 1),
            (i + 1 < nx).then(|| idx + 1),
            (j > 0).then(|| idx - nx),
            (j + 1 < ny).then(|| idx + nx),
        ];
        cand.into_iter().flatten()
    }
}

/// Rasterized planar domain: outer boundary polygon, optional holes and the
/// cell mask.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarDomain {
    /// Outer boundary, simple and counterclockwise.
    pub boundary: Polygon,
    /// Boundaries of holes, clockwise.
    pub holes: Vec<Polygon>,
    pub grid: Grid,
    pub mask: Vec<bool>,
    pub h: f64,
}

impl PlanarDomain {
    pub fn inside_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Area of the inside cells.
    pub fn mask_area(&self) -> f64 {
        self.inside_count() as f64 * self.h * self.h
    }

    /// Flat indices of the inside cells, in increasing order.
    pub fn inside_cells(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&k| self.mask[k]).collect()
    }

    pub fn is_inside_point(&self, p: Point) -> bool {
        match self.grid.cell_of(p) {
            Some((i, j)) => self.mask[self.grid.index(i, j)],
            None => false,
        }
    }

    /// Containment up to one cell: the cell containing `p` or one of its
    /// eight neighbours is inside.
    pub fn contains_within_cell(&self, p: Point) -> bool {
        let Some((i, j)) = self.grid.cell_of(p) else {
            return false;
        };
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        for jj in j.saturating_sub(1)..=(j + 1).min(ny - 1) {
            for ii in i.saturating_sub(1)..=(i + 1).min(nx - 1) {
                if self.mask[self.grid.index(ii, jj)] {
                    return true;
                }
            }
        }
        false
    }

    /// Every boundary loop: the outer one first, then the holes.
    pub fn loops(&self) -> impl Iterator<Item = &Polygon> {
        core::iter::once(&self.boundary).chain(self.holes.iter())
    }

    /// Distance from `p` to the nearest boundary loop.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.loops()
            .map(|l| l.boundary_distance(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Rasterize `spec` on the lattice `hℤ²`.
pub fn rasterize(spec: &DomainSpec, h: f64) -> Result<PlanarDomain, DomainError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(DomainError::ResolutionTooCoarse {
            h,
            inradius: f64::NAN,
        });
    }
    spec.validate()?;
    let bb = spec.bbox();
    let grid = Grid::covering(bb, h, PAD_CELLS);

    let (boundary, holes, exact_polygon) = match spec.direct_boundary(0.5 * h) {
        Some(poly) => {
            let exact = matches!(spec, DomainSpec::Polygon { .. });
            (poly, Vec::new(), exact)
        }
        None => {
            let loops = contour(spec, bb, 0.5 * h);
            let (outer, holes): (Vec<Polygon>, Vec<Polygon>) =
                loops.into_iter().partition(|l| l.is_ccw());
            if outer.len() != 1 {
                return Err(DomainError::DegenerateSpec(
                    "region does not have exactly one outer boundary",
                ));
            }
            (outer.into_iter().next().unwrap(), holes, false)
        }
    };

    let mut mask = fill_even_odd(&grid, core::iter::once(&boundary).chain(holes.iter()));
    if !exact_polygon {
        for (k, m) in mask.iter_mut().enumerate() {
            if *m {
                *m = spec.contains(grid.center(k));
            }
        }
    }
    if !mask.iter().any(|&m| m) {
        return Err(DomainError::DegenerateSpec("no cell centre lies inside"));
    }
    drop_slivers(&grid, &mut mask)?;
    let domain = PlanarDomain {
        boundary,
        holes,
        grid,
        mask,
        h,
    };
    let r = super::inradius(&domain).radius;
    if r < MIN_INRADIUS_CELLS * h {
        return Err(DomainError::ResolutionTooCoarse { h, inradius: r });
    }
    Ok(domain)
}

/// Components with fewer cells than this are raster slivers: acute vertices
/// leave runs of cells that touch the body only diagonally.
pub const SLIVER_CELLS: usize = 16;

/// Keep the single substantial edge-connected component and clear slivers.
fn drop_slivers(grid: &Grid, mask: &mut [bool]) -> Result<(), DomainError> {
    let (labels, count) = label_components(grid, |k| mask[k]);
    if count == 1 {
        return Ok(());
    }
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        if l != usize::MAX {
            sizes[l] += 1;
        }
    }
    if sizes.iter().filter(|&&s| s >= SLIVER_CELLS).count() != 1 {
        return Err(DomainError::DegenerateSpec("interior is not connected"));
    }
    let mut dropped = 0;
    for (m, &l) in mask.iter_mut().zip(&labels) {
        if l != usize::MAX && sizes[l] < SLIVER_CELLS {
            *m = false;
            dropped += 1;
        }
    }
    log::debug!("dropped {dropped} sliver cells");
    Ok(())
}

/// Rasterize a simple polygon directly.
pub fn rasterize_polygon(poly: &Polygon, h: f64) -> Result<PlanarDomain, DomainError> {
    rasterize(&DomainSpec::from_polygon(poly), h)
}

/// Scanline fill of cell centres with the even-odd rule over all loops.
pub(crate) fn fill_even_odd<'a>(
    grid: &Grid,
    loops: impl Iterator<Item = &'a Polygon> + Clone,
) -> Vec<bool> {
    let mut mask = vec![false; grid.len()];
    let mut xs: Vec<f64> = Vec::new();
    for j in 0..grid.ny {
        let yc = grid.origin.y + (j as f64 + 0.5) * grid.h;
        xs.clear();
        for l in loops.clone() {
            for (a, b) in l.edges() {
                if (a.y > yc) != (b.y > yc) {
                    xs.push(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            // centres strictly between the two crossings
            let lo = ((pair[0] - grid.origin.x) / grid.h - 0.5).floor() + 1.0;
            let hi = ((pair[1] - grid.origin.x) / grid.h - 0.5).ceil() - 1.0;
            let lo = lo.max(0.0) as usize;
            if hi < 0.0 {
                continue;
            }
            let hi = (hi as usize).min(grid.nx - 1);
            for i in lo..=hi {
                mask[grid.index(i, j)] = true;
            }
        }
    }
    mask
}

/// Edge-connected components of the cells where `member` holds. Labels are
/// `usize::MAX` outside; components are numbered in scan order.
pub fn label_components(grid: &Grid, member: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; grid.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..grid.len() {
        if label[start] != usize::MAX || !member(start) {
            continue;
        }
        label[start] = count;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for nb in grid.neighbours4(c) {
                if label[nb] == usize::MAX && member(nb) {
                    label[nb] = count;
                    queue.push_back(nb);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Marching squares on the zero set of `spec.level`, sampled on a vertex
/// lattice of spacing `s`. Loops keep the inside on their left, so outer
/// boundaries come out counterclockwise and holes clockwise.
fn contour(spec: &DomainSpec, bb: BBox, s: f64) -> Vec<Polygon> {
    let g = Grid::covering(bb, s, 2);
    // vertex lattice has one more point per axis than the cell lattice
    let (vx, vy) = (g.nx + 1, g.ny + 1);
    let vpos =
        |i: usize, j: usize| Point::new(g.origin.x + i as f64 * s, g.origin.y + j as f64 * s);
    let mut f = vec![0.0; vx * vy];
    for j in 0..vy {
        for i in 0..vx {
            let v = spec.level(vpos(i, j));
            // a vertex exactly on the curve counts as outside
            f[j * vx + i] = if v == 0.0 { f64::MIN_POSITIVE } else { v };
        }
    }
    let inside = |i: usize, j: usize| f[j * vx + i] < 0.0;

    // lattice edge ids: 2*(j*vx+i) is the edge (i,j)->(i+1,j),
    // 2*(j*vx+i)+1 is the edge (i,j)->(i,j+1)
    let h_edge = |i: usize, j: usize| 2 * (j * vx + i);
    let v_edge = |i: usize, j: usize| 2 * (j * vx + i) + 1;
    let crossing = |e: usize| -> Point {
        let base = e / 2;
        let (i, j) = (base % vx, base / vx);
        let (i2, j2) = if e.is_multiple_of(2) {
            (i + 1, j)
        } else {
            (i, j + 1)
        };
        let (fa, fb) = (f[j * vx + i], f[j2 * vx + i2]);
        let t = fa / (fa - fb);
        let a = vpos(i, j);
        a + t * (vpos(i2, j2) - a)
    };

    let mut next = vec![usize::MAX; 2 * vx * vy];
    for j in 0..g.ny {
        for i in 0..g.nx {
            // corners counterclockwise: bl, br, tr, tl
            let c = [
                inside(i, j),
                inside(i + 1, j),
                inside(i + 1, j + 1),
                inside(i, j + 1),
            ];
            // edge k joins corner k to corner k+1
            let edges = [
                h_edge(i, j),
                v_edge(i + 1, j),
                h_edge(i, j + 1),
                v_edge(i, j),
            ];
            let exits: Vec<usize> = (0..4).filter(|&k| c[k] && !c[(k + 1) % 4]).collect();
            match exits.len() {
                0 => {}
                1 => {
                    let k = exits[0];
                    let entry = (0..4).find(|&m| !c[m] && c[(m + 1) % 4]).unwrap();
                    next[edges[k]] = edges[entry];
                }
                _ => {
                    let centre = 0.25
                        * (f[j * vx + i]
                            + f[j * vx + i + 1]
                            + f[(j + 1) * vx + i + 1]
                            + f[(j + 1) * vx + i]);
                    for &k in &exits {
                        let entry = if centre < 0.0 {
                            (k + 1) % 4
                        } else {
                            (k + 3) % 4
                        };
                        next[edges[k]] = edges[entry];
                    }
                }
            }
        }
    }

    let mut loops = Vec::new();
    let mut seen = vec![false; next.len()];
    for start in 0..next.len() {
        if next[start] == usize::MAX || seen[start] {
            continue;
        }
        let mut pts: Vec<Point> = Vec::new();
        let mut e = start;
        while !seen[e] && next[e] != usize::MAX {
            seen[e] = true;
            let p = crossing(e);
            if pts.last().is_none_or(|q: &Point| q.dist(p) > 1e-9 * s) {
                pts.push(p);
            }
            e = next[e];
        }
        if pts.len() > 2 && pts[0].dist(*pts.last().unwrap()) <= 1e-9 * s {
            pts.pop();
        }
        if pts.len() >= 3 {
            loops.push(Polygon::new(pts));
        }
    }
    loops
}
