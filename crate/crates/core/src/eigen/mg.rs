//! Aggregation multigrid for weighted graph Laplacians on a masked lattice.
//!
//! Only used as a preconditioner: one symmetric V-cycle approximates the
//! inverse of the discrete Dirichlet Laplacian, which turns the Rayleigh
//! descent into a Sobolev-gradient descent.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

const NONE: u32 = u32::MAX;

/// Problems at or below this size are factored densely.
const COARSEST: usize = 96;

struct Level {
    n: usize,
    coords: Vec<(u32, u32)>,
    diag: Vec<f64>,
    nbr: Vec<[u32; 4]>,
    w: Vec<[f64; 4]>,
    /// Coarse unknown of each unknown; empty on the coarsest level.
    parent: Vec<u32>,
}

impl Level {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for c in 0..self.n {
            let mut s = self.diag[c] * x[c];
            for k in 0..4 {
                let nb = self.nbr[c][k];
                if nb != NONE {
                    s -= self.w[c][k] * x[nb as usize];
                }
            }
            out[c] = s;
        }
    }

    fn gs_sweep(&self, x: &mut [f64], b: &[f64], forward: bool) {
        let mut step = |c: usize| {
            let mut s = b[c];
            for k in 0..4 {
                let nb = self.nbr[c][k];
                if nb != NONE {
                    s += self.w[c][k] * x[nb as usize];
                }
            }
            x[c] = s / self.diag[c];
        };
        if forward {
            (0..self.n).for_each(&mut step);
        } else {
            (0..self.n).rev().for_each(&mut step);
        }
    }
}

/// Dense Cholesky factor of the coarsest operator.
struct DenseChol {
    n: usize,
    l: Vec<f64>,
}

impl DenseChol {
    fn new(level: &Level) -> Self {
        let n = level.n;
        let mut a = vec![0.0; n * n];
        for c in 0..n {
            a[c * n + c] = level.diag[c];
            for k in 0..4 {
                let nb = level.nbr[c][k];
                if nb != NONE {
                    a[c * n + nb as usize] -= level.w[c][k];
                }
            }
        }
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= a[j * n + k] * a[j * n + k];
            }
            let d = d.max(1e-300).sqrt();
            a[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= a[i * n + k] * a[j * n + k];
                }
                a[i * n + j] = s / d;
            }
        }
        Self { n, l: a }
    }

    fn solve(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        let l = &self.l;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[i * n + k] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
    }
}

pub(crate) struct Multigrid {
    levels: Vec<Level>,
    coarse: DenseChol,
}

impl Multigrid {
    /// `coords` are lattice positions of the unknowns; `edge(c, k)` gives the
    /// neighbour unknown (or `None` for a Dirichlet neighbour) and the edge
    /// weight in direction `k` (east, west, north, south).
    pub fn new(
        coords: Vec<(u32, u32)>,
        edge: impl Fn(usize, usize) -> (Option<usize>, f64),
    ) -> Self {
        let n = coords.len();
        let mut diag = vec![0.0; n];
        let mut nbr = vec![[NONE; 4]; n];
        let mut w = vec![[0.0; 4]; n];
        for c in 0..n {
            for k in 0..4 {
                let (nb, wt) = edge(c, k);
                diag[c] += wt;
                if let Some(nb) = nb {
                    nbr[c][k] = nb as u32;
                    w[c][k] = wt;
                }
            }
        }
        let mut levels = vec![Level {
            n,
            coords,
            diag,
            nbr,
            w,
            parent: Vec::new(),
        }];
        while levels.last().unwrap().n > COARSEST {
            let fine = levels.last_mut().unwrap();
            let coarse = coarsen(fine);
            if coarse.n == fine.n {
                break;
            }
            levels.push(coarse);
        }
        let coarse = DenseChol::new(levels.last().unwrap());
        Self { levels, coarse }
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.levels[0].n
    }

    #[cfg(test)]
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.levels[0].apply(x, out);
    }

    /// One symmetric V-cycle from a zero initial guess: `x ≈ A⁻¹ b`.
    pub fn vcycle(&self, b: &[f64], x: &mut [f64]) {
        self.cycle(0, b, x);
    }

    fn cycle(&self, lvl: usize, b: &[f64], x: &mut [f64]) {
        let level = &self.levels[lvl];
        if lvl + 1 == self.levels.len() {
            self.coarse.solve(b, x);
            return;
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        level.gs_sweep(x, b, true);
        let mut r = vec![0.0; level.n];
        level.apply(x, &mut r);
        for c in 0..level.n {
            r[c] = b[c] - r[c];
        }
        let nc = self.levels[lvl + 1].n;
        let mut rc = vec![0.0; nc];
        for c in 0..level.n {
            rc[level.parent[c] as usize] += r[c];
        }
        let mut xc = vec![0.0; nc];
        self.cycle(lvl + 1, &rc, &mut xc);
        for c in 0..level.n {
            x[c] += xc[level.parent[c] as usize];
        }
        level.gs_sweep(x, b, false);
    }
}

/// 2×2 aggregation with the Galerkin coarse operator `PᵀAP`.
fn coarsen(fine: &mut Level) -> Level {
    let (mut mx, mut my) = (0u32, 0u32);
    for &(i, j) in &fine.coords {
        mx = mx.max(i / 2 + 1);
        my = my.max(j / 2 + 1);
    }
    let (mx, my) = (mx as usize, my as usize);
    let mut id = vec![NONE; mx * my];
    let mut coords = Vec::new();
    fine.parent = vec![0; fine.n];
    for c in 0..fine.n {
        let (i, j) = fine.coords[c];
        let slot = (j / 2) as usize * mx + (i / 2) as usize;
        if id[slot] == NONE {
            id[slot] = coords.len() as u32;
            coords.push((i / 2, j / 2));
        }
        fine.parent[c] = id[slot];
    }
    // unknowns were created in fine scan order, which is not coarse scan
    // order; renumber so Gauss-Seidel stays lexicographic
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by_key(|&k| (coords[k].1, coords[k].0));
    let mut rank = vec![0u32; coords.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r as u32;
    }
    for p in fine.parent.iter_mut() {
        *p = rank[*p as usize];
    }
    let coords: Vec<(u32, u32)> = order.iter().map(|&k| coords[k]).collect();
    let n = coords.len();

    let mut diag = vec![0.0; n];
    let mut nbr = vec![[NONE; 4]; n];
    let mut w = vec![[0.0; 4]; n];
    for c in 0..fine.n {
        let pc = fine.parent[c] as usize;
        diag[pc] += fine.diag[c];
        for k in 0..4 {
            let nb = fine.nbr[c][k];
            if nb == NONE {
                continue;
            }
            let pn = fine.parent[nb as usize] as usize;
            let wt = fine.w[c][k];
            if pn == pc {
                diag[pc] -= wt;
            } else {
                let dir = direction(coords[pc], coords[pn]);
                nbr[pc][dir] = pn as u32;
                w[pc][dir] += wt;
            }
        }
    }
    Level {
        n,
        coords,
        diag,
        nbr,
        w,
        parent: Vec::new(),
    }
}

fn direction(a: (u32, u32), b: (u32, u32)) -> usize {
    if b.0 > a.0 {
        0
    } else if b.0 < a.0 {
        1
    } else if b.1 > a.1 {
        2
    } else {
        3
    }
}
