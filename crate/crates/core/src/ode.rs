//! Dormand–Prince 5(4) integrator with Hairer's continuous extension.
//!
//! Only what the radial shooting needs: fixed-size real states, relative
//! error control in the max norm, and a per-step dense interpolant that can
//! be kept around after the step is accepted.

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Quartic interpolant over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            let r = &self.r;
            *o = r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StepError {
    Underflow { t: f64 },
}

/// Stepper state. The right-hand side is passed to every call so the
/// integrator itself owns no closures.
pub(crate) struct Dopri5<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub h: f64,
    rtol: f64,
    k1: [f64; N],
    pub evaluations: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn norm_inf<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F>(f: &mut F, t0: f64, y0: [f64; N], h0: f64, rtol: f64) -> Self
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let k1 = f(t0, &y0);
        Self {
            t: t0,
            y: y0,
            h: h0,
            rtol,
            k1,
            evaluations: 1,
        }
    }

    /// Advance by one accepted step, never going past `t_end`.
    pub fn step<F>(&mut self, f: &mut F, t_end: f64) -> Result<DenseSegment<N>, StepError>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        loop {
            let mut h = self.h;
            let clipped = self.t + h >= t_end;
            if clipped {
                h = t_end - self.t;
            }
            if h <= 1e-14 * self.t.abs().max(1e-300) {
                return Err(StepError::Underflow { t: self.t });
            }
            let (t, y, k1) = (self.t, self.y, self.k1);
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                t + C4 * h,
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y1 = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(t + h, &y1);
            self.evaluations += 6;

            let mut err = [0.0; N];
            for i in 0..N {
                err[i] = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            let scale = self.rtol * norm_inf(&y).max(norm_inf(&y1)) + 1e-300;
            let ratio = norm_inf(&err) / scale;
            if !ratio.is_finite() {
                self.h = h * FAC_MIN;
                continue;
            }
            let fac = if ratio == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * ratio.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };
            if ratio <= 1.0 {
                let mut r = [[0.0; N]; 5];
                for i in 0..N {
                    let ydiff = y1[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    r[0][i] = y[i];
                    r[1][i] = ydiff;
                    r[2][i] = bspl;
                    r[3][i] = ydiff - h * k7[i] - bspl;
                    r[4][i] = h
                        * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i]);
                }
                self.t = if clipped { t_end } else { t + h };
                self.y = y1;
                self.k1 = k7;
                // keep the proposed size when the step was only shortened to hit t_end
                self.h = if clipped {
                    self.h.max(h * fac)
                } else {
                    h * fac
                };
                return Ok(DenseSegment { t0: t, h, r });
            }
            self.h = h * fac.min(1.0);
        }
    }
}
