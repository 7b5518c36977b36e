use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::model::{cx, geodesic_through, pt, Geodesic, Mobius};
use super::{HDomain, HRaster, HyperbolicError};
use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HSweepEvent {
    /// Every reflected cap stayed in the domain all the way to `γ`.
    Balanced,
    /// A reflected cap left the domain before the sweep reached `γ`.
    InteriorTangency,
    /// The domain lies wholly beyond `γ` from this side.
    Missed,
}

/// One pass of the sweep, from one end of the axis toward `γ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HSweepPass {
    /// Parameter of the first leaf that meets the domain.
    pub t_enter: f64,
    /// Parameter of the terminal event.
    pub t_stop: f64,
    pub event: HSweepEvent,
    /// A reflected cap point that fell outside the domain.
    pub touch_point: Option<Point>,
    pub offsets_checked: usize,
}

/// Outcome of [`hyperbolic_sweep`]. Leaf parameters are arclength along
/// `axis` from the foot of `γ`, so `γ` itself is the leaf `t = 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HSweepReport {
    pub gamma: Geodesic,
    /// The geodesic through the foot of `γ` crossing it orthogonally,
    /// oriented from the right of `γ` to its left.
    pub axis: Geodesic,
    /// The pass from the right of `γ` (negative parameters).
    pub forward: HSweepPass,
    /// The pass from the left, when the domain leaves that end free.
    pub backward: Option<HSweepPass>,
    /// `γ`, when both passes reach it with every reflection contained.
    pub symmetry_candidate: Option<Geodesic>,
}

impl HSweepReport {
    /// The first leaf touching the domain, `t₀`.
    pub fn first_tangency(&self) -> f64 {
        self.forward.t_enter
    }

    /// The event that ended the sweep. A tangency in either pass wins; a
    /// pass that never met the domain only decides when nothing stopped.
    pub fn terminal_event(&self) -> HSweepEvent {
        let events = [
            Some(self.forward.event),
            self.backward.as_ref().map(|b| b.event),
        ];
        let any = |e: HSweepEvent| events.contains(&Some(e));
        if any(HSweepEvent::InteriorTangency) {
            HSweepEvent::InteriorTangency
        } else if any(HSweepEvent::Missed) {
            HSweepEvent::Missed
        } else {
            HSweepEvent::Balanced
        }
    }
}

/// One pass in a chart sending the start of the axis to `0`, its far end to
/// `∞` and the foot of `γ` to `i`. The leaves are then `|w| = eᵗ` and the
/// reflection in leaf `t` is `w ↦ e²ᵗ / w̄`.
fn pass(raster: &HRaster, chart: &Mobius, step: f64) -> Result<HSweepPass, HyperbolicError> {
    let back = chart.inverse();
    let leaf = |k: usize| chart.apply(cx(raster.center(k))).norm().ln();
    let mut start: Option<(f64, usize)> = None;
    let mut cells: Vec<(f64, Complex64)> = Vec::new();
    for k in 0..raster.len() {
        if !raster.in_disk(k) {
            continue;
        }
        let t = leaf(k);
        if start.is_none_or(|(s, _)| t < s) {
            start = Some((t, k));
        }
        if raster.mask[k] {
            cells.push((t, chart.apply(cx(raster.center(k)))));
        }
    }
    if let Some((_, k)) = start {
        if raster.mask[k] {
            return Err(HyperbolicError::SweepFromInside);
        }
    }
    if cells.is_empty() {
        return Err(HyperbolicError::InvalidDomain(
            "no inside cells at this resolution",
        ));
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let t_enter = cells[0].0;
    if t_enter >= 0.0 {
        return Ok(HSweepPass {
            t_enter,
            t_stop: t_enter,
            event: HSweepEvent::Missed,
            touch_point: None,
            offsets_checked: 0,
        });
    }
    let mut offsets = Vec::new();
    let mut t = t_enter + step;
    while t < 0.0 {
        offsets.push(t);
        t += step;
    }
    offsets.push(0.0);
    for (i, &t) in offsets.iter().enumerate() {
        let ncap = cells.partition_point(|c| c.0 < t);
        let e2 = (2.0 * t).exp();
        let escaped = cells[..ncap]
            .iter()
            .map(|&(_, w)| pt(back.apply(e2 / w.conj())))
            .find(|&q| !raster.contains_within_cell(q));
        if let Some(q) = escaped {
            return Ok(HSweepPass {
                t_enter,
                t_stop: t,
                event: HSweepEvent::InteriorTangency,
                touch_point: Some(q),
                offsets_checked: i + 1,
            });
        }
    }
    Ok(HSweepPass {
        t_enter,
        t_stop: 0.0,
        event: HSweepEvent::Balanced,
        touch_point: None,
        offsets_checked: offsets.len(),
    })
}

/// Moving-geodesic sweep toward `gamma` across the leaves orthogonal to the
/// axis through its foot, rasterized at spacing `h`.
///
/// Each pass starts at an end of the axis, finds the first leaf touching
/// the raster and then reflects everything behind the current leaf through
/// it, stopping when a reflected cell lands outside the raster (by more than
/// a cell) or at `γ`. The pass from the left of `γ` is skipped when the
/// domain reaches that end of the axis; the one from the right must start
/// outside. A symmetry candidate means only that the raster is consistent
/// with reflection symmetry in `γ`.
pub fn hyperbolic_sweep(
    domain: &HDomain,
    gamma: &Geodesic,
    h: f64,
) -> Result<HSweepReport, HyperbolicError> {
    let raster = HRaster::new(domain, h)?;
    let foot = gamma.foot();
    let t = gamma.tangent_at_foot();
    // the axis is the diameter through the foot, normal to γ there
    let right = Point::new(t.y, -t.x);
    let axis = geodesic_through(right, -right)?;
    let step = raster.h / (1.0 - foot.norm_sq());
    let forward = pass(&raster, &Mobius::chart(right, -right, foot), step)?;
    let backward = match pass(&raster, &Mobius::chart(-right, right, foot), step) {
        Ok(p) => Some(HSweepPass {
            t_enter: -p.t_enter,
            t_stop: -p.t_stop,
            ..p
        }),
        Err(HyperbolicError::SweepFromInside) => None,
        Err(e) => return Err(e),
    };
    let symmetric = forward.event == HSweepEvent::Balanced
        && backward
            .as_ref()
            .is_some_and(|b| b.event == HSweepEvent::Balanced);
    Ok(HSweepReport {
        gamma: *gamma,
        axis,
        forward,
        backward,
        symmetry_candidate: symmetric.then_some(*gamma),
    })
}
