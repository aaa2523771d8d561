//! One-dimensional maximisation helpers.
//!
//! The objectives here can jump (a follower switching best responses) so
//! the default route is an exhaustive grid followed by local step-halving
//! around the best grid point. Every evaluated point is a candidate; the
//! best value seen is returned.

use crate::{Error, Result};

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    /// Argmax.
    pub x: f64,
    /// Objective at `x`.
    pub value: f64,
    /// Local step at termination.
    pub step: f64,
}

/// `points` equally spaced values covering `[lo, hi]` inclusive.
///
/// Uses `lo * (1 - u) + hi * u`, so a symmetric range hits `0` exactly at
/// its midpoint.
pub fn linspace(lo: f64, hi: f64, points: usize) -> impl ExactSizeIterator<Item = f64> + Clone {
    (0..points).map(move |i| grid_node(lo, hi, points, i))
}

/// The `i`-th value of [`linspace`].
#[inline]
pub fn grid_node(lo: f64, hi: f64, points: usize, i: usize) -> f64 {
    if i + 1 >= points && points > 1 {
        return hi;
    }
    let u = i as f64 / points.saturating_sub(1).max(1) as f64;
    lo * (1.0 - u) + hi * u
}

/// Grid scan of `f` over `[lo, hi]` followed by `passes` rounds of
/// step-halving around the incumbent. Ties on the grid go to the smaller `x`.
pub fn grid_refine_max<F>(f: F, lo: f64, hi: f64, points: usize, passes: u32) -> Result<Maximum>
where
    F: Fn(f64) -> f64,
{
    if points < 2 {
        return Err(Error::InvalidGrid("need at least two points"));
    }
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::InvalidGrid("range must be finite with lo <= hi"));
    }
    let mut best = Maximum { x: lo, value: f64::NEG_INFINITY, step: 0.0 };
    for x in linspace(lo, hi, points) {
        let v = f(x);
        if v > best.value {
            best.x = x;
            best.value = v;
        }
    }
    let mut step = (hi - lo) / (points - 1) as f64;
    for _ in 0..passes {
        step *= 0.5;
        for cand in [best.x - step, best.x + step] {
            let cand = cand.clamp(lo, hi);
            let v = f(cand);
            if v > best.value {
                best.x = cand;
                best.value = v;
            }
        }
    }
    best.step = step;
    Ok(best)
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<Maximum>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::InvalidGrid("range must be finite with lo <= hi"));
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iter = 0;
    while b - a > tol && iter < max_iter {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
        iter += 1;
    }
    // endpoints are candidates too: the maximiser may sit on the boundary
    let mut best = Maximum { x: 0.5 * (a + b), value: f(0.5 * (a + b)), step: b - a };
    for (x, v) in [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))] {
        if v > best.value {
            best.x = x;
            best.value = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints_and_zero() {
        let v: Vec<f64> = linspace(-0.95, 0.95, 39).collect();
        assert_eq!(v[0], -0.95);
        assert_eq!(v[38], 0.95);
        assert_eq!(v[19], 0.0);
    }

    #[test]
    fn grid_refine_finds_smooth_peak() {
        let m = grid_refine_max(|x| -(x - 0.3141).powi(2), 0.0, 1.0, 11, 50).unwrap();
        assert!((m.x - 0.3141).abs() < 1e-12);
    }

    #[test]
    fn grid_refine_tracks_jump_edge() {
        // increasing up to 0.537, then drops
        let f = |x: f64| if x <= 0.537 { x } else { x - 2.0 };
        let m = grid_refine_max(f, 0.0, 2.0, 101, 45).unwrap();
        assert!((m.x - 0.537).abs() < 1e-10);
        assert!(m.x <= 0.537);
    }

    #[test]
    fn golden_finds_interior_and_boundary() {
        let m = golden_section_max(|x| -(x - 1.5455).powi(2), 0.3, 3.0, 1e-12, 200).unwrap();
        assert!((m.x - 1.5455).abs() < 1e-6);
        let m = golden_section_max(|x| -x, 0.3, 3.0, 1e-12, 200).unwrap();
        assert_eq!(m.x, 0.3);
    }

    #[test]
    fn bad_grids_error() {
        assert!(grid_refine_max(|x| x, 0.0, 1.0, 1, 0).is_err());
        assert!(grid_refine_max(|x| x, 1.0, 0.0, 5, 0).is_err());
    }
}
