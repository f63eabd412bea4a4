use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use crate::error::{Error, Result};

/// `(parameter angle, planar value)`.
pub type WindingSample = (f64, [f64; 2]);

/// Values with smaller norm count as hitting the origin.
pub const ORIGIN_TOL: f64 = 1e-12;

fn signed_step(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot)
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Winding number about the origin of a closed planar curve sampled at
/// strictly increasing angles covering `[0, 2π)`.
///
/// Consecutive values (including last to first) must turn by less than
/// `π/2`; otherwise the sampling cannot determine the degree and
/// [`Error::InsufficientResolution`] is returned.
pub fn winding_number(samples: &[WindingSample]) -> Result<i64> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument("winding number needs at least 3 samples".into()));
    }
    for (i, w) in samples.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) {
            return Err(Error::InvalidArgument(format!("angles not increasing at sample {}", i + 1)));
        }
    }
    let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
    if first < 0.0 || last >= TAU {
        return Err(Error::InvalidArgument("angles must lie in [0, 2π)".into()));
    }
    for (i, (_, v)) in samples.iter().enumerate() {
        if !(norm(*v) >= ORIGIN_TOL) {
            return Err(Error::CurveHitsOrigin { index: i });
        }
    }
    let mut total = 0.0;
    for i in 0..samples.len() {
        let a = samples[i].1;
        let b = samples[(i + 1) % samples.len()].1;
        let step = signed_step(a, b);
        if step.abs() >= FRAC_PI_2 {
            return Err(Error::InsufficientResolution { index: i, step: step.abs() });
        }
        total += step;
    }
    Ok((total / TAU).round() as i64)
}

/// Samples `curve` on `[0, 2π)`, bisecting every interval whose turn
/// exceeds `π/4` until none does, then returns the winding number and the
/// number of samples used.
pub fn adaptive_winding<F>(curve: F, initial: usize, budget: usize) -> Result<(i64, usize)>
where
    F: Fn(f64) -> [f64; 2],
{
    let initial = initial.max(8);
    let mut samples: Vec<WindingSample> = (0..initial)
        .map(|i| {
            let t = TAU * i as f64 / initial as f64;
            (t, curve(t))
        })
        .collect();
    loop {
        if let Some(i) = samples.iter().position(|(_, v)| !(norm(*v) >= ORIGIN_TOL)) {
            return Err(Error::CurveHitsOrigin { index: i });
        }
        let len = samples.len();
        let mut refined = Vec::with_capacity(2 * len);
        let mut changed = false;
        for i in 0..len {
            let (ta, va) = samples[i];
            let (tb, vb) = if i + 1 < len { samples[i + 1] } else { (TAU + samples[0].0, samples[0].1) };
            refined.push((ta, va));
            if signed_step(va, vb).abs() > FRAC_PI_4 {
                let tm = 0.5 * (ta + tb);
                if tm - ta < 1e-14 {
                    return Err(Error::ResolutionExhausted { samples: len });
                }
                refined.push((tm, curve(tm)));
                changed = true;
            }
        }
        samples = refined;
        if !changed {
            break;
        }
        if samples.len() > budget {
            return Err(Error::ResolutionExhausted { samples: samples.len() });
        }
    }
    let w = winding_number(&samples)?;
    Ok((w, samples.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample<F: Fn(f64) -> [f64; 2]>(m: usize, f: F) -> Vec<WindingSample> {
        (0..m)
            .map(|i| {
                let t = TAU * i as f64 / m as f64;
                (t, f(t))
            })
            .collect()
    }

    /// Independent oracle: unwrap the polar angle with `atan2` differences
    /// reduced into `(-π, π]`.
    fn unwrap_oracle(samples: &[WindingSample]) -> i64 {
        let angles: Vec<f64> = samples.iter().map(|(_, v)| v[1].atan2(v[0])).collect();
        let mut total = 0.0;
        for i in 0..angles.len() {
            let mut d = angles[(i + 1) % angles.len()] - angles[i];
            while d > PI {
                d -= TAU;
            }
            while d <= -PI {
                d += TAU;
            }
            total += d;
        }
        (total / TAU).round() as i64
    }

    #[test]
    fn identity_curve() {
        let s = sample(16, |t| [t.cos(), t.sin()]);
        assert_eq!(winding_number(&s).unwrap(), 1);
    }

    #[test]
    fn constant_curve() {
        let s = sample(16, |_| [1.0, 0.0]);
        assert_eq!(winding_number(&s).unwrap(), 0);
    }

    #[test]
    fn double_cover() {
        let s = sample(32, |t| [(2.0 * t).cos(), (2.0 * t).sin()]);
        assert_eq!(unwrap_oracle(&s), 2);
        assert_eq!(winding_number(&s).unwrap(), 2);
    }

    #[test]
    fn reversed_orientation() {
        let s = sample(16, |t| [t.cos(), -t.sin()]);
        assert_eq!(winding_number(&s).unwrap(), -1);
    }

    #[test]
    fn coarse_sampling_rejected() {
        let s = sample(4, |t| [(3.0 * t).cos(), (3.0 * t).sin()]);
        assert!(matches!(winding_number(&s), Err(Error::InsufficientResolution { .. })));
    }

    #[test]
    fn origin_rejected() {
        let mut s = sample(16, |t| [t.cos(), t.sin()]);
        s[3].1 = [0.0, 1e-13];
        assert!(matches!(winding_number(&s), Err(Error::CurveHitsOrigin { index: 3 })));
    }

    #[test]
    fn adaptive_refines_until_contract_holds() {
        let (w, n) = adaptive_winding(|t| [(5.0 * t).cos(), (5.0 * t).sin()], 8, 10_000).unwrap();
        assert_eq!(w, 5);
        assert!(n > 20);
        // off-center circle that still surrounds the origin
        let (w, _) = adaptive_winding(|t| [0.9 + t.cos(), t.sin()], 8, 10_000).unwrap();
        assert_eq!(w, 1);
        let (w, _) = adaptive_winding(|t| [1.1 + t.cos(), t.sin()], 8, 10_000).unwrap();
        assert_eq!(w, 0);
    }

    #[test]
    fn adaptive_budget() {
        let r = adaptive_winding(|t| [(403.0 * t).cos(), (403.0 * t).sin()], 8, 100);
        assert!(matches!(r, Err(Error::ResolutionExhausted { .. })));
    }
}
