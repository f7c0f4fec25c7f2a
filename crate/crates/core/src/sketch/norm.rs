//! Norm estimator: random-sign rows; the root-mean-square of the row values
//! concentrates around the Euclidean norm of the input.

use super::seed::SketchSeed;
use super::state::{LinearSketchState, NormParams, SketchKind};

const TAG_SIGN: u64 = 0x3001;

pub fn l2norm_build(n: usize, delta: f64, seed: SketchSeed) -> LinearSketchState {
    let rows = ((4.0 / (delta * delta)).ceil() as u32).clamp(16, 1 << 20);
    LinearSketchState::new(SketchKind::L2Norm(NormParams { rows, delta }), seed, n)
}

/// Variant with an explicit row count (used inside larger sketches where the
/// caller owns the accuracy budget).
pub fn l2norm_build_rows(n: usize, rows: u32, delta: f64, seed: SketchSeed) -> LinearSketchState {
    LinearSketchState::new(SketchKind::L2Norm(NormParams { rows, delta }), seed, n)
}

pub(super) fn accumulate(p: &NormParams, state: &mut LinearSketchState, i: usize, delta: f64) {
    for r in 0..p.rows {
        let s = state.seed.child3(TAG_SIGN, r as u64, 0).sign_for(i as u64);
        state.measurements[r as usize] += s * delta;
    }
}

pub fn l2norm_estimate(state: &LinearSketchState) -> f64 {
    let p = match &state.kind {
        SketchKind::L2Norm(p) => p,
        _ => panic!("not an l2 norm sketch"),
    };
    let ss: f64 = state.measurements.iter().map(|v| v * v).sum();
    (ss / p.rows as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::state::sketch_update;

    #[test]
    fn zero_and_singleton() {
        let s = l2norm_build(32, 0.01, SketchSeed::new(1, 1));
        assert_eq!(l2norm_estimate(&s), 0.0);
        let mut s = l2norm_build(32, 0.01, SketchSeed::new(1, 1));
        sketch_update(&mut s, 0, 3.0);
        let b = l2norm_estimate(&s);
        assert!((2.97..=3.03).contains(&b), "estimate {b}");
    }

    #[test]
    fn concentration_on_random_vectors() {
        // N = 1000, delta = 0.05, 100 trials: at least 95 within the bound.
        let n = 1000;
        let delta = 0.05;
        let mut ok = 0;
        for t in 0..100u64 {
            let data = SketchSeed::new(31 + t, 9);
            let mut s = l2norm_build(n, delta, SketchSeed::new(700 + t, 2));
            let mut ss = 0.0;
            for i in 0..n {
                let v = (data.unit_for(i as u64) * 512.0).floor() / 256.0 - 1.0;
                ss += v * v;
                sketch_update(&mut s, i, v);
            }
            let norm = ss.sqrt();
            let b = l2norm_estimate(&s);
            if b >= norm / (1.0 + delta) && b <= norm * (1.0 + delta) {
                ok += 1;
            }
        }
        assert!(ok >= 95, "ok = {ok}");
    }
}
