//! CountSketch-style heavy hitter: `rows x width` signed bucket table,
//! per-coordinate estimates by median over rows, sparse decode keeping the
//! largest entries.

use super::seed::SketchSeed;
use super::state::{HhParams, LinearSketchState, SketchKind};

const TAG_BUCKET: u64 = 0x2001;
const TAG_SIGN: u64 = 0x2002;

pub fn l2hh_build(n: usize, eta: f64, seed: SketchSeed) -> LinearSketchState {
    let width = ((8.0 / (eta * eta)).ceil() as u32).clamp(4, 1 << 20).next_power_of_two();
    let rows = 9;
    LinearSketchState::new(SketchKind::L2Hh(HhParams { rows, width, eta }), seed, n)
}

#[inline]
pub(crate) fn bucket(seed: &SketchSeed, row: u32, width: u32, i: usize) -> usize {
    seed.child3(TAG_BUCKET, row as u64, 0).bucket_for(i as u64, width as usize)
}

#[inline]
pub(crate) fn sign(seed: &SketchSeed, row: u32, i: usize) -> f64 {
    seed.child3(TAG_SIGN, row as u64, 0).sign_for(i as u64)
}

pub(super) fn accumulate(p: &HhParams, state: &mut LinearSketchState, i: usize, delta: f64) {
    for r in 0..p.rows {
        let b = bucket(&state.seed, r, p.width, i);
        let s = sign(&state.seed, r, i);
        state.measurements[r as usize * p.width as usize + b] += s * delta;
    }
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Point estimate of coordinate `i`.
pub fn l2hh_estimate_at(state: &LinearSketchState, i: usize) -> f64 {
    let p = match &state.kind {
        SketchKind::L2Hh(p) => p,
        _ => panic!("not an l2 heavy hitter sketch"),
    };
    let mut vals: Vec<f64> = (0..p.rows)
        .map(|r| {
            let b = bucket(&state.seed, r, p.width, i);
            sign(&state.seed, r, i) * state.measurements[r as usize * p.width as usize + b]
        })
        .collect();
    median(&mut vals)
}

/// Sparse decode: estimates every coordinate and keeps the largest
/// `O(eta^-2)` nonzero entries, sorted by coordinate.
pub fn l2hh_decode(state: &LinearSketchState) -> Vec<(usize, f64)> {
    let p = match &state.kind {
        SketchKind::L2Hh(p) => p.clone(),
        _ => panic!("not an l2 heavy hitter sketch"),
    };
    let keep = ((4.0 / (p.eta * p.eta)).ceil() as usize).min(state.n);
    let mut est: Vec<(usize, f64)> = (0..state.n)
        .map(|i| (i, l2hh_estimate_at(state, i)))
        .filter(|&(_, v)| v != 0.0)
        .collect();
    est.sort_by(|a, b| b.1.abs().partial_cmp(&a.1.abs()).unwrap().then(a.0.cmp(&b.0)));
    est.truncate(keep);
    est.sort_by_key(|&(i, _)| i);
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::state::sketch_update;

    fn dense(state: &LinearSketchState) -> Vec<f64> {
        let mut x = vec![0.0; state.n];
        for (i, v) in l2hh_decode(state) {
            x[i] = v;
        }
        x
    }

    #[test]
    fn unit_vector() {
        let mut s = l2hh_build(64, 0.1, SketchSeed::new(21, 0));
        sketch_update(&mut s, 0, 1.0);
        let x = dense(&s);
        assert!((0.9..=1.1).contains(&x[0]), "x0 = {}", x[0]);
    }

    #[test]
    fn zero_vector_decodes_empty() {
        let s = l2hh_build(64, 0.1, SketchSeed::new(21, 0));
        assert!(l2hh_decode(&s).is_empty());
    }

    #[test]
    fn spike_over_noise() {
        // x = (10, 1, ..., 1) over N = 100 at eta = 0.25:
        // the spike estimate lands within 0.25 * ||x||_2 of 10.
        let norm = (100.0f64 + 99.0).sqrt();
        let mut ok = 0;
        let trials = 50;
        for t in 0..trials {
            let mut s = l2hh_build(100, 0.25, SketchSeed::new(400 + t, 3));
            sketch_update(&mut s, 0, 10.0);
            for i in 1..100 {
                sketch_update(&mut s, i, 1.0);
            }
            let est = l2hh_estimate_at(&s, 0);
            if (est - 10.0).abs() <= 0.25 * norm {
                ok += 1;
            }
        }
        assert!(ok >= trials - 1, "ok = {ok}/{trials}");
    }

    #[test]
    fn infinity_error_bound_holds_mostly() {
        // eta = 0.1, N = 256: the bound holds on at least 99% of trials.
        let n = 256;
        let eta = 0.1;
        let mut ok = 0;
        let trials = 300;
        for t in 0..trials as u64 {
            let seed = SketchSeed::new(7000 + t, 0);
            let data = SketchSeed::new(9000 + t, 1);
            let mut s = l2hh_build(n, eta, seed);
            let mut x = vec![0.0; n];
            for (i, xi) in x.iter_mut().enumerate() {
                // Dyadic values in [-2, 2).
                *xi = (data.unit_for(i as u64) * 4.0 - 2.0).floor() / 1.0
                    + (data.unit_for(1000 + i as u64) * 256.0).floor() / 256.0;
                sketch_update(&mut s, i, *xi);
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dec = dense(&s);
            let worst = x
                .iter()
                .zip(dec.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if worst <= eta * norm {
                ok += 1;
            }
        }
        assert!(ok * 100 >= trials * 99, "ok = {ok}/{trials}");
    }
}
