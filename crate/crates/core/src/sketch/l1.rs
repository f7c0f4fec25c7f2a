//! Proportional sampler with weight estimates, precision-sampling style:
//! coordinates are scaled by independent exponential draws, the maximum of
//! the scaled vector is recovered from a signed bucket table, and a second
//! independent table cross-validates the value estimate. The argmax of
//! `x_i / t_i` over exponential `t_i` lands on `i` with probability exactly
//! `x_i / ||x||_1`, so the sampling law is inherited rather than approximated.

use super::hh::median;
use super::seed::SketchSeed;
use super::state::{L1Params, LinearSketchState, SampleResult, SketchKind};

const TAG_SCALE: u64 = 0x4001;
const TAG_BUCKET: u64 = 0x4002;
const TAG_SIGN: u64 = 0x4003;

pub fn l1_build(
    n: usize,
    eps: f64,
    delta1: f64,
    _delta2: f64,
    seed: SketchSeed,
) -> LinearSketchState {
    let reps = ((1.0 / delta1.clamp(1e-9, 0.5)).log2().ceil() as u32).clamp(2, 16);
    let rows = 7;
    let width = (4 * n.clamp(4, 512) as u32).next_power_of_two();
    LinearSketchState::new(SketchKind::L1(L1Params { reps, rows, width, eps }), seed, n)
}

/// Strictly positive dyadic uniform, safe for `ln`.
#[inline]
fn positive_unit(seed: &SketchSeed, x: u64) -> f64 {
    (((seed.hash(x) >> 11) | 1) as f64) * (1.0 / (1u64 << 53) as f64)
}

/// Exponential scale for coordinate `i` in repetition `rep`.
#[inline]
pub(crate) fn exp_scale(seed: &SketchSeed, tag: u64, rep: u64, i: usize) -> f64 {
    -positive_unit(&seed.child3(TAG_SCALE, tag, rep), i as u64).ln()
}

#[inline]
fn table_cell(
    seed: &SketchSeed,
    rep: u32,
    table: u32,
    row: u32,
    width: u32,
    i: usize,
) -> (usize, f64) {
    let hseed = seed.child3(TAG_BUCKET, (rep * 2 + table) as u64, row as u64);
    let sseed = seed.child3(TAG_SIGN, (rep * 2 + table) as u64, row as u64);
    (hseed.bucket_for(i as u64, width as usize), sseed.sign_for(i as u64))
}

pub(super) fn accumulate(p: &L1Params, state: &mut LinearSketchState, i: usize, delta: f64) {
    let per_table = p.rows as usize * p.width as usize;
    for rep in 0..p.reps {
        let z = delta / exp_scale(&state.seed, 0, rep as u64, i);
        let base = rep as usize * 2 * per_table;
        for table in 0..2 {
            for row in 0..p.rows {
                let (b, s) = table_cell(&state.seed, rep, table, row, p.width, i);
                state.measurements
                    [base + table as usize * per_table + row as usize * p.width as usize + b] +=
                    s * z;
            }
        }
    }
}

fn estimate(
    state: &LinearSketchState,
    p: &L1Params,
    rep: u32,
    table: u32,
    i: usize,
) -> f64 {
    let per_table = p.rows as usize * p.width as usize;
    let base = rep as usize * 2 * per_table + table as usize * per_table;
    let mut vals: Vec<f64> = (0..p.rows)
        .map(|row| {
            let (b, s) = table_cell(&state.seed, rep, table, row, p.width, i);
            s * state.measurements[base + row as usize * p.width as usize + b]
        })
        .collect();
    median(&mut vals)
}

/// Samples an index roughly proportional to `|x_i|` and reports a one-sided
/// `(1+eps)` overestimate of `|x_i|`. Intended for nonnegative vectors.
pub fn l1_sample(state: &LinearSketchState) -> SampleResult {
    let p = match &state.kind {
        SketchKind::L1(p) => p.clone(),
        _ => panic!("not an l1 sketch"),
    };
    if state.is_zero() {
        return SampleResult::NoSupport;
    }
    for rep in 0..p.reps {
        // Winner by the first table.
        let mut winner = usize::MAX;
        let mut best = 0.0f64;
        for i in 0..state.n {
            let e = estimate(state, &p, rep, 0, i).abs();
            if e > best {
                best = e;
                winner = i;
            }
        }
        if winner == usize::MAX {
            continue;
        }
        let a = estimate(state, &p, rep, 0, winner).abs();
        let b = estimate(state, &p, rep, 1, winner).abs();
        if a == 0.0 || b == 0.0 || (a - b).abs() > p.eps / 4.0 * a.min(b) {
            continue;
        }
        let z = 0.5 * (a + b);
        let x = z * exp_scale(&state.seed, 0, rep as u64, winner) * (1.0 + p.eps / 2.0);
        return SampleResult::Found { index: winner, weight_estimate: Some(x) };
    }
    SampleResult::Fail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::state::sketch_update;

    #[test]
    fn singleton_with_estimate() {
        let eps = 0.25;
        let mut s = l1_build(4, eps, 0.01, 0.01, SketchSeed::new(3, 0));
        sketch_update(&mut s, 1, 5.0);
        match l1_sample(&s) {
            SampleResult::Found { index, weight_estimate: Some(w) } => {
                assert_eq!(index, 1);
                assert!((5.0..=5.0 * (1.0 + eps)).contains(&w), "estimate {w}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn frequency_of_first(weights: &[f64], trials: u64) -> f64 {
        let mut first = 0u64;
        let mut found = 0u64;
        for t in 0..trials {
            let mut s = l1_build(weights.len(), 0.25, 0.01, 0.01, SketchSeed::new(5000 + t, 1));
            for (i, &w) in weights.iter().enumerate() {
                sketch_update(&mut s, i, w);
            }
            if let SampleResult::Found { index, .. } = l1_sample(&s) {
                found += 1;
                if index == 0 {
                    first += 1;
                }
            }
        }
        assert!(found as f64 >= 0.99 * trials as f64, "found only {found}/{trials}");
        first as f64 / found as f64
    }

    #[test]
    fn even_split_frequency() {
        let f = frequency_of_first(&[1.0, 1.0], 10_000);
        assert!((0.45..=0.55).contains(&f), "frequency {f}");
    }

    #[test]
    fn three_to_one_frequency() {
        let f = frequency_of_first(&[3.0, 1.0], 10_000);
        assert!((0.70..=0.80).contains(&f), "frequency {f}");
    }

    #[test]
    fn estimates_bracket_truth() {
        // Estimates stay within [x, (1+eps) x] across trials.
        let eps = 0.25;
        let weights = [2.0, 7.0, 1.0, 4.0];
        for t in 0..500u64 {
            let mut s = l1_build(4, eps, 0.01, 0.01, SketchSeed::new(100 + t, 2));
            for (i, &w) in weights.iter().enumerate() {
                sketch_update(&mut s, i, w);
            }
            if let SampleResult::Found { index, weight_estimate: Some(w) } = l1_sample(&s) {
                let x = weights[index];
                assert!(w >= x * 0.999 && w <= x * (1.0 + eps) * 1.001, "x={x} w={w}");
            }
        }
    }
}
