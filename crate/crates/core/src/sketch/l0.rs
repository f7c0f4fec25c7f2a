//! Support sampler: geometric subsampling levels, each holding one-sparse
//! recovery triples (sum, index-weighted sum, fingerprint). Decoding scans
//! levels from the most subsampled down and returns the first verified
//! singleton, which is near-uniform over the support.

use super::seed::SketchSeed;
use super::state::{L0Params, LinearSketchState, SampleResult, SketchKind};

const TAG_MEMBER: u64 = 0x1001;

pub fn l0_build(n: usize, delta: f64, seed: SketchSeed) -> LinearSketchState {
    let levels = (usize::BITS - n.max(2).leading_zeros()) + 3;
    let reps = ((1.0 / delta.clamp(1e-9, 0.5)).log2().ceil() as u32).clamp(2, 40);
    LinearSketchState::new(SketchKind::L0(L0Params { levels, reps }), seed, n)
}

/// Trailing-zero membership: index `i` is live at levels `0..=tz(hash)`,
/// giving nested subsampling at rate `2^-level`.
#[inline]
fn depth(seed: &SketchSeed, rep: u32, i: usize) -> u32 {
    seed.child3(TAG_MEMBER, rep as u64, 0).hash(i as u64).trailing_zeros()
}

pub(super) fn accumulate(p: &L0Params, state: &mut LinearSketchState, i: usize, delta: f64) {
    let reps = p.reps as usize;
    for rep in 0..p.reps {
        let d = depth(&state.seed, rep, i);
        let top = d.min(p.levels - 1);
        for level in 0..=top {
            let base = ((level as usize * reps) + rep as usize) * 3;
            state.measurements[base] += delta;
            state.measurements[base + 1] += delta * (i as f64 + 1.0);
            state.measurements[base + 2] += delta * state.seed.fingerprint_for(i as u64);
        }
    }
}

/// Verifies a one-sparse triple and returns the decoded index.
pub(crate) fn verify_triple(
    seed: &SketchSeed,
    n: usize,
    s0: f64,
    s1: f64,
    fp: f64,
) -> Option<usize> {
    if s0 == 0.0 || !s0.is_finite() {
        return None;
    }
    let ratio = s1 / s0;
    let idx = ratio.round() - 1.0;
    if !(0.0..n as f64).contains(&idx) || (ratio - (idx + 1.0)).abs() > 1e-6 {
        return None;
    }
    let i = idx as usize;
    let expect = s0 * seed.fingerprint_for(i as u64);
    if (fp - expect).abs() > 1e-9 * (fp.abs() + expect.abs() + 1e-300) {
        return None;
    }
    Some(i)
}

pub fn l0_sample(state: &LinearSketchState) -> SampleResult {
    let p = match &state.kind {
        SketchKind::L0(p) => p,
        _ => panic!("not an l0 sketch"),
    };
    if state.is_zero() {
        return SampleResult::NoSupport;
    }
    let reps = p.reps as usize;
    for level in (0..p.levels as usize).rev() {
        for rep in 0..p.reps {
            let base = (level * reps + rep as usize) * 3;
            let m = &state.measurements;
            if let Some(i) = verify_triple(&state.seed, state.n, m[base], m[base + 1], m[base + 2])
            {
                // Membership recheck guards against accidental cancellations.
                if depth(&state.seed, rep, i) as usize >= level {
                    return SampleResult::Found { index: i, weight_estimate: None };
                }
            }
        }
    }
    SampleResult::Fail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::state::sketch_update;

    #[test]
    fn singleton_support() {
        let mut s = l0_build(10, 0.01, SketchSeed::new(5, 0));
        sketch_update(&mut s, 3, 1.0);
        assert_eq!(l0_sample(&s), SampleResult::Found { index: 3, weight_estimate: None });
    }

    #[test]
    fn zero_vector_reports_no_support() {
        let s = l0_build(10, 0.01, SketchSeed::new(5, 0));
        assert_eq!(l0_sample(&s), SampleResult::NoSupport);
    }

    #[test]
    fn two_element_support_near_uniform() {
        // 10^4 trials, delta = 0.01: each index frequency within [0.35, 0.65].
        let mut hits = [0u32; 2];
        let mut fails = 0;
        for t in 0..10_000u64 {
            let mut s = l0_build(8, 0.01, SketchSeed::new(900 + t, 1));
            sketch_update(&mut s, 1, 1.0);
            sketch_update(&mut s, 2, 1.0);
            match l0_sample(&s) {
                SampleResult::Found { index: 1, .. } => hits[0] += 1,
                SampleResult::Found { index: 2, .. } => hits[1] += 1,
                SampleResult::Fail => fails += 1,
                other => panic!("unexpected {other:?}"),
            }
        }
        let total = (hits[0] + hits[1]) as f64;
        for h in hits {
            let f = h as f64 / total;
            assert!((0.35..=0.65).contains(&f), "frequency {f}");
        }
        assert!((fails as f64) < 100.0, "fail rate too high: {fails}");
    }

    #[test]
    fn insert_delete_restores_no_support() {
        let mut s = l0_build(16, 0.05, SketchSeed::new(7, 2));
        sketch_update(&mut s, 4, 3.0);
        sketch_update(&mut s, 4, -3.0);
        assert_eq!(l0_sample(&s), SampleResult::NoSupport);
    }
}
