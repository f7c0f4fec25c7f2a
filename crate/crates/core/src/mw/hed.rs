//! Expander decomposition by edge rescaling.
//!
//! The inner pass halves edges whose small-eigenspace projection or
//! two-sided leverage exceeds the upper thresholds and doubles previously
//! downscaled edges once both drop below the lower thresholds; a product of
//! capped small eigenvalues strictly decreases across outer iterations,
//! which forces either expansion or a multiplicative gap in the rescale
//! ratios that lets the outer driver delete low-weight edges and reduce the
//! nontrivial kernel.

use crate::graph::Edge;
use crate::linalg::{self, SymMatrix};

use super::argd::{almost_regular_scaling, gap_search};
use super::graph::{MatrixWeightedGraph, MwError, Result, Scaling};
use super::spectrum::{
    expander_h_values, expander_report, nontrivial_spectrum, upsilon_log, NontrivialSpectrum,
};

#[derive(Debug, thiserror::Error)]
pub enum HedError {
    #[error("rescaling budget exhausted after {steps} steps; potential trace: {trace:?}")]
    BudgetExhausted { steps: usize, trace: Vec<f64> },
    #[error(transparent)]
    Mw(#[from] MwError),
}

/// One outer iteration of the inner rescaling pass.
#[derive(Debug, Clone)]
pub struct WtmTraceStep {
    pub upsilon_log: f64,
    pub rho: f64,
    pub max_h: f64,
    pub halved: Option<Edge>,
    pub first_while_halvings: usize,
    pub second_while_doublings: usize,
}

#[derive(Debug, Clone)]
pub struct WtmOutcome {
    pub scaling: Scaling,
    /// Gap threshold; `None` when the pass ended with no small eigenvalues
    /// (the graph is already expanding at the requested `zeta`).
    pub rho: Option<f64>,
    pub trace: Vec<WtmTraceStep>,
}

struct EdgeState {
    r: f64,
    h: f64,
}

fn edge_states(
    g: &MatrixWeightedGraph,
    s: &Scaling,
    zeta: f64,
    spectrum: &NontrivialSpectrum,
) -> Result<Vec<(Edge, EdgeState)>> {
    let d = g.degree(s);
    let dpinv = d.pinv()?;
    let h_vals: std::collections::BTreeMap<Edge, f64> =
        expander_h_values(g, s, zeta, spectrum).into_iter().collect();
    let mut out = Vec::new();
    for (e, _) in g.edges() {
        if s.get(e) == 0.0 {
            continue;
        }
        let r = super::spectrum::leverage_one_sided(g, s, &dpinv, e.0, e)
            + super::spectrum::leverage_one_sided(g, s, &dpinv, e.1, e);
        out.push((e, EdgeState { r, h: h_vals.get(&e).copied().unwrap_or(0.0) }));
    }
    Ok(out)
}

/// Inner rescaling pass. Requires the rescaled start `G^{s0}` to be
/// `(gamma1/2)`-almost regular; thresholds obey `gamma2 >= 16 gamma1`,
/// `psi2 >= 1024 psi1` and `psi2 >= 1024 gamma2^2 / (1-zeta)^2` in the
/// intended regime.
#[allow(clippy::too_many_arguments)]
pub fn rescale_until_expander(
    g: &MatrixWeightedGraph,
    gamma1: f64,
    gamma2: f64,
    zeta: f64,
    psi1: f64,
    psi2: f64,
    alpha: f64,
    s0: &Scaling,
    step_budget: usize,
) -> std::result::Result<WtmOutcome, HedError> {
    let n = g.n() as f64;
    let k = g.k() as f64;
    let ell0 = ((gamma2 * k * k) / ((1.0 - zeta) * (1.0 - zeta))).ceil() as usize;
    let r_upper = gamma2 * k / n;
    let r_lower = gamma1 * k / n;
    let h_upper = psi2 * k * k / (n * n);
    let h_lower = psi1 * k * k / (n * n);

    let mut s = s0.clone();
    let mut trace: Vec<WtmTraceStep> = Vec::new();
    let mut steps = 0usize;
    let mut bump = |s: &mut Scaling, e: Edge, factor: f64, steps: &mut usize| {
        let v = s.get(e) * factor;
        s.set(e, v);
        *steps += 1;
    };

    loop {
        if steps > step_budget {
            return Err(HedError::BudgetExhausted {
                steps,
                trace: trace.iter().map(|t| t.upsilon_log).collect(),
            });
        }
        let spectrum = nontrivial_spectrum(g, &s).map_err(MwError::from)?;
        let smalls: Vec<f64> =
            spectrum.positives_in(0.0, zeta).map(|(l, _)| *l).collect();
        if smalls.is_empty() {
            return Ok(WtmOutcome { scaling: s, rho: None, trace });
        }
        let lambda_min = smalls.iter().cloned().fold(f64::INFINITY, f64::min);
        // Gap search over rescale ratios and both spectra.
        let mut candidates: Vec<f64> = Vec::new();
        for (e, v) in s.iter() {
            let base = s0.get(e);
            if base > 0.0 {
                let ratio = v / base;
                candidates.push(ratio * ratio);
            }
        }
        for b in &g.degree(&s).blocks {
            candidates
                .extend(linalg::sym_eigen(b).map_err(MwError::from)?.eigenvalues.iter().cloned());
        }
        candidates.extend(spectrum.positives.iter().map(|(l, _)| *l));
        let rho = gap_search(lambda_min, alpha, &candidates);

        let states = edge_states(g, &s, zeta, &spectrum)?;
        let max_h = states.iter().map(|(_, st)| st.h).fold(0.0f64, f64::max);
        let upsilon = upsilon_log(&spectrum, zeta, ell0);

        if rho < 1.0 {
            trace.push(WtmTraceStep {
                upsilon_log: upsilon,
                rho,
                max_h,
                halved: None,
                first_while_halvings: 0,
                second_while_doublings: 0,
            });
            return Ok(WtmOutcome { scaling: s, rho: Some(rho), trace });
        }
        let violator = states.iter().find(|(_, st)| st.h > h_upper).map(|(e, _)| *e);
        let halved = match violator {
            None => {
                trace.push(WtmTraceStep {
                    upsilon_log: upsilon,
                    rho,
                    max_h,
                    halved: None,
                    first_while_halvings: 0,
                    second_while_doublings: 0,
                });
                return Ok(WtmOutcome { scaling: s, rho: Some(rho), trace });
            }
            Some(e) => {
                bump(&mut s, e, 0.5, &mut steps);
                e
            }
        };

        // First inner pass: restore leverage regularity.
        let mut first = 0usize;
        loop {
            let spectrum = nontrivial_spectrum(g, &s).map_err(MwError::from)?;
            let states = edge_states(g, &s, zeta, &spectrum)?;
            match states.iter().find(|(_, st)| st.r > r_upper).map(|(e, _)| *e) {
                Some(e) => {
                    bump(&mut s, e, 0.5, &mut steps);
                    first += 1;
                    if steps > step_budget {
                        return Err(HedError::BudgetExhausted {
                            steps,
                            trace: trace.iter().map(|t| t.upsilon_log).collect(),
                        });
                    }
                }
                None => break,
            }
        }

        // Second inner pass: re-grow downscaled edges that became light on
        // both measures.
        let mut second = 0usize;
        loop {
            let spectrum = nontrivial_spectrum(g, &s).map_err(MwError::from)?;
            let states = edge_states(g, &s, zeta, &spectrum)?;
            let candidate = states
                .iter()
                .find(|(e, st)| {
                    s.get(*e) < s0.get(*e) && st.r < r_lower && st.h < h_lower
                })
                .map(|(e, _)| *e);
            match candidate {
                Some(e) => {
                    bump(&mut s, e, 2.0, &mut steps);
                    second += 1;
                    if steps > step_budget {
                        return Err(HedError::BudgetExhausted {
                            steps,
                            trace: trace.iter().map(|t| t.upsilon_log).collect(),
                        });
                    }
                }
                None => break,
            }
        }

        trace.push(WtmTraceStep {
            upsilon_log: upsilon,
            rho,
            max_h,
            halved: Some(halved),
            first_while_halvings: first,
            second_while_doublings: second,
        });
        if s.iter().any(|(_, v)| v > 0.0 && v < (2.0f64).powi(-500)) {
            return Err(HedError::BudgetExhausted {
                steps,
                trace: trace.iter().map(|t| t.upsilon_log).collect(),
            });
        }
    }
}

/// Outer-iteration record of the full decomposition.
#[derive(Debug, Clone)]
pub struct DecompositionTrace {
    pub outer: Vec<OuterStep>,
}

#[derive(Debug, Clone)]
pub struct OuterStep {
    pub rank_before: usize,
    pub deleted: usize,
    pub rho: f64,
    pub wtm_trace: Vec<WtmTraceStep>,
    pub max_r: f64,
    pub max_h: f64,
    pub upsilon_logs: Vec<f64>,
}

/// Smallest positive eigenvalue of a PSD matrix, or `None` if the matrix is
/// (numerically) zero.
fn min_positive_eigenvalue(m: &SymMatrix) -> Result<Option<f64>> {
    let dec = linalg::sym_eigen(m)?;
    Ok(dec
        .eigenvalues
        .iter()
        .cloned()
        .filter(|&l| l > dec.zero_tol)
        .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.min(l)))))
}

/// Full expander decomposition: returns a scaling under which the rescaled
/// graph is a `(gamma, zeta, psi)`-almost regular expander, with the number
/// of rescaled edges bounded in terms of `gamma`, `psi` and the rank of the
/// degree matrix. Intended regime: `psi >= 1024 gamma^2 / (1 - zeta)^2`.
pub fn expander_scaling(
    g: &MatrixWeightedGraph,
    gamma: f64,
    zeta: f64,
    psi: f64,
) -> std::result::Result<(Scaling, DecompositionTrace), HedError> {
    let n = g.n() as f64;
    let k = g.k() as f64;
    let mut s = Scaling::ones(g);
    let mut trace = DecompositionTrace { outer: Vec::new() };
    if g.m() == 0 {
        return Ok((s, trace));
    }
    let r_phi = g.max_phi_norm2();
    let outer_budget = ((6.0 * gamma * k * k).ceil() as usize).max(64);
    let step_budget = 200_000usize;
    let full_degree = g.degree(&Scaling::ones(g));
    let dhalf_pinv = full_degree.pinv_sqrt().map_err(MwError::from)?;

    for _outer in 0..outer_budget {
        let rank_before = g.degree(&s).rank().map_err(MwError::from)?;
        if rank_before == 0 {
            return Ok((s, trace));
        }
        // Re-regularize the surviving support.
        let support: std::collections::BTreeSet<Edge> = s.support().collect();
        let mut g_support = MatrixWeightedGraph::new(g.n(), g.k());
        for (e, phi) in g.edges() {
            if support.contains(&e) {
                g_support.set_edge(e.0, e.1, phi.to_vec()).unwrap();
            }
        }
        let s_reg = almost_regular_scaling(&g_support, gamma / 32.0).map_err(HedError::Mw)?;
        let mut s_prime = Scaling::zeros(g);
        for (e, _) in g.edges() {
            if support.contains(&e) {
                s_prime.set(e, s_reg.get(e));
            }
        }
        let s_prime_min = s_prime
            .iter()
            .filter(|&(_, v)| v > 0.0)
            .map(|(_, v)| v)
            .fold(f64::INFINITY, f64::min);
        if !s_prime_min.is_finite() {
            // Regularization deleted everything that was left.
            return Ok((s_prime, trace));
        }

        // Gap parameter from the current support, verified after the fact.
        let alpha_deg = {
            let d = g_support.degree(&Scaling::ones(&g_support));
            let mut worst = 0.0f64;
            for b in &d.blocks {
                if let Some(l) = min_positive_eigenvalue(b)? {
                    worst = worst.max(1.0 / l);
                }
            }
            worst.max(1.0)
        };
        let alpha_lap = {
            let l = g_support.laplacian(&Scaling::ones(&g_support));
            let m = dhalf_pinv.sandwich(&l);
            match min_positive_eigenvalue(&m)? {
                Some(l) => 1.0 / l,
                None => 1.0,
            }
        };
        let mut alpha = (8.0 * n.powi(4) * k)
            .max(128.0 * n * k.powi(3) * gamma * r_phi * alpha_deg / (s_prime_min * s_prime_min))
            .max(128.0 * n * k.powi(3) * gamma * alpha_lap / (s_prime_min * s_prime_min));

        let mut retry = 0;
        loop {
            retry += 1;
            if retry > 24 {
                return Err(HedError::BudgetExhausted { steps: 0, trace: vec![] });
            }
            let out = rescale_until_expander(
                g,
                gamma / 16.0,
                gamma,
                zeta,
                psi / 1024.0,
                psi,
                alpha,
                &s_prime,
                step_budget,
            )?;
            let report =
                expander_report(g, &out.scaling, gamma, zeta, psi).map_err(MwError::from)?;
            if report.pass {
                trace.outer.push(OuterStep {
                    rank_before,
                    deleted: 0,
                    rho: out.rho.unwrap_or(f64::INFINITY),
                    upsilon_logs: out.trace.iter().map(|t| t.upsilon_log).collect(),
                    wtm_trace: out.trace,
                    max_r: report.max_r,
                    max_h: report.max_h,
                });
                return Ok((out.scaling, trace));
            }
            let rho = match out.rho {
                Some(r) if r < 1.0 => r,
                _ => {
                    // No usable gap: enlarge and retry.
                    alpha *= 2.0;
                    continue;
                }
            };
            // Delete everything at or below the gap.
            let mut s_hat = out.scaling.clone();
            let mut deleted = 0;
            for (e, v) in out.scaling.iter() {
                let base = s_prime.get(e);
                if base > 0.0 && (v / base) * (v / base) <= rho {
                    s_hat.set(e, 0.0);
                    deleted += 1;
                }
            }
            // Verify the spectral floor the gap is meant to guarantee.
            let l_hat = g.laplacian(&s_hat);
            let m = dhalf_pinv.sandwich(&l_hat);
            let floor_ok = match min_positive_eigenvalue(&m)? {
                Some(l) => l + 1e-12 >= 128.0 * n * k.powi(3) * gamma * rho,
                None => true,
            };
            if !floor_ok {
                alpha *= 2.0;
                continue;
            }
            for (e, _) in g.edges() {
                if s_hat.get(e) > 0.0 {
                    s_hat.set(e, 1.0);
                }
            }
            trace.outer.push(OuterStep {
                rank_before,
                deleted,
                rho,
                upsilon_logs: out.trace.iter().map(|t| t.upsilon_log).collect(),
                wtm_trace: out.trace,
                max_r: 0.0,
                max_h: 0.0,
            });
            s = s_hat;
            break;
        }
    }
    Err(HedError::BudgetExhausted { steps: outer_budget, trace: vec![] })
}
