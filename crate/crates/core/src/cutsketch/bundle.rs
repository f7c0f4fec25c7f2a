//! Linear-sketch implementation of the cut sparsification algorithm.
//!
//! The bundle keeps, per level and per recovery round, one weighted-edge
//! sampler state per vertex over the `n(n-1)/2` edge-slot space. States in
//! the same group share hash seeds, so summing the states of a vertex set
//! cancels its internal edges exactly and leaves a sketch of the boundary
//! vector. Two groups exist per level: one drives spanning-forest recovery
//! of the level-sampled graph, the other the admission sampling into the
//! sparsifier.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{slot_count, slot_index, slot_pair, WeightedGraph};
use crate::sketch::wes::{wes_build_with, wes_harvest, WesConfig};
use crate::sketch::{
    sketch_add_assign, sketch_sub_singleton, sketch_update, LinearSketchState,
    SketchSeed,
};

use super::wgm::{level_count, log2n, strong_components, CutConstants};

#[derive(Debug, Error)]
pub enum RecoverError {
    #[error("forest recovery exhausted its repetition budget at level {level}")]
    ForestBudgetExhausted { level: usize },
}

#[derive(Debug, Clone)]
pub struct CutSketchConfig {
    pub constants: CutConstants,
    /// Rounds per forest: `ceil(log2 n) + rounds_extra`.
    pub rounds_extra: u32,
    /// Forest budget: `ceil(factor * log2(n)^2)` edge-disjoint forests.
    pub forest_budget_factor: f64,
    pub wes: WesConfig,
}

impl Default for CutSketchConfig {
    fn default() -> Self {
        CutSketchConfig {
            constants: CutConstants::default(),
            rounds_extra: 2,
            forest_budget_factor: 4.0,
            // Bundle profile: exact-read path only, which keeps the whole
            // bundle exactly linear (byte-stable under stream reordering).
            wes: WesConfig { reps_a: 2, buckets: 48, reps_b: 0, l1_rows: 5, l1_width: 64, extra_levels: 4 },
        }
    }
}

/// Vertex-to-supervertex labeling; recovery refines it only by merging.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionMap {
    label: Vec<usize>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        ContractionMap { label: (0..n).collect() }
    }

    #[inline]
    pub fn label(&self, v: usize) -> usize {
        self.label[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    /// Merges classes that share a value of `group(label)`; each merged
    /// class keeps its smallest member label.
    pub fn merge_by(&mut self, group: impl Fn(usize) -> usize) {
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.label.len() {
            let g = group(self.label[v]);
            let r = *rep.entry(g).or_insert(self.label[v]);
            self.label[v] = r.min(self.label[v]);
        }
        // One more pass so every class member carries the same (minimum)
        // representative.
        let mut min_of: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.label.len() {
            let g = group(self.label[v]);
            let e = min_of.entry(g).or_insert(self.label[v]);
            *e = (*e).min(self.label[v]);
        }
        for v in 0..self.label.len() {
            self.label[v] = min_of[&group(self.label[v])];
        }
    }
}

struct LevelGroup {
    /// Offline draws for both sampling processes.
    r1: Arc<Vec<f64>>,
    r2: Arc<Vec<f64>>,
    /// Zero prototypes per `[process][round]`.
    protos: Vec<Vec<LinearSketchState>>,
    /// Lazily materialized per-vertex states: `[process][round][vertex]`.
    states: Vec<Vec<Vec<Option<Box<LinearSketchState>>>>>,
}

/// Turnstile sketch bundle for cut sparsification.
pub struct CutSketchBundle {
    n: usize,
    eps: f64,
    wmax: f64,
    seed: SketchSeed,
    cfg: CutSketchConfig,
    rounds: usize,
    levels: Vec<LevelGroup>,
}

impl CutSketchBundle {
    pub fn build(n: usize, eps: f64, wmax: f64, seed: SketchSeed) -> Self {
        Self::build_with(n, eps, wmax, seed, CutSketchConfig::default())
    }

    pub fn build_with(
        n: usize,
        eps: f64,
        wmax: f64,
        seed: SketchSeed,
        cfg: CutSketchConfig,
    ) -> Self {
        assert!(n >= 2 && eps > 0.0 && wmax >= 1.0);
        let slots = slot_count(n);
        let lmax = level_count(n, wmax) as usize;
        let rounds = (log2n(n).ceil() as usize) + cfg.rounds_extra as usize;
        let ln2 = log2n(n);
        let mut levels = Vec::with_capacity(lmax + 1);
        for level in 0..=lmax {
            let rseed1 = seed.child3(0xA1, level as u64, 0);
            let rseed2 = seed.child3(0xA2, level as u64, 0);
            let r1: Arc<Vec<f64>> =
                Arc::new((0..slots).map(|s| rseed1.unit_for(s as u64)).collect());
            let r2: Arc<Vec<f64>> =
                Arc::new((0..slots).map(|s| rseed2.unit_for(s as u64)).collect());
            let p1 = cfg.constants.beta * (2.0f64).powi(-(level as i32)) * ln2;
            let p2 =
                cfg.constants.alpha / (eps * eps) * (2.0f64).powi(-(level as i32)) * ln2;
            let mut protos = Vec::new();
            let mut states = Vec::new();
            for (proc, (r, p)) in [(&r1, p1), (&r2, p2)].into_iter().enumerate() {
                let mut proc_protos = Vec::with_capacity(rounds);
                let mut proc_states = Vec::with_capacity(rounds);
                for round in 0..rounds {
                    let s = seed.child3(
                        0xB0 + proc as u64,
                        level as u64,
                        round as u64,
                    );
                    proc_protos.push(wes_build_with(slots, p, eps, s, r.clone(), cfg.wes));
                    proc_states.push((0..n).map(|_| None).collect::<Vec<_>>());
                }
                protos.push(proc_protos);
                states.push(proc_states);
            }
            levels.push(LevelGroup { r1, r2, protos, states });
        }
        CutSketchBundle { n, eps, wmax, seed, cfg, rounds, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn level_values(&self) -> std::ops::RangeInclusive<usize> {
        0..=(self.levels.len() - 1)
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Total number of linear measurements across the bundle (computed from
    /// parameters; lazily allocated states count fully).
    pub fn measurement_count(&self) -> u128 {
        let per_state = self.levels[0].protos[0][0].kind.measurement_len() as u128;
        per_state * self.levels.len() as u128 * 2 * self.rounds as u128 * self.n as u128
    }

    /// Applies the turnstile update `w(u, v) += delta` to every state.
    pub fn update(&mut self, u: usize, v: usize, delta: f64) {
        assert!(u != v && u < self.n && v < self.n);
        if delta == 0.0 {
            return;
        }
        let slot = slot_index(self.n, crate::graph::edge(u, v));
        let head = u.min(v);
        for lg in self.levels.iter_mut() {
            for proc in 0..2 {
                for round in 0..self.rounds {
                    let proto = &lg.protos[proc][round];
                    for (vertex, sign) in [(u, if head == u { 1.0 } else { -1.0 }), (v, if head == v { 1.0 } else { -1.0 })] {
                        let cell = &mut lg.states[proc][round][vertex];
                        let st = cell.get_or_insert_with(|| Box::new(proto.clone()));
                        sketch_update(st, slot, sign * delta);
                    }
                }
            }
        }
    }

    fn state_or_proto(&self, level: usize, proc: usize, round: usize, vertex: usize) -> &LinearSketchState {
        match &self.levels[level].states[proc][round][vertex] {
            Some(b) => b,
            None => &self.levels[level].protos[proc][round],
        }
    }

    /// Deterministic dense serialization; two builds over net-equal dyadic
    /// streams produce identical bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"CSB1");
        for v in [self.n as u64, self.levels.len() as u64, self.rounds as u64] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.eps.to_le_bytes());
        out.extend_from_slice(&self.wmax.to_le_bytes());
        out.extend_from_slice(&self.seed.master_seed.to_le_bytes());
        out.extend_from_slice(&self.seed.stream_id.to_le_bytes());
        for level in 0..self.levels.len() {
            for proc in 0..2 {
                for round in 0..self.rounds {
                    for vertex in 0..self.n {
                        out.extend_from_slice(
                            &self.state_or_proto(level, proc, round, vertex).to_bytes(),
                        );
                    }
                }
            }
        }
        out
    }

    fn p_scale(&self, level: usize, proc: usize) -> f64 {
        let ln2 = log2n(self.n);
        match proc {
            0 => self.cfg.constants.beta * (2.0f64).powi(-(level as i32)) * ln2,
            _ => {
                self.cfg.constants.alpha / (self.eps * self.eps)
                    * (2.0f64).powi(-(level as i32))
                    * ln2
            }
        }
    }

    fn forest_budget(&self) -> usize {
        (self.cfg.forest_budget_factor * log2n(self.n).powi(2)).ceil() as usize
    }
}

/// Working copies of one level/process group with decrement bookkeeping.
struct LevelWorking {
    /// `[round][vertex]` materialized states.
    states: Vec<Vec<LinearSketchState>>,
    /// Total amount subtracted per slot so far.
    decrements: BTreeMap<usize, f64>,
    n: usize,
}

impl LevelWorking {
    fn new(bundle: &CutSketchBundle, level: usize, proc: usize) -> Self {
        let mut states = Vec::with_capacity(bundle.rounds);
        for round in 0..bundle.rounds {
            states.push(
                (0..bundle.n)
                    .map(|v| bundle.state_or_proto(level, proc, round, v).clone())
                    .collect::<Vec<_>>(),
            );
        }
        LevelWorking { states, decrements: BTreeMap::new(), n: bundle.n }
    }

    fn with_decrements(
        bundle: &CutSketchBundle,
        level: usize,
        proc: usize,
        decrements: &BTreeMap<usize, f64>,
    ) -> Self {
        let mut w = Self::new(bundle, level, proc);
        for (&slot, &amount) in decrements {
            w.subtract(slot, amount);
        }
        w
    }

    /// Subtracts `amount` of weight from `slot` in every round's states
    /// (signed per endpoint, matching the incidence orientation).
    fn subtract(&mut self, slot: usize, amount: f64) {
        let (u, v) = slot_pair(self.n, slot);
        for round in self.states.iter_mut() {
            sketch_sub_singleton(&mut round[u], slot, amount);
            // Tail carries -w, so subtracting weight means adding.
            sketch_update(&mut round[v], slot, amount);
        }
        *self.decrements.entry(slot).or_insert(0.0) += amount;
    }

    fn original_estimate(&self, slot: usize, read: f64) -> f64 {
        read + self.decrements.get(&slot).copied().unwrap_or(0.0)
    }
}

/// Result of one spanning-forest recovery pass.
#[derive(Debug, Clone)]
pub struct ForestOutcome {
    /// Recovered edges as `(slot, current weight estimate)`.
    pub edges: Vec<(usize, f64)>,
    /// True when a decode round produced no candidate while several
    /// components remained connected by sampled edges in later rounds;
    /// recovery proceeds with what it has.
    pub partial: bool,
}

fn run_forest(
    bundle: &CutSketchBundle,
    working: &LevelWorking,
    contraction: &ContractionMap,
    p_scale: f64,
    r_values: &[f64],
    exclude: &BTreeSet<usize>,
) -> ForestOutcome {
    let n = bundle.n;
    // Union-find over contraction classes.
    let mut parent: Vec<usize> = (0..n).map(|v| contraction.label(v)).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut edges: Vec<(usize, f64)> = Vec::new();
    let mut partial = false;
    for round in 0..bundle.rounds {
        // Group members by current component.
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(find(&mut parent, v)).or_default().push(v);
        }
        if groups.len() <= 1 {
            break;
        }
        let mut picks: Vec<(usize, f64)> = Vec::new();
        for (_, members) in groups {
            // Sum member sketches; internal edges cancel exactly.
            let mut sum = working.states[round][members[0]].clone();
            for &v in &members[1..] {
                sketch_add_assign(&mut sum, &working.states[round][v]).unwrap();
            }
            if sum.is_zero() {
                continue;
            }
            let mut best: Option<(f64, usize, f64)> = None;
            for (slot, w) in wes_harvest(&sum) {
                if exclude.contains(&slot) {
                    continue;
                }
                let (a, b) = slot_pair(n, slot);
                if find(&mut parent, a) == find(&mut parent, b) {
                    continue;
                }
                if r_values[slot] <= w * p_scale
                    && best.map_or(true, |(br, bs, _)| (r_values[slot], slot) < (br, bs))
                {
                    best = Some((r_values[slot], slot, w));
                }
            }
            match best {
                Some((_, slot, w)) => picks.push((slot, w)),
                None => partial = true,
            }
        }
        if picks.is_empty() {
            break;
        }
        picks.sort_by(|a, b| a.0.cmp(&b.0));
        picks.dedup_by_key(|p| p.0);
        for (slot, w) in picks {
            let (a, b) = slot_pair(n, slot);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
                edges.push((slot, w));
            }
        }
    }
    edges.sort_by_key(|&(s, _)| s);
    ForestOutcome { edges, partial }
}

/// Recovers one spanning forest of the level-sampled, contracted,
/// decrement-adjusted graph. Read-only over the bundle; `forest_index` is
/// bookkeeping only (sketch groups are fresh per round and shared across
/// forests, with found-edge decrements applied through `deleted`).
pub fn recover_spanning_forest(
    bundle: &CutSketchBundle,
    level: usize,
    _forest_index: usize,
    contraction: &ContractionMap,
    deleted: &BTreeMap<usize, f64>,
) -> ForestOutcome {
    let working = LevelWorking::with_decrements(bundle, level, 0, deleted);
    let p_scale = bundle.p_scale(level, 0);
    run_forest(
        bundle,
        &working,
        contraction,
        p_scale,
        &bundle.levels[level].r1,
        &BTreeSet::new(),
    )
}

/// Full recovery loop: per level, recover the sampled graph by edge-disjoint
/// spanning forests, split into strongly connected pieces, admit
/// within-piece edges at the admission rate, and contract.
pub fn recover_cut_sparsifier(bundle: &CutSketchBundle) -> Result<WeightedGraph, RecoverError> {
    let n = bundle.n;
    let ln2 = log2n(n);
    let mut contraction = ContractionMap::identity(n);
    let mut sparsifier = WeightedGraph::new(n);
    let budget = bundle.forest_budget();

    for level in bundle.level_values().rev() {
        let p1 = bundle.p_scale(level, 0);
        let p2 = bundle.p_scale(level, 1);
        let lg = &bundle.levels[level];

        // Phase 1: gather the level-sampled graph from spanning forests.
        let mut working1 = LevelWorking::new(bundle, level, 0);
        let mut found1: BTreeMap<usize, f64> = BTreeMap::new();
        let mut exhausted = true;
        for _forest in 0..budget {
            let exclude: BTreeSet<usize> = found1.keys().cloned().collect();
            let outcome =
                run_forest(bundle, &working1, &contraction, p1, &lg.r1, &exclude);
            if outcome.edges.is_empty() {
                exhausted = false;
                break;
            }
            for (slot, read) in outcome.edges {
                let orig = working1.original_estimate(slot, read);
                found1.entry(slot).or_insert(orig);
                working1.subtract(slot, read / 2.0);
            }
        }
        if exhausted {
            return Err(RecoverError::ForestBudgetExhausted { level });
        }

        // The level graph lives on supervertices, reweighted by 1/p_e.
        let mut gl = WeightedGraph::new(n);
        for (&slot, &w) in &found1 {
            let (u, v) = slot_pair(n, slot);
            let (a, b) = (contraction.label(u), contraction.label(v));
            if a != b {
                gl.add_edge(a.min(b), a.max(b), (p1 * w).max(1.0)).unwrap();
            }
        }
        let comps = strong_components(&gl, bundle.cfg.constants.gamma * ln2);

        // Phase 2: admit within-piece edges at the admission rate.
        let mut working2 = LevelWorking::new(bundle, level, 1);
        let mut found2: BTreeSet<usize> = BTreeSet::new();
        for round in 0..bundle.rounds {
            let mut fresh: Vec<(usize, f64)> = Vec::new();
            for vertex in 0..n {
                let st = &working2.states[round][vertex];
                if st.is_zero() {
                    continue;
                }
                for (slot, w) in wes_harvest(st) {
                    if found2.contains(&slot) {
                        continue;
                    }
                    let (a, b) = slot_pair(n, slot);
                    let (la, lb) = (contraction.label(a), contraction.label(b));
                    if la == lb || comps[la] != comps[lb] {
                        continue;
                    }
                    if lg.r2[slot] <= w * p2 {
                        fresh.push((slot, w));
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            fresh.sort_by(|a, b| a.0.cmp(&b.0));
            fresh.dedup_by_key(|p| p.0);
            for (slot, read) in fresh {
                found2.insert(slot);
                let orig = working2.original_estimate(slot, read);
                let p_e = (p2 * orig).min(1.0);
                let (u, v) = slot_pair(n, slot);
                sparsifier.add_edge(u, v, orig / p_e).unwrap();
                working2.subtract(slot, read / 2.0);
            }
        }

        // Contract the pieces for the next level.
        contraction.merge_by(|label| comps[label]);
    }
    Ok(sparsifier)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feed(bundle: &mut CutSketchBundle, g: &WeightedGraph) {
        for ((u, v), w) in g.edges() {
            bundle.update(u, v, w);
        }
    }

    fn random_graph(n: usize, extra: usize, umax: u32, seed: u64) -> WeightedGraph {
        let s = SketchSeed::new(seed, 13);
        let mut g = WeightedGraph::new(n);
        for v in 1..n {
            let u = (s.unit_for(v as u64) * v as f64) as usize;
            let w = 1.0 + (s.unit_for(1000 + v as u64) * (umax - 1) as f64 * 8.0).floor() / 8.0;
            g.add_edge(u, v, w).unwrap();
        }
        for i in 0..extra {
            let u = (s.unit_for(2000 + i as u64) * n as f64) as usize;
            let v = (s.unit_for(3000 + i as u64) * n as f64) as usize;
            if u != v {
                let w =
                    1.0 + (s.unit_for(4000 + i as u64) * (umax - 1) as f64 * 8.0).floor() / 8.0;
                g.add_edge(u, v, w).unwrap();
            }
        }
        g
    }

    #[test]
    fn build_is_deterministic() {
        let b1 = CutSketchBundle::build(8, 0.5, 4.0, SketchSeed::new(5, 0));
        let b2 = CutSketchBundle::build(8, 0.5, 4.0, SketchSeed::new(5, 0));
        assert_eq!(b1.to_bytes(), b2.to_bytes());
        assert!(b1.level_values().contains(&(level_count(8, 4.0) as usize)));
    }

    #[test]
    fn insert_delete_equals_fresh() {
        let mut b1 = CutSketchBundle::build(6, 0.5, 2.0, SketchSeed::new(9, 0));
        let b2 = CutSketchBundle::build(6, 0.5, 2.0, SketchSeed::new(9, 0));
        b1.update(0, 3, 1.5);
        b1.update(0, 3, -1.5);
        assert_eq!(b1.to_bytes(), b2.to_bytes());
    }

    #[test]
    fn permuted_and_fractional_streams_agree() {
        let g = random_graph(8, 8, 4, 77);
        let mut direct = CutSketchBundle::build(8, 0.5, 4.0, SketchSeed::new(3, 0));
        feed(&mut direct, &g);
        // Reverse order, fractional dyadic pieces.
        let mut shuffled = CutSketchBundle::build(8, 0.5, 4.0, SketchSeed::new(3, 0));
        let edges: Vec<_> = g.edges().collect();
        for &((u, v), w) in edges.iter().rev() {
            shuffled.update(u, v, w / 4.0);
            shuffled.update(u, v, w / 2.0);
            shuffled.update(u, v, w / 4.0);
        }
        assert_eq!(direct.to_bytes(), shuffled.to_bytes());
    }

    #[test]
    fn component_sums_cancel_internal_edges() {
        // Summing all vertex sketches of the whole graph must equal the
        // sketch of the zero vector (every edge is internal).
        let g = random_graph(7, 6, 4, 11);
        let mut b = CutSketchBundle::build(7, 0.5, 4.0, SketchSeed::new(21, 0));
        feed(&mut b, &g);
        let mut sum = b.state_or_proto(1, 0, 0, 0).clone();
        for v in 1..7 {
            sketch_add_assign(&mut sum, b.state_or_proto(1, 0, 0, v)).unwrap();
        }
        assert!(sum.is_zero(), "internal edges must cancel exactly");
    }

    #[test]
    fn spanning_forest_on_connected_level() {
        // Unit K8 at the lowest level: sampling passes every edge, so a
        // spanning forest of 7 edges comes back.
        let g = {
            let mut g = WeightedGraph::new(8);
            for u in 0..8 {
                for v in u + 1..8 {
                    g.add_edge(u, v, 1.0).unwrap();
                }
            }
            g
        };
        let mut b = CutSketchBundle::build(8, 0.5, 1.0, SketchSeed::new(31, 0));
        feed(&mut b, &g);
        let forest = recover_spanning_forest(
            &b,
            0,
            0,
            &ContractionMap::identity(8),
            &BTreeMap::new(),
        );
        assert_eq!(forest.edges.len(), 7, "forest: {:?}", forest.edges);
        // Recovered weights are exact reads.
        for &(slot, w) in &forest.edges {
            let (u, v) = slot_pair(8, slot);
            assert_eq!(g.weight(u, v), w);
        }
        // Spanning: union of edges connects everything.
        let mut h = WeightedGraph::new(8);
        for &(slot, w) in &forest.edges {
            let (u, v) = slot_pair(8, slot);
            h.add_edge(u, v, w).unwrap();
        }
        assert!(h.is_connected());
    }

    #[test]
    fn already_spanning_single_component() {
        let g = random_graph(6, 5, 2, 5);
        let mut b = CutSketchBundle::build(6, 0.5, 2.0, SketchSeed::new(41, 0));
        feed(&mut b, &g);
        let mut contraction = ContractionMap::identity(6);
        contraction.merge_by(|_| 0);
        let forest =
            recover_spanning_forest(&b, 0, 0, &contraction, &BTreeMap::new());
        assert!(forest.edges.is_empty());
    }

    #[test]
    fn empty_stream_recovers_empty_graph() {
        let b = CutSketchBundle::build(6, 0.5, 2.0, SketchSeed::new(51, 0));
        let h = recover_cut_sparsifier(&b).unwrap();
        assert_eq!(h.m(), 0);
    }

    #[test]
    fn single_edge_recovered_exactly() {
        let mut b = CutSketchBundle::build(5, 0.5, 4.0, SketchSeed::new(61, 0));
        b.update(1, 3, 2.5);
        let h = recover_cut_sparsifier(&b).unwrap();
        assert_eq!(h.m(), 1);
        assert!((h.weight(1, 3) - 2.5).abs() < 1e-9, "weight {}", h.weight(1, 3));
    }

    #[test]
    fn recovered_sparsifier_preserves_cuts() {
        let mut pass = 0;
        let seeds = 10;
        for s in 0..seeds {
            let g = random_graph(10, 12, 8, 100 + s);
            let mut b = CutSketchBundle::build(10, 0.5, 8.0, SketchSeed::new(s, 7));
            feed(&mut b, &g);
            let h = recover_cut_sparsifier(&b).unwrap();
            if g.all_cuts_within(&h, 0.5).unwrap() {
                pass += 1;
            }
        }
        assert!(pass >= 9, "pass = {pass}/{seeds}");
    }

    #[test]
    fn recovery_matches_sealed_interface() {
        // Recovery must work purely from updates: stream the graph as
        // fractional updates and compare with the direct build.
        let g = random_graph(9, 10, 4, 55);
        let mut b1 = CutSketchBundle::build(9, 0.5, 4.0, SketchSeed::new(71, 0));
        feed(&mut b1, &g);
        let mut b2 = CutSketchBundle::build(9, 0.5, 4.0, SketchSeed::new(71, 0));
        for ((u, v), w) in g.edges() {
            b2.update(u, v, w * 0.5);
            b2.update(u, v, w * 0.5);
        }
        let h1 = recover_cut_sparsifier(&b1).unwrap();
        let h2 = recover_cut_sparsifier(&b2).unwrap();
        assert_eq!(h1, h2);
    }
}
