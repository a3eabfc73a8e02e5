//! The (mu+1)-EA_D and the two-phase matching EA_D.
//!
//! Both algorithms share one loop: pick a parent uniformly, mutate, and if the
//! offspring is a maximum matching insert it and drop a member of minimum
//! contribution (ties uniform). Every generated offspring counts as one
//! iteration, accepted or not.

use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diversity::{optimal_diversity, Population};
use crate::error::{EdoError, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{Matching, MatchingChecker};

/// Generator used for every run.
pub type EdoRng = ChaCha8Rng;

/// Recorded in output metadata so runs can be replayed.
pub const RNG_DESCRIPTION: &str = "rand_chacha::ChaCha8Rng via SeedableRng::seed_from_u64";

pub fn rng_from_seed(seed: u64) -> EdoRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent 64-bit seed for one run from a master seed and a
/// path of indices (e.g. sweep point and repetition), using SplitMix64 mixing.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    path.iter().fold(mix(master), |acc, &k| mix(acc ^ mix(k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// (mu+1)-EA_D with standard bit mutation.
    EaD,
    /// Two-phase matching EA_D.
    TwoPhase,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::EaD, Algorithm::TwoPhase];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::EaD => "ea_d",
            Algorithm::TwoPhase => "two_phase",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ea_d" | "ead" | "ea" => Ok(Algorithm::EaD),
            "two_phase" | "2p" | "twophase" => Ok(Algorithm::TwoPhase),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetDiversity {
    /// The optimum from [`optimal_diversity`].
    Auto,
    Value(u64),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub graph: Graph,
    pub mu: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub max_iterations: u64,
    pub initial_population: Population,
    pub target: TargetDiversity,
    /// Record `(iteration, diversity)` roughly every `max_iterations / 1000` offspring.
    pub trace: bool,
}

impl RunConfig {
    pub fn new(
        graph: Graph,
        algorithm: Algorithm,
        initial_population: Population,
        seed: u64,
        max_iterations: u64,
    ) -> Self {
        Self {
            graph,
            mu: initial_population.len(),
            algorithm,
            seed,
            max_iterations,
            initial_population,
            target: TargetDiversity::Auto,
            trace: false,
        }
    }

    pub fn target_diversity(&self) -> Result<u64> {
        match self.target {
            TargetDiversity::Auto => optimal_diversity(&self.graph, self.mu),
            TargetDiversity::Value(t) => Ok(t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.initial_population;
        if self.mu == 0 {
            return Err(EdoError::InvalidPopulation("mu must be positive".into()));
        }
        if p.len() != self.mu {
            return Err(EdoError::InvalidPopulation(format!(
                "expected {} members, found {}",
                self.mu,
                p.len()
            )));
        }
        if p.edges() != self.graph.m() {
            return Err(EdoError::LengthMismatch {
                expected: self.graph.m(),
                found: p.edges(),
            });
        }
        let mut checker = MatchingChecker::new(&self.graph);
        if let Some(i) = p
            .members()
            .iter()
            .position(|x| !checker.is_maximum(&self.graph, x))
        {
            return Err(EdoError::InvalidPopulation(format!(
                "member {i} is not a maximum matching"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    /// Offspring generated, accepted or not.
    pub iterations: u64,
    pub reached_target: bool,
    pub final_diversity: u64,
    pub target_diversity: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diversity_trace: Option<Vec<(u64, u64)>>,
    pub final_population: Population,
}

/// Writes into `out` the positions of a Bernoulli(1/`len`) sample over `0..len`, ascending.
///
/// Uses geometric gaps, so the cost is proportional to the number of hits.
pub fn sample_uniform_rate<R: Rng + ?Sized>(len: usize, rng: &mut R, out: &mut Vec<usize>) {
    out.clear();
    if len == 0 {
        return;
    }
    if len == 1 {
        out.push(0);
        return;
    }
    let log_q = (1.0 - 1.0 / len as f64).ln();
    let mut pos = 0usize;
    loop {
        let u = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_q).floor();
        if gap >= (len - pos) as f64 {
            return;
        }
        pos += gap as usize;
        out.push(pos);
        pos += 1;
        if pos >= len {
            return;
        }
    }
}

/// `x` with the listed bits flipped.
pub fn apply_flips(x: &Matching, flips: &[usize]) -> Result<Matching> {
    let mut y = x.clone();
    for &b in flips {
        if b >= x.len() {
            return Err(EdoError::EdgeOutOfRange {
                edge: b,
                edges: x.len(),
            });
        }
        y.flip(b);
    }
    Ok(y)
}

/// Flips each bit independently with probability `1/m`.
pub fn standard_mutation<R: Rng + ?Sized>(
    g: &Graph,
    x: &Matching,
    rng: &mut R,
) -> Result<Matching> {
    if x.len() != g.m() {
        return Err(EdoError::LengthMismatch {
            expected: g.m(),
            found: x.len(),
        });
    }
    let mut flips = Vec::new();
    sample_uniform_rate(g.m(), rng, &mut flips);
    apply_flips(x, &flips)
}

/// Two-phase mutation: unmatch a Bernoulli(1/n) vertex subset, then visit it in
/// uniformly random order rematching each still-unmatched vertex to a uniformly
/// chosen unmatched neighbour, if any. The result is always collision-free.
pub fn two_phase_mutation<R: Rng + ?Sized>(
    g: &Graph,
    x: &Matching,
    rng: &mut R,
) -> Result<Matching> {
    let mut subset = Vec::new();
    sample_uniform_rate(g.n(), rng, &mut subset);
    subset.shuffle(rng);
    two_phase_rematch(g, x, &subset, |candidates| {
        rng.gen_range(0..candidates.len())
    })
}

/// Deterministic core of [`two_phase_mutation`]: `visit_order` is the sampled
/// subset in visiting order, `choose` picks an index into the ascending list of
/// unmatched neighbours.
pub fn two_phase_rematch(
    g: &Graph,
    x: &Matching,
    visit_order: &[VertexId],
    choose: impl FnMut(&[VertexId]) -> usize,
) -> Result<Matching> {
    if x.len() != g.m() {
        return Err(EdoError::LengthMismatch {
            expected: g.m(),
            found: x.len(),
        });
    }
    let mut checker = MatchingChecker::new(g);
    if !checker.is_valid(g, x) {
        return Err(EdoError::NotAMatching {
            collisions: checker.collisions(g, x),
        });
    }
    for &v in visit_order {
        g.check_vertex(v)?;
    }
    let mut scratch = TwoPhaseScratch::new(g);
    let mut out = x.clone();
    scratch.apply(g, x, &mut out, visit_order, choose);
    Ok(out)
}

const UNMATCHED: usize = usize::MAX;

#[derive(Debug, Clone)]
struct TwoPhaseScratch {
    /// Edge covering each vertex, or `UNMATCHED`.
    mate: Vec<usize>,
    neighbors: Vec<VertexId>,
    edges: Vec<usize>,
}

impl TwoPhaseScratch {
    fn new(g: &Graph) -> Self {
        Self {
            mate: vec![UNMATCHED; g.n()],
            neighbors: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// `parent` must be collision-free; `out` receives the offspring.
    fn apply(
        &mut self,
        g: &Graph,
        parent: &Matching,
        out: &mut Matching,
        visit_order: &[VertexId],
        mut choose: impl FnMut(&[VertexId]) -> usize,
    ) {
        out.copy_from(parent);
        if visit_order.is_empty() {
            return;
        }
        self.mate.iter_mut().for_each(|e| *e = UNMATCHED);
        for e in parent.ones() {
            let (a, b) = g.endpoints_unchecked(e);
            self.mate[a] = e;
            self.mate[b] = e;
        }
        for &v in visit_order {
            let e = self.mate[v];
            if e != UNMATCHED {
                out.set(e, false);
                let (a, b) = g.endpoints_unchecked(e);
                self.mate[a] = UNMATCHED;
                self.mate[b] = UNMATCHED;
            }
        }
        for &v in visit_order {
            // An earlier rematch in this pass may already have covered v.
            if self.mate[v] != UNMATCHED {
                continue;
            }
            self.neighbors.clear();
            self.edges.clear();
            let mate = &self.mate;
            let (neighbors, edges) = (&mut self.neighbors, &mut self.edges);
            g.for_each_incident(v, |e| {
                let (a, b) = g.endpoints_unchecked(e);
                let other = if a == v { b } else { a };
                if mate[other] == UNMATCHED {
                    neighbors.push(other);
                    edges.push(e);
                }
            });
            if self.neighbors.is_empty() {
                continue;
            }
            let k = choose(&self.neighbors);
            let (u, e) = (self.neighbors[k], self.edges[k]);
            out.set(e, true);
            self.mate[v] = e;
            self.mate[u] = e;
        }
    }
}

/// Removes one member of minimum contribution, uniformly among ties.
/// Returns the reduced population and the removed index.
pub fn survivor_selection<R: Rng + ?Sized>(
    mut p_plus: Population,
    rng: &mut R,
) -> Result<(Population, usize)> {
    if p_plus.is_empty() {
        return Err(EdoError::InvalidPopulation(
            "cannot select from an empty population".into(),
        ));
    }
    let mut ties = Vec::new();
    let idx = select_min_contribution(&p_plus, rng, &mut ties);
    p_plus.remove(idx)?;
    Ok((p_plus, idx))
}

fn select_min_contribution<R: Rng + ?Sized>(
    p: &Population,
    rng: &mut R,
    ties: &mut Vec<usize>,
) -> usize {
    p.min_contribution_members(ties);
    ties[rng.gen_range(0..ties.len())]
}

/// What happened to the offspring of one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Rejected,
    /// Offspring inserted; the member at `removed` (index into the mu+1 population) dropped.
    Accepted {
        removed: usize,
    },
}

/// State of one run between iterations.
#[derive(Debug, Clone)]
pub struct Engine {
    graph: Graph,
    algorithm: Algorithm,
    population: Population,
    rng: EdoRng,
    iterations: u64,
    checker: MatchingChecker,
    two_phase: TwoPhaseScratch,
    offspring: Matching,
    positions: Vec<usize>,
    ties: Vec<usize>,
    balanced: Option<BalancedFlips>,
    ones: Vec<usize>,
}

/// Law of standard bit mutation conditioned on keeping the matching size.
///
/// With `s` selected edges out of `m`, an offspring keeps its size iff it
/// flips as many ones as zeros; the number `k` of each is distributed as
/// `Bin(s, 1/m)` and `Bin(m - s, 1/m)` independently, whatever the parent.
#[derive(Debug, Clone)]
struct BalancedFlips {
    /// Offspring with `k >= 0`.
    any: SkipLaw,
    /// Offspring with `k >= 1`, i.e. different from their parent.
    moving: SkipLaw,
}

#[derive(Debug, Clone)]
struct SkipLaw {
    /// Probability that a single offspring belongs to the event.
    hit: f64,
    log_miss: f64,
    /// Conditional law of `k - offset`.
    pairs: Option<WeightedIndex<f64>>,
    offset: usize,
}

impl SkipLaw {
    fn new(weights: &[f64], offset: usize) -> Self {
        let hit = weights.iter().sum::<f64>().min(1.0);
        Self {
            hit,
            log_miss: (1.0 - hit).ln(),
            pairs: WeightedIndex::new(weights).ok(),
            offset,
        }
    }

    /// Number of offspring up to and including the next one in the event,
    /// or `u64::MAX` if the event is impossible.
    fn offspring_until_hit<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.hit >= 1.0 {
            return 1;
        }
        if self.hit <= 0.0 || self.pairs.is_none() {
            return u64::MAX;
        }
        let u = 1.0 - rng.gen::<f64>();
        let misses = (u.ln() / self.log_miss).floor();
        if misses >= (u64::MAX - 1) as f64 {
            u64::MAX
        } else {
            misses as u64 + 1
        }
    }

    fn pairs<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.offset + self.pairs.as_ref().map_or(0, |d| d.sample(rng))
    }
}

impl BalancedFlips {
    fn new(m: usize, s: usize) -> Self {
        let z = m - s;
        let p = 1.0 / m as f64;
        let odds = (p / (1.0 - p)).powi(2);
        let mut w = vec![(1.0 - p).powi(m as i32)];
        for k in 0..s.min(z) {
            let next = w[k] * ((s - k) * (z - k)) as f64 / ((k + 1) * (k + 1)) as f64 * odds;
            if next == 0.0 || !next.is_finite() {
                break;
            }
            w.push(next);
        }
        Self {
            any: SkipLaw::new(&w, 0),
            moving: SkipLaw::new(&w[1..], 1),
        }
    }
}

impl Engine {
    /// Assumes `population` holds only maximum matchings of `graph`; see [`RunConfig::validate`].
    pub fn new(graph: Graph, algorithm: Algorithm, population: Population, rng: EdoRng) -> Self {
        Self {
            graph,
            algorithm,
            rng,
            iterations: 0,
            checker: MatchingChecker::new(&graph),
            two_phase: TwoPhaseScratch::new(&graph),
            offspring: Matching::zeros(graph.m()),
            positions: Vec::new(),
            ties: Vec::new(),
            balanced: (algorithm == Algorithm::EaD)
                .then(|| BalancedFlips::new(graph.m(), graph.max_matching_size())),
            ones: Vec::new(),
            population,
        }
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn into_population(self) -> Population {
        self.population
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn diversity(&self) -> u64 {
        self.population.diversity()
    }

    /// Generates and evaluates one offspring.
    pub fn step(&mut self) -> StepOutcome {
        let g = self.graph;
        let mu = self.population.len();
        let parent_idx = self.rng.gen_range(0..mu);
        let parent = &self.population.members()[parent_idx];
        self.iterations += 1;

        let changed = match self.algorithm {
            Algorithm::EaD => {
                sample_uniform_rate(g.m(), &mut self.rng, &mut self.positions);
                if !self.positions.is_empty() {
                    // The parent is maximum, so the size must stay unchanged.
                    let removed = self.positions.iter().filter(|&&b| parent.get(b)).count();
                    if 2 * removed != self.positions.len() {
                        return StepOutcome::Rejected;
                    }
                    self.offspring.copy_from(parent);
                    for &b in &self.positions {
                        self.offspring.flip(b);
                    }
                    if !self.checker.is_valid(&g, &self.offspring) {
                        return StepOutcome::Rejected;
                    }
                }
                !self.positions.is_empty()
            }
            Algorithm::TwoPhase => {
                sample_uniform_rate(g.n(), &mut self.rng, &mut self.positions);
                if !self.positions.is_empty() {
                    self.positions.shuffle(&mut self.rng);
                    let rng = &mut self.rng;
                    self.two_phase
                        .apply(&g, parent, &mut self.offspring, &self.positions, |c| {
                            rng.gen_range(0..c.len())
                        });
                    if self.offspring.count_ones() != g.max_matching_size() {
                        return StepOutcome::Rejected;
                    }
                }
                !self.positions.is_empty()
            }
        };

        self.accept(parent_idx, changed)
    }

    /// Advances by at most `budget` offspring, skipping straight past offspring
    /// whose size differs from the parent's, and evaluates the first one that
    /// does not. Equivalent in distribution to repeated [`Engine::step`] calls;
    /// returns `Rejected` if the budget runs out first.
    pub fn leap(&mut self, budget: u64) -> StepOutcome {
        let Some(balanced) = self.balanced.as_ref() else {
            if budget == 0 {
                return StepOutcome::Rejected;
            }
            return self.step();
        };
        // With all members distinct, an unchanged offspring is accepted as a
        // duplicate and one of the two equal copies is removed again: the
        // population multiset is untouched, so such offspring are skipped too.
        let law = if self.population.unique_count() == self.population.len() {
            &balanced.moving
        } else {
            &balanced.any
        };
        let n = law.offspring_until_hit(&mut self.rng);
        if n > budget {
            self.iterations += budget;
            return StepOutcome::Rejected;
        }
        self.iterations += n;
        let k = law.pairs(&mut self.rng);
        let m = self.graph.m();
        let parent_idx = self.rng.gen_range(0..self.population.len());
        let parent = &self.population.members()[parent_idx];
        if k > 0 {
            self.ones.clear();
            self.ones.extend(parent.ones());
            self.positions.clear();
            for i in index::sample(&mut self.rng, self.ones.len(), k) {
                self.positions.push(self.ones[i]);
            }
            let mut zeros = 0;
            while zeros < k {
                let b = self.rng.gen_range(0..m);
                if !parent.get(b) && !self.positions[k..].contains(&b) {
                    self.positions.push(b);
                    zeros += 1;
                }
            }
            self.offspring.copy_from(parent);
            for &b in &self.positions {
                self.offspring.flip(b);
            }
            if !self.checker.is_valid(&self.graph, &self.offspring) {
                return StepOutcome::Rejected;
            }
        }
        self.accept(parent_idx, k > 0)
    }

    fn accept(&mut self, parent_idx: usize, changed: bool) -> StepOutcome {
        let before = self.population.diversity();
        let buffer = std::mem::replace(&mut self.offspring, Matching::zeros(0));
        if changed {
            self.population.push_unchecked(buffer);
        } else {
            self.population.push_copy(parent_idx, buffer);
        }
        let removed = select_min_contribution(&self.population, &mut self.rng, &mut self.ties);
        self.offspring = self
            .population
            .remove(removed)
            .expect("selected index is in range");
        debug_assert!(
            self.population.diversity() >= before,
            "diversity decreased from {before} to {}",
            self.population.diversity()
        );
        StepOutcome::Accepted { removed }
    }
}

/// Runs until the target diversity is reached or `max_iterations` offspring were generated.
///
/// Deterministic in `config`. A run counts as reaching the target once
/// `D(P) >= target`.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let target = config.target_diversity()?;
    let mut engine = Engine::new(
        config.graph,
        config.algorithm,
        config.initial_population.clone(),
        rng_from_seed(config.seed),
    );
    let stride = config.max_iterations.div_ceil(1000).max(1);
    let mut next_mark = stride;
    let mut trace = config.trace.then(|| vec![(0, engine.diversity())]);
    while engine.diversity() < target && engine.iterations() < config.max_iterations {
        engine.leap(config.max_iterations - engine.iterations());
        if let Some(t) = trace.as_mut() {
            if engine.iterations() >= next_mark {
                t.push((engine.iterations(), engine.diversity()));
                next_mark = (engine.iterations() / stride + 1) * stride;
            }
        }
    }
    let final_diversity = engine.diversity();
    if let Some(t) = trace.as_mut() {
        if t.last().map(|&(i, _)| i) != Some(engine.iterations()) {
            t.push((engine.iterations(), final_diversity));
        }
    }
    Ok(RunResult {
        iterations: engine.iterations(),
        reached_target: final_diversity >= target,
        final_diversity,
        target_diversity: target,
        diversity_trace: trace,
        final_population: engine.into_population(),
    })
}
