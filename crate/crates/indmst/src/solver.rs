//! Construction-order solvers.
//!
//! The task: every potential element must eventually be built, one per
//! period, and each period pays the weight of a minimum-weight basis over
//! everything available so far. All three solvers return schedules whose
//! total cost is exactly optimal; they differ in how much work they do.
//!
//! * [`greedy_solve`]: repeatedly applies the globally best exchange pair.
//!   Simple, oracle-hungry, the reference implementation.
//! * [`simplified_greedy_solve`]: fixes one ultimate minimum-weight basis up
//!   front and only considers exchanges into it.
//! * [`efficient_solve`] / [`efficient_solve_graph`]: a single scan over the
//!   elements in weight order that produces the initial basis, the ultimate
//!   basis, and the whole exchange schedule at once. The graph variant runs
//!   in O(max(n^2, m log m)) with incremental union-find and forest search.

use crate::error::{Error, Result};
use crate::graph::{Graph, UnionFind};
use crate::matroid::{
    find_circuit, min_weight_basis, set_weight, ElementId, ElementSet, Instance, MatroidOracle,
    Weight,
};

/// One basis exchange: `removed` leaves the working basis, `added` (a newly
/// built potential element) replaces it. `gain` is always
/// `w(removed) - w(added)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExchangePair {
    pub removed: ElementId,
    pub added: ElementId,
    pub gain: Weight,
}

impl ExchangePair {
    fn new(removed: ElementId, added: ElementId, weights: &[Weight]) -> Self {
        ExchangePair {
            removed,
            added,
            gain: weights[removed] - weights[added],
        }
    }
}

/// A full construction schedule plus enough data to audit it.
///
/// `step_weights[0]` is the weight of the initial basis; entry `i` is the
/// basis weight after applying exchange `i`. The final entry always equals
/// `ultimate_weight`, and the weights are strictly decreasing. Potential
/// elements that never improve the basis are built afterwards in ascending
/// id order at `ultimate_weight` per period; `objective` accounts for them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildPlan {
    pub initial_basis: ElementSet,
    pub exchanges: Vec<ExchangePair>,
    pub step_weights: Vec<Weight>,
    pub ultimate_weight: Weight,
    pub horizon: usize,
    pub objective: Weight,
}

impl BuildPlan {
    fn assemble(
        initial_basis: ElementSet,
        exchanges: Vec<ExchangePair>,
        start_weight: Weight,
        ultimate_weight: Weight,
        horizon: usize,
    ) -> Result<Self> {
        if exchanges.len() > horizon {
            return Err(Error::InternalInvariantBroken(
                "more improving exchanges than potential elements",
            ));
        }
        let mut step_weights = Vec::with_capacity(exchanges.len() + 1);
        let mut w = start_weight;
        step_weights.push(w);
        for pair in &exchanges {
            if pair.gain <= 0 {
                return Err(Error::InternalInvariantBroken(
                    "non-improving exchange survived into a plan",
                ));
            }
            w -= pair.gain;
            step_weights.push(w);
        }
        if w != ultimate_weight {
            return Err(Error::InternalInvariantBroken(
                "exchange gains do not close the gap to the ultimate basis weight",
            ));
        }
        let mut plan = BuildPlan {
            initial_basis,
            exchanges,
            step_weights,
            ultimate_weight,
            horizon,
            objective: 0,
        };
        plan.objective = objective_value(&plan);
        Ok(plan)
    }

    /// Ids of the potential elements in build order (improving steps only).
    pub fn order(&self) -> Vec<ElementId> {
        self.exchanges.iter().map(|p| p.added).collect()
    }

    /// Number of weight-improving build steps.
    pub fn improving_steps(&self) -> usize {
        self.exchanges.len()
    }
}

/// Total cost of a schedule: the improving steps pay their own basis
/// weights, and the remaining `horizon - k` builds each pay the ultimate
/// weight.
pub fn objective_value(plan: &BuildPlan) -> Weight {
    let steps: Weight = plan.step_weights.iter().sum();
    let tail = (plan.horizon - plan.exchanges.len()) as Weight;
    steps + tail * plan.ultimate_weight
}

/// The bases a plan walks through: `X_0` and then one set per exchange.
pub fn replay_bases(initial: &ElementSet, exchanges: &[ExchangePair]) -> Vec<ElementSet> {
    let mut out = Vec::with_capacity(exchanges.len() + 1);
    out.push(initial.clone());
    let mut cur = initial.clone();
    for pair in exchanges {
        cur.remove(pair.removed);
        cur.insert(pair.added);
        out.push(cur.clone());
    }
    out
}

/// Cheapest basis weight once the potential elements in `a` are available.
pub fn f_eval<O: MatroidOracle>(inst: &Instance<O>, a: &ElementSet) -> Weight {
    let available = inst.existing_set().union(a);
    let basis = min_weight_basis(&inst.oracle, &available, &inst.weights);
    set_weight(&basis, &inst.weights)
}

/// Cheapest basis over `available + e`, obtained from a cheapest basis
/// `x_a` over the available elements by one exchange: `e` enters and the
/// heaviest element of the resulting circuit (lowest id on ties) leaves.
/// Returns the updated basis and the removed element, or `None` removed if
/// `e` extended the basis outright.
pub fn basis_update<O: MatroidOracle>(
    inst: &Instance<O>,
    x_a: &ElementSet,
    e: ElementId,
) -> Result<(ElementSet, Option<ElementId>)> {
    if x_a.contains(e) {
        return Err(Error::PreconditionViolated(
            "basis_update element is already in the basis",
        ));
    }
    let extended = x_a.plus(e);
    if inst.oracle.is_independent(&extended) {
        return Ok((extended, None));
    }
    let circuit = find_circuit(&inst.oracle, x_a, e)?;
    let mut heaviest: Option<ElementId> = None;
    for f in circuit.iter() {
        let better = match heaviest {
            None => true,
            Some(cur) => inst.weight(f) > inst.weight(cur),
        };
        if better {
            heaviest = Some(f);
        }
    }
    let out = heaviest.expect("a circuit is never empty");
    Ok((extended.minus(out), Some(out)))
}

/// All exchange pairs `(removed, added)` for the basis `x`: `added` ranges
/// over candidates outside `x` (restricted to `restrict_to` when given),
/// `removed` over the circuit that `added` closes. Sorted by descending
/// gain, then ascending `(removed, added)` ids.
pub fn enumerate_exchange_pairs<O: MatroidOracle>(
    inst: &Instance<O>,
    x: &ElementSet,
    restrict_to: Option<&ElementSet>,
) -> Vec<ExchangePair> {
    let mut pairs = Vec::new();
    let candidates: Vec<ElementId> = match restrict_to {
        Some(r) => r.difference(x).to_vec(),
        None => (0..inst.ground_size()).filter(|&e| !x.contains(e)).collect(),
    };
    for added in candidates {
        let extended = x.plus(added);
        if inst.oracle.is_independent(&extended) {
            continue;
        }
        let circuit =
            find_circuit(&inst.oracle, x, added).expect("x independent, extension dependent");
        for removed in circuit.iter() {
            if removed != added {
                pairs.push(ExchangePair::new(removed, added, &inst.weights));
            }
        }
    }
    pairs.sort_unstable_by(|a, b| {
        b.gain
            .cmp(&a.gain)
            .then(a.removed.cmp(&b.removed))
            .then(a.added.cmp(&b.added))
    });
    pairs
}

/// Reference solver: start from the cheapest basis over the existing
/// elements and repeatedly apply the best exchange pair anywhere until the
/// ultimate basis weight is reached.
pub fn greedy_solve<O: MatroidOracle>(inst: &Instance<O>) -> Result<BuildPlan> {
    inst.validate()?;
    let ultimate = min_weight_basis(&inst.oracle, &inst.full_set(), &inst.weights);
    let w_star = set_weight(&ultimate, &inst.weights);
    let mut x = min_weight_basis(&inst.oracle, &inst.existing_set(), &inst.weights);
    let initial = x.clone();
    let start_weight = set_weight(&x, &inst.weights);

    let mut exchanges = Vec::new();
    let mut w = start_weight;
    while w > w_star {
        let best = enumerate_exchange_pairs(inst, &x, None)
            .into_iter()
            .next()
            .filter(|p| p.gain > 0)
            .ok_or(Error::InternalInvariantBroken(
                "no improving exchange although the basis is not yet ultimate",
            ))?;
        x.remove(best.removed);
        x.insert(best.added);
        w -= best.gain;
        exchanges.push(best);
    }
    BuildPlan::assemble(initial, exchanges, start_weight, w_star, inst.horizon())
}

/// Like [`greedy_solve`] but fixes the ultimate minimum-weight basis once
/// and restricts every exchange to pull elements from it. Produces the same
/// objective with far fewer candidate pairs per step.
pub fn simplified_greedy_solve<O: MatroidOracle>(inst: &Instance<O>) -> Result<BuildPlan> {
    inst.validate()?;
    let ultimate = min_weight_basis(&inst.oracle, &inst.full_set(), &inst.weights);
    let w_star = set_weight(&ultimate, &inst.weights);
    let mut x = min_weight_basis(&inst.oracle, &inst.existing_set(), &inst.weights);
    let initial = x.clone();
    let start_weight = set_weight(&x, &inst.weights);

    let mut exchanges = Vec::new();
    let mut w = start_weight;
    while w > w_star {
        let best = enumerate_exchange_pairs(inst, &x, Some(&ultimate))
            .into_iter()
            .next()
            .filter(|p| p.gain > 0)
            .ok_or(Error::InternalInvariantBroken(
                "no improving exchange into the ultimate basis",
            ))?;
        x.remove(best.removed);
        x.insert(best.added);
        w -= best.gain;
        exchanges.push(best);
    }
    BuildPlan::assemble(initial, exchanges, start_weight, w_star, inst.horizon())
}

/// The exchange recorded at one scan position, together with the circuit
/// that forced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeEvent {
    pub circuit: ElementSet,
    pub pair: ExchangePair,
}

/// State of the one-pass scan after processing the element at `position`
/// (1-based in scan order). `x` grows toward the initial basis, `y` toward
/// the ultimate basis, and `z` tracks the working overlay whose circuits
/// yield the exchange schedule; `h` and `h_prime` accumulate the removed and
/// added sides of the recorded exchanges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSnapshot {
    pub position: usize,
    pub x: ElementSet,
    pub y: ElementSet,
    pub z: ElementSet,
    pub h: ElementSet,
    pub h_prime: ElementSet,
    pub exchange: Option<ExchangeEvent>,
}

/// Shared tail of both one-pass solvers: order the recorded exchanges by
/// descending gain (ties resolved toward the later-recorded pair), keep the
/// improving prefix, and package the plan.
fn assemble_scanned_plan(
    initial_basis: ElementSet,
    recorded: Vec<ExchangePair>,
    start_weight: Weight,
    ultimate_weight: Weight,
    horizon: usize,
) -> Result<BuildPlan> {
    let total_gain: Weight = recorded.iter().map(|p| p.gain).sum();
    if start_weight - total_gain != ultimate_weight {
        return Err(Error::InternalInvariantBroken(
            "recorded gains do not span the initial-to-ultimate weight gap",
        ));
    }
    let mut indexed: Vec<(usize, ExchangePair)> = recorded.into_iter().enumerate().collect();
    indexed.sort_unstable_by(|(ia, a), (ib, b)| b.gain.cmp(&a.gain).then(ib.cmp(ia)));
    let exchanges: Vec<ExchangePair> = indexed
        .into_iter()
        .map(|(_, p)| p)
        .take_while(|p| p.gain > 0)
        .collect();
    BuildPlan::assemble(
        initial_basis,
        exchanges,
        start_weight,
        ultimate_weight,
        horizon,
    )
}

/// One-pass solver over any independence oracle. Scans elements by
/// ascending `(weight, id)`; existing elements grow the initial basis `x`,
/// all elements grow the ultimate basis `y`, and a working set `z` records
/// which cheap potential element each accepted existing element displaces.
/// With `want_trace` set, returns a per-position snapshot stream for
/// auditing.
pub fn efficient_solve<O: MatroidOracle>(
    inst: &Instance<O>,
    want_trace: bool,
) -> Result<(BuildPlan, Option<Vec<TraceSnapshot>>)> {
    inst.validate()?;
    let ground = inst.ground_size();
    let mut x = ElementSet::empty(ground);
    let mut y = ElementSet::empty(ground);
    let mut z = ElementSet::empty(ground);
    let mut h = ElementSet::empty(ground);
    let mut h_prime = ElementSet::empty(ground);
    let mut recorded: Vec<ExchangePair> = Vec::new();
    let mut snapshots = want_trace.then(Vec::new);

    for (i, e) in inst.ids_by_weight().into_iter().enumerate() {
        let mut event = None;
        if inst.is_existing(e) {
            let extended = x.plus(e);
            if inst.oracle.is_independent(&extended) {
                x = extended;
                if inst.oracle.is_independent(&z.plus(e)) {
                    z.insert(e);
                } else {
                    let circuit = find_circuit(&inst.oracle, &z, e)?;
                    let displaced = cheapest_victim(&circuit, inst)?;
                    z.insert(e);
                    z.remove(displaced);
                    let pair = ExchangePair::new(e, displaced, &inst.weights);
                    recorded.push(pair);
                    h.insert(e);
                    h_prime.insert(displaced);
                    event = Some(ExchangeEvent { circuit, pair });
                }
            }
        }
        let y_extended = y.plus(e);
        if inst.oracle.is_independent(&y_extended) {
            y = y_extended;
            z.insert(e);
        }
        if let Some(snaps) = snapshots.as_mut() {
            snaps.push(TraceSnapshot {
                position: i + 1,
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
                h: h.clone(),
                h_prime: h_prime.clone(),
                exchange: event,
            });
        }
    }

    let plan = assemble_scanned_plan(
        x.clone(),
        recorded,
        set_weight(&x, &inst.weights),
        set_weight(&y, &inst.weights),
        inst.horizon(),
    )?;
    Ok((plan, snapshots))
}

/// Heaviest potential element on the circuit, lowest id on ties. This is
/// the element the newly accepted existing element displaces.
fn cheapest_victim<O: MatroidOracle>(
    circuit: &ElementSet,
    inst: &Instance<O>,
) -> Result<ElementId> {
    let mut best: Option<ElementId> = None;
    for f in circuit.iter() {
        if inst.is_existing(f) {
            continue;
        }
        let better = match best {
            None => true,
            Some(cur) => inst.weight(f) > inst.weight(cur),
        };
        if better {
            best = Some(f);
        }
    }
    best.ok_or(Error::InternalInvariantBroken(
        "circuit contains no potential element to displace",
    ))
}

/// Graph fast path of [`efficient_solve`]: identical scan and output, but
/// independence tests run on two incremental union-find structures and each
/// circuit is recovered by one DFS over the working forest.
pub fn efficient_solve_graph(
    g: &Graph,
    want_trace: bool,
) -> Result<(BuildPlan, Option<Vec<TraceSnapshot>>)> {
    crate::graph::validate_instance(g)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let edges = g.edges();

    let mut order: Vec<u32> = (0..m as u32).collect();
    order.sort_unstable_by_key(|&e| (edges[e as usize].weight, e));

    let mut uf_x = UnionFind::new(n);
    let mut uf_y = UnionFind::new(n);
    let mut forest = ZForest::new(n);
    let mut x_ids: Vec<ElementId> = Vec::new();
    let mut y_ids: Vec<ElementId> = Vec::new();
    let mut recorded: Vec<ExchangePair> = Vec::new();
    let weights = g.weights();

    let mut trace = want_trace.then(|| TraceBuilder::new(m));

    for (i, &eid) in order.iter().enumerate() {
        let e = eid as ElementId;
        let (u, v, existing) = (edges[e].u, edges[e].v, edges[e].existing);
        let mut event: Option<(Vec<ElementId>, ExchangePair)> = None;
        if existing && u != v && uf_x.union(u, v) {
            x_ids.push(e);
            if let Some(path) = forest.path(u, v) {
                // path + e closes the cycle; displace its heaviest potential edge
                let mut displaced: Option<ElementId> = None;
                for &pe in &path {
                    if edges[pe].existing {
                        continue;
                    }
                    let better = match displaced {
                        None => true,
                        Some(cur) => {
                            weights[pe] > weights[cur]
                                || (weights[pe] == weights[cur] && pe < cur)
                        }
                    };
                    if better {
                        displaced = Some(pe);
                    }
                }
                let displaced = displaced.ok_or(Error::InternalInvariantBroken(
                    "cycle in the working forest has no potential edge",
                ))?;
                let de = &edges[displaced];
                forest.remove(de.u, de.v, displaced);
                forest.add(u, v, e);
                let pair = ExchangePair::new(e, displaced, &weights);
                recorded.push(pair);
                if trace.is_some() {
                    let mut cycle = path;
                    cycle.push(e);
                    event = Some((cycle, pair));
                }
            } else {
                forest.add(u, v, e);
            }
        }
        if u != v && uf_y.union(u, v) {
            y_ids.push(e);
            if !forest.holds(e) {
                forest.add(u, v, e);
            }
        }
        if let Some(t) = trace.as_mut() {
            t.record(i + 1, &x_ids, &y_ids, &forest, event);
        }
    }

    let start_weight: Weight = x_ids.iter().map(|&e| weights[e]).sum();
    let ultimate_weight: Weight = y_ids.iter().map(|&e| weights[e]).sum();
    let plan = assemble_scanned_plan(
        ElementSet::from_ids(m, x_ids.iter().copied()),
        recorded,
        start_weight,
        ultimate_weight,
        g.horizon(),
    )?;
    Ok((plan, trace.map(|t| t.snapshots)))
}

/// Incremental forest over the vertex set with edge-id labels: supports
/// insert, delete, membership, and path recovery between two vertices.
struct ZForest {
    adj: Vec<Vec<(u32, u32)>>,
    in_forest: Vec<bool>,
    stamp: Vec<u32>,
    prev: Vec<(u32, u32)>,
    round: u32,
}

impl ZForest {
    fn new(n: usize) -> Self {
        ZForest {
            adj: vec![Vec::new(); n],
            in_forest: Vec::new(),
            stamp: vec![0; n],
            prev: vec![(0, 0); n],
            round: 0,
        }
    }

    fn holds(&self, e: ElementId) -> bool {
        self.in_forest.get(e).copied().unwrap_or(false)
    }

    fn mark(&mut self, e: ElementId, present: bool) {
        if self.in_forest.len() <= e {
            self.in_forest.resize(e + 1, false);
        }
        self.in_forest[e] = present;
    }

    fn add(&mut self, u: usize, v: usize, e: ElementId) {
        self.adj[u].push((v as u32, e as u32));
        self.adj[v].push((u as u32, e as u32));
        self.mark(e, true);
    }

    fn remove(&mut self, u: usize, v: usize, e: ElementId) {
        for vert in [u, v] {
            if let Some(pos) = self.adj[vert].iter().position(|&(_, id)| id == e as u32) {
                self.adj[vert].swap_remove(pos);
            }
        }
        self.mark(e, false);
    }

    /// Edge ids along the forest path from `u` to `v`, or None when the
    /// endpoints sit in different trees.
    fn path(&mut self, u: usize, v: usize) -> Option<Vec<ElementId>> {
        self.round += 1;
        self.stamp[u] = self.round;
        let mut stack = vec![u as u32];
        let mut reached = false;
        while let Some(at) = stack.pop() {
            if at as usize == v {
                reached = true;
                break;
            }
            for &(to, via) in &self.adj[at as usize] {
                if self.stamp[to as usize] != self.round {
                    self.stamp[to as usize] = self.round;
                    self.prev[to as usize] = (at, via);
                    stack.push(to);
                }
            }
        }
        if !reached {
            return None;
        }
        let mut path = Vec::new();
        let mut at = v;
        while at != u {
            let (back, via) = self.prev[at];
            path.push(via as ElementId);
            at = back as usize;
        }
        Some(path)
    }

    fn to_set(&self, ground: usize) -> ElementSet {
        ElementSet::from_ids(
            ground,
            self.in_forest
                .iter()
                .enumerate()
                .filter_map(|(e, &held)| held.then_some(e)),
        )
    }
}

/// Snapshot accumulator for the graph fast path.
struct TraceBuilder {
    ground: usize,
    h: ElementSet,
    h_prime: ElementSet,
    snapshots: Vec<TraceSnapshot>,
}

impl TraceBuilder {
    fn new(ground: usize) -> Self {
        TraceBuilder {
            ground,
            h: ElementSet::empty(ground),
            h_prime: ElementSet::empty(ground),
            snapshots: Vec::new(),
        }
    }

    fn record(
        &mut self,
        position: usize,
        x_ids: &[ElementId],
        y_ids: &[ElementId],
        forest: &ZForest,
        event: Option<(Vec<ElementId>, ExchangePair)>,
    ) {
        let exchange = event.map(|(cycle, pair)| {
            self.h.insert(pair.removed);
            self.h_prime.insert(pair.added);
            ExchangeEvent {
                circuit: ElementSet::from_ids(self.ground, cycle),
                pair,
            }
        });
        self.snapshots.push(TraceSnapshot {
            position,
            x: ElementSet::from_ids(self.ground, x_ids.iter().copied()),
            y: ElementSet::from_ids(self.ground, y_ids.iter().copied()),
            z: forest.to_set(self.ground),
            h: self.h.clone(),
            h_prime: self.h_prime.clone(),
            exchange,
        });
    }
}
