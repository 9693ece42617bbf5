//! Brute-force certification for the solvers: exhaustive optima over all
//! build orders, the per-period lower-bound series, structural audits of
//! one-pass scan traces, and the exchange-extension sanity check. Everything
//! here is deliberately independent of the solvers' shortcuts so it can
//! catch their bugs.

use crate::error::{Error, Result};
use crate::matroid::{
    closure, min_weight_basis, set_weight, ElementId, ElementSet, Instance, MatroidOracle, Weight,
};
use crate::solver::{BuildPlan, TraceSnapshot};

/// Default horizon cap for the exponential checks.
pub const DEFAULT_CAP: usize = 12;

/// Horizon cap for the quadratic-in-subsets extension check.
pub const EXTENSION_CAP: usize = 6;

/// Cheapest basis weight for every potential subset, indexed by bitmask over
/// `potential` (ascending-id bit order).
struct FTable {
    potential: Vec<ElementId>,
    f: Vec<Weight>,
}

fn f_table<O: MatroidOracle>(inst: &Instance<O>, cap: usize) -> Result<FTable> {
    inst.validate()?;
    let potential = inst.potential_ids();
    let t = potential.len();
    if t > cap {
        return Err(Error::CapExceeded { horizon: t, cap });
    }
    let existing = inst.existing_set();
    let mut f = Vec::with_capacity(1 << t);
    for mask in 0u32..(1u32 << t) {
        let mut available = existing.clone();
        for (i, &e) in potential.iter().enumerate() {
            if mask >> i & 1 == 1 {
                available.insert(e);
            }
        }
        let basis = min_weight_basis(&inst.oracle, &available, &inst.weights);
        f.push(set_weight(&basis, &inst.weights));
    }
    Ok(FTable { potential, f })
}

/// Exact optimum of the scheduling problem by dynamic programming over
/// subsets of the potential elements: the cost of a state is its own basis
/// weight plus the best completion.
pub fn brute_force_optimum<O: MatroidOracle>(inst: &Instance<O>, cap: usize) -> Result<Weight> {
    let table = f_table(inst, cap)?;
    let t = table.potential.len();
    let full = (1u32 << t) - 1;
    let mut best = vec![0 as Weight; 1 << t];
    for mask in (0..=full).rev() {
        let mut completion: Option<Weight> = None;
        for i in 0..t {
            if mask >> i & 1 == 0 {
                let next = best[(mask | (1 << i)) as usize];
                completion = Some(completion.map_or(next, |c: Weight| c.min(next)));
            }
        }
        best[mask as usize] = table.f[mask as usize] + completion.unwrap_or(0);
    }
    Ok(best[0])
}

/// The per-period lower-bound series: entry `t` is the cheapest basis weight
/// reachable with exactly `t` potential elements built. Strictly decreasing
/// until it reaches the ultimate weight, then constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSeries {
    pub values: Vec<Weight>,
}

impl FSeries {
    pub fn total(&self) -> Weight {
        self.values.iter().sum()
    }

    /// First index whose value equals the final (ultimate) value.
    pub fn stabilization_index(&self) -> usize {
        let last = *self.values.last().expect("series has entry 0");
        self.values.iter().position(|&v| v == last).unwrap()
    }

    /// Strictly decreasing up to the stabilization index, constant after.
    pub fn has_valid_shape(&self) -> bool {
        let t = self.stabilization_index();
        self.values.windows(2).enumerate().all(|(i, w)| {
            if i < t {
                w[0] > w[1]
            } else {
                w[0] == w[1]
            }
        })
    }
}

pub fn compute_f_series<O: MatroidOracle>(inst: &Instance<O>, cap: usize) -> Result<FSeries> {
    let table = f_table(inst, cap)?;
    let t = table.potential.len();
    let mut values = vec![Weight::MAX; t + 1];
    for (mask, &w) in table.f.iter().enumerate() {
        let size = (mask as u32).count_ones() as usize;
        values[size] = values[size].min(w);
    }
    Ok(FSeries { values })
}

/// A schedule is optimal exactly when its cost meets the sum of the series;
/// this checks that identity for the given plan.
pub fn check_lower_bound<O: MatroidOracle>(
    inst: &Instance<O>,
    plan: &BuildPlan,
    cap: usize,
) -> Result<bool> {
    let series = compute_f_series(inst, cap)?;
    Ok(plan.objective == series.total())
}

/// Outcome of one named structural check over a snapshot stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Scan position of the first violation, when any.
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub checks: Vec<TraceCheck>,
}

impl TraceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for TraceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for check in &self.checks {
            match (check.passed, check.first_failure) {
                (true, _) => writeln!(f, "{}: pass", check.name)?,
                (false, Some(p)) => writeln!(f, "{}: FAIL at position {p}", check.name)?,
                (false, None) => writeln!(f, "{}: FAIL", check.name)?,
            }
        }
        Ok(())
    }
}

const CONTAINMENT: usize = 0;
const CLOSURE_AGREEMENT: usize = 1;
const GROWTH_IS_POTENTIAL: usize = 2;
const INDEPENDENCE: usize = 3;
const REMOVED_LEDGER: usize = 4;
const ADDED_LEDGER: usize = 5;
const CIRCUIT_OVERLAP: usize = 6;
const FINAL_STATE: usize = 7;

/// Audits a one-pass scan trace position by position:
///
/// * `containment`: x is inside z, z inside x union y;
/// * `closure-agreement`: y and z always span the same elements;
/// * `growth-is-potential`: y never outgrows x with existing elements;
/// * `independence`: x, y, z stay independent;
/// * `removed-ledger` / `added-ledger`: x minus y and y minus z equal the
///   accumulated exchange sides h and h';
/// * `circuit-overlap`: each recorded circuit meets the added ledger only in
///   its own displaced element;
/// * `final-state`: the scan ends with x equal to z, and the symmetric
///   difference of x and y listing exactly the recorded exchange sides.
pub fn audit_trace<O: MatroidOracle>(
    inst: &Instance<O>,
    snapshots: &[TraceSnapshot],
) -> TraceReport {
    let names = [
        "containment",
        "closure-agreement",
        "growth-is-potential",
        "independence",
        "removed-ledger",
        "added-ledger",
        "circuit-overlap",
        "final-state",
    ];
    let mut checks: Vec<TraceCheck> = names
        .iter()
        .map(|&name| TraceCheck {
            name,
            passed: true,
            first_failure: None,
        })
        .collect();
    let fail = |checks: &mut Vec<TraceCheck>, idx: usize, pos: usize| {
        if checks[idx].passed {
            checks[idx].passed = false;
            checks[idx].first_failure = Some(pos);
        }
    };

    let ground = inst.ground_size();
    let mut removed_side: Vec<ElementId> = Vec::new();
    let mut added_side: Vec<ElementId> = Vec::new();

    for snap in snapshots {
        let p = snap.position;
        if let Some(event) = &snap.exchange {
            removed_side.push(event.pair.removed);
            added_side.push(event.pair.added);
            let overlap = event.circuit.intersection(&snap.h_prime);
            if overlap.to_vec() != vec![event.pair.added] {
                fail(&mut checks, CIRCUIT_OVERLAP, p);
            }
        }
        if !(snap.x.is_subset_of(&snap.z) && snap.z.is_subset_of(&snap.x.union(&snap.y))) {
            fail(&mut checks, CONTAINMENT, p);
        }
        if closure(&inst.oracle, &snap.y) != closure(&inst.oracle, &snap.z) {
            fail(&mut checks, CLOSURE_AGREEMENT, p);
        }
        if snap.y.difference(&snap.x).iter().any(|e| inst.is_existing(e)) {
            fail(&mut checks, GROWTH_IS_POTENTIAL, p);
        }
        if !(inst.oracle.is_independent(&snap.x)
            && inst.oracle.is_independent(&snap.y)
            && inst.oracle.is_independent(&snap.z))
        {
            fail(&mut checks, INDEPENDENCE, p);
        }
        if snap.x.difference(&snap.y) != snap.h {
            fail(&mut checks, REMOVED_LEDGER, p);
        }
        if snap.y.difference(&snap.z) != snap.h_prime {
            fail(&mut checks, ADDED_LEDGER, p);
        }
    }

    let (final_x, final_y, final_z) = match snapshots.last() {
        Some(s) => (s.x.clone(), s.y.clone(), s.z.clone()),
        None => (
            ElementSet::empty(ground),
            ElementSet::empty(ground),
            ElementSet::empty(ground),
        ),
    };
    let last_pos = snapshots.last().map_or(0, |s| s.position);
    let removed_set = ElementSet::from_ids(ground, removed_side.iter().copied());
    let added_set = ElementSet::from_ids(ground, added_side.iter().copied());
    if final_x != final_z
        || final_x.difference(&final_y) != removed_set
        || final_y.difference(&final_x) != added_set
    {
        fail(&mut checks, FINAL_STATE, last_pos);
    }

    TraceReport { checks }
}

/// A minimal pair of optimal states that cannot be linked by building one
/// element, disproving the exchange-extension property (never expected).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCounterexample {
    pub level: usize,
    pub from: Vec<ElementId>,
    pub to: Vec<ElementId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub levels_checked: usize,
    pub pairs_checked: usize,
    pub counterexample: Option<ExtensionCounterexample>,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Verifies that every optimal state of size `k` can reach some optimal
/// state of size `k + 1` by building a single element of any optimal target
/// state: the structural fact that lets one greedy exchange per period stay
/// globally optimal.
pub fn check_extension_property<O: MatroidOracle>(inst: &Instance<O>) -> Result<ExtensionReport> {
    let table = f_table(inst, EXTENSION_CAP)?;
    let t = table.potential.len();
    let series = compute_f_series(inst, EXTENSION_CAP)?;
    let stabilization = series.stabilization_index();

    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); t + 1];
    for mask in 0u32..(1u32 << t) {
        by_size[mask.count_ones() as usize].push(mask);
    }

    let ids_of = |mask: u32| -> Vec<ElementId> {
        (0..t)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| table.potential[i])
            .collect()
    };

    let mut pairs_checked = 0;
    for k in 0..stabilization {
        let optimal_from: Vec<u32> = by_size[k]
            .iter()
            .copied()
            .filter(|&m| table.f[m as usize] == series.values[k])
            .collect();
        let optimal_to: Vec<u32> = by_size[k + 1]
            .iter()
            .copied()
            .filter(|&m| table.f[m as usize] == series.values[k + 1])
            .collect();
        for &from in &optimal_from {
            for &to in &optimal_to {
                pairs_checked += 1;
                let fresh = to & !from;
                let linked = (0..t).any(|i| {
                    fresh >> i & 1 == 1
                        && table.f[(from | (1 << i)) as usize] == series.values[k + 1]
                });
                if !linked {
                    return Ok(ExtensionReport {
                        levels_checked: stabilization,
                        pairs_checked,
                        counterexample: Some(ExtensionCounterexample {
                            level: k,
                            from: ids_of(from),
                            to: ids_of(to),
                        }),
                    });
                }
            }
        }
    }
    Ok(ExtensionReport {
        levels_checked: stabilization,
        pairs_checked,
        counterexample: None,
    })
}
