//! Horn solver: seeded closure search.
//!
//! Definite Horn clauses have a unique minimal model above any seed set,
//! computed by unit propagation in time linear in the clause sizes. The
//! modular side constraint is handled by trying every seed up to a round
//! budget R and checking where each closure's weight lands: once weights
//! are rewritten to 0/1 form, a budget of M-1 is provably enough for
//! prime-power M, and a budget of n is always enough.

use std::collections::HashMap;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::group::Assignment;
use crate::instance::{normalize_unit_weights_horn, HornInstance};
use crate::reduce::flatten_horn;
use crate::subsets::{binom_sum_saturating, subsets_by_weight};

/// Hard cap on the number of propagation seeds one solve may visit.
pub const MAX_SEEDS: u64 = 10_000_000;

/// Round budget: how large the propagation seeds may grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounds {
    /// M-1 rounds when the single modulus M is a prime power; fails
    /// loudly otherwise, because no budget below n is known to be
    /// complete there.
    Auto,
    /// Explicit budget. Values above the variable count are clamped;
    /// negative values are rejected.
    Fixed(i64),
}

#[derive(Debug, Clone)]
pub struct HornSolveConfig {
    pub rounds: Rounds,
    /// Refuse instances whose 0/1-weight rewrite exceeds this many
    /// variables.
    pub max_vars_after_normalize: usize,
}

impl Default for HornSolveConfig {
    fn default() -> Self {
        HornSolveConfig {
            rounds: Rounds::Auto,
            max_vars_after_normalize: 4096,
        }
    }
}

/// Minimal model of the clauses and forced-true units above `seed`, or
/// None when that closure hits a variable forced false. The side
/// constraint is ignored here.
///
/// Each clause keeps a counter of body variables not yet true; a
/// variable turning true decrements the counters of the clauses watching
/// it, and a counter hitting zero fires the head. Total work is linear
/// in the sum of clause sizes.
pub fn find_minimal(inst: &HornInstance, seed: &Assignment) -> Option<Assignment> {
    assert_eq!(seed.bits().len(), inst.n, "seed length mismatch");
    let n = inst.n;
    let mut val = vec![false; n];
    let mut queue: Vec<u32> = Vec::new();
    for (v, &b) in seed.bits().iter().enumerate() {
        if b && !val[v] {
            val[v] = true;
            queue.push(v as u32);
        }
    }
    for &(v, b) in &inst.units {
        if b && !val[v as usize] {
            val[v as usize] = true;
            queue.push(v);
        }
    }

    let mut watching: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(inst.clauses.len());
    for (ci, c) in inst.clauses.iter().enumerate() {
        missing.push(c.body.len());
        for &b in &c.body {
            watching[b as usize].push(ci as u32);
        }
    }

    let mut head = 0;
    while head < queue.len() {
        let v = queue[head] as usize;
        head += 1;
        for &ci in &watching[v] {
            let ci = ci as usize;
            missing[ci] -= 1;
            if missing[ci] == 0 {
                let h = inst.clauses[ci].head as usize;
                if !val[h] {
                    val[h] = true;
                    queue.push(h as u32);
                }
            }
        }
    }

    if inst.units.iter().any(|&(v, b)| !b && val[v as usize]) {
        return None;
    }
    let out = Assignment::new(val);
    debug_assert!(out.bits().iter().zip(seed.bits()).all(|(&o, &s)| o >= s));
    debug_assert!(inst.clauses.iter().all(|c| c.satisfied(&out)));
    Some(out)
}

/// Try every propagation seed of weight at most `rounds` against every
/// allowed residue, smallest residue first, seeds by weight then
/// colexicographic; the first hit wins.
///
/// Expects the 0/1-weight single-modulus form produced by
/// `normalize_unit_weights_horn`; each closure's residue is memoized so
/// the target loop pays for propagation only once per seed.
pub fn solve_rounds(inst: &HornInstance, rounds: i64) -> Result<Option<Assignment>> {
    if rounds < 0 {
        return Err(Error::InvalidRounds(format!(
            "round budget {rounds} is negative"
        )));
    }
    debug_assert_eq!(inst.side.group.components(), 1);
    debug_assert!(inst.side.zero_based() && inst.side.is_unit_or_zero());
    let n = inst.n;
    let budget = (rounds as u64).min(n as u64) as usize;
    let seeds = binom_sum_saturating(n, budget);
    if seeds > MAX_SEEDS {
        return Err(Error::SizeLimit(format!(
            "budget {rounds} over {n} variables means {seeds} seeds, cap is {MAX_SEEDS}"
        )));
    }

    let mut memo: HashMap<Vec<usize>, Option<u64>> = HashMap::new();
    for a in &inst.side.allowed {
        let want = inst.side.group.encode(a);
        for seed_vars in subsets_by_weight(n, budget) {
            let residue = match memo.get(&seed_vars) {
                Some(&r) => r,
                None => {
                    let r = match find_minimal(inst, &seed_assignment(n, &seed_vars)) {
                        None => None,
                        Some(c) => Some(inst.side.group.encode(&inst.side.eval(&c)?.0)),
                    };
                    memo.insert(seed_vars.clone(), r);
                    r
                }
            };
            if residue == Some(want) {
                let closure = find_minimal(inst, &seed_assignment(n, &seed_vars))
                    .expect("memoized closure exists");
                return Ok(Some(closure));
            }
        }
    }
    Ok(None)
}

fn seed_assignment(n: usize, vars: &[usize]) -> Assignment {
    let mut bits = vec![false; n];
    for &v in vars {
        bits[v] = true;
    }
    Assignment::new(bits)
}

/// Full pipeline: flatten a product group to a single modulus, rewrite
/// weights to 0/1 form, resolve the round budget, run the seeded search,
/// and project the result back. Returned assignments are re-verified
/// against the original instance.
pub fn solve(inst: &HornInstance, cfg: &HornSolveConfig) -> Result<Option<Assignment>> {
    let answer = if inst.side.group.components() > 1 {
        // Flattening needs a single target tuple, so the allowed set is
        // retried one tuple at a time, smallest first.
        let mut found = None;
        for a in &inst.side.allowed {
            let mut side = inst.side.clone();
            side.allowed = std::collections::BTreeSet::from([a.clone()]);
            let restricted = HornInstance::new(
                inst.n,
                inst.clauses.clone(),
                inst.units.clone(),
                side,
            )?;
            let flat = flatten_horn(&restricted)?;
            if let Some(sol) = solve_single(&flat.inst, cfg)? {
                found = Some(flat.lift(&sol));
                break;
            }
        }
        found
    } else {
        solve_single(inst, cfg)?
    };
    if let Some(sol) = &answer {
        assert!(
            inst.satisfied(sol)?,
            "internal error: solver output failed verification"
        );
    }
    Ok(answer)
}

/// Single-modulus path of [`solve`].
fn solve_single(inst: &HornInstance, cfg: &HornSolveConfig) -> Result<Option<Assignment>> {
    let norm = normalize_unit_weights_horn(inst)?;
    if norm.inst.n > cfg.max_vars_after_normalize {
        return Err(Error::SizeLimit(format!(
            "0/1 rewrite has {} variables, cap is {}",
            norm.inst.n, cfg.max_vars_after_normalize
        )));
    }
    let rounds = match cfg.rounds {
        Rounds::Fixed(r) => r,
        Rounds::Auto => {
            let m = norm.inst.side.group.moduli()[0];
            if prime_power(m as u64).is_some() {
                (m - 1) as i64
            } else {
                return Err(Error::AutoRoundsUnavailable(m));
            }
        }
    };
    Ok(solve_rounds(&norm.inst, rounds)?.map(|sol| norm.lift(&sol)))
}
