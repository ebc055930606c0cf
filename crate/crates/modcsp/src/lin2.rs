//! XOR-linear solver: solution-space search with dimension bounds.
//!
//! The XOR part reduces to an affine subspace by Gaussian elimination;
//! what remains is finding a point of prescribed weight residue inside
//! it. Two searches are offered: a deterministic sweep over basis
//! subsets of bounded size, and uniform sampling. Both budgets come from
//! an unconditional bound on the largest dimension where a weight
//! residue can pin a unique point; past that dimension, solutions are
//! plentiful enough that small subsets or few samples suffice.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::gf2::{solve_linear_system, AffineSubspace, BitVec};
use crate::group::Assignment;
use crate::horn::Rounds;
use crate::instance::{normalize_unit_weights_lin2, Lin2Instance};
use crate::reduce::flatten_lin2;
use crate::subsets::{binom_sum_saturating, subsets_by_weight};

/// Hard cap on points the deterministic sweep may visit.
pub const MAX_POINTS: u64 = 10_000_000;

/// Hard cap on sampling trials.
pub const MAX_TRIALS: u64 = 10_000_000;

/// Largest subspace dimension the exhaustive fallback will enumerate.
pub const MAX_EXHAUSTIVE_DIM: usize = 24;

/// Trial budget for the randomized search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trials {
    /// 4 * 2^bound trials, switching to exhaustive enumeration when
    /// that reaches the subspace size.
    Auto,
    /// Explicit trial count, at least 1.
    Fixed(i64),
}

/// Where a dimension bound came from and what it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionBound {
    pub modulus: u32,
    pub n: usize,
    pub bound: u32,
    pub provenance: &'static str,
}

/// Upper bound on the largest dimension of an affine subspace of
/// GF(2)^n in which some weight residue mod m picks out exactly one
/// point. Never exceeds n. Uses the default heuristic factor 8 for the
/// mixed case; see [`dimension_bound_with_factor`].
pub fn dimension_bound(n: usize, m: u32) -> Result<DimensionBound> {
    dimension_bound_with_factor(n, m, 8)
}

/// [`dimension_bound`] with the constant of the 4 * odd-part case made
/// explicit. In that case only the growth order of the bound is pinned
/// down, not the constant, so it stays a knob; everything else is exact.
pub fn dimension_bound_with_factor(n: usize, m: u32, factor: u32) -> Result<DimensionBound> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is too small")));
    }
    let facs = factorize(m as u64);
    let nb = n as u64;
    let (bound, provenance) = if facs.len() == 1 && facs[0].0 == 2 {
        ((m as u64 - 1).min(nb), "power of two: M - 1")
    } else if facs.len() == 1 {
        (
            odd_prime_power_bound(n, m),
            "odd prime power: floor((M-1) log2(n+1))",
        )
    } else if facs.len() == 2 && facs.contains(&(2, 1)) {
        let odd = (m / 2) as u32;
        (
            (1 + odd_prime_power_bound(n, odd)).min(nb),
            "twice an odd prime power: 1 + floor((M'-1) log2(n+1))",
        )
    } else if facs.len() == 2 && facs[0].0 == 2 {
        let ell = facs[0].1;
        let odd = (m >> ell) as u32;
        let base = odd_prime_power_bound(n, odd) as u128;
        let exp = (1u64 << (ell - 1)) - 1;
        let powed = sat_pow(base, exp, nb as u128 + 1);
        let b = (factor as u128)
            .saturating_mul(ell as u128)
            .saturating_mul(powed)
            .min(nb as u128) as u64;
        (
            b,
            "power of two times an odd prime power: factor * l * base^(2^(l-1)-1), heuristic factor",
        )
    } else {
        (nb, "two or more odd prime factors: trivial B = n")
    };
    Ok(DimensionBound {
        modulus: m,
        n,
        bound: bound as u32,
        provenance,
    })
}

/// floor((m-1) * log2(n+1)), clamped to n: the exact bit length of
/// (n+1)^(m-1) minus one, computed exactly only when it can be below n.
fn odd_prime_power_bound(n: usize, m: u32) -> u64 {
    let nb = n as u64;
    if n == 0 {
        return 0;
    }
    let lg = 63 - (nb + 1).leading_zeros() as u64;
    if (m as u64 - 1).saturating_mul(lg) >= nb {
        return nb;
    }
    let v = BigUint::from(nb + 1).pow(m - 1);
    (v.bits() - 1).min(nb)
}

fn sat_pow(base: u128, exp: u64, cap: u128) -> u128 {
    if base <= 1 {
        return base;
    }
    let mut r = 1u128;
    for _ in 0..exp {
        r = r.saturating_mul(base);
        if r >= cap {
            return cap;
        }
    }
    r
}

/// Solution set of the XOR part as an affine subspace, or None when the
/// equations are inconsistent. The side constraint is ignored.
pub fn gaussian_basis(inst: &Lin2Instance) -> Option<AffineSubspace> {
    let rows: Vec<(BitVec, bool)> = inst
        .equations
        .iter()
        .map(|(vars, rhs)| {
            let mut v = BitVec::zeros(inst.n);
            for &x in vars {
                v.set(x as usize, true);
            }
            (v, *rhs)
        })
        .collect();
    solve_linear_system(inst.n, &rows)
}

fn point_assignment(space: &AffineSubspace, coeffs: &BitVec) -> Assignment {
    Assignment::new(space.point(coeffs).to_bools())
}

/// Sweep basis subsets of size at most R (by size, then colex) and
/// return the first point of the subspace landing in the allowed set.
///
/// Expects a 0/1-weight single-modulus side constraint with one allowed
/// residue; complete when R reaches the dimension bound for (n, M).
pub fn solve_deterministic(
    space: &AffineSubspace,
    side: &crate::group::ModularSideConstraint,
    rounds: Rounds,
) -> Result<Option<Assignment>> {
    solve_deterministic_impl(space, side, rounds, 8)
}

fn solve_deterministic_impl(
    space: &AffineSubspace,
    side: &crate::group::ModularSideConstraint,
    rounds: Rounds,
    factor: u32,
) -> Result<Option<Assignment>> {
    debug_assert_eq!(side.n(), space.n);
    debug_assert_eq!(side.group.components(), 1);
    debug_assert_eq!(side.allowed.len(), 1);
    let d = space.dim();
    let r = match rounds {
        Rounds::Fixed(r) => {
            if r < 0 || r > d as i64 {
                return Err(Error::InvalidRounds(format!(
                    "budget {r} outside 0..={d} for a dimension-{d} space"
                )));
            }
            r as usize
        }
        Rounds::Auto => {
            let m = side.group.moduli()[0];
            (dimension_bound_with_factor(space.n, m, factor)?.bound as usize).min(d)
        }
    };
    let points = binom_sum_saturating(d, r);
    if points > MAX_POINTS {
        return Err(Error::SizeLimit(format!(
            "budget {r} over dimension {d} means {points} points, cap is {MAX_POINTS}"
        )));
    }
    for subset in subsets_by_weight(d, r) {
        let mut coeffs = BitVec::zeros(d);
        for &i in &subset {
            coeffs.set(i, true);
        }
        let x = point_assignment(space, &coeffs);
        if side.eval(&x)?.1 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Sample uniform points of the subspace until one lands in the allowed
/// set; one-sided error. AUTO draws 4 * 2^bound samples, enough for a
/// miss probability under 1/3 whenever a solution exists; when the
/// budget reaches the subspace size the sweep is exhaustive and exact.
pub fn solve_randomized(
    space: &AffineSubspace,
    side: &crate::group::ModularSideConstraint,
    trials: Trials,
    seed: u64,
) -> Result<Option<Assignment>> {
    solve_randomized_impl(space, side, trials, seed, 8)
}

fn solve_randomized_impl(
    space: &AffineSubspace,
    side: &crate::group::ModularSideConstraint,
    trials: Trials,
    seed: u64,
    factor: u32,
) -> Result<Option<Assignment>> {
    debug_assert_eq!(side.n(), space.n);
    debug_assert_eq!(side.group.components(), 1);
    debug_assert_eq!(side.allowed.len(), 1);
    let d = space.dim();
    let exhaustive = match trials {
        Trials::Fixed(t) => {
            if t < 1 {
                return Err(Error::InvalidTrials(t));
            }
            d <= 63 && t as u128 >= 1u128 << d
        }
        Trials::Auto => {
            let m = side.group.moduli()[0];
            let b = dimension_bound_with_factor(space.n, m, factor)?.bound as usize;
            b + 2 >= d
        }
    };

    if exhaustive {
        if d > MAX_EXHAUSTIVE_DIM {
            return Err(Error::SizeLimit(format!(
                "exhaustive fallback over dimension {d}, cap is {MAX_EXHAUSTIVE_DIM}"
            )));
        }
        for mask in 0..1u64 << d {
            let x = point_assignment(space, &BitVec::from_u64(mask, d));
            if side.eval(&x)?.1 {
                return Ok(Some(x));
            }
        }
        return Ok(None);
    }

    let t = match trials {
        Trials::Fixed(t) => t as u64,
        // Not exhaustive, so bound + 2 < d <= 64 and the shift fits.
        Trials::Auto => {
            let m = side.group.moduli()[0];
            4u64 << dimension_bound_with_factor(space.n, m, factor)?.bound
        }
    };
    if t > MAX_TRIALS {
        return Err(Error::SizeLimit(format!(
            "{t} sampling trials requested, cap is {MAX_TRIALS}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..t {
        let mut coeffs = BitVec::zeros(d);
        for i in 0..d {
            if rng.random::<bool>() {
                coeffs.set(i, true);
            }
        }
        let x = point_assignment(space, &coeffs);
        if side.eval(&x)?.1 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Direct sum of `copies` Hadamard codes: a subspace of
/// GF(2)^(copies * 2^d) of dimension copies * d whose nonzero points
/// have weight j * 2^(d-1) for j between 1 and copies. Useful as an
/// extremal test generator: weights concentrate on few residues.
///
/// Basis vector (c, i) marks the positions y inside block c whose i-th
/// bit is set; block c's span is then all inner-product patterns, each
/// nonzero one balanced.
pub fn hadamard_direct_sum(d: usize, copies: usize) -> Result<AffineSubspace> {
    if d < 1 || copies < 1 {
        return Err(Error::InvalidSystem(
            "hadamard sum needs d >= 1 and copies >= 1".into(),
        ));
    }
    let block = 1usize << d;
    let ambient = block
        .checked_mul(copies)
        .filter(|&a| a <= 1 << 20)
        .ok_or_else(|| {
            Error::SizeLimit(format!("ambient dimension {copies} * 2^{d} over cap 2^20"))
        })?;
    let mut basis = Vec::with_capacity(copies * d);
    for c in 0..copies {
        for i in 0..d {
            let mut v = BitVec::zeros(ambient);
            for y in 0..block {
                if y >> i & 1 == 1 {
                    v.set(c * block + y, true);
                }
            }
            basis.push(v);
        }
    }
    AffineSubspace::new(ambient, BitVec::zeros(ambient), basis)
}

/// How [`solve`] should search once the subspace is in hand.
#[derive(Debug, Clone)]
pub enum Lin2Mode {
    Deterministic(Rounds),
    Randomized { trials: Trials, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct Lin2SolveConfig {
    pub mode: Lin2Mode,
    /// Constant for the mixed-modulus dimension bound case.
    pub dim_factor: u32,
    /// Refuse instances whose 0/1-weight rewrite exceeds this many
    /// variables.
    pub max_vars_after_normalize: usize,
}

impl Default for Lin2SolveConfig {
    fn default() -> Self {
        Lin2SolveConfig {
            mode: Lin2Mode::Deterministic(Rounds::Auto),
            dim_factor: 8,
            max_vars_after_normalize: 4096,
        }
    }
}

/// Full pipeline: flatten a product group to a single modulus, rewrite
/// weights to 0/1 form, eliminate the XOR part, then search the
/// solution subspace per allowed residue, smallest first. Returned
/// assignments are re-verified against the original instance.
pub fn solve(inst: &Lin2Instance, cfg: &Lin2SolveConfig) -> Result<Option<Assignment>> {
    let answer = if inst.side.group.components() > 1 {
        let mut found = None;
        for a in &inst.side.allowed {
            let mut side = inst.side.clone();
            side.allowed = BTreeSet::from([a.clone()]);
            let restricted = Lin2Instance::new(inst.n, inst.equations.clone(), side)?;
            let flat = flatten_lin2(&restricted)?;
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

fn solve_single(inst: &Lin2Instance, cfg: &Lin2SolveConfig) -> Result<Option<Assignment>> {
    let norm = normalize_unit_weights_lin2(inst)?;
    if norm.inst.n > cfg.max_vars_after_normalize {
        return Err(Error::SizeLimit(format!(
            "0/1 rewrite has {} variables, cap is {}",
            norm.inst.n, cfg.max_vars_after_normalize
        )));
    }
    let Some(space) = gaussian_basis(&norm.inst) else {
        return Ok(None);
    };
    for a in &norm.inst.side.allowed {
        let mut side = norm.inst.side.clone();
        side.allowed = BTreeSet::from([a.clone()]);
        let sol = match &cfg.mode {
            Lin2Mode::Deterministic(r) => {
                solve_deterministic_impl(&space, &side, *r, cfg.dim_factor)?
            }
            Lin2Mode::Randomized { trials, seed } => {
                solve_randomized_impl(&space, &side, *trials, *seed, cfg.dim_factor)?
            }
        };
        if let Some(x) = sol {
            return Ok(Some(norm.lift(&x)));
        }
    }
    Ok(None)
}
