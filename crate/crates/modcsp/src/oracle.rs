//! Brute-force reference implementations.
//!
//! These are deliberately simple and slow: full enumeration with no
//! shortcuts. The solvers are tested against them, so nothing in this
//! module may depend on the solver code.

use crate::error::{Error, Result};
use crate::gf2::{AffineSubspace, BitVec};
use crate::group::Assignment;
use crate::instance::{HornInstance, Lin2Instance, TwoSatInstance};

const MAX_BRUTE_VARS: usize = 24;

/// Enumerate assignments in lexicographic order of the bit string
/// x_0 x_1 ... x_{n-1} (so x_0 is the most significant position) and
/// return the first one satisfying `pred`.
fn first_satisfying<F: FnMut(&Assignment) -> bool>(n: usize, mut pred: F) -> Option<Assignment> {
    assert!(n <= MAX_BRUTE_VARS);
    for k in 0u64..1u64 << n {
        let bits: Vec<bool> = (0..n).map(|j| (k >> (n - 1 - j)) & 1 == 1).collect();
        let x = Assignment::new(bits);
        if pred(&x) {
            return Some(x);
        }
    }
    None
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_BRUTE_VARS {
        return Err(Error::SizeLimit(format!(
            "brute force capped at {MAX_BRUTE_VARS} variables, got {n}"
        )));
    }
    Ok(())
}

/// Exhaustive solve; returns the lexicographically least solution.
pub fn brute_solve_horn(inst: &HornInstance) -> Result<Option<Assignment>> {
    check_n(inst.n)?;
    let mut err = None;
    let found = first_satisfying(inst.n, |x| {
        if !inst.boolean_satisfied(x) {
            return false;
        }
        match inst.side.eval(x) {
            Ok((_, ok)) => ok,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

pub fn brute_solve_lin2(inst: &Lin2Instance) -> Result<Option<Assignment>> {
    check_n(inst.n)?;
    let mut err = None;
    let found = first_satisfying(inst.n, |x| {
        if !inst.boolean_satisfied(x) {
            return false;
        }
        match inst.side.eval(x) {
            Ok((_, ok)) => ok,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

pub fn brute_solve_twosat(inst: &TwoSatInstance) -> Result<Option<Assignment>> {
    check_n(inst.n)?;
    let mut err = None;
    let found = first_satisfying(inst.n, |x| {
        if !inst.boolean_satisfied(x) {
            return false;
        }
        match inst.side.eval(x) {
            Ok((_, ok)) => ok,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Number of points of the subspace whose Hamming weight is `a` mod `m`.
pub fn count_solutions(space: &AffineSubspace, a: u32, m: u32) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    let d = space.dim();
    if d > MAX_BRUTE_VARS {
        return Err(Error::SizeLimit(format!(
            "point enumeration capped at dimension {MAX_BRUTE_VARS}, got {d}"
        )));
    }
    let a = a % m;
    // Gray-code walk: flip one basis vector per step.
    let mut point = space.offset.clone();
    let mut count = 0u64;
    if point.count_ones() % m == a {
        count += 1;
    }
    let mut prev_gray = 0u64;
    for k in 1u64..1u64 << d {
        let gray = k ^ (k >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        prev_gray = gray;
        point.xor_assign(&space.basis[flipped]);
        if point.count_ones() % m == a {
            count += 1;
        }
    }
    Ok(count)
}

/// Largest dimension of an affine subspace of GF(2)^n meeting some
/// weight class mod `m` in exactly one point, found by exhaustive
/// enumeration of all affine subspaces. Capped at n <= 6.
pub fn search_max_unique_dimension(n: usize, m: u32) -> Result<u32> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    if n > 6 {
        return Err(Error::SizeLimit(format!(
            "subspace enumeration capped at n = 6, got {n}"
        )));
    }
    let mut best = 0u32;
    // Linear parts are enumerated as reduced row echelon forms: pick the
    // pivot columns, then fill the free cells in all possible ways. Every
    // subspace has exactly one RREF basis, so nothing repeats.
    for d in 0..=n {
        for pivots in choose_sets(n, d) {
            let mut is_pivot = vec![false; n];
            for &p in &pivots {
                is_pivot[p] = true;
            }
            // free cells: (row i, col c) with c > pivots[i] and c not a pivot
            let mut cells = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for c in p + 1..n {
                    if !is_pivot[c] {
                        cells.push((i, c));
                    }
                }
            }
            for fill in 0u64..1u64 << cells.len() {
                let mut basis: Vec<BitVec> = pivots
                    .iter()
                    .map(|&p| {
                        let mut v = BitVec::zeros(n);
                        v.set(p, true);
                        v
                    })
                    .collect();
                for (bit, &(i, c)) in cells.iter().enumerate() {
                    if fill >> bit & 1 == 1 {
                        basis[i].set(c, true);
                    }
                }
                // Coset representatives: offsets supported on non-pivot
                // columns, one per coset of the linear part.
                let free_cols: Vec<usize> =
                    (0..n).filter(|&c| !is_pivot[c]).collect();
                for off in 0u64..1u64 << free_cols.len() {
                    let mut offset = BitVec::zeros(n);
                    for (bit, &c) in free_cols.iter().enumerate() {
                        if off >> bit & 1 == 1 {
                            offset.set(c, true);
                        }
                    }
                    // Tally weight classes over the 2^d points.
                    let mut tally = vec![0u64; m as usize];
                    let space = AffineSubspace {
                        n,
                        offset,
                        basis: basis.clone(),
                    };
                    let mut point = space.offset.clone();
                    tally[(point.count_ones() % m) as usize] += 1;
                    let mut prev_gray = 0u64;
                    for k in 1u64..1u64 << d {
                        let gray = k ^ (k >> 1);
                        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
                        prev_gray = gray;
                        point.xor_assign(&space.basis[flipped]);
                        tally[(point.count_ones() % m) as usize] += 1;
                    }
                    if tally.contains(&1) {
                        best = best.max(d as u32);
                    }
                }
            }
        }
    }
    Ok(best)
}

/// All d-subsets of 0..n in increasing order.
fn choose_sets(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    rec(0, n, d, &mut cur, &mut out);
    out
}
