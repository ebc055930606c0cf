//! Reductions between the constraint families.
//!
//! Two kinds live here. The flattenings rewrite an instance whose side
//! constraint ranges over a product of cyclic groups into one with a
//! single modulus, at the price of helper variables for monomials of the
//! interpolated failure polynomial. The 3-SAT encodings go the other
//! way: given a polynomial that witnesses NAND (over 0/1 inputs) or OR
//! (over signed inputs) modulo m, they compile an arbitrary small CNF
//! into the Horn or XOR fragment so that verdicts match.
//!
//! Flattenings keep the original variables as a contiguous block, so a
//! solution of the output projects back by slicing; see [`Flattened`].
//! The 3-SAT encodings only preserve satisfiability, not solutions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;

use crate::arith::{crt_combine, factorize, inv_mod, pow_u64};
use crate::error::{Error, Result};
use crate::gf2::{kernel_basis, BitVec};
use crate::group::{Assignment, GroupSpec, ModularSideConstraint, ResidueVector};
use crate::instance::{HornClause, HornInstance, Lin2Instance, Lit};
use crate::poly::{
    from_01_value_table, from_pm1_value_table_exact, from_pm1_value_table_mod_odd, is_nand_rep_01,
    is_or_rep_pm1, mask_from_mono, Basis, IntPoly,
};
use crate::subsets::binom_sum_saturating;

/// Largest variable count for which a reduction will build a full 2^n
/// value table.
pub const MAX_TABLE_VARS: usize = 20;

/// Cap on the helper-variable budget, measured as (n choose <= d).
pub const MAX_GENERATED_MONOMIALS: u64 = 2_000_000;

/// CNF formula with one to three literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSatInstance {
    pub t: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl ThreeSatInstance {
    pub fn new(t: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() || c.len() > 3 {
                return Err(Error::InvalidSystem(format!(
                    "clause has {} literals, want 1 to 3",
                    c.len()
                )));
            }
            if c.iter().any(|l| l.var as usize >= t) {
                return Err(Error::LengthMismatch("clause variable out of range".into()));
            }
        }
        Ok(ThreeSatInstance { t, clauses })
    }

    pub fn satisfied(&self, x: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(x)))
    }

    /// Exhaustive satisfiability check, for cross-checking the encodings.
    pub fn brute_solve(&self) -> Result<Option<Assignment>> {
        if self.t > 24 {
            return Err(Error::SizeLimit(format!(
                "brute force over {} variables refused",
                self.t
            )));
        }
        for mask in 0..1u64 << self.t {
            let x = assignment_from_mask(mask, self.t);
            if self.satisfied(&x) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// Output of a flattening, with the bookkeeping needed to project a
/// solution of the rewritten instance back onto the original variables.
#[derive(Debug, Clone)]
pub struct Flattened<T> {
    pub inst: T,
    /// Variable count of the input instance.
    pub original_n: usize,
    /// Where the original block starts in the output; 0 when the
    /// flattening was the identity.
    pub lift_offset: usize,
}

impl<T> Flattened<T> {
    pub fn lift(&self, x: &Assignment) -> Assignment {
        debug_assert!(x.bits().len() >= self.lift_offset + self.original_n);
        Assignment::new(x.bits()[self.lift_offset..self.lift_offset + self.original_n].to_vec())
    }
}

fn assignment_from_mask(mask: u64, n: usize) -> Assignment {
    Assignment::new((0..n).map(|i| mask >> i & 1 == 1).collect())
}

/// One congruence `sum_l w_l x_l = target (mod modulus)` over 0/1 vars.
struct Condition {
    weights: Vec<u64>,
    target: u64,
    modulus: u64,
}

/// Split a side constraint at a single allowed tuple into per-prime
/// bundles of prime-power congruences. The x = 0 half of each weight
/// pair moves into the target so every congruence is homogeneous in the
/// variable bits.
fn prime_conditions(
    side: &ModularSideConstraint,
    target: &ResidueVector,
) -> BTreeMap<u64, Vec<Condition>> {
    let mut by_prime: BTreeMap<u64, Vec<Condition>> = BTreeMap::new();
    for (c, &mc) in side.group.moduli().iter().enumerate() {
        let mc = mc as u64;
        let mut shift = 0u64;
        let mut w = Vec::with_capacity(side.n());
        for (g0, g1) in &side.weights {
            let a0 = g0.residues()[c] as u64;
            let a1 = g1.residues()[c] as u64;
            shift = (shift + a0) % mc;
            w.push((a1 + mc - a0) % mc);
        }
        let tgt = (target.residues()[c] as u64 + mc - shift) % mc;
        for (p, k) in factorize(mc) {
            let pk = pow_u64(p, k);
            by_prime.entry(p).or_default().push(Condition {
                weights: w.iter().map(|&x| x % pk).collect(),
                target: tgt % pk,
                modulus: pk,
            });
        }
    }
    by_prime
}

/// 0/1 table over {0,1}^n with a 1 wherever at least one condition fails.
fn violation_table(n: usize, conds: &[Condition]) -> Vec<i64> {
    let size = 1usize << n;
    let mut fail = vec![0i64; size];
    let mut sums = vec![0u64; size];
    for c in conds {
        sums[0] = 0;
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = (sums[mask & (mask - 1)] + c.weights[low]) % c.modulus;
        }
        for (mask, f) in fail.iter_mut().enumerate() {
            if sums[mask] != c.target {
                *f = 1;
            }
        }
    }
    fail
}

fn degree_budget(conds: &[Condition]) -> u64 {
    conds.iter().map(|c| c.modulus - 1).sum()
}

fn check_flatten_caps(n: usize, groups: &BTreeMap<u64, Vec<Condition>>) -> Result<()> {
    if n > MAX_TABLE_VARS {
        return Err(Error::SizeLimit(format!(
            "flattening builds a 2^{n} value table, cap is 2^{MAX_TABLE_VARS}"
        )));
    }
    let d = groups.values().map(|cs| degree_budget(cs)).max().unwrap_or(0);
    let budget = binom_sum_saturating(n, d.min(n as u64) as usize);
    if budget > MAX_GENERATED_MONOMIALS {
        return Err(Error::SizeLimit(format!(
            "flattening could create {budget} helper monomials, cap is {MAX_GENERATED_MONOMIALS}"
        )));
    }
    Ok(())
}

fn single_allowed(side: &ModularSideConstraint) -> Result<ResidueVector> {
    if side.allowed.len() != 1 {
        return Err(Error::UnsupportedAllowedSet);
    }
    Ok(side.allowed.iter().next().unwrap().clone())
}

/// Glue per-modulus coefficient maps into one map mod the product.
fn glue_coefficients(parts: &[(u64, BTreeMap<Vec<u32>, u64>)]) -> BTreeMap<Vec<u32>, u64> {
    let mut support: BTreeSet<&Vec<u32>> = BTreeSet::new();
    for (_, coeffs) in parts {
        support.extend(coeffs.keys());
    }
    let mut glued = BTreeMap::new();
    for mono in support {
        let residues: Vec<(u64, u64)> = parts
            .iter()
            .map(|(m, coeffs)| (coeffs.get(mono).copied().unwrap_or(0), *m))
            .collect();
        let b = crt_combine(&residues);
        if b != 0 {
            glued.insert(mono.clone(), b);
        }
    }
    glued
}

fn coeff_map(p: &IntPoly) -> BTreeMap<Vec<u32>, u64> {
    p.terms()
        .iter()
        .map(|(mono, c)| (mono.clone(), c.to_u64().expect("canonical coefficient")))
        .collect()
}

fn single_modulus_group(modulus: u64) -> Result<GroupSpec> {
    let m: u32 = modulus
        .try_into()
        .map_err(|_| Error::SizeLimit(format!("flattened modulus {modulus} exceeds u32")))?;
    GroupSpec::single(m)
}

/// Rewrite a Horn instance over a product group as one with a single
/// modulus.
///
/// Per prime, the indicator of "some bundled congruence fails" is
/// interpolated mod p; the per-prime coefficients glue by CRT into a
/// polynomial mod the product of the distinct primes. Each monomial of
/// degree two or more becomes a helper variable tied to its factors by
/// implications both ways, which stays inside the Horn fragment. The
/// constant monomial gets a forced-true anchor variable so all weights
/// still sit on variables.
///
/// Needs exactly one allowed tuple; a single-component group passes
/// through unchanged.
pub fn flatten_horn(inst: &HornInstance) -> Result<Flattened<HornInstance>> {
    if inst.side.group.components() == 1 {
        return Ok(Flattened {
            inst: inst.clone(),
            original_n: inst.n,
            lift_offset: 0,
        });
    }
    let target = single_allowed(&inst.side)?;
    let n = inst.n;
    let groups = prime_conditions(&inst.side, &target);
    check_flatten_caps(n, &groups)?;

    let mut modulus = 1u64;
    let mut parts = Vec::new();
    for (p, conds) in &groups {
        let f = from_01_value_table(&violation_table(n, conds), n, *p);
        debug_assert!(f.degree() as u64 <= degree_budget(conds));
        modulus = modulus
            .checked_mul(*p)
            .ok_or_else(|| Error::SizeLimit("flattened modulus overflows u64".into()))?;
        parts.push((*p, coeff_map(&f)));
    }
    let glued = glue_coefficients(&parts);

    // Layout: forced-true anchor, the original variables, then one
    // helper per glued monomial of degree two or more.
    let mut weights: Vec<u64> = vec![0; 1 + n];
    weights[0] = glued.get(&Vec::new()).copied().unwrap_or(0);
    for i in 0..n {
        weights[1 + i] = glued.get(&vec![i as u32]).copied().unwrap_or(0);
    }
    let mut clauses: Vec<HornClause> = inst
        .clauses
        .iter()
        .map(|c| HornClause::new(c.head + 1, c.body.iter().map(|&b| b + 1).collect()))
        .collect::<Result<_>>()?;
    let mut units: Vec<(u32, bool)> = vec![(0, true)];
    units.extend(inst.units.iter().map(|&(v, b)| (v + 1, b)));
    for (mono, &b) in &glued {
        if mono.len() < 2 {
            continue;
        }
        let idx = weights.len() as u32;
        weights.push(b);
        for &i in mono {
            clauses.push(HornClause::new(i + 1, vec![idx])?);
        }
        clauses.push(HornClause::new(idx, mono.iter().map(|&i| i + 1).collect())?);
    }

    let group = single_modulus_group(modulus)?;
    let zero = group.zero();
    let side_weights = weights
        .iter()
        .map(|&w| Ok((zero.clone(), group.elem(vec![w as u32])?)))
        .collect::<Result<Vec<_>>>()?;
    let side = ModularSideConstraint::new(group, side_weights, BTreeSet::from([zero]))?;
    Ok(Flattened {
        inst: HornInstance::new(weights.len(), clauses, units, side)?,
        original_n: n,
        lift_offset: 1,
    })
}

/// Rewrite an XOR instance over a product group as one with a single
/// modulus.
///
/// Odd primes interpolate directly in the signed basis. A power-of-two
/// block first interpolates mod 2, then rescales by 2^d so the signed
/// rewrite keeps integer coefficients; vanishing mod 2 of the original
/// is equivalent to vanishing mod 2^(d+1) of the rescaled polynomial,
/// so that block contributes modulus 2^(d+1) to the product. Helper
/// variables carry the monomials, tied to their factors by parity
/// equations, which stays inside the XOR fragment.
pub fn flatten_lin2(inst: &Lin2Instance) -> Result<Flattened<Lin2Instance>> {
    if inst.side.group.components() == 1 {
        return Ok(Flattened {
            inst: inst.clone(),
            original_n: inst.n,
            lift_offset: 0,
        });
    }
    let target = single_allowed(&inst.side)?;
    let n = inst.n;
    let groups = prime_conditions(&inst.side, &target);
    check_flatten_caps(n, &groups)?;

    let mut modulus = 1u64;
    let mut parts = Vec::new();
    for (p, conds) in &groups {
        let table = violation_table(n, conds);
        if *p == 2 {
            let d1 = degree_budget(conds);
            if d1 >= 31 {
                return Err(Error::SizeLimit(format!(
                    "power-of-two block needs modulus 2^{}",
                    d1 + 1
                )));
            }
            let f = from_01_value_table(&table, n, 2);
            debug_assert!(f.degree() as u64 <= d1);
            // Integer values of the mod-2 polynomial via subset sums of
            // its 0/1 coefficients, scaled by 2^d1.
            let size = 1usize << n;
            let mut vals = vec![0i128; size];
            for mono in f.terms().keys() {
                vals[mask_from_mono(mono) as usize] = 1;
            }
            for i in 0..n {
                for mask in 0..size {
                    if mask & (1 << i) != 0 {
                        vals[mask] += vals[mask ^ (1 << i)];
                    }
                }
            }
            for v in &mut vals {
                *v <<= d1;
            }
            let m1 = 1u64 << (d1 + 1);
            let h = from_pm1_value_table_exact(&vals, n).reduce_mod(m1 as u32);
            modulus = modulus
                .checked_mul(m1)
                .ok_or_else(|| Error::SizeLimit("flattened modulus overflows u64".into()))?;
            parts.push((m1, coeff_map(&h)));
        } else {
            let h = from_pm1_value_table_mod_odd(&table, n, *p);
            modulus = modulus
                .checked_mul(*p)
                .ok_or_else(|| Error::SizeLimit("flattened modulus overflows u64".into()))?;
            parts.push((*p, coeff_map(&h)));
        }
    }
    let glued = glue_coefficients(&parts);

    // Layout: forced-false anchor for the constant monomial, the
    // original variables, then one helper per higher monomial. A helper
    // is the parity of its factors, which matches products over signs.
    let mut weights: Vec<u64> = vec![0; 1 + n];
    weights[0] = glued.get(&Vec::new()).copied().unwrap_or(0);
    for i in 0..n {
        weights[1 + i] = glued.get(&vec![i as u32]).copied().unwrap_or(0);
    }
    let mut equations: Vec<(Vec<u32>, bool)> = vec![(vec![0], false)];
    equations.extend(
        inst.equations
            .iter()
            .map(|(vars, rhs)| (vars.iter().map(|&v| v + 1).collect(), *rhs)),
    );
    for (mono, &a) in &glued {
        if mono.len() < 2 {
            continue;
        }
        let idx = weights.len() as u32;
        weights.push(a);
        let mut vars: Vec<u32> = mono.iter().map(|&i| i + 1).collect();
        vars.push(idx);
        equations.push((vars, false));
    }

    let group = single_modulus_group(modulus)?;
    let side_weights = weights
        .iter()
        .map(|&a| {
            let g0 = group.elem(vec![a as u32])?;
            let g1 = group.elem(vec![((modulus - a) % modulus) as u32])?;
            Ok((g0, g1))
        })
        .collect::<Result<Vec<_>>>()?;
    let zero = group.zero();
    let side = ModularSideConstraint::new(group, side_weights, BTreeSet::from([zero]))?;
    Ok(Flattened {
        inst: Lin2Instance::new(weights.len(), equations, side)?,
        original_n: n,
        lift_offset: 1,
    })
}

fn check_gadget_caps(t: usize, rep_degree: usize) -> Result<()> {
    if t > MAX_TABLE_VARS {
        return Err(Error::SizeLimit(format!(
            "encoding builds a 2^{t} value table, cap is 2^{MAX_TABLE_VARS}"
        )));
    }
    let d = (3 * rep_degree).min(t);
    let budget = binom_sum_saturating(t, d);
    if budget > MAX_GENERATED_MONOMIALS {
        return Err(Error::SizeLimit(format!(
            "encoding could create {budget} helper monomials, cap is {MAX_GENERATED_MONOMIALS}"
        )));
    }
    Ok(())
}

/// Encode 3-SAT as Horn clauses plus one modular constraint.
///
/// `rep` must vanish mod m exactly at the all-ones input of arity equal
/// to the clause count. Composing it with the 0/1 clause indicators
/// gives a polynomial that vanishes exactly on satisfying assignments;
/// every monomial becomes a variable tied to the original variables by
/// implications both ways, and the constant coefficient folds into the
/// allowed residue. The output deliberately has no unit constraints and
/// no copy of the CNF clauses: satisfiability is carried entirely by
/// the modular constraint over the closure structure.
pub fn gadget_3sat_to_horn(phi: &ThreeSatInstance, m: u32, rep: &IntPoly) -> Result<HornInstance> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is too small")));
    }
    let nclauses = phi.clauses.len();
    if rep.nvars() != nclauses {
        return Err(Error::InvalidRep(format!(
            "representation has arity {}, formula has {nclauses} clauses",
            rep.nvars()
        )));
    }
    if !is_nand_rep_01(rep, nclauses, m)? {
        return Err(Error::InvalidRep(
            "polynomial does not witness NAND at this modulus".into(),
        ));
    }
    let t = phi.t;
    check_gadget_caps(t, rep.degree())?;

    let size = 1usize << t;
    let mut vals = vec![0i64; size];
    let mut point = vec![0i64; nclauses];
    for (mask, v) in vals.iter_mut().enumerate() {
        for (i, clause) in phi.clauses.iter().enumerate() {
            let sat = clause
                .iter()
                .any(|l| (mask >> l.var & 1 == 1) != l.neg);
            point[i] = sat as i64;
        }
        *v = rep
            .eval(&point, Basis::ZeroOne, Some(m))?
            .to_i64()
            .expect("reduced value fits i64");
    }
    let gamma = coeff_map(&from_01_value_table(&vals, t, m as u64));

    let a0 = gamma.get(&Vec::new()).copied().unwrap_or(0);
    let mut weights: Vec<u64> = vec![0; t];
    for i in 0..t {
        weights[i] = gamma.get(&vec![i as u32]).copied().unwrap_or(0);
    }
    let mut clauses = Vec::new();
    for (mono, &a) in &gamma {
        if mono.len() < 2 {
            continue;
        }
        let idx = weights.len() as u32;
        weights.push(a);
        for &i in mono {
            clauses.push(HornClause::new(i, vec![idx])?);
        }
        clauses.push(HornClause::new(idx, mono.clone())?);
    }

    let group = GroupSpec::single(m)?;
    let zero = group.zero();
    let side_weights = weights
        .iter()
        .map(|&w| Ok((zero.clone(), group.elem(vec![w as u32])?)))
        .collect::<Result<Vec<_>>>()?;
    let allowed = group.elem(vec![((m as u64 - a0) % m as u64) as u32])?;
    let side = ModularSideConstraint::new(group, side_weights, BTreeSet::from([allowed]))?;
    let out = HornInstance::new(weights.len(), clauses, vec![], side)?;
    debug_assert!(out.units.is_empty());
    Ok(out)
}

/// Encode 3-SAT as an XOR system plus one modular constraint; m must be
/// odd.
///
/// `rep` must vanish mod m exactly at the all-ones signed input. Each
/// clause maps to a sign that is +1 when satisfied; composing gives a
/// polynomial over signed monomials whose value is a weighted sum of
/// monomial parities. One output variable stands for each monomial; the
/// parities reachable from actual assignments form a linear subspace,
/// pinned by its orthogonal complement as parity equations.
pub fn gadget_3sat_to_lin2(phi: &ThreeSatInstance, m: u32, rep: &IntPoly) -> Result<Lin2Instance> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is too small")));
    }
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    let nclauses = phi.clauses.len();
    if rep.nvars() != nclauses {
        return Err(Error::InvalidRep(format!(
            "representation has arity {}, formula has {nclauses} clauses",
            rep.nvars()
        )));
    }
    if !is_or_rep_pm1(rep, nclauses, m)? {
        return Err(Error::InvalidRep(
            "polynomial does not witness OR at this modulus".into(),
        ));
    }
    let t = phi.t;
    check_gadget_caps(t, rep.degree())?;

    // Signed value table: a set bit means the variable is true, which is
    // the -1 input.
    let size = 1usize << t;
    let mut vals = vec![0i64; size];
    let mut point = vec![0i64; nclauses];
    for (mask, v) in vals.iter_mut().enumerate() {
        for (i, clause) in phi.clauses.iter().enumerate() {
            let sat = clause
                .iter()
                .any(|l| (mask >> l.var & 1 == 1) != l.neg);
            point[i] = if sat { 1 } else { -1 };
        }
        *v = rep
            .eval(&point, Basis::PlusMinusOne, Some(m))?
            .to_i64()
            .expect("reduced value fits i64");
    }
    let psi = from_pm1_value_table_mod_odd(&vals, t, m as u64);

    let monos: Vec<(u64, u64)> = psi
        .terms()
        .iter()
        .map(|(mono, c)| (mask_from_mono(mono), c.to_u64().expect("canonical coefficient")))
        .collect();
    let nvars = monos.len();

    // Directions swept by flipping each original variable; assignments
    // reach exactly the span, so the kernel of the sweep matrix pins it.
    let mut us = Vec::with_capacity(t);
    for i in 0..t {
        let mut u = BitVec::zeros(nvars);
        for (j, &(mask, _)) in monos.iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.set(j, true);
            }
        }
        us.push(u);
    }
    let equations: Vec<(Vec<u32>, bool)> = kernel_basis(nvars, &us)
        .into_iter()
        .map(|w| (w.iter_ones().map(|i| i as u32).collect(), false))
        .collect();

    let m64 = m as u64;
    let total: u64 = monos.iter().fold(0, |acc, &(_, a)| (acc + a) % m64);
    let target = total * inv_mod(2, m64) % m64;

    let group = GroupSpec::single(m)?;
    let zero = group.zero();
    let side_weights = monos
        .iter()
        .map(|&(_, a)| Ok((zero.clone(), group.elem(vec![a as u32])?)))
        .collect::<Result<Vec<_>>>()?;
    let allowed = group.elem(vec![target as u32])?;
    let side = ModularSideConstraint::new(group, side_weights, BTreeSet::from([allowed]))?;
    Lin2Instance::new(nvars, equations, side)
}
