//! Intersection-closed set families that obstruct bounded-round Horn
//! propagation, and their two-way correspondence with NAND-representing
//! polynomials.
//!
//! A system over universe [d] with parameters (m, r) is a family of
//! subsets that is closed under pairwise intersection, contains no
//! member whose size is congruent to d mod m, and covers every subset
//! of size at most r by some member. Universes are capped at 64
//! elements so members fit in single machine words.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::{is_nand_rep_01, IntPoly};
use crate::subsets::{binom_sum_saturating, subsets_by_weight};

const MAX_UNIVERSE: usize = 64;
const MAX_FAMILY: usize = 4096;
const MAX_COVER_WORK: u64 = 20_000_000;
const MAX_POLY_VARS: usize = 20;

/// Set family over [d]; members are bitmasks over the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrdSystem {
    pub d: usize,
    pub m: u32,
    pub r: usize,
    pub sets: Vec<u64>,
}

impl MrdSystem {
    /// Basic shape checks plus canonical ordering; call validate() for
    /// the defining clauses.
    pub fn new(d: usize, m: u32, r: usize, mut sets: Vec<u64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
        }
        if d > MAX_UNIVERSE {
            return Err(Error::SizeLimit(format!(
                "universe capped at {MAX_UNIVERSE} elements, got {d}"
            )));
        }
        let full: u64 = if d == 64 { !0 } else { (1u64 << d) - 1 };
        for &s in &sets {
            if s & !full != 0 {
                return Err(Error::InvalidSystem(format!(
                    "member {s:#x} has elements outside the {d}-element universe"
                )));
            }
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(MrdSystem { d, m, r, sets })
    }

    /// Check the three defining clauses, in order: intersection
    /// closure, member sizes, subset coverage.
    pub fn validate(&self) -> Result<()> {
        if self.sets.len() > MAX_FAMILY {
            return Err(Error::SizeLimit(format!(
                "family capped at {MAX_FAMILY} members for validation, got {}",
                self.sets.len()
            )));
        }
        let members: BTreeSet<u64> = self.sets.iter().copied().collect();
        for (i, &a) in self.sets.iter().enumerate() {
            for &b in &self.sets[i + 1..] {
                if !members.contains(&(a & b)) {
                    return Err(Error::InvalidSystem(format!(
                        "intersection {:#x} of members {a:#x} and {b:#x} is missing",
                        a & b
                    )));
                }
            }
        }
        for &s in &self.sets {
            if s.count_ones() as usize % self.m as usize == self.d % self.m as usize {
                return Err(Error::InvalidSystem(format!(
                    "member {s:#x} has size {} congruent to {} mod {}",
                    s.count_ones(),
                    self.d,
                    self.m
                )));
            }
        }
        // Coverage: it suffices to check containment in maximal members.
        let maximal = self.maximal_sets();
        let nsubsets = binom_sum_saturating(self.d, self.r);
        if nsubsets.saturating_mul(maximal.len().max(1) as u64) > MAX_COVER_WORK {
            return Err(Error::SizeLimit(format!(
                "coverage check needs {nsubsets} subsets against {} maximal members",
                maximal.len()
            )));
        }
        for subset in subsets_by_weight(self.d, self.r) {
            let mask: u64 = subset.iter().fold(0, |acc, &i| acc | 1 << i);
            if !maximal.iter().any(|&f| mask & !f == 0) {
                return Err(Error::InvalidSystem(format!(
                    "subset {mask:#x} of size {} is in no member",
                    mask.count_ones()
                )));
            }
        }
        Ok(())
    }

    /// Members not strictly contained in another member.
    pub fn maximal_sets(&self) -> Vec<u64> {
        self.sets
            .iter()
            .copied()
            .filter(|&s| {
                !self
                    .sets
                    .iter()
                    .any(|&t| t != s && s & !t == 0)
            })
            .collect()
    }
}

/// One NAND-representing polynomial per system: variable i stands for
/// maximal member F_i, and each universe element contributes the
/// monomial of the maximal members it avoids. Subtracting d mod m makes
/// the value vanish mod m exactly at the all-ones point. The coefficient
/// norm is at most d + m - 1.
pub fn mrd_to_poly(sys: &MrdSystem) -> Result<IntPoly> {
    sys.validate()?;
    let maximal = sys.maximal_sets();
    let n = maximal.len();
    if n > MAX_POLY_VARS {
        return Err(Error::SizeLimit(format!(
            "polynomial construction capped at {MAX_POLY_VARS} maximal members, got {n}"
        )));
    }
    let mut p = IntPoly::zero(n);
    for a in 0..sys.d {
        let mono: Vec<u32> = maximal
            .iter()
            .enumerate()
            .filter(|(_, &f)| f >> a & 1 == 0)
            .map(|(i, _)| i as u32)
            .collect();
        p.add_term(mono, BigInt::from(1));
    }
    p.add_term(vec![], BigInt::from(-((sys.d % sys.m as usize) as i64)));
    assert!(
        is_nand_rep_01(&p, n, sys.m)?,
        "internal: system-derived polynomial failed the NAND checker"
    );
    Ok(p)
}

/// Converse direction: a valid NAND representation with nonnegative
/// coefficients yields a system whose universe has one element per unit
/// of each coefficient. The member for an assignment x collects the
/// elements whose monomial is contained in the support of x; validity
/// of the requested r is checked, not assumed.
pub fn poly_to_mrd(p: &IntPoly, m: u32, r: usize) -> Result<MrdSystem> {
    if p.terms().values().any(|c| c.is_negative()) {
        return Err(Error::NegativeCoefficients(
            "system construction needs nonnegative coefficients".into(),
        ));
    }
    let nvars = p.nvars();
    if nvars > MAX_POLY_VARS {
        return Err(Error::SizeLimit(format!(
            "system construction capped at {MAX_POLY_VARS} variables, got {nvars}"
        )));
    }
    if !is_nand_rep_01(p, nvars, m)? {
        return Err(Error::InvalidRep(
            "polynomial is not a NAND representation for this modulus".into(),
        ));
    }
    let d: usize = p
        .coeffnorm()
        .try_into()
        .map_err(|_| Error::SizeLimit("coefficient norm exceeds the universe cap".into()))?;
    if d > MAX_UNIVERSE {
        return Err(Error::SizeLimit(format!(
            "universe capped at {MAX_UNIVERSE} elements, coefficient norm is {d}"
        )));
    }
    // One universe position per coefficient unit, in monomial order.
    let mut position_mono: Vec<u64> = Vec::with_capacity(d);
    for (mono, c) in p.terms() {
        let mask = mono.iter().fold(0u64, |acc, &v| acc | 1 << v);
        let copies: usize = c.try_into().expect("coefficient bounded by the norm");
        position_mono.extend(std::iter::repeat(mask).take(copies));
    }
    let mut members: BTreeSet<u64> = BTreeSet::new();
    for x in 0..(1u64 << nvars) - 1 {
        let mut member = 0u64;
        for (a, &mono) in position_mono.iter().enumerate() {
            if mono & !x == 0 {
                member |= 1 << a;
            }
        }
        members.insert(member);
    }
    if members.len() > MAX_FAMILY {
        return Err(Error::SizeLimit(format!(
            "family capped at {MAX_FAMILY} members, construction produced {}",
            members.len()
        )));
    }
    let sys = MrdSystem::new(d, m, r, members.into_iter().collect())?;
    sys.validate()?;
    Ok(sys)
}
