//! Finite abelian groups of the form Z/M1 x ... x Z/Mk, their elements,
//! and the modular side constraint attached to a Boolean instance.
//!
//! Residues are stored canonically in [0, Mi). Group elements can also be
//! packed into a single u64 mixed-radix index (the group order is capped
//! at 2^32, so this always fits); the 2-SAT solver works on packed
//! elements for speed.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// The moduli (M1, ..., Mk), each at least 2, with product at most 2^32.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    moduli: Vec<u32>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidModulus("group needs at least one modulus".into()));
        }
        let mut order: u64 = 1;
        for &m in &moduli {
            if m < 2 {
                return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
            }
            order = order.saturating_mul(m as u64);
            if order > 1u64 << 32 {
                return Err(Error::SizeLimit("group order exceeds 2^32".into()));
            }
        }
        Ok(GroupSpec { moduli })
    }

    pub fn single(m: u32) -> Result<Self> {
        GroupSpec::new(vec![m])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn components(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().map(|&m| m as u64).product()
    }

    /// Build an element, checking residue ranges.
    pub fn elem(&self, residues: Vec<u32>) -> Result<ResidueVector> {
        if residues.len() != self.moduli.len() {
            return Err(Error::LengthMismatch(format!(
                "element has {} residues, group has {} components",
                residues.len(),
                self.moduli.len()
            )));
        }
        for (i, (&r, &m)) in residues.iter().zip(&self.moduli).enumerate() {
            if r >= m {
                return Err(Error::InvalidModulus(format!(
                    "residue {r} out of range for modulus {m} in component {i}"
                )));
            }
        }
        Ok(ResidueVector {
            moduli: self.moduli.clone(),
            residues,
        })
    }

    pub fn zero(&self) -> ResidueVector {
        ResidueVector {
            moduli: self.moduli.clone(),
            residues: vec![0; self.moduli.len()],
        }
    }

    /// Pack an element into its mixed-radix index (component 0 varies
    /// fastest).
    pub fn encode(&self, v: &ResidueVector) -> u64 {
        debug_assert_eq!(v.moduli, self.moduli);
        let mut idx = 0u64;
        let mut stride = 1u64;
        for (&r, &m) in v.residues.iter().zip(&self.moduli) {
            idx += r as u64 * stride;
            stride *= m as u64;
        }
        idx
    }

    pub fn decode(&self, mut idx: u64) -> ResidueVector {
        let mut residues = Vec::with_capacity(self.moduli.len());
        for &m in &self.moduli {
            residues.push((idx % m as u64) as u32);
            idx /= m as u64;
        }
        debug_assert_eq!(idx, 0);
        ResidueVector {
            moduli: self.moduli.clone(),
            residues,
        }
    }

    /// Packed-index addition without unpacking.
    pub fn encoded_add(&self, a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        let mut stride = 1u64;
        let (mut a, mut b) = (a, b);
        for &m in &self.moduli {
            let m = m as u64;
            out += ((a % m + b % m) % m) * stride;
            a /= m;
            b /= m;
            stride *= m;
        }
        out
    }

    pub fn encoded_neg(&self, a: u64) -> u64 {
        let mut out = 0u64;
        let mut stride = 1u64;
        let mut a = a;
        for &m in &self.moduli {
            let m = m as u64;
            let r = a % m;
            out += (if r == 0 { 0 } else { m - r }) * stride;
            a /= m;
            stride *= m;
        }
        out
    }

    pub fn encoded_sub(&self, a: u64, b: u64) -> u64 {
        self.encoded_add(a, self.encoded_neg(b))
    }
}

/// An element of a product group, carrying its moduli so that arithmetic
/// can check compatibility.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueVector {
    moduli: Vec<u32>,
    residues: Vec<u32>,
}

impl ResidueVector {
    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    fn check_same_group(&self, other: &ResidueVector) -> Result<()> {
        if self.moduli != other.moduli {
            return Err(Error::GroupMismatch(format!(
                "{:?} vs {:?}",
                self.moduli, other.moduli
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ResidueVector) -> Result<ResidueVector> {
        self.check_same_group(other)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(&self.moduli)
            .map(|((&a, &b), &m)| ((a as u64 + b as u64) % m as u64) as u32)
            .collect();
        Ok(ResidueVector {
            moduli: self.moduli.clone(),
            residues,
        })
    }

    pub fn neg(&self) -> ResidueVector {
        let residues = self
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| if a == 0 { 0 } else { m - a })
            .collect();
        ResidueVector {
            moduli: self.moduli.clone(),
            residues,
        }
    }

    pub fn sub(&self, other: &ResidueVector) -> Result<ResidueVector> {
        self.check_same_group(other)?;
        self.add(&other.neg())
    }
}

/// A Boolean assignment. Bit i is variable i (0-indexed).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn all_false(n: usize) -> Self {
        Assignment { bits: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, b: bool) {
        self.bits[i] = b;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn truncate(&self, n: usize) -> Assignment {
        Assignment {
            bits: self.bits[..n].to_vec(),
        }
    }
}

/// The modular side constraint: per-variable weight pairs
/// (g_j(0), g_j(1)) in a product group, plus the allowed set S of
/// residue tuples the total weight must land in.
///
/// The weight of an assignment x is sum_j g_j(x_j); the constraint is
/// satisfied when that sum is a member of `allowed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularSideConstraint {
    pub group: GroupSpec,
    /// One (g_j(0), g_j(1)) pair per variable.
    pub weights: Vec<(ResidueVector, ResidueVector)>,
    /// Non-empty, kept sorted by the BTreeSet.
    pub allowed: BTreeSet<ResidueVector>,
}

impl ModularSideConstraint {
    pub fn new(
        group: GroupSpec,
        weights: Vec<(ResidueVector, ResidueVector)>,
        allowed: BTreeSet<ResidueVector>,
    ) -> Result<Self> {
        for (g0, g1) in &weights {
            if g0.moduli() != group.moduli() || g1.moduli() != group.moduli() {
                return Err(Error::GroupMismatch(
                    "weight pair not in the constraint group".into(),
                ));
            }
        }
        if allowed.is_empty() {
            return Err(Error::InvalidModulus("allowed set must be non-empty".into()));
        }
        for a in &allowed {
            if a.moduli() != group.moduli() {
                return Err(Error::GroupMismatch(
                    "allowed tuple not in the constraint group".into(),
                ));
            }
        }
        Ok(ModularSideConstraint {
            group,
            weights,
            allowed,
        })
    }

    /// Unit-weight constraint: every variable contributes 1 (per
    /// component) when true, 0 when false.
    pub fn unit(group: GroupSpec, n: usize, allowed: BTreeSet<ResidueVector>) -> Result<Self> {
        let one = group.elem(group.moduli().iter().map(|&m| 1 % m).collect())?;
        let zero = group.zero();
        ModularSideConstraint::new(group, vec![(zero, one); n], allowed)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Total weight of `x` and whether it lands in the allowed set.
    pub fn eval(&self, x: &Assignment) -> Result<(ResidueVector, bool)> {
        if x.len() != self.weights.len() {
            return Err(Error::LengthMismatch(format!(
                "assignment has {} bits, constraint has {} variables",
                x.len(),
                self.weights.len()
            )));
        }
        let mut total = self.group.zero();
        for (j, (g0, g1)) in self.weights.iter().enumerate() {
            let term = if x.get(j) { g1 } else { g0 };
            total = total.add(term)?;
        }
        let ok = self.allowed.contains(&total);
        Ok((total, ok))
    }

    /// True when all weight pairs are (0, w): nothing contributed by
    /// false variables.
    pub fn zero_based(&self) -> bool {
        self.weights.iter().all(|(g0, _)| g0.is_zero())
    }

    /// True when every pair is (0, 0) or (0, 1) in a single-component
    /// group: the form the round-bounded solvers expect.
    pub fn is_unit_or_zero(&self) -> bool {
        self.group.components() == 1
            && self.weights.iter().all(|(g0, g1)| {
                g0.is_zero() && (g1.is_zero() || g1.residues()[0] == 1)
            })
    }
}
