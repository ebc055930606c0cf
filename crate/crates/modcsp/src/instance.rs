//! Instance types: Horn, XOR-linear, and 2-SAT formulas, each carrying a
//! modular side constraint, plus the unit-weight normalization shared by
//! the round-bounded solvers.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Assignment, GroupSpec, ModularSideConstraint, ResidueVector};

/// A literal: variable index plus negation flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: u32,
    pub neg: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit { var, neg: false }
    }

    pub fn negf(var: u32) -> Self {
        Lit { var, neg: true }
    }

    pub fn complement(self) -> Self {
        Lit {
            var: self.var,
            neg: !self.neg,
        }
    }

    pub fn eval(self, x: &Assignment) -> bool {
        x.get(self.var as usize) ^ self.neg
    }
}

/// Definite Horn clause: body (all positive) implies head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornClause {
    pub head: u32,
    /// Sorted, deduplicated, never contains the head.
    pub body: Vec<u32>,
}

impl HornClause {
    pub fn new(head: u32, mut body: Vec<u32>) -> Result<Self> {
        body.sort_unstable();
        body.dedup();
        if body.is_empty() {
            return Err(Error::InvalidSystem("clause body must be non-empty".into()));
        }
        if body.contains(&head) {
            return Err(Error::InvalidSystem(format!(
                "head {head} appears in its own body"
            )));
        }
        Ok(HornClause { head, body })
    }

    pub fn satisfied(&self, x: &Assignment) -> bool {
        !self.body.iter().all(|&b| x.get(b as usize)) || x.get(self.head as usize)
    }
}

/// Horn formula with unit constraints and a modular side constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornInstance {
    pub n: usize,
    pub clauses: Vec<HornClause>,
    /// Forced values: (variable, value).
    pub units: Vec<(u32, bool)>,
    pub side: ModularSideConstraint,
}

impl HornInstance {
    pub fn new(
        n: usize,
        clauses: Vec<HornClause>,
        units: Vec<(u32, bool)>,
        side: ModularSideConstraint,
    ) -> Result<Self> {
        if side.n() != n {
            return Err(Error::LengthMismatch(format!(
                "side constraint covers {} variables, instance has {n}",
                side.n()
            )));
        }
        for c in &clauses {
            if c.head as usize >= n || c.body.iter().any(|&b| b as usize >= n) {
                return Err(Error::LengthMismatch("clause variable out of range".into()));
            }
        }
        for &(v, _) in &units {
            if v as usize >= n {
                return Err(Error::LengthMismatch("unit variable out of range".into()));
            }
        }
        Ok(HornInstance {
            n,
            clauses,
            units,
            side,
        })
    }

    /// Boolean part only (clauses and units, not the side constraint).
    pub fn boolean_satisfied(&self, x: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.satisfied(x))
            && self.units.iter().all(|&(v, b)| x.get(v as usize) == b)
    }

    pub fn satisfied(&self, x: &Assignment) -> Result<bool> {
        Ok(self.boolean_satisfied(x) && self.side.eval(x)?.1)
    }
}

/// XOR-linear system: each equation is (variables, rhs bit), meaning the
/// XOR of the listed variables equals the bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lin2Instance {
    pub n: usize,
    pub equations: Vec<(Vec<u32>, bool)>,
    pub side: ModularSideConstraint,
}

impl Lin2Instance {
    pub fn new(
        n: usize,
        equations: Vec<(Vec<u32>, bool)>,
        side: ModularSideConstraint,
    ) -> Result<Self> {
        if side.n() != n {
            return Err(Error::LengthMismatch(format!(
                "side constraint covers {} variables, instance has {n}",
                side.n()
            )));
        }
        let mut canon = Vec::with_capacity(equations.len());
        for (vars, rhs) in equations {
            let mut vars = vars;
            vars.sort_unstable();
            for w in vars.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidSystem(
                        "equation lists a variable twice".into(),
                    ));
                }
            }
            if vars.iter().any(|&v| v as usize >= n) {
                return Err(Error::LengthMismatch("equation variable out of range".into()));
            }
            canon.push((vars, rhs));
        }
        Ok(Lin2Instance {
            n,
            equations: canon,
            side,
        })
    }

    pub fn boolean_satisfied(&self, x: &Assignment) -> bool {
        self.equations.iter().all(|(vars, rhs)| {
            vars.iter().fold(false, |acc, &v| acc ^ x.get(v as usize)) == *rhs
        })
    }

    pub fn satisfied(&self, x: &Assignment) -> Result<bool> {
        Ok(self.boolean_satisfied(x) && self.side.eval(x)?.1)
    }
}

/// 2-SAT formula: binary disjunctions over literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSatInstance {
    pub n: usize,
    pub clauses: Vec<(Lit, Lit)>,
    pub side: ModularSideConstraint,
}

impl TwoSatInstance {
    pub fn new(n: usize, clauses: Vec<(Lit, Lit)>, side: ModularSideConstraint) -> Result<Self> {
        if side.n() != n {
            return Err(Error::LengthMismatch(format!(
                "side constraint covers {} variables, instance has {n}",
                side.n()
            )));
        }
        for (a, b) in &clauses {
            if a.var as usize >= n || b.var as usize >= n {
                return Err(Error::LengthMismatch("clause variable out of range".into()));
            }
        }
        Ok(TwoSatInstance { n, clauses, side })
    }

    pub fn boolean_satisfied(&self, x: &Assignment) -> bool {
        self.clauses.iter().all(|&(a, b)| a.eval(x) || b.eval(x))
    }

    pub fn satisfied(&self, x: &Assignment) -> Result<bool> {
        Ok(self.boolean_satisfied(x) && self.side.eval(x)?.1)
    }
}

/// Result of unit-weight normalization: the rewritten instance plus the
/// original variable count. Copies of a variable are appended after the
/// originals and forced equal to them, so lifting a solution is just
/// truncation.
#[derive(Debug, Clone)]
pub struct Normalized<T> {
    pub inst: T,
    pub original_n: usize,
}

impl<T> Normalized<T> {
    pub fn lift(&self, x: &Assignment) -> Assignment {
        x.truncate(self.original_n)
    }
}

/// Shared weight rewrite. Returns, per variable, its effective weight
/// w_j = (g_j(1) - g_j(0)) mod M, plus the allowed set shifted by
/// -sum_j g_j(0). Requires a single-component group.
fn shift_and_diff(side: &ModularSideConstraint) -> Result<(u32, Vec<u32>, BTreeSet<u32>)> {
    if side.group.components() != 1 {
        return Err(Error::MultiComponentGroup);
    }
    let m = side.group.moduli()[0];
    let mut base = 0u64;
    let mut diffs = Vec::with_capacity(side.weights.len());
    for (g0, g1) in &side.weights {
        let a0 = g0.residues()[0] as u64;
        let a1 = g1.residues()[0] as u64;
        base = (base + a0) % m as u64;
        diffs.push(((a1 + m as u64 - a0) % m as u64) as u32);
    }
    let shifted = side
        .allowed
        .iter()
        .map(|s| {
            let r = s.residues()[0] as u64;
            ((r + m as u64 - base) % m as u64) as u32
        })
        .collect();
    Ok((m, diffs, shifted))
}

fn unit_side(
    m: u32,
    weights_per_var: &[u32],
    allowed: &BTreeSet<u32>,
) -> Result<ModularSideConstraint> {
    let group = GroupSpec::single(m)?;
    let zero = group.zero();
    let one = group.elem(vec![1 % m])?;
    let pairs: Vec<(ResidueVector, ResidueVector)> = weights_per_var
        .iter()
        .map(|&w| {
            (
                zero.clone(),
                if w == 0 { zero.clone() } else { one.clone() },
            )
        })
        .collect();
    let allowed_set: BTreeSet<ResidueVector> = allowed
        .iter()
        .map(|&a| group.elem(vec![a]))
        .collect::<Result<_>>()?;
    ModularSideConstraint::new(group, pairs, allowed_set)
}

/// Plan the copy layout shared by both normalizations: for each original
/// variable its effective weight, and the extra copies to append.
/// Returns (m, per-new-var weight flags, copy list of (copy index, original)).
fn copy_layout(side: &ModularSideConstraint) -> Result<(u32, Vec<u32>, BTreeSet<u32>, Vec<(usize, usize)>)> {
    let (m, diffs, shifted) = shift_and_diff(side)?;
    let n = diffs.len();
    let mut flags: Vec<u32> = diffs.iter().map(|&w| u32::from(w > 0)).collect();
    let mut copies = Vec::new();
    for (j, &w) in diffs.iter().enumerate() {
        for _ in 1..w.max(1) {
            let idx = n + copies.len();
            copies.push((idx, j));
            flags.push(1);
        }
    }
    Ok((m, flags, shifted, copies))
}

/// Rewrite a Horn instance so every variable contributes weight 0 or 1.
///
/// A variable of effective weight w keeps weight 1 and gains w-1 copies
/// forced equal to it by a pair of implications; weight-0 variables stay
/// with a zero weight pair. The allowed set is shifted so that false
/// variables contribute nothing. Output has at most M times the
/// variables of the input.
pub fn normalize_unit_weights_horn(inst: &HornInstance) -> Result<Normalized<HornInstance>> {
    let (m, flags, shifted, copies) = copy_layout(&inst.side)?;
    let n2 = flags.len();
    let mut clauses = inst.clauses.clone();
    for &(copy, orig) in &copies {
        clauses.push(HornClause::new(copy as u32, vec![orig as u32])?);
        clauses.push(HornClause::new(orig as u32, vec![copy as u32])?);
    }
    let side = unit_side(m, &flags, &shifted)?;
    let out = HornInstance::new(n2, clauses, inst.units.clone(), side)?;
    Ok(Normalized {
        inst: out,
        original_n: inst.n,
    })
}

/// Same rewrite for XOR-linear instances; copies are tied with
/// two-variable XOR equations.
pub fn normalize_unit_weights_lin2(inst: &Lin2Instance) -> Result<Normalized<Lin2Instance>> {
    let (m, flags, shifted, copies) = copy_layout(&inst.side)?;
    let n2 = flags.len();
    let mut equations = inst.equations.clone();
    for &(copy, orig) in &copies {
        equations.push((vec![orig as u32, copy as u32], false));
    }
    let side = unit_side(m, &flags, &shifted)?;
    let out = Lin2Instance::new(n2, equations, side)?;
    Ok(Normalized {
        inst: out,
        original_n: inst.n,
    })
}
