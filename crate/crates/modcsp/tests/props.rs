//! Randomized cross-module properties. Each case is rebuilt from a
//! (size, modulus, seed) triple so proptest can shrink toward small
//! counterexamples while the instance construction stays in one place.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use modcsp::fmt::{parse_instance, serialize_instance, AnyInstance};
use modcsp::horn::{self, HornSolveConfig, Rounds};
use modcsp::instance::{normalize_unit_weights_horn, normalize_unit_weights_lin2};
use modcsp::lin2::{self, Lin2SolveConfig};
use modcsp::oracle::{brute_solve_horn, brute_solve_lin2, brute_solve_twosat};
use modcsp::reduce::{flatten_horn, flatten_lin2};
use modcsp::twosat;
use modcsp::{
    GroupSpec, HornClause, HornInstance, Lin2Instance, Lit, ModularSideConstraint,
    TwoSatInstance,
};

fn random_group(rng: &mut StdRng, max_mod: u32, max_comps: usize) -> GroupSpec {
    let comps = rng.random_range(1..=max_comps);
    let moduli: Vec<u32> = (0..comps).map(|_| rng.random_range(2..=max_mod)).collect();
    GroupSpec::new(moduli).unwrap()
}

/// Weight pairs with (g(1) - g(0)) mod m capped by `max_diff`. The
/// unit-weight rewrite adds one copy variable per unit of difference,
/// so this cap is what keeps normalized instances enumerable.
fn random_side(
    rng: &mut StdRng,
    group: &GroupSpec,
    n: usize,
    max_diff: u32,
) -> ModularSideConstraint {
    let weights = (0..n)
        .map(|_| {
            let mut g0 = Vec::new();
            let mut g1 = Vec::new();
            for &m in group.moduli() {
                let w0 = rng.random_range(0..m);
                let d = rng.random_range(0..=max_diff.min(m - 1));
                g0.push(w0);
                g1.push((w0 + d) % m);
            }
            (group.elem(g0).unwrap(), group.elem(g1).unwrap())
        })
        .collect();
    let mut allowed = BTreeSet::new();
    for _ in 0..rng.random_range(1..=2) {
        let rs: Vec<u32> = group
            .moduli()
            .iter()
            .map(|&m| rng.random_range(0..m))
            .collect();
        allowed.insert(group.elem(rs).unwrap());
    }
    ModularSideConstraint::new(group.clone(), weights, allowed).unwrap()
}

fn random_horn(rng: &mut StdRng, n: usize, side: ModularSideConstraint) -> HornInstance {
    let mut clauses = Vec::new();
    if n >= 2 {
        for _ in 0..rng.random_range(0..=4) {
            let head = rng.random_range(0..n as u32);
            let pool: Vec<u32> = (0..n as u32).filter(|&v| v != head).collect();
            let take = rng.random_range(1..=pool.len());
            clauses.push(HornClause::new(head, pool[..take].to_vec()).unwrap());
        }
    }
    let units = (0..rng.random_range(0..=2))
        .map(|_| (rng.random_range(0..n as u32), rng.random::<bool>()))
        .collect();
    HornInstance::new(n, clauses, units, side).unwrap()
}

fn random_lin2(rng: &mut StdRng, n: usize, side: ModularSideConstraint) -> Lin2Instance {
    let mut equations = Vec::new();
    for _ in 0..rng.random_range(0..=n) {
        let vars: Vec<u32> = (0..n as u32).filter(|_| rng.random::<bool>()).collect();
        if !vars.is_empty() {
            equations.push((vars, rng.random::<bool>()));
        }
    }
    Lin2Instance::new(n, equations, side).unwrap()
}

fn random_twosat(rng: &mut StdRng, n: usize, side: ModularSideConstraint) -> TwoSatInstance {
    let clauses = (0..rng.random_range(0..=4))
        .map(|_| {
            let mut lit = || Lit {
                var: rng.random_range(0..n as u32),
                neg: rng.random::<bool>(),
            };
            (lit(), lit())
        })
        .collect();
    TwoSatInstance::new(n, clauses, side).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn horn_fixed_budget_matches_oracle(n in 1usize..=5, m in 2u32..=9, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let group = GroupSpec::single(m).unwrap();
        let side = random_side(&mut rng, &group, n, 2);
        let inst = random_horn(&mut rng, n, side);
        let cfg = HornSolveConfig {
            rounds: Rounds::Fixed(64),
            ..HornSolveConfig::default()
        };
        let got = horn::solve(&inst, &cfg).unwrap();
        let want = brute_solve_horn(&inst).unwrap();
        prop_assert_eq!(got.is_some(), want.is_some());
        if let Some(sol) = got {
            prop_assert!(inst.satisfied(&sol).unwrap());
        }
    }

    #[test]
    fn lin2_auto_matches_oracle(n in 1usize..=5, m in 2u32..=9, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let group = GroupSpec::single(m).unwrap();
        let side = random_side(&mut rng, &group, n, u32::MAX);
        let inst = random_lin2(&mut rng, n, side);
        let got = lin2::solve(&inst, &Lin2SolveConfig::default()).unwrap();
        let want = brute_solve_lin2(&inst).unwrap();
        prop_assert_eq!(got.is_some(), want.is_some());
        if let Some(sol) = got {
            prop_assert!(inst.satisfied(&sol).unwrap());
        }
    }

    #[test]
    fn twosat_matches_oracle(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let group = random_group(&mut rng, 5, 2);
        let side = random_side(&mut rng, &group, n, u32::MAX);
        let inst = random_twosat(&mut rng, n, side);
        let got = twosat::solve(&inst).unwrap();
        let want = brute_solve_twosat(&inst).unwrap();
        prop_assert_eq!(got.is_some(), want.is_some());
        if let Some(sol) = got {
            prop_assert!(inst.satisfied(&sol).unwrap());
        }
    }

    #[test]
    fn serialize_parse_is_identity(n in 1usize..=6, kind in 0u8..3, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let group = random_group(&mut rng, 6, 2);
        let side = random_side(&mut rng, &group, n, u32::MAX);
        let inst = match kind {
            0 => AnyInstance::Horn(random_horn(&mut rng, n, side)),
            1 => AnyInstance::Lin2(random_lin2(&mut rng, n, side)),
            _ => AnyInstance::TwoSat(random_twosat(&mut rng, n, side)),
        };
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn normalization_preserves_verdict(n in 1usize..=5, m in 2u32..=6, kind in 0u8..2, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let group = GroupSpec::single(m).unwrap();
        let side = random_side(&mut rng, &group, n, 2);
        if kind == 0 {
            let inst = random_horn(&mut rng, n, side);
            let norm = normalize_unit_weights_horn(&inst).unwrap();
            let a = brute_solve_horn(&inst).unwrap();
            let b = brute_solve_horn(&norm.inst).unwrap();
            prop_assert_eq!(a.is_some(), b.is_some());
            if let Some(sol) = b {
                prop_assert!(inst.satisfied(&norm.lift(&sol)).unwrap());
            }
        } else {
            let inst = random_lin2(&mut rng, n, side);
            let norm = normalize_unit_weights_lin2(&inst).unwrap();
            let a = brute_solve_lin2(&inst).unwrap();
            let b = brute_solve_lin2(&norm.inst).unwrap();
            prop_assert_eq!(a.is_some(), b.is_some());
            if let Some(sol) = b {
                prop_assert!(inst.satisfied(&norm.lift(&sol)).unwrap());
            }
        }
    }

    #[test]
    fn flattening_preserves_verdict(n in 1usize..=4, kind in 0u8..2, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let group = GroupSpec::new(vec![2, 3]).unwrap();
        let mut side = random_side(&mut rng, &group, n, u32::MAX);
        let first = side.allowed.first().unwrap().clone();
        side.allowed = BTreeSet::from([first]);
        if kind == 0 {
            let inst = random_horn(&mut rng, n, side);
            let flat = flatten_horn(&inst).unwrap();
            let a = brute_solve_horn(&inst).unwrap();
            let b = brute_solve_horn(&flat.inst).unwrap();
            prop_assert_eq!(a.is_some(), b.is_some());
            if let Some(sol) = b {
                prop_assert!(inst.satisfied(&flat.lift(&sol)).unwrap());
            }
        } else {
            let inst = random_lin2(&mut rng, n, side);
            let flat = flatten_lin2(&inst).unwrap();
            let a = brute_solve_lin2(&inst).unwrap();
            let b = brute_solve_lin2(&flat.inst).unwrap();
            prop_assert_eq!(a.is_some(), b.is_some());
            if let Some(sol) = b {
                prop_assert!(inst.satisfied(&flat.lift(&sol)).unwrap());
            }
        }
    }
}
