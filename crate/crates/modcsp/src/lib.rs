//! Solvers for Boolean constraint problems carrying a global modular
//! side constraint: the total weight of the chosen variables, measured
//! in a finite abelian group Z/M1 x ... x Z/Mk, must land in a given set
//! of residue tuples.
//!
//! Three Boolean fragments are covered (Horn, 2-SAT, XOR-linear), each
//! with a dedicated solver whose search budget is controlled by
//! structural parameters: round counts for Horn, subspace dimension
//! bounds for the linear case, and a DAG recursion for 2-SAT. The
//! `poly` / `mrd` / `convert` modules hold the polynomial representation
//! toolkit those budgets come from, `reduce` the instance rewritings
//! between fragments, `oracle` brute-force references, and `fmt` the
//! text formats used by the CLI.

pub mod arith;
pub mod convert;
pub mod error;
pub mod fmt;
pub mod gf2;
pub mod group;
pub mod horn;
pub mod instance;
pub mod lin2;
pub mod mrd;
pub mod oracle;
pub mod poly;
pub mod reduce;
pub mod subsets;
pub mod twosat;

pub use error::{Error, Result};
pub use fmt::{AnyInstance, ProblemKind};
pub use group::{Assignment, GroupSpec, ModularSideConstraint, ResidueVector};
pub use instance::{HornClause, HornInstance, Lin2Instance, Lit, TwoSatInstance};
pub use reduce::{Flattened, ThreeSatInstance};
