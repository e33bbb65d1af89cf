//! Closed-form solutions of second-order linear discrete systems with a
//! single pure delay,
//!
//! ```text
//! Δ²y(t) + A y(t) + B y(t - m) = f(t),   t >= 0,
//! y(t) = φ(t),                           -m <= t <= 1,
//! ```
//!
//! where `A` and `B` need not commute. The solution is written with the
//! delayed discrete matrix sine and cosine built from the determining
//! matrices `Q(t; s)`, and every closed-form value can be checked against the
//! plain recurrence in exact rational arithmetic.
//!
//! ```
//! use ddelay::{Matrix, ProblemSpec, ForcingSpec, Rational, Vector};
//! use ddelay::{simulate, solve_closed_form};
//!
//! let p = ProblemSpec::<Rational>::new(
//!     1,
//!     Matrix::from_i64_rows(&[&[0]]).unwrap(),
//!     Matrix::from_i64_rows(&[&[1]]).unwrap(),
//!     vec![Vector::from_i64(&[1]); 3],
//!     ForcingSpec::Zero,
//!     10,
//! )
//! .unwrap();
//! assert_eq!(solve_closed_form(&p).unwrap(), simulate(&p));
//! ```

pub mod algebra;
pub mod determining;
pub mod error;
pub mod format;
pub mod oracle;
pub mod problem;
pub mod solver;
pub mod trig;

pub use algebra::{binomial, kronecker, step, Matrix, Mode, NormKind, Rational, Scalar, Vector};
pub use determining::{commutative_q, DeterminingTable};
pub use error::{Error, ParseScalarError, Result};
pub use format::{parse_problem, parse_problem_str, AnyProblem, NumberStyle};
pub use oracle::{
    check_trig_bounds, check_trig_identities, exp_bound, gronwall_bound, simulate, verify,
    verify_with, BoundCheck, ExpBoundReport, GronwallProduct, IdentityCheck, VerificationReport,
    VerifyOptions,
};
pub use problem::{ForcingSpec, ProblemSpec, Trajectory};
pub use solver::{solution_breakdown, solve_closed_form, Breakdown, ClosedFormSolver, HistorySign};
pub use trig::{mc_eval, ms_eval, TrigEvaluator};
