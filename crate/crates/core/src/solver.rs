//! Closed-form solution of the delayed second-order system.
//!
//! For `t >= 0`
//!
//! ```text
//! y(t) = Cos(t) φ(0) + Sin(t) Δφ(0)
//!        - Σ_{i=-m}^{-1} Sin(t - i - m - 1) B φ(i)
//!        + Σ_{j=0}^{t-2} Sin(t - j - 1) f(j)
//! ```
//!
//! with `Δφ(0) = φ(1) - φ(0)`. At `t ∈ {0, 1}` the history and forcing terms
//! vanish because `Sin` is zero at non-positive arguments, so the same
//! expression reproduces `φ(0)` and `φ(1)`.

use crate::algebra::{Scalar, Vector};
use crate::error::{Error, Result};
use crate::problem::{ProblemSpec, Trajectory};
use crate::trig::TrigEvaluator;

/// Sign applied to the initial-history sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HistorySign {
    /// `- Σ Sin(t-i-m-1) B φ(i)`: the sign that solves the recurrence.
    #[default]
    Subtract,
    /// `+ Σ ...`: kept only to demonstrate that it does not.
    Add,
}

/// The four addends of the closed form at one `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Breakdown<S> {
    /// `Cos(t) φ(0)`
    pub homog_cos: Vector<S>,
    /// `Sin(t) Δφ(0)`
    pub homog_sin: Vector<S>,
    /// History sum with its sign already applied.
    pub history: Vector<S>,
    /// `Σ_{j=0}^{t-2} Sin(t-j-1) f(j)`
    pub forced: Vector<S>,
}

impl<S: Scalar> Breakdown<S> {
    pub fn total(&self) -> Vector<S> {
        &(&(&self.homog_cos + &self.homog_sin) + &self.history) + &self.forced
    }
}

/// Evaluates the closed form for one problem, reusing cached `Sin`/`Cos`.
#[derive(Clone, Debug)]
pub struct ClosedFormSolver<'p, S> {
    problem: &'p ProblemSpec<S>,
    trig: TrigEvaluator<S>,
    sign: HistorySign,
    delta_phi0: Vector<S>,
    // B φ(i) for i = -m..=-1
    history: Vec<Vector<S>>,
    forcing: Vec<Vector<S>>,
}

impl<'p, S: Scalar> ClosedFormSolver<'p, S> {
    pub fn new(problem: &'p ProblemSpec<S>) -> Result<Self> {
        Self::with_sign(problem, HistorySign::Subtract)
    }

    pub fn with_sign(problem: &'p ProblemSpec<S>, sign: HistorySign) -> Result<Self> {
        let m = problem.delay() as i64;
        let horizon = problem.horizon();
        let mut trig = TrigEvaluator::new(problem.a().clone(), problem.b().clone(), problem.delay())?;
        trig.prepare(horizon as i64);
        let history = (-m..=-1).map(|i| problem.b() * problem.phi(i)).collect();
        let forcing = (0..horizon.saturating_sub(1))
            .map(|j| problem.forcing_at(j))
            .collect();
        Ok(ClosedFormSolver {
            delta_phi0: problem.phi(1) - problem.phi(0),
            problem,
            trig,
            sign,
            history,
            forcing,
        })
    }

    pub fn trig(&self) -> &TrigEvaluator<S> {
        &self.trig
    }

    fn sin(&self, t: i64) -> &crate::algebra::Matrix<S> {
        self.trig.sin_ref(t).expect("sine cache covers the horizon")
    }

    pub fn breakdown(&self, t: i64) -> Result<Breakdown<S>> {
        let p = self.problem;
        let horizon = p.horizon() as i64;
        if !(0..=horizon).contains(&t) {
            return Err(Error::OutOfRange(format!("t = {t} outside 0..={horizon}")));
        }
        let d = p.dim();
        let m = p.delay() as i64;
        let homog_cos = self.trig.cos_ref(t).expect("cosine cache covers the horizon") * p.phi(0);
        let homog_sin = self.sin(t) * &self.delta_phi0;

        let mut history = Vector::zeros(d);
        for (k, b_phi) in self.history.iter().enumerate() {
            let i = k as i64 - m;
            history = &history + &(self.sin(t - i - m - 1) * b_phi);
        }
        if self.sign == HistorySign::Subtract {
            history = -&history;
        }

        let mut forced = Vector::zeros(d);
        for j in 0..(t - 1).max(0) {
            forced = &forced + &(self.sin(t - j - 1) * &self.forcing[j as usize]);
        }

        Ok(Breakdown {
            homog_cos,
            homog_sin,
            history,
            forced,
        })
    }

    pub fn value(&self, t: i64) -> Result<Vector<S>> {
        Ok(self.breakdown(t)?.total())
    }

    /// Full trajectory on `-m ..= T`; negative times are copied from φ.
    pub fn trajectory(&self) -> Trajectory<S> {
        let p = self.problem;
        let m = p.delay() as i64;
        let mut values: Vec<Vector<S>> = (-m..0).map(|t| p.phi(t).clone()).collect();
        for t in 0..=p.horizon() as i64 {
            values.push(self.value(t).expect("t within horizon"));
        }
        Trajectory::new(-m, values)
    }
}

pub fn solve_closed_form<S: Scalar>(problem: &ProblemSpec<S>) -> Result<Trajectory<S>> {
    Ok(ClosedFormSolver::new(problem)?.trajectory())
}

pub fn solution_breakdown<S: Scalar>(problem: &ProblemSpec<S>, t: i64) -> Result<Breakdown<S>> {
    ClosedFormSolver::new(problem)?.breakdown(t)
}
