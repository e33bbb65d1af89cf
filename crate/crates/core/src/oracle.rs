//! Brute-force recurrence, closed-form verification and a-priori bounds.

use serde_json::{json, Value};

use crate::algebra::{Matrix, Mode, NormKind, Scalar, Vector};
use crate::error::{Error, Result};
use crate::problem::{ForcingSpec, ProblemSpec, Trajectory};
use crate::solver::{ClosedFormSolver, HistorySign};
use crate::trig::TrigEvaluator;

/// Iterate `y(t+2) = 2y(t+1) - y(t) - A y(t) - B y(t-m) + f(t)` from the
/// initial data up to the horizon.
pub fn simulate<S: Scalar>(problem: &ProblemSpec<S>) -> Trajectory<S> {
    let m = problem.delay() as i64;
    let mut values: Vec<Vector<S>> = problem.phi_values().to_vec();
    let at = |values: &Vec<Vector<S>>, t: i64| values[(t + m) as usize].clone();
    let two = S::one() + S::one();
    for t in 0..=(problem.horizon() as i64 - 2) {
        let y1 = at(&values, t + 1);
        let y0 = at(&values, t);
        let lagged = at(&values, t - m);
        let next = &(&(&y1.scale(&two) - &y0) - &(problem.a() * &y0)) - &(problem.b() * &lagged);
        values.push(&next + &problem.forcing_at(t as usize));
    }
    Trajectory::new(-m, values)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub sign: HistorySign,
    pub norm: NormKind,
    /// Relative tolerance used in `f64` mode; rational mode always demands
    /// exact equality.
    pub tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sign: HistorySign::Subtract,
            norm: NormKind::Induced1,
            tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck<S> {
    pub name: String,
    pub passed: bool,
    pub max_residual: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck<S> {
    pub name: String,
    /// Smallest `bound - norm` over the checked range; negative means violated.
    pub margin: S,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<S> {
    pub mode: Mode,
    pub horizon: usize,
    pub tolerance: f64,
    pub exact_equal: bool,
    pub max_abs_discrepancy: S,
    pub first_divergence_t: Option<i64>,
    pub identity_checks: Vec<IdentityCheck<S>>,
    pub bound_checks: Vec<BoundCheck<S>>,
}

impl<S: Scalar> VerificationReport<S> {
    /// Closed form agrees with the recurrence (exactly in rational mode).
    pub fn trajectory_ok(&self) -> bool {
        self.first_divergence_t.is_none()
    }

    pub fn passed(&self) -> bool {
        self.trajectory_ok()
            && self.identity_checks.iter().all(|c| c.passed)
            && self.bound_checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.as_str(),
            "horizon": self.horizon,
            "tolerance": if self.mode == Mode::Rational { 0.0 } else { self.tolerance },
            "passed": self.passed(),
            "exact_equal": self.exact_equal,
            "max_abs_discrepancy": self.max_abs_discrepancy.to_json(),
            "first_divergence_t": self.first_divergence_t,
            "identity_checks": self.identity_checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "max_residual": c.max_residual.to_json(),
            })).collect::<Vec<_>>(),
            "bound_checks": self.bound_checks.iter().map(|c| json!({
                "name": c.name,
                "margin": c.margin.to_json(),
                "passed": c.passed,
            })).collect::<Vec<_>>(),
        })
    }
}

fn within<S: Scalar>(diff: &S, scale: &S, tol: f64) -> bool {
    match S::MODE {
        Mode::Rational => diff.is_zero(),
        Mode::F64 => diff.to_f64() <= tol * scale.to_f64().max(1.0),
    }
}

struct Residual<S> {
    diff: Option<S>,
    scale: Option<S>,
}

impl<S> Default for Residual<S> {
    fn default() -> Self {
        Residual {
            diff: None,
            scale: None,
        }
    }
}

impl<S: Scalar> Residual<S> {
    fn add_matrix(&mut self, lhs: &Matrix<S>, rhs: &Matrix<S>) {
        self.push((lhs - rhs).max_abs(), lhs.max_abs().max_of(rhs.max_abs()));
    }

    fn add_vector(&mut self, lhs: &Vector<S>, rhs: &Vector<S>) {
        self.push((lhs - rhs).max_abs(), lhs.max_abs().max_of(rhs.max_abs()));
    }

    fn push(&mut self, diff: S, scale: S) {
        self.diff = Some(match self.diff.take() {
            Some(d) => d.max_of(diff),
            None => diff,
        });
        self.scale = Some(match self.scale.take() {
            Some(s) => s.max_of(scale),
            None => scale,
        });
    }

    fn finish(self, name: &str, tol: f64) -> IdentityCheck<S> {
        let diff = self.diff.unwrap_or_else(S::zero);
        let scale = self.scale.unwrap_or_else(S::zero);
        IdentityCheck {
            name: name.to_string(),
            passed: within(&diff, &scale, tol),
            max_residual: diff,
        }
    }
}

/// Check the difference identities of `Sin`/`Cos` on `0 ..= t_max`:
/// `Δ²Cos(t) = -A Cos(t) - B Cos(t-m)` and
/// `Δ²Cos(t) = -A Cos(t-1) - B Cos(t-1-m)` and
/// `Δ²Sin(t) = -A Sin(t) - B Sin(t-m)`.
pub fn check_trig_identities<S: Scalar>(
    trig: &mut TrigEvaluator<S>,
    t_max: i64,
    tol: f64,
) -> Vec<IdentityCheck<S>> {
    trig.prepare(t_max + 2);
    let m = trig.delay() as i64;
    let (a, b) = (trig.a().clone(), trig.b().clone());
    let sin = |t: i64| trig.sin_ref(t).expect("prepared");
    let cos = |t: i64| trig.cos_ref(t).expect("prepared");
    let drive = |x: &Matrix<S>, x_lag: &Matrix<S>| -&(&(&a * x) + &(&b * x_lag));
    // Δ²x(t) = x(t+2) - 2x(t+1) + x(t)
    let second = |x2: &Matrix<S>, x1: &Matrix<S>, x0: &Matrix<S>| &(&(x2 - x1) - x1) + x0;

    let mut s1 = Residual::default();
    let mut c1 = Residual::default();
    let mut c2 = Residual::default();
    let mut s2 = Residual::default();
    for t in 0..=t_max {
        s1.add_matrix(&(sin(t + 1) - sin(t)), cos(t));
        c1.add_matrix(&(cos(t + 1) - cos(t)), &drive(sin(t), sin(t - m)));
        c2.add_matrix(&second(cos(t + 2), cos(t + 1), cos(t)), &drive(cos(t), cos(t - m)));
        s2.add_matrix(&second(sin(t + 2), sin(t + 1), sin(t)), &drive(sin(t), sin(t - m)));
    }
    vec![
        s1.finish("s1: delta Sin = Cos", tol),
        c1.finish("c1: delta Cos = -A Sin(t) - B Sin(t-m)", tol),
        c2.finish("c2: delta^2 Cos = -A Cos(t) - B Cos(t-m)", tol),
        s2.finish("s2: delta^2 Sin = -A Sin(t) - B Sin(t-m)", tol),
    ]
}

/// Minimum of `l_s(t) - ‖Sin(t)‖` and `l_c(t) - ‖Cos(t)‖` over `0 ..= t_max`.
pub fn check_trig_bounds<S: Scalar>(
    trig: &mut TrigEvaluator<S>,
    t_max: i64,
    norm: NormKind,
    tol: f64,
) -> Vec<BoundCheck<S>> {
    trig.prepare(t_max);
    let mut sin_margin: Option<(S, S)> = None;
    let mut cos_margin: Option<(S, S)> = None;
    let keep_min = |slot: &mut Option<(S, S)>, margin: S, scale: S| match slot {
        Some((m, _)) if *m <= margin => {}
        _ => *slot = Some((margin, scale)),
    };
    for t in 0..=t_max {
        let ls = trig.l_s(t, norm);
        let lc = trig.l_c(t, norm);
        let sn = trig.sin_ref(t).expect("prepared").norm(norm);
        let cn = trig.cos_ref(t).expect("prepared").norm(norm);
        keep_min(&mut sin_margin, ls.clone() - sn, ls);
        keep_min(&mut cos_margin, lc.clone() - cn, lc);
    }
    [("norm Sin <= l_s", sin_margin), ("norm Cos <= l_c", cos_margin)]
        .into_iter()
        .map(|(name, slot)| {
            let (margin, scale) = slot.unwrap_or_else(|| (S::zero(), S::zero()));
            bound_check(name, margin, &scale, tol)
        })
        .collect()
}

fn bound_check<S: Scalar>(name: &str, margin: S, scale: &S, tol: f64) -> BoundCheck<S> {
    let passed = margin >= S::zero() || within(&-margin.clone(), scale, tol);
    BoundCheck {
        name: name.to_string(),
        margin,
        passed,
    }
}

/// Compare the closed form against [`simulate`] and run the identity and
/// bound checks for the problem's `(A, B, m)` over `0 ..= horizon`.
pub fn verify<S: Scalar>(problem: &ProblemSpec<S>) -> Result<VerificationReport<S>> {
    verify_with(problem, &VerifyOptions::default())
}

pub fn verify_with<S: Scalar>(
    problem: &ProblemSpec<S>,
    opts: &VerifyOptions,
) -> Result<VerificationReport<S>> {
    let tol = opts.tolerance;
    let horizon = problem.horizon() as i64;
    let m = problem.delay() as i64;
    let solver = ClosedFormSolver::with_sign(problem, opts.sign)?;
    let closed = solver.trajectory();
    let oracle = simulate(problem);

    let mut exact_equal = true;
    let mut first_divergence_t = None;
    let mut max_abs = S::zero();
    for t in 0..=horizon {
        let (y, z) = (closed.get(t).expect("t in range"), oracle.get(t).expect("t in range"));
        let diff = (y - z).max_abs();
        if !diff.is_zero() {
            exact_equal = false;
        }
        let scale = y.max_abs().max_of(z.max_abs());
        if first_divergence_t.is_none() && !within(&diff, &scale, tol) {
            first_divergence_t = Some(t);
        }
        max_abs = max_abs.max_of(diff);
    }

    let mut identity_checks = Vec::new();

    let mut initial = Residual::default();
    for t in -m..=1 {
        initial.add_vector(closed.get(t).expect("t in range"), problem.phi(t));
    }
    identity_checks.push(initial.finish("initial data reproduced on -m..=1", tol));

    // Δ²y(t) + A y(t) + B y(t-m) = f(t), evaluated on the closed form itself.
    let mut residual = Residual::default();
    let two = S::one() + S::one();
    for t in 0..=horizon - 2 {
        let y = |s: i64| closed.get(s).expect("t in range");
        let lhs = &(&(&(y(t + 2) - &y(t + 1).scale(&two)) + y(t)) + &(problem.a() * y(t)))
            + &(problem.b() * y(t - m));
        residual.add_vector(&lhs, &problem.forcing_at(t as usize));
    }
    identity_checks.push(residual.finish("equation residual of closed form", tol));

    let mut trig = solver.trig().clone();
    identity_checks.extend(check_trig_identities(&mut trig, horizon, tol));

    let mut bound_checks = check_trig_bounds(&mut trig, horizon, opts.norm, tol);
    if matches!(problem.forcing(), ForcingSpec::Geometric { .. }) {
        let report = exp_bound(problem, opts.norm)?;
        let mut worst: Option<(S, S)> = None;
        for t in 0..=horizon {
            let bound = report.bound_of_t[t as usize].clone();
            let margin = bound.clone() - oracle.get(t).expect("t in range").norm(opts.norm);
            if worst.as_ref().is_none_or(|(w, _)| margin < *w) {
                worst = Some((margin, bound));
            }
        }
        let (margin, scale) = worst.expect("horizon >= 1");
        bound_checks.push(bound_check("norm y <= exponential majorant", margin, &scale, tol));
    }

    Ok(VerificationReport {
        mode: S::MODE,
        horizon: problem.horizon(),
        tolerance: tol,
        exact_equal,
        max_abs_discrepancy: max_abs,
        first_divergence_t,
        identity_checks,
        bound_checks,
    })
}

/// Which `a` enters the product of the discrete Gronwall bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GronwallProduct {
    /// `Π_{i=j+1}^{t-1} (1 + a(j) f(i))`. Sound when `a` is non-increasing.
    #[default]
    OuterIndex,
    /// `Π_{i=j+1}^{t-1} (1 + a(i) f(i))`. Sound for every non-negative `a`.
    InnerIndex,
}

/// Right-hand side of the discrete Gronwall inequality
///
/// ```text
/// bound(t) = b(t) + a(t) Σ_{j=0}^{t-1} b(j) f(j) Π_{i=j+1}^{t-1} (1 + a(·) f(i))
/// ```
///
/// for `t = 0 ..= T`, where `T + 1` is the common length of the inputs.
/// Empty sums are 0 and empty products are 1.
pub fn gronwall_bound<S: Scalar>(
    b: &[S],
    a: &[S],
    f: &[S],
    product: GronwallProduct,
) -> Result<Vec<S>> {
    if a.len() != b.len() || f.len() != b.len() {
        return Err(Error::DimensionMismatch {
            op: "gronwall_bound",
            left: (b.len(), a.len()),
            right: (f.len(), 1),
        });
    }
    let bound = (0..b.len())
        .map(|t| {
            let sum = (0..t).fold(S::zero(), |acc, j| {
                let prod = (j + 1..t).fold(S::one(), |p, i| {
                    let coeff = match product {
                        GronwallProduct::OuterIndex => &a[j],
                        GronwallProduct::InnerIndex => &a[i],
                    };
                    p * (S::one() + coeff.clone() * f[i].clone())
                });
                acc + b[j].clone() * f[j].clone() * prod
            });
            b[t].clone() + a[t].clone() * sum
        })
        .collect();
    Ok(bound)
}

/// Exponential majorant of a solution driven by geometric forcing.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpBoundReport<S> {
    /// `b(t)` for `t = 0 ..= T`.
    pub b_of_t: Vec<S>,
    /// `b(t) (1 + t² s (1 + t s)^t)` with `s = ‖A‖ + ‖B‖`.
    pub bound_of_t: Vec<S>,
    /// Constants with `bound(t) <= b1_hat · b2_hat^t` on `0 ..= T`.
    pub b1_hat: S,
    pub b2_hat: S,
}

impl<S: Scalar> ExpBoundReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "b_of_t": self.b_of_t.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "bound_of_t": self.bound_of_t.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "b1_hat": self.b1_hat.to_json(),
            "b2_hat": self.b2_hat.to_json(),
        })
    }
}

/// `b(t) = ‖φ(0)‖ + t‖Δφ(0)‖ + Σ_{j=-m}^{-1} w_j(t) ‖B‖ ‖φ(j)‖ + t(t+1)/2 · b1 · b2^t`.
///
/// The history weight is `max(t - m - j, 0)`: the lagged value `φ(j)` only
/// enters `y(t)` once `j + m < t`. With `clamp = false` the raw weight
/// `t - m - j` is used, which goes negative for `t < m - 1`.
fn majorant_b<S: Scalar>(
    problem: &ProblemSpec<S>,
    b1: &S,
    b2: &S,
    t: i64,
    norm: NormKind,
    clamp: bool,
) -> S {
    let m = problem.delay() as i64;
    let nb = problem.b().norm(norm);
    let delta_phi0 = problem.phi(1) - problem.phi(0);
    let mut acc = problem.phi(0).norm(norm) + S::from_i64(t) * delta_phi0.norm(norm);
    for j in -m..=-1 {
        let mut w = t - m - j;
        if clamp {
            w = w.max(0);
        }
        acc = acc + S::from_i64(w) * nb.clone() * problem.phi(j).norm(norm);
    }
    let tri = S::from_i64(t * (t + 1)) / S::from_i64(2);
    acc + tri * b1.clone() * b2.pow(t as u32)
}

/// Majorant of `‖y(t)‖` for a problem with geometric forcing
/// `f(t) = b1 · b2^t`. A ratio `b2 < 1` is first raised to 1, which still
/// majorizes the forcing.
pub fn exp_bound<S: Scalar>(problem: &ProblemSpec<S>, norm: NormKind) -> Result<ExpBoundReport<S>> {
    let (b1, b2) = match problem.forcing() {
        ForcingSpec::Geometric { b1, b2 } => (b1.norm(norm), b2.clone().max_of(S::one())),
        other => {
            return Err(Error::Forcing(format!(
                "exponential bound needs geometric forcing, got {}",
                other.kind()
            )))
        }
    };
    let s = problem.a().norm(norm) + problem.b().norm(norm);
    let horizon = problem.horizon() as i64;
    let mut b_of_t = Vec::new();
    let mut bound_of_t = Vec::new();
    for t in 0..=horizon {
        let bt = majorant_b(problem, &b1, &b2, t, norm, true);
        let ts = S::from_i64(t) * s.clone();
        let growth = S::one() + S::from_i64(t) * ts.clone() * (S::one() + ts).pow(t as u32);
        bound_of_t.push(bt.clone() * growth);
        b_of_t.push(bt);
    }
    let b2_hat = b2 * (S::one() + S::from_i64(horizon) * s);
    let b1_hat = bound_of_t
        .iter()
        .enumerate()
        .map(|(t, x)| x.clone() / b2_hat.pow(t as u32))
        .fold(S::zero(), S::max_of);
    Ok(ExpBoundReport {
        b_of_t,
        bound_of_t,
        b1_hat,
        b2_hat,
    })
}
