//! Initial value problem `Δ²y(t) + A y(t) + B y(t-m) = f(t)` for `t >= 0`,
//! with `y(t) = φ(t)` on `-m <= t <= 1`, and its solution trajectories.

use crate::algebra::{Matrix, Rational, Scalar, Vector};
use crate::error::{Error, Result};

/// Right-hand side `f`.
#[derive(Clone, Debug, PartialEq)]
pub enum ForcingSpec<S> {
    Zero,
    Constant(Vector<S>),
    /// `f(t) = b1 · b2^t` with `b2 > 0`.
    Geometric { b1: Vector<S>, b2: S },
    /// Explicit values `f(0), f(1), ...`.
    Table(Vec<Vector<S>>),
}

impl<S: Scalar> ForcingSpec<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            ForcingSpec::Zero => "zero",
            ForcingSpec::Constant(_) => "constant",
            ForcingSpec::Geometric { .. } => "geometric",
            ForcingSpec::Table(_) => "table",
        }
    }

    fn validate(&self, d: usize, horizon: usize) -> Result<()> {
        let check = |v: &Vector<S>, what: &str| {
            if v.dim() == d {
                Ok(())
            } else {
                Err(Error::Forcing(format!(
                    "{what} has dimension {}, expected {d}",
                    v.dim()
                )))
            }
        };
        match self {
            ForcingSpec::Zero => Ok(()),
            ForcingSpec::Constant(c) => check(c, "constant c"),
            ForcingSpec::Geometric { b1, b2 } => {
                check(b1, "geometric b1")?;
                if *b2 <= S::zero() {
                    return Err(Error::Forcing("geometric b2 must be positive".into()));
                }
                Ok(())
            }
            ForcingSpec::Table(values) => {
                let needed = horizon.saturating_sub(1);
                if values.len() < needed {
                    return Err(Error::Forcing(format!(
                        "table has {} entries but horizon {horizon} needs f(0..={})",
                        values.len(),
                        horizon as i64 - 2
                    )));
                }
                values
                    .iter()
                    .enumerate()
                    .try_for_each(|(t, v)| check(v, &format!("table entry {t}")))
            }
        }
    }

    /// `f(t)` for `t >= 0`. Table entries beyond the stored range read as zero.
    pub fn value(&self, t: usize, d: usize) -> Vector<S> {
        match self {
            ForcingSpec::Zero => Vector::zeros(d),
            ForcingSpec::Constant(c) => c.clone(),
            ForcingSpec::Geometric { b1, b2 } => b1.scale(&b2.pow(t as u32)),
            ForcingSpec::Table(values) => values.get(t).cloned().unwrap_or_else(|| Vector::zeros(d)),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ForcingSpec<T> {
        match self {
            ForcingSpec::Zero => ForcingSpec::Zero,
            ForcingSpec::Constant(c) => ForcingSpec::Constant(c.map(f)),
            ForcingSpec::Geometric { b1, b2 } => ForcingSpec::Geometric {
                b1: b1.map(f),
                b2: f(b2),
            },
            ForcingSpec::Table(v) => ForcingSpec::Table(v.iter().map(|x| x.map(f)).collect()),
        }
    }
}

/// A validated initial value problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec<S> {
    m: usize,
    a: Matrix<S>,
    b: Matrix<S>,
    // phi[k] = φ(k - m), k = 0..=m+1
    phi: Vec<Vector<S>>,
    forcing: ForcingSpec<S>,
    horizon: usize,
}

impl<S: Scalar> ProblemSpec<S> {
    /// `phi` lists `φ(-m), φ(-m+1), ..., φ(1)`.
    pub fn new(
        m: usize,
        a: Matrix<S>,
        b: Matrix<S>,
        phi: Vec<Vector<S>>,
        forcing: ForcingSpec<S>,
        horizon: usize,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDelay(0));
        }
        if horizon == 0 {
            return Err(Error::InvalidHorizon(0));
        }
        if !a.is_square() {
            return Err(Error::NotSquare {
                what: "A",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if !b.is_square() {
            return Err(Error::NotSquare {
                what: "B",
                rows: b.rows(),
                cols: b.cols(),
            });
        }
        let d = a.rows();
        if b.rows() != d {
            return Err(Error::DimensionMismatch {
                op: "A vs B",
                left: a.shape(),
                right: b.shape(),
            });
        }
        if phi.len() != m + 2 {
            return Err(Error::InitialData(format!(
                "expected {} values for t = -{m}..=1, got {}",
                m + 2,
                phi.len()
            )));
        }
        if let Some((k, v)) = phi.iter().enumerate().find(|(_, v)| v.dim() != d) {
            return Err(Error::InitialData(format!(
                "φ({}) has dimension {}, expected {d}",
                k as i64 - m as i64,
                v.dim()
            )));
        }
        forcing.validate(d, horizon)?;
        Ok(ProblemSpec {
            m,
            a,
            b,
            phi,
            forcing,
            horizon,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn delay(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<S> {
        &self.b
    }

    pub fn forcing(&self) -> &ForcingSpec<S> {
        &self.forcing
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// φ(t) for `-m <= t <= 1`.
    pub fn phi(&self, t: i64) -> &Vector<S> {
        let k = t + self.m as i64;
        assert!(
            (0..=self.m as i64 + 1).contains(&k),
            "φ({t}) outside -{}..=1",
            self.m
        );
        &self.phi[k as usize]
    }

    pub fn phi_values(&self) -> &[Vector<S>] {
        &self.phi
    }

    pub fn forcing_at(&self, t: usize) -> Vector<S> {
        self.forcing.value(t, self.dim())
    }

    /// Same problem with a different horizon (revalidates the forcing table).
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        Self::new(
            self.m,
            self.a.clone(),
            self.b.clone(),
            self.phi.clone(),
            self.forcing.clone(),
            horizon,
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ProblemSpec<T> {
        ProblemSpec {
            m: self.m,
            a: self.a.map(f),
            b: self.b.map(f),
            phi: self.phi.iter().map(|v| v.map(f)).collect(),
            forcing: self.forcing.map(f),
            horizon: self.horizon,
        }
    }
}

impl ProblemSpec<Rational> {
    pub fn to_f64(&self) -> ProblemSpec<f64> {
        self.map(Scalar::to_f64)
    }
}

/// Solution values on `-m ..= T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    t_min: i64,
    values: Vec<Vector<S>>,
}

impl<S: Scalar> Trajectory<S> {
    pub fn new(t_min: i64, values: Vec<Vector<S>>) -> Self {
        Trajectory { t_min, values }
    }

    pub fn t_min(&self) -> i64 {
        self.t_min
    }

    pub fn t_max(&self) -> i64 {
        self.t_min + self.values.len() as i64 - 1
    }

    pub fn get(&self, t: i64) -> Option<&Vector<S>> {
        usize::try_from(t - self.t_min)
            .ok()
            .and_then(|k| self.values.get(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Vector<S>)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.t_min + k as i64, v))
    }

    pub fn values(&self) -> &[Vector<S>] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vector::dim)
    }
}
