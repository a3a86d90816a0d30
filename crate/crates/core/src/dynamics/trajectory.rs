use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Profile, RationalPoint};
use crate::measures::{AtomicMeasure, ProfileMeasure, DEFAULT_WINDOW};

/// Iteration and convergence parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Tolerance on consecutive snapshot distances.
    pub eps: f64,
    /// Number of trailing steps that must stay within `eps`.
    pub horizon: usize,
    /// Character window radius (torus) or box radius (lattice).
    pub window: u32,
    pub n_max: usize,
    /// Tolerance for recognising an idempotent limit.
    pub idempotent_tol: f64,
    /// Stop iterating once the convergence criterion holds.
    pub stop_on_convergence: bool,
    /// Scale `t` of the second atom of a constructed counterexample.
    pub atom_scale: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            eps: 1e-8,
            horizon: 20,
            window: DEFAULT_WINDOW,
            n_max: 512,
            idempotent_tol: 1e-6,
            stop_on_convergence: true,
            atom_scale: 0.1,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidInput(format!("eps must be positive, got {}", self.eps)));
        }
        if self.horizon < 2 {
            return Err(Error::InvalidInput(format!("horizon must be at least 2, got {}", self.horizon)));
        }
        if !(2..=64).contains(&self.window) {
            return Err(Error::InvalidInput(format!("window must lie in [2, 64], got {}", self.window)));
        }
        if !(1..=1_000_000).contains(&self.n_max) {
            return Err(Error::InvalidInput(format!("n_max must lie in [1, 10^6], got {}", self.n_max)));
        }
        if !(self.idempotent_tol > 0.0) {
            return Err(Error::InvalidInput("idempotent_tol must be positive".into()));
        }
        if !(self.atom_scale > 0.0 && self.atom_scale < 1.0) {
            return Err(Error::InvalidInput(format!("atom_scale must lie in (0, 1), got {}", self.atom_scale)));
        }
        Ok(())
    }
}

/// A state recorded along a trajectory.
pub trait Snapshot: Clone {
    /// Distance to the previous snapshot.
    fn distance(&self, previous: &Self) -> Result<f64>;

    /// Whether distance zero means equality of measures.
    fn is_exact(&self) -> bool {
        false
    }

    /// Hash of an exact snapshot, for cycle detection.
    fn fingerprint(&self) -> Option<u64> {
        None
    }

    /// Evidence that the mass has left every window translate.
    fn escape(&self, _window: u32) -> Option<String> {
        None
    }

    /// Named scalar columns for CSV export.
    fn probes(&self) -> Vec<(String, f64)>;
}

/// Points of a discrete group that can leave a window box.
pub trait Located {
    fn outside_box(&self, _radius: u32) -> bool {
        false
    }
}

impl Located for usize {}
impl Located for RationalPoint {}
impl Located for Profile<usize> {}

impl Located for Vec<i64> {
    fn outside_box(&self, radius: u32) -> bool {
        self.iter().any(|x| x.unsigned_abs() > u64::from(radius))
    }
}

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

impl<E: Ord + Clone + Hash + Located> Snapshot for AtomicMeasure<E> {
    fn distance(&self, previous: &Self) -> Result<f64> {
        Ok(self.tv_distance_f64(previous))
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(hash_of(self))
    }

    fn escape(&self, window: u32) -> Option<String> {
        (self.support().all(|x| x.outside_box(window)))
            .then(|| format!("all {} atoms lie outside the box of radius {window}", self.len()))
    }

    fn probes(&self) -> Vec<(String, f64)> {
        use num_traits::ToPrimitive;
        vec![
            ("max_weight".into(), self.max_weight().to_f64().unwrap_or(f64::NAN)),
            ("support_size".into(), self.len() as f64),
        ]
    }
}

impl Snapshot for ProfileMeasure {
    fn distance(&self, previous: &Self) -> Result<f64> {
        Ok(ProfileMeasure::distance(self, previous))
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(hash_of(self))
    }

    fn probes(&self) -> Vec<(String, f64)> {
        let (a, b) = self.coords().span();
        vec![("span_start".into(), a as f64), ("span_end".into(), b as f64)]
    }
}

/// Fourier coefficients of a torus measure on a fixed character window.
#[derive(Clone, Debug)]
pub struct WindowSnapshot {
    chars: Arc<Vec<Vec<i64>>>,
    coeffs: Vec<Complex64>,
}

impl WindowSnapshot {
    pub fn new(chars: Arc<Vec<Vec<i64>>>, coeffs: Vec<Complex64>) -> Result<Self> {
        if chars.len() != coeffs.len() {
            return Err(Error::Dimension { expected: chars.len(), got: coeffs.len() });
        }
        Ok(Self { chars, coeffs })
    }

    pub fn chars(&self) -> &[Vec<i64>] {
        &self.chars
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, chi: &[i64]) -> Option<Complex64> {
        self.chars.iter().position(|c| c == chi).map(|i| self.coeffs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.chars.iter().zip(&self.coeffs)
    }

    /// Characters whose coefficients are exported: unit vectors and the
    /// all-ones character.
    pub fn tracked(&self) -> Vec<Vec<i64>> {
        let d = self.chars.first().map_or(0, Vec::len);
        let mut out: Vec<Vec<i64>> = (0..d).map(|j| (0..d).map(|i| i64::from(i == j)).collect()).collect();
        if d > 1 {
            out.push(vec![1; d]);
        }
        out.retain(|c| self.chars.contains(c));
        out
    }
}

impl Snapshot for WindowSnapshot {
    fn distance(&self, previous: &Self) -> Result<f64> {
        if !Arc::ptr_eq(&self.chars, &previous.chars) && self.chars != previous.chars {
            return Err(Error::GroupMismatch("snapshots on different windows".into()));
        }
        let mut d: f64 = 0.0;
        for (a, b) in self.coeffs.iter().zip(&previous.coeffs) {
            let x = (a - b).norm();
            if x.is_nan() {
                return Err(Error::Overflow("coefficient is not representable".into()));
            }
            d = d.max(x);
        }
        Ok(d)
    }

    fn probes(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for chi in self.tracked() {
            let c = self.coeff(&chi).expect("tracked character in window");
            let label = chi.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            out.push((format!("coeff_re[{label}]"), c.re));
            out.push((format!("coeff_im[{label}]"), c.im));
        }
        out
    }
}

/// A sequence of snapshots with consecutive distances.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    params: Params,
    steps: Vec<usize>,
    states: Vec<S>,
    distances: Vec<f64>,
    markov: bool,
    warnings: Vec<String>,
    seen: HashMap<u64, Vec<usize>>,
    repeat: Option<(usize, usize)>,
}

impl<S: Snapshot> Trajectory<S> {
    /// `markov` marks trajectories where each state determines the next, so
    /// a repeated state certifies a cycle.
    pub fn new(params: Params, markov: bool) -> Self {
        Self {
            params,
            steps: Vec::new(),
            states: Vec::new(),
            distances: Vec::new(),
            markov,
            warnings: Vec::new(),
            seen: HashMap::new(),
            repeat: None,
        }
    }

    pub fn push(&mut self, step: usize, state: S) -> Result<()> {
        if let Some(prev) = self.states.last() {
            let d = state.distance(prev)?;
            if !(d >= 0.0) {
                return Err(Error::InvalidInput(format!("invalid distance {d} at step {step}")));
            }
            self.distances.push(d);
        }
        self.repeat = None;
        if self.markov {
            if let Some(fp) = state.fingerprint() {
                let idx = self.states.len();
                let prior = self.seen.entry(fp).or_default();
                self.repeat = prior
                    .iter()
                    .rev()
                    .find(|&&i| state.distance(&self.states[i]).ok() == Some(0.0))
                    .map(|&i| (self.steps[i], step));
                prior.push(idx);
            }
        }
        self.steps.push(step);
        self.states.push(state);
        Ok(())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    /// `distances()[i]` is the distance from state `i + 1` to state `i`.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_markov(&self) -> bool {
        self.markov
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }

    pub fn last_step(&self) -> Option<usize> {
        self.steps.last().copied()
    }

    /// State recorded at a given step.
    pub fn at_step(&self, step: usize) -> Option<&S> {
        self.steps.iter().position(|&s| s == step).map(|i| &self.states[i])
    }

    fn settled(&self, eps: f64, horizon: usize) -> bool {
        self.distances.len() >= horizon && self.distances[self.distances.len() - horizon..].iter().all(|&d| d <= eps)
    }

    fn divergence(&self) -> Option<String> {
        if let Some((a, b)) = self.repeat {
            if self.distances.last().is_some_and(|&d| d > 0.0) {
                return Some(format!("exact cycle: state at step {b} repeats step {a}"));
            }
        }
        let last = self.states.last()?;
        let moved = self.distances.last().is_some_and(|&d| d > 0.0);
        last.escape(self.params.window).filter(|_| moved)
    }

    /// Whether an engine may stop iterating.
    pub fn should_stop(&self) -> bool {
        self.params.stop_on_convergence
            && (self.settled(self.params.eps, self.params.horizon) || self.divergence().is_some())
    }

    /// Writes `step,distance,<probes>` rows, preceded by a `#` comment line
    /// carrying `header` when given.
    pub fn write_csv<W: Write>(&self, mut w: W, header: Option<&str>) -> io::Result<()> {
        if let Some(h) = header {
            writeln!(w, "# {h}")?;
        }
        let labels: Vec<String> =
            self.states.first().map_or_else(Vec::new, |s| s.probes().into_iter().map(|(l, _)| l).collect());
        let mut cols = vec!["step".to_string(), "distance".to_string()];
        cols.extend(labels);
        writeln!(w, "{}", cols.join(","))?;
        for (i, (step, state)) in self.steps.iter().zip(&self.states).enumerate() {
            let mut row = vec![step.to_string()];
            row.push(if i == 0 { String::new() } else { format!("{:e}", self.distances[i - 1]) });
            row.extend(state.probes().into_iter().map(|(_, v)| format!("{v:e}")));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Outcome of the convergence test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConvergenceStatus {
    /// Distances stayed within `eps` from `settled_at` to the final step.
    Converged {
        step: usize,
        settled_at: usize,
        last_distance: f64,
    },
    Diverged {
        step: usize,
        evidence: String,
    },
    Undecided {
        step: usize,
        last_distance: Option<f64>,
    },
}

/// Convergence verdict with the limit snapshot and the criterion used.
#[derive(Clone, Debug)]
pub struct ConvergenceCall<S> {
    pub status: ConvergenceStatus,
    pub limit: Option<S>,
    pub eps: f64,
    pub horizon: usize,
}

impl<S> ConvergenceCall<S> {
    pub fn is_converged(&self) -> bool {
        matches!(self.status, ConvergenceStatus::Converged { .. })
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self.status, ConvergenceStatus::Diverged { .. })
    }
}

/// Converged when the last `horizon` consecutive distances are at most
/// `eps`; Diverged only with a certificate (an exact cycle of a Markov
/// trajectory, or mass outside every window translate); else Undecided.
pub fn detect_convergence<S: Snapshot>(t: &Trajectory<S>, eps: f64, horizon: usize) -> ConvergenceCall<S> {
    let step = t.last_step().unwrap_or(0);
    let status = if t.settled(eps, horizon) {
        let run = t.distances.iter().rev().take_while(|&&d| d <= eps).count();
        let settled_at = t.steps[t.steps.len() - 1 - run];
        ConvergenceStatus::Converged { step, settled_at, last_distance: *t.distances.last().expect("settled") }
    } else if let Some(evidence) = t.divergence() {
        ConvergenceStatus::Diverged { step, evidence }
    } else {
        ConvergenceStatus::Undecided { step, last_distance: t.distances.last().copied() }
    };
    let limit = matches!(status, ConvergenceStatus::Converged { .. }).then(|| t.last().cloned()).flatten();
    ConvergenceCall { status, limit, eps, horizon }
}
