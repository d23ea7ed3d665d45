//! Monte Carlo estimates for every walk, used as an independent check on the
//! exact solvers.
//!
//! Randomness comes from ChaCha20 seeded with `seed_from_u64(seed)`. Trials
//! are split into `partitions` contiguous blocks; block `i` uses stream `i`
//! of that generator and runs on its own thread. Tallies are exact integers,
//! so the merged report depends only on the problem, the start and the
//! config.
//!
//! A step is drawn by comparing one `u64` against thresholds
//! `floor(cum_i * 2^64)` of the cumulative step probabilities; the last
//! outcome takes whatever is left. The sampling bias per step is below
//! `2^-64` per outcome.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::gr1d::Ruin1DProblem;
use crate::gr2d::Ruin2DProblem;
use crate::mirror::MirrorProblem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_steps: u64,
    pub partitions: u32,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig { trials, seed, max_steps: 1_000_000, partitions: 1 }
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_partitions(mut self, partitions: u32) -> Self {
        self.partitions = partitions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::out_of_range("trials", "must be at least 1"));
        }
        if self.max_steps == 0 {
            return Err(Error::out_of_range("max_steps", "must be at least 1"));
        }
        if self.partitions == 0 {
            return Err(Error::out_of_range("partitions", "must be at least 1"));
        }
        Ok(())
    }
}

/// Fraction of all trials leaving through each side of the rectangle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExitRates {
    pub l: f64,
    pub u: f64,
    pub r: f64,
    pub b: f64,
}

/// Rates are over all trials; step statistics are over completed trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub completed: u64,
    pub truncated: u64,
    pub seed: u64,
    pub partitions: u32,
    pub win_rate: f64,
    pub std_err_rate: f64,
    pub mean_steps: f64,
    pub std_err_steps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exit_rates: Option<ExitRates>,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Inverse-CDF sampler over a finite outcome list.
struct Sampler<T> {
    thresholds: Vec<u64>,
    outcomes: Vec<T>,
}

impl<T: Copy> Sampler<T> {
    fn new(weights: &[(T, &Rational)]) -> Self {
        let mut cum = Rational::from_integer(0.into());
        let mut thresholds = Vec::with_capacity(weights.len());
        for (_, w) in weights {
            cum += *w;
            let scaled: BigInt = (cum.numer() << 64u32) / cum.denom();
            thresholds.push(scaled.to_u64().unwrap_or(u64::MAX));
        }
        if let Some(last) = thresholds.last_mut() {
            *last = u64::MAX;
        }
        Sampler { thresholds, outcomes: weights.iter().map(|(o, _)| *o).collect() }
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> T {
        let u = rng.next_u64();
        let last = self.outcomes.len() - 1;
        let i = self.thresholds[..last].iter().position(|&t| u < t).unwrap_or(last);
        self.outcomes[i]
    }
}

#[derive(Default)]
struct Tally {
    exits: [u64; 4],
    completed: u64,
    truncated: u64,
    steps: u128,
    steps_sq: u128,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.exits.iter_mut().zip(other.exits) {
            *a += b;
        }
        self.completed += other.completed;
        self.truncated += other.truncated;
        self.steps += other.steps;
        self.steps_sq += other.steps_sq;
    }
}

/// Runs the trials. `advance` moves the state one step; `exit` names the
/// absorbing side reached, if any.
fn run<S, A, E>(config: &SimConfig, start: S, advance: A, exit: E) -> Tally
where
    S: Copy + Send,
    A: Fn(S, &mut ChaCha20Rng) -> S + Sync,
    E: Fn(S) -> Option<usize> + Sync,
{
    let parts = config.partitions as u64;
    let base = config.trials / parts;
    let extra = config.trials % parts;
    let tallies: Vec<Tally> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..parts)
            .map(|i| {
                let count = base + u64::from(i < extra);
                let (advance, exit) = (&advance, &exit);
                scope.spawn(move || {
                    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
                    rng.set_stream(i);
                    let mut tally = Tally::default();
                    for _ in 0..count {
                        let mut state = start;
                        let mut steps = 0u64;
                        let side = loop {
                            if steps == config.max_steps {
                                break None;
                            }
                            state = advance(state, &mut rng);
                            steps += 1;
                            if let Some(side) = exit(state) {
                                break Some(side);
                            }
                        };
                        match side {
                            Some(side) => {
                                tally.exits[side] += 1;
                                tally.completed += 1;
                                tally.steps += steps as u128;
                                tally.steps_sq += (steps as u128) * (steps as u128);
                            }
                            None => tally.truncated += 1,
                        }
                    }
                    tally
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation worker panicked")).collect()
    });
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }
    total
}

fn report(config: &SimConfig, tally: &Tally, win: usize, sides: bool) -> SimReport {
    let trials = config.trials as f64;
    let rate = |k: usize| tally.exits[k] as f64 / trials;
    let win_rate = rate(win);
    let (mean_steps, std_err_steps) = if tally.completed == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let n = tally.completed as f64;
        let mean = tally.steps as f64 / n;
        let var = if tally.completed > 1 {
            let c = tally.completed as u128;
            let spread = c * tally.steps_sq - tally.steps * tally.steps;
            spread as f64 / (n * (n - 1.0))
        } else {
            0.0
        };
        (mean, (var / n).sqrt())
    };
    SimReport {
        trials: config.trials,
        completed: tally.completed,
        truncated: tally.truncated,
        seed: config.seed,
        partitions: config.partitions,
        win_rate,
        std_err_rate: (win_rate * (1.0 - win_rate) / trials).sqrt(),
        mean_steps,
        std_err_steps,
        exit_rates: sides.then(|| ExitRates { l: rate(0), u: rate(1), r: rate(2), b: rate(3) }),
    }
}

const RUIN: usize = 0;
const WIN: usize = 1;

/// Win means reaching a position `>= N`.
pub fn simulate1d(problem: &Ruin1DProblem, x: i64, config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let n = problem.n() as i64;
    if x < 1 || x >= n {
        return Err(Error::out_of_range("x", format!("{x} is not in [1, {}]", n - 1)));
    }
    let weights: Vec<(i64, &Rational)> = problem.dist().entries().iter().map(|(a, p)| (*a, p)).collect();
    let sampler = Sampler::new(&weights);
    let tally = run(
        config,
        x,
        |pos, rng| pos + sampler.draw(rng),
        |pos| {
            if pos <= 0 {
                Some(RUIN)
            } else if pos >= n {
                Some(WIN)
            } else {
                None
            }
        },
    );
    Ok(report(config, &tally, WIN, false))
}

/// `win_rate` is the rate of leaving through the right side `x = M`.
pub fn simulate2d(problem: &Ruin2DProblem, x: i64, y: i64, config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let (m, n) = (problem.m() as i64, problem.n() as i64);
    if x < 1 || x >= m || y < 1 || y >= n {
        return Err(Error::out_of_range("start", format!("({x}, {y}) is not an interior cell of {m} x {n}")));
    }
    let p = problem.probs();
    let sampler = Sampler::new(&[((-1i64, 0i64), &p.l), ((0, 1), &p.u), ((1, 0), &p.r), ((0, -1), &p.b)]);
    let tally = run(
        config,
        (x, y),
        |(x, y), rng| {
            let (dx, dy) = sampler.draw(rng);
            (x + dx, y + dy)
        },
        |(x, y)| {
            if x <= 0 {
                Some(0)
            } else if y >= n {
                Some(1)
            } else if x >= m {
                Some(2)
            } else if y <= 0 {
                Some(3)
            } else {
                None
            }
        },
    );
    Ok(report(config, &tally, 2, true))
}

#[derive(Clone, Copy)]
enum MirrorMove {
    Left,
    Right,
    Reflect,
}

pub fn simulate_mirror(problem: &MirrorProblem, x: i64, config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let n = problem.n() as i64;
    if x < 1 || x >= n {
        return Err(Error::out_of_range("x", format!("{x} is not in [1, {}]", n - 1)));
    }
    let sampler = Sampler::new(&[(MirrorMove::Left, problem.q1()), (MirrorMove::Right, problem.q2()), (MirrorMove::Reflect, problem.p())]);
    let tally = run(
        config,
        x,
        |pos, rng| match sampler.draw(rng) {
            MirrorMove::Left => pos - 1,
            MirrorMove::Right => pos + 1,
            MirrorMove::Reflect => n - pos,
        },
        |pos| {
            if pos == 0 {
                Some(RUIN)
            } else if pos == n {
                Some(WIN)
            } else {
                None
            }
        },
    );
    Ok(report(config, &tally, WIN, false))
}

/// `|estimate - exact| <= k * std_err`.
pub fn within_sigmas(estimate: f64, exact: f64, std_err: f64, k: f64) -> bool {
    (estimate - exact).abs() <= k * std_err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::gr1d::StepDistribution;
    use crate::gr2d::Probs2D;

    #[test]
    fn thresholds_cover_range() {
        let half = ratio(1, 2);
        let quarter = ratio(1, 4);
        let s = Sampler::new(&[(0u8, &quarter), (1, &quarter), (2, &half)]);
        assert_eq!(s.thresholds, vec![1u64 << 62, 1u64 << 63, u64::MAX]);
    }

    #[test]
    fn reproducible() {
        let problem = Ruin1DProblem::new(10, StepDistribution::fair()).unwrap();
        let cfg = SimConfig::new(2_000, 7).with_partitions(3);
        let a = simulate1d(&problem, 5, &cfg).unwrap();
        let b = simulate1d(&problem, 5, &cfg).unwrap();
        assert_eq!(a, b);
        let c = simulate1d(&problem, 5, &SimConfig::new(2_000, 8).with_partitions(3)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn two_by_two_takes_one_step() {
        let problem = Ruin2DProblem::new(2, 2, Probs2D::equal()).unwrap();
        let r = simulate2d(&problem, 1, 1, &SimConfig::new(1_000, 1)).unwrap();
        assert_eq!(r.mean_steps, 1.0);
        assert_eq!(r.std_err_steps, 0.0);
        let rates = r.exit_rates.unwrap();
        assert!((rates.l + rates.u + rates.r + rates.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_counted() {
        let problem = Ruin1DProblem::new(50, StepDistribution::fair()).unwrap();
        let r = simulate1d(&problem, 25, &SimConfig::new(200, 3).with_max_steps(5)).unwrap();
        assert_eq!(r.truncated, 200);
        assert_eq!(r.completed, 0);
        assert_eq!(r.win_rate, 0.0);
    }

    #[test]
    fn bad_inputs() {
        let problem = Ruin1DProblem::new(10, StepDistribution::fair()).unwrap();
        assert!(simulate1d(&problem, 0, &SimConfig::new(10, 1)).is_err());
        assert!(simulate1d(&problem, 3, &SimConfig::new(0, 1)).is_err());
        let mirror = MirrorProblem::symmetric(5, ratio(1, 3)).unwrap();
        assert!(simulate_mirror(&mirror, 5, &SimConfig::new(10, 1)).is_err());
    }

    #[test]
    fn mirror_small_line() {
        let mirror = MirrorProblem::symmetric(5, ratio(1, 3)).unwrap();
        let r = simulate_mirror(&mirror, 1, &SimConfig::new(100_000, 11).with_partitions(4)).unwrap();
        assert!(within_sigmas(r.win_rate, 7.0 / 19.0, r.std_err_rate, 4.0));
        assert!(within_sigmas(r.mean_steps, 6.0, r.std_err_steps, 4.0));
    }
}
