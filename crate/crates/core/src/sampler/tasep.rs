use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rng::{sample_stream, Lane};
use crate::{Error, Result};

/// Order in which jump attempts are resolved within one time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateRule {
    /// Every particle decides against the configuration at the start of the step.
    Parallel,
    /// Particles are visited from right to left, so a particle may move into a
    /// site vacated earlier in the same step.
    #[default]
    SequentialRightToLeft,
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpdateRule::Parallel => "parallel",
            UpdateRule::SequentialRightToLeft => "sequential_right_to_left",
        })
    }
}

impl FromStr for UpdateRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parallel" => Ok(UpdateRule::Parallel),
            "sequential_right_to_left" | "sequential" => Ok(UpdateRule::SequentialRightToLeft),
            _ => Err(Error::Parameter(format!(
                "unknown update rule {s:?} (expected parallel or sequential_right_to_left)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TasepParams {
    pub q: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

impl TasepParams {
    /// Jump probabilities `(bulk, rightmost particle, leftmost hole)`.
    pub fn jump_probabilities(&self) -> Result<(f64, f64, f64)> {
        let sq = self.q.sqrt();
        let probs = (1.0 - self.q, 1.0 - self.alpha_plus * sq, 1.0 - self.alpha_minus * sq);
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !(self.q >= 0.0 && ok(probs.0) && ok(probs.1) && ok(probs.2)) {
            return Err(Error::Parameter(format!(
                "jump probabilities {probs:?} must lie in [0, 1] (q = {}, α₊ = {}, α₋ = {})",
                self.q, self.alpha_plus, self.alpha_minus
            )));
        }
        Ok(probs)
    }
}

/// Occupation of the finite window `[site_lo, site_hi]`. Sites left of the
/// window are occupied and sites right of it are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TasepState {
    pub site_lo: i64,
    pub site_hi: i64,
    pub occupied: Vec<bool>,
    pub time: u64,
    pub params: TasepParams,
    /// Total number of particle moves so far.
    pub jumps: u64,
}

impl TasepState {
    /// Particles on `{…, −3, −2} ∪ {0}` restricted to `[−halfwidth, halfwidth]`.
    pub fn initial(params: TasepParams, halfwidth: u32) -> Result<Self> {
        params.jump_probabilities()?;
        if halfwidth < 2 {
            return Err(Error::Parameter(format!("window halfwidth must be at least 2, got {halfwidth}")));
        }
        let h = halfwidth as i64;
        let occupied = (-h..=h).map(|s| s <= -2 || s == 0).collect();
        Ok(TasepState { site_lo: -h, site_hi: h, occupied, time: 0, params, jumps: 0 })
    }

    pub fn is_occupied(&self, site: i64) -> bool {
        if site < self.site_lo {
            true
        } else if site > self.site_hi {
            false
        } else {
            self.occupied[(site - self.site_lo) as usize]
        }
    }

    pub fn particle_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn rightmost_particle(&self) -> i64 {
        let k = self.occupied.iter().rposition(|&o| o).expect("window contains particles");
        self.site_lo + k as i64
    }

    pub fn leftmost_hole(&self) -> i64 {
        let k = self.occupied.iter().position(|&o| !o).expect("window contains holes");
        self.site_lo + k as i64
    }

    /// `1` for a particle, `0` for a hole, left to right over the window.
    pub fn bitstring(&self) -> String {
        self.occupied.iter().map(|&o| if o { '1' } else { '0' }).collect()
    }
}

/// A running exclusion process.
pub struct Tasep {
    state: TasepState,
    rule: UpdateRule,
    probs: (f64, f64, f64),
    rng: ChaCha8Rng,
    attempts: Vec<usize>,
}

impl Tasep {
    pub fn new(params: TasepParams, halfwidth: u32, rule: UpdateRule, seed: u64, index: u64) -> Result<Self> {
        let state = TasepState::initial(params, halfwidth)?;
        Ok(Tasep {
            probs: params.jump_probabilities()?,
            state,
            rule,
            rng: sample_stream(seed, index, Lane::Exclusion),
            attempts: Vec::new(),
        })
    }

    pub fn state(&self) -> &TasepState {
        &self.state
    }

    pub fn into_state(self) -> TasepState {
        self.state
    }

    /// One time step. The rightmost particle jumps with probability
    /// `1 − α₊√q`, the particle just left of the leftmost hole with
    /// `1 − α₋√q`, any other particle with an empty right neighbour with
    /// `1 − q`.
    pub fn step(&mut self) -> Result<()> {
        let (p_bulk, p_right, p_hole) = self.probs;
        let occ = &mut self.state.occupied;
        let n = occ.len();
        let mut rightmost = occ.iter().rposition(|&o| o).expect("particles in window");
        let mut hole = occ.iter().position(|&o| !o).expect("holes in window");
        match self.rule {
            UpdateRule::SequentialRightToLeft => {
                for s in (0..n - 1).rev() {
                    if !occ[s] || occ[s + 1] {
                        continue;
                    }
                    let p = if s == rightmost {
                        p_right
                    } else if s + 1 == hole {
                        p_hole
                    } else {
                        p_bulk
                    };
                    if self.rng.random::<f64>() < p {
                        occ[s] = false;
                        occ[s + 1] = true;
                        self.state.jumps += 1;
                        if s == rightmost {
                            rightmost += 1;
                        }
                        if s + 1 == hole {
                            hole = s;
                        }
                    }
                }
            }
            UpdateRule::Parallel => {
                self.attempts.clear();
                for s in (0..n - 1).rev() {
                    if !occ[s] || occ[s + 1] {
                        continue;
                    }
                    let p = if s == rightmost {
                        p_right
                    } else if s + 1 == hole {
                        p_hole
                    } else {
                        p_bulk
                    };
                    if self.rng.random::<f64>() < p {
                        self.attempts.push(s);
                    }
                }
                for &s in &self.attempts {
                    occ[s] = false;
                    occ[s + 1] = true;
                }
                self.state.jumps += self.attempts.len() as u64;
            }
        }
        self.state.time += 1;
        if occ[n - 1] || !occ[0] {
            return Err(Error::WindowOverflow { step: self.state.time });
        }
        Ok(())
    }
}

/// Runs `steps` time steps from the initial configuration.
pub fn tasep_run(
    params: TasepParams,
    steps: u64,
    window_halfwidth: u32,
    update_rule: UpdateRule,
    seed: u64,
    index: u64,
) -> Result<TasepState> {
    let mut run = Tasep::new(params, window_halfwidth, update_rule, seed, index)?;
    for _ in 0..steps {
        run.step()?;
    }
    Ok(run.into_state())
}

/// Writes the `time,bitstring` trajectory including the initial state.
pub fn write_trajectory_csv<W: Write + ?Sized>(
    out: &mut W,
    params: TasepParams,
    steps: u64,
    window_halfwidth: u32,
    update_rule: UpdateRule,
    seed: u64,
    index: u64,
) -> Result<TasepState> {
    let mut run = Tasep::new(params, window_halfwidth, update_rule, seed, index)?;
    writeln!(out, "time,bitstring")?;
    writeln!(out, "{},{}", run.state().time, run.state().bitstring())?;
    for _ in 0..steps {
        run.step()?;
        writeln!(out, "{},{}", run.state().time, run.state().bitstring())?;
    }
    Ok(run.into_state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(q: f64, a: f64, b: f64) -> TasepParams {
        TasepParams { q, alpha_plus: a, alpha_minus: b }
    }

    #[test]
    fn zero_steps_is_initial_configuration() {
        let st = tasep_run(params(0.5, 0.5, 0.5), 0, 4, UpdateRule::default(), 1, 0).unwrap();
        assert_eq!(st.bitstring(), "111010000");
        assert_eq!((st.site_lo, st.site_hi, st.time), (-4, 4, 0));
        assert_eq!(st.rightmost_particle(), 0);
        assert_eq!(st.leftmost_hole(), -1);
    }

    #[test]
    fn slow_dynamics_moves_little() {
        for rule in [UpdateRule::Parallel, UpdateRule::SequentialRightToLeft] {
            let st = tasep_run(params(0.99, 1.0, 1.0), 10, 30, rule, 3, 0).unwrap();
            assert!(st.jumps <= 10, "{rule}: {} jumps", st.jumps);
        }
    }

    #[test]
    fn certain_jumps_are_deterministic() {
        // only the rightmost particle can move, and it always does
        for rule in [UpdateRule::Parallel, UpdateRule::SequentialRightToLeft] {
            let st = tasep_run(params(1.0, 0.0, 1.0), 2, 5, rule, 0, 0).unwrap();
            assert_eq!(st.bitstring(), "11110001000");
        }
    }

    #[test]
    fn sequential_sweep_cascades_through_vacated_sites() {
        // only the leftmost hole moves, with probability one
        let st = tasep_run(params(1.0, 1.0, 0.0), 1, 5, UpdateRule::Parallel, 0, 0).unwrap();
        assert_eq!(st.bitstring(), "11101100000");
        let err = tasep_run(params(1.0, 1.0, 0.0), 1, 5, UpdateRule::SequentialRightToLeft, 0, 0).unwrap_err();
        assert!(matches!(err, Error::WindowOverflow { step: 1 }));
    }

    #[test]
    fn overflow_is_reported() {
        let err = tasep_run(params(0.0, 0.0, 0.0), 50, 6, UpdateRule::Parallel, 0, 0).unwrap_err();
        assert!(matches!(err, Error::WindowOverflow { .. }));
    }

    #[test]
    fn parameter_errors() {
        assert!(tasep_run(params(0.25, 3.0, 0.0), 1, 10, UpdateRule::default(), 0, 0).is_err());
        assert!(tasep_run(params(1.5, 0.0, 0.0), 1, 10, UpdateRule::default(), 0, 0).is_err());
        assert!(tasep_run(params(0.5, 0.0, 0.0), 1, 1, UpdateRule::default(), 0, 0).is_err());
        assert!("diagonal".parse::<UpdateRule>().is_err());
        assert_eq!("parallel".parse::<UpdateRule>().unwrap(), UpdateRule::Parallel);
    }

    #[test]
    fn trajectory_dump() {
        let mut buf = Vec::new();
        let last = write_trajectory_csv(&mut buf, params(0.3, 0.5, 0.5), 3, 6, UpdateRule::Parallel, 9, 2).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "time,bitstring");
        assert_eq!(lines[1], "0,1111101000000");
        assert_eq!(lines[4], format!("3,{}", last.bitstring()));
        let again = tasep_run(params(0.3, 0.5, 0.5), 3, 6, UpdateRule::Parallel, 9, 2).unwrap();
        assert_eq!(again, last);
    }

    proptest! {
        #[test]
        fn exclusion_and_conservation(
            q in 0.3f64..1.0,
            ap in 0.0f64..1.0,
            am in 0.5f64..1.0,
            parallel in any::<bool>(),
            seed in any::<u64>(),
        ) {
            let rule = if parallel { UpdateRule::Parallel } else { UpdateRule::SequentialRightToLeft };
            let mut run = Tasep::new(params(q, ap, am), 400, rule, seed, 0).unwrap();
            let count = run.state().particle_count();
            for _ in 0..30 {
                let before = run.state().clone();
                run.step().unwrap();
                let st = run.state();
                prop_assert_eq!(st.particle_count(), count);
                // particles only move right, one site at a time
                let pb: Vec<i64> = (st.site_lo..=st.site_hi).filter(|&s| before.is_occupied(s)).collect();
                let pa: Vec<i64> = (st.site_lo..=st.site_hi).filter(|&s| st.is_occupied(s)).collect();
                for (x0, x1) in pb.iter().zip(&pa) {
                    prop_assert!(*x1 == *x0 || *x1 == *x0 + 1);
                }
            }
        }
    }
}
