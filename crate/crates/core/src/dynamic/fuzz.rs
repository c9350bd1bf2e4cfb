//! Last-round rank bound and a seeded random-script generator for it.
//!
//! When a party's final action is sending one of its qubits away, it keeps at
//! most `log2(d) − 1` qubits, so its Schmidt rank against everyone else is at
//! most `d / 2`.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::script::{LocalGate, ProtocolScript, ProtocolStep};
use super::sim::{run_protocol_with, BranchPolicy};
use crate::feasibility::Configuration;
use crate::{Error, Party, QubitLabel, Result};

/// Longest generated script, including the final send.
pub const MAX_FUZZ_STEPS: usize = 40;
const MAX_REJECTIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LastRoundReport {
    pub party: Party,
    pub rank: usize,
    pub bound: u64,
    pub holds: bool,
}

/// Runs `script` and compares the final rank of `party` against the rest
/// with `d / 2`. The script must end with a send from `party`.
pub fn check_last_round_bound(script: &ProtocolScript, config: &Configuration, party: Party) -> Result<LastRoundReport> {
    check_last_round_bound_with(script, config, party, &BranchPolicy::default())
}

pub fn check_last_round_bound_with(
    script: &ProtocolScript,
    config: &Configuration,
    party: Party,
    policy: &BranchPolicy,
) -> Result<LastRoundReport> {
    match script.steps.last() {
        Some(ProtocolStep::Send { from, .. }) if from.party == party => {}
        _ => return Err(Error::InvalidInput("bound applies to last-round senders".into())),
    }
    let dim = config
        .dim(party)
        .ok_or_else(|| Error::InvalidInput(format!("{party} is not in the configuration")))?;
    let run = run_protocol_with(script, config, policy)?;
    let rank = run.state.party_cut_rank(party)?;
    let bound = dim / 2;
    Ok(LastRoundReport { party, rank, bound, holds: rank as u64 <= bound })
}

/// Two parties of two qubits each: a Bell pair is shared, a second pair is
/// grown at `v1` and half of it sent as the last round.
pub fn two_party_example() -> ProtocolScript {
    ProtocolScript::parse(
        "alloc v1 0\nalloc v1 1\ncz v1 0 1\nsend v1 1 v2 0\n\
         alloc v1 1\nzz v1 0 1 pi/4\nxrot v1 0 0.4\ncz v1 0 1\nsend v1 1 v2 1\n",
    )
    .expect("valid script")
}

struct Regs {
    slots: BTreeMap<Party, Vec<bool>>,
}

impl Regs {
    fn live(&self) -> Vec<QubitLabel> {
        self.slots
            .iter()
            .flat_map(|(&p, s)| s.iter().enumerate().filter(|x| *x.1).map(move |(i, _)| QubitLabel::new(p, i as u8)))
            .collect()
    }

    fn free(&self) -> Vec<QubitLabel> {
        self.slots
            .iter()
            .flat_map(|(&p, s)| s.iter().enumerate().filter(|x| !*x.1).map(move |(i, _)| QubitLabel::new(p, i as u8)))
            .collect()
    }

    fn set(&mut self, q: QubitLabel, v: bool) {
        self.slots.get_mut(&q.party).unwrap()[q.slot as usize] = v;
    }
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..4) {
        0 => 0.0,
        1 => std::f64::consts::FRAC_PI_4,
        _ => rng.random_range(0.0..std::f64::consts::TAU),
    }
}

/// One attempt at a valid script of at most [`MAX_FUZZ_STEPS`] steps whose
/// last step sends a qubit away from `party`; `None` if the draw cannot end
/// that way.
fn draw_script(rng: &mut ChaCha8Rng, config: &Configuration, party: Party) -> Option<ProtocolScript> {
    let mut regs = Regs {
        slots: config
            .dims()
            .iter()
            .map(|(&p, &d)| (p, vec![false; d.trailing_zeros() as usize]))
            .collect(),
    };
    let len = rng.random_range(0..MAX_FUZZ_STEPS);
    let mut steps = Vec::with_capacity(len + 1);
    for _ in 0..len {
        let live = regs.live();
        let free = regs.free();
        let pairs: Vec<(QubitLabel, QubitLabel)> = live
            .iter()
            .flat_map(|&a| live.iter().filter(move |&&b| b.party == a.party && b.slot > a.slot).map(move |&b| (a, b)))
            .collect();
        let step = match rng.random_range(0..5) {
            0 if !free.is_empty() => {
                let q = *free.choose(rng).unwrap();
                regs.set(q, true);
                ProtocolStep::Alloc(q)
            }
            1 if !live.is_empty() => {
                let q = *live.choose(rng).unwrap();
                let g = match rng.random_range(0..5) {
                    0 => LocalGate::XRot(q.slot, random_angle(rng)),
                    1 => LocalGate::ZRot(q.slot, random_angle(rng)),
                    2 => LocalGate::H(q.slot),
                    3 => LocalGate::X(q.slot),
                    _ => LocalGate::Z(q.slot),
                };
                ProtocolStep::Gate(q.party, g)
            }
            2 if !pairs.is_empty() => {
                let (a, b) = *pairs.choose(rng).unwrap();
                let g = match rng.random_range(0..3) {
                    0 => LocalGate::Cz(a.slot, b.slot),
                    1 => LocalGate::Zz(a.slot, b.slot, random_angle(rng)),
                    _ => LocalGate::Swap(a.slot, b.slot),
                };
                ProtocolStep::Gate(a.party, g)
            }
            3 if !live.is_empty() => {
                let q = *live.choose(rng).unwrap();
                let zcorrect = live.iter().copied().filter(|&l| l != q && rng.random_bool(0.3)).collect();
                regs.set(q, false);
                ProtocolStep::Measure { qubit: q, zcorrect }
            }
            4 if !live.is_empty() => {
                let from = *live.choose(rng).unwrap();
                let dests: Vec<QubitLabel> = free.iter().copied().filter(|l| l.party != from.party).collect();
                let Some(&to) = dests.choose(rng) else { continue };
                regs.set(from, false);
                regs.set(to, true);
                ProtocolStep::Send { from, to }
            }
            _ => continue,
        };
        steps.push(step);
    }
    let senders: Vec<QubitLabel> = regs.live().into_iter().filter(|l| l.party == party).collect();
    let dests: Vec<QubitLabel> = regs.free().into_iter().filter(|l| l.party != party).collect();
    let (&from, &to) = (senders.choose(rng)?, dests.choose(rng)?);
    steps.push(ProtocolStep::Send { from, to });
    Some(ProtocolScript::new(steps))
}

/// Draws a valid script by rejection sampling.
pub fn random_last_round_script(rng: &mut ChaCha8Rng, config: &Configuration, party: Party) -> Result<(ProtocolScript, usize)> {
    for rejected in 0..MAX_REJECTIONS {
        if let Some(s) = draw_script(rng, config, party) {
            return Ok((s, rejected));
        }
    }
    Err(Error::Guard(format!("no valid script in {MAX_REJECTIONS} draws")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub party: Party,
    pub runs: usize,
    pub seed: u64,
    pub bound: u64,
    pub max_rank: usize,
    pub violations: usize,
    /// Number of runs ending at each rank.
    pub rank_counts: BTreeMap<usize, usize>,
    pub rejected_draws: usize,
    pub mean_steps: f64,
    pub pass: bool,
}

/// Runs `runs` random scripts; run `i` uses seed `seed + i` for both the
/// script and the measurement branches, so results do not depend on
/// scheduling.
pub fn fuzz_last_round(config: &Configuration, party: Party, runs: usize, seed: u64) -> Result<FuzzReport> {
    let results = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (script, rejected) = random_last_round_script(&mut rng, config, party)?;
            let pattern: Vec<bool> = (0..MAX_FUZZ_STEPS).map(|_| rng.random_bool(0.5)).collect();
            let r = check_last_round_bound_with(&script, config, party, &BranchPolicy::Pattern(pattern))?;
            Ok((r, rejected, script.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = config.dim(party).unwrap_or(0) / 2;
    let mut rank_counts = BTreeMap::new();
    for (r, _, _) in &results {
        *rank_counts.entry(r.rank).or_insert(0) += 1;
    }
    let violations = results.iter().filter(|r| !r.0.holds).count();
    Ok(FuzzReport {
        party,
        runs,
        seed,
        bound,
        max_rank: results.iter().map(|r| r.0.rank).max().unwrap_or(0),
        violations,
        rank_counts,
        rejected_draws: results.iter().map(|r| r.1).sum(),
        mean_steps: if runs == 0 { 0.0 } else { results.iter().map(|r| r.2).sum::<usize>() as f64 / runs as f64 },
        pass: violations == 0,
    })
}
