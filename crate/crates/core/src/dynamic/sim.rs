use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::script::{LocalGate, ProtocolScript, ProtocolStep};
use crate::feasibility::Configuration;
use crate::statevector::{Backend, Pauli, PureState};
use crate::{Error, Party, QubitLabel, Result};

/// Which outcome to keep at each measurement.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum BranchPolicy {
    /// Outcome 0 unless it has probability 0.
    #[default]
    PreferZero,
    PreferOne,
    /// Preferred outcomes in measurement order, cycling.
    Pattern(Vec<bool>),
}

impl BranchPolicy {
    fn preferred(&self, k: usize) -> bool {
        match self {
            BranchPolicy::PreferZero => false,
            BranchPolicy::PreferOne => true,
            BranchPolicy::Pattern(p) if p.is_empty() => false,
            BranchPolicy::Pattern(p) => p[k % p.len()],
        }
    }
}

/// Occupied slots per party, bounded by `log2(d)` qubit slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterMap {
    slots: BTreeMap<Party, u8>,
    occupied: BTreeMap<Party, BTreeSet<u8>>,
}

impl RegisterMap {
    /// Every dimension must be a power of two.
    pub fn new(config: &Configuration) -> Result<Self> {
        let mut slots = BTreeMap::new();
        for (&p, &d) in config.dims() {
            if !d.is_power_of_two() {
                return Err(Error::InvalidInput(format!(
                    "dimension {d} of {p} is not a power of two"
                )));
            }
            slots.insert(p, d.trailing_zeros() as u8);
        }
        Ok(Self { slots, occupied: BTreeMap::new() })
    }

    pub fn slots(&self, p: Party) -> u8 {
        self.slots.get(&p).copied().unwrap_or(0)
    }

    pub fn is_occupied(&self, q: QubitLabel) -> bool {
        self.occupied.get(&q.party).is_some_and(|s| s.contains(&q.slot))
    }

    pub fn live(&self, p: Party) -> usize {
        self.occupied.get(&p).map_or(0, |s| s.len())
    }

    pub fn total_live(&self) -> usize {
        self.occupied.values().map(|s| s.len()).sum()
    }

    pub fn occupancy(&self) -> BTreeMap<Party, usize> {
        self.slots.keys().map(|&p| (p, self.live(p))).collect()
    }

    fn take(&mut self, q: QubitLabel, step: usize) -> Result<()> {
        if !self.slots.contains_key(&q.party) {
            return Err(Error::Protocol { step, msg: format!("unknown party {}", q.party) });
        }
        if q.slot >= self.slots(q.party) {
            return Err(Error::Capacity {
                step,
                party: q.party,
                msg: format!("slot {} beyond {} qubit slots", q.slot, self.slots(q.party)),
            });
        }
        if !self.occupied.entry(q.party).or_default().insert(q.slot) {
            return Err(Error::Protocol { step, msg: format!("slot {q} is already occupied") });
        }
        Ok(())
    }

    fn release(&mut self, q: QubitLabel, step: usize) -> Result<()> {
        if !self.occupied.get_mut(&q.party).is_some_and(|s| s.remove(&q.slot)) {
            return Err(Error::Protocol { step, msg: format!("slot {q} is empty") });
        }
        Ok(())
    }

    fn require(&self, q: QubitLabel, step: usize) -> Result<()> {
        if self.is_occupied(q) {
            Ok(())
        } else {
            Err(Error::Protocol { step, msg: format!("slot {q} is empty") })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub step: usize,
    pub op: String,
    pub live: usize,
    pub occupancy: BTreeMap<Party, usize>,
    /// Schmidt rank of each party against the rest, recorded after sends.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub party_ranks: Option<BTreeMap<Party, usize>>,
    /// Probability of the kept outcome, for measurements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<(bool, f64)>,
}

#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub state: PureState,
    pub trace: Vec<TraceEntry>,
    /// Largest number of simultaneously live qubits seen at each party.
    pub peak_occupancy: BTreeMap<Party, usize>,
}

/// Runs a script with the default branch policy.
pub fn run_protocol(script: &ProtocolScript, config: &Configuration) -> Result<ProtocolRun> {
    run_protocol_with(script, config, &BranchPolicy::default())
}

/// Simulates the script step by step, exactly while every operation allows
/// it and in floating point afterwards.
pub fn run_protocol_with(
    script: &ProtocolScript,
    config: &Configuration,
    policy: &BranchPolicy,
) -> Result<ProtocolRun> {
    let mut regs = RegisterMap::new(config)?;
    let mut state = PureState::empty(Backend::Exact);
    let mut trace = Vec::with_capacity(script.len());
    let mut peak: BTreeMap<Party, usize> = regs.occupancy();
    let mut measurements = 0;
    for (i, s) in script.steps.iter().enumerate() {
        let step = i + 1;
        let mut outcome = None;
        let mut ranks = None;
        match s {
            ProtocolStep::Alloc(q) => {
                regs.take(*q, step)?;
                state = state.with_plus(*q)?;
            }
            ProtocolStep::Gate(p, g) => {
                for slot in g.slots() {
                    if !regs.slots.contains_key(p) {
                        return Err(Error::Protocol { step, msg: format!("unknown party {p}") });
                    }
                    if !matches!(g, LocalGate::Swap(..)) {
                        regs.require(QubitLabel::new(*p, slot), step)?;
                    }
                }
                state = apply_gate(&state, &mut regs, *p, g, step)?;
            }
            ProtocolStep::Measure { qubit, zcorrect } => {
                regs.require(*qubit, step)?;
                for &c in zcorrect {
                    if c == *qubit {
                        return Err(Error::Protocol { step, msg: "correction on the measured qubit".into() });
                    }
                    regs.require(c, step)?;
                }
                let m = state.measure_z(*qubit)?;
                let want = policy.preferred(measurements);
                measurements += 1;
                let bit = if m.branch(want).state.is_some() { want } else { !want };
                let branch = m.branch(bit);
                let mut post = branch.state.clone().expect("one branch has positive probability");
                if bit {
                    for &c in zcorrect {
                        post = post.apply_pauli(c, Pauli::Z)?;
                    }
                }
                outcome = Some((bit, branch.probability));
                regs.release(*qubit, step)?;
                state = post;
            }
            ProtocolStep::Send { from, to } => {
                if from.party == to.party {
                    return Err(Error::Protocol { step, msg: "send within one party".into() });
                }
                regs.require(*from, step)?;
                regs.release(*from, step)?;
                regs.take(*to, step)?;
                state = state.relabel(*from, *to)?;
                ranks = Some(
                    regs.slots
                        .keys()
                        .map(|&p| Ok((p, state.party_cut_rank(p)?)))
                        .collect::<Result<BTreeMap<_, _>>>()?,
                );
            }
        }
        for (p, n) in regs.occupancy() {
            let e = peak.entry(p).or_insert(0);
            *e = (*e).max(n);
        }
        trace.push(TraceEntry {
            step,
            op: s.to_string(),
            live: regs.total_live(),
            occupancy: regs.occupancy(),
            party_ranks: ranks,
            outcome,
        });
    }
    Ok(ProtocolRun { state, trace, peak_occupancy: peak })
}

fn apply_gate(s: &PureState, regs: &mut RegisterMap, p: Party, g: &LocalGate, step: usize) -> Result<PureState> {
    let q = |slot: u8| QubitLabel::new(p, slot);
    let attempt = |s: &PureState| -> Result<PureState> {
        match *g {
            LocalGate::Cz(a, b) => s.apply_cz(q(a), q(b)),
            LocalGate::Zz(a, b, t) => s.apply_zz_phase(q(a), q(b), t),
            LocalGate::XRot(a, t) => s.apply_x_rotation(q(a), t),
            LocalGate::ZRot(a, t) => s.apply_z_rotation(q(a), t),
            LocalGate::H(a) => s.apply_hadamard(q(a)),
            LocalGate::X(a) => s.apply_pauli(q(a), Pauli::X),
            LocalGate::Z(a) => s.apply_pauli(q(a), Pauli::Z),
            LocalGate::Swap(..) => unreachable!(),
        }
    };
    if let LocalGate::Swap(a, b) = *g {
        let (qa, qb) = (q(a), q(b));
        for l in [qa, qb] {
            if l.slot >= regs.slots(p) {
                return Err(Error::Capacity { step, party: p, msg: format!("slot {} does not exist", l.slot) });
            }
        }
        return match (regs.is_occupied(qa), regs.is_occupied(qb)) {
            (true, true) => s.apply_swap(qa, qb),
            (true, false) => {
                regs.release(qa, step)?;
                regs.take(qb, step)?;
                s.relabel(qa, qb)
            }
            (false, true) => {
                regs.release(qb, step)?;
                regs.take(qa, step)?;
                s.relabel(qb, qa)
            }
            (false, false) => Err(Error::Protocol { step, msg: "swap of two empty slots".into() }),
        };
    }
    match attempt(s) {
        Err(Error::InexactAngle(_)) => attempt(&s.to_float()),
        other => other,
    }
}
