//! Dense pure states over labeled qubits.
//!
//! A [`PureState`] carries either an exact [`ScaledVector`] (for circuits made
//! of `|+⟩`, CZ, Pauli, Hadamard and the `π/4` phase and rotation gates, each
//! rescaled by `√2` to stay integral) or a normalized floating-point vector.
//! Every operation returns a new state.

use std::collections::HashSet;
use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::exact::{self, GaussInt, ScaledVector};
use crate::{Error, Party, QubitLabel, Result};

/// Relative singular-value threshold for floating ranks.
pub const FLOAT_RANK_TOL: f64 = 1e-9;
/// Overlap tolerance for floating state equality.
pub const STATE_EQ_TOL: f64 = 1e-9;
const ANGLE_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

#[derive(Clone, Debug)]
pub enum Amplitudes {
    Exact(ScaledVector),
    Float(Vec<Complex64>),
}

#[derive(Clone, Debug)]
pub struct PureState {
    labels: Vec<QubitLabel>,
    amps: Amplitudes,
}

/// One outcome of a Z-basis measurement.
#[derive(Clone, Debug)]
pub struct Branch {
    pub probability: f64,
    /// Renormalized post-measurement state, `None` when the outcome has
    /// probability zero.
    pub state: Option<PureState>,
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub outcomes: [Branch; 2],
}

impl Measurement {
    pub fn branch(&self, outcome: bool) -> &Branch {
        &self.outcomes[outcome as usize]
    }
}

/// The angles the exact backend can represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ExactAngle {
    Zero,
    QuarterPi,
}

fn exact_angle(alpha: f64) -> Result<ExactAngle> {
    if alpha.abs() < ANGLE_TOL {
        Ok(ExactAngle::Zero)
    } else if (alpha - FRAC_PI_4).abs() < ANGLE_TOL {
        Ok(ExactAngle::QuarterPi)
    } else {
        Err(Error::InexactAngle(alpha))
    }
}

fn g(re: i64, im: i64) -> GaussInt {
    GaussInt::new(re, im)
}

impl PureState {
    /// The state on no qubits (a single amplitude 1).
    pub fn empty(backend: Backend) -> Self {
        let amps = match backend {
            Backend::Exact => Amplitudes::Exact(ScaledVector::from_ints(&[1], 0)),
            Backend::Float => Amplitudes::Float(vec![Complex64::new(1.0, 0.0)]),
        };
        Self {
            labels: Vec::new(),
            amps,
        }
    }

    /// `|+⟩^{⊗n}`. The exact backend stores all-ones with `half_power = n`.
    pub fn init_plus(labels: &[QubitLabel], backend: Backend) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("init_plus needs at least one label".into()));
        }
        check_distinct(labels)?;
        let n = labels.len();
        let amps = match backend {
            Backend::Exact => Amplitudes::Exact(ScaledVector::new(vec![GaussInt::one(); 1 << n], n as i64)),
            Backend::Float => {
                let a = (0.5f64).powf(n as f64 / 2.0);
                Amplitudes::Float(vec![Complex64::new(a, 0.0); 1 << n])
            }
        };
        Ok(Self {
            labels: labels.to_vec(),
            amps,
        })
    }

    pub fn from_exact(labels: Vec<QubitLabel>, v: ScaledVector) -> Result<Self> {
        check_distinct(&labels)?;
        if v.len() != 1 << labels.len() {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes for {} labels",
                v.len(),
                labels.len()
            )));
        }
        if v.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            labels,
            amps: Amplitudes::Exact(v),
        })
    }

    /// Normalizes `amps`.
    pub fn from_float(labels: Vec<QubitLabel>, amps: Vec<Complex64>) -> Result<Self> {
        check_distinct(&labels)?;
        if amps.len() != 1 << labels.len() {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes for {} labels",
                amps.len(),
                labels.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            labels,
            amps: Amplitudes::Float(amps.into_iter().map(|a| a / norm).collect()),
        })
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn backend(&self) -> Backend {
        match self.amps {
            Amplitudes::Exact(_) => Backend::Exact,
            Amplitudes::Float(_) => Backend::Float,
        }
    }

    pub fn exact(&self) -> Option<&ScaledVector> {
        match &self.amps {
            Amplitudes::Exact(v) => Some(v),
            Amplitudes::Float(_) => None,
        }
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.labels.contains(&label)
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::MissingLabel(label))
    }

    pub fn labels_of(&self, party: Party) -> Vec<QubitLabel> {
        self.labels.iter().copied().filter(|l| l.party == party).collect()
    }

    /// Normalized floating amplitudes.
    pub fn float_amplitudes(&self) -> Vec<Complex64> {
        match &self.amps {
            Amplitudes::Float(a) => a.clone(),
            Amplitudes::Exact(v) => {
                let pairs = v.to_complex_pairs();
                let norm = pairs.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
                pairs.into_iter().map(|(a, b)| Complex64::new(a / norm, b / norm)).collect()
            }
        }
    }

    pub fn to_float(&self) -> PureState {
        PureState {
            labels: self.labels.clone(),
            amps: Amplitudes::Float(self.float_amplitudes()),
        }
    }

    fn bit_of(&self, label: QubitLabel) -> Result<usize> {
        let p = self.position(label)?;
        Ok(1 << (self.labels.len() - 1 - p))
    }

    fn two_bits(&self, a: QubitLabel, b: QubitLabel) -> Result<(usize, usize)> {
        if a == b {
            return Err(Error::InvalidInput(format!("two-qubit gate on {a} twice")));
        }
        Ok((self.bit_of(a)?, self.bit_of(b)?))
    }

    fn with_amps(&self, amps: Amplitudes) -> PureState {
        PureState {
            labels: self.labels.clone(),
            amps,
        }
    }

    /// Controlled-Z: negates amplitudes with both qubits set.
    pub fn apply_cz(&self, a: QubitLabel, b: QubitLabel) -> Result<PureState> {
        let (ma, mb) = self.two_bits(a, b)?;
        let both = ma | mb;
        Ok(self.with_amps(match &self.amps {
            Amplitudes::Exact(v) => {
                let mut e = v.entries().to_vec();
                for (i, x) in e.iter_mut().enumerate() {
                    if i & both == both {
                        *x = -&*x;
                    }
                }
                Amplitudes::Exact(ScaledVector::new(e, v.half_power()))
            }
            Amplitudes::Float(f) => Amplitudes::Float(
                f.iter()
                    .enumerate()
                    .map(|(i, &x)| if i & both == both { -x } else { x })
                    .collect(),
            ),
        }))
    }

    /// `exp(iα Z_a ⊗ Z_b)`.
    ///
    /// The exact backend accepts `α ∈ {0, π/4}`; at `π/4` it applies the
    /// rescaled gate `diag(1+i, 1−i, 1−i, 1+i)` and bumps `half_power`.
    pub fn apply_zz_phase(&self, a: QubitLabel, b: QubitLabel, alpha: f64) -> Result<PureState> {
        let (ma, mb) = self.two_bits(a, b)?;
        let parity = |i: usize| ((i & ma != 0) ^ (i & mb != 0)) as usize;
        Ok(self.with_amps(match &self.amps {
            Amplitudes::Exact(v) => match exact_angle(alpha)? {
                ExactAngle::Zero => Amplitudes::Exact(v.clone()),
                ExactAngle::QuarterPi => {
                    let phase = [g(1, 1), g(1, -1)];
                    let e = v
                        .entries()
                        .iter()
                        .enumerate()
                        .map(|(i, x)| x * &phase[parity(i)])
                        .collect();
                    Amplitudes::Exact(ScaledVector::new(e, v.half_power() + 1))
                }
            },
            Amplitudes::Float(f) => {
                let phase = [Complex64::from_polar(1.0, alpha), Complex64::from_polar(1.0, -alpha)];
                Amplitudes::Float(f.iter().enumerate().map(|(i, &x)| x * phase[parity(i)]).collect())
            }
        }))
    }

    fn apply_exact_1q(&self, label: QubitLabel, u: [[GaussInt; 2]; 2], extra_half: i64) -> Result<PureState> {
        let mask = self.bit_of(label)?;
        let Amplitudes::Exact(v) = &self.amps else {
            unreachable!("exact gate on floating backend")
        };
        let src = v.entries();
        let mut out = src.to_vec();
        for i in (0..src.len()).filter(|i| i & mask == 0) {
            let (a0, a1) = (&src[i], &src[i | mask]);
            out[i] = &(&u[0][0] * a0) + &(&u[0][1] * a1);
            out[i | mask] = &(&u[1][0] * a0) + &(&u[1][1] * a1);
        }
        Ok(self.with_amps(Amplitudes::Exact(ScaledVector::new(out, v.half_power() + extra_half))))
    }

    fn apply_float_1q(&self, label: QubitLabel, u: [[Complex64; 2]; 2]) -> Result<PureState> {
        let mask = self.bit_of(label)?;
        let src = self.float_amplitudes();
        let mut out = src.clone();
        for i in (0..src.len()).filter(|i| i & mask == 0) {
            let (a0, a1) = (src[i], src[i | mask]);
            out[i] = u[0][0] * a0 + u[0][1] * a1;
            out[i | mask] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(self.with_amps(Amplitudes::Float(out)))
    }

    pub fn apply_pauli(&self, label: QubitLabel, p: Pauli) -> Result<PureState> {
        let (o, z) = (GaussInt::one(), GaussInt::zero());
        let u = match p {
            Pauli::I => [[o.clone(), z.clone()], [z, o]],
            Pauli::X => [[z.clone(), o.clone()], [o, z]],
            Pauli::Y => [[z.clone(), g(0, -1)], [g(0, 1), z]],
            Pauli::Z => [[o, z.clone()], [z, g(-1, 0)]],
        };
        match self.amps {
            Amplitudes::Exact(_) => self.apply_exact_1q(label, u, 0),
            Amplitudes::Float(_) => self.apply_float_1q(label, gauss_to_complex(&u)),
        }
    }

    /// Hadamard; exact as `[[1, 1], [1, −1]]` with one extra half power.
    pub fn apply_hadamard(&self, label: QubitLabel) -> Result<PureState> {
        let u = [[g(1, 0), g(1, 0)], [g(1, 0), g(-1, 0)]];
        match self.amps {
            Amplitudes::Exact(_) => self.apply_exact_1q(label, u, 1),
            Amplitudes::Float(_) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let mut c = gauss_to_complex(&u);
                c.iter_mut().flatten().for_each(|x| *x *= s);
                self.apply_float_1q(label, c)
            }
        }
    }

    /// `exp(iα X) = cos α · 1 + i sin α · X`.
    pub fn apply_x_rotation(&self, label: QubitLabel, alpha: f64) -> Result<PureState> {
        match &self.amps {
            Amplitudes::Exact(_) => match exact_angle(alpha)? {
                ExactAngle::Zero => Ok(self.clone()),
                ExactAngle::QuarterPi => self.apply_exact_1q(label, [[g(1, 0), g(0, 1)], [g(0, 1), g(1, 0)]], 1),
            },
            Amplitudes::Float(_) => {
                let (c, s) = (Complex64::new(alpha.cos(), 0.0), Complex64::new(0.0, alpha.sin()));
                self.apply_float_1q(label, [[c, s], [s, c]])
            }
        }
    }

    /// `exp(iα Z) = diag(e^{iα}, e^{−iα})`.
    pub fn apply_z_rotation(&self, label: QubitLabel, alpha: f64) -> Result<PureState> {
        match &self.amps {
            Amplitudes::Exact(_) => match exact_angle(alpha)? {
                ExactAngle::Zero => Ok(self.clone()),
                ExactAngle::QuarterPi => self.apply_exact_1q(label, [[g(1, 1), g(0, 0)], [g(0, 0), g(1, -1)]], 1),
            },
            Amplitudes::Float(_) => {
                let z = Complex64::new(0.0, 0.0);
                self.apply_float_1q(
                    label,
                    [[Complex64::from_polar(1.0, alpha), z], [z, Complex64::from_polar(1.0, -alpha)]],
                )
            }
        }
    }

    /// Arbitrary one-qubit unitary; floating backend only.
    pub fn apply_local_unitary(&self, label: QubitLabel, u: [[Complex64; 2]; 2]) -> Result<PureState> {
        let dev = unitarity_deviation(&u);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        if let Amplitudes::Exact(_) = self.amps {
            return Err(Error::ExactUnsupported(
                "a general one-qubit unitary (use Pauli gates or convert to floating)".into(),
            ));
        }
        self.apply_float_1q(label, u)
    }

    /// Exchanges the contents of two qubits.
    pub fn apply_swap(&self, a: QubitLabel, b: QubitLabel) -> Result<PureState> {
        let (pa, pb) = (self.position(a)?, self.position(b)?);
        let mut out = self.clone();
        out.labels.swap(pa, pb);
        Ok(out)
    }

    /// `±` a product of Pauli operators.
    pub fn apply_pauli_string(&self, ops: &[(QubitLabel, Pauli)], negate: bool) -> Result<PureState> {
        let mut s = self.clone();
        for &(l, p) in ops {
            s = s.apply_pauli(l, p)?;
        }
        if negate {
            s.amps = match s.amps {
                Amplitudes::Exact(v) => Amplitudes::Exact(v.scaled_by(&g(-1, 0))),
                Amplitudes::Float(f) => Amplitudes::Float(f.into_iter().map(|x| -x).collect()),
            };
        }
        Ok(s)
    }

    /// Renames a qubit (used when a qubit is sent to another party).
    pub fn relabel(&self, from: QubitLabel, to: QubitLabel) -> Result<PureState> {
        let p = self.position(from)?;
        if from != to && self.contains(to) {
            return Err(Error::DuplicateLabel(to));
        }
        let mut out = self.clone();
        out.labels[p] = to;
        Ok(out)
    }

    /// Appends a fresh `|+⟩` qubit.
    pub fn with_plus(&self, label: QubitLabel) -> Result<PureState> {
        if self.contains(label) {
            return Err(Error::DuplicateLabel(label));
        }
        let mut labels = self.labels.clone();
        labels.push(label);
        let amps = match &self.amps {
            Amplitudes::Exact(v) => {
                let e = v.entries().iter().flat_map(|x| [x.clone(), x.clone()]).collect();
                Amplitudes::Exact(ScaledVector::new(e, v.half_power() + 1))
            }
            Amplitudes::Float(f) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Amplitudes::Float(f.iter().flat_map(|&x| [x * s, x * s]).collect())
            }
        };
        Ok(PureState { labels, amps })
    }

    /// The same state with qubits listed in `order`.
    pub fn reordered(&self, order: &[QubitLabel]) -> Result<PureState> {
        if order.len() != self.labels.len() {
            return Err(Error::InvalidInput("reorder needs the same label set".into()));
        }
        check_distinct(order)?;
        let n = order.len();
        let src_pos: Vec<usize> = order.iter().map(|&l| self.position(l)).collect::<Result<_>>()?;
        let map = |j: usize| {
            // bit k of the new index (from the top) is bit src_pos[k] of the old
            let mut i = 0;
            for (k, &sp) in src_pos.iter().enumerate() {
                if j >> (n - 1 - k) & 1 == 1 {
                    i |= 1 << (n - 1 - sp);
                }
            }
            i
        };
        let amps = match &self.amps {
            Amplitudes::Exact(v) => {
                let e = (0..v.len()).map(|j| v.entries()[map(j)].clone()).collect();
                Amplitudes::Exact(ScaledVector::new(e, v.half_power()))
            }
            Amplitudes::Float(f) => Amplitudes::Float((0..f.len()).map(|j| f[map(j)]).collect()),
        };
        Ok(PureState {
            labels: order.to_vec(),
            amps,
        })
    }

    /// Z-basis measurement returning both branches; no sampling.
    ///
    /// An exact branch stays exact when its squared norm is a power of two,
    /// so that it can be normalized by `half_power` alone; otherwise it falls
    /// back to the floating backend.
    pub fn measure_z(&self, label: QubitLabel) -> Result<Measurement> {
        let pos = self.position(label)?;
        let n = self.labels.len();
        let mask = 1usize << (n - 1 - pos);
        let mut labels = self.labels.clone();
        labels.remove(pos);
        let squeeze = |i: usize| ((i >> (n - pos)) << (n - 1 - pos)) | (i & (mask - 1));
        let outcomes = match &self.amps {
            Amplitudes::Exact(v) => {
                let total = v.raw_norm_sq();
                let make = |bit: usize| -> Branch {
                    let mut e = vec![GaussInt::zero(); v.len() / 2];
                    for (i, x) in v.entries().iter().enumerate() {
                        if (i & mask != 0) as usize == bit {
                            e[squeeze(i)] = x.clone();
                        }
                    }
                    let sub = ScaledVector::new(e, v.half_power());
                    let part = sub.raw_norm_sq();
                    if part.is_zero() {
                        return Branch { probability: 0.0, state: None };
                    }
                    let probability = ratio(&part, &total);
                    let state = match power_of_two_log(&part) {
                        Some(k) => {
                            let mut sub = sub;
                            sub.set_half_power(k as i64);
                            PureState { labels: labels.clone(), amps: Amplitudes::Exact(sub) }
                        }
                        None => {
                            let tmp = PureState { labels: labels.clone(), amps: Amplitudes::Exact(sub) };
                            tmp.to_float()
                        }
                    };
                    Branch { probability, state: Some(state) }
                };
                [make(0), make(1)]
            }
            Amplitudes::Float(f) => {
                let make = |bit: usize| -> Branch {
                    let mut e = vec![Complex64::zero(); f.len() / 2];
                    for (i, &x) in f.iter().enumerate() {
                        if (i & mask != 0) as usize == bit {
                            e[squeeze(i)] = x;
                        }
                    }
                    let p: f64 = e.iter().map(|x| x.norm_sqr()).sum();
                    if p <= 1e-300 {
                        return Branch { probability: 0.0, state: None };
                    }
                    let s = p.sqrt();
                    Branch {
                        probability: p,
                        state: Some(PureState {
                            labels: labels.clone(),
                            amps: Amplitudes::Float(e.into_iter().map(|x| x / s).collect()),
                        }),
                    }
                };
                [make(0), make(1)]
            }
        };
        Ok(Measurement { outcomes })
    }

    /// Schmidt rank across `left | rest`, exact when the backend is exact.
    pub fn schmidt_rank(&self, left: &[QubitLabel]) -> Result<usize> {
        let pos: Vec<usize> = left.iter().map(|&l| self.position(l)).collect::<Result<_>>()?;
        match &self.amps {
            Amplitudes::Exact(v) => exact::schmidt_rank_exact(v, &pos),
            Amplitudes::Float(f) => float_schmidt_rank(f, self.labels.len(), &pos),
        }
    }

    /// Schmidt rank of one party's qubits against everyone else; 1 when the
    /// party holds none or all of the qubits.
    pub fn party_cut_rank(&self, party: Party) -> Result<usize> {
        let left = self.labels_of(party);
        if left.is_empty() || left.len() == self.labels.len() {
            return Ok(1);
        }
        self.schmidt_rank(&left)
    }

    /// `|⟨self|other⟩|` on normalized states, matching qubits by label.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        let other = other.reordered(&self.labels)?;
        let (a, b) = (self.float_amplitudes(), other.float_amplitudes());
        Ok(a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm())
    }

    /// Exact equality for two exact states, overlap `≥ 1 − 1e−9` otherwise
    /// (global phase ignored).
    pub fn same_state(&self, other: &PureState) -> Result<bool> {
        if let (Amplitudes::Exact(_), Amplitudes::Exact(_)) = (&self.amps, &other.amps) {
            return self.exactly_equal(other);
        }
        Ok(self.overlap(other)? >= 1.0 - STATE_EQ_TOL)
    }

    /// Entrywise equality of exact vectors after aligning labels and scale.
    pub fn exactly_equal(&self, other: &PureState) -> Result<bool> {
        let other = other.reordered(&self.labels)?;
        match (&self.amps, &other.amps) {
            (Amplitudes::Exact(a), Amplitudes::Exact(b)) => Ok(a == b),
            _ => Err(Error::InvalidInput("exact comparison needs two exact states".into())),
        }
    }
}

fn check_distinct(labels: &[QubitLabel]) -> Result<()> {
    let mut seen = HashSet::new();
    for &l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l));
        }
    }
    Ok(())
}

fn ratio(num: &BigInt, den: &BigInt) -> f64 {
    // both may exceed f64 range for huge states, so shift first
    let shift = den.bits().saturating_sub(900);
    let (n, d) = (num >> shift, den >> shift);
    n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(f64::INFINITY)
}

/// `k` with `x = 2^k`, if any.
fn power_of_two_log(x: &BigInt) -> Option<u64> {
    let k = x.trailing_zeros()?;
    (*x == BigInt::from(1) << k).then_some(k)
}

fn gauss_to_complex(u: &[[GaussInt; 2]; 2]) -> [[Complex64; 2]; 2] {
    let c = |x: &GaussInt| {
        let (a, b) = x.to_f64_pair();
        Complex64::new(a, b)
    };
    [[c(&u[0][0]), c(&u[0][1])], [c(&u[1][0]), c(&u[1][1])]]
}

fn unitarity_deviation(u: &[[Complex64; 2]; 2]) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((dot - target).norm());
        }
    }
    dev
}

/// Numerical rank of a complex matrix by SVD, counting singular values above
/// `FLOAT_RANK_TOL` times the largest one.
pub fn float_rank(m: &DMatrix<Complex64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > FLOAT_RANK_TOL * smax).count()
}

/// Floating Schmidt rank of an `n`-qubit amplitude vector across `left | rest`.
pub fn float_schmidt_rank(amps: &[Complex64], n: usize, left: &[usize]) -> Result<usize> {
    let left = exact::normalize_positions(left, n)?;
    let right = exact::complement(&left, n);
    let (rows, cols) = (1usize << left.len(), 1usize << right.len());
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for (idx, &a) in amps.iter().enumerate() {
        let (r, c) = exact::split_index(idx, n, &left, &right);
        m[(r, c)] = a;
    }
    if m.iter().all(|x| x.norm() == 0.0) {
        return Err(Error::ZeroState);
    }
    Ok(float_rank(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(k: u16) -> QubitLabel {
        QubitLabel::new(Party::v(k), 0)
    }

    fn qs(n: u16) -> Vec<QubitLabel> {
        (1..=n).map(q).collect()
    }

    fn entries(s: &PureState) -> Vec<GaussInt> {
        s.exact().unwrap().entries().to_vec()
    }

    fn random_state(rng: &mut ChaCha8Rng, n: u16) -> PureState {
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        PureState::from_float(qs(n), amps).unwrap()
    }

    #[test]
    fn init_plus_shapes() {
        let s = PureState::init_plus(&qs(1), Backend::Exact).unwrap();
        assert_eq!(entries(&s), vec![GaussInt::one(); 2]);
        assert_eq!(s.exact().unwrap().half_power(), 1);
        let s8 = PureState::init_plus(&qs(8), Backend::Exact).unwrap();
        assert_eq!(s8.exact().unwrap().len(), 256);
        assert_eq!(s8.exact().unwrap().half_power(), 8);
        assert!(PureState::init_plus(&[], Backend::Exact).is_err());
        assert!(matches!(
            PureState::init_plus(&[q(1), q(1)], Backend::Float),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn cz_on_plus_plus() {
        let s = PureState::init_plus(&qs(2), Backend::Exact).unwrap();
        let c = s.apply_cz(q(1), q(2)).unwrap();
        assert_eq!(entries(&c), vec![g(1, 0), g(1, 0), g(1, 0), g(-1, 0)]);
        assert_eq!(c.exact().unwrap().half_power(), 2);
        assert!(c.apply_cz(q(1), q(2)).unwrap().exactly_equal(&s).unwrap());
        assert!(matches!(s.apply_cz(q(1), q(3)), Err(Error::MissingLabel(_))));
    }

    #[test]
    fn cz_is_symmetric_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = random_state(&mut rng, 4);
            let a = s.apply_cz(q(1), q(3)).unwrap();
            let b = s.apply_cz(q(3), q(1)).unwrap();
            assert!(a.overlap(&b).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn zz_phase_zero_is_identity() {
        let s = PureState::init_plus(&qs(2), Backend::Exact).unwrap();
        assert!(s.apply_zz_phase(q(1), q(2), 0.0).unwrap().exactly_equal(&s).unwrap());
        let f = s.to_float();
        assert!(f.apply_zz_phase(q(1), q(2), 0.0).unwrap().overlap(&f).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn zz_quarter_pi_entangles() {
        let s = PureState::init_plus(&qs(2), Backend::Exact).unwrap();
        let e = s.apply_zz_phase(q(1), q(2), FRAC_PI_4).unwrap();
        assert_eq!(entries(&e), vec![g(1, 1), g(1, -1), g(1, -1), g(1, 1)]);
        assert_eq!(e.exact().unwrap().half_power(), 3);
        assert_eq!(e.schmidt_rank(&[q(1)]).unwrap(), 2);
        let f = s.to_float().apply_zz_phase(q(1), q(2), FRAC_PI_4).unwrap();
        let ea = e.float_amplitudes();
        let fa = f.float_amplitudes();
        for (x, y) in ea.iter().zip(&fa) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!(matches!(s.apply_zz_phase(q(1), q(2), 0.3), Err(Error::InexactAngle(_))));
    }

    #[test]
    fn pauli_z_maps_plus_to_minus() {
        let s = PureState::init_plus(&qs(1), Backend::Exact).unwrap();
        let m = s.apply_pauli(q(1), Pauli::Z).unwrap();
        assert_eq!(entries(&m), vec![g(1, 0), g(-1, 0)]);
    }

    #[test]
    fn x_rotation() {
        let zero = PureState::from_float(qs(1), vec![Complex64::new(1.0, 0.0), Complex64::zero()]).unwrap();
        let alpha = 0.37;
        let r = zero.apply_x_rotation(q(1), alpha).unwrap();
        let a = r.float_amplitudes();
        assert!((a[0] - Complex64::new(alpha.cos(), 0.0)).norm() < 1e-15);
        assert!((a[1] - Complex64::new(0.0, alpha.sin())).norm() < 1e-15);
        assert!(zero.apply_x_rotation(q(1), 0.0).unwrap().overlap(&zero).unwrap() > 1.0 - 1e-15);
        let ex = PureState::init_plus(&qs(1), Backend::Exact).unwrap();
        let exr = ex.apply_x_rotation(q(1), FRAC_PI_4).unwrap();
        assert!(exr.overlap(&ex.to_float().apply_x_rotation(q(1), FRAC_PI_4).unwrap()).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn local_unitary_checks() {
        let s = PureState::init_plus(&qs(1), Backend::Float).unwrap();
        let z = Complex64::zero();
        let o = Complex64::new(1.0, 0.0);
        assert!(matches!(s.apply_local_unitary(q(1), [[o, o], [z, o]]), Err(Error::NotUnitary(_))));
        let e = PureState::init_plus(&qs(1), Backend::Exact).unwrap();
        assert!(matches!(e.apply_local_unitary(q(1), [[o, z], [z, o]]), Err(Error::ExactUnsupported(_))));
    }

    #[test]
    fn measure_plus() {
        let s = PureState::init_plus(&qs(1), Backend::Exact).unwrap();
        let m = s.measure_z(q(1)).unwrap();
        assert_eq!(m.outcomes[0].probability, 0.5);
        assert_eq!(m.outcomes[1].probability, 0.5);
        assert_eq!(m.outcomes[0].state.as_ref().unwrap().num_qubits(), 0);
    }

    #[test]
    fn measure_deterministic_outcome() {
        let s = PureState::from_exact(qs(2), ScaledVector::from_ints(&[1, 0, 0, 0], 0)).unwrap();
        let m = s.measure_z(q(1)).unwrap();
        assert_eq!(m.outcomes[0].probability, 1.0);
        assert!(m.outcomes[1].state.is_none());
        let post = m.outcomes[0].state.as_ref().unwrap();
        assert_eq!(post.labels(), &[q(2)]);
        assert_eq!(entries(post), vec![g(1, 0), g(0, 0)]);
    }

    #[test]
    fn measure_non_dyadic_falls_back_to_float() {
        // (|000⟩ + |001⟩ + |010⟩ + |100⟩)/2: the outcome-0 branch has norm² 3/4
        let s = PureState::from_exact(qs(3), ScaledVector::from_ints(&[1, 1, 1, 0, 1, 0, 0, 0], 2)).unwrap();
        let m = s.measure_z(q(1)).unwrap();
        assert!((m.outcomes[0].probability - 0.75).abs() < 1e-15);
        assert_eq!(m.outcomes[0].state.as_ref().unwrap().backend(), Backend::Float);
        assert_eq!(m.outcomes[1].state.as_ref().unwrap().backend(), Backend::Exact);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_state(&mut rng, 4);
            let m = s.measure_z(q(rng.random_range(1..=4))).unwrap();
            let total = m.outcomes[0].probability + m.outcomes[1].probability;
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_two_qubit_gates_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let s = random_state(&mut rng, 4);
            let a = s.apply_cz(q(1), q(2)).unwrap().apply_zz_phase(q(3), q(4), 0.8).unwrap();
            let b = s.apply_zz_phase(q(3), q(4), 0.8).unwrap().apply_cz(q(1), q(2)).unwrap();
            assert!(a.overlap(&b).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn half_power_counts_qubits_and_quarter_gates() {
        let s = PureState::init_plus(&qs(5), Backend::Exact).unwrap();
        let s = s
            .apply_cz(q(1), q(2)).unwrap()
            .apply_zz_phase(q(2), q(3), FRAC_PI_4).unwrap()
            .apply_pauli(q(4), Pauli::X).unwrap()
            .apply_zz_phase(q(4), q(5), FRAC_PI_4).unwrap()
            .apply_pauli(q(1), Pauli::Z).unwrap();
        assert_eq!(s.exact().unwrap().half_power(), 5 + 2);
    }

    #[test]
    fn reorder_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = random_state(&mut rng, 3);
        let order = [q(3), q(1), q(2)];
        let r = s.reordered(&order).unwrap();
        assert!(r.overlap(&s).unwrap() > 1.0 - 1e-12);
        let back = r.reordered(&qs(3)).unwrap();
        let (a, b) = (s.float_amplitudes(), back.float_amplitudes());
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-15));
    }

    #[test]
    fn swap_exchanges_contents() {
        let s = PureState::from_exact(qs(2), ScaledVector::from_ints(&[0, 1, 0, 0], 0)).unwrap();
        let w = s.apply_swap(q(1), q(2)).unwrap().reordered(&qs(2)).unwrap();
        assert_eq!(entries(&w), vec![g(0, 0), g(0, 0), g(1, 0), g(0, 0)]);
    }

    #[test]
    fn relabel_and_append() {
        let s = PureState::init_plus(&qs(1), Backend::Exact).unwrap();
        let t = s.with_plus(q(2)).unwrap();
        assert!(t.exactly_equal(&PureState::init_plus(&qs(2), Backend::Exact).unwrap()).unwrap());
        let moved = t.relabel(q(2), QubitLabel::new(Party::v(3), 1)).unwrap();
        assert!(moved.contains(QubitLabel::new(Party::v(3), 1)));
        assert!(matches!(t.relabel(q(1), q(2)), Err(Error::DuplicateLabel(_))));
    }
}
