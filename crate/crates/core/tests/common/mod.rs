#![allow(dead_code)]

use entaudit::exact::GaussInt;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// Primes `≡ 1 (mod 4)`, so `Z[i] → F_p` is a ring map.
pub const PRIMES: [u64; 2] = [1_000_000_009, 998_244_353];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// A square root of −1 modulo `p`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    (2..)
        .map(|a| pow_mod(a, (p - 1) / 4, p))
        .find(|&i| mul_mod(i, i, p) == p - 1)
        .unwrap()
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    (((x % &pb) + &pb) % &pb).to_u64().unwrap()
}

/// Image of `g` under `i ↦ sqrt(−1) mod p`.
pub fn to_field(g: &GaussInt, p: u64, i: u64) -> u64 {
    (reduce(&g.re, p) + mul_mod(reduce(&g.im, p), i, p)) % p
}

/// Rank over `F_p` by plain Gaussian elimination. Never above the rank over
/// `Q(i)`, and equal to it unless `p` divides some minor.
pub fn rank_mod_p(rows: usize, cols: usize, entries: &[GaussInt], p: u64) -> usize {
    let i = sqrt_minus_one(p);
    let mut m: Vec<Vec<u64>> = (0..rows).map(|r| (0..cols).map(|c| to_field(&entries[r * cols + c], p, i)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = mul_mod(m[r][c], inv, p);
                let pivot = m[rank].clone();
                for (x, &y) in m[r].iter_mut().zip(&pivot).skip(c) {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn svd_rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// SVD rank at `1e-9` relative, if unchanged at `1e-8` and `1e-10`.
pub fn stable_svd_rank(m: &DMatrix<Complex64>) -> Option<usize> {
    let r = svd_rank(m, 1e-9);
    (svd_rank(m, 1e-8) == r && svd_rank(m, 1e-10) == r).then_some(r)
}

/// Coefficient matrix of an `n`-qubit vector (qubit 0 is the top index bit)
/// with rows indexed by the qubits in `left`, in increasing order.
pub fn reshape<T: Clone>(amps: &[T], n: usize, left: &[usize]) -> (usize, usize, Vec<T>) {
    let mut left = left.to_vec();
    left.sort();
    let right: Vec<usize> = (0..n).filter(|q| !left.contains(q)).collect();
    let (rows, cols) = (1 << left.len(), 1 << right.len());
    let mut out: Vec<Option<T>> = vec![None; rows * cols];
    for (x, a) in amps.iter().enumerate() {
        let bit = |q: usize| (x >> (n - 1 - q)) & 1;
        let r = left.iter().fold(0, |acc, &q| acc << 1 | bit(q));
        let c = right.iter().fold(0, |acc, &q| acc << 1 | bit(q));
        out[r * cols + c] = Some(a.clone());
    }
    (rows, cols, out.into_iter().map(Option::unwrap).collect())
}

pub fn reshape_complex(amps: &[Complex64], n: usize, left: &[usize]) -> DMatrix<Complex64> {
    let (rows, cols, data) = reshape(amps, n, left);
    DMatrix::from_row_slice(rows, cols, &data)
}

/// `ψ(α)` from its closed form: `2^{-n/2} ∏_g exp(iα_g z_a z_b)` with
/// `z = ±1` from the bits. `pairs` are zero-based qubit indices.
pub fn target_oracle(n: usize, pairs: &[(usize, usize)], alphas: &[f64]) -> Vec<Complex64> {
    let norm = (0.5f64).powf(n as f64 / 2.0);
    (0..1usize << n)
        .map(|x| {
            let bit = |q: usize| (x >> (n - 1 - q)) & 1;
            let phase: f64 = pairs
                .iter()
                .zip(alphas)
                .map(|(&(a, b), &t)| if bit(a) == bit(b) { t } else { -t })
                .sum();
            Complex64::from_polar(norm, phase)
        })
        .collect()
}

/// `|⟨a|b⟩|` for normalized vectors.
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}

use entaudit::mbqc::StateGraph;
use entaudit::statevector::{Backend, PureState};
use entaudit::{Party, QubitLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_4;

pub fn line_labels(n: usize) -> Vec<QubitLabel> {
    (1..=n as u16).map(|k| QubitLabel::new(Party::v(k), 0)).collect()
}

/// Random state on 3–6 qubits: exact states come from random circuits of
/// exact gates, float states from Gaussian amplitudes.
pub fn random_state(seed: u64, exact: bool) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=6);
    let labels = line_labels(n);
    if !exact {
        let amps = (0..1 << n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        return PureState::from_float(labels, amps).unwrap();
    }
    let mut s = PureState::init_plus(&labels, Backend::Exact).unwrap();
    for _ in 0..rng.random_range(2..14) {
        let a = labels[rng.random_range(0..n)];
        let b = labels[rng.random_range(0..n)];
        s = match rng.random_range(0..5) {
            0 if a != b => s.apply_cz(a, b).unwrap(),
            1 if a != b => s.apply_zz_phase(a, b, FRAC_PI_4).unwrap(),
            2 => s.apply_hadamard(a).unwrap(),
            3 => s.apply_x_rotation(a, FRAC_PI_4).unwrap(),
            _ => s.apply_z_rotation(a, FRAC_PI_4).unwrap(),
        };
    }
    s
}

/// Measures a random qubit (after a random X rotation) and checks, on both
/// branches and for every bipartition of the other qubits, that the Schmidt
/// rank did not grow. Returns the number of comparisons.
pub fn check_measurement_monotone(s: &PureState, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = s.labels().to_vec();
    let q = labels[rng.random_range(0..labels.len())];
    let angle = if s.exact().is_some() {
        [0.0, FRAC_PI_4][rng.random_range(0..2)]
    } else {
        rng.random_range(0.0..std::f64::consts::TAU)
    };
    let m = s.apply_x_rotation(q, angle).map_err(|e| e.to_string())?.measure_z(q).map_err(|e| e.to_string())?;
    let rest: Vec<QubitLabel> = labels.iter().copied().filter(|&l| l != q).collect();
    let mut checks = 0;
    for bit in [false, true] {
        let Some(post) = &m.branch(bit).state else { continue };
        for mask in 1u32..(1 << rest.len()) - 1 {
            let a: Vec<QubitLabel> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|x| *x.1).collect();
            let after = post.schmidt_rank(&a).map_err(|e| e.to_string())?;
            let mut with_q = a.clone();
            with_q.push(q);
            for before in [s.schmidt_rank(&a), s.schmidt_rank(&with_q)] {
                let before = before.map_err(|e| e.to_string())?;
                if after > before {
                    return Err(format!("rank grew from {before} to {after} measuring {q}"));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// Random simple graph on 2–8 target vertices.
pub fn random_graph(seed: u64) -> StateGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=8);
    let labels = line_labels(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.4) {
                edges.push((labels[i], labels[j]));
            }
        }
    }
    StateGraph::new(&labels, &[], edges).unwrap()
}
