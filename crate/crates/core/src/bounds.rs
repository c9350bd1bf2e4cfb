//! Cut-product condition for maximally entangled pairs on a complete graph.
//!
//! `2m` parties share one `d`-level qudit each across every balanced
//! bipartition. A bipartite distribution with capacities `M_e` on `K_{2m}`
//! can only supply that if every balanced cut `C` has `∏_{e∈C} M_e ≥ d^m`,
//! which forces some party to hold at least `d^{2−1/m}` dimensions.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

/// Largest exhaustive search space accepted, in assignments.
pub const BRUTE_FORCE_LIMIT: u64 = 100_000_000;

/// Capacities on every edge of `K_{2m}`, vertices `0 … 2m−1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CutAssignment {
    pub m: usize,
    pub d: u64,
    /// Edge `(i, j)` with `i < j`, in lexicographic order.
    #[serde(serialize_with = "edge_list")]
    pub capacities: BTreeMap<(usize, usize), u64>,
}

fn edge_list<S: serde::Serializer>(caps: &BTreeMap<(usize, usize), u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(caps.iter().map(|(&(i, j), &c)| (i, j, c)))
}

fn complete_edges(m: usize) -> Vec<(usize, usize)> {
    (0..2 * m).tuple_combinations().collect()
}

impl CutAssignment {
    pub fn new(m: usize, d: u64, capacities: BTreeMap<(usize, usize), u64>) -> Result<Self> {
        if m < 1 || d < 2 {
            return Err(Error::InvalidInput("need m ≥ 1 and d ≥ 2".into()));
        }
        let edges = complete_edges(m);
        if capacities.len() != edges.len() || edges.iter().any(|e| !capacities.contains_key(e)) {
            return Err(Error::InvalidInput(format!("every edge of K_{} needs a capacity", 2 * m)));
        }
        if let Some((e, _)) = capacities.iter().find(|(_, &c)| c < 1) {
            return Err(Error::InvalidInput(format!("capacity of {e:?} must be at least 1")));
        }
        Ok(Self { m, d, capacities })
    }

    /// Every edge set to `c`.
    pub fn uniform(m: usize, d: u64, c: u64) -> Result<Self> {
        Self::new(m, d, complete_edges(m).into_iter().map(|e| (e, c)).collect())
    }

    fn from_vec(m: usize, d: u64, caps: &[u64]) -> Self {
        Self { m, d, capacities: complete_edges(m).into_iter().zip(caps.iter().copied()).collect() }
    }

    /// `∏_{e∋v} M_e`.
    pub fn load(&self, v: usize) -> BigUint {
        self.capacities
            .iter()
            .filter(|((a, b), _)| *a == v || *b == v)
            .map(|(_, &c)| BigUint::from(c))
            .product()
    }

    pub fn max_load(&self) -> BigUint {
        (0..2 * self.m).map(|v| self.load(v)).max().unwrap_or_else(BigUint::one)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutCheck {
    pub holds: bool,
    pub cuts_checked: usize,
    /// Side containing vertex 0 of the first failing cut.
    pub violated_cut: Option<Vec<usize>>,
    pub violated_product: Option<String>,
    pub required: String,
}

/// Balanced bipartitions, each listed once by the side holding vertex 0.
pub fn balanced_cuts(m: usize) -> Vec<Vec<usize>> {
    (1..2 * m)
        .combinations(m - 1)
        .map(|rest| std::iter::once(0).chain(rest).collect())
        .collect()
}

fn cut_product(a: &CutAssignment, side: &[usize]) -> BigUint {
    a.capacities
        .iter()
        .filter(|((i, j), _)| side.contains(i) != side.contains(j))
        .map(|(_, &c)| BigUint::from(c))
        .product()
}

/// Checks `∏_{e∈C} M_e ≥ d^m` on every balanced cut, exactly.
pub fn cut_condition_holds(a: &CutAssignment) -> CutCheck {
    let required = BigUint::from(a.d).pow(a.m as u32);
    let cuts = balanced_cuts(a.m);
    let mut check = CutCheck {
        holds: true,
        cuts_checked: cuts.len(),
        violated_cut: None,
        violated_product: None,
        required: required.to_string(),
    };
    for side in cuts {
        let p = cut_product(a, &side);
        if p < required {
            check.holds = false;
            check.violated_cut = Some(side);
            check.violated_product = Some(p.to_string());
            break;
        }
    }
    check
}

fn cut_holds(a: &CutAssignment, cuts: &[Vec<usize>], required: &BigUint) -> bool {
    cuts.iter().all(|side| cut_product(a, side) >= *required)
}

/// `d^{2−1/m}`.
pub fn local_dim_lower_bound(m: usize, d: u64) -> f64 {
    (d as f64).powf(2.0 - 1.0 / m as f64)
}

/// Whether `load ≥ d^{2−1/m}`, decided as `load^m ≥ d^{2m−1}`.
pub fn meets_lower_bound(load: &BigUint, m: usize, d: u64) -> bool {
    load.pow(m as u32) >= BigUint::from(d).pow(2 * m as u32 - 1)
}

/// Smallest `k` with `k^m ≥ d`.
pub fn int_root_ceil(d: u64, m: usize) -> u64 {
    let mut k = 1u64;
    while BigUint::from(k).pow(m as u32) < BigUint::from(d) {
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceReport {
    pub m: usize,
    pub d: u64,
    pub cap: u64,
    pub assignments: u64,
    pub passing: u64,
    /// Passing assignments whose largest load is below `d^{2−1/m}`.
    pub bound_violations: u64,
    pub bound: f64,
    pub min_max_load: Option<String>,
    pub witness: Option<CutAssignment>,
}

/// Exhaustive search over capacities `1 … cap` on every edge for the
/// smallest largest load among assignments passing the cut condition.
pub fn brute_force_min_max_load(m: usize, d: u64, cap: u64) -> Result<BruteForceReport> {
    if m < 1 || d < 2 || cap < 1 {
        return Err(Error::InvalidInput("need m ≥ 1, d ≥ 2 and cap ≥ 1".into()));
    }
    let ne = complete_edges(m).len();
    let space = (cap as f64).powi(ne as i32);
    if space > BRUTE_FORCE_LIMIT as f64 {
        return Err(Error::Guard(format!(
            "{cap}^{ne} assignments exceed {BRUTE_FORCE_LIMIT}; use the symmetric check instead"
        )));
    }
    let cuts = balanced_cuts(m);
    let required = BigUint::from(d).pow(m as u32);
    struct Part {
        assignments: u64,
        passing: u64,
        violations: u64,
        best: Option<(BigUint, Vec<u64>)>,
    }
    let parts: Vec<Part> = (1..=cap)
        .into_par_iter()
        .map(|first| {
            let mut caps = vec![1u64; ne];
            caps[0] = first;
            let mut part = Part { assignments: 0, passing: 0, violations: 0, best: None };
            loop {
                part.assignments += 1;
                let a = CutAssignment::from_vec(m, d, &caps);
                if cut_holds(&a, &cuts, &required) {
                    part.passing += 1;
                    let load = a.max_load();
                    if !meets_lower_bound(&load, m, d) {
                        part.violations += 1;
                    }
                    if part.best.as_ref().is_none_or(|(b, _)| load < *b) {
                        part.best = Some((load, caps.clone()));
                    }
                }
                // odometer over edges 1.., last edge fastest
                let mut i = ne;
                loop {
                    if i == 1 {
                        return part;
                    }
                    i -= 1;
                    if caps[i] < cap {
                        caps[i] += 1;
                        break;
                    }
                    caps[i] = 1;
                }
                if ne == 1 {
                    return part;
                }
            }
        })
        .collect();
    let best = parts
        .iter()
        .filter_map(|p| p.best.as_ref())
        .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)))
        .cloned();
    Ok(BruteForceReport {
        m,
        d,
        cap,
        assignments: parts.iter().map(|p| p.assignments).sum(),
        passing: parts.iter().map(|p| p.passing).sum(),
        bound_violations: parts.iter().map(|p| p.violations).sum(),
        bound: local_dim_lower_bound(m, d),
        min_max_load: best.as_ref().map(|b| b.0.to_string()),
        witness: best.map(|b| CutAssignment::from_vec(m, d, &b.1)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricReport {
    pub m: usize,
    pub d: u64,
    pub capacity: u64,
    pub load: String,
    pub bound: f64,
    pub ratio: f64,
    pub cut_product: String,
    pub required: String,
    pub holds: bool,
    pub meets_bound_with_equality: bool,
}

/// Every `M_e = ⌈d^{1/m}⌉`.
pub fn symmetric_assignment_check(m: usize, d: u64) -> Result<SymmetricReport> {
    if !(1..=8).contains(&m) || !(2..=64).contains(&d) {
        return Err(Error::Guard("symmetric check covers 1 ≤ m ≤ 8 and 2 ≤ d ≤ 64".into()));
    }
    let c = int_root_ceil(d, m);
    let a = CutAssignment::uniform(m, d, c)?;
    let check = cut_condition_holds(&a);
    let load = BigUint::from(c).pow(2 * m as u32 - 1);
    let bound = local_dim_lower_bound(m, d);
    let cut_product = BigUint::from(c).pow((m * m) as u32);
    Ok(SymmetricReport {
        m,
        d,
        capacity: c,
        load: load.to_string(),
        bound,
        ratio: load.to_f64().unwrap_or(f64::INFINITY) / bound,
        meets_bound_with_equality: load.pow(m as u32) == BigUint::from(d).pow(2 * m as u32 - 1),
        cut_product: cut_product.to_string(),
        required: check.required,
        holds: check.holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_edge() {
        let a = CutAssignment::uniform(1, 2, 2).unwrap();
        assert!(cut_condition_holds(&a).holds);
        assert_eq!(balanced_cuts(1).len(), 1);
    }

    #[test]
    fn k4_all_twos_meets_d4() {
        let a = CutAssignment::uniform(2, 4, 2).unwrap();
        let c = cut_condition_holds(&a);
        assert!(c.holds);
        assert_eq!(c.cuts_checked, 3);
        let mut low = a.clone();
        *low.capacities.get_mut(&(0, 2)).unwrap() = 1;
        let c = cut_condition_holds(&low);
        assert!(!c.holds);
        assert_eq!(c.violated_product.as_deref(), Some("8"));
    }

    #[test]
    fn balanced_cut_counts() {
        for (m, n) in [(1, 1), (2, 3), (3, 10), (4, 35)] {
            assert_eq!(balanced_cuts(m).len(), n);
        }
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(local_dim_lower_bound(1, 5), 5.0);
        assert!((local_dim_lower_bound(2, 2) - 2.8284271247461903).abs() < 1e-12);
        assert!((local_dim_lower_bound(3, 2) - 3.1748021039363987).abs() < 1e-12);
    }

    #[test]
    fn root_ceiling_at_perfect_powers() {
        assert_eq!(int_root_ceil(8, 3), 2);
        assert_eq!(int_root_ceil(9, 3), 3);
        assert_eq!(int_root_ceil(1, 5), 1);
        assert_eq!(int_root_ceil(64, 2), 8);
        assert_eq!(int_root_ceil(65, 2), 9);
    }

    #[test]
    fn two_party_brute_force() {
        let r = brute_force_min_max_load(1, 3, 4).unwrap();
        assert_eq!(r.min_max_load.as_deref(), Some("3"));
        assert_eq!(r.assignments, 4);
        assert_eq!(r.passing, 2);
        assert_eq!(r.bound_violations, 0);
    }

    #[test]
    fn assignment_serializes_as_edge_list() {
        let a = CutAssignment::uniform(1, 2, 3).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["capacities"], serde_json::json!([[0, 1, 3]]));
    }

    #[test]
    fn guard() {
        assert!(matches!(brute_force_min_max_load(3, 2, 4), Err(Error::Guard(_))));
    }

    #[test]
    fn symmetric_examples() {
        let r = symmetric_assignment_check(2, 4).unwrap();
        assert_eq!((r.capacity, r.load.as_str(), r.holds), (2, "8", true));
        assert_eq!((r.cut_product.as_str(), r.required.as_str()), ("16", "16"));
        assert!(r.meets_bound_with_equality);
        let r = symmetric_assignment_check(2, 3).unwrap();
        assert_eq!((r.capacity, r.load.as_str(), r.holds), (2, "8", true));
        let r = symmetric_assignment_check(1, 7).unwrap();
        assert_eq!((r.capacity, r.load.as_str()), (7, "7"));
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!(symmetric_assignment_check(9, 2).is_err());
    }

    proptest! {
        #[test]
        fn raising_a_capacity_keeps_the_condition(
            caps in proptest::collection::vec(1u64..4, 6), idx in 0usize..6, d in 2u64..5
        ) {
            let a = CutAssignment::from_vec(2, d, &caps);
            let mut raised = caps.clone();
            raised[idx] += 1;
            let b = CutAssignment::from_vec(2, d, &raised);
            prop_assert!(!cut_condition_holds(&a).holds || cut_condition_holds(&b).holds);
        }
    }
}
