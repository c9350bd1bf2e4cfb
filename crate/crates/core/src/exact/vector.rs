use num_bigint::BigInt;
use num_traits::Zero;

use super::GaussInt;

/// A vector `entries · 2^(−half_power/2)` with Gaussian-integer entries.
#[derive(Clone, Debug)]
pub struct ScaledVector {
    entries: Vec<GaussInt>,
    half_power: i64,
}

impl ScaledVector {
    /// Panics unless `entries.len()` is a power of two.
    pub fn new(entries: Vec<GaussInt>, half_power: i64) -> Self {
        assert!(
            entries.len().is_power_of_two(),
            "ScaledVector length {} is not a power of two",
            entries.len()
        );
        Self {
            entries,
            half_power,
        }
    }

    pub fn from_ints(values: &[i64], half_power: i64) -> Self {
        Self::new(values.iter().map(|&v| GaussInt::from(v)).collect(), half_power)
    }

    pub fn entries(&self) -> &[GaussInt] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [GaussInt] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<GaussInt> {
        self.entries
    }

    pub fn half_power(&self) -> i64 {
        self.half_power
    }

    pub fn set_half_power(&mut self, k: i64) {
        self.half_power = k;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of qubits, `log2(len)`.
    pub fn num_qubits(&self) -> usize {
        self.entries.len().trailing_zeros() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussInt::is_zero)
    }

    /// Sum of entry norms (the squared norm before scaling).
    pub fn raw_norm_sq(&self) -> BigInt {
        self.entries.iter().map(GaussInt::norm).sum()
    }

    /// Squared Euclidean norm of the represented vector.
    pub fn norm_sq(&self) -> f64 {
        use num_traits::ToPrimitive;
        let raw = self.raw_norm_sq().to_f64().unwrap_or(f64::INFINITY);
        raw * 2f64.powi(-(self.half_power as i32))
    }

    /// Represented amplitudes as floating-point pairs.
    pub fn to_complex_pairs(&self) -> Vec<(f64, f64)> {
        let s = 2f64.powf(-(self.half_power as f64) / 2.0);
        self.entries
            .iter()
            .map(|e| {
                let (a, b) = e.to_f64_pair();
                (a * s, b * s)
            })
            .collect()
    }

    /// Equality of the represented vectors.
    ///
    /// The side with the smaller `half_power` is multiplied by
    /// `2^(⌊Δk/2⌋)`. For odd `Δk` the two sides would differ by a factor of
    /// `√2`, which is irrational over `Q(i)`, so they agree only when both
    /// are zero.
    pub fn same_vector(&self, other: &ScaledVector) -> bool {
        if self.entries.len() != other.entries.len() {
            return false;
        }
        let (hi, lo) = if self.half_power >= other.half_power {
            (self, other)
        } else {
            (other, self)
        };
        let dk = hi.half_power - lo.half_power;
        if dk % 2 == 1 {
            return hi.is_zero() && lo.is_zero();
        }
        let factor = BigInt::from(1) << (dk / 2) as usize;
        hi.entries
            .iter()
            .zip(&lo.entries)
            .all(|(h, l)| *h == l.scale(&factor))
    }

    /// Multiplies every entry by `c`. The represented ray is unchanged.
    pub fn scaled_by(&self, c: &GaussInt) -> ScaledVector {
        ScaledVector::new(self.entries.iter().map(|e| e * c).collect(), self.half_power)
    }

    /// Divides out the largest power of two shared by all entries,
    /// lowering `half_power` accordingly.
    pub fn reduced(&self) -> ScaledVector {
        let mut shift = usize::MAX;
        for e in &self.entries {
            for part in [&e.re, &e.im] {
                if !part.is_zero() {
                    shift = shift.min(part.trailing_zeros().unwrap_or(0) as usize);
                }
            }
        }
        if shift == usize::MAX || shift == 0 {
            return self.clone();
        }
        let entries = self
            .entries
            .iter()
            .map(|e| GaussInt {
                re: &e.re >> shift,
                im: &e.im >> shift,
            })
            .collect();
        ScaledVector::new(entries, self.half_power - 2 * shift as i64)
    }
}

impl PartialEq for ScaledVector {
    fn eq(&self, other: &Self) -> bool {
        self.same_vector(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment_of_even_scale_difference() {
        let a = ScaledVector::from_ints(&[1, 1], 1);
        let b = ScaledVector::from_ints(&[2, 2], 3);
        assert_eq!(a, b);
        assert_ne!(a, ScaledVector::from_ints(&[2, 2], 1));
    }

    #[test]
    fn odd_scale_difference_is_never_equal_for_nonzero() {
        let a = ScaledVector::from_ints(&[1, 1], 1);
        let b = ScaledVector::from_ints(&[1, 1], 2);
        assert_ne!(a, b);
        let z1 = ScaledVector::from_ints(&[0, 0], 1);
        let z2 = ScaledVector::from_ints(&[0, 0], 4);
        assert_eq!(z1, z2);
    }

    #[test]
    fn reduce_keeps_vector() {
        let a = ScaledVector::from_ints(&[4, -8, 0, 12], 6);
        let r = a.reduced();
        assert_eq!(r.half_power(), 2);
        assert_eq!(a, r);
    }

    #[test]
    fn norm_of_plus_state() {
        let v = ScaledVector::from_ints(&[1; 8], 3);
        assert!((v.norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "not a power of two")]
    fn rejects_non_power_of_two() {
        ScaledVector::from_ints(&[1, 2, 3], 0);
    }
}
