use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Assignment of ±1 to N sites.
///
/// Basis index convention, used everywhere: site 0 is the most significant
/// bit, `-1` maps to bit 1 and `+1` to bit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig {
    values: Vec<i8>,
}

impl SpinConfig {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidSpin(v));
        }
        Ok(SpinConfig { values })
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfig { values: vec![1; n] }
    }

    pub fn from_index(n: usize, idx: usize) -> Self {
        let values = (0..n)
            .map(|i| if (idx >> (n - 1 - i)) & 1 == 1 { -1 } else { 1 })
            .collect();
        SpinConfig { values }
    }

    pub fn index(&self) -> usize {
        self.values
            .iter()
            .fold(0usize, |acc, &v| (acc << 1) | usize::from(v == -1))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        f64::from(self.values[i])
    }

    pub fn flip(&mut self, i: usize) {
        self.values[i] = -self.values[i];
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.flip(i);
        s
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| f64::from(v)).collect()
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SpinConfig::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Vec<i8> {
        s.values
    }
}

/// Spin value of bit `bit` under the basis convention.
#[inline]
pub fn spin_of_bit(bit: usize) -> f64 {
    if bit == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Spin vector for basis index `idx` of an `n`-site register.
pub fn spins_of_index(n: usize, idx: usize) -> Vec<f64> {
    (0..n).map(|i| spin_of_bit((idx >> (n - 1 - i)) & 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for idx in 0..32 {
            assert_eq!(SpinConfig::from_index(5, idx).index(), idx);
        }
    }

    #[test]
    fn msb_is_site_zero() {
        let s = SpinConfig::new(vec![-1, 1, 1]).unwrap();
        assert_eq!(s.index(), 4);
        assert_eq!(SpinConfig::all_up(3).index(), 0);
    }

    #[test]
    fn rejects_zero() {
        assert!(SpinConfig::new(vec![1, 0]).is_err());
    }
}
