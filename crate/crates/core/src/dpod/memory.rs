use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Time shifts `l` defining the cyclic input window: entry `i` of the window
/// for sample `n` is `y[(n - l_i) mod N]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<i64>", into = "Vec<i64>"))]
pub struct MemorySpec {
    shifts: Vec<i64>,
}

impl MemorySpec {
    pub fn new(shifts: Vec<i64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidMemory("at least one shift is required"));
        }
        for (i, s) in shifts.iter().enumerate() {
            if shifts[..i].contains(s) {
                return Err(Error::InvalidMemory("shifts must be distinct"));
            }
        }
        Ok(Self { shifts })
    }

    /// `[0]`: the sample itself.
    pub fn memoryless() -> Self {
        Self { shifts: alloc::vec![0] }
    }

    /// `[-half, ..., half]`.
    pub fn symmetric(half: i64) -> Self {
        Self {
            shifts: (-half..=half).collect(),
        }
    }

    /// `[-depth, ..., 0]`.
    pub fn one_sided(depth: i64) -> Self {
        Self {
            shifts: (-depth..=0).collect(),
        }
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Number of real variables in the embedded window.
    pub fn real_dim(&self) -> usize {
        2 * self.shifts.len()
    }
}

impl TryFrom<Vec<i64>> for MemorySpec {
    type Error = Error;

    fn try_from(shifts: Vec<i64>) -> Result<Self> {
        Self::new(shifts)
    }
}

impl From<MemorySpec> for Vec<i64> {
    fn from(m: MemorySpec) -> Self {
        m.shifts
    }
}

/// Odd polynomial degrees `{1, 3, ..., d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "usize", into = "usize"))]
pub struct DegreeSet {
    max_degree: usize,
}

impl DegreeSet {
    pub fn up_to(max_degree: usize) -> Result<Self> {
        if max_degree == 0 || max_degree.is_multiple_of(2) {
            return Err(Error::InvalidDegree(max_degree));
        }
        Ok(Self { max_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + Clone {
        (1..=self.max_degree).step_by(2)
    }

    pub fn len(&self) -> usize {
        self.max_degree.div_ceil(2)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: usize) -> bool {
        k % 2 == 1 && k <= self.max_degree
    }
}

impl TryFrom<usize> for DegreeSet {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        Self::up_to(d)
    }
}

impl From<DegreeSet> for usize {
    fn from(d: DegreeSet) -> Self {
        d.max_degree
    }
}
