//! Truncated integer power series in `q`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// `c_0 + c_1 q + ... + c_L q^L`, known up to degree `L = coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<i128>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<i128>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        PowerSeries { coeffs }
    }

    pub fn zero(lmax: usize) -> Self {
        PowerSeries {
            coeffs: vec![0; lmax + 1],
        }
    }

    pub fn constant(c: i128, lmax: usize) -> Self {
        let mut s = Self::zero(lmax);
        s.coeffs[0] = c;
        s
    }

    pub fn lmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> i128 {
        self.coeffs.get(l).copied().unwrap_or(0)
    }

    pub fn truncate(&self, lmax: usize) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs[..=lmax.min(self.lmax())].to_vec(),
        }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let l = self.lmax().min(other.lmax());
        PowerSeries {
            coeffs: (0..=l).map(|i| self.coeffs[i] + other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let l = self.lmax().min(other.lmax());
        PowerSeries {
            coeffs: (0..=l).map(|i| self.coeffs[i] - other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let l = self.lmax().min(other.lmax());
        let coeffs = (0..=l)
            .map(|i| (0..=i).map(|j| self.coeffs[j] * other.coeffs[i - j]).sum())
            .collect();
        PowerSeries { coeffs }
    }
}

/// Coefficientwise equality up to the smaller truncation degree.
pub fn series_equal(a: &PowerSeries, b: &PowerSeries) -> bool {
    let l = a.lmax().min(b.lmax());
    a.coeffs[..=l] == b.coeffs[..=l]
}

/// First degree at which two series differ, if any.
pub fn first_difference(a: &PowerSeries, b: &PowerSeries) -> Option<usize> {
    let l = a.lmax().min(b.lmax());
    (0..=l).find(|&i| a.coeffs[i] != b.coeffs[i])
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a == 1 => {}
                _ => write!(f, "{a}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{i}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.lmax() + 1)
    }
}
