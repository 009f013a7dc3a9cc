use core::fmt;

use serde::Serialize;

/// An exact count ratio. A zero denominator means "not applicable".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Ratio {
            numerator,
            denominator,
        }
    }

    pub fn is_defined(&self) -> bool {
        self.denominator != 0
    }

    pub fn value(&self) -> Option<f64> {
        self.is_defined()
            .then(|| self.numerator as f64 / self.denominator as f64)
    }

    pub fn percent(&self) -> Option<f64> {
        self.value().map(|v| v * 100.0)
    }

    /// Exact comparison of two ratios by cross multiplication.
    pub fn cmp_value(&self, other: &Ratio) -> core::cmp::Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl core::ops::Add for Ratio {
    type Output = Ratio;

    /// Pools counts, e.g. per-document ratios into a dataset ratio.
    fn add(self, rhs: Ratio) -> Ratio {
        Ratio::new(
            self.numerator + rhs.numerator,
            self.denominator + rhs.denominator,
        )
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}
