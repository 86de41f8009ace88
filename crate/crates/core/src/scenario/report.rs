use std::fmt;

/// A named scalar compared against a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    /// `true`: pass when `value <= bound`; `false`: pass when `value >= bound`.
    pub upper: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, bound, upper: true }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, bound, upper: false }
    }

    pub fn passed(&self) -> bool {
        if self.upper {
            self.value <= self.bound
        } else {
            self.value >= self.bound
        }
    }

    /// Distance to the bound, positive when passing.
    pub fn margin(&self) -> f64 {
        if self.upper {
            self.bound - self.value
        } else {
            self.value - self.bound
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.upper { "<=" } else { ">=" };
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {:e} {op} {:e}", self.name, self.value, self.bound)
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
