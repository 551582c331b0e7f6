use std::fmt;

use super::OrderingPlan;

/// Why a permutation is not a bijection on `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanViolation {
    pub expected_len: usize,
    pub actual_len: usize,
    pub first_duplicate: Option<usize>,
    pub first_missing: Option<usize>,
    pub first_out_of_range: Option<usize>,
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a permutation of [0, {})", self.expected_len)?;
        if self.actual_len != self.expected_len {
            write!(f, "; length {}", self.actual_len)?;
        }
        if let Some(d) = self.first_duplicate {
            write!(f, "; duplicate {d}")?;
        }
        if let Some(m) = self.first_missing {
            write!(f, "; missing {m}")?;
        }
        if let Some(o) = self.first_out_of_range {
            write!(f, "; out of range {o}")?;
        }
        Ok(())
    }
}

impl std::error::Error for PlanViolation {}

pub fn validate_permutation(permutation: &[usize], n: usize) -> Result<(), PlanViolation> {
    let mut seen = vec![false; n];
    let mut first_duplicate = None;
    let mut first_out_of_range = None;
    for &i in permutation {
        if i >= n {
            first_out_of_range.get_or_insert(i);
        } else if seen[i] {
            first_duplicate.get_or_insert(i);
        } else {
            seen[i] = true;
        }
    }
    let first_missing = seen.iter().position(|&s| !s);
    if permutation.len() == n
        && first_duplicate.is_none()
        && first_missing.is_none()
        && first_out_of_range.is_none()
    {
        return Ok(());
    }
    Err(PlanViolation {
        expected_len: n,
        actual_len: permutation.len(),
        first_duplicate,
        first_missing,
        first_out_of_range,
    })
}

/// Checks that the plan is a bijection on `[0, n)`.
pub fn validate_plan(plan: &OrderingPlan, n: usize) -> Result<(), PlanViolation> {
    validate_permutation(&plan.permutation, n)
}

/// Checks that the plan places distinct indices from `[0, n)`, without
/// requiring every index. Plans that dropped uncovered samples pass this
/// but not [`validate_plan`].
pub fn validate_selection(plan: &OrderingPlan, n: usize) -> Result<(), PlanViolation> {
    match validate_permutation(&plan.permutation, n) {
        Err(v)
            if v.first_duplicate.is_some()
                || v.first_out_of_range.is_some()
                || v.actual_len > n =>
        {
            Err(v)
        }
        _ => Ok(()),
    }
}
