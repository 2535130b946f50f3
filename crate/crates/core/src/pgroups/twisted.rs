//! Divisibility of exponents in twisted power equations `ω^a = ξ ω^b ξ⁻¹`.

use std::collections::HashMap;

use super::{GroupExpr, PElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPowerReport {
    /// Whether every solution in range had both exponents divisible by `p^{e+1}`.
    pub holds: bool,
    /// Number of solutions `(a, b)` found in range.
    pub solutions: usize,
    pub counterexample: Option<(i64, i64)>,
}

/// Checks that every solution of `ω^a = ξ ω^b ξ⁻¹` with `|a|, |b| ≤ bound`
/// has `p^{e+1}` dividing both `a` and `b`.
///
/// The hypothesis `[ω^{p^r}, ξ ω^{p^r} ξ⁻¹] ≠ 1` for `0 ≤ r ≤ e` is checked
/// first; a failure is reported as [`Error::Hypothesis`] naming `r`.
pub fn lemma49_check(
    group: &GroupExpr,
    p: u32,
    omega: &PElement,
    xi: &PElement,
    e: u32,
    bound: i64,
) -> Result<TwistedPowerReport> {
    group.check(omega)?;
    group.check(xi)?;
    let mut pr: i64 = 1;
    for r in 0..=e {
        let w = group.pow(omega, pr);
        let twisted = group.conjugate(xi, &w);
        if group.is_identity(&group.commutator(&w, &twisted)) {
            return Err(Error::Hypothesis(format!("[w^(p^{r}), xi w^(p^{r}) xi^-1] = 1 at r = {r}")));
        }
        pr = pr.checked_mul(p as i64).ok_or_else(|| Error::cap("exponent p^r", i64::MAX as usize))?;
    }
    let modulus = pr;
    let mut powers: HashMap<PElement, Vec<i64>> = HashMap::new();
    for a in -bound..=bound {
        powers.entry(group.pow(omega, a)).or_default().push(a);
    }
    let mut report = TwistedPowerReport { holds: true, solutions: 0, counterexample: None };
    for b in -bound..=bound {
        let rhs = group.conjugate(xi, &group.pow(omega, b));
        if let Some(avals) = powers.get(&rhs) {
            for &a in avals {
                report.solutions += 1;
                if (a % modulus != 0 || b % modulus != 0) && report.counterexample.is_none() {
                    report.holds = false;
                    report.counterexample = Some((a, b));
                }
            }
        }
    }
    Ok(report)
}
