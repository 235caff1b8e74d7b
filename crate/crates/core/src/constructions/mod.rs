//! Explicit basis families and certificates for the four curve families,
//! with closed-form expected weight forms.

pub mod acurve;
pub mod ribbon;
pub mod rosary;
pub mod wiman;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::basiskit::WeightForm;
use crate::ratlin::{solve_linear, QVec, Rat};

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("{0}")]
    InvalidParams(String),
    #[error("no positive solution for certificate coefficients")]
    NoPositiveSolution,
    #[error("pointing parameter out of feasible range: {0}")]
    PointingInfeasible(String),
    #[error("family members failed verification: {0}")]
    MemberCheck(String),
    #[error("engine error: {0}")]
    Engine(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParams(msg.into())
}

/// Solves `sum_i x_i * cols_i = target` exactly and returns a positive
/// solution (strictly positive when `strict`), when one exists.
pub(crate) fn solve_positive_combination(
    cols: &[WeightForm],
    target: &WeightForm,
    strict: bool,
) -> Option<QVec> {
    let n = target.num_vars();
    let a: Vec<QVec> = (0..n)
        .map(|row| cols.iter().map(|c| c.coeffs[row].clone()).collect())
        .collect();
    let (particular, nullspace) = solve_linear(&a, &target.coeffs)?;
    make_positive(&particular, &nullspace, strict)
}

/// Finds a point of `p + span(null)` with positive coordinates.
pub(crate) fn make_positive(p: &[Rat], null: &[QVec], strict: bool) -> Option<QVec> {
    let ok = |v: &[Rat]| {
        v.iter()
            .all(|x| if strict { x.is_positive() } else { !x.is_negative() })
    };
    match null.len() {
        0 => ok(p).then(|| p.to_vec()),
        1 => {
            // exact feasibility interval for p + t * null[0]
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            for (pi, ni) in p.iter().zip(&null[0]) {
                if ni.is_zero() {
                    if pi.is_negative() || (strict && pi.is_zero()) {
                        return None;
                    }
                } else {
                    let bound = -(pi / ni);
                    if ni.is_positive() {
                        if lo.as_ref().map_or(true, |l| bound > *l) {
                            lo = Some(bound);
                        }
                    } else if hi.as_ref().map_or(true, |h| bound < *h) {
                        hi = Some(bound);
                    }
                }
            }
            let t = match (&lo, &hi) {
                (Some(l), Some(h)) => {
                    if l > h || (strict && l == h) {
                        return None;
                    }
                    (l + h) / Rat::int(2)
                }
                (Some(l), None) => l + Rat::one(),
                (None, Some(h)) => h - Rat::one(),
                (None, None) => Rat::zero(),
            };
            let v: QVec = p
                .iter()
                .zip(&null[0])
                .map(|(pi, ni)| pi + &(ni * &t))
                .collect();
            ok(&v).then_some(v)
        }
        _ => {
            // small deterministic grid; degenerate systems in this domain
            // have at most two free parameters
            let grid = [
                Rat::zero(),
                Rat::new(1, 2),
                -Rat::new(1, 2),
                Rat::one(),
                -Rat::one(),
                Rat::new(1, 4),
                -Rat::new(1, 4),
                Rat::int(2),
                -Rat::int(2),
            ];
            let mut stack = vec![p.to_vec()];
            for dir in null {
                let mut next = Vec::new();
                for base in &stack {
                    for t in &grid {
                        next.push(
                            base.iter()
                                .zip(dir)
                                .map(|(b, d)| b + &(d * t))
                                .collect::<QVec>(),
                        );
                    }
                }
                stack = next;
            }
            stack.into_iter().find(|v| ok(v))
        }
    }
}

/// Scales a positive rational vector to coprime integers.
pub(crate) fn clear_denominators(v: &[Rat]) -> QVec {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * &lcm / x.denom())
        .collect();
    let mut gcd = BigInt::from(0);
    for s in &scaled {
        gcd = gcd.gcd(s);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    scaled
        .into_iter()
        .map(|s| Rat::from_bigint(s / &gcd))
        .collect()
}

#[cfg(test)]
mod tests;
