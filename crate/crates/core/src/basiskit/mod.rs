//! Monomial-basis candidates, symbolic weight forms, multibasis expression
//! trees, and certificate verification.

mod cert;
mod expr;

pub use cert::{verify_certificate, CertEntry, CertError, CertMode, CertVerdict, Certificate};
pub use expr::{
    sum_checked, verify_multibasis, MbCtx, MbError, MbExpr, MemberFailure, MultibasisReport,
    RncSpace, SectionSpace,
};

use serde::{Deserialize, Serialize};

use crate::models::{CurveModel, Monomial};
use crate::ratlin::{center, EchelonState, Insert, QVec, Rat};

/// An ordered multiset of degree-`m` monomials proposed as a monomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCandidate {
    monomials: Vec<Monomial>,
}

impl BasisCandidate {
    /// Monomials are sorted on construction; repeats are kept (a repeated
    /// monomial is reported as a dependent pair, not silently dropped).
    pub fn new(mut monomials: Vec<Monomial>) -> Self {
        monomials.sort();
        BasisCandidate { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn union(&self, other: &BasisCandidate) -> BasisCandidate {
        let mut m = self.monomials.clone();
        m.extend(other.monomials.iter().cloned());
        BasisCandidate::new(m)
    }

    /// Common degree of the members, or `None` when degrees are mixed.
    pub fn uniform_degree(&self) -> Option<u32> {
        let d = self.monomials.first()?.degree();
        self.monomials
            .iter()
            .all(|m| m.degree() == d)
            .then_some(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisVerdict {
    Basis,
    MixedDegrees,
    WrongCardinality { got: usize, want: usize },
    /// A minimal dependent subset (a circuit of the image matroid).
    Dependent { circuit: Vec<Monomial> },
}

impl BasisVerdict {
    pub fn is_basis(&self) -> bool {
        matches!(self, BasisVerdict::Basis)
    }
}

/// Decides whether the candidate restricts to a basis of the degree-`m`
/// section space: the cardinality must equal `hilbert_dim` and the monomial
/// images must have full rank. On dependence the witness is the unique
/// circuit supported on the rejected vector and the accepted ones it lies on.
pub fn is_monomial_basis(model: &CurveModel, m: u32, cand: &BasisCandidate) -> BasisVerdict {
    match cand.uniform_degree() {
        Some(d) if d == m => {}
        _ => return BasisVerdict::MixedDegrees,
    }
    let want = model.hilbert_dim(m);
    if cand.len() != want {
        return BasisVerdict::WrongCardinality {
            got: cand.len(),
            want,
        };
    }
    let dim = model.degree_ctx(m).axes.len();
    let mut st = EchelonState::new(dim);
    let mut accepted: Vec<&Monomial> = Vec::new();
    for mono in cand.monomials() {
        let img = model.image(mono);
        match st.try_insert(&img.coords).expect("dimension fixed") {
            Insert::Accepted => accepted.push(mono),
            Insert::Rejected => {
                let circuit = dependence_circuit(model, &accepted, mono);
                return BasisVerdict::Dependent { circuit };
            }
        }
    }
    BasisVerdict::Basis
}

/// The rejected monomial together with the accepted monomials carrying its
/// (unique) representation; minimal because the accepted set is independent.
fn dependence_circuit(
    model: &CurveModel,
    accepted: &[&Monomial],
    rejected: &Monomial,
) -> Vec<Monomial> {
    let v = model.image(rejected);
    let dim = v.coords.len();
    // columns = accepted vectors, solve A x = v
    let a: Vec<QVec> = (0..dim)
        .map(|row| accepted.iter().map(|m| model.image(m).coords[row].clone()).collect())
        .collect();
    let mut circuit = vec![rejected.clone()];
    if let Some((x, _)) = crate::ratlin::solve_linear(&a, &v.coords) {
        for (mono, c) in accepted.iter().zip(&x) {
            if !c.is_zero() {
                circuit.push((*mono).clone());
            }
        }
    }
    circuit.sort();
    circuit
}

/// Rational covector in the torus variables: the symbolic weight
/// `w_rho = sum_i coeffs[i] * rho_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightForm {
    pub coeffs: QVec,
}

impl WeightForm {
    pub fn zero(n: usize) -> Self {
        WeightForm {
            coeffs: crate::ratlin::zeros(n),
        }
    }

    /// Indicator covector of one variable.
    pub fn unit(n: usize, var: usize) -> Self {
        let mut f = WeightForm::zero(n);
        f.coeffs[var] = Rat::one();
        f
    }

    pub fn ones(n: usize) -> Self {
        WeightForm {
            coeffs: vec![Rat::one(); n],
        }
    }

    /// Occurrence count of every variable across the candidate.
    pub fn of_candidate(n: usize, cand: &BasisCandidate) -> Self {
        let mut f = WeightForm::zero(n);
        for mono in cand.monomials() {
            for (v, e) in mono.iter_factors() {
                f.coeffs[v] += Rat::int(e as i64);
            }
        }
        f
    }

    pub fn of_monomial(n: usize, mono: &Monomial) -> Self {
        let mut f = WeightForm::zero(n);
        for (v, e) in mono.iter_factors() {
            f.coeffs[v] = Rat::int(e as i64);
        }
        f
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &WeightForm) -> WeightForm {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        WeightForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &WeightForm) -> WeightForm {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> WeightForm {
        WeightForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn dot(&self, rho: &[Rat]) -> Rat {
        crate::ratlin::dot(&self.coeffs, rho)
    }

    /// Canonical representative modulo the all-ones covector: subtract the
    /// mean coefficient. Two forms agree on the trace-zero hyperplane iff
    /// their canonical representatives are equal.
    pub fn canonical(&self) -> WeightForm {
        WeightForm {
            coeffs: center(&self.coeffs),
        }
    }

    pub fn eq_on_hyperplane(&self, other: &WeightForm) -> bool {
        self.canonical() == other.canonical()
    }

    /// Whether the form is a multiple of the all-ones covector, i.e. vanishes
    /// on the trace-zero hyperplane.
    pub fn is_constant(&self) -> bool {
        self.coeffs.windows(2).all(|w| w[0] == w[1])
    }

    /// The exact factor `c` with `self = c * other` on the hyperplane, if one
    /// exists (`other` must not vanish there).
    pub fn hyperplane_multiple_of(&self, other: &WeightForm) -> Option<Rat> {
        let a = self.canonical();
        let b = other.canonical();
        let pivot = b.coeffs.iter().position(|x| !x.is_zero())?;
        let c = &a.coeffs[pivot] / &b.coeffs[pivot];
        (a == b.scale(&c)).then_some(c)
    }
}

#[cfg(test)]
mod tests;
