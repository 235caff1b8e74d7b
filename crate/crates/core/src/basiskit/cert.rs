//! Covering-lemma certificates: positive combinations of basis weight forms
//! whose total vanishes on the trace-zero hyperplane (semistable mode) or
//! reduces to a positive multiple of a single coordinate (stable-pointed
//! mode).

use serde::{Deserialize, Serialize};

use crate::ratlin::Rat;

use super::{MbExpr, WeightForm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMode {
    Semistable,
    StablePointed { var: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertEntry {
    pub coefficient: Rat,
    /// Family identifier, e.g. `"ribbon:Bminus"` or `"engine:cut"`.
    pub family: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
    /// Raw weight form of the entry's family.
    pub form: WeightForm,
    /// The expression the form was computed from, when available; not part
    /// of the wire format (reconstructible from family + params).
    #[serde(skip)]
    pub expr: Option<MbExpr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub mode: CertMode,
    pub entries: Vec<CertEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("certificate coefficient {0} is not positive")]
    NonpositiveCoefficient(Rat),
    #[error("certificate entry forms disagree on variable count")]
    Shape,
}

/// Verification result; `residual` is the canonical hyperplane representative
/// of the combined form minus its target, exact and zero iff `ok`.
#[derive(Debug, Clone, Serialize)]
pub struct CertVerdict {
    pub ok: bool,
    pub residual: WeightForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointed_multiple: Option<Rat>,
}

impl Certificate {
    pub fn combined_form(&self) -> Result<WeightForm, CertError> {
        let n = self
            .entries
            .first()
            .map(|e| e.form.num_vars())
            .unwrap_or(0);
        let mut acc = WeightForm::zero(n);
        for e in &self.entries {
            if !e.coefficient.is_positive() {
                return Err(CertError::NonpositiveCoefficient(e.coefficient.clone()));
            }
            if e.form.num_vars() != n {
                return Err(CertError::Shape);
            }
            acc = acc.add(&e.form.scale(&e.coefficient));
        }
        Ok(acc)
    }
}

/// Checks the covector identity of a certificate.
///
/// Semistable mode: the combination must be an exact multiple of the all-ones
/// covector. Stable-pointed mode: on the hyperplane it must reduce to
/// `eps * rho_v` with `eps > 0`.
pub fn verify_certificate(cert: &Certificate) -> Result<CertVerdict, CertError> {
    let combined = cert.combined_form()?;
    let n = combined.num_vars();
    match &cert.mode {
        CertMode::Semistable => {
            let ok = combined.is_constant();
            Ok(CertVerdict {
                ok,
                residual: combined.canonical(),
                pointed_multiple: None,
            })
        }
        CertMode::StablePointed { var } => {
            let target = WeightForm::unit(n, *var);
            let eps = combined.hyperplane_multiple_of(&target);
            match eps {
                Some(e) if e.is_positive() => Ok(CertVerdict {
                    ok: true,
                    residual: WeightForm::zero(n),
                    pointed_multiple: Some(e),
                }),
                _ => Ok(CertVerdict {
                    ok: false,
                    residual: combined.canonical(),
                    pointed_multiple: eps,
                }),
            }
        }
    }
}
