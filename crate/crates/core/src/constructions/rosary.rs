//! Monomial bases of the rosary: the bicanonical families with their
//! vanishing certificate, and the canonical pair `B+` / `B-` together with
//! the threshold decision (certificate for `g <= 2m+1`, destabilizer for
//! `g >= 2m+3`).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::basiskit::{CertEntry, CertMode, Certificate, MbExpr, WeightForm};
use crate::models::{CurveModel, ModelKind, Monomial, VarBlock};
use crate::ratlin::{QVec, Rat};

use super::{invalid, ConstructionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rosary2Family {
    B1Plus,
    B2Plus,
    B1Minus,
    B2Minus,
}

impl Rosary2Family {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "B1plus" => Rosary2Family::B1Plus,
            "B2plus" => Rosary2Family::B2Plus,
            "B1minus" => Rosary2Family::B1Minus,
            "B2minus" => Rosary2Family::B2Minus,
            _ => return None,
        })
    }
}

struct V {
    nv: usize,
    n: u32, // number of components, g - 1
}

impl V {
    fn x(&self, i: u32) -> usize {
        (i % self.n) as usize
    }
    fn y(&self, i: u32) -> usize {
        (self.n + i % self.n) as usize
    }
    fn z(&self, i: u32) -> usize {
        (2 * self.n + i % self.n) as usize
    }
}

fn mono(v: &V, factors: &[(usize, u32)]) -> Monomial {
    let mut exps = vec![0u32; v.nv];
    for &(var, e) in factors {
        exps[var] += e;
    }
    Monomial::from_exps(exps)
}

/// `S0 = {x_i^m, x_i^{m-1} y_i}`.
fn s0(v: &V, m: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in 0..v.n {
        out.push(mono(v, &[(v.x(i), m)]));
        out.push(mono(v, &[(v.x(i), m - 1), (v.y(i), 1)]));
    }
    out
}

/// `S1`: the x/z monomials realizing the nonzero weights with the fewest y's.
fn s1(v: &V, m: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in 0..v.n {
        for d in 1..m {
            out.push(mono(v, &[(v.x(i), d), (v.z(i), m - d)]));
            out.push(mono(v, &[(v.x(i), d), (v.z(i + 1), m - d)]));
        }
        for d in 0..=m - 2 {
            out.push(mono(v, &[(v.x(i), d), (v.y(i), 1), (v.z(i), m - d - 1)]));
            out.push(mono(v, &[(v.x(i), d), (v.y(i), 1), (v.z(i + 1), m - d - 1)]));
        }
    }
    out
}

/// `T1`: the weight-realizing monomials maximizing the y occurrences.
fn t1(v: &V, m: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in 0..v.n {
        for d in 0..=m - 2 {
            out.push(mono(v, &[(v.x(i), d), (v.y(i), m - d)]));
            out.push(mono(v, &[(v.x(i), d + 1), (v.y(i), m - d - 2), (v.z(i), 1)]));
        }
        for d in 2..m {
            out.push(mono(v, &[(v.y(i), d), (v.z(i), m - d)]));
            out.push(mono(v, &[(v.y(i), d), (v.z(i + 1), m - d)]));
        }
        out.push(mono(v, &[(v.y(i), 1), (v.z(i), m - 1)]));
        out.push(mono(v, &[(v.y(i), 1), (v.z(i + 1), m - 1)]));
    }
    out
}

/// Weight-zero completions `S2` / `S2'` (they coincide for odd m). For
/// `g = 3` and even `m` the degenerate `S2'` is replaced per-family by
/// `{(y0 y1)^l z_i^2, (y0 y1)^{l+1}}`.
fn s2_parts(v: &V, m: u32, g: u32, primed: bool) -> Vec<Monomial> {
    let l = (m - 1) / 2; // m odd: m = 2l+1
    if m % 2 == 1 {
        return (0..v.n)
            .map(|i| mono(v, &[(v.y(i + v.n - 1), l), (v.y(i), l), (v.z(i), 1)]))
            .collect();
    }
    let l = (m - 2) / 2;
    if g == 3 {
        let shared = mono(v, &[(v.y(0), l + 1), (v.y(1), l + 1)]);
        let zi = if primed { v.z(1) } else { v.z(0) };
        return vec![mono(v, &[(v.y(0), l), (v.y(1), l), (zi, 2)]), shared];
    }
    if primed {
        (0..v.n)
            .map(|i| mono(v, &[(v.y(i + v.n - 1), l + 1), (v.y(i), l + 1)]))
            .collect()
    } else {
        (0..v.n)
            .map(|i| mono(v, &[(v.y(i + v.n - 1), l), (v.y(i), l), (v.z(i), 2)]))
            .collect()
    }
}

pub fn rosary2_family(
    model: &CurveModel,
    m: u32,
    fam: Rosary2Family,
) -> Result<MbExpr, ConstructionError> {
    if model.kind() != ModelKind::RosaryBicanonical {
        return Err(invalid("rosary2 families require a bicanonical rosary model"));
    }
    if m < 2 {
        return Err(invalid("rosary2 families require m >= 2"));
    }
    let g = model.genus();
    let v = V {
        nv: model.num_vars(),
        n: g - 1,
    };
    let mut monos: Vec<Monomial> = s0(&v, m);
    match fam {
        Rosary2Family::B1Plus | Rosary2Family::B2Plus => monos.extend(s1(&v, m)),
        Rosary2Family::B1Minus | Rosary2Family::B2Minus => monos.extend(t1(&v, m)),
    }
    let primed = matches!(fam, Rosary2Family::B2Plus | Rosary2Family::B2Minus);
    monos.extend(s2_parts(&v, m, g, primed));
    let set: BTreeSet<Monomial> = monos.into_iter().collect();
    let want = model.hilbert_dim(m);
    if set.len() != want {
        return Err(ConstructionError::MemberCheck(format!(
            "{fam:?} has {} monomials, expected {want}",
            set.len()
        )));
    }
    Ok(MbExpr::leaf(set.into_iter().collect()))
}

/// Block-sum covector `aX + bY + cZ`.
pub fn block_form(model: &CurveModel, a: i64, b: i64, c: i64) -> WeightForm {
    let mut f = WeightForm::zero(model.num_vars());
    for (i, v) in model.vars().iter().enumerate() {
        f.coeffs[i] = Rat::int(match v.block {
            VarBlock::X | VarBlock::Omega => a,
            VarBlock::Y => b,
            VarBlock::Z | VarBlock::Eta => c,
        });
    }
    f
}

/// The certificate `{(m^2-m) (B1+ , B2+), (2m^2-5m+3) (B1-, B2-)}`,
/// vanishing on the hyperplane.
pub fn rosary2_certificate(model: &CurveModel, m: u32) -> Result<Certificate, ConstructionError> {
    let g = model.genus();
    let cp = Rat::int((m as i64) * (m as i64) - m as i64);
    let cm = Rat::int(2 * (m as i64) * (m as i64) - 5 * m as i64 + 3);
    let ctx = model.mb_ctx();
    let mut entries = Vec::new();
    for (fam, c) in [
        (Rosary2Family::B1Plus, &cp),
        (Rosary2Family::B2Plus, &cp),
        (Rosary2Family::B1Minus, &cm),
        (Rosary2Family::B2Minus, &cm),
    ] {
        let expr = rosary2_family(model, m, fam)?;
        entries.push(CertEntry {
            coefficient: c.clone(),
            family: format!("rosary2:{fam:?}"),
            params: serde_json::json!({"g": g, "m": m}),
            form: expr.weight_form(&ctx),
            expr: Some(expr),
        });
    }
    Ok(Certificate {
        mode: CertMode::Semistable,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rosary1Family {
    BPlus,
    BMinus,
}

impl Rosary1Family {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Bplus" => Rosary1Family::BPlus,
            "Bminus" => Rosary1Family::BMinus,
            _ => return None,
        })
    }
}

pub fn rosary1_family(
    model: &CurveModel,
    m: u32,
    fam: Rosary1Family,
) -> Result<MbExpr, ConstructionError> {
    if model.kind() != ModelKind::RosaryCanonical {
        return Err(invalid("rosary1 families require a canonical rosary model"));
    }
    if m < 2 {
        return Err(invalid("rosary1 families require m >= 2"));
    }
    let g = model.genus();
    let n = g - 1;
    let nv = model.num_vars();
    let om = |i: u32| model.block_var(VarBlock::Omega, i % n);
    let eta = model.block_var(VarBlock::Eta, 0);
    let mk = |factors: &[(usize, u32)]| {
        let mut exps = vec![0u32; nv];
        for &(var, e) in factors {
            exps[var] += e;
        }
        Monomial::from_exps(exps)
    };
    let mut set = BTreeSet::new();
    for i in 0..n {
        let prev = om(i + n - 1);
        let cur = om(i);
        set.insert(mk(&[(cur, m)]));
        set.insert(mk(&[(cur, m - 1), (eta, 1)]));
        match fam {
            Rosary1Family::BPlus => {
                // eta appears as seldom as possible
                for d in 1..=(m - 1) / 2 {
                    set.insert(mk(&[(cur, m - d), (prev, d)]));
                    set.insert(mk(&[(cur, d), (prev, m - d)]));
                }
                for d in 1..=m.saturating_sub(2) / 2 {
                    set.insert(mk(&[(cur, m - d - 1), (prev, d), (eta, 1)]));
                    set.insert(mk(&[(cur, d), (prev, m - d - 1), (eta, 1)]));
                }
                if m % 2 == 0 {
                    set.insert(mk(&[(cur, m / 2), (prev, m / 2)]));
                } else {
                    set.insert(mk(&[(cur, (m - 1) / 2), (prev, (m - 1) / 2), (eta, 1)]));
                }
            }
            Rosary1Family::BMinus => {
                // eta appears as often as possible
                for d in 1..=m.saturating_sub(2) {
                    set.insert(mk(&[(cur, d), (eta, m - d)]));
                    set.insert(mk(&[(cur, 1), (prev, d + 1), (eta, m - d - 2)]));
                }
                set.insert(mk(&[(cur, 1), (prev, 1), (eta, m - 2)]));
            }
        }
    }
    let want = model.hilbert_dim(m);
    if set.len() != want {
        return Err(ConstructionError::MemberCheck(format!(
            "{fam:?} has {} monomials, expected {want}",
            set.len()
        )));
    }
    Ok(MbExpr::leaf(set.into_iter().collect()))
}

/// Closed-form weight multiples of `W = sum of omega coefficients` on the
/// hyperplane: `B+` gives `2m^2-2m+1-(m-1)(g-1)`, `B-` gives
/// `m^2+m-1-(m-1)^2(g-1)`.
pub fn rosary1_w_multiple(g: u32, m: u32, fam: Rosary1Family) -> i64 {
    let g = g as i64;
    let m = m as i64;
    match fam {
        Rosary1Family::BPlus => 2 * m * m - 2 * m + 1 - (m - 1) * (g - 1),
        Rosary1Family::BMinus => m * m + m - 1 - (m - 1) * (m - 1) * (g - 1),
    }
}

/// Outcome of the canonical-rosary threshold decision.
#[derive(Debug)]
pub enum Rosary1Outcome {
    /// `g <= 2m+1`, away from the degenerate pair: the explicit certificate.
    Certificate(Certificate),
    /// `(g, m) = (5, 2)`: both closed forms coincide and an engine-found
    /// certificate is recorded instead.
    EngineCertificate(crate::engine::Verdict),
    /// `g >= 2m+3`: the canonical destabilizer with its verified min weight.
    Destabilizer {
        rho: QVec,
        min_weight: Rat,
        bound: Rat,
    },
}

pub fn rosary1_decide(model: &CurveModel, m: u32) -> Result<Rosary1Outcome, ConstructionError> {
    if model.kind() != ModelKind::RosaryCanonical {
        return Err(invalid("rosary1 decision requires a canonical rosary model"));
    }
    if m < 2 {
        return Err(invalid("rosary1 decision requires m >= 2"));
    }
    let g = model.genus();
    if g <= 2 * m + 1 {
        if (g, m) == (5, 2) {
            let verdict = crate::engine::decide(model, m, &crate::engine::Budget::default())
                .map_err(|e| ConstructionError::Engine(e.to_string()))?;
            return Ok(Rosary1Outcome::EngineCertificate(verdict));
        }
        let a = rosary1_w_multiple(g, m, Rosary1Family::BPlus);
        let b = rosary1_w_multiple(g, m, Rosary1Family::BMinus);
        assert!(a > 0 && b < 0, "degenerate multiples outside (5,2)");
        let ctx = model.mb_ctx();
        let mut entries = Vec::new();
        for (fam, c) in [
            (Rosary1Family::BPlus, Rat::int(-b)),
            (Rosary1Family::BMinus, Rat::int(a)),
        ] {
            let expr = rosary1_family(model, m, fam)?;
            entries.push(CertEntry {
                coefficient: c,
                family: format!("rosary1:{fam:?}"),
                params: serde_json::json!({"g": g, "m": m}),
                form: expr.weight_form(&ctx),
                expr: Some(expr),
            });
        }
        return Ok(Rosary1Outcome::Certificate(Certificate {
            mode: CertMode::Semistable,
            entries,
        }));
    }
    // g >= 2m+3: weight -1 on every omega, g-1 on eta destabilizes
    let nv = model.num_vars();
    let mut rho: QVec = vec![-Rat::one(); nv];
    rho[model.block_var(VarBlock::Eta, 0)] = Rat::int(g as i64 - 1);
    let (_, min_weight) = crate::engine::greedy_min_basis(model, m, &rho)
        .map_err(|e| ConstructionError::Engine(e.to_string()))?;
    let bound = Rat::int((g as i64 - 1) * (2 * m as i64 - 3));
    assert!(
        min_weight >= bound,
        "destabilizer weight {min_weight} below the proven bound {bound}"
    );
    Ok(Rosary1Outcome::Destabilizer {
        rho,
        min_weight,
        bound,
    })
}
