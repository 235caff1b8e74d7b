//! Monomial bases of the balanced ribbon and their vanishing certificates.
//!
//! Degree 2 uses the pair `B+` / `B-`; degree `m >= 3` uses the ideal-defined
//! bases `B1+`, `B2+` and the six-piece basis `B-` whose shape depends on the
//! parities of `m` and `k`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::basiskit::{CertEntry, CertMode, Certificate, MbExpr, WeightForm};
use crate::models::{CurveModel, ModelKind, Monomial};
use crate::ratlin::Rat;

use super::{clear_denominators, invalid, solve_positive_combination, ConstructionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RibbonFamily {
    /// Quadratic monomials divisible by one of `x0`, `xk`, `y2k`.
    BPlus2,
    /// The complementary quadratic basis.
    BMinus2,
    B1Plus,
    B2Plus,
    BMinus,
}

impl RibbonFamily {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Bplus2" => RibbonFamily::BPlus2,
            "Bminus2" => RibbonFamily::BMinus2,
            "B1plus" => RibbonFamily::B1Plus,
            "B2plus" => RibbonFamily::B2Plus,
            "Bminus" => RibbonFamily::BMinus,
            _ => return None,
        })
    }
}

fn check_model(model: &CurveModel) -> Result<(), ConstructionError> {
    if model.kind() != ModelKind::Ribbon {
        return Err(invalid("ribbon families require a ribbon model"));
    }
    Ok(())
}

/// Variable position of `x_i` is `i` and of `y_j` is `j`; the involution
/// exchanging `x_i` and `y_{2k-i}` is position reflection.
struct V {
    n: usize,
    k: u32,
}

impl V {
    fn x(&self, i: u32) -> usize {
        debug_assert!(i <= self.k);
        i as usize
    }
    fn y(&self, j: u32) -> usize {
        debug_assert!(j > self.k && j <= 2 * self.k);
        j as usize
    }
    fn iota(&self, mono: &Monomial) -> Monomial {
        let mut exps = vec![0u32; self.n];
        for (v, e) in mono.iter_factors() {
            exps[self.n - 1 - v] += e;
        }
        Monomial::from_exps(exps)
    }
}

fn mono(v: &V, factors: &[(usize, u32)]) -> Monomial {
    let mut exps = vec![0u32; v.n];
    for &(var, e) in factors {
        exps[var] += e;
    }
    Monomial::from_exps(exps)
}

pub fn ribbon_family(
    model: &CurveModel,
    m: u32,
    fam: RibbonFamily,
) -> Result<MbExpr, ConstructionError> {
    check_model(model)?;
    let k = model.k_param();
    let v = V {
        n: model.num_vars(),
        k,
    };
    let monos = match fam {
        RibbonFamily::BPlus2 | RibbonFamily::BMinus2 => {
            if m != 2 {
                return Err(invalid("quadratic ribbon families require m = 2"));
            }
            if fam == RibbonFamily::BPlus2 {
                b_plus_2(&v)
            } else {
                b_minus_2(&v)
            }
        }
        _ => {
            if m < 3 {
                return Err(invalid("higher ribbon families require m >= 3"));
            }
            match fam {
                RibbonFamily::B1Plus => b1_plus(&v, m),
                RibbonFamily::B2Plus => b2_plus(&v, m),
                RibbonFamily::BMinus => b_minus(&v, m),
                _ => unreachable!(),
            }
        }
    };
    let want = model.hilbert_dim(m);
    if monos.len() != want {
        return Err(ConstructionError::MemberCheck(format!(
            "{fam:?} has {} monomials, expected {want}",
            monos.len()
        )));
    }
    Ok(MbExpr::leaf(monos.into_iter().collect()))
}

fn b_plus_2(v: &V) -> BTreeSet<Monomial> {
    let k = v.k;
    let mut s = BTreeSet::new();
    for i in 0..=k {
        s.insert(mono(v, &[(v.x(0), 1), (v.x(i), 1)]));
    }
    for j in k + 1..=2 * k {
        s.insert(mono(v, &[(v.x(0), 1), (v.y(j), 1)]));
    }
    for i in 1..=k {
        s.insert(mono(v, &[(v.x(k), 1), (v.x(i), 1)]));
    }
    for j in k + 1..=2 * k {
        s.insert(mono(v, &[(v.x(k), 1), (v.y(j), 1)]));
    }
    for i in 1..k {
        s.insert(mono(v, &[(v.y(2 * k), 1), (v.x(i), 1)]));
    }
    for j in k + 1..=2 * k {
        s.insert(mono(v, &[(v.y(2 * k), 1), (v.y(j), 1)]));
    }
    s
}

fn b_minus_2(v: &V) -> BTreeSet<Monomial> {
    let k = v.k;
    let mut s = BTreeSet::new();
    for i in 0..=k {
        s.insert(mono(v, &[(v.x(i), 2)]));
    }
    for j in k + 1..=2 * k {
        s.insert(mono(v, &[(v.y(j), 2)]));
    }
    for i in 0..k {
        s.insert(mono(v, &[(v.x(i), 1), (v.x(i + 1), 1)]));
    }
    s.insert(mono(v, &[(v.x(k), 1), (v.y(k + 1), 1)]));
    for j in k + 1..2 * k {
        s.insert(mono(v, &[(v.y(j), 1), (v.y(j + 1), 1)]));
    }
    for i in 1..k {
        s.insert(mono(v, &[(v.x(i), 1), (v.y(i + k), 1)]));
    }
    for i in 0..k {
        s.insert(mono(v, &[(v.x(i), 1), (v.y(i + k + 1), 1)]));
    }
    s
}

/// Degree-m monomials of the ideal
/// `(x0,xk)^{m-1}(all but xk) + (xk,y2k)^{m-1}(all but xk) + xk^m`:
/// exactly those with `a+b >= m-1` or `b+c >= m-1` where `a, b, c` are the
/// exponents of `x0`, `xk`, `y2k`.
fn b1_plus(v: &V, m: u32) -> BTreeSet<Monomial> {
    let k = v.k;
    let mut s = BTreeSet::new();
    for (p, q) in [(v.x(0), v.x(k)), (v.x(k), v.y(2 * k))] {
        for a in 0..=m {
            s.insert(mono(v, &[(p, a), (q, m - a)]));
        }
        for a in 0..m {
            for extra in 0..v.n {
                s.insert(mono(v, &[(p, a), (q, m - 1 - a), (extra, 1)]));
            }
        }
    }
    s
}

/// Degree-m monomials with at most one factor outside `{x0, xk, y2k}`,
/// `xk`-exponent at most 1 alongside a middle factor and at most 3 without.
fn b2_plus(v: &V, m: u32) -> BTreeSet<Monomial> {
    let k = v.k;
    let mids: Vec<usize> = (1..k)
        .map(|i| v.x(i))
        .chain((k + 1..2 * k).map(|j| v.y(j)))
        .collect();
    let mut s = BTreeSet::new();
    for b in 0..=3u32.min(m) {
        for a in 0..=m - b {
            s.insert(mono(v, &[(v.x(0), a), (v.x(k), b), (v.y(2 * k), m - b - a)]));
        }
    }
    for b in 0..=1u32 {
        for mid in &mids {
            for a in 0..=m - b - 1 {
                s.insert(mono(
                    v,
                    &[(v.x(0), a), (v.x(k), b), (v.y(2 * k), m - b - 1 - a), (*mid, 1)],
                ));
            }
        }
    }
    s
}

/// The six-piece basis `S0 ∪ ⋃(S_i ∪ ι(S_i))`; index ranges degenerate
/// gracefully for small `k` (empty sets when the defining range is empty).
fn b_minus(v: &V, m: u32) -> BTreeSet<Monomial> {
    let k = v.k;
    let l = k / 2;
    let mut base: Vec<Monomial> = Vec::new();
    let mut sym: Vec<Monomial> = Vec::new(); // completed with the involution

    // S0
    base.push(mono(v, &[(v.x(k), m)]));
    if m % 2 == 1 {
        base.push(mono(v, &[(v.x(0), 1), (v.y(2 * k), 1), (v.x(k), m - 2)]));
    } else {
        base.push(mono(v, &[(v.x(l), 1), (v.y(2 * k - l), 1), (v.x(k), m - 2)]));
    }

    // S1
    for i in 0..k {
        for d in 0..m {
            sym.push(mono(v, &[(v.x(i), m - d), (v.x(i + 1), d)]));
        }
    }

    // S2
    if l >= 2 {
        for i in 0..=l - 2 {
            for d in 0..m {
                sym.push(mono(
                    v,
                    &[(v.x(i), m - 1 - d), (v.x(i + 1), d), (v.y(i + k + 1), 1)],
                ));
            }
        }
    }
    if l >= 1 {
        for d in 0..=m - 2 {
            sym.push(mono(v, &[(v.x(l - 1), m - 1 - d), (v.x(l), d), (v.y(l + k), 1)]));
        }
    }

    // S3, split on the parity of k
    if k % 2 == 0 {
        for i in l..=k.saturating_sub(2) {
            if i < l {
                continue;
            }
            for d in 1..=m - 2 {
                sym.push(mono(
                    v,
                    &[(v.x(i), m - 1 - d), (v.x(i + 1), d), (v.y(2 * k - 1 - i), 1)],
                ));
            }
        }
    } else {
        if k >= 3 {
            for i in l..=k - 3 {
                for d in 1..=m - 2 {
                    sym.push(mono(
                        v,
                        &[(v.x(i), m - 1 - d), (v.x(i + 1), d), (v.y(2 * k - 2 - i), 1)],
                    ));
                }
            }
            for d in 0..=m - 2 {
                sym.push(mono(
                    v,
                    &[
                        (v.x(k - 2), m - 2 - d),
                        (v.x(k - 1), d),
                        (v.x(l), 1),
                        (v.y(3 * l + 1), 1),
                    ],
                ));
            }
        }
    }

    // S4 (empty for m = 3)
    if m >= 4 {
        for d in 0..=m - 4 {
            sym.push(mono(
                v,
                &[
                    (v.x(k - 1), m - 2 - d),
                    (v.x(k), d),
                    (v.x(0), 1),
                    (v.y(2 * k), 1),
                ],
            ));
        }
    }

    // S5
    if m % 2 == 1 {
        sym.push(mono(
            v,
            &[(v.x(k - 1), 1), (v.x(l), (m - 1) / 2), (v.y(2 * k - l), (m - 1) / 2)],
        ));
    } else {
        sym.push(mono(
            v,
            &[
                (v.x(k - 1), 1),
                (v.x(k), 1),
                (v.x(l), (m - 2) / 2),
                (v.y(2 * k - l), (m - 2) / 2),
            ],
        ));
    }

    let mut s: BTreeSet<Monomial> = base.into_iter().collect();
    for mn in sym {
        s.insert(v.iota(&mn));
        s.insert(mn);
    }
    s
}

/// Closed-form hyperplane weight of each family, per the occurrence-count
/// lemmas. Comparison is up to multiples of the all-ones covector.
pub fn ribbon_closed_form(g: u32, m: u32, fam: RibbonFamily) -> WeightForm {
    let n = g as usize;
    let k = ((g - 1) / 2) as usize;
    let gi = g as i64;
    let mi = m as i64;
    let mut f = WeightForm::zero(n);
    let mut put = |x0_y2k: Rat, xk: Rat| {
        f.coeffs[0] = x0_y2k.clone();
        f.coeffs[n - 1] = x0_y2k;
        f.coeffs[k] = xk;
    };
    match fam {
        RibbonFamily::BPlus2 => put(Rat::int(gi - 2), Rat::int(gi - 2)),
        RibbonFamily::BMinus2 => put(Rat::int(-2), Rat::int(-2)),
        RibbonFamily::B1Plus => put(
            Rat::new(mi * (mi - 1) * (gi - 1), 2) - Rat::one(),
            Rat::int((mi - 1) * (mi - 1) * (gi - 1) - (2 * mi - 3)),
        ),
        RibbonFamily::B2Plus => put(
            Rat::int((mi - 1) * (mi - 1) * (gi - 1) - (2 * mi - 3)),
            Rat::int((mi - 1) * (gi - 1) + (2 * mi - 5)),
        ),
        RibbonFamily::BMinus => {
            if m % 2 == 1 {
                put(
                    Rat::int(-(mi * mi - 3 * mi + 5)),
                    Rat::int(-(5 * mi - 10)),
                )
            } else {
                put(
                    Rat::int(-(mi * mi - 3 * mi + 6)),
                    Rat::int(-(5 * mi - 12)),
                )
            }
        }
    }
    f
}

/// The vanishing certificate: `{(2, B+), (g-2, B-)}` for `m = 2`; for
/// `m >= 3` the positive coefficients `c0, c1, c2` with
/// `c0 w(B-) + c1 w(B1+) + c2 w(B2+) = 0` are solved exactly, normalized to
/// `c0 = 1` and cleared to integers.
pub fn ribbon_certificate(model: &CurveModel, m: u32) -> Result<Certificate, ConstructionError> {
    check_model(model)?;
    let g = model.genus();
    let n = model.num_vars();
    let entry = |c: Rat, fam: RibbonFamily, expr: MbExpr, ctx| CertEntry {
        coefficient: c,
        family: format!("ribbon:{fam:?}"),
        params: serde_json::json!({"g": g, "m": m}),
        form: expr.weight_form(ctx),
        expr: Some(expr),
    };
    let ctx = model.mb_ctx();
    if m == 2 {
        let plus = ribbon_family(model, m, RibbonFamily::BPlus2)?;
        let minus = ribbon_family(model, m, RibbonFamily::BMinus2)?;
        return Ok(Certificate {
            mode: CertMode::Semistable,
            entries: vec![
                entry(Rat::int(2), RibbonFamily::BPlus2, plus, &ctx),
                entry(Rat::int(g as i64 - 2), RibbonFamily::BMinus2, minus, &ctx),
            ],
        });
    }
    if m < 3 {
        return Err(invalid("ribbon certificates require m >= 2"));
    }
    let bm = ribbon_family(model, m, RibbonFamily::BMinus)?;
    let b1 = ribbon_family(model, m, RibbonFamily::B1Plus)?;
    let b2 = ribbon_family(model, m, RibbonFamily::B2Plus)?;
    let wm = bm.weight_form(&ctx).canonical();
    let w1 = b1.weight_form(&ctx).canonical();
    let w2 = b2.weight_form(&ctx).canonical();
    // c1 w1 + c2 w2 = -wm on the hyperplane, c's positive
    let cols = [w1.clone(), w2.clone()];
    let target = wm.scale(&-Rat::one());
    let sol = solve_positive_combination(&cols, &target, true)
        .or_else(|| solve_positive_combination(&cols, &target, false))
        .ok_or(ConstructionError::NoPositiveSolution)?;
    let mut coeffs = clear_denominators(&[vec![Rat::one()], sol].concat());
    // a zero coefficient can only be bumped when its form already vanishes
    // on the hyperplane (degenerate small-genus cases)
    for (c, w) in coeffs.iter_mut().zip([&wm, &w1, &w2]) {
        if c.is_zero() {
            if !w.coeffs.iter().all(Rat::is_zero) {
                return Err(ConstructionError::NoPositiveSolution);
            }
            *c = Rat::one();
        }
    }
    let cert = Certificate {
        mode: CertMode::Semistable,
        entries: vec![
            entry(coeffs[0].clone(), RibbonFamily::BMinus, bm, &ctx),
            entry(coeffs[1].clone(), RibbonFamily::B1Plus, b1, &ctx),
            entry(coeffs[2].clone(), RibbonFamily::B2Plus, b2, &ctx),
        ],
    };
    let _ = n;
    Ok(cert)
}
