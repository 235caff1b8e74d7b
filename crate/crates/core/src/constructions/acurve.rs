//! Chi-bases of the balanced double A-curve and the greedy completion to a
//! full monomial basis of non-positive weight.

use std::collections::BTreeSet;

use crate::basiskit::{BasisCandidate, MbExpr, WeightForm};
use crate::models::{CurveModel, ModelKind, Monomial, VarBlock};
use crate::ratlin::Rat;

use super::{invalid, ConstructionError};

fn check_model(model: &CurveModel) -> Result<(), ConstructionError> {
    if model.kind() != ModelKind::DoubleA {
        return Err(invalid("chi families require a double-A model"));
    }
    Ok(())
}

struct V {
    n: usize,
    k: u32,
}

impl V {
    fn x(&self, i: u32) -> usize {
        debug_assert!(1 <= i && i <= self.k);
        (i - 1) as usize
    }
    fn y(&self, i: u32) -> usize {
        debug_assert!(1 <= i && i <= self.k);
        (self.k + i - 1) as usize
    }
    /// involution x_i <-> y_i
    fn iota(&self, mono: &Monomial) -> Monomial {
        let k = self.k as usize;
        let mut exps = vec![0u32; self.n];
        for (v, e) in mono.iter_factors() {
            exps[(v + k) % (2 * k)] += e;
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

/// Structural chi-basis test: `2k(m-1) - 1` mixed monomials hitting every
/// weighted degree in `(-(m-1)k, (m-1)k)` exactly once. Independent of the
/// rank machinery (on the double-A model the two agree; this is the
/// combinatorial criterion).
pub fn is_chi_basis(model: &CurveModel, m: u32, cand: &BasisCandidate) -> bool {
    if check_model(model).is_err() {
        return false;
    }
    let k = model.k_param() as i64;
    let want = (2 * k * (m as i64 - 1) - 1) as usize;
    if cand.len() != want {
        return false;
    }
    let mut seen = BTreeSet::new();
    for mn in cand.monomials() {
        if mn.degree() != m {
            return false;
        }
        let mut has_x = false;
        let mut has_y = false;
        let mut wdeg = 0i64;
        for (v, e) in mn.iter_factors() {
            match model.vars()[v].block {
                VarBlock::X => has_x = true,
                VarBlock::Y => has_y = true,
                _ => unreachable!(),
            }
            wdeg += model.vars()[v].aux_degree * e as i64;
        }
        if !has_x || !has_y || wdeg.abs() > k * (m as i64 - 1) - 1 || !seen.insert(wdeg) {
            return false;
        }
    }
    seen.len() == want
}

/// `B1 = {x_i y_{k-i}} ∪ {x_i y_{k-i+1}}`, weight `-(λ_k + ν_k)`.
pub fn chi_b1(model: &CurveModel) -> Result<BasisCandidate, ConstructionError> {
    check_model(model)?;
    let v = V {
        n: model.num_vars(),
        k: model.k_param(),
    };
    let mut out = Vec::new();
    for i in 1..v.k {
        out.push(mono(&v, &[(v.x(i), 1), (v.y(v.k - i), 1)]));
    }
    for i in 1..=v.k {
        out.push(mono(&v, &[(v.x(i), 1), (v.y(v.k - i + 1), 1)]));
    }
    Ok(BasisCandidate::new(out))
}

/// `B2 = {x_k y_i} ∪ {x_i y_k}`, weight `(k-1)(λ_k + ν_k)`.
pub fn chi_b2(model: &CurveModel) -> Result<BasisCandidate, ConstructionError> {
    check_model(model)?;
    let v = V {
        n: model.num_vars(),
        k: model.k_param(),
    };
    let mut out = Vec::new();
    for i in 1..=v.k {
        out.push(mono(&v, &[(v.x(v.k), 1), (v.y(i), 1)]));
    }
    for i in 1..v.k {
        out.push(mono(&v, &[(v.x(i), 1), (v.y(v.k), 1)]));
    }
    Ok(BasisCandidate::new(out))
}

/// All degree-m monomials with both an x and a y factor lying in the ideal
/// `(x_k, y_k)^{m-1} * (x_1..y_k)`.
fn t1(v: &V, m: u32) -> BTreeSet<Monomial> {
    let mut s = BTreeSet::new();
    for p in 1..m {
        s.insert(mono(v, &[(v.x(v.k), m - p), (v.y(v.k), p)]));
    }
    for p in 0..m {
        let q = m - 1 - p;
        for sidx in 1..v.k {
            if q >= 1 {
                s.insert(mono(v, &[(v.x(v.k), p), (v.y(v.k), q), (v.x(sidx), 1)]));
            }
            if p >= 1 {
                s.insert(mono(v, &[(v.x(v.k), p), (v.y(v.k), q), (v.y(sidx), 1)]));
            }
        }
    }
    s
}

/// `T2(s) = {x_k^{m-2-d} y_k^d x_{k-s} x_s : 1 <= d <= m-2}`, filling the
/// `m - 2` weighted degrees `T1` misses.
fn t2(v: &V, m: u32, s: u32) -> Vec<Monomial> {
    (1..=m - 2)
        .map(|d| {
            mono(
                v,
                &[(v.x(v.k), m - 2 - d), (v.y(v.k), d), (v.x(v.k - s), 1), (v.x(s), 1)],
            )
        })
        .collect()
}

/// Concatenation over `s` of `T1 ∪ T2(s)` and `T1 ∪ ι(T2(s))`; its weight is
/// a positive multiple of `λ_k + ν_k` on the hyperplane.
pub fn chi_plus_aggregate(model: &CurveModel, m: u32) -> Result<MbExpr, ConstructionError> {
    check_model(model)?;
    if m < 3 {
        return Err(invalid("chi aggregates require m >= 3"));
    }
    let v = V {
        n: model.num_vars(),
        k: model.k_param(),
    };
    let t1 = t1(&v, m);
    let mut children = Vec::new();
    for s in 1..v.k {
        let mut a: Vec<Monomial> = t1.iter().cloned().collect();
        a.extend(t2(&v, m, s));
        let mut b: Vec<Monomial> = t1.iter().cloned().collect();
        b.extend(t2(&v, m, s).iter().map(|mn| v.iota(mn)));
        children.push((Rat::one(), MbExpr::leaf(a)));
        children.push((Rat::one(), MbExpr::leaf(b)));
    }
    Ok(MbExpr::concat(children))
}

/// `S1` for even `k = 2l`: one monomial per weighted degree in `[m, k(m-1)-1]`.
fn s1_even(v: &V, m: u32, l: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in l + 2..=v.k {
        for d in 0..m {
            out.push(mono(
                v,
                &[(v.x(i), m - 1 - d), (v.x(i - 1), d), (v.y(v.k + 1 - i), 1)],
            ));
        }
    }
    for i in 2..=l + 1 {
        for d in 0..=m.saturating_sub(3) {
            if d <= m - 3 {
                out.push(mono(v, &[(v.x(i), m - 1 - d), (v.x(i - 1), d), (v.y(i - 1), 1)]));
            }
        }
    }
    out
}

/// `S2(s)` for even `k`: the `2m - 1` weighted degrees in `[1-m, m-1]`.
fn s2_even(v: &V, m: u32, l: u32, s: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    out.push(mono(v, &[(v.x(l + 1), 1), (v.y(l), 1), (v.x(1), m - 2)]));
    let mut i = 0;
    while 2 * i <= m - 2 {
        out.push(mono(
            v,
            &[(v.x(l), 1), (v.y(l), 1), (v.x(s), i), (v.y(s), i), (v.x(1), m - 2 - 2 * i)],
        ));
        i += 1;
    }
    let mut i = 0;
    while 2 * i < m - 2 {
        out.push(mono(
            v,
            &[(v.x(l), 1), (v.y(l), 1), (v.x(s), i), (v.y(s), i), (v.y(1), m - 2 - 2 * i)],
        ));
        i += 1;
    }
    if m >= 3 {
        let mut i = 0;
        while 2 * i <= m - 3 {
            out.push(mono(
                v,
                &[
                    (v.x(v.k), 1),
                    (v.y(s), 1),
                    (v.y(v.k - s), 1),
                    (v.x(s), i),
                    (v.y(s), i),
                    (v.x(1), m - 3 - 2 * i),
                ],
            ));
            i += 1;
        }
        let mut i = 0;
        while 2 * i < m - 3 {
            out.push(mono(
                v,
                &[
                    (v.x(v.k), 1),
                    (v.y(s), 1),
                    (v.y(v.k - s), 1),
                    (v.x(s), i),
                    (v.y(s), i),
                    (v.y(1), m - 3 - 2 * i),
                ],
            ));
            i += 1;
        }
    }
    out.push(mono(v, &[(v.y(l + 1), 1), (v.x(l), 1), (v.y(1), m - 2)]));
    out
}

/// `S1` for odd `k = 2l+1`: one monomial per weighted degree in
/// `[m-1, k(m-1)-1]`.
fn s1_odd(v: &V, m: u32, l: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in l + 3..=v.k {
        for d in 0..m {
            out.push(mono(
                v,
                &[(v.x(i), m - 1 - d), (v.x(i - 1), d), (v.y(v.k + 1 - i), 1)],
            ));
        }
    }
    for i in 3..=l + 2 {
        for d in 0..=m.saturating_sub(3) {
            if d <= m - 3 {
                out.push(mono(v, &[(v.x(i), m - 1 - d), (v.x(i - 1), d), (v.y(i - 2), 1)]));
            }
        }
    }
    out.push(mono(v, &[(v.x(l + 2), 1), (v.y(l), 1), (v.x(2), m - 2)]));
    for d in 0..=m - 2 {
        out.push(mono(
            v,
            &[(v.x(l + 1), 1), (v.y(l), 1), (v.x(2), m - 2 - d), (v.x(1), d)],
        ));
    }
    out
}

/// `S2(s)` for odd `k`: the `2m - 3` weighted degrees in `[2-m, m-2]`.
fn s2_odd(v: &V, m: u32, l: u32, s: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut i = 0;
    while 2 * i <= m - 2 {
        out.push(mono(
            v,
            &[
                (v.x(l + 1), 1),
                (v.y(l + 1), 1),
                (v.x(s), i),
                (v.y(s), i),
                (v.x(1), m - 2 - 2 * i),
            ],
        ));
        i += 1;
    }
    let mut i = 0;
    while 2 * i < m - 2 {
        out.push(mono(
            v,
            &[
                (v.x(l + 1), 1),
                (v.y(l + 1), 1),
                (v.x(s), i),
                (v.y(s), i),
                (v.y(1), m - 2 - 2 * i),
            ],
        ));
        i += 1;
    }
    if m >= 3 {
        let mut i = 0;
        while 2 * i <= m - 3 {
            out.push(mono(
                v,
                &[
                    (v.x(v.k), 1),
                    (v.y(s), 1),
                    (v.y(v.k - s), 1),
                    (v.x(s), i),
                    (v.y(s), i),
                    (v.x(1), m - 3 - 2 * i),
                ],
            ));
            i += 1;
        }
        let mut i = 0;
        while 2 * i < m - 3 {
            out.push(mono(
                v,
                &[
                    (v.x(v.k), 1),
                    (v.y(s), 1),
                    (v.y(v.k - s), 1),
                    (v.x(s), i),
                    (v.y(s), i),
                    (v.y(1), m - 3 - 2 * i),
                ],
            ));
            i += 1;
        }
    }
    out
}

/// Concatenation over `s` of `S1 ∪ ι(S1) ∪ S2(s)` and `S1 ∪ ι(S1) ∪ ι(S2(s))`;
/// its weight is a negative multiple of `λ_k + ν_k` on the hyperplane.
pub fn chi_minus_aggregate(model: &CurveModel, m: u32) -> Result<MbExpr, ConstructionError> {
    check_model(model)?;
    if m < 3 {
        return Err(invalid("chi aggregates require m >= 3"));
    }
    let v = V {
        n: model.num_vars(),
        k: model.k_param(),
    };
    let l = v.k / 2;
    let s1: Vec<Monomial> = if v.k % 2 == 0 {
        s1_even(&v, m, l)
    } else {
        s1_odd(&v, m, l)
    };
    let mut core: Vec<Monomial> = s1.clone();
    core.extend(s1.iter().map(|mn| v.iota(mn)));
    let mut children = Vec::new();
    for s in 1..v.k {
        let s2: Vec<Monomial> = if v.k % 2 == 0 {
            s2_even(&v, m, l, s)
        } else {
            s2_odd(&v, m, l, s)
        };
        let mut a = core.clone();
        a.extend(s2.iter().cloned());
        let mut b = core.clone();
        b.extend(s2.iter().map(|mn| v.iota(mn)));
        children.push((Rat::one(), MbExpr::leaf(a)));
        children.push((Rat::one(), MbExpr::leaf(b)));
    }
    Ok(MbExpr::concat(children))
}

/// The covector `λ_k + ν_k` (used to state the aggregate weights).
pub fn lknk_form(model: &CurveModel) -> WeightForm {
    let mut f = WeightForm::zero(model.num_vars());
    f.coeffs[model.block_var(VarBlock::X, model.k_param())] = Rat::one();
    f.coeffs[model.block_var(VarBlock::Y, model.k_param())] = Rat::one();
    f
}

/// A full monomial basis of non-positive rho-weight: per-degree greedy parts
/// for the omega and eta spans, chi part chosen by the sign of `λ_k + ν_k`.
/// The omega-part weight is checked against the bound
/// `m(mk - m + 1) * (Σλ_i)/k` before returning.
pub fn nonpositive_basis(
    model: &CurveModel,
    m: u32,
    rho: &[Rat],
) -> Result<(BasisCandidate, Rat), ConstructionError> {
    check_model(model)?;
    if rho.len() != model.num_vars() {
        return Err(invalid("rho has the wrong dimension"));
    }
    let trace: Rat = rho.iter().cloned().sum();
    if !trace.is_zero() {
        return Err(invalid("rho must be traceless"));
    }
    let k = model.k_param();
    let v = V {
        n: model.num_vars(),
        k,
    };
    let xvars: Vec<usize> = (1..=k).map(|i| v.x(i)).collect();
    let yvars: Vec<usize> = (1..=k).map(|i| v.y(i)).collect();

    let omega_part = greedy_block_part(&v, m, &xvars, rho);
    let eta_part = greedy_block_part(&v, m, &yvars, rho);

    let ctx = model.mb_ctx();
    let lk_nk = lknk_form(model).dot(rho);
    let chi_part = if m == 2 {
        if lk_nk.is_positive() {
            chi_b1(model)?
        } else {
            chi_b2(model)?
        }
    } else if lk_nk.is_positive() {
        chi_minus_aggregate(model, m)?.extract(&ctx, rho)
    } else {
        chi_plus_aggregate(model, m)?.extract(&ctx, rho)
    };

    let weight_of = |c: &BasisCandidate| WeightForm::of_candidate(v.n, c).dot(rho);
    let lambda_sum: Rat = xvars.iter().map(|&x| rho[x].clone()).sum();
    let mk = m as i64 * (m as i64 * k as i64 - m as i64 + 1);
    let omega_bound = Rat::int(mk) * lambda_sum / Rat::int(k as i64);
    assert!(
        weight_of(&omega_part) <= omega_bound,
        "omega part exceeds the balanced bound"
    );

    let basis = omega_part.union(&eta_part).union(&chi_part);
    let total = weight_of(&basis);
    assert!(total <= Rat::zero(), "completed basis has positive weight");
    Ok((basis, total))
}

/// Minimum-weight monomial basis of the pure-block span: each target index
/// `j` in `[m, mk]` takes a cheapest degree-m product with index sum `j`
/// (exact because the block images are the distinct axes `j`).
fn greedy_block_part(v: &V, m: u32, block: &[usize], rho: &[Rat]) -> BasisCandidate {
    let k = v.k as usize;
    let m = m as usize;
    // dp[c][s] = min cost of c factors with index sum s, factors 1..=k
    let mut dp: Vec<Vec<Option<Rat>>> = vec![vec![None; m * k + 1]; m + 1];
    dp[0][0] = Some(Rat::zero());
    for c in 1..=m {
        for s in c..=c * k {
            let mut best: Option<Rat> = None;
            for i in 1..=k.min(s) {
                if let Some(prev) = &dp[c - 1][s - i] {
                    let cand = prev + &rho[block[i - 1]];
                    if best.as_ref().map_or(true, |b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
            dp[c][s] = best;
        }
    }
    let mut out = Vec::new();
    for j in m..=m * k {
        // reconstruct deterministically, preferring the smallest index
        let mut c = m;
        let mut s = j;
        let mut factors = Vec::new();
        while c > 0 {
            let target = dp[c][s].clone().expect("reachable state");
            let mut chosen = 0;
            for i in 1..=k.min(s) {
                if let Some(prev) = &dp[c - 1][s - i] {
                    if prev + &rho[block[i - 1]] == target {
                        chosen = i;
                        break;
                    }
                }
            }
            assert!(chosen > 0);
            factors.push(block[chosen - 1]);
            c -= 1;
            s -= chosen;
        }
        out.push(Monomial::from_factors(v.n, &factors));
    }
    BasisCandidate::new(out)
}
