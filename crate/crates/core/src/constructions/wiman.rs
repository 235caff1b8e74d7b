//! Balanced monomial multibases of the Wiman curve: the path-lemma
//! combinatorics, balanced multibases of rational-normal-curve blocks, the
//! graded `S(k, m-k)` chain, and the Type I / Type II families with their
//! stability certificates.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::basiskit::{sum_checked, CertEntry, CertMode, Certificate, MbExpr, WeightForm};
use crate::models::{CurveModel, ModelKind, Monomial, VarBlock};
use crate::ratlin::{binomial, solve_linear, QVec, Rat};

use super::{clear_denominators, invalid, make_positive, ConstructionError};

/// Multiplicities `c_ij = C(i+j, i) * C(n+m-i-j, n-i)`; the multiset with
/// `c_ij` copies of `x_i y_j` is degree-, x- and y-balanced.
pub fn path_lemma_multiset(n: u32, m: u32) -> Vec<Vec<BigUint>> {
    (0..=n)
        .map(|i| {
            (0..=m)
                .map(|j| {
                    binomial((i + j) as u64, i as u64)
                        * binomial((n + m - i - j) as u64, (n - i) as u64)
                })
                .collect()
        })
        .collect()
}

fn check_model(model: &CurveModel) -> Result<(), ConstructionError> {
    if model.kind() != ModelKind::Wiman {
        return Err(invalid("wiman families require a Wiman model"));
    }
    Ok(())
}

fn mono(nv: usize, factors: &[(usize, u32)]) -> Monomial {
    let mut exps = vec![0u32; nv];
    for &(var, e) in factors {
        exps[var] += e;
    }
    Monomial::from_exps(exps)
}

/// The balanced quadratic multibasis `H^n_k` of `span{z^i : k <= i <= 2n-k}`
/// in the block variables (`block[i]` carries `z^i`), built by the
/// descending recursion from the top case `H^n_n`.
pub fn kempf_multibasis(nv: usize, block: &[usize], k: u32) -> MbExpr {
    let n = (block.len() - 1) as u32;
    assert!(k <= n);
    let x = |i: u32| block[i as usize];
    if k == n {
        // the multiset of singleton bases {x_i x_{n-i}} of the line z^n
        return MbExpr::concat(
            (0..=n)
                .map(|i| {
                    (
                        Rat::one(),
                        MbExpr::leaf(vec![mono(nv, &[(x(i), 1), (x(n - i), 1)])]),
                    )
                })
                .collect(),
        );
    }
    let b_minus = {
        let mut v = Vec::new();
        for i in 0..n - k {
            v.push(mono(nv, &[(x(i), 1), (x(k + i), 1)]));
            v.push(mono(nv, &[(x(i + 1), 1), (x(k + i), 1)]));
        }
        v.push(mono(nv, &[(x(n - k), 1), (x(n), 1)]));
        MbExpr::leaf(v)
    };
    let b_plus = {
        let mut v = Vec::new();
        for i in k..=n {
            v.push(mono(nv, &[(x(0), 1), (x(i), 1)]));
        }
        for i in 1..=n - k {
            v.push(mono(nv, &[(x(n), 1), (x(i), 1)]));
        }
        MbExpr::leaf(v)
    };
    if k == 0 {
        return MbExpr::concat(vec![(Rat::int(n as i64), b_minus), (Rat::one(), b_plus)]);
    }
    // 1 <= k <= n-1
    let (t_minus, t_plus) = if k == 1 {
        (b_minus, MbExpr::scale(2, b_plus))
    } else {
        // z^k and z^{n-k} as balanced quadratic multibases avoiding x_0, x_n
        let low = MbExpr::concat(
            (1..k)
                .map(|i| {
                    (
                        Rat::one(),
                        MbExpr::leaf(vec![mono(nv, &[(x(i), 1), (x(k - i), 1)])]),
                    )
                })
                .collect(),
        );
        let high = MbExpr::concat(
            (1..k)
                .map(|i| {
                    (
                        Rat::one(),
                        MbExpr::leaf(vec![mono(nv, &[(x(n - i), 1), (x(n - k + i), 1)])]),
                    )
                })
                .collect(),
        );
        let t0 = MbExpr::Sum(vec![
            Arc::new(kempf_multibasis(nv, block, k + 1)),
            Arc::new(low),
            Arc::new(high),
        ]);
        let km1 = Rat::int(k as i64 - 1);
        (
            MbExpr::concat(vec![(km1.clone(), t0.clone()), (Rat::one(), b_minus)]),
            MbExpr::concat(vec![(km1, t0), (Rat::int(2), b_plus)]),
        )
    };
    let cm = k as i64 * (2 * n as i64 - 2 * k as i64 - 2);
    let cp = 3 * (k as i64 + 1);
    if cm == 0 {
        MbExpr::concat(vec![(Rat::int(cp), t_plus)])
    } else {
        MbExpr::concat(vec![(Rat::int(cm), t_minus), (Rat::int(cp), t_plus)])
    }
}

/// The X-balanced weight of `H^n_k`: `2(2n-2k+1)/(n+1)` on every block
/// variable.
pub fn kempf_form(nv: usize, block: &[usize], k: u32) -> WeightForm {
    let n = (block.len() - 1) as i64;
    let mut f = WeightForm::zero(nv);
    for &v in block {
        f.coeffs[v] = Rat::new(2 * (2 * n - 2 * k as i64 + 1), n + 1);
    }
    f
}

fn xblock(model: &CurveModel) -> Vec<usize> {
    let g = model.genus();
    (0..=2 * g - 2)
        .map(|i| model.block_var(VarBlock::X, i))
        .collect()
}

fn yblock(model: &CurveModel) -> Vec<usize> {
    let g = model.genus();
    (0..=g - 3).map(|j| model.block_var(VarBlock::Y, j)).collect()
}

/// Sum of the x-coordinates (`Λ`) as a covector.
pub fn lambda_form(model: &CurveModel) -> WeightForm {
    let mut f = WeightForm::zero(model.num_vars());
    for v in xblock(model) {
        f.coeffs[v] = Rat::one();
    }
    f
}

/// Sum of the y-coordinates (`N`) as a covector.
pub fn nu_form(model: &CurveModel) -> WeightForm {
    let mut f = WeightForm::zero(model.num_vars());
    for v in yblock(model) {
        f.coeffs[v] = Rat::one();
    }
    f
}

/// Balanced `(k, m-k)`-monomial multibasis of `W(k, m-k)`, by iterated
/// degree-balanced extension from the one-variable-block bases.
pub fn s_balanced(model: &CurveModel, k: u32, mk: u32) -> Result<MbExpr, ConstructionError> {
    check_model(model)?;
    assert!(k + mk >= 1);
    let nv = model.num_vars();
    if k == 1 && mk == 0 {
        return Ok(MbExpr::leaf(
            xblock(model).iter().map(|&v| mono(nv, &[(v, 1)])).collect(),
        ));
    }
    if k == 0 && mk == 1 {
        return Ok(MbExpr::leaf(
            yblock(model).iter().map(|&v| mono(nv, &[(v, 1)])).collect(),
        ));
    }
    let (block, child) = if k >= 1 {
        (xblock(model), s_balanced(model, k - 1, mk)?)
    } else {
        (yblock(model), s_balanced(model, 0, mk - 1)?)
    };
    Ok(MbExpr::PathExtend {
        block,
        child: Arc::new(child),
    })
}

/// Closed form: `w(S(k, m-k)) = k (D+1)/(2g-1) Λ + (m-k)(D+1)/(g-2) N` with
/// `D = k(2g-2) + (m-k)(g-3)`.
pub fn s_form(model: &CurveModel, k: u32, mk: u32) -> WeightForm {
    let g = model.genus() as i64;
    let d1 = (k as i64) * (2 * g - 2) + (mk as i64) * (g - 3) + 1;
    lambda_form(model)
        .scale(&Rat::new(k as i64 * d1, 2 * g - 1))
        .add(&nu_form(model).scale(&Rat::new(mk as i64 * d1, g - 2)))
}

/// The two shared quadratic blocks every `S_u(i, j)` is built from.
struct SuTrees {
    t0: Arc<MbExpr>,
    t1: Arc<MbExpr>,
}

fn su_trees(model: &CurveModel) -> SuTrees {
    let g = model.genus();
    let nv = model.num_vars();
    let xb = xblock(model);
    SuTrees {
        t0: Arc::new(kempf_multibasis(nv, &xb[..(2 * g - 2) as usize], g - 3)),
        t1: Arc::new(kempf_multibasis(nv, &xb, g - 2)),
    }
}

/// `S_u(i, j)`: a `(k, m-k)`-monomial basis of the quotient piece
/// `W(k,m-k) / r(W(k-2,m-k+2))`.
fn su(model: &CurveModel, trees: &SuTrees, k: u32, mk: u32, i: u32, j: u32, u: u32) -> MbExpr {
    let g = model.genus();
    let nv = model.num_vars();
    assert!(k >= 2);
    let t_u = if u == 0 {
        Arc::clone(&trees.t0)
    } else {
        Arc::clone(&trees.t1)
    };
    let fixed = mono(
        nv,
        &[
            (model.block_var(VarBlock::X, i), k - 2),
            (model.block_var(VarBlock::Y, j), mk),
        ],
    );
    let singleton = mono(
        nv,
        &[
            (model.block_var(VarBlock::X, 2 * g - 2), k),
            (model.block_var(VarBlock::Y, g - 3), mk),
        ],
    );
    MbExpr::AddSingleton {
        mono: singleton,
        child: Arc::new(MbExpr::MulFixed {
            factor: fixed,
            child: t_u,
        }),
    }
}

/// The common y-part of every `S_u(i, j)`:
/// `(m-k)(2g+1) e_{y_j} + (m-k) e_{y_{g-3}}`.
fn nu_kj_form(model: &CurveModel, mk: u32, j: u32) -> WeightForm {
    let g = model.genus();
    let mut f = WeightForm::zero(model.num_vars());
    if mk > 0 {
        f.coeffs[model.block_var(VarBlock::Y, j)] += Rat::int(mk as i64 * (2 * g as i64 + 1));
        f.coeffs[model.block_var(VarBlock::Y, g - 3)] += Rat::int(mk as i64);
    }
    f
}

/// Solves `a w0 + b w1 = rhs` with the normalization `a + b = norm`.
fn solve_two(w0: &WeightForm, w1: &WeightForm, rhs: &WeightForm, norm: &Rat) -> Option<(Rat, Rat)> {
    let n = rhs.num_vars();
    let mut a: Vec<QVec> = (0..n)
        .map(|r| vec![w0.coeffs[r].clone(), w1.coeffs[r].clone()])
        .collect();
    a.push(vec![Rat::one(), Rat::one()]);
    let mut b = rhs.coeffs.clone();
    b.push(norm.clone());
    let (p, null) = solve_linear(&a, &b)?;
    null.is_empty().then(|| (p[0].clone(), p[1].clone()))
}

/// A two-children mix with an optional fixed third branch: solves
/// `a w(c0) + b w(c1) + fixed_mult w(c2) = target` with `a + b + fixed = 1`
/// and returns the concatenation. `a, b` must come out non-negative.
struct Mix {
    expr: MbExpr,
    weight: WeightForm,
}

fn mix(
    ctx: &crate::basiskit::MbCtx,
    c0: MbExpr,
    c1: MbExpr,
    fixed: Option<(Rat, MbExpr)>,
    target: &WeightForm,
) -> Option<Mix> {
    let w0 = c0.weight_form(ctx);
    let w1 = c1.weight_form(ctx);
    let (rhs, norm) = match &fixed {
        Some((mult, c2)) => (
            target.sub(&c2.weight_form(ctx).scale(mult)),
            Rat::one() - mult.clone(),
        ),
        None => (target.clone(), Rat::one()),
    };
    let (a, b) = solve_two(&w0, &w1, &rhs, &norm)?;
    if a.is_negative() || b.is_negative() {
        return None;
    }
    let mut children = Vec::new();
    if !a.is_zero() {
        children.push((a.clone(), c0));
    }
    if !b.is_zero() {
        children.push((b.clone(), c1));
    }
    if let Some((mult, c2)) = fixed {
        if !mult.is_zero() {
            children.push((mult, c2));
        }
    }
    let expr = MbExpr::concat(children);
    debug_assert_eq!(expr.weight_form(ctx), *target);
    Some(Mix {
        expr,
        weight: target.clone(),
    })
}

/// Exact target weight of the `(k, m-k)` quotient piece, with optional
/// pointing terms `eps λ_{i0}` / `delta ν_{j0}`.
fn piece_target(
    model: &CurveModel,
    k: u32,
    mk: u32,
    point_x: Option<(u32, &Rat)>,
    point_y: Option<(u32, &Rat)>,
) -> WeightForm {
    let g = model.genus() as i64;
    let mut lam_num = Rat::int(k as i64 * (2 * g + 2));
    let mut nu_num = Rat::int(mk as i64 * (2 * g + 2));
    let mut extra = WeightForm::zero(model.num_vars());
    if let Some((i0, eps)) = point_x {
        lam_num -= eps;
        extra.coeffs[model.block_var(VarBlock::X, i0)] += eps;
    }
    if let Some((j0, delta)) = point_y {
        nu_num -= delta;
        extra.coeffs[model.block_var(VarBlock::Y, j0)] += delta;
    }
    lambda_form(model)
        .scale(&(lam_num / Rat::int(2 * g - 1)))
        .add(&nu_form(model).scale(&(nu_num / Rat::int(g - 2))))
        .add(&extra)
}

/// Averages `S_0(i, j)` over `i` against the top branch `S_1(2g-2, j)`
/// (plus the `eps`-weighted `S_1(i0, j)` when pointing) so the x-part is
/// balanced up to `eps λ_{i0}`.
fn lambda_mix(
    model: &CurveModel,
    trees: &SuTrees,
    k: u32,
    mk: u32,
    j: u32,
    point_x: Option<(u32, &Rat)>,
) -> Result<Mix, ConstructionError> {
    let g = model.genus();
    let ctx = model.mb_ctx();
    let c0 = MbExpr::concat(
        (0..=2 * g - 3)
            .map(|i| (Rat::one(), su(model, trees, k, mk, i, j, 0)))
            .collect(),
    );
    let c1 = su(model, trees, k, mk, 2 * g - 2, j, 1);
    let (eps, i0) = match point_x {
        Some((i0, eps)) => (eps.clone(), i0),
        None => (Rat::zero(), 0),
    };
    let mut target = lambda_form(model)
        .scale(&((Rat::int(k as i64 * (2 * g as i64 + 2)) - &eps) / Rat::int(2 * g as i64 - 1)))
        .add(&nu_kj_form(model, mk, j));
    // a third-branch multiplicity c contributes c(2g+1)(k-2) to lambda_{i0}
    let fixed = if eps.is_zero() {
        None
    } else {
        assert!(k >= 3, "lambda pointing requires k >= 3");
        target.coeffs[model.block_var(VarBlock::X, i0)] += &eps;
        let c = &eps / &Rat::int((2 * g as i64 + 1) * (k as i64 - 2));
        Some((c, su(model, trees, k, mk, i0, j, 1)))
    };
    mix(&ctx, c0, c1, fixed, &target).ok_or_else(|| {
        ConstructionError::PointingInfeasible(format!(
            "eps = {eps} exceeds the feasible bound {}",
            eps_max(model, k)
        ))
    })
}

/// The fully balanced `(k, m-k)` quotient piece, averaging over `i` and `j`;
/// pointing relaxes the balance by `eps λ_{i0}` or `delta ν_{j0}`.
fn piece(
    model: &CurveModel,
    k: u32,
    mk: u32,
    point_x: Option<(u32, &Rat)>,
    point_y: Option<(u32, &Rat)>,
) -> Result<MbExpr, ConstructionError> {
    let g = model.genus();
    let ctx = model.mb_ctx();
    assert!(point_x.is_none() || point_y.is_none());
    let trees = su_trees(model);
    let target = piece_target(model, k, mk, point_x, point_y);
    if mk == 0 || g == 3 {
        // a single y-index; the lambda mix already realizes the target
        let j = if mk == 0 { 0 } else { g - 3 };
        let m = lambda_mix(model, &trees, k, mk, j, point_x)?;
        if m.weight != target {
            return Err(ConstructionError::MemberCheck(
                "degenerate quotient piece misses its target weight".into(),
            ));
        }
        return Ok(m.expr);
    }
    let lower = MbExpr::concat(
        (0..=g - 4)
            .map(|j| Ok((Rat::one(), lambda_mix(model, &trees, k, mk, j, point_x)?.expr)))
            .collect::<Result<Vec<_>, ConstructionError>>()?,
    );
    let top = lambda_mix(model, &trees, k, mk, g - 3, point_x)?.expr;
    // a third-branch multiplicity c contributes c(2g+1)(m-k) to nu_{j0}
    let fixed = match point_y {
        Some((j0, delta)) => {
            let c = delta / &Rat::int((2 * model.genus() as i64 + 1) * mk as i64);
            Some((c, lambda_mix(model, &trees, k, mk, j0, point_x)?.expr))
        }
        None => None,
    };
    mix(&ctx, lower, top, fixed, &target)
        .map(|m| m.expr)
        .ok_or_else(|| match point_y {
            Some((_, delta)) => ConstructionError::PointingInfeasible(format!(
                "delta = {delta} exceeds the feasible bound {}",
                delta_max(model, k + mk)
            )),
            None => ConstructionError::NoPositiveSolution,
        })
}

/// Largest `eps` keeping the pointed lambda mix of the `(k, .)` piece
/// feasible, capped at 1.
pub fn eps_max(model: &CurveModel, k: u32) -> Rat {
    let trees = su_trees(model);
    let solve_at = |eps: &Rat| -> (Rat, Rat) {
        let g = model.genus();
        let ctx = model.mb_ctx();
        let c0 = MbExpr::concat(
            (0..=2 * g - 3)
                .map(|i| (Rat::one(), su(model, &trees, k, 0, i, 0, 0)))
                .collect(),
        );
        let c1 = su(model, &trees, k, 0, 2 * g - 2, 0, 1);
        let c2 = su(model, &trees, k, 0, 0, 0, 1);
        let mut target = lambda_form(model).scale(
            &((Rat::int(k as i64 * (2 * g as i64 + 2)) - eps) / Rat::int(2 * g as i64 - 1)),
        );
        target.coeffs[model.block_var(VarBlock::X, 0)] += eps;
        let c = eps / &Rat::int((2 * g as i64 + 1) * (k as i64 - 2));
        let rhs = target.sub(&c2.weight_form(&ctx).scale(&c));
        let norm = Rat::one() - c;
        solve_two(&c0.weight_form(&ctx), &c1.weight_form(&ctx), &rhs, &norm)
            .expect("lambda mix system is nonsingular")
    };
    affine_positive_root(solve_at).min(Rat::one())
}

/// Largest `delta` keeping the pointed nu mix of the `(2, m-2)` piece
/// feasible, capped at 1.
pub fn delta_max(model: &CurveModel, m: u32) -> Rat {
    let g = model.genus();
    if g == 3 {
        return Rat::one(); // single y-variable: pointing is unconstrained
    }
    let (k, mk) = (2, m - 2);
    let trees = su_trees(model);
    let solve_at = |delta: &Rat| -> (Rat, Rat) {
        let ctx = model.mb_ctx();
        let lower = MbExpr::concat(
            (0..=g - 4)
                .map(|j| {
                    (
                        Rat::one(),
                        lambda_mix(model, &trees, k, mk, j, None).unwrap().expr,
                    )
                })
                .collect(),
        );
        let top = lambda_mix(model, &trees, k, mk, g - 3, None).unwrap().expr;
        let c2 = lambda_mix(model, &trees, k, mk, 0, None).unwrap().expr;
        let target = piece_target(model, k, mk, None, Some((0, delta)));
        let c = delta / &Rat::int((2 * g as i64 + 1) * mk as i64);
        let rhs = target.sub(&c2.weight_form(&ctx).scale(&c));
        let norm = Rat::one() - c;
        solve_two(
            &lower.weight_form(&ctx),
            &top.weight_form(&ctx),
            &rhs,
            &norm,
        )
        .expect("nu mix system is nonsingular")
    };
    affine_positive_root(solve_at).min(Rat::one())
}

/// Smallest positive root of the affine coefficient functions `a(t), b(t)`.
fn affine_positive_root(solve_at: impl Fn(&Rat) -> (Rat, Rat)) -> Rat {
    let (a0, b0) = solve_at(&Rat::zero());
    let (a1, b1) = solve_at(&Rat::one());
    let mut best: Option<Rat> = None;
    for (v0, v1) in [(a0, a1), (b0, b1)] {
        let slope = &v1 - &v0;
        if slope.is_negative() {
            let root = -(&v0 / &slope);
            if root.is_positive() && best.as_ref().map_or(true, |b| root < *b) {
                best = Some(root);
            }
        }
    }
    best.unwrap_or_else(Rat::one)
}

/// Type I: a balanced basis family of `W(m,0) ⊕ W(m-1,1)`.
pub fn type1(model: &CurveModel, m: u32) -> Result<MbExpr, ConstructionError> {
    check_model(model)?;
    if m < 2 {
        return Err(invalid("type I requires m >= 2"));
    }
    let ctx = model.mb_ctx();
    let children = vec![s_balanced(model, m, 0)?, s_balanced(model, m - 1, 1)?];
    sum_checked(model, &ctx, children).map_err(|e| ConstructionError::MemberCheck(e.to_string()))
}

/// Closed Type I weight:
/// `((4g-4)m^2 - (3g-3)m + g)/(2g-1) Λ + ((2g-2)m - g)/(g-2) N`.
pub fn type1_form(model: &CurveModel, m: u32) -> WeightForm {
    let g = model.genus() as i64;
    let m = m as i64;
    lambda_form(model)
        .scale(&Rat::new((4 * g - 4) * m * m - (3 * g - 3) * m + g, 2 * g - 1))
        .add(&nu_form(model).scale(&Rat::new((2 * g - 2) * m - g, g - 2)))
}

/// Optional pointing of a Type II multibasis.
#[derive(Debug, Clone)]
pub enum Pointing {
    AtX { i: u32, eps: Rat },
    AtY { j: u32, delta: Rat },
}

/// Type II: bases of `W(0,m)`, `W(1,m-1)` and every quotient piece
/// `W(k,m-k)/r(W(k-2,m-k+2))` for `2 <= k <= m`. The pointing terms ride on
/// the `k = 3` (lambda) or `k = 2` (nu) piece.
pub fn type2(
    model: &CurveModel,
    m: u32,
    pointing: Option<&Pointing>,
) -> Result<MbExpr, ConstructionError> {
    check_model(model)?;
    if m < 2 {
        return Err(invalid("type II requires m >= 2"));
    }
    if pointing.is_some() && m < 3 {
        return Err(invalid("pointed type II requires m >= 3"));
    }
    let ctx = model.mb_ctx();
    let mut children = vec![s_balanced(model, 0, m)?, s_balanced(model, 1, m - 1)?];
    for k in 2..=m {
        let (px, py) = match pointing {
            Some(Pointing::AtX { i, eps }) if k == 3 => (Some((*i, eps)), None),
            Some(Pointing::AtY { j, delta }) if k == 2 => (None, Some((*j, delta))),
            _ => (None, None),
        };
        children.push(piece(model, k, m - k, px, py)?);
    }
    sum_checked(model, &ctx, children).map_err(|e| ConstructionError::MemberCheck(e.to_string()))
}

/// Closed Type II weight at `eps = delta = 0`:
/// `((g+1)m^2 + (2g-2)m - g)/(2g-1) Λ + ((3g-5)m^2 - (3g-3)m + g)/(g-2) N`.
pub fn type2_form(model: &CurveModel, m: u32) -> WeightForm {
    let g = model.genus() as i64;
    let m = m as i64;
    lambda_form(model)
        .scale(&Rat::new((g + 1) * m * m + (2 * g - 2) * m - g, 2 * g - 1))
        .add(&nu_form(model).scale(&Rat::new((3 * g - 5) * m * m - (3 * g - 3) * m + g, g - 2)))
}

#[derive(Debug)]
pub enum WimanCertificate {
    Semistable(Certificate),
    /// One pointed certificate per variable.
    Pointed(Vec<Certificate>),
}

/// `m = 2`: a positive combination of the Type I and Type II weights
/// vanishing on the hyperplane (`g >= 4`; the genus-3 second Hilbert point is
/// non-semistable). `m >= 3`: per-variable stable-pointed certificates.
pub fn wiman_certificate(
    model: &CurveModel,
    m: u32,
) -> Result<WimanCertificate, ConstructionError> {
    check_model(model)?;
    let g = model.genus();
    let ctx = model.mb_ctx();
    if m == 2 {
        if g == 3 {
            return Err(invalid(
                "the genus-3 second Hilbert point is non-semistable; no certificate exists",
            ));
        }
        let e1 = type1(model, 2)?;
        let e2 = type2(model, 2, None)?;
        let w1 = e1.weight_form(&ctx);
        let w2 = e2.weight_form(&ctx);
        let coeffs = positive_kernel(&[w1.canonical(), w2.canonical()])
            .ok_or(ConstructionError::NoPositiveSolution)?;
        let entries = vec![
            cert_entry(coeffs[0].clone(), "wiman:TypeI", g, m, w1, e1),
            cert_entry(coeffs[1].clone(), "wiman:M2TypeII", g, m, w2, e2),
        ];
        return Ok(WimanCertificate::Semistable(Certificate {
            mode: CertMode::Semistable,
            entries,
        }));
    }
    if m < 3 {
        return Err(invalid("wiman certificates require m >= 2"));
    }
    let mut certs = Vec::new();
    for (v, _) in model.vars().iter().enumerate() {
        certs.push(pointed_certificate(model, m, v, &default_pointing(model, m, v))?);
    }
    Ok(WimanCertificate::Pointed(certs))
}

/// Pointing at variable `v` with half the feasibility bound, the tool's
/// default.
pub fn default_pointing(model: &CurveModel, m: u32, v: usize) -> Pointing {
    let var = &model.vars()[v];
    match var.block {
        VarBlock::X => Pointing::AtX {
            i: var.index,
            eps: eps_max(model, 3) / Rat::int(2),
        },
        VarBlock::Y => Pointing::AtY {
            j: var.index,
            delta: delta_max(model, m) / Rat::int(2),
        },
        _ => unreachable!(),
    }
}

fn cert_entry(c: Rat, family: &str, g: u32, m: u32, form: WeightForm, expr: MbExpr) -> CertEntry {
    CertEntry {
        coefficient: c,
        family: family.into(),
        params: serde_json::json!({"g": g, "m": m}),
        form,
        expr: Some(expr),
    }
}

/// Certificate reducing to a positive multiple of `rho_v` on the hyperplane.
pub fn pointed_certificate(
    model: &CurveModel,
    m: u32,
    v: usize,
    pointing: &Pointing,
) -> Result<Certificate, ConstructionError> {
    let g = model.genus();
    let ctx = model.mb_ctx();
    let e1 = type1(model, m)?;
    let e2 = type2(model, m, Some(pointing))?;
    let w1 = e1.weight_form(&ctx);
    let w2 = e2.weight_form(&ctx);
    let ev = WeightForm::unit(model.num_vars(), v);
    let coeffs = positive_kernel(&[
        w1.canonical(),
        w2.canonical(),
        ev.canonical().scale(&-Rat::one()),
    ])
    .ok_or(ConstructionError::NoPositiveSolution)?;
    Ok(Certificate {
        mode: CertMode::StablePointed { var: v },
        entries: vec![
            cert_entry(coeffs[0].clone(), "wiman:TypeI", g, m, w1, e1),
            cert_entry(coeffs[1].clone(), "wiman:TypeII", g, m, w2, e2),
        ],
    })
}

/// Strictly positive kernel vector of the column system, cleared to
/// integers.
fn positive_kernel(cols: &[WeightForm]) -> Option<QVec> {
    let n = cols[0].num_vars();
    let a: Vec<QVec> = (0..n)
        .map(|r| cols.iter().map(|c| c.coeffs[r].clone()).collect())
        .collect();
    let zero = vec![Rat::zero(); n];
    let (p, null) = solve_linear(&a, &zero)?;
    debug_assert!(p.iter().all(Rat::is_zero));
    let sol = make_positive(&p, &null, true)?;
    Some(clear_denominators(&sol))
}

/// Extracts a strictly negative-weight monomial basis from the pointed
/// certificate at the most negative coordinate of `rho`.
pub fn wiman_negative_basis(
    model: &CurveModel,
    m: u32,
    rho: &[Rat],
) -> Result<(crate::basiskit::BasisCandidate, Rat), ConstructionError> {
    check_model(model)?;
    if m < 3 {
        return Err(invalid("negative-basis extraction requires m >= 3"));
    }
    if rho.len() != model.num_vars() {
        return Err(invalid("rho has the wrong dimension"));
    }
    if rho.iter().all(Rat::is_zero) {
        return Err(invalid("rho must be nonzero"));
    }
    let trace: Rat = rho.iter().cloned().sum();
    if !trace.is_zero() {
        return Err(invalid("rho must be traceless"));
    }
    let v = (0..rho.len())
        .min_by(|&a, &b| rho[a].cmp(&rho[b]))
        .expect("nonempty rho");
    assert!(
        rho[v].is_negative(),
        "a traceless nonzero rho has a negative entry"
    );
    let cert = pointed_certificate(model, m, v, &default_pointing(model, m, v))?;
    let ctx = model.mb_ctx();
    let expr = MbExpr::concat(
        cert.entries
            .iter()
            .map(|e| (e.coefficient.clone(), e.expr.clone().expect("expr kept")))
            .collect(),
    );
    let member = expr.extract(&ctx, rho);
    let w = crate::basiskit::WeightForm::of_candidate(model.num_vars(), &member).dot(rho);
    assert!(w.is_negative(), "extracted member must have negative weight");
    Ok((member, w))
}
