//! Torus (semi)stability decisions, independent of the explicit
//! constructions: exact matroid-greedy minimum-weight monomial bases inside a
//! cutting-plane loop over the state polytope, destabilizer checks, and a
//! brute-force oracle for tiny instances.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::basiskit::{BasisCandidate, CertEntry, CertMode, Certificate, WeightForm};
use crate::models::{CurveModel, Monomial};
use crate::ratlin::{
    solve_lp, EchelonState, Insert, LinearProgram, LpStatus, QVec, Rat,
};

#[derive(Debug, Clone)]
pub struct Budget {
    pub max_cuts: usize,
    pub max_work: u64,
    /// Cap on the monomial count the greedy oracle will enumerate.
    pub max_monomials: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cuts: 10_000,
            max_work: 100_000_000,
            max_monomials: 2_000_000,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("undecided (budget): {0}")]
    Budget(String),
    #[error("rho must be traceless and nonzero")]
    BadRho,
    #[error("rho has the wrong dimension")]
    Dim,
    #[error("internal LP failure: {0}")]
    Lp(String),
}

/// A traceless weight vector over the model's variables. `new` rejects
/// vectors with nonzero trace; `project` removes the mean instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rho(pub QVec);

impl Rho {
    pub fn new(weights: QVec) -> Result<Self, EngineError> {
        let trace: Rat = weights.iter().cloned().sum();
        if !trace.is_zero() {
            return Err(EngineError::BadRho);
        }
        Ok(Rho(weights))
    }

    pub fn project(weights: &[Rat]) -> Self {
        Rho(crate::ratlin::center(weights))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Stable,
    StrictlySemistable,
    NonSemistable,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Convex combination of basis weight vectors equal to a multiple of the
    /// all-ones covector on the hyperplane, from the LP duals.
    Certificate(Certificate),
    /// A destabilizing one-parameter subgroup with its exact minimum weight.
    Destabilizer { rho: QVec, min_weight: Rat },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// `max` over traceless `rho` on the unit box boundary of the minimum
    /// basis weight.
    pub margin: Rat,
    pub witness: Witness,
    pub cuts_used: usize,
    pub runtime_ms: u64,
}

/// Minimum-weight monomial basis over all monomial bases of the degree-`m`
/// space: matroid greedy over the vector matroid of monomial images, ties
/// broken by graded-lex order.
pub fn greedy_min_basis(
    model: &CurveModel,
    m: u32,
    rho: &[Rat],
) -> Result<(BasisCandidate, Rat), EngineError> {
    greedy_with_budget(model, m, rho, &Budget::default()).map(|(b, w, _)| (b, w))
}

fn greedy_with_budget(
    model: &CurveModel,
    m: u32,
    rho: &[Rat],
    budget: &Budget,
) -> Result<(BasisCandidate, Rat, u64), EngineError> {
    if rho.len() != model.num_vars() {
        return Err(EngineError::Dim);
    }
    if model.monomial_count(m) > BigUint::from(budget.max_monomials) {
        return Err(EngineError::Budget(format!(
            "degree-{m} monomial count {} exceeds the enumeration cap",
            model.monomial_count(m)
        )));
    }
    let monos = model.monomials(m);
    let mut keyed: Vec<(Rat, &Monomial)> = monos
        .iter()
        .map(|mono| {
            let w: Rat = mono
                .iter_factors()
                .map(|(v, e)| &rho[v] * &Rat::int(e as i64))
                .sum();
            (w, mono)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let want = model.hilbert_dim(m);
    let dim = model.degree_ctx(m).axes.len();
    let mut st = EchelonState::new(dim);
    let mut picked = Vec::with_capacity(want);
    let mut weight = Rat::zero();
    for (w, mono) in keyed {
        if st.try_insert(&model.image(mono).coords).expect("fixed dim") == Insert::Accepted {
            weight += w;
            picked.push(mono.clone());
            if picked.len() == want {
                break;
            }
        }
        if st.work() > budget.max_work {
            return Err(EngineError::Budget("rank-update budget exhausted".into()));
        }
    }
    assert_eq!(picked.len(), want, "monomial images span the target space");
    Ok((BasisCandidate::new(picked), weight, st.work()))
}

struct Cut {
    canon: QVec,
    form: WeightForm,
    basis: BasisCandidate,
}

struct Pool {
    cuts: Vec<Cut>,
    index: BTreeMap<QVec, usize>,
}

impl Pool {
    fn new() -> Self {
        Pool {
            cuts: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    /// Deduplicates by the canonical hyperplane representative.
    fn add(&mut self, n: usize, basis: BasisCandidate) -> bool {
        let form = WeightForm::of_candidate(n, &basis);
        let canon = form.canonical().coeffs;
        if self.index.contains_key(&canon) {
            return false;
        }
        self.index.insert(canon.clone(), self.cuts.len());
        self.cuts.push(Cut { canon, form, basis });
        true
    }
}

/// One slice of the box boundary: maximize `t` subject to the pool cuts,
/// `sum rho = 0`, `|rho_i| <= 1` and `rho_v = sigma`.
fn slice_lp(pool: &Pool, n: usize, v: usize, sigma: i64) -> LinearProgram {
    // variables rho_0..rho_{n-1}, t
    let mut lp = LinearProgram {
        maximize: {
            let mut c = crate::ratlin::zeros(n + 1);
            c[n] = Rat::one();
            c
        },
        ..Default::default()
    };
    for cut in &pool.cuts {
        let mut row = cut.canon.iter().map(|x| -x.clone()).collect::<QVec>();
        row.push(Rat::one());
        lp.ineqs.push((row, Rat::zero()));
    }
    for i in 0..n {
        let mut up = crate::ratlin::zeros(n + 1);
        up[i] = Rat::one();
        lp.ineqs.push((up.clone(), Rat::one()));
        up[i] = -Rat::one();
        lp.ineqs.push((up, Rat::one()));
    }
    let mut trace = vec![Rat::one(); n];
    trace.push(Rat::zero());
    lp.eqs.push((trace, Rat::zero()));
    let mut fix = crate::ratlin::zeros(n + 1);
    fix[v] = Rat::one();
    lp.eqs.push((fix, Rat::int(sigma)));
    lp
}

/// Decides torus (semi)stability of the degree-`m` Hilbert point.
///
/// Cutting-plane loop: the master LP maximizes the worst cut value over one
/// boundary slice of the trace-zero box; the greedy oracle either confirms
/// the LP value (slice solved exactly) or contributes a strictly better
/// vertex of the state polytope as a new cut. Slices range over one
/// representative variable per model symmetry class and both box signs, so
/// the final margin is the exact maximum over the whole boundary.
pub fn decide(model: &CurveModel, m: u32, budget: &Budget) -> Result<Verdict, EngineError> {
    let start = Instant::now();
    let n = model.num_vars();
    let mut pool = Pool::new();
    let mut work: u64 = 0;
    let zero = crate::ratlin::zeros(n);
    let (seed, _, w0) = greedy_with_budget(model, m, &zero, budget)?;
    work += w0;
    pool.add(n, seed);

    let mut reps: Vec<usize> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, &c) in model.symmetry_classes().iter().enumerate() {
        if seen.insert(c) {
            reps.push(i);
        }
    }

    let mut margin: Option<Rat> = None;
    let mut best_rho: Option<QVec> = None;
    for &v in &reps {
        for sigma in [1i64, -1] {
            let mut last_t: Option<Rat> = None;
            loop {
                if pool.cuts.len() > budget.max_cuts {
                    return Err(EngineError::Budget("cut budget exhausted".into()));
                }
                let lp = slice_lp(&pool, n, v, sigma);
                let sol = solve_lp(&lp).map_err(|e| EngineError::Lp(e.to_string()))?;
                if sol.status != LpStatus::Optimal {
                    return Err(EngineError::Lp(format!(
                        "slice LP unexpectedly {:?}",
                        sol.status
                    )));
                }
                let t = sol.objective.clone();
                // the master value never increases as cuts accumulate
                if let Some(prev) = &last_t {
                    assert!(t <= *prev, "master LP value increased");
                }
                last_t = Some(t.clone());
                let rho_star = sol.primal[..n].to_vec();
                let (basis, w, wk) = greedy_with_budget(model, m, &rho_star, budget)?;
                work += wk;
                if work > budget.max_work {
                    return Err(EngineError::Budget("rank-update budget exhausted".into()));
                }
                if w == t {
                    if margin.as_ref().map_or(true, |mu| t > *mu) {
                        margin = Some(t.clone());
                        best_rho = Some(rho_star);
                    }
                    break;
                }
                assert!(w < t, "greedy cannot exceed the master value");
                let added = pool.add(n, basis);
                assert!(added, "violated cut must be new");
            }
        }
    }

    let margin = margin.expect("at least one slice");
    let status = if margin.is_negative() {
        Status::Stable
    } else if margin.is_zero() {
        Status::StrictlySemistable
    } else {
        Status::NonSemistable
    };
    let witness = match status {
        Status::NonSemistable => Witness::Destabilizer {
            rho: best_rho.expect("positive slice recorded"),
            min_weight: margin.clone(),
        },
        _ => Witness::Certificate(pool_certificate(&pool, n)?),
    };
    Ok(Verdict {
        status,
        margin,
        witness,
        cuts_used: pool.cuts.len(),
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Convex combination of pool cuts vanishing on the hyperplane; feasible
/// whenever every slice converged to a non-positive value.
fn pool_certificate(pool: &Pool, n: usize) -> Result<Certificate, EngineError> {
    let p = pool.cuts.len();
    let mut lp = LinearProgram {
        maximize: crate::ratlin::zeros(p),
        ..Default::default()
    };
    for j in 0..p {
        let mut row = crate::ratlin::zeros(p);
        row[j] = -Rat::one();
        lp.ineqs.push((row, Rat::zero()));
    }
    for i in 0..n {
        let row: QVec = pool.cuts.iter().map(|c| c.canon[i].clone()).collect();
        lp.eqs.push((row, Rat::zero()));
    }
    lp.eqs.push((vec![Rat::one(); p], Rat::one()));
    let sol = solve_lp(&lp).map_err(|e| EngineError::Lp(e.to_string()))?;
    if sol.status != LpStatus::Optimal {
        return Err(EngineError::Lp(
            "certificate LP infeasible over the cut pool".into(),
        ));
    }
    let entries = pool
        .cuts
        .iter()
        .zip(&sol.primal)
        .filter(|(_, c)| c.is_positive())
        .map(|(cut, c)| CertEntry {
            coefficient: c.clone(),
            family: "engine:cut".into(),
            params: serde_json::Value::Null,
            form: cut.form.clone(),
            expr: Some(crate::basiskit::MbExpr::Leaf(cut.basis.clone())),
        })
        .collect();
    Ok(Certificate {
        mode: CertMode::Semistable,
        entries,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DestabReport {
    pub destabilizes: bool,
    pub min_weight: Rat,
    pub basis: BasisCandidate,
}

/// Verdict for a single one-parameter subgroup: `rho` destabilizes iff the
/// greedy minimum weight is strictly positive.
pub fn check_destabilizer(
    model: &CurveModel,
    m: u32,
    rho: &[Rat],
) -> Result<DestabReport, EngineError> {
    if rho.len() != model.num_vars() {
        return Err(EngineError::Dim);
    }
    let trace: Rat = rho.iter().cloned().sum();
    if !trace.is_zero() || rho.iter().all(Rat::is_zero) {
        return Err(EngineError::BadRho);
    }
    let (basis, min_weight) = greedy_min_basis(model, m, rho)?;
    Ok(DestabReport {
        destabilizes: min_weight.is_positive(),
        min_weight,
        basis,
    })
}

/// The exact state: weight vectors of all monomial bases, by exhaustive
/// enumeration with rank pruning. Refuses (rather than samples) when the
/// subset count exceeds `cap`.
pub struct StateSet {
    pub weight_vectors: Vec<QVec>,
    pub num_bases: u64,
}

pub fn brute_force_state(
    model: &CurveModel,
    m: u32,
    cap: u64,
) -> Result<StateSet, EngineError> {
    let monos = model.monomials(m);
    let want = model.hilbert_dim(m);
    let subsets = crate::ratlin::binomial(monos.len() as u64, want as u64);
    if subsets > BigUint::from(cap) {
        return Err(EngineError::Budget(format!(
            "{subsets} size-{want} subsets exceed the cap {cap}"
        )));
    }
    let dim = model.degree_ctx(m).axes.len();
    let images: Vec<_> = monos.iter().map(|mn| model.image(mn)).collect();
    let mut vectors = std::collections::BTreeSet::new();
    let mut num_bases = 0u64;
    let mut chosen: Vec<usize> = Vec::new();

    fn dfs(
        idx: usize,
        st: &EchelonState,
        chosen: &mut Vec<usize>,
        monos: &[Monomial],
        images: &[std::sync::Arc<crate::models::SectionVector>],
        want: usize,
        n: usize,
        vectors: &mut std::collections::BTreeSet<QVec>,
        num_bases: &mut u64,
    ) {
        if chosen.len() == want {
            let cand = BasisCandidate::new(chosen.iter().map(|&i| monos[i].clone()).collect());
            vectors.insert(WeightForm::of_candidate(n, &cand).coeffs);
            *num_bases += 1;
            return;
        }
        if idx == monos.len() || monos.len() - idx < want - chosen.len() {
            return;
        }
        // include idx when independent
        let mut with = st.clone();
        if with.try_insert(&images[idx].coords).expect("fixed dim") == Insert::Accepted {
            chosen.push(idx);
            dfs(idx + 1, &with, chosen, monos, images, want, n, vectors, num_bases);
            chosen.pop();
        }
        // exclude idx
        dfs(idx + 1, st, chosen, monos, images, want, n, vectors, num_bases);
    }

    dfs(
        0,
        &EchelonState::new(dim),
        &mut chosen,
        &monos,
        &images,
        want,
        model.num_vars(),
        &mut vectors,
        &mut num_bases,
    );
    Ok(StateSet {
        weight_vectors: vectors.into_iter().collect(),
        num_bases,
    })
}

/// Exact margin of an explicit state: max over the box boundary of the
/// minimum projected weight, via one LP per (variable, sign) slice.
pub fn state_margin(weight_vectors: &[QVec], n: usize) -> Result<Rat, EngineError> {
    let mut pool = Pool::new();
    for wv in weight_vectors {
        let form = WeightForm {
            coeffs: wv.clone(),
        };
        let canon = form.canonical().coeffs;
        if !pool.index.contains_key(&canon) {
            pool.index.insert(canon.clone(), pool.cuts.len());
            pool.cuts.push(Cut {
                canon,
                form,
                basis: BasisCandidate::new(Vec::new()),
            });
        }
    }
    let mut best: Option<Rat> = None;
    for v in 0..n {
        for sigma in [1i64, -1] {
            let sol = solve_lp(&slice_lp(&pool, n, v, sigma))
                .map_err(|e| EngineError::Lp(e.to_string()))?;
            if sol.status != LpStatus::Optimal {
                return Err(EngineError::Lp(format!("state LP {:?}", sol.status)));
            }
            if best.as_ref().map_or(true, |b| sol.objective > *b) {
                best = Some(sol.objective);
            }
        }
    }
    Ok(best.expect("nonempty slices"))
}

/// Whether the origin lies in the convex hull of the hyperplane-projected
/// weight vectors (the semistability criterion for an explicit state).
pub fn hull_contains_origin(weight_vectors: &[QVec]) -> Result<bool, EngineError> {
    let p = weight_vectors.len();
    let n = weight_vectors.first().map_or(0, |v| v.len());
    let projected: Vec<QVec> = weight_vectors
        .iter()
        .map(|v| crate::ratlin::center(v))
        .collect();
    let mut lp = LinearProgram {
        maximize: crate::ratlin::zeros(p),
        ..Default::default()
    };
    for j in 0..p {
        let mut row = crate::ratlin::zeros(p);
        row[j] = -Rat::one();
        lp.ineqs.push((row, Rat::zero()));
    }
    for i in 0..n {
        let row: QVec = projected.iter().map(|v| v[i].clone()).collect();
        lp.eqs.push((row, Rat::zero()));
    }
    lp.eqs.push((vec![Rat::one(); p], Rat::one()));
    let sol = solve_lp(&lp).map_err(|e| EngineError::Lp(e.to_string()))?;
    Ok(sol.status == LpStatus::Optimal)
}

/// GIT slope `8 + 4/g - 2(g-1)/(gm) + 2/(gm(m-1))`, a reporting utility.
pub fn slope(g: u32, m: u32) -> Rat {
    let g = g as i64;
    let m = m as i64;
    Rat::int(8) + Rat::new(4, g) - Rat::new(2 * (g - 1), g * m) + Rat::new(2, g * m * (m - 1))
}

/// Lower bound `(g-1)(m(g+1) - 2m^2 - g)` on destabilizer weights for the
/// canonically embedded bielliptic curve, a reporting utility.
pub fn bielliptic_weight_bound(g: u32, m: u32) -> Rat {
    let g = g as i64;
    let m = m as i64;
    Rat::int((g - 1) * (m * (g + 1) - 2 * m * m - g))
}
