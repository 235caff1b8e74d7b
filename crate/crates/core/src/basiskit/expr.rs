//! Lazy multibasis expression trees.
//!
//! A multibasis is a multiset of bases of one target subspace. Weight forms
//! are evaluated compositionally without materializing members; members are
//! only materialized for verification, under an explicit budget. Subtrees are
//! reference-counted and evaluation is memoized per shared node, so deeply
//! recursive constructions stay linear to evaluate.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::models::{CurveModel, Monomial};
use crate::ratlin::{EchelonState, Insert, QVec, Rat, SplitMix64};

use super::{is_monomial_basis, BasisCandidate, BasisVerdict, WeightForm};

/// Evaluation context: the variable universe and the per-variable degree used
/// by the path-extension node.
#[derive(Debug, Clone)]
pub struct MbCtx {
    pub num_vars: usize,
    /// Degree of each variable in the graded chain the path construction
    /// walks (the exponent of `z` for the Wiman curve; the position for a
    /// standalone rational normal curve block).
    pub z_degree: Vec<u32>,
}

impl CurveModel {
    pub fn mb_ctx(&self) -> MbCtx {
        MbCtx {
            num_vars: self.num_vars(),
            z_degree: self
                .vars()
                .iter()
                .map(|v| v.aux_degree.max(0) as u32)
                .collect(),
        }
    }
}

/// Expression tree of weighted basis families. Children are shared, so a
/// family may appear in several branches without duplicating work.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum MbExpr {
    /// A single basis.
    Leaf(BasisCandidate),
    /// Multiset union of multibases with positive rational multiplicities.
    /// Integer multiplicities realize literal copies; rational ones realize
    /// the averaged families after clearing denominators.
    Concat(Vec<(Rat, Arc<MbExpr>)>),
    /// Multibasis of a direct sum: members are unions, one from each child.
    Sum(Vec<Arc<MbExpr>>),
    /// Every monomial of every member is multiplied by a fixed factor.
    MulFixed {
        factor: Monomial,
        child: Arc<MbExpr>,
    },
    /// One fixed monomial is appended to every member.
    AddSingleton {
        mono: Monomial,
        child: Arc<MbExpr>,
    },
    /// Degree-balanced product with a block of variables: a child member
    /// with one element per degree `0..=D'` is extended to one element per
    /// degree `0..=D'+n` by all balanced pairings with the block.
    PathExtend {
        block: Vec<usize>,
        child: Arc<MbExpr>,
    },
}

/// Per-call memo tables, keyed by shared node identity.
struct Memo<T> {
    table: HashMap<*const MbExpr, T>,
}

impl<T> Default for Memo<T> {
    fn default() -> Self {
        Memo {
            table: HashMap::new(),
        }
    }
}

impl<T: Clone> Memo<T> {
    fn get_or(&mut self, node: &MbExpr, f: impl FnOnce(&mut Self) -> T) -> T {
        let key = node as *const MbExpr;
        if let Some(v) = self.table.get(&key) {
            return v.clone();
        }
        let v = f(self);
        self.table.insert(key, v.clone());
        v
    }
}

impl MbExpr {
    pub fn leaf(monomials: Vec<Monomial>) -> MbExpr {
        MbExpr::Leaf(BasisCandidate::new(monomials))
    }

    /// `d * S`: the d-fold copy. Weight forms are unaffected; the
    /// multiplicity only matters inside an enclosing concatenation.
    pub fn scale(d: i64, child: MbExpr) -> MbExpr {
        assert!(d > 0, "multiplicities must be positive");
        MbExpr::Concat(vec![(Rat::int(d), Arc::new(child))])
    }

    pub fn concat(children: Vec<(Rat, MbExpr)>) -> MbExpr {
        MbExpr::concat_shared(
            children
                .into_iter()
                .map(|(c, e)| (c, Arc::new(e)))
                .collect(),
        )
    }

    pub fn concat_shared(children: Vec<(Rat, Arc<MbExpr>)>) -> MbExpr {
        let children: Vec<_> = children
            .into_iter()
            .filter(|(c, _)| !c.is_zero())
            .collect();
        assert!(!children.is_empty(), "empty concatenation");
        assert!(
            children.iter().all(|(c, _)| c.is_positive()),
            "multiplicities must be positive"
        );
        MbExpr::Concat(children)
    }

    /// Number of monomials in every member.
    pub fn member_len(&self) -> usize {
        self.member_len_memo(&mut Memo::default())
    }

    fn member_len_memo(&self, memo: &mut Memo<usize>) -> usize {
        memo.get_or(self, |memo| match self {
            MbExpr::Leaf(b) => b.len(),
            MbExpr::Concat(ch) => {
                let l = ch[0].1.member_len_memo(memo);
                debug_assert!(ch.iter().all(|(_, e)| e.member_len_memo(memo) == l));
                l
            }
            MbExpr::Sum(ch) => ch.iter().map(|e| e.member_len_memo(memo)).sum(),
            MbExpr::MulFixed { child, .. } => child.member_len_memo(memo),
            MbExpr::AddSingleton { child, .. } => child.member_len_memo(memo) + 1,
            MbExpr::PathExtend { block, child } => {
                child.member_len_memo(memo) + block.len() - 1
            }
        })
    }

    /// Compositional weight form; never materializes the family.
    pub fn weight_form(&self, ctx: &MbCtx) -> WeightForm {
        self.weight_memo(ctx, &mut Memo::default(), &mut Memo::default())
    }

    fn weight_memo(
        &self,
        ctx: &MbCtx,
        memo: &mut Memo<WeightForm>,
        lens: &mut Memo<usize>,
    ) -> WeightForm {
        let n = ctx.num_vars;
        if let Some(w) = memo.table.get(&(self as *const MbExpr)) {
            return w.clone();
        }
        let w = match self {
            MbExpr::Leaf(b) => WeightForm::of_candidate(n, b),
            MbExpr::Concat(ch) => {
                let total: Rat = ch.iter().map(|(c, _)| c.clone()).sum();
                let mut acc = WeightForm::zero(n);
                for (c, e) in ch {
                    acc = acc.add(&e.weight_memo(ctx, memo, lens).scale(c));
                }
                acc.scale(&total.recip())
            }
            MbExpr::Sum(ch) => {
                let mut acc = WeightForm::zero(n);
                for e in ch {
                    acc = acc.add(&e.weight_memo(ctx, memo, lens));
                }
                acc
            }
            MbExpr::MulFixed { factor, child } => {
                let len = Rat::int(child.member_len_memo(lens) as i64);
                child
                    .weight_memo(ctx, memo, lens)
                    .add(&WeightForm::of_monomial(n, factor).scale(&len))
            }
            MbExpr::AddSingleton { mono, child } => child
                .weight_memo(ctx, memo, lens)
                .add(&WeightForm::of_monomial(n, mono)),
            MbExpr::PathExtend { block, child } => {
                // child members index degrees 0..=D', the block 0..=n_b;
                // every member of the extension has D+1 = D'+n_b+1 elements,
                // block variables appear (D+1)/(n_b+1) times on average and
                // each child element (D+1)/(D'+1) times.
                let dp = child.member_len_memo(lens) as i64 - 1;
                let nb = block.len() as i64 - 1;
                let d = dp + nb;
                let mut block_ones = WeightForm::zero(n);
                for &v in block {
                    block_ones.coeffs[v] = Rat::one();
                }
                block_ones.scale(&Rat::new(d + 1, nb + 1)).add(
                    &child
                        .weight_memo(ctx, memo, lens)
                        .scale(&Rat::new(d + 1, dp + 1)),
                )
            }
        };
        memo.table.insert(self as *const MbExpr, w.clone());
        w
    }

    /// Number of distinct structural members.
    pub fn member_count(&self, ctx: &MbCtx) -> BigUint {
        self.count_memo(ctx, &mut Memo::default(), &mut Memo::default())
    }

    fn count_memo(
        &self,
        ctx: &MbCtx,
        memo: &mut Memo<BigUint>,
        lens: &mut Memo<usize>,
    ) -> BigUint {
        if let Some(v) = memo.table.get(&(self as *const MbExpr)) {
            return v.clone();
        }
        let v = match self {
            MbExpr::Leaf(_) => BigUint::one(),
            MbExpr::Concat(ch) => ch.iter().map(|(_, e)| e.count_memo(ctx, memo, lens)).sum(),
            MbExpr::Sum(ch) => ch.iter().map(|e| e.count_memo(ctx, memo, lens)).product(),
            MbExpr::MulFixed { child, .. } | MbExpr::AddSingleton { child, .. } => {
                child.count_memo(ctx, memo, lens)
            }
            MbExpr::PathExtend { block, child } => {
                let dp = child.member_len_memo(lens) as u64 - 1;
                let nb = block.len() as u64 - 1;
                let mut acc = child.count_memo(ctx, memo, lens);
                for t in 0..=(dp + nb) {
                    let lo = t.saturating_sub(dp);
                    let hi = nb.min(t);
                    acc *= BigUint::from(hi - lo + 1);
                }
                acc
            }
        };
        memo.table.insert(self as *const MbExpr, v.clone());
        v
    }

    /// Extracts a member whose rho-weight is at most the multibasis weight:
    /// concatenations navigate to a minimizing child, sums take the union of
    /// extracted parts, path extensions take per-degree minimizers.
    pub fn extract(&self, ctx: &MbCtx, rho: &[Rat]) -> BasisCandidate {
        self.extract_memo(ctx, rho, &mut Memo::default()).0
    }

    fn extract_memo(
        &self,
        ctx: &MbCtx,
        rho: &[Rat],
        memo: &mut Memo<(BasisCandidate, Rat)>,
    ) -> (BasisCandidate, Rat) {
        if let Some(v) = memo.table.get(&(self as *const MbExpr)) {
            return v.clone();
        }
        let weight_of = |cand: &BasisCandidate| WeightForm::of_candidate(ctx.num_vars, cand).dot(rho);
        let v: (BasisCandidate, Rat) = match self {
            MbExpr::Leaf(b) => {
                let w = weight_of(b);
                (b.clone(), w)
            }
            MbExpr::Concat(ch) => {
                let mut best: Option<(BasisCandidate, Rat)> = None;
                for (_, e) in ch {
                    let (cand, w) = e.extract_memo(ctx, rho, memo);
                    if best.as_ref().map_or(true, |(_, bw)| w < *bw) {
                        best = Some((cand, w));
                    }
                }
                best.expect("nonempty concatenation")
            }
            MbExpr::Sum(ch) => {
                let mut acc = BasisCandidate::new(Vec::new());
                let mut w = Rat::zero();
                for e in ch {
                    let (cand, cw) = e.extract_memo(ctx, rho, memo);
                    acc = acc.union(&cand);
                    w += cw;
                }
                (acc, w)
            }
            MbExpr::MulFixed { factor, child } => {
                let (cand, _) = child.extract_memo(ctx, rho, memo);
                let cand = BasisCandidate::new(
                    cand.monomials().iter().map(|m| m.mul(factor)).collect(),
                );
                let w = weight_of(&cand);
                (cand, w)
            }
            MbExpr::AddSingleton { mono, child } => {
                let (cand, w) = child.extract_memo(ctx, rho, memo);
                let mut monos = cand.monomials().to_vec();
                let mw = WeightForm::of_monomial(ctx.num_vars, mono).dot(rho);
                monos.push(mono.clone());
                (BasisCandidate::new(monos), w + mw)
            }
            MbExpr::PathExtend { block, child } => {
                let (cand, _) = child.extract_memo(ctx, rho, memo);
                let elems = by_degree(ctx, &cand);
                let dp = elems.len() - 1;
                let nb = block.len() - 1;
                let elem_w: Vec<Rat> = elems
                    .iter()
                    .map(|m| WeightForm::of_monomial(ctx.num_vars, m).dot(rho))
                    .collect();
                let mut out = Vec::with_capacity(dp + nb + 1);
                let mut w = Rat::zero();
                for t in 0..=(dp + nb) {
                    let lo = t.saturating_sub(dp);
                    let hi = nb.min(t);
                    let best = (lo..=hi)
                        .min_by_key(|&i| (&rho[block[i]] + &elem_w[t - i], i))
                        .expect("nonempty degree class");
                    w += &rho[block[best]] + &elem_w[t - best];
                    out.push(elems[t - best].times_var(block[best]));
                }
                (BasisCandidate::new(out), w)
            }
        };
        memo.table.insert(self as *const MbExpr, v.clone());
        v
    }

    /// All members with their tree paths, or `None` once `limit` is exceeded.
    pub fn collect_members(
        &self,
        ctx: &MbCtx,
        limit: usize,
    ) -> Option<Vec<(String, BasisCandidate)>> {
        let mut out = Vec::new();
        self.collect_into(ctx, limit, "", &mut out)?;
        Some(out)
    }

    fn collect_into(
        &self,
        ctx: &MbCtx,
        limit: usize,
        path: &str,
        out: &mut Vec<(String, BasisCandidate)>,
    ) -> Option<()> {
        match self {
            MbExpr::Leaf(b) => {
                if out.len() >= limit {
                    return None;
                }
                out.push((format!("{path}leaf"), b.clone()));
            }
            MbExpr::Concat(ch) => {
                for (i, (_, e)) in ch.iter().enumerate() {
                    e.collect_into(ctx, limit, &format!("{path}cat[{i}]/"), out)?;
                }
            }
            MbExpr::Sum(ch) => {
                let mut parts: Vec<Vec<(String, BasisCandidate)>> = Vec::new();
                for (i, e) in ch.iter().enumerate() {
                    let mut sub = Vec::new();
                    e.collect_into(ctx, limit, &format!("{path}sum[{i}]/"), &mut sub)?;
                    parts.push(sub);
                }
                let mut acc: Vec<(String, BasisCandidate)> =
                    vec![(String::new(), BasisCandidate::new(Vec::new()))];
                for part in &parts {
                    let mut next = Vec::new();
                    for (ap, ac) in &acc {
                        for (bp, bc) in part {
                            if next.len() + out.len() > limit {
                                return None;
                            }
                            let sep = if ap.is_empty() { "" } else { "+" };
                            next.push((format!("{ap}{sep}{bp}"), ac.union(bc)));
                        }
                    }
                    acc = next;
                }
                if out.len() + acc.len() > limit {
                    return None;
                }
                out.extend(acc);
            }
            MbExpr::MulFixed { factor, child } => {
                let mut sub = Vec::new();
                child.collect_into(ctx, limit, path, &mut sub)?;
                for (p, c) in sub {
                    out.push((
                        p,
                        BasisCandidate::new(
                            c.monomials().iter().map(|m| m.mul(factor)).collect(),
                        ),
                    ));
                }
            }
            MbExpr::AddSingleton { mono, child } => {
                let mut sub = Vec::new();
                child.collect_into(ctx, limit, path, &mut sub)?;
                for (p, c) in sub {
                    let mut m = c.monomials().to_vec();
                    m.push(mono.clone());
                    out.push((p, BasisCandidate::new(m)));
                }
            }
            MbExpr::PathExtend { block, child } => {
                let mut sub = Vec::new();
                child.collect_into(ctx, limit, path, &mut sub)?;
                let nb = block.len() - 1;
                for (p, c) in sub {
                    let elems = by_degree(ctx, &c);
                    let dp = elems.len() - 1;
                    let mut acc: Vec<Vec<Monomial>> = vec![Vec::new()];
                    for t in 0..=(dp + nb) {
                        let lo = t.saturating_sub(dp);
                        let hi = nb.min(t);
                        let mut next = Vec::new();
                        for pref in &acc {
                            for i in lo..=hi {
                                if out.len() + next.len() > limit {
                                    return None;
                                }
                                let mut v = pref.clone();
                                v.push(elems[t - i].times_var(block[i]));
                                next.push(v);
                            }
                        }
                        acc = next;
                    }
                    if out.len() + acc.len() > limit {
                        return None;
                    }
                    for (j, v) in acc.into_iter().enumerate() {
                        out.push((format!("{p}*path#{j}"), BasisCandidate::new(v)));
                    }
                }
            }
        }
        Some(())
    }

    /// Deterministic pseudorandom member.
    pub fn sample(&self, ctx: &MbCtx, rng: &mut SplitMix64) -> BasisCandidate {
        match self {
            MbExpr::Leaf(b) => b.clone(),
            MbExpr::Concat(ch) => ch[rng.below(ch.len())].1.sample(ctx, rng),
            MbExpr::Sum(ch) => {
                let mut acc = BasisCandidate::new(Vec::new());
                for e in ch {
                    acc = acc.union(&e.sample(ctx, rng));
                }
                acc
            }
            MbExpr::MulFixed { factor, child } => BasisCandidate::new(
                child
                    .sample(ctx, rng)
                    .monomials()
                    .iter()
                    .map(|m| m.mul(factor))
                    .collect(),
            ),
            MbExpr::AddSingleton { mono, child } => {
                let mut m = child.sample(ctx, rng).monomials().to_vec();
                m.push(mono.clone());
                BasisCandidate::new(m)
            }
            MbExpr::PathExtend { block, child } => {
                let elems = by_degree(ctx, &child.sample(ctx, rng));
                let dp = elems.len() - 1;
                let nb = block.len() - 1;
                let mut out = Vec::new();
                for t in 0..=(dp + nb) {
                    let lo = t.saturating_sub(dp);
                    let hi = nb.min(t);
                    let i = lo + rng.below(hi - lo + 1);
                    out.push(elems[t - i].times_var(block[i]));
                }
                BasisCandidate::new(out)
            }
        }
    }
}

/// Orders a candidate's monomials by z-degree, asserting one per degree.
fn by_degree(ctx: &MbCtx, cand: &BasisCandidate) -> Vec<Monomial> {
    let deg = |m: &Monomial| -> usize {
        m.iter_factors()
            .map(|(v, e)| ctx.z_degree[v] as usize * e as usize)
            .sum()
    };
    let mut slots: Vec<Option<Monomial>> = vec![None; cand.len()];
    for m in cand.monomials() {
        let d = deg(m);
        assert!(
            d < slots.len() && slots[d].is_none(),
            "path extension requires one element per degree 0..len"
        );
        slots[d] = Some(m.clone());
    }
    slots.into_iter().map(|s| s.unwrap()).collect()
}

/// A space the images of monomials live in; lets multibasis machinery verify
/// members against either a full curve model or a standalone block.
pub trait SectionSpace {
    fn num_vars(&self) -> usize;
    fn image_of(&self, mono: &Monomial) -> QVec;
}

impl SectionSpace for CurveModel {
    fn num_vars(&self) -> usize {
        CurveModel::num_vars(self)
    }
    fn image_of(&self, mono: &Monomial) -> QVec {
        self.expand(mono).coords
    }
}

/// Rational normal curve block: variable `i` is `z^i`, a degree-`m` monomial
/// maps to the indicator of its total z-degree.
pub struct RncSpace {
    pub num_vars: usize,
    pub degree: u32,
}

impl SectionSpace for RncSpace {
    fn num_vars(&self) -> usize {
        self.num_vars
    }
    fn image_of(&self, mono: &Monomial) -> QVec {
        assert_eq!(mono.degree(), self.degree);
        let top = (self.num_vars - 1) * self.degree as usize;
        let d: usize = mono.iter_factors().map(|(v, e)| v * e as usize).sum();
        let mut out = crate::ratlin::zeros(top + 1);
        out[d] = Rat::one();
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MbError {
    #[error("sum children overlap: union of representatives has rank {rank}, expected {want}")]
    SumOverlap { rank: usize, want: usize },
}

/// Builds a `Sum` node, verifying rank additivity on one representative
/// member per child: the union must be linearly independent.
pub fn sum_checked(
    space: &dyn SectionSpace,
    ctx: &MbCtx,
    children: Vec<MbExpr>,
) -> Result<MbExpr, MbError> {
    let zero = vec![Rat::zero(); ctx.num_vars];
    let mut union = BasisCandidate::new(Vec::new());
    for ch in &children {
        union = union.union(&ch.extract(ctx, &zero));
    }
    let want = union.len();
    let dim = space.image_of(&union.monomials()[0]).len();
    let mut st = EchelonState::new(dim);
    let mut rank = 0;
    for m in union.monomials() {
        if st.try_insert(&space.image_of(m)).expect("fixed dim") == Insert::Accepted {
            rank += 1;
        }
    }
    if rank != want {
        return Err(MbError::SumOverlap { rank, want });
    }
    Ok(MbExpr::Sum(children.into_iter().map(Arc::new).collect()))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MemberFailure {
    pub path: String,
    pub detail: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MultibasisReport {
    pub exhaustive: bool,
    pub member_count: String,
    pub members_checked: usize,
    pub failures: Vec<MemberFailure>,
}

impl MultibasisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies members of the expression as monomial bases. All members are
/// checked when the count fits the budget; otherwise a deterministic
/// pseudorandom sample of `budget` members plus the extremal members under
/// every coordinate direction.
pub fn verify_multibasis(
    model: &CurveModel,
    m: u32,
    expr: &MbExpr,
    budget: usize,
    seed: u64,
) -> MultibasisReport {
    let ctx = model.mb_ctx();
    let count = expr.member_count(&ctx);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let check = |path: String, cand: &BasisCandidate, failures: &mut Vec<MemberFailure>| {
        match is_monomial_basis(model, m, cand) {
            BasisVerdict::Basis => {}
            v => failures.push(MemberFailure {
                path,
                detail: format!("{v:?}"),
            }),
        }
    };
    let exhaustive = count <= BigUint::from(budget);
    if exhaustive {
        let members = expr
            .collect_members(&ctx, budget)
            .expect("count fits the budget");
        for (path, cand) in &members {
            check(path.clone(), cand, &mut failures);
            checked += 1;
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        for i in 0..budget {
            let cand = expr.sample(&ctx, &mut rng);
            check(format!("sample#{i}"), &cand, &mut failures);
            checked += 1;
        }
        for v in 0..ctx.num_vars {
            for sign in [1i64, -1] {
                let mut rho = vec![Rat::zero(); ctx.num_vars];
                rho[v] = Rat::int(sign);
                let cand = expr.extract(&ctx, &rho);
                check(
                    format!("extremal(var={v},sign={sign})"),
                    &cand,
                    &mut failures,
                );
                checked += 1;
            }
        }
    }
    MultibasisReport {
        exhaustive,
        member_count: count.to_string(),
        members_checked: checked,
        failures,
    }
}
