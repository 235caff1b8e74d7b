use super::linalg::{dot, is_zero_vec, sub_scaled, zeros, QVec};
use super::rat::Rat;

/// `maximize c·x  subject to  A·x ≤ b, E·x = f`, all variables free.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub maximize: QVec,
    pub ineqs: Vec<(QVec, Rat)>,
    pub eqs: Vec<(QVec, Rat)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Exact primal/dual pair. When `status == Optimal`, primal feasibility,
/// dual feasibility, complementary slackness and strong duality all hold
/// exactly; `solve_lp` re-checks them before returning.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: QVec,
    pub objective: Rat,
    pub dual_ineq: QVec,
    pub dual_eq: QVec,
}

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("inconsistent constraint row length")]
    Shape,
    #[error("internal simplex invariant violated: {0}")]
    Internal(&'static str),
}

struct Tableau {
    rows: Vec<QVec>, // m × (ncols + 1), last entry is rhs
    cost: QVec,      // reduced-cost row, length ncols + 1
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, prow: usize, pcol: usize) {
        let inv = self.rows[prow][pcol].recip();
        for x in self.rows[prow].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow_vec = self.rows[prow].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != prow && !row[pcol].is_zero() {
                let f = row[pcol].clone();
                sub_scaled(row, &f, &prow_vec);
            }
        }
        if !self.cost[pcol].is_zero() {
            let f = self.cost[pcol].clone();
            sub_scaled(&mut self.cost, &f, &prow_vec);
        }
        self.basis[prow] = pcol;
    }

    /// Bland's rule: lowest-index entering column with a negative reduced
    /// cost, lowest-index basic variable on ratio ties. Guarantees
    /// termination with exact arithmetic.
    fn run(&mut self, barred: &[bool]) -> Result<(), usize> {
        loop {
            let entering = (0..self.ncols)
                .find(|&j| !barred[j] && self.cost[j].is_negative());
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.ncols] / &self.rows[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return Err(j), // unbounded along column j
            }
        }
    }
}

/// Exact two-phase simplex over the rationals.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.maximize.len();
    for (a, _) in lp.ineqs.iter().chain(&lp.eqs) {
        if a.len() != n {
            return Err(LpError::Shape);
        }
    }
    let m1 = lp.ineqs.len();
    let m2 = lp.eqs.len();
    let m = m1 + m2;

    // Free variables split as x = u - v; slack per inequality; artificial
    // per equality row and per flipped inequality row.
    let mut flipped = vec![false; m];
    let nslack = m1;
    let mut nart = 0usize;
    let mut art_of_row: Vec<Option<usize>> = vec![None; m];
    for (i, (_, b)) in lp.ineqs.iter().enumerate() {
        if b.is_negative() {
            flipped[i] = true;
            art_of_row[i] = Some(nart);
            nart += 1;
        }
    }
    for (i, (_, f)) in lp.eqs.iter().enumerate() {
        if f.is_negative() {
            flipped[m1 + i] = true;
        }
        art_of_row[m1 + i] = Some(nart);
        nart += 1;
    }
    let ncols = 2 * n + nslack + nart;
    let slack_col = |i: usize| 2 * n + i;
    let art_col = |a: usize| 2 * n + nslack + a;

    let mut rows: Vec<QVec> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b) = if i < m1 { &lp.ineqs[i] } else { &lp.eqs[i - m1] };
        let sign = if flipped[i] { -Rat::one() } else { Rat::one() };
        let mut row = zeros(ncols + 1);
        for j in 0..n {
            if !a[j].is_zero() {
                row[j] = &sign * &a[j];
                row[n + j] = -&row[j];
            }
        }
        if i < m1 {
            row[slack_col(i)] = sign.clone();
        }
        row[ncols] = &sign * b;
        match art_of_row[i] {
            Some(acol) => {
                row[art_col(acol)] = Rat::one();
                basis.push(art_col(acol));
            }
            None => basis.push(slack_col(i)),
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        cost: zeros(ncols + 1),
        basis,
        ncols,
    };
    let no_bar = vec![false; ncols];

    // Phase 1: minimize the sum of artificial variables.
    if nart > 0 {
        let mut cost = zeros(ncols + 1);
        for a in 0..nart {
            cost[art_col(a)] = Rat::one();
        }
        for i in 0..m {
            if t.basis[i] >= art_col(0) {
                let row = t.rows[i].clone();
                sub_scaled(&mut cost, &Rat::one(), &row);
            }
        }
        t.cost = cost;
        if t.run(&no_bar).is_err() {
            return Err(LpError::Internal("phase-1 unbounded"));
        }
        let infeas: Rat = (0..m)
            .filter(|&i| t.basis[i] >= art_col(0))
            .map(|i| t.rows[i][ncols].clone())
            .sum();
        if !infeas.is_zero() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                objective: Rat::zero(),
                dual_ineq: Vec::new(),
                dual_eq: Vec::new(),
            });
        }
        // Pivot remaining artificials out where possible; rows with no
        // nonzero structural entry are redundant and stay inert.
        for i in 0..m {
            if t.basis[i] >= art_col(0) {
                if let Some(j) = (0..art_col(0)).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, j);
                }
            }
        }
    }

    // Phase 2: minimize -c·x in the split coordinates.
    let mut cost = zeros(ncols + 1);
    for j in 0..n {
        cost[j] = -lp.maximize[j].clone();
        cost[n + j] = lp.maximize[j].clone();
    }
    for i in 0..m {
        let b = t.basis[i];
        if !cost[b].is_zero() {
            let f = cost[b].clone();
            let row = t.rows[i].clone();
            sub_scaled(&mut cost, &f, &row);
        }
    }
    t.cost = cost;
    let mut barred = vec![false; ncols];
    for a in 0..nart {
        barred[art_col(a)] = true;
    }
    if t.run(&barred).is_err() {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            primal: Vec::new(),
            objective: Rat::zero(),
            dual_ineq: Vec::new(),
            dual_eq: Vec::new(),
        });
    }

    // Read the primal point.
    let mut split = zeros(2 * n);
    for i in 0..m {
        if t.basis[i] < 2 * n {
            split[t.basis[i]] = t.rows[i][ncols].clone();
        }
    }
    let primal: QVec = (0..n).map(|j| &split[j] - &split[n + j]).collect();
    let objective = dot(&lp.maximize, &primal);

    // Duals fall out of the reduced-cost row at the indicator columns. Slack
    // columns carry the row-flip sign, so it cancels there; artificial
    // columns are inserted after flipping and need the sign reapplied.
    let dual_ineq: QVec = (0..m1).map(|i| t.cost[slack_col(i)].clone()).collect();
    let dual_eq: QVec = (0..m2)
        .map(|i| {
            let a = art_of_row[m1 + i].expect("equality rows carry artificials");
            let r = t.cost[art_col(a)].clone();
            if flipped[m1 + i] {
                -r
            } else {
                r
            }
        })
        .collect();

    check_optimal(lp, &primal, &objective, &dual_ineq, &dual_eq)?;
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        objective,
        dual_ineq,
        dual_eq,
    })
}

fn check_optimal(
    lp: &LinearProgram,
    x: &[Rat],
    obj: &Rat,
    y: &[Rat],
    z: &[Rat],
) -> Result<(), LpError> {
    let n = lp.maximize.len();
    for (i, (a, b)) in lp.ineqs.iter().enumerate() {
        let slack = b - &dot(a, x);
        if slack.is_negative() {
            return Err(LpError::Internal("primal infeasible (inequality)"));
        }
        if y[i].is_negative() {
            return Err(LpError::Internal("negative inequality dual"));
        }
        if !(&y[i] * &slack).is_zero() {
            return Err(LpError::Internal("complementary slackness"));
        }
    }
    for (e, f) in &lp.eqs {
        if dot(e, x) != *f {
            return Err(LpError::Internal("primal infeasible (equality)"));
        }
    }
    for j in 0..n {
        let mut lhs = Rat::zero();
        for (i, (a, _)) in lp.ineqs.iter().enumerate() {
            if !a[j].is_zero() {
                lhs += &a[j] * &y[i];
            }
        }
        for (i, (e, _)) in lp.eqs.iter().enumerate() {
            if !e[j].is_zero() {
                lhs += &e[j] * &z[i];
            }
        }
        if lhs != lp.maximize[j] {
            return Err(LpError::Internal("dual feasibility"));
        }
    }
    let dual_obj: Rat = lp
        .ineqs
        .iter()
        .zip(y)
        .map(|((_, b), yi)| b * yi)
        .chain(lp.eqs.iter().zip(z).map(|((_, f), zi)| f * zi))
        .sum();
    if dual_obj != *obj {
        return Err(LpError::Internal("strong duality"));
    }
    let _ = is_zero_vec; // silence unused when debug assertions are off
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn box_maximum() {
        // maximize x s.t. x <= 1, -x <= 1  =>  x* = 1
        let lp = LinearProgram {
            maximize: qv(&[1]),
            ineqs: vec![(qv(&[1]), Rat::one()), (qv(&[-1]), Rat::one())],
            eqs: vec![],
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.primal, qv(&[1]));
        assert_eq!(sol.objective, Rat::one());
    }

    /// Master-LP shape: maximize t under cuts t ≤ ⟨ρ, v⟩, trace zero, box.
    /// With the single cut v = (1, -1) the optimum is t = 2 at ρ = (1, -1);
    /// adding the mirrored cut (-1, 1) pins the optimum down to t = 0.
    #[test]
    fn symmetric_two_point_master() {
        // variables (rho1, rho2, t)
        let cut = |v: [i64; 2]| (qv(&[-v[0], -v[1], 1]), Rat::zero());
        let boxc = vec![
            (qv(&[1, 0, 0]), Rat::one()),
            (qv(&[-1, 0, 0]), Rat::one()),
            (qv(&[0, 1, 0]), Rat::one()),
            (qv(&[0, -1, 0]), Rat::one()),
        ];
        let trace = vec![(qv(&[1, 1, 0]), Rat::zero())];

        let mut ineqs = vec![cut([1, -1])];
        ineqs.extend(boxc.clone());
        let lp = LinearProgram {
            maximize: qv(&[0, 0, 1]),
            ineqs,
            eqs: trace.clone(),
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Rat::int(2));
        assert_eq!(&sol.primal[0], &Rat::one());
        assert_eq!(&sol.primal[1], &Rat::int(-1));

        let mut ineqs = vec![cut([1, -1]), cut([-1, 1])];
        ineqs.extend(boxc);
        let lp = LinearProgram {
            maximize: qv(&[0, 0, 1]),
            ineqs,
            eqs: trace,
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Rat::zero());
    }

    #[test]
    fn single_zero_cut_master() {
        // One cut with projected weight zero: maximize t s.t. t <= 0.
        let lp = LinearProgram {
            maximize: qv(&[1]),
            ineqs: vec![(qv(&[1]), Rat::zero())],
            eqs: vec![],
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Rat::zero());
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            maximize: qv(&[0]),
            ineqs: vec![(qv(&[1]), -Rat::one()), (qv(&[-1]), -Rat::one())],
            eqs: vec![],
        };
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

        let lp = LinearProgram {
            maximize: qv(&[1]),
            ineqs: vec![(qv(&[-1]), Rat::zero())],
            eqs: vec![],
        };
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_duals() {
        // maximize x + y s.t. x + y = 1, x <= 3/4, y <= 3/4
        let lp = LinearProgram {
            maximize: qv(&[1, 1]),
            ineqs: vec![
                (qv(&[1, 0]), Rat::new(3, 4)),
                (qv(&[0, 1]), Rat::new(3, 4)),
            ],
            eqs: vec![(qv(&[1, 1]), Rat::one())],
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Rat::one());
        // strong duality is re-checked inside solve_lp; spot-check the value
        let dual: Rat = sol.dual_ineq.iter().map(|y| y * &Rat::new(3, 4)).sum::<Rat>()
            + sol.dual_eq[0].clone();
        assert_eq!(dual, Rat::one());
    }
}
