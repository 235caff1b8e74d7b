use super::rat::Rat;

/// Dense rational vector.
pub type QVec = Vec<Rat>;
/// Dense rational matrix, row major.
pub type QMat = Vec<QVec>;

pub fn zeros(n: usize) -> QVec {
    vec![Rat::zero(); n]
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `v -= c * row`, skipping zero entries of `row`.
pub fn sub_scaled(v: &mut [Rat], c: &Rat, row: &[Rat]) {
    debug_assert_eq!(v.len(), row.len());
    if c.is_zero() {
        return;
    }
    for (x, r) in v.iter_mut().zip(row) {
        if !r.is_zero() {
            *x -= c * r;
        }
    }
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

/// Subtracts the mean entry from every coordinate.
pub fn center(v: &[Rat]) -> QVec {
    if v.is_empty() {
        return Vec::new();
    }
    let mean = v.iter().cloned().sum::<Rat>() / Rat::int(v.len() as i64);
    v.iter().map(|x| x - &mean).collect()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("dimension mismatch: expected {expected}, got {got}")]
pub struct DimMismatch {
    pub expected: usize,
    pub got: usize,
}

/// Outcome of [`EchelonState::try_insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insert {
    Accepted,
    Rejected,
}

/// Row space of the vectors inserted so far, kept in echelon form.
///
/// Pivot rows are normalized to a unit leading coefficient and stored ordered
/// by pivot column, so reducing an incoming vector touches each pivot at most
/// once. Inserting a vector already in the span leaves the state unchanged.
#[derive(Debug, Clone)]
pub struct EchelonState {
    dim: usize,
    rows: Vec<QVec>,
    pivots: Vec<usize>,
    work: u64,
}

impl EchelonState {
    pub fn new(dim: usize) -> Self {
        EchelonState {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            work: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Count of row operations performed, for budget accounting.
    pub fn work(&self) -> u64 {
        self.work
    }

    /// Reduces `v` against the stored pivot rows in place.
    pub fn reduce(&mut self, v: &mut QVec) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                sub_scaled(v, &c, row);
                self.work += 1;
            }
        }
    }

    pub fn try_insert(&mut self, v: &[Rat]) -> Result<Insert, DimMismatch> {
        if v.len() != self.dim {
            return Err(DimMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(Insert::Rejected);
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x /= &lead;
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        Ok(Insert::Accepted)
    }

    /// Whether `v` lies in the current row span.
    pub fn contains(&mut self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        is_zero_vec(&v)
    }
}

/// Exact rank over the rationals by straight Gaussian elimination.
///
/// Deliberately independent of [`EchelonState`]; the two act as oracles for
/// each other under test.
pub fn rank(matrix: &QMat) -> usize {
    if matrix.is_empty() {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: QMat = matrix.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                sub_scaled(row, &f, &pivot_row);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solution of `A x = b` as a particular point plus a nullspace basis, or
/// `None` when inconsistent.
pub fn solve_linear(a: &QMat, b: &[Rat]) -> Option<(QVec, Vec<QVec>)> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "shape mismatch");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    // RREF of the augmented matrix.
    let mut m: QMat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                sub_scaled(row, &f, &pivot_row);
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for row in &m[r.min(rows)..] {
        if is_zero_vec(&row[..cols]) && !row[cols].is_zero() {
            return None;
        }
    }
    for row in &m[..r.min(rows)] {
        if is_zero_vec(&row[..cols]) && !row[cols].is_zero() {
            return None;
        }
    }
    let mut particular = zeros(cols);
    for c in 0..cols {
        if let Some(pr) = pivot_of_col[c] {
            particular[c] = m[pr][cols].clone();
        }
    }
    let mut nullspace = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = zeros(cols);
        v[free] = Rat::one();
        for c in 0..cols {
            if let Some(pr) = pivot_of_col[c] {
                v[c] = -m[pr][free].clone();
            }
        }
        nullspace.push(v);
    }
    Some((particular, nullspace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn insert_dependent_triple() {
        // e1, e2, e1+e2: accepted, accepted, rejected.
        let mut st = EchelonState::new(3);
        assert_eq!(st.try_insert(&qv(&[1, 0, 0])).unwrap(), Insert::Accepted);
        assert_eq!(st.try_insert(&qv(&[0, 1, 0])).unwrap(), Insert::Accepted);
        assert_eq!(st.try_insert(&qv(&[1, 1, 0])).unwrap(), Insert::Rejected);
        assert_eq!(st.rank(), 2);
    }

    #[test]
    fn insert_zero_vector_rejected() {
        let mut st = EchelonState::new(4);
        assert_eq!(st.try_insert(&zeros(4)).unwrap(), Insert::Rejected);
        assert_eq!(st.rank(), 0);
    }

    #[test]
    fn insert_dimension_mismatch() {
        let mut st = EchelonState::new(3);
        assert!(st.try_insert(&qv(&[1, 2])).is_err());
    }

    #[test]
    fn rank_identity_and_zero() {
        let id: QMat = (0..3)
            .map(|i| (0..3).map(|j| Rat::int((i == j) as i64)).collect())
            .collect();
        assert_eq!(rank(&id), 3);
        let z: QMat = vec![zeros(5); 4];
        assert_eq!(rank(&z), 0);
    }

    #[test]
    fn solve_unique_and_underdetermined() {
        // x + y = 3, x - y = 1  =>  (2, 1)
        let a = vec![qv(&[1, 1]), qv(&[1, -1])];
        let (p, null) = solve_linear(&a, &qv(&[3, 1])).unwrap();
        assert_eq!(p, qv(&[2, 1]));
        assert!(null.is_empty());
        // x + y = 1: one free parameter
        let a = vec![qv(&[1, 1])];
        let (p, null) = solve_linear(&a, &qv(&[1])).unwrap();
        assert_eq!(null.len(), 1);
        assert_eq!(&p[0] + &p[1], Rat::one());
        assert_eq!(&null[0][0] + &null[0][1], Rat::zero());
        // inconsistent
        let a = vec![qv(&[1, 1]), qv(&[2, 2])];
        assert!(solve_linear(&a, &qv(&[1, 3])).is_none());
    }
}
