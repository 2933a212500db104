use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::{dot, zeros, Rat};

/// Linear program over free variables with equality, weak and strict rows.
/// Strict rows are only consumed by [`strict_feasible_point`]; `lp_solve`
/// rejects them.
#[derive(Clone, Debug, Default)]
pub struct LinProgram {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    /// a·x = b
    pub eq: Vec<(Vec<Rat>, Rat)>,
    /// a·x <= b
    pub le: Vec<(Vec<Rat>, Rat)>,
    /// a·x < b
    pub lt: Vec<(Vec<Rat>, Rat)>,
}

impl LinProgram {
    pub fn feasibility(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: zeros(num_vars),
            ..Self::default()
        }
    }

    fn check_dims(&self) {
        assert_eq!(self.objective.len(), self.num_vars, "objective length");
        for (a, _) in self.eq.iter().chain(&self.le).chain(&self.lt) {
            assert_eq!(a.len(), self.num_vars, "constraint row length");
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpSense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rat,
    pub point: Vec<Rat>,
    /// Indices of weak inequalities active at `point`.
    pub tight: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Infeasible,
    Unbounded,
    Optimal(LpSolution),
}

impl LpStatus {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpStatus::Optimal(sol) => Some(sol),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpStatus::Infeasible)
    }
}

/// Exact two-phase simplex with Bland's rule (lowest-index entering variable,
/// ratio ties broken by lowest basic variable index), so the returned vertex
/// is a deterministic function of the input.
pub fn lp_solve(lp: &LinProgram, sense: LpSense) -> LpStatus {
    assert!(lp.lt.is_empty(), "lp_solve does not accept strict rows");
    lp.check_dims();
    let obj = match sense {
        LpSense::Max => lp.objective.clone(),
        LpSense::Min => lp.objective.iter().map(|c| -c).collect(),
    };
    match solve_max(lp, &obj) {
        RawStatus::Infeasible => LpStatus::Infeasible,
        RawStatus::Unbounded => LpStatus::Unbounded,
        RawStatus::Optimal(point) => {
            let raw_value = dot(&lp.objective, &point);
            let tight = lp
                .le
                .iter()
                .enumerate()
                .filter(|(_, (a, b))| &dot(a, &point) == b)
                .map(|(i, _)| i)
                .collect();
            LpStatus::Optimal(LpSolution {
                value: raw_value,
                point,
                tight,
            })
        }
    }
}

/// Returns a point satisfying every equality, every weak inequality, and
/// every strict inequality strictly, or None when no such point exists.
/// Implemented by maximizing a slack t <= 1 added to each strict row and
/// testing whether the optimum is positive.
pub fn strict_feasible_point(lp: &LinProgram) -> Option<Vec<Rat>> {
    lp.check_dims();
    let n = lp.num_vars;
    let mut aux = LinProgram::feasibility(n + 1);
    aux.objective[n] = Rat::one();
    for (a, b) in &lp.eq {
        let mut row = a.clone();
        row.push(Rat::zero());
        aux.eq.push((row, b.clone()));
    }
    for (a, b) in &lp.le {
        let mut row = a.clone();
        row.push(Rat::zero());
        aux.le.push((row, b.clone()));
    }
    for (a, b) in &lp.lt {
        let mut row = a.clone();
        row.push(Rat::one());
        aux.le.push((row, b.clone()));
    }
    let mut cap = zeros(n + 1);
    cap[n] = Rat::one();
    aux.le.push((cap, Rat::one()));

    match lp_solve(&aux, LpSense::Max) {
        LpStatus::Infeasible => None,
        LpStatus::Unbounded => unreachable!("slack objective is bounded by 1"),
        LpStatus::Optimal(sol) => {
            if sol.value.is_positive() {
                Some(sol.point[..n].to_vec())
            } else {
                None
            }
        }
    }
}

/// Searches for a solution whose restriction to `coords` is nonzero, by
/// pinning one coordinate at a time to ±1. Complete whenever the feasible
/// set tolerates positive rescaling of those coordinates (cones and
/// cone-like sections), since any solution with x_j ≠ 0 rescales to ±1.
/// Strict rows are honored.
pub fn nonzero_solution(lp: &LinProgram, coords: &[usize]) -> Option<Vec<Rat>> {
    for &j in coords {
        for sign in [1i64, -1] {
            let mut probe = lp.clone();
            let mut row = zeros(lp.num_vars);
            row[j] = Rat::one();
            probe.eq.push((row, Rat::from_integer(sign.into())));
            let hit = if probe.lt.is_empty() {
                lp_solve(&probe, LpSense::Max)
                    .optimal()
                    .map(|s| s.point.clone())
            } else {
                strict_feasible_point(&probe)
            };
            if hit.is_some() {
                return hit;
            }
        }
    }
    None
}

enum RawStatus {
    Infeasible,
    Unbounded,
    Optimal(Vec<Rat>),
}

/// Standard-form tableau over nonnegative variables. Column layout:
/// x+ (n), x- (n), slacks (one per weak row), artificials.
struct Tableau {
    ncols: usize,
    rows: Vec<Vec<Rat>>, // each of length ncols + 1, rhs last
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        debug_assert!(!piv.is_zero());
        for v in self.rows[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = self.rows[r].clone();
        for (r2, row) in self.rows.iter_mut().enumerate() {
            if r2 == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes obj over the current feasible dictionary. Returns false on
    /// unboundedness. `allowed` masks columns permitted to enter.
    fn optimize(&mut self, obj: &[Rat], allowed: &[bool]) -> bool {
        loop {
            let mut reduced = obj.to_vec();
            for (r, &bv) in self.basis.iter().enumerate() {
                if obj[bv].is_zero() {
                    continue;
                }
                let coef = obj[bv].clone();
                for j in 0..self.ncols {
                    let sub = &coef * &self.rows[r][j];
                    reduced[j] -= sub;
                }
            }
            let Some(entering) = (0..self.ncols)
                .find(|&j| allowed[j] && !self.basis.contains(&j) && reduced[j].is_positive())
            else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let coef = &self.rows[r][entering];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / coef;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, entering),
            }
        }
    }
}

fn solve_max(lp: &LinProgram, obj: &[Rat]) -> RawStatus {
    let n = lp.num_vars;
    let n_le = lp.le.len();

    // Rows: all constraints, rhs made nonnegative; remember slack signs.
    let mut raw_rows: Vec<(Vec<Rat>, Rat, Option<usize>)> = Vec::new();
    for (a, b) in &lp.eq {
        raw_rows.push((a.clone(), b.clone(), None));
    }
    for (i, (a, b)) in lp.le.iter().enumerate() {
        raw_rows.push((a.clone(), b.clone(), Some(i)));
    }

    let num_slack = n_le;
    let base_cols = 2 * n + num_slack;

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    let mut artificial_cols: Vec<usize> = Vec::new();

    for (a, b, slack) in &raw_rows {
        let mut row = zeros(base_cols + 1);
        for (j, coef) in a.iter().enumerate() {
            row[j] = coef.clone();
            row[n + j] = -coef.clone();
        }
        if let Some(s) = slack {
            row[2 * n + s] = Rat::one();
        }
        row[base_cols] = b.clone();
        if row[base_cols].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        // A slack with +1 coefficient serves as the initial basic variable;
        // otherwise the row gets an artificial.
        let basic = match slack {
            Some(s) if row[2 * n + s].is_one() => 2 * n + s,
            _ => usize::MAX, // placeholder, patched below
        };
        rows.push(row);
        basis.push(basic);
    }

    let mut ncols = base_cols;
    for r in 0..rows.len() {
        if basis[r] == usize::MAX {
            for row in rows.iter_mut() {
                let rhs = row.pop().unwrap();
                row.push(Rat::zero());
                row.push(rhs);
            }
            rows[r][ncols] = Rat::one();
            basis[r] = ncols;
            artificial_cols.push(ncols);
            ncols += 1;
        }
    }

    let mut tab = Tableau { ncols, rows, basis };

    if !artificial_cols.is_empty() {
        let mut phase1 = zeros(ncols);
        for &c in &artificial_cols {
            phase1[c] = -Rat::one();
        }
        let allowed = vec![true; ncols];
        let bounded = tab.optimize(&phase1, &allowed);
        debug_assert!(bounded, "phase-1 objective is bounded");
        let mut value = Rat::zero();
        for (r, &bv) in tab.basis.iter().enumerate() {
            if artificial_cols.contains(&bv) {
                value -= tab.rhs(r).clone();
            }
        }
        if value.is_negative() {
            return RawStatus::Infeasible;
        }
        // Drive remaining artificials out of the basis; rows where that is
        // impossible are redundant and can be dropped.
        let mut r = 0;
        while r < tab.rows.len() {
            if artificial_cols.contains(&tab.basis[r]) {
                match (0..base_cols).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut phase2 = zeros(ncols);
    for j in 0..n {
        phase2[j] = obj[j].clone();
        phase2[n + j] = -obj[j].clone();
    }
    let mut allowed = vec![true; ncols];
    for &c in &artificial_cols {
        allowed[c] = false;
    }
    if !tab.optimize(&phase2, &allowed) {
        return RawStatus::Unbounded;
    }

    let mut point = zeros(n);
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            point[bv] += tab.rhs(r).clone();
        } else if bv < 2 * n {
            point[bv - n] -= tab.rhs(r).clone();
        }
    }
    RawStatus::Optimal(point)
}
