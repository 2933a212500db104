use num_traits::{Signed, Zero};

use crate::exact::{lp_solve, LinProgram, LpSense, LpStatus, Rat};

use super::PolySet;

/// Exact projection of a polyhedron onto a coordinate subset by
/// Fourier-Motzkin elimination, with LP-based redundancy pruning after each
/// eliminated variable to keep the row count under control.
pub fn project_to(ps: &PolySet, keep: &[usize]) -> PolySet {
    let mut current = ps.clone();
    for j in (0..ps.dim()).rev() {
        if !keep.contains(&j) {
            current = eliminate(&current, j);
            current = prune_redundant(&current);
        }
    }
    // Restrict rows to the kept coordinates (all other coefficients are zero
    // after elimination), in the order given by `keep`.
    let restrict = |rows: &[(Vec<Rat>, Rat)]| -> Vec<(Vec<Rat>, Rat)> {
        rows.iter()
            .map(|(a, b)| (keep.iter().map(|&k| a[k].clone()).collect(), b.clone()))
            .collect()
    };
    PolySet::new(
        keep.len(),
        restrict(current.ineqs()),
        restrict(current.eqs()),
    )
}

fn eliminate(ps: &PolySet, j: usize) -> PolySet {
    let dim = ps.dim();
    // Substitute from an equality row containing the variable when possible.
    if let Some(pos) = ps.eqs().iter().position(|(a, _)| !a[j].is_zero()) {
        let (pivot_row, pivot_rhs) = ps.eqs()[pos].clone();
        let coef = pivot_row[j].clone();
        let reduce = |a: &[Rat], b: &Rat| -> (Vec<Rat>, Rat) {
            let f = &a[j] / &coef;
            let row = a
                .iter()
                .zip(&pivot_row)
                .map(|(x, p)| x - &f * p)
                .collect();
            (row, b - &f * &pivot_rhs)
        };
        let ineqs = ps.ineqs().iter().map(|(a, b)| reduce(a, b)).collect();
        let eqs = ps
            .eqs()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, (a, b))| reduce(a, b))
            .collect();
        return PolySet::new(dim, ineqs, eqs);
    }

    let mut zero_rows = Vec::new();
    let mut lower = Vec::new(); // coefficient < 0
    let mut upper = Vec::new(); // coefficient > 0
    for (a, b) in ps.ineqs() {
        if a[j].is_zero() {
            zero_rows.push((a.clone(), b.clone()));
        } else if a[j].is_negative() {
            lower.push((a.clone(), b.clone()));
        } else {
            upper.push((a.clone(), b.clone()));
        }
    }
    let mut ineqs = zero_rows;
    for (al, bl) in &lower {
        for (au, bu) in &upper {
            let cl = -al[j].clone();
            let cu = au[j].clone();
            let row: Vec<Rat> = al
                .iter()
                .zip(au)
                .map(|(l, u)| &cu * l + &cl * u)
                .collect();
            debug_assert!(row[j].is_zero());
            ineqs.push((row, &cu * bl + &cl * bu));
        }
    }
    PolySet::new(dim, ineqs, ps.eqs().to_vec())
}

/// Removes inequality rows implied by the remaining system.
fn prune_redundant(ps: &PolySet) -> PolySet {
    let mut ineqs = ps.ineqs().to_vec();
    let mut i = 0;
    while i < ineqs.len() {
        let (a, b) = ineqs[i].clone();
        let rest = PolySet::new(
            ps.dim(),
            ineqs
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, r)| r.clone())
                .collect(),
            ps.eqs().to_vec(),
        );
        if sup_at_most(&rest, &a, &b) {
            ineqs.remove(i);
        } else {
            i += 1;
        }
    }
    PolySet::new(ps.dim(), ineqs, ps.eqs().to_vec())
}

/// True iff sup { a·x : x in ps } <= b (an empty ps counts as true).
fn sup_at_most(ps: &PolySet, a: &[Rat], b: &Rat) -> bool {
    let mut lp = LinProgram::feasibility(ps.dim());
    lp.objective = a.to_vec();
    ps.append_to_lp(&mut lp, 0);
    match lp_solve(&lp, LpSense::Max) {
        LpStatus::Infeasible => true,
        LpStatus::Unbounded => false,
        LpStatus::Optimal(sol) => sol.value <= *b,
    }
}

/// True iff inner is contained in outer, by one LP per row of outer.
pub fn polyhedron_contains(outer: &PolySet, inner: &PolySet) -> bool {
    assert_eq!(outer.dim(), inner.dim());
    for (a, b) in outer.ineqs() {
        if !sup_at_most(inner, a, b) {
            return false;
        }
    }
    for (a, b) in outer.eqs() {
        let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
        if !sup_at_most(inner, a, b) || !sup_at_most(inner, &neg, &-b.clone()) {
            return false;
        }
    }
    true
}

/// Set equality by mutual inclusion.
pub fn polyhedron_equal(p: &PolySet, q: &PolySet) -> bool {
    polyhedron_contains(p, q) && polyhedron_contains(q, p)
}
