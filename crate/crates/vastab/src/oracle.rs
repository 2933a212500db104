//! Independent brute-force ground truth for affine systems: exact
//! enumeration of the solution map S(p) by active-set patterns of D, and
//! empirical calmness / Aubin ratio sampling over parameter grids. Used to
//! validate the checkers against closed-form solution maps; no machinery
//! from the graphical-derivative side is involved.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::exact::{
    dot, rank, rat_to_string, solve_linear, vec_sub, zeros, LinProgram, Rat, RatMatrix,
};
use crate::poly::{polyhedron_equal, project_to, PolySet};
use crate::sys::{SysError, VarSystem};

/// The solution set S(p) as a list of polyhedral pieces in x-space, each
/// tagged with the active-set pattern that produced it.
#[derive(Clone, Debug)]
pub struct SolutionPieces {
    pub p: Vec<Rat>,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub pattern: BTreeSet<usize>,
    pub set: PolySet,
}

impl SolutionPieces {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// All piece vertices, deduplicated: the sampled "solution points".
    pub fn points(&self) -> Vec<Vec<Rat>> {
        let mut out: Vec<Vec<Rat>> = Vec::new();
        for piece in &self.pieces {
            for v in vertices(&piece.set) {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn member(&self, x: &[Rat]) -> bool {
        self.pieces.iter().any(|p| p.set.member(x))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.iter().map(rat_to_string).collect::<Vec<_>>(),
            "pieces": self.pieces.iter().map(|piece| json!({
                "pattern": piece.pattern.iter().copied().collect::<Vec<_>>(),
                "set": piece.set.to_json(),
            })).collect::<Vec<_>>(),
            "points": self.points().iter().map(|x| x.iter().map(rat_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Enumerates S(p) = { x : 0 ∈ f(p,x) + b(p,x)ᵀ N_D(g̃(p,x)) } for affine
/// f and g: for every active-set pattern I of D's inequality rows, the
/// stationarity system is linear in (x, multipliers) and its x-projection
/// is a polyhedral piece. Pieces equal as sets are reported once.
pub fn solve_solution_map(sys: &VarSystem, p: &[Rat]) -> Result<SolutionPieces, SysError> {
    if !sys.is_affine() {
        return Err(SysError::NonAffine(
            "the solution-map oracle supports affine systems only".into(),
        ));
    }
    assert_eq!(p.len(), sys.l);
    let n = sys.n;
    let gt = sys.gtilde();
    let b = sys.b_at(p, &zeros(n));

    // Affine data in x for fixed p: g̃(p,x) = gt0 + Gx x, f(p,x) = f0 + Fx x.
    let mut px = p.to_vec();
    px.extend(zeros(n));
    let gt0 = gt.eval(&px);
    let gt_jac = gt.jacobian(&px);
    let gx = RatMatrix::from_rows((0..sys.s).map(|k| gt_jac.row(k)[sys.l..].to_vec()).collect());
    let f0 = sys.f.eval(&px);
    let f_jac = sys.f.jacobian(&px);
    let fx = RatMatrix::from_rows((0..n).map(|k| f_jac.row(k)[sys.l..].to_vec()).collect());

    let d_ineqs = sys.d.ineqs();
    let d_eqs = sys.d.eqs();
    let m = d_ineqs.len();
    assert!(m < 20, "active-set enumeration limited to small systems");

    let mut pieces: Vec<Piece> = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let pattern: BTreeSet<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        // Variables: x (n), σ_i >= 0 for i in the pattern, τ_j free per
        // equality row of D.
        let nvars = n + pattern.len() + d_eqs.len();
        let mut ineqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
        // A_i g̃(p,x) = d_i on the pattern, <= d_i off it; E g̃(p,x) = c.
        for (i, (a, d)) in d_ineqs.iter().enumerate() {
            let mut row = zeros(nvars);
            for c in 0..n {
                row[c] = dot(a, &gx.col(c));
            }
            let rhs = d - dot(a, &gt0);
            if pattern.contains(&i) {
                eqs.push((row, rhs));
            } else {
                ineqs.push((row, rhs));
            }
        }
        for (a, c) in d_eqs {
            let mut row = zeros(nvars);
            for col in 0..n {
                row[col] = dot(a, &gx.col(col));
            }
            eqs.push((row, c - dot(a, &gt0)));
        }
        // σ >= 0.
        for (k, _) in pattern.iter().enumerate() {
            let mut row = zeros(nvars);
            row[n + k] = -Rat::from_integer(1.into());
            ineqs.push((row, Rat::zero()));
        }
        // 0 = f(p,x) + bᵀλ with λ = Σ σ_i A_i + Σ τ_j E_j.
        for out in 0..n {
            let mut row = zeros(nvars);
            for c in 0..n {
                row[c] = fx.entry(out, c).clone();
            }
            for (k, &i) in pattern.iter().enumerate() {
                row[n + k] = dot(&b.col(out), &d_ineqs[i].0);
            }
            for (j, (a, _)) in d_eqs.iter().enumerate() {
                row[n + pattern.len() + j] = dot(&b.col(out), a);
            }
            eqs.push((row, -f0[out].clone()));
        }
        let lifted = PolySet::new(nvars, ineqs, eqs);
        let piece = project_to(&lifted, &(0..n).collect::<Vec<_>>());
        if piece.is_empty() {
            continue;
        }
        if pieces.iter().any(|q| polyhedron_equal(&q.set, &piece)) {
            continue;
        }
        pieces.push(Piece {
            pattern,
            set: piece,
        });
    }
    Ok(SolutionPieces {
        p: p.to_vec(),
        pieces,
    })
}

/// Vertices of a polyhedron by basis enumeration: every vertex is the
/// unique solution of n independent active rows, so all n-row combinations
/// are solved and filtered by feasibility. Exact; unbounded directions are
/// not sampled.
pub fn vertices(set: &PolySet) -> Vec<Vec<Rat>> {
    let n = set.dim();
    if n == 0 {
        return if set.is_empty() { vec![] } else { vec![vec![]] };
    }
    let mut rows: Vec<(Vec<Rat>, Rat)> = set.eqs().to_vec();
    rows.extend(set.ineqs().iter().cloned());
    let m = rows.len();
    if m < n {
        return vec![];
    }
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        let a = RatMatrix::from_rows(combo.iter().map(|&i| rows[i].0.clone()).collect());
        if rank(&a) == n {
            let rhs: Vec<Rat> = combo.iter().map(|&i| rows[i].1.clone()).collect();
            if let Some(x) = solve_linear(&a, &rhs) {
                if set.member(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        // Next n-combination of 0..m in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + m - n {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..n {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Exact squared Euclidean distance from a point to a polyhedron, by
/// projecting onto the affine hull of every active-row subset and keeping
/// the best feasible projection. Returns None for an empty set.
pub fn dist_sq_to_polyhedron(x: &[Rat], set: &PolySet) -> Option<Rat> {
    let n = set.dim();
    assert_eq!(x.len(), n);
    if set.member(x) {
        return Some(Rat::zero());
    }
    let mut rows: Vec<(Vec<Rat>, Rat)> = set.eqs().to_vec();
    let n_eq = rows.len();
    rows.extend(set.ineqs().iter().cloned());
    let m = rows.len();
    let mut best: Option<Rat> = None;
    for mask in 0u64..(1u64 << (m - n_eq)) {
        let mut subset: Vec<usize> = (0..n_eq).collect();
        subset.extend((0..m - n_eq).filter(|i| mask & (1 << i) != 0).map(|i| i + n_eq));
        // Projection onto { y : A_S y = d_S } via the KKT system
        // [ 2I  A_Sᵀ ] [y]   [2x ]
        // [ A_S  0   ] [ν] = [d_S].
        let k = subset.len();
        let mut kkt = RatMatrix::zero(n + k, n + k);
        let mut rhs = zeros(n + k);
        for i in 0..n {
            *kkt.entry_mut(i, i) = Rat::from_integer(2.into());
            rhs[i] = &x[i] + &x[i];
        }
        for (row_i, &s) in subset.iter().enumerate() {
            for c in 0..n {
                *kkt.entry_mut(n + row_i, c) = rows[s].0[c].clone();
                *kkt.entry_mut(c, n + row_i) = rows[s].0[c].clone();
            }
            rhs[n + row_i] = rows[s].1.clone();
        }
        let Some(sol) = solve_linear(&kkt, &rhs) else {
            continue;
        };
        let y = &sol[..n];
        if !set.member(y) {
            continue;
        }
        let d = dist_sq(x, y);
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    }
    best
}

fn dist_sq(a: &[Rat], b: &[Rat]) -> Rat {
    let diff = vec_sub(a, b);
    dot(&diff, &diff)
}

#[derive(Clone, Debug)]
pub struct CalmnessRow {
    pub p: Vec<Rat>,
    pub points: Vec<Vec<Rat>>,
    /// dist²(x, S(p̄)) / ‖p - p̄‖² per sampled point; comparisons on squares
    /// avoid irrational norms.
    pub ratio_sq: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct CalmnessReport {
    pub rows: Vec<CalmnessRow>,
    pub max_ratio_sq: Option<Rat>,
}

/// Calmness sampling: one-sided distances from the solutions at each grid
/// parameter back to S(p̄), scaled by the parameter displacement.
pub fn sample_calmness(sys: &VarSystem, grid: &[Vec<Rat>]) -> Result<CalmnessReport, SysError> {
    if grid.is_empty() {
        return Err(SysError::Schema("empty parameter grid".into()));
    }
    let reference = solve_solution_map(sys, &sys.p_ref)?;
    let mut rows = Vec::new();
    let mut max_ratio: Option<Rat> = None;
    for p in grid {
        if p == &sys.p_ref {
            continue; // zero denominator
        }
        let sol = solve_solution_map(sys, p)?;
        let denom = dist_sq(p, &sys.p_ref);
        let points = sol.points();
        let mut ratios = Vec::new();
        for x in &points {
            let num = reference
                .pieces
                .iter()
                .filter_map(|piece| dist_sq_to_polyhedron(x, &piece.set))
                .min();
            if let Some(num) = num {
                let r = num / &denom;
                if max_ratio.as_ref().is_none_or(|m| r > *m) {
                    max_ratio = Some(r.clone());
                }
                ratios.push(r);
            }
        }
        rows.push(CalmnessRow {
            p: p.clone(),
            points,
            ratio_sq: ratios,
        });
    }
    Ok(CalmnessReport {
        rows,
        max_ratio_sq: max_ratio,
    })
}

#[derive(Clone, Debug)]
pub struct AubinPairRow {
    pub p: Vec<Rat>,
    pub p_other: Vec<Rat>,
    /// True when S(p) has points but S(p') is empty: the branches separate.
    pub separated: bool,
    pub ratio_sq: Option<Rat>,
}

#[derive(Clone, Debug)]
pub struct AubinReport {
    pub pairs: Vec<AubinPairRow>,
    pub max_ratio_sq: Option<Rat>,
    pub any_separation: bool,
}

/// Pairwise Aubin sampling over the T_P-consistent part of the grid:
/// sup_{x ∈ S(p)} dist(x, S(p')) / ‖p - p'‖ over sampled points.
pub fn sample_aubin(
    sys: &VarSystem,
    grid: &[Vec<Rat>],
    tp: &crate::poly::HCone,
) -> Result<AubinReport, SysError> {
    if grid.is_empty() {
        return Err(SysError::Schema("empty parameter grid".into()));
    }
    let admissible: Vec<&Vec<Rat>> = grid
        .iter()
        .filter(|p| tp.member(&vec_sub(p, &sys.p_ref)))
        .collect();
    let solved: Vec<SolutionPieces> = admissible
        .iter()
        .map(|p| solve_solution_map(sys, p))
        .collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    let mut max_ratio: Option<Rat> = None;
    let mut any_separation = false;
    for (i, sol) in solved.iter().enumerate() {
        for (j, other) in solved.iter().enumerate() {
            if i == j || admissible[i] == admissible[j] {
                continue;
            }
            let denom = dist_sq(admissible[i], admissible[j]);
            let points = sol.points();
            if points.is_empty() {
                continue;
            }
            if other.is_empty() {
                any_separation = true;
                pairs.push(AubinPairRow {
                    p: admissible[i].clone(),
                    p_other: admissible[j].clone(),
                    separated: true,
                    ratio_sq: None,
                });
                continue;
            }
            let mut worst: Option<Rat> = None;
            for x in &points {
                let num = other
                    .pieces
                    .iter()
                    .filter_map(|piece| dist_sq_to_polyhedron(x, &piece.set))
                    .min()
                    .expect("nonempty solution set");
                if worst.as_ref().is_none_or(|w| num > *w) {
                    worst = Some(num);
                }
            }
            let ratio = worst.map(|w| w / &denom);
            if let Some(r) = &ratio {
                if max_ratio.as_ref().is_none_or(|m| r > m) {
                    max_ratio = Some(r.clone());
                }
            }
            pairs.push(AubinPairRow {
                p: admissible[i].clone(),
                p_other: admissible[j].clone(),
                separated: false,
                ratio_sq: ratio,
            });
        }
    }
    Ok(AubinReport {
        pairs,
        max_ratio_sq: max_ratio,
        any_separation,
    })
}

pub fn calmness_to_json(r: &CalmnessReport) -> Value {
    json!({
        "rows": r.rows.iter().map(|row| json!({
            "p": row.p.iter().map(rat_to_string).collect::<Vec<_>>(),
            "points": row.points.iter().map(|x| x.iter().map(rat_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "ratio_sq": row.ratio_sq.iter().map(rat_to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "max_ratio_sq": r.max_ratio_sq.as_ref().map(rat_to_string),
    })
}

pub fn aubin_to_json(r: &AubinReport) -> Value {
    json!({
        "pairs": r.pairs.iter().map(|row| json!({
            "p": row.p.iter().map(rat_to_string).collect::<Vec<_>>(),
            "p_other": row.p_other.iter().map(rat_to_string).collect::<Vec<_>>(),
            "separated": row.separated,
            "ratio_sq": row.ratio_sq.as_ref().map(rat_to_string),
        })).collect::<Vec<_>>(),
        "max_ratio_sq": r.max_ratio_sq.as_ref().map(rat_to_string),
        "any_separation": r.any_separation,
    })
}

/// Grid file: a JSON list of rational parameter vectors.
pub fn parse_grid(text: &str) -> Result<Vec<Vec<Rat>>, SysError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| SysError::Schema(format!("invalid grid JSON: {e}")))?;
    let arr = v
        .as_array()
        .ok_or_else(|| SysError::Schema("grid must be a JSON array".into()))?;
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| SysError::Schema("grid entries are arrays".into()))?
                .iter()
                .map(|s| {
                    s.as_str()
                        .ok_or_else(|| SysError::Schema("grid entries are rational strings".into()))
                        .and_then(|t| crate::exact::parse_rat(t).map_err(SysError::Schema))
                })
                .collect()
        })
        .collect()
}
