use num_traits::Zero;

use crate::exact::{
    dot, nonzero_solution, normalize_ray, strict_feasible_point, zeros, LinProgram, Rat,
};
use crate::graphder::{branch_cone, kernel_meets_span, lambda_in_ri_face};
use crate::poly::{project_to, FaceId, HCone, PolySet};
use crate::sys::{multiplier_xi, Anchor, VarSystem};

use super::common::{face_pair_bad_w, place, ConeVars};
use super::nondegen::check_assumption1;
use super::stratify::{stratify_directions, Cell};
use super::{Certificate, Status, StratumReport, Verdict};

/// One branch of the graphical-derivative description DS(p̄,x̄)(q): a
/// λ̂-stratum (face of N_D(g̃)) and a face F of its critical cone, carrying
/// the polyhedron of solutions (q, u, η) and its projection to q-space.
#[derive(Clone, Debug)]
pub struct DsBranch {
    pub face_g: FaceId,
    pub lambda: Vec<Rat>,
    pub face_f: FaceId,
    /// { (q,u,η) : ∇g̃(q,u) ∈ F, η ∈ N_F, ∇Lag(q,u) + bᵀη = 0 }.
    pub set: PolySet,
    pub q_proj: PolySet,
}

#[derive(Debug)]
pub struct RelAubin {
    pub verdict: Verdict,
    /// Nonempty solution branches; for the worked reference system these
    /// are exactly the rows of the direction table.
    pub table: Vec<DsBranch>,
    /// Every violation found, in deterministic cell order; the verdict's
    /// certificate is the first one.
    pub failures: Vec<Certificate>,
}

/// The Aubin property of the solution map relative to the parameter
/// restriction P (its tangent cone; all of R^l when absent):
/// (i) every q ∈ T_P(p̄) admits some u with
///     0 ∈ ∇f(p̄,x̄)(q,u) + DΨ((p̄,x̄,x̄),-f(p̄,x̄))(q,u,u), and
/// (ii) every nonzero such (q,u) with q ∈ T_P passes the partial
///     non-degeneracy condition and the face-pair witness condition with
///     probes restricted to ∇₂g̃.
/// Exact for affine g via stratification of q- and (q,u)-space.
pub fn check_rel_aubin(sys: &VarSystem) -> RelAubin {
    let a1 = check_assumption1(sys);
    if !a1.holds() {
        return RelAubin {
            verdict: Verdict::new("aubin", Status::Inconclusive)
                .with_note("Assumption 1 surrogate not certified")
                .with_prerequisite(a1),
            table: vec![],
            failures: vec![],
        };
    }
    if !sys.is_affine() {
        return RelAubin {
            verdict: Verdict::new("aubin", Status::Inconclusive)
                .with_note("quadratic constraints: the direction quantifiers are not discharged exactly; check individual directions via metric-regularity")
                .with_prerequisite(a1),
            table: vec![],
            failures: vec![],
        };
    }
    let anchor = sys.anchor();
    let tp = sys.tp_cone();
    let table = ds_table(sys, &anchor);

    let mut verdict = Verdict::new("aubin", Status::Holds).with_prerequisite(a1);
    let mut failures: Vec<Certificate> = Vec::new();

    // Condition (i): T_P must be covered by the q-projections of the
    // branches. Cells of the arrangement of all projection facets inside
    // T_P are either fully covered or fully uncovered.
    let mut hyperplanes: Vec<Vec<Rat>> = Vec::new();
    let push_hyp = |h: &Vec<Rat>, hs: &mut Vec<Vec<Rat>>| {
        if h.iter().all(Rat::is_zero) {
            return;
        }
        let norm = normalize_ray(h);
        if !hs.contains(&norm) {
            hs.push(norm);
        }
    };
    for branch in &table {
        for (row, _) in branch.q_proj.ineqs().iter().chain(branch.q_proj.eqs()) {
            push_hyp(row, &mut hyperplanes);
        }
    }
    for row in tp.rows() {
        push_hyp(row, &mut hyperplanes);
    }
    let q_cells = stratify_directions(sys.l, &hyperplanes, Some(&tp));
    for cell in &q_cells.cells {
        let covered = table.iter().any(|b| b.q_proj.member(&cell.rep));
        let status = if covered { Status::Holds } else { Status::Fails };
        if !covered {
            failures.push(Certificate::CoverageGap {
                cell: cell.id(),
                q: cell.rep.clone(),
            });
        }
        verdict.strata.push(StratumReport {
            id: format!("coverage|{}", cell.id()),
            description: "existence of u over the parameter-direction cell".into(),
            representative: Some(cell.rep.clone()),
            status,
            witness: None,
        });
    }

    // Condition (ii) over (q,u)-space.
    let dim = sys.l + sys.n;
    let t_hyps: Vec<Vec<Rat>> = anchor
        .t_cone
        .rows()
        .iter()
        .map(|row| (0..dim).map(|c| dot(row, &anchor.grad_gt.col(c))).collect())
        .collect();
    let mut qu_hyps = t_hyps.clone();
    for row in tp.rows() {
        let mut lifted = row.clone();
        lifted.extend(zeros(sys.n));
        qu_hyps.push(lifted);
    }
    let st = stratify_directions(dim, &qu_hyps, None);
    let n_t = t_hyps.len();
    for cell in &st.cells {
        if !qu_cell_admissible(sys, &anchor.t_cone, &tp, cell, n_t) {
            continue;
        }
        let jc: std::collections::BTreeSet<usize> =
            cell.zero_set().into_iter().filter(|&i| i < n_t).collect();
        let lam_enc = ConeVars {
            rays: jc
                .iter()
                .filter(|i| !anchor.t_cone.eq_set().contains(i))
                .map(|&i| anchor.t_cone.rows()[i].clone())
                .collect(),
            lines: anchor
                .t_cone
                .eq_set()
                .iter()
                .map(|&i| anchor.t_cone.rows()[i].clone())
                .collect(),
        };
        let mut cell_active = false;
        let mut cell_status = Status::Holds;
        for g in anchor.n_hcone.faces() {
            let Some(lam_rep) = xi_stratum_rep(sys, &anchor, &lam_enc, &g) else {
                continue;
            };
            let k_g = anchor.t_cone.intersect_perp(&lam_rep).canonicalize();
            let w0 = anchor.grad_gt.mul_vec(&cell.rep);
            let k_active = k_g
                .active_rows(&w0)
                .expect("cell image lies in the stratum's critical cone");
            let eta_enc = ConeVars {
                rays: k_active
                    .iter()
                    .filter(|j| !k_g.eq_set().contains(j))
                    .map(|&j| k_g.rows()[j].clone())
                    .collect(),
                lines: k_g.eq_set().iter().map(|&j| k_g.rows()[j].clone()).collect(),
            };
            for f1 in k_g.faces() {
                if !f1.0.is_subset(&k_active) {
                    continue;
                }
                let perp = k_g.face_diff_unchecked(&f1.0);
                let Some((qu0, eta0)) =
                    admissible_tuple(sys, &anchor, cell, &qu_hyps, &eta_enc, &perp)
                else {
                    continue;
                };
                cell_active = true;
                for f2 in k_g.faces() {
                    if !f1.0.is_subset(&f2.0) || !f2.0.is_subset(&k_active) {
                        continue;
                    }
                    let h2 = x_block(sys, &anchor.grad_f);
                    if let Some(w) = face_pair_bad_w(
                        &anchor.b,
                        &h2,
                        &anchor.grad2_gt,
                        k_g.rows(),
                        &f1.0,
                        &f2.0,
                    ) {
                        cell_status = Status::Fails;
                        failures.push(Certificate::FacePairWitness {
                            cell: Some(cell.id()),
                            direction: qu0.clone(),
                            lambda: lam_rep.clone(),
                            eta: eta0.clone(),
                            f1: f1.clone(),
                            f2: f2.clone(),
                            w,
                        });
                    }
                }
            }
        }
        // Partial non-degeneracy is quantified over directions verifying
        // the inclusion, so only active cells are tested.
        if cell_active {
            let span_rows: Vec<Vec<Rat>> =
                jc.iter().map(|&i| anchor.t_cone.rows()[i].clone()).collect();
            if let Some(mu) = kernel_meets_span(&anchor.grad2_gt, &span_rows) {
                cell_status = Status::Fails;
                failures.push(Certificate::Multiplier { mu });
            }
        }
        if cell_active {
            verdict.strata.push(StratumReport {
                id: format!("direction|{}", cell.id()),
                description: "face-pair witness condition over the direction cell".into(),
                representative: Some(cell.rep.clone()),
                status: cell_status,
                witness: None,
            });
        }
    }

    if let Some(cert) = failures.first() {
        verdict.status = Status::Fails;
        verdict.certificate = Some(cert.clone());
    }
    RelAubin {
        verdict,
        table,
        failures,
    }
}

/// The branch decomposition of
/// { (q,u,η) : 0 = ∇Lag_λ̂(q,u) + bᵀη, η ∈ N_{K_D(g̃,λ̂)}(∇g̃(q,u)),
///   λ̂ ∈ Ξ(·;(q,u)) }, one polyhedron per (λ̂-stratum, face of K_G).
pub fn ds_table(sys: &VarSystem, anchor: &Anchor) -> Vec<DsBranch> {
    let xi = multiplier_xi(sys, &sys.p_ref, &sys.x_ref, &anchor.minus_f_ref())
        .expect("reference point is feasible");
    let mut table = Vec::new();
    for g in anchor.n_hcone.faces() {
        let Some(lam_rep) = lambda_in_ri_face(anchor, &xi.set, &g) else {
            continue;
        };
        let k_g = anchor.t_cone.intersect_perp(&lam_rep).canonicalize();
        for f in k_g.faces() {
            let set = branch_cone(anchor, &k_g, &f.0, &anchor.grad_f);
            if set.is_empty() {
                continue;
            }
            let q_proj = project_to(&set, &(0..sys.l).collect::<Vec<_>>());
            table.push(DsBranch {
                face_g: g.clone(),
                lambda: lam_rep.clone(),
                face_f: f,
                set,
                q_proj,
            });
        }
    }
    table
}

fn x_block(sys: &VarSystem, grad_f: &crate::exact::RatMatrix) -> crate::exact::RatMatrix {
    let rows = (0..sys.n)
        .map(|i| grad_f.row(i)[sys.l..].to_vec())
        .collect();
    crate::exact::RatMatrix::from_rows(rows)
}

fn qu_cell_admissible(
    sys: &VarSystem,
    t_cone: &HCone,
    tp: &HCone,
    cell: &Cell,
    n_t: usize,
) -> bool {
    let _ = sys;
    cell.signs.iter().enumerate().all(|(i, &s)| {
        if i < n_t {
            if t_cone.eq_set().contains(&i) {
                s == 0
            } else {
                s <= 0
            }
        } else {
            let tp_i = i - n_t;
            if tp.eq_set().contains(&tp_i) {
                s == 0
            } else {
                s <= 0
            }
        }
    })
}

/// λ̂ ∈ ri(G) ∩ Ξ, with λ̂ᵀ∇g̃(q,u) = 0 on the whole cell via the
/// generator encoding.
fn xi_stratum_rep(
    sys: &VarSystem,
    anchor: &Anchor,
    enc: &ConeVars,
    g: &FaceId,
) -> Option<Vec<Rat>> {
    let nb = enc.nvars();
    let mut lp = LinProgram::feasibility(nb);
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        let block = enc.row_for(row);
        if g.0.contains(&i) {
            lp.eq.push((block, Rat::zero()));
        } else {
            lp.lt.push((block, Rat::zero()));
        }
    }
    enc.push_sign_rows(&mut lp, 0);
    let minus_f = anchor.minus_f_ref();
    for c in 0..sys.n {
        lp.eq.push((enc.row_for(&anchor.b.col(c)), minus_f[c].clone()));
    }
    let point = strict_feasible_point(&lp)?;
    Some(enc.decode(&point, sys.s))
}

/// A nonzero (q,u) in the cell's relative interior together with η in the
/// face-F1-perpendicular part of the solution set of
/// ∇f(q,u) + bᵀη = 0, η ∈ N_{K_G}(∇g̃(q,u)).
fn admissible_tuple(
    sys: &VarSystem,
    anchor: &Anchor,
    cell: &Cell,
    qu_hyps: &[Vec<Rat>],
    eta_enc: &ConeVars,
    f1_perp_basis: &[Vec<Rat>],
) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let dim = sys.l + sys.n;
    let ne = eta_enc.nvars();
    let total = dim + ne;
    let mut lp = LinProgram::feasibility(total);
    for (i, &s) in cell.signs.iter().enumerate() {
        let row = place(total, 0, &qu_hyps[i]);
        match s {
            0 => lp.eq.push((row, Rat::zero())),
            -1 => lp.lt.push((row, Rat::zero())),
            _ => lp.lt.push((row.iter().map(|x| -x).collect(), Rat::zero())),
        }
    }
    eta_enc.push_sign_rows(&mut lp, dim);
    for i in 0..sys.n {
        let mut row = place(total, dim, &eta_enc.row_for(&anchor.b.col(i)));
        for c in 0..dim {
            row[c] = anchor.grad_f.entry(i, c).clone();
        }
        lp.eq.push((row, Rat::zero()));
    }
    for basis_vec in f1_perp_basis {
        let row = place(total, dim, &eta_enc.row_for(basis_vec));
        lp.eq.push((row, Rat::zero()));
    }
    let point = if cell.is_zero_cell {
        let coords: Vec<usize> = (0..dim).collect();
        nonzero_solution(&lp, &coords)?
    } else {
        strict_feasible_point(&lp)?
    };
    let qu0 = point[..dim].to_vec();
    let eta0 = eta_enc.decode(&point[dim..], sys.s);
    Some((qu0, eta0))
}
