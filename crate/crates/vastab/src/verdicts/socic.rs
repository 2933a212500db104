use num_traits::Zero;

use crate::exact::{
    dot, is_zero_vec, strict_feasible_point, zeros, LinProgram, Rat, RatMatrix,
};
use crate::poly::{FaceId, HCone, PolySet};
use crate::sys::{multiplier_lambda_tilde, Anchor, SysError, VarSystem};

use super::common::{place, ConeVars};
use super::nondegen::{check_assumption1, check_nondegen_dir};
use super::stratify::{stratify_directions, Cell};
use super::{Certificate, Status, StratumReport, Verdict};

/// Second-order condition for isolated calmness over all directions u ≠ 0.
///
/// Exact for affine g: direction space is stratified by the activity
/// hyperplanes of T_D(g̃) ∘ ∇₂g̃ and multipliers by the minimal faces of
/// N_D(g̃); on each (cell, face) pair the failure set
/// { u : 0 ∈ ∇₂Lag_λ u + bᵀ N_{K_G}(∇₂g̃ u) for admissible λ } is a
/// polyhedron probed by one strict-feasibility LP, empty on every pair iff
/// SOCIC holds. A failure carries the witness direction with its
/// multiplier and normal-cone element; on success each stratum reports a
/// decrease direction v.
pub fn check_socic(sys: &VarSystem) -> Verdict {
    let a1 = check_assumption1(sys);
    if !a1.holds() {
        return Verdict::new("socic", Status::Inconclusive)
            .with_note("Assumption 1 surrogate not certified")
            .with_prerequisite(a1);
    }
    if !sys.is_affine() {
        return Verdict::new("socic", Status::Inconclusive)
            .with_note("quadratic constraints: the global quantifier is not discharged exactly; use the per-direction check with explicit directions")
            .with_prerequisite(a1);
    }
    let anchor = sys.anchor();
    let n = sys.n;
    let h2 = sys.lagrangian_grad2(&zeros(sys.s), &sys.p_ref, &sys.x_ref);
    let hyperplanes: Vec<Vec<Rat>> = anchor
        .t_cone
        .rows()
        .iter()
        .map(|row| (0..n).map(|c| dot(row, &anchor.grad2_gt.col(c))).collect())
        .collect();
    let st = stratify_directions(n, &hyperplanes, None);
    let faces_n = anchor.n_hcone.faces();

    let mut strata = Vec::new();
    let mut first_fail: Option<Certificate> = None;
    for cell in &st.cells {
        if !cell_admissible(&anchor.t_cone, cell) {
            continue;
        }
        let lam_enc = multiplier_encoding(&anchor.t_cone, &cell.zero_set());
        for g in &faces_n {
            let Some((lam_rep, _)) = stratum_multiplier(sys, &anchor, &lam_enc, g) else {
                continue;
            };
            let k_g = anchor.t_cone.intersect_perp(&lam_rep).canonicalize();
            let w0 = anchor.grad2_gt.mul_vec(&cell.rep);
            let k_active = k_g
                .active_rows(&w0)
                .expect("the cell image lies in the stratum's critical cone");
            let eta_enc = ConeVars {
                rays: k_active
                    .iter()
                    .filter(|j| !k_g.eq_set().contains(j))
                    .map(|&j| k_g.rows()[j].clone())
                    .collect(),
                lines: k_g.eq_set().iter().map(|&j| k_g.rows()[j].clone()).collect(),
            };
            let id = format!("u{}|G{:?}", cell.id(), g.0);
            match socic_bad_direction(sys, &anchor, cell, &lam_enc, g, &eta_enc, &h2) {
                Some((u0, lam0, eta0)) => {
                    let cert = Certificate::Direction {
                        cell: cell.id(),
                        point: u0.clone(),
                        lambda: Some(lam0),
                        eta: Some(eta0),
                    };
                    if first_fail.is_none() {
                        first_fail = Some(cert.clone());
                    }
                    strata.push(StratumReport {
                        id,
                        description: "second-order decrease impossible".into(),
                        representative: Some(u0),
                        status: Status::Fails,
                        witness: None,
                    });
                }
                None => {
                    let v = decrease_direction(&anchor, &k_g, &w0, &h2, &cell.rep)
                        .expect("no failure direction implies a decrease direction exists");
                    strata.push(StratumReport {
                        id,
                        description: "decrease direction found".into(),
                        representative: Some(cell.rep.clone()),
                        status: Status::Holds,
                        witness: Some(serde_json::json!({
                            "v": super::vec_json(&v),
                            "lambda": super::vec_json(&lam_rep),
                        })),
                    });
                }
            }
        }
    }

    let status = if first_fail.is_some() {
        Status::Fails
    } else {
        Status::Holds
    };
    let mut verdict = Verdict::new("socic", status).with_prerequisite(a1);
    verdict.certificate = first_fail;
    verdict.strata = strata;
    verdict
}

/// Per-direction SOCIC for a fixed u ≠ 0; exact also for quadratic g as
/// long as each multiplier stratum is a single point.
pub fn check_socic_dir(sys: &VarSystem, u: &[Rat]) -> Verdict {
    assert_eq!(u.len(), sys.n);
    if is_zero_vec(u) {
        return Verdict::new("socic", Status::Inconclusive)
            .with_note("the zero direction is excluded; use the non-directional checkers");
    }
    let a1 = check_assumption1(sys);
    if !a1.holds() {
        return Verdict::new("socic", Status::Inconclusive)
            .with_note("Assumption 1 surrogate not certified")
            .with_prerequisite(a1);
    }
    let anchor = sys.anchor();
    let mut qu = zeros(sys.l);
    qu.extend(u.iter().cloned());
    let w = anchor.grad_gt_dir(&qu);
    if !anchor.t_cone.member(&w) {
        return Verdict::new("socic", Status::Holds)
            .with_note("∇₂g̃ u leaves the tangent cone: no admissible multipliers")
            .with_prerequisite(a1);
    }
    let tilde = match multiplier_lambda_tilde(sys, &sys.p_ref, &sys.x_ref, &anchor.minus_f_ref(), &qu)
    {
        Ok(t) => t,
        Err(SysError::InconclusiveStratum(msg)) | Err(SysError::NonAffine(msg)) => {
            return Verdict::new("socic", Status::Inconclusive)
                .with_note(msg)
                .with_prerequisite(a1)
        }
        Err(SysError::UnboundedArgmax) => {
            return Verdict::new("socic", Status::Inconclusive)
                .with_note("directional multiplier set undefined (unbounded argmax)")
                .with_prerequisite(a1)
        }
        Err(e) => panic!("unexpected multiplier failure: {e}"),
    };
    if tilde.is_empty() {
        return Verdict::new("socic", Status::Holds)
            .with_note("Λ̃ is empty for this direction")
            .with_prerequisite(a1);
    }

    let mut strata = Vec::new();
    let mut first_fail = None;
    let mut inconclusive_note = None;
    for g in anchor.n_hcone.faces() {
        for piece in &tilde.pieces {
            let Some(lam_rep) = stratum_rep_dir(&anchor, &piece.set, &g, &w) else {
                continue;
            };
            // ∇₂Lag_λ: multiplier-free for affine g, otherwise the stratum
            // must pin λ to a single point.
            let h2 = if sys.is_affine() {
                sys.lagrangian_grad2(&zeros(sys.s), &sys.p_ref, &sys.x_ref)
            } else {
                let stratum = crate::sys::MultiplierPoly {
                    kind: crate::sys::MultKind::LambdaTilde,
                    set: closed_stratum_set(&anchor, &piece.set, &g, &w),
                };
                match stratum.singleton() {
                    Some(lam) => sys.lagrangian_grad2(&lam, &sys.p_ref, &sys.x_ref),
                    None => {
                        inconclusive_note = Some(format!(
                            "multiplier stratum G{:?} is not a single point for quadratic g",
                            g.0
                        ));
                        continue;
                    }
                }
            };
            let k_g = anchor.t_cone.intersect_perp(&lam_rep).canonicalize();
            let id = format!("G{:?}", g.0);
            match decrease_direction(&anchor, &k_g, &w, &h2, u) {
                Some(v) => strata.push(StratumReport {
                    id,
                    description: "decrease direction found".into(),
                    representative: Some(u.to_vec()),
                    status: Status::Holds,
                    witness: Some(serde_json::json!({
                        "v": super::vec_json(&v),
                        "lambda": super::vec_json(&lam_rep),
                    })),
                }),
                None => {
                    let eta = eta_certificate(&anchor, &k_g, &w, &h2, u);
                    let cert = Certificate::Direction {
                        cell: id.clone(),
                        point: u.to_vec(),
                        lambda: Some(lam_rep),
                        eta,
                    };
                    if first_fail.is_none() {
                        first_fail = Some(cert);
                    }
                    strata.push(StratumReport {
                        id,
                        description: "second-order decrease impossible".into(),
                        representative: Some(u.to_vec()),
                        status: Status::Fails,
                        witness: None,
                    });
                }
            }
        }
    }
    let status = if first_fail.is_some() {
        Status::Fails
    } else if inconclusive_note.is_some() {
        Status::Inconclusive
    } else {
        Status::Holds
    };
    let mut verdict = Verdict::new("socic", status).with_prerequisite(a1);
    verdict.certificate = first_fail;
    verdict.strata = strata;
    if let Some(note) = inconclusive_note {
        verdict.notes.push(note);
    }
    verdict
}

/// Isolated calmness of the solution map at the reference point: SOCIC plus
/// Assumption 1 are sufficient; a SOCIC failure direction u disproves the
/// property only when the necessity prerequisites are certified, namely
/// non-degeneracy in direction (0,u) (making DG = DΨ) and directional
/// metric regularity of M at ((0,u),0).
pub fn check_isolated_calmness(sys: &VarSystem) -> Verdict {
    let socic = check_socic(sys);
    match socic.status {
        Status::Holds => {
            Verdict::new("isolated-calmness", Status::Holds).with_prerequisite(socic)
        }
        Status::Fails => {
            let u = match &socic.certificate {
                Some(Certificate::Direction { point, .. }) => point.clone(),
                _ => unreachable!("SOCIC failure always carries a direction"),
            };
            let anchor = sys.anchor();
            let mut qu = zeros(sys.l);
            qu.extend(u.iter().cloned());
            let nd = check_nondegen_dir(
                &anchor.grad_gt,
                &sys.d,
                &anchor.gt_ref,
                &anchor.grad_gt_dir(&qu),
            )
            .expect("reference point is feasible");
            let mr = super::check_metreg_m_dir(sys, &qu);
            if nd.holds() && mr.holds() {
                Verdict::new("isolated-calmness", Status::Disproved)
                    .with_certificate(Certificate::Direction {
                        cell: "socic-failure".into(),
                        point: u,
                        lambda: None,
                        eta: None,
                    })
                    .with_prerequisite(socic)
                    .with_prerequisite(nd)
                    .with_prerequisite(mr)
            } else {
                Verdict::new("isolated-calmness", Status::Inconclusive)
                    .with_note("SOCIC fails but its necessity prerequisites are not certified")
                    .with_prerequisite(socic)
                    .with_prerequisite(nd)
                    .with_prerequisite(mr)
            }
        }
        _ => Verdict::new("isolated-calmness", Status::Inconclusive).with_prerequisite(socic),
    }
}

// ---------------------------------------------------------------------------
// internals
// ---------------------------------------------------------------------------

/// A cell is admissible iff ∇₂g̃ u stays in T_D(g̃) on it: nonpositive signs
/// against inequality rows, zero against equality rows.
fn cell_admissible(t_cone: &HCone, cell: &Cell) -> bool {
    cell.signs.iter().enumerate().all(|(i, &s)| {
        if t_cone.eq_set().contains(&i) {
            s == 0
        } else {
            s <= 0
        }
    })
}

/// Generators of N_{T_D(g̃)}(w) for w in the cell: the tangent-cone rows
/// tight on the cell as rays, the equality rows as lines. Encodes
/// λ ∈ N_D(g̃) with λᵀ∇₂g̃u = 0 for every u in the cell.
fn multiplier_encoding(t_cone: &HCone, zero_set: &std::collections::BTreeSet<usize>) -> ConeVars {
    ConeVars {
        rays: zero_set
            .iter()
            .filter(|i| !t_cone.eq_set().contains(i))
            .map(|&i| t_cone.rows()[i].clone())
            .collect(),
        lines: t_cone
            .eq_set()
            .iter()
            .map(|&i| t_cone.rows()[i].clone())
            .collect(),
    }
}

/// Appends the λ-in-ri(G) rows for an encoded multiplier block.
fn push_ri_face_rows(
    lp: &mut LinProgram,
    anchor: &Anchor,
    enc: &ConeVars,
    g: &FaceId,
    offset: usize,
) {
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        let block = enc.row_for(row);
        let full = place(lp.num_vars, offset, &block);
        if g.0.contains(&i) {
            lp.eq.push((full, Rat::zero()));
        } else {
            lp.lt.push((full, Rat::zero()));
        }
    }
}

/// Finds (λ, μ) with λ in ri(G) ∩ Λ̃-conditions and μ ∈ Ξ(·;·) cell-wise:
/// both encoded over the cell's normal-cone generators, coupled by
/// ∇g(ȳ)ᵀ(λ - μ) = 0 and bᵀμ = -f(p̄,x̄). Affine g only.
fn stratum_multiplier(
    sys: &VarSystem,
    anchor: &Anchor,
    enc: &ConeVars,
    g: &FaceId,
) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let nb = enc.nvars();
    let mut lp = LinProgram::feasibility(2 * nb);
    push_ri_face_rows(&mut lp, anchor, enc, g, 0);
    enc.push_sign_rows(&mut lp, 0);
    enc.push_sign_rows(&mut lp, nb);
    let minus_f = anchor.minus_f_ref();
    for c in 0..sys.n {
        let block = enc.row_for(&anchor.b.col(c));
        lp.eq.push((place(2 * nb, nb, &block), minus_f[c].clone()));
    }
    for c in 0..anchor.grad_g.cols() {
        let col = anchor.grad_g.col(c);
        let block = enc.row_for(&col);
        let mut row = place(2 * nb, 0, &block);
        for (i, v) in block.iter().enumerate() {
            row[nb + i] = -v.clone();
        }
        lp.eq.push((row, Rat::zero()));
    }
    let point = strict_feasible_point(&lp)?;
    let lam = enc.decode(&point[..nb], sys.s);
    let mu = enc.decode(&point[nb..], sys.s);
    Some((lam, mu))
}

/// One strict-feasibility LP deciding whether the cell contains a failure
/// direction for the stratum: u in the cell's relative interior, admissible
/// (λ,μ), and η ∈ N_{K_G}(∇₂g̃u) with ∇₂Lag u + bᵀη = 0.
fn socic_bad_direction(
    sys: &VarSystem,
    anchor: &Anchor,
    cell: &Cell,
    lam_enc: &ConeVars,
    g: &FaceId,
    eta_enc: &ConeVars,
    h2: &RatMatrix,
) -> Option<(Vec<Rat>, Vec<Rat>, Vec<Rat>)> {
    let n = sys.n;
    let nb = lam_enc.nvars();
    let ne = eta_enc.nvars();
    let total = n + 2 * nb + ne;
    let mut lp = LinProgram::feasibility(total);

    // u against the cell's signs (strict off the zero set).
    let hyperplanes: Vec<Vec<Rat>> = anchor
        .t_cone
        .rows()
        .iter()
        .map(|row| (0..n).map(|c| dot(row, &anchor.grad2_gt.col(c))).collect())
        .collect();
    for (i, &s) in cell.signs.iter().enumerate() {
        let row = place(total, 0, &hyperplanes[i]);
        match s {
            0 => lp.eq.push((row, Rat::zero())),
            -1 => lp.lt.push((row, Rat::zero())),
            _ => unreachable!("admissible cells have nonpositive signs"),
        }
    }

    push_ri_face_rows(&mut lp, anchor, lam_enc, g, n);
    lam_enc.push_sign_rows(&mut lp, n);
    lam_enc.push_sign_rows(&mut lp, n + nb);
    let minus_f = anchor.minus_f_ref();
    for c in 0..sys.n {
        let block = lam_enc.row_for(&anchor.b.col(c));
        lp.eq
            .push((place(total, n + nb, &block), minus_f[c].clone()));
    }
    for c in 0..anchor.grad_g.cols() {
        let col = anchor.grad_g.col(c);
        let block = lam_enc.row_for(&col);
        let mut row = place(total, n, &block);
        for (i, v) in block.iter().enumerate() {
            row[n + nb + i] = -v.clone();
        }
        lp.eq.push((row, Rat::zero()));
    }

    eta_enc.push_sign_rows(&mut lp, n + 2 * nb);
    for i in 0..n {
        let mut row = zeros(total);
        for c in 0..n {
            row[c] = h2.entry(i, c).clone();
        }
        let block = eta_enc.row_for(&anchor.b.col(i));
        row[n + 2 * nb..].clone_from_slice(&block);
        lp.eq.push((row, Rat::zero()));
    }

    let point = if cell.is_zero_cell {
        let coords: Vec<usize> = (0..n).collect();
        crate::exact::nonzero_solution(&lp, &coords)?
    } else {
        strict_feasible_point(&lp)?
    };
    let u0 = point[..n].to_vec();
    let lam0 = lam_enc.decode(&point[n..n + nb], sys.s);
    let eta0 = eta_enc.decode(&point[n + 2 * nb..], sys.s);
    Some((u0, lam0, eta0))
}

/// A direction v with b v ∈ T_{K_G}(w) and vᵀ ∇₂Lag u < 0.
fn decrease_direction(
    anchor: &Anchor,
    k_g: &HCone,
    w: &[Rat],
    h2: &RatMatrix,
    u: &[Rat],
) -> Option<Vec<Rat>> {
    let n = anchor.b.cols();
    let tangent = k_g.tangent_at(w).expect("w lies in the critical cone");
    let mut lp = LinProgram::feasibility(n);
    for (i, row) in tangent.rows().iter().enumerate() {
        let coeffs: Vec<Rat> = (0..n).map(|c| dot(row, &anchor.b.col(c))).collect();
        if tangent.eq_set().contains(&i) {
            lp.eq.push((coeffs, Rat::zero()));
        } else {
            lp.le.push((coeffs, Rat::zero()));
        }
    }
    lp.lt.push((h2.mul_vec(u), Rat::zero()));
    strict_feasible_point(&lp)
}

/// The dual certificate when no decrease direction exists:
/// η ∈ N_{K_G}(w) with ∇₂Lag u + bᵀη = 0.
fn eta_certificate(
    anchor: &Anchor,
    k_g: &HCone,
    w: &[Rat],
    h2: &RatMatrix,
    u: &[Rat],
) -> Option<Vec<Rat>> {
    let active = k_g.active_rows(w).ok()?;
    let enc = ConeVars {
        rays: active
            .iter()
            .filter(|j| !k_g.eq_set().contains(j))
            .map(|&j| k_g.rows()[j].clone())
            .collect(),
        lines: k_g.eq_set().iter().map(|&j| k_g.rows()[j].clone()).collect(),
    };
    let hu = h2.mul_vec(u);
    let mut lp = LinProgram::feasibility(enc.nvars());
    enc.push_sign_rows(&mut lp, 0);
    for i in 0..anchor.b.cols() {
        let block = enc.row_for(&anchor.b.col(i));
        lp.eq.push((block, -hu[i].clone()));
    }
    let point = crate::exact::lp_solve(&lp, crate::exact::LpSense::Max)
        .optimal()?
        .point
        .clone();
    Some(enc.decode(&point, anchor.gt_ref.len()))
}

/// λ ∈ ri(G) within the given multiplier set and perpendicular to w.
fn stratum_rep_dir(
    anchor: &Anchor,
    set: &PolySet,
    g: &FaceId,
    w: &[Rat],
) -> Option<Vec<Rat>> {
    let s = set.dim();
    let mut lp = LinProgram::feasibility(s);
    set.append_to_lp(&mut lp, 0);
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        if g.0.contains(&i) {
            lp.eq.push((row.clone(), Rat::zero()));
        } else {
            lp.lt.push((row.clone(), Rat::zero()));
        }
    }
    if !is_zero_vec(w) {
        lp.eq.push((w.to_vec(), Rat::zero()));
    }
    strict_feasible_point(&lp)
}

/// The closed stratum polyhedron: multiplier set ∩ cl(G) ∩ [w]⊥.
fn closed_stratum_set(anchor: &Anchor, set: &PolySet, g: &FaceId, w: &[Rat]) -> PolySet {
    let s = set.dim();
    let mut ineqs = set.ineqs().to_vec();
    let mut eqs = set.eqs().to_vec();
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        if g.0.contains(&i) {
            eqs.push((row.clone(), Rat::zero()));
        } else {
            ineqs.push((row.clone(), Rat::zero()));
        }
    }
    if !is_zero_vec(w) {
        eqs.push((w.to_vec(), Rat::zero()));
    }
    PolySet::new(s, ineqs, eqs)
}
