use num_traits::Zero;

use crate::exact::{LinProgram, Rat, RatMatrix};
use crate::graphder::lambda_in_ri_face;
use crate::poly::{FaceId, HCone};
use crate::sys::{multiplier_xi_dir, Anchor, MultiplierPoly, VarSystem};

use super::common::{face_pair_bad_w, ConeVars};
use super::nondegen::check_nondegen_dir;
use super::{Certificate, Status, StratumReport, Verdict};

/// Directional metric regularity of M = f + G in direction ((q,u),0) at
/// ((p̄,x̄),0), under directional non-degeneracy of g̃(·) ∈ D.
///
/// For every multiplier λ̂ ∈ Ξ(·;(q,u)) (stratified by its minimal face in
/// N_D(g̃)), every η ∈ N_{K_D(g̃,λ̂)}(∇g̃(q,u)) solving
/// 0 = ∇Lag_λ̂(q,u) + bᵀη, and every face pair F2 ⊆ F1 ⊆ [η]⊥ of the
/// critical cone with ∇g̃(q,u) ∈ F2, the cone
/// { w : b w ∈ F1-F2, ∇Lagᵀw ∈ ∇g̃ᵀ(F1-F2)° } must be trivial; a nonzero w
/// is the violation witness.
pub fn check_metreg_m_dir(sys: &VarSystem, qu: &[Rat]) -> Verdict {
    assert_eq!(qu.len(), sys.l + sys.n);
    let anchor = sys.anchor();
    let v_img = anchor.grad_gt_dir(qu);
    let nd = check_nondegen_dir(&anchor.grad_gt, &sys.d, &anchor.gt_ref, &v_img)
        .expect("reference point is feasible");
    if !nd.holds() {
        return Verdict::new("metric-regularity", Status::Inconclusive)
            .with_note("directional non-degeneracy not certified in this direction")
            .with_prerequisite(nd);
    }
    if !anchor.t_cone.member(&v_img) {
        return Verdict::new("metric-regularity", Status::Holds)
            .with_note("∇g̃(q,u) leaves the tangent cone: vacuously regular")
            .with_prerequisite(nd);
    }
    let xi_dir = multiplier_xi_dir(sys, &sys.p_ref, &sys.x_ref, &anchor.minus_f_ref(), qu)
        .expect("reference point is feasible");
    if xi_dir.is_empty() {
        return Verdict::new("metric-regularity", Status::Holds)
            .with_note("Ξ(·;(q,u)) is empty: vacuously regular")
            .with_prerequisite(nd);
    }

    let mut strata = Vec::new();
    let mut first_fail = None;
    let mut inconclusive_note = None;
    for g in anchor.n_hcone.faces() {
        let Some(lam_rep) = lambda_in_ri_face(&anchor, &xi_dir.set, &g) else {
            continue;
        };
        // ∇Lag_λ̂ is multiplier-free for affine g; otherwise the stratum
        // must be a single point.
        let lag = if sys.is_affine() {
            anchor.grad_f.clone()
        } else {
            let stratum = stratum_set(&anchor, &xi_dir, &g);
            match (MultiplierPoly {
                kind: xi_dir.kind,
                set: stratum,
            })
            .singleton()
            {
                Some(lam) => sys.lagrangian_grad(&lam, &sys.p_ref, &sys.x_ref),
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
        let outcome = check_stratum(&anchor, &k_g, &v_img, &lag, qu, &lam_rep);
        match outcome {
            StratumOutcome::Vacuous => strata.push(StratumReport {
                id: format!("G{:?}", g.0),
                description: "no η solves the stationarity equation".into(),
                representative: Some(lam_rep),
                status: Status::Holds,
                witness: None,
            }),
            StratumOutcome::Holds => strata.push(StratumReport {
                id: format!("G{:?}", g.0),
                description: "all face pairs pass the witness condition".into(),
                representative: Some(lam_rep),
                status: Status::Holds,
                witness: None,
            }),
            StratumOutcome::Fails { eta, f1, f2, w } => {
                let cert = Certificate::FacePairWitness {
                    cell: None,
                    direction: qu.to_vec(),
                    lambda: lam_rep.clone(),
                    eta,
                    f1,
                    f2,
                    w,
                };
                if first_fail.is_none() {
                    first_fail = Some(cert);
                }
                strata.push(StratumReport {
                    id: format!("G{:?}", g.0),
                    description: "face pair without a positive-pairing probe".into(),
                    representative: Some(lam_rep),
                    status: Status::Fails,
                    witness: None,
                });
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
    let mut verdict = Verdict::new("metric-regularity", status).with_prerequisite(nd);
    verdict.certificate = first_fail;
    verdict.strata = strata;
    if let Some(note) = inconclusive_note {
        verdict.notes.push(note);
    }
    verdict
}

enum StratumOutcome {
    Vacuous,
    Holds,
    Fails {
        eta: Vec<Rat>,
        f1: FaceId,
        f2: FaceId,
        w: Vec<Rat>,
    },
}

fn stratum_set(anchor: &Anchor, xi_dir: &MultiplierPoly, g: &FaceId) -> crate::poly::PolySet {
    let s = xi_dir.set.dim();
    let mut ineqs = xi_dir.set.ineqs().to_vec();
    let mut eqs = xi_dir.set.eqs().to_vec();
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        if g.0.contains(&i) {
            eqs.push((row.clone(), Rat::zero()));
        } else {
            ineqs.push((row.clone(), Rat::zero()));
        }
    }
    crate::poly::PolySet::new(s, ineqs, eqs)
}

fn check_stratum(
    anchor: &Anchor,
    k_g: &HCone,
    v_img: &[Rat],
    lag: &RatMatrix,
    qu: &[Rat],
    _lam_rep: &[Rat],
) -> StratumOutcome {
    let active = k_g
        .active_rows(v_img)
        .expect("∇g̃(q,u) lies in the stratum's critical cone");
    let eta_enc = ConeVars {
        rays: active
            .iter()
            .filter(|j| !k_g.eq_set().contains(j))
            .map(|&j| k_g.rows()[j].clone())
            .collect(),
        lines: k_g.eq_set().iter().map(|&j| k_g.rows()[j].clone()).collect(),
    };
    // Base η-system: η ∈ N_{K_G}(∇g̃(q,u)), bᵀη = -∇Lag(q,u).
    let rhs: Vec<Rat> = lag.mul_vec(qu).iter().map(|x| -x).collect();
    let eta_lp = |extra_perp: &[Vec<Rat>]| -> Option<Vec<Rat>> {
        let mut lp = LinProgram::feasibility(eta_enc.nvars());
        eta_enc.push_sign_rows(&mut lp, 0);
        for i in 0..anchor.b.cols() {
            lp.eq.push((eta_enc.row_for(&anchor.b.col(i)), rhs[i].clone()));
        }
        for basis_vec in extra_perp {
            lp.eq.push((eta_enc.row_for(basis_vec), Rat::zero()));
        }
        let point = crate::exact::lp_solve(&lp, crate::exact::LpSense::Max)
            .optimal()?
            .point
            .clone();
        Some(eta_enc.decode(&point, anchor.gt_ref.len()))
    };
    if eta_lp(&[]).is_none() {
        return StratumOutcome::Vacuous;
    }

    let faces = k_g.faces();
    for f1 in &faces {
        if !f1.0.is_subset(&active) {
            continue;
        }
        // η must annihilate F1: stratify the η-polyhedron by this subspace.
        let perp_basis = k_g.face_diff_unchecked(&f1.0);
        let Some(eta) = eta_lp(&perp_basis) else {
            continue;
        };
        for f2 in &faces {
            if !f1.0.is_subset(&f2.0) || !f2.0.is_subset(&active) {
                continue;
            }
            if let Some(w) = face_pair_bad_w(
                &anchor.b,
                lag,
                &anchor.grad_gt,
                k_g.rows(),
                &f1.0,
                &f2.0,
            ) {
                return StratumOutcome::Fails {
                    eta,
                    f1: f1.clone(),
                    f2: f2.clone(),
                    w,
                };
            }
        }
    }
    StratumOutcome::Holds
}
