
use crate::exact::{rank, Rat, RatMatrix};
use crate::graphder::{
    face_subregularity_certificate, kernel_meets_span, robinson_cq_witness, theta_member,
    DgWitness, GraphError,
};
use crate::poly::{PolyError, PolySet};
use crate::sys::VarSystem;

use super::{stratify_directions, Certificate, Status, StratumReport, Verdict};

/// Robinson's constraint qualification in dual form:
/// ∇₃g(p̄,x̄,x̄)ᵀμ = 0, μ ∈ N_D(g(p̄,x̄,x̄)) ⇒ μ = 0.
pub fn check_robinson_cq(sys: &VarSystem) -> Verdict {
    let anchor = sys.anchor();
    match robinson_cq_witness(sys, &anchor) {
        None => Verdict::new("robinson-cq", Status::Holds),
        Some(mu) => Verdict::new("robinson-cq", Status::Fails)
            .with_certificate(Certificate::Multiplier { mu }),
    }
}

/// Assumption 1 (the metric estimate for the constraint system) is implied
/// by Robinson's CQ; it is strictly weaker, so a failed CQ leaves it
/// undecided rather than refuted.
pub fn check_assumption1(sys: &VarSystem) -> Verdict {
    let cq = check_robinson_cq(sys);
    let verdict = match cq.status {
        Status::Holds => Verdict::new("assumption1", Status::Holds),
        _ => Verdict::new("assumption1", Status::Inconclusive).with_note(
            "Robinson's CQ failed; Assumption 1 is weaker and remains undecided",
        ),
    };
    verdict.with_prerequisite(cq)
}

/// Directional non-degeneracy of the system jac·y ∈ T_D(zref)-anchored
/// constraints in an image direction w = ∇g̃(ȳ)v:
///   jacᵀμ = 0, μ ∈ Span N_{T_D(zref)}(w) ⇒ μ = 0.
/// Decided in the dual form by a rank test on span{a_i : i ∈ J(w)} and
/// independently in the primal form jac·R^m + lin T_{T_D(zref)}(w) = R^s;
/// the two must agree.
pub fn check_nondegen_dir(
    jac: &RatMatrix,
    d: &PolySet,
    zref: &[Rat],
    image_dir: &[Rat],
) -> Result<Verdict, PolyError> {
    let tangent = d.tangent_cone(zref)?;
    if !tangent.member(image_dir) {
        return Ok(Verdict::new("nondegeneracy", Status::Holds)
            .with_note("image direction leaves the tangent cone: vacuously non-degenerate"));
    }
    let active = tangent.active_rows(image_dir)?;
    let span_rows: Vec<Vec<Rat>> = active.iter().map(|&i| tangent.rows()[i].clone()).collect();
    let dual_witness = kernel_meets_span(jac, &span_rows);

    // Primal form: columns of jac together with the lineality of the
    // tangent cone of T_D at the image direction must span R^s.
    let s = jac.rows();
    let primal_holds = {
        let mut cols: Vec<Vec<Rat>> = (0..jac.cols()).map(|c| jac.col(c)).collect();
        if span_rows.is_empty() {
            cols.extend(RatMatrix::identity(s).row_vecs());
        } else {
            cols.extend(crate::exact::kernel_basis(&RatMatrix::from_rows(
                span_rows.clone(),
            )));
        }
        rank(&RatMatrix::from_rows(cols)) == s
    };
    assert_eq!(
        dual_witness.is_none(),
        primal_holds,
        "dual and primal non-degeneracy tests disagree"
    );

    Ok(match dual_witness {
        None => Verdict::new("nondegeneracy", Status::Holds),
        Some(mu) => Verdict::new("nondegeneracy", Status::Fails)
            .with_certificate(Certificate::Multiplier { mu }),
    })
}

/// Directional non-degeneracy of g̃(·) ∈ D at the reference point in a given
/// direction v of (p,x)-space.
pub fn check_nondegen_sys_dir(sys: &VarSystem, v: &[Rat]) -> Verdict {
    let anchor = sys.anchor();
    check_nondegen_dir(&anchor.grad_gt, &sys.d, &anchor.gt_ref, &anchor.grad_gt_dir(v))
        .expect("reference point is feasible")
}

/// Non-degeneracy over all of direction space: stratifies (p,x)-direction
/// space by the activity hyperplanes of T_D ∘ ∇g̃ and decides each cell at
/// its representative (the active set, hence the verdict, is constant on
/// each cell). The zero direction lives in the all-zero cell; when that
/// cell is the origin alone it is checked at v = 0 directly, which is plain
/// non-degeneracy.
pub fn check_nondegen_all(sys: &VarSystem) -> Verdict {
    let anchor = sys.anchor();
    let dim = sys.l + sys.n;
    let hyperplanes: Vec<Vec<Rat>> = anchor
        .t_cone
        .rows()
        .iter()
        .map(|row| {
            (0..dim)
                .map(|c| crate::exact::dot(row, &anchor.grad_gt.col(c)))
                .collect()
        })
        .collect();
    let st = stratify_directions(dim, &hyperplanes, None);

    let mut strata = Vec::new();
    let mut first_fail: Option<Certificate> = None;
    let mut check_at = |v: &[Rat], id: String, desc: String, strata: &mut Vec<StratumReport>| {
        let verdict =
            check_nondegen_dir(&anchor.grad_gt, &sys.d, &anchor.gt_ref, &anchor.grad_gt_dir(v))
                .expect("reference point is feasible");
        let witness = verdict.certificate.as_ref().map(|c| match c {
            Certificate::Multiplier { mu } => super::vec_json(mu),
            _ => unreachable!(),
        });
        if verdict.status == Status::Fails && first_fail.is_none() {
            first_fail = verdict.certificate.clone();
        }
        strata.push(StratumReport {
            id,
            description: desc,
            representative: Some(v.to_vec()),
            status: verdict.status,
            witness,
        });
    };

    // The zero direction first: it is never covered by a nonzero-cell
    // representative and the all-zero cell may be absent (trivial subspace).
    check_at(
        &crate::exact::zeros(dim),
        "origin".into(),
        "v = 0 (plain non-degeneracy)".into(),
        &mut strata,
    );
    for cell in &st.cells {
        check_at(
            &cell.rep.clone(),
            cell.id(),
            format!("sign cell {}", cell.id()),
            &mut strata,
        );
    }

    let status = if strata.iter().any(|s| s.status == Status::Fails) {
        Status::Fails
    } else {
        Status::Holds
    };
    let mut verdict = Verdict::new("nondegeneracy", status);
    verdict.strata = strata;
    verdict.certificate = first_fail;
    verdict
}

/// Directional metric regularity of F(y,λ) = (g̃(y),λ) - gph N_D in
/// direction ((v,η),(0,0)) at ((p̄,x̄),λ), for (λ,η) ∈ Θ(ȳ,v): holds iff
/// every face F of the critical cone with ∇g̃(ȳ)v ∈ F ⊆ [η]⊥ has
/// ker ∇g̃ᵀ ∩ (F-F)° = {0}. Decided by the single-face reduction with the
/// exhaustive all-faces check asserted to agree.
pub fn check_f_dirmetreg(
    sys: &VarSystem,
    v: &[Rat],
    lambda: &[Rat],
    eta: &[Rat],
) -> Result<Verdict, GraphError> {
    let anchor = sys.anchor();
    if !theta_member(sys, &anchor, v, lambda, eta) {
        return Err(GraphError::Precondition(
            "(λ,η) is not in Θ(ȳ,v)".into(),
        ));
    }
    let critical = anchor.t_cone.intersect_perp(lambda).canonicalize();
    let v_img = anchor.grad_gt_dir(v);
    let witness =
        face_subregularity_certificate(&critical, &anchor.grad_gt, &anchor.t_cone, &v_img, eta);
    Ok(match witness {
        DgWitness::Certified => Verdict::new("F-directional-metric-regularity", Status::Holds),
        DgWitness::Uncertified {
            face,
            kernel_witness,
        } => Verdict::new("F-directional-metric-regularity", Status::Fails)
            .with_certificate(Certificate::KernelOnFace {
                face,
                mu: kernel_witness,
            }),
    })
}

