//! Calculus on the graph of the polyhedral normal-cone mapping: tangent
//! membership, the face-pair description of directional limiting normal
//! cones, the stratified graphical derivative DΨ of the parameterized
//! normal-cone map, lower bounds for DG, and direction existence.
//!
//! The key polyhedral facts: T_{gph N_D}(z,z*) = gph N_{K_D(z,z*)}, and the
//! directional limiting normal cone of gph N_D in direction (w,η) is the
//! union of (F1-F2)° × (F1-F2) over face pairs F2 ⊆ F1 of the critical cone
//! with w ∈ F2 and F1 ⊆ [η]⊥.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{
    dot, fmt_vec, is_zero_vec, kernel_basis, nonzero_solution, strict_feasible_point, vec_add,
    zeros, LinProgram, Rat, RatMatrix,
};
use crate::poly::{project_to, FaceId, HCone, PolyError, PolySet, VCone};
use crate::sys::{multiplier_lambda_tilde, multiplier_xi, Anchor, SysError, VarSystem};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("x* is not an element of G(p̄,x̄)")]
    XstarNotInG,
    #[error("Assumption 1 surrogate (Robinson CQ) not certified; pass the waiver to proceed")]
    Assumption1NotCertified,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Sys(#[from] SysError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A nested pair of faces F2 ⊆ F1 of a critical cone, together with the
/// difference cone F1 - F2 and its polar.
#[derive(Clone, Debug)]
pub struct FacePair {
    pub f1: FaceId,
    pub f2: FaceId,
    /// F1 - F2 = { z : c_j z = 0 (j in J_{F1}), c_j z <= 0 (j in J_{F2}\J_{F1}) }.
    pub diff: HCone,
    pub diff_polar: VCone,
}

impl FacePair {
    /// Builds the pair from the owning cone; J_{F1} ⊆ J_{F2} encodes F2 ⊆ F1.
    pub fn from_cone(cone: &HCone, f1: &FaceId, f2: &FaceId) -> Self {
        assert!(f1.0.is_subset(&f2.0), "face pair must be nested");
        let mut rows = Vec::new();
        let mut eq = BTreeSet::new();
        let mut rays = Vec::new();
        let mut lines = Vec::new();
        for &j in &f2.0 {
            if f1.0.contains(&j) {
                eq.insert(rows.len());
                lines.push(cone.rows()[j].clone());
            } else {
                rays.push(cone.rows()[j].clone());
            }
            rows.push(cone.rows()[j].clone());
        }
        FacePair {
            f1: f1.clone(),
            f2: f2.clone(),
            diff: HCone::new(cone.dim(), rows, eq),
            diff_polar: VCone::new(cone.dim(), rays, lines),
        }
    }
}

/// (w,η) ∈ T_{gph N_D}(z,z*) = gph N_{K_D(z,z*)}: w in the critical cone,
/// η in its polar, and ηᵀw = 0.
pub fn gph_normal_tangent_member(
    d: &PolySet,
    z: &[Rat],
    zstar: &[Rat],
    w: &[Rat],
    eta: &[Rat],
) -> Result<bool, PolyError> {
    let critical = d.critical_cone(z, zstar)?;
    Ok(pair_in_gph_normal(&critical, w, eta))
}

fn pair_in_gph_normal(critical: &HCone, w: &[Rat], eta: &[Rat]) -> bool {
    critical.member(w) && critical.polar().member(eta) && dot(eta, w).is_zero()
}

/// (λ,η) ∈ Θ(ȳ,v): λ ∈ N_D(g̃(ȳ)) and (∇g̃(ȳ)v, η) ∈ gph N_{K_D(g̃(ȳ),λ)}.
pub fn theta_member(
    sys: &VarSystem,
    anchor: &Anchor,
    v: &[Rat],
    lambda: &[Rat],
    eta: &[Rat],
) -> bool {
    assert_eq!(v.len(), sys.l + sys.n);
    if !anchor.n_vcone.member(lambda) {
        return false;
    }
    let critical = anchor.t_cone.intersect_perp(lambda).canonicalize();
    pair_in_gph_normal(&critical, &anchor.grad_gt_dir(v), eta)
}

/// All face pairs (F1, F2) of K_D(z,z*) with w ∈ F2 ⊆ F1 ⊆ [η]⊥; the
/// directional limiting normal cone of gph N_D at (z,z*) in direction (w,η)
/// is the union of (F1-F2)° × (F1-F2) over the result. Returns the empty
/// list when (w,η) is not tangent to the graph.
pub fn dir_limiting_normal_gphn(
    d: &PolySet,
    z: &[Rat],
    zstar: &[Rat],
    w: &[Rat],
    eta: &[Rat],
) -> Result<Vec<FacePair>, PolyError> {
    let critical = d.critical_cone(z, zstar)?;
    if !pair_in_gph_normal(&critical, w, eta) {
        return Ok(vec![]);
    }
    Ok(face_pairs_between(&critical, w, eta))
}

/// Face pairs of a canonicalized cone with w ∈ F2 ⊆ F1 ⊆ [η]⊥.
pub fn face_pairs_between(critical: &HCone, w: &[Rat], eta: &[Rat]) -> Vec<FacePair> {
    let faces = critical.faces();
    let active_at_w = critical
        .active_rows(w)
        .expect("w was checked to lie in the critical cone");
    let mut out = Vec::new();
    for f1 in &faces {
        if !face_in_eta_perp(critical, f1, eta) {
            continue;
        }
        for f2 in &faces {
            // w ∈ F2 iff every row of J_{F2} is tight at w; F2 ⊆ F1 iff
            // J_{F1} ⊆ J_{F2}.
            if f2.0.is_subset(&active_at_w) && f1.0.is_subset(&f2.0) {
                out.push(FacePair::from_cone(critical, f1, f2));
            }
        }
    }
    out
}

/// F ⊆ [η]⊥ iff η annihilates a basis of F - F.
pub fn face_in_eta_perp(cone: &HCone, f: &FaceId, eta: &[Rat]) -> bool {
    cone.face_diff_unchecked(&f.0)
        .iter()
        .all(|b| dot(b, eta).is_zero())
}

impl HCone {
    /// K ∩ [v]⊥ without canonicalizing (zero v returns K itself).
    pub fn intersect_perp(&self, v: &[Rat]) -> HCone {
        if is_zero_vec(v) {
            self.clone()
        } else {
            self.with_equality(v)
        }
    }
}

/// Nonzero multiplier violating Robinson's constraint qualification:
/// 0 ≠ μ ∈ N_D(g(p̄,x̄,x̄)) with ∇₃g(p̄,x̄,x̄)ᵀ μ = 0, or None when the CQ
/// holds. Serves as the computational surrogate for Assumption 1.
pub fn robinson_cq_witness(sys: &VarSystem, anchor: &Anchor) -> Option<Vec<Rat>> {
    let mut lp = LinProgram::feasibility(sys.s);
    anchor.n_hcone.append_to_lp(&mut lp, 0);
    for c in 0..sys.n {
        lp.eq.push((anchor.b.col(c), Rat::zero()));
    }
    let coords: Vec<usize> = (0..sys.s).collect();
    nonzero_solution(&lp, &coords)
}

/// One λ-stratum of the graphical derivative DΨ((p̄,x̄,x̄),x*)(q,u,u):
/// multipliers in a fixed minimal face G of N_D(g̃), for which the critical
/// cone K_G and hence the attached normal cone are constant. Elements of
/// the stratum are offset(λ) + b(p̄,x̄)ᵀ η with λ in the λ-set and
/// η ∈ N_{K_G}(∇g̃(q,u)).
#[derive(Clone, Debug)]
pub struct DerivStratum {
    pub face: FaceId,
    pub lambda_set: PolySet,
    pub lambda_rep: Vec<Rat>,
    pub critical: HCone,
    /// W with W λ = ∇(b(·)ᵀλ)(p̄,x̄)(q,u); zero for affine g.
    pub offset: RatMatrix,
    pub normal_cone_dir: VCone,
    pub image_cone: VCone,
}

#[derive(Clone, Debug)]
pub struct DerivSet {
    pub qu: Vec<Rat>,
    pub xstar: Vec<Rat>,
    /// Empty iff DΨ((p̄,x̄,x̄),x*)(q,u,u) = ∅.
    pub strata: Vec<DerivStratum>,
}

/// Stratified representation of DΨ((p̄,x̄,x̄), x*)(q,u,u).
pub fn dpsi(
    sys: &VarSystem,
    anchor: &Anchor,
    xstar: &[Rat],
    qu: &[Rat],
    waive_assumption1: bool,
) -> Result<DerivSet, GraphError> {
    if !waive_assumption1 && robinson_cq_witness(sys, anchor).is_some() {
        return Err(GraphError::Assumption1NotCertified);
    }
    let xi = multiplier_xi(sys, &sys.p_ref, &sys.x_ref, xstar)?;
    if xi.is_empty() {
        return Err(GraphError::XstarNotInG);
    }
    let tilde = multiplier_lambda_tilde(sys, &sys.p_ref, &sys.x_ref, xstar, qu)?;
    let mut strata = Vec::new();
    if tilde.pieces.is_empty() {
        return Ok(DerivSet {
            qu: qu.to_vec(),
            xstar: xstar.to_vec(),
            strata,
        });
    }
    let v_img = anchor.grad_gt_dir(qu);
    let offset = sys.grad_b_dir_matrix(qu);
    let bt = anchor.b.transpose();
    for face in anchor.n_hcone.faces() {
        for piece in &tilde.pieces {
            let Some(lambda_rep) = lambda_in_ri_face(anchor, &piece.set, &face) else {
                continue;
            };
            let critical = anchor.t_cone.intersect_perp(&lambda_rep).canonicalize();
            debug_assert!(critical.member(&v_img));
            let normal_cone_dir = critical
                .normal_at(&v_img)
                .expect("∇g̃(q,u) lies in the stratum's critical cone");
            let image_cone = normal_cone_dir.map(&bt);
            strata.push(DerivStratum {
                face: face.clone(),
                lambda_set: piece.set.clone(),
                lambda_rep,
                critical,
                offset: offset.clone(),
                normal_cone_dir,
                image_cone,
            });
        }
    }
    Ok(DerivSet {
        qu: qu.to_vec(),
        xstar: xstar.to_vec(),
        strata,
    })
}

/// A multiplier of `set` lying in the relative interior of the face G of
/// N_D(g̃), i.e. one whose minimal face is exactly G.
pub(crate) fn lambda_in_ri_face(anchor: &Anchor, set: &PolySet, face: &FaceId) -> Option<Vec<Rat>> {
    let mut lp = LinProgram::feasibility(set.dim());
    set.append_to_lp(&mut lp, 0);
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        if face.0.contains(&i) {
            lp.eq.push((row.clone(), Rat::zero()));
        } else if !anchor.n_hcone.eq_set().contains(&i) {
            lp.lt.push((row.clone(), Rat::zero()));
        }
    }
    strict_feasible_point(&lp)
}

/// Membership v* ∈ DΨ((p̄,x̄,x̄),x*)(q,u,u), decided stratum by stratum:
/// ∃ λ in the stratum's λ-set ∩ cl G and η in the attached normal cone with
/// v* = ∇(b(·)ᵀλ)(q,u) + bᵀη.
pub fn dpsi_member(deriv: &DerivSet, anchor: &Anchor, vstar: &[Rat]) -> bool {
    deriv
        .strata
        .iter()
        .any(|st| stratum_contains(st, anchor, vstar))
}

fn stratum_contains(st: &DerivStratum, anchor: &Anchor, vstar: &[Rat]) -> bool {
    let s = st.lambda_set.dim();
    let n = vstar.len();
    let rays = st.normal_cone_dir.rays();
    let lines = st.normal_cone_dir.lines();
    let nvars = s + rays.len() + lines.len();
    let mut lp = LinProgram::feasibility(nvars);
    st.lambda_set.append_to_lp(&mut lp, 0);
    // λ in the closed face G of N.
    for (i, row) in anchor.n_hcone.rows().iter().enumerate() {
        let mut r = zeros(nvars);
        r[..s].clone_from_slice(row);
        if st.face.0.contains(&i) {
            lp.eq.push((r, Rat::zero()));
        } else {
            lp.le.push((r, Rat::zero()));
        }
    }
    // σ >= 0.
    for k in 0..rays.len() {
        let mut r = zeros(nvars);
        r[s + k] = -Rat::from_integer(1.into());
        lp.le.push((r, Rat::zero()));
    }
    // v* = W λ + bᵀ(Σ σ_k r_k + Σ τ_j l_j), one equation per component.
    let bt = anchor.b.transpose();
    for row_i in 0..n {
        let mut r = zeros(nvars);
        for c in 0..s {
            r[c] = st.offset.entry(row_i, c).clone();
        }
        for (k, ray) in rays.iter().enumerate() {
            r[s + k] = dot(bt.row(row_i), ray);
        }
        for (j, line) in lines.iter().enumerate() {
            r[s + rays.len() + j] = dot(bt.row(row_i), line);
        }
        lp.eq.push((r, vstar[row_i].clone()));
    }
    crate::exact::lp_solve(&lp, crate::exact::LpSense::Max).is_feasible()
}

/// Outcome of the face-based certificate for membership in DG.
#[derive(Clone, Debug)]
pub enum DgWitness {
    /// Directional metric subregularity of (g̃(·), μ) - gph N_D certified:
    /// the element lies in DG and the tangent is derivable.
    Certified,
    /// Some admissible face fails the kernel condition; membership in DG
    /// remains uncertified.
    Uncertified {
        face: FaceId,
        kernel_witness: Vec<Rat>,
    },
}

/// Tests whether 0 ≠ μ ∈ ker(jacᵀ) ∩ span{rows}, returning a witness.
pub fn kernel_meets_span(jac: &RatMatrix, span_rows: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    if span_rows.is_empty() {
        return None;
    }
    let sigma = RatMatrix::from_rows(span_rows.to_vec());
    let a = sigma.mul_mat(jac); // k × m; μ = Σᵀ c and jacᵀ μ = Aᵀ c
    for c in kernel_basis(&a.transpose()) {
        let mu = sigma.transpose().mul_vec(&c);
        if !is_zero_vec(&mu) {
            return Some(mu);
        }
    }
    None
}

/// The certificate behind Theorem ThGraphDer's lower bound: for
/// λ ∈ Λ̃(·;(q,u)) and η ∈ N_{K_D(g̃,λ)}(∇g̃(q,u)), metric subregularity of
/// F(p',x',μ) = (g̃(p',x'),μ) - gph N_D in direction ((q,u),η) is certified
/// via its directional metric regularity, which holds iff every face F of
/// K_D(g̃,λ) with ∇g̃(q,u) ∈ F ⊆ [η]⊥ satisfies
/// ker ∇g̃ᵀ ∩ (F-F)° = {0}.
pub fn dg_lower_witness(
    sys: &VarSystem,
    anchor: &Anchor,
    xstar: &[Rat],
    qu: &[Rat],
    lambda: &[Rat],
    eta: &[Rat],
) -> Result<DgWitness, GraphError> {
    let tilde = multiplier_lambda_tilde(sys, &sys.p_ref, &sys.x_ref, xstar, qu)?;
    if !tilde.pieces.iter().any(|p| p.member(lambda)) {
        return Err(GraphError::Precondition(format!(
            "λ = {} is not in Λ̃ for this direction",
            fmt_vec(lambda)
        )));
    }
    let v_img = anchor.grad_gt_dir(qu);
    let critical = anchor.t_cone.intersect_perp(lambda).canonicalize();
    if !pair_in_gph_normal(&critical, &v_img, eta) {
        return Err(GraphError::Precondition(format!(
            "η = {} is not in the normal cone of the critical cone at ∇g̃(q,u)",
            fmt_vec(eta)
        )));
    }
    Ok(face_subregularity_certificate(
        &critical,
        &anchor.grad_gt,
        &anchor.t_cone,
        &v_img,
        eta,
    ))
}

/// The all-faces check of the §2.4 lemma together with the single-face
/// reduction of the theorem; the two must agree, which is asserted.
pub fn face_subregularity_certificate(
    critical: &HCone,
    grad_gt: &RatMatrix,
    t_cone: &HCone,
    v_img: &[Rat],
    eta: &[Rat],
) -> DgWitness {
    let mut failing: Option<(FaceId, Vec<Rat>)> = None;
    let active_at_v = critical
        .active_rows(v_img)
        .expect("∇g̃(q,u) lies in the critical cone");
    for f in critical.faces() {
        if !f.0.is_subset(&active_at_v) || !face_in_eta_perp(critical, &f, eta) {
            continue;
        }
        let span_rows: Vec<Vec<Rat>> = f.0.iter().map(|&j| critical.rows()[j].clone()).collect();
        if let Some(mu) = kernel_meets_span(grad_gt, &span_rows) {
            failing = Some((f, mu));
            break;
        }
    }

    // Single-face reduction: only F_v, taken inside T_D(g̃), matters.
    let active_in_t = t_cone
        .active_rows(v_img)
        .expect("∇g̃(q,u) lies in the tangent cone");
    let span_v: Vec<Vec<Rat>> = active_in_t.iter().map(|&j| t_cone.rows()[j].clone()).collect();
    let single = kernel_meets_span(grad_gt, &span_v);

    assert_eq!(
        failing.is_some(),
        single.is_some(),
        "single-face and all-faces subregularity tests disagree"
    );
    match failing {
        None => DgWitness::Certified,
        Some((face, kernel_witness)) => DgWitness::Uncertified {
            face,
            kernel_witness,
        },
    }
}

/// Witness produced by [`existence_u`]: u solving
/// 0 ∈ ∇f(p̄,x̄)(q,u) + DΨ((p̄,x̄,x̄),-f(p̄,x̄))(q,u,u) with its multiplier
/// and normal-cone element.
#[derive(Clone, Debug)]
pub struct ExistenceWitness {
    pub u: Vec<Rat>,
    pub lambda: Vec<Rat>,
    pub eta: Vec<Rat>,
    pub face: FaceId,
}

/// For affine g, searches the λ-face strata and the faces of each critical
/// cone for some u with 0 ∈ ∇f(q,u) + bᵀ N_{K_G}(∇g̃(q,u)); exact and
/// deterministic (strata and faces in sorted order, first hit wins).
pub fn existence_u(
    sys: &VarSystem,
    anchor: &Anchor,
    q: &[Rat],
) -> Result<Option<ExistenceWitness>, GraphError> {
    if !sys.g.is_affine() {
        return Err(GraphError::Sys(SysError::NonAffine(
            "existence_u requires affine g; supply candidate directions instead".into(),
        )));
    }
    assert_eq!(q.len(), sys.l);
    let xstar = anchor.minus_f_ref();
    let xi = multiplier_xi(sys, &sys.p_ref, &sys.x_ref, &xstar)?;
    for face in anchor.n_hcone.faces() {
        let Some(lambda_rep) = lambda_in_ri_face(anchor, &xi.set, &face) else {
            continue;
        };
        let k_g = anchor.t_cone.intersect_perp(&lambda_rep).canonicalize();
        for jf in k_g.faces() {
            if let Some((u, eta)) = branch_solution_at_q(sys, anchor, &k_g, &jf.0, q) {
                return Ok(Some(ExistenceWitness {
                    u,
                    lambda: lambda_rep,
                    eta,
                    face,
                }));
            }
        }
    }
    Ok(None)
}

/// Per-direction existence check for quadratic g: each candidate u is
/// tested exactly via dpsi membership of -∇f(q,u).
pub fn existence_u_candidates(
    sys: &VarSystem,
    anchor: &Anchor,
    q: &[Rat],
    candidates: &[Vec<Rat>],
    waive_assumption1: bool,
) -> Result<Option<Vec<Rat>>, GraphError> {
    let xstar = anchor.minus_f_ref();
    for u in candidates {
        let mut qu = q.to_vec();
        qu.extend(u.iter().cloned());
        let deriv = dpsi(sys, anchor, &xstar, &qu, waive_assumption1)?;
        let minus_grad_f: Vec<Rat> = anchor.grad_f.mul_vec(&qu).iter().map(|x| -x).collect();
        if dpsi_member(&deriv, anchor, &minus_grad_f) {
            return Ok(Some(u.clone()));
        }
    }
    Ok(None)
}

/// Solves, for fixed q and a face F (index set jf) of the critical cone K_G:
/// find (u, η) with ∇g̃(q,u) ∈ F, η in the normal-cone branch attached to F,
/// and ∇Lag(q,u) + bᵀη = 0. Affine g only (the Lagrangian gradient is then
/// multiplier-free).
fn branch_solution_at_q(
    sys: &VarSystem,
    anchor: &Anchor,
    k_g: &HCone,
    jf: &BTreeSet<usize>,
    q: &[Rat],
) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let (l, n, s) = (sys.l, sys.n, sys.s);
    let gen_rays: Vec<&Vec<Rat>> = jf
        .iter()
        .filter(|j| !k_g.eq_set().contains(j))
        .map(|&j| &k_g.rows()[j])
        .collect();
    let gen_lines: Vec<&Vec<Rat>> = k_g.eq_set().iter().map(|&j| &k_g.rows()[j]).collect();
    // Variables: u (n), σ (rays of the face's normal cone), τ (lines).
    let nvars = n + gen_rays.len() + gen_lines.len();
    let mut lp = LinProgram::feasibility(nvars);
    // ∇g̃(q,u) ∈ F: rows of K_G, equalities on jf.
    for (j, row) in k_g.rows().iter().enumerate() {
        let img_q = dot(&row_times_q_part(row, &anchor.grad_gt, l), q);
        let mut r = zeros(nvars);
        for c in 0..n {
            r[c] = dot(row, &anchor.grad_gt.col(l + c));
        }
        if jf.contains(&j) {
            lp.eq.push((r, -img_q));
        } else {
            lp.le.push((r, -img_q));
        }
    }
    // σ >= 0.
    for k in 0..gen_rays.len() {
        let mut r = zeros(nvars);
        r[n + k] = -Rat::from_integer(1.into());
        lp.le.push((r, Rat::zero()));
    }
    // ∇f(q,u) + bᵀη = 0 with η = Σ σ_k c_k + Σ τ_j c_j.
    let bt = anchor.b.transpose();
    for i in 0..n {
        let mut r = zeros(nvars);
        for c in 0..n {
            r[c] = anchor.grad_f.entry(i, l + c).clone();
        }
        for (k, ray) in gen_rays.iter().enumerate() {
            r[n + k] = dot(bt.row(i), ray);
        }
        for (j, line) in gen_lines.iter().enumerate() {
            r[n + gen_rays.len() + j] = dot(bt.row(i), line);
        }
        let fq: Rat = (0..l).map(|c| anchor.grad_f.entry(i, c) * &q[c]).sum();
        lp.eq.push((r, -fq));
    }
    let sol = crate::exact::lp_solve(&lp, crate::exact::LpSense::Max);
    let point = sol.optimal()?.point.clone();
    let u = point[..n].to_vec();
    let mut eta = zeros(s);
    for (k, ray) in gen_rays.iter().enumerate() {
        eta = vec_add(&eta, &crate::exact::vec_scale(&point[n + k], ray));
    }
    for (j, line) in gen_lines.iter().enumerate() {
        eta = vec_add(
            &eta,
            &crate::exact::vec_scale(&point[n + gen_rays.len() + j], line),
        );
    }
    Some((u, eta))
}

fn row_times_q_part(row: &[Rat], grad_gt: &RatMatrix, l: usize) -> Vec<Rat> {
    (0..l).map(|c| dot(row, &grad_gt.col(c))).collect()
}

/// The branch polyhedron in (q,u,η)-space for a λ-stratum with critical cone
/// K_G and a face F of it: ∇g̃(q,u) ∈ F, η ∈ N_F, lag·(q,u) + bᵀη = 0,
/// obtained by projecting out the conic multipliers of η. `lag` is the
/// Lagrangian Jacobian of the stratum (∇f for affine g).
pub fn branch_cone(
    anchor: &Anchor,
    k_g: &HCone,
    jf: &BTreeSet<usize>,
    lag: &RatMatrix,
) -> PolySet {
    let dim_qu = anchor.grad_gt.cols();
    let s = anchor.grad_gt.rows();
    let n = anchor.b.cols();
    let gen_rays: Vec<&Vec<Rat>> = jf
        .iter()
        .filter(|j| !k_g.eq_set().contains(j))
        .map(|&j| &k_g.rows()[j])
        .collect();
    let gen_lines: Vec<&Vec<Rat>> = k_g.eq_set().iter().map(|&j| &k_g.rows()[j]).collect();
    let total = dim_qu + s + gen_rays.len() + gen_lines.len();
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    // ∇g̃(q,u) ∈ F.
    for (j, row) in k_g.rows().iter().enumerate() {
        let mut r = zeros(total);
        for c in 0..dim_qu {
            r[c] = dot(row, &anchor.grad_gt.col(c));
        }
        if jf.contains(&j) {
            eqs.push((r, Rat::zero()));
        } else {
            ineqs.push((r, Rat::zero()));
        }
    }
    // η - Σ σ_k c_k - Σ τ_j c_j = 0.
    for coord in 0..s {
        let mut r = zeros(total);
        r[dim_qu + coord] = Rat::from_integer(1.into());
        for (k, ray) in gen_rays.iter().enumerate() {
            r[dim_qu + s + k] = -ray[coord].clone();
        }
        for (j, line) in gen_lines.iter().enumerate() {
            r[dim_qu + s + gen_rays.len() + j] = -line[coord].clone();
        }
        eqs.push((r, Rat::zero()));
    }
    // σ >= 0.
    for k in 0..gen_rays.len() {
        let mut r = zeros(total);
        r[dim_qu + s + k] = -Rat::from_integer(1.into());
        ineqs.push((r, Rat::zero()));
    }
    // lag·(q,u) + bᵀη = 0.
    let bt = anchor.b.transpose();
    for i in 0..n {
        let mut r = zeros(total);
        for c in 0..dim_qu {
            r[c] = lag.entry(i, c).clone();
        }
        for coord in 0..s {
            r[dim_qu + coord] = bt.entry(i, coord).clone();
        }
        eqs.push((r, Rat::zero()));
    }
    let lifted = PolySet::new(total, ineqs, eqs);
    let keep: Vec<usize> = (0..dim_qu + s).collect();
    project_to(&lifted, &keep)
}

#[cfg(test)]
mod tests;
