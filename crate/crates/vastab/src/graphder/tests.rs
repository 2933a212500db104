use super::*;
use crate::exact::{rat, rat_int};
use crate::poly::PolySet;
use crate::sys::{Component, PolyFunc2};

fn rvec(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat_int(x)).collect()
}

fn reference_system() -> VarSystem {
    crate::sys::system::tests::reference_system()
}

/// l=1, n=1, s=2, g(p,x,z) = (z,z), D = R^2_-: ∇g̃ has duplicated rows, so
/// ker ∇g̃ᵀ contains (1,-1).
fn duplicated_row_system() -> VarSystem {
    let g = PolyFunc2::new(
        3,
        vec![
            Component::affine(Rat::zero(), rvec(&[0, 0, 1])),
            Component::affine(Rat::zero(), rvec(&[0, 0, 1])),
        ],
    );
    VarSystem::new(
        1,
        1,
        2,
        PolyFunc2::zero_map(2, 1),
        g,
        PolySet::neg_orthant(2),
        vec![rat_int(0)],
        vec![rat_int(0)],
        None,
    )
    .unwrap()
}

/// g(p,x,z) = z with D = R: the normal cone of D is trivial everywhere.
fn free_d_system() -> VarSystem {
    let g = PolyFunc2::new(3, vec![Component::affine(Rat::zero(), rvec(&[0, 0, 1]))]);
    VarSystem::new(
        1,
        1,
        1,
        PolyFunc2::zero_map(2, 1),
        g,
        PolySet::full_space(1),
        vec![rat_int(0)],
        vec![rat_int(0)],
        None,
    )
    .unwrap()
}

#[test]
fn gph_tangent_membership() {
    let d = PolySet::neg_orthant(2);
    let z = rvec(&[0, 0]);
    let zs = rvec(&[0, 0]);
    // Complementary pair.
    assert!(gph_normal_tangent_member(&d, &z, &zs, &rvec(&[-1, 0]), &rvec(&[0, 1])).unwrap());
    // ηᵀw ≠ 0 fails.
    assert!(!gph_normal_tangent_member(&d, &z, &zs, &rvec(&[-1, 0]), &rvec(&[1, 0])).unwrap());
    // Direction-table tuple: (∇g̃(q,u), η) = ((0, q2-2q1), ((q1-q2)/2, 0))
    // with q = (1,0), u = (1,1/2): w = (0,-2), η = (1/2, 0).
    let eta = vec![rat(1, 2), rat_int(0)];
    assert!(gph_normal_tangent_member(&d, &z, &zs, &rvec(&[0, -2]), &eta).unwrap());
    // Anchor outside the graph errors.
    assert!(gph_normal_tangent_member(&d, &z, &rvec(&[-1, 0]), &z, &z).is_err());
}

#[test]
fn theta_membership() {
    let sys = reference_system();
    let anchor = sys.anchor();
    // λ outside N_D(g̃) is simply not a Θ member.
    assert!(!theta_member(&sys, &anchor, &rvec(&[0, 0, 1, 0]), &rvec(&[-1, 0]), &rvec(&[0, 0])));
    // v = (0,u) with u = (1,0): ∇g̃(0,u) = (-1,-1) ∈ R^2_-, λ = η = 0.
    assert!(theta_member(&sys, &anchor, &rvec(&[0, 0, 1, 0]), &rvec(&[0, 0]), &rvec(&[0, 0])));
    // Infeasible image direction: u = (-1,0) gives ∇g̃(0,u) = (1,1) ∉ R^2_-.
    assert!(!theta_member(&sys, &anchor, &rvec(&[0, 0, -1, 0]), &rvec(&[0, 0]), &rvec(&[0, 0])));

    // D = R^s: only λ = 0 and η = 0 qualify.
    let free = free_d_system();
    let fa = free.anchor();
    assert!(theta_member(&free, &fa, &rvec(&[1, 1]), &rvec(&[0]), &rvec(&[0])));
    assert!(!theta_member(&free, &fa, &rvec(&[1, 1]), &rvec(&[1]), &rvec(&[0])));
    assert!(!theta_member(&free, &fa, &rvec(&[1, 1]), &rvec(&[0]), &rvec(&[1])));
}

#[test]
fn dir_limiting_normal_cone_pairs() {
    let d = PolySet::neg_orthant(2);
    let z = rvec(&[0, 0]);
    let zs = rvec(&[0, 0]);
    // Zero direction: all nested pairs of the four faces of R^2_-.
    let pairs = dir_limiting_normal_gphn(&d, &z, &zs, &rvec(&[0, 0]), &rvec(&[0, 0])).unwrap();
    assert_eq!(pairs.len(), 9);

    // η = (1/2, 0) restricts F1 ⊆ {z : z1 = 0}: pairs
    // ({0},{0}), ({0}xR_-,{0}xR_-), ({0}xR_-,{0}).
    let eta = vec![rat(1, 2), rat_int(0)];
    let pairs = dir_limiting_normal_gphn(&d, &z, &zs, &rvec(&[0, 0]), &eta).unwrap();
    assert_eq!(pairs.len(), 3);
    // F1 = F2 = {(0,0)} must be among them, with trivial difference cone.
    assert!(pairs
        .iter()
        .any(|p| p.f1 == p.f2 && p.f1.0.len() == 2 && p.diff.is_trivial()));

    // w outside the critical cone: empty list.
    let pairs = dir_limiting_normal_gphn(&d, &z, &zs, &rvec(&[1, 0]), &rvec(&[0, 0])).unwrap();
    assert!(pairs.is_empty());
}

#[test]
fn face_pair_difference_cones() {
    let k = HCone::new(
        2,
        vec![rvec(&[1, 0]), rvec(&[0, 1])],
        std::collections::BTreeSet::new(),
    );
    let faces = k.faces();
    // F1 = R^2_- (J = {}), F2 = {0} x R_- (J = {0}): F1 - F2 = R_- x R.
    let f1 = &faces[0];
    let f2 = faces.iter().find(|f| f.0 == BTreeSet::from([0])).unwrap();
    let pair = FacePair::from_cone(&k, f1, f2);
    assert!(pair.diff.member(&rvec(&[-1, 5])));
    assert!(!pair.diff.member(&rvec(&[1, 0])));
    // Polar = cone{(1,0)}.
    assert!(pair.diff_polar.member(&rvec(&[2, 0])));
    assert!(!pair.diff_polar.member(&rvec(&[0, 1])));
}

#[test]
fn robinson_witness() {
    let sys = reference_system();
    assert!(robinson_cq_witness(&sys, &sys.anchor()).is_none());

    // g = (z, -z), D = R^2_-: μ = (1,1) satisfies bᵀμ = 0.
    let g = PolyFunc2::new(
        3,
        vec![
            Component::affine(Rat::zero(), rvec(&[0, 0, 1])),
            Component::affine(Rat::zero(), rvec(&[0, 0, -1])),
        ],
    );
    let sys = VarSystem::new(
        1,
        1,
        2,
        PolyFunc2::zero_map(2, 1),
        g,
        PolySet::neg_orthant(2),
        vec![rat_int(0)],
        vec![rat_int(0)],
        None,
    )
    .unwrap();
    let anchor = sys.anchor();
    let mu = robinson_cq_witness(&sys, &anchor).unwrap();
    assert!(!crate::exact::is_zero_vec(&mu));
    assert!(anchor.n_vcone.member(&mu));
    assert!(crate::exact::is_zero_vec(&anchor.b.transpose().mul_vec(&mu)));
}

#[test]
fn dpsi_empty_outside_tangent() {
    let sys = reference_system();
    let anchor = sys.anchor();
    // ∇g̃(q,u) = (q2 - u1 + 2u2, -u1 - 2u2): (q,u) = (0,1,0,0) leaves T_D.
    let deriv = dpsi(&sys, &anchor, &anchor.minus_f_ref(), &rvec(&[0, 1, 0, 0]), false).unwrap();
    assert!(deriv.strata.is_empty());
}

#[test]
fn dpsi_membership_along_table_rows() {
    let sys = reference_system();
    let anchor = sys.anchor();
    let xstar = anchor.minus_f_ref();

    // Row 1: q = (1,0), u = (1,0): 0 ∈ ∇f(q,u) + DΨ(q,u,u) via λ = 0, η = 0.
    let qu = rvec(&[1, 0, 1, 0]);
    let deriv = dpsi(&sys, &anchor, &xstar, &qu, false).unwrap();
    assert!(!deriv.strata.is_empty());
    let minus_grad_f: Vec<Rat> = anchor.grad_f.mul_vec(&qu).iter().map(|x| -x).collect();
    assert!(dpsi_member(&deriv, &anchor, &minus_grad_f));
    // (1,0) is not an element: all elements have first component 0.
    assert!(!dpsi_member(&deriv, &anchor, &rvec(&[1, 0])));

    // Row 2: q = (1,0), u = (1,1/2): member with η = (1/2, 0).
    let qu = vec![rat_int(1), rat_int(0), rat_int(1), rat(1, 2)];
    let deriv = dpsi(&sys, &anchor, &xstar, &qu, false).unwrap();
    let minus_grad_f: Vec<Rat> = anchor.grad_f.mul_vec(&qu).iter().map(|x| -x).collect();
    assert_eq!(minus_grad_f, vec![rat_int(0), rat(1, 2)]);
    assert!(dpsi_member(&deriv, &anchor, &minus_grad_f));
}

#[test]
fn dg_lower_certificates() {
    let sys = reference_system();
    let anchor = sys.anchor();
    let xstar = anchor.minus_f_ref();
    // Full row rank of ∇g̃: every admissible pair certifies.
    let qu = rvec(&[1, 0, 1, 0]);
    let w = dg_lower_witness(&sys, &anchor, &xstar, &qu, &rvec(&[0, 0]), &rvec(&[0, 0])).unwrap();
    assert!(matches!(w, DgWitness::Certified));

    // D = R^s: vacuous faces, certified.
    let free = free_d_system();
    let fa = free.anchor();
    let w = dg_lower_witness(&free, &fa, &fa.minus_f_ref(), &rvec(&[1, 1]), &rvec(&[0]), &rvec(&[0]))
        .unwrap();
    assert!(matches!(w, DgWitness::Certified));

    // Duplicated rows: kernel witness blocks the certificate.
    let dup = duplicated_row_system();
    let da = dup.anchor();
    let w = dg_lower_witness(&dup, &da, &da.minus_f_ref(), &rvec(&[1, 0]), &rvec(&[0, 0]), &rvec(&[0, 0]))
        .unwrap();
    match w {
        DgWitness::Uncertified { kernel_witness, .. } => {
            assert!(crate::exact::is_zero_vec(
                &da.grad_gt.transpose().mul_vec(&kernel_witness)
            ));
            assert!(!crate::exact::is_zero_vec(&kernel_witness));
        }
        DgWitness::Certified => panic!("expected an uncertified pair"),
    }

    // Precondition violations are errors.
    assert!(dg_lower_witness(&sys, &anchor, &xstar, &qu, &rvec(&[1, 0]), &rvec(&[0, 0])).is_err());
}

#[test]
fn existence_of_u_on_reference_system() {
    let sys = reference_system();
    let anchor = sys.anchor();

    // q = (1,1): the boundary of the first table stratum, u = (1,0).
    let w = existence_u(&sys, &anchor, &rvec(&[1, 1])).unwrap().unwrap();
    assert_eq!(w.u, rvec(&[1, 0]));
    assert_eq!(w.lambda, rvec(&[0, 0]));

    // q = (0,1) is outside the domain cone.
    assert!(existence_u(&sys, &anchor, &rvec(&[0, 1])).unwrap().is_none());

    // f ≡ 0, g ≡ 0 with D = R^s: u exists for every q.
    let g = PolyFunc2::zero_map(3, 1);
    let trivial = VarSystem::new(
        1,
        1,
        1,
        PolyFunc2::zero_map(2, 1),
        g,
        PolySet::full_space(1),
        vec![rat_int(0)],
        vec![rat_int(0)],
        None,
    )
    .unwrap();
    let ta = trivial.anchor();
    for q in [rvec(&[1]), rvec(&[-3]), rvec(&[0])] {
        let w = existence_u(&trivial, &ta, &q).unwrap().unwrap();
        // Re-verify: ∇f(q,u) + bᵀη = 0 (everything is zero here).
        assert!(crate::exact::is_zero_vec(&w.eta));
    }
}

#[test]
fn existence_with_candidates_for_quadratic_g() {
    let sys = reference_system();
    let anchor = sys.anchor();
    let q = rvec(&[1, 0]);
    let good = rvec(&[1, 0]);
    let bad = rvec(&[0, 7]);
    let got = existence_u_candidates(&sys, &anchor, &q, &[bad.clone(), good.clone()], false)
        .unwrap()
        .unwrap();
    assert_eq!(got, good);
    assert!(existence_u_candidates(&sys, &anchor, &q, &[bad], false)
        .unwrap()
        .is_none());
}

#[test]
fn branch_cone_reproduces_table_row_two() {
    let sys = reference_system();
    let anchor = sys.anchor();
    let k = anchor.t_cone.clone().canonicalize();
    // Face J = {0} of K = R^2_-: the branch carrying
    // u = (q1, (q1-q2)/2), η = ((q1-q2)/2, 0) on q2 - q1 <= 0, q2 - 2q1 <= 0.
    let jf = BTreeSet::from([0]);
    let lag = anchor.grad_f.clone();
    let branch = branch_cone(&anchor, &k, &jf, &lag);
    assert_eq!(branch.dim(), 6);
    // (q,u,η) for q = (1,0): u = (1,1/2), η = (1/2,0).
    let good = vec![rat_int(1), rat_int(0), rat_int(1), rat(1, 2), rat(1, 2), rat_int(0)];
    assert!(branch.member(&good));
    // Wrong η.
    let bad = vec![rat_int(1), rat_int(0), rat_int(1), rat(1, 2), rat_int(0), rat(1, 2)];
    assert!(!branch.member(&bad));
    // q outside the stratum: q = (0,1).
    let out = vec![rat_int(0), rat_int(1), rat_int(0), rat(-1, 2), rat(-1, 2), rat_int(0)];
    assert!(!branch.member(&out));
}
