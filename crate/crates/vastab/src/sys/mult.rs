use num_traits::Zero;

use crate::exact::{fmt_vec, lp_solve, zeros, LinProgram, LpSense, LpStatus, Rat};
use crate::poly::{project_to, to_hcone, PolySet};

use super::{SysError, VarSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultKind {
    Lambda,
    LambdaDir,
    Xi,
    XiDir,
    LambdaTilde,
}

/// A multiplier polyhedron in R^s with a tag identifying which of the
/// paper's sets it describes. Emptiness is a value here, not an error.
#[derive(Clone, Debug)]
pub struct MultiplierPoly {
    pub kind: MultKind,
    pub set: PolySet,
}

impl MultiplierPoly {
    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn member(&self, lambda: &[Rat]) -> bool {
        self.set.member(lambda)
    }

    pub fn any_point(&self) -> Option<Vec<Rat>> {
        let mut lp = LinProgram::feasibility(self.set.dim());
        self.set.append_to_lp(&mut lp, 0);
        lp_solve(&lp, LpSense::Max).optimal().map(|s| s.point.clone())
    }

    /// True iff the set is a single point, returned when so.
    pub fn singleton(&self) -> Option<Vec<Rat>> {
        let point = self.any_point()?;
        for j in 0..self.set.dim() {
            for sense in [LpSense::Max, LpSense::Min] {
                let mut lp = LinProgram::feasibility(self.set.dim());
                lp.objective = zeros(self.set.dim());
                lp.objective[j] = Rat::from_integer(1.into());
                self.set.append_to_lp(&mut lp, 0);
                match lp_solve(&lp, sense) {
                    LpStatus::Optimal(sol) if sol.value == point[j] => {}
                    _ => return None,
                }
            }
        }
        Some(point)
    }

    fn infeasible(kind: MultKind, dim: usize) -> Self {
        // 0·λ = 1 marks sets that are empty by a failed precheck.
        let set = PolySet::new(dim, vec![], vec![(zeros(dim), Rat::from_integer(1.into()))]);
        Self { kind, set }
    }
}

/// Λ(y, y*) = { λ ∈ N_D(g(y)) : ∇g(y)ᵀ λ = y* } for y = (p,x,z).
pub fn multiplier_lambda(
    sys: &VarSystem,
    y: &[Rat],
    ystar: &[Rat],
) -> Result<MultiplierPoly, SysError> {
    assert_eq!(y.len(), sys.l + 2 * sys.n);
    assert_eq!(ystar.len(), sys.l + 2 * sys.n);
    let gy = sys.g.eval(y);
    if !sys.d.member(&gy) {
        return Err(SysError::InfeasibleAnchor(format!(
            "g(y) = {} is not in D",
            fmt_vec(&gy)
        )));
    }
    let normal = to_hcone(&sys.d.normal_cone(&gy)?);
    let grad_g = sys.g.jacobian(y);
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (i, row) in normal.rows().iter().enumerate() {
        if normal.eq_set().contains(&i) {
            eqs.push((row.clone(), Rat::zero()));
        } else {
            ineqs.push((row.clone(), Rat::zero()));
        }
    }
    // ∇g(y)ᵀ λ = y*: one equality per input coordinate of g.
    for c in 0..grad_g.cols() {
        eqs.push((grad_g.col(c), ystar[c].clone()));
    }
    Ok(MultiplierPoly {
        kind: MultKind::Lambda,
        set: PolySet::new(sys.s, ineqs, eqs),
    })
}

/// Directional multiplier set
/// Λ(y, y*; v) = argmax { vᵀ ∇²(λᵀg)(y) v : λ ∈ Λ(y, y*) },
/// returned as the optimal face of the defining linear program.
pub fn multiplier_lambda_dir(
    sys: &VarSystem,
    y: &[Rat],
    ystar: &[Rat],
    v: &[Rat],
) -> Result<MultiplierPoly, SysError> {
    let lambda = multiplier_lambda(sys, y, ystar)?;
    if lambda.is_empty() {
        return Err(SysError::EmptyMultiplierSet(
            "Λ(y,y*) is empty; the directional set is undefined".into(),
        ));
    }
    let objective = hessian_objective(sys, v);
    if objective.iter().all(Rat::is_zero) {
        return Ok(MultiplierPoly {
            kind: MultKind::LambdaDir,
            set: lambda.set,
        });
    }
    let mut lp = LinProgram::feasibility(sys.s);
    lp.objective = objective.clone();
    lambda.set.append_to_lp(&mut lp, 0);
    match lp_solve(&lp, LpSense::Max) {
        LpStatus::Unbounded => Err(SysError::UnboundedArgmax),
        LpStatus::Infeasible => unreachable!("nonemptiness checked above"),
        LpStatus::Optimal(sol) => {
            let mut set = lambda.set;
            let mut eqs = set.eqs().to_vec();
            eqs.push((objective, sol.value));
            set = PolySet::new(sys.s, set.ineqs().to_vec(), eqs);
            Ok(MultiplierPoly {
                kind: MultKind::LambdaDir,
                set,
            })
        }
    }
}

/// Objective coefficients of λ ↦ vᵀ ∇²(λᵀg)(y) v (Hessians are constant).
pub fn hessian_objective(sys: &VarSystem, v: &[Rat]) -> Vec<Rat> {
    assert_eq!(v.len(), sys.l + 2 * sys.n);
    (0..sys.s)
        .map(|k| {
            let h = sys.g.hessian(k);
            crate::exact::dot(v, &h.mul_vec(v))
        })
        .collect()
}

/// Ξ((p,x), x*) = { μ ∈ N_D(g̃(p,x)) : b(p,x)ᵀ μ = x* }.
pub fn multiplier_xi(
    sys: &VarSystem,
    p: &[Rat],
    x: &[Rat],
    xstar: &[Rat],
) -> Result<MultiplierPoly, SysError> {
    assert_eq!(xstar.len(), sys.n);
    let mut y = p.to_vec();
    y.extend(x.iter().cloned());
    let gt = sys.gtilde().eval(&y);
    if !sys.d.member(&gt) {
        return Err(SysError::InfeasibleAnchor(format!(
            "g̃(p,x) = {} is not in D",
            fmt_vec(&gt)
        )));
    }
    let normal = to_hcone(&sys.d.normal_cone(&gt)?);
    let b = sys.b_at(p, x);
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (i, row) in normal.rows().iter().enumerate() {
        if normal.eq_set().contains(&i) {
            eqs.push((row.clone(), Rat::zero()));
        } else {
            ineqs.push((row.clone(), Rat::zero()));
        }
    }
    for c in 0..sys.n {
        eqs.push((b.col(c), xstar[c].clone()));
    }
    Ok(MultiplierPoly {
        kind: MultKind::Xi,
        set: PolySet::new(sys.s, ineqs, eqs),
    })
}

/// Ξ((p,x), x*; (q,u)) = { μ ∈ Ξ : ∇g̃(p,x)(q,u) ∈ K_D(g̃(p,x), μ) }.
/// The critical-cone condition splits into the precheck
/// ∇g̃(q,u) ∈ T_D(g̃) (otherwise the set is empty) plus μᵀ ∇g̃(q,u) = 0.
pub fn multiplier_xi_dir(
    sys: &VarSystem,
    p: &[Rat],
    x: &[Rat],
    xstar: &[Rat],
    qu: &[Rat],
) -> Result<MultiplierPoly, SysError> {
    assert_eq!(qu.len(), sys.l + sys.n);
    let xi = multiplier_xi(sys, p, x, xstar)?;
    let mut y = p.to_vec();
    y.extend(x.iter().cloned());
    let gt_fun = sys.gtilde();
    let gt = gt_fun.eval(&y);
    let v_img = gt_fun.jacobian(&y).mul_vec(qu);
    let tangent = sys.d.tangent_cone(&gt)?;
    if !tangent.member(&v_img) {
        return Ok(MultiplierPoly::infeasible(MultKind::XiDir, sys.s));
    }
    let mut eqs = xi.set.eqs().to_vec();
    if !v_img.iter().all(Rat::is_zero) {
        eqs.push((v_img, Rat::zero()));
    }
    Ok(MultiplierPoly {
        kind: MultKind::XiDir,
        set: PolySet::new(sys.s, xi.set.ineqs().to_vec(), eqs),
    })
}

/// Λ̃((p,x), x*; (q,u)), represented stratum-wise. Exact when the argmax
/// objective is constant on the feasible multipliers (in particular for
/// affine g) or when Ξ(·;(q,u)) is a single point; otherwise the quadratic
/// argmax would have to be solved parametrically and the caller gets an
/// InconclusiveStratum error.
#[derive(Clone, Debug)]
pub struct LambdaTilde {
    pub pieces: Vec<MultiplierPoly>,
}

impl LambdaTilde {
    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(MultiplierPoly::is_empty)
    }
}

pub fn multiplier_lambda_tilde(
    sys: &VarSystem,
    p: &[Rat],
    x: &[Rat],
    xstar: &[Rat],
    qu: &[Rat],
) -> Result<LambdaTilde, SysError> {
    let xi_dir = multiplier_xi_dir(sys, p, x, xstar, qu)?;
    if xi_dir.is_empty() {
        return Ok(LambdaTilde { pieces: vec![] });
    }
    let mut y = p.to_vec();
    y.extend(x.iter().cloned());
    y.extend(x.iter().cloned());
    let mut v = qu.to_vec();
    v.extend_from_slice(&qu[sys.l..]);
    let objective = hessian_objective(sys, &v);

    let gy = sys.g.eval(&y);
    let normal = to_hcone(&sys.d.normal_cone(&gy)?);
    let grad_g = sys.g.jacobian(&y);

    // Lifted polyhedron in (λ, μ): λ ∈ N_D(g(y)), ∇g(y)ᵀ(λ - μ) = 0,
    // μ ∈ Ξ(·;(q,u)). Its λ-projection is the union of Λ(y, ∇g(y)ᵀμ) over μ.
    let dim = 2 * sys.s;
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (i, row) in normal.rows().iter().enumerate() {
        let mut lifted = row.clone();
        lifted.extend(zeros(sys.s));
        if normal.eq_set().contains(&i) {
            eqs.push((lifted, Rat::zero()));
        } else {
            ineqs.push((lifted, Rat::zero()));
        }
    }
    for c in 0..grad_g.cols() {
        let col = grad_g.col(c);
        let mut row = col.clone();
        row.extend(col.iter().map(|x| -x));
        eqs.push((row, Rat::zero()));
    }
    for (a, b) in xi_dir.set.ineqs() {
        let mut row = zeros(sys.s);
        row.extend(a.iter().cloned());
        ineqs.push((row, b.clone()));
    }
    for (a, b) in xi_dir.set.eqs() {
        let mut row = zeros(sys.s);
        row.extend(a.iter().cloned());
        eqs.push((row, b.clone()));
    }
    let lifted = PolySet::new(dim, ineqs, eqs);

    let objective_constant = {
        if objective.iter().all(Rat::is_zero) {
            true
        } else {
            let mut obj = objective.clone();
            obj.extend(zeros(sys.s));
            let mut lp = LinProgram::feasibility(dim);
            lp.objective = obj;
            lifted.append_to_lp(&mut lp, 0);
            let hi = lp_solve(&lp, LpSense::Max);
            let lo = lp_solve(&lp, LpSense::Min);
            match (hi.optimal(), lo.optimal()) {
                (Some(h), Some(l)) => h.value == l.value,
                _ => false,
            }
        }
    };

    if objective_constant {
        let lambda_coords: Vec<usize> = (0..sys.s).collect();
        let set = project_to(&lifted, &lambda_coords);
        return Ok(LambdaTilde {
            pieces: vec![MultiplierPoly {
                kind: MultKind::LambdaTilde,
                set,
            }],
        });
    }

    // Quadratic argmax: exact only for a zero-dimensional Ξ(·;(q,u)).
    match xi_dir.singleton() {
        Some(mu) => {
            let ystar = grad_g.transpose().mul_vec(&mu);
            let piece = multiplier_lambda_dir(sys, &y, &ystar, &v)?;
            Ok(LambdaTilde {
                pieces: vec![MultiplierPoly {
                    kind: MultKind::LambdaTilde,
                    set: piece.set,
                }],
            })
        }
        None => Err(SysError::InconclusiveStratum(
            "Ξ(·;(q,u)) is not a single point and g is not affine".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int, RatMatrix};
    use crate::poly::polyhedron_equal;
    use crate::sys::{Component, PolyFunc2};

    fn rvec(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    fn reference_system() -> VarSystem {
        crate::sys::system::tests::reference_system()
    }

    #[test]
    fn xi_of_reference_system_is_origin() {
        let sys = reference_system();
        let anchor = sys.anchor();
        let xi = multiplier_xi(&sys, &sys.p_ref, &sys.x_ref, &anchor.minus_f_ref()).unwrap();
        assert_eq!(xi.singleton(), Some(rvec(&[0, 0])));
    }

    #[test]
    fn xi_dir_and_lambda_tilde_of_reference_system() {
        let sys = reference_system();
        let anchor = sys.anchor();
        let xstar = anchor.minus_f_ref();
        // Any admissible direction (0, u): u = (1, 0).
        let qu = rvec(&[0, 0, 1, 0]);
        let xd = multiplier_xi_dir(&sys, &sys.p_ref, &sys.x_ref, &xstar, &qu).unwrap();
        assert_eq!(xd.singleton(), Some(rvec(&[0, 0])));
        let lt = multiplier_lambda_tilde(&sys, &sys.p_ref, &sys.x_ref, &xstar, &qu).unwrap();
        assert_eq!(lt.pieces.len(), 1);
        assert_eq!(lt.pieces[0].singleton(), Some(rvec(&[0, 0])));
    }

    #[test]
    fn xi_dir_empty_when_direction_leaves_tangent() {
        let sys = reference_system();
        let anchor = sys.anchor();
        // ∇g̃(q,u) = (q2 - u1 + 2u2, -u1 - 2u2); (q,u) = (0,1,0,0) gives (1,0) ∉ R^2_-.
        let xd = multiplier_xi_dir(
            &sys,
            &sys.p_ref,
            &sys.x_ref,
            &anchor.minus_f_ref(),
            &rvec(&[0, 1, 0, 0]),
        )
        .unwrap();
        assert!(xd.is_empty());
    }

    #[test]
    fn lambda_for_free_d_is_zero_or_empty() {
        // D = R^s: N_D = {0}, so Λ = {0} iff y* = 0 and empty otherwise.
        let g = PolyFunc2::new(
            3,
            vec![Component::affine(
                Rat::zero(),
                vec![rat_int(0), rat_int(0), rat_int(1)],
            )],
        );
        let f = PolyFunc2::zero_map(2, 1);
        let sys = VarSystem::new(
            1,
            1,
            1,
            f,
            g,
            crate::poly::PolySet::full_space(1),
            vec![rat_int(0)],
            vec![rat_int(0)],
            None,
        )
        .unwrap();
        let y = rvec(&[0, 0, 0]);
        let lam = multiplier_lambda(&sys, &y, &rvec(&[0, 0, 0])).unwrap();
        assert_eq!(lam.singleton(), Some(rvec(&[0])));
        let lam = multiplier_lambda(&sys, &y, &rvec(&[0, 0, 1])).unwrap();
        assert!(lam.is_empty());
    }

    #[test]
    fn lambda_dir_equals_lambda_for_affine_g() {
        let sys = reference_system();
        let y = sys.ref_point_lifted();
        // y* = ∇g(y)ᵀ μ for μ = (1, 0).
        let ystar = sys.g.jacobian(&y).transpose().mul_vec(&rvec(&[1, 0]));
        let plain = multiplier_lambda(&sys, &y, &ystar).unwrap();
        for v in [rvec(&[1, 0, 0, 0, 0, 0]), rvec(&[0, 1, -1, 2, 0, -3])] {
            let dir = multiplier_lambda_dir(&sys, &y, &ystar, &v).unwrap();
            assert!(polyhedron_equal(&plain.set, &dir.set));
        }
    }

    #[test]
    fn quadratic_argmax_selects_vertex() {
        // g(z) = (z, z^2), D = R^2_-, reference x̄ = -1 (interior of the
        // first row, so only the second row's multiplier is constrained).
        // At x̄ = 0 both rows are active: choose y* = ∇g(0)ᵀλ with
        // Λ = {λ >= 0 : λ1 = c} a segment-like set; the argmax of
        // vᵀ∇²(λᵀg)v = 2 λ2 v² picks the largest λ2.
        let q = {
            let mut m = RatMatrix::zero(3, 3);
            *m.entry_mut(2, 2) = rat_int(1);
            Some(m)
        };
        let g = PolyFunc2::new(
            3,
            vec![
                Component::affine(Rat::zero(), rvec(&[0, 0, 1])),
                Component {
                    constant: Rat::zero(),
                    linear: rvec(&[0, 0, 0]),
                    quad: q,
                },
            ],
        );
        let f = PolyFunc2::zero_map(2, 1);
        let sys = VarSystem::new(
            1,
            1,
            2,
            f,
            g,
            crate::poly::PolySet::neg_orthant(2),
            vec![rat_int(0)],
            vec![rat_int(0)],
            None,
        )
        .unwrap();
        let y = rvec(&[0, 0, 0]);
        // ∇g(0) rows: (0,0,1) and (0,0,0): y* = (0,0,c) has
        // Λ = {λ >= 0 : λ1 = c}, unbounded in λ2 -> argmax unbounded.
        let ystar = rvec(&[0, 0, 1]);
        let v = rvec(&[0, 0, 1]);
        assert!(matches!(
            multiplier_lambda_dir(&sys, &y, &ystar, &v),
            Err(SysError::UnboundedArgmax)
        ));

        // Bound λ2 through D = {z <= 0, z2... }: instead pick y* = 0 so
        // Λ = {λ >= 0 : λ1 = 0} is a ray in λ2 — still unbounded. Use a
        // bounded variant: D with rows z1 <= 0 and z1 + z2 <= 0 hmm —
        // simplest bounded case: y* such that Λ is the segment
        // {λ1 + λ2 = 1, λ >= 0} via g(z) = (z, z + z^2):
        let q2 = {
            let mut m = RatMatrix::zero(3, 3);
            *m.entry_mut(2, 2) = rat_int(1);
            Some(m)
        };
        let g2 = PolyFunc2::new(
            3,
            vec![
                Component::affine(Rat::zero(), rvec(&[0, 0, 1])),
                Component {
                    constant: Rat::zero(),
                    linear: rvec(&[0, 0, 1]),
                    quad: q2,
                },
            ],
        );
        let sys2 = VarSystem::new(
            1,
            1,
            2,
            PolyFunc2::zero_map(2, 1),
            g2,
            crate::poly::PolySet::neg_orthant(2),
            vec![rat_int(0)],
            vec![rat_int(0)],
            None,
        )
        .unwrap();
        // ∇g(0)ᵀλ = (0, 0, λ1 + λ2): y* = (0,0,1) gives the segment.
        let dir = multiplier_lambda_dir(&sys2, &y, &ystar, &v).unwrap();
        // argmax of 2λ2 over the segment is the vertex (0, 1).
        assert_eq!(dir.singleton(), Some(vec![rat_int(0), rat_int(1)]));
        let _ = rat(1, 2);
    }
}
