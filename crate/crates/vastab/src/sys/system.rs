use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::Value;

use crate::exact::{fmt_vec, parse_rat, rat_to_string, Rat, RatMatrix};
use crate::poly::{to_hcone, HCone, PolySet, VCone};

use super::{Component, PolyFunc2, SysError};

/// Problem instance: dimensions, the maps f and g, the polyhedral set D,
/// the reference point, and an optional tangent cone of the parameter
/// restriction set.
#[derive(Clone, Debug)]
pub struct VarSystem {
    pub l: usize,
    pub n: usize,
    pub s: usize,
    pub f: PolyFunc2,
    pub g: PolyFunc2,
    pub d: PolySet,
    pub p_ref: Vec<Rat>,
    pub x_ref: Vec<Rat>,
    pub tp: Option<HCone>,
}

/// Everything the checkers need at the reference point, computed once:
/// values and Jacobians of f, g, g̃, b, and the tangent/normal cones of D at
/// g̃(p̄,x̄) (the normal cone in both representations).
#[derive(Clone, Debug)]
pub struct Anchor {
    pub f_ref: Vec<Rat>,
    pub gt_ref: Vec<Rat>,
    /// b(p̄,x̄) = ∇₃g(p̄,x̄,x̄), s × n.
    pub b: RatMatrix,
    /// ∇f(p̄,x̄), n × (l+n).
    pub grad_f: RatMatrix,
    /// ∇g(p̄,x̄,x̄), s × (l+2n).
    pub grad_g: RatMatrix,
    /// ∇g̃(p̄,x̄), s × (l+n).
    pub grad_gt: RatMatrix,
    /// ∇₂g̃(p̄,x̄), s × n.
    pub grad2_gt: RatMatrix,
    /// T_D(g̃(p̄,x̄)).
    pub t_cone: HCone,
    /// N_D(g̃(p̄,x̄)) in generator form.
    pub n_vcone: VCone,
    /// N_D(g̃(p̄,x̄)) in half-space form (via double description).
    pub n_hcone: HCone,
}

impl VarSystem {
    pub fn new(
        l: usize,
        n: usize,
        s: usize,
        f: PolyFunc2,
        g: PolyFunc2,
        d: PolySet,
        p_ref: Vec<Rat>,
        x_ref: Vec<Rat>,
        tp: Option<HCone>,
    ) -> Result<Self, SysError> {
        let check = |cond: bool, msg: &str| -> Result<(), SysError> {
            if cond {
                Ok(())
            } else {
                Err(SysError::Schema(msg.to_string()))
            }
        };
        check(f.input_dim() == l + n, "f must take (p,x)")?;
        check(f.output_dim() == n, "f must map into R^n")?;
        check(g.input_dim() == l + 2 * n, "g must take (p,x,z)")?;
        check(g.output_dim() == s, "g must map into R^s")?;
        check(d.dim() == s, "D must live in R^s")?;
        check(p_ref.len() == l, "reference p has wrong length")?;
        check(x_ref.len() == n, "reference x has wrong length")?;
        if let Some(c) = &tp {
            check(c.dim() == l, "P_tangent must live in R^l")?;
        }
        let sys = Self {
            l,
            n,
            s,
            f,
            g,
            d,
            p_ref,
            x_ref,
            tp,
        };
        let gt_ref = sys.gtilde().eval(&sys.ref_point());
        if !sys.d.member(&gt_ref) {
            return Err(SysError::InfeasibleAnchor(format!(
                "g(p̄,x̄,x̄) = {} is not in D",
                fmt_vec(&gt_ref)
            )));
        }
        Ok(sys)
    }

    pub fn ref_point(&self) -> Vec<Rat> {
        let mut y = self.p_ref.clone();
        y.extend(self.x_ref.iter().cloned());
        y
    }

    /// (p̄, x̄, x̄), the anchor of g.
    pub fn ref_point_lifted(&self) -> Vec<Rat> {
        let mut y = self.ref_point();
        y.extend(self.x_ref.iter().cloned());
        y
    }

    /// The substitution (p,x) ↦ (p,x,x) as an (l+2n) × (l+n) matrix.
    fn lift_matrix(&self) -> RatMatrix {
        let (l, n) = (self.l, self.n);
        let mut s = RatMatrix::zero(l + 2 * n, l + n);
        for i in 0..l + n {
            *s.entry_mut(i, i) = Rat::from_integer(1.into());
        }
        for j in 0..n {
            *s.entry_mut(l + n + j, l + j) = Rat::from_integer(1.into());
        }
        s
    }

    /// g̃(p,x) = g(p,x,x), again of degree <= 2.
    pub fn gtilde(&self) -> PolyFunc2 {
        self.g.substitute(&self.lift_matrix())
    }

    /// b(p,x) = ∇₃g(p,x,x): the z-block of the Jacobian of g at (p,x,x).
    pub fn b_at(&self, p: &[Rat], x: &[Rat]) -> RatMatrix {
        let mut y = p.to_vec();
        y.extend(x.iter().cloned());
        y.extend(x.iter().cloned());
        let jac = self.g.jacobian(&y);
        let mut rows = Vec::with_capacity(self.s);
        for k in 0..self.s {
            rows.push(jac.row(k)[self.l + self.n..].to_vec());
        }
        RatMatrix::from_rows(rows)
    }

    /// ∇(b(·)ᵀλ)(p,x): the n × (l+n) Jacobian of (p,x) ↦ b(p,x)ᵀλ.
    /// Entry (j, c) is Σ_k λ_k ∂b_kj/∂y_c with b_kj affine because g has
    /// degree <= 2; for affine g this is the zero matrix.
    pub fn grad_b_lambda(&self, lambda: &[Rat]) -> RatMatrix {
        assert_eq!(lambda.len(), self.s);
        let (l, n) = (self.l, self.n);
        let mut out = RatMatrix::zero(n, l + n);
        for (k, comp) in self.g.components().iter().enumerate() {
            if lambda[k].is_zero() {
                continue;
            }
            let Some(q) = &comp.quad else { continue };
            // b_kj(p,x) = ∂g_k/∂z_j at (p,x,x) = lin[z_j] + 2 (Q y)[z_j];
            // the (p,x)-gradient of the second term is
            // 2 (Q[z_j, p-block], Q[z_j, x-block] + Q[z_j, z-block]).
            for j in 0..n {
                let zrow = l + n + j;
                for c in 0..l {
                    let add = &lambda[k] * q.entry(zrow, c) * Rat::from_integer(2.into());
                    *out.entry_mut(j, c) += add;
                }
                for b in 0..n {
                    let add = &lambda[k]
                        * (q.entry(zrow, l + b) + q.entry(zrow, l + n + b))
                        * Rat::from_integer(2.into());
                    *out.entry_mut(j, l + b) += add;
                }
            }
        }
        out
    }

    /// ∇(b(·)ᵀλ)(p̄,x̄)(q,u) as a linear map of λ: an n × s matrix W with
    /// W λ = ∇(b(·)ᵀλ)(p̄,x̄)(q,u).
    pub fn grad_b_dir_matrix(&self, qu: &[Rat]) -> RatMatrix {
        assert_eq!(qu.len(), self.l + self.n);
        let (l, n) = (self.l, self.n);
        let mut out = RatMatrix::zero(n, self.s);
        for (k, comp) in self.g.components().iter().enumerate() {
            let Some(q) = &comp.quad else { continue };
            for j in 0..n {
                let zrow = l + n + j;
                let mut acc = Rat::zero();
                for c in 0..l {
                    acc += q.entry(zrow, c) * &qu[c];
                }
                for b in 0..n {
                    acc += (q.entry(zrow, l + b) + q.entry(zrow, l + n + b)) * &qu[l + b];
                }
                *out.entry_mut(j, k) = &acc + &acc;
            }
        }
        out
    }

    /// ∇Lag_λ(p,x) = ∇f(p,x) + ∇(b(·)ᵀλ)(p,x), n × (l+n).
    pub fn lagrangian_grad(&self, lambda: &[Rat], p: &[Rat], x: &[Rat]) -> RatMatrix {
        let mut y = p.to_vec();
        y.extend(x.iter().cloned());
        self.f.jacobian(&y).add(&self.grad_b_lambda(lambda))
    }

    /// ∇₂Lag_λ(p,x): the x-block of the Lagrangian Jacobian, n × n.
    pub fn lagrangian_grad2(&self, lambda: &[Rat], p: &[Rat], x: &[Rat]) -> RatMatrix {
        let full = self.lagrangian_grad(lambda, p, x);
        let rows = (0..self.n)
            .map(|j| full.row(j)[self.l..].to_vec())
            .collect();
        RatMatrix::from_rows(rows)
    }

    pub fn is_affine(&self) -> bool {
        self.f.is_affine() && self.g.is_affine()
    }

    /// All reference-point data used by the checkers.
    pub fn anchor(&self) -> Anchor {
        let y = self.ref_point();
        let gt = self.gtilde();
        let gt_ref = gt.eval(&y);
        let grad_gt = gt.jacobian(&y);
        let grad2_gt = RatMatrix::from_rows(
            (0..self.s)
                .map(|k| grad_gt.row(k)[self.l..].to_vec())
                .collect(),
        );
        let t_cone = self
            .d
            .tangent_cone(&gt_ref)
            .expect("reference feasibility was checked at construction");
        let n_vcone = self.d.normal_cone(&gt_ref).expect("reference feasibility");
        let n_hcone = to_hcone(&n_vcone).canonicalize();
        Anchor {
            f_ref: self.f.eval(&y),
            gt_ref,
            b: self.b_at(&self.p_ref, &self.x_ref),
            grad_f: self.f.jacobian(&y),
            grad_g: self.g.jacobian(&self.ref_point_lifted()),
            grad_gt,
            grad2_gt,
            t_cone,
            n_vcone,
            n_hcone,
        }
    }

    /// Tangent cone of the parameter restriction, defaulting to all of R^l.
    pub fn tp_cone(&self) -> HCone {
        self.tp.clone().unwrap_or_else(|| HCone::full_space(self.l))
    }
}

impl Anchor {
    /// -f(p̄,x̄), the canonical x* every checker is anchored at.
    pub fn minus_f_ref(&self) -> Vec<Rat> {
        self.f_ref.iter().map(|v| -v).collect()
    }

    /// ∇g̃(p̄,x̄)(q,u).
    pub fn grad_gt_dir(&self, qu: &[Rat]) -> Vec<Rat> {
        self.grad_gt.mul_vec(qu)
    }
}

// ---------------------------------------------------------------------------
// Problem file format
// ---------------------------------------------------------------------------

fn var_index(name: &str, l: usize, n: usize, with_z: bool) -> Result<usize, SysError> {
    let err = || SysError::Schema(format!("unknown variable name {name:?}"));
    let (prefix, rest) = name.split_at(1);
    let idx: usize = rest.parse().map_err(|_| err())?;
    if idx == 0 {
        return Err(err());
    }
    let idx = idx - 1;
    match prefix {
        "p" if idx < l => Ok(idx),
        "x" if idx < n => Ok(l + idx),
        "z" if with_z && idx < n => Ok(l + n + idx),
        _ => Err(err()),
    }
}

fn var_name(idx: usize, l: usize, n: usize) -> String {
    if idx < l {
        format!("p{}", idx + 1)
    } else if idx < l + n {
        format!("x{}", idx - l + 1)
    } else {
        format!("z{}", idx - l - n + 1)
    }
}

fn component_from_json(
    v: &Value,
    l: usize,
    n: usize,
    with_z: bool,
    m: usize,
) -> Result<Component, SysError> {
    let obj = v
        .as_object()
        .ok_or_else(|| SysError::Schema("component must be an object".into()))?;
    let constant = match obj.get("const") {
        None => Rat::zero(),
        Some(Value::String(s)) => parse_rat(s).map_err(SysError::Schema)?,
        Some(_) => return Err(SysError::Schema("\"const\" must be a rational string".into())),
    };
    let mut linear = crate::exact::zeros(m);
    if let Some(lin) = obj.get("lin") {
        let map = lin
            .as_object()
            .ok_or_else(|| SysError::Schema("\"lin\" must be an object".into()))?;
        for (name, val) in map {
            let idx = var_index(name, l, n, with_z)?;
            let s = val
                .as_str()
                .ok_or_else(|| SysError::Schema(format!("coefficient of {name} must be a string")))?;
            linear[idx] = parse_rat(s).map_err(SysError::Schema)?;
        }
    }
    let mut quad: Option<RatMatrix> = None;
    if let Some(Value::Array(entries)) = obj.get("quad") {
        if !entries.is_empty() {
            let mut q = RatMatrix::zero(m, m);
            for e in entries {
                let triple = e
                    .as_array()
                    .filter(|t| t.len() == 3)
                    .ok_or_else(|| SysError::Schema("quad entry must be [var, var, coeff]".into()))?;
                let a = var_index(
                    triple[0].as_str().ok_or_else(|| SysError::Schema("quad var".into()))?,
                    l,
                    n,
                    with_z,
                )?;
                let b = var_index(
                    triple[1].as_str().ok_or_else(|| SysError::Schema("quad var".into()))?,
                    l,
                    n,
                    with_z,
                )?;
                let r = parse_rat(
                    triple[2].as_str().ok_or_else(|| SysError::Schema("quad coeff".into()))?,
                )
                .map_err(SysError::Schema)?;
                if a == b {
                    *q.entry_mut(a, a) += r;
                } else {
                    let half = &r / Rat::from_integer(2.into());
                    *q.entry_mut(a, b) += half.clone();
                    *q.entry_mut(b, a) += half;
                }
            }
            quad = Some(q);
        }
    }
    Ok(Component {
        constant,
        linear,
        quad,
    })
}

fn component_to_json(c: &Component, l: usize, n: usize) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("const".into(), Value::String(rat_to_string(&c.constant)));
    let mut lin = BTreeMap::new();
    for (idx, coeff) in c.linear.iter().enumerate() {
        if !coeff.is_zero() {
            lin.insert(var_name(idx, l, n), Value::String(rat_to_string(coeff)));
        }
    }
    obj.insert("lin".into(), serde_json::to_value(lin).unwrap());
    let mut quad = Vec::new();
    if let Some(q) = &c.quad {
        for i in 0..q.rows() {
            for j in i..q.cols() {
                let coeff = if i == j {
                    q.entry(i, i).clone()
                } else {
                    q.entry(i, j) + q.entry(i, j)
                };
                if !coeff.is_zero() {
                    quad.push(Value::Array(vec![
                        Value::String(var_name(i, l, n)),
                        Value::String(var_name(j, l, n)),
                        Value::String(rat_to_string(&coeff)),
                    ]));
                }
            }
        }
    }
    obj.insert("quad".into(), Value::Array(quad));
    Value::Object(obj)
}

impl VarSystem {
    pub fn from_json(v: &Value) -> Result<Self, SysError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SysError::Schema("problem file must be a JSON object".into()))?;
        let dims = obj
            .get("dims")
            .and_then(Value::as_object)
            .ok_or_else(|| SysError::Schema("missing \"dims\" object".into()))?;
        let get_dim = |key: &str| -> Result<usize, SysError> {
            dims.get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| SysError::Schema(format!("dims.{key} must be a nonnegative integer")))
        };
        let (l, n, s) = (get_dim("l")?, get_dim("n")?, get_dim("s")?);

        let comps = |key: &str, with_z: bool, m: usize, count: usize| -> Result<Vec<Component>, SysError> {
            let arr = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| SysError::Schema(format!("missing \"{key}\" array")))?;
            if arr.len() != count {
                return Err(SysError::Schema(format!(
                    "\"{key}\" must have {count} components, got {}",
                    arr.len()
                )));
            }
            arr.iter()
                .map(|c| component_from_json(c, l, n, with_z, m))
                .collect()
        };
        let f = PolyFunc2::new(l + n, comps("f", false, l + n, n)?);
        let g = PolyFunc2::new(l + 2 * n, comps("g", true, l + 2 * n, s)?);

        let d = PolySet::from_json(
            obj.get("D")
                .ok_or_else(|| SysError::Schema("missing \"D\"".into()))?,
        )
        .map_err(SysError::Schema)?;
        if d.dim() != s {
            return Err(SysError::Schema(format!(
                "D has dimension {}, expected s = {s}",
                d.dim()
            )));
        }

        let refpoint = obj
            .get("refpoint")
            .and_then(Value::as_object)
            .ok_or_else(|| SysError::Schema("missing \"refpoint\"".into()))?;
        let vec_field = |key: &str, len: usize| -> Result<Vec<Rat>, SysError> {
            let arr = refpoint
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| SysError::Schema(format!("refpoint.{key} must be an array")))?;
            if arr.len() != len {
                return Err(SysError::Schema(format!(
                    "refpoint.{key} must have length {len}"
                )));
            }
            arr.iter()
                .map(|e| {
                    e.as_str()
                        .ok_or_else(|| SysError::Schema("refpoint entries are rational strings".into()))
                        .and_then(|s| parse_rat(s).map_err(SysError::Schema))
                })
                .collect()
        };
        let p_ref = vec_field("p", l)?;
        let x_ref = vec_field("x", n)?;

        let tp = match obj.get("P_tangent") {
            None | Some(Value::Null) => None,
            Some(v) => Some(HCone::from_json(v).map_err(SysError::Schema)?),
        };

        VarSystem::new(l, n, s, f, g, d, p_ref, x_ref, tp)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "dims".into(),
            serde_json::json!({"l": self.l, "n": self.n, "s": self.s}),
        );
        obj.insert(
            "f".into(),
            Value::Array(
                self.f
                    .components()
                    .iter()
                    .map(|c| component_to_json(c, self.l, self.n))
                    .collect(),
            ),
        );
        obj.insert(
            "g".into(),
            Value::Array(
                self.g
                    .components()
                    .iter()
                    .map(|c| component_to_json(c, self.l, self.n))
                    .collect(),
            ),
        );
        obj.insert("D".into(), self.d.to_json());
        obj.insert(
            "refpoint".into(),
            serde_json::json!({
                "p": self.p_ref.iter().map(rat_to_string).collect::<Vec<_>>(),
                "x": self.x_ref.iter().map(rat_to_string).collect::<Vec<_>>(),
            }),
        );
        if let Some(tp) = &self.tp {
            obj.insert("P_tangent".into(), tp.to_json());
        }
        Value::Object(obj)
    }

    pub fn from_json_str(text: &str) -> Result<Self, SysError> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| SysError::Schema(format!("invalid JSON: {e}")))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    /// The two-inequality reference system used throughout the tests:
    /// f = (x1 - p1, -x2), g = (p2 - x1 + x2 + z2, -x1 - 3 x2 + z2),
    /// D = R^2_-, reference point the origin.
    pub fn reference_system() -> VarSystem {
        let text = r#"{
            "dims": {"l": 2, "n": 2, "s": 2},
            "f": [
                {"const": "0", "lin": {"x1": "1", "p1": "-1"}, "quad": []},
                {"const": "0", "lin": {"x2": "-1"}, "quad": []}
            ],
            "g": [
                {"const": "0", "lin": {"p2": "1", "x1": "-1", "x2": "1", "z2": "1"}, "quad": []},
                {"const": "0", "lin": {"x1": "-1", "x2": "-3", "z2": "1"}, "quad": []}
            ],
            "D": {"dim": 2, "ineq": [["1", "0", "0"], ["0", "1", "0"]], "eq": []},
            "refpoint": {"p": ["0", "0"], "x": ["0", "0"]}
        }"#;
        VarSystem::from_json_str(text).unwrap()
    }

    #[test]
    fn gtilde_of_reference_system() {
        let sys = reference_system();
        let gt = sys.gtilde();
        // g̃(p,x) = (p2 - x1 + 2 x2, -x1 - 2 x2)
        let v = gt.eval(&[rat_int(1), rat_int(2), rat_int(3), rat_int(5)]);
        assert_eq!(v, vec![rat_int(2 - 3 + 10), rat_int(-3 - 10)]);
        let jac = gt.jacobian(&crate::exact::zeros(4));
        assert_eq!(jac.row(0), &[rat_int(0), rat_int(1), rat_int(-1), rat_int(2)][..]);
        assert_eq!(jac.row(1), &[rat_int(0), rat_int(0), rat_int(-1), rat_int(-2)][..]);
    }

    #[test]
    fn b_of_reference_system() {
        let sys = reference_system();
        let b = sys.b_at(&sys.p_ref, &sys.x_ref);
        assert_eq!(b.row(0), &[rat_int(0), rat_int(1)][..]);
        assert_eq!(b.row(1), &[rat_int(0), rat_int(1)][..]);
    }

    #[test]
    fn identity_g_gives_identity_b() {
        // g(p,x,z) = z: g̃ = x and b = I.
        let g = PolyFunc2::new(
            3,
            vec![Component::affine(
                Rat::zero(),
                vec![rat_int(0), rat_int(0), rat_int(1)],
            )],
        );
        let f = PolyFunc2::zero_map(2, 1);
        let d = PolySet::full_space(1);
        let sys = VarSystem::new(1, 1, 1, f, g, d, vec![rat_int(0)], vec![rat_int(7)], None)
            .unwrap();
        assert_eq!(
            sys.gtilde().eval(&[rat_int(3), rat_int(5)]),
            vec![rat_int(5)]
        );
        assert_eq!(sys.b_at(&[rat_int(3)], &[rat_int(5)]), RatMatrix::identity(1));
    }

    #[test]
    fn lagrangian_of_reference_system() {
        let sys = reference_system();
        let lag2 = sys.lagrangian_grad2(&crate::exact::zeros(2), &sys.p_ref, &sys.x_ref);
        assert_eq!(lag2.row(0), &[rat_int(1), rat_int(0)][..]);
        assert_eq!(lag2.row(1), &[rat_int(0), rat_int(-1)][..]);

        // Affine g: the b-term contributes nothing for any λ.
        let lam = vec![rat(3, 2), rat_int(-4)];
        assert_eq!(
            sys.lagrangian_grad(&lam, &sys.p_ref, &sys.x_ref),
            sys.f.jacobian(&sys.ref_point())
        );
    }

    #[test]
    fn quadratic_b_term_derivative() {
        // g(p,x,z) with a z1^2-free but x-coupled quadratic: use the
        // six-inequality example's fifth row shape g5 = z3 + z1^2 - z4 in a
        // reduced form g(x,z) = z + x^2 (l=0, n=1): b(x) = 1, g̃ = x + x^2.
        // Instead exercise the cross term: g = z1 * x1 (l=0, n=1, s=1):
        // b(x) = x1, so ∇(b^T λ) = (λ).
        let q = RatMatrix::from_rows(vec![
            vec![rat_int(0), rat(1, 2)],
            vec![rat(1, 2), rat_int(0)],
        ]);
        let g = PolyFunc2::new(
            2,
            vec![Component {
                constant: Rat::zero(),
                linear: crate::exact::zeros(2),
                quad: Some(q),
            }],
        );
        let f = PolyFunc2::zero_map(1, 1);
        let d = PolySet::full_space(1);
        let sys = VarSystem::new(0, 1, 1, f, g, d, vec![], vec![rat_int(0)], None).unwrap();
        let lam = vec![rat_int(5)];
        let w = sys.grad_b_lambda(&lam);
        assert_eq!(w.entry(0, 0), &rat_int(5));
        // Directional variant agrees: W u with u = 1 gives 5.
        let wd = sys.grad_b_dir_matrix(&[rat_int(1)]);
        assert_eq!(wd.entry(0, 0), &rat_int(1));
    }

    #[test]
    fn json_round_trip() {
        let sys = reference_system();
        let j = sys.to_json();
        let back = VarSystem::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
        assert_eq!(back.f, sys.f);
        assert_eq!(back.g, sys.g);
    }

    #[test]
    fn infeasible_reference_rejected() {
        let g = PolyFunc2::new(
            3,
            vec![Component::affine(
                rat_int(1),
                vec![rat_int(0), rat_int(0), rat_int(1)],
            )],
        );
        let f = PolyFunc2::zero_map(2, 1);
        let d = PolySet::neg_orthant(1);
        let err = VarSystem::new(1, 1, 1, f, g, d, vec![rat_int(0)], vec![rat_int(0)], None);
        assert!(matches!(err, Err(SysError::InfeasibleAnchor(_))));
    }
}
