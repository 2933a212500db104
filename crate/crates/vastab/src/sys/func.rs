use num_traits::Zero;

use crate::exact::{dot, zeros, Rat, RatMatrix};

/// One output component of a degree-<=2 polynomial map:
/// c(y) = constant + linear·y + yᵀ Q y with Q symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub constant: Rat,
    pub linear: Vec<Rat>,
    pub quad: Option<RatMatrix>,
}

impl Component {
    pub fn affine(constant: Rat, linear: Vec<Rat>) -> Self {
        Self {
            constant,
            linear,
            quad: None,
        }
    }

    fn check(&self, m: usize) {
        assert_eq!(self.linear.len(), m, "linear part length");
        if let Some(q) = &self.quad {
            assert_eq!((q.rows(), q.cols()), (m, m), "quadratic part shape");
            assert_eq!(q, &q.transpose(), "quadratic part must be symmetric");
        }
    }

    pub fn eval(&self, y: &[Rat]) -> Rat {
        let mut v = &self.constant + dot(&self.linear, y);
        if let Some(q) = &self.quad {
            v += dot(y, &q.mul_vec(y));
        }
        v
    }

    /// Gradient: linear + 2 Q y.
    pub fn gradient(&self, y: &[Rat]) -> Vec<Rat> {
        match &self.quad {
            None => self.linear.clone(),
            Some(q) => {
                let qy = q.mul_vec(y);
                self.linear
                    .iter()
                    .zip(&qy)
                    .map(|(l, w)| l + w + w)
                    .collect()
            }
        }
    }

    /// Constant Hessian 2 Q.
    pub fn hessian(&self, m: usize) -> RatMatrix {
        match &self.quad {
            None => RatMatrix::zero(m, m),
            Some(q) => q.add(q),
        }
    }

    pub fn is_affine(&self) -> bool {
        match &self.quad {
            None => true,
            Some(q) => (0..q.rows()).all(|i| (0..q.cols()).all(|j| q.entry(i, j).is_zero())),
        }
    }
}

/// Vector-valued polynomial map of total degree <= 2 with rational
/// coefficients. Values, Jacobians and Hessians are exact closed forms,
/// which is what keeps every derived object rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFunc2 {
    input_dim: usize,
    components: Vec<Component>,
}

impl PolyFunc2 {
    pub fn new(input_dim: usize, components: Vec<Component>) -> Self {
        for c in &components {
            c.check(input_dim);
        }
        Self {
            input_dim,
            components,
        }
    }

    pub fn zero_map(input_dim: usize, output_dim: usize) -> Self {
        let components = (0..output_dim)
            .map(|_| Component::affine(Rat::zero(), zeros(input_dim)))
            .collect();
        Self::new(input_dim, components)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_affine(&self) -> bool {
        self.components.iter().all(Component::is_affine)
    }

    pub fn eval(&self, y: &[Rat]) -> Vec<Rat> {
        assert_eq!(y.len(), self.input_dim);
        self.components.iter().map(|c| c.eval(y)).collect()
    }

    /// Jacobian at y, output_dim × input_dim.
    pub fn jacobian(&self, y: &[Rat]) -> RatMatrix {
        assert_eq!(y.len(), self.input_dim);
        RatMatrix::from_rows(self.components.iter().map(|c| c.gradient(y)).collect())
    }

    /// Hessian of the k-th component (a constant matrix).
    pub fn hessian(&self, k: usize) -> RatMatrix {
        self.components[k].hessian(self.input_dim)
    }

    /// Hessian of y ↦ λᵀ F(y): Σ_k λ_k ∇²F_k.
    pub fn weighted_hessian(&self, lambda: &[Rat]) -> RatMatrix {
        assert_eq!(lambda.len(), self.output_dim());
        let mut h = RatMatrix::zero(self.input_dim, self.input_dim);
        for (k, c) in self.components.iter().enumerate() {
            if lambda[k].is_zero() {
                continue;
            }
            h = h.add(&c.hessian(self.input_dim).scale(&lambda[k]));
        }
        h
    }

    /// Composition with a linear substitution y = S w (S: input_dim × new_dim),
    /// which preserves total degree <= 2. Used for g̃(p,x) = g(p,x,x).
    pub fn substitute(&self, s: &RatMatrix) -> PolyFunc2 {
        assert_eq!(s.rows(), self.input_dim);
        let st = s.transpose();
        let components = self
            .components
            .iter()
            .map(|c| Component {
                constant: c.constant.clone(),
                linear: st.mul_vec(&c.linear),
                quad: c.quad.as_ref().map(|q| st.mul_mat(q).mul_mat(s)),
            })
            .collect();
        PolyFunc2::new(s.cols(), components)
    }
}
