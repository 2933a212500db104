use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{
    dot, is_zero_vec, kernel_basis, lp_solve, rat_to_string, strict_feasible_point, LinProgram,
    LpSense, Rat, RatMatrix,
};

use super::{PolyError, VCone};

/// Polyhedral convex cone in half-space form:
/// { z : a_i^T z = 0 (i in eq), a_i^T z <= 0 (otherwise) }.
///
/// After [`HCone::canonicalize`] there is a point making every inequality row
/// strictly negative, which is what makes the face index sets of
/// [`HCone::faces`] canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCone {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    eq: BTreeSet<usize>,
}

/// Canonical index set J_F of a face: the relative interior of the face is
/// { a_i^T z = 0 (i in J_F), a_i^T z < 0 (otherwise) }.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId(pub BTreeSet<usize>);

impl HCone {
    pub fn new(dim: usize, rows: Vec<Vec<Rat>>, eq: BTreeSet<usize>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), dim, "cone row length mismatch");
        }
        if let Some(&max) = eq.iter().max() {
            assert!(max < rows.len(), "equality index out of range");
        }
        Self { dim, rows, eq }
    }

    /// The whole space (no constraints).
    pub fn full_space(dim: usize) -> Self {
        Self::new(dim, vec![], BTreeSet::new())
    }

    /// The trivial cone {0}.
    pub fn origin(dim: usize) -> Self {
        let rows = RatMatrix::identity(dim).row_vecs();
        let eq = (0..dim).collect();
        Self::new(dim, rows, eq)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn eq_set(&self) -> &BTreeSet<usize> {
        &self.eq
    }

    pub fn ineq_indices(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|i| !self.eq.contains(i)).collect()
    }

    pub fn member(&self, z: &[Rat]) -> bool {
        assert_eq!(z.len(), self.dim);
        self.rows.iter().enumerate().all(|(i, a)| {
            let v = dot(a, z);
            if self.eq.contains(&i) {
                v.is_zero()
            } else {
                v <= Rat::zero()
            }
        })
    }

    /// Appends this cone's constraints on variables at `offset..offset+dim`
    /// of an LP with `total` variables.
    pub fn append_to_lp(&self, lp: &mut LinProgram, offset: usize) {
        for (i, a) in self.rows.iter().enumerate() {
            let mut row = crate::exact::zeros(lp.num_vars);
            row[offset..offset + self.dim].clone_from_slice(a);
            if self.eq.contains(&i) {
                lp.eq.push((row, Rat::zero()));
            } else {
                lp.le.push((row, Rat::zero()));
            }
        }
    }

    /// Moves implicit equalities into the equality set: an inequality row is
    /// implicit iff no point of the cone makes it strictly negative, decided
    /// by one LP per row.
    pub fn canonicalize(&self) -> Self {
        let mut eq = self.eq.clone();
        for i in self.ineq_indices() {
            let mut lp = LinProgram::feasibility(self.dim);
            lp.objective = self.rows[i].clone();
            self.append_to_lp(&mut lp, 0);
            // Bound the objective so the minimization terminates.
            let neg: Vec<Rat> = self.rows[i].iter().map(|x| -x).collect();
            lp.le.push((neg, Rat::from_integer(1.into())));
            match lp_solve(&lp, LpSense::Min) {
                crate::exact::LpStatus::Optimal(sol) if sol.value < Rat::zero() => {}
                crate::exact::LpStatus::Optimal(_) => {
                    eq.insert(i);
                }
                other => unreachable!("bounded feasible canonicalization LP: {other:?}"),
            }
        }
        Self::new(self.dim, self.rows.clone(), eq)
    }

    /// Point with every inequality row strictly negative, if one exists.
    /// Always exists for canonicalized cones.
    pub fn strict_point(&self) -> Option<Vec<Rat>> {
        let mut lp = LinProgram::feasibility(self.dim);
        for (i, a) in self.rows.iter().enumerate() {
            if self.eq.contains(&i) {
                lp.eq.push((a.clone(), Rat::zero()));
            } else {
                lp.lt.push((a.clone(), Rat::zero()));
            }
        }
        strict_feasible_point(&lp)
    }

    /// Complete face lattice by subset search over the inequality rows:
    /// an index set is a canonical face id iff its relative-interior system
    /// is strictly feasible. Requires a canonicalized cone. The list is
    /// sorted by (cardinality, indices), so the cone itself comes first and
    /// the lineality-space face last.
    pub fn faces(&self) -> Vec<FaceId> {
        let free = self.ineq_indices();
        assert!(free.len() < 26, "face enumeration limited to small cones");
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << free.len()) {
            let mut jf = self.eq.clone();
            for (bit, &idx) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    jf.insert(idx);
                }
            }
            if self.ri_system_feasible(&jf).is_some() {
                out.push(FaceId(jf));
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    /// A point of { a_i z = 0 (i in jf), a_i z < 0 (otherwise) }, if any.
    pub fn ri_system_feasible(&self, jf: &BTreeSet<usize>) -> Option<Vec<Rat>> {
        let mut lp = LinProgram::feasibility(self.dim);
        for (i, a) in self.rows.iter().enumerate() {
            if jf.contains(&i) {
                lp.eq.push((a.clone(), Rat::zero()));
            } else {
                lp.lt.push((a.clone(), Rat::zero()));
            }
        }
        strict_feasible_point(&lp)
    }

    /// The face as a cone: same rows with the equality set J_F.
    pub fn face_cone(&self, f: &FaceId) -> Result<HCone, PolyError> {
        self.require_face(f)?;
        Ok(Self::new(self.dim, self.rows.clone(), f.0.clone()))
    }

    /// Basis of F - F = { z : a_i^T z = 0, i in J_F }.
    pub fn face_diff(&self, f: &FaceId) -> Result<Vec<Vec<Rat>>, PolyError> {
        self.require_face(f)?;
        Ok(self.face_diff_unchecked(&f.0))
    }

    pub fn face_diff_unchecked(&self, jf: &BTreeSet<usize>) -> Vec<Vec<Rat>> {
        if jf.is_empty() {
            return RatMatrix::identity(self.dim).row_vecs();
        }
        let m = RatMatrix::from_rows(jf.iter().map(|&i| self.rows[i].clone()).collect());
        kernel_basis(&m)
    }

    fn require_face(&self, f: &FaceId) -> Result<(), PolyError> {
        if !f.0.is_superset(&self.eq) || f.0.iter().any(|&i| i >= self.rows.len()) {
            return Err(PolyError::NotAFace(f.0.iter().copied().collect()));
        }
        if self.ri_system_feasible(&f.0).is_none() {
            return Err(PolyError::NotAFace(f.0.iter().copied().collect()));
        }
        Ok(())
    }

    /// Polar cone: generated by the inequality rows as rays and the equality
    /// rows as lines.
    pub fn polar(&self) -> VCone {
        let rays = self
            .ineq_indices()
            .into_iter()
            .map(|i| self.rows[i].clone())
            .collect();
        let lines = self.eq.iter().map(|&i| self.rows[i].clone()).collect();
        VCone::new(self.dim, rays, lines)
    }

    /// T_K(w) = K + [w] for w in K: drops the inequality rows inactive at w.
    pub fn tangent_at(&self, w: &[Rat]) -> Result<HCone, PolyError> {
        let active = self.active_rows(w)?;
        let mut rows = Vec::new();
        let mut eq = BTreeSet::new();
        for (i, a) in self.rows.iter().enumerate() {
            if self.eq.contains(&i) {
                eq.insert(rows.len());
                rows.push(a.clone());
            } else if active.contains(&i) {
                rows.push(a.clone());
            }
        }
        Ok(Self::new(self.dim, rows, eq))
    }

    /// N_K(w) = K° ∩ [w]⊥ for w in K: generated by the active inequality
    /// rows and the equality rows.
    pub fn normal_at(&self, w: &[Rat]) -> Result<VCone, PolyError> {
        let active = self.active_rows(w)?;
        let rays = active
            .iter()
            .filter(|i| !self.eq.contains(i))
            .map(|&i| self.rows[i].clone())
            .collect();
        let lines = self.eq.iter().map(|&i| self.rows[i].clone()).collect();
        Ok(VCone::new(self.dim, rays, lines))
    }

    /// The unique face whose relative interior contains w.
    pub fn minimal_face(&self, w: &[Rat]) -> Result<FaceId, PolyError> {
        Ok(FaceId(self.active_rows(w)?))
    }

    pub fn ri_contains(&self, f: &FaceId, w: &[Rat]) -> bool {
        assert_eq!(w.len(), self.dim);
        self.rows.iter().enumerate().all(|(i, a)| {
            let v = dot(a, w);
            if f.0.contains(&i) {
                v.is_zero()
            } else {
                v < Rat::zero()
            }
        })
    }

    /// All rows (equality and inequality) tight at w; errors if w is outside.
    pub fn active_rows(&self, w: &[Rat]) -> Result<BTreeSet<usize>, PolyError> {
        if !self.member(w) {
            return Err(PolyError::InfeasiblePoint(crate::exact::fmt_vec(w)));
        }
        Ok((0..self.rows.len())
            .filter(|&i| dot(&self.rows[i], w).is_zero())
            .collect())
    }

    /// True iff the cone is {0}, decided by 2·dim feasibility LPs.
    pub fn is_trivial(&self) -> bool {
        for j in 0..self.dim {
            for sign in [1i64, -1] {
                let mut lp = LinProgram::feasibility(self.dim);
                self.append_to_lp(&mut lp, 0);
                let mut row = crate::exact::zeros(self.dim);
                row[j] = Rat::from_integer(sign.into());
                lp.eq.push((row, Rat::from_integer(1.into())));
                if lp_solve(&lp, LpSense::Max).is_feasible() {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the lineality space K ∩ -K.
    pub fn lineality_basis(&self) -> Vec<Vec<Rat>> {
        if self.rows.is_empty() {
            return RatMatrix::identity(self.dim).row_vecs();
        }
        kernel_basis(&RatMatrix::from_rows(self.rows.clone()))
    }

    /// Intersection: concatenated rows.
    pub fn intersect(&self, other: &HCone) -> HCone {
        assert_eq!(self.dim, other.dim);
        let mut rows = self.rows.clone();
        let mut eq = self.eq.clone();
        for (i, a) in other.rows.iter().enumerate() {
            if other.eq.contains(&i) {
                eq.insert(rows.len());
            }
            rows.push(a.clone());
        }
        Self::new(self.dim, rows, eq)
    }

    /// Intersection with the hyperplane v^T z = 0.
    pub fn with_equality(&self, v: &[Rat]) -> HCone {
        assert_eq!(v.len(), self.dim);
        assert!(!is_zero_vec(v), "degenerate hyperplane");
        let mut rows = self.rows.clone();
        let mut eq = self.eq.clone();
        eq.insert(rows.len());
        rows.push(v.to_vec());
        Self::new(self.dim, rows, eq)
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (i, a) in self.rows.iter().enumerate() {
            let rel = if self.eq.contains(&i) { "=" } else { "<=" };
            let coeffs: Vec<String> = a.iter().map(rat_to_string).collect();
            parts.push(format!("[{}] {} 0", coeffs.join(","), rel));
        }
        parts.join("; ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_int, zeros};

    fn rvec(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    pub fn neg_orthant(k: usize) -> HCone {
        HCone::new(k, RatMatrix::identity(k).row_vecs(), BTreeSet::new())
    }

    #[test]
    fn canonicalize_line_pair() {
        // {z1 <= 0, -z1 <= 0}: both rows implicit.
        let c = HCone::new(1, vec![rvec(&[1]), rvec(&[-1])], BTreeSet::new());
        let canon = c.canonicalize();
        assert_eq!(canon.eq_set(), &BTreeSet::from([0, 1]));
        assert!(canon.strict_point().is_some());
    }

    #[test]
    fn canonicalize_orthant_unchanged() {
        let canon = neg_orthant(2).canonicalize();
        assert!(canon.eq_set().is_empty());
    }

    #[test]
    fn canonicalize_three_row_example() {
        // {z1 <= 0, z1 - z2 <= 0, z2 - z1 <= 0}: rows 2 and 3 together force
        // z1 = z2, so neither can be strictly negative on the cone and both
        // are implicit. Row 1 is witnessed strict by (-1,-1).
        let c = HCone::new(
            2,
            vec![rvec(&[1, 0]), rvec(&[1, -1]), rvec(&[-1, 1])],
            BTreeSet::new(),
        );
        let canon = c.canonicalize();
        assert_eq!(canon.eq_set(), &BTreeSet::from([1, 2]));
        assert!(canon.strict_point().is_some());
    }

    #[test]
    fn orthant_face_lattice() {
        let faces = neg_orthant(2).faces();
        let sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.0.clone()).collect();
        assert_eq!(
            sets,
            vec![
                BTreeSet::new(),
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([0, 1]),
            ]
        );
        for k in 1..=5 {
            assert_eq!(neg_orthant(k).faces().len(), 1 << k);
        }
    }

    #[test]
    fn origin_has_one_face() {
        assert_eq!(HCone::origin(2).faces().len(), 1);
    }

    #[test]
    fn halfplane_has_two_faces() {
        let c = HCone::new(2, vec![rvec(&[1, 0])], BTreeSet::new());
        let faces = c.faces();
        assert_eq!(faces.len(), 2);
        assert_eq!(faces[0].0, BTreeSet::new());
        assert_eq!(faces[1].0, BTreeSet::from([0]));
    }

    #[test]
    fn face_cone_and_diff_on_orthant() {
        let c = neg_orthant(2);
        let f = FaceId(BTreeSet::from([0]));
        let cone = c.face_cone(&f).unwrap();
        // {0} x R_-
        assert!(cone.member(&rvec(&[0, -3])));
        assert!(!cone.member(&rvec(&[-1, -1])));
        let diff = c.face_diff(&f).unwrap();
        assert_eq!(diff.len(), 1);
        assert!(diff[0][0].is_zero() && !diff[0][1].is_zero());

        assert_eq!(c.face_diff(&FaceId(BTreeSet::new())).unwrap().len(), 2);
        assert!(c.face_diff(&FaceId(BTreeSet::from([0, 1]))).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_face() {
        // {z1 <= 0, z1 <= 0} duplicated row: {0} (index set {0}) is not
        // canonical because row 1 would also be tight.
        let c = HCone::new(2, vec![rvec(&[1, 0]), rvec(&[1, 0])], BTreeSet::new());
        assert!(c.face_cone(&FaceId(BTreeSet::from([0]))).is_err());
    }

    #[test]
    fn tangent_normal_minimal_face() {
        let c = neg_orthant(2);
        let w = rvec(&[-1, 0]);
        let t = c.tangent_at(&w).unwrap();
        // R x R_-
        assert!(t.member(&rvec(&[5, -1])));
        assert!(!t.member(&rvec(&[5, 1])));
        let nv = c.normal_at(&w).unwrap();
        assert!(nv.member(&rvec(&[0, 2])));
        assert!(!nv.member(&rvec(&[1, 0])));

        let t0 = c.tangent_at(&zeros(2)).unwrap();
        assert!(t0.member(&rvec(&[-1, -1])) && !t0.member(&rvec(&[1, 0])));
        let n0 = c.normal_at(&zeros(2)).unwrap();
        assert!(n0.member(&rvec(&[3, 4])));

        assert_eq!(
            c.minimal_face(&rvec(&[0, -2])).unwrap(),
            FaceId(BTreeSet::from([0]))
        );
        assert!(c.tangent_at(&rvec(&[1, 0])).is_err());
    }

    #[test]
    fn triviality() {
        assert!(HCone::origin(3).is_trivial());
        assert!(!neg_orthant(2).is_trivial());
        assert!(!HCone::full_space(1).is_trivial());
        // {z : z <= 0, -z <= 0} in dimension 1 is trivial without being
        // syntactically the origin cone.
        let c = HCone::new(1, vec![rvec(&[1]), rvec(&[-1])], BTreeSet::new());
        assert!(c.is_trivial());
    }
}
