use std::collections::BTreeSet;

use num_traits::Zero;

use crate::exact::{
    is_zero_vec, lp_solve, normalize_ray, zeros, LinProgram, LpSense, Rat, RatMatrix,
};

use super::HCone;

/// Polyhedral convex cone in generator form: cone{rays} + span{lines}.
/// Zero generators are dropped on construction and rays are deduplicated up
/// to positive scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCone {
    dim: usize,
    rays: Vec<Vec<Rat>>,
    lines: Vec<Vec<Rat>>,
}

impl VCone {
    pub fn new(dim: usize, rays: Vec<Vec<Rat>>, lines: Vec<Vec<Rat>>) -> Self {
        for g in rays.iter().chain(&lines) {
            assert_eq!(g.len(), dim, "generator length mismatch");
        }
        let mut seen = BTreeSet::new();
        let mut uniq_rays = Vec::new();
        for r in rays {
            if is_zero_vec(&r) {
                continue;
            }
            let key = normalize_ray(&r)
                .iter()
                .map(crate::exact::rat_to_string)
                .collect::<Vec<_>>()
                .join(",");
            if seen.insert(key) {
                uniq_rays.push(normalize_ray(&r));
            }
        }
        let lines = lines.into_iter().filter(|l| !is_zero_vec(l)).collect();
        Self {
            dim,
            rays: uniq_rays,
            lines,
        }
    }

    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, vec![], vec![])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vec<Rat>] {
        &self.lines
    }

    /// All generators with lines contributed in both signs.
    pub fn signed_generators(&self) -> Vec<Vec<Rat>> {
        let mut out = self.rays.clone();
        for l in &self.lines {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    /// Membership by conic-combination LP: z = Σ σ_i r_i + Σ τ_j l_j, σ >= 0.
    pub fn member(&self, z: &[Rat]) -> bool {
        assert_eq!(z.len(), self.dim);
        if is_zero_vec(z) {
            return true;
        }
        let nr = self.rays.len();
        let nl = self.lines.len();
        if nr + nl == 0 {
            return false;
        }
        let mut lp = LinProgram::feasibility(nr + nl);
        for coord in 0..self.dim {
            let mut row = zeros(nr + nl);
            for (k, r) in self.rays.iter().enumerate() {
                row[k] = r[coord].clone();
            }
            for (j, l) in self.lines.iter().enumerate() {
                row[nr + j] = l[coord].clone();
            }
            lp.eq.push((row, z[coord].clone()));
        }
        for k in 0..nr {
            let mut row = zeros(nr + nl);
            row[k] = -Rat::from_integer(1.into());
            lp.le.push((row, Rat::zero()));
        }
        lp_solve(&lp, LpSense::Max).is_feasible()
    }

    /// Polar as an H-cone: rays become inequality rows, lines equality rows.
    pub fn polar_v(&self) -> HCone {
        let mut rows = self.rays.clone();
        let mut eq = BTreeSet::new();
        for l in &self.lines {
            eq.insert(rows.len());
            rows.push(l.clone());
        }
        HCone::new(self.dim, rows, eq)
    }

    /// Image under a linear map given by `m` (applied as m · g per generator).
    pub fn map(&self, m: &RatMatrix) -> VCone {
        assert_eq!(m.cols(), self.dim);
        let rays = self.rays.iter().map(|r| m.mul_vec(r)).collect();
        let lines = self.lines.iter().map(|l| m.mul_vec(l)).collect();
        VCone::new(m.rows(), rays, lines)
    }

    /// Span of the cone as a list of spanning vectors.
    pub fn span_vectors(&self) -> Vec<Vec<Rat>> {
        self.rays.iter().chain(&self.lines).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn rvec(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn membership() {
        let v = VCone::new(2, vec![rvec(&[1, 0]), rvec(&[1, 1])], vec![]);
        assert!(v.member(&rvec(&[3, 1])));
        assert!(v.member(&rvec(&[0, 0])));
        assert!(!v.member(&rvec(&[-1, 0])));
        assert!(!v.member(&rvec(&[0, 1])));

        let with_line = VCone::new(2, vec![rvec(&[1, 0])], vec![rvec(&[0, 1])]);
        assert!(with_line.member(&rvec(&[2, -5])));
        assert!(!with_line.member(&rvec(&[-1, 3])));
    }

    #[test]
    fn polar_of_neg_orthant_is_pos_orthant() {
        // (R^2_-)° = R^2_+ : polar of the V-form of R^2_- as an H-cone.
        let v = VCone::new(2, vec![rvec(&[-1, 0]), rvec(&[0, -1])], vec![]);
        let h = v.polar_v();
        assert!(h.member(&rvec(&[1, 1])));
        assert!(!h.member(&rvec(&[-1, 0])));
    }

    #[test]
    fn polar_of_origin_is_everything() {
        let h = VCone::trivial(3).polar_v();
        assert!(h.member(&rvec(&[1, -2, 3])));
    }

    #[test]
    fn dedup_and_zero_filtering() {
        let v = VCone::new(
            2,
            vec![rvec(&[2, 0]), rvec(&[1, 0]), rvec(&[0, 0])],
            vec![],
        );
        assert_eq!(v.rays().len(), 1);
    }
}
