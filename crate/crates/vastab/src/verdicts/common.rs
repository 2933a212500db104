use num_traits::Zero;

use std::collections::BTreeSet;

use crate::exact::{dot, nonzero_solution, vec_add, vec_scale, zeros, LinProgram, Rat, RatMatrix};

/// Conic-combination encoding of a multiplier variable ranging over
/// cone{rays} + span{lines}: the LP carries one nonnegative coefficient per
/// ray and one free coefficient per line.
#[derive(Clone, Debug)]
pub(crate) struct ConeVars {
    pub rays: Vec<Vec<Rat>>,
    pub lines: Vec<Vec<Rat>>,
}

impl ConeVars {
    pub fn nvars(&self) -> usize {
        self.rays.len() + self.lines.len()
    }

    /// Coefficient block of target·(encoded vector) over this block's vars.
    pub fn row_for(&self, target: &[Rat]) -> Vec<Rat> {
        let mut row = Vec::with_capacity(self.nvars());
        for r in &self.rays {
            row.push(dot(target, r));
        }
        for l in &self.lines {
            row.push(dot(target, l));
        }
        row
    }

    /// Nonnegativity rows for the ray coefficients, at `offset` in an LP
    /// with `total` variables.
    pub fn push_sign_rows(&self, lp: &mut LinProgram, offset: usize) {
        for k in 0..self.rays.len() {
            let mut row = zeros(lp.num_vars);
            row[offset + k] = -Rat::from_integer(1.into());
            lp.le.push((row, Rat::zero()));
        }
    }

    /// Reconstructs the encoded vector from an LP solution slice.
    pub fn decode(&self, coeffs: &[Rat], dim: usize) -> Vec<Rat> {
        let mut out = zeros(dim);
        for (k, r) in self.rays.iter().enumerate() {
            out = vec_add(&out, &vec_scale(&coeffs[k], r));
        }
        for (j, l) in self.lines.iter().enumerate() {
            out = vec_add(&out, &vec_scale(&coeffs[self.rays.len() + j], l));
        }
        out
    }
}

/// Places a block-coefficient row into a full LP row at `offset`.
pub(crate) fn place(total: usize, offset: usize, block: &[Rat]) -> Vec<Rat> {
    let mut row = zeros(total);
    row[offset..offset + block.len()].clone_from_slice(block);
    row
}

/// The witness side of the face-pair conditions in the directional
/// metric-regularity and relative-Aubin theorems. For the difference cone
/// C = F1 - F2 of a critical cone with rows `k_rows` (equalities J1,
/// inequalities J2\J1), decides whether some w ≠ 0 satisfies
///   b w ∈ C and Hᵀ w ∈ Aᵀ C°,
/// i.e. no probe direction with wᵀH(probe) > 0 and A(probe) ∈ C exists.
/// Returns such a w (the condition's violation witness) or None.
pub(crate) fn face_pair_bad_w(
    b: &RatMatrix,
    h: &RatMatrix,
    a: &RatMatrix,
    k_rows: &[Vec<Rat>],
    j1: &BTreeSet<usize>,
    j2: &BTreeSet<usize>,
) -> Option<Vec<Rat>> {
    debug_assert!(j1.is_subset(j2));
    let n = b.cols();
    let k = h.cols();
    debug_assert_eq!(h.rows(), n);
    debug_assert_eq!(a.cols(), k);
    let zeta = ConeVars {
        rays: j2
            .iter()
            .filter(|j| !j1.contains(j))
            .map(|&j| k_rows[j].clone())
            .collect(),
        lines: j1.iter().map(|&j| k_rows[j].clone()).collect(),
    };
    let total = n + zeta.nvars();
    let mut lp = LinProgram::feasibility(total);
    // b w ∈ F1 - F2.
    for &j in j2 {
        let mut row = zeros(total);
        for c in 0..n {
            row[c] = dot(&k_rows[j], &b.col(c));
        }
        if j1.contains(&j) {
            lp.eq.push((row, Rat::zero()));
        } else {
            lp.le.push((row, Rat::zero()));
        }
    }
    // Hᵀ w = Aᵀ ζ, one equation per probe coordinate.
    for coord in 0..k {
        let mut row = zeros(total);
        for c in 0..n {
            row[c] = h.entry(c, coord).clone();
        }
        let block = zeta.row_for(&a.col(coord));
        for (i, v) in block.into_iter().enumerate() {
            row[n + i] = -v;
        }
        lp.eq.push((row, Rat::zero()));
    }
    zeta.push_sign_rows(&mut lp, n);
    let coords: Vec<usize> = (0..n).collect();
    nonzero_solution(&lp, &coords).map(|p| p[..n].to_vec())
}
