use std::collections::BTreeSet;

use num_traits::Zero;

use crate::exact::{
    dot, is_zero_vec, nonzero_solution, strict_feasible_point, LinProgram, Rat,
};
use crate::poly::HCone;

/// One sign cell of a hyperplane arrangement: the set of points with the
/// prescribed sign against every hyperplane, intersected with an optional
/// ambient cone. Cells are relatively open in their affine hull and their
/// union over all sign vectors partitions the ambient cone.
#[derive(Clone, Debug)]
pub struct Cell {
    /// -1, 0 or +1 per hyperplane.
    pub signs: Vec<i8>,
    /// Closure of the cell as a cone (signs weakened, ambient rows added).
    pub cone: HCone,
    /// Exact relative-interior representative. For the all-zero cell this
    /// is a nonzero point of the subspace when one exists.
    pub rep: Vec<Rat>,
    /// True for the all-zero cell, the only cell containing the origin.
    pub is_zero_cell: bool,
}

impl Cell {
    pub fn id(&self) -> String {
        self.signs
            .iter()
            .map(|s| match s {
                -1 => '-',
                0 => '0',
                _ => '+',
            })
            .collect()
    }

    /// Indices of hyperplanes vanishing on the cell.
    pub fn zero_set(&self) -> BTreeSet<usize> {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub dim: usize,
    pub hyperplanes: Vec<Vec<Rat>>,
    pub cells: Vec<Cell>,
}

/// Enumerates the nonempty sign cells of the arrangement inside `within`
/// (defaults to the whole space), in lexicographic order of sign vectors
/// with digits ordered 0 < - < +. The all-zero cell is kept only when the
/// corresponding subspace meets `within` in a nonzero point (the origin
/// itself carries no direction information).
pub fn stratify_directions(
    dim: usize,
    hyperplanes: &[Vec<Rat>],
    within: Option<&HCone>,
) -> Stratification {
    for h in hyperplanes {
        assert_eq!(h.len(), dim, "hyperplane dimension mismatch");
    }
    let mut cells = Vec::new();
    let m = hyperplanes.len();
    let mut signs = vec![0i8; m];
    enumerate(dim, hyperplanes, within, &mut signs, 0, &mut cells);
    Stratification {
        dim,
        hyperplanes: hyperplanes.to_vec(),
        cells,
    }
}

fn enumerate(
    dim: usize,
    hyperplanes: &[Vec<Rat>],
    within: Option<&HCone>,
    signs: &mut Vec<i8>,
    at: usize,
    out: &mut Vec<Cell>,
) {
    if at == hyperplanes.len() {
        if let Some(cell) = close_cell(dim, hyperplanes, within, signs) {
            out.push(cell);
        }
        return;
    }
    for s in [0i8, -1, 1] {
        signs[at] = s;
        // Prefix pruning: abandon sign prefixes that are already infeasible.
        if prefix_feasible(dim, hyperplanes, within, &signs[..=at]) {
            enumerate(dim, hyperplanes, within, signs, at + 1, out);
        }
    }
    signs[at] = 0;
}

fn cell_lp(
    dim: usize,
    hyperplanes: &[Vec<Rat>],
    within: Option<&HCone>,
    signs: &[i8],
) -> LinProgram {
    let mut lp = LinProgram::feasibility(dim);
    if let Some(cone) = within {
        cone.append_to_lp(&mut lp, 0);
    }
    for (i, &s) in signs.iter().enumerate() {
        let row = hyperplanes[i].clone();
        match s {
            0 => lp.eq.push((row, Rat::zero())),
            -1 => lp.lt.push((row, Rat::zero())),
            _ => lp.lt.push((row.iter().map(|x| -x).collect(), Rat::zero())),
        }
    }
    lp
}

fn prefix_feasible(
    dim: usize,
    hyperplanes: &[Vec<Rat>],
    within: Option<&HCone>,
    prefix: &[i8],
) -> bool {
    strict_feasible_point(&cell_lp(dim, hyperplanes, within, prefix)).is_some()
}

fn close_cell(
    dim: usize,
    hyperplanes: &[Vec<Rat>],
    within: Option<&HCone>,
    signs: &[i8],
) -> Option<Cell> {
    let lp = cell_lp(dim, hyperplanes, within, signs);
    let is_zero_cell = signs.iter().all(|&s| s == 0);
    let rep = if is_zero_cell {
        let mut closed = lp.clone();
        closed.eq.extend(closed.lt.drain(..));
        let coords: Vec<usize> = (0..dim).collect();
        nonzero_solution(&closed, &coords)?
    } else {
        let p = strict_feasible_point(&lp)?;
        debug_assert!(!is_zero_vec(&p));
        p
    };

    let mut rows = Vec::new();
    let mut eq = BTreeSet::new();
    for (i, &s) in signs.iter().enumerate() {
        match s {
            0 => {
                eq.insert(rows.len());
                rows.push(hyperplanes[i].clone());
            }
            -1 => rows.push(hyperplanes[i].clone()),
            _ => rows.push(hyperplanes[i].iter().map(|x| -x).collect()),
        }
    }
    if let Some(cone) = within {
        for (i, row) in cone.rows().iter().enumerate() {
            if cone.eq_set().contains(&i) {
                eq.insert(rows.len());
            }
            rows.push(row.clone());
        }
    }
    Some(Cell {
        signs: signs.to_vec(),
        cone: HCone::new(dim, rows, eq),
        rep,
        is_zero_cell,
    })
}

/// Sign of h·x for each hyperplane at a point, for locating cells.
pub fn signs_at(hyperplanes: &[Vec<Rat>], x: &[Rat]) -> Vec<i8> {
    hyperplanes
        .iter()
        .map(|h| {
            let v = dot(h, x);
            if v.is_zero() {
                0
            } else if v < Rat::zero() {
                -1
            } else {
                1
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn rvec(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn single_hyperplane_gives_three_cells() {
        let st = stratify_directions(2, &[rvec(&[1, 0])], None);
        assert_eq!(st.cells.len(), 3);
        // The zero cell is the hyperplane itself, a nontrivial subspace.
        assert!(st.cells.iter().any(|c| c.is_zero_cell));
        for c in &st.cells {
            assert_eq!(signs_at(&st.hyperplanes, &c.rep), c.signs);
        }
    }

    #[test]
    fn empty_list_gives_whole_space() {
        let st = stratify_directions(3, &[], None);
        assert_eq!(st.cells.len(), 1);
        assert!(st.cells[0].is_zero_cell);
        assert!(!is_zero_vec(&st.cells[0].rep));
    }

    #[test]
    fn two_lines_in_plane() {
        // x = 0 and y = 0: 8 nonzero cells + the origin-only cell dropped.
        let st = stratify_directions(2, &[rvec(&[1, 0]), rvec(&[0, 1])], None);
        assert_eq!(st.cells.len(), 8);
        assert!(st.cells.iter().all(|c| !c.is_zero_cell));
    }

    #[test]
    fn within_cone_restriction() {
        // Hyperplane x - y = 0 inside R^2_-: cells (0), (-), (+) all meet it.
        let within = HCone::new(
            2,
            vec![rvec(&[1, 0]), rvec(&[0, 1])],
            BTreeSet::new(),
        );
        let st = stratify_directions(2, &[rvec(&[1, -1])], Some(&within));
        assert_eq!(st.cells.len(), 3);
        for c in &st.cells {
            assert!(within.member(&c.rep));
        }
    }

    #[test]
    fn every_direction_in_exactly_one_cell() {
        let hyps = vec![rvec(&[1, -1]), rvec(&[2, 1]), rvec(&[0, 1])];
        let st = stratify_directions(2, &hyps, None);
        for pt in [rvec(&[1, 1]), rvec(&[-3, 2]), rvec(&[5, 0]), rvec(&[2, -1])] {
            let s = signs_at(&hyps, &pt);
            let hits = st.cells.iter().filter(|c| c.signs == s).count();
            assert_eq!(hits, 1, "direction {pt:?}");
        }
    }
}
