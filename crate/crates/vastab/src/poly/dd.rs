use num_traits::Zero;

use crate::exact::{dot, is_zero_vec, normalize_ray, rank, Rat, RatMatrix};

use super::{HCone, VCone};

/// Double description method: converts an H-cone into its minimal generator
/// representation (a lineality basis plus the extreme rays), inserting one
/// constraint at a time and combining adjacent rays. Equality rows are
/// processed first so the lineality space shrinks early.
pub fn extreme_rays(c: &HCone) -> VCone {
    let dim = c.dim();
    let mut lines: Vec<Vec<Rat>> = RatMatrix::identity(dim).row_vecs();
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    let mut processed: Vec<Vec<Rat>> = Vec::new();

    let mut order: Vec<usize> = c.eq_set().iter().copied().collect();
    order.extend(c.ineq_indices());

    for idx in order {
        let a = &c.rows()[idx];
        let is_eq = c.eq_set().contains(&idx);
        insert_constraint(dim, &mut lines, &mut rays, &processed, a, is_eq);
        processed.push(a.clone());
        dedup_rays(&mut rays);
    }
    VCone::new(dim, rays, lines)
}

fn insert_constraint(
    dim: usize,
    lines: &mut Vec<Vec<Rat>>,
    rays: &mut Vec<Vec<Rat>>,
    processed: &[Vec<Rat>],
    a: &[Rat],
    is_eq: bool,
) {
    if let Some(li) = lines.iter().position(|l| !dot(a, l).is_zero()) {
        // A line crosses the hyperplane: it absorbs the constraint. Every
        // other generator is shifted into the hyperplane; the cut line
        // survives as a ray on the feasible side unless the row is an
        // equality.
        let lstar = lines.remove(li);
        let vstar = dot(a, &lstar);
        for l in lines.iter_mut() {
            let coef = dot(a, l) / &vstar;
            if !coef.is_zero() {
                *l = l
                    .iter()
                    .zip(&lstar)
                    .map(|(x, s)| x - &coef * s)
                    .collect();
            }
        }
        for r in rays.iter_mut() {
            let coef = dot(a, r) / &vstar;
            if !coef.is_zero() {
                *r = r
                    .iter()
                    .zip(&lstar)
                    .map(|(x, s)| x - &coef * s)
                    .collect();
            }
        }
        if !is_eq {
            let r0 = if vstar < Rat::zero() {
                lstar
            } else {
                lstar.iter().map(|x| -x).collect()
            };
            rays.push(r0);
        }
        return;
    }

    // All lines lie in the hyperplane: split the rays.
    let mut neg = Vec::new();
    let mut zero = Vec::new();
    let mut pos = Vec::new();
    for r in rays.drain(..) {
        let v = dot(a, &r);
        if v.is_zero() {
            zero.push(r);
        } else if v < Rat::zero() {
            neg.push(r);
        } else {
            pos.push(r);
        }
    }
    let mut out = zero;
    let target_rank = dim as isize - lines.len() as isize - 2;
    for rn in &neg {
        for rp in &pos {
            if !adjacent(processed, rn, rp, target_rank) {
                continue;
            }
            let cn = dot(a, rp);
            let cp = -dot(a, rn);
            let combo: Vec<Rat> = rn
                .iter()
                .zip(rp)
                .map(|(n, p)| &cn * n + &cp * p)
                .collect();
            if !is_zero_vec(&combo) {
                out.push(combo);
            }
        }
    }
    if !is_eq {
        out.extend(neg);
    }
    *rays = out;
}

/// Algebraic adjacency: two extreme rays are adjacent iff the constraints
/// tight at both span a space of dimension dim - lineality - 2.
fn adjacent(processed: &[Vec<Rat>], r1: &[Rat], r2: &[Rat], target_rank: isize) -> bool {
    if target_rank < 0 {
        // Fewer than two non-lineality dimensions: any two rays span the cone.
        return true;
    }
    let tight: Vec<Vec<Rat>> = processed
        .iter()
        .filter(|c| dot(c, r1).is_zero() && dot(c, r2).is_zero())
        .cloned()
        .collect();
    let r = if tight.is_empty() {
        0
    } else {
        rank(&RatMatrix::from_rows(tight))
    };
    r as isize == target_rank
}

fn dedup_rays(rays: &mut Vec<Vec<Rat>>) {
    let mut seen = std::collections::BTreeSet::new();
    rays.retain(|r| {
        if is_zero_vec(r) {
            return false;
        }
        let key = normalize_ray(r)
            .iter()
            .map(crate::exact::rat_to_string)
            .collect::<Vec<_>>()
            .join(",");
        seen.insert(key)
    });
}
