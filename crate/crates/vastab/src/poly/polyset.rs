use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{
    dot, fmt_vec, lp_solve, parse_rat, rat_to_string, LinProgram, LpSense, Rat,
};

use super::{HCone, PolyError, VCone};

/// Convex polyhedral set { z : A z <= d, E z = c }. The representation may
/// contain redundant rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySet {
    dim: usize,
    ineqs: Vec<(Vec<Rat>, Rat)>,
    eqs: Vec<(Vec<Rat>, Rat)>,
}

impl PolySet {
    pub fn new(dim: usize, ineqs: Vec<(Vec<Rat>, Rat)>, eqs: Vec<(Vec<Rat>, Rat)>) -> Self {
        for (a, _) in ineqs.iter().chain(&eqs) {
            assert_eq!(a.len(), dim, "row length mismatch");
        }
        Self { dim, ineqs, eqs }
    }

    /// R^dim with no constraints.
    pub fn full_space(dim: usize) -> Self {
        Self::new(dim, vec![], vec![])
    }

    /// The negative orthant R^k_-.
    pub fn neg_orthant(k: usize) -> Self {
        let ineqs = (0..k)
            .map(|i| {
                let mut row = crate::exact::zeros(k);
                row[i] = Rat::from_integer(1.into());
                (row, Rat::zero())
            })
            .collect();
        Self::new(k, ineqs, vec![])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[(Vec<Rat>, Rat)] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[(Vec<Rat>, Rat)] {
        &self.eqs
    }

    pub fn member(&self, z: &[Rat]) -> bool {
        assert_eq!(z.len(), self.dim);
        self.ineqs.iter().all(|(a, b)| dot(a, z) <= *b)
            && self.eqs.iter().all(|(a, b)| dot(a, z) == *b)
    }

    pub fn is_empty(&self) -> bool {
        let mut lp = LinProgram::feasibility(self.dim);
        self.append_to_lp(&mut lp, 0);
        !lp_solve(&lp, LpSense::Max).is_feasible()
    }

    pub fn append_to_lp(&self, lp: &mut LinProgram, offset: usize) {
        for (a, b) in &self.ineqs {
            let mut row = crate::exact::zeros(lp.num_vars);
            row[offset..offset + self.dim].clone_from_slice(a);
            lp.le.push((row, b.clone()));
        }
        for (a, b) in &self.eqs {
            let mut row = crate::exact::zeros(lp.num_vars);
            row[offset..offset + self.dim].clone_from_slice(a);
            lp.eq.push((row, b.clone()));
        }
    }

    /// Indices of inequality rows active at z (z must be a member).
    pub fn active_set(&self, z: &[Rat]) -> Result<BTreeSet<usize>, PolyError> {
        if !self.member(z) {
            return Err(PolyError::InfeasiblePoint(fmt_vec(z)));
        }
        Ok(self
            .ineqs
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| &dot(a, z) == b)
            .map(|(i, _)| i)
            .collect())
    }

    /// T_D(z) = { w : A_I w <= 0, E w = 0 } for the active set I at z.
    pub fn tangent_cone(&self, z: &[Rat]) -> Result<HCone, PolyError> {
        let active = self.active_set(z)?;
        let mut rows: Vec<Vec<Rat>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let eq: BTreeSet<usize> = (0..rows.len()).collect();
        for &i in &active {
            rows.push(self.ineqs[i].0.clone());
        }
        Ok(HCone::new(self.dim, rows, eq))
    }

    /// N_D(z) = cone{A_i : i active} + span{E rows}.
    pub fn normal_cone(&self, z: &[Rat]) -> Result<VCone, PolyError> {
        let active = self.active_set(z)?;
        let rays = active.iter().map(|&i| self.ineqs[i].0.clone()).collect();
        let lines = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        Ok(VCone::new(self.dim, rays, lines))
    }

    /// K_D(z, z*) = T_D(z) ∩ [z*]⊥, canonicalized. Errors when z* is not a
    /// normal vector at z.
    pub fn critical_cone(&self, z: &[Rat], zstar: &[Rat]) -> Result<HCone, PolyError> {
        let normal = self.normal_cone(z)?;
        if !normal.member(zstar) {
            return Err(PolyError::NotANormalVector(fmt_vec(zstar)));
        }
        let tangent = self.tangent_cone(z)?;
        let k = if zstar.iter().all(|x| x.is_zero()) {
            tangent
        } else {
            tangent.with_equality(zstar)
        };
        Ok(k.canonicalize())
    }
}

/// Wire format shared by PolySet and HCone: rational strings, inequality
/// rows before equality rows, right-hand side as the last entry of each row
/// (omitted for cones).
#[derive(Serialize, Deserialize)]
struct PolyJson {
    dim: usize,
    #[serde(default)]
    ineq: Vec<Vec<String>>,
    #[serde(default)]
    eq: Vec<Vec<String>>,
}

fn parse_row(row: &[String], want: usize, what: &str) -> Result<Vec<Rat>, String> {
    if row.len() != want {
        return Err(format!(
            "{what}: expected {want} entries per row, got {}",
            row.len()
        ));
    }
    row.iter().map(|s| parse_rat(s)).collect()
}

impl PolySet {
    pub fn to_json(&self) -> serde_json::Value {
        let encode = |rows: &[(Vec<Rat>, Rat)]| -> Vec<Vec<String>> {
            rows.iter()
                .map(|(a, b)| {
                    let mut row: Vec<String> = a.iter().map(rat_to_string).collect();
                    row.push(rat_to_string(b));
                    row
                })
                .collect()
        };
        serde_json::to_value(PolyJson {
            dim: self.dim,
            ineq: encode(&self.ineqs),
            eq: encode(&self.eqs),
        })
        .expect("polyset serialization")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let raw: PolyJson =
            serde_json::from_value(v.clone()).map_err(|e| format!("polyhedron: {e}"))?;
        let decode = |rows: &[Vec<String>]| -> Result<Vec<(Vec<Rat>, Rat)>, String> {
            rows.iter()
                .map(|row| {
                    let full = parse_row(row, raw.dim + 1, "polyhedron row")?;
                    let (rhs, coeffs) = full.split_last().unwrap();
                    Ok((coeffs.to_vec(), rhs.clone()))
                })
                .collect()
        };
        Ok(Self::new(raw.dim, decode(&raw.ineq)?, decode(&raw.eq)?))
    }
}

impl HCone {
    pub fn to_json(&self) -> serde_json::Value {
        let encode = |idx: Vec<usize>| -> Vec<Vec<String>> {
            idx.into_iter()
                .map(|i| self.rows()[i].iter().map(rat_to_string).collect())
                .collect()
        };
        serde_json::to_value(PolyJson {
            dim: self.dim(),
            ineq: encode(self.ineq_indices()),
            eq: encode(self.eq_set().iter().copied().collect()),
        })
        .expect("cone serialization")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let raw: PolyJson = serde_json::from_value(v.clone()).map_err(|e| format!("cone: {e}"))?;
        let mut rows = Vec::new();
        let mut eq = BTreeSet::new();
        for row in &raw.ineq {
            rows.push(parse_row(row, raw.dim, "cone row")?);
        }
        for row in &raw.eq {
            eq.insert(rows.len());
            rows.push(parse_row(row, raw.dim, "cone row")?);
        }
        Ok(HCone::new(raw.dim, rows, eq))
    }
}
