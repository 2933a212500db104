//! Exact rational scalars, vectors, matrices and linear programming.
//!
//! Everything downstream decides yes/no questions about polyhedral geometry,
//! so this module performs no rounding anywhere: scalars are arbitrary
//! precision rationals kept in lowest terms with positive denominators, and
//! the simplex solver pivots with Bland's rule so that every answer is exact
//! and reproducible.

mod linprog;
mod matrix;

pub use linprog::{
    lp_solve, nonzero_solution, strict_feasible_point, LinProgram, LpSense, LpSolution, LpStatus,
};
pub use matrix::{kernel_basis, rank, solve_linear, RatMatrix};

use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar, always in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(num.into(), den.into())
}

/// Parses the serialized form used in every file format: "a/b" or "a".
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: num_bigint::BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator {num:?}"))?;
    let d: num_bigint::BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid rational denominator {d:?}"))?,
        None => One::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rat::new(n, d))
}

/// Serializes a rational as "a/b", or "a" when the denominator is one.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot length mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

/// Canonical representative of the ray through `v`: divides by the absolute
/// value of the first nonzero entry. Used to deduplicate generators.
pub fn normalize_ray(v: &[Rat]) -> Vec<Rat> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(pivot) => {
            let scale = pivot.abs();
            v.iter().map(|x| x / &scale).collect()
        }
    }
}

pub fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(rat_to_string).collect();
    format!("({})", parts.join(", "))
}
