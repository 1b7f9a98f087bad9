//! Extreme points of a feasible region.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;

/// Stable identifier derived from the payload bits, so equal payloads always
/// get equal ids across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u64);

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// Explicit ambient vector (simplex vertices, l_p sphere points).
    Dense(Vec<f64>),
    /// Permutation matrix with a one at `(i, sigma[i])`.
    Permutation(Vec<usize>),
    /// Unit vector `u` standing for the rank-one matrix `u u^T`.
    Factor(Vec<f64>),
    /// A node of a quadrature rule; it has no finite ambient vector.
    Point(Vec<f64>),
}

/// One extreme point. Cloning is cheap; the payload is shared.
#[derive(Clone)]
pub struct Atom {
    id: AtomId,
    payload: Arc<Payload>,
}

/// Normalizes `-0.0` to `0.0` so that bitwise and element-wise equality agree.
fn canonical(mut v: Vec<f64>) -> Vec<f64> {
    for x in &mut v {
        if *x == 0.0 {
            *x = 0.0;
        }
    }
    v
}

fn payload_id(payload: &Payload) -> AtomId {
    let mut h = DefaultHasher::new();
    match payload {
        Payload::Dense(v) => {
            0u8.hash(&mut h);
            v.iter().for_each(|x| x.to_bits().hash(&mut h));
        }
        Payload::Permutation(p) => {
            1u8.hash(&mut h);
            p.hash(&mut h);
        }
        Payload::Factor(v) => {
            2u8.hash(&mut h);
            v.iter().for_each(|x| x.to_bits().hash(&mut h));
        }
        Payload::Point(v) => {
            3u8.hash(&mut h);
            v.iter().for_each(|x| x.to_bits().hash(&mut h));
        }
    }
    AtomId(h.finish())
}

impl Atom {
    fn from_payload(payload: Payload) -> Self {
        let id = payload_id(&payload);
        Atom { id, payload: Arc::new(payload) }
    }

    pub fn dense(v: Vec<f64>) -> Result<Self> {
        if !linalg::all_finite(&v) {
            return Err(Error::NonFinite("dense atom"));
        }
        Ok(Self::from_payload(Payload::Dense(canonical(v))))
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(i < n, "basis index {i} out of range for dimension {n}");
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self::from_payload(Payload::Dense(v))
    }

    pub fn permutation(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &j in &sigma {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::contract(format!("{sigma:?} is not a permutation")));
            }
        }
        Ok(Self::from_payload(Payload::Permutation(sigma)))
    }

    /// Rank-one spectrahedron vertex `u u^T`; `u` is rescaled to unit norm.
    pub fn factor(u: Vec<f64>) -> Result<Self> {
        if !linalg::all_finite(&u) {
            return Err(Error::NonFinite("factor atom"));
        }
        let norm = linalg::norm(&u);
        if norm == 0.0 {
            return Err(Error::contract("factor atom must be non-zero"));
        }
        let u = u.into_iter().map(|x| x / norm).collect();
        Ok(Self::from_payload(Payload::Factor(canonical(u))))
    }

    pub fn point(x: Vec<f64>) -> Result<Self> {
        if !linalg::all_finite(&x) {
            return Err(Error::NonFinite("point atom"));
        }
        Ok(Self::from_payload(Payload::Point(canonical(x))))
    }

    pub fn id(&self) -> AtomId {
        self.id
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// Coordinates of a point atom.
    pub fn as_point(&self) -> Option<&[f64]> {
        match &*self.payload {
            Payload::Point(x) => Some(x),
            _ => None,
        }
    }

    /// Length of the flat ambient vector this atom lives in (0 for points).
    pub fn ambient_len(&self) -> usize {
        match &*self.payload {
            Payload::Dense(v) => v.len(),
            Payload::Permutation(p) => p.len() * p.len(),
            Payload::Factor(u) => u.len() * u.len(),
            Payload::Point(_) => 0,
        }
    }

    /// Ambient inner product `<c, v>`.
    pub fn dot(&self, c: &[f64]) -> f64 {
        debug_assert_eq!(c.len(), self.ambient_len());
        match &*self.payload {
            Payload::Dense(v) => linalg::dot(v, c),
            Payload::Permutation(p) => {
                let n = p.len();
                p.iter().enumerate().map(|(i, &j)| c[i * n + j]).sum()
            }
            Payload::Factor(u) => linalg::quadratic_form(c, u.len(), u),
            Payload::Point(_) => 0.0,
        }
    }

    /// `x += alpha * v`.
    pub fn add_scaled_to(&self, alpha: f64, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ambient_len());
        match &*self.payload {
            Payload::Dense(v) => linalg::axpy(alpha, v, x),
            Payload::Permutation(p) => {
                let n = p.len();
                for (i, &j) in p.iter().enumerate() {
                    x[i * n + j] += alpha;
                }
            }
            Payload::Factor(u) => {
                let n = u.len();
                for i in 0..n {
                    let ai = alpha * u[i];
                    for j in 0..n {
                        x[i * n + j] += ai * u[j];
                    }
                }
            }
            Payload::Point(_) => {}
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.ambient_len()];
        self.add_scaled_to(1.0, &mut v);
        v
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && (Arc::ptr_eq(&self.payload, &other.payload) || self.payload == other.payload)
    }
}

impl Eq for Atom {}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.payload {
            Payload::Dense(v) if v.len() <= 8 => write!(f, "Dense{v:?}"),
            Payload::Permutation(p) if p.len() <= 8 => write!(f, "Perm{p:?}"),
            Payload::Point(x) => write!(f, "Point{x:?}"),
            _ => write!(f, "Atom({})", self.id),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_payload_equality() {
        let a = Atom::dense(vec![1.0, 0.0]).unwrap();
        let b = Atom::basis(2, 0);
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
        assert_ne!(a, Atom::basis(2, 1));
        // negative zero is canonicalized
        assert_eq!(Atom::dense(vec![1.0, -0.0]).unwrap(), a);
    }

    #[test]
    fn rejects_non_finite_and_bad_permutations() {
        assert!(Atom::dense(vec![f64::NAN]).is_err());
        assert!(Atom::point(vec![f64::INFINITY]).is_err());
        assert!(Atom::permutation(vec![0, 0]).is_err());
        assert!(Atom::permutation(vec![0, 2]).is_err());
        assert!(Atom::factor(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn factor_is_unit_norm() {
        let a = Atom::factor(vec![3.0, 4.0]).unwrap();
        let Payload::Factor(u) = a.payload() else { unreachable!() };
        assert!((linalg::norm(u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dot_matches_dense_representation() {
        let c: Vec<f64> = (0..9).map(|i| i as f64 * 0.5 - 1.0).collect();
        for atom in [
            Atom::permutation(vec![2, 0, 1]).unwrap(),
            Atom::factor(vec![1.0, -2.0, 0.5]).unwrap(),
        ] {
            let dense = atom.to_dense();
            assert!((atom.dot(&c) - linalg::dot(&dense, &c)).abs() < 1e-12);
        }
    }
}
