//! Inversive coordinates for oriented spheres and points, the Minkowski
//! product, and Möbius transformations acting linearly on them.
//!
//! A sphere or point of R^d ∪ {∞} is a (d+2)-vector over Q(√2). Spheres
//! have self-product exactly 1, points exactly 0 (and are homogeneous: any
//! nonzero scalar multiple names the same point). The product is taken
//! against Q = diag(1,…,1,−1).

use crate::exactnum::QuadExt;
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("operand must be a sphere")]
    NotASphere,
    #[error("zero bend: use the halfspace constructor")]
    ZeroBend,
    #[error("halfspace normal must have unit length")]
    NonUnitNormal,
    #[error("vector is not on the required quadric: <v,v> = {0}")]
    BadNorm(String),
    #[error("matrix does not preserve the inversive form")]
    NotMobius,
    #[error("linear system is singular or inconsistent: {0}")]
    Singular(String),
    #[error("sphere is centered on the cutting plane")]
    OnCuttingPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Sphere,
    Point,
}

/// Inversive-coordinate vector of dimension d ∈ {2, 3}: length d+2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvVec {
    dim: usize,
    kind: Kind,
    coords: Vec<QuadExt>,
}

/// Minkowski product u^T Q v with Q = diag(1,…,1,−1).
pub fn inv_product(u: &InvVec, v: &InvVec) -> Result<QuadExt, GeomError> {
    if u.dim != v.dim {
        return Err(GeomError::DimMismatch(u.dim, v.dim));
    }
    Ok(raw_product(&u.coords, &v.coords))
}

fn raw_product(u: &[QuadExt], v: &[QuadExt]) -> QuadExt {
    let n = u.len();
    let mut acc = QuadExt::zero();
    for i in 0..n - 1 {
        acc = &acc + &(&u[i] * &v[i]);
    }
    &acc - &(&u[n - 1] * &v[n - 1])
}

/// Relative position of two spheres, decided by the exact product value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    Coincident,
    Tangent,
    Orthogonal,
    Disjoint,
    Intersecting,
    Nested,
}

impl InvVec {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn coords(&self) -> &[QuadExt] {
        &self.coords
    }

    pub fn is_sphere(&self) -> bool {
        self.kind == Kind::Sphere
    }

    /// Build from raw coordinates, validating the quadric constraint.
    pub fn from_coords(dim: usize, kind: Kind, coords: Vec<QuadExt>) -> Result<Self, GeomError> {
        assert!(dim == 2 || dim == 3);
        if coords.len() != dim + 2 {
            return Err(GeomError::DimMismatch(coords.len(), dim + 2));
        }
        let n = raw_product(&coords, &coords);
        match kind {
            Kind::Sphere => {
                if n != QuadExt::one() {
                    return Err(GeomError::BadNorm(n.to_string()));
                }
            }
            Kind::Point => {
                if !n.is_zero() || coords.iter().all(|c| c.is_zero()) {
                    return Err(GeomError::BadNorm(n.to_string()));
                }
            }
        }
        Ok(InvVec { dim, kind, coords })
    }

    /// Sphere with nonzero bend b and center c: (bc, (b̄−b)/2, (b̄+b)/2)
    /// where b̄ = b‖c‖² − 1/b is the co-bend.
    pub fn sphere_from_bend_center(b: &QuadExt, c: &[QuadExt]) -> Result<Self, GeomError> {
        let dim = c.len();
        assert!(dim == 2 || dim == 3);
        if b.is_zero() {
            return Err(GeomError::ZeroBend);
        }
        let norm2 = c.iter().fold(QuadExt::zero(), |acc, x| &acc + &(x * x));
        let cobend = &(b * &norm2) - &b.recip().unwrap();
        let two = QuadExt::from_int(2);
        let mut coords: Vec<QuadExt> = c.iter().map(|x| b * x).collect();
        coords.push((&cobend - b) / &two);
        coords.push((&cobend + b) / &two);
        InvVec::from_coords(dim, Kind::Sphere, coords)
    }

    /// Half-space with unit normal n (pointing into the interior) and signed
    /// boundary distance delta: (n, δ, δ).
    pub fn halfspace(n: &[QuadExt], delta: &QuadExt) -> Result<Self, GeomError> {
        let dim = n.len();
        assert!(dim == 2 || dim == 3);
        let norm2 = n.iter().fold(QuadExt::zero(), |acc, x| &acc + &(x * x));
        if norm2 != QuadExt::one() {
            return Err(GeomError::NonUnitNormal);
        }
        let mut coords: Vec<QuadExt> = n.to_vec();
        coords.push(delta.clone());
        coords.push(delta.clone());
        InvVec::from_coords(dim, Kind::Sphere, coords)
    }

    /// Finite point (p, (‖p‖²−1)/2, (‖p‖²+1)/2).
    pub fn point(p: &[QuadExt]) -> Result<Self, GeomError> {
        let dim = p.len();
        assert!(dim == 2 || dim == 3);
        let norm2 = p.iter().fold(QuadExt::zero(), |acc, x| &acc + &(x * x));
        let two = QuadExt::from_int(2);
        let mut coords: Vec<QuadExt> = p.to_vec();
        coords.push((&norm2 - &QuadExt::one()) / &two);
        coords.push((&norm2 + &QuadExt::one()) / &two);
        InvVec::from_coords(dim, Kind::Point, coords)
    }

    /// The point at infinity (0, …, 0, 1, 1).
    pub fn point_at_infinity(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3);
        let mut coords = vec![QuadExt::zero(); dim];
        coords.push(QuadExt::one());
        coords.push(QuadExt::one());
        InvVec {
            dim,
            kind: Kind::Point,
            coords,
        }
    }

    /// Point from possibly unnormalized isotropic coordinates.
    pub fn point_from_raw(dim: usize, coords: Vec<QuadExt>) -> Result<Self, GeomError> {
        InvVec::from_coords(dim, Kind::Point, coords)
    }

    /// Bend of a sphere: last coordinate minus the one before it.
    pub fn bend(&self) -> QuadExt {
        let n = self.coords.len();
        &self.coords[n - 1] - &self.coords[n - 2]
    }

    /// Center and signed radius of a bounded sphere, or the halfspace data
    /// (unit normal, delta) when the bend vanishes.
    pub fn center_radius(&self) -> Result<CenterRadius, GeomError> {
        if self.kind != Kind::Sphere {
            return Err(GeomError::NotASphere);
        }
        let b = self.bend();
        if b.is_zero() {
            let n = self.coords[..self.dim].to_vec();
            let delta = self.coords[self.dim].clone();
            return Ok(CenterRadius::Halfspace { normal: n, delta });
        }
        let center: Vec<QuadExt> = self.coords[..self.dim]
            .iter()
            .map(|x| x.div_exact(&b).unwrap())
            .collect();
        Ok(CenterRadius::Sphere {
            center,
            radius: b.recip().unwrap(),
            bend: b,
        })
    }

    /// Cartesian coordinates of a finite point (fails on the point at
    /// infinity, where the homogenizing coordinate vanishes).
    pub fn point_cartesian(&self) -> Result<Vec<QuadExt>, GeomError> {
        if self.kind != Kind::Point {
            return Err(GeomError::NotASphere);
        }
        let n = self.coords.len();
        let w = &self.coords[n - 1] - &self.coords[n - 2];
        if w.is_zero() {
            return Err(GeomError::ZeroBend);
        }
        Ok(self.coords[..self.dim]
            .iter()
            .map(|x| x.div_exact(&w).unwrap())
            .collect())
    }

    /// Projective equality for points (equal up to a nonzero scalar).
    pub fn proj_eq(&self, other: &InvVec) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let u = &self.coords;
        let v = &other.coords;
        for i in 0..u.len() {
            for j in (i + 1)..u.len() {
                if &u[i] * &v[j] != &u[j] * &v[i] {
                    return false;
                }
            }
        }
        // rule out pairing a nonzero vector with zero (constructors forbid
        // zero vectors anyway)
        true
    }

    /// Orientation flip (same unoriented sphere / same point).
    pub fn flipped(&self) -> InvVec {
        InvVec {
            dim: self.dim,
            kind: self.kind,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn self_product(&self) -> QuadExt {
        raw_product(&self.coords, &self.coords)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterRadius {
    Sphere {
        center: Vec<QuadExt>,
        radius: QuadExt,
        bend: QuadExt,
    },
    Halfspace {
        normal: Vec<QuadExt>,
        delta: QuadExt,
    },
}

/// Classify the relative position of two spheres from the exact product:
/// 1 with equality → coincident, −1 → externally tangent, 0 → orthogonal,
/// < −1 → disjoint, strictly between −1 and 1 → intersecting, and ≥ 1 on
/// distinct spheres → nested (internal tangency included).
pub fn classify_pair(u: &InvVec, v: &InvVec) -> Result<PairClass, GeomError> {
    if !u.is_sphere() || !v.is_sphere() {
        return Err(GeomError::NotASphere);
    }
    let p = inv_product(u, v)?;
    let one = QuadExt::one();
    Ok(if p == one {
        if u == v {
            PairClass::Coincident
        } else {
            PairClass::Nested
        }
    } else if p == -&one {
        PairClass::Tangent
    } else if p.is_zero() {
        PairClass::Orthogonal
    } else if (&p + &one).is_negative() {
        PairClass::Disjoint
    } else if (&p - &one).is_negative() {
        PairClass::Intersecting
    } else {
        PairClass::Nested
    })
}

/// A Möbius transformation as a (d+2)×(d+2) matrix preserving the form Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMap {
    dim: usize,
    pub m: Mat,
}

impl MobiusMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(dim: usize) -> Self {
        MobiusMap {
            dim,
            m: Mat::identity(dim + 2),
        }
    }

    /// Wrap a matrix after checking m^T Q m = Q exactly.
    pub fn from_mat(dim: usize, m: Mat) -> Result<Self, GeomError> {
        let n = dim + 2;
        if m.rows != n || m.cols != n {
            return Err(GeomError::DimMismatch(m.rows, n));
        }
        if !preserves_form(&m) {
            return Err(GeomError::NotMobius);
        }
        Ok(MobiusMap { dim, m })
    }

    /// Inversion through a sphere: I − 2·v·v^T·Q. An involution that
    /// negates the sphere's own vector and fixes everything orthogonal
    /// to it; insensitive to the orientation of the sphere.
    pub fn inversion(s: &InvVec) -> Result<Self, GeomError> {
        if !s.is_sphere() {
            return Err(GeomError::NotASphere);
        }
        let n = s.dim + 2;
        let mut m = Mat::identity(n);
        let two = QuadExt::from_int(2);
        for i in 0..n {
            for j in 0..n {
                // (v v^T Q)_{ij} = v_i v_j q_j with q_j = ±1
                let mut t = &s.coords[i] * &s.coords[j];
                if j == n - 1 {
                    t = -&t;
                }
                m[(i, j)] = &m[(i, j)] - &(&two * &t);
            }
        }
        MobiusMap::from_mat(s.dim, m)
    }

    pub fn apply(&self, v: &InvVec) -> Result<InvVec, GeomError> {
        if v.dim != self.dim {
            return Err(GeomError::DimMismatch(v.dim, self.dim));
        }
        let coords = self.m.mul_vec(&v.coords);
        // form preservation keeps the quadric constraint; revalidate anyway
        InvVec::from_coords(v.dim, v.kind, coords)
    }

    pub fn compose(&self, rhs: &MobiusMap) -> MobiusMap {
        assert_eq!(self.dim, rhs.dim);
        MobiusMap {
            dim: self.dim,
            m: self.m.mul(&rhs.m),
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            dim: self.dim,
            m: self.m.inverse().expect("Mobius maps are invertible"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m == Mat::identity(self.dim + 2)
    }
}

fn preserves_form(m: &Mat) -> bool {
    let n = m.rows;
    let mt = m.transpose();
    let mut q = Mat::identity(n);
    q[(n - 1, n - 1)] = -QuadExt::one();
    let lhs = mt.mul(&q).mul(m);
    lhs == q
}
