//! Orthocubic points of rational tangles, the matrix-recursion oracle for
//! them, and the quartic Diophantine solution generator they parametrize.

use crate::exactnum::{QuadExt, Rat};
use crate::inversive::{CenterRadius, GeomError, InvVec, MobiusMap};
use crate::orthocubic::{BuildError, Corner, OrthoTangle};
use crate::packing::{ctx, signed_perm_symmetry, SignedPerm};
use crate::tangle::{Slope, TangleError};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Debug, thiserror::Error)]
pub enum NumthError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("slope 0/0 is not a tangle")]
    BadSlope,
    #[error("coefficients must be a nonnegative head with positive tail")]
    BadCoefficients,
}

/// The distinguished tangency point attached to a rational tangle: its
/// isotropic vector, and the plane point where the first edge of the
/// orthocubic construction touches.
#[derive(Debug, Clone)]
pub struct OrthoPoint {
    pub slope: Slope,
    pub invvec: InvVec,
    pub cartesian: [QuadExt; 2],
}

fn big_to_quad(n: &BigInt) -> QuadExt {
    QuadExt::from_rat(Rat::from_integer(n.clone()))
}

/// Closed-form orthocubic point of a slope p/q (coprime, q ≥ 0):
/// isotropic vector (±p², q², (p−q)², √2(p²−pq+q²)), with the x-coordinate
/// reflected for negative slopes.
pub fn orthocubic_point(s: &Slope) -> Result<OrthoPoint, NumthError> {
    let p = s.p.abs();
    let q = s.q.clone();
    if p.is_zero() && q.is_zero() {
        return Err(NumthError::BadSlope);
    }
    let neg = s.is_negative();
    let p2 = big_to_quad(&(&p * &p));
    let q2 = big_to_quad(&(&q * &q));
    let pq = big_to_quad(&(&p - &q)) ;
    let pq2 = &pq * &pq;
    let t = big_to_quad(&(&p * &p - &p * &q + &q * &q));
    let last = &QuadExt::sqrt2() * &t;
    let x0 = if neg { -&p2 } else { p2.clone() };
    let coords = vec![x0.clone(), q2.clone(), pq2.clone(), last.clone()];
    let invvec = InvVec::point_from_raw(2, coords)?;
    // cartesian = (±p², q²) / (√2(p²−pq+q²) − (p−q)²)
    let denom = &last - &pq2;
    let cartesian = [
        x0.div_exact(&denom).unwrap(),
        q2.div_exact(&denom).unwrap(),
    ];
    Ok(OrthoPoint {
        slope: s.clone(),
        invvec,
        cartesian,
    })
}

/// The twist matrix of the point recursion: (S₁R₁₃)^k · R₁₂ over the
/// planar packing, where S₁ inverts through the dual circle at (√2, 0).
pub fn twist_matrix(k: i64) -> MobiusMap {
    let c = ctx();
    let s1 = MobiusMap::inversion(&c.cubic.duals[&vec![1]]).unwrap();
    let r13 = signed_perm_symmetry(&c.cubic, &SignedPerm::swap(3, 1, 3)).unwrap();
    let r12 = signed_perm_symmetry(&c.cubic, &SignedPerm::swap(3, 1, 2)).unwrap();
    let step = s1.compose(&r13);
    let mut m = MobiusMap::identity(2);
    for _ in 0..k {
        m = m.compose(&step);
    }
    m.compose(&r12)
}

/// Closed form of the same matrix, used as an independent cross-check.
pub fn twist_matrix_closed_form(k: i64) -> MobiusMap {
    let kk = QuadExt::from_int(k);
    let one = QuadExt::one();
    let s2 = QuadExt::sqrt2();
    let k2 = &kk * &kk;
    let rows = vec![
        vec![
            QuadExt::zero(),
            &one - &k2,
            -&(&kk * &(&kk + &QuadExt::from_int(2))),
            &s2 * &(&kk * &(&kk + &one)),
        ],
        vec![one.clone(), QuadExt::zero(), QuadExt::zero(), QuadExt::zero()],
        vec![
            QuadExt::zero(),
            -&(&kk * &(&kk - &QuadExt::from_int(2))),
            &one - &k2,
            &s2 * &(&kk * &(&kk - &one)),
        ],
        vec![
            QuadExt::zero(),
            -&(&s2 * &(&kk * &(&kk - &one))),
            -&(&s2 * &(&kk * &(&kk + &one))),
            &(&QuadExt::from_int(2) * &k2) + &one,
        ],
    ];
    MobiusMap::from_mat(2, crate::linalg::Mat::from_rows(rows)).expect("closed form preserves the form")
}

/// The isotropic vector of the point at slope ∞ fixed by the twist step:
/// (1, 0, 1, √2).
pub fn base_point_vector() -> InvVec {
    InvVec::point_from_raw(
        2,
        vec![
            QuadExt::one(),
            QuadExt::zero(),
            QuadExt::one(),
            QuadExt::sqrt2(),
        ],
    )
    .unwrap()
}

/// Matrix-recursion oracle: apply the twist matrices of the continued
/// fraction to the base point. Result is homogeneous (a positive multiple
/// of the closed form).
pub fn orthocubic_point_oracle(coeffs: &[i64]) -> Result<InvVec, NumthError> {
    if coeffs.is_empty()
        || coeffs[0] < 0
        || coeffs[1..].iter().any(|&a| a < 1)
    {
        return Err(NumthError::BadCoefficients);
    }
    let mut m = MobiusMap::identity(2);
    for &a in coeffs {
        m = m.compose(&twist_matrix(a));
    }
    Ok(m.apply(&base_point_vector())?)
}

/// Tangency point of the north-east corner edge of a tangle, projected to
/// the cutting plane.
pub fn ne_edge_tangency_point(t: &OrthoTangle) -> Result<[QuadExt; 2], BuildError> {
    let ne = t.end_id(Corner::NE);
    // the sphere adjacent to the NE corner along its strand
    let mut neighbor = None;
    for s in &t.strands {
        if s.from == Corner::NE {
            neighbor = Some(s.ids[1]);
        }
        if s.to == Corner::NE {
            neighbor = Some(s.ids[s.ids.len() - 2]);
        }
    }
    let nb = neighbor.ok_or_else(|| BuildError::Wiring("no NE strand".into()))?;
    let a = &t.spheres[ne].vec;
    let b = &t.spheres[nb].vec;
    let pt = tangency_point(a, b)?;
    Ok([pt[0].clone(), pt[1].clone()])
}

/// Contact point of two externally tangent spheres, exactly.
pub fn tangency_point(a: &InvVec, b: &InvVec) -> Result<Vec<QuadExt>, BuildError> {
    let (ca, ra) = match a.center_radius()? {
        CenterRadius::Sphere { center, radius, .. } => (center, radius),
        _ => return Err(BuildError::Wiring("halfspace has no finite center".into())),
    };
    let (cb, rb) = match b.center_radius()? {
        CenterRadius::Sphere { center, radius, .. } => (center, radius),
        _ => return Err(BuildError::Wiring("halfspace has no finite center".into())),
    };
    // p = (r_b·c_a + r_a·c_b) / (r_a + r_b)
    let denom = &ra + &rb;
    Ok(ca
        .iter()
        .zip(cb.iter())
        .map(|(x, y)| (&(&rb * x) + &(&ra * y)).div_exact(&denom).unwrap())
        .collect())
}

/// Solutions of x⁴ + y⁴ + z⁴ = 2t² parametrized by coprime pairs:
/// (p, q, p−q, p²−pq+q²). The boundary pair (1,1) yields the degenerate
/// tuple with z = 0 and is flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
    pub t: BigInt,
    pub degenerate: bool,
}

pub fn diophantine(limit: u64) -> Vec<QuarticSolution> {
    let mut out = Vec::new();
    for p in 1..=limit as i64 {
        for q in 1..=p {
            if q == p && p != 1 {
                continue;
            }
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let (bp, bq) = (BigInt::from(p), BigInt::from(q));
            let z = &bp - &bq;
            let t = &bp * &bp - &bp * &bq + &bq * &bq;
            let sol = QuarticSolution {
                x: bp.clone(),
                y: bq.clone(),
                z: z.clone(),
                t: t.clone(),
                degenerate: z.is_zero(),
            };
            // the defining identity and primitivity, asserted exactly
            let lhs = &sol.x.pow(4) + &sol.y.pow(4) + &sol.z.pow(4);
            let rhs = 2 * (&t * &t);
            assert_eq!(lhs, rhs, "parametrized tuple fails the quartic identity");
            let g = num_integer::gcd(
                num_integer::gcd(sol.x.clone(), sol.y.clone()),
                num_integer::gcd(sol.z.clone(), sol.t.clone()),
            );
            assert_eq!(g, BigInt::from(1), "tuple is not primitive");
            out.push(sol);
        }
    }
    out
}
