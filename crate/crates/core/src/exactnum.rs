//! Exact arithmetic in the quadratic field Q(√2).
//!
//! Every coordinate in this crate is a [`QuadExt`], an exact value `a + b√2`
//! with arbitrary-precision rational `a`, `b`. There is no floating point
//! anywhere in the geometric pipeline; decimal output is produced on demand
//! by [`QuadExt::approx`] with correct rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Arbitrary-precision rational, stored reduced with positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational p/q. Panics on q = 0.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, NumError> {
    let s = s.trim();
    let bad = || NumError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(NumError::DivisionByZero);
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p = BigInt::from_str(s).map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Exact element `a + b√2` of Q(√2).
///
/// The representation is unique: both parts are reduced rationals, so
/// structural equality and hashing agree with numeric equality. `Ord` is
/// the numeric order, decided by exact sign computations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadExt { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QuadExt::new(rat(n), rat(0))
    }

    pub fn from_rat(a: Rat) -> Self {
        QuadExt::new(a, rat(0))
    }

    /// a + b√2 from integer pairs (a_num/a_den, b_num/b_den).
    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QuadExt::new(ratio(an, ad), ratio(bn, bd))
    }

    pub fn zero() -> Self {
        QuadExt::from_int(0)
    }

    pub fn one() -> Self {
        QuadExt::from_int(1)
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        QuadExt::new(rat(0), rat(1))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate a − b√2.
    pub fn conj(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm a² − 2b², a rational.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat(2) * &self.b * &self.b
    }

    /// Exact sign of a + b√2 as −1, 0, +1.
    ///
    /// When the two parts agree in sign the answer is immediate; otherwise
    /// it is sign(a)·sign(a² − 2b²), which compares a² against 2b² without
    /// leaving the rationals.
    pub fn signum(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        sa * rat_sign(&self.norm())
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // 1/(a+b√2) = (a−b√2)/(a²−2b²); the norm is nonzero because √2 is
        // irrational, so a² = 2b² only at zero.
        let n = self.norm();
        Ok(QuadExt::new(&self.a / &n, -&self.b / &n))
    }

    pub fn div_exact(&self, rhs: &Self) -> Result<Self, NumError> {
        Ok(self * &rhs.recip()?)
    }

    /// Exact square root in Q(√2), if one exists; the nonnegative root.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(QuadExt::zero());
        }
        // (x + y√2)² = (x² + 2y²) + 2xy√2. With x ≠ 0, x² is a root of
        // T² − aT + b²/2, so x² = (a ± √(a²−2b²))/2. With x = 0 we need
        // b = 0 and a = 2y².
        if let Some(sq) = rat_sqrt(&self.norm()) {
            for t in [(&self.a + &sq) / rat(2), (&self.a - &sq) / rat(2)] {
                if t.is_negative() {
                    continue;
                }
                if let Some(x) = rat_sqrt(&t) {
                    if x.is_zero() {
                        continue;
                    }
                    let y = &self.b / (rat(2) * &x);
                    let cand = QuadExt::new(x, y);
                    if &(&cand * &cand) == self {
                        return Some(cand.abs());
                    }
                }
            }
        }
        if self.b.is_zero() {
            if let Some(y) = rat_sqrt(&(&self.a / rat(2))) {
                let cand = QuadExt::new(rat(0), y);
                if &(&cand * &cand) == self {
                    return Some(cand.abs());
                }
            }
        }
        None
    }

    /// Correctly rounded decimal approximation with `digits` fractional
    /// digits, rounding half away from zero.
    pub fn approx(&self, digits: usize) -> String {
        let neg = self.signum() < 0;
        let v = self.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = QuadExt::new(
            &v.a * Rat::from_integer(scale.clone()) + ratio(1, 2),
            &v.b * Rat::from_integer(scale.clone()),
        );
        let m = scaled.floor_int();
        let (ip, fp) = m.div_mod_floor(&scale);
        let sign = if neg && !m.is_zero() { "-" } else { "" };
        if digits == 0 {
            return format!("{sign}{ip}");
        }
        let frac_str = fp.to_string();
        let pad = digits - frac_str.len().min(digits);
        format!("{sign}{ip}.{}{frac_str}", "0".repeat(pad))
    }

    /// Exact floor as a big integer.
    pub fn floor_int(&self) -> BigInt {
        // self = p/q + (r/s)√2 ⟹ floor((P + R√2)/D) with P = ps, R = rq,
        // D = qs > 0. Guess from floor(R√2), then fix up exactly.
        let p = self.a.numer();
        let q = self.a.denom();
        let r = self.b.numer();
        let s = self.b.denom();
        let num_rat = p * s;
        let num_irr = r * q;
        let den = q * s;
        let fl_irr = floor_sqrt2_multiple(&num_irr);
        let mut n = (&num_rat + &fl_irr).div_floor(&den);
        while (self - &QuadExt::from_rat(Rat::from_integer(&n + 1i32))).signum() >= 0 {
            n += 1i32;
        }
        while (self - &QuadExt::from_rat(Rat::from_integer(n.clone()))).signum() < 0 {
            n -= 1i32;
        }
        n
    }

    /// f64 value, for rendering only.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// floor(R√2) for a big integer R.
fn floor_sqrt2_multiple(r: &BigInt) -> BigInt {
    if r.is_zero() {
        return BigInt::zero();
    }
    let two_r2 = 2i32 * r * r;
    let root = two_r2.sqrt();
    if r.is_positive() {
        root
    } else {
        // floor(−x) = −ceil(x); 2R² is never a perfect square for R ≠ 0.
        -root - 1i32
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(rat(0));
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

macro_rules! impl_binop {
    ($trait:ident, $m:ident, |$x:ident, $y:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'b QuadExt) -> QuadExt {
                let ($x, $y) = (self, rhs);
                $body
            }
        }
        impl $trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                $trait::$m(&self, &rhs)
            }
        }
        impl<'b> $trait<&'b QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'b QuadExt) -> QuadExt {
                $trait::$m(&self, rhs)
            }
        }
        impl<'a> $trait<QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                $trait::$m(self, &rhs)
            }
        }
    };
}

impl_binop!(Add, add, |x, y| QuadExt::new(&x.a + &y.a, &x.b + &y.b));
impl_binop!(Sub, sub, |x, y| QuadExt::new(&x.a - &y.a, &x.b - &y.b));
impl_binop!(Mul, mul, |x, y| QuadExt::new(
    &x.a * &y.a + rat(2) * &x.b * &y.b,
    &x.a * &y.b + &x.b * &y.a
));
impl_binop!(Div, div, |x, y| x.div_exact(y).expect("division by zero"));

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a, -self.b)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self - other).signum().cmp(&0)
    }
}

fn fmt_quadext(x: &QuadExt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.b.is_zero() {
        return write!(f, "{}", x.a);
    }
    if x.a.is_zero() {
        return write!(f, "{}√2", x.b);
    }
    if x.b.is_negative() {
        write!(f, "{}{}√2", x.a, x.b)
    } else {
        write!(f, "{}+{}√2", x.a, x.b)
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_quadext(self, f)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_quadext(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qe(an: i64, ad: i64, bn: i64, bd: i64) -> QuadExt {
        QuadExt::from_parts(an, ad, bn, bd)
    }

    #[test]
    fn product_difference_of_squares() {
        // (1+√2)(−1+√2) = 1
        let x = qe(1, 1, 1, 1);
        let y = qe(-1, 1, 1, 1);
        assert_eq!(&x * &y, QuadExt::one());
    }

    #[test]
    fn reciprocal_of_sqrt2() {
        // 1/√2 = (1/2)√2
        let r = QuadExt::sqrt2().recip().unwrap();
        assert_eq!(r, qe(0, 1, 1, 2));
    }

    #[test]
    fn bend_of_small_base_sphere() {
        // 1 + 1/√2 computed as 1 + (1/2)√2
        let one_over_sqrt2 = QuadExt::one().div_exact(&QuadExt::sqrt2()).unwrap();
        let bend = QuadExt::one() + one_over_sqrt2;
        assert_eq!(bend, qe(1, 1, 1, 2));
    }

    #[test]
    fn signs() {
        assert_eq!(qe(1, 1, -1, 1).signum(), -1); // 1 − √2 < 0
        assert_eq!(qe(3, 1, -2, 1).signum(), 1); // 3 − 2√2 > 0
        assert_eq!(QuadExt::zero().signum(), 0);
        assert_eq!(qe(-3, 1, 2, 1).signum(), -1);
        assert_eq!(qe(-1, 1, 1, 1).signum(), 1); // √2 − 1 > 0
    }

    #[test]
    fn conjugation() {
        let x = qe(1, 1, 1, 1);
        assert_eq!(x.conj(), qe(1, 1, -1, 1));
        assert_eq!(x.conj().conj(), x);
        let p = &x * &x.conj();
        assert!(p.is_rational());
        assert_eq!(p.a, x.norm());
    }

    #[test]
    fn approx_goldens() {
        assert_eq!(qe(1, 1, 1, 1).approx(4), "2.4142");
        // 1 − 1/√2 ≈ 0.292893…
        assert_eq!(qe(1, 1, -1, 2).approx(3), "0.293");
        assert_eq!(QuadExt::zero().approx(2), "0.00");
        assert_eq!(qe(-1, 1, -1, 1).approx(3), "-2.414");
        assert_eq!(qe(1, 2, 0, 1).approx(1), "0.5");
        assert_eq!(qe(-1, 4, 0, 1).approx(1), "-0.3"); // half away from zero
    }

    #[test]
    fn floor_works_on_negatives() {
        assert_eq!(qe(0, 1, -1, 1).floor_int(), BigInt::from(-2)); // −√2
        assert_eq!(qe(3, 1, 0, 1).floor_int(), BigInt::from(3));
        assert_eq!(qe(-1, 2, 0, 1).floor_int(), BigInt::from(-1));
    }

    #[test]
    fn sqrt_exact_examples() {
        // 3+2√2 = (1+√2)²
        assert_eq!(qe(3, 1, 2, 1).sqrt_exact().unwrap(), qe(1, 1, 1, 1));
        assert_eq!(qe(2, 1, 0, 1).sqrt_exact().unwrap(), QuadExt::sqrt2());
        assert_eq!(qe(1, 4, 0, 1).sqrt_exact().unwrap(), qe(1, 2, 0, 1));
        assert!(qe(2, 1, 1, 1).sqrt_exact().is_none());
        // ((1/2)√2)² = 1/2
        assert_eq!(qe(1, 2, 0, 1).sqrt_exact().unwrap(), qe(0, 1, 1, 2));
    }

    #[test]
    fn sign_agrees_with_decimal_for_many_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let x = qe(
                rng.gen_range(-50..50),
                rng.gen_range(1..20),
                rng.gen_range(-50..50),
                rng.gen_range(1..20),
            );
            if x.is_zero() {
                continue;
            }
            let dec = x.approx(30);
            let dec_neg = dec.starts_with('-');
            let all_zero = dec.chars().all(|c| c == '0' || c == '.' || c == '-');
            assert!(!all_zero, "sample unexpectedly rounds to zero: {x}");
            assert_eq!(x.signum() < 0, dec_neg, "{x} vs {dec}");
        }
    }

    fn arb_quadext() -> impl Strategy<Value = QuadExt> {
        (-40i64..40, 1i64..12, -40i64..40, 1i64..12)
            .prop_map(|(an, ad, bn, bd)| qe(an, ad, bn, bd))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_quadext(), y in arb_quadext(), z in arb_quadext()) {
            prop_assert_eq!((&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &x * &y + &x * &z);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.recip().unwrap(), QuadExt::one());
            }
        }

        #[test]
        fn conj_is_ring_hom(x in arb_quadext(), y in arb_quadext()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        }

        #[test]
        fn order_is_numeric(x in arb_quadext(), y in arb_quadext()) {
            let d = &x - &y;
            match x.cmp(&y) {
                std::cmp::Ordering::Less => prop_assert!(d.is_negative()),
                std::cmp::Ordering::Equal => prop_assert!(d.is_zero()),
                std::cmp::Ordering::Greater => prop_assert!(d.is_positive()),
            }
        }
    }
}
