//! Rigorous enclosures of `pi` and of complex arguments, via fixed-point
//! arctangent series with explicit error accounting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::roots::{sqrt_bounds, BoxedRoot};

/// `atan(x)` for `0 <= x <= 1/2` given as a fixed-point integer with `prec`
/// fractional bits. Returns the truncated value and an error bound in ulps.
fn atan_small(x: &BigInt, prec: u64) -> (BigInt, u64) {
    let x2 = (x * x) >> prec;
    let mut term = x.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut ulps = 0;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term = (&term * &x2) >> prec;
        k += 1;
        // one truncation in the power, one in the division, one in x2's effect
        ulps += 3;
    }
    // the alternating tail beyond the last nonzero term is below one ulp
    (sum, ulps + 1)
}

/// `atan(x)` for `0 <= x <= 1` in fixed point, with an ulp error bound.
/// The input itself is assumed exact.
fn atan_unit(x: &BigInt, prec: u64) -> (BigInt, u64) {
    let half = BigInt::one() << (prec - 1);
    if *x <= half {
        return atan_small(x, prec);
    }
    // atan(x) = atan(1/2) + atan((x - 1/2) / (1 + x/2)); the reduced argument lies in [0, 1/5]
    let (a_half, e1) = atan_small(&half, prec);
    let num = (x - &half) << prec;
    let den = (BigInt::one() << prec) + (x >> 1);
    let y = num / den;
    let (a_y, e2) = atan_small(&y, prec);
    // truncation of y costs at most 2 ulps through the Lipschitz bound
    (a_half + a_y, e1 + e2 + 2)
}

/// Rational interval `[lo, hi]` containing `pi`, of width about `2^-bits`.
pub fn pi_bounds(bits: u64) -> (BigRational, BigRational) {
    let prec = bits + 32;
    let one = BigInt::one() << prec;
    let x5 = &one / BigInt::from(5);
    let x239 = &one / BigInt::from(239);
    let (a5, e5) = atan_small(&x5, prec);
    let (a239, e239) = atan_small(&x239, prec);
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239); input truncation adds 1 ulp each
    let v = a5 * 16 - a239 * 4;
    let err = 16 * (e5 + 1) + 4 * (e239 + 1);
    enclose(&v, err, prec)
}

fn enclose(v: &BigInt, err: u64, prec: u64) -> (BigRational, BigRational) {
    let den = BigInt::one() << prec;
    let e = BigInt::from(err);
    (BigRational::new(v - &e, den.clone()), BigRational::new(v + &e, den))
}

/// Interval for `arg(re + i im) / (2 pi)` when `im > 0`, so the value lies in `(0, 1/2)`.
pub fn turn_bounds(re: &BigRational, im: &BigRational, bits: u64) -> (BigRational, BigRational) {
    assert!(im.is_positive(), "argument enclosure needs a point in the upper half plane");
    let prec = bits + 32;
    let ar = re.abs();
    let ai = im.abs();
    let half_pi = || {
        let (lo, hi) = pi_bounds(prec);
        (lo / BigInt::from(2), hi / BigInt::from(2))
    };
    // angle of (|re|, im) in [0, pi/2]
    let (t_lo, t_hi) = if ar.is_zero() {
        half_pi()
    } else if ai <= ar {
        let x = ((&ai / &ar) * BigRational::from_integer(BigInt::one() << prec)).floor().to_integer();
        let (v, e) = atan_unit(&x, prec);
        enclose(&v, e + 1, prec)
    } else {
        let x = ((&ar / &ai) * BigRational::from_integer(BigInt::one() << prec)).floor().to_integer();
        let (v, e) = atan_unit(&x, prec);
        let (a_lo, a_hi) = enclose(&v, e + 1, prec);
        let (h_lo, h_hi) = half_pi();
        (h_lo - a_hi, h_hi - a_lo)
    };
    let (p_lo, p_hi) = pi_bounds(prec);
    let (t_lo, t_hi) = if re.is_negative() { (&p_lo - t_hi, &p_hi - t_lo) } else { (t_lo, t_hi) };
    let two = BigInt::from(2);
    let lo = t_lo.max(BigRational::zero()) / (&p_hi * &two);
    let hi = t_hi / (&p_lo * &two);
    (lo, hi)
}

/// Interval for `arg(z) / (2 pi)` valid for every `z` in the disk, which must
/// lie in the upper half plane and avoid the origin.
pub fn disk_turn_bounds(b: &BoxedRoot, bits: u64) -> Option<(BigRational, BigRational)> {
    if !b.im.is_positive() {
        return None;
    }
    let (c_lo, _) = sqrt_bounds(&b.center_abs_sq(), bits + 16);
    if c_lo <= b.radius {
        return None;
    }
    let (lo, hi) = turn_bounds(&b.re, &b.im, bits);
    // |arg z - arg c| <= asin(r/|c|) <= (pi/2) r/|c|, i.e. r/(4|c|) turns
    let delta = &b.radius / (c_lo * BigInt::from(4));
    Some((lo - &delta, hi + delta))
}

/// Round a rational to the nearest integer (ties away from zero).
pub fn round_rational(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = x.numer() * &two + x.denom();
    let d = x.denom() * &two;
    n.div_floor(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pi_enclosure() {
        let (lo, hi) = pi_bounds(200);
        // 355/113 is above pi, 333/106 below
        assert!(hi < rat(355, 113));
        assert!(lo > rat(333, 106));
        assert!(&hi - &lo < BigRational::new(BigInt::one(), BigInt::one() << 190));
    }

    #[test]
    fn known_angles() {
        // i -> 1/4, 1 + i -> 1/8, -1 + i -> 3/8, -1 + sqrt(3) i ~ 1/3
        for (re, im, want) in [(0, 1, rat(1, 4)), (1, 1, rat(1, 8)), (-1, 1, rat(3, 8))] {
            let (lo, hi) = turn_bounds(&rat(re, 1), &rat(im, 1), 100);
            assert!(lo <= want && want <= hi, "{re} {im}");
            assert!(&hi - &lo < rat(1, 1 << 30));
        }
        let (lo, hi) = turn_bounds(&rat(1, 2), &rat(866_025_403_784, 1_000_000_000_000), 80);
        assert!(lo < rat(1, 6) + rat(1, 1_000_000) && hi > rat(1, 6) - rat(1, 1_000_000));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_rational(&rat(5, 2)), BigInt::from(3));
        assert_eq!(round_rational(&rat(-5, 2)), BigInt::from(-2));
        assert_eq!(round_rational(&rat(7, 3)), BigInt::from(2));
    }
}
