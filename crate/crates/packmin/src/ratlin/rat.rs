//! Rational scalars and the handful of exact numeric helpers the rest of the
//! crate leans on: integer square roots, certified rational bounds for square
//! roots, and rational lower bounds for unit ball volumes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator (enforced by the underlying representation).
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_i(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// Floor of the square root of a non-negative integer.
pub fn int_sqrt_floor(n: &Int) -> Int {
    assert!(!n.is_negative(), "int_sqrt_floor of negative value");
    n.sqrt()
}

/// Largest rational of the form m/den with m integer that is <= sqrt(q).
/// Uses sqrt(p/s) = sqrt(p*s)/s.
pub fn sqrt_lower(q: &Rat) -> Rat {
    assert!(!q.is_negative());
    let ps = q.numer() * q.denom();
    Rat::new(int_sqrt_floor(&ps), q.denom().clone())
}

/// A rational certified to be >= sqrt(q).
pub fn sqrt_upper(q: &Rat) -> Rat {
    assert!(!q.is_negative());
    let ps = q.numer() * q.denom();
    let r = int_sqrt_floor(&ps);
    if &r * &r == ps {
        Rat::new(r, q.denom().clone())
    } else {
        Rat::new(r + 1, q.denom().clone())
    }
}

/// If q is the square of a rational, returns that (non-negative) square root.
pub fn is_perfect_square(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let sn = int_sqrt_floor(q.numer());
    let sd = int_sqrt_floor(q.denom());
    if &sn * &sn == *q.numer() && &sd * &sd == *q.denom() {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// "p/q" (or plain "p") rendering, lossless.
pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse "p/q" or "p". Denominator must be nonzero.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = n.parse().ok()?;
    let den: Int = d.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

/// 3.14159265358979 <= pi
pub fn pi_lb() -> Rat {
    Rat::new(Int::from(314159265358979i64), Int::from(100000000000000i64))
}

/// pi <= 3.14159265358980
pub fn pi_ub() -> Rat {
    Rat::new(Int::from(314159265358980i64), Int::from(100000000000000i64))
}

pub const PI_LB: fn() -> Rat = pi_lb;
pub const PI_UB: fn() -> Rat = pi_ub;

fn factorial(n: u64) -> Int {
    let mut f = Int::one();
    for k in 2..=n {
        f *= Int::from(k);
    }
    f
}

/// Rational lower bound on the volume of the i-dimensional Euclidean unit
/// ball. vol(B_{2m}) = pi^m/m!, vol(B_{2m+1}) = 2^{2m+1} m! pi^m / (2m+1)!.
/// Any lower bound keeps the determinant caps conservative, so enumeration
/// stays complete.
pub fn ball_volume_lb(dim: usize) -> Rat {
    let d = dim as u64;
    if dim == 0 {
        return Rat::one();
    }
    let m = d / 2;
    let mut pim = Rat::one();
    let plb = pi_lb();
    for _ in 0..m {
        pim *= &plb;
    }
    if d % 2 == 0 {
        pim / Rat::from_integer(factorial(m))
    } else {
        let num = Int::from(2u32).pow(d as u32) * factorial(m);
        pim * Rat::new(num, factorial(d))
    }
}

/// Rational upper bound on gamma_k^k where gamma_k is Hermite's constant.
/// Exact known values for k <= 8; Minkowski's bound gamma_k^k <= 4^k/vol(B_k)^2
/// beyond that.
pub fn hermite_pow_ub(k: usize) -> Rat {
    match k {
        0 => Rat::one(),
        1 => rat_i(1),
        2 => rat(4, 3),
        3 => rat_i(2),
        4 => rat_i(4),
        5 => rat_i(8),
        6 => rat(64, 3),
        7 => rat_i(64),
        8 => rat_i(256),
        _ => {
            let v = ball_volume_lb(k);
            let four_k = Rat::from_integer(Int::from(4u32).pow(k as u32));
            four_k / (&v * &v)
        }
    }
}
