//! Problem representation on an exact integer grid.
//!
//! An instance asks for a 0/1 rounding of fractional values that keeps every
//! partial sum close to the true partial sum in *two* orders at once: the
//! given order and a second order described by a permutation `sigma`.  All
//! arithmetic happens on a common denominator `d`, so a value `x_k` is stored
//! as an integer numerator `y_k` with `0 <= y_k < d` plus an integer floor.
//! Deviations between true and rounded partial sums are then integers in
//! units of `1/d`, and every comparison in the crate is exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// All products `d * (n + 1)` and `d * (m + 1)` must stay below this bound,
/// which keeps every intermediate quantity (prefix sums, scaled rounded sums,
/// desirabilities, deviations) inside `i64`.
pub const GUARD_LIMIT: i128 = 1 << 62;

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction with a positive denominator.  Used for reported
/// quantities (discrepancies, thresholds as values, bottleneck values).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    /// Reduce `num/den` to lowest terms.  `den` must be positive.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "fraction denominator must be positive");
        let g = gcd(num, den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn zero() -> Self {
        Fraction { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        Fraction { num: 1, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let left = self.num as i128 * other.den as i128;
        let right = other.num as i128 * self.den as i128;
        left.cmp(&right)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    num: i64,
    den: i64,
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FractionRepr {
            num: self.num,
            den: self.den,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FractionRepr::deserialize(d)?;
        if repr.den <= 0 {
            return Err(D::Error::custom("fraction denominator must be positive"));
        }
        Ok(Fraction::new(repr.num, repr.den))
    }
}

/// An exact rational input value.  The denominator is kept exactly as given
/// (no reduction), because the common denominator of an instance is defined
/// as the lcm of the denominators *as written*.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::ParseValue(format!("{num}/{den}")));
        }
        Ok(Rational { num, den })
    }

    pub fn integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"3/28"`, `"0.1"`, `"-1.5"`, and plain integers.  Decimal
    /// strings become exact rationals over a power of ten; binary floating
    /// point never enters the picture.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseValue(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let apply = |num: i64, den: i64| -> Result<Rational> {
            Rational::new(if neg { -num } else { num }, den)
        };
        if let Some((a, b)) = body.split_once('/') {
            let num: i64 = a.parse().map_err(|_| bad())?;
            let den: i64 = b.parse().map_err(|_| bad())?;
            if num < 0 || den <= 0 {
                return Err(bad());
            }
            return apply(num, den);
        }
        if let Some((int_part, frac_part)) = body.split_once('.') {
            if frac_part.len() > 18 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let whole: i64 = if int_part.is_empty() {
                0
            } else {
                int_part.parse().map_err(|_| bad())?
            };
            if whole < 0 {
                return Err(bad());
            }
            let den = 10i64.pow(frac_part.len() as u32);
            let frac: i64 = if frac_part.is_empty() {
                0
            } else {
                frac_part.parse().map_err(|_| bad())?
            };
            let num = (whole as i128) * (den as i128) + frac as i128;
            if num >= GUARD_LIMIT {
                return Err(Error::Overflow(format!("value {t} is too large")));
            }
            return apply(num as i64, den);
        }
        let num: i64 = body.parse().map_err(|_| bad())?;
        if num < 0 {
            return Err(bad());
        }
        apply(num, 1)
    }
}

/// Which of the two orders a deviation was measured in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// The given order (partial sums `S_k`).
    Identity,
    /// The permuted order (partial sums over `sigma`).
    Permuted,
}

/// Maximum absolute deviation of a rounding, with the first prefix length and
/// side where it is attained.  `value` is always reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub value: Fraction,
    /// Prefix length `k` in `1..=n` where the maximum first occurs.
    pub prefix: usize,
    pub side: Side,
}

/// A 0/1 choice per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rounding {
    pub bits: Vec<u8>,
}

impl Rounding {
    pub fn new(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Rounding { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Flip every bit; pairs with [`ScaledProblem::complement`].
    pub fn complemented(&self) -> Rounding {
        Rounding {
            bits: self.bits.iter().map(|&b| 1 - b).collect(),
        }
    }

    /// User-facing rounded values: floors folded back onto the bits.
    pub fn folded(&self, p: &ScaledProblem) -> Vec<i64> {
        self.bits
            .iter()
            .zip(&p.floors)
            .map(|(&b, &f)| f + b as i64)
            .collect()
    }
}

/// Free-function form of [`Rounding::complemented`].
pub fn complement_rounding(r: &Rounding) -> Rounding {
    r.complemented()
}

/// Structural problems reported by [`ScaledProblem::validate`].  Violations
/// are data, not errors: callers decide what to do with them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    LengthMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    NumeratorOutOfRange {
        element: usize,
        value: i64,
    },
    SigmaNotBijective,
    SumNotMultiple {
        sum: i64,
    },
    PaddingShape,
    GuardExceeded,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "instance has no elements"),
            Violation::LengthMismatch {
                field,
                expected,
                actual,
            } => {
                write!(f, "{field} has length {actual}, expected {expected}")
            }
            Violation::NumeratorOutOfRange { element, value } => {
                write!(
                    f,
                    "numerator {value} of element {element} is outside [0, d)"
                )
            }
            Violation::SigmaNotBijective => write!(f, "sigma is not a permutation"),
            Violation::SumNotMultiple { sum } => {
                write!(
                    f,
                    "numerator sum {sum} is not a multiple of the denominator"
                )
            }
            Violation::PaddingShape => {
                write!(f, "padded instance must keep the synthetic element last")
            }
            Violation::GuardExceeded => write!(f, "denominator exceeds the overflow guard"),
        }
    }
}

/// Prefix sums of the numerators in both orders, each of length `n + 1` with
/// a leading zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSums {
    /// `identity[k]` = y_1 + ... + y_k.
    pub identity: Vec<i64>,
    /// `permuted[k]` = y_{sigma(1)} + ... + y_{sigma(k)}.
    pub permuted: Vec<i64>,
}

/// An instance on the common-denominator grid.
///
/// Invariants (checked by [`validate`](Self::validate), maintained by
/// [`normalize`]): `0 <= y_k < d`, `sigma` is a 0-based permutation of
/// `0..n`, the numerator sum equals `m * d`, and `d * (n + 1) < 2^62`.
/// If `padded` is set, the last element is synthetic: it was appended to make
/// the sum integral and `sigma` keeps it in final position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledProblem {
    pub d: i64,
    pub y: Vec<i64>,
    pub floors: Vec<i64>,
    /// 0-based permutation: position `p` in the second order holds element `sigma[p]`.
    pub sigma: Vec<usize>,
    /// Integral sum of the fractional parts: `sum(y) / d`.
    pub m: i64,
    pub padded: bool,
}

fn sigma_is_permutation(sigma: &[usize], n: usize) -> bool {
    if sigma.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return false;
        }
        seen[s] = true;
    }
    true
}

impl ScaledProblem {
    /// Assemble an instance without any checking; pair with
    /// [`validate`](Self::validate).  `m` is derived as `sum(y) / d` (floor).
    pub fn from_parts(
        d: i64,
        y: Vec<i64>,
        floors: Vec<i64>,
        sigma: Vec<usize>,
        padded: bool,
    ) -> Self {
        let sum: i128 = y.iter().map(|&v| v as i128).sum();
        let m = if d > 0 { (sum / d as i128) as i64 } else { 0 };
        ScaledProblem {
            d,
            y,
            floors,
            sigma,
            m,
            padded,
        }
    }

    /// [`from_parts`](Self::from_parts) followed by validation.
    pub fn checked(
        d: i64,
        y: Vec<i64>,
        floors: Vec<i64>,
        sigma: Vec<usize>,
        padded: bool,
    ) -> Result<Self> {
        let p = Self::from_parts(d, y, floors, sigma, padded);
        let violations = p.validate();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidProblem(violations))
        }
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Number of elements the caller originally supplied (excludes the
    /// synthetic balancing element, if any).
    pub fn original_len(&self) -> usize {
        self.n() - usize::from(self.padded)
    }

    /// Report every violated structural invariant.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n();
        if n == 0 {
            out.push(Violation::Empty);
            return out;
        }
        if self.floors.len() != n {
            out.push(Violation::LengthMismatch {
                field: "floors",
                expected: n,
                actual: self.floors.len(),
            });
        }
        if self.sigma.len() != n {
            out.push(Violation::LengthMismatch {
                field: "sigma",
                expected: n,
                actual: self.sigma.len(),
            });
        } else if !sigma_is_permutation(&self.sigma, n) {
            out.push(Violation::SigmaNotBijective);
        }
        if self.d < 1
            || (self.d as i128) * (n as i128 + 1) >= GUARD_LIMIT
            || (self.d as i128) * (self.m as i128 + 1) >= GUARD_LIMIT
        {
            out.push(Violation::GuardExceeded);
            return out;
        }
        for (k, &v) in self.y.iter().enumerate() {
            if v < 0 || v >= self.d {
                out.push(Violation::NumeratorOutOfRange {
                    element: k + 1,
                    value: v,
                });
            }
        }
        let sum: i128 = self.y.iter().map(|&v| v as i128).sum();
        if sum % self.d as i128 != 0 {
            out.push(Violation::SumNotMultiple { sum: sum as i64 });
        }
        if self.padded && self.sigma.len() == n && self.sigma.last() != Some(&(n - 1)) {
            out.push(Violation::PaddingShape);
        }
        out
    }

    /// Prefix sums of the numerators in both orders.
    pub fn prefix_sums(&self) -> PrefixSums {
        let n = self.n();
        let mut identity = Vec::with_capacity(n + 1);
        let mut permuted = Vec::with_capacity(n + 1);
        identity.push(0);
        permuted.push(0);
        let mut a = 0i64;
        let mut b = 0i64;
        for k in 0..n {
            a += self.y[k];
            b += self.y[self.sigma[k]];
            identity.push(a);
            permuted.push(b);
        }
        PrefixSums { identity, permuted }
    }

    /// Maximum absolute deviation of the rounded partial sums from the true
    /// partial sums, over both orders, as a reduced fraction over `d`.
    ///
    /// Floors cancel in every deviation, so only the bits matter.  A rounding
    /// satisfies the floor/ceiling condition in both orders exactly when the
    /// returned value is below 1.
    pub fn discrepancy(&self, r: &Rounding) -> Result<DiscrepancyReport> {
        let n = self.n();
        if r.bits.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: r.bits.len(),
            });
        }
        let sums = self.prefix_sums();
        let mut best: i64 = -1;
        let mut prefix = 1;
        let mut side = Side::Identity;
        let mut rounded = 0i64;
        for k in 1..=n {
            rounded += r.bits[k - 1] as i64;
            let dev = (sums.identity[k] - self.d * rounded).abs();
            if dev > best {
                best = dev;
                prefix = k;
                side = Side::Identity;
            }
        }
        rounded = 0;
        for k in 1..=n {
            rounded += r.bits[self.sigma[k - 1]] as i64;
            let dev = (sums.permuted[k] - self.d * rounded).abs();
            if dev > best {
                best = dev;
                prefix = k;
                side = Side::Permuted;
            }
        }
        Ok(DiscrepancyReport {
            value: Fraction::new(best, self.d),
            prefix,
            side,
        })
    }

    /// The reflected instance `x -> 1 - x`: numerators `d - y_k`, same
    /// `sigma`, integral sum `n - m`.  Requires every `y_k` to be nonzero.
    /// Discrepancy is preserved under complementing both the instance and a
    /// rounding.
    pub fn complement(&self) -> Result<ScaledProblem> {
        for (k, &v) in self.y.iter().enumerate() {
            if v == 0 {
                return Err(Error::ZeroElement { element: k + 1 });
            }
        }
        Ok(ScaledProblem {
            d: self.d,
            y: self.y.iter().map(|&v| self.d - v).collect(),
            floors: self.floors.clone(),
            sigma: self.sigma.clone(),
            m: self.n() as i64 - self.m,
            padded: self.padded,
        })
    }
}

fn lcm_checked(a: i64, b: i64) -> Result<i64> {
    let g = gcd(a, b).max(1);
    let v = (a as i128 / g as i128) * b as i128;
    if v >= GUARD_LIMIT {
        return Err(Error::Overflow(format!(
            "common denominator lcm({a}, {b}) exceeds 2^62"
        )));
    }
    Ok(v as i64)
}

/// Build a [`ScaledProblem`] from exact rational values and a 0-based
/// permutation.
///
/// The common denominator is the lcm of the denominators as given.  Values
/// are floor-split, so anything outside `[0, 1)` contributes to `floors` and
/// leaves a fractional part in `[0, 1)`.  If the fractional parts do not sum
/// to an integer, one synthetic element is appended to make them, with
/// `sigma` fixing it in final position; `padded` records this.
pub fn normalize(values: &[Rational], sigma: &[usize]) -> Result<ScaledProblem> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if sigma.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: sigma.len(),
        });
    }
    if !sigma_is_permutation(sigma, n) {
        return Err(Error::NonBijectiveSigma(format!("{sigma:?}")));
    }

    let mut d = 1i64;
    for v in values {
        d = lcm_checked(d, v.den)?;
    }
    // Room for the synthetic element: guard with n + 2 so that the padded
    // instance still satisfies d * (n + 1) < 2^62.
    if (d as i128) * (n as i128 + 2) >= GUARD_LIMIT {
        return Err(Error::Overflow(format!(
            "denominator {d} is too large for {n} elements"
        )));
    }

    let mut y = Vec::with_capacity(n + 1);
    let mut floors = Vec::with_capacity(n + 1);
    for v in values {
        let scaled = v.num as i128 * (d / v.den) as i128;
        let floor = scaled.div_euclid(d as i128);
        let rem = scaled.rem_euclid(d as i128) as i64;
        if floor.abs() >= GUARD_LIMIT {
            return Err(Error::Overflow(format!(
                "value {}/{} is too large",
                v.num, v.den
            )));
        }
        floors.push(floor as i64);
        y.push(rem);
    }

    let sum: i64 = y.iter().sum();
    let m = (sum + d - 1) / d; // ceil
    let pad = m * d - sum;
    let mut sigma = sigma.to_vec();
    let mut padded = false;
    if pad > 0 {
        y.push(pad);
        floors.push(0);
        sigma.push(n);
        padded = true;
    }

    let p = ScaledProblem {
        d,
        y,
        floors,
        sigma,
        m,
        padded,
    };
    debug_assert!(p.validate().is_empty());
    Ok(p)
}

/// Parse each string with [`Rational::from_str`] and [`normalize`].
pub fn normalize_strings(values: &[String], sigma: &[usize]) -> Result<ScaledProblem> {
    let parsed: Result<Vec<Rational>> = values.iter().map(|s| s.parse()).collect();
    normalize(&parsed?, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn worked_values() -> (Vec<Rational>, Vec<usize>) {
        let values = ["8/28", "8/28", "24/28", "11/28", "11/28", "11/28", "11/28"]
            .iter()
            .map(|s| r(s))
            .collect();
        (values, vec![1, 0, 2, 4, 3, 6, 5])
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(r("3/28"), Rational { num: 3, den: 28 });
        assert_eq!(r("0.1"), Rational { num: 1, den: 10 });
        assert_eq!(r("2"), Rational { num: 2, den: 1 });
        assert_eq!(r("-1.5"), Rational { num: -15, den: 10 });
        assert_eq!(r(".25"), Rational { num: 25, den: 100 });
        assert_eq!(r("1.0"), Rational { num: 10, den: 10 });
        for bad in ["", "1/0", "x", "1e5", "1/-3", "--2", "0.1.2"] {
            assert!(Rational::from_str(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn fraction_reduces_and_orders() {
        assert_eq!(Fraction::new(20, 28), Fraction::new(5, 7));
        assert_eq!(Fraction::new(0, 9), Fraction::zero());
        assert_eq!(Fraction::new(20, 28).to_string(), "5/7");
        assert!(Fraction::new(1, 3) < Fraction::new(2, 5));
        assert!(Fraction::new(9, 10) < Fraction::one());
        let json = serde_json::to_string(&Fraction::new(20, 28)).unwrap();
        assert_eq!(json, r#"{"num":5,"den":7}"#);
        let back: Fraction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Fraction::new(5, 7));
        assert!(serde_json::from_str::<Fraction>(r#"{"num":1,"den":0}"#).is_err());
    }

    #[test]
    fn normalizes_the_seven_element_fixture() {
        let (values, sigma) = worked_values();
        let p = normalize(&values, &sigma).unwrap();
        assert_eq!(p.d, 28);
        assert_eq!(p.y, vec![8, 8, 24, 11, 11, 11, 11]);
        assert_eq!(p.floors, vec![0; 7]);
        assert_eq!(p.m, 3);
        assert!(!p.padded);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn normalizes_integer_values_to_zero_numerators() {
        let values = vec![r("0.0"), r("1.0"), r("2.0")];
        let p = normalize(&values, &[0, 1, 2]).unwrap();
        assert_eq!(p.y, vec![0, 0, 0]);
        assert_eq!(p.floors, vec![0, 1, 2]);
        assert_eq!(p.m, 0);
        assert!(!p.padded);
    }

    #[test]
    fn pads_a_non_integral_sum() {
        let values = vec![r("1/4"), r("2/4"), r("2/4")];
        let p = normalize(&values, &[0, 2, 1]).unwrap();
        assert_eq!(p.d, 4);
        assert_eq!(p.y, vec![1, 2, 2, 3]);
        assert_eq!(p.sigma, vec![0, 2, 1, 3]);
        assert_eq!(p.m, 2);
        assert!(p.padded);
        assert_eq!(p.original_len(), 3);
        // The synthetic element is exactly the gap up to the next integer.
        let sum_before: i64 = p.y[..3].iter().sum();
        assert_eq!(*p.y.last().unwrap(), p.m * p.d - sum_before);
    }

    #[test]
    fn floor_splits_values_outside_the_unit_interval() {
        let values = vec![r("-0.25"), r("1.5"), r("2.75")];
        let p = normalize(&values, &[0, 1, 2]).unwrap();
        assert_eq!(p.d, 100);
        assert_eq!(p.floors, vec![-1, 1, 2]);
        assert_eq!(p.y, vec![75, 50, 75]);
        assert_eq!(p.m, 2);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert!(matches!(normalize(&[], &[]), Err(Error::EmptyInput)));
        let vals = vec![r("1/2"), r("1/2")];
        assert!(matches!(
            normalize(&vals, &[0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            normalize(&vals, &[0, 0]),
            Err(Error::NonBijectiveSigma(_))
        ));
        let huge = vec![
            Rational::new(1, (1i64 << 61) - 1).unwrap(),
            Rational::new(1, (1i64 << 61) - 3).unwrap(),
        ];
        assert!(matches!(normalize(&huge, &[0, 1]), Err(Error::Overflow(_))));
    }

    #[test]
    fn prefix_sums_of_the_fixture() {
        let (values, sigma) = worked_values();
        let p = normalize(&values, &sigma).unwrap();
        let sums = p.prefix_sums();
        assert_eq!(sums.identity, vec![0, 8, 16, 40, 51, 62, 73, 84]);
        assert_eq!(sums.permuted, vec![0, 8, 16, 40, 51, 62, 73, 84]);
    }

    #[test]
    fn prefix_sums_of_the_tight_even_family() {
        // n = 10 instance with optimum 9/10; numerators over d = 10.
        let y = vec![1, 1, 1, 2, 2, 2, 7, 8, 8, 8];
        let sigma = vec![1, 0, 6, 3, 7, 4, 8, 5, 9, 2];
        let p = ScaledProblem::checked(10, y, vec![0; 10], sigma, false).unwrap();
        let sums = p.prefix_sums();
        assert_eq!(sums.identity, vec![0, 1, 2, 3, 5, 7, 9, 16, 24, 32, 40]);
        assert_eq!(sums.permuted, vec![0, 1, 2, 9, 11, 19, 21, 29, 31, 39, 40]);
    }

    #[test]
    fn discrepancy_of_fixture_rounding() {
        let (values, sigma) = worked_values();
        let p = normalize(&values, &sigma).unwrap();
        let rep = p
            .discrepancy(&Rounding::new(vec![1, 0, 1, 0, 0, 1, 0]))
            .unwrap();
        assert_eq!(rep.value, Fraction::new(20, 28));
        assert_eq!(rep.value, Fraction::new(5, 7));
        assert_eq!(rep.prefix, 1);
        assert_eq!(rep.side, Side::Identity);
    }

    #[test]
    fn discrepancy_of_tight_even_family_rounding() {
        let y = vec![1, 1, 1, 2, 2, 2, 7, 8, 8, 8];
        let sigma = vec![1, 0, 6, 3, 7, 4, 8, 5, 9, 2];
        let p = ScaledProblem::checked(10, y, vec![0; 10], sigma, false).unwrap();
        let rep = p
            .discrepancy(&Rounding::new(vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 1]))
            .unwrap();
        assert_eq!(rep.value, Fraction::new(9, 10));
    }

    #[test]
    fn discrepancy_of_all_integer_instance_is_zero() {
        let p = normalize(&[r("0.0"), r("1.0"), r("2.0")], &[0, 1, 2]).unwrap();
        let rep = p.discrepancy(&Rounding::new(vec![0, 0, 0])).unwrap();
        assert_eq!(rep.value, Fraction::zero());
    }

    #[test]
    fn discrepancy_checks_length() {
        let p = normalize(&[r("1/2"), r("1/2")], &[0, 1]).unwrap();
        assert!(matches!(
            p.discrepancy(&Rounding::new(vec![1])),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 1
            })
        ));
    }

    #[test]
    fn complement_reflects_numerators() {
        let (values, sigma) = worked_values();
        let p = normalize(&values, &sigma).unwrap();
        let c = p.complement().unwrap();
        assert_eq!(c.y, vec![20, 20, 4, 17, 17, 17, 17]);
        assert_eq!(c.m, 4);
        assert_eq!(c.sigma, p.sigma);
        assert!(c.validate().is_empty());

        let r0 = Rounding::new(vec![1, 0, 1, 0, 0, 1, 0]);
        let a = p.discrepancy(&r0).unwrap().value;
        let b = c.discrepancy(&r0.complemented()).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn complement_rejects_zero_numerators() {
        let p = normalize(&[r("0.0"), r("0.5"), r("0.5")], &[0, 1, 2]).unwrap();
        assert!(matches!(
            p.complement(),
            Err(Error::ZeroElement { element: 1 })
        ));
    }

    #[test]
    fn validate_reports_violations() {
        let good =
            ScaledProblem::from_parts(4, vec![1, 2, 2, 3], vec![0; 4], vec![0, 2, 1, 3], true);
        assert!(good.validate().is_empty());

        let dup = ScaledProblem::from_parts(4, vec![2, 2], vec![0; 2], vec![0, 0], false);
        assert_eq!(dup.validate(), vec![Violation::SigmaNotBijective]);

        let bad_sum = ScaledProblem::from_parts(4, vec![1, 2], vec![0; 2], vec![0, 1], false);
        assert_eq!(
            bad_sum.validate(),
            vec![Violation::SumNotMultiple { sum: 3 }]
        );

        let out_of_range =
            ScaledProblem::from_parts(4, vec![4, 2, 2], vec![0; 3], vec![0, 1, 2], false);
        assert_eq!(
            out_of_range.validate(),
            vec![Violation::NumeratorOutOfRange {
                element: 1,
                value: 4
            }]
        );

        let bad_pad =
            ScaledProblem::from_parts(4, vec![3, 1, 2, 2], vec![0; 4], vec![3, 1, 2, 0], true);
        assert!(bad_pad.validate().contains(&Violation::PaddingShape));

        let empty = ScaledProblem::from_parts(1, vec![], vec![], vec![], false);
        assert_eq!(empty.validate(), vec![Violation::Empty]);
    }
}
