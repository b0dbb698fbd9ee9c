//! Rationals perturbed by powers of a positive infinitesimal `ε`.
//!
//! An [`EpsRat`] is the polynomial `c0 + c1·ε + c2·ε² + …`. Values compare
//! lexicographically on the coefficient sequence, which is the order they take
//! for every sufficiently small `ε > 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsRat {
    // trailing zeros are trimmed so that equality is structural
    coeffs: Vec<Rat>,
}

impl EpsRat {
    pub fn new(mut coeffs: Vec<Rat>) -> EpsRat {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        EpsRat { coeffs }
    }

    pub fn constant(c: Rat) -> EpsRat {
        EpsRat::new(vec![c])
    }

    pub fn zero() -> EpsRat {
        EpsRat { coeffs: Vec::new() }
    }

    /// `c · ε^degree`
    pub fn monomial(c: Rat, degree: usize) -> EpsRat {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        coeffs[degree] = c;
        EpsRat::new(coeffs)
    }

    /// Coefficient of `ε^d` (zero beyond the stored degree).
    pub fn coeff(&self, d: usize) -> Rat {
        self.coeffs.get(d).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Highest nonzero degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_part(&self) -> Rat {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Rat) -> EpsRat {
        EpsRat::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Numeric value at a concrete `ε`, for sanity checks only.
    pub fn eval_f64(&self, eps: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * eps + c.to_f64())
    }

    fn zip_with(&self, other: &EpsRat, f: impl Fn(&Rat, &Rat) -> Rat) -> EpsRat {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rat::zero();
        EpsRat::new(
            (0..len)
                .map(|d| {
                    f(
                        self.coeffs.get(d).unwrap_or(&zero),
                        other.coeffs.get(d).unwrap_or(&zero),
                    )
                })
                .collect(),
        )
    }
}

impl From<Rat> for EpsRat {
    fn from(c: Rat) -> EpsRat {
        EpsRat::constant(c)
    }
}

impl Ord for EpsRat {
    fn cmp(&self, other: &EpsRat) -> Ordering {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rat::zero();
        for d in 0..len {
            let a = self.coeffs.get(d).unwrap_or(&zero);
            let b = other.coeffs.get(d).unwrap_or(&zero);
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for EpsRat {
    fn partial_cmp(&self, other: &EpsRat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&EpsRat> for &EpsRat {
    type Output = EpsRat;
    fn add(self, rhs: &EpsRat) -> EpsRat {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&EpsRat> for &EpsRat {
    type Output = EpsRat;
    fn sub(self, rhs: &EpsRat) -> EpsRat {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &EpsRat {
    type Output = EpsRat;
    fn neg(self) -> EpsRat {
        EpsRat::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<&Rat> for &EpsRat {
    type Output = EpsRat;
    fn mul(self, rhs: &Rat) -> EpsRat {
        self.scale(rhs)
    }
}

impl fmt::Display for EpsRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ε")?,
                _ => write!(f, "({c})ε^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EpsRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(c: &[i64]) -> EpsRat {
        EpsRat::new(c.iter().map(|&v| Rat::from(v)).collect())
    }

    #[test]
    fn higher_terms_break_ties_only() {
        assert!(e(&[1, -100]) > e(&[0, 100]));
        assert!(e(&[0, 1]) > e(&[0, 0, 50]));
        assert!(e(&[2, 0, -1]) < e(&[2]));
        assert_eq!(e(&[3, 0, 0]), e(&[3]));
        assert_eq!(e(&[3, 0, 0]).cmp(&EpsRat::constant(Rat::from(3))), Ordering::Equal);
    }

    #[test]
    fn arithmetic_is_coefficientwise() {
        let a = e(&[1, 2, 3]);
        let b = e(&[1, -2]);
        assert_eq!(&a + &b, e(&[2, 0, 3]));
        assert_eq!(&a - &a, EpsRat::zero());
        assert_eq!(a.scale(&Rat::new(1, 2)), EpsRat::new(vec![Rat::new(1, 2), Rat::one(), Rat::new(3, 2)]));
        assert_eq!(-&b, e(&[-1, 2]));
    }

    #[test]
    fn order_agrees_with_small_numeric_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..2000 {
            let deg_a = rng.gen_range(0..=3);
            let deg_b = rng.gen_range(0..=3);
            // small coefficient ranges make ties in the leading terms frequent
            let a: Vec<i64> = (0..=deg_a).map(|_| rng.gen_range(-2..=2)).collect();
            let b: Vec<i64> = (0..=deg_b).map(|_| rng.gen_range(-2..=2)).collect();
            let (a, b) = (e(&a), e(&b));
            let numeric = (&a - &b).eval_f64(1e-9);
            let expected = if numeric > 0.0 {
                Ordering::Greater
            } else if numeric < 0.0 {
                Ordering::Less
            } else {
                Ordering::Equal
            };
            assert_eq!(a.cmp(&b), expected, "{a} vs {b}");
        }
        for _ in 0..2000 {
            let a: Vec<i64> = (0..=3).map(|_| rng.gen_range(-10..=10)).collect();
            let b: Vec<i64> = (0..=3).map(|_| rng.gen_range(-10..=10)).collect();
            let (a, b) = (e(&a), e(&b));
            let numeric = (&a - &b).eval_f64(1e-9);
            assert_eq!(a.cmp(&b), numeric.partial_cmp(&0.0).unwrap());
        }
    }
}
