use num_bigint::BigInt;
use num_traits::One;

use super::Rational;

/// Generalized binomial `a(a-1)...(a-n+1)/n!`, defined for every integer `a`.
///
/// For negative `a` this is the coefficient produced by expanding
/// `(z - x)^a` in powers of the second variable, so
/// `binom(-j-1, n) = (-1)^n binom(j+n, n)`.
pub fn binom(a: i64, n: u32) -> Rational {
    Rational::from_integer(binom_int(a, n))
}

pub fn binom_int(a: i64, n: u32) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    if a >= 0 && (n as i64) > a {
        return BigInt::from(0);
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n as i64 {
        num *= BigInt::from(a - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;

    /// Coefficient of z^-(j+1+n)... read off from the geometric expansion
    /// `1/(z-x) = sum_j z^{-j-1} x^j`, raised to the power `p` by repeated
    /// series multiplication. Independent of `binom`.
    fn expansion_coefficients(p: usize, terms: usize) -> Vec<i64> {
        // coefficients c_j of x^j in (1/(z-x))^p, with z-power fixed by j.
        let mut acc = vec![0i64; terms];
        acc[0] = 1;
        for _ in 0..p {
            let mut next = vec![0i64; terms];
            for i in 0..terms {
                for j in 0..terms - i {
                    next[i + j] += acc[i];
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn small_values() {
        assert_eq!(binom(3, 2), rat(3));
        assert_eq!(binom(-7, 0), rat(1));
        assert_eq!(binom(-1, 1), rat(-1));
        assert_eq!(binom(-2, 1), rat(-2));
        assert_eq!(binom(2, 5), rat(0));
        assert_eq!(binom(-1, 3), rat(-1));
    }

    #[test]
    fn negative_upper_matches_expansion_oracle() {
        // (z - x)^{-p} = z^{-p} (1 - x/z)^{-p}; the coefficient of (-x/z)^n is binom(-p, n),
        // so the coefficient of x^n z^{-p-n} is (-1)^n binom(-p, n).
        for p in 1..=4usize {
            let c = expansion_coefficients(p, 8);
            for (n, &cn) in c.iter().enumerate() {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(binom(-(p as i64), n as u32) * rat(sign), rat(cn), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn pascal_rule() {
        for a in -20i64..=20 {
            for n in 1..=12u32 {
                assert_eq!(binom(a, n), binom(a - 1, n) + binom(a - 1, n - 1), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn second_variable_convention_closed_form() {
        for j in 0..=12i64 {
            for n in 0..=12u32 {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(binom(-j - 1, n), binom(j + n as i64, n) * rat(sign));
            }
        }
    }
}
