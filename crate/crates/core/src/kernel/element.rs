use std::collections::BTreeMap;
use std::fmt;

use crate::foundation::{rat, write_term, Rational, Vector};

/// Element of `F[∂] ⊗ V`: a finite sum of `c · ∂^i v` over generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ConformalElement {
    terms: BTreeMap<(u32, usize), Rational>,
}

impl ConformalElement {
    pub fn generator(g: usize) -> Self {
        Self::term(0, g, rat(1))
    }

    pub fn term(power: u32, g: usize, c: Rational) -> Self {
        let mut e = Self::default();
        e.add_term(power, g, &c);
        e
    }

    pub fn add_term(&mut self, power: u32, g: usize, c: &Rational) {
        if Vector::is_zero(c) {
            return;
        }
        let entry = self.terms.entry((power, g)).or_insert_with(|| rat(0));
        *entry += c;
        if Vector::is_zero(entry) {
            self.terms.remove(&(power, g));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, usize, &Rational)> {
        self.terms.iter().map(|(&(p, g), c)| (p, g, c))
    }

    pub fn coefficient(&self, power: u32, g: usize) -> Rational {
        self.terms.get(&(power, g)).cloned().unwrap_or_else(|| rat(0))
    }

    /// Applies `∂^i`.
    pub fn partial_pow(&self, i: u32) -> Self {
        Self { terms: self.terms.iter().map(|(&(p, g), c)| ((p + i, g), c.clone())).collect() }
    }

    pub fn partial(&self) -> Self {
        self.partial_pow(1)
    }

    pub fn max_power(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().map(|k| k.1)
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        struct R<'a>(&'a ConformalElement, &'a dyn Fn(usize) -> String);
        impl fmt::Display for R<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.terms.is_empty() {
                    return write!(f, "0");
                }
                for (i, (&(p, g), c)) in self.0.terms.iter().enumerate() {
                    let label = match p {
                        0 => (self.1)(g),
                        1 => format!("∂{}", (self.1)(g)),
                        _ => format!("∂^{p}{}", (self.1)(g)),
                    };
                    write_term(f, i == 0, c, &label)?;
                }
                Ok(())
            }
        }
        R(self, name).to_string()
    }
}

impl fmt::Display for ConformalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|g| format!("v{g}")))
    }
}

impl Vector for ConformalElement {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if Vector::is_zero(c) {
            return;
        }
        for (&(p, g), x) in &other.terms {
            self.add_term(p, g, &(x * c));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_rendering() {
        let mut e = ConformalElement::term(1, 0, rat(1));
        e.add_term(0, 0, &rat(2));
        assert_eq!(e.render(&|_| "e".into()), "2*e + ∂e");
        let d = e.partial();
        assert_eq!(d.coefficient(2, 0), rat(1));
        assert!(e.minus(&e).is_zero());
    }
}
