//! Formal Dehn invariants `Σ lᵢ ⊗ ᾱᵢ` with Q(τ) lengths and symbolic angles.
//!
//! Angles that are rational multiples of π vanish in R ⊗ R/πZ and are dropped
//! as soon as they are seen. Named angle classes are treated as Z-linearly
//! independent of each other and of π; nothing here tries to discover
//! relations between them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::golden::GoldenNumber;

/// Key of the single lateral angle of the Mosseri–Sadoc tiles (cos α = 1/√5).
pub const ALPHA_MS: &str = "alpha_ms";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DehnError {
    #[error("edge {index} has nonpositive length {length}")]
    NonPositiveLength {
        index: usize,
        length: Box<GoldenNumber>,
    },
    #[error("angle p/q*pi needs q > 0, got q = {0}")]
    BadDenominator(BigInt),
}

/// An angle modulo π.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleClass {
    /// `(p/q)·π`, reduced with `0 <= p/q < 1`.
    RationalPi {
        p: BigInt,
        q: BigInt,
    },
    Named(String),
}

impl AngleClass {
    pub fn rational_pi<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Result<Self, DehnError> {
        let (p, q) = (p.into(), q.into());
        if !q.is_positive() {
            return Err(DehnError::BadDenominator(q));
        }
        let p = p.mod_floor(&q);
        let g = p.gcd(&q);
        Ok(AngleClass::RationalPi {
            p: p / &g,
            q: q / g,
        })
    }

    pub fn named(key: impl Into<String>) -> Self {
        AngleClass::Named(key.into())
    }
}

/// Finite formal sum of named angle classes with Q(τ) coefficients.
/// Zero coefficients are never stored, so equality is structural.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DehnElement {
    terms: BTreeMap<String, GoldenNumber>,
}

impl DehnElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `coeff ⊗ key`.
    pub fn single(key: impl Into<String>, coeff: GoldenNumber) -> Self {
        let mut d = Self::zero();
        d.add_term(&AngleClass::Named(key.into()), &coeff);
        d
    }

    pub fn from_terms<I, K>(terms: I) -> Self
    where
        I: IntoIterator<Item = (K, GoldenNumber)>,
        K: Into<String>,
    {
        let mut d = Self::zero();
        for (k, c) in terms {
            d.add_term(&AngleClass::Named(k.into()), &c);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient on a named class, zero if absent.
    pub fn coeff(&self, key: &str) -> GoldenNumber {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &GoldenNumber)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn add_term(&mut self, angle: &AngleClass, length: &GoldenNumber) {
        let key = match angle {
            AngleClass::RationalPi { .. } => return,
            AngleClass::Named(k) => k,
        };
        if length.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += length;
        if entry.is_zero() {
            self.terms.remove(key);
        }
    }

    pub fn scale(&self, c: &GoldenNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DehnElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// σ applied to every coefficient.
    pub fn conj(&self) -> Self {
        DehnElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.conj()))
                .collect(),
        }
    }
}

impl Add<&DehnElement> for &DehnElement {
    type Output = DehnElement;
    fn add(self, rhs: &DehnElement) -> DehnElement {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(&AngleClass::Named(k.clone()), v);
        }
        out
    }
}

impl Add for DehnElement {
    type Output = DehnElement;
    fn add(self, rhs: DehnElement) -> DehnElement {
        &self + &rhs
    }
}

impl std::iter::Sum for DehnElement {
    fn sum<I: Iterator<Item = DehnElement>>(iter: I) -> Self {
        iter.fold(DehnElement::zero(), |acc, x| &acc + &x)
    }
}

impl<'de> Deserialize<'de> for DehnElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, GoldenNumber>::deserialize(deserializer)?;
        Ok(DehnElement::from_terms(raw))
    }
}

impl fmt::Display for DehnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| format!("({v}) (x) {k}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Dehn invariant of a polyhedron from its edges, each given as
/// (length, dihedral angle class).
pub fn dehn_of_polyhedron(edges: &[(GoldenNumber, AngleClass)]) -> Result<DehnElement, DehnError> {
    let mut d = DehnElement::zero();
    for (index, (length, angle)) in edges.iter().enumerate() {
        if !length.is_positive() {
            return Err(DehnError::NonPositiveLength {
                index,
                length: Box::new(length.clone()),
            });
        }
        d.add_term(angle, length);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rat: i64, gold: i64) -> GoldenNumber {
        GoldenNumber::from_ints(rat, gold, 1)
    }

    #[test]
    fn cube_has_zero_invariant() {
        let right = AngleClass::rational_pi(1, 2).unwrap();
        let edges = vec![(g(1, 0), right); 12];
        assert!(dehn_of_polyhedron(&edges).unwrap().is_zero());
        assert!(dehn_of_polyhedron(&[]).unwrap().is_zero());
    }

    #[test]
    fn named_edges_accumulate() {
        let edges = vec![(g(1, 0), AngleClass::named("theta_tet")); 6];
        let d = dehn_of_polyhedron(&edges).unwrap();
        assert_eq!(d, DehnElement::single("theta_tet", g(6, 0)));
    }

    #[test]
    fn rejects_nonpositive_length() {
        let edges = vec![
            (g(1, 0), AngleClass::named("x")),
            (g(1, -1), AngleClass::named("x")),
        ];
        assert!(matches!(
            dehn_of_polyhedron(&edges),
            Err(DehnError::NonPositiveLength { index: 1, .. })
        ));
        let zero = vec![(g(0, 0), AngleClass::rational_pi(1, 3).unwrap())];
        assert!(dehn_of_polyhedron(&zero).is_err());
    }

    #[test]
    fn rational_pi_normalizes() {
        assert_eq!(
            AngleClass::rational_pi(5, 4).unwrap(),
            AngleClass::rational_pi(1, 4).unwrap()
        );
        assert_eq!(
            AngleClass::rational_pi(-2, 4).unwrap(),
            AngleClass::RationalPi {
                p: 1.into(),
                q: 2.into()
            }
        );
        assert_eq!(
            AngleClass::rational_pi(3, 3).unwrap(),
            AngleClass::RationalPi {
                p: 0.into(),
                q: 1.into()
            }
        );
        assert!(AngleClass::rational_pi(1, 0).is_err());
    }

    #[test]
    fn ms_additivity_examples() {
        let ms = |c: GoldenNumber| DehnElement::single(ALPHA_MS, &g(-5, 0) * &c);
        let d_r = ms(g(1, 1));
        let d_m = ms(g(1, -1));
        assert_eq!(&d_r + &d_m, DehnElement::single(ALPHA_MS, g(-10, 0)));

        let d_s = ms(g(-1, 1));
        let d_a = ms(g(0, -1));
        let two_a = d_a.scale(&g(2, 0));
        assert_eq!(&d_s + &two_a, DehnElement::single(ALPHA_MS, g(5, 5)));

        let x = ms(g(3, 1));
        assert_eq!(&x + &DehnElement::zero(), x);
    }

    #[test]
    fn scaling() {
        let d_z = DehnElement::single(ALPHA_MS, g(0, -5));
        assert_eq!(
            d_z.scale(&GoldenNumber::tau()),
            DehnElement::single(ALPHA_MS, g(-5, -5))
        );
        assert!(d_z.scale(&GoldenNumber::zero()).is_zero());
    }

    #[test]
    fn cancellation_prunes() {
        let a = DehnElement::single("x", g(1, 2));
        let b = DehnElement::single("x", g(-1, -2));
        assert!((&a + &b).is_zero());
        assert_eq!(&a + &b, DehnElement::zero());
    }

    #[test]
    fn conj_commutes_with_add() {
        let a = DehnElement::from_terms([("x", g(1, 2)), ("y", g(0, 3))]);
        let b = DehnElement::from_terms([("x", g(-4, 1))]);
        assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn json_shape() {
        let d = DehnElement::single(ALPHA_MS, g(-5, -5));
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"alpha_ms":"-5 - 5*tau"}"#
        );
        let back: DehnElement = serde_json::from_str(r#"{"alpha_ms":"-5 - 5*tau"}"#).unwrap();
        assert_eq!(back, d);
    }
}
