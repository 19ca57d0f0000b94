//! Sparse multivariate polynomials over `ℤ` in a named alphabet.
//!
//! The alphabet is a type parameter, so a polynomial in Chern variables can
//! not be added to one in Segre variables by accident. Variables are
//! 1-indexed; an exponent vector stores the exponent of variable `i` at
//! position `i - 1` and never ends in a zero.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A family of formal variables.
pub trait Alphabet: Copy + Clone + fmt::Debug + Default + PartialEq + Eq + 'static {
    const SYMBOL: &'static str;
}

/// Chern roots `x_1, …, x_r` of the dual bundle.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Roots;
/// Chern classes `c_1, c_2, …`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Chern;
/// Segre classes `s_1, s_2, …`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Segre;
/// Tautological classes `ξ_1, …, ξ_r` on a flag bundle.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Xi;

impl Alphabet for Roots {
    const SYMBOL: &'static str = "x";
}
impl Alphabet for Chern {
    const SYMBOL: &'static str = "c";
}
impl Alphabet for Segre {
    const SYMBOL: &'static str = "s";
}
impl Alphabet for Xi {
    const SYMBOL: &'static str = "xi";
}

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly<A: Alphabet> {
    terms: BTreeMap<Exponents, BigInt>,
    alphabet: PhantomData<A>,
}

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl<A: Alphabet> Default for Poly<A> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<A: Alphabet> Poly<A> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new(), alphabet: PhantomData }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(&[], c)
    }

    /// The variable with 1-based index `i`.
    pub fn var(i: usize) -> Self {
        assert!(i >= 1, "variables are 1-indexed");
        let mut e = vec![0; i];
        e[i - 1] = 1;
        Self::monomial(&e, 1)
    }

    pub fn monomial(exponents: &[u32], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents.to_vec(), c.into());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(&trim(exponents.to_vec())).cloned().unwrap_or_default()
    }

    /// Number of variables that can occur, i.e. the largest index in use.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Ordinary total degree of the leading term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree with variable `i` weighted by `i` (the cohomological degree of
    /// `c_i` or `s_i`, halved).
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().enumerate().map(|(i, &a)| (i as u32 + 1) * a).sum()).max()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), a * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces variable `i` by `images(i)` everywhere.
    pub fn substitute<B: Alphabet>(&self, mut images: impl FnMut(usize) -> Poly<B>) -> Poly<B> {
        let mut powers: Vec<Vec<Poly<B>>> = Vec::new();
        let mut out = Poly::<B>::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::<B>::constant(c.clone());
            for (idx, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while powers.len() <= idx {
                    let v = images(powers.len() + 1);
                    powers.push(vec![Poly::one(), v]);
                }
                let table = &mut powers[idx];
                while table.len() <= a as usize {
                    let next = &table[table.len() - 1] * &table[1];
                    table.push(next);
                }
                term = &term * &table[a as usize];
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Same coefficients, read in another alphabet.
    pub fn relabel<B: Alphabet>(&self) -> Poly<B> {
        Poly { terms: self.terms.clone(), alphabet: PhantomData }
    }

    /// Sends variable `i` to variable `perm[i - 1] + 1` (0-based permutation).
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; perm.len().max(e.len())];
            for (i, &a) in e.iter().enumerate() {
                out[perm.get(i).copied().unwrap_or(i)] = a;
            }
            (out, c.clone())
        }))
    }

    /// Sets the listed (1-based) variables to zero.
    pub fn kill_vars(&self, vars: &[usize]) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e.get(v - 1).copied().unwrap_or(0) == 0))
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Exact division by `x_j - x_i` (1-based). `None` if the remainder is
    /// nonzero.
    pub fn div_difference(&self, j: usize, i: usize) -> Option<Self> {
        assert!(i != j && i >= 1 && j >= 1);
        // p = Σ_d p_d x_j^d with p_d free of x_j.
        let mut slices: BTreeMap<u32, Poly<A>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.get(j - 1).copied().unwrap_or(0);
            let mut rest = e.clone();
            if rest.len() >= j {
                rest[j - 1] = 0;
            }
            slices.entry(d).or_default().add_term(rest, c.clone());
        }
        let top = match slices.keys().next_back() {
            None => return Some(Self::zero()),
            Some(&d) => d,
        };
        let xi = Self::var(i);
        let mut quotient = Self::zero();
        // Synthetic division by (x_j - x_i): q_{d-1} = p_d + x_i q_d.
        let mut carry = Self::zero();
        for d in (0..=top).rev() {
            let p_d = slices.remove(&d).unwrap_or_default();
            let q = &p_d + &(&xi * &carry);
            if d == 0 {
                return if q.is_zero() { Some(quotient) } else { None };
            }
            let mut shift = vec![0; j];
            shift[j - 1] = d - 1;
            quotient = &quotient + &(&q * &Self::monomial(&shift, 1));
            carry = q;
        }
        unreachable!()
    }
}

impl<A: Alphabet> fmt::Debug for Poly<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<A: Alphabet> fmt::Display for Poly<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest total degree first, then lexicographic.
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(
                    |(i, &a)| {
                        if a == 1 {
                            format!("{}{}", A::SYMBOL, i + 1)
                        } else {
                            format!("{}{}^{a}", A::SYMBOL, i + 1)
                        }
                    },
                )
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<A: Alphabet> Add for &Poly<A> {
    type Output = Poly<A>;
    fn add(self, other: &Poly<A>) -> Poly<A> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<A: Alphabet> Sub for &Poly<A> {
    type Output = Poly<A>;
    fn sub(self, other: &Poly<A>) -> Poly<A> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<A: Alphabet> Mul for &Poly<A> {
    type Output = Poly<A>;
    fn mul(self, other: &Poly<A>) -> Poly<A> {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let len = e1.len().max(e2.len());
                let e: Exponents =
                    (0..len).map(|k| e1.get(k).copied().unwrap_or(0) + e2.get(k).copied().unwrap_or(0)).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl<A: Alphabet> Neg for &Poly<A> {
    type Output = Poly<A>;
    fn neg(self) -> Poly<A> {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(), alphabet: PhantomData }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<A: Alphabet> $tr for Poly<A> {
            type Output = Poly<A>;
            fn $m(self, other: Poly<A>) -> Poly<A> {
                (&self).$m(&other)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<A: Alphabet> Neg for Poly<A> {
    type Output = Poly<A>;
    fn neg(self) -> Poly<A> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<Roots>;

    #[test]
    fn arithmetic_and_display() {
        let x1 = P::var(1);
        let x2 = P::var(2);
        let p = &(&x1 + &x2) * &(&x1 - &x2);
        assert_eq!(p.to_string(), "x1^2 - x2^2");
        assert_eq!(p.num_vars(), 2);
        assert_eq!(p.total_degree(), Some(2));
        assert!((&p - &p).is_zero());
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!((-P::constant(3)).to_string(), "-3");
    }

    #[test]
    fn trailing_zero_exponents_are_canonical() {
        assert_eq!(P::monomial(&[1, 0, 0], 2), P::monomial(&[1], 2));
        assert_eq!(P::monomial(&[0, 0], 5), P::constant(5));
    }

    #[test]
    fn exact_division() {
        let x1 = P::var(1);
        let x2 = P::var(2);
        let x3 = P::var(3);
        let f = &(&x2 - &x1) * &(&(&x1 * &x3) + &x2.pow(3));
        assert_eq!(f.div_difference(2, 1).unwrap(), &(&x1 * &x3) + &x2.pow(3));
        assert!(x1.div_difference(2, 1).is_none());
        assert!(P::zero().div_difference(2, 1).unwrap().is_zero());
    }

    #[test]
    fn substitution_and_permutation() {
        let p = &Poly::<Chern>::var(1).pow(2) - &Poly::<Chern>::var(2);
        let q: Poly<Roots> = p.substitute(|i| &P::var(i) + &P::constant(1));
        // (x1+1)^2 - (x2+1)
        let expected = &(&P::var(1) + &P::one()).pow(2) - &(&P::var(2) + &P::one());
        assert_eq!(q, expected);
        let swapped = P::monomial(&[2, 1], 1).permute(&[1, 0]);
        assert_eq!(swapped, P::monomial(&[1, 2], 1));
        assert_eq!(P::monomial(&[1, 1], 1).kill_vars(&[2]), P::zero());
    }
}
