//! Exact coefficient ring: finite sums of Gaussian-rational multiples of
//! monomials in the formal couplings `J1, J2, ...`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Scalars an operator can carry. Implemented by the exact [`Coefficient`]
/// and by `Complex64` for numerically substituted operators.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiply by `i^k`.
    fn times_i_pow(&self, k: u8) -> Self;
    /// Multiply by a small integer.
    fn times_int(&self, k: i64) -> Self;
    /// Number of expanded monomials, used for the term budget.
    fn weight(&self) -> usize {
        1
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn times_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => *self,
            1 => Complex64::new(-self.im, self.re),
            2 => -self,
            _ => Complex64::new(self.im, -self.re),
        }
    }
    fn times_int(&self, k: i64) -> Self {
        self * k as f64
    }
}

/// Exact complex rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `num / den` with zero imaginary part.
    ///
    /// # Panics
    /// If `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(rational(num, den), BigRational::zero())
    }

    pub fn imaginary(num: i64, den: i64) -> Self {
        Self::new(BigRational::zero(), rational(num, den))
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::ratio(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }

    pub fn times_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self::new(-&self.im, self.re.clone()),
            2 => self.neg(),
            _ => Self::new(self.im.clone(), -&self.re),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

pub(crate) fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    /// `p/q+r/s*i`; denominators are always written.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let im = self.im.abs();
        write!(
            f,
            "{}/{}{}{}/{}*i",
            self.re.numer(),
            self.re.denom(),
            sign,
            im.numer(),
            im.denom()
        )
    }
}

/// Product of formal couplings, `exponents[k-1]` being the power of `Jk`.
/// Trailing zero exponents are trimmed so equal monomials compare equal.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn constant() -> Self {
        Self(Vec::new())
    }

    /// `J_index^power`, 1-based index.
    pub fn coupling(index: usize, power: u32) -> Self {
        assert!(index >= 1, "couplings are numbered from 1");
        let mut exps = alloc::vec![0; index];
        exps[index - 1] = power;
        Self::from_exponents(exps)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Power of `J_index`.
    pub fn power(&self, index: usize) -> u32 {
        self.0.get(index - 1).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let exps = (0..len)
            .map(|k| self.0.get(k).unwrap_or(&0) + other.0.get(k).unwrap_or(&0))
            .collect();
        Self::from_exponents(exps)
    }

    /// Numeric value with `couplings[k-1]` substituted for `Jk`.
    pub fn evaluate(&self, couplings: &[f64]) -> Result<f64> {
        let mut value = 1.0;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let j = couplings
                .get(k)
                .ok_or(Error::MissingCoupling { index: k + 1 })?;
            value *= num_traits::Float::powi(*j, e as i32);
        }
        Ok(value)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    /// `J1^a J2^b`, zero powers omitted, `1` for the constant monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "J{}^{}", k + 1, e)?;
        }
        Ok(())
    }
}

/// Exact polynomial coefficient in the formal couplings.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Coefficient {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Coefficient {
    pub fn from_monomial(mono: Monomial, value: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(mono, value);
        }
        Self { terms }
    }

    /// Constant `num / den`.
    pub fn rational(num: i64, den: i64) -> Self {
        Self::from_monomial(Monomial::constant(), GaussianRational::ratio(num, den))
    }

    pub fn constant(value: GaussianRational) -> Self {
        Self::from_monomial(Monomial::constant(), value)
    }

    /// The formal coupling `J_index`.
    pub fn coupling(index: usize) -> Self {
        Self::from_monomial(Monomial::coupling(index, 1), GaussianRational::one())
    }

    /// Monomial → coefficient, in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    /// Coefficient of a single monomial (zero if absent).
    pub fn get(&self, mono: &Monomial) -> GaussianRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, mono: Monomial, value: GaussianRational) {
        use alloc::collections::btree_map::Entry;
        if value.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(value);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&value);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Substitute numeric couplings.
    pub fn evaluate(&self, couplings: &[f64]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, value) in &self.terms {
            acc += value.to_complex() * mono.evaluate(couplings)?;
        }
        Ok(acc)
    }

    fn map_values(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

impl Scalar for Coefficient {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::rational(1, 1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone());
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ma, va) in &self.terms {
            for (mb, vb) in &other.terms {
                out.add_term(ma.mul(mb), va.mul(vb));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.map_values(GaussianRational::neg)
    }
    fn times_i_pow(&self, k: u8) -> Self {
        self.map_values(|v| v.times_i_pow(k))
    }
    fn times_int(&self, k: i64) -> Self {
        let factor = GaussianRational::ratio(k, 1);
        self.map_values(|v| v.mul(&factor))
    }
    fn weight(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, v) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({v})*{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn gaussian_display_keeps_denominators() {
        assert_eq!(GaussianRational::ratio(1, 4).to_string(), "1/4+0/1*i");
        let g = GaussianRational::new(rational(-3, 8), rational(-1, 2));
        assert_eq!(g.to_string(), "-3/8-1/2*i");
    }

    #[test]
    fn monomials_trim_and_multiply() {
        let a = Monomial::coupling(2, 1);
        let b = Monomial::coupling(1, 2);
        assert_eq!(a.mul(&b).to_string(), "J1^2 J2^1");
        assert_eq!(
            Monomial::from_exponents(alloc::vec![1, 0, 0]),
            Monomial::coupling(1, 1)
        );
    }

    #[test]
    fn cancellation_removes_monomials() {
        let mut c = Coefficient::coupling(1);
        c.add_assign(&Coefficient::coupling(1).neg());
        assert!(Scalar::is_zero(&c));
    }

    #[test]
    fn missing_coupling_is_reported() {
        let c = Coefficient::coupling(3);
        assert_eq!(
            c.evaluate(&[1.0, 2.0]),
            Err(Error::MissingCoupling { index: 3 })
        );
        assert_eq!(c.evaluate(&[1.0, 2.0, 0.5]).unwrap().re, 0.5);
    }
}
