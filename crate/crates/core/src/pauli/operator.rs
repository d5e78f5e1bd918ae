use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use super::coeff::{Coefficient, Scalar};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Largest register the bit-packed strings can hold.
pub const MAX_SITES: usize = 64;

/// Single-site σ-letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Self::I,
            (true, false) => Self::X,
            (true, true) => Self::Y,
            (false, true) => Self::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::X => (true, false),
            Self::Y => (true, true),
            Self::Z => (false, true),
        }
    }

    /// `self · other = i^k · letter`, returned as `(k, letter)`.
    pub fn product(self, other: Self) -> (u8, Self) {
        use PauliLetter::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }
}

/// Tensor product of σ-letters, bit-packed as x/z masks with site `s` on
/// bit `s - 1`. Identity letters are implicit.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Build from `(site, letter)` pairs (1-based sites). Repeated sites are
    /// overwritten, not multiplied.
    pub fn from_letters(letters: &[(usize, PauliLetter)]) -> Self {
        letters
            .iter()
            .fold(Self::identity(), |s, &(site, l)| s.with(site, l))
    }

    pub fn single(site: usize, letter: PauliLetter) -> Self {
        Self::identity().with(site, letter)
    }

    #[must_use]
    pub fn with(mut self, site: usize, letter: PauliLetter) -> Self {
        assert!((1..=MAX_SITES).contains(&site), "site {site} out of range");
        let bit = 1u64 << (site - 1);
        let (x, z) = letter.bits();
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        self
    }

    pub fn letter(&self, site: usize) -> PauliLetter {
        let bit = 1u64 << (site - 1);
        PauliLetter::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.support_mask() == 0
    }

    /// Highest site carrying a non-identity letter (0 for the identity).
    pub fn max_site(&self) -> usize {
        (u64::BITS - self.support_mask().leading_zeros()) as usize
    }

    /// Sites with non-identity letters, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.letters().map(|(s, _)| s).collect()
    }

    /// Non-identity `(site, letter)` pairs, ascending by site.
    pub fn letters(&self) -> impl Iterator<Item = (usize, PauliLetter)> + '_ {
        let mut mask = self.support_mask();
        core::iter::from_fn(move || {
            if mask == 0 {
                return None;
            }
            let site = mask.trailing_zeros() as usize + 1;
            mask &= mask - 1;
            Some((site, self.letter(site)))
        })
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x))
            .count_ones()
            .is_multiple_of(2)
    }

    /// `self · other = i^k · string`.
    pub fn product(&self, other: &Self) -> (u8, Self) {
        let mut phase = 0u8;
        let mut both = self.support_mask() & other.support_mask();
        while both != 0 {
            let site = both.trailing_zeros() as usize + 1;
            both &= both - 1;
            phase += self.letter(site).product(other.letter(site)).0;
        }
        (
            phase % 4,
            Self {
                x: self.x ^ other.x,
                z: self.z ^ other.z,
            },
        )
    }

    /// Nonzero entries of the `2^n × 2^n` matrix: column `c` has a single
    /// entry at row `c ^ flip` with value `phase(c)`.
    pub(crate) fn column_entry(&self, n: usize, col: usize) -> (usize, Complex64) {
        let mut row = col;
        // i^(number of Y) times (-1)^(z-bits set on 1s of the column)
        let mut phase = self.letters().filter(|(_, l)| *l == PauliLetter::Y).count() as u8;
        for (site, letter) in self.letters() {
            let bit = 1usize << (n - site);
            let (x, z) = letter.bits();
            if z && col & bit != 0 {
                phase += 2;
            }
            if x {
                row ^= bit;
            }
        }
        (row, Complex64::new(1.0, 0.0).times_i_pow(phase % 4))
    }
}

impl Ord for PauliString {
    /// Lexicographic order on the sequence of non-identity `(site, letter)`
    /// pairs; the identity sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.x ^ other.x) | (self.z ^ other.z);
        if diff == 0 {
            return Ordering::Equal;
        }
        let site = diff.trailing_zeros() as usize + 1;
        let above = |s: &Self| s.support_mask() >> site != 0;
        match (self.letter(site), other.letter(site)) {
            (PauliLetter::I, _) => {
                if above(self) {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (_, PauliLetter::I) => {
                if above(other) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (a, b) => a.cmp(&b),
        }
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical sum of Pauli strings on `n` sites with coefficients in `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct PauliOperator<C = Coefficient> {
    n: usize,
    terms: BTreeMap<PauliString, C>,
}

/// Operator with numerically substituted couplings.
pub type NumericOperator = PauliOperator<Complex64>;

impl<C: Scalar> PauliOperator<C> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_SITES, "at most {MAX_SITES} sites are supported");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(n, PauliString::identity(), C::one())
    }

    pub fn term(n: usize, string: PauliString, coeff: C) -> Self {
        let mut op = Self::zero(n);
        op.add_term(string, coeff);
        op
    }

    /// Unit-coefficient product of σ-letters, e.g. `&[(1, X), (2, Z)]`.
    pub fn letters(n: usize, letters: &[(usize, PauliLetter)]) -> Self {
        Self::term(n, PauliString::from_letters(letters), C::one())
    }

    pub fn site_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Expanded term count (strings × monomials).
    pub fn weight(&self) -> usize {
        self.terms.values().map(Scalar::weight).sum()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &C)> {
        self.terms.iter()
    }

    pub fn strings(&self) -> BTreeSet<PauliString> {
        self.terms.keys().copied().collect()
    }

    /// Coefficient of `string` (zero if absent).
    pub fn coefficient(&self, string: &PauliString) -> C {
        self.terms.get(string).cloned().unwrap_or_else(C::zero)
    }

    /// Union of the supports of all terms.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|s| s.support()).collect()
    }

    pub fn add_term(&mut self, string: PauliString, coeff: C) {
        use alloc::collections::btree_map::Entry;
        assert!(
            string.max_site() <= self.n,
            "string acts on site {} of a {}-site operator",
            string.max_site(),
            self.n
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(string) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                slot.get_mut().add_assign(&coeff);
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_sites(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::SiteCountMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_sites(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    /// Multiply every coefficient by `factor`.
    pub fn scale(&self, factor: &C) -> Self {
        self.map(|c| c.mul(factor))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> PauliOperator<D> {
        let mut out = PauliOperator::zero(self.n);
        for (s, c) in &self.terms {
            out.add_term(*s, f(c));
        }
        out
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_sites(other)?;
        let mut out = Self::zero(self.n);
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let (phase, s) = sa.product(sb);
                out.add_term(s, ca.mul(cb).times_i_pow(phase));
            }
        }
        Ok(out)
    }

    /// `self · other - other · self`. Only anticommuting string pairs
    /// contribute, each with twice their product.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_sites(other)?;
        let mut out = Self::zero(self.n);
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                if sa.commutes_with(sb) {
                    continue;
                }
                let (phase, s) = sa.product(sb);
                out.add_term(s, ca.mul(cb).times_i_pow(phase).times_int(2));
            }
        }
        Ok(out)
    }
}

impl<C: Scalar> Add for &PauliOperator<C> {
    type Output = PauliOperator<C>;

    /// # Panics
    /// On mismatched site counts; use [`PauliOperator::try_add`] to handle it.
    fn add(self, rhs: Self) -> PauliOperator<C> {
        self.try_add(rhs).expect("site count mismatch")
    }
}

impl<C: Scalar> Neg for &PauliOperator<C> {
    type Output = PauliOperator<C>;

    fn neg(self) -> PauliOperator<C> {
        self.map(Scalar::neg)
    }
}

impl<C: Scalar> Sub for &PauliOperator<C> {
    type Output = PauliOperator<C>;

    fn sub(self, rhs: Self) -> PauliOperator<C> {
        self + &(-rhs)
    }
}

impl PauliOperator<Coefficient> {
    /// Substitute numeric couplings (`couplings[k-1]` for `Jk`).
    pub fn substitute(&self, couplings: &[f64]) -> Result<NumericOperator> {
        let mut out = PauliOperator::zero(self.n);
        for (s, c) in &self.terms {
            out.add_term(*s, c.evaluate(couplings)?);
        }
        Ok(out)
    }

    /// Product of spin-½ operators `σ/2`, the convention of the chain
    /// Hamiltonian: a `k`-letter string carries `2^-k`.
    pub fn spin_product(n: usize, letters: &[(usize, PauliLetter)]) -> Self {
        let k = letters.iter().filter(|(_, l)| *l != PauliLetter::I).count();
        Self::term(
            n,
            PauliString::from_letters(letters),
            Coefficient::rational(1, 1 << k),
        )
    }
}

impl NumericOperator {
    /// Dense matrix in the crate basis.
    pub fn to_matrix(&self) -> CMatrix {
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (s, c) in &self.terms {
            for col in 0..dim {
                let (row, phase) = s.column_entry(self.n, col);
                m[(row, col)] += phase * c;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::PauliLetter::*;
    use super::*;

    type Op = PauliOperator<Coefficient>;

    #[test]
    fn single_site_table() {
        let x = Op::letters(1, &[(1, X)]);
        let y = Op::letters(1, &[(1, Y)]);
        let z = Op::letters(1, &[(1, Z)]);
        let iz = z.map(|c| c.times_i_pow(1));
        assert_eq!(x.multiply(&y).unwrap(), iz);
        assert_eq!(x.multiply(&x).unwrap(), Op::identity(1));
        assert_eq!(x.commutator(&y).unwrap(), iz.map(|c| c.times_int(2)));
    }

    #[test]
    fn disjoint_supports_commute() {
        let a = Op::letters(2, &[(1, X)]);
        let b = Op::letters(2, &[(2, X)]);
        assert!(a.commutator(&b).unwrap().is_empty());
    }

    #[test]
    fn xx_times_yy_is_minus_zz() {
        let xx = Op::letters(2, &[(1, X), (2, X)]);
        let yy = Op::letters(2, &[(1, Y), (2, Y)]);
        let zz = Op::letters(2, &[(1, Z), (2, Z)]);
        assert_eq!(xx.multiply(&yy).unwrap(), -&zz);
    }

    #[test]
    fn mismatched_sites_error() {
        let a = Op::letters(2, &[(1, X)]);
        let b = Op::letters(3, &[(1, X)]);
        assert_eq!(
            a.multiply(&b),
            Err(Error::SiteCountMismatch { left: 2, right: 3 })
        );
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic_by_site_then_letter() {
        let mut strings = alloc::vec![
            PauliString::from_letters(&[(2, X)]),
            PauliString::from_letters(&[(1, Z), (3, X)]),
            PauliString::from_letters(&[(1, X), (2, Y)]),
            PauliString::from_letters(&[(1, X)]),
            PauliString::identity(),
            PauliString::from_letters(&[(1, X), (3, Z)]),
        ];
        strings.sort();
        let rendered: Vec<Vec<(usize, PauliLetter)>> =
            strings.iter().map(|s| s.letters().collect()).collect();
        let mut expected = rendered.clone();
        expected.sort();
        assert_eq!(rendered, expected);
        assert!(strings[0].is_identity());
    }

    #[test]
    fn pauli_matrix_entries() {
        let z = NumericOperator::letters(1, &[(1, Z)]).to_matrix();
        assert_eq!(z[(0, 0)].re, 1.0);
        assert_eq!(z[(1, 1)].re, -1.0);
        let y = NumericOperator::letters(1, &[(1, Y)]).to_matrix();
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        let id = NumericOperator::identity(2).to_matrix();
        assert_eq!(id, CMatrix::identity(4, 4));
    }
}
