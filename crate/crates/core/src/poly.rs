//! Polynomials in the `mn` variables `x_1 < y_1 < ... < w_1 < x_2 < ... < w_n`.
//!
//! Two representations coexist: [`FactoredPoly`], a multiset of binomials
//! `high - low` (the form in which `P_Q` arises), and [`SparsePoly`], a
//! distributed polynomial keyed by [`Monomial`] in lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::dissection::{is_fan_chord, vertex_label, Chord, Dissection};
use crate::dyck::MVector;
use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Printable name of letter `r` (1-based) in an alphabet of `m` letters:
/// `x, y, z` for `m <= 3`, then `a, b, c, ...`.
pub fn letter_name(m: usize, r: usize) -> char {
    debug_assert!(1 <= r && r <= m);
    if m <= 3 {
        ['x', 'y', 'z'][r - 1]
    } else {
        (b'a' + (r - 1) as u8) as char
    }
}

/// The variable with letter `letter` and index `index`. Ordered by
/// `(index, letter)`, i.e. by linear position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub index: usize,
    pub letter: usize,
}

impl Variable {
    pub fn new(letter: usize, index: usize) -> Self {
        Variable { index, letter }
    }

    /// 1-based linear position `m (k - 1) + r`.
    pub fn position(self, m: usize) -> usize {
        m * (self.index - 1) + self.letter
    }

    pub fn name(self, m: usize) -> String {
        format!("{}{}", letter_name(m, self.letter), self.index)
    }
}

/// A monomial, stored as its exponent m-vector.
///
/// Ordering is the lex order induced by the variable order: `A_v < A_w`
/// iff the last non-zero entry of `v - w` is negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub MVector);

impl Monomial {
    pub fn one(m: usize, n: usize) -> Self {
        Monomial(MVector::zeros(m, n))
    }

    pub fn from_vector(v: MVector) -> Self {
        Monomial(v)
    }

    pub fn vector(&self) -> &MVector {
        &self.0
    }

    pub fn into_vector(self) -> MVector {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.total()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    pub fn variable(m: usize, n: usize, var: Variable) -> Self {
        let mut v = MVector::zeros(m, n);
        v.entries_mut()[var.position(m) - 1] = 1;
        Monomial(v)
    }

    pub fn exponent(&self, var: Variable) -> u32 {
        self.0.at(var.position(self.0.m()))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.entries().iter().zip(other.0.entries()).all(|(a, b)| a <= b)
    }

    /// `self / other`, if exact.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut v = self.0.clone();
        for (a, b) in v.entries_mut().iter_mut().zip(other.0.entries()) {
            *a -= b;
        }
        Some(Monomial(v))
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        for (a, b) in v.entries_mut().iter_mut().zip(rhs.0.entries()) {
            *a += b;
        }
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.0.entries(), other.0.entries());
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        a.len().cmp(&b.len()).then(self.0.m().cmp(&other.0.m()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// Variables in increasing order, space separated: `x5 y5^3 y7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0.m();
        let mut first = true;
        for (i, &e) in self.0.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let var = Variable::new(i % m + 1, i / m + 1);
            write!(f, "{}", var.name(m))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// The binomial `high - low`, with `index(high) > index(low)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BinomialFactor {
    pub high: Variable,
    pub low: Variable,
}

impl BinomialFactor {
    pub fn render(&self, m: usize) -> String {
        format!("({}-{})", self.high.name(m), self.low.name(m))
    }
}

impl Ord for BinomialFactor {
    /// Increasing high variable, then decreasing low variable.
    fn cmp(&self, other: &Self) -> Ordering {
        self.high.cmp(&other.high).then_with(|| other.low.cmp(&self.low))
    }
}

impl PartialOrd for BinomialFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for BinomialFactor {
    /// `[[highLetter, highIndex], [lowLetter, lowIndex]]`
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&(self.high.letter, self.high.index))?;
        t.serialize_element(&(self.low.letter, self.low.index))?;
        t.end()
    }
}

/// Binomial attached to a diagonal, or `None` for a diagonal of the fan.
///
/// A non-fan diagonal `(a, b)` crosses the consecutive fan diagonals
/// `i..=j`; its binomial is `label(b)_{j+1} - label(a)_i`.
pub fn binomial_for_diagonal(m: usize, n: usize, d: Chord) -> Result<Option<BinomialFactor>> {
    if is_fan_chord(m, n, d) {
        return Ok(None);
    }
    let Chord(a, b) = d;
    // fan diagonal k ends at mk + 1; a < mk + 1 < b
    let i = a.div_ceil(m);
    let j = (b - 2) / m;
    let (i, j) = (i.max(1), j.min(n.saturating_sub(1)));
    if a == 0 || i > j {
        return Err(Error::EmptyCrossing(a, b));
    }
    Ok(Some(BinomialFactor {
        high: Variable::new(vertex_label(m, b), j + 1),
        low: Variable::new(vertex_label(m, a), i),
    }))
}

/// A product of binomial factors, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FactoredPoly {
    m: usize,
    n: usize,
    factors: Vec<BinomialFactor>,
}

impl FactoredPoly {
    pub fn one(m: usize, n: usize) -> Self {
        FactoredPoly { m, n, factors: Vec::new() }
    }

    pub fn from_factors(m: usize, n: usize, mut factors: Vec<BinomialFactor>) -> Self {
        factors.sort_unstable();
        FactoredPoly { m, n, factors }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[BinomialFactor] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the high variables of the factors.
    pub fn leading_monomial(&self) -> Monomial {
        let mut v = MVector::zeros(self.m, self.n);
        for f in &self.factors {
            v.entries_mut()[f.high.position(self.m) - 1] += 1;
        }
        Monomial(v)
    }

    pub fn expand<C: Ring>(&self) -> SparsePoly<C> {
        self.factors
            .iter()
            .fold(SparsePoly::one(self.m, self.n), |acc, f| {
                let b = SparsePoly::variable(self.m, self.n, f.high) - SparsePoly::variable(self.m, self.n, f.low);
                &acc * &b
            })
    }

    /// Multiset inclusion of factors. The factors are pairwise
    /// non-associate irreducibles, so this is divisibility.
    pub fn divides(&self, other: &FactoredPoly) -> bool {
        let mut it = other.factors.iter().peekable();
        'outer: for f in &self.factors {
            while let Some(g) = it.next() {
                match g.cmp(f) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// `other / self` as a factor multiset, when `self` divides `other`.
    pub fn cofactor_in(&self, other: &FactoredPoly) -> Option<FactoredPoly> {
        let mut rest = other.factors.clone();
        for f in &self.factors {
            let pos = rest.iter().position(|g| g == f)?;
            rest.remove(pos);
        }
        Some(FactoredPoly { m: self.m, n: self.n, factors: rest })
    }

    /// Image under the symmetry of the fan: the last letter is fixed, the
    /// other letters are reversed and indices map `k -> n + 1 - k`. Factors
    /// are re-oriented; the returned sign is the product of the flips.
    pub fn involution_image(&self) -> (FactoredPoly, i32) {
        let (m, n) = (self.m, self.n);
        let map = |v: Variable| {
            let letter = if v.letter == m { m } else { m - v.letter };
            Variable::new(letter, n + 1 - v.index)
        };
        let mut sign = 1;
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let (h, l) = (map(f.high), map(f.low));
                if h.index > l.index {
                    BinomialFactor { high: h, low: l }
                } else {
                    sign = -sign;
                    BinomialFactor { high: l, low: h }
                }
            })
            .collect();
        (FactoredPoly::from_factors(m, n, factors), sign)
    }
}

impl fmt::Display for FactoredPoly {
    /// `(x5-y4)(y5-x3)...`, or `1` for the empty product.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for b in &self.factors {
            write!(f, "{}", b.render(self.m))?;
        }
        Ok(())
    }
}

/// `P_Q`: product of the binomials of the non-fan diagonals of `q`.
pub fn poly_for_dissection(q: &Dissection) -> FactoredPoly {
    let (m, n) = (q.m(), q.n());
    let factors = q
        .diagonals()
        .iter()
        .filter_map(|&d| binomial_for_diagonal(m, n, d).expect("diagonals of a valid dissection cross the fan"))
        .collect();
    FactoredPoly::from_factors(m, n, factors)
}

/// Distributed polynomial with exact coefficients. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly<C> {
    m: usize,
    n: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> SparsePoly<C> {
    pub fn zero(m: usize, n: usize) -> Self {
        SparsePoly { m, n, terms: BTreeMap::new() }
    }

    pub fn one(m: usize, n: usize) -> Self {
        Self::term(Monomial::one(m, n), C::one())
    }

    pub fn term(mono: Monomial, coeff: C) -> Self {
        let (m, n) = (mono.0.m(), mono.0.size());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        SparsePoly { m, n, terms }
    }

    pub fn variable(m: usize, n: usize, v: Variable) -> Self {
        Self::term(Monomial::variable(m, n, v), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> C {
        self.terms.get(mono).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in decreasing lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.leading_term().map(|(k, _)| k)
    }

    fn add_term(&mut self, mono: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(e) => {
                let s = e.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &C) -> Self {
        let mut out = Self::zero(self.m, self.n);
        for (k, v) in &self.terms {
            out.add_term(k * mono, v.clone() * c.clone());
        }
        out
    }

    /// Every coefficient, multidegree checks and the like.
    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }
}

impl<C: Ring + Integer> SparsePoly<C> {
    /// Exact quotient `self / divisor` by multivariate division in lex
    /// order; `None` if the remainder is non-zero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (dm, dc) = divisor.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.m, self.n);
        while let Some((lm, lc)) = rem.leading_term() {
            let qm = lm.checked_div(&dm)?;
            let (qc, r) = lc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }
}

impl<C: Ring> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;

    fn add(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl<C: Ring> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;

    fn sub(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }
}

impl<C: Ring> Sub for SparsePoly<C> {
    type Output = SparsePoly<C>;

    fn sub(self, rhs: SparsePoly<C>) -> SparsePoly<C> {
        &self - &rhs
    }
}

impl<C: Ring> Neg for SparsePoly<C> {
    type Output = SparsePoly<C>;

    fn neg(mut self) -> SparsePoly<C> {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl<C: Ring> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;

    fn mul(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = SparsePoly::zero(self.m, self.n);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a * b, x.clone() * y.clone());
            }
        }
        out
    }
}

impl<C: Ring + fmt::Display> fmt::Display for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms().enumerate() {
            let s = c.to_string();
            let (neg, abs) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_one() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs} {mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissection::enumerate_dissections;
    use crate::guard::Guard;
    use num_bigint::BigInt;

    type P = SparsePoly<BigInt>;

    fn reference() -> Dissection {
        let d = [(7, 10), (6, 11), (4, 11), (2, 11), (12, 15), (0, 11)];
        Dissection::new(2, 7, d.iter().map(|&(a, b)| Chord(a, b)).collect()).unwrap()
    }

    fn var(m: usize, n: usize, l: usize, k: usize) -> P {
        P::variable(m, n, Variable::new(l, k))
    }

    #[test]
    fn binomial_examples() {
        let f = binomial_for_diagonal(2, 7, Chord(7, 10)).unwrap().unwrap();
        assert_eq!(f.render(2), "(x5-y4)");
        let f = binomial_for_diagonal(2, 7, Chord(2, 11)).unwrap().unwrap();
        assert_eq!(f.render(2), "(y5-x1)");
        assert_eq!(binomial_for_diagonal(2, 7, Chord(0, 5)).unwrap(), None);
        let f = binomial_for_diagonal(2, 2, Chord(1, 4)).unwrap().unwrap();
        assert_eq!(f.render(2), "(x2-y1)");
        assert_eq!(binomial_for_diagonal(2, 3, Chord(1, 2)), Err(Error::EmptyCrossing(1, 2)));
    }

    /// Crossing sets computed by brute force agree with the closed form.
    #[test]
    fn binomial_crossing_range_matches_scan() {
        for (m, n) in [(1, 5), (2, 4), (3, 3)] {
            for q in enumerate_dissections(m, n, &Guard::standard()).unwrap() {
                for &d in q.diagonals() {
                    let crossed: Vec<usize> =
                        (1..n).filter(|&k| d.crosses(crate::dissection::fan_chord(m, k))).collect();
                    match binomial_for_diagonal(m, n, d).unwrap() {
                        None => assert!(crossed.is_empty()),
                        Some(f) => {
                            assert_eq!(f.low.index, crossed[0]);
                            assert_eq!(f.high.index, crossed[crossed.len() - 1] + 1);
                            assert!(crossed.windows(2).all(|w| w[1] == w[0] + 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reference_polynomial_text() {
        let p = poly_for_dissection(&reference());
        assert_eq!(p.to_string(), "(x5-y4)(y5-x3)(y5-x2)(y5-x1)(y7-x6)");
        assert_eq!(p.leading_monomial().to_string(), "x5 y5^3 y7");
        assert_eq!(poly_for_dissection(&Dissection::fan(2, 7)).to_string(), "1");
        assert_eq!(
            serde_json::to_string(&p.factors()[0]).unwrap(),
            "[[1,5],[2,4]]"
        );
    }

    #[test]
    fn lex_order() {
        let m = |e: &[u32]| Monomial(MVector::new(2, e.to_vec()).unwrap());
        // x2 > y1 > x1
        assert!(m(&[0, 0, 1, 0]) > m(&[0, 1, 0, 0]));
        assert!(m(&[0, 1, 0, 0]) > m(&[1, 0, 0, 0]));
        assert!(m(&[5, 5, 0, 0]) < m(&[0, 0, 1, 0]));
        assert_eq!(m(&[1, 0, 1, 2]).to_string(), "x1 x2 y2^2");
    }

    #[test]
    fn expansion() {
        let hex = Dissection::new(2, 2, vec![Chord(1, 4)]).unwrap();
        let p: P = poly_for_dissection(&hex).expand();
        assert_eq!(p, &var(2, 2, 1, 2) - &var(2, 2, 2, 1));
        assert_eq!(p.to_string(), "x2 - y1");
        let one: P = FactoredPoly::one(2, 3).expand();
        assert_eq!(one, P::one(2, 3));
        let fr: P = poly_for_dissection(&reference()).expand();
        let lm = poly_for_dissection(&reference()).leading_monomial();
        assert_eq!(fr.leading_term(), Some((&lm, &BigInt::from(1))));
        assert!(fr.len() <= 32);
    }

    #[test]
    fn leading_monomial_agrees_with_expansion() {
        for (m, n) in [(2, 3), (1, 5), (3, 3)] {
            for q in enumerate_dissections(m, n, &Guard::standard()).unwrap() {
                let p = poly_for_dissection(&q);
                let e: P = p.expand();
                assert_eq!(e.leading_monomial(), Some(&p.leading_monomial()));
                assert_eq!(p.factors().len(), q.rank());
            }
        }
    }

    #[test]
    fn divisibility_and_exact_division() {
        let qs = enumerate_dissections(2, 3, &Guard::standard()).unwrap();
        let ps: Vec<FactoredPoly> = qs.iter().map(poly_for_dissection).collect();
        for a in &ps {
            assert!(FactoredPoly::one(2, 3).divides(a));
            for b in &ps {
                let ea: P = a.expand();
                let eb: P = b.expand();
                let exact = eb.div_exact(&ea);
                assert_eq!(a.divides(b), exact.is_some(), "{a} | {b}");
                if let Some(q) = exact {
                    assert_eq!(&q * &ea, eb);
                    let cof: P = a.cofactor_in(b).unwrap().expand();
                    assert_eq!(q, cof);
                }
            }
        }
    }

    #[test]
    fn involution_examples() {
        let (img, s) = FactoredPoly::one(2, 2).involution_image();
        assert!(img.is_one() && s == 1);
        let hex = Dissection::new(2, 2, vec![Chord(1, 4)]).unwrap();
        let (img, s) = poly_for_dissection(&hex).involution_image();
        assert_eq!(img.to_string(), "(y2-x1)");
        assert_eq!(s, -1);
        // the image is P_Q of the mirrored hexagon dissection {(2,5)}
        let mirror = Dissection::new(2, 2, vec![Chord(2, 5)]).unwrap();
        assert_eq!(img, poly_for_dissection(&mirror));
    }

    #[test]
    fn div_exact_rejects_non_multiples() {
        let a = &var(1, 3, 1, 2) - &var(1, 3, 1, 1);
        let b = &var(1, 3, 1, 3) - &var(1, 3, 1, 1);
        assert!(b.div_exact(&a).is_none());
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        let two_b = b.mul_term(&Monomial::one(1, 3), &BigInt::from(2));
        assert!(b.div_exact(&two_b).is_none());
    }
}
