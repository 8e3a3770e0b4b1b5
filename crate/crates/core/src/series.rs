//! Truncated power series and the enumerative generating functions of the
//! flip posets.
//!
//! `T` counts M-angulations, `F` final ones, `G` refines by rank (second
//! variable `z`) and `I` counts intervals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Power series `c_0 + c_1 x + ... + c_N x^N`, exact modulo `x^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> Series<C> {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, C::one())
    }

    pub fn constant(order: usize, c: C) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// Pads or truncates `coeffs` to `order`.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficients of `x^1 .. x^N`.
    pub fn positive_part(&self) -> &[C] {
        &self.coeffs[1..]
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.order()), |acc, _| &acc * self)
    }

    /// `self(inner)`, where `inner` has no constant term. Horner scheme.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesMismatch("inner series of a composition has a constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = Self::from_coeffs(order, inner.coeffs.clone());
        let mut acc = Self::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &(&acc * &inner) + &Self::constant(order, c.clone());
        }
        Ok(acc)
    }

    /// `1 / self` for a series with constant term one.
    pub fn inverse_unit(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesMismatch("only series with constant term 1 are inverted".into()));
        }
        let n = self.order();
        let mut b = vec![C::one()];
        for k in 1..=n {
            let s = (1..=k).fold(C::zero(), |s, j| s + self.coeffs[j].clone() * b[k - j].clone());
            b.push(-s);
        }
        Ok(Series { coeffs: b })
    }

    /// `self(z x) / z`-style reindexing: maps the coefficient of `x^k` through
    /// `f(k, c)`.
    pub fn map_indexed<D: Ring>(&self, f: impl Fn(usize, &C) -> D) -> Series<D> {
        Series { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect() }
    }
}

impl<C: Ring> Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, o: &Series<C>) -> Series<C> {
        let n = self.order().min(o.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].clone() + o.coeffs[k].clone()).collect() }
    }
}

impl<C: Ring> Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, o: &Series<C>) -> Series<C> {
        let n = self.order().min(o.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].clone() - o.coeffs[k].clone()).collect() }
    }
}

impl<C: Ring> Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, o: &Series<C>) -> Series<C> {
        let n = self.order().min(o.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs: out }
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Polynomial in a single variable `z`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> ZPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    /// `c z^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_one(&self) -> C {
        self.coeffs.iter().cloned().fold(C::zero(), |a, b| a + b)
    }
}

impl<C: Ring> Add for ZPoly<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<C: Ring> Sub for ZPoly<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<C: Ring> Neg for ZPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        ZPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<C: Ring> Mul for ZPoly<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<C: Ring> Zero for ZPoly<C> {
    fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Ring> One for ZPoly<C> {
    fn one() -> Self {
        ZPoly { coeffs: vec![C::one()] }
    }
}

impl<C: Ring + fmt::Display> fmt::Display for ZPoly<C> {
    /// `1 + 4z + 7z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let unit = c.is_one() && k > 0;
            match (k, unit) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{c}z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{c}z^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

type Q = BigRational;

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParameters("truncation order must be >= 1".into()));
    }
    Ok(())
}

/// `T = x (1 + T)^{m+1}` by fixed-point iteration; each pass fixes one more
/// coefficient.
pub fn series_t(m: usize, order: usize) -> Result<Series<Q>> {
    check_order(order)?;
    let x = Series::x(order);
    let one = Series::one(order);
    let mut t = Series::zero(order);
    for _ in 0..order {
        t = &x * &(&one + &t).pow(m + 1);
    }
    Ok(t)
}

/// `x (1 + T)^{m+1} - T`, zero to the truncation order.
pub fn t_residual(m: usize, t: &Series<Q>) -> Series<Q> {
    let order = t.order();
    &(&Series::x(order) * &(&Series::one(order) + t).pow(m + 1)) - t
}

/// `F = x (1 + T)^m`, checked against `T / (1 + T)`.
pub fn series_f(m: usize, order: usize) -> Result<Series<Q>> {
    let t = series_t(m, order)?;
    let (a, b) = f_both_forms(m, &t)?;
    if a != b {
        return Err(Error::SeriesMismatch(format!("x(1+T)^m = {a} but T/(1+T) = {b}")));
    }
    Ok(a)
}

fn f_both_forms(m: usize, t: &Series<Q>) -> Result<(Series<Q>, Series<Q>)> {
    let order = t.order();
    let one_t = &Series::one(order) + t;
    let a = &Series::x(order) * &one_t.pow(m);
    let b = t * &one_t.inverse_unit()?;
    Ok((a, b))
}

/// `F - T / (1 + T)` for the `F` returned by [`series_f`].
pub fn f_residual(m: usize, order: usize) -> Result<Series<Q>> {
    let t = series_t(m, order)?;
    let (a, b) = f_both_forms(m, &t)?;
    Ok(&a - &b)
}

/// `G = H / (1 - H)` with `H = F(z x) / z`, expanded as `H + H^2 + ...`
/// (valid because `H` has no constant term). The coefficient of `x^n` is the
/// rank generating polynomial of the flip poset of size `n`.
pub fn series_g(m: usize, order: usize) -> Result<Series<ZPoly<Q>>> {
    let f = series_f(m, order)?;
    let h: Series<ZPoly<Q>> = f.map_indexed(|k, c| {
        if k == 0 {
            ZPoly::zero()
        } else {
            ZPoly::monomial(c.clone(), k - 1)
        }
    });
    let mut g = Series::zero(order);
    let mut power = h.clone();
    for _ in 1..=order {
        g = &g + &power;
        power = &power * &h;
    }
    Ok(g)
}

/// `I = T(F)`, checked against `T(x (1 + T)^m)` built from the other form of
/// `F`.
pub fn series_i(m: usize, order: usize) -> Result<Series<Q>> {
    let t = series_t(m, order)?;
    let (fa, fb) = f_both_forms(m, &t)?;
    let ia = t.compose(&fa)?;
    let ib = t.compose(&fb)?;
    if ia != ib {
        return Err(Error::SeriesMismatch(format!("T(F) disagrees between the two forms of F: {ia} vs {ib}")));
    }
    Ok(ia)
}

/// `(1 / (mn + 1)) C((m + 1) n, n)`.
pub fn fuss_catalan(m: usize, n: usize) -> BigInt {
    let b: BigInt = binomial(BigInt::from((m + 1) * n), BigInt::from(n));
    b / BigInt::from(m * n + 1)
}

/// `sum_{k<n} ((n - k) / n) C(mn + k - 1, k) z^k`. The coefficients are
/// integers; a non-integral one is reported as an error.
pub fn rank_polynomial(m: usize, n: usize) -> Result<ZPoly<BigInt>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameters(format!("m = {m}, n = {n}; both must be >= 1")));
    }
    let coeffs = (0..n)
        .map(|k| {
            let c: BigInt = if k == 0 {
                BigInt::one()
            } else {
                binomial(BigInt::from(m * n + k - 1), BigInt::from(k))
            };
            let (quot, rem) = (c * BigInt::from(n - k)).div_rem(&BigInt::from(n));
            if rem.is_zero() {
                Ok(quot)
            } else {
                Err(Error::SeriesMismatch(format!("rank coefficient z^{k} of ({m},{n}) is not integral")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZPoly::new(coeffs))
}

/// Converts integral rational coefficients to integers.
pub fn integer_coeffs(s: &[Q]) -> Result<Vec<BigInt>> {
    s.iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::SeriesMismatch(format!("non-integral coefficient {c}")))
            }
        })
        .collect()
}

/// Integer version of a `z`-polynomial with rational coefficients.
pub fn integer_zpoly(p: &ZPoly<Q>) -> Result<ZPoly<BigInt>> {
    Ok(ZPoly::new(integer_coeffs(p.coeffs())?))
}

/// Residuals of the three defining identities up to `order`; all must vanish.
pub fn identity_residuals(m: usize, order: usize) -> Result<[Series<Q>; 3]> {
    let t = series_t(m, order)?;
    let (fa, fb) = f_both_forms(m, &t)?;
    let i = t.compose(&fa)?;
    let i_alt = t.compose(&fb)?;
    Ok([t_residual(m, &t), &fa - &fb, &i - &i_alt])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn ints(s: &Series<Q>) -> Vec<i64> {
        integer_coeffs(s.positive_part())
            .unwrap()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    fn zp(v: &[i64]) -> ZPoly<BigInt> {
        ZPoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn t_examples() {
        assert_eq!(ints(&series_t(2, 4).unwrap()), [1, 3, 12, 55]);
        assert_eq!(ints(&series_t(1, 4).unwrap()), [1, 2, 5, 14]);
        assert_eq!(ints(&series_t(3, 1).unwrap()), [1]);
        assert!(series_t(2, 0).is_err());
    }

    #[test]
    fn t_matches_closed_form() {
        for m in 1..=4 {
            let t = series_t(m, 10).unwrap();
            for n in 1..=10 {
                assert_eq!(t.coeff(n), &Q::from_integer(fuss_catalan(m, n)));
            }
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(ints(&series_f(2, 4).unwrap()), [1, 2, 7, 30]);
        assert_eq!(ints(&series_f(1, 3).unwrap()), [1, 1, 2]);
        assert_eq!(ints(&series_f(3, 5).unwrap()), [1, 3, 15, 91, 612]);
    }

    #[test]
    fn g_examples() {
        let g = series_g(2, 4).unwrap();
        assert_eq!(integer_zpoly(g.coeff(3)).unwrap(), zp(&[1, 4, 7]));
        let g1 = series_g(1, 3).unwrap();
        assert_eq!(integer_zpoly(g1.coeff(3)).unwrap(), zp(&[1, 2, 2]));
        for n in 1..=4 {
            assert_eq!(g.coeff(n).coeff(0), q(1));
        }
    }

    #[test]
    fn g_matches_rank_polynomial() {
        for m in 1..=3 {
            let g = series_g(m, 8).unwrap();
            for n in 1..=8 {
                let r = rank_polynomial(m, n).unwrap();
                assert_eq!(integer_zpoly(g.coeff(n)).unwrap(), r);
                assert_eq!(r.eval_one(), fuss_catalan(m, n));
                let f = series_f(m, 8).unwrap();
                assert_eq!(Q::from_integer(r.coeff(n - 1)), f.coeff(n).clone());
            }
        }
    }

    #[test]
    fn rank_polynomial_examples() {
        assert_eq!(rank_polynomial(2, 3).unwrap(), zp(&[1, 4, 7]));
        assert_eq!(rank_polynomial(1, 3).unwrap(), zp(&[1, 2, 2]));
        assert_eq!(rank_polynomial(2, 3).unwrap().to_string(), "1 + 4z + 7z^2");
        assert_eq!(rank_polynomial(3, 1).unwrap(), zp(&[1]));
    }

    #[test]
    fn i_examples() {
        assert_eq!(ints(&series_i(2, 3).unwrap()), [1, 5, 31]);
        assert_eq!(ints(&series_i(1, 3).unwrap()), [1, 3, 11]);
        assert_eq!(ints(&series_i(1, 10).unwrap()), [1, 3, 11, 44, 185, 804, 3579, 16229, 74690, 347984]);
        assert_eq!(ints(&series_i(3, 5).unwrap()), [1, 7, 61, 585, 5933]);
    }

    #[test]
    fn residuals_vanish() {
        for m in 1..=4 {
            for r in identity_residuals(m, 10).unwrap() {
                assert!(r.is_zero());
                assert_eq!(r.order(), 10);
            }
        }
    }

    #[test]
    fn inverse_and_compose() {
        let x = Series::<Q>::x(5);
        let one = Series::one(5);
        let geo = (&one - &x).inverse_unit().unwrap();
        assert!(geo.coeffs().iter().all(|c| *c == q(1)));
        // (1/(1-x)) o (x^2) = 1/(1-x^2)
        let sq = &x * &x;
        let c = geo.compose(&sq).unwrap();
        assert_eq!(ints(&c), [0, 1, 0, 1, 0]);
        assert!(geo.compose(&one).is_err());
    }
}
