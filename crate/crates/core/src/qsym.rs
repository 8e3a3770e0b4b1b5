//! Fundamental `G^m`-quasisymmetric polynomials and the graded quotient by
//! the ideal they generate.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::dyck::{enumerate_dyck, vectors_of_total, MVector};
use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::linalg::rank;
use crate::poly::{letter_name, Monomial, SparsePoly, Variable};
use crate::scalar::Ring;

/// The word `w_c` of an m-composition: one group of letters per block,
/// block `b` spelling `x^{b_1} y^{b_2} ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSymWord {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl QSymWord {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(letter, block)` pairs in reading order.
    pub fn letters(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(b, ls)| ls.iter().map(move |&l| (l, b)))
    }
}

impl fmt::Display for QSymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for &l in b {
                write!(f, "{}", letter_name(self.m, l))?;
            }
        }
        Ok(())
    }
}

pub fn word_of_composition(c: &MVector) -> Result<QSymWord> {
    if !c.is_composition() {
        return Err(Error::NotAComposition(c.to_string()));
    }
    let m = c.m();
    let blocks = c
        .entries()
        .chunks(m)
        .map(|b| {
            b.iter()
                .enumerate()
                .flat_map(|(r, &e)| std::iter::repeat(r + 1).take(e as usize))
                .collect()
        })
        .collect();
    Ok(QSymWord { m, blocks })
}

/// `F_c` in the `mn` variables of index `1..=n`: the sum, over index maps
/// weakly increasing inside each block of `w_c` and strictly increasing
/// across block boundaries, of the resulting monomials. Zero when `c` has
/// more than `n` blocks.
pub fn fundamental_qsym<C: Ring>(c: &MVector, n: usize) -> Result<SparsePoly<C>> {
    let word = word_of_composition(c)?;
    let m = c.m();
    let mut out = SparsePoly::zero(m, n);
    if c.size() > n {
        return Ok(out);
    }
    let letters: Vec<(usize, usize)> = word.letters().collect();
    let mut exps = vec![0u32; m * n];
    fn rec<C: Ring>(
        m: usize,
        letters: &[(usize, usize)],
        pos: usize,
        min_index: usize,
        prev_block: Option<usize>,
        exps: &mut Vec<u32>,
        out: &mut SparsePoly<C>,
    ) {
        let n = exps.len() / m;
        if pos == letters.len() {
            let mono = Monomial(MVector::new(m, exps.clone()).expect("non-empty"));
            *out = &*out + &SparsePoly::term(mono, C::one());
            return;
        }
        let (letter, block) = letters[pos];
        let lo = match prev_block {
            Some(b) if b != block => min_index + 1,
            _ => min_index,
        };
        for idx in lo..=n {
            let p = Variable::new(letter, idx).position(m) - 1;
            exps[p] += 1;
            rec(m, letters, pos + 1, idx, Some(block), exps, out);
            exps[p] -= 1;
        }
    }
    rec(m, &letters, 0, 1, None, &mut exps, &mut out);
    Ok(out)
}

/// m-compositions with `total` equal to `t` and at most `max_size` blocks,
/// ordered by size and then lexicographically.
pub fn compositions(m: usize, t: u32, max_size: usize) -> Vec<MVector> {
    (1..=max_size)
        .flat_map(|k| vectors_of_total(m, k, t))
        .filter(MVector::is_composition)
        .collect()
}

/// All monomials of total degree `d` in the `mn` variables, in increasing
/// lex order.
pub fn monomials_of_degree(m: usize, n: usize, d: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = vectors_of_total(m, n, d).into_iter().map(Monomial).collect();
    out.sort();
    out
}

/// The degree-`d` slice of the ideal, as a matrix over the degree-`d`
/// monomial basis.
#[derive(Clone, Debug)]
pub struct GradedComponent<C> {
    pub degree: usize,
    pub monomials: Vec<Monomial>,
    pub rows: Vec<Vec<C>>,
}

impl<C: Ring> GradedComponent<C> {
    fn column_index(&self) -> HashMap<&Monomial, usize> {
        self.monomials.iter().enumerate().map(|(i, mo)| (mo, i)).collect()
    }

    fn row_of(&self, index: &HashMap<&Monomial, usize>, p: &SparsePoly<C>) -> Vec<C> {
        let mut row = vec![C::zero(); self.monomials.len()];
        for (mo, c) in p.terms() {
            row[index[mo]] = c.clone();
        }
        row
    }
}

/// Rows `mu * F_c` for every m-composition `c` with `1 <= |c| <= d` and
/// `F_c != 0`, and every monomial `mu` of degree `d - |c|`.
pub fn ideal_graded_matrix<C: Ring>(
    m: usize,
    n: usize,
    d: usize,
    guard: &Guard,
) -> Result<GradedComponent<C>> {
    if m == 0 || n == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!("m = {m}, n = {n}, d = {d}; all must be >= 1")));
    }
    let monomials = monomials_of_degree(m, n, d as u32);
    guard.check_columns(monomials.len())?;
    let mut comp = GradedComponent { degree: d, monomials, rows: Vec::new() };
    let index = comp.column_index();
    let mut rows = Vec::new();
    for t in 1..=d as u32 {
        let multipliers = monomials_of_degree(m, n, d as u32 - t);
        for c in compositions(m, t, n) {
            let f: SparsePoly<C> = fundamental_qsym(&c, n)?;
            if f.is_zero() {
                continue;
            }
            for mu in &multipliers {
                rows.push(comp.row_of(&index, &f.mul_term(mu, &C::one())));
            }
        }
    }
    drop(index);
    comp.rows = rows;
    Ok(comp)
}

/// One line of the graded verification table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeRow {
    pub d: usize,
    pub monomials: usize,
    pub ideal_rank: usize,
    pub dyck_count: usize,
    pub completed_rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub m: usize,
    pub n: usize,
    pub degrees: Vec<DegreeRow>,
}

impl QuotientReport {
    /// Graded dimensions of the quotient, degree `0..n`.
    pub fn hilbert_series(&self) -> Vec<usize> {
        self.degrees.iter().map(|r| r.monomials - r.ideal_rank).collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.hilbert_series().iter().sum()
    }

    pub fn pass(&self) -> bool {
        self.degrees.iter().all(|r| r.pass)
    }
}

fn degree_row(m: usize, n: usize, d: usize, dyck: &[MVector], guard: &Guard) -> Result<DegreeRow> {
    let dyck_d: Vec<&MVector> = dyck.iter().filter(|v| v.total() as usize == d).collect();
    if d == 0 {
        // The ideal has no constant part.
        let ok = dyck_d.len() == 1;
        return Ok(DegreeRow {
            d,
            monomials: 1,
            ideal_rank: 0,
            dyck_count: dyck_d.len(),
            completed_rank: dyck_d.len().min(1),
            pass: ok,
        });
    }
    let comp: GradedComponent<BigInt> = ideal_graded_matrix(m, n, d, guard)?;
    let cols = comp.monomials.len();
    let ideal_rank = rank(comp.rows.clone());
    let index = comp.column_index();
    let mut rows = comp.rows.clone();
    for v in &dyck_d {
        let mut e = vec![BigInt::from(0); cols];
        e[index[&Monomial((*v).clone())]] = BigInt::from(1);
        rows.push(e);
    }
    let completed_rank = rank(rows);
    let pass = ideal_rank + dyck_d.len() == cols
        && completed_rank == cols
        && (d < n || ideal_rank == cols);
    Ok(DegreeRow { d, monomials: cols, ideal_rank, dyck_count: dyck_d.len(), completed_rank, pass })
}

/// Checks, for every degree `d = 0..=n`, that the Dyck monomials of degree
/// `d` complement the ideal slice exactly, and that degree `n` lies wholly
/// in the ideal.
pub fn verify_basis_graded(m: usize, n: usize, guard: &Guard) -> Result<QuotientReport> {
    let dyck = enumerate_dyck(m, n, guard)?;
    let degrees = (0..=n)
        .into_par_iter()
        .map(|d| degree_row(m, n, d, &dyck, guard))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientReport { m, n, degrees })
}

/// Like [`verify_basis_graded`] but turns the first failing degree into an
/// error.
pub fn require_basis_graded(m: usize, n: usize, guard: &Guard) -> Result<QuotientReport> {
    let report = verify_basis_graded(m, n, guard)?;
    if let Some(bad) = report.degrees.iter().find(|r| !r.pass) {
        return Err(Error::VerificationFailure {
            degree: bad.d,
            detail: format!(
                "{} monomials, ideal rank {}, {} Dyck monomials, completed rank {}",
                bad.monomials, bad.ideal_rank, bad.dyck_count, bad.completed_rank
            ),
        });
    }
    Ok(report)
}
