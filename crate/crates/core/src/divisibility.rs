//! The divisibility order on `{P_Q}` compared with the flip order, and the
//! symmetry of the polynomial family.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{poly_for_dissection, BinomialFactor, FactoredPoly, SparsePoly};
use crate::poset::FlipPoset;

#[derive(Clone, Debug, Default, Serialize)]
pub struct DivisibilityReport {
    pub elements: usize,
    /// Pairs `(Q, Q')` with `P_Q | P_Q'`.
    pub divisible_pairs: usize,
    /// Pairs `Q <= Q'`.
    pub comparable_pairs: usize,
    /// First `Q'` (poset index) whose divisors differ from its down-set.
    pub mismatch: Option<usize>,
    /// First cover whose cofactor is not a single binomial.
    pub bad_cover: Option<(usize, usize)>,
}

impl DivisibilityReport {
    pub fn pass(&self) -> bool {
        self.mismatch.is_none() && self.bad_cover.is_none() && self.divisible_pairs == self.comparable_pairs
    }
}

/// Distinct sub-multisets of a sorted factor list.
fn sub_multisets(factors: &[BinomialFactor], emit: &mut impl FnMut(&[BinomialFactor])) {
    let mut groups: Vec<(BinomialFactor, usize)> = Vec::new();
    for f in factors {
        match groups.last_mut() {
            Some((g, c)) if g == f => *c += 1,
            _ => groups.push((*f, 1)),
        }
    }
    fn rec(
        groups: &[(BinomialFactor, usize)],
        cur: &mut Vec<BinomialFactor>,
        emit: &mut impl FnMut(&[BinomialFactor]),
    ) {
        let Some(((f, c), rest)) = groups.split_first() else {
            emit(cur);
            return;
        };
        let len = cur.len();
        for k in 0..=*c {
            if k > 0 {
                cur.push(*f);
            }
            rec(rest, cur, emit);
        }
        cur.truncate(len);
    }
    rec(&groups, &mut Vec::new(), emit);
}

/// Compares `{Q : P_Q | P_Q'}` with `{Q : Q <= Q'}` for every `Q'`, and
/// checks that along each cover the cofactor is one binomial.
pub fn divisibility_check(poset: &FlipPoset) -> Result<DivisibilityReport> {
    let polys: Vec<FactoredPoly> = poset.elements().iter().map(poly_for_dissection).collect();
    let by_factors: HashMap<&[BinomialFactor], usize> =
        polys.iter().enumerate().map(|(i, p)| (p.factors(), i)).collect();
    if by_factors.len() != polys.len() {
        return Err(Error::StructureViolation("two dissections share a polynomial".into()));
    }
    let per_top: Vec<(usize, usize, bool)> = (0..poset.len())
        .into_par_iter()
        .map(|t| {
            let mut divisors = FixedBitSet::with_capacity(poset.len());
            sub_multisets(polys[t].factors(), &mut |sub| {
                if let Some(&i) = by_factors.get(sub) {
                    divisors.insert(i);
                }
            });
            let below = poset.down_set(t);
            (divisors.count_ones(..), below.count_ones(..), divisors == *below)
        })
        .collect();
    let mut report = DivisibilityReport { elements: poset.len(), ..Default::default() };
    for (t, &(d, c, same)) in per_top.iter().enumerate() {
        report.divisible_pairs += d;
        report.comparable_pairs += c;
        if !same && report.mismatch.is_none() {
            report.mismatch = Some(t);
        }
    }
    'covers: for a in 0..poset.len() {
        for &b in poset.covers(a) {
            let ok = polys[a].cofactor_in(&polys[b]).is_some_and(|c| c.factors().len() == 1);
            if !ok {
                report.bad_cover = Some((a, b));
                break 'covers;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DivisionSample {
    pub sampled: usize,
    pub divisible: usize,
    /// First pair where factor inclusion and exact division disagree.
    pub disagreement: Option<(usize, usize)>,
}

/// Up to `count` pairs, spread evenly over all ordered pairs, on which
/// factor-multiset divisibility is compared with exact long division of the
/// expanded polynomials.
pub fn exact_division_sample(poset: &FlipPoset, count: usize) -> DivisionSample {
    let len = poset.len();
    let total = len * len;
    let step = (total / count.max(1)).max(1);
    let mut cache: HashMap<usize, SparsePoly<BigInt>> = HashMap::new();
    let mut out = DivisionSample::default();
    let expand = |i: usize, cache: &mut HashMap<usize, SparsePoly<BigInt>>| {
        cache
            .entry(i)
            .or_insert_with(|| poly_for_dissection(poset.element(i)).expand())
            .clone()
    };
    // Comparable pairs are rare in a large poset, so every other sample is
    // drawn from a down-set.
    let mut k = 0;
    while out.sampled < count && k < total {
        let (a, b) = if out.sampled % 2 == 0 {
            (k / len, k % len)
        } else {
            let b = (k / len + k % len) % len;
            let below: Vec<usize> = poset.down_set(b).ones().collect();
            (below[k % below.len()], b)
        };
        k += step;
        let pa = poly_for_dissection(poset.element(a));
        let pb = poly_for_dissection(poset.element(b));
        let by_factors = pa.divides(&pb);
        let ea = expand(a, &mut cache);
        let eb = expand(b, &mut cache);
        let by_division = eb.div_exact(&ea).is_some();
        out.sampled += 1;
        if by_factors {
            out.divisible += 1;
        }
        if by_factors != by_division && out.disagreement.is_none() {
            out.disagreement = Some((a, b));
        }
    }
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InvolutionReport {
    pub elements: usize,
    /// Elements whose image is some `±P_Q'`.
    pub closed: usize,
    /// Whether the images are pairwise distinct.
    pub bijective: bool,
    /// Elements whose image sign differs from `(-1)^rank`.
    pub sign_exceptions: usize,
    /// First element whose image is not in the family.
    pub counterexample: Option<usize>,
}

impl InvolutionReport {
    pub fn pass(&self) -> bool {
        self.closed == self.elements && self.bijective
    }
}

/// Applies the letter-and-index symmetry to every `P_Q`.
pub fn involution_check(poset: &FlipPoset) -> InvolutionReport {
    let polys: Vec<FactoredPoly> = poset.elements().iter().map(poly_for_dissection).collect();
    let index: HashMap<&FactoredPoly, usize> = polys.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut report = InvolutionReport { elements: polys.len(), ..Default::default() };
    let mut hit = FixedBitSet::with_capacity(polys.len());
    for (i, p) in polys.iter().enumerate() {
        let (img, sign) = p.involution_image();
        let expected = if poset.rank(i) % 2 == 0 { 1 } else { -1 };
        if sign != expected {
            report.sign_exceptions += 1;
        }
        match index.get(&img) {
            Some(&j) => {
                report.closed += 1;
                hit.insert(j);
            }
            None if report.counterexample.is_none() => report.counterexample = Some(i),
            None => {}
        }
    }
    report.bijective = hit.count_ones(..) == report.closed;
    report
}
