//! Intervals of the flip poset: Möbius values, decomposition into a glued
//! pair, the order-ideal structure and product factorizations.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::dissection::{glue_g, glue_layout, Chord, Dissection};
use crate::error::{Error, Result};
use crate::poset::{FlipPoset, PosetFamily};

/// Intervals up to this size also get the explicit all-pairs join/meet test.
pub const EXPLICIT_LATTICE_LIMIT: usize = 512;

/// `[bottom, top]`, elements in canonical order.
#[derive(Clone, Debug)]
pub struct Interval<'p> {
    poset: &'p FlipPoset,
    bottom: usize,
    top: usize,
    elements: Vec<usize>,
}

impl<'p> Interval<'p> {
    pub fn new(poset: &'p FlipPoset, bottom: usize, top: usize) -> Result<Self> {
        if !poset.leq(bottom, top) {
            return Err(Error::NotAnInterval(format!(
                "{}, {}",
                poset.element(bottom),
                poset.element(top)
            )));
        }
        let elements = poset
            .up_set(bottom)
            .intersection(poset.down_set(top))
            .collect();
        Ok(Interval { poset, bottom, top, elements })
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn lower_covers_inside(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.poset.lower_covers(x).iter().copied().filter(|&w| self.poset.leq(self.bottom, w))
    }

    fn covers_inside(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.poset.covers(x).iter().copied().filter(|&w| self.poset.leq(w, self.top))
    }

    /// Elements covering exactly one element of the interval.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.elements
            .iter()
            .copied()
            .filter(|&x| self.lower_covers_inside(x).count() == 1)
            .collect()
    }

    /// Multiset of `(rank above bottom, covers inside, lower covers inside)`.
    pub fn degree_profile(&self) -> Profile {
        let base = self.poset.rank(self.bottom);
        let mut p = Profile::default();
        for &x in &self.elements {
            let key = (
                self.poset.rank(x) - base,
                self.covers_inside(x).count(),
                self.lower_covers_inside(x).count(),
            );
            *p.0.entry(key).or_default() += 1;
        }
        p
    }

    /// Möbius value by the defining recursion.
    pub fn mobius(&self) -> i64 {
        mobius_from(self.poset, self.bottom)[&self.top]
    }
}

/// `mu(bottom, z)` for every `z >= bottom`.
pub fn mobius_from(poset: &FlipPoset, bottom: usize) -> HashMap<usize, i64> {
    let up = poset.up_set(bottom);
    let mut mu: HashMap<usize, i64> = HashMap::with_capacity(up.count_ones(..));
    for &z in poset.by_rank().iter().filter(|&&z| up.contains(z)) {
        let v = if z == bottom {
            1
        } else {
            -poset
                .down_set(z)
                .intersection(up)
                .filter(|&w| w != z)
                .map(|w| mu[&w])
                .sum::<i64>()
        };
        mu.insert(z, v);
    }
    mu
}

/// Multiset of degree triples; products of posets add triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Profile(pub HashMap<(usize, usize, usize), u64>);

impl Profile {
    pub fn size(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn product(&self, other: &Profile) -> Profile {
        let mut out = Profile::default();
        for (a, &ca) in &self.0 {
            for (b, &cb) in &other.0 {
                *out.0.entry((a.0 + b.0, a.1 + b.1, a.2 + b.2)).or_default() += ca * cb;
            }
        }
        out
    }

    pub fn one() -> Profile {
        Profile(HashMap::from([((0, 0, 0), 1)]))
    }
}

/// A finite poset in which every element is covered by at most one element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestPoset {
    /// Poset indices of the nodes.
    pub nodes: Vec<usize>,
    /// Local index of the element covering each node.
    pub parent: Vec<Option<usize>>,
}

impl ForestPoset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_antichain(&self) -> bool {
        self.parent.iter().all(Option::is_none)
    }

    /// Number of down-closed subsets; `None` on overflow.
    pub fn order_ideal_count(&self) -> Option<u128> {
        let k = self.len();
        let mut children = vec![Vec::new(); k];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(i);
            }
        }
        fn count(i: usize, children: &[Vec<usize>]) -> Option<u128> {
            let mut prod: u128 = 1;
            for &c in &children[i] {
                prod = prod.checked_mul(count(c, children)?)?;
            }
            prod.checked_add(1)
        }
        let mut total: u128 = 1;
        for r in (0..k).filter(|&i| self.parent[i].is_none()) {
            total = total.checked_mul(count(r, &children)?)?;
        }
        Some(total)
    }
}

/// What [`interval_structure`] established about an interval.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalStructure {
    pub size: usize,
    pub forest: ForestPoset,
    pub order_ideals: u128,
    pub distributive: bool,
    /// Möbius value read off the forest: `(-1)^|J|` for an antichain, else 0.
    pub mobius: i64,
    /// Whether the explicit all-pairs join/meet test was run.
    pub explicit_lattice_check: bool,
}

fn violation(iv: &Interval<'_>, what: impl std::fmt::Display) -> Error {
    Error::StructureViolation(format!(
        "[{}, {}]: {what}",
        iv.poset.element(iv.bottom),
        iv.poset.element(iv.top)
    ))
}

/// Shows that the interval is isomorphic to the lattice of order ideals of
/// the forest formed by its join-irreducibles, via `x -> {j <= x}`.
///
/// Steps: the join-irreducibles form a forest; the map is injective and
/// hits as many sets as the forest has order ideals; adding one admissible
/// node to an ideal moves the preimage up. Together these give an order
/// isomorphism, hence a distributive lattice.
pub fn interval_structure(iv: &Interval<'_>) -> Result<IntervalStructure> {
    let p = iv.poset;
    let j = iv.join_irreducibles();
    if j.len() > 64 {
        return Err(violation(iv, format!("{} join-irreducibles exceed the 64-bit mask", j.len())));
    }
    let mut parent = vec![None; j.len()];
    let mut strictly_below = vec![0u64; j.len()];
    for (a, &ja) in j.iter().enumerate() {
        let uppers: Vec<usize> = (0..j.len()).filter(|&b| b != a && p.leq(ja, j[b])).collect();
        for &b in &uppers {
            strictly_below[b] |= 1 << a;
        }
        let minimal: Vec<usize> = uppers
            .iter()
            .copied()
            .filter(|&b| !uppers.iter().any(|&c| c != b && p.leq(j[c], j[b])))
            .collect();
        match minimal.as_slice() {
            [] => {}
            [b] => parent[a] = Some(*b),
            _ => return Err(violation(iv, format!("{} is covered by {} join-irreducibles", p.element(ja), minimal.len()))),
        }
    }
    let forest = ForestPoset { nodes: j.clone(), parent };
    let order_ideals = forest
        .order_ideal_count()
        .ok_or_else(|| violation(iv, "order ideal count overflows"))?;

    let mask_of = |x: usize| -> u64 {
        j.iter()
            .enumerate()
            .filter(|&(_, &jj)| p.leq(jj, x))
            .fold(0, |m, (a, _)| m | (1 << a))
    };
    let mut preimage: HashMap<u64, usize> = HashMap::with_capacity(iv.len());
    let mut masks = Vec::with_capacity(iv.len());
    for &x in &iv.elements {
        let mk = mask_of(x);
        if let Some(&y) = preimage.get(&mk) {
            return Err(violation(iv, format!("{} and {} lie above the same join-irreducibles", p.element(y), p.element(x))));
        }
        preimage.insert(mk, x);
        masks.push((x, mk));
    }
    if iv.len() as u128 != order_ideals {
        return Err(violation(iv, format!("{} elements but {order_ideals} order ideals", iv.len())));
    }
    for &(x, mk) in &masks {
        for a in (0..j.len()).filter(|&a| mk & (1 << a) == 0 && strictly_below[a] & !mk == 0) {
            match preimage.get(&(mk | 1 << a)) {
                Some(&y) if p.leq(x, y) => {}
                _ => return Err(violation(iv, format!("adding {} to the ideal of {} leaves the order", p.element(j[a]), p.element(x)))),
            }
        }
    }

    let explicit = iv.len() <= EXPLICIT_LATTICE_LIMIT;
    if explicit {
        explicit_lattice_check(iv)?;
    }
    let mobius = if forest.is_antichain() {
        if j.len() % 2 == 0 { 1 } else { -1 }
    } else {
        0
    };
    Ok(IntervalStructure {
        size: iv.len(),
        forest,
        order_ideals,
        distributive: true,
        mobius,
        explicit_lattice_check: explicit,
    })
}

/// Every pair has a least upper bound and a greatest lower bound inside the
/// interval.
pub fn explicit_lattice_check(iv: &Interval<'_>) -> Result<()> {
    let p = iv.poset;
    let mut order = iv.elements.clone();
    order.sort_by_key(|&x| (p.rank(x), x));
    let k = order.len();
    let mut ups = vec![FixedBitSet::with_capacity(k); k];
    let mut downs = vec![FixedBitSet::with_capacity(k); k];
    for a in 0..k {
        for b in a..k {
            if p.leq(order[a], order[b]) {
                ups[a].insert(b);
                downs[b].insert(a);
            }
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            let mut s = ups[a].clone();
            s.intersect_with(&ups[b]);
            let join_ok = s.minimum().is_some_and(|u| s.is_subset(&ups[u]));
            let mut t = downs[a].clone();
            t.intersect_with(&downs[b]);
            let meet_ok = t.maximum().is_some_and(|u| t.is_subset(&downs[u]));
            if !join_ok || !meet_ok {
                let which = if join_ok { "meet" } else { "join" };
                return Err(violation(
                    iv,
                    format!("{} and {} have no {which}", p.element(order[a]), p.element(order[b])),
                ));
            }
        }
    }
    Ok(())
}

/// `(B0, parts)` with `parts = cut_l(bottom)` and `glue_g(B0, parts) = top`;
/// also checks `glue_g(fan, parts) = bottom`.
pub fn interval_decompose(bottom: &Dissection, top: &Dissection) -> Result<(Dissection, Vec<Dissection>)> {
    let fail = |why: String| Error::DecompositionFailure(format!("[{bottom}, {top}]: {why}"));
    let m = bottom.m();
    let parts = bottom.cut_l();
    let k = parts.len();
    let (mapped, hull) = glue_layout(&parts);
    let mapped: HashSet<Chord> = mapped.into_iter().collect();
    let position = |v: usize| hull.binary_search(&v).map_err(|_| fail(format!("vertex {v} is off the hull")));
    let mut b0 = Vec::new();
    for &c in top.diagonals().iter().filter(|c| !mapped.contains(c)) {
        b0.push(Chord(position(c.0)?, position(c.1)?));
    }
    let b0 = Dissection::new(m, k, b0).map_err(|e| fail(e.to_string()))?;
    if glue_g(&b0, &parts)? != *top {
        return Err(fail(format!("gluing {b0} does not give back the top")));
    }
    if glue_g(&Dissection::fan(m, k), &parts)? != *bottom {
        return Err(fail("gluing the fan does not give back the bottom".into()));
    }
    Ok((b0, parts))
}

fn initial_profile(family: &PosetFamily, q: &Dissection) -> Result<Profile> {
    let small = family.get(q.m(), q.n())?;
    let top = small.index_of(q).expect("element of its own poset");
    Ok(Interval::new(&small, small.bottom(), top)?.degree_profile())
}

/// `[fan, top]` has the size and degree profile of the product of the
/// intervals `[fan, piece]` over the pieces of `cut_l(top)`.
pub fn initial_factorization_check(poset: &FlipPoset, family: &PosetFamily, top: usize) -> Result<bool> {
    let whole = Interval::new(poset, poset.bottom(), top)?.degree_profile();
    let pieces = poset.element(top).cut_l();
    if pieces.len() == 1 {
        return Ok(true);
    }
    let mut prod = Profile::one();
    for piece in &pieces {
        prod = prod.product(&initial_profile(family, piece)?);
    }
    Ok(prod == whole)
}

/// For final `top`, `[fan, top]` has the size and degree profile of the
/// product of the width-one intervals obtained by keeping one block at a
/// time.
pub fn width_one_factorization_check(poset: &FlipPoset, family: &PosetFamily, top: usize) -> Result<bool> {
    let q = poset.element(top);
    let spans = q.block_spans()?;
    let whole = Interval::new(poset, poset.bottom(), top)?.degree_profile();
    let mut prod = Profile::one();
    for (lo, hi) in spans {
        let factor = q.isolate_block(lo, hi)?;
        if factor.width_and_blocks()?.0 != 1 {
            return Ok(false);
        }
        prod = prod.product(&initial_profile(family, &factor)?);
    }
    Ok(prod == whole)
}

/// Outcome of checking every interval of a poset.
#[derive(Clone, Debug, Default, Serialize)]
pub struct IntervalSweep {
    pub intervals: usize,
    pub largest: usize,
    pub explicitly_checked: usize,
    /// Counts of Möbius values `-1`, `0`, `1`.
    pub mobius_histogram: [usize; 3],
    /// First offending `(bottom, top, reason)`.
    pub failure: Option<(usize, usize, String)>,
}

impl IntervalSweep {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }

    fn merge(mut self, o: IntervalSweep) -> IntervalSweep {
        self.intervals += o.intervals;
        self.largest = self.largest.max(o.largest);
        self.explicitly_checked += o.explicitly_checked;
        for i in 0..3 {
            self.mobius_histogram[i] += o.mobius_histogram[i];
        }
        self.failure = match (self.failure, o.failure) {
            (Some(a), Some(b)) => Some(if (a.0, a.1) <= (b.0, b.1) { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

fn sweep_bottom(poset: &FlipPoset, a: usize) -> IntervalSweep {
    let mut out = IntervalSweep::default();
    let mu = mobius_from(poset, a);
    for b in poset.up_set(a).ones() {
        let iv = match Interval::new(poset, a, b) {
            Ok(iv) => iv,
            Err(e) => {
                out.failure = Some((a, b, e.to_string()));
                return out;
            }
        };
        out.intervals += 1;
        out.largest = out.largest.max(iv.len());
        let m = mu[&b];
        let check = (|| -> Result<()> {
            let s = interval_structure(&iv)?;
            if s.explicit_lattice_check {
                out.explicitly_checked += 1;
            }
            if !(-1..=1).contains(&m) {
                return Err(violation(&iv, format!("Möbius value {m}")));
            }
            if s.mobius != m {
                return Err(violation(&iv, format!("Möbius value {m}, forest predicts {}", s.mobius)));
            }
            interval_decompose(poset.element(a), poset.element(b))?;
            Ok(())
        })();
        if let Err(e) = check {
            out.failure = Some((a, b, e.to_string()));
            return out;
        }
        out.mobius_histogram[(m + 1) as usize] += 1;
    }
    out
}

/// Structure, Möbius and decomposition checks on every interval, in
/// parallel over bottoms.
pub fn sweep_intervals(poset: &FlipPoset) -> IntervalSweep {
    (0..poset.len())
        .into_par_iter()
        .map(|a| sweep_bottom(poset, a))
        .reduce(IntervalSweep::default, IntervalSweep::merge)
}
