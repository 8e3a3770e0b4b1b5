//! M-angulations of the convex `(mn+2)`-gon.
//!
//! Vertices are numbered `0..=mn+1` counter-clockwise, with the apex of the
//! fan at `0`. A dissection is stored as its sorted list of diagonals, which
//! doubles as the equality and hashing key.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guard::Guard;

/// A diagonal `(a, b)` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord(pub usize, pub usize);

impl Chord {
    /// Builds a chord from two endpoints given in either order.
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Chord(a, b)
        } else {
            Chord(b, a)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn has_endpoint(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// True iff `v` lies strictly inside the arc `lo..hi`.
    pub fn encloses(self, v: usize) -> bool {
        self.0 < v && v < self.1
    }

    /// True iff `u` and `v` lie strictly on opposite sides of the chord.
    pub fn separates(self, u: usize, v: usize) -> bool {
        if self.has_endpoint(u) || self.has_endpoint(v) {
            return false;
        }
        self.encloses(u) != self.encloses(v)
    }

    pub fn crosses(self, other: Chord) -> bool {
        chords_cross(self, other)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Interleaving test for two chords of a convex polygon. Chords sharing an
/// endpoint never cross.
pub fn chords_cross(c1: Chord, c2: Chord) -> bool {
    let Chord(a1, b1) = c1;
    let Chord(a2, b2) = c2;
    (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1)
}

/// Letter index (`1` for `x`, ..., `m` for the last letter) carried by the
/// non-apex vertex `i`. Vertices `1` and `mn+1` both get the last letter.
pub fn vertex_label(m: usize, i: usize) -> usize {
    debug_assert!(i >= 1);
    (i + m - 2) % m + 1
}

/// The `k`-th diagonal of the fan, `1 <= k <= n-1`.
pub fn fan_chord(m: usize, k: usize) -> Chord {
    Chord(0, m * k + 1)
}

/// Whether `c` is one of the diagonals of the fan for `(m, n)`.
pub fn is_fan_chord(m: usize, n: usize, c: Chord) -> bool {
    c.0 == 0 && c.1 > 1 && (c.1 - 1) % m == 0 && (c.1 - 1) / m < n
}

/// A region of a dissection, as its vertex list in counter-clockwise order
/// (which is increasing index order).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Region(pub Vec<usize>);

impl Region {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

#[derive(Deserialize)]
struct RawDissection {
    m: usize,
    n: usize,
    diagonals: Vec<Chord>,
}

impl TryFrom<RawDissection> for Dissection {
    type Error = Error;

    fn try_from(raw: RawDissection) -> Result<Self> {
        Dissection::new(raw.m, raw.n, raw.diagonals)
    }
}

/// An M-angulation of the `(mn+2)`-gon.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDissection")]
pub struct Dissection {
    m: usize,
    n: usize,
    diagonals: Vec<Chord>,
}

impl Dissection {
    /// Validates and canonicalizes a set of diagonals.
    pub fn new(m: usize, n: usize, diagonals: Vec<Chord>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameters(format!("m = {m}, n = {n}; both must be >= 1")));
        }
        let mut diagonals: Vec<Chord> = diagonals.into_iter().map(|c| Chord::new(c.0, c.1)).collect();
        diagonals.sort_unstable();
        let q = Dissection { m, n, diagonals };
        q.validate()?;
        Ok(q)
    }

    /// Skips validation; `diagonals` must already be a sorted valid set.
    pub(crate) fn from_sorted_unchecked(m: usize, n: usize, diagonals: Vec<Chord>) -> Self {
        debug_assert!(diagonals.windows(2).all(|w| w[0] < w[1]));
        Dissection { m, n, diagonals }
    }

    /// The fan `Q0`: every diagonal meets the apex.
    pub fn fan(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "fan needs m, n >= 1");
        let diagonals = (1..n).map(|k| fan_chord(m, k)).collect();
        Dissection { m, n, diagonals }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &[Chord] {
        &self.diagonals
    }

    pub fn vertex_count(&self) -> usize {
        self.m * self.n + 2
    }

    pub fn contains(&self, c: Chord) -> bool {
        self.diagonals.binary_search(&c).is_ok()
    }

    pub fn is_fan(&self) -> bool {
        self.rank() == 0
    }

    /// Diagonals shared with the fan, in increasing order.
    pub fn shared_fan_chords(&self) -> impl Iterator<Item = Chord> + '_ {
        self.diagonals.iter().copied().filter(|&c| is_fan_chord(self.m, self.n, c))
    }

    /// Number of diagonals not in the fan.
    pub fn rank(&self) -> usize {
        self.diagonals.iter().filter(|&&c| !is_fan_chord(self.m, self.n, c)).count()
    }

    /// A final dissection shares no diagonal with the fan.
    pub fn is_final(&self) -> bool {
        self.shared_fan_chords().next().is_none()
    }

    fn validate(&self) -> Result<()> {
        let (m, n) = (self.m, self.n);
        let last = self.vertex_count() - 1;
        if self.diagonals.len() != n - 1 {
            return Err(Error::MalformedDissection(format!(
                "expected {} diagonals, found {}",
                n - 1,
                self.diagonals.len()
            )));
        }
        for w in self.diagonals.windows(2) {
            if w[0] == w[1] {
                return Err(Error::MalformedDissection(format!("repeated diagonal {}", w[0])));
            }
        }
        for &c in &self.diagonals {
            if c.1 > last || c.1 - c.0 < 2 || (c.0 == 0 && c.1 == last) {
                return Err(Error::MalformedDissection(format!("{c} is not a diagonal of the {}-gon", last + 1)));
            }
        }
        for (i, &c1) in self.diagonals.iter().enumerate() {
            for &c2 in &self.diagonals[i + 1..] {
                if chords_cross(c1, c2) {
                    return Err(Error::MalformedDissection(format!("{c1} crosses {c2}")));
                }
            }
        }
        for r in self.regions_unchecked() {
            if r.len() != m + 2 {
                return Err(Error::MalformedDissection(format!(
                    "region {:?} has {} vertices, expected {}",
                    r.0,
                    r.len(),
                    m + 2
                )));
            }
        }
        Ok(())
    }

    fn upper_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.vertex_count()];
        for &c in &self.diagonals {
            nbrs[c.0].push(c.1);
        }
        nbrs
    }

    /// Region on the inner side of the arc `lo..hi` (a diagonal, or the
    /// outer side `(0, mn+1)`).
    fn walk(nbrs: &[Vec<usize>], lo: usize, hi: usize) -> Region {
        let mut out = vec![lo];
        let mut p = lo;
        while p != hi {
            let next = nbrs[p]
                .iter()
                .rev()
                .copied()
                .find(|&q| q <= hi && !(p == lo && q == hi))
                .unwrap_or(p + 1);
            out.push(next);
            p = next;
        }
        Region(out)
    }

    fn regions_unchecked(&self) -> Vec<Region> {
        let nbrs = self.upper_neighbors();
        let mut out = Vec::with_capacity(self.n);
        out.push(Self::walk(&nbrs, 0, self.vertex_count() - 1));
        for &c in &self.diagonals {
            out.push(Self::walk(&nbrs, c.0, c.1));
        }
        out.sort();
        out
    }

    /// The `n` regions, each an `(m+2)`-cycle, sorted by vertex list.
    pub fn regions(&self) -> Vec<Region> {
        self.regions_unchecked()
    }

    /// The region containing the outer side `(0, mn+1)`. For a final
    /// dissection this is the unique region touching the apex.
    pub fn apex_region(&self) -> Region {
        Self::walk(&self.upper_neighbors(), 0, self.vertex_count() - 1)
    }

    /// All `m` dissections obtained by flipping the diagonal `d`.
    pub fn flips(&self, d: Chord) -> Result<Vec<Dissection>> {
        if !self.contains(d) {
            return Err(Error::MalformedDissection(format!("{d} is not a diagonal of the dissection")));
        }
        let m = self.m;
        let nbrs = self.upper_neighbors();
        let inner = Self::walk(&nbrs, d.0, d.1);
        let outer = self
            .regions_unchecked()
            .into_iter()
            .find(|r| r.contains(d.0) && r.contains(d.1) && *r != inner)
            .expect("every diagonal borders two regions");
        let mut merged: Vec<usize> = inner.0.iter().chain(outer.0.iter()).copied().collect();
        merged.sort_unstable();
        merged.dedup();
        debug_assert_eq!(merged.len(), 2 * m + 2);
        let rest: Vec<Chord> = self.diagonals.iter().copied().filter(|&c| c != d).collect();
        let mut out = Vec::with_capacity(m);
        for i in 0..=m {
            let c = Chord(merged[i], merged[i + m + 1]);
            if c == d {
                continue;
            }
            let mut diagonals = rest.clone();
            diagonals.push(c);
            diagonals.sort_unstable();
            out.push(Dissection::from_sorted_unchecked(m, self.n, diagonals));
        }
        out.sort();
        Ok(out)
    }

    /// Upward flips of a diagonal shared with the fan: the `m` elements
    /// covering `self` through `d`.
    pub fn flip_up(&self, d: Chord) -> Result<Vec<Dissection>> {
        if !self.contains(d) || !is_fan_chord(self.m, self.n, d) {
            return Err(Error::NotAQ0Diagonal(d.0, d.1));
        }
        self.flips(d)
    }

    /// Cuts along the diagonals shared with the fan. The pieces come in
    /// counter-clockwise order, each re-indexed as a final dissection of its
    /// own polygon with the apex kept at `0`.
    pub fn cut_l(&self) -> Vec<Dissection> {
        let m = self.m;
        let last = self.vertex_count() - 1;
        let mut bounds = vec![1];
        bounds.extend(self.shared_fan_chords().map(|c| c.1));
        bounds.push(last);
        bounds
            .windows(2)
            .map(|w| {
                let (lo, hi) = (w[0], w[1]);
                let diagonals = self
                    .diagonals
                    .iter()
                    .filter(|c| c.0 >= lo && c.1 <= hi)
                    .map(|c| Chord(c.0 - lo + 1, c.1 - lo + 1))
                    .collect();
                Dissection::from_sorted_unchecked(m, (hi - lo) / m, diagonals)
            })
            .collect()
    }

    /// Width and blocks of a final dissection. Each block is re-indexed with
    /// its first vertex on the apex region as local apex `0`.
    pub fn width_and_blocks(&self) -> Result<(usize, Vec<Dissection>)> {
        let spans = self.block_spans()?;
        let blocks: Vec<Dissection> = spans.iter().map(|&(lo, hi)| self.restrict(lo, hi)).collect();
        Ok((blocks.len(), blocks))
    }

    /// Vertex spans `(r_i, r_{i+1})` of the non-trivial gaps of the apex
    /// region of a final dissection.
    pub fn block_spans(&self) -> Result<Vec<(usize, usize)>> {
        self.require_final()?;
        let r0 = self.apex_region();
        Ok(r0.0[1..]
            .windows(2)
            .filter(|w| w[1] - w[0] > 1)
            .map(|w| (w[0], w[1]))
            .collect())
    }

    /// Sub-dissection of the polygon `lo..=hi`, whose side `(lo, hi)` is a
    /// diagonal of `self`; `lo` becomes the local apex.
    fn restrict(&self, lo: usize, hi: usize) -> Dissection {
        let diagonals = self
            .diagonals
            .iter()
            .filter(|c| c.0 >= lo && c.1 <= hi && **c != Chord(lo, hi))
            .map(|c| Chord(c.0 - lo, c.1 - lo))
            .collect();
        Dissection::from_sorted_unchecked(self.m, (hi - lo - 1) / self.m, diagonals)
    }

    /// The final dissection obtained by keeping the apex region and the
    /// block spanning `(lo, hi)`, collapsing every other block to an edge.
    pub fn isolate_block(&self, lo: usize, hi: usize) -> Result<Dissection> {
        let spans = self.block_spans()?;
        if !spans.contains(&(lo, hi)) {
            return Err(Error::InvalidParameters(format!("({lo},{hi}) is not a block span")));
        }
        let r0 = self.apex_region();
        let offset = r0.0.iter().position(|&v| v == lo).expect("span endpoints lie on the apex region");
        let block = self.restrict(lo, hi);
        let mut diagonals: Vec<Chord> = block
            .diagonals
            .iter()
            .map(|c| Chord(c.0 + offset, c.1 + offset))
            .collect();
        diagonals.push(Chord(offset, offset + hi - lo));
        diagonals.sort_unstable();
        Ok(Dissection::from_sorted_unchecked(self.m, block.n + 1, diagonals))
    }

    /// Chords from the apex to the vertices of the apex region other than
    /// the apex's two boundary neighbours.
    pub fn apex_diagonal_set(&self) -> Result<Vec<Chord>> {
        self.require_final()?;
        let r0 = self.apex_region();
        let k = r0.len();
        Ok(r0.0[2..k - 1].iter().map(|&v| Chord(0, v)).collect())
    }

    fn require_final(&self) -> Result<()> {
        if self.is_final() {
            Ok(())
        } else {
            Err(Error::NotFinal(self.to_string()))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("dissections serialize")
    }
}

impl fmt::Display for Dissection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.diagonals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Rebuilds one dissection from a list of final pieces and a dissection
/// `b0` placed in the union of their apex regions.
pub fn glue_g(b0: &Dissection, parts: &[Dissection]) -> Result<Dissection> {
    let m = b0.m;
    if b0.n != parts.len() {
        return Err(Error::ArityMismatch { expected: b0.n, got: parts.len() });
    }
    if let Some(p) = parts.iter().find(|p| p.m != m) {
        return Err(Error::InvalidParameters(format!("part {p} has m = {}, expected {m}", p.m)));
    }
    if let Some(p) = parts.iter().find(|p| !p.is_final()) {
        return Err(Error::NotFinal(p.to_string()));
    }
    let n: usize = parts.iter().map(|p| p.n).sum();
    let (mut diagonals, hull) = glue_layout(parts);
    debug_assert_eq!(hull.len(), m * b0.n + 2);
    diagonals.extend(b0.diagonals.iter().map(|c| Chord(hull[c.0], hull[c.1])));
    diagonals.sort_unstable();
    Dissection::new(m, n, diagonals)
}

/// Lays final `parts` side by side around a common apex. Returns their
/// diagonals in the big polygon and the hull: the vertices, in order, of the
/// `(mk + 2)`-gon left between them, where `k` is the number of parts.
pub fn glue_layout(parts: &[Dissection]) -> (Vec<Chord>, Vec<usize>) {
    let mut diagonals = Vec::new();
    let mut hull = vec![0];
    let mut lo = 1;
    for p in parts {
        let shift = |u: usize| if u == 0 { 0 } else { u + lo - 1 };
        diagonals.extend(p.diagonals.iter().map(|c| Chord(shift(c.0), shift(c.1))));
        for &v in &p.apex_region().0[1..] {
            let v = shift(v);
            if hull.last() != Some(&v) {
                hull.push(v);
            }
        }
        lo += p.m * p.n;
    }
    (diagonals, hull)
}

/// Inverse of [`Dissection::cut_l`].
pub fn uncut_l(parts: &[Dissection]) -> Result<Dissection> {
    let m = parts
        .first()
        .map(|p| p.m)
        .ok_or_else(|| Error::InvalidParameters("empty list of parts".into()))?;
    glue_g(&Dissection::fan(m, parts.len()), parts)
}

/// Relative diagonal sets of all M-angulations of the polygon `0..=mt+1`
/// with root side `(0, mt+1)`, indexed by `t`.
fn shapes(m: usize, max_t: usize) -> Vec<Vec<Vec<Chord>>> {
    let mut memo: Vec<Vec<Vec<Chord>>> = vec![vec![Vec::new()]];
    for t in 1..=max_t {
        let mut out = Vec::new();
        let mut gaps = vec![0usize; m + 1];
        gap_compositions(t - 1, 0, &mut gaps, &mut |gaps| {
            let mut partial: Vec<Vec<Chord>> = vec![Vec::new()];
            let mut r = 0;
            for &g in gaps.iter() {
                let next = r + m * g + 1;
                if g > 0 {
                    let mut extended = Vec::with_capacity(partial.len() * memo[g].len());
                    for base in &partial {
                        for sub in &memo[g] {
                            let mut d = base.clone();
                            d.push(Chord(r, next));
                            d.extend(sub.iter().map(|c| Chord(c.0 + r, c.1 + r)));
                            extended.push(d);
                        }
                    }
                    partial = extended;
                }
                r = next;
            }
            out.extend(partial);
        });
        memo.push(out);
    }
    memo
}

fn gap_compositions(remaining: usize, i: usize, gaps: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if i + 1 == gaps.len() {
        gaps[i] = remaining;
        emit(gaps);
        return;
    }
    for g in 0..=remaining {
        gaps[i] = g;
        gap_compositions(remaining - g, i + 1, gaps, emit);
    }
}

/// All M-angulations of the `(mn+2)`-gon in canonical order.
pub fn enumerate_dissections(m: usize, n: usize, guard: &Guard) -> Result<Vec<Dissection>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameters(format!("m = {m}, n = {n}; both must be >= 1")));
    }
    guard.check_enumeration(m, n)?;
    let memo = shapes(m, n);
    let mut out: Vec<Dissection> = memo[n]
        .iter()
        .map(|d| {
            let mut d = d.clone();
            d.sort_unstable();
            Dissection::from_sorted_unchecked(m, n, d)
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Index of every element of a list of dissections.
pub fn index_map(elements: &[Dissection]) -> HashMap<&Dissection, usize> {
    elements.iter().enumerate().map(|(i, q)| (q, i)).collect()
}
