//! The flip poset on M-angulations: covers, reachability, chains and the
//! structural checks that concern the whole poset.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::bijection::phi;
use crate::dissection::{chords_cross, enumerate_dissections, fan_chord, glue_g, Chord, Dissection};
use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::poly::poly_for_dissection;

/// `P(m, n)`: elements in canonical order, covers and the order relation as
/// reachability bitsets.
#[derive(Debug)]
pub struct FlipPoset {
    m: usize,
    n: usize,
    elements: Vec<Dissection>,
    index: HashMap<Dissection, usize>,
    ranks: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
    by_rank: Vec<usize>,
}

impl FlipPoset {
    pub fn build(m: usize, n: usize, guard: &Guard) -> Result<Self> {
        let elements = enumerate_dissections(m, n, guard)?;
        guard.check_poset(m, n, elements.len())?;
        let index: HashMap<Dissection, usize> =
            elements.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
        let size = elements.len();
        let mut up = vec![Vec::new(); size];
        let mut down = vec![Vec::new(); size];
        for (i, q) in elements.iter().enumerate() {
            for d in q.shared_fan_chords().collect::<Vec<_>>() {
                for r in q.flip_up(d)? {
                    let j = index[&r];
                    up[i].push(j);
                    down[j].push(i);
                }
            }
        }
        for l in up.iter_mut().chain(down.iter_mut()) {
            l.sort_unstable();
        }
        let ranks: Vec<usize> = elements.iter().map(Dissection::rank).collect();
        let mut by_rank: Vec<usize> = (0..size).collect();
        by_rank.sort_by_key(|&i| (ranks[i], i));

        let mut above = vec![FixedBitSet::with_capacity(size); size];
        for &x in by_rank.iter().rev() {
            let mut s = FixedBitSet::with_capacity(size);
            s.insert(x);
            for &c in &up[x] {
                s.union_with(&above[c]);
            }
            above[x] = s;
        }
        let mut below = vec![FixedBitSet::with_capacity(size); size];
        for &x in &by_rank {
            let mut s = FixedBitSet::with_capacity(size);
            s.insert(x);
            for &c in &down[x] {
                s.union_with(&below[c]);
            }
            below[x] = s;
        }
        Ok(FlipPoset { m, n, elements, index, ranks, up, down, above, below, by_rank })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Dissection] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Dissection {
        &self.elements[i]
    }

    pub fn index_of(&self, q: &Dissection) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// Elements covering `i`.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    /// Elements covered by `i`.
    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    /// `{y : i <= y}`.
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.above[i]
    }

    /// `{y : y <= i}`.
    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.below[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    /// Indices sorted by rank, ties in canonical order.
    pub fn by_rank(&self) -> &[usize] {
        &self.by_rank
    }

    pub fn bottom(&self) -> usize {
        self.index[&Dissection::fan(self.m, self.n)]
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Number of elements of each rank.
    pub fn rank_census(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for &r in &self.ranks {
            c[r] += 1;
        }
        c
    }

    /// Pairs `a <= b`.
    pub fn interval_count(&self) -> usize {
        self.above.iter().map(|s| s.count_ones(..)).sum()
    }

    /// Every element of rank `r` has exactly `m (n - 1 - r)` covers.
    pub fn cover_count_check(&self) -> std::result::Result<(), usize> {
        match (0..self.len()).find(|&i| self.up[i].len() != self.m * (self.n - 1 - self.ranks[i])) {
            Some(i) => Err(i),
            None => Ok(()),
        }
    }

    /// Covers raise the rank by one, the rank is the distance from the fan,
    /// and the fan lies below everything.
    pub fn grading_check(&self) -> std::result::Result<(), usize> {
        if let Some(i) = (0..self.len()).find(|&i| self.up[i].iter().any(|&j| self.ranks[j] != self.ranks[i] + 1)) {
            return Err(i);
        }
        let b = self.bottom();
        let mut dist = vec![usize::MAX; self.len()];
        dist[b] = 0;
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.up[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        match (0..self.len()).find(|&i| dist[i] != self.ranks[i] || !self.leq(b, i)) {
            Some(i) => Err(i),
            None => Ok(()),
        }
    }

    /// Maximal elements are exactly the final dissections.
    pub fn maximal_check(&self) -> std::result::Result<(), usize> {
        match (0..self.len()).find(|&i| self.up[i].is_empty() != self.elements[i].is_final()) {
            Some(i) => Err(i),
            None => Ok(()),
        }
    }

    /// Number of maximal chains starting at the fan.
    pub fn maximal_chain_count(&self) -> u128 {
        let mut chains = vec![0u128; self.len()];
        for &x in self.by_rank.iter().rev() {
            chains[x] = if self.up[x].is_empty() { 1 } else { self.up[x].iter().map(|&c| chains[c]).sum() };
        }
        chains[self.bottom()]
    }

    /// Every final element covers exactly as many elements as it has
    /// blocks.
    pub fn width_cover_check(&self) -> Result<std::result::Result<(), usize>> {
        for (i, q) in self.elements.iter().enumerate() {
            if q.is_final() && q.width_and_blocks()?.0 != self.down[i].len() {
                return Ok(Err(i));
            }
        }
        Ok(Ok(()))
    }

    /// For every final `Q` and every `Q' <= Q`, no apex chord of `Q` crosses
    /// a diagonal of `Q'`.
    pub fn apex_set_check(&self) -> Result<std::result::Result<(), (usize, usize)>> {
        for (i, q) in self.elements.iter().enumerate().filter(|(_, q)| q.is_final()) {
            let apex = q.apex_diagonal_set()?;
            for j in self.below[i].ones() {
                let qj = &self.elements[j];
                if apex.iter().any(|&a| qj.diagonals().iter().any(|&c| chords_cross(a, c))) {
                    return Ok(Err((i, j)));
                }
            }
        }
        Ok(Ok(()))
    }

    /// The upper set of `a_minus` is the image of `P(m, k)` under
    /// `B -> glue_g(B, cut_l(a_minus))`, covers included.
    pub fn upper_ideal_iso_check(&self, a_minus: usize, small: &FlipPoset) -> Result<bool> {
        let parts = self.elements[a_minus].cut_l();
        if small.n != parts.len() || small.m != self.m {
            return Err(Error::ArityMismatch { expected: parts.len(), got: small.n });
        }
        let mut image = Vec::with_capacity(small.len());
        for b in &small.elements {
            let g = glue_g(b, &parts)?;
            match self.index_of(&g) {
                Some(i) => image.push(i),
                None => return Ok(false),
            }
        }
        let mut hit = FixedBitSet::with_capacity(self.len());
        for &i in &image {
            hit.insert(i);
        }
        if hit != self.above[a_minus] || hit.count_ones(..) != image.len() {
            return Ok(false);
        }
        for (bi, &gi) in image.iter().enumerate() {
            let mut mapped: Vec<usize> = small.up[bi].iter().map(|&c| image[c]).collect();
            mapped.sort_unstable();
            if mapped != self.up[gi] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every pair of elements has a join and a meet in the whole
    /// poset. `None` when the poset is larger than `limit`.
    pub fn observed_lattice(&self, limit: usize) -> Option<bool> {
        if self.len() > limit {
            return None;
        }
        let least = |s: &FixedBitSet, sets: &[FixedBitSet], ascending: bool| -> bool {
            let cand = if ascending {
                self.by_rank.iter().find(|&&x| s.contains(x))
            } else {
                self.by_rank.iter().rev().find(|&&x| s.contains(x))
            };
            cand.is_some_and(|&u| s.is_subset(&sets[u]))
        };
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let mut ub = self.above[a].clone();
                ub.intersect_with(&self.above[b]);
                let mut lb = self.below[a].clone();
                lb.intersect_with(&self.below[b]);
                if !least(&ub, &self.above, true) || !least(&lb, &self.below, false) {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph flip_poset_m{}_n{} {{", self.m, self.n);
        let _ = writeln!(s, "  rankdir=BT;");
        for (i, q) in self.elements.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{i} [label=\"{}\", rank={}, diagonals=\"{}\"];",
                poly_for_dissection(q),
                self.ranks[i],
                q
            );
        }
        for (i, ups) in self.up.iter().enumerate() {
            for &j in ups {
                let _ = writeln!(s, "  n{i} -> n{j};");
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, q)| {
                Ok(json!({
                    "index": i,
                    "diagonals": q.to_json()["diagonals"],
                    "rank": self.ranks[i],
                    "polynomial": poly_for_dissection(q).to_string(),
                    "dyck": phi(q)?.entries(),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        let covers: Vec<[usize; 2]> = self
            .up
            .iter()
            .enumerate()
            .flat_map(|(i, ups)| ups.iter().map(move |&j| [i, j]))
            .collect();
        Ok(json!({ "m": self.m, "n": self.n, "elements": elements, "covers": covers }))
    }
}

/// A diagonal of the fan, absent from `q`, that crosses exactly one
/// diagonal of `q`.
pub fn lemma_descent_witness(q: &Dissection) -> Result<Chord> {
    let (m, n) = (q.m(), q.n());
    (1..n)
        .map(|k| fan_chord(m, k))
        .filter(|&f| !q.contains(f))
        .find(|&f| q.diagonals().iter().filter(|&&c| chords_cross(c, f)).count() == 1)
        .ok_or_else(|| Error::NoWitness(q.to_string()))
}

/// Descends from `q` to the fan: at each step the single diagonal crossed
/// by a witness is flipped into the witness. Returns the visited
/// dissections, `q` first and the fan last.
pub fn descent_chain(q: &Dissection) -> Result<Vec<Dissection>> {
    let mut chain = vec![q.clone()];
    let mut cur = q.clone();
    while !cur.is_fan() {
        let w = lemma_descent_witness(&cur)?;
        let crossed = *cur
            .diagonals()
            .iter()
            .find(|&&c| chords_cross(c, w))
            .expect("witness crosses one diagonal");
        let next = cur
            .flips(crossed)?
            .into_iter()
            .find(|r| r.contains(w))
            .ok_or_else(|| Error::NoWitness(format!("{cur}: flipping {crossed} never yields {w}")))?;
        chain.push(next.clone());
        cur = next;
    }
    Ok(chain)
}

/// Shared, lazily built posets `P(m, k)`.
#[derive(Debug, Default)]
pub struct PosetFamily {
    guard: Guard,
    cache: Mutex<HashMap<(usize, usize), Arc<FlipPoset>>>,
}

impl PosetFamily {
    pub fn new(guard: Guard) -> Self {
        PosetFamily { guard, cache: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, m: usize, n: usize) -> Result<Arc<FlipPoset>> {
        if let Some(p) = self.cache.lock().expect("cache lock").get(&(m, n)) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(FlipPoset::build(m, n, &self.guard)?);
        Ok(Arc::clone(self.cache.lock().expect("cache lock").entry((m, n)).or_insert(p)))
    }
}
