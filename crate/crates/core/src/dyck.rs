//! m-vectors, m-compositions and m-Dyck vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guard::Guard;

#[derive(Deserialize)]
struct RawMVector {
    m: usize,
    entries: Vec<u32>,
}

impl TryFrom<RawMVector> for MVector {
    type Error = Error;

    fn try_from(raw: RawMVector) -> Result<Self> {
        MVector::new(raw.m, raw.entries)
    }
}

/// A vector of `mn` non-negative integers read as `n` blocks of length `m`.
///
/// Position `l` (1-based) sits in block `ceil(l / m)` and carries letter
/// `((l - 1) mod m) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMVector")]
pub struct MVector {
    m: usize,
    entries: Vec<u32>,
}

impl MVector {
    pub fn new(m: usize, entries: Vec<u32>) -> Result<Self> {
        if m == 0 || entries.is_empty() || entries.len() % m != 0 {
            return Err(Error::NotAnMVector(format!(
                "length {} is not a positive multiple of m = {m}",
                entries.len()
            )));
        }
        Ok(MVector { m, entries })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1);
        MVector { m, entries: vec![0; m * n] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of blocks.
    pub fn size(&self) -> usize {
        self.entries.len() / self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [u32] {
        &mut self.entries
    }

    /// Entry at 1-based position `l`.
    pub fn at(&self, l: usize) -> u32 {
        self.entries[l - 1]
    }

    pub fn block_of(&self, l: usize) -> usize {
        (l - 1) / self.m + 1
    }

    pub fn letter_of(&self, l: usize) -> usize {
        (l - 1) % self.m + 1
    }

    /// `|v|`, the sum of all entries.
    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Column sums `w_j = sum_i v_{mi + j}`.
    pub fn weight(&self) -> Vec<u32> {
        let mut w = vec![0; self.m];
        for (i, &e) in self.entries.iter().enumerate() {
            w[i % self.m] += e;
        }
        w
    }

    /// No run of `m` consecutive zeros.
    pub fn is_composition(&self) -> bool {
        let mut run = 0;
        for &e in &self.entries {
            run = if e == 0 { run + 1 } else { 0 };
            if run >= self.m {
                return false;
            }
        }
        true
    }

    /// `m (v_1 + ... + v_l) < l` for every prefix.
    pub fn is_dyck(&self) -> bool {
        let m = self.m as u64;
        let mut sum = 0u64;
        self.entries.iter().enumerate().all(|(i, &e)| {
            sum += u64::from(e);
            m * sum < (i + 1) as u64
        })
    }

    /// Lattice path: each entry contributes that many right steps `(m, 0)`
    /// followed by one up step.
    pub fn lattice_path(&self) -> LatticePath {
        let mut steps = String::new();
        for &e in &self.entries {
            steps.extend(std::iter::repeat('R').take(e as usize));
            steps.push('U');
        }
        LatticePath { m: self.m, steps }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("m-vectors serialize")
    }
}

impl fmt::Display for MVector {
    /// Bar notation, e.g. `10|21|02|30`; entries above 9 are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &e) in self.entries.iter().enumerate() {
            if i > 0 && i % self.m == 0 {
                write!(f, "|")?;
            }
            if e < 10 {
                write!(f, "{e}")?;
            } else {
                write!(f, "({e})")?;
            }
        }
        Ok(())
    }
}

/// Step string over `R` (right step of length `m`) and `U` (unit up step).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePath {
    pub m: usize,
    pub steps: String,
}

impl LatticePath {
    pub fn height(&self) -> usize {
        self.steps.bytes().filter(|&b| b == b'U').count()
    }

    /// Walks the path and checks every visited lattice point `(x, y)`
    /// satisfies `x <= y`.
    pub fn stays_above_diagonal(&self) -> bool {
        let (mut x, mut y) = (0usize, 0usize);
        for b in self.steps.bytes() {
            match b {
                b'R' => x += self.m,
                _ => y += 1,
            }
            if x > y {
                return false;
            }
        }
        true
    }

    /// Inverse of [`MVector::lattice_path`]. Trailing right steps (after the
    /// last up step) are rejected.
    pub fn to_vector(&self) -> Result<MVector> {
        let mut entries = Vec::new();
        let mut run = 0;
        for b in self.steps.bytes() {
            match b {
                b'R' => run += 1,
                b'U' => {
                    entries.push(run);
                    run = 0;
                }
                _ => return Err(Error::NotAnMVector(format!("bad step {:?}", b as char))),
            }
        }
        if run != 0 {
            return Err(Error::NotAnMVector("path ends with right steps".into()));
        }
        MVector::new(self.m, entries)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.steps)
    }
}

/// All m-Dyck vectors of size `n`, in lexicographic order.
pub fn enumerate_dyck(m: usize, n: usize, guard: &Guard) -> Result<Vec<MVector>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameters(format!("m = {m}, n = {n}; both must be >= 1")));
    }
    guard.check_enumeration(m, n)?;
    let len = m * n;
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(m: usize, pos: usize, sum: usize, cur: &mut Vec<u32>, out: &mut Vec<MVector>) {
        if pos == cur.len() {
            out.push(MVector { m, entries: cur.clone() });
            return;
        }
        // m * (sum + e) < pos + 1
        let l = pos + 1;
        let max_total = (l - 1) / m;
        for e in 0..=(max_total - sum) {
            cur[pos] = e as u32;
            rec(m, pos + 1, sum + e, cur, out);
        }
        cur[pos] = 0;
    }
    rec(m, 0, 0, &mut cur, &mut out);
    Ok(out)
}

/// All m-vectors of size `n` with `|v| = total`, in lexicographic order.
pub fn vectors_of_total(m: usize, n: usize, total: u32) -> Vec<MVector> {
    let len = m * n;
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(m: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MVector>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(MVector { m, entries: cur.clone() });
            cur[pos] = 0;
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(m, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    if len > 0 {
        rec(m, 0, total, &mut cur, &mut out);
    }
    out
}
