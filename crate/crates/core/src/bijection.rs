//! The bijection between m-Dyck vectors and M-angulations.
//!
//! [`phi`] reads the exponent vector of the leading monomial of `P_Q`.
//! [`psi`] builds the dissection fan by fan from the vector.

use crate::dissection::{chords_cross, fan_chord, vertex_label, Chord, Dissection};
use crate::dyck::MVector;
use crate::error::{Error, Result};
use crate::poly::poly_for_dissection;

/// Exponent vector of `LM(P_Q)`.
pub fn phi(q: &Dissection) -> Result<MVector> {
    let v = poly_for_dissection(q).leading_monomial().into_vector();
    if v.is_dyck() {
        Ok(v)
    } else {
        Err(Error::NotDyck(v.to_string()))
    }
}

fn stuck(position: usize, reason: impl Into<String>) -> Error {
    Error::ConstructionStuck { position, reason: reason.into() }
}

/// Number of vertices below `w` hidden behind some chord of `d`.
fn hidden_below(d: &[Chord], w: usize) -> usize {
    (1..w).filter(|&u| d.iter().any(|c| c.encloses(u))).count()
}

/// Builds the M-angulation whose `P_Q` has leading monomial `A_v`.
///
/// Reading `v` left to right, a non-zero entry `c` at position `l` (letter
/// `z`, block `k`) adds a fan of `c` chords ending at the first `z`-labelled
/// vertex after fan diagonal `k - 1`. The starting points are the `c` last
/// vertices carrying the letter cyclically before `z` that are not separated
/// from the ending point by a chord already placed and are not its boundary
/// neighbour. The remaining room is filled with diagonals of the fan.
pub fn psi(v: &MVector) -> Result<Dissection> {
    let (m, n) = (v.m(), v.size());
    let vertex_count = m * n + 2;
    let mut d: Vec<Chord> = Vec::with_capacity(n.saturating_sub(1));
    let mut prefix = 0usize;
    for l in 1..=m * n {
        let c = v.at(l) as usize;
        prefix += c;
        if c == 0 {
            continue;
        }
        let z = v.letter_of(l);
        let k = v.block_of(l);
        let t = if z == 1 { m } else { z - 1 };
        let after = if k == 1 { 0 } else { fan_chord(m, k - 1).1 };
        let e = (after + 1..vertex_count)
            .find(|&w| vertex_label(m, w) == z)
            .ok_or_else(|| stuck(l, format!("no vertex labelled {z} after vertex {after}")))?;

        let starts: Vec<usize> = (1..e.saturating_sub(1))
            .rev()
            .filter(|&s| vertex_label(m, s) == t && !d.iter().any(|ch| ch.separates(s, e)))
            .take(c)
            .collect();
        if starts.len() < c {
            return Err(stuck(
                l,
                format!("needed {c} starting points before vertex {e}, found {}", starts.len()),
            ));
        }
        d.extend(starts.iter().map(|&s| Chord(s, e)));

        // After collapsing every vertex hidden behind a placed chord, the
        // lowest starting point sits at e - 1 - m (v_1 + ... + v_l).
        let s_min = *starts.last().expect("c > 0");
        let collapsed = s_min - hidden_below(&d, s_min);
        let expected = (e as i64) - 1 - (m * prefix) as i64;
        if expected < 1 || collapsed as i64 != expected {
            return Err(stuck(
                l,
                format!("fan start {s_min} has collapsed index {collapsed}, expected {expected}"),
            ));
        }
    }
    for k in 1..n {
        let f = fan_chord(m, k);
        if !d.contains(&f) && !d.iter().any(|&c| chords_cross(c, f)) {
            d.push(f);
        }
    }
    Dissection::new(m, n, d).map_err(|e| stuck(m * n, format!("completion failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissection::enumerate_dissections;
    use crate::dyck::{enumerate_dyck, vectors_of_total};
    use crate::guard::Guard;
    use std::collections::HashSet;

    fn reference_vector() -> MVector {
        let mut e = vec![0; 14];
        e[8] = 1;
        e[9] = 3;
        e[13] = 1;
        MVector::new(2, e).unwrap()
    }

    #[test]
    fn reference_construction() {
        let q = psi(&reference_vector()).unwrap();
        let expected: Vec<Chord> = [(0, 11), (2, 11), (4, 11), (6, 11), (7, 10), (12, 15)]
            .iter()
            .map(|&(a, b)| Chord(a, b))
            .collect();
        assert_eq!(q.diagonals(), &expected[..]);
        assert_eq!(phi(&q).unwrap(), reference_vector());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&Dissection::fan(2, 4)).unwrap(), MVector::zeros(2, 4));
        let hex = Dissection::new(2, 2, vec![Chord(1, 4)]).unwrap();
        assert_eq!(phi(&hex).unwrap(), MVector::new(2, vec![0, 0, 1, 0]).unwrap());
    }

    #[test]
    fn zero_vector_gives_fan() {
        for (m, n) in [(1, 4), (2, 3), (3, 2), (5, 1)] {
            assert_eq!(psi(&MVector::zeros(m, n)).unwrap(), Dissection::fan(m, n));
        }
    }

    #[test]
    fn round_trips() {
        let g = Guard::standard();
        for (m, n) in [(2, 3), (1, 4), (1, 6), (3, 3), (2, 5), (4, 2)] {
            let qs = enumerate_dissections(m, n, &g).unwrap();
            for q in &qs {
                assert_eq!(&psi(&phi(q).unwrap()).unwrap(), q);
            }
            let image: HashSet<Dissection> = enumerate_dyck(m, n, &g)
                .unwrap()
                .iter()
                .map(|v| {
                    let q = psi(v).unwrap();
                    assert_eq!(&phi(&q).unwrap(), v);
                    q
                })
                .collect();
            assert_eq!(image.len(), qs.len());
        }
    }

    #[test]
    fn non_dyck_vectors_get_stuck() {
        for (m, n) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            for total in 1..=(n as u32 + 1) {
                for v in vectors_of_total(m, n, total) {
                    if v.is_dyck() {
                        continue;
                    }
                    assert!(
                        matches!(psi(&v), Err(Error::ConstructionStuck { .. })),
                        "psi accepted non-Dyck {v}"
                    );
                }
            }
        }
    }
}
