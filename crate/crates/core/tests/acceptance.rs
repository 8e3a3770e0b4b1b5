//! End-to-end acceptance checks. Runs as a plain binary (no test harness) so
//! that each criterion prints exactly one PASS/FAIL line, and so that the
//! criteria run one after another and their time limits are measured
//! without interference.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mangulations::bijection::{phi, psi};
use mangulations::dissection::{enumerate_dissections, Chord, Dissection};
use mangulations::divisibility::{divisibility_check, exact_division_sample, involution_check};
use mangulations::dyck::enumerate_dyck;
use mangulations::interval::sweep_intervals;
use mangulations::poly::poly_for_dissection;
use mangulations::poset::{descent_chain, FlipPoset};
use mangulations::qsym::verify_basis_graded;
use mangulations::series::{
    fuss_catalan, identity_residuals, integer_coeffs, integer_zpoly, rank_polynomial, series_f, series_g,
    series_i, series_t,
};
use mangulations::{Guard, Integer, MVector};

type Outcome = Result<String, String>;

const COUNT_LIMIT: Duration = Duration::from_secs(60);
const POSET_LIMIT: Duration = Duration::from_secs(60);
const QSYM_LIMIT: Duration = Duration::from_secs(300);
const SERIES_ORDER: usize = 10;
const MIN_DIVISION_SAMPLES: usize = 100;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(m, n)` with `n >= 1` and `m n <= limit`.
fn sizes(limit: usize) -> Vec<(usize, usize)> {
    (1..=limit).flat_map(|m| (1..=limit / m).map(move |n| (m, n))).collect()
}

fn guard() -> Guard {
    Guard::standard()
}

fn counting() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=5 {
            let got = enumerate_dissections(m, n, &guard()).map_err(|e| e.to_string())?.len();
            let want = fuss_catalan(m, n);
            ensure(Integer::from(got) == want, || format!("({m},{n}): {got} dissections, expected {want}"))?;
            checked += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < COUNT_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{checked} sizes in {t:.2?}"))
}

fn poset_structure() -> Outcome {
    let start = Instant::now();
    let list = sizes(10);
    for &(m, n) in &list {
        let p = FlipPoset::build(m, n, &guard()).map_err(|e| e.to_string())?;
        let b = p.bottom();
        ensure(p.up_set(b).count_ones(..) == p.len(), || format!("({m},{n}): fan is not below everything"))?;
        ensure(p.grading_check().is_ok(), || format!("({m},{n}): not graded by rank"))?;
        ensure(p.cover_count_check().is_ok(), || format!("({m},{n}): cover counts"))?;
        let minimal = (0..p.len()).filter(|&i| p.lower_covers(i).is_empty()).count();
        ensure(minimal == 1, || format!("({m},{n}): {minimal} minimal elements"))?;
        let want = (m as u128).pow(n as u32 - 1) * (1..n as u128).product::<u128>();
        let chains = p.maximal_chain_count();
        ensure(chains == want, || format!("({m},{n}): {chains} maximal chains, expected {want}"))?;
        for q in p.elements().iter().filter(|q| !q.is_fan()) {
            let chain = descent_chain(q).map_err(|e| format!("({m},{n}) {q}: {e}"))?;
            ensure(chain.len() == q.rank() + 1, || format!("({m},{n}) {q}: descent of wrong length"))?;
        }
    }
    let t = start.elapsed();
    ensure(t < POSET_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} posets with m*n <= 10 in {t:.2?}", list.len()))
}

fn rank_distribution() -> Outcome {
    let mut checked = 0;
    for m in 1..=12 {
        let g = series_g(m, 12 / m).map_err(|e| e.to_string())?;
        for n in 1..=12 / m {
            let mut census = vec![0usize; n];
            for q in enumerate_dissections(m, n, &guard()).map_err(|e| e.to_string())? {
                census[q.rank()] += 1;
            }
            let closed = rank_polynomial(m, n).map_err(|e| e.to_string())?;
            let slice = integer_zpoly(g.coeff(n)).map_err(|e| e.to_string())?;
            for (k, &c) in census.iter().enumerate() {
                ensure(closed.coeff(k) == Integer::from(c), || format!("({m},{n}) rank {k}: census {c}, closed form {closed}"))?;
            }
            ensure(slice == closed, || format!("({m},{n}): series slice {slice}, closed form {closed}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} sizes with m*n <= 12"))
}

fn reference_dissection() -> Dissection {
    let chords = [(0, 11), (2, 11), (4, 11), (6, 11), (7, 10), (12, 15)];
    Dissection::new(2, 7, chords.iter().map(|&(a, b)| Chord(a, b)).collect()).expect("valid")
}

fn bijection() -> Outcome {
    let mut objects = 0;
    for (m, n) in sizes(12) {
        for q in enumerate_dissections(m, n, &guard()).map_err(|e| e.to_string())? {
            let back = phi(&q).and_then(|v| psi(&v)).map_err(|e| format!("{q}: {e}"))?;
            ensure(back == q, || format!("({m},{n}): {q} came back as {back}"))?;
            objects += 1;
        }
        for v in enumerate_dyck(m, n, &guard()).map_err(|e| e.to_string())? {
            let back = psi(&v).and_then(|q| phi(&q)).map_err(|e| format!("{v}: {e}"))?;
            ensure(back == v, || format!("({m},{n}): {v} came back as {back}"))?;
            objects += 1;
        }
    }
    let q = reference_dissection();
    let p = poly_for_dissection(&q);
    ensure(p.to_string() == "(x5-y4)(y5-x3)(y5-x2)(y5-x1)(y7-x6)", || format!("polynomial {p}"))?;
    ensure(p.leading_monomial().to_string() == "x5 y5^3 y7", || format!("monomial {}", p.leading_monomial()))?;
    let mut entries = vec![0; 14];
    entries[8] = 1;
    entries[9] = 3;
    entries[13] = 1;
    let v = MVector::new(2, entries).expect("valid");
    ensure(psi(&v).ok() == Some(q.clone()), || "reference vector does not rebuild the reference dissection".into())?;
    Ok(format!("{objects} round trips with m*n <= 12; reference polynomial and monomial exact"))
}

fn leading_monomials() -> Outcome {
    let mut total = 0;
    for (m, n) in sizes(12) {
        let qs = enumerate_dissections(m, n, &guard()).map_err(|e| e.to_string())?;
        let mut seen = HashSet::with_capacity(qs.len());
        for q in &qs {
            let v = poly_for_dissection(q).leading_monomial().into_vector();
            ensure(v.is_dyck(), || format!("({m},{n}) {q}: exponent {v} is not Dyck"))?;
            seen.insert(v);
        }
        ensure(seen.len() == qs.len(), || format!("({m},{n}): leading monomials repeat"))?;
        let dyck: HashSet<MVector> = enumerate_dyck(m, n, &guard()).map_err(|e| e.to_string())?.into_iter().collect();
        ensure(seen == dyck, || format!("({m},{n}): leading monomials differ from the Dyck vectors"))?;
        total += qs.len();
    }
    Ok(format!("{total} leading monomials, all distinct and Dyck, with m*n <= 12"))
}

fn divisibility() -> Outcome {
    let mut pairs = 0;
    let mut samples = 0;
    for (m, n) in sizes(10) {
        let p = FlipPoset::build(m, n, &guard()).map_err(|e| e.to_string())?;
        let r = divisibility_check(&p).map_err(|e| e.to_string())?;
        ensure(r.pass(), || format!("({m},{n}): {r:?}"))?;
        pairs += p.len() * p.len();
        if p.len() * p.len() >= 100 {
            let s = exact_division_sample(&p, 120);
            ensure(s.disagreement.is_none(), || format!("({m},{n}): exact division disagrees at {:?}", s.disagreement))?;
            samples += s.sampled;
        }
    }
    ensure(samples >= MIN_DIVISION_SAMPLES, || format!("only {samples} exact divisions"))?;
    Ok(format!("{pairs} ordered pairs compared; {samples} exact divisions agree"))
}

fn quotient_basis() -> Outcome {
    let mut dims = Vec::new();
    for (m, n) in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3)] {
        let start = Instant::now();
        let r = verify_basis_graded(m, n, &guard()).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(r.pass(), || format!("({m},{n}): {:?}", r.degrees.iter().find(|d| !d.pass)))?;
        ensure(Integer::from(r.total_dimension()) == fuss_catalan(m, n), || format!("({m},{n}): dimension {}", r.total_dimension()))?;
        ensure(t < QSYM_LIMIT, || format!("({m},{n}) took {t:?}"))?;
        dims.push(format!("({m},{n})={:?}", r.hilbert_series()));
    }
    Ok(format!("graded dimensions {}", dims.join(" ")))
}

fn ints(s: &[mangulations::Rational]) -> Result<Vec<i64>, String> {
    integer_coeffs(s)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|b| i64::try_from(b).map_err(|e| e.to_string()))
        .collect()
}

fn series() -> Outcome {
    for m in 1..=4 {
        for (name, r) in ["T", "F", "I"].iter().zip(identity_residuals(m, SERIES_ORDER).map_err(|e| e.to_string())?) {
            ensure(r.is_zero(), || format!("m={m}: {name} residual {r}"))?;
        }
    }
    let t = ints(series_t(2, 4).map_err(|e| e.to_string())?.positive_part())?;
    let f = ints(series_f(2, 4).map_err(|e| e.to_string())?.positive_part())?;
    let i = ints(series_i(2, 3).map_err(|e| e.to_string())?.positive_part())?;
    ensure(t == [1, 3, 12, 55], || format!("T = {t:?}"))?;
    ensure(f == [1, 2, 7, 30], || format!("F = {f:?}"))?;
    ensure(i == [1, 5, 31], || format!("I = {i:?}"))?;
    for (n, want) in [(2, 5), (3, 31)] {
        let got = FlipPoset::build(2, n, &guard()).map_err(|e| e.to_string())?.interval_count();
        ensure(got == want, || format!("P(2,{n}) has {got} intervals"))?;
    }
    Ok(format!("residuals vanish to order {SERIES_ORDER} for m=1..4; prefixes and brute-force interval counts agree"))
}

fn interval_structure() -> Outcome {
    let mut intervals = 0;
    let mut largest = 0;
    let mut hist = [0usize; 3];
    for (m, n) in sizes(10) {
        let p = FlipPoset::build(m, n, &guard()).map_err(|e| e.to_string())?;
        let s = sweep_intervals(&p);
        if let Some((a, b, why)) = &s.failure {
            return Err(format!("({m},{n}) [{}, {}]: {why}", p.element(*a), p.element(*b)));
        }
        ensure(s.intervals == p.interval_count(), || format!("({m},{n}): sweep missed intervals"))?;
        ensure(s.explicitly_checked == s.intervals, || format!("({m},{n}): some intervals skipped the pairwise lattice test"))?;
        let wc = p.width_cover_check().map_err(|e| e.to_string())?;
        ensure(wc.is_ok(), || format!("({m},{n}): width cover check at {}", p.element(wc.unwrap_err())))?;
        intervals += s.intervals;
        largest = largest.max(s.largest);
        for k in 0..3 {
            hist[k] += s.mobius_histogram[k];
        }
    }
    Ok(format!("{intervals} intervals (largest {largest}); Möbius -1/0/1 counts {hist:?}"))
}

fn involution() -> Outcome {
    let mut open = Vec::new();
    let mut checked = 0;
    for (m, n) in sizes(10) {
        let p = FlipPoset::build(m, n, &guard()).map_err(|e| e.to_string())?;
        let r = involution_check(&p);
        checked += r.elements;
        if !r.pass() {
            if m <= 2 {
                return Err(format!("({m},{n}): {r:?}"));
            }
            open.push(format!("({m},{n})"));
        }
    }
    if open.is_empty() {
        Ok(format!("{checked} polynomials map into the family up to sign"))
    } else {
        Ok(format!("{checked} polynomials; letter reading fails for m>=3 at {}", open.join(" ")))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("counting", counting),
        ("poset structure", poset_structure),
        ("rank distribution", rank_distribution),
        ("bijection", bijection),
        ("leading monomials", leading_monomials),
        ("divisibility order", divisibility),
        ("quotient basis", quotient_basis),
        ("series", series),
        ("interval structure", interval_structure),
        ("involution", involution),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({t:.2?}) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({t:.2?}) {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
