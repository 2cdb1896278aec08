//! Admissibility and spectrum arithmetic.
//!
//! A Steiner triple system of order `v` exists iff `v ≡ 1, 3 (mod 6)`; it
//! has `t(v) = v(v-1)/6` blocks and every point lies on `r = (v-1)/2`
//! blocks (its *flower*). Three systems of order `2r+1` can share a
//! common flower only when `r ≡ 0, 1 (mod 3)`.
//!
//! The sets below describe which intersection sizes are not excluded by
//! counting arguments (`i…` candidate sets) and which sizes are published
//! as achievable (`published_…` sets). Everything is a finite set of
//! small integers, so sets are materialized as ordered `BTreeSet`s.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub type SpectrumSet = BTreeSet<u32>;

/// Number of blocks of a Steiner triple system of order `v`.
pub fn t_v(v: usize) -> u32 {
    (v * (v - 1) / 6) as u32
}

/// Orders for which a Steiner triple system exists.
pub fn admissible_sts_order(v: usize) -> bool {
    v % 6 == 1 || v % 6 == 3
}

/// Replication numbers `r` for which three systems of order `2r+1`
/// can share the flower at a common point.
pub fn admissible_r(r: usize) -> bool {
    r >= 1 && (r % 3 == 0 || r % 3 == 1)
}

/// Largest number of blocks two (or three) systems of order `2r+1` can
/// share beyond a common flower: every block not through the flower
/// point is a cross block of the groups induced by the flower pairs.
pub fn max_extra_blocks(r: usize) -> u32 {
    (2 * r * (r - 1) / 3) as u32
}

/// `{0, …, n}` minus `{n-1, n-2, n-3, n-5}`: the classical candidate
/// spectrum shape for pairwise intersection problems.
pub fn spectrum_s2(n: u32) -> SpectrumSet {
    let gaps = [1u32, 2, 3, 5];
    (0..=n)
        .filter(|&k| !gaps.iter().any(|g| n >= *g && k == n - g))
        .collect()
}

/// `{0, …, n}` minus `{n-1, …, n-5, n-7}`: the candidate spectrum shape
/// for three-way intersection problems.
pub fn spectrum_s3(n: u32) -> SpectrumSet {
    let gaps = [1u32, 2, 3, 4, 5, 7];
    (0..=n)
        .filter(|&k| !gaps.iter().any(|g| n >= *g && k == n - g))
        .collect()
}

/// Candidate set for the number of shared blocks (beyond the flower) of
/// three systems of order `2r+1` with a common flower.
pub fn i3f(r: usize) -> SpectrumSet {
    spectrum_s3(max_extra_blocks(r))
}

/// Candidate set for the number of shared blocks of three systems of
/// order `v` (no flower constraint).
pub fn i3(v: usize) -> SpectrumSet {
    spectrum_s3(t_v(v))
}

/// Candidate set for the two-system flower intersection problem.
pub fn i_f(r: usize) -> SpectrumSet {
    spectrum_s2(max_extra_blocks(r))
}

/// Candidate set for the number of cells in which three Latin squares of
/// order `n` agree, all other cells being pairwise distinct.
///
/// For `n ≥ 4` this is `[0, n²-15] ∪ {n²-12, n²-9, n²}`. Orders below 4
/// use the same expression with the negative entries dropped, which
/// yields `{0}`, `{1}`, `{4}`, `{0, 9}` — all confirmed by exhaustive
/// search over the handful of squares of those orders.
pub fn iprime3(n: usize) -> SpectrumSet {
    let sq = (n * n) as i64;
    let mut s: SpectrumSet = (0..=(sq - 15).max(-1)).map(|k| k as u32).collect();
    s.extend([sq - 12, sq - 9, sq].into_iter().filter(|&k| k >= 0).map(|k| k as u32));
    s
}

/// Published spectrum of three-way intersection sizes of Latin squares
/// of order `n` (agreeing cells; all other cells pairwise distinct).
pub fn published_jprime3(n: usize) -> SpectrumSet {
    match n {
        0 => [0u32].into_iter().collect(),
        1 => [1u32].into_iter().collect(),
        2 => [4u32].into_iter().collect(),
        3 => [0u32, 9].into_iter().collect(),
        4 => [0u32, 1, 4, 16].into_iter().collect(),
        5 => (0..=7).chain([10, 25]).collect(),
        6 => (0..=19).chain([27, 36]).collect(),
        7 => (0..=30).chain([37, 40, 49]).collect(),
        _ => iprime3(n),
    }
}

/// Published spectrum of three-way intersection sizes of Steiner triple
/// systems of order `v` (no flower constraint). `None` when `v` is not
/// an admissible order.
pub fn published_j3(v: usize) -> Option<SpectrumSet> {
    if !admissible_sts_order(v) || v < 3 {
        return None;
    }
    Some(match v {
        3 => [1u32].into_iter().collect(),
        7 => [1u32, 7].into_iter().collect(),
        9 => [0u32, 1, 3, 4, 12].into_iter().collect(),
        13 => {
            let mut s = i3(13);
            for k in [14, 15, 16, 17, 18, 20] {
                s.remove(&k);
            }
            s
        }
        15 => {
            let mut s = i3(15);
            for k in [24, 25, 26, 27] {
                s.remove(&k);
            }
            s
        }
        _ => i3(v),
    })
}

/// Published spectrum for the two-system flower intersection problem.
pub fn published_jf(r: usize) -> Option<SpectrumSet> {
    if !admissible_r(r) {
        return None;
    }
    let mut s = i_f(r);
    if r == 4 {
        s.remove(&1);
        s.remove(&4);
    }
    Some(s)
}

/// Published bounds on the three-way flower intersection spectrum for
/// replication number `r`: `(lower, upper, exact)`. `lower` is what the
/// literature realizes, `upper` what its necessary conditions allow;
/// `exact` means the two coincide. Orders without published data get an
/// empty lower bound and the counting upper bound.
pub fn published_j3f(r: usize) -> Option<(SpectrumSet, SpectrumSet, bool)> {
    if !admissible_r(r) {
        return None;
    }
    let full = i3f(r);
    Some(match r {
        1 => (full.clone(), full, true),
        3 => (full.clone(), full, true), // i3f(3) = {4}
        4 => {
            let s: SpectrumSet = [0u32, 8].into_iter().collect();
            (s.clone(), s, true)
        }
        6 => {
            let lower: SpectrumSet = (0..=5).chain([7, 20]).collect();
            let upper: SpectrumSet = (0..=7).chain([20]).collect();
            (lower, upper, false)
        }
        7 => {
            let lower: SpectrumSet =
                (0..=8).chain(10..=13).chain([16, 22, 28]).collect();
            let upper: SpectrumSet = (0..=16).chain([22, 28]).collect();
            (lower, upper, false)
        }
        9 => {
            let mut lower = full.clone();
            for k in [4, 6, 7, 9, 11, 34, 35] {
                lower.remove(&k);
            }
            (lower, full, false)
        }
        10 | 15 | 60 | 132 => (full.clone(), full, true),
        24 => {
            let mut lower = full.clone();
            for k in 1..=15 {
                lower.remove(&k);
            }
            (lower, full, false)
        }
        _ => (SpectrumSet::new(), full, false),
    })
}

/// One necessary condition that a target `(r, k)` fails or barely
/// satisfies. These refine the basic counting bound using published
/// spectra of related problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    /// `k + r` is not an achievable three-way intersection size for
    /// systems of order `2r+1`, so no witness can exist.
    PlainTriple { v: usize, needed: u32 },
    /// `k` is not achievable even for two systems with a common flower.
    PairFlower { r: usize },
    /// `k` lies outside the published upper bound for this `r`.
    PublishedUpper { r: usize },
}

impl Finding {
    pub fn describe(&self) -> String {
        match self {
            Finding::PlainTriple { v, needed } => format!(
                "{needed} (= k + r) is not an achievable 3-way block \
                 intersection size for systems of order {v}"
            ),
            Finding::PairFlower { r } => format!(
                "k is not achievable even for two systems of order {} \
                 with a common flower",
                2 * r + 1
            ),
            Finding::PublishedUpper { r } => {
                format!("k lies outside the published spectrum for r = {r}")
            }
        }
    }
}

/// Result of [`check_necessary_conditions`].
#[derive(Debug, Clone)]
pub struct NecessaryCheck {
    pub r: usize,
    pub k: u32,
    pub admissible: bool,
    /// `k` lies in the counting candidate set `i3f(r)`.
    pub in_candidate_set: bool,
    /// Violations of sharper published conditions (empty when none).
    pub findings: Vec<Finding>,
}

impl NecessaryCheck {
    /// Passes the basic counting conditions.
    pub fn ok(&self) -> bool {
        self.admissible && self.in_candidate_set
    }

    /// Passes every condition we can check, including published spectra.
    pub fn strict_ok(&self) -> bool {
        self.ok() && self.findings.is_empty()
    }

    pub fn describe(&self) -> String {
        if !self.admissible {
            return format!("r = {} is not admissible (need r ≡ 0, 1 mod 3)", self.r);
        }
        if !self.in_candidate_set {
            return format!(
                "k = {} is outside the candidate set for r = {} \
                 (max {}, near-maximum gaps excluded)",
                self.k,
                self.r,
                max_extra_blocks(self.r)
            );
        }
        if let Some(f) = self.findings.first() {
            return f.describe();
        }
        String::from("ok")
    }
}

/// Check all known necessary conditions for "three systems of order
/// `2r+1` share exactly `k` blocks beyond a common flower".
///
/// Beyond the counting bound, orders up to 19 are compared against the
/// published plain-triple and pair-flower spectra.
pub fn check_necessary_conditions(r: usize, k: u32) -> NecessaryCheck {
    let admissible = admissible_r(r);
    let in_candidate_set = admissible && i3f(r).contains(&k);
    let mut findings = Vec::new();
    if admissible && in_candidate_set {
        let v = 2 * r + 1;
        if v <= 19 {
            if let Some(j3) = published_j3(v) {
                if !j3.contains(&(k + r as u32)) {
                    findings.push(Finding::PlainTriple { v, needed: k + r as u32 });
                }
            }
            if let Some(jf) = published_jf(r) {
                if !jf.contains(&k) {
                    findings.push(Finding::PairFlower { r });
                }
            }
        }
        if let Some((_, upper, _)) = published_j3f(r) {
            if !upper.contains(&k) {
                findings.push(Finding::PublishedUpper { r });
            }
        }
    }
    NecessaryCheck { r, k, admissible, in_candidate_set, findings }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_shapes() {
        // Small direct evaluations.
        assert_eq!(i3f(1), [0u32].into_iter().collect::<SpectrumSet>());
        assert_eq!(i3f(3), [4u32].into_iter().collect::<SpectrumSet>());
        assert_eq!(i3f(4), [0u32, 2, 8].into_iter().collect::<SpectrumSet>());
        assert_eq!(t_v(7), 7);
        assert_eq!(t_v(9), 12);
        assert_eq!(t_v(15), 35);
    }

    #[test]
    fn iprime3_values() {
        assert_eq!(iprime3(3), [0u32, 9].into_iter().collect::<SpectrumSet>());
        assert_eq!(
            iprime3(4),
            [0u32, 1, 4, 7, 16].into_iter().collect::<SpectrumSet>()
        );
        let s8 = iprime3(8);
        assert!(s8.contains(&49) && s8.contains(&52) && s8.contains(&55));
        assert!(!s8.contains(&50) && !s8.contains(&63) && s8.contains(&64));
    }

    #[test]
    fn necessary_condition_examples() {
        assert!(check_necessary_conditions(3, 4).strict_ok());
        // r = 4, k = 2: passes counting but fails published conditions.
        let c = check_necessary_conditions(4, 2);
        assert!(c.ok() && !c.strict_ok());
        // r = 7, k = 17: passes counting, fails the plain-triple condition.
        let c = check_necessary_conditions(7, 17);
        assert!(c.ok());
        assert!(c.findings.iter().any(|f| matches!(f, Finding::PlainTriple { .. })));
        // Non-admissible r.
        assert!(!check_necessary_conditions(5, 0).admissible);
    }

    #[test]
    fn published_j3f_consistency() {
        for r in [1usize, 3, 4, 6, 7, 9, 10, 15, 24, 60, 132] {
            let (lower, upper, exact) = published_j3f(r).unwrap();
            assert!(lower.is_subset(&upper), "r = {r}");
            assert!(upper.is_subset(&i3f(r)), "r = {r}");
            assert_eq!(exact, lower == upper, "r = {r}");
        }
    }
}
