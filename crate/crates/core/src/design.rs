//! Steiner triple systems, flowers, permutations, and the certificate
//! verifier that every construction in this crate must satisfy.
//!
//! Points are `0`-based `u16` labels. Blocks are sorted triples and a
//! system's block list is kept sorted and deduplicated, so block-set
//! operations are merge walks and equality is structural.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::spectrum::{admissible_sts_order, t_v};

pub type Point = u16;
/// A block, stored sorted.
pub type Triple = [Point; 3];

/// Sort a candidate block in place and return it.
pub fn canon_triple(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

/// A triple system candidate: `v` points and a canonical block list.
/// Construction does not prove it is a Steiner triple system; call
/// [`TripleSystem::validate`] (or rely on the certificate verifier).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TripleSystem {
    v: usize,
    blocks: Vec<Triple>,
}

/// Why a block is malformed independent of pair coverage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockIssue {
    RepeatedPoint(Triple),
    OutOfRange(Triple),
}

/// Itemized result of checking the Steiner property.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub v: usize,
    pub order_admissible: bool,
    pub malformed: Vec<BlockIssue>,
    /// Expected vs. actual number of distinct well-formed blocks.
    pub block_count: (u32, u32),
    pub uncovered_pairs: Vec<(Point, Point)>,
    /// Pairs covered by more than one block, with multiplicity.
    pub multi_covered_pairs: Vec<(Point, Point, u32)>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.order_admissible
            && self.malformed.is_empty()
            && self.block_count.0 == self.block_count.1
            && self.uncovered_pairs.is_empty()
            && self.multi_covered_pairs.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            return String::from("valid");
        }
        format!(
            "order {} (admissible: {}), {} malformed, {} of {} blocks, \
             {} uncovered pairs, {} multiply covered pairs",
            self.v,
            self.order_admissible,
            self.malformed.len(),
            self.block_count.1,
            self.block_count.0,
            self.uncovered_pairs.len(),
            self.multi_covered_pairs.len()
        )
    }
}

impl TripleSystem {
    /// Canonicalize: sort each triple, sort the list, drop duplicates.
    pub fn new(v: usize, blocks: impl IntoIterator<Item = Triple>) -> Self {
        let mut blocks: Vec<Triple> =
            blocks.into_iter().map(canon_triple).collect();
        blocks.sort_unstable();
        blocks.dedup();
        TripleSystem { v, blocks }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Replication number `(v-1)/2`: blocks through each point.
    pub fn r(&self) -> usize {
        (self.v - 1) / 2
    }

    pub fn blocks(&self) -> &[Triple] {
        &self.blocks
    }

    pub fn contains_block(&self, t: Triple) -> bool {
        self.blocks.binary_search(&canon_triple(t)).is_ok()
    }

    /// Full check of the Steiner property with an itemized report.
    pub fn validate(&self) -> ValidationReport {
        let v = self.v;
        let mut rep = ValidationReport {
            v,
            order_admissible: admissible_sts_order(v) && v >= 3,
            ..ValidationReport::default()
        };
        let mut well_formed = 0u32;
        let mut counts = vec![0u32; v * v];
        for &b in &self.blocks {
            let [x, y, z] = b;
            if x == y || y == z || x == z {
                rep.malformed.push(BlockIssue::RepeatedPoint(b));
                continue;
            }
            if (z as usize) >= v {
                rep.malformed.push(BlockIssue::OutOfRange(b));
                continue;
            }
            well_formed += 1;
            for (a, c) in [(x, y), (x, z), (y, z)] {
                counts[a as usize * v + c as usize] += 1;
            }
        }
        rep.block_count = (if rep.order_admissible { t_v(v) } else { 0 }, well_formed);
        for x in 0..v {
            for y in (x + 1)..v {
                match counts[x * v + y] {
                    0 => rep.uncovered_pairs.push((x as Point, y as Point)),
                    1 => {}
                    c => rep.multi_covered_pairs.push((x as Point, y as Point, c)),
                }
            }
        }
        rep
    }

    /// All blocks through `x`: the flower at `x`.
    pub fn flower_of(&self, x: Point) -> Flower {
        let blocks: Vec<Triple> =
            self.blocks.iter().copied().filter(|b| b.contains(&x)).collect();
        Flower { point: x, blocks }
    }

    /// Map points through `f` into a system on `new_v` points.
    /// `f` must be injective on `0..v` with image inside `0..new_v`.
    pub fn map_into(
        &self,
        new_v: usize,
        mut f: impl FnMut(Point) -> Point,
    ) -> Result<TripleSystem, DesignError> {
        let mut image = vec![Point::MAX; self.v];
        let mut seen = vec![false; new_v];
        for p in 0..self.v {
            let q = f(p as Point);
            if (q as usize) >= new_v {
                return Err(DesignError::NotInjective);
            }
            if seen[q as usize] {
                return Err(DesignError::NotInjective);
            }
            seen[q as usize] = true;
            image[p] = q;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|&[x, y, z]| {
                canon_triple([image[x as usize], image[y as usize], image[z as usize]])
            })
            .collect::<Vec<_>>();
        Ok(TripleSystem::new(new_v, blocks))
    }

    /// Relabel by a permutation of the point set.
    pub fn apply_permutation(&self, p: &Permutation) -> Result<TripleSystem, DesignError> {
        if p.len() != self.v {
            return Err(DesignError::SizeMismatch { expected: self.v, got: p.len() });
        }
        self.map_into(self.v, |x| p.apply(x))
    }

    /// Pair-incidence index for O(1) "third point of a pair" lookups.
    pub fn pair_index(&self) -> PairIndex {
        PairIndex::build(self)
    }
}

/// All blocks through one point. For a valid system of order `2r+1`
/// there are exactly `r` of them and they partition the other points
/// into pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flower {
    pub point: Point,
    pub blocks: Vec<Triple>,
}

impl Flower {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The pairs obtained by deleting the flower point, sorted.
    pub fn pairs(&self) -> Vec<[Point; 2]> {
        let mut ps: Vec<[Point; 2]> = self
            .blocks
            .iter()
            .map(|b| {
                let rest: Vec<Point> =
                    b.iter().copied().filter(|&x| x != self.point).collect();
                [rest[0], rest[1]]
            })
            .collect();
        ps.sort_unstable();
        ps
    }
}

/// O(1) lookup of the block through a pair of points.
pub struct PairIndex {
    v: usize,
    third: Vec<Point>,
}

impl PairIndex {
    pub fn build(s: &TripleSystem) -> Self {
        let v = s.v();
        let mut third = vec![Point::MAX; v * v];
        for &[x, y, z] in s.blocks() {
            if (z as usize) < v && x != y && y != z {
                third[x as usize * v + y as usize] = z;
                third[y as usize * v + x as usize] = z;
                third[x as usize * v + z as usize] = y;
                third[z as usize * v + x as usize] = y;
                third[y as usize * v + z as usize] = x;
                third[z as usize * v + y as usize] = x;
            }
        }
        PairIndex { v, third }
    }

    /// Third point of the block through `{x, y}`, if any.
    pub fn third(&self, x: Point, y: Point) -> Option<Point> {
        let t = self.third[x as usize * self.v + y as usize];
        (t != Point::MAX).then_some(t)
    }
}

/// Intersection of two canonical block lists (merge walk).
pub fn intersect_blocks(a: &[Triple], b: &[Triple]) -> Vec<Triple> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// A permutation of `0..n`, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<Point>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n as Point).collect() }
    }

    /// Build from an image table, checking bijectivity.
    pub fn from_image(image: Vec<Point>) -> Result<Self, DesignError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &q in &image {
            if (q as usize) >= n || seen[q as usize] {
                return Err(DesignError::NotInjective);
            }
            seen[q as usize] = true;
        }
        Ok(Permutation { image })
    }

    /// Build from disjoint cycles over `0..n`; points not mentioned are
    /// fixed. Repeated points are rejected.
    pub fn from_cycles(n: usize, cycles: &[Vec<Point>]) -> Result<Self, DesignError> {
        let mut image: Vec<Point> = (0..n as Point).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                if (from as usize) >= n || touched[from as usize] {
                    return Err(DesignError::NotInjective);
                }
                touched[from as usize] = true;
                image[from as usize] = to;
            }
        }
        Permutation::from_image(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, x: Point) -> Point {
        self.image[x as usize]
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0 as Point; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as Point;
        }
        Permutation { image }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let image =
            other.image.iter().map(|&x| self.image[x as usize]).collect();
        Permutation { image }
    }

    pub fn fixed_points(&self) -> Vec<Point> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as Point == y)
            .map(|(x, _)| x as Point)
            .collect()
    }
}

/// Three systems of the same order, as an ordered triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StsTriple {
    pub systems: [TripleSystem; 3],
}

impl StsTriple {
    pub fn new(systems: [TripleSystem; 3]) -> Self {
        StsTriple { systems }
    }

    pub fn v(&self) -> usize {
        self.systems[0].v()
    }

    /// The three pairwise intersections, in order (0∩1, 0∩2, 1∩2).
    pub fn pairwise(&self) -> [Vec<Triple>; 3] {
        let [a, b, c] = &self.systems;
        [
            intersect_blocks(a.blocks(), b.blocks()),
            intersect_blocks(a.blocks(), c.blocks()),
            intersect_blocks(b.blocks(), c.blocks()),
        ]
    }

    /// The common block set, provided all three pairwise intersections
    /// are the *same* set; otherwise the offending witness.
    pub fn common(&self) -> Result<Vec<Triple>, VerifyError> {
        let [ab, ac, bc] = self.pairwise();
        for (other, name) in [(&ac, "0∩2"), (&bc, "1∩2")] {
            if &ab != other {
                let witness = ab
                    .iter()
                    .find(|t| !other.contains(t))
                    .or_else(|| other.iter().find(|t| !ab.contains(t)))
                    .copied()
                    .unwrap_or([0, 0, 0]);
                return Err(VerifyError::PairwiseMismatch {
                    pair: String::from(name),
                    witness,
                });
            }
        }
        Ok(ab)
    }
}

/// Compute the common block set of three systems, requiring the three
/// pairwise intersections to coincide.
pub fn three_way_common(t: &StsTriple) -> Result<Vec<Triple>, VerifyError> {
    t.common()
}

/// Claim: the three systems are Steiner triple systems of order `v`
/// that pairwise intersect in the same `k + r` blocks, `r` of which form
/// the flower at `flower_point` in all three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowerCertificate {
    pub triple: StsTriple,
    pub flower_point: Point,
    pub claimed_k: u32,
}

impl FlowerCertificate {
    pub fn v(&self) -> usize {
        self.triple.v()
    }

    pub fn r(&self) -> usize {
        (self.v() - 1) / 2
    }

    /// Re-derive `k` from scratch; see [`flower_intersection_number`].
    pub fn verify(&self) -> Result<u32, VerifyError> {
        flower_intersection_number(self)
    }

    /// Relabel all three systems by the same injection.
    pub fn map_into(
        &self,
        new_v: usize,
        f: impl Fn(Point) -> Point,
    ) -> Result<FlowerCertificate, DesignError> {
        let systems = [
            self.triple.systems[0].map_into(new_v, &f)?,
            self.triple.systems[1].map_into(new_v, &f)?,
            self.triple.systems[2].map_into(new_v, &f)?,
        ];
        Ok(FlowerCertificate {
            triple: StsTriple::new(systems),
            flower_point: f(self.flower_point),
            claimed_k: self.claimed_k,
        })
    }
}

/// Verification failure for a flower certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    OrderMismatch,
    InvalidSystem { index: usize, summary: String },
    PairwiseMismatch { pair: String, witness: Triple },
    FlowerNotCommon { point: Point },
    FlowerPointOutOfRange { point: Point },
    ClaimMismatch { claimed: u32, actual: u32 },
}

impl core::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VerifyError::OrderMismatch => {
                write!(f, "the three systems do not have the same order")
            }
            VerifyError::InvalidSystem { index, summary } => {
                write!(f, "system {index} is not a valid triple system: {summary}")
            }
            VerifyError::PairwiseMismatch { pair, witness } => write!(
                f,
                "pairwise intersections differ (pair {pair}, witness block {witness:?})"
            ),
            VerifyError::FlowerNotCommon { point } => {
                write!(f, "the systems do not share the flower at point {point}")
            }
            VerifyError::FlowerPointOutOfRange { point } => {
                write!(f, "flower point {point} out of range")
            }
            VerifyError::ClaimMismatch { claimed, actual } => {
                write!(f, "claimed k = {claimed} but recomputed k = {actual}")
            }
        }
    }
}

/// The verifier all constructions answer to. Recomputes everything from
/// the raw block sets: validity of each system, equality of the three
/// pairwise intersections, a common flower at the declared point, and
/// the claimed `k` (common blocks minus the `r` flower blocks).
pub fn flower_intersection_number(cert: &FlowerCertificate) -> Result<u32, VerifyError> {
    let v = cert.triple.systems[0].v();
    if cert.triple.systems.iter().any(|s| s.v() != v) {
        return Err(VerifyError::OrderMismatch);
    }
    if cert.flower_point as usize >= v {
        return Err(VerifyError::FlowerPointOutOfRange { point: cert.flower_point });
    }
    for (index, s) in cert.triple.systems.iter().enumerate() {
        let rep = s.validate();
        if !rep.ok() {
            return Err(VerifyError::InvalidSystem { index, summary: rep.summary() });
        }
    }
    let common = cert.triple.common()?;
    let flowers: Vec<Flower> = cert
        .triple
        .systems
        .iter()
        .map(|s| s.flower_of(cert.flower_point))
        .collect();
    if flowers[0] != flowers[1] || flowers[0] != flowers[2] {
        return Err(VerifyError::FlowerNotCommon { point: cert.flower_point });
    }
    // A common flower is automatically inside the common block set; the
    // debug assertion guards the verifier itself.
    debug_assert!(flowers[0].blocks.iter().all(|b| common.contains(b)));
    let r = (v - 1) / 2;
    let actual = common.len() as u32 - r as u32;
    if actual != cert.claimed_k {
        return Err(VerifyError::ClaimMismatch { claimed: cert.claimed_k, actual });
    }
    Ok(actual)
}

/// Errors from design-level operations (not verification).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignError {
    NotInjective,
    SizeMismatch { expected: usize, got: usize },
    OddOrder { order: usize },
    UnsupportedOrder { v: usize },
}

impl core::fmt::Display for DesignError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DesignError::NotInjective => write!(f, "point map is not injective"),
            DesignError::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {expected}, got {got}")
            }
            DesignError::OddOrder { order } => {
                write!(f, "order {order} is odd; a one-factorization needs an even order")
            }
            DesignError::UnsupportedOrder { v } => {
                write!(f, "no deterministic base system of order {v} is available")
            }
        }
    }
}

/// A one-factorization of the complete graph on `0..order` (even): a
/// partition of all edges into `order - 1` perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFactorization {
    pub order: usize,
    pub factors: Vec<Vec<[Point; 2]>>,
}

impl OneFactorization {
    /// Check that the factors are perfect matchings partitioning all edges.
    pub fn validate(&self) -> bool {
        let n = self.order;
        if n % 2 != 0 || self.factors.len() != n - 1 {
            return false;
        }
        let mut seen = vec![false; n * n];
        for f in &self.factors {
            if f.len() != n / 2 {
                return false;
            }
            let mut used = vec![false; n];
            for &[x, y] in f {
                if x >= y || (y as usize) >= n {
                    return false;
                }
                if used[x as usize] || used[y as usize] {
                    return false;
                }
                used[x as usize] = true;
                used[y as usize] = true;
                let e = x as usize * n + y as usize;
                if seen[e] {
                    return false;
                }
                seen[e] = true;
            }
        }
        true
    }
}

/// Deterministic one-factorization of the complete graph on an even
/// number of vertices: vertex `order-1` stays fixed while `0..order-1`
/// rotate (the classical circle construction). Factor `i` pairs the
/// fixed vertex with `i` and otherwise matches `i+j` with `i-j`
/// (mod `order-1`).
pub fn one_factorize(order: usize) -> Result<OneFactorization, DesignError> {
    if order % 2 != 0 || order < 2 {
        return Err(DesignError::OddOrder { order });
    }
    let m = order - 1; // circle size
    let mut factors = Vec::with_capacity(m);
    for i in 0..m {
        let mut f = vec![[i as Point, m as Point]];
        for j in 1..=(order / 2 - 1) {
            let a = ((i + j) % m) as Point;
            let b = ((i + m - j % m) % m) as Point;
            f.push(canon_pair([a, b]));
        }
        f.sort_unstable();
        factors.push(f);
    }
    let of = OneFactorization { order, factors };
    debug_assert!(of.validate());
    Ok(of)
}

fn canon_pair(mut p: [Point; 2]) -> [Point; 2] {
    p.sort_unstable();
    p
}

// ---------------------------------------------------------------------
// Deterministic base systems of small and structured orders.
// ---------------------------------------------------------------------

/// The cyclic system of order 7 generated by {0, 1, 3}.
pub fn fano() -> TripleSystem {
    let blocks: Vec<Triple> =
        (0..7).map(|i| canon_triple([i, (i + 1) % 7, (i + 3) % 7])).collect();
    TripleSystem::new(7, blocks)
}

/// The point-line design of the affine plane of order 3 (order 9).
pub fn affine_sts9() -> TripleSystem {
    // Rows, columns and the two diagonal parallel classes of a 3x3 grid.
    let lines: [[Point; 3]; 12] = [
        [0, 1, 2],
        [3, 4, 5],
        [6, 7, 8],
        [0, 3, 6],
        [1, 4, 7],
        [2, 5, 8],
        [0, 4, 8],
        [1, 5, 6],
        [2, 3, 7],
        [0, 5, 7],
        [1, 3, 8],
        [2, 4, 6],
    ];
    TripleSystem::new(9, lines)
}

/// The classical construction for orders `v ≡ 3 (mod 6)`: points
/// `Z_m × {0,1,2}` with `m = v/3` odd, one block per triple `(i,i,i)`,
/// and `{(i,g), (j,g), ((i+j)/2, g+1)}` for `i < j` (halving mod `m`).
pub fn bose(v: usize) -> Result<TripleSystem, DesignError> {
    if v % 6 != 3 {
        return Err(DesignError::UnsupportedOrder { v });
    }
    let m = v / 3;
    let half = (m + 1) / 2; // inverse of 2 mod m
    let pt = |x: usize, g: usize| (g * m + x) as Point;
    let mut blocks = Vec::new();
    for i in 0..m {
        blocks.push(canon_triple([pt(i, 0), pt(i, 1), pt(i, 2)]));
    }
    for g in 0..3 {
        for i in 0..m {
            for j in (i + 1)..m {
                let s = (i + j) * half % m;
                blocks.push(canon_triple([pt(i, g), pt(j, g), pt(s, (g + 1) % 3)]));
            }
        }
    }
    Ok(TripleSystem::new(v, blocks))
}

/// A cyclic system of order 13: orbits of the base blocks `{0,1,4}` and
/// `{0,2,7}` under `x → x+1 (mod 13)`. The base-block differences
/// `±{1,3,4}` and `±{2,5,7}` together cover every nonzero residue once.
pub fn cyclic_sts13() -> TripleSystem {
    let mut blocks = Vec::with_capacity(26);
    for i in 0..13u16 {
        blocks.push(canon_triple([i, (i + 1) % 13, (i + 4) % 13]));
        blocks.push(canon_triple([i, (i + 2) % 13, (i + 7) % 13]));
    }
    TripleSystem::new(13, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_is_valid_and_flowered() {
        let f = fano();
        assert!(f.validate().ok());
        let fl = f.flower_of(0);
        assert_eq!(fl.len(), 3);
        // The ad-hoc example system used throughout the docs.
        let s = TripleSystem::new(
            7,
            [
                [0, 1, 3],
                [1, 2, 4],
                [2, 3, 5],
                [3, 4, 6],
                [4, 5, 0],
                [5, 6, 1],
                [6, 0, 2],
            ],
        );
        assert!(s.validate().ok());
        let fl = s.flower_of(0);
        assert_eq!(
            fl.blocks,
            vec![[0, 1, 3], [0, 2, 6], [0, 4, 5]]
        );
    }

    #[test]
    fn affine_and_bose_are_valid() {
        assert!(affine_sts9().validate().ok());
        assert!(cyclic_sts13().validate().ok());
        for v in [9usize, 15, 21, 27, 33, 45] {
            assert!(bose(v).unwrap().validate().ok(), "order {v}");
        }
    }

    #[test]
    fn broken_systems_are_reported() {
        // Remove a block: its three pairs go uncovered.
        let mut blocks: Vec<Triple> = fano().blocks().to_vec();
        blocks.pop();
        let s = TripleSystem::new(7, blocks);
        let rep = s.validate();
        assert!(!rep.ok());
        assert_eq!(rep.uncovered_pairs.len(), 3);
        // Malformed blocks are reported distinctly.
        let s = TripleSystem::new(7, [[0, 0, 1], [0, 1, 9]]);
        let rep = s.validate();
        assert_eq!(rep.malformed.len(), 2);
    }

    #[test]
    fn permutations_roundtrip() {
        let p = Permutation::from_cycles(7, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(4), 3);
        assert_eq!(p.apply(6), 6);
        let q = p.inverse();
        assert_eq!(q.compose(&p).fixed_points().len(), 7);
        let f = fano();
        let g = f.apply_permutation(&p).unwrap();
        assert!(g.validate().ok());
        assert_eq!(
            g.apply_permutation(&q).unwrap(),
            f,
            "inverse relabeling restores the system"
        );
        // Duplicate point in cycles is rejected.
        assert!(Permutation::from_cycles(7, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn certificate_verifier_catches_mismatches() {
        let f = fano();
        let cert = FlowerCertificate {
            triple: StsTriple::new([f.clone(), f.clone(), f.clone()]),
            flower_point: 0,
            claimed_k: t_v(7) - 3,
        };
        assert_eq!(cert.verify().unwrap(), 4);
        let bad = FlowerCertificate { claimed_k: 3, ..cert.clone() };
        assert!(matches!(
            bad.verify(),
            Err(VerifyError::ClaimMismatch { claimed: 3, actual: 4 })
        ));
        // A triple with unequal pairwise intersections must be rejected.
        let g = f
            .apply_permutation(&Permutation::from_cycles(7, &[vec![1, 2, 3]]).unwrap())
            .unwrap();
        let mixed = FlowerCertificate {
            triple: StsTriple::new([f.clone(), f.clone(), g]),
            flower_point: 0,
            claimed_k: 4,
        };
        assert!(matches!(mixed.verify(), Err(VerifyError::PairwiseMismatch { .. })));
    }

    #[test]
    fn one_factorizations() {
        for order in [2usize, 4, 8, 10, 16, 20] {
            let of = one_factorize(order).unwrap();
            assert!(of.validate(), "order {order}");
        }
        assert!(one_factorize(7).is_err());
    }
}
