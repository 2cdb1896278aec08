//! Pairwise balanced designs and group divisible designs.
//!
//! Provides exact pair-coverage audits for both design kinds, a product
//! design on six groups built from four mutually orthogonal Latin
//! squares, composition of Steiner triple systems over a balanced-design
//! skeleton, and the decomposition of a triple system into a flower plus
//! a group divisible remainder (and back).

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::design::{canon_triple, Point, Triple, TripleSystem};
use crate::latin::{are_orthogonal, mols_prime_power, LatinError, LatinSquare};

/// Why a block or group is structurally unusable, independent of pair
/// coverage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockDefect {
    RepeatedPoint,
    OutOfRange,
    TooSmall,
    SizeNotAllowed,
}

impl core::fmt::Display for BlockDefect {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BlockDefect::RepeatedPoint => write!(f, "repeated point"),
            BlockDefect::OutOfRange => write!(f, "point out of range"),
            BlockDefect::TooSmall => write!(f, "fewer than two points"),
            BlockDefect::SizeNotAllowed => write!(f, "size outside the allowed set"),
        }
    }
}

/// A design in which every pair of points must lie in exactly one block;
/// blocks may have any size from the allowed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseBalancedDesign {
    v: usize,
    /// Allowed block sizes, sorted; empty means any size ≥ 2.
    sizes: Vec<usize>,
    blocks: Vec<Vec<Point>>,
}

/// Itemized result of the pair audit for a [`PairwiseBalancedDesign`].
#[derive(Clone, Debug, Default)]
pub struct PbdReport {
    pub v: usize,
    pub block_defects: Vec<(usize, BlockDefect)>,
    pub uncovered_pairs: Vec<(Point, Point)>,
    /// Pairs in more than one block, with multiplicity.
    pub multi_covered_pairs: Vec<(Point, Point, u32)>,
}

impl PbdReport {
    pub fn ok(&self) -> bool {
        self.block_defects.is_empty()
            && self.uncovered_pairs.is_empty()
            && self.multi_covered_pairs.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            return String::from("valid");
        }
        format!(
            "order {}: {} defective blocks, {} uncovered pairs, {} multiply covered pairs",
            self.v,
            self.block_defects.len(),
            self.uncovered_pairs.len(),
            self.multi_covered_pairs.len()
        )
    }
}

impl PairwiseBalancedDesign {
    /// Canonicalize: sort each block and the block list. Duplicate
    /// blocks are kept so the audit can report them.
    pub fn new(
        v: usize,
        sizes: impl IntoIterator<Item = usize>,
        blocks: impl IntoIterator<Item = Vec<Point>>,
    ) -> Self {
        let mut sizes: Vec<usize> = sizes.into_iter().collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut blocks: Vec<Vec<Point>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        PairwiseBalancedDesign { v, sizes, blocks }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    /// Exact pair audit: every pair of points in exactly one block.
    pub fn validate(&self) -> PbdReport {
        let v = self.v;
        let mut rep = PbdReport { v, ..PbdReport::default() };
        let mut counts = vec![0u32; v * v];
        for (bi, block) in self.blocks.iter().enumerate() {
            match block_defect(block, v, &self.sizes) {
                Some(d @ (BlockDefect::RepeatedPoint | BlockDefect::OutOfRange)) => {
                    rep.block_defects.push((bi, d));
                    continue;
                }
                Some(d) => rep.block_defects.push((bi, d)),
                None => {}
            }
            for (i, &x) in block.iter().enumerate() {
                for &y in &block[i + 1..] {
                    counts[x as usize * v + y as usize] += 1;
                }
            }
        }
        collect_pair_issues(&counts, v, |_, _| true, &mut rep.uncovered_pairs, &mut rep.multi_covered_pairs);
        rep
    }
}

/// A design whose points are partitioned into groups; pairs from
/// distinct groups must lie in exactly one block and pairs inside a
/// group in none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDivisibleDesign {
    v: usize,
    groups: Vec<Vec<Point>>,
    blocks: Vec<Vec<Point>>,
}

/// Itemized result of the audit for a [`GroupDivisibleDesign`].
#[derive(Clone, Debug, Default)]
pub struct GddReport {
    pub v: usize,
    pub block_defects: Vec<(usize, BlockDefect)>,
    pub group_defects: Vec<(usize, BlockDefect)>,
    /// Points that belong to no group.
    pub unpartitioned_points: Vec<Point>,
    /// Points that belong to more than one group.
    pub overcovered_points: Vec<Point>,
    /// `(block index, group index)` pairs where a block meets a group
    /// in two or more points.
    pub group_conflicts: Vec<(usize, usize)>,
    /// Cross-group pairs in no block.
    pub uncovered_pairs: Vec<(Point, Point)>,
    /// Cross-group pairs in more than one block, with multiplicity.
    pub multi_covered_pairs: Vec<(Point, Point, u32)>,
}

impl GddReport {
    pub fn ok(&self) -> bool {
        self.block_defects.is_empty()
            && self.group_defects.is_empty()
            && self.unpartitioned_points.is_empty()
            && self.overcovered_points.is_empty()
            && self.group_conflicts.is_empty()
            && self.uncovered_pairs.is_empty()
            && self.multi_covered_pairs.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            return String::from("valid");
        }
        format!(
            "order {}: {} defective blocks, {} defective groups, {} unpartitioned points, \
             {} overcovered points, {} block/group conflicts, {} uncovered pairs, \
             {} multiply covered pairs",
            self.v,
            self.block_defects.len(),
            self.group_defects.len(),
            self.unpartitioned_points.len(),
            self.overcovered_points.len(),
            self.group_conflicts.len(),
            self.uncovered_pairs.len(),
            self.multi_covered_pairs.len()
        )
    }
}

impl GroupDivisibleDesign {
    /// Canonicalize: sort members of each group and block, then sort
    /// both lists. Duplicates are kept so the audit can report them.
    pub fn new(
        v: usize,
        groups: impl IntoIterator<Item = Vec<Point>>,
        blocks: impl IntoIterator<Item = Vec<Point>>,
    ) -> Self {
        let sort_all = |it: Vec<Vec<Point>>| -> Vec<Vec<Point>> {
            let mut it: Vec<Vec<Point>> = it
                .into_iter()
                .map(|mut b| {
                    b.sort_unstable();
                    b
                })
                .collect();
            it.sort();
            it
        };
        GroupDivisibleDesign {
            v,
            groups: sort_all(groups.into_iter().collect()),
            blocks: sort_all(blocks.into_iter().collect()),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn groups(&self) -> &[Vec<Point>] {
        &self.groups
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    /// Group sizes with multiplicities, as sorted `(size, count)` pairs.
    pub fn group_type(&self) -> Vec<(usize, usize)> {
        let mut sizes: Vec<usize> = self.groups.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for s in sizes {
            match out.last_mut() {
                Some((sz, c)) if *sz == s => *c += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    /// Exact audit: groups partition the points, no block meets a group
    /// twice, and every cross-group pair lies in exactly one block.
    pub fn validate(&self) -> GddReport {
        let v = self.v;
        let mut rep = GddReport { v, ..GddReport::default() };

        // Group membership; a group is a block that may have size 1.
        let mut membership = vec![0u32; v];
        let mut group_of = vec![usize::MAX; v];
        for (gi, g) in self.groups.iter().enumerate() {
            match block_defect(g, v, &[]) {
                Some(BlockDefect::TooSmall) | None => {}
                Some(d) => {
                    rep.group_defects.push((gi, d));
                    continue;
                }
            }
            for &p in g {
                membership[p as usize] += 1;
                group_of[p as usize] = gi;
            }
        }
        for p in 0..v {
            match membership[p] {
                0 => rep.unpartitioned_points.push(p as Point),
                1 => {}
                _ => rep.overcovered_points.push(p as Point),
            }
        }

        let mut counts = vec![0u32; v * v];
        for (bi, block) in self.blocks.iter().enumerate() {
            match block_defect(block, v, &[]) {
                Some(d @ (BlockDefect::RepeatedPoint | BlockDefect::OutOfRange)) => {
                    rep.block_defects.push((bi, d));
                    continue;
                }
                Some(d) => rep.block_defects.push((bi, d)),
                None => {}
            }
            let mut conflict_groups: Vec<usize> = Vec::new();
            for (i, &x) in block.iter().enumerate() {
                for &y in &block[i + 1..] {
                    let (gx, gy) = (group_of[x as usize], group_of[y as usize]);
                    if gx == gy && gx != usize::MAX {
                        conflict_groups.push(gx);
                    } else {
                        counts[x as usize * v + y as usize] += 1;
                    }
                }
            }
            conflict_groups.sort_unstable();
            conflict_groups.dedup();
            rep.group_conflicts.extend(conflict_groups.into_iter().map(|g| (bi, g)));
        }
        collect_pair_issues(
            &counts,
            v,
            |x, y| {
                let (gx, gy) = (group_of[x], group_of[y]);
                gx != gy || gx == usize::MAX
            },
            &mut rep.uncovered_pairs,
            &mut rep.multi_covered_pairs,
        );
        rep
    }
}

fn block_defect(block: &[Point], v: usize, sizes: &[usize]) -> Option<BlockDefect> {
    if block.windows(2).any(|w| w[0] == w[1]) {
        return Some(BlockDefect::RepeatedPoint);
    }
    if block.iter().any(|&p| p as usize >= v) {
        return Some(BlockDefect::OutOfRange);
    }
    if block.len() < 2 {
        return Some(BlockDefect::TooSmall);
    }
    if !sizes.is_empty() && !sizes.contains(&block.len()) {
        return Some(BlockDefect::SizeNotAllowed);
    }
    None
}

fn collect_pair_issues(
    counts: &[u32],
    v: usize,
    mut relevant: impl FnMut(usize, usize) -> bool,
    uncovered: &mut Vec<(Point, Point)>,
    multi: &mut Vec<(Point, Point, u32)>,
) {
    for x in 0..v {
        for y in (x + 1)..v {
            if !relevant(x, y) {
                continue;
            }
            match counts[x * v + y] {
                0 => uncovered.push((x as Point, y as Point)),
                1 => {}
                c => multi.push((x as Point, y as Point, c)),
            }
        }
    }
}

// ---------------------------------------------------------------------
// Triples of group divisible designs.
// ---------------------------------------------------------------------

/// Why three designs do not form a [`GddTriple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GddTripleError {
    OrderMismatch,
    GroupMismatch,
    Invalid { index: usize, summary: String },
    /// Two of the three pairwise-common block sets differ; `witness` is
    /// a block in one but not the other.
    PairwiseMismatch { pair: (usize, usize), witness: Vec<Point> },
}

impl core::fmt::Display for GddTripleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GddTripleError::OrderMismatch => write!(f, "designs have different orders"),
            GddTripleError::GroupMismatch => write!(f, "designs have different groups"),
            GddTripleError::Invalid { index, summary } => {
                write!(f, "design {index} is invalid: {summary}")
            }
            GddTripleError::PairwiseMismatch { pair, witness } => write!(
                f,
                "pairwise-common block sets differ (intersections with design {} vs {}); witness {:?}",
                pair.0, pair.1, witness
            ),
        }
    }
}

/// Three valid group divisible designs on identical groups whose three
/// pairwise block intersections are the same set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GddTriple {
    designs: [GroupDivisibleDesign; 3],
    common: Vec<Vec<Point>>,
}

impl GddTriple {
    pub fn new(designs: [GroupDivisibleDesign; 3]) -> Result<GddTriple, GddTripleError> {
        if designs[1].v != designs[0].v || designs[2].v != designs[0].v {
            return Err(GddTripleError::OrderMismatch);
        }
        if designs[1].groups != designs[0].groups || designs[2].groups != designs[0].groups {
            return Err(GddTripleError::GroupMismatch);
        }
        for (i, d) in designs.iter().enumerate() {
            let rep = d.validate();
            if !rep.ok() {
                return Err(GddTripleError::Invalid { index: i, summary: rep.summary() });
            }
        }
        let c01 = intersect_sorted(&designs[0].blocks, &designs[1].blocks);
        let c02 = intersect_sorted(&designs[0].blocks, &designs[2].blocks);
        let c12 = intersect_sorted(&designs[1].blocks, &designs[2].blocks);
        for (other, pair) in [(&c02, (0usize, 2usize)), (&c12, (1, 2))] {
            if &c01 != other {
                let witness = first_difference(&c01, other);
                return Err(GddTripleError::PairwiseMismatch { pair, witness });
            }
        }
        Ok(GddTriple { designs, common: c01 })
    }

    pub fn designs(&self) -> &[GroupDivisibleDesign; 3] {
        &self.designs
    }

    /// The block set shared by all three pairwise intersections.
    pub fn common(&self) -> &[Vec<Point>] {
        &self.common
    }

    pub fn is_disjoint(&self) -> bool {
        self.common.is_empty()
    }
}

fn intersect_sorted(a: &[Vec<Point>], b: &[Vec<Point>]) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// First block in exactly one of two sorted lists.
fn first_difference(a: &[Vec<Point>], b: &[Vec<Point>]) -> Vec<Point> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => return a[i].clone(),
            core::cmp::Ordering::Greater => return b[j].clone(),
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    if i < a.len() {
        a[i].clone()
    } else if j < b.len() {
        b[j].clone()
    } else {
        Vec::new()
    }
}

// ---------------------------------------------------------------------
// Errors for the construction operations below.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PbdError {
    /// The six-group product design needs order at least 5.
    OrderTooSmall { t: usize },
    /// No internal source of four mutually orthogonal squares of order `t`.
    MolsUnavailable { t: usize, source: LatinError },
    MolsWrongOrder { index: usize, expected: usize, actual: usize },
    MolsInvalid { index: usize, source: LatinError },
    MolsNotOrthogonal { a: usize, b: usize },
    /// The skeleton's point count is not admissible for composition.
    NotAdmissible { r: usize },
    /// The input design failed its own audit.
    InvalidInput { summary: String },
    /// No sub-system was supplied for a block.
    MissingSubSystem { block: usize, size: usize },
    SubSystemWrongOrder { block: usize, expected: usize, actual: usize },
    /// A sub-system lacks the required triple `{0, 2i+1, 2i+2}`.
    SubSystemMissingSpoke { block: usize, index: usize },
    /// The assembled output failed validation.
    InvalidComposition { summary: String },
    /// The blocks through the chosen point do not pair up the rest.
    FlowerIncomplete { point: Point },
    GroupNotPair { index: usize },
    BlockNotTriple { index: usize },
    PointOutOfRange { point: Point },
}

impl core::fmt::Display for PbdError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PbdError::OrderTooSmall { t } => write!(f, "order {t} is too small (need t >= 5)"),
            PbdError::MolsUnavailable { t, source } => {
                write!(f, "no internal set of 4 mutually orthogonal squares of order {t}: {source}")
            }
            PbdError::MolsWrongOrder { index, expected, actual } => {
                write!(f, "square {index} has order {actual}, expected {expected}")
            }
            PbdError::MolsInvalid { index, source } => {
                write!(f, "square {index} is not a Latin square: {source}")
            }
            PbdError::MolsNotOrthogonal { a, b } => {
                write!(f, "squares {a} and {b} are not orthogonal")
            }
            PbdError::NotAdmissible { r } => {
                write!(f, "point count {r} is not admissible (need r = 0 or 1 mod 3)")
            }
            PbdError::InvalidInput { summary } => write!(f, "input design invalid: {summary}"),
            PbdError::MissingSubSystem { block, size } => {
                write!(f, "no sub-system supplied for block {block} (size {size})")
            }
            PbdError::SubSystemWrongOrder { block, expected, actual } => {
                write!(f, "sub-system for block {block} has order {actual}, expected {expected}")
            }
            PbdError::SubSystemMissingSpoke { block, index } => {
                write!(f, "sub-system for block {block} lacks spoke triple {index}")
            }
            PbdError::InvalidComposition { summary } => {
                write!(f, "assembled system invalid: {summary}")
            }
            PbdError::FlowerIncomplete { point } => {
                write!(f, "blocks through point {point} do not pair up the remaining points")
            }
            PbdError::GroupNotPair { index } => write!(f, "group {index} does not have size 2"),
            PbdError::BlockNotTriple { index } => write!(f, "block {index} does not have size 3"),
            PbdError::PointOutOfRange { point } => write!(f, "point {point} out of range"),
        }
    }
}

// ---------------------------------------------------------------------
// The six-group product design.
// ---------------------------------------------------------------------

/// A design on `6t` points with six blocks of size `t` and `t²` blocks
/// of size 6, built from four mutually orthogonal Latin squares of
/// order `t`. Points are `(x, g) → g·t + x` for group `g ∈ 0..6`.
///
/// The six groups appear as blocks, covering same-group pairs. The
/// block for cell `(i, j)` is
/// `{L₁(i,j), t+L₂(i,j), 2t+L₃(i,j), 3t+L₄(i,j), 4t+i, 5t+j}`;
/// rows, columns, symbol positions, and orthogonality make every
/// cross-group pair appear exactly once.
///
/// With `mols: None` the squares come from the internal prime-power
/// tables; supplied squares are verified pairwise orthogonal first.
pub fn pbd_6t(t: usize, mols: Option<&[LatinSquare]>) -> Result<PairwiseBalancedDesign, PbdError> {
    if t < 5 {
        return Err(PbdError::OrderTooSmall { t });
    }
    let owned: Vec<LatinSquare>;
    let squares: &[LatinSquare] = match mols {
        Some(m) => {
            if m.len() != 4 {
                return Err(PbdError::MolsUnavailable {
                    t,
                    source: LatinError::CountOutOfRange { q: t, count: m.len() },
                });
            }
            for (index, sq) in m.iter().enumerate() {
                if sq.n() != t {
                    return Err(PbdError::MolsWrongOrder { index, expected: t, actual: sq.n() });
                }
                sq.validate().map_err(|source| PbdError::MolsInvalid { index, source })?;
            }
            for a in 0..4 {
                for b in (a + 1)..4 {
                    match are_orthogonal(&m[a], &m[b]) {
                        Ok(true) => {}
                        _ => return Err(PbdError::MolsNotOrthogonal { a, b }),
                    }
                }
            }
            m
        }
        None => {
            owned = mols_prime_power(t, 4).map_err(|source| PbdError::MolsUnavailable { t, source })?;
            &owned
        }
    };
    let tt = t as Point;
    let mut blocks: Vec<Vec<Point>> = Vec::with_capacity(t * t + 6);
    for g in 0..6u16 {
        blocks.push((0..tt).map(|x| g * tt + x).collect());
    }
    for i in 0..t {
        for j in 0..t {
            blocks.push(vec![
                squares[0].get(i, j),
                tt + squares[1].get(i, j),
                2 * tt + squares[2].get(i, j),
                3 * tt + squares[3].get(i, j),
                4 * tt + i as Point,
                5 * tt + j as Point,
            ]);
        }
    }
    Ok(PairwiseBalancedDesign::new(6 * t, [6, t], blocks))
}

// ---------------------------------------------------------------------
// Composing a triple system over a balanced-design skeleton.
// ---------------------------------------------------------------------

/// Relabel `sys` so the blocks through `x` become the spoke triples
/// `{0, 2i+1, 2i+2}`: `x` goes to 0 and the i-th pair (in sorted
/// order) of the flower at `x` goes to `(2i+1, 2i+2)`.
pub fn spoke_aligned(sys: &TripleSystem, x: Point) -> Result<TripleSystem, PbdError> {
    let v = sys.v();
    if x as usize >= v {
        return Err(PbdError::PointOutOfRange { point: x });
    }
    let pairs = sys.flower_of(x).pairs();
    let mut image = vec![Point::MAX; v];
    image[x as usize] = 0;
    for (i, [p, q]) in pairs.iter().copied().enumerate() {
        let base = 2 * i as Point;
        if (p as usize) < v && (q as usize) < v {
            image[p as usize] = base + 1;
            image[q as usize] = base + 2;
        }
    }
    sys.map_into(v, |p| image[p as usize])
        .map_err(|_| PbdError::FlowerIncomplete { point: x })
}

/// Build a triple system of order `2r+1` from a design on `r` points:
/// one point pair `(2i+1, 2i+2)` per skeleton point `i` plus a hub 0,
/// gluing in one sub-system of order `2|B|+1` per block `B`.
///
/// `sub(B)` must return a system on `2|B|+1` points that contains every
/// spoke triple `{0, 2i+1, 2i+2}` for `i < |B|` (see [`spoke_aligned`]);
/// local pair `i` is mapped onto the pair of the block's i-th point (in
/// sorted order). The spokes of all sub-systems coincide after mapping
/// and become the `r` spokes of the output.
pub fn sts_from_pbd<F>(pbd: &PairwiseBalancedDesign, mut sub: F) -> Result<TripleSystem, PbdError>
where
    F: FnMut(&[Point]) -> Option<TripleSystem>,
{
    let r = pbd.v;
    if r % 3 == 2 {
        return Err(PbdError::NotAdmissible { r });
    }
    let report = pbd.validate();
    if !report.ok() {
        return Err(PbdError::InvalidInput { summary: report.summary() });
    }
    let v = 2 * r + 1;
    let mut blocks: Vec<Triple> = Vec::new();
    for i in 0..r {
        let base = 2 * i as Point;
        blocks.push([0, base + 1, base + 2]);
    }
    for (bi, block) in pbd.blocks.iter().enumerate() {
        let b = block.len();
        let sys = sub(block).ok_or(PbdError::MissingSubSystem { block: bi, size: b })?;
        if sys.v() != 2 * b + 1 {
            return Err(PbdError::SubSystemWrongOrder { block: bi, expected: 2 * b + 1, actual: sys.v() });
        }
        for i in 0..b {
            let base = 2 * i as Point;
            if !sys.contains_block([0, base + 1, base + 2]) {
                return Err(PbdError::SubSystemMissingSpoke { block: bi, index: i });
            }
        }
        let to_global = |p: Point| -> Point {
            let i = ((p - 1) / 2) as usize;
            2 * block[i] + 1 + (p - 1) % 2
        };
        for &t in sys.blocks() {
            if t.contains(&0) {
                continue;
            }
            blocks.push(canon_triple([to_global(t[0]), to_global(t[1]), to_global(t[2])]));
        }
    }
    let sys = TripleSystem::new(v, blocks);
    let rep = sys.validate();
    if !rep.ok() {
        return Err(PbdError::InvalidComposition { summary: rep.summary() });
    }
    Ok(sys)
}

// ---------------------------------------------------------------------
// Flower decomposition and its inverse.
// ---------------------------------------------------------------------

/// Remove the point `x` and the blocks through it: the deleted blocks'
/// point pairs become the groups and the remaining blocks stay. Points
/// above `x` shift down by one. For a valid system of order `2r+1` the
/// result is a valid group divisible design with `r` groups of size 2.
pub fn flower_decompose(sys: &TripleSystem, x: Point) -> Result<GroupDivisibleDesign, PbdError> {
    if x as usize >= sys.v() {
        return Err(PbdError::PointOutOfRange { point: x });
    }
    let down = |p: Point| if p > x { p - 1 } else { p };
    let mut groups: Vec<Vec<Point>> = Vec::new();
    let mut blocks: Vec<Vec<Point>> = Vec::new();
    for b in sys.blocks() {
        if b.contains(&x) {
            groups.push(b.iter().copied().filter(|&p| p != x).map(down).collect());
        } else {
            blocks.push(b.iter().copied().map(down).collect());
        }
    }
    Ok(GroupDivisibleDesign::new(sys.v() - 1, groups, blocks))
}

/// Inverse of [`flower_decompose`]: insert a new point at label `x`
/// (shifting labels ≥ `x` up) and add one block `{x, a, b}` per group
/// `{a, b}`. Groups must be pairs and blocks triples.
pub fn flower_reconstitute(gdd: &GroupDivisibleDesign, x: Point) -> Result<TripleSystem, PbdError> {
    if x as usize > gdd.v {
        return Err(PbdError::PointOutOfRange { point: x });
    }
    for (index, g) in gdd.groups.iter().enumerate() {
        if g.len() != 2 {
            return Err(PbdError::GroupNotPair { index });
        }
    }
    for (index, b) in gdd.blocks.iter().enumerate() {
        if b.len() != 3 {
            return Err(PbdError::BlockNotTriple { index });
        }
    }
    let up = |p: Point| if p >= x { p + 1 } else { p };
    let mut blocks: Vec<Triple> =
        gdd.blocks.iter().map(|b| canon_triple([up(b[0]), up(b[1]), up(b[2])])).collect();
    for g in &gdd.groups {
        blocks.push(canon_triple([x, up(g[0]), up(g[1])]));
    }
    Ok(TripleSystem::new(gdd.v + 1, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{bose, cyclic_sts13, fano};
    use crate::spectrum::t_v;

    fn fano_pbd() -> PairwiseBalancedDesign {
        let blocks = fano().blocks().iter().map(|b| b.to_vec()).collect::<Vec<_>>();
        PairwiseBalancedDesign::new(7, [3], blocks)
    }

    #[test]
    fn pbd_audit_accepts_and_rejects() {
        assert!(fano_pbd().validate().ok());

        let mut blocks: Vec<Vec<Point>> =
            fano().blocks().iter().map(|b| b.to_vec()).collect();
        blocks.pop();
        let dropped = PairwiseBalancedDesign::new(7, [3], blocks.clone());
        let rep = dropped.validate();
        assert_eq!(rep.uncovered_pairs.len(), 3);

        blocks.push(blocks[0].clone());
        let duped = PairwiseBalancedDesign::new(7, [3], blocks);
        let rep = duped.validate();
        assert_eq!(rep.multi_covered_pairs.len(), 3);
        assert!(rep.multi_covered_pairs.iter().all(|&(_, _, c)| c == 2));

        let odd = PairwiseBalancedDesign::new(4, [3], vec![vec![0, 1, 2], vec![0, 3], vec![1, 1, 3]]);
        let rep = odd.validate();
        assert!(rep.block_defects.iter().any(|&(_, d)| d == BlockDefect::SizeNotAllowed));
        assert!(rep.block_defects.iter().any(|&(_, d)| d == BlockDefect::RepeatedPoint));
    }

    #[test]
    fn flower_decomposition_roundtrip() {
        let sys = bose(15).unwrap();
        for x in [0 as Point, 7, 14] {
            let gdd = flower_decompose(&sys, x).unwrap();
            let rep = gdd.validate();
            assert!(rep.ok(), "{}", rep.summary());
            assert_eq!(gdd.group_type(), vec![(2, 7)]);
            assert_eq!(gdd.blocks().len(), t_v(15) as usize - 7);
            let back = flower_reconstitute(&gdd, x).unwrap();
            assert_eq!(back, sys);
        }

        // Dropping a block leaves its three pairs uncovered.
        let gdd = flower_decompose(&sys, 0).unwrap();
        let mut blocks = gdd.blocks().to_vec();
        let removed = blocks.pop().unwrap();
        let broken = GroupDivisibleDesign::new(gdd.v(), gdd.groups().to_vec(), blocks);
        let rep = broken.validate();
        assert!(!rep.ok());
        assert_eq!(rep.uncovered_pairs.len(), 3);
        for (i, &x) in removed.iter().enumerate() {
            for &y in &removed[i + 1..] {
                assert!(rep.uncovered_pairs.contains(&(x, y)));
            }
        }
    }

    #[test]
    fn gdd_triples_check_their_invariants() {
        let g = flower_decompose(&fano(), 0).unwrap();
        let triple = GddTriple::new([g.clone(), g.clone(), g.clone()]).unwrap();
        assert!(!triple.is_disjoint());
        assert_eq!(triple.common().len(), g.blocks().len());

        // A relabeling that fixes the flower at 0 but moves every other
        // block: its remainder is block-disjoint from the original's.
        let swapped = fano()
            .map_into(7, |p| match p {
                1 => 3,
                3 => 1,
                p => p,
            })
            .unwrap();
        let h = flower_decompose(&swapped, 0).unwrap();
        assert_eq!(g.groups(), h.groups());
        assert!(intersect_sorted(g.blocks(), h.blocks()).is_empty());
        match GddTriple::new([g.clone(), g.clone(), h]) {
            Err(GddTripleError::PairwiseMismatch { .. }) => {}
            other => panic!("expected pairwise mismatch, got {other:?}"),
        }

        let wrong_groups = GroupDivisibleDesign::new(
            g.v(),
            g.groups().iter().rev().map(|grp| grp.iter().rev().copied().collect()),
            g.blocks().to_vec(),
        );
        // Canonicalization makes reversed input equal again; force a real
        // mismatch by renaming inside one group.
        assert_eq!(GddTriple::new([g.clone(), g.clone(), wrong_groups]).unwrap().common().len(), 4);
        let other_groups: Vec<Vec<Point>> =
            vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let mismatched = GroupDivisibleDesign::new(g.v(), other_groups, g.blocks().to_vec());
        match GddTriple::new([g.clone(), g, mismatched]) {
            Err(GddTripleError::GroupMismatch) => {}
            other => panic!("expected group mismatch, got {other:?}"),
        }
    }

    #[test]
    fn six_group_design_audits_pass() {
        for t in [5usize, 7] {
            let pbd = pbd_6t(t, None).unwrap();
            assert_eq!(pbd.v(), 6 * t);
            assert_eq!(pbd.blocks().len(), t * t + 6);
            let rep = pbd.validate();
            assert!(rep.ok(), "t={t}: {}", rep.summary());
        }
        assert!(matches!(pbd_6t(6, None), Err(PbdError::MolsUnavailable { .. })));
        assert!(matches!(pbd_6t(4, None), Err(PbdError::OrderTooSmall { .. })));

        let mols = mols_prime_power(5, 4).unwrap();
        let explicit = pbd_6t(5, Some(&mols)).unwrap();
        assert_eq!(explicit, pbd_6t(5, None).unwrap());

        let same = vec![LatinSquare::cyclic(5); 4];
        assert!(matches!(pbd_6t(5, Some(&same)), Err(PbdError::MolsNotOrthogonal { .. })));
    }

    #[test]
    fn composition_over_skeletons() {
        let seven = spoke_aligned(&fano(), 0).unwrap();
        for i in 0..3u16 {
            assert!(seven.contains_block([0, 2 * i + 1, 2 * i + 2]));
        }

        // Degenerate skeleton: one block covering all three points.
        let single = PairwiseBalancedDesign::new(3, [3], vec![vec![0, 1, 2]]);
        let out = sts_from_pbd(&single, |_| Some(seven.clone())).unwrap();
        assert_eq!(out, seven);

        // A triple system as its own skeleton.
        let out = sts_from_pbd(&fano_pbd(), |_| Some(seven.clone())).unwrap();
        assert_eq!(out.v(), 15);
        assert_eq!(out.blocks().len(), t_v(15) as usize);
        assert!(out.validate().ok());

        // Misaligned sub-system: the raw order-7 system lacks spokes.
        let err = sts_from_pbd(&single, |_| Some(fano())).unwrap_err();
        assert!(matches!(err, PbdError::SubSystemMissingSpoke { .. }));

        // Wrong sub-system order.
        let err = sts_from_pbd(&fano_pbd(), |_| Some(spoke_aligned(&bose(15).unwrap(), 0).unwrap()))
            .unwrap_err();
        assert!(matches!(err, PbdError::SubSystemWrongOrder { .. }));
    }

    #[test]
    fn composition_at_scale() {
        let pbd = pbd_6t(7, None).unwrap();
        let thirteen = spoke_aligned(&cyclic_sts13(), 0).unwrap();
        let fifteen = spoke_aligned(&bose(15).unwrap(), 0).unwrap();
        let sys = sts_from_pbd(&pbd, |block| match block.len() {
            6 => Some(thirteen.clone()),
            7 => Some(fifteen.clone()),
            _ => None,
        })
        .unwrap();
        assert_eq!(sys.v(), 85);
        assert_eq!(sys.blocks().len(), t_v(85) as usize);
        assert!(sys.validate().ok());
    }
}
