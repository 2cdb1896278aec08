//! Independent search engines: exhaustive backtracking oracles that
//! recompute the small spectra from first principles, and budgeted
//! stochastic searches that supply leaf objects no construction
//! provides. None of this shares code with the constructions module,
//! so agreement between the two routes is meaningful evidence.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::design::{
    FlowerCertificate, Permutation, Point, StsTriple, Triple, TripleSystem,
};
use crate::latin::{enumerate_latin_squares, reduced_latin_squares, LatinSquare};
use crate::pbd::{GddTriple, GroupDivisibleDesign};
use crate::rng::Rng;
use crate::spectrum::{admissible_r, SpectrumSet};

// ---------------------------------------------------------------------
// Configuration.
// ---------------------------------------------------------------------

/// Knobs for the stochastic engines; the exhaustive oracles take no
/// configuration. Fixed seed and single-threaded use give bit-identical
/// results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Master seed; per-restart seeds are derived from it.
    pub seed: u64,
    /// Total move/sample budget, spent across restarts.
    pub budget: u64,
    /// Number of fresh starts the budget is split over.
    pub restarts: u32,
    /// Advisory wall-clock limit in milliseconds. The engines count
    /// moves, not time, so runs stay reproducible; callers that own a
    /// clock (such as the command-line driver) enforce this.
    pub time_limit_ms: Option<u64>,
    /// Exploit symmetry before comparing: the exhaustive Latin oracle
    /// restricts the first square to reduced form (sound, because a
    /// shared row/column relabeling moves any triple onto one whose
    /// first square is reduced without changing agreement sizes).
    pub canonicalize: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            budget: 10_000_000,
            restarts: 64,
            time_limit_ms: None,
            canonicalize: true,
        }
    }
}

/// Failure modes of the search engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    /// The exhaustive engines only handle the orders small enough to
    /// finish; anything else is refused by design.
    OrderUnsupported { what: &'static str, value: usize },
    /// `r` must be ≡ 0 or 1 (mod 3).
    NotAdmissible(usize),
    /// A counting argument rules the request out; no budget can help.
    Impossible { reason: String },
    /// The budget ran out without a verified witness.
    Unrealized { budget: u64 },
    /// The requested intersection size exceeds the spectrum's ceiling.
    TargetTooLarge { target: u32, max: u32 },
    /// The two base systems do not share the flower at the given point.
    FlowerNotShared { point: Point },
    BadConfig(&'static str),
}

impl core::fmt::Display for SearchError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SearchError::OrderUnsupported { what, value } => {
                write!(f, "exhaustive search does not support {what} {value}")
            }
            SearchError::NotAdmissible(r) => {
                write!(f, "r = {r} is not admissible (needs r ≡ 0, 1 mod 3)")
            }
            SearchError::Impossible { reason } => write!(f, "impossible: {reason}"),
            SearchError::Unrealized { budget } => {
                write!(f, "no verified witness within a budget of {budget} moves")
            }
            SearchError::TargetTooLarge { target, max } => {
                write!(f, "target {target} exceeds the spectrum ceiling {max}")
            }
            SearchError::FlowerNotShared { point } => {
                write!(f, "base systems do not share the flower at point {point}")
            }
            SearchError::BadConfig(msg) => write!(f, "bad search configuration: {msg}"),
        }
    }
}

// ---------------------------------------------------------------------
// Exhaustive triple-system enumeration.
// ---------------------------------------------------------------------

/// Enumerate every labeled Steiner triple system on `0..v`, optionally
/// extending a pre-placed partial system. Backtracking over the
/// lexicographically smallest uncovered pair: the third point of the
/// covering block is always larger than both (any smaller choice would
/// contradict minimality of the chosen pair), so each system appears
/// exactly once.
fn enumerate_completions(v: usize, preplaced: &[Triple]) -> Vec<TripleSystem> {
    let mut covered = vec![0u16; v];
    let mut blocks: Vec<Triple> = Vec::new();
    for b in preplaced {
        let [x, y, z] = *b;
        covered[x as usize] |= (1 << y) | (1 << z);
        covered[y as usize] |= (1 << x) | (1 << z);
        covered[z as usize] |= (1 << x) | (1 << y);
        blocks.push(*b);
    }
    let mut out = Vec::new();
    backtrack(v, &mut covered, &mut blocks, &mut out);
    out
}

fn backtrack(
    v: usize,
    covered: &mut [u16],
    blocks: &mut Vec<Triple>,
    out: &mut Vec<TripleSystem>,
) {
    let mut pair = None;
    'scan: for a in 0..v {
        for b in a + 1..v {
            if covered[a] & (1 << b) == 0 {
                pair = Some((a, b));
                break 'scan;
            }
        }
    }
    let Some((a, b)) = pair else {
        out.push(TripleSystem::new(v, blocks.iter().copied()));
        return;
    };
    for c in b + 1..v {
        if covered[a] & (1 << c) == 0 && covered[b] & (1 << c) == 0 {
            covered[a] |= (1 << b) | (1 << c);
            covered[b] |= (1 << a) | (1 << c);
            covered[c] |= (1 << a) | (1 << b);
            blocks.push([a as Point, b as Point, c as Point]);
            backtrack(v, covered, blocks, out);
            blocks.pop();
            covered[a] &= !((1 << b) | (1 << c));
            covered[b] &= !((1 << a) | (1 << c));
            covered[c] &= !((1 << a) | (1 << b));
        }
    }
}

/// All labeled Steiner triple systems of order `v ∈ {7, 9}`.
pub fn enumerate_all_sts(v: usize) -> Result<Vec<TripleSystem>, SearchError> {
    if !matches!(v, 7 | 9) {
        return Err(SearchError::OrderUnsupported { what: "order", value: v });
    }
    Ok(enumerate_completions(v, &[]))
}

/// The full flower-triple spectrum at `r ∈ {3, 4}` by brute force:
/// enumerate every system of order `2r + 1` containing the canonical
/// flower at point 0 (blocks `{0, 2i+1, 2i+2}`), test every triple of
/// them for pairwise-identical intersections, and collect the sizes.
/// Fixing the flower is a pure symmetry reduction: relabeling all three
/// systems at once maps any common flower onto the canonical one and
/// leaves every intersection size unchanged.
pub fn exhaustive_flower_spectrum(r: usize) -> Result<SpectrumSet, SearchError> {
    if !matches!(r, 3 | 4) {
        return Err(SearchError::OrderUnsupported { what: "flower size", value: r });
    }
    let v = 2 * r + 1;
    let flower: Vec<Triple> =
        (0..r).map(|i| [0, (2 * i + 1) as Point, (2 * i + 2) as Point]).collect();
    let hosts = enumerate_completions(v, &flower);
    let mut set = SpectrumSet::new();
    for i in 0..hosts.len() {
        for j in i..hosts.len() {
            for l in j..hosts.len() {
                let triple = StsTriple::new([
                    hosts[i].clone(),
                    hosts[j].clone(),
                    hosts[l].clone(),
                ]);
                if let Ok(common) = triple.common() {
                    set.insert(common.len() as u32 - r as u32);
                }
            }
        }
    }
    Ok(set)
}

// ---------------------------------------------------------------------
// Exhaustive Latin-square triples.
// ---------------------------------------------------------------------

/// The computed three-way Latin spectrum at one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Latin3Spectrum {
    pub n: usize,
    pub set: SpectrumSet,
    /// True when no recorded value exists for this order (`n < 3`), so
    /// the set rests on this computation alone.
    pub derived_only: bool,
}

/// Cells where all three squares agree, or `None` when some cell has
/// exactly two squares agreeing (which breaks pairwise-identical
/// agreement). Local re-derivation, independent of the Latin module's
/// own triple checker.
fn agreement_if_triple(a: &LatinSquare, b: &LatinSquare, c: &LatinSquare) -> Option<u32> {
    let n = a.n();
    let mut k = 0;
    for i in 0..n {
        for j in 0..n {
            let (x, y, z) = (a.get(i, j), b.get(i, j), c.get(i, j));
            if x == y && y == z {
                k += 1;
            } else if x == y || y == z || x == z {
                return None;
            }
        }
    }
    Some(k)
}

/// The full three-way intersection spectrum for Latin squares of order
/// `n ≤ 4` by exhaustive search (default configuration).
pub fn exhaustive_latin_3way(n: usize) -> Result<Latin3Spectrum, SearchError> {
    exhaustive_latin_3way_with(n, &SearchConfig::default())
}

/// As [`exhaustive_latin_3way`], honoring `config.canonicalize`: when
/// set, the first square ranges over reduced squares only; when clear,
/// over all squares (slower, used to cross-check the reduction).
pub fn exhaustive_latin_3way_with(
    n: usize,
    config: &SearchConfig,
) -> Result<Latin3Spectrum, SearchError> {
    if n > 4 {
        return Err(SearchError::OrderUnsupported { what: "latin order", value: n });
    }
    let all = enumerate_latin_squares(n);
    let firsts = if config.canonicalize && n > 0 { reduced_latin_squares(n) } else { all.clone() };
    let mut set = SpectrumSet::new();
    for a in &firsts {
        for b in &all {
            for c in &all {
                if let Some(k) = agreement_if_triple(a, b, c) {
                    set.insert(k);
                }
            }
        }
    }
    Ok(Latin3Spectrum { n, set, derived_only: n < 3 })
}

// ---------------------------------------------------------------------
// Disjoint GDD triples by hill climbing.
// ---------------------------------------------------------------------

/// Three pairwise-disjoint 3-GDDs of type 2^r on the fixed groups
/// `{2i, 2i+1}`, found by Stinson-style hill climbing with block
/// eviction; the assembled triple is re-verified before return.
///
/// `r = 3` is refused outright: at most `2(r-2)` pairwise disjoint such
/// designs exist, and `2(3-2) = 2 < 3`. `r ∈ {0, 1}` have no cross
/// pairs at all, so three empty designs qualify trivially.
pub fn hillclimb_disjoint_gdd_triple(
    r: usize,
    config: &SearchConfig,
) -> Result<GddTriple, SearchError> {
    if !admissible_r(r) {
        return Err(SearchError::NotAdmissible(r));
    }
    if config.budget == 0 {
        return Err(SearchError::BadConfig("budget must be positive"));
    }
    let groups: Vec<Vec<Point>> =
        (0..r).map(|i| vec![2 * i as Point, 2 * i as Point + 1]).collect();
    if r <= 1 {
        let designs = [
            GroupDivisibleDesign::new(2 * r, groups.clone(), Vec::<Vec<Point>>::new()),
            GroupDivisibleDesign::new(2 * r, groups.clone(), Vec::<Vec<Point>>::new()),
            GroupDivisibleDesign::new(2 * r, groups, Vec::<Vec<Point>>::new()),
        ];
        return GddTriple::new(designs).map_err(|e| SearchError::Impossible {
            reason: format!("trivial triple rejected: {e:?}"),
        });
    }
    if r == 3 {
        return Err(SearchError::Impossible {
            reason: String::from(
                "at most 2(r-2) pairwise disjoint 3-GDDs of type 2^r exist; \
                 2(3-2) = 2 < 3",
            ),
        });
    }

    let per_restart = (config.budget / config.restarts.max(1) as u64).max(1);
    let mut spent: u64 = 0;
    let mut restart = 0u32;
    while spent < config.budget {
        let allowance = per_restart.min(config.budget - spent);
        let seed = config.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(restart as u64 + 1));
        let (result, used) = climb_disjoint_once(r, seed, allowance);
        spent += used;
        restart += 1;
        if let Some(block_sets) = result {
            let designs = block_sets.map(|bs| {
                GroupDivisibleDesign::new(
                    2 * r,
                    (0..r).map(|i| vec![2 * i as Point, 2 * i as Point + 1]),
                    bs.into_iter().map(|t| t.to_vec()),
                )
            });
            match GddTriple::new(designs) {
                Ok(t) if t.is_disjoint() => return Ok(t),
                // A climb that terminates with zero objective but fails
                // re-verification would be a bug; treat it as no result.
                _ => continue,
            }
        }
    }
    Err(SearchError::Unrealized { budget: config.budget })
}

/// One restart of the climb. Returns the three block sets on success
/// and the number of moves consumed either way.
///
/// The three designs are grown one after another; blocks belonging to a
/// finished design are barred from insertion into later ones, so the
/// block-sharing term of the objective is identically zero and each
/// walk only has to drive its own uncovered-pair count down. If a later
/// design stalls, the most recently finished one is torn up and regrown
/// so the walk can escape a poisoned prefix.
fn climb_disjoint_once(
    r: usize,
    seed: u64,
    allowance: u64,
) -> (Option<[BTreeSet<Triple>; 3]>, u64) {
    let mut rng = Rng::derive(seed, "disjoint-gdd-climb");
    let mut used: u64 = 0;
    let mut done: Vec<BTreeSet<Triple>> = Vec::new();
    let mut forbidden: BTreeSet<Triple> = BTreeSet::new();
    while done.len() < 3 {
        if used >= allowance {
            return (None, used);
        }
        let (result, spent, _) = climb_one_gdd(r, &forbidden, &mut rng, allowance - used);
        used += spent;
        match result {
            Some(bs) => {
                forbidden.extend(bs.iter().copied());
                done.push(bs);
            }
            None => {
                if let Some(prev) = done.pop() {
                    for t in &prev {
                        forbidden.remove(t);
                    }
                }
            }
        }
    }
    let mut it = done.into_iter();
    let blocks = [
        it.next().expect("three designs"),
        it.next().expect("three designs"),
        it.next().expect("three designs"),
    ];
    (Some(blocks), used)
}

/// Grow a single 3-GDD of type 2^r on the fixed groups, never inserting
/// a block from `forbidden`. The workhorse move picks an uncovered
/// cross-pair, treats one endpoint as a hub, and completes a block from
/// a second uncovered pair at that hub, evicting at most the one block
/// covering the third pair, so the uncovered count never increases.
/// When every such completion is barred or covered, a riskier fallback
/// completes the pair with a random admissible third point, evicting up
/// to two blocks; that move can climb, which lets the walk leave dead
/// ends. Returns the blocks on success, the moves consumed either way,
/// and the uncovered count at exit.
fn climb_one_gdd(
    r: usize,
    forbidden: &BTreeSet<Triple>,
    rng: &mut Rng,
    move_cap: u64,
) -> (Option<BTreeSet<Triple>>, u64, usize) {
    let v = 2 * r;
    let group_of = |p: Point| p / 2;
    let pair_idx = |x: Point, y: Point| {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        (a as usize) * v + b as usize
    };

    let mut blocks: BTreeSet<Triple> = BTreeSet::new();
    // pair -> covering block, plus an uncovered-pair list with stored
    // positions for O(1) uniform sampling and removal.
    let mut cover: Vec<Option<Triple>> = vec![None; v * v];
    let mut unc_list: Vec<u32> = Vec::new();
    let mut unc_pos: Vec<usize> = vec![0; v * v];
    for x in 0..v as Point {
        for y in x + 1..v as Point {
            if group_of(x) != group_of(y) {
                let idx = pair_idx(x, y);
                unc_list.push(idx as u32);
                unc_pos[idx] = unc_list.len();
            }
        }
    }

    macro_rules! uncover {
        ($x:expr, $y:expr) => {{
            let idx = pair_idx($x, $y);
            cover[idx] = None;
            unc_list.push(idx as u32);
            unc_pos[idx] = unc_list.len();
        }};
    }
    macro_rules! cover_pair {
        ($x:expr, $y:expr, $t:expr) => {{
            let idx = pair_idx($x, $y);
            cover[idx] = Some($t);
            let pos = unc_pos[idx];
            debug_assert!(pos > 0);
            let last = unc_list.len() - 1;
            let moved = unc_list[last];
            unc_list.swap_remove(pos - 1);
            if pos - 1 != last {
                unc_pos[moved as usize] = pos;
            }
            unc_pos[idx] = 0;
        }};
    }

    let mut used: u64 = 0;
    let mut best_unc = usize::MAX;
    let mut stall: u64 = 0;
    let stall_limit = 4_000 + (r * r * 100) as u64;
    while used < move_cap {
        if unc_list.is_empty() {
            return (Some(blocks), used, 0);
        }
        used += 1;
        if unc_list.len() < best_unc {
            best_unc = unc_list.len();
            stall = 0;
        } else {
            stall += 1;
            if stall > stall_limit {
                return (None, used, unc_list.len());
            }
        }

        let idx = unc_list[rng.below(unc_list.len())] as usize;
        let (a, b) = ((idx / v) as Point, (idx % v) as Point);
        let (hub, other) = if rng.below(2) == 0 { (a, b) } else { (b, a) };

        // Safe completions: a second uncovered pair at the hub whose far
        // point clears both groups and whose block is not barred.
        let mut safe: Vec<Point> = Vec::new();
        let mut any: Vec<Point> = Vec::new();
        for z in 0..v as Point {
            if group_of(z) == group_of(hub) || group_of(z) == group_of(other) {
                continue;
            }
            let mut t = [hub, other, z];
            t.sort_unstable();
            if forbidden.contains(&t) {
                continue;
            }
            any.push(z);
            if cover[pair_idx(hub, z)].is_none() {
                safe.push(z);
            }
        }
        let z = if !safe.is_empty() {
            safe[rng.below(safe.len())]
        } else if !any.is_empty() {
            // Risky fallback: may evict two blocks and raise the count.
            any[rng.below(any.len())]
        } else {
            // Every completion of this pair is barred; only a rebuild
            // at a higher level can help.
            return (None, used, unc_list.len());
        };
        let mut t = [hub, other, z];
        t.sort_unstable();
        for [p, q] in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
            if let Some(old) = cover[pair_idx(p, q)] {
                blocks.remove(&old);
                for [ox, oy] in [[old[0], old[1]], [old[0], old[2]], [old[1], old[2]]] {
                    uncover!(ox, oy);
                }
            }
        }
        blocks.insert(t);
        for [p, q] in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
            cover_pair!(p, q, t);
        }
    }
    let final_unc = unc_list.len();
    (None, used, final_unc)
}

/// Seeded Stinson-style hill climb for a single Steiner triple system
/// of order `v` (`v ≡ 1, 3 (mod 6)`, `v ≥ 7`). Same move structure as
/// the group-divisible climber but over all pairs: pick an uncovered
/// pair, complete it through a second live pair at one endpoint when
/// possible, otherwise with a random third point at the cost of up to
/// two evictions. Deterministic given `seed`; returns `None` when the
/// move budget runs out first.
pub fn climb_sts(v: usize, seed: u64, move_cap: u64) -> Option<TripleSystem> {
    if v < 7 || (v % 6 != 1 && v % 6 != 3) {
        return None;
    }
    let mut rng = Rng::derive(seed, "sts-climb");
    let pair_idx = |x: Point, y: Point| {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        (a as usize) * v + b as usize
    };

    let mut blocks: BTreeSet<Triple> = BTreeSet::new();
    let mut cover: Vec<Option<Triple>> = vec![None; v * v];
    let mut unc_list: Vec<u32> = Vec::new();
    let mut unc_pos: Vec<usize> = vec![0; v * v];
    for x in 0..v as Point {
        for y in x + 1..v as Point {
            let idx = pair_idx(x, y);
            unc_list.push(idx as u32);
            unc_pos[idx] = unc_list.len();
        }
    }

    macro_rules! uncover {
        ($x:expr, $y:expr) => {{
            let idx = pair_idx($x, $y);
            cover[idx] = None;
            unc_list.push(idx as u32);
            unc_pos[idx] = unc_list.len();
        }};
    }
    macro_rules! cover_pair {
        ($x:expr, $y:expr, $t:expr) => {{
            let idx = pair_idx($x, $y);
            cover[idx] = Some($t);
            let pos = unc_pos[idx];
            debug_assert!(pos > 0);
            let last = unc_list.len() - 1;
            let moved = unc_list[last];
            unc_list.swap_remove(pos - 1);
            if pos - 1 != last {
                unc_pos[moved as usize] = pos;
            }
            unc_pos[idx] = 0;
        }};
    }

    let mut used: u64 = 0;
    while used < move_cap {
        if unc_list.is_empty() {
            let sys = TripleSystem::new(v, blocks);
            debug_assert!(sys.validate().ok());
            return Some(sys);
        }
        used += 1;

        let idx = unc_list[rng.below(unc_list.len())] as usize;
        let (a, b) = ((idx / v) as Point, (idx % v) as Point);
        let (hub, other) = if rng.below(2) == 0 { (a, b) } else { (b, a) };

        let mut safe: Vec<Point> = Vec::new();
        for z in 0..v as Point {
            if z != hub && z != other && cover[pair_idx(hub, z)].is_none() {
                safe.push(z);
            }
        }
        let z = if !safe.is_empty() {
            safe[rng.below(safe.len())]
        } else {
            loop {
                let c = rng.below(v) as Point;
                if c != hub && c != other {
                    break c;
                }
            }
        };
        let mut t = [hub, other, z];
        t.sort_unstable();
        for [p, q] in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
            if let Some(old) = cover[pair_idx(p, q)] {
                blocks.remove(&old);
                for [ox, oy] in [[old[0], old[1]], [old[0], old[2]], [old[1], old[2]]] {
                    uncover!(ox, oy);
                }
            }
        }
        blocks.insert(t);
        for [p, q] in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
            cover_pair!(p, q, t);
        }
    }
    None
}

// ---------------------------------------------------------------------
// Permutation probes.
// ---------------------------------------------------------------------

/// Search for permutation pairs `(π, π′)` fixing `flower_point` such
/// that `base`, `π(moved)`, `π′(moved)` form a valid triple with the
/// common flower and intersection size exactly `target_k`.
///
/// Sampling is restricted to permutations mapping the shared flower
/// onto itself (pair order and orientation randomized) — a necessary
/// condition for any hit, so the restriction loses nothing. The first
/// sample of the first restart is the identity pair. Every hit is
/// re-verified through the certificate checker before being returned.
pub fn permutation_probe(
    base: &TripleSystem,
    moved: &TripleSystem,
    flower_point: Point,
    target_k: u32,
    config: &SearchConfig,
) -> Result<FlowerCertificate, SearchError> {
    if config.budget == 0 {
        return Err(SearchError::BadConfig("budget must be positive"));
    }
    let v = base.v();
    let r = base.r();
    let max = (2 * r * (r.saturating_sub(1)) / 3) as u32;
    if target_k > max {
        return Err(SearchError::TargetTooLarge { target: target_k, max });
    }
    if moved.v() != v
        || (flower_point as usize) >= v
        || base.flower_of(flower_point) != moved.flower_of(flower_point)
        || base.flower_of(flower_point).blocks.len() != r
    {
        return Err(SearchError::FlowerNotShared { point: flower_point });
    }
    let pairs = base.flower_of(flower_point).pairs();

    let mut rng = Rng::derive(config.seed, "flower-permutation-probe");
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut sample_perm = |rng: &mut Rng, first: bool| -> Permutation {
        if first {
            return Permutation::identity(v);
        }
        let mut image: Vec<Point> = (0..v as Point).collect();
        rng.shuffle(&mut order);
        for (i, pair) in pairs.iter().enumerate() {
            let target = pairs[order[i]];
            let flip = rng.below(2) == 1;
            image[pair[0] as usize] = target[usize::from(flip)];
            image[pair[1] as usize] = target[usize::from(!flip)];
        }
        Permutation::from_image(image).expect("pair relabeling is a bijection")
    };

    for sample in 0..config.budget {
        let first = sample == 0;
        let p1 = sample_perm(&mut rng, first);
        let p2 = sample_perm(&mut rng, first);
        let s2 = moved.apply_permutation(&p1).expect("bijection");
        let s3 = moved.apply_permutation(&p2).expect("bijection");
        let triple = StsTriple::new([base.clone(), s2, s3]);
        let Ok(common) = triple.common() else { continue };
        if common.len() as u32 != target_k + r as u32 {
            continue;
        }
        let cert = FlowerCertificate { triple, flower_point, claimed_k: target_k };
        if cert.verify() == Ok(target_k) {
            return Ok(cert);
        }
    }
    Err(SearchError::Unrealized { budget: config.budget })
}

// ---------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::design::canon_triple;
    use crate::latin::three_way_cells;
    use crate::spectrum::{i3f, published_j3f, published_jprime3};

    #[test]
    fn sts_enumeration_counts_and_validity() {
        let sts7 = enumerate_all_sts(7).unwrap();
        assert_eq!(sts7.len(), 30);
        let sts9 = enumerate_all_sts(9).unwrap();
        assert_eq!(sts9.len(), 840);
        for s in sts7.iter().chain(sts9.iter().take(40)) {
            assert!(s.validate().ok());
        }
        let distinct: BTreeSet<Vec<Triple>> =
            sts9.iter().map(|s| s.blocks().to_vec()).collect();
        assert_eq!(distinct.len(), 840);
        assert!(matches!(
            enumerate_all_sts(13),
            Err(SearchError::OrderUnsupported { value: 13, .. })
        ));
    }

    #[test]
    fn flower_spectra_match_recorded_values() {
        for r in [3usize, 4] {
            let computed = exhaustive_flower_spectrum(r).unwrap();
            let (lower, upper, exact) = published_j3f(r).unwrap();
            assert!(exact, "r={r} should be settled");
            assert_eq!(computed, lower, "r={r}");
            assert_eq!(computed, upper, "r={r}");
            assert!(computed.is_subset(&i3f(r)), "r={r}");
        }
        assert_eq!(
            exhaustive_flower_spectrum(3).unwrap().into_iter().collect::<Vec<_>>(),
            vec![4]
        );
        assert_eq!(
            exhaustive_flower_spectrum(4).unwrap().into_iter().collect::<Vec<_>>(),
            vec![0, 8]
        );
        assert!(exhaustive_flower_spectrum(6).is_err());
    }

    #[test]
    fn latin_3way_spectra_match_recorded_values() {
        let n3 = exhaustive_latin_3way(3).unwrap();
        assert_eq!(n3.set, published_jprime3(3));
        assert!(!n3.derived_only);

        let n4 = exhaustive_latin_3way(4).unwrap();
        assert_eq!(n4.set, published_jprime3(4));
        assert!(!n4.set.contains(&7), "7 must be absent at order 4");
        assert!(!n4.derived_only);

        let n2 = exhaustive_latin_3way(2).unwrap();
        assert_eq!(n2.set.iter().copied().collect::<Vec<_>>(), vec![4]);
        assert!(n2.derived_only);

        assert!(exhaustive_latin_3way(5).is_err());
    }

    #[test]
    fn latin_canonicalization_is_a_pure_speedup() {
        let full = SearchConfig { canonicalize: false, ..SearchConfig::default() };
        for n in [0usize, 1, 2, 3] {
            assert_eq!(
                exhaustive_latin_3way_with(n, &full).unwrap().set,
                exhaustive_latin_3way(n).unwrap().set,
                "n={n}"
            );
        }
    }

    #[test]
    fn local_agreement_matches_latin_module_checker() {
        let squares = enumerate_latin_squares(3);
        let mut rng = Rng::new(7);
        for _ in 0..200 {
            let a = rng.choose(&squares);
            let b = rng.choose(&squares);
            let c = rng.choose(&squares);
            let ours = agreement_if_triple(a, b, c);
            let theirs = three_way_cells(a, b, c).ok().map(|cells| cells.len() as u32);
            assert_eq!(ours, theirs);
        }
    }

    #[test]
    fn disjoint_gdd_triples_exist_exactly_when_counting_allows() {
        let config = SearchConfig { budget: 400_000, restarts: 8, ..SearchConfig::default() };
        for r in [4usize, 6, 7] {
            let triple = hillclimb_disjoint_gdd_triple(r, &config).unwrap();
            assert!(triple.is_disjoint(), "r={r}");
            for d in triple.designs() {
                assert_eq!(d.blocks().len(), 2 * r * (r - 1) / 3, "r={r}");
            }
        }
        assert!(matches!(
            hillclimb_disjoint_gdd_triple(3, &config),
            Err(SearchError::Impossible { .. })
        ));
        assert!(matches!(
            hillclimb_disjoint_gdd_triple(5, &config),
            Err(SearchError::NotAdmissible(5))
        ));
        let trivial = hillclimb_disjoint_gdd_triple(1, &config).unwrap();
        assert!(trivial.is_disjoint());
        assert!(trivial.designs()[0].blocks().is_empty());
    }

    #[test]
    fn gdd_climb_is_deterministic_for_a_fixed_seed() {
        let config = SearchConfig { budget: 400_000, restarts: 8, ..SearchConfig::default() };
        let a = hillclimb_disjoint_gdd_triple(7, &config).unwrap();
        let b = hillclimb_disjoint_gdd_triple(7, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn probe_refuses_targets_beyond_the_ceiling() {
        let base = catalog::system("STS13-A").unwrap();
        let config = SearchConfig::default();
        // r = 6 caps the spectrum at 2·6·5/3 = 20.
        assert!(matches!(
            permutation_probe(&base, &base, 0, 21, &config),
            Err(SearchError::TargetTooLarge { target: 21, max: 20 })
        ));
    }

    #[test]
    fn probe_hits_the_identity_ceiling_immediately() {
        let base = crate::design::bose(15).unwrap();
        let config = SearchConfig { budget: 4, ..SearchConfig::default() };
        let cert = permutation_probe(&base, &base, 0, 28, &config).unwrap();
        assert_eq!(cert.verify(), Ok(28));
    }

    #[test]
    fn probe_finds_a_recorded_small_value() {
        // The two order-13 catalog systems share their flower at some
        // point; recover it, then ask the probe for a small size that
        // the recorded spectrum contains.
        let a = catalog::system("STS13-A").unwrap();
        let fp = (0..13)
            .find(|&p| a.flower_of(p).blocks.len() == 6)
            .expect("flower");
        let config = SearchConfig { budget: 60_000, ..SearchConfig::default() };
        let cert = permutation_probe(&a, &a, fp, 2, &config).unwrap();
        assert_eq!(cert.verify(), Ok(2));
        assert_eq!(cert.flower_point, fp);
        let (_, upper, _) = published_j3f(6).unwrap();
        assert!(upper.contains(&2));
    }

    #[test]
    fn probe_rejects_bases_without_a_shared_flower() {
        let a = catalog::system("STS13-A").unwrap();
        let b = catalog::system("STS13-B").unwrap();
        let differs = (0..13).find(|&x| a.flower_of(x) != b.flower_of(x)).unwrap();
        assert!(matches!(
            permutation_probe(&a, &b, differs, 1, &SearchConfig::default()),
            Err(SearchError::FlowerNotShared { .. })
        ));
    }

    #[test]
    fn enumeration_respects_preplaced_blocks() {
        let flower: Vec<Triple> = (0..3).map(|i| canon_triple([0, 2 * i + 1, 2 * i + 2])).collect();
        let hosts = enumerate_completions(7, &flower);
        assert!(!hosts.is_empty());
        for h in &hosts {
            assert!(h.validate().ok());
            for f in &flower {
                assert!(h.contains_block(*f));
            }
        }
        // Each host contains the canonical flower; counts over all
        // flowers at 0 partition the 30 systems evenly.
        assert_eq!(hosts.len() * 15, 30, "15 flowers at a point, 30 systems");
    }
}
