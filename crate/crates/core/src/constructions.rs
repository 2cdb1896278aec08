//! Recursive assemblies that turn small certified components into large
//! ones: three Latin-layer expansions (to orders `3m`, `3m+1`, `3m+3`),
//! doubling over a one-factorization, composition over a pairwise
//! balanced design, gluing at symmetric block squares, plus the trivial
//! identity and disjoint-design witnesses and a deterministic system
//! generator for every admissible order.
//!
//! Every operation reassembles its output from raw blocks and runs the
//! independent flower verifier before returning; nothing is emitted on
//! trust. Each constructor's claimed intersection size is computed from
//! its component sizes by the corresponding counting identity, so a
//! verifier mismatch signals a real assembly bug rather than a bookkeeping
//! slip.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::design::{
    affine_sts9, bose, canon_triple, cyclic_sts13, fano, intersect_blocks, one_factorize,
    FlowerCertificate, Permutation, Point, StsTriple, Triple, TripleSystem, VerifyError,
};
use crate::latin::{count_agreement_above_diagonal_blocks, DiagonalLatinTriple, LatinTriple};
use crate::pbd::{pbd_6t, spoke_aligned, sts_from_pbd, PairwiseBalancedDesign};
use crate::rng::Rng;
use crate::search::{
    climb_sts, enumerate_all_sts, hillclimb_disjoint_gdd_triple, SearchConfig, SearchError,
};
use crate::spectrum::{admissible_sts_order, i3, t_v};

// ---------------------------------------------------------------------
// Errors.
// ---------------------------------------------------------------------

/// Failure modes of the assembly operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    /// A component has the wrong order for the slot it should fill.
    OrderMismatch { what: &'static str, expected: usize, got: usize },
    /// A component fails its own validation or verification.
    Component { what: &'static str, detail: String },
    /// A scalar parameter is outside the operation's domain.
    BadParameter { detail: String },
    /// A search-backed component could not be found.
    Search(SearchError),
    /// The assembled output failed the independent verifier.
    Verify(VerifyError),
}

impl core::fmt::Display for BuildError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BuildError::OrderMismatch { what, expected, got } => {
                write!(f, "{what} must have order {expected}, got {got}")
            }
            BuildError::Component { what, detail } => {
                write!(f, "invalid {what}: {detail}")
            }
            BuildError::BadParameter { detail } => write!(f, "{detail}"),
            BuildError::Search(e) => write!(f, "search failed: {e}"),
            BuildError::Verify(e) => write!(f, "output failed verification: {e}"),
        }
    }
}

impl From<VerifyError> for BuildError {
    fn from(e: VerifyError) -> Self {
        BuildError::Verify(e)
    }
}

impl From<SearchError> for BuildError {
    fn from(e: SearchError) -> Self {
        BuildError::Search(e)
    }
}

// ---------------------------------------------------------------------
// Shared assembly helpers.
// ---------------------------------------------------------------------

fn three(mut systems: Vec<TripleSystem>) -> [TripleSystem; 3] {
    let c = systems.pop().expect("three systems");
    let b = systems.pop().expect("three systems");
    let a = systems.pop().expect("three systems");
    [a, b, c]
}

/// Assemble, claim, and independently verify a certificate.
fn certify(
    systems: Vec<TripleSystem>,
    flower_point: Point,
    claimed_k: u32,
) -> Result<FlowerCertificate, BuildError> {
    let cert = FlowerCertificate {
        triple: StsTriple::new(three(systems)),
        flower_point,
        claimed_k,
    };
    cert.verify()?;
    Ok(cert)
}

fn verify_component(
    cert: &FlowerCertificate,
    what: &'static str,
) -> Result<u32, BuildError> {
    cert.verify().map_err(|e| BuildError::Component {
        what,
        detail: format!("{e}"),
    })
}

// ---------------------------------------------------------------------
// Layered expansion at an agreement line (order m → 3m).
// ---------------------------------------------------------------------

/// Which fully-agreeing line of the Latin triple carries the new flower
/// in [`triple_with_diagonal`]. The diagonal form needs the three
/// squares to share a constant secondary diagonal; the row and column
/// forms need them to agree on that entire line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgreementLine {
    SecondaryDiagonal,
    Row(usize),
    Column(usize),
}

/// Expand three systems of odd order `m` to three of order `3m` using a
/// Latin triple of order `m` for the cross-layer blocks.
///
/// Layers: rows → points `0..m`, columns → `m..2m`, symbols → `2m..3m`;
/// each square's cell `(i, j) = s` becomes the block `{i, m+j, 2m+s}`.
/// One layer carries the flower component, relabeled so its flower point
/// sits on the agreement line (the flower gains the `m` line blocks and
/// keeps its own `(m-1)/2`, totalling `(3m-1)/2`); the other two layers
/// carry the plain components. With component sizes `a₁`, `a₂` (plain),
/// `a` (flower) and `b` agreement cells off the line, the result has
/// intersection size `a₁ + a₂ + a + b`.
pub fn triple_with_diagonal(
    latin: &LatinTriple,
    line: AgreementLine,
    plain1: &StsTriple,
    plain2: &StsTriple,
    flower: &FlowerCertificate,
) -> Result<FlowerCertificate, BuildError> {
    let m = latin.order();
    if m < 3 || m % 2 == 0 {
        return Err(BuildError::BadParameter {
            detail: format!("layer order must be odd and at least 3, got {m}"),
        });
    }
    for (what, got) in [
        ("first plain component", plain1.v()),
        ("second plain component", plain2.v()),
        ("flower component", flower.v()),
    ] {
        if got != m {
            return Err(BuildError::OrderMismatch { what, expected: m, got });
        }
    }
    // Which layer hosts the flower component, and at which local point.
    let (flower_layer, target): (usize, Point) = match line {
        AgreementLine::SecondaryDiagonal => {
            DiagonalLatinTriple::new(latin.clone()).map_err(|e| BuildError::Component {
                what: "latin triple",
                detail: format!("{e}"),
            })?;
            // The diagonal constant is symbol 0, so the flower lands on
            // the symbol layer's point 0.
            (2, 0)
        }
        AgreementLine::Row(i) => {
            if i >= m || !latin.has_common_row(i) {
                return Err(BuildError::BadParameter {
                    detail: format!("squares do not fully agree on row {i}"),
                });
            }
            (0, i as Point)
        }
        AgreementLine::Column(j) => {
            if j >= m || !latin.has_common_col(j) {
                return Err(BuildError::BadParameter {
                    detail: format!("squares do not fully agree on column {j}"),
                });
            }
            (1, j as Point)
        }
    };
    let a1 = plain_common_size(plain1, "first plain component")?;
    let a2 = plain_common_size(plain2, "second plain component")?;
    let a = verify_component(flower, "flower component")?;
    let b = latin.k() - m as u32;

    let plain_layers: [usize; 2] = match flower_layer {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let f0 = flower.flower_point;
    let flower_off = (flower_layer * m) as Point;
    let relabel = |p: Point| -> Point {
        let q = if p == f0 {
            target
        } else if p == target {
            f0
        } else {
            p
        };
        q + flower_off
    };

    let big = 3 * m;
    let mut systems = Vec::with_capacity(3);
    for t in 0..3 {
        let mut blocks: BTreeSet<Triple> = BTreeSet::new();
        for (plain, layer) in [(plain1, plain_layers[0]), (plain2, plain_layers[1])] {
            let off = (layer * m) as Point;
            for &tr in plain.systems[t].blocks() {
                blocks.insert(canon_triple([tr[0] + off, tr[1] + off, tr[2] + off]));
            }
        }
        for &tr in flower.triple.systems[t].blocks() {
            blocks.insert(canon_triple([relabel(tr[0]), relabel(tr[1]), relabel(tr[2])]));
        }
        let sq = &latin.squares()[t];
        for i in 0..m {
            for j in 0..m {
                blocks.insert(canon_triple([
                    i as Point,
                    (m + j) as Point,
                    (2 * m) as Point + sq.get(i, j),
                ]));
            }
        }
        systems.push(TripleSystem::new(big, blocks));
    }
    certify(systems, flower_off + target, a1 + a2 + a + b)
}

fn plain_common_size(triple: &StsTriple, what: &'static str) -> Result<u32, BuildError> {
    triple
        .common()
        .map(|c| c.len() as u32)
        .map_err(|e| BuildError::Component { what, detail: format!("{e}") })
}

// ---------------------------------------------------------------------
// Layered expansion sharing one point (order 2r+1 → 6r+1).
// ---------------------------------------------------------------------

/// Expand three flower components of order `n+1` (where `n` is the even
/// Latin order) into three systems of order `3n+1` that all share the
/// point `∞ = 3n`.
///
/// Each component is relabeled so its flower point becomes `∞` and its
/// remaining `n` points fill one layer; the Latin triple supplies the
/// cross-layer blocks. With component sizes `a₁, a₂, a₃` and `b`
/// agreement cells, the result has intersection size `a₁+a₂+a₃+b` and
/// flower at `∞`.
pub fn expand_3r(
    latin: &LatinTriple,
    flowers: [&FlowerCertificate; 3],
) -> Result<FlowerCertificate, BuildError> {
    let n = latin.order();
    if n < 2 || n % 2 != 0 {
        return Err(BuildError::BadParameter {
            detail: format!("latin order must be even and at least 2, got {n}"),
        });
    }
    let mut parts = [0u32; 3];
    for (i, f) in flowers.iter().enumerate() {
        if f.v() != n + 1 {
            return Err(BuildError::OrderMismatch {
                what: "flower component",
                expected: n + 1,
                got: f.v(),
            });
        }
        parts[i] = verify_component(f, "flower component")?;
    }
    let b = latin.k();
    let inf = (3 * n) as Point;
    let big = 3 * n + 1;

    let mut systems = Vec::with_capacity(3);
    for t in 0..3 {
        let mut blocks: BTreeSet<Triple> = BTreeSet::new();
        for (layer, f) in flowers.iter().enumerate() {
            let f0 = f.flower_point;
            let off = (layer * n) as Point;
            let relabel = |p: Point| -> Point {
                if p == f0 {
                    inf
                } else if p > f0 {
                    p - 1 + off
                } else {
                    p + off
                }
            };
            for &tr in f.triple.systems[t].blocks() {
                blocks.insert(canon_triple([relabel(tr[0]), relabel(tr[1]), relabel(tr[2])]));
            }
        }
        let sq = &latin.squares()[t];
        for i in 0..n {
            for j in 0..n {
                blocks.insert(canon_triple([
                    i as Point,
                    (n + j) as Point,
                    (2 * n) as Point + sq.get(i, j),
                ]));
            }
        }
        systems.push(TripleSystem::new(big, blocks));
    }
    certify(systems, inf, parts.iter().sum::<u32>() + b)
}

/// Expand three flower components of order `n+3` into three systems of
/// order `3n+3` that share the three points `{∞₁, ∞₂, ∞₃}` and the block
/// through them.
///
/// Each component must be a flower certificate of order `n+3`; one of
/// its flower blocks is designated `{∞₁, ∞₂, ∞₃}` (the lexicographically
/// first — any flower block works, since all are common). The component
/// is relabeled so that block maps onto the shared points `{3n, 3n+1,
/// 3n+2}` with the flower point at `∞₁ = 3n`, and its remaining `n`
/// points fill one layer. The shared block is deduplicated when the
/// three layers are merged. Intersection size: `a₁+a₂+a₃+b`.
pub fn expand_3r1(
    latin: &LatinTriple,
    flowers: [&FlowerCertificate; 3],
) -> Result<FlowerCertificate, BuildError> {
    let n = latin.order();
    if n < 2 || n % 2 != 0 {
        return Err(BuildError::BadParameter {
            detail: format!("latin order must be even and at least 2, got {n}"),
        });
    }
    if (n / 2) % 3 == 1 {
        return Err(BuildError::BadParameter {
            detail: format!(
                "half the latin order must be ≡ 0 or 2 (mod 3) so the output \
                 replication number is admissible, got {}",
                n / 2
            ),
        });
    }
    let mut parts = [0u32; 3];
    for (i, f) in flowers.iter().enumerate() {
        if f.v() != n + 3 {
            return Err(BuildError::OrderMismatch {
                what: "flower component",
                expected: n + 3,
                got: f.v(),
            });
        }
        parts[i] = verify_component(f, "flower component")?;
    }
    let b = latin.k();
    let inf = (3 * n) as Point;
    let big = 3 * n + 3;

    let mut images: Vec<Vec<Point>> = Vec::with_capacity(3);
    for (layer, f) in flowers.iter().enumerate() {
        let f0 = f.flower_point;
        let shared = f.triple.systems[0]
            .flower_of(f0)
            .blocks
            .first()
            .copied()
            .ok_or(BuildError::BadParameter {
                detail: String::from("flower component has no flower block"),
            })?;
        let mut tails: Vec<Point> = shared.iter().copied().filter(|&p| p != f0).collect();
        tails.sort_unstable();
        let off = (layer * n) as Point;
        let mut image = Vec::with_capacity(n + 3);
        let mut slot: Point = 0;
        for p in 0..(n + 3) as Point {
            image.push(if p == f0 {
                inf
            } else if p == tails[0] {
                inf + 1
            } else if p == tails[1] {
                inf + 2
            } else {
                let g = off + slot;
                slot += 1;
                g
            });
        }
        images.push(image);
    }

    let mut systems = Vec::with_capacity(3);
    for t in 0..3 {
        let mut blocks: BTreeSet<Triple> = BTreeSet::new();
        for (layer, f) in flowers.iter().enumerate() {
            let image = &images[layer];
            for &tr in f.triple.systems[t].blocks() {
                blocks.insert(canon_triple([
                    image[tr[0] as usize],
                    image[tr[1] as usize],
                    image[tr[2] as usize],
                ]));
            }
        }
        let sq = &latin.squares()[t];
        for i in 0..n {
            for j in 0..n {
                blocks.insert(canon_triple([
                    i as Point,
                    (n + j) as Point,
                    (2 * n) as Point + sq.get(i, j),
                ]));
            }
        }
        systems.push(TripleSystem::new(big, blocks));
    }
    certify(systems, inf, parts.iter().sum::<u32>() + b)
}

// ---------------------------------------------------------------------
// Doubling (order v → 2v+1).
// ---------------------------------------------------------------------

/// Double a certificate of order `v = 2r+1` to one of order `2v+1`,
/// keeping `s` of the hub assignments fixed.
///
/// New points `v..=2v` carry the circle-method one-factorization of the
/// complete graph on `v+1` vertices; its `v` factors are matched to hubs
/// with the flower point first (always fixed, so the big flower is
/// common), the rest in ascending order. The second and third systems
/// permute the `v−s` unfixed hubs by a single cycle and its inverse, so
/// a factor's blocks survive in all three exactly when its hub is fixed.
/// Valid `s`: `1..=v−3` (the cycle needs length ≥ 3) or `s = v`
/// (identity). Intersection size: `k + (s−1)(r+1)`; flower at the base
/// flower point, now of size `v`.
pub fn double(base: &FlowerCertificate, s: usize) -> Result<FlowerCertificate, BuildError> {
    let v = base.v();
    if !(s == v || (s >= 1 && s + 3 <= v)) {
        return Err(BuildError::BadParameter {
            detail: format!(
                "s must lie in 1..={} or equal {v} (the cycle on the unfixed \
                 hubs needs length at least 3)",
                v.saturating_sub(3)
            ),
        });
    }
    let k = verify_component(base, "base certificate")?;
    let r = base.r();
    let of = one_factorize(v + 1).map_err(|e| BuildError::Component {
        what: "one-factorization",
        detail: format!("{e:?}"),
    })?;
    debug_assert_eq!(of.factors.len(), v);

    let f0 = base.flower_point;
    let mut hubs: Vec<Point> = Vec::with_capacity(v);
    hubs.push(f0);
    hubs.extend((0..v as Point).filter(|&p| p != f0));
    let mut img1 = hubs.clone();
    let mut img2 = hubs.clone();
    if s < v {
        let moved = v - s;
        for i in 0..moved {
            img1[s + i] = hubs[s + (i + 1) % moved];
            img2[s + i] = hubs[s + (i + moved - 1) % moved];
        }
    }

    let big = 2 * v + 1;
    let mut systems = Vec::with_capacity(3);
    for (t, assignment) in [&hubs, &img1, &img2].into_iter().enumerate() {
        let mut blocks: Vec<Triple> = base.triple.systems[t].blocks().to_vec();
        for (i, factor) in of.factors.iter().enumerate() {
            let hub = assignment[i];
            for &[x, y] in factor {
                blocks.push(canon_triple([hub, v as Point + x, v as Point + y]));
            }
        }
        systems.push(TripleSystem::new(big, blocks));
    }
    certify(systems, f0, k + (s as u32 - 1) * (r as u32 + 1))
}

// ---------------------------------------------------------------------
// Composition over a pairwise balanced design.
// ---------------------------------------------------------------------

/// Compose per-block certificates over a pairwise balanced design on `r`
/// points into a certificate of order `2r+1`.
///
/// Point `i` of the design becomes the pair `(2i+1, 2i+2)`; the hub `0`
/// carries the flower of spokes `{0, 2i+1, 2i+2}`. Each block `B` needs
/// a certificate of order `2|B|+1` whose three systems are aligned at
/// their common flower and embedded on `B`'s pairs; their own spoke
/// blocks collapse onto the global spokes. Intersection size: `Σ k_B`.
pub fn pbd_compose(
    pbd: &PairwiseBalancedDesign,
    certs: &[FlowerCertificate],
) -> Result<FlowerCertificate, BuildError> {
    let r = pbd.v();
    if r % 3 == 2 {
        return Err(BuildError::BadParameter {
            detail: format!("point count must be ≡ 0 or 1 (mod 3), got {r}"),
        });
    }
    let rep = pbd.validate();
    if !rep.ok() {
        return Err(BuildError::Component {
            what: "pairwise balanced design",
            detail: rep.summary(),
        });
    }
    if certs.len() != pbd.blocks().len() {
        return Err(BuildError::BadParameter {
            detail: format!(
                "need one certificate per block: {} blocks, {} certificates",
                pbd.blocks().len(),
                certs.len()
            ),
        });
    }

    let big = 2 * r + 1;
    let mut sets: [BTreeSet<Triple>; 3] = [BTreeSet::new(), BTreeSet::new(), BTreeSet::new()];
    for set in &mut sets {
        for i in 0..r as Point {
            set.insert([0, 2 * i + 1, 2 * i + 2]);
        }
    }
    let mut total = 0u32;
    for (block, cert) in pbd.blocks().iter().zip(certs) {
        if block.len() % 3 == 2 {
            return Err(BuildError::BadParameter {
                detail: format!("block size must be ≡ 0 or 1 (mod 3), got {}", block.len()),
            });
        }
        if cert.v() != 2 * block.len() + 1 {
            return Err(BuildError::OrderMismatch {
                what: "per-block certificate",
                expected: 2 * block.len() + 1,
                got: cert.v(),
            });
        }
        total += verify_component(cert, "per-block certificate")?;
        let to_global = |p: Point| -> Point {
            let i = ((p - 1) / 2) as usize;
            2 * block[i] + 1 + (p - 1) % 2
        };
        for (t, set) in sets.iter_mut().enumerate() {
            let aligned =
                spoke_aligned(&cert.triple.systems[t], cert.flower_point).map_err(|e| {
                    BuildError::Component {
                        what: "per-block certificate",
                        detail: format!("{e:?}"),
                    }
                })?;
            for &tr in aligned.blocks() {
                if tr[0] == 0 {
                    continue; // its spokes collapse onto the global ones
                }
                set.insert(canon_triple([
                    to_global(tr[0]),
                    to_global(tr[1]),
                    to_global(tr[2]),
                ]));
            }
        }
    }
    let systems = sets.into_iter().map(|set| TripleSystem::new(big, set)).collect();
    certify(systems, 0, total)
}

// ---------------------------------------------------------------------
// Leaf witnesses.
// ---------------------------------------------------------------------

/// Certificate with intersection size 0: three systems of order `2r+1`
/// sharing the flower at `2r` and nothing else, obtained from three
/// pairwise-disjoint group divisible designs found by hill climbing.
pub fn flower_only(r: usize, config: &SearchConfig) -> Result<FlowerCertificate, BuildError> {
    let triple = hillclimb_disjoint_gdd_triple(r, config)?;
    let hub = (2 * r) as Point;
    let mut systems = Vec::with_capacity(3);
    for gdd in triple.designs() {
        let sys = crate::pbd::flower_reconstitute(gdd, hub).map_err(|e| {
            BuildError::Component {
                what: "group divisible design",
                detail: format!("{e:?}"),
            }
        })?;
        systems.push(sys);
    }
    certify(systems, hub, 0)
}

/// Certificate of the maximal intersection size `t(v) − r`: the same
/// system three times, flower at the given point.
pub fn identity_max(base: &TripleSystem, flower_point: Point) -> Result<FlowerCertificate, BuildError> {
    let v = base.v();
    if (flower_point as usize) >= v {
        return Err(BuildError::BadParameter {
            detail: format!("flower point {flower_point} out of range for order {v}"),
        });
    }
    let k = t_v(v) - base.r() as u32;
    certify(
        [base.clone(), base.clone(), base.clone()].into_iter().collect(),
        flower_point,
        k,
    )
}

// ---------------------------------------------------------------------
// Plain (flowerless) three-way triples.
// ---------------------------------------------------------------------

/// Three systems of order `v` whose pairwise intersections are the same
/// set of exactly `a` blocks. Routes: the identity triple for the
/// maximum, complete search over all labeled systems for `v ≤ 9` (where
/// failure is a proof of impossibility), and a seeded permutation-image
/// probe `(𝓑, π𝓑, π′𝓑)` for larger orders (where failure is only a
/// budget exhaustion).
pub fn realize_plain_3way(
    v: usize,
    a: u32,
    config: &SearchConfig,
) -> Result<StsTriple, BuildError> {
    if !admissible_sts_order(v) {
        return Err(BuildError::BadParameter {
            detail: format!("{v} is not an admissible order"),
        });
    }
    if !i3(v).contains(&a) {
        return Err(BuildError::BadParameter {
            detail: format!("{a} is outside the candidate intersection spectrum for order {v}"),
        });
    }
    let base = canonical_sts(v)?;
    if a == t_v(v) {
        return Ok(StsTriple::new([base.clone(), base.clone(), base]));
    }
    if v <= 9 {
        // Complete: every labeled system, first coordinate fixed (sound
        // because all systems of these orders are isomorphic, and
        // relabeling all three preserves intersections).
        let all = enumerate_all_sts(v)?;
        let mates: Vec<&TripleSystem> = all
            .iter()
            .filter(|s| intersect_blocks(base.blocks(), s.blocks()).len() as u32 == a)
            .collect();
        for (i, second) in mates.iter().enumerate() {
            for third in &mates[i..] {
                let triple =
                    StsTriple::new([base.clone(), (*second).clone(), (*third).clone()]);
                if let Ok(c) = triple.common() {
                    if c.len() as u32 == a {
                        return Ok(triple);
                    }
                }
            }
        }
        return Err(BuildError::Search(SearchError::Impossible {
            reason: format!(
                "complete search: no three systems of order {v} pairwise share \
                 the same {a} blocks"
            ),
        }));
    }
    let mut rng = Rng::derive(config.seed, "plain-three-way-probe");
    let mut samples = 0u64;
    while samples < config.budget {
        samples += 1;
        let second = base
            .apply_permutation(&random_permutation(v, &mut rng))
            .expect("permutation preserves validity");
        let third = base
            .apply_permutation(&random_permutation(v, &mut rng))
            .expect("permutation preserves validity");
        if intersect_blocks(base.blocks(), second.blocks()).len() as u32 != a {
            continue;
        }
        let triple = StsTriple::new([base.clone(), second, third]);
        if let Ok(c) = triple.common() {
            if c.len() as u32 == a {
                return Ok(triple);
            }
        }
    }
    Err(BuildError::Search(SearchError::Unrealized { budget: config.budget }))
}

fn random_permutation(v: usize, rng: &mut Rng) -> Permutation {
    let mut image: Vec<Point> = (0..v as Point).collect();
    rng.shuffle(&mut image);
    Permutation::from_image(image).expect("shuffled identity is a bijection")
}

// ---------------------------------------------------------------------
// Gluing at symmetric block squares (order 2n−1 from square order n).
// ---------------------------------------------------------------------

/// Glue a flower certificate of order `n−1` to a triple of symmetric
/// order-`n` squares with constant 0 diagonal whose 2×2 diagonal blocks
/// hold symbol 1 off-diagonally.
///
/// Points: symbol `s ∈ 1..n` → point `s−1`; square row/column `i` →
/// point `n−1+i`. Each cell `(i, j) = s` with `i < j` becomes the block
/// `{s−1, n−1+i, n−1+j}`. The symbol-1 cells are exactly the 2×2 block
/// cells, fixed and identical in all three squares, so together with the
/// relabeled component flower they form the new flower at point 0.
/// Intersection size: component size plus the squares' agreement count
/// above the 2×2 diagonal blocks.
fn glue_symmetric_squares(
    flower: &FlowerCertificate,
    squares: &LatinTriple,
) -> Result<FlowerCertificate, BuildError> {
    let n = squares.order();
    if n < 4 || n % 2 != 0 {
        return Err(BuildError::BadParameter {
            detail: format!("square order must be even and at least 4, got {n}"),
        });
    }
    if flower.v() != n - 1 {
        return Err(BuildError::OrderMismatch {
            what: "flower component",
            expected: n - 1,
            got: flower.v(),
        });
    }
    for sq in squares.squares() {
        if !sq.is_symmetric() {
            return Err(BuildError::Component {
                what: "square triple",
                detail: String::from("each square must be symmetric"),
            });
        }
        if (0..n).any(|i| sq.get(i, i) != 0) {
            return Err(BuildError::Component {
                what: "square triple",
                detail: String::from("each square must have a constant 0 diagonal"),
            });
        }
        if (0..n).step_by(2).any(|i| sq.get(i, i + 1) != 1) {
            return Err(BuildError::Component {
                what: "square triple",
                detail: String::from(
                    "the cells of the 2×2 diagonal blocks must hold symbol 1",
                ),
            });
        }
    }
    let ell = verify_component(flower, "flower component")?;
    let above = count_agreement_above_diagonal_blocks(squares);

    let f0 = flower.flower_point;
    let relabel = |p: Point| -> Point {
        if p == f0 {
            0
        } else if p == 0 {
            f0
        } else {
            p
        }
    };
    let big = 2 * n - 1;
    let mut systems = Vec::with_capacity(3);
    for t in 0..3 {
        let mut blocks: Vec<Triple> = flower.triple.systems[t]
            .blocks()
            .iter()
            .map(|&tr| canon_triple([relabel(tr[0]), relabel(tr[1]), relabel(tr[2])]))
            .collect();
        let sq = &squares.squares()[t];
        for i in 0..n {
            for j in i + 1..n {
                let s = sq.get(i, j);
                blocks.push(canon_triple([
                    s - 1,
                    (n - 1 + i) as Point,
                    (n - 1 + j) as Point,
                ]));
            }
        }
        systems.push(TripleSystem::new(big, blocks));
    }
    certify(systems, 0, ell + above)
}

/// Order-15 certificate from an order-7 flower component and a triple of
/// symmetric block squares of order 8 (see [`assemble_special8`]
/// [`crate::latin::assemble_special8`]).
pub fn sts15_from_special8(
    flower: &FlowerCertificate,
    squares: &LatinTriple,
) -> Result<FlowerCertificate, BuildError> {
    if squares.order() != 8 {
        return Err(BuildError::OrderMismatch {
            what: "square triple",
            expected: 8,
            got: squares.order(),
        });
    }
    glue_symmetric_squares(flower, squares)
}

/// Order-31 certificate from an order-15 flower component and a triple
/// of symmetric block squares of order 16 (see
/// [`crate::latin::assemble_special16`]).
pub fn sts31_from_special16(
    flower: &FlowerCertificate,
    squares: &LatinTriple,
) -> Result<FlowerCertificate, BuildError> {
    if squares.order() != 16 {
        return Err(BuildError::OrderMismatch {
            what: "square triple",
            expected: 16,
            got: squares.order(),
        });
    }
    glue_symmetric_squares(flower, squares)
}

// ---------------------------------------------------------------------
// A deterministic system for every admissible order.
// ---------------------------------------------------------------------

/// A concrete Steiner triple system of order `v`, the same one on every
/// call. Explicit systems at small orders; difference construction for
/// `v ≡ 3 (mod 6)`; doubling or a three-layer expansion when a smaller
/// admissible order reaches `v`; composition over a six-group design for
/// `v = 12t+1` with `t` a prime power; a seeded deterministic hill climb
/// for the handful of orders none of the recipes reach (first such:
/// `v = 49`).
pub fn canonical_sts(v: usize) -> Result<TripleSystem, BuildError> {
    if !admissible_sts_order(v) || v < 3 {
        return Err(BuildError::BadParameter {
            detail: format!("{v} is not an admissible order (needs v ≡ 1, 3 mod 6, v ≥ 3)"),
        });
    }
    match v {
        3 => return Ok(TripleSystem::new(3, [[0, 1, 2]])),
        7 => return Ok(fano()),
        9 => return Ok(affine_sts9()),
        13 => return Ok(cyclic_sts13()),
        _ => {}
    }
    if v % 6 == 3 {
        return bose(v).map_err(|e| BuildError::Component {
            what: "difference construction",
            detail: format!("{e:?}"),
        });
    }
    let u = (v - 1) / 2;
    if admissible_sts_order(u) {
        return Ok(double_system(&canonical_sts(u)?));
    }
    let w = (v + 2) / 3;
    if (v - 1) % 3 == 0 && admissible_sts_order(w) {
        return Ok(expand_system(&canonical_sts(w)?));
    }
    if (v - 1) % 12 == 0 {
        let t = (v - 1) / 12;
        if t >= 5 {
            if let Ok(pbd) = pbd_6t(t, None) {
                let built = sts_from_pbd(&pbd, |block: &[Point]| {
                    let sub = canonical_sts(2 * block.len() + 1).ok()?;
                    spoke_aligned(&sub, 0).ok()
                });
                if let Ok(sys) = built {
                    return Ok(sys);
                }
            }
        }
    }
    for attempt in 0..24u64 {
        let budget = 100_000 + (v * v * 60) as u64;
        if let Some(sys) = climb_sts(v, 0x5EED_BA5E + attempt, budget) {
            return Ok(sys);
        }
    }
    Err(BuildError::Search(SearchError::Unrealized { budget: 24 * (100_000 + (v * v * 60) as u64) }))
}

/// One-system doubling: order `v` to `2v+1` with identity hub
/// assignment (factor `i` hooked to point `i`).
fn double_system(base: &TripleSystem) -> TripleSystem {
    let v = base.v();
    let of = one_factorize(v + 1).expect("v odd, so v+1 is even");
    let mut blocks: Vec<Triple> = base.blocks().to_vec();
    for (i, factor) in of.factors.iter().enumerate() {
        for &[x, y] in factor {
            blocks.push(canon_triple([i as Point, v as Point + x, v as Point + y]));
        }
    }
    let sys = TripleSystem::new(2 * v + 1, blocks);
    debug_assert!(sys.validate().ok());
    sys
}

/// One-system three-layer expansion: order `w` to `3(w−1)+1`. Three
/// copies share the point `∞ = 3(w−1)` (the image of `w−1` in each);
/// cross-layer pairs are covered by the cyclic square of order `w−1`.
fn expand_system(base: &TripleSystem) -> TripleSystem {
    let w = base.v();
    let n = w - 1;
    let inf = (3 * n) as Point;
    let mut blocks: BTreeSet<Triple> = BTreeSet::new();
    for layer in 0..3 {
        let off = (layer * n) as Point;
        let relabel =
            |p: Point| -> Point { if p as usize == n { inf } else { p + off } };
        for &tr in base.blocks() {
            blocks.insert(canon_triple([relabel(tr[0]), relabel(tr[1]), relabel(tr[2])]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            blocks.insert(canon_triple([
                i as Point,
                (n + j) as Point,
                (2 * n + (i + j) % n) as Point,
            ]));
        }
    }
    let sys = TripleSystem::new(3 * n + 1, blocks);
    debug_assert!(sys.validate().ok());
    sys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{
        assemble_special8, assemble_special16, deterministic_three_way, identical_triple,
        realize_diagonal_triple, shift_triple, LatinSquare,
    };
    use crate::spectrum::{max_extra_blocks, published_j3f};

    fn quick_config() -> SearchConfig {
        SearchConfig { budget: 400_000, restarts: 8, ..SearchConfig::default() }
    }

    #[test]
    fn identity_and_flower_leaves() {
        for (r, expect) in [(1usize, 0u32), (3, 4), (6, 20), (7, 28)] {
            let base = canonical_sts(2 * r + 1).unwrap();
            let cert = identity_max(&base, 0).unwrap();
            assert_eq!(cert.claimed_k, expect);
            assert_eq!(cert.claimed_k, max_extra_blocks(r));
        }
        let zero = flower_only(4, &quick_config()).unwrap();
        assert_eq!(zero.claimed_k, 0);
        assert!(matches!(
            flower_only(3, &quick_config()),
            Err(BuildError::Search(SearchError::Impossible { .. }))
        ));
    }

    #[test]
    fn doubling_matches_formula() {
        let base = identity_max(&fano(), 2).unwrap();
        for s in [1usize, 2, 3, 4, 7] {
            let cert = double(&base, s).unwrap();
            assert_eq!(cert.claimed_k, 4 + (s as u32 - 1) * 4);
            assert_eq!(cert.v(), 15);
            assert_eq!(cert.flower_point, 2);
        }
        assert!(double(&base, 5).is_err());
        assert!(double(&base, 6).is_err());
        assert!(double(&base, 0).is_err());

        // Published doubling outputs at the next order up.
        let mut seen = alloc::collections::BTreeSet::new();
        for &k in &[0u32, 8] {
            let base = if k == 0 {
                flower_only(4, &quick_config()).unwrap()
            } else {
                identity_max(&affine_sts9(), 0).unwrap()
            };
            for s in (1..=6).chain([9]) {
                seen.insert(double(&base, s).unwrap().claimed_k);
            }
        }
        for k in [5u32, 8, 10, 33] {
            assert!(seen.contains(&k), "missing doubled value {k}");
        }
        let (lower, _, _) = published_j3f(9).unwrap();
        assert!(seen.iter().all(|k| lower.contains(k)));
    }

    #[test]
    fn tripling_reaches_the_recorded_values() {
        let id7 = StsTriple::new([fano(), fano(), fano()]);
        let fl3 = identity_max(&fano(), 0).unwrap();

        let (full, _) = realize_diagonal_triple(7, 49, 0, 100_000).unwrap();
        let max = triple_with_diagonal(
            full.triple(),
            AgreementLine::SecondaryDiagonal,
            &id7,
            &id7,
            &fl3,
        )
        .unwrap();
        assert_eq!(max.claimed_k, 60);
        assert_eq!(max.claimed_k, max_extra_blocks(10));
        assert_eq!(max.v(), 21);

        let one = realize_plain_3way(7, 1, &quick_config()).unwrap();
        let (diag33, _) = realize_diagonal_triple(7, 40, 0, 100_000).unwrap();
        let forty_five = triple_with_diagonal(
            diag33.triple(),
            AgreementLine::SecondaryDiagonal,
            &one,
            &id7,
            &fl3,
        )
        .unwrap();
        assert_eq!(forty_five.claimed_k, 1 + 7 + 4 + 33);

        // Row/column agreement lines on fully identical squares.
        let rows = identical_triple(&LatinSquare::cyclic(7)).unwrap();
        for line in [AgreementLine::Row(0), AgreementLine::Column(3)] {
            let cert = triple_with_diagonal(&rows, line, &id7, &id7, &fl3).unwrap();
            assert_eq!(cert.claimed_k, 7 + 7 + 4 + 42);
        }
        assert!(triple_with_diagonal(&rows, AgreementLine::SecondaryDiagonal, &id7, &id7, &fl3)
            .is_err());
    }

    #[test]
    fn layer_expansions_match_formulas() {
        let fl3 = identity_max(&fano(), 0).unwrap();
        let zero6 = shift_triple(6).unwrap();
        let twelve = expand_3r(&zero6, [&fl3, &fl3, &fl3]).unwrap();
        assert_eq!(twelve.claimed_k, 12);
        assert_eq!(twelve.v(), 19);
        assert_eq!(twelve.flower_point, 18);

        let full6 = identical_triple(&LatinSquare::cyclic(6)).unwrap();
        let max9 = expand_3r(&full6, [&fl3, &fl3, &fl3]).unwrap();
        assert_eq!(max9.claimed_k, 48);
        assert_eq!(max9.claimed_k, max_extra_blocks(9));

        let fl4 = identity_max(&affine_sts9(), 4).unwrap();
        let c24 = expand_3r1(&zero6, [&fl4, &fl4, &fl4]).unwrap();
        assert_eq!(c24.claimed_k, 24);
        assert_eq!(c24.v(), 21);

        let z4 = flower_only(4, &quick_config()).unwrap();
        let c0 = expand_3r1(&zero6, [&z4, &z4, &z4]).unwrap();
        assert_eq!(c0.claimed_k, 0);

        let c60 = expand_3r1(&full6, [&fl4, &fl4, &fl4]).unwrap();
        assert_eq!(c60.claimed_k, 60);
        assert_eq!(c60.claimed_k, max_extra_blocks(10));
    }

    #[test]
    fn pbd_composition() {
        let single = PairwiseBalancedDesign::new(3, [3], [alloc::vec![0, 1, 2]]);
        let cert = pbd_compose(&single, &[identity_max(&canonical_sts(7).unwrap(), 0).unwrap()])
            .unwrap();
        assert_eq!(cert.claimed_k, 4);
        assert_eq!(cert.v(), 7);

        let fano_blocks: Vec<Vec<Point>> =
            fano().blocks().iter().map(|b| b.to_vec()).collect();
        let pbd = PairwiseBalancedDesign::new(7, [3], fano_blocks);
        let leaf = identity_max(&canonical_sts(7).unwrap(), 0).unwrap();
        let certs: Vec<FlowerCertificate> = (0..7).map(|_| leaf.clone()).collect();
        let big = pbd_compose(&pbd, &certs).unwrap();
        assert_eq!(big.claimed_k, 28);
        assert_eq!(big.claimed_k, max_extra_blocks(7));
        assert_eq!(big.v(), 15);
    }

    #[test]
    fn symmetric_square_gluing() {
        let fl3 = identity_max(&fano(), 0).unwrap();
        let mut got = alloc::collections::BTreeSet::new();
        for a in [0u32, 1, 4] {
            let at = deterministic_three_way(4, a).unwrap();
            let (squares, above) = assemble_special8(&at).unwrap();
            assert_eq!(above, a + 8);
            let cert = sts15_from_special8(&fl3, &squares).unwrap();
            assert_eq!(cert.claimed_k, 4 + above);
            assert_eq!(cert.v(), 15);
            got.insert(cert.claimed_k);
        }
        assert_eq!(got, [12u32, 13, 16].into_iter().collect());

        let a4 = deterministic_three_way(4, 16).unwrap();
        let b8 = identical_triple(&assemble8_one_for_test()).unwrap();
        let (squares16, m) = assemble_special16(&a4, &a4, &b8).unwrap();
        assert_eq!(m, 16 + 16 + 64 + 16);
        let fl7 = identity_max(&canonical_sts(15).unwrap(), 0).unwrap();
        let cert = sts31_from_special16(&fl7, &squares16).unwrap();
        assert_eq!(cert.claimed_k, 28 + m);
        assert_eq!(cert.claimed_k, max_extra_blocks(15));
        assert_eq!(cert.v(), 31);
    }

    fn assemble8_one_for_test() -> LatinSquare {
        let at = deterministic_three_way(4, 16).unwrap();
        let (squares, _) = assemble_special8(&at).unwrap();
        squares.squares()[0].clone()
    }

    #[test]
    fn plain_three_way_routes() {
        for a in [1u32, 7] {
            let t = realize_plain_3way(7, a, &quick_config()).unwrap();
            assert_eq!(t.common().unwrap().len() as u32, a);
        }
        for a in [0u32, 1, 3, 4, 12] {
            let t = realize_plain_3way(9, a, &quick_config()).unwrap();
            assert_eq!(t.common().unwrap().len() as u32, a);
        }
        // Candidate-spectrum members proven absent by the complete search.
        for a in [2u32, 6] {
            assert!(matches!(
                realize_plain_3way(9, a, &quick_config()),
                Err(BuildError::Search(SearchError::Impossible { .. }))
            ));
        }
        // Outside the candidate spectrum entirely.
        assert!(matches!(
            realize_plain_3way(7, 2, &quick_config()),
            Err(BuildError::BadParameter { .. })
        ));
        // Probe at an order beyond the enumerable range.
        let t = realize_plain_3way(13, 0, &quick_config()).unwrap();
        assert_eq!(t.common().unwrap().len(), 0);
    }

    #[test]
    fn canonical_orders_validate() {
        for v in [3usize, 7, 9, 13, 15, 19, 21, 25, 27, 31, 33, 37, 43, 49] {
            let sys = canonical_sts(v).unwrap();
            assert_eq!(sys.v(), v);
            assert!(sys.validate().ok(), "order {v}");
            assert_eq!(sys.blocks().len() as u32, t_v(v));
        }
        assert!(canonical_sts(11).is_err());
    }

    #[test]
    fn random_parameter_sweep_matches_formulas() {
        let mut rng = Rng::derive(7, "construction-sweep");
        let cfg = quick_config();
        let f3 = identity_max(&fano(), 0).unwrap();
        let f4a = flower_only(4, &cfg).unwrap();
        let f4b = identity_max(&affine_sts9(), 0).unwrap();
        let p7: Vec<StsTriple> =
            [1u32, 7].iter().map(|&a| realize_plain_3way(7, a, &cfg).unwrap()).collect();

        for _ in 0..25 {
            // double at r ∈ {3,4}
            let (base, r) = if rng.below(2) == 0 { (&f3, 3u32) } else {
                (if rng.below(2) == 0 { &f4a } else { &f4b }, 4u32)
            };
            let v = base.v();
            let choices: Vec<usize> = (1..=v - 3).chain([v]).collect();
            let s = choices[rng.below(choices.len())];
            let cert = double(base, s).unwrap();
            assert_eq!(cert.claimed_k, base.claimed_k + (s as u32 - 1) * (r + 1));

            // tripling at r = 3 with random deterministic diagonal size
            let b_choices = [0u32, 9, 12, 21, 30, 33, 42];
            let b = b_choices[rng.below(b_choices.len())];
            let (dt, _) = realize_diagonal_triple(7, b + 7, 1, 50_000).unwrap();
            let pl1 = &p7[rng.below(2)];
            let pl2 = &p7[rng.below(2)];
            let cert = triple_with_diagonal(
                dt.triple(),
                AgreementLine::SecondaryDiagonal,
                pl1,
                pl2,
                &f3,
            )
            .unwrap();
            assert_eq!(
                cert.claimed_k,
                pl1.common().unwrap().len() as u32 + pl2.common().unwrap().len() as u32 + 4 + b
            );
        }
    }
}
