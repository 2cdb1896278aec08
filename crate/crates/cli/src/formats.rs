//! File formats: structured-object (JSON) encodings of the core types,
//! with loaders that re-validate everything on the way in.
//!
//! - Triple system: `{"v": int, "blocks": [[int,int,int], ...]}`,
//!   0-based points.
//! - Certificate: `{"v": int, "flower_point": int, "claimed_k": int,
//!   "systems": [blocks, blocks, blocks]}`.
//! - Latin square: `{"n": int, "rows": [[int, ...], ...]}`; a triple of
//!   squares bundles three row arrays plus the verified agreement count.
//! - Block design (pairwise balanced / group divisible):
//!   `{"v": int, "blocks": [[int, ...], ...]}` with variable-length
//!   blocks, plus `"groups"` for the group divisible case.
//! - Plan: a tree mirroring [`triplex_core::planner::RealizationPlan`].

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use triplex_core::design::{FlowerCertificate, Point, StsTriple, Triple, TripleSystem};
use triplex_core::latin::{LatinSquare, LatinTriple};
use triplex_core::pbd::{GroupDivisibleDesign, PairwiseBalancedDesign};
use triplex_core::planner::{PlanNode, RealizationPlan};

// ---------------------------------------------------------------------
// Triple systems and certificates.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignFile {
    pub v: usize,
    pub blocks: Vec<Triple>,
}

impl DesignFile {
    pub fn from_system(sys: &TripleSystem) -> Self {
        DesignFile { v: sys.v(), blocks: sys.blocks().to_vec() }
    }

    /// Rebuild and insist on a valid Steiner triple system.
    pub fn into_system(self) -> Result<TripleSystem> {
        let sys = TripleSystem::new(self.v, self.blocks);
        let rep = sys.validate();
        if !rep.ok() {
            bail!("not a valid triple system: {}", rep.summary());
        }
        Ok(sys)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub v: usize,
    pub flower_point: Point,
    pub claimed_k: u32,
    pub systems: [Vec<Triple>; 3],
}

impl CertificateFile {
    pub fn from_certificate(cert: &FlowerCertificate) -> Self {
        let sys = |i: usize| cert.triple.systems[i].blocks().to_vec();
        CertificateFile {
            v: cert.v(),
            flower_point: cert.flower_point,
            claimed_k: cert.claimed_k,
            systems: [sys(0), sys(1), sys(2)],
        }
    }

    /// Rebuild the certificate; verification is the caller's business
    /// (the `verify` command reports invariants one by one).
    pub fn into_certificate(self) -> FlowerCertificate {
        let [a, b, c] = self.systems;
        FlowerCertificate {
            triple: StsTriple::new([
                TripleSystem::new(self.v, a),
                TripleSystem::new(self.v, b),
                TripleSystem::new(self.v, c),
            ]),
            flower_point: self.flower_point,
            claimed_k: self.claimed_k,
        }
    }
}

// ---------------------------------------------------------------------
// Latin squares.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatinSquareFile {
    pub n: usize,
    pub rows: Vec<Vec<u16>>,
}

impl LatinSquareFile {
    pub fn from_square(sq: &LatinSquare) -> Self {
        LatinSquareFile { n: sq.n(), rows: sq.rows() }
    }

    pub fn into_square(self) -> Result<LatinSquare> {
        if self.rows.len() != self.n {
            bail!("declared n = {} but file has {} rows", self.n, self.rows.len());
        }
        LatinSquare::from_rows(self.rows).map_err(|e| anyhow::anyhow!("invalid square: {e:?}"))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatinTripleFile {
    pub n: usize,
    pub squares: [Vec<Vec<u16>>; 3],
    /// Number of cells on which all three squares agree (the pairwise
    /// agreement sets are identical; that is what makes it a triple).
    pub agreement: u32,
}

impl LatinTripleFile {
    pub fn from_triple(t: &LatinTriple) -> Self {
        let rows = |i: usize| t.squares()[i].rows();
        LatinTripleFile {
            n: t.order(),
            squares: [rows(0), rows(1), rows(2)],
            agreement: t.k(),
        }
    }

    pub fn into_triple(self) -> Result<LatinTriple> {
        let [a, b, c] = self.squares;
        let build = |rows: Vec<Vec<u16>>| -> Result<LatinSquare> {
            LatinSquare::from_rows(rows).map_err(|e| anyhow::anyhow!("invalid square: {e:?}"))
        };
        let triple = LatinTriple::new([build(a)?, build(b)?, build(c)?])
            .map_err(|e| anyhow::anyhow!("not a triple with pairwise-identical agreement: {e:?}"))?;
        if triple.k() != self.agreement {
            bail!("file claims agreement {} but squares agree on {} cells", self.agreement, triple.k());
        }
        Ok(triple)
    }
}

// ---------------------------------------------------------------------
// Block designs with variable-length blocks (PBD / GDD).
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockDesignFile {
    pub v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<Point>>>,
    pub blocks: Vec<Vec<Point>>,
}

impl BlockDesignFile {
    pub fn from_gdd(gdd: &GroupDivisibleDesign) -> Self {
        BlockDesignFile {
            v: gdd.v(),
            groups: Some(gdd.groups().to_vec()),
            blocks: gdd.blocks().to_vec(),
        }
    }

    pub fn from_pbd(pbd: &PairwiseBalancedDesign) -> Self {
        BlockDesignFile { v: pbd.v(), groups: None, blocks: pbd.blocks().to_vec() }
    }

    /// Rebuild as a group divisible design and audit it.
    pub fn into_gdd(self) -> Result<GroupDivisibleDesign> {
        let groups = self.groups.context("file has no \"groups\"; not a group divisible design")?;
        let gdd = GroupDivisibleDesign::new(self.v, groups, self.blocks);
        let rep = gdd.validate();
        if !rep.ok() {
            bail!("invalid group divisible design: {}", rep.summary());
        }
        Ok(gdd)
    }

    /// Rebuild as a pairwise balanced design and audit it.
    pub fn into_pbd(self) -> Result<PairwiseBalancedDesign> {
        if self.groups.is_some() {
            bail!("file has \"groups\"; load it as a group divisible design instead");
        }
        let sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        let pbd = PairwiseBalancedDesign::new(self.v, sizes, self.blocks);
        let rep = pbd.validate();
        if !rep.ok() {
            bail!("invalid pairwise balanced design: {}", rep.summary());
        }
        Ok(pbd)
    }
}

// ---------------------------------------------------------------------
// Plans.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanFile {
    pub r: usize,
    pub k: u32,
    pub node: PlanNodeFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum PlanNodeFile {
    Leaf {
        method: String,
    },
    TripleWithDiagonal {
        b: u32,
        a1: u32,
        a2: u32,
        a: u32,
        children: Vec<PlanFile>,
    },
    Expand3r {
        b: u32,
        parts: [u32; 3],
        children: Vec<PlanFile>,
    },
    Expand3r1 {
        b: u32,
        parts: [u32; 3],
        children: Vec<PlanFile>,
    },
    Double {
        s: usize,
        child: Box<PlanFile>,
    },
    PbdCompose {
        t: usize,
        assignments: Vec<u32>,
        children: Vec<PlanFile>,
    },
}

impl PlanFile {
    pub fn from_plan(plan: &RealizationPlan) -> Self {
        let kids = |children: &[RealizationPlan]| children.iter().map(Self::from_plan).collect();
        let node = match &plan.node {
            PlanNode::Leaf { method } => PlanNodeFile::Leaf { method: method.clone() },
            PlanNode::TripleWithDiagonal { b, a1, a2, a, children } => {
                PlanNodeFile::TripleWithDiagonal {
                    b: *b,
                    a1: *a1,
                    a2: *a2,
                    a: *a,
                    children: kids(children),
                }
            }
            PlanNode::Expand3r { b, parts, children } => {
                PlanNodeFile::Expand3r { b: *b, parts: *parts, children: kids(children) }
            }
            PlanNode::Expand3r1 { b, parts, children } => {
                PlanNodeFile::Expand3r1 { b: *b, parts: *parts, children: kids(children) }
            }
            PlanNode::Double { s, child } => {
                PlanNodeFile::Double { s: *s, child: Box::new(Self::from_plan(child)) }
            }
            PlanNode::PbdCompose { t, assignments, children } => PlanNodeFile::PbdCompose {
                t: *t,
                assignments: assignments.clone(),
                children: kids(children),
            },
        };
        PlanFile { r: plan.r, k: plan.k, node }
    }
}

// ---------------------------------------------------------------------
// Loading and saving.
// ---------------------------------------------------------------------

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .with_context(|| format!("cannot encode {}", path.display()))?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Load and validate a triple system from a design file.
pub fn load_design(path: &Path) -> Result<TripleSystem> {
    read_json::<DesignFile>(path)?.into_system()
}

/// Load a certificate file (validation happens in the verifier).
pub fn load_certificate(path: &Path) -> Result<FlowerCertificate> {
    Ok(read_json::<CertificateFile>(path)?.into_certificate())
}

/// Load and audit a group divisible design.
pub fn load_gdd(path: &Path) -> Result<GroupDivisibleDesign> {
    read_json::<BlockDesignFile>(path)?.into_gdd()
}

/// Load and re-check a Latin triple.
pub fn load_latin_triple(path: &Path) -> Result<LatinTriple> {
    read_json::<LatinTripleFile>(path)?.into_triple()
}
