//! Certificates: serializable, independently checkable non-conjugacy
//! witnesses.
//!
//! A certificate stores generator images only. The verifier recomputes
//! everything else (word images, wreath lifts of sub-witnesses) and then
//! runs the recorded verification mode.

mod text;
mod verify;

pub use text::{emit, parse};
pub use verify::{double_coset_table, verify, verify_free_tree, verify_surface};

use crate::error::Result;
use crate::pgroups::{GroupExpr, PElement, PHom};
use crate::schreier::ExponentHom;
use crate::words::{Alphabet, Word};

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("respk ", env!("CARGO_PKG_VERSION"));

/// Which step of the free-group construction produced a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeStep {
    Identity,
    Cyclic,
    Homology,
    Induced,
}

impl FreeStep {
    pub fn name(self) -> &'static str {
        match self {
            FreeStep::Identity => "identity",
            FreeStep::Cyclic => "cyclic",
            FreeStep::Homology => "homology",
            FreeStep::Induced => "induced",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [FreeStep::Identity, FreeStep::Cyclic, FreeStep::Homology, FreeStep::Induced]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// One level of a free-group separation: the pair, the homomorphism on
/// `F(rank)`, and for induced nodes the descent data and sub-witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeNode {
    pub rank: usize,
    pub g: Word,
    pub h: Word,
    pub step: FreeStep,
    pub target: GroupExpr,
    pub images: Vec<PElement>,
    pub lift: Option<FreeLift>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLift {
    pub mu: ExponentHom,
    /// Whether `g` and `h` were exchanged before the descent.
    pub swapped: bool,
    pub i0: u64,
    /// Child `i` separates `(g_{i0}, h_i)` in the kernel of `mu`.
    pub children: Vec<FreeNode>,
}

impl FreeNode {
    pub fn hom(&self, p: u32) -> Result<PHom> {
        PHom::new(p, self.target.clone(), self.images.clone())
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.lift.as_ref().map_or(0, |l| l.children.iter().map(FreeNode::size).sum())
    }

    pub fn depth(&self) -> usize {
        self.lift.as_ref().map_or(0, |l| 1 + l.children.iter().map(FreeNode::depth).max().unwrap_or(0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    FullEnumeration,
    Compositional,
    Table,
}

impl VerifyMode {
    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::FullEnumeration => "full-enumeration",
            VerifyMode::Compositional => "compositional",
            VerifyMode::Table => "table",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [VerifyMode::FullEnumeration, VerifyMode::Compositional, VerifyMode::Table].into_iter().find(|m| m.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    pub outcome: Outcome,
    /// Elementary comparisons performed (image elements, table cells, nodes).
    pub checks: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn summary(&self) -> String {
        match &self.outcome {
            Outcome::Pass => format!("pass (mode {}, {} checks)", self.mode.name(), self.checks),
            Outcome::Fail(why) => format!("fail (mode {}): {why}", self.mode.name()),
        }
    }
}

/// The verification mode that ran when the certificate was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub mode: VerifyMode,
    pub cap: usize,
    pub outcome: String,
}

impl Record {
    pub fn from_report(report: &VerifyReport, cap: usize) -> Self {
        let outcome = match &report.outcome {
            Outcome::Pass => "pass".to_string(),
            Outcome::Fail(_) => "fail".to_string(),
        };
        Record { mode: report.mode, cap, outcome }
    }
}

/// A homomorphism `F(2n) → target` given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorImages {
    pub target: GroupExpr,
    pub images: Vec<PElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    /// `φ(g) ≁ φ(h)` in a finite p-group.
    Free { alphabet: Alphabet, root: FreeNode },
    /// `φ(γ)^a φ(g) ≠ φ(h) φ(γ)^b` for all `a, b`, with `φ(γ)` of order
    /// `modulus`.
    DoubleCoset {
        /// `F(x1, y1, …, xn, yn)`.
        n: usize,
        g: Word,
        h: Word,
        target: GroupExpr,
        images: Vec<PElement>,
        modulus: u64,
    },
    /// Non-conjugacy in the amalgam `P1 *_C P2` of finite p-groups. Words
    /// are over `x1, y1, …, x'1, y'1, …` (factor 1 first); the surface
    /// genus is `2n`.
    Surface { n: usize, g: Word, h: Word, factors: [FactorImages; 2], gamma_order: u64 },
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Free { .. } => "free-separation",
            Body::DoubleCoset { .. } => "double-coset",
            Body::Surface { .. } => "surface-separation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub tool: String,
    pub p: u32,
    pub body: Body,
    pub record: Record,
}

/// Alphabet of the combined surface words: factor 1 then factor 2.
pub fn surface_alphabet(genus: usize) -> Alphabet {
    let names: Vec<String> =
        Alphabet::surface(genus, false).names().iter().chain(Alphabet::surface(genus, true).names()).cloned().collect();
    Alphabet::new(names).expect("surface names are distinct")
}

impl Certificate {
    pub fn free(p: u32, alphabet: Alphabet, root: FreeNode, report: &VerifyReport, cap: usize) -> Self {
        Certificate {
            tool: TOOL_VERSION.to_string(),
            p,
            body: Body::Free { alphabet, root },
            record: Record::from_report(report, cap),
        }
    }

    pub fn double_coset(p: u32, n: usize, g: Word, h: Word, hom: &PHom, modulus: u64, cap: usize) -> Self {
        Certificate {
            tool: TOOL_VERSION.to_string(),
            p,
            body: Body::DoubleCoset { n, g, h, target: hom.target().clone(), images: hom.images().to_vec(), modulus },
            record: Record { mode: VerifyMode::Table, cap, outcome: "pass".into() },
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn surface(
        p: u32,
        n: usize,
        g: Word,
        h: Word,
        factors: [FactorImages; 2],
        gamma_order: u64,
        report: &VerifyReport,
        cap: usize,
    ) -> Self {
        Certificate {
            tool: TOOL_VERSION.to_string(),
            p,
            body: Body::Surface { n, g, h, factors, gamma_order },
            record: Record::from_report(report, cap),
        }
    }
}
