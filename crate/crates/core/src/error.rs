// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // graph construction
    #[error("invalid adjacency: {0}")]
    InvalidGraph(String),
    #[error("coupling must be a finite non-negative number, got {0}")]
    NegativeCoupling(f64),
    #[error("infeasible SRG parameters ({n},{kappa},{lambda},{mu}): {reason}")]
    InfeasibleParams {
        n: usize,
        kappa: usize,
        lambda: usize,
        mu: usize,
        reason: &'static str,
    },

    // SRG classification
    #[error("graph is not regular (vertex {vertex} has degree {degree}, expected {expected})")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("graph is not strongly regular: {0}")]
    NotStronglyRegular(String),
    #[error("graph is complete or edgeless")]
    Degenerate,
    #[error("graph is disconnected")]
    Disconnected,

    // graph6
    #[error("line {line}: malformed graph6 header")]
    MalformedHeader { line: usize },
    #[error("line {line}: graph6 bitstream truncated (expected {expected} bytes, found {found})")]
    TruncatedBitstream {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: graph6 bitstream has {extra} trailing bytes")]
    TrailingBytes { line: usize, extra: usize },
    #[error("line {line}: byte {byte:#04x} outside the graph6 alphabet")]
    InvalidByte { line: usize, byte: u8 },
    #[error("line {line}: non-zero graph6 padding bits")]
    NonCanonicalPadding { line: usize },
    #[error("graph order {0} exceeds the graph6 range")]
    OrderTooLarge(usize),

    // families
    #[error("family size too small: {0}")]
    SizeTooSmall(String),
    #[error("generated graph has parameters {found}, expected {expected}")]
    FamilyMismatch { expected: String, found: String },
    #[error("no closed forms are available for family {0}")]
    UnsupportedFamily(String),

    // stratification
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    RootOutOfRange { vertex: usize, n: usize },
    #[error("expected three strata, found {0}")]
    NotThreeStrata(usize),
    #[error("stratified block identity violated: {0}")]
    BlockSumViolation(&'static str),
    #[error("joint diagonalization failed: {0}")]
    JointDiagonalizationFailure(String),
    #[error("paired block has negative discriminant {0}")]
    NegativeDiscriminant(f64),
    #[error("cross coupling of a paired block must be positive, got {0}")]
    InvalidLambda12(f64),

    // entanglement
    #[error("Schur block is singular or not positive definite")]
    SingularBlock,
    #[error("matrix dimensions do not agree: {0}")]
    DimensionMismatch(String),
    #[error("Schmidt number {0} outside [0, 1)")]
    DOutOfRange(f64),
    #[error("Mehler grid too coarse: top coefficient {found} vs {expected}")]
    GridTooCoarse { found: f64, expected: f64 },
    #[error("invalid Mehler grid: {0}")]
    InvalidGrid(String),
    #[error("area-law case requires kappa = mu, got kappa={kappa}, mu={mu}")]
    CaseMismatch { kappa: usize, mu: usize },
    #[error("subset must be a nonempty proper subset of the vertices")]
    EmptyOrFullSubset,
    #[error("exponent matrix is not positive definite (smallest eigenvalue {0})")]
    NotPositiveDefinite(f64),
    #[error("partition {0} is not supported by this operation")]
    UnsupportedPartition(String),
    #[error("unknown partition {0:?}; expected 1:23, 12:3 or 13:2")]
    InvalidPartition(String),

    // signatures
    #[error("A12 signature identity violated: {0}")]
    SignatureInvariant(String),
    #[error("catalog mixes parameter sets {first} and {other}")]
    MixedParameters { first: String, other: String },
    #[error("catalog is empty")]
    EmptyCatalog,
}

impl Error {
    /// Stable variant name, used by the CLI and the C ABI for
    /// machine-parsable diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::NegativeCoupling(_) => "NegativeCoupling",
            Error::InfeasibleParams { .. } => "InfeasibleParams",
            Error::NotRegular { .. } => "NotRegular",
            Error::NotStronglyRegular(_) => "NotStronglyRegular",
            Error::Degenerate => "Degenerate",
            Error::Disconnected => "Disconnected",
            Error::MalformedHeader { .. } => "MalformedHeader",
            Error::TruncatedBitstream { .. } => "TruncatedBitstream",
            Error::TrailingBytes { .. } => "TrailingBytes",
            Error::InvalidByte { .. } => "InvalidByte",
            Error::NonCanonicalPadding { .. } => "NonCanonicalPadding",
            Error::OrderTooLarge(_) => "OrderTooLarge",
            Error::SizeTooSmall(_) => "SizeTooSmall",
            Error::FamilyMismatch { .. } => "FamilyMismatch",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::RootOutOfRange { .. } => "RootOutOfRange",
            Error::NotThreeStrata(_) => "NotThreeStrata",
            Error::BlockSumViolation(_) => "BlockSumViolation",
            Error::JointDiagonalizationFailure(_) => "JointDiagonalizationFailure",
            Error::NegativeDiscriminant(_) => "NegativeDiscriminant",
            Error::InvalidLambda12(_) => "InvalidLambda12",
            Error::SingularBlock => "SingularBlock",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DOutOfRange(_) => "DOutOfRange",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::CaseMismatch { .. } => "CaseMismatch",
            Error::EmptyOrFullSubset => "EmptyOrFullSubset",
            Error::NotPositiveDefinite(_) => "NotPositiveDefinite",
            Error::UnsupportedPartition(_) => "UnsupportedPartition",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::SignatureInvariant(_) => "SignatureInvariant",
            Error::MixedParameters { .. } => "MixedParameters",
            Error::EmptyCatalog => "EmptyCatalog",
        }
    }
}
