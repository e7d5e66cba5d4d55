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

//! Entanglement between strata of strongly regular graphs of coupled
//! harmonic oscillators.
//!
//! A graph on `n` vertices with Laplacian `L` and coupling `g >= 0` defines
//! a Gaussian ground state with exponent matrix `V = I + 2 g L`. For a
//! strongly regular graph the distance partition from any root vertex block
//! diagonalizes the adjacency, which gives closed forms for the Schmidt
//! spectrum across every cut between the three strata. The singular values
//! of the root-to-far coupling block also form a graph invariant that can
//! separate co-spectral SRGs.

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod graph6;
pub mod linalg;
pub mod signature;
pub mod stratification;

pub use entanglement::{
    bipartite_entanglement, strata_entanglement, Convention, CouplingConfig, EntanglementReport,
    LogBase, Partition,
};
pub use error::{Error, Result};
pub use families::Family;
pub use graph::{laplacian, potential, srg_params, Graph, PotentialMatrix, SrgParams};
pub use graph6::{parse_graph6, write_graph6};
pub use signature::{
    a12_signature, canonical_signature, distinguish, scan_catalog, A12Signature, Outcome, Verdict,
};
pub use stratification::{
    block_diagonalize, block_form, extract_blocks, first_stratum_block, stratify,
    BlockDiagonalization, FirstStratumBlock, Stratification, StratifiedBlocks, TwoByTwoBlock,
};
