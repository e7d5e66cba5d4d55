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

//! Ground-state entanglement of oscillator networks.
//!
//! The ground state is `exp(-x^T W x / 2)` with `W = V = I + 2gL` (the
//! default, [`Convention::Paper`]) or `W = V^{1/2}` ([`Convention::Physical`]).
//! For a bipartition `A | B` the Schmidt numbers `d_i` are the singular
//! values of `W_AA^{-1/2} W_AB W_BB^{-1/2}`. Each mode contributes
//! `gamma = 1/sqrt(1-d^2)` and entropy
//! `S = ((gamma+1)/2) ln((gamma+1)/2) - ((gamma-1)/2) ln((gamma-1)/2)`.
//!
//! Entropies are in nats unless [`LogBase::Bits`] is requested.

mod closed_form;
mod family;
mod mehler;

pub use closed_form::{
    area_law_gamma, block_schmidt, block_schmidt_with, closed_form_schmidt,
    closed_form_schmidt_with, large_g_entropy, pair_sector_schmidt, predicted_spectrum,
    sector_schmidt, AreaLawCase, AsymptoticEntropy, FormulaVariant,
};
pub use family::{family_closed_forms, FamilyRow, FamilyTable, RowKind};
pub use mehler::{
    geometric_coefficients, mehler_oracle, mehler_oracle_auto, shannon_entropy,
    DEFAULT_GRID_HALFWIDTH, DEFAULT_GRID_POINTS,
};

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_coupling, laplacian, Graph};
use crate::linalg::{ones_complement, singular_values_desc, sym_apply, sym_eigen_desc};
use crate::stratification::stratify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    /// Factor converting an entropy in nats to this base.
    pub fn scale(self) -> f64 {
        match self {
            LogBase::Nats => 1.0,
            LogBase::Bits => std::f64::consts::LOG2_E,
        }
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nats" | "natural" | "e" => Ok(LogBase::Nats),
            "bits" | "base2" | "2" => Ok(LogBase::Bits),
            _ => Err(format!("unknown log base {s:?}; expected nats or bits")),
        }
    }
}

/// Which matrix plays the role of the Gaussian exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `W = I + 2gL`.
    #[default]
    Paper,
    /// `W = (I + 2gL)^{1/2}`, the textbook harmonic ground state.
    Physical,
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" => Ok(Convention::Paper),
            "physical" => Ok(Convention::Physical),
            _ => Err(format!(
                "unknown convention {s:?}; expected paper or physical"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingConfig {
    pub g: f64,
    pub log_base: LogBase,
    pub convention: Convention,
}

impl CouplingConfig {
    pub fn new(g: f64) -> Result<Self> {
        check_coupling(g)?;
        Ok(CouplingConfig {
            g,
            log_base: LogBase::Nats,
            convention: Convention::Paper,
        })
    }

    pub fn with_log_base(mut self, base: LogBase) -> Self {
        self.log_base = base;
        self
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeEntanglement {
    pub d: f64,
    pub gamma: f64,
    /// In the configured log base.
    pub entropy: f64,
}

/// Entropy in nats of a single mode with the given `gamma`.
///
/// Evaluated as `ln a + b ln(1 + 1/b)` with `a = (gamma+1)/2`,
/// `b = (gamma-1)/2`, which is algebraically equal to `a ln a - b ln b` but
/// stays accurate for large `gamma`.
pub fn entropy_from_gamma(gamma: f64) -> f64 {
    if gamma <= 1.0 {
        return 0.0;
    }
    let a = (gamma + 1.0) / 2.0;
    let b = (gamma - 1.0) / 2.0;
    a.ln() + b * (1.0 / b).ln_1p()
}

pub fn gamma_from_d(d: f64) -> f64 {
    1.0 / ((1.0 - d) * (1.0 + d)).sqrt()
}

/// `(d, gamma, S)` for one Schmidt number.
pub fn mode_entropy(d: f64, base: LogBase) -> Result<ModeEntanglement> {
    if !(0.0..1.0).contains(&d) {
        return Err(Error::DOutOfRange(d));
    }
    let gamma = gamma_from_d(d);
    Ok(ModeEntanglement {
        d,
        gamma,
        entropy: entropy_from_gamma(gamma) * base.scale(),
    })
}

/// `v11 - v12 v22^{-1} v12^T`.
pub fn schur_reduce(
    v11: &DMatrix<f64>,
    v12: &DMatrix<f64>,
    v22: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let (p, q) = v12.shape();
    if v11.shape() != (p, p) || v22.shape() != (q, q) {
        return Err(Error::DimensionMismatch(format!(
            "v11 {:?}, v12 {:?}, v22 {:?}",
            v11.shape(),
            v12.shape(),
            v22.shape()
        )));
    }
    if q == 0 {
        return Ok(v11.clone());
    }
    let chol = v22.clone().cholesky().ok_or(Error::SingularBlock)?;
    let x = chol.solve(&v12.transpose());
    let out = v11 - v12 * x;
    Ok((&out + out.transpose()) * 0.5)
}

/// Bipartitions of the three strata `{root}`, `Gamma_1`, `Gamma_2`, named
/// by which strata form side A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Partition {
    #[serde(rename = "1:23")]
    OneVsTwoThree,
    #[serde(rename = "12:3")]
    OneTwoVsThree,
    #[serde(rename = "13:2")]
    OneThreeVsTwo,
}

impl Partition {
    pub const ALL: [Partition; 3] = [
        Partition::OneVsTwoThree,
        Partition::OneTwoVsThree,
        Partition::OneThreeVsTwo,
    ];

    /// Strata indices (0 = root) on side A.
    pub fn side_a(self) -> &'static [usize] {
        match self {
            Partition::OneVsTwoThree => &[0],
            Partition::OneTwoVsThree => &[0, 1],
            Partition::OneThreeVsTwo => &[0, 2],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Partition::OneVsTwoThree => "1:23",
            Partition::OneTwoVsThree => "12:3",
            Partition::OneThreeVsTwo => "13:2",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1:23" => Ok(Partition::OneVsTwoThree),
            "12:3" => Ok(Partition::OneTwoVsThree),
            "13:2" => Ok(Partition::OneThreeVsTwo),
            _ => Err(Error::InvalidPartition(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionSpec {
    Strata { root: usize, partition: Partition },
    Subset(Vec<usize>),
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionSpec::Strata { partition, .. } => write!(f, "{partition}"),
            PartitionSpec::Subset(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub partition: PartitionSpec,
    pub g: f64,
    pub convention: Convention,
    pub log_base: LogBase,
    /// Sorted by descending `d`; one entry per mode of the smaller side.
    pub modes: Vec<ModeEntanglement>,
    pub total_entropy: f64,
}

impl EntanglementReport {
    pub fn d_spectrum(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.d).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Writes sweep rows `g, partition, mode_index, d, gamma, entropy_nats,
/// total_entropy` with a header. Entropies are converted to nats.
pub fn write_sweep_csv<W: Write>(out: W, reports: &[EntanglementReport]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "g",
        "partition",
        "mode_index",
        "d",
        "gamma",
        "entropy_nats",
        "total_entropy",
    ])?;
    for r in reports {
        let to_nats = 1.0 / r.log_base.scale();
        let total = crate::format::sig(r.total_entropy * to_nats);
        for (i, m) in r.modes.iter().enumerate() {
            w.write_record([
                crate::format::sig(r.g),
                r.partition.to_string(),
                i.to_string(),
                crate::format::sig(m.d),
                crate::format::sig(m.gamma),
                crate::format::sig(m.entropy * to_nats),
                total.clone(),
            ])?;
        }
    }
    w.flush()
}

/// Spectral data of the exponent matrix, built from the Laplacian with the
/// all-ones direction deflated exactly so `W^{-1}` has no cancellation in
/// its zero-mode part.
struct ExponentSpectrum {
    n: usize,
    w: DMatrix<f64>,
    /// Non-zero-mode eigenvectors (columns) of `L`.
    vectors: DMatrix<f64>,
    /// Eigenvalues of `W` on those vectors.
    weights: Vec<f64>,
}

impl ExponentSpectrum {
    fn new(graph: &Graph, config: &CouplingConfig) -> Result<Self> {
        check_coupling(config.g)?;
        let n = graph.order();
        let l = laplacian(graph).map(|x| x as f64);
        let q = ones_complement(n);
        let (theta, p) = sym_eigen_desc(&(q.transpose() * &l * &q));
        let vectors = &q * p;
        let g = config.g;
        let weights: Vec<f64> = theta
            .iter()
            .map(|&t| {
                let v = 1.0 + 2.0 * g * t.max(0.0);
                match config.convention {
                    Convention::Paper => v,
                    Convention::Physical => v.sqrt(),
                }
            })
            .collect();
        let w = match config.convention {
            Convention::Paper => DMatrix::identity(n, n) + l * (2.0 * g),
            Convention::Physical => {
                let mut w = DMatrix::from_element(n, n, 1.0 / n as f64);
                for (k, &wk) in weights.iter().enumerate() {
                    let col = vectors.column(k);
                    w += (col * col.transpose()) * wk;
                }
                (&w + w.transpose()) * 0.5
            }
        };
        Ok(ExponentSpectrum {
            n,
            w,
            vectors,
            weights,
        })
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.w[(rows[i], cols[j])])
    }

    /// `(W^{-1})[idx, idx]`.
    fn inverse_block(&self, idx: &[usize]) -> DMatrix<f64> {
        let m = idx.len();
        let u = DMatrix::from_fn(m, self.weights.len(), |i, k| {
            self.vectors[(idx[i], k)] / self.weights[k].sqrt()
        });
        let inv = DMatrix::from_element(m, m, 1.0 / self.n as f64) + &u * u.transpose();
        (&inv + inv.transpose()) * 0.5
    }
}

fn inverse_sqrt_checked(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, _) = sym_eigen_desc(m);
    let min = vals.last().copied().unwrap_or(1.0);
    if min <= 0.0 || !min.is_finite() {
        return Err(Error::NotPositiveDefinite(min));
    }
    Ok(sym_apply(m, |x| 1.0 / x.sqrt()))
}

/// Singular values of `W_AA^{-1/2} W_AB W_BB^{-1/2}` for an arbitrary
/// symmetric positive-definite `w`, descending, `min(|A|, |B|)` of them.
pub fn whitened_schmidt(w: &DMatrix<f64>, a: &[usize], b: &[usize]) -> Result<Vec<f64>> {
    let sub = |r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |i, j| w[(r[i], c[j])]);
    let ia = inverse_sqrt_checked(&sub(a, a))?;
    let ib = inverse_sqrt_checked(&sub(b, b))?;
    Ok(singular_values_desc(&(ia * sub(a, b) * ib)))
}

fn split_subset(n: usize, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if let Some(&v) = subset.iter().find(|&&v| v >= n) {
        return Err(Error::RootOutOfRange { vertex: v, n });
    }
    let a: BTreeSet<usize> = subset.iter().copied().collect();
    if a.is_empty() || a.len() == n {
        return Err(Error::EmptyOrFullSubset);
    }
    let b = (0..n).filter(|v| !a.contains(v)).collect();
    Ok((a.into_iter().collect(), b))
}

/// Above this Schmidt number `gamma` is taken from the eigenvalues of
/// `W_AA^{1/2} (W^{-1})_AA W_AA^{1/2} = (I - C C^T)^{-1}`, which avoids
/// forming `1 - d^2`.
const GAMMA_FROM_INVERSE_ABOVE: f64 = 0.5;

fn mode_spectrum(
    graph: &Graph,
    a: &[usize],
    b: &[usize],
    config: &CouplingConfig,
) -> Result<Vec<ModeEntanglement>> {
    let spectrum = ExponentSpectrum::new(graph, config)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let w_ss = spectrum.block(small, small);
    let ds = whitened_schmidt(&spectrum.w, small, large)?;

    let root = sym_apply(&w_ss, f64::sqrt);
    let (gamma_sq, _) = sym_eigen_desc(&(&root * spectrum.inverse_block(small) * &root));

    let scale = config.log_base.scale();
    ds.iter()
        .zip(&gamma_sq)
        .map(|(&d, &g2)| {
            let (d, gamma) = if d > GAMMA_FROM_INVERSE_ABOVE {
                let gamma = g2.max(1.0).sqrt();
                let d = if d < 1.0 {
                    d
                } else {
                    (1.0 - 1.0 / (gamma * gamma)).sqrt()
                };
                (d, gamma)
            } else {
                (d, gamma_from_d(d))
            };
            if !(0.0..1.0).contains(&d) {
                return Err(Error::DOutOfRange(d));
            }
            Ok(ModeEntanglement {
                d,
                gamma,
                entropy: entropy_from_gamma(gamma) * scale,
            })
        })
        .collect()
}

fn assemble(
    partition: PartitionSpec,
    config: &CouplingConfig,
    modes: Vec<ModeEntanglement>,
) -> EntanglementReport {
    let total_entropy = modes.iter().map(|m| m.entropy).sum();
    EntanglementReport {
        partition,
        g: config.g,
        convention: config.convention,
        log_base: config.log_base,
        modes,
        total_entropy,
    }
}

/// Multimode entanglement between `subset_a` and its complement.
pub fn bipartite_entanglement(
    graph: &Graph,
    subset_a: &[usize],
    config: &CouplingConfig,
) -> Result<EntanglementReport> {
    let (a, b) = split_subset(graph.order(), subset_a)?;
    let modes = mode_spectrum(graph, &a, &b, config)?;
    Ok(assemble(PartitionSpec::Subset(a), config, modes))
}

/// Entanglement across a bipartition of the strata from `root`.
pub fn strata_entanglement(
    graph: &Graph,
    root: usize,
    partition: Partition,
    config: &CouplingConfig,
) -> Result<EntanglementReport> {
    let strat = stratify(graph, root)?;
    if strat.len() != 3 {
        return Err(Error::NotThreeStrata(strat.len()));
    }
    let subset: Vec<usize> = partition
        .side_a()
        .iter()
        .flat_map(|&i| strat.strata[i].iter().copied())
        .collect();
    let (a, b) = split_subset(graph.order(), &subset)?;
    let modes = mode_spectrum(graph, &a, &b, config)?;
    Ok(assemble(
        PartitionSpec::Strata { root, partition },
        config,
        modes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn mode_entropy_examples() {
        let m = mode_entropy(0.0, LogBase::Nats).unwrap();
        assert_eq!((m.gamma, m.entropy), (1.0, 0.0));
        let m = mode_entropy(0.6, LogBase::Nats).unwrap();
        assert!(close(m.gamma, 1.25, 1e-14));
        let want = 1.125 * 1.125f64.ln() - 0.125 * 0.125f64.ln();
        assert!(close(m.entropy, want, 1e-14));
        assert!(close(m.entropy, 0.392436, 1e-6));
        let bits = mode_entropy(0.6, LogBase::Bits).unwrap();
        assert!(close(bits.entropy, want / std::f64::consts::LN_2, 1e-14));
        assert_eq!(
            mode_entropy(1.0, LogBase::Nats),
            Err(Error::DOutOfRange(1.0))
        );
        assert_eq!(
            mode_entropy(-0.1, LogBase::Nats),
            Err(Error::DOutOfRange(-0.1))
        );
    }

    #[test]
    fn entropy_is_monotone_and_log_like() {
        let mut prev = 0.0;
        for i in 1..1000 {
            let s = mode_entropy(i as f64 / 1000.0, LogBase::Nats)
                .unwrap()
                .entropy;
            assert!(s > prev);
            prev = s;
        }
        // S ~ ln(gamma/2) + 1 for large gamma
        let g = 1e6;
        assert!(close(entropy_from_gamma(g), (g / 2.0).ln() + 1.0, 1e-9));
    }

    #[test]
    fn schur_examples() {
        let v11 = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let v12 = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let v22 = DMatrix::from_row_slice(1, 1, &[2.0]);
        let r = schur_reduce(&v11, &v12, &v22).unwrap();
        assert!((r - DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.5])).amax() < 1e-15);
        let zero = DMatrix::zeros(2, 1);
        assert_eq!(schur_reduce(&v11, &zero, &v22).unwrap(), v11);
        assert_eq!(
            schur_reduce(&v11, &v12, &DMatrix::zeros(1, 1)),
            Err(Error::SingularBlock)
        );
        assert!(matches!(
            schur_reduce(&v11, &v12, &DMatrix::zeros(2, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn partition_parsing() {
        for p in Partition::ALL {
            assert_eq!(p.label().parse::<Partition>().unwrap(), p);
        }
        assert_eq!(
            "2:13".parse::<Partition>(),
            Err(Error::InvalidPartition("2:13".into()))
        );
    }

    #[test]
    fn root_cut_matches_closed_form() {
        let g = Family::Petersen.generate().unwrap();
        let p = crate::graph::srg_params(&g).unwrap();
        let cfg = CouplingConfig::new(1.0).unwrap();
        let r = bipartite_entanglement(&g, &[0], &cfg).unwrap();
        assert_eq!(r.modes.len(), 1);
        let want = closed_form_schmidt(&p, 1.0, Partition::OneVsTwoThree);
        assert!(close(r.modes[0].d, want, 1e-12));
        assert!(close(r.total_entropy, r.modes[0].entropy, 0.0));
    }

    #[test]
    fn zero_coupling_is_product() {
        let g = Family::Lattice(3).generate().unwrap();
        let r = bipartite_entanglement(&g, &[0, 1, 5], &CouplingConfig::new(0.0).unwrap()).unwrap();
        assert!(r
            .modes
            .iter()
            .all(|m| m.d.abs() < 1e-14 && m.entropy == 0.0));
        assert_eq!(r.total_entropy, 0.0);
    }

    #[test]
    fn subset_errors() {
        let g = Family::Petersen.generate().unwrap();
        let cfg = CouplingConfig::new(1.0).unwrap();
        assert_eq!(
            bipartite_entanglement(&g, &[], &cfg),
            Err(Error::EmptyOrFullSubset)
        );
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(
            bipartite_entanglement(&g, &all, &cfg),
            Err(Error::EmptyOrFullSubset)
        );
        assert_eq!(
            bipartite_entanglement(&g, &[12], &cfg),
            Err(Error::RootOutOfRange { vertex: 12, n: 10 })
        );
        assert_eq!(
            CouplingConfig::new(-1.0),
            Err(Error::NegativeCoupling(-1.0))
        );
    }

    #[test]
    fn physical_convention_differs_but_is_valid() {
        let g = Family::CompleteBipartite(3).generate().unwrap();
        let paper = bipartite_entanglement(&g, &[0], &CouplingConfig::new(1.0).unwrap()).unwrap();
        let phys_cfg = CouplingConfig::new(1.0)
            .unwrap()
            .with_convention(Convention::Physical);
        let phys = bipartite_entanglement(&g, &[0], &phys_cfg).unwrap();
        assert!(phys.modes[0].d > 0.0 && phys.modes[0].d < paper.modes[0].d);
    }

    #[test]
    fn sweep_csv_layout() {
        let g = Family::Petersen.generate().unwrap();
        let cfg = CouplingConfig::new(1.0).unwrap();
        let r = strata_entanglement(&g, 0, Partition::OneVsTwoThree, &cfg).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "g,partition,mode_index,d,gamma,entropy_nats,total_entropy"
        );
        assert!(lines.next().unwrap().starts_with("1,1:23,0,"));
    }

    fn arb_subset() -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::btree_set(0usize..16, 1..15).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn complement_has_same_spectrum(subset in arb_subset(), g in 0.01f64..20.0) {
            let graph = Family::Shrikhande.generate().unwrap();
            let cfg = CouplingConfig::new(g).unwrap();
            let a = bipartite_entanglement(&graph, &subset, &cfg).unwrap();
            let comp: Vec<usize> = (0..16).filter(|v| !subset.contains(v)).collect();
            let b = bipartite_entanglement(&graph, &comp, &cfg).unwrap();
            prop_assert_eq!(a.modes.len(), b.modes.len());
            for (x, y) in a.modes.iter().zip(&b.modes) {
                prop_assert!((x.d - y.d).abs() < 1e-10);
            }
            prop_assert!((a.total_entropy - b.total_entropy).abs() < 1e-9);
        }

        #[test]
        fn modes_grow_with_coupling(subset in arb_subset(), g in 0.01f64..10.0) {
            let graph = Family::Lattice(4).generate().unwrap();
            let lo = bipartite_entanglement(&graph, &subset, &CouplingConfig::new(g).unwrap()).unwrap();
            let hi = bipartite_entanglement(&graph, &subset, &CouplingConfig::new(g * 1.5).unwrap()).unwrap();
            for (x, y) in lo.modes.iter().zip(&hi.modes) {
                prop_assert!(y.d + 1e-12 >= x.d);
            }
        }

        #[test]
        fn relabeling_preserves_spectrum(seed in any::<u64>(), g in 0.1f64..5.0) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let graph = Family::Triangular(5).generate().unwrap();
            let mut perm: Vec<usize> = (0..10).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let moved = graph.relabel(&perm).unwrap();
            let cfg = CouplingConfig::new(g).unwrap();
            let subset = [0usize, 3, 4];
            let mapped: Vec<usize> = subset.iter().map(|&v| perm[v]).collect();
            let a = bipartite_entanglement(&graph, &subset, &cfg).unwrap();
            let b = bipartite_entanglement(&moved, &mapped, &cfg).unwrap();
            for (x, y) in a.modes.iter().zip(&b.modes) {
                prop_assert!((x.d - y.d).abs() < 1e-10);
            }
        }
    }
}
