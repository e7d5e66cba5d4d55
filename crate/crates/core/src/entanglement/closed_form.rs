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

//! Closed-form Schmidt numbers for strata bipartitions of an SRG in the
//! paper convention `W = I + 2gL = (1 + 2g kappa) I - 2g A`.
//!
//! Products such as `(1+2g mu)(1+2g(kappa-lambda)) - 4g^2 mu (kappa-lambda-1)`
//! are evaluated in expanded form (`1 + 2g(kappa-lambda+mu) + 4g^2 mu`) so
//! that large couplings do not lose digits to cancellation.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{entropy_from_gamma, whitened_schmidt, Partition};
use crate::error::{Error, Result};
use crate::graph::SrgParams;
use crate::stratification::{BlockDiagonalization, FirstStratumBlock, TwoByTwoBlock};

/// Selects between the internally consistent expression and the
/// expression as originally printed, where the two differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    #[default]
    Corrected,
    /// Kept for comparison; can exceed 1 and is not a valid Schmidt number.
    PaperLiteral,
}

struct P {
    k: f64,
    l: f64,
    m: f64,
    far: f64,
}

fn floats(p: &SrgParams) -> P {
    P {
        k: p.kappa as f64,
        l: p.lambda as f64,
        m: p.mu as f64,
        far: p.far_size() as f64,
    }
}

pub fn closed_form_schmidt(params: &SrgParams, g: f64, partition: Partition) -> f64 {
    closed_form_schmidt_with(params, g, partition, FormulaVariant::Corrected)
}

/// First-stratum Schmidt number for `partition`. Only the `13:2` cut has a
/// literal variant (with `kappa^2` in place of `kappa`).
pub fn closed_form_schmidt_with(
    params: &SrgParams,
    g: f64,
    partition: Partition,
    variant: FormulaVariant,
) -> f64 {
    let P { k, l, m, far } = floats(params);
    let g2 = g * g;
    match partition {
        Partition::OneVsTwoThree => {
            let den = 1.0 + 2.0 * g * (k - l + m) + 4.0 * g2 * m;
            2.0 * g * (k * (1.0 + 2.0 * g * m)).sqrt() / ((1.0 + 2.0 * g * k).sqrt() * den.sqrt())
        }
        Partition::OneTwoVsThree => {
            let den = 1.0 + 2.0 * g * (2.0 * k - l) + 4.0 * g2 * k * (k - l - 1.0);
            2.0 * g * m * far.sqrt() * (1.0 + 2.0 * g * k).sqrt()
                / (k.sqrt() * (1.0 + 2.0 * g * m).sqrt() * den.sqrt())
        }
        Partition::OneThreeVsTwo => {
            let kk = match variant {
                FormulaVariant::Corrected => k,
                FormulaVariant::PaperLiteral => k * k,
            };
            let kl = 1.0 + 2.0 * g * (k - l);
            let d2 = 4.0 * g2 * kk / ((1.0 + 2.0 * g * k) * kl)
                + 4.0 * g2 * m * (k - l - 1.0) / ((1.0 + 2.0 * g * m) * kl);
            d2.sqrt()
        }
    }
}

pub fn block_schmidt(block: &TwoByTwoBlock, params: &SrgParams, g: f64) -> f64 {
    block_schmidt_with(block, params, g, FormulaVariant::Corrected)
}

/// Schmidt number of a paired `2x2` sector. Corrected:
/// `2g sqrt(l12) / sqrt((1+2g(kappa-l1))(1+2g(kappa-l2)))`; literal uses
/// `l12 - l_i` in place of `kappa - l_i` (and may be NaN).
pub fn block_schmidt_with(
    block: &TwoByTwoBlock,
    params: &SrgParams,
    g: f64,
    variant: FormulaVariant,
) -> f64 {
    let shift = match variant {
        FormulaVariant::Corrected => params.kappa as f64,
        FormulaVariant::PaperLiteral => block.lambda12,
    };
    let a = 1.0 + 2.0 * g * (shift - block.lambda1);
    let b = 1.0 + 2.0 * g * (shift - block.lambda2);
    2.0 * g * block.lambda12.sqrt() / (a * b).sqrt()
}

/// Numeric Schmidt number of the first-stratum sector: whitened SVD of
/// `(1 + 2g kappa) I - 2g M` on the three stratum unit vectors.
pub fn sector_schmidt(
    first: &FirstStratumBlock,
    kappa: usize,
    g: f64,
    partition: Partition,
) -> Result<f64> {
    let m = first.matrix();
    let diag = 1.0 + 2.0 * g * kappa as f64;
    let w = DMatrix::from_fn(
        3,
        3,
        |i, j| if i == j { diag } else { 0.0 } - 2.0 * g * m[(i, j)],
    );
    let a = partition.side_a();
    let b: Vec<usize> = (0..3).filter(|i| !a.contains(i)).collect();
    Ok(whitened_schmidt(&w, a, &b)?[0])
}

/// Numeric Schmidt number of a paired sector (same matrix path as
/// [`sector_schmidt`]).
pub fn pair_sector_schmidt(block: &TwoByTwoBlock, kappa: usize, g: f64) -> Result<f64> {
    let diag = 1.0 + 2.0 * g * kappa as f64;
    let w = DMatrix::from_row_slice(
        2,
        2,
        &[
            diag - 2.0 * g * block.lambda1,
            -2.0 * g * block.lambda12.sqrt(),
            -2.0 * g * block.lambda12.sqrt(),
            diag - 2.0 * g * block.lambda2,
        ],
    );
    Ok(whitened_schmidt(&w, &[0], &[1])?[0])
}

/// Full closed-form d-spectrum of a strata bipartition: the first-stratum
/// value, every paired-block value with multiplicity, and zeros for the
/// remaining modes of the smaller side. Descending.
pub fn predicted_spectrum(bd: &BlockDiagonalization, g: f64, partition: Partition) -> Vec<f64> {
    let p = &bd.params;
    let (na, nb) = match partition {
        Partition::OneVsTwoThree => (1, p.n - 1),
        Partition::OneTwoVsThree => (1 + p.kappa, p.far_size()),
        Partition::OneThreeVsTwo => (1 + p.far_size(), p.kappa),
    };
    let mut out = vec![closed_form_schmidt(p, g, partition)];
    if partition != Partition::OneVsTwoThree {
        for blk in &bd.pairs {
            let d = block_schmidt(blk, p, g);
            out.extend(std::iter::repeat_n(d, blk.multiplicity));
        }
    }
    out.resize(na.min(nb), 0.0);
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEntropy {
    /// `ln(gamma/2) + 1`, nats.
    pub entropy: f64,
    pub gamma: f64,
    /// Set when the asymptotic `gamma < 2`; the formula is then unreliable.
    pub out_of_regime: bool,
}

/// Large-coupling entropy: `gamma ~ sqrt(2 g B / n)` with boundary
/// `B = kappa` (`1:23`) or `B = mu (n - kappa - 1)` (`12:3`).
pub fn large_g_entropy(
    params: &SrgParams,
    g: f64,
    partition: Partition,
) -> Result<AsymptoticEntropy> {
    crate::graph::check_coupling(g)?;
    let P { k, m, far, .. } = floats(params);
    let n = params.n as f64;
    let boundary = match partition {
        Partition::OneVsTwoThree => k,
        Partition::OneTwoVsThree => m * far,
        Partition::OneThreeVsTwo => return Err(Error::UnsupportedPartition(partition.to_string())),
    };
    let gamma = (2.0 * g * boundary / n).sqrt();
    Ok(AsymptoticEntropy {
        entropy: 0.5 * (g * boundary / (2.0 * n)).ln() + 1.0,
        gamma,
        out_of_regime: gamma < 2.0,
    })
}

impl AsymptoticEntropy {
    /// Exact entropy of a mode with the asymptotic `gamma`, for reference.
    pub fn entropy_at_gamma(&self) -> f64 {
        entropy_from_gamma(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaLawCase {
    FiniteMu,
    KappaEqualsMu,
}

/// `gamma` of the `1:23` cut in the area-law discussion.
///
/// The corrected variant is the exact `1:23` value,
/// `gamma^2 = (1+2g kappa) D / N` with `D = 1 + 2g(kappa-lambda+mu) + 4g^2 mu`.
/// The literal variant reproduces the printed expressions, whose `D` carries
/// an extra factor `mu` (resp. `kappa`) on the linear term.
pub fn area_law_gamma(
    params: &SrgParams,
    g: f64,
    case: AreaLawCase,
    variant: FormulaVariant,
) -> Result<f64> {
    crate::graph::check_coupling(g)?;
    if case == AreaLawCase::KappaEqualsMu && params.kappa != params.mu {
        return Err(Error::CaseMismatch {
            kappa: params.kappa,
            mu: params.mu,
        });
    }
    let P { k, l, m, .. } = floats(params);
    let g2 = g * g;
    let gamma_sq = match variant {
        FormulaVariant::Corrected => {
            let d = 1.0 + 2.0 * g * (k - l + m) + 4.0 * g2 * m;
            let n = 1.0 + 2.0 * g * (2.0 * k - l + m) + 4.0 * g2 * (m + k * (k - l + m) - k);
            (1.0 + 2.0 * g * k) * d / n
        }
        FormulaVariant::PaperLiteral => {
            let (num, den) = match case {
                AreaLawCase::FiniteMu => (
                    4.0 * g2 * k * (1.0 + 2.0 * g * m),
                    1.0 + 4.0 * g2 * m + 2.0 * g * m * (k - l + m),
                ),
                AreaLawCase::KappaEqualsMu => (
                    4.0 * g2 * k * (1.0 + 2.0 * g * k),
                    1.0 + 4.0 * g2 * k + 2.0 * g * k * (2.0 * k - l),
                ),
            };
            (1.0 + 2.0 * g * k) / (1.0 + 2.0 * g * k - num / den)
        }
    };
    Ok(gamma_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::gamma_from_d;
    use crate::families::Family;
    use crate::stratification::{block_form, first_stratum_block};

    fn p(n: usize, k: usize, l: usize, m: usize) -> SrgParams {
        SrgParams::new(n, k, l, m).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn complete_bipartite_root_cut() {
        let d = closed_form_schmidt(&p(6, 3, 0, 3), 1.0, Partition::OneVsTwoThree);
        assert!(close(d, 2.0 * 3f64.sqrt() / 5.0, 1e-15));
        assert!(close(d, 0.69282, 1e-5));
    }

    #[test]
    fn zero_coupling() {
        for part in Partition::ALL {
            assert_eq!(closed_form_schmidt(&p(10, 3, 0, 1), 0.0, part), 0.0);
        }
        let blk = TwoByTwoBlock {
            lambda1: 0.0,
            lambda2: -1.0,
            lambda12: 2.0,
            multiplicity: 1,
        };
        assert_eq!(block_schmidt(&blk, &p(10, 6, 3, 4), 0.0), 0.0);
    }

    #[test]
    fn expanded_denominators_match_products() {
        // the unexpanded textbook expressions at moderate g
        let pr = p(28, 12, 6, 4);
        let (k, l, m, f) = (12.0f64, 6.0f64, 4.0f64, 15.0f64);
        for g in [0.1f64, 1.0, 10.0] {
            let d1 = 2.0 * k.sqrt() * (1.0 + 2.0 * g * m).sqrt() * g
                / ((1.0 + 2.0 * g * k).sqrt()
                    * ((1.0 + 2.0 * g * m) * (1.0 + 2.0 * g * (k - l))
                        - 4.0 * g * g * m * (k - l - 1.0))
                        .sqrt());
            let d2 = 2.0 * g * m * f64::sqrt(f) * (1.0 + 2.0 * g * k).sqrt()
                / (k.sqrt()
                    * (1.0 + 2.0 * g * m).sqrt()
                    * ((1.0 + 2.0 * g * k) * (1.0 + 2.0 * g * (k - l)) - 4.0 * g * g * k).sqrt());
            assert!(close(
                closed_form_schmidt(&pr, g, Partition::OneVsTwoThree),
                d1,
                1e-14
            ));
            assert!(close(
                closed_form_schmidt(&pr, g, Partition::OneTwoVsThree),
                d2,
                1e-14
            ));
        }
    }

    #[test]
    fn sector_oracle_matches_closed_forms() {
        for pr in [
            p(10, 3, 0, 1),
            p(6, 3, 0, 3),
            p(28, 12, 6, 4),
            p(25, 12, 5, 6),
            p(15, 6, 1, 3),
        ] {
            let first = first_stratum_block(&pr);
            for g in [0.1, 1.0, 10.0] {
                for part in Partition::ALL {
                    let oracle = sector_schmidt(&first, pr.kappa, g, part).unwrap();
                    let cf = closed_form_schmidt(&pr, g, part);
                    assert!(
                        close(oracle, cf, 1e-12),
                        "{pr} {part} g={g}: {oracle} vs {cf}"
                    );
                }
            }
        }
    }

    #[test]
    fn block_examples() {
        let t5 = p(10, 6, 3, 4);
        let blk = TwoByTwoBlock {
            lambda1: 0.0,
            lambda2: -1.0,
            lambda12: 2.0,
            multiplicity: 2,
        };
        let d = block_schmidt(&blk, &t5, 1.0);
        assert!(close(d, 2.0 * 2f64.sqrt() / (13.0f64 * 15.0).sqrt(), 1e-15));
        assert!(close(d, 0.202548, 1e-6));
        assert!(close(pair_sector_schmidt(&blk, 6, 1.0).unwrap(), d, 1e-14));

        let l4 = p(16, 6, 2, 2);
        let blk = TwoByTwoBlock {
            lambda1: -1.0,
            lambda2: 1.0,
            lambda12: 3.0,
            multiplicity: 4,
        };
        let d = block_schmidt(&blk, &l4, 1.0);
        assert!(close(d, 2.0 * 3f64.sqrt() / 165f64.sqrt(), 1e-15));
        assert!(close(d, 0.26968, 1e-5));
    }

    #[test]
    fn literal_thirteen_two_exceeds_one() {
        let pr = p(28, 12, 6, 4);
        let lit = closed_form_schmidt_with(
            &pr,
            1e3,
            Partition::OneThreeVsTwo,
            FormulaVariant::PaperLiteral,
        );
        let cor = closed_form_schmidt(&pr, 1e3, Partition::OneThreeVsTwo);
        assert!(lit > 1.0);
        assert!(cor < 1.0);
        // corrected tends to one from below
        let mut prev = 0.0;
        for e in 0..9 {
            let d = closed_form_schmidt(&pr, 10f64.powi(e), Partition::OneThreeVsTwo);
            assert!(d > prev && d < 1.0);
            prev = d;
        }
    }

    #[test]
    fn predicted_counts() {
        let bd = block_form(&Family::Triangular(5).generate().unwrap(), 0).unwrap();
        let s = predicted_spectrum(&bd, 1.0, Partition::OneTwoVsThree);
        // |A| = 7, |B| = 3
        assert_eq!(s.len(), 3);
        assert!(close(s[1], 0.202548, 1e-6) && close(s[2], 0.202548, 1e-6));
        assert_eq!(
            predicted_spectrum(&bd, 1.0, Partition::OneVsTwoThree).len(),
            1
        );
    }

    #[test]
    fn large_g_values() {
        let a = large_g_entropy(&p(10, 3, 0, 1), 1e8, Partition::OneVsTwoThree).unwrap();
        assert!(close(a.entropy, 0.5 * (3e8f64 / 20.0).ln() + 1.0, 1e-12));
        assert!(close(a.entropy, 9.261780, 1e-6));
        assert!(!a.out_of_regime);
        let b = large_g_entropy(&p(10, 3, 0, 1), 1e10, Partition::OneVsTwoThree).unwrap();
        assert!(close(b.entropy - a.entropy, 0.5 * 100f64.ln(), 1e-12));
        let c = large_g_entropy(&p(10, 3, 0, 1), 1e8, Partition::OneTwoVsThree).unwrap();
        assert!(close(c.entropy, 0.5 * (6e8f64 / 20.0).ln() + 1.0, 1e-12));
        assert!(
            large_g_entropy(&p(10, 3, 0, 1), 1.0, Partition::OneVsTwoThree)
                .unwrap()
                .out_of_regime
        );
        assert!(matches!(
            large_g_entropy(&p(10, 3, 0, 1), 1.0, Partition::OneThreeVsTwo),
            Err(Error::UnsupportedPartition(_))
        ));
    }

    #[test]
    fn area_law_examples() {
        let tri = |nu: usize| Family::Triangular(nu).expected_params().unwrap();
        let gam = |nu| {
            area_law_gamma(
                &tri(nu),
                1.0,
                AreaLawCase::FiniteMu,
                FormulaVariant::Corrected,
            )
            .unwrap()
        };
        assert!(close(gam(10), 1.3195, 1e-4));
        assert!(close(gam(80), 1.0535, 1e-4));
        assert!(gam(10) > gam(20) && gam(20) > gam(40) && gam(40) > gam(80));
        // corrected equals the exact root-cut gamma
        let d = closed_form_schmidt(&tri(10), 1.0, Partition::OneVsTwoThree);
        assert!(close(gam(10), gamma_from_d(d), 1e-12));
        assert_eq!(
            area_law_gamma(
                &tri(10),
                0.0,
                AreaLawCase::FiniteMu,
                FormulaVariant::PaperLiteral
            )
            .unwrap(),
            1.0
        );
        assert_eq!(
            area_law_gamma(
                &tri(10),
                0.0,
                AreaLawCase::FiniteMu,
                FormulaVariant::Corrected
            )
            .unwrap(),
            1.0
        );
        assert_eq!(
            area_law_gamma(
                &tri(10),
                1.0,
                AreaLawCase::KappaEqualsMu,
                FormulaVariant::Corrected
            ),
            Err(Error::CaseMismatch { kappa: 16, mu: 4 })
        );
    }

    #[test]
    fn area_law_kappa_equals_mu() {
        let kmm = |m: usize| Family::CompleteBipartite(m).expected_params().unwrap();
        let lit: Vec<f64> = [10, 100, 1000]
            .iter()
            .map(|&m| {
                area_law_gamma(
                    &kmm(m),
                    1.0,
                    AreaLawCase::KappaEqualsMu,
                    FormulaVariant::PaperLiteral,
                )
                .unwrap()
            })
            .collect();
        assert!(lit[0] > lit[1] && lit[1] > lit[2]);
        assert!(lit[2] - 1.0 < 1e-3);
        // the exact value tends to sqrt(2) instead
        let exact = area_law_gamma(
            &kmm(1000),
            1.0,
            AreaLawCase::KappaEqualsMu,
            FormulaVariant::Corrected,
        )
        .unwrap();
        assert!(close(exact, 2f64.sqrt(), 1e-3));
    }
}
