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

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srgnet::entanglement::{closed_form_schmidt, family_closed_forms, predicted_spectrum, RowKind};
use srgnet::graph6::parse_graph6_line;
use srgnet::{
    block_form, strata_entanglement, write_graph6, CouplingConfig, Family, Graph, Partition,
};

fn families() -> Vec<Family> {
    vec![
        Family::CompleteBipartite(4),
        Family::CompleteMultipartite {
            parts: 3,
            part_size: 3,
        },
        Family::CocktailParty(5),
        Family::Triangular(6),
        Family::Lattice(5),
        Family::LatinSquareCyclic(4),
        Family::Kneser62,
        Family::Petersen,
        Family::Shrikhande,
    ]
}

#[test]
fn consistent_printed_rows_match_the_oracle() {
    for fam in families() {
        let table = match family_closed_forms(&fam, 2.0) {
            Ok(t) => t,
            Err(srgnet::Error::UnsupportedFamily(_)) => continue,
            Err(e) => panic!("{fam}: {e}"),
        };
        for row in &table.rows {
            assert!((row.corrected - row.oracle).abs() < 1e-10, "{fam}: {row:?}");
            if row.kind == RowKind::Family && row.sector == "1:23" {
                assert!(row.consistent, "{fam}: {row:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pipeline_matches_predicted_spectrum(fam in 0usize..9, log_g in -2.0f64..2.0, part in 0usize..3) {
        let fam = &families()[fam];
        let graph = fam.generate().unwrap();
        let g = 10f64.powf(log_g);
        let part = Partition::ALL[part];
        let bd = block_form(&graph, 0).unwrap();
        let report = strata_entanglement(&graph, 0, part, &CouplingConfig::new(g).unwrap()).unwrap();
        let predicted = predicted_spectrum(&bd, g, part);
        prop_assert_eq!(report.modes.len(), predicted.len());
        for (m, p) in report.modes.iter().zip(&predicted) {
            prop_assert!((m.d - p).abs() < 1e-9, "{} {} g={}: {} vs {}", fam, part, g, m.d, p);
        }
        if part == Partition::OneVsTwoThree {
            let d = closed_form_schmidt(&fam.expected_params().unwrap(), g, part);
            prop_assert!((report.modes[0].d - d).abs() < 1e-9);
        }
    }

    #[test]
    fn graph6_round_trips(n in 0usize..80, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.35))
            .collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let line = write_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6_line(line.as_bytes()).unwrap(), g);
    }
}
