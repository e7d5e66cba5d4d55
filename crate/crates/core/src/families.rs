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

//! Deterministic generators for the strongly regular families used
//! throughout the crate.
//!
//! Vertex orderings are fixed:
//! - multipartite / cocktail party: vertex `v` lies in part `v / part_size`;
//! - triangular and Kneser: 2-subsets `{i < j}` in lexicographic order;
//! - lattice, Latin square and Shrikhande: cell `(a, b)` is `a * width + b`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{srg_params, Graph, SrgParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `K_{m,m}`, parameters `(2m, m, 0, m)`.
    CompleteBipartite(usize),
    /// `parts` independent sets of `part_size` vertices, all cross pairs adjacent.
    CompleteMultipartite {
        parts: usize,
        part_size: usize,
    },
    /// `q` antipodal pairs; parameters `(2q, 2q-2, 2q-4, 2q-2)`.
    CocktailParty(usize),
    /// Line graph of `K_nu`.
    Triangular(usize),
    /// Rook's graph on a `nu x nu` board.
    Lattice(usize),
    /// Latin square graph of the cyclic group table `(a + b) mod nu`.
    LatinSquareCyclic(usize),
    /// Disjointness graph on 2-subsets of a 6-set; realizes GQ(2,2).
    Kneser62,
    Petersen,
    Shrikhande,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::CompleteBipartite(m) => write!(f, "complete-bipartite({m})"),
            Family::CompleteMultipartite { parts, part_size } => {
                write!(f, "complete-multipartite({parts}x{part_size})")
            }
            Family::CocktailParty(q) => write!(f, "cocktail-party({q})"),
            Family::Triangular(nu) => write!(f, "triangular({nu})"),
            Family::Lattice(nu) => write!(f, "lattice({nu})"),
            Family::LatinSquareCyclic(nu) => write!(f, "latin-square-cyclic({nu})"),
            Family::Kneser62 => f.write_str("kneser(6,2)"),
            Family::Petersen => f.write_str("petersen"),
            Family::Shrikhande => f.write_str("shrikhande"),
        }
    }
}

impl Family {
    fn check_size(&self) -> Result<()> {
        let small = |what: String| Err(Error::SizeTooSmall(what));
        match *self {
            Family::CompleteBipartite(m) if m < 2 => {
                small(format!("complete bipartite needs m >= 2, got {m}"))
            }
            Family::CompleteMultipartite { parts, part_size } if parts < 2 || part_size < 2 => {
                small(format!(
                "complete multipartite needs parts >= 2 and part size >= 2, got {parts}x{part_size}"
            ))
            }
            Family::CocktailParty(q) if q < 2 => {
                small(format!("cocktail party needs q >= 2, got {q}"))
            }
            Family::Triangular(nu) if nu < 4 => {
                small(format!("triangular needs nu >= 4, got {nu}"))
            }
            Family::Lattice(nu) if nu < 2 => small(format!("lattice needs nu >= 2, got {nu}")),
            Family::LatinSquareCyclic(nu) if nu < 3 => {
                small(format!("latin square needs nu >= 3, got {nu}"))
            }
            _ => Ok(()),
        }
    }

    /// Parameters predicted by the family formulas.
    pub fn expected_params(&self) -> Result<SrgParams> {
        self.check_size()?;
        let (n, k, l, m) = match *self {
            Family::CompleteBipartite(m) => (2 * m, m, 0, m),
            Family::CompleteMultipartite {
                parts,
                part_size: s,
            } => (parts * s, (parts - 1) * s, (parts - 2) * s, (parts - 1) * s),
            Family::CocktailParty(q) => (2 * q, 2 * q - 2, 2 * q - 4, 2 * q - 2),
            Family::Triangular(nu) => (nu * (nu - 1) / 2, 2 * (nu - 2), nu - 2, 4),
            Family::Lattice(nu) => (nu * nu, 2 * (nu - 1), nu - 2, 2),
            Family::LatinSquareCyclic(nu) => (nu * nu, 3 * (nu - 1), nu, 6),
            Family::Kneser62 => generalized_quadrangle_params(2, 2),
            Family::Petersen => (10, 3, 0, 1),
            Family::Shrikhande => (16, 6, 2, 2),
        };
        SrgParams::new(n, k, l, m)
    }

    /// Builds the graph and checks it against [`Family::expected_params`].
    pub fn generate(&self) -> Result<Graph> {
        let expected = self.expected_params()?;
        let graph = self.build()?;
        let found = srg_params(&graph)?;
        if found != expected {
            return Err(Error::FamilyMismatch {
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
        Ok(graph)
    }

    fn build(&self) -> Result<Graph> {
        match *self {
            Family::CompleteBipartite(m) => multipartite(2, m),
            Family::CompleteMultipartite { parts, part_size } => multipartite(parts, part_size),
            Family::CocktailParty(q) => multipartite(q, 2),
            Family::Triangular(nu) => pair_graph(nu, |a, b| {
                a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
            }),
            Family::Kneser62 => pair_graph(6, |a, b| {
                a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
            }),
            Family::Petersen => pair_graph(5, |a, b| {
                a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
            }),
            Family::Lattice(nu) => grid_graph(nu, |a, b| a.0 == b.0 || a.1 == b.1),
            Family::LatinSquareCyclic(nu) => grid_graph(nu, |a, b| {
                a.0 == b.0 || a.1 == b.1 || (a.0 + a.1) % nu == (b.0 + b.1) % nu
            }),
            Family::Shrikhande => grid_graph(4, |a, b| {
                let d = ((b.0 + 4 - a.0) % 4, (b.1 + 4 - a.1) % 4);
                matches!(d, (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3))
            }),
        }
    }
}

/// `((st+1)(s+1), s(t+1), s-1, t+1)`.
pub fn generalized_quadrangle_params(s: usize, t: usize) -> (usize, usize, usize, usize) {
    ((s * t + 1) * (s + 1), s * (t + 1), s - 1, t + 1)
}

/// Latin square graph of an arbitrary `nu x nu` square: cells are adjacent
/// when they share a row, a column or a symbol.
pub fn latin_square_graph(square: &[Vec<usize>]) -> Result<Graph> {
    let nu = square.len();
    let bad = |msg: String| Err(Error::InvalidGraph(msg));
    if nu < 3 {
        return bad(format!("latin square needs nu >= 3, got {nu}"));
    }
    for (i, row) in square.iter().enumerate() {
        let mut seen = vec![false; nu];
        for &x in row {
            if x >= nu || std::mem::replace(&mut seen[x], true) {
                return bad(format!("row {i} is not a permutation of 0..{nu}"));
            }
        }
        if row.len() != nu {
            return bad(format!("row {i} has length {}, expected {nu}", row.len()));
        }
    }
    for j in 0..nu {
        let mut seen = vec![false; nu];
        if square
            .iter()
            .any(|row| std::mem::replace(&mut seen[row[j]], true))
        {
            return bad(format!("column {j} repeats a symbol"));
        }
    }
    grid_graph(nu, |a, b| {
        a.0 == b.0 || a.1 == b.1 || square[a.0][a.1] == square[b.0][b.1]
    })
}

fn multipartite(parts: usize, size: usize) -> Result<Graph> {
    let n = parts * size;
    Graph::from_edges(
        n,
        (0..n).flat_map(|u| {
            ((u + 1)..n)
                .filter(move |v| u / size != v / size)
                .map(move |v| (u, v))
        }),
    )
}

fn pair_graph(
    m: usize,
    adjacent: impl Fn((usize, usize), (usize, usize)) -> bool,
) -> Result<Graph> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let n = pairs.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if adjacent(pairs[u], pairs[v]) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn grid_graph(
    width: usize,
    adjacent: impl Fn((usize, usize), (usize, usize)) -> bool,
) -> Result<Graph> {
    let n = width * width;
    let cell = |v: usize| (v / width, v % width);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if adjacent(cell(u), cell(v)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::satisfies_srg_identity;
    use nalgebra::DMatrix;

    fn params(n: usize, k: usize, l: usize, m: usize) -> SrgParams {
        SrgParams::new(n, k, l, m).unwrap()
    }

    fn kron(a: &DMatrix<i64>, b: &DMatrix<i64>) -> DMatrix<i64> {
        a.kronecker(b)
    }

    fn eye(n: usize) -> DMatrix<i64> {
        DMatrix::identity(n, n)
    }

    fn ones(n: usize) -> DMatrix<i64> {
        DMatrix::from_element(n, n, 1)
    }

    fn shift(n: usize) -> DMatrix<i64> {
        DMatrix::from_fn(n, n, |i, j| ((i + 1) % n == j) as i64)
    }

    #[test]
    fn documented_examples() {
        let cases = [
            (Family::CompleteBipartite(3), params(6, 3, 0, 3)),
            (Family::Triangular(8), params(28, 12, 6, 4)),
            (Family::LatinSquareCyclic(5), params(25, 12, 5, 6)),
            (Family::Kneser62, params(15, 6, 1, 3)),
            (Family::Shrikhande, params(16, 6, 2, 2)),
            (Family::Petersen, params(10, 3, 0, 1)),
            (Family::CocktailParty(4), params(8, 6, 4, 6)),
            (
                Family::CompleteMultipartite {
                    parts: 3,
                    part_size: 3,
                },
                params(9, 6, 3, 6),
            ),
        ];
        for (fam, p) in cases {
            let g = fam.generate().unwrap();
            assert_eq!(srg_params(&g).unwrap(), p, "{fam}");
            assert!(satisfies_srg_identity(&g, &p));
        }
    }

    #[test]
    fn latin_square_from_rows() {
        let cyclic: Vec<Vec<usize>> = (0..5)
            .map(|i| (0..5).map(|j| (i + j) % 5).collect())
            .collect();
        assert_eq!(
            latin_square_graph(&cyclic).unwrap(),
            Family::LatinSquareCyclic(5).generate().unwrap()
        );
        let other = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        let g = latin_square_graph(&other).unwrap();
        assert_eq!(crate::graph::srg_params(&g).unwrap(), params(25, 12, 5, 6));
        let mut broken = other.clone();
        broken[1][1] = 1;
        assert!(matches!(
            latin_square_graph(&broken),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn size_constraints() {
        for fam in [
            Family::CompleteBipartite(1),
            Family::CompleteMultipartite {
                parts: 3,
                part_size: 1,
            },
            Family::CocktailParty(1),
            Family::Triangular(3),
            Family::Lattice(1),
            Family::LatinSquareCyclic(2),
        ] {
            assert!(
                matches!(fam.generate(), Err(Error::SizeTooSmall(_))),
                "{fam}"
            );
        }
    }

    #[test]
    fn family_sweep_is_strongly_regular() {
        let mut fams = Vec::new();
        for m in 2..7 {
            fams.push(Family::CompleteBipartite(m));
            fams.push(Family::CocktailParty(m));
        }
        for nu in 4..10 {
            fams.push(Family::Triangular(nu));
        }
        for nu in 2..8 {
            fams.push(Family::Lattice(nu));
        }
        for nu in 3..8 {
            fams.push(Family::LatinSquareCyclic(nu));
        }
        for fam in fams {
            fam.generate().unwrap_or_else(|e| panic!("{fam}: {e}"));
        }
    }

    #[test]
    fn lattice_matches_kronecker_form() {
        for nu in 2..6 {
            let g = Family::Lattice(nu).generate().unwrap();
            let j_i = ones(nu) - eye(nu);
            let expected = kron(&eye(nu), &j_i) + kron(&j_i, &eye(nu));
            assert_eq!(g.adjacency_i64(), expected);
        }
    }

    #[test]
    fn latin_square_matches_shift_form() {
        for nu in 3..7 {
            let g = Family::LatinSquareCyclic(nu).generate().unwrap();
            let j_i = ones(nu) - eye(nu);
            let s = shift(nu);
            let mut expected = kron(&eye(nu), &j_i) + kron(&j_i, &eye(nu));
            for k in 1..nu {
                expected += kron(&s.pow(k as u32), &s.pow((nu - k) as u32));
            }
            assert_eq!(g.adjacency_i64(), expected);
        }
    }

    #[test]
    fn triangular_neighbourhood_spectrum() {
        for nu in 4..9 {
            let g = Family::Triangular(nu).generate().unwrap();
            let nb: Vec<usize> = g.neighbors(0).collect();
            let a11 = DMatrix::from_fn(nb.len(), nb.len(), |i, j| {
                if g.has_edge(nb[i], nb[j]) {
                    1.0
                } else {
                    0.0
                }
            });
            let mut ev: Vec<f64> = a11.symmetric_eigen().eigenvalues.iter().cloned().collect();
            ev.sort_by(|a, b| b.total_cmp(a));
            let nu = nu as f64;
            let mut expected = vec![nu - 2.0, nu - 4.0];
            expected.extend(std::iter::repeat_n(0.0, nu as usize - 3));
            expected.extend(std::iter::repeat_n(-2.0, nu as usize - 3));
            expected.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ev.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-9, "{ev:?} vs {expected:?}");
            }
        }
    }

    #[test]
    fn cocktail_party_shape() {
        for q in 2..7 {
            let p = Family::CocktailParty(q).expected_params().unwrap();
            assert_eq!(p.n, p.kappa + 2);
            assert_eq!(p.lambda + 2, p.kappa);
        }
    }

    #[test]
    fn generalized_quadrangle_formula() {
        assert_eq!(generalized_quadrangle_params(2, 2), (15, 6, 1, 3));
    }
}
