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

//! Singular-value signature of the stratum coupling block `a12`.
//!
//! The multiset of singular values of `a12` seen from a root is invariant
//! under relabeling, so two SRGs with the same parameters but different
//! signatures are not isomorphic. Equal signatures prove nothing.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::sig;
use crate::graph::{Graph, SrgParams};
use crate::linalg::{group_runs, singular_values_desc};
use crate::stratification::{extract_blocks, stratify};

/// Absolute tolerance on values when comparing signatures.
pub const DEFAULT_COMPARE_TOL: f64 = 1e-6;
/// Relative gap below which sorted singular values share a multiplicity.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-8;
const TOP_TOL: f64 = 1e-8;
const FROBENIUS_TOL: f64 = 1e-6;

/// `(value, multiplicity)` pairs, values strictly descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A12Signature {
    #[serde(serialize_with = "serialize_pairs")]
    pub values: Vec<(f64, usize)>,
    pub params: SrgParams,
    pub root: usize,
}

fn serialize_pairs<S: Serializer>(
    values: &[(f64, usize)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for &(v, m) in values {
        seq.serialize_element(&(v, m))?;
    }
    seq.end()
}

impl A12Signature {
    pub fn total_multiplicity(&self) -> usize {
        self.values.iter().map(|&(_, m)| m).sum()
    }

    /// Same entries, values within `tol` absolute, multiplicities exact.
    /// The root is ignored.
    pub fn approx_eq(&self, other: &A12Signature, tol: f64) -> bool {
        self.first_difference(other, tol).is_none()
    }

    /// Index of the first entry at which the two signatures differ.
    fn first_difference(&self, other: &A12Signature, tol: f64) -> Option<usize> {
        let n = self.values.len().max(other.values.len());
        (0..n).find(|&i| match (self.values.get(i), other.values.get(i)) {
            (Some(&(a, ma)), Some(&(b, mb))) => ma != mb || (a - b).abs() > tol,
            _ => true,
        })
    }

    /// Lexicographic order on `(value, multiplicity)` entries.
    fn lex_cmp(&self, other: &A12Signature) -> Ordering {
        for (&(a, ma), &(b, mb)) in self.values.iter().zip(&other.values) {
            let o = a.total_cmp(&b).then(ma.cmp(&mb));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.values.len().cmp(&other.values.len())
    }
}

impl fmt::Display for A12Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &(v, m)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", sig(v), m)?;
        }
        write!(f, "}}")
    }
}

/// Groups descending singular values into `(value, multiplicity)` runs.
/// Runs indistinguishable from zero are reported as exactly zero.
fn group_values(sv: &[f64], rel_tol: f64) -> Vec<(f64, usize)> {
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    group_runs(sv, rel_tol, scale)
        .into_iter()
        .map(|r| {
            let mean = sv[r.clone()].iter().sum::<f64>() / r.len() as f64;
            let v = if mean.abs() <= rel_tol * scale {
                0.0
            } else {
                mean
            };
            (v, r.len())
        })
        .collect()
}

fn check_invariants(s: &A12Signature) -> Result<()> {
    let p = &s.params;
    let expected = p.kappa.min(p.far_size());
    if s.total_multiplicity() != expected {
        return Err(Error::SignatureInvariant(format!(
            "multiplicities sum to {}, expected {expected}",
            s.total_multiplicity()
        )));
    }
    let top = s.values.first().map(|&(v, _)| v).unwrap_or(0.0);
    if (top - p.top_coupling()).abs() > TOP_TOL {
        return Err(Error::SignatureInvariant(format!(
            "top value {top} differs from {}",
            p.top_coupling()
        )));
    }
    let frob: f64 = s.values.iter().map(|&(v, m)| v * v * m as f64).sum();
    let want = (p.mu * p.far_size()) as f64;
    if (frob - want).abs() > FROBENIUS_TOL {
        return Err(Error::SignatureInvariant(format!(
            "sum of squares {frob}, expected {want}"
        )));
    }
    Ok(())
}

/// Signature seen from `root`; `tol` is the relative multiplicity-grouping
/// tolerance.
pub fn a12_signature(graph: &Graph, root: usize, tol: f64) -> Result<A12Signature> {
    let strat = stratify(graph, root)?;
    let blocks = extract_blocks(graph, &strat)?;
    let a12: DMatrix<f64> = blocks.a12.map(|x| x as f64);
    let sig = A12Signature {
        values: group_values(&singular_values_desc(&a12), tol),
        params: blocks.params,
        root,
    };
    check_invariants(&sig)?;
    Ok(sig)
}

fn dedup_sorted(sigs: Vec<A12Signature>, tol: f64) -> Vec<A12Signature> {
    let mut distinct: Vec<A12Signature> = Vec::new();
    for s in sigs {
        if !distinct.iter().any(|d| d.approx_eq(&s, tol)) {
            distinct.push(s);
        }
    }
    distinct.sort_by(|a, b| b.lex_cmp(a));
    distinct
}

/// Distinct signatures over all roots, in descending lexicographic order.
/// Each representative keeps the smallest root that produced it.
pub fn canonical_signature(graph: &Graph, tol: f64) -> Result<Vec<A12Signature>> {
    let sigs = (0..graph.order())
        .into_par_iter()
        .map(|r| a12_signature(graph, r, DEFAULT_GROUPING_TOL))
        .collect::<Result<Vec<_>>>()?;
    Ok(dedup_sorted(sigs, tol))
}

fn lists_equal(a: &[A12Signature], b: &[A12Signature], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| x.approx_eq(y, tol)))
        && b.iter().all(|y| a.iter().any(|x| x.approx_eq(y, tol)))
}

fn cmp_lists(a: &[A12Signature], b: &[A12Signature]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.lex_cmp(y);
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Distinguished,
    Indistinguishable,
    ParameterMismatch,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Distinguished => "Distinguished",
            Outcome::Indistinguishable => "not distinguished by A₁₂ spectrum",
            Outcome::ParameterMismatch => "ParameterMismatch",
        })
    }
}

/// First differing `(value, multiplicity)` entries; `None` where one
/// signature has fewer entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub a: Option<(f64, usize)>,
    pub b: Option<(f64, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub params: (SrgParams, SrgParams),
    pub signatures: (Vec<A12Signature>, Vec<A12Signature>),
}

fn witness(a: &[A12Signature], b: &[A12Signature], tol: f64) -> Witness {
    let (x, y) = match a
        .iter()
        .position(|x| !b.iter().any(|y| x.approx_eq(y, tol)))
    {
        Some(i) => (&a[i], &b[i.min(b.len() - 1)]),
        None => {
            let j = b
                .iter()
                .position(|y| !a.iter().any(|x| x.approx_eq(y, tol)))
                .unwrap_or(0);
            (&a[j.min(a.len() - 1)], &b[j])
        }
    };
    let i = x.first_difference(y, tol).unwrap_or(0);
    Witness {
        a: x.values.get(i).copied(),
        b: y.values.get(i).copied(),
    }
}

/// Compares canonical signatures. `Distinguished` proves non-isomorphism;
/// `Indistinguishable` only says this invariant cannot tell them apart.
pub fn distinguish(a: &Graph, b: &Graph, tol: f64) -> Result<Verdict> {
    let pa = crate::graph::srg_params(a)?;
    let pb = crate::graph::srg_params(b)?;
    if pa != pb {
        return Ok(Verdict {
            outcome: Outcome::ParameterMismatch,
            witness: None,
            params: (pa, pb),
            signatures: (Vec::new(), Vec::new()),
        });
    }
    let (sa, sb) = rayon::join(
        || canonical_signature(a, tol),
        || canonical_signature(b, tol),
    );
    let (sa, sb) = (sa?, sb?);
    let (outcome, witness) = if lists_equal(&sa, &sb, tol) {
        (Outcome::Indistinguishable, None)
    } else {
        (Outcome::Distinguished, Some(witness(&sa, &sb, tol)))
    };
    Ok(Verdict {
        outcome,
        witness,
        params: (pa, pb),
        signatures: (sa, sb),
    })
}

/// Graphs sharing one canonical signature list.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureClass {
    pub signatures: Vec<A12Signature>,
    /// Catalog indices, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogScan {
    pub params: SrgParams,
    /// Descending by signature.
    pub classes: Vec<SignatureClass>,
}

#[derive(Serialize)]
struct ClassJson<'a> {
    #[serde(serialize_with = "serialize_pairs")]
    signature: &'a [(f64, usize)],
    /// Present only when signatures depend on the root.
    #[serde(skip_serializing_if = "Option::is_none")]
    root_signatures: Option<Vec<Vec<(f64, usize)>>>,
    size: usize,
    members: &'a [usize],
}

#[derive(Serialize)]
struct ScanJson<'a> {
    params: SrgParams,
    classes: Vec<ClassJson<'a>>,
}

impl CatalogScan {
    pub fn class_of(&self, member: usize) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.members.contains(&member))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let classes = self
            .classes
            .iter()
            .map(|c| ClassJson {
                signature: &c.signatures[0].values,
                root_signatures: (c.signatures.len() > 1)
                    .then(|| c.signatures.iter().map(|s| s.values.clone()).collect()),
                size: c.members.len(),
                members: &c.members,
            })
            .collect();
        serde_json::to_value(ScanJson {
            params: self.params,
            classes,
        })
        .expect("scan report serializes")
    }

    /// One row per `(graph, signature, value, multiplicity)`, by graph index.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["graph", "class", "signature", "value", "multiplicity"])?;
        let mut rows: Vec<(usize, usize)> = self
            .classes
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.members.iter().map(move |&m| (m, ci)))
            .collect();
        rows.sort_unstable();
        for (member, ci) in rows {
            for (si, s) in self.classes[ci].signatures.iter().enumerate() {
                for &(v, m) in &s.values {
                    w.write_record([
                        member.to_string(),
                        ci.to_string(),
                        si.to_string(),
                        sig(v),
                        m.to_string(),
                    ])?;
                }
            }
        }
        w.flush()
    }
}

/// Partitions a catalog of equal-parameter SRGs into signature classes.
pub fn scan_catalog(graphs: &[Graph], tol: f64) -> Result<CatalogScan> {
    let first = graphs.first().ok_or(Error::EmptyCatalog)?;
    let params = crate::graph::srg_params(first)?;
    let all_params = graphs
        .par_iter()
        .map(crate::graph::srg_params)
        .collect::<Result<Vec<_>>>()?;
    if let Some(other) = all_params.iter().find(|p| **p != params) {
        return Err(Error::MixedParameters {
            first: params.to_string(),
            other: other.to_string(),
        });
    }
    let sigs = graphs
        .par_iter()
        .map(|g| canonical_signature(g, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<SignatureClass> = Vec::new();
    for (i, s) in sigs.into_iter().enumerate() {
        match classes
            .iter_mut()
            .find(|c| lists_equal(&c.signatures, &s, tol))
        {
            Some(c) => c.members.push(i),
            None => classes.push(SignatureClass {
                signatures: s,
                members: vec![i],
            }),
        }
    }
    classes.sort_by(|a, b| {
        cmp_lists(&b.signatures, &a.signatures).then(a.members[0].cmp(&b.members[0]))
    });
    Ok(CatalogScan { params, classes })
}
