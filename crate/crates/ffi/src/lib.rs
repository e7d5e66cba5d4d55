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

//! C ABI for srgnet.
//!
//! Graphs and signatures are opaque heap handles released with their
//! `*_free` function. Every fallible call returns an [`SrgStatus`]; on
//! failure the thread-local last error holds the error name and message.
//! Panics never cross the boundary and are reported as `SRG_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use srgnet::entanglement::{closed_form_schmidt, mode_entropy};
use srgnet::signature::{a12_signature, distinguish, A12Signature, Outcome, DEFAULT_GROUPING_TOL};
use srgnet::{
    bipartite_entanglement, parse_graph6, srg_params, strata_entanglement, Convention,
    CouplingConfig, Error, Family, Graph, LogBase, Partition, SrgParams,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An enum or numeric argument is out of range.
    InvalidArgument = 2,
    /// Malformed graph6 text.
    Parse = 3,
    /// The graph is not a usable strongly regular graph.
    NotStronglyRegular = 4,
    /// Family generation failed or is unsupported.
    Family = 5,
    /// Stratification or block diagonalization failed.
    Stratification = 6,
    /// Entanglement computation failed.
    Entanglement = 7,
    /// Signature computation failed.
    Signature = 8,
    /// A Rust panic was caught.
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgPartition {
    OneVsTwoThree = 0,
    OneTwoVsThree = 1,
    OneThreeVsTwo = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgConvention {
    Paper = 0,
    Physical = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgFamily {
    CompleteBipartite = 0,
    CompleteMultipartite = 1,
    CocktailParty = 2,
    Triangular = 3,
    Lattice = 4,
    LatinSquareCyclic = 5,
    Kneser62 = 6,
    Petersen = 7,
    Shrikhande = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgOutcome {
    Distinguished = 0,
    Indistinguishable = 1,
    ParameterMismatch = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SrgParamsC {
    pub n: usize,
    pub kappa: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// Opaque graph handle.
pub struct SrgGraph(Graph);

/// Opaque signature handle.
pub struct SrgSignature(A12Signature);

struct LastError {
    name: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(name: &str, message: &str) {
    let clean = |s: &str| CString::new(s.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(LastError {
            name: clean(name),
            message: clean(message),
        })
    });
}

fn status_of(e: &Error) -> SrgStatus {
    use Error::*;
    match e {
        MalformedHeader { .. }
        | TruncatedBitstream { .. }
        | TrailingBytes { .. }
        | InvalidByte { .. }
        | NonCanonicalPadding { .. }
        | OrderTooLarge(_) => SrgStatus::Parse,
        InvalidGraph(_)
        | NotRegular { .. }
        | NotStronglyRegular(_)
        | Degenerate
        | Disconnected
        | InfeasibleParams { .. } => SrgStatus::NotStronglyRegular,
        SizeTooSmall(_) | FamilyMismatch { .. } | UnsupportedFamily(_) => SrgStatus::Family,
        RootOutOfRange { .. }
        | NotThreeStrata(_)
        | BlockSumViolation(_)
        | JointDiagonalizationFailure(_)
        | NegativeDiscriminant(_)
        | InvalidLambda12(_) => SrgStatus::Stratification,
        SignatureInvariant(_) | MixedParameters { .. } | EmptyCatalog => SrgStatus::Signature,
        NegativeCoupling(_) | InvalidPartition(_) => SrgStatus::InvalidArgument,
        _ => SrgStatus::Entanglement,
    }
}

/// Runs `f`, recording errors and panics in the last-error slot.
fn guard(f: impl FnOnce() -> Result<(), (SrgStatus, String, String)>) -> SrgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SrgStatus::Ok
        }
        Ok(Err((status, name, msg))) => {
            set_error(&name, &msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error("Panic", &msg);
            SrgStatus::Panic
        }
    }
}

type Failure = (SrgStatus, String, String);

fn domain(e: Error) -> Failure {
    (status_of(&e), e.name().to_string(), e.to_string())
}

fn null(what: &str) -> Failure {
    (
        SrgStatus::NullPointer,
        "NullPointer".into(),
        format!("{what} is null"),
    )
}

fn invalid(msg: String) -> Failure {
    (SrgStatus::InvalidArgument, "InvalidArgument".into(), msg)
}

unsafe fn graph_ref<'a>(g: *const SrgGraph, what: &str) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn partition_of(p: SrgPartition) -> Partition {
    match p {
        SrgPartition::OneVsTwoThree => Partition::OneVsTwoThree,
        SrgPartition::OneTwoVsThree => Partition::OneTwoVsThree,
        SrgPartition::OneThreeVsTwo => Partition::OneThreeVsTwo,
    }
}

fn config(g: f64, convention: SrgConvention) -> Result<CouplingConfig, Failure> {
    let c = CouplingConfig::new(g)
        .map_err(domain)?
        .with_log_base(LogBase::Nats);
    Ok(c.with_convention(match convention {
        SrgConvention::Paper => Convention::Paper,
        SrgConvention::Physical => Convention::Physical,
    }))
}

fn params_c(p: SrgParams) -> SrgParamsC {
    SrgParamsC {
        n: p.n,
        kappa: p.kappa,
        lambda: p.lambda,
        mu: p.mu,
    }
}

/// Name of the last error on this thread (e.g. `"NotStronglyRegular"`), or
/// null if the last call succeeded. Valid until the next call on this
/// thread.
#[no_mangle]
pub extern "C" fn srgnet_last_error_name() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |x| x.name.as_ptr())
    })
}

/// Human-readable message of the last error on this thread, or null.
#[no_mangle]
pub extern "C" fn srgnet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |x| x.message.as_ptr())
    })
}

/// Parses the first graph of NUL-terminated graph6 text.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_graph_from_graph6(
    text: *const c_char,
    out: *mut *mut SrgGraph,
) -> SrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if text.is_null() {
            return Err(null("text"));
        }
        let bytes = CStr::from_ptr(text).to_bytes();
        let mut graphs = parse_graph6(bytes).map_err(domain)?;
        if graphs.is_empty() {
            return Err((
                SrgStatus::Parse,
                "EmptyInput".into(),
                "no graph in input".into(),
            ));
        }
        *out = Box::into_raw(Box::new(SrgGraph(graphs.swap_remove(0))));
        Ok(())
    })
}

/// Generates a family instance. `size` is `m`, `q` or `nu` as the family
/// requires (part size for complete multipartite); `parts` is only read
/// for complete multipartite.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_graph_generate(
    family: SrgFamily,
    size: usize,
    parts: usize,
    out: *mut *mut SrgGraph,
) -> SrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let fam = match family {
            SrgFamily::CompleteBipartite => Family::CompleteBipartite(size),
            SrgFamily::CompleteMultipartite => Family::CompleteMultipartite {
                parts,
                part_size: size,
            },
            SrgFamily::CocktailParty => Family::CocktailParty(size),
            SrgFamily::Triangular => Family::Triangular(size),
            SrgFamily::Lattice => Family::Lattice(size),
            SrgFamily::LatinSquareCyclic => Family::LatinSquareCyclic(size),
            SrgFamily::Kneser62 => Family::Kneser62,
            SrgFamily::Petersen => Family::Petersen,
            SrgFamily::Shrikhande => Family::Shrikhande,
        };
        *out = Box::into_raw(Box::new(SrgGraph(fam.generate().map_err(domain)?)));
        Ok(())
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn srgnet_graph_free(graph: *mut SrgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, 0 for null.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn srgnet_graph_order(graph: *const SrgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.order())
}

/// Strongly regular parameters of `graph`.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_graph_params(
    graph: *const SrgGraph,
    out: *mut SrgParamsC,
) -> SrgStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        let out = out_ref(out, "out")?;
        *out = params_c(srg_params(g).map_err(domain)?);
        Ok(())
    })
}

/// Total entanglement entropy (nats) across a strata bipartition.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_strata_entropy(
    graph: *const SrgGraph,
    root: usize,
    partition: SrgPartition,
    g: f64,
    convention: SrgConvention,
    out: *mut f64,
) -> SrgStatus {
    guard(|| {
        let graph = graph_ref(graph, "graph")?;
        let out = out_ref(out, "out")?;
        let report = strata_entanglement(
            graph,
            root,
            partition_of(partition),
            &config(g, convention)?,
        )
        .map_err(domain)?;
        *out = report.total_entropy;
        Ok(())
    })
}

/// Total entanglement entropy (nats) between `subset` and its complement.
///
/// # Safety
/// `graph` must be a live handle, `subset` must point to `len` readable
/// indices and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_subset_entropy(
    graph: *const SrgGraph,
    subset: *const usize,
    len: usize,
    g: f64,
    convention: SrgConvention,
    out: *mut f64,
) -> SrgStatus {
    guard(|| {
        let graph = graph_ref(graph, "graph")?;
        let out = out_ref(out, "out")?;
        if subset.is_null() && len > 0 {
            return Err(null("subset"));
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(subset, len)
        };
        let report =
            bipartite_entanglement(graph, slice, &config(g, convention)?).map_err(domain)?;
        *out = report.total_entropy;
        Ok(())
    })
}

/// Corrected closed-form Schmidt number of the first-stratum mode.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_closed_form_schmidt(
    params: SrgParamsC,
    g: f64,
    partition: SrgPartition,
    out: *mut f64,
) -> SrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let p = SrgParams::new(params.n, params.kappa, params.lambda, params.mu).map_err(domain)?;
        srgnet::graph::check_coupling(g).map_err(domain)?;
        *out = closed_form_schmidt(&p, g, partition_of(partition));
        Ok(())
    })
}

/// Entropy (nats) of one mode with Schmidt number `d` in `[0, 1)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_mode_entropy(d: f64, out: *mut f64) -> SrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = mode_entropy(d, LogBase::Nats).map_err(domain)?.entropy;
        Ok(())
    })
}

/// Coupling-block signature seen from `root`.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_a12_signature(
    graph: *const SrgGraph,
    root: usize,
    out: *mut *mut SrgSignature,
) -> SrgStatus {
    guard(|| {
        let graph = graph_ref(graph, "graph")?;
        let out = out_ref(out, "out")?;
        let sig = a12_signature(graph, root, DEFAULT_GROUPING_TOL).map_err(domain)?;
        *out = Box::into_raw(Box::new(SrgSignature(sig)));
        Ok(())
    })
}

/// Number of distinct values, 0 for null.
///
/// # Safety
/// `sig` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn srgnet_signature_len(sig: *const SrgSignature) -> usize {
    sig.as_ref().map_or(0, |s| s.0.values.len())
}

/// Entry `index` (descending by value).
///
/// # Safety
/// `sig` must be a live handle; `value` and `multiplicity` writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_signature_entry(
    sig: *const SrgSignature,
    index: usize,
    value: *mut f64,
    multiplicity: *mut usize,
) -> SrgStatus {
    guard(|| {
        let s = sig.as_ref().ok_or_else(|| null("sig"))?;
        let value = out_ref(value, "value")?;
        let multiplicity = out_ref(multiplicity, "multiplicity")?;
        let &(v, m) = s.0.values.get(index).ok_or_else(|| {
            invalid(format!(
                "index {index} out of range for {} entries",
                s.0.values.len()
            ))
        })?;
        *value = v;
        *multiplicity = m;
        Ok(())
    })
}

/// Releases a signature. Null is ignored.
///
/// # Safety
/// `sig` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn srgnet_signature_free(sig: *mut SrgSignature) {
    if !sig.is_null() {
        drop(Box::from_raw(sig));
    }
}

/// Compares the all-root signatures of two graphs at absolute tolerance
/// `tol`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn srgnet_distinguish(
    a: *const SrgGraph,
    b: *const SrgGraph,
    tol: f64,
    out: *mut SrgOutcome,
) -> SrgStatus {
    guard(|| {
        let a = graph_ref(a, "a")?;
        let b = graph_ref(b, "b")?;
        let out = out_ref(out, "out")?;
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(invalid(format!(
                "tolerance must be finite and non-negative, got {tol}"
            )));
        }
        *out = match distinguish(a, b, tol).map_err(domain)?.outcome {
            Outcome::Distinguished => SrgOutcome::Distinguished,
            Outcome::Indistinguishable => SrgOutcome::Indistinguishable,
            Outcome::ParameterMismatch => SrgOutcome::ParameterMismatch,
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_name() -> Option<String> {
        let p = srgnet_last_error_name();
        (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
    }

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::EmptyCatalog), SrgStatus::Signature);
        assert_eq!(status_of(&Error::SingularBlock), SrgStatus::Entanglement);
        assert_eq!(
            status_of(&Error::Disconnected),
            SrgStatus::NotStronglyRegular
        );
        assert_eq!(
            status_of(&Error::NegativeCoupling(-1.0)),
            SrgStatus::InvalidArgument
        );
    }

    #[test]
    fn null_pointers_are_rejected() {
        unsafe {
            assert_eq!(
                srgnet_graph_from_graph6(ptr::null(), ptr::null_mut()),
                SrgStatus::NullPointer
            );
            assert_eq!(last_name().as_deref(), Some("NullPointer"));
            let mut x = 0.0;
            assert_eq!(
                srgnet_strata_entropy(
                    ptr::null(),
                    0,
                    SrgPartition::OneVsTwoThree,
                    1.0,
                    SrgConvention::Paper,
                    &mut x
                ),
                SrgStatus::NullPointer
            );
            srgnet_graph_free(ptr::null_mut());
            srgnet_signature_free(ptr::null_mut());
            assert_eq!(srgnet_graph_order(ptr::null()), 0);
        }
    }

    #[test]
    fn success_clears_last_error() {
        unsafe {
            let mut x = 0.0;
            assert_eq!(srgnet_mode_entropy(1.5, &mut x), SrgStatus::Entanglement);
            assert_eq!(last_name().as_deref(), Some("DOutOfRange"));
            assert_eq!(srgnet_mode_entropy(0.6, &mut x), SrgStatus::Ok);
            assert!(last_name().is_none());
            assert!((x - 0.392436).abs() < 1e-6);
        }
    }
}
