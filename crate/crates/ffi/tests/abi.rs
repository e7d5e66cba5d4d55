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

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use srgnet_ffi::*;

fn last_name() -> String {
    unsafe { CStr::from_ptr(srgnet_last_error_name()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn parse_and_query() {
    let g6 = srgnet::write_graph6(&srgnet::Family::Petersen.generate().unwrap()).unwrap();
    let text = CString::new(g6).unwrap();
    let mut graph = ptr::null_mut();
    unsafe {
        assert_eq!(
            srgnet_graph_from_graph6(text.as_ptr(), &mut graph),
            SrgStatus::Ok
        );
        assert_eq!(srgnet_graph_order(graph), 10);
        let mut p = SrgParamsC::default();
        assert_eq!(srgnet_graph_params(graph, &mut p), SrgStatus::Ok);
        assert_eq!((p.n, p.kappa, p.lambda, p.mu), (10, 3, 0, 1));

        let mut s = 0.0;
        let subset = [0usize, 1, 2];
        assert_eq!(
            srgnet_subset_entropy(
                graph,
                subset.as_ptr(),
                3,
                0.5,
                SrgConvention::Physical,
                &mut s
            ),
            SrgStatus::Ok
        );
        assert!(s > 0.0);
        assert_eq!(
            srgnet_subset_entropy(graph, ptr::null(), 0, 0.5, SrgConvention::Paper, &mut s),
            SrgStatus::Entanglement
        );
        assert_eq!(last_name(), "EmptyOrFullSubset");
        assert_eq!(
            srgnet_strata_entropy(
                graph,
                0,
                SrgPartition::OneVsTwoThree,
                -1.0,
                SrgConvention::Paper,
                &mut s
            ),
            SrgStatus::InvalidArgument
        );
        assert_eq!(last_name(), "NegativeCoupling");
        srgnet_graph_free(graph);
    }
}

#[test]
fn family_errors() {
    let mut graph = ptr::null_mut();
    unsafe {
        assert_eq!(
            srgnet_graph_generate(SrgFamily::Triangular, 3, 0, &mut graph),
            SrgStatus::Family
        );
        assert!(graph.is_null());
        assert_eq!(last_name(), "SizeTooSmall");
        let bad = CString::new("A_\nB").unwrap();
        assert_eq!(
            srgnet_graph_from_graph6(bad.as_ptr(), &mut graph),
            SrgStatus::Parse
        );
    }
}

fn library_dir() -> PathBuf {
    // target/<profile>/deps/abi-<hash> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let lib = library_dir().join("libsrgnet_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
