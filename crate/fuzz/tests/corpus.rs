// SPDX-License-Identifier: Apache-2.0

//! Replays the checked-in corpus through every target body.

use std::fs;
use std::path::Path;

fn replay(target: &str, body: fn(&[u8])) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(target);
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        body(&fs::read(&path).unwrap());
        seen += 1;
    }
    assert!(seen > 0, "no seeds for {target}");
}

#[test]
fn knob_file() {
    replay("knob_file", hls_dse_fuzz::knob_file);
}

#[test]
fn eval_result() {
    replay("eval_result", hls_dse_fuzz::eval_result);
}

#[test]
fn point_file() {
    replay("point_file", hls_dse_fuzz::point_file);
}

#[test]
fn checkpoint() {
    replay("checkpoint", hls_dse_fuzz::checkpoint);
}

#[test]
fn explorer_config() {
    replay("explorer_config", hls_dse_fuzz::explorer_config);
}

#[test]
fn frontier_csv() {
    replay("frontier_csv", hls_dse_fuzz::frontier_csv);
}
