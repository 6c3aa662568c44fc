// SPDX-License-Identifier: Apache-2.0

//! Runs an external evaluator command under a watchdog.
//!
//! The point is written to a JSON file whose path replaces `{point_file}` in
//! the command template. The command runs through `sh -c` in its own process
//! group so the whole tree can be killed when the time limit expires.

use std::io::{Read, Write};
use std::os::unix::process::CommandExt;
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use log::{debug, warn};

use super::{parse_result, HarnessError, Outcome, POINT_FILE_PLACEHOLDER};
use crate::design_space::DesignPoint;

const POLL: Duration = Duration::from_millis(5);

pub(super) fn run(
    template: &str,
    timeout_s: f64,
    point: &DesignPoint,
) -> Result<(Outcome, f64), HarnessError> {
    let mut point_file = tempfile::Builder::new()
        .prefix("point-")
        .suffix(".json")
        .tempfile()
        .map_err(HarnessError::PointFile)?;
    let body = serde_json::to_vec_pretty(point).expect("design point serializes");
    point_file
        .write_all(&body)
        .and_then(|_| point_file.flush())
        .map_err(HarnessError::PointFile)?;

    let path = point_file.path().to_string_lossy().into_owned();
    let command = template.replace(POINT_FILE_PLACEHOLDER, &path);
    debug!("evaluating {} with `{command}`", point.id());

    let start = Instant::now();
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|source| HarnessError::Spawn {
            command: command.clone(),
            source,
        })?;

    let stdout = drain(child.stdout.take());
    let stderr = drain(child.stderr.take());

    let limit = Duration::from_secs_f64(timeout_s);
    let exit = loop {
        match child.try_wait().map_err(HarnessError::Wait)? {
            Some(status) => break Some(status),
            None if start.elapsed() >= limit => {
                kill_group(&mut child);
                break None;
            }
            None => thread::sleep(POLL),
        }
    };
    let wall = start.elapsed().as_secs_f64();

    let Some(exit) = exit else {
        warn!("evaluation of {} timed out after {wall:.1}s", point.id());
        return Ok((Outcome::Timeout, wall));
    };

    let out = stdout.join().unwrap_or_default();
    let err = stderr.join().unwrap_or_default();
    let outcome = parse_result(&out);
    if !exit.success() && !matches!(outcome, Outcome::Ok(_)) {
        debug!("evaluator exited with {exit}: {}", err.trim());
        return Ok((Outcome::Error, wall));
    }
    if outcome == Outcome::Error && !err.trim().is_empty() {
        debug!("evaluator reported an error: {}", err.trim());
    }
    Ok((outcome, wall))
}

fn drain<R: Read + Send + 'static>(pipe: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut p) = pipe {
            let _ = p.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn kill_group(child: &mut Child) {
    let pid = child.id() as libc::pid_t;
    // SAFETY: signalling the process group created for this child.
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
    }
    let _ = child.kill();
    let _ = child.wait();
}
