//! Adapter for an external DIMACS SAT solver process.
//!
//! The solver is invoked as `<solver> <cnf-path>`. Its exit status is
//! ignored; the verdict comes from the `s ` status line and the model from
//! `v ` lines.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::Duration;

use log::debug;
use wait_timeout::ChildExt;

use super::CnfFormula;
use crate::error::{Error, Result};

pub const SOLVER_ENV: &str = "SAT_SOLVER";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    /// `model[i]` is the value of variable `i + 1`.
    Sat(Vec<bool>),
    Unsat,
    TimedOut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatSolver {
    path: PathBuf,
}

impl SatSolver {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        SatSolver { path: path.into() }
    }

    /// An explicit path wins over `SAT_SOLVER`.
    pub fn from_flag_or_env(flag: Option<&Path>) -> Result<Self> {
        match flag {
            Some(p) => Ok(SatSolver::new(p)),
            None => std::env::var_os(SOLVER_ENV)
                .filter(|v| !v.is_empty())
                .map(SatSolver::new)
                .ok_or(Error::SolverNotConfigured),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// First comment line the solver prints for a trivial instance.
    pub fn banner(&self) -> Result<String> {
        let (out, _) = self.run(&CnfFormula::default().to_dimacs(), Duration::from_secs(10))?;
        Ok(out
            .lines()
            .find(|l| {
                l.starts_with("c ") && l.len() > 2 && !l.trim_start_matches('c').trim().is_empty()
            })
            .map(|l| l.to_string())
            .unwrap_or_else(|| format!("c {}", self.path.display())))
    }

    pub fn solve(&self, formula: &CnfFormula, timeout: Duration) -> Result<SatOutcome> {
        let (out, timed_out) = self.run(&formula.to_dimacs(), timeout)?;
        if timed_out {
            return Ok(SatOutcome::TimedOut);
        }
        parse_output(&out, formula.variable_count as usize)
    }

    fn run(&self, dimacs: &str, timeout: Duration) -> Result<(String, bool)> {
        let mut file = tempfile::Builder::new()
            .prefix("borsuk-")
            .suffix(".cnf")
            .tempfile()?;
        file.write_all(dimacs.as_bytes())?;
        file.flush()?;

        let mut cmd = Command::new(&self.path);
        cmd.arg(file.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null());
        #[cfg(unix)]
        {
            use std::os::unix::process::CommandExt;
            cmd.process_group(0);
        }
        let mut child = cmd.spawn().map_err(|source| Error::SolverLaunch {
            path: self.path.clone(),
            source,
        })?;
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut buf = String::new();
            let _ = stdout.read_to_string(&mut buf);
            buf
        });
        let status = child.wait_timeout(timeout)?;
        let timed_out = status.is_none();
        if timed_out {
            debug!("solver exceeded {timeout:?}, killing");
            kill_tree(&mut child);
        }
        let out = reader.join().unwrap_or_default();
        Ok((out, timed_out))
    }
}

fn kill_tree(child: &mut Child) {
    #[cfg(unix)]
    {
        // The child leads its own process group; take down any helpers too.
        let pgid = child.id() as libc::pid_t;
        unsafe {
            libc::kill(-pgid, libc::SIGKILL);
        }
    }
    let _ = child.kill();
    let _ = child.wait();
}

fn parse_output(out: &str, vars: usize) -> Result<SatOutcome> {
    let mut status = None;
    let mut model = vec![false; vars];
    let mut terminated = false;
    for line in out.lines() {
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::SolverProtocol(format!("bad model literal {tok:?}")))?;
                if lit == 0 {
                    terminated = true;
                    continue;
                }
                let idx = lit.unsigned_abs() as usize;
                if idx > vars {
                    return Err(Error::SolverProtocol(format!(
                        "model mentions variable {idx} > {vars}"
                    )));
                }
                model[idx - 1] = lit > 0;
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") if terminated || vars == 0 => Ok(SatOutcome::Sat(model)),
        Some("SATISFIABLE") => Err(Error::SolverProtocol("model not terminated by 0".into())),
        Some("UNSATISFIABLE") => Ok(SatOutcome::Unsat),
        Some("UNKNOWN") => Ok(SatOutcome::TimedOut),
        Some(other) => Err(Error::SolverProtocol(format!("unknown status {other:?}"))),
        None => Err(Error::SolverProtocol("no status line".into())),
    }
}
