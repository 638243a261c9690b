use std::path::Path;
use std::process::Command;

/// Runs the Python smoke script against the freshly built library.
#[test]
fn python_smoke_script() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/smoke-<hash>
    let lib = exe.parent().unwrap().parent().unwrap().join("libborsuk.so");
    if !lib.exists() || Command::new("python3").arg("--version").output().is_err() {
        eprintln!("skipping: no python3 or {} missing", lib.display());
        return;
    }
    let mut cmd = Command::new("python3");
    cmd.arg(root.join("python/smoke_test.py"))
        .env("BORSUK_LIB", &lib)
        .env_remove("SAT_SOLVER");
    let solver = lib.with_file_name("borsuk-kissat");
    if solver.exists() {
        cmd.env("SAT_SOLVER", solver);
    }
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{}\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}
