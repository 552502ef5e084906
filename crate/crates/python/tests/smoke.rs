use std::path::PathBuf;
use std::process::Command;

/// Runs the Python smoke script against the cdylib built alongside this test.
#[test]
fn python_smoke_script() {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = ["libparetail_py.so", "libparetail_py.dylib", "paretail_py.dll"]
        .iter()
        .flat_map(|n| [deps.join(n), deps.parent().unwrap().join(n)])
        .find(|p| p.exists())
        .expect("compiled extension next to the test binary");
    let dir = tempfile::tempdir().unwrap();
    let ext = if cfg!(windows) { "paretail.pyd" } else { "paretail.so" };
    std::fs::copy(&lib, dir.path().join(ext)).unwrap();
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("python/smoke_test.py");
    let out = Command::new("python3")
        .arg(&script)
        .env("PARETAIL_MODULE_DIR", dir.path())
        .output()
        .expect("python3 on PATH");
    assert!(
        out.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("smoke test passed"));
}
