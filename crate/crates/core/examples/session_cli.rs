//! Drives the command-line front end in-process on a session file.

use edlab::cli::{extract_report, run, Session};

const SESSION: &str = r#"
conductor = 3
variables = ["x1", "x2"]

[map]
kind = "endomorphism"
images = ["z*x1 + x2", "z*x2"]

[options]
degree = 6
"#;

fn main() -> edlab::Result<()> {
    let session = Session::from_toml(SESSION)?;
    println!("session map: {}", session.require_map()?);

    let path = std::env::temp_dir().join("edlab-example-session.toml");
    std::fs::write(&path, SESSION)?;
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        [
            "edlab",
            "member",
            "--session",
            path.to_str().unwrap_or_default(),
            "--poly",
            "x1^3",
        ],
        &mut out,
        &mut err,
    );
    let text = String::from_utf8_lossy(&out);
    print!("{text}");
    println!("exit status {code}");
    if let Some(report) = extract_report(&text) {
        println!("verdict from the report block: {}", report["result"]["verdict"]);
    }
    Ok(())
}
