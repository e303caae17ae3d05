//! Drive the command-line interface in-process: classify one element, then
//! regenerate every artefact into a temporary directory.
//!
//! `cargo run --release --example cli_reproduce`

fn main() {
    let dir = std::env::temp_dir().join("kpbbm-example-output");
    let argv = |args: &[&str]| std::iter::once("kpbbm").chain(args.iter().copied()).map(String::from).collect::<Vec<_>>();

    let code = kpbbm::cli::run(argv(&["classify", "--element", "0,0,1,1"]));
    println!("classify exit code: {code}");

    let code = kpbbm::cli::run(argv(&["--output-dir", dir.to_str().unwrap(), "reproduce", "--skip-simulation"]));
    println!("reproduce exit code: {code}; summary in {}", dir.join("report.json").display());
}
