//! Drives a subcommand from a config built in code and lists the files the
//! run directory ends up with.

use fracgs::runner::{Command, RunConfig, RunWriter};
use serde_json::json;

fn main() -> fracgs::Result<()> {
    let cfg = RunConfig::from_value(
        json!({"s": 0.5, "family": "pure_power", "ell": 1, "c2": 1}),
        std::path::Path::new("."),
    )?;
    let dir = std::env::temp_dir().join(format!("fracgs-example-{}", &cfg.hash()[..12]));
    let mut writer = RunWriter::create(&dir)?;
    let summary = Command::Minimize.run(&cfg, &mut writer)?;
    let manifest = writer.finish(Command::Minimize.name(), &cfg, "ok")?;
    println!("{summary}");
    println!("{} -> {:?}", dir.display(), manifest.outputs);
    println!("config hash {}", manifest.config_hash);
    Ok(())
}
