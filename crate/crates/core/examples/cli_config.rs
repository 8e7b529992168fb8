//! Drives the command-line layer from a TOML configuration: the config is
//! layered over a preset, resolved, executed, and the report envelope is
//! printed on stdout.

use macrocoherence::cli::{run_command, SpecInput};

const CONFIG: &str = r#"
command = "sweep"
preset = "natural-units-reference"

[params]
nbar = 2.0
d01 = 0.5

[sweep]
axis = "gamma"
values = ["0.5x", "1x", 2.0e-3]
mode = "analytic"

[output]
format = "json"
"#;

fn main() -> macrocoherence::Result<()> {
    let spec = SpecInput::from_toml(CONFIG)?.resolve()?;
    run_command(&spec, &mut std::io::stdout().lock())?;
    Ok(())
}
