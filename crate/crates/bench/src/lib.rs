//! Fixtures shared by the pipeline benchmarks.

use std::path::{Path, PathBuf};

use squadsim::{Environment, Scenario};

/// Directory of the bundled maps.
pub fn maps_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../maps")
}

/// Loads a bundled scenario by map name (`flat`, `corridor`, `office`).
pub fn scenario(name: &str) -> Scenario {
    let path = maps_dir().join(format!("{name}.scenario.toml"));
    Scenario::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn environment(sc: &Scenario) -> Environment {
    Environment::for_scenario(sc).expect("bundled environment")
}
