//! Loading fans, collections, stable-map data and GLSM problems from disk.
//! Every error names the file, and either the JSON position (line and
//! column) or the offending field path.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;

use toric_core::collapse::StableMapFile;
use toric_core::delta::CollectionFile;
use toric_core::glsm::GlsmFile;
use toric_core::{BigRational, Fan, GLSMProblem, GenusZeroStableMapData, IntMatrix, WeakDeltaCollection};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}: cannot read file", path.display()))
}

/// Parses `path` as `T`; serde_json reports line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// A fan argument: an existing file, otherwise a built-in name such as
/// `P2`, `P1xP1` or `F1`.
pub fn load_fan(arg: &str) -> Result<Fan> {
    let path = Path::new(arg);
    if path.exists() {
        return read_json(path);
    }
    Fan::named(arg).ok_or_else(|| anyhow!("{arg}: no such file or built-in fan"))
}

/// Fan names inside collection files: built-ins first, then a file next to
/// the referring file.
fn fan_resolver(base: &Path) -> impl FnMut(&str) -> Option<Fan> + '_ {
    move |name| {
        Fan::named(name).or_else(|| {
            let dir = base.parent().map_or_else(PathBuf::new, Path::to_path_buf);
            let text = fs::read_to_string(dir.join(name)).ok()?;
            serde_json::from_str(&text).ok()
        })
    }
}

pub fn load_collection(path: &Path) -> Result<WeakDeltaCollection> {
    let file: CollectionFile = read_json(path)?;
    file.resolve(fan_resolver(path))
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn load_stable_map(path: &Path) -> Result<GenusZeroStableMapData> {
    let file: StableMapFile = read_json(path)?;
    file.resolve(fan_resolver(path))
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn load_glsm(path: &Path) -> Result<GLSMProblem> {
    let file: GlsmFile = read_json(path)?;
    file.problem().map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Charges and FI parameters only; amplitudes may be absent.
pub fn load_charges(path: &Path) -> Result<(IntMatrix, Vec<BigRational>)> {
    let file: GlsmFile = read_json(path)?;
    let q = file.charge_matrix().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let fi = file.fi_vector().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    if fi.len() != q.rows() {
        bail!("{}: fi: expected length {}, found {}", path.display(), q.rows(), fi.len());
    }
    Ok((q, fi))
}
