//! On-disk cache of per-cogenus template data.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toric_severi::coeffs::{CoeffContext, CoeffTable, TemplateData};

pub const ENV_VAR: &str = "TORIC_SEVERI_CACHE";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Payload {
    delta: usize,
    templates: Vec<TemplateData>,
    table: CoeffTable,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    hash: String,
    payload: Payload,
}

fn digest(payload: &Payload) -> Result<String> {
    let bytes = serde_json::to_vec(payload)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn default_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(dir);
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("toric-severi")
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path(dir: &Path, delta: usize) -> PathBuf {
        dir.join(format!("v{FORMAT_VERSION}")).join(format!("templates-{delta}.json"))
    }

    fn load(path: &Path) -> Option<Payload> {
        let raw = fs::read(path).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&raw).ok()?;
        if entry.version != FORMAT_VERSION || digest(&entry.payload).ok()? != entry.hash {
            eprintln!("warning: discarding stale cache entry {}", path.display());
            return None;
        }
        Some(entry.payload)
    }

    /// Makes template data for `1..=delta_max` available to `ctx`, reading
    /// and filling the cache as needed.
    pub fn warm(&self, ctx: &CoeffContext, delta_max: usize) -> Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        for delta in 1..=delta_max {
            let path = Self::path(dir, delta);
            if let Some(payload) = Self::load(&path) {
                if payload.delta == delta {
                    ctx.preload(delta, payload.templates);
                    continue;
                }
            }
            let templates = ctx.templates(delta)?.as_ref().clone();
            let table = ctx.table(delta)?;
            let payload = Payload { delta, templates, table };
            let entry = CacheEntry { version: FORMAT_VERSION, hash: digest(&payload)?, payload };
            let parent = path.parent().expect("cache path has a parent");
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, serde_json::to_vec(&entry)?).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, &path)?;
        }
        Ok(())
    }
}
