//! Runtime configuration with the precedence flags > environment > config
//! file. Environment variables use the GAMMA4_ prefix; the optional config
//! file is gamma4.toml in the working directory.

use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Default, Deserialize)]
pub struct FileConfig {
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub max_factor_digits: Option<u32>,
    pub max_matrix: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub cache_enabled: bool,
    pub skip_floer: bool,
    pub skip_linkform: bool,
    pub max_factor_digits: u32,
    pub max_matrix: usize,
}

pub struct Flags {
    pub jobs: Option<usize>,
    pub no_cache: bool,
    pub skip_floer: bool,
    pub skip_linkform: bool,
    pub max_factor_digits: Option<u32>,
    pub max_matrix: Option<usize>,
}

pub fn load(flags: &Flags) -> Settings {
    let file: FileConfig = std::fs::read_to_string("gamma4.toml")
        .ok()
        .and_then(|text| toml::from_str(&text).ok())
        .unwrap_or_default();

    let env_jobs = std::env::var("GAMMA4_JOBS")
        .ok()
        .and_then(|v| v.parse().ok());
    let env_cache = std::env::var("GAMMA4_CACHE_DIR").ok().map(PathBuf::from);

    let jobs = flags.jobs.or(env_jobs).or(file.jobs);
    let cache_dir = env_cache.or(file.cache_dir);
    Settings {
        jobs,
        cache_enabled: !flags.no_cache && cache_dir.is_some(),
        cache_dir,
        skip_floer: flags.skip_floer,
        skip_linkform: flags.skip_linkform,
        max_factor_digits: flags
            .max_factor_digits
            .or(file.max_factor_digits)
            .unwrap_or(gamma4_core::arith::DEFAULT_FACTOR_DIGITS),
        max_matrix: flags
            .max_matrix
            .or(file.max_matrix)
            .unwrap_or(gamma4_core::linkform::DEFAULT_MATRIX_CAP),
    }
}
