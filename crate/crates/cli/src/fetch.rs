//! Client for LMFDB-style isogeny-class endpoints with a content-addressed
//! disk cache.
//!
//! Records carry the L-polynomial `1 + a_1 T + ... + q^g T^{2g}`; its
//! reversal is the monic Frobenius polynomial in ascending order.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;
use weilreg::report::{Hypothesis, InputRecord, Int};

/// Environment variable holding the API base URL.
pub const BASE_URL_VAR: &str = "WEILREG_API_URL";
/// Environment variable holding the cache directory.
pub const CACHE_DIR_VAR: &str = "WEILREG_CACHE_DIR";
pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org/api";
pub const DEFAULT_CACHE_DIR: &str = ".weilreg-cache";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("no cached response for {query} (key {key}); rerun without --offline once the endpoint is reachable")]
    CacheMiss { query: String, key: String },
    #[error("request for {query} failed: {reason}; retry later or use --offline with a populated cache")]
    Network { query: String, reason: String },
    #[error("response schema changed: missing or malformed field `{field}`")]
    SchemaError { field: String },
    #[error("cache: {0}")]
    Io(#[from] std::io::Error),
}

/// Isogeny classes of dimension `g` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Query {
    pub g: u32,
    pub q: u64,
}

impl Query {
    /// Path and parameters, independent of the base URL.
    pub fn path(&self) -> String {
        format!("av_fq_isog/?g={}&q={}&_format=json&_fields=label,g,q,poly", self.g, self.q)
    }

    /// Cache file stem: SHA-256 of the path.
    pub fn key(&self) -> String {
        hex::encode(Sha256::digest(self.path().as_bytes()))
    }
}

pub struct Client {
    pub base_url: String,
    pub cache_dir: PathBuf,
    pub offline: bool,
}

impl Client {
    pub fn from_env(offline: bool) -> Self {
        Client {
            base_url: std::env::var(BASE_URL_VAR).unwrap_or_else(|_| DEFAULT_BASE_URL.into()),
            cache_dir: std::env::var(CACHE_DIR_VAR).unwrap_or_else(|_| DEFAULT_CACHE_DIR.into()).into(),
            offline,
        }
    }

    fn cache_path(&self, query: &Query) -> PathBuf {
        self.cache_dir.join(format!("{}.json", query.key()))
    }

    /// The raw response body, from cache when present.
    pub fn body(&self, query: &Query) -> Result<String, FetchError> {
        let path = self.cache_path(query);
        if path.exists() {
            return Ok(fs::read_to_string(path)?);
        }
        if self.offline {
            return Err(FetchError::CacheMiss { query: query.path(), key: query.key() });
        }
        let url = format!("{}/{}", self.base_url.trim_end_matches('/'), query.path());
        let agent = ureq::AgentBuilder::new().timeout(Duration::from_secs(30)).build();
        let body = agent
            .get(&url)
            .call()
            .map_err(|e| FetchError::Network { query: query.path(), reason: e.to_string() })?
            .into_string()
            .map_err(|e| FetchError::Network { query: query.path(), reason: e.to_string() })?;
        // refuse to cache something we cannot parse
        parse_records(&body)?;
        store(&self.cache_dir, query, &body)?;
        Ok(body)
    }

    pub fn fetch(&self, query: &Query) -> Result<Vec<InputRecord>, FetchError> {
        parse_records(&self.body(query)?)
    }
}

/// Write a response body under its query key.
pub fn store(dir: &Path, query: &Query, body: &str) -> Result<(), FetchError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", query.key()));
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, body)?;
    fs::rename(tmp, path)?;
    Ok(())
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, FetchError> {
    v.get(name).ok_or_else(|| FetchError::SchemaError { field: name.into() })
}

fn schema(name: &str) -> FetchError {
    FetchError::SchemaError { field: name.into() }
}

/// Normalize a response to weight-one input records.
pub fn parse_records(body: &str) -> Result<Vec<InputRecord>, FetchError> {
    let v: Value = serde_json::from_str(body).map_err(|_| schema("data"))?;
    let data = field(&v, "data")?.as_array().ok_or_else(|| schema("data"))?;
    data.iter()
        .map(|rec| {
            let label = field(rec, "label")?.as_str().ok_or_else(|| schema("label"))?;
            let g = field(rec, "g")?.as_u64().ok_or_else(|| schema("g"))?;
            let q = field(rec, "q")?.as_u64().ok_or_else(|| schema("q"))?;
            let poly = field(rec, "poly")?.as_array().ok_or_else(|| schema("poly"))?;
            let mut coeffs: Vec<Int> = poly
                .iter()
                .map(|c| c.as_i64().map(Int::from).ok_or_else(|| schema("poly")))
                .collect::<Result<_, _>>()?;
            if coeffs.len() as u64 != 2 * g + 1 {
                return Err(schema("poly"));
            }
            coeffs.reverse();
            Ok(InputRecord {
                id: label.to_string(),
                q,
                m: 1,
                coeffs,
                label: Some(label.to_string()),
                hypothesis: Hypothesis::Abelian,
            })
        })
        .collect()
}
