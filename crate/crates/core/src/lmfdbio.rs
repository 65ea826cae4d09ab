//! Number-field invariants from bundled fixtures, a local cache, or the
//! LMFDB JSON API.
//!
//! Environment:
//! - `TAMECF_CACHE_DIR`: cache directory (default `$XDG_CACHE_HOME/tamecf`,
//!   then `$HOME/.cache/tamecf`).
//! - `TAMECF_OFFLINE`: any value other than `0`/empty disables the network.
//! - `TAMECF_LMFDB_URL`: API base URL.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::extfield::NumberFieldProfile;
use crate::poly::{parse_rational_poly, PolyZ};

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org/api/nf_fields/";

const BUNDLED: &str = include_str!("../fixtures/number_fields.json");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("schema violation at {path}: {msg}")]
    Schema { path: String, msg: String },
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("no fixture or cache entry for {0} and the network is disabled")]
    FixtureMiss(String),
    #[error("network unavailable while fetching {query}: {reason}")]
    Unavailable { query: String, reason: String },
    #[error("{query} not found in the remote database")]
    NotFound { query: String },
    #[error("malformed response for {query} at {path}: {msg}")]
    Malformed {
        query: String,
        path: String,
        msg: String,
    },
    #[error("cache error: {0}")]
    Cache(String),
}

/// Where a profile came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Network,
    Cache,
    Fixture,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Network => "network",
            Provenance::Cache => "cache",
            Provenance::Fixture => "fixture",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Fetched {
    pub profile: NumberFieldProfile,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Label(String),
    /// Defining polynomial, constant term first.
    Poly(Vec<BigInt>),
}

impl Query {
    /// A label looks like `n.r1.D.i`; anything else is read as a polynomial
    /// in x.
    pub fn parse(s: &str) -> Result<Query, String> {
        let s = s.trim();
        let parts: Vec<&str> = s.split('.').collect();
        if parts.len() == 4
            && parts
                .iter()
                .all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
        {
            return Ok(Query::Label(s.to_string()));
        }
        let c = parse_rational_poly(s, 'x').map_err(|e| e.to_string())?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err("polynomial must have integer coefficients".into());
        }
        Ok(Query::Poly(c.into_iter().map(|x| x.to_integer()).collect()))
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Label(l) => f.write_str(l),
            Query::Poly(c) => write!(f, "{}", PolyZ::new(c.clone())),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FixtureFile {
    pub schema_version: u64,
    pub fields: BTreeMap<String, NumberFieldProfile>,
}

impl FixtureFile {
    pub fn parse(text: &str) -> Result<FixtureFile, FixtureError> {
        let v: Value = serde_json::from_str(text).map_err(|e| FixtureError::Schema {
            path: "$".into(),
            msg: e.to_string(),
        })?;
        let schema_version = v
            .get("schema_version")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("$.schema_version", "missing or not an integer"))?;
        if schema_version != SCHEMA_VERSION {
            return Err(schema(
                "$.schema_version",
                &format!("unsupported version {schema_version}"),
            ));
        }
        let fields = v
            .get("fields")
            .and_then(Value::as_object)
            .ok_or_else(|| schema("$.fields", "missing or not an object"))?;
        let mut out = BTreeMap::new();
        for (label, rec) in fields {
            let p = record_from_json(label, rec, &format!("$.fields[\"{label}\"]"))?;
            out.insert(label.clone(), p);
        }
        Ok(FixtureFile {
            schema_version,
            fields: out,
        })
    }

    pub fn get(&self, label: &str) -> Option<&NumberFieldProfile> {
        self.fields.get(label)
    }

    pub fn find_poly(&self, poly: &PolyZ) -> Option<&NumberFieldProfile> {
        self.fields.values().find(|p| &p.defining == poly)
    }

    /// Labels starting with `prefix`, e.g. `"6.0.12167."`.
    pub fn labels_with_prefix<'a>(
        &'a self,
        prefix: &'a str,
    ) -> impl Iterator<Item = &'a String> + 'a {
        self.fields.keys().filter(move |l| l.starts_with(prefix))
    }
}

fn schema(path: &str, msg: &str) -> FixtureError {
    FixtureError::Schema {
        path: path.to_string(),
        msg: msg.to_string(),
    }
}

/// The fixture compiled into the library.
pub fn bundled_fixture() -> FixtureFile {
    FixtureFile::parse(BUNDLED).expect("bundled fixture is well formed")
}

pub fn load_fixture(path: &Path) -> Result<FixtureFile, FixtureError> {
    let text = std::fs::read_to_string(path).map_err(|e| FixtureError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    FixtureFile::parse(&text)
}

fn json_int(v: &Value, path: &str) -> Result<BigInt, FixtureError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| schema(path, "not an integer")),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| schema(path, "not a decimal integer")),
        _ => Err(schema(path, "expected an integer or a decimal string")),
    }
}

fn json_u32(v: Option<&Value>, path: &str) -> Result<u32, FixtureError> {
    let v = v.ok_or_else(|| schema(path, "missing"))?;
    let n = json_int(v, path)?;
    u32::try_from(n).map_err(|_| schema(path, "out of range"))
}

fn json_array<'a>(v: Option<&'a Value>, path: &str) -> Result<&'a Vec<Value>, FixtureError> {
    v.ok_or_else(|| schema(path, "missing"))?
        .as_array()
        .ok_or_else(|| schema(path, "not an array"))
}

fn json_rational_vec(v: &Value, path: &str) -> Result<Vec<BigRational>, FixtureError> {
    let arr = v.as_array().ok_or_else(|| schema(path, "not an array"))?;
    arr.iter()
        .enumerate()
        .map(|(j, c)| {
            let cp = format!("{path}[{j}]");
            let pair = c
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| schema(&cp, "expected [num, den]"))?;
            let num = json_int(&pair[0], &format!("{cp}[0]"))?;
            let den = json_int(&pair[1], &format!("{cp}[1]"))?;
            if den.is_zero() {
                return Err(schema(&format!("{cp}[1]"), "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        })
        .collect()
}

fn record_from_json(
    label: &str,
    rec: &Value,
    path: &str,
) -> Result<NumberFieldProfile, FixtureError> {
    let obj = rec
        .as_object()
        .ok_or_else(|| schema(path, "record is not an object"))?;
    let poly: Vec<BigInt> = json_array(obj.get("poly"), &format!("{path}.poly"))?
        .iter()
        .enumerate()
        .map(|(i, c)| json_int(c, &format!("{path}.poly[{i}]")))
        .collect::<Result<_, _>>()?;
    let r1 = json_u32(obj.get("r1"), &format!("{path}.r1"))?;
    let r2 = json_u32(obj.get("r2"), &format!("{path}.r2"))?;
    let class_number = json_int(
        obj.get("class_number")
            .ok_or_else(|| schema(&format!("{path}.class_number"), "missing"))?,
        &format!("{path}.class_number"),
    )?;
    let class_group = json_array(obj.get("class_group"), &format!("{path}.class_group"))?
        .iter()
        .enumerate()
        .map(|(i, c)| json_int(c, &format!("{path}.class_group[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let torsion_order =
        json_u32(obj.get("torsion_order"), &format!("{path}.torsion_order"))? as u64;
    let fundamental_units = match obj.get("fundamental_units") {
        None | Some(Value::Null) => Vec::new(),
        Some(v) => {
            let p = format!("{path}.fundamental_units");
            v.as_array()
                .ok_or_else(|| schema(&p, "not an array"))?
                .iter()
                .enumerate()
                .map(|(i, u)| json_rational_vec(u, &format!("{p}[{i}]")))
                .collect::<Result<_, _>>()?
        }
    };
    let torsion_generator = match obj.get("torsion_generator") {
        None | Some(Value::Null) => None,
        Some(v) => Some(json_rational_vec(v, &format!("{path}.torsion_generator"))?),
    };
    let defining = PolyZ::new(poly);
    let degree = defining.deg();
    Ok(NumberFieldProfile {
        label: label.to_string(),
        defining,
        degree,
        signature: (r1, r2),
        class_number,
        class_group,
        unit_rank: (r1 + r2).saturating_sub(1) as usize,
        torsion_order,
        fundamental_units,
        torsion_generator,
    })
}

fn rational_pairs(v: &[BigRational]) -> Value {
    Value::Array(
        v.iter()
            .map(|c| json!([c.numer().to_string(), c.denom().to_string()]))
            .collect(),
    )
}

/// Fixture-format record; the inverse of the fixture parser.
pub fn record_to_json(p: &NumberFieldProfile) -> Value {
    let mut m = serde_json::Map::new();
    m.insert(
        "poly".into(),
        Value::Array(
            p.defining
                .coeffs()
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        ),
    );
    m.insert("r1".into(), json!(p.signature.0));
    m.insert("r2".into(), json!(p.signature.1));
    m.insert(
        "class_number".into(),
        Value::String(p.class_number.to_string()),
    );
    m.insert(
        "class_group".into(),
        Value::Array(
            p.class_group
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        ),
    );
    m.insert("torsion_order".into(), json!(p.torsion_order));
    m.insert(
        "fundamental_units".into(),
        Value::Array(
            p.fundamental_units
                .iter()
                .map(|u| rational_pairs(u))
                .collect(),
        ),
    );
    if let Some(t) = &p.torsion_generator {
        m.insert("torsion_generator".into(), rational_pairs(t));
    }
    Value::Object(m)
}

/// Absolute norm of the element sum c_i theta^i, where theta is a root of
/// the monic polynomial f.
pub fn element_norm(f: &PolyZ, coords: &[BigRational]) -> BigRational {
    let den = coords.iter().fold(BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let num = PolyZ::new(
        coords
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect(),
    );
    if num.is_zero() {
        return BigRational::zero();
    }
    let n = f.deg();
    BigRational::new(f.resultant(&num), den.pow(n as u32))
}

/// All invariant violations of a profile; empty means consistent.
pub fn validate_profile(p: &NumberFieldProfile) -> Vec<String> {
    let mut out = Vec::new();
    let (r1, r2) = p.signature;
    let n = p.defining.deg();
    if n != p.degree {
        out.push(format!(
            "polynomial degree {n} differs from degree {}",
            p.degree
        ));
    }
    if (r1 + 2 * r2) as usize != n {
        out.push(format!("degree {n} != r1 + 2 r2 = {}", r1 + 2 * r2));
    }
    if (r1 + r2) as usize != p.unit_rank + 1 {
        out.push(format!(
            "unit rank {} != r1 + r2 - 1 = {}",
            p.unit_rank,
            (r1 + r2) as i64 - 1
        ));
    }
    let parts: Vec<&str> = p.label.split('.').collect();
    if parts.len() == 4 {
        match parts[0].parse::<usize>() {
            Ok(d) if d == n => {}
            _ => out.push(format!(
                "label degree component '{}' differs from degree {n}",
                parts[0]
            )),
        }
        match parts[1].parse::<u32>() {
            Ok(x) if x == r1 => {}
            _ => out.push(format!(
                "label signature component '{}' differs from r1 = {r1}",
                parts[1]
            )),
        }
    }
    if !p.defining.is_monic() {
        out.push("defining polynomial is not monic".into());
    }
    let prod: BigInt = p.class_group.iter().product();
    if prod != p.class_number {
        out.push(format!(
            "class group product {prod} != class number {}",
            p.class_number
        ));
    }
    if p.class_group
        .windows(2)
        .any(|w| w[0].is_zero() || !(&w[1] % &w[0]).is_zero())
    {
        out.push("class group invariants do not form a divisor chain".into());
    }
    if p.torsion_order == 0 || p.torsion_order % 2 != 0 {
        out.push(format!("torsion order {} is not even", p.torsion_order));
    }
    if !p.fundamental_units.is_empty() && p.fundamental_units.len() != p.unit_rank {
        out.push(format!(
            "{} fundamental units for unit rank {}",
            p.fundamental_units.len(),
            p.unit_rank
        ));
    }
    for (i, u) in p.fundamental_units.iter().enumerate() {
        if u.len() != n {
            out.push(format!(
                "fundamental unit {i} has {} coordinates, expected {n}",
                u.len()
            ));
            continue;
        }
        if p.defining.is_monic() {
            let nm = element_norm(&p.defining, u);
            if nm.abs() != BigRational::one() {
                out.push(format!("fundamental unit {i} is not a unit: norm {nm}"));
            }
        }
    }
    if let Some(t) = &p.torsion_generator {
        if t.len() != n {
            out.push(format!(
                "torsion generator has {} coordinates, expected {n}",
                t.len()
            ));
        }
    }
    out
}

/// One JSON file per label; writes are atomic.
#[derive(Clone, Debug)]
pub struct ProfileCache {
    dir: PathBuf,
}

impl ProfileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ProfileCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        if let Some(d) = std::env::var_os("TAMECF_CACHE_DIR") {
            return Some(Self::new(d));
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Some(Self::new(PathBuf::from(d).join("tamecf")));
        }
        std::env::var_os("HOME").map(|h| Self::new(PathBuf::from(h).join(".cache").join("tamecf")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, label: &str) -> PathBuf {
        let safe: String = label
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        self.dir.join(format!("{safe}.json"))
    }

    pub fn bytes(p: &NumberFieldProfile) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "label": p.label,
            "record": record_to_json(p),
        }))
        .expect("serializable");
        v.push(b'\n');
        v
    }

    pub fn read(&self, label: &str) -> Result<Option<NumberFieldProfile>, FetchError> {
        let path = self.path(label);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(FetchError::Cache(format!("{}: {e}", path.display()))),
        };
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| FetchError::Cache(format!("{}: {e}", path.display())))?;
        let rec = v
            .get("record")
            .ok_or_else(|| FetchError::Cache(format!("{}: missing record", path.display())))?;
        record_from_json(label, rec, "$.record")
            .map(Some)
            .map_err(|e| FetchError::Cache(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, p: &NumberFieldProfile) -> Result<(), FetchError> {
        let err = |e: std::io::Error| FetchError::Cache(format!("{}: {e}", self.dir.display()));
        std::fs::create_dir_all(&self.dir).map_err(err)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(err)?;
        tmp.write_all(&Self::bytes(p)).map_err(err)?;
        tmp.persist(self.path(&p.label)).map_err(|e| err(e.error))?;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("{0}")]
    Unavailable(String),
}

/// HTTP GET returning the response body.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<String, TransportError>;
}

/// Refuses every request.
pub struct OfflineTransport;

impl Transport for OfflineTransport {
    fn get(&self, _url: &str) -> Result<String, TransportError> {
        Err(TransportError::Unavailable("offline".into()))
    }
}

#[cfg(feature = "network")]
pub struct HttpTransport {
    client: reqwest::blocking::Client,
    retries: u32,
}

#[cfg(feature = "network")]
impl HttpTransport {
    pub fn new(timeout: Duration, retries: u32) -> Result<Self, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .user_agent(concat!("tamecf/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| TransportError::Unavailable(e.to_string()))?;
        Ok(HttpTransport { client, retries })
    }
}

#[cfg(feature = "network")]
impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<String, TransportError> {
        let mut last = String::new();
        for attempt in 0..=self.retries {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(250 << attempt.min(4)));
            }
            match self
                .client
                .get(url)
                .send()
                .and_then(|r| r.error_for_status())
            {
                Ok(r) => {
                    return r
                        .text()
                        .map_err(|e| TransportError::Unavailable(e.to_string()))
                }
                Err(e) => last = e.to_string(),
            }
        }
        Err(TransportError::Unavailable(last))
    }
}

pub fn offline_from_env() -> bool {
    std::env::var("TAMECF_OFFLINE")
        .map(|v| !v.is_empty() && v != "0")
        .unwrap_or(false)
}

#[derive(Clone, Debug)]
pub struct StoreConfig {
    pub base_url: String,
    pub offline: bool,
    pub timeout: Duration,
    pub retries: u32,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            base_url: DEFAULT_BASE_URL.into(),
            offline: true,
            timeout: Duration::from_secs(20),
            retries: 2,
        }
    }
}

impl StoreConfig {
    pub fn from_env() -> Self {
        StoreConfig {
            base_url: std::env::var("TAMECF_LMFDB_URL").unwrap_or_else(|_| DEFAULT_BASE_URL.into()),
            offline: offline_from_env() || !cfg!(feature = "network"),
            ..Default::default()
        }
    }
}

/// Lookup order: bundled fixture, cache, network. Network hits are written
/// to the cache.
pub struct ProfileStore {
    fixture: FixtureFile,
    cache: Option<ProfileCache>,
    transport: Box<dyn Transport>,
    config: StoreConfig,
}

impl ProfileStore {
    pub fn new(
        fixture: FixtureFile,
        cache: Option<ProfileCache>,
        transport: Box<dyn Transport>,
        config: StoreConfig,
    ) -> Self {
        ProfileStore {
            fixture,
            cache,
            transport,
            config,
        }
    }

    /// Bundled fixture only; never touches disk or network.
    pub fn fixtures_only() -> Self {
        Self::new(
            bundled_fixture(),
            None,
            Box::new(OfflineTransport),
            StoreConfig::default(),
        )
    }

    pub fn from_env() -> Self {
        let config = StoreConfig::from_env();
        let transport: Box<dyn Transport> = make_transport(&config);
        Self::new(
            bundled_fixture(),
            ProfileCache::from_env(),
            transport,
            config,
        )
    }

    pub fn fixture(&self) -> &FixtureFile {
        &self.fixture
    }

    pub fn fetch(&self, query: &Query) -> Result<Fetched, FetchError> {
        let label = match query {
            Query::Label(l) => Some(l.clone()),
            Query::Poly(c) => self
                .fixture
                .find_poly(&PolyZ::new(c.clone()))
                .map(|p| p.label.clone()),
        };
        if let Some(p) = label.as_ref().and_then(|l| self.fixture.get(l)) {
            return Ok(Fetched {
                profile: p.clone(),
                provenance: Provenance::Fixture,
            });
        }
        if let (Some(cache), Some(l)) = (&self.cache, &label) {
            if let Some(p) = cache.read(l)? {
                return Ok(Fetched {
                    profile: p,
                    provenance: Provenance::Cache,
                });
            }
        }
        if self.config.offline {
            return Err(FetchError::FixtureMiss(query.to_string()));
        }
        let url = match query {
            Query::Label(l) => format!("{}?label={l}&_format=json", self.config.base_url),
            Query::Poly(c) => format!(
                "{}?coeffs={}&_format=json",
                self.config.base_url,
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        };
        let body = self
            .transport
            .get(&url)
            .map_err(|e| FetchError::Unavailable {
                query: query.to_string(),
                reason: e.to_string(),
            })?;
        let p = parse_api_response(&query.to_string(), &body)?;
        self.store(&p)?;
        Ok(Fetched {
            profile: p,
            provenance: Provenance::Network,
        })
    }

    pub fn fetch_label(&self, label: &str) -> Result<Fetched, FetchError> {
        self.fetch(&Query::Label(label.to_string()))
    }

    fn store(&self, p: &NumberFieldProfile) -> Result<(), FetchError> {
        match &self.cache {
            Some(c) => c.write(p),
            None => Ok(()),
        }
    }
}

#[cfg(feature = "network")]
fn make_transport(config: &StoreConfig) -> Box<dyn Transport> {
    if config.offline {
        return Box::new(OfflineTransport);
    }
    match HttpTransport::new(config.timeout, config.retries) {
        Ok(t) => Box::new(t),
        Err(_) => Box::new(OfflineTransport),
    }
}

#[cfg(not(feature = "network"))]
fn make_transport(_config: &StoreConfig) -> Box<dyn Transport> {
    Box::new(OfflineTransport)
}

/// Parse an `nf_fields` API response: `{"data": [record]}` with `coeffs`,
/// `r2`, `class_group`, `torsion_order` and `units` (polynomials in `a`).
pub fn parse_api_response(query: &str, body: &str) -> Result<NumberFieldProfile, FetchError> {
    let bad = |path: &str, msg: &str| FetchError::Malformed {
        query: query.to_string(),
        path: path.to_string(),
        msg: msg.to_string(),
    };
    let v: Value = serde_json::from_str(body).map_err(|e| bad("$", &e.to_string()))?;
    let data = v
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("$.data", "missing or not an array"))?;
    let rec = match data.first() {
        Some(r) => r,
        None => {
            return Err(FetchError::NotFound {
                query: query.to_string(),
            })
        }
    };
    let int = |key: &str| -> Result<BigInt, FetchError> {
        let p = format!("$.data[0].{key}");
        let x = rec.get(key).ok_or_else(|| bad(&p, "missing"))?;
        json_int(x, &p).map_err(|e| bad(&p, &e.to_string()))
    };
    let label = rec
        .get("label")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("$.data[0].label", "missing or not a string"))?
        .to_string();
    let coeffs = rec
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("$.data[0].coeffs", "missing or not an array"))?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json_int(c, &format!("$.data[0].coeffs[{i}]"))
                .map_err(|e| bad("$.data[0].coeffs", &e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let defining = PolyZ::new(coeffs);
    let n = defining.deg();
    let r2 = u32::try_from(int("r2")?).map_err(|_| bad("$.data[0].r2", "out of range"))?;
    let r1 = (n as u32)
        .checked_sub(2 * r2)
        .ok_or_else(|| bad("$.data[0].r2", "exceeds degree / 2"))?;
    let class_group = rec
        .get("class_group")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("$.data[0].class_group", "missing or not an array"))?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json_int(c, &format!("$.data[0].class_group[{i}]"))
                .map_err(|e| bad("$.data[0].class_group", &e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let class_number = match rec.get("class_number") {
        Some(_) => int("class_number")?,
        None => class_group.iter().product(),
    };
    let torsion_order = u64::try_from(int("torsion_order")?)
        .map_err(|_| bad("$.data[0].torsion_order", "out of range"))?;
    let mut fundamental_units = Vec::new();
    if let Some(units) = rec.get("units") {
        let arr = units
            .as_array()
            .ok_or_else(|| bad("$.data[0].units", "not an array"))?;
        for (i, u) in arr.iter().enumerate() {
            let p = format!("$.data[0].units[{i}]");
            let s = u.as_str().ok_or_else(|| bad(&p, "not a string"))?;
            let mut c = parse_rational_poly(s, 'a').map_err(|e| bad(&p, &e.to_string()))?;
            if c.len() > n {
                return Err(bad(&p, "unit not reduced modulo the defining polynomial"));
            }
            c.resize(n, BigRational::zero());
            fundamental_units.push(c);
        }
    }
    Ok(NumberFieldProfile {
        label,
        defining,
        degree: n,
        signature: (r1, r2),
        class_number,
        class_group,
        unit_rank: (r1 + r2).saturating_sub(1) as usize,
        torsion_order,
        fundamental_units,
        torsion_generator: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    #[test]
    fn bundled_fixture_is_consistent() {
        let f = bundled_fixture();
        assert_eq!(f.fields.len(), 10);
        for p in f.fields.values() {
            assert!(
                validate_profile(p).is_empty(),
                "{}: {:?}",
                p.label,
                validate_profile(p)
            );
            p.validate().unwrap();
        }
        let l62 = f.get("6.0.141911930944.3").unwrap();
        assert_eq!((l62.degree, l62.signature, l62.unit_rank), (6, (0, 3), 2));
        assert_eq!(f.get("3.3.961.1").unwrap().degree, 3);
    }

    #[test]
    fn violations_are_reported() {
        let f = bundled_fixture();
        let mut p = f.get("3.3.961.1").unwrap().clone();
        p.signature = (1, 0);
        assert!(validate_profile(&p).iter().any(|v| v.contains("r1 + 2 r2")));
        let mut p = f.get("3.3.961.1").unwrap().clone();
        p.fundamental_units[0] = vec![
            BigRational::from_integer(2.into()),
            BigRational::zero(),
            BigRational::zero(),
        ];
        let v = validate_profile(&p);
        assert!(
            v.iter()
                .any(|m| m.contains("not a unit") && m.contains("norm 8")),
            "{v:?}"
        );
    }

    #[test]
    fn norm_of_rational_element() {
        // x^2 + 1: N(1/2 + i/2) = 1/2
        let f = PolyZ::from_i64(&[1, 0, 1]);
        let h = BigRational::new(1.into(), 2.into());
        assert_eq!(element_norm(&f, &[h.clone(), h.clone()]), h);
        // x^3 - 2: N(theta) = 2
        let g = PolyZ::from_i64(&[-2, 0, 0, 1]);
        let one = BigRational::one();
        assert_eq!(
            element_norm(&g, &[BigRational::zero(), one, BigRational::zero()]),
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad = r#"{"schema_version": 1, "fields": {"2.0.4.1": {"poly": [1, 0, "x"], "r1": 0, "r2": 1,
            "class_number": "1", "class_group": [], "torsion_order": 4}}}"#;
        match FixtureFile::parse(bad) {
            Err(FixtureError::Schema { path, .. }) => {
                assert_eq!(path, "$.fields[\"2.0.4.1\"].poly[2]")
            }
            other => panic!("{other:?}"),
        }
        let ok = r#"{"schema_version": 1, "fields": {"2.0.4.1": {"poly": [1, 0, 1], "r1": 0, "r2": 1,
            "class_number": 1, "class_group": [], "torsion_order": 4}}}"#;
        let f = FixtureFile::parse(ok).unwrap();
        assert!(validate_profile(f.get("2.0.4.1").unwrap()).is_empty());
    }

    #[test]
    fn record_round_trip() {
        let f = bundled_fixture();
        for p in f.fields.values() {
            let back = record_from_json(&p.label, &record_to_json(p), "$").unwrap();
            assert_eq!(&back, p);
        }
    }

    struct Canned(Mutex<Vec<String>>, String);

    impl Transport for Canned {
        fn get(&self, url: &str) -> Result<String, TransportError> {
            self.0.lock().unwrap().push(url.to_string());
            Ok(self.1.clone())
        }
    }

    const API_BODY: &str = r#"{"data": [{"label": "3.1.23.1", "coeffs": [-1, -1, 0, 1], "r2": 1,
        "class_group": [], "class_number": 1, "torsion_order": 2, "units": ["a"]}]}"#;

    fn online() -> StoreConfig {
        StoreConfig {
            offline: false,
            ..Default::default()
        }
    }

    #[test]
    fn fetch_order_and_cache_round_trip() {
        // fixture hits are never written to the cache
        let dir = tempfile::tempdir().unwrap();
        let cache = ProfileCache::new(dir.path());
        let store = ProfileStore::new(
            bundled_fixture(),
            Some(cache.clone()),
            Box::new(OfflineTransport),
            StoreConfig::default(),
        );
        for _ in 0..2 {
            assert_eq!(
                store.fetch_label("3.3.961.1").unwrap().provenance,
                Provenance::Fixture
            );
        }
        assert!(!cache.path("3.3.961.1").exists());

        let dir = tempfile::tempdir().unwrap();
        let cache = ProfileCache::new(dir.path());
        let t = Canned(Mutex::new(Vec::new()), API_BODY.into());
        let store = ProfileStore::new(
            FixtureFile::default(),
            Some(cache.clone()),
            Box::new(t),
            online(),
        );
        let a = store.fetch_label("3.1.23.1").unwrap();
        assert_eq!(a.provenance, Provenance::Network);
        assert!(validate_profile(&a.profile).is_empty());
        let bytes1 = std::fs::read(cache.path("3.1.23.1")).unwrap();
        let b = store.fetch_label("3.1.23.1").unwrap();
        assert_eq!(b.provenance, Provenance::Cache);
        assert_eq!(a.profile, b.profile);
        cache.write(&b.profile).unwrap();
        assert_eq!(bytes1, std::fs::read(cache.path("3.1.23.1")).unwrap());
    }

    #[test]
    fn offline_misses_and_malformed_responses_differ() {
        let store = ProfileStore::fixtures_only();
        assert!(matches!(
            store.fetch_label("5.5.14641.1"),
            Err(FetchError::FixtureMiss(_))
        ));
        assert_eq!(
            store.fetch_label("3.3.961.1").unwrap().provenance,
            Provenance::Fixture
        );
        let q = Query::parse("x^3 - x^2 - 10x + 8").unwrap();
        assert_eq!(store.fetch(&q).unwrap().profile.label, "3.3.961.1");

        let t = Canned(
            Mutex::new(Vec::new()),
            r#"{"data": [{"label": "x"}]}"#.into(),
        );
        let store = ProfileStore::new(FixtureFile::default(), None, Box::new(t), online());
        assert!(matches!(
            store.fetch_label("3.1.23.1"),
            Err(FetchError::Malformed { .. })
        ));
        let t = Canned(Mutex::new(Vec::new()), r#"{"data": []}"#.into());
        let store = ProfileStore::new(FixtureFile::default(), None, Box::new(t), online());
        assert!(matches!(
            store.fetch_label("3.1.23.1"),
            Err(FetchError::NotFound { .. })
        ));
    }

    #[test]
    fn query_parsing() {
        assert_eq!(
            Query::parse("6.0.153664.1").unwrap(),
            Query::Label("6.0.153664.1".into())
        );
        assert!(matches!(Query::parse("x^2+1").unwrap(), Query::Poly(c) if c.len() == 3));
        assert!(Query::parse("x/2").is_err());
    }
}
