//! The `wittenlab-cache v1` text format: a header line, then one
//! tab-separated [`Record`] per line. Import re-derives every value.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use wittenlab_core::hodge::{extract_hodge_table, HodgeKey, HodgeTable};
use wittenlab_core::hurwitz::{HurwitzKey, HurwitzTable, BRUTE_MAX_DEGREE};
use wittenlab_core::psi::{stable_keys, CorrelatorCache, CorrelatorKey};
use wittenlab_core::rational::{parse, render};
use wittenlab_core::series::Monomial;
use wittenlab_core::virasoro::build_free_energy;
use wittenlab_core::{Partition, Rational};

use crate::compute::{hurwitz_value, Method};
use crate::error::{AppError, AppResult};
use crate::record::{Provenance, Record};

pub const HEADER: &str = "wittenlab-cache v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Kind {
    Psi,
    Hurwitz,
    Hodge,
    Series,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Psi, Kind::Hurwitz, Kind::Hodge, Kind::Series];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Psi => "psi",
            Kind::Hurwitz => "hurwitz",
            Kind::Hodge => "hodge",
            Kind::Series => "series",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

fn csv(v: &[u32]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_csv(s: &str) -> Result<Vec<u32>, String> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.parse::<u32>().map_err(|_| format!("bad integer list {s:?}"))).collect()
}

/// Splits `a=1;b=2` and checks the field names in order.
fn fields<'a>(key: &'a str, names: &[&str]) -> Result<Vec<&'a str>, String> {
    let parts: Vec<&str> = key.split(';').collect();
    if parts.len() != names.len() {
        return Err(format!("key {key:?} needs fields {}", names.join(";")));
    }
    parts
        .iter()
        .zip(names)
        .map(|(p, n)| match p.split_once('=') {
            Some((a, b)) if a == *n => Ok(b),
            _ => Err(format!("key {key:?}: expected field {n}")),
        })
        .collect()
}

pub fn psi_key(k: &CorrelatorKey) -> String {
    format!("g={};k={}", k.genus(), csv(k.exponents()))
}

pub fn parse_psi_key(s: &str) -> Result<CorrelatorKey, String> {
    let f = fields(s, &["g", "k"])?;
    let g = f[0].parse().map_err(|_| format!("bad genus {:?}", f[0]))?;
    Ok(CorrelatorKey::new(g, parse_csv(f[1])?))
}

pub fn hurwitz_key(k: &HurwitzKey) -> String {
    format!("nu={};mu={};r={};connected={}", k.nu.to_csv(), k.mu.to_csv(), k.r, k.connected)
}

pub fn parse_hurwitz_key(s: &str) -> Result<HurwitzKey, String> {
    let f = fields(s, &["nu", "mu", "r", "connected"])?;
    let nu = Partition::parse_csv(f[0]).map_err(|e| e.to_string())?;
    let mu = Partition::parse_csv(f[1]).map_err(|e| e.to_string())?;
    let r = f[2].parse().map_err(|_| format!("bad r {:?}", f[2]))?;
    let connected = f[3].parse().map_err(|_| format!("bad connected flag {:?}", f[3]))?;
    HurwitzKey::new(nu, mu, r, connected).map_err(|e| e.to_string())
}

pub fn hodge_key(k: &HodgeKey) -> String {
    format!("g={};k={};lambda={}", k.genus, csv(k.exponents()), k.lambda)
}

pub fn parse_hodge_key(s: &str) -> Result<HodgeKey, String> {
    let f = fields(s, &["g", "k", "lambda"])?;
    let g = f[0].parse().map_err(|_| format!("bad genus {:?}", f[0]))?;
    let j = f[2].parse().map_err(|_| format!("bad lambda {:?}", f[2]))?;
    Ok(HodgeKey::new(g, parse_csv(f[1])?, j))
}

pub fn series_key(m: &Monomial) -> String {
    format!("t={}", csv(&m.indices()))
}

pub fn parse_series_key(s: &str) -> Result<Monomial, String> {
    let f = fields(s, &["t"])?;
    Ok(Monomial::from_indices(&parse_csv(f[0])?))
}

/// Cached exact values; the series entries are coefficients of the free energy.
#[derive(Clone, Debug, Default)]
pub struct Store {
    pub psi: CorrelatorCache,
    pub hurwitz: BTreeMap<HurwitzKey, Rational>,
    pub hodge: HodgeTable,
    pub series: BTreeMap<Monomial, Rational>,
}

/// How much to compute for `export-cache`.
#[derive(Clone, Debug)]
pub struct Population {
    pub kinds: Vec<Kind>,
    pub max_genus: u32,
    pub max_points: usize,
    pub max_degree: u32,
    pub max_r: u32,
    pub max_index: usize,
}

impl Default for Population {
    fn default() -> Self {
        Population { kinds: Kind::ALL.to_vec(), max_genus: 2, max_points: 5, max_degree: 3, max_r: 4, max_index: 3 }
    }
}

impl Store {
    pub fn len(&self) -> usize {
        self.psi.len() + self.hurwitz.len() + self.hodge.len() + self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn populate(&mut self, pop: &Population) -> AppResult<()> {
        for kind in &pop.kinds {
            match kind {
                Kind::Psi => {
                    for key in stable_keys(pop.max_genus, pop.max_points) {
                        self.psi.correlator(&key);
                    }
                }
                Kind::Hurwitz => {
                    let d = pop.max_degree.min(BRUTE_MAX_DEGREE);
                    let table = HurwitzTable::build_bruteforce(d, pop.max_r, true)?;
                    for ((nu, mu, r), v) in table.iter() {
                        self.hurwitz.insert(HurwitzKey::new(nu.clone(), mu.clone(), *r, true)?, v.clone());
                    }
                }
                Kind::Hodge => {
                    let rep = extract_hodge_table(&mut self.psi, 1, pop.max_points.min(4), BRUTE_MAX_DEGREE, true)?;
                    for (k, v) in rep.table.iter() {
                        self.hodge.insert(k.clone(), v.clone());
                    }
                }
                Kind::Series => {
                    let f = build_free_energy(&mut self.psi, pop.max_index, pop.max_degree);
                    for (m, c) in f.iter() {
                        self.series.insert(m.clone(), c.clone());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn records(&self, provenance: Provenance) -> Vec<Record> {
        let mut out = Vec::with_capacity(self.len());
        let mut push = |kind: Kind, key: String, v: &Rational| {
            out.push(Record::new(kind.as_str(), key, render(v)).with_provenance(provenance));
        };
        for (k, v) in self.psi.iter() {
            push(Kind::Psi, psi_key(k), v);
        }
        for (k, v) in &self.hurwitz {
            push(Kind::Hurwitz, hurwitz_key(k), v);
        }
        for (k, v) in self.hodge.iter() {
            push(Kind::Hodge, hodge_key(k), v);
        }
        for (m, v) in &self.series {
            push(Kind::Series, series_key(m), v);
        }
        out
    }

    pub fn write(&self, path: &Path) -> AppResult<()> {
        let mut text = String::from(HEADER);
        text.push('\n');
        for r in self.records(Provenance::Computed) {
            text.push_str(&r.to_string());
            text.push('\n');
        }
        let mut f = fs::File::create(path).map_err(|e| AppError::io(path, e))?;
        f.write_all(text.as_bytes()).map_err(|e| AppError::io(path, e))
    }

    /// Parses a cache file; the first malformed line aborts with its number.
    pub fn read(path: &Path) -> AppResult<Store> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Store::parse(&text).map_err(|(line, message)| AppError::CacheLine { path: path.into(), line, message })
    }

    pub fn parse(text: &str) -> Result<Store, (usize, String)> {
        let mut lines = text.lines();
        match lines.next() {
            Some(HEADER) => {}
            other => return Err((1, format!("expected header {HEADER:?}, found {other:?}"))),
        }
        let mut store = Store::default();
        for (idx, line) in lines.enumerate() {
            let n = idx + 2;
            let rec = Record::parse_line(line).map_err(|m| (n, m))?;
            let value = parse(&rec.value).map_err(|e| (n, e.to_string()))?;
            let kind = Kind::parse(&rec.kind).ok_or_else(|| (n, format!("unknown kind {:?}", rec.kind)))?;
            match kind {
                Kind::Psi => store.psi.insert_unchecked(parse_psi_key(&rec.key).map_err(|m| (n, m))?, value),
                Kind::Hurwitz => {
                    store.hurwitz.insert(parse_hurwitz_key(&rec.key).map_err(|m| (n, m))?, value);
                }
                Kind::Hodge => store.hodge.insert(parse_hodge_key(&rec.key).map_err(|m| (n, m))?, value),
                Kind::Series => {
                    store.series.insert(parse_series_key(&rec.key).map_err(|m| (n, m))?, value);
                }
            }
        }
        Ok(store)
    }

    /// Recomputes every entry; returns `(kind, key, stored, recomputed)` for
    /// each disagreement.
    pub fn verify(&self) -> AppResult<Vec<(Kind, String, Rational, Option<Rational>)>> {
        let mut bad = Vec::new();
        let mut cold = CorrelatorCache::new();
        for (k, v) in self.psi.iter() {
            let fresh = cold.correlator(k);
            if &fresh != v {
                bad.push((Kind::Psi, psi_key(k), v.clone(), Some(fresh)));
            }
        }
        for (k, v) in &self.hurwitz {
            let fresh = hurwitz_value(k, Method::Auto)?;
            if &fresh != v {
                bad.push((Kind::Hurwitz, hurwitz_key(k), v.clone(), Some(fresh)));
            }
        }
        if !self.hodge.is_empty() {
            let n_max = self.hodge.iter().map(|(k, _)| k.exponents().len()).max().unwrap_or(1);
            let fresh = if self.hodge.iter().all(|(k, _)| k.genus == 1 && k.lambda == 1) && n_max <= 5 {
                Some(extract_hodge_table(&mut cold, 1, n_max, BRUTE_MAX_DEGREE, true)?.table)
            } else {
                None
            };
            for (k, v) in self.hodge.iter() {
                let f = fresh.as_ref().and_then(|t| t.get(k)).cloned();
                if f.as_ref() != Some(v) {
                    bad.push((Kind::Hodge, hodge_key(k), v.clone(), f));
                }
            }
        }
        if !self.series.is_empty() {
            let k_max = self.series.keys().filter_map(Monomial::max_index).max().unwrap_or(0);
            let d_max = self.series.keys().map(Monomial::degree).max().unwrap_or(0);
            let f = build_free_energy(&mut cold, k_max, d_max);
            for (m, v) in &self.series {
                let fresh = f.coefficient(m);
                if &fresh != v {
                    bad.push((Kind::Series, series_key(m), v.clone(), Some(fresh)));
                }
            }
        }
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        let k = CorrelatorKey::new(2, vec![3, 2]);
        assert_eq!(parse_psi_key(&psi_key(&k)).unwrap(), k);
        let h = HurwitzKey::new(Partition::ones(3), Partition::new(vec![2, 1]).unwrap(), 3, false).unwrap();
        assert_eq!(parse_hurwitz_key(&hurwitz_key(&h)).unwrap(), h);
        let j = HodgeKey::new(1, vec![0, 0], 1);
        assert_eq!(parse_hodge_key(&hodge_key(&j)).unwrap(), j);
        let m = Monomial::from_indices(&[0, 0, 2]);
        assert_eq!(parse_series_key(&series_key(&m)).unwrap(), m);
        assert_eq!(parse_series_key("t=-").unwrap(), Monomial::one());
        assert!(parse_psi_key("k=1;g=1").is_err());
    }

    #[test]
    fn header_is_required() {
        assert_eq!(Store::parse("").unwrap_err().0, 1);
        assert!(Store::parse(HEADER).unwrap().is_empty());
    }
}
