//! Flat `key = value` experiment configs.
//!
//! ```text
//! kind = langevin
//! seed = 7
//! replicas = 16
//!
//! [langevin]
//! n = 40
//! sigma = 0.5
//! ```
//!
//! Top-level keys come first; the only section allowed is the one named by
//! `kind`. `#` starts a comment. Unknown keys are rejected and omitted keys
//! take their defaults, so a parsed config always carries every parameter.

use std::fmt::Display;
use std::str::FromStr;

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Langevin,
    StabilityGaussian,
    StabilityBoolean,
    Interpolation,
    FirstMoment,
    OgpBand,
    Optimize,
    GraphScan,
}

/// `(key, default)`; `None` marks a required key, `Some("")` an optional one.
pub type Schema = &'static [(&'static str, Option<&'static str>)];

const LANGEVIN: Schema = &[
    ("p", Some("3")),
    ("n", None),
    ("sigma", Some("0")),
    ("horizon", Some("1")),
    ("dt", Some("0.001")),
    ("record_every", Some("10")),
    ("disorder", Some("gaussian")),
    ("mu_hat", Some("")),
];

const STABILITY_GAUSSIAN: Schema = &[
    ("dim", Some("6")),
    ("degree", Some("3")),
    ("outputs", Some("1")),
    ("rho", Some("0.2,0.5,0.9")),
    ("samples", Some("100000")),
    ("t", Some("")),
];

const STABILITY_BOOLEAN: Schema = &[
    ("m", Some("8")),
    ("degree", Some("2")),
    ("outputs", Some("1")),
    ("bias", Some("0.5")),
    ("c", Some("0.5,1,2")),
    ("mode", Some("exact")),
    ("samples", Some("10000")),
];

const INTERPOLATION: Schema = &[
    ("p", Some("4")),
    ("n", Some("20")),
    ("algorithm", Some("amp-lite")),
    ("rounds", Some("5")),
    ("amp_degree", Some("3")),
    ("L", Some("64")),
    ("domain", Some("spherical")),
    ("band", Some("")),
    ("sigma", Some("0")),
    ("horizon", Some("1")),
    ("dt", Some("0.01")),
];

const FIRST_MOMENT: Schema =
    &[("n", None), ("d", None), ("k1", None), ("k2", None), ("l", None), ("j1", None), ("j2", None)];

const OGP_BAND: Schema = &[("alpha", None), ("resolution", Some("0.001"))];

const OPTIMIZE: Schema = &[
    ("p", Some("2")),
    ("n", None),
    ("domain", Some("spherical")),
    ("method", Some("power-iteration")),
    ("rounds", Some("60")),
    ("amp_degree", Some("1")),
    ("softmax_k", Some("4")),
    ("sigma", Some("0")),
    ("horizon", Some("1")),
    ("dt", Some("0.01")),
    ("mu", None),
    ("delta", Some("0.1")),
    ("gamma", Some("0.5")),
    ("eta", Some("0.1")),
];

const GRAPH_SCAN: Schema = &[
    ("n", Some("1000")),
    ("d", Some("20")),
    ("algorithm", Some("greedy")),
    ("rule", Some("min-label")),
    ("radius", Some("1")),
    ("threshold", Some("0.5")),
    ("eta", Some("0")),
    ("stride", Some("")),
    ("k", Some("")),
    ("scan_samples", Some("20")),
    ("bins", Some("20")),
    ("restarts", Some("10")),
    ("band", Some("")),
];

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Langevin,
        Kind::StabilityGaussian,
        Kind::StabilityBoolean,
        Kind::Interpolation,
        Kind::FirstMoment,
        Kind::OgpBand,
        Kind::Optimize,
        Kind::GraphScan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Langevin => "langevin",
            Kind::StabilityGaussian => "stability-gaussian",
            Kind::StabilityBoolean => "stability-boolean",
            Kind::Interpolation => "interpolation",
            Kind::FirstMoment => "first-moment",
            Kind::OgpBand => "ogp-band",
            Kind::Optimize => "optimize",
            Kind::GraphScan => "graph-scan",
        }
    }

    pub fn schema(self) -> Schema {
        match self {
            Kind::Langevin => LANGEVIN,
            Kind::StabilityGaussian => STABILITY_GAUSSIAN,
            Kind::StabilityBoolean => STABILITY_BOOLEAN,
            Kind::Interpolation => INTERPOLATION,
            Kind::FirstMoment => FIRST_MOMENT,
            Kind::OgpBand => OGP_BAND,
            Kind::Optimize => OPTIMIZE,
            Kind::GraphScan => GRAPH_SCAN,
        }
    }
}

impl FromStr for Kind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| LabError::UnknownKind(s.to_string()))
    }
}

impl Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    pub replicas: usize,
    pub out: Option<String>,
    /// Every schema key in schema order; `None` until set or defaulted.
    params: Vec<(&'static str, Option<String>)>,
}

const TOP_LEVEL: [&str; 4] = ["kind", "seed", "replicas", "out"];

impl ExperimentConfig {
    /// Config with defaults; required keys stay unset until [`Self::set`].
    pub fn new(kind: Kind) -> Self {
        let params = kind.schema().iter().map(|&(k, d)| (k, d.map(str::to_string))).collect();
        Self { kind, seed: 0, replicas: 1, out: None, params }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut top: Vec<(usize, String, String)> = Vec::new();
        let mut section: Option<(usize, String)> = None;
        let mut body: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| LabError::Syntax { line: line_no, msg: "unterminated section header".into() })?
                    .trim();
                if section.is_some() {
                    return Err(LabError::Syntax { line: line_no, msg: "only one section is allowed".into() });
                }
                section = Some((line_no, name.to_string()));
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::Syntax { line: line_no, msg: format!("expected `key = value`, got `{line}`") })?;
            let entry = (line_no, k.trim().to_string(), v.trim().to_string());
            if entry.1.is_empty() {
                return Err(LabError::Syntax { line: line_no, msg: "empty key".into() });
            }
            if section.is_some() {
                body.push(entry);
            } else {
                top.push(entry);
            }
        }
        let kind_str = top
            .iter()
            .find(|(_, k, _)| k == "kind")
            .map(|(_, _, v)| v.clone())
            .ok_or_else(|| LabError::Missing("kind".into()))?;
        let mut cfg = Self::new(kind_str.parse()?);
        let mut seen = Vec::new();
        for (line, k, v) in &top {
            if seen.contains(k) {
                return Err(LabError::Syntax { line: *line, msg: format!("duplicate key `{k}`") });
            }
            seen.push(k.clone());
            if k != "kind" {
                cfg.set_top(k, v)?;
            }
        }
        if let Some((line, name)) = &section {
            if name != cfg.kind.as_str() {
                return Err(if name.parse::<Kind>().is_ok() {
                    LabError::Syntax { line: *line, msg: format!("section [{name}] does not match kind `{}`", cfg.kind) }
                } else {
                    LabError::UnknownSection(name.clone())
                });
            }
        }
        let mut seen = Vec::new();
        for (line, k, v) in &body {
            if seen.contains(k) {
                return Err(LabError::Syntax { line: *line, msg: format!("duplicate key `{k}`") });
            }
            seen.push(k.clone());
            cfg.set(k, v)?;
        }
        cfg.check_required()?;
        Ok(cfg)
    }

    fn set_top(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "seed" => self.seed = parse_value(key, value)?,
            "replicas" => {
                self.replicas = parse_value(key, value)?;
                if self.replicas == 0 {
                    return Err(LabError::invalid(key, "need at least one replica"));
                }
            }
            "out" => self.out = Some(value.to_string()),
            _ => return Err(LabError::UnknownKey { scope: "top level".into(), key: key.to_string() }),
        }
        Ok(())
    }

    /// Sets a parameter of the kind's section, or a top-level key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if TOP_LEVEL.contains(&key) {
            if key == "kind" {
                return Err(LabError::invalid(key, "kind cannot be changed"));
            }
            return self.set_top(key, value);
        }
        let kind = self.kind;
        let slot = self
            .params
            .iter_mut()
            .find(|(k, _)| *k == key)
            .ok_or_else(|| LabError::UnknownKey { scope: format!("[{kind}]"), key: key.to_string() })?;
        slot.1 = Some(value.to_string());
        Ok(())
    }

    /// `key=value` form of [`Self::set`].
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair.split_once('=').ok_or_else(|| LabError::invalid(pair, "expected KEY=VALUE"))?;
        self.set(k.trim(), v.trim())
    }

    pub fn check_required(&self) -> Result<()> {
        match self.params.iter().find(|(_, v)| v.is_none()) {
            Some((k, _)) => Err(LabError::Missing(k.to_string())),
            None => Ok(()),
        }
    }

    pub fn raw(&self, key: &str) -> Result<&str> {
        self.params
            .iter()
            .find(|(k, _)| *k == key)
            .ok_or_else(|| LabError::UnknownKey { scope: format!("[{}]", self.kind), key: key.to_string() })?
            .1
            .as_deref()
            .ok_or_else(|| LabError::Missing(key.to_string()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        parse_value(key, self.raw(key)?)
    }

    /// `None` for an empty value.
    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let v = self.raw(key)?;
        if v.is_empty() {
            Ok(None)
        } else {
            parse_value(key, v).map(Some)
        }
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: Display,
    {
        let v = self.raw(key)?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',').map(|s| parse_value(key, s.trim())).collect()
    }

    /// Optional `lo,hi` pair with `lo < hi`.
    pub fn get_band(&self, key: &str) -> Result<Option<(f64, f64)>> {
        let v: Vec<f64> = self.get_list(key)?;
        match v.as_slice() {
            [] => Ok(None),
            [lo, hi] if lo < hi => Ok(Some((*lo, *hi))),
            _ => Err(LabError::invalid(key, "expected `lo,hi` with lo < hi")),
        }
    }

    /// Canonical text; parses back to an equal config. `out` is omitted
    /// when `with_out` is false.
    pub fn to_text(&self, with_out: bool) -> String {
        self.echo_lines(with_out).join("\n") + "\n"
    }

    pub fn echo_lines(&self, with_out: bool) -> Vec<String> {
        let mut v = vec![
            format!("kind = {}", self.kind),
            format!("seed = {}", self.seed),
            format!("replicas = {}", self.replicas),
        ];
        if let (true, Some(out)) = (with_out, &self.out) {
            v.push(format!("out = {out}"));
        }
        v.push(format!("[{}]", self.kind));
        for (k, val) in &self.params {
            v.push(format!("{k} = {}", val.as_deref().unwrap_or("")));
        }
        v
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: Display,
{
    value.parse::<T>().map_err(|e| LabError::invalid(key, format!("`{value}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_fills_defaults() {
        let c = ExperimentConfig::parse("kind = ogp-band\nseed = 4 # comment\n\n[ogp-band]\nalpha = 1.75\n").unwrap();
        assert_eq!(c.kind, Kind::OgpBand);
        assert_eq!(c.seed, 4);
        assert_eq!(c.get::<f64>("alpha").unwrap(), 1.75);
        assert_eq!(c.get::<f64>("resolution").unwrap(), 1e-3);
    }

    #[test]
    fn round_trips_through_text() {
        let mut c = ExperimentConfig::new(Kind::Langevin);
        c.set("n", "30").unwrap();
        c.set("mu_hat", "0.4").unwrap();
        c.out = Some("runs/a".into());
        assert_eq!(ExperimentConfig::parse(&c.to_text(true)).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        let err = |t: &str| ExperimentConfig::parse(t).unwrap_err();
        assert!(matches!(err("seed = 1\n"), LabError::Missing(k) if k == "kind"));
        assert!(matches!(err("kind = nope\n"), LabError::UnknownKind(_)));
        assert!(matches!(err("kind = langevin\n[langevin]\nn = 3\nbogus = 1\n"), LabError::UnknownKey { .. }));
        assert!(matches!(err("kind = langevin\n[langevin]\n"), LabError::Missing(k) if k == "n"));
        assert!(matches!(err("kind = langevin\n[other]\nn = 3\n"), LabError::UnknownSection(_)));
        assert!(matches!(err("kind = langevin\n[ogp-band]\n"), LabError::Syntax { .. }));
        assert!(matches!(err("kind = langevin\nseed = x\n[langevin]\nn = 3\n"), LabError::Invalid { key, .. } if key == "seed"));
        assert!(matches!(err("kind = langevin\nn 3\n"), LabError::Syntax { line: 2, .. }));
        assert!(matches!(err("kind = langevin\nreplicas = 0\n[langevin]\nn = 3\n"), LabError::Invalid { .. }));
    }

    #[test]
    fn typed_getters() {
        let mut c = ExperimentConfig::new(Kind::StabilityGaussian);
        assert_eq!(c.get_list::<f64>("rho").unwrap(), vec![0.2, 0.5, 0.9]);
        assert!(c.get_opt::<f64>("t").unwrap().is_none());
        c.set("rho", "0.5,x").unwrap();
        assert!(matches!(c.get_list::<f64>("rho"), Err(LabError::Invalid { key, .. }) if key == "rho"));
        let mut g = ExperimentConfig::new(Kind::GraphScan);
        g.set("band", "0.2,0.1").unwrap();
        assert!(g.get_band("band").is_err());
        g.set("band", "0.1,0.2").unwrap();
        assert_eq!(g.get_band("band").unwrap(), Some((0.1, 0.2)));
    }
}
