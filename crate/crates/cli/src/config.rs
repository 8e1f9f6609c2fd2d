//! Experiment configuration: a flat `key = value` text format with
//! `[section]` headers. Unknown sections, unknown keys and duplicate keys
//! are hard errors; every resolved value is echoed into the CSV header so a
//! run is reproducible from its output alone.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cutfeec::error::{Error, Result};
use cutfeec::geometry::LevelSet;
use cutfeec::ghost::FacetSelection;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Disk { radius: f64 },
    Annulus { r_inner: f64, r_outer: f64 },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: String,
    pub k: usize,
    pub m_list: Vec<usize>,
    pub epsilon_list: Vec<f64>,
    pub shape: Shape,
    pub center: [f64; 2],
    pub bbox: [f64; 4],
    pub stabilize: bool,
    pub eta: f64,
    pub facet_set: String,
    pub delta: f64,
    pub n_max: usize,
    pub quad_degree_volume: usize,
    pub quad_degree_facet: usize,
    pub output: Option<PathBuf>,
    pub field_dump: Option<PathBuf>,
    pub dof_dump: Option<PathBuf>,
    pub grid: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problem: "zero".into(),
            k: 1,
            m_list: vec![8, 16, 32],
            epsilon_list: vec![0.0, 1e-3, 1e-6, 1e-9],
            shape: Shape::Disk { radius: 0.25 },
            center: [0.5, 0.5],
            bbox: [0.0, 0.0, 1.0, 1.0],
            stabilize: true,
            eta: 1.0,
            facet_set: "full".into(),
            delta: 0.25,
            n_max: 10,
            quad_degree_volume: 2,
            quad_degree_facet: 2,
            output: None,
            field_dump: None,
            dof_dump: None,
            grid: 32,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_list<T: std::str::FromStr>(value: &str, what: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| bad(format!("cannot parse '{s}' in {what}")))
        })
        .collect()
}

fn parse_pair(value: &str, what: &str) -> Result<[f64; 2]> {
    let v: Vec<f64> = parse_list(value, what)?;
    if v.len() != 2 {
        return Err(bad(format!("{what} needs 2 comma-separated numbers")));
    }
    Ok([v[0], v[1]])
}

impl ExperimentConfig {
    /// Parse the sectioned key=value format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut raw: BTreeMap<(String, String), String> = BTreeMap::new();
        let mut section = String::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| bad(format!("line {}: malformed section", lineno + 1)))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().to_string();
            if key.is_empty() || section.is_empty() {
                return Err(bad(format!("line {}: key outside a section", lineno + 1)));
            }
            if raw
                .insert((section.clone(), key.clone()), value.trim().to_string())
                .is_some()
            {
                return Err(bad(format!("duplicate key {section}.{key}")));
            }
        }
        Self::from_pairs(raw)
    }

    fn from_pairs(raw: BTreeMap<(String, String), String>) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        let mut shape_name: Option<String> = None;
        let mut radius: Option<f64> = None;
        let mut r_inner: Option<f64> = None;
        let mut r_outer: Option<f64> = None;
        for ((section, key), value) in &raw {
            let v = value.as_str();
            let num = || -> Result<f64> {
                v.parse().map_err(|_| bad(format!("{section}.{key}: not a number: '{v}'")))
            };
            let int = || -> Result<usize> {
                v.parse().map_err(|_| bad(format!("{section}.{key}: not an integer: '{v}'")))
            };
            match (section.as_str(), key.as_str()) {
                ("experiment", "problem") => cfg.problem = v.to_string(),
                ("experiment", "k") => cfg.k = int()?,
                ("experiment", "m_list") => cfg.m_list = parse_list(v, "m_list")?,
                ("experiment", "epsilon_list") => cfg.epsilon_list = parse_list(v, "epsilon_list")?,
                ("geometry", "shape") => shape_name = Some(v.to_string()),
                ("geometry", "radius") => radius = Some(num()?),
                ("geometry", "r_inner") => r_inner = Some(num()?),
                ("geometry", "r_outer") => r_outer = Some(num()?),
                ("geometry", "center") => cfg.center = parse_pair(v, "geometry.center")?,
                ("geometry", "box") => {
                    let b: Vec<f64> = parse_list(v, "geometry.box")?;
                    if b.len() != 4 {
                        return Err(bad("geometry.box needs 4 numbers: x0,y0,x1,y1"));
                    }
                    cfg.bbox = [b[0], b[1], b[2], b[3]];
                }
                ("stabilisation", "stabilize") => {
                    cfg.stabilize = match v {
                        "on" => true,
                        "off" => false,
                        _ => return Err(bad("stabilisation.stabilize must be on or off")),
                    }
                }
                ("stabilisation", "eta") => cfg.eta = num()?,
                ("stabilisation", "facet_set") => cfg.facet_set = v.to_string(),
                ("stabilisation", "delta") => cfg.delta = num()?,
                ("stabilisation", "n_max") => cfg.n_max = int()?,
                ("quadrature", "volume_degree") => cfg.quad_degree_volume = int()?,
                ("quadrature", "facet_degree") => cfg.quad_degree_facet = int()?,
                ("output", "path") => cfg.output = Some(PathBuf::from(v)),
                ("output", "field_dump") => cfg.field_dump = Some(PathBuf::from(v)),
                ("output", "dof_dump") => cfg.dof_dump = Some(PathBuf::from(v)),
                ("output", "grid") => cfg.grid = int()?,
                _ => return Err(bad(format!("unknown key {section}.{key}"))),
            }
        }
        match shape_name.as_deref() {
            None | Some("disk") => {
                cfg.shape = Shape::Disk {
                    radius: radius.unwrap_or(0.25),
                };
                if r_inner.is_some() || r_outer.is_some() {
                    return Err(bad("r_inner/r_outer are annulus keys; disk takes radius"));
                }
            }
            Some("annulus") => {
                cfg.shape = Shape::Annulus {
                    r_inner: r_inner.unwrap_or(0.25),
                    r_outer: r_outer.unwrap_or(0.45),
                };
                if radius.is_some() {
                    return Err(bad("radius is a disk key; annulus takes r_inner/r_outer"));
                }
            }
            Some(other) => return Err(bad(format!("unknown geometry.shape '{other}'"))),
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k > 2 {
            return Err(bad(format!("k must be 0, 1 or 2, got {}", self.k)));
        }
        match self.shape {
            Shape::Disk { radius } => {
                if radius <= 0.0 {
                    return Err(bad("disk radius must be positive"));
                }
            }
            Shape::Annulus { r_inner, r_outer } => {
                if r_inner <= 0.0 || r_outer <= 0.0 {
                    return Err(bad("annulus radii must be positive"));
                }
                if r_inner >= r_outer {
                    return Err(bad("annulus needs r_inner < r_outer"));
                }
            }
        }
        if self.m_list.is_empty() {
            return Err(bad("m_list must not be empty"));
        }
        if let Some(&m) = self.m_list.iter().find(|&&m| m < 4) {
            return Err(bad(format!("mesh resolutions must be >= 4, got {m}")));
        }
        if self.epsilon_list.is_empty() {
            return Err(bad("epsilon_list must not be empty"));
        }
        if self.eta <= 0.0 {
            return Err(bad("eta must be > 0"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(bad("delta must be in (0, 1]"));
        }
        if self.facet_set != "full" && self.facet_set != "macro" {
            return Err(bad("facet_set must be full or macro"));
        }
        if !(self.bbox[2] > self.bbox[0] && self.bbox[3] > self.bbox[1]) {
            return Err(bad("degenerate bounding box"));
        }
        if self.grid < 2 {
            return Err(bad("grid must be >= 2"));
        }
        Ok(())
    }

    pub fn facet_selection(&self) -> FacetSelection {
        match self.facet_set.as_str() {
            "macro" => FacetSelection::Macro(self.delta),
            _ => FacetSelection::Full,
        }
    }

    pub fn level_set(&self, epsilon: f64) -> LevelSet {
        match self.shape {
            Shape::Disk { radius } => LevelSet::circle(self.center, radius),
            Shape::Annulus { r_inner, r_outer } => {
                LevelSet::annulus(self.center, r_inner, r_outer)
            }
        }
        .with_offset([epsilon, epsilon])
    }

    /// Radius handed to manufactured problems that need one.
    pub fn problem_radius(&self) -> f64 {
        match self.shape {
            Shape::Disk { radius } => radius,
            Shape::Annulus { r_outer, .. } => r_outer,
        }
    }

    /// Fully resolved key=value lines for the CSV header block.
    pub fn resolved_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("experiment.problem = {}", self.problem),
            format!("experiment.k = {}", self.k),
            format!(
                "experiment.m_list = {}",
                self.m_list.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
            ),
            format!(
                "experiment.epsilon_list = {}",
                self.epsilon_list.iter().map(|e| format!("{e:e}")).collect::<Vec<_>>().join(",")
            ),
        ];
        match self.shape {
            Shape::Disk { radius } => {
                out.push("geometry.shape = disk".into());
                out.push(format!("geometry.radius = {radius}"));
            }
            Shape::Annulus { r_inner, r_outer } => {
                out.push("geometry.shape = annulus".into());
                out.push(format!("geometry.r_inner = {r_inner}"));
                out.push(format!("geometry.r_outer = {r_outer}"));
            }
        }
        out.push(format!("geometry.center = {},{}", self.center[0], self.center[1]));
        out.push(format!(
            "geometry.box = {},{},{},{}",
            self.bbox[0], self.bbox[1], self.bbox[2], self.bbox[3]
        ));
        out.push(format!(
            "stabilisation.stabilize = {}",
            if self.stabilize { "on" } else { "off" }
        ));
        out.push(format!("stabilisation.eta = {}", self.eta));
        out.push(format!("stabilisation.facet_set = {}", self.facet_set));
        out.push(format!("stabilisation.delta = {}", self.delta));
        out.push(format!("stabilisation.n_max = {}", self.n_max));
        out.push(format!("quadrature.volume_degree = {}", self.quad_degree_volume));
        out.push(format!("quadrature.facet_degree = {}", self.quad_degree_facet));
        out.push(format!("output.grid = {}", self.grid));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "
[experiment]
problem = annulus_harmonic
k = 1
m_list = 8, 16
epsilon_list = 0, 1e-6

[geometry]
shape = annulus
r_inner = 0.2
r_outer = 0.4
center = 0.5, 0.5

[stabilisation]
eta = 2.0
facet_set = macro
delta = 0.5
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.problem, "annulus_harmonic");
        assert_eq!(cfg.m_list, vec![8, 16]);
        assert_eq!(
            cfg.shape,
            Shape::Annulus {
                r_inner: 0.2,
                r_outer: 0.4
            }
        );
        assert_eq!(cfg.eta, 2.0);
        assert!(matches!(cfg.facet_selection(), FacetSelection::Macro(d) if d == 0.5));
    }

    #[test]
    fn unknown_key_is_hard_error() {
        assert!(ExperimentConfig::parse("[experiment]\nfoo = 1\n").is_err());
        assert!(ExperimentConfig::parse("[nope]\nk = 1\n").is_err());
    }

    #[test]
    fn duplicate_key_is_hard_error() {
        assert!(ExperimentConfig::parse("[experiment]\nk = 1\nk = 2\n").is_err());
    }

    #[test]
    fn invariants_enforced() {
        assert!(ExperimentConfig::parse("[experiment]\nk = 5\n").is_err());
        assert!(ExperimentConfig::parse("[experiment]\nm_list = 2\n").is_err());
        assert!(ExperimentConfig::parse("[stabilisation]\neta = 0\n").is_err());
        assert!(ExperimentConfig::parse("[stabilisation]\ndelta = 1.5\n").is_err());
        assert!(
            ExperimentConfig::parse("[geometry]\nshape = annulus\nr_inner = 0.5\nr_outer = 0.3\n")
                .is_err()
        );
        assert!(ExperimentConfig::parse("[geometry]\nshape = disk\nr_inner = 0.2\n").is_err());
    }

    #[test]
    fn comments_and_defaults() {
        let cfg = ExperimentConfig::parse("# nothing but comments\n").unwrap();
        assert_eq!(cfg.k, 1);
        assert_eq!(cfg.m_list, vec![8, 16, 32]);
        assert!(cfg.stabilize);
    }
}
