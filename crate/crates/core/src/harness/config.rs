//! Flat `key = value` run configuration with `#` comments.

use std::path::{Path, PathBuf};

use crate::error::{HdgError, Result};
use crate::fe::element::Point;
use crate::geometry::problem::{CurvedProblem, Domain};
use crate::geometry::refine::BoundaryPlacement;
use crate::hdg::PicardOptions;
use crate::presets;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: String,
    /// Replaces the preset's domain when set.
    pub domain: Option<Domain>,
    pub k: usize,
    /// One entry: initial mesh size refined `levels - 1` times uniformly.
    /// Several entries: independent meshes.
    pub target_h: Vec<f64>,
    pub levels: usize,
    pub tau: f64,
    pub rtol: f64,
    pub max_iters: usize,
    pub theta: f64,
    pub max_dofs: usize,
    pub tol: f64,
    pub max_cycles: usize,
    pub source_scale: f64,
    pub placement: BoundaryPlacement,
    pub mesh_file: Option<PathBuf>,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: "disk_sine".into(),
            domain: None,
            k: 1,
            target_h: vec![0.2],
            levels: 4,
            tau: 1.0,
            rtol: 1e-10,
            max_iters: 100,
            theta: 0.5,
            max_dofs: 20_000,
            tol: 0.0,
            max_cycles: 30,
            source_scale: 1.0,
            placement: BoundaryPlacement::Snap,
            mesh_file: None,
            out: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| HdgError::Config(format!("{key}: cannot parse '{v}'")))
}

fn parse_point(key: &str, v: &str) -> Result<Point> {
    let parts: Vec<f64> = v
        .split(',')
        .map(|p| parse_num(key, p.trim()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [x, y] => Ok([x, y]),
        _ => Err(HdgError::Config(format!("{key}: expected 'x, y'"))),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        let mut domain_name: Option<String> = None;
        let mut shape: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HdgError::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, v) = (key.trim(), value.trim());
            match key {
                "preset" => c.preset = v.to_string(),
                "domain" => domain_name = Some(v.to_string()),
                "k" => c.k = parse_num(key, v)?,
                "target_h" => {
                    c.target_h = v
                        .split(',')
                        .map(|h| parse_num(key, h.trim()))
                        .collect::<Result<_>>()?
                }
                "levels" => c.levels = parse_num(key, v)?,
                "tau" => c.tau = parse_num(key, v)?,
                "rtol" => c.rtol = parse_num(key, v)?,
                "max_iters" => c.max_iters = parse_num(key, v)?,
                "theta" => c.theta = parse_num(key, v)?,
                "max_dofs" => c.max_dofs = parse_num(key, v)?,
                "tol" => c.tol = parse_num(key, v)?,
                "max_cycles" => c.max_cycles = parse_num(key, v)?,
                "source_scale" => c.source_scale = parse_num(key, v)?,
                "placement" => {
                    c.placement = match v {
                        "snap" => BoundaryPlacement::Snap,
                        "midpoint" => BoundaryPlacement::Midpoint,
                        _ => return Err(HdgError::Config(format!("placement: unknown value '{v}'"))),
                    }
                }
                "mesh_file" => c.mesh_file = Some(PathBuf::from(v)),
                "out" => c.out = Some(v.to_string()),
                "center" | "radius" | "min" | "max" | "r_in" | "r_out" | "theta0" | "theta1" | "semi_x"
                | "semi_y" => shape.push((key.to_string(), v.to_string())),
                other => return Err(HdgError::Config(format!("unknown key '{other}'"))),
            }
        }
        if let Some(name) = domain_name {
            c.domain = Some(build_domain(&name, &shape)?);
        } else if !shape.is_empty() {
            return Err(HdgError::Config("domain parameters given without 'domain'".into()));
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(HdgError::Config("k must be at least 1".into()));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(HdgError::Config("theta must lie in (0, 1]".into()));
        }
        if !(self.rtol > 0.0) {
            return Err(HdgError::Config("rtol must be positive".into()));
        }
        if !(self.tau > 0.0) {
            return Err(HdgError::Config("tau must be positive".into()));
        }
        if self.target_h.is_empty() || self.target_h.iter().any(|h| !(*h > 0.0)) {
            return Err(HdgError::Config("target_h must be positive".into()));
        }
        if self.levels == 0 {
            return Err(HdgError::Config("levels must be at least 1".into()));
        }
        presets::by_name(&self.preset, self.k, self.source_scale)?;
        Ok(())
    }

    pub fn problem(&self) -> Result<CurvedProblem> {
        let mut p = presets::by_name(&self.preset, self.k, self.source_scale)?;
        if let Some(d) = &self.domain {
            p.domain = d.clone();
        }
        Ok(p)
    }

    pub fn picard(&self) -> PicardOptions {
        PicardOptions {
            rtol: self.rtol,
            max_iters: self.max_iters,
        }
    }
}

fn build_domain(name: &str, shape: &[(String, String)]) -> Result<Domain> {
    let get = |key: &str| shape.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let num = |key: &str, default: f64| -> Result<f64> { get(key).map_or(Ok(default), |v| parse_num(key, v)) };
    let pt = |key: &str, default: Point| -> Result<Point> { get(key).map_or(Ok(default), |v| parse_point(key, v)) };
    let d = match name {
        "disk" => {
            let Domain::Disk { center, radius } = Domain::unit_disk() else { unreachable!() };
            Domain::Disk {
                center: pt("center", center)?,
                radius: num("radius", radius)?,
            }
        }
        "square" => {
            let Domain::Square { min, max } = Domain::unit_square() else { unreachable!() };
            Domain::Square {
                min: pt("min", min)?,
                max: pt("max", max)?,
            }
        }
        "annulus_sector" => {
            let Domain::AnnulusSector {
                center,
                r_in,
                r_out,
                theta0,
                theta1,
            } = Domain::default_annulus_sector()
            else {
                unreachable!()
            };
            Domain::AnnulusSector {
                center: pt("center", center)?,
                r_in: num("r_in", r_in)?,
                r_out: num("r_out", r_out)?,
                theta0: num("theta0", theta0)?,
                theta1: num("theta1", theta1)?,
            }
        }
        "shafranov" => {
            let Domain::Shafranov { center, semi_x, semi_y } = Domain::default_shafranov() else { unreachable!() };
            Domain::Shafranov {
                center: pt("center", center)?,
                semi_x: num("semi_x", semi_x)?,
                semi_y: num("semi_y", semi_y)?,
            }
        }
        other => return Err(HdgError::Config(format!("unknown domain '{other}'"))),
    };
    Ok(d)
}
