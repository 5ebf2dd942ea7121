//! Text snapshots for potentials and measure densities.
//!
//! Format: a header (magic string, version, kind, carrier, n, resolution,
//! geometry) followed by node values in row-major axis order, one per line.
//! Values are written with Rust's shortest round-trip float formatting, so a
//! load/save cycle is bit-identical on the textual representation.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hesseig_core::fields::{
    Carrier, DensityMeasure, Domain, Grid, GridPotential, Potential, RadialPotential, Shape,
};

pub const MAGIC: &str = "HESSEIG-SNAPSHOT v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotKind {
    Potential,
    MeasureDensity,
    Field,
}

impl SnapshotKind {
    fn name(&self) -> &'static str {
        match self {
            SnapshotKind::Potential => "potential",
            SnapshotKind::MeasureDensity => "measure-density",
            SnapshotKind::Field => "field",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "potential" => SnapshotKind::Potential,
            "measure-density" => SnapshotKind::MeasureDensity,
            "field" => SnapshotKind::Field,
            _ => return None,
        })
    }
}

#[derive(Debug)]
pub struct SnapshotError(pub String);

impl std::fmt::Display for SnapshotError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "snapshot: {}", self.0)
    }
}

impl std::error::Error for SnapshotError {}

fn serr(msg: impl Into<String>) -> SnapshotError {
    SnapshotError(msg.into())
}

/// A parsed snapshot: carrier description plus raw values.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub kind: SnapshotKind,
    pub carrier: Carrier,
    pub values: Vec<f64>,
}

pub fn render(kind: SnapshotKind, carrier: &Carrier, values: &[f64]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "kind = {}", kind.name());
    match carrier {
        Carrier::Radial { n, rho_max, len } => {
            let _ = writeln!(out, "carrier = radial");
            let _ = writeln!(out, "n = {n}");
            let _ = writeln!(out, "resolution = {len}");
            let _ = writeln!(out, "rho_max = {rho_max}");
        }
        Carrier::Grid(grid) => {
            let _ = writeln!(out, "carrier = grid");
            let _ = writeln!(out, "n = {}", grid.n());
            let _ = writeln!(out, "resolution = {}", grid.points_per_axis());
            match grid.domain().shape() {
                Shape::Ball { radius } => {
                    let _ = writeln!(out, "domain = ball");
                    let _ = writeln!(out, "R = {radius}");
                }
                Shape::Box { half_extents } => {
                    let _ = writeln!(out, "domain = box");
                    let ext: Vec<String> = half_extents.iter().map(|e| format!("{e}")).collect();
                    let _ = writeln!(out, "extents = {}", ext.join(" "));
                }
            }
        }
    }
    let _ = writeln!(out, "values");
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn save(
    path: &Path,
    kind: SnapshotKind,
    carrier: &Carrier,
    values: &[f64],
) -> std::io::Result<()> {
    fs::write(path, render(kind, carrier, values))
}

pub fn parse(text: &str) -> Result<Snapshot, SnapshotError> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(serr(format!("bad magic; expected '{MAGIC}'")));
    }
    let mut kind = None;
    let mut carrier_kind = None;
    let mut n = None;
    let mut resolution = None;
    let mut rho_max = None;
    let mut domain = None;
    let mut radius = None;
    let mut extents: Option<Vec<f64>> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut in_values = false;
    for line in lines {
        if in_values {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            values.push(t.parse().map_err(|_| serr(format!("bad value '{t}'")))?);
            continue;
        }
        let t = line.trim();
        if t == "values" {
            in_values = true;
            continue;
        }
        let Some(eq) = t.find('=') else {
            return Err(serr(format!("expected 'key = value' in header, got '{t}'")));
        };
        let key = t[..eq].trim();
        let value = t[eq + 1..].trim();
        match key {
            "kind" => {
                kind = Some(
                    SnapshotKind::parse(value)
                        .ok_or_else(|| serr(format!("bad kind '{value}'")))?,
                )
            }
            "carrier" => carrier_kind = Some(value.to_string()),
            "n" => n = Some(value.parse::<usize>().map_err(|_| serr("bad n"))?),
            "resolution" => {
                resolution = Some(value.parse::<usize>().map_err(|_| serr("bad resolution"))?)
            }
            "rho_max" => rho_max = Some(value.parse::<f64>().map_err(|_| serr("bad rho_max"))?),
            "domain" => domain = Some(value.to_string()),
            "R" => radius = Some(value.parse::<f64>().map_err(|_| serr("bad R"))?),
            "extents" => {
                extents = Some(
                    value
                        .split_whitespace()
                        .map(|x| x.parse::<f64>().map_err(|_| serr("bad extent")))
                        .collect::<Result<_, _>>()?,
                )
            }
            _ => return Err(serr(format!("unknown header key '{key}'"))),
        }
    }
    let kind = kind.ok_or_else(|| serr("missing kind"))?;
    let n = n.ok_or_else(|| serr("missing n"))?;
    let resolution = resolution.ok_or_else(|| serr("missing resolution"))?;
    let carrier = match carrier_kind.as_deref() {
        Some("radial") => Carrier::Radial {
            n,
            rho_max: rho_max.ok_or_else(|| serr("missing rho_max"))?,
            len: resolution,
        },
        Some("grid") => {
            let dom = match domain.as_deref() {
                Some("ball") => Domain::ball(n, radius.ok_or_else(|| serr("missing R"))?)
                    .map_err(|e| serr(e.to_string()))?,
                Some("box") => {
                    Domain::box_extents(n, extents.ok_or_else(|| serr("missing extents"))?)
                        .map_err(|e| serr(e.to_string()))?
                }
                other => return Err(serr(format!("bad domain {other:?}"))),
            };
            let grid = Grid::new(dom, resolution).map_err(|e| serr(e.to_string()))?;
            Carrier::Grid(grid)
        }
        other => return Err(serr(format!("bad carrier {other:?}"))),
    };
    if values.len() != carrier.node_count() {
        return Err(serr(format!(
            "value count {} does not match carrier node count {}",
            values.len(),
            carrier.node_count()
        )));
    }
    Ok(Snapshot {
        kind,
        carrier,
        values,
    })
}

pub fn load(path: &Path) -> Result<Snapshot, SnapshotError> {
    let text = fs::read_to_string(path)
        .map_err(|e| serr(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

impl Snapshot {
    pub fn into_potential(self) -> Result<Potential, SnapshotError> {
        if self.kind != SnapshotKind::Potential {
            return Err(serr("snapshot is not a potential"));
        }
        match self.carrier {
            Carrier::Radial { n, rho_max, .. } => {
                let v = RadialPotential::new(n, rho_max, self.values)
                    .map_err(|e| serr(e.to_string()))?;
                Ok(Potential::Radial(v))
            }
            Carrier::Grid(grid) => {
                let u = GridPotential::from_node_values(grid, self.values)
                    .map_err(|e| serr(e.to_string()))?;
                Ok(Potential::Grid(u))
            }
        }
    }

    pub fn into_measure(self) -> Result<DensityMeasure, SnapshotError> {
        if self.kind != SnapshotKind::MeasureDensity {
            return Err(serr("snapshot is not a measure density"));
        }
        DensityMeasure::from_samples(self.carrier, self.values).map_err(|e| serr(e.to_string()))
    }
}
