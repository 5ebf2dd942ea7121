//! Run configuration: flat key = value text with `#` comments and optional
//! cosmetic `[section]` headers. The exact grammar is documented in the
//! repository README.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eig,
    Dirichlet,
    Semilinear,
    Capacity,
    Envelope,
    Check,
    Exponents,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eig => "eig",
            Command::Dirichlet => "dirichlet",
            Command::Semilinear => "semilinear",
            Command::Capacity => "capacity",
            Command::Envelope => "envelope",
            Command::Check => "check",
            Command::Exponents => "exponents",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "eig" => Command::Eig,
            "dirichlet" => Command::Dirichlet,
            "semilinear" => Command::Semilinear,
            "capacity" => Command::Capacity,
            "envelope" => Command::Envelope,
            "check" => Command::Check,
            "exponents" => Command::Exponents,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierKind {
    Radial,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// g ≡ 1 relative to βⁿ
    BetaN,
    /// g(ρ) = ρ^alpha (radial) or |z|^{2 alpha} (grid)
    Power(f64),
    /// measure-density snapshot file
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    Eigen { lambda: f64 },
    AffineM { lambda: f64 },
    AffineK { a: f64, lambda: f64, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigMethod {
    Inverse,
    Descent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CondenserSpec {
    /// K = closed ball of radius r inside the domain ball
    BallInBall { r: f64 },
    /// node-mask file: one 0/1 per node, snapshot node order
    MaskFile(PathBuf),
}

/// Everything a run needs; all commands share this carrier/domain block.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub carrier: CarrierKind,
    pub n: usize,
    pub m: usize,
    pub radius: f64,
    pub box_domain: bool,
    pub extents: Vec<f64>,
    pub resolution: usize,
    pub measure: MeasureSpec,
    pub family: Option<FamilySpec>,
    pub lambda1_hint: Option<f64>,
    pub condenser: Option<CondenserSpec>,
    pub obstacle_file: Option<PathBuf>,
    pub method: EigMethod,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub corpus: usize,
    pub s_values: Vec<f64>,
    pub radii: Vec<f64>,
    pub gamma_a: f64,
    pub gamma_tau: f64,
    pub p: f64,
    pub r_exp: f64,
    pub step_size: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            carrier: CarrierKind::Radial,
            n: 1,
            m: 1,
            radius: 1.0,
            box_domain: false,
            extents: Vec::new(),
            resolution: 0, // per-carrier default applied at validation
            measure: MeasureSpec::BetaN,
            family: None,
            lambda1_hint: None,
            condenser: None,
            obstacle_file: None,
            method: EigMethod::Inverse,
            tol: 1e-8,
            max_iter: 200,
            seed: 0,
            out_dir: PathBuf::from("runs/out"),
            corpus: 100,
            s_values: vec![0.25, 0.5],
            radii: vec![0.5, 1.0, 2.0],
            gamma_a: 1.0,
            gamma_tau: 2.0,
            p: 2.0,
            r_exp: 1.0,
            step_size: 0.5,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

fn verr(message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: None,
        message: message.into(),
    }
}

/// Parse config text; first error wins and carries its line number.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut family_kind: Option<String> = None;
    let mut family_lambda = 0.0f64;
    let mut family_a = 1.0f64;
    let mut family_k = 1usize;
    let mut seen = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(err(lineno, "unterminated [section] header"));
            }
            continue; // sections are cosmetic; keys are flat
        }
        let Some(eq) = line.find('=') else {
            return Err(err(lineno, format!("expected 'key = value', got '{line}'")));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        if value.is_empty() {
            return Err(err(lineno, format!("missing value for key '{key}'")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(lineno, format!("duplicate key '{key}'")));
        }

        let parse_f64 = |v: &str| -> Result<f64, ConfigError> {
            v.parse()
                .map_err(|_| err(lineno, format!("'{v}' is not a number")))
        };
        let parse_usize = |v: &str| -> Result<usize, ConfigError> {
            v.parse()
                .map_err(|_| err(lineno, format!("'{v}' is not a non-negative integer")))
        };
        let parse_f64_list = |v: &str| -> Result<Vec<f64>, ConfigError> {
            v.split_whitespace()
                .map(|x| {
                    x.parse()
                        .map_err(|_| err(lineno, format!("'{x}' is not a number")))
                })
                .collect()
        };

        match key {
            "command" => {
                cfg.command = Some(
                    Command::parse(value)
                        .ok_or_else(|| err(lineno, format!("unknown command '{value}'")))?,
                );
            }
            "carrier" => {
                cfg.carrier = match value {
                    "radial" => CarrierKind::Radial,
                    "grid" => CarrierKind::Grid,
                    _ => return Err(err(lineno, format!("unknown carrier '{value}'"))),
                };
            }
            "n" => cfg.n = parse_usize(value)?,
            "m" => cfg.m = parse_usize(value)?,
            "domain" => {
                cfg.box_domain = match value {
                    "ball" => false,
                    "box" => true,
                    _ => return Err(err(lineno, format!("unknown domain '{value}'"))),
                };
            }
            "R" => cfg.radius = parse_f64(value)?,
            "extents" => cfg.extents = parse_f64_list(value)?,
            "resolution" => cfg.resolution = parse_usize(value)?,
            "measure" => {
                cfg.measure = if value == "beta_n" {
                    MeasureSpec::BetaN
                } else if let Some(alpha) = value.strip_prefix("power:") {
                    MeasureSpec::Power(parse_f64(alpha)?)
                } else if let Some(path) = value.strip_prefix("file:") {
                    MeasureSpec::File(PathBuf::from(path))
                } else {
                    return Err(err(lineno, format!("unknown measure '{value}'")));
                };
            }
            "family" => family_kind = Some(value.to_string()),
            "family_lambda" => family_lambda = parse_f64(value)?,
            "family_a" => family_a = parse_f64(value)?,
            "family_k" => family_k = parse_usize(value)?,
            "lambda1" => cfg.lambda1_hint = Some(parse_f64(value)?),
            "condenser_r" => {
                cfg.condenser = Some(CondenserSpec::BallInBall {
                    r: parse_f64(value)?,
                })
            }
            "condenser_mask" => cfg.condenser = Some(CondenserSpec::MaskFile(PathBuf::from(value))),
            "obstacle" => {
                cfg.obstacle_file =
                    Some(PathBuf::from(value.strip_prefix("file:").unwrap_or(value)))
            }
            "method" => {
                cfg.method = match value {
                    "inverse" => EigMethod::Inverse,
                    "descent" => EigMethod::Descent,
                    _ => return Err(err(lineno, format!("unknown method '{value}'"))),
                };
            }
            "tol" => cfg.tol = parse_f64(value)?,
            "max_iter" => cfg.max_iter = parse_usize(value)?,
            "seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| err(lineno, format!("'{value}' is not a valid seed")))?
            }
            "out" => cfg.out_dir = PathBuf::from(value),
            "corpus" => cfg.corpus = parse_usize(value)?,
            "s_values" => cfg.s_values = parse_f64_list(value)?,
            "radii" => cfg.radii = parse_f64_list(value)?,
            "gamma_a" => cfg.gamma_a = parse_f64(value)?,
            "gamma_tau" => cfg.gamma_tau = parse_f64(value)?,
            "p" => cfg.p = parse_f64(value)?,
            "r_exp" => cfg.r_exp = parse_f64(value)?,
            "step_size" => cfg.step_size = parse_f64(value)?,
            _ => return Err(err(lineno, format!("unknown key '{key}'"))),
        }
    }

    if let Some(kind) = family_kind {
        cfg.family = Some(match kind.as_str() {
            "eigen" => FamilySpec::Eigen {
                lambda: family_lambda,
            },
            "affine_m" => FamilySpec::AffineM {
                lambda: family_lambda,
            },
            "affine_k" => FamilySpec::AffineK {
                a: family_a,
                lambda: family_lambda,
                k: family_k,
            },
            other => return Err(verr(format!("unknown family '{other}'"))),
        });
    }

    validate(&mut cfg)?;
    Ok(cfg)
}

fn validate(cfg: &mut RunConfig) -> Result<(), ConfigError> {
    if cfg.n == 0 {
        return Err(verr("n must be >= 1"));
    }
    if cfg.m == 0 {
        return Err(verr("m must be >= 1"));
    }
    if cfg.m > cfg.n {
        return Err(verr(format!("m exceeds n (m = {}, n = {})", cfg.m, cfg.n)));
    }
    match cfg.carrier {
        CarrierKind::Grid => {
            if cfg.n > 2 {
                return Err(verr(format!(
                    "grid carrier limited to n <= 2, got n = {}",
                    cfg.n
                )));
            }
            if cfg.resolution == 0 {
                cfg.resolution = 65;
            }
        }
        CarrierKind::Radial => {
            if cfg.n > 8 {
                return Err(verr(format!(
                    "radial carrier limited to n <= 8, got n = {}",
                    cfg.n
                )));
            }
            if cfg.box_domain {
                return Err(verr("radial carrier requires a ball domain"));
            }
            if cfg.resolution == 0 {
                cfg.resolution = 2001;
            }
        }
    }
    if cfg.resolution % 2 == 0 {
        return Err(verr(format!(
            "resolution must be odd (centre node required), got {}",
            cfg.resolution
        )));
    }
    if cfg.resolution < 5 {
        return Err(verr(format!(
            "resolution must be >= 5, got {}",
            cfg.resolution
        )));
    }
    if cfg.box_domain {
        if cfg.extents.is_empty() {
            cfg.extents = vec![1.0; 2 * cfg.n];
        }
        if cfg.extents.len() != 2 * cfg.n {
            return Err(verr(format!(
                "box needs one half-extent per real axis (2n = {}), got {}",
                2 * cfg.n,
                cfg.extents.len()
            )));
        }
        if cfg.extents.iter().any(|e| !(*e > 0.0)) {
            return Err(verr("all box extents must be > 0"));
        }
    } else if !(cfg.radius > 0.0) {
        return Err(verr(format!("R must be > 0, got {}", cfg.radius)));
    }
    if !(cfg.tol > 0.0) {
        return Err(verr(format!("tol must be > 0, got {}", cfg.tol)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_eig_config() {
        let cfg = parse_config(
            "command = eig\ncarrier = radial\nn = 2\nm = 2\nR = 1\nmeasure = beta_n\n",
        )
        .unwrap();
        assert_eq!(cfg.command, Some(Command::Eig));
        assert_eq!(cfg.resolution, 2001);
        assert_eq!(cfg.measure, MeasureSpec::BetaN);
    }

    #[test]
    fn constraint_violations_are_named() {
        let e = parse_config("n = 2\nm = 3\n").unwrap_err();
        assert!(e.to_string().contains("m exceeds n"), "{e}");

        let e = parse_config("carrier = grid\nn = 3\nm = 1\n").unwrap_err();
        assert!(
            e.to_string().contains("grid carrier limited to n <= 2"),
            "{e}"
        );

        let e = parse_config("carrier = grid\nn = 1\nm = 1\nresolution = 64\n").unwrap_err();
        assert!(e.to_string().contains("odd"), "{e}");
    }

    #[test]
    fn first_error_carries_line_number() {
        let e = parse_config("n = 1\nwhat = 3\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.to_string().contains("unknown key 'what'"));

        let e = parse_config("n = one\n").unwrap_err();
        assert_eq!(e.line, Some(1));

        let e = parse_config("n = 1\nn = 2\n").unwrap_err();
        assert!(e.to_string().contains("duplicate key"));
    }

    #[test]
    fn sections_and_comments_are_cosmetic() {
        let cfg =
            parse_config("# a comment\n[problem]\nn = 2\nm = 1\n[solver]\ntol = 1e-6 # inline\n")
                .unwrap();
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.tol, 1e-6);
    }

    #[test]
    fn family_block() {
        let cfg = parse_config("n = 2\nm = 2\nfamily = affine_k\nfamily_a = 1.5\nfamily_k = 1\n")
            .unwrap();
        assert_eq!(
            cfg.family,
            Some(FamilySpec::AffineK {
                a: 1.5,
                lambda: 0.0,
                k: 1
            })
        );
    }
}
