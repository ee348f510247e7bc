//! Flat key-value experiment configuration: one `key = value` per line,
//! `#` comments, documented defaults.

use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workflow {
    Localization,
    Resonance,
    Stress,
    Design,
    Validate,
}

impl Workflow {
    pub fn name(self) -> &'static str {
        match self {
            Workflow::Localization => "localization",
            Workflow::Resonance => "resonance",
            Workflow::Stress => "stress",
            Workflow::Design => "design",
            Workflow::Validate => "validate",
        }
    }
}

impl FromStr for Workflow {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "localization" => Ok(Workflow::Localization),
            "resonance" => Ok(Workflow::Resonance),
            "stress" => Ok(Workflow::Stress),
            "design" => Ok(Workflow::Design),
            "validate" => Ok(Workflow::Validate),
            other => Err(format!(
                "unknown workflow '{other}' (expected localization, resonance, \
                 stress, design, or validate)"
            )),
        }
    }
}

/// Incident coefficient policy: the sectoral mode f_{n,n} = 1 only, or all
/// 2n+1 coefficients set to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FPolicy {
    UnitMn,
    UnitAllM,
}

impl FPolicy {
    pub fn name(self) -> &'static str {
        match self {
            FPolicy::UnitMn => "unit_mn",
            FPolicy::UnitAllM => "unit_all_m",
        }
    }
}

impl FromStr for FPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unit_mn" => Ok(FPolicy::UnitMn),
            "unit_all_m" => Ok(FPolicy::UnitAllM),
            other => Err(format!(
                "f_policy must be unit_mn or unit_all_m, got '{other}'"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
    pub delta: Option<f64>,
    pub eps_rho: Option<f64>,
    pub omega: Vec<f64>,
    pub n: Vec<u32>,
    pub f_policy: FPolicy,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub r_outer: f64,
    pub eps_loc: Option<f64>,
    pub workflow: Option<Workflow>,
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            lambda: 1.0,
            mu: 1.0,
            rho: 1.0,
            delta: None,
            eps_rho: None,
            omega: Vec::new(),
            n: Vec::new(),
            f_policy: FPolicy::UnitMn,
            gamma1: None,
            gamma2: None,
            r_outer: 2.0,
            eps_loc: None,
            workflow: None,
            out: None,
        }
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("key '{key}': expected a number, got '{value}'"))
        .and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("key '{key}': value must be finite, got '{value}'"))
            }
        })
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

/// Parse the flat key-value format. Unknown keys are errors; the bare key
/// "eps" is rejected by name because it is ambiguous.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, String> {
    let mut cfg = ExperimentConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected 'key = value', got '{line}'", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "lambda" => cfg.lambda = parse_num(key, value)?,
            "mu" => cfg.mu = parse_num(key, value)?,
            "rho" => cfg.rho = parse_num(key, value)?,
            "delta" => cfg.delta = Some(parse_num(key, value)?),
            "eps_rho" => cfg.eps_rho = Some(parse_num(key, value)?),
            "eps_loc" => cfg.eps_loc = Some(parse_num(key, value)?),
            "eps" => {
                return Err(
                    "key 'eps' is ambiguous: use eps_rho (density contrast) or \
                     eps_loc (localization level)"
                        .into(),
                )
            }
            "omega" => cfg.omega = parse_list(key, value)?,
            "n" => {
                cfg.n = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<u32>()
                            .map_err(|_| format!("key 'n': expected a positive integer, got '{s}'"))
                    })
                    .collect::<Result<_, _>>()?
            }
            "f_policy" => cfg.f_policy = value.parse()?,
            "gamma1" => cfg.gamma1 = Some(parse_num(key, value)?),
            "gamma2" => cfg.gamma2 = Some(parse_num(key, value)?),
            "R" => cfg.r_outer = parse_num(key, value)?,
            "workflow" => cfg.workflow = Some(value.parse()?),
            "out" => cfg.out = Some(value.to_string()),
            other => return Err(format!("unknown key '{other}'")),
        }
    }
    Ok(cfg)
}

fn push_opt(out: &mut String, key: &str, v: Option<f64>) {
    if let Some(v) = v {
        let _ = writeln!(out, "{key} = {v}");
    }
}

/// Emit a config in the same flat format; `parse_config(emit_config(c)) == c`.
pub fn emit_config(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "lambda = {}", cfg.lambda);
    let _ = writeln!(out, "mu = {}", cfg.mu);
    let _ = writeln!(out, "rho = {}", cfg.rho);
    push_opt(&mut out, "delta", cfg.delta);
    push_opt(&mut out, "eps_rho", cfg.eps_rho);
    if !cfg.omega.is_empty() {
        let list: Vec<String> = cfg.omega.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "omega = {}", list.join(","));
    }
    if !cfg.n.is_empty() {
        let list: Vec<String> = cfg.n.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "n = {}", list.join(","));
    }
    let _ = writeln!(out, "f_policy = {}", cfg.f_policy.name());
    push_opt(&mut out, "gamma1", cfg.gamma1);
    push_opt(&mut out, "gamma2", cfg.gamma2);
    let _ = writeln!(out, "R = {}", cfg.r_outer);
    push_opt(&mut out, "eps_loc", cfg.eps_loc);
    if let Some(w) = cfg.workflow {
        let _ = writeln!(out, "workflow = {}", w.name());
    }
    if let Some(ref o) = cfg.out {
        let _ = writeln!(out, "out = {o}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig {
            lambda: 2.0,
            mu: 1.5,
            rho: 0.9,
            delta: Some(0.01),
            eps_rho: Some(0.04),
            omega: vec![0.01, 0.005],
            n: vec![3, 8, 21],
            f_policy: FPolicy::UnitAllM,
            gamma1: Some(0.9),
            gamma2: Some(1.2),
            r_outer: 2.5,
            eps_loc: Some(0.01),
            workflow: Some(Workflow::Localization),
            out: Some("rows.csv".into()),
        };
        assert_eq!(parse_config(&emit_config(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn contrast_example() {
        let cfg = parse_config("delta = 0.01\neps_rho = 0.04").unwrap();
        let tau = (cfg.delta.unwrap() / cfg.eps_rho.unwrap()).sqrt();
        assert!((tau - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ambiguous_eps_is_rejected() {
        let err = parse_config("eps = 0.01").unwrap_err();
        assert!(err.contains("eps_rho") && err.contains("eps_loc"));
    }

    #[test]
    fn defaults() {
        let cfg = parse_config("delta = 0.1").unwrap();
        assert_eq!(cfg.r_outer, 2.0);
        assert_eq!(cfg.f_policy, FPolicy::UnitMn);
        assert_eq!(cfg.lambda, 1.0);
    }

    #[test]
    fn unknown_key_and_bad_values() {
        assert!(parse_config("granularity = 3").unwrap_err().contains("granularity"));
        assert!(parse_config("delta = soft").unwrap_err().contains("delta"));
        assert!(parse_config("n = -2").unwrap_err().contains("n"));
        assert!(parse_config("workflow = paint").unwrap_err().contains("paint"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = parse_config("# experiment\ndelta = 0.1 # contrast\n\nmu = 2.0\n").unwrap();
        assert_eq!(cfg.delta, Some(0.1));
        assert_eq!(cfg.mu, 2.0);
    }
}
