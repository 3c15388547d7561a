//! Argument resolution: ray sets from catalog keys or files, states from
//! keys or inline components.

use std::str::FromStr;

use anyhow::Context;
use bks_core::{catalog, parse_ray_set, Mode, Ray, RaySet, Scalar, State};

use crate::SetSource;

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "bases" => Ok(Mode::BasesOnly),
        "bases+pairs" => Ok(Mode::BasesAndPairs),
        other => Err(format!("bad mode {other:?}; expected bases or bases+pairs")),
    }
}

pub fn load_ray_set(source: &SetSource) -> anyhow::Result<RaySet> {
    match (&source.set, &source.file) {
        (Some(key), None) => Ok(catalog::ray_set(key)?.rays),
        (None, Some(path)) => {
            let content = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_ray_set(&content).with_context(|| format!("parsing {}", path.display()))?)
        }
        _ => unreachable!("clap enforces exactly one source"),
    }
}

/// A catalog key (`singlet`, `hardy`, `phi-xx`) or inline components such
/// as `0,1,-1,0` (commas or whitespace, integers or p/q rationals).
pub fn parse_state(spec: &str) -> anyhow::Result<State> {
    if let Ok(state) = catalog::state(spec) {
        return Ok(state);
    }
    let components: Vec<Scalar> = spec
        .split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| Scalar::from_str(t).map_err(|e| anyhow::anyhow!("bad state component {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if components.len() < 2 {
        anyhow::bail!(
            "bad state {spec:?}: expected a catalog key (singlet, hardy, phi-xx) \
             or a component list like 0,1,-1,0"
        );
    }
    let ray = Ray::new(&components)?;
    Ok(State::new(ray))
}

/// Space-separated canonical components; the text-format line for a ray.
pub fn ray_line(ray: &Ray) -> String {
    ray.components()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Human description of the input source for reports.
pub fn source_label(source: &SetSource) -> String {
    match (&source.set, &source.file) {
        (Some(key), None) => format!("catalog:{key}"),
        (None, Some(path)) => format!("file:{}", path.display()),
        _ => unreachable!("clap enforces exactly one source"),
    }
}
