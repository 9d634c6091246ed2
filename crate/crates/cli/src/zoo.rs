//! Inline state and POVM specifications such as `werner:d=2,phi=-0.4`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lhvcert_core::lhv::PovmSet;
use lhvcert_core::states::{self, BipartiteState};

use crate::formats::{read_json, StateJson};

pub const STATE_NAMES: &str = "werner:d=,phi= | ch:alpha= | maxent:d= | tiles | pyramid | separable:da=,db=,k=[,seed=]";

struct Params<'a> {
    name: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut values = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {pair:?}"))?;
            if values.insert(k.trim(), v.trim()).is_some() {
                bail!("{k} given twice");
            }
        }
        Ok(Self { name, values })
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("{}: bad value {v:?} for {key}: {e}", self.name)),
        }
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key)?.ok_or_else(|| anyhow!("{} needs {key}=", self.name))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            Some(k) => bail!("{}: unknown parameter {k}", self.name),
            None => Ok(()),
        }
    }
}

fn is_inline(spec: &str) -> bool {
    let name = spec.split(':').next().unwrap_or("");
    matches!(name, "werner" | "ch" | "choi-horodecki" | "maxent" | "tiles" | "pyramid" | "separable")
}

/// A zoo state written inline, or a path to a JSON state file.
pub fn load_state(spec: &str, seed: u64) -> Result<BipartiteState> {
    if !is_inline(spec) {
        let path = Path::new(spec);
        if !path.exists() {
            bail!("{spec:?} is neither a zoo state ({STATE_NAMES}) nor an existing file");
        }
        return read_json::<StateJson>(path)?.to_state();
    }
    let mut p = Params::parse(spec)?;
    let rho = match p.name {
        "werner" => states::werner(p.require("d")?, p.require("phi")?)?,
        "ch" | "choi-horodecki" => states::choi_horodecki(p.require("alpha")?)?,
        "maxent" => states::max_entangled(p.require("d")?)?,
        "tiles" => states::upb_state(&states::tiles_upb())?,
        "pyramid" => states::upb_state(&states::pyramid_upb())?,
        "separable" => {
            let (da, db, k) = (p.require("da")?, p.require("db")?, p.require("k")?);
            let seed = p.take("seed")?.unwrap_or(seed);
            states::random_separable(da, db, k, seed)?
        }
        _ => unreachable!(),
    };
    p.finish()?;
    Ok(rho)
}

/// Outcome counts per setting, joined by `+`, e.g. `2+2+3`.
fn outcome_list(s: &str) -> Result<Vec<usize>> {
    s.split('+')
        .map(|t| t.parse::<usize>().with_context(|| format!("bad outcome count {t:?}")))
        .collect()
}

/// `random:a=2+2,b=3+2` draws random POVMs (outcome counts per setting);
/// anything else is a JSON file.
pub fn load_povms(spec: &str, d_a: usize, d_b: usize, seed: u64) -> Result<(PovmSet, PovmSet)> {
    if spec.starts_with("random:") {
        let mut p = Params::parse(spec)?;
        let a: String = p.require("a")?;
        let b: String = p.require("b")?;
        p.finish()?;
        let a = PovmSet::random(d_a, &outcome_list(&a)?, seed)?;
        let b = PovmSet::random(d_b, &outcome_list(&b)?, seed.wrapping_add(1))?;
        return Ok((a, b));
    }
    read_json::<crate::formats::PovmsJson>(Path::new(spec))?.to_sets()
}
