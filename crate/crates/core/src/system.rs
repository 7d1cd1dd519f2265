//! Substitution tile systems: prototiles, stone-inflation rules and the
//! per-tile volume and Dehn data, loaded from JSON or from the built-ins.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dehn::DehnElement;
use crate::golden::GoldenNumber;
use crate::inflation::{CountVector, GoldenVector};

const MS4_JSON: &str = include_str!("../data/ms4.json");
const MS5_JSON: &str = include_str!("../data/ms5.json");

/// Tile ordering of the four-tile system; rows of its inflation matrix.
pub const MS4_ORDER: [&str; 4] = ["z", "h", "s", "a"];
/// Tile ordering of the five-tile system.
pub const MS5_ORDER: [&str; 5] = ["a", "m", "r", "z", "s"];

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("malformed system document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("rule for {parent} names unknown tile {child}")]
    UnknownChild { parent: String, child: String },
    #[error(
        "stone-inflation volume identity fails for {parent}: factor^dim * vol = {expected}, children sum to {actual} (mismatch {mismatch})"
    )]
    VolumeIdentity {
        parent: String,
        expected: Box<GoldenNumber>,
        actual: Box<GoldenNumber>,
        mismatch: Box<GoldenNumber>,
    },
    #[error("unknown built-in system {0:?} (expected ms4, ms5 or a file path)")]
    UnknownSystem(String),
    #[error("{0}")]
    Pairing(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prototile {
    pub name: String,
    pub volume: Option<GoldenNumber>,
    pub dehn: Option<DehnElement>,
    /// Data obtained from consistency conditions rather than measured.
    pub derived: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRule {
    pub parent: String,
    pub children: BTreeMap<String, u64>,
}

impl SubstitutionRule {
    pub fn total_children(&self) -> u64 {
        self.children.values().sum()
    }

    pub fn count(&self, child: &str) -> u64 {
        self.children.get(child).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleDecl {
    pub key: String,
    pub independent: bool,
}

/// A validated tile system. Rules are aligned with `tiles`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSystem {
    name: String,
    factor: GoldenNumber,
    dimension: u32,
    tiles: Vec<Prototile>,
    rules: Vec<SubstitutionRule>,
    angles: Vec<AngleDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TileDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    volume: Option<GoldenNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dehn: Option<DehnElement>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    derived: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    name: String,
    factor: GoldenNumber,
    dimension: u32,
    tiles: Vec<TileDoc>,
    rules: BTreeMap<String, BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    angles: Vec<AngleDecl>,
}

impl TileSystem {
    pub fn new(
        name: impl Into<String>,
        factor: GoldenNumber,
        dimension: u32,
        tiles: Vec<Prototile>,
        rules: Vec<SubstitutionRule>,
        angles: Vec<AngleDecl>,
    ) -> Result<Self, SystemError> {
        let schema = |m: String| Err(SystemError::Schema(m));
        let name = name.into();
        if dimension == 0 {
            return schema("dimension must be positive".into());
        }
        if factor <= GoldenNumber::one() {
            return schema(format!("inflation factor {factor} must exceed 1"));
        }
        if tiles.is_empty() {
            return schema("system has no tiles".into());
        }
        let mut names = BTreeSet::new();
        for t in &tiles {
            if t.name.is_empty() {
                return schema("empty tile name".into());
            }
            if !names.insert(t.name.as_str()) {
                return schema(format!("duplicate tile {}", t.name));
            }
            if let Some(v) = &t.volume {
                if !v.is_positive() {
                    return schema(format!("tile {} has nonpositive volume {v}", t.name));
                }
            }
        }
        let with_volume = tiles.iter().filter(|t| t.volume.is_some()).count();
        if with_volume != 0 && with_volume != tiles.len() {
            return schema("volumes must be given for all tiles or none".into());
        }
        let with_dehn = tiles.iter().filter(|t| t.dehn.is_some()).count();
        if with_dehn != 0 && with_dehn != tiles.len() {
            return schema("Dehn data must be given for all tiles or none".into());
        }
        let declared: BTreeSet<&str> = angles.iter().map(|a| a.key.as_str()).collect();
        for a in &angles {
            if !a.independent {
                return schema(format!(
                    "angle {} must be declared independent; relations between angle classes are not modeled",
                    a.key
                ));
            }
        }
        for t in &tiles {
            for key in t.dehn.iter().flat_map(DehnElement::keys) {
                if !declared.contains(key) {
                    return schema(format!("tile {} uses undeclared angle {key}", t.name));
                }
            }
        }

        // Align rules to tile order.
        let mut by_parent: BTreeMap<String, SubstitutionRule> = BTreeMap::new();
        for r in rules {
            if !names.contains(r.parent.as_str()) {
                return schema(format!("rule for unknown tile {}", r.parent));
            }
            if let Some(child) = r.children.keys().find(|c| !names.contains(c.as_str())) {
                return Err(SystemError::UnknownChild {
                    parent: r.parent.clone(),
                    child: child.clone(),
                });
            }
            if r.total_children() == 0 {
                return schema(format!("rule for {} has no children", r.parent));
            }
            let parent = r.parent.clone();
            if by_parent.insert(parent.clone(), r).is_some() {
                return schema(format!("more than one rule for {parent}"));
            }
        }
        let mut aligned = Vec::with_capacity(tiles.len());
        for t in &tiles {
            match by_parent.remove(&t.name) {
                Some(mut r) => {
                    r.children.retain(|_, n| *n > 0);
                    aligned.push(r);
                }
                None => return schema(format!("no rule for tile {}", t.name)),
            }
        }

        let system = TileSystem {
            name,
            factor,
            dimension,
            tiles,
            rules: aligned,
            angles,
        };
        system.check_volume_identity()?;
        Ok(system)
    }

    fn check_volume_identity(&self) -> Result<(), SystemError> {
        for (parent, residual) in self.volume_identity_residuals().into_iter().flatten() {
            if !residual.is_zero() {
                let expected =
                    self.volume_eigenvalue() * self.volume(&parent).expect("volumes present");
                return Err(SystemError::VolumeIdentity {
                    parent,
                    actual: Box::new(&expected - &residual),
                    expected: Box::new(expected),
                    mismatch: Box::new(residual),
                });
            }
        }
        Ok(())
    }

    /// Per rule, `factor^dim · vol(parent) − Σ count · vol(child)`;
    /// `None` without volume data.
    pub fn volume_identity_residuals(&self) -> Option<Vec<(String, GoldenNumber)>> {
        let lambda = self.volume_eigenvalue();
        self.rules
            .iter()
            .map(|r| {
                let parent_vol = self.volume(&r.parent)?;
                let children: GoldenNumber = r
                    .children
                    .iter()
                    .map(|(c, &n)| self.volume(c).map(|v| v * GoldenNumber::from_integer(n)))
                    .sum::<Option<GoldenNumber>>()?;
                Some((r.parent.clone(), &lambda * parent_vol - children))
            })
            .collect()
    }

    /// Per rule and angle class, `factor · D(parent) − Σ count · D(child)`.
    pub fn dehn_identity_residuals(&self) -> Option<Vec<(String, DehnElement)>> {
        self.rules
            .iter()
            .map(|r| {
                let parent = self.dehn(&r.parent)?.scale(&self.factor);
                let children: DehnElement = r
                    .children
                    .iter()
                    .map(|(c, &n)| {
                        self.dehn(c)
                            .map(|d| d.scale(&GoldenNumber::from_integer(n)))
                    })
                    .sum::<Option<DehnElement>>()?;
                Some((
                    r.parent.clone(),
                    &parent + &children.scale(&GoldenNumber::from(-1)),
                ))
            })
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factor(&self) -> &GoldenNumber {
        &self.factor
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// `factor^dimension`, the eigenvalue carried by volumes.
    pub fn volume_eigenvalue(&self) -> GoldenNumber {
        self.factor.pow(self.dimension)
    }

    pub fn tiles(&self) -> &[Prototile] {
        &self.tiles
    }

    pub fn rules(&self) -> &[SubstitutionRule] {
        &self.rules
    }

    pub fn angles(&self) -> &[AngleDecl] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn order(&self) -> Vec<String> {
        self.tiles.iter().map(|t| t.name.clone()).collect()
    }

    pub fn index_of(&self, tile: &str) -> Option<usize> {
        self.tiles.iter().position(|t| t.name == tile)
    }

    pub fn tile(&self, name: &str) -> Option<&Prototile> {
        self.tiles.iter().find(|t| t.name == name)
    }

    pub fn volume(&self, name: &str) -> Option<&GoldenNumber> {
        self.tile(name)?.volume.as_ref()
    }

    pub fn dehn(&self, name: &str) -> Option<&DehnElement> {
        self.tile(name)?.dehn.as_ref()
    }

    pub fn has_volumes(&self) -> bool {
        self.tiles.iter().all(|t| t.volume.is_some())
    }

    pub fn has_dehn(&self) -> bool {
        self.tiles.iter().all(|t| t.dehn.is_some())
    }

    pub fn volume_vector(&self) -> Option<GoldenVector> {
        self.tiles
            .iter()
            .map(|t| t.volume.clone())
            .collect::<Option<Vec<_>>>()
            .map(GoldenVector::new)
    }

    /// Angle classes that carry a nonzero coefficient on some tile.
    pub fn dehn_keys(&self) -> Vec<String> {
        let keys: BTreeSet<&str> = self
            .tiles
            .iter()
            .flat_map(|t| t.dehn.iter().flat_map(DehnElement::keys))
            .collect();
        keys.into_iter().map(str::to_string).collect()
    }

    /// Coefficient vector of the Dehn invariants on one angle class.
    pub fn dehn_vector(&self, key: &str) -> Option<GoldenVector> {
        self.tiles
            .iter()
            .map(|t| t.dehn.as_ref().map(|d| d.coeff(key)))
            .collect::<Option<Vec<_>>>()
            .map(GoldenVector::new)
    }

    /// Count vector from a list of tile names; repeats add up.
    pub fn counts_of(&self, tiles: &[&str]) -> Result<CountVector, SystemError> {
        let mut counts = vec![BigUint::default(); self.len()];
        for t in tiles {
            let i = self.index_of(t).ok_or_else(|| {
                SystemError::Schema(format!("unknown tile {t} in system {}", self.name))
            })?;
            counts[i] += 1u32;
        }
        Ok(CountVector::new(counts))
    }

    fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            name: self.name.clone(),
            factor: self.factor.clone(),
            dimension: self.dimension,
            tiles: self
                .tiles
                .iter()
                .map(|t| TileDoc {
                    name: t.name.clone(),
                    volume: t.volume.clone(),
                    dehn: t.dehn.clone(),
                    derived: t.derived,
                })
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|r| (r.parent.clone(), r.children.clone()))
                .collect(),
            angles: self.angles.clone(),
        }
    }

    fn from_doc(doc: SystemDoc) -> Result<Self, SystemError> {
        let tiles = doc
            .tiles
            .into_iter()
            .map(|t| Prototile {
                name: t.name,
                volume: t.volume,
                dehn: t.dehn,
                derived: t.derived,
            })
            .collect();
        let rules = doc
            .rules
            .into_iter()
            .map(|(parent, children)| SubstitutionRule { parent, children })
            .collect();
        TileSystem::new(
            doc.name,
            doc.factor,
            doc.dimension,
            tiles,
            rules,
            doc.angles,
        )
    }
}

/// Parses and validates a JSON tile-system document.
pub fn load_system(document: &str) -> Result<TileSystem, SystemError> {
    let doc: SystemDoc = serde_json::from_str(document)?;
    TileSystem::from_doc(doc)
}

pub fn render_system(system: &TileSystem) -> String {
    serde_json::to_string_pretty(&system.to_doc()).expect("system documents always serialize")
}

pub fn builtin(name: &str) -> Option<TileSystem> {
    let doc = match name {
        "ms4" => MS4_JSON,
        "ms5" => MS5_JSON,
        _ => return None,
    };
    Some(load_system(doc).expect("built-in systems are valid"))
}

pub fn ms4() -> TileSystem {
    builtin("ms4").expect("ms4 is built in")
}

pub fn ms5() -> TileSystem {
    builtin("ms5").expect("ms5 is built in")
}

/// Raw JSON of a built-in system.
pub fn builtin_document(name: &str) -> Option<&'static str> {
    match name {
        "ms4" => Some(MS4_JSON),
        "ms5" => Some(MS5_JSON),
        _ => None,
    }
}

/// `"ms4"`, `"ms5"` or a path to a JSON document.
pub fn resolve_system(source: &str) -> Result<TileSystem, SystemError> {
    if let Some(s) = builtin(source) {
        return Ok(s);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(SystemError::UnknownSystem(source.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|source_err| SystemError::Io {
        path: source.to_string(),
        source: source_err,
    })?;
    load_system(&text)
}

/// Merges r and m of a five-tile count vector into h of the four-tile
/// ordering `z, h, s, a`. `order` names the entries of `counts`.
pub fn compose_h(order: &[String], counts: &CountVector) -> Result<CountVector, SystemError> {
    if order.len() != counts.len() {
        return Err(SystemError::Pairing(format!(
            "count vector has {} entries for {} tiles",
            counts.len(),
            order.len()
        )));
    }
    let get = |tile: &str| -> Result<&BigUint, SystemError> {
        order
            .iter()
            .position(|t| t == tile)
            .map(|i| &counts.counts()[i])
            .ok_or_else(|| SystemError::Pairing(format!("tile {tile} missing from ordering")))
    };
    let (r, m) = (get("r")?, get("m")?);
    if r != m {
        return Err(SystemError::Pairing(format!(
            "r and m must pair up into h, found r = {r} and m = {m}"
        )));
    }
    Ok(CountVector::new(vec![
        get("z")?.clone(),
        r.clone(),
        get("s")?.clone(),
        get("a")?.clone(),
    ]))
}
