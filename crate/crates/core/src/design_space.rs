// SPDX-License-Identifier: Apache-2.0

//! Tunable knobs, design points, their feature encoding, and sampling.
//!
//! A design space is an ordered list of [`KnobSpec`]s. Loops take one of
//! `none`, `pipeline` or `unroll`; arrays take one of `none`, `complete`,
//! `cyclic` or `block`. `unroll`, `cyclic` and `block` carry an integer factor
//! from the knob's allowed list, every other config carries factor 1.
//!
//! Arrays may share an `array_group`: all members of a group always use the
//! same partitioning config (factors stay per member). The constraint is
//! enforced when sampling, mutating, crossing over and validating.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Upper bound reported by [`DesignSpace::size`].
pub const SPACE_SIZE_CAP: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnobKind {
    Loop,
    Array,
}

impl FromStr for KnobKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "loop" => Ok(KnobKind::Loop),
            "array" => Ok(KnobKind::Array),
            _ => Err(()),
        }
    }
}

/// A directive configuration for a loop or an array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectiveConfig {
    None,
    Pipeline,
    Unroll,
    Complete,
    Cyclic,
    Block,
}

impl DirectiveConfig {
    pub fn name(self) -> &'static str {
        match self {
            DirectiveConfig::None => "none",
            DirectiveConfig::Pipeline => "pipeline",
            DirectiveConfig::Unroll => "unroll",
            DirectiveConfig::Complete => "complete",
            DirectiveConfig::Cyclic => "cyclic",
            DirectiveConfig::Block => "block",
        }
    }

    pub fn is_factor_bearing(self) -> bool {
        matches!(
            self,
            DirectiveConfig::Unroll | DirectiveConfig::Cyclic | DirectiveConfig::Block
        )
    }

    pub fn applies_to(self, kind: KnobKind) -> bool {
        match kind {
            KnobKind::Loop => matches!(
                self,
                DirectiveConfig::None | DirectiveConfig::Pipeline | DirectiveConfig::Unroll
            ),
            KnobKind::Array => matches!(
                self,
                DirectiveConfig::None
                    | DirectiveConfig::Complete
                    | DirectiveConfig::Cyclic
                    | DirectiveConfig::Block
            ),
        }
    }
}

impl fmt::Display for DirectiveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DirectiveConfig {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "none" => DirectiveConfig::None,
            "pipeline" => DirectiveConfig::Pipeline,
            "unroll" => DirectiveConfig::Unroll,
            "complete" => DirectiveConfig::Complete,
            "cyclic" => DirectiveConfig::Cyclic,
            "block" => DirectiveConfig::Block,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnobSpec {
    pub id: String,
    pub kind: KnobKind,
    pub array_group: Option<String>,
    pub allowed_configs: Vec<DirectiveConfig>,
    pub allowed_factors: Vec<u32>,
}

impl KnobSpec {
    fn factor_count(&self, config: DirectiveConfig) -> usize {
        if config.is_factor_bearing() {
            self.allowed_factors.len()
        } else {
            1
        }
    }

    /// Number of distinct (config, factor) values this knob can take.
    pub fn option_count(&self) -> usize {
        self.allowed_configs
            .iter()
            .map(|&c| self.factor_count(c))
            .sum()
    }

    /// All (config, factor) values in config order, then factor order.
    pub fn options(&self) -> Vec<Assignment> {
        let mut out = Vec::with_capacity(self.option_count());
        for &config in &self.allowed_configs {
            if config.is_factor_bearing() {
                out.extend(
                    self.allowed_factors
                        .iter()
                        .map(|&factor| Assignment { config, factor }),
                );
            } else {
                out.push(Assignment { config, factor: 1 });
            }
        }
        out
    }

    fn allows(&self, a: Assignment) -> bool {
        if !self.allowed_configs.contains(&a.config) {
            return false;
        }
        if a.config.is_factor_bearing() {
            self.allowed_factors.contains(&a.factor)
        } else {
            a.factor == 1
        }
    }
}

/// The value of one knob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub config: DirectiveConfig,
    pub factor: u32,
}

impl Assignment {
    pub fn new(config: DirectiveConfig, factor: u32) -> Self {
        Assignment { config, factor }
    }

    pub fn plain(config: DirectiveConfig) -> Self {
        Assignment { config, factor: 1 }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.config.is_factor_bearing() {
            write!(f, "{}:{}", self.config, self.factor)
        } else {
            f.write_str(self.config.name())
        }
    }
}

/// One assignment of every knob in a space.
///
/// Serializes to the point-file schema
/// `{"assignments": {"<knob_id>": {"config": "...", "factor": N}}}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DesignPoint {
    pub assignments: BTreeMap<String, Assignment>,
}

impl DesignPoint {
    pub fn get(&self, knob: &str) -> Option<Assignment> {
        self.assignments.get(knob).copied()
    }

    pub fn set(&mut self, knob: &str, a: Assignment) {
        self.assignments.insert(knob.to_string(), a);
    }

    /// Stable 64-bit identifier, hex encoded.
    pub fn id(&self) -> String {
        let mut hasher = Sha256::new();
        for (knob, a) in &self.assignments {
            hasher.update(knob.as_bytes());
            hasher.update(b"=");
            hasher.update(a.config.name().as_bytes());
            hasher.update(b":");
            hasher.update(a.factor.to_string().as_bytes());
            hasher.update(b";");
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Compact `knob=config[:factor]` rendering joined by `;`.
    pub fn describe(&self) -> String {
        self.assignments
            .iter()
            .map(|(k, a)| format!("{k}={a}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Numeric model input; see [`DesignSpace::encode`] for the layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KnobFileError {
    #[error("knob file is empty or lacks the header row")]
    MissingHeader,
    #[error("unexpected header {0:?}, expected `id,kind,group,configs,factors`")]
    BadHeader(String),
    #[error("line {line}: {message}")]
    Syntax { line: u64, message: String },
    #[error("line {line}: duplicate knob id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error("line {line}: unknown kind `{kind}`")]
    UnknownKind { line: u64, kind: String },
    #[error("line {line}: config `{config}` is not valid for knob `{id}`")]
    UnknownConfig {
        line: u64,
        id: String,
        config: String,
    },
    #[error("line {line}: knob `{id}` has no configs")]
    NoConfigs { line: u64, id: String },
    #[error("line {line}: knob `{id}` lists a factor-bearing config but no factors")]
    MissingFactors { line: u64, id: String },
    #[error("line {line}: invalid factor `{value}` for knob `{id}`")]
    BadFactor {
        line: u64,
        id: String,
        value: String,
    },
    #[error("line {line}: factors of knob `{id}` must be strictly increasing")]
    UnsortedFactors { line: u64, id: String },
    #[error("{0}")]
    Space(#[from] SpaceError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("design space has no knobs")]
    Empty,
    #[error("duplicate knob id `{0}`")]
    DuplicateId(String),
    #[error("knob `{0}` is invalid: {1}")]
    InvalidKnob(String, String),
    #[error("group `{group}` mixes knobs with different config lists")]
    GroupConfigMismatch { group: String },
}

const HEADER: [&str; 5] = ["id", "kind", "group", "configs", "factors"];

/// Parse a knob CSV (`id,kind,group,configs,factors`, `|`-separated lists).
pub fn parse_knob_file(text: &str) -> Result<Vec<KnobSpec>, KnobFileError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(|e| KnobFileError::Syntax {
        line: 1,
        message: e.to_string(),
    })?;
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(KnobFileError::MissingHeader);
    }
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(KnobFileError::BadHeader(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }

    let mut specs: Vec<KnobSpec> = Vec::new();
    let mut seen = BTreeSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| KnobFileError::Syntax {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(KnobFileError::Syntax {
                line,
                message: "empty knob id".into(),
            });
        }
        if !seen.insert(id.clone()) {
            return Err(KnobFileError::DuplicateId { line, id });
        }
        let kind: KnobKind = record[1].parse().map_err(|_| KnobFileError::UnknownKind {
            line,
            kind: record[1].to_string(),
        })?;
        let group = match &record[2] {
            "" => None,
            g => Some(g.to_string()),
        };

        let mut configs = Vec::new();
        for name in split_list(&record[3]) {
            let config = name
                .parse::<DirectiveConfig>()
                .ok()
                .filter(|c| c.applies_to(kind) && !configs.contains(c))
                .ok_or_else(|| KnobFileError::UnknownConfig {
                    line,
                    id: id.clone(),
                    config: name.to_string(),
                })?;
            configs.push(config);
        }
        if configs.is_empty() {
            return Err(KnobFileError::NoConfigs { line, id });
        }

        let mut factors = Vec::new();
        for value in split_list(&record[4]) {
            let factor = value
                .parse::<u32>()
                .ok()
                .filter(|&f| f >= 1)
                .ok_or_else(|| KnobFileError::BadFactor {
                    line,
                    id: id.clone(),
                    value: value.to_string(),
                })?;
            if factors.last().is_some_and(|&prev| prev >= factor) {
                return Err(KnobFileError::UnsortedFactors { line, id });
            }
            factors.push(factor);
        }
        if factors.is_empty() && configs.iter().any(|c| c.is_factor_bearing()) {
            return Err(KnobFileError::MissingFactors { line, id });
        }

        specs.push(KnobSpec {
            id,
            kind,
            array_group: group,
            allowed_configs: configs,
            allowed_factors: factors,
        });
    }
    // Cross-row checks (group consistency).
    DesignSpace::new(specs.clone())?;
    Ok(specs)
}

fn split_list(cell: &str) -> impl Iterator<Item = &str> {
    cell.split('|').map(str::trim).filter(|s| !s.is_empty())
}

/// A validated violation of the design point invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub knob: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.knob, self.message)
    }
}

/// Sampling unit: a free knob, or every member of an array group.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Unit {
    Single(usize),
    Group { name: String, members: Vec<usize> },
}

/// Validated, ordered set of knobs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<KnobSpec>", into = "Vec<KnobSpec>")]
pub struct DesignSpace {
    knobs: Vec<KnobSpec>,
    #[serde(skip)]
    units: Vec<Unit>,
}

impl TryFrom<Vec<KnobSpec>> for DesignSpace {
    type Error = SpaceError;

    fn try_from(specs: Vec<KnobSpec>) -> Result<Self, SpaceError> {
        DesignSpace::new(specs)
    }
}

impl From<DesignSpace> for Vec<KnobSpec> {
    fn from(space: DesignSpace) -> Self {
        space.knobs
    }
}

impl DesignSpace {
    pub fn new(knobs: Vec<KnobSpec>) -> Result<Self, SpaceError> {
        if knobs.is_empty() {
            return Err(SpaceError::Empty);
        }
        let mut ids = BTreeSet::new();
        for k in &knobs {
            if !ids.insert(k.id.as_str()) {
                return Err(SpaceError::DuplicateId(k.id.clone()));
            }
            let invalid = |msg: &str| SpaceError::InvalidKnob(k.id.clone(), msg.to_string());
            if k.allowed_configs.is_empty() {
                return Err(invalid("no allowed configs"));
            }
            if let Some(c) = k.allowed_configs.iter().find(|c| !c.applies_to(k.kind)) {
                return Err(invalid(&format!("config `{c}` does not apply")));
            }
            let has_factor_config = k.allowed_configs.iter().any(|c| c.is_factor_bearing());
            if has_factor_config && k.allowed_factors.is_empty() {
                return Err(invalid("factor-bearing config without factors"));
            }
            if k.allowed_factors.contains(&0) || k.allowed_factors.windows(2).any(|w| w[0] >= w[1])
            {
                return Err(invalid("factors must be positive and strictly increasing"));
            }
            if k.array_group.is_some() && k.kind != KnobKind::Array {
                return Err(invalid("only arrays may belong to a group"));
            }
        }

        let mut units = Vec::new();
        let mut group_slot: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, k) in knobs.iter().enumerate() {
            match &k.array_group {
                None => units.push(Unit::Single(i)),
                Some(g) => {
                    if let Some(&slot) = group_slot.get(g.as_str()) {
                        if let Unit::Group { members, .. } = &mut units[slot] {
                            if knobs[members[0]].allowed_configs != k.allowed_configs {
                                return Err(SpaceError::GroupConfigMismatch { group: g.clone() });
                            }
                            members.push(i);
                        }
                    } else {
                        group_slot.insert(g.as_str(), units.len());
                        units.push(Unit::Group {
                            name: g.clone(),
                            members: vec![i],
                        });
                    }
                }
            }
        }
        Ok(DesignSpace { knobs, units })
    }

    pub fn from_csv(text: &str) -> Result<Self, KnobFileError> {
        Ok(DesignSpace::new(parse_knob_file(text)?)?)
    }

    pub fn knobs(&self) -> &[KnobSpec] {
        &self.knobs
    }

    pub fn knob(&self, id: &str) -> Option<&KnobSpec> {
        self.knobs.iter().find(|k| k.id == id)
    }

    /// Indices of all knobs sharing `knob`'s group, including itself.
    pub fn group_of(&self, knob: usize) -> Vec<usize> {
        match &self.knobs[knob].array_group {
            None => vec![knob],
            Some(g) => self
                .knobs
                .iter()
                .enumerate()
                .filter(|(_, k)| k.array_group.as_ref() == Some(g))
                .map(|(i, _)| i)
                .collect(),
        }
    }

    /// Number of valid design points, saturating at [`SPACE_SIZE_CAP`].
    pub fn size(&self) -> u64 {
        let mut total: u64 = 1;
        for unit in &self.units {
            total = total
                .saturating_mul(self.unit_size(unit))
                .min(SPACE_SIZE_CAP);
        }
        total
    }

    fn unit_size(&self, unit: &Unit) -> u64 {
        match unit {
            Unit::Single(i) => self.knobs[*i].option_count() as u64,
            Unit::Group { members, .. } => self.knobs[members[0]]
                .allowed_configs
                .iter()
                .map(|&c| {
                    members.iter().fold(1u64, |acc, &m| {
                        acc.saturating_mul(self.knobs[m].factor_count(c) as u64)
                    })
                })
                .fold(0u64, u64::saturating_add)
                .min(SPACE_SIZE_CAP),
        }
    }

    /// Uniform sample over the valid points.
    ///
    /// A group's partitioning config is drawn once, weighted by how many
    /// member-factor combinations it admits, so the joint distribution stays
    /// uniform over the group's options.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DesignPoint {
        let mut point = DesignPoint::default();
        for unit in &self.units {
            match unit {
                Unit::Single(i) => {
                    let k = &self.knobs[*i];
                    let options = k.options();
                    let pick = options[rng.random_range(0..options.len())];
                    point.set(&k.id, pick);
                }
                Unit::Group { members, .. } => {
                    let lead = &self.knobs[members[0]];
                    let weights: Vec<f64> = lead
                        .allowed_configs
                        .iter()
                        .map(|&c| {
                            members
                                .iter()
                                .map(|&m| self.knobs[m].factor_count(c) as f64)
                                .product()
                        })
                        .collect();
                    let config = lead.allowed_configs[weighted_index(&weights, rng)];
                    for &m in members {
                        let factor = self.random_factor(m, config, rng);
                        point.set(&self.knobs[m].id, Assignment { config, factor });
                    }
                }
            }
        }
        point
    }

    pub(crate) fn random_factor<R: Rng + ?Sized>(
        &self,
        knob: usize,
        config: DirectiveConfig,
        rng: &mut R,
    ) -> u32 {
        if config.is_factor_bearing() {
            let factors = &self.knobs[knob].allowed_factors;
            factors[rng.random_range(0..factors.len())]
        } else {
            1
        }
    }

    /// Switches every member of `knob`'s group to `config`, keeping a member's
    /// factor when it stays meaningful and drawing a fresh one otherwise.
    pub(crate) fn align_group<R: Rng + ?Sized>(
        &self,
        point: &mut DesignPoint,
        knob: usize,
        rng: &mut R,
    ) {
        let config = match point.get(&self.knobs[knob].id) {
            Some(a) => a.config,
            None => return,
        };
        for m in self.group_of(knob) {
            if m == knob {
                continue;
            }
            let spec = &self.knobs[m];
            let current = point.get(&spec.id);
            if current.is_some_and(|a| a.config == config) {
                continue;
            }
            let factor = match current {
                Some(a)
                    if config.is_factor_bearing()
                        && a.config.is_factor_bearing()
                        && spec.allowed_factors.contains(&a.factor) =>
                {
                    a.factor
                }
                _ => self.random_factor(m, config, rng),
            };
            point.set(&spec.id, Assignment { config, factor });
        }
    }

    /// Length of [`encode`](Self::encode)'s output.
    pub fn feature_len(&self) -> usize {
        self.knobs.iter().map(|k| k.allowed_configs.len() + 1).sum()
    }

    /// One-hot config block (in `allowed_configs` order) followed by the raw
    /// factor, for each knob in order.
    pub fn encode(&self, point: &DesignPoint) -> Result<FeatureVector, Vec<Violation>> {
        let violations = self.validate(point);
        if !violations.is_empty() {
            return Err(violations);
        }
        Ok(self.encode_unchecked(point))
    }

    pub(crate) fn encode_unchecked(&self, point: &DesignPoint) -> FeatureVector {
        let mut values = Vec::with_capacity(self.feature_len());
        for k in &self.knobs {
            let a = point
                .get(&k.id)
                .unwrap_or(Assignment::plain(k.allowed_configs[0]));
            values.extend(
                k.allowed_configs
                    .iter()
                    .map(|&c| if c == a.config { 1.0 } else { 0.0 }),
            );
            values.push(a.factor as f64);
        }
        FeatureVector(values)
    }

    /// Every violated point invariant, tagged with the knob it concerns.
    pub fn validate(&self, point: &DesignPoint) -> Vec<Violation> {
        let mut out = Vec::new();
        for knob in point.assignments.keys() {
            if self.knob(knob).is_none() {
                out.push(Violation {
                    knob: knob.clone(),
                    message: "unknown knob".into(),
                });
            }
        }
        for k in &self.knobs {
            match point.get(&k.id) {
                None => out.push(Violation {
                    knob: k.id.clone(),
                    message: "missing assignment".into(),
                }),
                Some(a) if !k.allowed_configs.contains(&a.config) => out.push(Violation {
                    knob: k.id.clone(),
                    message: format!("config `{}` not allowed", a.config),
                }),
                Some(a) if !k.allows(a) => out.push(Violation {
                    knob: k.id.clone(),
                    message: format!("factor {} not allowed for `{}`", a.factor, a.config),
                }),
                Some(_) => {}
            }
        }
        for unit in &self.units {
            if let Unit::Group { name, members } = unit {
                let configs: BTreeSet<DirectiveConfig> = members
                    .iter()
                    .filter_map(|&m| point.get(&self.knobs[m].id))
                    .map(|a| a.config)
                    .collect();
                if configs.len() > 1 {
                    out.push(Violation {
                        knob: self.knobs[members[0]].id.clone(),
                        message: format!("group `{name}` mixes partitioning configs"),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self, point: &DesignPoint) -> bool {
        self.validate(point).is_empty()
    }

    /// Every valid point, in a fixed order. Only sensible for small spaces.
    pub fn enumerate(&self) -> Vec<DesignPoint> {
        let unit_options: Vec<Vec<Vec<(usize, Assignment)>>> =
            self.units.iter().map(|u| self.unit_options(u)).collect();
        let mut out = Vec::new();
        let mut odometer = vec![0usize; unit_options.len()];
        loop {
            let mut point = DesignPoint::default();
            for (u, &choice) in odometer.iter().enumerate() {
                for &(knob, a) in &unit_options[u][choice] {
                    point.set(&self.knobs[knob].id, a);
                }
            }
            out.push(point);
            let mut pos = unit_options.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < unit_options[pos].len() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }

    fn unit_options(&self, unit: &Unit) -> Vec<Vec<(usize, Assignment)>> {
        match unit {
            Unit::Single(i) => self.knobs[*i]
                .options()
                .into_iter()
                .map(|a| vec![(*i, a)])
                .collect(),
            Unit::Group { members, .. } => {
                let mut out = Vec::new();
                for &config in &self.knobs[members[0]].allowed_configs {
                    let mut partial: Vec<Vec<(usize, Assignment)>> = vec![Vec::new()];
                    for &m in members {
                        let factors: Vec<u32> = if config.is_factor_bearing() {
                            self.knobs[m].allowed_factors.clone()
                        } else {
                            vec![1]
                        };
                        partial = partial
                            .into_iter()
                            .flat_map(|prefix| {
                                factors.iter().map(move |&factor| {
                                    let mut next = prefix.clone();
                                    next.push((m, Assignment { config, factor }));
                                    next
                                })
                            })
                            .collect();
                    }
                    out.extend(partial);
                }
                out
            }
        }
    }
}

pub(crate) fn weighted_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if target < *w {
            return i;
        }
        target -= w;
    }
    weights.len() - 1
}

#[cfg(test)]
pub(crate) fn decode(space: &DesignSpace, x: &FeatureVector) -> DesignPoint {
    let mut point = DesignPoint::default();
    let mut offset = 0;
    for k in space.knobs() {
        let block = &x.0[offset..offset + k.allowed_configs.len()];
        let hot = block.iter().position(|&v| v == 1.0).unwrap();
        let factor = x.0[offset + k.allowed_configs.len()] as u32;
        point.set(&k.id, Assignment::new(k.allowed_configs[hot], factor));
        offset += k.allowed_configs.len() + 1;
    }
    point
}
