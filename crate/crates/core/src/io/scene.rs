//! Scene files: the residue field, value group, domain and sampling policy
//! shared by every command.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::expr::parse_expr;
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::report::{Check, Report, SceneRef};
use crate::residue_field::FieldSpec;
use crate::skolem::suites::sample_domain;
use crate::skolem::SampleSet;
use crate::valgroup::GroupDescriptor;
use crate::valued_field::{ValuedElement, ValuedField};

const PRESETS: [(&str, &str); 5] = [
    ("a", include_str!("../../../../scenes/a.json")),
    ("b", include_str!("../../../../scenes/b.json")),
    ("c", include_str!("../../../../scenes/c.json")),
    ("d", include_str!("../../../../scenes/d.json")),
    ("e", include_str!("../../../../scenes/e.json")),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Valuation,
    Pvd { subfield: FieldSpec, basis: Vec<String> },
}

fn default_count() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePolicy {
    #[serde(default = "default_count")]
    pub count: usize,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        SamplePolicy {
            count: default_count(),
        }
    }
}

/// The on-disk form of a scene.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub field: FieldSpec,
    pub group: GroupDescriptor,
    pub puiseux: bool,
    pub domain: DomainSpec,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    #[serde(default)]
    pub samples: SamplePolicy,
    #[serde(default)]
    pub seed: u64,
}

/// A validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub kv: ValuedField,
    pub domain: Domain,
    /// Units whose residues form a basis over the subfield (PVD scenes).
    pub basis: Vec<ValuedElement>,
    pub constants: BTreeMap<String, ValuedElement>,
    /// Hex SHA-256 of the canonical JSON form.
    pub digest: String,
}

fn schema(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Schema {
        path: path.to_string(),
        msg: e.to_string(),
    }
}

impl Scene {
    pub fn from_json_str(src: &str) -> Result<Scene> {
        let de = &mut serde_json::Deserializer::from_str(src);
        let file: SceneFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            schema(&path, e.into_inner())
        })?;
        Scene::from_file(file)
    }

    pub fn from_file(file: SceneFile) -> Result<Scene> {
        let field = file.field.build().map_err(|e| schema("field", e))?;
        file.group.validate().map_err(|e| schema("group", e))?;
        let non_integer = file.group != GroupDescriptor::Integers;
        if file.puiseux != non_integer {
            return Err(schema(
                "puiseux",
                format!("must be {non_integer} for group {}", file.group),
            ));
        }
        if file.samples.count == 0 {
            return Err(schema("samples.count", "must be positive"));
        }
        let kv = ValuedField::new(field, file.group.clone()).map_err(|e| schema("group", e))?;
        let mut constants = BTreeMap::new();
        for (name, src) in &file.constants {
            let path = format!("constants.{name}");
            if name == "x" || name == kv.uniformizer() || name == kv.field().symbol() {
                return Err(schema(&path, "name shadows a built-in symbol"));
            }
            let v = parse_expr(src, &kv, &BTreeMap::new())
                .and_then(|p| p.into_element())
                .map_err(|e| schema(&path, e))?;
            constants.insert(name.clone(), v);
        }
        let (domain, basis) = match &file.domain {
            DomainSpec::Valuation => (Domain::valuation(&kv), Vec::new()),
            DomainSpec::Pvd { subfield, basis } => {
                let sub = subfield.build().map_err(|e| schema("domain.subfield", e))?;
                let d = Domain::pvd(&kv, &sub).map_err(|e| schema("domain.subfield", e))?;
                let mut elems = Vec::with_capacity(basis.len());
                for (i, s) in basis.iter().enumerate() {
                    let path = format!("domain.basis[{i}]");
                    let v = parse_expr(s, &kv, &constants)
                        .and_then(|p| p.into_element())
                        .map_err(|e| schema(&path, e))?;
                    elems.push(v);
                }
                crate::domains::pvd_m_generators(&d, &elems).map_err(|e| schema("domain.basis", e))?;
                (d, elems)
            }
        };
        let canonical = serde_json::to_vec(&file).expect("serializable");
        let digest = hex::encode(Sha256::digest(&canonical));
        Ok(Scene {
            file,
            kv,
            domain,
            basis,
            constants,
            digest,
        })
    }

    /// Loads a scene file by path, or a preset (`a`..`e`) by name. A
    /// missing file whose stem names a preset (`scenes/b.json`) loads that
    /// preset.
    pub fn load(name_or_path: &str) -> Result<Scene> {
        let path = Path::new(name_or_path);
        if path.is_file() {
            let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{name_or_path}: {e}")))?;
            return Scene::from_json_str(&src);
        }
        let stem = match path.extension() {
            Some(ext) if ext == "json" => path.file_stem().and_then(|s| s.to_str()),
            _ => Some(name_or_path),
        };
        match PRESETS.iter().find(|(n, _)| Some(*n) == stem) {
            Some((_, src)) => Scene::from_json_str(src),
            None => Err(Error::Io(format!(
                "{name_or_path}: no such file or preset (presets: a, b, c, d, e)"
            ))),
        }
    }

    pub fn preset(name: &str) -> Result<Scene> {
        match PRESETS.iter().find(|(n, _)| *n == name) {
            Some((_, src)) => Scene::from_json_str(src),
            None => Err(Error::Io(format!("no preset named {name}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn seed(&self) -> u64 {
        self.file.seed
    }

    /// The scene's sample set of the domain.
    pub fn samples<R: Rng>(&self, n: Option<usize>, rng: &mut R) -> Result<SampleSet> {
        sample_domain(&self.domain, n.unwrap_or(self.file.samples.count), rng)
    }

    pub fn scene_ref(&self) -> SceneRef {
        SceneRef {
            name: self.file.name.clone(),
            digest: self.digest.clone(),
        }
    }

    pub fn report(&self, suite: &str, checks: Vec<Check>, seed: u64) -> Report {
        Report {
            suite: suite.to_string(),
            scene: self.scene_ref(),
            checks,
            seed,
            version: crate::VERSION.to_string(),
        }
    }
}
