//! Versioned JSON model files.
//!
//! Every real number is stored as a string in `{:.16e}` form (17 significant
//! digits), which round-trips `f64` exactly and also covers the `-inf` log
//! prior of classes that had no training tokens. Per-class log likelihoods
//! are stored sparsely: a floor value for features the class never saw, plus
//! explicit `[column, value]` pairs for the rest.

use std::fmt;
use std::fs;
use std::path::Path;

use nerc_core::{FittedVectorizer, NbModel, NercModel, TagEntry, TagSet, Vocabulary};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed model file: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: model format version {found} is not supported (expected {expected})")]
    Version {
        path: String,
        found: u32,
        expected: u32,
    },
    #[error("{path}: inconsistent model: {source}")]
    Invalid {
        path: String,
        #[source]
        source: nerc_core::Error,
    },
}

/// `f64` serialized as a 17-significant-digit decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:.16e}", self.0))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RealVisitor;
        impl Visitor<'_> for RealVisitor {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string or number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                v.parse()
                    .map(Real)
                    .map_err(|_| E::custom(format!("bad number {v:?}")))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
        }
        d.deserialize_any(RealVisitor)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ClassLikelihood {
    floor: Real,
    entries: Vec<(usize, Real)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    format_version: u32,
    alpha: Real,
    n_docs: usize,
    tagset: Vec<TagEntry>,
    vocabulary: Vec<String>,
    idf: Vec<Real>,
    /// Indexed by class label.
    log_prior: Vec<Real>,
    log_likelihood: Vec<ClassLikelihood>,
}

#[derive(Deserialize)]
struct Header {
    format_version: u32,
}

impl ModelFile {
    pub fn from_model(model: &NercModel) -> Self {
        let nb = model.classifier();
        let vec = model.vectorizer();
        let log_likelihood = (0..nb.n_classes())
            .map(|j| {
                let floor = nb.log_floor(j);
                let entries = nb
                    .class_log_likelihood(j)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.to_bits() != floor.to_bits())
                    .map(|(i, &v)| (i, Real(v)))
                    .collect();
                ClassLikelihood {
                    floor: Real(floor),
                    entries,
                }
            })
            .collect();
        ModelFile {
            format_version: FORMAT_VERSION,
            alpha: Real(nb.alpha()),
            n_docs: vec.n_docs(),
            tagset: model.tagset().entries().to_vec(),
            vocabulary: vec.vocab().terms().to_vec(),
            idf: vec.idf().iter().copied().map(Real).collect(),
            log_prior: nb.log_prior().iter().copied().map(Real).collect(),
            log_likelihood,
        }
    }

    pub fn into_model(self) -> nerc_core::Result<NercModel> {
        let tagset = TagSet::new(self.tagset)?;
        let n_features = self.vocabulary.len();
        let vocab = Vocabulary::from_sorted(self.vocabulary)?;
        let vectorizer = FittedVectorizer::from_parts(
            vocab,
            self.idf.into_iter().map(|r| r.0).collect(),
            self.n_docs,
        )?;

        let mut dense = Vec::with_capacity(self.log_likelihood.len() * n_features);
        let mut floors = Vec::with_capacity(self.log_likelihood.len());
        for class in self.log_likelihood {
            let start = dense.len();
            dense.resize(start + n_features, class.floor.0);
            floors.push(class.floor.0);
            for (col, value) in class.entries {
                if col >= n_features {
                    return Err(nerc_core::Error::InvalidArgument(format!(
                        "likelihood column {col} outside vocabulary of {n_features}"
                    )));
                }
                dense[start + col] = value.0;
            }
        }
        let classifier = NbModel::from_parts(
            self.alpha.0,
            self.log_prior.into_iter().map(|r| r.0).collect(),
            dense,
            floors,
            n_features,
        )?;
        NercModel::from_parts(tagset, vectorizer, classifier)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model file serializes")
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self, ModelFileError> {
        let json_err = |source| ModelFileError::Json {
            path: path.to_string(),
            source,
        };
        let header: Header = serde_json::from_str(text).map_err(json_err)?;
        if header.format_version != FORMAT_VERSION {
            return Err(ModelFileError::Version {
                path: path.to_string(),
                found: header.format_version,
                expected: FORMAT_VERSION,
            });
        }
        serde_json::from_str(text).map_err(json_err)
    }
}

pub fn save(model: &NercModel, path: &Path) -> Result<(), ModelFileError> {
    fs::write(path, ModelFile::from_model(model).to_json()).map_err(|source| ModelFileError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(path: &Path) -> Result<NercModel, ModelFileError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| ModelFileError::Io {
        path: shown.clone(),
        source,
    })?;
    ModelFile::from_json(&text, &shown)?
        .into_model()
        .map_err(|source| ModelFileError::Invalid {
            path: shown,
            source,
        })
}
