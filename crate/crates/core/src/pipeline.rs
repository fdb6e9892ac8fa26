use crate::classifier::NbModel;
use crate::corpus::{Corpus, TagSet};
use crate::error::{Error, Result};
use crate::vectorizer::FittedVectorizer;

/// A trained tagger: tag set, frozen vectorizer and fitted classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct NercModel {
    tagset: TagSet,
    vectorizer: FittedVectorizer,
    classifier: NbModel,
}

impl NercModel {
    /// Fits the vectorizer on the corpus words, then the classifier on the
    /// resulting tf-idf rows and the corpus labels.
    pub fn train(corpus: &Corpus, tagset: &TagSet, alpha: f64) -> Result<Self> {
        let words = corpus.words();
        let vectorizer = FittedVectorizer::fit(&words)?;
        let x = vectorizer.transform(&words);
        let classifier = NbModel::fit(&x, &corpus.labels(), alpha, tagset.len())?;
        Ok(NercModel {
            tagset: tagset.clone(),
            vectorizer,
            classifier,
        })
    }

    pub fn from_parts(
        tagset: TagSet,
        vectorizer: FittedVectorizer,
        classifier: NbModel,
    ) -> Result<Self> {
        if classifier.n_classes() != tagset.len() {
            return Err(Error::InvalidArgument(format!(
                "classifier has {} classes, tag set has {}",
                classifier.n_classes(),
                tagset.len()
            )));
        }
        if classifier.n_features() != vectorizer.n_features() {
            return Err(Error::DimensionMismatch {
                expected: vectorizer.n_features(),
                found: classifier.n_features(),
            });
        }
        Ok(NercModel {
            tagset,
            vectorizer,
            classifier,
        })
    }

    pub fn tagset(&self) -> &TagSet {
        &self.tagset
    }

    pub fn vectorizer(&self) -> &FittedVectorizer {
        &self.vectorizer
    }

    pub fn classifier(&self) -> &NbModel {
        &self.classifier
    }

    /// Predicted class index for each word, using the frozen vocabulary.
    pub fn predict_labels<S: AsRef<str> + Sync>(&self, words: &[S]) -> Result<Vec<usize>> {
        let x = self.vectorizer.transform(words);
        self.classifier.predict_labels(&x)
    }

    pub fn predict_tags<S: AsRef<str> + Sync>(&self, words: &[S]) -> Result<Vec<&str>> {
        self.predict_labels(words)?
            .into_iter()
            .map(|l| self.tagset.label_to_tag(l))
            .collect()
    }
}
