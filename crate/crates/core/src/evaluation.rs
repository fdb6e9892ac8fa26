//! Per-class precision, recall and F1 with support, weighted averages, and
//! k-fold cross-validation.
//!
//! Precision or recall with a zero denominator is 0, and F1 is 0 whenever
//! precision + recall is 0. The "Average / Total" figures are support-weighted.
//! Cross-validation pools raw counts over all folds before computing the
//! aggregate report, so every development token is scored exactly once.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{fold_ranges, Corpus, TagSet};
use crate::error::{Error, Result};
use crate::pipeline::NercModel;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    /// Gold occurrences of the class.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    classes: Vec<ClassCount>,
}

impl ClassCounts {
    pub fn zeros(n_classes: usize) -> Self {
        ClassCounts {
            classes: vec![ClassCount::default(); n_classes],
        }
    }

    pub fn count(predicted: &[usize], gold: &[usize], n_classes: usize) -> Result<Self> {
        if predicted.len() != gold.len() {
            return Err(Error::InvalidArgument(format!(
                "{} predictions for {} gold labels",
                predicted.len(),
                gold.len()
            )));
        }
        if let Some(&bad) = predicted.iter().chain(gold).find(|&&l| l >= n_classes) {
            return Err(Error::LabelOutOfRange {
                label: bad,
                n_labels: n_classes,
            });
        }
        let mut counts = ClassCounts::zeros(n_classes);
        for (&p, &g) in predicted.iter().zip(gold) {
            counts.classes[g].support += 1;
            if p == g {
                counts.classes[g].true_pos += 1;
            } else {
                counts.classes[p].false_pos += 1;
                counts.classes[g].false_neg += 1;
            }
        }
        Ok(counts)
    }

    pub fn classes(&self) -> &[ClassCount] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Number of gold labels scored.
    pub fn total(&self) -> usize {
        self.classes.iter().map(|c| c.support).sum()
    }

    pub fn correct(&self) -> usize {
        self.classes.iter().map(|c| c.true_pos).sum()
    }

    /// Adds another set of counts over the same classes.
    pub fn merge(&mut self, other: &ClassCounts) {
        assert_eq!(
            self.classes.len(),
            other.classes.len(),
            "class count mismatch"
        );
        for (a, b) in self.classes.iter_mut().zip(&other.classes) {
            a.true_pos += b.true_pos;
            a.false_pos += b.false_pos;
            a.false_neg += b.false_neg;
            a.support += b.support;
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    /// Indexed by class label.
    pub classes: Vec<ClassMetrics>,
    pub weighted: Averages,
    /// Unweighted mean over classes that occur in the gold or predicted labels.
    pub macro_avg: Averages,
    pub accuracy: f64,
    pub total_support: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic_mean(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

impl ClassificationReport {
    pub fn from_counts(counts: &ClassCounts) -> Self {
        let classes: Vec<ClassMetrics> = counts
            .classes
            .iter()
            .map(|c| {
                let precision = ratio(c.true_pos, c.true_pos + c.false_pos);
                let recall = ratio(c.true_pos, c.true_pos + c.false_neg);
                ClassMetrics {
                    precision,
                    recall,
                    f1: harmonic_mean(precision, recall),
                    support: c.support,
                }
            })
            .collect();

        let total = counts.total();
        let weighted = if total == 0 {
            Averages::default()
        } else {
            let w = |m: fn(&ClassMetrics) -> f64| {
                classes.iter().map(|c| c.support as f64 * m(c)).sum::<f64>() / total as f64
            };
            Averages {
                precision: w(|c| c.precision),
                recall: w(|c| c.recall),
                f1: w(|c| c.f1),
            }
        };

        let present: Vec<&ClassMetrics> = classes
            .iter()
            .zip(&counts.classes)
            .filter(|(_, c)| c.support + c.false_pos > 0)
            .map(|(m, _)| m)
            .collect();
        let macro_avg = if present.is_empty() {
            Averages::default()
        } else {
            let n = present.len() as f64;
            Averages {
                precision: present.iter().map(|c| c.precision).sum::<f64>() / n,
                recall: present.iter().map(|c| c.recall).sum::<f64>() / n,
                f1: present.iter().map(|c| c.f1).sum::<f64>() / n,
            }
        };

        ClassificationReport {
            classes,
            weighted,
            macro_avg,
            accuracy: ratio(counts.correct(), total),
            total_support: total,
        }
    }

    pub fn from_labels(predicted: &[usize], gold: &[usize], n_classes: usize) -> Result<Self> {
        Ok(Self::from_counts(&ClassCounts::count(
            predicted, gold, n_classes,
        )?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub fold_index: usize,
    pub counts: ClassCounts,
    pub report: ClassificationReport,
    /// Size of the fold's dev-test partition.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub folds: Vec<FoldResult>,
    pub pooled: ClassCounts,
    pub aggregate: ClassificationReport,
}

/// Trains on k-1 contiguous partitions and scores the held-out one, for
/// every partition. Folds run in parallel; results are ordered by fold.
pub fn cross_validate(
    dev: &Corpus,
    k: usize,
    alpha: f64,
    tagset: &TagSet,
) -> Result<CrossValidation> {
    let ranges = fold_ranges(dev.len(), k)?;
    let tokens = dev.tokens();
    let folds: Vec<FoldResult> = ranges
        .into_par_iter()
        .enumerate()
        .map(|(fold_index, range)| {
            let fold_err = |e| Error::Fold {
                fold: fold_index,
                source: Box::new(e),
            };
            let train: Corpus = tokens[..range.start]
                .iter()
                .chain(&tokens[range.end..])
                .cloned()
                .collect();
            let devtest = Corpus::new(tokens[range.clone()].to_vec());
            let model = NercModel::train(&train, tagset, alpha).map_err(fold_err)?;
            let predicted = model.predict_labels(&devtest.words()).map_err(fold_err)?;
            let counts = ClassCounts::count(&predicted, &devtest.labels(), tagset.len())
                .map_err(fold_err)?;
            Ok(FoldResult {
                fold_index,
                report: ClassificationReport::from_counts(&counts),
                counts,
                support: devtest.len(),
            })
        })
        .collect::<Result<_>>()?;

    let mut pooled = ClassCounts::zeros(tagset.len());
    for fold in &folds {
        pooled.merge(&fold.counts);
    }
    Ok(CrossValidation {
        aggregate: ClassificationReport::from_counts(&pooled),
        pooled,
        folds,
    })
}

pub const AVERAGE_ROW: &str = "Average / Total";

/// Fixed-width per-tag table in tag-set order, closed by the support-weighted
/// "Average / Total" row.
pub fn render_report(report: &ClassificationReport, tagset: &TagSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:<5} {:>9} {:>9} {:>7} {:>10} {:>8}",
        "Named Entity (NE)", "Tag", "Tag label", "Precision", "Recall", "F1 - score", "Support"
    );
    let mut last_category = None;
    for entry in tagset.entries() {
        let category = if last_category == Some(entry.category.as_str()) {
            ""
        } else {
            entry.category.as_str()
        };
        last_category = Some(entry.category.as_str());
        let m = report.classes.get(entry.label).copied().unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<18} {:<5} {:>9} {:>9.2} {:>7.2} {:>10.2} {:>8}",
            category, entry.mnemonic, entry.label, m.precision, m.recall, m.f1, m.support
        );
    }
    let w = report.weighted;
    let _ = writeln!(
        out,
        "{:<18} {:<5} {:>9} {:>9.2} {:>7.2} {:>10.2} {:>8}",
        AVERAGE_ROW, "", "", w.precision, w.recall, w.f1, report.total_support
    );
    out
}

/// Tab-separated report with full-precision values.
pub fn render_report_tsv(report: &ClassificationReport, tagset: &TagSet) -> String {
    let mut out = String::from("tag\tlabel\tprecision\trecall\tf1\tsupport\n");
    for entry in tagset.entries() {
        let m = report.classes.get(entry.label).copied().unwrap_or_default();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            entry.mnemonic, entry.label, m.precision, m.recall, m.f1, m.support
        );
    }
    for (name, a) in [
        ("weighted_avg", report.weighted),
        ("macro_avg", report.macro_avg),
    ] {
        let _ = writeln!(
            out,
            "{name}\t\t{}\t{}\t{}\t{}",
            a.precision, a.recall, a.f1, report.total_support
        );
    }
    let _ = writeln!(
        out,
        "accuracy\t\t\t\t{}\t{}",
        report.accuracy, report.total_support
    );
    out
}

/// One row per fold (weighted P/R/F1 and support) plus the pooled aggregate.
pub fn render_cross_validation(cv: &CrossValidation) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<15} {:>9} {:>7} {:>10} {:>8}",
        "FOLDS", "Precision", "Recall", "F1 - score", "Support"
    );
    for fold in &cv.folds {
        let w = fold.report.weighted;
        let _ = writeln!(
            out,
            "{:<15} {:>9.2} {:>7.2} {:>10.2} {:>8}",
            fold.fold_index + 1,
            w.precision,
            w.recall,
            w.f1,
            fold.support
        );
    }
    let a = cv.aggregate.weighted;
    let _ = writeln!(
        out,
        "{:<15} {:>9.2} {:>7.2} {:>10.2} {:>8}",
        AVERAGE_ROW, a.precision, a.recall, a.f1, cv.aggregate.total_support
    );
    out
}

pub fn render_cross_validation_tsv(cv: &CrossValidation) -> String {
    let mut out = String::from("fold\tprecision\trecall\tf1\taccuracy\tsupport\n");
    let rows = cv
        .folds
        .iter()
        .map(|f| ((f.fold_index + 1).to_string(), &f.report, f.support))
        .chain(std::iter::once((
            "total".to_string(),
            &cv.aggregate,
            cv.aggregate.total_support,
        )));
    for (name, r, support) in rows {
        let w = r.weighted;
        let _ = writeln!(
            out,
            "{name}\t{}\t{}\t{}\t{}\t{support}",
            w.precision, w.recall, w.f1, r.accuracy
        );
    }
    out
}
