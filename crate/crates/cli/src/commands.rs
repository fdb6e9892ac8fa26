use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::ValueEnum;
use nerc_core::{
    cross_validate, parse_tagged_text, render_cross_validation, render_cross_validation_tsv,
    render_report, render_report_tsv, tokenize_lines, ClassificationReport, Corpus,
    CrossValidation, NercModel, TagSet,
};

use crate::model_file;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Tsv,
}

/// Corpus sizes and wall-clock times of the fit and transform phases.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunTiming {
    pub train_tokens: usize,
    pub n_features: usize,
    pub test_tokens: usize,
    pub fit_seconds: Option<f64>,
    pub transform_seconds: Option<f64>,
}

/// Formats an integer with `,` thousands separators.
pub fn group_thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

impl RunTiming {
    /// Key/value lines; the training block is printed when a fit time is
    /// present and the test block when a transform time is present.
    pub fn render(&self, format: ReportFormat) -> String {
        let mut rows: Vec<(&str, &str, String, String)> = Vec::new();
        if let Some(fit) = self.fit_seconds {
            let words = format!("{} words", group_thousands(self.train_tokens));
            rows.push((
                "The training set size for the Model",
                "train_tokens",
                words.clone(),
                self.train_tokens.to_string(),
            ));
            rows.push((
                "Total number of samples treated by the classifier",
                "samples",
                words,
                self.train_tokens.to_string(),
            ));
            rows.push((
                "Total number of features extracted by the classifier",
                "features",
                format!("{} (vocabulary words)", group_thousands(self.n_features)),
                self.n_features.to_string(),
            ));
            rows.push((
                "Feature extraction Time (Training of MNB model)",
                "fit_seconds",
                format!("{fit:.3} sec"),
                fit.to_string(),
            ));
        }
        if let Some(transform) = self.transform_seconds {
            rows.push((
                "The test set size for the Model",
                "test_tokens",
                format!("{} words", group_thousands(self.test_tokens)),
                self.test_tokens.to_string(),
            ));
            rows.push((
                "Feature extraction Time for test data",
                "transform_seconds",
                format!("{transform:.3} sec"),
                transform.to_string(),
            ));
        }
        let mut out = String::new();
        for (label, key, text, raw) in rows {
            match format {
                ReportFormat::Text => out.push_str(&format!("{label:<53}: {text}\n")),
                ReportFormat::Tsv => out.push_str(&format!("{key}\t{raw}\n")),
            }
        }
        out
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_corpus(path: &Path, tagset: &TagSet) -> Result<Corpus> {
    let text = read_text(path)?;
    parse_tagged_text(&text, tagset)
        .with_context(|| format!("{}: corpus parse error", path.display()))
}

/// Fits and saves a model, then prints the training timing.
pub fn cmd_train(
    corpus_path: &Path,
    model_path: &Path,
    alpha: f64,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<RunTiming> {
    let tagset = TagSet::default();
    let corpus = read_corpus(corpus_path, &tagset)?;

    let t0 = Instant::now();
    let model = NercModel::train(&corpus, &tagset, alpha).context("training failed")?;
    let fit_seconds = t0.elapsed().as_secs_f64();

    model_file::save(&model, model_path)?;
    let timing = RunTiming {
        train_tokens: corpus.len(),
        n_features: model.vectorizer().n_features(),
        fit_seconds: Some(fit_seconds),
        ..RunTiming::default()
    };
    out.write_all(timing.render(format).as_bytes())?;
    Ok(timing)
}

/// Tags every whitespace-separated token of untagged text, one output line
/// per input line.
pub fn tag_text(model: &NercModel, text: &str) -> Result<String> {
    let lines = tokenize_lines(text);
    let words: Vec<&str> = lines.iter().flatten().map(String::as_str).collect();
    let tags = model.predict_tags(&words)?;
    let mut tags = tags.into_iter();
    let mut out = String::with_capacity(text.len() * 2);
    for (i, line) in lines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (j, word) in line.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(word);
            out.push('/');
            out.push_str(tags.next().expect("one tag per word"));
        }
    }
    if text.ends_with('\n') && !lines.is_empty() {
        out.push('\n');
    }
    Ok(out)
}

pub fn cmd_tag(
    model_path: &Path,
    input_path: &Path,
    output_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let model = model_file::load(model_path)?;
    let text = read_text(input_path)?;
    let tagged = tag_text(&model, &text)?;
    match output_path {
        Some(path) => {
            fs::write(path, tagged).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => out.write_all(tagged.as_bytes())?,
    }
    Ok(())
}

/// Scores a trained model against gold labels. Returns the report and the
/// time spent transforming and predicting.
pub fn evaluate(model: &NercModel, test: &Corpus) -> Result<(ClassificationReport, f64)> {
    let t0 = Instant::now();
    let predicted = model.predict_labels(&test.words())?;
    let seconds = t0.elapsed().as_secs_f64();
    let report =
        ClassificationReport::from_labels(&predicted, &test.labels(), model.tagset().len())?;
    Ok((report, seconds))
}

pub fn cmd_eval(
    model_path: &Path,
    test_path: &Path,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<ClassificationReport> {
    let model = model_file::load(model_path)?;
    let test = read_corpus(test_path, model.tagset())?;
    let (report, seconds) = evaluate(&model, &test)?;

    let timing = RunTiming {
        train_tokens: model.vectorizer().n_docs(),
        n_features: model.vectorizer().n_features(),
        test_tokens: test.len(),
        transform_seconds: Some(seconds),
        ..RunTiming::default()
    };
    match format {
        ReportFormat::Text => {
            writeln!(out, "{}", render_report(&report, model.tagset()))?;
            writeln!(out, "Accuracy: {:.4}\n", report.accuracy)?;
        }
        ReportFormat::Tsv => writeln!(out, "{}", render_report_tsv(&report, model.tagset()))?,
    }
    out.write_all(timing.render(format).as_bytes())?;
    Ok(report)
}

pub fn cmd_crossval(
    corpus_path: &Path,
    folds: usize,
    alpha: f64,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<CrossValidation> {
    let tagset = TagSet::default();
    let dev = read_corpus(corpus_path, &tagset)?;
    let cv = cross_validate(&dev, folds, alpha, &tagset).context("cross-validation failed")?;
    match format {
        ReportFormat::Text => {
            out.write_all(render_cross_validation(&cv).as_bytes())?;
            writeln!(out, "\nPooled report over all folds:\n")?;
            out.write_all(render_report(&cv.aggregate, &tagset).as_bytes())?;
        }
        ReportFormat::Tsv => out.write_all(render_cross_validation_tsv(&cv).as_bytes())?,
    }
    Ok(cv)
}
