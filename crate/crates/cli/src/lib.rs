//! Library side of the `musitopo` command: configuration, the analysis
//! pipeline and the text, JSON and SVG renderers.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod summary;
pub mod svg;

pub use config::{AnalysisConfig, Mode, OutputFormat, Window};
pub use error::{CliError, Result};
pub use pipeline::{run, Analysis};

impl Analysis {
    /// The primary artifact in the requested format.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => summary::render(self),
            OutputFormat::Json => {
                let mut json = self.barcode.to_json();
                json.push('\n');
                json
            }
            OutputFormat::Svg => svg::render(&self.barcode),
        }
    }
}

/// Built-in dataset names and descriptions, one per line.
pub fn list_datasets() -> String {
    let width = musitopo::datasets::list().iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    musitopo::datasets::list()
        .iter()
        .map(|(name, description)| format!("{name:<width$}  {description}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_every_dataset() {
        let listing = list_datasets();
        for name in ["ewe", "cmajor-scale", "circle-of-fifths", "afro-cuban", "clave-son", "square", "equilateral"] {
            assert!(listing.lines().any(|l| l.starts_with(name)), "{name}");
        }
    }
}
