use std::path::Path;

use csv::{Terminator, WriterBuilder};

use digestlab_core::analysis::AnalysisReport;

pub const HEADER: [&str; 5] = ["algorithm", "input", "digest", "metric", "value"];

/// `algorithm,input,digest,metric,value`, LF line endings, values to four
/// decimal places.
pub fn write_report(report: &AnalysisReport, path: &Path) -> csv::Result<()> {
    let mut writer = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_path(path)?;
    writer.write_record(HEADER)?;
    for row in report.rows() {
        let value = format!("{:.4}", row.value);
        writer.write_record([
            row.algorithm.as_str(),
            row.input.as_str(),
            row.digest.as_str(),
            row.metric.as_str(),
            value.as_str(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
