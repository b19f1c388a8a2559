use std::io::Write;

use super::MetricsTable;

/// Column order of `metrics.csv`; one row per type, sorted by qualified name.
pub const METRICS_COLUMNS: [&str; 15] = [
    "qualified_name",
    "file",
    "line",
    "loc",
    "nof",
    "nopf",
    "nopf_nonconst",
    "nom",
    "nopm",
    "nc",
    "dit",
    "wmc",
    "max_cc",
    "lcom",
    "types_in_file",
];

/// An absent `lcom` is written as an empty cell.
pub fn write_metrics_csv<W: Write>(table: &MetricsTable, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(METRICS_COLUMNS)?;
    for t in table.types.values() {
        writer.write_record([
            t.qualified_name.clone(),
            t.file.to_string_lossy().replace('\\', "/"),
            t.line.to_string(),
            t.loc.to_string(),
            t.nof.to_string(),
            t.nopf.to_string(),
            t.nopf_nonconst.to_string(),
            t.nom.to_string(),
            t.nopm.to_string(),
            t.nc.to_string(),
            t.dit.to_string(),
            t.wmc.to_string(),
            t.max_cc.to_string(),
            t.lcom.map(|v| format!("{v:.4}")).unwrap_or_default(),
            t.types_in_file.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
