use std::io::Write;

use crate::dynamics::DiagnosticsRow;
use crate::error::Result;

pub fn csv_header(phases: usize) -> String {
    let mut cols = vec!["t".to_string(), "H".to_string()];
    cols.extend((1..=phases).map(|i| format!("mass_{i}")));
    cols.push("constraint_inf".into());
    cols.push("div_l2".into());
    cols.extend((1..=phases).map(|i| format!("kelvin_{i}")));
    cols.extend((1..=phases).map(|i| format!("enstrophy_{i}")));
    cols.join(",")
}

/// One CSV line with every value at 17 significant digits.
pub fn csv_row(row: &DiagnosticsRow) -> String {
    [row.t, row.energy]
        .iter()
        .chain(&row.masses)
        .chain(&[row.constraint_inf, row.divergence_l2])
        .chain(&row.kelvin)
        .chain(&row.enstrophy)
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Streams diagnostics rows to a CSV sink.
pub struct DiagnosticsWriter<W: Write> {
    sink: W,
}

impl<W: Write> DiagnosticsWriter<W> {
    pub fn new(mut sink: W, phases: usize) -> Result<Self> {
        writeln!(sink, "{}", csv_header(phases))?;
        Ok(Self { sink })
    }

    pub fn write(&mut self, row: &DiagnosticsRow) -> Result<()> {
        writeln!(self.sink, "{}", csv_row(row))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.sink.flush()?;
        Ok(self.sink)
    }
}
