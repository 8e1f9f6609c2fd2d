//! Deterministic CSV emission: a commented config header block, one header
//! row, data rows with 12-significant-digit scientific notation, and an
//! optional commented footer.

use std::io::Write;

/// One CSV value; numbers render in scientific notation with >= 12
/// significant digits so reruns are byte-comparable.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:.12e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CsvDoc {
    /// Rendered as `# config: <line>`.
    pub config_lines: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Rendered as `# <line>` after the data.
    pub footer: Vec<String>,
}

impl CsvDoc {
    pub fn new(config_lines: Vec<String>, header: &[&str]) -> Self {
        CsvDoc {
            config_lines,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        for line in &self.config_lines {
            writeln!(w, "# config: {line}")?;
        }
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        for line in &self.footer {
            writeln!(w, "# {line}")?;
        }
        Ok(())
    }

}

impl std::fmt::Display for CsvDoc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut buf = Vec::new();
        self.write_to(&mut buf).map_err(|_| std::fmt::Error)?;
        f.write_str(&String::from_utf8(buf).map_err(|_| std::fmt::Error)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_deterministically() {
        let mut doc = CsvDoc::new(vec!["a = 1".into()], &["x", "y"]);
        doc.push_row(vec![Cell::Int(3), Cell::Num(1.0 / 3.0)]);
        doc.footer.push("note".into());
        let text = doc.to_string();
        assert_eq!(
            text,
            "# config: a = 1\nx,y\n3,3.333333333333e-1\n# note\n"
        );
    }
}
