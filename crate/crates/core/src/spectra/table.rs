use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Per-frequency scalar columns on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub omega: Vec<f64>,
    pub columns: Vec<Column>,
}

impl SpectrumTable {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        validate_grid(&omega)?;
        Ok(Self {
            omega,
            columns: Vec::new(),
        })
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.omega.len() {
            return Err(Error::Dimension(format!(
                "column {name} has {} values for {} frequencies",
                values.len(),
                self.omega.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Degenerate(format!(
                "column {name} is not finite at ω = {}",
                self.omega[i]
            )));
        }
        self.columns.push(Column { name, values });
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Appends the columns of `other` (same grid) with a name suffix.
    pub fn merge_suffixed(&mut self, other: SpectrumTable, suffix: &str) -> Result<()> {
        if other.omega != self.omega {
            return Err(Error::Dimension("cannot merge tables on different grids".into()));
        }
        for c in other.columns {
            self.push(format!("{}{}", c.name, suffix), c.values)?;
        }
        Ok(())
    }

    /// Comma-separated rows with `omega` first. `header` lines are written
    /// verbatim after a `# ` prefix.
    pub fn write_csv<W: Write>(&self, mut w: W, header: &[String]) -> io::Result<()> {
        for h in header {
            writeln!(w, "# {h}")?;
        }
        write!(w, "omega")?;
        for c in &self.columns {
            write!(w, ",{}", c.name)?;
        }
        writeln!(w)?;
        for (i, om) in self.omega.iter().enumerate() {
            write!(w, "{om:.12e}")?;
            for c in &self.columns {
                write!(w, ",{:.12e}", c.values[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub(crate) fn validate_grid(omega: &[f64]) -> Result<()> {
    if omega.is_empty() {
        return Err(Error::InvalidParameter("frequency grid is empty".into()));
    }
    if omega.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter("frequency grid is not finite".into()));
    }
    if omega.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("frequency grid must be strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_grid() {
        assert!(SpectrumTable::new(vec![0.0, 0.0]).is_err());
        assert!(SpectrumTable::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut t = SpectrumTable::new(vec![0.0, 1.0]).unwrap();
        t.push("x", vec![1.0, 2.0]).unwrap();
        let mut out = Vec::new();
        t.write_csv(&mut out, &["meta".into()]).unwrap();
        let s = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# meta");
        assert_eq!(lines[1], "omega,x");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn rejects_non_finite_column() {
        let mut t = SpectrumTable::new(vec![0.0]).unwrap();
        assert!(t.push("x", vec![f64::NAN]).is_err());
    }
}
