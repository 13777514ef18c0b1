//! Line-oriented output records and the ordered writer.

use std::fmt;
use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Computed,
    Cached,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::Cached => "cached",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "computed" => Some(Provenance::Computed),
            "cached" => Some(Provenance::Cached),
            _ => None,
        }
    }
}

/// One output line: `kind`, `key`, `value`, `provenance`, tab-separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub key: String,
    pub value: String,
    pub provenance: Provenance,
}

impl Record {
    pub fn new(kind: impl Into<String>, key: impl Into<String>, value: impl Into<String>) -> Self {
        Record { kind: kind.into(), key: key.into(), value: value.into(), provenance: Provenance::Computed }
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    /// Splits a tab-separated line; fields may not contain tabs.
    pub fn parse_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(format!("expected 4 tab-separated fields, found {}", fields.len()));
        }
        let provenance =
            Provenance::parse(fields[3]).ok_or_else(|| format!("unknown provenance {:?}", fields[3]))?;
        if fields[..3].iter().any(|f| f.is_empty()) {
            return Err("empty field".into());
        }
        Ok(Record {
            kind: fields[0].to_string(),
            key: fields[1].to_string(),
            value: fields[2].to_string(),
            provenance,
        })
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.kind, self.key, self.value, self.provenance.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    #[default]
    Lines,
}

/// Collects records from every worker and writes them in submission order.
/// `lines` streams immediately; `table` aligns columns at the end.
pub struct Writer<W: Write> {
    out: W,
    format: Format,
    pending: Vec<Record>,
}

impl<W: Write> Writer<W> {
    pub fn new(out: W, format: Format) -> Self {
        Writer { out, format, pending: Vec::new() }
    }

    pub fn comment(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.out, "# {text}")
    }

    pub fn emit(&mut self, record: Record) -> io::Result<()> {
        match self.format {
            Format::Lines => writeln!(self.out, "{record}"),
            Format::Table => {
                self.pending.push(record);
                Ok(())
            }
        }
    }

    pub fn emit_all(&mut self, records: impl IntoIterator<Item = Record>) -> io::Result<()> {
        for r in records {
            self.emit(r)?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<W> {
        if self.format == Format::Table && !self.pending.is_empty() {
            let head = ["KIND", "KEY", "VALUE", "PROVENANCE"];
            let mut width = head.map(str::len);
            for r in &self.pending {
                for (w, f) in width.iter_mut().zip([&r.kind, &r.key, &r.value]) {
                    *w = (*w).max(f.chars().count());
                }
            }
            let row = |out: &mut W, f: [&str; 4]| {
                writeln!(out, "{:<w0$}  {:<w1$}  {:<w2$}  {}", f[0], f[1], f[2], f[3], w0 = width[0], w1 = width[1], w2 = width[2])
            };
            row(&mut self.out, head)?;
            for r in std::mem::take(&mut self.pending) {
                row(&mut self.out, [&r.kind, &r.key, &r.value, r.provenance.as_str()])?;
            }
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let r = Record::new("psi", "g=1;k=1", "1/24").with_provenance(Provenance::Cached);
        assert_eq!(Record::parse_line(&r.to_string()).unwrap(), r);
        assert!(Record::parse_line("psi\tg=1;k=1\t1/24").is_err());
        assert!(Record::parse_line("psi\tg=1;k=1\t1/24\tguessed").is_err());
    }

    #[test]
    fn table_is_aligned() {
        let mut w = Writer::new(Vec::new(), Format::Table);
        w.emit(Record::new("psi", "g=2;k=4", "1/1152")).unwrap();
        w.emit(Record::new("check", "dvv:one-point:g=3", "pass")).unwrap();
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        let cols: Vec<usize> = text.lines().map(|l| l.find("computed").or_else(|| l.find("PROVENANCE")).unwrap()).collect();
        assert!(cols.windows(2).all(|w| w[0] == w[1]), "{text}");
    }
}
