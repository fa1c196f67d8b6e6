//! Result tables and their CSV / JSON forms.

use std::io::{self, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One table cell. Floats carry their printing precision so CSV output is
/// fixed-width and byte-stable.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64, usize),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn float(value: f64) -> Self {
        Cell::Float(value, 6)
    }

    pub fn text(value: impl Into<String>) -> Self {
        Cell::Text(value.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Float(x, _) => Some(x),
            _ => None,
        }
    }

    fn write_csv(&self, out: &mut String) {
        match self {
            Cell::Int(i) => out.push_str(&i.to_string()),
            Cell::Float(x, _) if x.is_nan() => out.push_str("nan"),
            Cell::Float(x, digits) => out.push_str(&format!("{x:.digits$}")),
            Cell::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Cell::Empty => {}
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    out.push('"');
                    out.push_str(&s.replace('"', "\"\""));
                    out.push('"');
                } else {
                    out.push_str(s);
                }
            }
        }
    }
}

macro_rules! cell_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i64)
            }
        }
    )*};
}
cell_from_int!(u32, u64, usize, i64);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::text(v)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Float(x, _) if x.is_finite() => s.serialize_f64(*x),
            Cell::Float(..) | Cell::Empty => s.serialize_none(),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Bool(bool),
            Text(String),
            Null(()),
        }
        Ok(match Option::<Raw>::deserialize(d)? {
            Some(Raw::Int(i)) => Cell::Int(i),
            Some(Raw::Float(x)) => Cell::float(x),
            Some(Raw::Bool(b)) => Cell::Bool(b),
            Some(Raw::Text(t)) => Cell::Text(t),
            Some(Raw::Null(())) | None => Cell::Empty,
        })
    }
}

/// A result table with its provenance line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub kind: String,
    pub config_hash: String,
    /// Master seed; absent for deterministic computations.
    pub seed: Option<u64>,
    /// Extra `key=value` metadata appended to the comment line.
    #[serde(default)]
    pub notes: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(kind: &str, config_hash: String, seed: Option<u64>, columns: &[&str]) -> Self {
        Table {
            kind: kind.to_string(),
            config_hash,
            seed,
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// `# config-hash=... seed=... kind=...` (seed omitted when absent), the
    /// header row, then one
    /// line per row.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# config-hash={}", self.config_hash);
        if let Some(seed) = self.seed {
            out.push_str(&format!(" seed={seed}"));
        }
        out.push_str(&format!(" kind={}", self.kind));
        for (k, v) in &self.notes {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.write_csv(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", "abc".into(), Some(3), &["a", "b", "c", "d"]);
        t.notes.push(("resample".into(), "all".into()));
        t.push(vec![1u32.into(), 0.5.into(), "x,y".into(), Cell::Empty]);
        t.push(vec![2u32.into(), Cell::Float(f64::NAN, 6), true.into(), Cell::Float(0.25, 2)]);
        assert_eq!(
            t.to_csv(),
            "# config-hash=abc seed=3 kind=demo resample=all\na,b,c,d\n1,0.500000,\"x,y\",\n2,nan,true,0.25\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let mut t = Table::new("demo", "abc".into(), Some(3), &["i", "x", "s", "b", "e"]);
        t.push(vec![Cell::Int(4), Cell::float(0.5), Cell::text("ldgm"), Cell::Bool(false), Cell::Empty]);
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("[4,0.5,\"ldgm\",false,null]"), "{json}");
        let back: Table = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}
