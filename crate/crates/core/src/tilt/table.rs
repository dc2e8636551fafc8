use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TiltError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultEntry {
    pub w: String,
    pub y: String,
    pub value: u64,
}

/// Multiplicities `(T_w : Δ_y)` (or their parabolic versions) indexed by
/// element names. Only nonzero entries are stored, in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultTable {
    pub datum_fingerprint: String,
    pub p: u32,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "K")]
    pub k: Vec<String>,
    pub max_len: usize,
    pub elements: Vec<String>,
    pub entries: Vec<MultEntry>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
    Text,
    Tex,
}

impl FromStr for TableFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(TableFormat::Json),
            "csv" => Ok(TableFormat::Csv),
            "text" => Ok(TableFormat::Text),
            "tex" => Ok(TableFormat::Tex),
            _ => Err(format!("unknown format {s:?} (json, csv, text, tex)")),
        }
    }
}

const CORNER: &str = "w\\y";

impl MultTable {
    pub fn get(&self, w: &str, y: &str) -> u64 {
        self.entries.iter().find(|e| e.w == w && e.y == y).map_or(0, |e| e.value)
    }

    fn grid(&self) -> Vec<Vec<u64>> {
        let idx: BTreeMap<&str, usize> = self.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let n = self.elements.len();
        let mut g = vec![vec![0; n]; n];
        for e in &self.entries {
            g[idx[e.w.as_str()]][idx[e.y.as_str()]] = e.value;
        }
        g
    }

    fn header_pairs(&self) -> Vec<(String, String)> {
        let mut h = vec![
            ("datum_fingerprint".to_string(), self.datum_fingerprint.clone()),
            ("p".to_string(), self.p.to_string()),
            ("L".to_string(), self.l.join(" ")),
            ("K".to_string(), self.k.join(" ")),
            ("max_len".to_string(), self.max_len.to_string()),
        ];
        h.extend(self.metadata.iter().map(|(k, v)| (format!("meta.{k}"), v.clone())));
        h
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            TableFormat::Csv => self.render_csv(),
            TableFormat::Text => self.render_text(),
            TableFormat::Tex => self.render_tex(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header_pairs() {
            writeln!(out, "# {k}={v}").unwrap();
        }
        writeln!(out, "{CORNER},{}", self.elements.join(",")).unwrap();
        for (w, row) in self.elements.iter().zip(self.grid()) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{w},{}", cells.join(",")).unwrap();
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header_pairs() {
            writeln!(out, "{k}: {v}").unwrap();
        }
        let grid = self.grid();
        let first = self.elements.iter().map(|e| e.len()).chain([CORNER.len()]).max().unwrap();
        let widths: Vec<usize> = (0..self.elements.len())
            .map(|j| grid.iter().map(|r| r[j].to_string().len()).chain([self.elements[j].len()]).max().unwrap())
            .collect();
        let mut line = format!("{CORNER:<first$}");
        for (e, w) in self.elements.iter().zip(&widths) {
            write!(line, "  {e:>w$}").unwrap();
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
        for (e, row) in self.elements.iter().zip(&grid) {
            let mut line = format!("{e:<first$}");
            for (v, w) in row.iter().zip(&widths) {
                write!(line, "  {v:>w$}").unwrap();
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        out
    }

    fn render_tex(&self) -> String {
        let tex_name = |e: &str| -> String {
            if e == "e" {
                return "e".into();
            }
            e.split('.').map(|s| s.strip_prefix('s').map_or(s.to_string(), |i| format!("s_{{{i}}}"))).collect()
        };
        let mut out = String::new();
        for (k, v) in self.header_pairs() {
            writeln!(out, "% {k}={v}").unwrap();
        }
        writeln!(out, "\\begin{{tabular}}{{l|{}}}", "r".repeat(self.elements.len())).unwrap();
        let head: Vec<String> = self.elements.iter().map(|e| format!("${}$", tex_name(e))).collect();
        writeln!(out, "$w \\backslash y$ & {} \\\\ \\hline", head.join(" & ")).unwrap();
        for (e, row) in self.elements.iter().zip(self.grid()) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "${}$ & {} \\\\", tex_name(e), cells.join(" & ")).unwrap();
        }
        writeln!(out, "\\end{{tabular}}").unwrap();
        out
    }

    pub fn parse(text: &str, format: TableFormat) -> Result<Self, TiltError> {
        match format {
            TableFormat::Json => serde_json::from_str(text).map_err(|e| TiltError::Parse(e.to_string())),
            TableFormat::Csv => Self::parse_grid(text, |l| l.strip_prefix("# ").and_then(|h| h.split_once('=')), |l| {
                l.split(',').map(str::to_string).collect()
            }),
            TableFormat::Text => Self::parse_grid(text, |l| if l.starts_with(CORNER) { None } else { l.split_once(": ").or(l.strip_suffix(':').map(|k| (k, ""))) }, |l| {
                l.split_whitespace().map(str::to_string).collect()
            }),
            TableFormat::Tex => Err(TiltError::Parse("tex output is write-only".into())),
        }
    }

    fn parse_grid<'a>(
        text: &'a str,
        header: impl Fn(&'a str) -> Option<(&'a str, &'a str)>,
        cells: impl Fn(&str) -> Vec<String>,
    ) -> Result<Self, TiltError> {
        let bad = |m: &str| TiltError::Parse(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();
        let mut head: BTreeMap<String, String> = BTreeMap::new();
        while let Some((k, v)) = lines.peek().and_then(|l| header(l)) {
            head.insert(k.to_string(), v.trim().to_string());
            lines.next();
        }
        let take = |k: &str| head.get(k).cloned().ok_or_else(|| bad(&format!("missing {k}")));
        let names = |s: String| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        let columns = cells(lines.next().ok_or_else(|| bad("missing column header"))?);
        if columns.first().map(String::as_str) != Some(CORNER) {
            return Err(bad("malformed column header"));
        }
        let elements: Vec<String> = columns[1..].to_vec();
        let mut entries = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = cells(line);
            if row.len() != elements.len() + 1 || elements.get(i) != Some(&row[0]) {
                return Err(bad(&format!("malformed row {line:?}")));
            }
            for (y, v) in elements.iter().zip(&row[1..]) {
                let value: u64 = v.parse().map_err(|_| bad(&format!("bad entry {v:?}")))?;
                if value != 0 {
                    entries.push(MultEntry { w: row[0].clone(), y: y.clone(), value });
                }
            }
        }
        let metadata = head.iter().filter_map(|(k, v)| k.strip_prefix("meta.").map(|k| (k.to_string(), v.clone()))).collect();
        Ok(MultTable {
            datum_fingerprint: take("datum_fingerprint")?,
            p: take("p")?.parse().map_err(|_| bad("bad p"))?,
            l: names(take("L")?),
            k: names(take("K")?),
            max_len: take("max_len")?.parse().map_err(|_| bad("bad max_len"))?,
            elements,
            entries,
            metadata,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MultTable {
        let e = |w: &str, y: &str, value| MultEntry { w: w.into(), y: y.into(), value };
        MultTable {
            datum_fingerprint: "abcd".into(),
            p: 2,
            l: vec![],
            k: vec!["s1".into()],
            max_len: 2,
            elements: vec!["e".into(), "s0".into(), "s1.s0".into()],
            entries: vec![e("e", "e", 1), e("s0", "e", 1), e("s0", "s0", 1), e("s1.s0", "e", 12), e("s1.s0", "s1.s0", 1)],
            metadata: [("tool_version".to_string(), "0.1.0".to_string())].into_iter().collect(),
        }
    }

    #[test]
    fn round_trips() {
        let t = sample();
        for f in [TableFormat::Json, TableFormat::Csv, TableFormat::Text] {
            assert_eq!(MultTable::parse(&t.render(f), f).unwrap(), t, "{f:?}");
        }
    }

    #[test]
    fn text_layout() {
        let text = sample().render(TableFormat::Text);
        assert!(text.contains("L: \n"));
        assert!(text.contains("s1.s0  12   0      1\n"), "{text}");
        let tex = sample().render(TableFormat::Tex);
        assert!(tex.contains("$s_{1}s_{0}$ & 12 & 0 & 1 \\\\"));
    }
}
