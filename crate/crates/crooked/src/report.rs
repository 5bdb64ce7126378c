//! Structured text reports: `[section]` headers followed by `key = value`
//! lines, sections separated by a blank line.

use std::fmt;

use crooked_core::lattice::PointSet;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    /// A report opening with the `[run]` section.
    pub fn new(command: &str, seed: u64, cap: usize) -> Self {
        let mut r = Report::default();
        r.section("run");
        r.kv("tool", TOOL);
        r.kv("version", VERSION);
        r.kv("command", command);
        r.kv("seed", seed);
        r.kv("cap", cap);
        r
    }

    /// Starts a new section; later `kv` calls append to it.
    pub fn section(&mut self, name: &str) {
        self.sections.push((name.to_string(), Vec::new()));
    }

    pub fn kv(&mut self, key: &str, value: impl fmt::Display) {
        if self.sections.is_empty() {
            self.section("report");
        }
        let last = self.sections.last_mut().expect("a section exists");
        last.1.push((key.to_string(), value.to_string()));
    }

    /// The value of `key` in the first section named `section`.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .find(|(s, _)| s == section)
            .and_then(|(_, kvs)| kvs.iter().find(|(k, _)| k == key))
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, kvs)) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{name}]")?;
            for (k, v) in kvs {
                writeln!(f, "{k} = {v}")?;
            }
        }
        Ok(())
    }
}

/// Parses report text back into `(section, key, value)` triples.
pub fn parse(text: &str) -> Vec<(String, String, String)> {
    let mut section = String::new();
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.to_string();
        } else if let Some((k, v)) = line.split_once(" = ") {
            out.push((section.clone(), k.to_string(), v.to_string()));
        }
    }
    out
}

/// `{0,2,5}`.
pub fn point_set(s: &PointSet) -> String {
    let inner: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", inner.join(","))
}
