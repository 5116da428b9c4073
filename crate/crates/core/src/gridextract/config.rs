use std::fmt;

use crate::error::{Error, Result};

/// Size multipliers and search budgets for the extraction pipeline.
///
/// Each multiplier is applied to the requested grid size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub circuits_required: usize,
    pub paths_required: usize,
    pub cut_order: usize,
    pub circuit_count: usize,
    pub edge_excess: usize,
    pub acyclic_budget: u64,
    pub assembly_budget: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            circuits_required: 120,
            paths_required: 240,
            cut_order: 7,
            circuit_count: 13,
            edge_excess: 83,
            acyclic_budget: 1 << 22,
            assembly_budget: 1 << 22,
        }
    }
}

const KEYS: [&str; 7] = [
    "circuits_required",
    "paths_required",
    "cut_order",
    "circuit_count",
    "edge_excess",
    "acyclic_budget",
    "assembly_budget",
];

impl PipelineConfig {
    fn budget(&mut self, key: &str) -> Option<&mut u64> {
        match key {
            "acyclic_budget" => Some(&mut self.acyclic_budget),
            "assembly_budget" => Some(&mut self.assembly_budget),
            _ => None,
        }
    }

    fn multiplier(&mut self, key: &str) -> Option<&mut usize> {
        match key {
            "circuits_required" => Some(&mut self.circuits_required),
            "paths_required" => Some(&mut self.paths_required),
            "cut_order" => Some(&mut self.cut_order),
            "circuit_count" => Some(&mut self.circuit_count),
            "edge_excess" => Some(&mut self.edge_excess),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            self.circuits_required as u64,
            self.paths_required as u64,
            self.cut_order as u64,
            self.circuit_count as u64,
            self.edge_excess as u64,
            self.acyclic_budget,
            self.assembly_budget,
        ];
        match KEYS.iter().zip(values).find(|(_, v)| *v == 0) {
            Some((k, _)) => Err(Error::InvalidArgument(format!("{k} must be positive"))),
            None => Ok(()),
        }
    }

    /// Reads `key = value` lines over the defaults. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |column: usize, message: String| Error::Parse {
                line: ln + 1,
                column,
                message,
            };
            let col = raw.len() - raw.trim_start().len() + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(col, "expected key = value".into()));
            };
            let (key, value) = (key.trim(), value.trim());
            let eq = raw.find('=').unwrap();
            let after = &raw[eq + 1..];
            let vcol = eq + 2 + after.len() - after.trim_start().len();
            let parsed: u64 = value
                .parse()
                .map_err(|_| err(vcol, format!("`{value}` is not a non-negative integer")))?;
            if let Some(slot) = cfg.multiplier(key) {
                *slot = usize::try_from(parsed).map_err(|_| err(vcol, "value too large".into()))?;
            } else if let Some(slot) = cfg.budget(key) {
                *slot = parsed;
            } else {
                return Err(err(col, format!("unknown key `{key}`")));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuits_required = {}", self.circuits_required)?;
        writeln!(f, "paths_required = {}", self.paths_required)?;
        writeln!(f, "cut_order = {}", self.cut_order)?;
        writeln!(f, "circuit_count = {}", self.circuit_count)?;
        writeln!(f, "edge_excess = {}", self.edge_excess)?;
        writeln!(f, "acyclic_budget = {}", self.acyclic_budget)?;
        writeln!(f, "assembly_budget = {}", self.assembly_budget)
    }
}
