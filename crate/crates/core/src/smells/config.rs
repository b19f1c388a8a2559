//! Rule thresholds and the key=value config file.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! ignored. Unknown and repeated keys are errors. Absent keys keep their
//! defaults. The insufficient-modularization clauses accept `off`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
        reason: &'static str,
    },
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleConfig {
    pub im_loc: Option<usize>,
    pub im_nom: Option<usize>,
    pub im_wmc: Option<u32>,
    pub im_max_cc: Option<u32>,
    pub im_types_in_file: Option<usize>,
    pub de_min_public_fields: usize,
    pub una_min_fields: usize,
    pub wh_min_children: usize,
    pub ia_max_fields: usize,
    pub ma_min_lcom: f64,
    pub ma_min_methods: usize,
    pub ma_min_fields: usize,
    pub mh_min_branches: usize,
    /// Case-insensitive substrings marking a switch selector as a type tag.
    pub mh_tag_patterns: Vec<String>,
    /// `false` emits one finding per cycle instead of one per member.
    pub cdm_report_each_member: bool,
    pub entry_point_allowlist: BTreeSet<String>,
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            im_loc: Some(1000),
            im_nom: Some(30),
            im_wmc: Some(100),
            im_max_cc: Some(20),
            im_types_in_file: Some(2),
            de_min_public_fields: 1,
            una_min_fields: 1,
            wh_min_children: 10,
            ia_max_fields: 2,
            ma_min_lcom: 0.8,
            ma_min_methods: 10,
            ma_min_fields: 5,
            mh_min_branches: 3,
            mh_tag_patterns: vec!["type".into(), "kind".into()],
            cdm_report_each_member: true,
            entry_point_allowlist: BTreeSet::new(),
        }
    }
}

pub const CONFIG_KEYS: [&str; 16] = [
    "insufficient_modularization.loc",
    "insufficient_modularization.nom",
    "insufficient_modularization.wmc",
    "insufficient_modularization.max_cc",
    "insufficient_modularization.types_in_file",
    "deficient_encapsulation.public_fields",
    "unnecessary_abstraction.fields",
    "wide_hierarchy.children",
    "imperative_abstraction.max_fields",
    "multifaceted_abstraction.lcom",
    "multifaceted_abstraction.methods",
    "multifaceted_abstraction.fields",
    "missing_hierarchy.branches",
    "missing_hierarchy.tag_patterns",
    "cyclic.report_each_member",
    "unutilized_abstraction.entry_points",
];

impl RuleConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or(ConfigError::Malformed { line })?;
            let (key, value) = (key.trim(), value.trim());
            if !CONFIG_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            config.set(line, key, value)?;
        }
        Ok(config)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let invalid = |reason| ConfigError::InvalidValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
            reason,
        };
        let count = || -> Result<usize, ConfigError> {
            match value.parse::<usize>() {
                Ok(0) => Err(invalid("must be strictly positive")),
                Ok(n) => Ok(n),
                Err(_) => Err(invalid("expected a positive integer")),
            }
        };
        let optional = || -> Result<Option<usize>, ConfigError> {
            if value.eq_ignore_ascii_case("off") {
                Ok(None)
            } else {
                count().map(Some)
            }
        };
        let list = || -> Vec<String> {
            value
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        };
        match key {
            "insufficient_modularization.loc" => self.im_loc = optional()?,
            "insufficient_modularization.nom" => self.im_nom = optional()?,
            "insufficient_modularization.wmc" => {
                self.im_wmc = optional()?.map(|n| u32::try_from(n).unwrap_or(u32::MAX))
            }
            "insufficient_modularization.max_cc" => {
                self.im_max_cc = optional()?.map(|n| u32::try_from(n).unwrap_or(u32::MAX))
            }
            "insufficient_modularization.types_in_file" => self.im_types_in_file = optional()?,
            "deficient_encapsulation.public_fields" => self.de_min_public_fields = count()?,
            "unnecessary_abstraction.fields" => self.una_min_fields = count()?,
            "wide_hierarchy.children" => self.wh_min_children = count()?,
            "imperative_abstraction.max_fields" => self.ia_max_fields = count()?,
            "multifaceted_abstraction.lcom" => {
                let v: f64 = value.parse().map_err(|_| invalid("expected a number"))?;
                if !(v > 0.0 && v <= 1.0) {
                    return Err(invalid("ratio must lie in (0, 1]"));
                }
                self.ma_min_lcom = v;
            }
            "multifaceted_abstraction.methods" => self.ma_min_methods = count()?,
            "multifaceted_abstraction.fields" => self.ma_min_fields = count()?,
            "missing_hierarchy.branches" => self.mh_min_branches = count()?,
            "missing_hierarchy.tag_patterns" => {
                let patterns = list();
                if patterns.is_empty() {
                    return Err(invalid("expected at least one pattern"));
                }
                self.mh_tag_patterns = patterns;
            }
            "cyclic.report_each_member" => {
                self.cdm_report_each_member = value
                    .parse()
                    .map_err(|_| invalid("expected true or false"))?
            }
            "unutilized_abstraction.entry_points" => {
                self.entry_point_allowlist = list().into_iter().collect()
            }
            _ => unreachable!("key checked against CONFIG_KEYS"),
        }
        Ok(())
    }

    /// Every effective setting, in [`CONFIG_KEYS`] order.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<usize>| v.map_or_else(|| "off".to_string(), |n| n.to_string());
        vec![
            (CONFIG_KEYS[0], opt(self.im_loc)),
            (CONFIG_KEYS[1], opt(self.im_nom)),
            (CONFIG_KEYS[2], opt(self.im_wmc.map(|n| n as usize))),
            (CONFIG_KEYS[3], opt(self.im_max_cc.map(|n| n as usize))),
            (CONFIG_KEYS[4], opt(self.im_types_in_file)),
            (CONFIG_KEYS[5], self.de_min_public_fields.to_string()),
            (CONFIG_KEYS[6], self.una_min_fields.to_string()),
            (CONFIG_KEYS[7], self.wh_min_children.to_string()),
            (CONFIG_KEYS[8], self.ia_max_fields.to_string()),
            (CONFIG_KEYS[9], self.ma_min_lcom.to_string()),
            (CONFIG_KEYS[10], self.ma_min_methods.to_string()),
            (CONFIG_KEYS[11], self.ma_min_fields.to_string()),
            (CONFIG_KEYS[12], self.mh_min_branches.to_string()),
            (CONFIG_KEYS[13], self.mh_tag_patterns.join(",")),
            (CONFIG_KEYS[14], self.cdm_report_each_member.to_string()),
            (
                CONFIG_KEYS[15],
                self.entry_point_allowlist
                    .iter()
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ]
    }

    /// The echo rendered as a config file; parsing it yields `self`.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.echo() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Hex SHA-256 of [`Self::to_config_text`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_config_text().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_text() {
        let config = RuleConfig::default();
        assert_eq!(RuleConfig::parse(&config.to_config_text()), Ok(config));
    }

    #[test]
    fn overrides_and_comments() {
        let text = "# thresholds\nwide_hierarchy.children = 4\n\ninsufficient_modularization.loc=off\nunutilized_abstraction.entry_points = a.Main, b.Boot\n";
        let c = RuleConfig::parse(text).unwrap();
        assert_eq!(c.wh_min_children, 4);
        assert_eq!(c.im_loc, None);
        assert_eq!(c.entry_point_allowlist.len(), 2);
        assert_eq!(c.im_nom, Some(30));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            RuleConfig::parse("\nbogus=1"),
            Err(ConfigError::UnknownKey {
                line: 2,
                key: "bogus".into()
            })
        );
        assert!(matches!(
            RuleConfig::parse("wide_hierarchy.children=0"),
            Err(ConfigError::InvalidValue { line: 1, .. })
        ));
        assert!(matches!(
            RuleConfig::parse("multifaceted_abstraction.lcom=1.5"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            RuleConfig::parse("wide_hierarchy.children=3\nwide_hierarchy.children=4"),
            Err(ConfigError::DuplicateKey { line: 2, .. })
        ));
        assert_eq!(
            RuleConfig::parse("novalue"),
            Err(ConfigError::Malformed { line: 1 })
        );
    }

    #[test]
    fn hash_changes_with_settings() {
        let a = RuleConfig::default();
        let b = RuleConfig {
            wh_min_children: 11,
            ..RuleConfig::default()
        };
        assert_eq!(a.hash().len(), 64);
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), RuleConfig::default().hash());
    }
}
