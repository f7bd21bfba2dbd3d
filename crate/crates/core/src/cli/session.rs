//! TOML session files.
//!
//! ```toml
//! conductor = 3
//! variables = ["x1", "x2"]
//!
//! [map]
//! kind = "endomorphism"
//! images = ["z*x1 + x2", "z*x2"]
//!
//! [options]
//! degree = 9
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::maps::{Map, MapKind};
use crate::polyring::{parse_polynomial, Polynomial};
use crate::scalar::Conductor;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionFile {
    conductor: u32,
    variables: Variables,
    map: Option<MapSpec>,
    other_map: Option<MapSpec>,
    #[serde(default)]
    options: SessionOptions,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Variables {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub kind: MapKind,
    pub images: Vec<String>,
}

/// Everything under `[options]`; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionOptions {
    pub degree: Option<u32>,
    pub slack: Option<u32>,
    pub power: Option<u32>,
    pub power_cap: Option<u32>,
    pub multiplier: Option<u32>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub extra: Vec<String>,
    pub claim: Option<String>,
    #[serde(default)]
    pub lambdas: Vec<String>,
    #[serde(default)]
    pub shift: Vec<String>,
    pub matrix: Option<Vec<Vec<String>>>,
    pub pairs: Option<usize>,
    #[serde(default)]
    pub allow_out_of_hypothesis: bool,
}

/// A parsed session: one ring, one map, maybe a second map to compare with.
#[derive(Debug, Clone)]
pub struct Session {
    pub field: Arc<Conductor>,
    pub nvars: usize,
    pub map: Option<Map>,
    pub map_spec: Option<MapSpec>,
    pub other_map: Option<Map>,
    pub options: SessionOptions,
}

impl Session {
    pub fn load(path: &Path) -> Result<Session> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Session(format!("cannot read {}: {e}", path.display())))?;
        Session::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Session> {
        let file: SessionFile =
            toml::from_str(text).map_err(|e| Error::Session(format!("invalid session file: {e}")))?;
        let nvars = match &file.variables {
            Variables::Count(n) => *n,
            Variables::Names(names) => {
                for (i, name) in names.iter().enumerate() {
                    if *name != format!("x{}", i + 1) {
                        return Err(Error::Session(format!(
                            "variable {} is named `{name}`; names must be x1, x2, … in order",
                            i + 1
                        )));
                    }
                }
                names.len()
            }
        };
        if nvars == 0 {
            return Err(Error::Session("a session needs at least one variable".into()));
        }
        let field = Conductor::new(file.conductor)?;
        let build = |spec: &MapSpec, what: &str| -> Result<Map> {
            if spec.images.len() != nvars {
                return Err(Error::Session(format!(
                    "{what} has {} images for {nvars} variables",
                    spec.images.len()
                )));
            }
            let polys = spec
                .images
                .iter()
                .enumerate()
                .map(|(i, s)| parse_in(s, nvars, &field, &format!("{what} image {}", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            match spec.kind {
                MapKind::Endomorphism => Ok(Map::ederivation(crate::maps::Endomorphism::new(polys)?)),
                MapKind::Derivation => Map::derivation(polys),
            }
        };
        let map = file.map.as_ref().map(|s| build(s, "map")).transpose()?;
        let other_map = file.other_map.as_ref().map(|s| build(s, "other_map")).transpose()?;
        let session = Session {
            field,
            nvars,
            map,
            map_spec: file.map,
            other_map,
            options: file.options,
        };
        // fail early rather than halfway through a command
        session.generators()?;
        session.extra()?;
        Ok(session)
    }

    pub fn require_map(&self) -> Result<&Map> {
        self.map
            .as_ref()
            .ok_or_else(|| Error::Session("session has no [map] table".into()))
    }

    pub fn parse(&self, src: &str, what: &str) -> Result<Polynomial> {
        parse_in(src, self.nvars, &self.field, what)
    }

    pub fn generators(&self) -> Result<Vec<Polynomial>> {
        self.options
            .generators
            .iter()
            .enumerate()
            .map(|(i, s)| self.parse(s, &format!("generator {}", i + 1)))
            .collect()
    }

    pub fn extra(&self) -> Result<Vec<Polynomial>> {
        self.options
            .extra
            .iter()
            .enumerate()
            .map(|(i, s)| self.parse(s, &format!("extra candidate {}", i + 1)))
            .collect()
    }
}

fn parse_in(src: &str, n: usize, field: &Arc<Conductor>, what: &str) -> Result<Polynomial> {
    parse_polynomial(src, n, field).map_err(|e| Error::Session(format!("{what} `{src}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_session() {
        let s = Session::from_toml(
            r#"
            conductor = 3
            variables = ["x1", "x2"]
            [map]
            kind = "endomorphism"
            images = ["z*x1 + x2", "z*x2"]
            [other_map]
            kind = "derivation"
            images = ["x2", "0"]
            [options]
            degree = 9
            generators = ["x2"]
            "#,
        )
        .unwrap();
        assert_eq!(s.nvars, 2);
        assert_eq!(s.options.degree, Some(9));
        assert_eq!(s.require_map().unwrap().kind(), MapKind::Endomorphism);
        assert_eq!(s.other_map.unwrap().kind(), MapKind::Derivation);
    }

    #[test]
    fn rejects_bad_sessions() {
        let bad = [
            "conductor = 3\nvariables = [\"x\", \"y\"]",
            "conductor = 3\nvariables = 2\n[map]\nkind = \"endomorphism\"\nimages = [\"x1\"]",
            "conductor = 3\nvariables = 2\n[map]\nkind = \"endomorphism\"\nimages = [\"x1 +\", \"x2\"]",
            "conductor = 3\nvariables = 2\ncolour = 1",
            "conductor = 0\nvariables = 2",
        ];
        for text in bad {
            assert!(Session::from_toml(text).is_err(), "{text}");
        }
    }
}
