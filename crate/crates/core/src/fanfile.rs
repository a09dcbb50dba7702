//! JSON fan files.
//!
//! ```json
//! { "dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[0,2]], "name": "P2" }
//! ```
//!
//! `cones` lists maximal cones as indices into `rays`. `name` and `labels`
//! (one string per ray) are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::primitive_i64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FanFile {
    pub fn from_json(text: &str) -> Result<FanFile> {
        let file: FanFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        file.check()?;
        Ok(file)
    }

    fn check(&self) -> Result<()> {
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.dim {
                return Err(Error::Parse(format!(
                    "rays[{i}]: length {} but dim is {}",
                    r.len(),
                    self.dim
                )));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::Parse(format!("rays[{i}]: zero vector")));
            }
        }
        let primitive: Vec<Vec<i64>> = self.rays.iter().map(|r| primitive_i64(r)).collect();
        for (j, r) in primitive.iter().enumerate() {
            if let Some(i) = primitive[..j].iter().position(|s| s == r) {
                return Err(Error::Parse(format!("rays[{j}]: same ray as rays[{i}]")));
            }
        }
        for (k, c) in self.cones.iter().enumerate() {
            if let Some(&bad) = c.iter().find(|&&i| i >= self.rays.len()) {
                return Err(Error::Parse(format!(
                    "cones[{k}]: ray index {bad} out of range ({} rays)",
                    self.rays.len()
                )));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.rays.len() {
                return Err(Error::Parse(format!(
                    "labels: {} entries for {} rays",
                    labels.len(),
                    self.rays.len()
                )));
            }
        }
        Ok(())
    }

    pub fn to_fan(&self) -> Result<Fan> {
        self.check()?;
        Fan::from_maximal(self.dim, &self.rays, &self.cones)
    }

    /// The maximal cones of `fan`, with rays in the fan's order.
    pub fn from_fan(fan: &Fan, name: Option<String>) -> FanFile {
        FanFile {
            dim: fan.ambient_rank(),
            rays: fan.rays().to_vec(),
            cones: fan.maximal().iter().map(|&m| fan.ray_ids(m).to_vec()).collect(),
            name,
            labels: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fan files always serialize");
        s.push('\n');
        s
    }
}

pub fn parse_fan_str(text: &str) -> Result<Fan> {
    FanFile::from_json(text)?.to_fan()
}

pub fn parse_fan(path: impl AsRef<Path>) -> Result<Fan> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_fan_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_fan(path: impl AsRef<Path>, fan: &Fan, name: Option<String>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, FanFile::from_fan(fan, name).to_json())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p2() {
        let f = parse_fan_str(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(f.len(), 7);
    }

    #[test]
    fn bad_index_names_the_cone() {
        let e = parse_fan_str(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,5]]}"#).unwrap_err();
        match e {
            Error::Parse(m) => assert!(m.contains("cones[1]") && m.contains('5'), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_rays_are_rejected() {
        let zero = parse_fan_str(r#"{"dim":2,"rays":[[1,0],[0,0]],"cones":[[0],[1]]}"#).unwrap_err();
        assert_eq!(zero, Error::Parse("rays[1]: zero vector".into()));
        let twice = parse_fan_str(r#"{"dim":2,"rays":[[1,0],[0,1],[2,0]],"cones":[[0,1],[2]]}"#).unwrap_err();
        assert_eq!(twice, Error::Parse("rays[2]: same ray as rays[0]".into()));
    }

    #[test]
    fn p1_from_rays() {
        let f = parse_fan_str(r#"{"dim":1,"rays":[[1],[-1]],"cones":[[0],[1]]}"#).unwrap();
        assert!(f.is_complete());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_fan_str("{\"dim\": 2,\n \"rays\": [[1,0],]}").unwrap_err();
        match e {
            Error::Parse(m) => assert!(m.starts_with("line 2"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_fan_str(r#"{"dim":2,"rays":[[1,0,0]],"cones":[[0]]}"#),
            Err(Error::Parse(m)) if m.contains("rays[0]")
        ));
    }

    #[test]
    fn convexity_error_names_the_cone() {
        let e = parse_fan_str(r#"{"dim":1,"rays":[[1],[-1]],"cones":[[0,1]]}"#).unwrap_err();
        assert!(matches!(e, Error::NotStronglyConvex { context } if context.contains("cones[0]")));
    }

    #[test]
    fn round_trip() {
        let f = parse_fan_str(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]],"name":"p2"}"#).unwrap();
        let g = parse_fan_str(&FanFile::from_fan(&f, None).to_json()).unwrap();
        assert_eq!(f.fingerprint(), g.fingerprint());
    }
}
