//! Built-in fans, shipped as the JSON files under `fixtures/`.

use crate::fan::Fan;
use crate::fanfile::parse_fan_str;

macro_rules! fixture_table {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name, ".fan.json")))),*]
    };
}

const FIXTURES: &[(&str, &str)] = fixture_table!(
    "p1",
    "p2",
    "p1xp1",
    "f1",
    "p3",
    "weighted_quadrants",
    "fake_weighted_plane",
    "cube_face_fan",
    "orthant",
    "half_plane",
    "antipodal_quadrants",
    "three_quadrants",
    "cone_over_square",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Option<Fan> {
    source(name).map(|s| parse_fan_str(s).expect("shipped fixtures are valid"))
}

pub fn all() -> Vec<(&'static str, Fan)> {
    names().map(|n| (n, load(n).expect("listed"))).collect()
}

pub fn complete() -> Vec<(&'static str, Fan)> {
    all().into_iter().filter(|(_, f)| f.is_complete()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        let names: Vec<&str> = complete().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, ["p1", "p2", "p1xp1", "f1", "p3", "weighted_quadrants", "fake_weighted_plane", "cube_face_fan"]);
        assert!(load("nope").is_none());
    }
}
