//! The named groups and presentations shipped with the crate.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::group::GroupSpec;

#[derive(Clone, Debug, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub group: GroupSpec,
    /// File name of a nilpotent presentation, when the group is nilpotent.
    #[serde(default)]
    pub presentation: Option<String>,
    #[serde(default)]
    pub alt_presentations: Vec<String>,
}

impl CorpusEntry {
    pub fn presentation_text(&self) -> Option<&'static str> {
        self.presentation.as_deref().and_then(presentation_file)
    }
}

pub fn corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        serde_json::from_str(include_str!("../data/corpus.json")).expect("corpus.json is valid")
    })
}

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    corpus().iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

/// Contents of a shipped presentation file.
pub fn presentation_file(file: &str) -> Option<&'static str> {
    PRESENTATIONS
        .iter()
        .find(|(f, _)| *f == file)
        .map(|(_, text)| *text)
}

macro_rules! presentations {
    ($($f:literal),* $(,)?) => {
        const PRESENTATIONS: &[(&str, &str)] = &[$(($f, include_str!(concat!("../data/presentations/", $f)))),*];
    };
}

presentations!(
    "C2.pres",
    "C2xC2xC2.pres",
    "C2xC4.pres",
    "C2xC6.pres",
    "C3.pres",
    "C3xC3.pres",
    "C3xC6.pres",
    "C4.pres",
    "C4xC6.pres",
    "C5.pres",
    "C6.pres",
    "C7.pres",
    "C8.pres",
    "C9.pres",
    "C10.pres",
    "C11.pres",
    "C12.pres",
    "C13.pres",
    "C14.pres",
    "C15.pres",
    "C16.pres",
    "D4.pres",
    "Q8.pres",
    "V4.pres",
    "V4_3gen.pres",
    "trivial.pres",
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_and_has_its_files() {
        for e in corpus() {
            let g = e
                .group
                .build()
                .unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(g.order() >= 1);
            if let Some(p) = &e.presentation {
                assert!(presentation_file(p).is_some(), "missing {p}");
            }
            for p in &e.alt_presentations {
                assert!(presentation_file(p).is_some(), "missing {p}");
            }
        }
        assert_eq!(entry("q8").unwrap().group.build().unwrap().order(), 8);
        assert_eq!(entry("S4").unwrap().group.build().unwrap().order(), 24);
    }
}
