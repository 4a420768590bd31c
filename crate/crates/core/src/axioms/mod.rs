//! Built-in identity sets and their text format.

pub mod syntax;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::ir::IdentitySet;
pub use syntax::{parse_identity_set, print_identity, print_identity_set, ParseError, PrintError};

/// Which transcription of a built-in set to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// The equations as printed in the source, with sort errors minimally repaired.
    AsPrinted,
    /// Suspected typos fixed.
    Corrected,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::AsPrinted => "as_printed",
            Variant::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown identity set `{0}`")]
    UnknownTag(String),
}

macro_rules! builtin {
    ($tag:literal) => {
        (
            $tag,
            include_str!(concat!("../../identities/", $tag, ".idn")),
            None,
        )
    };
    ($tag:literal, corrected) => {
        (
            $tag,
            include_str!(concat!("../../identities/", $tag, ".idn")),
            Some(include_str!(concat!("../../identities/", $tag, ".corrected.idn"))),
        )
    };
}

type Source = (&'static str, &'static str, Option<&'static str>);

const SOURCES: &[Source] = &[
    builtin!("bihom-associative"),
    builtin!("bihom-left-symmetric"),
    builtin!("ls-dialgebra"),
    builtin!("assoc-dialgebra"),
    builtin!("bihom-dendriform"),
    builtin!("bihom-tridendriform", corrected),
    builtin!("bimodule-of-bihom-associative", corrected),
    builtin!("bimodule-of-bihom-left-symmetric", corrected),
    builtin!("bimodule-of-ls-dialgebra", corrected),
    builtin!("bimodule-of-assoc-dialgebra", corrected),
    builtin!("bimodule-of-bihom-dendriform", corrected),
    builtin!("bimodule-of-bihom-tridendriform", corrected),
    builtin!("dual-bimodule-of-ls-dialgebra", corrected),
    builtin!("dual-bimodule-of-bihom-tridendriform", corrected),
    builtin!("matched-pair-of-bihom-associative"),
    builtin!("matched-pair-of-bihom-left-symmetric"),
    builtin!("matched-pair-of-ls-dialgebra", corrected),
    builtin!("matched-pair-of-assoc-dialgebra", corrected),
    builtin!("matched-pair-of-bihom-dendriform", corrected),
    builtin!("matched-pair-of-bihom-tridendriform", corrected),
    builtin!("rota-baxter"),
    builtin!("centroid"),
    builtin!("averaging"),
    builtin!("morphism"),
];

/// All built-in tags in a fixed order.
pub fn builtin_tags() -> Vec<&'static str> {
    SOURCES.iter().map(|s| s.0).collect()
}

/// Source text of a built-in set, if that variant ships.
pub fn builtin_source(tag: &str, variant: Variant) -> Option<&'static str> {
    let (_, printed, corrected) = SOURCES.iter().find(|s| s.0 == tag)?;
    match variant {
        Variant::AsPrinted => Some(printed),
        Variant::Corrected => *corrected,
    }
}

/// Whether a corrected transcription ships for `tag`.
pub fn has_corrected(tag: &str) -> bool {
    builtin_source(tag, Variant::Corrected).is_some()
}

fn cache() -> &'static BTreeMap<(&'static str, Variant), IdentitySet> {
    static CACHE: OnceLock<BTreeMap<(&'static str, Variant), IdentitySet>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut m = BTreeMap::new();
        for (tag, printed, corrected) in SOURCES {
            let parse = |src: &str, v: Variant| {
                let set = parse_identity_set(src)
                    .unwrap_or_else(|e| panic!("built-in set {tag} ({v}) does not parse: {e}"));
                assert_eq!(set.name, *tag, "built-in file declares a different set name");
                set
            };
            m.insert((*tag, Variant::AsPrinted), parse(printed, Variant::AsPrinted));
            if let Some(c) = corrected {
                m.insert((*tag, Variant::Corrected), parse(c, Variant::Corrected));
            }
        }
        m
    })
}

/// Returns the built-in set for `tag`, falling back to the as-printed
/// transcription when no corrected one ships. The second component names the
/// transcription actually returned.
pub fn builtin_identity_set(tag: &str, variant: Variant) -> Result<(&'static IdentitySet, Variant), AxiomError> {
    let c = cache();
    let key = SOURCES
        .iter()
        .find(|s| s.0 == tag)
        .map(|s| s.0)
        .ok_or_else(|| AxiomError::UnknownTag(tag.to_string()))?;
    if let Some(s) = c.get(&(key, variant)) {
        return Ok((s, variant));
    }
    Ok((&c[&(key, Variant::AsPrinted)], Variant::AsPrinted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_loads_in_both_variants() {
        for tag in builtin_tags() {
            let (s, v) = builtin_identity_set(tag, Variant::AsPrinted).unwrap();
            assert_eq!(v, Variant::AsPrinted);
            s.wellform().unwrap();
            let (c, v) = builtin_identity_set(tag, Variant::Corrected).unwrap();
            assert_eq!(v == Variant::Corrected, has_corrected(tag));
            c.wellform().unwrap();
        }
    }

    #[test]
    fn unknown_tag() {
        assert_eq!(
            builtin_identity_set("lie", Variant::AsPrinted).unwrap_err(),
            AxiomError::UnknownTag("lie".into())
        );
    }
}
