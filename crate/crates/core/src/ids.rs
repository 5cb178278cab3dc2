//! Identifiers for agents, propositions and states.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("empty identifier")]
    Empty,
    #[error("invalid character {ch:?} in identifier {text:?}")]
    BadChar { text: String, ch: char },
    #[error("unknown lineage tag {tag:?} in state {text:?}")]
    BadTag { text: String, tag: String },
}

fn check_token(text: &str) -> Result<(), IdError> {
    if text.is_empty() {
        return Err(IdError::Empty);
    }
    match text
        .chars()
        .find(|c| !(c.is_ascii_alphanumeric() || *c == '_'))
    {
        Some(ch) => Err(IdError::BadChar {
            text: text.to_string(),
            ch,
        }),
        None => Ok(()),
    }
}

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, IdError> {
                let name = name.into();
                check_token(&name)?;
                Ok(Self(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = IdError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }
    };
}

name_type!(
    /// Agent name: letters, digits and underscores.
    AgentId
);
name_type!(
    /// Proposition name.
    PropId
);

/// Which replica a state was copied into by an untruthful update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    /// The region describing the actual state of affairs.
    Act,
    /// The region holding the misinformed agents' beliefs.
    Shift,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Act => "act",
            Tag::Shift => "shift",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "act" => Ok(Tag::Act),
            "shift" => Ok(Tag::Shift),
            other => Err(other.to_string()),
        }
    }
}

/// A possible world. Original states have an empty lineage; every replica
/// made by an untruthful update appends one tag.
///
/// The textual form is `base` followed by `@tag` per lineage entry, e.g.
/// `3@act@shift`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId {
    base: String,
    lineage: Vec<Tag>,
}

impl StateId {
    pub fn new(base: impl Into<String>) -> Result<Self, IdError> {
        let base = base.into();
        check_token(&base)?;
        Ok(Self {
            base,
            lineage: Vec::new(),
        })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn lineage(&self) -> &[Tag] {
        &self.lineage
    }

    /// Copy of this state with `tag` appended to the lineage.
    pub fn tagged(&self, tag: Tag) -> Self {
        let mut lineage = self.lineage.clone();
        lineage.push(tag);
        Self {
            base: self.base.clone(),
            lineage,
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        for tag in &self.lineage {
            write!(f, "@{tag}")?;
        }
        Ok(())
    }
}

impl FromStr for StateId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('@');
        let mut state = StateId::new(parts.next().unwrap_or_default())?;
        for part in parts {
            let tag = part.parse().map_err(|tag| IdError::BadTag {
                text: s.to_string(),
                tag,
            })?;
            state.lineage.push(tag);
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_text_round_trip() {
        let s: StateId = "3@act@shift".parse().unwrap();
        assert_eq!(s.base(), "3");
        assert_eq!(s.lineage(), &[Tag::Act, Tag::Shift]);
        assert_eq!(s.to_string(), "3@act@shift");
        assert_eq!(
            StateId::new("3")
                .unwrap()
                .tagged(Tag::Act)
                .tagged(Tag::Shift),
            s
        );
    }

    #[test]
    fn rejects_bad_names() {
        assert_eq!(AgentId::new(""), Err(IdError::Empty));
        assert!(matches!(
            AgentId::new("a b"),
            Err(IdError::BadChar { ch: ' ', .. })
        ));
        assert!(matches!(
            "3@nope".parse::<StateId>(),
            Err(IdError::BadTag { .. })
        ));
        assert!("@act".parse::<StateId>().is_err());
        assert!(PropId::new("p_1").is_ok());
    }
}
