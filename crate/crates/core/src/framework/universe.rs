use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::{Facts, Schema};
use crate::{Error, Result};

/// Index of an argument in its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArgId(pub usize);

impl ArgId {
    pub const TARGET: ArgId = ArgId(0);
    pub const TOP: ArgId = ArgId(1);

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Argument {
    Target,
    /// Meta-argument that may only attack the target.
    Top,
    /// Active when the atom is among the facts.
    Positive { attribute: u32, value: u32 },
    /// Active when the atom is not among the facts.
    Negative { attribute: u32, value: u32 },
}

impl Argument {
    pub fn attribute(self) -> Option<u32> {
        match self {
            Argument::Positive { attribute, .. } | Argument::Negative { attribute, .. } => {
                Some(attribute)
            }
            _ => None,
        }
    }
}

/// Which argument and relation kinds a framework may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Variant {
    /// Adds one negative argument per atom.
    pub negatives: bool,
    /// Allows support edges and switches to bipolar labelling.
    pub supports: bool,
}

impl Variant {
    pub const BASE: Variant = Variant {
        negatives: false,
        supports: false,
    };
    pub const NEGATIVE: Variant = Variant {
        negatives: true,
        supports: false,
    };
    pub const BIPOLAR: Variant = Variant {
        negatives: false,
        supports: true,
    };
    pub const NEGATIVE_BIPOLAR: Variant = Variant {
        negatives: true,
        supports: true,
    };

    pub fn name(self) -> &'static str {
        match (self.negatives, self.supports) {
            (false, false) => "base",
            (true, false) => "n",
            (false, true) => "bipolar",
            (true, true) => "n-bipolar",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Variant::BASE),
            "n" => Ok(Variant::NEGATIVE),
            "bipolar" => Ok(Variant::BIPOLAR),
            "n-bipolar" => Ok(Variant::NEGATIVE_BIPOLAR),
            _ => Err(Error::Config(format!(
                "unknown variant `{s}` (expected base, n, bipolar or n-bipolar)"
            ))),
        }
    }
}

/// Every argument a dataset can produce: target, top, one positive
/// argument per atom and, in the negative variant, one negative argument
/// per atom. Target is index 0 and top index 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgumentUniverse {
    schema: Arc<Schema>,
    variant: Variant,
    target_name: String,
    arguments: Vec<Argument>,
}

impl ArgumentUniverse {
    pub fn new(schema: Arc<Schema>, variant: Variant, target_name: impl Into<String>) -> Self {
        let mut arguments = vec![Argument::Target, Argument::Top];
        let atoms: Vec<(u32, u32)> = schema
            .attributes
            .iter()
            .enumerate()
            .flat_map(|(a, attr)| (0..attr.values.len()).map(move |v| (a as u32, v as u32)))
            .collect();
        arguments.extend(
            atoms
                .iter()
                .map(|&(attribute, value)| Argument::Positive { attribute, value }),
        );
        if variant.negatives {
            arguments.extend(
                atoms
                    .iter()
                    .map(|&(attribute, value)| Argument::Negative { attribute, value }),
            );
        }
        ArgumentUniverse {
            schema,
            variant,
            target_name: target_name.into(),
            arguments,
        }
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn argument(&self, id: ArgId) -> Argument {
        self.arguments[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgId> {
        (0..self.arguments.len()).map(ArgId)
    }

    pub fn name(&self, id: ArgId) -> String {
        match self.arguments[id.0] {
            Argument::Target => self.target_name.clone(),
            Argument::Top => "top".to_string(),
            Argument::Positive { attribute, value } => {
                self.schema.atom(attribute as usize, value).to_string()
            }
            Argument::Negative { attribute, value } => {
                format!("!{}", self.schema.atom(attribute as usize, value))
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.ids().map(|id| self.name(id)).collect()
    }

    /// Looks an argument up by its display name.
    pub fn find(&self, name: &str) -> Option<ArgId> {
        self.ids().find(|&id| self.name(id) == name)
    }

    pub fn same_attribute(&self, a: ArgId, b: ArgId) -> bool {
        match (self.arguments[a.0].attribute(), self.arguments[b.0].attribute()) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    pub fn is_active(&self, id: ArgId, facts: &Facts) -> bool {
        match self.arguments[id.0] {
            Argument::Target | Argument::Top => true,
            Argument::Positive { attribute, value } => facts.holds(attribute as usize, value),
            Argument::Negative { attribute, value } => !facts.holds(attribute as usize, value),
        }
    }

    pub fn active_mask(&self, facts: &Facts) -> Vec<bool> {
        self.ids().map(|id| self.is_active(id, facts)).collect()
    }
}
