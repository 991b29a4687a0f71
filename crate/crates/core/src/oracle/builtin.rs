use std::str::FromStr;

use super::{Oracle, OracleError};
use crate::syntax::Query;

/// Pure predicates that need no external data. The query name is ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Palindrome,
    AlwaysTrue,
    AlwaysFalse,
    NonEmpty,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Palindrome => "palindrome",
            Builtin::AlwaysTrue => "always_true",
            Builtin::AlwaysFalse => "always_false",
            Builtin::NonEmpty => "nonempty",
        }
    }

    pub fn test(self, text: &[u8]) -> bool {
        match self {
            Builtin::Palindrome => text.iter().eq(text.iter().rev()),
            Builtin::AlwaysTrue => true,
            Builtin::AlwaysFalse => false,
            Builtin::NonEmpty => !text.is_empty(),
        }
    }
}

impl FromStr for Builtin {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "palindrome" => Builtin::Palindrome,
            "always_true" | "true" => Builtin::AlwaysTrue,
            "always_false" | "false" => Builtin::AlwaysFalse,
            "nonempty" => Builtin::NonEmpty,
            other => return Err(OracleError::UnknownBuiltin(other.to_string())),
        })
    }
}

impl Oracle for Builtin {
    fn evaluate(&self, _query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        Ok(self.test(text))
    }
}
