use std::fmt;

use serde::{Deserialize, Serialize};

/// A class label, also used to index prototypes (`S`) and clusters (`sigma`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Plus,
    Minus,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::Plus, Label::Minus];

    /// +1.0 or -1.0.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Label::Plus => 1.0,
            Label::Minus => -1.0,
        }
    }

    /// 0 for `Plus`, 1 for `Minus`; the storage order used throughout.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Label::Plus => 0,
            Label::Minus => 1,
        }
    }

    #[inline]
    pub fn opposite(self) -> Label {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Plus => "+",
            Label::Minus => "-",
        })
    }
}
