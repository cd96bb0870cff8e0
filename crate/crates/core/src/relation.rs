//! Direction vocabularies shared by the parser, the banks and the answerer.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Compass direction on the location grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Compass {
    North,
    East,
    South,
    West,
}

impl Compass {
    /// Enumeration order used for tie-breaking path candidates (n < e < s < w).
    pub const ALL: [Compass; 4] = [Compass::North, Compass::East, Compass::South, Compass::West];

    pub fn opposite(self) -> Compass {
        match self {
            Compass::North => Compass::South,
            Compass::South => Compass::North,
            Compass::East => Compass::West,
            Compass::West => Compass::East,
        }
    }

    /// North and east are the canonical members of their opposite pairs.
    pub fn is_canonical(self) -> bool {
        matches!(self, Compass::North | Compass::East)
    }

    pub fn word(self) -> &'static str {
        match self {
            Compass::North => "north",
            Compass::East => "east",
            Compass::South => "south",
            Compass::West => "west",
        }
    }

    pub fn letter(self) -> &'static str {
        &self.word()[..1]
    }

    pub fn from_word(word: &str) -> Option<Compass> {
        Compass::ALL.into_iter().find(|c| c.word() == word)
    }

    /// Unit grid offset (x grows east, y grows north).
    pub fn offset(self) -> (i32, i32) {
        match self {
            Compass::North => (0, 1),
            Compass::East => (1, 0),
            Compass::South => (0, -1),
            Compass::West => (-1, 0),
        }
    }
}

impl fmt::Display for Compass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Relative position used by the positional-reasoning category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Above,
    Below,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Above, Side::Below, Side::Left, Side::Right];

    /// Index of the 4d sub-block that carries this side.
    pub fn block(self) -> usize {
        match self {
            Side::Above => 0,
            Side::Below => 1,
            Side::Left => 2,
            Side::Right => 3,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Side::Above => "above",
            Side::Below => "below",
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Time-of-day stamp used by the time-manipulation category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stamp {
    Yesterday,
    Morning,
    Afternoon,
    Evening,
}

impl Stamp {
    /// Chronological order.
    pub const ALL: [Stamp; 4] = [Stamp::Yesterday, Stamp::Morning, Stamp::Afternoon, Stamp::Evening];

    pub fn word(self) -> &'static str {
        match self {
            Stamp::Yesterday => "yesterday",
            Stamp::Morning => "morning",
            Stamp::Afternoon => "afternoon",
            Stamp::Evening => "evening",
        }
    }

    pub fn from_word(word: &str) -> Option<Stamp> {
        Stamp::ALL.into_iter().find(|s| s.word() == word)
    }
}
