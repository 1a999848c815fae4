use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Number of entries in the fixed symbol table.
pub const SYMBOL_COUNT: usize = 14;

/// Polynomial indeterminates, in the fixed order used for term ordering.
///
/// `x` and `y` are the reduced coordinates of the functional (`x = a3`,
/// `y` the radial coordinate in the `a1 a2` plane); `u` stands for `t^2`
/// and `k` for a symbolic bundle degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T,
    A1,
    A2,
    A3,
    S,
    Lambda,
    C,
    B1,
    B2,
    B3,
    K,
    X,
    Y,
    U,
}

impl Symbol {
    pub const ALL: [Symbol; SYMBOL_COUNT] = [
        Symbol::T,
        Symbol::A1,
        Symbol::A2,
        Symbol::A3,
        Symbol::S,
        Symbol::Lambda,
        Symbol::C,
        Symbol::B1,
        Symbol::B2,
        Symbol::B3,
        Symbol::K,
        Symbol::X,
        Symbol::Y,
        Symbol::U,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::T => "t",
            Symbol::A1 => "a1",
            Symbol::A2 => "a2",
            Symbol::A3 => "a3",
            Symbol::S => "s",
            Symbol::Lambda => "lambda",
            Symbol::C => "c",
            Symbol::B1 => "b1",
            Symbol::B2 => "b2",
            Symbol::B3 => "b3",
            Symbol::K => "k",
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::U => "u",
        }
    }

    /// The connection coefficients `a1, a2, a3`.
    pub fn ansatz() -> [Symbol; 3] {
        [Symbol::A1, Symbol::A2, Symbol::A3]
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::ALL
            .iter()
            .copied()
            .find(|sym| sym.name() == s)
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    }
}
