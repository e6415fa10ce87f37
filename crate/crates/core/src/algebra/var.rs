use std::fmt;
use std::str::FromStr;

use super::AlgebraError;

/// A variable name: one ASCII letter optionally followed by a decimal index
/// (`q`, `N`, `T`, `t`, `x1`, `x12`, ...).
///
/// Variables order by letter (ASCII, so upper case sorts before lower case)
/// and then by index, which puts `x2` before `x10`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub const fn letter(c: u8) -> Var {
        Var((c as u32) << 16)
    }

    pub const fn indexed(c: u8, index: u16) -> Var {
        Var(((c as u32) << 16) | (index as u32 + 1))
    }

    /// The field size `q`.
    pub const Q: Var = Var::letter(b'q');
    /// The point count `N`.
    pub const N: Var = Var::letter(b'N');
    /// The zeta variable `t = q^{-s}`.
    pub const T_SMALL: Var = Var::letter(b't');
    /// The rank-normalised variable `T = t^r`.
    pub const T_BIG: Var = Var::letter(b'T');

    /// `x_j = q^{-s_j}` as used by the Weyl-group periods.
    pub const fn x(j: u16) -> Var {
        Var::indexed(b'x', j)
    }

    pub fn parse(name: &str) -> Result<Var, AlgebraError> {
        let bad = || AlgebraError::InvalidVariable(name.to_string());
        let bytes = name.as_bytes();
        let (&first, rest) = bytes.split_first().ok_or_else(bad)?;
        if !first.is_ascii_alphabetic() {
            return Err(bad());
        }
        if rest.is_empty() {
            return Ok(Var::letter(first));
        }
        if !rest.iter().all(u8::is_ascii_digit) || (rest.len() > 1 && rest[0] == b'0') {
            return Err(bad());
        }
        let index: u16 = std::str::from_utf8(rest)
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&i| i < u16::MAX)
            .ok_or_else(bad)?;
        Ok(Var::indexed(first, index))
    }

    pub fn name(&self) -> String {
        let c = (self.0 >> 16) as u8 as char;
        match self.0 & 0xffff {
            0 => c.to_string(),
            i => format!("{}{}", c, i - 1),
        }
    }
}

impl FromStr for Var {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Var::parse(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
