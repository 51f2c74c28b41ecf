//! Half-twist words.
//!
//! A word is stored in written order: `s_1.s_2` means `s_1 ∘ s_2`, so the
//! rightmost token acts first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MapClassError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub index: usize,
    pub inverse: bool,
}

impl Twist {
    pub fn pos(index: usize) -> Twist {
        Twist { index, inverse: false }
    }

    pub fn neg(index: usize) -> Twist {
        Twist { index, inverse: true }
    }

    pub fn inv(self) -> Twist {
        Twist { index: self.index, inverse: !self.inverse }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "s{}^-1", self.index)
        } else {
            write!(f, "s{}", self.index)
        }
    }
}

/// Chirality of exported generators. `Mirror` replaces every twist by its
/// inverse, which conjugates the class by a reflection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    #[default]
    AsIs,
    Mirror,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistWord(pub Vec<Twist>);

impl TwistWord {
    pub fn identity() -> TwistWord {
        TwistWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[Twist] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TwistWord) -> TwistWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TwistWord(v)
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord(self.0.iter().rev().map(|t| t.inv()).collect())
    }

    /// The same tokens in reverse order, exponents kept.
    pub fn reversed(&self) -> TwistWord {
        TwistWord(self.0.iter().rev().copied().collect())
    }

    pub fn pow(&self, k: i64) -> TwistWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        TwistWord(v)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().map(|t| t.index).max()
    }

    /// Flipper-style token stream: `s_3.S_8`, uppercase for inverses.
    pub fn export(&self, convention: Convention) -> String {
        self.0
            .iter()
            .map(|t| {
                let inverse = t.inverse ^ (convention == Convention::Mirror);
                format!("{}_{}", if inverse { 'S' } else { 's' }, t.index)
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Accepts both the export grammar (`s_3.S_8`) and the display grammar
/// (`s3.s8^-1`); `id` and the empty string are the identity.
impl FromStr for TwistWord {
    type Err = MapClassError;

    fn from_str(s: &str) -> Result<TwistWord, MapClassError> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(TwistWord::identity());
        }
        s.split('.').map(parse_token).collect::<Result<Vec<_>, _>>().map(TwistWord)
    }
}

fn parse_token(tok: &str) -> Result<Twist, MapClassError> {
    let bad = || MapClassError::Parse(format!("bad twist token {tok:?}"));
    let tok = tok.trim();
    let mut chars = tok.chars();
    let head = chars.next().ok_or_else(bad)?;
    let mut inverse = match head {
        's' => false,
        'S' => true,
        _ => return Err(bad()),
    };
    let mut rest = chars.as_str();
    rest = rest.strip_prefix('_').unwrap_or(rest);
    if let Some(r) = rest.strip_suffix("^-1") {
        inverse = !inverse;
        rest = r;
    }
    let index = rest.parse::<usize>().map_err(|_| bad())?;
    Ok(Twist { index, inverse })
}

/// `s_i.s_{i-1}. … .s_0.s_0. … .s_i`, the lift of the full twist about the
/// contracted block and the next puncture.
pub fn palindrome(i: usize) -> TwistWord {
    let mut v: Vec<Twist> = (0..=i).rev().map(Twist::pos).collect();
    v.extend((0..=i).map(Twist::pos));
    TwistWord(v)
}

/// Correction `(τ_{P_i}^{-1} τ_{P_{i-1}})^k`, written
/// `((s_i^{-1}. … .s_0^{-1}).(s_0^{-1}. … .s_i^{-1}))^k`.
pub fn twist_correction(i: usize, k: i64) -> TwistWord {
    palindrome(i).pow(-k)
}

/// Word for `f²` from the word for `g`: `ĝ^{-1}` followed by `ḡ`.
pub fn f_squared_word(g: &TwistWord) -> TwistWord {
    g.inverse().compose(&g.reversed())
}
