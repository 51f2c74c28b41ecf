//! The staged construction of `g` with `g ∘ f′(p_i) ≅ p_i` for every `i`.
//!
//! Stage 0 drags the end of `f′(p_0)` back along the arc one crossing at a
//! time and then slides the resulting short arc onto `p_0`. Stage `i`
//! contracts `p_0 ∪ … ∪ p_{i-1}` to a single puncture, repeats the drag in
//! the contracted disk where the only twist allowed at the contracted
//! puncture is the full twist `τ`, lifts the result, and finally removes the
//! remaining winding about the contracted block.

use std::fmt;

use serde::Serialize;

use super::arcdata::{ArcData, Side};
use super::word::{palindrome, twist_correction, Twist, TwistWord};
use super::MapClassError;

/// Letter of a stage word written in the contracted disk, with indices of the
/// original disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StageToken {
    Twist(Twist),
    /// Full twist of the contracted block `P_{i-1}` with puncture `i + 1`.
    Tau { inverse: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub index: usize,
    /// `g̃_i` in the contracted disk, empty at stage 0.
    pub contracted: Vec<StageToken>,
    /// `g_i′`, the lift of `g̃_i` (equal to `g_0` at stage 0).
    pub lifted: TwistWord,
    /// Exponent `k` of the twist correction.
    pub winding: i64,
    /// `g_i`.
    pub word: TwistWord,
}

impl Stage {
    /// The contracted word in the notation `s̃_i^{-1}.s̃_i^{-1}` for `τ^{-1}`.
    pub fn contracted_display(&self) -> String {
        let mut parts = Vec::new();
        for t in &self.contracted {
            match t {
                StageToken::Twist(t) => parts.push(t.to_string()),
                StageToken::Tau { inverse } => {
                    let s = if *inverse {
                        format!("~s{}^-1", self.index)
                    } else {
                        format!("~s{}", self.index)
                    };
                    parts.push(s.clone());
                    parts.push(s);
                }
            }
        }
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join(".")
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GComputation {
    pub punctures: usize,
    pub stages: Vec<Stage>,
    /// `g = g_{n-2} ∘ … ∘ g_0`.
    pub g: TwistWord,
}

impl fmt::Display for GComputation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            writeln!(f, "g{} = {}", s.index, s.word)?;
        }
        write!(f, "g = {}", self.g)
    }
}

fn step_budget(d: &ArcData) -> usize {
    64 + 16 * d.events().len()
}

/// Drags the end of `d` back along the arc until no crossings remain.
///
/// With `block` set, puncture `0` is a contracted block and the last crossing
/// at its rays is removed with `τ^{±1}` instead of a half-twist.
fn drag_end(mut d: ArcData, block: bool) -> Result<(Vec<StageToken>, ArcData), MapClassError> {
    let mut applied = Vec::new();
    let budget = step_budget(&d);
    while let Some(&last) = d.events().last() {
        if applied.len() >= budget {
            return Err(MapClassError::Extraction(format!(
                "end drag did not terminate after {budget} steps at {d}"
            )));
        }
        let b = d.end();
        let tok = if last.puncture == b + 1 {
            StageToken::Twist(Twist { index: b, inverse: last.side == Side::Over })
        } else if block && last.puncture == 0 {
            let plus = apply_tokens(&d, &[StageToken::Tau { inverse: false }])?;
            let minus = apply_tokens(&d, &[StageToken::Tau { inverse: true }])?;
            StageToken::Tau { inverse: minus.events().len() < plus.events().len() }
        } else {
            StageToken::Twist(Twist { index: last.puncture, inverse: last.side == Side::Under })
        };
        d = apply_tokens(&d, &[tok])?;
        applied.push(tok);
    }
    applied.reverse();
    Ok((applied, d))
}

/// Applies contracted-disk tokens (rightmost first); `τ` is `s_0²`.
fn apply_tokens(d: &ArcData, toks: &[StageToken]) -> Result<ArcData, MapClassError> {
    let mut d = d.clone();
    for t in toks.iter().rev() {
        d = match *t {
            StageToken::Twist(t) => d.twist(t)?,
            StageToken::Tau { inverse } => {
                let s = Twist { index: 0, inverse };
                d.twist(s)?.twist(s)?
            }
        };
    }
    Ok(d)
}

/// Base case: a word `g_0` with `g_0(d) ≅ p_0`.
pub fn word_from_arcdata(d: &ArcData) -> Result<TwistWord, MapClassError> {
    let (toks, mut cur) = drag_end(d.clone(), false)?;
    let mut word: Vec<Twist> = toks
        .into_iter()
        .map(|t| match t {
            StageToken::Twist(t) => t,
            StageToken::Tau { .. } => unreachable!("no contracted block in the base case"),
        })
        .collect();
    let mut pre = Vec::new();
    if cur.start() > cur.end() {
        pre.push(Twist::pos(cur.end()));
    }
    let low = cur.start().min(cur.end());
    pre.extend((0..low).rev().map(Twist::pos));
    for t in &pre {
        cur = cur.twist(*t)?;
    }
    let (toks, _) = drag_end(cur, false)?;
    let tail: Vec<Twist> = toks
        .into_iter()
        .map(|t| match t {
            StageToken::Twist(t) => t,
            StageToken::Tau { .. } => unreachable!(),
        })
        .collect();
    pre.reverse();
    let mut full = tail;
    full.extend(pre);
    full.append(&mut word);
    let w = TwistWord(full);
    let check = d.apply(&w)?;
    if !(check.is_straight() && check.start() == 0) {
        return Err(MapClassError::Extraction(format!("{w} maps {d} to {check}, not p_0")));
    }
    Ok(w)
}

/// Lift of a contracted-disk word at stage `i`.
pub fn lift_word(toks: &[StageToken], i: usize) -> TwistWord {
    let mut v = Vec::new();
    for t in toks {
        match *t {
            StageToken::Twist(t) => v.push(t),
            StageToken::Tau { inverse } => {
                let p = palindrome(i);
                v.extend(if inverse { p.inverse().0 } else { p.0 });
            }
        }
    }
    TwistWord(v)
}

/// Signed number of turns of `d` about puncture `0`, counted from its
/// crossings of the two rays at that puncture (counter-clockwise positive).
fn winding_estimate(d: &ArcData) -> i64 {
    let mut strip = match d.events().first() {
        None => return 0,
        Some(e) if e.puncture + 1 == d.start() => d.start(),
        Some(_) => d.start() + 1,
    };
    let mut half = 0i64;
    for e in d.events() {
        let leftward = strip == e.puncture + 1;
        if e.puncture == 0 {
            half += match (e.side, leftward) {
                (Side::Over, true) | (Side::Under, false) => 1,
                _ => -1,
            };
        }
        strip = if leftward { e.puncture } else { e.puncture + 1 };
    }
    half / 2
}

const MAX_WINDING: i64 = 64;

/// Finds `k` with `twist_correction(i, k)(d) ≅ p_i`, starting from the
/// winding estimate.
fn find_winding(d: &ArcData, i: usize) -> Result<i64, MapClassError> {
    let est = winding_estimate(d);
    let mut candidates = vec![est, -est];
    for r in 0..=MAX_WINDING {
        candidates.push(r);
        candidates.push(-r);
    }
    for k in candidates {
        let img = d.apply(&twist_correction(i, k))?;
        if img.is_straight() && img.start() == i {
            return Ok(k);
        }
    }
    Err(MapClassError::Stage {
        stage: i,
        detail: format!("no twist correction with |k| ≤ {MAX_WINDING} straightens {d}"),
    })
}

fn stage(alpha: &ArcData, i: usize) -> Result<Stage, MapClassError> {
    if i == 0 {
        let w = word_from_arcdata(alpha).map_err(|e| MapClassError::Stage {
            stage: 0,
            detail: e.to_string(),
        })?;
        return Ok(Stage { index: 0, contracted: Vec::new(), lifted: w.clone(), winding: 0, word: w });
    }
    if alpha.start() != i {
        return Err(MapClassError::Stage {
            stage: i,
            detail: format!("arc {alpha} does not start at puncture {i}"),
        });
    }
    let c = alpha.contract(i)?;
    let (toks, img) = drag_end(c, true)?;
    if !img.is_straight() || img.start() != 0 {
        return Err(MapClassError::Stage {
            stage: i,
            detail: format!("contracted arc ends as {img}"),
        });
    }
    let contracted: Vec<StageToken> = toks
        .into_iter()
        .map(|t| match t {
            StageToken::Twist(t) => StageToken::Twist(Twist { index: t.index + i, ..t }),
            tau => tau,
        })
        .collect();
    let lifted = lift_word(&contracted, i);
    let beta = alpha.apply(&lifted)?;
    let winding = find_winding(&beta, i)?;
    let word = twist_correction(i, winding).compose(&lifted);
    Ok(Stage { index: i, contracted, lifted, winding, word })
}

/// Runs every stage on the arc-data of `f′(p_0), …, f′(p_{n-2})` and checks
/// the stage contract after each one.
pub fn compute_g(arcs: &[ArcData]) -> Result<GComputation, MapClassError> {
    let n = arcs.first().map(|a| a.punctures()).unwrap_or(0);
    if n < 2 || arcs.len() + 1 != n || arcs.iter().any(|a| a.punctures() != n) {
        return Err(MapClassError::InvalidArc(format!(
            "expected {} arcs on {n} punctures, got {}",
            n.saturating_sub(1),
            arcs.len()
        )));
    }
    let mut g = TwistWord::identity();
    let mut stages = Vec::with_capacity(arcs.len());
    for (i, arc) in arcs.iter().enumerate() {
        let alpha = arc.apply(&g)?;
        let st = stage(&alpha, i)?;
        g = st.word.compose(&g);
        for (k, earlier) in arcs.iter().enumerate().take(i + 1) {
            let img = earlier.apply(&g)?;
            if !(img.is_straight() && img.start() == k) {
                return Err(MapClassError::Stage {
                    stage: i,
                    detail: format!("g_{i} ∘ … ∘ g_0 maps f'(p_{k}) to {img}"),
                });
            }
        }
        stages.push(st);
    }
    Ok(GComputation { punctures: n, stages, g })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_arc_gives_empty_word() {
        let w = word_from_arcdata(&ArcData::straight(5, 0)).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn shifted_arc_is_slid_onto_p0() {
        let w = word_from_arcdata(&ArcData::straight(5, 2)).unwrap();
        assert_eq!(w.to_string(), "s1.s2.s0.s1");
        let rev = ArcData::parse("start=3 end=2 events=", 5).unwrap();
        let w = word_from_arcdata(&rev).unwrap();
        assert!(rev.apply(&w).unwrap().is_straight());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_word(&[StageToken::Twist(Twist::pos(2))], 1).to_string(), "s2");
        assert_eq!(lift_word(&[StageToken::Tau { inverse: false }], 1).to_string(), "s1.s0.s0.s1");
        assert!(lift_word(&[], 3).is_empty());
    }

    #[test]
    fn winding_of_twisted_arc() {
        // p_2 wound once about the block {0, 1, 2}
        let d = ArcData::straight(5, 2).apply(&palindrome(2)).unwrap();
        assert_eq!(find_winding(&d, 2).unwrap(), 1);
        assert_eq!(winding_estimate(&d).abs(), 1);
    }
}
