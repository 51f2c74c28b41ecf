//! Arc-data: the crossings of an arc with the vertical rays above and below
//! each puncture.
//!
//! Cutting the disk along those rays leaves vertical strips `S_0, …, S_n`,
//! where `S_j` lies between punctures `j - 1` and `j`. Each strip is simply
//! connected, so the reduced door sequence determines the arc up to homotopy
//! rel endpoints. Crossing a ray next to an endpoint is absorbed by turning
//! the arc about that endpoint, which is why leading events at the start
//! puncture and trailing events at the end puncture are dropped.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::word::{Twist, TwistWord};
use super::MapClassError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Over,
    Under,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Over => Side::Under,
            Side::Under => Side::Over,
        }
    }

    fn letter(self) -> char {
        match self {
            Side::Over => 'O',
            Side::Under => 'U',
        }
    }
}

/// A crossing of the ray above (`Over`) or below (`Under`) a puncture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub puncture: usize,
    pub side: Side,
}

impl Event {
    pub fn over(puncture: usize) -> Event {
        Event { puncture, side: Side::Over }
    }

    pub fn under(puncture: usize) -> Event {
        Event { puncture, side: Side::Under }
    }
}

/// Reduced arc-data of an arc between two distinct punctures of a disk with
/// `punctures` marked points on a horizontal line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcData {
    punctures: usize,
    start: usize,
    end: usize,
    events: Vec<Event>,
}

/// Strip entered after crossing `door` from `strip`.
fn cross(strip: usize, door: usize) -> usize {
    if strip == door {
        door + 1
    } else {
        door
    }
}

impl ArcData {
    /// Reduces the raw crossing sequence and checks that it describes a path.
    pub fn new(
        punctures: usize,
        start: usize,
        end: usize,
        events: Vec<Event>,
    ) -> Result<ArcData, MapClassError> {
        if start >= punctures || end >= punctures || start == end {
            return Err(MapClassError::InvalidArc(format!(
                "endpoints {start}, {end} on a disk with {punctures} punctures"
            )));
        }
        if let Some(e) = events.iter().find(|e| e.puncture >= punctures) {
            return Err(MapClassError::InvalidArc(format!("crossing at puncture {}", e.puncture)));
        }
        let d = ArcData { punctures, start, end, events }.reduced();
        d.check()?;
        Ok(d)
    }

    /// The straight arc `p_i` from puncture `i` to `i + 1`.
    pub fn straight(punctures: usize, i: usize) -> ArcData {
        assert!(i + 1 < punctures, "straight arc {i} on {punctures} punctures");
        ArcData { punctures, start: i, end: i + 1, events: Vec::new() }
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_straight(&self) -> bool {
        self.events.is_empty() && self.end == self.start + 1
    }

    pub fn is_trivial(&self) -> bool {
        self.events.is_empty()
    }

    fn reduced(mut self) -> ArcData {
        let mut out: Vec<Event> = Vec::with_capacity(self.events.len());
        for e in self.events.drain(..) {
            if out.last() == Some(&e) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        let (mut lo, mut hi) = (0, out.len());
        loop {
            let before = (lo, hi);
            if lo < hi && out[lo].puncture == self.start {
                lo += 1;
            }
            if lo < hi && out[hi - 1].puncture == self.end {
                hi -= 1;
            }
            if (lo, hi) == before {
                break;
            }
        }
        self.events = out[lo..hi].to_vec();
        self
    }

    fn start_strip(&self) -> usize {
        match self.events.first() {
            None => self.start.max(self.end),
            Some(e) if e.puncture + 1 == self.start => self.start,
            Some(_) => self.start + 1,
        }
    }

    fn check(&self) -> Result<(), MapClassError> {
        let bad = |why: &str| MapClassError::InvalidArc(format!("{self}: {why}"));
        if self.events.is_empty() {
            return if self.start.abs_diff(self.end) == 1 {
                Ok(())
            } else {
                Err(bad("no crossings between non-adjacent punctures"))
            };
        }
        let first = self.events[0].puncture;
        if first + 1 != self.start && first != self.start + 1 {
            return Err(bad("first crossing not next to the start"));
        }
        let mut strip = self.start_strip();
        for e in &self.events {
            if strip != e.puncture && strip != e.puncture + 1 {
                return Err(bad("consecutive crossings in different strips"));
            }
            strip = cross(strip, e.puncture);
        }
        if strip != self.end && strip != self.end + 1 {
            return Err(bad("last strip not next to the end"));
        }
        Ok(())
    }

    /// Reflection in the horizontal axis.
    pub fn mirrored(&self) -> ArcData {
        ArcData {
            events: self.events.iter().map(|e| Event { side: e.side.flip(), ..*e }).collect(),
            ..self.clone()
        }
    }

    /// Image under the counter-clockwise half-twist `s_k` (or its inverse)
    /// exchanging punctures `k` and `k + 1`.
    ///
    /// Crossings of the rays at `k` and `k + 1` are pushed outside the twist
    /// region, so only the pieces of the arc inside strip `S_{k+1}` change.
    /// Each such piece runs between a top ray (`T`), a bottom ray (`B`) or
    /// one of the two punctures, and its image picks up the crossings below.
    pub fn twist(&self, t: Twist) -> Result<ArcData, MapClassError> {
        if t.index + 1 >= self.punctures {
            return Err(MapClassError::Range { index: t.index, punctures: self.punctures });
        }
        if t.inverse {
            return Ok(self.mirrored().ccw_twist(t.index).mirrored());
        }
        Ok(self.ccw_twist(t.index))
    }

    fn ccw_twist(&self, k: usize) -> ArcData {
        let other = |p: usize| if p == k { k + 1 } else { k };
        let mut ev = self.events.clone();
        let mut strip = self.start_strip();
        if (self.start == k && strip == k) || (self.start == k + 1 && strip == k + 2) {
            ev.insert(0, Event::over(self.start));
            strip = k + 1;
        }
        let last = ev.iter().fold(strip, |s, e| cross(s, e.puncture));
        if (self.end == k && last == k) || (self.end == k + 1 && last == k + 2) {
            ev.push(Event::over(self.end));
        }

        #[derive(Clone, Copy, PartialEq)]
        enum End {
            Top,
            Bottom,
            Puncture,
        }
        let door = |e: &Event| match e.side {
            Side::Over => End::Top,
            Side::Under => End::Bottom,
        };
        let (uk, lk, uk1, lk1) =
            (Event::over(k), Event::under(k), Event::over(k + 1), Event::under(k + 1));

        let (mut start, mut end) = (self.start, self.end);
        let mut out = Vec::with_capacity(ev.len() + 8);
        for m in 0..=ev.len() {
            if strip == k + 1 {
                let from = if m == 0 { End::Puncture } else { door(&ev[m - 1]) };
                let to = if m == ev.len() { End::Puncture } else { door(&ev[m]) };
                match (from, to) {
                    (End::Top, End::Bottom) => out.extend([uk, lk, uk1, lk1]),
                    (End::Bottom, End::Top) => out.extend([lk1, uk1, lk, uk]),
                    (End::Puncture, End::Top) => {
                        out.extend([lk, uk]);
                        start = other(start);
                    }
                    (End::Puncture, End::Bottom) => {
                        out.extend([uk1, lk1]);
                        start = other(start);
                    }
                    (End::Top, End::Puncture) => {
                        out.extend([uk, lk]);
                        end = other(end);
                    }
                    (End::Bottom, End::Puncture) => {
                        out.extend([lk1, uk1]);
                        end = other(end);
                    }
                    (End::Puncture, End::Puncture) => {
                        start = other(start);
                        end = other(end);
                    }
                    _ => {}
                }
            }
            if let Some(e) = ev.get(m) {
                out.push(*e);
                strip = cross(strip, e.puncture);
            }
        }
        ArcData { punctures: self.punctures, start, end, events: out }.reduced()
    }

    /// Image under a word; the rightmost token acts first.
    pub fn apply(&self, w: &TwistWord) -> Result<ArcData, MapClassError> {
        let mut d = self.clone();
        for t in w.tokens().iter().rev() {
            d = d.twist(*t)?;
        }
        Ok(d)
    }

    /// Arc-data after contracting punctures `0..=i` (joined by `p_0 … p_{i-1}`)
    /// to a single puncture, which becomes puncture `0`.
    pub fn contract(&self, i: usize) -> Result<ArcData, MapClassError> {
        let shift = |p: usize| p.saturating_sub(i);
        let events = self
            .events
            .iter()
            .filter(|e| e.puncture >= i)
            .map(|e| Event { puncture: e.puncture - i, side: e.side })
            .collect();
        ArcData::new(self.punctures - i, shift(self.start), shift(self.end), events)
    }

    /// Parses `start=k end=j events=(k1,O)(k2,U)…`.
    pub fn parse(s: &str, punctures: usize) -> Result<ArcData, MapClassError> {
        let bad = |why: &str| MapClassError::Parse(format!("{why} in {s:?}"));
        let mut start = None;
        let mut end = None;
        let mut events = Vec::new();
        for field in s.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| bad("missing '='"))?;
            match key {
                "start" => start = Some(value.parse::<usize>().map_err(|_| bad("bad start"))?),
                "end" => end = Some(value.parse::<usize>().map_err(|_| bad("bad end"))?),
                "events" => events = parse_events(value).ok_or_else(|| bad("bad events"))?,
                _ => return Err(bad("unknown field")),
            }
        }
        let start = start.ok_or_else(|| bad("missing start"))?;
        let end = end.ok_or_else(|| bad("missing end"))?;
        ArcData::new(punctures, start, end, events)
    }
}

fn parse_events(s: &str) -> Option<Vec<Event>> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(')?;
        let close = body.find(')')?;
        let (k, side) = body[..close].split_once(',')?;
        let side = match side.trim() {
            "O" => Side::Over,
            "U" => Side::Under,
            _ => return None,
        };
        out.push(Event { puncture: k.trim().parse().ok()?, side });
        rest = &body[close + 1..];
    }
    Some(out)
}

impl fmt::Display for ArcData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start={} end={} events=", self.start, self.end)?;
        for e in &self.events {
            write!(f, "({},{})", e.puncture, e.side.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Side {
    type Err = MapClassError;

    fn from_str(s: &str) -> Result<Side, MapClassError> {
        match s {
            "O" => Ok(Side::Over),
            "U" => Ok(Side::Under),
            _ => Err(MapClassError::Parse(format!("bad side {s:?}"))),
        }
    }
}
