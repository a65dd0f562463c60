//! Spatial predicates: intervals, boxes and their boolean combinations.
//!
//! Text syntax, used by scenario files:
//!
//! ```text
//! all                       whole plane
//! (a,b)  [a,b]  (a,b]  [a,b)   interval in the first coordinate
//! (a,b)x[c,d]               box (product of two intervals)
//! R | S    R & S    !R       union, intersection, complement
//! {R}                       grouping
//! ```

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Slack applied to interval endpoints so that nodes sitting on an endpoint
/// are classified by the open/closed flag and not by rounding noise.
const EDGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_closed {
            t >= self.lo - EDGE_TOL
        } else {
            t > self.lo + EDGE_TOL
        };
        let below = if self.hi_closed {
            t <= self.hi + EDGE_TOL
        } else {
            t < self.hi - EDGE_TOL
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{:?},{:?}{r}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    All,
    Interval(Interval),
    Box(Interval, Interval),
    Union(Vec<Region>),
    Intersection(Vec<Region>),
    Complement(Box<Region>),
}

impl Region {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Region::Interval(Interval::open(lo, hi))
    }

    pub fn closed_interval(lo: f64, hi: f64) -> Self {
        Region::Interval(Interval::closed(lo, hi))
    }

    pub fn open_box(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Region::Box(Interval::open(lo[0], hi[0]), Interval::open(lo[1], hi[1]))
    }

    pub fn union(parts: Vec<Region>) -> Self {
        Region::Union(parts)
    }

    pub fn and(self, other: Region) -> Self {
        match (self, other) {
            (Region::All, r) | (r, Region::All) => r,
            (a, b) => Region::Intersection(alloc::vec![a, b]),
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Region::All => true,
            Region::Interval(i) => i.contains(p[0]),
            Region::Box(a, b) => a.contains(p[0]) && b.contains(p[1]),
            Region::Union(rs) => rs.iter().any(|r| r.contains(p)),
            Region::Intersection(rs) => rs.iter().all(|r| r.contains(p)),
            Region::Complement(r) => !r.contains(p),
        }
    }

    pub fn parse(src: &str) -> Result<Region, RegionParseError> {
        let mut p = RegionParser {
            s: src.as_bytes(),
            pos: 0,
        };
        let r = p.union()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(r)
    }
}

impl core::ops::Not for Region {
    type Output = Region;

    fn not(self) -> Region {
        Region::Complement(Box::new(self))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::All => write!(f, "all"),
            Region::Interval(i) => write!(f, "{i}"),
            Region::Box(a, b) => write!(f, "{a}x{b}"),
            Region::Union(rs) => join(f, rs, " | "),
            Region::Intersection(rs) => join(f, rs, " & "),
            Region::Complement(r) => write!(f, "!{{{r}}}"),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, rs: &[Region], sep: &str) -> fmt::Result {
    write!(f, "{{")?;
    for (k, r) in rs.iter().enumerate() {
        if k > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{r}")?;
    }
    write!(f, "}}")
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("region syntax error at column {column}: {message}")]
pub struct RegionParseError {
    pub column: usize,
    pub message: String,
}

struct RegionParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl RegionParser<'_> {
    fn error(&self, msg: &str) -> RegionParseError {
        RegionParseError {
            column: self.pos + 1,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn union(&mut self) -> Result<Region, RegionParseError> {
        let mut parts = alloc::vec![self.intersection()?];
        while self.eat(b'|') {
            parts.push(self.intersection()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Region::Union(parts)
        })
    }

    fn intersection(&mut self) -> Result<Region, RegionParseError> {
        let mut parts = alloc::vec![self.unary()?];
        while self.eat(b'&') {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Region::Intersection(parts)
        })
    }

    fn unary(&mut self) -> Result<Region, RegionParseError> {
        if self.eat(b'!') {
            return Ok(!self.unary()?);
        }
        if self.eat(b'{') {
            let r = self.union()?;
            if !self.eat(b'}') {
                return Err(self.error("expected '}'"));
            }
            return Ok(r);
        }
        match self.peek() {
            Some(b'(') | Some(b'[') => {
                let first = self.interval()?;
                if self.eat(b'x') {
                    let second = self.interval()?;
                    Ok(Region::Box(first, second))
                } else {
                    Ok(Region::Interval(first))
                }
            }
            Some(b'a') => {
                if self.s[self.pos..].starts_with(b"all") {
                    self.pos += 3;
                    Ok(Region::All)
                } else {
                    Err(self.error("unknown keyword"))
                }
            }
            _ => Err(self.error("expected a region")),
        }
    }

    fn interval(&mut self) -> Result<Interval, RegionParseError> {
        let lo_closed = match self.peek() {
            Some(b'[') => true,
            Some(b'(') => false,
            _ => return Err(self.error("expected '(' or '['")),
        };
        self.pos += 1;
        let lo = self.number()?;
        if !self.eat(b',') {
            return Err(self.error("expected ','"));
        }
        let hi = self.number()?;
        let hi_closed = match self.peek() {
            Some(b']') => true,
            Some(b')') => false,
            _ => return Err(self.error("expected ')' or ']'")),
        };
        self.pos += 1;
        if !(lo < hi) {
            return Err(self.error("empty interval"));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    fn number(&mut self) -> Result<f64, RegionParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && matches!(
                self.s[self.pos],
                b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E'
            )
        {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        text.parse::<f64>().map_err(|_| RegionParseError {
            column: start + 1,
            message: alloc::format!("bad number '{text}'"),
        })
    }
}
