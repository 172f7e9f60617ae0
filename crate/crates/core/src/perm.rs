//! Permutations of `{1..n}`, their cycle structure, and cycle-notation I/O.
//!
//! Points are 1-based everywhere in the public API. The image array is kept
//! 0-based internally; crate-internal callers use the `*0` accessors.
//!
//! Products follow the "right factor first" convention:
//! `p.compose(&q)` maps `i` to `p(q(i))`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// A bijection on `{1..n}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

/// Disjoint-cycle form: each cycle starts at its minimum, cycles are sorted by
/// minimum, and fixed points are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleForm {
    pub cycles: Vec<Vec<usize>>,
}

impl Permutation {
    /// The identity on `degree` points.
    ///
    /// Panics if `degree == 0`.
    pub fn identity(degree: usize) -> Self {
        assert!(degree >= 1, "permutation degree must be at least 1");
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its 1-based image list, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        if degree == 0 {
            return Err(Error::Invalid("permutation degree must be at least 1".into()));
        }
        let mut seen = vec![false; degree];
        let mut zero_based = Vec::with_capacity(degree);
        for &img in images {
            if img == 0 || img > degree {
                return Err(Error::PointOutOfRange { point: img, degree });
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(Error::Invalid(format!("image {img} appears twice")));
            }
            zero_based.push(img - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    pub(crate) fn from_images0(images: Vec<usize>) -> Self {
        debug_assert!(is_bijection0(&images));
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles of 1-based points.
    pub fn from_cycles(form: &CycleForm, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("permutation degree must be at least 1".into()));
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in &form.cycles {
            for &pt in cycle {
                if pt == 0 || pt > degree {
                    return Err(Error::PointOutOfRange { point: pt, degree });
                }
                if std::mem::replace(&mut used[pt - 1], true) {
                    return Err(Error::Invalid(format!("point {pt} appears in two cycles")));
                }
            }
            for (k, &pt) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[pt - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based `point`.
    ///
    /// Panics if `point` is outside `1..=degree`.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] + 1
    }

    /// The 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    #[inline]
    pub(crate) fn img0(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `p.compose(q)` is the permutation `i ↦ p(q(i))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(self.mul(q))
    }

    /// Unchecked `compose`; degrees must already agree.
    #[inline]
    pub(crate) fn mul(&self, q: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), q.degree());
        Permutation {
            images: q.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fix_count(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i == x).count()
    }

    pub fn move_count(&self) -> usize {
        self.degree() - self.fix_count()
    }

    /// Points moved by this permutation, ascending and 1-based.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i != x)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub(crate) fn first_moved0(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i != x)
    }

    pub fn cycles(&self) -> CycleForm {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        CycleForm { cycles }
    }

    /// Order of the permutation: the lcm of its cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .cycles
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }

    /// `self` raised to a non-negative power, computed cycle by cycle.
    pub fn pow(&self, exponent: &BigUint) -> Permutation {
        let mut images: Vec<usize> = (0..self.degree()).collect();
        for cycle in self.cycles().cycles {
            let len = cycle.len();
            let shift = (exponent % len)
                .to_usize()
                .expect("remainder is below the cycle length");
            for (k, &pt) in cycle.iter().enumerate() {
                images[pt - 1] = cycle[(k + shift) % len] - 1;
            }
        }
        Permutation { images }
    }

    /// Parses cycle notation such as `"(1 2 3)(4 5)"` or `"(1,2)"`.
    ///
    /// `"()"` and the empty string denote the identity. Cycles must be
    /// disjoint and have at least two points.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        if degree == 0 {
            return Err(Error::Invalid("permutation degree must be at least 1".into()));
        }
        let tokens = tokenize(text)?;
        if tokens.is_empty() || tokens == [Token::Open, Token::Close] {
            return Ok(Permutation::identity(degree));
        }

        let mut cycles = Vec::new();
        let mut used = vec![false; degree];
        let mut iter = tokens.into_iter().peekable();
        while let Some(tok) = iter.next() {
            if tok != Token::Open {
                return Err(Error::parse(tok.to_string(), "expected `(`"));
            }
            let mut cycle = Vec::new();
            let mut saw_comma = false;
            loop {
                let tok = iter
                    .next()
                    .ok_or_else(|| Error::parse(text.trim(), "unclosed `(`"))?;
                match tok {
                    Token::Point(raw, value) => {
                        if value == 0 || value > degree {
                            return Err(Error::parse(raw, format!("point out of range 1..={degree}")));
                        }
                        if std::mem::replace(&mut used[value - 1], true) {
                            return Err(Error::parse(raw, "repeated point"));
                        }
                        cycle.push(value);
                        saw_comma = false;
                    }
                    Token::Comma => {
                        if cycle.is_empty() || saw_comma {
                            return Err(Error::parse(",", "misplaced comma"));
                        }
                        saw_comma = true;
                    }
                    Token::Close => {
                        if saw_comma {
                            return Err(Error::parse(",", "misplaced comma"));
                        }
                        if cycle.is_empty() {
                            return Err(Error::parse("()", "empty cycle"));
                        }
                        if cycle.len() == 1 {
                            return Err(Error::parse(
                                format!("({})", cycle[0]),
                                "cycle needs at least two points",
                            ));
                        }
                        break;
                    }
                    Token::Open => return Err(Error::parse("(", "nested `(`")),
                }
            }
            cycles.push(cycle);
        }
        Permutation::from_cycles(&CycleForm { cycles }, degree)
    }

    /// Minimal-first, sorted, space-separated cycle notation; `"()"` for the
    /// identity.
    pub fn format_cycles(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = self.cycles();
        if form.cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in &form.cycles {
            f.write_str("(")?;
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{pt}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}]", self, self.degree())
    }
}

fn is_bijection0(images: &[usize]) -> bool {
    let mut seen = vec![false; images.len()];
    images
        .iter()
        .all(|&x| x < images.len() && !std::mem::replace(&mut seen[x], true))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Comma,
    Point(String, usize),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Open => f.write_str("("),
            Token::Close => f.write_str(")"),
            Token::Comma => f.write_str(","),
            Token::Point(raw, _) => f.write_str(raw),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            ',' => {
                chars.next();
                tokens.push(Token::Comma);
            }
            _ => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ',') {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                let raw = &text[start..end];
                let value = raw
                    .parse::<usize>()
                    .map_err(|_| Error::parse(raw, "not a point"))?;
                tokens.push(Token::Point(raw.to_string(), value));
            }
        }
    }
    Ok(tokens)
}
