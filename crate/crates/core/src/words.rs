//! Words in the free group `F_r` on positional generators `x1..xr`.
//!
//! Grammar accepted by [`Word::parse`]:
//!
//! ```text
//! word    := "1" | product
//! product := power ( "*"? power )*
//! power   := atom ( "^" integer )?
//! atom    := "x" digits | "(" product ")" | "[" product "," product "]" | "1"
//! ```
//!
//! Whitespace between tokens is ignored. The commutator convention is
//! `[a,b] = a^-1 b^-1 a b`. Words are freely reduced eagerly and immutable.

use std::fmt;

use thiserror::Error;

use crate::groups::FiniteGroup;

/// Longest word that exponentiation of a compound subword may produce.
pub const MAX_EXPANDED_LETTERS: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("variable x{var} at position {pos} exceeds rank {rank}")]
    VariableOutOfRange { var: u64, rank: usize, pos: usize },
    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,
    #[error("word would expand beyond {MAX_EXPANDED_LETTERS} letters")]
    TooLong,
    #[error("rank must be positive")]
    ZeroRank,
    #[error("word has rank {expected} but {got} images were supplied")]
    RankMismatch { expected: usize, got: usize },
    #[error("image {index} is not an element of the group")]
    NotInGroup { index: usize },
    #[error("letter refers to variable index {var} but rank is {rank}")]
    BadLetter { var: usize, rank: usize },
}

/// One syllable `x_{var+1}^{exp}`; `var` is zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub var: usize,
    pub exp: i64,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(F_{}: {})", self.rank, self)
    }
}

/// Canonical form: `1` for the trivial word, otherwise syllables joined by
/// `*` with exponent `1` omitted, e.g. `x1^-1*x2^-1*x1*x2`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{}", l.var + 1)?;
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

/// Appends `letter` to a freely reduced stack of letters.
fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) -> Result<(), WordError> {
    if letter.exp == 0 {
        return Ok(());
    }
    match stack.last_mut() {
        Some(top) if top.var == letter.var => {
            let exp = top.exp.checked_add(letter.exp).ok_or(WordError::ExponentOverflow)?;
            if exp == 0 {
                stack.pop();
            } else {
                top.exp = exp;
            }
        }
        _ => stack.push(letter),
    }
    Ok(())
}

impl Word {
    pub fn identity(rank: usize) -> Result<Word, WordError> {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        Ok(Word { rank, letters: Vec::new() })
    }

    /// Builds the freely reduced word from arbitrary syllables.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word, WordError> {
        let mut w = Word::identity(rank)?;
        for l in letters {
            if l.var >= rank {
                return Err(WordError::BadLetter { var: l.var, rank });
            }
            push_reduced(&mut w.letters, l)?;
        }
        Ok(w)
    }

    /// `x_{var+1}^exp` in `F_rank`.
    pub fn generator_power(rank: usize, var: usize, exp: i64) -> Result<Word, WordError> {
        Word::new(rank, [Letter { var, exp }])
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word, WordError> {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut p = Parser { src: text.as_bytes(), pos: 0, rank };
        let w = p.product()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Parses in the smallest rank covering every variable that occurs
    /// (rank 1 for the trivial word).
    pub fn parse_minimal(text: &str) -> Result<Word, WordError> {
        let w = Word::parse(text, usize::MAX)?;
        let rank = w.letters.iter().map(|l| l.var + 1).max().unwrap_or(1);
        Ok(Word { rank, letters: w.letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    /// If the word is a single syllable `x_i^e`, returns `(i, e)`.
    pub fn as_power(&self) -> Option<(usize, i64)> {
        match self.letters.as_slice() {
            [l] => Some((l.var, l.exp)),
            _ => None,
        }
    }

    /// Product `self · other`; ranks must agree (the larger one is kept).
    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l)?;
        }
        Ok(Word { rank: self.rank.max(other.rank), letters })
    }

    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| Letter { var: l.var, exp: -l.exp }).collect();
        Word { rank: self.rank, letters }
    }

    pub fn pow(&self, n: i64) -> Result<Word, WordError> {
        if let Some((var, e)) = self.as_power() {
            let exp = e.checked_mul(n).ok_or(WordError::ExponentOverflow)?;
            return Word::new(self.rank, [Letter { var, exp }]);
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let reps = n.unsigned_abs();
        if base.letters.len() as u128 * reps as u128 > MAX_EXPANDED_LETTERS as u128 {
            return Err(WordError::TooLong);
        }
        let mut out = Word { rank: self.rank, letters: Vec::new() };
        for _ in 0..reps {
            out = out.concat(&base)?;
        }
        Ok(out)
    }

    /// `[a,b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word, WordError> {
        a.inverse().concat(&b.inverse())?.concat(a)?.concat(b)
    }

    /// The word over `F_rank` with every variable index shifted by `offset`.
    fn shifted(&self, offset: usize, rank: usize) -> Word {
        let letters = self.letters.iter().map(|l| Letter { var: l.var + offset, exp: l.exp }).collect();
        Word { rank, letters }
    }

    /// The composite `w∘v` over `F_{m·n}` (m = rank of `self`, n = rank of
    /// `v`): variable `x_i` of `self` is replaced by a copy of `v` on the
    /// block of variables `x_{(i-1)n+1} … x_{in}`.
    pub fn compose(&self, v: &Word) -> Result<Word, WordError> {
        let n = v.rank;
        let rank = self.rank.checked_mul(n).ok_or(WordError::ExponentOverflow)?;
        let mut out = Word { rank, letters: Vec::new() };
        for l in &self.letters {
            let block = v.shifted(l.var * n, rank).pow(l.exp)?;
            out = out.concat(&block)?;
        }
        Ok(out)
    }

    /// `w(g_1, …, g_r)` in `group`, validating rank and membership.
    pub fn evaluate<G: FiniteGroup>(&self, images: &[G::Element], group: &G) -> Result<G::Element, WordError> {
        if images.len() != self.rank {
            return Err(WordError::RankMismatch { expected: self.rank, got: images.len() });
        }
        if let Some(index) = images.iter().position(|g| !group.contains(g)) {
            return Err(WordError::NotInGroup { index });
        }
        Ok(self.eval_unchecked(images, group))
    }

    /// Left-to-right evaluation without validation; for inner loops.
    pub fn eval_unchecked<G: FiniteGroup>(&self, images: &[G::Element], group: &G) -> G::Element {
        let mut acc = group.identity();
        for l in &self.letters {
            let factor = group.pow(&images[l.var], l.exp);
            acc = group.mul(&acc, &factor);
        }
        acc
    }

    /// Whether `w(images) = 1`.
    pub fn is_satisfied_by<G: FiniteGroup>(&self, images: &[G::Element], group: &G) -> bool {
        self.eval_unchecked(images, group) == group.identity()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn product(&mut self) -> Result<Word, WordError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.concat(&self.power()?)?;
                }
                Some(b'x' | b'(' | b'[' | b'1') => acc = acc.concat(&self.power()?)?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Word, WordError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(self.error("expected variable index after 'x'"));
                }
                let var: u64 = digits.parse().map_err(|_| self.error("variable index too large"))?;
                if var == 0 || var > self.rank as u64 {
                    return Err(WordError::VariableOutOfRange { var, rank: self.rank, pos: start });
                }
                Word::generator_power(self.rank, var as usize - 1, 1)
            }
            Some(b'1') => {
                self.pos += 1;
                Word::identity(self.rank)
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(b',')?;
                let b = self.product()?;
                self.expect(b']')?;
                Word::commutator(&a, &b)
            }
            Some(_) => Err(self.error("expected a variable, '1', '(' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an integer exponent"));
        }
        let text = if negative { format!("-{digits}") } else { digits };
        text.parse().map_err(|_| WordError::ExponentOverflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{MatrixGroup, SemidirectGroup};

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w("x1*x2^-1", 2).to_string(), "x1*x2^-1");
        assert!(w("x1*x1^-1", 1).is_trivial());
        assert_eq!(w("[x1,x2]", 2).to_string(), "x1^-1*x2^-1*x1*x2");
        assert_eq!(w("x1 x1 x2", 2).to_string(), "x1^2*x2");
        assert_eq!(w("(x1x2)^2", 2).to_string(), "x1*x2*x1*x2");
        assert_eq!(w("(x1*x2)^-1", 2).to_string(), "x2^-1*x1^-1");
        assert_eq!(w("x1^3*x1^-3", 1).to_string(), "1");
        assert_eq!(w("1", 3).to_string(), "1");
        assert_eq!(w("[[x1,x2],x1]", 2).to_string(), "x2^-1*x1^-1*x2*x1^-1*x2^-1*x1*x2*x1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("x3", 2), Err(WordError::VariableOutOfRange { var: 3, pos: 0, .. })));
        assert!(matches!(Word::parse("x1*", 2), Err(WordError::Syntax { pos: 3, .. })));
        assert!(matches!(Word::parse("x1^", 2), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("[x1 x2]", 2), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("x0", 2), Err(WordError::VariableOutOfRange { .. })));
        assert!(matches!(Word::parse("x1)", 2), Err(WordError::Syntax { pos: 2, .. })));
        assert!(matches!(Word::parse("x1", 0), Err(WordError::ZeroRank)));
        assert!(matches!(
            Word::parse("x1^9223372036854775807*x1", 1),
            Err(WordError::ExponentOverflow)
        ));
        assert!(matches!(Word::parse("(x1x2)^9999999", 2), Err(WordError::TooLong)));
    }

    #[test]
    fn format_examples() {
        assert_eq!(Word::identity(2).unwrap().to_string(), "1");
        let c = Word::new(2, [Letter { var: 0, exp: 1 }, Letter { var: 1, exp: -1 }]).unwrap();
        assert_eq!(c.to_string(), "x1*x2^-1");
    }

    #[test]
    fn compose_examples() {
        assert_eq!(w("x1^2", 1).compose(&w("x1^2", 1)).unwrap(), w("x1^4", 1));
        let trivial = Word::identity(2).unwrap();
        let c = trivial.compose(&w("x1*x2^3", 2)).unwrap();
        assert!(c.is_trivial());
        assert_eq!(c.rank(), 4);
        let c = w("[x1,x2]", 2).compose(&w("x1*x2", 2)).unwrap();
        assert_eq!(c, w("[x1*x2,x3*x4]", 4));
        assert_eq!(c.to_string(), "x2^-1*x1^-1*x4^-1*x3^-1*x1*x2*x3*x4");
    }

    #[test]
    fn evaluate_in_cyclic_group() {
        // Z/3 as (Z/3)^1 ⋊ trivial
        let g = SemidirectGroup::new(&[vec![1]], 3, 1, 1).unwrap();
        let x = g.element_at(1);
        let sq = w("x1^2", 1).evaluate(std::slice::from_ref(&x), &g).unwrap();
        assert_eq!(sq, g.mul(&x, &x));
        assert_eq!(sq, g.element_at(2));
    }

    #[test]
    fn commutator_of_commuting_images_is_trivial() {
        let g = SemidirectGroup::new(&[vec![1, 0], vec![0, 1]], 2, 2, 1).unwrap();
        let c = w("[x1,x2]", 2);
        for i in 0..g.order() {
            for j in 0..g.order() {
                let v = c.evaluate(&[g.element_at(i), g.element_at(j)], &g).unwrap();
                assert_eq!(v, g.identity());
            }
        }
    }

    #[test]
    fn commutator_of_transpositions_in_s3() {
        let s3 = MatrixGroup::symmetric3();
        // (1 2) and (2 3) as permutation matrices, columns are images of basis vectors.
        let a = s3.element_from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let b = s3.element_from_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]).unwrap();
        let got = w("[x1,x2]", 2).evaluate(&[a.clone(), b.clone()], &s3).unwrap();
        // a and b are involutions, so [a,b] = a b a b; multiply out by hand.
        let ab = s3.element_from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(s3.mul(&a, &b), ab);
        let abab = s3.element_from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(got, abab);
        assert_ne!(got, s3.identity());
        assert_eq!(crate::groups::element_order(&s3, &got), 3);
    }

    #[test]
    fn evaluate_errors() {
        let g = SemidirectGroup::new(&[vec![1]], 3, 1, 1).unwrap();
        let err = w("x1*x2", 2).evaluate(&[g.identity()], &g).unwrap_err();
        assert_eq!(err, WordError::RankMismatch { expected: 2, got: 1 });
        let bogus = SemidirectGroup::new(&[vec![1]], 3, 2, 1).unwrap().element_at(5);
        assert_eq!(w("x1", 1).evaluate(&[bogus], &g).unwrap_err(), WordError::NotInGroup { index: 0 });
    }
}
