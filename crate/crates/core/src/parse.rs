use std::fmt;

use num_bigint::BigInt;

/// A syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Byte cursor shared by the small hand-written grammars in this crate.
/// Whitespace is insignificant everywhere, so every `peek` skips it first.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, want: char) -> Result<(), ParseError> {
        if self.eat(want) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{want}'")))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn error(&mut self, message: impl Into<String>) -> ParseError {
        self.skip_ws();
        ParseError::new(self.pos, message)
    }

    /// Unsigned decimal digits, whitespace allowed only before the first digit.
    pub fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(start, "expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    pub fn big_uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<BigInt>()
            .map_err(|_| ParseError::new(start, "invalid integer"))
    }

    pub fn small_uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<u32>()
            .map_err(|_| ParseError::new(start, "integer out of range"))
    }
}
