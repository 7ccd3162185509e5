use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} at byte {pos} in `{input}`")]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

pub(crate) struct Cursor<'a> {
    pub src: &'a str,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            input: self.src.to_string(),
            pos: self.pos,
            msg: msg.into(),
        }
    }

    pub fn ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    pub fn rest(&mut self) -> &'a str {
        self.ws();
        &self.src[self.pos..]
    }

    pub fn peek(&mut self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.rest().is_empty()
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected input"))
        }
    }

    /// A run of ASCII digits.
    pub fn digits(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let n = rest.bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return None;
        }
        self.pos += n;
        Some(&rest[..n])
    }

    pub fn uint(&mut self) -> Result<u32, ParseError> {
        let d = self
            .digits()
            .ok_or_else(|| self.err("expected an integer"))?;
        d.parse().map_err(|_| self.err("integer too large"))
    }

    /// The text up to the `)` matching an already consumed `(`.
    pub fn balanced(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        let mut depth = 1;
        for (i, ch) in self.src[start..].char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos = start + i + 1;
                        return Ok(&self.src[start..start + i]);
                    }
                }
                _ => {}
            }
        }
        Err(self.err("unbalanced parentheses"))
    }
}
