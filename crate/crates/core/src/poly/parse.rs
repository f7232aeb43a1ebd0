use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::ring::Ring;

/// Failure while reading a polynomial; `offset` is a byte offset into the
/// parsed string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

impl std::error::Error for PolyParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> PolyParseError {
        PolyParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }
}

impl Polynomial {
    /// Reads `coef*x^e*y^f + ...` syntax. Integer literals are reduced mod p,
    /// and any product of integers and powers of variables is accepted as a
    /// term.
    pub fn parse(ring: &Ring, text: &str) -> Result<Polynomial, PolyParseError> {
        let field = ring.field();
        let p = ring.characteristic() as u64;
        let mut cur = Cursor {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut terms: Vec<(u32, Monomial)> = Vec::new();
        cur.skip_ws();
        if cur.peek().is_none() {
            return Err(cur.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            cur.skip_ws();
            let mut negative = false;
            match cur.peek() {
                Some(b'+') => cur.pos += 1,
                Some(b'-') => {
                    negative = true;
                    cur.pos += 1
                }
                _ if first => {}
                Some(_) => return Err(cur.err("expected '+' or '-'")),
                None => break,
            }
            first = false;
            let mut coef: u32 = 1;
            let mut exps = vec![0u16; ring.nvars()];
            loop {
                cur.skip_ws();
                match cur.peek() {
                    Some(c) if c.is_ascii_digit() => {
                        let v = cur
                            .digits()
                            .iter()
                            .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                        coef = field.mul(coef, v as u32);
                    }
                    Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                        let start = cur.pos;
                        while cur
                            .peek()
                            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                        {
                            cur.pos += 1;
                        }
                        let name = &text[start..cur.pos];
                        let idx = ring.var_index(name).ok_or(PolyParseError {
                            offset: start,
                            message: format!("unknown variable {name:?}"),
                        })?;
                        cur.skip_ws();
                        let mut e: u32 = 1;
                        if cur.peek() == Some(b'^') {
                            cur.pos += 1;
                            cur.skip_ws();
                            let at = cur.pos;
                            let ds = cur.digits();
                            if ds.is_empty() {
                                return Err(cur.err("expected exponent"));
                            }
                            e = std::str::from_utf8(ds)
                                .ok()
                                .and_then(|s| s.parse::<u32>().ok())
                                .filter(|&e| e <= u16::MAX as u32)
                                .ok_or(PolyParseError {
                                    offset: at,
                                    message: "exponent out of range".into(),
                                })?;
                        }
                        let total = exps[idx] as u32 + e;
                        if total > u16::MAX as u32 {
                            return Err(cur.err("exponent out of range"));
                        }
                        exps[idx] = total as u16;
                    }
                    _ => return Err(cur.err("expected a number or a variable")),
                }
                cur.skip_ws();
                if cur.peek() == Some(b'*') {
                    cur.pos += 1;
                } else {
                    break;
                }
            }
            if negative {
                coef = field.neg(coef);
            }
            terms.push((coef, Monomial::new(exps)));
        }
        Ok(Polynomial::from_terms(ring, terms))
    }
}
