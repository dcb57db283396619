//! Text formats: words, elements, HNN elements, vectors, matrices and
//! endomorphism documents.
//!
//! ```text
//! word     := "1" | factor ("*"? factor)*
//! factor   := "x" N ("^" Z)?
//! element  := (factor | "t^(" Z,* ")" | "t" N ("^" Z)?)*
//! hnn      := (element | "x" ("^" Z)?)*
//! ```
//!
//! `t`-letters commute with everything, so they may appear anywhere.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::endo::{Endomorphism, TypeI, MAX_WORD_LEN};
use crate::error::{Error, Result};
use crate::fatf::{FatfElement, Signature};
use crate::hnn::{HnnElement, HnnGroup};
use crate::linalg::Matrix;
use crate::words::{Letter, Word};
use crate::{Int, IntMatrix, IntVector};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { s: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.s.get(self.pos + off).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn integer(&mut self) -> Result<Int> {
        self.skip_ws();
        let neg = if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            if self.s.get(self.pos) == Some(&b'+') {
                self.pos += 1;
            }
            false
        };
        let x: Int = self.digits()?.parse().unwrap();
        Ok(if neg { -x } else { x })
    }

    fn small(&mut self) -> Result<i64> {
        let at = self.pos;
        let x = self.integer()?;
        match x.to_i64() {
            Some(v) if v.unsigned_abs() <= MAX_WORD_LEN as u64 => Ok(v),
            _ => Err(Error::Parse { pos: at, msg: format!("exponent {x} too large") }),
        }
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        self.digits()?
            .parse()
            .map_err(|_| Error::Parse { pos: at, msg: "index too large".into() })
    }

    fn optional_power(&mut self) -> Result<i64> {
        if self.eat(b'^') {
            self.small()
        } else {
            Ok(1)
        }
    }

    /// `(a,b,…)` or `[a,b,…]`.
    fn vector(&mut self) -> Result<IntVector> {
        let close = match self.peek() {
            Some(b'(') => b')',
            Some(b'[') => b']',
            _ => return self.err("expected '(' or '['"),
        };
        self.pos += 1;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.integer()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }
}

/// Accumulates a base-group element while parsing.
struct ElementBuilder {
    sig: Signature,
    letters: Vec<Letter>,
    ab: IntVector,
    touched: bool,
}

impl ElementBuilder {
    fn new(sig: Signature) -> Self {
        ElementBuilder { sig, letters: Vec::new(), ab: vec![Int::zero(); sig.m], touched: false }
    }

    /// Consumes one factor if the cursor is at one. Returns false otherwise.
    fn factor(&mut self, c: &mut Cursor) -> Result<bool> {
        let at = c.pos;
        match c.peek() {
            Some(b'1') if !matches!(c.peek_at(1), Some(d) if d.is_ascii_digit()) => {
                c.pos += 1;
            }
            Some(b'x') if matches!(c.peek_at(1), Some(d) if d.is_ascii_digit()) => {
                c.pos += 1;
                let i = c.index()?;
                if i == 0 || i > self.sig.n {
                    return Err(Error::BadGenerator { index: i as i64, rank: self.sig.n });
                }
                let e = c.optional_power()?;
                let l = if e < 0 { -(i as Letter) } else { i as Letter };
                if self.letters.len() + e.unsigned_abs() as usize > MAX_WORD_LEN {
                    return Err(Error::Parse { pos: at, msg: "word too long".into() });
                }
                self.letters.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
            }
            Some(b't') if c.peek_at(1) == Some(b'^') => {
                c.pos += 2;
                let v = c.vector()?;
                if v.len() != self.sig.m {
                    return Err(Error::SignatureMismatch {
                        expected_n: self.sig.n,
                        expected_m: self.sig.m,
                        found_n: self.sig.n,
                        found_m: v.len(),
                    });
                }
                for (a, b) in self.ab.iter_mut().zip(v) {
                    *a += b;
                }
            }
            Some(b't') if matches!(c.peek_at(1), Some(d) if d.is_ascii_digit()) => {
                c.pos += 1;
                let j = c.index()?;
                if j == 0 || j > self.sig.m {
                    return Err(Error::Parse { pos: at, msg: format!("t{j} out of range for m = {}", self.sig.m) });
                }
                let e = c.optional_power()?;
                self.ab[j - 1] += Int::from(e);
            }
            _ => return Ok(false),
        }
        self.touched = true;
        c.eat(b'*');
        Ok(true)
    }

    fn finish(self) -> FatfElement {
        let free = Word::new(self.sig.n, self.letters).expect("letters checked");
        FatfElement::new(free, self.ab)
    }
}

fn finish_input(c: &mut Cursor) -> Result<()> {
    if c.at_end() {
        Ok(())
    } else {
        c.err("unexpected input")
    }
}

pub fn parse_word(text: &str, n: usize) -> Result<Word> {
    let sig = Signature::new(n, 0);
    let mut c = Cursor::new(text);
    let mut b = ElementBuilder::new(sig);
    while b.factor(&mut c)? {}
    if !b.touched {
        return c.err("expected a word");
    }
    finish_input(&mut c)?;
    Ok(b.finish().free().clone())
}

pub fn parse_element(text: &str, sig: Signature) -> Result<FatfElement> {
    let mut c = Cursor::new(text);
    let mut b = ElementBuilder::new(sig);
    while b.factor(&mut c)? {}
    if !b.touched {
        return c.err("expected an element");
    }
    finish_input(&mut c)?;
    Ok(b.finish())
}

/// Products of base elements and powers of the stable letter `x`, multiplied
/// out in `group`.
pub fn parse_hnn(text: &str, group: &HnnGroup) -> Result<HnnElement> {
    let sig = group.signature();
    let mut c = Cursor::new(text);
    let mut acc = group.identity();
    let mut any = false;
    loop {
        let mut b = ElementBuilder::new(sig);
        while b.factor(&mut c)? {}
        if b.touched {
            acc = group.mul(&acc, &group.base(b.finish())?)?;
            any = true;
        }
        let stable = c.peek() == Some(b'x') && !matches!(c.peek_at(1), Some(d) if d.is_ascii_digit());
        if !stable {
            break;
        }
        c.pos += 1;
        let k = c.optional_power()?;
        c.eat(b'*');
        acc = group.mul(&acc, &group.stable(k))?;
        any = true;
    }
    if !any {
        return c.err("expected an HNN element");
    }
    finish_input(&mut c)?;
    Ok(acc)
}

pub fn parse_vector(text: &str) -> Result<IntVector> {
    let mut c = Cursor::new(text);
    let v = c.vector()?;
    finish_input(&mut c)?;
    Ok(v)
}

/// Row-major nested lists. `cols` fixes the width of a matrix with no rows.
pub fn parse_matrix(text: &str, cols: Option<usize>) -> Result<IntMatrix> {
    let mut c = Cursor::new(text);
    c.expect(b'[')?;
    let mut rows = Vec::new();
    if !c.eat(b']') {
        loop {
            rows.push(c.vector()?);
            if c.eat(b']') {
                break;
            }
            c.expect(b',')?;
        }
    }
    finish_input(&mut c)?;
    let width = rows.first().map(Vec::len).or(cols).unwrap_or(0);
    Matrix::from_rows(rows, width)
}

fn field<'v>(doc: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    doc.get(key).ok_or_else(|| Error::Precondition(format!("missing field '{key}'")))
}

fn json_int(v: &Value) -> Result<Int> {
    match v {
        Value::Number(x) => x
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| Error::Precondition(format!("not an integer: {x}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Precondition(format!("not an integer: {s}"))),
        _ => Err(Error::Precondition(format!("not an integer: {v}"))),
    }
}

fn json_usize(v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Precondition(format!("not a size: {v}")))
}

fn json_vector(v: &Value) -> Result<IntVector> {
    match v {
        Value::Array(xs) => xs.iter().map(json_int).collect(),
        Value::String(s) => parse_vector(s),
        _ => Err(Error::Precondition(format!("not a vector: {v}"))),
    }
}

fn json_matrix(v: &Value, cols: usize) -> Result<IntMatrix> {
    match v {
        Value::Array(rows) => {
            let rows = rows.iter().map(json_vector).collect::<Result<Vec<_>>>()?;
            Matrix::from_rows(rows, cols)
        }
        Value::String(s) => parse_matrix(s, Some(cols)),
        _ => Err(Error::Precondition(format!("not a matrix: {v}"))),
    }
}

fn json_str(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| Error::Precondition(format!("expected a string, got {v}")))
}

fn json_list(v: &Value) -> Result<&[Value]> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| Error::Precondition(format!("expected a list, got {v}")))
}

/// Reads an endomorphism document. `Q` and `P` default to `I` and `0`.
pub fn parse_endomorphism(text: &str) -> Result<Endomorphism> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
    endomorphism_from_json(&doc)
}

pub fn endomorphism_from_json(doc: &Value) -> Result<Endomorphism> {
    let doc = doc
        .as_object()
        .ok_or_else(|| Error::Precondition("endomorphism document must be an object".into()))?;
    let n = json_usize(field(doc, "n")?)?;
    let m = json_usize(field(doc, "m")?)?;
    let sig = Signature::new(n, m);
    let q = doc.get("Q").map(|v| json_matrix(v, m)).transpose()?.unwrap_or_else(|| Matrix::identity(m));
    let p = doc.get("P").map(|v| json_matrix(v, m)).transpose()?.unwrap_or_else(|| Matrix::zeros(n, m));
    match json_str(field(doc, "type")?)? {
        "I" => {
            let phi = json_list(field(doc, "phi")?)?
                .iter()
                .map(|w| parse_word(json_str(w)?, n))
                .collect::<Result<Vec<_>>>()?;
            TypeI::new(sig, phi, q, p).map(Endomorphism::I)
        }
        "II" => {
            let w = parse_word(json_str(field(doc, "w")?)?, n)?;
            let r = json_vector(field(doc, "r")?)?;
            let s = json_vector(field(doc, "s")?)?;
            Endomorphism::from_type_ii_data(sig, w, r, s, q, p)
        }
        "images" => {
            let elems = |key: &str| -> Result<Vec<FatfElement>> {
                match doc.get(key) {
                    None => Ok(Vec::new()),
                    Some(v) => json_list(v)?.iter().map(|e| parse_element(json_str(e)?, sig)).collect(),
                }
            };
            Endomorphism::classify(sig, &elems("x_images")?, &elems("t_images")?)
        }
        other => Err(Error::Precondition(format!("unknown endomorphism type '{other}'"))),
    }
}

fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn vector_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn matrix_json(a: &IntMatrix) -> Value {
    Value::Array(a.to_rows().iter().map(|r| vector_json(r)).collect())
}

/// Inverse of [`endomorphism_from_json`].
pub fn endomorphism_to_json(phi: &Endomorphism) -> Value {
    let sig = phi.signature();
    match phi {
        Endomorphism::I(f) => json!({
            "type": "I",
            "n": sig.n,
            "m": sig.m,
            "phi": f.phi().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "Q": matrix_json(f.q()),
            "P": matrix_json(f.p()),
        }),
        Endomorphism::II(f) => json!({
            "type": "II",
            "n": sig.n,
            "m": sig.m,
            "w": f.w().to_string(),
            "r": vector_json(f.r()),
            "s": vector_json(f.s()),
            "Q": matrix_json(f.q()),
            "P": matrix_json(f.p()),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_from_i64;

    fn sig(n: usize, m: usize) -> Signature {
        Signature::new(n, m)
    }

    #[test]
    fn words() {
        let w = parse_word("x1*x2^-1*x1^3", 2).unwrap();
        assert_eq!(w.letters(), &[1, -2, 1, 1, 1]);
        assert!(parse_word("1", 2).unwrap().is_identity());
        assert_eq!(parse_word("x1 x1^-1 x2", 2).unwrap().letters(), &[2]);
        assert!(matches!(parse_word("x3", 2), Err(Error::BadGenerator { index: 3, rank: 2 })));
        assert!(parse_word("x1*", 2).is_ok());
        assert!(matches!(parse_word("x1 y", 2), Err(Error::Parse { pos: 3, .. })));
        assert!(parse_word("", 2).is_err());
        assert!(parse_word("x1^99999999999", 2).is_err());
    }

    #[test]
    fn elements() {
        let g = parse_element("x1*x2^-1 t^(2,-3)", sig(2, 2)).unwrap();
        assert_eq!(g, FatfElement::new(Word::new(2, [1, -2]).unwrap(), vec_from_i64(&[2, -3])));
        let g = parse_element("t^(1) x1 t^(1)", sig(2, 1)).unwrap();
        assert_eq!(g, FatfElement::new(Word::generator(2, 1), vec_from_i64(&[2])));
        let g = parse_element("t2^-1 x2 t1", sig(2, 2)).unwrap();
        assert_eq!(g.ab(), &vec_from_i64::<Int>(&[1, -1])[..]);
        assert!(parse_element("x3", sig(2, 1)).is_err());
        assert!(matches!(parse_element("x1 t^(1,2)", sig(2, 1)), Err(Error::SignatureMismatch { found_m: 2, .. })));
        assert!(parse_element("t^()", sig(2, 0)).unwrap().is_identity());
        assert_eq!(parse_element("x2", sig(2, 2)).unwrap().ab(), &vec_from_i64::<Int>(&[0, 0])[..]);
    }

    #[test]
    fn display_reparses() {
        for text in ["x1*x2^-1 t^(2,-3)", "1 t^(0,0)", "x2^5*x1^-2 t^(-1,4)"] {
            let g = parse_element(text, sig(2, 2)).unwrap();
            assert_eq!(parse_element(&g.to_string(), sig(2, 2)).unwrap(), g);
        }
    }

    #[test]
    fn matrices_and_vectors() {
        assert_eq!(parse_matrix("[[1,0],[0,1]]", None).unwrap(), Matrix::identity(2));
        let e = parse_matrix("[]", Some(3)).unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 3));
        let e = parse_matrix("[[],[]]", None).unwrap();
        assert_eq!((e.rows(), e.cols()), (2, 0));
        assert!(parse_matrix("[[1,2],[3]]", None).is_err());
        assert_eq!(parse_vector("(1, -2)").unwrap(), vec_from_i64::<Int>(&[1, -2]));
        assert_eq!(parse_vector("[ ]").unwrap(), Vec::<Int>::new());
        assert!(parse_vector("(1,").is_err());
    }

    #[test]
    fn endomorphism_documents() {
        let doc = r#"{"type":"II","n":2,"m":1,"w":"x1","r":[1],"s":[2,0],"Q":[[1]],"P":[[0],[1]]}"#;
        let phi = parse_endomorphism(doc).unwrap();
        assert!(matches!(phi, Endomorphism::II(_)));
        let back = endomorphism_from_json(&endomorphism_to_json(&phi)).unwrap();
        assert_eq!(back, phi);

        let doc = r#"{"type":"I","n":2,"m":1,"phi":["x2","x1"]}"#;
        let phi = parse_endomorphism(doc).unwrap();
        assert!(phi.is_bijective());
        assert_eq!(endomorphism_from_json(&endomorphism_to_json(&phi)).unwrap(), phi);

        let doc = r#"{"type":"images","n":2,"m":1,"x_images":["x2 t^(1)","x1"],"t_images":["t^(1)"]}"#;
        assert!(parse_endomorphism(doc).unwrap().is_bijective());
        assert!(parse_endomorphism(r#"{"type":"III","n":1,"m":0}"#).is_err());
        assert!(matches!(parse_endomorphism("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn hnn_elements() {
        let phi = parse_endomorphism(r#"{"type":"I","n":2,"m":1,"phi":["x1^2","x2"]}"#).unwrap();
        let h = HnnGroup::new(phi).unwrap();
        let e = parse_hnn("x^2 x1*x2 t^(1) x^-1", &h).unwrap();
        assert_eq!((e.i, e.j), (2, 1));
        assert_eq!(parse_hnn(&e.to_string(), &h).unwrap(), e);
        // x⁻¹·x1²·x = x1⁴, while x·x1²·x⁻¹ = x1
        assert_eq!(parse_hnn("x^-1 x1^2 x", &h).unwrap(), parse_hnn("x1^4", &h).unwrap());
        assert_eq!(parse_hnn("x x1^2 x^-1", &h).unwrap(), parse_hnn("x1", &h).unwrap());
        assert!(h.is_identity(&parse_hnn("x x^-1", &h).unwrap()));
        assert!(parse_hnn("", &h).is_err());
    }
}
