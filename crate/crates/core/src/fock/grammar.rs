//! Textual form of Fock elements.
//!
//! ```text
//! element := term ('+' term)*        (or the literal `0`)
//! term    := rational '*' factor* ':E[' rational ',' rational ']'
//! factor  := ('g'|'d') '[-' posint ']'
//! ```
//!
//! Serialization lists sectors in lattice-vector order and monomials in
//! canonical order, joined by ` + `. It is the format of golden files and of
//! every witness in a report.

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::rational::{fmt_rational, parse_rational, Rational};

use super::{Direction, FockElement, HeisenbergFactor, Monomial};

pub fn serialize(x: &FockElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = x
        .terms()
        .map(|(m, mu, c)| format!("{}*{}:E[{},{}]", fmt_rational(c), m, fmt_rational(&mu.g), fmt_rational(&mu.d)))
        .collect();
    terms.join(" + ")
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.digits()?;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        match parse_rational(text) {
            Some(r) => Ok(r),
            None => Err(Error::Syntax { pos: start, msg: format!("invalid rational `{text}`") }),
        }
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse().map_err(|_| Error::Syntax { pos: start, msg: "integer out of range".into() })
    }

    fn term(&mut self) -> Result<(Monomial, LatticeVector, Rational)> {
        let coeff = self.rational()?;
        self.expect("*")?;
        let mut factors = Vec::new();
        loop {
            let dir = match self.peek() {
                Some(b'g') => Direction::Gamma,
                Some(b'd') => Direction::Delta,
                Some(b':') => break,
                _ => return self.err("expected factor `g[-n]`, `d[-n]` or `:E[`"),
            };
            self.pos += 1;
            self.expect("[-")?;
            let at = self.pos;
            let level = self.digits()?;
            if level == 0 || level > u32::MAX as u64 {
                return Err(Error::Syntax { pos: at, msg: "factor level must be a positive integer".into() });
            }
            self.expect("]")?;
            factors.push(HeisenbergFactor::new(dir, level as u32));
        }
        self.expect(":E[")?;
        let g = self.rational()?;
        self.expect(",")?;
        let d = self.rational()?;
        self.expect("]")?;
        Ok((Monomial::from_factors(factors), LatticeVector::new(g, d), coeff))
    }
}

/// Parses the element grammar; errors carry the byte offset of the problem.
pub fn parse_element(text: &str) -> Result<FockElement> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    cur.skip_ws();
    if text.trim() == "0" {
        return Ok(FockElement::zero());
    }
    let mut out = FockElement::zero();
    loop {
        cur.skip_ws();
        let (m, mu, c) = cur.term()?;
        out.add_term(m, mu, c);
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b'+') => cur.pos += 1,
            Some(_) => return cur.err("expected `+` or end of input"),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_element("1*:E[0,0]").unwrap(), FockElement::vacuum());
        let f = parse_element("-4*g[-1]g[-1]:E[-3,3] + 2/3*g[-2]:E[-3,3]").unwrap();
        let mu = LatticeVector::ints(-3, 3);
        assert_eq!(f.coefficient(&Monomial::from_factors(vec![HeisenbergFactor::gamma(1); 2]), &mu), qi(-4));
        assert_eq!(f.coefficient(&Monomial::from_factors(vec![HeisenbergFactor::gamma(2)]), &mu), q(2, 3));
        assert_eq!(serialize(&f), "-4*g[-1]g[-1]:E[-3,3] + 2/3*g[-2]:E[-3,3]");
        assert_eq!(parse_element("0").unwrap(), FockElement::zero());
        assert_eq!(serialize(&FockElement::zero()), "0");
    }

    #[test]
    fn syntax_errors_report_positions() {
        match parse_element("1*x[-1]:E[0,0]") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        for bad in ["", "1*g[-0]:E[0,0]", "1*g[1]:E[0,0]", "1*:E[0,0] +", "1:E[0,0]", "1*:E[0,0] 2"] {
            assert!(parse_element(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rational_sectors_are_accepted() {
        let x = parse_element("3/2*d[-1]:E[-1/3,2/3]").unwrap();
        assert_eq!(serialize(&x), "3/2*d[-1]:E[-1/3,2/3]");
    }

    proptest! {
        #[test]
        fn serialize_parse_roundtrip(
            terms in proptest::collection::vec(
                (proptest::collection::vec((any::<bool>(), 1u32..5), 0..4), -4i64..5, -4i64..5, -9i64..10, 1i64..5),
                0..6,
            )
        ) {
            let raw = terms
                .into_iter()
                .map(|(fs, a, b, n, d)| {
                    let fs = fs
                        .into_iter()
                        .map(|(gam, l)| if gam { HeisenbergFactor::gamma(l) } else { HeisenbergFactor::delta(l) })
                        .collect();
                    (fs, LatticeVector::new(q(a, 2), qi(b)), q(n, d))
                })
                .collect();
            let x = FockElement::from_raw_terms(raw);
            let text = serialize(&x);
            let back = parse_element(&text).unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(serialize(&back), text);
        }
    }
}
