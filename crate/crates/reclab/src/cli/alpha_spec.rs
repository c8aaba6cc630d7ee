//! The alpha-specification grammar:
//!
//! ```text
//! spec  := gen | list
//! gen   := name ':' args
//! list  := '[' value (',' value)* ']'
//! value := decimal ['@' digits]
//! ```
//!
//! Known generators: `sqrt:[2,3,5]` (square roots), `chain:N` (the N-1
//! chain frequency ratios), `sqrt-sin:N` (the N chain frequencies
//! themselves), `ratio-of-energies:<file>` (ratios `E_i/E_N` from a
//! spectrum file). Literal list entries must carry an explicit `@digits`
//! precision annotation.

use crate::error::{Error, Result};
use crate::experiments::QuantumSpectrum;
use crate::precision::{parse_hpreal, HPReal};
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    Sqrt(Vec<u64>),
    Chain(usize),
    ChainFrequencies(usize),
    EnergyRatios(PathBuf),
    Literal(Vec<HPReal>),
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("'{}'", c)))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, "integer".to_string()));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "integer in range".to_string()))
    }

    /// One annotated decimal value, ending at ',' or ']'.
    fn value(&mut self) -> Result<HPReal> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| !matches!(c, ',' | ']')) {
            self.pos += 1;
        }
        let token = self.text[start..self.pos].trim_end();
        if token.is_empty() {
            return Err(Error::parse(start, "decimal value".to_string()));
        }
        if !token.contains('@') {
            return Err(Error::parse(
                start,
                "explicit precision annotation ('@digits') on literal values".to_string(),
            ));
        }
        parse_hpreal(token, start)
    }
}

impl AlphaSpec {
    pub fn parse(text: &str) -> Result<AlphaSpec> {
        let mut s = Scanner::new(text);
        s.skip_ws();
        let spec = match s.peek() {
            Some('[') => {
                s.expect('[')?;
                let mut values = vec![s.value()?];
                loop {
                    s.skip_ws();
                    match s.peek() {
                        Some(',') => {
                            s.expect(',')?;
                            values.push(s.value()?);
                        }
                        Some(']') => {
                            s.expect(']')?;
                            break;
                        }
                        _ => return Err(Error::parse(s.pos, "',' or ']'".to_string())),
                    }
                }
                AlphaSpec::Literal(values)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = s.pos;
                while s
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
                {
                    s.pos += 1;
                }
                let name = &s.text[start..s.pos];
                s.expect(':')?;
                match name {
                    "sqrt" => {
                        s.skip_ws();
                        s.expect('[')?;
                        let mut args = vec![s.integer()?];
                        loop {
                            s.skip_ws();
                            match s.peek() {
                                Some(',') => {
                                    s.expect(',')?;
                                    args.push(s.integer()?);
                                }
                                Some(']') => {
                                    s.expect(']')?;
                                    break;
                                }
                                _ => return Err(Error::parse(s.pos, "',' or ']'".to_string())),
                            }
                        }
                        AlphaSpec::Sqrt(args)
                    }
                    "chain" => {
                        let n = s.integer()? as usize;
                        if n < 2 {
                            return Err(Error::parse(s.pos, "chain size >= 2".to_string()));
                        }
                        AlphaSpec::Chain(n)
                    }
                    "sqrt-sin" => {
                        let n = s.integer()? as usize;
                        if n < 2 {
                            return Err(Error::parse(s.pos, "chain size >= 2".to_string()));
                        }
                        AlphaSpec::ChainFrequencies(n)
                    }
                    "ratio-of-energies" => {
                        let path = s.rest().trim();
                        if path.is_empty() {
                            return Err(Error::parse(s.pos, "file path".to_string()));
                        }
                        let spec = AlphaSpec::EnergyRatios(PathBuf::from(path));
                        s.pos = s.text.len();
                        spec
                    }
                    other => {
                        return Err(Error::parse(
                            start,
                            format!(
                            "known generator (sqrt, chain, sqrt-sin, ratio-of-energies), got '{}'",
                            other
                        ),
                        ))
                    }
                }
            }
            _ => {
                return Err(Error::parse(
                    s.pos,
                    "generator name or '[' literal list".to_string(),
                ))
            }
        };
        s.skip_ws();
        if s.pos != s.text.len() {
            return Err(Error::parse(s.pos, "end of input".to_string()));
        }
        Ok(spec)
    }

    /// Materialize the values at the requested precision (literals keep
    /// their own annotations).
    pub fn resolve(&self, digits: u32) -> Result<Vec<HPReal>> {
        match self {
            AlphaSpec::Sqrt(args) => args
                .iter()
                .map(|&r| HPReal::from_i64(r as i64).sqrt(digits))
                .collect(),
            AlphaSpec::Chain(n) => crate::chain::frequency_ratios(*n, digits),
            AlphaSpec::ChainFrequencies(n) => crate::chain::frequencies(*n, digits),
            AlphaSpec::EnergyRatios(path) => {
                let text = std::fs::read_to_string(path)?;
                let spec: QuantumSpectrum = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("spectrum file: {}", e)))?;
                let top = spec.energies.last().expect("validated nonempty");
                spec.energies[..spec.energies.len() - 1]
                    .iter()
                    .map(|e| e.div(top, digits))
                    .collect()
            }
            AlphaSpec::Literal(values) => Ok(values.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        assert_eq!(
            AlphaSpec::parse("sqrt:[2,3,5]").unwrap(),
            AlphaSpec::Sqrt(vec![2, 3, 5])
        );
        assert_eq!(AlphaSpec::parse("chain:15").unwrap(), AlphaSpec::Chain(15));
        assert_eq!(
            AlphaSpec::parse("sqrt-sin:5").unwrap(),
            AlphaSpec::ChainFrequencies(5)
        );
        assert_eq!(
            AlphaSpec::parse("ratio-of-energies:spec.json").unwrap(),
            AlphaSpec::EnergyRatios(PathBuf::from("spec.json"))
        );
    }

    #[test]
    fn parses_literals() {
        let spec = AlphaSpec::parse("[1.4142135624@11, 1.7320508076@11]").unwrap();
        match spec {
            AlphaSpec::Literal(vals) => {
                assert_eq!(vals.len(), 2);
                assert_eq!(vals[0].precision(), Some(11));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn rejects_unknown_generators_with_position() {
        let err = AlphaSpec::parse("sqrtsin:5").unwrap_err();
        match err {
            Error::Parse { position, expected } => {
                assert_eq!(position, 0);
                assert!(expected.contains("known generator"));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn rejects_unannotated_literals() {
        let err = AlphaSpec::parse("[1.4142]").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(AlphaSpec::parse("chain:15 x").is_err());
        assert!(AlphaSpec::parse("").is_err());
        assert!(AlphaSpec::parse("[1.5@2,]").is_err());
    }

    #[test]
    fn chain_resolves_to_ratios() {
        let vals = AlphaSpec::parse("chain:15").unwrap().resolve(60).unwrap();
        assert_eq!(vals.len(), 14);
        // ascending, all below 1
        for w in vals.windows(2) {
            assert_eq!(w[0].value_cmp(&w[1]), std::cmp::Ordering::Less);
        }
        assert_eq!(vals[13].value_cmp(&HPReal::one()), std::cmp::Ordering::Less);
    }

    #[test]
    fn sqrt_sin_resolves_to_frequencies() {
        let vals = AlphaSpec::parse("sqrt-sin:5").unwrap().resolve(60).unwrap();
        assert_eq!(vals.len(), 5);
        // omega_5 = 2 sin(5 pi / 12) ~ 1.93185
        let expected: HPReal = "1.9318516525781365734994863994578".parse().unwrap();
        assert!(vals[4].sub(&expected).abs().abs_le_pow10(-28));
    }
}
