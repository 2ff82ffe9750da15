//! Text form of words: `a^2*b^-1*a`, with `*` or whitespace between
//! syllables; `e` (or the empty string) is the identity.

use super::element::{GroupElement, Syllable};
use super::model::GroupModel;
use crate::error::{Error, Result};

impl GroupModel {
    /// Parse a word and return its normal form.
    pub fn parse_word(&self, text: &str) -> Result<GroupElement> {
        let mut sylls = Vec::new();
        for token in text.split(|c: char| c == '*' || c.is_whitespace()) {
            let token = token.trim();
            if token.is_empty() || token == "e" || token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e.parse().map_err(|_| {
                        Error::Input(format!("bad exponent '{e}' in word token '{token}'"))
                    })?;
                    (n, exp)
                }
                None => (token, 1),
            };
            let gen = self
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            sylls.push(Syllable::new(gen, exp));
        }
        self.normal_form(&sylls)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let f2 = GroupModel::free(2).unwrap();
        for text in ["e", "a", "a^-1", "a^2*b^-1", "b*a*b^-1*a^-1"] {
            let g = f2.parse_word(text).unwrap();
            let again = f2.parse_word(&f2.display(&g)).unwrap();
            assert_eq!(g, again);
        }
    }

    #[test]
    fn parse_reduces() {
        let f2 = GroupModel::free(2).unwrap();
        assert!(f2.parse_word("a*a^-1").unwrap().is_identity());
        assert_eq!(f2.display(&f2.parse_word("a a a").unwrap()), "a^3");
    }

    #[test]
    fn unknown_generator_is_an_input_error() {
        let f2 = GroupModel::free(2).unwrap();
        assert!(f2.parse_word("q^2").is_err());
        assert!(f2.parse_word("a^x").is_err());
    }
}
