use std::collections::BTreeMap;

use crate::groups::{GroupAction, Word};
use crate::linalg::field::Field;

/// A finitely supported element `Σ c_g g` of the group algebra `K G`, with
/// group elements written as words. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalCombination<F: Field> {
    field: F,
    terms: BTreeMap<Word, F::Elem>,
}

impl<F: Field> FormalCombination<F> {
    pub fn new(field: F) -> Self {
        FormalCombination {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(field: F, terms: impl IntoIterator<Item = (Word, F::Elem)>) -> Self {
        let mut c = Self::new(field);
        for (w, x) in terms {
            c.add_term(w, x);
        }
        c
    }

    pub fn add_term(&mut self, word: Word, coef: F::Elem) {
        let sum = match self.terms.get(&word) {
            Some(old) => self.field.add(old, &coef),
            None => coef,
        };
        if self.field.is_zero(&sum) {
            self.terms.remove(&word);
        } else {
            self.terms.insert(word, sum);
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F::Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The group elements carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<Word> {
        self.terms.keys().cloned().collect()
    }

    pub fn render(&self, action: &dyn GroupAction) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                format!(
                    "{}*[{}]",
                    crate::linalg::field::describe(&self.field, c),
                    w.render(action)
                )
            })
            .collect();
        parts.join(" + ")
    }
}

/// Something a subspace can be multiplied by on the right: a group element or
/// an element of the group algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier<F: Field> {
    Element(Word),
    Combination(FormalCombination<F>),
}

impl<F: Field> Multiplier<F> {
    pub fn render(&self, action: &dyn GroupAction) -> String {
        match self {
            Multiplier::Element(w) => w.render(action),
            Multiplier::Combination(c) => c.render(action),
        }
    }

    /// Group elements in the support: the element itself, or the support of
    /// the combination.
    pub fn support(&self) -> Vec<Word> {
        match self {
            Multiplier::Element(w) => vec![w.clone()],
            Multiplier::Combination(c) => c.support(),
        }
    }
}

impl<F: Field> From<Word> for Multiplier<F> {
    fn from(w: Word) -> Self {
        Multiplier::Element(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::PrimeField;

    #[test]
    fn zero_terms_dropped() {
        let f = PrimeField::new(3).unwrap();
        let mut c = FormalCombination::new(f);
        c.add_term(Word::generator(0), 1);
        c.add_term(Word::generator(1), 2);
        c.add_term(Word::generator(0), 2);
        assert_eq!(c.len(), 1);
        assert_eq!(c.support(), vec![Word::generator(1)]);
    }
}
