use std::sync::Arc;

use super::AutomatonError;

/// Index of a symbol inside an [`Alphabet`].
pub type Symbol = usize;

/// Printable name of the padding symbol in pair alphabets.
pub const PAD_NAME: &str = "~";

/// An ordered, finite set of named symbols.
///
/// A pair alphabet is the convolution alphabet over some base alphabet: every
/// `(a, b)` with `a, b` in the base or padding, except `(pad, pad)`. Pair
/// symbols are laid out row-major with padding as the last row and column, so
/// `(pad, pad)` is the single index that falls off the end.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    pair_base: Option<Arc<Alphabet>>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name == PAD_NAME || name.contains('|') || name.contains(char::is_whitespace) {
                return Err(AutomatonError::ReservedSymbol(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(AutomatonError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Self { names, pair_base: None })
    }

    /// The convolution alphabet over `base`.
    pub fn pairs(base: &Arc<Alphabet>) -> Self {
        let n = base.len();
        let name = |s: Symbol| if s == n { PAD_NAME } else { base.name(s) };
        let mut names = Vec::with_capacity((n + 1) * (n + 1) - 1);
        for a in 0..=n {
            for b in 0..=n {
                if a == n && b == n {
                    continue;
                }
                names.push(format!("{}|{}", name(a), name(b)));
            }
        }
        Self { names, pair_base: Some(base.clone()) }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name)
    }

    pub fn symbols(&self) -> std::ops::Range<Symbol> {
        0..self.names.len()
    }

    pub fn is_pair(&self) -> bool {
        self.pair_base.is_some()
    }

    pub fn pair_base(&self) -> Option<&Arc<Alphabet>> {
        self.pair_base.as_ref()
    }

    fn base_len(&self) -> Result<usize, AutomatonError> {
        self.pair_base.as_ref().map(|b| b.len()).ok_or(AutomatonError::NotPairAlphabet)
    }

    /// Pair symbol for `(a, b)`; `None` stands for padding.
    ///
    /// Panics if both coordinates are padding or this is not a pair alphabet.
    pub fn pair(&self, a: Option<Symbol>, b: Option<Symbol>) -> Symbol {
        let n = self.base_len().expect("pair() on a plain alphabet");
        assert!(a.is_some() || b.is_some(), "(pad, pad) is not a pair symbol");
        a.unwrap_or(n) * (n + 1) + b.unwrap_or(n)
    }

    /// Inverse of [`Alphabet::pair`].
    pub fn unpair(&self, sym: Symbol) -> (Option<Symbol>, Option<Symbol>) {
        let n = self.base_len().expect("unpair() on a plain alphabet");
        let (a, b) = (sym / (n + 1), sym % (n + 1));
        ((a != n).then_some(a), (b != n).then_some(b))
    }

    /// All pair symbols whose first coordinate is `a`, in increasing order.
    pub(crate) fn pair_row(&self, a: Option<Symbol>) -> std::ops::Range<Symbol> {
        let n = self.base_len().expect("pair_row() on a plain alphabet");
        let start = a.unwrap_or(n) * (n + 1);
        let end = if a.is_none() { start + n } else { start + n + 1 };
        start..end
    }
}
